//! PDF object values.

use std::collections::BTreeMap;
use std::fmt;

/// Dictionary keys are stored without the leading `/`.
pub type Dict = BTreeMap<String, PdfValue>;

/// Indirect object identifier: object number and generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjRef {
    pub num: u32,
    pub gen: u16,
}

impl ObjRef {
    pub fn new(num: u32, gen: u16) -> Self {
        ObjRef { num, gen }
    }
}

impl fmt::Display for ObjRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} R", self.num, self.gen)
    }
}

/// A stream object: its dictionary and the undecoded bytes between
/// `stream` and `endstream`.
#[derive(Debug, Clone, PartialEq)]
pub struct PdfStream {
    pub dict: Dict,
    pub raw: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PdfValue {
    Null,
    Bool(bool),
    /// All numbers are kept as `f64`; use [`PdfValue::as_int`] where an
    /// integer is required.
    Number(f64),
    /// String bytes, literal or hex, after escape processing.
    String(Vec<u8>),
    Name(String),
    Array(Vec<PdfValue>),
    Dict(Dict),
    Ref(ObjRef),
    Stream(PdfStream),
}

impl PdfValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            PdfValue::Number(n) => Some(*n),
            _ => None,
        }
    }

    /// Integer view of a number; `None` for non-integral values.
    pub fn as_int(&self) -> Option<i64> {
        match self {
            PdfValue::Number(n) if n.fract() == 0.0 && n.abs() < 9.0e15 => Some(*n as i64),
            _ => None,
        }
    }

    pub fn as_name(&self) -> Option<&str> {
        match self {
            PdfValue::Name(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_dict(&self) -> Option<&Dict> {
        match self {
            PdfValue::Dict(d) => Some(d),
            PdfValue::Stream(s) => Some(&s.dict),
            _ => None,
        }
    }

    pub fn as_array(&self) -> Option<&[PdfValue]> {
        match self {
            PdfValue::Array(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_bytes(&self) -> Option<&[u8]> {
        match self {
            PdfValue::String(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_ref(&self) -> Option<ObjRef> {
        match self {
            PdfValue::Ref(r) => Some(*r),
            _ => None,
        }
    }

    /// Serialize in PDF syntax. Streams are written as their dictionary
    /// only; the writer handles stream bodies.
    pub fn write_to(&self, out: &mut Vec<u8>) {
        match self {
            PdfValue::Null => out.extend_from_slice(b"null"),
            PdfValue::Bool(b) => out.extend_from_slice(if *b { b"true" } else { b"false" }),
            PdfValue::Number(n) => out.extend_from_slice(format_number(*n).as_bytes()),
            PdfValue::String(s) => write_literal_string(s, out),
            PdfValue::Name(n) => write_name(n, out),
            PdfValue::Array(items) => {
                out.push(b'[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(b' ');
                    }
                    item.write_to(out);
                }
                out.push(b']');
            }
            PdfValue::Dict(d) => write_dict(d, out),
            PdfValue::Stream(s) => write_dict(&s.dict, out),
            PdfValue::Ref(r) => out.extend_from_slice(r.to_string().as_bytes()),
        }
    }
}

/// Shortest decimal that parses back to the same `f64`, without exponent.
pub fn format_number(n: f64) -> String {
    if n == 0.0 {
        return "0".to_string();
    }
    if n.fract() == 0.0 && n.abs() < 1.0e15 {
        return format!("{}", n as i64);
    }
    format!("{}", n)
}

fn write_dict(d: &Dict, out: &mut Vec<u8>) {
    out.extend_from_slice(b"<<");
    for (k, v) in d {
        write_name(k, out);
        out.push(b' ');
        v.write_to(out);
    }
    out.extend_from_slice(b">>");
}

fn write_name(name: &str, out: &mut Vec<u8>) {
    out.push(b'/');
    for &b in name.as_bytes() {
        if b.is_ascii_graphic() && !super::lexer::is_delimiter(b) && b != b'#' {
            out.push(b);
        } else {
            out.extend_from_slice(format!("#{:02X}", b).as_bytes());
        }
    }
}

pub(crate) fn write_literal_string(s: &[u8], out: &mut Vec<u8>) {
    out.push(b'(');
    for &b in s {
        match b {
            b'(' | b')' | b'\\' => {
                out.push(b'\\');
                out.push(b);
            }
            b'\n' => out.extend_from_slice(b"\\n"),
            b'\r' => out.extend_from_slice(b"\\r"),
            _ => out.push(b),
        }
    }
    out.push(b')');
}
