//! Content-stream tokenizer and serializer.

use serde::Serialize;

use super::lexer::{Lexer, Token, MAX_DEPTH};
use super::object::{Dict, PdfValue};
use super::PdfError;

/// Operator category used to split a page into text and drawing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OpClass {
    Text,
    Graphics,
    State,
}

const TEXT_OPS: &[&str] = &["BT", "ET", "Tf", "Td", "TD", "Tm", "T*", "Tj", "TJ", "'", "\""];
const GRAPHICS_OPS: &[&str] =
    &["m", "l", "c", "re", "h", "S", "s", "f", "F", "f*", "B", "B*", "b", "b*", "n"];

/// Total classification: anything not listed as text or path/paint is state.
pub fn classify(name: &str) -> OpClass {
    if TEXT_OPS.contains(&name) {
        OpClass::Text
    } else if GRAPHICS_OPS.contains(&name) {
        OpClass::Graphics
    } else {
        OpClass::State
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    pub name: String,
    pub operands: Vec<PdfValue>,
    pub class: OpClass,
}

impl Operator {
    pub fn new(name: impl Into<String>, operands: Vec<PdfValue>) -> Self {
        let name = name.into();
        let class = classify(&name);
        Operator { name, operands, class }
    }

    pub fn number(&self, i: usize) -> Option<f64> {
        self.operands.get(i).and_then(PdfValue::as_number)
    }

    /// The last `N` operands as numbers.
    pub fn numbers<const N: usize>(&self) -> Option<[f64; N]> {
        if self.operands.len() < N {
            return None;
        }
        let tail = &self.operands[self.operands.len() - N..];
        let mut out = [0.0; N];
        for (slot, v) in out.iter_mut().zip(tail) {
            *slot = v.as_number()?;
        }
        Some(out)
    }
}

/// Split decoded content bytes into operators with their operands.
pub fn tokenize_content(decoded: &[u8]) -> Result<Vec<Operator>, PdfError> {
    let mut lexer = Lexer::new(decoded);
    let mut ops = Vec::new();
    let mut operands = Vec::new();
    while let Some((offset, tok)) = lexer.next_token()? {
        match tok {
            Token::Keyword(k) => match k.as_str() {
                "true" => operands.push(PdfValue::Bool(true)),
                "false" => operands.push(PdfValue::Bool(false)),
                "null" => operands.push(PdfValue::Null),
                "BI" => {
                    let params = inline_image_params(&mut lexer, offset)?;
                    let data = inline_image_data(&mut lexer, offset)?;
                    ops.push(Operator::new("BI", vec![PdfValue::Dict(params), PdfValue::String(data)]));
                    operands.clear();
                }
                _ => ops.push(Operator::new(k, std::mem::take(&mut operands))),
            },
            other => operands.push(operand(&mut lexer, offset, other, 0)?),
        }
    }
    Ok(ops)
}

fn operand(lexer: &mut Lexer<'_>, offset: usize, tok: Token, depth: usize) -> Result<PdfValue, PdfError> {
    if depth > MAX_DEPTH {
        return Err(PdfError::Lex { offset, message: "nesting too deep".into() });
    }
    Ok(match tok {
        Token::Number(n) => PdfValue::Number(n),
        Token::Name(n) => PdfValue::Name(n),
        Token::Str(s) => PdfValue::String(s),
        Token::ArrayOpen => {
            let mut items = Vec::new();
            loop {
                match lexer.next_token()? {
                    Some((_, Token::ArrayClose)) => break PdfValue::Array(items),
                    Some((off, t)) => items.push(operand(lexer, off, t, depth + 1)?),
                    None => return Err(PdfError::Lex { offset, message: "unbalanced array".into() }),
                }
            }
        }
        Token::DictOpen => {
            let mut dict = Dict::new();
            loop {
                match lexer.next_token()? {
                    Some((_, Token::DictClose)) => break PdfValue::Dict(dict),
                    Some((_, Token::Name(key))) => {
                        let (off, t) = lexer
                            .next_token()?
                            .ok_or(PdfError::Lex { offset, message: "unbalanced dictionary".into() })?;
                        dict.insert(key, operand(lexer, off, t, depth + 1)?);
                    }
                    Some((off, _)) => {
                        return Err(PdfError::Lex { offset: off, message: "dictionary key must be a name".into() })
                    }
                    None => return Err(PdfError::Lex { offset, message: "unbalanced dictionary".into() }),
                }
            }
        }
        Token::Keyword(k) => match k.as_str() {
            "true" => PdfValue::Bool(true),
            "false" => PdfValue::Bool(false),
            "null" => PdfValue::Null,
            _ => return Err(PdfError::Lex { offset, message: format!("operator '{k}' inside operand") }),
        },
        Token::ArrayClose | Token::DictClose => {
            return Err(PdfError::Lex { offset, message: "unbalanced closing delimiter".into() })
        }
    })
}

fn inline_image_params(lexer: &mut Lexer<'_>, offset: usize) -> Result<Dict, PdfError> {
    let mut params = Dict::new();
    loop {
        match lexer.next_token()? {
            Some((_, Token::Keyword(k))) if k == "ID" => return Ok(params),
            Some((_, Token::Name(key))) => {
                let (off, t) = lexer
                    .next_token()?
                    .ok_or(PdfError::Lex { offset, message: "unterminated inline image".into() })?;
                params.insert(key, operand(lexer, off, t, 1)?);
            }
            _ => return Err(PdfError::Lex { offset, message: "malformed inline image header".into() }),
        }
    }
}

fn inline_image_data(lexer: &mut Lexer<'_>, offset: usize) -> Result<Vec<u8>, PdfError> {
    let data = lexer.data();
    // One whitespace byte separates ID from the image data.
    let start = (lexer.pos() + 1).min(data.len());
    let mut i = start;
    while i + 2 <= data.len() {
        let before_ok = i == start || super::lexer::is_whitespace(data[i - 1]);
        let after_ok = i + 2 == data.len() || super::lexer::is_whitespace(data[i + 2]);
        if &data[i..i + 2] == b"EI" && before_ok && after_ok {
            lexer.set_pos(i + 2);
            let end = if i > start { i - 1 } else { i };
            return Ok(data[start..end].to_vec());
        }
        i += 1;
    }
    Err(PdfError::Lex { offset, message: "inline image without EI".into() })
}

/// Serialize operators back to content-stream syntax, one per line.
pub fn serialize_content(ops: &[Operator]) -> Vec<u8> {
    let mut out = Vec::new();
    for op in ops {
        for v in &op.operands {
            v.write_to(&mut out);
            out.push(b' ');
        }
        out.extend_from_slice(op.name.as_bytes());
        out.push(b'\n');
    }
    out
}
