//! Byte-level lexer shared by the object parser and the content-stream
//! tokenizer.

use std::collections::VecDeque;

use super::object::{Dict, ObjRef, PdfValue};
use super::PdfError;

/// Nesting limit for arrays and dictionaries.
pub(crate) const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Token {
    Number(f64),
    Name(String),
    Str(Vec<u8>),
    ArrayOpen,
    ArrayClose,
    DictOpen,
    DictClose,
    Keyword(String),
}

pub(crate) fn is_whitespace(b: u8) -> bool {
    matches!(b, 0 | b'\t' | b'\n' | 0x0c | b'\r' | b' ')
}

pub(crate) fn is_delimiter(b: u8) -> bool {
    matches!(b, b'(' | b')' | b'<' | b'>' | b'[' | b']' | b'{' | b'}' | b'/' | b'%')
}

fn is_regular(b: u8) -> bool {
    !is_whitespace(b) && !is_delimiter(b)
}

pub(crate) struct Lexer<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Lexer { data, pos: 0 }
    }

    pub fn at(data: &'a [u8], pos: usize) -> Self {
        Lexer { data, pos: pos.min(data.len()) }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn set_pos(&mut self, pos: usize) {
        self.pos = pos.min(self.data.len());
    }

    pub fn data(&self) -> &'a [u8] {
        self.data
    }

    pub fn skip_whitespace(&mut self) {
        while self.pos < self.data.len() {
            let b = self.data[self.pos];
            if is_whitespace(b) {
                self.pos += 1;
            } else if b == b'%' {
                while self.pos < self.data.len() && !matches!(self.data[self.pos], b'\n' | b'\r') {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn lex_error(&self, offset: usize, message: &str) -> PdfError {
        PdfError::Lex { offset, message: message.to_string() }
    }

    /// Next token with the byte offset where it starts.
    pub fn next_token(&mut self) -> Result<Option<(usize, Token)>, PdfError> {
        self.skip_whitespace();
        let start = self.pos;
        let Some(&b) = self.data.get(self.pos) else {
            return Ok(None);
        };
        let tok = match b {
            b'(' => Token::Str(self.literal_string()?),
            b'<' => {
                if self.data.get(self.pos + 1) == Some(&b'<') {
                    self.pos += 2;
                    Token::DictOpen
                } else {
                    Token::Str(self.hex_string()?)
                }
            }
            b'>' => {
                if self.data.get(self.pos + 1) == Some(&b'>') {
                    self.pos += 2;
                    Token::DictClose
                } else {
                    return Err(self.lex_error(start, "stray '>'"));
                }
            }
            b'[' => {
                self.pos += 1;
                Token::ArrayOpen
            }
            b']' => {
                self.pos += 1;
                Token::ArrayClose
            }
            b'/' => {
                self.pos += 1;
                Token::Name(self.name())
            }
            b')' => return Err(self.lex_error(start, "unbalanced ')'")),
            b'{' | b'}' => {
                self.pos += 1;
                Token::Keyword((b as char).to_string())
            }
            b'0'..=b'9' | b'+' | b'-' | b'.' => Token::Number(self.number()),
            _ => {
                while self.pos < self.data.len() && is_regular(self.data[self.pos]) {
                    self.pos += 1;
                }
                Token::Keyword(String::from_utf8_lossy(&self.data[start..self.pos]).into_owned())
            }
        };
        Ok(Some((start, tok)))
    }

    fn number(&mut self) -> f64 {
        let start = self.pos;
        if matches!(self.data[self.pos], b'+' | b'-') {
            self.pos += 1;
        }
        while self.pos < self.data.len() && (self.data[self.pos].is_ascii_digit() || self.data[self.pos] == b'.') {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.data[start..self.pos]).unwrap_or("0");
        // Malformed numbers such as "-" or "1.2.3" read as 0, like most viewers.
        text.parse::<f64>().ok().filter(|n| n.is_finite()).unwrap_or(0.0)
    }

    fn name(&mut self) -> String {
        let mut out = Vec::new();
        while self.pos < self.data.len() && is_regular(self.data[self.pos]) {
            let b = self.data[self.pos];
            if b == b'#' && self.pos + 2 < self.data.len() {
                let hex = &self.data[self.pos + 1..self.pos + 3];
                if let Ok(v) = u8::from_str_radix(std::str::from_utf8(hex).unwrap_or("zz"), 16) {
                    out.push(v);
                    self.pos += 3;
                    continue;
                }
            }
            out.push(b);
            self.pos += 1;
        }
        String::from_utf8_lossy(&out).into_owned()
    }

    fn literal_string(&mut self) -> Result<Vec<u8>, PdfError> {
        let start = self.pos;
        self.pos += 1;
        let mut depth = 1usize;
        let mut out = Vec::new();
        while self.pos < self.data.len() {
            let b = self.data[self.pos];
            self.pos += 1;
            match b {
                b'(' => {
                    depth += 1;
                    out.push(b);
                }
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(out);
                    }
                    out.push(b);
                }
                b'\\' => {
                    let Some(&e) = self.data.get(self.pos) else { break };
                    self.pos += 1;
                    match e {
                        b'n' => out.push(b'\n'),
                        b'r' => out.push(b'\r'),
                        b't' => out.push(b'\t'),
                        b'b' => out.push(0x08),
                        b'f' => out.push(0x0c),
                        b'0'..=b'7' => {
                            let mut v = (e - b'0') as u32;
                            for _ in 0..2 {
                                match self.data.get(self.pos) {
                                    Some(&d @ b'0'..=b'7') => {
                                        v = v * 8 + (d - b'0') as u32;
                                        self.pos += 1;
                                    }
                                    _ => break,
                                }
                            }
                            out.push((v & 0xff) as u8);
                        }
                        b'\r' => {
                            if self.data.get(self.pos) == Some(&b'\n') {
                                self.pos += 1;
                            }
                        }
                        b'\n' => {}
                        other => out.push(other),
                    }
                }
                _ => out.push(b),
            }
        }
        Err(self.lex_error(start, "unterminated literal string"))
    }

    fn hex_string(&mut self) -> Result<Vec<u8>, PdfError> {
        let start = self.pos;
        self.pos += 1;
        let mut digits = Vec::new();
        while self.pos < self.data.len() {
            let b = self.data[self.pos];
            self.pos += 1;
            if b == b'>' {
                if digits.len() % 2 == 1 {
                    digits.push(0);
                }
                return Ok(digits.chunks(2).map(|p| p[0] << 4 | p[1]).collect());
            }
            if is_whitespace(b) {
                continue;
            }
            match (b as char).to_digit(16) {
                Some(v) => digits.push(v as u8),
                None => return Err(self.lex_error(self.pos - 1, "invalid hex digit")),
            }
        }
        Err(self.lex_error(start, "unterminated hex string"))
    }
}

/// Object-syntax parser with two-token lookahead for `n g R` references.
pub(crate) struct ObjectParser<'a> {
    lexer: Lexer<'a>,
    peeked: VecDeque<(usize, Token)>,
}

impl<'a> ObjectParser<'a> {
    pub fn new(data: &'a [u8], pos: usize) -> Self {
        ObjectParser { lexer: Lexer::at(data, pos), peeked: VecDeque::new() }
    }

    /// Byte position after the last consumed token.
    pub fn pos(&self) -> usize {
        match self.peeked.front() {
            Some((off, _)) => *off,
            None => self.lexer.pos(),
        }
    }

    fn fill(&mut self, n: usize) -> Result<(), PdfError> {
        while self.peeked.len() < n {
            match self.lexer.next_token()? {
                Some(t) => self.peeked.push_back(t),
                None => break,
            }
        }
        Ok(())
    }

    pub fn next(&mut self) -> Result<Option<(usize, Token)>, PdfError> {
        self.fill(1)?;
        Ok(self.peeked.pop_front())
    }

    pub fn peek(&mut self, i: usize) -> Result<Option<&Token>, PdfError> {
        self.fill(i + 1)?;
        Ok(self.peeked.get(i).map(|(_, t)| t))
    }

    /// Consume a keyword if it is next.
    pub fn eat_keyword(&mut self, kw: &str) -> Result<bool, PdfError> {
        if let Some(Token::Keyword(k)) = self.peek(0)? {
            if k == kw {
                self.next()?;
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn parse_value(&mut self) -> Result<PdfValue, PdfError> {
        self.parse_value_at(0)
    }

    fn parse_value_at(&mut self, depth: usize) -> Result<PdfValue, PdfError> {
        let Some((offset, tok)) = self.next()? else {
            return Err(PdfError::Malformed("unexpected end of data".into()));
        };
        if depth > MAX_DEPTH {
            return Err(PdfError::Lex { offset, message: "nesting too deep".into() });
        }
        match tok {
            Token::Number(n) => {
                if n.fract() == 0.0 && n >= 0.0 && n <= u32::MAX as f64 {
                    if let (Some(Token::Number(g)), Some(Token::Keyword(r))) =
                        (self.peek(0)?.cloned(), self.peek(1)?.cloned())
                    {
                        if r == "R" && g.fract() == 0.0 && (0.0..=u16::MAX as f64).contains(&g) {
                            self.next()?;
                            self.next()?;
                            return Ok(PdfValue::Ref(ObjRef::new(n as u32, g as u16)));
                        }
                    }
                }
                Ok(PdfValue::Number(n))
            }
            Token::Name(n) => Ok(PdfValue::Name(n)),
            Token::Str(s) => Ok(PdfValue::String(s)),
            Token::ArrayOpen => {
                let mut items = Vec::new();
                loop {
                    match self.peek(0)? {
                        Some(Token::ArrayClose) => {
                            self.next()?;
                            return Ok(PdfValue::Array(items));
                        }
                        None => {
                            return Err(PdfError::Lex { offset, message: "unterminated array".into() })
                        }
                        _ => items.push(self.parse_value_at(depth + 1)?),
                    }
                }
            }
            Token::DictOpen => Ok(PdfValue::Dict(self.parse_dict_body(offset, depth)?)),
            Token::Keyword(k) => match k.as_str() {
                "true" => Ok(PdfValue::Bool(true)),
                "false" => Ok(PdfValue::Bool(false)),
                "null" => Ok(PdfValue::Null),
                _ => Err(PdfError::Lex { offset, message: format!("unexpected keyword '{k}'") }),
            },
            Token::ArrayClose | Token::DictClose => {
                Err(PdfError::Lex { offset, message: "unbalanced closing delimiter".into() })
            }
        }
    }

    fn parse_dict_body(&mut self, offset: usize, depth: usize) -> Result<Dict, PdfError> {
        let mut dict = Dict::new();
        loop {
            match self.next()? {
                Some((_, Token::DictClose)) => return Ok(dict),
                Some((_, Token::Name(key))) => {
                    let value = self.parse_value_at(depth + 1)?;
                    dict.insert(key, value);
                }
                Some((off, _)) => {
                    return Err(PdfError::Lex { offset: off, message: "dictionary key must be a name".into() })
                }
                None => return Err(PdfError::Lex { offset, message: "unterminated dictionary".into() }),
            }
        }
    }
}
