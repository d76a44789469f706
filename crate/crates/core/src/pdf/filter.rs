//! Stream filters. Only FlateDecode is supported; anything else is
//! reported so the caller can route the page to the image-based path.

use std::io::Read;

use flate2::read::ZlibDecoder;

use super::object::{PdfStream, PdfValue};
use super::PdfError;

#[derive(Debug, Clone, PartialEq)]
pub struct ContentStream {
    pub raw: Vec<u8>,
    pub filters: Vec<String>,
    pub decoded: Option<Vec<u8>>,
}

impl ContentStream {
    pub fn new(raw: Vec<u8>, filters: Vec<String>) -> Self {
        ContentStream { raw, filters, decoded: None }
    }

    pub fn from_stream(stream: &PdfStream) -> Self {
        let filters = match stream.dict.get("Filter") {
            Some(PdfValue::Name(n)) => vec![n.clone()],
            Some(PdfValue::Array(items)) => {
                items.iter().filter_map(|v| v.as_name().map(str::to_string)).collect()
            }
            _ => Vec::new(),
        };
        ContentStream::new(stream.raw.clone(), filters)
    }

    /// Decode in place; afterwards `decoded` is set.
    pub fn decode(&mut self) -> Result<&[u8], PdfError> {
        if self.decoded.is_none() {
            self.decoded = Some(decode_stream(self)?);
        }
        Ok(self.decoded.as_deref().unwrap_or_default())
    }
}

pub fn is_supported_filter(name: &str) -> bool {
    matches!(name, "FlateDecode" | "Fl")
}

/// Apply the stream's filter chain. Already-decoded streams return their
/// decoded bytes unchanged.
pub fn decode_stream(stream: &ContentStream) -> Result<Vec<u8>, PdfError> {
    if let Some(done) = &stream.decoded {
        return Ok(done.clone());
    }
    if let Some(bad) = stream.filters.iter().find(|f| !is_supported_filter(f)) {
        return Err(PdfError::UnsupportedFilter(bad.clone()));
    }
    let mut data = stream.raw.clone();
    for _ in &stream.filters {
        data = inflate(&data)?;
    }
    Ok(data)
}

fn inflate(data: &[u8]) -> Result<Vec<u8>, PdfError> {
    let mut out = Vec::new();
    match ZlibDecoder::new(data).read_to_end(&mut out) {
        Ok(_) => Ok(out),
        // Truncated streams are common; keep whatever inflated cleanly.
        Err(_) if !out.is_empty() => Ok(out),
        Err(e) => Err(PdfError::Decode(e.to_string())),
    }
}
