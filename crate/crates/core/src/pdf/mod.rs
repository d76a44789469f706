//! PDF object graph and content-stream parsing.
//!
//! The supported subset is what form generators and word-processor
//! exports typically produce: classic cross-reference tables, FlateDecode
//! streams and uncompressed objects. Everything else surfaces as a typed
//! error so callers can skip the file instead of crashing.

mod content;
mod document;
mod filter;
pub(crate) mod lexer;
mod object;
pub mod writer;

use thiserror::Error;

pub use content::{classify, serialize_content, tokenize_content, OpClass, Operator};
pub use document::{load_document, DocumentGraph, PageRef};
pub use filter::{decode_stream, is_supported_filter, ContentStream};
pub use object::{format_number, Dict, ObjRef, PdfStream, PdfValue};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PdfError {
    #[error("missing %PDF- header")]
    MalformedHeader,
    #[error("cross-reference table is broken and object scan recovered nothing usable")]
    BrokenXref,
    #[error("encrypted documents are not supported")]
    EncryptedDocument,
    #[error("unsupported stream filter {0}")]
    UnsupportedFilter(String),
    #[error("lex error at byte {offset}: {message}")]
    Lex { offset: usize, message: String },
    #[error("dangling reference {0}")]
    DanglingReference(ObjRef),
    #[error("malformed object: {0}")]
    Malformed(String),
    #[error("document has no pages")]
    NoPages,
    #[error("stream decode failed: {0}")]
    Decode(String),
}
