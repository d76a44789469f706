use std::collections::{BTreeMap, BTreeSet};
use std::sync::LazyLock;

use log::debug;
use regex::bytes::Regex;

use super::content::{tokenize_content, Operator};
use super::filter::{decode_stream, ContentStream};
use super::lexer::{ObjectParser, Token};
use super::object::{Dict, ObjRef, PdfStream, PdfValue};
use super::PdfError;

const DEFAULT_MEDIA_BOX: [f64; 4] = [0.0, 0.0, 612.0, 792.0];
const MAX_PAGE_TREE_DEPTH: usize = 32;

static OBJ_HEADER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?-u)(\d{1,10})[\x00\t\n\x0c\r ]+(\d{1,5})[\x00\t\n\x0c\r ]+obj\b").unwrap());

/// A leaf of the page tree with inherited attributes already applied.
#[derive(Debug, Clone, PartialEq)]
pub struct PageRef {
    pub index: usize,
    pub object: ObjRef,
    pub media_box: [f64; 4],
    pub resources: Dict,
    pub contents: Vec<ObjRef>,
}

impl PageRef {
    pub fn width(&self) -> f64 {
        (self.media_box[2] - self.media_box[0]).abs()
    }

    pub fn height(&self) -> f64 {
        (self.media_box[3] - self.media_box[1]).abs()
    }
}

/// Parsed object store. Immutable after [`load_document`].
#[derive(Debug, Clone)]
pub struct DocumentGraph {
    pub version: String,
    pub objects: BTreeMap<ObjRef, PdfValue>,
    pub trailer: Dict,
    pub pages: Vec<PageRef>,
    /// Recoverable oddities found while loading (reconstructed xref,
    /// skipped page-tree nodes, ...).
    pub diagnostics: Vec<String>,
}

impl DocumentGraph {
    pub fn get(&self, r: ObjRef) -> Option<&PdfValue> {
        self.objects.get(&r)
    }

    /// Follow references until a direct value is reached.
    pub fn resolve<'a>(&'a self, mut v: &'a PdfValue) -> &'a PdfValue {
        for _ in 0..32 {
            match v {
                PdfValue::Ref(r) => match self.objects.get(r) {
                    Some(next) => v = next,
                    None => return &PdfValue::Null,
                },
                _ => return v,
            }
        }
        &PdfValue::Null
    }

    pub fn resolve_dict<'a>(&'a self, v: &'a PdfValue) -> Option<&'a Dict> {
        self.resolve(v).as_dict()
    }

    /// The document information dictionary, if any.
    pub fn info(&self) -> Option<&Dict> {
        self.trailer.get("Info").and_then(|v| self.resolve_dict(v))
    }

    pub fn content_streams(&self, page: &PageRef) -> Result<Vec<ContentStream>, PdfError> {
        page.contents
            .iter()
            .map(|r| match self.objects.get(r) {
                Some(PdfValue::Stream(s)) => Ok(ContentStream::from_stream(s)),
                _ => Err(PdfError::Malformed(format!("page content {r} is not a stream"))),
            })
            .collect()
    }

    /// Decode and tokenize every content stream of a page, in order.
    pub fn page_operators(&self, page: &PageRef) -> Result<Vec<Operator>, PdfError> {
        let mut bytes = Vec::new();
        for stream in self.content_streams(page)? {
            bytes.extend_from_slice(&decode_stream(&stream)?);
            bytes.push(b'\n');
        }
        tokenize_content(&bytes)
    }

    /// `Subtype` of a named XObject in the page resources.
    pub fn xobject_subtype<'a>(&'a self, page: &'a PageRef, name: &str) -> Option<&'a str> {
        let xobjects = page.resources.get("XObject").and_then(|v| self.resolve_dict(v))?;
        let xobj = self.resolve_dict(xobjects.get(name)?)?;
        xobj.get("Subtype").map(|v| self.resolve(v)).and_then(PdfValue::as_name)
    }

    /// Names of image XObjects declared in the page resources.
    pub fn image_xobjects(&self, page: &PageRef) -> Vec<String> {
        let Some(xobjects) = page.resources.get("XObject").and_then(|v| self.resolve_dict(v)) else {
            return Vec::new();
        };
        xobjects
            .keys()
            .filter(|k| self.xobject_subtype(page, k) == Some("Image"))
            .cloned()
            .collect()
    }
}

/// Parse a PDF byte stream into its object graph.
pub fn load_document(bytes: &[u8]) -> Result<DocumentGraph, PdfError> {
    if !bytes.starts_with(b"%PDF-") {
        return Err(PdfError::MalformedHeader);
    }
    let version: String = bytes[5..]
        .iter()
        .take(8)
        .take_while(|b| b.is_ascii_digit() || **b == b'.')
        .map(|&b| b as char)
        .collect();
    let mut diagnostics = Vec::new();

    let loaded = read_xref_chain(bytes).and_then(|(offsets, trailer)| {
        load_objects(bytes, &offsets).map(|objects| (objects, trailer))
    });
    let (objects, trailer) = match loaded {
        Ok(found) => found,
        Err(reason) => {
            debug!("xref unusable ({reason}); scanning for objects");
            diagnostics.push(format!("cross-reference table reconstructed: {reason}"));
            reconstruct(bytes)?
        }
    };

    if trailer.contains_key("Encrypt") {
        return Err(PdfError::EncryptedDocument);
    }
    check_references(&objects, &trailer)?;

    let mut graph = DocumentGraph { version, objects, trailer, pages: Vec::new(), diagnostics };
    graph.pages = collect_pages(&graph)?;
    if graph.pages.is_empty() {
        return Err(PdfError::NoPages);
    }
    Ok(graph)
}

fn read_xref_chain(bytes: &[u8]) -> Result<(BTreeMap<ObjRef, usize>, Dict), String> {
    let sx = rfind(bytes, b"startxref").ok_or("no startxref")?;
    let mut parser = ObjectParser::new(bytes, sx + b"startxref".len());
    let mut offset = match parser.next() {
        Ok(Some((_, Token::Number(n)))) if n >= 0.0 && n.fract() == 0.0 => n as usize,
        _ => return Err("startxref has no offset".into()),
    };

    let mut entries: BTreeMap<ObjRef, usize> = BTreeMap::new();
    let mut trailer: Option<Dict> = None;
    let mut seen = BTreeSet::new();
    while seen.insert(offset) {
        if offset >= bytes.len() {
            return Err(format!("xref offset {offset} beyond end of file"));
        }
        let mut p = ObjectParser::new(bytes, offset);
        if !p.eat_keyword("xref").map_err(|e| e.to_string())? {
            return Err(format!("no xref table at offset {offset}"));
        }
        loop {
            match p.next().map_err(|e| e.to_string())? {
                Some((_, Token::Keyword(k))) if k == "trailer" => break,
                Some((_, Token::Number(first))) => {
                    let count = match p.next().map_err(|e| e.to_string())? {
                        Some((_, Token::Number(c))) if c >= 0.0 => c as usize,
                        _ => return Err("bad xref subsection header".into()),
                    };
                    if first < 0.0 || count > bytes.len() / 18 + 1 {
                        return Err("xref subsection larger than file".into());
                    }
                    for i in 0..count {
                        let (off, gen, kind) = match (p.next(), p.next(), p.next()) {
                            (
                                Ok(Some((_, Token::Number(o)))),
                                Ok(Some((_, Token::Number(g)))),
                                Ok(Some((_, Token::Keyword(k)))),
                            ) => (o, g, k),
                            _ => return Err("bad xref entry".into()),
                        };
                        let num = first as u64 + i as u64;
                        if kind == "n" && off > 0.0 && num <= u32::MAX as u64 {
                            let r = ObjRef::new(num as u32, gen.clamp(0.0, u16::MAX as f64) as u16);
                            // Newer sections are read first and take precedence.
                            entries.entry(r).or_insert(off as usize);
                        }
                    }
                }
                _ => return Err("malformed xref table".into()),
            }
        }
        let dict = match p.parse_value() {
            Ok(PdfValue::Dict(d)) => d,
            _ => return Err("trailer is not a dictionary".into()),
        };
        let prev = dict.get("Prev").and_then(PdfValue::as_int);
        if trailer.is_none() {
            trailer = Some(dict);
        }
        match prev {
            Some(p) if p >= 0 => offset = p as usize,
            _ => break,
        }
    }
    let trailer = trailer.ok_or("no trailer")?;
    if !trailer.contains_key("Root") {
        return Err("trailer has no Root".into());
    }
    Ok((entries, trailer))
}

fn load_objects(bytes: &[u8], offsets: &BTreeMap<ObjRef, usize>) -> Result<BTreeMap<ObjRef, PdfValue>, String> {
    let mut objects = BTreeMap::new();
    for (&r, &off) in offsets {
        let (found, value) = parse_indirect_at(bytes, off, Some(offsets))
            .map_err(|e| format!("object {r} at offset {off}: {e}"))?;
        if found != r {
            return Err(format!("offset {off} holds {found}, expected {r}"));
        }
        objects.insert(r, value);
    }
    Ok(objects)
}

/// Parse `n g obj <value> [stream ... endstream]` starting at `pos`.
fn parse_indirect_at(
    bytes: &[u8],
    pos: usize,
    offsets: Option<&BTreeMap<ObjRef, usize>>,
) -> Result<(ObjRef, PdfValue), PdfError> {
    let mut p = ObjectParser::new(bytes, pos);
    let header = (p.next()?, p.next()?, p.next()?);
    let r = match header {
        (Some((_, Token::Number(n))), Some((_, Token::Number(g))), Some((_, Token::Keyword(k))))
            if k == "obj" && n >= 0.0 && n <= u32::MAX as f64 && (0.0..=u16::MAX as f64).contains(&g) =>
        {
            ObjRef::new(n as u32, g as u16)
        }
        _ => return Err(PdfError::Malformed("missing object header".into())),
    };
    let value = p.parse_value()?;
    let stream_kw = matches!(p.peek(0)?, Some(Token::Keyword(k)) if k == "stream");
    if !stream_kw {
        return Ok((r, value));
    }
    let PdfValue::Dict(dict) = value else {
        return Err(PdfError::Malformed("stream without dictionary".into()));
    };
    let kw_end = p.pos() + b"stream".len();
    let mut start = kw_end;
    if bytes.get(start) == Some(&b'\r') {
        start += 1;
    }
    if bytes.get(start) == Some(&b'\n') {
        start += 1;
    }
    let declared = match dict.get("Length") {
        Some(PdfValue::Number(n)) if *n >= 0.0 => Some(*n as usize),
        Some(PdfValue::Ref(lr)) => offsets
            .and_then(|o| o.get(lr))
            .and_then(|&off| parse_indirect_at(bytes, off, None).ok())
            .and_then(|(_, v)| v.as_int())
            .filter(|n| *n >= 0)
            .map(|n| n as usize),
        _ => None,
    };
    let end = declared
        .and_then(|len| start.checked_add(len))
        .filter(|&end| end <= bytes.len() && followed_by_endstream(bytes, end))
        .or_else(|| {
            let found = find(&bytes[start.min(bytes.len())..], b"endstream")? + start;
            let mut end = found;
            if end > start && bytes[end - 1] == b'\n' {
                end -= 1;
            }
            if end > start && bytes[end - 1] == b'\r' {
                end -= 1;
            }
            Some(end)
        })
        .ok_or_else(|| PdfError::Malformed(format!("stream {r} has no endstream")))?;
    Ok((r, PdfValue::Stream(PdfStream { dict, raw: bytes[start..end].to_vec() })))
}

fn followed_by_endstream(bytes: &[u8], end: usize) -> bool {
    let mut i = end;
    while i < bytes.len() && super::lexer::is_whitespace(bytes[i]) {
        i += 1;
    }
    bytes[i.min(bytes.len())..].starts_with(b"endstream")
}

/// Rebuild the object table by scanning for `n g obj` headers.
fn reconstruct(bytes: &[u8]) -> Result<(BTreeMap<ObjRef, PdfValue>, Dict), PdfError> {
    let mut objects = BTreeMap::new();
    for m in OBJ_HEADER.find_iter(bytes) {
        if let Ok((r, v)) = parse_indirect_at(bytes, m.start(), None) {
            objects.insert(r, v);
        }
    }
    if objects.is_empty() {
        return Err(PdfError::BrokenXref);
    }

    let has_root = |d: &Dict| d.get("Root").and_then(PdfValue::as_ref).is_some_and(|r| objects.contains_key(&r));
    let mut trailer = rfind(bytes, b"trailer")
        .and_then(|pos| ObjectParser::new(bytes, pos + b"trailer".len()).parse_value().ok())
        .and_then(|v| match v {
            PdfValue::Dict(d) if has_root(&d) => Some(d),
            _ => None,
        });
    if trailer.is_none() {
        let catalog = objects.iter().find(|(_, v)| {
            v.as_dict().and_then(|d| d.get("Type")).and_then(PdfValue::as_name) == Some("Catalog")
        });
        if let Some((r, _)) = catalog {
            let mut d = Dict::new();
            d.insert("Root".into(), PdfValue::Ref(*r));
            trailer = Some(d);
        }
    }
    let mut trailer = trailer.ok_or(PdfError::BrokenXref)?;
    trailer.remove("Prev");
    Ok((objects, trailer))
}

fn check_references(objects: &BTreeMap<ObjRef, PdfValue>, trailer: &Dict) -> Result<(), PdfError> {
    let mut visited = BTreeSet::new();
    let mut stack: Vec<&PdfValue> = trailer.values().collect();
    while let Some(v) = stack.pop() {
        match v {
            PdfValue::Ref(r) => {
                if visited.insert(*r) {
                    stack.push(objects.get(r).ok_or(PdfError::DanglingReference(*r))?);
                }
            }
            PdfValue::Array(items) => stack.extend(items.iter()),
            PdfValue::Dict(d) => stack.extend(d.values()),
            PdfValue::Stream(s) => stack.extend(s.dict.values()),
            _ => {}
        }
    }
    Ok(())
}

fn collect_pages(graph: &DocumentGraph) -> Result<Vec<PageRef>, PdfError> {
    let root = graph
        .trailer
        .get("Root")
        .and_then(|v| graph.resolve_dict(v))
        .ok_or_else(|| PdfError::Malformed("trailer Root is not a dictionary".into()))?;
    let pages_ref = root
        .get("Pages")
        .and_then(PdfValue::as_ref)
        .ok_or_else(|| PdfError::Malformed("catalog has no Pages reference".into()))?;

    let mut out = Vec::new();
    let mut visited = BTreeSet::new();
    let mut skipped = Vec::new();
    walk_pages(graph, pages_ref, None, DEFAULT_MEDIA_BOX, 0, &mut visited, &mut out, &mut skipped);
    if !skipped.is_empty() {
        debug!("skipped page-tree nodes: {skipped:?}");
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn walk_pages(
    graph: &DocumentGraph,
    node_ref: ObjRef,
    inherited_resources: Option<&Dict>,
    inherited_box: [f64; 4],
    depth: usize,
    visited: &mut BTreeSet<ObjRef>,
    out: &mut Vec<PageRef>,
    skipped: &mut Vec<ObjRef>,
) {
    if depth > MAX_PAGE_TREE_DEPTH || !visited.insert(node_ref) {
        skipped.push(node_ref);
        return;
    }
    let Some(node) = graph.get(node_ref).and_then(PdfValue::as_dict) else {
        skipped.push(node_ref);
        return;
    };
    let resources = node.get("Resources").and_then(|v| graph.resolve_dict(v)).or(inherited_resources);
    let media_box = node
        .get("MediaBox")
        .and_then(|v| graph.resolve(v).as_array())
        .and_then(|items| {
            let nums: Vec<f64> = items.iter().filter_map(|i| graph.resolve(i).as_number()).collect();
            (nums.len() == 4).then(|| [nums[0], nums[1], nums[2], nums[3]])
        })
        .unwrap_or(inherited_box);

    match node.get("Type").and_then(PdfValue::as_name) {
        Some("Pages") => {
            let kids = node.get("Kids").map(|v| graph.resolve(v)).and_then(PdfValue::as_array).unwrap_or(&[]);
            for kid in kids {
                match kid.as_ref() {
                    Some(r) => walk_pages(graph, r, resources, media_box, depth + 1, visited, out, skipped),
                    None => skipped.push(node_ref),
                }
            }
        }
        Some("Page") => {
            let contents = match node.get("Contents") {
                Some(PdfValue::Ref(r)) => match graph.get(*r) {
                    Some(PdfValue::Array(items)) => items.iter().filter_map(PdfValue::as_ref).collect(),
                    _ => vec![*r],
                },
                Some(PdfValue::Array(items)) => items.iter().filter_map(PdfValue::as_ref).collect(),
                _ => Vec::new(),
            };
            out.push(PageRef {
                index: out.len(),
                object: node_ref,
                media_box,
                resources: resources.cloned().unwrap_or_default(),
                contents,
            });
        }
        _ => skipped.push(node_ref),
    }
}

fn find(hay: &[u8], needle: &[u8]) -> Option<usize> {
    hay.windows(needle.len()).position(|w| w == needle)
}

fn rfind(hay: &[u8], needle: &[u8]) -> Option<usize> {
    hay.windows(needle.len()).rposition(|w| w == needle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdf::writer::PdfWriter;

    fn one_page_pdf(content: &[u8]) -> Vec<u8> {
        let mut w = PdfWriter::new();
        w.add_page(612.0, 792.0, content, false);
        w.finish()
    }

    #[test]
    fn loads_written_document() {
        let bytes = one_page_pdf(b"BT /F1 10 Tf 72 700 Td (X) Tj ET");
        let doc = load_document(&bytes).unwrap();
        assert_eq!(doc.pages.len(), 1);
        assert!(doc.diagnostics.is_empty());
        assert_eq!(doc.version, "1.4");
        assert_eq!(doc.pages[0].height(), 792.0);
        let ops = doc.page_operators(&doc.pages[0]).unwrap();
        assert_eq!(ops.len(), 5);
    }

    #[test]
    fn empty_input_is_malformed_header() {
        assert_eq!(load_document(b"").unwrap_err(), PdfError::MalformedHeader);
        assert_eq!(load_document(b"hello").unwrap_err(), PdfError::MalformedHeader);
    }

    #[test]
    fn xref_beyond_eof_without_objects_is_broken() {
        let bytes = b"%PDF-1.4\nstartxref\n999999\n%%EOF\n";
        assert_eq!(load_document(bytes).unwrap_err(), PdfError::BrokenXref);
    }

    #[test]
    fn damaged_xref_is_reconstructed() {
        let mut bytes = one_page_pdf(b"0 0 10 10 re f");
        let sx = rfind(&bytes, b"startxref").unwrap();
        bytes.truncate(sx);
        bytes.extend_from_slice(b"startxref\n123456789\n%%EOF\n");
        let doc = load_document(&bytes).unwrap();
        assert_eq!(doc.pages.len(), 1);
        assert_eq!(doc.diagnostics.len(), 1);
    }

    #[test]
    fn shifted_offsets_trigger_reconstruction() {
        let bytes = one_page_pdf(b"0 0 10 10 re f");
        let mut shifted = b"%PDF-1.4\n%junk junk junk\n".to_vec();
        shifted.extend_from_slice(&bytes[9..]);
        let doc = load_document(&shifted).unwrap();
        assert_eq!(doc.pages.len(), 1);
        assert!(!doc.diagnostics.is_empty());
    }

    #[test]
    fn encrypted_is_rejected() {
        let bytes = one_page_pdf(b"");
        let text = String::from_utf8_lossy(&bytes).replace("/Root", "/Encrypt 1 0 R /Root");
        assert_eq!(load_document(text.as_bytes()).unwrap_err(), PdfError::EncryptedDocument);
    }

    #[test]
    fn dangling_reference_is_reported() {
        let bytes = one_page_pdf(b"");
        let text = String::from_utf8_lossy(&bytes).replace("/Root", "/Extra 77 0 R /Root");
        assert_eq!(load_document(text.as_bytes()).unwrap_err(), PdfError::DanglingReference(ObjRef::new(77, 0)));
    }

    #[test]
    fn image_xobject_is_found() {
        let mut w = PdfWriter::new();
        w.add_image_page(612.0, 792.0);
        let doc = load_document(&w.finish()).unwrap();
        assert_eq!(doc.image_xobjects(&doc.pages[0]), vec!["Im0".to_string()]);
    }
}
