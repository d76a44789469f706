//! Minimal PDF 1.4 writer: one Courier font, FlateDecode content streams,
//! classic xref table. Used by the synthetic corpus and by tests.

use std::io::Write;

use flate2::write::ZlibEncoder;
use flate2::Compression;

use super::object::{Dict, ObjRef, PdfValue};

enum Body {
    Value(PdfValue),
    Stream(Dict, Vec<u8>),
}

pub struct PdfWriter {
    objects: Vec<Option<Body>>,
    pages: Vec<ObjRef>,
    info: Option<Dict>,
}

const CATALOG: u32 = 1;
const PAGES: u32 = 2;
const FONT: u32 = 3;

impl Default for PdfWriter {
    fn default() -> Self {
        Self::new()
    }
}

impl PdfWriter {
    pub fn new() -> Self {
        let mut w = PdfWriter { objects: Vec::new(), pages: Vec::new(), info: None };
        w.reserve(); // catalog
        w.reserve(); // pages
        let font = dict(&[
            ("Type", name("Font")),
            ("Subtype", name("Type1")),
            ("BaseFont", name("Courier")),
            ("Encoding", name("WinAnsiEncoding")),
        ]);
        let f = w.add(Body::Value(PdfValue::Dict(font)));
        debug_assert_eq!(f.num, FONT);
        w
    }

    fn reserve(&mut self) -> ObjRef {
        self.objects.push(None);
        ObjRef::new(self.objects.len() as u32, 0)
    }

    fn add(&mut self, body: Body) -> ObjRef {
        self.objects.push(Some(body));
        ObjRef::new(self.objects.len() as u32, 0)
    }

    pub fn set_info(&mut self, info: Dict) {
        self.info = Some(info);
    }

    /// Append a page whose single content stream is `content`.
    pub fn add_page(&mut self, width: f64, height: f64, content: &[u8], compress: bool) -> usize {
        let stream = if compress {
            let mut enc = ZlibEncoder::new(Vec::new(), Compression::default());
            enc.write_all(content).expect("in-memory write");
            let data = enc.finish().expect("in-memory write");
            Body::Stream(dict(&[("Filter", name("FlateDecode"))]), data)
        } else {
            Body::Stream(Dict::new(), content.to_vec())
        };
        let contents = self.add(stream);
        let font_res = dict(&[("F1", PdfValue::Ref(ObjRef::new(FONT, 0)))]);
        let resources = dict(&[("Font", PdfValue::Dict(font_res))]);
        self.push_page(width, height, contents, resources)
    }

    /// Append a scanned-style page: a single image XObject painted over
    /// the whole page, no text.
    pub fn add_image_page(&mut self, width: f64, height: f64) -> usize {
        let image = self.add(Body::Stream(
            dict(&[
                ("Type", name("XObject")),
                ("Subtype", name("Image")),
                ("Width", PdfValue::Number(8.0)),
                ("Height", PdfValue::Number(8.0)),
                ("ColorSpace", name("DeviceGray")),
                ("BitsPerComponent", PdfValue::Number(8.0)),
                ("Filter", name("DCTDecode")),
            ]),
            vec![0xff, 0xd8, 0xff, 0xe0, 0x00, 0x10, 0xff, 0xd9],
        ));
        let content = format!("q {} 0 0 {} 0 0 cm /Im0 Do Q\n", width, height);
        let contents = self.add(Body::Stream(Dict::new(), content.into_bytes()));
        let xobj = dict(&[("Im0", PdfValue::Ref(image))]);
        let resources = dict(&[("XObject", PdfValue::Dict(xobj))]);
        self.push_page(width, height, contents, resources)
    }

    fn push_page(&mut self, width: f64, height: f64, contents: ObjRef, resources: Dict) -> usize {
        let page = dict(&[
            ("Type", name("Page")),
            ("Parent", PdfValue::Ref(ObjRef::new(PAGES, 0))),
            (
                "MediaBox",
                PdfValue::Array(vec![
                    PdfValue::Number(0.0),
                    PdfValue::Number(0.0),
                    PdfValue::Number(width),
                    PdfValue::Number(height),
                ]),
            ),
            ("Resources", PdfValue::Dict(resources)),
            ("Contents", PdfValue::Ref(contents)),
        ]);
        let r = self.add(Body::Value(PdfValue::Dict(page)));
        self.pages.push(r);
        self.pages.len() - 1
    }

    pub fn finish(mut self) -> Vec<u8> {
        let kids = self.pages.iter().map(|r| PdfValue::Ref(*r)).collect();
        self.objects[(PAGES - 1) as usize] = Some(Body::Value(PdfValue::Dict(dict(&[
            ("Type", name("Pages")),
            ("Kids", PdfValue::Array(kids)),
            ("Count", PdfValue::Number(self.pages.len() as f64)),
        ]))));
        self.objects[(CATALOG - 1) as usize] = Some(Body::Value(PdfValue::Dict(dict(&[
            ("Type", name("Catalog")),
            ("Pages", PdfValue::Ref(ObjRef::new(PAGES, 0))),
        ]))));
        let info_ref = self.info.take().map(|d| self.add(Body::Value(PdfValue::Dict(d))));

        let mut out = b"%PDF-1.4\n%\xe2\xe3\xcf\xd3\n".to_vec();
        let mut offsets = Vec::with_capacity(self.objects.len());
        for (i, body) in self.objects.iter().enumerate() {
            offsets.push(out.len());
            out.extend_from_slice(format!("{} 0 obj\n", i + 1).as_bytes());
            match body {
                Some(Body::Value(v)) => v.write_to(&mut out),
                Some(Body::Stream(d, data)) => {
                    let mut d = d.clone();
                    d.insert("Length".into(), PdfValue::Number(data.len() as f64));
                    PdfValue::Dict(d).write_to(&mut out);
                    out.extend_from_slice(b"\nstream\n");
                    out.extend_from_slice(data);
                    out.extend_from_slice(b"\nendstream");
                }
                None => PdfValue::Null.write_to(&mut out),
            }
            out.extend_from_slice(b"\nendobj\n");
        }
        let xref_at = out.len();
        out.extend_from_slice(format!("xref\n0 {}\n", self.objects.len() + 1).as_bytes());
        out.extend_from_slice(b"0000000000 65535 f \n");
        for off in offsets {
            out.extend_from_slice(format!("{:010} 00000 n \n", off).as_bytes());
        }
        let mut trailer = dict(&[
            ("Size", PdfValue::Number((self.objects.len() + 1) as f64)),
            ("Root", PdfValue::Ref(ObjRef::new(CATALOG, 0))),
        ]);
        if let Some(r) = info_ref {
            trailer.insert("Info".into(), PdfValue::Ref(r));
        }
        out.extend_from_slice(b"trailer\n");
        PdfValue::Dict(trailer).write_to(&mut out);
        out.extend_from_slice(format!("\nstartxref\n{}\n%%EOF\n", xref_at).as_bytes());
        out
    }
}

fn name(n: &str) -> PdfValue {
    PdfValue::Name(n.to_string())
}

fn dict(entries: &[(&str, PdfValue)]) -> Dict {
    entries.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}
