/// Grayscale page image, row-major, 255 = white.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterBitmap {
    pub width: usize,
    pub height: usize,
    pub dpi: u32,
    pub luminance: Vec<u8>,
}

impl RasterBitmap {
    pub fn blank(width: usize, height: usize, dpi: u32) -> Self {
        RasterBitmap { width, height, dpi, luminance: vec![255; width * height] }
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.luminance[y * self.width + x]
    }
}

/// One bit per pixel, rows padded to whole 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    pub width: usize,
    pub height: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize) -> Self {
        let words_per_row = width.div_ceil(64);
        BinaryImage { width, height, words_per_row, bits: vec![0; words_per_row * height] }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut img = BinaryImage::new(width, height);
        for y in 0..height {
            for x in 0..width {
                if f(x, y) {
                    img.set(x, y, true);
                }
            }
        }
        img
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        let w = self.bits[y * self.words_per_row + x / 64];
        (w >> (x % 64)) & 1 == 1
    }

    pub fn set(&mut self, x: usize, y: usize, on: bool) {
        let w = &mut self.bits[y * self.words_per_row + x / 64];
        if on {
            *w |= 1 << (x % 64);
        } else {
            *w &= !(1 << (x % 64));
        }
    }

    /// Words of row `y`; bits past `width` are always zero.
    pub fn row_words(&self, y: usize) -> &[u64] {
        &self.bits[y * self.words_per_row..(y + 1) * self.words_per_row]
    }

    /// Number of foreground pixels.
    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Maximal horizontal runs of foreground in row `y` as `[start, end)`.
    pub fn runs(&self, y: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start: Option<usize> = None;
        for (i, &word) in self.row_words(y).iter().enumerate() {
            if word == 0 && start.is_none() {
                continue;
            }
            if word == u64::MAX && start.is_some() {
                continue;
            }
            for b in 0..64 {
                let on = (word >> b) & 1 == 1;
                let x = i * 64 + b;
                match (on, start) {
                    (true, None) => start = Some(x),
                    (false, Some(s)) => {
                        out.push((s, x));
                        start = None;
                    }
                    _ => {}
                }
            }
        }
        if let Some(s) = start {
            out.push((s, self.width));
        }
        out
    }
}

/// Foreground wherever luminance is at most `ink_threshold`.
pub fn binarize(bitmap: &RasterBitmap, ink_threshold: u8) -> BinaryImage {
    let mut img = BinaryImage::new(bitmap.width, bitmap.height);
    for (y, row) in bitmap.luminance.chunks_exact(bitmap.width.max(1)).enumerate().take(bitmap.height) {
        let words = &mut img.bits[y * img.words_per_row..(y + 1) * img.words_per_row];
        for (x, &l) in row.iter().enumerate() {
            if l <= ink_threshold {
                words[x / 64] |= 1 << (x % 64);
            }
        }
    }
    img
}

/// Binary PGM (P5).
pub fn to_pgm(bitmap: &RasterBitmap) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", bitmap.width, bitmap.height).into_bytes();
    out.extend_from_slice(&bitmap.luminance);
    out
}

/// Binary PBM (P4); 1 bits are ink.
pub fn to_pbm(img: &BinaryImage) -> Vec<u8> {
    let mut out = format!("P4\n{} {}\n", img.width, img.height).into_bytes();
    let row_bytes = img.width.div_ceil(8);
    for y in 0..img.height {
        let mut row = vec![0u8; row_bytes];
        for x in 0..img.width {
            if img.get(x, y) {
                row[x / 8] |= 0x80 >> (x % 8);
            }
        }
        out.extend_from_slice(&row);
    }
    out
}
