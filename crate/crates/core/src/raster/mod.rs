//! Graphics-only rendering of a page: text operators are dropped, the
//! remaining path operators are interpreted into a scene and rasterized
//! without anti-aliasing, then thresholded so light-gray rules disappear.

mod fill;
mod image;
mod scene;

pub use image::{binarize, to_pbm, to_pgm, BinaryImage, RasterBitmap};
pub use scene::{build_scene, build_scene_sized, Element, FillRule, GraphicsScene, Paint, PathStateError, Segment, Subpath};

use crate::pdf::{OpClass, Operator};

pub const DEFAULT_DPI: u32 = 300;
pub const DEFAULT_INK_THRESHOLD: u8 = 100;
pub const MIN_DPI: u32 = 72;
pub const MAX_DPI: u32 = 600;

/// Drop every text-class operator. Graphics and state operators keep their
/// relative order, so gray levels set before a path still apply to it.
pub fn strip_text_operators(ops: &[Operator]) -> Vec<Operator> {
    ops.iter().filter(|op| op.class != OpClass::Text).cloned().collect()
}

/// Render `scene` at `dpi`. Panics if `dpi` is outside `[MIN_DPI, MAX_DPI]`.
pub fn rasterize(scene: &GraphicsScene, dpi: u32) -> RasterBitmap {
    assert!((MIN_DPI..=MAX_DPI).contains(&dpi), "dpi {dpi} out of range");
    fill::render(scene, dpi)
}
