//! CSV and SVG output.

mod csv_out;
mod format;
mod svg;

use std::io;
use std::path::Path;

pub use csv_out::{
    creativity_csv, discriminant_csv, e1_csv, envelope_csv, frontal_csv, orthotomic_csv,
    reflector_csv,
};
pub use format::fmt_num;
pub use svg::{render_svg, Curve, RenderError, Scene, DEFAULT_MARGIN, DEFAULT_STRIDE};

/// Write `contents`, creating parent directories.
pub fn write_output(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents)
}
