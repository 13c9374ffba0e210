//! Binary grid formats and CSV export.
//!
//! RGF1 (grid field): 8-byte magic "RGF1\0\0\0\0", little-endian u32 n,
//! then n u32 shape entries, n f64 origin entries, n f64 spacing entries,
//! then f64 data row-major.
//!
//! RSG1 (sinogram): 8-byte magic "RSG1\0\0\0\0", little-endian u32 A,
//! u32 S, f64 s_max, then f64 data row-major (angle-major).
//!
//! Files are written atomically (temp file in the target directory, then
//! rename). CSV values carry 17 significant digits so doubles round-trip.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::fields::{GridGeometry, ScalarField};
use crate::radon::Sinogram;

pub const RGF_MAGIC: [u8; 8] = *b"RGF1\0\0\0\0";
pub const RSG_MAGIC: [u8; 8] = *b"RSG1\0\0\0\0";

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

/// Write bytes atomically: temp file next to the target, then rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp: PathBuf = {
        let mut name = path
            .file_name()
            .ok_or_else(|| Error::Format(format!("{} has no file name", path_str(path))))?
            .to_os_string();
        name.push(format!(".tmp.{}", std::process::id()));
        match dir {
            Some(d) => d.join(name),
            None => PathBuf::from(name),
        }
    };
    let write_all = |p: &Path| -> std::io::Result<()> {
        let mut f = fs::File::create(p)?;
        f.write_all(bytes)?;
        f.sync_all()
    };
    write_all(&tmp).map_err(|e| Error::io(path_str(&tmp), e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path_str(path), e)
    })
}

pub fn write_rgf(path: &Path, field: &ScalarField) -> Result<()> {
    let geom = field.geometry();
    let n = geom.ndim();
    let mut bytes = Vec::with_capacity(8 + 4 + 12 * n + 8 * field.data().len());
    bytes.extend_from_slice(&RGF_MAGIC);
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    for &s in geom.shape() {
        bytes.extend_from_slice(&(s as u32).to_le_bytes());
    }
    for &o in geom.origin() {
        bytes.extend_from_slice(&o.to_le_bytes());
    }
    for &h in geom.spacing() {
        bytes.extend_from_slice(&h.to_le_bytes());
    }
    for &v in field.data() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    atomic_write(path, &bytes)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.pos + len > self.bytes.len() {
            return Err(Error::Format(format!(
                "{}: truncated (need {} bytes at offset {})",
                path_str(self.path),
                len,
                self.pos
            )));
        }
        let out = &self.bytes[self.pos..self.pos + len];
        self.pos += len;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path_str(path), e))?;
    Ok(bytes)
}

pub fn read_rgf(path: &Path) -> Result<ScalarField> {
    let bytes = read_bytes(path)?;
    let mut cur = Cursor {
        bytes: &bytes,
        pos: 0,
        path,
    };
    if cur.take(8)? != RGF_MAGIC {
        return Err(Error::Format(format!(
            "{}: not an RGF1 file",
            path_str(path)
        )));
    }
    let n = cur.u32()? as usize;
    if n == 0 || n > 16 {
        return Err(Error::Format(format!(
            "{}: implausible dimension {n}",
            path_str(path)
        )));
    }
    let mut shape = Vec::with_capacity(n);
    for _ in 0..n {
        shape.push(cur.u32()? as usize);
    }
    let mut origin = Vec::with_capacity(n);
    for _ in 0..n {
        origin.push(cur.f64()?);
    }
    let mut spacing = Vec::with_capacity(n);
    for _ in 0..n {
        spacing.push(cur.f64()?);
    }
    let geom = GridGeometry::new(shape, origin, spacing)
        .map_err(|e| Error::Format(format!("{}: {e}", path_str(path))))?;
    let len = geom.len();
    let mut data = Vec::with_capacity(len);
    for _ in 0..len {
        data.push(cur.f64()?);
    }
    if cur.pos != bytes.len() {
        return Err(Error::Format(format!(
            "{}: {} trailing bytes",
            path_str(path),
            bytes.len() - cur.pos
        )));
    }
    ScalarField::new(geom, data).map_err(|e| Error::Format(format!("{}: {e}", path_str(path))))
}

pub fn write_rsg(path: &Path, sino: &Sinogram) -> Result<()> {
    let mut bytes =
        Vec::with_capacity(8 + 8 + 8 + 8 * sino.data().len());
    bytes.extend_from_slice(&RSG_MAGIC);
    bytes.extend_from_slice(&(sino.n_angles() as u32).to_le_bytes());
    bytes.extend_from_slice(&(sino.n_offsets() as u32).to_le_bytes());
    bytes.extend_from_slice(&sino.s_max().to_le_bytes());
    for &v in sino.data() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    atomic_write(path, &bytes)
}

pub fn read_rsg(path: &Path) -> Result<Sinogram> {
    let bytes = read_bytes(path)?;
    let mut cur = Cursor {
        bytes: &bytes,
        pos: 0,
        path,
    };
    if cur.take(8)? != RSG_MAGIC {
        return Err(Error::Format(format!(
            "{}: not an RSG1 file",
            path_str(path)
        )));
    }
    let a = cur.u32()? as usize;
    let s = cur.u32()? as usize;
    let s_max = cur.f64()?;
    let mut data = Vec::with_capacity(a * s);
    for _ in 0..a * s {
        data.push(cur.f64()?);
    }
    if cur.pos != bytes.len() {
        return Err(Error::Format(format!(
            "{}: {} trailing bytes",
            path_str(path),
            bytes.len() - cur.pos
        )));
    }
    Sinogram::from_data(a, s, s_max, data)
        .map_err(|e| Error::Format(format!("{}: {e}", path_str(path))))
}

/// 17 significant digits: round-trip safe for f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV export of a field: one row per node, index coordinates then value.
pub fn write_field_csv(path: &Path, field: &ScalarField) -> Result<()> {
    let geom = field.geometry();
    let mut out = String::new();
    for a in 0..geom.ndim() {
        out.push_str(&format!("i{a},"));
    }
    for a in 0..geom.ndim() {
        out.push_str(&format!("x{a},"));
    }
    out.push_str("value\n");
    for (flat, &v) in field.data().iter().enumerate() {
        let multi = geom.multi_index(flat);
        let pos = geom.position(&multi);
        for i in &multi {
            out.push_str(&format!("{i},"));
        }
        for x in &pos {
            out.push_str(&fmt_f64(*x));
            out.push(',');
        }
        out.push_str(&fmt_f64(v));
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())
}
