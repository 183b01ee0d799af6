//! File formats: the WVF1 binary wavefield container, CSV import/export and
//! the CSV result tables. Every writer goes through a temporary file in the
//! destination directory and renames it on success, so a failed run never
//! leaves a partial output behind.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use ndarray::{s, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::denoise::{SnrSummary, ThresholdSweepResult};
use crate::error::{Error, Result};
use crate::frame::{AtomParams, BoostletFrame, FrameSpec};
use crate::grid::{GridGeometry, WavefieldGrid};
use crate::sparsity::{ApproximationCurve, CurveSummary};
use crate::transform::CoefficientSet;

pub const WVF_MAGIC: &[u8; 4] = b"WVF1";
pub const WVF_HEADER_LEN: u64 = 28;

/// Formats a number with 17 significant digits, enough to round-trip any f64.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn parent_dir(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

/// Writes through a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(parent_dir(path))?;
    {
        let mut writer = BufWriter::new(tmp.as_file_mut());
        body(&mut writer)?;
        writer.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Fills a fresh directory through `body` and renames it to `path`, which must not exist yet.
pub fn write_dir_atomic(path: &Path, body: impl FnOnce(&Path) -> Result<()>) -> Result<()> {
    if path.exists() {
        return Err(Error::InvalidArgument(format!("{} already exists", path.display())));
    }
    let tmp = tempfile::Builder::new()
        .prefix(".partial-")
        .tempdir_in(parent_dir(path))?;
    body(tmp.path())?;
    let staged = tmp.keep();
    fs::rename(&staged, path).inspect_err(|_| {
        let _ = fs::remove_dir_all(&staged);
    })?;
    Ok(())
}

pub fn encode_wavefield(grid: &WavefieldGrid) -> Result<Vec<u8>> {
    let to_u32 = |n: usize| {
        u32::try_from(n).map_err(|_| Error::InvalidGrid(format!("extent {n} does not fit the file header")))
    };
    let mut out = Vec::with_capacity(WVF_HEADER_LEN as usize + 8 * grid.geometry().len());
    out.extend_from_slice(WVF_MAGIC);
    out.extend_from_slice(&to_u32(grid.nx())?.to_le_bytes());
    out.extend_from_slice(&to_u32(grid.nt())?.to_le_bytes());
    out.extend_from_slice(&grid.dx().to_le_bytes());
    out.extend_from_slice(&grid.dt().to_le_bytes());
    for v in grid.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

/// Parses a WVF1 byte buffer; `origin` names the source in error messages.
pub fn decode_wavefield(bytes: &[u8], origin: &Path) -> Result<WavefieldGrid> {
    let truncated = |expected: u64| Error::Truncated {
        path: origin.to_path_buf(),
        expected,
        actual: bytes.len() as u64,
    };
    if bytes.len() < 4 || &bytes[..4] != WVF_MAGIC {
        let found = &bytes[..bytes.len().min(4)];
        return Err(Error::Format(format!(
            "{}: bad magic {:?}, expected \"WVF1\"",
            origin.display(),
            String::from_utf8_lossy(found)
        )));
    }
    if (bytes.len() as u64) < WVF_HEADER_LEN {
        return Err(truncated(WVF_HEADER_LEN));
    }
    let u32_at = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes")) as usize;
    let f64_at = |at: usize| f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
    let (nx, nt) = (u32_at(4), u32_at(8));
    let (dx, dt) = (f64_at(12), f64_at(20));
    let expected = (nx as u64)
        .checked_mul(nt as u64)
        .and_then(|n| n.checked_mul(8))
        .and_then(|n| n.checked_add(WVF_HEADER_LEN))
        .ok_or_else(|| Error::Format(format!("{}: header extents {nx} x {nt} overflow", origin.display())))?;
    let actual = bytes.len() as u64;
    if actual < expected {
        return Err(truncated(expected));
    }
    if actual > expected {
        return Err(Error::Format(format!(
            "{}: {} trailing bytes after {expected}-byte payload",
            origin.display(),
            actual - expected
        )));
    }
    let samples = bytes[WVF_HEADER_LEN as usize..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    WavefieldGrid::make(nx, nt, dx, dt, samples)
}

pub fn read_wavefield(path: impl AsRef<Path>) -> Result<WavefieldGrid> {
    let path = path.as_ref();
    decode_wavefield(&fs::read(path)?, path)
}

pub fn write_wavefield(grid: &WavefieldGrid, path: impl AsRef<Path>) -> Result<()> {
    let bytes = encode_wavefield(grid)?;
    write_atomic(path.as_ref(), |w| Ok(w.write_all(&bytes)?))
}

/// Reads a headerless numeric CSV with one row per spatial position.
pub fn import_csv(path: impl AsRef<Path>, dx: f64, dt: f64) -> Result<WavefieldGrid> {
    let (rows, cols, samples) = read_matrix(path.as_ref())?;
    WavefieldGrid::make(rows, cols, dx, dt, samples)
}

/// Headerless numeric CSV as `(rows, cols, row-major samples)`.
fn read_matrix(path: &Path) -> Result<(usize, usize, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut samples = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(Error::Format(format!(
                    "{}: row {row} has {} fields, expected {w}",
                    path.display(),
                    record.len()
                )))
            }
            _ => {}
        }
        for (col, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                Error::Format(format!("{}: row {row}, column {col}: {cell:?} is not a number", path.display()))
            })?;
            samples.push(v);
        }
        rows += 1;
    }
    Ok((rows, width.unwrap_or(0), samples))
}

/// Cuts `count` windows of `geometry` from a long recording stored as CSV
/// (rows are sensors, columns are time samples). Each window starts at a
/// random time and spans the first `geometry.nx` sensors; the recording
/// itself may have any extent.
pub fn import_csv_windows(
    path: impl AsRef<Path>,
    geometry: &GridGeometry,
    count: usize,
    seed: u64,
) -> Result<Vec<WavefieldGrid>> {
    geometry.validate()?;
    let path = path.as_ref();
    let (rows, cols, samples) = read_matrix(path)?;
    if rows < geometry.nx || cols < geometry.nt {
        return Err(Error::InvalidArgument(format!(
            "{}: recording is {rows} x {cols}, smaller than the {} x {} window",
            path.display(),
            geometry.nx,
            geometry.nt
        )));
    }
    let recording = Array2::from_shape_vec((rows, cols), samples).expect("rectangular by construction");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let start = rng.random_range(0..=cols - geometry.nt);
            let window = recording.slice(s![..geometry.nx, start..start + geometry.nt]).to_owned();
            WavefieldGrid::from_array(*geometry, window)
        })
        .collect()
}

/// Writes samples as a headerless CSV, one row per spatial position.
pub fn export_csv(grid: &WavefieldGrid, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), |w| {
        let mut out = csv::Writer::from_writer(w);
        for row in grid.data().rows() {
            out.write_record(row.iter().map(|v| fmt_num(*v)))?;
        }
        out.flush()?;
        Ok(())
    })
}

fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    write_atomic(path, |w| {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(header)?;
        for row in rows {
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    })
}

/// Columns: `n, l1, e_n_percent, representation_tag`.
pub fn write_curve_csv(curves: &[ApproximationCurve], path: impl AsRef<Path>) -> Result<()> {
    let rows = curves.iter().flat_map(|c| {
        (0..c.len()).map(move |i| {
            vec![
                c.n_values[i].to_string(),
                fmt_num(c.l1_norms[i]),
                fmt_num(c.rel_errors[i]),
                c.representation_tag.clone(),
            ]
        })
    });
    write_table(path.as_ref(), &["n", "l1", "e_n_percent", "representation_tag"], rows)
}

/// Corpus means and 95% intervals per `n`.
pub fn write_curve_summary_csv(summaries: &[CurveSummary], path: impl AsRef<Path>) -> Result<()> {
    let rows = summaries.iter().flat_map(|s| {
        (0..s.n_values.len()).map(move |i| {
            vec![
                s.n_values[i].to_string(),
                s.representation_tag.clone(),
                s.l1[i].count.to_string(),
                fmt_num(s.l1[i].mean),
                fmt_num(s.l1[i].ci95_low),
                fmt_num(s.l1[i].ci95_high),
                fmt_num(s.rel_error[i].mean),
                fmt_num(s.rel_error[i].ci95_low),
                fmt_num(s.rel_error[i].ci95_high),
            ]
        })
    });
    write_table(
        path.as_ref(),
        &[
            "n",
            "representation_tag",
            "count",
            "l1_mean",
            "l1_ci95_low",
            "l1_ci95_high",
            "e_n_mean",
            "e_n_ci95_low",
            "e_n_ci95_high",
        ],
        rows,
    )
}

/// Columns: `gamma, rho, eta, error_percent, selected`. Missing errors are written as NaN.
pub fn write_sweep_csv(sweep: &ThresholdSweepResult, path: impl AsRef<Path>) -> Result<()> {
    let selected = sweep.gamma_star_index();
    let rows = (0..sweep.gammas.len()).map(|i| {
        let error = sweep.errors_percent.as_ref().map_or(f64::NAN, |e| e[i]);
        vec![
            fmt_num(sweep.gammas[i]),
            fmt_num(sweep.rho[i]),
            fmt_num(sweep.eta[i]),
            fmt_num(error),
            u8::from(selected == Some(i)).to_string(),
        ]
    });
    write_table(path.as_ref(), &["gamma", "rho", "eta", "error_percent", "selected"], rows)
}

/// Columns: `snr_db, representation_tag, mean_error, ci95_low, ci95_high`.
pub fn write_snr_summary_csv(rows: &[SnrSummary], path: impl AsRef<Path>) -> Result<()> {
    let rows = rows.iter().map(|r| {
        vec![
            fmt_num(r.snr_db),
            r.representation_tag.clone(),
            fmt_num(r.errors.mean),
            fmt_num(r.errors.ci95_low),
            fmt_num(r.errors.ci95_high),
        ]
    });
    write_table(
        path.as_ref(),
        &["snr_db", "representation_tag", "mean_error", "ci95_low", "ci95_high"],
        rows,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandEntry {
    pub index: usize,
    pub atom: AtomParams,
    pub file: String,
}

/// Index of a directory of per-band WVF1 files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandManifest {
    pub representation: String,
    pub frame: FrameSpec,
    pub bands: Vec<BandEntry>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

fn write_bands<'a>(
    dir: &Path,
    representation: &str,
    spec: &FrameSpec,
    bands: impl Iterator<Item = (AtomParams, Array2<f64>)> + 'a,
) -> Result<()> {
    let geometry = spec.geometry;
    let mut entries = Vec::new();
    for (index, (atom, data)) in bands.enumerate() {
        let file = format!("band_{index:03}_{}.wvf", atom.label());
        let grid = WavefieldGrid::from_array(geometry, data)?;
        fs::write(dir.join(&file), encode_wavefield(&grid)?)?;
        entries.push(BandEntry { index, atom, file });
    }
    let manifest = BandManifest {
        representation: representation.to_string(),
        frame: spec.clone(),
        bands: entries,
    };
    fs::write(dir.join(MANIFEST_FILE), serde_json::to_vec_pretty(&manifest)?)?;
    Ok(())
}

/// Writes every coefficient band as a WVF1 file plus a manifest into a new directory.
pub fn write_coefficients(coefficients: &CoefficientSet, dir: impl AsRef<Path>) -> Result<()> {
    write_dir_atomic(dir.as_ref(), |tmp| {
        let bands = coefficients.bands().map(|(atom, band)| (atom, band.to_owned()));
        write_bands(tmp, "boostlet", coefficients.spec(), bands)
    })
}

/// Reads a directory written by [`write_coefficients`].
pub fn read_coefficients(dir: impl AsRef<Path>) -> Result<CoefficientSet> {
    let dir = dir.as_ref();
    let manifest: BandManifest = serde_json::from_slice(&fs::read(dir.join(MANIFEST_FILE))?)?;
    if manifest.representation != "boostlet" {
        return Err(Error::Format(format!(
            "manifest describes {:?} coefficients, expected boostlet",
            manifest.representation
        )));
    }
    manifest.frame.validate()?;
    let expected = manifest.frame.atom_params();
    if manifest.bands.len() != expected.len() {
        return Err(Error::CoefficientMismatch(format!(
            "manifest lists {} bands, frame has {}",
            manifest.bands.len(),
            expected.len()
        )));
    }
    let mut bands = Vec::with_capacity(expected.len());
    for (entry, atom) in manifest.bands.iter().zip(&expected) {
        if entry.atom != *atom {
            return Err(Error::CoefficientMismatch(format!(
                "band {} is {}, expected {}",
                entry.index,
                entry.atom.label(),
                atom.label()
            )));
        }
        let grid = read_wavefield(dir.join(&entry.file))?;
        if !grid.geometry().matches(&manifest.frame.geometry) {
            return Err(Error::ShapeMismatch {
                expected: manifest.frame.geometry.shape(),
                actual: grid.geometry().shape(),
            });
        }
        bands.push(grid.into_data());
    }
    CoefficientSet::from_bands(&manifest.frame, bands)
}

/// Writes each atom's frequency window (unshifted FFT bin order) as WVF1 plus a manifest.
pub fn write_frame(frame: &BoostletFrame, dir: impl AsRef<Path>) -> Result<()> {
    write_dir_atomic(dir.as_ref(), |tmp| {
        let bands = frame.atoms().iter().map(|a| (a.params, a.window.clone()));
        write_bands(tmp, "boostlet-frame", frame.spec(), bands)
    })
}

/// Lists the files a directory output would contain; used by tests and tooling.
pub fn list_dir(dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)?.map(|e| e.map(|e| e.path())).collect::<std::io::Result<_>>()?;
    out.sort();
    Ok(out)
}
