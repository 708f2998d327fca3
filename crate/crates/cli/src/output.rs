//! Deterministic CSV rendering and atomic file writes.

use std::fmt::Write as _;
use std::path::Path;

use pielm::geometry::Domain;
use pielm::pielm::ErrorReport;

use crate::CliError;

/// Coordinate column names: `x`, `x,y`, `x,t` or `x,y,t`.
pub fn coordinate_names(domain: &Domain) -> Vec<&'static str> {
    let mut names = vec!["x", "y"][..domain.spatial_dim()].to_vec();
    if domain.is_time_dependent() {
        names.push("t");
    }
    names
}

/// Shortest round-trip decimal; scientific outside `[1e-4, 1e15)`.
pub fn fmt_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// `x[,y][,t],u_exact,u_pred,error` with [`fmt_float`] values.
pub fn solution_csv(domain: &Domain, report: &ErrorReport) -> String {
    let mut out = coordinate_names(domain).join(",");
    out.push_str(",u_exact,u_pred,error\n");
    for i in 0..report.points.rows() {
        for &v in report.points.row(i) {
            let _ = write!(out, "{},", fmt_float(v));
        }
        let (e, p) = (report.exact[i], report.predicted[i]);
        let _ = writeln!(out, "{},{},{}", fmt_float(e), fmt_float(p), fmt_float(p - e));
    }
    out
}

/// Writes to a sibling temp file, then renames over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::Io(format!("not a file path: {}", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp-{}", file_name.to_string_lossy(), std::process::id()));
    std::fs::write(&tmp, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        CliError::Io(format!("cannot move {} into place: {e}", path.display()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(0.25), "0.25");
        assert_eq!(fmt_float(-1.5e-7), "-1.5e-7");
        assert_eq!(fmt_float(2e15), "2e15");
        for v in [0.1 + 0.2, 1.0 / 3.0, -7.123456789e-9] {
            assert_eq!(fmt_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn column_names() {
        let line = Domain::interval(0.0, 1.0).unwrap();
        let square = Domain::rectangle([0.0, 1.0], [0.0, 1.0]).unwrap();
        assert_eq!(coordinate_names(&line), ["x"]);
        assert_eq!(coordinate_names(&Domain::time_extruded(line, 1.0).unwrap()), ["x", "t"]);
        assert_eq!(coordinate_names(&Domain::time_extruded(square, 1.0).unwrap()), ["x", "y", "t"]);
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.txt");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
