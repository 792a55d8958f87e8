//! CSV formats for point sets and grid functions.
//!
//! Point sets carry their window in a `# window: <kind> <size>` comment
//! line followed by a header of `x` or `x,y` (plus `w` for weighted sets).
//! Grid functions use the header `abscissa,value[,stderr]`. Floats are
//! written in shortest round-trip form, so write → read is lossless and
//! repeated writes are byte-identical.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::{Coords, PointSet, WeightedPointSet, Window};
use crate::grid::{Grid, GridFunction};

/// A point set as read from disk, with or without weights.
#[derive(Clone, Debug, PartialEq)]
pub enum PointFile {
    Plain(PointSet),
    Weighted(WeightedPointSet),
}

impl PointFile {
    pub fn points(&self) -> &PointSet {
        match self {
            PointFile::Plain(p) => p,
            PointFile::Weighted(w) => w.base(),
        }
    }
}

pub fn write_point_set<W: Write>(out: &mut W, p: &PointSet, weights: Option<&[f64]>) -> Result<()> {
    writeln!(out, "# window: {}", p.window())?;
    let wcol = if weights.is_some() { ",w" } else { "" };
    match p.coords() {
        Coords::Line(xs) => {
            writeln!(out, "x{wcol}")?;
            for (i, x) in xs.iter().enumerate() {
                match weights {
                    Some(w) => writeln!(out, "{x},{}", w[i])?,
                    None => writeln!(out, "{x}")?,
                }
            }
        }
        Coords::Plane(ps) => {
            writeln!(out, "x,y{wcol}")?;
            for (i, q) in ps.iter().enumerate() {
                match weights {
                    Some(w) => writeln!(out, "{},{},{}", q[0], q[1], w[i])?,
                    None => writeln!(out, "{},{}", q[0], q[1])?,
                }
            }
        }
    }
    Ok(())
}

pub fn save_point_set(path: &Path, p: &PointSet, weights: Option<&[f64]>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_point_set(&mut out, p, weights)?;
    out.flush()?;
    Ok(())
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.trim()
        .parse()
        .map_err(|e| Error::Parse(format!("line {line}: `{tok}`: {e}")))
}

pub fn read_point_set<R: BufRead>(input: R) -> Result<PointFile> {
    let mut window: Option<Window> = None;
    let mut header: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(comment) = t.strip_prefix('#') {
            if let Some(w) = comment.trim().strip_prefix("window:") {
                window = Some(w.trim().parse()?);
            }
            continue;
        }
        if header.is_none() {
            header = Some(t.split(',').map(|s| s.trim().to_string()).collect());
            continue;
        }
        rows.push(t.split(',').map(|s| parse_f64(s, idx + 1)).collect::<Result<_>>()?);
    }
    let window = window.ok_or_else(|| Error::Parse("missing `# window:` line".into()))?;
    let header = header.ok_or_else(|| Error::Parse("missing header".into()))?;
    let cols: Vec<&str> = header.iter().map(String::as_str).collect();
    let (dim, weighted) = match cols.as_slice() {
        ["x"] => (1, false),
        ["x", "w"] => (1, true),
        ["x", "y"] => (2, false),
        ["x", "y", "w"] => (2, true),
        _ => return Err(Error::Parse(format!("unexpected header `{}`", header.join(",")))),
    };
    let width = dim + usize::from(weighted);
    if let Some(bad) = rows.iter().position(|r| r.len() != width) {
        return Err(Error::Parse(format!(
            "row {} has {} columns, expected {width}",
            bad + 1,
            rows[bad].len()
        )));
    }
    let coords = if dim == 1 {
        Coords::Line(rows.iter().map(|r| r[0]).collect())
    } else {
        Coords::Plane(rows.iter().map(|r| [r[0], r[1]]).collect())
    };
    let base = PointSet::new(window, coords)?;
    if weighted {
        let w = rows.iter().map(|r| r[dim]).collect();
        Ok(PointFile::Weighted(WeightedPointSet::new(base, w)?))
    } else {
        Ok(PointFile::Plain(base))
    }
}

pub fn load_point_set(path: &Path) -> Result<PointFile> {
    read_point_set(BufReader::new(File::open(path)?))
}

pub fn write_grid_function<W: Write>(out: &mut W, g: &GridFunction) -> Result<()> {
    writeln!(out, "# replicas: {}", g.n_replicas())?;
    let xs = g.abscissae();
    match g.stderr() {
        Some(se) => {
            writeln!(out, "abscissa,value,stderr")?;
            for ((x, v), s) in xs.iter().zip(g.values()).zip(se) {
                writeln!(out, "{x},{v},{s}")?;
            }
        }
        None => {
            writeln!(out, "abscissa,value")?;
            for (x, v) in xs.iter().zip(g.values()) {
                writeln!(out, "{x},{v}")?;
            }
        }
    }
    Ok(())
}

pub fn save_grid_function(path: &Path, g: &GridFunction) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_grid_function(&mut out, g)?;
    out.flush()?;
    Ok(())
}

pub fn read_grid_function<R: BufRead>(input: R) -> Result<GridFunction> {
    let mut replicas = 1;
    let mut header_seen = false;
    let mut with_se = false;
    let (mut xs, mut vs, mut ses) = (Vec::new(), Vec::new(), Vec::new());
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(c) = t.strip_prefix('#') {
            if let Some(r) = c.trim().strip_prefix("replicas:") {
                replicas = r.trim().parse().map_err(|e| Error::Parse(format!("replicas: {e}")))?;
            }
            continue;
        }
        if !header_seen {
            with_se = match t {
                "abscissa,value" => false,
                "abscissa,value,stderr" => true,
                other => return Err(Error::Parse(format!("unexpected header `{other}`"))),
            };
            header_seen = true;
            continue;
        }
        let toks: Vec<&str> = t.split(',').collect();
        if toks.len() != 2 + usize::from(with_se) {
            return Err(Error::Parse(format!("line {}: wrong column count", idx + 1)));
        }
        xs.push(parse_f64(toks[0], idx + 1)?);
        vs.push(parse_f64(toks[1], idx + 1)?);
        if with_se {
            ses.push(parse_f64(toks[2], idx + 1)?);
        }
    }
    if xs.is_empty() {
        return Err(Error::Parse("grid function has no rows".into()));
    }
    let grid = Grid::new(xs[0], xs[xs.len() - 1], xs.len())?;
    let tol = 1e-9 * (grid.step().abs() + xs[0].abs().max(1.0));
    if xs.iter().enumerate().any(|(i, x)| (x - grid.point(i)).abs() > tol) {
        return Err(Error::Parse("abscissae are not uniformly spaced".into()));
    }
    GridFunction::with_stderr(grid, vs, with_se.then_some(ses), replicas)
}

pub fn load_grid_function(path: &Path) -> Result<GridFunction> {
    read_grid_function(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn weighted_planar_round_trip() {
        let base = PointSet::plane(Window::disk(2.0).unwrap(), vec![[0.1, -0.2], [1.0, 1.0]]).unwrap();
        let wp = WeightedPointSet::new(base, vec![1.0, -1.0]).unwrap();
        let mut buf = Vec::new();
        write_point_set(&mut buf, wp.base(), Some(wp.weights())).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# window: disk 2\nx,y,w\n"));
        assert_eq!(read_point_set(&buf[..]).unwrap(), PointFile::Weighted(wp));
    }

    #[test]
    fn rejects_points_outside_window() {
        let src = "# window: interval 2\nx\n0.5\n1.5\n";
        assert!(read_point_set(src.as_bytes()).is_err());
        assert!(read_point_set("x\n0.5\n".as_bytes()).is_err());
    }

    #[test]
    fn grid_function_with_stderr() {
        let g = GridFunction::with_stderr(
            Grid::new(0.0, 1.0, 3).unwrap(),
            vec![1.0, 2.0, 3.0],
            Some(vec![0.1, 0.2, 0.3]),
            7,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_grid_function(&mut buf, &g).unwrap();
        assert_eq!(read_grid_function(&buf[..]).unwrap(), g);
    }

    proptest! {
        #[test]
        fn line_sets_round_trip(xs in proptest::collection::vec(-50.0f64..50.0, 0..40)) {
            let p = PointSet::line(Window::interval(100.0).unwrap(), xs).unwrap();
            let mut buf = Vec::new();
            write_point_set(&mut buf, &p, None).unwrap();
            prop_assert_eq!(read_point_set(&buf[..]).unwrap(), PointFile::Plain(p));
        }

        #[test]
        fn grid_functions_round_trip(vals in proptest::collection::vec(-1e3f64..1e3, 2..30), lo in -5.0f64..5.0) {
            let g = GridFunction::new(Grid::new(lo, lo + 3.7, vals.len()).unwrap(), vals).unwrap();
            let mut buf = Vec::new();
            write_grid_function(&mut buf, &g).unwrap();
            prop_assert_eq!(read_grid_function(&buf[..]).unwrap(), g);
        }
    }
}
