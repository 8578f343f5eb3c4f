//! Gridded region maps and their delimited-text form.

use std::io::{Read, Write};

use rayon::prelude::*;

use super::{RegionCell, RegionModel};
use crate::error::{Error, Result};
use crate::format::sig12;
use crate::polynomials::peak_point;

pub const CELL_HEADER: [&str; 6] = ["p", "W", "optimal_m", "L_label", "profitable", "profit"];
pub const CURVE_HEADER: [&str; 4] = ["curve", "k", "p", "W"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// `W = f_k(p)`.
    Marginal,
    /// `W = V(Q_k, p) / k`.
    PerClassValue,
    /// `W = C(p)`; `k` is the class count attaining the maximum.
    ProfitConstraint,
    /// The peak `X_k` of `f_k`, a single point.
    Peak,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Marginal => "f",
            CurveKind::PerClassValue => "per_class",
            CurveKind::ProfitConstraint => "constraint",
            CurveKind::Peak => "peak",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "f" => Some(CurveKind::Marginal),
            "per_class" => Some(CurveKind::PerClassValue),
            "constraint" => Some(CurveKind::ProfitConstraint),
            "peak" => Some(CurveKind::Peak),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub curve: CurveKind,
    pub k: usize,
    pub p: f64,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atlas {
    pub students: usize,
    /// `p`-major: all `W` values of the first `p`, then the next `p`.
    pub cells: Vec<RegionCell>,
    pub curves: Vec<CurveSample>,
}

/// `0.01, 0.02, ..., 0.99`.
pub fn default_p_grid() -> Vec<f64> {
    (1..100).map(|i| i as f64 / 100.0).collect()
}

/// 100 equal steps up to `max(1, V(Q_1, 0.99))`.
pub fn default_w_grid(students: usize) -> Vec<f64> {
    let top = (students as f64 * 0.99f64.powi(students as i32)).max(1.0);
    (1..=100).map(|j| top * j as f64 / 100.0).collect()
}

fn check_grid(name: &str, grid: &[f64], upper: Option<f64>) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid(format!("{name} grid is empty")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(format!(
            "{name} grid must be strictly increasing"
        )));
    }
    let lo = grid[0];
    let hi = grid[grid.len() - 1];
    if !(lo > 0.0) || !hi.is_finite() || upper.is_some_and(|u| hi >= u) {
        return Err(Error::invalid(format!("{name} grid leaves its domain")));
    }
    Ok(())
}

pub fn emit_atlas(students: usize, p_grid: &[f64], w_grid: &[f64]) -> Result<Atlas> {
    check_grid("p", p_grid, Some(1.0))?;
    check_grid("W", w_grid, None)?;
    let model = RegionModel::new(students)?;
    let n_w = w_grid.len();
    let cells = (0..p_grid.len() * n_w)
        .into_par_iter()
        .map(|idx| model.classify(p_grid[idx / n_w], w_grid[idx % n_w]))
        .collect::<Result<Vec<_>>>()?;
    let curves = boundary_curves(&model, p_grid)?;
    Ok(Atlas {
        students,
        cells,
        curves,
    })
}

/// Samples `f_k`, `V(Q_k, .)/k` and `C` on `p_grid`, plus each peak `X_k`.
pub fn boundary_curves(model: &RegionModel, p_grid: &[f64]) -> Result<Vec<CurveSample>> {
    let z = model.students();
    let top = model.max_paired() + 1;
    let mut out = Vec::new();
    for k in 2..=top.min(z) {
        let f = model.marginal(k);
        out.extend(p_grid.iter().map(|&p| CurveSample {
            curve: CurveKind::Marginal,
            k,
            p,
            w: f.eval(p),
        }));
    }
    let mut per_class: Vec<usize> = (1..=top.min(z)).collect();
    if !per_class.contains(&z) {
        per_class.push(z);
    }
    for k in per_class {
        let v = model.value(k);
        out.extend(p_grid.iter().map(|&p| CurveSample {
            curve: CurveKind::PerClassValue,
            k,
            p,
            w: v.eval(p) / k as f64,
        }));
    }
    for &p in p_grid {
        let (w, k) = model.profit_constraint(p);
        out.push(CurveSample {
            curve: CurveKind::ProfitConstraint,
            k,
            p,
            w,
        });
    }
    for k in 2..=top.min(z) {
        let peak = peak_point(z, k)?;
        out.push(CurveSample {
            curve: CurveKind::Peak,
            k,
            p: peak.s,
            w: peak.value,
        });
    }
    Ok(out)
}

impl RegionCell {
    /// The cell as it reads back from the delimited form.
    pub fn rounded(&self) -> RegionCell {
        let r = |x: f64| sig12(x).parse().unwrap_or(x);
        RegionCell {
            p: r(self.p),
            w: r(self.w),
            profit: r(self.profit),
            ..self.clone()
        }
    }
}

pub fn write_cells<W: Write>(cells: &[RegionCell], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(CELL_HEADER)?;
    for c in cells {
        wtr.write_record([
            sig12(c.p),
            sig12(c.w),
            c.optimal_m.to_string(),
            c.l_label.map(|k| k.to_string()).unwrap_or_default(),
            c.profitable.to_string(),
            sig12(c.profit),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_curves<W: Write>(curves: &[CurveSample], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(CURVE_HEADER)?;
    for c in curves {
        wtr.write_record([
            c.curve.name().to_string(),
            c.k.to_string(),
            sig12(c.p),
            sig12(c.w),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

fn field<'a>(rec: &'a csv::StringRecord, i: usize) -> Result<&'a str> {
    rec.get(i)
        .ok_or_else(|| Error::Parse(format!("missing column {i} in {rec:?}")))
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad number {s:?}")))
}

fn check_header(rdr: &mut csv::Reader<impl Read>, expected: &[&str]) -> Result<()> {
    let header = rdr.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    Ok(())
}

pub fn read_cells<R: Read>(input: R) -> Result<Vec<RegionCell>> {
    let mut rdr = csv::Reader::from_reader(input);
    check_header(&mut rdr, &CELL_HEADER)?;
    let mut cells = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let label = field(&rec, 3)?;
        cells.push(RegionCell {
            p: num(field(&rec, 0)?)?,
            w: num(field(&rec, 1)?)?,
            optimal_m: num(field(&rec, 2)?)?,
            l_label: if label.is_empty() {
                None
            } else {
                Some(num(label)?)
            },
            profitable: num(field(&rec, 4)?)?,
            profit: num(field(&rec, 5)?)?,
        });
    }
    Ok(cells)
}

pub fn read_curves<R: Read>(input: R) -> Result<Vec<CurveSample>> {
    let mut rdr = csv::Reader::from_reader(input);
    check_header(&mut rdr, &CURVE_HEADER)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let name = field(&rec, 0)?;
        let curve = CurveKind::parse(name)
            .ok_or_else(|| Error::Parse(format!("unknown curve {name:?}")))?;
        out.push(CurveSample {
            curve,
            k: num(field(&rec, 1)?)?,
            p: num(field(&rec, 2)?)?,
            w: num(field(&rec, 3)?)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::gap_branch;

    fn grid(n: usize, top: f64) -> Vec<f64> {
        (1..=n).map(|i| top * i as f64 / (n + 1) as f64).collect()
    }

    #[test]
    fn ten_students_fifty_by_fifty() {
        let atlas = emit_atlas(10, &grid(50, 1.0), &grid(50, 2.0)).unwrap();
        assert_eq!(atlas.cells.len(), 2500);
        let model = RegionModel::new(10).unwrap();
        for (idx, c) in atlas.cells.iter().enumerate() {
            assert_eq!(c.p, grid(50, 1.0)[idx / 50]);
            if c.profitable {
                assert_eq!(c.l_label, Some(c.optimal_m), "{c:?}");
                assert!(gap_branch(10, c.optimal_m).is_some());
                if c.p <= 0.5 {
                    assert_eq!(c.optimal_m, 10);
                }
            } else {
                assert_eq!(c.l_label, None);
            }
            assert!(model.labels(c.p, c.w).len() <= 1);
        }
    }

    #[test]
    fn csv_round_trip() {
        let atlas = emit_atlas(7, &grid(12, 1.0), &grid(9, 1.5)).unwrap();
        let mut buf = Vec::new();
        write_cells(&atlas.cells, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("p,W,optimal_m,L_label,profitable,profit\n"));
        let back = read_cells(buf.as_slice()).unwrap();
        let expected: Vec<_> = atlas.cells.iter().map(RegionCell::rounded).collect();
        assert_eq!(back, expected);

        let mut buf = Vec::new();
        write_curves(&atlas.curves, &mut buf).unwrap();
        let curves = read_curves(buf.as_slice()).unwrap();
        assert_eq!(curves.len(), atlas.curves.len());
        assert!(curves
            .iter()
            .zip(&atlas.curves)
            .all(|(a, b)| a.curve == b.curve && a.k == b.k));
    }

    #[test]
    fn bad_grids() {
        assert!(emit_atlas(5, &[], &[0.5]).is_err());
        assert!(emit_atlas(5, &[0.5], &[]).is_err());
        assert!(emit_atlas(5, &[0.5, 0.4], &[0.5]).is_err());
        assert!(emit_atlas(5, &[0.5, 1.0], &[0.5]).is_err());
        assert!(emit_atlas(5, &[0.5], &[0.0, 0.5]).is_err());
        assert!(read_cells("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn default_grids() {
        assert_eq!(default_p_grid().len(), 99);
        let w = default_w_grid(5);
        assert_eq!(w.len(), 100);
        assert!((w[99] - 5.0 * 0.99f64.powi(5)).abs() < 1e-15);
        assert_eq!(default_w_grid(1000)[99], 1.0);
    }
}
