//! Finite-window Delone, FLC and Meyer diagnostics for one-dimensional
//! point sets with coordinates in ℚ(λ).

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{AlgebraicNumber, Field};
use crate::tiling::{PunctureMap, TilingWindow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeloneError {
    #[error("window radius {radius} is below ten covering radii ({needed})")]
    WindowTooSmall { radius: String, needed: String },
    #[error("point set has fewer than two points")]
    TooFewPoints,
}

/// Sorted, duplicate-free points inside [−radius, radius].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    pub points: Vec<AlgebraicNumber>,
    pub radius: AlgebraicNumber,
}

impl PointSet {
    pub fn new(mut points: Vec<AlgebraicNumber>, radius: AlgebraicNumber) -> Self {
        points.sort();
        points.dedup();
        let reach = points.iter().map(|p| p.abs()).max();
        let radius = match reach {
            Some(m) if m > radius => m,
            _ => radius,
        };
        PointSet { points, radius }
    }

    pub fn field(&self) -> &Field {
        self.radius.field()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points in [−r, r].
    pub fn restrict(&self, r: &AlgebraicNumber) -> PointSet {
        let lo = -r;
        PointSet {
            points: self.points.iter().filter(|p| **p >= lo && *p <= r).cloned().collect(),
            radius: r.clone(),
        }
    }

    pub fn translate(&self, v: &AlgebraicNumber) -> PointSet {
        PointSet::new(self.points.iter().map(|p| p + v).collect(), &self.radius + &v.abs())
    }

    /// Consecutive gaps.
    pub fn gaps(&self) -> Vec<AlgebraicNumber> {
        self.points.windows(2).map(|w| &w[1] - &w[0]).collect()
    }

    /// CSV with the exact value and a float rendering.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("exact,approx\n");
        for p in &self.points {
            let _ = writeln!(s, "\"{}\",{:.12}", p, p.to_f64());
        }
        s
    }
}

/// Puncture positions of every tile stored in the window.
pub fn punctures(w: &TilingWindow, p: &PunctureMap) -> PointSet {
    PointSet::new(w.patch.tiles.iter().map(|t| p.puncture(t)).collect(), w.radius.clone())
}

/// {x − y : |x − y| ≤ cap}, exact and sorted.
pub fn difference_set(ps: &PointSet, cap: &AlgebraicNumber) -> PointSet {
    let mut out = Vec::new();
    for (i, x) in ps.points.iter().enumerate() {
        for y in &ps.points[i..] {
            let d = y - x;
            if d > *cap {
                break;
            }
            out.push(-&d);
            out.push(d);
        }
    }
    PointSet::new(out, cap.clone())
}

#[derive(Clone, Debug)]
pub struct MeyerMargin {
    pub radius: AlgebraicNumber,
    pub min_gap: AlgebraicNumber,
}

#[derive(Clone, Debug)]
pub struct DeloneReport {
    /// Smallest gap between points.
    pub r_packing: AlgebraicNumber,
    /// Half the largest gap.
    pub r_covering: AlgebraicNumber,
    /// (radius, number of distinct point configurations of that radius).
    pub flc_classes: Vec<(AlgebraicNumber, usize)>,
    /// Smallest gap in the difference set on the full window.
    pub meyer_gap: AlgebraicNumber,
    /// Difference-set margins on nested windows R/4, R/2, R.
    pub margins: Vec<MeyerMargin>,
    pub meyer_consistent: bool,
}

fn min_gap(ps: &PointSet) -> Option<AlgebraicNumber> {
    ps.gaps().into_iter().min()
}

/// Number of distinct configurations {p − x : |p − x| ≤ ρ} over centres x
/// whose ρ-neighbourhood lies inside the window.
pub fn flc_count(ps: &PointSet, rho: &AlgebraicNumber) -> usize {
    let inner = &ps.radius - rho;
    let mut seen: HashSet<Vec<AlgebraicNumber>> = HashSet::new();
    for (i, x) in ps.points.iter().enumerate() {
        if x.abs() > inner {
            continue;
        }
        let mut conf = Vec::new();
        for y in ps.points[..i].iter().rev() {
            let d = y - x;
            if -&d > *rho {
                break;
            }
            conf.push(d);
        }
        conf.reverse();
        for y in &ps.points[i..] {
            let d = y - x;
            if d > *rho {
                break;
            }
            conf.push(d);
        }
        seen.insert(conf);
    }
    seen.len()
}

/// Delone constants, FLC counts and the empirical Meyer margin on nested
/// windows. The verdict needs a positive margin that is unchanged over the
/// last two doublings.
pub fn meyer_diagnostic(ps: &PointSet) -> Result<DeloneReport, DeloneError> {
    if ps.len() < 2 {
        return Err(DeloneError::TooFewPoints);
    }
    let gaps = ps.gaps();
    let r_packing = gaps.iter().min().cloned().expect("two points");
    let r_covering = gaps.iter().max().cloned().expect("two points").half();
    let f = ps.field().clone();
    let ten = AlgebraicNumber::from_int(&f, 10);
    let needed = &ten * &r_covering;
    if ps.radius < needed {
        return Err(DeloneError::WindowTooSmall {
            radius: ps.radius.to_string(),
            needed: needed.to_string(),
        });
    }
    let quarter = ps.radius.half().half();
    let cap = quarter.clone();
    let mut margins = Vec::new();
    for r in [quarter.clone(), ps.radius.half(), ps.radius.clone()] {
        let sub = ps.restrict(&r);
        let diffs = difference_set(&sub, &cap);
        if let Some(g) = min_gap(&diffs) {
            margins.push(MeyerMargin { radius: r, min_gap: g });
        }
    }
    let meyer_gap = margins.last().map(|m| m.min_gap.clone()).unwrap_or_else(|| r_packing.clone());
    let meyer_consistent = margins.len() == 3 && margins[1].min_gap == margins[2].min_gap && margins[2].min_gap.is_positive();
    let mut flc_classes = Vec::new();
    let mut rho = &r_covering + &r_covering;
    for _ in 0..3 {
        if rho < ps.radius {
            flc_classes.push((rho.clone(), flc_count(ps, &rho)));
        }
        rho = &rho + &rho;
    }
    Ok(DeloneReport {
        r_packing,
        r_covering,
        flc_classes,
        meyer_gap,
        margins,
        meyer_consistent,
    })
}
