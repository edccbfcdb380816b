//! Cut-and-project schemes with one-dimensional physical space and internal
//! space ℝ or ℝ², lattice data in a real number field.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{AlgebraicNumber, Field};
use crate::delone::PointSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelSetError {
    #[error("projection to {0} space is not injective on the lattice")]
    ProjectionNotInjective(&'static str),
    #[error("degenerate window: {0}")]
    DegenerateWindow(String),
    #[error("lattice projection to {0} space is not dense")]
    NotDense(&'static str),
    #[error("lattice basis is singular or has the wrong shape")]
    BadBasis,
    #[error("region needs about {estimate} lattice candidates, budget is {budget}")]
    RegionTooLarge { estimate: f64, budget: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Point2 = [AlgebraicNumber; 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Window {
    Interval {
        lo: AlgebraicNumber,
        hi: AlgebraicNumber,
    },
    /// Convex, vertices counterclockwise.
    Polygon {
        vertices: Vec<Point2>,
    },
}

/// Boundary convention for interval windows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    Closed,
    /// [lo, hi)
    OpenHigh,
    /// (lo, hi]
    OpenLow,
}

fn cross(o: &Point2, a: &Point2, p: &Point2) -> AlgebraicNumber {
    let ax = &a[0] - &o[0];
    let ay = &a[1] - &o[1];
    let px = &p[0] - &o[0];
    let py = &p[1] - &o[1];
    &(&ax * &py) - &(&ay * &px)
}

impl Window {
    pub fn dimension(&self) -> usize {
        match self {
            Window::Interval { .. } => 1,
            Window::Polygon { .. } => 2,
        }
    }

    pub fn contains(&self, y: &[AlgebraicNumber], conv: Convention) -> bool {
        match self {
            Window::Interval { lo, hi } => {
                let y = &y[0];
                let low_ok = match conv {
                    Convention::OpenLow => y > lo,
                    _ => y >= lo,
                };
                let high_ok = match conv {
                    Convention::OpenHigh => y < hi,
                    _ => y <= hi,
                };
                low_ok && high_ok
            }
            Window::Polygon { vertices } => {
                let p = [y[0].clone(), y[1].clone()];
                let n = vertices.len();
                (0..n).all(|i| !cross(&vertices[i], &vertices[(i + 1) % n], &p).is_negative())
            }
        }
    }

    pub fn on_boundary(&self, y: &[AlgebraicNumber]) -> bool {
        match self {
            Window::Interval { lo, hi } => y[0] == *lo || y[0] == *hi,
            Window::Polygon { vertices } => {
                let p = [y[0].clone(), y[1].clone()];
                self.contains(y, Convention::Closed)
                    && (0..vertices.len()).any(|i| cross(&vertices[i], &vertices[(i + 1) % vertices.len()], &p).is_zero())
            }
        }
    }

    /// Coordinate-wise bounding box.
    pub fn bounding_box(&self) -> Vec<(AlgebraicNumber, AlgebraicNumber)> {
        match self {
            Window::Interval { lo, hi } => vec![(lo.clone(), hi.clone())],
            Window::Polygon { vertices } => (0..2)
                .map(|j| {
                    let lo = vertices.iter().map(|v| v[j].clone()).min().expect("vertices");
                    let hi = vertices.iter().map(|v| v[j].clone()).max().expect("vertices");
                    (lo, hi)
                })
                .collect(),
        }
    }

    /// Length or area.
    pub fn measure(&self) -> AlgebraicNumber {
        match self {
            Window::Interval { lo, hi } => hi - lo,
            Window::Polygon { vertices } => {
                let o = &vertices[0];
                let mut a = AlgebraicNumber::zero(o[0].field());
                for i in 1..vertices.len() - 1 {
                    a = &a + &cross(o, &vertices[i], &vertices[i + 1]);
                }
                a.half()
            }
        }
    }
}

/// Basis vector i is `basis[i] = [physical, internal_1, .., internal_k]`.
#[derive(Clone, Debug)]
pub struct CutProjectScheme {
    pub name: String,
    pub field: Field,
    pub k: usize,
    pub basis: Vec<Vec<AlgebraicNumber>>,
    pub window: Window,
}

#[derive(Clone, Debug)]
pub struct SchemeReport {
    pub physical_rank: usize,
    pub internal_rank: usize,
    pub dense_physical: bool,
    pub dense_internal: bool,
    pub window_measure: AlgebraicNumber,
}

impl fmt::Display for SchemeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "physical Q-rank {}, internal Q-rank {}, dense physical {}, dense internal {}, window measure {}",
            self.physical_rank, self.internal_rank, self.dense_physical, self.dense_internal, self.window_measure
        )
    }
}

/// Rank over ℚ of rational row vectors.
pub fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let Some(w) = rows.first().map(|r| r.len()) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..w {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &rows[rank][col];
                for c in col..w {
                    let t = &f * &rows[rank][c];
                    rows[r][c] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rational solution of Σ c_i v_i = t over the power-basis coordinates,
/// when one exists (the v_i are ℚ-independent).
fn rational_combination(vs: &[Vec<AlgebraicNumber>], t: &[AlgebraicNumber]) -> Option<Vec<BigRational>> {
    let m = vs.len();
    // One equation per (component, power-basis coordinate).
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for (comp, tc) in t.iter().enumerate() {
        for q in 0..tc.field().degree() {
            let coord = |x: &AlgebraicNumber| x.coords().get(q).cloned().unwrap_or_else(BigRational::zero);
            let mut row: Vec<BigRational> = vs.iter().map(|v| coord(&v[comp])).collect();
            row.push(coord(tc));
            rows.push(row);
        }
    }
    let mut piv = Vec::new();
    let mut rank = 0;
    for col in 0..m {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = BigRational::from_integer(1.into()) / &rows[rank][col];
        for c in col..=m {
            rows[rank][c] = &rows[rank][c] * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=m {
                    let t = &f * &rows[rank][c];
                    rows[r][c] -= t;
                }
            }
        }
        piv.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[m].is_zero()) || rank < m {
        return None;
    }
    let mut out = vec![BigRational::zero(); m];
    for (r, &c) in piv.iter().enumerate() {
        out[c] = rows[r][m].clone();
    }
    Some(out)
}

/// Solve A x = b over the field.
fn field_solve(a: &[Vec<AlgebraicNumber>], b: &[AlgebraicNumber]) -> Option<Vec<AlgebraicNumber>> {
    let n = a.len();
    let mut m: Vec<Vec<AlgebraicNumber>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let inv = m[col][col].inv()?;
        for c in col..=n {
            m[col][c] = &m[col][c] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let t = &f * &m[col][c];
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Lattice coordinates with the embedded point B c + shift.
type Hit = (Vec<BigInt>, Vec<AlgebraicNumber>);

#[derive(Clone, Debug)]
pub struct ModelSetSample {
    /// x = (physical, internal..).
    pub shift: Vec<AlgebraicNumber>,
    pub region: (AlgebraicNumber, AlgebraicNumber),
    pub convention: Convention,
    pub points: PointSet,
    /// Lattice coordinates of the lift of each point, in point order.
    pub lifts: Vec<Vec<BigInt>>,
}

/// x + Γ reduced to lattice coordinates in [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    pub coords: Vec<AlgebraicNumber>,
}

#[derive(Clone, Debug)]
pub struct Singularity {
    pub singular: bool,
    /// Lattice coordinates of γ with π⊥(γ + x) ∈ ∂K.
    pub witnesses: Vec<Vec<BigInt>>,
    /// Physical search radius when the decision is a bounded search.
    pub search_bound: Option<AlgebraicNumber>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regularity {
    Regular(String),
    NotRegular(String),
}

impl CutProjectScheme {
    pub fn new(name: &str, field: &Field, basis: Vec<Vec<AlgebraicNumber>>, window: Window) -> Result<Self, ModelSetError> {
        let k = window.dimension();
        if basis.len() != k + 1 || basis.iter().any(|v| v.len() != k + 1) {
            return Err(ModelSetError::BadBasis);
        }
        let s = CutProjectScheme {
            name: name.to_string(),
            field: field.clone(),
            k,
            basis,
            window,
        };
        s.validate()?;
        Ok(s)
    }

    fn dim(&self) -> usize {
        self.k + 1
    }

    /// Matrix with column i the basis vector i.
    fn matrix(&self) -> Vec<Vec<AlgebraicNumber>> {
        (0..self.dim())
            .map(|r| (0..self.dim()).map(|i| self.basis[i][r].clone()).collect())
            .collect()
    }

    pub fn lattice_point(&self, c: &[BigInt]) -> Vec<AlgebraicNumber> {
        let mut y = vec![AlgebraicNumber::zero(&self.field); self.dim()];
        for (ci, b) in c.iter().zip(&self.basis) {
            if ci.is_zero() {
                continue;
            }
            let q = BigRational::from_integer(ci.clone());
            for r in 0..self.dim() {
                y[r] = &y[r] + &b[r].scale(&q);
            }
        }
        y
    }

    fn coord_rows(&self, comps: std::ops::Range<usize>) -> Vec<Vec<BigRational>> {
        let d = self.field.degree();
        self.basis
            .iter()
            .map(|v| {
                comps
                    .clone()
                    .flat_map(|c| (0..d).map(move |q| v[c].coords().get(q).cloned().unwrap_or_else(BigRational::zero)))
                    .collect()
            })
            .collect()
    }

    /// Injectivity and density from ℚ-ranks; nondegenerate window.
    pub fn validate(&self) -> Result<SchemeReport, ModelSetError> {
        let m = self.matrix();
        let zero_rhs = vec![AlgebraicNumber::zero(&self.field); self.dim()];
        let mut probe = zero_rhs.clone();
        probe[0] = AlgebraicNumber::one(&self.field);
        if field_solve(&m, &probe).is_none() {
            return Err(ModelSetError::BadBasis);
        }
        let physical_rank = rational_rank(self.coord_rows(0..1));
        if physical_rank < self.dim() {
            return Err(ModelSetError::ProjectionNotInjective("physical"));
        }
        let internal_rank = rational_rank(self.coord_rows(1..self.dim()));
        if internal_rank < self.dim() {
            return Err(ModelSetError::ProjectionNotInjective("internal"));
        }
        let measure = match &self.window {
            Window::Interval { lo, hi } => {
                if lo >= hi {
                    return Err(ModelSetError::DegenerateWindow(format!("[{}, {}]", lo, hi)));
                }
                hi - lo
            }
            Window::Polygon { vertices } => {
                let n = vertices.len();
                if n < 3 {
                    return Err(ModelSetError::DegenerateWindow("polygon with fewer than three vertices".into()));
                }
                if (0..n).any(|i| !cross(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]).is_positive()) {
                    return Err(ModelSetError::DegenerateWindow(
                        "polygon is not strictly convex and counterclockwise".into(),
                    ));
                }
                self.window.measure()
            }
        };
        // A finitely generated subgroup of ℝ is dense iff its rank is at
        // least 2. In ℝ², Γ⊥ = ℤu + ℤv + ℤw is dense iff, with w = au + bv,
        // the numbers 1, a, b are ℚ-independent.
        let dense_physical = physical_rank >= 2;
        let dense_internal = match self.k {
            1 => internal_rank >= 2,
            _ => {
                let u = &self.basis[0][1..];
                let v = &self.basis[1][1..];
                let w = &self.basis[2][1..];
                let a = vec![vec![u[0].clone(), v[0].clone()], vec![u[1].clone(), v[1].clone()]];
                match field_solve(&a, w) {
                    Some(ab) => {
                        let one = AlgebraicNumber::one(&self.field);
                        let rows = [one, ab[0].clone(), ab[1].clone()]
                            .iter()
                            .map(|x| {
                                (0..self.field.degree())
                                    .map(|q| x.coords().get(q).cloned().unwrap_or_else(BigRational::zero))
                                    .collect()
                            })
                            .collect();
                        rational_rank(rows) == 3
                    }
                    None => false,
                }
            }
        };
        if !dense_physical {
            return Err(ModelSetError::NotDense("physical"));
        }
        if !dense_internal {
            return Err(ModelSetError::NotDense("internal"));
        }
        Ok(SchemeReport {
            physical_rank,
            internal_rank,
            dense_physical,
            dense_internal,
            window_measure: measure,
        })
    }

    /// Lattice coordinate ranges whose images can meet the box.
    fn coordinate_ranges(&self, shift: &[AlgebraicNumber], bx: &[(AlgebraicNumber, AlgebraicNumber)]) -> Vec<(i64, i64)> {
        let n = self.dim();
        let m = self.matrix();
        let mut inv = vec![vec![0f64; n]; n];
        for j in 0..n {
            let mut e = vec![AlgebraicNumber::zero(&self.field); n];
            e[j] = AlgebraicNumber::one(&self.field);
            let col = field_solve(&m, &e).expect("validated basis");
            for i in 0..n {
                inv[i][j] = col[i].to_f64();
            }
        }
        let lo: Vec<f64> = bx.iter().zip(shift).map(|((l, _), x)| (l - x).to_f64()).collect();
        let hi: Vec<f64> = bx.iter().zip(shift).map(|((_, h), x)| (h - x).to_f64()).collect();
        (0..n)
            .map(|i| {
                let (mut a, mut b) = (0.0, 0.0);
                for j in 0..n {
                    let (p, q) = (inv[i][j] * lo[j], inv[i][j] * hi[j]);
                    a += p.min(q);
                    b += p.max(q);
                }
                let pad = 1e-9 * (a.abs() + b.abs()) + 1.0;
                ((a - pad).floor() as i64, (b + pad).ceil() as i64)
            })
            .collect()
    }

    /// Lattice coordinates c with B c + shift in the box, filtered by `keep`.
    fn enumerate<F>(
        &self,
        shift: &[AlgebraicNumber],
        bx: &[(AlgebraicNumber, AlgebraicNumber)],
        budget: usize,
        mut keep: F,
    ) -> Result<Vec<Hit>, ModelSetError>
    where
        F: FnMut(&[AlgebraicNumber]) -> bool,
    {
        let n = self.dim();
        let ranges = self.coordinate_ranges(shift, bx);
        let estimate: f64 = ranges[1..].iter().map(|(a, b)| (b - a + 1) as f64).product();
        if estimate > budget as f64 {
            return Err(ModelSetError::RegionTooLarge { estimate, budget });
        }
        let bf: Vec<Vec<f64>> = self.matrix().iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect();
        let xf: Vec<f64> = shift.iter().map(|x| x.to_f64()).collect();
        let lo: Vec<f64> = bx.iter().map(|(l, _)| l.to_f64()).collect();
        let hi: Vec<f64> = bx.iter().map(|(_, h)| h.to_f64()).collect();
        let mut out = Vec::new();
        let mut tail: Vec<i64> = ranges[1..].iter().map(|r| r.0).collect();
        loop {
            // Intersect the constraints on c_0 row by row.
            let (mut a, mut b) = (ranges[0].0 as f64, ranges[0].1 as f64);
            for j in 0..n {
                let rest: f64 = (1..n).map(|i| tail[i - 1] as f64 * bf[j][i]).sum::<f64>() + xf[j];
                let coef = bf[j][0];
                if coef.abs() < 1e-300 {
                    continue;
                }
                let (p, q) = ((lo[j] - rest) / coef, (hi[j] - rest) / coef);
                let pad = 1e-9 * (p.abs() + q.abs()) + 1e-6;
                a = a.max(p.min(q) - pad);
                b = b.min(p.max(q) + pad);
            }
            if a <= b {
                for c0 in (a.ceil() as i64)..=(b.floor() as i64) {
                    let mut c = vec![BigInt::from(c0)];
                    c.extend(tail.iter().map(|&t| BigInt::from(t)));
                    let g = self.lattice_point(&c);
                    let y: Vec<AlgebraicNumber> = g.iter().zip(shift).map(|(g, x)| g + x).collect();
                    let inside = y.iter().zip(bx).all(|(v, (l, h))| v >= l && v <= h);
                    if inside && keep(&y) {
                        out.push((c, y));
                    }
                }
            }
            // Odometer over the tail coordinates.
            let mut i = 0;
            loop {
                if i == tail.len() {
                    return Ok(out);
                }
                if tail[i] < ranges[i + 1].1 {
                    tail[i] += 1;
                    break;
                }
                tail[i] = ranges[i + 1].0;
                i += 1;
            }
        }
    }

    /// M_x on the physical region: π∥(γ + x) for γ ∈ Γ with π⊥(γ + x) ∈ K.
    pub fn model_set(
        &self,
        shift: &[AlgebraicNumber],
        region: (&AlgebraicNumber, &AlgebraicNumber),
        conv: Convention,
        budget: usize,
    ) -> Result<ModelSetSample, ModelSetError> {
        let mut bx = vec![(region.0.clone(), region.1.clone())];
        bx.extend(self.window.bounding_box());
        let window = &self.window;
        let mut found = self.enumerate(shift, &bx, budget, |y| window.contains(&y[1..], conv))?;
        found.sort_by(|a, b| a.1[0].cmp(&b.1[0]));
        let radius = std::cmp::max(region.0.abs(), region.1.abs());
        let points = PointSet::new(found.iter().map(|(_, y)| y[0].clone()).collect(), radius);
        Ok(ModelSetSample {
            shift: shift.to_vec(),
            region: (region.0.clone(), region.1.clone()),
            convention: conv,
            points,
            lifts: found.into_iter().map(|(c, _)| c).collect(),
        })
    }

    /// Whether π⊥(x) ∈ ∂K + π⊥(Γ). Exact for interval windows; for polygons
    /// the lattice is searched with physical coordinate within `bound`.
    pub fn is_singular(&self, shift: &[AlgebraicNumber], bound: &AlgebraicNumber, budget: usize) -> Result<Singularity, ModelSetError> {
        match &self.window {
            Window::Interval { lo, hi } => {
                let internal: Vec<Vec<AlgebraicNumber>> = self.basis.iter().map(|v| vec![v[1].clone()]).collect();
                let mut witnesses = Vec::new();
                for e in [lo, hi] {
                    let t = e - &shift[1];
                    if let Some(c) = rational_combination(&internal, &[t]) {
                        if c.iter().all(|q| q.is_integer()) {
                            witnesses.push(c.iter().map(|q| q.to_integer()).collect());
                        }
                    }
                }
                Ok(Singularity {
                    singular: !witnesses.is_empty(),
                    witnesses,
                    search_bound: None,
                })
            }
            Window::Polygon { .. } => {
                let mut bx = vec![(-bound, bound.clone())];
                bx.extend(self.window.bounding_box());
                let window = &self.window;
                let mut phys_shift = shift.to_vec();
                phys_shift[0] = AlgebraicNumber::zero(&self.field);
                let found = self.enumerate(&phys_shift, &bx, budget, |y| window.on_boundary(&y[1..]))?;
                Ok(Singularity {
                    singular: !found.is_empty(),
                    witnesses: found.into_iter().map(|(c, _)| c).collect(),
                    search_bound: Some(bound.clone()),
                })
            }
        }
    }

    /// Lattice coordinates of the γ with π∥(γ) = y, if there is one.
    pub fn lift(&self, y: &AlgebraicNumber) -> Option<Vec<BigInt>> {
        let phys: Vec<Vec<AlgebraicNumber>> = self.basis.iter().map(|v| vec![v[0].clone()]).collect();
        let c = rational_combination(&phys, std::slice::from_ref(y))?;
        c.iter().all(|q| q.is_integer()).then(|| c.iter().map(|q| q.to_integer()).collect())
    }

    pub fn torus_map(&self, shift: &[AlgebraicNumber]) -> TorusPoint {
        let c = field_solve(&self.matrix(), shift).expect("validated basis");
        TorusPoint {
            coords: c
                .iter()
                .map(|v| v - &AlgebraicNumber::from_rational(&self.field, BigRational::from_integer(v.floor())))
                .collect(),
        }
    }

    /// The representative B·ξ of a torus point.
    pub fn representative(&self, xi: &TorusPoint) -> Vec<AlgebraicNumber> {
        let m = self.matrix();
        (0..self.dim())
            .map(|r| (0..self.dim()).fold(AlgebraicNumber::zero(&self.field), |acc, i| &acc + &(&m[r][i] * &xi.coords[i])))
            .collect()
    }

    /// Model sets over ξ: one at non-singular points, the two one-sided
    /// limits at singular points. Interval windows only.
    pub fn fiber(
        &self,
        xi: &TorusPoint,
        region: (&AlgebraicNumber, &AlgebraicNumber),
        budget: usize,
    ) -> Result<(Singularity, Vec<ModelSetSample>), ModelSetError> {
        if self.k != 1 {
            return Err(ModelSetError::Unsupported("fibers over polygon windows".into()));
        }
        let x = self.representative(xi);
        let sing = self.is_singular(&x, region.1, budget)?;
        let samples = if sing.singular {
            vec![
                self.model_set(&x, region, Convention::OpenHigh, budget)?,
                self.model_set(&x, region, Convention::OpenLow, budget)?,
            ]
        } else {
            vec![self.model_set(&x, region, Convention::Closed, budget)?]
        };
        Ok((sing, samples))
    }

    pub fn regularity(&self) -> Regularity {
        match self.window {
            Window::Interval { .. } => Regularity::Regular("boundary of an interval is two points".into()),
            Window::Polygon { .. } => Regularity::Regular("boundary of a polygon is a finite union of segments".into()),
        }
    }
}

/// Exact comparison of two samples on their common region; the first
/// point present in only one of them.
pub fn first_difference(a: &PointSet, b: &PointSet) -> Option<AlgebraicNumber> {
    let (mut i, mut j) = (0, 0);
    while i < a.points.len() && j < b.points.len() {
        match a.points[i].cmp(&b.points[j]) {
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
            Ordering::Less => return Some(a.points[i].clone()),
            Ordering::Greater => return Some(b.points[j].clone()),
        }
    }
    a.points.get(i).or_else(|| b.points.get(j)).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{MinimalPolynomial, NumberField};

    fn golden() -> Field {
        NumberField::new(MinimalPolynomial::from_i64(&[-1, -1, 1]).unwrap()).unwrap()
    }

    fn el(f: &Field, s: &str) -> AlgebraicNumber {
        AlgebraicNumber::parse(f, s).unwrap()
    }

    pub fn fibonacci_scheme() -> CutProjectScheme {
        let f = golden();
        CutProjectScheme::new(
            "fib",
            &f,
            vec![vec![el(&f, "1"), el(&f, "1")], vec![el(&f, "l"), el(&f, "1 - l")]],
            Window::Interval {
                lo: el(&f, "-1"),
                hi: el(&f, "l"),
            },
        )
        .unwrap()
    }

    #[test]
    fn validation_errors() {
        let f = golden();
        let z2 = CutProjectScheme::new(
            "z2",
            &f,
            vec![vec![el(&f, "1"), el(&f, "0")], vec![el(&f, "0"), el(&f, "1")]],
            Window::Interval {
                lo: el(&f, "0"),
                hi: el(&f, "1"),
            },
        );
        assert!(matches!(
            z2,
            Err(ModelSetError::ProjectionNotInjective(_)) | Err(ModelSetError::BadBasis)
        ));
        let point = CutProjectScheme::new(
            "pt",
            &f,
            vec![vec![el(&f, "1"), el(&f, "1")], vec![el(&f, "l"), el(&f, "1 - l")]],
            Window::Interval {
                lo: el(&f, "1"),
                hi: el(&f, "1"),
            },
        );
        assert!(matches!(point, Err(ModelSetError::DegenerateWindow(_))));
    }

    #[test]
    fn origin_is_in_m0() {
        let s = fibonacci_scheme();
        let f = s.field.clone();
        let zero = AlgebraicNumber::zero(&f);
        let r = el(&f, "1/10");
        let m = s
            .model_set(&[zero.clone(), zero.clone()], (&-&r, &r), Convention::Closed, 1000)
            .unwrap();
        assert_eq!(m.points.points, vec![zero]);
    }

    #[test]
    fn gaps_are_one_and_golden_inverse() {
        let s = fibonacci_scheme();
        let f = s.field.clone();
        let x = [el(&f, "0"), el(&f, "1/3")];
        let r = el(&f, "50");
        let m = s.model_set(&x, (&-&r, &r), Convention::Closed, 10_000).unwrap();
        let long = el(&f, "1");
        let short = el(&f, "l - 1");
        assert!(m.points.gaps().iter().all(|g| *g == long || *g == short));
    }

    #[test]
    fn singular_points() {
        let s = fibonacci_scheme();
        let f = s.field.clone();
        let b = el(&f, "10");
        let zero = AlgebraicNumber::zero(&f);
        let at_hi = s.is_singular(&[zero.clone(), el(&f, "l")], &b, 1000).unwrap();
        assert!(at_hi.singular);
        let generic = s.is_singular(&[zero.clone(), el(&f, "2/7")], &b, 1000).unwrap();
        assert!(!generic.singular);
    }

    #[test]
    fn torus_map_is_lattice_invariant() {
        let s = fibonacci_scheme();
        let f = s.field.clone();
        let x = vec![el(&f, "1/5 + 1/7*l"), el(&f, "2/3")];
        let g = s.lattice_point(&[BigInt::from(3), BigInt::from(-8)]);
        let y: Vec<AlgebraicNumber> = x.iter().zip(&g).map(|(a, b)| a + b).collect();
        assert_eq!(s.torus_map(&x), s.torus_map(&y));
        assert!(s.torus_map(&g).coords.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn polygon_scheme() {
        let f = NumberField::new(MinimalPolynomial::from_i64(&[-2, 0, 0, 1]).unwrap()).unwrap();
        let s = CutProjectScheme::new(
            "cubic",
            &f,
            vec![
                vec![el(&f, "1"), el(&f, "1"), el(&f, "0")],
                vec![el(&f, "l"), el(&f, "0"), el(&f, "1")],
                vec![el(&f, "l^2"), el(&f, "l"), el(&f, "l^2")],
            ],
            Window::Polygon {
                vertices: vec![
                    [el(&f, "-1"), el(&f, "-1")],
                    [el(&f, "1"), el(&f, "-1")],
                    [el(&f, "1"), el(&f, "1")],
                    [el(&f, "-1"), el(&f, "1")],
                ],
            },
        )
        .unwrap();
        assert_eq!(
            s.regularity(),
            Regularity::Regular("boundary of a polygon is a finite union of segments".into())
        );
        let zero = AlgebraicNumber::zero(&f);
        let r = el(&f, "5");
        let m = s
            .model_set(&[zero.clone(), zero.clone(), zero.clone()], (&-&r, &r), Convention::Closed, 100_000)
            .unwrap();
        assert!(m.points.points.contains(&zero));
        let sing = s.is_singular(&[zero.clone(), el(&f, "1"), zero.clone()], &r, 100_000).unwrap();
        assert!(sing.singular);
    }
}
