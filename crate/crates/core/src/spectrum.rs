//! Eigenvalue lattice Γ of a Pisot substitution, the direct limit
//! E = lim(Γ, Λ*), and numerical validation of eigenvalues.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::perron::charpoly;
use crate::algebra::roots::has_unit_modulus_root;
use crate::algebra::{AlgebraicNumber, Field};
use crate::substitution::{PisotVerdict, SubstitutionSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("not a Pisot family: {0}")]
    NotPisotFamily(String),
    #[error("return module has rank {0}, expected {1}")]
    DegenerateReturnModule(usize, usize),
    #[error("window too small: need at least {0} return vectors")]
    WindowTooSmall(usize),
}

/// Z-basis of the return module Ξ, λ-invariant.
#[derive(Clone, Debug)]
pub struct ReturnModule {
    pub basis: Vec<AlgebraicNumber>,
}

#[derive(Clone, Debug)]
pub struct EigenvalueLattice {
    pub field: Field,
    /// Basis of Γ = {γ : Tr(γξ) ∈ ℤ for all ξ ∈ Ξ}.
    pub basis: Vec<AlgebraicNumber>,
    /// Matrix of γ ↦ λγ in that basis (column j is the image of basis j).
    pub star: Vec<Vec<BigInt>>,
    pub degree: usize,
    pub multiplicity: usize,
    pub returns: ReturnModule,
    /// [Γ : Γ'] for the sublattice Γ' found by validation; 1 when Γ is
    /// the exact dual.
    pub index_bound: usize,
}

/// Element Λ*^{−level}γ of E, with γ given by integer coordinates in Γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenvalueGroupElement {
    pub level: u32,
    pub coords: Vec<BigInt>,
}

fn int_to_rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Row-style Hermite reduction of integer vectors; returns a basis of their span.
pub fn integer_basis(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let Some(n) = rows.first().map(|r| r.len()) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for col in 0..n {
        loop {
            rows.retain(|r| r.iter().any(|x| !x.is_zero()));
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).expect("nonempty");
            let pivot = rows[p].clone();
            for &i in &nz {
                if i != p {
                    let q = rows[i][col].div_floor(&pivot[col]);
                    for k in 0..n {
                        let t = &q * &pivot[k];
                        rows[i][k] -= t;
                    }
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| !rows[i][col].is_zero()) {
            let mut r = rows.swap_remove(i);
            if r[col].is_negative() {
                r.iter_mut().for_each(|x| *x = -x.clone());
            }
            out.push(r);
        }
    }
    out
}

/// ℤ-module generated by field elements, as a basis of field elements.
fn module_basis(field: &Field, gens: &[AlgebraicNumber]) -> Vec<AlgebraicNumber> {
    let den = gens.iter().fold(BigInt::one(), |acc, g| acc.lcm(&g.denominator()));
    let rows: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| g.coords().iter().map(|c| (c * int_to_rat(&den)).to_integer()).collect())
        .collect();
    let d = BigRational::from_integer(den);
    integer_basis(rows)
        .into_iter()
        .map(|r| AlgebraicNumber::from_coords(field, r.iter().map(|x| int_to_rat(x) / &d).collect()))
        .collect()
}

/// Return module: differences of positions of equal-type tiles in deep
/// supertiles, closed under multiplication by λ.
pub fn return_module(sys: &SubstitutionSystem) -> ReturnModule {
    let field = sys.field().clone();
    let n = sys.letter_count();
    let mut depth = 1;
    while (0..n).any(|i| {
        let w = sys.iterate_word(&[i], depth);
        (0..n).any(|j| w.iter().filter(|&&x| x == j).count() < 3)
    }) {
        depth += 1;
    }
    let mut gens = Vec::new();
    for &(x, y) in &sys.legal_pairs {
        let mut p = crate::tiling::Patch {
            tiles: vec![
                crate::tiling::PlacedTile::new(x, AlgebraicNumber::zero(&field), sys.length(x)),
                crate::tiling::PlacedTile::new(y, sys.length(x).clone(), sys.length(y)),
            ],
        };
        for _ in 0..depth {
            p = sys.inflate(&p);
        }
        let mut last: Vec<Option<AlgebraicNumber>> = vec![None; n];
        for t in &p.tiles {
            if let Some(prev) = &last[t.proto] {
                gens.push(&t.start - prev);
            }
            last[t.proto] = Some(t.start.clone());
        }
    }
    let mut basis = module_basis(&field, &gens);
    loop {
        let mut ext = basis.clone();
        ext.extend(basis.iter().map(|b| &sys.lambda * b));
        let next = module_basis(&field, &ext);
        if next == basis {
            break;
        }
        basis = next;
    }
    ReturnModule { basis }
}

/// Distinct differences of consecutive equal-type tile positions in a window.
pub fn window_returns(w: &crate::tiling::TilingWindow) -> Vec<AlgebraicNumber> {
    let mut last: std::collections::HashMap<usize, AlgebraicNumber> = std::collections::HashMap::new();
    let mut out = Vec::new();
    for t in &w.patch.tiles {
        if let Some(prev) = last.insert(t.proto, t.start.clone()) {
            out.push(&t.start - &prev);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Solve the square rational system A x = b.
fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
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
        let inv = BigRational::one() / &m[col][col];
        for k in col..=n {
            m[col][k] = &m[col][k] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in col..=n {
                    let t = &f * &m[col][k];
                    m[r][k] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

fn invert(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<BigRational> = (0..n)
            .map(|i| if i == j { BigRational::one() } else { BigRational::zero() })
            .collect();
        cols.push(solve(a, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Coordinates of `x` in the given ℚ-basis of the field.
pub fn coords_in_basis(basis: &[AlgebraicNumber], x: &AlgebraicNumber) -> Option<Vec<BigRational>> {
    let d = basis.len();
    let a: Vec<Vec<BigRational>> = (0..d).map(|i| (0..d).map(|j| basis[j].coords()[i].clone()).collect()).collect();
    solve(&a, x.coords())
}

/// Γ as the trace dual of Ξ, with the matrix of multiplication by λ.
pub fn eigenvalue_lattice(sys: &SubstitutionSystem) -> Result<EigenvalueLattice, SpectrumError> {
    if let v @ PisotVerdict::NotPisotFamily { .. } = sys.pisot_family_check() {
        return Err(SpectrumError::NotPisotFamily(v.to_string()));
    }
    let field = sys.field().clone();
    let d = field.degree();
    let returns = return_module(sys);
    if returns.basis.len() != d {
        return Err(SpectrumError::DegenerateReturnModule(returns.basis.len(), d));
    }
    // Gram matrix of the trace form in the power basis.
    let g: Vec<Vec<BigRational>> = (0..d)
        .map(|i| (0..d).map(|j| int_to_rat(field.trace_of_power(i + j))).collect())
        .collect();
    // Column j of Z: coordinates of ξ_j.
    let gz: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).fold(BigRational::zero(), |acc, k| acc + &g[i][k] * &returns.basis[j].coords()[k]))
                .collect()
        })
        .collect();
    // Y = ((GZ)^{-1})ᵀ: y_iᵀ G z_j = δ_ij.
    let inv = invert(&gz).expect("trace form is nondegenerate");
    let basis: Vec<AlgebraicNumber> = (0..d)
        .map(|i| AlgebraicNumber::from_coords(&field, (0..d).map(|k| inv[i][k].clone()).collect()))
        .collect();
    let mut star = vec![vec![BigInt::zero(); d]; d];
    for j in 0..d {
        let img = &sys.lambda * &basis[j];
        let c = coords_in_basis(&basis, &img).expect("basis spans the field");
        for i in 0..d {
            assert!(c[i].is_integer(), "Γ is λ-invariant");
            star[i][j] = c[i].to_integer();
        }
    }
    Ok(EigenvalueLattice {
        field,
        basis,
        star,
        degree: d,
        multiplicity: 1,
        returns,
        index_bound: 1,
    })
}

impl EigenvalueLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn star_det(&self) -> BigInt {
        let m: Vec<Vec<BigRational>> = self.star.iter().map(|r| r.iter().map(int_to_rat).collect()).collect();
        let cp = charpoly(&m);
        let det = if self.rank().is_multiple_of(2) {
            cp[0].clone()
        } else {
            -cp[0].clone()
        };
        det.to_integer()
    }

    /// Characteristic polynomial of Λ*, low degree first.
    pub fn star_charpoly(&self) -> Vec<BigInt> {
        let m: Vec<Vec<BigRational>> = self.star.iter().map(|r| r.iter().map(int_to_rat).collect()).collect();
        charpoly(&m).into_iter().map(|c| c.to_integer()).collect()
    }

    pub fn element(&self, coords: &[BigInt]) -> AlgebraicNumber {
        coords
            .iter()
            .zip(&self.basis)
            .fold(AlgebraicNumber::zero(&self.field), |acc, (c, b)| &acc + &b.scale(&int_to_rat(c)))
    }

    pub fn contains(&self, x: &AlgebraicNumber) -> bool {
        coords_in_basis(&self.basis, x).is_some_and(|c| c.iter().all(|q| q.is_integer()))
    }

    fn apply_star(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rank())
            .map(|i| (0..self.rank()).fold(BigInt::zero(), |acc, j| acc + &self.star[i][j] * &v[j]))
            .collect()
    }

    /// Λ*^{-1} v when it is integral.
    fn divide_star(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let m: Vec<Vec<BigRational>> = self.star.iter().map(|r| r.iter().map(int_to_rat).collect()).collect();
        let b: Vec<BigRational> = v.iter().map(int_to_rat).collect();
        let x = solve(&m, &b)?;
        x.iter().all(|q| q.is_integer()).then(|| x.iter().map(|q| q.to_integer()).collect())
    }

    /// Minimal-level representative of (m, γ) under (m, γ) ~ (m+1, Λ*γ).
    pub fn canonicalize(&self, e: &EigenvalueGroupElement) -> EigenvalueGroupElement {
        let mut cur = e.clone();
        while cur.level > 0 {
            match self.divide_star(&cur.coords) {
                Some(c) => {
                    cur = EigenvalueGroupElement {
                        level: cur.level - 1,
                        coords: c,
                    }
                }
                None => break,
            }
        }
        cur
    }

    /// (m+1, Λ*γ), the same element of E.
    pub fn raise(&self, e: &EigenvalueGroupElement) -> EigenvalueGroupElement {
        EigenvalueGroupElement {
            level: e.level + 1,
            coords: self.apply_star(&e.coords),
        }
    }

    /// The real number λ^{-m}γ.
    pub fn value(&self, e: &EigenvalueGroupElement, lambda: &AlgebraicNumber) -> AlgebraicNumber {
        let g = self.element(&e.coords);
        let inv = lambda.inv().expect("λ ≠ 0");
        &g * &inv.pow(e.level)
    }
}

#[derive(Clone, Debug)]
pub struct EigenTestReport {
    pub beta: AlgebraicNumber,
    pub return_vectors: Vec<AlgebraicNumber>,
    /// max_t |e^{2πiβλ^m t} − 1| for m = 0..levels.
    pub deviations: Vec<f64>,
    pub tolerance: f64,
    pub pass: bool,
    /// exp of the fitted slope of ln(deviation), when deviations are nonzero.
    pub decay_rate: Option<f64>,
}

/// Fractional part of a real field element, from a tight rational enclosure.
pub fn frac_f64(x: &AlgebraicNumber) -> f64 {
    let fl = BigRational::from_integer(x.floor());
    let (lo, hi) = x.enclosure();
    let mid = (lo + hi) / BigRational::from_integer(2.into()) - fl;
    mid.to_f64().unwrap_or(f64::NAN).clamp(0.0, 1.0)
}

/// Least-squares slope of ln(y) against x, over positive y.
pub fn log_linear_rate(ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = ys
        .iter()
        .enumerate()
        .filter(|(_, &y)| y > 1e-280)
        .map(|(i, &y)| (i as f64, y.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some((sxy / sxx).exp())
}

/// Checks e^{2πiβλ^m t} → 1 on return vectors t.
pub fn eigen_test(
    sys: &SubstitutionSystem,
    beta: &AlgebraicNumber,
    returns: &[AlgebraicNumber],
    levels: usize,
    tolerance: f64,
) -> Result<EigenTestReport, SpectrumError> {
    if returns.is_empty() {
        return Err(SpectrumError::WindowTooSmall(1));
    }
    let mut deviations = Vec::with_capacity(levels + 1);
    let mut scaled: Vec<AlgebraicNumber> = returns.iter().map(|t| beta * t).collect();
    for _ in 0..=levels {
        let dev = scaled
            .iter()
            .map(|x| 2.0 * (std::f64::consts::PI * frac_f64(x)).sin().abs())
            .fold(0.0f64, f64::max);
        deviations.push(dev);
        scaled = scaled.iter().map(|x| &sys.lambda * x).collect();
    }
    let last = *deviations.last().expect("at least one level");
    Ok(EigenTestReport {
        beta: beta.clone(),
        return_vectors: returns.to_vec(),
        pass: last < tolerance,
        decay_rate: log_linear_rate(&deviations),
        deviations,
        tolerance,
    })
}

/// Largest modulus among the conjugates of λ other than λ.
pub fn second_modulus(sys: &SubstitutionSystem) -> Option<f64> {
    let lam = sys.lambda.to_f64();
    let mut mods: Vec<f64> = sys.field().conjugates().iter().map(|d| d.approx().norm()).collect();
    mods.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let pos = mods.iter().position(|m| (m - lam.abs()).abs() < 1e-9)?;
    mods.remove(pos);
    mods.first().copied()
}

#[derive(Clone, Debug)]
pub struct FactorStructure {
    pub torus_dimension: usize,
    pub matrix: Vec<Vec<BigInt>>,
    pub det: BigInt,
    pub unimodular: bool,
}

impl fmt::Display for FactorStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(
            f,
            "inverse limit of T^{} under A = [{}], det A = {}, {}",
            self.torus_dimension,
            rows.join(", "),
            self.det,
            if self.unimodular { "E = Γ" } else { "E strictly contains Γ" }
        )
    }
}

pub fn factor_structure(lat: &EigenvalueLattice) -> FactorStructure {
    let det = lat.star_det();
    FactorStructure {
        torus_dimension: lat.degree * lat.multiplicity,
        matrix: lat.star.clone(),
        unimodular: det.abs().is_one(),
        det,
    }
}

/// No conjugate of λ on the unit circle (exact).
pub fn ergodicity_check(sys: &SubstitutionSystem) -> bool {
    !has_unit_modulus_root(sys.field().qpoly())
}

/// Density of E in ℝ: rank ≥ 2 lattices in a field of that degree are
/// dense; a rank-one Γ densifies in the limit exactly when |det Λ*| ≥ 2.
pub fn local_freeness_check(lat: &EigenvalueLattice) -> bool {
    match lat.rank() {
        0 => false,
        1 => lat.star_det().abs() >= BigInt::from(2),
        _ => {
            let ratio = lat.basis[1].checked_div(&lat.basis[0]);
            ratio.is_some_and(|r| r.as_rational().is_none())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(rules: &[(&str, &str)]) -> SubstitutionSystem {
        let letters: Vec<String> = rules.iter().map(|(l, _)| l.to_string()).collect();
        let words: Vec<Vec<String>> = rules.iter().map(|(_, w)| w.chars().map(|c| c.to_string()).collect()).collect();
        SubstitutionSystem::build("t", &letters, &words).unwrap()
    }

    #[test]
    fn hermite_basis() {
        let rows = vec![
            vec![BigInt::from(4), BigInt::from(6)],
            vec![BigInt::from(6), BigInt::from(9)],
            vec![BigInt::from(2), BigInt::from(4)],
        ];
        let b = integer_basis(rows);
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn fibonacci_lattice() {
        let s = build(&[("a", "ab"), ("b", "a")]);
        let lat = eigenvalue_lattice(&s).unwrap();
        assert_eq!(lat.rank(), 2);
        assert_eq!(lat.star_det(), BigInt::from(-1));
        // charpoly of Λ* is x² − x − 1
        let cp = lat.star_charpoly();
        assert_eq!(cp, vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)]);
        assert!(local_freeness_check(&lat));
    }

    #[test]
    fn thue_morse_lattice() {
        let s = build(&[("a", "ab"), ("b", "ba")]);
        let lat = eigenvalue_lattice(&s).unwrap();
        assert_eq!(lat.rank(), 1);
        assert_eq!(lat.star, vec![vec![BigInt::from(2)]]);
        let e = EigenvalueGroupElement {
            level: 3,
            coords: vec![BigInt::from(4)],
        };
        let c = lat.canonicalize(&e);
        assert_eq!(
            c,
            EigenvalueGroupElement {
                level: 1,
                coords: vec![BigInt::from(1)]
            }
        );
        assert_eq!(lat.canonicalize(&lat.raise(&c)), c);
        assert!(local_freeness_check(&lat));
    }
}
