//! The real number field ℚ(λ) with exact arithmetic and exact sign
//! determination at a distinguished real embedding.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::poly::{self, QPoly};
use super::roots::{self, RootDisc};
use super::AlgebraError;

/// Monic irreducible integer polynomial, coefficients low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinimalPolynomial {
    coeffs: Vec<BigInt>,
}

impl MinimalPolynomial {
    /// Wraps a coefficient list without checking irreducibility; see
    /// [`NumberField::new`] for the validated path.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self, AlgebraError> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        match coeffs.last() {
            None => Err(AlgebraError::ZeroPolynomial),
            Some(c) if !c.is_one() => Err(AlgebraError::NotMonic),
            _ if coeffs.len() < 2 => Err(AlgebraError::ConstantPolynomial),
            _ => Ok(MinimalPolynomial { coeffs }),
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self, AlgebraError> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn to_qpoly(&self) -> QPoly {
        poly::from_int_coeffs(&self.coeffs)
    }
}

impl fmt::Display for MinimalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// ℚ(λ) for λ the largest real root of a monic irreducible polynomial.
#[derive(Debug)]
pub struct NumberField {
    poly: MinimalPolynomial,
    qpoly: QPoly,
    /// x^(d+k) reduced into the power basis, k = 0..d-1.
    reductions: Vec<Vec<BigRational>>,
    /// λ ∈ (root_lo, root_hi), width ≤ 2^-ROOT_BITS.
    root_lo: BigRational,
    root_hi: BigRational,
    root_f64: f64,
    lo_powers: Vec<BigRational>,
    hi_powers: Vec<BigRational>,
    /// Tr(λ^k) for k < 2d.
    traces: Vec<BigInt>,
}

const ROOT_BITS: u32 = 160;

pub type Field = Arc<NumberField>;

impl NumberField {
    /// Validated construction: irreducible over ℚ with a real root > 1.
    pub fn new(poly: MinimalPolynomial) -> Result<Field, AlgebraError> {
        let q = poly.to_qpoly();
        if !is_irreducible(&q) {
            return Err(AlgebraError::ReduciblePolynomial(poly.to_string()));
        }
        Self::build(poly, true)
    }

    fn build(poly: MinimalPolynomial, need_expanding: bool) -> Result<Field, AlgebraError> {
        let q = poly.to_qpoly();
        let d = poly.degree();
        let real = roots::isolate_real(&q);
        let (lo, hi) = real
            .last()
            .cloned()
            .ok_or_else(|| AlgebraError::NoRealRootAboveOne(poly.to_string()))?;
        let one = BigRational::one();
        let seq = poly::sturm_sequence(&q);
        let above_one = poly::count_roots(&seq, &one, &poly::cauchy_bound(&q)) > 0;
        if need_expanding && !above_one {
            return Err(AlgebraError::NoRealRootAboveOne(poly.to_string()));
        }
        let width = BigRational::new(BigInt::one(), BigInt::one() << ROOT_BITS);
        let (root_lo, root_hi) = roots::refine_real(&q, lo, hi, &width);
        let root_f64 = ((&root_lo + &root_hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN);
        let mut reductions = Vec::with_capacity(d);
        // x^d = -(a_0 + ... + a_{d-1} x^{d-1})
        let mut cur: Vec<BigRational> = q[..d].iter().map(|c| -c.clone()).collect();
        for _ in 0..d {
            reductions.push(cur.clone());
            // multiply by x and reduce
            let top = cur[d - 1].clone();
            let mut next = vec![BigRational::zero(); d];
            for i in (1..d).rev() {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..d {
                next[i] += &top * &reductions[0][i];
            }
            cur = next;
        }
        let powers = |x: &BigRational| -> Vec<BigRational> {
            let mut v = Vec::with_capacity(d);
            let mut acc = BigRational::one();
            for _ in 0..d {
                v.push(acc.clone());
                acc *= x;
            }
            v
        };
        let lo_powers = powers(&root_lo);
        let hi_powers = powers(&root_hi);
        let traces = newton_traces(poly.coeffs(), 2 * d);
        Ok(Arc::new(NumberField {
            poly,
            qpoly: q,
            reductions,
            root_lo,
            root_hi,
            root_f64,
            lo_powers,
            hi_powers,
            traces,
        }))
    }

    /// ℚ itself, presented as ℚ(2) so that comparisons stay uniform.
    pub fn rationals() -> Field {
        Self::build(MinimalPolynomial::from_i64(&[-2, 1]).expect("x - 2"), true).expect("x - 2 is valid")
    }

    pub fn polynomial(&self) -> &MinimalPolynomial {
        &self.poly
    }

    pub fn qpoly(&self) -> &QPoly {
        &self.qpoly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn root_f64(&self) -> f64 {
        self.root_f64
    }

    pub fn root_interval(&self) -> (&BigRational, &BigRational) {
        (&self.root_lo, &self.root_hi)
    }

    /// Tr(λ^k) for k < 2·degree.
    pub fn trace_of_power(&self, k: usize) -> &BigInt {
        &self.traces[k]
    }

    /// Certified discs for every conjugate of λ, largest real root first.
    pub fn conjugates(&self) -> Vec<RootDisc> {
        let mut discs = roots::isolate_complex(&self.qpoly);
        let lam = self.root_f64;
        discs.sort_by(|a, b| {
            let da = (a.approx() - Complex64::new(lam, 0.0)).norm();
            let db = (b.approx() - Complex64::new(lam, 0.0)).norm();
            da.partial_cmp(&db).unwrap_or(Ordering::Equal)
        });
        discs
    }

    fn same(self: &Field, other: &Field) -> bool {
        Arc::ptr_eq(self, other) || self.poly == other.poly
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl Eq for NumberField {}

/// Power sums of the roots via Newton's identities.
fn newton_traces(coeffs: &[BigInt], count: usize) -> Vec<BigInt> {
    let d = coeffs.len() - 1;
    // e-style: p(x) = x^d + c_{d-1} x^{d-1} + ... ; use a_k = coeffs[d-k]
    let a = |k: usize| -> BigInt {
        if k <= d {
            coeffs[d - k].clone()
        } else {
            BigInt::zero()
        }
    };
    let mut s: Vec<BigInt> = Vec::with_capacity(count);
    for m in 0..count {
        if m == 0 {
            s.push(BigInt::from(d));
            continue;
        }
        let mut v = BigInt::zero();
        for k in 1..m.min(d + 1) {
            v -= a(k) * &s[m - k];
        }
        if m <= d {
            v -= BigInt::from(m) * a(m);
        } else {
            for k in m.min(d + 1)..=d {
                if k < m {
                    v -= a(k) * &s[m - k];
                }
            }
        }
        s.push(v);
    }
    s
}

/// Irreducibility over ℚ for monic integer polynomials: a proper monic factor
/// has integer coefficients and its roots are a subset of ours, so every
/// subset of numerically located roots is tested and confirmed by exact division.
pub fn is_irreducible(q: &[BigRational]) -> bool {
    let d = q.len() - 1;
    if d <= 1 {
        return true;
    }
    if poly::squarefree(q).len() != q.len() {
        return false;
    }
    let zs = roots::aberth(q);
    let mut chosen = Vec::new();
    !has_factor(q, &zs, 0, d / 2, &mut chosen)
}

fn has_factor(q: &[BigRational], zs: &[Complex64], from: usize, max: usize, chosen: &mut Vec<Complex64>) -> bool {
    if !chosen.is_empty() {
        if let Some(f) = integer_factor_candidate(chosen) {
            if poly::div_rem(q, &f).1.is_empty() {
                return true;
            }
        }
    }
    if chosen.len() == max {
        return false;
    }
    for i in from..zs.len() {
        chosen.push(zs[i]);
        let found = has_factor(q, zs, i + 1, max, chosen);
        chosen.pop();
        if found {
            return true;
        }
    }
    false
}

/// Monic integer polynomial with the given roots, if the product has
/// coefficients close to integers.
pub(crate) fn integer_factor_candidate(zs: &[Complex64]) -> Option<QPoly> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &z in zs {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= ci * z;
        }
        c = next;
    }
    let mut out = Vec::with_capacity(c.len());
    for ci in c {
        let r = ci.re.round();
        if ci.im.abs() > 1e-6 || (ci.re - r).abs() > 1e-6 * (1.0 + r.abs()) {
            return None;
        }
        out.push(BigRational::from_integer(BigInt::from(r as i64)));
    }
    Some(out)
}

/// Element of ℚ(λ) in the power basis 1, λ, …, λ^{d-1}.
#[derive(Clone)]
pub struct AlgebraicNumber {
    field: Field,
    coords: Vec<BigRational>,
}

impl AlgebraicNumber {
    pub fn from_coords(field: &Field, mut coords: Vec<BigRational>) -> Self {
        let d = field.degree();
        assert!(coords.len() <= d, "too many coordinates for a degree-{d} field");
        coords.resize(d, BigRational::zero());
        AlgebraicNumber {
            field: field.clone(),
            coords,
        }
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_coords(field, Vec::new())
    }

    pub fn one(field: &Field) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    pub fn from_int(field: &Field, k: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(k)))
    }

    pub fn from_rational(field: &Field, q: BigRational) -> Self {
        Self::from_coords(field, vec![q])
    }

    /// The distinguished root λ.
    pub fn generator(field: &Field) -> Self {
        if field.degree() == 1 {
            // x - r = 0 ⇒ λ = r
            return Self::from_rational(field, -field.qpoly[0].clone());
        }
        let mut c = vec![BigRational::zero(); field.degree()];
        c[1] = BigRational::one();
        Self::from_coords(field, c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Rational value when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn is_integral_coords(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    fn check(&self, other: &Self) {
        debug_assert!(self.field.same(&other.field), "mixed number fields");
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut a = self.coords.clone();
        poly::trim(&mut a);
        let s = poly::inverse_mod(&a, &self.field.qpoly)?;
        Some(Self::from_coords(&self.field, s))
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        Some(self * &other.inv()?)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        AlgebraicNumber {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    pub fn half(&self) -> Self {
        self.scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    /// Floating value at the distinguished embedding.
    pub fn to_f64(&self) -> f64 {
        let lam = self.field.root_f64;
        let mut acc = 0.0;
        for c in self.coords.iter().rev() {
            acc = acc * lam + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Rational enclosure of the real value.
    pub fn enclosure(&self) -> (BigRational, BigRational) {
        interval_eval(&self.coords, &self.field.lo_powers, &self.field.hi_powers)
    }

    /// Exact sign at the distinguished real embedding.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(q) = self.as_rational() {
            return q.cmp(&BigRational::zero());
        }
        // Fast path: floating evaluation with a generous error bound.
        let lam = self.field.root_f64;
        let mut val = 0.0f64;
        let mut mag = 0.0f64;
        let mut ok = true;
        for c in self.coords.iter().rev() {
            let cf = c.to_f64().unwrap_or(f64::NAN);
            if !cf.is_finite() {
                ok = false;
                break;
            }
            val = val * lam + cf;
            mag = mag * lam.abs() + cf.abs();
        }
        if ok && val.is_finite() {
            let err = mag * 1e-12 + f64::MIN_POSITIVE;
            if val > err {
                return Ordering::Greater;
            }
            if val < -err {
                return Ordering::Less;
            }
        }
        let (lo, hi) = self.enclosure();
        if lo.is_positive() {
            return Ordering::Greater;
        }
        if hi.is_negative() {
            return Ordering::Less;
        }
        // Slow path: refine λ locally. Terminates because a nonzero element of
        // degree < d cannot vanish at λ.
        let q = &self.field.qpoly;
        let mut width = BigRational::new(BigInt::one(), BigInt::one() << (ROOT_BITS * 2));
        loop {
            let (rl, rh) = roots::refine_real(q, self.field.root_lo.clone(), self.field.root_hi.clone(), &width);
            let pw = |x: &BigRational| -> Vec<BigRational> {
                let mut v = Vec::new();
                let mut acc = BigRational::one();
                for _ in 0..self.field.degree() {
                    v.push(acc.clone());
                    acc *= x;
                }
                v
            };
            let (lo, hi) = interval_eval(&self.coords, &pw(&rl), &pw(&rh));
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            width = &width * &width;
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact floor at the distinguished embedding.
    pub fn floor(&self) -> BigInt {
        let approx = self.to_f64().floor();
        let mut k = if approx.is_finite() {
            BigInt::from(approx as i64)
        } else {
            let (lo, _) = self.enclosure();
            lo.floor().to_integer()
        };
        let f = self.field.clone();
        while *self < Self::from_rational(&f, BigRational::from_integer(k.clone())) {
            k -= 1;
        }
        while *self >= Self::from_rational(&f, BigRational::from_integer(&k + 1)) {
            k += 1;
        }
        k
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Images under all complex embeddings, as floating approximations.
    pub fn embeddings(&self) -> Vec<Complex64> {
        self.field
            .conjugates()
            .iter()
            .map(|disc| {
                let z = disc.approx();
                let mut acc = Complex64::new(0.0, 0.0);
                for c in self.coords.iter().rev() {
                    acc = acc * z + c.to_f64().unwrap_or(f64::NAN);
                }
                acc
            })
            .collect()
    }

    /// Field trace Tr(x) = Σ_k c_k Tr(λ^k).
    pub fn trace(&self) -> BigRational {
        self.coords
            .iter()
            .enumerate()
            .map(|(k, c)| c * BigRational::from_integer(self.field.traces[k].clone()))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Parses the textual form produced by `Display`, e.g. `-1/2 + 3*l - l^2`.
    /// The generator may be written `l`, `x` or `λ`.
    pub fn parse(field: &Field, s: &str) -> Result<Self, AlgebraError> {
        parse_element(field, s)
    }
}

fn interval_eval(coords: &[BigRational], lo_p: &[BigRational], hi_p: &[BigRational]) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for (i, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // λ > 0 is not guaranteed (e.g. field from a scheme); handle both orders
        let a = c * &lo_p[i];
        let b = c * &hi_p[i];
        if a <= b {
            lo += a;
            hi += b;
        } else {
            lo += b;
            hi += a;
        }
    }
    (lo, hi)
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for AlgebraicNumber {}

impl Hash for AlgebraicNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl PartialOrd for AlgebraicNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.coords == other.coords {
            return Ordering::Equal;
        }
        (self - other).signum()
    }
}

impl<'a> Add<&'a AlgebraicNumber> for &'a AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn add(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
        self.check(rhs);
        AlgebraicNumber {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a AlgebraicNumber> for &'a AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn sub(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
        self.check(rhs);
        AlgebraicNumber {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a AlgebraicNumber> for &'a AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn mul(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
        self.check(rhs);
        let d = self.field.degree();
        let mut full = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if !b.is_zero() {
                    full[i + j] += a * b;
                }
            }
        }
        let mut out: Vec<BigRational> = full[..d].to_vec();
        for (k, c) in full[d..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, r) in self.field.reductions[k].iter().enumerate() {
                out[i] += c * r;
            }
        }
        AlgebraicNumber {
            field: self.field.clone(),
            coords: out,
        }
    }
}

impl Neg for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        AlgebraicNumber {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<AlgebraicNumber> for AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, rhs: AlgebraicNumber) -> AlgebraicNumber {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a AlgebraicNumber> for AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $m(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        -&self
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "l")?;
                    } else {
                        write!(f, "l^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (≈{:.6})", self, self.to_f64())
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else if let Some((ip, fp)) = s.split_once('.') {
        // decimal literal, exact
        let digits = format!("{ip}{fp}");
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}

fn parse_element(field: &Field, s: &str) -> Result<AlgebraicNumber, AlgebraError> {
    let err = || AlgebraError::Parse(s.to_string());
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(err());
    }
    // split into signed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let chars: Vec<char> = cleaned.chars().collect();
    for (i, &ch) in chars.iter().enumerate() {
        let prev = if i > 0 { Some(chars[i - 1]) } else { None };
        if (ch == '+' || ch == '-') && !matches!(prev, Some('^') | Some('/') | Some('*')) {
            if !cur.is_empty() {
                terms.push((neg, std::mem::take(&mut cur)));
            } else if i > 0 && prev != Some('(') {
                return Err(err());
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(err());
    }
    terms.push((neg, cur));
    let mut acc = AlgebraicNumber::zero(field);
    let gen = AlgebraicNumber::generator(field);
    for (neg, term) in terms {
        let (coef, power) = match term.find(['l', 'x', 'λ']) {
            None => (parse_rational(&term).ok_or_else(err)?, 0u32),
            Some(pos) => {
                let (c, rest) = term.split_at(pos);
                let c = c.trim_end_matches('*');
                let coef = if c.is_empty() {
                    BigRational::one()
                } else {
                    parse_rational(c).ok_or_else(err)?
                };
                let mut rest_chars = rest.chars();
                rest_chars.next();
                let rest = rest_chars.as_str();
                let power = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').and_then(|p| p.parse::<u32>().ok()).ok_or_else(err)?
                };
                (coef, power)
            }
        };
        let coef = if neg { -coef } else { coef };
        acc = &acc + &gen.pow(power).scale(&coef);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Field {
        NumberField::new(MinimalPolynomial::from_i64(&[-1, -1, 1]).unwrap()).unwrap()
    }

    #[test]
    fn golden_field_root() {
        let f = golden();
        assert!((f.root_f64() - 1.618_033_988_749_895).abs() < 1e-14);
        let phi = AlgebraicNumber::generator(&f);
        let one = AlgebraicNumber::one(&f);
        assert_eq!(&(&phi * &phi) - &phi, one);
    }

    #[test]
    fn degree_one_field() {
        let f = NumberField::new(MinimalPolynomial::from_i64(&[-2, 1]).unwrap()).unwrap();
        let g = AlgebraicNumber::generator(&f);
        assert_eq!(g.as_rational(), Some(&BigRational::from_integer(2.into())));
    }

    #[test]
    fn reducible_rejected() {
        let err = NumberField::new(MinimalPolynomial::from_i64(&[-4, 0, 1]).unwrap()).unwrap_err();
        assert!(matches!(err, AlgebraError::ReduciblePolynomial(_)));
        let err = NumberField::new(MinimalPolynomial::from_i64(&[2, -3, 1]).unwrap()).unwrap_err();
        assert!(matches!(err, AlgebraError::ReduciblePolynomial(_)));
        // (x^2+1)(x^2-x-1): no rational roots but reducible
        let err = NumberField::new(MinimalPolynomial::from_i64(&[-1, -1, 0, -1, 1]).unwrap()).unwrap_err();
        assert!(matches!(err, AlgebraError::ReduciblePolynomial(_)));
    }

    #[test]
    fn no_root_above_one() {
        let err = NumberField::new(MinimalPolynomial::from_i64(&[-1, 1]).unwrap()).unwrap_err();
        assert!(matches!(err, AlgebraError::NoRealRootAboveOne(_)));
        let err = NumberField::new(MinimalPolynomial::from_i64(&[1, 0, 1]).unwrap()).unwrap_err();
        assert!(matches!(err, AlgebraError::NoRealRootAboveOne(_)));
    }

    #[test]
    fn inverse_and_sign() {
        let f = golden();
        let phi = AlgebraicNumber::generator(&f);
        let inv = phi.inv().unwrap();
        assert_eq!(&inv * &phi, AlgebraicNumber::one(&f));
        assert_eq!(inv, &phi - &AlgebraicNumber::one(&f));
        assert!(phi > AlgebraicNumber::one(&f));
        // F(n+1) - F(n)·φ = (1-φ)^n, tiny and alternating in sign
        let a = AlgebraicNumber::parse(&f, "987 - 610*l").unwrap();
        assert!(a.is_negative());
        let b = AlgebraicNumber::parse(&f, "1597 - 987*l").unwrap();
        assert!(b.is_positive());
        let c = AlgebraicNumber::parse(&f, "102334155 - 63245986*l").unwrap();
        assert!(c.is_negative());
    }

    #[test]
    fn parse_display_round_trip() {
        let f = golden();
        for s in ["0", "1", "-1/2 + 3*l", "l", "-l", "7/3 - 2/5*l"] {
            let a = AlgebraicNumber::parse(&f, s).unwrap();
            assert_eq!(a.to_string(), s);
        }
        assert_eq!(
            AlgebraicNumber::parse(&f, "l^2").unwrap(),
            AlgebraicNumber::parse(&f, "1 + l").unwrap()
        );
        assert!(AlgebraicNumber::parse(&f, "1 + + l").is_err());
        assert!(AlgebraicNumber::parse(&f, "").is_err());
    }

    #[test]
    fn traces_match_power_sums() {
        let f = golden();
        // φ^k + (1-φ)^k are Lucas numbers: 2, 1, 3, 4
        let expected = [2, 1, 3, 4];
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(f.trace_of_power(k), &BigInt::from(*e));
        }
    }

    #[test]
    fn floor_is_exact() {
        let f = golden();
        let phi = AlgebraicNumber::generator(&f);
        assert_eq!(phi.pow(10).floor(), BigInt::from(122));
        assert_eq!((-&phi).floor(), BigInt::from(-2));
    }
}
