//! Root isolation for integer polynomials.
//!
//! Real roots are isolated exactly with Sturm sequences. Complex roots are
//! approximated with the Aberth–Ehrlich iteration and then certified with
//! Smith's inclusion discs evaluated in exact rational arithmetic: when the
//! discs are pairwise disjoint, each contains exactly one root.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

use super::poly::{self, QPoly};

/// Exact rational complex number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl QComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        QComplex { re, im }
    }

    pub fn zero() -> Self {
        QComplex::new(BigRational::zero(), BigRational::zero())
    }

    pub fn from_f64(z: Complex64) -> Self {
        QComplex::new(rat_from_f64(z.re), rat_from_f64(z.im))
    }

    pub fn to_f64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn add(&self, o: &QComplex) -> QComplex {
        QComplex::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &QComplex) -> QComplex {
        QComplex::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &QComplex) -> QComplex {
        QComplex::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn scale(&self, k: &BigRational) -> QComplex {
        QComplex::new(&self.re * k, &self.im * k)
    }

    /// Division; `None` when dividing by zero.
    pub fn div(&self, o: &QComplex) -> Option<QComplex> {
        let n = o.norm_sqr();
        if n.is_zero() {
            return None;
        }
        let conj = QComplex::new(o.re.clone(), -&o.im);
        let num = self.mul(&conj);
        Some(QComplex::new(num.re / &n, num.im / n))
    }

    fn round_to(&self, bits: u32) -> QComplex {
        QComplex::new(round_dyadic(&self.re, bits), round_dyadic(&self.im, bits))
    }
}

pub fn rat_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

/// Round to the nearest multiple of 2^-bits.
pub fn round_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = x * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.round().to_integer(), scale)
}

/// Rational upper bound on √x, within a relative 2^-40 or so.
pub fn sqrt_upper(x: &BigRational) -> BigRational {
    if !x.is_positive() {
        return BigRational::zero();
    }
    let approx = x.to_f64().unwrap_or(f64::MAX).sqrt();
    let mut r = rat_from_f64(approx * (1.0 + 1e-12) + f64::MIN_POSITIVE);
    if r.is_zero() {
        r = BigRational::new(BigInt::one(), BigInt::one() << 1000);
    }
    while &r * &r < *x {
        r = &r * BigRational::new(BigInt::from(1025), BigInt::from(1024));
    }
    r
}

/// Rational lower bound on √x.
pub fn sqrt_lower(x: &BigRational) -> BigRational {
    if !x.is_positive() {
        return BigRational::zero();
    }
    let approx = x.to_f64().unwrap_or(0.0).sqrt();
    let mut r = rat_from_f64(approx * (1.0 - 1e-12));
    while &r * &r > *x {
        r = &r * BigRational::new(BigInt::from(1023), BigInt::from(1024));
    }
    r
}

fn eval_complex(p: &[BigRational], z: &QComplex) -> QComplex {
    let mut acc = QComplex::zero();
    for c in p.iter().rev() {
        acc = acc.mul(z);
        acc.re += c;
    }
    acc
}

fn eval_f64(p: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

/// Floating approximations of all roots of a square-free polynomial.
pub fn aberth(p: &[BigRational]) -> Vec<Complex64> {
    let monic = poly::monic(p);
    let coeffs = poly::to_f64(&monic);
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![Complex64::new(-coeffs[0], 0.0)];
    }
    let bound = poly::cauchy_bound(&monic).to_f64().unwrap_or(2.0);
    let radius = bound * 0.5 + 0.1;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (v, d) = eval_f64(&coeffs, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let step = ratio / (1.0 - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-17 {
            break;
        }
    }
    z
}

/// An isolating disc for a single complex root.
#[derive(Clone, Debug)]
pub struct RootDisc {
    pub center: QComplex,
    pub radius: BigRational,
}

impl RootDisc {
    pub fn exact_real(x: BigRational) -> Self {
        RootDisc {
            center: QComplex::new(x, BigRational::zero()),
            radius: BigRational::zero(),
        }
    }

    pub fn approx(&self) -> Complex64 {
        self.center.to_f64()
    }

    pub fn is_real(&self) -> bool {
        self.center.im.is_zero()
    }

    pub fn width(&self) -> BigRational {
        &self.radius * BigRational::from_integer(2.into())
    }

    /// Interval [lo, hi] ⊇ {|z| : z in disc}.
    pub fn modulus_bounds(&self) -> (BigRational, BigRational) {
        let n = self.center.norm_sqr();
        let lo = sqrt_lower(&n) - &self.radius;
        let hi = sqrt_upper(&n) + &self.radius;
        (if lo.is_negative() { BigRational::zero() } else { lo }, hi)
    }

    /// Decides |z| vs 1 from the current disc, if possible.
    pub fn modulus_vs_one(&self) -> Option<Ordering> {
        let (lo, hi) = self.modulus_bounds();
        if lo > BigRational::one() {
            Some(Ordering::Greater)
        } else if hi < BigRational::one() {
            Some(Ordering::Less)
        } else {
            None
        }
    }
}

/// Certified isolating discs for every root of a square-free polynomial.
pub fn isolate_complex(p: &[BigRational]) -> Vec<RootDisc> {
    let p = poly::monic(p);
    let n = p.len() - 1;
    let approx = aberth(&p);
    // Near-real approximations snap to the real axis; conjugate pairs get exact
    // mirror centres so reality is certified by symmetry.
    let mut centers: Vec<Complex64> = approx.clone();
    let scale = 1e-9;
    for c in centers.iter_mut() {
        if c.im.abs() < scale * (1.0 + c.re.abs()) {
            c.im = 0.0;
        }
    }
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] || centers[i].im == 0.0 {
            continue;
        }
        if let Some(j) = (0..n).filter(|&j| j != i && !used[j] && centers[j].im != 0.0).min_by(|&a, &b| {
            let da = (centers[a] - centers[i].conj()).norm();
            let db = (centers[b] - centers[i].conj()).norm();
            da.partial_cmp(&db).unwrap_or(Ordering::Equal)
        }) {
            centers[j] = centers[i].conj();
            used[i] = true;
            used[j] = true;
        }
    }
    let mut zs: Vec<QComplex> = centers.iter().map(|&c| QComplex::from_f64(c)).collect();
    let mut bits = 60u32;
    loop {
        if let Some(discs) = smith_discs(&p, &zs) {
            return discs;
        }
        // Polish with exact Newton steps at increasing precision.
        bits += 60;
        let dp = poly::derivative(&p);
        zs = zs
            .iter()
            .map(|z| newton_step(&p, &dp, z, bits).unwrap_or_else(|| z.clone()))
            .collect();
        assert!(bits < 4000, "root isolation failed to separate roots");
    }
}

fn newton_step(p: &[BigRational], dp: &[BigRational], z: &QComplex, bits: u32) -> Option<QComplex> {
    let v = eval_complex(p, z);
    let d = eval_complex(dp, z);
    let step = v.div(&d)?;
    Some(z.sub(&step).round_to(bits))
}

fn smith_discs(p: &[BigRational], zs: &[QComplex]) -> Option<Vec<RootDisc>> {
    let n = zs.len();
    let nn = BigRational::from_integer(BigInt::from(n * n));
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let v = eval_complex(p, &zs[i]);
        let mut prod_norm = BigRational::one();
        for j in 0..n {
            if j != i {
                prod_norm *= zs[i].sub(&zs[j]).norm_sqr();
            }
        }
        if prod_norm.is_zero() {
            return None;
        }
        let r2 = v.norm_sqr() * &nn / prod_norm;
        radii.push(sqrt_upper(&r2));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = sqrt_lower(&zs[i].sub(&zs[j]).norm_sqr());
            if dist <= &radii[i] + &radii[j] {
                return None;
            }
        }
    }
    Some(
        zs.iter()
            .cloned()
            .zip(radii)
            .map(|(center, radius)| RootDisc { center, radius })
            .collect(),
    )
}

/// Shrinks an isolating disc to radius at most `target` with exact Newton
/// steps; each new disc has radius n·|p/p'| and stays inside the old one.
pub fn refine_disc(p: &[BigRational], disc: &RootDisc, target: &BigRational) -> RootDisc {
    let n = BigRational::from_integer(BigInt::from(p.len() - 1));
    let dp = poly::derivative(p);
    let mut cur = disc.clone();
    let mut bits = 64u32;
    while cur.radius > *target {
        bits += 32;
        let Some(z) = newton_step(p, &dp, &cur.center, bits) else {
            break;
        };
        let z = if cur.is_real() {
            QComplex::new(z.re, BigRational::zero())
        } else {
            z
        };
        let v = eval_complex(p, &z);
        let d = eval_complex(&dp, &z);
        if d.norm_sqr().is_zero() {
            break;
        }
        let r = sqrt_upper(&(v.norm_sqr() * &n * &n / d.norm_sqr()));
        let shift = sqrt_upper(&z.sub(&cur.center).norm_sqr());
        if &shift + &r <= cur.radius {
            cur = RootDisc { center: z, radius: r };
        } else if bits > 4000 {
            break;
        }
    }
    cur
}

/// Isolating intervals (lo, hi] for all real roots of a square-free polynomial,
/// sorted ascending.
pub fn isolate_real(p: &[BigRational]) -> Vec<(BigRational, BigRational)> {
    let seq = poly::sturm_sequence(p);
    let b = poly::cauchy_bound(p);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let c = poly::count_roots(&seq, &lo, &hi);
        if c == 0 {
            continue;
        }
        if c == 1 {
            out.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Bisects an isolating interval (lo, hi] of a simple root until hi − lo ≤ width.
pub fn refine_real(p: &[BigRational], mut lo: BigRational, mut hi: BigRational, width: &BigRational) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(2.into());
    let sign_hi = poly::eval(p, &hi);
    if sign_hi.is_zero() {
        return (hi.clone(), hi);
    }
    let hi_pos = sign_hi.is_positive();
    while &hi - &lo > *width {
        let mid = round_dyadic(&((&lo + &hi) / &two), 512);
        let v = poly::eval(p, &mid);
        if v.is_zero() {
            return (mid.clone(), mid);
        }
        if v.is_positive() == hi_pos {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// True iff the polynomial has a root of modulus exactly one. Exact: roots
/// on the circle other than ±1 force a reciprocal factor, and the reciprocal
/// part reduces via y = x + 1/x to real roots of a half-degree polynomial
/// in [-2, 2], counted with Sturm sequences.
pub fn has_unit_modulus_root(p: &[BigRational]) -> bool {
    let p = poly::squarefree(p);
    let one = BigRational::one();
    if poly::eval(&p, &one).is_zero() || poly::eval(&p, &-one.clone()).is_zero() {
        return true;
    }
    // gcd with the reciprocal polynomial collects every z with 1/z also a root.
    let rev = poly::reverse(&p);
    let g = poly::gcd(&p, &rev);
    let d = g.len() - 1;
    if d == 0 || d % 2 == 1 {
        // odd-degree reciprocal part would contain ±1, already excluded
        return false;
    }
    let m = d / 2;
    // g(x) = x^m q(x + 1/x); peel off q by repeated division.
    let q = reciprocal_reduce(&g, m);
    let seq = poly::sturm_sequence(&poly::squarefree(&q));
    let two = BigRational::from_integer(2.into());
    poly::count_roots(&seq, &-two.clone(), &two) > 0
}

/// For a palindromic g of degree 2m, returns q of degree m with g(x) = x^m q(x + 1/x).
fn reciprocal_reduce(g: &[BigRational], m: usize) -> QPoly {
    // Work with the symmetric coefficients c_k of x^k + x^-k.
    let mut sym: Vec<BigRational> = (0..=m).map(|k| g[m + k].clone()).collect();
    let mut q = vec![BigRational::zero(); m + 1];
    // x^k + x^-k = T_k(y) with T_0 = 2 (handled as 1 for the middle term),
    // T_1 = y, T_{k+1} = y T_k - T_{k-1}. Express top-down.
    let mut t: Vec<QPoly> = Vec::with_capacity(m + 1);
    t.push(vec![BigRational::from_integer(2.into())]);
    if m >= 1 {
        t.push(vec![BigRational::zero(), BigRational::one()]);
    }
    for k in 2..=m {
        let yt = poly::mul(&t[k - 1], &[BigRational::zero(), BigRational::one()]);
        t.push(poly::sub(&yt, &t[k - 2]));
    }
    for k in (1..=m).rev() {
        let c = sym[k].clone();
        for (i, coeff) in t[k].iter().enumerate() {
            q[i] += &c * coeff;
        }
        sym[k] = BigRational::zero();
    }
    q[0] += &sym[0];
    poly::trim(&mut q);
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> QPoly {
        poly::from_int_coeffs(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn golden_ratio_discs() {
        let discs = isolate_complex(&q(&[-1, -1, 1]));
        assert_eq!(discs.len(), 2);
        let mut re: Vec<f64> = discs.iter().map(|d| d.approx().re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] - (1.0 - 1.618_033_988_749_895)).abs() < 1e-12);
        assert!((re[1] - 1.618_033_988_749_895).abs() < 1e-12);
        assert!(discs.iter().all(|d| d.is_real()));
    }

    #[test]
    fn tribonacci_has_complex_pair_inside_circle() {
        let discs = isolate_complex(&q(&[-1, -1, -1, 1]));
        let complex: Vec<_> = discs.iter().filter(|d| !d.is_real()).collect();
        assert_eq!(complex.len(), 2);
        for d in complex {
            assert_eq!(d.modulus_vs_one(), Some(Ordering::Less));
        }
    }

    #[test]
    fn refinement_shrinks_disc() {
        let p = q(&[-3, -1, 1]);
        let discs = isolate_complex(&p);
        let target = BigRational::new(BigInt::one(), BigInt::one() << 100);
        for d in &discs {
            let r = refine_disc(&p, d, &target);
            assert!(r.radius <= target);
        }
    }

    #[test]
    fn unit_circle_detection() {
        // Salem-type x^4 - x^3 - x^2 - x + 1 has two roots on the circle
        assert!(has_unit_modulus_root(&q(&[1, -1, -1, -1, 1])));
        // cyclotomic x^2 + x + 1
        assert!(has_unit_modulus_root(&q(&[1, 1, 1])));
        assert!(!has_unit_modulus_root(&q(&[-1, -1, 1])));
        // reciprocal but with real roots 2±√3
        assert!(!has_unit_modulus_root(&q(&[1, -4, 1])));
        assert!(has_unit_modulus_root(&q(&[-1, 1])));
    }

    #[test]
    fn real_isolation_and_refinement() {
        let p = q(&[-3, -1, 1]);
        let iv = isolate_real(&p);
        assert_eq!(iv.len(), 2);
        let w = BigRational::new(BigInt::one(), BigInt::one() << 80);
        let (lo, hi) = refine_real(&p, iv[1].0.clone(), iv[1].1.clone(), &w);
        let r = (1.0 + 13f64.sqrt()) / 2.0;
        assert!(lo.to_f64().unwrap() <= r + 1e-15 && hi.to_f64().unwrap() >= r - 1e-15);
    }
}
