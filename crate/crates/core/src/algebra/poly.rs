//! Dense univariate polynomials over ℚ and ℤ, stored low degree first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QPoly = Vec<BigRational>;

pub fn from_int_coeffs(coeffs: &[BigInt]) -> QPoly {
    let mut p: QPoly = coeffs.iter().cloned().map(BigRational::from_integer).collect();
    trim(&mut p);
    p
}

pub fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree of a trimmed polynomial; the zero polynomial has no degree.
pub fn degree(p: &[BigRational]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(p: &[BigRational]) -> QPoly {
    let mut d: QPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut d);
    d
}

pub fn sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(&mut out);
    out
}

pub fn mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Euclidean division; panics on a zero divisor.
pub fn div_rem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead = b[db].clone();
    let mut rem: QPoly = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let factor = &rem[dr] / &lead;
        let shift = dr - db;
        for (i, c) in b.iter().enumerate() {
            rem[i + shift] -= &factor * c;
        }
        quot[shift] = factor;
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub fn monic(p: &[BigRational]) -> QPoly {
    match p.last() {
        None => Vec::new(),
        Some(lead) => p.iter().map(|c| c / lead).collect(),
    }
}

pub fn gcd(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut x: QPoly = a.to_vec();
    let mut y: QPoly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Inverse of `a` modulo `m`, or `None` when they share a factor.
pub fn inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<QPoly> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1): (QPoly, QPoly) = (Vec::new(), vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // r0 is the gcd; invertible iff it is a nonzero constant
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].clone();
    let (_, s) = div_rem(&s0, m);
    Some(s.into_iter().map(|x| x / &c).collect())
}

/// Square-free part, made monic.
pub fn squarefree(p: &[BigRational]) -> QPoly {
    let d = derivative(p);
    if d.is_empty() {
        return monic(p);
    }
    let g = gcd(p, &d);
    monic(&div_rem(p, &g).0)
}

/// Sturm sequence of a square-free polynomial.
pub fn sturm_sequence(p: &[BigRational]) -> Vec<QPoly> {
    let mut seq = vec![p.to_vec(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let (_, r) = div_rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_changes_at(seq: &[QPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in seq {
        let v = eval(p, x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in the half-open interval (a, b].
pub fn count_roots(seq: &[QPoly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes_at(seq, a).saturating_sub(sign_changes_at(seq, b))
}

/// Cauchy bound: every complex root has modulus < 1 + max |a_i / a_n|.
pub fn cauchy_bound(p: &[BigRational]) -> BigRational {
    let lead = p.last().expect("nonzero polynomial").abs();
    let m = p[..p.len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    m + BigRational::one()
}

/// Reverse polynomial x^d p(1/x).
pub fn reverse(p: &[BigRational]) -> QPoly {
    let mut r: QPoly = p.iter().rev().cloned().collect();
    trim(&mut r);
    r
}

pub fn is_integral(p: &[BigRational]) -> bool {
    p.iter().all(|c| c.is_integer())
}

pub fn to_f64(p: &[BigRational]) -> Vec<f64> {
    use num_traits::ToPrimitive;
    p.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> QPoly {
        from_int_coeffs(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn division_round_trip() {
        let a = q(&[-1, 0, 0, 1]);
        let b = q(&[-1, 1]);
        let (quot, rem) = div_rem(&a, &b);
        assert!(rem.is_empty());
        assert_eq!(quot, q(&[1, 1, 1]));
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = mul(&mul(&q(&[-1, 1]), &q(&[-1, 1])), &q(&[2, 1]));
        assert_eq!(squarefree(&p), mul(&q(&[-1, 1]), &q(&[2, 1])));
        assert_eq!(gcd(&p, &q(&[-1, 1])), q(&[-1, 1]));
    }

    #[test]
    fn sturm_counts_golden_ratio_roots() {
        let p = q(&[-1, -1, 1]);
        let seq = sturm_sequence(&p);
        let lo = BigRational::from_integer((-10).into());
        let hi = BigRational::from_integer(10.into());
        assert_eq!(count_roots(&seq, &lo, &hi), 2);
        assert_eq!(count_roots(&seq, &BigRational::one(), &hi), 1);
    }

    #[test]
    fn inverse_modulo_minimal_polynomial() {
        let m = q(&[-1, -1, 1]);
        // x * (x - 1) = x^2 - x = 1 mod m
        let inv = inverse_mod(&q(&[0, 1]), &m).unwrap();
        assert_eq!(inv, q(&[-1, 1]));
    }
}
