//! Perron–Frobenius data of non-negative integer matrices, computed exactly.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{integer_factor_candidate, AlgebraicNumber, Field, MinimalPolynomial, NumberField};
use super::poly::{self, QPoly};
use super::roots;
use super::AlgebraError;

/// Square integer matrix, row major.
pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Clone, Debug)]
pub struct PerronData {
    pub eigenvalue: AlgebraicNumber,
    /// Row vector with `left · M = λ · left`, first entry 1.
    pub left_vector: Vec<AlgebraicNumber>,
    /// Column vector with `M · right = λ · right`, first entry 1.
    pub right_vector: Vec<AlgebraicNumber>,
    pub matrix: IntMatrix,
    /// Least k with M^k strictly positive.
    pub primitivity_power: usize,
}

impl PerronData {
    pub fn field(&self) -> &Field {
        self.eigenvalue.field()
    }
}

fn check_square(m: &IntMatrix) -> Result<usize, AlgebraError> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n || r.iter().any(|&x| x < 0)) {
        return Err(AlgebraError::BadMatrix);
    }
    Ok(n)
}

/// Least k ≤ (n−1)²+1 with M^k > 0 entrywise; beyond the Wielandt bound no
/// power is positive.
pub fn primitivity_power(m: &IntMatrix) -> Option<usize> {
    let n = m.len();
    let pattern: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
    let bound = (n - 1) * (n - 1) + 1;
    let mut cur = pattern.clone();
    for k in 1..=bound {
        if cur.iter().all(|r| r.iter().all(|&b| b)) {
            return Some(k);
        }
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).any(|l| cur[i][l] && pattern[l][j]);
            }
        }
        cur = next;
    }
    None
}

/// Characteristic polynomial det(xI − A) by Faddeev–LeVerrier.
pub fn charpoly(a: &[Vec<BigRational>]) -> QPoly {
    let n = a.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !mk[l][j].is_zero() {
                        s += &a[i][l] * &mk[l][j];
                    }
                }
                next[i][j] = s;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        mk = next;
        let mut tr = BigRational::zero();
        for i in 0..n {
            for l in 0..n {
                if !a[i][l].is_zero() && !mk[l][i].is_zero() {
                    tr += &a[i][l] * &mk[l][i];
                }
            }
        }
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    coeffs
}

fn to_rational_matrix(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect()
}

/// Minimal polynomial of the largest real root of a monic integer polynomial:
/// the least-degree integer divisor whose roots include it.
pub fn minimal_polynomial_of_largest_root(p: &[BigRational]) -> QPoly {
    let sf = poly::squarefree(p);
    let zs = roots::aberth(&sf);
    let top = (0..zs.len())
        .filter(|&i| zs[i].im.abs() < 1e-7 * (1.0 + zs[i].norm()))
        .max_by(|&i, &j| zs[i].re.partial_cmp(&zs[j].re).unwrap())
        .expect("polynomial with a real root");
    let others: Vec<Complex64> = (0..zs.len()).filter(|&i| i != top).map(|i| zs[i]).collect();
    for size in 0..others.len() {
        if let Some(f) = subset_factor(&sf, zs[top], &others, 0, size, &mut Vec::new()) {
            return f;
        }
    }
    sf
}

fn subset_factor(
    p: &[BigRational],
    root: Complex64,
    others: &[Complex64],
    from: usize,
    left: usize,
    chosen: &mut Vec<Complex64>,
) -> Option<QPoly> {
    if left == 0 {
        let mut zs = chosen.clone();
        zs.push(root);
        let f = integer_factor_candidate(&zs)?;
        return poly::div_rem(p, &f).1.is_empty().then_some(f);
    }
    for i in from..others.len() {
        chosen.push(others[i]);
        let r = subset_factor(p, root, others, i + 1, left - 1, chosen);
        chosen.pop();
        if r.is_some() {
            return r;
        }
    }
    None
}

/// Minimal polynomial over ℚ of an arbitrary field element: the square-free
/// part of the characteristic polynomial of multiplication by it.
pub fn element_minimal_polynomial(x: &AlgebraicNumber) -> QPoly {
    let f = x.field();
    let d = f.degree();
    let mut cols = Vec::with_capacity(d);
    let mut basis = AlgebraicNumber::one(f);
    let gen = AlgebraicNumber::generator(f);
    for _ in 0..d {
        cols.push((x * &basis).coords().to_vec());
        basis = &basis * &gen;
    }
    let mat: Vec<Vec<BigRational>> = (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
    poly::squarefree(&charpoly(&mat))
}

/// A nonzero kernel vector of `a` (n×n over the field), normalised so the
/// first nonzero entry is 1.
fn kernel_vector(mut a: Vec<Vec<AlgebraicNumber>>, field: &Field) -> Option<Vec<AlgebraicNumber>> {
    let n = a.len();
    let mut pivots: Vec<Option<usize>> = vec![None; n];
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].inv()?;
        for j in col..n {
            a[row][j] = &a[row][j] * &inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for j in col..n {
                    let t = &factor * &a[row][j];
                    a[r][j] = &a[r][j] - &t;
                }
            }
        }
        pivots[col] = Some(row);
        row += 1;
    }
    let free = (0..n).find(|&c| pivots[c].is_none())?;
    let mut v = vec![AlgebraicNumber::zero(field); n];
    v[free] = AlgebraicNumber::one(field);
    for c in 0..n {
        if let Some(r) = pivots[c] {
            v[c] = -&a[r][free];
        }
    }
    let first = v.iter().find(|x| !x.is_zero())?.inv()?;
    Some(v.iter().map(|x| x * &first).collect())
}

fn eigenvector(m: &IntMatrix, lambda: &AlgebraicNumber, transpose: bool) -> Option<Vec<AlgebraicNumber>> {
    let f = lambda.field();
    let n = m.len();
    let a: Vec<Vec<AlgebraicNumber>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = if transpose { m[j][i] } else { m[i][j] };
                    let x = AlgebraicNumber::from_int(f, e);
                    if i == j {
                        &x - lambda
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    kernel_vector(a, f)
}

/// Perron eigenvalue and positive eigenvectors of a primitive matrix.
pub fn perron(m: &IntMatrix) -> Result<PerronData, AlgebraError> {
    let n = check_square(m)?;
    let k = primitivity_power(m).ok_or(AlgebraError::NotPrimitive((n - 1) * (n - 1) + 1))?;
    let cp = charpoly(&to_rational_matrix(m));
    let minpoly = minimal_polynomial_of_largest_root(&cp);
    let coeffs: Vec<BigInt> = minpoly.iter().map(|c| c.to_integer()).collect();
    let mp = MinimalPolynomial::new(coeffs)?;
    let field = NumberField::new(mp).map_err(|e| match e {
        AlgebraError::NoRealRootAboveOne(p) => AlgebraError::NotExpanding(p),
        other => other,
    })?;
    let lambda = AlgebraicNumber::generator(&field);
    let right = eigenvector(m, &lambda, false).expect("Perron eigenvalue has a kernel vector");
    let left = eigenvector(m, &lambda, true).expect("Perron eigenvalue has a kernel vector");
    debug_assert!(right.iter().chain(&left).all(|x| x.is_positive()));
    Ok(PerronData {
        eigenvalue: lambda,
        left_vector: left,
        right_vector: right,
        matrix: m.clone(),
        primitivity_power: k,
    })
}
