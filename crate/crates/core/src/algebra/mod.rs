//! Exact arithmetic in ℚ(λ) and Perron–Frobenius data of integer matrices.

pub mod field;
pub mod perron;
pub mod poly;
pub mod roots;

pub use field::{AlgebraicNumber, Field, MinimalPolynomial, NumberField};
pub use perron::{perron, IntMatrix, PerronData};
pub use roots::RootDisc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("the zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial {0} is reducible over Q")]
    ReduciblePolynomial(String),
    #[error("polynomial {0} has no real root greater than 1")]
    NoRealRootAboveOne(String),
    #[error("matrix is not primitive: no power up to {0} is strictly positive")]
    NotPrimitive(usize),
    #[error("matrix is not square or is empty")]
    BadMatrix,
    #[error("Perron eigenvalue {0} is not greater than 1")]
    NotExpanding(String),
    #[error("cannot parse field element `{0}`")]
    Parse(String),
}

/// Field created from a validated minimal polynomial.
pub fn field_create(poly: MinimalPolynomial) -> Result<Field, AlgebraError> {
    NumberField::new(poly)
}

/// Certified isolating discs for all conjugates of `x` (the roots of its
/// field's minimal polynomial when `x` is the generator).
pub fn conjugates(x: &AlgebraicNumber) -> Vec<RootDisc> {
    if x.field().degree() == 1 {
        let q = x.as_rational().cloned().unwrap_or_default();
        return vec![RootDisc::exact_real(q)];
    }
    if *x == AlgebraicNumber::generator(x.field()) {
        return x.field().conjugates();
    }
    let p = perron::element_minimal_polynomial(x);
    roots::isolate_complex(&p)
}
