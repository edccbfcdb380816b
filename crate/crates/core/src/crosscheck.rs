//! Substitution puncture sets against calibrated model sets.

use thiserror::Error;

use crate::algebra::AlgebraicNumber;
use crate::modelset::{Convention, CutProjectScheme, ModelSetError, Window};
use crate::substitution::{PeriodicPoint, SubstitutionError, SubstitutionSystem};
use crate::tiling::PunctureMap;

#[derive(Debug, Error)]
pub enum CrosscheckError {
    #[error("scheme field {scheme} differs from the substitution field {substitution}")]
    FieldMismatch { scheme: String, substitution: String },
    #[error("no calibration found: {0}")]
    NoCalibrationFound(String),
    #[error("cross-check needs an interval window")]
    Unsupported,
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
    #[error(transparent)]
    ModelSet(#[from] ModelSetError),
}

#[derive(Clone, Debug)]
pub struct CrosscheckReport {
    pub region: AlgebraicNumber,
    /// Uniform puncture offset, also the physical shift of the model set.
    pub offset: AlgebraicNumber,
    pub internal_shift: AlgebraicNumber,
    /// Admissible internal shifts [lo, hi] from the tile starts.
    pub calibration: (AlgebraicNumber, AlgebraicNumber),
    pub substitution_points: usize,
    pub model_points: usize,
    /// Punctures with no model set point.
    pub missing: Vec<AlgebraicNumber>,
    /// Model set points that are not punctures.
    pub extra: Vec<AlgebraicNumber>,
}

impl CrosscheckReport {
    pub fn matched(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }

    pub fn first_discrepancy(&self) -> Option<&AlgebraicNumber> {
        self.missing.iter().chain(&self.extra).min()
    }

    pub fn report(&self) -> String {
        let mut s = format!(
            "region = [{neg}, {r}]\npuncture_offset = {}\ninternal_shift = {}\ncalibration_interval = [{}, {}]\nsubstitution_points = {}\nmodel_points = {}\ndiscrepancies = {}\n",
            self.offset,
            self.internal_shift,
            self.calibration.0,
            self.calibration.1,
            self.substitution_points,
            self.model_points,
            self.missing.len() + self.extra.len(),
            neg = -&self.region,
            r = self.region,
        );
        match self.first_discrepancy() {
            Some(x) => s.push_str(&format!("first_discrepancy = {} ({:.6})\n", x, x.to_f64())),
            None => s.push_str("match = exact\n"),
        }
        s
    }
}

/// Compares the punctures (tile start + min_len/2) of a periodic point with
/// the model set M_x, x = (min_len/2, t), on [−region, region]. Unless given,
/// t is the midpoint of the shifts that accept every tile start.
pub fn crosscheck(
    sys: &SubstitutionSystem,
    pp: &PeriodicPoint,
    scheme: &CutProjectScheme,
    region: &AlgebraicNumber,
    internal_shift: Option<AlgebraicNumber>,
    budget: usize,
) -> Result<CrosscheckReport, CrosscheckError> {
    if scheme.field.polynomial() != sys.field().polynomial() {
        return Err(CrosscheckError::FieldMismatch {
            scheme: scheme.field.polynomial().to_string(),
            substitution: sys.field().polynomial().to_string(),
        });
    }
    let Window::Interval { lo, hi } = &scheme.window else {
        return Err(CrosscheckError::Unsupported);
    };
    let f = &scheme.field;
    let conv = |x: &AlgebraicNumber| AlgebraicNumber::from_coords(f, x.coords().to_vec());
    let offset = sys.min_length().half();
    let punct = PunctureMap::uniform(&sys.alphabet, &offset).expect("half the shortest length lies in every tile");
    let reach = &(region + &sys.max_length()) + &offset;
    let w = sys.expand_to_radius(pp, &reach, 4_000_000)?;
    let mut stars = Vec::with_capacity(w.patch.len());
    for t in &w.patch.tiles {
        let u = conv(&t.start);
        let c = scheme
            .lift(&u)
            .ok_or_else(|| CrosscheckError::NoCalibrationFound(format!("tile start {} is not a lattice projection", u)))?;
        stars.push(scheme.lattice_point(&c)[1].clone());
    }
    let smin = stars.iter().min().expect("nonempty window").clone();
    let smax = stars.iter().max().expect("nonempty window").clone();
    let calibration = (lo - &smin, hi - &smax);
    let t = match internal_shift {
        Some(t) => t,
        None => {
            if calibration.0 > calibration.1 {
                return Err(CrosscheckError::NoCalibrationFound(format!(
                    "internal images span {}, longer than the window",
                    &smax - &smin
                )));
            }
            (&calibration.0 + &calibration.1).half()
        }
    };
    let off = conv(&offset);
    let neg = -region;
    let model = scheme.model_set(&[off, t.clone()], (&neg, region), Convention::Closed, budget)?;
    let mut subs: Vec<AlgebraicNumber> = w
        .patch
        .tiles
        .iter()
        .map(|t| conv(&punct.puncture(t)))
        .filter(|p| *p >= neg && p <= region)
        .collect();
    subs.sort();
    let (mut i, mut j) = (0, 0);
    let (mut missing, mut extra) = (Vec::new(), Vec::new());
    let m = &model.points.points;
    while i < subs.len() || j < m.len() {
        match (subs.get(i), m.get(j)) {
            (Some(a), Some(b)) if a == b => {
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                missing.push(a.clone());
                i += 1;
            }
            (Some(a), None) => {
                missing.push(a.clone());
                i += 1;
            }
            (_, Some(b)) => {
                extra.push(b.clone());
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Ok(CrosscheckReport {
        region: region.clone(),
        offset,
        internal_shift: t,
        calibration,
        substitution_points: subs.len(),
        model_points: m.len(),
        missing,
        extra,
    })
}
