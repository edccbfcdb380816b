//! Substitution rules with Perron tile lengths: validation, supertiles,
//! periodic points, expansion to windows and the allowed-patch language.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::algebra::perron::primitivity_power;
use crate::algebra::roots::{self, RootDisc};
use crate::algebra::{perron, AlgebraError, AlgebraicNumber, Field, IntMatrix, MinimalPolynomial, PerronData};
use crate::tiling::{Patch, PlacedTile, ProtoTile, TilingWindow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstitutionError {
    #[error("the rule for `{0}` is empty")]
    EmptyRule(String),
    #[error("the alphabet is empty")]
    EmptyAlphabet,
    #[error("letter `{0}` appears in a rule but is not in the alphabet")]
    UnknownLetter(String),
    #[error("letter `{0}` has no rule")]
    MissingRule(String),
    #[error("letter `{0}` is listed twice")]
    DuplicateLetter(String),
    #[error("not primitive: no power of the substitution matrix up to {0} is positive")]
    NotPrimitive(usize),
    #[error("not expanding: Perron eigenvalue {0} is not greater than 1")]
    NotExpanding(String),
    #[error("not aperiodic: {0}")]
    PeriodicTilingSpace(String),
    #[error("expansion has minimal polynomial {found}, but the spec declares {declared}")]
    PolynomialMismatch { found: String, declared: String },
    #[error("resource budget exceeded: {0}")]
    ResourceBudget(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// How aperiodicity was established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AperiodicityEvidence {
    /// The Perron eigenvalue is irrational, so letter frequencies are too.
    IrrationalExpansion,
    /// Factor complexity p(n) ≥ n + 1 for every n up to the bound, so any
    /// period would exceed it.
    ComplexityBound { checked_up_to: usize },
}

#[derive(Clone, Debug)]
pub struct SubstitutionSystem {
    pub name: String,
    pub alphabet: Vec<ProtoTile>,
    pub rules: Vec<Vec<usize>>,
    pub lambda: AlgebraicNumber,
    /// M[j][i] = occurrences of j in rule(i).
    pub matrix: IntMatrix,
    pub perron: PerronData,
    /// Start of each child tile inside the inflated parent [0, λℓ_i].
    pub child_offsets: Vec<Vec<AlgebraicNumber>>,
    pub legal_pairs: BTreeSet<(usize, usize)>,
    pub aperiodicity: AperiodicityEvidence,
}

/// Factor-complexity bound used when λ is an integer.
pub const COMPLEXITY_BOUND: usize = 40;

impl SubstitutionSystem {
    /// Validates the rule and computes Perron data, tile lengths and the
    /// legal two-letter words.
    pub fn build(name: &str, letters: &[String], rules: &[Vec<String>]) -> Result<Self, SubstitutionError> {
        Self::build_with_polynomial(name, letters, rules, None)
    }

    /// As [`build`](Self::build) but without screening for periodicity, so
    /// that [`is_aperiodic`](Self::is_aperiodic) can be asked directly.
    pub fn build_unchecked(name: &str, letters: &[String], rules: &[Vec<String>]) -> Result<Self, SubstitutionError> {
        Self::parse_rules(name, letters, rules, None, false)
    }

    pub fn build_with_polynomial(
        name: &str,
        letters: &[String],
        rules: &[Vec<String>],
        declared: Option<&MinimalPolynomial>,
    ) -> Result<Self, SubstitutionError> {
        Self::parse_rules(name, letters, rules, declared, true)
    }

    fn parse_rules(
        name: &str,
        letters: &[String],
        rules: &[Vec<String>],
        declared: Option<&MinimalPolynomial>,
        check_aperiodic: bool,
    ) -> Result<Self, SubstitutionError> {
        if letters.is_empty() {
            return Err(SubstitutionError::EmptyAlphabet);
        }
        let mut seen = BTreeSet::new();
        for l in letters {
            if !seen.insert(l) {
                return Err(SubstitutionError::DuplicateLetter(l.clone()));
            }
        }
        if rules.len() != letters.len() {
            return Err(SubstitutionError::MissingRule(letters[rules.len().min(letters.len() - 1)].clone()));
        }
        let index = |s: &String| {
            letters
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| SubstitutionError::UnknownLetter(s.clone()))
        };
        let mut idx_rules = Vec::with_capacity(rules.len());
        for (i, r) in rules.iter().enumerate() {
            if r.is_empty() {
                return Err(SubstitutionError::EmptyRule(letters[i].clone()));
            }
            idx_rules.push(r.iter().map(index).collect::<Result<Vec<_>, _>>()?);
        }
        Self::from_indexed(name, letters, idx_rules, declared, check_aperiodic)
    }

    fn from_indexed(
        name: &str,
        letters: &[String],
        rules: Vec<Vec<usize>>,
        declared: Option<&MinimalPolynomial>,
        check_aperiodic: bool,
    ) -> Result<Self, SubstitutionError> {
        let n = letters.len();
        let mut matrix = vec![vec![0i64; n]; n];
        for (i, r) in rules.iter().enumerate() {
            for &j in r {
                matrix[j][i] += 1;
            }
        }
        let perron = perron(&matrix).map_err(|e| match e {
            AlgebraError::NotPrimitive(k) => SubstitutionError::NotPrimitive(k),
            AlgebraError::NotExpanding(p) => SubstitutionError::NotExpanding(p),
            other => SubstitutionError::Algebra(other),
        })?;
        if let Some(dp) = declared {
            if dp != perron.field().polynomial() {
                return Err(SubstitutionError::PolynomialMismatch {
                    found: perron.field().polynomial().to_string(),
                    declared: dp.to_string(),
                });
            }
        }
        let lambda = perron.eigenvalue.clone();
        // Lengths ℓ with ℓ·M = λℓ make Σ_{j ∈ rule(i)} ℓ_j = λℓ_i.
        let alphabet: Vec<ProtoTile> = letters
            .iter()
            .zip(&perron.left_vector)
            .map(|(id, len)| ProtoTile {
                id: id.clone(),
                length: len.clone(),
                mark: None,
            })
            .collect();
        let child_offsets = rules
            .iter()
            .map(|r| {
                let mut acc = AlgebraicNumber::zero(lambda.field());
                r.iter()
                    .map(|&j| {
                        let s = acc.clone();
                        acc = &acc + &alphabet[j].length;
                        s
                    })
                    .collect()
            })
            .collect();
        let legal_pairs = legal_pairs(&rules);
        let mut sys = SubstitutionSystem {
            name: name.to_string(),
            alphabet,
            rules,
            lambda,
            matrix,
            perron,
            child_offsets,
            legal_pairs,
            aperiodicity: AperiodicityEvidence::IrrationalExpansion,
        };
        debug_assert!(sys.support_equation_holds());
        if check_aperiodic {
            sys.aperiodicity = sys.aperiodicity_evidence()?;
        }
        Ok(sys)
    }

    pub fn field(&self) -> &Field {
        self.lambda.field()
    }

    pub fn letter_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn length(&self, i: usize) -> &AlgebraicNumber {
        &self.alphabet[i].length
    }

    pub fn min_length(&self) -> AlgebraicNumber {
        self.alphabet.iter().map(|p| p.length.clone()).min().expect("nonempty alphabet")
    }

    pub fn max_length(&self) -> AlgebraicNumber {
        self.alphabet.iter().map(|p| p.length.clone()).max().expect("nonempty alphabet")
    }

    pub fn letter_name(&self, i: usize) -> &str {
        &self.alphabet[i].id
    }

    pub fn word_string(&self, w: &[usize]) -> String {
        w.iter().map(|&i| self.letter_name(i)).collect::<Vec<_>>().join("")
    }

    /// Σ lengths(rule(i)) = λ·length(i) for every i, exactly.
    pub fn support_equation_holds(&self) -> bool {
        (0..self.letter_count()).all(|i| {
            let total = self.rules[i]
                .iter()
                .fold(AlgebraicNumber::zero(self.field()), |acc, &j| &acc + self.length(j));
            total == &self.lambda * self.length(i)
        })
    }

    /// Least k with M^k positive, if any.
    pub fn is_primitive(&self) -> Option<usize> {
        primitivity_power(&self.matrix)
    }

    /// No translation period. Exact for irrational λ; for integer λ a
    /// period up to the complexity bound is excluded.
    pub fn is_aperiodic(&self) -> bool {
        self.aperiodicity_evidence().is_ok()
    }

    fn aperiodicity_evidence(&self) -> Result<AperiodicityEvidence, SubstitutionError> {
        if self.lambda.as_rational().is_none() {
            return Ok(AperiodicityEvidence::IrrationalExpansion);
        }
        for n in 1..=COMPLEXITY_BOUND {
            let p = self.factors(n).len();
            if p <= n {
                return Err(SubstitutionError::PeriodicTilingSpace(format!(
                    "word complexity p({n}) = {p} <= {n}, so the tilings are periodic"
                )));
            }
        }
        Ok(AperiodicityEvidence::ComplexityBound {
            checked_up_to: COMPLEXITY_BOUND,
        })
    }

    /// The word Φ^m(w).
    pub fn iterate_word(&self, w: &[usize], m: usize) -> Vec<usize> {
        let mut cur = w.to_vec();
        for _ in 0..m {
            cur = cur.iter().flat_map(|&i| self.rules[i].iter().copied()).collect();
        }
        cur
    }

    /// Legal words of length n.
    pub fn factors(&self, n: usize) -> BTreeSet<Vec<usize>> {
        let shortest = |m: usize| {
            (0..self.letter_count())
                .map(|i| self.iterate_word(&[i], m).len())
                .min()
                .unwrap_or(0)
        };
        let mut m = 0;
        while shortest(m) < n {
            m += 1;
        }
        let mut out = BTreeSet::new();
        for &(x, y) in &self.legal_pairs {
            let w = self.iterate_word(&[x, y], m);
            for f in w.windows(n) {
                out.insert(f.to_vec());
            }
        }
        if n == 1 {
            for i in 0..self.letter_count() {
                out.insert(vec![i]);
            }
        }
        out
    }

    /// Φ applied tile by tile: (i, t) ↦ children of i placed from λt.
    pub fn inflate(&self, p: &Patch) -> Patch {
        let mut tiles = Vec::with_capacity(p.len() * 2);
        for t in &p.tiles {
            let base = &self.lambda * &t.start;
            for (&j, off) in self.rules[t.proto].iter().zip(&self.child_offsets[t.proto]) {
                tiles.push(PlacedTile::new(j, &base + off, self.length(j)));
            }
        }
        Patch { tiles }
    }

    /// Φ^m(ρ) with left endpoint at 0.
    pub fn supertile(&self, proto: usize, m: usize) -> Patch {
        let mut p = Patch {
            tiles: vec![PlacedTile::new(proto, AlgebraicNumber::zero(self.field()), self.length(proto))],
        };
        for _ in 0..m {
            p = self.inflate(&p);
        }
        p
    }

    /// The substitution Φ^k as a system of its own.
    pub fn power(&self, k: usize) -> Result<SubstitutionSystem, SubstitutionError> {
        let rules = (0..self.letter_count()).map(|i| self.iterate_word(&[i], k)).collect();
        let letters: Vec<String> = self.alphabet.iter().map(|p| p.id.clone()).collect();
        Self::from_indexed(&format!("{}^{}", self.name, k), &letters, rules, None, true)
    }

    /// Constant rule length, when all rules have the same length.
    pub fn constant_length(&self) -> Option<usize> {
        let q = self.rules[0].len();
        self.rules.iter().all(|r| r.len() == q).then_some(q)
    }

    /// Seeds (x|y) lying on cycles of (x|y) ↦ (last Φ(x) | first Φ(y)).
    pub fn periodic_points(&self) -> Vec<PeriodicPoint> {
        let step = |(x, y): (usize, usize)| (*self.rules[x].last().expect("nonempty"), self.rules[y][0]);
        let mut out = Vec::new();
        for &seed in &self.legal_pairs {
            let mut cur = step(seed);
            let mut k = 1;
            while cur != seed && k <= self.legal_pairs.len() {
                cur = step(cur);
                k += 1;
            }
            if cur == seed {
                out.push(PeriodicPoint::new(seed, k));
            }
        }
        out
    }

    /// Window of a periodic point's tiling covering [−R, R], obtained by
    /// applying Φ^k to the seed until both sides extend past R.
    pub fn expand_to_radius(
        &self,
        pp: &PeriodicPoint,
        radius: &AlgebraicNumber,
        max_tiles: usize,
    ) -> Result<TilingWindow, SubstitutionError> {
        let (patch, level) = pp.patch_covering(self, radius, max_tiles)?;
        let trimmed = patch.tiles_meeting(&-radius, radius);
        Ok(TilingWindow::new(
            trimmed,
            radius.clone(),
            format!(
                "{} periodic point {}|{} (period {}), level {}",
                self.name,
                self.letter_name(pp.seed.0),
                self.letter_name(pp.seed.1),
                pp.period,
                level
            ),
        ))
    }

    /// Translation classes of R-patches occurring in the hull.
    pub fn allowed_patches(&self, r: &AlgebraicNumber) -> AllowedPatches {
        let minl = self.min_length();
        let maxl = self.max_length();
        let two = AlgebraicNumber::from_int(self.field(), 2);
        let need = &(&two * r) + &(&two * &maxl);
        let mut depth = 0usize;
        let mut scale = minl.clone();
        while scale < need {
            scale = &scale * &self.lambda;
            depth += 1;
        }
        let mut classes: HashSet<Patch> = HashSet::new();
        for &(x, y) in &self.legal_pairs {
            let zero = AlgebraicNumber::zero(self.field());
            let seed = Patch {
                tiles: vec![
                    PlacedTile::new(x, -self.length(x), self.length(x)),
                    PlacedTile::new(y, zero, self.length(y)),
                ],
            };
            let mut s = seed;
            for _ in 0..depth {
                s = self.inflate(&s);
            }
            let (lo, hi) = s.support().expect("nonempty supertile");
            let mut centres: Vec<AlgebraicNumber> = Vec::new();
            for t in &s.tiles {
                for e in [&t.start, &t.end] {
                    centres.push(e - r);
                    centres.push(e + r);
                }
            }
            centres.sort();
            centres.dedup();
            let mids: Vec<AlgebraicNumber> = centres.windows(2).map(|w| (&w[0] + &w[1]).half()).collect();
            centres.extend(mids);
            for c in centres {
                let a = &c - r;
                let b = &c + r;
                if lo < a && b < hi {
                    classes.insert(s.tiles_meeting(&a, &b).normalized());
                }
            }
        }
        let mut list: Vec<Patch> = classes.into_iter().collect();
        list.sort_by(|p, q| {
            p.word()
                .cmp(&q.word())
                .then_with(|| p.len().cmp(&q.len()))
                .then_with(|| p.tiles.iter().map(|t| &t.start).cmp(q.tiles.iter().map(|t| &t.start)))
        });
        AllowedPatches {
            radius: r.clone(),
            depth,
            patches: list,
        }
    }

    /// Pisot family test on the conjugates of λ.
    pub fn pisot_family_check(&self) -> PisotVerdict {
        pisot_check(&self.lambda)
    }
}

/// Legal two-letter words: the closure of the two-letter factors of Φ(x).
pub fn legal_pairs(rules: &[Vec<usize>]) -> BTreeSet<(usize, usize)> {
    let mut legal: BTreeSet<(usize, usize)> = BTreeSet::new();
    for r in rules {
        for w in r.windows(2) {
            legal.insert((w[0], w[1]));
        }
    }
    loop {
        let mut added = Vec::new();
        for &(x, y) in &legal {
            let bridge = (*rules[x].last().expect("nonempty"), rules[y][0]);
            if !legal.contains(&bridge) {
                added.push(bridge);
            }
        }
        if added.is_empty() {
            break;
        }
        legal.extend(added);
    }
    legal
}

/// A Φ^k-invariant seed: tile x ending at 0, tile y starting at 0.
#[derive(Clone, Debug)]
pub struct PeriodicPoint {
    pub seed: (usize, usize),
    pub period: usize,
    cache: Arc<Mutex<BTreeMap<usize, Patch>>>,
}

impl PartialEq for PeriodicPoint {
    fn eq(&self, other: &Self) -> bool {
        self.seed == other.seed && self.period == other.period
    }
}

impl Eq for PeriodicPoint {}

impl PeriodicPoint {
    pub fn new(seed: (usize, usize), period: usize) -> Self {
        PeriodicPoint {
            seed,
            period,
            cache: Arc::new(Mutex::new(BTreeMap::new())),
        }
    }

    pub fn label(&self, sys: &SubstitutionSystem) -> String {
        format!("{}|{}", sys.letter_name(self.seed.0), sys.letter_name(self.seed.1))
    }

    pub fn seed_patch(&self, sys: &SubstitutionSystem) -> Patch {
        let (x, y) = self.seed;
        Patch {
            tiles: vec![
                PlacedTile::new(x, -sys.length(x), sys.length(x)),
                PlacedTile::new(y, AlgebraicNumber::zero(sys.field()), sys.length(y)),
            ],
        }
    }

    /// Φ^{k·level}(seed), cached.
    pub fn level(&self, sys: &SubstitutionSystem, level: usize) -> Patch {
        let mut cache = self.cache.lock().expect("cache lock");
        if let Some(p) = cache.get(&level) {
            return p.clone();
        }
        let (mut from, mut p) = match cache.range(..level).next_back() {
            Some((&l, p)) => (l, p.clone()),
            None => (0, self.seed_patch(sys)),
        };
        while from < level {
            for _ in 0..self.period {
                p = sys.inflate(&p);
            }
            from += 1;
        }
        cache.insert(level, p.clone());
        p
    }

    fn patch_covering(
        &self,
        sys: &SubstitutionSystem,
        radius: &AlgebraicNumber,
        max_tiles: usize,
    ) -> Result<(Patch, usize), SubstitutionError> {
        let lam = sys.lambda.to_f64().powi(self.period as i32);
        let seed_len = (sys.length(self.seed.0) + sys.length(self.seed.1)).to_f64();
        let min_len = sys.min_length().to_f64();
        let mut level = 0;
        loop {
            let (x, y) = self.seed;
            let lk = sys.lambda.pow((self.period * level) as u32);
            let left = &lk * sys.length(x);
            let right = &lk * sys.length(y);
            if left > *radius && right > *radius {
                break;
            }
            level += 1;
            let est = lam.powi(level as i32) * seed_len / min_len;
            if !est.is_finite() || est > max_tiles as f64 {
                return Err(SubstitutionError::ResourceBudget(format!(
                    "covering radius {} needs about {:.3e} tiles, budget is {}",
                    radius.to_f64(),
                    est,
                    max_tiles
                )));
            }
        }
        Ok((self.level(sys, level), level))
    }
}

#[derive(Clone, Debug)]
pub struct AllowedPatches {
    pub radius: AlgebraicNumber,
    /// Supertile depth m scanned; λ^m·min_len ≥ 2R + 2·max_len.
    pub depth: usize,
    pub patches: Vec<Patch>,
}

#[derive(Clone, Debug)]
pub enum PisotVerdict {
    PisotFamily {
        degree: usize,
        multiplicity: usize,
    },
    NotPisotFamily {
        witness: Complex64,
        modulus: f64,
        on_unit_circle: bool,
    },
}

impl PisotVerdict {
    pub fn is_pisot(&self) -> bool {
        matches!(self, PisotVerdict::PisotFamily { .. })
    }
}

impl fmt::Display for PisotVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PisotVerdict::PisotFamily { degree, multiplicity } => write!(f, "PisotFamily(d={degree}, J={multiplicity})"),
            PisotVerdict::NotPisotFamily {
                witness,
                modulus,
                on_unit_circle,
            } => {
                write!(
                    f,
                    "NotPisotFamily(conjugate {:.6}{:+.6}i, |z| = {:.6}",
                    witness.re, witness.im, modulus
                )?;
                if *on_unit_circle {
                    write!(f, ", on the unit circle")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// All conjugates other than λ strictly inside the unit circle.
pub fn pisot_check(lambda: &AlgebraicNumber) -> PisotVerdict {
    let field = lambda.field();
    let d = field.degree();
    if d == 1 {
        return PisotVerdict::PisotFamily {
            degree: 1,
            multiplicity: 1,
        };
    }
    let q = field.qpoly();
    let discs = field.conjugates();
    let lam = lambda.to_f64();
    let shrink = BigRational::new(BigInt::one(), BigInt::one() << 64);
    let unit = roots::has_unit_modulus_root(q);
    // Skip the disc of λ itself: the real disc whose centre is closest to λ.
    let mut others: Vec<&RootDisc> = discs.iter().collect();
    if let Some(pos) = others
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_real())
        .min_by(|a, b| {
            let da = (a.1.approx().re - lam).abs();
            let db = (b.1.approx().re - lam).abs();
            da.partial_cmp(&db).unwrap()
        })
        .map(|(i, _)| i)
    {
        others.remove(pos);
    }
    for disc in others {
        let mut disc = disc.clone();
        let mut tries = 0;
        let verdict = loop {
            if let Some(o) = disc.modulus_vs_one() {
                break Some(o);
            }
            if tries > 8 {
                break None;
            }
            disc = roots::refine_disc(q, &disc, &(&disc.radius * &shrink));
            tries += 1;
        };
        let z = disc.approx();
        match verdict {
            Some(std::cmp::Ordering::Less) => {}
            Some(_) => {
                return PisotVerdict::NotPisotFamily {
                    witness: z,
                    modulus: z.norm(),
                    on_unit_circle: false,
                }
            }
            None => {
                // Undecided discs straddle the circle; the exact test settles it.
                if unit {
                    return PisotVerdict::NotPisotFamily {
                        witness: z,
                        modulus: z.norm(),
                        on_unit_circle: true,
                    };
                }
            }
        }
    }
    if unit {
        return PisotVerdict::NotPisotFamily {
            witness: Complex64::new(1.0, 0.0),
            modulus: 1.0,
            on_unit_circle: true,
        };
    }
    PisotVerdict::PisotFamily {
        degree: d,
        multiplicity: 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(rules: &[(&str, &str)]) -> Result<SubstitutionSystem, SubstitutionError> {
        let letters: Vec<String> = rules.iter().map(|(l, _)| l.to_string()).collect();
        let words: Vec<Vec<String>> = rules.iter().map(|(_, w)| w.chars().map(|c| c.to_string()).collect()).collect();
        SubstitutionSystem::build("t", &letters, &words)
    }

    #[test]
    fn fibonacci_lengths() {
        let s = sys(&[("a", "ab"), ("b", "a")]).unwrap();
        let f = s.field();
        assert_eq!(*s.length(0), AlgebraicNumber::one(f));
        assert_eq!(*s.length(1), &s.lambda - &AlgebraicNumber::one(f));
        assert!(s.support_equation_holds());
        assert_eq!(s.is_primitive(), Some(2));
    }

    #[test]
    fn period_doubling_needs_left_eigenvector() {
        // M = [[1,2],[1,0]]: the right eigenvector (2,1) would not satisfy
        // the support equation, the left one (1,1) does.
        let s = sys(&[("a", "ab"), ("b", "aa")]).unwrap();
        assert!(s.support_equation_holds());
        assert_eq!(s.length(1), s.length(0));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(sys(&[("a", "ab"), ("b", "b")]), Err(SubstitutionError::NotPrimitive(_))));
        assert!(matches!(sys(&[("a", "aa")]), Err(SubstitutionError::PeriodicTilingSpace(_))));
        let l = vec!["a".to_string()];
        let periodic = SubstitutionSystem::build_unchecked("p", &l, &[vec!["a".into(), "a".into()]]).unwrap();
        assert!(!periodic.is_aperiodic());
        assert!(matches!(sys(&[("a", "a")]), Err(SubstitutionError::NotExpanding(_))));
        assert!(matches!(sys(&[("a", "ab"), ("b", "")]), Err(SubstitutionError::EmptyRule(_))));
        // periodic although primitive: abab...
        assert!(matches!(
            sys(&[("a", "aba"), ("b", "bab")]),
            Err(SubstitutionError::PeriodicTilingSpace(_))
        ));
    }

    #[test]
    fn fibonacci_periodic_points() {
        let s = sys(&[("a", "ab"), ("b", "a")]).unwrap();
        let pts: Vec<_> = s.periodic_points().iter().map(|p| (p.label(&s), p.period)).collect();
        assert_eq!(pts, vec![("a|a".to_string(), 2), ("b|a".to_string(), 2)]);
    }

    #[test]
    fn thue_morse_has_four_seeds() {
        let s = sys(&[("a", "ab"), ("b", "ba")]).unwrap();
        let pts = s.periodic_points();
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|p| p.period == 2));
    }

    #[test]
    fn supertile_sizes() {
        let s = sys(&[("a", "ab"), ("b", "a")]).unwrap();
        let p = s.supertile(0, 5);
        assert_eq!(p.len(), 13);
        assert!(p.is_contiguous());
        assert_eq!(p.support().unwrap().1, s.lambda.pow(5));
    }

    #[test]
    fn pisot_verdicts() {
        let fib = sys(&[("a", "ab"), ("b", "a")]).unwrap();
        assert!(matches!(
            fib.pisot_family_check(),
            PisotVerdict::PisotFamily {
                degree: 2,
                multiplicity: 1
            }
        ));
        let non = sys(&[("a", "abbb"), ("b", "a")]).unwrap();
        match non.pisot_family_check() {
            PisotVerdict::NotPisotFamily { witness, .. } => assert!((witness.re + 1.302_775_637_7).abs() < 1e-6),
            other => panic!("unexpected {other}"),
        }
    }
}
