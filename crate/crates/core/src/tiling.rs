//! One-dimensional tiles, patches, R-patches, puncture maps and the two
//! tiling metrics, all with supports in ℚ(λ).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt::Write as _;
use thiserror::Error;

use crate::algebra::roots::sqrt_upper;
use crate::algebra::{AlgebraicNumber, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingError {
    #[error("radius {requested} exceeds the window radius {available}")]
    RadiusExceedsWindow { requested: String, available: String },
    #[error("window radius {0} is too small (need at least {1})")]
    WindowTooSmall(String, String),
    #[error("patch line {0}: {1}")]
    Parse(usize, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtoTile {
    pub id: String,
    pub length: AlgebraicNumber,
    pub mark: Option<String>,
}

/// A translate of a prototile; `proto` indexes the alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlacedTile {
    pub proto: usize,
    pub start: AlgebraicNumber,
    pub end: AlgebraicNumber,
}

impl PlacedTile {
    pub fn new(proto: usize, start: AlgebraicNumber, length: &AlgebraicNumber) -> Self {
        let end = &start + length;
        PlacedTile { proto, start, end }
    }

    pub fn translate(&self, v: &AlgebraicNumber) -> Self {
        PlacedTile {
            proto: self.proto,
            start: &self.start + v,
            end: &self.end + v,
        }
    }

    /// Closed support meets the closed interval [lo, hi].
    pub fn meets(&self, lo: &AlgebraicNumber, hi: &AlgebraicNumber) -> bool {
        self.start <= *hi && self.end >= *lo
    }

    /// Interiors overlap.
    pub fn overlaps(&self, other: &PlacedTile) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// Tiles with disjoint interiors, sorted by left endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Patch {
    pub tiles: Vec<PlacedTile>,
}

impl Patch {
    pub fn new(mut tiles: Vec<PlacedTile>) -> Self {
        tiles.sort_by(|a, b| a.start.cmp(&b.start));
        Patch { tiles }
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn translate(&self, v: &AlgebraicNumber) -> Patch {
        Patch {
            tiles: self.tiles.iter().map(|t| t.translate(v)).collect(),
        }
    }

    /// Translate so the first tile starts at 0.
    pub fn normalized(&self) -> Patch {
        match self.tiles.first() {
            None => self.clone(),
            Some(t) => self.translate(&-&t.start),
        }
    }

    pub fn support(&self) -> Option<(AlgebraicNumber, AlgebraicNumber)> {
        Some((self.tiles.first()?.start.clone(), self.tiles.last()?.end.clone()))
    }

    /// True when consecutive tiles abut exactly.
    pub fn is_contiguous(&self) -> bool {
        self.tiles.windows(2).all(|w| w[0].end == w[1].start)
    }

    pub fn is_subpatch_of(&self, other: &Patch) -> bool {
        self.tiles.iter().all(|t| {
            other
                .tiles
                .binary_search_by(|o| o.start.cmp(&t.start))
                .is_ok_and(|i| other.tiles[i] == *t)
        })
    }

    /// Letters of the patch, left to right.
    pub fn word(&self) -> Vec<usize> {
        self.tiles.iter().map(|t| t.proto).collect()
    }

    pub fn tiles_meeting(&self, lo: &AlgebraicNumber, hi: &AlgebraicNumber) -> Patch {
        let first = self.tiles.partition_point(|t| t.end < *lo);
        let mut out = Vec::new();
        for t in &self.tiles[first..] {
            if t.start > *hi {
                break;
            }
            out.push(t.clone());
        }
        Patch { tiles: out }
    }

    /// Line-based text form: one `proto_id<TAB>translate` record per tile.
    pub fn serialize(&self, alphabet: &[ProtoTile]) -> String {
        let mut s = String::new();
        for t in &self.tiles {
            let _ = writeln!(s, "{}\t{}", alphabet[t.proto].id, t.start);
        }
        s
    }

    pub fn deserialize(text: &str, alphabet: &[ProtoTile], field: &Field) -> Result<Patch, TilingError> {
        let mut tiles = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (id, pos) = line
                .split_once('\t')
                .ok_or_else(|| TilingError::Parse(n + 1, "expected `id<TAB>translate`".into()))?;
            let proto = alphabet
                .iter()
                .position(|p| p.id == id.trim())
                .ok_or_else(|| TilingError::Parse(n + 1, format!("unknown tile `{id}`")))?;
            let start = AlgebraicNumber::parse(field, pos).map_err(|e| TilingError::Parse(n + 1, e.to_string()))?;
            tiles.push(PlacedTile::new(proto, start, &alphabet[proto].length));
        }
        Ok(Patch::new(tiles))
    }

    /// SVG picture: one coloured rectangle per tile, origin marked.
    pub fn to_svg(&self, alphabet: &[ProtoTile]) -> String {
        const PALETTE: [&str; 6] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948"];
        let Some((lo, hi)) = self.support() else {
            return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"10\" height=\"10\"/>\n".into();
        };
        let (lo, hi) = (lo.to_f64(), hi.to_f64());
        let scale = 1000.0 / (hi - lo).max(1e-9);
        let x = |v: f64| (v - lo) * scale + 10.0;
        let mut s = String::from("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1020\" height=\"70\" viewBox=\"0 0 1020 70\">\n");
        for t in &self.tiles {
            let (a, b) = (x(t.start.to_f64()), x(t.end.to_f64()));
            let _ = writeln!(
                s,
                "  <rect x=\"{a:.3}\" y=\"20\" width=\"{:.3}\" height=\"30\" fill=\"{}\" stroke=\"black\" stroke-width=\"0.5\"><title>{} @ {}</title></rect>",
                b - a,
                PALETTE[t.proto % PALETTE.len()],
                alphabet[t.proto].id,
                t.start
            );
        }
        if lo <= 0.0 && 0.0 <= hi {
            let _ = writeln!(
                s,
                "  <line x1=\"{0:.3}\" y1=\"10\" x2=\"{0:.3}\" y2=\"60\" stroke=\"red\"/>",
                x(0.0)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// A finite piece of a tiling whose patch covers [−radius, radius].
#[derive(Clone, Debug)]
pub struct TilingWindow {
    pub patch: Patch,
    pub radius: AlgebraicNumber,
    pub generator: String,
}

impl TilingWindow {
    pub fn new(patch: Patch, radius: AlgebraicNumber, generator: impl Into<String>) -> Self {
        TilingWindow {
            patch,
            radius,
            generator: generator.into(),
        }
    }

    pub fn field(&self) -> &Field {
        self.radius.field()
    }

    /// The window of T − v, with radius shrunk so it stays covered.
    pub fn translate(&self, v: &AlgebraicNumber) -> TilingWindow {
        let radius = &self.radius - &v.abs();
        let shifted = self.patch.translate(&-v);
        let patch = shifted.tiles_meeting(&-&radius, &radius);
        TilingWindow {
            patch,
            radius,
            generator: format!("{} shifted by {}", self.generator, v),
        }
    }
}

/// Tile-interior reference points, one offset per prototile.
#[derive(Clone, Debug)]
pub struct PunctureMap {
    pub offsets: Vec<AlgebraicNumber>,
}

impl PunctureMap {
    /// Midpoints of the tiles.
    pub fn midpoints(alphabet: &[ProtoTile]) -> Self {
        PunctureMap {
            offsets: alphabet.iter().map(|p| p.length.half()).collect(),
        }
    }

    /// The same offset for every prototile; it must lie inside each tile.
    pub fn uniform(alphabet: &[ProtoTile], c: &AlgebraicNumber) -> Option<Self> {
        let zero = AlgebraicNumber::zero(c.field());
        alphabet.iter().all(|p| *c > zero && *c < p.length).then(|| PunctureMap {
            offsets: vec![c.clone(); alphabet.len()],
        })
    }

    pub fn puncture(&self, t: &PlacedTile) -> AlgebraicNumber {
        &t.start + &self.offsets[t.proto]
    }
}

/// B_R at the origin: tiles whose support meets the closed ball [−R, R].
pub fn r_patch(w: &TilingWindow, r: &AlgebraicNumber) -> Result<Patch, TilingError> {
    if *r > w.radius {
        return Err(TilingError::RadiusExceedsWindow {
            requested: r.to_string(),
            available: w.radius.to_string(),
        });
    }
    Ok(w.patch.tiles_meeting(&-r, r))
}

/// Maximal interval (lo, hi) on which two tilings share every tile.
#[derive(Clone, Debug)]
pub struct CommonRun {
    pub lo: AlgebraicNumber,
    pub hi: AlgebraicNumber,
    /// The run reaches the edge of the stored data on that side, so the
    /// tilings may agree further out.
    pub open_lo: bool,
    pub open_hi: bool,
}

/// Common runs of `a + s` and `b`, in the coordinates of `b`.
pub fn common_runs(a: &Patch, b: &Patch, s: &AlgebraicNumber) -> Vec<CommonRun> {
    let mut runs: Vec<CommonRun> = Vec::new();
    let (mut i, mut j) = (0, 0);
    let mut last: Option<(usize, usize)> = None;
    while i < a.tiles.len() && j < b.tiles.len() {
        let sa = &a.tiles[i].start + s;
        match sa.cmp(&b.tiles[j].start) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                if a.tiles[i].proto == b.tiles[j].proto {
                    let hi = b.tiles[j].end.clone();
                    let continues = last == Some((i.wrapping_sub(1), j.wrapping_sub(1))) && i > 0 && j > 0;
                    if continues {
                        runs.last_mut().expect("run in progress").hi = hi;
                    } else {
                        runs.push(CommonRun {
                            lo: sa,
                            hi,
                            open_lo: i == 0 || j == 0,
                            open_hi: false,
                        });
                    }
                    last = Some((i, j));
                }
                i += 1;
                j += 1;
            }
        }
    }
    if let (Some((li, lj)), Some(run)) = (last, runs.last_mut()) {
        run.open_hi = li + 1 == a.tiles.len() || lj + 1 == b.tiles.len();
    }
    runs
}

/// An upper bound on a metric, flagged when the true value may be smaller
/// than the stored windows can resolve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricValue {
    pub value: BigRational,
    pub window_limited: bool,
}

impl MetricValue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

fn common_radius(w1: &TilingWindow, w2: &TilingWindow) -> Result<AlgebraicNumber, TilingError> {
    let r = std::cmp::min(&w1.radius, &w2.radius).clone();
    let one = AlgebraicNumber::one(r.field());
    if r < one {
        return Err(TilingError::WindowTooSmall(r.to_string(), "1".into()));
    }
    Ok(r)
}

fn rat(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// ε ↦ ε/(ε+1), monotone.
fn eps_to_value(eps: &BigRational) -> BigRational {
    eps / (eps + BigRational::one())
}

/// Largest R with B_R[T1] = B_R[T2] (exclusive supremum), from the run around 0.
pub fn agreement_radius(w1: &TilingWindow, w2: &TilingWindow) -> Option<(AlgebraicNumber, bool)> {
    let zero = AlgebraicNumber::zero(w1.field());
    let runs = common_runs(&w1.patch, &w2.patch, &zero);
    let run = runs.into_iter().find(|r| r.lo < zero && zero < r.hi)?;
    let left = -&run.lo;
    if left <= run.hi {
        Some((left, run.open_lo))
    } else {
        Some((run.hi.clone(), run.open_hi))
    }
}

fn agree_on_common(w1: &TilingWindow, w2: &TilingWindow, r: &AlgebraicNumber) -> bool {
    w1.patch.tiles_meeting(&-r, r) == w2.patch.tiles_meeting(&-r, r)
}

/// d₀: agreement at the origin without translation.
pub fn metric_d0(w1: &TilingWindow, w2: &TilingWindow) -> Result<MetricValue, TilingError> {
    let r = common_radius(w1, w2)?;
    if agree_on_common(w1, w2, &r) {
        return Ok(MetricValue {
            value: BigRational::zero(),
            window_limited: w1.patch != w2.patch || w1.radius != w2.radius,
        });
    }
    Ok(match agreement_radius(w1, w2) {
        None => MetricValue {
            value: BigRational::one(),
            window_limited: false,
        },
        Some((rstar, open)) => {
            // ε = 1/R*, value = 1/(1+R*); use a lower bound on R*.
            let lo = rstar.enclosure().0;
            MetricValue {
                value: BigRational::one() / (BigRational::one() + lo),
                window_limited: open,
            }
        }
    })
}

/// Smallest ε admitting a centre for the run (lo, hi) under shift s
/// (rational upper bound).
fn run_epsilon(run: &CommonRun, s: &AlgebraicNumber) -> BigRational {
    let zero = AlgebraicNumber::zero(s.field());
    let a = if s.is_negative() { -s } else { zero.clone() };
    let b = if s.is_positive() { s.clone() } else { zero };
    let two = rat(2);
    let f = |c: &AlgebraicNumber| -> BigRational {
        let c = c.enclosure().1;
        &c + sqrt_upper(&(&c * &c + &two))
    };
    let width_lo = (&run.hi - &run.lo).enclosure().0;
    let mut eps = s.abs().enclosure().1;
    let cands = [&two / width_lo, f(&(&b - &run.hi)), f(&(&run.lo + &a))];
    for c in cands {
        if c > eps {
            eps = c;
        }
    }
    eps
}

/// d: agreement of small translates. Candidate relative shifts are the exact
/// differences of equal-type tile positions; candidates farther than the
/// current best ε are pruned.
pub fn metric_d(w1: &TilingWindow, w2: &TilingWindow) -> Result<MetricValue, TilingError> {
    let r = common_radius(w1, w2)?;
    let d0 = metric_d0(w1, w2)?;
    if d0.value.is_zero() {
        return Ok(d0);
    }
    let min_eps = BigRational::one() / r.enclosure().0;
    let mut best: Option<(BigRational, bool)> = None;
    let mut shifts: Vec<(f64, AlgebraicNumber)> = Vec::new();
    for t1 in &w1.patch.tiles {
        for t2 in &w2.patch.tiles {
            if t1.proto == t2.proto {
                let s = &t2.start - &t1.start;
                shifts.push((s.to_f64().abs(), s));
            }
        }
    }
    shifts.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal));
    shifts.dedup_by(|x, y| x.1 == y.1);
    for (mag, s) in &shifts {
        if let Some((eps, _)) = &best {
            if *mag > eps.to_f64().unwrap_or(f64::INFINITY) * (1.0 + 1e-9) {
                break;
            }
        }
        for run in common_runs(&w1.patch, &w2.patch, s) {
            let eps = run_epsilon(&run, s);
            let open = run.open_lo || run.open_hi;
            if best.as_ref().is_none_or(|(e, _)| eps < *e) {
                best = Some((eps, open));
            }
        }
    }
    let Some((mut eps, mut limited)) = best else {
        return Ok(d0);
    };
    if eps < min_eps {
        eps = min_eps;
        limited = true;
    }
    let value = eps_to_value(&eps);
    if value >= d0.value {
        return Ok(d0);
    }
    Ok(MetricValue {
        value,
        window_limited: limited,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{MinimalPolynomial, NumberField};

    fn unit_alphabet(f: &Field) -> Vec<ProtoTile> {
        ["a", "b"]
            .iter()
            .map(|id| ProtoTile {
                id: id.to_string(),
                length: AlgebraicNumber::one(f),
                mark: None,
            })
            .collect()
    }

    fn window(word: &str, origin: i64, f: &Field) -> TilingWindow {
        let alpha = unit_alphabet(f);
        let tiles = word
            .bytes()
            .enumerate()
            .map(|(k, c)| {
                PlacedTile::new(
                    (c - b'a') as usize,
                    AlgebraicNumber::from_int(f, k as i64 - origin),
                    &alpha[0].length,
                )
            })
            .collect();
        let n = word.len() as i64;
        let radius = AlgebraicNumber::from_int(f, origin.min(n - origin) - 1);
        TilingWindow::new(Patch::new(tiles), radius, "test")
    }

    fn q() -> Field {
        NumberField::new(MinimalPolynomial::from_i64(&[-2, 1]).unwrap()).unwrap()
    }

    #[test]
    fn r_patch_closed_ball() {
        let f = q();
        let w = window("abababababab", 6, &f);
        // R = 0 hits the two tiles sharing the endpoint 0.
        let p = r_patch(&w, &AlgebraicNumber::zero(&f)).unwrap();
        assert_eq!(p.len(), 2);
        let p = r_patch(&w, &AlgebraicNumber::from_int(&f, 2)).unwrap();
        assert_eq!(p.len(), 6);
        assert!(r_patch(&w, &AlgebraicNumber::from_int(&f, 100)).is_err());
    }

    #[test]
    fn d0_brackets_first_disagreement() {
        let f = q();
        let w1 = window("aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa", 22, &f);
        // differs in the tile [10, 11]
        let mut s: Vec<u8> = b"aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa".to_vec();
        s[32] = b'b';
        let w2 = window(std::str::from_utf8(&s).unwrap(), 22, &f);
        let d = metric_d0(&w1, &w2).unwrap();
        // agree for R < 10
        assert_eq!(d.value, BigRational::new(1.into(), 11.into()));
        assert_eq!(metric_d0(&w1, &w1).unwrap().value, BigRational::zero());
    }

    #[test]
    fn shifted_periodic_word_is_close() {
        let f = q();
        let w1 = window("abababababababababababababababab", 16, &f);
        let w2 = window("babababababababababababababababa", 16, &f);
        let d0 = metric_d0(&w1, &w2).unwrap();
        assert_eq!(d0.value, BigRational::one());
        let d = metric_d(&w1, &w2).unwrap();
        assert!(d.value < d0.value);
        assert!(d.value >= BigRational::zero());
    }

    #[test]
    fn runs_are_maximal() {
        let f = q();
        let w1 = window("aaaabaaaa", 4, &f);
        let w2 = window("aaaaaaaaa", 4, &f);
        let runs = common_runs(&w1.patch, &w2.patch, &AlgebraicNumber::zero(&f));
        assert_eq!(runs.len(), 2);
        assert!(runs[0].open_lo && !runs[0].open_hi);
        assert!(!runs[1].open_lo && runs[1].open_hi);
        assert_eq!(runs[0].hi, AlgebraicNumber::zero(&f));
        assert_eq!(runs[1].lo, AlgebraicNumber::one(&f));
    }

    #[test]
    fn serialization_round_trip() {
        let f = q();
        let alpha = unit_alphabet(&f);
        let w = window("abba", 2, &f);
        let text = w.patch.serialize(&alpha);
        assert_eq!(Patch::deserialize(&text, &alpha, &f).unwrap(), w.patch);
        assert!(w.patch.to_svg(&alpha).contains("<rect"));
    }
}
