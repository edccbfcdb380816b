//! Proximality of periodic points, the pair overlap graph, coincidence
//! rank and the pure discrete spectrum verdict.
//!
//! Fibers of the maximal equicontinuous factor are sampled by the
//! Φ-periodic points. Two of them lie in one fiber when the offset between
//! equal-type tiles is in λ^{-j}Ξ for some j (Ξ the return module); they are
//! proximal exactly when a coincidence is reachable in the pair graph from
//! their seed overlaps.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::AlgebraicNumber;
use crate::spectrum::{coords_in_basis, return_module};
use crate::substitution::{PeriodicPoint, SubstitutionError, SubstitutionSystem};
use crate::tiling::{common_runs, PlacedTile, TilingWindow};

#[derive(Debug, Error)]
pub enum ProximalityError {
    #[error("window radius {radius} too small, need {needed}")]
    WindowTooSmall { radius: String, needed: String },
    #[error("pair graph exceeded the node budget of {budget} ({} nodes explored)", partial.nodes.len())]
    NodeBudgetExceeded { budget: usize, partial: Box<PairOverlapGraph> },
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("substitution is not of constant length")]
    NotConstantLength,
    #[error("not a Meyer substitution: {0}")]
    NotMeyer(String),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
}

/// Tile `left` at 0 and tile `right` at `offset`, interiors overlapping.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairNode {
    pub left: usize,
    pub right: usize,
    pub offset: AlgebraicNumber,
}

impl PairNode {
    pub fn is_coincidence(&self) -> bool {
        self.left == self.right && self.offset.is_zero()
    }

    pub fn label(&self, sys: &SubstitutionSystem) -> String {
        format!("{}|{} @ {}", sys.letter_name(self.left), sys.letter_name(self.right), self.offset)
    }
}

/// Overlapping pairs inside Φ(left at 0) and Φ(right at offset), shifted so
/// the left member starts at 0.
pub fn pair_children(sys: &SubstitutionSystem, n: &PairNode) -> Vec<PairNode> {
    let base = &sys.lambda * &n.offset;
    let mut out = Vec::new();
    for (&a, pa) in sys.rules[n.left].iter().zip(&sys.child_offsets[n.left]) {
        for (&b, pb) in sys.rules[n.right].iter().zip(&sys.child_offsets[n.right]) {
            let t = &(&base + pb) - pa;
            if t < *sys.length(a) && -&t < *sys.length(b) {
                out.push(PairNode {
                    left: a,
                    right: b,
                    offset: t,
                });
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, Default)]
pub struct PairOverlapGraph {
    pub nodes: Vec<PairNode>,
    /// Successors; empty for nodes not yet expanded in a partial graph.
    pub edges: Vec<Vec<usize>>,
    pub seeds: Vec<usize>,
    /// Every node expanded.
    pub complete: bool,
}

impl PairOverlapGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, n: &PairNode) -> Option<usize> {
        self.nodes.iter().position(|m| m == n)
    }

    /// Nodes from which a coincidence node is reachable.
    pub fn leads_to_coincidence(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for (i, es) in self.edges.iter().enumerate() {
            for &j in es {
                rev[j].push(i);
            }
        }
        let mut good = vec![false; self.len()];
        let mut queue: VecDeque<usize> = (0..self.len()).filter(|&i| self.nodes[i].is_coincidence()).collect();
        for &i in &queue {
            good[i] = true;
        }
        while let Some(i) = queue.pop_front() {
            for &j in &rev[i] {
                if !good[j] {
                    good[j] = true;
                    queue.push_back(j);
                }
            }
        }
        good
    }

    /// Shortest path from `from` to a coincidence node.
    pub fn coincidence_path(&self, from: usize) -> Option<Vec<usize>> {
        let mut parent: HashMap<usize, usize> = HashMap::new();
        let mut seen = HashSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(i) = queue.pop_front() {
            if self.nodes[i].is_coincidence() {
                let mut path = vec![i];
                let mut cur = i;
                while let Some(&p) = parent.get(&cur) {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &j in &self.edges[i] {
                if seen.insert(j) {
                    parent.insert(j, i);
                    queue.push_back(j);
                }
            }
        }
        None
    }

    /// Nodes reachable from `from`.
    pub fn reachable(&self, from: &[usize]) -> Vec<usize> {
        let mut seen: HashSet<usize> = from.iter().copied().collect();
        let mut queue: VecDeque<usize> = from.iter().copied().collect();
        while let Some(i) = queue.pop_front() {
            for &j in &self.edges[i] {
                if seen.insert(j) {
                    queue.push_back(j);
                }
            }
        }
        let mut v: Vec<usize> = seen.into_iter().collect();
        v.sort_unstable();
        v
    }

    /// Nodes that never reach a coincidence; closed under successors.
    pub fn coincidence_free(&self) -> Vec<usize> {
        let good = self.leads_to_coincidence();
        (0..self.len()).filter(|&i| !good[i]).collect()
    }

    /// DOT rendering with deterministic node order.
    pub fn to_dot(&self, sys: &SubstitutionSystem) -> String {
        let good = self.leads_to_coincidence();
        let mut s = String::from("digraph pairs {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let shape = if n.is_coincidence() {
                "doublecircle"
            } else if good[i] {
                "ellipse"
            } else {
                "box"
            };
            let seed = if self.seeds.contains(&i) { ", style=bold" } else { "" };
            let _ = writeln!(s, "  n{} [label=\"{}\", shape={}{}];", i, n.label(sys), shape, seed);
        }
        for (i, es) in self.edges.iter().enumerate() {
            for &j in es {
                let _ = writeln!(s, "  n{} -> n{};", i, j);
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Closure of `seeds` under [`pair_children`], expanded level by level.
/// Children of a level are computed in parallel and merged in node order.
pub fn pair_graph(sys: &SubstitutionSystem, seeds: &[PairNode], budget: usize) -> Result<PairOverlapGraph, ProximalityError> {
    let mut g = PairOverlapGraph::default();
    let mut index: HashMap<PairNode, usize> = HashMap::new();
    let mut frontier = Vec::new();
    for s in seeds {
        let id = *index.entry(s.clone()).or_insert_with(|| {
            g.nodes.push(s.clone());
            g.edges.push(Vec::new());
            frontier.push(g.nodes.len() - 1);
            g.nodes.len() - 1
        });
        if !g.seeds.contains(&id) {
            g.seeds.push(id);
        }
    }
    while !frontier.is_empty() {
        if g.nodes.len() > budget {
            return Err(ProximalityError::NodeBudgetExceeded {
                budget,
                partial: Box::new(g),
            });
        }
        let kids: Vec<Vec<PairNode>> = frontier.par_iter().map(|&i| pair_children(sys, &g.nodes[i])).collect();
        let mut next = Vec::new();
        for (&i, ks) in frontier.iter().zip(kids) {
            let mut es = Vec::with_capacity(ks.len());
            for k in ks {
                let id = match index.get(&k) {
                    Some(&id) => id,
                    None => {
                        g.nodes.push(k.clone());
                        g.edges.push(Vec::new());
                        let id = g.nodes.len() - 1;
                        index.insert(k, id);
                        next.push(id);
                        id
                    }
                };
                es.push(id);
            }
            g.edges[i] = es;
        }
        frontier = next;
    }
    if g.nodes.len() > budget {
        return Err(ProximalityError::NodeBudgetExceeded {
            budget,
            partial: Box::new(g),
        });
    }
    g.complete = true;
    Ok(g)
}

/// The two overlaps of the seed tiles of two periodic points: left tiles
/// ending at 0 and right tiles starting at 0.
pub fn seed_overlaps(sys: &SubstitutionSystem, p: &PeriodicPoint, q: &PeriodicPoint) -> Vec<PairNode> {
    let (x1, y1) = p.seed;
    let (x2, y2) = q.seed;
    vec![
        PairNode {
            left: x1,
            right: x2,
            offset: sys.length(x1) - sys.length(x2),
        },
        PairNode {
            left: y1,
            right: y2,
            offset: AlgebraicNumber::zero(sys.field()),
        },
    ]
}

/// Every pair of tiles (i at 0, j at t) with overlapping interiors that
/// occurs between two tilings of the hull, started from all legal seeds.
pub fn full_pair_graph(sys: &SubstitutionSystem, budget: usize) -> Result<PairOverlapGraph, ProximalityError> {
    let pts = sys.periodic_points();
    let mut seeds = Vec::new();
    for p in &pts {
        for q in &pts {
            seeds.extend(seed_overlaps(sys, p, q));
        }
    }
    seeds.sort();
    seeds.dedup();
    pair_graph(sys, &seeds, budget)
}

/// Some v with B_r[T1 − v] = B_r[T2 − v], found from the common runs of the
/// windows; `None` means none within the window, not a disproof.
pub fn strong_proximal_witness(
    w1: &TilingWindow,
    w2: &TilingWindow,
    r: &AlgebraicNumber,
) -> Result<Option<AlgebraicNumber>, ProximalityError> {
    let radius = std::cmp::min(&w1.radius, &w2.radius);
    if r >= radius {
        return Err(ProximalityError::WindowTooSmall {
            radius: radius.to_string(),
            needed: format!("more than {}", r),
        });
    }
    let zero = AlgebraicNumber::zero(r.field());
    let mut best: Option<AlgebraicNumber> = None;
    for run in common_runs(&w1.patch, &w2.patch, &zero) {
        let lo = &run.lo + r;
        let hi = &run.hi - r;
        if lo >= hi {
            continue;
        }
        let v = if lo < zero && zero < hi { zero.clone() } else { (&lo + &hi).half() };
        if best.as_ref().is_none_or(|b| v.abs() < b.abs()) {
            best = Some(v);
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// Every gap of the agreement set inside the window is at most B.
    SyndeticUpTo { radius: AlgebraicNumber, max_gap: AlgebraicNumber },
    /// (lo, hi) contains no v with equal r-patches and hi − lo > B.
    GapViolation { lo: AlgebraicNumber, hi: AlgebraicNumber },
}

impl fmt::Display for ProbeOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbeOutcome::SyndeticUpTo { radius, max_gap } => {
                write!(f, "SyndeticUpTo(radius {:.6}, max gap {:.6})", radius.to_f64(), max_gap.to_f64())
            }
            ProbeOutcome::GapViolation { lo, hi } => write!(
                f,
                "GapViolation(({:.6}, {:.6}), length {:.6}; exact lo = {}, hi = {})",
                lo.to_f64(),
                hi.to_f64(),
                (hi - lo).to_f64(),
                lo,
                hi
            ),
        }
    }
}

/// Agreement set {v : B_r[T1 − v] = B_r[T2 − v]} on [−R + r, R − r], as
/// sorted open intervals.
pub fn agreement_set(w1: &TilingWindow, w2: &TilingWindow, r: &AlgebraicNumber) -> Vec<(AlgebraicNumber, AlgebraicNumber)> {
    let radius = std::cmp::min(&w1.radius, &w2.radius).clone();
    let lim = &radius - r;
    let zero = AlgebraicNumber::zero(r.field());
    let mut out = Vec::new();
    for run in common_runs(&w1.patch, &w2.patch, &zero) {
        let lo = std::cmp::max(&run.lo + r, -&lim);
        let hi = std::cmp::min(&run.hi - r, lim.clone());
        if lo < hi {
            out.push((lo, hi));
        }
    }
    out
}

/// Gaps of the agreement set against the bound B.
pub fn complete_proximality_probe(
    w1: &TilingWindow,
    w2: &TilingWindow,
    r: &AlgebraicNumber,
    gap_bound: &AlgebraicNumber,
) -> Result<ProbeOutcome, ProximalityError> {
    let radius = std::cmp::min(&w1.radius, &w2.radius).clone();
    let needed = &AlgebraicNumber::from_int(r.field(), 10) * gap_bound;
    if radius < needed || radius <= *r {
        return Err(ProximalityError::WindowTooSmall {
            radius: radius.to_string(),
            needed: needed.to_string(),
        });
    }
    let lim = &radius - r;
    let mut cursor = -&lim;
    let mut worst = (cursor.clone(), cursor.clone());
    let mut points = agreement_set(w1, w2, r);
    // Closing sentinel so the trailing stretch counts as a gap.
    points.push((lim.clone(), lim.clone()));
    for (lo, hi) in points {
        if &lo - &cursor > &worst.1 - &worst.0 {
            worst = (cursor.clone(), lo.clone());
        }
        if hi > cursor {
            cursor = hi;
        }
    }
    let gap = &worst.1 - &worst.0;
    if gap > *gap_bound {
        return Ok(ProbeOutcome::GapViolation { lo: worst.0, hi: worst.1 });
    }
    Ok(ProbeOutcome::SyndeticUpTo { radius, max_gap: gap })
}

/// Dekking's coincidence condition for constant-length substitutions: some
/// iterate has a column in which all letters agree.
pub fn dekking_coincidence(sys: &SubstitutionSystem) -> Result<bool, ProximalityError> {
    let q = sys.constant_length().ok_or(ProximalityError::NotConstantLength)?;
    let all: Vec<usize> = (0..sys.letter_count()).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([all.clone()]);
    let mut queue = VecDeque::from([all]);
    while let Some(set) = queue.pop_front() {
        if set.len() == 1 {
            return Ok(true);
        }
        for j in 0..q {
            let mut col: Vec<usize> = set.iter().map(|&x| sys.rules[x][j]).collect();
            col.sort_unstable();
            col.dedup();
            if seen.insert(col.clone()) {
                queue.push_back(col);
            }
        }
    }
    Ok(false)
}

/// Exact membership of x in ⋃_j λ^{-j}Ξ.
#[derive(Clone, Debug)]
pub struct AddressTest {
    pub basis: Vec<AlgebraicNumber>,
    /// Multiplication by λ on Ξ-coordinates (column j = image of basis j).
    pub matrix: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AddressRelation {
    /// λ^level · x ∈ Ξ.
    Same {
        level: usize,
    },
    Different,
    Undecided,
}

impl AddressTest {
    pub fn new(sys: &SubstitutionSystem) -> Self {
        let basis = return_module(sys).basis;
        let d = basis.len();
        let mut matrix = vec![vec![BigInt::zero(); d]; d];
        for j in 0..d {
            let c = coords_in_basis(&basis, &(&sys.lambda * &basis[j])).expect("Ξ spans the field");
            for i in 0..d {
                matrix[i][j] = c[i].to_integer();
            }
        }
        AddressTest { basis, matrix }
    }

    /// Iterates v ↦ Mv mod q on the scaled coordinates until it vanishes
    /// (same fiber) or cycles (different fibers).
    pub fn relation(&self, x: &AlgebraicNumber, budget: usize) -> AddressRelation {
        let c = coords_in_basis(&self.basis, x).expect("Ξ spans the field");
        let q = c.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let mut v: Vec<BigInt> = c
            .iter()
            .map(|r| (r * BigRational::from_integer(q.clone())).to_integer().mod_floor(&q))
            .collect();
        let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
        for level in 0..=budget {
            if v.iter().all(|x| x.is_zero()) {
                return AddressRelation::Same { level };
            }
            if !seen.insert(v.clone()) {
                return AddressRelation::Different;
            }
            v = (0..v.len())
                .map(|i| {
                    (0..v.len())
                        .fold(BigInt::zero(), |acc, j| acc + &self.matrix[i][j] * &v[j])
                        .mod_floor(&q)
                })
                .collect();
        }
        AddressRelation::Undecided
    }
}

/// Lowest level of a periodic point at which every letter occurs on the
/// right of 0, and the start of the first tile of type `letter` there.
fn right_position(sys: &SubstitutionSystem, p: &PeriodicPoint, letter: usize) -> AlgebraicNumber {
    let zero = AlgebraicNumber::zero(sys.field());
    for level in 0.. {
        let patch = p.level(sys, level);
        if let Some(t) = patch.tiles.iter().find(|t| t.proto == letter && t.start >= zero) {
            return t.start.clone();
        }
    }
    unreachable!("primitive substitutions place every letter")
}

#[derive(Clone, Debug)]
pub enum ProximityCertificate {
    /// A tile common to both tilings.
    SharedTile { tile: PlacedTile, path: Vec<PairNode> },
    /// No coincidence is reachable from the seed overlaps.
    CoincidenceFree { reachable: usize },
}

impl ProximityCertificate {
    pub fn is_proximal(&self) -> bool {
        matches!(self, ProximityCertificate::SharedTile { .. })
    }
}

/// Tiles common to two patches, nearest the origin first.
fn shared_tile(w1: &TilingWindow, w2: &TilingWindow) -> Option<PlacedTile> {
    let other: HashSet<&PlacedTile> = w2.patch.tiles.iter().collect();
    w1.patch
        .tiles
        .iter()
        .filter(|t| other.contains(t))
        .min_by(|a, b| a.start.abs().cmp(&b.start.abs()))
        .cloned()
}

/// Whether two periodic points share a tile, decided by coincidence
/// reachability in their pair graph; a shared tile is located by expanding
/// windows up to `probe_radius`, then by following the coincidence path.
pub fn proximal_in_fiber(
    sys: &SubstitutionSystem,
    p: &PeriodicPoint,
    q: &PeriodicPoint,
    probe_radius: &AlgebraicNumber,
    budget: usize,
) -> Result<ProximityCertificate, ProximalityError> {
    let seeds = seed_overlaps(sys, p, q);
    let g = pair_graph(sys, &seeds, budget)?;
    let path = g.seeds.iter().filter_map(|&s| g.coincidence_path(s)).min_by_key(|p| p.len());
    let Some(path) = path else {
        return Ok(ProximityCertificate::CoincidenceFree {
            reachable: g.reachable(&g.seeds).len(),
        });
    };
    let nodes: Vec<PairNode> = path.iter().map(|&i| g.nodes[i].clone()).collect();
    if p == q {
        let tile = PlacedTile::new(p.seed.1, AlgebraicNumber::zero(sys.field()), sys.length(p.seed.1));
        return Ok(ProximityCertificate::SharedTile { tile, path: nodes });
    }
    let max_tiles = 4_000_000;
    let w1 = sys.expand_to_radius(p, probe_radius, max_tiles)?;
    let w2 = sys.expand_to_radius(q, probe_radius, max_tiles)?;
    if let Some(tile) = shared_tile(&w1, &w2) {
        return Ok(ProximityCertificate::SharedTile { tile, path: nodes });
    }
    // The coincidence appears after |path| − 1 steps; the periodic points
    // contain it at the next multiple of their period.
    let k = p.period.lcm(&q.period);
    let steps = (path.len() - 1).div_ceil(k) * k;
    let reach = sys.lambda.pow(steps as u32 + k as u32);
    let r = &(&reach * &sys.max_length()) + probe_radius;
    let w1 = sys.expand_to_radius(p, &r, max_tiles)?;
    let w2 = sys.expand_to_radius(q, &r, max_tiles)?;
    let tile = shared_tile(&w1, &w2)
        .ok_or_else(|| ProximalityError::Undecided(format!("coincidence reachable but no shared tile within radius {:.3}", r.to_f64())))?;
    Ok(ProximityCertificate::SharedTile { tile, path: nodes })
}

#[derive(Clone, Debug)]
pub struct PairReport {
    pub a: usize,
    pub b: usize,
    pub certificate: ProximityCertificate,
}

#[derive(Clone, Debug)]
pub struct FiberReport {
    /// Indices into the periodic point list.
    pub members: Vec<usize>,
    pub pairs: Vec<PairReport>,
    /// A largest pairwise non-proximal subset.
    pub separated: Vec<usize>,
}

impl FiberReport {
    pub fn rank(&self) -> usize {
        self.separated.len()
    }
}

#[derive(Clone, Debug)]
pub struct RankReport {
    pub cr: usize,
    pub mr: usize,
    /// Separation scale: half the shortest tile.
    pub delta0: AlgebraicNumber,
    pub r0: AlgebraicNumber,
    pub points: Vec<PeriodicPoint>,
    pub labels: Vec<String>,
    pub letters: Vec<String>,
    pub fibers: Vec<FiberReport>,
    /// Same rank in every fiber.
    pub rank_consistent: bool,
    /// (R, max over fibers of the number of distinct R-patches at 0).
    pub patch_counts: Vec<(AlgebraicNumber, usize)>,
}

/// Partition of the periodic points into fibers, with the proximality
/// decision for every pair inside a fiber.
pub fn fiber_group(
    sys: &SubstitutionSystem,
    probe_radius: &AlgebraicNumber,
    budget: usize,
) -> Result<(Vec<PeriodicPoint>, Vec<FiberReport>), ProximalityError> {
    let pts = sys.periodic_points();
    let n = pts.len();
    let addr = AddressTest::new(sys);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    let mut undecided = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let letter = pts[i].seed.1;
            let x = &right_position(sys, &pts[i], letter) - &right_position(sys, &pts[j], letter);
            match addr.relation(&x, 4096) {
                AddressRelation::Same { .. } => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
                AddressRelation::Different => {}
                AddressRelation::Undecided => undecided.push((i, j)),
            }
        }
    }
    for (i, j) in undecided {
        if find(&mut parent, i) == find(&mut parent, j) {
            continue;
        }
        if proximal_in_fiber(sys, &pts[i], &pts[j], probe_radius, budget)?.is_proximal() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a.max(b)] = a.min(b);
        } else {
            return Err(ProximalityError::Undecided(format!(
                "fiber relation of {} and {}",
                pts[i].label(sys),
                pts[j].label(sys)
            )));
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut fibers = Vec::new();
    for members in groups.into_values() {
        let mut pairs = Vec::new();
        for (x, &i) in members.iter().enumerate() {
            for &j in &members[x + 1..] {
                let certificate = proximal_in_fiber(sys, &pts[i], &pts[j], probe_radius, budget)?;
                pairs.push(PairReport { a: i, b: j, certificate });
            }
        }
        let separated = largest_separated(&members, &pairs);
        fibers.push(FiberReport { members, pairs, separated });
    }
    Ok((pts, fibers))
}

/// Largest subset with no proximal pair, by exhaustive search.
fn largest_separated(members: &[usize], pairs: &[PairReport]) -> Vec<usize> {
    let prox: HashSet<(usize, usize)> = pairs
        .iter()
        .filter(|p| p.certificate.is_proximal())
        .flat_map(|p| [(p.a, p.b), (p.b, p.a)])
        .collect();
    let m = members.len();
    assert!(m < 26, "fiber too large for exhaustive search");
    let mut best: Vec<usize> = Vec::new();
    for mask in 1u32..(1 << m) {
        if mask.count_ones() as usize <= best.len() {
            continue;
        }
        let set: Vec<usize> = (0..m).filter(|&k| mask >> k & 1 == 1).map(|k| members[k]).collect();
        let ok = set
            .iter()
            .enumerate()
            .all(|(x, &a)| set[x + 1..].iter().all(|&b| !prox.contains(&(a, b))));
        if ok {
            best = set;
        }
    }
    best
}

/// Coincidence rank from the periodic-point fibers.
pub fn coincidence_rank(sys: &SubstitutionSystem, probe_radius: &AlgebraicNumber, budget: usize) -> Result<RankReport, ProximalityError> {
    if let v @ crate::substitution::PisotVerdict::NotPisotFamily { .. } = sys.pisot_family_check() {
        return Err(ProximalityError::NotMeyer(v.to_string()));
    }
    let (points, fibers) = fiber_group(sys, probe_radius, budget)?;
    let ranks: Vec<usize> = fibers.iter().map(|f| f.rank()).collect();
    let cr = ranks.iter().copied().max().unwrap_or(1).max(1);
    let delta0 = sys.min_length().half();
    let r0 = delta0.inv().expect("positive length");
    let mut patch_counts = Vec::new();
    let mut r = delta0.clone();
    for _ in 0..6 {
        let mut worst = 0;
        for f in &fibers {
            let mut seen: HashSet<crate::tiling::Patch> = HashSet::new();
            for &i in &f.members {
                let w = sys.expand_to_radius(&points[i], &r, 4_000_000)?;
                seen.insert(w.patch.tiles_meeting(&-&r, &r));
            }
            worst = worst.max(seen.len());
        }
        patch_counts.push((r.clone(), worst));
        r = &r + &r;
    }
    Ok(RankReport {
        cr,
        mr: cr,
        delta0,
        r0,
        labels: points.iter().map(|p| p.label(sys)).collect(),
        letters: sys.alphabet.iter().map(|p| p.id.clone()).collect(),
        points,
        rank_consistent: ranks.windows(2).all(|w| w[0] == w[1]),
        fibers,
        patch_counts,
    })
}

#[derive(Clone, Debug)]
pub struct GapWitness {
    pub a: String,
    pub b: String,
    pub r: AlgebraicNumber,
    pub gap_bound: AlgebraicNumber,
    pub outcome: ProbeOutcome,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub proximality_closed: bool,
    pub pure_discrete: bool,
    pub cp_equals_p: bool,
    pub rank: RankReport,
    pub graph_nodes: usize,
    pub coincidence_free_nodes: usize,
    pub gap_witness: Option<GapWitness>,
    pub dekking: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct ProxOptions {
    pub probe_radius: AlgebraicNumber,
    pub node_budget: usize,
    pub gap_bound: AlgebraicNumber,
    pub epsilon_radius: AlgebraicNumber,
}

impl ProxOptions {
    pub fn defaults(sys: &SubstitutionSystem) -> Self {
        let f = sys.field();
        ProxOptions {
            probe_radius: AlgebraicNumber::from_int(f, 20),
            node_budget: 100_000,
            gap_bound: AlgebraicNumber::from_int(f, 10),
            epsilon_radius: AlgebraicNumber::one(f),
        }
    }
}

/// Proximal pair whose agreement set has a gap longer than the bound.
pub fn find_gap_witness(sys: &SubstitutionSystem, rank: &RankReport, opts: &ProxOptions) -> Result<Option<GapWitness>, ProximalityError> {
    let ten = AlgebraicNumber::from_int(sys.field(), 10);
    let radius = std::cmp::max(&ten * &opts.gap_bound, &opts.epsilon_radius + &opts.epsilon_radius);
    for f in &rank.fibers {
        for p in f.pairs.iter().filter(|p| p.certificate.is_proximal()) {
            let w1 = sys.expand_to_radius(&rank.points[p.a], &radius, 4_000_000)?;
            let w2 = sys.expand_to_radius(&rank.points[p.b], &radius, 4_000_000)?;
            let outcome = complete_proximality_probe(&w1, &w2, &opts.epsilon_radius, &opts.gap_bound)?;
            if matches!(outcome, ProbeOutcome::GapViolation { .. }) {
                return Ok(Some(GapWitness {
                    a: rank.labels[p.a].clone(),
                    b: rank.labels[p.b].clone(),
                    r: opts.epsilon_radius.clone(),
                    gap_bound: opts.gap_bound.clone(),
                    outcome,
                }));
            }
        }
    }
    Ok(None)
}

/// cr = 1 decides closedness of proximality, pure discrete spectrum and
/// complete proximality together.
pub fn verdict(sys: &SubstitutionSystem, opts: &ProxOptions) -> Result<Verdict, ProximalityError> {
    let rank = coincidence_rank(sys, &opts.probe_radius, opts.node_budget)?;
    let graph = full_pair_graph(sys, opts.node_budget)?;
    let coincidence_free_nodes = graph.coincidence_free().len();
    let one = rank.cr == 1;
    let gap_witness = if one { None } else { find_gap_witness(sys, &rank, opts)? };
    Ok(Verdict {
        proximality_closed: one,
        pure_discrete: one,
        cp_equals_p: one,
        graph_nodes: graph.len(),
        coincidence_free_nodes,
        gap_witness,
        dekking: dekking_coincidence(sys).ok(),
        rank,
    })
}

impl Verdict {
    /// Structured text with a fixed field order.
    pub fn report(&self) -> String {
        let r = &self.rank;
        let mut s = String::new();
        let _ = writeln!(s, "cr={} pure_discrete={}", r.cr, self.pure_discrete);
        let _ = writeln!(s, "proximality_closed = {}", self.proximality_closed);
        let _ = writeln!(s, "cp_equals_p = {}", self.cp_equals_p);
        let _ = writeln!(s, "cr = {}", r.cr);
        let _ = writeln!(s, "mr = {}", r.mr);
        let _ = writeln!(s, "delta0 = {}", r.delta0);
        let _ = writeln!(s, "R0 = {}", r.r0);
        let _ = writeln!(s, "rank_consistent_across_fibers = {}", r.rank_consistent);
        let _ = writeln!(s, "pair_graph_nodes = {}", self.graph_nodes);
        let _ = writeln!(s, "coincidence_free_nodes = {}", self.coincidence_free_nodes);
        match self.dekking {
            Some(d) => {
                let _ = writeln!(s, "dekking_coincidence = {}", d);
            }
            None => {
                let _ = writeln!(s, "dekking_coincidence = n/a (not constant length)");
            }
        }
        let _ = writeln!(s, "periodic_points = {}", r.labels.join(" "));
        let _ = writeln!(s, "assumption = fibers sampled by substitution-periodic points");
        for (k, f) in r.fibers.iter().enumerate() {
            let names: Vec<&str> = f.members.iter().map(|&i| r.labels[i].as_str()).collect();
            let sep: Vec<&str> = f.separated.iter().map(|&i| r.labels[i].as_str()).collect();
            let _ = writeln!(
                s,
                "fiber {}: {{{}}} rank {} separated {{{}}}",
                k,
                names.join(", "),
                f.rank(),
                sep.join(", ")
            );
            for p in &f.pairs {
                let what = match &p.certificate {
                    ProximityCertificate::SharedTile { tile, path } => format!(
                        "proximal, shared tile {} at {} ({:.6}), coincidence after {} steps",
                        r.letters[tile.proto],
                        tile.start,
                        tile.start.to_f64(),
                        path.len() - 1
                    ),
                    ProximityCertificate::CoincidenceFree { reachable } => {
                        format!("not proximal, {} reachable pair classes, none coincident", reachable)
                    }
                };
                let _ = writeln!(s, "  {} ~ {}: {}", r.labels[p.a], r.labels[p.b], what);
            }
        }
        let counts: Vec<String> = r.patch_counts.iter().map(|(x, n)| format!("{:.4}:{}", x.to_f64(), n)).collect();
        let _ = writeln!(s, "distinct_patches_by_radius = {}", counts.join(" "));
        match &self.gap_witness {
            Some(w) => {
                let _ = writeln!(s, "gap_witness = {} ~ {} r={} B={}: {}", w.a, w.b, w.r, w.gap_bound, w.outcome);
            }
            None => {
                let _ = writeln!(s, "gap_witness = none");
            }
        }
        s
    }
}
