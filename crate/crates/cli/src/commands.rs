use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use proxtile::algebra::AlgebraicNumber;
use proxtile::crosscheck::{crosscheck as run_crosscheck, CrosscheckError};
use proxtile::delone::{meyer_diagnostic, punctures, PointSet};
use proxtile::io::{parse_scheme, parse_substitution, SpecError};
use proxtile::modelset::{CutProjectScheme, ModelSetError};
use proxtile::proximality::{full_pair_graph, verdict, ProbeOutcome, ProxOptions, ProximalityError, ProximityCertificate};
use proxtile::spectrum::{
    eigen_test, eigenvalue_lattice, ergodicity_check, factor_structure, local_freeness_check, second_modulus, window_returns, SpectrumError,
};
use proxtile::substitution::{AperiodicityEvidence, SubstitutionError, SubstitutionSystem};
use proxtile::tiling::PunctureMap;

const MAX_TILES: usize = 4_000_000;
const SAMPLE_BUDGET: usize = 1_000_000;

pub struct Knobs {
    pub radius: Option<String>,
    pub node_budget: usize,
    pub gap_bound: String,
    pub tolerance: f64,
}

/// Report for stdout plus files relative to the output directory.
#[derive(Default)]
pub struct Output {
    pub report: String,
    pub files: Vec<(PathBuf, String)>,
}

impl Output {
    fn new(report: String) -> Self {
        let files = vec![(PathBuf::from("report.txt"), report.clone())];
        Output { report, files }
    }

    fn add(&mut self, path: &str, content: String) {
        self.files.push((PathBuf::from(path), content));
    }

    pub fn write_to(&self, dir: &Path) -> std::io::Result<()> {
        for (rel, content) in &self.files {
            let p = dir.join(rel);
            if let Some(parent) = p.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(p, content)?;
        }
        Ok(())
    }
}

pub enum CliError {
    /// Exit 2.
    Input(String),
    /// Exit 3, with whatever partial output exists.
    Budget(String, Option<Output>),
}

fn substitution_error(e: SubstitutionError) -> CliError {
    match e {
        SubstitutionError::ResourceBudget(m) => CliError::Budget(m, None),
        other => CliError::Input(other.to_string()),
    }
}

fn spec_error(path: &Path, e: SpecError) -> CliError {
    match e {
        SpecError::Substitution(s) => match substitution_error(s) {
            CliError::Input(m) => CliError::Input(format!("{}: {}", path.display(), m)),
            b => b,
        },
        other => CliError::Input(format!("{}: {}", path.display(), other)),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {}", path.display(), e)))
}

fn load_system(path: &Path) -> Result<SubstitutionSystem, CliError> {
    parse_substitution(&read(path)?).map_err(|e| spec_error(path, e))
}

fn load_scheme(path: &Path) -> Result<CutProjectScheme, CliError> {
    parse_scheme(&read(path)?).map_err(|e| spec_error(path, e))
}

/// Meyer substitutions in one dimension are exactly the Pisot family ones.
fn require_meyer(sys: &SubstitutionSystem) -> Result<(), CliError> {
    let v = sys.pisot_family_check();
    if v.is_pisot() {
        Ok(())
    } else {
        Err(CliError::Input(format!("not a Pisot family, so not a Meyer substitution: {}", v)))
    }
}

fn field_value(sys_field: &proxtile::algebra::Field, s: &str, what: &str) -> Result<AlgebraicNumber, CliError> {
    let x = AlgebraicNumber::parse(sys_field, s).map_err(|e| CliError::Input(format!("{}: {}", what, e)))?;
    if !x.is_positive() {
        return Err(CliError::Input(format!("{} must be positive", what)));
    }
    Ok(x)
}

fn radius(field: &proxtile::algebra::Field, k: &Knobs, default: i64) -> Result<AlgebraicNumber, CliError> {
    match &k.radius {
        Some(s) => field_value(field, s, "radius"),
        None => Ok(AlgebraicNumber::from_int(field, default)),
    }
}

fn matrix_string<T: std::fmt::Display>(m: &[Vec<T>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn exact(x: &AlgebraicNumber) -> String {
    format!("{} ({:.12})", x, x.to_f64())
}

pub fn analyze(path: &Path, k: &Knobs) -> Result<Output, CliError> {
    let sys = load_system(path)?;
    require_meyer(&sys)?;
    let f = sys.field().clone();
    let r = radius(&f, k, 100)?;
    let mut s = String::new();
    let _ = writeln!(s, "name = {}", sys.name);
    let rules: Vec<String> = (0..sys.letter_count())
        .map(|i| format!("{} -> {}", sys.letter_name(i), sys.word_string(&sys.rules[i])))
        .collect();
    let _ = writeln!(s, "rules = {}", rules.join(", "));
    let _ = writeln!(s, "matrix = {}", matrix_string(&sys.matrix));
    let _ = writeln!(s, "minimal_polynomial = {}", f.polynomial());
    let _ = writeln!(s, "expansion = {:.12}", sys.lambda.to_f64());
    for p in &sys.alphabet {
        let _ = writeln!(s, "length {} = {}", p.id, exact(&p.length));
    }
    let _ = writeln!(
        s,
        "primitive = true (M^{} > 0)",
        sys.is_primitive().expect("built systems are primitive")
    );
    let evidence = match sys.aperiodicity {
        AperiodicityEvidence::IrrationalExpansion => "irrational expansion".to_string(),
        AperiodicityEvidence::ComplexityBound { checked_up_to } => format!("complexity p(n) > n for n <= {}", checked_up_to),
    };
    let _ = writeln!(s, "aperiodic = true ({})", evidence);
    let _ = writeln!(s, "pisot = {}", sys.pisot_family_check());
    let _ = writeln!(s, "support_equation = {}", sys.support_equation_holds());
    let pts = sys.periodic_points();
    let labels: Vec<String> = pts.iter().map(|p| format!("{} (period {})", p.label(&sys), p.period)).collect();
    let _ = writeln!(s, "periodic_points = {}", labels.join(", "));
    let pp = &pts[0];
    let w = sys.expand_to_radius(pp, &r, MAX_TILES).map_err(substitution_error)?;
    let _ = writeln!(s, "window = {} tiles on [-{}, {}] from {}", w.patch.len(), r, r, w.generator);
    let ps = punctures(&w, &PunctureMap::midpoints(&sys.alphabet)).restrict(&r);
    let rep = meyer_diagnostic(&ps).map_err(|e| CliError::Input(e.to_string()))?;
    let _ = writeln!(s, "r_packing = {}", exact(&rep.r_packing));
    let _ = writeln!(s, "r_covering = {}", exact(&rep.r_covering));
    for (rho, n) in &rep.flc_classes {
        let _ = writeln!(s, "flc_classes radius {:.6} = {}", rho.to_f64(), n);
    }
    for m in &rep.margins {
        let _ = writeln!(s, "meyer_margin radius {:.6} = {}", m.radius.to_f64(), exact(&m.min_gap));
    }
    let _ = writeln!(s, "meyer_consistent = {}", rep.meyer_consistent);
    let mut out = Output::new(s);
    out.add("points.csv", ps.to_csv());
    let svg_r = std::cmp::min(r.clone(), AlgebraicNumber::from_int(&f, 30));
    out.add("patch.svg", w.patch.tiles_meeting(&-&svg_r, &svg_r).to_svg(&sys.alphabet));
    let mut cert = String::new();
    let _ = writeln!(cert, "matrix = {}", matrix_string(&sys.matrix));
    let _ = writeln!(cert, "primitivity_power = {}", sys.perron.primitivity_power);
    let _ = writeln!(cert, "perron_eigenvalue = {}", exact(&sys.lambda));
    let left: Vec<String> = sys.perron.left_vector.iter().map(|x| x.to_string()).collect();
    let right: Vec<String> = sys.perron.right_vector.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(cert, "left_eigenvector = ({})", left.join(", "));
    let _ = writeln!(cert, "right_eigenvector = ({})", right.join(", "));
    for d in f.conjugates() {
        let z = d.approx();
        let _ = writeln!(cert, "conjugate = {:.12}{:+.12}i |z| = {:.12}", z.re, z.im, z.norm());
    }
    out.add("certificates/perron.txt", cert);
    Ok(out)
}

fn prox_error(sys: &SubstitutionSystem, e: ProximalityError) -> CliError {
    match e {
        ProximalityError::NodeBudgetExceeded { budget, partial } => {
            let msg = format!(
                "pair graph exceeded the node budget of {} after {} nodes; no verdict",
                budget,
                partial.len()
            );
            let mut out = Output::new(format!("verdict = none\nreason = {}\n", msg));
            out.add("graph.txt", partial.to_dot(sys));
            CliError::Budget(msg, Some(out))
        }
        ProximalityError::Undecided(m) => CliError::Budget(format!("undecided: {}", m), None),
        ProximalityError::Substitution(s) => substitution_error(s),
        other => CliError::Input(other.to_string()),
    }
}

pub fn prox(path: &Path, k: &Knobs) -> Result<Output, CliError> {
    let sys = load_system(path)?;
    require_meyer(&sys)?;
    let f = sys.field().clone();
    let mut opts = ProxOptions::defaults(&sys);
    opts.node_budget = k.node_budget;
    opts.probe_radius = radius(&f, k, 20)?;
    opts.gap_bound = field_value(&f, &k.gap_bound, "gap bound")?;
    let v = verdict(&sys, &opts).map_err(|e| prox_error(&sys, e))?;
    let mut s = format!("name = {}\n", sys.name);
    s.push_str(&v.report());
    if let Some(d) = v.dekking {
        let _ = writeln!(s, "dekking_agrees = {}", d == v.pure_discrete);
    }
    let graph = full_pair_graph(&sys, opts.node_budget).map_err(|e| prox_error(&sys, e))?;
    let mut out = Output::new(s);
    out.add("graph.txt", graph.to_dot(&sys));
    let r = &v.rank;
    for fib in &r.fibers {
        for p in &fib.pairs {
            let name = format!(
                "certificates/{}_{}.txt",
                r.labels[p.a].replace('|', "-"),
                r.labels[p.b].replace('|', "-")
            );
            let mut c = String::new();
            let _ = writeln!(c, "pair = {} ~ {}", r.labels[p.a], r.labels[p.b]);
            match &p.certificate {
                ProximityCertificate::SharedTile { tile, path } => {
                    let _ = writeln!(c, "proximal = true");
                    let _ = writeln!(c, "shared_tile = {} at {}", sys.letter_name(tile.proto), tile.start);
                    for n in path {
                        let _ = writeln!(c, "path = {}", n.label(&sys));
                    }
                }
                ProximityCertificate::CoincidenceFree { reachable } => {
                    let _ = writeln!(c, "proximal = false");
                    let _ = writeln!(c, "reachable_pair_classes = {}", reachable);
                    let _ = writeln!(c, "coincidences_reachable = 0");
                }
            }
            out.add(&name, c);
        }
    }
    if let Some(w) = &v.gap_witness {
        let mut c = format!("pair = {} ~ {}\nr = {}\nB = {}\n", w.a, w.b, w.r, w.gap_bound);
        if let ProbeOutcome::GapViolation { lo, hi } = &w.outcome {
            let _ = writeln!(c, "gap = ({}, {})", lo, hi);
            let _ = writeln!(c, "gap_length = {}", exact(&(hi - lo)));
        }
        out.add("certificates/gap_witness.txt", c);
    }
    Ok(out)
}

pub fn spectrum(path: &Path, k: &Knobs) -> Result<Output, CliError> {
    let sys = load_system(path)?;
    require_meyer(&sys)?;
    let lat = eigenvalue_lattice(&sys).map_err(|e| match e {
        SpectrumError::NotPisotFamily(m) => CliError::Input(m),
        other => CliError::Input(other.to_string()),
    })?;
    let f = sys.field().clone();
    let mut s = format!("name = {}\n", sys.name);
    let xi: Vec<String> = lat.returns.basis.iter().map(exact).collect();
    let _ = writeln!(s, "return_module = {}", xi.join(", "));
    for (i, b) in lat.basis.iter().enumerate() {
        let _ = writeln!(s, "gamma_{} = {}", i, exact(b));
    }
    let _ = writeln!(s, "star = {}", matrix_string(&lat.star));
    let cp: Vec<String> = lat.star_charpoly().iter().map(|c| c.to_string()).collect();
    let _ = writeln!(s, "star_charpoly = ({}) (low degree first)", cp.join(", "));
    let _ = writeln!(s, "minimal_polynomial = {}", f.polynomial());
    let _ = writeln!(s, "degree = {}", lat.degree);
    let _ = writeln!(s, "multiplicity = {}", lat.multiplicity);
    let _ = writeln!(s, "index_bound = {}", lat.index_bound);
    let _ = writeln!(s, "factor = {}", factor_structure(&lat));
    let _ = writeln!(s, "ergodic = {}", ergodicity_check(&sys));
    let _ = writeln!(s, "locally_free = {}", local_freeness_check(&lat));
    let pts = sys.periodic_points();
    let w = sys
        .expand_to_radius(&pts[0], &AlgebraicNumber::from_int(&f, 50), MAX_TILES)
        .map_err(substitution_error)?;
    let returns = window_returns(&w);
    let second = second_modulus(&sys);
    // Deviations shrink like ρ^m from at most 2, so run until ρ^m·4 < tolerance.
    let levels = match second {
        Some(rho) if rho > 0.0 && rho < 1.0 => ((k.tolerance / 4.0).ln() / rho.ln()).ceil().max(12.0) as usize,
        _ => 12,
    };
    let _ = writeln!(s, "eigen_test_levels = {}", levels);
    match second {
        Some(m) => {
            let _ = writeln!(s, "second_modulus = {:.12}", m);
        }
        None => {
            let _ = writeln!(s, "second_modulus = none");
        }
    }
    let mut cert = String::new();
    for (i, b) in lat.basis.iter().enumerate() {
        let rep = eigen_test(&sys, b, &returns, levels, k.tolerance).map_err(|e| CliError::Input(e.to_string()))?;
        let rate = rep.decay_rate.map_or("n/a".to_string(), |r| format!("{:.6}", r));
        let _ = writeln!(
            s,
            "eigen_test gamma_{}: pass = {}, final deviation = {:.3e}, decay rate = {}",
            i,
            rep.pass,
            rep.deviations.last().copied().unwrap_or(0.0),
            rate
        );
        let devs: Vec<String> = rep.deviations.iter().map(|d| format!("{:.6e}", d)).collect();
        let _ = writeln!(cert, "gamma_{} deviations = {}", i, devs.join(" "));
    }
    let mut out = Output::new(s);
    out.add("certificates/eigen_test.txt", cert);
    Ok(out)
}

fn modelset_error(e: ModelSetError) -> CliError {
    match e {
        ModelSetError::RegionTooLarge { .. } => CliError::Budget(e.to_string(), None),
        other => CliError::Input(other.to_string()),
    }
}

pub fn modelset(path: &Path, shift: &str, k: &Knobs) -> Result<Output, CliError> {
    let scheme = load_scheme(path)?;
    let f = scheme.field.clone();
    let r = radius(&f, k, 100)?;
    let x: Vec<AlgebraicNumber> = shift
        .split(';')
        .map(|p| AlgebraicNumber::parse(&f, p.trim()).map_err(|e| CliError::Input(format!("shift: {}", e))))
        .collect::<Result<_, _>>()?;
    if x.len() != scheme.k + 1 {
        return Err(CliError::Input(format!("shift needs {} components", scheme.k + 1)));
    }
    let rep = scheme.validate().map_err(modelset_error)?;
    let mut s = format!("name = {}\n", scheme.name);
    let _ = writeln!(s, "internal_dimension = {}", scheme.k);
    let _ = writeln!(s, "scheme = valid ({})", rep);
    let _ = writeln!(s, "regularity = {:?}", scheme.regularity());
    let neg = -&r;
    let sample = scheme
        .model_set(&x, (&neg, &r), proxtile::modelset::Convention::Closed, SAMPLE_BUDGET)
        .map_err(modelset_error)?;
    let _ = writeln!(s, "points = {} on [-{}, {}]", sample.points.len(), r, r);
    let sing = scheme.is_singular(&x, &r, SAMPLE_BUDGET).map_err(modelset_error)?;
    let _ = writeln!(s, "singular = {}", sing.singular);
    for wit in &sing.witnesses {
        let c: Vec<String> = wit.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(s, "singular_witness = ({})", c.join(", "));
    }
    if let Some(b) = &sing.search_bound {
        let _ = writeln!(s, "singular_search_bound = {}", b);
    }
    let xi = scheme.torus_map(&x);
    let c: Vec<String> = xi.coords.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(s, "torus_point = ({})", c.join(", "));
    if scheme.k == 1 {
        let (_, fib) = scheme.fiber(&xi, (&neg, &r), SAMPLE_BUDGET).map_err(modelset_error)?;
        let _ = writeln!(s, "fiber_size = {}", fib.len());
    }
    if sample.points.len() >= 2 {
        match meyer_diagnostic(&sample.points) {
            Ok(d) => {
                let _ = writeln!(s, "meyer_consistent = {}", d.meyer_consistent);
                let _ = writeln!(s, "meyer_gap = {}", exact(&d.meyer_gap));
            }
            Err(e) => {
                let _ = writeln!(s, "meyer_diagnostic = {}", e);
            }
        }
    }
    let mut out = Output::new(s);
    out.add("points.csv", sample.points.to_csv());
    Ok(out)
}

pub fn crosscheck(spec: &Path, cps: &Path, k: &Knobs) -> Result<Output, CliError> {
    let sys = load_system(spec)?;
    let scheme = load_scheme(cps)?;
    // A zero region is allowed and matches trivially.
    let r = match &k.radius {
        Some(t) if t.trim() == "0" => AlgebraicNumber::zero(sys.field()),
        _ => radius(sys.field(), k, 100)?,
    };
    let mut s = format!("substitution = {}\nscheme = {}\n", sys.name, scheme.name);
    let mut all = true;
    let mut csv = None;
    for pp in sys.periodic_points() {
        let rep = run_crosscheck(&sys, &pp, &scheme, &r, None, SAMPLE_BUDGET).map_err(|e| match e {
            CrosscheckError::Substitution(e) => substitution_error(e),
            CrosscheckError::ModelSet(e) => modelset_error(e),
            other => CliError::Input(other.to_string()),
        })?;
        all &= rep.matched();
        let _ = writeln!(s, "[periodic point {}]", pp.label(&sys));
        s.push_str(&rep.report());
        if csv.is_none() {
            let pts: Vec<AlgebraicNumber> = Vec::new();
            let mut c = PointSet::new(pts, r.clone()).to_csv();
            for x in rep.missing.iter().chain(&rep.extra) {
                let _ = writeln!(c, "\"{}\",{:.12}", x, x.to_f64());
            }
            csv = Some(c);
        }
    }
    let _ = writeln!(s, "match = {}", all);
    let mut out = Output::new(s);
    if let Some(c) = csv {
        out.add("points.csv", c);
    }
    Ok(out)
}
