use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use proxtile::algebra::AlgebraicNumber;
use proxtile::delone::{difference_set, meyer_diagnostic, punctures};
use proxtile::io::{parse_scheme, parse_substitution};
use proxtile::proximality::{coincidence_rank, full_pair_graph};
use proxtile::spectrum::{eigen_test, eigenvalue_lattice, second_modulus, window_returns};
use proxtile::substitution::SubstitutionSystem;
use proxtile::tiling::{metric_d, metric_d0, PunctureMap, TilingWindow};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check, Option<u64>);

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn proxtile(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_proxtile"))
        .args(args)
        .output()
        .expect("run proxtile");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn ok_run(args: &[&str]) -> Result<String, String> {
    let r = proxtile(args);
    if r.code != 0 {
        return Err(format!("`proxtile {}` exited {}: {}", args.join(" "), r.code, r.stderr.trim()));
    }
    Ok(r.stdout)
}

fn expect_lines(out: &str, lines: &[&str]) -> Check {
    for l in lines {
        if !out.lines().any(|x| x.trim() == *l || x.starts_with(l)) {
            return Err(format!("missing `{}`", l));
        }
    }
    Ok(())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn load(name: &str) -> SubstitutionSystem {
    parse_substitution(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

fn int(sys: &SubstitutionSystem, k: i64) -> AlgebraicNumber {
    AlgebraicNumber::from_int(sys.field(), k)
}

fn criterion_1() -> Check {
    let spec = data("fibonacci.spec");
    let spec = spec.to_str().unwrap();
    let a = ok_run(&["analyze", spec])?;
    expect_lines(
        &a,
        &[
            "primitive = true",
            "aperiodic = true",
            "pisot = PisotFamily(d=2, J=1)",
            "meyer_consistent = true",
        ],
    )?;
    let p = ok_run(&["prox", spec])?;
    expect_lines(
        &p,
        &[
            "cr=1 pure_discrete=true",
            "cr = 1",
            "proximality_closed = true",
            "coincidence_free_nodes = 0",
        ],
    )?;
    let sys = load("fibonacci.spec");
    let g = full_pair_graph(&sys, 100_000).map_err(|e| e.to_string())?;
    ensure(
        g.complete && g.leads_to_coincidence().iter().all(|&b| b),
        "a pair class never reaches a coincidence",
    )
}

fn criterion_2() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let spec = data("thue-morse.spec");
    let p = ok_run(&["prox", spec.to_str().unwrap(), "--out", dir.path().to_str().unwrap()])?;
    expect_lines(
        &p,
        &[
            "cr=2 pure_discrete=false",
            "cr = 2",
            "dekking_coincidence = false",
            "dekking_agrees = true",
        ],
    )?;
    let gap = p.lines().find(|l| l.starts_with("gap_witness")).unwrap_or("");
    ensure(gap.contains("GapViolation"), format!("no gap violation witness: `{}`", gap))?;
    ensure(
        dir.path().join("certificates/gap_witness.txt").exists(),
        "gap witness certificate not written",
    )
}

fn criterion_3() -> Check {
    let spec = data("period-doubling.spec");
    let p = ok_run(&["prox", spec.to_str().unwrap()])?;
    expect_lines(
        &p,
        &[
            "cr=1 pure_discrete=true",
            "cr = 1",
            "dekking_coincidence = true",
            "dekking_agrees = true",
        ],
    )
}

fn criterion_4() -> Check {
    let out = ok_run(&[
        "crosscheck",
        data("fibonacci.spec").to_str().unwrap(),
        data("fibonacci.cps").to_str().unwrap(),
    ])?;
    expect_lines(&out, &["match = true"])?;
    ensure(
        out.lines().filter(|l| *l == "discrepancies = 0").count() == 2,
        "a periodic point has discrepancies",
    )?;
    let s = parse_scheme(&std::fs::read_to_string(data("fibonacci.cps")).unwrap()).map_err(|e| e.to_string())?;
    let f = s.field.clone();
    let el = |t: &str| AlgebraicNumber::parse(&f, t).unwrap();
    let r = el("100");
    let zero = el("0");
    for t in ["-1", "l", "1 - 2*l"] {
        let xi = s.torus_map(&[zero.clone(), el(t)]);
        let (sing, samples) = s.fiber(&xi, (&-&r, &r), 1_000_000).map_err(|e| e.to_string())?;
        ensure(
            sing.singular && samples.len() >= 2,
            format!("singular point {} gave {} samples", t, samples.len()),
        )?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut n = 0;
    while n < 20 {
        let q = rng.gen_range(2i64..1000);
        let p = rng.gen_range(1..q);
        let t = AlgebraicNumber::from_rational(&f, BigRational::new(BigInt::from(p), BigInt::from(q)));
        if t.as_rational().is_some_and(|v| v.is_integer()) {
            continue;
        }
        let xi = s.torus_map(&[zero.clone(), t]);
        let (sing, samples) = s.fiber(&xi, (&-&r, &r), 1_000_000).map_err(|e| e.to_string())?;
        ensure(
            !sing.singular && samples.len() == 1,
            format!("non-singular point {}/{} gave {} samples", p, q, samples.len()),
        )?;
        n += 1;
    }
    Ok(())
}

fn windows(sys: &SubstitutionSystem) -> Vec<TilingWindow> {
    let mut pool = Vec::new();
    for pp in sys.periodic_points() {
        let w = sys.expand_to_radius(&pp, &int(sys, 40), 1_000_000).unwrap();
        for t in w.patch.tiles.iter().filter(|t| t.start.abs() <= int(sys, 10)) {
            pool.push(w.translate(&t.start));
        }
    }
    pool
}

fn invariants(sys: &SubstitutionSystem) -> Check {
    let name = &sys.name;
    ensure(sys.support_equation_holds(), format!("{}: support equation", name))?;
    for i in 0..sys.letter_count() {
        for m in 0..4u32 {
            let big = sys.supertile(i, m as usize + 1);
            let scale = sys.lambda.pow(m);
            for (k, &j) in sys.rules[i].iter().enumerate() {
                let child = sys.supertile(j, m as usize).translate(&(&scale * &sys.child_offsets[i][k]));
                ensure(child.is_subpatch_of(&big), format!("{}: supertile nesting", name))?;
            }
        }
    }
    let pool = windows(sys);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let a = &pool[rng.gen_range(0..pool.len())];
        let b = &pool[rng.gen_range(0..pool.len())];
        let dab = metric_d(a, b).map_err(|e| e.to_string())?.value;
        let d0ab = metric_d0(a, b).map_err(|e| e.to_string())?.value;
        ensure(dab == metric_d(b, a).unwrap().value, format!("{}: d symmetry", name))?;
        ensure(d0ab == metric_d0(b, a).unwrap().value, format!("{}: d0 symmetry", name))?;
        ensure(
            metric_d(a, a).unwrap().to_f64() == 0.0 && metric_d0(a, a).unwrap().to_f64() == 0.0,
            format!("{}: identity", name),
        )?;
        ensure(dab <= d0ab, format!("{}: d above d0", name))?;
    }
    let mut gaps = Vec::new();
    for r in [25, 50, 100] {
        let w = sys.expand_to_radius(&sys.periodic_points()[0], &int(sys, r), 1_000_000).unwrap();
        let ps = punctures(&w, &PunctureMap::midpoints(&sys.alphabet));
        let d = difference_set(&ps, &int(sys, 10));
        ensure(
            d.points.iter().all(|x| d.points.binary_search(&-x).is_ok()),
            format!("{}: difference set symmetry", name),
        )?;
        let rep = meyer_diagnostic(&ps).map_err(|e| e.to_string())?;
        gaps.push(rep.meyer_gap);
    }
    ensure(gaps.windows(2).all(|w| w[0] == w[1]), format!("{}: Meyer margin changes", name))?;
    let rank = coincidence_rank(sys, &int(sys, 20), 100_000).map_err(|e| e.to_string())?;
    let reach = &int(sys, 10) * &rank.r0;
    for f in &rank.fibers {
        for p in f.pairs.iter().filter(|p| !p.certificate.is_proximal()) {
            let w1 = sys.expand_to_radius(&rank.points[p.a], &reach, 1_000_000).unwrap();
            let w2 = sys.expand_to_radius(&rank.points[p.b], &reach, 1_000_000).unwrap();
            ensure(
                !w1.patch.tiles.iter().any(|t| w2.patch.tiles.contains(t)),
                format!("{}: non-proximal pair shares a tile", name),
            )?;
        }
    }
    let wider = coincidence_rank(sys, &int(sys, 40), 100_000).map_err(|e| e.to_string())?.cr;
    let sq = sys.power(2).map_err(|e| e.to_string())?;
    let squared = coincidence_rank(&sq, &int(&sq, 20), 100_000).map_err(|e| e.to_string())?.cr;
    ensure(
        rank.cr == wider && rank.cr == squared,
        format!("{}: cr {} / {} / {}", name, rank.cr, wider, squared),
    )?;
    let lat = eigenvalue_lattice(sys).map_err(|e| e.to_string())?;
    for b in &lat.basis {
        ensure(lat.contains(&(&sys.lambda * b)), format!("{}: Λ*Γ not in Γ", name))?;
    }
    let w = sys.expand_to_radius(&sys.periodic_points()[0], &int(sys, 50), 1_000_000).unwrap();
    let ret = window_returns(&w);
    for b in &lat.basis {
        let rep = eigen_test(sys, b, &ret, 12, 1e-3).map_err(|e| e.to_string())?;
        match (second_modulus(sys), rep.decay_rate) {
            (Some(rho), Some(rate)) => ensure(rate > rho / 2.0 && rate < 2.0 * rho, format!("{}: decay {} vs {}", name, rate, rho))?,
            // No other conjugates: the deviations vanish exactly.
            (None, _) => ensure(
                *rep.deviations.last().unwrap() == 0.0,
                format!("{}: deviation does not vanish", name),
            )?,
            (Some(_), None) => return Err(format!("{}: no decay rate", name)),
        }
    }
    Ok(())
}

fn criterion_5() -> Check {
    for spec in ["fibonacci.spec", "thue-morse.spec", "period-doubling.spec"] {
        invariants(&load(spec))?;
    }
    Ok(())
}

fn criterion_6() -> Check {
    for (spec, msg) in [
        ("invalid/non-primitive.spec", "not primitive"),
        ("invalid/periodic.spec", "not aperiodic"),
        ("invalid/non-pisot.spec", "not a Pisot family"),
    ] {
        let r = proxtile(&["prox", data(spec).to_str().unwrap()]);
        ensure(r.code == 2, format!("{} exited {}", spec, r.code))?;
        ensure(r.stderr.contains(msg), format!("{}: diagnostic `{}`", spec, r.stderr.trim()))?;
    }
    let dir = tempfile::tempdir().unwrap();
    let r = proxtile(&[
        "prox",
        data("thue-morse.spec").to_str().unwrap(),
        "--node-budget",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    ensure(r.code == 3, format!("budget run exited {}", r.code))?;
    ensure(!r.stdout.contains("cr="), "budget run printed a verdict")?;
    let dot = std::fs::read_to_string(dir.path().join("graph.txt")).map_err(|e| e.to_string())?;
    ensure(dot.starts_with("digraph") && dot.contains("[label"), "partial graph dump is empty")
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 6] = [
        ("1 fibonacci rank one", criterion_1, Some(10)),
        ("2 thue-morse rank two", criterion_2, Some(30)),
        ("3 period doubling", criterion_3, Some(10)),
        ("4 model set cross-check and fibers", criterion_4, None),
        ("5 invariant suite", criterion_5, None),
        ("6 negative inputs", criterion_6, None),
    ];
    let mut failed = Vec::new();
    for (name, check, limit) in criteria {
        let t = Instant::now();
        let result = check();
        let took = t.elapsed();
        let result = match (result, limit) {
            (Ok(()), Some(s)) if took > Duration::from_secs(s) => Err(format!("took {:.1?}, limit {} s", took, s)),
            (r, _) => r,
        };
        match &result {
            Ok(()) => println!("criterion {}: PASS ({:.2?})", name, took),
            Err(e) => {
                println!("criterion {}: FAIL ({:.2?}): {}", name, took, e);
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {:?}", failed);
}
