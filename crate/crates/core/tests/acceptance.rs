//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use specrig::exact::{Mat, Rat, RatFn};
use specrig::io::{parse_expr, parse_problem, run_analysis, PoleBlock, ProblemSpec, ReportDocument};
use specrig::splitting::{split_once, SplitCertificate, TruncSeriesMat};

type Outcome = Result<String, String>;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn load(name: &str) -> ProblemSpec {
    let p = corpus_dir().join(format!("{name}.problem"));
    parse_problem(&std::fs::read_to_string(&p).unwrap()).unwrap()
}

fn report(name: &str) -> ReportDocument {
    run_analysis(&load(name))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    ensure(got == want, || format!("{what}: got {got:?}, want {want:?}"))
}

fn pole<'a>(d: &'a ReportDocument, p: &str) -> Result<&'a PoleBlock, String> {
    d.pole(p).ok_or_else(|| format!("no block for pole {p}"))
}

/// (r - 1)(p + r - 1), the Milnor number of a single branch with data (p, r)
/// relative to the fibre at infinity; a (2, q) cusp has q = p + r.
fn torus_knot(p: i64, r: i64) -> i64 {
    (r - 1) * (p + r - 1)
}

fn single_branch_oracle(b: &PoleBlock) -> Result<i64, String> {
    let g = b.germ.as_ref().ok_or("no germ")?;
    ensure(g.branches.len() == 1, || format!("{} branches", g.branches.len()))?;
    Ok(torus_knot(g.branches[0].p, g.branches[0].r as i64))
}

fn airy_suite() -> Outcome {
    let d = report("airy");
    let p = pole(&d, "inf")?;
    let g = p.germ.as_ref().ok_or("no germ at inf")?;
    eq("Irr", p.irr, 3)?;
    eq("Irr(End)", p.irr_end, 3)?;
    eq("delta(End)", p.delta_end, 6)?;
    eq("mu", g.milnor, 4)?;
    eq("delta", g.delta, 2)?;
    eq("r_C", g.r_c, 1)?;
    eq("(C,X_inf)", g.inf_intersection, 5)?;
    eq("mu by resultant valuation", g.milnor_oracle, 4)?;
    eq("mu by torus knot", single_branch_oracle(p)?, 4)?;
    let gl = d.global.as_ref().ok_or("no global block")?;
    eq("g_a", gl.arithmetic_genus, 2)?;
    eq("chi", gl.euler_char, 2)?;
    eq("rig", gl.rigidity, 2)?;
    eq("main theorem", gl.main_theorem.status.as_str(), "true")?;
    eq("exit code", d.exit_code, 0)?;
    Ok("Irr 3, Irr(End) 3, delta(End) 6, mu 4, delta 2, r_C 1, (C,X) 5; g_a 2, chi 2, rig 2".into())
}

fn generalized_airy() -> Outcome {
    let mut rigs = vec![];
    for (k, name) in [(1, "airy"), (3, "generalized_airy_3"), (5, "generalized_airy_5")] {
        let d = report(name);
        let p = pole(&d, "inf")?;
        let g = p.germ.as_ref().ok_or("no germ")?;
        eq(&format!("k={k} mu"), g.milnor, k + 3)?;
        eq(&format!("k={k} oracle"), g.milnor_oracle, k + 3)?;
        eq(&format!("k={k} torus knot"), single_branch_oracle(p)?, k + 3)?;
        eq(&format!("k={k} cusp type"), (g.branches[0].r, g.branches[0].p + 2), (2, k + 4))?;
        let gl = d.global.as_ref().ok_or("no global block")?;
        eq(&format!("k={k} rig = chi"), gl.rigidity, gl.euler_char)?;
        rigs.push(gl.rigidity);
    }
    ensure(rigs.windows(2).all(|w| w[1] == w[0] - 2), || format!("rig sequence {rigs:?}"))?;
    Ok(format!("mu = 4, 6, 8; rig = chi = {rigs:?}"))
}

fn fuchsian() -> Outcome {
    let d = report("fuchsian");
    for p in ["0/1", "inf"] {
        let b = pole(&d, p)?;
        let g = b.germ.as_ref().ok_or("no germ")?;
        eq(&format!("{p} mu"), g.milnor, 1)?;
        eq(&format!("{p} node oracle"), g.milnor_oracle, 1)?;
        eq(&format!("{p} delta(End)"), b.delta_end, 2)?;
        eq(&format!("{p} Milnor identity"), b.checks.milnor_ok, Some(true))?;
    }
    let gl = d.global.as_ref().ok_or("no global block")?;
    eq("rig", gl.rigidity, 4)?;
    eq("main theorem", gl.main_theorem.status.as_str(), "not-applicable")?;
    ensure(
        gl.main_theorem.details.iter().any(|s| s.contains("reducible")),
        || format!("reasons {:?}", gl.main_theorem.details),
    )?;
    Ok("node germs mu 1, delta(End) 2 at 0 and inf; rig 4; not-applicable (reducible)".into())
}

fn rank_one() -> Outcome {
    for name in ["rank1_double_pole", "rank1_log"] {
        let d = report(name);
        for b in &d.poles {
            eq(&format!("{name} {} delta(End)", b.pole), b.delta_end, 0)?;
        }
        let gl = d.global.as_ref().ok_or("no global block")?;
        eq(&format!("{name} rig"), gl.rigidity, 2)?;
        eq(&format!("{name} chi"), gl.euler_char, 2)?;
        eq(&format!("{name} main theorem"), gl.main_theorem.status.as_str(), "true")?;
    }
    let d = report("rank1_double_pole");
    let g = pole(&d, "0/1")?.germ.as_ref().ok_or("no germ")?;
    eq("smooth germ (mu, delta)", (g.milnor, g.delta), (0, 0))?;
    eq("smooth germ oracle", g.milnor_oracle, 0)?;
    Ok("delta(End) 0 everywhere, rig 2, chi 2, true; irregular germ smooth".into())
}

fn assumption_gate() -> Outcome {
    let d = report("bessel");
    eq("exit code", d.exit_code, 2)?;
    ensure(d.pole("0/1").is_none(), || "invariants emitted for pole 0".into())?;
    let e = d
        .diagnostics
        .iter()
        .find(|e| e.pole.as_deref() == Some("0/1"))
        .ok_or("no diagnostic at 0")?;
    eq("diagnostic kind", e.kind.as_str(), "assumption-violation")?;
    Ok(format!("exit 2: {}", e.message))
}

fn two_routes() -> Outcome {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "problem").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    let (mut poles, mut reductions) = (0, 0);
    for name in &names {
        let mut spec = load(name);
        spec.flags.check_reduction = true;
        let d = run_analysis(&spec);
        let n = d.input.rank as i64;
        for b in &d.poles {
            let at = format!("{name} at {}", b.pole);
            let (delta, inf) = b.germ.as_ref().map_or((0, 0), |g| (g.delta, g.inf_intersection));
            if let Some(g) = &b.germ {
                eq(&format!("{at}: (a) mu formula vs oracle"), g.milnor, g.milnor_oracle)?;
            }
            ensure(b.checks.reduction_agrees != Some(false), || format!("{at}: (b) cells differ"))?;
            if b.checks.reduction_agrees == Some(true) {
                reductions += 1;
            }
            eq(&format!("{at}: (c) discriminant valuation"), b.checks.disc_identity_ok, true)?;
            eq(&format!("{at}: (d) delta identity"), 2 * delta - 2 * (n - 1) * inf, -b.delta_end)?;
            eq(&format!("{at}: (d) reported"), b.checks.delta_identity_ok, true)?;
            poles += 1;
        }
    }
    Ok(format!(
        "{} problems, {poles} poles, {reductions} reduction comparisons",
        names.len()
    ))
}

fn random_split_input(rng: &mut ChaCha8Rng) -> (TruncSeriesMat<Rat>, usize) {
    let n = rng.gen_range(2..=4usize);
    let k1 = rng.gen_range(1..n);
    let order = rng.gen_range(1..=12usize);
    let r = rng.gen_range(-3..=0i64);
    // distinct rational eigenvalues, the first k1 for the upper block
    let mut eigs: Vec<Rat> = vec![];
    while eigs.len() < n {
        let c = Rat::new(rng.gen_range(-6..=6i64), rng.gen_range(1..=3i64));
        if !eigs.contains(&c) {
            eigs.push(c);
        }
    }
    let small = |rng: &mut ChaCha8Rng| Rat::from(rng.gen_range(-3..=3i64));
    let lead = Mat::from_fn(n, n, |i, j| {
        if i == j {
            eigs[i].clone()
        } else {
            Rat::zero()
        }
    });
    let mut lead = lead;
    for i in 0..n {
        for j in i + 1..n {
            if (i < k1) == (j < k1) {
                lead.set(i, j, small(rng));
            }
        }
    }
    let mut coeffs = vec![lead];
    for _ in 0..order {
        let vals: Vec<Rat> = (0..n * n).map(|_| small(rng)).collect();
        coeffs.push(Mat::from_fn(n, n, |i, j| vals[i * n + j].clone()));
    }
    (TruncSeriesMat::new(r, coeffs), k1)
}

/// T A - B T through t^{r+N}, from the certificate blocks.
fn residual_from_blocks(a: &TruncSeriesMat<Rat>, c: &SplitCertificate<Rat>) -> Vec<Mat<Rat>> {
    let n = a.size();
    let k1 = c.k1;
    let t = |e: usize| -> Mat<Rat> {
        Mat::from_fn(n, n, |i, j| match (e, i < k1, j < k1) {
            (0, _, _) => {
                if i == j {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            }
            (_, true, false) => c.t12[e - 1].get(i, j - k1).clone(),
            (_, false, true) => c.t21[e - 1].get(i - k1, j).clone(),
            _ => Rat::zero(),
        })
    };
    let b = |e: usize| -> Mat<Rat> {
        let x = a.r + e as i64;
        let (b1, b2) = (c.b11.coeff_at(x), c.b22.coeff_at(x));
        Mat::from_fn(n, n, |i, j| match (i < k1, j < k1) {
            (true, true) => b1.get(i, j).clone(),
            (false, false) => b2.get(i - k1, j - k1).clone(),
            _ => Rat::zero(),
        })
    };
    let coeff = |e: usize| a.coeff_at(a.r + e as i64);
    (0..=c.order)
        .map(|e| {
            (0..=e).fold(Mat::zero(n, n, &Rat::zero()), |acc, m| {
                acc.plus(&t(m).times(&coeff(e - m))).minus(&b(e - m).times(&t(m)))
            })
        })
        .collect()
}

fn splitting_certificates() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sizes = vec![];
    for case in 0..20 {
        let (a, k1) = random_split_input(&mut rng);
        let c = split_once(&a, k1).map_err(|e| format!("case {case}: {e}"))?;
        eq(&format!("case {case} certified order"), c.order, a.order())?;
        let res = residual_from_blocks(&a, &c);
        ensure(res.iter().all(|m| m.is_zero()), || format!("case {case}: nonzero residual"))?;
        ensure(c.verify(&a), || format!("case {case}: certificate rejects itself"))?;
        sizes.push(format!("{}x{}/N{}", a.size(), k1, a.order()));
    }
    Ok(format!("20 certificates ({})", sizes.join(" ")))
}

fn similarity_invariance() -> Outcome {
    let base = load("airy");
    let want = run_analysis(&base);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 10 {
        let v: Vec<i64> = (0..4).map(|_| rng.gen_range(-5..=5)).collect();
        let p = Mat::from_fn(2, 2, |i, j| Rat::from(v[2 * i + j]));
        let Some(pinv) = p.inverse() else { continue };
        let lift = |m: &Mat<Rat>| m.map(|x| RatFn::constant(x.clone()));
        let conj = lift(&p).times(&base.matrix).times(&lift(&pinv));
        if conj == base.matrix {
            continue;
        }
        let mut spec = base.clone();
        spec.matrix = conj;
        let got = run_analysis(&spec);
        let what = format!("P = {v:?}");
        eq(&format!("{what}: poles"), &got.poles, &want.poles)?;
        eq(&format!("{what}: global"), &got.global, &want.global)?;
        eq(&format!("{what}: warnings"), &got.warnings, &want.warnings)?;
        eq(&format!("{what}: exit code"), got.exit_code, want.exit_code)?;
        done += 1;
    }
    Ok("10 conjugations of the Airy system, reports identical".into())
}

fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.5) {
            "z".into()
        } else {
            rng.gen_range(0..30).to_string()
        };
    }
    let a = random_expr(rng, depth - 1);
    match rng.gen_range(0..6) {
        0 => format!("({a}) + ({})", random_expr(rng, depth - 1)),
        1 => format!("({a}) - ({})", random_expr(rng, depth - 1)),
        2 => format!("({a})*({})", random_expr(rng, depth - 1)),
        3 => format!("({a})^{}", rng.gen_range(-2..=3)),
        4 => format!("-({a})"),
        _ => format!("({a})/(z - {})", rng.gen_range(1..5)),
    }
}

fn parser_and_reports() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut parsed = 0;
    for _ in 0..300 {
        let s = random_expr(&mut rng, 4);
        let f = match parse_expr(&s, "z") {
            Ok(f) => f,
            // ^(-k) of an expression that is identically zero
            Err(_) if s.contains("^-") => continue,
            Err(e) => return Err(format!("{s}: {e}")),
        };
        let again = parse_expr(&f.display_in("z"), "z").map_err(|e| format!("{s}: {e}"))?;
        eq(&format!("reparse of {s}"), &again, &f)?;
        parsed += 1;
    }
    let problem = load("airy");
    eq("problem render round trip", parse_problem(&problem.render()).map_err(|e| e.to_string())?.matrix, problem.matrix)?;
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let suites = [
        "airy",
        "generalized_airy_3",
        "generalized_airy_5",
        "fuchsian",
        "rank1_double_pole",
        "rank1_log",
    ];
    for name in suites {
        let a = report(name).to_json();
        let b = report(name).to_json();
        eq(&format!("{name} determinism"), &a, &b)?;
        let back = ReportDocument::from_json(&a).map_err(|e| e.to_string())?.to_json();
        eq(&format!("{name} serialize-parse-serialize"), &back, &a)?;
        let want = std::fs::read_to_string(golden.join(format!("{name}.json")))
            .map_err(|e| format!("{name} golden: {e}"))?;
        ensure(a == want, || format!("{name} differs from its golden report"))?;
    }
    Ok(format!("{parsed} random expressions reparse; {} golden reports byte-stable", suites.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Airy suite", airy_suite),
        ("generalized Airy k = 1, 3, 5", generalized_airy),
        ("Fuchsian diagonal", fuchsian),
        ("rank-1 suite", rank_one),
        ("assumption gate", assumption_gate),
        ("two-route equalities on the corpus", two_routes),
        ("splitting certificates", splitting_certificates),
        ("similarity invariance", similarity_invariance),
        ("parser and report files", parser_and_reports),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
