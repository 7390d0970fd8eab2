//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria 8 and 9 contain clauses that do not hold as stated; they are
//! computed literally, printed as FAIL with the residual, and the test
//! asserts that exactly these criteria fail.

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use courant_core::cli::{load_beta, load_kappa, run_suite, Suite, SuiteConfig};
use courant_core::graded::{parse, ChartScheme, Generator, Poly};
use courant_core::groupoid::{
    alpha_certificate, mu_quadrature_error, omega_t, stokes_check, GroupoidChart,
};
use courant_core::jet::{
    exact_theorem, exact_theorem_unchecked, extension_ranks, extension_solve, pullback_and_extract,
    qflow_extract, verify_lemma_varkappa, verify_lemma_varkappa_unchecked, Extension, SlotKind,
};
use courant_core::phase::{
    gauge_exp, maurer_cartan_check, nq_morphism_check, psi_kappa, standard_q, transformed_symplectic, twist,
    twist_unchecked, BaseForm, ClosedThreeForm, PhaseChart,
};
use courant_core::simplicial::{em_level, is_multiplicative, kan_classify, KanClass};

const EXPECTED_FAILURES: [usize; 2] = [8, 9];

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

const KAPPAS: [&str; 4] = ["kappa_volume_d3.json", "kappa_poly_d3.json", "kappa_x1_d4.json", "kappa_quadratic_d4.json"];

fn kappas() -> Vec<(String, ClosedThreeForm)> {
    KAPPAS.iter().map(|n| (n.to_string(), load_kappa(&corpus(n), false).unwrap())).collect()
}

/// Ok(detail) passes, Err(detail) fails.
type Verdict = Result<String, String>;
type Criterion = (usize, &'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))?;
    Ok(t)
}

fn omega_literal(d: u8) -> Poly {
    let text: Vec<String> = (1..=d).map(|a| format!("dp{a}*dx{a} + deta{a}*dxi{a}")).collect();
    parse(&ChartScheme::phase(d), &text.join(" + ")).unwrap()
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    for d in 1..=3 {
        let chart = GroupoidChart::new(d);
        let e = pullback_and_extract(&chart, &omega_t(&chart).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(e.jet == omega_literal(d), || format!("d={d}: residual {}", &e.jet - &omega_literal(d)))?;
    }
    let t = within(Duration::from_secs(5), start)?;
    Ok(format!("1-Jet(w_T) = dp_a dx^a + deta_a dxi^a for d = 1, 2, 3 in {t:?}"))
}

fn criterion_2() -> Verdict {
    for d in 1..=3 {
        let chart = GroupoidChart::new(d);
        let cert = alpha_certificate(&chart).map_err(|e| e.to_string())?;
        ensure(cert.residual().is_zero(), || format!("d={d}: w_T - D a = {}", cert.residual()))?;
        let m = is_multiplicative(&chart, &cert.omega).map_err(|e| e.to_string())?;
        ensure(m.degeneracy_failures.is_empty(), || format!("d={d}: {}", m.failures().join("; ")))?;
    }
    Ok("w_T = D a and s_i^* w_T = 0 for d = 1, 2, 3".into())
}

fn criterion_3() -> Verdict {
    for d in 1..=2 {
        for n in 1..=3 {
            let q = qflow_extract(&GroupoidChart::new(d), n).map_err(|e| e.to_string())?;
            let s = q.induced.target().clone();
            for a in 1..=d {
                for (g, text) in [
                    (Generator::x(a), format!("x{a} + th*xi{a}")),
                    (Generator::xi(a), format!("xi{a}")),
                    (Generator::p(a), format!("p{a}")),
                    (Generator::eta(a), format!("eta{a} + th*p{a}")),
                ] {
                    let image = q.induced.image(g).map_err(|e| e.to_string())?;
                    ensure(image == &parse(&s, &text).unwrap(), || format!("d={d} n={n}: {g} -> {image}"))?;
                }
            }
            let phase = ChartScheme::phase(d);
            let r = q.generator.residuals(&standard_q(&phase)).map_err(|e| e.to_string())?;
            ensure(r.is_empty() && q.identity_at_zero, || format!("d={d} n={n}: derivative differs from Q"))?;
        }
    }
    Ok("flow (x + th xi, xi, p, eta + th p) with derivative Q at levels 1..3".into())
}

fn criterion_4() -> Verdict {
    let s = ChartScheme::phase(1);
    let eta = Poly::gen(&s, Generator::eta(1));
    let p = Poly::gen(&s, Generator::p(1));
    for ka in -2i64..=2 {
        for kb in -2i64..=2 {
            let scale = |k: i64| eta.scale(&courant_core::graded::integer(k));
            let ext = extension_solve(&scale(ka), &scale(kb), &p).map_err(|e| e.to_string())?;
            ensure(ext.is_unique() == (ka == -kb), || format!("a = {ka} eta, b = {kb} eta: unique = {}", ext.is_unique()))?;
        }
    }
    let r = extension_ranks(3);
    let free: Vec<SlotKind> = r.level_one_free.iter().map(|s| s.kind).collect();
    ensure(r.nullity == 2 && free == [SlotKind::B, SlotKind::C], || format!("{r:?}"))?;
    match extension_solve(&-eta.clone(), &eta, &p).map_err(|e| e.to_string())? {
        Extension::Unique { unknowns, rank, .. } => {
            ensure(unknowns == rank, || format!("rank {rank} of {unknowns}"))?;
            Ok(format!("unique iff a = -b on a 5x5 grid; levels <= 3: rank {rank} = unknowns, homogeneous nullity 2 (b, c)"))
        }
        Extension::Obstructed { constraint, .. } => Err(format!("canonical data obstructed at {constraint}")),
    }
}

fn criterion_5() -> Verdict {
    for (name, k) in kappas() {
        let m = maurer_cartan_check(&k).map_err(|e| e.to_string())?;
        ensure(m.passed(), || format!("{name}: {:?} fails", m.failing_term()))?;
    }
    let tau = load_kappa(&corpus("negative/tau_nonclosed_d4.json"), false).map_err(|e| e.to_string())?;
    let m = maurer_cartan_check(&tau).map_err(|e| e.to_string())?;
    ensure(m.failing_term() == Some("Q(q*kappa)"), || format!("non-closed form: {:?}", m.failing_term()))?;
    Ok(format!("both terms vanish for {} corpus forms; x4 dx1dx2dx3 fails Q(q*k) = {}", KAPPAS.len(), m.q_term))
}

fn criterion_6() -> Verdict {
    let mut pairs = 0;
    let mut max_steps = 0;
    for (name, k) in kappas() {
        for tag in ["a", "b", "c"] {
            let beta = load_beta(&corpus(&format!("beta_{tag}_d{}.json", k.dim())), false).map_err(|e| e.to_string())?;
            let g = gauge_exp(&beta, &twist(&k).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let expected = twist_unchecked(&k.checked_sub(&beta.d()).unwrap()).unwrap();
            let r = g.result.residuals(&expected).unwrap();
            ensure(r.is_empty() && g.steps <= 3, || format!("{name} / beta_{tag}: steps {}, {r:?}", g.steps))?;
            max_steps = max_steps.max(g.steps);
            pairs += 1;
        }
    }
    ensure(pairs >= 10, || format!("only {pairs} pairs"))?;
    Ok(format!("exp(ad X_b) Q_k = Q + X_(k - db) on {pairs} pairs, series ends by step {max_steps}"))
}

fn criterion_7() -> Verdict {
    for (name, k) in kappas() {
        let psi = psi_kappa(&k).map_err(|e| e.to_string())?;
        let nq = nq_morphism_check(&psi, &twist(&k).unwrap(), &PhaseChart::new(k.dim()).q()).map_err(|e| e.to_string())?;
        ensure(nq.passed(), || format!("{name}: {:?}", nq.residuals))?;
        let t = transformed_symplectic(&k).map_err(|e| e.to_string())?;
        ensure(t.passed(), || format!("{name}: pulled - expected = {}", &t.pulled - &t.expected))?;
    }
    Ok(format!("psi_k is an NQ morphism and both evaluation paths agree for {} corpus forms", KAPPAS.len()))
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let vol = ClosedThreeForm::constant_volume(3, 1).unwrap();
    let chart3 = GroupoidChart::new(3);
    let (_, r) = exact_theorem(&chart3, &vol).map_err(|e| e.to_string())?;
    ensure(r.is_zero(), || format!("dx1dx2dx3: exact core residual {r}"))?;
    let lemma = verify_lemma_varkappa(&chart3, &vol).map_err(|e| e.to_string())?;
    ensure(lemma.passed(), || "dx1dx2dx3: lemma".to_string())?;

    let b4 = ChartScheme::base(4);
    let form = BaseForm::from_terms(4, 3, &[(vec![2, 3, 4], parse(&b4, "x1").unwrap())]).unwrap();
    let k4 = ClosedThreeForm::unchecked(form).unwrap();
    let chart4 = GroupoidChart::new(4);
    let (_, r) = exact_theorem_unchecked(&chart4, &k4).map_err(|e| e.to_string())?;
    ensure(r.is_zero(), || format!("x1 dx2dx3dx4: exact core residual {r}"))?;
    let lemma = verify_lemma_varkappa_unchecked(&chart4, &k4).map_err(|e| e.to_string())?;
    for (name, res) in lemma.residuals() {
        if !res.is_zero() {
            failures.push(format!("x1 dx2dx3dx4 (dk = {}): {name} = {res}", k4.form().d().poly()));
        }
    }
    let t = within(Duration::from_secs(30), start)?;
    if failures.is_empty() {
        Ok(format!("exact core and three-way lemma for both forms in {t:?}"))
    } else {
        Err(format!("exact core holds for both forms; three-way lemma fails: {}", failures.join("; ")))
    }
}

fn criterion_9() -> Verdict {
    let mut worst: f64 = 0.0;
    for (seed, (_, k)) in kappas().into_iter().enumerate() {
        let e = mu_quadrature_error(&GroupoidChart::new(k.dim()), k.form(), seed as u64, 10, 1e-10).map_err(|e| e.to_string())?;
        ensure(e <= 1e-10, || format!("quadrature deviation {e:e}"))?;
        worst = worst.max(e);
    }
    let mut printed = Vec::new();
    for (name, k) in kappas() {
        let report = stokes_check(&GroupoidChart::new(k.dim()), k.form()).map_err(|e| e.to_string())?;
        ensure(report.reversed_residual().is_zero(), || format!("{name}: d mu = d0*k - d1*k fails too"))?;
        let r = report.printed_residual();
        if !r.is_zero() {
            printed.push(format!("{name}: d mu - (d1*k - d0*k) = {r}"));
        }
    }
    if printed.is_empty() {
        Ok(format!("quadrature within {worst:e}; d mu = d1*k - d0*k"))
    } else {
        Err(format!(
            "quadrature within {worst:e} (ok); d mu = d1*k - d0*k fails, d mu = d0*k - d1*k holds: {}",
            printed.join("; ")
        ))
    }
}

fn criterion_10() -> Verdict {
    for dim_v in 1..=3 {
        for n in 0..=2u8 {
            for m in 1..=4u8 {
                for j in 0..=m {
                    let c = kan_classify(dim_v, n, m, j);
                    let ok = if m > n { c == KanClass::Bijective } else { c.is_surjective() };
                    ensure(ok, || format!("V={dim_v} n={n} horn({m},{j}): {c}"))?;
                }
            }
            for k in 0..=n {
                let dim = em_level(dim_v, n, k).dim();
                ensure(dim == if k == n { dim_v } else { 0 }, || format!("dim K({dim_v},{n})_{k} = {dim}"))?;
            }
        }
    }
    Ok("Kan!(m,j) for m > n, Kan(m,j) for m <= n on n <= 2, m <= 4, dim V <= 3; K(V,n)_n = V, lower levels 0".into())
}

fn criterion_11() -> Verdict {
    let config = SuiteConfig::new(3).with_suites(vec![Suite::Algebra]);
    let report = run_suite(&config).map_err(|e| e.to_string())?;
    if let Some(f) = report.failures().next() {
        return Err(format!("{}: {}", f.id, f.residual.clone().unwrap_or_default()));
    }
    Ok(format!("{} property checks, {} seeded cases each", report.checks.len(), courant_core::cli::PROPERTY_CASES))
}

fn criterion_12() -> Verdict {
    let mut runs = Vec::new();
    for k in KAPPAS {
        let d = load_kappa(&corpus(k), false).unwrap().dim();
        for tag in ["a", "b", "c"] {
            let kpath = corpus(k);
            let beta = corpus(&format!("beta_{tag}_d{d}.json"));
            let args: Vec<String> = ["--kappa", kpath.to_str().unwrap(), "--beta", beta.to_str().unwrap(), "--format", "json"]
                .iter()
                .map(|a| a.to_string())
                .collect();
            runs.push((format!("{k} / beta_{tag}"), args));
        }
    }
    let run = |args: &[String]| Command::new(env!("CARGO_BIN_EXE_courant-verify")).args(args).output().unwrap();
    let start = Instant::now();
    let first: Vec<_> = runs.iter().map(|(_, a)| run(a)).collect();
    let t = within(Duration::from_secs(60), start)?;
    let mut checks = 0;
    for ((name, args), out) in runs.iter().zip(&first) {
        ensure(out.status.code() == Some(0), || format!("{name}: exit {:?}", out.status.code()))?;
        ensure(run(args).stdout == out.stdout, || format!("{name}: reports differ between runs"))?;
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        checks += report["checks"].as_array().map_or(0, |c| c.len());
    }
    Ok(format!("all suites exit 0 on {} corpus pairs ({checks} checks) in {t:?}; json byte-identical on rerun", runs.len()))
}

/// Written to the stderr handle so the lines survive output capture.
fn report(line: String) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        (1, "standard integration theorem core", criterion_1),
        (2, "w_T = D a, s_i^* w_T = 0", criterion_2),
        (3, "Q-flow", criterion_3),
        (4, "extension obstruction", criterion_4),
        (5, "Maurer-Cartan", criterion_5),
        (6, "gauge series", criterion_6),
        (7, "psi_k", criterion_7),
        (8, "exact integration theorem core", criterion_8),
        (9, "fibre integration", criterion_9),
        (10, "Kan certification", criterion_10),
        (11, "algebraic substrate", criterion_11),
        (12, "CLI", criterion_12),
    ];
    let mut failed = Vec::new();
    report(String::new());
    for (n, name, run) in criteria {
        match run() {
            Ok(detail) => report(format!("PASS  {n:>2}  {name}: {detail}")),
            Err(detail) => {
                report(format!("FAIL  {n:>2}  {name}: {detail}"));
                failed.push(n);
            }
        }
    }
    assert_eq!(failed, EXPECTED_FAILURES, "criteria failing outside the analysed set");
}
