//! Acceptance suite. Prints one line per criterion and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Rational64;

use degenerate_series::constituents::{
    enumerate_constituents, is_empty, label_of, region_for, ConstituentLabel as C,
};
use degenerate_series::howe::{omega_image, possible_embeddings};
use degenerate_series::ktype::{dominant_window, Direction, KType};
use degenerate_series::oracle::{
    analyze, build, compare, grid, resolve_bound, Lmax, Status, Verdict,
};
use degenerate_series::parameters::{CaseTag, InducedRepParams};
use degenerate_series::rational::Rational;
use degenerate_series::structure::{
    irreducible_submodules, module_diagram, socle_series, DiagramReport, SocleSeries,
};
use degenerate_series::unitarity::constituent_unitarizable;

/// Summary line and counterexamples; the criterion passes when there are none.
type Outcome = (String, Vec<String>);

fn acceptance_grid() -> Vec<InducedRepParams> {
    let st: Vec<Rational> = (-6..=6).map(Rational::integer).collect();
    grid([2, 3, 4, 5], &[0, 1, 2, 3], &st).unwrap()
}

fn at(n: i64, alpha: i64, sigma: Rational) -> InducedRepParams {
    InducedRepParams::new(n, alpha, sigma).unwrap()
}

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn collect(errs: Vec<String>, summary: String) -> Outcome {
    (summary, errs)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_degseries"))
        .args(["verify", "--lmax", "auto"])
        .output()
        .expect("run degseries");
    let elapsed = start.elapsed();
    let mut errs = Vec::new();
    let text = String::from_utf8(out.stdout).unwrap();
    let verdicts: Vec<Verdict> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    if verdicts.len() != acceptance_grid().len() {
        errs.push(format!(
            "{} verdicts, expected {}",
            verdicts.len(),
            acceptance_grid().len()
        ));
    }
    for v in &verdicts {
        if v.status != Status::Pass {
            errs.push(format!(
                "n={} alpha={} sigma={}: {}",
                v.n,
                v.alpha,
                v.sigma,
                v.first_witness().unwrap_or("")
            ));
            continue;
        }
        if v.case != CaseTag::Irreducible.as_str() {
            for name in ["partition", "diagram", "socle", "generated"] {
                if v.check(name).map(|c| c.status) != Some(Status::Pass) {
                    errs.push(format!(
                        "n={} alpha={} sigma={}: {name} not PASS",
                        v.n, v.alpha, v.sigma
                    ));
                }
            }
        }
    }
    if out.status.code() != Some(0) {
        errs.push(format!("exit status {:?}", out.status.code()));
    }
    if elapsed > Duration::from_secs(120) {
        errs.push(format!("runtime {elapsed:.1?} over 2 minutes"));
    }
    collect(
        errs,
        format!("{} points PASS in {elapsed:.1?}", verdicts.len()),
    )
}

fn criterion_2() -> Outcome {
    let mut points = acceptance_grid();
    let extra: Vec<InducedRepParams> = (0..50)
        .map(|i| {
            let n = 2 + i % 4;
            let alpha = (i / 4) % 4;
            let den = [2, 3, 4, 5, 7, 8][(i % 6) as usize];
            let mut s = q(i - 25, den);
            let p = at(n, alpha, s);
            if p.sigma_tilde().is_integer() {
                s = s + q(1, 3);
            }
            at(n, alpha, s)
        })
        .collect();
    let mut errs = Vec::new();
    for p in &extra {
        if p.sigma_tilde().is_integer() {
            errs.push(format!("{p}: sample has integral sigma_tilde"));
        }
    }
    points.extend(extra);
    for p in &points {
        let res = analyze(&build(p, resolve_bound(p, Lmax::Auto)));
        let single = res.classes.len() == 1;
        if single != (p.classify() == CaseTag::Irreducible) {
            errs.push(format!(
                "{p}: {} SCCs, classify {}",
                res.classes.len(),
                p.classify().as_str()
            ));
        }
    }
    collect(errs, format!("{} points agree", points.len()))
}

fn labels(v: impl IntoIterator<Item = C>) -> BTreeSet<C> {
    v.into_iter().collect()
}

fn show<'a>(v: impl IntoIterator<Item = &'a C>) -> String {
    let parts: Vec<String> = v.into_iter().map(|c| c.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn criterion_3() -> Outcome {
    let p = at(2, 0, q(1, 2));
    let mut errs = Vec::new();
    let cs = labels(enumerate_constituents(&p).unwrap().labels);
    if cs != labels([C::l(0, 0), C::l(1, 1), C::l(1, 0)]) {
        errs.push(format!("constituents {}", show(&cs)));
    }
    let soc = labels(socle_series(&p).unwrap().layers[0].clone());
    if soc != labels([C::l(0, 0), C::l(1, 1)]) {
        errs.push(format!("socle {}", show(&soc)));
    }
    for (pp, qq, want) in [
        (0, 4, labels([C::l(0, 0)])),
        (4, 0, labels([C::l(1, 1)])),
        (2, 2, cs.clone()),
    ] {
        let img = omega_image(pp, qq, 2).unwrap();
        if img.target != p || labels(img.members()) != want {
            errs.push(format!(
                "Omega^({pp},{qq}) = {} in {}",
                show(&img.members()),
                img.target
            ));
        }
    }
    let r11 = region_for(&p, &C::l(1, 1)).unwrap();
    for l in dominant_window(2, 8) {
        if r11.contains(&l) != (l.get(2) >= 1) {
            errs.push(format!("L(1,1) membership wrong at {l}"));
        }
    }
    if !is_empty(&p, &C::l(0, 1)).unwrap() {
        errs.push("L(0,1) nonempty".into());
    }
    let v = compare(&p, Lmax::Auto).unwrap();
    if !v.passed() {
        errs.push(format!("oracle: {}", v.first_witness().unwrap_or("")));
    }
    collect(errs, "L00 + L11 socle, L10 top, Omega images match".into())
}

fn criterion_4() -> Outcome {
    let img = omega_image(0, 0, 2).unwrap();
    let p = at(2, 0, q(-3, 2));
    let mut errs = Vec::new();
    if img.target != p {
        errs.push(format!("target {}", img.target));
    }
    if img.members() != vec![C::l(0, 1)] {
        errs.push(format!("image {}", show(&img.members())));
    }
    let pts = region_for(&p, &C::l(0, 1)).unwrap().points(2);
    if pts != Some(vec![KType::zero(2)]) {
        errs.push(format!("K-types {pts:?}"));
    }
    if !module_diagram(&p).unwrap().sinks().contains(&C::l(0, 1)) {
        errs.push("L(0,1) is not a sink".into());
    }
    let v = compare(&p, Lmax::Auto).unwrap();
    if !v.passed() {
        errs.push(format!("oracle: {}", v.first_witness().unwrap_or("")));
    }
    collect(errs, "Omega^(0,0) = L(0,1) = {lambda=(0,0)}, a sink".into())
}

fn criterion_5() -> Outcome {
    let mut errs = Vec::new();
    let mut count = 0;
    for n in 2..=5 {
        for alpha in 0..4 {
            if (n + alpha) % 2 == 0 {
                continue;
            }
            count += 1;
            let p = at(n, alpha, Rational::ZERO);
            let cs = labels(enumerate_constituents(&p).unwrap().labels);
            let d = module_diagram(&p).unwrap();
            if !d.edges.is_empty() {
                errs.push(format!("{p}: {} edges", d.edges.len()));
            }
            for c in &cs {
                if !constituent_unitarizable(&p, c).unwrap().unitarizable {
                    errs.push(format!("{p}: {c} not unitarizable"));
                }
            }
            // independent list of signatures: p + q = n + 1, p - q = alpha mod 4
            let sigs: Vec<(i64, i64)> = (0..=n + 1)
                .map(|a| (a, n + 1 - a))
                .filter(|(a, b)| (a - b - alpha).rem_euclid(4) == 0)
                .collect();
            let got: Vec<(i64, i64)> = possible_embeddings(&p).iter().map(|s| (s.p, s.q)).collect();
            if got != sigs {
                errs.push(format!("{p}: embeddings {got:?}, expected {sigs:?}"));
            }
            let images: Vec<C> = sigs
                .iter()
                .map(|&(a, b)| {
                    let img = omega_image(a, b, n).unwrap();
                    assert_eq!(img.target, p);
                    assert_eq!(img.members().len(), 1, "{}", img.target);
                    img.generator()
                })
                .collect();
            if images.len() != cs.len() || labels(images.clone()) != cs {
                errs.push(format!(
                    "{p}: images {} vs constituents {}",
                    show(&images),
                    show(&cs)
                ));
            }
        }
    }
    collect(
        errs,
        format!("{count} points decompose as a direct sum of Omega images"),
    )
}

fn criterion_6() -> Outcome {
    let mut errs = Vec::new();
    let (mut neg, mut pos) = (0, 0);
    for p in acceptance_grid() {
        let s = p.sigma();
        let embeddings = possible_embeddings(&p);
        if s > Rational::ZERO {
            pos += 1;
            if p.is_reducible() != !embeddings.is_empty() {
                errs.push(format!(
                    "{p}: reducible={} with {} embeddings",
                    p.is_reducible(),
                    embeddings.len()
                ));
            }
            continue;
        }
        if !(p.is_reducible() && s < Rational::ZERO && s >= -p.rho()) {
            continue;
        }
        neg += 1;
        let soc = labels(irreducible_submodules(&p).unwrap());
        let images: BTreeSet<C> = embeddings
            .iter()
            .map(|e| omega_image(e.p, e.q, p.n() as i64).unwrap())
            .inspect(|img| assert_eq!(img.members().len(), 1))
            .map(|img| img.generator())
            .collect();
        if soc != images {
            errs.push(format!(
                "{p}: socle {} but Omega images {}",
                show(&soc),
                show(&images)
            ));
        }
        for c in &soc {
            if !constituent_unitarizable(&p, c).unwrap().unitarizable {
                errs.push(format!("{p}: socle member {c} not unitarizable"));
            }
        }
    }
    collect(
        errs,
        format!("{neg} points with -rho <= sigma < 0, {pos} with sigma > 0"),
    )
}

/// `(-sigma - xi) / (-sigma + xi)` with `xi = (n+1)/2 + alpha/2 + 2 lambda_j - j + 1`.
fn n_ratio_oracle(
    n: i64,
    alpha: i64,
    sigma: Rational64,
    lambda: &KType,
    j: usize,
) -> Option<Rational64> {
    let xi = Rational64::new(n + 1 + alpha, 2) + Rational64::from(2 * lambda.get(j) - j as i64 + 1);
    let den = -sigma + xi;
    (den != Rational64::from(0)).then(|| (-sigma - xi) / den)
}

fn criterion_7() -> Outcome {
    let mut errs = Vec::new();
    let mut checked = 0usize;
    for n in 2..=4i64 {
        for alpha in 0..4i64 {
            if (n + alpha) % 2 != 0 {
                continue;
            }
            let window = dominant_window(n as usize, 6);
            let pairs = || {
                window
                    .iter()
                    .flat_map(|l| (1..=n as usize).map(move |j| (l, j)))
                    .filter(|(l, j)| l.shifted(*j, Direction::Up).is_some())
            };
            for (a, b) in [(1, 4), (3, 8), (-1, 4), (-3, 8)] {
                let s = Rational64::new(a, b);
                for (l, j) in pairs() {
                    checked += 1;
                    match n_ratio_oracle(n, alpha, s, l, j) {
                        Some(r) if r < Rational64::from(0) => {}
                        r => errs.push(format!(
                            "n={n} alpha={alpha} sigma={s}: N({l}, {j}) = {r:?}"
                        )),
                    }
                }
            }
            for (a, b) in [(3, 4), (1, 1), (-3, 4), (-1, 1)] {
                let s = Rational64::new(a, b);
                let witness = pairs().find(|(l, j)| {
                    n_ratio_oracle(n, alpha, s, l, *j).is_none_or(|r| r >= Rational64::from(0))
                });
                if witness.is_none() {
                    errs.push(format!(
                        "n={n} alpha={alpha} sigma={s}: no violating lambda"
                    ));
                }
            }
        }
    }
    collect(
        errs,
        format!("{checked} ratios negative inside |sigma| < 1/2, violations found outside"),
    )
}

/// The four clauses of the Case 2a emptiness lemma, `None` when no clause applies.
fn lemma_nonempty(i: i64, j: i64, sigma: Rational64, k: i64) -> Option<bool> {
    let d = i - j;
    let bound = -sigma + Rational64::new(1, 2);
    if d <= -1 {
        Some(Rational64::from(d) >= bound)
    } else if (d == 0 && i <= k) || d == 1 {
        Some(true)
    } else if d >= 2 {
        Some(Rational64::from(d) <= bound)
    } else {
        None
    }
}

fn criterion_8() -> Outcome {
    let mut errs = Vec::new();
    let mut checked = 0;
    for n in 2..=6i64 {
        for alpha in 0..4i64 {
            if (n + alpha) % 2 != 0 {
                continue;
            }
            for st in (-6..=6i64).filter(|s| s.rem_euclid(2) == 1) {
                let p = InducedRepParams::from_sigma_tilde(n, alpha, st.into()).unwrap();
                assert_eq!(p.classify(), CaseTag::Case2a);
                let sigma = Rational64::new(2 * st - (n + 1 + alpha), 2);
                let k = n / 2;
                let imax = if n % 2 == 1 { k + 1 } else { k };
                let window = dominant_window(n as usize, 8);
                for i in 0..=imax {
                    for j in 0..=k {
                        let label = C::l(i, j);
                        let Some(want) = lemma_nonempty(i, j, sigma, k) else {
                            errs.push(format!("{p}: no clause for {label}"));
                            continue;
                        };
                        checked += 1;
                        let got = !is_empty(&p, &label).unwrap();
                        if got != want {
                            errs.push(format!("{p}: {label} nonempty={got}, lemma says {want}"));
                        }
                        let seen = window.iter().any(|l| label_of(&p, l).ok() == Some(label));
                        if seen && !want {
                            errs.push(format!("{p}: {label} has K-types but lemma says empty"));
                        }
                    }
                }
            }
        }
    }
    collect(errs, format!("{checked} labels agree with the lemma"))
}

fn criterion_9() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut errs = Vec::new();
    for (name, sigma) in [
        ("sp4_siegel_weil", "1/2"),
        ("trivial", "-3/2"),
        ("unitary_axis", "0"),
    ] {
        let alpha = if name == "unitary_axis" { "1" } else { "0" };
        for format in ["dot", "json"] {
            let run = || {
                Command::new(env!("CARGO_BIN_EXE_degseries"))
                    .args([
                        "diagram", "--n", "2", "--alpha", alpha, "--sigma", sigma, "--format",
                        format,
                    ])
                    .output()
                    .unwrap()
                    .stdout
            };
            let (a, b) = (run(), run());
            let golden = std::fs::read(dir.join(format!("{name}.{format}"))).unwrap();
            if a != golden || a != b {
                errs.push(format!("{name}.{format}: output differs from golden file"));
            }
        }
        let text = std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
        let report: DiagramReport = serde_json::from_str(&text).unwrap();
        if serde_json::to_string_pretty(&report).unwrap() + "\n" != text {
            errs.push(format!("{name}.json: round trip changed bytes"));
        }
        let p = at(2, alpha.parse().unwrap(), sigma.parse().unwrap());
        let (d, s) = (module_diagram(&p).unwrap(), socle_series(&p).unwrap());
        if report != DiagramReport::new(&d, &s) {
            errs.push(format!("{name}.json: library report differs"));
        }
        let back: SocleSeries = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        if back != s {
            errs.push(format!("{name}: socle series round trip"));
        }
    }
    collect(errs, "3 points byte-stable in DOT and JSON".into())
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (id, run) in criteria {
        let (summary, errs) = run();
        if errs.is_empty() {
            println!("criterion {id}: PASS {summary}");
        } else {
            failed += 1;
            println!(
                "criterion {id}: FAIL {summary}; {} counterexample(s)",
                errs.len()
            );
            for e in errs.iter().take(20) {
                println!("    {e}");
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
