//! Property tests over random parameters and K-types.

use proptest::prelude::*;

use crate::constituents::{
    enumerate_constituents, label_of, region_for, ConstituentLabel, Family, Region,
};
use crate::howe::{induced_params, omega_image, possible_embeddings, OmegaShape};
use crate::ktype::{b_minus, b_plus, gap, transition, Direction, KType};
use crate::oracle::{analyze, build};
use crate::parameters::{CaseTag, InducedRepParams};
use crate::rational::Rational;
use crate::structure::{generated_submodule, module_diagram, socle_series, ModuleDiagram};
use crate::unitarity::{complementary_series, constituent_unitarizable, form_violation};

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..60, 1i64..9).prop_map(|(a, b)| Rational::new(a, b))
}

fn any_params() -> impl Strategy<Value = InducedRepParams> {
    (2i64..=6, 0i64..4, rational()).prop_map(|(n, a, s)| InducedRepParams::new(n, a, s).unwrap())
}

fn reducible_params() -> impl Strategy<Value = InducedRepParams> {
    (2i64..=5, 0i64..4, -7i64..=7)
        .prop_map(|(n, a, st)| InducedRepParams::from_sigma_tilde(n, a, st.into()).unwrap())
}

/// Reducible points with -rho <= sigma < 0, i.e. alpha/2 <= sigma_tilde < rho + alpha/2.
fn negative_band() -> impl Strategy<Value = InducedRepParams> {
    (2i64..=6, 0i64..4)
        .prop_flat_map(|(n, a)| {
            let lo = (a + 1) / 2;
            let hi = (n + 1 + a + 1) / 2;
            (Just(n), Just(a), lo..hi)
        })
        .prop_map(|(n, a, st)| InducedRepParams::from_sigma_tilde(n, a, st.into()).unwrap())
}

fn ktype(n: usize) -> impl Strategy<Value = KType> {
    proptest::collection::vec(-8i64..=8, n).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        KType::new(v).unwrap()
    })
}

fn with_ktype(
    p: impl Strategy<Value = InducedRepParams>,
) -> impl Strategy<Value = (InducedRepParams, KType)> {
    p.prop_flat_map(|p| (Just(p), ktype(p.n())))
}

/// The summary statement about the socle has no embedding to point at when
/// alpha = 2 and sigma = -rho_n (p + q = 0 but p - q = 2 mod 4).
fn socle_claim_applies(p: &InducedRepParams) -> bool {
    !(p.alpha() == 2 && p.sigma() == -p.rho())
}

proptest! {
    #[test]
    fn reducible_iff_integral_sigma_tilde(p in any_params()) {
        prop_assert_eq!(p.sigma_tilde().is_integer(), p.is_reducible());
        prop_assert_eq!(p.is_reducible(), p.classify() != CaseTag::Irreducible);
    }

    #[test]
    fn n0_n1_laws(p in any_params()) {
        let d = p.derived();
        let n = p.n() as i64;
        prop_assert!((0..=1).contains(&(n - d.n0)) && d.n0 % 2 == 0);
        prop_assert!((0..=1).contains(&(n - d.n1)) && d.n1 % 2 != 0);
        prop_assert!(d.n0 == n || d.n1 == n);
    }

    #[test]
    fn transitions_sum_to_gap((p, l) in with_ktype(any_params()), j in 1usize..=6) {
        let j = 1 + (j - 1) % p.n();
        let x = Rational::integer(2 * l.get(j));
        let up = b_plus(&p, j as i64) - x;
        let down = x - b_minus(&p, j as i64);
        prop_assert_eq!(up + down, gap(&p));
        prop_assert_eq!(gap(&p), -p.sigma() * 2 - 2);
        for (dir, expect) in [(Direction::Up, up), (Direction::Down, down)] {
            if l.shifted(j, dir).is_some() {
                prop_assert_eq!(transition(&p, &l, j, dir).unwrap(), expect);
            }
        }
    }

    #[test]
    fn zero_coefficients_need_integral_sigma_tilde((p, l) in with_ktype(any_params())) {
        for j in 1..=p.n() {
            for dir in [Direction::Up, Direction::Down] {
                if let Ok(a) = transition(&p, &l, j, dir) {
                    if a.is_zero() {
                        prop_assert!(p.is_reducible());
                    }
                }
            }
        }
    }

    #[test]
    fn barrier_parity_laws(p in reducible_params(), j in -4i64..12) {
        let plus = b_plus(&p, j).is_even_integer();
        let minus = b_minus(&p, j).is_even_integer();
        if p.n_plus_alpha_odd() {
            prop_assert_eq!(plus, minus);
        } else {
            prop_assert!(plus != minus);
        }
    }

    /// Opposite moves between `lambda` and `lambda + e_j` are both blocked
    /// only when the two barriers sit one lattice step apart, i.e. sigma = 0.
    #[test]
    fn mutual_generation((p, l) in with_ktype(any_params()), j in 1usize..=6) {
        let j = 1 + (j - 1) % p.n();
        if let Some(up) = l.shifted(j, Direction::Up) {
            let a = transition(&p, &l, j, Direction::Up).unwrap();
            let b = transition(&p, &up, j, Direction::Down).unwrap();
            if a.is_zero() && b.is_zero() {
                prop_assert_eq!(gap(&p), Rational::integer(-2));
                prop_assert!(p.sigma().is_zero());
            }
        }
    }

    #[test]
    fn regions_partition((p, l) in with_ktype(reducible_params())) {
        let set = enumerate_constituents(&p).unwrap();
        let hits: Vec<ConstituentLabel> = set
            .labels
            .iter()
            .filter(|c| region_for(&p, c).unwrap().contains(&l))
            .copied()
            .collect();
        prop_assert_eq!(hits.len(), 1, "{} at {}", l, p);
        prop_assert_eq!(label_of(&p, &l).unwrap(), hits[0]);
    }

    #[test]
    fn regions_are_order_convex(
        (p, a, b) in reducible_params().prop_flat_map(|p| (Just(p), ktype(p.n()), ktype(p.n()))),
        t in proptest::collection::vec(0.0f64..1.0, 6),
    ) {
        let la = label_of(&p, &a).unwrap();
        prop_assume!(la == label_of(&p, &b).unwrap());
        let mid: Vec<i64> = (1..=p.n())
            .map(|c| {
                let (lo, hi) = (a.get(c).min(b.get(c)), a.get(c).max(b.get(c)));
                lo + ((hi - lo) as f64 * t[c - 1]).round() as i64
            })
            .collect();
        if let Ok(m) = KType::new(mid) {
            prop_assert_eq!(label_of(&p, &m).unwrap(), la);
        }
    }

    #[test]
    fn diagram_edges_are_graded(p in reducible_params()) {
        let d = module_diagram(&p).unwrap();
        for (u, v) in &d.edges {
            let step = match u.family {
                Family::R => (u.i + u.j) - (v.i + v.j),
                Family::L => (u.i - u.j) - (v.i - v.j),
            };
            prop_assert_eq!(step.abs(), 1);
        }
        prop_assert_eq!(d.levels().concat().len(), d.nodes.len());
    }

    #[test]
    fn socle_is_longest_path_layering(p in reducible_params()) {
        let d = module_diagram(&p).unwrap();
        let sort = |mut v: Vec<ConstituentLabel>| { v.sort(); v };
        let levels: Vec<_> = d.levels().into_iter().map(sort).collect();
        let layers: Vec<_> = socle_series(&p).unwrap().layers.into_iter().map(sort).collect();
        prop_assert_eq!(levels, layers);
    }

    #[test]
    fn generated_is_downward_closed(p in reducible_params()) {
        let d = module_diagram(&p).unwrap();
        for l in &d.nodes {
            let g = generated_submodule(&p, l).unwrap();
            prop_assert!(g.contains(l));
            for m in &g.members {
                for s in d.successors(m) {
                    prop_assert!(g.contains(s));
                }
            }
        }
        for l in d.sinks() {
            prop_assert_eq!(generated_submodule(&p, &l).unwrap().members, vec![l]);
        }
    }

    #[test]
    fn socle_is_unitarizable_below_zero(p in negative_band()) {
        prop_assert!(p.sigma() < Rational::ZERO && p.sigma() >= -p.rho());
        prop_assume!(socle_claim_applies(&p));
        for l in module_diagram(&p).unwrap().sinks() {
            prop_assert!(constituent_unitarizable(&p, &l).unwrap().unitarizable, "{} at {}", l, p);
        }
    }

    #[test]
    fn howe_parity_coherence(p in 0i64..14, q in 0i64..14, n in 2i64..=6) {
        let t = induced_params(p, q, n).unwrap();
        let m = p + q;
        prop_assert_eq!(t.sigma_tilde(), Rational::new(m + t.alpha() as i64, 2));
        prop_assert_eq!(t.sigma_tilde().to_integer().unwrap().rem_euclid(2), p % 2);
        let expected = match ((n + m) % 2 == 1, p % 2 == 1) {
            (true, true) => CaseTag::Case1a,
            (true, false) => CaseTag::Case1b,
            (false, true) => CaseTag::Case2a,
            (false, false) => CaseTag::Case2b,
        };
        prop_assert_eq!(t.classify(), expected);
        prop_assert!(possible_embeddings(&t).iter().any(|s| (s.p, s.q) == (p, q)));
    }

    #[test]
    fn single_images_sit_at_the_bottom(p in 0i64..14, q in 0i64..14, n in 2i64..=6) {
        let img = omega_image(p, q, n).unwrap();
        let t = img.target;
        let sigma = t.sigma();
        let set = enumerate_constituents(&t).unwrap();
        prop_assert!(set.contains(&img.generator()), "{} not a constituent of {}", img.generator(), t);
        let single = matches!(img.shape, OmegaShape::SingleConstituent { .. });
        let expect_single = if t.classify().is_case1() { sigma <= Rational::ZERO } else { sigma < Rational::ZERO };
        prop_assert_eq!(single, expect_single);
        if single {
            let (i, j) = (img.generator().i, img.generator().j);
            let k = t.derived().n0 / 2;
            match t.classify() {
                CaseTag::Case1a => prop_assert_eq!(Rational::integer(i + j), sigma + k),
                CaseTag::Case2a => prop_assert_eq!(Rational::integer(i - j), -sigma + Rational::HALF),
                CaseTag::Case2b => prop_assert_eq!(Rational::integer(j - i), -sigma - Rational::HALF),
                _ => {}
            }
            prop_assert!(module_diagram(&t).unwrap().sinks().contains(&img.generator()));
        }
    }

    #[test]
    fn complementary_series_matches_form_signs(n in 2i64..=4, a in 0i64..4, s in rational()) {
        let p = InducedRepParams::new(n, a, s).unwrap();
        prop_assume!(!p.n_plus_alpha_odd() && !p.is_reducible());
        let violation = form_violation(&p, 4);
        prop_assert_eq!(complementary_series(&p), violation.is_none());
    }

    #[test]
    fn oracle_is_deterministic(p in reducible_params()) {
        prop_assume!(p.n() <= 3);
        let a = analyze(&build(&p, 4));
        let b = analyze(&build(&p, 4));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn irreducible_window_is_strongly_connected(n in 2i64..=3, a in 0i64..4, s in rational()) {
        let p = InducedRepParams::new(n, a, s).unwrap();
        prop_assume!(!p.is_reducible());
        prop_assert_eq!(analyze(&build(&p, 4)).classes.len(), 1);
    }

    #[test]
    fn json_round_trips(p in reducible_params()) {
        fn rt<T: serde::Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug>(v: &T) {
            let s = serde_json::to_string(v).unwrap();
            assert_eq!(&serde_json::from_str::<T>(&s).unwrap(), v, "{s}");
        }
        rt(&p);
        let set = enumerate_constituents(&p).unwrap();
        rt(&set);
        for l in &set.labels {
            rt(&region_for(&p, l).unwrap());
        }
        rt(&module_diagram(&p).unwrap());
        rt(&socle_series(&p).unwrap());
        rt(&KType::zero(p.n()));
        rt(&Region::new(p.n(), []));
    }

    #[test]
    fn rational_text_round_trip(r in rational()) {
        prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
        prop_assert_eq!(r.floor() <= r.ceil(), true);
        prop_assert!(Rational::integer(r.floor()) <= r && r <= Rational::integer(r.ceil()));
    }
}

#[test]
fn summary_sample_excludes_only_the_known_gap() {
    // The socle claim fails exactly at alpha = 2, sigma = -rho_n; every other
    // point in the band passes.
    for n in 2..=5 {
        let p = InducedRepParams::from_sigma_tilde(n, 2, 1.into()).unwrap();
        assert_eq!(p.sigma(), -p.rho());
        assert!(possible_embeddings(&p).is_empty());
        assert!(!module_diagram(&p).unwrap().sinks().is_empty());
    }
    let d: ModuleDiagram =
        module_diagram(&InducedRepParams::from_sigma_tilde(2, 0, 1.into()).unwrap()).unwrap();
    assert!(!d.nodes.is_empty());
}
