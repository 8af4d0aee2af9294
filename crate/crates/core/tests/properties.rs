use proptest::prelude::*;

use circlelab::cayley::{CayleyBall, Dist, GeneratorSet};
use circlelab::circle::{circle_dist, schwarzian, schwarzian_sample_points, LiftedMap, ProjectiveMap};
use circlelab::discreteness::{classify, Verdict};
use circlelab::expansion::{derivative_cocycle, equivariance_residual};
use circlelab::lab::{export_group, parse_group, LabConfig};
use circlelab::zoo::{triangle_group, GroupSpec};

fn matrix() -> impl Strategy<Value = ProjectiveMap> {
    prop::array::uniform4(-3.0f64..3.0)
        .prop_filter("well conditioned", |m| (m[0] * m[3] - m[1] * m[2]).abs() > 0.2)
        .prop_map(|m| ProjectiveMap::normalize(m).unwrap())
}

fn lifted(k: u32) -> impl Strategy<Value = LiftedMap> {
    (matrix(), 0..k).prop_map(move |(m, j)| LiftedMap::new(m, k, j).unwrap())
}

fn orientation_preserving() -> impl Strategy<Value = ProjectiveMap> {
    matrix().prop_filter("orientation preserving", |m| m.det() > 0.0)
}

fn triangle_words() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<usize>)> {
    let w = || prop::collection::vec(0usize..3, 0..7);
    (w(), w(), w())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chain_rule(g in matrix(), h in matrix(), x in 0.0f64..1.0) {
        let gh = g.compose(&h);
        let lhs = gh.log_derivative(x);
        let rhs = g.log_derivative(h.apply(x)) + h.log_derivative(x);
        prop_assert!((lhs - rhs).abs() < 1e-9, "{lhs} vs {rhs}");
        prop_assert!(circle_dist(gh.apply(x), g.apply(h.apply(x))) < 1e-9);
    }

    #[test]
    fn inverse_undoes(g in matrix(), x in 0.0f64..1.0) {
        let gi = g.inverse();
        prop_assert!(g.compose(&gi).is_identity(1e-9));
        prop_assert!(circle_dist(gi.apply(g.apply(x)), x) < 1e-9);
        prop_assert_eq!(g.det(), gi.det());
    }

    #[test]
    fn lifts_cover_their_base(g in lifted(3), y in 0.0f64..1.0) {
        let down = g.project(g.apply(y));
        prop_assert!(circle_dist(down, g.base().apply(g.project(y))) < 1e-9);
    }

    #[test]
    fn lifts_commute_with_deck(m in orientation_preserving(), j in 0u32..2, y in 0.0f64..1.0) {
        let g = LiftedMap::new(m, 2, j).unwrap();
        let deck = LiftedMap::deck(2, 1);
        let a = g.apply(deck.apply(y));
        let b = deck.apply(g.apply(y));
        prop_assert!(circle_dist(a, b) < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn lifted_composition_matches_pointwise(g in lifted(2), h in lifted(2), y in 0.0f64..1.0) {
        let gh = g.compose(&h).unwrap();
        prop_assert!(circle_dist(gh.apply(y), g.apply(h.apply(y))) < 1e-8);
        let gi = g.inverse();
        prop_assert!(g.compose(&gi).unwrap().is_identity(1e-9));
    }

    #[test]
    fn cocycle_is_additive_and_equivariant(
        g in lifted(2), g1 in lifted(2), g2 in lifted(2), g3 in lifted(2), x in 0.0f64..1.0,
    ) {
        let sum = derivative_cocycle(x, &g1, &g2) + derivative_cocycle(x, &g2, &g3);
        prop_assert!((sum - derivative_cocycle(x, &g1, &g3)).abs() < 1e-12);
        prop_assert!(equivariance_residual(x, &g, &g1, &g2) < 1e-8);
    }

    #[test]
    fn projective_maps_have_no_schwarzian(g in matrix()) {
        for t in schwarzian_sample_points(&g, 20) {
            prop_assert!(schwarzian(&g, t).unwrap().abs() < 1e-6);
        }
    }

    #[test]
    fn group_files_round_trip(ms in prop::collection::vec(matrix(), 1..4)) {
        let gens: Vec<_> = ms
            .iter()
            .enumerate()
            .map(|(i, m)| circlelab::cayley::Generator {
                name: format!("g{i}"),
                element: LiftedMap::base_map(*m),
            })
            .collect();
        let Ok(spec) = GroupSpec::new("random", gens, vec![], Default::default()) else {
            // coincident generators are rejected; nothing to round-trip
            return Ok(());
        };
        let back = parse_group(&export_group(&spec)).unwrap();
        for (a, b) in back.generators().elements().iter().zip(spec.generators().elements()) {
            prop_assert!(a.approx_eq(&b, 1e-12));
        }
    }

    #[test]
    fn config_hash_tracks_seed(seed in any::<u64>(), grid in 64usize..100_000) {
        let mut a = LabConfig::new("zoo:modular", seed);
        a.params.grid = Some(grid);
        let mut b = a.clone();
        prop_assert_eq!(a.hash(), b.hash());
        b.seed = seed.wrapping_add(1);
        prop_assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn verdicts_are_scale_free(d in prop::collection::vec(1e-3f64..1.0, 2..6), s in 0.5f64..2.0) {
        let scaled: Vec<f64> = d.iter().map(|v| v * s).collect();
        prop_assert_eq!(classify(&d).1, classify(&scaled).1);
        let plateau = vec![d[0]; d.len()];
        prop_assert_eq!(classify(&plateau).1, Verdict::LocallyDiscrete);
    }
}

fn triangle_ball() -> &'static CayleyBall {
    use std::sync::OnceLock;
    static BALL: OnceLock<CayleyBall> = OnceLock::new();
    BALL.get_or_init(|| {
        let gens: GeneratorSet = triangle_group(2, 3, 7).unwrap().generators().clone();
        CayleyBall::build(&gens, 12).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn word_metric_is_a_metric((w1, w2, w3) in triangle_words()) {
        let ball = triangle_ball();
        let gens = ball.generators();
        let idx = |w: &[usize]| ball.lookup(&gens.evaluate(w)).unwrap();
        let (a, b, c) = (idx(&w1), idx(&w2), idx(&w3));
        let d = |i, j| match ball.dist(i, j) {
            Dist::Exact(d) => d,
            Dist::Greater(r) => panic!("pair beyond radius {r}"),
        };
        prop_assert_eq!(d(a, b), d(b, a));
        prop_assert!(d(a, c) <= d(a, b) + d(b, c));
        prop_assert!(ball.norm(a) as usize <= w1.len());
        prop_assert_eq!(d(a, a), 0);
    }

    #[test]
    fn cocycle_bounded_by_word_distance((w1, w2, _) in triangle_words(), x in 0.0f64..1.0) {
        let ball = triangle_ball();
        let gens = ball.generators();
        let c_upper = gens
            .elements()
            .iter()
            .map(|g| (0..4096).map(|i| g.log_derivative(i as f64 / 4096.0)).fold(f64::NEG_INFINITY, f64::max))
            .fold(f64::NEG_INFINITY, f64::max)
            + 1e-3;
        let (g1, g2) = (gens.evaluate(&w1), gens.evaluate(&w2));
        let d = ball.distance_elements(&g1, &g2).unwrap();
        prop_assert!(derivative_cocycle(x, &g1, &g2) <= c_upper * f64::from(d) + 1e-9);
    }
}
