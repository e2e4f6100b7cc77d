use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use raffleplex::corrgeom::{
    cube_contains, elliptope_contains, elliptope_value, tetrahedron_contains, tetrahedron_facets,
    CorrelationTriple,
};
use raffleplex::games::{
    behavior_from_deterministic, chsh_value, game_win_probability, no_signaling_check,
    quantum_behavior, Behavior, DeterministicStrategy,
};
use raffleplex::lp::{LpOutcome, StandardLp};
use raffleplex::polytope::{
    convex_hull_3d, elliptope_support, h_contains, support_function, v_contains,
};
use raffleplex::quantum::{
    joint_outcome_distribution, quantum_correlation, singlet_product_expectation, spin_eigenstate,
    transition_probability, Direction,
};
use raffleplex::raffle::{
    enumerate_tickets, raffle_correlation, raffle_polytope, sample_admissible_raffle, ticket_image,
    HullMethod, Spin,
};
use raffleplex::vec3::{dot, lattice_directions, normalize, Point3};
use raffleplex::Classification;

fn spins() -> Vec<Spin> {
    (1..=4).map(|t| Spin::from_twice(t).unwrap()).collect()
}

fn random_direction(rng: &mut ChaCha8Rng) -> Direction {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    Direction::from_angles(z.acos(), phi)
}

fn triple(p: Point3) -> CorrelationTriple {
    CorrelationTriple::new(p[0], p[1], p[2]).unwrap()
}

#[test]
fn bodies_are_nested() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100_000 {
        let p: Point3 = [
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        ];
        let t = triple(p);
        let tet = tetrahedron_contains(&t, 1e-9).unwrap().is_member();
        let ell = elliptope_contains(&t, 1e-9).unwrap().is_member();
        let cub = cube_contains(&p, 1e-9).unwrap().is_member();
        assert!(!tet || ell, "{p:?}");
        assert!(!ell || cub, "{p:?}");
    }
}

#[test]
fn tetrahedron_facets_agree_with_vertex_form() {
    let h = tetrahedron_facets();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..2000 {
        let p: Point3 = [
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        ];
        let by_h = h_contains(&h, &p, 1e-9).unwrap().is_member();
        let by_t = tetrahedron_contains(&triple(p), 1e-9).unwrap().is_member();
        assert_eq!(by_h, by_t, "{p:?}");
    }
}

fn brute_force_hull_check(points: &[Point3]) {
    let hull = convex_hull_3d(points).unwrap();
    for f in &hull.facets.facets {
        for p in points {
            assert!(dot(&f.normal, p) <= f.offset + 1e-9);
        }
        let touching = points
            .iter()
            .filter(|p| (dot(&f.normal, p) - f.offset).abs() <= 1e-9)
            .count();
        assert!(touching >= 3);
    }
    for p in points {
        assert!(v_contains(&hull.vertices, p, 1e-9).unwrap());
    }
    for v in &hull.vertices.vertices {
        assert!(points.iter().any(|p| p == v));
    }
    assert!(hull.boundary_mesh().unwrap().is_watertight());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_is_sound_on_random_clouds(pts in prop::collection::vec(
        prop::array::uniform3(-1.0f64..1.0), 8..60)) {
        brute_force_hull_check(&pts);
    }

    #[test]
    fn h_and_v_forms_agree(pts in prop::collection::vec(
        prop::array::uniform3(-1.0f64..1.0), 8..40),
        probe in prop::array::uniform3(-1.2f64..1.2)) {
        let hull = convex_hull_3d(&pts).unwrap();
        let by_h = h_contains(&hull.facets, &probe, 1e-7).unwrap();
        let by_v = v_contains(&hull.vertices, &probe, 1e-7).unwrap();
        if by_h.classification != Classification::Boundary {
            prop_assert_eq!(by_h.is_member(), by_v);
        }
    }

    #[test]
    fn support_is_monotone_and_dominates_tetrahedron(d in prop::array::uniform3(-1.0f64..1.0)) {
        prop_assume!(normalize(&d).is_some());
        let u = normalize(&d).unwrap();
        let tet = convex_hull_3d(&raffleplex::corrgeom::TETRAHEDRON_VERTICES).unwrap();
        let spin1 = raffle_polytope(Spin::from_twice(2).unwrap(), HullMethod::ExactEnumeration).unwrap();
        let h_tet = support_function(&tet.vertices, &u).unwrap();
        let h_one = support_function(&spin1.vertices, &u).unwrap();
        let h_ell = elliptope_support(&u, 1e-6).unwrap();
        prop_assert!(h_tet <= h_one + 1e-9);
        prop_assert!(h_one <= h_ell.value + 1e-9);
        prop_assert!(h_ell.value <= u.iter().map(|x| x.abs()).sum::<f64>() + 1e-9);
        prop_assert!((dot(&u, &h_ell.point) - h_ell.value).abs() < 1e-12);
    }

    #[test]
    fn chsh_tracks_win_probability(raw in prop::array::uniform16(0.0f64..1.0)) {
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let cell = &raw[4 * (2 * a + b)..4 * (2 * a + b) + 4];
                let total: f64 = cell.iter().sum::<f64>() + 1e-9;
                for x in 0..2 {
                    for y in 0..2 {
                        p[a][b][x][y] = (cell[2 * x + y] + 1e-9 / 4.0) / total;
                    }
                }
            }
        }
        let beh = Behavior::new(p).unwrap();
        prop_assert!((chsh_value(&beh) - (8.0 * game_win_probability(&beh) - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn classical_mixtures_obey_the_bound(w in prop::collection::vec(0.0f64..1.0, 16)) {
        let total: f64 = w.iter().sum::<f64>() + 1e-12;
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for (d, wi) in DeterministicStrategy::all().iter().zip(&w) {
            let t = *behavior_from_deterministic(d).table();
            for a in 0..2 { for b in 0..2 { for x in 0..2 { for y in 0..2 {
                p[a][b][x][y] += wi / total * t[a][b][x][y];
            }}}}
        }
        if let Ok(beh) = Behavior::new(p) {
            prop_assert!(chsh_value(&beh).abs() <= 2.0 + 1e-9);
            prop_assert!(no_signaling_check(&beh, 1e-9));
        }
    }
}

#[test]
fn quantum_grid_obeys_tsirelson() {
    let n = 12;
    let step = 2.0 * PI / n as f64;
    let mut best = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let beh =
                    quantum_behavior([0.0, i as f64 * step], [j as f64 * step, k as f64 * step])
                        .unwrap();
                let s = chsh_value(&beh);
                assert!(s.abs() <= 2.0 * 2f64.sqrt() + 1e-9);
                assert!(no_signaling_check(&beh, 1e-9));
                best = best.max(s.abs());
            }
        }
    }
    assert!(best > 2.0);
}

#[test]
fn raffle_triples_stay_in_the_elliptope() {
    for s in spins() {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + s.twice() as u64);
        for _ in 0..100_000 {
            let r = sample_admissible_raffle(s, &mut rng);
            let t = raffle_correlation(&r).unwrap();
            assert!(elliptope_value(&t) >= -1e-9, "{s} {t:?}");
        }
    }
}

#[test]
fn sampled_polytope_lies_inside_exact_one() {
    for s in spins() {
        let exact = raffle_polytope(s, HullMethod::ExactEnumeration).unwrap();
        let sampled = raffle_polytope(
            s,
            HullMethod::Sampling {
                samples: 5000,
                seed: 3,
            },
        )
        .unwrap();
        for v in &sampled.vertices.vertices {
            assert!(
                h_contains(&exact.facets, v, 1e-9).unwrap().is_member(),
                "{s} {v:?}"
            );
        }
    }
}

/// Independent LP over all tickets: minimize the Mermin sum subject to
/// uniform marginals. Built here without the raffle module's own LP.
fn mermin_minimum_by_lp(s: Spin) -> f64 {
    let tickets = enumerate_tickets(s);
    let vals = s.doubled_outcomes();
    let k = vals.len() as f64;
    let mut a = vec![vec![1.0; tickets.len()]];
    let mut b = vec![1.0];
    for setting in 0..3 {
        for &v in &vals[..vals.len() - 1] {
            a.push(
                tickets
                    .iter()
                    .map(|t| f64::from(u8::from(t.0[setting] == v)))
                    .collect(),
            );
            b.push(1.0 / k);
        }
    }
    let c: Vec<f64> = tickets
        .iter()
        .map(|t| ticket_image(t, s).iter().sum())
        .collect();
    match (StandardLp { a, b, c }).solve(1e-9).unwrap() {
        LpOutcome::Optimal { value, .. } => value,
        other => panic!("{other:?}"),
    }
}

#[test]
fn mermin_minimum_follows_parity() {
    // Sum of three half-odd values is never zero, so half-integer spins stop
    // short of -3/2: the bound is (1/4 - 3σ²)/(2σ²) with σ² = s(s+1)/3.
    for s in spins() {
        let lp = mermin_minimum_by_lp(s);
        let hull = raffle_polytope(s, HullMethod::ExactEnumeration).unwrap();
        let from_hull = hull
            .vertices
            .vertices
            .iter()
            .map(|v| v[0] + v[1] + v[2])
            .fold(f64::INFINITY, f64::min);
        let var = s.value() * (s.value() + 1.0) / 3.0;
        let expected = if s.twice() % 2 == 1 {
            (0.25 - 3.0 * var) / (2.0 * var)
        } else {
            -1.5
        };
        assert!((lp - expected).abs() < 1e-9, "{s}: {lp} vs {expected}");
        assert!(
            (from_hull - expected).abs() < 1e-9,
            "{s}: {from_hull} vs {expected}"
        );
    }
}

#[test]
fn raffle_polytope_vertices_are_ticket_mixtures_in_the_elliptope() {
    for s in spins() {
        let hull = raffle_polytope(s, HullMethod::ExactEnumeration).unwrap();
        for v in &hull.vertices.vertices {
            assert!(elliptope_value(&triple(*v)) >= -1e-9);
        }
        for d in lattice_directions() {
            let h = support_function(&hull.vertices, &d).unwrap();
            assert!(h <= elliptope_support(&d, 1e-6).unwrap().value + 1e-9);
        }
    }
}

#[test]
fn born_rule_matches_operator_expectation() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for s in spins() {
        for _ in 0..50 {
            let (a, b) = (random_direction(&mut rng), random_direction(&mut rng));
            let dist = joint_outcome_distribution(s, &a, &b).unwrap();
            assert!((dist.total() - 1.0).abs() < 1e-9);
            let direct = singlet_product_expectation(s, &a, &b);
            assert!((dist.product_expectation() - direct).abs() < 1e-9);
            let k = dist.marginal_alice().len() as f64;
            for m in dist.marginal_alice().into_iter().chain(dist.marginal_bob()) {
                assert!((m - 1.0 / k).abs() < 1e-9);
            }
            let tau = quantum_correlation(s, &a, &b).unwrap();
            assert!((tau - a.dot(&b)).abs() < 1e-9);
        }
    }
}

#[test]
fn transition_probabilities_are_complete() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for s in spins() {
        for _ in 0..20 {
            let (n1, n2) = (random_direction(&mut rng), random_direction(&mut rng));
            for &m in &s.doubled_outcomes() {
                let psi = spin_eigenstate(s, &n1, m).unwrap();
                let total: f64 = s
                    .doubled_outcomes()
                    .iter()
                    .map(|&m2| {
                        transition_probability(&psi, &spin_eigenstate(s, &n2, m2).unwrap()).unwrap()
                    })
                    .sum();
                assert!((total - 1.0).abs() < 1e-9);
            }
        }
    }
}
