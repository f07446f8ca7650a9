//! Randomized invariants over the seeded desk-scale suite: matching engine
//! against exhaustive enumeration, dual integrality, lattice laws, payment
//! structure of produced imputations, serialization round-trips.

mod common;

use common::{random_game, suite_rng};
use lexicore::classify::{classify, Label};
use lexicore::game::{AssignmentGame, Imputation, Vertex};
use lexicore::mechanism::{run, run_from};
use lexicore::oracle;
use lexicore::profile::Mode;
use lexicore::rational::Rational;
use lexicore::solutions::{
    check_core, extreme_imputations, initial_core_imputation, is_core, lattice_join, lattice_meet,
};
use lexicore::{max_weight_matching, total_worth, worth, WorthQuery};
use rand::Rng;

#[test]
fn matching_equals_exhaustive_maximum() {
    let mut rng = suite_rng(100);
    for _ in 0..150 {
        let g = random_game(&mut rng);
        if g.edges().len() > 12 {
            continue;
        }
        let (matching, dual) = max_weight_matching(&g);
        let best = oracle::enumerate_matchings(&g)
            .unwrap()
            .into_iter()
            .map(|m| m.weight)
            .max()
            .unwrap();
        assert_eq!(matching.weight, best, "{}", g.to_json());
        assert_eq!(dual.total(), best);
        // integer weights give an integral dual
        assert!(dual.u.iter().chain(dual.v.iter()).all(|x| x.is_integer()));
    }
}

#[test]
fn worth_is_monotone_under_removal() {
    let mut rng = suite_rng(101);
    for _ in 0..50 {
        let g = random_game(&mut rng);
        let full = total_worth(&g);
        for e in g.edges() {
            assert!(worth(&g, &WorthQuery::without_edge(e.u, e.v)) <= full);
        }
        for i in 0..g.left_size() {
            assert!(worth(&g, &WorthQuery::without_vertex(Vertex::u(i))) <= full);
        }
    }
}

#[test]
fn initial_imputation_is_always_core() {
    let mut rng = suite_rng(102);
    for _ in 0..150 {
        let g = random_game(&mut rng);
        let start = initial_core_imputation(&g);
        assert!(check_core(&g, &start).unwrap().is_core, "{}", g.to_json());
    }
}

#[test]
fn lattice_laws_on_random_triples() {
    let mut rng = suite_rng(103);
    for _ in 0..60 {
        let g = random_game(&mut rng);
        let (u_opt, v_opt) = extreme_imputations(&g);
        let (mid, _) = run(&g, Mode::Leximin).unwrap();
        let triple = [u_opt, mid, v_opt];
        for a in &triple {
            for b in &triple {
                let meet = lattice_meet(&g, a, b).unwrap();
                let join = lattice_join(&g, a, b).unwrap();
                assert!(is_core(&g, &meet));
                assert!(is_core(&g, &join));
                // absorption
                assert_eq!(&lattice_meet(&g, a, &join).unwrap(), a);
                assert_eq!(&lattice_join(&g, a, &meet).unwrap(), a);
                for c in &triple {
                    // distributivity: meet(a, join(b,c)) == join(meet(a,b), meet(a,c))
                    let lhs = lattice_meet(&g, a, &lattice_join(&g, b, c).unwrap()).unwrap();
                    let rhs = lattice_join(
                        &g,
                        &lattice_meet(&g, a, b).unwrap(),
                        &lattice_meet(&g, a, c).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(lhs, rhs, "{}", g.to_json());
                }
            }
        }
    }
}

/// Every imputation the artifact produces pays non-essential vertices zero
/// and keeps essential and viable edges tight.
#[test]
fn produced_imputations_respect_classification() {
    let mut rng = suite_rng(104);
    for _ in 0..80 {
        let g = random_game(&mut rng);
        let c = classify(&g);
        let (u_opt, v_opt) = extreme_imputations(&g);
        let mut produced = vec![initial_core_imputation(&g), u_opt, v_opt];
        produced.push(run(&g, Mode::Leximin).unwrap().0);
        produced.push(run(&g, Mode::Leximax).unwrap().0);
        for imp in &produced {
            for (i, l) in c.u_labels.iter().enumerate() {
                if *l != Label::Essential {
                    assert!(
                        imp.u[i].is_zero(),
                        "paid non-essential u{} in {}",
                        i,
                        g.to_json()
                    );
                }
            }
            for (j, l) in c.v_labels.iter().enumerate() {
                if *l != Label::Essential {
                    assert!(
                        imp.v[j].is_zero(),
                        "paid non-essential v{} in {}",
                        j,
                        g.to_json()
                    );
                }
            }
            for (k, e) in g.edges().iter().enumerate() {
                if c.edge_labels[k] != Label::Subpar {
                    assert_eq!(
                        &imp.u[e.u] + &imp.v[e.v],
                        e.weight,
                        "always-tight edge loose in {}",
                        g.to_json()
                    );
                }
            }
        }
    }
}

/// The U-optimal imputation dominates every other produced core point
/// coordinatewise on U; the V-optimal does the same on V.
#[test]
fn extremes_dominate_coordinatewise() {
    let mut rng = suite_rng(108);
    for _ in 0..80 {
        let g = random_game(&mut rng);
        let (u_opt, v_opt) = extreme_imputations(&g);
        let mut points = vec![initial_core_imputation(&g)];
        points.push(run(&g, Mode::Leximin).unwrap().0);
        points.push(run(&g, Mode::Leximax).unwrap().0);
        points.push(v_opt.clone());
        points.push(u_opt.clone());
        for p in &points {
            for i in 0..g.left_size() {
                assert!(
                    p.u[i] <= u_opt.u[i],
                    "u{} beats the U-optimal in {}",
                    i,
                    g.to_json()
                );
            }
            for j in 0..g.right_size() {
                assert!(
                    p.v[j] <= v_opt.v[j],
                    "v{} beats the V-optimal in {}",
                    j,
                    g.to_json()
                );
            }
        }
    }
}

/// Midpoints of the two extremes start components rotating in opposite
/// directions, reaching the merge paths the solver's own dual never takes;
/// the optimum must not depend on any of it.
#[test]
fn midpoint_starts_reach_the_same_optimum() {
    let mut rng = suite_rng(106);
    for _ in 0..100 {
        let g = random_game(&mut rng);
        let (u_opt, v_opt) = extreme_imputations(&g);
        let mid = Imputation {
            u: u_opt
                .u
                .iter()
                .zip(&v_opt.u)
                .map(|(x, y)| (x + y).halve())
                .collect(),
            v: u_opt
                .v
                .iter()
                .zip(&v_opt.v)
                .map(|(x, y)| (x + y).halve())
                .collect(),
        };
        for mode in [Mode::Leximin, Mode::Leximax] {
            let (baseline, _) = run(&g, mode).unwrap();
            let (from_mid, _) = run_from(&g, mode, mid.clone()).unwrap();
            assert_eq!(baseline, from_mid, "{}", g.to_json());
        }
    }
}

/// Any core imputation is a valid starting point, interior convex
/// combinations included; the run always lands on the same optimum.
#[test]
fn interior_starts_reach_the_same_optimum() {
    let mut rng = suite_rng(109);
    for _ in 0..100 {
        let g = random_game(&mut rng);
        let (u_opt, v_opt) = extreme_imputations(&g);
        let (lexmin, _) = run(&g, Mode::Leximin).unwrap();
        let (lexmax, _) = run(&g, Mode::Leximax).unwrap();
        let mix = |a: &Imputation, b: &Imputation, num: i64, den: i64| {
            let lam = Rational::new(num.into(), den.into());
            let mu = &Rational::one() - &lam;
            Imputation {
                u: a.u.iter().zip(&b.u).map(|(x, y)| &(x * &lam) + &(y * &mu)).collect(),
                v: a.v.iter().zip(&b.v).map(|(x, y)| &(x * &lam) + &(y * &mu)).collect(),
            }
        };
        let starts = [
            mix(&u_opt, &v_opt, 1, 3),
            mix(&u_opt, &v_opt, 3, 4),
            mix(&lexmin, &u_opt, 1, 7),
            mix(&lexmax, &v_opt, 2, 3),
        ];
        for s in &starts {
            assert!(is_core(&g, s));
            assert_eq!(run_from(&g, Mode::Leximin, s.clone()).unwrap().0, lexmin);
            assert_eq!(run_from(&g, Mode::Leximax, s.clone()).unwrap().0, lexmax);
        }
    }
}

/// Fractional weights flow through the mechanism exactly; the oracle
/// rescales to integers internally and must agree.
#[test]
fn fractional_weights_match_oracle() {
    let mut rng = suite_rng(107);
    for _ in 0..150 {
        let g = loop {
            let nu = rng.random_range(1..=3);
            let nv = rng.random_range(1..=3);
            let mut edges = Vec::new();
            for i in 0..nu {
                for j in 0..nv {
                    if rng.random_bool(0.7) {
                        let p = rng.random_range(1..=6i64);
                        let q = rng.random_range(1..=3i64);
                        edges.push(lexicore::Edge {
                            u: i,
                            v: j,
                            weight: Rational::parse(&format!("{}/{}", p, q)).unwrap(),
                        });
                    }
                }
            }
            if !edges.is_empty() {
                break AssignmentGame::new(nu, nv, edges, None).unwrap();
            }
        };
        for mode in [Mode::Leximin, Mode::Leximax] {
            let (result, _) = run(&g, mode).unwrap();
            let want = match mode {
                Mode::Leximin => oracle::oracle_leximin(&g),
                Mode::Leximax => oracle::oracle_leximax(&g),
            };
            match want {
                Ok(w) => assert_eq!(result, w, "{}", g.to_json()),
                Err(oracle::OracleError::GuardExceeded(_)) => {}
                Err(e) => panic!("oracle internal error: {}", e),
            }
        }
    }
}

#[test]
fn serialization_round_trips() {
    let mut rng = suite_rng(105);
    for _ in 0..100 {
        let g = random_game(&mut rng);
        let text = g.to_json();
        let back = AssignmentGame::parse(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), text);
    }
    // imputations round-trip too, including fractional entries
    let imp = Imputation {
        u: vec![Rational::parse("7/2").unwrap()],
        v: vec![Rational::from_int(3)],
    };
    assert_eq!(Imputation::parse(&imp.to_json()).unwrap(), imp);
}

#[test]
fn public_types_are_send_and_sync() {
    fn check<T: Send + Sync>() {}
    check::<AssignmentGame>();
    check::<Imputation>();
    check::<Rational>();
    check::<lexicore::Classification>();
    check::<lexicore::Matching>();
    check::<lexicore::Trace>();
}
