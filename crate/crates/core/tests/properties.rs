use num_complex::Complex64;
use proptest::prelude::*;

use ewfs::harness::{read_log, write_log};
use ewfs::inequality::{chsh_max_variant, local_polytope_feasible, BehaviorTable, ExpectationMatrix};
use ewfs::models::{HiddenState, Outcome, RunRecord, ToyHiddenState};
use ewfs::qcore::{born_probabilities, spin_measurement_basis, tensor, Projector, StateVector, Unitary};
use ewfs::scenario::{sample_settings, ScenarioSpec, SettingsSampler};
use ewfs::strategy::Strategy;
// proptest's Strategy trait clashes with the crate's strategy type
use proptest::strategy::Strategy as Strategy2;

fn state(dim_log2: usize) -> impl Strategy2<Value = StateVector> {
    let n = 1 << dim_log2;
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(move |v| {
            let amps = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
            StateVector::new(amps, vec![2; dim_log2]).unwrap()
        })
}

fn pr_box(variant: u8) -> [[[[f64; 2]; 2]; 2]; 2] {
    // correlated except on one setting pair, optionally globally flipped
    let odd = ((variant >> 1) / 2 + 1, (variant >> 1) % 2 + 1);
    let flip = variant & 1 == 1;
    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 1..=2u8 {
        for y in 1..=2u8 {
            let anti = ((x, y) == odd) != flip;
            for a in 0..2 {
                for b in 0..2 {
                    p[usize::from(x) - 1][usize::from(y) - 1][a][b] = if (a != b) == anti { 0.5 } else { 0.0 };
                }
            }
        }
    }
    p
}

fn deterministic(s: Strategy) -> [[[[f64; 2]; 2]; 2]; 2] {
    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 1..=2u8 {
        for y in 1..=2u8 {
            let a = usize::from(s.a(x) == -1);
            let b = usize::from(s.b(y) == -1);
            p[usize::from(x) - 1][usize::from(y) - 1][a][b] = 1.0;
        }
    }
    p
}

/// Convex mixture of the 8 PR boxes and 16 deterministic boxes.
fn ns_table() -> impl Strategy2<Value = BehaviorTable> {
    prop::collection::vec(0.0f64..1.0, 24).prop_map(|w| {
        let boxes: Vec<_> = (0..8).map(pr_box).chain(Strategy::all().map(deterministic)).collect();
        // sparsify so that some mixtures stay local
        let w: Vec<f64> = w.iter().map(|v| v.powi(6)).collect();
        let total: f64 = w.iter().sum::<f64>().max(1e-12);
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for (wi, b) in w.iter().zip(&boxes) {
            for x in 0..2 {
                for y in 0..2 {
                    for a in 0..2 {
                        for bb in 0..2 {
                            p[x][y][a][bb] += wi / total * b[x][y][a][bb];
                        }
                    }
                }
            }
        }
        BehaviorTable::from_probabilities(p).unwrap()
    })
}

proptest! {
    #[test]
    fn born_probabilities_sum_to_one(s in state(2), alpha in -4.0f64..4.0, beta in -4.0f64..4.0) {
        let lift = |angle: f64, t: usize| -> Vec<Projector> {
            spin_measurement_basis(angle).iter().map(|p| p.lift(&[2, 2], &[t]).unwrap()).collect()
        };
        let (pa, pb) = (lift(alpha, 0), lift(beta, 1));
        let joint: Vec<Projector> = pa
            .iter()
            .flat_map(|p| pb.iter().map(move |q| Projector::new(p.matrix() * q.matrix()).unwrap()))
            .collect();
        let probs = born_probabilities(&s, &joint).unwrap();
        prop_assert!(probs.iter().all(|&p| p >= -1e-12));
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unitaries_preserve_norm(s in state(3), angle in -7.0f64..7.0, target in 0usize..3, control in 0usize..3) {
        let r = Unitary::rotation_y(angle).lift(&[2, 2, 2], &[target]).unwrap();
        let out = s.apply(&r).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        if control != target {
            let c = Unitary::cnot().lift(&[2, 2, 2], &[control, target]).unwrap();
            prop_assert!((out.apply(&c).unwrap().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tensor_is_associative(a in state(1), b in state(1), c in state(2)) {
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        prop_assert_eq!(left.dims(), right.dims());
        for (u, v) in left.amplitudes().iter().zip(right.amplitudes()) {
            prop_assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn polytope_membership_matches_chsh(t in ns_table()) {
        let v = local_polytope_feasible(&t).unwrap();
        let (s, _) = chsh_max_variant(&ExpectationMatrix::from_table(&t)).unwrap();
        prop_assert_eq!(v.member, s <= 2.0 + 1e-7, "S = {}, residual = {}", s, v.residual);
    }

    #[test]
    fn lambda_tags_round_trip(id in 0u8..16, t1 in 0.0f64..3.14159, t2 in 0.0f64..3.14159, kind in 0u8..3) {
        let h = match kind {
            0 => HiddenState::None,
            1 => HiddenState::Strategy(Strategy::new(id).unwrap()),
            _ => HiddenState::Theta(ToyHiddenState { theta1: t1, theta2: t2 }),
        };
        prop_assert_eq!(HiddenState::parse_tag(&h.tag()).unwrap(), h);
    }

    #[test]
    fn logs_round_trip(rows in prop::collection::vec((1u8..=2, 1u8..=2, any::<[bool; 4]>(), 0u8..3, 0u8..16), 0..40)) {
        let o = |b: bool| if b { Outcome::Plus } else { Outcome::Minus };
        let recs: Vec<RunRecord> = rows
            .into_iter()
            .enumerate()
            .map(|(i, (x, y, v, defined, id))| RunRecord {
                trial: i as u64,
                x,
                y,
                a: o(v[0]),
                b: o(v[1]),
                c: (defined > 0).then_some(o(v[2])),
                d: (defined > 1).then_some(o(v[3])),
                lambda: HiddenState::Strategy(Strategy::new(id).unwrap()),
            })
            .collect();
        let mut buf = Vec::new();
        write_log(&mut buf, &recs).unwrap();
        prop_assert_eq!(read_log(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn settings_are_a_function_of_seed_and_index(seed in any::<u64>(), idx in 0u64..1000) {
        let spec = ScenarioSpec::ewfs(1000);
        let s = SettingsSampler::UniformIid { seed };
        let first = sample_settings(&spec, &s, idx).unwrap();
        prop_assert_eq!(first, sample_settings(&spec, &s, idx).unwrap());
        prop_assert!((1..=2).contains(&first.0) && (1..=2).contains(&first.1));
    }
}
