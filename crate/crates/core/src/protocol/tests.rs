use super::*;
use crate::capacity::test_support::random_channel;
use crate::capacity::ExponentOptions;
use crate::channel::{classical_channel, dephasing, depolarizing, identity, replacement};
use crate::linalg::kron;
use crate::linalg::random::{random_density, seeded_rng};
use crate::scalar::cre;

fn trace_distance(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    let d = Hermitian::from_hermitian_part(&(a - b));
    d.eigenvalues().iter().map(|x| x.abs()).sum::<f64>() / 2.0
}

/// One round, no feedback, message `m` prepared in `|m⟩` and sent through a
/// `d`-dimensional channel by an encoder that forwards `A′_0` as `A_1`.
fn direct_protocol(l: usize, d_in: usize, d_out: usize, encoder: KrausChannel<f64>) -> FeedbackProtocol {
    FeedbackProtocol {
        n_rounds: 1,
        message_count: l,
        channel_input_dim: d_in,
        channel_output_dim: d_out,
        feedback_dims: vec![1],
        alice_memory_dims: vec![l, encoder.d_out() / d_in],
        bob_memory_dims: vec![1],
        initial_alice: (0..l).map(|m| DensityOperator::basis(l, m)).collect(),
        initial_bob: Ensemble::new(vec![1.0], vec![DensityOperator::basis(1, 0)]).unwrap(),
        encoders: vec![encoder],
        decoders: vec![],
        final_povm: None,
        separable_inputs: false,
    }
}

/// `|m⟩ ↦ |m mod d⟩`.
fn modular_encoder(l: usize, d: usize) -> KrausChannel<f64> {
    let ops = (0..l)
        .map(|m| {
            let mut k = Matrix::zeros(d, l);
            k[(m % d, m)] = cre(1.0);
            k
        })
        .collect();
    KrausChannel::new(ops).unwrap()
}

#[test]
fn orthogonal_messages_through_identity_are_perfect() {
    let p = direct_protocol(3, 3, 3, identity(3));
    let t = simulate(&p, &identity(3)).unwrap();
    let fin = t.final_state();
    assert_eq!(fin.stage, Stage::Transmitted);
    assert!((success_probability(fin, &Povm::computational(3)).unwrap() - 1.0).abs() < 1e-12);
    let pgm = pgm_decoder(&fin.bob_states().unwrap()).unwrap();
    assert!((success_probability(fin, &pgm).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn replacement_hides_the_message() {
    let mut rng = seeded_rng(7);
    let omega = DensityOperator::from_hermitian(random_density(2, 2, &mut rng), vec![2]).unwrap();
    let ch = replacement(&omega, 2).unwrap();
    for (n, l) in [(1, 2), (2, 3), (3, 4)] {
        let p = random_protocol(&ch, n, l, ProtocolDims::default(), 11 + n as u64).unwrap();
        let t = simulate(&p, &ch).unwrap();
        let bob = t.final_state().bob_states().unwrap();
        let mut mean = Matrix::zeros(bob[0].dim(), bob[0].dim());
        for s in &bob {
            mean = &mean + &s.matrix().scale(1.0 / l as f64);
        }
        for s in &bob {
            assert!(trace_distance(s.matrix(), &mean) < 1e-9);
        }
        for povm in [pgm_decoder(&bob).unwrap(), basis_decoder(&bob).unwrap()] {
            let ps = success_probability(t.final_state(), &povm).unwrap();
            assert!((ps - 1.0 / l as f64).abs() < 1e-9, "{ps}");
        }
    }
}

/// Applies `Σ K ρ K†` for explicit full-space Kraus operators.
fn apply_full(ops: &[Matrix<f64>], rho: &Matrix<f64>) -> Matrix<f64> {
    let n = ops[0].rows();
    let mut acc = Matrix::zeros(n, n);
    for k in ops {
        acc = &acc + &(&(k * rho) * &k.adjoint());
    }
    acc
}

fn embed(ops: &[Matrix<f64>], left: usize, right: usize) -> Vec<Matrix<f64>> {
    ops.iter()
        .map(|k| kron(&kron(&Matrix::identity(left), k), &Matrix::identity(right)))
        .collect()
}

#[test]
fn two_rounds_match_hand_composition() {
    let ch = dephasing(0.3).unwrap();
    let dims = ProtocolDims {
        alice_memory: 2,
        bob_memory: 2,
        feedback: 2,
    };
    let p = random_protocol(&ch, 2, 3, dims, 5).unwrap();
    let t = simulate(&p, &ch).unwrap();
    let fin = t.final_state();
    let dephase_x: Vec<Matrix<f64>> = (0..2)
        .map(|x| {
            kron(
                &kron(&Matrix::identity(2), &Matrix::basis_projector(2, x)),
                &Matrix::identity(2),
            )
        })
        .collect();
    for m in 0..3 {
        // Bob starts in Σ p_x |x⟩⟨x| ⊗ ρ_x.
        let mut bob_cq = Matrix::zeros(4, 4);
        for (x, (px, s)) in p.initial_bob.probs().iter().zip(p.initial_bob.states()).enumerate() {
            bob_cq = &bob_cq + &kron(&Matrix::basis_projector(2, x), s.matrix()).scale(*px);
        }
        let mut rho = kron(p.initial_alice[m].matrix(), &bob_cq);
        rho = apply_full(&embed(p.encoders[0].kraus_ops(), 1, 2), &rho);
        rho = apply_full(&embed(ch.kraus_ops(), 2, 2), &rho);
        rho = apply_full(&embed(p.decoders[0].kraus_ops(), 2, 1), &rho);
        rho = apply_full(&dephase_x, &rho);
        rho = apply_full(&embed(p.encoders[1].kraus_ops(), 1, 2), &rho);
        rho = apply_full(&embed(ch.kraus_ops(), 2, 2), &rho);
        assert!(rho.max_abs_diff(fin.states[m].matrix()) < 1e-9);
    }
}

#[test]
fn uniform_povm_gives_one_over_l() {
    let mut rng = seeded_rng(3);
    let ch = random_channel(2, 2, 2, &mut rng);
    let p = random_protocol(&ch, 2, 4, ProtocolDims::default(), 9).unwrap();
    let t = simulate(&p, &ch).unwrap();
    let d = t.final_state().bob_states().unwrap()[0].dim();
    let e = Hermitian::from_hermitian_part(&Matrix::identity(d).scale(0.25));
    let povm = Povm::new(vec![e; 4]).unwrap();
    assert!((success_probability(t.final_state(), &povm).unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn decoder_sanity() {
    let same = vec![DensityOperator::<f64>::maximally_mixed(2); 2];
    let h = helstrom_decoder(&same).unwrap();
    assert!((success_from_states(&same, &h).unwrap() - 0.5).abs() < 1e-12);
    let orth: Vec<DensityOperator<f64>> = (0..3).map(|i| DensityOperator::basis(3, i)).collect();
    assert!((success_from_states(&orth, &pgm_decoder(&orth).unwrap()).unwrap() - 1.0).abs() < 1e-12);
    assert!(helstrom_decoder(&orth).is_err());

    let mut rng = seeded_rng(21);
    for _ in 0..20 {
        let s: Vec<DensityOperator<f64>> = (0..2)
            .map(|_| DensityOperator::from_hermitian(random_density(2, 2, &mut rng), vec![2]).unwrap())
            .collect();
        let ph = success_from_states(&s, &helstrom_decoder(&s).unwrap()).unwrap();
        let pp = success_from_states(&s, &pgm_decoder(&s).unwrap()).unwrap();
        let pb = success_from_states(&s, &basis_decoder(&s).unwrap()).unwrap();
        assert!(pp <= ph + 1e-9 && pb <= ph + 1e-9);
        let closed = 0.5 + trace_distance(s[0].matrix(), s[1].matrix()) / 2.0;
        assert!((ph - closed).abs() < 1e-10);
    }
}

#[test]
fn pgm_on_rank_deficient_average_is_complete() {
    let s = vec![DensityOperator::<f64>::basis(3, 0), DensityOperator::basis(3, 0)];
    let povm = pgm_decoder(&s).unwrap();
    let mut sum = Matrix::zeros(3, 3);
    for e in povm.elements() {
        sum = &sum + e.matrix();
        assert!(e.eigenvalues()[0] > -1e-12);
    }
    assert!(sum.approx_eq(&Matrix::identity(3), 1e-12));
}

#[test]
fn replacement_bound_is_tight() {
    let ch = replacement(&DensityOperator::maximally_mixed(2), 2).unwrap();
    let opts = ExponentOptions::default();
    for (n, l) in [(1, 2), (1, 4), (2, 2), (2, 4)] {
        let p = random_protocol(&ch, n, l, ProtocolDims::default(), 100 + l as u64).unwrap();
        let r = verify_strong_converse_bound(&p, &ch, DecoderStrategy::Best, &opts).unwrap();
        assert!((r.p_succ - 1.0 / l as f64).abs() < 1e-6);
        assert!((r.bound - 1.0 / l as f64).abs() < 1e-6, "{}", r.bound);
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn noiseless_bit_with_four_messages() {
    let ch = classical_channel(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let p = direct_protocol(4, 2, 2, modular_encoder(4, 2));
    let opts = ExponentOptions {
        refine_iterations: 0,
        extend: false,
        ..Default::default()
    };
    let r = verify_strong_converse_bound(&p, &ch, DecoderStrategy::Best, &opts).unwrap();
    assert!((r.p_succ - 0.5).abs() < 1e-12);
    assert!(r.bound >= 0.5 && r.bound <= 2f64.powf(-0.96) + 1e-12, "{}", r.bound);
    assert!(r.bound_holds && r.margin >= 0.0);
    assert!(r.to_csv().starts_with("round,quantity,value\n"));
}

#[test]
fn depolarizing_protocols_respect_the_bound() {
    let ch = depolarizing(2, 0.25).unwrap();
    let opts = ExponentOptions {
        alphas: vec![1.25, 1.5, 2.0, 4.0],
        refine_iterations: 0,
        extend: false,
        ..Default::default()
    };
    let curve = crate::capacity::strong_converse_exponent(&ch, (3f64).log2() / 2.0, &opts).unwrap();
    for seed in 0..3 {
        let p = random_protocol(&ch, 2, 3, ProtocolDims::default(), seed).unwrap();
        let r = verify_strong_converse_bound_with(&p, &ch, DecoderStrategy::Best, &curve).unwrap();
        assert!(r.passed && r.margin >= 0.0, "{r:?}");
    }
}

#[test]
fn non_eb_channel_needs_separable_flag() {
    let ch = identity(2);
    let mut p = direct_protocol(2, 2, 2, modular_encoder(2, 2));
    let opts = ExponentOptions {
        alphas: vec![2.0],
        refine_iterations: 0,
        extend: false,
        ..Default::default()
    };
    assert_eq!(
        verify_strong_converse_bound(&p, &ch, DecoderStrategy::Best, &opts).unwrap_err(),
        Error::NotEntanglementBreaking
    );
    p.separable_inputs = true;
    let r = verify_strong_converse_bound(&p, &ch, DecoderStrategy::Helstrom, &opts).unwrap();
    assert!((r.p_succ - 1.0).abs() < 1e-12 && r.bound_holds);
}

/// Encoder `|m⟩ ↦ |m⟩_{A′_1}` with `A′_1 A_1` in a Bell state when `m = 0`.
fn bell_encoder() -> KrausChannel<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut k0 = Matrix::zeros(4, 2);
    k0[(0, 0)] = cre(s);
    k0[(3, 0)] = cre(s);
    let mut k1 = Matrix::zeros(4, 2);
    k1[(1, 1)] = cre(1.0);
    KrausChannel::new(vec![k0, k1]).unwrap()
}

#[test]
fn separability_invariant_and_control() {
    let eb = depolarizing(2, 0.25).unwrap();
    let p = random_protocol(&eb, 2, 3, ProtocolDims::default(), 4).unwrap();
    let r = verify_separability(&simulate(&p, &eb).unwrap(), 1e-9).unwrap();
    assert!(r.all_ppt, "{}", r.min_eigenvalue);

    let omega = DensityOperator::maximally_mixed(2);
    let rep = replacement(&omega, 2).unwrap();
    let p = random_protocol(&rep, 2, 2, ProtocolDims::default(), 4).unwrap();
    assert!(verify_separability(&simulate(&p, &rep).unwrap(), 1e-9).unwrap().all_ppt);

    let p = direct_protocol(2, 2, 2, bell_encoder());
    let t = simulate(&p, &identity(2)).unwrap();
    let r = verify_separability(&t, 1e-9).unwrap();
    assert!(!r.all_ppt);
    assert!((r.min_eigenvalue + 0.5).abs() < 1e-9);
    let bad = r.entries.iter().find(|e| !e.ppt).unwrap();
    assert_eq!((bad.round, bad.stage, bad.message), (1, Stage::Transmitted, 0));
}

#[test]
fn chain_on_replacement_and_noiseless_bit() {
    let rep = replacement(&DensityOperator::maximally_mixed(2), 2).unwrap();
    let p = random_protocol(&rep, 3, 2, ProtocolDims::default(), 8).unwrap();
    let c = weak_converse_chain(&simulate(&p, &rep).unwrap(), 0.0).unwrap();
    assert!(c.passed);
    assert!(c
        .rounds
        .iter()
        .all(|r| r.mi_output.abs() < 1e-9 && r.mi_memory.abs() < 1e-9));

    let bit = classical_channel(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let p = direct_protocol(2, 2, 2, identity(2));
    let t = simulate(&p, &bit).unwrap();
    let c = verify_weak_converse_chain(&t, &bit, &crate::divergence::AscentBudget::default()).unwrap();
    assert!((c.cumulative - 1.0).abs() < 1e-9 && (c.chi - 1.0).abs() < 1e-6);
    assert!(c.passed);
}

#[test]
fn chain_on_dephasing_protocols() {
    // Complete dephasing is entanglement breaking.
    let ch = dephasing(0.5).unwrap();
    let chi = crate::capacity::holevo_information(&ch, &Default::default()).unwrap();
    assert!((chi.value - 1.0).abs() < 1e-6);
    for seed in 0..10 {
        let p = random_protocol(&ch, 2, 4, ProtocolDims::default(), seed).unwrap();
        let c = weak_converse_chain(&simulate(&p, &ch).unwrap(), chi.value + chi.gap_estimate).unwrap();
        assert!(c.passed, "{c:?}");
    }
}

#[test]
fn random_protocols_are_deterministic_and_classical() {
    let ch = depolarizing(2, 0.25).unwrap();
    let a = random_protocol(&ch, 2, 3, ProtocolDims::default(), 17).unwrap();
    let b = random_protocol(&ch, 2, 3, ProtocolDims::default(), 17).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, random_protocol(&ch, 2, 3, ProtocolDims::default(), 18).unwrap());

    // The decoder's X output is block diagonal for any input.
    let mut rng = seeded_rng(2);
    let d = &a.decoders[0];
    let rho = random_density::<f64>(d.d_in(), d.d_in(), &mut rng);
    let out = d.as_map().apply_matrix(rho.matrix()).unwrap();
    assert!(feedback_coherence(&out, 2, d.d_out() / 2) < 1e-14);

    for seed in 0..50 {
        let dims = ProtocolDims {
            alice_memory: 1 + (seed % 3) as usize,
            bob_memory: 1 + (seed % 2) as usize,
            feedback: 1 + (seed % 4) as usize,
        };
        let p = random_protocol(&ch, 1 + (seed % 3) as usize, 2 + (seed % 3) as usize, dims, seed).unwrap();
        let t = simulate(&p, &ch).unwrap();
        for st in t.stages.iter().filter(|s| s.stage == Stage::Decoded) {
            let x = st.dims[1];
            let rest = st.dims[2];
            for s in &st.states {
                let bob = s.reduce(&[1, 2]).unwrap();
                assert!(feedback_coherence(bob.matrix(), x, rest) < 1e-12);
            }
        }
    }
}

#[test]
fn json_round_trip_and_caps() {
    let ch = depolarizing(2, 0.25).unwrap();
    let p = random_protocol(&ch, 2, 2, ProtocolDims::default(), 1).unwrap();
    let q = FeedbackProtocol::from_json(&p.to_json()).unwrap();
    assert!(p.encoders[0].kraus_ops()[0].approx_eq(&q.encoders[0].kraus_ops()[0], 1e-15));
    assert_eq!(q.n_rounds, 2);

    let big = ProtocolDims {
        alice_memory: 64,
        bob_memory: 64,
        feedback: 2,
    };
    assert!(matches!(
        random_protocol(&ch, 1, 2, big, 0),
        Err(Error::DimensionCap { .. })
    ));
    let wide = ProtocolDims {
        feedback: 5,
        ..Default::default()
    };
    assert!(random_protocol(&ch, 1, 2, wide, 0).is_err());
    let mut broken = p.clone();
    broken.decoders.clear();
    assert!(simulate(&broken, &ch).is_err());
}
