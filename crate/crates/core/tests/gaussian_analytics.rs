//! Closed-form checks for the Gaussian circuit layer.
//!
//! Single-mode squeezed vacuum, coherent states, and lossless circuits all
//! have known photon-number distributions; the adjacency pipeline must
//! reproduce them to tight tolerance.

use gbts_core::gaussian::{
    adjacency, bc_blocks, build_unitary, extended_adjacency, prepare_state, prob, reduce,
    CircuitSpec, Gate, GaussianState,
};
use gbts_core::matrixcore::{bandwidth, block_bandwidth, ComplexMatrix, BAND_TOL};
use gbts_core::verify::{random_circuit, run_lemma_suite, LEMMA_BLOCK_TOL};
use gbts_core::Error;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

fn single_mode(r: f64, phi: f64, beta: C64, eta: f64) -> CircuitSpec {
    CircuitSpec {
        modes: 1,
        r: vec![r],
        phi_sq: vec![phi],
        beta: vec![beta],
        eta,
        layers: vec![],
    }
}

fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim());
    let mut m = 0.0f64;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            m = m.max((a.get(i, j) - b.get(i, j)).norm());
        }
    }
    m
}

#[test]
fn vacuum_state_and_probability() {
    let st = prepare_state(&CircuitSpec::vacuum(3)).unwrap();
    for i in 0..6 {
        assert_eq!(st.alpha()[i], C64::new(0.0, 0.0));
        for j in 0..6 {
            let expect = if i == j { 0.5 } else { 0.0 };
            assert!((st.sigma().get(i, j) - C64::new(expect, 0.0)).norm() < 1e-14);
        }
    }
    let ad = adjacency(&st).unwrap();
    assert!(ad.a.max_abs() < 1e-14);
    assert!(ad.gamma.iter().all(|g| g.norm() < 1e-14));
    assert!((ad.prefactor - 1.0).abs() < 1e-12);
    assert!((prob(&st, &[0, 0, 0]).unwrap() - 1.0).abs() < 1e-12);
    assert!(prob(&st, &[1, 0, 0]).unwrap().abs() < 1e-14);
}

#[test]
fn circuit_validation_errors() {
    let mut c = CircuitSpec::vacuum(2);
    c.eta = 0.0;
    assert!(matches!(c.validate(), Err(Error::Precondition(_))));
    let mut c = CircuitSpec::vacuum(2);
    c.r = vec![-0.1, 0.0];
    assert!(matches!(c.validate(), Err(Error::Precondition(_))));
    let mut c = CircuitSpec::vacuum(2);
    c.r = vec![0.1];
    assert!(matches!(c.validate(), Err(Error::Dimension(_))));
    let mut c = CircuitSpec::vacuum(3);
    c.layers = vec![vec![
        Gate::Beamsplitter {
            mode: 1,
            theta: 0.3,
            phi: 0.0,
        },
        Gate::Beamsplitter {
            mode: 2,
            theta: 0.2,
            phi: 0.1,
        },
    ]];
    assert!(matches!(c.validate(), Err(Error::Precondition(_))));
}

#[test]
fn beamsplitter_unitary_convention() {
    let mut c = CircuitSpec::vacuum(2);
    c.layers = vec![vec![Gate::Beamsplitter {
        mode: 1,
        theta: FRAC_PI_3,
        phi: 0.7,
    }]];
    let u = build_unitary(&c).unwrap();
    let (ct, st) = (FRAC_PI_3.cos(), FRAC_PI_3.sin());
    let e = C64::from_polar(1.0, 0.7);
    assert!((u.get(0, 0) - C64::new(ct, 0.0)).norm() < 1e-15);
    assert!((u.get(0, 1) + e.conj() * st).norm() < 1e-15);
    assert!((u.get(1, 0) - e * st).norm() < 1e-15);
    assert!((u.get(1, 1) - C64::new(ct, 0.0)).norm() < 1e-15);
    // unitarity
    let dev = max_abs_diff(
        &u.adjoint().matmul(&u).unwrap(),
        &ComplexMatrix::identity(2),
    );
    assert!(dev <= 1e-12);
}

#[test]
fn mean_photon_number_with_loss() {
    // transmitting a squeezed mode through loss eta scales <n> to eta sinh^2 r
    let st = prepare_state(&single_mode(1.0, 0.3, C64::new(0.0, 0.0), 0.5)).unwrap();
    let n_expect = 0.5 * 1.0f64.sinh().powi(2);
    assert!((st.sigma().get(0, 0).re - (n_expect + 0.5)).abs() < 1e-12);
}

#[test]
fn single_mode_adjacency_entry() {
    // lossless squeezed vacuum: pair amplitude tanh(r) e^{i phi}
    for (r, phi) in [(0.4, 0.0), (0.9, 1.1), (1.3, -2.0)] {
        let st = prepare_state(&single_mode(r, phi, C64::new(0.0, 0.0), 1.0)).unwrap();
        let ad = adjacency(&st).unwrap();
        let expect = C64::from_polar(r.tanh(), phi);
        assert!(
            (ad.a.get(0, 0) - expect).norm() < 1e-12,
            "r={r} phi={phi}: {} vs {expect}",
            ad.a.get(0, 0)
        );
        // off-diagonal block vanishes without loss
        assert!(ad.a.get(0, 1).norm() < 1e-12);
        assert!((ad.a.get(1, 1) - expect.conj()).norm() < 1e-12);
    }
}

#[test]
fn squeezed_vacuum_distribution() {
    // p(0) = 1/cosh r, p(2) = tanh^2 r / (2 cosh r),
    // p(4) = 3 tanh^4 r / (8 cosh r), odd outcomes vanish
    for r in [0.2, 0.5, 1.0] {
        let st = prepare_state(&single_mode(r, 0.8, C64::new(0.0, 0.0), 1.0)).unwrap();
        let t = r.tanh();
        let ch = r.cosh();
        assert!(
            (prob(&st, &[0]).unwrap() - 1.0 / ch).abs() <= 1e-10,
            "r={r}"
        );
        assert!(
            (prob(&st, &[2]).unwrap() - t * t / (2.0 * ch)).abs() <= 1e-10,
            "r={r}"
        );
        assert!(
            (prob(&st, &[4]).unwrap() - 3.0 * t.powi(4) / (8.0 * ch)).abs() <= 1e-10,
            "r={r}"
        );
        assert!(prob(&st, &[1]).unwrap() <= 1e-12, "r={r}");
        assert!(prob(&st, &[3]).unwrap() <= 1e-12, "r={r}");
    }
}

#[test]
fn coherent_state_is_poisson() {
    for beta in [C64::new(0.5, 0.0), C64::new(-0.3, 0.9), C64::new(1.1, -1.0)] {
        let st = prepare_state(&single_mode(0.0, 0.0, beta, 1.0)).unwrap();
        let nb = beta.norm_sqr();
        let mut fact = 1.0;
        for n in 0u32..=6 {
            if n > 0 {
                fact *= n as f64;
            }
            let expect = (-nb).exp() * nb.powi(n as i32) / fact;
            let got = prob(&st, &[n]).unwrap();
            assert!(
                (got - expect).abs() <= 1e-10,
                "beta={beta} n={n}: {got} vs {expect}"
            );
        }
    }
}

#[test]
fn dual_route_adjacency_blocks() {
    // the covariance route (adjacency) and the per-mode eigenvalue route
    // (bc_blocks) share no linear algebra; they must land on the same blocks
    let mut rng = ChaCha12Rng::seed_from_u64(41);
    for case in 0..20 {
        let c = random_circuit(&mut rng, 6, 4, false);
        let st = prepare_state(&c).unwrap();
        let ad = adjacency(&st).unwrap();
        let (b, cc) = bc_blocks(&c).unwrap();
        let m = c.modes;
        let mut dev = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                dev = dev.max((ad.a.get(i, j) - b.get(i, j)).norm());
                dev = dev.max((ad.a.get(i, m + j) - cc.get(i, j)).norm());
                dev = dev.max((ad.a.get(m + i, j) - cc.get(j, i)).norm());
                dev = dev.max((ad.a.get(m + i, m + j) - b.get(i, j).conj()).norm());
            }
        }
        assert!(dev <= 1e-9, "case {case}: block deviation {dev:.3e}");
        if (c.eta - 1.0).abs() < 1e-15 {
            assert!(cc.max_abs() <= 1e-10, "lossless case {case} has C != 0");
        }
    }
}

#[test]
fn no_squeezing_means_zero_adjacency() {
    // loss acting on vacuum leaves vacuum: A vanishes even for eta < 1
    let mut c = CircuitSpec::vacuum(3);
    c.eta = 0.6;
    c.layers = vec![vec![Gate::Beamsplitter {
        mode: 1,
        theta: 0.5,
        phi: 0.2,
    }]];
    let st = prepare_state(&c).unwrap();
    let ad = adjacency(&st).unwrap();
    assert!(ad.a.max_abs() < 1e-13);
}

#[test]
fn extended_adjacency_shapes() {
    let st = prepare_state(&single_mode(0.5, 0.0, C64::new(0.2, 0.1), 1.0)).unwrap();
    let ad = adjacency(&st).unwrap();
    assert_eq!(extended_adjacency(&st, &[0]).unwrap().dim(), 0);
    let e1 = extended_adjacency(&st, &[1]).unwrap();
    assert_eq!(e1.dim(), 2);
    // repetition 1 replaces the diagonal with gamma and keeps the rest of A
    assert!((e1.get(0, 0) - ad.gamma[0]).norm() < 1e-14);
    assert!((e1.get(1, 1) - ad.gamma[1]).norm() < 1e-14);
    assert!((e1.get(0, 1) - ad.a.get(0, 1)).norm() < 1e-14);
    let e2 = extended_adjacency(&st, &[2]).unwrap();
    assert_eq!(e2.dim(), 4);
    // copies of the same index couple through the original diagonal of A
    assert!((e2.get(0, 1) - ad.a.get(0, 0)).norm() < 1e-14);
    assert!((e2.get(0, 0) - ad.gamma[0]).norm() < 1e-14);
}

#[test]
fn repetition_path_matches_expanded_brute() {
    // s = (4, 4) expands to 16 doubled indices, above the auto brute limit,
    // so prob takes the repetition DP; the expanded matrix is still small
    // enough for the brute oracle
    let mut c = CircuitSpec::vacuum(2);
    c.r = vec![0.5, 0.7];
    c.phi_sq = vec![0.3, -0.4];
    c.beta = vec![C64::new(0.3, 0.0), C64::new(0.0, -0.2)];
    c.eta = 0.8;
    c.layers = vec![vec![Gate::Beamsplitter {
        mode: 1,
        theta: FRAC_PI_4,
        phi: 0.9,
    }]];
    let st = prepare_state(&c).unwrap();
    let p = prob(&st, &[4, 4]).unwrap();
    let ad = adjacency(&st).unwrap();
    let ext = extended_adjacency(&st, &[4, 4]).unwrap();
    let lh = gbts_core::hafnian::lhaf_brute(&ext).unwrap();
    let reference = (lh * ad.prefactor).re / (24.0 * 24.0);
    assert!(
        (p - reference).abs() <= 1e-9 * (1.0 + reference.abs()),
        "{p} vs {reference}"
    );
    assert!(lh.im.abs() <= 1e-9 * (1.0 + lh.re.abs()));
}

#[test]
fn box_normalization_weak_squeezing() {
    let mut c = CircuitSpec::vacuum(2);
    c.r = vec![0.25, 0.3];
    c.phi_sq = vec![0.0, 1.0];
    c.eta = 0.9;
    c.layers = vec![vec![Gate::Beamsplitter {
        mode: 1,
        theta: 0.6,
        phi: 0.0,
    }]];
    let st = prepare_state(&c).unwrap();
    let mut total = 0.0;
    for s1 in 0..=4u32 {
        for s2 in 0..=4u32 {
            let p = prob(&st, &[s1, s2]).unwrap();
            assert!(p >= 0.0);
            total += p;
        }
    }
    assert!(total <= 1.0 + 1e-9, "box mass {total}");
    assert!(
        total >= 0.999,
        "box mass {total} too small at weak squeezing"
    );
}

#[test]
fn reduce_marginal_consistency() {
    let mut c = CircuitSpec::vacuum(2);
    c.r = vec![0.3, 0.4];
    c.phi_sq = vec![0.5, 0.0];
    c.beta = vec![C64::new(0.2, -0.1), C64::new(0.0, 0.25)];
    c.eta = 0.85;
    c.layers = vec![vec![Gate::Beamsplitter {
        mode: 1,
        theta: 0.7,
        phi: 0.4,
    }]];
    let st = prepare_state(&c).unwrap();
    assert_eq!(
        reduce(&st, 2).unwrap().sigma().get(1, 1),
        st.sigma().get(1, 1)
    );
    let red = reduce(&st, 1).unwrap();
    assert_eq!(red.modes(), 1);
    for s1 in 0..=3u32 {
        let marginal: f64 = (0..=12u32).map(|s2| prob(&st, &[s1, s2]).unwrap()).sum();
        let direct = prob(&red, &[s1]).unwrap();
        assert!(
            (marginal - direct).abs() <= 1e-6,
            "s1={s1}: {marginal} vs {direct}"
        );
    }
    assert!(matches!(reduce(&st, 0), Err(Error::Precondition(_))));
    assert!(matches!(reduce(&st, 3), Err(Error::Precondition(_))));
}

#[test]
fn unitary_and_block_bandwidth_bounds() {
    let mut rng = ChaCha12Rng::seed_from_u64(43);
    for _ in 0..10 {
        let c = random_circuit(&mut rng, 16, 5, true);
        let u = build_unitary(&c).unwrap();
        let d = c.depth();
        assert!(bandwidth(&u, BAND_TOL) <= d);
        let st = prepare_state(&c).unwrap();
        let ad = adjacency(&st).unwrap();
        assert!(block_bandwidth(&ad.a, LEMMA_BLOCK_TOL).unwrap() <= 4 * d);
    }
}

#[test]
fn lemma_suite_passes() {
    let report = run_lemma_suite(20260819).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.circuits, 100);
    assert_eq!(report.unitary_violations, 0);
    assert_eq!(report.block_violations, 0);
}

// Overflowing circuit moments (sinh^2 of a huge r) must surface as an
// explicit error, never launder through NaN comparisons into a
// probability of 1.
#[test]
fn overflowing_squeezing_is_rejected() {
    let c = single_mode(400.0, 0.0, C64::new(0.0, 0.0), 1.0);
    match prepare_state(&c) {
        Err(Error::Unphysical(_)) => {}
        other => panic!("expected Unphysical, got {other:?}"),
    }
    let inf = C64::new(f64::INFINITY, 0.0);
    let sigma = ComplexMatrix::from_fn(2, |i, j| if i == j { inf } else { C64::new(0.0, 0.0) });
    assert!(matches!(
        GaussianState::new(vec![C64::new(0.0, 0.0); 2], sigma),
        Err(Error::Unphysical(_))
    ));
}

// Reducing an uncoupled product state to its first mode gives exactly the
// state prepared from the single-mode circuit alone.
#[test]
fn reduce_product_state_factorizes() {
    let two = CircuitSpec {
        modes: 2,
        r: vec![0.7, 0.3],
        phi_sq: vec![0.4, 1.1],
        beta: vec![C64::new(0.2, -0.1), C64::new(0.0, 0.5)],
        eta: 0.8,
        layers: vec![],
    };
    let one = single_mode(0.7, 0.4, C64::new(0.2, -0.1), 0.8);
    let reduced = reduce(&prepare_state(&two).unwrap(), 1).unwrap();
    let direct = prepare_state(&one).unwrap();
    for (a, b) in reduced.alpha().iter().zip(direct.alpha()) {
        assert!((a - b).norm() < 1e-14);
    }
    for i in 0..2 {
        for j in 0..2 {
            let d = (reduced.sigma().get(i, j) - direct.sigma().get(i, j)).norm();
            assert!(d < 1e-14);
        }
    }
}
