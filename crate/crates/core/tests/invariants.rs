//! Randomized invariants over seeded corpora; proptest drives seeds and dimensions.

mod common;

use cpmaps::channel::{kraus_from_choi, LinearMap};
use cpmaps::constructors::{
    group_average_channel, pinned_channel, random_channel, weighted_basis_channel, WeightMatrix,
};
use cpmaps::dynamics::{iterate, semigroup_propagator};
use cpmaps::linalg::{
    abs_op, abs_power, general_spectrum, herm_eig, min_eigenvalue, op_norm, schatten_norm, svd, NormOrder,
};
use cpmaps::matrix::{vector, ComplexMatrix, C64};
use cpmaps::positivity::{check_ergodic, classify, CheckConfig};
use cpmaps::random::{random_density, random_hermitian, random_matrix, random_psd, random_unit_vector, rng_from_seed};
use cpmaps::spectral::{spectrum, SpectralTolerances};
use cpmaps::{DensityMatrix, KrausChannel};
use proptest::prelude::*;
use rand::Rng;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

fn channel(seed: u64, d: usize) -> KrausChannel {
    let k = rng_from_seed(seed ^ 0xA5A5).random_range(1..=d * d);
    random_channel(d, k, seed).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Eigenvectors of the transfer matrix, one per eigenvalue, as matrices.
fn eigenpairs(t: &ComplexMatrix) -> Vec<(C64, ComplexMatrix)> {
    let n = t.dim();
    general_spectrum(t)
        .unwrap()
        .into_iter()
        .map(|z| {
            let s = svd(&(t - &ComplexMatrix::identity(n).scale(z))).unwrap();
            (z, ComplexMatrix::unvec(&s.v.column(n - 1)).unwrap())
        })
        .collect()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn schatten_norms_ignore_adjoint_and_modulus(seed: u64, d in 2usize..6) {
        let a = random_matrix(&mut rng_from_seed(seed), d);
        let abs = abs_op(&a).unwrap();
        for p in NormOrder::standard() {
            let n = schatten_norm(&a, p).unwrap();
            prop_assert!(rel(n, schatten_norm(&abs, p).unwrap()) <= 1e-9);
            prop_assert!(rel(n, schatten_norm(&a.adjoint(), p).unwrap()) <= 1e-9);
        }
    }

    #[test]
    fn holder_inequality(seed: u64, d in 2usize..6) {
        let mut rng = rng_from_seed(seed);
        let (a, b) = (random_matrix(&mut rng, d), random_matrix(&mut rng, d));
        for p in NormOrder::standard() {
            let rhs = schatten_norm(&a, p.conjugate()).unwrap() * schatten_norm(&b, p).unwrap();
            prop_assert!(a.hs_inner(&b).norm() <= rhs + 1e-9);
        }
    }

    #[test]
    fn diagonal_entry_power_bound(seed: u64, d in 2usize..6, p in 1.0f64..6.0) {
        let mut rng = rng_from_seed(seed);
        let a = random_hermitian(&mut rng, d);
        let v = random_unit_vector(&mut rng, d);
        let lhs = a.quadratic_form(&v).re.abs().powf(p);
        prop_assert!(lhs <= abs_power(&a, p).unwrap().quadratic_form(&v).re + 1e-9 * lhs.max(1.0));
    }

    #[test]
    fn norms_are_monotone_on_the_cone(seed: u64, d in 2usize..6) {
        let mut rng = rng_from_seed(seed);
        let b = random_psd(&mut rng, d);
        let b2 = &b + &random_psd(&mut rng, d);
        for p in NormOrder::standard() {
            let (x, y) = (schatten_norm(&b, p).unwrap(), schatten_norm(&b2, p).unwrap());
            prop_assert!(x <= y + 1e-9 * y.max(1.0));
        }
    }

    #[test]
    fn strict_inequality_inside_the_cone(seed: u64, d in 2usize..6) {
        let mut rng = rng_from_seed(seed);
        let b = &random_psd(&mut rng, d) + &ComplexMatrix::identity(d).scale_real(1e-6);
        let b2 = random_psd(&mut rng, d);
        prop_assume!(b2.norm_fro() > 1e-3);
        for p in NormOrder::standard() {
            let plus = schatten_norm(&(&b + &b2), p).unwrap();
            let minus = schatten_norm(&(&b - &b2), p).unwrap();
            prop_assert!(minus < plus - 1e-12, "p = {p}: {minus} vs {plus}");
        }
    }

    #[test]
    fn adjoint_duality_and_star_commutation(seed: u64, d in 2usize..6) {
        let phi = channel(seed, d);
        let dual = phi.adjoint();
        let mut rng = rng_from_seed(seed.wrapping_add(1));
        for _ in 0..10 {
            let (a, b) = (random_matrix(&mut rng, d), random_matrix(&mut rng, d));
            let lhs = dual.apply(&a).unwrap().hs_inner(&b);
            let rhs = a.hs_inner(&phi.apply(&b).unwrap());
            prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
            let star = &phi.apply(&a.adjoint()).unwrap() - &phi.apply(&a).unwrap().adjoint();
            prop_assert!(op_norm(&star).unwrap() <= 1e-10);
        }
    }

    // The operator forms |phi(A)| <= phi(|A|) and phi(A)_± <= phi(A_±) admit counterexamples
    // (see the verify module); their Schatten-norm consequences are what holds.
    #[test]
    fn modulus_and_parts_are_dominated_in_norm(seed: u64, d in 2usize..6) {
        let phi = channel(seed, d);
        let a = random_hermitian(&mut rng_from_seed(seed.wrapping_add(2)), d);
        let e = herm_eig(&a).unwrap();
        let (ap, an) = (e.apply_fn(|x| x.max(0.0)), e.apply_fn(|x| (-x).max(0.0)));
        let image = phi.apply(&a).unwrap().hermitian_part();
        let f = herm_eig(&image).unwrap();
        let (ip, in_) = (f.apply_fn(|x| x.max(0.0)), f.apply_fn(|x| (-x).max(0.0)));
        let big = phi.apply(&abs_op(&a).unwrap()).unwrap();
        for p in NormOrder::standard() {
            let n = |m: &ComplexMatrix| schatten_norm(m, p).unwrap();
            prop_assert!(n(&image) <= n(&big) + 1e-9 * n(&big).max(1.0));
            prop_assert!(n(&ip) <= n(&phi.apply(&ap).unwrap()) + 1e-9 * n(&ip).max(1.0));
            prop_assert!(n(&in_) <= n(&phi.apply(&an).unwrap()) + 1e-9 * n(&in_).max(1.0));
        }
    }

    #[test]
    fn choi_round_trip(seed: u64, d in 2usize..5) {
        let phi = channel(seed, d);
        let choi = phi.choi();
        prop_assert!(choi.min_eigenvalue().unwrap() >= -1e-10);
        let back = kraus_from_choi(&choi).unwrap();
        let a = random_matrix(&mut rng_from_seed(seed), d);
        prop_assert!((&back.apply(&a).unwrap() - &phi.apply(&a).unwrap()).max_abs() <= 1e-8);
    }

    #[test]
    fn classification_lattice_and_equivalence(seed: u64, d in 2usize..5) {
        let phi = channel(seed, d);
        let cfg = CheckConfig::new(64, seed);
        let r = classify(&phi, &cfg).unwrap();
        prop_assert!(r.lattice_violations().is_empty(), "{:?}", r.lattice_violations());
        prop_assert!(r.eh_agrees());
        prop_assert_eq!(check_ergodic(&phi, &cfg).unwrap(), check_ergodic(&phi, &cfg).unwrap());
    }

    #[test]
    fn ergodic_channels_have_a_faithful_unique_state(seed: u64, d in 2usize..5) {
        let phi = channel(seed, d);
        prop_assume!(check_ergodic(&phi, &CheckConfig::new(64, 1)).unwrap().is_pass());
        let s = spectrum(&phi, &SpectralTolerances::default()).unwrap();
        prop_assert_eq!(s.radius_multiplicity, 1);
        prop_assert!(s.pf_min_eig.unwrap() > 0.0);
        prop_assert!(s.gap > 0.0);
        prop_assert!(s.fixed_point_residual.unwrap() <= 1e-9);
    }

    #[test]
    fn transfer_eigenvectors_of_trace_preserving_maps(seed: u64, d in 2usize..4) {
        let phi = channel(seed, d);
        let t = phi.transfer_matrix().into_transfer();
        let pairs = eigenpairs(&t);
        let eigs: Vec<C64> = pairs.iter().map(|p| p.0).collect();
        for (z, a) in &pairs {
            // conjugate symmetry of the spectrum
            prop_assert!(eigs.iter().any(|w| (w - z.conj()).norm() <= 1e-7));
            if (z - 1.0).norm() > 1e-6 {
                prop_assert!(a.trace().norm() <= 1e-8);
            }
            if z.im.abs() <= 1e-9 && eigs.iter().filter(|w| (*w - z).norm() <= 1e-6).count() == 1 {
                let k = a.as_slice().iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap();
                let aligned = a.scale(k.conj() / k.norm());
                let h = aligned.hermitian_part();
                let g = aligned.anti_hermitian_part();
                let res = |m: &ComplexMatrix| (&phi.apply(m).unwrap() - &m.scale_real(z.re)).norm_fro();
                let nonzero = if h.norm_fro() >= g.norm_fro() { h } else { g };
                prop_assert!(res(&nonzero) <= 1e-8 * nonzero.norm_fro().max(1.0));
            }
        }
    }

    #[test]
    fn pinned_channel_is_idempotent(seed: u64, d in 2usize..6) {
        let rho = DensityMatrix::new(random_density(&mut rng_from_seed(seed), d)).unwrap();
        prop_assume!(rho.min_eigenvalue() > 1e-8);
        let phi = pinned_channel(&rho).unwrap();
        let t = phi.transfer_matrix().into_transfer();
        prop_assert!((&(&t * &t) - &t).max_abs() <= 1e-9);
    }

    #[test]
    fn positive_weights_give_improving_maps(seed: u64, d in 2usize..6) {
        let mut rng = rng_from_seed(seed);
        let squares: Vec<Vec<f64>> = (0..d).map(|_| (0..d).map(|_| rng.random_range(0.05..1.0)).collect()).collect();
        let cols: Vec<f64> = (0..d).map(|k| squares.iter().map(|r| r[k]).sum()).collect();
        let w = WeightMatrix::from_squares(
            squares.iter().map(|r| r.iter().zip(&cols).map(|(x, c)| x / c).collect()).collect(),
        ).unwrap();
        let phi = weighted_basis_channel(&w).unwrap();
        prop_assert!(classify(&phi, &CheckConfig::new(64, seed)).unwrap().positivity_improving.is_pass());
    }

    #[test]
    fn group_average_is_a_conditional_expectation(seed: u64, d in 2usize..5) {
        let g = common::weyl_group(d);
        let sub: Vec<ComplexMatrix> = if seed % 2 == 0 { g.clone() } else { g[..d].to_vec() };
        let phi = group_average_channel(&sub).unwrap();
        let mut rng = rng_from_seed(seed);
        let (a, b) = (random_matrix(&mut rng, d), random_matrix(&mut rng, d));
        let pa = phi.apply(&a).unwrap();
        for u in &sub {
            prop_assert!(op_norm(&pa.commutator(u)).unwrap() <= 1e-9);
        }
        let pb = phi.apply(&b).unwrap();
        let lhs = phi.apply(&(&a * &pb)).unwrap();
        prop_assert!((&lhs - &(&pa * &pb)).max_abs() <= 1e-9);
    }

    #[test]
    fn discrete_iteration_conserves_trace_and_positivity(seed: u64, d in 2usize..5) {
        let phi = channel(seed, d);
        let a0 = random_psd(&mut rng_from_seed(seed), d);
        let traj = iterate(&phi, &a0, 20, NormOrder::Finite(1.0), &SpectralTolerances::default());
        // a non-unique fixed point is fine for the invariants below
        let states: Vec<ComplexMatrix> = match traj {
            Ok(t) => t.states,
            Err(_) => {
                let mut s = vec![a0.clone()];
                for _ in 0..20 { let next = phi.apply(s.last().unwrap()).unwrap(); s.push(next); }
                s
            }
        };
        let tr0 = a0.trace().re;
        for (k, s) in states.iter().enumerate() {
            prop_assert!((s.trace().re - tr0).abs() <= 1e-9 * (k as f64).max(1.0) * tr0.max(1.0));
            prop_assert!(min_eigenvalue(s).unwrap() >= -1e-9 * tr0.max(1.0));
        }
    }

    #[test]
    fn semigroup_property(seed: u64, d in 2usize..4, t1 in 0.0f64..5.0, t2 in 0.0f64..5.0) {
        let phi = cpmaps::constructors::random_self_adjoint_channel(d, 3, seed).unwrap();
        let t = phi.transfer_matrix().into_transfer();
        let s1 = op_norm(&t).unwrap();
        let b = random_hermitian(&mut rng_from_seed(seed), d).vec();
        let p1 = semigroup_propagator(&t, s1, t1).unwrap();
        let p2 = semigroup_propagator(&t, s1, t2).unwrap();
        let p12 = semigroup_propagator(&t, s1, t1 + t2).unwrap();
        let lhs = p12.matvec(&b);
        let rhs = p1.matvec(&p2.matvec(&b));
        prop_assert!(vector::norm(&vector::sub(&lhs, &rhs)) <= 1e-8 * vector::norm(&b).max(1.0));
    }
}
