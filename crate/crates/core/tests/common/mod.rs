#![allow(dead_code)]

use cpmaps::constructors::{
    cyclic_shift_channel, group_average_channel, local_update_channel, pauli_channel, pauli_matrices,
    pinned_channel, projective_channel, random_channel, random_self_adjoint_channel, weighted_basis_channel,
    WeightMatrix,
};
use cpmaps::matrix::{c64, ComplexMatrix};
use cpmaps::random::{random_density, random_unitary, rng_from_seed};
use cpmaps::{DensityMatrix, KrausChannel};
use rand::Rng;

pub struct Entry {
    pub label: String,
    pub channel: KrausChannel,
}

fn entry(label: impl Into<String>, channel: KrausChannel) -> Entry {
    Entry { label: label.into(), channel }
}

/// Diagonal clock and cyclic shift generating the Weyl group in dimension `d`.
pub fn weyl_group(d: usize) -> Vec<ComplexMatrix> {
    let omega = |k: usize| {
        let t = 2.0 * std::f64::consts::PI * k as f64 / d as f64;
        c64(t.cos(), t.sin())
    };
    let shift = cyclic_shift_channel(d).kraus()[0].clone();
    let clock = ComplexMatrix::diag(&(0..d).map(omega).collect::<Vec<_>>());
    let mut out = Vec::new();
    for a in 0..d {
        for b in 0..d {
            out.push(&shift.powi(a as u32) * &clock.powi(b as u32));
        }
    }
    out
}

pub fn basis_projections(u: &ComplexMatrix) -> Vec<ComplexMatrix> {
    (0..u.dim()).map(|k| ComplexMatrix::projector(&u.column(k))).collect()
}

/// Mixed corpus of named constructions plus random channels, deterministic in `seed`.
pub fn corpus(seed: u64) -> Vec<Entry> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::new();
    for d in 2..=4 {
        for _ in 0..3 {
            let rho = DensityMatrix::new(random_density(&mut rng, d)).unwrap();
            out.push(entry(format!("pinned d={d}"), pinned_channel(&rho).unwrap()));
        }
        let pops: Vec<f64> = (0..d).map(|_| rng.random_range(0.2..1.0)).collect();
        let total: f64 = pops.iter().sum();
        let rho = DensityMatrix::from_diag(&pops.iter().map(|p| p / total).collect::<Vec<_>>()).unwrap();
        out.push(entry(format!("local update d={d}"), local_update_channel(&rho).unwrap()));
        let profile: Vec<f64> = (0..d).map(|_| rng.random_range(0.1..1.0)).collect();
        let norm = profile.iter().map(|x| x * x).sum::<f64>().sqrt();
            let w = WeightMatrix::from_profile(&profile.iter().map(|x| x / norm).collect::<Vec<_>>()).unwrap();
        out.push(entry(format!("weighted basis d={d}"), weighted_basis_channel(&w).unwrap()));
        out.push(entry(
            format!("projective standard d={d}"),
            projective_channel(&basis_projections(&ComplexMatrix::identity(d))).unwrap(),
        ));
        let u = random_unitary(&mut rng, d);
        out.push(entry(format!("projective rotated d={d}"), projective_channel(&basis_projections(&u)).unwrap()));
        let p = ComplexMatrix::projector(&u.column(0));
        out.push(entry(
            format!("projective rank split d={d}"),
            projective_channel(&[p.clone(), &ComplexMatrix::identity(d) - &p]).unwrap(),
        ));
        out.push(entry(format!("weyl group d={d}"), group_average_channel(&weyl_group(d)).unwrap()));
        let shifts: Vec<ComplexMatrix> =
            (0..d).map(|k| cyclic_shift_channel(d).kraus()[0].powi(k as u32)).collect();
        out.push(entry(format!("cyclic group d={d}"), group_average_channel(&shifts).unwrap()));
        out.push(entry(format!("cyclic shift d={d}"), cyclic_shift_channel(d)));
    }
    let paulis = pauli_matrices();
    out.push(entry("pauli group", group_average_channel(&paulis).unwrap()));
    out.push(entry("phase flip group", group_average_channel(&[paulis[0].clone(), paulis[3].clone()]).unwrap()));
    out.push(entry("pauli channel", pauli_channel([0.4, 0.3, 0.2, 0.1]).unwrap()));
    out.push(entry("dephasing pauli", pauli_channel([0.7, 0.0, 0.0, 0.3]).unwrap()));
    out.push(entry("identity d=3", KrausChannel::identity(3)));
    while out.len() < 110 {
        let d = rng.random_range(2..=5usize);
        let k = rng.random_range(1..=d * d);
        out.push(entry(format!("random d={d} k={k}"), random_channel(d, k, rng.random()).unwrap()));
    }
    for d in 2..=3 {
        out.push(entry(format!("self-adjoint d={d}"), random_self_adjoint_channel(d, 3, rng.random()).unwrap()));
    }
    out
}
