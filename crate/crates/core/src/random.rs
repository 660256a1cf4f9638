//! Seeded generators of random states, unitaries and channels (Haar and Ginibre ensembles).

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::KrausChannel;
use crate::numerics::{ComplexMatrix, DensityMatrix, PureState, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
    PureState::normalized(v).expect("gaussian vector is nonzero")
}

/// Haar-random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        for q in &cols {
            let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(q) {
                *x -= proj * y;
            }
        }
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (c, col) in cols.iter().enumerate() {
        for (r, &x) in col.iter().enumerate() {
            m[(r, c)] = x;
        }
    }
    m
}

/// Random full-rank density matrix from the Hilbert-Schmidt ensemble.
pub fn density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = ComplexMatrix::new(dim, dim, (0..dim * dim).map(|_| gaussian(rng)).collect())
        .expect("square");
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::new(w.scale_real(1.0 / tr)).expect("G G† / tr is a valid state")
}

/// Random channel with `ops` Kraus operators, cut from the first `dim` columns of a
/// Haar unitary on `dim * ops` levels.
pub fn channel<R: Rng + ?Sized>(dim: usize, ops: usize, rng: &mut R) -> KrausChannel {
    let u = unitary(dim * ops, rng);
    let kraus = (0..ops)
        .map(|j| {
            let mut k = ComplexMatrix::zeros(dim, dim);
            for r in 0..dim {
                for c in 0..dim {
                    k[(r, c)] = u[(j * dim + r, c)];
                }
            }
            k
        })
        .collect();
    KrausChannel::new(dim, kraus, "random").expect("isometry blocks form a CPTP set")
}
