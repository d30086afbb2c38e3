//! Rejection-sampling Monte Carlo over the bounding box of a polytope.
//!
//! Samples are drawn in fixed blocks of [`MC_BLOCK_SIZE`]; block `j` reads
//! its own ChaCha8 stream (`seed`, stream `j`). Blocks are evaluated in
//! parallel and reduced in block order, so the estimate depends only on
//! `(samples, seed)` and not on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{MultiPoly, RadialSum};
use crate::polytope::Polytope;

pub const MC_BLOCK_SIZE: u64 = 1 << 14;

/// Anything that can be evaluated at a floating-point point.
pub trait Integrand: Sync {
    fn eval_f64(&self, x: &[f64]) -> f64;
}

impl Integrand for MultiPoly {
    fn eval_f64(&self, x: &[f64]) -> f64 {
        MultiPoly::eval_f64(self, x)
    }
}

impl Integrand for RadialSum {
    fn eval_f64(&self, x: &[f64]) -> f64 {
        RadialSum::eval_f64(self, x)
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Integrand for F {
    fn eval_f64(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub accepted: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `|exact - estimate| <= max(k * SE, 1e-9 * |exact|)`.
    pub fn agrees_with(&self, exact: f64, k_sigma: f64) -> bool {
        let tol = (k_sigma * self.std_error).max(1e-9 * exact.abs());
        (exact - self.estimate).abs() <= tol
    }
}

#[derive(Default, Clone, Copy)]
struct BlockSums {
    sum: f64,
    sum_sq: f64,
    accepted: u64,
}

pub fn mc_integrate<F: Integrand + ?Sized>(polytope: &Polytope, f: &F, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let n = polytope.dim();
    let (lo, hi) = polytope.bounding_box();
    let lo: Vec<f64> = lo.iter().map(|v| v.to_f64()).collect();
    let width: Vec<f64> = hi.iter().zip(&lo).map(|(h, l)| h.to_f64() - l).collect();
    let box_volume: f64 = width.iter().product();
    let constraints: Vec<(Vec<f64>, f64)> = polytope
        .halfspaces()
        .iter()
        .map(|h| (h.normal().iter().map(|&v| v as f64).collect(), h.offset().to_f64()))
        .collect();

    let blocks = samples.div_ceil(MC_BLOCK_SIZE);
    let per_block: Vec<BlockSums> = (0..blocks)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(j);
            let count = MC_BLOCK_SIZE.min(samples - j * MC_BLOCK_SIZE);
            let mut x = vec![0.0; n];
            let mut acc = BlockSums::default();
            for _ in 0..count {
                for i in 0..n {
                    x[i] = lo[i] + width[i] * rng.gen::<f64>();
                }
                let inside =
                    constraints.iter().all(|(v, lam)| v.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() + lam >= 0.0);
                if inside {
                    let g = f.eval_f64(&x) * box_volume;
                    acc.sum += g;
                    acc.sum_sq += g * g;
                    acc.accepted += 1;
                }
            }
            acc
        })
        .collect();

    let total = per_block.iter().fold(BlockSums::default(), |a, b| BlockSums {
        sum: a.sum + b.sum,
        sum_sq: a.sum_sq + b.sum_sq,
        accepted: a.accepted + b.accepted,
    });
    if total.accepted == 0 {
        return Err(Error::ZeroAcceptance);
    }
    let m = samples as f64;
    let mean = total.sum / m;
    let var = if samples > 1 { (total.sum_sq / m - mean * mean).max(0.0) * m / (m - 1.0) } else { 0.0 };
    Ok(McEstimate { estimate: mean, std_error: (var / m).sqrt(), samples, accepted: total.accepted, seed })
}
