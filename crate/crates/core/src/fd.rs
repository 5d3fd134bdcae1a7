//! Finite-difference stencils on uniform lines.
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Smallest line length any supported stencil needs.
pub const MIN_POINTS: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivConfig {
    /// Formal accuracy order, 2 or 4.
    pub order: usize,
}

impl Default for DerivConfig {
    fn default() -> Self {
        DerivConfig { order: 4 }
    }
}

impl DerivConfig {
    pub fn new(order: usize) -> Result<Self> {
        match order {
            2 | 4 => Ok(DerivConfig { order }),
            _ => Err(Error::invalid("finite-difference order must be 2 or 4")),
        }
    }
}

/// Fornberg's recursion: weights of the `m`-th derivative at `x0` from nodes `xs`.
pub fn fornberg(x0: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(n > m, "need more nodes than the derivative order");
    // c[j][k]: weight of node j for derivative k
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Precomputed weights for the `m`-th derivative at every point of a line of `n` samples.
#[derive(Debug, Clone)]
pub struct LineStencil {
    entries: Vec<(usize, Vec<f64>)>,
}

impl LineStencil {
    pub fn new(n: usize, h: f64, m: usize, cfg: DerivConfig) -> Result<Self> {
        if !(1..=3).contains(&m) {
            return Err(Error::invalid("derivative order must be 1, 2 or 3"));
        }
        let p = cfg.order;
        let central = 2 * m.div_ceil(2) - 1 + p;
        let one_sided = m + p;
        if n < one_sided.max(central) {
            return Err(Error::invalid("line too short for the finite-difference stencil"));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::invalid("grid step must be positive"));
        }
        let r = central / 2;
        let scale = libm::pow(h, m as f64);
        let mut cache: Vec<(isize, usize, Vec<f64>)> = Vec::new();
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let (start, width) = if i >= r && i + r < n {
                (i - r, central)
            } else {
                let s = (i as isize - (one_sided / 2) as isize).clamp(0, (n - one_sided) as isize) as usize;
                (s, one_sided)
            };
            let shift = start as isize - i as isize;
            let w = match cache.iter().find(|(s, wd, _)| *s == shift && *wd == width) {
                Some((_, _, w)) => w.clone(),
                None => {
                    let xs: Vec<f64> = (0..width).map(|k| (shift + k as isize) as f64).collect();
                    let w: Vec<f64> = fornberg(0.0, &xs, m).into_iter().map(|x| x / scale).collect();
                    cache.push((shift, width, w.clone()));
                    w
                }
            };
            entries.push((start, w));
        }
        Ok(LineStencil { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn at(&self, i: usize, f: impl Fn(usize) -> f64) -> f64 {
        let (start, w) = &self.entries[i];
        w.iter().enumerate().map(|(k, c)| c * f(start + k)).sum()
    }

    pub fn at4(&self, i: usize, f: impl Fn(usize) -> [f64; 4]) -> [f64; 4] {
        let (start, w) = &self.entries[i];
        let mut out = [0.0; 4];
        for (k, c) in w.iter().enumerate() {
            let v = f(start + k);
            for d in 0..4 {
                out[d] += c * v[d];
            }
        }
        out
    }

    pub fn apply(&self, data: &[f64]) -> Vec<f64> {
        assert_eq!(data.len(), self.len());
        (0..self.len()).map(|i| self.at(i, |k| data[k])).collect()
    }
}
