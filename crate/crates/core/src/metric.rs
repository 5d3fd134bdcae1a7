//! Signed inner product on `R⁴_v`.
use core::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Lightlike classification threshold used when the caller has no better value.
pub const DEFAULT_LIGHTLIKE_TOL: f64 = 1e-10;

/// Number of negative axes of the ambient metric. The leading `v` coordinates are timelike.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MetricIndex(u8);

impl MetricIndex {
    pub const EUCLIDEAN: MetricIndex = MetricIndex(0);

    pub fn new(v: u8) -> Result<Self> {
        if v <= 2 {
            Ok(MetricIndex(v))
        } else {
            Err(Error::invalid("metric index must be 0, 1 or 2"))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Diagonal of the metric, `-1` on the leading `v` axes.
    pub fn signs(self) -> [f64; 4] {
        let mut g = [1.0; 4];
        for s in g.iter_mut().take(self.0 as usize) {
            *s = -1.0;
        }
        g
    }

    pub fn dot(self, a: &[f64; 4], b: &[f64; 4]) -> f64 {
        let v = self.0 as usize;
        let mut neg = 0.0;
        let mut pos = 0.0;
        for i in 0..4 {
            if i < v {
                neg += a[i] * b[i];
            } else {
                pos += a[i] * b[i];
            }
        }
        pos - neg
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbientVector {
    pub x: [f64; 4],
    pub idx: MetricIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Lightlike,
}

impl CausalCharacter {
    /// `+1` for spacelike, `-1` for timelike, `0` for lightlike.
    pub fn sign(self) -> i8 {
        match self {
            CausalCharacter::Spacelike => 1,
            CausalCharacter::Timelike => -1,
            CausalCharacter::Lightlike => 0,
        }
    }
}

impl AmbientVector {
    pub fn new(x: [f64; 4], idx: MetricIndex) -> Self {
        AmbientVector { x, idx }
    }

    pub fn zero(idx: MetricIndex) -> Self {
        AmbientVector { x: [0.0; 4], idx }
    }

    pub fn basis(i: usize, idx: MetricIndex) -> Self {
        let mut x = [0.0; 4];
        x[i] = 1.0;
        AmbientVector { x, idx }
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().all(|c| c.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().all(|&c| c == 0.0)
    }

    pub fn self_inner(&self) -> f64 {
        self.idx.dot(&self.x, &self.x)
    }

    /// Coordinate (Euclidean) length, used for residual magnitudes.
    pub fn coord_norm(&self) -> f64 {
        libm::sqrt(self.x.iter().map(|c| c * c).sum())
    }
}

/// `⟨u,w⟩ = -Σ_{i<v} u_i w_i + Σ_{i≥v} u_i w_i`.
///
/// # Panics
/// If the two vectors carry different metric indices.
pub fn inner(u: &AmbientVector, w: &AmbientVector) -> f64 {
    assert_eq!(u.idx, w.idx, "inner product of vectors with different metric indices");
    u.idx.dot(&u.x, &w.x)
}

pub fn norm(u: &AmbientVector) -> f64 {
    libm::sqrt(libm::fabs(u.self_inner()))
}

pub fn causal_character(u: &AmbientVector, tol: f64) -> CausalCharacter {
    debug_assert!(tol > 0.0);
    if u.is_zero() {
        return CausalCharacter::Spacelike;
    }
    let q = u.self_inner();
    if q > tol {
        CausalCharacter::Spacelike
    } else if q < -tol {
        CausalCharacter::Timelike
    } else {
        CausalCharacter::Lightlike
    }
}

impl Add for AmbientVector {
    type Output = AmbientVector;
    fn add(self, o: AmbientVector) -> AmbientVector {
        debug_assert_eq!(self.idx, o.idx);
        let mut x = self.x;
        for (a, b) in x.iter_mut().zip(o.x) {
            *a += b;
        }
        AmbientVector { x, idx: self.idx }
    }
}

impl AddAssign for AmbientVector {
    fn add_assign(&mut self, o: AmbientVector) {
        *self = *self + o;
    }
}

impl Sub for AmbientVector {
    type Output = AmbientVector;
    fn sub(self, o: AmbientVector) -> AmbientVector {
        self + (-o)
    }
}

impl Neg for AmbientVector {
    type Output = AmbientVector;
    fn neg(self) -> AmbientVector {
        self * -1.0
    }
}

impl Mul<f64> for AmbientVector {
    type Output = AmbientVector;
    fn mul(self, k: f64) -> AmbientVector {
        AmbientVector { x: self.x.map(|c| c * k), idx: self.idx }
    }
}

impl Mul<AmbientVector> for f64 {
    type Output = AmbientVector;
    fn mul(self, v: AmbientVector) -> AmbientVector {
        v * self
    }
}

impl Index<usize> for AmbientVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.x[i]
    }
}

/// Metric dual of the 4D generalized cross product: the vector `w` with
/// `⟨w, d⟩ = det(a, b, c, d)` for every `d`.
pub fn cross3(a: &AmbientVector, b: &AmbientVector, c: &AmbientVector) -> AmbientVector {
    let minor = |r: [usize; 3]| {
        let (p, q, s) = (r.map(|i| a.x[i]), r.map(|i| b.x[i]), r.map(|i| c.x[i]));
        p[0] * (q[1] * s[2] - q[2] * s[1]) - p[1] * (q[0] * s[2] - q[2] * s[0]) + p[2] * (q[0] * s[1] - q[1] * s[0])
    };
    // Cofactors of det(a, b, c, e_l) along the last column.
    let cof = [-minor([1, 2, 3]), minor([0, 2, 3]), -minor([0, 1, 3]), minor([0, 1, 2])];
    let g = a.idx.signs();
    AmbientVector { x: [cof[0] * g[0], cof[1] * g[1], cof[2] * g[2], cof[3] * g[3]], idx: a.idx }
}

/// `det(a, b, c, d)` of the coordinate columns.
pub fn det4(a: &AmbientVector, b: &AmbientVector, c: &AmbientVector, d: &AmbientVector) -> f64 {
    let w = cross3(a, b, c);
    inner(&w, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: [f64; 4], idx: u8) -> AmbientVector {
        AmbientVector::new(x, MetricIndex::new(idx).unwrap())
    }

    #[test]
    fn signature_examples() {
        assert_eq!(inner(&v([1., 0., 0., 0.], 0), &v([1., 0., 0., 0.], 0)), 1.0);
        assert_eq!(inner(&v([1., 0., 0., 0.], 1), &v([1., 0., 0., 0.], 1)), -1.0);
        assert_eq!(inner(&v([1., 1., 0., 0.], 1), &v([1., -1., 0., 0.], 1)), -2.0);
        assert_eq!(norm(&v([1., 0., 0., 0.], 1)), 1.0);
        assert_eq!(norm(&v([3., 4., 0., 0.], 0)), 5.0);
        assert_eq!(norm(&v([1., 1., 0., 0.], 1)), 0.0);
        assert_eq!(causal_character(&v([0., 1., 0., 0.], 1), 1e-12), CausalCharacter::Spacelike);
        assert_eq!(causal_character(&v([1., 0., 0., 0.], 1), 1e-12), CausalCharacter::Timelike);
        assert_eq!(causal_character(&v([1., 1., 0., 0.], 1), 1e-12), CausalCharacter::Lightlike);
        assert_eq!(causal_character(&v([0.; 4], 2), 1e-12), CausalCharacter::Spacelike);
    }

    #[test]
    fn brute_force_sum() {
        let idx = MetricIndex::new(1).unwrap();
        let (u, w) = ([1.0, 1.0, 0.0, 0.0], [1.0, -1.0, 0.0, 0.0]);
        let mut s = 0.0;
        for i in 0..4 {
            s += if i < 1 { -u[i] * w[i] } else { u[i] * w[i] };
        }
        assert_eq!(s, idx.dot(&u, &w));
    }

    #[test]
    #[should_panic]
    fn mismatched_indices_panic() {
        inner(&v([1.; 4], 0), &v([1.; 4], 1));
    }

    #[test]
    fn cross_is_orthogonal_and_matches_det() {
        for idx in 0..3 {
            let a = v([0.3, -1.2, 0.5, 2.0], idx);
            let b = v([1.1, 0.4, -0.7, 0.2], idx);
            let c = v([-0.5, 0.9, 1.3, -0.4], idx);
            let w = cross3(&a, &b, &c);
            for x in [a, b, c] {
                assert!(inner(&w, &x).abs() < 1e-12);
            }
            let d = v([0.0, 0.0, 0.0, 1.0], idx);
            let m = [a.x, b.x, c.x, d.x];
            // Leibniz on the 4x4 with columns a,b,c,d.
            let det = det_leibniz(&m);
            assert!((det4(&a, &b, &c, &d) - det).abs() < 1e-12);
        }
    }

    fn det_leibniz(cols: &[[f64; 4]; 4]) -> f64 {
        let mut total = 0.0;
        let mut p = [0usize, 1, 2, 3];
        permute(&mut p, 0, &mut |perm| {
            let mut sign = 1.0;
            for i in 0..4 {
                for j in i + 1..4 {
                    if perm[i] > perm[j] {
                        sign = -sign;
                    }
                }
            }
            // row r, column k entry is cols[k][r]
            total += sign * (0..4).map(|k| cols[k][perm[k]]).product::<f64>();
        });
        total
    }

    fn permute(p: &mut [usize; 4], k: usize, f: &mut impl FnMut(&[usize; 4])) {
        if k == 4 {
            f(p);
            return;
        }
        for i in k..4 {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }
}
