//! The quadrics `S³_q(1)` (c = 1) and `H³_q(-1)` (c = -1).
use crate::error::{Error, Result};
use crate::metric::{inner, AmbientVector, MetricIndex};

pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceForm {
    q: u8,
    c: i8,
    v: MetricIndex,
}

/// `v = q` on the sphere, `v = q + 1` on the hyperbolic form.
pub fn signature_for(q: u8, c: i8) -> Result<MetricIndex> {
    if q > 1 {
        return Err(Error::invalid("space form index q must be 0 or 1"));
    }
    match c {
        1 => MetricIndex::new(q),
        -1 => MetricIndex::new(q + 1),
        _ => Err(Error::invalid("space form curvature c must be 1 or -1")),
    }
}

impl SpaceForm {
    pub fn new(q: u8, c: i8) -> Result<Self> {
        let v = signature_for(q, c)?;
        Ok(SpaceForm { q, c, v })
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn c(&self) -> i8 {
        self.c
    }

    pub fn cf(&self) -> f64 {
        self.c as f64
    }

    pub fn index(&self) -> MetricIndex {
        self.v
    }

    pub fn vector(&self, x: [f64; 4]) -> AmbientVector {
        AmbientVector::new(x, self.v)
    }

    /// Scales `p` back onto the quadric. Fails when `⟨p,p⟩` has the wrong sign.
    pub fn project(&self, p: &AmbientVector) -> Result<AmbientVector> {
        let q = p.self_inner() * self.cf();
        if !(q > 0.0) {
            return Err(Error::precondition("point cannot be projected onto the space form"));
        }
        Ok(*p * (1.0 / libm::sqrt(q)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormPoint {
    pub p: AmbientVector,
    pub form: SpaceForm,
}

impl FormPoint {
    pub fn new(p: AmbientVector, form: SpaceForm, tol: f64) -> Result<Self> {
        if !contains(&p, &form, tol) {
            return Err(Error::precondition("point is not on the space form"));
        }
        Ok(FormPoint { p, form })
    }
}

pub fn contains(p: &AmbientVector, form: &SpaceForm, tol: f64) -> bool {
    assert_eq!(p.idx, form.v, "point and space form use different metric indices");
    libm::fabs(inner(p, p) - form.cf()) <= tol
}

/// `f₁(t)γ + f₂(t)n`, with `(f₁, f₂) = (cos, sin)` when `ε₂c = 1` and `(cosh, sinh)` when `ε₂c = -1`.
pub fn principal_normal_geodesic(gamma: &FormPoint, n: &AmbientVector, t: f64, eps2: i8) -> Result<FormPoint> {
    const TOL: f64 = 1e-8;
    if eps2 != 1 && eps2 != -1 {
        return Err(Error::precondition("eps2 must be +1 or -1"));
    }
    if libm::fabs(inner(&gamma.p, n)) > TOL {
        return Err(Error::precondition("normal is not orthogonal to the base point"));
    }
    if libm::fabs(inner(n, n) - eps2 as f64) > TOL {
        return Err(Error::precondition("normal is not a unit vector of the stated causal character"));
    }
    let (f1, f2) = if eps2 * gamma.form.c == 1 {
        (libm::cos(t), libm::sin(t))
    } else {
        (libm::cosh(t), libm::sinh(t))
    };
    Ok(FormPoint { p: gamma.p * f1 + *n * f2, form: gamma.form })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signatures() {
        assert_eq!(signature_for(0, 1).unwrap().get(), 0);
        assert_eq!(signature_for(1, 1).unwrap().get(), 1);
        assert_eq!(signature_for(0, -1).unwrap().get(), 1);
        assert_eq!(signature_for(1, -1).unwrap().get(), 2);
        assert!(signature_for(2, 1).is_err());
        assert!(signature_for(0, 0).is_err());
    }

    #[test]
    fn membership() {
        let s = SpaceForm::new(0, 1).unwrap();
        let h = SpaceForm::new(0, -1).unwrap();
        assert!(contains(&s.vector([1., 0., 0., 0.]), &s, 1e-12));
        assert!(contains(&h.vector([libm::cosh(1.0), libm::sinh(1.0), 0., 0.]), &h, 1e-10));
        assert!(!contains(&s.vector([2., 0., 0., 0.]), &s, 1e-12));
    }

    #[test]
    fn geodesic_examples() {
        let s = SpaceForm::new(0, 1).unwrap();
        let g = FormPoint::new(s.vector([1., 0., 0., 0.]), s, 1e-12).unwrap();
        let n = s.vector([0., 1., 0., 0.]);
        assert_eq!(principal_normal_geodesic(&g, &n, 0.0, 1).unwrap().p, g.p);
        let q = principal_normal_geodesic(&g, &n, core::f64::consts::FRAC_PI_2, 1).unwrap();
        assert!((q.p.x[0]).abs() < 1e-15 && (q.p.x[1] - 1.0).abs() < 1e-15);

        let h = SpaceForm::new(0, -1).unwrap();
        let g = FormPoint::new(h.vector([1., 0., 0., 0.]), h, 1e-12).unwrap();
        let q = principal_normal_geodesic(&g, &h.vector([0., 1., 0., 0.]), 1.0, 1).unwrap();
        assert!((q.p.x[0] - libm::cosh(1.0)).abs() < 1e-15);
        assert!((q.p.x[1] - libm::sinh(1.0)).abs() < 1e-15);
        assert!(contains(&q.p, &h, 1e-12));
        assert!(principal_normal_geodesic(&g, &h.vector([0., 2., 0., 0.]), 1.0, 1).is_err());
        assert!(principal_normal_geodesic(&g, &h.vector([0., 1., 0., 0.]), 1.0, 0).is_err());
    }
}
