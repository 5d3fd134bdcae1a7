//! Small fixed-size matrix helpers.

pub type Mat<const N: usize> = [[f64; N]; N];
pub type Mat3 = Mat<3>;
pub type Mat4 = Mat<4>;

pub fn identity<const N: usize>() -> Mat<N> {
    let mut m = [[0.0; N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn mul<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> Mat<N> {
    let mut m = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            m[i][j] = (0..N).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

pub fn mul_vec<const N: usize>(a: &Mat<N>, x: &[f64; N]) -> [f64; N] {
    let mut y = [0.0; N];
    for i in 0..N {
        y[i] = (0..N).map(|k| a[i][k] * x[k]).sum();
    }
    y
}

pub fn scale<const N: usize>(a: &Mat<N>, k: f64) -> Mat<N> {
    a.map(|row| row.map(|x| x * k))
}

pub fn add<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> Mat<N> {
    let mut m = *a;
    for i in 0..N {
        for j in 0..N {
            m[i][j] += b[i][j];
        }
    }
    m
}

pub fn transpose<const N: usize>(a: &Mat<N>) -> Mat<N> {
    let mut m = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            m[i][j] = a[j][i];
        }
    }
    m
}

pub fn max_abs<const N: usize>(a: &Mat<N>) -> f64 {
    a.iter().flatten().fold(0.0, |m, x| m.max(libm::fabs(*x)))
}

/// Matrix exponential by scaling and squaring with a degree-18 Taylor core.
pub fn expm<const N: usize>(a: &Mat<N>) -> Mat<N> {
    let norm = max_abs(a) * N as f64;
    let mut squarings = 0;
    let mut s = 1.0;
    while norm * s > 0.25 {
        s *= 0.5;
        squarings += 1;
    }
    let x = scale(a, s);
    let mut term = identity::<N>();
    let mut sum = identity::<N>();
    for k in 1..=18 {
        term = scale(&mul(&term, &x), 1.0 / k as f64);
        sum = add(&sum, &term);
    }
    for _ in 0..squarings {
        sum = mul(&sum, &sum);
    }
    sum
}

/// `diag(d)·m`.
pub fn diag_mul<const N: usize>(d: &[f64; N], m: &Mat<N>) -> Mat<N> {
    let mut r = *m;
    for i in 0..N {
        for j in 0..N {
            r[i][j] *= d[i];
        }
    }
    r
}

/// Largest `|a_ij + a_ji|`.
pub fn antisymmetry_defect<const N: usize>(a: &Mat<N>) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..N {
        for j in 0..N {
            d = d.max(libm::fabs(a[i][j] + a[j][i]));
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_rotation_generator() {
        let t = 2.3;
        let a = [[0.0, -t], [t, 0.0]];
        let e = expm(&a);
        assert!((e[0][0] - libm::cos(t)).abs() < 1e-14);
        assert!((e[1][0] - libm::sin(t)).abs() < 1e-14);
    }

    #[test]
    fn expm_of_boost_generator() {
        let t = 1.7;
        let a = [[0.0, t], [t, 0.0]];
        let e = expm(&a);
        assert!((e[0][0] - libm::cosh(t)).abs() < 1e-13);
        assert!((e[0][1] - libm::sinh(t)).abs() < 1e-13);
    }
}
