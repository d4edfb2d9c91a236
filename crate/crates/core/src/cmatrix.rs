//! Small dense complex matrices for the group and flow modules.
//!
//! The lattice fields are n×n with n ≤ 4 in practice, so everything here is
//! straightforward row-major arithmetic: no BLAS, deterministic operation
//! order (bit-identical reruns are part of the flow contract).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("square matrix required")]
    NotSquare,
}

/// Row-major n×n complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub n: usize,
    pub d: Vec<C64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat {
            n,
            d: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn eye(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.d[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let n = rows.len();
        let mut d = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "square matrix required");
            d.extend_from_slice(r);
        }
        CMat { n, d }
    }

    pub fn scalar(n: usize, c: C64) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.d[i * n + i] = c;
        }
        m
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.d[i * n + i] = entries[i];
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.d[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.d[i * self.n + j] = v;
    }

    pub fn adjoint(&self) -> CMat {
        let n = self.n;
        let mut m = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.d[j * n + i] = self.d[i * n + j].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> CMat {
        let n = self.n;
        let mut m = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.d[j * n + i] = self.d[i * n + j];
            }
        }
        m
    }

    pub fn conj(&self) -> CMat {
        CMat {
            n: self.n,
            d: self.d.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> CMat {
        CMat {
            n: self.n,
            d: self.d.iter().map(|z| z * c).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.d[i * self.n + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn commutator(&self, other: &CMat) -> CMat {
        &(self * other) - &(other * self)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self - &self.adjoint()).max_abs() <= tol
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<CMat, MatrixError> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = CMat::eye(n);
        for col in 0..n {
            let mut piv = col;
            let mut best = a.at(col, col).norm();
            for r in (col + 1)..n {
                let v = a.at(r, col).norm();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return Err(MatrixError::Singular);
            }
            if piv != col {
                for j in 0..n {
                    a.d.swap(col * n + j, piv * n + j);
                    inv.d.swap(col * n + j, piv * n + j);
                }
            }
            let p = a.at(col, col);
            for j in 0..n {
                a.d[col * n + j] /= p;
                inv.d[col * n + j] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.at(r, col);
                if f.norm() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let x = a.at(col, j);
                    let y = inv.at(col, j);
                    a.d[r * n + j] -= f * x;
                    inv.d[r * n + j] -= f * y;
                }
            }
        }
        Ok(inv)
    }

    /// Matrix exponential by scaling and squaring with a Taylor core.
    pub fn exp(&self) -> CMat {
        let n = self.n;
        let norm = self.max_abs() * n as f64;
        let mut squarings = 0u32;
        let mut scale = 1.0;
        while norm * scale > 0.25 && squarings < 40 {
            squarings += 1;
            scale *= 0.5;
        }
        let a = self.scale(C64::new(scale, 0.0));
        // Taylor to degree 14 at ||A|| <= 1/4 is far below f64 resolution.
        let mut term = CMat::eye(n);
        let mut sum = CMat::eye(n);
        for k in 1..=14 {
            term = &(&term * &a) * &CMat::scalar(n, C64::new(1.0 / k as f64, 0.0));
            sum = &sum + &term;
        }
        let mut r = sum;
        for _ in 0..squarings {
            r = &r * &r;
        }
        r
    }

    /// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations. Returns (eigenvalues ascending, unitary V) with
    /// self = V · diag(vals) · V†.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, CMat) {
        let n = self.n;
        let mut a = self.clone();
        let mut v = CMat::eye(n);
        for _sweep in 0..60 {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a.at(p, q).norm_sqr();
                }
            }
            if off.sqrt() < 1e-15 * (1.0 + self.frobenius_norm()) {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.at(p, q);
                    let b = apq.norm();
                    if b == 0.0 {
                        continue;
                    }
                    let app = a.at(p, p).re;
                    let aqq = a.at(q, q).re;
                    // Phase out apq (U = diag(1, u) makes the block real
                    // symmetric), then a real Jacobi rotation J; the combined
                    // plane unitary is W = U·J.
                    let u = apq.conj() / b;
                    let tau = (aqq - app) / (2.0 * b);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let ubar = u.conj();
                    // A <- W† A W, rows first.
                    for j in 0..n {
                        let ap = a.at(p, j);
                        let aq = a.at(q, j);
                        a.set(p, j, ap * c - aq * ubar * s);
                        a.set(q, j, ap * s + aq * ubar * c);
                    }
                    for i in 0..n {
                        let ap = a.at(i, p);
                        let aq = a.at(i, q);
                        a.set(i, p, ap * c - aq * u * s);
                        a.set(i, q, ap * s + aq * u * c);
                        let vp = v.at(i, p);
                        let vq = v.at(i, q);
                        v.set(i, p, vp * c - vq * u * s);
                        v.set(i, q, vp * s + vq * u * c);
                    }
                }
            }
        }
        let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a.at(i, i).re, i)).collect();
        pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let vals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let mut vs = CMat::zeros(n);
        for (newcol, (_, oldcol)) in pairs.iter().enumerate() {
            for i in 0..n {
                vs.set(i, newcol, v.at(i, *oldcol));
            }
        }
        (vals, vs)
    }

    /// Hermitian principal square root.
    pub fn hermitian_sqrt(&self) -> CMat {
        self.hermitian_map(f64::sqrt)
    }

    /// Hermitian logarithm (positive definite input).
    pub fn hermitian_log(&self) -> CMat {
        self.hermitian_map(f64::ln)
    }

    fn hermitian_map(&self, f: impl Fn(f64) -> f64) -> CMat {
        let (vals, v) = self.hermitian_eigen();
        let d = CMat::diag(
            &vals
                .iter()
                .map(|&x| C64::new(f(x), 0.0))
                .collect::<Vec<_>>(),
        );
        &(&v * &d) * &v.adjoint()
    }

    pub fn min_eigenvalue_hermitian(&self) -> f64 {
        let (vals, _) = self.hermitian_eigen();
        vals[0]
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        debug_assert_eq!(self.n, rhs.n);
        CMat {
            n: self.n,
            d: self.d.iter().zip(&rhs.d).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        debug_assert_eq!(self.n, rhs.n);
        CMat {
            n: self.n,
            d: self.d.iter().zip(&rhs.d).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        CMat {
            n: self.n,
            d: self.d.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.d[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.d[i * n + j] += a * rhs.d[k * n + j];
                }
            }
        }
        out
    }
}

impl fmt::Display for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            for j in 0..self.n {
                let z = self.at(i, j);
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}{:+?}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_mat(rng: &mut ChaCha8Rng, n: usize) -> CMat {
        let mut m = CMat::zeros(n);
        for v in m.d.iter_mut() {
            *v = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        m
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=4usize {
            let m = &random_mat(&mut rng, n) + &CMat::scalar(n, C64::new(3.0, 0.0));
            let inv = m.inverse().unwrap();
            assert!((&(&m * &inv) - &CMat::eye(n)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn exp_of_commuting_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_mat(&mut rng, 3).scale(C64::new(0.3, 0.0));
        let e1 = a.exp();
        let e2 = a.scale(C64::new(0.5, 0.0)).exp();
        assert!((&(&e2 * &e2) - &e1).max_abs() < 1e-12);
        assert!((&CMat::zeros(2).exp() - &CMat::eye(2)).max_abs() == 0.0);
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4usize {
            let m = random_mat(&mut rng, n);
            let h = &(&m + &m.adjoint()) * &CMat::scalar(n, C64::new(0.5, 0.0));
            let (vals, v) = h.hermitian_eigen();
            let d = CMat::diag(&vals.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>());
            let back = &(&v * &d) * &v.adjoint();
            assert!((&back - &h).max_abs() < 1e-11, "n={n}");
            assert!((&(&v * &v.adjoint()) - &CMat::eye(n)).max_abs() < 1e-12);
            for w in vals.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn sqrt_and_log_on_positive_definite() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random_mat(&mut rng, 3);
        let pd = &(&m * &m.adjoint()) + &CMat::scalar(3, C64::new(0.5, 0.0));
        let s = pd.hermitian_sqrt();
        assert!((&(&s * &s) - &pd).max_abs() < 1e-11);
        let l = pd.hermitian_log();
        assert!((&l.exp() - &pd).max_abs() < 1e-10);
    }
}
