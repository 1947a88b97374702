//! Cubic B-spline basis on clamped knot vectors (the stream-function space)
//! and interpolating cubic splines on uniform grids (corrector traces).

use crate::linalg::solve_cyclic_tridiag;
use crate::scalar::{sc, Scalar};

/// Clamped cubic B-spline basis built from strictly increasing breakpoints.
/// With `nb` breakpoints there are `nb + 2` basis functions.
#[derive(Clone, Debug)]
pub struct CubicBasis<S> {
    /// Full knot vector with 4-fold end knots.
    pub knots: Vec<S>,
    /// Number of basis functions.
    pub len: usize,
}

impl<S: Scalar> CubicBasis<S> {
    pub fn from_breakpoints(breaks: &[S]) -> Self {
        assert!(breaks.len() >= 2);
        let mut knots = Vec::with_capacity(breaks.len() + 6);
        for _ in 0..3 {
            knots.push(breaks[0]);
        }
        knots.extend_from_slice(breaks);
        for _ in 0..3 {
            knots.push(*breaks.last().unwrap());
        }
        let len = knots.len() - 4;
        Self { knots, len }
    }

    /// Uniform breakpoints on [a, b] with `cells` cells.
    pub fn uniform(a: S, b: S, cells: usize) -> Self {
        let bp: Vec<S> = (0..=cells)
            .map(|i| a + (b - a) * sc::<S>(i as f64 / cells as f64))
            .collect();
        Self::from_breakpoints(&bp)
    }

    pub fn domain(&self) -> (S, S) {
        (self.knots[3], self.knots[self.knots.len() - 4])
    }

    pub fn cells(&self) -> usize {
        self.len - 3
    }

    /// Breakpoint i (cell boundaries), i in 0..=cells.
    pub fn breakpoint(&self, i: usize) -> S {
        self.knots[3 + i]
    }

    /// Knot span index for x (clamped to the domain).
    fn span(&self, x: S) -> usize {
        let n = self.len;
        let (lo, hi) = (3, n); // spans live in knots[3..n]
        if x >= self.knots[n] {
            return n - 1;
        }
        if x <= self.knots[3] {
            return 3;
        }
        // binary search
        let (mut a, mut b) = (lo, hi);
        while b - a > 1 {
            let m = (a + b) / 2;
            if x < self.knots[m] {
                b = m;
            } else {
                a = m;
            }
        }
        a
    }

    /// Values plus first and second derivatives of the 4 basis functions
    /// active at x. Returns (first_active_index, vals, d1, d2).
    pub fn eval(&self, x: S) -> (usize, [S; 4], [S; 4], [S; 4]) {
        let span = self.span(x);
        let t = &self.knots;
        // de Boor triangle for degree 3 with derivative extraction
        let mut ndu = [[S::zero(); 4]; 4];
        ndu[0][0] = S::one();
        let mut left = [S::zero(); 4];
        let mut right = [S::zero(); 4];
        for j in 1..=3 {
            left[j] = x - t[span + 1 - j];
            right[j] = t[span + j] - x;
            let mut saved = S::zero();
            for r in 0..j {
                let denom = right[r + 1] + left[j - r];
                let temp = if denom != S::zero() {
                    ndu[r][j - 1] / denom
                } else {
                    S::zero()
                };
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }
        let vals = [ndu[0][3], ndu[1][3], ndu[2][3], ndu[3][3]];

        // first derivative: 3 * (diff of degree-2 basis over knot gaps)
        let mut d1 = [S::zero(); 4];
        let mut d2 = [S::zero(); 4];
        // degree-2 values at x are in ndu[r][2], r=0..3 (active N_{span-2..span,2})
        // B'_{i,3}(x) = 3 [ N_{i,2}/(t_{i+3}-t_i) - N_{i+1,2}/(t_{i+4}-t_{i+1}) ]
        let three = sc::<S>(3.0);
        for r in 0..4 {
            let i = span - 3 + r;
            let n_i2 = if r >= 1 { ndu[r - 1][2] } else { S::zero() };
            let n_i12 = if r <= 2 { ndu[r][2] } else { S::zero() };
            let g1 = t[i + 3] - t[i];
            let g2 = t[i + 4] - t[i + 1];
            let a = if g1 != S::zero() { n_i2 / g1 } else { S::zero() };
            let b = if g2 != S::zero() { n_i12 / g2 } else { S::zero() };
            d1[r] = three * (a - b);
        }
        // second derivative via degree-1 values ndu[r][1], r=0..1 active N_{span-1..span,1}
        // B''_{i,3} = 6 [ N_{i,1}/((t_{i+3}-t_i)(t_{i+2}-t_i))
        //              - N_{i+1,1} (1/((t_{i+3}-t_i)(t_{i+3}-t_{i+1})) + 1/((t_{i+4}-t_{i+1})(t_{i+3}-t_{i+1})))
        //              + N_{i+2,1}/((t_{i+4}-t_{i+1})(t_{i+4}-t_{i+2})) ]
        let six = sc::<S>(6.0);
        let n1 = |i: usize| -> S {
            // N_{i,1} active for i = span-1, span
            if i + 1 == span {
                ndu[0][1]
            } else if i == span {
                ndu[1][1]
            } else {
                S::zero()
            }
        };
        for r in 0..4 {
            let i = span - 3 + r;
            let inv = |v: S| if v != S::zero() { S::one() / v } else { S::zero() };
            let t0 = n1(i) * inv(t[i + 3] - t[i]) * inv(t[i + 2] - t[i]);
            let t1 = n1(i + 1)
                * (inv(t[i + 3] - t[i]) * inv(t[i + 3] - t[i + 1])
                    + inv(t[i + 4] - t[i + 1]) * inv(t[i + 3] - t[i + 1]));
            let t2 = n1(i + 2) * inv(t[i + 4] - t[i + 1]) * inv(t[i + 4] - t[i + 2]);
            d2[r] = six * (t0 - t1 + t2);
        }
        (span - 3, vals, d1, d2)
    }
}

/// Interpolating cubic spline on a uniform parameter grid, periodic or
/// natural ends; stores second derivatives (moments).
#[derive(Clone, Debug)]
pub struct CubicSpline1D<S> {
    pub t0: S,
    pub h: S,
    pub y: Vec<S>,
    m: Vec<S>,
    pub periodic: bool,
}

impl<S: Scalar> CubicSpline1D<S> {
    /// Periodic spline through `y[i]` at `t0 + i h`, period `n h`.
    pub fn periodic(t0: S, h: S, y: Vec<S>) -> Self {
        let n = y.len();
        assert!(n >= 3);
        let six_h2 = sc::<S>(6.0) / (h * h);
        let rhs: Vec<S> = (0..n)
            .map(|i| (y[(i + 1) % n] - y[i] - y[i] + y[(i + n - 1) % n]) * six_h2)
            .collect();
        let sub = vec![S::one(); n];
        let diag = vec![sc::<S>(4.0); n];
        let sup = vec![S::one(); n];
        let m = solve_cyclic_tridiag(&sub, &diag, &sup, &rhs)
            .expect("periodic spline system is diagonally dominant");
        Self {
            t0,
            h,
            y,
            m,
            periodic: true,
        }
    }

    /// Natural spline (zero second derivative at both ends).
    pub fn natural(t0: S, h: S, y: Vec<S>) -> Self {
        let n = y.len();
        assert!(n >= 3);
        let six_h2 = sc::<S>(6.0) / (h * h);
        // tridiagonal for interior moments
        let mut diag = vec![sc::<S>(4.0); n - 2];
        let mut rhs: Vec<S> = (1..n - 1)
            .map(|i| (y[i + 1] - y[i] - y[i] + y[i - 1]) * six_h2)
            .collect();
        // forward elimination
        for i in 1..n - 2 {
            let w = S::one() / diag[i - 1];
            diag[i] -= w;
            let prev = rhs[i - 1];
            rhs[i] -= w * prev;
        }
        let mut m = vec![S::zero(); n];
        if n > 2 {
            m[n - 2] = rhs[n - 3] / diag[n - 3];
            for i in (1..n - 2).rev() {
                m[i] = (rhs[i - 1] - m[i + 1]) / diag[i - 1];
            }
        }
        Self {
            t0,
            h,
            y,
            m,
            periodic: false,
        }
    }

    /// Value and first two derivatives at t.
    pub fn eval(&self, t: S) -> (S, S, S) {
        let n = self.y.len();
        let period = self.h * sc::<S>(n as f64);
        let mut u = (t - self.t0) / self.h;
        let (i, y0, y1, m0, m1);
        if self.periodic {
            let nf = sc::<S>(n as f64);
            u = u - (u / nf).floor() * nf;
            let k = u.floor().to_f64_lossy() as usize % n;
            i = k;
            let ip = (k + 1) % n;
            y0 = self.y[i];
            y1 = self.y[ip];
            m0 = self.m[i];
            m1 = self.m[ip];
            let _ = period;
        } else {
            let k = (u.floor().to_f64_lossy() as isize).clamp(0, n as isize - 2) as usize;
            i = k;
            y0 = self.y[i];
            y1 = self.y[i + 1];
            m0 = self.m[i];
            m1 = self.m[i + 1];
        }
        let s = (u - sc::<S>(i as f64)) * self.h; // local coordinate in [0, h]
        let h = self.h;
        let a = (h - s) / h;
        let b = s / h;
        let six = sc::<S>(6.0);
        let val = a * y0 + b * y1
            + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / six;
        let d1 = (y1 - y0) / h
            + ((sc::<S>(3.0) * b * b - S::one()) * m1 - (sc::<S>(3.0) * a * a - S::one()) * m0) * h
                / six;
        let d2 = a * m0 + b * m1;
        (val, d1, d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check<F: Fn(f64) -> f64>(f: F, x: f64, d_analytic: f64, tol: f64) {
        let h = 1e-6;
        let fd = (f(x + h) - f(x - h)) / (2.0 * h);
        assert!(
            (fd - d_analytic).abs() <= tol * (1.0 + d_analytic.abs()),
            "fd {fd} vs analytic {d_analytic}"
        );
    }

    #[test]
    fn cubic_basis_partition_of_unity_and_derivatives() {
        let basis = CubicBasis::<f64>::uniform(0.0, 2.0, 7);
        for k in 0..=40 {
            let x = 2.0 * k as f64 / 40.0;
            let (_, vals, d1, d2) = basis.eval(x);
            let s: f64 = vals.iter().sum();
            assert!((s - 1.0).abs() < 1e-12, "partition of unity at {x}: {s}");
            let sd: f64 = d1.iter().sum();
            assert!(sd.abs() < 1e-10, "derivative sum at {x}: {sd}");
            let sdd: f64 = d2.iter().sum();
            assert!(sdd.abs() < 1e-9, "second derivative sum at {x}: {sdd}");
        }
        // derivatives vs finite differences for a random coefficient combo
        let coef: Vec<f64> = (0..basis.len).map(|i| ((i * 13 % 7) as f64) - 3.0).collect();
        let f = |x: f64| {
            let (first, vals, _, _) = basis.eval(x);
            (0..4).map(|r| coef[first + r] * vals[r]).sum::<f64>()
        };
        let df = |x: f64| {
            let (first, _, d1, _) = basis.eval(x);
            (0..4).map(|r| coef[first + r] * d1[r]).sum::<f64>()
        };
        let ddf = |x: f64| {
            let (first, _, _, d2) = basis.eval(x);
            (0..4).map(|r| coef[first + r] * d2[r]).sum::<f64>()
        };
        for &x in &[0.31, 0.77, 1.21, 1.68] {
            fd_check(f, x, df(x), 1e-6);
            fd_check(df, x, ddf(x), 1e-5);
        }
    }

    #[test]
    fn cubic_basis_nonuniform_breakpoints() {
        let breaks = [0.0, 0.05, 0.15, 0.4, 1.0, 1.7, 2.0];
        let basis = CubicBasis::<f64>::from_breakpoints(&breaks);
        for k in 1..40 {
            let x = 2.0 * k as f64 / 40.0;
            let (_, vals, _, _) = basis.eval(x);
            let s: f64 = vals.iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_spline_reproduces_trig() {
        let n = 64;
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let y: Vec<f64> = (0..n).map(|i| (i as f64 * h).sin()).collect();
        let sp = CubicSpline1D::periodic(0.0, h, y);
        for &t in &[0.3, 1.9, 4.4, 6.1] {
            let (v, d1, d2) = sp.eval(t);
            assert!((v - t.sin()).abs() < 1e-5);
            assert!((d1 - t.cos()).abs() < 1e-4);
            assert!((d2 + t.sin()).abs() < 2e-2);
        }
        // periodic wrap
        let (a, _, _) = sp.eval(0.1);
        let (b, _, _) = sp.eval(0.1 + 2.0 * std::f64::consts::PI);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn natural_spline_interpolates() {
        let n = 21;
        let h = 0.1;
        let y: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(2)).collect();
        let sp = CubicSpline1D::natural(0.0, h, y.clone());
        for i in 0..n {
            let (v, _, _) = sp.eval(i as f64 * h);
            assert!((v - y[i]).abs() < 1e-12);
        }
    }
}
