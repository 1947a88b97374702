//! Small dense/banded linear algebra: banded LU with partial pivoting,
//! conjugate gradients on an operator, and cyclic tridiagonal solves.

use crate::scalar::{sc, Scalar};
use crate::{Error, Result};

/// General banded matrix with `kl` sub- and `ku` super-diagonals, stored
/// LAPACK-style with `kl` extra rows for pivoting fill-in.
#[derive(Clone)]
pub struct BandMatrix<S> {
    pub n: usize,
    pub kl: usize,
    pub ku: usize,
    ldab: usize,
    data: Vec<S>,
}

impl<S: Scalar> BandMatrix<S> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            ldab,
            data: vec![S::zero(); ldab * n],
        }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(i + self.ku + self.kl >= j && j + self.kl >= i, "outside band");
        j * self.ldab + (self.kl + self.ku + i - j)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        if i + self.ku + self.kl >= j && j + self.kl >= i {
            self.data[self.idx(i, j)]
        } else {
            S::zero()
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: S) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn matvec(&self, x: &[S], y: &mut [S]) {
        assert_eq!(x.len(), self.n);
        y.iter_mut().for_each(|v| *v = S::zero());
        for j in 0..self.n {
            let ilo = j.saturating_sub(self.ku);
            let ihi = (j + self.kl).min(self.n - 1);
            let xj = x[j];
            for i in ilo..=ihi {
                y[i] += self.data[j * self.ldab + (self.kl + self.ku + i - j)] * xj;
            }
        }
    }

    /// In-place LU factorization with partial pivoting (unblocked dgbtf2).
    pub fn lu_factor(mut self) -> Result<BandLu<S>> {
        let n = self.n;
        let (kl, ku_tot) = (self.kl, self.ku + self.kl);
        let mut ipiv = vec![0usize; n];
        for j in 0..n {
            // pivot search in column j, rows j..=j+kl
            let ihi = (j + kl).min(n - 1);
            let mut piv = j;
            let mut pmax = self.get(j, j).abs();
            for i in (j + 1)..=ihi {
                let v = self.get(i, j).abs();
                if v > pmax {
                    pmax = v;
                    piv = i;
                }
            }
            if pmax == S::zero() {
                return Err(Error::Numeric(format!(
                    "banded LU: singular at column {j}"
                )));
            }
            ipiv[j] = piv;
            let jhi = (j + ku_tot).min(n - 1);
            if piv != j {
                for k in j..=jhi {
                    let a = self.get(j, k);
                    let b = self.get(piv, k);
                    self.set(j, k, b);
                    self.set(piv, k, a);
                }
            }
            let diag = self.get(j, j);
            for i in (j + 1)..=ihi {
                let m = self.get(i, j) / diag;
                self.set(i, j, m);
                if m != S::zero() {
                    for k in (j + 1)..=jhi {
                        let u = self.get(j, k);
                        if u != S::zero() {
                            let v = self.get(i, k) - m * u;
                            self.set(i, k, v);
                        }
                    }
                }
            }
        }
        Ok(BandLu { mat: self, ipiv })
    }
}

/// Factored banded system ready for repeated solves.
pub struct BandLu<S> {
    mat: BandMatrix<S>,
    ipiv: Vec<usize>,
}

impl<S: Scalar> BandLu<S> {
    pub fn solve(&self, b: &[S]) -> Vec<S> {
        let n = self.mat.n;
        let kl = self.mat.kl;
        let ku_tot = self.mat.ku + self.mat.kl;
        let mut x = b.to_vec();
        // forward: apply swaps and L
        for j in 0..n {
            let piv = self.ipiv[j];
            if piv != j {
                x.swap(j, piv);
            }
            let ihi = (j + kl).min(n - 1);
            let xj = x[j];
            for i in (j + 1)..=ihi {
                let m = self.mat.get(i, j);
                if m != S::zero() {
                    x[i] -= m * xj;
                }
            }
        }
        // back substitution with U
        for j in (0..n).rev() {
            let jhi = (j + ku_tot).min(n - 1);
            let mut acc = x[j];
            for k in (j + 1)..=jhi {
                acc -= self.mat.get(j, k) * x[k];
            }
            x[j] = acc / self.mat.get(j, j);
        }
        x
    }
}

/// Conjugate gradients on an SPD operator given as a closure, with an
/// optional projection applied after every operator application (used to
/// stay on the mean-zero subspace).
pub fn conjugate_gradient<S: Scalar>(
    apply: &mut dyn FnMut(&[S], &mut [S]),
    b: &[S],
    tol: f64,
    max_iter: usize,
    project: Option<&dyn Fn(&mut [S])>,
) -> Result<(Vec<S>, usize)> {
    let n = b.len();
    let mut x = vec![S::zero(); n];
    let mut r = b.to_vec();
    if let Some(p) = project {
        p(&mut r);
    }
    let mut p_dir = r.clone();
    let mut az = vec![S::zero(); n];
    let dot = |a: &[S], b: &[S]| -> S { a.iter().zip(b).fold(S::zero(), |s, (x, y)| s + *x * *y) };
    let b_norm = dot(b, b).sqrt().max(sc::<S>(1e-300));
    let mut rr = dot(&r, &r);
    for it in 0..max_iter {
        if rr.sqrt() <= sc::<S>(tol) * b_norm {
            return Ok((x, it));
        }
        apply(&p_dir, &mut az);
        if let Some(pr) = project {
            pr(&mut az);
        }
        let pap = dot(&p_dir, &az);
        if pap <= S::zero() {
            return Err(Error::Numeric(
                "CG: operator not positive definite on the working subspace".into(),
            ));
        }
        let alpha = rr / pap;
        for i in 0..n {
            x[i] += alpha * p_dir[i];
            r[i] -= alpha * az[i];
        }
        if let Some(pr) = project {
            pr(&mut x);
            pr(&mut r);
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p_dir[i] = r[i] + beta * p_dir[i];
        }
    }
    Err(Error::Numeric(format!(
        "CG did not converge in {max_iter} iterations (residual {:.3e})",
        (rr.sqrt() / b_norm).to_f64_lossy()
    )))
}

/// Cyclic tridiagonal solve (periodic spline systems) via Sherman-Morrison.
/// Diagonals: sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = b[i], indices mod n.
pub fn solve_cyclic_tridiag<S: Scalar>(
    sub: &[S],
    diag: &[S],
    sup: &[S],
    b: &[S],
) -> Result<Vec<S>> {
    let n = diag.len();
    assert!(n >= 3);
    let gamma = -diag[0];
    // modified system
    let mut d = diag.to_vec();
    d[0] = diag[0] - gamma;
    d[n - 1] = diag[n - 1] - sub[0] * sup[n - 1] / gamma;
    let solve_tri = |d: &[S], rhs: &[S]| -> Result<Vec<S>> {
        let mut c = vec![S::zero(); n];
        let mut x = vec![S::zero(); n];
        let mut beta = d[0];
        if beta == S::zero() {
            return Err(Error::Numeric("tridiag: zero pivot".into()));
        }
        x[0] = rhs[0] / beta;
        for i in 1..n {
            c[i] = sup[i - 1] / beta;
            beta = d[i] - sub[i] * c[i];
            if beta == S::zero() {
                return Err(Error::Numeric("tridiag: zero pivot".into()));
            }
            x[i] = (rhs[i] - sub[i] * x[i - 1]) / beta;
        }
        for i in (0..n - 1).rev() {
            let xn = x[i + 1];
            x[i] -= c[i + 1] * xn;
        }
        Ok(x)
    };
    let y = solve_tri(&d, b)?;
    let mut u = vec![S::zero(); n];
    u[0] = gamma;
    u[n - 1] = sup[n - 1];
    let z = solve_tri(&d, &u)?;
    // v = (1, sub[0]/gamma) at positions 0 and n-1
    let vy = y[0] + sub[0] * y[n - 1] / gamma;
    let vz = S::one() + z[0] + sub[0] * z[n - 1] / gamma;
    let factor = vy / vz;
    Ok((0..n).map(|i| y[i] - factor * z[i]).collect())
}
