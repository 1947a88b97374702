//! Quadrature kernels: fixed-order Gauss-Legendre panels and an adaptive
//! bisection scheme with a nested error estimate.

use crate::scalar::{sc, Scalar};
use crate::{Error, Result};

/// Gauss-Legendre nodes/weights on [-1, 1], computed once per order by
/// Newton iteration on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed-order Gauss panel on [a, b].
pub fn gauss_panel<S: Scalar>(f: &mut dyn FnMut(S) -> S, a: S, b: S, order: usize) -> S {
    let (nodes, weights) = gauss_legendre(order);
    let half = (b - a) * sc::<S>(0.5);
    let mid = (a + b) * sc::<S>(0.5);
    let mut acc = S::zero();
    for (x, w) in nodes.iter().zip(weights.iter()) {
        acc += sc::<S>(*w) * f(mid + half * sc::<S>(*x));
    }
    acc * half
}

/// Composite fixed-order Gauss with `panels` equal panels.
pub fn gauss_composite<S: Scalar>(
    f: &mut dyn FnMut(S) -> S,
    a: S,
    b: S,
    panels: usize,
    order: usize,
) -> S {
    let (nodes, weights) = gauss_legendre(order);
    let step = (b - a) / sc::<S>(panels as f64);
    let mut acc = S::zero();
    for p in 0..panels {
        let lo = a + step * sc::<S>(p as f64);
        let hi = lo + step;
        let half = (hi - lo) * sc::<S>(0.5);
        let mid = (lo + hi) * sc::<S>(0.5);
        for (x, w) in nodes.iter().zip(weights.iter()) {
            acc += sc::<S>(*w) * f(mid + half * sc::<S>(*x)) * half;
        }
    }
    acc
}

/// Adaptive quadrature by interval bisection: the worst-error interval is
/// split until the summed error proxy |two halves - whole| meets the
/// tolerance. Starts from several panels so narrow features are seen.
pub fn adaptive<S: Scalar>(
    f: &mut dyn FnMut(S) -> S,
    a: S,
    b: S,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<S> {
    const ORDER: usize = 15;
    const INIT_PANELS: usize = 16;
    const MAX_DEPTH: usize = 60;
    const MAX_SEGMENTS: usize = 100_000;

    #[derive(Clone, Copy)]
    struct Seg<S> {
        a: S,
        b: S,
        val: S,
        err: S,
        depth: usize,
    }

    let make = |f: &mut dyn FnMut(S) -> S, lo: S, hi: S, depth: usize| -> Seg<S> {
        let whole = gauss_panel(f, lo, hi, ORDER);
        let mid = (lo + hi) * sc::<S>(0.5);
        let refined = gauss_panel(f, lo, mid, ORDER) + gauss_panel(f, mid, hi, ORDER);
        Seg {
            a: lo,
            b: hi,
            val: refined,
            err: (refined - whole).abs(),
            depth,
        }
    };

    let mut segs: Vec<Seg<S>> = Vec::with_capacity(64);
    let step = (b - a) / sc::<S>(INIT_PANELS as f64);
    for i in 0..INIT_PANELS {
        let lo = a + step * sc::<S>(i as f64);
        let hi = if i + 1 == INIT_PANELS { b } else { lo + step };
        segs.push(make(f, lo, hi, 0));
    }

    loop {
        let total: S = segs.iter().fold(S::zero(), |s, x| s + x.val);
        let err: S = segs.iter().fold(S::zero(), |s, x| s + x.err);
        let budget = sc::<S>(rel_tol) * total.abs() + sc::<S>(abs_tol);
        if err <= budget {
            return Ok(total);
        }
        // split the worst interval
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| x.err.partial_cmp(&y.err).unwrap())
            .unwrap();
        let seg = segs.swap_remove(worst);
        if seg.depth >= MAX_DEPTH {
            return Err(Error::Numeric(format!(
                "adaptive quadrature did not converge on [{}, {}] (residual {})",
                seg.a.to_f64_lossy(),
                seg.b.to_f64_lossy(),
                seg.err.to_f64_lossy()
            )));
        }
        let mid = (seg.a + seg.b) * sc::<S>(0.5);
        segs.push(make(f, seg.a, mid, seg.depth + 1));
        segs.push(make(f, mid, seg.b, seg.depth + 1));
        if segs.len() > MAX_SEGMENTS {
            return Err(Error::Numeric(
                "adaptive quadrature exceeded interval budget".into(),
            ));
        }
    }
}

/// Tensor-product Gauss quadrature of a 2D integrand over an axis-aligned box.
pub fn gauss_2d<S: Scalar>(
    f: &mut dyn FnMut(S, S) -> S,
    (a1, b1): (S, S),
    (a2, b2): (S, S),
    panels: (usize, usize),
    order: usize,
) -> S {
    let (nodes, weights) = gauss_legendre(order);
    let step1 = (b1 - a1) / sc::<S>(panels.0 as f64);
    let step2 = (b2 - a2) / sc::<S>(panels.1 as f64);
    let mut acc = S::zero();
    for p in 0..panels.0 {
        let lo1 = a1 + step1 * sc::<S>(p as f64);
        let mid1 = lo1 + step1 * sc::<S>(0.5);
        let h1 = step1 * sc::<S>(0.5);
        for q in 0..panels.1 {
            let lo2 = a2 + step2 * sc::<S>(q as f64);
            let mid2 = lo2 + step2 * sc::<S>(0.5);
            let h2 = step2 * sc::<S>(0.5);
            for (xi, wi) in nodes.iter().zip(weights.iter()) {
                let x = mid1 + h1 * sc::<S>(*xi);
                for (yj, wj) in nodes.iter().zip(weights.iter()) {
                    let y = mid2 + h2 * sc::<S>(*yj);
                    acc += sc::<S>(wi * wj) * f(x, y) * h1 * h2;
                }
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_nodes_integrate_polynomials_exactly() {
        // order n integrates degree 2n-1 exactly
        let v: f64 = gauss_panel(&mut |x: f64| x.powi(9) + 3.0 * x * x, -1.0, 1.0, 5);
        assert!((v - 2.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn adaptive_handles_smooth_and_peaked() {
        let v: f64 = adaptive(&mut |x: f64| x.exp(), 0.0, 1.0, 1e-12, 1e-14).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-11);
        // narrow peak
        let v: f64 = adaptive(
            &mut |x: f64| (-(x - 0.3371).powi(2) / 1e-6).exp(),
            0.0,
            1.0,
            1e-10,
            1e-14,
        )
        .unwrap();
        let exact = (std::f64::consts::PI * 1e-6).sqrt();
        assert!((v - exact).abs() / exact < 1e-8, "{v} vs {exact}");
    }

    #[test]
    fn adaptive_is_additive_over_adjacent_intervals() {
        let mut f = |x: f64| (5.0 * x).sin() / (1.0 + x * x);
        let whole: f64 = adaptive(&mut f, 0.0, 2.0, 1e-12, 1e-15).unwrap();
        let l: f64 = adaptive(&mut f, 0.0, 0.7, 1e-12, 1e-15).unwrap();
        let r: f64 = adaptive(&mut f, 0.7, 2.0, 1e-12, 1e-15).unwrap();
        assert!(
            (whole - (l + r)).abs() <= 1e-12 * (1.0 + whole.abs()),
            "additivity violated: {whole} vs {}",
            l + r
        );
    }

    #[test]
    fn gauss_2d_separable() {
        let v: f64 = gauss_2d(
            &mut |x: f64, y: f64| x * x * y,
            (0.0, 1.0),
            (0.0, 2.0),
            (2, 2),
            6,
        );
        assert!((v - (1.0 / 3.0) * 2.0).abs() < 1e-13);
    }
}
