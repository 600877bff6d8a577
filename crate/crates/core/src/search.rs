//! Golden-section search for unimodal functions on a closed interval.

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const MAX_ITER: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimizes `f` on `[a, b]` until the bracket is narrower than `tol`.
///
/// The endpoints are evaluated too, so a monotone objective returns the
/// better endpoint instead of an interior point just inside it.
pub fn golden_section_min<F>(mut f: F, a: f64, b: f64, tol: f64) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let fa = f(lo);
    let fb = f(hi);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evaluations = 4;

    for _ in 0..MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        evaluations += 1;
    }

    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if fa < best.1 {
        best = (a.min(b), fa);
    }
    if fb < best.1 {
        best = (a.max(b), fb);
    }
    Minimum {
        x: best.0,
        value: best.1,
        evaluations,
    }
}

/// Maximizing counterpart of [`golden_section_min`].
pub fn golden_section_max<F>(mut f: F, a: f64, b: f64, tol: f64) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let m = golden_section_min(|x| -f(x), a, b, tol);
    Minimum {
        value: -m.value,
        ..m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parabola() {
        let m = golden_section_min(|x| (x - 0.3).powi(2) + 2.0, 0.0, 1.0, 1e-12);
        assert!((m.x - 0.3).abs() < 1e-7);
        assert!((m.value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn monotone_returns_endpoint() {
        let m = golden_section_min(|x| x, 0.0, 1.0, 1e-10);
        assert_eq!(m.x, 0.0);
        let m = golden_section_max(|x| x, 0.0, 1.0, 1e-10);
        assert_eq!(m.x, 1.0);
        assert_eq!(m.value, 1.0);
    }

    #[test]
    fn reversed_bracket() {
        let m = golden_section_min(|x| (x + 2.0).abs(), 0.0, -5.0, 1e-10);
        assert!((m.x + 2.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn finds_vertex_of_convex_quadratic(c in -10.0f64..10.0, w in 0.1f64..5.0) {
            let m = golden_section_min(|x| w * (x - c).powi(2), -10.0, 10.0, 1e-10);
            prop_assert!((m.x - c).abs() < 1e-6);
        }
    }
}
