//! Interchangeable one-dimensional maximizers over a closed interval.
//!
//! Every method takes the objective, the bounds, and an absolute tolerance on
//! the argument, and returns an approximate argmax. They are used for ability
//! estimation and for the per-coordinate item updates inside the EM fit.

use serde::{Deserialize, Serialize};

/// Named search method for ability estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    Golden,
    Brent,
    Bounded,
    Ternary,
    Fibonacci,
    Dichotomous,
    Golden2,
}

impl SearchMethod {
    pub const ALL: [SearchMethod; 7] = [
        SearchMethod::Golden,
        SearchMethod::Brent,
        SearchMethod::Bounded,
        SearchMethod::Ternary,
        SearchMethod::Fibonacci,
        SearchMethod::Dichotomous,
        SearchMethod::Golden2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SearchMethod::Golden => "golden",
            SearchMethod::Brent => "brent",
            SearchMethod::Bounded => "bounded",
            SearchMethod::Ternary => "ternary",
            SearchMethod::Fibonacci => "fibonacci",
            SearchMethod::Dichotomous => "dichotomous",
            SearchMethod::Golden2 => "golden2",
        }
    }

    pub fn parse(s: &str) -> Option<SearchMethod> {
        Self::ALL.iter().copied().find(|m| m.name() == s)
    }

    /// Run this method on `f` over `[lo, hi]` with absolute tolerance `tol`.
    pub fn maximize<F: Fn(f64) -> f64>(self, f: F, lo: f64, hi: f64, tol: f64) -> f64 {
        match self {
            SearchMethod::Golden => golden(f, lo, hi, tol),
            SearchMethod::Brent => brent(f, lo, hi, tol),
            SearchMethod::Bounded => bounded(f, lo, hi, tol),
            SearchMethod::Ternary => ternary(f, lo, hi, tol),
            SearchMethod::Fibonacci => fibonacci(f, lo, hi, tol),
            SearchMethod::Dichotomous => dichotomous(f, lo, hi, tol),
            SearchMethod::Golden2 => golden2(f, lo, hi, tol),
        }
    }
}

const INVPHI: f64 = 0.618_033_988_749_894_9; // 1/phi
const INVPHI2: f64 = 0.381_966_011_250_105_1; // 1/phi^2

/// Golden-section search reusing one interior evaluation per iteration.
pub fn golden<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    let mut h = b - a;
    let mut c = a + INVPHI2 * h;
    let mut d = a + INVPHI * h;
    let mut fc = f(c);
    let mut fd = f(d);
    while h > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            h = b - a;
            c = a + INVPHI2 * h;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            h = b - a;
            d = a + INVPHI * h;
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Golden-section variant recomputing both interior points every iteration.
pub fn golden2<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let c = b - INVPHI * (b - a);
        let d = a + INVPHI * (b - a);
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

/// Ternary search: drop one outer third per iteration.
pub fn ternary<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) < f(m2) {
            a = m1;
        } else {
            b = m2;
        }
    }
    0.5 * (a + b)
}

/// Dichotomous search: probe just left and right of the midpoint.
pub fn dichotomous<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let eps = tol / 4.0;
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if f(mid - eps) < f(mid + eps) {
            a = mid - eps;
        } else {
            b = mid + eps;
        }
    }
    0.5 * (a + b)
}

/// Fibonacci-ratio section search sized so the final interval fits `tol`.
pub fn fibonacci<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let mut fibs: Vec<f64> = vec![1.0, 1.0];
    while *fibs.last().unwrap() < (hi - lo) / tol {
        let n = fibs.len();
        fibs.push(fibs[n - 1] + fibs[n - 2]);
    }
    let (mut a, mut b) = (lo, hi);
    let mut k = fibs.len() - 1;
    while k > 2 && b - a > tol {
        let x1 = a + (fibs[k - 2] / fibs[k]) * (b - a);
        let x2 = a + (fibs[k - 1] / fibs[k]) * (b - a);
        if f(x1) > f(x2) {
            b = x2;
        } else {
            a = x1;
        }
        k -= 1;
    }
    0.5 * (a + b)
}

/// Brent's method (parabolic interpolation with golden-section fallback),
/// run on the negated objective.
pub fn brent<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let g = |x: f64| -f(x);
    const CGOLD: f64 = 0.381_966_011_250_105_1;
    let (mut a, mut b) = (lo, hi);
    let mut x = a + CGOLD * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = g(x);
    let mut fw = fx;
    let mut fv = fx;
    let mut d = 0.0f64;
    let mut e = 0.0f64;
    let tol1 = 0.5 * tol;
    let tol2 = tol;

    for _ in 0..200 {
        let xm = 0.5 * (a + b);
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut use_golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = d;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if xm - x >= 0.0 { tol1 } else { -tol1 };
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x >= xm { a - x } else { b - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else {
            x + if d >= 0.0 { tol1 } else { -tol1 }
        };
        let fu = g(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            w = x;
            x = u;
            fv = fw;
            fw = fx;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                w = u;
                fv = fw;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    x
}

/// Bound-aware Brent variant in the style of `fminbound`.
pub fn bounded<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let g = |x: f64| -f(x);
    let sqrt_eps = (f64::EPSILON * 2.0).sqrt();
    const GOLDEN_MEAN: f64 = 0.381_966_011_250_105_1;
    let (mut a, mut b) = (lo, hi);
    let mut xf = a + GOLDEN_MEAN * (b - a);
    let mut nfc = xf;
    let mut fulc = xf;
    let mut rat = 0.0f64;
    let mut e = 0.0f64;
    let mut fx = g(xf);
    let mut fnfc = fx;
    let mut ffulc = fx;
    let mut xm = 0.5 * (a + b);
    let mut tol1 = sqrt_eps * xf.abs() + tol / 3.0;
    let mut tol2 = 2.0 * tol1;

    let mut iterations = 0;
    while (xf - xm).abs() > tol2 - 0.5 * (b - a) {
        let mut use_golden = true;
        if e.abs() > tol1 {
            let r = (xf - nfc) * (fx - ffulc);
            let mut q = (xf - fulc) * (fx - fnfc);
            let mut p = (xf - fulc) * q - (xf - nfc) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let r_prev = e;
            e = rat;
            if p.abs() < (0.5 * q * r_prev).abs() && p > q * (a - xf) && p < q * (b - xf) {
                rat = p / q;
                let x = xf + rat;
                if x - a < tol2 || b - x < tol2 {
                    let si = if xm - xf >= 0.0 { 1.0 } else { -1.0 };
                    rat = tol1 * si;
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if xf >= xm { a - xf } else { b - xf };
            rat = GOLDEN_MEAN * e;
        }
        let si = if rat >= 0.0 { 1.0 } else { -1.0 };
        let x = xf + si * rat.abs().max(tol1);
        let fu = g(x);
        if fu <= fx {
            if x >= xf {
                a = xf;
            } else {
                b = xf;
            }
            fulc = nfc;
            ffulc = fnfc;
            nfc = xf;
            fnfc = fx;
            xf = x;
            fx = fu;
        } else {
            if x < xf {
                a = x;
            } else {
                b = x;
            }
            if fu <= fnfc || nfc == xf {
                fulc = nfc;
                ffulc = fnfc;
                nfc = x;
                fnfc = fu;
            } else if fu <= ffulc || fulc == xf || fulc == nfc {
                fulc = x;
                ffulc = fu;
            }
        }
        xm = 0.5 * (a + b);
        tol1 = sqrt_eps * xf.abs() + tol / 3.0;
        tol2 = 2.0 * tol1;
        iterations += 1;
        if iterations >= 500 {
            break;
        }
    }
    xf
}
