//! Quadrature toolkit: Gauss-Kronrod panels, deterministic adaptive
//! subdivision, half-line integrals with tail bounds, and a Cauchy-integral
//! evaluator with explicit pole subtraction for points on or near the
//! contour.

use crate::{c64, Error, Result};
use num_complex::Complex64;

// QUADPACK 15-point Kronrod rule on [-1, 1] (7-point Gauss embedded).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss-Kronrod panel over [a, b]: returns (K15 value, |K15 - G7|).
pub fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).norm())
}

#[derive(Debug, Clone, Copy)]
pub struct Tol {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol { rel: 1e-10, abs: 1e-13 }
    }
}

impl Tol {
    pub fn new(rel: f64, abs: f64) -> Self {
        Tol { rel, abs }
    }

    fn bound(&self, value_norm: f64) -> f64 {
        self.abs.max(self.rel * value_norm)
    }
}

/// Deterministic adaptive integration over [a, b]: repeatedly split the
/// worst panel (ties broken by the left endpoint) until the summed error
/// estimate meets the tolerance.
pub fn integrate<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: Tol) -> Result<(Complex64, f64)> {
    #[derive(Clone, Copy)]
    struct Panel {
        a: f64,
        b: f64,
        val: Complex64,
        err: f64,
    }
    let (val, err) = gk15(f, a, b);
    let mut panels = vec![Panel { a, b, val, err }];
    for _ in 0..2000 {
        let total: Complex64 = panels.iter().map(|p| p.val).sum();
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        if total_err <= tol.bound(total.norm()) {
            let mut sorted = panels.clone();
            sorted.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap());
            let v = sorted.iter().map(|p| p.val).sum();
            return Ok((v, total_err));
        }
        // Worst panel, deterministic tie-break.
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            let w = &panels[worst];
            if p.err > w.err || (p.err == w.err && p.a < w.a) {
                worst = i;
            }
        }
        let p = panels.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // Panel width at floating-point resolution; keep its estimate.
            panels.push(p);
            let total: Complex64 = panels.iter().map(|q| q.val).sum();
            let total_err: f64 = panels.iter().map(|q| q.err).sum();
            return Err(Error::QuadratureNotConverged { estimate: total.norm() + total_err, tolerance: tol.bound(total.norm()) });
        }
        let (v1, e1) = gk15(f, p.a, m);
        let (v2, e2) = gk15(f, m, p.b);
        panels.push(Panel { a: p.a, b: m, val: v1, err: e1 });
        panels.push(Panel { a: m, b: p.b, val: v2, err: e2 });
    }
    let total: Complex64 = panels.iter().map(|p| p.val).sum();
    let total_err: f64 = panels.iter().map(|p| p.err).sum();
    Err(Error::QuadratureNotConverged { estimate: total_err, tolerance: tol.bound(total.norm()) })
}

/// Integral over [0, inf) of a decaying integrand. The range is extended in
/// octaves until two consecutive octaves contribute less than the tolerance;
/// the remaining tail is bounded by power-law extrapolation of the last
/// octave and added to the error estimate.
pub fn integrate_half_line<F: Fn(f64) -> Complex64>(
    f: &F,
    first_span: f64,
    tol: Tol,
) -> Result<(Complex64, f64)> {
    let inner = Tol::new(tol.rel * 0.1, tol.abs * 0.1);
    let (mut total, mut err) = integrate(f, 0.0, first_span, inner)?;
    let mut lo = first_span;
    let mut small_streak = 0;
    let mut last_octave = c64(0.0, 0.0).norm();
    for _ in 0..48 {
        let hi = lo * 2.0;
        let (v, e) = integrate(f, lo, hi, inner)?;
        total += v;
        err += e;
        last_octave = v.norm();
        let guard = tol.bound(total.norm());
        if v.norm() + e < 0.25 * guard {
            small_streak += 1;
            if small_streak >= 2 {
                // Geometric extrapolation of the octave sequence as a tail
                // bound: for integrands decaying at least like 1/t^2 each
                // octave is at most half the previous one.
                err += 2.0 * last_octave;
                return Ok((total, err));
            }
        } else {
            small_streak = 0;
        }
        lo = hi;
    }
    Err(Error::QuadratureNotConverged { estimate: last_octave, tolerance: tol.bound(total.norm()) })
}

/// Which boundary value of a Cauchy integral to take when the evaluation
/// point lies on the contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Cauchy integral of an odd density,
/// `psi(eta) = (1/(2 pi i)) \int_R g(tau) / (tau - eta) dtau`,
/// evaluated through the folded half-line form
/// `(1/(pi i)) \int_0^inf g(tau) tau / (tau^2 - eta^2) dtau`.
///
/// `g` must be odd and analytic in a strip around the real axis; it is also
/// evaluated at the complex point `eta` itself when pole subtraction is
/// engaged near the axis. For real `eta` the `side` selects the limit from
/// above or below.
pub struct CauchyKernel<'a> {
    pub density: &'a dyn Fn(Complex64) -> Complex64,
    pub first_span: f64,
    pub tol: Tol,
}

impl<'a> CauchyKernel<'a> {
    pub fn new(density: &'a dyn Fn(Complex64) -> Complex64) -> Self {
        CauchyKernel { density, first_span: 8.0, tol: Tol::default() }
    }

    pub fn with_tol(mut self, tol: Tol) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_first_span(mut self, span: f64) -> Self {
        self.first_span = span;
        self
    }

    pub fn eval(&self, eta: Complex64, side: Side) -> Result<Complex64> {
        let g = self.density;
        let near_axis = eta.im.abs() <= 0.05 * (1.0 + eta.re.abs());
        let inv_pi_i = c64(0.0, -1.0) / std::f64::consts::PI; // 1/(pi i)
        if !near_axis {
            let integrand = |t: f64| {
                let tau = c64(t, 0.0);
                g(tau) * t / (tau * tau - eta * eta)
            };
            let span = self.first_span.max(2.0 * eta.norm());
            let (v, _e) = integrate_half_line(&integrand, span, self.tol)?;
            return Ok(inv_pi_i * v);
        }
        // Pole subtraction: fold integral minus g(eta)*eta/(tau^2-eta^2),
        // whose half-line integral is +- i pi / (2 eta) exactly.
        if eta.norm() < 1e-12 {
            // Density is odd, so the fold at eta = 0 reduces to the regular
            // integral of g(tau)/tau.
            let integrand = |t: f64| {
                let tau = c64(t, 0.0);
                if t == 0.0 { c64(0.0, 0.0) } else { g(tau) / tau }
            };
            let (v, _e) = integrate_half_line(&integrand, self.first_span, self.tol)?;
            return Ok(inv_pi_i * v);
        }
        let upper = if eta.im > 0.0 {
            true
        } else if eta.im < 0.0 {
            false
        } else {
            side == Side::Plus
        };
        let g_eta = g(eta);
        let integrand = |t: f64| {
            let tau = c64(t, 0.0);
            let denom = tau * tau - eta * eta;
            (g(tau) * tau - g_eta * eta) / denom
        };
        // Keep panel edges away from the near-pole abscissa so that the
        // subtracted quotient is evaluated at well-separated nodes.
        let p = eta.re.abs().max(1e-6);
        let span = (2.0 * p).max(self.first_span);
        let inner = Tol::new(self.tol.rel * 0.1, self.tol.abs * 0.1);
        let (v1, _) = integrate(&|t| integrand(t), 0.0, p, inner)?;
        let (v2, _) = integrate(&|t| integrand(t), p, span, inner)?;
        let mut total = v1 + v2;
        // Extend outward in octaves.
        let mut lo = span;
        let mut streak = 0;
        for _ in 0..48 {
            let hi = lo * 2.0;
            let (v, e) = integrate(&|t| integrand(t), lo, hi, inner)?;
            total += v;
            if v.norm() + e < 0.25 * self.tol.bound(total.norm()) {
                streak += 1;
                if streak >= 2 {
                    break;
                }
            } else {
                streak = 0;
            }
            lo = hi;
        }
        let half_pi_term = if upper { c64(0.0, 0.5) * std::f64::consts::PI } else { -c64(0.0, 0.5) * std::f64::consts::PI };
        // psi = (1/(pi i)) [ subtracted integral + g(eta)*eta * (+-i pi/(2 eta)) ]
        //     = (1/(pi i)) * subtracted + (+-1/2) g(eta)
        Ok(inv_pi_i * (total + g_eta * half_pi_term))
    }
}

/// Oscillatory tail correction for `(1/(2 pi)) \int_T^inf A(eta) e^{-i eta x} d eta`
/// by two steps of integration by parts, with `A` sampled numerically.
/// Valid when `A` varies slowly compared to the oscillation.
pub fn oscillatory_tail<F: Fn(f64) -> Complex64>(a: &F, t_end: f64, x: f64, step: f64) -> Complex64 {
    if x == 0.0 {
        return c64(0.0, 0.0);
    }
    let ix = c64(0.0, x);
    let a0 = a(t_end);
    let da = (a(t_end + step) - a(t_end - step)) / (2.0 * step);
    let phase = (c64(0.0, -t_end * x)).exp();
    // int_T^inf A e^{-i eta x} = e^{-iTx} [ A(T)/(ix) + A'(T)/(ix)^2 + ... ]
    phase * (a0 / ix + da / (ix * ix)) / (2.0 * std::f64::consts::PI)
}
