//! Complex-valued helpers: scaled (overflow-safe) arithmetic and small
//! comparison utilities used by tests and tolerances.

use num_complex::Complex64;

/// A complex number stored as `val * exp(exponent)` with `exponent` real.
///
/// Hyperbolic factors like `cosh(a*zeta)` overflow `f64` once
/// `|Re(a*zeta)| > ~700`, while every quantity the solver actually needs is a
/// ratio in which those factors cancel. `Scaled` keeps the exponent separate
/// so the cancellation happens exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub val: Complex64,
    pub exponent: f64,
}

impl Scaled {
    pub fn new(val: Complex64, exponent: f64) -> Self {
        Scaled { val, exponent }
    }

    pub fn from_complex(val: Complex64) -> Self {
        Scaled { val, exponent: 0.0 }
    }

    pub fn zero() -> Self {
        Scaled { val: Complex64::new(0.0, 0.0), exponent: 0.0 }
    }

    pub fn mul(self, other: Scaled) -> Self {
        Scaled::new(self.val * other.val, self.exponent + other.exponent)
    }

    pub fn mul_c(self, other: Complex64) -> Self {
        Scaled::new(self.val * other, self.exponent)
    }

    pub fn div(self, other: Scaled) -> Self {
        Scaled::new(self.val / other.val, self.exponent - other.exponent)
    }

    pub fn neg(self) -> Self {
        Scaled::new(-self.val, self.exponent)
    }

    /// Sum with exponent realignment to the larger scale.
    pub fn add(self, other: Scaled) -> Self {
        if self.val == Complex64::new(0.0, 0.0) {
            return other;
        }
        if other.val == Complex64::new(0.0, 0.0) {
            return self;
        }
        let (hi, lo) = if self.exponent >= other.exponent { (self, other) } else { (other, self) };
        let shift = (lo.exponent - hi.exponent).exp();
        Scaled::new(hi.val + lo.val * shift, hi.exponent)
    }

    /// Collapse to a plain complex value; infinite on genuine overflow.
    pub fn collapse(self) -> Complex64 {
        if self.val == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        // Move part of the exponent into the mantissa first so that
        // moderately large exponents with small mantissas still collapse.
        let adj = self.val.norm().ln();
        let total = self.exponent + adj;
        if total > 700.0 {
            return Complex64::new(f64::INFINITY, f64::INFINITY);
        }
        let unit = self.val / self.val.norm();
        unit * total.exp()
    }

    pub fn log_abs(self) -> f64 {
        self.exponent + self.val.norm().ln()
    }
}

/// `cosh(z)` and `sinh(z)` with the scale `exp(|Re z|)` factored out.
/// Returns `(cosh_scaled, sinh_scaled, exponent)` so that
/// `cosh z = cosh_scaled * exp(exponent)` and likewise for `sinh`.
pub fn cosh_sinh_scaled(z: Complex64) -> (Complex64, Complex64, f64) {
    let sigma = z.re.abs();
    let ep = (z - sigma).exp();
    let em = (-z - sigma).exp();
    ((ep + em) * 0.5, (ep - em) * 0.5, sigma)
}

/// Relative difference `|a - b| / max(scale, |a|, |b|)`.
pub fn rel_err(a: Complex64, b: Complex64, scale: f64) -> f64 {
    let denom = scale.max(a.norm()).max(b.norm());
    if denom == 0.0 {
        0.0
    } else {
        (a - b).norm() / denom
    }
}

/// Both square roots of a complex number, principal one first.
pub fn sqrt_pair(z: Complex64) -> (Complex64, Complex64) {
    let r = z.sqrt();
    (r, -r)
}
