//! Problem configuration: physical parameters, validation, and derived
//! spectral quantities shared by every downstream module.
//!
//! A configuration can be built either from physical wall constants
//! (mass per area, tension or bending stiffness, fluid density, frequency,
//! sound speed) or directly from the dimensionless groups
//! `(k, a, alpha_j, mu_j, gamma0, gamma1)` that parameterize the root
//! tables. The dimensionless route is needed because the tables do not
//! determine `rho` and `c` individually.

use crate::{c64, Error, Result};
use num_complex::Complex64;

/// Wall constitutive model. Membrane walls carry third-order boundary
/// conditions, plates fifth-order ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallModel {
    Membrane,
    Plate,
}

impl WallModel {
    /// Degree of the polynomial whose zeros drive the factorization.
    pub fn polynomial_degree(self) -> usize {
        match self {
            WallModel::Membrane => 3,
            WallModel::Plate => 5,
        }
    }

    /// Number of edge constants multiplying the right-hand-side components.
    pub fn constant_count(self) -> usize {
        match self {
            WallModel::Membrane => 4,
            WallModel::Plate => 8,
        }
    }
}

/// One wall: optional physical constants plus the derived spectral pair
/// (alpha_j, mu_j). Both derived values are complex for complex frequency.
#[derive(Debug, Clone, Copy)]
pub struct WallSpec {
    pub mass_per_area: Option<f64>,
    /// Tension (membrane) or bending stiffness (plate).
    pub stiffness: Option<f64>,
    /// Membrane: omega sqrt(m/T). Plate: principal fourth root of
    /// m omega^2 / B.
    pub alpha: Complex64,
    /// rho omega^2 / stiffness, equivalently gamma k^2 for the tables.
    pub mu: Complex64,
}

/// Interior location of the delta source.
#[derive(Debug, Clone, Copy)]
pub struct SourcePoint {
    pub x: f64,
    pub y: f64,
}

/// Validated problem instance. Immutable after construction; cheap to share
/// across concurrent evaluators.
#[derive(Debug, Clone)]
pub struct WaveguideConfig {
    pub omega: Complex64,
    pub c_sound: f64,
    pub rho: f64,
    pub a: f64,
    pub walls: [WallSpec; 3],
    pub model: WallModel,
    pub source: SourcePoint,
    /// Derived wave number k = omega / c.
    pub k: Complex64,
}

/// Raw physical inputs prior to validation.
#[derive(Debug, Clone)]
pub struct PhysicalSpec {
    pub omega: Complex64,
    pub c_sound: f64,
    pub rho: f64,
    pub a: f64,
    /// (mass per area, stiffness) for walls 0 (y=0), 1 (y=a), 2 (x=0).
    pub walls: [(f64, f64); 3],
    pub model: WallModel,
    pub source: SourcePoint,
}

/// Dimensionless inputs reproducing the root tables: wall 2 is given through
/// gamma0 and gamma1, walls 0 and 1 through their spectral pairs directly.
#[derive(Debug, Clone)]
pub struct DimensionlessSpec {
    pub k: Complex64,
    pub a: f64,
    /// gamma0 = alpha_2^2/k^2 (membrane) or alpha_2^4/k^2 (plate).
    pub gamma0: f64,
    /// gamma1 = mu_2/k^2.
    pub gamma1: f64,
    /// (alpha_j, mu_j) for walls 0 and 1.
    pub walls: [(Complex64, Complex64); 2],
    pub model: WallModel,
    pub source: SourcePoint,
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what.to_string()))
    }
}

impl WaveguideConfig {
    /// Build and validate from physical constants.
    pub fn from_physical(raw: PhysicalSpec) -> Result<Self> {
        require(raw.omega.re > 0.0, &format!("Re(omega) must be positive, got {}", raw.omega))?;
        require(raw.omega.im > 0.0, &format!("Im(omega) must be positive, got {}", raw.omega))?;
        require(raw.c_sound > 0.0, "sound speed must be positive")?;
        require(raw.rho > 0.0, "fluid density must be positive")?;
        require(raw.a > 0.0, "strip width must be positive")?;
        let k = raw.omega / raw.c_sound;
        let omega2 = raw.omega * raw.omega;
        let mut walls = [WallSpec { mass_per_area: None, stiffness: None, alpha: c64(0.0, 0.0), mu: c64(0.0, 0.0) }; 3];
        for (j, &(m, s)) in raw.walls.iter().enumerate() {
            require(m > 0.0, &format!("wall {j}: mass per area must be positive, got {m}"))?;
            require(s > 0.0, &format!("wall {j}: stiffness must be positive, got {s}"))?;
            let alpha = match raw.model {
                WallModel::Membrane => raw.omega * (m / s).sqrt(),
                // Principal fourth root of m omega^2 / B.
                WallModel::Plate => (omega2 * (m / s)).powf(0.25),
            };
            walls[j] = WallSpec { mass_per_area: Some(m), stiffness: Some(s), alpha, mu: raw.rho * omega2 / s };
        }
        let cfg = WaveguideConfig {
            omega: raw.omega,
            c_sound: raw.c_sound,
            rho: raw.rho,
            a: raw.a,
            walls,
            model: raw.model,
            source: raw.source,
            k,
        };
        cfg.validate_common(true)?;
        Ok(cfg)
    }

    /// Build and validate from the dimensionless groups. The wave number may
    /// sit on the boundary of the first quadrant (real or imaginary k), as
    /// the root tables do.
    pub fn from_dimensionless(raw: DimensionlessSpec) -> Result<Self> {
        require(raw.k.re >= 0.0 && raw.k.im >= 0.0, "k must lie in the closed first quadrant")?;
        require(raw.k.norm() > 0.0, "k must be nonzero")?;
        require(raw.a > 0.0, "strip width must be positive")?;
        require(raw.gamma0 > 0.0, "gamma0 must be positive")?;
        require(raw.gamma1 > 0.0, "gamma1 must be positive")?;
        let k2 = raw.k * raw.k;
        let alpha2 = match raw.model {
            WallModel::Membrane => (raw.gamma0 * k2).sqrt(),
            WallModel::Plate => (raw.gamma0 * k2).powf(0.25),
        };
        let wall = |(alpha, mu): (Complex64, Complex64)| WallSpec { mass_per_area: None, stiffness: None, alpha, mu };
        let walls = [raw.walls[0], raw.walls[1], (alpha2, raw.gamma1 * k2)].map(wall);
        let cfg = WaveguideConfig {
            omega: raw.k, // c = 1 convention for dimensionless instances
            c_sound: 1.0,
            rho: 1.0,
            a: raw.a,
            walls,
            model: raw.model,
            source: raw.source,
            k: raw.k,
        };
        cfg.validate_common(false)?;
        Ok(cfg)
    }

    fn validate_common(&self, strict_omega: bool) -> Result<()> {
        require(self.k.im >= 0.0, "Im(k) must be nonnegative")?;
        require(self.k.norm() > 0.0, "k must be nonzero")?;
        require(self.source.x > 0.0, &format!("source x must be positive, got {}", self.source.x))?;
        require(
            self.source.y > 0.0 && self.source.y < self.a,
            &format!("source y must be strictly interior to (0, {}), got {}", self.a, self.source.y),
        )?;
        if self.model == WallModel::Membrane && strict_omega {
            for (j, w) in self.walls.iter().enumerate() {
                require(w.alpha.im > 0.0, &format!("wall {j}: Im(alpha) must be positive for a membrane"))?;
            }
        }
        Ok(())
    }

    /// gamma0 = alpha_2^2/k^2 (membrane) or alpha_2^4/k^2 (plate).
    pub fn gamma0(&self) -> Complex64 {
        let k2 = self.k * self.k;
        match self.model {
            WallModel::Membrane => self.walls[2].alpha.powu(2) / k2,
            WallModel::Plate => self.walls[2].alpha.powu(4) / k2,
        }
    }

    /// gamma1 = mu_2/k^2.
    pub fn gamma1(&self) -> Complex64 {
        self.walls[2].mu / (self.k * self.k)
    }

    pub fn alpha(&self, j: usize) -> Complex64 {
        self.walls[j].alpha
    }

    pub fn mu(&self, j: usize) -> Complex64 {
        self.walls[j].mu
    }
}

/// Dimensionless configuration with walls 0 and 1 sharing the vertical
/// wall's material groups; the form used for the table reproductions and
/// the default test instances.
pub fn table_config(
    model: WallModel,
    k: Complex64,
    gamma0: f64,
    gamma1: f64,
    a: f64,
    source: SourcePoint,
) -> Result<WaveguideConfig> {
    let k2 = k * k;
    let alpha_h = match model {
        WallModel::Membrane => (gamma0 * k2).sqrt(),
        WallModel::Plate => (gamma0 * k2).powf(0.25),
    };
    let mu_h = gamma1 * k2;
    WaveguideConfig::from_dimensionless(DimensionlessSpec {
        k,
        a,
        gamma0,
        gamma1,
        walls: [(alpha_h, mu_h), (alpha_h, mu_h)],
        model,
        source,
    })
}
