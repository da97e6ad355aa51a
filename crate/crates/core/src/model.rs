//! Network geometry for power-law node intensities and the limiting
//! distribution of scaled interferer powers.
//!
//! Nodes live in a disk of radius `R` around the receiver with intensity
//! `Λ(r, θ) = ρ r^ε`. The expected node count in the disk is
//!
//! ```text
//! n = 2πρ R^(2+ε) / (2+ε)
//! ```
//!
//! and `g(n) = R` is its inverse. Scaling each interferer's received power
//! `r_i^(−α)` by `R^α` gives `p̃_i = (r_i / R)^(−α) ≥ 1`, whose CDF tends to
//! `H(x) = 1 − x^(−(2+ε)/α)` on `x ≥ 1`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{self, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawIntensity {
    rho: f64,
    epsilon: f64,
}

impl PowerLawIntensity {
    pub fn new(rho: f64, epsilon: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(invalid(format!("rho must be positive, got {rho}")));
        }
        if !(epsilon > -2.0 && epsilon.is_finite()) {
            return Err(invalid(format!("epsilon must exceed -2, got {epsilon}")));
        }
        Ok(Self { rho, epsilon })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `2 + ε`, the exponent of R in the node-count relation.
    pub fn order(&self) -> f64 {
        2.0 + self.epsilon
    }

    /// `Λ(r) = ρ r^ε`; the intensity has no angular dependence.
    pub fn at(&self, r: f64) -> f64 {
        self.rho * r.powf(self.epsilon)
    }
}

/// g(n): radius of the disk holding `n` nodes in expectation.
pub fn radius_for_count(intensity: &PowerLawIntensity, n: f64) -> Result<f64> {
    if !(n >= 1.0 && n.is_finite()) {
        return Err(invalid(format!("node count must be at least 1, got {n}")));
    }
    let k = intensity.order();
    Ok((k * n / (2.0 * PI * intensity.rho)).powf(1.0 / k))
}

/// Expected node count inside radius `radius`.
pub fn count_for_radius(intensity: &PowerLawIntensity, radius: f64) -> Result<f64> {
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(invalid(format!("radius must be non-negative, got {radius}")));
    }
    let k = intensity.order();
    Ok(2.0 * PI * intensity.rho / k * radius.powf(k))
}

/// A disk of interferers: node count, radius and the intensity that ties them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkGeometry {
    n_nodes: usize,
    radius: f64,
    intensity: PowerLawIntensity,
}

impl NetworkGeometry {
    /// Exact radius for `n_nodes`.
    pub fn from_count(intensity: PowerLawIntensity, n_nodes: usize) -> Result<Self> {
        let radius = radius_for_count(&intensity, n_nodes as f64)?;
        Ok(Self {
            n_nodes,
            radius,
            intensity,
        })
    }

    /// Keeps `radius` as given and rounds the expected count to the nearest integer.
    pub fn from_radius(intensity: PowerLawIntensity, radius: f64) -> Result<Self> {
        let n = count_for_radius(&intensity, radius)?.round();
        if n < 1.0 {
            return Err(invalid(format!("radius {radius} holds fewer than one node")));
        }
        Ok(Self {
            n_nodes: n as usize,
            radius,
            intensity,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn intensity(&self) -> &PowerLawIntensity {
        &self.intensity
    }
}

/// Interferer positions in polar coordinates around the receiver.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodeSet {
    pub radii: Vec<f64>,
    pub angles: Vec<f64>,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

/// Inverse-CDF map from `u ∈ (0, 1]` to a radius with density ∝ r^(ε+1) on (0, R].
pub fn radius_from_uniform(radius: f64, epsilon: f64, u: f64) -> f64 {
    radius * u.powf(1.0 / (2.0 + epsilon))
}

/// Uniform draw on (0, 1].
fn open_closed_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Draws `n` independent node positions. Radii that underflow to zero are redrawn.
pub fn sample_nodes<R: Rng + ?Sized>(geometry: &NetworkGeometry, rng: &mut R) -> NodeSet {
    let n = geometry.n_nodes;
    let eps = geometry.intensity.epsilon;
    let mut radii = Vec::with_capacity(n);
    let mut angles = Vec::with_capacity(n);
    for _ in 0..n {
        let r = loop {
            let r = radius_from_uniform(geometry.radius, eps, open_closed_unit(rng));
            if r > 0.0 {
                break r;
            }
        };
        radii.push(r);
        angles.push(2.0 * PI * open_closed_unit(rng));
    }
    NodeSet { radii, angles }
}

/// Scaled powers `p̃_i = (r_i / R)^(−α)`.
pub fn empirical_scaled_powers(nodes: &NodeSet, radius: f64, alpha: f64) -> Result<Vec<f64>> {
    if !(alpha > 2.0) {
        return Err(invalid(format!("alpha must exceed 2, got {alpha}")));
    }
    if !(radius > 0.0) {
        return Err(invalid(format!("radius must be positive, got {radius}")));
    }
    nodes
        .radii
        .iter()
        .enumerate()
        .map(|(index, &r)| {
            if r <= 0.0 {
                Err(Error::ZeroRadiusNode { index })
            } else {
                Ok((r / radius).powf(-alpha))
            }
        })
        .collect()
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A caller-supplied limiting distribution of scaled powers.
#[derive(Clone)]
pub struct GeneralDistribution {
    cdf: RealFn,
    density: RealFn,
    support_lower: f64,
}

impl GeneralDistribution {
    /// Tolerance on `|∫ density − 1|` accepted at construction.
    pub const NORMALIZATION_TOL: f64 = 1e-8;

    pub fn new<C, D>(cdf: C, density: D, support_lower: f64) -> Result<Self>
    where
        C: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(support_lower >= 1.0 && support_lower.is_finite()) {
            return Err(invalid(format!(
                "support_lower must be at least 1, got {support_lower}"
            )));
        }
        let dist = Self {
            cdf: Arc::new(cdf),
            density: Arc::new(density),
            support_lower,
        };
        let mass = quadrature::integrate(
            |u: f64| (dist.density)(1.0 / u) / (u * u),
            0.0,
            1.0 / support_lower,
            Tolerance {
                abs_tol: 1e-11,
                rel_tol: 1e-11,
                max_intervals: 4000,
            },
        )?
        .value;
        if (mass - 1.0).abs() > Self::NORMALIZATION_TOL {
            return Err(invalid(format!("density integrates to {mass}, not 1")));
        }
        Ok(dist)
    }
}

impl fmt::Debug for GeneralDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralDistribution")
            .field("support_lower", &self.support_lower)
            .finish_non_exhaustive()
    }
}

/// Limiting CDF `H(x)` of scaled interferer powers.
#[derive(Debug, Clone)]
pub enum ScaledPowerDistribution {
    /// `H(x) = 1 − x^(−(2+ε)/α)` for `x ≥ 1`, zero below.
    PowerLaw { alpha: f64, epsilon: f64 },
    General(GeneralDistribution),
}

impl ScaledPowerDistribution {
    pub fn power_law(alpha: f64, epsilon: f64) -> Result<Self> {
        if !(alpha > 2.0 && alpha.is_finite()) {
            return Err(invalid(format!("alpha must exceed 2, got {alpha}")));
        }
        if !(epsilon > -2.0 && epsilon.is_finite()) {
            return Err(invalid(format!("epsilon must exceed -2, got {epsilon}")));
        }
        Ok(Self::PowerLaw { alpha, epsilon })
    }

    pub fn support_lower(&self) -> f64 {
        match self {
            Self::PowerLaw { .. } => 1.0,
            Self::General(g) => g.support_lower,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Self::PowerLaw { alpha, epsilon } => {
                if x < 1.0 {
                    0.0
                } else {
                    1.0 - x.powf(-(2.0 + epsilon) / alpha)
                }
            }
            Self::General(g) => (g.cdf)(x),
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match self {
            Self::PowerLaw { alpha, epsilon } => {
                if x <= 1.0 {
                    0.0
                } else {
                    let s = (2.0 + epsilon) / alpha;
                    s * x.powf(-(2.0 + epsilon + alpha) / alpha)
                }
            }
            Self::General(g) => (g.density)(x),
        }
    }
}

/// `H(x)`.
pub fn scaled_power_cdf(dist: &ScaledPowerDistribution, x: f64) -> f64 {
    dist.cdf(x)
}
