//! Dense Hermitian matrices, complex Cholesky, a Givens square-root
//! covariance factor, and the MMSE quadratic form.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::model::NodeSet;

/// `antennas × nodes` channel realization stored column by column, so each
/// node's channel vector is contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    antennas: usize,
    data: Vec<Complex64>,
}

impl ChannelMatrix {
    pub fn from_columns(antennas: usize, data: Vec<Complex64>) -> Result<Self> {
        if antennas == 0 {
            return Err(invalid("channel matrix needs at least one antenna"));
        }
        if !data.len().is_multiple_of(antennas) {
            return Err(Error::DimensionMismatch {
                expected: antennas * (data.len() / antennas + 1),
                found: data.len(),
            });
        }
        Ok(Self { antennas, data })
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn columns(&self) -> usize {
        self.data.len() / self.antennas
    }

    pub fn column(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.antennas..(i + 1) * self.antennas]
    }
}

/// Full storage, row-major. Constructors keep it exactly Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn scaled_identity(dim: usize, scale: f64) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(scale, 0.0);
        }
        Self { dim, data }
    }

    /// Builds from full row-major storage; the lower triangle is taken from
    /// the conjugated upper one and the diagonal's imaginary parts dropped.
    pub fn from_upper(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self {
            dim,
            data: mirror(dim, data),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    /// Lower-triangular `L` with `A = L L†`.
    pub fn cholesky(&self) -> Result<Cholesky> {
        let n = self.dim;
        let mut l = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let mut d = self.data[j * n + j].re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if !(d > 0.0) {
                return Err(Error::FactorizationFailure { pivot: j, value: d });
            }
            let djj = d.sqrt();
            l[j * n + j] = Complex64::new(djj, 0.0);
            for i in j + 1..n {
                let mut v = self.data[i * n + j];
                for k in 0..j {
                    v -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = v / djj;
            }
        }
        Ok(Cholesky { dim: n, lower: l })
    }
}

#[derive(Debug, Clone)]
pub struct Cholesky {
    dim: usize,
    lower: Vec<Complex64>,
}

impl Cholesky {
    /// Solves `L y = b` by forward substitution.
    #[allow(clippy::needless_range_loop)]
    pub fn solve_lower(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.dim;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let row = &self.lower[i * n..i * n + i];
            let acc = row
                .iter()
                .zip(&y)
                .fold(b[i], |acc, (l, yk): (&Complex64, &Complex64)| acc - l * yk);
            y.push(acc / self.lower[i * n + i].re);
        }
        Ok(y)
    }

    /// `b† A⁻¹ b = ‖L⁻¹ b‖²`.
    pub fn inverse_quadratic_form(&self, b: &[Complex64]) -> Result<f64> {
        Ok(self.solve_lower(b)?.iter().map(|v| v.norm_sqr()).sum())
    }
}

/// Upper-triangular `R` with `C = R† R`, built from the rows of
/// `[√ν I; √p_i h_i†]` by Givens rotations without ever forming `C`.
///
/// Received powers span more than 30 decades when an interferer lands near
/// the receiver; forming `C` squares that range and a Cholesky factor then
/// loses the weak directions that set the SINR. Row-wise Givens updates are
/// backward stable row by row, so each interferer keeps its own relative
/// accuracy.
#[derive(Debug, Clone)]
pub struct SquareRootCovariance {
    dim: usize,
    /// Row-major upper triangle; the diagonal is real and positive.
    upper: Vec<Complex64>,
}

impl SquareRootCovariance {
    pub fn noise_only(dim: usize, noise_power: f64) -> Result<Self> {
        if !(noise_power > 0.0 && noise_power.is_finite()) {
            return Err(invalid(format!("noise power must be positive, got {noise_power}")));
        }
        let mut upper = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            upper[i * dim + i] = Complex64::new(noise_power.sqrt(), 0.0);
        }
        Ok(Self { dim, upper })
    }

    /// `Σ_i powers[i] h_i h_i† + noise_power I`, in factored form.
    pub fn from_powers(powers: &[f64], channels: &ChannelMatrix, noise_power: f64) -> Result<Self> {
        if powers.len() != channels.columns() {
            return Err(Error::DimensionMismatch {
                expected: channels.columns(),
                found: powers.len(),
            });
        }
        let mut f = Self::noise_only(channels.antennas(), noise_power)?;
        let mut row = vec![Complex64::new(0.0, 0.0); f.dim];
        for (i, &p) in powers.iter().enumerate() {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(invalid(format!("interferer {i} has power {p}")));
            }
            let amp = p.sqrt();
            for (dst, h) in row.iter_mut().zip(channels.column(i)) {
                *dst = h.conj() * amp;
            }
            f.absorb_row(&mut row);
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Updates `R` so that `R† R` gains `a† a`; `a` is destroyed.
    fn absorb_row(&mut self, a: &mut [Complex64]) {
        let n = self.dim;
        for j in 0..n {
            let x = a[j];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            let r = self.upper[j * n + j].re;
            let norm = r.hypot(x.norm());
            let (c, s) = (r / norm, x / norm);
            self.upper[j * n + j] = Complex64::new(norm, 0.0);
            a[j] = Complex64::new(0.0, 0.0);
            let row = &mut self.upper[j * n + j + 1..(j + 1) * n];
            for (rjk, ak) in row.iter_mut().zip(&mut a[j + 1..]) {
                let (r0, a0) = (*rjk, *ak);
                *rjk = r0 * c + s.conj() * a0;
                *ak = a0 * c - s * r0;
            }
        }
    }

    /// `b† C⁻¹ b = ‖R^(−†) b‖²`, by forward substitution with `R†`.
    #[allow(clippy::needless_range_loop)]
    pub fn inverse_quadratic_form(&self, b: &[Complex64]) -> Result<f64> {
        let n = self.dim;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let mut y: Vec<Complex64> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = b[i];
            for (k, yk) in y.iter().enumerate() {
                acc -= self.upper[k * n + i].conj() * yk;
            }
            y.push(acc / self.upper[i * n + i].re);
        }
        Ok(y.iter().map(|v| v.norm_sqr()).sum())
    }

    /// `R† R` expanded; for checks, not for solving.
    pub fn to_matrix(&self) -> HermitianMatrix {
        let n = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                data[i * n + j] = (0..=i).map(|k| self.upper[k * n + i].conj() * self.upper[k * n + j]).sum();
            }
        }
        HermitianMatrix { dim: n, data: mirror(n, data) }
    }
}

fn mirror(n: usize, mut data: Vec<Complex64>) -> Vec<Complex64> {
    for i in 0..n {
        data[i * n + i].im = 0.0;
        for j in i + 1..n {
            data[j * n + i] = data[i * n + j].conj();
        }
    }
    data
}

/// Factored interference-plus-noise covariance with `P = diag(r_i^(−α))`.
pub fn interference_factor(
    nodes: &NodeSet,
    channels: &ChannelMatrix,
    alpha: f64,
    noise_power: f64,
) -> Result<SquareRootCovariance> {
    if nodes.len() != channels.columns() {
        return Err(Error::DimensionMismatch {
            expected: channels.columns(),
            found: nodes.len(),
        });
    }
    let powers: Vec<f64> = nodes.radii.iter().map(|r| r.powf(-alpha)).collect();
    SquareRootCovariance::from_powers(&powers, channels, noise_power)
}

/// MMSE output SINR from a factored covariance.
pub fn mmse_sinr_factored(target_channel: &[Complex64], target_power: f64, factor: &SquareRootCovariance) -> Result<f64> {
    if !(target_power > 0.0) {
        return Err(invalid(format!("target power must be positive, got {target_power}")));
    }
    Ok(target_power * factor.inverse_quadratic_form(target_channel)?)
}

/// `Σ_i powers[i] h_i h_i† + noise_power I`.
pub fn covariance_from_powers(
    powers: &[f64],
    channels: &ChannelMatrix,
    noise_power: f64,
) -> Result<HermitianMatrix> {
    if powers.len() != channels.columns() {
        return Err(Error::DimensionMismatch {
            expected: channels.columns(),
            found: powers.len(),
        });
    }
    if !(noise_power > 0.0) {
        return Err(invalid(format!("noise power must be positive, got {noise_power}")));
    }
    let n = channels.antennas();
    let mut acc = HermitianMatrix::scaled_identity(n, noise_power).data;
    for (i, &p) in powers.iter().enumerate() {
        let h = channels.column(i);
        for j in 0..n {
            let a = h[j] * p;
            let row = &mut acc[j * n + j..(j + 1) * n];
            for (dst, hk) in row.iter_mut().zip(&h[j..]) {
                *dst += a * hk.conj();
            }
        }
    }
    HermitianMatrix::from_upper(n, acc)
}

/// Interference-plus-noise covariance `H P H† + noise_power I` with `P = diag(r_i^(−α))`.
pub fn interference_covariance(
    nodes: &NodeSet,
    channels: &ChannelMatrix,
    alpha: f64,
    noise_power: f64,
) -> Result<HermitianMatrix> {
    if nodes.len() != channels.columns() {
        return Err(Error::DimensionMismatch {
            expected: channels.columns(),
            found: nodes.len(),
        });
    }
    let powers: Vec<f64> = nodes.radii.iter().map(|r| r.powf(-alpha)).collect();
    covariance_from_powers(&powers, channels, noise_power)
}

/// Output SINR of the linear-MMSE receiver, `target_power · h† C⁻¹ h`.
pub fn mmse_sinr(target_channel: &[Complex64], target_power: f64, covariance: &HermitianMatrix) -> Result<f64> {
    if target_channel.len() != covariance.dim() {
        return Err(Error::DimensionMismatch {
            expected: covariance.dim(),
            found: target_channel.len(),
        });
    }
    if !(target_power > 0.0) {
        return Err(invalid(format!("target power must be positive, got {target_power}")));
    }
    let chol = covariance.cholesky()?;
    Ok(target_power * chol.inverse_quadratic_form(target_channel)?)
}
