//! Degree-2 Sobolev (`H²`) gradient in Fourier coordinates.
//!
//! A degree-2 inverse lift is written
//! `u(y) = y/2 + Σ_m a_{2m−1} cos((2m−1)πy) + b_{2m−1} sin((2m−1)πy)`;
//! measure preservation forces every even harmonic to vanish. The odd
//! harmonics scaled by `c_k = (1 + (kπ)² + (kπ)⁴)^{−1/2}` are orthonormal in
//! `H²[0, 2]`, so the gradient components are
//! `ȧ_k = c_k² ∫₀² (u_yy/u_y) cos(kπy) dy` and likewise for `b_k`.
//!
//! When `u_y` is even the sine coefficients alone evolve. In the variables
//! `B_m = π(2m−1) b_{2m−1}` and `τ = πy` the density is
//! `h(τ) = 1/2 + Σ_m B_m cos((2m−1)τ)`; [`galerkin_rhs_even`] integrates that
//! form directly rather than reusing the general routine.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::spectral::{check_density_bounds, FourierRep, TrigTable, DEFAULT_GRID};

/// `c_k² = 1/(1 + (kπ)² + (kπ)⁴)`, the squared normalization of
/// `cos(kπy)` and `sin(kπy)` in `H²[0, 2]`.
pub fn basis_norm_factor_sq(k: usize) -> f64 {
    let w2 = (k as f64 * PI).powi(2);
    1.0 / (1.0 + w2 + w2 * w2)
}

#[inline]
fn odd(m: usize) -> usize {
    2 * m + 1
}

/// Odd-harmonic coefficients of `u − y/2`; index `m` holds `a_{2m+1}`, `b_{2m+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OddModes {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl OddModes {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return invalid(format!(
                "need equal, non-zero numbers of cosine and sine modes (got {} and {})",
                a.len(),
                b.len()
            ));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return invalid("mode coefficients must be finite");
        }
        Ok(Self { a, b })
    }

    pub fn zero(modes: usize) -> Self {
        Self {
            a: vec![0.0; modes],
            b: vec![0.0; modes],
        }
    }

    pub fn modes(&self) -> usize {
        self.a.len()
    }

    /// Pure-sine state with `b_{2k−1} = B_k / (π(2k−1))`.
    pub fn from_cosine_modes(big_b: &CosineModes) -> Self {
        let b = big_b
            .0
            .iter()
            .enumerate()
            .map(|(m, &v)| v / (PI * odd(m) as f64))
            .collect();
        Self {
            a: vec![0.0; big_b.0.len()],
            b,
        }
    }

    /// `B_k = π(2k−1) b_{2k−1}`; the cosine coefficients are dropped.
    pub fn to_cosine_modes(&self) -> CosineModes {
        CosineModes(
            self.b
                .iter()
                .enumerate()
                .map(|(m, &v)| PI * odd(m) as f64 * v)
                .collect(),
        )
    }

    /// Interleaved `(a₁, b₁, a₃, b₃, …)`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .flat_map(|(&a, &b)| [a, b])
            .collect()
    }

    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if !flat.len().is_multiple_of(2) {
            return invalid("interleaved mode vector must have even length");
        }
        let a = flat.iter().step_by(2).copied().collect();
        let b = flat.iter().skip(1).step_by(2).copied().collect();
        Self::new(a, b)
    }

    /// `u_y` as a Fourier series of period 2.
    pub fn inverse_derivative(&self) -> FourierRep {
        let top = odd(self.modes() - 1);
        let mut cos = vec![0.0; top];
        let mut sin = vec![0.0; top];
        for m in 0..self.modes() {
            let k = odd(m);
            let w = PI * k as f64;
            cos[k - 1] = w * self.b[m];
            sin[k - 1] = -w * self.a[m];
        }
        FourierRep {
            period: 2.0,
            mean: 0.5,
            cos,
            sin,
        }
    }

    /// `‖Σ ȧ_k cos + ḃ_k sin‖_{H²}` for a coefficient-velocity vector.
    pub fn sobolev_norm(&self) -> f64 {
        self.a
            .iter()
            .zip(&self.b)
            .enumerate()
            .map(|(m, (a, b))| (a * a + b * b) / basis_norm_factor_sq(odd(m)))
            .sum::<f64>()
            .sqrt()
    }
}

/// Even-case coordinates `B_m`, `h(τ) = 1/2 + Σ_m B_m cos((2m−1)τ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosineModes(pub Vec<f64>);

impl CosineModes {
    pub fn modes(&self) -> usize {
        self.0.len()
    }

    /// `h(τ)` at the given angle.
    pub fn density_at(&self, tau: f64) -> f64 {
        0.5 + self
            .0
            .iter()
            .enumerate()
            .map(|(m, b)| b * (odd(m) as f64 * tau).cos())
            .sum::<f64>()
    }

    /// `‖Σ ḃ_k sin(kπy)‖_{H²}` for a velocity `Ḃ`, using `ḃ_k = Ḃ_m/(πk)`.
    pub fn sobolev_norm(&self) -> f64 {
        OddModes::from_cosine_modes(self).sobolev_norm()
    }
}

/// Uniform quadrature nodes over one period (`y ∈ [0, 2)` or `τ ∈ [0, 2π)`)
/// with cached trigonometric tables.
#[derive(Debug, Clone)]
pub struct OddModeGrid {
    table: TrigTable,
}

impl Default for OddModeGrid {
    fn default() -> Self {
        Self::new(DEFAULT_GRID)
    }
}

impl OddModeGrid {
    pub fn new(nodes: usize) -> Self {
        Self {
            table: TrigTable::new(nodes),
        }
    }

    pub fn nodes(&self) -> usize {
        self.table.len()
    }

    /// `(u_y, u_yy)` at `y_j = 2j/N`.
    pub fn slopes(&self, state: &OddModes) -> (Vec<f64>, Vec<f64>) {
        let n = self.nodes();
        let mut uy = vec![0.5; n];
        let mut uyy = vec![0.0; n];
        for j in 0..n {
            for m in 0..state.modes() {
                let k = odd(m);
                let w = PI * k as f64;
                let (c, s) = (self.table.cos(k, j), self.table.sin(k, j));
                uy[j] += w * (state.b[m] * c - state.a[m] * s);
                uyy[j] -= w * w * (state.a[m] * c + state.b[m] * s);
            }
        }
        (uy, uyy)
    }

    /// `(∫₀² f cos(kπy) dy, ∫₀² f sin(kπy) dy)` for odd `k = 2m+1`, `m < modes`.
    pub(crate) fn odd_projections(&self, f: &[f64], modes: usize) -> (Vec<f64>, Vec<f64>) {
        let w = 2.0 / self.nodes() as f64;
        (0..modes)
            .map(|m| {
                let k = odd(m);
                let mut ca = 0.0;
                let mut sb = 0.0;
                for (j, &v) in f.iter().enumerate() {
                    ca += v * self.table.cos(k, j);
                    sb += v * self.table.sin(k, j);
                }
                (w * ca, w * sb)
            })
            .unzip()
    }

    /// `u_y` samples, checked against the expanding-map bounds.
    pub fn checked_slopes(&self, state: &OddModes) -> Result<(Vec<f64>, Vec<f64>)> {
        let (uy, uyy) = self.slopes(state);
        check_density_bounds(&uy)?;
        Ok((uy, uyy))
    }

    /// Coefficient velocities of the `H²` gradient flow.
    pub fn sobolev_gradient(&self, state: &OddModes) -> Result<OddModes> {
        let (uy, uyy) = self.checked_slopes(state)?;
        let ratio: Vec<f64> = uyy.iter().zip(&uy).map(|(n, d)| n / d).collect();
        let (mut a, mut b) = self.odd_projections(&ratio, state.modes());
        for m in 0..state.modes() {
            let c2 = basis_norm_factor_sq(odd(m));
            a[m] *= c2;
            b[m] *= c2;
        }
        Ok(OddModes { a, b })
    }

    /// `h(τ_j)` with `τ_j = 2πj/N`.
    pub fn even_density(&self, big_b: &CosineModes) -> Vec<f64> {
        (0..self.nodes())
            .map(|j| {
                0.5 + big_b
                    .0
                    .iter()
                    .enumerate()
                    .map(|(m, v)| v * self.table.cos(odd(m), j))
                    .sum::<f64>()
            })
            .collect()
    }

    /// `Ḃ_m = −π(2m−1) c²_{2m−1} ∫₀^{2π} [Σ_k B_k(2k−1) sin((2k−1)τ)] / h(τ) · sin((2m−1)τ) dτ`.
    pub fn even_rhs(&self, big_b: &CosineModes) -> Result<CosineModes> {
        let h = self.even_density(big_b);
        check_density_bounds(&h)?;
        let n = self.nodes();
        let weighted: Vec<f64> = (0..n)
            .map(|j| {
                let num: f64 = big_b
                    .0
                    .iter()
                    .enumerate()
                    .map(|(m, v)| v * odd(m) as f64 * self.table.sin(odd(m), j))
                    .sum();
                num / h[j]
            })
            .collect();
        let dtau = 2.0 * PI / n as f64;
        let out = (0..big_b.modes())
            .map(|m| {
                let k = odd(m);
                let integral: f64 = weighted
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * self.table.sin(k, j))
                    .sum::<f64>()
                    * dtau;
                -PI * k as f64 * basis_norm_factor_sq(k) * integral
            })
            .collect();
        Ok(CosineModes(out))
    }
}

/// `H²` gradient of the entropy at a degree-2 state, as coefficient velocities.
pub fn sobolev_gradient_n2(state: &OddModes, nodes: usize) -> Result<OddModes> {
    OddModeGrid::new(nodes).sobolev_gradient(state)
}

/// Right-hand side of the even-case Galerkin system in `B` variables.
pub fn galerkin_rhs_even(big_b: &CosineModes, nodes: usize) -> Result<CosineModes> {
    OddModeGrid::new(nodes).even_rhs(big_b)
}
