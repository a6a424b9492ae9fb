use super::{FourierRep, TrigTable};
use crate::error::{invalid, Result};

/// Samples of a periodic function at the uniform nodes `y_j = j·period/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRep {
    pub period: f64,
    pub samples: Vec<f64>,
}

impl GridRep {
    pub fn new(period: f64, samples: Vec<f64>) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return invalid(format!("period must be positive, got {period}"));
        }
        if samples.is_empty() {
            return invalid("grid needs at least one sample");
        }
        Ok(Self { period, samples })
    }

    pub fn from_fn(period: f64, nodes: usize, f: impl Fn(f64) -> f64) -> Self {
        let h = period / nodes as f64;
        Self {
            period,
            samples: (0..nodes).map(|j| f(h * j as f64)).collect(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.samples.len() as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        self.spacing() * j as f64
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.samples
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            period: self.period,
            samples: self.samples.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two grids on the same nodes.
    pub fn zip_with(&self, other: &GridRep, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.len() != other.len() || self.period != other.period {
            return invalid(format!(
                "grid mismatch: {} nodes on period {} vs {} nodes on period {}",
                self.len(),
                self.period,
                other.len(),
                other.period
            ));
        }
        Ok(Self {
            period: self.period,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// `∫ f·g` over one period.
    pub fn inner(&self, other: &GridRep) -> Result<f64> {
        Ok(quadrature(&self.zip_with(other, |a, b| a * b)?))
    }

    /// Discrete L² norm, consistent with [`quadrature`].
    pub fn l2_norm(&self) -> f64 {
        quadrature(&self.map(|v| v * v)).sqrt()
    }

    /// Discrete Fourier coefficients up to frequency index `modes`.
    ///
    /// Requires `modes < N/2`; the Nyquist mode is never represented, so a
    /// band-limited function with `modes ≥ N/2 − 1` round-trips exactly.
    pub fn to_fourier(&self, modes: usize) -> Result<FourierRep> {
        let n = self.len();
        if 2 * modes >= n {
            return invalid(format!("{modes} modes need more than {n} nodes"));
        }
        let table = TrigTable::new(n);
        let scale = 2.0 / n as f64;
        let mut cos = Vec::with_capacity(modes);
        let mut sin = Vec::with_capacity(modes);
        for k in 1..=modes {
            let mut a = 0.0;
            let mut b = 0.0;
            for (j, &f) in self.samples.iter().enumerate() {
                a += f * table.cos(k, j);
                b += f * table.sin(k, j);
            }
            cos.push(scale * a);
            sin.push(scale * b);
        }
        let mean = self.samples.iter().sum::<f64>() / n as f64;
        FourierRep::new(self.period, mean, cos, sin)
    }

    /// Spectral derivative via the largest admissible Fourier truncation.
    pub fn derivative(&self) -> Result<GridRep> {
        let modes = (self.len() - 1) / 2;
        Ok(self.to_fourier(modes)?.differentiate().sample(self.len()))
    }
}

/// Periodic trapezoid rule, `(period/N)·Σ f_j`, summed in ascending index.
///
/// Exact for trigonometric polynomials of frequency index below `N/2`.
pub fn quadrature(f: &GridRep) -> f64 {
    f.spacing() * f.samples.iter().sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn quadrature_of_constant() {
        let g = GridRep::from_fn(2.0, 64, |_| 0.5);
        assert!((quadrature(&g) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quadrature_cosine_orthogonality() {
        let g = GridRep::from_fn(2.0, 64, |y| (PI * y).cos());
        assert!(quadrature(&g).abs() < 1e-14);
        let g2 = g.map(|v| v * v);
        // ∫₀² cos²(πy) dy = period/2
        assert!((quadrature(&g2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_exact_below_nyquist() {
        let n = 32;
        for k in 1..n / 2 {
            let g = GridRep::from_fn(3.0, n, |y| (2.0 * PI * k as f64 * y / 3.0).sin() + 0.25);
            assert!((quadrature(&g) - 0.75).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn to_fourier_rejects_too_many_modes() {
        let g = GridRep::from_fn(2.0, 8, |y| y);
        assert!(g.to_fourier(4).is_err());
        assert!(g.to_fourier(3).is_ok());
    }

    #[test]
    fn spectral_derivative_of_sine() {
        let g = GridRep::from_fn(2.0, 64, |y| (PI * y).sin());
        let d = g.derivative().unwrap();
        for (j, v) in d.samples.iter().enumerate() {
            let y = d.node(j);
            assert!((v - PI * (PI * y).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = GridRep::from_fn(2.0, 8, |_| 1.0);
        let b = GridRep::from_fn(2.0, 16, |_| 1.0);
        assert!(a.inner(&b).is_err());
    }
}
