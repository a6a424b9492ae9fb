use std::f64::consts::PI;

use super::{GridRep, TrigTable};
use crate::error::{invalid, Result};

/// Truncated real Fourier series on `[0, period]`:
///
/// `f(y) = mean + Σ_{k=1}^{M} a_k cos(2πky/period) + b_k sin(2πky/period)`.
///
/// `cos[k-1]` holds `a_k` and `sin[k-1]` holds `b_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierRep {
    pub period: f64,
    pub mean: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl FourierRep {
    pub fn new(period: f64, mean: f64, mut cos: Vec<f64>, mut sin: Vec<f64>) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return invalid(format!("period must be positive, got {period}"));
        }
        let modes = cos.len().max(sin.len());
        cos.resize(modes, 0.0);
        sin.resize(modes, 0.0);
        if !mean.is_finite() || cos.iter().chain(&sin).any(|c| !c.is_finite()) {
            return invalid("Fourier coefficients must be finite");
        }
        Ok(Self {
            period,
            mean,
            cos,
            sin,
        })
    }

    pub fn constant(period: f64, value: f64) -> Self {
        Self {
            period,
            mean: value,
            cos: Vec::new(),
            sin: Vec::new(),
        }
    }

    pub fn zero(period: f64, modes: usize) -> Self {
        Self {
            period,
            mean: 0.0,
            cos: vec![0.0; modes],
            sin: vec![0.0; modes],
        }
    }

    /// Number of retained harmonics `M`.
    pub fn modes(&self) -> usize {
        self.cos.len()
    }

    /// Angular frequency `2πk/period` of harmonic `k`.
    #[inline]
    pub fn omega(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.period
    }

    pub fn eval(&self, y: f64) -> f64 {
        let mut acc = self.mean;
        for (i, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let w = self.omega(i + 1) * y;
            acc += a * w.cos() + b * w.sin();
        }
        acc
    }

    /// Term-by-term derivative; the constant term drops out.
    pub fn differentiate(&self) -> Self {
        let (cos, sin) = self
            .cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(i, (&a, &b))| {
                let w = self.omega(i + 1);
                (w * b, -w * a)
            })
            .unzip();
        Self {
            period: self.period,
            mean: 0.0,
            cos,
            sin,
        }
    }

    /// Evaluate on `nodes` uniform points of one period.
    pub fn sample(&self, nodes: usize) -> GridRep {
        let table = TrigTable::new(nodes);
        self.sample_with(&table)
    }

    pub fn sample_with(&self, table: &TrigTable) -> GridRep {
        let samples = (0..table.len())
            .map(|j| {
                let mut acc = self.mean;
                for (i, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
                    acc += a * table.cos(i + 1, j) + b * table.sin(i + 1, j);
                }
                acc
            })
            .collect();
        GridRep {
            period: self.period,
            samples,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            period: self.period,
            mean: s * self.mean,
            cos: self.cos.iter().map(|c| s * c).collect(),
            sin: self.sin.iter().map(|c| s * c).collect(),
        }
    }

    /// Parseval form of `Σ_{j=0}^{r} ∫ (f^{(j)})²` square-rooted.
    ///
    /// The mean contributes only to the `j = 0` term.
    pub fn sobolev_norm(&self, r: u32) -> f64 {
        let half = 0.5 * self.period;
        let mut total = 0.0;
        for j in 0..=r {
            if j == 0 {
                total += self.mean * self.mean * self.period;
            }
            for (i, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
                let w2 = self.omega(i + 1).powi(2);
                total += half * w2.powi(j as i32) * (a * a + b * b);
            }
        }
        total.sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0)
    }
}

/// Remove every mode that is invariant under translation by one unit.
///
/// For degree `n` these are exactly the frequency indices divisible by `n`
/// (including the mean); all others cancel in `Σ_{i=0}^{n-1} φ(y + i)`.
pub fn project_constraint(phi: &FourierRep, degree: usize) -> FourierRep {
    let mut out = phi.clone();
    out.mean = 0.0;
    if degree == 0 {
        return out;
    }
    for k in (degree..=out.modes()).step_by(degree) {
        out.cos[k - 1] = 0.0;
        out.sin[k - 1] = 0.0;
    }
    out
}

/// `2·(Σ_{k≥1} 1/k²)^{1/2} = 2·(π²/6)^{1/2}`.
pub fn sobolev_sup_constant() -> f64 {
    2.0 * (PI * PI / 6.0).sqrt()
}

/// `(sup_y |φ′(y)|, C·‖φ‖_{H²})` with `C` from [`sobolev_sup_constant`].
///
/// The supremum is taken over a grid at least 64 points per retained mode.
pub fn derivative_sup_bound(phi: &FourierRep) -> (f64, f64) {
    let nodes = (64 * phi.modes()).max(4096);
    let sup = phi
        .differentiate()
        .sample(nodes)
        .samples
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    (sup, sobolev_sup_constant() * phi.sobolev_norm(2))
}
