//! Weighted point clouds on `C_q × ℝ`, `C_q × 𝕋` and `C_q`.

use std::f64::consts::TAU;
use std::io::{self, Write};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    /// `C_q × ℝ`, angle unreduced.
    Line,
    /// `C_q × 𝕋`, angle in `[0, 2π)`.
    Torus,
    /// `C_q`, no angle.
    Chamber,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    q: usize,
    space: Space,
    /// Row-major `n × q` chamber coordinates.
    coords: Vec<f64>,
    /// Empty for [`Space::Chamber`].
    theta: Vec<f64>,
    /// Atom `i` has weight `raw[i] / denominator`; equal-weight clouds keep
    /// `raw = 1`, `denominator = n` so that integer sums stay exact.
    raw: Vec<Complex64>,
    denominator: f64,
}

/// Weighted first and second moments of the coordinates, taken with the
/// real part of the weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSummary {
    pub mean_d: Vec<f64>,
    pub second_d: Vec<f64>,
    pub mean_theta: Option<f64>,
    pub second_theta: Option<f64>,
}

impl EmpiricalMeasure {
    pub fn new(q: usize, space: Space, coords: Vec<f64>, theta: Vec<f64>, weights: Vec<Complex64>) -> Result<Self> {
        Self::with_denominator(q, space, coords, theta, weights, 1.0)
    }

    /// Weights `raw[i] / denominator`.
    pub fn with_denominator(
        q: usize,
        space: Space,
        coords: Vec<f64>,
        theta: Vec<f64>,
        raw: Vec<Complex64>,
        denominator: f64,
    ) -> Result<Self> {
        let n = raw.len();
        if coords.len() != n * q {
            return Err(Error::ShapeMismatch { expected: n * q, got: coords.len() });
        }
        let want_theta = if space == Space::Chamber { 0 } else { n };
        if theta.len() != want_theta {
            return Err(Error::ShapeMismatch { expected: want_theta, got: theta.len() });
        }
        if !(denominator > 0.0 && denominator.is_finite()) {
            return Err(Error::InvalidParameter(format!("weight denominator {denominator}")));
        }
        Ok(EmpiricalMeasure { q, space, coords, theta, raw, denominator })
    }

    /// Equal weights `1/n`.
    pub fn uniform(q: usize, space: Space, coords: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        let n = coords.len() / q.max(1);
        Self::with_denominator(q, space, coords, theta, vec![Complex64::new(1.0, 0.0); n], n as f64)
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.q
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn d(&self, i: usize) -> &[f64] {
        &self.coords[i * self.q..(i + 1) * self.q]
    }

    /// Angle of atom `i`; `None` on the chamber.
    pub fn theta(&self, i: usize) -> Option<f64> {
        self.theta.get(i).copied()
    }

    pub fn weight(&self, i: usize) -> Complex64 {
        self.raw[i] / self.denominator
    }

    pub fn weights(&self) -> Vec<Complex64> {
        (0..self.len()).map(|i| self.weight(i)).collect()
    }

    pub fn total_mass(&self) -> Complex64 {
        compensated_sum(self.raw.iter().copied()) / self.denominator
    }

    pub fn total_variation(&self) -> f64 {
        compensated_sum(self.raw.iter().map(|w| Complex64::new(w.norm(), 0.0))).re / self.denominator
    }

    /// `∫ f dμ`; `f` receives angle `0` on the chamber.
    pub fn integrate(&self, f: impl Fn(&[f64], f64) -> Complex64) -> Complex64 {
        let sum = compensated_sum((0..self.len()).map(|i| self.raw[i] * f(self.d(i), self.theta(i).unwrap_or(0.0))));
        sum / self.denominator
    }

    pub fn moments(&self) -> MomentSummary {
        let q = self.q;
        let mut mean_d = vec![0.0; q];
        let mut second_d = vec![0.0; q];
        let (mut m1, mut m2) = (0.0, 0.0);
        for i in 0..self.len() {
            let w = self.weight(i).re;
            for (j, &x) in self.d(i).iter().enumerate() {
                mean_d[j] += w * x;
                second_d[j] += w * x * x;
            }
            if let Some(th) = self.theta(i) {
                m1 += w * th;
                m2 += w * th * th;
            }
        }
        let has_theta = self.space != Space::Chamber;
        MomentSummary { mean_d, second_d, mean_theta: has_theta.then_some(m1), second_theta: has_theta.then_some(m2) }
    }

    /// Angles reduced into `[0, 2π)`.
    pub fn project_torus(&self) -> EmpiricalMeasure {
        let theta = match self.space {
            Space::Chamber => Vec::new(),
            _ => self.theta.iter().map(|&th| reduce_angle(th)).collect(),
        };
        let space = if self.space == Space::Chamber { Space::Chamber } else { Space::Torus };
        EmpiricalMeasure { space, theta, ..self.clone() }
    }

    /// Drops the angle.
    pub fn project_chamber(&self) -> EmpiricalMeasure {
        EmpiricalMeasure { space: Space::Chamber, theta: Vec::new(), ..self.clone() }
    }

    /// Columns `d_1..d_q[,theta],weight_re,weight_im`.
    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        let mut header: Vec<String> = (1..=self.q).map(|j| format!("d_{j}")).collect();
        if self.space != Space::Chamber {
            header.push("theta".into());
        }
        header.extend(["weight_re".into(), "weight_im".into()]);
        writeln!(out, "{}", header.join(","))?;
        for i in 0..self.len() {
            let mut row: Vec<String> = self.d(i).iter().map(|x| x.to_string()).collect();
            if let Some(th) = self.theta(i) {
                row.push(th.to_string());
            }
            let w = self.weight(i);
            row.push(w.re.to_string());
            row.push(w.im.to_string());
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn summary(&self, seed: u64, parameters: serde_json::Value) -> serde_json::Value {
        let mass = self.total_mass();
        serde_json::json!({
            "space": self.space,
            "q": self.q,
            "n": self.len(),
            "seed": seed,
            "parameters": parameters,
            "total_mass": [mass.re, mass.im],
            "total_variation": self.total_variation(),
            "moments": self.moments(),
        })
    }
}

/// Neumaier summation, componentwise.
fn compensated_sum(xs: impl Iterator<Item = Complex64>) -> Complex64 {
    fn step(sum: &mut f64, c: &mut f64, x: f64) {
        let t = *sum + x;
        *c += if sum.abs() >= x.abs() { (*sum - t) + x } else { (x - t) + *sum };
        *sum = t;
    }
    let (mut re, mut cre, mut im, mut cim) = (0.0, 0.0, 0.0, 0.0);
    for z in xs {
        step(&mut re, &mut cre, z.re);
        step(&mut im, &mut cim, z.im);
    }
    Complex64::new(re + cre, im + cim)
}

pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}
