//! Chamber points, hypergroup elements and the multiplicity triple of the
//! root system `2·BC_q` with positive roots `2e_i, 4e_i, 2(e_i ± e_j)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Singular values in `[1 - ε, 1)` are treated as exactly 1.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

/// Largest rank handled by the small dense matrix routines.
pub const MAX_RANK: usize = 8;

/// A point of the closed Weyl chamber `t_1 ≥ … ≥ t_q ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ChamberPoint(Vec<f64>);

impl ChamberPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_RANK {
            return Err(Error::UnsupportedRank(coords.len()));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let sorted = coords.windows(2).all(|w| w[0] >= w[1]);
        if !sorted || *coords.last().unwrap() < 0.0 {
            return Err(Error::NotInChamber(coords));
        }
        Ok(ChamberPoint(coords))
    }

    /// Sorts arbitrary nonnegative coordinates into the chamber.
    pub fn sorted(mut coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        coords.sort_by(|a, b| b.total_cmp(a));
        Self::new(coords)
    }

    pub fn zero(q: usize) -> Self {
        ChamberPoint(vec![0.0; q])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// `t_1 = ‖t‖_∞`.
    pub fn max_coord(&self) -> f64 {
        self.0[0]
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for ChamberPoint {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        ChamberPoint::new(v)
    }
}

impl From<ChamberPoint> for Vec<f64> {
    fn from(c: ChamberPoint) -> Self {
        c.0
    }
}

/// Sorts values descending and snaps entries within [`CLAMP_TOLERANCE`]
/// below 1 up to exactly 1.
///
/// Meant for singular values of the kernel matrix before `arcosh`. Values
/// further below 1 are passed through; callers decide whether that is an
/// error.
pub fn project_to_chamber(values: &[f64]) -> Result<ChamberPoint> {
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut v: Vec<f64> =
        values.iter().map(|&x| if (1.0 - CLAMP_TOLERANCE..1.0).contains(&x) { 1.0 } else { x }).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    ChamberPoint::new(v)
}

/// A point `(t, θ)` of `C_q × ℝ`; `θ` is never reduced implicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypergroupElement {
    pub t: ChamberPoint,
    pub theta: f64,
}

impl HypergroupElement {
    pub fn new(t: ChamberPoint, theta: f64) -> Self {
        HypergroupElement { t, theta }
    }

    pub fn identity(q: usize) -> Self {
        HypergroupElement { t: ChamberPoint::zero(q), theta: 0.0 }
    }

    /// The involution `(t, θ) ↦ (t, -θ)`.
    pub fn involution(&self) -> Self {
        HypergroupElement { t: self.t.clone(), theta: -self.theta }
    }

    pub fn rank(&self) -> usize {
        self.t.rank()
    }
}

/// The multiplicity `k(p,q,l) = (p - q - l, 1/2 + l, 1)` on the roots
/// `(2e_i, 4e_i, 2(e_i ± e_j))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Multiplicity {
    pub p: f64,
    pub q: usize,
    pub l: Complex64,
}

impl Multiplicity {
    pub fn k1(&self) -> Complex64 {
        Complex64::new(self.p - self.q as f64, 0.0) - self.l
    }

    pub fn k2(&self) -> Complex64 {
        self.l + 0.5
    }

    pub fn k3(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    /// The index `l` for operations whose positivity needs it to be real.
    pub fn real_l(&self) -> Result<f64> {
        real_index(self.l)
    }
}

pub(crate) fn real_index(l: Complex64) -> Result<f64> {
    if l.im != 0.0 {
        Err(Error::ComplexIndex(l.im))
    } else {
        Ok(l.re)
    }
}

pub(crate) fn check_rank(q: usize) -> Result<()> {
    if q == 0 || q > MAX_RANK {
        Err(Error::UnsupportedRank(q))
    } else {
        Ok(())
    }
}

/// `p ≥ 2q - 1`.
pub(crate) fn check_dimension(p: f64, q: usize) -> Result<()> {
    check_rank(q)?;
    if !p.is_finite() {
        return Err(Error::NonFinite);
    }
    if p < 2.0 * q as f64 - 1.0 {
        return Err(Error::DimensionBelowBoundary { p, q });
    }
    Ok(())
}

pub fn multiplicity_from(p: f64, q: usize, l: f64) -> Result<Multiplicity> {
    multiplicity_complex(p, q, Complex64::new(l, 0.0))
}

pub fn multiplicity_complex(p: f64, q: usize, l: Complex64) -> Result<Multiplicity> {
    check_dimension(p, q)?;
    if !l.re.is_finite() || !l.im.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(Multiplicity { p, q, l })
}

/// Half sum of positive roots in the closed form `ρ_j = (p - q + l + 1) + 2(q - j)`.
pub fn rho(k: &Multiplicity) -> Vec<Complex64> {
    let base = Complex64::new(k.p - k.q as f64 + 1.0, 0.0) + k.l;
    (1..=k.q).map(|j| base + 2.0 * (k.q - j) as f64).collect()
}

/// Half sum of positive roots from the multiplicities:
/// `(k1 + 2 k2) + 2 k3 (q - j)`.
pub fn rho_from_roots(k: &Multiplicity) -> Vec<Complex64> {
    let base = k.k1() + 2.0 * k.k2();
    (1..=k.q).map(|j| base + 2.0 * k.k3() * (k.q - j) as f64).collect()
}

/// Spectral parameter `λ ∈ ℂ^q` together with the character index `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralParameter {
    pub lambda: Vec<Complex64>,
    pub l: Complex64,
}

impl SpectralParameter {
    pub fn new(lambda: Vec<Complex64>, l: Complex64) -> Result<Self> {
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        if !lambda.iter().all(finite) || !finite(&l) {
            return Err(Error::NonFinite);
        }
        Ok(SpectralParameter { lambda, l })
    }
}
