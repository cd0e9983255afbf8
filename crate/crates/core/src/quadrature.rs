//! Gauss–Legendre and Gauss–Jacobi rules by the Golub–Welsch method.

use crate::error::{Error, Result};
use crate::special::gamma::ln_gamma_real;

/// Nodes and weights of a one-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Affine map of a rule on `[-1, 1]` to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> GaussRule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        GaussRule {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss–Jacobi rule for the weight `(1 - x)^a (1 + x)^b` on `[-1, 1]`.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<GaussRule> {
    if n == 0 {
        return Err(Error::InvalidParameter("quadrature rule needs at least one node".into()));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::InvalidParameter(format!("Jacobi weight exponents must exceed -1, got a={a}, b={b}")));
    }
    let ab = a + b;
    // recurrence of the monic Jacobi polynomials
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for (k, d) in diag.iter_mut().enumerate() {
        let kf = k as f64;
        *d = if k == 0 { (b - a) / (ab + 2.0) } else { (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0)) };
    }
    for (k, e) in off.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        let beta = if k == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            let s = 2.0 * kf + ab;
            4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        *e = beta.sqrt();
    }
    let mu0 =
        ((ab + 1.0) * 2f64.ln() + ln_gamma_real(a + 1.0) + ln_gamma_real(b + 1.0) - ln_gamma_real(ab + 2.0)).exp();
    let (nodes, first) = symmetric_tridiagonal_eigen(diag, off)?;
    let mut pairs: Vec<(f64, f64)> = nodes.into_iter().zip(first.into_iter().map(|z| mu0 * z * z)).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(GaussRule { nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() })
}

pub fn gauss_legendre(n: usize) -> Result<GaussRule> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Rule on `[0, 1]` for the weight `(1 - u)^{e}`.
pub fn gauss_jacobi_unit(n: usize, e: f64) -> Result<GaussRule> {
    let rule = gauss_jacobi(n, e, 0.0)?;
    // u = (1 + x)/2 ⇒ (1 - x)^e dx = 2^{e+1} (1 - u)^e du
    let scale = 0.5f64.powf(e + 1.0);
    Ok(GaussRule {
        nodes: rule.nodes.iter().map(|x| 0.5 * (1.0 + x)).collect(),
        weights: rule.weights.iter().map(|w| w * scale).collect(),
    })
}

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal
/// matrix (implicit QL with Wilkinson shifts). `off[0]` is ignored.
fn symmetric_tridiagonal_eigen(mut d: Vec<f64>, e_in: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = d.len();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&e_in[1..n]);
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::SeriesNotConverged(iter));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(20).unwrap();
        for k in 0..40 {
            let got = rule.integrate(|x| x.powi(k));
            let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "k={k}");
        }
        assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_unit_moments() {
        // ∫_0^1 (1-u)^e u^k du = B(k+1, e+1)
        for e in [-0.5, 0.0, 1.0, 2.5] {
            let rule = gauss_jacobi_unit(30, e).unwrap();
            for k in 0..50 {
                let want =
                    (ln_gamma_real(k as f64 + 1.0) + ln_gamma_real(e + 1.0) - ln_gamma_real(k as f64 + e + 2.0)).exp();
                let got = rule.integrate(|u| u.powi(k));
                assert!((got - want).abs() < 1e-13 * want.max(1e-3), "e={e} k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn large_rule_is_sane() {
        let rule = gauss_jacobi_unit(400, -0.5).unwrap();
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(rule.nodes[0] > 0.0 && rule.nodes[399] < 1.0);
        assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        let rule = gauss_legendre(400).unwrap();
        let got = rule.integrate(|x| (3.0 * x).cos());
        assert!((got - 2.0 * 3f64.sin() / 3.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gauss_jacobi(0, 0.0, 0.0).is_err());
        assert!(gauss_jacobi(5, -1.0, 0.0).is_err());
    }
}
