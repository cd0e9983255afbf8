//! Small dense complex matrices (rank ≤ 8) stored inline.
//!
//! Everything the kernel needs per Monte Carlo draw lives here: products,
//! LU determinant, one-sided Jacobi singular values, Hessenberg/QR
//! eigenvalues, Gram–Schmidt orthonormalisation and a matrix exponential.
//! No heap allocation on any of these paths.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::chamber::MAX_RANK;

const CAP: usize = MAX_RANK * MAX_RANK;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, PartialEq)]
pub struct CMat {
    n: usize,
    a: [Complex64; CAP],
}

impl std::fmt::Debug for CMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<Vec<Complex64>> = (0..self.n).map(|i| (0..self.n).map(|j| self[(i, j)]).collect()).collect();
        f.debug_struct("CMat").field("n", &self.n).field("rows", &rows).finish()
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.n && j < self.n);
        &self.a[i * MAX_RANK + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.n && j < self.n);
        &mut self.a[i * MAX_RANK + j]
    }
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        assert!((1..=MAX_RANK).contains(&n), "matrix order {n} out of range");
        CMat { n, a: [ZERO; CAP] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diag_real(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    /// Row-major nested vector, handy for tests and serialisation.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        Self::from_fn(n, |i, j| rows[i][j])
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self[(i, j)]).collect()).collect()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, b: &CMat) -> CMat {
        assert_eq!(self.n, b.n);
        let n = self.n;
        let mut c = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == ZERO {
                    continue;
                }
                for j in 0..n {
                    c[(i, j)] += aik * b[(k, j)];
                }
            }
        }
        c
    }

    pub fn add(&self, b: &CMat) -> CMat {
        assert_eq!(self.n, b.n);
        let mut c = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                c[(i, j)] += b[(i, j)];
            }
        }
        c
    }

    pub fn sub(&self, b: &CMat) -> CMat {
        self.add(&b.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        let mut c = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                c[(i, j)] *= s;
            }
        }
        c
    }

    /// `diag(left) · self · diag(right)`.
    pub fn scale_rows_cols(&self, left: &[f64], right: &[f64]) -> CMat {
        let mut c = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                c[(i, j)] *= left[i] * right[j];
            }
        }
        c
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self[(i, j)].norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn max_abs_diff(&self, b: &CMat) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                m = m.max((self[(i, j)] - b[(i, j)]).norm());
            }
        }
        m
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut m = *self;
        let mut det = ONE;
        for k in 0..n {
            let mut piv = k;
            let mut best = m[(k, k)].norm_sqr();
            for i in k + 1..n {
                let v = m[(i, k)].norm_sqr();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best == 0.0 {
                return ZERO;
            }
            if piv != k {
                for j in 0..n {
                    let tmp = m[(k, j)];
                    m[(k, j)] = m[(piv, j)];
                    m[(piv, j)] = tmp;
                }
                det = -det;
            }
            let pivot = m[(k, k)];
            det *= pivot;
            let inv = pivot.inv();
            for i in k + 1..n {
                let f = m[(i, k)] * inv;
                if f == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let mkj = m[(k, j)];
                    m[(i, j)] -= f * mkj;
                }
            }
        }
        det
    }

    /// Singular values in descending order (one-sided Jacobi on columns).
    pub fn singular_values(&self) -> [f64; MAX_RANK] {
        let n = self.n;
        let mut u = *self;
        for _sweep in 0..60 {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = ZERO;
                    for i in 0..n {
                        let up = u[(i, p)];
                        let uq = u[(i, q)];
                        alpha += up.norm_sqr();
                        beta += uq.norm_sqr();
                        gamma += up.conj() * uq;
                    }
                    let g = gamma.norm();
                    if g <= 1e-15 * (alpha * beta).sqrt() || g == 0.0 {
                        continue;
                    }
                    rotated = true;
                    // rotate u_q into phase with u_p, then a real Jacobi rotation
                    let phase = gamma / g;
                    let zeta = (beta - alpha) / (2.0 * g);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for i in 0..n {
                        let up = u[(i, p)];
                        let uq = u[(i, q)] * phase.conj();
                        u[(i, p)] = up * c - uq * s;
                        u[(i, q)] = up * s + uq * c;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv = [0.0; MAX_RANK];
        for (j, s) in sv.iter_mut().enumerate().take(n) {
            *s = (0..n).map(|i| u[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        }
        sv[..n].sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Spectral norm (largest singular value).
    pub fn spectral_norm(&self) -> f64 {
        self.singular_values()[0]
    }

    /// Eigenvalues of a general complex matrix, unordered.
    pub fn eigenvalues(&self) -> [Complex64; MAX_RANK] {
        let mut out = [ZERO; MAX_RANK];
        match self.n {
            1 => out[0] = self[(0, 0)],
            2 => {
                let (a, b, c, d) = (self[(0, 0)], self[(0, 1)], self[(1, 0)], self[(1, 1)]);
                let m = (a + d) * 0.5;
                let det = a * d - b * c;
                let disc = (m * m - det).sqrt();
                // pick the larger root first, recover the other from the product
                let r1 = if (m + disc).norm_sqr() >= (m - disc).norm_sqr() { m + disc } else { m - disc };
                out[0] = r1;
                out[1] = if r1 == ZERO { ZERO } else { det / r1 };
            }
            _ => {
                let mut h = *self;
                h.reduce_to_hessenberg();
                h.hessenberg_qr_eigenvalues(&mut out);
            }
        }
        out
    }

    fn reduce_to_hessenberg(&mut self) {
        let n = self.n;
        for k in 0..n.saturating_sub(2) {
            // Householder vector for column k below the subdiagonal
            let mut x = [ZERO; MAX_RANK];
            let mut norm2 = 0.0;
            for i in k + 1..n {
                x[i] = self[(i, k)];
                norm2 += x[i].norm_sqr();
            }
            let norm = norm2.sqrt();
            if norm == 0.0 {
                continue;
            }
            let x0 = x[k + 1];
            let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
            x[k + 1] += phase * norm;
            let vnorm2: f64 = (k + 1..n).map(|i| x[i].norm_sqr()).sum();
            if vnorm2 == 0.0 {
                continue;
            }
            let beta = 2.0 / vnorm2;
            // H <- (I - beta v v*) H
            for j in 0..n {
                let mut s = ZERO;
                for i in k + 1..n {
                    s += x[i].conj() * self[(i, j)];
                }
                s *= beta;
                for i in k + 1..n {
                    let xi = x[i];
                    self[(i, j)] -= xi * s;
                }
            }
            // H <- H (I - beta v v*)
            for i in 0..n {
                let mut s = ZERO;
                for j in k + 1..n {
                    s += self[(i, j)] * x[j];
                }
                s *= beta;
                for j in k + 1..n {
                    let xj = x[j];
                    self[(i, j)] -= s * xj.conj();
                }
            }
            for i in k + 2..n {
                self[(i, k)] = ZERO;
            }
        }
    }

    /// Shifted QR on an upper Hessenberg matrix; eigenvalues only.
    fn hessenberg_qr_eigenvalues(&mut self, out: &mut [Complex64; MAX_RANK]) {
        let n = self.n;
        let mut hi = n - 1;
        let mut iter = 0usize;
        let mut found = 0usize;
        loop {
            if hi == 0 {
                out[found] = self[(0, 0)];
                break;
            }
            // locate the start of the trailing unreduced block
            let mut lo = hi;
            while lo > 0 {
                let sub = self[(lo, lo - 1)].norm();
                let scale = self[(lo, lo)].norm() + self[(lo - 1, lo - 1)].norm();
                if sub <= f64::EPSILON * scale || sub < 1e-300 {
                    self[(lo, lo - 1)] = ZERO;
                    break;
                }
                lo -= 1;
            }
            if lo == hi {
                out[found] = self[(hi, hi)];
                found += 1;
                hi -= 1;
                iter = 0;
                continue;
            }
            iter += 1;
            if iter > 200 {
                // give up refining; report the current diagonal
                for i in 0..=hi {
                    out[found] = self[(i, i)];
                    found += 1;
                }
                break;
            }
            let shift = if iter % 11 == 10 {
                // exceptional shift
                self[(hi, hi)] + Complex64::new(self[(hi, hi - 1)].norm() * 0.75, 0.0)
            } else {
                wilkinson_shift(self[(hi - 1, hi - 1)], self[(hi - 1, hi)], self[(hi, hi - 1)], self[(hi, hi)])
            };
            for i in lo..=hi {
                self[(i, i)] -= shift;
            }
            let mut rots = [(0.0f64, ZERO); MAX_RANK];
            for k in lo..hi {
                let (c, s) = givens(self[(k, k)], self[(k + 1, k)]);
                rots[k] = (c, s);
                for j in k..=hi {
                    let a = self[(k, j)];
                    let b = self[(k + 1, j)];
                    self[(k, j)] = a * c + s * b;
                    self[(k + 1, j)] = -s.conj() * a + b * c;
                }
            }
            for k in lo..hi {
                let (c, s) = rots[k];
                let last = (k + 2).min(hi);
                for i in lo..=last {
                    let a = self[(i, k)];
                    let b = self[(i, k + 1)];
                    self[(i, k)] = a * c + b * s.conj();
                    self[(i, k + 1)] = -a * s + b * c;
                }
            }
            for i in lo..=hi {
                self[(i, i)] += shift;
            }
        }
    }

    /// Modified Gram–Schmidt on the columns, run twice.
    ///
    /// Returns `Q` with orthonormal columns; the implied `R` has a positive
    /// real diagonal. `None` if the columns are numerically dependent.
    pub fn orthonormalize_columns(&self) -> Option<CMat> {
        let n = self.n;
        let mut q = *self;
        for j in 0..n {
            for _pass in 0..2 {
                for k in 0..j {
                    let mut dot = ZERO;
                    for i in 0..n {
                        dot += q[(i, k)].conj() * q[(i, j)];
                    }
                    for i in 0..n {
                        let qik = q[(i, k)];
                        q[(i, j)] -= qik * dot;
                    }
                }
            }
            let norm = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            if !(norm > 1e-300) {
                return None;
            }
            for i in 0..n {
                q[(i, j)] /= norm;
            }
        }
        Some(q)
    }

    /// Matrix exponential by scaling and squaring with a Taylor core.
    pub fn expm(&self) -> CMat {
        let norm = self.frobenius_norm();
        let mut squarings = 0;
        let mut scaled = *self;
        if norm > 0.5 {
            squarings = (norm / 0.5).log2().ceil() as i32;
            scaled = self.scale(Complex64::new(0.5f64.powi(squarings), 0.0));
        }
        let n = self.n;
        let mut result = CMat::identity(n);
        let mut term = CMat::identity(n);
        for k in 1..=18 {
            term = term.mul(&scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
            result = result.add(&term);
        }
        for _ in 0..squarings {
            result = result.mul(&result);
        }
        result
    }

    /// `‖self* self - I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint().mul(self).max_abs_diff(&CMat::identity(self.n))
    }
}

/// Complex Givens rotation `G = [[c, s], [-s̄, c]]` with `G·[a; b] = [r; 0]`.
#[inline]
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

/// Eigenvalue of the trailing 2×2 block closer to its last diagonal entry.
#[inline]
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let m = (a + d) * 0.5;
    let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
    let r1 = m + disc;
    let r2 = m - disc;
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn to_na(m: &CMat) -> DMatrix<Complex64> {
        DMatrix::from_fn(m.order(), m.order(), |i, j| m[(i, j)])
    }

    fn arb_matrix() -> impl Strategy<Value = CMat> {
        (1usize..=6).prop_flat_map(|n| {
            proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), n * n)
                .prop_map(move |v| CMat::from_fn(n, |i, j| Complex64::new(v[i * n + j].0, v[i * n + j].1)))
        })
    }

    fn sorted_by_key(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn determinant_of_known_matrix() {
        let m = CMat::from_rows(&[
            vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)],
            vec![Complex64::new(0.0, -1.0), Complex64::new(3.0, 0.0)],
        ]);
        assert!((m.det() - Complex64::new(5.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_triangular_matrix() {
        let m = CMat::from_fn(4, |i, j| if j >= i { Complex64::new((i + 1) as f64, j as f64) } else { ZERO });
        let got = sorted_by_key(m.eigenvalues()[..4].to_vec());
        let want = sorted_by_key((0..4).map(|i| Complex64::new((i + 1) as f64, i as f64)).collect());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn expm_of_antihermitian_is_unitary() {
        let h = CMat::from_rows(&[
            vec![Complex64::new(0.0, 0.3), Complex64::new(1.0, 0.5), Complex64::new(0.2, 0.0)],
            vec![Complex64::new(-1.0, 0.5), Complex64::new(0.0, -0.1), Complex64::new(0.0, 0.7)],
            vec![Complex64::new(-0.2, 0.0), Complex64::new(0.0, 0.7), Complex64::new(0.0, -0.2)],
        ]);
        let u = h.expm();
        assert!(u.unitarity_defect() < 1e-13);
        assert!((u.det() - Complex64::new(0.0, 0.0f64).exp()).norm() < 1e-12);
    }

    proptest! {
        #[test]
        fn determinant_matches_nalgebra(m in arb_matrix()) {
            let want = to_na(&m).determinant();
            let got = m.det();
            prop_assert!((got - want).norm() <= 1e-10 * (1.0 + want.norm()));
        }

        #[test]
        fn singular_values_match_nalgebra(m in arb_matrix()) {
            let n = m.order();
            let mut want: Vec<f64> = to_na(&m).singular_values().iter().copied().collect();
            want.sort_by(|a, b| b.total_cmp(a));
            let got = m.singular_values();
            for i in 0..n {
                prop_assert!((got[i] - want[i]).abs() <= 1e-12 * (1.0 + want[0]));
            }
        }

        #[test]
        fn product_of_singular_values_is_abs_det(m in arb_matrix()) {
            let n = m.order();
            let prod: f64 = m.singular_values()[..n].iter().product();
            prop_assert!((prod - m.det().norm()).abs() <= 1e-10 * (1.0 + prod));
        }

        #[test]
        fn eigenvalues_match_nalgebra_schur(m in arb_matrix()) {
            let n = m.order();
            let (_, t) = nalgebra::Schur::new(to_na(&m)).unpack();
            let want = sorted_by_key((0..n).map(|i| t[(i, i)]).collect());
            let got = sorted_by_key(m.eigenvalues()[..n].to_vec());
            let scale = 1.0 + m.frobenius_norm();
            let mut used = vec![false; n];
            for w in &want {
                let (idx, dist) = got.iter().enumerate().filter(|(i, _)| !used[*i])
                    .map(|(i, g)| (i, (g - w).norm()))
                    .min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
                used[idx] = true;
                prop_assert!(dist <= 1e-8 * scale, "eigenvalue {} unmatched (dist {})", w, dist);
            }
        }

        #[test]
        fn gram_schmidt_is_unitary(m in arb_matrix()) {
            if let Some(q) = m.orthonormalize_columns() {
                prop_assert!(q.unitarity_defect() < 1e-12);
            }
        }
    }
}
