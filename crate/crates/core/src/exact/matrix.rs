use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use super::{GaussianRational, LinalgError, Rational};

/// Dense row-major matrix over the Gaussian rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![GaussianRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussianRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussianRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a real matrix from rational rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| GaussianRational::real(rows[i][j].clone()))
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = GaussianRational::real(e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[GaussianRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> GaussianRational {
        let mut t = GaussianRational::zero();
        for i in 0..self.rows.min(self.cols) {
            t += &self[(i, i)];
        }
        t
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_hermitian(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        (0..self.rows).all(|i| (i..self.cols).all(|j| self[(i, j)] == self[(j, i)].conj()))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.scale(k)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let p = a * b;
                        out[(i, j)] += &p;
                    }
                }
            }
        }
        out
    }

    /// Kronecker product: entry `((i,k),(j,l)) = a[i,j] * b[k,l]` with the
    /// row index `i * rows(b) + k`.
    pub fn kron(&self, other: &Self) -> Self {
        let (br, bc) = (other.rows, other.cols);
        let mut out = Self::zeros(self.rows * br, self.cols * bc);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..br {
                    for l in 0..bc {
                        let b = &other[(k, l)];
                        if !b.is_zero() {
                            out[(i * br + k, j * bc + l)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Symmetric-pivoted LDL* factorization of a hermitian matrix.
    ///
    /// At each step the remaining diagonal entry of largest magnitude is
    /// chosen as pivot. When every remaining diagonal entry is zero the
    /// factorization only continues if the whole trailing block is zero;
    /// otherwise it reports [`LinalgError::Breakdown`]. Negative pivots are
    /// accepted here; [`Matrix::is_psd`] is the early-exit variant.
    pub fn ldl(&self) -> Result<Ldl, LinalgError> {
        self.ldl_impl(false).map(|r| r.expect("non-early ldl always factors"))
    }

    /// Exact positive-semidefiniteness test via pivoted LDL*.
    pub fn is_psd(&self) -> Result<bool, LinalgError> {
        match self.ldl_impl(true) {
            Ok(Some(_)) => Ok(true),
            Ok(None) | Err(LinalgError::Breakdown { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    fn ldl_impl(&self, early_exit: bool) -> Result<Option<Ldl>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if !self.is_hermitian() {
            return Err(LinalgError::NotHermitian);
        }
        let n = self.rows;
        if early_exit && (0..n).any(|i| self[(i, i)].re.is_negative()) {
            return Ok(None);
        }
        let mut work = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut l = Matrix::identity(n);
        let mut d = vec![Rational::zero(); n];

        for k in 0..n {
            let mut p = k;
            let mut best = work[(k, k)].re.abs();
            for j in k + 1..n {
                let m = work[(j, j)].re.abs();
                if m > best {
                    best = m;
                    p = j;
                }
            }
            if p != k {
                work.swap_symmetric(k, p);
                perm.swap(k, p);
                for c in 0..k {
                    l.data.swap(k * n + c, p * n + c);
                }
            }
            let pivot = work[(k, k)].re.clone();
            if pivot.is_zero() {
                let trailing_zero = (k..n).all(|i| (k..n).all(|j| work[(i, j)].is_zero()));
                if trailing_zero {
                    break;
                }
                return Err(LinalgError::Breakdown { step: k });
            }
            if early_exit && pivot.is_negative() {
                return Ok(None);
            }
            let inv = pivot.recip();
            for i in k + 1..n {
                let lik = work[(i, k)].scale(&inv);
                l[(i, k)] = lik;
            }
            for i in k + 1..n {
                if l[(i, k)].is_zero() {
                    continue;
                }
                let lik = l[(i, k)].clone();
                for j in k + 1..n {
                    let akj = &work[(k, j)];
                    if akj.is_zero() {
                        continue;
                    }
                    let delta = &lik * akj;
                    work[(i, j)] -= &delta;
                }
            }
            d[k] = pivot;
        }
        Ok(Some(Ldl { perm, l, d }))
    }

    fn swap_symmetric(&mut self, a: usize, b: usize) {
        let n = self.cols;
        for c in 0..n {
            self.data.swap(a * n + c, b * n + c);
        }
        for r in 0..self.rows {
            self.data.swap(r * n + a, r * n + b);
        }
    }
}

/// `P M P^T = L D L*` where `(P M P^T)[i][j] = M[perm[i]][perm[j]]`.
#[derive(Clone, Debug)]
pub struct Ldl {
    pub perm: Vec<usize>,
    pub l: Matrix,
    pub d: Vec<Rational>,
}

impl Ldl {
    pub fn reconstruct(&self) -> Matrix {
        let dm = Matrix::diagonal(&self.d);
        self.l.mul(&dm).mul(&self.l.adjoint())
    }

    pub fn permuted(&self, m: &Matrix) -> Matrix {
        Matrix::from_fn(m.rows, m.cols, |i, j| m[(self.perm[i], self.perm[j])].clone())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = GaussianRational;
    fn index(&self, (i, j): (usize, usize)) -> &GaussianRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussianRational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn real(rows: &[&[i64]]) -> Matrix {
        let rows: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect()).collect();
        Matrix::from_real_rows(&rows)
    }

    #[test]
    fn kron_identity_cases() {
        assert_eq!(Matrix::identity(2).kron(&Matrix::identity(2)), Matrix::identity(4));
        let m = real(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.kron(&Matrix::identity(1)), m);
        assert_eq!(Matrix::identity(1).kron(&m), m);
    }

    #[test]
    fn kron_entry_layout() {
        let a = real(&[&[1, 2], &[3, 4]]);
        let b = real(&[&[0, 5], &[6, 7]]);
        let k = a.kron(&b);
        for (i, j, kk, l) in quads(2, 2, 2, 2) {
            assert_eq!(k[(i * 2 + kk, j * 2 + l)], &a[(i, j)] * &b[(kk, l)]);
        }
    }

    fn quads(a: usize, b: usize, c: usize, d: usize) -> Vec<(usize, usize, usize, usize)> {
        let mut v = Vec::new();
        for i in 0..a {
            for j in 0..b {
                for k in 0..c {
                    for l in 0..d {
                        v.push((i, j, k, l));
                    }
                }
            }
        }
        v
    }

    #[test]
    fn psd_basic_cases() {
        assert!(Matrix::identity(3).is_psd().unwrap());
        assert!(!Matrix::diagonal(&[q(1, 1), q(-1, 1)]).is_psd().unwrap());
        // zero pivot with a nonzero off-diagonal entry is indefinite
        assert!(!real(&[&[0, 1], &[1, 0]]).is_psd().unwrap());
        // zero row and column is fine
        assert!(real(&[&[0, 0], &[0, 2]]).is_psd().unwrap());
        // rank one, singular
        assert!(real(&[&[1, 1], &[1, 1]]).is_psd().unwrap());
        assert!(!real(&[&[1, 2], &[2, 1]]).is_psd().unwrap());
    }

    #[test]
    fn psd_rejects_non_hermitian() {
        assert_eq!(real(&[&[1, 2], &[0, 1]]).is_psd(), Err(LinalgError::NotHermitian));
        let mut m = Matrix::identity(2);
        m[(0, 1)] = GaussianRational::i();
        m[(1, 0)] = GaussianRational::i();
        assert_eq!(m.is_psd(), Err(LinalgError::NotHermitian));
    }

    #[test]
    fn complex_hermitian_psd() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let mut m = Matrix::identity(2);
        m[(0, 1)] = GaussianRational::i();
        m[(1, 0)] = -GaussianRational::i();
        assert!(m.is_psd().unwrap());
        let f = m.ldl().unwrap();
        assert_eq!(f.reconstruct(), f.permuted(&m));
        // [[1, 2i], [-2i, 1]] has eigenvalues -1 and 3
        m[(0, 1)] = GaussianRational::new(q(0, 1), q(2, 1));
        m[(1, 0)] = GaussianRational::new(q(0, 1), q(-2, 1));
        assert!(!m.is_psd().unwrap());
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec((-4i64..=4, 1i64..=3, -2i64..=2), n * n).prop_map(move |v| {
            Matrix::from_fn(n, n, |i, j| {
                let (a, d, b) = v[i * n + j];
                GaussianRational::new(q(a, d), q(b, d))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gram_matrices_are_psd(m in arb_matrix(4)) {
            let g = m.adjoint().mul(&m);
            prop_assert!(g.is_psd().unwrap());
            let neg = g.scale(&q(-1, 1));
            prop_assert_eq!(neg.is_psd().unwrap(), g.is_zero());
        }

        #[test]
        fn ldl_reconstructs_permuted_input(m in arb_matrix(4), shift in -6i64..6) {
            let h = m.add(&m.adjoint()).add(&Matrix::identity(4).scale(&q(shift, 1)));
            if let Ok(f) = h.ldl() {
                prop_assert_eq!(f.reconstruct(), f.permuted(&h));
            }
        }

        #[test]
        fn kron_is_associative_and_bilinear(a in arb_matrix(2), b in arb_matrix(2), c in arb_matrix(2)) {
            prop_assert_eq!(a.kron(&b).kron(&c), a.kron(&b.kron(&c)));
            prop_assert_eq!(a.add(&b).kron(&c), a.kron(&c).add(&b.kron(&c)));
            prop_assert_eq!(a.kron(&b.scale(&q(3, 2))), a.kron(&b).scale(&q(3, 2)));
        }
    }
}
