//! Dense matrices over a [`FieldSpec`] with exact elimination.
//!
//! Indices are 0-based throughout the Rust API; text and JSON formats are
//! 1-based where they mention positions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{cmp_same, FieldElem, FieldSpec};

/// A dense row-major matrix whose entries all live in one field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<FieldElem>,
}

impl Mat {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            field,
            data: vec![FieldElem::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = FieldElem::one(field);
        }
        m
    }

    /// The elementary matrix `E_ij` (0-based).
    pub fn unit(field: FieldSpec, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        m.data[i * n + j] = FieldElem::one(field);
        m
    }

    pub fn diag(field: FieldSpec, entries: &[FieldElem]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(field, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// Build from rows, checking shape and that every entry lies in `field`.
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<FieldElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::SizeMismatch("matrix must be non-empty".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::SizeMismatch(format!(
                    "row {} has {} entries, expected {c}",
                    i + 1,
                    row.len()
                )));
            }
            for e in row {
                if e.spec() != field {
                    return Err(Error::SpecMismatch(field.to_string(), e.spec().to_string()));
                }
                data.push(e);
            }
        }
        Ok(Mat {
            rows: r,
            cols: c,
            field,
            data,
        })
    }

    /// Convenience constructor from integer rows.
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| FieldElem::from_i64(field, x)).collect())
            .collect();
        Self::from_rows(field, rows).expect("well-formed integer rows")
    }

    pub fn random<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R, height: i64) -> Self {
        let mut m = Self::zeros(field, n, n);
        for e in &mut m.data {
            *e = FieldElem::random(field, rng, height);
        }
        m
    }

    /// A uniformly random invertible matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(
        field: FieldSpec,
        n: usize,
        rng: &mut R,
        height: i64,
    ) -> Self {
        loop {
            let g = Self::random(field, n, rng, height);
            if !g.det().is_zero() {
                return g;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        assert_eq!(v.spec(), self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElem::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &FieldElem) -> Mat {
        Mat {
            data: self.data.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    pub fn trace(&self) -> FieldElem {
        let mut t = FieldElem::zero(self.field);
        for i in 0..self.rows.min(self.cols) {
            t = &t + self.get(i, i);
        }
        t
    }

    /// Checked product.
    pub fn try_mul(&self, rhs: &Mat) -> Result<Mat> {
        if self.cols != rhs.rows || self.field != rhs.field {
            return Err(Error::SizeMismatch(format!(
                "cannot multiply {}x{} over {} by {}x{} over {}",
                self.rows, self.cols, self.field, rhs.rows, rhs.cols, rhs.field
            )));
        }
        let mut out = Mat::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &Mat, f: impl Fn(&FieldElem, &FieldElem) -> FieldElem) -> Mat {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols && self.field == rhs.field,
            "shape mismatch"
        );
        Mat {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
            ..self.clone()
        }
    }

    /// Row echelon form by exact elimination, taking the first nonzero entry
    /// of each column as pivot. Returns the reduced matrix and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let idx = r * m.cols + j;
                m.data[idx] = &m.data[idx] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = &f * m.get(r, j);
                    let idx = i * m.cols + j;
                    m.data[idx] = &m.data[idx] - &v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{v : M v = 0}`; each basis vector has a
    /// 1 in its free coordinate.
    pub fn null_space(&self) -> Vec<Vec<FieldElem>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![FieldElem::zero(self.field); self.cols];
                v[f] = FieldElem::one(self.field);
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> FieldElem {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = FieldElem::one(self.field);
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return FieldElem::zero(self.field);
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().expect("pivot is nonzero");
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) * &inv;
                for j in c..n {
                    let v = &f * m.get(c, j);
                    let idx = i * n + j;
                    m.data[idx] = &m.data[idx] - &v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Mat::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j).clone();
            }
            aug.data[i * 2 * n + n + i] = FieldElem::one(self.field);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = r.get(i, n + j).clone();
            }
        }
        Some(inv)
    }

    /// Coefficients of `det(λI − M)` from the constant term up, monic.
    ///
    /// Berkowitz's algorithm: division-free, so valid in every
    /// characteristic.
    pub fn charpoly(&self) -> Result<Vec<FieldElem>> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let f = self.field;
        // Descending coefficients of the leading r×r block's charpoly.
        let mut v = vec![FieldElem::one(f)];
        for r in 0..n {
            let a = self.get(r, r).clone();
            let row: Vec<FieldElem> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let mut col: Vec<FieldElem> = (0..r).map(|i| self.get(i, r).clone()).collect();
            // Toeplitz column: 1, -a, -R S, -R A S, ..., -R A^{r-1} S
            let mut t = Vec::with_capacity(r + 2);
            t.push(FieldElem::one(f));
            t.push(-&a);
            for _ in 0..r {
                let rs = dot(&row, &col, f);
                t.push(-rs);
                col = (0..r)
                    .map(|i| {
                        let mut s = FieldElem::zero(f);
                        for (k, c) in col.iter().enumerate() {
                            s = &s + &(self.get(i, k) * c);
                        }
                        s
                    })
                    .collect();
            }
            let mut next = vec![FieldElem::zero(f); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    if i >= j {
                        *slot = &*slot + &(&t[i - j] * vj);
                    }
                }
            }
            v = next;
        }
        v.reverse();
        Ok(v)
    }

    /// `σ_t`: the t-th elementary symmetric function of the eigenvalues, so
    /// `sigma(1)` is the trace and `sigma(n)` the determinant.
    pub fn sigma(&self, t: usize) -> Result<FieldElem> {
        let cp = self.charpoly()?;
        let n = self.rows;
        if t == 0 || t > n {
            return Err(Error::IndexOutOfRange(format!("sigma index {t} not in 1..={n}")));
        }
        let c = cp[n - t].clone();
        Ok(if t % 2 == 1 { -c } else { c })
    }

    /// Roots of the characteristic polynomial lying in the field, with
    /// multiplicities, sorted by the field order.
    pub fn eigs_in_field(&self) -> Result<Vec<(FieldElem, usize)>> {
        let cp = self.charpoly()?;
        let mut roots = match self.field {
            FieldSpec::Prime(_) => roots_mod_p(&cp, self.field),
            FieldSpec::Rationals => rational_roots(&cp),
        };
        roots.sort_by(|a, b| cmp_same(&a.0, &b.0));
        Ok(roots)
    }

    /// `g` with `g·A·g⁻¹ = diag(a₁ < ⋯ < aₙ)`. Row `i` of `g` is a left
    /// eigenvector for `aᵢ`, taken from the null space of `(A − aᵢI)ᵀ`.
    pub fn diagonalizer(&self) -> Result<(Mat, Vec<FieldElem>)> {
        let eigs = self.eigs_in_field()?;
        let n = self.rows;
        if eigs.len() != n || eigs.iter().any(|(_, m)| *m != 1) {
            return Err(Error::NotSimpleSpectrum);
        }
        let a: Vec<FieldElem> = eigs.into_iter().map(|(x, _)| x).collect();
        let mut g = Mat::zeros(self.field, n, n);
        for (i, ai) in a.iter().enumerate() {
            let shifted = self - &Mat::identity(self.field, n).scale(ai);
            let ns = shifted.transpose().null_space();
            debug_assert_eq!(ns.len(), 1);
            for (j, x) in ns[0].iter().enumerate() {
                g.data[i * n + j] = x.clone();
            }
        }
        Ok((g, a))
    }
}

fn dot(a: &[FieldElem], b: &[FieldElem], f: FieldSpec) -> FieldElem {
    a.iter()
        .zip(b)
        .fold(FieldElem::zero(f), |s, (x, y)| &s + &(x * y))
}

/// Componentwise `g·M·g⁻¹`.
pub fn conjugate(g: &Mat, mats: &[Mat]) -> Result<Vec<Mat>> {
    let gi = g.inverse().ok_or(Error::Singular)?;
    mats.iter()
        .map(|m| {
            if m.rows != g.rows || !m.is_square() {
                return Err(Error::SizeMismatch(format!(
                    "conjugating {}x{} by {}x{}",
                    m.rows, m.cols, g.rows, g.cols
                )));
            }
            g.try_mul(m)?.try_mul(&gi)
        })
        .collect()
}

/// Evaluate a polynomial (ascending coefficients) at `x`.
pub(crate) fn poly_eval(coeffs: &[FieldElem], x: &FieldElem) -> FieldElem {
    let f = x.spec();
    coeffs
        .iter()
        .rev()
        .fold(FieldElem::zero(f), |acc, c| &(&acc * x) + c)
}

/// Divide by `(λ − root)` if it is a root; returns the quotient.
fn deflate(coeffs: &[FieldElem], root: &FieldElem) -> Option<Vec<FieldElem>> {
    if coeffs.len() < 2 || !poly_eval(coeffs, root).is_zero() {
        return None;
    }
    let deg = coeffs.len() - 1;
    let mut q = vec![FieldElem::zero(root.spec()); deg];
    let mut carry = FieldElem::zero(root.spec());
    for i in (0..deg).rev() {
        carry = &coeffs[i + 1] + &(&carry * root);
        q[i] = carry.clone();
    }
    Some(q)
}

fn multiplicity(coeffs: &[FieldElem], root: &FieldElem) -> (usize, Vec<FieldElem>) {
    let mut cur = coeffs.to_vec();
    let mut m = 0;
    while let Some(q) = deflate(&cur, root) {
        cur = q;
        m += 1;
    }
    (m, cur)
}

fn roots_mod_p(coeffs: &[FieldElem], f: FieldSpec) -> Vec<(FieldElem, usize)> {
    let mut cur = coeffs.to_vec();
    let mut out = Vec::new();
    for x in f.elements() {
        if cur.len() < 2 {
            break;
        }
        let (m, rest) = multiplicity(&cur, &x);
        if m > 0 {
            out.push((x, m));
            cur = rest;
        }
    }
    out
}

/// Rational roots of a rational polynomial via the rational-root theorem on
/// the denominator-cleared integer polynomial. Candidates `±d/e` are
/// restricted to `|d/e|` below the Cauchy bound.
fn rational_roots(coeffs: &[FieldElem]) -> Vec<(FieldElem, usize)> {
    let q = FieldSpec::Rationals;
    let mut out = Vec::new();
    let (m0, mut cur) = multiplicity(coeffs, &FieldElem::zero(q));
    if m0 > 0 {
        out.push((FieldElem::zero(q), m0));
    }
    loop {
        if cur.len() < 2 {
            break;
        }
        let rats: Vec<&BigRational> = cur.iter().map(|c| c.as_rational().unwrap()).collect();
        let lcm = rats
            .iter()
            .fold(BigInt::one(), |l, r| l.lcm(r.denom()));
        let ints: Vec<BigInt> = rats.iter().map(|r| (*r * &lcm).to_integer()).collect();
        let lead = ints.last().unwrap().abs();
        let constant = ints[0].abs();
        // Cauchy bound for the monic normalisation.
        let bound = ints[..ints.len() - 1]
            .iter()
            .map(|c| BigRational::new(c.abs(), lead.clone()))
            .max()
            .unwrap_or_else(BigRational::zero)
            + BigRational::one();
        let mut found = None;
        'search: for e in divisors(&lead, None) {
            let cap = (&bound * BigRational::from_integer(e.clone())).floor().to_integer();
            for d in divisors(&constant, Some(&cap)) {
                for sign in [1i32, -1] {
                    let cand = FieldElem::Rat(BigRational::new(&d * BigInt::from(sign), e.clone()));
                    let (m, rest) = multiplicity(&cur, &cand);
                    if m > 0 {
                        found = Some((cand, m, rest));
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some((r, m, rest)) => {
                out.push((r, m));
                cur = rest;
            }
            None => break,
        }
    }
    out
}

/// Positive divisors of `x` (nonzero), optionally only those `≤ cap`.
fn divisors(x: &BigInt, cap: Option<&BigInt>) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *x {
        if let Some(c) = cap {
            if &d > c {
                break;
            }
        }
        if (x % &d).is_zero() {
            let other = x / &d;
            if other != d && cap.is_none_or(|c| &other <= c) {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.try_mul(rhs).expect("shape mismatch in matrix product")
    }
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat {
            data: self.data.iter().map(|x| -x).collect(),
            ..self.clone()
        }
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn qi(x: i64) -> FieldElem {
        FieldElem::from_i64(Q, x)
    }

    /// det(λI − M) by the Leibniz expansion with polynomial entries.
    fn leibniz_charpoly(m: &Mat) -> Vec<FieldElem> {
        let n = m.rows();
        let f = m.field();
        let entry = |i: usize, j: usize| -> Vec<FieldElem> {
            let c = -m.get(i, j);
            if i == j {
                vec![c, FieldElem::one(f)]
            } else {
                vec![c]
            }
        };
        let mut total = vec![FieldElem::zero(f); n + 1];
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| {
            let mut inversions = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if p[a] > p[b] {
                        inversions += 1;
                    }
                }
            }
            let mut prod = vec![FieldElem::one(f)];
            for (i, &j) in p.iter().enumerate() {
                let e = entry(i, j);
                let mut next = vec![FieldElem::zero(f); prod.len() + e.len() - 1];
                for (a, x) in prod.iter().enumerate() {
                    for (b, y) in e.iter().enumerate() {
                        next[a + b] = &next[a + b] + &(x * y);
                    }
                }
                prod = next;
            }
            for (k, c) in prod.into_iter().enumerate() {
                total[k] = if inversions % 2 == 0 { &total[k] + &c } else { &total[k] - &c };
            }
        });
        total
    }

    fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permutations(p, k + 1, f);
            p.swap(k, i);
        }
    }

    fn elementary_symmetric(a: &[FieldElem], t: usize) -> FieldElem {
        let f = a[0].spec();
        let mut sum = FieldElem::zero(f);
        for mask in 0u32..(1 << a.len()) {
            if mask.count_ones() as usize == t {
                let mut prod = FieldElem::one(f);
                for (i, x) in a.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        prod = &prod * x;
                    }
                }
                sum = &sum + &prod;
            }
        }
        sum
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Mat::zeros(Q, 4, 4).rank(), 0);
        let m = Mat::from_i64(Q, &[&[0, 1, 0, -1], &[0, 0, 0, 0], &[0, -1, 0, 1], &[0, 0, 0, 0]]);
        assert_eq!(m.rank(), 1);
        let m = Mat::from_i64(Q, &[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, -1, 0, 1], &[0, 0, 0, 0]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn sigma_examples() {
        let d = Mat::diag(Q, &[qi(1), qi(2), qi(3)]);
        assert_eq!(d.sigma(1).unwrap(), qi(6));
        assert_eq!(d.sigma(2).unwrap(), qi(11));
        assert_eq!(d.sigma(3).unwrap(), qi(6));
        assert_eq!(Mat::identity(Q, 4).sigma(4).unwrap(), qi(1));
        assert!(Mat::zeros(Q, 2, 3).sigma(1).is_err());
        assert!(d.sigma(0).is_err());
        assert!(d.sigma(4).is_err());
    }

    #[test]
    fn berkowitz_matches_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in [Q, FieldSpec::Prime(2), FieldSpec::Prime(3), FieldSpec::Prime(7)] {
            for n in 1..=5 {
                for _ in 0..10 {
                    let m = Mat::random(field, n, &mut rng, 4);
                    assert_eq!(m.charpoly().unwrap(), leibniz_charpoly(&m), "{m}");
                }
            }
        }
    }

    #[test]
    fn sigma_of_diagonal_is_elementary_symmetric() {
        for p in [2u64, 3, 5] {
            let f = FieldSpec::Prime(p);
            let els: Vec<_> = f.elements().collect();
            for n in 1..=3usize {
                let total = els.len().pow(n as u32);
                for code in 0..total {
                    let mut c = code;
                    let a: Vec<_> = (0..n)
                        .map(|_| {
                            let x = els[c % els.len()].clone();
                            c /= els.len();
                            x
                        })
                        .collect();
                    let d = Mat::diag(f, &a);
                    for t in 1..=n {
                        assert_eq!(d.sigma(t).unwrap(), elementary_symmetric(&a, t));
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a: Vec<_> = (0..4).map(|_| FieldElem::random(Q, &mut rng, 9)).collect();
            let d = Mat::diag(Q, &a);
            for t in 1..=4 {
                assert_eq!(d.sigma(t).unwrap(), elementary_symmetric(&a, t));
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let d = Mat::diag(Q, &[qi(0), qi(1)]);
        assert_eq!(d.eigs_in_field().unwrap(), vec![(qi(0), 1), (qi(1), 1)]);
        let e12 = Mat::unit(Q, 2, 0, 1);
        assert_eq!(e12.eigs_in_field().unwrap(), vec![(qi(0), 2)]);
        let companion = Mat::from_i64(Q, &[&[0, 2], &[1, 0]]);
        assert_eq!(companion.eigs_in_field().unwrap(), vec![]);
        // λ² − 2 has no rational root: the only candidates are ±1, ±2.
        for c in [-2, -1, 1, 2] {
            assert!(!poly_eval(&companion.charpoly().unwrap(), &qi(c)).is_zero());
        }
        let m = Mat::diag(
            Q,
            &[
                FieldElem::from_ratio(Q, -3, 2).unwrap(),
                FieldElem::from_ratio(Q, 5, 7).unwrap(),
                FieldElem::from_ratio(Q, 5, 7).unwrap(),
            ],
        );
        let g = Mat::from_i64(Q, &[&[1, 2, 0], &[0, 1, 3], &[1, 0, 1]]);
        let conj = &(&g * &m) * &g.inverse().unwrap();
        assert_eq!(
            conj.eigs_in_field().unwrap(),
            vec![
                (FieldElem::from_ratio(Q, -3, 2).unwrap(), 1),
                (FieldElem::from_ratio(Q, 5, 7).unwrap(), 2)
            ]
        );
    }

    #[test]
    fn diagonalizer_examples() {
        let d = Mat::diag(Q, &[qi(0), qi(1), qi(2)]);
        let (g, a) = d.diagonalizer().unwrap();
        assert_eq!(g, Mat::identity(Q, 3));
        assert_eq!(a, vec![qi(0), qi(1), qi(2)]);

        let d = Mat::diag(Q, &[qi(2), qi(0), qi(1)]);
        let (g, a) = d.diagonalizer().unwrap();
        assert_eq!(a, vec![qi(0), qi(1), qi(2)]);
        assert_eq!(g, Mat::from_i64(Q, &[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]));
        assert_eq!(conjugate(&g, &[d]).unwrap()[0], Mat::diag(Q, &a));

        let f5 = FieldSpec::Prime(5);
        let s = Mat::from_i64(f5, &[&[0, 1], &[1, 0]]);
        let (g, a) = s.diagonalizer().unwrap();
        let expect = [FieldElem::from_i64(f5, 1), FieldElem::from_i64(f5, 4)];
        assert_eq!(a, expect);
        assert_eq!(conjugate(&g, &[s]).unwrap()[0], Mat::diag(f5, &expect));

        assert_eq!(
            Mat::unit(Q, 2, 0, 1).diagonalizer(),
            Err(Error::NotSimpleSpectrum)
        );
    }

    #[test]
    fn conjugate_examples() {
        let a1 = Mat::diag(Q, &[qi(0), qi(1)]);
        let a2 = Mat::unit(Q, 2, 0, 1);
        let same = conjugate(&Mat::identity(Q, 2), &[a1.clone(), a2.clone()]).unwrap();
        assert_eq!(same, vec![a1.clone(), a2.clone()]);
        let g = Mat::diag(Q, &[qi(2), qi(1)]);
        let out = conjugate(&g, &[a1.clone(), a2.clone()]).unwrap();
        assert_eq!(out, vec![a1.clone(), a2.scale(&qi(2))]);
        assert_eq!(conjugate(&Mat::zeros(Q, 2, 2), &[a1]), Err(Error::Singular));
    }

    #[test]
    fn inverse_and_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for field in [Q, FieldSpec::Prime(7)] {
            for n in 1..=5 {
                let g = Mat::random_invertible(field, n, &mut rng, 5);
                let gi = g.inverse().unwrap();
                assert_eq!(&g * &gi, Mat::identity(field, n));
                assert!((&g.det() * &gi.det()).is_one());
            }
        }
        let sing = Mat::from_i64(Q, &[&[1, 2], &[2, 4]]);
        assert!(sing.inverse().is_none());
        assert!(sing.det().is_zero());
    }

    #[test]
    fn null_space_vectors_are_annihilated() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let m = Mat::random(FieldSpec::Prime(3), 4, &mut rng, 1);
            let ns = m.null_space();
            assert_eq!(ns.len() + m.rank(), 4);
            for v in ns {
                let col = Mat::from_rows(m.field(), v.into_iter().map(|x| vec![x]).collect()).unwrap();
                assert!((&m * &col).is_zero());
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn rank_is_invariant_under_invertible_multiplication(seed in 0u64..10_000, n in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = FieldSpec::Prime(5);
            let m = Mat::random(f, n, &mut rng, 1);
            let g = Mat::random_invertible(f, n, &mut rng, 1);
            let h = Mat::random_invertible(f, n, &mut rng, 1);
            proptest::prop_assert_eq!((&(&g * &m) * &h).rank(), m.rank());
        }

        #[test]
        fn sigma_is_conjugation_invariant(seed in 0u64..10_000, n in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for f in [FieldSpec::Rationals, FieldSpec::Prime(7)] {
                let m = Mat::random(f, n, &mut rng, 3);
                let g = Mat::random_invertible(f, n, &mut rng, 3);
                let c = &conjugate(&g, &[m.clone()]).unwrap()[0];
                for t in 1..=n {
                    proptest::prop_assert_eq!(c.sigma(t).unwrap(), m.sigma(t).unwrap());
                }
            }
        }

        #[test]
        fn conjugation_is_an_action(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = FieldSpec::Prime(11);
            let m = Mat::random(f, 3, &mut rng, 1);
            let g = Mat::random_invertible(f, 3, &mut rng, 1);
            let h = Mat::random_invertible(f, 3, &mut rng, 1);
            let lhs = conjugate(&(&g * &h), &[m.clone()]).unwrap();
            let rhs = conjugate(&g, &conjugate(&h, &[m]).unwrap()).unwrap();
            proptest::prop_assert_eq!(lhs, rhs);
        }
    }
}
