//! Exhaustive enumeration of `GLₙ(𝔽ₚ)` for brute-force oracles.

use crate::error::{Error, Result};
use crate::field::{is_prime, FieldElem, FieldSpec};
use crate::linalg::Mat;

/// Limits on brute-force group enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlGuard {
    pub max_n: usize,
    pub max_order: u128,
}

impl Default for GlGuard {
    fn default() -> Self {
        GlGuard {
            max_n: 3,
            max_order: 20_000_000,
        }
    }
}

/// `|GLₙ(𝔽ₚ)| = ∏_{i<n} (pⁿ − pⁱ)`, saturating.
pub fn gl_order(n: usize, p: u64) -> u128 {
    let pn = (p as u128).saturating_pow(n as u32);
    (0..n as u32).fold(1u128, |acc, i| {
        acc.saturating_mul(pn - (p as u128).saturating_pow(i))
    })
}

impl GlGuard {
    pub fn check(&self, n: usize, p: u64) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::Precondition("n must be positive".into()));
        }
        if n > self.max_n {
            return Err(Error::GuardExceeded(format!(
                "n = {n} exceeds the enumeration limit {}",
                self.max_n
            )));
        }
        let order = gl_order(n, p);
        if order > self.max_order {
            return Err(Error::GuardExceeded(format!(
                "|GL_{n}(F_{p})| = {order} exceeds the limit {}",
                self.max_order
            )));
        }
        Ok(())
    }
}

/// Every invertible `n×n` matrix over 𝔽ₚ exactly once, lexicographic over
/// row-major entry tuples.
pub fn enumerate_gl(n: usize, p: u64, guard: &GlGuard) -> Result<GlIter> {
    guard.check(n, p)?;
    Ok(GlIter {
        n,
        p,
        entries: Some(vec![0; n * n]),
    })
}

/// Iterator returned by [`enumerate_gl`].
#[derive(Debug, Clone)]
pub struct GlIter {
    n: usize,
    p: u64,
    entries: Option<Vec<u64>>,
}

impl Iterator for GlIter {
    type Item = Mat;

    fn next(&mut self) -> Option<Mat> {
        loop {
            let cur = self.entries.as_mut()?;
            let hit = det_mod(cur, self.n, self.p) != 0;
            let snapshot = if hit { Some(cur.clone()) } else { None };
            if !increment(cur, self.p) {
                self.entries = None;
            }
            if let Some(e) = snapshot {
                return Some(residues_to_mat(&e, self.n, self.p));
            }
        }
    }
}

fn residues_to_mat(e: &[u64], n: usize, p: u64) -> Mat {
    let f = FieldSpec::Prime(p);
    let rows = e
        .chunks(n)
        .map(|r| r.iter().map(|&v| FieldElem::Mod { v, p }).collect())
        .collect();
    Mat::from_rows(f, rows).expect("square residue matrix")
}

/// Advance a big-endian base-p counter; false after the last tuple.
fn increment(e: &mut [u64], p: u64) -> bool {
    for slot in e.iter_mut().rev() {
        *slot += 1;
        if *slot < p {
            return true;
        }
        *slot = 0;
    }
    false
}

pub(crate) fn det_mod(e: &[u64], n: usize, p: u64) -> u64 {
    let mut m = e.to_vec();
    let mut det = 1u64;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&r| m[r * n + c] != 0) else {
            return 0;
        };
        if pr != c {
            for j in 0..n {
                m.swap(pr * n + j, c * n + j);
            }
            det = (p - det) % p;
        }
        let piv = m[c * n + c];
        det = det * piv % p;
        let inv = pow_mod(piv, p - 2, p);
        for r in c + 1..n {
            let f = m[r * n + c] * inv % p;
            if f == 0 {
                continue;
            }
            for j in c..n {
                m[r * n + j] = (m[r * n + j] + p - f * m[c * n + j] % p) % p;
            }
        }
    }
    det
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// `Some(g)` for the first `g ∈ GLₙ(𝔽ₚ)` in enumeration order with
/// `g·Aₖ = Bₖ·g` for every k, i.e. `g·A·g⁻¹ = B`.
///
/// Works on raw residues: the intertwining test is cheaper than
/// conjugation and is checked before the determinant.
pub(crate) fn find_conjugator(
    a: &[Mat],
    b: &[Mat],
    n: usize,
    p: u64,
    guard: &GlGuard,
) -> Result<Option<Mat>> {
    guard.check(n, p)?;
    let to_res = |m: &Mat| -> Vec<u64> {
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).residue().expect("prime field entry"))
            .collect()
    };
    let ar: Vec<Vec<u64>> = a.iter().map(to_res).collect();
    let br: Vec<Vec<u64>> = b.iter().map(to_res).collect();
    let intertwines = |g: &[u64], x: &[u64], y: &[u64]| {
        for i in 0..n {
            for j in 0..n {
                let mut lhs = 0u64;
                let mut rhs = 0u64;
                for k in 0..n {
                    lhs += g[i * n + k] * x[k * n + j];
                    rhs += y[i * n + k] * g[k * n + j];
                }
                if lhs % p != rhs % p {
                    return false;
                }
            }
        }
        true
    };
    let mut g = vec![0u64; n * n];
    loop {
        if ar.iter().zip(&br).all(|(x, y)| intertwines(&g, x, y)) && det_mod(&g, n, p) != 0 {
            return Ok(Some(residues_to_mat(&g, n, p)));
        }
        if !increment(&mut g, p) {
            return Ok(None);
        }
    }
}
