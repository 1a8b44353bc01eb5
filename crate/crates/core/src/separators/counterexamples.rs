//! Checks for two pairs of pairs that look alike to weak invariants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canonical::{canonicalize, orbit_eq_brute, orbit_eq_canonical, MatrixPair};
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::glenum::GlGuard;
use crate::linalg::Mat;
use crate::ncpoly::{NcPoly, Word};
use crate::separators::zeta;
use crate::stargraph::{lex_positions, matches, star_from_forest, Digraph};

/// Polynomials used to probe a pair: every monic word up to `max_word`,
/// then seeded random combinations of words up to `max_random`.
pub fn sample_polys(
    field: FieldSpec,
    max_word: usize,
    max_random: usize,
    total: usize,
    seed: u64,
) -> Vec<NcPoly> {
    let mut out = Vec::with_capacity(total);
    let mut words = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_word {
        layer = layer
            .iter()
            .flat_map(|w| [w.concat(&Word::letter(0)), w.concat(&Word::letter(1))])
            .collect();
        words.extend(layer.iter().cloned());
    }
    for w in words {
        out.push(NcPoly::monomial(field, 2, w, FieldElem::one(field)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < total {
        let mut p = NcPoly::zero(field, 2);
        for _ in 0..rng.gen_range(1..=5) {
            let len = rng.gen_range(0..=max_random);
            let w = Word((0..len).map(|_| rng.gen_range(0..2)).collect());
            p = p.add(&NcPoly::monomial(field, 2, w, FieldElem::random(field, &mut rng, 4)));
        }
        out.push(p);
    }
    out
}

fn fail(msg: String) -> Error {
    Error::Verification(msg)
}

fn sigmas(m: &Mat) -> Result<Vec<FieldElem>> {
    (1..=m.rows()).map(|t| m.sigma(t)).collect()
}

/// Outcome of the width-one check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidthOneReport {
    pub field: FieldSpec,
    pub seed: u64,
    pub samples: usize,
    /// Samples with `β ≠ 0`, where the explicit conjugator was checked.
    pub conjugators_checked: usize,
    /// `Some(false)` once an exhaustive search found no conjugator.
    pub brute_orbits_equal: Option<bool>,
}

/// `A = (E₁₂, E₁₃)` and `B = (E₁₂, E₃₂)`.
pub fn width_one_pairs(field: FieldSpec) -> (MatrixPair, MatrixPair) {
    let a = MatrixPair::new(Mat::unit(field, 3, 0, 1), Mat::unit(field, 3, 0, 2)).expect("3x3");
    let b = MatrixPair::new(Mat::unit(field, 3, 0, 1), Mat::unit(field, 3, 2, 1)).expect("3x3");
    (a, b)
}

/// For every sampled `F`, `F(A)` and `F(B)` have the predicted shapes, are
/// conjugate, and agree on rank, σ and ζ; over a prime field an exhaustive
/// search confirms `A` and `B` lie in different orbits.
pub fn verify_counterexample_width_one(
    field: FieldSpec,
    samples: usize,
    seed: u64,
    guard: Option<&GlGuard>,
) -> Result<WidthOneReport> {
    let (a, b) = width_one_pairs(field);
    let (ta, tb) = (a.to_vec(), b.to_vec());
    let mut conjugators_checked = 0;
    let polys = sample_polys(field, 4, 6, samples, seed);
    for (k, f) in polys.iter().enumerate() {
        let fa = f.eval(&ta, 3)?;
        let fb = f.eval(&tb, 3)?;
        let alpha = f.coeff(&Word::letter(0));
        let beta = f.coeff(&Word::letter(1));
        let gamma = f.coeff(&Word::empty());
        let base = &Mat::identity(field, 3).scale(&gamma) + &Mat::unit(field, 3, 0, 1).scale(&alpha);
        if fa != &base + &Mat::unit(field, 3, 0, 2).scale(&beta)
            || fb != &base + &Mat::unit(field, 3, 2, 1).scale(&beta)
        {
            return Err(fail(format!("sample {k}: values leave the predicted shape")));
        }
        if fa.rank() != fb.rank() || sigmas(&fa)? != sigmas(&fb)? || zeta(&fa) != zeta(&fb) {
            return Err(fail(format!("sample {k}: rank, sigma or zeta differ")));
        }
        if beta.is_zero() {
            if fa != fb {
                return Err(fail(format!("sample {k}: values differ although beta = 0")));
            }
            continue;
        }
        let z = FieldElem::zero(field);
        let g = Mat::from_rows(
            field,
            vec![
                vec![alpha.clone(), FieldElem::one(field), z.clone()],
                vec![z.clone(), alpha.clone(), beta.clone()],
                vec![beta.clone(), z.clone(), z],
            ],
        )?;
        if g.det().is_zero() || &g * &fa != &fb * &g {
            return Err(fail(format!("sample {k}: the explicit conjugator fails")));
        }
        conjugators_checked += 1;
    }
    let brute_orbits_equal = match (field, guard) {
        (FieldSpec::Prime(_), Some(gd)) => {
            let eq = orbit_eq_brute(&a, &b, gd)?;
            if eq {
                return Err(fail("exhaustive search found a conjugator".into()));
            }
            Some(eq)
        }
        _ => None,
    };
    Ok(WidthOneReport {
        field,
        seed,
        samples: polys.len(),
        conjugators_checked,
        brute_orbits_equal,
    })
}

/// Outcome of the σ/ζ check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaZetaReport {
    pub field: FieldSpec,
    pub seed: u64,
    pub samples: usize,
    pub alpha: FieldElem,
    pub beta: FieldElem,
    pub orbits_equal: bool,
}

/// Positions that are zero for every matrix of the shared algebra.
const L_ZEROS: [(usize, usize); 8] = [(0, 1), (0, 2), (0, 3), (1, 3), (2, 0), (2, 1), (2, 3), (3, 1)];

/// `(diag(a), A₂)` with `A₂ = E₂₁ + E₂₃ + E₄₁ + c·E₄₃`.
pub fn sigma_zeta_pair(a: &[FieldElem], c: &FieldElem) -> Result<MatrixPair> {
    if a.len() != 4 {
        return Err(Error::SizeMismatch(format!("{} eigenvalues, expected 4", a.len())));
    }
    let f = c.spec();
    let mut a2 = Mat::zeros(f, 4, 4);
    for (i, j) in [(1, 0), (1, 2), (3, 0)] {
        a2.set(i, j, FieldElem::one(f));
    }
    a2.set(3, 2, c.clone());
    MatrixPair::new(Mat::diag(f, a), a2)
}

/// Whether `(l, m)` lies in the paired algebra: both in the shared shape,
/// equal off `(4, 3)`, and `(l₄₃, m₄₃)` proportional to `(α, β)`.
pub fn in_paired_algebra(l: &Mat, m: &Mat, alpha: &FieldElem, beta: &FieldElem) -> bool {
    let in_shape = |x: &Mat| L_ZEROS.iter().all(|&(i, j)| x.get(i, j).is_zero());
    in_shape(l)
        && in_shape(m)
        && lex_positions(4)
            .filter(|&pos| pos != (3, 2))
            .all(|(i, j)| l.get(i, j) == m.get(i, j))
        && l.get(3, 2) * beta == m.get(3, 2) * alpha
}

/// Two pairs of one type that no `σ_t(F)` or `ζ(F)` tells apart yet lie in
/// different orbits.
pub fn verify_counterexample_sigma_zeta(
    a: &[FieldElem],
    alpha: &FieldElem,
    beta: &FieldElem,
    samples: usize,
    seed: u64,
) -> Result<SigmaZetaReport> {
    let f = alpha.spec();
    if alpha.is_zero() || beta.is_zero() || alpha == beta {
        return Err(Error::Precondition("alpha and beta must be distinct and nonzero".into()));
    }
    let pa = sigma_zeta_pair(a, alpha)?;
    let pb = sigma_zeta_pair(a, beta)?;
    let expected_type = Digraph::from_one_based(4, &[(4, 1), (2, 1), (2, 3)])?;
    let star = star_from_forest(&expected_type)?;
    if !matches(&star, &pa.a2) || !matches(&star, &pb.a2) {
        return Err(fail("second matrices do not fit the expected pattern".into()));
    }
    let ca = canonicalize(&pa)?.canon;
    let cb = canonicalize(&pb)?.canon;
    if ca.type_graph != expected_type || cb.type_graph != expected_type {
        return Err(fail("canonical types differ from the expected forest".into()));
    }
    let (ta, tb) = (pa.to_vec(), pb.to_vec());
    let polys = sample_polys(f, 5, 7, samples, seed);
    for (k, p) in polys.iter().enumerate() {
        let fa = p.eval(&ta, 4)?;
        let fb = p.eval(&tb, 4)?;
        if !in_paired_algebra(&fa, &fb, alpha, beta) {
            return Err(fail(format!("sample {k}: values leave the paired algebra")));
        }
        if sigmas(&fa)? != sigmas(&fb)? || zeta(&fa) != zeta(&fb) {
            return Err(fail(format!("sample {k}: sigma or zeta differ")));
        }
    }
    let orbits_equal = orbit_eq_canonical(&pa, &pb)?;
    if orbits_equal || ca.params[&(3, 2)] == cb.params[&(3, 2)] {
        return Err(fail("canonical forms coincide".into()));
    }
    Ok(SigmaZetaReport {
        field: f,
        seed,
        samples: polys.len(),
        alpha: alpha.clone(),
        beta: beta.clone(),
        orbits_equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn first_values() {
        let (a, b) = width_one_pairs(Q);
        let x1 = NcPoly::letter(Q, 2, 0);
        let x2 = NcPoly::letter(Q, 2, 1);
        assert_eq!(x1.eval(&a.to_vec(), 3).unwrap(), Mat::unit(Q, 3, 0, 1));
        assert_eq!(x1.eval(&b.to_vec(), 3).unwrap(), Mat::unit(Q, 3, 0, 1));
        let (fa, fb) = (x2.eval(&a.to_vec(), 3).unwrap(), x2.eval(&b.to_vec(), 3).unwrap());
        assert_eq!((fa.rank(), fb.rank()), (1, 1));
        assert_eq!(fb, Mat::unit(Q, 3, 2, 1));
    }

    #[test]
    fn explicit_conjugator_survives_vanishing_alpha() {
        let f = FieldSpec::Prime(5);
        let p = NcPoly::parse(f, 2, "3*x2 + 1*1").unwrap();
        let (a, b) = width_one_pairs(f);
        let (fa, fb) = (p.eval(&a.to_vec(), 3).unwrap(), p.eval(&b.to_vec(), 3).unwrap());
        let g = Mat::from_i64(f, &[&[0, 1, 0], &[0, 0, 3], &[3, 0, 0]]);
        assert_eq!(g.det(), FieldElem::from_i64(f, 9));
        assert_eq!(&g * &fa, &fb * &g);
    }

    #[test]
    fn width_one_sampled_over_both_fields() {
        let r = verify_counterexample_width_one(Q, 500, 1, None).unwrap();
        assert_eq!(r.samples, 500);
        assert!(r.conjugators_checked > 0);
        let small = GlGuard::default();
        let r = verify_counterexample_width_one(FieldSpec::Prime(3), 300, 2, Some(&small)).unwrap();
        assert_eq!(r.brute_orbits_equal, Some(false));
    }

    #[test]
    fn sigma_zeta_defaults() {
        let a: Vec<FieldElem> = (0..4).map(|x| FieldElem::from_i64(Q, x)).collect();
        let one = FieldElem::one(Q);
        let two = FieldElem::from_i64(Q, 2);
        let r = verify_counterexample_sigma_zeta(&a, &one, &two, 400, 7).unwrap();
        assert!(!r.orbits_equal);
        let pa = sigma_zeta_pair(&a, &one).unwrap();
        let pb = sigma_zeta_pair(&a, &two).unwrap();
        assert!(in_paired_algebra(&pa.a2, &pb.a2, &one, &two));
        assert!(in_paired_algebra(&pa.a1, &pb.a1, &one, &two));
        assert!(!in_paired_algebra(&pa.a2, &pa.a2, &one, &two));
        assert!(verify_counterexample_sigma_zeta(&a, &one, &one, 10, 0).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let s1 = sample_polys(Q, 2, 4, 20, 9);
        let s2 = sample_polys(Q, 2, 4, 20, 9);
        assert_eq!(s1, s2);
        assert_eq!(s1.len(), 20);
        assert_eq!(sample_polys(Q, 4, 6, 0, 0).len(), 31);
    }
}
