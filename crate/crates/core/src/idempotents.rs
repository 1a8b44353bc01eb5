//! Polynomials in `x₁` that cut out diagonal idempotents, and the probes
//! `Hᵢ·x₂·Hⱼ` built from them.

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::ncpoly::{NcExpr, NcPoly};

/// Pairwise distinct scalars `a₁, …, aₙ` over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigVector {
    field: FieldSpec,
    a: Vec<FieldElem>,
}

impl EigVector {
    pub fn new(a: Vec<FieldElem>) -> Result<Self> {
        let field = a
            .first()
            .map(FieldElem::spec)
            .ok_or_else(|| Error::Precondition("empty eigenvalue vector".into()))?;
        if let Some(e) = a.iter().find(|e| e.spec() != field) {
            return Err(Error::SpecMismatch(field.to_string(), e.spec().to_string()));
        }
        for (s, x) in a.iter().enumerate() {
            if a[..s].contains(x) {
                return Err(Error::Precondition(format!("repeated eigenvalue {x}")));
            }
        }
        Ok(EigVector { field, a })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn values(&self) -> &[FieldElem] {
        &self.a
    }

    fn check_index(&self, t: usize) -> Result<()> {
        if t >= self.n() {
            return Err(Error::IndexOutOfRange(format!(
                "index {} for {} eigenvalues",
                t + 1,
                self.n()
            )));
        }
        Ok(())
    }
}

/// The Lagrange basis polynomial `∏_{s≠t} (x₁ − a_s)/(a_t − a_s)`, so that
/// `H(diag(a)) = E_tt`. `t` is 0-based.
pub fn h_idempotent(a: &EigVector, t: usize) -> Result<NcPoly> {
    a.check_index(t)?;
    let f = a.field;
    let x1 = NcPoly::letter(f, 1, 0);
    let mut h = NcPoly::one(f, 1);
    for (s, as_) in a.a.iter().enumerate().filter(|(s, _)| *s != t) {
        let denom = (&a.a[t] - as_)
            .inv()
            .ok_or_else(|| Error::Precondition(format!("eigenvalues {} and {} coincide", t + 1, s + 1)))?;
        let factor = x1.sub(&NcPoly::constant(f, 1, as_.clone())).scale(&denom);
        h = h.mul(&factor);
    }
    debug_assert!(h.formal_degree() < a.n());
    Ok(h)
}

/// `H_i·x₂·H_j`; 0-based indices.
pub fn h_pair(a: &EigVector, i: usize, j: usize) -> Result<NcPoly> {
    let x2 = NcPoly::letter(a.field, 2, 1);
    Ok(h_idempotent(a, i)?.mul(&x2).mul(&h_idempotent(a, j)?))
}

/// All `H_t` for one eigenvalue vector, shared between probes.
#[derive(Debug, Clone)]
pub struct Idempotents {
    a: EigVector,
    hs: Vec<NcExpr>,
    x2: NcExpr,
}

impl Idempotents {
    pub fn new(a: &EigVector) -> Result<Self> {
        let hs = (0..a.n())
            .map(|t| Ok(NcExpr::named(format!("H{}", t + 1), NcExpr::poly(h_idempotent(a, t)?))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Idempotents {
            a: a.clone(),
            hs,
            x2: NcExpr::named("X2", NcExpr::poly(NcPoly::letter(a.field, 2, 1))),
        })
    }

    pub fn eigs(&self) -> &EigVector {
        &self.a
    }

    /// `H_i·x₂·H_j` as an unexpanded product, displayed `H{i}{j}`.
    pub fn pair(&self, i: usize, j: usize) -> Result<NcExpr> {
        self.a.check_index(i)?;
        self.a.check_index(j)?;
        let name = if self.a.n() < 10 {
            format!("H{}{}", i + 1, j + 1)
        } else {
            format!("H({},{})", i + 1, j + 1)
        };
        Ok(NcExpr::named(
            name,
            NcExpr::prod(vec![self.hs[i].clone(), self.x2.clone(), self.hs[j].clone()]),
        ))
    }
}
