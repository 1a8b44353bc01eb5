//! Separating invariants: σ-coefficients of `X₁`, the zero indicator of
//! `Hᵢ·X₂·Hⱼ`, and rank probes assembled from staircase certificates.

pub mod counterexamples;

use std::collections::BTreeMap;
use std::fmt;

use crate::canonical::{canonicalize, CanonicalPair, MatrixPair};
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::idempotents::{EigVector, Idempotents};
use crate::linalg::Mat;
use crate::ncpoly::{NcExpr, NcPoly};
use crate::staircase::{staircase_cert, TDSeq};
use crate::stargraph::{lex_positions, undirected_path, Cell, Digraph, Dir, Dsu};

/// 1 for the zero matrix, 0 otherwise.
pub fn zeta(m: &Mat) -> u8 {
    u8::from(m.is_zero())
}

/// 1 iff `rank(m) = t`.
pub fn rank_indicator(m: &Mat, t: usize) -> Result<u8> {
    if t > m.rows().min(m.cols()) {
        return Err(Error::IndexOutOfRange(format!(
            "rank {t} for a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(u8::from(m.rank() == t))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeKind {
    /// `ζ(F)`.
    Zeta,
    /// `rank(F)`, with the value it takes on the pair it was built from.
    Rank { expected: usize },
    /// `σ_t(X₁)`.
    Sigma(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeValue {
    Indicator(u8),
    Rank(usize),
    Scalar(FieldElem),
}

impl fmt::Display for ProbeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbeValue::Indicator(v) => write!(f, "{v}"),
            ProbeValue::Rank(v) => write!(f, "{v}"),
            ProbeValue::Scalar(v) => write!(f, "{v}"),
        }
    }
}

/// An abstract invariant `f(F(X₁, X₂))` for a noncommutative polynomial `F`.
#[derive(Debug, Clone)]
pub struct InvariantProbe {
    expr: NcExpr,
    kind: ProbeKind,
    label: String,
    degree: usize,
}

impl InvariantProbe {
    /// Degree cap for probes on `n×n` pairs.
    pub fn degree_bound(kind: &ProbeKind, n: usize) -> usize {
        match kind {
            ProbeKind::Zeta => 2 * n - 1,
            ProbeKind::Rank { .. } => (n + 1) * (2 * n - 1),
            ProbeKind::Sigma(_) => 1,
        }
    }

    /// Fails when the expression exceeds its degree cap.
    pub fn new(expr: NcExpr, kind: ProbeKind, label: impl Into<String>, n: usize) -> Result<Self> {
        let degree = expr.degree();
        let bound = Self::degree_bound(&kind, n);
        let label = label.into();
        if degree > bound {
            return Err(Error::Verification(format!(
                "probe {label} has degree {degree} above the bound {bound}"
            )));
        }
        Ok(InvariantProbe {
            expr,
            kind,
            label,
            degree,
        })
    }

    pub fn expr(&self) -> &NcExpr {
        &self.expr
    }

    pub fn kind(&self) -> &ProbeKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn evaluate(&self, p: &MatrixPair) -> Result<ProbeValue> {
        let n = p.n();
        let m = self.expr.eval(&[p.a1.clone(), p.a2.clone()], n)?;
        Ok(match self.kind {
            ProbeKind::Zeta => ProbeValue::Indicator(zeta(&m)),
            ProbeKind::Rank { .. } => ProbeValue::Rank(m.rank()),
            ProbeKind::Sigma(t) => ProbeValue::Scalar(m.sigma(t)?),
        })
    }
}

impl fmt::Display for InvariantProbe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ProbeKind::Zeta => write!(f, "zeta({})", self.expr),
            ProbeKind::Rank { .. } => write!(f, "rank({})", self.expr),
            ProbeKind::Sigma(t) => write!(f, "sigma_{t}(X1)"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Equal,
    SeparatedBy {
        probe: Box<InvariantProbe>,
        value_a: ProbeValue,
        value_b: ProbeValue,
    },
}

#[derive(Debug, Clone)]
pub struct SeparationReport {
    pub verdict: Verdict,
    pub probes_evaluated: usize,
}

impl SeparationReport {
    pub fn is_equal(&self) -> bool {
        matches!(self.verdict, Verdict::Equal)
    }
}

/// `σ_t(X₁)` for `t = 1..n`.
pub fn sigma_probes(field: FieldSpec, n: usize) -> Result<Vec<InvariantProbe>> {
    let x1 = NcExpr::named("X1", NcExpr::poly(NcPoly::letter(field, 2, 0)));
    (1..=n)
        .map(|t| InvariantProbe::new(x1.clone(), ProbeKind::Sigma(t), format!("sigma_{t}"), n))
        .collect()
}

/// `ζ(Hᵢ·X₂·Hⱼ)` for all `i ≠ j`, lexicographic.
pub fn zeta_probes(ids: &Idempotents) -> Result<Vec<((usize, usize), InvariantProbe)>> {
    let n = ids.eigs().n();
    lex_positions(n)
        .filter(|(i, j)| i != j)
        .map(|(i, j)| {
            let probe = InvariantProbe::new(
                ids.pair(i, j)?,
                ProbeKind::Zeta,
                format!("zeta{},{}", i + 1, j + 1),
                n,
            )?;
            Ok(((i, j), probe))
        })
        .collect()
}

/// The type read off a table of `ζ(Hᵢ·X₂·Hⱼ)` values on a canonical pair:
/// `Cᵢⱼ = 1 − ζᵢⱼ` marks the nonzero entries, and the forest is recovered
/// by the greedy lexicographic pass.
pub fn type_from_zeta(n: usize, table: &BTreeMap<(usize, usize), u8>) -> Digraph {
    let mut dsu = Dsu::new(n);
    let mut g = Digraph::empty(n);
    for (i, j) in lex_positions(n).filter(|(i, j)| i != j) {
        let nonzero = table.get(&(i, j)).is_some_and(|&z| z == 0);
        if nonzero && dsu.union(i, j) {
            g.add_arrow(i, j).expect("off-diagonal arrow");
        }
    }
    g
}

fn sigma_stage(
    sig: &[InvariantProbe],
    p: &MatrixPair,
    q: &MatrixPair,
    count: &mut usize,
) -> Result<Option<Verdict>> {
    for probe in sig {
        let (va, vb) = (probe.evaluate(p)?, probe.evaluate(q)?);
        *count += 1;
        if va != vb {
            return Ok(Some(Verdict::SeparatedBy {
                probe: Box::new(probe.clone()),
                value_a: va,
                value_b: vb,
            }));
        }
    }
    Ok(None)
}

/// Compare types through `ζ` tables evaluated on `p_eval` and `q_eval`.
fn zeta_stage(
    zp: &[((usize, usize), InvariantProbe)],
    n: usize,
    p_eval: &MatrixPair,
    q_eval: &MatrixPair,
    p_type: &Digraph,
    count: &mut usize,
) -> Result<Option<Verdict>> {
    let mut tp = BTreeMap::new();
    let mut tq = BTreeMap::new();
    let mut first_diff = None;
    for (pos, probe) in zp {
        let (va, vb) = (probe.evaluate(p_eval)?, probe.evaluate(q_eval)?);
        *count += 1;
        let (ProbeValue::Indicator(a), ProbeValue::Indicator(b)) = (&va, &vb) else {
            unreachable!("zeta probes yield indicators");
        };
        tp.insert(*pos, *a);
        tq.insert(*pos, *b);
        if a != b && first_diff.is_none() {
            first_diff = Some(Verdict::SeparatedBy {
                probe: Box::new(probe.clone()),
                value_a: va,
                value_b: vb,
            });
        }
    }
    let gp = type_from_zeta(n, &tp);
    if &gp != p_type {
        return Err(Error::Verification(format!(
            "type recovered from zeta table ({gp}) differs from the canonical type ({p_type})"
        )));
    }
    if gp == type_from_zeta(n, &tq) {
        return Ok(None);
    }
    first_diff
        .map(Some)
        .ok_or_else(|| Error::Verification("types differ but every zeta probe agrees".into()))
}

fn same_shape(p: &MatrixPair, q: &MatrixPair) -> Result<()> {
    if p.field() != q.field() {
        return Err(Error::SpecMismatch(p.field().to_string(), q.field().to_string()));
    }
    if p.n() != q.n() {
        return Err(Error::SizeMismatch(format!("n = {} vs n = {}", p.n(), q.n())));
    }
    Ok(())
}

/// Decide whether two pairs in `Dₙ` have the same type.
pub fn type_separation(p: &MatrixPair, q: &MatrixPair) -> Result<SeparationReport> {
    same_shape(p, q)?;
    let (cp, cq) = (canonicalize(p)?.canon, canonicalize(q)?.canon);
    let mut count = 0;
    let sig = sigma_probes(p.field(), p.n())?;
    if let Some(v) = sigma_stage(&sig, p, q, &mut count)? {
        return Ok(SeparationReport { verdict: v, probes_evaluated: count });
    }
    let ids = Idempotents::new(&EigVector::new(cp.eigs.clone())?)?;
    let zp = zeta_probes(&ids)?;
    let verdict = zeta_stage(&zp, p.n(), &cp.reconstitute(), &cq.reconstitute(), &cp.type_graph, &mut count)?
        .unwrap_or(Verdict::Equal);
    if verdict.is_equal_types() != (cp.type_graph == cq.type_graph) {
        return Err(Error::Verification("type verdict disagrees with canonical forms".into()));
    }
    Ok(SeparationReport { verdict, probes_evaluated: count })
}

impl Verdict {
    fn is_equal_types(&self) -> bool {
        matches!(self, Verdict::Equal)
    }
}

/// The rank probe attached to Star cell `(i, j)` of `c`.
pub fn build_eta(c: &CanonicalPair, ids: &Idempotents, i: usize, j: usize) -> Result<InvariantProbe> {
    if i >= c.n || j >= c.n {
        return Err(Error::IndexOutOfRange(format!("cell ({}, {})", i + 1, j + 1)));
    }
    if c.star.get(i, j) != Cell::Star {
        return Err(Error::Precondition(format!(
            "cell ({}, {}) is not a Star cell",
            i + 1,
            j + 1
        )));
    }
    let f = c.field;
    let n = c.n;
    let param = c.params[&(i, j)].clone();
    let minus_one = -FieldElem::one(f);
    let label = format!("eta{},{}", i + 1, j + 1);
    if i == j {
        let one = NcExpr::named("I", NcExpr::poly(NcPoly::one(f, 2)));
        let expr = NcExpr::Lin(f, vec![(param.clone(), one), (minus_one, ids.pair(i, i)?)]);
        let expected = if param.is_zero() { 0 } else { n - 1 };
        return InvariantProbe::new(expr, ProbeKind::Rank { expected }, label, n);
    }
    let path = undirected_path(&c.type_graph, i, j)
        .ok_or_else(|| Error::Verification(format!("Star cell {label} without a path")))?;
    let s = TDSeq::new(path.vertices.clone(), path.delta.clone(), n)?;
    let cert = staircase_cert(&s)?;
    let h = path
        .delta
        .iter()
        .enumerate()
        .map(|(l, d)| {
            let (a, b) = (path.vertices[l], path.vertices[l + 1]);
            match d {
                Dir::Fwd => ids.pair(a, b),
                Dir::Rev => ids.pair(b, a),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let one = NcExpr::poly(NcPoly::one(f, 2));
    let ws = cert
        .ws
        .iter()
        .map(|w| NcExpr::substitute_word(w, &h, &one))
        .collect::<Result<Vec<_>>>()?;
    let mut factors: Vec<NcExpr> = Vec::new();
    factors.extend(cert.u1.0.iter().map(|&k| h[k].clone()));
    factors.push(ids.pair(i, j)?);
    factors.extend(cert.u2.0.iter().map(|&k| h[k].clone()));
    let expr = NcExpr::Lin(
        f,
        vec![(param.clone(), NcExpr::alt_sum(&ws)?), (minus_one, NcExpr::prod(factors))],
    );
    let expected = if param.is_zero() { 0 } else { (cert.r - 1) / 2 };
    InvariantProbe::new(expr, ProbeKind::Rank { expected }, label, n)
}

/// Every probe used to decide orbits against `p`, built from its canonical
/// form, and checked to take its expected values on `p`.
#[derive(Debug, Clone)]
pub struct RankProbeSet {
    pair: MatrixPair,
    canon: CanonicalPair,
    sigma: Vec<InvariantProbe>,
    zeta: Vec<((usize, usize), InvariantProbe)>,
    eta: Vec<((usize, usize), InvariantProbe)>,
}

impl RankProbeSet {
    pub fn build(p: &MatrixPair) -> Result<Self> {
        let canon = canonicalize(p)?.canon;
        let ids = Idempotents::new(&EigVector::new(canon.eigs.clone())?)?;
        let sigma = sigma_probes(p.field(), p.n())?;
        let zeta = zeta_probes(&ids)?;
        let eta = canon
            .star
            .star_cells()
            .into_iter()
            .map(|(i, j)| Ok(((i, j), build_eta(&canon, &ids, i, j)?)))
            .collect::<Result<Vec<_>>>()?;
        for (_, probe) in &eta {
            let ProbeKind::Rank { expected } = probe.kind else {
                unreachable!("eta probes are rank probes")
            };
            if probe.evaluate(p)? != ProbeValue::Rank(expected) {
                return Err(Error::Verification(format!(
                    "{} does not take its expected rank {expected}",
                    probe.label
                )));
            }
        }
        Ok(RankProbeSet {
            pair: p.clone(),
            canon,
            sigma,
            zeta,
            eta,
        })
    }

    pub fn canon(&self) -> &CanonicalPair {
        &self.canon
    }

    /// σ, ζ and η probes in evaluation order.
    pub fn probes(&self) -> Vec<&InvariantProbe> {
        self.sigma
            .iter()
            .chain(self.zeta.iter().map(|(_, p)| p))
            .chain(self.eta.iter().map(|(_, p)| p))
            .collect()
    }

    pub fn eta(&self) -> &[((usize, usize), InvariantProbe)] {
        &self.eta
    }

    /// Compare against `q` by evaluating every probe on both raw pairs.
    pub fn separate(&self, q: &MatrixPair) -> Result<SeparationReport> {
        same_shape(&self.pair, q)?;
        let p = &self.pair;
        let mut count = 0;
        let done = |verdict, count| Ok(SeparationReport { verdict, probes_evaluated: count });
        if let Some(v) = sigma_stage(&self.sigma, p, q, &mut count)? {
            return done(v, count);
        }
        if let Some(v) = zeta_stage(&self.zeta, p.n(), p, q, &self.canon.type_graph, &mut count)? {
            return done(v, count);
        }
        for (_, probe) in &self.eta {
            let (va, vb) = (probe.evaluate(p)?, probe.evaluate(q)?);
            count += 1;
            if va != vb {
                return done(
                    Verdict::SeparatedBy {
                        probe: Box::new(probe.clone()),
                        value_a: va,
                        value_b: vb,
                    },
                    count,
                );
            }
        }
        done(Verdict::Equal, count)
    }
}

/// Orbit equality decided by σ, ζ and rank probes only.
pub fn orbit_eq_by_ranks(p: &MatrixPair, q: &MatrixPair) -> Result<SeparationReport> {
    same_shape(p, q)?;
    canonicalize(q)?;
    RankProbeSet::build(p)?.separate(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{orbit_eq_canonical, random_dn_pair};
    use crate::stargraph::{enumerate_forests, star_from_forest};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn canon(f: FieldSpec, a: &[i64], g: Digraph, mut params: impl FnMut((usize, usize)) -> i64) -> CanonicalPair {
        let star = star_from_forest(&g).unwrap();
        let ps = star
            .star_cells()
            .into_iter()
            .map(|pos| (pos, FieldElem::from_i64(f, params(pos))))
            .collect();
        let eigs = a.iter().map(|&x| FieldElem::from_i64(f, x)).collect();
        CanonicalPair::from_parts(f, eigs, g, ps).unwrap()
    }

    fn pair(a1: Mat, a2: Mat) -> MatrixPair {
        MatrixPair::new(a1, a2).unwrap()
    }

    #[test]
    fn zeta_and_rank_examples() {
        assert_eq!(zeta(&Mat::zeros(Q, 3, 3)), 1);
        assert_eq!(zeta(&Mat::unit(Q, 3, 0, 1)), 0);
        assert_eq!(rank_indicator(&Mat::identity(Q, 3), 3).unwrap(), 1);
        assert_eq!(rank_indicator(&Mat::unit(Q, 3, 0, 1), 1).unwrap(), 1);
        assert_eq!(rank_indicator(&Mat::unit(Q, 3, 0, 1), 0).unwrap(), 0);
        assert!(rank_indicator(&Mat::identity(Q, 2), 3).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let m = Mat::random(FieldSpec::Prime(3), 3, &mut rng, 1);
            assert_eq!(rank_indicator(&m, 0).unwrap(), zeta(&m));
            let n = Mat::random(FieldSpec::Prime(3), 3, &mut rng, 1);
            let vm: Vec<u8> = (0..=3).map(|t| rank_indicator(&m, t).unwrap()).collect();
            let vn: Vec<u8> = (0..=3).map(|t| rank_indicator(&n, t).unwrap()).collect();
            assert_eq!(vm == vn, m.rank() == n.rank());
        }
    }

    #[test]
    fn type_separation_examples() {
        let d = Mat::diag(Q, &[FieldElem::zero(Q), FieldElem::one(Q)]);
        let p = pair(d.clone(), Mat::unit(Q, 2, 1, 0));
        assert!(type_separation(&p, &p).unwrap().is_equal());
        let q = pair(d.clone(), Mat::zeros(Q, 2, 2));
        let r = type_separation(&p, &q).unwrap();
        match r.verdict {
            Verdict::SeparatedBy { probe, value_a, value_b } => {
                assert_eq!(probe.label(), "zeta2,1");
                assert_eq!(probe.to_string(), "zeta(H21)");
                assert_eq!((value_a, value_b), (ProbeValue::Indicator(0), ProbeValue::Indicator(1)));
            }
            Verdict::Equal => panic!("types differ"),
        }
        let d2 = Mat::diag(Q, &[FieldElem::zero(Q), FieldElem::from_i64(Q, 2)]);
        let r = type_separation(&p, &pair(d2, Mat::zeros(Q, 2, 2))).unwrap();
        assert!(matches!(
            r.verdict,
            Verdict::SeparatedBy { ref probe, .. } if matches!(probe.kind(), ProbeKind::Sigma(_))
        ));
    }

    #[test]
    fn example_probe_shapes() {
        let g = Digraph::from_one_based(4, &[(4, 1), (2, 1), (2, 3)]).unwrap();
        let c = canon(Q, &[0, 1, 2, 3], g, |(i, j)| (i * 4 + j) as i64 + 2);
        let ids = Idempotents::new(&EigVector::new(c.eigs.clone()).unwrap()).unwrap();
        let shape = |i, j| {
            let p = build_eta(&c, &ids, i, j).unwrap();
            let v = c.params[&(i, j)].to_string();
            (p.to_string().replacen(&v, "a", 1), p.kind().clone())
        };
        assert_eq!(shape(2, 0), ("rank(a*H21 - H23 H31)".into(), ProbeKind::Rank { expected: 0 }));
        assert_eq!(
            shape(2, 1),
            ("rank(a*H23 - H23 H32 H23)".into(), ProbeKind::Rank { expected: 0 })
        );
        assert_eq!(shape(3, 1), ("rank(a*H41 - H42 H21)".into(), ProbeKind::Rank { expected: 0 }));
        assert_eq!(
            shape(3, 2),
            ("rank(a*(H41 - H21 + H23) - H43)".into(), ProbeKind::Rank { expected: 1 })
        );
        assert_eq!(shape(0, 0), ("rank(a*I - H11)".into(), ProbeKind::Rank { expected: 3 }));
        assert!(build_eta(&c, &ids, 0, 1).is_err());
        let set = RankProbeSet::build(&c.reconstitute()).unwrap();
        assert_eq!(set.eta().len(), c.star.star_cells().len());
        for p in set.probes() {
            assert!(p.degree() <= InvariantProbe::degree_bound(p.kind(), 4));
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        let x = NcExpr::poly(NcPoly::parse(Q, 2, "1*x1.x2.x1.x2").unwrap());
        assert!(InvariantProbe::new(x.clone(), ProbeKind::Zeta, "z", 2).is_err());
        assert!(InvariantProbe::new(x, ProbeKind::Rank { expected: 0 }, "r", 2).is_ok());
    }

    #[test]
    fn rank_separation_examples() {
        let a = |alpha| {
            let mut a2 = Mat::zeros(Q, 4, 4);
            for (i, j) in [(1, 0), (1, 2), (3, 0)] {
                a2.set(i, j, FieldElem::one(Q));
            }
            a2.set(3, 2, FieldElem::from_i64(Q, alpha));
            let d: Vec<FieldElem> = (0..4).map(|x| FieldElem::from_i64(Q, x)).collect();
            pair(Mat::diag(Q, &d), a2)
        };
        let r = orbit_eq_by_ranks(&a(1), &a(2)).unwrap();
        match r.verdict {
            Verdict::SeparatedBy { probe, value_a, value_b } => {
                assert_eq!(probe.label(), "eta4,3");
                assert_eq!((value_a, value_b), (ProbeValue::Rank(1), ProbeValue::Rank(2)));
            }
            Verdict::Equal => panic!("orbits differ"),
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = Mat::random_invertible(Q, 4, &mut rng, 3);
        assert!(orbit_eq_by_ranks(&a(1), &a(1).conjugate(&g).unwrap()).unwrap().is_equal());

        let g2 = Digraph::new(2, [(0, 1)]).unwrap();
        let c1 = canon(Q, &[0, 1], g2.clone(), |_| 0);
        let c2 = canon(Q, &[0, 1], g2, |pos| i64::from(pos == (0, 0)));
        let r = orbit_eq_by_ranks(&c1.reconstitute(), &c2.reconstitute()).unwrap();
        match r.verdict {
            Verdict::SeparatedBy { probe, value_a, value_b } => {
                assert_eq!(probe.label(), "eta1,1");
                assert_eq!((value_a, value_b), (ProbeValue::Rank(0), ProbeValue::Rank(1)));
            }
            Verdict::Equal => panic!("parameters differ"),
        }
    }

    #[test]
    fn types_are_separated_exhaustively_for_small_n() {
        let f = FieldSpec::Prime(5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=4 {
            let a: Vec<i64> = (0..n as i64).collect();
            let ids = Idempotents::new(&EigVector::new(a.iter().map(|&x| FieldElem::from_i64(f, x)).collect()).unwrap()).unwrap();
            let zp = zeta_probes(&ids).unwrap();
            let mut tables = Vec::new();
            for g in enumerate_forests(n, 5).unwrap() {
                for _ in 0..3 {
                    let c = canon(f, &a, g.clone(), |_| rng.gen_range(0..2));
                    let rep = c.reconstitute();
                    let table: BTreeMap<_, _> = zp
                        .iter()
                        .map(|(pos, p)| match p.evaluate(&rep).unwrap() {
                            ProbeValue::Indicator(z) => (*pos, z),
                            _ => unreachable!(),
                        })
                        .collect();
                    assert_eq!(type_from_zeta(n, &table), g);
                    tables.push((g.clone(), table));
                }
            }
            for (k, (g1, t1)) in tables.iter().enumerate() {
                for (g2, t2) in &tables[k + 1..] {
                    if g1 != g2 {
                        assert_ne!(t1, t2);
                    }
                }
            }
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]
        #[test]
        fn probes_are_abstract_invariants(seed in 0u64..100_000, n in 2usize..5) {
            let f = FieldSpec::Prime(7);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_dn_pair(f, n, &mut rng, 3);
            let q = p.conjugate(&Mat::random_invertible(f, n, &mut rng, 3)).unwrap();
            let set = RankProbeSet::build(&p).unwrap();
            for probe in set.probes() {
                proptest::prop_assert_eq!(probe.evaluate(&p).unwrap(), probe.evaluate(&q).unwrap());
            }
            proptest::prop_assert!(set.separate(&q).unwrap().is_equal());
        }

        #[test]
        fn rank_verdict_matches_canonical(seed in 0u64..100_000, n in 2usize..5, rational in proptest::bool::ANY) {
            let f = if rational { Q } else { FieldSpec::Prime(7) };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_dn_pair(f, n, &mut rng, 2);
            let q = if rng.gen_bool(0.3) {
                p.conjugate(&Mat::random_invertible(f, n, &mut rng, 2)).unwrap()
            } else {
                let mut q = p.clone();
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                q.a2.set(i, j, &q.a2.get(i, j).clone() + &FieldElem::one(f));
                q
            };
            let ranks = orbit_eq_by_ranks(&p, &q).unwrap().is_equal();
            proptest::prop_assert_eq!(ranks, orbit_eq_canonical(&p, &q).unwrap());
        }
    }
}
