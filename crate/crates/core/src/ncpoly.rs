//! Noncommutative polynomials in letters `x1..xm` and their evaluation on
//! matrix tuples.
//!
//! [`NcPoly`] is the expanded canonical form: a map from words to nonzero
//! coefficients. [`NcExpr`] keeps a polynomial as an unexpanded tree of
//! sums and products; its [`NcExpr::degree`] is computed from the tree and
//! bounds the formal degree of [`NcExpr::expand`] from above.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::linalg::Mat;

/// A word in the letters; letter `k` (0-based) prints as `x{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(k: usize) -> Self {
        Word(vec![k])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// No letter occurs twice.
    pub fn is_multilinear(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.0.iter().all(|k| seen.insert(*k))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Largest letter index used plus one.
    pub fn letters_needed(&self) -> usize {
        self.0.iter().max().map_or(0, |m| m + 1)
    }

    /// Replace each letter by a word.
    pub fn map_letters(&self, f: impl Fn(usize) -> Word) -> Word {
        Word(self.0.iter().flat_map(|&k| f(k).0).collect())
    }

    /// Evaluate on concrete matrices; the empty word is the identity.
    pub fn eval(&self, mats: &[Mat], n: usize, field: FieldSpec) -> Result<Mat> {
        let mut acc = Mat::identity(field, n);
        for &k in &self.0 {
            let m = mats
                .get(k)
                .ok_or_else(|| Error::IndexOutOfRange(format!("letter x{} unassigned", k + 1)))?;
            acc = acc.try_mul(m)?;
        }
        Ok(acc)
    }

    pub fn parse(text: &str) -> Result<Word> {
        let t = text.trim();
        if t == "1" || t.is_empty() {
            return Ok(Word::empty());
        }
        t.split('.')
            .map(|s| {
                s.trim()
                    .strip_prefix('x')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .map(|k| k - 1)
                    .ok_or_else(|| Error::Parse(format!("invalid letter {s:?} in word {text:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then lexicographic.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|k| format!("x{}", k + 1)).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// An expanded noncommutative polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcPoly {
    field: FieldSpec,
    nletters: usize,
    terms: BTreeMap<Word, FieldElem>,
}

impl NcPoly {
    pub fn zero(field: FieldSpec, nletters: usize) -> Self {
        NcPoly {
            field,
            nletters,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: FieldSpec, nletters: usize, c: FieldElem) -> Self {
        Self::monomial(field, nletters, Word::empty(), c)
    }

    pub fn one(field: FieldSpec, nletters: usize) -> Self {
        Self::constant(field, nletters, FieldElem::one(field))
    }

    /// The single-letter polynomial `x{k+1}`.
    pub fn letter(field: FieldSpec, nletters: usize, k: usize) -> Self {
        Self::monomial(field, nletters, Word::letter(k), FieldElem::one(field))
    }

    pub fn monomial(field: FieldSpec, nletters: usize, w: Word, c: FieldElem) -> Self {
        let mut p = Self::zero(field, nletters.max(w.letters_needed()));
        p.add_term(w, c);
        p
    }

    fn add_term(&mut self, w: Word, c: FieldElem) {
        assert_eq!(c.spec(), self.field, "coefficient field mismatch");
        if c.is_zero() {
            return;
        }
        self.nletters = self.nletters.max(w.letters_needed());
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nletters(&self) -> usize {
        self.nletters
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> FieldElem {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| FieldElem::zero(self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Longest word length; 0 for scalars and the zero polynomial.
    pub fn formal_degree(&self) -> usize {
        self.terms.keys().map(Word::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &FieldElem) -> NcPoly {
        let mut out = Self::zero(self.field, self.nletters);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn add(&self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out.nletters = out.nletters.max(rhs.nletters);
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &NcPoly) -> NcPoly {
        self.add(&rhs.scale(&-FieldElem::one(self.field)))
    }

    pub fn mul(&self, rhs: &NcPoly) -> NcPoly {
        let mut out = Self::zero(self.field, self.nletters.max(rhs.nletters));
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// Substitute `x{k+1} → tuple[k]` and the empty word by `Iₙ`.
    pub fn eval(&self, tuple: &[Mat], n: usize) -> Result<Mat> {
        check_tuple(tuple, n, self.field, self.max_letter_used())?;
        let mut memo: HashMap<&[usize], Mat> = HashMap::new();
        let mut acc = Mat::zeros(self.field, n, n);
        for (w, c) in &self.terms {
            let m = prefix_product(&w.0, tuple, n, self.field, &mut memo);
            acc = &acc + &m.scale(c);
        }
        Ok(acc)
    }

    fn max_letter_used(&self) -> usize {
        self.terms.keys().map(Word::letters_needed).max().unwrap_or(0)
    }

    /// Polynomial with words `u` such that every letter satisfies `pred`.
    pub fn uses_only(&self, pred: impl Fn(usize) -> bool) -> bool {
        self.terms.keys().all(|w| w.0.iter().all(|&k| pred(k)))
    }

    /// Parse `c*x1.x2 + c*1 + ...`; `0` is the zero polynomial.
    pub fn parse(field: FieldSpec, nletters: usize, text: &str) -> Result<NcPoly> {
        let mut p = Self::zero(field, nletters);
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(p);
        }
        for term in compact.split('+') {
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {text:?}")));
            }
            let (c, w) = match term.split_once('*') {
                Some((c, w)) => (FieldElem::parse(field, c)?, Word::parse(w)?),
                None => (FieldElem::parse(field, term)?, Word::empty()),
            };
            p.add_term(w, c);
        }
        Ok(p)
    }
}

fn prefix_product<'a>(
    w: &'a [usize],
    tuple: &[Mat],
    n: usize,
    field: FieldSpec,
    memo: &mut HashMap<&'a [usize], Mat>,
) -> Mat {
    if w.is_empty() {
        return Mat::identity(field, n);
    }
    if let Some(m) = memo.get(w) {
        return m.clone();
    }
    let head = prefix_product(&w[..w.len() - 1], tuple, n, field, memo);
    let m = &head * &tuple[w[w.len() - 1]];
    memo.insert(w, m.clone());
    m
}

fn check_tuple(tuple: &[Mat], n: usize, field: FieldSpec, needed: usize) -> Result<()> {
    if tuple.len() < needed {
        return Err(Error::SizeMismatch(format!(
            "polynomial uses {needed} letters but {} matrices were given",
            tuple.len()
        )));
    }
    for m in tuple {
        if m.rows() != n || m.cols() != n {
            return Err(Error::SizeMismatch(format!(
                "expected {n}x{n}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if m.field() != field {
            return Err(Error::SpecMismatch(field.to_string(), m.field().to_string()));
        }
    }
    Ok(())
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{c}*{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Formal composition: `w` with `x{k+1} → h[k]`.
pub fn substitute(w: &Word, h: &[NcPoly]) -> Result<NcPoly> {
    let first = h
        .first()
        .ok_or_else(|| Error::Precondition("substitution list is empty".into()))?;
    let mut acc = NcPoly::one(first.field, first.nletters);
    for &k in &w.0 {
        let hk = h.get(k).ok_or_else(|| {
            Error::IndexOutOfRange(format!("letter x{} but only {} substitutes", k + 1, h.len()))
        })?;
        acc = acc.mul(hk);
    }
    Ok(acc)
}

/// `p₁ − p₂ + p₃ − ⋯`.
pub fn alt_sum(ps: &[NcPoly]) -> Result<NcPoly> {
    let first = ps
        .first()
        .ok_or_else(|| Error::Precondition("alternating sum of an empty list".into()))?;
    let mut acc = NcPoly::zero(first.field, first.nletters);
    for (i, p) in ps.iter().enumerate() {
        if p.nletters != first.nletters {
            return Err(Error::SizeMismatch(format!(
                "letter counts differ: {} vs {}",
                first.nletters, p.nletters
            )));
        }
        acc = if i % 2 == 0 { acc.add(p) } else { acc.sub(p) };
    }
    Ok(acc)
}

/// A polynomial kept as an unexpanded expression tree.
#[derive(Debug, Clone)]
pub enum NcExpr {
    Poly(Arc<NcPoly>),
    /// `Σ cᵢ·eᵢ`.
    Lin(FieldSpec, Vec<(FieldElem, NcExpr)>),
    /// Non-empty ordered product.
    Prod(Vec<NcExpr>),
    /// A display name for the subtree, e.g. `H21`.
    Named(Arc<str>, Arc<NcExpr>),
}

impl NcExpr {
    pub fn poly(p: NcPoly) -> Self {
        NcExpr::Poly(Arc::new(p))
    }

    pub fn named(name: impl Into<Arc<str>>, inner: NcExpr) -> Self {
        NcExpr::Named(name.into(), Arc::new(inner))
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            NcExpr::Poly(p) => p.field,
            NcExpr::Lin(f, _) => *f,
            NcExpr::Prod(fs) => fs[0].field(),
            NcExpr::Named(_, e) => e.field(),
        }
    }

    pub fn prod(factors: Vec<NcExpr>) -> Self {
        assert!(!factors.is_empty(), "empty product");
        if factors.len() == 1 {
            return factors.into_iter().next().unwrap();
        }
        NcExpr::Prod(factors)
    }

    /// Upper bound on the formal degree of the expansion.
    pub fn degree(&self) -> usize {
        match self {
            NcExpr::Poly(p) => p.formal_degree(),
            NcExpr::Lin(_, ts) => ts
                .iter()
                .filter(|(c, _)| !c.is_zero())
                .map(|(_, e)| e.degree())
                .max()
                .unwrap_or(0),
            NcExpr::Prod(fs) => fs.iter().map(NcExpr::degree).sum(),
            NcExpr::Named(_, e) => e.degree(),
        }
    }

    pub fn eval(&self, tuple: &[Mat], n: usize) -> Result<Mat> {
        match self {
            NcExpr::Poly(p) => p.eval(tuple, n),
            NcExpr::Lin(f, ts) => {
                let mut acc = Mat::zeros(*f, n, n);
                for (c, e) in ts {
                    if !c.is_zero() {
                        acc = &acc + &e.eval(tuple, n)?.scale(c);
                    }
                }
                Ok(acc)
            }
            NcExpr::Prod(fs) => {
                let mut acc = fs[0].eval(tuple, n)?;
                for e in &fs[1..] {
                    acc = acc.try_mul(&e.eval(tuple, n)?)?;
                }
                Ok(acc)
            }
            NcExpr::Named(_, e) => e.eval(tuple, n),
        }
    }

    /// Multiply out into canonical form. Exponential in the product depth;
    /// intended for small sizes.
    pub fn expand(&self, nletters: usize) -> NcPoly {
        match self {
            NcExpr::Poly(p) => {
                let mut q = (**p).clone();
                q.nletters = q.nletters.max(nletters);
                q
            }
            NcExpr::Lin(f, ts) => ts.iter().fold(NcPoly::zero(*f, nletters), |acc, (c, e)| {
                acc.add(&e.expand(nletters).scale(c))
            }),
            NcExpr::Prod(fs) => fs[1..]
                .iter()
                .fold(fs[0].expand(nletters), |acc, e| acc.mul(&e.expand(nletters))),
            NcExpr::Named(_, e) => e.expand(nletters),
        }
    }

    /// `w` with letter k replaced by `h[k]`; the empty word becomes `one`.
    pub fn substitute_word(w: &Word, h: &[NcExpr], one: &NcExpr) -> Result<NcExpr> {
        if w.is_empty() {
            return Ok(one.clone());
        }
        let factors = w
            .0
            .iter()
            .map(|&k| {
                h.get(k).cloned().ok_or_else(|| {
                    Error::IndexOutOfRange(format!("letter x{} but only {} substitutes", k + 1, h.len()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NcExpr::prod(factors))
    }

    /// `e₁ − e₂ + e₃ − ⋯`.
    pub fn alt_sum(es: &[NcExpr]) -> Result<NcExpr> {
        let first = es
            .first()
            .ok_or_else(|| Error::Precondition("alternating sum of an empty list".into()))?;
        let f = first.field();
        if es.len() == 1 {
            return Ok(first.clone());
        }
        let terms = es
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let c = FieldElem::from_i64(f, if i % 2 == 0 { 1 } else { -1 });
                (c, e.clone())
            })
            .collect();
        Ok(NcExpr::Lin(f, terms))
    }
}

impl fmt::Display for NcExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NcExpr::Poly(p) => write!(f, "({p})"),
            NcExpr::Named(name, _) => write!(f, "{name}"),
            NcExpr::Prod(fs) => {
                let parts: Vec<String> = fs.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(" "))
            }
            NcExpr::Lin(_, ts) => {
                let mut out = String::new();
                for (i, (c, e)) in ts.iter().enumerate() {
                    let neg = -c;
                    let (sign, mag) = if i > 0 && neg.is_one() {
                        (" - ", String::new())
                    } else if c.is_one() {
                        (if i > 0 { " + " } else { "" }, String::new())
                    } else {
                        (if i > 0 { " + " } else { "" }, format!("{c}*"))
                    };
                    let body = match e {
                        NcExpr::Lin(..) => format!("({e})"),
                        _ => e.to_string(),
                    };
                    out.push_str(sign);
                    out.push_str(&mag);
                    out.push_str(&body);
                }
                write!(f, "{out}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn x(k: usize) -> NcPoly {
        NcPoly::letter(Q, 2, k)
    }

    fn random_poly(f: FieldSpec, m: usize, rng: &mut ChaCha8Rng) -> NcPoly {
        let mut p = NcPoly::zero(f, m);
        for _ in 0..rng.gen_range(1..5) {
            let len = rng.gen_range(0..4);
            let w = Word((0..len).map(|_| rng.gen_range(0..m)).collect());
            p = p.add(&NcPoly::monomial(f, m, w, FieldElem::random(f, rng, 3)));
        }
        p
    }

    #[test]
    fn eval_examples() {
        let e12 = Mat::unit(Q, 3, 0, 1);
        let e23 = Mat::unit(Q, 3, 1, 2);
        assert_eq!(x(0).mul(&x(1)).eval(&[e12, e23], 3).unwrap(), Mat::unit(Q, 3, 0, 2));

        let h = NcPoly::parse(Q, 1, "-1*x1 + 1*1").unwrap();
        let d = Mat::diag(Q, &[FieldElem::from_i64(Q, 0), FieldElem::from_i64(Q, 1)]);
        assert_eq!(h.eval(&[d.clone()], 2).unwrap(), Mat::unit(Q, 2, 0, 0));
        assert_eq!(NcPoly::one(Q, 2).eval(&[d.clone(), d], 2).unwrap(), Mat::identity(Q, 2));
    }

    #[test]
    fn eval_rejects_bad_tuples() {
        let p = x(0).mul(&x(1));
        let a = Mat::identity(Q, 2);
        assert!(matches!(p.eval(&[a.clone()], 2), Err(Error::SizeMismatch(_))));
        assert!(matches!(
            p.eval(&[a.clone(), Mat::identity(Q, 3)], 2),
            Err(Error::SizeMismatch(_))
        ));
        assert!(matches!(
            p.eval(&[a, Mat::identity(FieldSpec::Prime(3), 2)], 2),
            Err(Error::SpecMismatch(..))
        ));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(x(0).mul(&x(1)).mul(&x(0)).formal_degree(), 3);
        assert_eq!(NcPoly::zero(Q, 2).formal_degree(), 0);
        assert_eq!(NcPoly::one(Q, 2).formal_degree(), 0);
    }

    #[test]
    fn substitute_examples() {
        let w = Word(vec![0, 1]);
        assert_eq!(substitute(&w, &[x(1), x(0)]).unwrap(), x(1).mul(&x(0)));
        assert_eq!(substitute(&Word::empty(), &[x(1)]).unwrap(), NcPoly::one(Q, 2));
        let h = NcPoly::parse(Q, 2, "2*x1.x2 + -1*x1").unwrap();
        assert_eq!(substitute(&Word::letter(0), &[h.clone()]).unwrap(), h);
        assert!(matches!(
            substitute(&Word::letter(3), &[h]),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn alt_sum_examples() {
        let ps = vec![NcPoly::letter(Q, 3, 0), NcPoly::letter(Q, 3, 1), NcPoly::letter(Q, 3, 2)];
        assert_eq!(alt_sum(&ps[..1]).unwrap(), ps[0]);
        assert_eq!(
            alt_sum(&ps).unwrap(),
            NcPoly::parse(Q, 3, "1*x1 + -1*x2 + 1*x3").unwrap()
        );
        assert!(alt_sum(&[]).is_err());
    }

    #[test]
    fn text_format() {
        let p = NcPoly::parse(Q, 2, "3*1 + -1/2*x2.x1 + 1*x1 + 2*x1.x2.x1").unwrap();
        assert_eq!(p.to_string(), "3*1 + 1*x1 + -1/2*x2.x1 + 2*x1.x2.x1");
        assert_eq!(NcPoly::parse(Q, 2, &p.to_string()).unwrap(), p);
        assert_eq!(NcPoly::zero(Q, 2).to_string(), "0");
        assert!(NcPoly::parse(Q, 2, "1*y1").is_err());
        assert!(NcPoly::parse(Q, 2, "1*x0").is_err());
        assert_eq!(Word::parse("x1.x2").unwrap(), Word(vec![0, 1]));
        assert_eq!(Word::parse("1").unwrap(), Word::empty());
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = x(0).sub(&x(0));
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn expression_tree_matches_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = FieldSpec::Prime(7);
        for _ in 0..30 {
            let ps: Vec<NcPoly> = (0..3).map(|_| random_poly(f, 2, &mut rng)).collect();
            let es: Vec<NcExpr> = ps.iter().cloned().map(NcExpr::poly).collect();
            let prod = NcExpr::prod(es.clone());
            let alt = NcExpr::alt_sum(&es).unwrap();
            let tuple = [Mat::random(f, 3, &mut rng, 1), Mat::random(f, 3, &mut rng, 1)];
            let expanded = prod.expand(2);
            assert_eq!(expanded, ps[0].mul(&ps[1]).mul(&ps[2]));
            assert_eq!(prod.eval(&tuple, 3).unwrap(), expanded.eval(&tuple, 3).unwrap());
            assert!(expanded.formal_degree() <= prod.degree());
            assert_eq!(alt.expand(2), alt_sum(&ps).unwrap());
            assert_eq!(alt.eval(&tuple, 3).unwrap(), alt_sum(&ps).unwrap().eval(&tuple, 3).unwrap());
        }
    }

    proptest::proptest! {
        #[test]
        fn eval_is_a_ring_homomorphism(seed in 0u64..5000, n in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = FieldSpec::Prime(5);
            let p = random_poly(f, 2, &mut rng);
            let q = random_poly(f, 2, &mut rng);
            let t = [Mat::random(f, n, &mut rng, 1), Mat::random(f, n, &mut rng, 1)];
            proptest::prop_assert_eq!(p.mul(&q).eval(&t, n).unwrap(), &p.eval(&t, n).unwrap() * &q.eval(&t, n).unwrap());
            proptest::prop_assert_eq!(p.add(&q).eval(&t, n).unwrap(), &p.eval(&t, n).unwrap() + &q.eval(&t, n).unwrap());
            proptest::prop_assert!(p.mul(&q).formal_degree() <= p.formal_degree() + q.formal_degree());
        }

        #[test]
        fn eval_is_equivariant(seed in 0u64..5000, n in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = FieldSpec::Prime(7);
            let p = random_poly(f, 2, &mut rng);
            let t = [Mat::random(f, n, &mut rng, 1), Mat::random(f, n, &mut rng, 1)];
            let g = Mat::random_invertible(f, n, &mut rng, 1);
            let gi = g.inverse().unwrap();
            let moved: Vec<Mat> = t.iter().map(|m| &(&gi * m) * &g).collect();
            proptest::prop_assert_eq!(p.eval(&moved, n).unwrap(), &(&gi * &p.eval(&t, n).unwrap()) * &g);
        }

        #[test]
        fn substitution_commutes_with_evaluation(seed in 0u64..5000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = FieldSpec::Prime(11);
            let hs: Vec<NcPoly> = (0..3).map(|_| random_poly(f, 2, &mut rng)).collect();
            let w = Word((0..rng.gen_range(0..5)).map(|_| rng.gen_range(0..3)).collect());
            let t = [Mat::random(f, 3, &mut rng, 1), Mat::random(f, 3, &mut rng, 1)];
            let s = substitute(&w, &hs).unwrap();
            let vals: Vec<Mat> = hs.iter().map(|h| h.eval(&t, 3).unwrap()).collect();
            proptest::prop_assert_eq!(s.eval(&t, 3).unwrap(), w.eval(&vals, 3, f).unwrap());
            let bound: usize = w.0.iter().map(|&k| hs[k].formal_degree()).sum();
            proptest::prop_assert!(s.formal_degree() <= bound);
        }

        #[test]
        fn renaming_letters_keeps_multilinearity(perm_seed in 0u64..1000, len in 0usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
            let mut letters: Vec<usize> = (0..6).collect();
            for i in (1..6).rev() { letters.swap(i, rng.gen_range(0..=i)); }
            let w = Word(letters[..len].to_vec());
            let hs: Vec<NcPoly> = letters.iter().map(|&k| NcPoly::letter(FieldSpec::Rationals, 6, k)).collect();
            let s = substitute(&w, &hs).unwrap();
            for (word, _) in s.terms() {
                proptest::prop_assert!(word.is_multilinear());
            }
        }
    }
}
