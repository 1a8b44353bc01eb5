//! Three-diagonal sequences of elementary matrices and rank certificates
//! built from them.
//!
//! The recursion looks only at the orientation pattern `δ`, so a certificate
//! is the same for every choice of distinct indices. Each level is checked
//! against the concrete matrices before it is returned.

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::linalg::Mat;
use crate::ncpoly::Word;
use crate::stargraph::Dir;

/// `(E^{δ₁}_{i₁i₂}, …, E^{δ_k}_{i_k i_{k+1}})` as `n×n` matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TDSeq {
    idx: Vec<usize>,
    delta: Vec<Dir>,
    n: usize,
}

impl TDSeq {
    /// `idx` is 0-based and must have one more entry than `delta`.
    pub fn new(idx: Vec<usize>, delta: Vec<Dir>, n: usize) -> Result<Self> {
        if delta.is_empty() {
            return Err(Error::Precondition("a three-diagonal sequence needs k >= 1".into()));
        }
        if idx.len() != delta.len() + 1 {
            return Err(Error::SizeMismatch(format!(
                "{} indices for {} steps",
                idx.len(),
                delta.len()
            )));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange(format!("index {} exceeds n = {n}", bad + 1)));
        }
        for (s, i) in idx.iter().enumerate() {
            if idx[..s].contains(i) {
                return Err(Error::Precondition(format!("index {} repeats", i + 1)));
            }
        }
        Ok(TDSeq { idx, delta, n })
    }

    /// `idx = (0, 1, …, k)` and `n = k + 1`.
    pub fn standard(delta: Vec<Dir>) -> Result<Self> {
        let k = delta.len();
        Self::new((0..=k).collect(), delta, k + 1)
    }

    pub fn k(&self) -> usize {
        self.delta.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn idx(&self) -> &[usize] {
        &self.idx
    }

    pub fn delta(&self) -> &[Dir] {
        &self.delta
    }

    /// The foundation position `(i₁, i_{k+1})`.
    pub fn corner(&self) -> (usize, usize) {
        (self.idx[0], self.idx[self.k()])
    }

    fn sub(&self, from: usize, to: usize) -> TDSeq {
        TDSeq {
            idx: self.idx[from..=to + 1].to_vec(),
            delta: self.delta[from..=to].to_vec(),
            n: self.n,
        }
    }

    fn merge(&self, l: usize) -> TDSeq {
        let mut idx = self.idx.clone();
        idx.remove(l + 1);
        let mut delta = self.delta.clone();
        delta.remove(l + 1);
        TDSeq { idx, delta, n: self.n }
    }
}

/// The sequence as matrices over `field`.
pub fn td_matrices(s: &TDSeq, field: FieldSpec) -> Vec<Mat> {
    s.delta
        .iter()
        .enumerate()
        .map(|(l, d)| {
            let (a, b) = (s.idx[l], s.idx[l + 1]);
            match d {
                Dir::Fwd => Mat::unit(field, s.n, a, b),
                Dir::Rev => Mat::unit(field, s.n, b, a),
            }
        })
        .collect()
}

/// Result of the case analysis for a sequence with at least one Fwd step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaTDOutcome {
    /// `u1(S)·E_{i₁i_{k+1}}·u2(S) = target(S)`, a single elementary matrix.
    CaseA { u1: Word, u2: Word, target: Word },
    /// `(w₁(S), …, w_r(S))` is a staircase with foundation
    /// `u1(S)·E_{i₁i_{k+1}}·u2(S)`.
    CaseB { ws: Vec<Word>, u1: Word, u2: Word },
}

impl LemmaTDOutcome {
    fn map_letters(&self, f: &impl Fn(usize) -> Word) -> Self {
        match self {
            LemmaTDOutcome::CaseA { u1, u2, target } => LemmaTDOutcome::CaseA {
                u1: u1.map_letters(f),
                u2: u2.map_letters(f),
                target: target.map_letters(f),
            },
            LemmaTDOutcome::CaseB { ws, u1, u2 } => LemmaTDOutcome::CaseB {
                ws: ws.iter().map(|w| w.map_letters(f)).collect(),
                u1: u1.map_letters(f),
                u2: u2.map_letters(f),
            },
        }
    }

    /// Wrap the foundation: `u1'' = u1'·pre`, `u2'' = post·u2'`.
    fn wrap(self, pre: &Word, post: &Word) -> Self {
        match self {
            LemmaTDOutcome::CaseA { u1, u2, target } => LemmaTDOutcome::CaseA {
                u1: u1.concat(pre),
                u2: post.concat(&u2),
                target,
            },
            LemmaTDOutcome::CaseB { ws, u1, u2 } => LemmaTDOutcome::CaseB {
                ws,
                u1: u1.concat(pre),
                u2: post.concat(&u2),
            },
        }
    }

    fn all_letters(&self) -> Word {
        match self {
            LemmaTDOutcome::CaseA { u1, u2, target } => u1.concat(u2).concat(target),
            LemmaTDOutcome::CaseB { ws, u1, u2 } => {
                ws.iter().fold(u1.concat(u2), |acc, w| acc.concat(w))
            }
        }
    }
}

fn word(letters: impl IntoIterator<Item = usize>) -> Word {
    Word(letters.into_iter().collect())
}

/// The all-Rev reduction: `u1 = x₁`, `u2 = x_k⋯x₁`, reaching `S₁`.
pub fn reduce_all_rev(s: &TDSeq) -> Result<(Word, Word)> {
    if s.delta.contains(&Dir::Fwd) {
        return Err(Error::Precondition("every step must be Rev".into()));
    }
    let u1 = Word::letter(0);
    let u2 = word((0..s.k()).rev());
    let m = td_matrices(s, FieldSpec::Rationals);
    let (a, b) = s.corner();
    let lhs = &(&u1.eval(&m, s.n, FieldSpec::Rationals)? * &Mat::unit(FieldSpec::Rationals, s.n, a, b))
        * &u2.eval(&m, s.n, FieldSpec::Rationals)?;
    if lhs != m[0] {
        return Err(Error::Verification("all-Rev reduction identity".into()));
    }
    Ok((u1, u2))
}

/// The case analysis on `s`, which must contain a Fwd step.
pub fn lemma_td(s: &TDSeq) -> Result<LemmaTDOutcome> {
    if !s.delta.contains(&Dir::Fwd) {
        return Err(Error::Precondition("at least one step must be Fwd".into()));
    }
    let k = s.k();
    let out = if k == 1 {
        LemmaTDOutcome::CaseA {
            u1: Word::empty(),
            u2: Word::empty(),
            target: Word::letter(0),
        }
    } else if let Some(l) = (0..k - 1).find(|&l| s.delta[l] == s.delta[l + 1]) {
        let merged = match s.delta[l] {
            Dir::Fwd => word([l, l + 1]),
            Dir::Rev => word([l + 1, l]),
        };
        lemma_td(&s.merge(l))?.map_letters(&|m| match m.cmp(&l) {
            std::cmp::Ordering::Less => Word::letter(m),
            std::cmp::Ordering::Equal => merged.clone(),
            std::cmp::Ordering::Greater => Word::letter(m + 1),
        })
    } else {
        match (s.delta[0], s.delta[k - 1]) {
            (Dir::Fwd, Dir::Fwd) => LemmaTDOutcome::CaseB {
                ws: (0..k).map(Word::letter).collect(),
                u1: Word::empty(),
                u2: Word::empty(),
            },
            (Dir::Fwd, Dir::Rev) => {
                let l = (0..k - 1).rev().find(|&s_| s.delta[s_] == Dir::Fwd).expect("delta_1 is Fwd");
                lemma_td(&s.sub(0, l))?.wrap(&Word::empty(), &word((l + 1..k).rev()))
            }
            (Dir::Rev, Dir::Fwd) => {
                let l = (1..k).find(|&s_| s.delta[s_] == Dir::Fwd).expect("delta_k is Fwd");
                lemma_td(&s.sub(l, k - 1))?
                    .map_letters(&|m| Word::letter(m + l))
                    .wrap(&word((0..l).rev()), &Word::empty())
            }
            (Dir::Rev, Dir::Rev) => {
                let inner: Vec<usize> = (1..k - 1).filter(|&s_| s.delta[s_] == Dir::Fwd).collect();
                let (l, t) = (inner[0], inner[inner.len() - 1]);
                lemma_td(&s.sub(l, t))?
                    .map_letters(&|m| Word::letter(m + l))
                    .wrap(&word((0..l).rev()), &word((t + 1..k).rev()))
            }
        }
    };
    check_outcome(s, &out)?;
    Ok(out)
}

fn check_outcome(s: &TDSeq, out: &LemmaTDOutcome) -> Result<()> {
    let f = FieldSpec::Rationals;
    let m = td_matrices(s, f);
    let (a, b) = s.corner();
    let fail = |what: &str| {
        Err(Error::Verification(format!(
            "{what} for delta {}",
            Dir::pattern_string(&s.delta)
        )))
    };
    if !out.all_letters().is_multilinear() {
        return fail("letters repeat");
    }
    if out.all_letters().letters_needed() > s.k() {
        return fail("letter out of range");
    }
    let (u1, u2) = match out {
        LemmaTDOutcome::CaseA { u1, u2, .. } | LemmaTDOutcome::CaseB { u1, u2, .. } => (u1, u2),
    };
    let found = &(&u1.eval(&m, s.n, f)? * &Mat::unit(f, s.n, a, b)) * &u2.eval(&m, s.n, f)?;
    match out {
        LemmaTDOutcome::CaseA { target, .. } => {
            let t = target.eval(&m, s.n, f)?;
            if found != t || single_entry(&t).is_none() {
                return fail("case (a) identity");
            }
        }
        LemmaTDOutcome::CaseB { ws, .. } => {
            let wm = ws
                .iter()
                .map(|w| w.eval(&m, s.n, f))
                .collect::<Result<Vec<_>>>()?;
            if ws.iter().any(Word::is_empty) || !is_staircase(&wm, &found) {
                return fail("case (b) staircase");
            }
        }
    }
    Ok(())
}

/// `(i, j)` when `m` is exactly `E_ij`.
fn single_entry(m: &Mat) -> Option<(usize, usize)> {
    let mut hit = None;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            if !v.is_one() || hit.is_some() {
                return None;
            }
            hit = Some((i, j));
        }
    }
    hit
}

/// Whether `ws` alternates `E_{j₁j₂}, E_{j₃j₂}, E_{j₃j₄}, …` over distinct
/// indices, has odd length, and `foundation = E_{j₁j_{r+1}}`.
fn is_staircase(ws: &[Mat], foundation: &Mat) -> bool {
    if ws.len().is_multiple_of(2) {
        return false;
    }
    let mut js: Vec<usize> = Vec::with_capacity(ws.len() + 1);
    for (l, w) in ws.iter().enumerate() {
        let Some((p, q)) = single_entry(w) else {
            return false;
        };
        let (from, to) = if l % 2 == 0 { (p, q) } else { (q, p) };
        if l == 0 {
            js.push(from);
        } else if js[l] != from {
            return false;
        }
        js.push(to);
    }
    let distinct = js.iter().enumerate().all(|(s, j)| !js[..s].contains(j));
    distinct && single_entry(foundation) == Some((js[0], js[ws.len()]))
}

/// Words realizing the rank display; `r = ws.len()` is odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaircaseCert {
    pub ws: Vec<Word>,
    pub u1: Word,
    pub u2: Word,
    pub r: usize,
}

impl StaircaseCert {
    /// `(r−1)/2` at `α = −1`, `(r+1)/2` otherwise.
    pub fn expected_rank(&self, alpha: &FieldElem) -> usize {
        if (alpha + &FieldElem::one(alpha.spec())).is_zero() {
            (self.r - 1) / 2
        } else {
            self.r.div_ceil(2)
        }
    }

    fn degree_bounds_hold(&self, k: usize) -> bool {
        self.u1.degree() + self.u2.degree() < k + 2
            && self.ws.iter().all(|w| w.degree() <= k && !w.is_empty())
    }
}

/// Certificate for any three-diagonal sequence.
pub fn staircase_cert(s: &TDSeq) -> Result<StaircaseCert> {
    let cert = if s.delta.contains(&Dir::Fwd) {
        match lemma_td(s)? {
            LemmaTDOutcome::CaseA { u1, u2, target } => StaircaseCert {
                ws: vec![target],
                u1,
                u2,
                r: 1,
            },
            LemmaTDOutcome::CaseB { ws, u1, u2 } => StaircaseCert {
                r: ws.len(),
                ws,
                u1,
                u2,
            },
        }
    } else {
        let (u1, u2) = reduce_all_rev(s)?;
        StaircaseCert {
            ws: vec![Word::letter(0)],
            u1,
            u2,
            r: 1,
        }
    };
    if cert.r.is_multiple_of(2) || cert.r > s.k() || !cert.degree_bounds_hold(s.k()) {
        return Err(Error::Verification(format!(
            "certificate shape for delta {}",
            Dir::pattern_string(&s.delta)
        )));
    }
    Ok(cert)
}

/// `Alt(w₁(S), …, w_r(S)) + α·u1(S)·E_{i₁i_{k+1}}·u2(S)`.
pub fn cert_matrix(s: &TDSeq, c: &StaircaseCert, alpha: &FieldElem) -> Result<Mat> {
    let f = alpha.spec();
    let m = td_matrices(s, f);
    let mut acc = Mat::zeros(f, s.n, s.n);
    for (l, w) in c.ws.iter().enumerate() {
        let v = w.eval(&m, s.n, f)?;
        acc = if l % 2 == 0 { &acc + &v } else { &acc - &v };
    }
    let (a, b) = s.corner();
    let found = &(&c.u1.eval(&m, s.n, f)? * &Mat::unit(f, s.n, a, b)) * &c.u2.eval(&m, s.n, f)?;
    Ok(&acc + &found.scale(alpha))
}

/// Recheck a certificate: shape, degree bounds and the rank display for
/// every `α` (all in one field).
pub fn verify_cert(s: &TDSeq, c: &StaircaseCert, alphas: &[FieldElem]) -> bool {
    let k = s.k();
    if c.r != c.ws.len() || c.r.is_multiple_of(2) || c.r > k || !c.degree_bounds_hold(k) {
        return false;
    }
    let all = c.ws.iter().fold(c.u1.concat(&c.u2), |acc, w| acc.concat(w));
    if all.letters_needed() > k {
        return false;
    }
    alphas.iter().all(|alpha| match cert_matrix(s, c, alpha) {
        Ok(m) => m.rank() == c.expected_rank(alpha),
        Err(_) => false,
    })
}

/// Every δ pattern of length `k` in binary order with Fwd first.
pub fn all_patterns(k: usize) -> impl Iterator<Item = Vec<Dir>> {
    (0u32..1 << k).map(move |mask| {
        (0..k)
            .map(|l| if mask >> (k - 1 - l) & 1 == 1 { Dir::Rev } else { Dir::Fwd })
            .collect()
    })
}
