//! Canonical forms of pairs whose first matrix has simple spectrum, and
//! orbit-equality deciders.

use std::collections::{BTreeMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{cmp_same, FieldElem, FieldSpec};
use crate::glenum::{find_conjugator, GlGuard};
use crate::linalg::{conjugate, Mat};
use crate::stargraph::{lex_positions, matches, star_from_forest, Cell, Digraph, Dsu, StarMatrix};

/// Two square matrices of one size over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPair {
    pub a1: Mat,
    pub a2: Mat,
}

impl MatrixPair {
    pub fn new(a1: Mat, a2: Mat) -> Result<Self> {
        for m in [&a1, &a2] {
            if !m.is_square() {
                return Err(Error::NotSquare(m.rows(), m.cols()));
            }
        }
        if a1.rows() != a2.rows() {
            return Err(Error::SizeMismatch(format!(
                "A1 is {0}x{0} but A2 is {1}x{1}",
                a1.rows(),
                a2.rows()
            )));
        }
        if a1.field() != a2.field() {
            return Err(Error::SpecMismatch(a1.field().to_string(), a2.field().to_string()));
        }
        Ok(MatrixPair { a1, a2 })
    }

    pub fn n(&self) -> usize {
        self.a1.rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.a1.field()
    }

    pub fn to_vec(&self) -> Vec<Mat> {
        vec![self.a1.clone(), self.a2.clone()]
    }

    /// `g·(A1, A2)·g⁻¹`.
    pub fn conjugate(&self, g: &Mat) -> Result<MatrixPair> {
        let mut v = conjugate(g, &[self.a1.clone(), self.a2.clone()])?;
        let a2 = v.pop().expect("two matrices");
        let a1 = v.pop().expect("two matrices");
        Ok(MatrixPair { a1, a2 })
    }
}

/// Canonical representative of an orbit in `Dₙ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalPair {
    pub n: usize,
    pub field: FieldSpec,
    /// Strictly increasing eigenvalues of the first matrix.
    pub eigs: Vec<FieldElem>,
    pub type_graph: Digraph,
    pub star: StarMatrix,
    /// Values at the Star cells, diagonal included.
    pub params: BTreeMap<(usize, usize), FieldElem>,
}

impl CanonicalPair {
    /// Assemble and validate from eigenvalues, a forest and parameters.
    pub fn from_parts(
        field: FieldSpec,
        eigs: Vec<FieldElem>,
        type_graph: Digraph,
        params: BTreeMap<(usize, usize), FieldElem>,
    ) -> Result<Self> {
        let n = eigs.len();
        if type_graph.n() != n {
            return Err(Error::SizeMismatch(format!(
                "{n} eigenvalues but the graph has {} vertices",
                type_graph.n()
            )));
        }
        if let Some(e) = eigs.iter().chain(params.values()).find(|e| e.spec() != field) {
            return Err(Error::SpecMismatch(field.to_string(), e.spec().to_string()));
        }
        if eigs.windows(2).any(|w| cmp_same(&w[0], &w[1]).is_ge()) {
            return Err(Error::Precondition("eigenvalues must be strictly increasing".into()));
        }
        let star = star_from_forest(&type_graph)?;
        let stars = star.star_cells();
        if params.keys().copied().ne(stars.iter().copied()) {
            return Err(Error::Precondition(
                "parameter positions must be exactly the Star cells".into(),
            ));
        }
        Ok(CanonicalPair {
            n,
            field,
            eigs,
            type_graph,
            star,
            params,
        })
    }

    /// `(diag(a), A₂)` with 1 at One cells, 0 at Zero cells and the
    /// parameters at Star cells.
    pub fn reconstitute(&self) -> MatrixPair {
        let mut a2 = Mat::zeros(self.field, self.n, self.n);
        for (i, j) in lex_positions(self.n) {
            match self.star.get(i, j) {
                Cell::Zero => {}
                Cell::One => a2.set(i, j, FieldElem::one(self.field)),
                Cell::Star => a2.set(i, j, self.params[&(i, j)].clone()),
            }
        }
        MatrixPair {
            a1: Mat::diag(self.field, &self.eigs),
            a2,
        }
    }
}

/// A canonical pair together with the conjugator that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonResult {
    pub canon: CanonicalPair,
    /// `g·P·g⁻¹` is the reconstituted canonical pair.
    pub g: Mat,
}

/// Whether the first matrix has `n` distinct eigenvalues in the field.
pub fn in_dn(p: &MatrixPair) -> Result<bool> {
    p.field().check_convention(p.n())?;
    let eigs = p.a1.eigs_in_field()?;
    Ok(eigs.len() == p.n() && eigs.iter().all(|(_, m)| *m == 1))
}

/// Diagonalize `A1`, pick a forest greedily in lexicographic order and
/// normalize its arrows to 1 with a diagonal conjugation.
pub fn canonicalize(p: &MatrixPair) -> Result<CanonResult> {
    let n = p.n();
    let f = p.field();
    f.check_convention(n)?;
    let (g0, eigs) = p.a1.diagonalizer()?;
    let a2p = p.conjugate(&g0)?.a2;

    let mut dsu = Dsu::new(n);
    let mut forest = Digraph::empty(n);
    for (i, j) in lex_positions(n).filter(|(i, j)| i != j) {
        if !a2p.get(i, j).is_zero() && dsu.union(i, j) {
            forest.add_arrow(i, j)?;
        }
    }

    let d = torus_scaling(&forest, &a2p);
    let dm = Mat::diag(f, &d);
    let g = &dm * &g0;
    let a2pp = MatrixPair {
        a1: Mat::diag(f, &eigs),
        a2: a2p,
    }
    .conjugate(&dm)?
    .a2;

    let star = star_from_forest(&forest)?;
    if !matches(&star, &a2pp) {
        return Err(Error::Verification(format!(
            "normalized second matrix does not fit its pattern\n{star}"
        )));
    }
    let params = star
        .star_cells()
        .into_iter()
        .map(|(i, j)| ((i, j), a2pp.get(i, j).clone()))
        .collect();
    let canon = CanonicalPair {
        n,
        field: f,
        eigs,
        type_graph: forest,
        star,
        params,
    };
    if p.conjugate(&g)? != canon.reconstitute() {
        return Err(Error::Verification("conjugator does not reach the canonical pair".into()));
    }
    Ok(CanonResult { canon, g })
}

/// Scales with `dᵢ·A_ij·d_j⁻¹ = 1` on every arrow; the smallest vertex of
/// each component gets scale 1.
fn torus_scaling(forest: &Digraph, a2: &Mat) -> Vec<FieldElem> {
    let n = forest.n();
    let f = a2.field();
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for (i, j) in forest.arrows() {
        adj[i].push((j, true));
        adj[j].push((i, false));
    }
    let mut d: Vec<Option<FieldElem>> = vec![None; n];
    for root in 0..n {
        if d[root].is_some() {
            continue;
        }
        d[root] = Some(FieldElem::one(f));
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let dv = d[v].clone().expect("visited");
            for &(w, outgoing) in &adj[v] {
                if d[w].is_some() {
                    continue;
                }
                // arrow v→w: d_w = d_v·A_vw; arrow w→v: d_w = d_v / A_wv
                let dw = if outgoing {
                    &dv * a2.get(v, w)
                } else {
                    dv.checked_div(a2.get(w, v)).expect("arrow entries are nonzero")
                };
                d[w] = Some(dw);
                queue.push_back(w);
            }
        }
    }
    d.into_iter().map(|x| x.expect("all vertices reached")).collect()
}

fn check_comparable(p: &MatrixPair, q: &MatrixPair) -> Result<()> {
    if p.field() != q.field() {
        return Err(Error::SpecMismatch(p.field().to_string(), q.field().to_string()));
    }
    if p.n() != q.n() {
        return Err(Error::SizeMismatch(format!("n = {} vs n = {}", p.n(), q.n())));
    }
    Ok(())
}

/// Orbit equality by comparing canonical forms.
pub fn orbit_eq_canonical(p: &MatrixPair, q: &MatrixPair) -> Result<bool> {
    check_comparable(p, q)?;
    Ok(canonicalize(p)?.canon == canonicalize(q)?.canon)
}

/// Orbit equality by exhaustive search over `GLₙ(𝔽ₚ)`.
pub fn orbit_eq_brute(p: &MatrixPair, q: &MatrixPair, guard: &GlGuard) -> Result<bool> {
    check_comparable(p, q)?;
    let FieldSpec::Prime(pr) = p.field() else {
        return Err(Error::Precondition("brute-force search needs a prime field".into()));
    };
    Ok(find_conjugator(&p.to_vec(), &q.to_vec(), p.n(), pr, guard)?.is_some())
}

/// `n` distinct field elements chosen at random.
pub fn random_distinct<R: Rng + ?Sized>(f: FieldSpec, n: usize, rng: &mut R, height: i64) -> Vec<FieldElem> {
    match f {
        FieldSpec::Prime(_) => {
            let mut all: Vec<FieldElem> = f.elements().collect();
            all.shuffle(rng);
            all.truncate(n);
            all
        }
        FieldSpec::Rationals => {
            let mut out: Vec<FieldElem> = Vec::with_capacity(n);
            while out.len() < n {
                let x = FieldElem::random(f, rng, height.max(n as i64));
                if !out.contains(&x) {
                    out.push(x);
                }
            }
            out
        }
    }
}

/// A random element of `Dₙ`: a diagonal pair with a sparse random second
/// matrix, moved by a random conjugation.
pub fn random_dn_pair<R: Rng + ?Sized>(f: FieldSpec, n: usize, rng: &mut R, height: i64) -> MatrixPair {
    let eigs = random_distinct(f, n, rng, height);
    let mut a2 = Mat::zeros(f, n, n);
    for (i, j) in lex_positions(n) {
        if rng.gen_bool(0.5) {
            a2.set(i, j, FieldElem::random(f, rng, height));
        }
    }
    let g = Mat::random_invertible(f, n, rng, height);
    MatrixPair {
        a1: Mat::diag(f, &eigs),
        a2,
    }
    .conjugate(&g)
    .expect("invertible conjugator")
}
