//! Directed forests on numbered vertices and their canonical ∗-matrices.
//!
//! Vertices and matrix positions are 0-based in the API and 1-based in every
//! text rendering.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::linalg::Mat;

/// Orientation of a path step relative to the arrow it traverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    /// The arrow points along the path.
    Fwd,
    /// The arrow points against the path.
    Rev,
}

impl Dir {
    pub fn symbol(self) -> char {
        match self {
            Dir::Fwd => 'F',
            Dir::Rev => 'R',
        }
    }

    /// Parse a pattern such as `FRF`.
    pub fn parse_pattern(text: &str) -> Result<Vec<Dir>> {
        text.trim()
            .chars()
            .enumerate()
            .map(|(pos, c)| match c {
                'F' | 'f' | '1' => Ok(Dir::Fwd),
                'R' | 'r' | 'T' | 't' => Ok(Dir::Rev),
                _ => Err(Error::Parse(format!(
                    "delta pattern: unexpected {c:?} at column {}",
                    pos + 1
                ))),
            })
            .collect()
    }

    pub fn pattern_string(delta: &[Dir]) -> String {
        delta.iter().map(|d| d.symbol()).collect()
    }
}

/// Disjoint-set union with path halving.
#[derive(Debug, Clone)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False when already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// A directed graph on vertices `0..n` without self-loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digraph {
    n: usize,
    arrows: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            arrows: BTreeSet::new(),
        }
    }

    pub fn new(n: usize, arrows: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (i, j) in arrows {
            g.add_arrow(i, j)?;
        }
        Ok(g)
    }

    /// Build from 1-based vertex pairs.
    pub fn from_one_based(n: usize, arrows: &[(usize, usize)]) -> Result<Self> {
        let shifted = arrows
            .iter()
            .map(|&(i, j)| {
                if i == 0 || j == 0 {
                    Err(Error::IndexOutOfRange("vertices are numbered from 1".into()))
                } else {
                    Ok((i - 1, j - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, shifted)
    }

    pub fn add_arrow(&mut self, i: usize, j: usize) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::IndexOutOfRange(format!(
                "arrow v{}->v{} on {} vertices",
                i + 1,
                j + 1,
                self.n
            )));
        }
        if i == j {
            return Err(Error::Precondition(format!("self-loop at v{}", i + 1)));
        }
        self.arrows.insert((i, j));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arrows.iter().copied()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn has_arrow(&self, i: usize, j: usize) -> bool {
        self.arrows.contains(&(i, j))
    }

    fn neighbours(&self) -> Vec<Vec<(usize, Dir)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.arrows {
            adj[i].push((j, Dir::Fwd));
            adj[j].push((i, Dir::Rev));
        }
        adj
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            return write!(f, "(no arrows on {} vertices)", self.n);
        }
        let parts: Vec<String> = self
            .arrows
            .iter()
            .map(|(i, j)| format!("v{}->v{}", i + 1, j + 1))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Symbols of a ∗-matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Zero,
    One,
    Star,
}

impl Cell {
    pub fn symbol(self) -> char {
        match self {
            Cell::Zero => '0',
            Cell::One => '1',
            Cell::Star => '*',
        }
    }
}

/// An `n×n` pattern over `{0, 1, ∗}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StarMatrix {
    n: usize,
    cells: Vec<Cell>,
}

impl StarMatrix {
    pub fn from_cells(n: usize, cells: Vec<Cell>) -> Result<Self> {
        if cells.len() != n * n {
            return Err(Error::SizeMismatch(format!(
                "{} cells for a {n}x{n} star matrix",
                cells.len()
            )));
        }
        Ok(StarMatrix { n, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Cell {
        self.cells[i * self.n + j]
    }

    /// Star positions in lexicographic order.
    pub fn star_cells(&self) -> Vec<(usize, usize)> {
        lex_positions(self.n)
            .filter(|&(i, j)| self.get(i, j) == Cell::Star)
            .collect()
    }

    /// Compact rows such as `*1`.
    pub fn row_strings(&self) -> Vec<String> {
        self.cells
            .chunks(self.n.max(1))
            .map(|r| r.iter().map(|c| c.symbol()).collect())
            .collect()
    }

    /// Rows of `0`, `1`, `*`; symbols may be separated by spaces.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<Cell>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let mut row = Vec::new();
            for (col, ch) in line.chars().enumerate() {
                let cell = match ch {
                    '0' => Cell::Zero,
                    '1' => Cell::One,
                    '*' => Cell::Star,
                    c if c.is_whitespace() || c == ',' => continue,
                    c => {
                        return Err(Error::Parse(format!(
                            "star matrix: unexpected {c:?} at line {}, column {}",
                            lineno + 1,
                            col + 1
                        )))
                    }
                };
                row.push(cell);
            }
            if !row.is_empty() {
                rows.push(row);
            }
        }
        let n = rows.len();
        if let Some((k, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Parse(format!(
                "star matrix: row {} has {} symbols, expected {n}",
                k + 1,
                r.len()
            )));
        }
        Self::from_cells(n, rows.concat())
    }

    /// The matrix with 0 at Zero cells and 1 at One and Star cells.
    pub fn representative(&self, field: crate::field::FieldSpec) -> Mat {
        let mut m = Mat::zeros(field, self.n, self.n);
        for (i, j) in lex_positions(self.n) {
            if self.get(i, j) != Cell::Zero {
                m.set(i, j, FieldElem::one(field));
            }
        }
        m
    }
}

impl fmt::Display for StarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, row) in self.cells.chunks(self.n.max(1)).enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            let syms: Vec<String> = row.iter().map(|c| c.symbol().to_string()).collect();
            write!(f, "{}", syms.join(" "))?;
        }
        Ok(())
    }
}

/// All positions `(i, j)` in lexicographic order.
pub fn lex_positions(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

/// An undirected path with the orientation of each traversed arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPath {
    pub vertices: Vec<usize>,
    pub delta: Vec<Dir>,
}

impl UPath {
    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    /// The traversed arrows as (source, target).
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        self.delta
            .iter()
            .enumerate()
            .map(|(l, d)| {
                let (a, b) = (self.vertices[l], self.vertices[l + 1]);
                match d {
                    Dir::Fwd => (a, b),
                    Dir::Rev => (b, a),
                }
            })
            .collect()
    }
}

/// True iff the underlying undirected multigraph has no cycle; a pair of
/// anti-parallel arrows is a cycle.
pub fn is_forest(g: &Digraph) -> bool {
    let mut dsu = Dsu::new(g.n);
    g.arrows.iter().all(|&(i, j)| dsu.union(i, j))
}

/// The unique undirected path from `i` to `j`, if any.
pub fn undirected_path(g: &Digraph, i: usize, j: usize) -> Option<UPath> {
    if i >= g.n || j >= g.n {
        return None;
    }
    let adj = g.neighbours();
    let mut prev: Vec<Option<(usize, Dir)>> = vec![None; g.n];
    let mut seen = vec![false; g.n];
    seen[i] = true;
    let mut queue = VecDeque::from([i]);
    while let Some(v) = queue.pop_front() {
        if v == j {
            break;
        }
        for &(w, d) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((v, d));
                queue.push_back(w);
            }
        }
    }
    if !seen[j] {
        return None;
    }
    let mut vertices = vec![j];
    let mut delta = Vec::new();
    let mut cur = j;
    while let Some((p, d)) = prev[cur] {
        vertices.push(p);
        delta.push(d);
        cur = p;
    }
    vertices.reverse();
    delta.reverse();
    Some(UPath { vertices, delta })
}

/// The canonical ∗-matrix of a forest.
pub fn star_from_forest(g: &Digraph) -> Result<StarMatrix> {
    if !is_forest(g) {
        return Err(Error::NotAForest);
    }
    let cells = lex_positions(g.n)
        .map(|(i, j)| {
            if i == j {
                Cell::Star
            } else if g.has_arrow(i, j) {
                Cell::One
            } else {
                match undirected_path(g, i, j) {
                    None => Cell::Zero,
                    Some(p) if p.arrows().iter().any(|&a| a > (i, j)) => Cell::Zero,
                    Some(_) => Cell::Star,
                }
            }
        })
        .collect();
    StarMatrix::from_cells(g.n, cells)
}

/// The forest whose arrows are the One cells; fails unless the round trip
/// reproduces `s`.
pub fn forest_from_star(s: &StarMatrix) -> Result<Digraph> {
    let arrows = lex_positions(s.n).filter(|&(i, j)| s.get(i, j) == Cell::One);
    let g = Digraph::new(s.n, arrows)
        .map_err(|e| Error::InvalidStarMatrix(format!("bad One cell: {e}")))?;
    if !is_forest(&g) {
        return Err(Error::InvalidStarMatrix("One cells contain a cycle".into()));
    }
    if star_from_forest(&g)? != *s {
        return Err(Error::InvalidStarMatrix(
            "pattern is not the canonical star matrix of its One cells".into(),
        ));
    }
    Ok(g)
}

/// Whether `m` lies in the set described by `s`.
pub fn matches(s: &StarMatrix, m: &Mat) -> bool {
    if m.rows() != s.n || m.cols() != s.n {
        return false;
    }
    lex_positions(s.n).all(|(i, j)| match s.get(i, j) {
        Cell::Zero => m.get(i, j).is_zero(),
        Cell::One => m.get(i, j).is_one(),
        Cell::Star => true,
    })
}

/// Every directed forest on `n` vertices, each exactly once.
pub fn enumerate_forests(n: usize, bound: usize) -> Result<Vec<Digraph>> {
    if n > bound {
        return Err(Error::GuardExceeded(format!(
            "forest enumeration for n = {n} exceeds the bound {bound}"
        )));
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << edges.len()) {
        let chosen: Vec<(usize, usize)> = edges
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, e)| *e)
            .collect();
        let mut dsu = Dsu::new(n);
        if !chosen.iter().all(|&(i, j)| dsu.union(i, j)) {
            continue;
        }
        for orient in 0u64..(1u64 << chosen.len()) {
            let arrows = chosen.iter().enumerate().map(|(k, &(i, j))| {
                if orient >> k & 1 == 1 {
                    (j, i)
                } else {
                    (i, j)
                }
            });
            out.push(Digraph::new(n, arrows)?);
        }
    }
    Ok(out)
}

/// A position where one pattern has Zero and the other One.
pub fn disjoint_witness(s1: &StarMatrix, s2: &StarMatrix) -> Option<(usize, usize)> {
    if s1.n != s2.n {
        return None;
    }
    lex_positions(s1.n).find(|&(i, j)| {
        matches!(
            (s1.get(i, j), s2.get(i, j)),
            (Cell::Zero, Cell::One) | (Cell::One, Cell::Zero)
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn g1(n: usize, arrows: &[(usize, usize)]) -> Digraph {
        Digraph::from_one_based(n, arrows).unwrap()
    }

    fn example_graph() -> Digraph {
        g1(4, &[(4, 1), (2, 1), (2, 3)])
    }

    #[test]
    fn forest_examples() {
        assert!(is_forest(&Digraph::empty(2)));
        assert!(!is_forest(&g1(2, &[(1, 2), (2, 1)])));
        assert!(is_forest(&example_graph()));
        assert!(!is_forest(&g1(3, &[(1, 2), (2, 3), (1, 3)])));
        assert!(Digraph::new(2, [(0, 0)]).is_err());
    }

    #[test]
    fn star_examples() {
        let s = star_from_forest(&g1(2, &[(1, 2)])).unwrap();
        assert_eq!(s, StarMatrix::parse("* 1\n* *").unwrap());
        let s = star_from_forest(&g1(4, &[(1, 2), (2, 3), (3, 4)])).unwrap();
        assert_eq!(s, StarMatrix::parse("*100\n**10\n***1\n****").unwrap());
        let s = star_from_forest(&example_graph()).unwrap();
        assert_eq!(s, StarMatrix::parse("*000\n1*10\n***0\n1***").unwrap());
        assert_eq!(star_from_forest(&g1(2, &[(1, 2), (2, 1)])), Err(Error::NotAForest));
    }

    #[test]
    fn inverse_examples() {
        let s = StarMatrix::parse("* 0\n1 *").unwrap();
        assert_eq!(forest_from_star(&s).unwrap(), g1(2, &[(2, 1)]));
        let s = StarMatrix::parse("*00\n0*0\n00*").unwrap();
        assert_eq!(forest_from_star(&s).unwrap(), Digraph::empty(3));
        let s = StarMatrix::parse("*000\n1*10\n***0\n1***").unwrap();
        assert_eq!(forest_from_star(&s).unwrap(), example_graph());
        let bad = StarMatrix::parse("*1\n1*").unwrap();
        assert!(matches!(forest_from_star(&bad), Err(Error::InvalidStarMatrix(_))));
        let bad = StarMatrix::parse("*0\n0 0").unwrap();
        assert!(matches!(forest_from_star(&bad), Err(Error::InvalidStarMatrix(_))));
    }

    #[test]
    fn membership_examples() {
        let q = FieldSpec::Rationals;
        for g in enumerate_forests(3, 5).unwrap() {
            let s = star_from_forest(&g).unwrap();
            assert!(matches(&s, &s.representative(q)));
        }
        let s = StarMatrix::parse("* 1\n* *").unwrap();
        assert!(!matches(&s, &Mat::from_i64(q, &[&[5, 0], &[2, 3]])));
        assert!(matches(&s, &Mat::from_i64(q, &[&[5, 1], &[2, 3]])));
    }

    #[test]
    fn path_examples() {
        let p = undirected_path(&g1(2, &[(1, 2)]), 0, 1).unwrap();
        assert_eq!(p.vertices, vec![0, 1]);
        assert_eq!(p.delta, vec![Dir::Fwd]);
        let g = example_graph();
        let p = undirected_path(&g, 3, 2).unwrap();
        assert_eq!(p.vertices, vec![3, 0, 1, 2]);
        assert_eq!(p.delta, vec![Dir::Fwd, Dir::Rev, Dir::Fwd]);
        let p = undirected_path(&g, 2, 1).unwrap();
        assert_eq!(p.vertices, vec![2, 1]);
        assert_eq!(p.delta, vec![Dir::Rev]);
        assert!(undirected_path(&g1(3, &[(1, 2)]), 0, 2).is_none());
    }

    #[test]
    fn witness_examples() {
        let a = StarMatrix::parse("* 1\n* *").unwrap();
        let b = StarMatrix::parse("* 0\n1 *").unwrap();
        assert_eq!(disjoint_witness(&a, &a), None);
        assert_eq!(disjoint_witness(&a, &b), Some((0, 1)));
    }

    /// Independent count: every arrow subset filtered by a DFS cycle check.
    fn brute_forest_count(n: usize) -> usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        (0u64..1 << pairs.len())
            .filter(|mask| {
                let chosen: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, p)| *p)
                    .collect();
                // a multigraph is a forest iff edges = vertices - components
                let mut comp: Vec<usize> = (0..n).collect();
                for _ in 0..n {
                    for &(i, j) in &chosen {
                        let m = comp[i].min(comp[j]);
                        comp[i] = m;
                        comp[j] = m;
                    }
                }
                let components = (0..n).filter(|&v| comp[v] == v).count();
                chosen.len() == n - components
            })
            .count()
    }

    #[test]
    fn forest_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| enumerate_forests(n, 5).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 3, 19, 201]);
        for n in 1..=4 {
            assert_eq!(counts[n - 1], brute_forest_count(n));
        }
        assert!(matches!(enumerate_forests(6, 5), Err(Error::GuardExceeded(_))));
        let all = enumerate_forests(4, 5).unwrap();
        let distinct: BTreeSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        assert_eq!(all, enumerate_forests(4, 5).unwrap());
    }

    #[test]
    fn round_trips_exhaustive() {
        for n in 1..=4 {
            let stars: Vec<StarMatrix> = enumerate_forests(n, 5)
                .unwrap()
                .iter()
                .map(|g| {
                    let s = star_from_forest(g).unwrap();
                    assert_eq!(&forest_from_star(&s).unwrap(), g);
                    assert_eq!(StarMatrix::parse(&s.to_string()).unwrap(), s);
                    assert!((0..n).all(|i| s.get(i, i) == Cell::Star));
                    s
                })
                .collect();
            for (a, s1) in stars.iter().enumerate() {
                for s2 in &stars[a + 1..] {
                    assert_ne!(s1, s2);
                    assert!(disjoint_witness(s1, s2).is_some());
                }
            }
        }
    }

    #[test]
    fn paths_exist_exactly_within_components() {
        for g in enumerate_forests(4, 5).unwrap() {
            let mut dsu = Dsu::new(4);
            for (i, j) in g.arrows() {
                dsu.union(i, j);
            }
            for (i, j) in lex_positions(4).filter(|(i, j)| i != j) {
                let p = undirected_path(&g, i, j);
                assert_eq!(p.is_some(), dsu.find(i) == dsu.find(j));
                if let Some(p) = p {
                    for (a, b) in p.arrows() {
                        assert!(g.has_arrow(a, b));
                    }
                    let distinct: BTreeSet<_> = p.vertices.iter().collect();
                    assert_eq!(distinct.len(), p.vertices.len());
                }
            }
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = StarMatrix::parse("*1\n*x").unwrap_err();
        assert_eq!(e, Error::Parse("star matrix: unexpected 'x' at line 2, column 2".into()));
        assert!(StarMatrix::parse("*1\n*").is_err());
        assert_eq!(Dir::parse_pattern("FRT").unwrap(), vec![Dir::Fwd, Dir::Rev, Dir::Rev]);
        assert!(Dir::parse_pattern("FX").is_err());
    }
}
