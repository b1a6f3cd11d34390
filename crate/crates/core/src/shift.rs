//! Constraint specifications for Markov shifts on the Fibonacci lattice and
//! the exact counting recursion for their n-blocks.
//!
//! A specification is canonically a set of allowed degree-2 local patterns
//! `(parent; child1, child2)`. Nodes of the lattice whose address ends in `2`
//! have a single child; there the constraint is the derived relation `D`, the
//! set of `(parent, child1)` pairs that can be completed by a viable filler in
//! the missing second direction.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::RootType;

/// Index of a symbol in its [`Alphabet`].
pub type Symbol = usize;

/// An allowed degree-2 local pattern `(parent; child1, child2)`.
pub type Triple = (Symbol, Symbol, Symbol);

/// An allowed degree-1 transition `(parent, child1)`.
pub type Pair = (Symbol, Symbol);

/// Ordered list of distinct symbol labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::BadAlphabet("alphabet is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::BadAlphabet(format!("duplicate label {label:?}")));
            }
        }
        Ok(Alphabet { labels })
    }

    /// `c1, c2, ..., ck`.
    pub fn numbered(k: usize) -> Self {
        assert!(k >= 1, "alphabet needs at least one symbol");
        Alphabet {
            labels: (1..=k).map(|i| format!("c{i}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, symbol: Symbol) -> &str {
        &self.labels[symbol]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<Symbol> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Square 0/1 matrix indexed by symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: Vec<Vec<bool>>,
}

impl BinaryMatrix {
    pub fn new(rows: &[Vec<u8>]) -> Result<Self> {
        let k = rows.len();
        let mut out = Vec::with_capacity(k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::BadMatrix(format!(
                    "row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            let mut bits = Vec::with_capacity(k);
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => bits.push(false),
                    1 => bits.push(true),
                    _ => {
                        return Err(Error::BadMatrix(format!(
                            "entry ({i},{j}) is {v}, expected 0 or 1"
                        )))
                    }
                }
            }
            out.push(bits);
        }
        Ok(BinaryMatrix { rows: out })
    }

    pub fn identity(k: usize) -> Self {
        BinaryMatrix {
            rows: (0..k).map(|i| (0..k).map(|j| i == j).collect()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: Symbol, j: Symbol) -> bool {
        self.rows[i][j]
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&b| u8::from(b)).collect())
            .collect()
    }
}

/// Where a specification's triple set came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Product form: `(i; j1, j2)` allowed iff `A1(i, j1) = A2(i, j2) = 1`.
    VertexMatrices { a1: BinaryMatrix, a2: BinaryMatrix },
    /// Built from a network's admissible local patterns.
    PatternSet,
    Raw,
}

/// A Markov shift on the Fibonacci lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkovFibSpec {
    alphabet: Alphabet,
    triples: BTreeSet<Triple>,
    pairs: BTreeSet<Pair>,
    live: Vec<bool>,
    pruned: bool,
    provenance: Provenance,
}

/// Symbols removed by [`viability_prune`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PruneReport {
    pub removed: Vec<Symbol>,
}

impl MarkovFibSpec {
    /// Builds a specification without removing dead symbols. The degree-1
    /// relation is derived from the triples under binary-tree viability.
    pub fn unpruned(
        alphabet: Alphabet,
        triples: impl IntoIterator<Item = Triple>,
        provenance: Provenance,
    ) -> Result<Self> {
        let k = alphabet.len();
        let triples: BTreeSet<Triple> = triples.into_iter().collect();
        if let Some(&(i, j1, j2)) = triples.iter().find(|&&(i, a, b)| i >= k || a >= k || b >= k) {
            return Err(Error::UnknownSymbol(format!(
                "triple ({i}; {j1}, {j2}) outside an alphabet of {k} symbols"
            )));
        }
        let fillers = binary_viable(k, &triples);
        let pairs = derive_degree1(&triples, &fillers);
        Ok(MarkovFibSpec {
            alphabet,
            triples,
            pairs,
            live: vec![true; k],
            pruned: false,
            provenance,
        })
    }

    /// Builds and prunes a specification from a raw triple set.
    pub fn from_triples(
        alphabet: Alphabet,
        triples: impl IntoIterator<Item = Triple>,
        provenance: Provenance,
    ) -> Result<Self> {
        let raw = Self::unpruned(alphabet, triples, provenance)?;
        viability_prune(&raw).map(|(spec, _)| spec)
    }

    /// Full shift: every triple allowed.
    pub fn full(k: usize) -> Self {
        let triples = (0..k).flat_map(|i| (0..k).flat_map(move |a| (0..k).map(move |b| (i, a, b))));
        Self::from_triples(Alphabet::numbered(k), triples, Provenance::Raw)
            .expect("the full shift is never empty")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Alphabet size, dead symbols included.
    pub fn k(&self) -> usize {
        self.alphabet.len()
    }

    pub fn triples(&self) -> &BTreeSet<Triple> {
        &self.triples
    }

    pub fn pairs(&self) -> &BTreeSet<Pair> {
        &self.pairs
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_pruned(&self) -> bool {
        self.pruned
    }

    pub fn is_live(&self, symbol: Symbol) -> bool {
        self.live[symbol]
    }

    pub fn live_symbols(&self) -> Vec<Symbol> {
        (0..self.k()).filter(|&s| self.live[s]).collect()
    }

    pub fn triples_from(&self, parent: Symbol) -> impl Iterator<Item = (Symbol, Symbol)> + '_ {
        self.triples
            .range((parent, 0, 0)..=(parent, usize::MAX, usize::MAX))
            .map(|&(_, a, b)| (a, b))
    }

    pub fn pairs_from(&self, parent: Symbol) -> impl Iterator<Item = Symbol> + '_ {
        self.pairs
            .range((parent, 0)..=(parent, usize::MAX))
            .map(|&(_, j)| j)
    }

    pub fn allows_triple(&self, parent: Symbol, child1: Symbol, child2: Symbol) -> bool {
        self.triples.contains(&(parent, child1, child2))
    }

    pub fn allows_pair(&self, parent: Symbol, child1: Symbol) -> bool {
        self.pairs.contains(&(parent, child1))
    }

    /// This spec if already pruned, otherwise its pruned form.
    pub fn ensure_pruned(&self) -> Result<std::borrow::Cow<'_, MarkovFibSpec>> {
        if self.pruned {
            Ok(std::borrow::Cow::Borrowed(self))
        } else {
            viability_prune(self).map(|(s, _)| std::borrow::Cow::Owned(s))
        }
    }
}

impl fmt::Display for MarkovFibSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.alphabet;
        let triples: Vec<String> = self
            .triples
            .iter()
            .map(|&(i, j1, j2)| format!("({}; {}, {})", a.label(i), a.label(j1), a.label(j2)))
            .collect();
        write!(f, "{{{}}}", triples.join(", "))
    }
}

/// Vertex-shift constructor: the triple set is the product of the rows of
/// the two direction matrices.
pub fn spec_from_vertex_matrices(
    alphabet: Alphabet,
    a1: &BinaryMatrix,
    a2: &BinaryMatrix,
) -> Result<MarkovFibSpec> {
    let k = alphabet.len();
    if a1.dim() != k || a2.dim() != k {
        return Err(Error::BadMatrix(format!(
            "matrices are {}x{} and {}x{} for an alphabet of {k} symbols",
            a1.dim(),
            a1.dim(),
            a2.dim(),
            a2.dim()
        )));
    }
    let mut triples = Vec::new();
    for i in 0..k {
        for j1 in (0..k).filter(|&j| a1.get(i, j)) {
            for j2 in (0..k).filter(|&j| a2.get(i, j)) {
                triples.push((i, j1, j2));
            }
        }
    }
    MarkovFibSpec::from_triples(
        alphabet,
        triples,
        Provenance::VertexMatrices {
            a1: a1.clone(),
            a2: a2.clone(),
        },
    )
}

/// Symbols rooting an infinite full binary tree in which every node's
/// local pattern lies in `triples` (greatest fixed point).
pub fn binary_viable(k: usize, triples: &BTreeSet<Triple>) -> Vec<bool> {
    let mut viable = vec![true; k];
    loop {
        let next: Vec<bool> = (0..k)
            .map(|i| {
                viable[i]
                    && triples
                        .range((i, 0, 0)..=(i, usize::MAX, usize::MAX))
                        .any(|&(_, a, b)| viable[a] && viable[b])
            })
            .collect();
        if next == viable {
            return viable;
        }
        viable = next;
    }
}

/// Existential projection of `triples` onto `(parent, child1)`, keeping only
/// triples whose second child is a viable filler.
pub fn derive_degree1(triples: &BTreeSet<Triple>, viable_fillers: &[bool]) -> BTreeSet<Pair> {
    triples
        .iter()
        .filter(|&&(_, _, j2)| viable_fillers.get(j2).copied().unwrap_or(false))
        .map(|&(i, j1, _)| (i, j1))
        .collect()
}

/// Removes symbols that cannot root a coloring of every finite slice.
///
/// Computes the greatest fixed point of
/// `V2(i) <=> exists (i; j1, j2) in T with V2(j1) and V1(j2)` and
/// `V1(i) <=> exists (i, j) in D with V2(j)`, then drops every triple or pair
/// that mentions a symbol outside both sets. Idempotent.
pub fn viability_prune(spec: &MarkovFibSpec) -> Result<(MarkovFibSpec, PruneReport)> {
    let k = spec.k();
    let mut two = spec.live.clone();
    let mut one = spec.live.clone();
    loop {
        let next_two: Vec<bool> = (0..k)
            .map(|i| two[i] && spec.triples_from(i).any(|(a, b)| two[a] && one[b]))
            .collect();
        let next_one: Vec<bool> = (0..k)
            .map(|i| one[i] && spec.pairs_from(i).any(|j| next_two[j]))
            .collect();
        if next_two == two && next_one == one {
            break;
        }
        two = next_two;
        one = next_one;
    }
    let live: Vec<bool> = (0..k).map(|i| two[i] && one[i]).collect();
    if !live.iter().any(|&b| b) {
        return Err(Error::EmptyShift);
    }
    let report = PruneReport {
        removed: (0..k).filter(|&i| spec.live[i] && !live[i]).collect(),
    };
    let triples = spec
        .triples
        .iter()
        .copied()
        .filter(|&(i, a, b)| live[i] && live[a] && live[b])
        .collect();
    let pairs = spec
        .pairs
        .iter()
        .copied()
        .filter(|&(i, j)| live[i] && live[j])
        .collect();
    Ok((
        MarkovFibSpec {
            alphabet: spec.alphabet.clone(),
            triples,
            pairs,
            live,
            pruned: true,
            provenance: spec.provenance.clone(),
        },
        report,
    ))
}

/// Values the block-count recursion can run over.
pub(crate) trait CountValue: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add_assign_ref(&mut self, other: &Self);
    fn add_product(&mut self, a: &Self, b: &Self);
}

impl CountValue for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

/// Counts saturated at two: `0`, `1` or "at least 2".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Saturating(pub u8);

impl CountValue for Saturating {
    fn zero() -> Self {
        Saturating(0)
    }
    fn one() -> Self {
        Saturating(1)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        self.0 = (self.0 + other.0).min(2);
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        self.0 = (self.0 + (a.0 * b.0).min(2)).min(2);
    }
}

/// Runs the coupled recursion up to `max_height`, returning
/// `(epsilon_rows, two_rows)` indexed `[symbol][height - 1]`.
pub(crate) fn gamma_rows<C: CountValue>(spec: &MarkovFibSpec, max_height: usize) -> (Vec<Vec<C>>, Vec<Vec<C>>) {
    let k = spec.k();
    let mut eps: Vec<Vec<C>> = vec![Vec::with_capacity(max_height); k];
    let mut two: Vec<Vec<C>> = vec![Vec::with_capacity(max_height); k];
    if max_height == 0 {
        return (eps, two);
    }
    for i in 0..k {
        let base = if spec.is_live(i) { C::one() } else { C::zero() };
        eps[i].push(base.clone());
        two[i].push(base);
    }
    for h in 1..max_height {
        let mut next_eps = Vec::with_capacity(k);
        let mut next_two = Vec::with_capacity(k);
        for i in 0..k {
            let mut e = C::zero();
            for (a, b) in spec.triples_from(i) {
                e.add_product(&eps[a][h - 1], &two[b][h - 1]);
            }
            let mut t = C::zero();
            for j in spec.pairs_from(i) {
                t.add_assign_ref(&eps[j][h - 1]);
            }
            next_eps.push(e);
            next_two.push(t);
        }
        for i in 0..k {
            eps[i].push(next_eps[i].clone());
            two[i].push(next_two[i].clone());
        }
    }
    (eps, two)
}

/// Exact block counts for both root types, heights `1..=height()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaTable {
    epsilon: Vec<Vec<BigUint>>,
    two_rooted: Vec<Vec<BigUint>>,
    height: usize,
}

impl GammaTable {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn symbols(&self) -> usize {
        self.epsilon.len()
    }

    /// Number of `n`-blocks rooted at `symbol` for the given support shape.
    pub fn get(&self, root: RootType, symbol: Symbol, n: usize) -> &BigUint {
        assert!(n >= 1 && n <= self.height, "height {n} outside 1..={}", self.height);
        match root {
            RootType::Epsilon => &self.epsilon[symbol][n - 1],
            RootType::TwoRooted => &self.two_rooted[symbol][n - 1],
        }
    }

    pub fn epsilon(&self, symbol: Symbol, n: usize) -> &BigUint {
        self.get(RootType::Epsilon, symbol, n)
    }

    pub fn two_rooted(&self, symbol: Symbol, n: usize) -> &BigUint {
        self.get(RootType::TwoRooted, symbol, n)
    }

    /// `gamma_n`: all epsilon-rooted `n`-blocks.
    pub fn total(&self, n: usize) -> BigUint {
        (0..self.symbols()).map(|i| self.epsilon(i, n)).sum()
    }

    /// Overwrites one cell. Only useful for fault-injection in verification
    /// harnesses.
    pub fn set(&mut self, root: RootType, symbol: Symbol, n: usize, value: BigUint) {
        let row = match root {
            RootType::Epsilon => &mut self.epsilon[symbol],
            RootType::TwoRooted => &mut self.two_rooted[symbol],
        };
        row[n - 1] = value;
    }
}

/// Exact epsilon-rooted and two-rooted block counts up to `max_height`.
pub fn gamma_sequence(spec: &MarkovFibSpec, max_height: usize) -> GammaTable {
    let (epsilon, two_rooted) = gamma_rows::<BigUint>(spec, max_height);
    GammaTable {
        epsilon,
        two_rooted,
        height: max_height,
    }
}

/// `c[i][j1][j3]`: number of second children `j2` with `(i; j1, j2)` in `T`
/// and `(j2, j3)` in `D`. These are the coefficients of the two-step form
/// `gamma(i, n) = sum c[i][j1][j3] * gamma(j1, n-1) * gamma(j3, n-2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTensor {
    k: usize,
    data: Vec<u64>,
}

impl CoefficientTensor {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: Symbol, j1: Symbol, j3: Symbol) -> u64 {
        self.data[(i * self.k + j1) * self.k + j3]
    }

    /// The `k x k` slice for parent `i`.
    pub fn slice(&self, i: Symbol) -> Vec<Vec<u64>> {
        (0..self.k)
            .map(|j1| (0..self.k).map(|j3| self.get(i, j1, j3)).collect())
            .collect()
    }
}

pub fn recurrence_coefficients(spec: &MarkovFibSpec) -> CoefficientTensor {
    let k = spec.k();
    let mut data = vec![0u64; k * k * k];
    for &(i, j1, j2) in spec.triples() {
        for j3 in spec.pairs_from(j2) {
            data[(i * k + j1) * k + j3] += 1;
        }
    }
    CoefficientTensor { k, data }
}

/// Natural logarithm of an arbitrarily large integer. Returns `-inf` for 0.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::INFINITY, f64::ln);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit mantissa fits in f64");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> MarkovFibSpec {
        let a = BinaryMatrix::new(&[vec![1, 1], vec![1, 0]]).unwrap();
        spec_from_vertex_matrices(Alphabet::numbered(2), &a, &a).unwrap()
    }

    #[test]
    fn golden_mean_triples_and_pairs() {
        let spec = golden();
        let t: Vec<Triple> = spec.triples().iter().copied().collect();
        assert_eq!(t, vec![(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0)]);
        let d: Vec<Pair> = spec.pairs().iter().copied().collect();
        assert_eq!(d, vec![(0, 0), (0, 1), (1, 0)]);
    }

    #[test]
    fn identity_matrices() {
        let id = BinaryMatrix::identity(2);
        let spec = spec_from_vertex_matrices(Alphabet::numbered(2), &id, &id).unwrap();
        assert_eq!(spec.triples().len(), 2);
        assert!(spec.allows_triple(0, 0, 0) && spec.allows_triple(1, 1, 1));
        let d: Vec<Pair> = spec.pairs().iter().copied().collect();
        assert_eq!(d, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn zero_row_symbol_is_pruned() {
        let a1 = BinaryMatrix::new(&[vec![1, 1], vec![0, 0]]).unwrap();
        let a2 = BinaryMatrix::new(&[vec![1, 1], vec![1, 1]]).unwrap();
        let spec = spec_from_vertex_matrices(Alphabet::numbered(2), &a1, &a2).unwrap();
        assert!(spec.is_live(0));
        assert!(!spec.is_live(1));
        assert_eq!(spec.triples().iter().copied().collect::<Vec<_>>(), vec![(0, 0, 0)]);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = BinaryMatrix::identity(3);
        let err = spec_from_vertex_matrices(Alphabet::numbered(2), &a, &a).unwrap_err();
        assert!(matches!(err, Error::BadMatrix(_)));
        assert!(matches!(BinaryMatrix::new(&[vec![1, 2], vec![0, 1]]), Err(Error::BadMatrix(_))));
        assert!(matches!(BinaryMatrix::new(&[vec![1, 1], vec![0]]), Err(Error::BadMatrix(_))));
    }

    #[test]
    fn degree1_projection() {
        let spec = golden();
        let fillers = binary_viable(2, spec.triples());
        assert_eq!(fillers, vec![true, true]);
        let d = derive_degree1(spec.triples(), &fillers);
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![(0, 0), (0, 1), (1, 0)]);

        let t: BTreeSet<Triple> = [(0, 0, 1)].into_iter().collect();
        let fillers = binary_viable(2, &t);
        assert_eq!(fillers, vec![false, false]);
        assert!(derive_degree1(&t, &fillers).is_empty());

        let full = MarkovFibSpec::full(2);
        assert_eq!(full.pairs().len(), 4);
    }

    #[test]
    fn prune_reports_and_is_idempotent() {
        let raw = MarkovFibSpec::unpruned(
            Alphabet::numbered(2),
            [(0, 0, 1)],
            Provenance::Raw,
        )
        .unwrap();
        assert_eq!(viability_prune(&raw).unwrap_err(), Error::EmptyShift);

        let g = golden();
        let (again, report) = viability_prune(&g).unwrap();
        assert!(report.removed.is_empty());
        assert_eq!(again, g);

        let full = MarkovFibSpec::full(2);
        let (again, report) = viability_prune(&full).unwrap();
        assert!(report.removed.is_empty());
        assert_eq!(again.triples().len(), 8);
    }

    #[test]
    fn prune_removes_dead_branch() {
        // symbol 2 has no rule, and 1 needs 2 as a second child
        let raw = MarkovFibSpec::unpruned(
            Alphabet::numbered(3),
            [(0, 0, 0), (1, 0, 2)],
            Provenance::Raw,
        )
        .unwrap();
        let (spec, report) = viability_prune(&raw).unwrap();
        assert_eq!(report.removed, vec![1, 2]);
        assert_eq!(spec.live_symbols(), vec![0]);
        let (twice, report) = viability_prune(&spec).unwrap();
        assert!(report.removed.is_empty());
        assert_eq!(twice, spec);
    }

    #[test]
    fn golden_mean_counts() {
        let table = gamma_sequence(&golden(), 4);
        let row = |n| (table.epsilon(0, n).clone(), table.epsilon(1, n).clone());
        assert_eq!(row(1), (1u32.into(), 1u32.into()));
        assert_eq!(row(2), (4u32.into(), 1u32.into()));
        assert_eq!(row(3), (15u32.into(), 8u32.into()));
        assert_eq!(row(4), (207u32.into(), 75u32.into()));
        assert_eq!(table.two_rooted(0, 2), &BigUint::from(2u32));
        assert_eq!(table.two_rooted(1, 2), &BigUint::from(1u32));
        assert_eq!(table.total(3), BigUint::from(23u32));
    }

    #[test]
    fn identity_counts_are_one() {
        let id = BinaryMatrix::identity(2);
        let spec = spec_from_vertex_matrices(Alphabet::numbered(2), &id, &id).unwrap();
        let table = gamma_sequence(&spec, 12);
        for n in 1..=12 {
            for i in 0..2 {
                assert!(table.epsilon(i, n).is_one());
                assert!(table.two_rooted(i, n).is_one());
            }
        }
    }

    #[test]
    fn coefficient_tensor_examples() {
        let c = recurrence_coefficients(&golden());
        assert_eq!(c.slice(0), vec![vec![2, 1], vec![2, 1]]);
        assert_eq!(c.slice(1), vec![vec![1, 1], vec![0, 0]]);

        let id = BinaryMatrix::identity(2);
        let spec = spec_from_vertex_matrices(Alphabet::numbered(2), &id, &id).unwrap();
        let c = recurrence_coefficients(&spec);
        for i in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    assert_eq!(c.get(i, a, b), u64::from(a == i && b == i));
                }
            }
        }

        let c = recurrence_coefficients(&MarkovFibSpec::full(2));
        assert!((0..8).all(|x| c.get(x / 4, (x / 2) % 2, x % 2) == 2));
    }

    #[test]
    fn vertex_coefficients_match_matrix_product() {
        let a1 = BinaryMatrix::new(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        let a2 = BinaryMatrix::new(&[vec![0, 1, 1], vec![1, 1, 0], vec![1, 0, 0]]).unwrap();
        let spec = spec_from_vertex_matrices(Alphabet::numbered(3), &a1, &a2).unwrap();
        assert_eq!(spec.live_symbols(), vec![0, 1, 2]);
        let c = recurrence_coefficients(&spec);
        for i in 0..3 {
            for j1 in 0..3 {
                for j3 in 0..3 {
                    let prod: u64 = (0..3)
                        .map(|j2| u64::from(a2.get(i, j2) && a1.get(j2, j3)))
                        .sum();
                    assert_eq!(c.get(i, j1, j3), u64::from(a1.get(i, j1)) * prod);
                }
            }
        }
    }

    #[test]
    fn saturating_matches_bigint_threshold() {
        let spec = golden();
        let (sat, _) = gamma_rows::<Saturating>(&spec, 6);
        let table = gamma_sequence(&spec, 6);
        for i in 0..2 {
            for n in 1..=6 {
                let exact = table.epsilon(i, n).to_u64().unwrap_or(u64::MAX).min(2);
                assert_eq!(u64::from(sat[i][n - 1].0), exact);
            }
        }
    }

    #[test]
    fn ln_of_large_integers() {
        assert_eq!(ln_big(&BigUint::from(1u32)), 0.0);
        let x = BigUint::from(207u32);
        assert!((ln_big(&x) - 207f64.ln()).abs() < 1e-15);
        let big = BigUint::from(3u32).pow(5000);
        assert!((ln_big(&big) - 5000.0 * 3f64.ln()).abs() < 1e-9);
    }
}
