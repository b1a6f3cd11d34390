//! Entropy of a Markov shift on the Fibonacci lattice.
//!
//! Symbols whose block count stays at one forever are inessential. Among the
//! essential ones, every way of keeping a single product term per symbol in
//! the two-step recursion gives a simple subsystem. In log space a simple
//! subsystem is linear, `theta_n = M theta_{n-1}`, and the entropy is the
//! largest `ln rho(M)` over all simple subsystems.

use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::shift::{
    gamma_rows, gamma_sequence, ln_big, recurrence_coefficients, Alphabet, MarkovFibSpec,
    Saturating, Symbol,
};

pub const DEFAULT_MAX_SUBSYSTEMS: u128 = 1_000_000;

/// `ln((1 + sqrt 5) / 2)`.
pub const LN_GOLDEN: f64 = 0.481_211_825_059_603_47;

/// The golden mean `(1 + sqrt 5) / 2`.
pub fn golden_mean() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolClass {
    /// Removed by viability pruning.
    Dead,
    /// Roots exactly one block at every height.
    Inessential,
    /// Roots at least two blocks at some height.
    Essential,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolClassification {
    classes: Vec<SymbolClass>,
    /// Height at which the set of single-block symbols stopped changing.
    pub settled_at: usize,
}

impl SymbolClassification {
    pub fn class(&self, s: Symbol) -> SymbolClass {
        self.classes[s]
    }

    pub fn classes(&self) -> &[SymbolClass] {
        &self.classes
    }

    pub fn essential(&self) -> Vec<Symbol> {
        self.with_class(SymbolClass::Essential)
    }

    pub fn inessential(&self) -> Vec<Symbol> {
        self.with_class(SymbolClass::Inessential)
    }

    fn with_class(&self, class: SymbolClass) -> Vec<Symbol> {
        (0..self.classes.len()).filter(|&s| self.classes[s] == class).collect()
    }
}

/// Splits the alphabet into dead, inessential and essential symbols.
///
/// Runs the block-count recursion with counts saturated at two. The set
/// `S_n` of symbols with a single `n`-block is nonincreasing in `n` and
/// `S_{n+1}` depends only on `S_n` and `S_{n-1}`, so three equal consecutive
/// sets mean it has settled.
pub fn classify_symbols(spec: &MarkovFibSpec) -> Result<SymbolClassification> {
    let spec = spec.ensure_pruned()?;
    let k = spec.k();
    let limit = 2 * k + 8;
    let (eps, _) = gamma_rows::<Saturating>(&spec, limit);
    let single = |n: usize| -> Vec<bool> { (0..k).map(|i| eps[i][n - 1] == Saturating(1)).collect() };
    let mut settled_at = limit;
    for n in 3..=limit {
        if single(n) == single(n - 1) && single(n - 1) == single(n - 2) {
            settled_at = n;
            break;
        }
    }
    debug_assert!(settled_at < limit, "single-block set failed to settle");
    let stable = single(settled_at);
    let classes = (0..k)
        .map(|i| {
            if !spec.is_live(i) {
                SymbolClass::Dead
            } else if stable[i] {
                SymbolClass::Inessential
            } else {
                SymbolClass::Essential
            }
        })
        .collect();
    Ok(SymbolClassification { classes, settled_at })
}

/// One product term `gamma(lag1, n-1) * gamma(lag2, n-2)` of the two-step
/// recursion. `None` marks an inessential factor, which is constantly one
/// and so drops out in log space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub lag1: Option<Symbol>,
    pub lag2: Option<Symbol>,
}

/// A choice of one term per essential symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleSubsystem {
    /// Essential symbols, ascending. Position in this list is the block
    /// index in the adjacency matrix.
    pub symbols: Vec<Symbol>,
    pub terms: Vec<Term>,
}

impl SimpleSubsystem {
    pub fn term_for(&self, s: Symbol) -> Option<Term> {
        self.symbols.iter().position(|&x| x == s).map(|p| self.terms[p])
    }

    /// Log-space transition matrix over
    /// `(ln g_{s1,n}, ln g_{s1,n-1}, ln g_{s2,n}, ...)`.
    pub fn adjacency_matrix(&self) -> AdjacencyMatrix {
        let k = self.symbols.len();
        let pos = |s: Symbol| {
            self.symbols
                .iter()
                .position(|&x| x == s)
                .expect("term refers to a symbol outside the subsystem")
        };
        let dim = 2 * k;
        let mut entries = vec![0u32; dim * dim];
        for (p, term) in self.terms.iter().enumerate() {
            let row = 2 * p;
            if let Some(j1) = term.lag1 {
                entries[row * dim + 2 * pos(j1)] += 1;
            }
            if let Some(j3) = term.lag2 {
                entries[row * dim + 2 * pos(j3) + 1] += 1;
            }
            entries[(row + 1) * dim + row] = 1;
        }
        AdjacencyMatrix { dim, entries }
    }

    pub fn describe(&self, alphabet: &Alphabet) -> String {
        let label = |s: Option<Symbol>| s.map_or("·".to_string(), |s| alphabet.label(s).to_string());
        self.symbols
            .iter()
            .zip(&self.terms)
            .map(|(&s, t)| format!("{} -> ({}, {})", alphabet.label(s), label(t.lag1), label(t.lag2)))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Square nonnegative integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdjacencyMatrix {
    dim: usize,
    entries: Vec<u32>,
}

impl AdjacencyMatrix {
    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        AdjacencyMatrix {
            dim,
            entries: rows.concat(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.dim + c]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.dim.max(1)).map(<[u32]>::to_vec).take(self.dim).collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows()
            .into_iter()
            .map(|r| r.into_iter().map(f64::from).collect())
            .collect()
    }
}

impl fmt::Display for AdjacencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(u32::to_string).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Candidate terms for every essential symbol, deduplicated after dropping
/// inessential factors.
fn candidate_terms(spec: &MarkovFibSpec, classification: &SymbolClassification) -> Vec<(Symbol, Vec<Term>)> {
    let coeffs = recurrence_coefficients(spec);
    let k = spec.k();
    let keep = |s: Symbol| (classification.class(s) == SymbolClass::Essential).then_some(s);
    classification
        .essential()
        .into_iter()
        .map(|i| {
            let mut terms: Vec<Term> = (0..k)
                .flat_map(|j1| (0..k).map(move |j3| (j1, j3)))
                .filter(|&(j1, j3)| coeffs.get(i, j1, j3) > 0)
                .map(|(j1, j3)| Term {
                    lag1: keep(j1),
                    lag2: keep(j3),
                })
                .collect();
            terms.sort();
            terms.dedup();
            (i, terms)
        })
        .collect()
}

/// Every simple subsystem over the essential symbols, in lexicographic
/// order of term choices (first essential symbol most significant).
pub fn enumerate_simple_subsystems(
    spec: &MarkovFibSpec,
    classification: &SymbolClassification,
    cap: u128,
) -> Result<Vec<SimpleSubsystem>> {
    let spec = spec.ensure_pruned()?;
    let candidates = candidate_terms(&spec, classification);
    if candidates.is_empty() {
        return Ok(Vec::new());
    }
    let count = candidates
        .iter()
        .try_fold(1u128, |acc, (_, t)| acc.checked_mul(t.len() as u128))
        .unwrap_or(u128::MAX);
    if count > cap {
        return Err(Error::EnumerationCap { count, cap });
    }
    let symbols: Vec<Symbol> = candidates.iter().map(|(s, _)| *s).collect();
    let mut out = Vec::with_capacity(count as usize);
    if count == 0 {
        return Ok(out);
    }
    let mut digits = vec![0usize; candidates.len()];
    loop {
        out.push(SimpleSubsystem {
            symbols: symbols.clone(),
            terms: digits.iter().zip(&candidates).map(|(&d, (_, t))| t[d]).collect(),
        });
        let mut pos = candidates.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < candidates[pos].1.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Settings for [`spectral_radius`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration {
            tol: 1e-12,
            max_iter: 100_000,
        }
    }
}

/// Spectral radius of a square nonnegative matrix.
///
/// The matrix is split into strongly connected components; the radius is the
/// largest over the irreducible diagonal blocks. Each block `B` is handled
/// by power iteration on `B + I`, which is primitive, with max-norm
/// normalization. Iteration stops once the Collatz-Wielandt bracket
/// `min (Bx)_i / x_i <= rho <= max (Bx)_i / x_i` is narrower than `tol`.
pub fn spectral_radius(matrix: &[Vec<f64>], opts: &PowerIteration) -> Result<f64> {
    let n = matrix.len();
    if matrix.iter().any(|r| r.len() != n) {
        return Err(Error::BadMatrix("matrix is not square".into()));
    }
    if matrix.iter().flatten().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::BadMatrix("matrix has a negative or non-finite entry".into()));
    }
    if opts.tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for (i, row) in matrix.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > 0.0 {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut best = 0.0f64;
    for component in tarjan_scc(&graph) {
        let idx: Vec<usize> = component.iter().map(|n| n.index()).collect();
        if idx.len() == 1 && matrix[idx[0]][idx[0]] == 0.0 {
            continue;
        }
        let block: Vec<Vec<f64>> = idx
            .iter()
            .map(|&r| idx.iter().map(|&c| matrix[r][c]).collect())
            .collect();
        best = best.max(irreducible_radius(&block, opts)?);
    }
    Ok(best)
}

fn irreducible_radius(block: &[Vec<f64>], opts: &PowerIteration) -> Result<f64> {
    let n = block.len();
    let mut x = vec![1.0f64; n];
    let (mut lower, mut upper) = (0.0, f64::INFINITY);
    for _ in 0..opts.max_iter {
        let y: Vec<f64> = (0..n)
            .map(|i| x[i] + block[i].iter().zip(&x).map(|(a, b)| a * b).sum::<f64>())
            .collect();
        lower = f64::INFINITY;
        upper = 0.0;
        for i in 0..n {
            let r = y[i] / x[i];
            lower = lower.min(r);
            upper = upper.max(r);
        }
        let scale = y.iter().copied().fold(0.0, f64::max);
        for i in 0..n {
            x[i] = y[i] / scale;
        }
        if upper - lower <= opts.tol * upper.max(1.0) {
            return Ok(0.5 * (lower + upper) - 1.0);
        }
    }
    Err(Error::NonConvergence {
        lower: lower - 1.0,
        upper: upper - 1.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyConfig {
    pub max_subsystems: u128,
    pub power: PowerIteration,
}

impl Default for EntropyConfig {
    fn default() -> Self {
        EntropyConfig {
            max_subsystems: DEFAULT_MAX_SUBSYSTEMS,
            power: PowerIteration::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsystemEvaluation {
    pub subsystem: SimpleSubsystem,
    pub matrix: AdjacencyMatrix,
    pub spectral_radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyResult {
    /// Entropy in nats.
    pub value: f64,
    /// First subsystem (in enumeration order) attaining the maximum; `None`
    /// when there are no essential symbols.
    pub witness: Option<SimpleSubsystem>,
    pub spectral_radius: f64,
    pub classification: SymbolClassification,
    pub subsystem_count: usize,
}

/// Adjacency matrix and spectral radius of every simple subsystem.
pub fn evaluate_subsystems(
    spec: &MarkovFibSpec,
    classification: &SymbolClassification,
    config: &EntropyConfig,
) -> Result<Vec<SubsystemEvaluation>> {
    enumerate_simple_subsystems(spec, classification, config.max_subsystems)?
        .into_iter()
        .map(|subsystem| {
            let matrix = subsystem.adjacency_matrix();
            let rho = spectral_radius(&matrix.to_f64(), &config.power)?;
            Ok(SubsystemEvaluation {
                subsystem,
                matrix,
                spectral_radius: rho,
            })
        })
        .collect()
}

pub fn entropy(spec: &MarkovFibSpec) -> Result<EntropyResult> {
    entropy_with(spec, &EntropyConfig::default())
}

/// Entropy as the maximum of `ln rho(M)` over simple subsystems of the
/// essential symbols. A radius at or below one means the log counts grow at
/// most linearly, so the value is clamped at zero.
pub fn entropy_with(spec: &MarkovFibSpec, config: &EntropyConfig) -> Result<EntropyResult> {
    let spec = spec.ensure_pruned()?;
    let classification = classify_symbols(&spec)?;
    let evaluations = evaluate_subsystems(&spec, &classification, config)?;
    let subsystem_count = evaluations.len();
    let mut best: Option<SubsystemEvaluation> = None;
    for ev in evaluations {
        let better = match &best {
            None => true,
            Some(b) => ev.spectral_radius > b.spectral_radius + config.power.tol,
        };
        if better {
            best = Some(ev);
        }
    }
    let (witness, rho) = match best {
        Some(ev) => (Some(ev.subsystem), ev.spectral_radius),
        None => (None, 1.0),
    };
    Ok(EntropyResult {
        value: rho.max(1.0).ln(),
        witness,
        spectral_radius: rho,
        classification,
        subsystem_count,
    })
}

/// Finite-height entropy estimators `(ln ln gamma_n / n, ln sum_i ln gamma_{i,n} / n)`.
pub fn entropy_empirical(spec: &MarkovFibSpec, n: usize) -> Result<(f64, f64)> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("estimator height {n} is below 3")));
    }
    let spec = spec.ensure_pruned()?;
    let table = gamma_sequence(&spec, n);
    let log_sum: f64 = (0..spec.k())
        .filter(|&i| spec.is_live(i))
        .map(|i| ln_big(table.epsilon(i, n)))
        .sum();
    if log_sum <= 0.0 {
        return Err(Error::DegenerateLogs);
    }
    let total = ln_big(&table.total(n));
    Ok((total.ln() / n as f64, log_sum.ln() / n as f64))
}
