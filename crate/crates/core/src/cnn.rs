//! Cellular neural networks on the Fibonacci lattice with nearest-neighbour
//! feedback `(a, a1, a2)` and threshold `z`.
//!
//! A mosaic equilibrium has every output saturated at `+1` or `-1`. Whether a
//! parent can sit at `+1` (resp. `-1`) given its children's outputs is a
//! strict half-space test, so each template induces a set of admissible local
//! patterns and hence a Markov shift.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{self, Write};

use crate::entropy::{entropy, LN_GOLDEN};
use crate::error::{Error, Result};
use crate::lattice::{support, NodeWord, RootType};
use crate::shift::{Alphabet, MarkovFibSpec, Provenance, Symbol};

/// Distance from a boundary line below which parameters count as on it.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Saturated output value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Symbol index in the `{+, -}` alphabet of [`spec_from_patterns`].
    pub fn symbol(self) -> Symbol {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn from_symbol(s: Symbol) -> Sign {
        if s == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Output pair of the two children.
pub type ChildPair = (Sign, Sign);

/// The four points of `{-1, +1}^2`.
pub const CHILD_PAIRS: [ChildPair; 4] = [
    (Sign::Plus, Sign::Plus),
    (Sign::Plus, Sign::Minus),
    (Sign::Minus, Sign::Plus),
    (Sign::Minus, Sign::Minus),
];

fn negate(v: ChildPair) -> ChildPair {
    (v.0.flip(), v.1.flip())
}

/// `f(s) = (|s + 1| - |s - 1|) / 2`.
pub fn output_function(s: f64) -> f64 {
    0.5 * ((s + 1.0).abs() - (s - 1.0).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnnTemplate {
    /// Self-feedback.
    pub a: f64,
    pub a1: f64,
    pub a2: f64,
    /// Threshold.
    pub z: f64,
}

impl CnnTemplate {
    pub fn new(a: f64, a1: f64, a2: f64, z: f64) -> Self {
        CnnTemplate { a, a1, a2, z }
    }

    /// `a1 v1 + a2 v2`.
    pub fn feedback(&self, v: ChildPair) -> f64 {
        self.a1 * v.0.value() + self.a2 * v.1.value()
    }
}

impl fmt::Display for CnnTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={} a1={} a2={} z={}", self.a, self.a1, self.a2, self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalPattern {
    pub parent: Sign,
    pub child1: Sign,
    pub child2: Sign,
}

impl fmt::Display for LocalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}, {})", self.parent, self.child1, self.child2)
    }
}

/// Admissible local patterns, split by parent output.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LocalPatternSet {
    /// Child pairs allowed under a `+1` parent.
    pub plus: BTreeSet<ChildPair>,
    /// Child pairs allowed under a `-1` parent.
    pub minus: BTreeSet<ChildPair>,
}

impl LocalPatternSet {
    pub fn children(&self, parent: Sign) -> &BTreeSet<ChildPair> {
        match parent {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }

    pub fn contains(&self, p: &LocalPattern) -> bool {
        self.children(p.parent).contains(&(p.child1, p.child2))
    }

    pub fn patterns(&self) -> impl Iterator<Item = LocalPattern> + '_ {
        Sign::ALL.into_iter().flat_map(move |parent| {
            self.children(parent).iter().map(move |&(c1, c2)| LocalPattern {
                parent,
                child1: c1,
                child2: c2,
            })
        })
    }

    pub fn len(&self) -> usize {
        self.plus.len() + self.minus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty() && self.minus.is_empty()
    }

    /// Patterns listed the way thresholds admit them: `+1` parents by
    /// decreasing feedback, then `-1` parents by increasing feedback.
    pub fn ordered(&self, t: &CnnTemplate) -> Vec<LocalPattern> {
        let key = |v: &ChildPair| CHILD_PAIRS.iter().position(|p| p == v).unwrap_or(0);
        let mut plus: Vec<ChildPair> = self.plus.iter().copied().collect();
        plus.sort_by(|x, y| t.feedback(*y).total_cmp(&t.feedback(*x)).then(key(x).cmp(&key(y))));
        let mut minus: Vec<ChildPair> = self.minus.iter().copied().collect();
        minus.sort_by(|x, y| t.feedback(*x).total_cmp(&t.feedback(*y)).then(key(x).cmp(&key(y))));
        plus.into_iter()
            .map(|v| (Sign::Plus, v))
            .chain(minus.into_iter().map(|v| (Sign::Minus, v)))
            .map(|(parent, (c1, c2))| LocalPattern {
                parent,
                child1: c1,
                child2: c2,
            })
            .collect()
    }
}

/// `[p, q]`: how many child pairs a `+1` and a `-1` parent admit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegionIndex {
    pub p: usize,
    pub q: usize,
}

impl fmt::Display for RegionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.p, self.q)
    }
}

fn sign_str(v: ChildPair) -> String {
    format!("({},{})", v.0, v.1)
}

/// Checks every strict inequality and returns the pattern set, or the first
/// line the parameters sit on.
pub fn admissible_patterns_with_tol(t: &CnnTemplate, tol: f64) -> Result<LocalPatternSet> {
    let plus_margin = t.a - 1.0 + t.z;
    let minus_margin = t.a - 1.0 - t.z;
    let mut set = LocalPatternSet::default();
    for v in CHILD_PAIRS {
        let fb = t.feedback(v);
        if (plus_margin + fb).abs() <= tol {
            return Err(Error::OnBoundary(format!("a - 1 + z = -(a1 v1 + a2 v2) at v = {}", sign_str(v))));
        }
        if (minus_margin - fb).abs() <= tol {
            return Err(Error::OnBoundary(format!("a - 1 - z = a1 v1 + a2 v2 at v = {}", sign_str(v))));
        }
        if plus_margin > -fb {
            set.plus.insert(v);
        }
        if minus_margin > fb {
            set.minus.insert(v);
        }
    }
    Ok(set)
}

pub fn admissible_patterns(t: &CnnTemplate) -> Result<LocalPatternSet> {
    admissible_patterns_with_tol(t, BOUNDARY_TOL)
}

pub fn region_index(t: &CnnTemplate) -> Result<RegionIndex> {
    let b = admissible_patterns(t)?;
    Ok(RegionIndex {
        p: b.plus.len(),
        q: b.minus.len(),
    })
}

/// Affine functional `c0 + c1 v1 + c2 v2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separator {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Separator {
    pub fn eval(&self, v: ChildPair) -> f64 {
        self.c0 + self.c1 * v.0.value() + self.c2 * v.1.value()
    }
}

const NORMALS: [(f64, f64); 16] = [
    (1.0, 0.0),
    (-1.0, 0.0),
    (0.0, 1.0),
    (0.0, -1.0),
    (1.0, 1.0),
    (1.0, -1.0),
    (-1.0, 1.0),
    (-1.0, -1.0),
    (1.0, 2.0),
    (1.0, -2.0),
    (-1.0, 2.0),
    (-1.0, -2.0),
    (2.0, 1.0),
    (2.0, -1.0),
    (-2.0, 1.0),
    (-2.0, -1.0),
];

/// Whether a line strictly separates `u` from its complement in
/// `{-1, +1}^2`. Only proper nonempty subsets qualify. Searches a fixed
/// family of normal directions, which is complete for the four corners;
/// the offset is the midpoint of the gap along the normal.
pub fn is_linearly_separable(u: &BTreeSet<ChildPair>) -> Option<Separator> {
    if u.is_empty() || u.len() == CHILD_PAIRS.len() {
        return None;
    }
    NORMALS.iter().find_map(|&(c1, c2)| {
        let proj = |v: &ChildPair| c1 * v.0.value() + c2 * v.1.value();
        let inside = u.iter().map(proj).fold(f64::INFINITY, f64::min);
        let outside = CHILD_PAIRS
            .iter()
            .filter(|v| !u.contains(v))
            .map(proj)
            .fold(f64::NEG_INFINITY, f64::max);
        (inside > outside).then(|| Separator {
            c0: -0.5 * (inside + outside),
            c1,
            c2,
        })
    })
}

/// Which realizability condition held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Realization {
    /// `-B+ ⊆ B-` and `B-` separable.
    Inv1,
    /// `-B- ⊆ B+` and `B+` separable.
    Inv2,
}

impl fmt::Display for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Realization::Inv1 => "Inv1",
            Realization::Inv2 => "Inv2",
        })
    }
}

/// Separation-property test for a pattern set. Reports the first condition
/// that holds.
pub fn realizable(b: &LocalPatternSet) -> Option<Realization> {
    let nested = |inner: &BTreeSet<ChildPair>, outer: &BTreeSet<ChildPair>| {
        inner.iter().all(|&v| outer.contains(&negate(v)))
    };
    if nested(&b.plus, &b.minus) && is_linearly_separable(&b.minus).is_some() {
        return Some(Realization::Inv1);
    }
    if nested(&b.minus, &b.plus) && is_linearly_separable(&b.plus).is_some() {
        return Some(Realization::Inv2);
    }
    None
}

/// The Markov shift over `{+, -}` whose degree-2 patterns are `b`.
pub fn spec_from_patterns(b: &LocalPatternSet) -> Result<MarkovFibSpec> {
    let triples: Vec<_> = b
        .patterns()
        .map(|p| (p.parent.symbol(), p.child1.symbol(), p.child2.symbol()))
        .collect();
    MarkovFibSpec::from_triples(
        Alphabet::new(["+", "-"]).expect("two distinct labels"),
        triples,
        Provenance::PatternSet,
    )
}

/// Closed-form entropy of a region: zero when either parent output admits
/// nothing or both admit at most one child pair, `ln g` otherwise.
pub fn entropy_formula(region: RegionIndex) -> f64 {
    if region.p.min(region.q) == 0 || region.p.max(region.q) == 1 {
        0.0
    } else {
        LN_GOLDEN
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CnnEntropy {
    pub region: RegionIndex,
    pub patterns: LocalPatternSet,
    pub formula: f64,
    pub machinery: f64,
}

impl CnnEntropy {
    pub fn value(&self) -> f64 {
        self.machinery
    }
}

/// Entropy of the network's output space, computed from the pattern set by
/// the general entropy machinery and checked against the closed form.
/// An empty shift has entropy zero.
pub fn cnn_entropy(t: &CnnTemplate) -> Result<CnnEntropy> {
    let patterns = admissible_patterns(t)?;
    let region = RegionIndex {
        p: patterns.plus.len(),
        q: patterns.minus.len(),
    };
    let formula = entropy_formula(region);
    let machinery = match spec_from_patterns(&patterns) {
        Ok(spec) => entropy(&spec)?.value,
        Err(Error::EmptyShift) => 0.0,
        Err(e) => return Err(e),
    };
    if (formula - machinery).abs() > 1e-10 {
        return Err(Error::RouteDisagreement { formula, machinery });
    }
    Ok(CnnEntropy {
        region,
        patterns,
        formula,
        machinery,
    })
}

/// Self-feedback on the critical curve `a - 1 = ||z| - m| - M`, with `m`, `M`
/// the smaller and larger of `|a1|`, `|a2|`.
pub fn critical_a(a1: f64, a2: f64, z: f64) -> f64 {
    let m = a1.abs().min(a2.abs());
    let big = a1.abs().max(a2.abs());
    1.0 + (z.abs() - m).abs() - big
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDiagramRow {
    pub a: f64,
    pub z: f64,
    pub region: RegionIndex,
    pub entropy: f64,
    /// `a - critical_a(a1, a2, z)`.
    pub critical_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhaseDiagram {
    pub rows: Vec<PhaseDiagramRow>,
    /// Grid points on a boundary line, as `(a, z)`.
    pub skipped: Vec<(f64, f64)>,
}

impl PhaseDiagram {
    pub fn regions(&self) -> BTreeSet<RegionIndex> {
        self.rows.iter().map(|r| r.region).collect()
    }
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| lo + i as f64 * step).collect()
}

/// Sweeps the `(a, z)` plane, `z` outer, `a` inner.
pub fn phase_diagram(
    a1: f64,
    a2: f64,
    a_range: (f64, f64),
    z_range: (f64, f64),
    step: f64,
) -> Result<PhaseDiagram> {
    if step.is_nan() || step <= 0.0 || step.is_infinite() {
        return Err(Error::InvalidArgument(format!("step {step} must be positive")));
    }
    if a_range.0 > a_range.1 || z_range.0 > z_range.1 {
        return Err(Error::InvalidArgument("range minimum exceeds maximum".into()));
    }
    let mut diagram = PhaseDiagram::default();
    for z in grid(z_range.0, z_range.1, step) {
        for a in grid(a_range.0, a_range.1, step) {
            let t = CnnTemplate::new(a, a1, a2, z);
            match cnn_entropy(&t) {
                Ok(e) => diagram.rows.push(PhaseDiagramRow {
                    a,
                    z,
                    region: e.region,
                    entropy: e.value(),
                    critical_distance: a - critical_a(a1, a2, z),
                }),
                Err(Error::OnBoundary(_)) => diagram.skipped.push((a, z)),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(diagram)
}

/// `%.12g`-style formatting.
pub fn format_sig12(x: f64) -> String {
    format_sig(x, 12)
}

fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CSV_HEADER: &str = "a,z,p,q,entropy_nats,critical_distance";

pub fn write_phase_csv<W: Write>(rows: &[PhaseDiagramRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            format_sig12(r.a),
            format_sig12(r.z),
            r.region.p,
            r.region.q,
            format_sig12(r.entropy),
            format_sig12(r.critical_distance)
        )?;
    }
    Ok(())
}

/// A `±1` coloring of an epsilon-rooted slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MosaicPattern {
    height: usize,
    colors: BTreeMap<NodeWord, Sign>,
}

impl MosaicPattern {
    pub fn from_fn(height: usize, mut color: impl FnMut(&NodeWord) -> Sign) -> Result<Self> {
        let slice = support(RootType::Epsilon, height)?;
        let colors = slice.nodes.into_iter().map(|w| {
            let c = color(&w);
            (w, c)
        });
        Ok(MosaicPattern {
            height,
            colors: colors.collect(),
        })
    }

    pub fn new(height: usize, colors: BTreeMap<NodeWord, Sign>) -> Result<Self> {
        let slice = support(RootType::Epsilon, height)?;
        if slice.nodes.len() != colors.len() || slice.nodes.iter().any(|w| !colors.contains_key(w)) {
            return Err(Error::InvalidArgument(format!(
                "coloring does not cover exactly the height-{height} support"
            )));
        }
        Ok(MosaicPattern { height, colors })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, w: &NodeWord) -> Option<Sign> {
        self.colors.get(w).copied()
    }

    pub fn set(&mut self, w: &NodeWord, s: Sign) {
        if let Some(c) = self.colors.get_mut(w) {
            *c = s;
        }
    }
}

/// How nodes with a single lattice child are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Degree1Semantics {
    /// The pair must extend by some viable second child (restriction of a
    /// binary-tree output).
    #[default]
    Restriction,
    /// The equilibrium inequality with the missing child's term removed.
    Intrinsic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub node: NodeWord,
    pub degree: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MosaicCheck {
    pub violations: Vec<Violation>,
}

impl MosaicCheck {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn parent_admits(t: &CnnTemplate, parent: Sign, feedback: f64) -> bool {
    match parent {
        Sign::Plus => t.a - 1.0 + t.z > -feedback,
        Sign::Minus => t.a - 1.0 - t.z > feedback,
    }
}

/// Degree-1 relation of the template under each semantics, as a map from
/// `(parent, child1)` to admissibility.
fn degree1_relation(t: &CnnTemplate, semantics: Degree1Semantics) -> BTreeSet<(Sign, Sign)> {
    match semantics {
        Degree1Semantics::Restriction => {
            let mut set = LocalPatternSet::default();
            for v in CHILD_PAIRS {
                if parent_admits(t, Sign::Plus, t.feedback(v)) {
                    set.plus.insert(v);
                }
                if parent_admits(t, Sign::Minus, t.feedback(v)) {
                    set.minus.insert(v);
                }
            }
            match spec_from_patterns(&set) {
                Ok(spec) => spec
                    .pairs()
                    .iter()
                    .map(|&(i, j)| (Sign::from_symbol(i), Sign::from_symbol(j)))
                    .collect(),
                Err(_) => BTreeSet::new(),
            }
        }
        Degree1Semantics::Intrinsic => Sign::ALL
            .into_iter()
            .flat_map(|p| Sign::ALL.into_iter().map(move |c| (p, c)))
            .filter(|&(p, c)| parent_admits(t, p, t.a1 * c.value()))
            .collect(),
    }
}

/// Checks a finite coloring against the template's equilibrium conditions.
/// Only nodes whose children all lie in the slice are checked.
pub fn verify_mosaic_pattern(t: &CnnTemplate, pattern: &MosaicPattern) -> MosaicCheck {
    verify_mosaic_pattern_with(t, pattern, Degree1Semantics::Restriction)
}

pub fn verify_mosaic_pattern_with(
    t: &CnnTemplate,
    pattern: &MosaicPattern,
    semantics: Degree1Semantics,
) -> MosaicCheck {
    let degree1 = degree1_relation(t, semantics);
    let mut violations = Vec::new();
    for (w, &parent) in &pattern.colors {
        if w.len() + 1 >= pattern.height {
            continue;
        }
        let c1 = pattern.colors[&w.child(1).expect("direction 1 always exists")];
        match w.child(2) {
            Some(w2) => {
                let c2 = pattern.colors[&w2];
                if !parent_admits(t, parent, t.feedback((c1, c2))) {
                    violations.push(Violation { node: w.clone(), degree: 2 });
                }
            }
            None => {
                if !degree1.contains(&(parent, c1)) {
                    violations.push(Violation { node: w.clone(), degree: 1 });
                }
            }
        }
    }
    MosaicCheck { violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Degree1Discrepancy {
    pub parent: Sign,
    pub child: Sign,
    pub restriction: bool,
    pub intrinsic: bool,
}

/// Degree-1 pairs on which restriction and intrinsic semantics disagree.
pub fn degree1_discrepancies(t: &CnnTemplate) -> Vec<Degree1Discrepancy> {
    let r = degree1_relation(t, Degree1Semantics::Restriction);
    let i = degree1_relation(t, Degree1Semantics::Intrinsic);
    Sign::ALL
        .into_iter()
        .flat_map(|p| Sign::ALL.into_iter().map(move |c| (p, c)))
        .filter_map(|pc| {
            let (restriction, intrinsic) = (r.contains(&pc), i.contains(&pc));
            (restriction != intrinsic).then_some(Degree1Discrepancy {
                parent: pc.0,
                child: pc.1,
                restriction,
                intrinsic,
            })
        })
        .collect()
}
