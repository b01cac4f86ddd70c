//! Points and concept classes.
//!
//! Boolean points live in `{0,1}^n` and are packed into a `u32`; coordinate
//! `x_i` (variables are numbered `1..=n`) is stored in bit `i - 1`. Every
//! variable index in this crate, including the JSON schema, is 1-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension supported for boolean points and exact hypercube modes.
pub const MAX_BOOLEAN_DIM: usize = 30;

pub(crate) fn check_boolean_dim(n: usize) -> Result<()> {
    if (1..=MAX_BOOLEAN_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

pub fn low_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn var_mask(n: usize, vars: impl IntoIterator<Item = usize>) -> Result<u32> {
    let mut mask = 0u32;
    for i in vars {
        if i == 0 || i > n {
            return Err(Error::InvalidParameter(format!(
                "variable index {i} outside 1..={n}"
            )));
        }
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

fn mask_vars(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

/// A point of the hypercube `{0,1}^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawBitPoint")]
pub struct BitPoint {
    bits: u32,
    n: u8,
}

#[derive(Deserialize)]
struct RawBitPoint {
    bits: u32,
    n: usize,
}

impl TryFrom<RawBitPoint> for BitPoint {
    type Error = Error;
    fn try_from(raw: RawBitPoint) -> Result<Self> {
        BitPoint::new(raw.bits, raw.n)
    }
}

impl BitPoint {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        check_boolean_dim(n)?;
        if bits & !low_mask(n) != 0 {
            return Err(Error::InvalidParameter(format!(
                "bits {bits:#x} set above dimension {n}"
            )));
        }
        Ok(Self { bits, n: n as u8 })
    }

    /// Builds a point without validation. The caller guarantees the invariants.
    pub(crate) fn from_raw(bits: u32, n: usize) -> Self {
        debug_assert!(n <= MAX_BOOLEAN_DIM && bits & !low_mask(n) == 0);
        Self { bits, n: n as u8 }
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(0, n)
    }

    pub fn ones(n: usize) -> Result<Self> {
        check_boolean_dim(n)?;
        Ok(Self::from_raw(low_mask(n), n))
    }

    /// Point from 0/1 coordinates `x_1, .., x_n`.
    pub fn from_coords(coords: &[u8]) -> Result<Self> {
        let mut bits = 0u32;
        for (i, &c) in coords.iter().enumerate() {
            match c {
                0 => {}
                1 => bits |= 1 << i,
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "coordinate {c} is not 0 or 1"
                    )))
                }
            }
        }
        Self::new(bits, coords.len())
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    /// Value of `x_i` (1-based).
    pub fn coord(&self, i: usize) -> bool {
        debug_assert!(i >= 1 && i <= self.dim());
        self.bits >> (i - 1) & 1 == 1
    }

    pub fn hamming(&self, other: &BitPoint) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }

    pub fn coords(&self) -> Vec<u8> {
        (0..self.dim()).map(|i| (self.bits >> i & 1) as u8).collect()
    }
}

impl std::fmt::Display for BitPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in self.coords() {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A point in either domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Bits(BitPoint),
    Real(Vec<f64>),
}

impl Point {
    pub fn dim(&self) -> usize {
        match self {
            Point::Bits(p) => p.dim(),
            Point::Real(v) => v.len(),
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            Point::Bits(_) => Domain::Boolean,
            Point::Real(_) => Domain::Real,
        }
    }

    pub fn as_bits(&self) -> Option<BitPoint> {
        match self {
            Point::Bits(p) => Some(*p),
            Point::Real(_) => None,
        }
    }

    pub fn as_real(&self) -> Option<&[f64]> {
        match self {
            Point::Real(v) => Some(v),
            Point::Bits(_) => None,
        }
    }
}

impl From<BitPoint> for Point {
    fn from(p: BitPoint) -> Self {
        Point::Bits(p)
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point::Real(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Boolean,
    Real,
}

/// Conjunction of literals. Positive literal `x_i` is bit `i-1` of `pos`,
/// negative literal `¬x_i` is bit `i-1` of `neg`. Overlapping masks give the
/// contradictory conjunction; empty masks give the constant-one function.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConjunction", into = "RawConjunction")]
pub struct Conjunction {
    n: usize,
    pos: u32,
    neg: u32,
}

#[derive(Serialize, Deserialize)]
struct RawConjunction {
    n: usize,
    pos: Vec<usize>,
    neg: Vec<usize>,
}

impl TryFrom<RawConjunction> for Conjunction {
    type Error = Error;
    fn try_from(raw: RawConjunction) -> Result<Self> {
        Conjunction::new(raw.n, raw.pos, raw.neg)
    }
}

impl From<Conjunction> for RawConjunction {
    fn from(c: Conjunction) -> Self {
        RawConjunction {
            n: c.n,
            pos: mask_vars(c.pos),
            neg: mask_vars(c.neg),
        }
    }
}

impl Conjunction {
    pub fn new(
        n: usize,
        pos: impl IntoIterator<Item = usize>,
        neg: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        check_boolean_dim(n)?;
        Ok(Self {
            n,
            pos: var_mask(n, pos)?,
            neg: var_mask(n, neg)?,
        })
    }

    pub fn from_masks(n: usize, pos: u32, neg: u32) -> Result<Self> {
        check_boolean_dim(n)?;
        let m = low_mask(n);
        if pos & !m != 0 || neg & !m != 0 {
            return Err(Error::InvalidParameter("literal mask above dimension".into()));
        }
        Ok(Self { n, pos, neg })
    }

    /// The constant-one conjunction.
    pub fn empty(n: usize) -> Result<Self> {
        Self::from_masks(n, 0, 0)
    }

    /// The conjunction of all `2n` literals (constant zero).
    pub fn all_literals(n: usize) -> Result<Self> {
        Self::from_masks(n, low_mask(n), low_mask(n))
    }

    pub fn monotone(n: usize, vars: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(n, vars, [])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn pos_mask(&self) -> u32 {
        self.pos
    }

    pub fn neg_mask(&self) -> u32 {
        self.neg
    }

    pub fn literal_count(&self) -> u32 {
        self.pos.count_ones() + self.neg.count_ones()
    }

    #[inline]
    pub fn eval_bits(&self, x: u32) -> bool {
        x & self.pos == self.pos && x & self.neg == 0
    }

    /// Whether every literal of `self` also appears in `other`.
    pub fn literals_subset_of(&self, other: &Conjunction) -> bool {
        self.pos & !other.pos == 0 && self.neg & !other.neg == 0
    }

    /// Drops every literal falsified by `x`; returns how many were dropped.
    pub fn drop_falsified_by(&mut self, x: u32) -> u32 {
        let before = self.literal_count();
        self.pos &= x;
        self.neg &= !x;
        before - self.literal_count()
    }
}

/// Conjunction of positive literals only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMonotone", into = "RawMonotone")]
pub struct MonotoneConjunction {
    n: usize,
    vars: u32,
}

#[derive(Serialize, Deserialize)]
struct RawMonotone {
    n: usize,
    vars: Vec<usize>,
}

impl TryFrom<RawMonotone> for MonotoneConjunction {
    type Error = Error;
    fn try_from(raw: RawMonotone) -> Result<Self> {
        MonotoneConjunction::new(raw.n, raw.vars)
    }
}

impl From<MonotoneConjunction> for RawMonotone {
    fn from(c: MonotoneConjunction) -> Self {
        RawMonotone {
            n: c.n,
            vars: mask_vars(c.vars),
        }
    }
}

impl MonotoneConjunction {
    pub fn new(n: usize, vars: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_boolean_dim(n)?;
        Ok(Self {
            n,
            vars: var_mask(n, vars)?,
        })
    }

    /// `x_1 ∧ .. ∧ x_k`.
    pub fn prefix(n: usize, k: usize) -> Result<Self> {
        Self::new(n, 1..=k)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vars_mask(&self) -> u32 {
        self.vars
    }

    #[inline]
    pub fn eval_bits(&self, x: u32) -> bool {
        x & self.vars == self.vars
    }

    pub fn to_conjunction(&self) -> Conjunction {
        Conjunction {
            n: self.n,
            pos: self.vars,
            neg: 0,
        }
    }
}

/// Integer linear threshold function on the hypercube with
/// `Σ|w_i| + |bias| ≤ budget`. Labels 1 iff `w·x + bias ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLtf")]
pub struct BoundedIntLtf {
    weights: Vec<i64>,
    bias: i64,
    budget: u64,
}

#[derive(Deserialize)]
struct RawLtf {
    weights: Vec<i64>,
    bias: i64,
    budget: u64,
}

impl TryFrom<RawLtf> for BoundedIntLtf {
    type Error = Error;
    fn try_from(raw: RawLtf) -> Result<Self> {
        BoundedIntLtf::new(raw.weights, raw.bias, raw.budget)
    }
}

impl BoundedIntLtf {
    pub fn new(weights: Vec<i64>, bias: i64, budget: u64) -> Result<Self> {
        check_boolean_dim(weights.len())?;
        let sum = weights
            .iter()
            .chain(std::iter::once(&bias))
            .try_fold(0u64, |acc, w| acc.checked_add(w.unsigned_abs()))
            .ok_or_else(|| Error::Overflow("LTF weight sum".into()))?;
        if sum > budget {
            return Err(Error::WeightBudgetExceeded { sum, budget });
        }
        Ok(Self {
            weights,
            bias,
            budget,
        })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn bias(&self) -> i64 {
        self.bias
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn activation(&self, x: u32) -> i64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(i, _)| x >> i & 1 == 1)
            .map(|(_, w)| w)
            .sum::<i64>()
            + self.bias
    }

    #[inline]
    pub fn eval_bits(&self, x: u32) -> bool {
        self.activation(x) >= 0
    }
}

/// Halfspace on `ℝ^n`: labels 1 iff `a·x + a0 ≥ 0`.
///
/// A zero normal is allowed only through [`RealHalfspace::from_parts`] and
/// denotes the constant classifier with label `a0 ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealHalfspace {
    pub a: Vec<f64>,
    pub a0: f64,
}

impl RealHalfspace {
    pub fn new(a: Vec<f64>, a0: f64) -> Result<Self> {
        if a.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidParameter("halfspace normal must be nonzero".into()));
        }
        Self::from_parts(a, a0)
    }

    /// Like [`RealHalfspace::new`] but permits a zero normal.
    pub fn from_parts(a: Vec<f64>, a0: f64) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidParameter("halfspace needs n >= 1".into()));
        }
        if !a0.is_finite() || a.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("halfspace coefficients must be finite".into()));
        }
        Ok(Self { a, a0 })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn normal_norm(&self) -> f64 {
        norm(&self.a)
    }

    pub fn activation(&self, x: &[f64]) -> f64 {
        dot(&self.a, x) + self.a0
    }

    #[inline]
    pub fn eval_real(&self, x: &[f64]) -> bool {
        self.activation(x) >= 0.0
    }

    /// Signed distance of `x` to the boundary, positive on the label-1 side.
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        self.activation(x) / self.normal_norm()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Explicit boolean function stored as a `2^n`-bit table; bit `x` holds `f(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

pub(crate) fn cube_words(n: usize) -> usize {
    ((1usize << n) + 63) / 64
}

impl TruthTable {
    pub fn from_fn(n: usize, f: impl Fn(u32) -> bool) -> Result<Self> {
        check_boolean_dim(n)?;
        let mut words = vec![0u64; cube_words(n)];
        for x in 0..(1u64 << n) {
            if f(x as u32) {
                words[(x >> 6) as usize] |= 1 << (x & 63);
            }
        }
        Ok(Self { n, words })
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), cube_words(n));
        Self { n, words }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn eval_bits(&self, x: u32) -> bool {
        self.words[(x >> 6) as usize] >> (x & 63) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// The concept classes handled by the simulator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Concept {
    Conjunction(Conjunction),
    MonotoneConjunction(MonotoneConjunction),
    BoundedIntLtf(BoundedIntLtf),
    RealHalfspace(RealHalfspace),
    /// Arbitrary boolean function; used for improper hypotheses.
    TruthTable(TruthTable),
}

impl Concept {
    pub fn dim(&self) -> usize {
        match self {
            Concept::Conjunction(c) => c.dim(),
            Concept::MonotoneConjunction(c) => c.dim(),
            Concept::BoundedIntLtf(c) => c.dim(),
            Concept::RealHalfspace(c) => c.dim(),
            Concept::TruthTable(c) => c.dim(),
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            Concept::RealHalfspace(_) => Domain::Real,
            _ => Domain::Boolean,
        }
    }

    /// Label of a packed boolean point. Real halfspaces are evaluated on the
    /// embedding `{0,1}^n ⊂ ℝ^n`.
    #[inline]
    pub fn eval_bits(&self, x: u32) -> bool {
        match self {
            Concept::Conjunction(c) => c.eval_bits(x),
            Concept::MonotoneConjunction(c) => c.eval_bits(x),
            Concept::BoundedIntLtf(c) => c.eval_bits(x),
            Concept::TruthTable(c) => c.eval_bits(x),
            Concept::RealHalfspace(c) => {
                let coords: Vec<f64> = (0..c.dim()).map(|i| (x >> i & 1) as f64).collect();
                c.eval_real(&coords)
            }
        }
    }

    pub fn eval(&self, x: &Point) -> Result<bool> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        match (self, x) {
            (Concept::RealHalfspace(c), Point::Real(v)) => Ok(c.eval_real(v)),
            (Concept::RealHalfspace(_), Point::Bits(_)) => Err(Error::DomainMismatch(
                "real halfspace evaluated on a boolean point".into(),
            )),
            (_, Point::Bits(p)) => Ok(self.eval_bits(p.bits())),
            (_, Point::Real(_)) => Err(Error::DomainMismatch(
                "boolean concept evaluated on a real point".into(),
            )),
        }
    }

    /// Full truth table over `{0,1}^n` for boolean concepts.
    pub fn truth_table(&self) -> Result<TruthTable> {
        match self {
            Concept::TruthTable(t) => Ok(t.clone()),
            Concept::RealHalfspace(_) => Err(Error::DomainMismatch(
                "real halfspace has no finite truth table".into(),
            )),
            _ => TruthTable::from_fn(self.dim(), |x| self.eval_bits(x)),
        }
    }

    /// Literal view for conjunction-like concepts.
    pub fn as_conjunction(&self) -> Option<Conjunction> {
        match self {
            Concept::Conjunction(c) => Some(c.clone()),
            Concept::MonotoneConjunction(c) => Some(c.to_conjunction()),
            _ => None,
        }
    }

    pub(crate) fn require_same_dim(&self, other: &Concept) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl From<Conjunction> for Concept {
    fn from(c: Conjunction) -> Self {
        Concept::Conjunction(c)
    }
}

impl From<MonotoneConjunction> for Concept {
    fn from(c: MonotoneConjunction) -> Self {
        Concept::MonotoneConjunction(c)
    }
}

impl From<BoundedIntLtf> for Concept {
    fn from(c: BoundedIntLtf) -> Self {
        Concept::BoundedIntLtf(c)
    }
}

impl From<RealHalfspace> for Concept {
    fn from(c: RealHalfspace) -> Self {
        Concept::RealHalfspace(c)
    }
}

impl From<TruthTable> for Concept {
    fn from(c: TruthTable) -> Self {
        Concept::TruthTable(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_conj(c: &Conjunction, x: &BitPoint) -> bool {
        (1..=c.dim()).all(|i| {
            let bit = 1u32 << (i - 1);
            let pos_ok = c.pos_mask() & bit == 0 || x.coord(i);
            let neg_ok = c.neg_mask() & bit == 0 || !x.coord(i);
            pos_ok && neg_ok
        })
    }

    #[test]
    fn conjunction_literals() {
        let c: Concept = Conjunction::new(2, [1], [2]).unwrap().into();
        let x = Point::Bits(BitPoint::from_coords(&[1, 0]).unwrap());
        let y = Point::Bits(BitPoint::from_coords(&[1, 1]).unwrap());
        assert!(c.eval(&x).unwrap());
        assert!(!c.eval(&y).unwrap());
        let empty: Concept = Conjunction::empty(5).unwrap().into();
        for bits in 0..32 {
            assert!(empty.eval(&Point::Bits(BitPoint::new(bits, 5).unwrap())).unwrap());
        }
    }

    #[test]
    fn contradictory_conjunction_is_zero() {
        let c = Conjunction::new(3, [2], [2]).unwrap();
        assert!((0..8).all(|x| !c.eval_bits(x)));
        assert!((0..8).all(|x| !Conjunction::all_literals(3).unwrap().eval_bits(x)));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let c: Concept = Conjunction::empty(3).unwrap().into();
        let x = Point::Bits(BitPoint::zeros(4).unwrap());
        assert!(matches!(c.eval(&x), Err(Error::DimensionMismatch { .. })));
        let h: Concept = RealHalfspace::new(vec![1.0, 0.0], 0.0).unwrap().into();
        assert!(matches!(
            h.eval(&Point::Bits(BitPoint::zeros(2).unwrap())),
            Err(Error::DomainMismatch(_))
        ));
    }

    #[test]
    fn bitpoint_rejects_high_bits() {
        assert!(BitPoint::new(0b100, 2).is_err());
        assert!(BitPoint::new(0, 31).is_err());
        assert!(BitPoint::new(0, 0).is_err());
        assert_eq!(BitPoint::ones(3).unwrap().bits(), 0b111);
    }

    #[test]
    fn ltf_budget_enforced() {
        assert!(BoundedIntLtf::new(vec![1, -2, 0], 1, 4).is_ok());
        assert!(matches!(
            BoundedIntLtf::new(vec![1, -2, 0], 2, 4),
            Err(Error::WeightBudgetExceeded { sum: 5, budget: 4 })
        ));
        let f = BoundedIntLtf::new(vec![1, 0], -1, 2).unwrap();
        assert!(f.eval_bits(0b01));
        assert!(!f.eval_bits(0b10));
    }

    #[test]
    fn halfspace_sign_zero_is_positive() {
        let h = RealHalfspace::new(vec![1.0, 0.0], 0.0).unwrap();
        assert!(h.eval_real(&[0.0, 5.0]));
        assert!(!h.eval_real(&[-1e-300, 0.0]));
        assert!(RealHalfspace::new(vec![0.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn json_schema_uses_one_based_literals() {
        let c: Concept = Conjunction::new(4, [1, 3], [2]).unwrap().into();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"class":"conjunction","n":4,"pos":[1,3],"neg":[2]}"#);
        let back: Concept = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        let bad = r#"{"class":"bounded_int_ltf","weights":[3,3],"bias":0,"budget":4}"#;
        assert!(serde_json::from_str::<Concept>(bad).is_err());
        let p: Point = serde_json::from_str(r#"{"bits":5,"n":3}"#).unwrap();
        assert_eq!(p, Point::Bits(BitPoint::new(5, 3).unwrap()));
        let q: Point = serde_json::from_str("[0.5,-1.0]").unwrap();
        assert_eq!(q, Point::Real(vec![0.5, -1.0]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn conjunction_matches_literal_checker(n in 1usize..=12, pos in any::<u32>(), neg in any::<u32>()) {
                let m = low_mask(n);
                let c = Conjunction::from_masks(n, pos & m, neg & m).unwrap();
                for bits in 0..(1u32 << n) {
                    let x = BitPoint::new(bits, n).unwrap();
                    prop_assert_eq!(c.eval_bits(bits), naive_conj(&c, &x));
                }
            }

            #[test]
            fn ltf_construction_rejects_over_budget(w in proptest::collection::vec(-5i64..=5, 1..8), b in -5i64..=5, budget in 0u64..30) {
                let sum: u64 = w.iter().map(|v| v.unsigned_abs()).sum::<u64>() + b.unsigned_abs();
                prop_assert_eq!(BoundedIntLtf::new(w, b, budget).is_ok(), sum <= budget);
            }
        }
    }
}
