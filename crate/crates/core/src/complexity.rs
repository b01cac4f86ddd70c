//! Brute-force VC, robust VC and Littlestone dimensions of explicit classes.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::hypercube::PointSet;
use crate::model::{check_boolean_dim, BoundedIntLtf, Concept, Conjunction, TruthTable};

pub const MAX_VC_DOMAIN: usize = 1 << 20;
pub const MAX_LIT_CLASS: usize = 4096;
pub const MAX_LIT_DOMAIN: usize = 1 << 14;
pub const DEFAULT_VC_BUDGET: u64 = 20_000_000;
pub const DEFAULT_LIT_BUDGET: u64 = 2_000_000;

fn floor_log2(k: usize) -> usize {
    if k <= 1 {
        0
    } else {
        (usize::BITS - 1 - k.leading_zeros()) as usize
    }
}

/// Finite class of boolean functions on `{0,1}^n`, restricted to a domain of
/// cube points. Concepts that agree on the domain are kept once, in first-seen
/// order.
#[derive(Debug, Clone)]
pub struct ExplicitClass {
    n: usize,
    domain: Vec<u32>,
    full_cube: bool,
    tables: Vec<TruthTable>,
}

impl ExplicitClass {
    pub fn from_tables(n: usize, tables: impl IntoIterator<Item = TruthTable>) -> Result<Self> {
        check_boolean_dim(n)?;
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for t in tables {
            if t.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: t.dim(),
                });
            }
            if seen.insert(t.clone()) {
                kept.push(t);
            }
        }
        Ok(Self {
            n,
            domain: (0..1u32 << n).collect(),
            full_cube: true,
            tables: kept,
        })
    }

    pub fn from_concepts<'a>(n: usize, concepts: impl IntoIterator<Item = &'a Concept>) -> Result<Self> {
        let tables = concepts
            .into_iter()
            .map(|c| {
                if c.dim() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: c.dim(),
                    });
                }
                c.truth_table()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_tables(n, tables)
    }

    /// Every conjunction on `n` variables, including the contradictory one.
    pub fn all_conjunctions(n: usize) -> Result<Self> {
        check_boolean_dim(n)?;
        let mut tables = Vec::new();
        let mut pos_neg = vec![0u8; n];
        loop {
            let mut pos = 0;
            let mut neg = 0;
            for (i, s) in pos_neg.iter().enumerate() {
                match s {
                    1 => pos |= 1 << i,
                    2 => neg |= 1 << i,
                    _ => {}
                }
            }
            let c = Conjunction::from_masks(n, pos, neg)?;
            tables.push(TruthTable::from_fn(n, |x| c.eval_bits(x))?);
            // Base-3 counter over literal choices.
            match pos_neg.iter().position(|&s| s < 2) {
                Some(i) => {
                    pos_neg[i] += 1;
                    pos_neg[..i].iter_mut().for_each(|s| *s = 0);
                }
                None => break,
            }
        }
        tables.push(TruthTable::from_fn(n, |_| false)?);
        Self::from_tables(n, tables)
    }

    pub fn all_bounded_ltfs(n: usize, budget: u64) -> Result<Self> {
        let ltfs = enumerate_bounded_ltfs(n, budget)?;
        Self::from_tables(n, ltfs.iter().map(|l| TruthTable::from_fn(n, |x| l.eval_bits(x)).unwrap()))
    }

    /// Restricts the class to `points`, merging concepts that coincide there.
    pub fn with_domain(self, points: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut domain: Vec<u32> = points.into_iter().collect();
        domain.sort_unstable();
        domain.dedup();
        if let Some(&p) = domain.iter().find(|&&p| p >= 1u32 << self.n) {
            return Err(Error::InvalidParameter(format!("domain point {p:#x} outside the cube")));
        }
        let mut seen = HashSet::new();
        let tables = self
            .tables
            .into_iter()
            .filter(|t| seen.insert(domain.iter().map(|&p| t.eval_bits(p)).collect::<Vec<_>>()))
            .collect();
        Ok(Self {
            full_cube: domain.len() == 1usize << self.n,
            n: self.n,
            domain,
            tables,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn domain(&self) -> &[u32] {
        &self.domain
    }

    pub fn tables(&self) -> &[TruthTable] {
        &self.tables
    }

    pub fn is_full_cube(&self) -> bool {
        self.full_cube
    }

    /// For each domain point, the bitset of concepts labelling it 1.
    fn columns(&self) -> Vec<Vec<u64>> {
        let words = self.tables.len().div_ceil(64);
        self.domain
            .iter()
            .map(|&p| {
                let mut col = vec![0u64; words];
                for (i, t) in self.tables.iter().enumerate() {
                    if t.eval_bits(p) {
                        col[i / 64] |= 1 << (i % 64);
                    }
                }
                col
            })
            .collect()
    }
}

/// All integer `(w, b)` with `Σ|w_i| + |b| ≤ W`.
pub fn enumerate_bounded_ltfs(n: usize, budget: u64) -> Result<Vec<BoundedIntLtf>> {
    check_boolean_dim(n)?;
    fn rec(n: usize, budget: u64, rest: i64, cur: &mut Vec<i64>, out: &mut Vec<BoundedIntLtf>) -> Result<()> {
        if cur.len() == n + 1 {
            let b = cur[n];
            out.push(BoundedIntLtf::new(cur[..n].to_vec(), b, budget)?);
            return Ok(());
        }
        for v in -rest..=rest {
            cur.push(v);
            rec(n, budget, rest - v.abs(), cur, out)?;
            cur.pop();
        }
        Ok(())
    }
    let w = i64::try_from(budget).map_err(|_| Error::Overflow("weight budget".into()))?;
    let mut out = Vec::new();
    rec(n, budget, w, &mut Vec::with_capacity(n + 1), &mut out)?;
    Ok(out)
}

/// Exact VC dimension by depth-first search over shattered sets.
pub fn vc_dim(class: &ExplicitClass) -> Result<usize> {
    vc_dim_with_budget(class, DEFAULT_VC_BUDGET)
}

/// As [`vc_dim`], failing with the best lower bound after `budget` shatter checks.
pub fn vc_dim_with_budget(class: &ExplicitClass, budget: u64) -> Result<usize> {
    if class.domain.len() > MAX_VC_DOMAIN {
        return Err(Error::InvalidParameter(format!(
            "domain of {} points exceeds the shatter-search limit",
            class.domain.len()
        )));
    }
    if class.len() <= 1 {
        return Ok(0);
    }
    let cap = floor_log2(class.len());
    // Only points carrying both labels can belong to a shattered set.
    let points: Vec<u32> = class
        .domain
        .iter()
        .copied()
        .filter(|&p| {
            let ones = class.tables.iter().filter(|t| t.eval_bits(p)).count();
            ones > 0 && ones < class.len()
        })
        .collect();

    struct Search<'a> {
        tables: &'a [TruthTable],
        points: &'a [u32],
        cap: usize,
        best: usize,
        checks: u64,
        budget: u64,
    }

    impl Search<'_> {
        fn dfs(&mut self, start: usize, depth: usize, patterns: &[u64]) -> Result<()> {
            for j in start..self.points.len() {
                if self.best >= self.cap || depth + (self.points.len() - j) <= self.best {
                    return Ok(());
                }
                self.checks += 1;
                if self.checks > self.budget {
                    return Err(Error::BudgetExceeded { lower_bound: self.best });
                }
                let p = self.points[j];
                let next: Vec<u64> = patterns
                    .iter()
                    .zip(self.tables)
                    .map(|(pat, t)| pat << 1 | t.eval_bits(p) as u64)
                    .collect();
                let mut distinct = next.clone();
                distinct.sort_unstable();
                distinct.dedup();
                if distinct.len() == 1usize << (depth + 1) {
                    self.best = self.best.max(depth + 1);
                    self.dfs(j + 1, depth + 1, &next)?;
                }
            }
            Ok(())
        }
    }

    let mut s = Search {
        tables: &class.tables,
        points: &points,
        cap,
        best: 0,
        checks: 0,
        budget,
    };
    s.dfs(0, 0, &vec![0; class.len()])?;
    Ok(s.best)
}

/// `{c ⊕ h : c ∈ C, h ∈ H}` with each indicator expanded by `ρ`.
pub fn expanded_disagreement_class(c: &ExplicitClass, h: &ExplicitClass, rho: usize) -> Result<ExplicitClass> {
    if c.n != h.n {
        return Err(Error::DimensionMismatch {
            expected: c.n,
            found: h.n,
        });
    }
    if c.n > 16 {
        return Err(Error::UnsupportedDimension(c.n));
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for ct in &c.tables {
        for ht in &h.tables {
            let words: Vec<u64> = ct.words().iter().zip(ht.words()).map(|(a, b)| a ^ b).collect();
            let t: TruthTable = PointSet::from(TruthTable::from_words(c.n, words)).expand(rho).into();
            if seen.insert(t.clone()) {
                out.push(t);
            }
        }
    }
    ExplicitClass::from_tables(c.n, out)
}

/// `RVC_ρ(C, H) = VC((C ⊕ H)_ρ)` on the full cube.
pub fn rvc_dim(c: &ExplicitClass, h: &ExplicitClass, rho: usize) -> Result<usize> {
    vc_dim(&expanded_disagreement_class(c, h, rho)?)
}

/// A subset of an [`ExplicitClass`], as a bitset over concept indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VersionSpace(Vec<u64>);

impl VersionSpace {
    pub fn full(class: &ExplicitClass) -> Self {
        let k = class.len();
        let mut words = vec![u64::MAX; k.div_ceil(64)];
        if k % 64 != 0 {
            *words.last_mut().unwrap() = (1u64 << (k % 64)) - 1;
        }
        VersionSpace(words)
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.0.len() * 64).filter(|&i| self.0[i / 64] >> (i % 64) & 1 == 1)
    }

    fn split(&self, col: &[u64]) -> (VersionSpace, VersionSpace) {
        let zero = self.0.iter().zip(col).map(|(v, c)| v & !c).collect();
        let one = self.0.iter().zip(col).map(|(v, c)| v & c).collect();
        (VersionSpace(zero), VersionSpace(one))
    }
}

/// Memoized Littlestone-dimension recursion
/// `Lit(V) = max_x 1 + min(Lit(V_x^0), Lit(V_x^1))` over splitting points.
#[derive(Debug)]
pub struct LittlestoneSolver<'a> {
    class: &'a ExplicitClass,
    columns: Vec<Vec<u64>>,
    index: HashMap<u32, usize>,
    memo: HashMap<VersionSpace, usize>,
    nodes: u64,
    budget: u64,
}

impl<'a> LittlestoneSolver<'a> {
    pub fn new(class: &'a ExplicitClass) -> Result<Self> {
        Self::with_budget(class, DEFAULT_LIT_BUDGET)
    }

    pub fn with_budget(class: &'a ExplicitClass, budget: u64) -> Result<Self> {
        if class.len() > MAX_LIT_CLASS || class.domain.len() > MAX_LIT_DOMAIN {
            return Err(Error::InvalidParameter(format!(
                "Littlestone search limited to {MAX_LIT_CLASS} concepts over {MAX_LIT_DOMAIN} points, got {} over {}",
                class.len(),
                class.domain.len()
            )));
        }
        let index = if class.full_cube {
            HashMap::new()
        } else {
            class.domain.iter().enumerate().map(|(i, &p)| (p, i)).collect()
        };
        Ok(Self {
            columns: class.columns(),
            class,
            index,
            memo: HashMap::new(),
            nodes: 0,
            budget,
        })
    }

    pub fn class(&self) -> &ExplicitClass {
        self.class
    }

    fn column_of(&self, x: u32) -> Result<&[u64]> {
        let j = if self.class.full_cube {
            Some(x as usize).filter(|&j| j < self.columns.len())
        } else {
            self.index.get(&x).copied()
        };
        j.map(|j| self.columns[j].as_slice())
            .ok_or_else(|| Error::InvalidParameter(format!("point {x:#x} outside the class domain")))
    }

    /// Splits `v` by the label each member assigns to `x`: `(V^0, V^1)`.
    pub fn split_at(&self, v: &VersionSpace, x: u32) -> Result<(VersionSpace, VersionSpace)> {
        Ok(v.split(self.column_of(x)?))
    }

    pub fn lit(&mut self, v: &VersionSpace) -> Result<usize> {
        let count = v.count();
        if count <= 1 {
            return Ok(0);
        }
        if let Some(&d) = self.memo.get(v) {
            return Ok(d);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { lower_bound: 0 });
        }
        let cap = floor_log2(count);
        let mut splits: Vec<(usize, VersionSpace, VersionSpace)> = Vec::new();
        let mut seen = HashSet::new();
        for col in &self.columns {
            let (v0, v1) = v.split(col);
            let (c0, c1) = (v0.count(), v1.count());
            if c0 == 0 || c1 == 0 {
                continue;
            }
            let (small, large) = if c0 <= c1 { (v0, v1) } else { (v1, v0) };
            if seen.insert(small.clone()) {
                splits.push((1 + floor_log2(c0.min(c1)), small, large));
            }
        }
        splits.sort_by(|a, b| b.0.cmp(&a.0));
        let mut best = 0;
        for (bound, small, large) in splits {
            if bound <= best {
                break;
            }
            let ls = self.lit(&small)?;
            if 1 + ls <= best {
                continue;
            }
            let ll = self.lit(&large)?;
            best = best.max(1 + ls.min(ll));
            if best >= cap {
                break;
            }
        }
        self.memo.insert(v.clone(), best);
        Ok(best)
    }

    /// Littlestone dimension of a possibly empty version space, with
    /// `Lit(∅) = −1`.
    pub fn lit_signed(&mut self, v: &VersionSpace) -> Result<i64> {
        if v.is_empty() {
            Ok(-1)
        } else {
            Ok(self.lit(v)? as i64)
        }
    }

    /// The SOA prediction at `x`: the label whose sub-version-space has the
    /// larger Littlestone dimension, ties to 1.
    pub fn predict(&mut self, v: &VersionSpace, x: u32) -> Result<bool> {
        let (v0, v1) = self.split_at(v, x)?;
        Ok(self.lit_signed(&v1)? >= self.lit_signed(&v0)?)
    }
}

/// Exact Littlestone dimension.
pub fn littlestone_dim(class: &ExplicitClass) -> Result<usize> {
    littlestone_dim_with_budget(class, DEFAULT_LIT_BUDGET)
}

/// As [`littlestone_dim`], failing after `budget` distinct version spaces.
/// The reported lower bound is the best depth certified at the root.
pub fn littlestone_dim_with_budget(class: &ExplicitClass, budget: u64) -> Result<usize> {
    let mut solver = LittlestoneSolver::with_budget(class, budget)?;
    let root = VersionSpace::full(class);
    match solver.lit(&root) {
        Err(Error::BudgetExceeded { .. }) => {
            // Any split with both sides fully solved certifies a lower bound.
            let mut lb = usize::from(class.len() > 1);
            for col in &solver.columns {
                let (v0, v1) = root.split(col);
                if let (Some(a), Some(b)) = (solver.memo.get(&v0), solver.memo.get(&v1)) {
                    lb = lb.max(1 + (*a).min(*b));
                }
            }
            Err(Error::BudgetExceeded { lower_bound: lb })
        }
        r => r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn constants(n: usize) -> ExplicitClass {
        ExplicitClass::from_tables(n, [TruthTable::from_fn(n, |_| false).unwrap(), TruthTable::from_fn(n, |_| true).unwrap()])
            .unwrap()
    }

    fn random_class(n: usize, seeds: &[u64]) -> ExplicitClass {
        let mask = if n >= 6 { u64::MAX } else { (1u64 << (1 << n)) - 1 };
        ExplicitClass::from_tables(
            n,
            seeds.iter().map(|&s| {
                let w = s & mask;
                TruthTable::from_fn(n, |x| w >> x & 1 == 1).unwrap()
            }),
        )
        .unwrap()
    }

    #[test]
    fn trivial_classes() {
        let k = constants(3);
        assert_eq!(vc_dim(&k).unwrap(), 1);
        assert_eq!(littlestone_dim(&k).unwrap(), 1);
        let single = ExplicitClass::from_tables(3, [TruthTable::from_fn(3, |x| x == 2).unwrap()]).unwrap();
        assert_eq!(vc_dim(&single).unwrap(), 0);
        assert_eq!(littlestone_dim(&single).unwrap(), 0);
    }

    #[test]
    fn conjunction_class_values() {
        // Pinned by exhaustive enumeration.
        let c2 = ExplicitClass::all_conjunctions(2).unwrap();
        assert_eq!(c2.len(), 10);
        assert_eq!(vc_dim(&c2).unwrap(), 2);
        assert_eq!(littlestone_dim(&c2).unwrap(), 3);
        let nonempty = ExplicitClass::from_tables(2, c2.tables().iter().filter(|t| t.count_ones() > 0).cloned()).unwrap();
        assert_eq!(nonempty.len(), 9);
        assert_eq!(vc_dim(&nonempty).unwrap(), 2);

        let c3 = ExplicitClass::all_conjunctions(3).unwrap();
        assert_eq!(c3.len(), 28);
        assert_eq!(vc_dim(&c3).unwrap(), 3);
        assert_eq!(littlestone_dim(&c3).unwrap(), 4);

        let c4 = ExplicitClass::all_conjunctions(4).unwrap();
        assert_eq!(c4.len(), 82);
        assert_eq!(littlestone_dim(&c4).unwrap(), 5);
    }

    #[test]
    fn conjunction_rvc_sweep() {
        let c3 = ExplicitClass::all_conjunctions(3).unwrap();
        let expected = [(6, 190), (4, 42), (2, 10), (1, 2)];
        for (rho, &(rvc, size)) in expected.iter().enumerate() {
            let e = expanded_disagreement_class(&c3, &c3, rho).unwrap();
            assert_eq!(e.len(), size, "rho = {rho}");
            assert_eq!(vc_dim(&e).unwrap(), rvc, "rho = {rho}");
        }
        let c2 = ExplicitClass::all_conjunctions(2).unwrap();
        let sweep: Vec<usize> = (0..=2).map(|r| rvc_dim(&c2, &c2, r).unwrap()).collect();
        assert_eq!(sweep, vec![4, 2, 1]);
    }

    #[test]
    fn ltf_enumeration() {
        let params = enumerate_bounded_ltfs(3, 3).unwrap();
        assert_eq!(params.len(), 129);
        let class = ExplicitClass::all_bounded_ltfs(3, 3).unwrap();
        assert_eq!(class.len(), 36);
        assert!((class.len() as f64).ln() <= crate::sample_size::ltf_log_class_size_bound(3, 3));
    }

    #[test]
    fn ball_restricted_littlestone() {
        // Conjunctions restricted to B_ρ(x): Lit = 1 at ρ = 0, n at ρ = 1,
        // n + 1 once the ball covers enough of the cube.
        for (n, rho, lit) in [(3, 1, 3), (3, 2, 4), (4, 1, 4), (4, 2, 5), (4, 3, 5), (5, 1, 5), (5, 2, 6), (6, 0, 1), (6, 1, 6)] {
            for x in [0u32, 1, (1 << n) - 1] {
                let ball = crate::hypercube::HammingBallIter::from_bits(x, n, rho);
                let class = ExplicitClass::all_conjunctions(n).unwrap().with_domain(ball).unwrap();
                let d = littlestone_dim(&class).unwrap();
                assert_eq!(d, lit, "n = {n}, rho = {rho}, x = {x}");
                assert!(d <= floor_log2(class.len()));
            }
        }
    }

    #[test]
    fn budgets_report_lower_bounds() {
        let c4 = ExplicitClass::all_conjunctions(4).unwrap();
        match vc_dim_with_budget(&c4, 3) {
            Err(Error::BudgetExceeded { lower_bound }) => assert!(lower_bound <= 4),
            other => panic!("{other:?}"),
        }
        match littlestone_dim_with_budget(&c4, 2) {
            Err(Error::BudgetExceeded { lower_bound }) => assert!(lower_bound <= 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn soa_prediction_ties_to_one() {
        let k = constants(2);
        let mut s = LittlestoneSolver::new(&k).unwrap();
        let v = VersionSpace::full(&k);
        assert!(s.predict(&v, 0).unwrap());
        let (v0, _) = s.split_at(&v, 0).unwrap();
        assert!(!s.predict(&v0, 3).unwrap());
    }

    proptest! {
        #[test]
        fn vc_below_lit_below_log(n in 1usize..=4, seeds in proptest::collection::vec(any::<u64>(), 1..64)) {
            let class = random_class(n, &seeds);
            let vc = vc_dim(&class).unwrap();
            let lit = littlestone_dim(&class).unwrap();
            prop_assert!(vc <= lit);
            prop_assert!(lit <= floor_log2(class.len()));
        }

        #[test]
        fn rvc_at_full_radius_is_at_most_one(n in 1usize..=5, seeds in proptest::collection::vec(any::<u64>(), 1..12)) {
            let class = random_class(n, &seeds);
            let r = rvc_dim(&class, &class, n).unwrap();
            prop_assert!(r <= 1);
            prop_assert_eq!(r == 1, class.len() > 1);
        }

        #[test]
        fn rvc_zero_is_symmetric_difference_vc(n in 1usize..=6, a in proptest::collection::vec(any::<u64>(), 1..6), b in proptest::collection::vec(any::<u64>(), 1..6)) {
            let (c, h) = (random_class(n, &a), random_class(n, &b));
            let symdiff = ExplicitClass::from_tables(n, c.tables().iter().flat_map(|ct| h.tables().iter().map(move |ht| {
                TruthTable::from_fn(n, |x| ct.eval_bits(x) != ht.eval_bits(x)).unwrap()
            }))).unwrap();
            prop_assert_eq!(rvc_dim(&c, &h, 0).unwrap(), vc_dim(&symdiff).unwrap());
        }
    }
}
