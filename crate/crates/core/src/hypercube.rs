//! Hamming balls and ρ-expansion of point sets on `{0,1}^n`.

use crate::error::{Error, Result};
use crate::model::{check_boolean_dim, cube_words, low_mask, BitPoint, Concept, Domain, TruthTable};

/// `|B_ρ(x)| = Σ_{i ≤ min(ρ,n)} C(n,i)`, exact.
pub fn ball_size(n: usize, rho: usize) -> Result<u64> {
    let overflow = || Error::Overflow(format!("ball_size({n}, {rho})"));
    let mut term: u128 = 1;
    let mut total: u128 = 1;
    for i in 0..rho.min(n) {
        term = term.checked_mul((n - i) as u128).ok_or_else(overflow)? / (i as u128 + 1);
        total = total.checked_add(term).ok_or_else(overflow)?;
    }
    u64::try_from(total).map_err(|_| overflow())
}

/// Enumerates `B_ρ(center)` by increasing distance; within a distance shell
/// the flipped coordinate sets come in lexicographic order.
#[derive(Debug, Clone)]
pub struct HammingBallIter {
    center: u32,
    n: usize,
    max_dist: usize,
    flips: Option<Vec<usize>>,
}

impl HammingBallIter {
    pub fn new(center: BitPoint, radius: usize) -> Self {
        Self::from_bits(center.bits(), center.dim(), radius)
    }

    pub(crate) fn from_bits(center: u32, n: usize, radius: usize) -> Self {
        Self {
            center,
            n,
            max_dist: radius.min(n),
            flips: Some(Vec::new()),
        }
    }

    fn advance(&mut self) {
        let Some(flips) = self.flips.as_mut() else {
            return;
        };
        let k = flips.len();
        let n = self.n;
        if let Some(i) = (0..k).rev().find(|&i| flips[i] < n - k + i) {
            flips[i] += 1;
            for j in i + 1..k {
                flips[j] = flips[j - 1] + 1;
            }
        } else if k < self.max_dist {
            *flips = (0..k + 1).collect();
        } else {
            self.flips = None;
        }
    }
}

impl Iterator for HammingBallIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        let flips = self.flips.as_ref()?;
        let z = flips.iter().fold(self.center, |acc, &i| acc ^ (1 << i));
        self.advance();
        Some(z)
    }
}

/// Flip masks for coordinates `i < 6`, whose neighbours share a word: bit `j` of a word is set
/// iff bit `i` of the position `j` is clear.
const IN_WORD_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// Subset of `{0,1}^n` stored as a `2^n`-bit membership bitmap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    n: usize,
    words: Vec<u64>,
}

impl PointSet {
    pub fn empty(n: usize) -> Result<Self> {
        check_boolean_dim(n)?;
        Ok(Self {
            n,
            words: vec![0; cube_words(n)],
        })
    }

    pub fn full(n: usize) -> Result<Self> {
        let mut s = Self::empty(n)?;
        s.words.iter_mut().for_each(|w| *w = u64::MAX);
        s.clear_tail();
        Ok(s)
    }

    pub fn from_fn(n: usize, f: impl Fn(u32) -> bool) -> Result<Self> {
        let t = TruthTable::from_fn(n, f)?;
        Ok(Self::from(t))
    }

    pub fn from_points(n: usize, points: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for p in points {
            if p & !low_mask(n) != 0 {
                return Err(Error::InvalidParameter(format!("point {p:#x} outside {{0,1}}^{n}")));
            }
            s.insert(p);
        }
        Ok(s)
    }

    /// Points where `h` and `c` disagree.
    pub fn disagreement(h: &Concept, c: &Concept) -> Result<Self> {
        require_boolean_pair(h, c)?;
        Self::from_fn(h.dim(), |x| h.eval_bits(x) != c.eval_bits(x))
    }

    fn clear_tail(&mut self) {
        if self.n < 6 {
            self.words[0] &= (1u64 << (1 << self.n)) - 1;
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.words[(x >> 6) as usize] >> (x & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: u32) {
        self.words[(x >> 6) as usize] |= 1 << (x & 63);
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(((wi as u32) << 6) | b)
            })
        })
    }

    /// One step of neighbour-OR: `s ∪ {x : d(x, s) = 1}`.
    fn expand_once(&self) -> PointSet {
        let mut out = self.words.clone();
        for i in 0..self.n {
            if i < 6 {
                let shift = 1u32 << i;
                let m = IN_WORD_MASKS[i];
                for (o, &w) in out.iter_mut().zip(&self.words) {
                    *o |= ((w & m) << shift) | ((w >> shift) & m);
                }
            } else {
                let stride = 1usize << (i - 6);
                for (j, o) in out.iter_mut().enumerate() {
                    *o |= self.words[j ^ stride];
                }
            }
        }
        PointSet {
            n: self.n,
            words: out,
        }
    }

    /// `{x : B_ρ(x) ∩ s ≠ ∅}`, computed as `ρ` rounds of neighbour-OR.
    pub fn expand(&self, rho: usize) -> PointSet {
        let mut cur = self.clone();
        for _ in 0..rho.min(self.n) {
            let next = cur.expand_once();
            if next == cur {
                break;
            }
            cur = next;
        }
        cur
    }
}

impl From<TruthTable> for PointSet {
    fn from(t: TruthTable) -> Self {
        PointSet {
            n: t.dim(),
            words: t.words().to_vec(),
        }
    }
}

impl From<PointSet> for TruthTable {
    fn from(s: PointSet) -> Self {
        TruthTable::from_words(s.n, s.words)
    }
}

/// A ρ-expansion of a region, as a free function.
pub fn expand_set(s: &PointSet, rho: usize) -> PointSet {
    s.expand(rho)
}

pub(crate) fn require_boolean_pair(h: &Concept, c: &Concept) -> Result<()> {
    if h.domain() != Domain::Boolean || c.domain() != Domain::Boolean {
        return Err(Error::DomainMismatch("expected boolean-domain concepts".into()));
    }
    h.require_same_dim(c)
}

/// First point of `B_λ(x)` (in [`HammingBallIter`] order) where `h` and `c`
/// disagree, or `None` when they coincide on the ball.
pub fn find_disagreement_in_ball(
    h: &Concept,
    c: &Concept,
    x: BitPoint,
    lambda: usize,
) -> Result<Option<BitPoint>> {
    require_boolean_pair(h, c)?;
    if x.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            found: x.dim(),
        });
    }
    Ok(HammingBallIter::new(x, lambda)
        .find(|&z| h.eval_bits(z) != c.eval_bits(z))
        .map(|z| BitPoint::from_raw(z, x.dim())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Conjunction, MonotoneConjunction};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_expand(s: &PointSet, rho: usize) -> PointSet {
        let n = s.dim();
        PointSet::from_fn(n, |x| s.iter().any(|y| (x ^ y).count_ones() as usize <= rho)).unwrap()
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(ball_size(4, 1).unwrap(), 5);
        assert_eq!(ball_size(5, 0).unwrap(), 1);
        assert_eq!(ball_size(5, 5).unwrap(), 32);
        assert_eq!(ball_size(5, 9).unwrap(), 32);
        assert_eq!(ball_size(63, 63).unwrap(), 1u64 << 63);
        assert_eq!(ball_size(20, 3).unwrap(), 1 + 20 + 190 + 1140);
        assert!(matches!(ball_size(64, 64), Err(Error::Overflow(_))));
    }

    #[test]
    fn ball_iteration_order() {
        let c = BitPoint::zeros(4).unwrap();
        let pts: Vec<u32> = HammingBallIter::new(c, 2).collect();
        assert_eq!(
            pts,
            vec![0, 0b0001, 0b0010, 0b0100, 0b1000, 0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]
        );
    }

    #[test]
    fn ball_iter_counts_match_ball_size() {
        for n in 1..=16usize {
            for rho in 0..=n {
                let c = BitPoint::new(((n * 7919) as u32) & low_mask(n), n).unwrap();
                let pts: Vec<u32> = HammingBallIter::new(c, rho).collect();
                assert_eq!(pts.len() as u64, ball_size(n, rho).unwrap());
                let mut sorted = pts.clone();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), pts.len());
                let dists: Vec<u32> = pts.iter().map(|z| (z ^ c.bits()).count_ones()).collect();
                assert!(dists.windows(2).all(|w| w[0] <= w[1]));
                assert!(dists.iter().all(|&d| d as usize <= rho));
            }
        }
    }

    #[test]
    fn unit_ball_expansion() {
        let s = PointSet::from_points(2, [0b01]).unwrap();
        let e = s.expand(1);
        assert_eq!(e.iter().collect::<Vec<_>>(), vec![0b00, 0b01, 0b11]);
        assert!(PointSet::empty(7).unwrap().expand(3).is_empty());
    }

    #[test]
    fn random_sets_match_per_point_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..5 {
            let pts: Vec<u32> = (0..20).map(|_| rng.random::<u32>() & low_mask(12)).collect();
            let s = PointSet::from_points(12, pts).unwrap();
            assert_eq!(s.expand(3), brute_expand(&s, 3));
        }
    }

    #[test]
    fn nested_prefix_conjunctions() {
        let c1: Concept = MonotoneConjunction::prefix(5, 2).unwrap().into();
        let c2: Concept = MonotoneConjunction::prefix(5, 3).unwrap().into();
        let x = BitPoint::zeros(5).unwrap();
        assert_eq!(find_disagreement_in_ball(&c1, &c2, x, 1).unwrap(), None);
        let z = find_disagreement_in_ball(&c1, &c2, x, 2).unwrap().unwrap();
        assert_eq!(z, BitPoint::from_coords(&[1, 1, 0, 0, 0]).unwrap());
        assert_eq!(find_disagreement_in_ball(&c1, &c1, x, 5).unwrap(), None);
    }

    fn arb_set(n: usize) -> impl Strategy<Value = PointSet> {
        proptest::collection::vec(0u32..(1u32 << n), 0..12)
            .prop_map(move |pts| PointSet::from_points(n, pts).unwrap())
    }

    proptest! {
        #[test]
        fn expansion_monotone_and_additive(s in (1usize..=12).prop_flat_map(arb_set), a in 0usize..5, b in 0usize..5) {
            prop_assert_eq!(s.expand(0), s.clone());
            let ea = s.expand(a);
            prop_assert!(s.is_subset(&ea));
            prop_assert!(ea.is_subset(&s.expand(a + b)));
            prop_assert_eq!(ea.expand(b), s.expand(a + b));
        }

        #[test]
        fn expansion_matches_brute_force(s in (1usize..=8).prop_flat_map(arb_set), rho in 0usize..9) {
            prop_assert_eq!(s.expand(rho), brute_expand(&s, rho));
        }

        #[test]
        fn disagreement_search_agrees_with_cube_scan(
            n in 1usize..=12, p1 in any::<u32>(), n1 in any::<u32>(), p2 in any::<u32>(), n2 in any::<u32>(),
            x in any::<u32>(), lambda in 0usize..=12,
        ) {
            let m = low_mask(n);
            // Sparse literal sets so that both labels actually occur.
            let h: Concept = Conjunction::from_masks(n, p1 & n1 & m, !p1 & n2 & p2 & m).unwrap().into();
            let c: Concept = Conjunction::from_masks(n, p2 & !n1 & m, n2 & !p2 & !n1 & m).unwrap().into();
            let x = BitPoint::new(x & m, n).unwrap();
            let found = find_disagreement_in_ball(&h, &c, x, lambda).unwrap();
            let exists = (0..(1u32 << n)).any(|z| (z ^ x.bits()).count_ones() as usize <= lambda && h.eval_bits(z) != c.eval_bits(z));
            prop_assert_eq!(found.is_some(), exists);
            if let Some(z) = found {
                prop_assert!(z.hamming(&x) as usize <= lambda);
                prop_assert_ne!(h.eval_bits(z.bits()), c.eval_bits(z.bits()));
            }
        }
    }
}
