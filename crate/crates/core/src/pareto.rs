//! Objective-space machinery shared by every optimizer.
//!
//! All objectives are minimized. Problems with maximization objectives store
//! them negated so a single comparison path covers both.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anything that carries an objective vector.
pub trait Objectives {
    fn objectives(&self) -> &[f64];
}

impl Objectives for [f64] {
    fn objectives(&self) -> &[f64] {
        self
    }
}

impl Objectives for Vec<f64> {
    fn objectives(&self) -> &[f64] {
        self
    }
}

impl<const N: usize> Objectives for [f64; N] {
    fn objectives(&self) -> &[f64] {
        self
    }
}

impl<T: Objectives + ?Sized> Objectives for &T {
    fn objectives(&self) -> &[f64] {
        (**self).objectives()
    }
}

/// An evaluated decision vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
}

impl Solution {
    pub fn new(x: Vec<f64>, f: Vec<f64>) -> Self {
        Self { x, f }
    }
}

impl Objectives for Solution {
    fn objectives(&self) -> &[f64] {
        &self.f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dominance {
    FirstDominates,
    SecondDominates,
    NonDominated,
    Equal,
}

/// Pareto comparison of two objective vectors.
pub fn compare(a: &[f64], b: &[f64]) -> Result<Dominance> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("objective vector"));
    }
    Ok(relation(a, b))
}

/// Unchecked variant of [`compare`] for hot loops.
pub(crate) fn relation(a: &[f64], b: &[f64]) -> Dominance {
    debug_assert_eq!(a.len(), b.len());
    let mut a_better = false;
    let mut b_better = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            a_better = true;
        } else if y < x {
            b_better = true;
        }
        if a_better && b_better {
            return Dominance::NonDominated;
        }
    }
    match (a_better, b_better) {
        (true, false) => Dominance::FirstDominates,
        (false, true) => Dominance::SecondDominates,
        (false, false) => Dominance::Equal,
        (true, true) => unreachable!(),
    }
}

/// `true` when `a` is no worse than `b` everywhere and strictly better somewhere.
#[inline]
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Total lexicographic order on objective vectors, used for deterministic tie-breaks.
pub fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// One Pareto front, as indices into the ranked population (ascending).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Front {
    pub rank: usize,
    pub members: Vec<usize>,
}

/// Fast non-dominated sorting.
///
/// Returns the fronts F0, F1, ... in rank order. Every population index
/// appears in exactly one front.
pub fn pareto_rank<T: Objectives>(pop: &[T]) -> Result<Vec<Front>> {
    if pop.is_empty() {
        return Err(Error::Empty("population"));
    }
    let k = pop[0].objectives().len();
    if let Some(bad) = pop.iter().find(|p| p.objectives().len() != k) {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: bad.objectives().len(),
        });
    }

    let n = pop.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            match relation(pop[i].objectives(), pop[j].objectives()) {
                Dominance::FirstDominates => {
                    dominates_list[i].push(j);
                    dominated_by_count[j] += 1;
                }
                Dominance::SecondDominates => {
                    dominates_list[j].push(i);
                    dominated_by_count[i] += 1;
                }
                _ => {}
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates_list[i] {
                dominated_by_count[j] -= 1;
                if dominated_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(Front {
            rank: fronts.len(),
            members: current,
        });
        current = next;
    }
    Ok(fronts)
}

/// Indices of the members not dominated by any other member.
pub fn non_dominated_indices<T: Objectives>(pop: &[T]) -> Vec<usize> {
    (0..pop.len())
        .filter(|&i| {
            !pop.iter()
                .any(|other| dominates(other.objectives(), pop[i].objectives()))
        })
        .collect()
}

/// Crowding distance of every member of `front`.
///
/// Boundary members of each objective get `+inf`; interior members sum the
/// normalized gap between their neighbours. Objectives with zero range add
/// nothing to anyone. Ties within an objective are ordered by the whole
/// vector, so the result does not depend on the order of `front`.
pub fn crowding_distance<T: Objectives>(front: &[T]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let k = front[0].objectives().len();
    let mut distance = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for m in 0..k {
        order.sort_by(|&a, &b| {
            front[a].objectives()[m]
                .total_cmp(&front[b].objectives()[m])
                .then_with(|| lexicographic(front[a].objectives(), front[b].objectives()))
                .then(a.cmp(&b))
        });
        let lo = front[order[0]].objectives()[m];
        let hi = front[order[n - 1]].objectives()[m];
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        for w in order.windows(3) {
            let (prev, mid, next) = (w[0], w[1], w[2]);
            distance[mid] +=
                (front[next].objectives()[m] - front[prev].objectives()[m]) / range;
        }
    }
    distance
}

/// Index of the member with the largest crowding distance; ties go to the
/// lexicographically smallest objective vector.
pub fn most_isolated<T: Objectives>(members: &[T], crowding: &[f64]) -> Option<usize> {
    (0..members.len()).max_by(|&a, &b| {
        crowding[a]
            .total_cmp(&crowding[b])
            .then_with(|| lexicographic(members[b].objectives(), members[a].objectives()))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insertion {
    Inserted,
    Rejected,
    InsertedWithEviction,
}

impl Insertion {
    pub fn accepted(self) -> bool {
        self != Insertion::Rejected
    }
}

/// Capacity-limited set of mutually non-dominated solutions.
///
/// When full, members are truncated one at a time by smallest crowding
/// distance, recomputed after every removal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedArchive {
    capacity: usize,
    members: Vec<Solution>,
}

impl BoundedArchive {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidParameter("archive capacity must be positive".into()));
        }
        Ok(Self {
            capacity,
            members: Vec::with_capacity(capacity + 1),
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn members(&self) -> &[Solution] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Solution> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn crowding(&self) -> Vec<f64> {
        crowding_distance(&self.members)
    }

    pub fn insert(&mut self, candidate: Solution) -> Insertion {
        let mut dominated = Vec::new();
        for (i, m) in self.members.iter().enumerate() {
            match relation(&m.f, &candidate.f) {
                Dominance::FirstDominates | Dominance::Equal => return Insertion::Rejected,
                Dominance::SecondDominates => dominated.push(i),
                Dominance::NonDominated => {}
            }
        }
        for i in dominated.into_iter().rev() {
            self.members.swap_remove(i);
        }
        self.members.push(candidate);

        if self.members.len() <= self.capacity {
            return Insertion::Inserted;
        }
        while self.members.len() > self.capacity {
            self.evict_one();
        }
        Insertion::InsertedWithEviction
    }

    /// Inserts `candidate` only if it strictly dominates a current member.
    /// Such an insertion never triggers truncation.
    pub(crate) fn insert_if_dominating(&mut self, candidate: &Solution) -> bool {
        if self.members.iter().any(|m| dominates(&candidate.f, &m.f)) {
            let outcome = self.insert(candidate.clone());
            debug_assert_eq!(outcome, Insertion::Inserted);
            true
        } else {
            false
        }
    }

    fn evict_one(&mut self) {
        let crowding = self.crowding();
        let victim = (0..self.members.len())
            .min_by(|&a, &b| {
                crowding[a].total_cmp(&crowding[b]).then_with(|| {
                    lexicographic(&self.members[b].f, &self.members[a].f)
                })
            })
            .expect("archive over capacity is non-empty");
        self.members.swap_remove(victim);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sol(f: &[f64]) -> Solution {
        Solution::new(vec![], f.to_vec())
    }

    fn objective_sets(archive: &BoundedArchive) -> Vec<Vec<f64>> {
        let mut v: Vec<Vec<f64>> = archive.members().iter().map(|s| s.f.clone()).collect();
        v.sort_by(|a, b| lexicographic(a, b));
        v
    }

    #[test]
    fn dominance_examples() {
        assert_eq!(compare(&[1.0, 2.0], &[2.0, 3.0]).unwrap(), Dominance::FirstDominates);
        assert_eq!(compare(&[2.0, 3.0], &[1.0, 2.0]).unwrap(), Dominance::SecondDominates);
        assert_eq!(compare(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), Dominance::Equal);
        assert_eq!(compare(&[1.0, 3.0], &[2.0, 2.0]).unwrap(), Dominance::NonDominated);
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]));
    }

    #[test]
    fn dominance_rejects_bad_input() {
        assert!(matches!(
            compare(&[1.0, 2.0], &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(compare(&[f64::NAN, 2.0], &[1.0, 1.0]), Err(Error::NonFinite(_))));
    }

    #[test]
    fn rank_examples() {
        let single = pareto_rank(&[vec![1.0, 1.0]]).unwrap();
        assert_eq!(single, vec![Front { rank: 0, members: vec![0] }]);

        let pop = [[0.0, 0.0], [1.0, 1.0], [0.0, 2.0], [2.0, 0.0]];
        let fronts = pareto_rank(&pop).unwrap();
        assert_eq!(fronts.len(), 2);
        assert_eq!(fronts[0].members, vec![0]);
        assert_eq!(fronts[1].members, vec![1, 2, 3]);

        let antichain = [[0.0, 3.0], [1.0, 2.0], [2.0, 1.0], [3.0, 0.0]];
        assert_eq!(pareto_rank(&antichain).unwrap().len(), 1);

        let empty: [Vec<f64>; 0] = [];
        assert!(matches!(pareto_rank(&empty), Err(Error::Empty(_))));
    }

    #[test]
    fn crowding_examples() {
        assert!(crowding_distance(&[[0.0, 1.0], [1.0, 0.0]])
            .iter()
            .all(|d| d.is_infinite()));
        let d = crowding_distance(&[[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]]);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        assert_eq!(d[1], 2.0);

        // second objective is flat: only the first contributes
        let d = crowding_distance(&[[0.0, 3.0], [0.25, 3.0], [1.0, 3.0]]);
        assert_eq!(d[1], 1.0);
        let flat = crowding_distance(&[[1.0, 3.0], [1.0, 3.0], [1.0, 3.0]]);
        assert_eq!(flat, vec![0.0; 3]);
    }

    #[test]
    fn most_isolated_prefers_lexicographically_smallest() {
        let m = [[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]];
        let c = crowding_distance(&m);
        assert_eq!(most_isolated(&m, &c), Some(0));
    }

    #[test]
    fn archive_examples() {
        let mut a = BoundedArchive::new(10).unwrap();
        assert_eq!(a.insert(sol(&[1.0, 1.0])), Insertion::Inserted);
        assert_eq!(a.insert(sol(&[0.0, 0.0])), Insertion::Inserted);
        assert_eq!(objective_sets(&a), vec![vec![0.0, 0.0]]);
        assert_eq!(a.insert(sol(&[1.0, 1.0])), Insertion::Rejected);
        assert_eq!(a.insert(sol(&[0.0, 0.0])), Insertion::Rejected);
        assert_eq!(a.len(), 1);

        let mut b = BoundedArchive::new(2).unwrap();
        b.insert(sol(&[0.0, 1.0]));
        b.insert(sol(&[1.0, 0.0]));
        assert_eq!(b.insert(sol(&[0.5, 0.5])), Insertion::InsertedWithEviction);
        assert_eq!(objective_sets(&b), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn eviction_tie_removes_lexicographically_largest() {
        let mut a = BoundedArchive::new(1).unwrap();
        a.insert(sol(&[0.0, 1.0]));
        a.insert(sol(&[1.0, 0.0]));
        assert_eq!(objective_sets(&a), vec![vec![0.0, 1.0]]);
    }

    #[test]
    fn zero_capacity_is_rejected() {
        assert!(BoundedArchive::new(0).is_err());
    }

    fn vec_strategy(k: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, k)
    }

    proptest! {
        #[test]
        fn archive_holds_its_invariants(
            points in prop::collection::vec(vec_strategy(3), 1..80),
            capacity in 1usize..12,
        ) {
            let mut a = BoundedArchive::new(capacity).unwrap();
            for p in points {
                let blocked = a.members().iter().any(|m| {
                    matches!(relation(&m.f, &p), Dominance::FirstDominates | Dominance::Equal)
                });
                let outcome = a.insert(sol(&p));
                prop_assert_eq!(outcome == Insertion::Rejected, blocked);
                prop_assert!(a.len() <= capacity);
                for x in a.members() {
                    for y in a.members() {
                        prop_assert!(!dominates(&x.f, &y.f));
                    }
                }
            }
        }

        #[test]
        fn archive_is_order_insensitive_below_capacity(
            points in prop::collection::vec(vec_strategy(2), 1..30),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            let mut shuffled = points.clone();
            shuffled.shuffle(&mut crate::rng::seeded(seed));
            let mut a = BoundedArchive::new(points.len()).unwrap();
            let mut b = BoundedArchive::new(points.len()).unwrap();
            for p in &points { a.insert(sol(p)); }
            for p in &shuffled { b.insert(sol(p)); }
            prop_assert_eq!(objective_sets(&a), objective_sets(&b));
        }
    }
}
