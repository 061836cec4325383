//! Order-r ladder (half-graph) detection, weak-normality degree of the
//! translate family, Sidon tests, and the 2-stable dichotomy.
//!
//! Ladder convention is b_j * a_i with the left action on the a-coordinate,
//! so the rows available to a ladder are the translate sets b^-1 * A. For
//! abelian groups this coincides with the relation A(x + y).

use std::collections::HashMap;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::{GroupSet, Side};

/// Refuse ladder searches above this rank rather than run unbounded.
pub const LADDER_RANK_CAP: usize = 8;

/// A tuple (a_1..a_r, b_1..b_r) certifying failure of r-stability:
/// b_j * a_i lies in A exactly when i <= j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderWitness {
    pub r: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl LadderWitness {
    /// Checks the defining pattern against the set, plus pairwise
    /// distinctness of the a and b entries.
    pub fn verify(&self, set: &GroupSet) -> bool {
        if self.a.len() != self.r || self.b.len() != self.r {
            return false;
        }
        let g = set.group();
        for (i, &ai) in self.a.iter().enumerate() {
            for (j, &bj) in self.b.iter().enumerate() {
                if set.contains(g.mul(bj, ai)) != (i <= j) {
                    return false;
                }
            }
        }
        let distinct = |v: &[usize]| {
            let mut s = v.to_vec();
            s.sort_unstable();
            s.windows(2).all(|w| w[0] != w[1])
        };
        distinct(&self.a) && distinct(&self.b)
    }
}

/// Deduplicated ladder rows: the distinct sets b^-1 * A, each with its
/// least representative b, ascending by representative.
fn ladder_rows(a: &GroupSet) -> Vec<(usize, GroupSet)> {
    let g = a.group();
    let mut seen: HashMap<Bits, usize> = HashMap::new();
    let mut rows = Vec::new();
    for b in 0..g.order() {
        let row = a.translate(g.inv(b), Side::Left);
        if !seen.contains_key(row.bits()) {
            seen.insert(row.bits().clone(), b);
            rows.push((b, row));
        }
    }
    rows
}

/// Exhaustive search for an r-ladder. Returns the first witness in the
/// deterministic search order (rows by ascending representative b, chain
/// points by ascending index), or None if A is r-stable.
pub fn ladder_search(a: &GroupSet, r: usize) -> Result<Option<LadderWitness>> {
    if r == 0 || r > LADDER_RANK_CAP {
        return Err(Error::LadderCapExceeded {
            r,
            cap: LADDER_RANK_CAP,
        });
    }
    let rows = ladder_rows(a);
    let mut chosen_b = Vec::with_capacity(r);
    let mut chosen_a = Vec::with_capacity(r);
    let mut used = vec![false; rows.len()];
    let found = extend_ladder(
        &rows,
        r,
        &mut chosen_b,
        &mut chosen_a,
        &mut used,
        &Bits::new(a.group().order()),
    );
    if found {
        let w = LadderWitness {
            r,
            a: chosen_a,
            b: chosen_b,
        };
        debug_assert!(w.verify(a));
        Ok(Some(w))
    } else {
        Ok(None)
    }
}

/// Builds the ladder row by row: row j must contain every a chosen so far,
/// and a_j is picked from row j minus the union of earlier rows. This
/// enforces the full i<=j pattern, and makes equal rows unusable twice.
fn extend_ladder(
    rows: &[(usize, GroupSet)],
    r: usize,
    chosen_b: &mut Vec<usize>,
    chosen_a: &mut Vec<usize>,
    used: &mut [bool],
    union_prev: &Bits,
) -> bool {
    let depth = chosen_b.len();
    if depth == r {
        return true;
    }
    let candidates: Vec<usize> = (0..rows.len())
        .filter(|&i| {
            !used[i]
                && chosen_a.iter().all(|&x| rows[i].1.contains(x))
                && !rows[i].1.bits().difference(union_prev).is_empty()
        })
        .collect();
    // counting bound: candidate rows only shrink deeper in the chain
    if candidates.len() < r - depth {
        return false;
    }
    for i in candidates {
        let (b, row) = &rows[i];
        let free = row.bits().difference(union_prev);
        let union_next = union_prev.union(row.bits());
        used[i] = true;
        chosen_b.push(*b);
        for x in free.iter_ones() {
            chosen_a.push(x);
            if extend_ladder(rows, r, chosen_b, chosen_a, used, &union_next) {
                return true;
            }
            chosen_a.pop();
        }
        chosen_b.pop();
        used[i] = false;
    }
    false
}

/// Largest r <= cap admitting a ladder, with a stored witness for the
/// maximum. An r-ladder contains an (r-1)-ladder, so the ascending probe
/// is exact.
pub fn max_ladder(a: &GroupSet, cap: usize) -> Result<(usize, Option<LadderWitness>)> {
    let mut best = (0, None);
    for r in 1..=cap {
        match ladder_search(a, r)? {
            Some(w) => best = (r, Some(w)),
            None => break,
        }
    }
    Ok(best)
}

/// Weak-normality degree of the translate family of A.
#[derive(Debug, Clone)]
pub struct WnDegree {
    /// max over x of the number of distinct translates g*A containing x.
    pub degree: usize,
    /// A maximizing point (least such), None when A is empty.
    pub witness_point: Option<usize>,
    /// The distinct translates through the witness point, as (g, g*A) with
    /// g the least representative.
    pub translates: Vec<(usize, GroupSet)>,
    /// Degree is reported as 0 and undefined when A is empty.
    pub empty: bool,
}

/// The translate relation is k-weakly normal iff k > the returned degree.
pub fn weak_normality_degree(a: &GroupSet) -> WnDegree {
    if a.is_empty() {
        return WnDegree {
            degree: 0,
            witness_point: None,
            translates: Vec::new(),
            empty: true,
        };
    }
    let g = a.group();
    let mut seen: HashMap<Bits, usize> = HashMap::new();
    let mut translates: Vec<(usize, GroupSet)> = Vec::new();
    for t in 0..g.order() {
        let s = a.translate(t, Side::Left);
        if !seen.contains_key(s.bits()) {
            seen.insert(s.bits().clone(), t);
            translates.push((t, s));
        }
    }
    let mut best_x = 0;
    let mut best = 0;
    for x in 0..g.order() {
        let count = translates.iter().filter(|(_, s)| s.contains(x)).count();
        if count > best {
            best = count;
            best_x = x;
        }
    }
    let through: Vec<(usize, GroupSet)> = translates
        .iter()
        .filter(|(_, s)| s.contains(best_x))
        .cloned()
        .collect();
    WnDegree {
        degree: best,
        witness_point: Some(best_x),
        translates: through,
        empty: false,
    }
}

/// Sidon test outcome; the witness is a violating quadruple
/// (a1, a2, a3, a4) with a1 - a2 = a3 - a4, a1 != a2 and a1 != a3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SidonOutcome {
    pub sidon: bool,
    pub witness: Option<[usize; 4]>,
}

pub fn is_sidon(a: &GroupSet) -> Result<SidonOutcome> {
    if !a.group().is_abelian() {
        return Err(Error::NonAbelian);
    }
    let g = a.group();
    let mut by_diff: HashMap<usize, (usize, usize)> = HashMap::new();
    for a1 in a.iter() {
        for a2 in a.iter() {
            if a1 == a2 {
                continue;
            }
            let d = g.mul(a1, g.inv(a2));
            if let Some(&(a3, a4)) = by_diff.get(&d) {
                if a1 != a3 {
                    return Ok(SidonOutcome {
                        sidon: false,
                        witness: Some([a1, a2, a3, a4]),
                    });
                }
            } else {
                by_diff.insert(d, (a1, a2));
            }
        }
    }
    Ok(SidonOutcome {
        sidon: true,
        witness: None,
    })
}

/// Everything the stability module knows about one set.
#[derive(Debug, Clone)]
pub struct StabilityProfile {
    pub cap: usize,
    pub max_ladder: usize,
    pub witness: Option<LadderWitness>,
    pub wn_degree: usize,
    pub wn_witness_point: Option<usize>,
    pub wn_undefined: bool,
    /// Abelian groups only.
    pub sidon: Option<bool>,
}

pub fn stability_profile(a: &GroupSet, cap: usize) -> Result<StabilityProfile> {
    let (max_ladder, witness) = max_ladder(a, cap)?;
    let wn = weak_normality_degree(a);
    let sidon = if a.group().is_abelian() {
        Some(is_sidon(a)?.sidon)
    } else {
        None
    };
    Ok(StabilityProfile {
        cap,
        max_ladder,
        witness,
        wn_degree: wn.degree,
        wn_witness_point: wn.witness_point,
        wn_undefined: wn.empty,
        sidon,
    })
}

/// The three 2-stability characterizations, computed independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dichotomy {
    /// No 2-ladder exists.
    pub two_stable: bool,
    /// wn_degree <= 1.
    pub two_wn: bool,
    /// A is empty or a left coset of a subgroup.
    pub coset_or_empty: bool,
}

pub fn classify_dichotomy(a: &GroupSet) -> Result<Dichotomy> {
    let two_stable = ladder_search(a, 2)?.is_none();
    let two_wn = weak_normality_degree(a).degree <= 1;
    let coset_or_empty = if a.is_empty() {
        true
    } else {
        let first = a.iter().next().unwrap();
        a.translate(a.group().inv(first), Side::Left).is_subgroup()
    };
    Ok(Dichotomy {
        two_stable,
        two_wn,
        coset_or_empty,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;
    use std::sync::Arc;

    fn set(g: &Arc<Group>, idx: &[usize]) -> GroupSet {
        GroupSet::from_indices(g, idx).unwrap()
    }

    /// Naive oracle: try all r-tuples of a's and b's.
    fn ladder_exists_brute(a: &GroupSet, r: usize) -> bool {
        let n = a.group().order();
        let mut tuple = vec![0usize; 2 * r];
        loop {
            let (aa, bb) = tuple.split_at(r);
            let w = LadderWitness {
                r,
                a: aa.to_vec(),
                b: bb.to_vec(),
            };
            let g = a.group();
            let pattern_ok = (0..r).all(|i| {
                (0..r).all(|j| a.contains(g.mul(bb[j], aa[i])) == (i <= j))
            });
            if pattern_ok {
                debug_assert!(w.verify(a));
                return true;
            }
            // odometer
            let mut k = 2 * r;
            loop {
                if k == 0 {
                    return false;
                }
                k -= 1;
                tuple[k] += 1;
                if tuple[k] < n {
                    break;
                }
                tuple[k] = 0;
            }
        }
    }

    #[test]
    fn interval_has_three_ladder() {
        let g = Group::parse("cyclic:12").unwrap();
        let a = set(&g, &[0, 1, 2, 3, 4, 5]);
        let w = ladder_search(&a, 3).unwrap().expect("3-ladder exists");
        assert!(w.verify(&a));
        assert!(ladder_exists_brute(&a, 3));
    }

    #[test]
    fn subgroup_is_two_stable() {
        let g = Group::parse("cyclic:12").unwrap();
        let h = set(&g, &[0, 6]);
        assert!(ladder_search(&h, 2).unwrap().is_none());
        assert!(ladder_search(&h, 1).unwrap().is_some());
    }

    #[test]
    fn full_group_is_two_stable() {
        let g = Group::parse("cyclic:7").unwrap();
        let a = GroupSet::full(&g);
        assert!(ladder_search(&a, 2).unwrap().is_none());
    }

    #[test]
    fn empty_set_has_no_one_ladder() {
        let g = Group::parse("cyclic:7").unwrap();
        assert!(ladder_search(&GroupSet::empty(&g), 1).unwrap().is_none());
        assert_eq!(max_ladder(&GroupSet::empty(&g), 4).unwrap().0, 0);
    }

    #[test]
    fn rank_cap_enforced() {
        let g = Group::parse("cyclic:7").unwrap();
        let a = set(&g, &[0, 1]);
        assert!(ladder_search(&a, 9).is_err());
        assert!(ladder_search(&a, 0).is_err());
    }

    #[test]
    fn ladder_search_matches_brute_force_rank_two() {
        // all subsets, r <= 2 (the brute oracle is n^4 per subset)
        for desc in ["cyclic:7", "symmetric:3", "vector:2,3"] {
            let g = Group::parse(desc).unwrap();
            let n = g.order();
            for mask in 0u32..1 << n {
                let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 != 0).collect();
                let a = set(&g, &idx);
                for r in 1..=2 {
                    assert_eq!(
                        ladder_search(&a, r).unwrap().is_some(),
                        ladder_exists_brute(&a, r),
                        "set {idx:?} in {desc}, r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn ladder_search_matches_brute_force_rank_three() {
        // sampled subsets, r = 3 (the brute oracle is n^6 per subset)
        for desc in ["cyclic:7", "cyclic:10", "symmetric:3", "vector:2,3"] {
            let g = Group::parse(desc).unwrap();
            let n = g.order();
            for mask in (0u32..1 << n).step_by(23) {
                let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 != 0).collect();
                let a = set(&g, &idx);
                assert_eq!(
                    ladder_search(&a, 3).unwrap().is_some(),
                    ladder_exists_brute(&a, 3),
                    "set {idx:?} in {desc}, r=3"
                );
            }
        }
    }

    #[test]
    fn max_ladder_of_coset_is_one() {
        let g = Group::parse("cyclic:12").unwrap();
        let coset = set(&g, &[3, 9]);
        assert_eq!(max_ladder(&coset, 5).unwrap().0, 1);
    }

    #[test]
    fn sidon_set_ladder_and_wn() {
        let g = Group::parse("cyclic:101").unwrap();
        let a = set(&g, &[1, 2, 5, 11]);
        assert!(is_sidon(&a).unwrap().sidon);
        assert_eq!(max_ladder(&a, 5).unwrap().0, 2);
        // all 101 translates distinct, each point on |A| of them
        assert_eq!(weak_normality_degree(&a).degree, 4);
    }

    #[test]
    fn interval_max_ladder_at_least_three() {
        let g = Group::parse("cyclic:12").unwrap();
        let a = set(&g, &[0, 1, 2, 3, 4, 5]);
        assert!(max_ladder(&a, 5).unwrap().0 >= 3);
    }

    #[test]
    fn wn_degree_of_subgroup_is_one() {
        let g = Group::parse("cyclic:12").unwrap();
        let h = set(&g, &[0, 4, 8]);
        let wn = weak_normality_degree(&h);
        assert_eq!(wn.degree, 1);
        assert_eq!(wn.translates.len(), 1);
    }

    #[test]
    fn wn_degree_of_empty_is_flagged() {
        let g = Group::parse("cyclic:5").unwrap();
        let wn = weak_normality_degree(&GroupSet::empty(&g));
        assert_eq!(wn.degree, 0);
        assert!(wn.empty);
    }

    #[test]
    fn wn_degree_cross_brute_force() {
        let g = Group::parse("vector:3,2").unwrap();
        let cross = set(&g, &[0, 1, 2, 3, 6]);
        let wn = weak_normality_degree(&cross);
        // independent recount at the witness point
        let x = wn.witness_point.unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut count = 0;
        for t in 0..9 {
            let s = cross.translate(t, Side::Left);
            if s.contains(x) && seen.insert(s.elements()) {
                count += 1;
            }
        }
        assert_eq!(wn.degree, count);
    }

    #[test]
    fn sidon_examples() {
        let g101 = Group::parse("cyclic:101").unwrap();
        assert!(is_sidon(&set(&g101, &[1, 2, 5, 11])).unwrap().sidon);

        let g9 = Group::parse("cyclic:9").unwrap();
        let out = is_sidon(&set(&g9, &[1, 2, 3])).unwrap();
        assert!(!out.sidon);
        let [a1, a2, a3, a4] = out.witness.unwrap();
        let g = &g9;
        assert_eq!(g.mul(a1, g.inv(a2)), g.mul(a3, g.inv(a4)));
        assert_ne!(a1, a2);
        assert_ne!(a1, a3);

        // subgroups of order >= 3 violate Sidon
        let g12 = Group::parse("cyclic:12").unwrap();
        assert!(!is_sidon(&set(&g12, &[0, 4, 8])).unwrap().sidon);

        let s3 = Group::parse("symmetric:3").unwrap();
        assert!(is_sidon(&set(&s3, &[0, 1])).is_err());
    }

    #[test]
    fn dichotomy_examples() {
        let g = Group::parse("cyclic:12").unwrap();
        let coset = classify_dichotomy(&set(&g, &[3, 9])).unwrap();
        assert_eq!(
            coset,
            Dichotomy {
                two_stable: true,
                two_wn: true,
                coset_or_empty: true
            }
        );
        let non = classify_dichotomy(&set(&g, &[3, 7])).unwrap();
        assert_eq!(
            non,
            Dichotomy {
                two_stable: false,
                two_wn: false,
                coset_or_empty: false
            }
        );
        let empty = classify_dichotomy(&GroupSet::empty(&g)).unwrap();
        assert!(empty.two_stable && empty.two_wn && empty.coset_or_empty);
    }

    #[test]
    fn profile_reports_sidon_only_for_abelian() {
        let s3 = Group::parse("symmetric:3").unwrap();
        let p = stability_profile(&set(&s3, &[0, 1]), 3).unwrap();
        assert!(p.sidon.is_none());
        let g = Group::parse("cyclic:7").unwrap();
        let p = stability_profile(&set(&g, &[1, 2]), 3).unwrap();
        assert!(p.sidon.is_some());
    }
}
