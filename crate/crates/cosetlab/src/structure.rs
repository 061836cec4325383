//! Coset-structure searches: exhaustive Theorem-A style recovery over the
//! subgroup lattice, transversal refinement, boolean synthesis of subgroups
//! from translates of A, weakly-normal representations, greedy coset covers,
//! and the finite approximate stabilizer.
//!
//! Cosets are LEFT cosets c*H throughout.

use std::collections::HashMap;

use num_rational::BigRational;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::{enumerate_subgroups, GroupSet, Side};
use crate::growth::{rat, ruzsa_cover};
use crate::stability::weak_normality_degree;

/// One subgroup's coset structure for a set A, with exact scores.
#[derive(Debug, Clone)]
pub struct CosetStructure {
    pub h: GroupSet,
    /// Ruzsa transversal, ascending, all in A.
    pub c: Vec<usize>,
    /// Majority-refined sub-list of c.
    pub c_prime: Vec<usize>,
    /// |A symdiff C'*H|.
    pub symdiff: usize,
    /// symdiff / |H|.
    pub ratio_h: BigRational,
    /// symdiff / |A|.
    pub ratio_a: BigRational,
    pub cover_size: usize,
}

/// Result of the exhaustive structure search.
#[derive(Debug, Clone)]
pub struct TheoremAOutcome {
    /// Structures not dominated in (cover_size, ratio_h).
    pub pareto: Vec<CosetStructure>,
    /// All structures with ratio_h < eps, best ratio first.
    pub within_eps: Vec<CosetStructure>,
    /// min cover_size over within_eps; the per-instance empirical n.
    pub empirical_n: Option<usize>,
}

/// Keeps c in C' iff 2|A n cH| > |H|. Strict majority is the exact
/// per-coset minimizer of |A symdiff C'H|; ties are excluded.
pub fn refine_transversal(a: &GroupSet, h: &GroupSet, c: &[usize]) -> Result<Vec<usize>> {
    if !h.is_subgroup() {
        return Err(Error::NotASubgroup);
    }
    // C must be a valid cover: representatives in A, disjoint cosets, A covered.
    let mut covered = GroupSet::empty(a.group());
    for &x in c {
        if !a.contains(x) {
            return Err(Error::InvalidCover);
        }
        let coset = h.translate(x, Side::Left);
        if covered.intersects(&coset)? {
            return Err(Error::InvalidCover);
        }
        covered = covered.union(&coset)?;
    }
    if !a.is_subset_of(&covered)? {
        return Err(Error::InvalidCover);
    }
    Ok(c
        .iter()
        .copied()
        .filter(|&x| 2 * a.intersect(&h.translate(x, Side::Left)).unwrap().card() > h.card())
        .collect())
}

fn structure_for(a: &GroupSet, h: &GroupSet) -> Result<CosetStructure> {
    let cover = ruzsa_cover(a, h)?;
    let c_prime = refine_transversal(a, h, &cover.c)?;
    let mut ch = GroupSet::empty(a.group());
    for &x in &c_prime {
        ch = ch.union(&h.translate(x, Side::Left))?;
    }
    let symdiff = a.symdiff(&ch)?.card();
    Ok(CosetStructure {
        cover_size: cover.c.len(),
        c: cover.c,
        c_prime,
        symdiff,
        ratio_h: rat(symdiff, h.card()),
        ratio_a: rat(symdiff, a.card()),
        h: h.clone(),
    })
}

/// Enumerates every subgroup H contained in A*A^-1, scores its cover and
/// refinement, and reports the Pareto frontier plus everything under eps.
pub fn theorem_a_search(
    a: &GroupSet,
    eps: &BigRational,
    subgroup_budget: usize,
) -> Result<TheoremAOutcome> {
    if a.is_empty() {
        return Err(Error::EmptySet("theorem_a_search"));
    }
    let aa_inv = a.product(&a.inverse())?;
    let mut all = Vec::new();
    for h in enumerate_subgroups(a.group(), subgroup_budget)? {
        if h.is_subset_of(&aa_inv)? {
            all.push(structure_for(a, &h)?);
        }
    }
    all.sort_by(|s, t| {
        (s.cover_size, &s.ratio_h, s.h.canonical_key())
            .cmp(&(t.cover_size, &t.ratio_h, t.h.canonical_key()))
    });
    let pareto: Vec<CosetStructure> = all
        .iter()
        .filter(|s| {
            !all.iter().any(|t| {
                t.cover_size <= s.cover_size
                    && t.ratio_h <= s.ratio_h
                    && (t.cover_size < s.cover_size || t.ratio_h < s.ratio_h)
            })
        })
        .cloned()
        .collect();
    let mut within_eps: Vec<CosetStructure> =
        all.iter().filter(|s| &s.ratio_h < eps).cloned().collect();
    within_eps.sort_by(|s, t| {
        (&s.ratio_h, s.cover_size, s.h.canonical_key())
            .cmp(&(&t.ratio_h, t.cover_size, t.h.canonical_key()))
    });
    let empirical_n = within_eps.iter().map(|s| s.cover_size).min();
    Ok(TheoremAOutcome {
        pareto,
        within_eps,
        empirical_n,
    })
}

/// Per-subgroup best coset intersection.
#[derive(Debug, Clone)]
pub struct CosetIntersection {
    pub h: GroupSet,
    /// Least coset representative attaining the maximum.
    pub best_g: usize,
    pub intersection: usize,
}

/// For each subgroup H of A*A^-1, the left coset g*H maximizing |A n gH|.
pub fn largest_coset_intersection(
    a: &GroupSet,
    subgroup_budget: usize,
) -> Result<Vec<CosetIntersection>> {
    if a.is_empty() {
        return Err(Error::EmptySet("largest_coset_intersection"));
    }
    let aa_inv = a.product(&a.inverse())?;
    let mut out = Vec::new();
    for h in enumerate_subgroups(a.group(), subgroup_budget)? {
        if !h.is_subset_of(&aa_inv)? {
            continue;
        }
        let mut seen = GroupSet::empty(a.group());
        let (mut best_g, mut best) = (0usize, 0usize);
        for g in 0..a.group().order() {
            if seen.contains(g) {
                continue;
            }
            let coset = h.translate(g, Side::Left);
            seen = seen.union(&coset)?;
            let inter = a.intersect(&coset)?.card();
            if inter > best {
                best = inter;
                best_g = g;
            }
        }
        out.push(CosetIntersection {
            h,
            best_g,
            intersection: best,
        });
    }
    Ok(out)
}

/// Expression tree over translate atoms g*A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolExpr {
    /// The translate g*A.
    Translate(usize),
    Complement(Box<BoolExpr>),
    Union(Box<BoolExpr>, Box<BoolExpr>),
    Intersect(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    /// Number of atom occurrences.
    pub fn complexity(&self) -> usize {
        match self {
            BoolExpr::Translate(_) => 1,
            BoolExpr::Complement(e) => e.complexity(),
            BoolExpr::Union(l, r) | BoolExpr::Intersect(l, r) => l.complexity() + r.complexity(),
        }
    }

    /// Denotation with respect to the base set A.
    pub fn eval(&self, a: &GroupSet) -> GroupSet {
        match self {
            BoolExpr::Translate(g) => a.translate(*g, Side::Left),
            BoolExpr::Complement(e) => e.eval(a).complement(),
            BoolExpr::Union(l, r) => l.eval(a).union(&r.eval(a)).expect("same group"),
            BoolExpr::Intersect(l, r) => l.eval(a).intersect(&r.eval(a)).expect("same group"),
        }
    }
}

impl std::fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoolExpr::Translate(g) => write!(f, "({g}+A)"),
            BoolExpr::Complement(e) => write!(f, "~{e}"),
            BoolExpr::Union(l, r) => write!(f, "({l} | {r})"),
            BoolExpr::Intersect(l, r) => write!(f, "({l} & {r})"),
        }
    }
}

/// Synthesis result: a minimum-complexity expression for the target, or
/// the number of distinct denotations reached within the budget.
#[derive(Debug, Clone)]
pub enum Synthesis {
    Found(BoolExpr),
    Exhausted { distinct_sets: usize },
}

/// Cap on distinct denotations tracked during synthesis.
pub const DEFAULT_SYNTH_SET_BUDGET: usize = 200_000;

/// Breadth-first search over canonical denotations. Level 1 holds every
/// translate g+A and its complement; level c combines lower levels with
/// union and intersection. Complements only ever apply to atoms: pushing
/// negations inward (De Morgan) preserves atom counts, so this is complete
/// for boolean combinations within the budget.
pub fn boolean_synthesis(
    target: &GroupSet,
    a: &GroupSet,
    max_complexity: usize,
    set_budget: usize,
) -> Result<Synthesis> {
    if !a.group().is_abelian() {
        return Err(Error::NonAbelian);
    }
    target.is_subset_of(&GroupSet::full(a.group()))?; // group-mismatch check
    if max_complexity == 0 {
        return Err(Error::InvalidParam("max_complexity must be >= 1".into()));
    }
    let mut seen: HashMap<Bits, ()> = HashMap::new();
    let mut levels: Vec<Vec<(Bits, BoolExpr)>> = vec![Vec::new(); max_complexity + 1];
    for g in 0..a.group().order() {
        let t = a.translate(g, Side::Left);
        for (bits, expr) in [
            (t.bits().clone(), BoolExpr::Translate(g)),
            (
                t.complement().bits().clone(),
                BoolExpr::Complement(Box::new(BoolExpr::Translate(g))),
            ),
        ] {
            if bits == *target.bits() {
                return Ok(Synthesis::Found(expr));
            }
            if !seen.contains_key(&bits) {
                seen.insert(bits.clone(), ());
                levels[1].push((bits, expr));
            }
        }
    }
    for c in 2..=max_complexity {
        let mut fresh = Vec::new();
        for c1 in 1..=c / 2 {
            let c2 = c - c1;
            for i in 0..levels[c1].len() {
                for j in 0..levels[c2].len() {
                    if c1 == c2 && j < i {
                        continue;
                    }
                    let (xb, xe) = &levels[c1][i];
                    let (yb, ye) = &levels[c2][j];
                    for (bits, expr) in [
                        (
                            xb.union(yb),
                            BoolExpr::Union(Box::new(xe.clone()), Box::new(ye.clone())),
                        ),
                        (
                            xb.intersect(yb),
                            BoolExpr::Intersect(Box::new(xe.clone()), Box::new(ye.clone())),
                        ),
                    ] {
                        if bits == *target.bits() {
                            return Ok(Synthesis::Found(expr));
                        }
                        if !seen.contains_key(&bits) {
                            seen.insert(bits.clone(), ());
                            if seen.len() > set_budget {
                                return Err(Error::BudgetExceeded {
                                    what: "synthesis denotations",
                                    limit: set_budget,
                                });
                            }
                            fresh.push((bits, expr));
                        }
                    }
                }
            }
        }
        levels[c] = fresh;
    }
    Ok(Synthesis::Exhausted {
        distinct_sets: seen.len(),
    })
}

/// Certificate that A = (U B_j) n (U G\C_i) with r-weakly-normal factors.
#[derive(Debug, Clone)]
pub struct RepresentationCert {
    pub r: usize,
    pub b_list: Vec<GroupSet>,
    pub c_list: Vec<GroupSet>,
    pub valid: bool,
    /// Weak-normality degrees of the B_j / C_i translate relations.
    pub degrees_b: Vec<usize>,
    pub degrees_c: Vec<usize>,
}

impl RepresentationCert {
    pub fn k(&self) -> usize {
        self.b_list.len()
    }

    pub fn l(&self) -> usize {
        self.c_list.len()
    }
}

/// Validates an (r,k,l)-weakly-normal representation of A. With l = 0 the
/// second factor is all of G.
pub fn wn_representation_verify(
    a: &GroupSet,
    r: usize,
    b_list: Vec<GroupSet>,
    c_list: Vec<GroupSet>,
) -> Result<RepresentationCert> {
    if !a.group().is_abelian() {
        return Err(Error::NonAbelian);
    }
    if r == 0 {
        return Err(Error::InvalidParam("r must be >= 1".into()));
    }
    let mut union_b = GroupSet::empty(a.group());
    for b in &b_list {
        union_b = union_b.union(b)?;
    }
    let second = if c_list.is_empty() {
        GroupSet::full(a.group())
    } else {
        let mut s = GroupSet::empty(a.group());
        for c in &c_list {
            s = s.union(&c.complement())?;
        }
        s
    };
    let set_ok = *a == union_b.intersect(&second)?;
    let degrees_b: Vec<usize> = b_list.iter().map(|s| weak_normality_degree(s).degree).collect();
    let degrees_c: Vec<usize> = c_list.iter().map(|s| weak_normality_degree(s).degree).collect();
    let degree_ok = degrees_b
        .iter()
        .chain(&degrees_c)
        .all(|&d| d <= r.saturating_sub(1));
    Ok(RepresentationCert {
        r,
        b_list,
        c_list,
        valid: set_ok && degree_ok,
        degrees_b,
        degrees_c,
    })
}

/// One coset of the Theorem-B style cover, with a synthesized expression
/// for its subgroup when found within the budget.
#[derive(Debug, Clone)]
pub struct CoveredCoset {
    pub g: usize,
    pub h: GroupSet,
    pub expr: Option<BoolExpr>,
}

#[derive(Debug, Clone)]
pub struct TheoremBOutcome {
    pub cosets: Vec<CoveredCoset>,
}

/// Greedy cover of A by cosets g+H fully contained in A, with g in A and
/// H a subgroup of A-A. Greedy picks the coset covering the most uncovered
/// points (ties: |H| descending, then g ascending, then H element list).
/// Minimality of the cover is not claimed; A is always coverable because
/// singletons {g}, g in A, are candidates.
pub fn theorem_b_search(
    a: &GroupSet,
    synth_max_complexity: usize,
    subgroup_budget: usize,
) -> Result<TheoremBOutcome> {
    if !a.group().is_abelian() {
        return Err(Error::NonAbelian);
    }
    if a.is_empty() {
        return Err(Error::EmptySet("theorem_b_search"));
    }
    let a_minus_a = a.product(&a.inverse())?;
    let mut candidates: Vec<(usize, usize, GroupSet, GroupSet)> = Vec::new(); // (g, h_idx, h, coset)
    let subs: Vec<GroupSet> = enumerate_subgroups(a.group(), subgroup_budget)?
        .into_iter()
        .filter(|h| h.is_subset_of(&a_minus_a).unwrap_or(false))
        .collect();
    for (hi, h) in subs.iter().enumerate() {
        let mut seen = GroupSet::empty(a.group());
        for g in a.iter() {
            if seen.contains(g) {
                continue;
            }
            let coset = h.translate(g, Side::Left);
            seen = seen.union(&coset)?;
            if coset.is_subset_of(a)? {
                // g is the least element of the coset, hence in A
                candidates.push((g, hi, h.clone(), coset));
            }
        }
    }
    let mut uncovered = a.clone();
    let mut chosen: Vec<(usize, usize)> = Vec::new(); // (g, h_idx)
    while !uncovered.is_empty() {
        let best = candidates
            .iter()
            .max_by(|x, y| {
                let gain = |c: &(usize, usize, GroupSet, GroupSet)| {
                    uncovered.intersect(&c.3).unwrap().card()
                };
                (gain(x), x.2.card(), std::cmp::Reverse(x.0), std::cmp::Reverse(x.2.canonical_key()))
                    .cmp(&(gain(y), y.2.card(), std::cmp::Reverse(y.0), std::cmp::Reverse(y.2.canonical_key())))
            })
            .expect("singleton candidates always exist")
            .clone();
        debug_assert!(uncovered.intersect(&best.3)?.card() > 0);
        uncovered = uncovered.difference(&best.3)?;
        chosen.push((best.0, best.1));
    }
    let mut expr_cache: HashMap<usize, Option<BoolExpr>> = HashMap::new();
    let mut cosets = Vec::new();
    for (g, hi) in chosen {
        let expr = expr_cache
            .entry(hi)
            .or_insert_with(|| {
                match boolean_synthesis(&subs[hi], a, synth_max_complexity, DEFAULT_SYNTH_SET_BUDGET)
                {
                    Ok(Synthesis::Found(e)) => Some(e),
                    _ => None,
                }
            })
            .clone();
        cosets.push(CoveredCoset {
            g,
            h: subs[hi].clone(),
            expr,
        });
    }
    Ok(TheoremBOutcome { cosets })
}

/// Finite approximate stabilizer.
#[derive(Debug, Clone)]
pub struct ApproxStabilizer {
    /// st = {g : |gA n A| >= delta |A|}.
    pub st: GroupSet,
    /// Subgroup generated by st.
    pub generated: GroupSet,
}

pub fn approx_stabilizer(a: &GroupSet, delta: &BigRational) -> Result<ApproxStabilizer> {
    if a.is_empty() {
        return Err(Error::EmptySet("approx_stabilizer"));
    }
    if delta <= &rat(0, 1) || delta > &rat(1, 1) {
        return Err(Error::DeltaOutOfRange);
    }
    let threshold = delta * rat(a.card(), 1);
    let mut st = GroupSet::empty(a.group());
    let mut bits_set = Vec::new();
    for g in 0..a.group().order() {
        let overlap = a.translate(g, Side::Left).intersect(a)?.card();
        if rat(overlap, 1) >= threshold {
            bits_set.push(g);
        }
    }
    for g in bits_set {
        st = st.union(&GroupSet::singleton(a.group(), g)?)?;
    }
    let generated = st.generated_subgroup()?;
    Ok(ApproxStabilizer { st, generated })
}
