//! Sumset growth statistics, the normalized counting measure on B*B*B,
//! the Ruzsa covering procedure, and the Plunnecke / bounded-exponent
//! sanity checks. All ratios are exact rationals; no floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::group::{GroupSet, Side};

pub(crate) fn rat(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact growth constants of a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthStats {
    pub set_card: usize,
    /// |A*A| / |A|.
    pub doubling: BigRational,
    /// |A*A*A| / |A|.
    pub tripling: BigRational,
    /// |B| with B = A u A^-1 u {id}.
    pub symmetrized_card: usize,
    /// |B*B*B|.
    pub triple_cube_card: usize,
}

pub fn growth_stats(a: &GroupSet) -> Result<GrowthStats> {
    if a.is_empty() {
        return Err(Error::EmptySet("growth_stats"));
    }
    let aa = a.product(a)?;
    let aaa = aa.product(a)?;
    let b = symmetrize(a);
    let bbb = b.product(&b)?.product(&b)?;
    Ok(GrowthStats {
        set_card: a.card(),
        doubling: rat(aa.card(), a.card()),
        tripling: rat(aaa.card(), a.card()),
        symmetrized_card: b.card(),
        triple_cube_card: bbb.card(),
    })
}

/// B = A u A^-1 u {id}.
pub fn symmetrize(a: &GroupSet) -> GroupSet {
    let id = GroupSet::singleton(a.group(), 0).expect("identity is in range");
    a.union(&a.inverse())
        .and_then(|s| s.union(&id))
        .expect("same group by construction")
}

/// mu(X) = |X| / |B*B*B| with B = symmetrize(A). Errors if X is not
/// contained in B*B*B.
pub fn triple_cube_measure(x: &GroupSet, a: &GroupSet) -> Result<BigRational> {
    if a.is_empty() {
        return Err(Error::EmptySet("triple_cube_measure"));
    }
    let b = symmetrize(a);
    let bbb = b.product(&b)?.product(&b)?;
    if !x.is_subset_of(&bbb)? {
        return Err(Error::OutsideMeasureDomain);
    }
    Ok(rat(x.card(), bbb.card()))
}

/// Outcome of the 14K^3 bound check: |B*B*B| <= 14 K^3 |A| and
/// mu(A) >= (14 K^3)^-1, with K the tripling constant.
#[derive(Debug, Clone)]
pub struct TriplingBoundCheck {
    pub pass: bool,
    pub tripling: BigRational,
    pub bbb_card: usize,
    pub bound: BigRational,
    pub mu_a: BigRational,
}

pub fn check_14k3(a: &GroupSet) -> Result<TriplingBoundCheck> {
    let stats = growth_stats(a)?;
    let k = stats.tripling.clone();
    let bound = rat(14, 1) * &k * &k * &k * rat(a.card(), 1);
    let size_ok = rat(stats.triple_cube_card, 1) <= bound;
    // second route through the measure
    let mu_a = triple_cube_measure(a, a)?;
    let measure_ok = mu_a.clone() * &bound >= rat(a.card(), 1);
    Ok(TriplingBoundCheck {
        pass: size_ok && measure_ok,
        tripling: k,
        bbb_card: stats.triple_cube_card,
        bound,
        mu_a,
    })
}

/// kA - lA in an abelian group.
pub fn iterated_sumset(a: &GroupSet, k: usize, l: usize) -> Result<GroupSet> {
    if !a.group().is_abelian() {
        return Err(Error::NonAbelian);
    }
    if k + l == 0 {
        return Err(Error::TrivialSumset);
    }
    let neg = a.inverse();
    let mut acc = GroupSet::singleton(a.group(), 0)?;
    for _ in 0..k {
        acc = acc.product(a)?;
    }
    for _ in 0..l {
        acc = acc.product(&neg)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone)]
pub struct PlunneckeCheck {
    pub pass: bool,
    pub k: usize,
    pub l: usize,
    pub sumset_card: usize,
    pub doubling: BigRational,
    /// K^(k+l) * |A|.
    pub bound: BigRational,
}

/// |kA - lA| <= K^(k+l) |A| with K the doubling constant (abelian only).
pub fn plunnecke_check(a: &GroupSet, k: usize, l: usize) -> Result<PlunneckeCheck> {
    let stats = growth_stats(a)?;
    let sumset = iterated_sumset(a, k, l)?;
    let mut bound = rat(a.card(), 1);
    for _ in 0..k + l {
        bound *= &stats.doubling;
    }
    Ok(PlunneckeCheck {
        pass: rat(sumset.card(), 1) <= bound,
        k,
        l,
        sumset_card: sumset.card(),
        doubling: stats.doubling,
        bound,
    })
}

/// A Ruzsa cover of A by left cosets of a subgroup H.
#[derive(Debug, Clone)]
pub struct CoverResult {
    pub h: GroupSet,
    /// Transversal, a subset of A, in ascending index order.
    pub c: Vec<usize>,
    /// C*H.
    pub covered: GroupSet,
    /// Exact pair (|A*H|, |H|) behind the packing bound |A*H|/|H|.
    pub ah_card: usize,
    pub h_card: usize,
}

/// Greedy scan of A in ascending index order: a is appended to C iff it is
/// not yet covered by C*H. Because left cosets partition G this attains
/// |C| = the exact number of cosets of H meeting A.
pub fn ruzsa_cover(a: &GroupSet, h: &GroupSet) -> Result<CoverResult> {
    if !h.is_subgroup() {
        return Err(Error::NotASubgroup);
    }
    if a.is_empty() {
        return Err(Error::EmptySet("ruzsa_cover"));
    }
    a.group();
    let mut covered = GroupSet::empty(a.group());
    let mut c = Vec::new();
    for x in a.iter() {
        if !covered.contains(x) {
            c.push(x);
            covered = covered.union(&h.translate(x, Side::Left))?;
        }
    }
    let ah = a.product(h)?;
    Ok(CoverResult {
        h: h.clone(),
        c,
        covered,
        ah_card: ah.card(),
        h_card: h.card(),
    })
}

#[derive(Debug, Clone)]
pub struct ExponentBoundCheck {
    pub pass: bool,
    pub subgroup_card: usize,
    pub doubling: BigRational,
    /// None when the bound overflowed the working precision and the check
    /// passed vacuously.
    pub bound: Option<BigRational>,
    pub astronomical: bool,
}

/// Integer exponents above this are not evaluated; the bound dwarfs any
/// group we can hold and the check passes vacuously.
const ASTRONOMICAL_EXPONENT: u64 = 10_000;

/// Ruzsa's bound for abelian groups of exponent r:
/// |<A u {0}>| <= K^2 * r^ceil(K^4) * |A|, K the doubling constant.
/// Rounding K^4 up to an integer exponent keeps the pass direction sound.
pub fn exponent_bound_check(a: &GroupSet, r: usize) -> Result<ExponentBoundCheck> {
    if !a.group().is_abelian() {
        return Err(Error::NonAbelian);
    }
    let exponent = a.group().exponent();
    if r == 0 || !r.is_multiple_of(exponent) {
        return Err(Error::ExponentMismatch { exponent, r });
    }
    let stats = growth_stats(a)?;
    let k = &stats.doubling;
    let generated = symmetrize(a).generated_subgroup()?;
    let k4 = k * k * k * k;
    let exp = k4.numer().div_ceil(k4.denom());
    let Some(exp) = exp.to_u64().filter(|&e| e <= ASTRONOMICAL_EXPONENT) else {
        return Ok(ExponentBoundCheck {
            pass: true,
            subgroup_card: generated.card(),
            doubling: stats.doubling,
            bound: None,
            astronomical: true,
        });
    };
    let r_pow = BigRational::from(BigInt::from(r).pow(exp as u32));
    let bound = k * k * r_pow * rat(a.card(), 1);
    Ok(ExponentBoundCheck {
        pass: rat(generated.card(), 1) <= bound,
        subgroup_card: generated.card(),
        doubling: stats.doubling,
        bound: Some(bound),
        astronomical: false,
    })
}

/// doubling = 1 iff A*A is a single left-translate of A iff A is a left
/// coset of a subgroup. Used by tests; exported for the dichotomy suite.
pub fn is_left_coset(a: &GroupSet) -> bool {
    match a.iter().next() {
        None => false,
        Some(first) => a
            .translate(a.group().inv(first), Side::Left)
            .is_subgroup(),
    }
}

#[allow(unused)]
fn one() -> BigRational {
    BigRational::one()
}
