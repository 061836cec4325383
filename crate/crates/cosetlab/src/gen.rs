//! Seeded instance generators.
//!
//! Descriptor syntax (the `gen:` payload): `name(arg;arg;...)` with `;`
//! separating arguments and `,` separating elements inside a list argument:
//!
//! - `cross(p)` — both axes of vector:p,2
//! - `subspace_plus_points(dim;k)` — span of the first dim basis vectors of
//!   vector:2,d plus k random elements extending the basis
//! - `sidon_greedy(size)` — greedy Sidon set over a seeded candidate order
//! - `coset_union(H;translates;noise)` — union of t+H with `noise` random
//!   points removed from each coset
//! - `interval(len)` — {0..len-1} in a cyclic group
//! - `random(p/q)` — each element kept independently with probability p/q
//!
//! All randomness comes from ChaCha8 seeded with the instance seed, so a
//! (descriptor, group, seed) triple resolves to the same set on every
//! platform.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{Group, GroupKind, GroupSet, Side};
use crate::stability::is_sidon;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParam(msg.into())
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| bad(format!("{what}: expected integer, got {s:?}")))
}

/// Splits `name(args)` into the name and `;`-separated raw arguments.
fn split_descriptor(spec: &str) -> Result<(&str, Vec<&str>)> {
    let spec = spec.trim();
    let open = spec
        .find('(')
        .ok_or_else(|| bad(format!("generator {spec:?}: missing '('")))?;
    if !spec.ends_with(')') {
        return Err(bad(format!("generator {spec:?}: missing ')'")));
    }
    let name = &spec[..open];
    let inner = &spec[open + 1..spec.len() - 1];
    let args = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner.split(';').map(str::trim).collect()
    };
    Ok((name, args))
}

fn expect_args(name: &str, args: &[&str], n: usize) -> Result<()> {
    if args.len() != n {
        return Err(bad(format!(
            "generator {name}: expected {n} argument(s), got {}",
            args.len()
        )));
    }
    Ok(())
}

pub fn generate(spec: &str, group: &Arc<Group>, seed: u64) -> Result<GroupSet> {
    let (name, args) = split_descriptor(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match name {
        "cross" => {
            expect_args(name, &args, 1)?;
            let p = parse_usize(args[0], "cross p")?;
            match group.kind() {
                GroupKind::Vector { p: gp, d: 2 } if *gp == p => {}
                _ => return Err(bad(format!("cross({p}) requires group vector:{p},2"))),
            }
            let idx: Vec<usize> = (0..p).chain((0..p).map(|j| j * p)).collect();
            GroupSet::from_indices(group, &idx)
        }
        "subspace_plus_points" => {
            expect_args(name, &args, 2)?;
            let dim = parse_usize(args[0], "dim")?;
            let k = parse_usize(args[1], "k")?;
            let d = match group.kind() {
                GroupKind::Vector { p: 2, d } => *d,
                _ => return Err(bad("subspace_plus_points requires group vector:2,d")),
            };
            if dim + k > d {
                return Err(bad(format!(
                    "subspace_plus_points({dim};{k}): needs dim+k <= {d}"
                )));
            }
            // span of the first dim basis vectors is exactly the low 2^dim indices
            let mut set = GroupSet::from_indices(group, &(0..1 << dim).collect::<Vec<_>>())?;
            let mut span = set.clone();
            for _ in 0..k {
                let x = loop {
                    let x = rng.gen_range(0..group.order());
                    if !span.contains(x) {
                        break x;
                    }
                };
                set = set.union(&GroupSet::singleton(group, x)?)?;
                span = set.generated_subgroup()?;
            }
            Ok(set)
        }
        "sidon_greedy" => {
            expect_args(name, &args, 1)?;
            let size = parse_usize(args[0], "size")?;
            if !group.is_abelian() {
                return Err(Error::NonAbelian);
            }
            let mut order: Vec<usize> = (0..group.order()).collect();
            shuffle(&mut order, &mut rng);
            let mut set = GroupSet::empty(group);
            for x in order {
                if set.card() == size {
                    break;
                }
                let candidate = set.union(&GroupSet::singleton(group, x)?)?;
                if is_sidon(&candidate)?.sidon {
                    set = candidate;
                }
            }
            if set.card() < size {
                return Err(bad(format!(
                    "sidon_greedy({size}): group of order {} exhausted at {}",
                    group.order(),
                    set.card()
                )));
            }
            Ok(set)
        }
        "coset_union" => {
            expect_args(name, &args, 3)?;
            let h = GroupSet::parse_literal(group, args[0])?;
            if !h.is_subgroup() {
                return Err(Error::NotASubgroup);
            }
            let translates: Vec<usize> = args[1]
                .split(',')
                .map(|t| parse_usize(t, "translate"))
                .collect::<Result<_>>()?;
            let noise = parse_usize(args[2], "noise")?;
            if noise >= h.card() {
                return Err(bad(format!(
                    "coset_union: noise {noise} must be below |H| = {}",
                    h.card()
                )));
            }
            let mut set = GroupSet::empty(group);
            for &t in &translates {
                if t >= group.order() {
                    return Err(bad(format!("translate {t} out of range")));
                }
                let mut coset = h.translate(t, Side::Left).elements();
                for _ in 0..noise {
                    let i = rng.gen_range(0..coset.len());
                    coset.swap_remove(i);
                }
                set = set.union(&GroupSet::from_indices(group, &coset)?)?;
            }
            Ok(set)
        }
        "interval" => {
            expect_args(name, &args, 1)?;
            let len = parse_usize(args[0], "len")?;
            if !matches!(group.kind(), GroupKind::Cyclic { .. }) {
                return Err(bad("interval requires a cyclic group"));
            }
            if len > group.order() {
                return Err(bad(format!("interval({len}) exceeds group order")));
            }
            GroupSet::from_indices(group, &(0..len).collect::<Vec<_>>())
        }
        "random" => {
            expect_args(name, &args, 1)?;
            let (num, den) = args[0]
                .split_once('/')
                .ok_or_else(|| bad("random density must be p/q"))?;
            let num = parse_usize(num, "density numerator")? as u32;
            let den = parse_usize(den, "density denominator")? as u32;
            if den == 0 || num > den {
                return Err(bad("random density must lie in [0, 1]"));
            }
            let idx: Vec<usize> = (0..group.order())
                .filter(|_| rng.gen_ratio(num, den))
                .collect();
            GroupSet::from_indices(group, &idx)
        }
        other => Err(bad(format!("unknown generator {other:?}"))),
    }
}

/// Fisher-Yates with explicit arithmetic so the result depends only on the
/// ChaCha8 stream, not on distribution internals of a particular rand release.
fn shuffle(xs: &mut [usize], rng: &mut ChaCha8Rng) {
    for i in (1..xs.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        xs.swap(i, j);
    }
}

use rand::RngCore;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::growth_stats;
    use crate::stability::is_sidon;

    #[test]
    fn cross_shape_and_doubling() {
        let v = Group::parse("vector:3,2").unwrap();
        let a = generate("cross(3)", &v, 0).unwrap();
        assert_eq!(a.elements(), vec![0, 1, 2, 3, 6]);
        let stats = growth_stats(&a).unwrap();
        assert_eq!(stats.doubling, crate::growth::rat(9, 5));
        assert!(generate("cross(3)", &Group::parse("cyclic:9").unwrap(), 0).is_err());
        assert!(generate("cross(5)", &v, 0).is_err());
    }

    #[test]
    fn subspace_plus_points_basis_extension() {
        let v = Group::parse("vector:2,5").unwrap();
        for seed in 0..10 {
            let a = generate("subspace_plus_points(2;2)", &v, seed).unwrap();
            assert_eq!(a.card(), 6);
            // the 4 subspace points plus 2 points independent over it
            for x in 0..4 {
                assert!(a.contains(x));
            }
            assert_eq!(a.generated_subgroup().unwrap().card(), 16);
        }
        assert!(generate("subspace_plus_points(4;2)", &v, 0).is_err());
    }

    #[test]
    fn sidon_greedy_validates() {
        let g = Group::parse("cyclic:101").unwrap();
        for size in 3..=6 {
            for seed in [0u64, 1, 7] {
                let a = generate(&format!("sidon_greedy({size})"), &g, seed).unwrap();
                assert_eq!(a.card(), size);
                assert!(is_sidon(&a).unwrap().sidon);
            }
        }
        // far too large for the group
        assert!(generate("sidon_greedy(60)", &g, 0).is_err());
    }

    #[test]
    fn coset_union_exact_and_noisy() {
        let g = Group::parse("cyclic:24").unwrap();
        let a = generate("coset_union(0,8,16;0,1;0)", &g, 0).unwrap();
        assert_eq!(a.elements(), vec![0, 1, 8, 9, 16, 17]);

        let g96 = Group::parse("cyclic:96").unwrap();
        let h: Vec<String> = (0..96).step_by(4).map(|x| x.to_string()).collect();
        let spec = format!("coset_union({};0,1,2;1)", h.join(","));
        let a = generate(&spec, &g96, 3).unwrap();
        assert_eq!(a.card(), 3 * 24 - 3); // one element removed per coset
        assert!(generate("coset_union(0,8;0;0)", &g, 0).is_err()); // not a subgroup
    }

    #[test]
    fn interval_and_random() {
        let g = Group::parse("cyclic:12").unwrap();
        let a = generate("interval(5)", &g, 0).unwrap();
        assert_eq!(a.elements(), vec![0, 1, 2, 3, 4]);
        assert!(generate("interval(13)", &g, 0).is_err());
        assert!(generate("interval(3)", &Group::parse("vector:2,3").unwrap(), 0).is_err());

        let r0 = generate("random(1/3)", &g, 42).unwrap();
        let r1 = generate("random(1/3)", &g, 42).unwrap();
        assert_eq!(r0, r1); // same seed, same set
        assert_eq!(generate("random(1/1)", &g, 0).unwrap().card(), 12);
        assert!(generate("random(0/0)", &g, 0).is_err());
        assert!(generate("random(3/2)", &g, 0).is_err());
    }

    #[test]
    fn malformed_descriptors() {
        let g = Group::parse("cyclic:12").unwrap();
        for spec in ["interval", "interval(5", "frobnicate(1)", "interval(a)"] {
            assert!(generate(spec, &g, 0).is_err(), "{spec}");
        }
    }
}
