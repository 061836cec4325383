//! Acceptance gate: one test per criterion, each emitting a pass/fail line.

use std::collections::HashSet;
use std::panic::{catch_unwind, UnwindSafe};
use std::sync::Arc;

use num_rational::BigRational;

use cosetlab::gen::generate;
use cosetlab::group::{enumerate_subgroups, Group, GroupSet, Side, DEFAULT_SUBGROUP_BUDGET};
use cosetlab::growth::{
    check_14k3, exponent_bound_check, growth_stats, plunnecke_check, ruzsa_cover,
};
use cosetlab::stability::{classify_dichotomy, max_ladder, weak_normality_degree};
use cosetlab::structure::{refine_transversal, theorem_a_search, theorem_b_search};
use cosetlab::sweep::run_experiment;

fn criterion(n: usize, name: &str, body: impl FnOnce() + UnwindSafe) {
    match catch_unwind(body) {
        Ok(()) => println!("acceptance {n:2} ({name}): PASS"),
        Err(e) => {
            println!("acceptance {n:2} ({name}): FAIL");
            std::panic::resume_unwind(e);
        }
    }
}

fn rat(num: usize, den: usize) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Seeded nonempty random sets over a fixed mixed corpus of groups.
fn corpus_sets(total: usize, abelian_only: bool) -> Vec<GroupSet> {
    let descs = [
        "cyclic:12",
        "cyclic:20",
        "cyclic:30",
        "vector:2,4",
        "vector:3,2",
        "vector:5,2",
        "dihedral:6",
        "symmetric:4",
        "product:cyclic:4+cyclic:6",
    ];
    let groups: Vec<Arc<Group>> = descs
        .iter()
        .map(|d| Group::parse(d).unwrap())
        .filter(|g| !abelian_only || g.is_abelian())
        .collect();
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < total {
        let g = &groups[(seed as usize) % groups.len()];
        let a = generate("random(1/3)", g, seed).unwrap();
        seed += 1;
        if !a.is_empty() {
            out.push(a);
        }
    }
    out
}

#[test]
fn criterion_01_cross_ratio() {
    criterion(1, "cross-example doubling p^2/(2p-1)", || {
        for p in [3usize, 5, 7, 11, 13] {
            let g = Group::parse(&format!("vector:{p},2")).unwrap();
            let a = generate(&format!("cross({p})"), &g, 0).unwrap();
            let stats = growth_stats(&a).unwrap();
            assert_eq!(stats.doubling, rat(p * p, 2 * p - 1), "p = {p}");
        }
    });
}

#[test]
fn criterion_02_dichotomy_equivalence() {
    criterion(2, "2-stable = 2-wn = coset-or-empty, exhaustive", || {
        let mut groups: Vec<Arc<Group>> = (1..=10)
            .map(|n| Group::parse(&format!("cyclic:{n}")).unwrap())
            .collect();
        groups.push(Group::parse("vector:2,3").unwrap());
        groups.push(Group::parse("symmetric:3").unwrap());
        for g in &groups {
            let n = g.order();
            for mask in 0u32..1 << n {
                let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 != 0).collect();
                let a = GroupSet::from_indices(g, &idx).unwrap();
                let d = classify_dichotomy(&a).unwrap();
                assert!(
                    d.two_stable == d.two_wn && d.two_wn == d.coset_or_empty,
                    "group {:?} mask {mask:#b}: {d:?}",
                    g.kind()
                );
            }
        }
    });
}

#[test]
fn criterion_03_wn_implies_stability() {
    criterion(3, "max_ladder <= wn_degree on 500 random sets", || {
        for a in corpus_sets(500, false) {
            let (ml, _) = max_ladder(&a, 4).unwrap();
            let wn = weak_normality_degree(&a);
            assert!(
                ml <= wn.degree,
                "max_ladder {ml} > wn_degree {} on {a:?}",
                wn.degree
            );
        }
    });
}

#[test]
fn criterion_04_sidon_suite() {
    criterion(4, "sidon_greedy: max_ladder = 2, wn_degree >= s", || {
        let g = Group::parse("cyclic:101").unwrap();
        for s in 3usize..=6 {
            for seed in 0u64..6 {
                let a = generate(&format!("sidon_greedy({s})"), &g, seed).unwrap();
                let (ml, _) = max_ladder(&a, 5).unwrap();
                assert_eq!(ml, 2, "size {s} seed {seed}");
                let wn = weak_normality_degree(&a);
                assert!(wn.degree >= s, "size {s} seed {seed}: degree {}", wn.degree);
            }
        }
    });
}

/// Oracle: number of distinct left cosets xH meeting A.
fn coset_count(a: &GroupSet, h: &GroupSet) -> usize {
    a.iter()
        .map(|x| h.translate(x, Side::Left).canonical_key())
        .collect::<HashSet<_>>()
        .len()
}

fn seeded_pairs(total: usize) -> Vec<(GroupSet, GroupSet)> {
    let descs = ["cyclic:24", "cyclic:36", "vector:2,4", "dihedral:6", "symmetric:4"];
    let pool: Vec<(Arc<Group>, Vec<GroupSet>)> = descs
        .iter()
        .map(|d| {
            let g = Group::parse(d).unwrap();
            let subs = enumerate_subgroups(&g, DEFAULT_SUBGROUP_BUDGET).unwrap();
            (g, subs)
        })
        .collect();
    let mut out = Vec::new();
    let mut seed = 1_000u64;
    while out.len() < total {
        let (g, subs) = &pool[(seed as usize) % pool.len()];
        let a = generate("random(1/3)", g, seed).unwrap();
        let h = subs[(seed as usize / pool.len()) % subs.len()].clone();
        seed += 1;
        if !a.is_empty() {
            out.push((a, h));
        }
    }
    out
}

#[test]
fn criterion_05_ruzsa_cover() {
    criterion(5, "ruzsa_cover exactness on 200 pairs", || {
        for (a, h) in seeded_pairs(200) {
            let cover = ruzsa_cover(&a, &h).unwrap();
            let mut union = GroupSet::empty(a.group());
            for &c in &cover.c {
                assert!(a.contains(c), "representative outside A");
                let coset = h.translate(c, Side::Left);
                assert!(!union.intersects(&coset).unwrap(), "cosets overlap");
                union = union.union(&coset).unwrap();
            }
            assert!(a.is_subset_of(&union).unwrap(), "A not covered");
            assert_eq!(cover.c.len(), coset_count(&a, &h), "not the exact coset count");
        }
    });
}

#[test]
fn criterion_06_tripling_and_measure_bound() {
    criterion(6, "|BBB| <= 14K^3|A| and mu(A) >= (14K^3)^-1, 500 sets", || {
        for a in corpus_sets(500, false) {
            let c = check_14k3(&a).unwrap();
            assert!(c.pass, "tripling bound fails on {a:?}");
            // recompute both inequalities from raw quantities
            let k = growth_stats(&a).unwrap().tripling;
            let fourteen_k3 = rat(14, 1) * &k * &k * &k;
            assert!(
                rat(c.bbb_card, 1) <= fourteen_k3.clone() * rat(a.card(), 1),
                "size bound fails on {a:?}"
            );
            assert!(
                c.mu_a >= rat(1, 1) / fourteen_k3,
                "measure bound fails on {a:?}"
            );
        }
    });
}

struct PlantedInstance {
    group: Arc<Group>,
    spec: String,
    h: GroupSet,
    translates: usize,
}

fn planted_instances() -> Vec<PlantedInstance> {
    // (group order, subgroup generator, translate count) — orders <= 128
    let layouts = [
        (24usize, 8usize, 2usize),
        (24, 4, 3),
        (36, 6, 3),
        (48, 8, 4),
        (60, 12, 3),
        (96, 12, 4),
        (120, 24, 4),
        (128, 16, 3),
        (100, 20, 2),
        (84, 14, 3),
    ];
    let mut out = Vec::new();
    let mut salt = 0usize;
    while out.len() < 100 {
        let (n, gen_el, t) = layouts[salt % layouts.len()];
        let group = Group::parse(&format!("cyclic:{n}")).unwrap();
        let h = GroupSet::singleton(&group, gen_el)
            .unwrap()
            .generated_subgroup()
            .unwrap();
        // t distinct cosets of H: shift reps by a salt-dependent offset
        let reps: Vec<String> = (0..t).map(|i| ((i + salt) % gen_el).to_string()).collect();
        let h_lit: Vec<String> = h.elements().iter().map(|x| x.to_string()).collect();
        let spec = format!("gen:coset_union({};{};0)", h_lit.join(","), reps.join(","));
        out.push(PlantedInstance {
            group,
            spec,
            h,
            translates: t,
        });
        salt += 1;
    }
    out
}

#[test]
fn criterion_07_theorem_a_recovery() {
    criterion(7, "theorem_a_search recovers planted coset unions", || {
        for inst in planted_instances() {
            let a = cosetlab::sweep::resolve_set(&inst.group, &inst.spec, 0).unwrap();
            let found = theorem_a_search(&a, &rat(1, 1), DEFAULT_SUBGROUP_BUDGET).unwrap();
            let planted = found
                .within_eps
                .iter()
                .find(|s| s.h == inst.h)
                .expect("planted subgroup scored");
            assert_eq!(planted.symdiff, 0, "{}", inst.spec);
            assert_eq!(planted.cover_size, inst.translates, "{}", inst.spec);
        }
        // noisy clause: |H| large enough that 1 removal stays under 5%
        for (n, gen_el, t, seed) in [
            (96usize, 4usize, 3usize, 11u64),
            (96, 4, 2, 12),
            (128, 4, 3, 13),
            (128, 4, 2, 14),
            (120, 5, 3, 15),
        ] {
            let group = Group::parse(&format!("cyclic:{n}")).unwrap();
            let h = GroupSet::singleton(&group, gen_el)
                .unwrap()
                .generated_subgroup()
                .unwrap();
            assert!(h.card() >= 20);
            let h_lit: Vec<String> = h.elements().iter().map(|x| x.to_string()).collect();
            let reps: Vec<String> = (0..t).map(|i| i.to_string()).collect();
            let spec = format!("gen:coset_union({};{};1)", h_lit.join(","), reps.join(","));
            let a = cosetlab::sweep::resolve_set(&group, &spec, seed).unwrap();
            let planted_noise = t; // 1 removal per coset
            let found = theorem_a_search(&a, &rat(1, 1), DEFAULT_SUBGROUP_BUDGET).unwrap();
            let best = &found.within_eps[0];
            assert!(
                best.symdiff <= 2 * planted_noise,
                "best symdiff {} on {spec}",
                best.symdiff
            );
            let planted = found.within_eps.iter().find(|s| s.h == h).unwrap();
            assert!(
                planted.symdiff <= 2 * planted_noise,
                "planted symdiff {} on {spec}",
                planted.symdiff
            );
        }
    });
}

#[test]
fn criterion_08_refinement_optimality() {
    criterion(8, "majority refinement is brute-force optimal, |C| <= 12", || {
        let mut checked = 0usize;
        for (a, h) in seeded_pairs(120) {
            let cover = ruzsa_cover(&a, &h).unwrap();
            if cover.c.len() > 12 {
                continue;
            }
            checked += 1;
            let c_prime = refine_transversal(&a, &h, &cover.c).unwrap();
            let symdiff_of = |sub: &[usize]| {
                let mut ch = GroupSet::empty(a.group());
                for &x in sub {
                    ch = ch.union(&h.translate(x, Side::Left)).unwrap();
                }
                a.symdiff(&ch).unwrap().card()
            };
            let ours = symdiff_of(&c_prime);
            let best = (0u32..1 << cover.c.len())
                .map(|m| {
                    let sub: Vec<usize> = cover
                        .c
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| m >> i & 1 != 0)
                        .map(|(_, &x)| x)
                        .collect();
                    symdiff_of(&sub)
                })
                .min()
                .unwrap();
            assert_eq!(ours, best, "A = {a:?}, H = {h:?}");
        }
        assert!(checked >= 60, "only {checked} instances in scope");
    });
}

#[test]
fn criterion_09_theorem_b_cross() {
    criterion(9, "theorem_b on cross(p): both axes, complexity <= 2", || {
        for p in [3usize, 5, 7] {
            let g = Group::parse(&format!("vector:{p},2")).unwrap();
            let a = generate(&format!("cross({p})"), &g, 0).unwrap();
            let out = theorem_b_search(&a, 2, DEFAULT_SUBGROUP_BUDGET).unwrap();
            assert_eq!(out.cosets.len(), 2, "p = {p}");
            let axis_x = GroupSet::from_indices(&g, &(0..p).collect::<Vec<_>>()).unwrap();
            let axis_y =
                GroupSet::from_indices(&g, &(0..p).map(|j| j * p).collect::<Vec<_>>()).unwrap();
            let hs: Vec<&GroupSet> = out.cosets.iter().map(|c| &c.h).collect();
            assert!(hs.contains(&&axis_x) && hs.contains(&&axis_y), "p = {p}");
            for c in &out.cosets {
                assert_eq!(c.g, 0, "p = {p}");
                let e = c.expr.as_ref().expect("axis synthesized");
                assert!(e.complexity() <= 2, "p = {p}");
                assert_eq!(e.eval(&a), c.h, "p = {p}");
            }
        }
    });
}

#[test]
fn criterion_10_plunnecke_and_exponent() {
    criterion(10, "plunnecke on 500 abelian sets, exponent on vector:2,d", || {
        for a in corpus_sets(500, true) {
            for (k, l) in [(2usize, 0usize), (3, 0), (2, 2)] {
                let c = plunnecke_check(&a, k, l).unwrap();
                assert!(c.pass, "({k},{l}) fails on {a:?}");
            }
        }
        let mut done = 0usize;
        let mut seed = 5_000u64;
        while done < 100 {
            let d = 2 + (seed as usize) % 5; // d in 2..=6
            let g = Group::parse(&format!("vector:2,{d}")).unwrap();
            let a = generate("random(1/3)", &g, seed).unwrap();
            seed += 1;
            if a.is_empty() {
                continue;
            }
            let c = exponent_bound_check(&a, 2).unwrap();
            assert!(c.pass, "exponent bound fails on {a:?}");
            done += 1;
        }
    });
}

#[test]
fn criterion_11_sweep_determinism() {
    criterion(11, "sweeps are byte-identical and match goldens", || {
        let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/sweep_config.json");
        let golden_dir =
            std::path::Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden"));
        let tmp = tempfile::tempdir().unwrap();
        let (out1, out2) = (tmp.path().join("run1"), tmp.path().join("run2"));
        assert_eq!(run_experiment(fixture.as_ref(), &out1), 0);
        assert_eq!(run_experiment(fixture.as_ref(), &out2), 0);
        let mut names: Vec<String> = std::fs::read_dir(golden_dir)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        assert!(names.contains(&"summary.csv".to_string()));
        for name in &names {
            let golden = std::fs::read(golden_dir.join(name)).unwrap();
            let b1 = std::fs::read(out1.join(name)).unwrap();
            let b2 = std::fs::read(out2.join(name)).unwrap();
            assert_eq!(b1, b2, "{name}: two runs differ");
            assert_eq!(b1, golden, "{name}: drifted from golden");
        }
        // and nothing extra appeared
        let mut produced: Vec<String> = std::fs::read_dir(&out1)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        produced.sort();
        assert_eq!(produced, names);
    });
}
