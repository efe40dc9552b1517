use std::collections::BTreeSet;

use hallgebra::cartan::{bridge_quiver, cartan_from_graph, pm_quiver, ValuedQuiver};
use hallgebra::modcat::{
    all_submodules, aut_order, euler_form, ext_dim, ext_self_card, gl_order, hom_dim, iso_classes, species_from_quiver,
    tensor_algebra_dim, Caps, FiniteField, Mat, ModCat, ModError, QuiverRep, SpeciesSpec,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn a1() -> ValuedQuiver {
    ValuedQuiver::point("1")
}

fn a2() -> ValuedQuiver {
    ValuedQuiver::linear_a(2)
}

fn b2() -> ValuedQuiver {
    ValuedQuiver::single_arrow("1", "2", 1, 2).unwrap()
}

fn sp(q: &ValuedQuiver, order: u32) -> SpeciesSpec {
    species_from_quiver(q, order).unwrap()
}

fn class_rep(s: &SpeciesSpec, dims: &[u32], pred: impl Fn(&QuiverRep) -> bool) -> QuiverRep {
    iso_classes(s, dims).unwrap().into_iter().map(|(_, r, _)| r).find(|r| pred(r)).unwrap()
}

/// Indecomposable `P` of A2: the nonzero map.
fn a2_p(s: &SpeciesSpec) -> QuiverRep {
    class_rep(s, &[1, 1], |r| !r.maps()[0][0].is_zero())
}

#[test]
fn species_examples() {
    let s = sp(&a2(), 2);
    assert_eq!(s.arrows()[0].copies, 1);
    assert_eq!(s.vertex(0).field.order(), 2);
    let s = sp(&pm_quiver(&a1()), 2);
    assert_eq!((s.arrows()[0].copies, s.arrows()[0].composite_degree), (2, 1));
    let s = sp(&b2(), 2);
    assert_eq!(s.vertex(0).field.order(), 4);
    assert_eq!(s.vertex(1).field.order(), 2);
    let a = &s.arrows()[0];
    assert_eq!((a.copies, a.composite_degree), (1, 2));
    // dim over k_1 is 1, over k_2 is 2
    assert_eq!(a.dim_k() / s.d(0), 1);
    assert_eq!(a.dim_k() / s.d(1), 2);
}

#[test]
fn unsupported_and_cyclic() {
    // d = (3, 2) has no composite-field realization
    let q = ValuedQuiver::single_arrow("1", "2", 2, 3).unwrap();
    assert!(matches!(species_from_quiver(&q, 2), Err(ModError::UnsupportedValuation { .. })));
    assert!(matches!(species_from_quiver(&a1(), 6), Err(ModError::NotPrimePower(6))));
}

#[test]
fn tensor_algebra_dims() {
    assert_eq!(tensor_algebra_dim(&sp(&a1(), 2)), 1);
    assert_eq!(tensor_algebra_dim(&sp(&pm_quiver(&a1()), 2)), 4);
    assert_eq!(tensor_algebra_dim(&sp(&a2(), 2)), 3);
    // A3 linear: 3 vertices, 2 arrows, 1 path of length 2
    assert_eq!(tensor_algebra_dim(&sp(&ValuedQuiver::linear_a(3), 3)), 6);
    // B2: k_1 ⊕ k_2 ⊕ F_4
    assert_eq!(tensor_algebra_dim(&sp(&b2(), 2)), 5);
}

#[test]
fn class_count_examples() {
    assert_eq!(iso_classes(&sp(&a1(), 2), &[2]).unwrap().len(), 1);
    assert_eq!(iso_classes(&sp(&a2(), 2), &[1, 1]).unwrap().len(), 2);
    for q in [2, 3, 4, 5] {
        assert_eq!(iso_classes(&sp(&pm_quiver(&a1()), q), &[1, 1]).unwrap().len(), q as usize + 2, "q={q}");
    }
    assert_eq!(iso_classes(&sp(&b2(), 2), &[1, 1]).unwrap().len(), 2);
    let zero = iso_classes(&sp(&a2(), 3), &[0, 0]).unwrap();
    assert_eq!(zero.len(), 1);
    assert!(zero[0].0.is_zero());
}

// ---- Burnside oracle: orbits = average number of fixed points ----

fn invertible(f: &FiniteField, n: usize) -> Vec<Mat> {
    let q = f.order() as u64;
    (0..q.pow((n * n) as u32))
        .map(|mut idx| {
            let data = (0..n * n)
                .map(|_| {
                    let d = (idx % q) as u16;
                    idx /= q;
                    d
                })
                .collect();
            Mat::from_rows(n, n, data)
        })
        .filter(|m| m.inverse(f).is_some())
        .collect()
}

/// Orbit count for a simply-laced species (all `d_i = 1`) by Burnside.
fn burnside(s: &SpeciesSpec, dims: &[u32]) -> u64 {
    let f = s.base();
    let q = f.order() as u64;
    let groups: Vec<Vec<Mat>> = dims.iter().map(|&n| invertible(f, n as usize)).collect();
    let blocks: Vec<(usize, usize, usize)> = s
        .arrows()
        .iter()
        .flat_map(|a| (0..a.copies).map(move |_| (a.src, a.tgt, 0)))
        .map(|(src, tgt, _)| (src, tgt, (dims[src] * dims[tgt]) as usize))
        .collect();
    let nvar: usize = blocks.iter().map(|b| b.2).sum();
    let points: Vec<Vec<Mat>> = (0..q.pow(nvar as u32))
        .map(|mut idx| {
            blocks
                .iter()
                .map(|&(src, tgt, _)| {
                    let (r, c) = (dims[tgt] as usize, dims[src] as usize);
                    let data = (0..r * c)
                        .map(|_| {
                            let d = (idx % q) as u16;
                            idx /= q;
                            d
                        })
                        .collect();
                    Mat::from_rows(r, c, data)
                })
                .collect()
        })
        .collect();
    let mut fixed_total = 0u64;
    let mut group_size = 0u64;
    let mut choice = vec![0usize; dims.len()];
    loop {
        group_size += 1;
        let g: Vec<&Mat> = choice.iter().enumerate().map(|(v, &i)| &groups[v][i]).collect();
        for p in &points {
            let fixed = blocks.iter().zip(p).all(|(&(src, tgt, _), a)| g[tgt].mul(f, a) == a.mul(f, g[src]));
            if fixed {
                fixed_total += 1;
            }
        }
        let mut v = 0;
        loop {
            if v == dims.len() {
                assert_eq!(fixed_total % group_size, 0);
                return fixed_total / group_size;
            }
            choice[v] += 1;
            if choice[v] < groups[v].len() {
                break;
            }
            choice[v] = 0;
            v += 1;
        }
    }
}

#[test]
fn class_counts_match_burnside() {
    let cases: Vec<(ValuedQuiver, u32, Vec<u32>)> = vec![
        (a2(), 2, vec![2, 2]),
        (a2(), 3, vec![2, 1]),
        (pm_quiver(&a1()), 2, vec![2, 1]),
        (pm_quiver(&a1()), 2, vec![1, 2]),
        (pm_quiver(&a1()), 3, vec![1, 1]),
        (pm_quiver(&a1()), 2, vec![2, 2]),
        (ValuedQuiver::linear_a(3), 2, vec![1, 2, 1]),
        (pm_quiver(&a2()), 2, vec![1, 1, 1, 0]),
    ];
    for (quiver, q, dims) in cases {
        let s = sp(&quiver, q);
        let ours = iso_classes(&s, &dims).unwrap().len() as u64;
        assert_eq!(ours, burnside(&s, &dims), "dims {dims:?} q={q}");
    }
}

#[test]
fn orbit_partition_and_orbit_stabilizer() {
    let cat = ModCat::new(sp(&pm_quiver(&a1()), 2), Caps::default());
    for dims in [[1u32, 1], [2, 1], [1, 2], [2, 2], [3, 1]] {
        let t = cat.table(&dims).unwrap();
        // every 1-dim bridge copy is free: q^(2 n_+ n_-) tuples
        assert_eq!(t.point_count(), 2u64.pow(2 * dims[0] * dims[1]));
        assert_eq!(t.classes().iter().map(|c| c.orbit_size).sum::<u64>(), t.point_count());
        for c in t.classes() {
            assert_eq!(&c.aut_order * BigUint::from(c.orbit_size), *t.group_order());
        }
    }
    // B2 over F_2: maps F_4^n -> F_2^m are all F_2-linear
    let cat = ModCat::new(sp(&b2(), 2), Caps::default());
    let t = cat.table(&[1, 2]).unwrap();
    assert_eq!(t.point_count(), 16);
    assert_eq!(t.classes().iter().map(|c| c.orbit_size).sum::<u64>(), 16);
}

#[test]
fn ids_sorted_and_zero_first() {
    let cat = ModCat::new(sp(&a2(), 2), Caps::default());
    let t = cat.table(&[2, 2]).unwrap();
    let ids: Vec<_> = t.classes().iter().map(|c| c.id.clone()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    let zero = cat.table(&[0, 0]).unwrap().classes()[0].id.clone();
    assert!(ids.iter().all(|i| zero < *i));
    for id in &ids {
        assert_eq!(&hallgebra::modcat::IsoClassId::from_hex(&id.to_hex()).unwrap(), id);
    }
}

#[test]
fn canonical_ids_are_deterministic() {
    let a = iso_classes(&sp(&pm_quiver(&a1()), 3), &[1, 2]).unwrap();
    let b = iso_classes(&sp(&pm_quiver(&a1()), 3), &[1, 2]).unwrap();
    let ia: Vec<_> = a.iter().map(|c| c.0.to_hex()).collect();
    let ib: Vec<_> = b.iter().map(|c| c.0.to_hex()).collect();
    assert_eq!(ia, ib);
}

#[test]
fn hom_examples() {
    let s = sp(&a2(), 2);
    let s1 = QuiverRep::simple(&s, 0);
    let s2 = QuiverRep::simple(&s, 1);
    assert_eq!(hom_dim(&s, &s1, &s1), 1);
    assert_eq!(hom_dim(&s, &s1, &s2), 0);
    let p = a2_p(&s);
    assert_eq!(hom_dim(&s, &p, &s2), 0);
    assert_eq!(hom_dim(&s, &p, &s1), 1);
    assert_eq!(hom_dim(&s, &s2, &p), 1);
    let sb = sp(&b2(), 2);
    assert_eq!(hom_dim(&sb, &QuiverRep::simple(&sb, 0), &QuiverRep::simple(&sb, 0)), 2);
}

#[test]
fn euler_examples() {
    let s = sp(&pm_quiver(&a1()), 2);
    assert_eq!(euler_form(&s, &[1, 0], &[0, 1]), -2);
    assert_eq!(euler_form(&s, &[0, 1], &[1, 0]), 0);
    assert_eq!(euler_form(&s, &[1, 0], &[1, 0]), 1);
    let sb = sp(&b2(), 3);
    assert_eq!(euler_form(&sb, &[1, 0], &[1, 0]), 2);
    assert_eq!(euler_form(&sb, &[1, 0], &[0, 1]), -2);
}

#[test]
fn ext_and_aut_examples() {
    let s = sp(&pm_quiver(&a1()), 2);
    let (sp_, sm) = (QuiverRep::simple(&s, 0), QuiverRep::simple(&s, 1));
    assert_eq!(ext_dim(&s, &sp_, &sm).unwrap(), 2);
    assert_eq!(ext_dim(&s, &sm, &sp_).unwrap(), 0);
    assert_eq!(ext_self_card(&s, &sp_.direct_sum(&s, &sm)).unwrap(), BigUint::from(4u32));
    assert_eq!(ext_self_card(&s, &QuiverRep::zero(&s)).unwrap(), BigUint::from(1u32));
    let s1 = sp(&a1(), 2);
    assert_eq!(aut_order(&s1, &QuiverRep::simple(&s1, 0)).unwrap(), BigUint::from(1u32));
    assert_eq!(aut_order(&s1, &QuiverRep::zero_maps(&s1, vec![2])).unwrap(), BigUint::from(6u32));
    assert_eq!(ext_dim(&s1, &QuiverRep::simple(&s1, 0), &QuiverRep::simple(&s1, 0)).unwrap(), 0);
    let s2 = sp(&a2(), 2);
    let semi = QuiverRep::zero_maps(&s2, vec![1, 1]);
    assert_eq!(aut_order(&s2, &semi).unwrap(), BigUint::from(1u32));
    // P is projective
    let p = a2_p(&s2);
    for (_, r, _) in iso_classes(&s2, &[1, 1]).unwrap() {
        assert_eq!(ext_dim(&s2, &p, &r).unwrap(), 0);
    }
    assert_eq!(gl_order(2, 2), BigUint::from(6u32));
    assert_eq!(gl_order(3, 3), BigUint::from(11232u32));
}

#[test]
fn euler_cross_check_on_small_classes() {
    for q in [2, 3] {
        for quiver in [a2(), pm_quiver(&a1()), b2()] {
            let s = sp(&quiver, q);
            let cat = ModCat::new(s.clone(), Caps::default());
            let mut reps = Vec::new();
            for dims in [[1u32, 0], [0, 1], [1, 1], [2, 1], [1, 2]] {
                if s.total_k_dim(&dims) > 3 {
                    continue;
                }
                reps.extend(cat.table(&dims).unwrap().classes().iter().map(|c| c.rep.clone()));
            }
            for m in &reps {
                for n in &reps {
                    let e = ext_dim(&s, m, n).unwrap();
                    assert_eq!(hom_dim(&s, m, n) as i64 - e as i64, euler_form(&s, m.dims(), n.dims()));
                }
            }
        }
    }
}

#[test]
fn submodule_examples() {
    let s = sp(&a1(), 2);
    assert_eq!(all_submodules(&s, &QuiverRep::zero(&s)).len(), 1);
    assert_eq!(all_submodules(&s, &QuiverRep::zero_maps(&s, vec![2])).len(), 5);
    let s2 = sp(&a2(), 2);
    let subs = all_submodules(&s2, &a2_p(&s2));
    let dims: BTreeSet<Vec<u32>> = subs.iter().map(|m| m.dims.clone()).collect();
    assert_eq!(dims, [vec![0, 0], vec![0, 1], vec![1, 1]].into_iter().collect());
    // F_q^3 has 1 + 13 + 13 + 1 subspaces at q = 3
    let s3 = sp(&a1(), 3);
    assert_eq!(all_submodules(&s3, &QuiverRep::zero_maps(&s3, vec![3])).len(), 28);
}

#[test]
fn hall_number_examples() {
    for q in [2u32, 3] {
        let cat = ModCat::new(sp(&a1(), q), Caps::default());
        let k2 = cat.table(&[2]).unwrap().classes()[0].id.clone();
        let s = cat.table(&[1]).unwrap().classes()[0].id.clone();
        let zero = cat.table(&[0]).unwrap().classes()[0].id.clone();
        assert_eq!(cat.hall_number(&k2, &s, &s).unwrap(), q as u64 + 1);
        assert_eq!(cat.hall_number(&k2, &k2, &zero).unwrap(), 1);
        assert_eq!(cat.hall_number(&k2, &zero, &k2).unwrap(), 1);
    }
    let cat = ModCat::new(sp(&a2(), 2), Caps::default());
    let p = cat.class_of(&a2_p(cat.species())).unwrap();
    let s1 = cat.class_of(&QuiverRep::simple(cat.species(), 0)).unwrap();
    let s2 = cat.class_of(&QuiverRep::simple(cat.species(), 1)).unwrap();
    assert_eq!(cat.hall_number(&p, &s1, &s2).unwrap(), 1);
    assert_eq!(cat.hall_number(&p, &s2, &s1).unwrap(), 0);
    assert!(matches!(cat.hall_number(&p, &s1, &s1), Err(ModError::DimMismatch(_))));
}

#[test]
fn hall_counts_partition_submodules() {
    let cat = ModCat::new(sp(&pm_quiver(&a1()), 2), Caps::default());
    for dims in [[1u32, 1], [2, 1], [1, 2], [2, 2]] {
        for g in cat.table(&dims).unwrap().classes() {
            let mut total = 0u64;
            for a0 in 0..=dims[0] {
                for a1 in 0..=dims[1] {
                    let beta_dims = [dims[0] - a0, dims[1] - a1];
                    for a in cat.table(&[a0, a1]).unwrap().classes() {
                        for b in cat.table(&beta_dims).unwrap().classes() {
                            total += cat.hall_number(&g.id, &a.id, &b.id).unwrap();
                        }
                    }
                }
            }
            assert_eq!(total, all_submodules(cat.species(), &g.rep).len() as u64);
        }
    }
}

/// Conjugates every arrow map by random invertible matrices (simply-laced).
fn random_conjugate(s: &SpeciesSpec, r: &QuiverRep, rng: &mut ChaCha8Rng) -> QuiverRep {
    let f = s.base();
    let q = f.order();
    let gs: Vec<Mat> = r
        .dims()
        .iter()
        .map(|&n| loop {
            let n = n as usize;
            let m = Mat::from_rows(n, n, (0..n * n).map(|_| rng.gen_range(0..q) as u16).collect());
            if m.inverse(f).is_some() {
                break m;
            }
        })
        .collect();
    let maps = s
        .arrows()
        .iter()
        .zip(r.maps())
        .map(|(a, copies)| {
            copies.iter().map(|m| gs[a.tgt].mul(f, m).mul(f, &gs[a.src].inverse(f).unwrap())).collect()
        })
        .collect();
    QuiverRep::new(s, r.dims().to_vec(), maps).unwrap()
}

#[test]
fn representative_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let s = sp(&pm_quiver(&a1()), 3);
    let cat = ModCat::new(s.clone(), Caps::default());
    let t = cat.table(&[2, 1]).unwrap();
    for c in t.classes() {
        for _ in 0..3 {
            let other = random_conjugate(&s, &c.rep, &mut rng);
            assert_eq!(cat.class_of(&other).unwrap(), c.id);
            // same submodule statistics from a different representative
            let hist = |r: &QuiverRep| {
                let mut v: Vec<(String, String)> = all_submodules(&s, r)
                    .iter()
                    .map(|m| (cat.class_of(&m.sub).unwrap().to_hex(), cat.class_of(&m.quotient).unwrap().to_hex()))
                    .collect();
                v.sort();
                v
            };
            assert_eq!(hist(&c.rep), hist(&other));
        }
    }
}

#[test]
fn euler_recovers_cartan_for_pm_quivers() {
    for q in [2, 3] {
        for g in [a1(), a2()] {
            let pm = pm_quiver(&g);
            let s = sp(&pm, q);
            let expect = hallgebra::cartan::c_pm(&cartan_from_graph(g.graph()));
            assert_eq!(s.cartan_from_euler(), expect.rows().to_vec());
        }
    }
    let s = sp(&bridge_quiver(2), 2);
    assert_eq!(s.cartan_from_euler(), vec![vec![2, -4], vec![-4, 2]]);
}

#[test]
fn caps_are_enforced() {
    let caps = Caps { enum_dim: 8, canon_dim: 6, max_points: 1 << 10 };
    let cat = ModCat::new(sp(&pm_quiver(&a1()), 2), caps);
    assert!(matches!(cat.table(&[3, 2]), Err(ModError::CapExceeded { .. })));
    assert!(matches!(cat.table(&[5, 4]), Err(ModError::CapExceeded { .. })));
    let cat = ModCat::new(sp(&a1(), 2), Caps::default());
    assert!(matches!(cat.class_of(&QuiverRep::zero_maps(cat.species(), vec![7])), Err(ModError::CapExceeded { .. })));
}

#[test]
fn checked_constructor_rejects_non_linear_maps() {
    // B2 with the arrow from the F_2 vertex into the F_4 vertex: maps must be F_2-linear
    // (any 2×1 matrix); the reverse valued arrow F_4 -> F_4 requires F_4-linearity
    let q = ValuedQuiver::single_arrow("1", "2", 1, 1).unwrap();
    let s = sp(&q, 2);
    assert!(QuiverRep::new(&s, vec![1, 1], vec![vec![Mat::from_rows(1, 1, vec![1])]]).is_ok());
    assert!(QuiverRep::new(&s, vec![1, 1], vec![vec![Mat::from_rows(1, 2, vec![1, 0])]]).is_err());
    let g2 = pm_quiver(&ValuedQuiver::single_arrow("1", "2", 1, 2).unwrap());
    let s = sp(&g2, 2);
    // +×1 (F_4) -> -×1 (F_4) bridge: F_4-linear maps only
    let bridge = s.arrows().iter().position(|a| s.d(a.src) == 2 && s.d(a.tgt) == 2).unwrap();
    let t = ModCat::new(s.clone(), Caps::default());
    let mut dims = vec![0; 4];
    dims[s.arrows()[bridge].src] = 1;
    dims[s.arrows()[bridge].tgt] = 1;
    let table = t.table(&dims).unwrap();
    // 2 copies of F_4 linear maps: 16 tuples, orbits {0} ∪ P^1(F_4) = 1 + 5
    assert_eq!(table.point_count(), 16);
    assert_eq!(table.len(), 6);
}
