mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use heesch::export::polygonize;
use heesch::heesch::decompose_layers;
use heesch::subgroup::{build_coset_table, schreier_generators, FiniteHom};
use heesch::{heesch_ge, verify_certificate, Element, GeOutcome, GroupSpec, HeeschCertificate, PartialTiling, SearchOptions, Tile};

fn word(rank: u8, max_len: usize) -> impl Strategy<Value = String> {
    prop::collection::vec((0..rank, any::<bool>()), 0..max_len).prop_map(|ls| {
        ls.into_iter()
            .map(|(l, inv)| {
                let c = (b'a' + l) as char;
                if inv {
                    format!("{c}'")
                } else {
                    c.to_string()
                }
            })
            .collect()
    })
}

const RANKS: [u8; 5] = [2, 3, 2, 2, 2];

fn specs() -> Vec<GroupSpec> {
    vec![
        GroupSpec::grid(2).unwrap(),
        GroupSpec::grid(3).unwrap(),
        GroupSpec::free(2).unwrap(),
        GroupSpec::free_product_cyclic(&[2, 3]).unwrap(),
        GroupSpec::free_product_cyclic(&[4, 5]).unwrap(),
    ]
}

fn cells() -> impl Strategy<Value = BTreeSet<(i64, i64)>> {
    prop::collection::btree_set((-3i64..4, -3i64..4), 1..20)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn group_axioms((which, x, y, z) in (0usize..5).prop_flat_map(|i| {
        let r = RANKS[i];
        (Just(i), word(r, 8), word(r, 8), word(r, 8))
    })) {
        let spec = &specs()[which];
        let (x, y, z) = (spec.parse(&x).unwrap(), spec.parse(&y).unwrap(), spec.parse(&z).unwrap());
        prop_assert_eq!(spec.mul(&spec.mul(&x, &y), &z), spec.mul(&x, &spec.mul(&y, &z)));
        prop_assert!(spec.mul(&x, &spec.inverse(&x)).is_identity());
        prop_assert_eq!(spec.mul(&x, &Element::identity()), x.clone());
        // normal forms print and parse back to themselves
        prop_assert_eq!(spec.parse(&spec.format(&x)).unwrap(), x);
    }

    #[test]
    fn polygon_round_trip(set in cells()) {
        let cs: Vec<(i64, i64)> = set.iter().copied().collect();
        let p = polygonize(&cs).unwrap();
        prop_assert_eq!(p.area(), cs.len() as f64);
        let back: BTreeSet<(i64, i64)> = p.cells().into_iter().collect();
        prop_assert_eq!(back, set);
        for l in &p.loops {
            // rectilinear, alternating horizontal and vertical edges
            let n = l.vertices.len();
            prop_assert!(n >= 4 && n % 2 == 0);
        }
    }

    #[test]
    fn layers_ignore_center_order(seed in any::<u64>(), ncenters in 1usize..12) {
        use rand::{seq::SliceRandom, SeedableRng};
        let g = GroupSpec::grid(2).unwrap();
        let tile = Tile::from_coords(&g, &[(0, 0), (1, 0)]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut centers = vec![Element::identity()];
        let mut pi = PartialTiling::new(&g, tile.clone(), centers.clone()).unwrap();
        let candidates: Vec<(i64, i64)> = (-3..4).flat_map(|u| (-3..4).map(move |v| (u, v))).collect();
        for &(u, v) in candidates.choose_multiple(&mut rng, 40) {
            if centers.len() > ncenters { break; }
            let c = g.grid_element(&[u, v]).unwrap();
            if heesch::tiling::disjoint(&g, &pi, &c) {
                pi = pi.with(&g, c.clone());
                centers.push(c);
            }
        }
        let d = decompose_layers(&g, &pi);
        centers.shuffle(&mut rng);
        let d2 = decompose_layers(&g, &PartialTiling::new(&g, tile, centers).unwrap());
        prop_assert_eq!(d, d2);
    }

    #[test]
    fn nielsen_schreier_rank(i in 0usize..64, x in 0usize..64, y in 0usize..64) {
        let groups = common::two_generated_groups();
        let grp = &groups[i % groups.len()];
        let (x, y) = (x % grp.order(), y % grp.order());
        prop_assume!(grp.generated_by(&[x, y]) == grp.order());
        let q = grp.order();
        let f2 = GroupSpec::free(2).unwrap();
        let hom = FiniteHom::from_perms(&f2, &[("a", grp.right_regular(x)), ("b", grp.right_regular(y))]).unwrap();
        let table = build_coset_table(&hom);
        let basis = schreier_generators(&f2, &table).unwrap();
        prop_assert_eq!(basis.len(), 1 + q);
        prop_assert!(basis.generators.iter().all(|g| !g.is_identity()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn certificates_survive_serialization(cs in prop::collection::btree_set((0i64..3, 0i64..3), 2..5)) {
        let g = GroupSpec::grid(2).unwrap();
        let coords: Vec<(i64, i64)> = cs.into_iter().collect();
        let tile = Tile::from_coords(&g, &coords).unwrap();
        prop_assume!(tile.is_connected());
        let opts = SearchOptions { node_limit: Some(200_000), ..SearchOptions::default() };
        if let Ok(GeOutcome::Found(cert)) = heesch_ge(&g, &tile, 1, &opts) {
            let back: HeeschCertificate = serde_json::from_str(&cert.to_json_pretty()).unwrap();
            prop_assert_eq!(&back, &cert);
            prop_assert!(verify_certificate(Some(&g), &back).unwrap().valid);
        }
    }

    #[test]
    fn translated_tiles_have_the_same_surround(cs in prop::collection::btree_set((0i64..3, 0i64..3), 2..5), du in -4i64..5, dv in -4i64..5) {
        let g = GroupSpec::grid(2).unwrap();
        let coords: Vec<(i64, i64)> = cs.iter().copied().collect();
        let moved: Vec<(i64, i64)> = cs.iter().map(|&(u, v)| (u + du, v + dv)).collect();
        let (t, m) = (Tile::from_coords(&g, &coords).unwrap(), Tile::from_coords(&g, &moved).unwrap());
        let found = |t: &Tile| matches!(heesch_ge(&g, t, 1, &SearchOptions::default()), Ok(GeOutcome::Found(_)));
        prop_assert_eq!(found(&t), found(&m));
    }
}
