use proptest::prelude::*;

use bcube_pef::pef::{self, FaultSet};
use bcube_pef::topology::{self, Dims, NodeId};

fn dims_pool() -> impl Strategy<Value = Dims> {
    prop::sample::select(vec![
        Dims::new(4, 1).unwrap(),
        Dims::new(4, 2).unwrap(),
        Dims::new(5, 1).unwrap(),
        Dims::new(5, 2).unwrap(),
        Dims::new(6, 1).unwrap(),
        Dims::new(8, 1).unwrap(),
        Dims::new(9, 1).unwrap(),
        Dims::new(10, 1).unwrap(),
    ])
}

proptest! {
    #[test]
    fn generated_fault_sets_always_pass_is_f_pef(
        dims in dims_pool(),
        fill in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let f = pef::gen_random_pef(dims, fill, seed).unwrap();
        prop_assert!(pef::is_f_pef(&f).unwrap());
    }

    #[test]
    fn subgraph_faults_inherit_f_pef(
        dims in dims_pool(),
        fill in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let f = pef::gen_random_pef(dims, fill, seed).unwrap();
        let d = pef::split_dimension(&f);
        for m in dims.labels() {
            let sub = pef::subgraph_faults(&f, m, d).unwrap();
            prop_assert!(pef::is_f_pef(&sub).unwrap(), "label {m}");
        }
    }

    #[test]
    fn is_f_pef_depends_only_on_count_multiset(
        counts in prop::collection::vec(0u64..=25, 3),
        perm in 0usize..6,
    ) {
        let dims = Dims::new(5, 2).unwrap();
        let perms = [[0usize, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let build = |order: &[usize; 3]| -> FaultSet {
            let mut edges = Vec::new();
            for (slot, &dim) in order.iter().enumerate() {
                let pool = topology::dimension_edges(dims, dim as u8).unwrap();
                edges.extend(pool.into_iter().take(counts[slot] as usize));
            }
            FaultSet::new(dims, edges).unwrap()
        };
        let base = build(&perms[0]);
        let shuffled = build(&perms[perm]);
        prop_assert_eq!(
            pef::is_f_pef(&base).unwrap(),
            pef::is_f_pef(&shuffled).unwrap()
        );
    }

    #[test]
    fn cross_neighbor_is_an_involution(
        dims in dims_pool(),
        code in any::<u64>(),
        dim_sel in any::<u8>(),
        label_sel in any::<u8>(),
    ) {
        let u = NodeId::from_code(dims, code % dims.node_count());
        let d = dim_sel % dims.levels() as u8;
        let l = label_sel % dims.n();
        prop_assume!(u.label(d) != l);
        let v = topology::cross_neighbor(dims, &u, d, l).unwrap();
        prop_assert!(topology::are_adjacent(&u, &v).unwrap());
        let back = topology::cross_neighbor(dims, &v, d, u.label(d)).unwrap();
        prop_assert_eq!(back, u);
    }

    #[test]
    fn project_then_lift_round_trips(
        dims in dims_pool(),
        code in any::<u64>(),
        dim_sel in any::<u8>(),
    ) {
        prop_assume!(dims.k() >= 1);
        let u = NodeId::from_code(dims, code % dims.node_count());
        let d = dim_sel % dims.levels() as u8;
        let m = u.label(d);
        let p = topology::project_node(dims, &u, d).unwrap();
        let back = topology::lift_node(dims, &p, d, m).unwrap();
        prop_assert_eq!(back, u);
    }

    #[test]
    fn node_format_parse_round_trips(
        dims in dims_pool(),
        code in any::<u64>(),
    ) {
        let u = NodeId::from_code(dims, code % dims.node_count());
        let s = dims.format_node(&u);
        prop_assert_eq!(dims.parse_node(&s).unwrap(), u);
    }
}

#[test]
fn budget_nondecreasing_above_level_zero() {
    for n in 4..=16u8 {
        for i in 1..=3u8 {
            assert!(pef::budget(n, i + 1).unwrap() >= pef::budget(n, i).unwrap());
        }
    }
}
