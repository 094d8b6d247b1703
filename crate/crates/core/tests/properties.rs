use proptest::prelude::*;
use wormhole_core::coherent::{build_coherent_graph, relation_system_of, RelationSystem};
use wormhole_core::continued_fraction::{dual_chain, eval_chain, expand_rational, is_zero_chain};
use wormhole_core::oracle::{enumerate_triangulations, exhaustive_decompositions};
use wormhole_core::triangulation::{
    from_extended_chain, index_vector, is_accordion, standard_accordion, ExtendedZeroChain, FramedTriangulation,
};
use wormhole_core::wormhole::{ww_decompositions, WWSequence};
use wormhole_core::{ExactRational, HJChain};

fn reduced() -> impl Strategy<Value = HJChain> {
    prop::collection::vec(2u64..=12, 1..=14).prop_map(|v| HJChain::new(v).unwrap())
}

/// Rationals m/q > 1 with small numerator and denominator.
fn rational() -> impl Strategy<Value = ExactRational> {
    (1u64..5000, 1u64..5000).prop_map(|(a, b)| ExactRational::new(a + b, b).unwrap())
}

fn framed_triangulation() -> impl Strategy<Value = FramedTriangulation> {
    (3usize..=9).prop_flat_map(|p| {
        let all = enumerate_triangulations(p).unwrap();
        (0..all.len(), 0..p).prop_map(move |(i, h)| FramedTriangulation::new(all[i].clone(), h).unwrap())
    })
}

fn weights(max_n: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(3u64..=9, 2..=max_n)
}

proptest! {
    #[test]
    fn dual_is_an_involution(c in reduced()) {
        let d = dual_chain(&c).unwrap();
        prop_assert_eq!(dual_chain(&d).unwrap(), c.clone());
        let (v, w) = (eval_chain(&c).unwrap(), eval_chain(&d).unwrap());
        prop_assert_eq!(v.numer(), w.numer());
        prop_assert_eq!(v.numer() - v.denom(), w.denom().clone());
    }

    #[test]
    fn dual_dot_counts_agree(c in reduced()) {
        // rows and columns of the dot diagram hold the same dots
        let d = dual_chain(&c).unwrap();
        let dots = |h: &HJChain| h.entries().iter().map(|e| e - 1).sum::<u64>();
        prop_assert_eq!(dots(&c), dots(&d));
        prop_assert_eq!(c.len() + d.len(), dots(&c) as usize + 1);
    }

    #[test]
    fn expand_inverts_eval(c in reduced()) {
        prop_assert_eq!(expand_rational(&eval_chain(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn eval_inverts_expand(v in rational()) {
        prop_assert_eq!(eval_chain(&expand_rational(&v).unwrap()).unwrap(), v);
    }

    #[test]
    fn index_vectors_are_zero_chains(ft in framed_triangulation()) {
        let c = index_vector(&ft);
        let s = c.len() as u64;
        prop_assert_eq!(c.body().iter().sum::<u64>() + c.hidden(), 3 * (s - 1));
        prop_assert!(is_zero_chain(&HJChain::new(c.body().to_vec()).unwrap()));
        let back = from_extended_chain(&c).unwrap();
        prop_assert_eq!(index_vector(&back), c);
    }

    #[test]
    fn rehiding_is_reframing(ft in framed_triangulation(), pos in 1usize..=9) {
        let c = index_vector(&ft);
        let pos = 1 + (pos - 1) % (c.len() + 1);
        let moved = wormhole_core::triangulation::reframe(&ft, ft.vertex_at(pos));
        prop_assert_eq!(index_vector(&moved), c.rehidden(pos));
    }

    #[test]
    fn zero_value_iff_triangulable(body in prop::collection::vec(1u64..=5, 1..=8)) {
        let s = body.len() as i64;
        let hidden = 3 * (s - 1) - body.iter().sum::<u64>() as i64;
        let chain = HJChain::new(body.clone()).unwrap();
        let zero = is_zero_chain(&chain);
        let built = hidden >= 1 && ExtendedZeroChain::new(body, hidden as u64).is_ok();
        prop_assert_eq!(zero, built);
    }

    #[test]
    fn accordion_frames_differ(x in weights(6)) {
        let chains: Vec<ExtendedZeroChain> =
            (0..x.len()).map(|m| index_vector(&standard_accordion(&x, m).unwrap())).collect();
        for i in 0..chains.len() {
            prop_assert!(is_accordion(standard_accordion(&x, i).unwrap().triangulation()));
            for j in 0..i {
                prop_assert_ne!(&chains[i], &chains[j]);
            }
        }
    }

    #[test]
    fn accordion_realizes_its_system(x in weights(6), m in 0usize..6) {
        let n = x.len();
        let m = m % n;
        let ft = standard_accordion(&x, m).unwrap();
        let sys = relation_system_of(&ft).unwrap();
        let graph = build_coherent_graph(&ft).unwrap();
        prop_assert_eq!(&graph.weights, &x);
        prop_assert!(graph.satisfies(&sys));
        if let Ok(table) = RelationSystem::standard(n, m) {
            prop_assert_eq!(sys, table);
        }
    }

    #[test]
    fn library_matches_oracle(k in prop::collection::vec(2u64..=6, 1..=14)) {
        let lib: Vec<(usize, usize)> =
            ww_decompositions(&WWSequence::new(k.clone()).unwrap()).iter().map(|d| (d.alpha, d.beta)).collect();
        prop_assert_eq!(lib, exhaustive_decompositions(&k).unwrap());
    }
}
