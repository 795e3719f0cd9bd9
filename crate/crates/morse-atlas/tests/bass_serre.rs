mod oracles;

use morse_atlas::gog::{bass_serre_ball, project_tree};
use morse_atlas::group::word::Letter;
use morse_atlas::group::{cayley_ball, GroupDescriptor, DEFAULT_MAX_CELLS};
use morse_atlas::morse::{edges_lying_on, realisation, Metric};
use oracles::space::{check_fibers, free_product, is_tree, random_ray};
use oracles::{free_dist, FreeWord};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn free_products_project_to_trees_with_cayley_fibers() {
    for groups in [vec![GroupDescriptor::Z, GroupDescriptor::Z], vec![GroupDescriptor::Free(2), GroupDescriptor::Z]] {
        let gog = free_product(groups);
        for r in 1..=5 {
            let ball = bass_serre_ball(&gog, r, DEFAULT_MAX_CELLS).unwrap();
            let tree = project_tree(&ball).unwrap();
            assert!(is_tree(&tree.graph), "radius {r}");
            check_fibers(&gog, &ball, &tree);
        }
    }
}

fn to_free(w: &[Letter]) -> FreeWord {
    w.iter().map(|l| if l.inv { -(l.gen as i8 + 1) } else { l.gen as i8 + 1 }).collect()
}

proptest! {
    #[test]
    fn free_group_ball_metric_is_word_length(a in 0usize..1000, b in 0usize..1000) {
        let ball = cayley_ball(&GroupDescriptor::Free(2), 5, DEFAULT_MAX_CELLS).unwrap();
        let (u, v) = (a % ball.words.len(), b % ball.words.len());
        let m = Metric::new(&ball);
        let oracle = free_dist(&to_free(&ball.words[u]), &to_free(&ball.words[v]));
        prop_assert_eq!(m.dist(u, v), oracle);
        prop_assert_eq!(ball.word_distance(u, v), oracle);
    }
}

#[test]
fn realisations_are_geodesics_lying_on_their_tree_paths() {
    let gog = free_product(vec![GroupDescriptor::Free(2), GroupDescriptor::Z]);
    let ball = bass_serre_ball(&gog, 8, DEFAULT_MAX_CELLS).unwrap();
    let tree = project_tree(&ball).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let ray = random_ray(&mut rng, &gog, &tree);
        let real = realisation(&tree, &ball, &ray).unwrap();
        let path = &real.path.vertices;
        assert_eq!(path[0], ball.basepoint);
        for w in path.windows(2) {
            assert!(ball.graph.out_edges(w[0]).iter().any(|&e| ball.graph.target(e) == w[1]), "not a path");
        }
        assert_eq!(ball.distance[*path.last().unwrap()] as usize, path.len() - 1, "not geodesic: {ray:?}");
        assert_eq!(edges_lying_on(&tree, &ball, &real.path).unwrap(), ray.edges, "{ray:?}");
    }
}
