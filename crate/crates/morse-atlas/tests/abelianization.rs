mod oracles;

use morse_atlas::gog::GraphOfGroups;
use morse_atlas::group::word::Letter;
use morse_atlas::group::{abelianize, smith_diagonal, GroupDescriptor, Word};
use oracles::gen::{connected_subset, small_gog};
use oracles::{abelianization_by_minors, det};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn abelianization(g: &GraphOfGroups) -> (usize, Vec<u64>) {
    let p = g.fundamental_presentation(&g.graph.spanning_tree().unwrap()).unwrap();
    let a = p.abelianization().unwrap();
    let (rank, torsion) = abelianization_by_minors(p.rank(), &p.relators);
    assert_eq!((a.free_rank, a.torsion.clone()), (rank, torsion), "library and minor oracle disagree");
    (a.free_rank, a.torsion)
}

/// `ℤ² ∗_ℤ ℤ²` amalgamated over `b = a'`, which is `F₂ × ℤ`.
fn g1() -> GraphOfGroups {
    let mut g = GraphOfGroups::with_vertices(vec![GroupDescriptor::ZPow(2), GroupDescriptor::ZPow(2)]);
    g.add_edge(0, 1, GroupDescriptor::Z, vec![vec![Letter::pos(1)]], vec![vec![Letter::pos(0)]]).unwrap();
    g
}

#[test]
fn amalgam_of_planes_over_a_line() {
    let g = g1();
    assert_eq!(abelianization(&g), (3, vec![]));
    let all = g.graph.vertex_set().clone();
    assert_eq!(abelianization(&g.collapse(&all).unwrap()), (3, vec![]));
}

#[test]
fn determinant_oracle_sanity() {
    assert_eq!(det(&[vec![2, 1], vec![1, 3]]), 5);
    assert_eq!(det(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]), -1);
    let w = |s: &[(u32, bool)]| -> Word { s.iter().map(|&(g, inv)| Letter { gen: g, inv }).collect() };
    // ⟨a, b | a², b³⟩ abelianizes to ℤ/6.
    assert_eq!(abelianization_by_minors(2, &[w(&[(0, false), (0, false)]), w(&[(1, false); 3])]), (0, vec![6]));
}

#[test]
fn collapse_preserves_abelianization_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..60 {
        let g = small_gog(&mut rng, 4);
        g.validate().unwrap();
        let before = abelianization(&g);
        let ys = connected_subset(&mut rng, &g);
        let after = abelianization(&g.collapse(&ys).unwrap());
        assert_eq!(before, after, "collapsing {ys:?} in {g:?}");
    }
}

proptest! {
    #[test]
    fn smith_diagonal_matches_determinantal_divisors(
        m in prop::collection::vec(prop::collection::vec(-6i64..=6, 4), 1..5)
    ) {
        let diag = smith_diagonal(&m).unwrap();
        let relators: Vec<Word> = m
            .iter()
            .map(|row| row.iter().enumerate().flat_map(|(g, &k)| {
                let l = if k >= 0 { Letter::pos(g as u32) } else { Letter::neg(g as u32) };
                std::iter::repeat_n(l, k.unsigned_abs() as usize)
            }).collect())
            .collect();
        let (rank, torsion) = abelianization_by_minors(4, &relators);
        let a = abelianize(4, &relators).unwrap();
        prop_assert_eq!(a.free_rank, rank);
        prop_assert_eq!(&a.torsion, &torsion);
        prop_assert!(diag.windows(2).all(|w| w[1] % w[0] == 0));
        prop_assert_eq!(diag.iter().filter(|&&d| d > 1).copied().collect::<Vec<_>>(), torsion);
    }
}
