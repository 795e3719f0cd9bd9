mod oracles;

use morse_atlas::boundary::{normalize, BoundaryType, Factor, FactorMultiset};
use oracles::{boundary_oracle, kind_boundary, kind_hyperbolic, kind_virtually_cyclic, Kind, KINDS};
use proptest::prelude::*;

fn factor(k: Kind) -> Factor {
    match k {
        Kind::Finite(n) => Factor::finite(format!("Z/{n}"), n as u64),
        _ => Factor::infinite(
            format!("{k:?}"),
            BoundaryType::from_name(kind_boundary(k)).unwrap(),
            kind_virtually_cyclic(k),
            kind_hyperbolic(k),
        ),
    }
}

fn classify(kinds: &[Kind]) -> Option<BoundaryType> {
    normalize(&FactorMultiset::new(kinds.iter().map(|&k| factor(k)).collect())).ok().map(|n| n.result)
}

fn infinitely_ended(kinds: &[Kind]) -> bool {
    FactorMultiset::new(kinds.iter().map(|&k| factor(k)).collect()).infinitely_ended()
}

fn kinds() -> impl Strategy<Value = Vec<Kind>> {
    prop::collection::vec(prop::sample::select(KINDS.to_vec()), 1..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn agrees_with_rule_oracle(ks in kinds()) {
        let expected = boundary_oracle(&ks);
        prop_assert_eq!(classify(&ks).map(|t| t.name()), expected, "{:?}", ks);
    }

    #[test]
    fn permutation_invariant(ks in kinds(), seed in any::<u64>()) {
        let mut shuffled = ks.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            shuffled.swap(i, (seed.rotate_left(i as u32) % (i as u64 + 1)) as usize);
        }
        prop_assert_eq!(classify(&ks), classify(&shuffled));
    }

    #[test]
    fn duplicating_a_present_type(ks in kinds(), pick in any::<prop::sample::Index>()) {
        prop_assume!(infinitely_ended(&ks));
        let k = ks[pick.index(ks.len())];
        let mut more = ks.clone();
        more.push(k);
        prop_assert_eq!(classify(&ks), classify(&more));
    }

    #[test]
    fn omega_cantor_is_two_empty_factors(ks in kinds()) {
        let mut with_graph = ks.clone();
        with_graph.push(Kind::GraphManifold);
        let mut with_empties = ks.clone();
        with_empties.extend([Kind::Empty, Kind::Empty]);
        prop_assert_eq!(classify(&with_graph), classify(&with_empties));
    }

    #[test]
    fn empty_factors_absorbed_by_non_hyperbolic_ones(ks in kinds()) {
        prop_assume!(infinitely_ended(&ks));
        prop_assume!(ks.iter().any(|&k| !kind_hyperbolic(k) && k != Kind::Empty));
        let mut more = ks.clone();
        more.push(Kind::Empty);
        prop_assert_eq!(classify(&ks), classify(&more));
    }
}

#[test]
fn oracle_examples() {
    use Kind::*;
    assert_eq!(boundary_oracle(&[Finite(2), Finite(2)]), Some("TwoPoints"));
    assert_eq!(boundary_oracle(&[Finite(2), Finite(3)]), Some("Cantor"));
    assert_eq!(boundary_oracle(&[Empty, Empty]), Some("OmegaCantor"));
    assert_eq!(boundary_oracle(&[Sphere, Empty]), Some("Sphere2FPEmpty"));
    assert_eq!(boundary_oracle(&[Sphere, Sierp, Empty]), Some("Sphere2FPOmegaSierp"));
    assert_eq!(boundary_oracle(&[Sierp]), None);
    assert_eq!(classify(&[Sierp]), None);
}
