mod oracles;

use morse_atlas::group::word::power;
use morse_atlas::group::{cayley_ball, CayleyBall, GroupDescriptor, DEFAULT_MAX_CELLS};
use morse_atlas::morse::{critical_value, find_bad_segments, PathInBall, SearchOptions};
use oracles::{critical_value_bruteforce, free_dist, free_neighbors, z2_dist, z2_neighbors, FreeWord, Z2};

const RADIUS: u32 = 8;

fn axis(ball: &CayleyBall, len: usize) -> PathInBall {
    PathInBall::new((0..=len).map(|k| ball.vertex_of(&power(0, k as i64)).unwrap()).collect())
}

fn z2_oracle(len: i32, c: (f64, f64)) -> u32 {
    let seg: Vec<Z2> = (0..=len).map(|x| (x, 0)).collect();
    let in_ball = |p: &Z2| z2_dist(p, &(0, 0)) <= RADIUS;
    critical_value_bruteforce(&seg, c.0, c.1, &z2_neighbors, &z2_dist, &in_ball)
}

fn f2_oracle(len: usize, c: (f64, f64)) -> u32 {
    let seg: Vec<FreeWord> = (0..=len).map(|k| vec![1i8; k]).collect();
    let in_ball = |p: &FreeWord| p.len() as u32 <= RADIUS;
    let nb = |p: &FreeWord| free_neighbors(p, 2);
    let d = |a: &FreeWord, b: &FreeWord| free_dist(a, b);
    critical_value_bruteforce(&seg, c.0, c.1, &nb, &d, &in_ball)
}

#[test]
fn plane_axes_match_brute_force() {
    let ball = cayley_ball(&GroupDescriptor::ZPow(2), RADIUS, DEFAULT_MAX_CELLS).unwrap();
    let c = (3.0, 0.0);
    let mut last = 0;
    for len in 1..=4 {
        let v = critical_value(&ball, &axis(&ball, len), c, SearchOptions::default()).unwrap();
        assert!(!v.inconclusive);
        assert_eq!(v.value, z2_oracle(len as i32, c), "length {len}");
        assert!(v.value >= last, "nondecreasing in length");
        last = v.value;
    }
    assert_eq!(last, 4);
}

#[test]
fn plane_axes_at_other_constants() {
    let ball = cayley_ball(&GroupDescriptor::ZPow(2), RADIUS, DEFAULT_MAX_CELLS).unwrap();
    for c in [(1.0, 0.0), (1.0, 2.0), (2.0, 1.0)] {
        for len in 1..=3 {
            let v = critical_value(&ball, &axis(&ball, len), c, SearchOptions::default()).unwrap();
            assert_eq!(v.value, z2_oracle(len as i32, c), "{c:?} length {len}");
        }
    }
}

#[test]
fn free_group_is_uniformly_thin() {
    let ball = cayley_ball(&GroupDescriptor::Free(2), RADIUS, DEFAULT_MAX_CELLS).unwrap();
    for c in [(3.0, 0.0), (2.0, 2.0), (3.0, 3.0), (1.0, 4.0)] {
        for len in 1..=4 {
            let v = critical_value(&ball, &axis(&ball, len), c, SearchOptions::default()).unwrap();
            assert!(v.value <= 2, "{c:?} length {len}");
            // The brute force grows quickly with ε; longer segments at (3, 3) are left
            // to the library search alone.
            if c != (3.0, 3.0) || len <= 2 {
                assert_eq!(v.value, f2_oracle(len, c), "{c:?} length {len}");
            }
        }
    }
}

#[test]
fn bad_segments_separate_plane_from_tree() {
    let z2 = cayley_ball(&GroupDescriptor::ZPow(2), 6, DEFAULT_MAX_CELLS).unwrap();
    let bad = find_bad_segments(&z2, (3.0, 0.0), 3, 3, SearchOptions::default()).unwrap();
    assert!(!bad.is_empty());
    for b in &bad {
        assert!(b.value.value >= 3);
    }
    let f2 = cayley_ball(&GroupDescriptor::Free(2), 6, DEFAULT_MAX_CELLS).unwrap();
    assert!(find_bad_segments(&f2, (3.0, 0.0), 3, 3, SearchOptions::default()).unwrap().is_empty());
}
