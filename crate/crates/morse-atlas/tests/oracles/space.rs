//! Constructions and checks for Bass-Serre balls. The checks compare against Cayley
//! balls and plain graph searches, never against the ball builder itself.

use std::collections::{BTreeSet, VecDeque};

use morse_atlas::gog::{GraphOfGroups, SpaceBall, SpaceEdgeLabel, TreeBall};
use morse_atlas::graph::{EdgeId, Graph};
use morse_atlas::group::word::{free_reduce, inverse, Letter};
use morse_atlas::group::{cayley_ball, GroupDescriptor, Word, DEFAULT_MAX_CELLS};
use morse_atlas::morse::{CombinatorialRay, TailSpec};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn free_product(groups: Vec<GroupDescriptor>) -> GraphOfGroups {
    let n = groups.len();
    let mut g = GraphOfGroups::with_vertices(groups);
    for v in 1..n {
        g.add_trivial_edge(0, v).unwrap();
    }
    g
}

pub fn is_tree(g: &Graph) -> bool {
    let vs: Vec<usize> = g.vertices().collect();
    if g.num_edge_pairs() + 1 != vs.len() {
        return false;
    }
    let mut seen = BTreeSet::from([vs[0]]);
    let mut queue = VecDeque::from([vs[0]]);
    while let Some(x) = queue.pop_front() {
        for &e in g.out_edges(x) {
            let y = g.target(e);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen.len() == vs.len()
}

/// Every fiber, read relative to its star point, is label-isomorphic to the Cayley ball
/// of its vertex group of the remaining radius.
pub fn check_fibers(gog: &GraphOfGroups, ball: &SpaceBall, tree: &TreeBall) {
    for c in 0..ball.cosets.len() {
        let fiber = ball.fiber(c);
        let star = tree.vertex_star[c];
        let v = ball.gamma_vertex[star];
        let group = gog.vertex_group(v);
        let nf = group.normal_form().unwrap();
        let cayley = cayley_ball(group, ball.radius - ball.distance[star], DEFAULT_MAX_CELLS).unwrap();
        let rel = |x: usize| nf.normalize(&[inverse(&ball.fiber_element[star]), ball.fiber_element[x].clone()].concat());
        let phi: Vec<usize> = fiber.iter().map(|&x| cayley.vertex_of(&rel(x)).expect("fiber point outside the Cayley ball")).collect();
        assert_eq!(phi.iter().collect::<BTreeSet<_>>().len(), fiber.len(), "fiber map is not injective");
        assert_eq!(fiber.len(), cayley.words.len(), "coset {c}: fiber and Cayley ball differ in size");
        let index = |x: usize| fiber.iter().position(|&y| y == x);
        let mut fiber_edges = BTreeSet::new();
        for &x in &fiber {
            for &e in ball.graph.out_edges(x) {
                if let SpaceEdgeLabel::Gen { index: i, inverse: inv, .. } = ball.edge_labels[&e] {
                    let y = index(ball.graph.target(e)).expect("generator edge leaves the fiber");
                    fiber_edges.insert((phi[index(x).unwrap()], phi[y], Letter { gen: i as u32, inv }));
                }
            }
        }
        let cayley_edges: BTreeSet<(usize, usize, Letter)> = cayley
            .graph
            .edges()
            .map(|(e, h): (EdgeId, _)| (h.source, h.target, cayley.edge_labels[&e]))
            .collect();
        assert_eq!(fiber_edges, cayley_edges, "coset {c}");
    }
}

pub fn random_reduced<R: Rng>(rng: &mut R, rank: u32, len: usize) -> Word {
    let mut w: Word = Vec::new();
    while w.len() < len {
        let l = Letter { gen: rng.gen_range(0..rank), inv: rng.gen_bool(0.5) };
        if w.last() != Some(&l.inverse()) {
            w.push(l);
        }
    }
    w
}

/// A random root-based geodesic in the tree ball followed, half of the time, by an
/// eventually periodic tail in the end vertex group.
pub fn random_ray<R: Rng>(rng: &mut R, gog: &GraphOfGroups, tree: &TreeBall) -> CombinatorialRay {
    let mut edges = Vec::new();
    let mut at = tree.root;
    let steps = rng.gen_range(0..=4);
    for _ in 0..steps {
        let out: Vec<EdgeId> = tree.graph.out_edges(at).iter().copied().filter(|e| tree.outgoing[e]).collect();
        let Some(&e) = out.choose(rng) else { break };
        edges.push(e);
        at = tree.graph.target(e);
    }
    if rng.gen_bool(0.5) && !edges.is_empty() {
        return CombinatorialRay::infinite_prefix(edges);
    }
    let rank = gog.vertex_group(tree.gamma_vertex[at]).rank() as u32;
    let period = loop {
        let len = rng.gen_range(1..=3);
        let p = random_reduced(rng, rank, len);
        if free_reduce(&[p.clone(), p.clone()].concat()).len() == 2 * p.len() {
            break p;
        }
    };
    let prefix_len = rng.gen_range(0..=2);
    let prefix: Word = random_reduced(rng, rank, prefix_len);
    let tail = if free_reduce(&[prefix.clone(), period.clone(), period.clone()].concat()).len() == prefix.len() + 2 * period.len() {
        TailSpec { prefix, period }
    } else {
        TailSpec { prefix: vec![], period }
    };
    CombinatorialRay::finite(edges, tail)
}
