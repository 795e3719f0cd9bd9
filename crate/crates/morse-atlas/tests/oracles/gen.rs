//! Random small inputs. Construction only; no library algorithm is used to decide
//! anything here.

use std::collections::BTreeSet;

use morse_atlas::gog::GraphOfGroups;
use morse_atlas::graph::VertexId;
use morse_atlas::group::word::power;
use morse_atlas::group::GroupDescriptor;
use rand::seq::SliceRandom;
use rand::Rng;

/// Connected graph of groups on at most `max_vertices` vertices with groups in
/// `{ℤ, ℤ², F₂}` and edge groups trivial or `ℤ`, with at most one extra edge beyond a
/// spanning tree (possibly a loop).
pub fn small_gog<R: Rng>(rng: &mut R, max_vertices: usize) -> GraphOfGroups {
    let n = rng.gen_range(1..=max_vertices);
    let groups: Vec<GroupDescriptor> = (0..n)
        .map(|_| [GroupDescriptor::Z, GroupDescriptor::ZPow(2), GroupDescriptor::Free(2)].choose(rng).unwrap().clone())
        .collect();
    let mut g = GraphOfGroups::with_vertices(groups);
    let mut pairs: Vec<(VertexId, VertexId)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    if rng.gen_bool(0.5) {
        pairs.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    for (u, v) in pairs {
        if rng.gen_bool(0.4) {
            g.add_trivial_edge(u, v).unwrap();
        } else {
            let mut image = |w: VertexId| {
                let rank = g.vertex_group(w).rank() as u32;
                vec![power(rng.gen_range(0..rank), *[1, -1, 2].choose(rng).unwrap())]
            };
            let (iu, iv) = (image(u), image(v));
            g.add_edge(u, v, GroupDescriptor::Z, iu, iv).unwrap();
        }
    }
    g
}

/// A random connected vertex set, grown from a random vertex along edges.
pub fn connected_subset<R: Rng>(rng: &mut R, g: &GraphOfGroups) -> BTreeSet<VertexId> {
    let vs: Vec<VertexId> = g.graph.vertices().collect();
    let mut set = BTreeSet::from([*vs.choose(rng).unwrap()]);
    let target = rng.gen_range(1..=vs.len());
    for _ in 0..4 * vs.len() {
        if set.len() >= target {
            break;
        }
        let frontier: Vec<VertexId> = g
            .graph
            .edges()
            .filter(|(_, h)| set.contains(&h.source) && !set.contains(&h.target))
            .map(|(_, h)| h.target)
            .collect();
        match frontier.choose(rng) {
            Some(&v) => {
                set.insert(v);
            }
            None => break,
        }
    }
    set
}
