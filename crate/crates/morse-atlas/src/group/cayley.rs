use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::descriptor::GroupDescriptor;
use super::engine::NormalForm;
use super::word::{Letter, Word};
use super::GroupError;
use crate::graph::{EdgeId, Graph, VertexId};

/// Default limit on the number of vertices of any ball.
pub const DEFAULT_MAX_CELLS: usize = 2_000_000;
/// Largest radius accepted by ball constructions.
pub const MAX_RADIUS: u32 = 64;

/// Ball in a Cayley graph. Vertex ids are dense, in BFS order; vertex 0 is the identity.
#[derive(Debug, Clone, Serialize)]
pub struct CayleyBall {
    pub graph: Graph,
    pub words: Vec<Word>,
    pub distance: Vec<u32>,
    pub basepoint: VertexId,
    pub radius: u32,
    pub edge_labels: BTreeMap<EdgeId, Letter>,
    pub generator_names: Vec<String>,
    /// Normal forms here are shortlex-least, hence geodesic, so `engine` gives exact
    /// word lengths.
    pub engine: NormalForm,
}

impl CayleyBall {
    pub fn vertex_of(&self, w: &[Letter]) -> Option<VertexId> {
        let w = self.engine.normalize(w);
        self.words.iter().position(|x| *x == w)
    }

    /// Word length of `u⁻¹ v` in the whole group.
    pub fn word_distance(&self, u: VertexId, v: VertexId) -> u32 {
        self.engine.mul(&super::word::inverse(&self.words[u]), &self.words[v]).len() as u32
    }
}

pub fn cayley_ball(d: &GroupDescriptor, radius: u32, max_cells: usize) -> Result<CayleyBall, GroupError> {
    d.validate()?;
    let nf = d.normal_form()?;
    cayley_ball_with(&nf, d.generator_names(), radius, max_cells)
}

pub fn cayley_ball_with(
    nf: &NormalForm,
    names: Vec<String>,
    radius: u32,
    max_cells: usize,
) -> Result<CayleyBall, GroupError> {
    if radius > MAX_RADIUS {
        return Err(GroupError::BallTooLarge { limit: MAX_RADIUS as usize, what: "radius" });
    }
    let rank = nf.rank() as u32;
    let letters: Vec<Letter> = (0..rank).flat_map(|g| [Letter::pos(g), Letter::neg(g)]).collect();
    let mut words: Vec<Word> = vec![Word::new()];
    let mut distance = vec![0u32];
    let mut index: HashMap<Word, usize> = HashMap::from([(Word::new(), 0)]);
    let mut head = 0;
    while head < words.len() {
        if distance[head] < radius {
            for &l in &letters {
                let w = nf.mul(&words[head], &[l]);
                if !index.contains_key(&w) {
                    if words.len() >= max_cells {
                        return Err(GroupError::BallTooLarge { limit: max_cells, what: "vertices" });
                    }
                    index.insert(w.clone(), words.len());
                    words.push(w);
                    distance.push(distance[head] + 1);
                }
            }
        }
        head += 1;
    }
    let mut graph = Graph::with_vertices(words.len());
    let mut edge_labels = BTreeMap::new();
    for g in 0..rank {
        let s = Letter::pos(g);
        let involution = nf.normalize(&[s, s]).is_empty();
        for (i, w) in words.iter().enumerate() {
            let h = nf.mul(w, &[s]);
            let Some(&j) = index.get(&h) else { continue };
            if j == i || (involution && j < i) {
                continue;
            }
            let (e, rev) = graph.add_edge_pair(i, j).expect("vertices exist");
            edge_labels.insert(e, s);
            edge_labels.insert(rev, s.inverse());
        }
    }
    Ok(CayleyBall { graph, words, distance, basepoint: 0, radius, edge_labels, generator_names: names, engine: nf.clone() })
}

/// Sizes of the spheres of radius 0, 1, …, stopping after `radius` or at the first empty sphere.
pub fn sphere_sizes(nf: &NormalForm, radius: u32, max_cells: usize) -> Result<Vec<usize>, GroupError> {
    let rank = nf.rank() as u32;
    let letters: Vec<Letter> = (0..rank).flat_map(|g| [Letter::pos(g), Letter::neg(g)]).collect();
    let mut seen: std::collections::HashSet<Word> = [Word::new()].into();
    let mut frontier = vec![Word::new()];
    let mut sizes = vec![1];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                let x = nf.mul(w, &[l]);
                if seen.insert(x.clone()) {
                    next.push(x);
                }
            }
        }
        if seen.len() > max_cells {
            return Err(GroupError::BallTooLarge { limit: max_cells, what: "vertices" });
        }
        sizes.push(next.len());
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_balls() {
        let z = cayley_ball(&GroupDescriptor::Z, 3, DEFAULT_MAX_CELLS).unwrap();
        assert_eq!(z.graph.num_vertices(), 7);
        assert!(z.graph.is_tree());
        let z2 = cayley_ball(&GroupDescriptor::ZPow(2), 1, DEFAULT_MAX_CELLS).unwrap();
        assert_eq!(z2.graph.num_vertices(), 5);
        let f2 = cayley_ball(&GroupDescriptor::Free(2), 2, DEFAULT_MAX_CELLS).unwrap();
        assert_eq!(f2.graph.num_vertices(), 17);
    }

    #[test]
    fn involutions_give_single_edges() {
        let c2 = cayley_ball(&GroupDescriptor::FiniteCyclic(2), 3, DEFAULT_MAX_CELLS).unwrap();
        assert_eq!((c2.graph.num_vertices(), c2.graph.num_edge_pairs()), (2, 1));
        let c5 = cayley_ball(&GroupDescriptor::FiniteCyclic(5), 5, DEFAULT_MAX_CELLS).unwrap();
        assert_eq!((c5.graph.num_vertices(), c5.graph.num_edge_pairs()), (5, 5));
    }

    #[test]
    fn caps() {
        assert!(matches!(
            cayley_ball(&GroupDescriptor::Free(2), 12, 1000),
            Err(GroupError::BallTooLarge { .. })
        ));
        assert!(matches!(
            cayley_ball(&GroupDescriptor::Z, MAX_RADIUS + 1, DEFAULT_MAX_CELLS),
            Err(GroupError::BallTooLarge { .. })
        ));
        assert!(matches!(
            cayley_ball(&GroupDescriptor::symbolic(crate::group::SymbolicKind::Sol), 1, DEFAULT_MAX_CELLS),
            Err(GroupError::WordProblemUnavailable(_))
        ));
    }
}
