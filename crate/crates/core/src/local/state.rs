use crate::graph::Graph;

/// Aggregate quantities of a node set `C` that the local modularities read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommunityStats {
    /// `|C|`
    pub size: usize,
    /// `|B|`, members with at least one neighbor outside `C`.
    pub boundary_size: usize,
    /// Weight of edges with both endpoints in `C` (member self-loops included).
    pub e_in: f64,
    /// Weight of edges with exactly one endpoint in `C`.
    pub e_out: f64,
    /// Weight of internal edges touching at least one boundary member.
    pub b_in: f64,
}

/// Incremental bookkeeping for a growing local community.
///
/// Tracks, for every node of the graph, how many of its neighbors (and how
/// much weight) lie inside the community, so that both evaluating a
/// candidate and absorbing it cost time proportional to the degrees
/// involved rather than to the community size.
///
/// `b_in` is kept as `e_in - core_in`, where `core_in` is the weight of
/// internal edges whose endpoints are both non-boundary ("core") members.
/// Every edge incident to a core member is internal, so an internal edge not
/// touching the boundary is exactly an edge between two core members.
#[derive(Debug, Clone)]
pub struct LocalCommunityState<'g> {
    graph: &'g Graph,
    in_community: Vec<bool>,
    on_boundary: Vec<bool>,
    members: Vec<usize>,
    links_to_community: Vec<usize>,
    weight_to_community: Vec<f64>,
    boundary_size: usize,
    e_in: f64,
    e_out: f64,
    core_in: f64,
}

/// Effect of absorbing one candidate, shared by evaluation and commit.
struct Absorb {
    stats: CommunityStats,
    core_in: f64,
    candidate_on_boundary: bool,
    /// Current boundary members that become core.
    leaving_boundary: Vec<usize>,
}

impl<'g> LocalCommunityState<'g> {
    /// State for `C = {seed}`. Panics if `seed` is out of range.
    pub fn new(graph: &'g Graph, seed: usize) -> Self {
        let n = graph.node_count();
        let mut state = Self {
            graph,
            in_community: vec![false; n],
            on_boundary: vec![false; n],
            members: Vec::new(),
            links_to_community: vec![0; n],
            weight_to_community: vec![0.0; n],
            boundary_size: 0,
            e_in: 0.0,
            e_out: 0.0,
            core_in: 0.0,
        };
        state.add(seed);
        state
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn contains(&self, u: usize) -> bool {
        self.in_community[u]
    }

    /// Members in the order they joined; the seed comes first.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn is_boundary(&self, u: usize) -> bool {
        self.on_boundary[u]
    }

    pub fn stats(&self) -> CommunityStats {
        CommunityStats {
            size: self.members.len(),
            boundary_size: self.boundary_size,
            e_in: self.e_in,
            e_out: self.e_out,
            b_in: (self.e_in - self.core_in).max(0.0),
        }
    }

    /// Non-members adjacent to the community, ascending.
    pub fn frontier(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .members
            .iter()
            .filter(|&&u| self.on_boundary[u])
            .flat_map(|&u| self.graph.neighbors(u).iter().map(|&(v, _)| v))
            .filter(|&v| !self.in_community[v])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Stats the community would have after absorbing `u`; `u` must not be a member.
    pub fn stats_with(&self, u: usize) -> CommunityStats {
        self.absorb(u).stats
    }

    fn outside_links(&self, v: usize) -> usize {
        self.graph.neighbors(v).len() - self.links_to_community[v]
    }

    fn absorb(&self, u: usize) -> Absorb {
        debug_assert!(!self.in_community[u]);
        let g = self.graph;
        let w_in = self.weight_to_community[u];
        let strength: f64 = g.neighbors(u).iter().map(|&(_, w)| w).sum();
        let self_loop = g.self_loop_weight(u);
        let e_in = self.e_in + w_in + self_loop;
        let e_out = self.e_out + strength - 2.0 * w_in;

        let candidate_on_boundary = self.outside_links(u) > 0;
        // Boundary members whose only outside neighbor is `u`.
        let leaving_boundary: Vec<usize> = g
            .neighbors(u)
            .iter()
            .map(|&(v, _)| v)
            .filter(|&v| self.in_community[v] && self.on_boundary[v] && self.outside_links(v) == 1)
            .collect();
        let mut new_core = leaving_boundary.clone();
        if !candidate_on_boundary {
            new_core.push(u);
        }
        new_core.sort_unstable();

        let is_old_core = |y: usize| self.in_community[y] && !self.on_boundary[y];
        let mut core_in = self.core_in;
        for &x in &new_core {
            core_in += g.self_loop_weight(x);
            for &(y, w) in g.neighbors(x) {
                if is_old_core(y) || (y > x && new_core.binary_search(&y).is_ok()) {
                    core_in += w;
                }
            }
        }

        let boundary_size =
            self.boundary_size - leaving_boundary.len() + usize::from(candidate_on_boundary);
        Absorb {
            stats: CommunityStats {
                size: self.members.len() + 1,
                boundary_size,
                e_in,
                e_out,
                b_in: (e_in - core_in).max(0.0),
            },
            core_in,
            candidate_on_boundary,
            leaving_boundary,
        }
    }

    /// Absorbs `u` into the community. No-op if it is already a member.
    pub fn add(&mut self, u: usize) {
        if self.in_community[u] {
            return;
        }
        let effect = self.absorb(u);
        for &v in &effect.leaving_boundary {
            self.on_boundary[v] = false;
        }
        self.on_boundary[u] = effect.candidate_on_boundary;
        self.in_community[u] = true;
        self.members.push(u);
        for &(v, w) in self.graph.neighbors(u) {
            self.links_to_community[v] += 1;
            self.weight_to_community[v] += w;
        }
        self.boundary_size = effect.stats.boundary_size;
        self.e_in = effect.stats.e_in;
        self.e_out = effect.stats.e_out;
        self.core_in = effect.core_in;
    }

    /// Recomputes the stats from the member set alone.
    pub fn recompute(&self) -> CommunityStats {
        let g = self.graph;
        let mut stats = CommunityStats {
            size: self.members.len(),
            boundary_size: 0,
            e_in: 0.0,
            e_out: 0.0,
            b_in: 0.0,
        };
        let boundary: Vec<bool> = (0..g.node_count())
            .map(|u| {
                self.in_community[u] && g.neighbors(u).iter().any(|&(v, _)| !self.in_community[v])
            })
            .collect();
        stats.boundary_size = boundary.iter().filter(|&&b| b).count();
        for &u in &self.members {
            let loop_w = g.self_loop_weight(u);
            stats.e_in += loop_w;
            if boundary[u] {
                stats.b_in += loop_w;
            }
        }
        for (u, v, w) in g.edges() {
            match (self.in_community[u], self.in_community[v]) {
                (true, true) => {
                    stats.e_in += w;
                    if boundary[u] || boundary[v] {
                        stats.b_in += w;
                    }
                }
                (true, false) | (false, true) => stats.e_out += w,
                (false, false) => {}
            }
        }
        stats
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{load_edge_list, EdgeListOptions};

    fn graph(text: &str) -> Graph {
        load_edge_list(
            text.as_bytes(),
            EdgeListOptions {
                allow_self_loops: true,
            },
        )
        .unwrap()
    }

    #[test]
    fn path_pair() {
        let g = graph("a b\nb c");
        let mut s = LocalCommunityState::new(&g, 0);
        s.add(1);
        let st = s.stats();
        assert_eq!(st.size, 2);
        assert_eq!(st.boundary_size, 1);
        assert_eq!((st.e_in, st.e_out, st.b_in), (1.0, 1.0, 1.0));
        assert!(s.is_boundary(1) && !s.is_boundary(0));
        assert_eq!(s.frontier(), vec![2]);
    }

    #[test]
    fn incremental_matches_recompute_with_loops_and_weights() {
        let g = graph("a b 2\nb c 1\nc a 3\nc d 1\nd d 4\nd e 2\ne a 1\nb b 1");
        let order = [2, 3, 0, 4, 1];
        let mut s = LocalCommunityState::new(&g, order[0]);
        assert_eq!(s.stats(), s.recompute());
        for &u in &order[1..] {
            let predicted = s.stats_with(u);
            s.add(u);
            assert_eq!(predicted, s.stats());
            assert_eq!(s.stats(), s.recompute(), "after adding {u}");
        }
        assert_eq!(s.stats().e_out, 0.0);
        assert_eq!(s.stats().boundary_size, 0);
        assert!(s.frontier().is_empty());
    }
}
