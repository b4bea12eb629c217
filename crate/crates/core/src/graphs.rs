//! Multigraph core: regularity, connectivity, 2-factorization, girth and
//! length spectrum, and the splice operation.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};

/// Maximum supported cutoff for exact cycle enumeration.
pub const MAX_SPECTRUM_CUTOFF: usize = 12;

/// A finite multigraph. Edges are stored as an explicit list of unordered
/// vertex pairs; repeated pairs encode multiplicity and `[v, v]` encodes a
/// loop. Edge indices into this list identify edges throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphWire {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for MultiGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphWire {
            n: self.n,
            edges: self.edges.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = GraphWire::deserialize(d)?;
        MultiGraph::new(w.n, w.edges).map_err(serde::de::Error::custom)
    }
}

impl MultiGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<MultiGraph> {
        if n == 0 {
            return Err(Error::Usage("graph needs at least one vertex".into()));
        }
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::Usage(format!(
                    "edge ({u},{v}) out of range for n = {n}"
                )));
            }
        }
        let edges = edges
            .into_iter()
            .map(|(u, v)| if u <= v { (u, v) } else { (v, u) })
            .collect();
        Ok(MultiGraph { n, edges })
    }

    /// Parse the plain text format: one "u v" pair per line; the vertex
    /// count is one past the largest index seen.
    pub fn parse_edge_list(text: &str) -> Result<MultiGraph> {
        let mut edges = Vec::new();
        let mut max = 0usize;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (u, v) = (it.next(), it.next());
            match (u, v) {
                (Some(u), Some(v)) => {
                    let u: usize = u
                        .parse()
                        .map_err(|_| Error::Usage(format!("bad vertex {u}")))?;
                    let v: usize = v
                        .parse()
                        .map_err(|_| Error::Usage(format!("bad vertex {v}")))?;
                    max = max.max(u).max(v);
                    edges.push((u, v));
                }
                _ => return Err(Error::Usage(format!("bad edge line: {line}"))),
            }
        }
        MultiGraph::new(max + 1, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Result<(usize, usize)> {
        self.edges.get(id).copied().ok_or(Error::MissingEdge(id))
    }

    /// Degree of each vertex; a loop contributes 2.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn is_regular(&self, degree: usize) -> bool {
        self.degrees().iter().all(|&d| d == degree)
    }

    pub fn check_regular(&self, degree: usize) -> Result<()> {
        for (v, d) in self.degrees().into_iter().enumerate() {
            if d != degree {
                return Err(Error::NotRegular {
                    vertex: v,
                    degree: d,
                    expected: degree,
                });
            }
        }
        Ok(())
    }

    /// Adjacency with edge ids: for every vertex, the list of (neighbor,
    /// edge id). A loop appears twice at its vertex.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, id));
            if u != v {
                adj[v].push((u, id));
            } else {
                adj[u].push((v, id));
            }
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges
            .iter()
            .all(|&(u, v)| u != v && seen.insert((u, v)))
    }

    /// BFS distances from `src`, ignoring the edges whose ids are in
    /// `forbidden` (sorted or not; small lists expected).
    pub fn distances_avoiding(&self, src: usize, forbidden: &[usize]) -> Vec<Option<usize>> {
        let adj = self.adjacency();
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &(w, id) in &adj[v] {
                if forbidden.contains(&id) || dist[w].is_some() {
                    continue;
                }
                dist[w] = Some(dist[v].unwrap() + 1);
                queue.push_back(w);
            }
        }
        dist
    }
}

// ---------------------------------------------------------------------------
// 2-factorization
// ---------------------------------------------------------------------------

/// A partition of a 4-regular multigraph's edges into two spanning
/// 2-regular factors, stored as edge-id sets.
#[derive(Debug, Clone, Serialize)]
pub struct TwoFactorization {
    pub factor1: Vec<usize>,
    pub factor2: Vec<usize>,
}

impl TwoFactorization {
    /// Check both factors are spanning and 2-regular and partition the edges.
    pub fn validate(&self, g: &MultiGraph) -> Result<()> {
        let mut used = vec![0u8; g.edges().len()];
        for &id in self.factor1.iter().chain(&self.factor2) {
            if id >= used.len() {
                return Err(Error::MissingEdge(id));
            }
            used[id] += 1;
        }
        if used.iter().any(|&c| c != 1) {
            return Err(Error::Assertion(
                "factors do not partition the edge multiset".into(),
            ));
        }
        for (name, factor) in [("factor1", &self.factor1), ("factor2", &self.factor2)] {
            let mut deg = vec![0usize; g.vertex_count()];
            for &id in factor {
                let (u, v) = g.edge(id)?;
                deg[u] += 1;
                deg[v] += 1;
            }
            if let Some(v) = deg.iter().position(|&d| d != 2) {
                return Err(Error::Assertion(format!(
                    "{name} has degree {} at vertex {v}, expected 2",
                    deg[v]
                )));
            }
        }
        Ok(())
    }
}

/// Euler-circuit based 2-factorization of an even-degree multigraph
/// (the crate only exercises degree 4). Each component's Euler circuit is
/// oriented, giving in-degree = out-degree = 2 per vertex; the oriented
/// edges form a 2-regular bipartite structure between out-slots and
/// in-slots whose cycles are alternately 2-colored into the two factors.
pub fn two_factorize(g: &MultiGraph) -> Result<TwoFactorization> {
    for (v, d) in g.degrees().into_iter().enumerate() {
        if d % 2 != 0 {
            return Err(Error::OddDegree { vertex: v, degree: d });
        }
        if d != 4 {
            return Err(Error::NotRegular {
                vertex: v,
                degree: d,
                expected: 4,
            });
        }
    }
    let m = g.edges().len();
    // Hierholzer per component over edge ids.
    let adj = g.adjacency();
    let mut iter_pos = vec![0usize; g.vertex_count()];
    let mut edge_used = vec![false; m];
    // orientation[id] = (tail, head)
    let mut orientation: Vec<Option<(usize, usize)>> = vec![None; m];
    for start in 0..g.vertex_count() {
        // Walk greedily, backtracking with a stack; orient edges as walked.
        let mut stack = vec![start];
        while let Some(&v) = stack.last() {
            let mut advanced = false;
            while iter_pos[v] < adj[v].len() {
                let (w, id) = adj[v][iter_pos[v]];
                iter_pos[v] += 1;
                if !edge_used[id] {
                    edge_used[id] = true;
                    orientation[id] = Some((v, w));
                    stack.push(w);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                stack.pop();
            }
        }
    }
    // Bipartite alternating structure: node (v, Out) connects to (w, In)
    // for each oriented edge v -> w. Every node has exactly two incident
    // edges, so the structure is a disjoint union of even cycles; alternate
    // colors along each cycle.
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    let mut in_edges: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (id, o) in orientation.iter().enumerate() {
        let (t, h) = o.expect("all edges oriented by Euler walk");
        out_edges[t].push(id);
        in_edges[h].push(id);
    }
    let mut color: Vec<Option<u8>> = vec![None; m];
    for id0 in 0..m {
        if color[id0].is_some() {
            continue;
        }
        // Traverse the cycle through alternating out-slot / in-slot pairs.
        let mut id = id0;
        let c = 0u8;
        loop {
            color[id] = Some(c);
            // Move to the sibling edge sharing this edge's head in-slot
            // pair, then to the sibling sharing the tail... walk: from edge
            // id (t -> h), the other in-edge at h must get the other color;
            // pair via head first.
            let (_, h) = orientation[id].unwrap();
            let sib_in = if in_edges[h][0] == id {
                in_edges[h][1]
            } else {
                in_edges[h][0]
            };
            // sib_in gets the other color; then hop across its tail's
            // out-slot pair.
            if color[sib_in].is_some() {
                break;
            }
            color[sib_in] = Some(1 - c);
            let (t2, _) = orientation[sib_in].unwrap();
            let sib_out = if out_edges[t2][0] == sib_in {
                out_edges[t2][1]
            } else {
                out_edges[t2][0]
            };
            if color[sib_out].is_some() {
                break;
            }
            // sib_out shares a tail with sib_in, so it keeps color c.
            id = sib_out;
        }
    }
    let factor1: Vec<usize> = (0..m).filter(|&i| color[i] == Some(0)).collect();
    let factor2: Vec<usize> = (0..m).filter(|&i| color[i] == Some(1)).collect();
    let tf = TwoFactorization { factor1, factor2 };
    tf.validate(g)?;
    Ok(tf)
}

// ---------------------------------------------------------------------------
// Girth and length spectrum
// ---------------------------------------------------------------------------

/// A circuit as a cyclic edge-id sequence together with its vertex sequence
/// (vertices[i] -- edges[i] -- vertices[i+1 mod len]).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Circuit {
    pub vertices: Vec<usize>,
    pub edge_ids: Vec<usize>,
}

impl Circuit {
    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_ids.is_empty()
    }

    /// Re-validate against a graph: consecutive vertices joined by the
    /// stated edges, all edges distinct, all vertices distinct.
    pub fn validate(&self, g: &MultiGraph) -> Result<()> {
        let k = self.len();
        if k == 0 || self.vertices.len() != k {
            return Err(Error::Assertion("malformed circuit".into()));
        }
        let mut seen_v = std::collections::HashSet::new();
        let mut seen_e = std::collections::HashSet::new();
        for i in 0..k {
            let u = self.vertices[i];
            let v = self.vertices[(i + 1) % k];
            let id = self.edge_ids[i];
            let (a, b) = g.edge(id)?;
            if (a, b) != (u.min(v), u.max(v)) {
                return Err(Error::Assertion(format!(
                    "edge {id} does not join {u} and {v}"
                )));
            }
            if !seen_e.insert(id) {
                return Err(Error::Assertion(format!("repeated edge {id}")));
            }
            if !seen_v.insert(u) {
                return Err(Error::Assertion(format!("repeated vertex {u}")));
            }
        }
        Ok(())
    }
}

/// Exact cycle counts per length up to a cutoff, with one witness per
/// length present. Cycles are counted up to rotation and reflection;
/// loops are length-1 cycles and parallel pairs length-2 cycles.
#[derive(Debug, Clone, Serialize)]
pub struct LengthSpectrum {
    pub cutoff: usize,
    pub counts: BTreeMap<usize, u64>,
    pub witnesses: BTreeMap<usize, Circuit>,
}

impl LengthSpectrum {
    /// Smallest length present (the girth, when cutoff >= girth).
    pub fn min_length(&self) -> Option<usize> {
        self.counts.keys().next().copied()
    }

    /// Second smallest length present (the 2-girth, when visible).
    pub fn second_min_length(&self) -> Option<usize> {
        self.counts.keys().nth(1).copied()
    }
}

/// Enumerate all cycles of length <= cutoff exactly once, invoking
/// `visit(length, circuit)` per cycle. Rooted DFS: each cycle is discovered
/// from its minimal vertex, with direction fixed by comparing the first and
/// last edge ids.
fn enumerate_cycles<F: FnMut(usize, &Circuit)>(
    g: &MultiGraph,
    cutoff: usize,
    mut visit: F,
) -> Result<()> {
    if cutoff > MAX_SPECTRUM_CUTOFF {
        return Err(Error::CutoffTooLarge(cutoff, MAX_SPECTRUM_CUTOFF));
    }
    // Loops: length-1 cycles.
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        if u == v && cutoff >= 1 {
            visit(
                1,
                &Circuit {
                    vertices: vec![u],
                    edge_ids: vec![id],
                },
            );
        }
    }
    if cutoff < 2 {
        return Ok(());
    }
    // Parallel pairs: length-2 cycles, one per unordered pair of parallel
    // edge ids.
    let mut by_pair: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        if u != v {
            by_pair.entry((u, v)).or_default().push(id);
        }
    }
    for ((u, v), ids) in &by_pair {
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                visit(
                    2,
                    &Circuit {
                        vertices: vec![*u, *v],
                        edge_ids: vec![ids[i], ids[j]],
                    },
                );
            }
        }
    }
    if cutoff < 3 {
        return Ok(());
    }
    // Simple cycles of length >= 3: DFS from each root over vertices > root.
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut on_path = vec![false; n];
    for root in 0..n {
        let mut path_v = vec![root];
        let mut path_e: Vec<usize> = Vec::new();
        on_path[root] = true;
        // Iterative DFS with an explicit stack of neighbor positions.
        let mut pos = vec![0usize];
        while let Some(p) = pos.last_mut() {
            let v = *path_v.last().unwrap();
            if *p >= adj[v].len() {
                pos.pop();
                on_path[v] = false;
                path_v.pop();
                path_e.pop();
                continue;
            }
            let (w, id) = adj[v][*p];
            *p += 1;
            if w == root && path_v.len() >= 3 && id != *path_e.first().unwrap_or(&usize::MAX) {
                // Close a cycle; count once per direction: first edge id <
                // closing edge id.
                if path_e[0] < id {
                    let mut edge_ids = path_e.clone();
                    edge_ids.push(id);
                    visit(
                        edge_ids.len(),
                        &Circuit {
                            vertices: path_v.clone(),
                            edge_ids,
                        },
                    );
                }
                continue;
            }
            if w <= root || on_path[w] || path_v.len() >= cutoff {
                continue;
            }
            // Extend.
            path_v.push(w);
            path_e.push(id);
            on_path[w] = true;
            pos.push(0);
        }
    }
    Ok(())
}

/// Exact cycle counts per length <= cutoff.
pub fn length_spectrum(g: &MultiGraph, cutoff: usize) -> Result<LengthSpectrum> {
    let mut counts = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    enumerate_cycles(g, cutoff, |len, c| {
        *counts.entry(len).or_insert(0) += 1;
        witnesses.entry(len).or_insert_with(|| c.clone());
    })?;
    Ok(LengthSpectrum {
        cutoff,
        counts,
        witnesses,
    })
}

/// Girth with a witness circuit. Loop = 1, parallel pair = 2; otherwise BFS
/// from every vertex with edge-id parents.
pub fn girth_with_witness(g: &MultiGraph) -> Result<(usize, Circuit)> {
    // Loops and parallel pairs first.
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        if u == v {
            return Ok((
                1,
                Circuit {
                    vertices: vec![u],
                    edge_ids: vec![id],
                },
            ));
        }
    }
    let mut first: std::collections::HashMap<(usize, usize), usize> =
        std::collections::HashMap::new();
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        if let Some(&id0) = first.get(&(u, v)) {
            return Ok((
                2,
                Circuit {
                    vertices: vec![u, v],
                    edge_ids: vec![id0, id],
                },
            ));
        }
        first.insert((u, v), id);
    }
    // Simple graph now. BFS from each vertex; on a non-tree edge (x,y) the
    // cycle through the root has length dist[x] + dist[y] + 1; the minimum
    // over all roots is the girth.
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut best: Option<(usize, Circuit)> = None;
    let mut dist = vec![usize::MAX; n];
    let mut par_edge = vec![usize::MAX; n];
    let mut par_vert = vec![usize::MAX; n];
    for root in 0..n {
        dist.fill(usize::MAX);
        let mut queue = VecDeque::from([root]);
        dist[root] = 0;
        let cap = best.as_ref().map(|(b, _)| *b).unwrap_or(usize::MAX);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] + 1 >= cap {
                break;
            }
            for &(y, id) in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    par_edge[y] = id;
                    par_vert[y] = x;
                    queue.push_back(y);
                } else if id != par_edge[x] && id != par_edge[y] {
                    let len = dist[x] + dist[y] + 1;
                    if len < best.as_ref().map(|(b, _)| *b).unwrap_or(usize::MAX) {
                        // Reconstruct the two root paths; if they share
                        // only the root the closed walk is a cycle.
                        let walk_up = |mut v: usize| {
                            let mut vs = vec![v];
                            let mut es = Vec::new();
                            while v != root {
                                es.push(par_edge[v]);
                                v = par_vert[v];
                                vs.push(v);
                            }
                            (vs, es)
                        };
                        let (vx, ex) = walk_up(x);
                        let (vy, ey) = walk_up(y);
                        let shared: std::collections::HashSet<_> =
                            vx.iter().skip(1).copied().collect();
                        if vy.iter().skip(1).take(vy.len().saturating_sub(2)).any(|v| shared.contains(v)) {
                            continue; // degenerate: paths meet off-root
                        }
                        // cycle: root .. x (via ex reversed), edge id, y .. root
                        let mut vertices: Vec<usize> = vx.into_iter().rev().collect(); // root..x
                        let mut edge_ids: Vec<usize> = ex.into_iter().rev().collect();
                        edge_ids.push(id);
                        let mut vy = vy; // y..root
                        vy.pop(); // drop root (already at front)
                        vertices.extend(vy.iter().copied());
                        edge_ids.extend(ey.iter().copied());
                        let c = Circuit { vertices, edge_ids };
                        if c.validate(g).is_ok() && c.len() == len {
                            best = Some((len, c));
                        }
                    }
                }
            }
        }
    }
    match best {
        Some(b) => Ok(b),
        None => Err(Error::Forest),
    }
}

pub fn girth(g: &MultiGraph) -> Result<usize> {
    girth_with_witness(g).map(|(g, _)| g)
}

// ---------------------------------------------------------------------------
// Splice
// ---------------------------------------------------------------------------

/// Cut e1 in G1 and e2 in G2 and join all four loose ends to a fresh vertex.
/// Result has |G1| + |G2| + 1 vertices and is 4-regular when the inputs are.
pub fn splice(g1: &MultiGraph, e1: usize, g2: &MultiGraph, e2: usize) -> Result<MultiGraph> {
    g1.check_regular(4)?;
    g2.check_regular(4)?;
    let (a, b) = g1.edge(e1)?;
    let (c, d) = g2.edge(e2)?;
    let n1 = g1.vertex_count();
    let n2 = g2.vertex_count();
    let v = n1 + n2;
    let mut edges: Vec<(usize, usize)> = g1
        .edges()
        .iter()
        .enumerate()
        .filter(|&(id, _)| id != e1)
        .map(|(_, &e)| e)
        .collect();
    edges.extend(
        g2.edges()
            .iter()
            .enumerate()
            .filter(|&(id, _)| id != e2)
            .map(|(_, &(u, w))| (u + n1, w + n1)),
    );
    edges.push((a, v));
    edges.push((b, v));
    edges.push((c + n1, v));
    edges.push((d + n1, v));
    MultiGraph::new(v + 1, edges)
}

/// Splice choosing edges off minimal-circuit witnesses so that the result's
/// girth is exactly min(girth(G1), girth(G2)).
pub fn splice_girth_safe(g1: &MultiGraph, g2: &MultiGraph) -> Result<MultiGraph> {
    let (gi1, w1) = girth_with_witness(g1)?;
    let (gi2, w2) = girth_with_witness(g2)?;
    let pick = |g: &MultiGraph, w: &Circuit| -> Result<usize> {
        (0..g.edges().len())
            .find(|id| !w.edge_ids.contains(id))
            .ok_or(Error::NoSpliceEdge)
    };
    let e1 = pick(g1, &w1)?;
    let e2 = pick(g2, &w2)?;
    let out = splice(g1, e1, g2, e2)?;
    debug_assert_eq!(girth(&out)?, gi1.min(gi2));
    Ok(out)
}

/// Circulant graph: vertex i adjacent to i +- s (mod n) for each step s.
pub fn circulant(n: usize, steps: &[usize]) -> Result<MultiGraph> {
    let mut sorted = steps.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != steps.len() {
        return Err(Error::Usage("circulant steps must be distinct".into()));
    }
    for &s in steps {
        if s == 0 || 2 * s >= n {
            return Err(Error::BadStep { step: s, n });
        }
    }
    let mut edges = Vec::with_capacity(n * steps.len());
    for i in 0..n {
        for &s in steps {
            edges.push((i, (i + s) % n));
        }
    }
    MultiGraph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn k5() -> MultiGraph {
        circulant(5, &[1, 2]).unwrap()
    }

    #[test]
    fn serialization_round_trips() {
        let g = MultiGraph::new(3, vec![(0, 1), (0, 1), (2, 2), (1, 2)]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let h: MultiGraph = serde_json::from_str(&s).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn degrees_count_loops_twice() {
        let g = MultiGraph::new(1, vec![(0, 0), (0, 0)]).unwrap();
        assert_eq!(g.degrees(), vec![4]);
        assert!(g.is_regular(4));
    }

    #[test]
    fn two_factorize_k5() {
        let g = k5();
        let tf = two_factorize(&g).unwrap();
        tf.validate(&g).unwrap();
        assert_eq!(tf.factor1.len(), 5);
        assert_eq!(tf.factor2.len(), 5);
    }

    #[test]
    fn two_factorize_double_loop() {
        let g = MultiGraph::new(1, vec![(0, 0), (0, 0)]).unwrap();
        let tf = two_factorize(&g).unwrap();
        tf.validate(&g).unwrap();
        assert_eq!(tf.factor1.len(), 1);
    }

    #[test]
    fn two_factorize_rejects_odd_degree() {
        // 3-regular: K4
        let g = MultiGraph::new(
            4,
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        assert!(matches!(
            two_factorize(&g),
            Err(Error::OddDegree { .. }) | Err(Error::NotRegular { .. })
        ));
    }

    #[test]
    fn two_factorize_disconnected() {
        // Two disjoint copies of K5.
        let mut edges = k5().edges().to_vec();
        edges.extend(k5().edges().iter().map(|&(u, v)| (u + 5, v + 5)));
        let g = MultiGraph::new(10, edges).unwrap();
        let tf = two_factorize(&g).unwrap();
        tf.validate(&g).unwrap();
    }

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&k5()).unwrap(), 3);
        let para = MultiGraph::new(2, vec![(0, 1); 4]).unwrap();
        assert_eq!(girth(&para).unwrap(), 2);
        assert_eq!(girth(&circulant(10, &[1, 3]).unwrap()).unwrap(), 4);
        assert_eq!(girth(&circulant(26, &[1, 4]).unwrap()).unwrap(), 4);
        let (gi, w) = girth_with_witness(&circulant(10, &[1, 3]).unwrap()).unwrap();
        w.validate(&circulant(10, &[1, 3]).unwrap()).unwrap();
        assert_eq!(w.len(), gi);
    }

    #[test]
    fn girth_matches_spectrum_min() {
        for g in [
            k5(),
            circulant(10, &[1, 3]).unwrap(),
            circulant(26, &[1, 4]).unwrap(),
            circulant(14, &[2, 5]).unwrap(),
        ] {
            let gi = girth(&g).unwrap();
            let sp = length_spectrum(&g, gi + 1).unwrap();
            assert_eq!(sp.min_length().unwrap(), gi);
            sp.witnesses[&gi].validate(&g).unwrap();
        }
    }

    #[test]
    fn spectrum_k5() {
        let sp = length_spectrum(&k5(), 5).unwrap();
        assert_eq!(sp.counts.get(&3), Some(&10));
        assert_eq!(sp.counts.get(&4), Some(&15));
        assert_eq!(sp.counts.get(&5), Some(&12));
    }

    #[test]
    fn spectrum_no_triangles_in_c10_13() {
        let sp = length_spectrum(&circulant(10, &[1, 3]).unwrap(), 5).unwrap();
        assert_eq!(sp.counts.get(&3), None);
        assert!(sp.counts.get(&4).copied().unwrap_or(0) > 0);
    }

    #[test]
    fn spectrum_counts_loops_and_doubles() {
        let g = MultiGraph::new(2, vec![(0, 0), (0, 1), (0, 1), (1, 1)]).unwrap();
        let sp = length_spectrum(&g, 3).unwrap();
        assert_eq!(sp.counts.get(&1), Some(&2));
        assert_eq!(sp.counts.get(&2), Some(&1));
    }

    #[test]
    fn spectrum_cutoff_guard() {
        assert!(matches!(
            length_spectrum(&k5(), 13),
            Err(Error::CutoffTooLarge(13, _))
        ));
    }

    #[test]
    fn splice_counts_and_girth() {
        let s = splice(&k5(), 0, &k5(), 0).unwrap();
        assert_eq!(s.vertex_count(), 11);
        assert!(s.is_regular(4));
        assert!(s.is_connected());

        let s = splice_girth_safe(&k5(), &k5()).unwrap();
        assert_eq!(girth(&s).unwrap(), 3);

        let c = circulant(26, &[1, 4]).unwrap(); // girth 4
        let s = splice_girth_safe(&k5(), &c).unwrap();
        assert_eq!(girth(&s).unwrap(), 3);
        let s = splice_girth_safe(&c, &c).unwrap();
        assert_eq!(girth(&s).unwrap(), 4);
        assert_eq!(s.vertex_count(), 53);
    }

    #[test]
    fn circulant_validation() {
        assert_eq!(circulant(5, &[1, 2]).unwrap(), k5());
        assert!(matches!(
            circulant(10, &[1, 5]),
            Err(Error::BadStep { .. })
        ));
    }

    #[test]
    fn circulant_girth_small_steps() {
        // girth(C_n(1,s)) = s + 1 holds for s <= 3 once n is large enough;
        // for s >= 4 the 4-cycle (0, 1, 1+s, s) caps the girth at 4.
        assert_eq!(girth(&circulant(8, &[1, 2]).unwrap()).unwrap(), 3);
        assert_eq!(girth(&circulant(14, &[1, 3]).unwrap()).unwrap(), 4);
        for s in 4..=8 {
            let n = s * s + s + 1;
            assert_eq!(girth(&circulant(n, &[1, s]).unwrap()).unwrap(), 4);
        }
    }
}
