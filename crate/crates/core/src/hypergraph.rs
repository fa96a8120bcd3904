//! Uniform hypergraphs on at most 128 labeled vertices.
//!
//! Vertices carry 1-based labels `1..=n` at the API boundary and are stored
//! as bit positions `0..n` internally; every edge is a `u128` mask with
//! exactly `r` bits set. Isomorphism is not canonicalized here.

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::combin::{binom, bit, bits, colex_unrank, low_mask, subsets};
use crate::error::{invalid, Error, Result};
use crate::rng;

pub const MAX_VERTICES: usize = 128;

/// Random hypergraphs enumerate every `r`-set; refuse beyond this many.
const MAX_RANDOM_CANDIDATES: u128 = 50_000_000;

/// A set of vertices stored as a bitmask over `0..n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u128);

impl VertexSet {
    pub fn from_labels(labels: &[usize]) -> Result<VertexSet> {
        let mut mask = 0u128;
        for &l in labels {
            if l == 0 || l > MAX_VERTICES {
                return Err(invalid(format!("vertex label {l} outside 1..={MAX_VERTICES}")));
            }
            mask |= bit(l - 1);
        }
        Ok(VertexSet(mask))
    }

    pub fn full(n: usize) -> VertexSet {
        VertexSet(low_mask(n))
    }

    pub fn mask(self) -> u128 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, label: usize) -> bool {
        label >= 1 && label <= MAX_VERTICES && self.0 & bit(label - 1) != 0
    }

    /// 1-based labels in increasing order.
    pub fn labels(self) -> Vec<usize> {
        bits(self.0).map(|i| i + 1).collect()
    }

    pub fn is_subset_of(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum RandomModel {
    /// Each `r`-set is an edge independently with probability `p`.
    Uniform(f64),
    /// Exactly `m` edges, uniform among all such hypergraphs.
    FixedEdges(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    r: usize,
    n: usize,
    /// Sorted ascending, no duplicates.
    edges: Vec<u128>,
}

impl Hypergraph {
    pub fn new(r: usize, n: usize, edges: impl IntoIterator<Item = u128>) -> Result<Hypergraph> {
        check_shape(r, n)?;
        let limit = low_mask(n);
        let mut edges: Vec<u128> = edges.into_iter().collect();
        for &e in &edges {
            if e.count_ones() as usize != r {
                return Err(invalid(format!("edge {e:#b} does not have {r} vertices")));
            }
            if e & !limit != 0 {
                return Err(invalid(format!("edge {e:#b} uses a vertex above {n}")));
            }
        }
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        if edges.len() != before {
            return Err(invalid("duplicate edge"));
        }
        Ok(Hypergraph { r, n, edges })
    }

    /// Builds from 1-based vertex lists.
    pub fn from_edge_lists(r: usize, n: usize, lists: &[Vec<usize>]) -> Result<Hypergraph> {
        let mut masks = Vec::with_capacity(lists.len());
        for list in lists {
            if list.iter().any(|&v| v == 0 || v > n) {
                return Err(invalid(format!("edge {list:?} has a vertex outside 1..={n}")));
            }
            let m = VertexSet::from_labels(list)?.mask();
            if m.count_ones() as usize != list.len() {
                return Err(invalid(format!("edge {list:?} repeats a vertex")));
            }
            masks.push(m);
        }
        Hypergraph::new(r, n, masks)
    }

    pub fn empty(r: usize, n: usize) -> Hypergraph {
        Hypergraph { r, n, edges: Vec::new() }
    }

    pub fn complete(r: usize, n: usize) -> Hypergraph {
        let mut edges: Vec<u128> = subsets(n, r).collect();
        edges.sort_unstable();
        Hypergraph { r, n, edges }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[u128] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn contains(&self, edge: u128) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    /// `a_S`: 1 if `S` is an edge.
    pub fn indicator(&self, set: u128) -> i64 {
        self.contains(set) as i64
    }

    /// Number of edges containing `set` (so `deg(∅) = e(G)`).
    pub fn degree(&self, set: u128) -> usize {
        if set.count_ones() as usize == self.r {
            return self.contains(set) as usize;
        }
        self.edges.iter().filter(|&&e| e & set == set).count()
    }

    /// `St(v)`: the edges containing vertex `label`.
    pub fn star(&self, label: usize) -> Vec<u128> {
        let b = bit(label - 1);
        self.edges.iter().copied().filter(|e| e & b != 0).collect()
    }

    /// Number of edges inside `mask`.
    pub fn count_within(&self, mask: u128) -> usize {
        self.edges.iter().filter(|&&e| e & !mask == 0).count()
    }

    /// `G[A]`, relabeled `1..|A|` by increasing original label.
    pub fn induced_subgraph(&self, set: VertexSet) -> Hypergraph {
        let keep: Vec<usize> = bits(set.mask() & low_mask(self.n)).collect();
        let mut edges: Vec<u128> = self
            .edges
            .iter()
            .filter(|&&e| e & !set.mask() == 0)
            .map(|&e| {
                keep.iter()
                    .enumerate()
                    .filter(|(_, &v)| e & bit(v) != 0)
                    .fold(0u128, |m, (i, _)| m | bit(i))
            })
            .collect();
        edges.sort_unstable();
        Hypergraph { r: self.r, n: keep.len(), edges }
    }

    pub fn complement(&self) -> Hypergraph {
        let edges = subsets(self.n, self.r).filter(|e| !self.contains(*e)).collect::<Vec<_>>();
        let mut edges = edges;
        edges.sort_unstable();
        Hypergraph { r: self.r, n: self.n, edges }
    }

    /// Adjacency masks, one per vertex. Only meaningful for `r = 2`.
    pub fn adjacency(&self) -> Vec<u128> {
        let mut adj = vec![0u128; self.n];
        for &e in &self.edges {
            if self.r == 2 {
                let u = e.trailing_zeros() as usize;
                let v = 127 - e.leading_zeros() as usize;
                adj[u] |= bit(v);
                adj[v] |= bit(u);
            }
        }
        adj
    }

    /// Link masks of vertex pairs for `r = 3`: entry `u * n + v` holds every
    /// `w` with `{u, v, w}` an edge.
    pub fn pair_links(&self) -> Vec<u128> {
        let n = self.n;
        let mut links = vec![0u128; n * n];
        if self.r != 3 {
            return links;
        }
        for &e in &self.edges {
            let vs: Vec<usize> = bits(e).collect();
            let (a, b, c) = (vs[0], vs[1], vs[2]);
            links[a * n + b] |= bit(c);
            links[b * n + a] |= bit(c);
            links[a * n + c] |= bit(b);
            links[c * n + a] |= bit(b);
            links[b * n + c] |= bit(a);
            links[c * n + b] |= bit(a);
        }
        links
    }

    /// Vertex degrees `deg({v})`, indexed by bit position.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &e in &self.edges {
            for v in bits(e) {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Edges as sorted 1-based vertex lists, in lexicographic order.
    pub fn edge_lists(&self) -> Vec<Vec<usize>> {
        let mut lists: Vec<Vec<usize>> = self.edges.iter().map(|&e| VertexSet(e).labels()).collect();
        lists.sort();
        lists
    }

    /// Serializes in the text graph format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.r, self.n);
        for list in self.edge_lists() {
            let parts: Vec<String> = list.iter().map(|v| v.to_string()).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Hypergraph> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums = parse_numbers(line, line_no)?;
            match header {
                None => {
                    if nums.len() != 2 {
                        return Err(parse_err(line_no, "header must be \"r n\""));
                    }
                    check_shape(nums[0], nums[1]).map_err(|e| parse_err(line_no, e.to_string()))?;
                    header = Some((nums[0], nums[1]));
                }
                Some((r, n)) => {
                    edges.push((line_no, edge_mask(&nums, r, n, line_no)?));
                }
            }
        }
        let (r, n) = header.ok_or_else(|| parse_err(1, "missing \"r n\" header"))?;
        let mut seen = std::collections::HashSet::new();
        for &(line_no, e) in &edges {
            if !seen.insert(e) {
                return Err(parse_err(line_no, "duplicate edge"));
            }
        }
        Hypergraph::new(r, n, edges.into_iter().map(|(_, e)| e))
    }

    /// Random hypergraph, deterministic in `seed`.
    pub fn random(n: usize, r: usize, model: RandomModel, seed: u64) -> Result<Hypergraph> {
        check_shape(r, n)?;
        let total = binom(n, r);
        let mut rng = rng::stream(seed, 0);
        match model {
            RandomModel::Uniform(p) => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(invalid(format!("edge probability {p} outside [0, 1]")));
                }
                if total > MAX_RANDOM_CANDIDATES {
                    return Err(Error::Budget {
                        what: "random hypergraph",
                        required: total,
                        limit: MAX_RANDOM_CANDIDATES,
                    });
                }
                let edges = subsets(n, r).filter(|_| rng.random_bool(p)).collect::<Vec<_>>();
                Hypergraph::new(r, n, edges)
            }
            RandomModel::FixedEdges(m) => {
                if m as u128 > total {
                    return Err(invalid(format!("{m} edges requested but only C({n},{r}) = {total} exist")));
                }
                if total > usize::MAX as u128 {
                    return Err(invalid("too many candidate edges to sample from"));
                }
                let picks = rand::seq::index::sample(&mut rng, total as usize, m);
                Hypergraph::new(r, n, picks.iter().map(|i| colex_unrank(i as u128, r)))
            }
        }
    }
}

/// `K^{(r)}_{a,b}`: parts `1..=a` and `a+1..=a+b`, edges are the `r`-sets
/// meeting both parts.
pub fn complete_bipartite(a: usize, b: usize, r: usize) -> Result<Hypergraph> {
    if r < 2 {
        return Err(invalid("complete bipartite hypergraph needs r >= 2"));
    }
    let n = a + b;
    check_shape(r, n)?;
    let left = low_mask(a);
    let right = low_mask(n) & !left;
    let edges = subsets(n, r).filter(|e| e & left != 0 && e & right != 0);
    Hypergraph::new(r, n, edges)
}

/// `G_{A,B,M}`: the 3-graph on `A ∪ B = [n]` whose edges are the triples
/// meeting both `A` and `B`, except triples containing a pair from `M`.
pub fn gabm(a: VertexSet, b: VertexSet, m: &[(usize, usize)]) -> Result<Hypergraph> {
    if a.mask() & b.mask() != 0 {
        return Err(invalid("A and B must be disjoint"));
    }
    let n = a.len() + b.len();
    if a.mask() | b.mask() != low_mask(n) {
        return Err(invalid(format!("A and B must partition 1..={n}")));
    }
    check_shape(3, n)?;
    let mut used = 0u128;
    let mut pairs = Vec::with_capacity(m.len());
    for &(x, y) in m {
        if !a.contains(x) || !b.contains(y) {
            return Err(invalid(format!("pair ({x},{y}) is not in A x B")));
        }
        let p = bit(x - 1) | bit(y - 1);
        if used & p != 0 {
            return Err(invalid(format!("pair ({x},{y}) shares a vertex with another pair")));
        }
        used |= p;
        pairs.push(p);
    }
    let edges = subsets(n, 3)
        .filter(|e| e & a.mask() != 0 && e & b.mask() != 0)
        .filter(|e| pairs.iter().all(|p| e & p != *p));
    Hypergraph::new(3, n, edges)
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Hypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Hypergraph> {
        Hypergraph::parse_text(s)
    }
}

fn check_shape(r: usize, n: usize) -> Result<()> {
    if r == 0 {
        return Err(invalid("uniformity must be at least 1"));
    }
    if n > MAX_VERTICES {
        return Err(invalid(format!("{n} vertices exceeds the supported {MAX_VERTICES}")));
    }
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub(crate) fn parse_numbers(line: &str, line_no: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("expected a non-negative integer, found {tok:?}")))
        })
        .collect()
}

pub(crate) fn edge_mask(nums: &[usize], r: usize, n: usize, line_no: usize) -> Result<u128> {
    if nums.len() != r {
        return Err(parse_err(line_no, format!("expected {r} vertices, found {}", nums.len())));
    }
    let mut mask = 0u128;
    for &v in nums {
        if v == 0 || v > n {
            return Err(parse_err(line_no, format!("vertex {v} outside 1..={n}")));
        }
        if mask & bit(v - 1) != 0 {
            return Err(parse_err(line_no, format!("vertex {v} repeated")));
        }
        mask |= bit(v - 1);
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k22() -> Hypergraph {
        complete_bipartite(2, 2, 2).unwrap()
    }

    #[test]
    fn induced_subgraph_examples() {
        let k4 = Hypergraph::complete(2, 4);
        let a = VertexSet::from_labels(&[1, 2, 3]).unwrap();
        let k3 = k4.induced_subgraph(a);
        assert_eq!((k3.n(), k3.edge_count()), (3, 3));

        let e5 = Hypergraph::empty(2, 5);
        assert_eq!(e5.induced_subgraph(VertexSet::from_labels(&[2, 4]).unwrap()).edge_count(), 0);

        let path = k22().induced_subgraph(VertexSet::from_labels(&[1, 3, 4]).unwrap());
        assert_eq!(path.edge_lists(), vec![vec![1, 2], vec![1, 3]]);

        let g = k22();
        assert_eq!(g.induced_subgraph(g.vertices()), g);
        assert_eq!(g.induced_subgraph(VertexSet::default()).edge_count(), 0);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(Hypergraph::empty(2, 3).complement(), Hypergraph::complete(2, 3));
        assert_eq!(k22().complement().edge_lists(), vec![vec![1, 2], vec![3, 4]]);
    }

    #[test]
    fn bipartite_counts() {
        assert_eq!(complete_bipartite(2, 2, 2).unwrap().edge_count(), 4);
        assert_eq!(complete_bipartite(1, 3, 3).unwrap().edge_count(), 3);
        assert_eq!(complete_bipartite(5, 5, 3).unwrap().edge_count(), 100);
    }

    #[test]
    fn gabm_examples() {
        let a = VertexSet::from_labels(&[1, 2]).unwrap();
        let b = VertexSet::from_labels(&[3, 4]).unwrap();
        assert_eq!(gabm(a, b, &[]).unwrap(), complete_bipartite(2, 2, 3).unwrap());
        assert_eq!(gabm(a, b, &[(1, 3)]).unwrap().edge_count(), 2);

        let a = VertexSet::from_labels(&[1, 2, 3, 4, 5]).unwrap();
        let b = VertexSet::from_labels(&[6, 7, 8, 9]).unwrap();
        let g = gabm(a, b, &[]).unwrap();
        assert_eq!(g.edge_count() as u128, binom(9, 3) - binom(5, 3) - binom(4, 3));
    }

    #[test]
    fn gabm_rejects_bad_input() {
        let a = VertexSet::from_labels(&[1, 2]).unwrap();
        let b = VertexSet::from_labels(&[2, 3]).unwrap();
        assert!(gabm(a, b, &[]).is_err());
        let b = VertexSet::from_labels(&[3, 4]).unwrap();
        assert!(gabm(a, b, &[(1, 3), (2, 3)]).is_err());
        assert!(gabm(a, b, &[(3, 1)]).is_err());
        let gap = VertexSet::from_labels(&[3, 5]).unwrap();
        assert!(gabm(a, gap, &[]).is_err());
    }

    #[test]
    fn degrees_and_stars() {
        let g = Hypergraph::random(9, 3, RandomModel::Uniform(0.5), 3).unwrap();
        assert_eq!(g.degree(0), g.edge_count());
        for &e in g.edges() {
            assert_eq!(g.degree(e), 1);
        }
        let star_total: usize = (1..=9).map(|v| g.star(v).len()).sum();
        assert_eq!(star_total, 3 * g.edge_count());
        assert_eq!(g.complement().complement(), g);
        assert_eq!(g.edge_count() + g.complement().edge_count(), 84);
    }

    #[test]
    fn random_models() {
        assert_eq!(Hypergraph::random(7, 2, RandomModel::Uniform(0.0), 1).unwrap().edge_count(), 0);
        assert_eq!(Hypergraph::random(7, 2, RandomModel::Uniform(1.0), 1).unwrap().edge_count(), 21);
        let g = Hypergraph::random(6, 3, RandomModel::FixedEdges(5), 9).unwrap();
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g, Hypergraph::random(6, 3, RandomModel::FixedEdges(5), 9).unwrap());
        assert!(Hypergraph::random(6, 3, RandomModel::FixedEdges(21), 9).is_err());
    }

    #[test]
    fn text_format() {
        let text = "# a path\n2 4\n1 3\n\n# mid comment\n1 4\n";
        let g: Hypergraph = text.parse().unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.to_text(), "2 4\n1 3\n1 4\n");
        assert_eq!(g.to_text().parse::<Hypergraph>().unwrap(), g);

        let bad = "2 4\n1 3\n1 x\n";
        assert_eq!(
            bad.parse::<Hypergraph>().unwrap_err(),
            Error::Parse { line: 3, message: "expected a non-negative integer, found \"x\"".into() }
        );
        assert!(matches!("2 4\n1 5\n".parse::<Hypergraph>(), Err(Error::Parse { line: 2, .. })));
        assert!(matches!("3 4\n1 2\n".parse::<Hypergraph>(), Err(Error::Parse { line: 2, .. })));
        assert!(matches!("2 4\n1 2\n2 1\n".parse::<Hypergraph>(), Err(Error::Parse { line: 3, .. })));
        assert!(matches!("".parse::<Hypergraph>(), Err(Error::Parse { .. })));
    }
}
