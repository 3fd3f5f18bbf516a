//! Defining graphs and the induced-subgraph combinatorics the classifiers need.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Vertex sets are stored as 64-bit masks, which caps defining graphs at 64 vertices.
pub const MAX_VERTICES: usize = 64;

/// A subset of the vertices of a [`DefiningGraph`], as a bitmask over vertex indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(VertexSet::EMPTY, |s, v| s.with(v))
    }

    /// The first `n` vertices.
    pub fn prefix(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    #[must_use]
    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    #[must_use]
    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[must_use]
    pub fn union(self, other: VertexSet) -> Self {
        VertexSet(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: VertexSet) -> Self {
        VertexSet(self.0 & other.0)
    }

    #[must_use]
    pub fn difference(self, other: VertexSet) -> Self {
        VertexSet(self.0 & !other.0)
    }

    /// Lowest vertex index in the set.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_indices(iter)
    }
}

/// An induced cycle of length at least 4, stored in canonical form: the
/// lexicographically least rotation/reflection of its vertex-index sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InducedCycle {
    vertices: Vec<usize>,
}

impl InducedCycle {
    /// Canonicalizes `vertices` and checks the induced-cycle invariants against `g`.
    pub fn new(g: &DefiningGraph, vertices: Vec<usize>) -> Result<Self> {
        let cycle = InducedCycle {
            vertices: canonical_cycle(&vertices),
        };
        if !cycle.is_valid_in(g) {
            return Err(Error::Precondition(format!(
                "{:?} is not an induced cycle of length >= 4",
                vertices
            )));
        }
        Ok(cycle)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    /// Checks the invariants directly: length >= 4, distinct vertices,
    /// consecutive vertices adjacent and all other pairs non-adjacent.
    pub fn is_valid_in(&self, g: &DefiningGraph) -> bool {
        let n = self.vertices.len();
        if n < 4 || self.vertex_set().len() != n {
            return false;
        }
        if self.vertices.iter().any(|&v| v >= g.vertex_count()) {
            return false;
        }
        for i in 0..n {
            for j in i + 1..n {
                let consecutive = j == i + 1 || (i == 0 && j == n - 1);
                if g.adjacent(self.vertices[i], self.vertices[j]) != consecutive {
                    return false;
                }
            }
        }
        true
    }
}

fn canonical_cycle(seq: &[usize]) -> Vec<usize> {
    let n = seq.len();
    let mut best: Option<Vec<usize>> = None;
    for start in 0..n {
        for dir in [false, true] {
            let cand: Vec<usize> = (0..n)
                .map(|k| {
                    let idx = if dir { (start + n - k) % n } else { (start + k) % n };
                    seq[idx]
                })
                .collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// A finite simplicial graph with named vertices. The vertex order is fixed
/// at construction and drives the shortlex order on words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DefiningGraph {
    names: Vec<String>,
    adj: Vec<u64>,
}

impl fmt::Debug for DefiningGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<(&str, &str)> = self
            .edges()
            .map(|(u, v)| (self.name(u), self.name(v)))
            .collect();
        f.debug_struct("DefiningGraph")
            .field("vertices", &self.names)
            .field("edges", &edges)
            .finish()
    }
}

impl DefiningGraph {
    /// Builds a graph from vertex names and index pairs. Duplicate edges are
    /// merged; loops, duplicate names and out-of-range endpoints are rejected.
    pub fn new(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        if names.len() > MAX_VERTICES {
            return Err(Error::Validation(format!(
                "{} vertices exceeds the limit of {}",
                names.len(),
                MAX_VERTICES
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::Validation(format!("duplicate vertex `{name}`")));
            }
        }
        let mut adj = alloc::vec![0u64; names.len()];
        for &(u, v) in edges {
            if u >= names.len() || v >= names.len() {
                return Err(Error::Validation(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{}",
                    names.len()
                )));
            }
            if u == v {
                return Err(Error::Validation(format!("self-loop at `{}`", names[u])));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(DefiningGraph { names, adj })
    }

    /// Builds a graph from vertex names and edges given by name.
    pub fn from_named_edges<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let lookup = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::Validation(format!("edge endpoint `{s}` is not a vertex")))
        };
        let mut idx = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            idx.push((lookup(u.as_ref())?, lookup(v.as_ref())?));
        }
        DefiningGraph::new(names, &idx)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::prefix(self.vertex_count())
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Resolves a list of vertex names into a [`VertexSet`].
    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        let mut set = VertexSet::EMPTY;
        for n in names {
            let v = self
                .index_of(n.as_ref())
                .ok_or_else(|| Error::Validation(format!("unknown vertex `{}`", n.as_ref())))?;
            set = set.with(v);
        }
        Ok(set)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    /// The link of `v`: its neighbours.
    pub fn link(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    /// The star of `v`: `v` together with its link.
    pub fn star(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v]).with(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            VertexSet(self.adj[u] & !((2u64 << u).wrapping_sub(1)))
                .iter()
                .map(move |v| (u, v))
        })
    }

    pub fn is_clique(&self, s: VertexSet) -> bool {
        s.iter().all(|v| s.without(v).is_subset(self.link(v)))
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges()
            .all(|(u, v)| self.adj[u] & self.adj[v] == 0)
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_within(self.all(), |v| self.link(v))
    }

    fn is_connected_within(&self, s: VertexSet, nbrs: impl Fn(usize) -> VertexSet) -> bool {
        let Some(start) = s.first() else {
            return true;
        };
        let mut seen = VertexSet::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier.iter() {
                next = next.union(nbrs(v).intersection(s));
            }
            frontier = next.difference(seen);
            seen = seen.union(frontier);
        }
        seen == s
    }

    /// True iff the subgraph induced on `s` is a nontrivial join, i.e. the
    /// complement of the induced subgraph is disconnected.
    pub fn is_join(&self, s: VertexSet) -> bool {
        if s.len() < 2 {
            return false;
        }
        let complement_nbrs = |v: usize| s.difference(self.link(v)).without(v);
        !self.is_connected_within(s, complement_nbrs)
    }

    /// True iff `s` is contained in some induced subgraph that is a
    /// nontrivial join: either `s` is itself a join, or some vertex star
    /// contains `s`.
    pub fn extends_to_join(&self, s: VertexSet) -> bool {
        self.is_join(s)
            || (0..self.vertex_count())
                .any(|v| !self.link(v).is_empty() && s.is_subset(self.star(v)))
    }

    /// Every induced 4-cycle exactly once.
    pub fn induced_4cycles(&self) -> Vec<InducedCycle> {
        self.collect_induced_cycles(4, 4)
    }

    /// Induced cycles with length in `min_len..=max_len`, deduplicated up to
    /// rotation and reflection, sorted by (length, canonical sequence).
    pub fn induced_cycles(&self, min_len: usize, max_len: usize) -> Result<Vec<InducedCycle>> {
        if min_len < 4 || min_len > max_len || max_len > self.vertex_count() {
            return Err(Error::Precondition(format!(
                "need 4 <= min_len <= max_len <= {}, got [{min_len}, {max_len}]",
                self.vertex_count()
            )));
        }
        Ok(self.collect_induced_cycles(min_len, max_len))
    }

    fn collect_induced_cycles(&self, min_len: usize, max_len: usize) -> Vec<InducedCycle> {
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(max_len);
        for v0 in 0..self.vertex_count() {
            // v0 is the least vertex of every cycle found from this root
            let allowed = self.all().difference(VertexSet::prefix(v0 + 1));
            path.clear();
            path.push(v0);
            self.extend_cycle(&mut path, allowed, VertexSet::EMPTY, min_len, max_len, &mut out);
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.vertices.cmp(&b.vertices)));
        out
    }

    // `blocked` holds the neighbours of interior path vertices other than the last one.
    fn extend_cycle(
        &self,
        path: &mut Vec<usize>,
        allowed: VertexSet,
        blocked: VertexSet,
        min_len: usize,
        max_len: usize,
        out: &mut Vec<InducedCycle>,
    ) {
        let v0 = path[0];
        let last = *path.last().unwrap_or(&v0);
        let on_path: VertexSet = path.iter().copied().collect();
        let candidates = self
            .link(last)
            .intersection(allowed)
            .difference(on_path)
            .difference(blocked);
        for w in candidates.iter() {
            let closes = self.adjacent(w, v0);
            if path.len() == 1 {
                path.push(w);
                self.extend_cycle(path, allowed, blocked, min_len, max_len, out);
                path.pop();
                continue;
            }
            let len = path.len() + 1;
            if closes {
                // reflection dedupe: second vertex smaller than the last
                if len >= min_len && len >= 4 && path[1] < w {
                    let mut vertices = path.clone();
                    vertices.push(w);
                    out.push(InducedCycle { vertices });
                }
                continue;
            }
            if len < max_len {
                // `last` becomes interior once w is appended
                let next_blocked = blocked.union(self.link(last)).without(w);
                path.push(w);
                self.extend_cycle(path, allowed, next_blocked, min_len, max_len, out);
                path.pop();
            }
        }
    }

    /// Adds a vertex `t` adjacent to exactly the non-adjacent pair `u`, `v`.
    pub fn cone_off(&self, u: usize, v: usize, t: &str) -> Result<DefiningGraph> {
        if u >= self.vertex_count() || v >= self.vertex_count() {
            return Err(Error::Precondition("cone points must be vertices".into()));
        }
        if u == v || self.adjacent(u, v) {
            return Err(Error::Precondition(format!(
                "cone points `{}` and `{}` must be distinct and non-adjacent",
                self.name(u),
                self.name(v)
            )));
        }
        if self.index_of(t).is_some() {
            return Err(Error::Precondition(format!("vertex `{t}` already exists")));
        }
        let mut names = self.names.clone();
        names.push(t.to_string());
        let tv = names.len() - 1;
        let mut edges: Vec<(usize, usize)> = self.edges().collect();
        edges.push((u, tv));
        edges.push((v, tv));
        DefiningGraph::new(names, &edges)
    }

    /// Stable 64-bit FNV-1a fingerprint of the names and edge set, used as a cache key.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        for name in &self.names {
            eat(name.as_bytes());
            eat(&[0xff]);
        }
        for (u, v) in self.edges() {
            eat(&(u as u32).to_le_bytes());
            eat(&(v as u32).to_le_bytes());
        }
        h
    }

    /// The cycle graph on `n >= 3` vertices `v0 .. v{n-1}`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Precondition("a cycle needs at least 3 vertices".into()));
        }
        let names = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        DefiningGraph::new(names, &edges)
    }

    /// The path graph on `n >= 1` vertices `v0 - v1 - ...`.
    pub fn path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("a path needs at least one vertex".into()));
        }
        let names = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        DefiningGraph::new(names, &edges)
    }

    /// The square with non-adjacent pairs `(a1, a2)` and `(b1, b2)`.
    pub fn c4() -> Self {
        DefiningGraph::from_named_edges(
            &["a1", "b1", "a2", "b2"],
            &[("a1", "b1"), ("b1", "a2"), ("a2", "b2"), ("b2", "a1")],
        )
        .expect("static graph")
    }

    /// The path `a - b - c - d`.
    pub fn p4() -> Self {
        DefiningGraph::from_named_edges(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d")],
        )
        .expect("static graph")
    }

    /// The graph with vertices `a0..ad, b0..bd` whose right-angled Coxeter
    /// group has geodesics of polynomial divergence of degree `d`:
    /// `a0` and `b0` are joined to every `ai` (`i >= 1`) and to `b1`,
    /// `b1 - b2 - ... - bd` is a path, and `ai - b(i+1)` for `1 <= i < d`.
    pub fn gamma_d(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Precondition(format!("gamma_d needs d >= 2, got {d}")));
        }
        if 2 * d + 2 > MAX_VERTICES {
            return Err(Error::Precondition(format!("gamma_d:{d} is too large")));
        }
        let a = |i: usize| i;
        let b = |i: usize| d + 1 + i;
        let mut names: Vec<String> = (0..=d).map(|i| format!("a{i}")).collect();
        names.extend((0..=d).map(|i| format!("b{i}")));
        let mut edges = Vec::new();
        for i in 1..=d {
            edges.push((a(0), a(i)));
            edges.push((b(0), a(i)));
        }
        edges.push((a(0), b(1)));
        edges.push((b(0), b(1)));
        for i in 1..d {
            edges.push((b(i), b(i + 1)));
            edges.push((a(i), b(i + 1)));
        }
        DefiningGraph::new(names, &edges)
    }

    /// `gamma_d(d)` with `a_d` and `b_d` coned off by a new vertex `t`.
    pub fn omega_d(d: usize) -> Result<Self> {
        let g = DefiningGraph::gamma_d(d)?;
        g.cone_off(d, 2 * d + 1, "t")
    }

    /// Resolves a built-in family name: `c4`, `p4`, `gamma_d:<d>`,
    /// `omega_d:<d>`, `cycle:<n>` or `path:<n>`.
    pub fn family(name: &str) -> Result<Self> {
        let parse = |arg: &str| {
            arg.parse::<usize>()
                .map_err(|_| Error::Validation(format!("bad family parameter in `{name}`")))
        };
        match name.split_once(':') {
            None if name == "c4" => Ok(DefiningGraph::c4()),
            None if name == "p4" => Ok(DefiningGraph::p4()),
            Some(("gamma_d", d)) => DefiningGraph::gamma_d(parse(d)?),
            Some(("omega_d", d)) => DefiningGraph::omega_d(parse(d)?),
            Some(("cycle", n)) => DefiningGraph::cycle(parse(n)?),
            Some(("path", n)) => DefiningGraph::path(parse(n)?),
            _ => Err(Error::Validation(format!("unknown graph family `{name}`"))),
        }
    }
}
