//! Exhaustive Cayley balls and the metric primitives on them: word distance,
//! distance to a subgroup, boundary spheres and the complement metric.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec::Vec;
use core::ops::Range;

use hashbrown::HashTable;

use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::word::{Letter, NormalWord, Presentation};

/// Default cap on the number of elements a ball may hold.
pub const DEFAULT_ELEMENT_BUDGET: usize = 12_000_000;

/// Marks a missing neighbour (outside the ball) or an unreachable vertex.
pub const NONE: u32 = u32::MAX;

fn hash_letters(w: &[Letter]) -> u64 {
    // FxHash-style mixing; deterministic across runs
    let mut h: u64 = w.len() as u64;
    for x in w {
        h = (h.rotate_left(5) ^ x.code() as u64).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }
    h
}

/// Every group element of word length at most `radius`, with dense ids in
/// BFS order, generator adjacency and distance from the identity.
pub struct BallIndex {
    presentation: Presentation,
    radius: u32,
    gens: Vec<Letter>,
    letters: Vec<Letter>,
    offsets: Vec<u32>,
    layer_starts: Vec<u32>,
    adjacency: Vec<u32>,
    table: HashTable<u32>,
}

impl core::fmt::Debug for BallIndex {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("BallIndex")
            .field("kind", &self.presentation.kind())
            .field("radius", &self.radius)
            .field("elements", &self.len())
            .finish()
    }
}

impl BallIndex {
    /// Builds the complete ball of radius `radius`. Fails with
    /// [`Error::BudgetExceeded`] rather than returning a partial ball, either
    /// when the element count passes `budget` or when the sphere growth seen
    /// so far projects a ball far beyond it.
    pub fn build(presentation: &Presentation, radius: u32, budget: usize) -> Result<Self> {
        let gens = presentation.generators();
        let g = gens.len();
        let mut ball = BallIndex {
            presentation: presentation.clone(),
            radius,
            gens,
            letters: Vec::new(),
            offsets: alloc::vec![0, 0],
            layer_starts: alloc::vec![0, 1],
            adjacency: alloc::vec![NONE; g],
            table: HashTable::new(),
        };
        ball.table.insert_unique(hash_letters(&[]), 0, |_| 0);
        let mut scratch: Vec<Letter> = Vec::with_capacity(radius as usize + 1);
        for layer in 0..=radius {
            let range = ball.layer(layer);
            for id in range.clone() {
                for gi in 0..g {
                    if ball.adjacency[id as usize * g + gi] != NONE {
                        continue;
                    }
                    scratch.clear();
                    scratch.extend_from_slice(ball.word(id));
                    let grew = presentation.push_letter(&mut scratch, ball.gens[gi]);
                    let nid = match ball.lookup(&scratch) {
                        Some(nid) => nid,
                        None if grew && layer < radius => {
                            if ball.len() >= budget {
                                return Err(Error::BudgetExceeded {
                                    layer: layer + 1,
                                    elements: ball.len(),
                                    budget,
                                    projected: None,
                                });
                            }
                            ball.push_word(&scratch)
                        }
                        None if grew => continue,
                        None => unreachable!("shorter neighbour missing from the ball"),
                    };
                    ball.adjacency[id as usize * g + gi] = nid;
                    let back = ball.gen_index(presentation.inverse_letter(ball.gens[gi]));
                    ball.adjacency[nid as usize * g + back] = id;
                }
            }
            if layer < radius {
                ball.layer_starts.push(ball.len() as u32);
                ball.check_projection(layer + 1, budget)?;
            }
        }
        Ok(ball)
    }

    fn check_projection(&self, layer: u32, budget: usize) -> Result<()> {
        if layer < 3 || layer >= self.radius {
            return Ok(());
        }
        let size = |k: u32| (self.layer_starts[k as usize + 1] - self.layer_starts[k as usize]) as f64;
        let (prev, cur) = (size(layer - 1), size(layer));
        if prev == 0.0 {
            return Ok(());
        }
        let ratio = cur / prev;
        let mut projected = self.len() as f64;
        let mut sphere = cur;
        for _ in layer..self.radius {
            sphere *= ratio;
            projected += sphere;
        }
        if projected > 8.0 * budget as f64 {
            return Err(Error::BudgetExceeded {
                layer,
                elements: self.len(),
                budget,
                projected: Some(projected),
            });
        }
        Ok(())
    }

    fn push_word(&mut self, w: &[Letter]) -> u32 {
        let id = self.len() as u32;
        self.letters.extend_from_slice(w);
        self.offsets.push(self.letters.len() as u32);
        self.adjacency.extend(core::iter::repeat_n(NONE, self.gens.len()));
        let (letters, offsets) = (&self.letters, &self.offsets);
        self.table.insert_unique(hash_letters(w), id, |&i| {
            hash_letters(&letters[offsets[i as usize] as usize..offsets[i as usize + 1] as usize])
        });
        id
    }

    /// Reassembles a ball from its stored parts (used by on-disk caches).
    /// The words must be listed in BFS order; adjacency is validated.
    pub fn from_parts(
        presentation: &Presentation,
        radius: u32,
        words: Vec<Vec<Letter>>,
        adjacency: Vec<u32>,
    ) -> Result<Self> {
        let gens = presentation.generators();
        let g = gens.len();
        if adjacency.len() != words.len() * g {
            return Err(Error::Validation("adjacency table has the wrong size".into()));
        }
        let mut ball = BallIndex {
            presentation: presentation.clone(),
            radius,
            gens,
            letters: Vec::new(),
            offsets: alloc::vec![0],
            layer_starts: alloc::vec![0],
            adjacency: Vec::new(),
            table: HashTable::new(),
        };
        let mut depth = 0usize;
        for (i, w) in words.iter().enumerate() {
            if w.len() < depth || w.len() > depth + 1 || w.len() > radius as usize {
                return Err(Error::Validation(format!("word {i} is out of BFS order")));
            }
            if i == 0 && !w.is_empty() {
                return Err(Error::Validation("first word must be the identity".into()));
            }
            while w.len() > depth {
                ball.layer_starts.push(i as u32);
                depth += 1;
            }
            if presentation.reduce(w).letters() != w.as_slice() {
                return Err(Error::Validation(format!("word {i} is not in normal form")));
            }
            if ball.lookup(w).is_some() {
                return Err(Error::Validation(format!("word {i} is duplicated")));
            }
            ball.push_word(w);
        }
        while ball.layer_starts.len() < radius as usize + 1 {
            ball.layer_starts.push(ball.len() as u32);
        }
        ball.layer_starts.push(ball.len() as u32);
        ball.adjacency = adjacency;
        for id in 0..ball.len() as u32 {
            for (gi, &x) in ball.gens.iter().enumerate() {
                let expected = ball.lookup(&presentation.mul_letter(&ball.normal_word(id), x).into_letters());
                if ball.adjacency[id as usize * g + gi] != expected.unwrap_or(NONE) {
                    return Err(Error::Validation(format!("adjacency of element {id} is inconsistent")));
                }
            }
        }
        Ok(ball)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn generators(&self) -> &[Letter] {
        &self.gens
    }

    fn gen_index(&self, x: Letter) -> usize {
        self.gens.iter().position(|&g| g == x).expect("generator")
    }

    /// Ids of the elements at distance exactly `k` from the identity.
    pub fn layer(&self, k: u32) -> Range<u32> {
        let k = k as usize;
        if k + 1 >= self.layer_starts.len() {
            return self.len() as u32..self.len() as u32;
        }
        self.layer_starts[k]..self.layer_starts[k + 1]
    }

    pub fn word(&self, id: u32) -> &[Letter] {
        &self.letters[self.offsets[id as usize] as usize..self.offsets[id as usize + 1] as usize]
    }

    pub fn normal_word(&self, id: u32) -> NormalWord {
        self.presentation
            .normal_word(self.word(id).to_vec())
            .expect("ball words are canonical")
    }

    /// Distance of element `id` from the identity.
    pub fn depth(&self, id: u32) -> u32 {
        self.offsets[id as usize + 1] - self.offsets[id as usize]
    }

    pub fn lookup(&self, w: &[Letter]) -> Option<u32> {
        self.table
            .find(hash_letters(w), |&i| self.word(i) == w)
            .copied()
    }

    pub fn id_of(&self, g: &NormalWord) -> Option<u32> {
        self.lookup(g.letters())
    }

    /// `(generator, neighbour id)` pairs of `id` that stay inside the ball.
    pub fn neighbors(&self, id: u32) -> impl Iterator<Item = (Letter, u32)> + '_ {
        let g = self.gens.len();
        self.adjacency[id as usize * g..(id as usize + 1) * g]
            .iter()
            .zip(self.gens.iter())
            .filter(|(&n, _)| n != NONE)
            .map(|(&n, &x)| (x, n))
    }

    pub(crate) fn neighbor_ids(&self, id: u32) -> &[u32] {
        let g = self.gens.len();
        &self.adjacency[id as usize * g..(id as usize + 1) * g]
    }

    /// Raw adjacency table, `generators().len()` entries per element.
    pub fn adjacency(&self) -> &[u32] {
        &self.adjacency
    }

    /// Word-metric distance `|g^-1 h|`; defined for any pair of elements.
    pub fn distance(&self, g: &NormalWord, h: &NormalWord) -> u32 {
        self.presentation.distance(g, h) as u32
    }

    /// Shortest-path distances from `sources` through vertices accepted by
    /// `admissible`, staying inside the ball. Unreached vertices get [`NONE`].
    pub fn bfs(&self, sources: &[u32], admissible: impl Fn(u32) -> bool) -> Vec<u32> {
        let mut dist = alloc::vec![NONE; self.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if admissible(s) && dist[s as usize] == NONE {
                dist[s as usize] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize] + 1;
            for &w in self.neighbor_ids(v) {
                if w != NONE && dist[w as usize] == NONE && admissible(w) {
                    dist[w as usize] = d;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// In-ball shortest path between `x` and `y` through admissible vertices,
    /// as a list of ids from `x` to `y`.
    pub fn shortest_path(&self, x: u32, y: u32, admissible: impl Fn(u32) -> bool) -> Option<Vec<u32>> {
        let dist = self.bfs(&[y], &admissible);
        if dist[x as usize] == NONE {
            return None;
        }
        let mut path = alloc::vec![x];
        let mut cur = x;
        while cur != y {
            let d = dist[cur as usize];
            cur = self
                .neighbor_ids(cur)
                .iter()
                .copied()
                .filter(|&w| w != NONE && dist[w as usize] == d - 1)
                .min()?;
            path.push(cur);
        }
        Some(path)
    }
}

/// A subgroup given either by a set of vertex generators or by words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupSpec {
    Special(VertexSet),
    FinitelyGenerated(Vec<NormalWord>),
}

impl SubgroupSpec {
    pub fn finitely_generated(gens: Vec<NormalWord>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::Precondition("subgroup needs at least one generator".into()));
        }
        Ok(SubgroupSpec::FinitelyGenerated(gens))
    }
}

/// Distance to a subgroup for every element of a ball.
///
/// Special subgroups are resolved exactly by coset descent. For finitely
/// generated subgroups the subgroup elements inside the ball are enumerated
/// by closure under the generators, and a multi-source BFS inside the ball
/// gives an upper bound `D(g)`; it is exact whenever `|g| + D(g) <= R`,
/// because a shorter route would lie inside the ball and would have been found.
#[derive(Clone, Debug)]
pub struct SubgroupField {
    spec: SubgroupSpec,
    bound: Vec<u32>,
    exact: Vec<bool>,
    members_per_layer: Vec<usize>,
    generator_length: u32,
}

impl SubgroupField {
    pub fn new(ball: &BallIndex, spec: &SubgroupSpec) -> Result<Self> {
        let p = ball.presentation();
        let n = ball.len();
        let mut members_per_layer = alloc::vec![0usize; ball.radius() as usize + 1];
        let (bound, exact, generator_length) = match spec {
            SubgroupSpec::Special(s1) => {
                if !s1.is_subset(p.graph().all()) {
                    return Err(Error::Precondition("subgroup vertices outside the graph".into()));
                }
                let bound: Vec<u32> = (0..n as u32)
                    .map(|id| p.special_distance(ball.word(id), *s1) as u32)
                    .collect();
                (bound, alloc::vec![true; n], 1)
            }
            SubgroupSpec::FinitelyGenerated(gens) => {
                if gens.is_empty() {
                    return Err(Error::Precondition("subgroup needs at least one generator".into()));
                }
                let mut symmetric: Vec<NormalWord> = Vec::new();
                for h in gens {
                    symmetric.push(h.clone());
                    symmetric.push(p.inverse(h));
                }
                let mut member = alloc::vec![false; n];
                member[0] = true;
                let mut queue = VecDeque::from([0u32]);
                let mut members = alloc::vec![0u32];
                while let Some(m) = queue.pop_front() {
                    let base = ball.normal_word(m);
                    for h in &symmetric {
                        let prod = p.multiply(&base, h);
                        if let Some(id) = ball.id_of(&prod) {
                            if !member[id as usize] {
                                member[id as usize] = true;
                                members.push(id);
                                queue.push_back(id);
                            }
                        }
                    }
                }
                let bound = ball.bfs(&members, |_| true);
                let radius = ball.radius();
                let exact = (0..n as u32)
                    .map(|id| bound[id as usize] != NONE && ball.depth(id) + bound[id as usize] <= radius)
                    .collect();
                let glen = gens.iter().map(|h| h.len() as u32).max().unwrap_or(1).max(1);
                (bound, exact, glen)
            }
        };
        for id in 0..n as u32 {
            if exact[id as usize] && bound[id as usize] == 0 {
                members_per_layer[ball.depth(id) as usize] += 1;
            }
        }
        Ok(SubgroupField {
            spec: spec.clone(),
            bound,
            exact,
            members_per_layer,
            generator_length,
        })
    }

    pub fn spec(&self) -> &SubgroupSpec {
        &self.spec
    }

    /// Exact subgroup distance of `id`, or `None` when unresolved in this ball.
    pub fn distance(&self, id: u32) -> Option<u32> {
        self.exact[id as usize].then(|| self.bound[id as usize])
    }

    /// In-ball upper bound on the subgroup distance ([`NONE`] if no subgroup
    /// element is reachable inside the ball).
    pub fn upper_bound(&self, id: u32) -> u32 {
        self.bound[id as usize]
    }

    pub fn distance_of(&self, ball: &BallIndex, g: &NormalWord) -> Result<u32> {
        if let SubgroupSpec::Special(s1) = &self.spec {
            return Ok(ball.presentation().special_distance(g.letters(), *s1) as u32);
        }
        let id = ball
            .id_of(g)
            .ok_or_else(|| Error::Precondition("element is outside the ball".into()))?;
        self.distance(id).ok_or_else(|| {
            Error::Unresolved(format!(
                "in-ball bound {} is not certified at radius {}",
                self.bound[id as usize],
                ball.radius()
            ))
        })
    }

    /// Subgroup elements found in the ball, per distance from the identity.
    pub fn members_per_layer(&self) -> &[usize] {
        &self.members_per_layer
    }

    /// Heuristic infinite-diameter check: the count of subgroup elements in
    /// the ball still grows across the last two generator-length bands.
    pub fn appears_infinite(&self) -> bool {
        let radius = self.members_per_layer.len() as i64 - 1;
        let step = self.generator_length as i64;
        let cumulative = |upto: i64| -> usize {
            if upto < 0 {
                return 0;
            }
            self.members_per_layer[..=upto as usize].iter().sum()
        };
        radius >= 2 * step
            && cumulative(radius) > cumulative(radius - step)
            && cumulative(radius - step) > cumulative(radius - 2 * step)
    }

    /// All in-ball elements at exact subgroup distance `r`; requires
    /// `r + margin <= R`.
    pub fn boundary_sphere(&self, ball: &BallIndex, r: u32, margin: u32) -> Result<Vec<u32>> {
        if r + margin > ball.radius() {
            return Err(Error::Precondition(format!(
                "sphere radius {r} with margin {margin} exceeds ball radius {}",
                ball.radius()
            )));
        }
        Ok((0..ball.len() as u32)
            .filter(|&id| self.distance(id) == Some(r))
            .collect())
    }

    /// Whether `id` lies outside the open `r`-neighbourhood with a certified distance.
    pub fn outside(&self, id: u32, r: u32) -> bool {
        self.distance(id).is_some_and(|d| d >= r)
    }

    /// Length of the shortest in-ball path from `x` to `y` through elements
    /// at subgroup distance at least `r`; `None` stands for infinity.
    pub fn complement_distance(&self, ball: &BallIndex, r: u32, x: u32, y: u32) -> Result<Option<u32>> {
        for id in [x, y] {
            if !self.outside(id, r) {
                return Err(Error::Precondition(format!(
                    "element {id} is inside the open {r}-neighbourhood or unresolved"
                )));
            }
        }
        let dist = ball.bfs(&[x], |id| self.outside(id, r));
        Ok((dist[y as usize] != NONE).then(|| dist[y as usize]))
    }

    /// A shortest in-ball path realizing [`Self::complement_distance`].
    pub fn complement_path(&self, ball: &BallIndex, r: u32, x: u32, y: u32) -> Option<Vec<u32>> {
        ball.shortest_path(x, y, |id| self.outside(id, r))
    }
}
