//! Faithful integer matrix representations of right-angled Coxeter and Artin
//! groups, and breadth-first search over them.
//!
//! A right-angled Coxeter group acts faithfully on `Z^V` by its Tits
//! representation: `s` fixes `e_t` when `s, t` are adjacent, sends it to
//! `e_t + 2 e_s` when they are not, and negates `e_s`. A right-angled Artin
//! group on `Γ` embeds in the Coxeter group on the doubled graph with
//! vertices `(v, 1), (v, 2)`, where the `(v, 1)` are pairwise adjacent and
//! every other pair of distinct vertices `(v, i), (w, j)` is adjacent iff
//! `v ~ w`; the embedding sends `v` to `(v, 1)(v, 2)`.
//!
//! Nothing here shares code with the normal-form machinery it is used to check.

use std::collections::{HashMap, VecDeque};

/// Square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    dim: usize,
    data: Vec<i64>,
}

impl Mat {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1;
        }
        Mat { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.dim + j]
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        let d = self.dim;
        let mut data = vec![0i64; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    let prod = a.checked_mul(other.data[k * d + j]).expect("matrix entry overflow");
                    data[i * d + j] = data[i * d + j].checked_add(prod).expect("matrix entry overflow");
                }
            }
        }
        Mat { dim: d, data }
    }
}

/// Letter in a word over a [`MatrixGroup`]: generator index and sign.
pub type Symbol = (usize, bool);

/// A group given by integer matrices for its generators and their inverses.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    dim: usize,
    generators: Vec<Mat>,
    inverses: Vec<Mat>,
    involutive: bool,
}

fn coxeter_reflections(n: usize, adjacent: &dyn Fn(usize, usize) -> bool) -> Vec<Mat> {
    (0..n)
        .map(|s| {
            // column t holds the image of e_t
            let mut m = Mat::identity(n);
            m.data[s * n + s] = -1;
            for t in 0..n {
                if t != s && !adjacent(s, t) {
                    m.data[s * n + t] = 2;
                }
            }
            m
        })
        .collect()
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        assert!(u < n && v < n && u != v, "bad edge ({u}, {v})");
        adj[u][v] = true;
        adj[v][u] = true;
    }
    adj
}

impl MatrixGroup {
    /// Right-angled Coxeter group on `n` vertices with the given edges.
    pub fn racg(n: usize, edges: &[(usize, usize)]) -> Self {
        let adj = adjacency(n, edges);
        let generators = coxeter_reflections(n, &|s, t| adj[s][t]);
        MatrixGroup {
            dim: n,
            inverses: generators.clone(),
            generators,
            involutive: true,
        }
    }

    /// Right-angled Artin group on `n` vertices, through the doubled Coxeter group.
    pub fn raag(n: usize, edges: &[(usize, usize)]) -> Self {
        let adj = adjacency(n, edges);
        // (v, 1) is index v, (v, 2) is index n + v
        let doubled = |x: usize, y: usize| {
            let (v, vi) = (x % n, x / n);
            let (w, wi) = (y % n, y / n);
            match (vi, wi) {
                (0, 0) => v != w,
                _ => v != w && adj[v][w],
            }
        };
        let refl = coxeter_reflections(2 * n, &doubled);
        let generators = (0..n).map(|v| refl[v].mul(&refl[n + v])).collect();
        let inverses = (0..n).map(|v| refl[n + v].mul(&refl[v])).collect();
        MatrixGroup {
            dim: 2 * n,
            generators,
            inverses,
            involutive: false,
        }
    }

    pub fn identity(&self) -> Mat {
        Mat::identity(self.dim)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Every generator and inverse as a symbol, inverses omitted for involutions.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        for g in 0..self.rank() {
            out.push((g, false));
            if !self.involutive {
                out.push((g, true));
            }
        }
        out
    }

    pub fn symbol_matrix(&self, (g, inv): Symbol) -> &Mat {
        if inv {
            &self.inverses[g]
        } else {
            &self.generators[g]
        }
    }

    pub fn evaluate(&self, word: &[Symbol]) -> Mat {
        word.iter()
            .fold(self.identity(), |acc, &s| acc.mul(self.symbol_matrix(s)))
    }

    /// Word distance from the nearest source, for every element within
    /// `radius` of the sources.
    pub fn bfs(&self, sources: &[Mat], radius: u32) -> HashMap<Mat, u32> {
        let mut dist = HashMap::new();
        let mut queue = VecDeque::new();
        for s in sources {
            if !dist.contains_key(s) {
                dist.insert(s.clone(), 0);
                queue.push_back(s.clone());
            }
        }
        let symbols = self.symbols();
        while let Some(m) = queue.pop_front() {
            let d = dist[&m];
            if d == radius {
                continue;
            }
            for &s in &symbols {
                let next = m.mul(self.symbol_matrix(s));
                if !dist.contains_key(&next) {
                    dist.insert(next.clone(), d + 1);
                    queue.push_back(next);
                }
            }
        }
        dist
    }

    /// The ball of `radius` around the identity.
    pub fn ball(&self, radius: u32) -> MatrixBall {
        let dist = self.bfs(&[self.identity()], radius);
        let sphere_inverses = self.sphere_inverses(radius);
        MatrixBall {
            radius,
            dist,
            sphere_inverses,
        }
    }

    /// Inverses of the elements at distance exactly `radius`, found by a
    /// BFS that carries inverses alongside the elements.
    fn sphere_inverses(&self, radius: u32) -> Vec<Mat> {
        let symbols = self.symbols();
        let mut seen = HashMap::new();
        seen.insert(self.identity(), ());
        let mut frontier = vec![(self.identity(), self.identity())];
        for _ in 0..radius {
            let mut next = Vec::new();
            for (m, m_inv) in &frontier {
                for &(g, inv) in &symbols {
                    let p = m.mul(self.symbol_matrix((g, inv)));
                    if seen.insert(p.clone(), ()).is_none() {
                        let back = self.symbol_matrix((g, !inv && !self.involutive));
                        next.push((p, back.mul(m_inv)));
                    }
                }
            }
            frontier = next;
        }
        frontier.into_iter().map(|(_, inv)| inv).collect()
    }

    /// Elements of the subgroup generated by `gens` reachable by products of
    /// at most `steps` generators and inverses.
    pub fn subgroup_elements(&self, gens: &[Vec<Symbol>], steps: u32) -> Vec<Mat> {
        let mats: Vec<Mat> = gens.iter().map(|w| self.evaluate(w)).collect();
        let inverse_word = |w: &Vec<Symbol>| -> Vec<Symbol> {
            w.iter()
                .rev()
                .map(|&(g, inv)| (g, if self.involutive { false } else { !inv }))
                .collect()
        };
        let mut all = mats.clone();
        all.extend(gens.iter().map(|w| self.evaluate(&inverse_word(w))));
        let mut seen = HashMap::new();
        seen.insert(self.identity(), ());
        let mut frontier = vec![self.identity()];
        for _ in 0..steps {
            let mut next = Vec::new();
            for m in &frontier {
                for h in &all {
                    let p = m.mul(h);
                    if seen.insert(p.clone(), ()).is_none() {
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        seen.into_keys().collect()
    }
}

/// A ball around the identity in a matrix group.
#[derive(Clone, Debug)]
pub struct MatrixBall {
    radius: u32,
    dist: HashMap<Mat, u32>,
    sphere_inverses: Vec<Mat>,
}

impl MatrixBall {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// Word length, if at most the radius.
    pub fn length(&self, m: &Mat) -> Option<u32> {
        self.dist.get(m).copied()
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.radius as usize + 1];
        for &d in self.dist.values() {
            sizes[d as usize] += 1;
        }
        sizes
    }

    pub fn elements(&self) -> impl Iterator<Item = (&Mat, u32)> {
        self.dist.iter().map(|(m, &d)| (m, d))
    }

    /// Word length up to twice the radius: a geodesic of length above `R`
    /// passes through the sphere of radius `R`, so `|g| = R + min |h^-1 g|`
    /// over `h` in that sphere.
    pub fn length_meet_in_middle(&self, group: &MatrixGroup, g: &Mat) -> Option<u32> {
        if let Some(d) = self.length(g) {
            return Some(d);
        }
        self.sphere_inverses
            .iter()
            .filter_map(|h_inv| self.length(&h_inv.mul(g)))
            .min()
            .map(|d| d + self.radius)
            .filter(|_| group.dim == g.dim)
    }
}
