use rand::Rng;

use crate::error::{Error, Result};

/// Undirected simple graph as sorted neighbor lists (CSR).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graph {
    /// Builds from an edge list; duplicate edges are merged, self-loops rejected.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::Format(format!("self-loop at vertex {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::Format(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        Ok(Self::from_adjacency(adj))
    }

    /// Builds from per-vertex neighbor lists; lists are sorted and deduplicated.
    pub fn from_adjacency(mut adj: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for nb in &mut adj {
            nb.sort_unstable();
            nb.dedup();
            targets.extend_from_slice(nb);
            offsets.push(targets.len());
        }
        Graph { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// The common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = if self.n() == 0 { 0 } else { self.degree(0) };
        (0..self.n()).all(|v| self.degree(v) == k).then_some(k)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n()).all(|u| {
            self.neighbors(u).iter().all(|&v| {
                self.neighbors(v as usize)
                    .binary_search(&(u as u32))
                    .is_ok()
            })
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in self.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    count += 1;
                    stack.push(v as usize);
                }
            }
        }
        count == n
    }

    /// Edges `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v as usize > u)
                .map(move |&v| (u as u32, v))
        })
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (u, out) in y.iter_mut().enumerate() {
            *out = self.neighbors(u).iter().map(|&v| x[v as usize]).sum();
        }
    }

    /// Edge list text: one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list(n: usize, text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace().map(str::parse::<u32>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
                _ => {
                    return Err(Error::Format(format!(
                        "bad edge on line {}: `{line}`",
                        lineno + 1
                    )))
                }
            }
        }
        Self::from_edges(n, &edges)
    }

    pub fn complete(n: usize) -> Self {
        Self::from_adjacency(
            (0..n)
                .map(|u| (0..n as u32).filter(|&v| v as usize != u).collect())
                .collect(),
        )
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
        Self::from_edges(n, &edges).expect("cycle edges are valid")
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Self::from_edges(10, &edges).expect("Petersen edges are valid")
    }

    /// Uniform-ish random simple `k`-regular graph: points are paired at random,
    /// rejecting loops and repeated edges, restarting when stuck.
    pub fn random_regular(n: usize, k: usize, rng: &mut impl Rng) -> Result<Self> {
        if k >= n || !(n * k).is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "no simple {k}-regular graph on {n} vertices"
            )));
        }
        'restart: loop {
            let mut points: Vec<u32> = (0..n as u32)
                .flat_map(|v| std::iter::repeat_n(v, k))
                .collect();
            let mut adj: Vec<Vec<u32>> = vec![Vec::with_capacity(k); n];
            while !points.is_empty() {
                let mut paired = false;
                for _ in 0..64 {
                    let i = rng.gen_range(0..points.len());
                    let j = rng.gen_range(0..points.len());
                    let (u, v) = (points[i], points[j]);
                    if i == j || u == v || adj[u as usize].contains(&v) {
                        continue;
                    }
                    adj[u as usize].push(v);
                    adj[v as usize].push(u);
                    let (hi, lo) = (i.max(j), i.min(j));
                    points.swap_remove(hi);
                    points.swap_remove(lo);
                    paired = true;
                    break;
                }
                if !paired {
                    let ok = points.iter().enumerate().any(|(i, &u)| {
                        points[i + 1..]
                            .iter()
                            .any(|&v| u != v && !adj[u as usize].contains(&v))
                    });
                    if !ok {
                        continue 'restart;
                    }
                }
            }
            return Ok(Self::from_adjacency(adj));
        }
    }

    /// Disjoint union, vertices of `other` shifted past those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Self {
        let off = self.n() as u32;
        let mut adj: Vec<Vec<u32>> = (0..self.n()).map(|u| self.neighbors(u).to_vec()).collect();
        adj.extend((0..other.n()).map(|u| other.neighbors(u).iter().map(|&v| v + off).collect()));
        Self::from_adjacency(adj)
    }
}
