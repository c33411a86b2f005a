//! Simple undirected graphs stored as sorted neighbour lists plus one
//! fixed-width bitset row per vertex for O(n/64) neighbourhood intersection.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) is a loop")]
    Loop(u32, u32),
    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    OutOfRange { u: u32, v: u32, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// Builds a graph from undirected edges. Duplicates and both orientations
    /// of an edge are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::OutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::Loop(u, v));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        Ok(Graph::from_lists(adj))
    }

    /// Builds a graph from neighbour lists, symmetrizing them.
    pub fn from_lists(mut adj: Vec<Vec<u32>>) -> Graph {
        let n = adj.len();
        let mut extra: Vec<(u32, u32)> = Vec::new();
        for (u, list) in adj.iter().enumerate() {
            for &v in list {
                extra.push((v, u as u32));
            }
        }
        for (v, u) in extra {
            adj[v as usize].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for (u, list) in adj.iter().enumerate() {
            let row = &mut bits[u * words..(u + 1) * words];
            for &v in list {
                row[v as usize / 64] |= 1u64 << (v % 64);
            }
        }
        Graph { adj, words, bits }
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n as u32).flat_map(|u| ((u + 1)..n as u32).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("valid edges")
    }

    pub fn cycle(n: usize) -> Graph {
        let edges = (0..n as u32).map(|u| (u, (u + 1) % n as u32));
        Graph::from_edges(n, edges).expect("valid edges")
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adj
    }

    /// Words per bitset row.
    pub fn words(&self) -> usize {
        self.words
    }

    pub fn row(&self, v: u32) -> &[u64] {
        let v = v as usize;
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn is_adjacent(&self, u: u32, v: u32) -> bool {
        self.row(u)[v as usize / 64] >> (v % 64) & 1 == 1
    }

    pub fn common_neighbours(&self, u: u32, v: u32) -> u32 {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    /// Edges (u, v) with u < v in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Degree if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }
}
