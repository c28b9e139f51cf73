use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{NetworkError, Result};

/// Named topologies used in the Cournot experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TopologyKind {
    /// `i ~ mod(i + 11j, n) + 1` for integers `0 ≤ j < n/11`.
    Linear,
    /// `i ~ mod(i + 2^j, n) + 1` for integers `0 ≤ j < log₂ n`.
    Log,
    /// Every pair of nodes.
    Complete,
}

impl TopologyKind {
    pub const ALL: [TopologyKind; 3] = [Self::Linear, Self::Log, Self::Complete];

    pub fn name(self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Log => "log",
            Self::Complete => "complete",
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TopologyKind {
    type Err = NetworkError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Self::Linear),
            "log" => Ok(Self::Log),
            "complete" => Ok(Self::Complete),
            other => Err(NetworkError::UnknownTopology(other.to_string())),
        }
    }
}

/// Undirected simple graph on nodes `1..=n`. Edges are stored as `(min, max)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSet {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl EdgeSet {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: BTreeSet::new(),
        }
    }

    /// Builds a graph from 1-indexed pairs.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = Self::new(n);
        for (i, j) in pairs {
            set.insert(i, j)?;
        }
        Ok(set)
    }

    /// Adds `{i, j}`. Self-loops and out-of-range nodes are rejected.
    pub fn insert(&mut self, i: usize, j: usize) -> Result<bool> {
        if i == j || i == 0 || j == 0 || i > self.n || j > self.n {
            return Err(NetworkError::InvalidEdge(i, j));
        }
        Ok(self.edges.insert((i.min(j), i.max(j))))
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Sorted neighbours of node `i` (1-indexed).
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == i || b == i)
            .count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a - 1] += 1;
            deg[b - 1] += 1;
        }
        deg
    }
}

/// Builds one of the named topologies on `n ≥ 2` nodes.
///
/// The generating formulas give ordered pairs; they are symmetrised into
/// undirected edges and pairs that collapse to a self-loop are dropped.
pub fn build_topology(kind: TopologyKind, n: usize) -> Result<EdgeSet> {
    if n < 2 {
        return Err(NetworkError::TooFewNodes { min: 2, actual: n });
    }
    let mut edges = EdgeSet::new(n);
    let mut connect = |i: usize, target: usize| -> Result<()> {
        if target != i {
            edges.insert(i, target)?;
        }
        Ok(())
    };
    match kind {
        TopologyKind::Linear => {
            for i in 1..=n {
                // j < n/11 over the integers
                for j in (0..).take_while(|j| 11 * j < n) {
                    connect(i, (i + 11 * j) % n + 1)?;
                }
            }
        }
        TopologyKind::Log => {
            for i in 1..=n {
                // j < log₂ n  ⇔  2^j < n
                for j in (0..usize::BITS).take_while(|&j| (1usize << j) < n) {
                    connect(i, (i + (1usize << j)) % n + 1)?;
                }
            }
        }
        TopologyKind::Complete => {
            for i in 1..=n {
                for j in i + 1..=n {
                    connect(i, j)?;
                }
            }
        }
    }
    Ok(edges)
}

/// Breadth-first reachability from node 1.
pub fn is_connected(edges: &EdgeSet) -> bool {
    let n = edges.num_nodes();
    if n == 0 {
        return true;
    }
    let mut adjacency = vec![Vec::new(); n + 1];
    for (a, b) in edges.edges() {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let mut seen = vec![false; n + 1];
    let mut queue = VecDeque::from([1]);
    seen[1] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}
