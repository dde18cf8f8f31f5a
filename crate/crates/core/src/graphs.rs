//! Finite directed graphs given by their adjacency matrix.

use std::collections::HashSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zmatrix::IntMatrix;

/// Row `v`, column `w` of `adjacency` counts the edges `v → w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedGraph {
    #[serde(rename = "vertices")]
    vertex_ids: Vec<String>,
    adjacency: Vec<Vec<u64>>,
}

impl DirectedGraph {
    pub fn new(vertex_ids: Vec<String>, adjacency: Vec<Vec<u64>>) -> Result<Self> {
        let g = DirectedGraph {
            vertex_ids,
            adjacency,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let n = self.vertex_ids.len();
        if self.adjacency.len() != n {
            return Err(Error::NonSquare {
                rows: self.adjacency.len(),
                vertices: n,
            });
        }
        for (row, entries) in self.adjacency.iter().enumerate() {
            if entries.len() != n {
                return Err(Error::RaggedRow {
                    row,
                    len: entries.len(),
                    expected: n,
                });
            }
        }
        let mut seen = HashSet::new();
        for v in &self.vertex_ids {
            if !seen.insert(v) {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        Ok(())
    }

    /// Parses `{"vertices": [...], "adjacency": [[...], ...]}`. Negative or
    /// fractional entries fail to deserialize as `u64`.
    pub fn from_json(text: &str) -> Result<Self> {
        let g: DirectedGraph = serde_json::from_str(text)?;
        g.validate()?;
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }

    pub fn len(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_ids.is_empty()
    }

    pub fn adjacency(&self) -> &[Vec<u64>] {
        &self.adjacency
    }

    pub fn adjacency_matrix(&self) -> IntMatrix {
        let rows = self
            .adjacency
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntMatrix::try_from_rows(rows).expect("validated square")
    }

    pub fn edge_count(&self) -> u128 {
        self.adjacency
            .iter()
            .flatten()
            .map(|&x| u128::from(x))
            .sum()
    }

    /// Every vertex emits at least one edge.
    pub fn is_regular(&self) -> bool {
        self.first_sink().is_none()
    }

    fn first_sink(&self) -> Option<&str> {
        self.adjacency
            .iter()
            .position(|r| r.iter().all(|&x| x == 0))
            .map(|i| self.vertex_ids[i].as_str())
    }

    pub fn require_regular(&self) -> Result<()> {
        match self.first_sink() {
            Some(v) => Err(Error::NotRegular(v.to_string())),
            None => Ok(()),
        }
    }

    pub fn index_of(&self, v: &str) -> Option<usize> {
        self.vertex_ids.iter().position(|x| x == v)
    }
}

/// One vertex with `n` loops.
pub fn rose(n: u64) -> Result<DirectedGraph> {
    if n == 0 {
        return Err(Error::EmptyRose);
    }
    DirectedGraph::new(vec!["v".to_string()], vec![vec![n]])
}

fn fresh_label(g: &DirectedGraph, base: &str) -> String {
    let mut label = base.to_string();
    while g.index_of(&label).is_some() {
        label.push('\'');
    }
    label
}

/// Cuntz splice at `v`: appends `v₁`, `v₂` with edges
/// `v→v₁, v₁→v, v₁→v₁, v₁→v₂, v₂→v₁, v₂→v₂`.
pub fn cuntz_splice(g: &DirectedGraph, v: &str) -> Result<DirectedGraph> {
    let at = g
        .index_of(v)
        .ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
    let n = g.len();
    let mut adjacency: Vec<Vec<u64>> = g
        .adjacency
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.extend([0, 0]);
            r
        })
        .collect();
    adjacency.push(vec![0; n + 2]);
    adjacency.push(vec![0; n + 2]);
    let (v1, v2) = (n, n + 1);
    for (s, t) in [(at, v1), (v1, at), (v1, v1), (v1, v2), (v2, v1), (v2, v2)] {
        adjacency[s][t] += 1;
    }
    let mut vertex_ids = g.vertex_ids.clone();
    let l1 = fresh_label(g, &format!("{v}_1"));
    vertex_ids.push(l1.clone());
    let mut probe = g.clone();
    probe.vertex_ids.push(l1);
    vertex_ids.push(fresh_label(&probe, &format!("{v}_2")));
    DirectedGraph::new(vertex_ids, adjacency)
}

/// `cuntz_splice(rose(n), "v")`.
pub fn spliced_rose(n: u64) -> Result<DirectedGraph> {
    cuntz_splice(&rose(n)?, "v")
}
