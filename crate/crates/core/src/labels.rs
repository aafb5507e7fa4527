use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A class label, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(u32);

impl Label {
    pub fn new(value: u32) -> Result<Self> {
        if value == 0 {
            return Err(Error::InvalidSeeds("labels are 1-based; got 0".into()));
        }
        Ok(Label(value))
    }

    /// Label for a 0-based class index.
    pub fn from_index(index: usize) -> Self {
        Label(index as u32 + 1)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// 0-based class index.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A partial assignment of labels in `1..=K` to the nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledNodes {
    labels: Vec<Option<Label>>,
    num_labels: usize,
}

impl LabeledNodes {
    pub fn new(labels: Vec<Option<Label>>, num_labels: usize) -> Result<Self> {
        if let Some(bad) = labels.iter().flatten().find(|l| l.index() >= num_labels) {
            return Err(Error::InvalidSeeds(format!(
                "label {bad} outside 1..={num_labels}"
            )));
        }
        Ok(Self { labels, num_labels })
    }

    /// Infers `K` as the largest label present.
    pub fn from_options(labels: Vec<Option<Label>>) -> Self {
        let num_labels = labels
            .iter()
            .flatten()
            .map(|l| l.index() + 1)
            .max()
            .unwrap_or(0);
        Self { labels, num_labels }
    }

    pub fn from_pairs(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, Label)>,
        num_labels: usize,
    ) -> Result<Self> {
        let mut labels = vec![None; n];
        for (node, label) in pairs {
            if node >= n {
                return Err(Error::InvalidSeeds(format!("node {node} outside 0..{n}")));
            }
            if let Some(prev) = labels[node] {
                if prev != label {
                    return Err(Error::InvalidSeeds(format!(
                        "node {node} labelled both {prev} and {label}"
                    )));
                }
            }
            labels[node] = Some(label);
        }
        Self::new(labels, num_labels)
    }

    /// Every node labelled, from 1-based raw values.
    pub fn complete(values: &[u32]) -> Result<Self> {
        let labels = values
            .iter()
            .map(|&v| Label::new(v).map(Some))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_options(labels))
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn get(&self, node: usize) -> Option<Label> {
        self.labels.get(node).copied().flatten()
    }

    pub fn as_slice(&self) -> &[Option<Label>] {
        &self.labels
    }

    /// Labelled nodes in increasing id order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Label)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.map(|l| (i, l)))
    }

    pub fn nodes(&self) -> Vec<usize> {
        self.iter().map(|(i, _)| i).collect()
    }

    pub fn len(&self) -> usize {
        self.labels.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of labelled nodes per class.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_labels];
        for (_, l) in self.iter() {
            counts[l.index()] += 1;
        }
        counts
    }

    /// Keeps only the labels of `nodes`.
    pub fn restrict(&self, nodes: &[usize]) -> Self {
        let mut labels = vec![None; self.labels.len()];
        for &v in nodes {
            labels[v] = self.labels[v];
        }
        Self {
            labels,
            num_labels: self.num_labels,
        }
    }

    /// Re-indexes onto a subset of nodes: entry `k` of the result is
    /// `self[nodes[k]]`.
    pub fn select(&self, nodes: &[usize]) -> Self {
        Self {
            labels: nodes.iter().map(|&v| self.labels[v]).collect(),
            num_labels: self.num_labels,
        }
    }

    /// Labels of the nodes that are not in `seeds`.
    pub fn without(&self, seeds: &LabeledNodes) -> Self {
        let labels = self
            .labels
            .iter()
            .zip(seeds.as_slice())
            .map(|(l, s)| if s.is_some() { None } else { *l })
            .collect();
        Self {
            labels,
            num_labels: self.num_labels,
        }
    }
}
