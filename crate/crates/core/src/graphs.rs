//! Order-n Virasoro graphs as partial permutations of the label set, their
//! cycle/chain decomposition and the bivariate census.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::GraphError;
use crate::expr::Label;

/// Default enumeration cap. Full enumeration at the cap (~1.44M graphs)
/// stays under a few seconds.
pub const ENUMERATION_CAP: usize = 8;

/// A directed graph on labels `1..=n` given by a partial injective map
/// `i -> sigma(i)`. Every vertex has degree 0, 1 or 2, so the components are
/// cycles and chains (an isolated vertex is a degenerate chain).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VirasoroGraph {
    pub n: u8,
    /// Edges `(i, sigma(i))`, sorted by source label.
    pub edges: Vec<(Label, Label)>,
}

impl VirasoroGraph {
    pub fn new(n: u8, mut edges: Vec<(Label, Label)>) -> Self {
        edges.sort_unstable();
        let g = VirasoroGraph { n, edges };
        debug_assert!(g.is_valid());
        g
    }

    /// Injectivity and label-range check.
    pub fn is_valid(&self) -> bool {
        let mut seen_src = std::collections::HashSet::new();
        let mut seen_dst = std::collections::HashSet::new();
        self.edges.iter().all(|&(i, j)| {
            (1..=self.n).contains(&i)
                && (1..=self.n).contains(&j)
                && seen_src.insert(i)
                && seen_dst.insert(j)
        })
    }

    pub fn successor(&self, i: Label) -> Option<Label> {
        self.edges
            .binary_search_by_key(&i, |&(src, _)| src)
            .ok()
            .map(|pos| self.edges[pos].1)
    }

    /// The inverse partial permutation (every edge reversed).
    pub fn inverse(&self) -> VirasoroGraph {
        VirasoroGraph::new(self.n, self.edges.iter().map(|&(i, j)| (j, i)).collect())
    }

    pub fn classify(&self) -> Decomposition {
        let mut has_pred = vec![false; self.n as usize + 1];
        for &(_, j) in &self.edges {
            has_pred[j as usize] = true;
        }
        let mut visited = vec![false; self.n as usize + 1];
        let mut chains = Vec::new();
        // chains start at vertices with no incoming edge
        for start in 1..=self.n {
            if has_pred[start as usize] {
                continue;
            }
            let mut path = vec![start];
            visited[start as usize] = true;
            let mut cur = start;
            while let Some(next) = self.successor(cur) {
                path.push(next);
                visited[next as usize] = true;
                cur = next;
            }
            chains.push(path);
        }
        // everything left lies on a cycle; list each from its smallest label
        let mut cycles = Vec::new();
        for start in 1..=self.n {
            if visited[start as usize] {
                continue;
            }
            let mut cycle = vec![start];
            visited[start as usize] = true;
            let mut cur = self.successor(start).expect("cycle vertex has a successor");
            while cur != start {
                cycle.push(cur);
                visited[cur as usize] = true;
                cur = self.successor(cur).expect("cycle vertex has a successor");
            }
            cycles.push(cycle);
        }
        Decomposition { cycles, chains }
    }
}

/// Partition of the vertices into cycles and chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Cycles in traversal order, each starting at its smallest label.
    pub cycles: Vec<Vec<Label>>,
    /// Chains in path order from the source end; degenerate chains are
    /// length-1 paths.
    pub chains: Vec<Vec<Label>>,
}

impl Decomposition {
    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn chain_count(&self) -> usize {
        self.chains.len()
    }
}

/// Visit every order-n graph in a fixed lexicographic order without
/// materialising the whole sequence. The order is lexicographic on the
/// per-label choice vector: for each label in turn, "no edge" sorts before
/// edges to targets in ascending order.
pub fn for_each_graph(n: usize, cap: usize, mut f: impl FnMut(&VirasoroGraph)) -> Result<(), GraphError> {
    if n > cap {
        return Err(GraphError::SizeLimit { n, cap });
    }
    let n8 = n as u8;
    let mut used = vec![false; n + 1];
    let mut edges: Vec<(Label, Label)> = Vec::with_capacity(n);
    fn rec(
        label: Label,
        n: u8,
        used: &mut [bool],
        edges: &mut Vec<(Label, Label)>,
        f: &mut impl FnMut(&VirasoroGraph),
    ) {
        if label > n {
            f(&VirasoroGraph {
                n,
                edges: edges.clone(),
            });
            return;
        }
        rec(label + 1, n, used, edges, f);
        for target in 1..=n {
            if used[target as usize] {
                continue;
            }
            used[target as usize] = true;
            edges.push((label, target));
            rec(label + 1, n, used, edges, f);
            edges.pop();
            used[target as usize] = false;
        }
    }
    rec(1, n8, &mut used, &mut edges, &mut f);
    Ok(())
}

/// All order-n graphs in enumeration order.
pub fn enumerate_graphs(n: usize) -> Result<Vec<VirasoroGraph>, GraphError> {
    let mut out = Vec::new();
    for_each_graph(n, ENUMERATION_CAP, |g| out.push(g.clone()))?;
    Ok(out)
}

/// Census table: number of graphs with `K` cycles and `M` chains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub n: usize,
    /// `(K, M) -> count`.
    pub table: BTreeMap<(u32, u32), u64>,
}

impl Census {
    pub fn total(&self) -> u64 {
        self.table.values().sum()
    }
}

pub fn census(n: usize) -> Result<Census, GraphError> {
    let mut table = BTreeMap::new();
    for_each_graph(n, ENUMERATION_CAP, |g| {
        let d = g.classify();
        *table
            .entry((d.cycle_count() as u32, d.chain_count() as u32))
            .or_insert(0u64) += 1;
    })?;
    Ok(Census { n, table })
}

/// Bivariate polynomial in the chain marker `alpha` and cycle marker `beta`
/// with nonnegative integer coefficients, stored `(alpha_deg, beta_deg) ->
/// coefficient`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingPolynomial {
    pub coeffs: BTreeMap<(u32, u32), u64>,
}

/// Expanded graph generating function: sum over i of `C(n,i) * alpha^i *
/// (beta+i)(beta+i+1)...(beta+n-1)`, the closed form of the census table.
pub fn counting_polynomial(n: usize) -> CountingPolynomial {
    let mut coeffs: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for i in 0..=n {
        // rising factorial in beta: product_{j=i..n-1} (beta + j)
        let mut beta_poly: Vec<u64> = vec![1]; // coefficients by beta-degree
        for j in i..n {
            let mut next = vec![0u64; beta_poly.len() + 1];
            for (deg, &coef) in beta_poly.iter().enumerate() {
                next[deg + 1] += coef;
                next[deg] += coef * j as u64;
            }
            beta_poly = next;
        }
        let binom = binomial(n as u64, i as u64);
        for (beta_deg, &coef) in beta_poly.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            *coeffs.entry((i as u32, beta_deg as u32)).or_insert(0) += binom * coef;
        }
    }
    CountingPolynomial { coeffs }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl CountingPolynomial {
    /// Coefficient table keyed like the census: `(K, M) -> count` where the
    /// beta-degree counts cycles and the alpha-degree counts chains.
    pub fn as_census_table(&self) -> BTreeMap<(u32, u32), u64> {
        self.coeffs
            .iter()
            .map(|(&(alpha_deg, beta_deg), &coef)| ((beta_deg, alpha_deg), coef))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts_small_orders() {
        assert_eq!(enumerate_graphs(0).unwrap().len(), 1);
        assert_eq!(enumerate_graphs(1).unwrap().len(), 2);
        assert_eq!(enumerate_graphs(2).unwrap().len(), 7);
        assert_eq!(enumerate_graphs(3).unwrap().len(), 34);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            for_each_graph(9, ENUMERATION_CAP, |_| {}),
            Err(GraphError::SizeLimit { n: 9, cap: 8 })
        );
    }

    #[test]
    fn classify_small_cases() {
        let g = VirasoroGraph::new(1, vec![(1, 1)]);
        let d = g.classify();
        assert_eq!(d.cycles, vec![vec![1]]);
        assert!(d.chains.is_empty());

        let g = VirasoroGraph::new(2, vec![(1, 2)]);
        let d = g.classify();
        assert_eq!(d.chains, vec![vec![1, 2]]);
        assert_eq!(d.cycle_count(), 0);

        let g = VirasoroGraph::new(2, vec![(1, 2), (2, 1)]);
        let d = g.classify();
        assert_eq!(d.cycles, vec![vec![1, 2]]);
        assert_eq!(d.chain_count(), 0);
    }

    #[test]
    fn classify_partitions_all_labels() {
        for g in enumerate_graphs(4).unwrap() {
            let d = g.classify();
            let mut labels: Vec<Label> = d
                .cycles
                .iter()
                .chain(d.chains.iter())
                .flatten()
                .copied()
                .collect();
            labels.sort_unstable();
            assert_eq!(labels, vec![1, 2, 3, 4], "graph {:?}", g);
        }
    }

    #[test]
    fn census_matches_worked_orders() {
        // p^1 = alpha + beta
        let c1 = census(1).unwrap();
        assert_eq!(c1.table, BTreeMap::from([((0, 1), 1), ((1, 0), 1)]));
        // p^2 = alpha^2 + 2 alpha beta + beta^2 + beta + 2 alpha
        let c2 = census(2).unwrap();
        assert_eq!(
            c2.table,
            BTreeMap::from([
                ((0, 1), 2),
                ((0, 2), 1),
                ((1, 0), 1),
                ((1, 1), 2),
                ((2, 0), 1),
            ])
        );
    }

    #[test]
    fn counting_polynomial_worked_orders() {
        let p1 = counting_polynomial(1);
        assert_eq!(p1.coeffs, BTreeMap::from([((0, 1), 1), ((1, 0), 1)]));
        let p2 = counting_polynomial(2);
        assert_eq!(
            p2.coeffs,
            BTreeMap::from([
                ((0, 1), 1),
                ((0, 2), 1),
                ((1, 0), 2),
                ((1, 1), 2),
                ((2, 0), 1),
            ])
        );
    }

    #[test]
    fn counting_polynomial_matches_census_to_order_five() {
        for n in 0..=5 {
            assert_eq!(
                counting_polynomial(n).as_census_table(),
                census(n).unwrap().table,
                "order {n}"
            );
        }
    }

    #[test]
    fn inverse_preserves_component_counts() {
        for g in enumerate_graphs(4).unwrap() {
            let inv = g.inverse();
            assert!(inv.is_valid());
            let (d, di) = (g.classify(), inv.classify());
            assert_eq!(d.cycle_count(), di.cycle_count());
            assert_eq!(d.chain_count(), di.chain_count());
        }
    }

    #[test]
    fn enumeration_is_deterministic_and_duplicate_free() {
        let graphs = enumerate_graphs(3).unwrap();
        let mut sorted = graphs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), graphs.len());
        assert_eq!(graphs, enumerate_graphs(3).unwrap());
    }
}
