//! Brute-force ground truth: the torus Cayley graph, its non-backtracking
//! edge matrix `W`, exact `tr(W^n)`, and DFS enumeration of reduced walks on
//! the torus and in the covering lattice `Z^d`.
//!
//! A closed walk `s_1 ... s_n` (steps in `{±e_1, ..., ±e_d}`) is reduced when
//! `s_{i+1} != -s_i` for every `i` and also `s_1 != -s_n`, i.e. its square has
//! no backtrack. This is exactly the class counted by `tr(W^n)`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{CheckedAdd, Zero};
use rayon::prelude::*;

use crate::combinatorics::{PartitionMu, TorusSpec};
use crate::error::{Error, Result};

/// Cap on DFS node visits for the enumerative oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkBudget {
    pub max_nodes: u64,
}

impl Default for WorkBudget {
    fn default() -> Self {
        WorkBudget {
            max_nodes: 100_000_000,
        }
    }
}

impl WorkBudget {
    pub fn new(max_nodes: u64) -> Result<Self> {
        if max_nodes == 0 {
            return Err(Error::InvalidArgument(
                "work budget must be positive".into(),
            ));
        }
        Ok(WorkBudget { max_nodes })
    }

    /// Rejects a walk tree of `n` levels with `2d` roots and `2d - 1` children
    /// per node when its size exceeds the budget.
    fn admit(&self, d: usize, n: u64) -> Result<()> {
        let estimate = walk_tree_size(d, n);
        if estimate > self.max_nodes as u128 {
            return Err(Error::BudgetExceeded {
                budget: self.max_nodes,
                estimate,
            });
        }
        Ok(())
    }
}

fn walk_tree_size(d: usize, n: u64) -> u128 {
    let roots = 2 * d as u128;
    let branching = roots - 1;
    let mut level = roots;
    let mut total = 0u128;
    for _ in 0..n {
        total = total.saturating_add(level);
        level = level.saturating_mul(branching);
    }
    total
}

/// Generator `g` in `0..2d`: `2j` is `+e_j`, `2j + 1` is `-e_j`.
#[inline]
fn reverse(g: usize) -> usize {
    g ^ 1
}

/// The Cayley graph of `Z/m_1 x ... x Z/m_d` with generators `±e_j`.
#[derive(Debug, Clone)]
pub struct TorusGraph {
    spec: TorusSpec,
    strides: Vec<usize>,
    // neighbors[v * 2d + g]
    neighbors: Vec<usize>,
}

/// Builds the torus graph; vertices use the mixed-radix index
/// `x_1 + m_1 x_2 + m_1 m_2 x_3 + ...`.
pub fn build_torus(spec: &TorusSpec) -> TorusGraph {
    let d = spec.dim();
    let sides: Vec<usize> = spec.sides().iter().map(|&m| m as usize).collect();
    let mut strides = Vec::with_capacity(d);
    let mut acc = 1usize;
    for &m in &sides {
        strides.push(acc);
        acc *= m;
    }
    let count = acc;
    let mut neighbors = Vec::with_capacity(count * 2 * d);
    for v in 0..count {
        for (&m, &stride) in sides.iter().zip(&strides) {
            let x = (v / stride) % m;
            let base = v - x * stride;
            neighbors.push(base + ((x + 1) % m) * stride);
            neighbors.push(base + ((x + m - 1) % m) * stride);
        }
    }
    TorusGraph {
        spec: spec.clone(),
        strides,
        neighbors,
    }
}

impl TorusGraph {
    pub fn spec(&self) -> &TorusSpec {
        &self.spec
    }

    pub fn vertex_count(&self) -> usize {
        self.neighbors.len() / self.degree()
    }

    pub fn degree(&self) -> usize {
        2 * self.spec.dim()
    }

    pub fn neighbor(&self, v: usize, g: usize) -> usize {
        self.neighbors[v * self.degree() + g]
    }

    pub fn coordinates(&self, v: usize) -> Vec<usize> {
        self.spec
            .sides()
            .iter()
            .zip(&self.strides)
            .map(|(&m, &s)| (v / s) % m as usize)
            .collect()
    }

    /// Undirected edges `{v, v + e_j}`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let deg = self.degree();
        (0..self.vertex_count())
            .flat_map(|v| (0..deg).step_by(2).map(move |g| (v, g)))
            .map(|(v, g)| (v, self.neighbor(v, g)))
            .collect()
    }

    /// Graph distance to vertex 0.
    fn distance_to_origin(&self, v: usize) -> u64 {
        self.coordinates(v)
            .iter()
            .zip(self.spec.sides())
            .map(|(&x, &m)| (x as u64).min(m - x as u64))
            .sum()
    }
}

/// The `2|E| x 2|E|` non-backtracking operator: `(u->v)` feeds `(v->w)` iff `w != u`.
///
/// Directed edge `v * 2d + g` leaves `v` along generator `g`.
#[derive(Debug, Clone)]
pub struct DirectedEdgeMatrix {
    dim: usize,
    branching: usize,
    // successors[e * branching + i]
    successors: Vec<usize>,
}

impl DirectedEdgeMatrix {
    pub fn new(graph: &TorusGraph) -> Self {
        let deg = graph.degree();
        let dim = graph.vertex_count() * deg;
        let branching = deg - 1;
        let mut successors = Vec::with_capacity(dim * branching);
        for e in 0..dim {
            let (v, g) = (e / deg, e % deg);
            let w = graph.neighbor(v, g);
            successors.extend(
                (0..deg)
                    .filter(|&g2| g2 != reverse(g))
                    .map(|g2| w * deg + g2),
            );
        }
        DirectedEdgeMatrix {
            dim,
            branching,
            successors,
        }
    }

    /// Number of directed edges, `2|E|`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn successors(&self, e: usize) -> &[usize] {
        &self.successors[e * self.branching..(e + 1) * self.branching]
    }

    pub fn entry(&self, e: usize, f: usize) -> u8 {
        u8::from(self.successors(e).contains(&f))
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.dim).map(|e| self.successors(e).len()).collect()
    }

    /// `(W^n)_{ee}`, propagating the unit row vector of `e`.
    fn diagonal_entry<T: Zero + Clone + CheckedAdd>(&self, e: usize, n: u64, one: &T) -> Option<T> {
        let mut current = vec![T::zero(); self.dim];
        current[e] = one.clone();
        for _ in 0..n {
            let mut next = vec![T::zero(); self.dim];
            for (src, value) in current.iter().enumerate() {
                if value.is_zero() {
                    continue;
                }
                for &dst in self.successors(src) {
                    next[dst] = next[dst].checked_add(value)?;
                }
            }
            current = next;
        }
        Some(current[e].clone())
    }

    fn trace_in<T: Zero + Clone + CheckedAdd + Send + Sync>(&self, n: u64, one: T) -> Option<T> {
        let diagonal: Vec<Option<T>> = (0..self.dim)
            .into_par_iter()
            .map(|e| self.diagonal_entry(e, n, &one))
            .collect();
        diagonal
            .into_iter()
            .try_fold(T::zero(), |acc, v| acc.checked_add(&v?))
    }

    /// Exact `tr(W^n)`; machine integers first, big integers on overflow.
    pub fn power_trace(&self, n: u64) -> BigInt {
        match self.trace_in::<u128>(n, 1) {
            Some(t) => BigInt::from(t),
            None => BigInt::from(
                self.trace_in::<BigUint>(n, BigUint::from(1u8))
                    .expect("big integers do not overflow"),
            ),
        }
    }
}

/// `N(n) = tr(W^n)` for the torus `spec`.
pub fn trace_count(spec: &TorusSpec, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "cycle length must be at least 1".into(),
        ));
    }
    let graph = build_torus(spec);
    Ok(DirectedEdgeMatrix::new(&graph).power_trace(n))
}

/// `||M||` times the number of reduced closed walks of length `n` based at
/// vertex 0, enumerated by DFS on the torus itself.
pub fn count_reduced_cycles_enumerative(
    spec: &TorusSpec,
    n: u64,
    budget: WorkBudget,
) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "cycle length must be at least 1".into(),
        ));
    }
    budget.admit(spec.dim(), n)?;
    let graph = build_torus(spec);
    let deg = graph.degree();
    let based: u64 = (0..deg)
        .into_par_iter()
        .map(|first| {
            let mut walk = TorusWalk {
                graph: &graph,
                length: n,
                first,
                count: 0,
            };
            walk.extend(graph.neighbor(0, first), first, 1);
            walk.count
        })
        .sum();
    Ok(BigInt::from(based) * spec.volume())
}

struct TorusWalk<'a> {
    graph: &'a TorusGraph,
    length: u64,
    first: usize,
    count: u64,
}

impl TorusWalk<'_> {
    fn extend(&mut self, v: usize, last: usize, taken: u64) {
        if taken == self.length {
            if v == 0 && last != reverse(self.first) {
                self.count += 1;
            }
            return;
        }
        if self.graph.distance_to_origin(v) > self.length - taken {
            return;
        }
        for g in 0..self.graph.degree() {
            if g != reverse(last) {
                self.extend(self.graph.neighbor(v, g), g, taken + 1);
            }
        }
    }
}

/// Reduced walks of length `n` in `Z^d` from the origin to `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeWalkQuery {
    pub m: u64,
    pub n: u64,
    pub target: Vec<i64>,
}

impl LatticeWalkQuery {
    pub fn new(m: u64, n: u64, target: Vec<i64>) -> Result<Self> {
        if target.is_empty() {
            return Err(Error::InvalidArgument(
                "target must have dimension at least 1".into(),
            ));
        }
        if m < 3 {
            return Err(Error::InvalidTorus(format!("modulus {m} < 3")));
        }
        Ok(LatticeWalkQuery { m, n, target })
    }

    /// The target `(m mu_1, ..., m mu_d)`, padded with zeros.
    pub fn for_partition(m: u64, d: usize, n: u64, mu: &PartitionMu) -> Result<Self> {
        if mu.len() > d {
            return Err(Error::InvalidArgument(format!(
                "{mu} has more than {d} parts"
            )));
        }
        let target = mu
            .scaled(m, d)
            .entries()
            .iter()
            .map(|&v| v as i64)
            .collect();
        Self::new(m, n, target)
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    fn l1(&self) -> u64 {
        self.target.iter().map(|t| t.unsigned_abs()).sum()
    }

    pub fn is_feasible(&self) -> bool {
        self.l1() <= self.n && self.l1() % 2 == self.n % 2
    }
}

/// Number of reduced walks answering `query` (closure condition included,
/// since the projected torus walk closes at the base point).
pub fn count_reduced_paths_mod_m(query: &LatticeWalkQuery, budget: WorkBudget) -> Result<BigInt> {
    if !query.is_feasible() {
        return Ok(BigInt::zero());
    }
    budget.admit(query.dim(), query.n)?;
    let mut search = LatticeSearch::new(query.dim(), query.n);
    let mut found = 0u64;
    search.run(
        &mut |end| {
            if end == query.target.as_slice() {
                found += 1;
            }
        },
        Some(&query.target),
    );
    Ok(BigInt::from(found))
}

/// Endpoint histogram of every reduced length-`n` walk that ends in `m Z^d`,
/// keyed by `p` with endpoint `m p`.
pub fn reduced_path_endpoints(
    d: usize,
    m: u64,
    n: u64,
    budget: WorkBudget,
) -> Result<BTreeMap<Vec<i64>, u64>> {
    if m < 3 || d == 0 {
        return Err(Error::InvalidArgument("need d >= 1 and m >= 3".into()));
    }
    budget.admit(d, n)?;
    let mut search = LatticeSearch::new(d, n);
    let mut hist = BTreeMap::new();
    let m = m as i64;
    search.run(
        &mut |end| {
            if end.iter().all(|x| x.rem_euclid(m) == 0) {
                *hist.entry(end.iter().map(|x| x / m).collect()).or_insert(0) += 1;
            }
        },
        None,
    );
    Ok(hist)
}

struct LatticeSearch {
    n: u64,
    position: Vec<i64>,
    first: usize,
}

impl LatticeSearch {
    fn new(d: usize, n: u64) -> Self {
        LatticeSearch {
            n,
            position: vec![0; d],
            first: 0,
        }
    }

    fn apply(&mut self, g: usize, sign: i64) {
        let delta = if g.is_multiple_of(2) { 1 } else { -1 };
        self.position[g / 2] += sign * delta;
    }

    fn run(&mut self, emit: &mut impl FnMut(&[i64]), target: Option<&[i64]>) {
        if self.n == 0 {
            emit(&self.position.clone());
            return;
        }
        for g in 0..2 * self.position.len() {
            self.first = g;
            self.apply(g, 1);
            self.extend(g, 1, emit, target);
            self.apply(g, -1);
        }
    }

    fn extend(
        &mut self,
        last: usize,
        taken: u64,
        emit: &mut impl FnMut(&[i64]),
        target: Option<&[i64]>,
    ) {
        if taken == self.n {
            if last != reverse(self.first) {
                emit(&self.position);
            }
            return;
        }
        if let Some(t) = target {
            let dist: u64 = self
                .position
                .iter()
                .zip(t)
                .map(|(p, t)| (p - t).unsigned_abs())
                .sum();
            if dist > self.n - taken {
                return;
            }
        }
        for g in 0..2 * self.position.len() {
            if g == reverse(last) {
                continue;
            }
            self.apply(g, 1);
            self.extend(g, taken + 1, emit, target);
            self.apply(g, -1);
        }
    }
}
