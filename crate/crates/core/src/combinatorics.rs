//! Exact integer primitives and the index sets of the cycle-count formula.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Side lengths `M = (m_1, ..., m_d)` of a discrete torus, each at least 3.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusSpec {
    sides: Vec<u64>,
}

impl TorusSpec {
    pub fn new(sides: Vec<u64>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::InvalidTorus("dimension must be at least 1".into()));
        }
        if let Some(m) = sides.iter().find(|&&m| m < 3) {
            return Err(Error::InvalidTorus(format!(
                "side length {m} < 3 gives a multigraph"
            )));
        }
        Ok(TorusSpec { sides })
    }

    /// The normalized torus `(m, ..., m)` of dimension `d`.
    pub fn normalized(m: u64, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidTorus("dimension must be at least 1".into()));
        }
        Self::new(vec![m; d])
    }

    pub fn sides(&self) -> &[u64] {
        &self.sides
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    /// `||M|| = m_1 ... m_d`.
    pub fn volume(&self) -> u64 {
        self.sides.iter().product()
    }

    pub fn vertex_count(&self) -> u64 {
        self.volume()
    }

    pub fn edge_count(&self) -> u64 {
        self.dim() as u64 * self.volume()
    }

    /// `q` for the `(q+1)`-regular torus graph.
    pub fn q(&self) -> u64 {
        2 * self.dim() as u64 - 1
    }

    /// `Some(m)` when every side equals `m`.
    pub fn common_side(&self) -> Option<u64> {
        let m = self.sides[0];
        self.sides.iter().all(|&s| s == m).then_some(m)
    }
}

impl fmt::Display for TorusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sides.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A descending-sorted nonnegative vector `z_1 >= ... >= z_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightVector(Vec<u64>);

impl WeightVector {
    /// Sorts `entries` into canonical descending order.
    pub fn new(mut entries: Vec<u64>) -> Self {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        WeightVector(entries)
    }

    pub fn zero(d: usize) -> Self {
        WeightVector(vec![0; d])
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|z| = z_1 + ... + z_d`.
    pub fn weight(&self) -> u64 {
        self.0.iter().sum()
    }

    /// `C_z = |z|! / (z_1! ... z_d!)`.
    pub fn multinomial(&self) -> BigInt {
        multinomial_of(&self.0)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An integer partition `mu_1 >= ... >= mu_l >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionMu(Vec<u64>);

impl PartitionMu {
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(
                "partition parts must be positive".into(),
            ));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(PartitionMu(parts))
    }

    pub fn empty() -> Self {
        PartitionMu(Vec::new())
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|mu|`.
    pub fn size(&self) -> u64 {
        self.0.iter().sum()
    }

    /// `(part value, multiplicity)` pairs, largest part first.
    pub fn multiplicities(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((v, c)) if *v == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `m * mu` padded with zeros to length `d`.
    pub fn scaled(&self, m: u64, d: usize) -> WeightVector {
        let mut z: Vec<u64> = self.0.iter().map(|&p| p * m).collect();
        z.resize(d.max(z.len()), 0);
        WeightVector(z)
    }

    /// Exponent notation as in partition tables: `0`, `1²`, `21`, `2²1`.
    pub fn exponent_notation(&self) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let wide = self.0.iter().any(|&p| p >= 10);
        let pieces: Vec<String> = self
            .multiplicities()
            .into_iter()
            .map(|(v, c)| {
                if c == 1 {
                    v.to_string()
                } else {
                    format!("{v}{}", superscript(c))
                }
            })
            .collect();
        pieces.join(if wide { "," } else { "" })
    }
}

fn superscript(n: u64) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .bytes()
        .map(|b| DIGITS[(b - b'0') as usize])
        .collect()
}

impl fmt::Display for PartitionMu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.exponent_notation())
    }
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `total! / (parts_1! ... parts_r!)`.
pub fn multinomial(total: i64, parts: &[i64]) -> Result<BigInt> {
    if parts.iter().any(|&p| p < 0) {
        return Err(Error::InvalidArgument(
            "multinomial parts must be nonnegative".into(),
        ));
    }
    if parts.iter().sum::<i64>() != total {
        return Err(Error::InvalidArgument(format!(
            "multinomial parts sum to {} but total is {total}",
            parts.iter().sum::<i64>()
        )));
    }
    let parts: Vec<u64> = parts.iter().map(|&p| p as u64).collect();
    Ok(multinomial_of(&parts))
}

/// Multinomial of `parts`, with the total taken as their sum.
pub(crate) fn multinomial_of(parts: &[u64]) -> BigInt {
    // product of binomials avoids the large total! intermediate
    let mut acc = BigInt::one();
    let mut running = 0u64;
    for &p in parts {
        running += p;
        acc *= binomial(running, p);
    }
    acc
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`; `(a)_0 = 1`.
pub fn pochhammer<T: Scalar>(a: &T, k: u32) -> T {
    let mut acc = T::one();
    let mut factor = a.clone();
    for _ in 0..k {
        acc = acc * factor.clone();
        factor = factor + T::one();
    }
    acc
}

/// Classical Möbius function by trial division.
pub fn moebius(n: i64) -> Result<i8> {
    if n <= 0 {
        return Err(Error::InvalidArgument(format!("moebius({n}) is undefined")));
    }
    let mut n = n;
    let mut sign = 1i8;
    let mut p = 2i64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// All weight vectors `z` of weight `h` realised by some `y in Z^d` as the
/// multiset `{m_j |y_j|}`, each with the number of such `y`.
///
/// Ordered descending lexicographically. `h = 0` gives `[(0,...,0), 1]`.
pub fn enumerate_weight_vectors(spec: &TorusSpec, h: u64) -> Vec<(WeightVector, u64)> {
    let mut found: BTreeMap<WeightVector, u64> = BTreeMap::new();
    let mut entries = Vec::with_capacity(spec.dim());
    collect_lifts(spec.sides(), h, 1, &mut entries, &mut found);
    found.into_iter().rev().collect()
}

// Chooses |y_j| for each coordinate in turn; a nonzero |y_j| has two signs.
fn collect_lifts(
    sides: &[u64],
    remaining: u64,
    signs: u64,
    entries: &mut Vec<u64>,
    found: &mut BTreeMap<WeightVector, u64>,
) {
    let Some((&m, rest)) = sides.split_first() else {
        if remaining == 0 {
            *found.entry(WeightVector::new(entries.clone())).or_insert(0) += signs;
        }
        return;
    };
    let mut a = 0u64;
    while a * m <= remaining {
        entries.push(a * m);
        let signs = if a == 0 { signs } else { 2 * signs };
        collect_lifts(rest, remaining - a * m, signs, entries, found);
        entries.pop();
        a += 1;
    }
}

/// `2^l C(d, l) u(mu)` where `u(mu)` is the multinomial of the part
/// multiplicities of `mu`.
pub fn normalized_multiplicity(d: usize, mu: &PartitionMu) -> Result<BigInt> {
    let l = mu.len();
    if l > d {
        return Err(Error::InvalidArgument(format!(
            "partition {mu} has {l} parts but the torus has dimension {d}"
        )));
    }
    let counts: Vec<u64> = mu.multiplicities().into_iter().map(|(_, c)| c).collect();
    let u = multinomial_of(&counts);
    Ok((BigInt::one() << l) * binomial(d as u64, l as u64) * u)
}

/// Partitions of `h` with at most `max_len` parts, in reverse lexicographic
/// order (`(h)` first).
pub fn partitions(h: u64, max_len: usize) -> Vec<PartitionMu> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    partitions_rec(h, h, max_len, &mut current, &mut out);
    out
}

fn partitions_rec(
    remaining: u64,
    largest: u64,
    max_len: usize,
    current: &mut Vec<u64>,
    out: &mut Vec<PartitionMu>,
) {
    if remaining == 0 {
        out.push(PartitionMu(current.clone()));
        return;
    }
    if current.len() == max_len {
        return;
    }
    for p in (1..=largest.min(remaining)).rev() {
        current.push(p);
        partitions_rec(remaining - p, p, max_len, current, out);
        current.pop();
    }
}

/// Calls `f` on every weak composition of `n` into `parts` nonnegative parts.
pub fn for_each_composition(n: u64, parts: usize, mut f: impl FnMut(&[u64])) {
    if parts == 0 {
        if n == 0 {
            f(&[]);
        }
        return;
    }
    let mut buf = vec![0u64; parts];
    compositions_rec(n, 0, &mut buf, &mut f);
}

fn compositions_rec(remaining: u64, idx: usize, buf: &mut [u64], f: &mut impl FnMut(&[u64])) {
    if idx + 1 == buf.len() {
        buf[idx] = remaining;
        f(buf);
        return;
    }
    for v in (0..=remaining).rev() {
        buf[idx] = v;
        compositions_rec(remaining - v, idx + 1, buf, f);
    }
}
