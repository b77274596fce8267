//! Exact evaluation of the explicit cycle-count formula.
//!
//! For `n >= 3` the number of reduced cycles of length `n` on `DT_M` is
//!
//! ```text
//! N_M(n) = ||M|| sum_{h <= n, h = n mod 2} sum_{z in P_M(h)} m_M(z) X_{M,h}(n; z)
//! X_{M,h}(n; z) = 2(d-1) [h = 0] + 2n (-(2d-1))^k / (n+h) C_z P^{(z,-1)}_{d,k}((2d-3)/(2d-1)),  k = (n-h)/2
//! ```
//!
//! `X` is carried as a rational. Its integrality is an open conjecture, so it
//! is reported by callers rather than assumed here.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::combinatorics::{
    divisors, enumerate_weight_vectors, moebius, normalized_multiplicity, partitions, PartitionMu,
    TorusSpec, WeightVector,
};
use crate::error::{Error, Result};
use crate::hypergeo::{jacobi_general, jacobi_point, JacobiParams};
use crate::scalar::Scalar;
use crate::{Integer, Rational};

/// One `(h, z)` term of the outer sums.
#[derive(Debug, Clone, PartialEq)]
pub struct Contribution {
    pub h: u64,
    pub z: WeightVector,
    /// Set when the term comes from the partition-indexed normalized formula.
    pub partition: Option<PartitionMu>,
    pub multiplicity: Integer,
    pub x: Rational,
}

impl Contribution {
    pub fn x_is_nonnegative_integer(&self) -> bool {
        self.x.is_integer() && !self.x.is_negative()
    }
}

/// Per-length result of the formula, optionally annotated with an oracle value.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleCountReport {
    pub torus: TorusSpec,
    pub n: u64,
    pub total: Integer,
    pub pi: Option<Rational>,
    pub contributions: Vec<Contribution>,
    pub oracle_total: Option<Integer>,
    pub oracle_match: Option<bool>,
}

impl CycleCountReport {
    pub fn with_oracle(mut self, oracle_total: Integer) -> Self {
        self.oracle_match = Some(oracle_total == self.total);
        self.oracle_total = Some(oracle_total);
        self
    }

    /// `||M|| * sum m(z) X(z)`, recomputed from the stored contributions.
    pub fn recomputed_total(&self) -> Rational {
        let sum = self.contributions.iter().fold(Rational::zero(), |acc, c| {
            acc + Rational::from_integer(c.multiplicity.clone()) * &c.x
        });
        sum * Rational::from_integer(BigInt::from(self.torus.volume()))
    }
}

/// `X_{M,h}(n; z)` in any [`Scalar`]; `d` is the torus dimension.
pub fn x_weight_in<T: Scalar>(d: usize, n: u64, h: u64, z: &WeightVector) -> Result<T> {
    if h > n || !(n - h).is_multiple_of(2) {
        return Err(Error::Parity { n, h });
    }
    if z.weight() != h {
        return Err(Error::InvalidArgument(format!(
            "weight of {z} is not h = {h}"
        )));
    }
    if z.dim() != d {
        return Err(Error::InvalidArgument(format!(
            "{z} does not have dimension {d}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument(
            "cycle length must be positive".into(),
        ));
    }
    let k = ((n - h) / 2) as u32;
    let q = T::from_int(2 * d as i64 - 1);
    let mut sign_power = T::one();
    for _ in 0..k {
        sign_power = sign_power * -q.clone();
    }
    let p = JacobiParams::integral(z.entries(), -T::one(), k)?;
    let jacobi = jacobi_general(&p, &jacobi_point::<T>(d))?;
    let prefactor = T::from_int(2 * n as i64) / T::from_int((n + h) as i64);
    let mut x = prefactor * sign_power * T::from_bigint(&z.multinomial()) * jacobi;
    if h == 0 {
        x = x + T::from_int(2 * (d as i64 - 1));
    }
    Ok(x)
}

/// Exact `X_{M,h}(n; z)`. Only the dimension of `M` enters.
pub fn x_weight(spec: &TorusSpec, n: u64, h: u64, z: &WeightVector) -> Result<Rational> {
    x_weight_in::<Rational>(spec.dim(), n, h, z)
}

/// `X^{(d)}_{m,h}(n; mu)` of the normalized torus, i.e. `X` at `z = m mu`.
pub fn x_weight_normalized(m: u64, d: usize, n: u64, mu: &PartitionMu) -> Result<Rational> {
    if mu.len() > d {
        return Err(Error::InvalidArgument(format!(
            "{mu} has more than {d} parts"
        )));
    }
    x_weight_in::<Rational>(d, n, m * mu.size(), &mu.scaled(m, d))
}

fn checked_length(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument(
            "cycle length must be at least 1".into(),
        ))
    } else {
        Ok(())
    }
}

fn finish(spec: &TorusSpec, n: u64, contributions: Vec<Contribution>) -> Result<CycleCountReport> {
    let mut report = CycleCountReport {
        torus: spec.clone(),
        n,
        total: Integer::zero(),
        pi: None,
        contributions,
        oracle_total: None,
        oracle_match: None,
    };
    let total = report.recomputed_total();
    if !total.is_integer() {
        return Err(Error::NonIntegral(format!(
            "N({n}) on {spec} evaluated to {total}"
        )));
    }
    report.total = total.to_integer();
    Ok(report)
}

/// `N_M(n)` from the general formula, with every `(h, z)` term recorded.
///
/// Lengths 1 and 2 return 0: the torus has girth at least 3.
pub fn count_reduced_cycles(spec: &TorusSpec, n: u64) -> Result<CycleCountReport> {
    checked_length(n)?;
    if n < 3 {
        return finish(spec, n, Vec::new());
    }
    let terms: Vec<(u64, WeightVector, u64)> = (n % 2..=n)
        .step_by(2)
        .flat_map(|h| {
            enumerate_weight_vectors(spec, h)
                .into_iter()
                .map(move |(z, mult)| (h, z, mult))
        })
        .collect();
    let contributions = terms
        .into_par_iter()
        .map(|(h, z, mult)| {
            let x = x_weight(spec, n, h, &z)?;
            Ok(Contribution {
                h,
                z,
                partition: None,
                multiplicity: Integer::from(mult),
                x,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    finish(spec, n, contributions)
}

/// `N^{(d)}_m(n)` for the normalized torus `(m, ..., m)`, indexed by
/// partitions `mu |- h` with at most `d` parts and `m(mu) = 2^l C(d,l) u(mu)`.
pub fn count_normalized(m: u64, d: usize, n: u64) -> Result<CycleCountReport> {
    let spec = TorusSpec::normalized(m, d)?;
    checked_length(n)?;
    if n < 3 {
        return finish(&spec, n, Vec::new());
    }
    let mut terms = Vec::new();
    let mut h = 0;
    while m * h <= n {
        if (m * h) % 2 == n % 2 {
            terms.extend(partitions(h, d).into_iter().map(|mu| (h, mu)));
        }
        h += 1;
    }
    let contributions = terms
        .into_par_iter()
        .map(|(h, mu)| {
            let x = x_weight_normalized(m, d, n, &mu)?;
            Ok(Contribution {
                h,
                z: mu.scaled(m, d),
                multiplicity: normalized_multiplicity(d, &mu)?,
                partition: Some(mu),
                x,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    finish(&spec, n, contributions)
}

/// Möbius inversion `pi(n) = (1/n) sum_{b | n} mu(n/b) N(b)`, given any source
/// of `N`. A non-integral or negative result is an internal inconsistency.
pub fn prime_classes_from(
    n: u64,
    mut count: impl FnMut(u64) -> Result<Integer>,
) -> Result<Rational> {
    checked_length(n)?;
    let mut acc = Integer::zero();
    for b in divisors(n) {
        let mu = moebius((n / b) as i64)?;
        if mu != 0 {
            acc += count(b)? * mu;
        }
    }
    let (quot, rem) = acc.div_rem(&Integer::from(n));
    if !rem.is_zero() || quot.is_negative() {
        return Err(Error::NonIntegral(format!(
            "Möbius inversion at n = {n} gave {acc}/{n}"
        )));
    }
    Ok(Rational::from_integer(quot))
}

/// Number of prime reduced cycle classes of length `n`.
pub fn count_prime_classes(spec: &TorusSpec, n: u64) -> Result<Rational> {
    prime_classes_from(n, |b| count_reduced_cycles(spec, b).map(|r| r.total))
}

/// gcd of all `n <= n_max` with `pi(n) > 0`, or 0 when there are none.
pub fn empirical_delta(spec: &TorusSpec, n_max: u64) -> Result<u64> {
    if n_max < 3 {
        return Err(Error::InvalidArgument("n_max must be at least 3".into()));
    }
    let totals = (1..=n_max)
        .map(|n| count_reduced_cycles(spec, n).map(|r| r.total))
        .collect::<Result<Vec<_>>>()?;
    let mut delta = 0u64;
    for n in 1..=n_max {
        let pi = prime_classes_from(n, |b| Ok(totals[(b - 1) as usize].clone()))?;
        if pi > Rational::zero() {
            delta = delta.gcd(&n);
        }
    }
    Ok(delta)
}

/// True when every `X` in `report` is a nonnegative integer.
pub fn all_weights_integral(report: &CycleCountReport) -> bool {
    report
        .contributions
        .iter()
        .all(Contribution::x_is_nonnegative_integer)
}

/// `N / ||M||` as an exact integer, the normalization used in tables.
pub fn per_vertex(report: &CycleCountReport) -> Integer {
    &report.total / Integer::from(report.torus.volume())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus(sides: &[u64]) -> TorusSpec {
        TorusSpec::new(sides.to_vec()).unwrap()
    }

    fn int(v: i64) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn x_weight_examples() {
        let t = torus(&[3, 3]);
        assert_eq!(
            x_weight(&t, 3, 3, &WeightVector::new(vec![3, 0])).unwrap(),
            int(1)
        );
        assert_eq!(
            x_weight(&t, 6, 6, &WeightVector::new(vec![3, 3])).unwrap(),
            int(20)
        );
        assert_eq!(
            x_weight(&t, 6, 6, &WeightVector::new(vec![6, 0])).unwrap(),
            int(1)
        );
        assert_eq!(x_weight(&t, 6, 0, &WeightVector::zero(2)).unwrap(), int(24));
    }

    #[test]
    fn x_weight_rejects_bad_keys() {
        let t = torus(&[3, 3]);
        assert_eq!(
            x_weight(&t, 5, 0, &WeightVector::zero(2)).unwrap_err(),
            Error::Parity { n: 5, h: 0 }
        );
        assert!(x_weight(&t, 6, 6, &WeightVector::new(vec![3, 0])).is_err());
        assert!(x_weight(&t, 6, 8, &WeightVector::new(vec![8, 0])).is_err());
        assert!(x_weight(&t, 6, 3, &WeightVector::new(vec![3])).is_err());
    }

    #[test]
    fn count_examples() {
        assert_eq!(
            count_reduced_cycles(&torus(&[3, 3]), 6).unwrap().total,
            Integer::from(972)
        );
        assert_eq!(
            count_reduced_cycles(&torus(&[3]), 6).unwrap().total,
            Integer::from(6)
        );
        assert_eq!(
            count_reduced_cycles(&torus(&[3]), 5).unwrap().total,
            Integer::zero()
        );
        assert_eq!(
            count_reduced_cycles(&torus(&[3, 3]), 10).unwrap().total,
            Integer::from(59040)
        );
        assert_eq!(
            count_reduced_cycles(&torus(&[3, 3]), 2).unwrap().total,
            Integer::zero()
        );
        assert!(count_reduced_cycles(&torus(&[3, 3]), 0).is_err());
    }

    #[test]
    fn worked_decomposition_at_six() {
        let r = count_reduced_cycles(&torus(&[3, 3]), 6).unwrap();
        let terms: Vec<(u64, Vec<u64>, Integer, Rational)> = r
            .contributions
            .iter()
            .map(|c| {
                (
                    c.h,
                    c.z.entries().to_vec(),
                    c.multiplicity.clone(),
                    c.x.clone(),
                )
            })
            .collect();
        assert_eq!(
            terms,
            vec![
                (0, vec![0, 0], Integer::from(1), int(24)),
                (6, vec![6, 0], Integer::from(4), int(1)),
                (6, vec![3, 3], Integer::from(4), int(20)),
            ]
        );
    }

    #[test]
    fn normalized_examples() {
        assert_eq!(
            count_normalized(3, 2, 9).unwrap().total,
            Integer::from(20988)
        );
        assert_eq!(count_normalized(3, 2, 3).unwrap().total, Integer::from(36));
        let r = count_normalized(4, 2, 5).unwrap();
        assert_eq!(r.total, Integer::zero());
        assert!(r.contributions.is_empty());
    }

    #[test]
    fn normalized_route_equals_general_route() {
        for m in [3u64, 4] {
            for d in 1..=3usize {
                let t = TorusSpec::normalized(m, d).unwrap();
                for n in 1..=12u64 {
                    assert_eq!(
                        count_normalized(m, d, n).unwrap().total,
                        count_reduced_cycles(&t, n).unwrap().total,
                        "m={m} d={d} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn one_dimensional_closed_form() {
        for m in 3..=8u64 {
            let t = torus(&[m]);
            for n in 1..=24u64 {
                let expected = if n % m == 0 { 2 * m } else { 0 };
                assert_eq!(
                    count_reduced_cycles(&t, n).unwrap().total,
                    Integer::from(expected),
                    "m={m} n={n}"
                );
            }
        }
    }

    #[test]
    fn prime_class_examples() {
        assert_eq!(count_prime_classes(&torus(&[3]), 3).unwrap(), int(2));
        assert_eq!(count_prime_classes(&torus(&[3, 3]), 4).unwrap(), int(18));
        assert_eq!(count_prime_classes(&torus(&[3, 3]), 6).unwrap(), int(156));
        assert_eq!(count_prime_classes(&torus(&[3]), 6).unwrap(), int(0));
    }

    #[test]
    fn prime_inversion_flags_inconsistency() {
        let err =
            prime_classes_from(4, |b| Ok(Integer::from(if b == 4 { 7 } else { 0 }))).unwrap_err();
        assert!(matches!(err, Error::NonIntegral(_)));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(empirical_delta(&torus(&[3, 3]), 10).unwrap(), 1);
        assert_eq!(empirical_delta(&torus(&[4, 4]), 10).unwrap(), 2);
        assert_eq!(empirical_delta(&torus(&[3]), 10).unwrap(), 3);
        assert!(empirical_delta(&torus(&[3]), 2).is_err());
    }

    #[test]
    fn float_weights_track_exact_ones() {
        let z = WeightVector::new(vec![3, 3]);
        let exact = x_weight_in::<Rational>(2, 10, 6, &z).unwrap();
        let approx = x_weight_in::<f64>(2, 10, 6, &z).unwrap();
        assert!((approx - exact.to_f64()).abs() < 1e-9);
    }

    #[test]
    fn report_invariants() {
        let r = count_reduced_cycles(&torus(&[3, 4]), 8).unwrap();
        assert_eq!(
            r.recomputed_total(),
            Rational::from_integer(r.total.clone())
        );
        let r = r.clone().with_oracle(r.total.clone());
        assert_eq!(r.oracle_match, Some(true));
        assert_eq!(
            per_vertex(&count_normalized(3, 2, 10).unwrap()),
            Integer::from(6560)
        );
    }
}
