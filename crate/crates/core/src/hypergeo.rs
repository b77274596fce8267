//! Terminating Lauricella `F_C`, generalized Jacobi polynomials, and the
//! Laplace-transform series `F_z` / `G_z` of products of I-Bessel functions.
//!
//! Everything on the theorem path is generic over [`Scalar`] and exact when
//! instantiated with [`crate::Rational`]. Only [`f_z_series`] is inherently
//! floating point.

use num_bigint::BigInt;
use num_traits::{Float, Zero};

use crate::combinatorics::{for_each_composition, multinomial_of, pochhammer};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Parameters `(alpha, beta, k)` of `P^{(alpha,beta)}_{d,k}`; `d = alpha.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiParams<T> {
    pub alpha: Vec<T>,
    pub beta: T,
    pub k: u32,
}

impl<T: Scalar> JacobiParams<T> {
    pub fn new(alpha: Vec<T>, beta: T, k: u32) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidArgument(
                "Jacobi dimension must be at least 1".into(),
            ));
        }
        Ok(JacobiParams { alpha, beta, k })
    }

    /// Integral `alpha`, the case used by the cycle-count formula.
    pub fn integral(alpha: &[u64], beta: T, k: u32) -> Result<Self> {
        Self::new(
            alpha.iter().map(|&a| T::from_int(a as i64)).collect(),
            beta,
            k,
        )
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// `|alpha|`.
    pub fn alpha_weight(&self) -> T {
        self.alpha.iter().cloned().fold(T::zero(), |acc, a| acc + a)
    }
}

/// Truncation policy for the floating-point series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    pub max_terms: usize,
    pub relative_tail_tolerance: f64,
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        SeriesTruncation {
            max_terms: 100_000,
            relative_tail_tolerance: 1e-15,
        }
    }
}

impl SeriesTruncation {
    pub fn new(max_terms: usize, relative_tail_tolerance: f64) -> Result<Self> {
        if max_terms == 0
            || relative_tail_tolerance.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
        {
            return Err(Error::InvalidArgument(
                "truncation needs max_terms >= 1 and a positive tolerance".into(),
            ));
        }
        Ok(SeriesTruncation {
            max_terms,
            relative_tail_tolerance,
        })
    }
}

/// `F_C(-k, b; c_1..c_d; x, ..., x)`, summed over all multi-indices with
/// `|n| <= k` in graded lexicographic order.
///
/// Fails if some `(c_j)_{n}` vanishes for `n <= k`.
pub fn lauricella_fc_terminating<T: Scalar>(k: u32, b: &T, c: &[T], x: &T) -> Result<T> {
    if c.is_empty() {
        return Err(Error::InvalidArgument(
            "F_C needs at least one lower parameter".into(),
        ));
    }
    // inv_denoms[j][n] = 1 / ((c_j)_n n!)
    let mut inv_denoms: Vec<Vec<T>> = Vec::with_capacity(c.len());
    for (slot, cj) in c.iter().enumerate() {
        let mut row = Vec::with_capacity(k as usize + 1);
        let mut denom = T::one();
        row.push(T::one());
        for step in 1..=k {
            denom = denom * (cj.clone() + T::from_int(step as i64 - 1)) * T::from_int(step as i64);
            if denom.is_zero() {
                return Err(Error::ZeroDenominator { slot, step });
            }
            row.push(T::one() / denom.clone());
        }
        inv_denoms.push(row);
    }

    let a = -T::from_int(k as i64);
    let mut numer = T::one();
    let mut total = T::zero();
    for s in 0..=k {
        if s > 0 {
            let shift = T::from_int(s as i64 - 1);
            numer = numer * (a.clone() + shift.clone()) * (b.clone() + shift) * x.clone();
        }
        let mut inner = T::zero();
        for_each_composition(s as u64, c.len(), |n| {
            let term = n
                .iter()
                .zip(&inv_denoms)
                .fold(T::one(), |acc, (&nj, row)| acc * row[nj as usize].clone());
            inner = inner.clone() + term;
        });
        total = total + numer.clone() * inner;
    }
    Ok(total)
}

/// `P^{(alpha,beta)}_{d,k}(x) = (|alpha|+1)_k / k! * F_C(-k, k+|alpha|+beta+1; alpha+1; (1-x)/2)`.
pub fn jacobi_general<T: Scalar>(p: &JacobiParams<T>, x: &T) -> Result<T> {
    let weight = p.alpha_weight();
    let k = p.k;
    let b = T::from_int(k as i64) + weight.clone() + p.beta.clone() + T::one();
    let c: Vec<T> = p.alpha.iter().map(|a| a.clone() + T::one()).collect();
    let arg = (T::one() - x.clone()) / T::from_int(2);
    let fc = lauricella_fc_terminating(k, &b, &c, &arg)?;
    Ok(pochhammer(&(weight + T::one()), k) / factorial_scalar::<T>(k) * fc)
}

/// `A^{(d)}_z(n) = sum_{|m| = n} C(n; m) C(n+|z|; m+z)`.
pub fn a_coefficient(z: &[u64], n: u64) -> BigInt {
    let mut total = BigInt::zero();
    let mut shifted = vec![0u64; z.len()];
    for_each_composition(n, z.len(), |m| {
        for ((s, &mj), &zj) in shifted.iter_mut().zip(m).zip(z) {
            *s = mj + zj;
        }
        total += multinomial_of(m) * multinomial_of(&shifted);
    });
    total
}

/// The single-sum form of [`jacobi_general`] for integral `alpha`:
/// `(1/C_alpha) (|alpha|+1)_k/k! sum_n A_alpha(n) (-k)_n (k+|alpha|+beta+1)_n / (|alpha|+1)_n ((1-x)/2)^n / n!`.
pub fn jacobi_via_a_coefficients<T: Scalar>(alpha: &[u64], beta: &T, k: u32, x: &T) -> Result<T> {
    if alpha.is_empty() {
        return Err(Error::InvalidArgument(
            "Jacobi dimension must be at least 1".into(),
        ));
    }
    let weight: u64 = alpha.iter().sum();
    let weight_t = T::from_int(weight as i64);
    let arg = (T::one() - x.clone()) / T::from_int(2);
    let minus_k = -T::from_int(k as i64);
    let b = T::from_int(k as i64) + weight_t.clone() + beta.clone() + T::one();
    let c = weight_t.clone() + T::one();

    let mut ratio = T::one(); // (-k)_n (b)_n / ((|alpha|+1)_n n!) arg^n
    let mut sum = T::zero();
    for n in 0..=k {
        if n > 0 {
            let shift = T::from_int(n as i64 - 1);
            ratio = ratio
                * (minus_k.clone() + shift.clone())
                * (b.clone() + shift.clone())
                * arg.clone()
                / ((c.clone() + shift) * T::from_int(n as i64));
        }
        sum = sum + T::from_bigint(&a_coefficient(alpha, n as u64)) * ratio.clone();
    }
    let c_alpha = T::from_bigint(&multinomial_of(alpha));
    Ok(pochhammer(&c, k) / factorial_scalar::<T>(k) / c_alpha * sum)
}

/// Terminating or truncated generalized hypergeometric `pFq`, summed for
/// `n = 0..=max_n`.
pub fn hypergeometric_pfq<T: Scalar>(numer: &[T], denom: &[T], x: &T, max_n: u32) -> Result<T> {
    let mut term = T::one();
    let mut sum = T::one();
    for n in 1..=max_n {
        let shift = T::from_int(n as i64 - 1);
        let up = numer
            .iter()
            .fold(T::one(), |acc, a| acc * (a.clone() + shift.clone()));
        if up.is_zero() {
            break;
        }
        let down = denom
            .iter()
            .fold(T::one(), |acc, b| acc * (b.clone() + shift.clone()));
        if down.is_zero() {
            return Err(Error::ZeroDenominator { slot: 0, step: n });
        }
        term = term * up * x.clone() / (down * T::from_int(n as i64));
        sum = sum + term.clone();
    }
    Ok(sum)
}

/// The `d = 2` form `P^{(alpha,beta)}_{2,k}(x) = (|alpha|+1)_k/k! 4F3(-k, k+|alpha|+beta+1,
/// |alpha|/2+1/2, |alpha|/2+1; |alpha|+1, alpha_1+1, alpha_2+1; 2(1-x))`.
pub fn jacobi_d2_via_4f3<T: Scalar>(alpha: [u64; 2], beta: &T, k: u32, x: &T) -> Result<T> {
    let weight = T::from_int((alpha[0] + alpha[1]) as i64);
    let half = T::from_ratio(1, 2);
    let numer = [
        -T::from_int(k as i64),
        T::from_int(k as i64) + weight.clone() + beta.clone() + T::one(),
        weight.clone() * half.clone() + half,
        weight.clone() * T::from_ratio(1, 2) + T::one(),
    ];
    let denom = [
        weight.clone() + T::one(),
        T::from_int(alpha[0] as i64 + 1),
        T::from_int(alpha[1] as i64 + 1),
    ];
    let arg = T::from_int(2) * (T::one() - x.clone());
    let series = hypergeometric_pfq(&numer, &denom, &arg, k)?;
    Ok(pochhammer(&(weight + T::one()), k) / factorial_scalar::<T>(k) * series)
}

/// The point `(2d-3)/(2d-1)` at which every Jacobi value of the formula is taken.
pub fn jacobi_point<T: Scalar>(d: usize) -> T {
    let d = d as i64;
    T::from_ratio(2 * d - 3, 2 * d - 1)
}

/// Exact Taylor coefficients of `G_z(u)`: entry `k` multiplies `u^{|z|+1+2k}`
/// and equals `C_z (-(2d-1))^k P^{(z,0)}_{d,k}((2d-3)/(2d-1))`.
pub fn g_z_coefficients<T: Scalar>(z: &[u64], k_max: u32) -> Result<Vec<T>> {
    let d = z.len();
    if d == 0 {
        return Err(Error::InvalidArgument("empty weight vector".into()));
    }
    let c_z = T::from_bigint(&multinomial_of(z));
    let x = jacobi_point::<T>(d);
    let q = T::from_int(2 * d as i64 - 1);
    let mut scale = c_z;
    let mut out = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let p = JacobiParams::integral(z, T::zero(), k)?;
        out.push(scale.clone() * jacobi_general(&p, &x)?);
        scale = -(scale * q.clone());
    }
    Ok(out)
}

/// Evaluates the truncated power series of `G_z` at `u`.
pub fn g_z_eval<T: Scalar>(z: &[u64], coefficients: &[T], u: &T) -> T {
    let weight: u64 = z.iter().sum();
    let mut power = T::one();
    for _ in 0..=weight {
        power = power * u.clone();
    }
    let u2 = u.clone() * u.clone();
    let mut acc = T::zero();
    for c in coefficients {
        acc = acc + c.clone() * power.clone();
        power = power * u2.clone();
    }
    acc
}

/// `F_z(x) = int_0^inf e^{-xt} prod_j I_{z_j}(2t) dt` for `x > 2d`.
///
/// Expanded as `sum_n (2|n|+|z|)! / prod_j (n_j! (n_j+z_j)!) x^{-(2|n|+|z|+1)}`,
/// each term formed in log space. The inner sum over `|n| = s` counts lattice
/// walks and is bounded by `(2d)^{2s+|z|}`, which gives a rigorous geometric
/// tail bound used as the stopping rule.
pub fn f_z_series<T: Float>(z: &[u64], x: T, trunc: &SeriesTruncation) -> Result<T> {
    let d = z.len();
    if d == 0 {
        return Err(Error::InvalidArgument("empty weight vector".into()));
    }
    let two_d = T::from(2 * d).unwrap();
    if x.partial_cmp(&two_d) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidArgument(format!(
            "F_z needs x > 2d = {}",
            2 * d
        )));
    }
    let h = z.iter().sum::<u64>() as usize;
    let ln_x = x.ln();
    let r2 = (two_d / x).powi(2);
    let tol = T::from(trunc.relative_tail_tolerance).unwrap();
    let mut ln_fact = LnFactorial::<T>::new();

    let mut sum = T::zero();
    for s in 0..trunc.max_terms {
        let len = 2 * s + h;
        let lead = ln_fact.get(len) - T::from(len + 1).unwrap() * ln_x;
        let mut shell = T::zero();
        for_each_composition(s as u64, d, |n| {
            let mut ln_den = T::zero();
            for (&nj, &zj) in n.iter().zip(z) {
                ln_den = ln_den + ln_fact.get(nj as usize) + ln_fact.get((nj + zj) as usize);
            }
            shell = shell + (lead - ln_den).exp();
        });
        sum = sum + shell;
        // remaining shells sum to at most (2d/x)^{len+2} / (x (1 - (2d/x)^2))
        let tail = (two_d / x).powi(len as i32 + 2) / (x * (T::one() - r2));
        if tail <= tol * sum {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        max_terms: trunc.max_terms,
    })
}

/// Memoized `ln n!`.
pub(crate) struct LnFactorial<T> {
    table: Vec<T>,
}

impl<T: Float> LnFactorial<T> {
    pub(crate) fn new() -> Self {
        LnFactorial {
            table: vec![T::zero()],
        }
    }

    pub(crate) fn get(&mut self, n: usize) -> T {
        while self.table.len() <= n {
            let k = self.table.len();
            let next = self.table[k - 1] + T::from(k).unwrap().ln();
            self.table.push(next);
        }
        self.table[n]
    }
}

fn factorial_scalar<T: Scalar>(k: u32) -> T {
    (1..=k as i64).fold(T::one(), |acc, i| acc * T::from_int(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::One;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&a| Rational::from_int(a)).collect()
    }

    #[test]
    fn fc_trivial_and_linear() {
        let c = ints(&[4, 2, 7]);
        assert_eq!(
            lauricella_fc_terminating(0, &q(5, 3), &c, &q(9, 2)).unwrap(),
            q(1, 1)
        );
        // 1 - 2t for a=-1, b=1, c=(1,1)
        for t in [q(1, 3), q(-2, 5), q(7, 1)] {
            let got = lauricella_fc_terminating(1, &q(1, 1), &ints(&[1, 1]), &t).unwrap();
            assert_eq!(got, q(1, 1) - q(2, 1) * t);
        }
    }

    #[test]
    fn fc_d1_matches_3f2_worked_value() {
        // F_C(-3, 3; 1; 1/3) in d=1 is the Gauss 2F1; the d=2 case with
        // c = (1,1) and argument 1/3 reproduces 3F2(-3,3,1/2;1,1;4/3).
        let fc = lauricella_fc_terminating(3, &q(3, 1), &ints(&[1, 1]), &q(1, 3)).unwrap();
        let f32_ =
            hypergeometric_pfq(&[q(-3, 1), q(3, 1), q(1, 2)], &ints(&[1, 1]), &q(4, 3), 3).unwrap();
        assert_eq!(f32_, q(-11, 27));
        assert_eq!(fc, f32_);
    }

    #[test]
    fn fc_rejects_zero_denominator() {
        let err = lauricella_fc_terminating(3, &q(1, 1), &ints(&[2, -1]), &q(1, 2)).unwrap_err();
        assert_eq!(err, Error::ZeroDenominator { slot: 1, step: 2 });
        assert!(lauricella_fc_terminating(1, &q(1, 1), &ints(&[0]), &q(1, 2)).is_err());
        // a denominator that would vanish only past k is fine
        assert!(lauricella_fc_terminating(1, &q(1, 1), &ints(&[-1]), &q(1, 2)).is_ok());
    }

    #[test]
    fn jacobi_examples() {
        for d in 1..=5usize {
            let p = JacobiParams::integral(&vec![0; d], q(-1, 1), 1).unwrap();
            let got = jacobi_general(&p, &jacobi_point(d)).unwrap();
            assert_eq!(got, q(d as i64 - 1, 2 * d as i64 - 1), "d = {d}");
        }
        let p = JacobiParams::integral(&[0, 0], q(-1, 1), 2).unwrap();
        assert_eq!(jacobi_general(&p, &q(1, 3)).unwrap(), q(1, 3));
    }

    #[test]
    fn jacobi_d1_at_minus_one() {
        for h in 0..6u64 {
            for beta in -1..=3i64 {
                for k in 0..8u32 {
                    let p = JacobiParams::integral(&[h], q(beta, 1), k).unwrap();
                    let got = jacobi_general(&p, &q(-1, 1)).unwrap();
                    // (-1)^k C(k+beta, k) = (-1)^k (beta+1)_k / k!
                    let expected = pochhammer(&q(beta + 1, 1), k) / factorial_scalar::<Rational>(k)
                        * q(if k % 2 == 0 { 1 } else { -1 }, 1);
                    assert_eq!(got, expected, "h={h} beta={beta} k={k}");
                }
            }
        }
    }

    #[test]
    fn a_coefficient_examples() {
        for h in 0..5 {
            for n in 0..6 {
                assert_eq!(a_coefficient(&[h], n), BigInt::one());
            }
        }
        assert_eq!(a_coefficient(&[0, 0], 1), BigInt::from(2));
        assert_eq!(a_coefficient(&[0, 0, 0], 1), BigInt::from(3));
        // closed form for d = 2: C(2n+|z|; n+z_1, n+z_2)
        for z in [[0u64, 0], [3, 0], [3, 3], [6, 2]] {
            for n in 0..7 {
                assert_eq!(
                    a_coefficient(&z, n),
                    multinomial_of(&[n + z[0], n + z[1]]),
                    "z={z:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn a_coefficient_route_agrees() {
        let p = JacobiParams::integral(&[0, 0], q(-1, 1), 2).unwrap();
        let x = q(1, 3);
        assert_eq!(
            jacobi_via_a_coefficients(&[0, 0], &q(-1, 1), 2, &x).unwrap(),
            jacobi_general(&p, &x).unwrap()
        );
        assert_eq!(
            jacobi_via_a_coefficients(&[3, 3], &q(-1, 1), 0, &x).unwrap(),
            q(1, 1)
        );
        for k in 0..=3 {
            let p = JacobiParams::integral(&[6, 0], q(-1, 1), k).unwrap();
            assert_eq!(
                jacobi_d2_via_4f3([6, 0], &q(-1, 1), k, &x).unwrap(),
                jacobi_general(&p, &x).unwrap()
            );
        }
    }

    #[test]
    fn g_z_coefficient_examples() {
        // d = 1: G_h(u) = u^{h+1} / (1 - u^2), every coefficient is 1
        for h in 0..=10u64 {
            let c: Vec<Rational> = g_z_coefficients(&[h], 10).unwrap();
            for (k, ck) in c.iter().enumerate() {
                assert_eq!(*ck, q(1, 1), "h={h} k={k}");
            }
        }
        let c: Vec<Rational> = g_z_coefficients(&[3, 3], 0).unwrap();
        assert_eq!(c[0], q(20, 1));
        // coefficient of u^3 in G_(0,0): -3/x from 1/x, +4/x^3 from the two-step walks
        let c: Vec<Rational> = g_z_coefficients(&[0, 0], 1).unwrap();
        assert_eq!(c[1], q(1, 1));
    }

    #[test]
    fn generic_over_floats_and_fixed_rationals() {
        use num_rational::Ratio;
        let p = JacobiParams::<f64>::integral(&[3, 0], -1.0, 3).unwrap();
        let exact = jacobi_general(
            &JacobiParams::integral(&[3, 0], q(-1, 1), 3).unwrap(),
            &q(1, 3),
        )
        .unwrap();
        let approx = jacobi_general(&p, &(1.0 / 3.0)).unwrap();
        assert!((approx - exact.to_f64()).abs() < 1e-12);
        let small =
            JacobiParams::<Ratio<i64>>::integral(&[0, 0], Ratio::from_integer(-1), 2).unwrap();
        assert_eq!(
            jacobi_general(&small, &Ratio::new(1, 3)).unwrap(),
            Ratio::new(1, 3)
        );
    }

    #[test]
    fn f_z_d1_closed_form() {
        let trunc = SeriesTruncation::default();
        for x in [2.5f64, 3.0, 10.0, 40.0] {
            let got = f_z_series(&[0], x, &trunc).unwrap();
            let expected = 1.0 / (x * x - 4.0).sqrt();
            assert!(
                (got - expected).abs() < 1e-13 * expected,
                "x={x}: {got} vs {expected}"
            );
        }
        let got = f_z_series(&[0], 10.0, &trunc).unwrap();
        assert!((got - 0.102_062_072_615_965_75).abs() < 1e-15);
    }

    #[test]
    fn f_z_leading_asymptotics() {
        let trunc = SeriesTruncation::default();
        for z in [vec![0u64], vec![3, 0], vec![2, 1], vec![1, 1, 1]] {
            let h = z.iter().sum::<u64>() as i32;
            let x = 1e6f64;
            let c_z = num_traits::ToPrimitive::to_f64(&multinomial_of(&z)).unwrap();
            let lead = c_z / x.powi(h + 1);
            let got = f_z_series(&z, x, &trunc).unwrap();
            assert!((got / lead - 1.0).abs() < 1e-6, "z={z:?}");
        }
    }

    #[test]
    fn f_z_d2_matches_fc_double_sum() {
        // independent route: C_z / x^{h+1} F_C(h/2+1/2, h/2+1; z+1; 4/x^2, 4/x^2)
        // summed directly over (n_1, n_2) with a generous square cutoff
        let x = 8.0f64;
        for z in [[0u64, 0], [3, 0], [2, 2]] {
            let h = (z[0] + z[1]) as f64;
            let t = 4.0 / (x * x);
            let mut total = 0.0;
            for n1 in 0..40usize {
                for n2 in 0..40usize {
                    let s = (n1 + n2) as i32;
                    let a = (0..s)
                        .map(|i| (h / 2.0 + 0.5 + i as f64) * (h / 2.0 + 1.0 + i as f64))
                        .product::<f64>();
                    let c1 = (0..n1)
                        .map(|i| (z[0] as f64 + 1.0 + i as f64) * (i as f64 + 1.0))
                        .product::<f64>();
                    let c2 = (0..n2)
                        .map(|i| (z[1] as f64 + 1.0 + i as f64) * (i as f64 + 1.0))
                        .product::<f64>();
                    total += a / (c1 * c2) * t.powi(s);
                }
            }
            let c_z = num_traits::ToPrimitive::to_f64(&multinomial_of(&z)).unwrap();
            let expected = c_z / x.powf(h + 1.0) * total;
            let got = f_z_series(&z, x, &SeriesTruncation::default()).unwrap();
            assert!(
                (got - expected).abs() < 1e-12 * expected.max(1e-300) + 1e-16,
                "z={z:?}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn f_z_rejects_small_x_and_reports_nonconvergence() {
        assert!(f_z_series(&[0, 0], 4.0, &SeriesTruncation::default()).is_err());
        let tight = SeriesTruncation::new(3, 1e-15).unwrap();
        assert_eq!(
            f_z_series(&[0, 0], 4.1, &tight).unwrap_err(),
            Error::NoConvergence { max_terms: 3 }
        );
        assert!(SeriesTruncation::new(0, 1e-3).is_err());
        assert!(SeriesTruncation::new(5, 0.0).is_err());
    }
}
