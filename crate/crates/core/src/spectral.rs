//! Floating-point corroboration of the analytic identities behind the
//! cycle-count formula: Laplacian spectrum, theta function two ways, spectral
//! zeta function three ways, and the Ihara generating function.
//!
//! Generic over [`num_traits::Float`]; the tolerances quoted in tests assume `f64`.

use num_traits::Float;

use crate::combinatorics::{enumerate_weight_vectors, TorusSpec};
use crate::error::{Error, Result};
use crate::hypergeo::{f_z_series, SeriesTruncation};
use crate::theorem::count_reduced_cycles;

fn cast<T: Float>(v: f64) -> T {
    T::from(v).expect("f64 constant representable")
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy)]
struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Float> CompensatedSum<T> {
    fn new() -> Self {
        CompensatedSum {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    fn add(&mut self, v: T) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry = self.carry + ((self.sum - t) + v);
        } else {
            self.carry = self.carry + ((v - t) + self.sum);
        }
        self.sum = t;
    }

    fn value(&self) -> T {
        self.sum + self.carry
    }
}

fn compensated<T: Float>(values: impl IntoIterator<Item = T>) -> T {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// One Laplacian eigenvalue `lambda_v = 2d - 2 sum_j cos(2 pi v_j)` with its
/// dual index `v_j = numerators[j] / m_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPoint<T> {
    pub numerators: Vec<u64>,
    pub lambda: T,
}

/// The full Laplacian spectrum of a torus, one entry per dual vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumData<T> {
    pub torus: TorusSpec,
    pub points: Vec<SpectralPoint<T>>,
}

impl<T: Float> SpectrumData<T> {
    pub fn eigenvalues(&self) -> impl Iterator<Item = T> + '_ {
        self.points.iter().map(|p| p.lambda)
    }

    /// Eigenvalues of the adjacency matrix, `2d - lambda`.
    pub fn adjacency_eigenvalues(&self) -> impl Iterator<Item = T> + '_ {
        let deg = cast::<T>(2.0 * self.torus.dim() as f64);
        self.eigenvalues().map(move |l| deg - l)
    }

    pub fn trace(&self) -> T {
        compensated(self.eigenvalues())
    }
}

/// Enumerates `lambda_v` over the dual torus `prod (1/m_j) Z / Z`.
pub fn eigenvalues<T: Float>(spec: &TorusSpec) -> SpectrumData<T> {
    let sides = spec.sides();
    let d = sides.len();
    let tau = cast::<T>(std::f64::consts::TAU);
    let mut points = Vec::with_capacity(spec.volume() as usize);
    let mut index = vec![0u64; d];
    loop {
        let cos_sum = compensated(
            index
                .iter()
                .zip(sides)
                .map(|(&k, &m)| (tau * T::from(k).unwrap() / T::from(m).unwrap()).cos()),
        );
        let lambda = T::from(2 * d).unwrap() - cast::<T>(2.0) * cos_sum;
        points.push(SpectralPoint {
            numerators: index.clone(),
            lambda: lambda.max(T::zero()),
        });
        let mut j = 0;
        loop {
            if j == d {
                return SpectrumData {
                    torus: spec.clone(),
                    points,
                };
            }
            index[j] += 1;
            if index[j] < sides[j] {
                break;
            }
            index[j] = 0;
            j += 1;
        }
    }
}

/// `theta(t) = sum_lambda e^{-lambda t}`.
pub fn theta_eigen<T: Float>(spectrum: &SpectrumData<T>, t: T) -> T {
    compensated(spectrum.eigenvalues().map(|l| (-l * t).exp()))
}

/// Modified Bessel `I_x(t)` of integer order by its power series; `I_{-x} = I_x`.
pub fn bessel_i<T: Float>(order: i64, t: T, trunc: &SeriesTruncation) -> Result<T> {
    let x = order.unsigned_abs();
    let half = t / cast(2.0);
    let mut term = T::one();
    for k in 1..=x {
        term = term * half / T::from(k).unwrap();
    }
    if term.is_zero() || t.is_zero() {
        return Ok(if x == 0 { T::one() } else { term });
    }
    let tol = cast::<T>(trunc.relative_tail_tolerance);
    let q = half * half;
    let mut sum = term;
    for n in 1..trunc.max_terms {
        let ratio = q / (T::from(n).unwrap() * T::from(n as u64 + x).unwrap());
        term = term * ratio;
        sum = sum + term;
        // the ratio keeps shrinking, so the tail is below term * ratio / (1 - ratio)
        if ratio < T::one() && term * ratio / (T::one() - ratio) <= tol * sum {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        max_terms: trunc.max_terms,
    })
}

/// Bessel values `I_k(2t)` for `k = 0, 1, ...`, filled on demand.
struct BesselTable<T> {
    arg: T,
    trunc: SeriesTruncation,
    values: Vec<T>,
}

impl<T: Float> BesselTable<T> {
    fn new(t: T, trunc: SeriesTruncation) -> Self {
        BesselTable {
            arg: cast::<T>(2.0) * t,
            trunc,
            values: Vec::new(),
        }
    }

    fn get(&mut self, order: u64) -> Result<T> {
        while self.values.len() as u64 <= order {
            let k = self.values.len() as i64;
            self.values.push(bessel_i(k, self.arg, &self.trunc)?);
        }
        Ok(self.values[order as usize])
    }
}

const MAX_SHELLS: u64 = 10_000;

/// `theta(t) = ||M|| e^{-2dt} sum_{z in prod m_j Z} prod_j I_{z_j}(2t)`, with
/// the lattice translates grouped into shells `|z| = h`. Stops at the first
/// nonempty shell whose largest product falls below `1e-18` of the sum.
pub fn theta_bessel<T: Float>(spec: &TorusSpec, t: T, trunc: &SeriesTruncation) -> Result<T> {
    if t <= T::zero() {
        return Err(Error::InvalidArgument("theta needs t > 0".into()));
    }
    let cutoff = cast::<T>(1e-18);
    let mut table = BesselTable::new(t, *trunc);
    let mut acc = CompensatedSum::new();
    for h in 0..MAX_SHELLS {
        let shell = enumerate_weight_vectors(spec, h);
        if shell.is_empty() {
            continue;
        }
        let mut largest = T::zero();
        for (z, mult) in &shell {
            let mut product = T::one();
            for &zj in z.entries() {
                product = product * table.get(zj)?;
            }
            largest = largest.max(product);
            acc.add(T::from(*mult).unwrap() * product);
        }
        if h > 0 && largest < cutoff * acc.value() {
            let d = spec.dim() as f64;
            let scale = T::from(spec.volume()).unwrap() * (cast::<T>(-2.0 * d) * t).exp();
            return Ok(scale * acc.value());
        }
    }
    Err(Error::NoConvergence {
        max_terms: MAX_SHELLS as usize,
    })
}

fn positive<T: Float>(s: T, what: &str) -> Result<()> {
    if s > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} needs s > 0")))
    }
}

/// `zeta(s) = sum_lambda 1 / (lambda + s)`.
pub fn spectral_zeta_eigen<T: Float>(spectrum: &SpectrumData<T>, s: T) -> Result<T> {
    positive(s, "spectral zeta")?;
    Ok(compensated(spectrum.eigenvalues().map(|l| (l + s).recip())))
}

/// The substitution `s + 2d = (1 + q u^2) / u` with `q = 2d - 1`, minus branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UsTransform {
    pub d: usize,
}

impl UsTransform {
    pub fn new(d: usize) -> Self {
        UsTransform { d }
    }

    pub fn q(&self) -> u64 {
        2 * self.d as u64 - 1
    }

    /// `u_s = (s + 2d - sqrt(s^2 + 4ds + 4(d-1)^2)) / (2(2d-1))`, in `(0, 1/q)` for `s > 0`.
    pub fn u_of_s<T: Float>(&self, s: T) -> T {
        let d = T::from(self.d).unwrap();
        let two = cast::<T>(2.0);
        let four = cast::<T>(4.0);
        let disc = s * s + four * d * s + four * (d - T::one()) * (d - T::one());
        let plus = s + two * d;
        // (plus - sqrt(disc)) / 2q, rationalised: plus^2 - disc = 4q
        two / (plus + disc.sqrt())
    }

    /// `s = (1 - 2d u + q u^2) / u`.
    pub fn s_of_u<T: Float>(&self, u: T) -> T {
        let d = T::from(self.d).unwrap();
        let q = T::from(self.q()).unwrap();
        (T::one() - cast::<T>(2.0) * d * u + q * u * u) / u
    }
}

/// Heat-kernel evaluation of the spectral zeta function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatKernelZeta<T> {
    pub value: T,
    /// Contribution of the last nonempty shell kept, a proxy for the truncation error.
    pub last_shell: T,
}

/// `zeta(s) ~ ||M|| sum_{h <= h_max} sum_{z in P_M(h)} m(z) F_z(s + 2d)`.
pub fn spectral_zeta_heatkernel<T: Float>(
    spec: &TorusSpec,
    s: T,
    h_max: u64,
    trunc: &SeriesTruncation,
) -> Result<HeatKernelZeta<T>> {
    positive(s, "heat-kernel zeta")?;
    let x = s + T::from(2 * spec.dim()).unwrap();
    let mut acc = CompensatedSum::new();
    let mut last_shell = T::zero();
    for h in 0..=h_max {
        let shell = enumerate_weight_vectors(spec, h);
        if shell.is_empty() {
            continue;
        }
        let mut shell_sum = CompensatedSum::new();
        for (z, mult) in &shell {
            shell_sum.add(T::from(*mult).unwrap() * f_z_series(z.entries(), x, trunc)?);
        }
        last_shell = shell_sum.value();
        acc.add(last_shell);
    }
    let volume = T::from(spec.volume()).unwrap();
    Ok(HeatKernelZeta {
        value: volume * acc.value(),
        last_shell: volume * last_shell,
    })
}

/// `u d/du log Z(u) = sum_n N(n) u^n`, from the vertex determinant formula:
/// `2(|E|-|V|) u^2 / (1-u^2) + sum_i (u a_i - 2q u^2) / (1 - u a_i + q u^2)`
/// with `a_i` the adjacency eigenvalues.
pub fn ihara_log_derivative<T: Float>(spectrum: &SpectrumData<T>, u: T) -> T {
    let spec = &spectrum.torus;
    let q = T::from(spec.q()).unwrap();
    let two = cast::<T>(2.0);
    let excess = T::from(spec.edge_count()).unwrap() - T::from(spec.vertex_count()).unwrap();
    let u2 = u * u;
    let mut acc = CompensatedSum::new();
    acc.add(two * excess * u2 / (T::one() - u2));
    for a in spectrum.adjacency_eigenvalues() {
        acc.add((u * a - two * q * u2) / (T::one() - u * a + q * u2));
    }
    acc.value()
}

/// `|zeta_eigen(s) - RHS|` where
/// `RHS = ||M|| u/(1-u^2) + u/(1-q u^2) * u d/du log Z(u)` at `u = u_s`.
pub fn ihara_identity_check<T: Float>(spectrum: &SpectrumData<T>, s: T) -> Result<T> {
    let lhs = spectral_zeta_eigen(spectrum, s)?;
    let spec = &spectrum.torus;
    let transform = UsTransform::new(spec.dim());
    let u = transform.u_of_s(s);
    let q = T::from(spec.q()).unwrap();
    let volume = T::from(spec.volume()).unwrap();
    let rhs = volume * u / (T::one() - u * u)
        + u / (T::one() - q * u * u) * ihara_log_derivative(spectrum, u);
    Ok((lhs - rhs).abs())
}

/// Taylor coefficients `c_0..=c_{n_max}` of `u d/du log Z(u)`, by the linear
/// recurrence of each rational summand.
pub fn ihara_series_coefficients<T: Float>(spectrum: &SpectrumData<T>, n_max: usize) -> Vec<T> {
    let spec = &spectrum.torus;
    let q = T::from(spec.q()).unwrap();
    let two = cast::<T>(2.0);
    let excess = T::from(spec.edge_count()).unwrap() - T::from(spec.vertex_count()).unwrap();
    let mut sums: Vec<CompensatedSum<T>> = vec![CompensatedSum::new(); n_max + 1];
    for n in (2..=n_max).step_by(2) {
        sums[n].add(two * excess);
    }
    let mut c = vec![T::zero(); n_max + 1];
    for a in spectrum.adjacency_eigenvalues() {
        // (1 - a u + q u^2) f = a u - 2q u^2
        for n in 1..=n_max {
            c[n] = match n {
                1 => a,
                2 => a * c[1] - two * q,
                _ => a * c[n - 1] - q * c[n - 2],
            };
            sums[n].add(c[n]);
        }
    }
    sums.iter().map(CompensatedSum::value).collect()
}

/// Largest `|c_n - N(n)| / max(N(n), 1)` over `1 <= n <= n_max`, with `N(n)`
/// from the exact theorem engine.
pub fn ihara_series_check<T: Float>(spectrum: &SpectrumData<T>, n_max: usize) -> Result<T> {
    if n_max < 3 {
        return Err(Error::InvalidArgument("n_max must be at least 3".into()));
    }
    let coefficients = ihara_series_coefficients(spectrum, n_max);
    let mut worst = T::zero();
    for (n, &c) in coefficients.iter().enumerate().skip(1) {
        let count = count_reduced_cycles(&spectrum.torus, n as u64)?;
        let target = T::from(count.total)
            .ok_or_else(|| Error::InvalidArgument("count overflows the float type".into()))?;
        worst = worst.max((c - target).abs() / target.abs().max(T::one()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus(sides: &[u64]) -> TorusSpec {
        TorusSpec::new(sides.to_vec()).unwrap()
    }

    fn sorted(spec: &TorusSpec) -> Vec<f64> {
        let mut v: Vec<f64> = eigenvalues::<f64>(spec).eigenvalues().collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn eigenvalue_examples() {
        assert!(close(&sorted(&torus(&[3])), &[0.0, 3.0, 3.0]));
        assert!(close(&sorted(&torus(&[4])), &[0.0, 2.0, 2.0, 4.0]));
        let v = sorted(&torus(&[3, 3]));
        assert!(close(&v, &[0.0, 3.0, 3.0, 3.0, 3.0, 6.0, 6.0, 6.0, 6.0]));
        assert!((v.iter().sum::<f64>() - 36.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_invariants() {
        for sides in [vec![3], vec![5, 7], vec![3, 4, 5], vec![5, 5, 5, 5]] {
            let t = torus(&sides);
            let s = eigenvalues::<f64>(&t);
            let d = t.dim() as f64;
            let expected = 2.0 * d * t.volume() as f64;
            assert!((s.trace() - expected).abs() < 1e-9 * expected);
            assert!(s
                .eigenvalues()
                .all(|l| (0.0..=4.0 * d + 1e-12).contains(&l)));
            assert_eq!(s.eigenvalues().filter(|l| l.abs() < 1e-12).count(), 1);
        }
    }

    #[test]
    fn theta_examples() {
        let s = eigenvalues::<f64>(&torus(&[3]));
        for t in [0.1, 1.0, 3.0] {
            assert!((theta_eigen(&s, t) - (1.0 + 2.0 * (-3.0 * t).exp())).abs() < 1e-14);
        }
        let s = eigenvalues::<f64>(&torus(&[3, 4]));
        assert!((theta_eigen(&s, 1e-12) - 12.0).abs() < 1e-9);
        assert!((theta_eigen(&s, 200.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bessel_examples() {
        let tr = SeriesTruncation::default();
        assert_eq!(bessel_i(0, 0.0f64, &tr).unwrap(), 1.0);
        assert_eq!(bessel_i(3, 0.0f64, &tr).unwrap(), 0.0);
        assert!((bessel_i(1, 2.0f64, &tr).unwrap() - 1.590_636_854_637_329).abs() < 1e-14);
        for t in [0.5, 1.0, 3.0] {
            assert_eq!(bessel_i(-2, t, &tr).unwrap(), bessel_i(2, t, &tr).unwrap());
        }
        // I_0(10) = 2815.716628466254...
        assert!((bessel_i(0, 10.0f64, &tr).unwrap() / 2_815.716_628_466_254 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn theta_two_routes() {
        let tr = SeriesTruncation::default();
        for sides in [vec![3], vec![3, 3], vec![4, 3]] {
            let t = torus(&sides);
            let spectrum = eigenvalues::<f64>(&t);
            for time in [0.1, 0.5, 1.0, 2.0] {
                let a = theta_eigen(&spectrum, time);
                let b = theta_bessel(&t, time, &tr).unwrap();
                assert!((a - b).abs() < 1e-10, "{t} t={time}: {a} vs {b}");
            }
        }
        let t = torus(&[3, 3]);
        assert!((theta_bessel(&t, 20.0f64, &tr).unwrap() - 1.0).abs() < 1e-10);
        assert!(theta_bessel(&t, 0.0, &tr).is_err());
    }

    #[test]
    fn zeta_eigen_examples() {
        let s = eigenvalues::<f64>(&torus(&[3]));
        assert!((spectral_zeta_eigen(&s, 1.0).unwrap() - 1.5).abs() < 1e-15);
        let big = 1e9;
        assert!((big * spectral_zeta_eigen(&s, big).unwrap() - 3.0).abs() < 1e-6);
        assert!(spectral_zeta_eigen(&s, 0.0).is_err());
        let s = eigenvalues::<f64>(&torus(&[3, 3]));
        let direct = 1.0 + 4.0 / 4.0 + 4.0 / 7.0;
        assert!((spectral_zeta_eigen(&s, 1.0).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn heat_kernel_zeta_truncation_is_monotone() {
        let t = torus(&[3]);
        let tr = SeriesTruncation::default();
        let exact = spectral_zeta_eigen(&eigenvalues::<f64>(&t), 1.0).unwrap();
        let zero = spectral_zeta_heatkernel(&t, 1.0f64, 0, &tr).unwrap().value;
        let twelve = spectral_zeta_heatkernel(&t, 1.0f64, 12, &tr).unwrap().value;
        assert!(zero < twelve && twelve < exact);
        let at_five = spectral_zeta_heatkernel(&t, 5.0f64, 12, &tr).unwrap().value;
        let exact5 = spectral_zeta_eigen(&eigenvalues::<f64>(&t), 5.0).unwrap();
        assert!((at_five - exact5).abs() < 1e-8);
    }

    #[test]
    fn us_transform_branch() {
        for d in 1..=3usize {
            let tr = UsTransform::new(d);
            let q = tr.q() as f64;
            for s in [1e-9, 0.1, 0.5, 1.0, 3.0, 10.0] {
                let u: f64 = tr.u_of_s(s);
                assert!(u > 0.0 && u < 1.0 / q + 1e-12, "d={d} s={s} u={u}");
                assert!((tr.s_of_u(u) - s).abs() < 1e-12 * s.max(1.0), "d={d} s={s}");
            }
            let u0: f64 = tr.u_of_s(1e-14);
            assert!((u0 - 1.0 / q).abs() < 1e-6);
        }
    }

    #[test]
    fn ihara_identity_small() {
        for sides in [vec![3], vec![3, 3]] {
            let spectrum = eigenvalues::<f64>(&torus(&sides));
            for s in [0.5, 1.0, 3.0] {
                assert!(ihara_identity_check(&spectrum, s).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn ihara_series_cycle_graph() {
        let spectrum = eigenvalues::<f64>(&torus(&[3]));
        let c = ihara_series_coefficients(&spectrum, 12);
        for (n, v) in c.iter().enumerate() {
            let expected = if n > 0 && n % 3 == 0 { 6.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-9, "n={n}: {v}");
        }
        let spectrum = eigenvalues::<f64>(&torus(&[4, 4]));
        let c = ihara_series_coefficients(&spectrum, 11);
        for n in (1..=11).step_by(2) {
            assert!(c[n].abs() < 1e-6, "odd n={n}: {}", c[n]);
        }
        let spectrum = eigenvalues::<f64>(&torus(&[3, 3]));
        assert!(ihara_series_check(&spectrum, 8).unwrap() < 1e-8);
        assert!(ihara_series_check(&spectrum, 2).is_err());
    }
}
