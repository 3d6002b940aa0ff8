//! Monte Carlo sampling of supremum locations: analytic sampling for shift
//! processes, grid simulation of a strongly mixing moving-average family,
//! and uniformity diagnostics for long windows.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::assembly::PiecewiseLinearPath;
use crate::error::{Error, Result};
use crate::oracle::{window_argmax_f64, FloatPath, SupLocationLaw};
use crate::rat::to_f64;

/// Innovation distribution of the moving-average family. Continuous laws
/// satisfy the vanishing-atom requirement; `Rademacher` is allowed for
/// negative controls but flagged, and `Degenerate` is rejected outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnovationLaw {
    Uniform01,
    Exp1,
    StdNormal,
    Rademacher,
    Degenerate,
}

impl InnovationLaw {
    pub fn as_str(&self) -> &'static str {
        match self {
            InnovationLaw::Uniform01 => "uniform",
            InnovationLaw::Exp1 => "exponential",
            InnovationLaw::StdNormal => "normal",
            InnovationLaw::Rademacher => "rademacher",
            InnovationLaw::Degenerate => "degenerate",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(InnovationLaw::Uniform01),
            "exponential" => Ok(InnovationLaw::Exp1),
            "normal" => Ok(InnovationLaw::StdNormal),
            "rademacher" => Ok(InnovationLaw::Rademacher),
            "degenerate" => Ok(InnovationLaw::Degenerate),
            other => Err(Error::Argument(format!("unknown innovation law {other:?}"))),
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            InnovationLaw::Uniform01 => rng.random::<f64>(),
            InnovationLaw::Exp1 => Exp1.sample(rng),
            InnovationLaw::StdNormal => StandardNormal.sample(rng),
            InnovationLaw::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            InnovationLaw::Degenerate => 1.0,
        }
    }
}

/// A stationary-in-the-large moving average on a grid: innovations at the
/// kernel knots `k·w` combined through a triangular bump of width `w`,
/// evaluated every `h` time units. Adjacent kernels overlap, so the
/// process is 1-dependent and hence strongly mixing.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingProcessSpec {
    pub kernel_width: f64,
    pub innovations: InnovationLaw,
    pub grid_step: f64,
    pub seed: u64,
}

impl MixingProcessSpec {
    fn validate(&self) -> Result<()> {
        if !(self.kernel_width > 0.0) {
            return Err(Error::Argument("kernel width must be positive".into()));
        }
        if !(self.grid_step > 0.0) {
            return Err(Error::Argument("grid step must be positive".into()));
        }
        if self.grid_step > self.kernel_width / 10.0 {
            return Err(Error::Argument("grid step must be at most w/10".into()));
        }
        if self.innovations == InnovationLaw::Degenerate {
            return Err(Error::Argument(
                "degenerate innovations rejected: the supremum would be a single atom".into(),
            ));
        }
        Ok(())
    }
}

/// Binned Monte Carlo estimate of a supremum-location law.
#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalLaw {
    pub t_end: f64,
    pub n_paths: u64,
    /// `n_bins + 1` uniform edges over `[0, T]`.
    pub bin_edges: Vec<f64>,
    /// Mass fractions per bin; with the atom estimates they sum to 1.
    pub bin_masses: Vec<f64>,
    pub atom0_hat: f64,
    pub atom_t_hat: f64,
    pub seed: u64,
    pub generator: String,
}

impl EmpiricalLaw {
    fn from_counts(
        t_end: f64,
        n_paths: u64,
        bins: Vec<u64>,
        atom0: u64,
        atom_t: u64,
        seed: u64,
        generator: &str,
    ) -> Self {
        let n_bins = bins.len();
        let edges = (0..=n_bins)
            .map(|j| t_end * j as f64 / n_bins as f64)
            .collect();
        let masses = bins.iter().map(|c| *c as f64 / n_paths as f64).collect();
        EmpiricalLaw {
            t_end,
            n_paths,
            bin_edges: edges,
            bin_masses: masses,
            atom0_hat: atom0 as f64 / n_paths as f64,
            atom_t_hat: atom_t as f64 / n_paths as f64,
            seed,
            generator: generator.to_string(),
        }
    }

    /// Exact binning of an envelope law, for comparing statistics computed
    /// on empirical and exact inputs with the same machinery.
    pub fn from_exact(law: &SupLocationLaw, n_bins: usize) -> Self {
        let t_end = to_f64(&law.t_end);
        let mut edges = Vec::with_capacity(n_bins + 1);
        let mut masses = Vec::with_capacity(n_bins);
        for j in 0..=n_bins {
            edges.push(t_end * j as f64 / n_bins as f64);
        }
        for j in 0..n_bins {
            let a = &law.t_end * crate::rat::rat(j as i64, n_bins as i64);
            let b = &law.t_end * crate::rat::rat(j as i64 + 1, n_bins as i64);
            masses.push(to_f64(&law.interior.integral_over(&a, &b)));
        }
        EmpiricalLaw {
            t_end,
            n_paths: 1,
            bin_edges: edges,
            bin_masses: masses,
            atom0_hat: to_f64(&law.atom0),
            atom_t_hat: to_f64(&law.atom_t),
            seed: 0,
            generator: "exact".to_string(),
        }
    }

    /// Prorated mass of the open interval `(a, b)`, bins treated as
    /// uniform inside.
    pub fn interval_mass(&self, a: f64, b: f64) -> f64 {
        let mut acc = 0.0;
        for (j, m) in self.bin_masses.iter().enumerate() {
            let (lo, hi) = (self.bin_edges[j], self.bin_edges[j + 1]);
            let overlap = (hi.min(b) - lo.max(a)).max(0.0);
            if overlap > 0.0 {
                acc += m * overlap / (hi - lo);
            }
        }
        acc
    }
}

fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    // splitmix64 of the pair, so path streams are independent of thread
    // scheduling and of each other
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

/// Samples the supremum location of the shift process analytically: each
/// path draws a uniform shift and the leftmost argmax is located from the
/// local-maxima candidate set, with no mesh discretization. Endpoint wins
/// are recorded as atoms.
pub fn sample_shift_tau(
    path: &PiecewiseLinearPath,
    t_end: &crate::rat::Rat,
    n_paths: u64,
    seed: u64,
    n_bins: usize,
) -> Result<EmpiricalLaw> {
    if t_end > path.period() {
        return Err(Error::Argument("window exceeds the period".into()));
    }
    if n_paths < 1 || n_bins < 1 {
        return Err(Error::Argument("need at least one path and one bin".into()));
    }
    let fp = FloatPath::new(path);
    let t = to_f64(t_end);
    let p = fp.period;
    let outcomes: Vec<(f64, i8)> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, i);
            let u: f64 = rng.random::<f64>() * p;
            // window start in path coordinates: s = (P - U) mod P
            let s = (p - u) % p;
            window_argmax_f64(&fp, s, t)
        })
        .collect();
    let mut bins = vec![0u64; n_bins];
    let mut atom0 = 0u64;
    let mut atom_t = 0u64;
    for (tau, kind) in outcomes {
        match kind {
            -1 => atom0 += 1,
            1 => atom_t += 1,
            _ => {
                let b = ((tau / t) * n_bins as f64) as usize;
                bins[b.min(n_bins - 1)] += 1;
            }
        }
    }
    Ok(EmpiricalLaw::from_counts(t, n_paths, bins, atom0, atom_t, seed, "shift"))
}

/// Full output of a mixing-family simulation: the binned law plus the raw
/// per-path supremum locations and values (path order, independent of the
/// thread count).
#[derive(Debug, Clone)]
pub struct MixingRun {
    pub law: EmpiricalLaw,
    pub taus: Vec<f64>,
    pub sup_values: Vec<f64>,
    pub warning: Option<String>,
}

/// Simulates the leftmost grid argmax of the moving-average process over
/// `[0, T]`. Edge wins are ordinary bins here: endpoint atoms are a shift
/// process phenomenon, not a mixing one.
pub fn simulate_mixing_tau(
    spec: &MixingProcessSpec,
    t_end: f64,
    n_paths: u64,
    n_bins: usize,
) -> Result<MixingRun> {
    simulate_mixing_tau_directed(spec, t_end, n_paths, n_bins, false)
}

/// As [`simulate_mixing_tau`], optionally scanning the time-reversed path
/// (the leftmost argmax of `X(T - t)`), which for the symmetric kernel has
/// the same law.
pub fn simulate_mixing_tau_directed(
    spec: &MixingProcessSpec,
    t_end: f64,
    n_paths: u64,
    n_bins: usize,
    reversed: bool,
) -> Result<MixingRun> {
    spec.validate()?;
    if !(t_end >= 10.0 * spec.kernel_width) {
        return Err(Error::Argument("window must span at least 10 kernel widths".into()));
    }
    if n_paths < 1 || n_bins < 1 {
        return Err(Error::Argument("need at least one path and one bin".into()));
    }
    let w = spec.kernel_width;
    let h = spec.grid_step;
    let n_steps = (t_end / h + 1e-9).floor() as usize;
    let n_innov = (t_end / w).ceil() as usize + 3; // kernels -1 ..= ceil(T/w)+1

    let results: Vec<(f64, f64)> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(spec.seed, i);
            let eps: Vec<f64> = (0..n_innov)
                .map(|_| spec.innovations.sample(&mut rng))
                .collect();
            let value_at = |j: usize| -> f64 {
                let t = j as f64 * h;
                let pos = t / w;
                let ki = pos.floor();
                let frac = pos - ki;
                let k = ki as usize; // kernel index shifted by +1 in eps
                eps[k + 1] * (1.0 - frac) + eps[k + 2] * frac
            };
            let mut best_val = f64::NEG_INFINITY;
            let mut best_j = 0usize;
            if reversed {
                for j in (0..=n_steps).rev() {
                    let v = value_at(j);
                    if v > best_val {
                        best_val = v;
                        best_j = j;
                    }
                }
            } else {
                for j in 0..=n_steps {
                    let v = value_at(j);
                    if v > best_val {
                        best_val = v;
                        best_j = j;
                    }
                }
            }
            let tau = if reversed {
                t_end - best_j as f64 * h
            } else {
                best_j as f64 * h
            };
            (tau, best_val)
        })
        .collect();

    let mut bins = vec![0u64; n_bins];
    let mut taus = Vec::with_capacity(results.len());
    let mut sups = Vec::with_capacity(results.len());
    for (tau, sup) in results {
        let b = ((tau / t_end) * n_bins as f64) as usize;
        bins[b.min(n_bins - 1)] += 1;
        taus.push(tau);
        sups.push(sup);
    }
    let generator = format!(
        "mixing:w={w},h={h},innov={},rev={reversed}",
        spec.innovations.as_str()
    );
    let law = EmpiricalLaw::from_counts(t_end, n_paths, bins, 0, 0, spec.seed, &generator);
    let warning = match spec.innovations {
        InnovationLaw::Rademacher => Some(
            "discrete innovations: the supremum distribution carries large atoms".to_string(),
        ),
        _ => None,
    };
    Ok(MixingRun { law, taus, sup_values: sups, warning })
}

/// Sup over bins fully inside `[εT, (1-ε)T]` of `|T·f̂ - 1|`, with `f̂` the
/// binned density estimate of the raw (unconditioned) law.
pub fn uniformity_band(e: &EmpiricalLaw, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Argument("need 0 < ε < 1/2".into()));
    }
    let lo = eps * e.t_end;
    let hi = (1.0 - eps) * e.t_end;
    let tol = 1e-9 * e.t_end;
    let mut worst: Option<f64> = None;
    for (j, m) in e.bin_masses.iter().enumerate() {
        let (a, b) = (e.bin_edges[j], e.bin_edges[j + 1]);
        if a >= lo - tol && b <= hi + tol {
            let dens = m / (b - a);
            let dev = (e.t_end * dens - 1.0).abs();
            worst = Some(worst.map_or(dev, |x: f64| x.max(dev)));
        }
    }
    worst.ok_or_else(|| Error::Argument("no bins inside the band".into()))
}

/// Conditional interval estimate with a Wilson 95% confidence interval.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionalEstimate {
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Effective number of conditioning samples behind the interval.
    pub n_effective: f64,
}

/// Estimates `P(τ ∈ (a_in, b_in) | τ ∈ (a, b))` from the binned law.
pub fn conditional_uniformity(
    e: &EmpiricalLaw,
    a: f64,
    a_in: f64,
    b_in: f64,
    b: f64,
) -> Result<ConditionalEstimate> {
    if !(0.0 < a && a <= a_in && a_in < b_in && b_in <= b && b < e.t_end) {
        return Err(Error::Argument("need 0 < a <= a' < b' <= b < T".into()));
    }
    let outer = e.interval_mass(a, b);
    if outer <= 0.0 {
        return Err(Error::Argument("zero conditioning mass".into()));
    }
    let inner = e.interval_mass(a_in, b_in);
    let p_hat = inner / outer;
    let n_eff = outer * e.n_paths as f64;
    let z = 1.959963984540054f64;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_eff;
    let center = (p_hat + z2 / (2.0 * n_eff)) / denom;
    let half = z * (p_hat * (1.0 - p_hat) / n_eff + z2 / (4.0 * n_eff * n_eff)).sqrt() / denom;
    Ok(ConditionalEstimate {
        p_hat,
        ci_low: (center - half).max(0.0),
        ci_high: (center + half).min(1.0),
        n_effective: n_eff,
    })
}

/// Largest frequency of an exactly repeated supremum value: a cheap proxy
/// for the size of the largest atom of the supremum distribution.
pub fn atom_proxy(sup_values: &[f64]) -> f64 {
    if sup_values.is_empty() {
        return 0.0;
    }
    let mut sorted = sup_values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite supremum values"));
    let mut best = 1usize;
    let mut run = 1usize;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
            best = best.max(run);
        } else {
            run = 1;
        }
    }
    best as f64 / sup_values.len() as f64
}

/// One-sample Kolmogorov-Smirnov statistic of `samples` against the
/// uniform distribution on `[0, scale]`.
pub fn ks_statistic_uniform(samples: &[f64], scale: f64) -> f64 {
    let mut u: Vec<f64> = samples.iter().map(|x| (x / scale).clamp(0.0, 1.0)).collect();
    u.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = u.len() as f64;
    let mut d = 0.0f64;
    for (i, x) in u.iter().enumerate() {
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((x - lo).abs()).max((hi - x).abs());
    }
    d
}

/// Asymptotic Kolmogorov survival function `P(K > λ)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64) * (k as f64) * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov-Smirnov test; returns `(D, p)` with the
/// asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).expect("finite samples"));
    ys.sort_by(|p, q| p.partial_cmp(q).expect("finite samples"));
    let (n, m) = (xs.len(), ys.len());
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d = 0.0f64;
    while i < n && j < m {
        let x = xs[i];
        let y = ys[j];
        if x <= y {
            i += 1;
        }
        if y <= x {
            j += 1;
        }
        let diff = (i as f64 / n as f64 - j as f64 / m as f64).abs();
        d = d.max(diff);
    }
    let ne = (n as f64 * m as f64 / (n + m) as f64).sqrt();
    let p = kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
    (d, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{build_from_collection, FillMode};
    use crate::blocks::decompose;
    use crate::density::StepDensity;
    use crate::oracle::exact_law;
    use crate::rat::{rat, rint, zero};

    fn e1_path() -> PiecewiseLinearPath {
        let f = StepDensity::constant(&rint(1), &rat(1, 2)).unwrap();
        let c = decompose(&f).unwrap();
        build_from_collection(&c, FillMode::Repaired).unwrap().0
    }

    fn quick_spec(seed: u64) -> MixingProcessSpec {
        MixingProcessSpec {
            kernel_width: 1.0,
            innovations: InnovationLaw::StdNormal,
            grid_step: 0.05,
            seed,
        }
    }

    #[test]
    fn shift_sampling_matches_exact_law() {
        let path = e1_path();
        let t = rint(1);
        let exact = exact_law(&path, &t).unwrap();
        let n = 200_000u64;
        let law = sample_shift_tau(&path, &t, n, 7, 20).unwrap();
        let sigma = |p: f64| (p * (1.0 - p) / n as f64).sqrt();
        let a0 = to_f64(&exact.atom0);
        assert!((law.atom0_hat - a0).abs() <= 3.0 * sigma(a0) + 1e-12);
        let at = to_f64(&exact.atom_t);
        assert!((law.atom_t_hat - at).abs() <= 3.0 * sigma(at) + 1e-12);
        for (j, m) in law.bin_masses.iter().enumerate() {
            let a = &t * rat(j as i64, 20);
            let b = &t * rat(j as i64 + 1, 20);
            let p = to_f64(&exact.interior.integral_over(&a, &b));
            assert!(
                (m - p).abs() <= 3.0 * sigma(p) + 1e-12,
                "bin {j}: {m} vs {p}"
            );
        }
    }

    #[test]
    fn single_path_is_a_point_mass() {
        let path = e1_path();
        let law = sample_shift_tau(&path, &rint(1), 1, 3, 10).unwrap();
        let total: f64 = law.bin_masses.iter().sum::<f64>() + law.atom0_hat + law.atom_t_hat;
        assert!((total - 1.0).abs() < 1e-12);
        let pieces = law
            .bin_masses
            .iter()
            .filter(|m| **m > 0.0)
            .count()
            + usize::from(law.atom0_hat > 0.0)
            + usize::from(law.atom_t_hat > 0.0);
        assert_eq!(pieces, 1);
    }

    #[test]
    fn mixing_run_is_reproducible_across_thread_counts() {
        let spec = quick_spec(42);
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let r1 = pool1.install(|| simulate_mixing_tau(&spec, 10.0, 2000, 20).unwrap());
        let r4 = pool4.install(|| simulate_mixing_tau(&spec, 10.0, 2000, 20).unwrap());
        assert_eq!(r1.taus, r4.taus);
        assert_eq!(r1.sup_values, r4.sup_values);
        assert_eq!(r1.law.bin_masses, r4.law.bin_masses);
    }

    #[test]
    fn mixing_rejects_bad_parameters() {
        let mut spec = quick_spec(1);
        spec.grid_step = 0.5;
        assert!(simulate_mixing_tau(&spec, 10.0, 10, 10).is_err());
        let mut spec = quick_spec(1);
        spec.innovations = InnovationLaw::Degenerate;
        assert!(simulate_mixing_tau(&spec, 10.0, 10, 10).is_err());
        let spec = quick_spec(1);
        assert!(simulate_mixing_tau(&spec, 5.0, 10, 10).is_err());
    }

    #[test]
    fn rademacher_is_warned_and_atomic() {
        let mut spec = quick_spec(5);
        spec.innovations = InnovationLaw::Rademacher;
        let run = simulate_mixing_tau(&spec, 10.0, 2000, 10).unwrap();
        assert!(run.warning.is_some());
        let proxy = atom_proxy(&run.sup_values);
        assert!(proxy > 100.0 / 2000.0, "proxy {proxy} should be far above 1/n");
    }

    #[test]
    fn continuous_innovations_have_tiny_atom_proxy() {
        let spec = quick_spec(6);
        let run = simulate_mixing_tau(&spec, 10.0, 10_000, 10).unwrap();
        assert!(atom_proxy(&run.sup_values) <= 3.0 / 10_000.0);
        assert_eq!(atom_proxy(&vec![1.0; 50]), 1.0);
    }

    #[test]
    fn reversed_scan_is_statistically_indistinguishable() {
        let fwd = simulate_mixing_tau_directed(&quick_spec(11), 20.0, 4000, 20, false).unwrap();
        let rev = simulate_mixing_tau_directed(&quick_spec(12), 20.0, 4000, 20, true).unwrap();
        let (_, p) = ks_two_sample(&fwd.taus, &rev.taus);
        assert!(p > 0.01, "two-sample KS p = {p}");
    }

    #[test]
    fn band_statistic_on_exact_laws() {
        // exactly uniform law: statistic 0
        let uniform = SupLocationLaw {
            t_end: rint(1),
            atom0: zero(),
            atom_t: zero(),
            interior: StepDensity::uniform(&rint(1)).unwrap(),
            provenance: crate::oracle::Provenance::Envelope,
        };
        let e = EmpiricalLaw::from_exact(&uniform, 20);
        assert!(uniformity_band(&e, 0.1).unwrap().abs() < 1e-12);

        // E1: raw law has interior density 1/2, so |T f - 1| = 1/2 on the band
        let path = e1_path();
        let law = exact_law(&path, &rint(1)).unwrap();
        let e = EmpiricalLaw::from_exact(&law, 20);
        assert!((uniformity_band(&e, 0.1).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn conditional_estimates() {
        let path = e1_path();
        let law = exact_law(&path, &rint(1)).unwrap();
        let mut e = EmpiricalLaw::from_exact(&law, 20);
        e.n_paths = 10_000;
        // degenerate: inner equals outer
        let c = conditional_uniformity(&e, 0.2, 0.2, 0.8, 0.8).unwrap();
        assert!((c.p_hat - 1.0).abs() < 1e-12);
        // E3-flavor negative control lives in the oracle tests; here check
        // the uniform ratio on E1's flat interior
        let c = conditional_uniformity(&e, 0.2, 0.3, 0.5, 0.8).unwrap();
        assert!((c.p_hat - 1.0 / 3.0).abs() < 1e-9);
        assert!(c.ci_low < 1.0 / 3.0 && 1.0 / 3.0 < c.ci_high);
        assert!(conditional_uniformity(&e, 0.8, 0.2, 0.5, 0.9).is_err());
    }

    #[test]
    fn ks_helpers_behave() {
        // perfectly spaced uniform sample: d ~ 1/(2n)
        let n = 1000;
        let samples: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_statistic_uniform(&samples, 1.0);
        assert!(d <= 0.5 / n as f64 + 1e-12);
        // all mass at one point: d ~ 1
        let d = ks_statistic_uniform(&vec![0.0; 100], 1.0);
        assert!(d > 0.99);
        assert!(kolmogorov_sf(0.5) > kolmogorov_sf(1.5));
        let (d2, p2) = ks_two_sample(&samples, &samples);
        assert!(d2 <= 1.0 / n as f64 + 1e-12);
        assert!(p2 > 0.99);
    }
}
