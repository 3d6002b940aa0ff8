//! Piecewise-constant candidate densities on `(0, T)` and the necessary
//! conditions a supremum-location density must satisfy.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{one, rat, zero, Rat};

/// An exact cadlag step density on `(0, T)`.
///
/// The function takes the value `values[i]` on `[breaks[i], breaks[i+1])`,
/// with `breaks[0] = 0` and `breaks[k] = T`. Construction canonicalizes:
/// adjacent pieces with equal values are merged, so two densities are equal
/// as functions iff they are equal as structs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepDensity {
    breaks: Vec<Rat>,
    values: Vec<Rat>,
}

impl StepDensity {
    /// Builds a density from `(until, value)` pieces covering `(0, T)`.
    pub fn from_pieces(t_end: &Rat, pieces: &[(Rat, Rat)]) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Structural("density needs at least one piece".into()));
        }
        let mut breaks = Vec::with_capacity(pieces.len() + 1);
        let mut values = Vec::with_capacity(pieces.len());
        breaks.push(zero());
        for (until, value) in pieces {
            breaks.push(until.clone());
            values.push(value.clone());
        }
        if breaks.last() != Some(t_end) {
            return Err(Error::Structural(
                "last piece must end exactly at T".into(),
            ));
        }
        Self::new(breaks, values)
    }

    /// Builds a density from explicit breakpoints `0 = t_0 < … < t_k = T`
    /// and the `k` values on the half-open pieces.
    pub fn new(breaks: Vec<Rat>, values: Vec<Rat>) -> Result<Self> {
        if breaks.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::Structural(
                "breakpoint and value counts do not line up".into(),
            ));
        }
        if !breaks[0].is_zero() {
            return Err(Error::Structural("first breakpoint must be 0".into()));
        }
        for w in breaks.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Structural(
                    "breakpoints must be strictly increasing".into(),
                ));
            }
        }
        if values.iter().any(|v| v.is_negative()) {
            return Err(Error::Structural("density values must be >= 0".into()));
        }
        // canonical form: merge runs of equal adjacent values
        let mut cb = vec![breaks[0].clone()];
        let mut cv: Vec<Rat> = Vec::new();
        for (i, v) in values.iter().enumerate() {
            if cv.last() == Some(v) {
                *cb.last_mut().unwrap() = breaks[i + 1].clone();
            } else {
                cv.push(v.clone());
                cb.push(breaks[i + 1].clone());
            }
        }
        Ok(StepDensity { breaks: cb, values: cv })
    }

    /// Constant density `c` on `(0, T)`.
    pub fn constant(t_end: &Rat, c: &Rat) -> Result<Self> {
        Self::new(vec![zero(), t_end.clone()], vec![c.clone()])
    }

    /// The uniform density `1/T`.
    pub fn uniform(t_end: &Rat) -> Result<Self> {
        Self::constant(t_end, &(one() / t_end))
    }

    pub fn t_end(&self) -> &Rat {
        self.breaks.last().unwrap()
    }

    pub fn breaks(&self) -> &[Rat] {
        &self.breaks
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn piece_count(&self) -> usize {
        self.values.len()
    }

    pub fn first_value(&self) -> &Rat {
        &self.values[0]
    }

    pub fn last_value(&self) -> &Rat {
        self.values.last().unwrap()
    }

    /// Value at `t` under the closed-left/open-right convention; `t` must
    /// lie in `[0, T)`.
    pub fn value_at(&self, t: &Rat) -> Result<&Rat> {
        if t < &zero() || t >= self.t_end() {
            return Err(Error::Argument(format!(
                "evaluation point {t} outside [0, T)"
            )));
        }
        // partition_point: first break strictly greater than t
        let idx = self.breaks.partition_point(|b| b <= t);
        Ok(&self.values[idx - 1])
    }

    pub fn min_value(&self) -> &Rat {
        self.values.iter().min().unwrap()
    }

    pub fn max_value(&self) -> &Rat {
        self.values.iter().max().unwrap()
    }

    pub fn integral(&self) -> Rat {
        let mut acc = zero();
        for (i, v) in self.values.iter().enumerate() {
            acc += v * (&self.breaks[i + 1] - &self.breaks[i]);
        }
        acc
    }

    /// Exact integral over `[lo, hi] ∩ [0, T]`.
    pub fn integral_over(&self, lo: &Rat, hi: &Rat) -> Rat {
        let mut acc = zero();
        for (i, v) in self.values.iter().enumerate() {
            let a = std::cmp::max(&self.breaks[i], lo);
            let b = std::cmp::min(&self.breaks[i + 1], hi);
            if a < b {
                acc += v * (b - a);
            }
        }
        acc
    }

    /// Pointwise sum of two densities on the same window.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.t_end() != other.t_end() {
            return Err(Error::Argument("window lengths differ".into()));
        }
        let breaks = merge_breaks(&self.breaks, &other.breaks);
        let mut values = Vec::with_capacity(breaks.len() - 1);
        for w in breaks.windows(2) {
            values.push(self.value_at(&w[0])? + other.value_at(&w[0])?);
        }
        Self::new(breaks, values)
    }

    /// Exact L1 distance between two densities on the same window.
    pub fn l1_distance(&self, other: &Self) -> Result<Rat> {
        if self.t_end() != other.t_end() {
            return Err(Error::Argument("window lengths differ".into()));
        }
        let breaks = merge_breaks(&self.breaks, &other.breaks);
        let mut acc = zero();
        for w in breaks.windows(2) {
            let d = self.value_at(&w[0])? - other.value_at(&w[0])?;
            acc += d.abs() * (&w[1] - &w[0]);
        }
        Ok(acc)
    }

    /// Exact sup distance between two densities on the same window.
    pub fn sup_distance(&self, other: &Self) -> Result<Rat> {
        if self.t_end() != other.t_end() {
            return Err(Error::Argument("window lengths differ".into()));
        }
        let breaks = merge_breaks(&self.breaks, &other.breaks);
        let mut best = zero();
        for w in breaks.windows(2) {
            let d = (self.value_at(&w[0])? - other.value_at(&w[0])?).abs();
            best = std::cmp::max(best, d);
        }
        Ok(best)
    }
}

/// Sorted union of two breakpoint lists.
pub(crate) fn merge_breaks(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out: Vec<Rat> = a.iter().chain(b.iter()).cloned().collect();
    out.sort();
    out.dedup();
    out
}

/// Outcome of validating a candidate density against the necessary
/// conditions on supremum-location densities.
///
/// * `passes_a`: total variation on `(0,T)` at most `f(0+) + f(T-)`;
/// * `passes_b`: the infimum of the density is strictly positive;
/// * `passes_c`: the density is exactly uniform, or its total mass is
///   strictly below one;
/// * `passes_universal_bound`: `f(t) <= max(1/t, 1/(T-t))` on `(0,T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub tv: Rat,
    pub f0plus: Rat,
    pub ftminus: Rat,
    pub inf_value: Rat,
    pub integral: Rat,
    pub is_uniform: bool,
    pub passes_a: bool,
    pub passes_b: bool,
    pub passes_c: bool,
    pub passes_universal_bound: bool,
}

impl DensityReport {
    pub fn admissible(&self) -> bool {
        self.passes_a && self.passes_b && self.passes_c
    }
}

/// Total variation of a step density on the open interval `(0, T)`:
/// the sum of interior jump magnitudes. The endpoint levels themselves
/// are not jumps.
pub fn total_variation(f: &StepDensity) -> Rat {
    let mut acc = zero();
    for w in f.values().windows(2) {
        acc += (&w[1] - &w[0]).abs();
    }
    acc
}

/// Evaluates the admissibility conditions and endpoint limits of `f`.
pub fn validate_density(f: &StepDensity) -> DensityReport {
    let tv = total_variation(f);
    let f0plus = f.first_value().clone();
    let ftminus = f.last_value().clone();
    let inf_value = f.min_value().clone();
    let integral = f.integral();
    let is_uniform = f.piece_count() == 1 && f.values()[0] == one() / f.t_end();
    let passes_a = tv <= &f0plus + &ftminus;
    let passes_b = inf_value > zero();
    let passes_c = is_uniform || integral < one();
    let passes_universal_bound = check_universal_bound(f);
    DensityReport {
        tv,
        f0plus,
        ftminus,
        inf_value,
        integral,
        is_uniform,
        passes_a,
        passes_b,
        passes_c,
        passes_universal_bound,
    }
}

/// Checks `f(t) <= max(1/t, 1/(T-t))` for all `t` in `(0, T)`.
///
/// The envelope decreases on `(0, T/2]` and increases on `[T/2, T)`, so on
/// each piece its infimum sits at the piece endpoint nearest `T/2` (or at
/// `T/2` itself when the piece straddles it); comparing each piece value
/// against that infimum settles the whole piece.
pub fn check_universal_bound(f: &StepDensity) -> bool {
    let t_end = f.t_end().clone();
    let half = &t_end / rat(2, 1);
    for (i, v) in f.values().iter().enumerate() {
        let a = &f.breaks()[i];
        let b = &f.breaks()[i + 1];
        let env_min = if *b <= half {
            one() / b
        } else if *a >= half {
            one() / (&t_end - a)
        } else {
            rat(2, 1) / &t_end
        };
        if *v > env_min {
            return false;
        }
    }
    true
}

fn check_window_params(t_end: &Rat, delta_win: &Rat, delta_shift: &Rat) -> Result<()> {
    if delta_win < &zero() || delta_win >= t_end {
        return Err(Error::Argument("need 0 <= Δ < T".into()));
    }
    if delta_shift < &zero() || delta_shift > delta_win {
        return Err(Error::Argument("need 0 <= δ <= Δ".into()));
    }
    Ok(())
}

/// Checks the window-shrinking monotonicity of supremum-location
/// densities: `f_short(t) >= f_long(t + δ)` almost everywhere on
/// `(0, T - Δ)`, where `f_long` is the interior density for window `T` and
/// `f_short` for window `T - Δ`. Exact on the common refinement.
pub fn check_window_monotonicity(
    f_long: &StepDensity,
    f_short: &StepDensity,
    t_end: &Rat,
    delta_win: &Rat,
    delta_shift: &Rat,
) -> Result<bool> {
    check_window_params(t_end, delta_win, delta_shift)?;
    if f_long.t_end() != t_end || f_short.t_end() != &(t_end - delta_win) {
        return Err(Error::Argument(
            "law windows do not match (T, T - Δ)".into(),
        ));
    }
    let horizon = t_end - delta_win;
    // breakpoints of t -> f_long(t + δ) restricted to (0, T - Δ)
    let shifted: Vec<Rat> = f_long
        .breaks()
        .iter()
        .map(|b| b - delta_shift)
        .filter(|b| b > &zero() && b < &horizon)
        .collect();
    let mut breaks = merge_breaks(f_short.breaks(), &shifted);
    breaks.retain(|b| b <= &horizon);
    for w in breaks.windows(2) {
        let short_v = f_short.value_at(&w[0])?;
        let long_v = f_long.value_at(&(&w[0] + delta_shift))?;
        if short_v < long_v {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the integral form of the window-shrinking inequality:
///
/// `∫_{ε1}^{T-Δ-ε2} (f_short(t) - f_long(t+δ)) dt
///    <= ∫_{ε1}^{ε1+δ} f_long + ∫_{T-Δ-ε2+δ}^{T-ε2} f_long`,
///
/// evaluated exactly.
#[allow(clippy::too_many_arguments)]
pub fn check_integral_inequality(
    f_long: &StepDensity,
    f_short: &StepDensity,
    t_end: &Rat,
    delta_win: &Rat,
    delta_shift: &Rat,
    eps1: &Rat,
    eps2: &Rat,
) -> Result<bool> {
    check_window_params(t_end, delta_win, delta_shift)?;
    if eps1 < &zero() || eps2 < &zero() || &(eps1 + eps2) >= &(t_end - delta_win) {
        return Err(Error::Argument(
            "need ε1, ε2 >= 0 with ε1 + ε2 < T - Δ".into(),
        ));
    }
    if f_long.t_end() != t_end || f_short.t_end() != &(t_end - delta_win) {
        return Err(Error::Argument(
            "law windows do not match (T, T - Δ)".into(),
        ));
    }
    let upper = t_end - delta_win - eps2;
    let lhs = f_short.integral_over(eps1, &upper)
        - f_long.integral_over(&(eps1 + delta_shift), &(&upper + delta_shift));
    let rhs = f_long.integral_over(eps1, &(eps1 + delta_shift))
        + f_long.integral_over(&(&upper + delta_shift), &(t_end - eps2));
    Ok(lhs <= rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rint;

    fn thirds(v1: i64, v2: i64, v3: i64, q: i64) -> StepDensity {
        StepDensity::new(
            vec![zero(), rat(1, 3), rat(2, 3), rint(1)],
            vec![rat(v1, q), rat(v2, q), rat(v3, q)],
        )
        .unwrap()
    }

    #[test]
    fn tv_constant_is_zero() {
        let f = StepDensity::uniform(&rint(1)).unwrap();
        assert_eq!(total_variation(&f), zero());
    }

    #[test]
    fn tv_single_jump() {
        let f = StepDensity::new(
            vec![zero(), rat(1, 2), rint(1)],
            vec![rint(1), rat(1, 2)],
        )
        .unwrap();
        assert_eq!(total_variation(&f), rat(1, 2));
    }

    #[test]
    fn tv_two_jumps() {
        let f = thirds(1, 2, 1, 2);
        assert_eq!(total_variation(&f), rint(1));
    }

    #[test]
    fn canonical_form_merges_equal_neighbors() {
        let refined = StepDensity::new(
            vec![zero(), rat(1, 4), rat(1, 2), rint(1)],
            vec![rint(1), rint(1), rat(1, 2)],
        )
        .unwrap();
        let plain = StepDensity::new(
            vec![zero(), rat(1, 2), rint(1)],
            vec![rint(1), rat(1, 2)],
        )
        .unwrap();
        assert_eq!(refined, plain);
        assert_eq!(total_variation(&refined), total_variation(&plain));
    }

    #[test]
    fn rejects_malformed_breakpoints() {
        assert!(StepDensity::new(vec![zero(), zero()], vec![rint(1)]).is_err());
        assert!(StepDensity::new(
            vec![rat(1, 4), rint(1)],
            vec![rint(1)],
        )
        .is_err());
        assert!(StepDensity::new(
            vec![zero(), rint(1)],
            vec![rat(-1, 2)],
        )
        .is_err());
    }

    #[test]
    fn validate_uniform_passes() {
        for t in [rint(1), rat(3, 2), rint(5)] {
            let f = StepDensity::uniform(&t).unwrap();
            let rep = validate_density(&f);
            assert!(rep.is_uniform);
            assert!(rep.admissible());
            assert!(rep.passes_universal_bound);
        }
    }

    #[test]
    fn validate_two_level_density() {
        // f = 1/2 + (1/2) on (0, 1/2): tv = 1/2, endpoints 1 and 1/2,
        // integral 3/4 — admissible all around.
        let f = StepDensity::new(
            vec![zero(), rat(1, 2), rint(1)],
            vec![rint(1), rat(1, 2)],
        )
        .unwrap();
        let rep = validate_density(&f);
        assert_eq!(rep.tv, rat(1, 2));
        assert_eq!(rep.f0plus, rint(1));
        assert_eq!(rep.ftminus, rat(1, 2));
        assert_eq!(rep.inf_value, rat(1, 2));
        assert_eq!(rep.integral, rat(3, 4));
        assert!(!rep.is_uniform);
        assert!(rep.admissible());
    }

    #[test]
    fn validate_interior_bump_fails_tv() {
        let f = thirds(1, 3, 1, 2);
        let rep = validate_density(&f);
        assert_eq!(rep.tv, rint(2));
        assert!(!rep.passes_a);
        assert!(!rep.admissible());
    }

    #[test]
    fn universal_bound_rejects_tall_middle() {
        // value 3 on [2/5, 3/5): envelope bottoms out at 2 there
        let f = StepDensity::new(
            vec![zero(), rat(2, 5), rat(3, 5), rint(1)],
            vec![rat(1, 2), rint(3), rat(1, 2)],
        )
        .unwrap();
        assert!(!check_universal_bound(&f));
    }

    #[test]
    fn universal_bound_brute_force_agreement() {
        // Independent check: dense rational sampling of the envelope
        // comparison, against the per-piece endpoint shortcut.
        let cases = vec![
            StepDensity::uniform(&rint(1)).unwrap(),
            StepDensity::new(
                vec![zero(), rat(1, 2), rint(1)],
                vec![rint(1), rat(1, 2)],
            )
            .unwrap(),
            StepDensity::new(
                vec![zero(), rat(1, 4), rat(3, 4), rint(1)],
                vec![rint(2), rat(3, 2), rint(2)],
            )
            .unwrap(),
            StepDensity::new(
                vec![zero(), rat(2, 5), rat(3, 5), rint(1)],
                vec![rat(1, 2), rint(3), rat(1, 2)],
            )
            .unwrap(),
        ];
        let n = 720i64;
        for f in cases {
            let t_end = f.t_end().clone();
            let mut brute = true;
            for j in 1..n {
                let t = &t_end * rat(j, n);
                let env = std::cmp::max(one() / &t, one() / (&t_end - &t));
                if f.value_at(&t).unwrap() > &env {
                    brute = false;
                    break;
                }
            }
            // Sampling can only miss violations, never invent them, and on
            // the 1/720 grid it hits every piece of these cases.
            assert_eq!(check_universal_bound(&f), brute);
        }
    }

    #[test]
    fn window_checks_degenerate_parameters() {
        let f = StepDensity::uniform(&rint(1)).unwrap();
        assert!(check_window_monotonicity(&f, &f, &rint(1), &zero(), &zero()).unwrap());
        assert!(check_integral_inequality(
            &f,
            &f,
            &rint(1),
            &zero(),
            &zero(),
            &zero(),
            &zero()
        )
        .unwrap());
    }

    #[test]
    fn window_monotonicity_negative_control() {
        // Hand-edited "short" density dipping below the long one on a
        // positive-length piece.
        let long = StepDensity::uniform(&rint(1)).unwrap();
        let short = StepDensity::new(
            vec![zero(), rat(2, 5), rat(4, 5)],
            vec![rint(2), rat(1, 2)],
        )
        .unwrap();
        let ok = check_window_monotonicity(&long, &short, &rint(1), &rat(1, 5), &rat(1, 10))
            .unwrap();
        assert!(!ok);
    }

    #[test]
    fn window_checks_validate_parameters() {
        let f = StepDensity::uniform(&rint(1)).unwrap();
        assert!(check_window_monotonicity(&f, &f, &rint(1), &rat(1, 2), &rint(1)).is_err());
        assert!(check_integral_inequality(
            &f,
            &f,
            &rint(1),
            &zero(),
            &zero(),
            &rat(1, 2),
            &rat(1, 2)
        )
        .is_err());
    }

    #[test]
    fn integral_helpers() {
        let f = StepDensity::new(
            vec![zero(), rat(1, 2), rint(1)],
            vec![rint(1), rat(1, 2)],
        )
        .unwrap();
        assert_eq!(f.integral(), rat(3, 4));
        assert_eq!(f.integral_over(&rat(1, 4), &rat(3, 4)), rat(1, 4) + rat(1, 8));
        assert_eq!(f.value_at(&rat(1, 2)).unwrap(), &rat(1, 2));
        assert_eq!(f.value_at(&zero()).unwrap(), &rint(1));
        assert!(f.value_at(&rint(1)).is_err());
    }

    #[test]
    fn l1_and_sup_distances() {
        let a = StepDensity::uniform(&rint(1)).unwrap();
        let b = StepDensity::new(
            vec![zero(), rat(1, 2), rint(1)],
            vec![rat(3, 2), rat(1, 2)],
        )
        .unwrap();
        assert_eq!(a.l1_distance(&b).unwrap(), rat(1, 2));
        assert_eq!(a.sup_distance(&b).unwrap(), rat(1, 2));
        assert_eq!(a.l1_distance(&a).unwrap(), zero());
    }
}
