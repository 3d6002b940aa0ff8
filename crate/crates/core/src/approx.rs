//! Quantization of general cadlag candidate densities onto value grids and
//! measured convergence of the realized laws back to the target.
//!
//! Presets carry analytic oscillation moduli so every mesh and sandwich
//! guarantee is certified with exact arithmetic; arbitrary callbacks could
//! not certify anything, so they are deliberately not accepted.

use num::{Signed, Zero};

use crate::assembly::{build_from_collection, FillMode};
use crate::blocks::{feasibility, peel_blocks};
use crate::density::{total_variation, StepDensity};
use crate::error::{Error, Result};
use crate::oracle::exact_law;
use crate::rat::{ceil_u64, one, rat, rint, zero, Rat};

/// Hard ceiling on mesh cells; a bound that binds is reported, because the
/// oscillation guarantee is then no longer certified.
pub const DEFAULT_MESH_CAP: usize = 4096;

/// Linear ramp `a + b t` on `(0, T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RampDensity {
    pub t_end: Rat,
    pub a: Rat,
    pub b: Rat,
}

/// Flat value outside `[t1, T - t1]`, concave parabola
/// `peak - curvature (t - T/2)^2` inside; continuous at the junctions by
/// construction, so the flat value is `peak - curvature (t1 - T/2)^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolaDensity {
    pub t_end: Rat,
    pub peak: Rat,
    pub curvature: Rat,
    pub inner_left: Rat,
}

/// Level `c1` on `[0, ta]`, linear ramp to `c2` over `[ta, tb]`, level
/// `c2` on `[tb, T]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoLevelRampDensity {
    pub t_end: Rat,
    pub c1: Rat,
    pub c2: Rat,
    pub ta: Rat,
    pub tb: Rat,
}

/// A candidate density: either an exact step density or one of the preset
/// families with rational parameters and an analytic modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CadlagDensity {
    Step(StepDensity),
    Ramp(RampDensity),
    Parabola(ParabolaDensity),
    TwoLevelRamp(TwoLevelRampDensity),
}

impl ParabolaDensity {
    pub fn flat_value(&self) -> Rat {
        let c = &self.t_end / rint(2);
        let d = &self.inner_left - &c;
        &self.peak - &self.curvature * &d * &d
    }

    fn inner_right(&self) -> Rat {
        &self.t_end - &self.inner_left
    }

    fn eval_parabola(&self, t: &Rat) -> Rat {
        let c = &self.t_end / rint(2);
        let d = t - &c;
        &self.peak - &self.curvature * &d * &d
    }

    /// Exact integral of the parabola branch over `[p, q]`.
    fn parabola_integral(&self, p: &Rat, q: &Rat) -> Rat {
        let c = &self.t_end / rint(2);
        let dq = q - &c;
        let dp = p - &c;
        &self.peak * (q - p)
            - &self.curvature * (&dq * &dq * &dq - &dp * &dp * &dp) / rint(3)
    }
}

impl CadlagDensity {
    pub fn t_end(&self) -> &Rat {
        match self {
            CadlagDensity::Step(f) => f.t_end(),
            CadlagDensity::Ramp(r) => &r.t_end,
            CadlagDensity::Parabola(p) => &p.t_end,
            CadlagDensity::TwoLevelRamp(t) => &t.t_end,
        }
    }

    pub fn eval(&self, t: &Rat) -> Result<Rat> {
        if t < &zero() || t > self.t_end() {
            return Err(Error::Argument(format!("point {t} outside [0, T]")));
        }
        Ok(match self {
            CadlagDensity::Step(f) => {
                if t == f.t_end() {
                    f.last_value().clone()
                } else {
                    f.value_at(t)?.clone()
                }
            }
            CadlagDensity::Ramp(r) => &r.a + &r.b * t,
            CadlagDensity::Parabola(p) => {
                if t < &p.inner_left || t > &p.inner_right() {
                    p.flat_value()
                } else {
                    p.eval_parabola(t)
                }
            }
            CadlagDensity::TwoLevelRamp(tl) => {
                if t <= &tl.ta {
                    tl.c1.clone()
                } else if t >= &tl.tb {
                    tl.c2.clone()
                } else {
                    &tl.c1 + (&tl.c2 - &tl.c1) * (t - &tl.ta) / (&tl.tb - &tl.ta)
                }
            }
        })
    }

    /// Lipschitz modulus: `|f(s) - f(t)| <= L |s - t|`. Step densities have
    /// no continuity modulus; their mesh is their own breakpoint set.
    fn lipschitz(&self) -> Option<Rat> {
        match self {
            CadlagDensity::Step(_) => None,
            CadlagDensity::Ramp(r) => Some(r.b.abs()),
            CadlagDensity::Parabola(p) => {
                // |f'| peaks at the junctions: 2β (T/2 - t1)
                let c = &p.t_end / rint(2);
                Some(rint(2) * &p.curvature * (&c - &p.inner_left))
            }
            CadlagDensity::TwoLevelRamp(t) => {
                Some((&t.c2 - &t.c1).abs() / (&t.tb - &t.ta))
            }
        }
    }

    /// Breakpoints any mesh must contain.
    fn forced_breaks(&self) -> Vec<Rat> {
        match self {
            CadlagDensity::Step(f) => f.breaks().to_vec(),
            CadlagDensity::Ramp(r) => vec![zero(), r.t_end.clone()],
            CadlagDensity::Parabola(p) => vec![
                zero(),
                p.inner_left.clone(),
                p.t_end.clone() / rint(2),
                p.inner_right(),
                p.t_end.clone(),
            ],
            CadlagDensity::TwoLevelRamp(t) => {
                vec![zero(), t.ta.clone(), t.tb.clone(), t.t_end.clone()]
            }
        }
    }

    /// Exact infimum over `[p, q]`. All presets are monotone or concave
    /// between forced breakpoints, so endpoint and junction values settle it.
    pub fn cell_min(&self, p: &Rat, q: &Rat) -> Result<Rat> {
        if let CadlagDensity::Step(f) = self {
            let mut best: Option<Rat> = None;
            for (i, v) in f.values().iter().enumerate() {
                if &f.breaks()[i + 1] > p && &f.breaks()[i] < q {
                    best = Some(match best {
                        None => v.clone(),
                        Some(b) => std::cmp::min(b, v.clone()),
                    });
                }
            }
            return best.ok_or_else(|| Error::Argument("empty cell".into()));
        }
        let mut candidates = vec![p.clone(), q.clone()];
        for fb in self.forced_breaks() {
            if &fb > p && &fb < q {
                candidates.push(fb);
            }
        }
        let mut best = self.eval(&candidates[0])?;
        for cand in &candidates[1..] {
            best = std::cmp::min(best, self.eval(cand)?);
        }
        Ok(best)
    }

    /// Exact supremum over `[p, q]`.
    pub fn cell_max(&self, p: &Rat, q: &Rat) -> Result<Rat> {
        if let CadlagDensity::Step(f) = self {
            let mut best: Option<Rat> = None;
            for (i, v) in f.values().iter().enumerate() {
                if &f.breaks()[i + 1] > p && &f.breaks()[i] < q {
                    best = Some(match best {
                        None => v.clone(),
                        Some(b) => std::cmp::max(b, v.clone()),
                    });
                }
            }
            return best.ok_or_else(|| Error::Argument("empty cell".into()));
        }
        let mut candidates = vec![p.clone(), q.clone()];
        for fb in self.forced_breaks() {
            if &fb > p && &fb < q {
                candidates.push(fb);
            }
        }
        let mut best = self.eval(&candidates[0])?;
        for cand in &candidates[1..] {
            best = std::cmp::max(best, self.eval(cand)?);
        }
        Ok(best)
    }

    pub fn integral(&self) -> Rat {
        match self {
            CadlagDensity::Step(f) => f.integral(),
            CadlagDensity::Ramp(r) => {
                &r.a * &r.t_end + &r.b * &r.t_end * &r.t_end / rint(2)
            }
            CadlagDensity::Parabola(p) => {
                let flats = p.flat_value() * rint(2) * &p.inner_left;
                flats + p.parabola_integral(&p.inner_left, &p.inner_right())
            }
            CadlagDensity::TwoLevelRamp(t) => {
                &t.c1 * &t.ta
                    + (&t.c1 + &t.c2) / rint(2) * (&t.tb - &t.ta)
                    + &t.c2 * (&t.t_end - &t.tb)
            }
        }
    }

    pub fn total_variation(&self) -> Rat {
        match self {
            CadlagDensity::Step(f) => total_variation(f),
            CadlagDensity::Ramp(r) => r.b.abs() * &r.t_end,
            CadlagDensity::Parabola(p) => rint(2) * (&p.peak - p.flat_value()),
            CadlagDensity::TwoLevelRamp(t) => (&t.c2 - &t.c1).abs(),
        }
    }

    pub fn inf(&self) -> Rat {
        self.cell_min(&zero(), self.t_end()).expect("nonempty window")
    }

    pub fn sup(&self) -> Rat {
        self.cell_max(&zero(), self.t_end()).expect("nonempty window")
    }

    pub fn first_value(&self) -> Rat {
        self.eval(&zero()).expect("0 is in range")
    }

    pub fn last_value(&self) -> Rat {
        match self {
            CadlagDensity::Step(f) => f.last_value().clone(),
            other => other.eval(other.t_end()).expect("T is in range"),
        }
    }
}

/// Admissibility of a candidate density, from analytic quantities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CadlagReport {
    pub tv: Rat,
    pub f0plus: Rat,
    pub ftminus: Rat,
    pub inf_value: Rat,
    pub integral: Rat,
    pub passes_a: bool,
    pub passes_b: bool,
    pub passes_c: bool,
}

impl CadlagReport {
    pub fn admissible(&self) -> bool {
        self.passes_a && self.passes_b && self.passes_c
    }
}

pub fn validate_cadlag(f: &CadlagDensity) -> CadlagReport {
    let tv = f.total_variation();
    let f0plus = f.first_value();
    let ftminus = f.last_value();
    let inf_value = f.inf();
    let integral = f.integral();
    let is_uniform = match f {
        CadlagDensity::Step(s) => s.piece_count() == 1 && s.values()[0] == one() / s.t_end(),
        _ => false,
    };
    CadlagReport {
        passes_a: tv <= &f0plus + &ftminus,
        passes_b: inf_value > zero(),
        passes_c: is_uniform || integral < one(),
        tv,
        f0plus,
        ftminus,
        inf_value,
        integral,
    }
}

/// A mesh certified to keep the oscillation of the density within
/// `1/(nT)` per cell, unless the cell cap bound it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mesh {
    pub points: Vec<Rat>,
    pub cap_bound: bool,
}

impl Mesh {
    pub fn cell_count(&self) -> usize {
        self.points.len() - 1
    }
}

/// Builds the quantization mesh for level `n` with the default cell cap.
pub fn mesh_for(f: &CadlagDensity, n: u64) -> Result<Mesh> {
    mesh_for_capped(f, n, DEFAULT_MESH_CAP)
}

pub fn mesh_for_capped(f: &CadlagDensity, n: u64, cap: usize) -> Result<Mesh> {
    if n < 1 {
        return Err(Error::Argument("quantization level must be at least 1".into()));
    }
    let t_end = f.t_end().clone();
    let mut forced = f.forced_breaks();
    forced.sort();
    forced.dedup();
    let lipschitz = match f.lipschitz() {
        None => {
            // step density: its own breakpoints have zero oscillation
            return Ok(Mesh { points: forced, cap_bound: false });
        }
        Some(l) => l,
    };
    if lipschitz.is_zero() {
        return Ok(Mesh { points: forced, cap_bound: false });
    }
    let target_osc = one() / (rint(n as i64) * &t_end);
    let width = &target_osc / &lipschitz;
    let mut ideal: Vec<u64> = Vec::with_capacity(forced.len() - 1);
    let mut total: u64 = 0;
    for w in forced.windows(2) {
        let span = &w[1] - &w[0];
        let parts = ceil_u64(&(&span / &width))?.max(1);
        ideal.push(parts);
        total += parts;
    }
    let cap_bound = total as usize > cap;
    let scale = if cap_bound {
        cap as f64 / total as f64
    } else {
        1.0
    };
    let mut points: Vec<Rat> = Vec::new();
    for (w, parts) in forced.windows(2).zip(&ideal) {
        let parts = if cap_bound {
            (((*parts as f64) * scale).floor() as u64).max(1)
        } else {
            *parts
        };
        let span = &w[1] - &w[0];
        for j in 0..parts {
            points.push(&w[0] + &span * rat(j as i64, parts as i64));
        }
    }
    points.push(t_end);
    points.sort();
    points.dedup();
    Ok(Mesh { points, cap_bound })
}

/// Result of quantizing a candidate density at level `n`: the floor
/// quantization `f_tilde`, the lifted grid density `f_n = f_tilde +
/// 1/(nT)` whose values sit on the `1/(knT)` grid, and the period factor
/// `H = k n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantization {
    pub f_tilde: StepDensity,
    pub f_n: StepDensity,
    pub period_factor: Rat,
    pub cells: usize,
    pub cap_bound: bool,
}

/// Quantizes `f` at level `n`, verifying the sandwich
/// `f - 2/(nT) <= f_tilde <= f` and the variation bound
/// `TV(f_tilde) <= TV(f) + 1/(nT)` exactly.
pub fn quantize(f: &CadlagDensity, n: u64) -> Result<Quantization> {
    let report = validate_cadlag(f);
    if !report.passes_b {
        return Err(Error::Argument(
            "density is not bounded away from zero; quantization would hit 0".into(),
        ));
    }
    let mesh = mesh_for(f, n)?;
    let k = mesh.cell_count();
    let t_end = f.t_end().clone();
    let n_rat = rint(n as i64);
    let grid = one() / (rint(k as i64) * &n_rat * &t_end);
    let lift = one() / (&n_rat * &t_end);

    let mut tilde_values = Vec::with_capacity(k);
    for w in mesh.points.windows(2) {
        let inf = f.cell_min(&w[0], &w[1])?;
        let steps = (&inf / &grid).floor();
        tilde_values.push(&grid * steps);
    }
    let lifted_values: Vec<Rat> = tilde_values.iter().map(|v| v + &lift).collect();
    let f_tilde = StepDensity::new(mesh.points.clone(), tilde_values)?;
    let f_n = StepDensity::new(mesh.points.clone(), lifted_values)?;
    // the constructors merge equal neighbors, so recheck against the mesh
    let two_lift = rint(2) * &lift;
    for w in mesh.points.windows(2) {
        let cell_max = f.cell_max(&w[0], &w[1])?;
        let cell_min = f.cell_min(&w[0], &w[1])?;
        let tilde = f_tilde.value_at(&w[0])?;
        if tilde > &cell_min {
            return Err(Error::Internal("floor quantization exceeds the density".into()));
        }
        if &cell_max - tilde > two_lift {
            let hint = if mesh.cap_bound {
                " (mesh cap bound; oscillation guarantee not certified)"
            } else {
                ""
            };
            return Err(Error::Internal(format!(
                "sandwich bound violated on cell [{}, {}]{hint}",
                w[0], w[1]
            )));
        }
    }
    let tv_bound = f.total_variation() + &lift;
    if total_variation(&f_tilde) > tv_bound {
        return Err(Error::Internal("variation bound violated by quantization".into()));
    }
    Ok(Quantization {
        f_tilde,
        f_n,
        period_factor: rint((k as u64 * n) as i64),
        cells: k,
        cap_bound: mesh.cap_bound,
    })
}

/// Exact sup distance between a step density and a candidate density,
/// on the refinement of both breakpoint sets.
pub fn sup_distance_to_target(step: &StepDensity, target: &CadlagDensity) -> Result<Rat> {
    let mut breaks = step.breaks().to_vec();
    breaks.extend(target.forced_breaks());
    breaks.sort();
    breaks.dedup();
    let mut worst = zero();
    for w in breaks.windows(2) {
        let v = step.value_at(&w[0])?;
        let lo = target.cell_min(&w[0], &w[1])?;
        let hi = target.cell_max(&w[0], &w[1])?;
        worst = std::cmp::max(worst, std::cmp::max((v - lo).abs(), (v - hi).abs()));
    }
    Ok(worst)
}

/// L1 distance between a step density and a candidate density. Exact for
/// step and piecewise-linear targets; for the parabola target, cells where
/// the difference changes sign contribute an upper bound instead, and the
/// `exact` flag reports which case occurred.
pub fn l1_distance_to_target(step: &StepDensity, target: &CadlagDensity) -> Result<(Rat, bool)> {
    if let CadlagDensity::Step(t) = target {
        return Ok((step.l1_distance(t)?, true));
    }
    let mut breaks = step.breaks().to_vec();
    breaks.extend(target.forced_breaks());
    breaks.sort();
    breaks.dedup();
    let mut acc = zero();
    let mut exact = true;
    for w in breaks.windows(2) {
        let (p, q) = (&w[0], &w[1]);
        let v = step.value_at(p)?.clone();
        let lo = target.cell_min(p, q)?;
        let hi = target.cell_max(p, q)?;
        let width = q - p;
        let cell_mass = match target {
            CadlagDensity::Ramp(r) => {
                // f affine on the cell
                linear_abs_integral(&v, &(&r.a + &r.b * p), &(&r.a + &r.b * q), &width)
            }
            CadlagDensity::TwoLevelRamp(_) => {
                let fp = target.eval(p)?;
                let fq = target.eval(q)?;
                linear_abs_integral(&v, &fp, &fq, &width)
            }
            CadlagDensity::Parabola(pa) => {
                if v >= hi || v <= lo {
                    // sign-constant cell: |∫(v - f)| is exact
                    let int_f = if q <= &pa.inner_left || p >= &pa.inner_right() {
                        pa.flat_value() * &width
                    } else {
                        pa.parabola_integral(p, q)
                    };
                    (&v * &width - int_f).abs()
                } else {
                    exact = false;
                    std::cmp::max((&v - &lo).abs(), (&v - &hi).abs()) * &width
                }
            }
            CadlagDensity::Step(_) => unreachable!(),
        };
        acc += cell_mass;
    }
    Ok((acc, exact))
}

/// Exact `∫ |v - line| ` over a cell where the target is affine from `fp`
/// to `fq` across `width`.
fn linear_abs_integral(v: &Rat, fp: &Rat, fq: &Rat, width: &Rat) -> Rat {
    let dp = v - fp;
    let dq = v - fq;
    if (!dp.is_negative() && !dq.is_negative()) || (!dp.is_positive() && !dq.is_positive()) {
        // no sign change: trapezoid of |differences|
        (dp.abs() + dq.abs()) / rint(2) * width
    } else {
        // one crossing: two triangles
        let total = dp.abs() + dq.abs();
        (&dp * &dp + &dq * &dq) / (rint(2) * total) * width
    }
}

/// One row of the convergence report for a quantization level.
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub n: u64,
    pub cells: usize,
    pub period_factor: Rat,
    pub block_count: usize,
    pub spacing: Rat,
    pub sup_dist: Rat,
    pub l1_dist: Rat,
    pub l1_exact: bool,
    pub spacing_lower: Rat,
    pub spacing_upper: Rat,
    pub spacing_in_interval: bool,
    pub max_lefts: usize,
    pub max_rights: usize,
    pub cap_bound: bool,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

/// Runs the full pipeline (quantize, peel, assign, build, exact law) for
/// each level in `n_list` and measures the realized law against the
/// target. The realized interior must equal `f_n` exactly in repaired
/// mode; the distances quoted are therefore `f_n` against the target.
pub fn realize_and_compare(
    f: &CadlagDensity,
    n_list: &[u64],
    mode: FillMode,
) -> Result<ConvergenceReport> {
    let report = validate_cadlag(f);
    if !report.admissible() {
        return Err(Error::Argument(
            "target density fails the admissibility conditions".into(),
        ));
    }
    let spacing_lower = (one() - f.integral()) / (rint(4) * f.sup());
    let spacing_upper = rint(2) / f.inf();
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let q = quantize(f, n)?;
        if q.period_factor <= one() {
            return Err(Error::Argument(format!(
                "level n = {n} yields period factor {} <= 1; use a larger n",
                q.period_factor
            )));
        }
        let collection = peel_blocks(&q.f_n, &q.period_factor)?;
        let feas = feasibility(&collection);
        if !feas.feasible() {
            return Err(Error::Infeasible(format!(
                "level n = {n}: quantized density is not realizable ({feas:?})"
            )));
        }
        let (path, layout) = build_from_collection(&collection, mode)?;
        let law = exact_law(&path, f.t_end())?;
        if mode == FillMode::Repaired && law.interior != q.f_n {
            return Err(Error::Internal(format!(
                "level n = {n}: realized interior differs from the quantized density"
            )));
        }
        let sup_dist = sup_distance_to_target(&law.interior, f)?;
        let (l1_dist, l1_exact) = l1_distance_to_target(&law.interior, f)?;
        let spacing = collection.spacing();
        let spacing_in_interval = spacing >= spacing_lower && spacing <= spacing_upper;
        rows.push(ConvergenceRow {
            n,
            cells: q.cells,
            period_factor: q.period_factor.clone(),
            block_count: collection.block_count(),
            spacing,
            sup_dist,
            l1_dist,
            l1_exact,
            spacing_lower: spacing_lower.clone(),
            spacing_upper: spacing_upper.clone(),
            spacing_in_interval,
            max_lefts: layout.iter().map(|c| c.lefts.len()).max().unwrap_or(0),
            max_rights: layout.iter().map(|c| c.rights.len()).max().unwrap_or(0),
            cap_bound: q.cap_bound,
        });
    }
    Ok(ConvergenceReport { rows })
}

/// Canonical preset instances used across tests and the CLI.
pub mod presets {
    use super::*;

    /// Ramp `1/4 + (3/4) t` on `(0, 1)`: admissible, mass `5/8`.
    pub fn ramp() -> CadlagDensity {
        CadlagDensity::Ramp(RampDensity {
            t_end: rint(1),
            a: rat(1, 4),
            b: rat(3, 4),
        })
    }

    /// Flat `1/2` outside `[1/4, 3/4]`, parabola peaking at `5/8`.
    pub fn parabola() -> CadlagDensity {
        CadlagDensity::Parabola(ParabolaDensity {
            t_end: rint(1),
            peak: rat(5, 8),
            curvature: rint(2),
            inner_left: rat(1, 4),
        })
    }

    /// Level `1/4`, ramp on `[1/4, 1/2]`, level `3/4`.
    pub fn two_level_ramp() -> CadlagDensity {
        CadlagDensity::TwoLevelRamp(TwoLevelRampDensity {
            t_end: rint(1),
            c1: rat(1, 4),
            c2: rat(3, 4),
            ta: rat(1, 4),
            tb: rat(1, 2),
        })
    }
}
