//! Exact and brute-force laws of the leftmost supremum location of the
//! shift process `X(t) = x(t - U)` over a window `[0, T]`, where `x` is a
//! periodic piecewise-linear path and `U` is uniform over one period.
//!
//! Writing `s` for the window start in path coordinates (`s` is uniform on
//! `[0, P)` exactly when `U` is), the supremum of the window `[s, s + T]`
//! is attained either at a local maximum of `x` strictly inside the window
//! or at one of the two window endpoints. Each local maximum contributes a
//! constant value with `τ = q - s`; the endpoints contribute the
//! piecewise-linear values `x(s)` and `x(s + T)` with `τ = 0` and `τ = T`.
//! The law is read off the exact upper envelope of these finitely many
//! piecewise-linear functions of `s`, with leftmost tie-breaking.

use num::{BigInt, Signed};
use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::assembly::PiecewiseLinearPath;
use crate::blocks::BlockCollection;
use crate::density::StepDensity;
use crate::error::{Error, Result};
use crate::rat::{one, rint, to_f64, zero, Rat};

/// Number of histogram bins used by the brute-force grid law.
pub const GRID_LAW_BINS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Exact upper-envelope sweep.
    Envelope,
    /// Deterministic equispaced-shift brute force on a mesh.
    Grid,
    /// Random sampling.
    MonteCarlo,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Envelope => "envelope",
            Provenance::Grid => "grid",
            Provenance::MonteCarlo => "montecarlo",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "envelope" => Ok(Provenance::Envelope),
            "grid" => Ok(Provenance::Grid),
            "montecarlo" => Ok(Provenance::MonteCarlo),
            other => Err(Error::Structural(format!("unknown provenance {other:?}"))),
        }
    }
}

/// Law of the leftmost supremum location on `[0, T]`: atoms at the two
/// endpoints plus a piecewise-constant interior density.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupLocationLaw {
    pub t_end: Rat,
    pub atom0: Rat,
    pub atom_t: Rat,
    pub interior: StepDensity,
    pub provenance: Provenance,
}

impl SupLocationLaw {
    pub fn total_mass(&self) -> Rat {
        &self.atom0 + &self.atom_t + self.interior.integral()
    }
}

/// Positive-measure tie intervals found during the sweep, already resolved
/// to the leftmost candidate.
#[derive(Debug, Clone, Default)]
pub struct SweepDiagnostics {
    pub tie_intervals: Vec<(Rat, Rat)>,
}

#[derive(Clone)]
enum CandKind {
    LeftEnd,
    /// Local maximum at this absolute path position (possibly beyond one
    /// period for the wrapped copy).
    Interior(Rat),
    RightEnd,
}

impl CandKind {
    /// Leftmost-τ priority: the left endpoint beats everything, interior
    /// maxima order by absolute position, the right endpoint loses ties.
    fn priority(&self) -> (u8, Rat) {
        match self {
            CandKind::LeftEnd => (0, zero()),
            CandKind::Interior(q) => (1, q.clone()),
            CandKind::RightEnd => (2, zero()),
        }
    }
}

struct Candidate {
    /// Value as a function of the window start: `c0 + c1 * s`.
    c0: Rat,
    c1: Rat,
    kind: CandKind,
}

/// Exact law of the leftmost supremum location for `window <= period`.
pub fn exact_law(path: &PiecewiseLinearPath, t_end: &Rat) -> Result<SupLocationLaw> {
    exact_law_with_diagnostics(path, t_end).map(|(law, _)| law)
}

/// As [`exact_law`], also reporting positive-measure envelope ties.
pub fn exact_law_with_diagnostics(
    path: &PiecewiseLinearPath,
    t_end: &Rat,
) -> Result<(SupLocationLaw, SweepDiagnostics)> {
    if t_end <= &zero() {
        return Err(Error::Argument("window length must be positive".into()));
    }
    let period = path.period().clone();
    if t_end > &period {
        return Err(Error::Argument(format!(
            "window {t_end} exceeds the period {period}"
        )));
    }

    let maxima = path.local_maxima();
    // interior candidates: (absolute position, value, active s-interval)
    let mut interiors: Vec<(Rat, Rat, Rat, Rat)> = Vec::new();
    for (q, y) in &maxima {
        for k in 0..=1 {
            let q_abs = q + &period * rint(k);
            let lo = std::cmp::max(&q_abs - t_end, zero());
            let hi = std::cmp::min(q_abs.clone(), period.clone());
            if lo < hi {
                interiors.push((q_abs, y.clone(), lo, hi));
            }
        }
    }

    // structural breakpoints of the sweep
    let mut breaks: Vec<Rat> = vec![zero(), period.clone()];
    for k in path.knots() {
        breaks.push(k.pos.clone());
        let mut shifted = (&k.pos - t_end) % &period;
        if shifted.is_negative() {
            shifted += &period;
        }
        if shifted > zero() && shifted < period {
            breaks.push(shifted);
        }
    }
    for (_, _, lo, hi) in &interiors {
        if lo > &zero() {
            breaks.push(lo.clone());
        }
        if hi < &period {
            breaks.push(hi.clone());
        }
    }
    breaks.sort();
    breaks.dedup();

    let segments = path.segments();
    let seg_affine = |t: &Rat| -> (Rat, Rat) {
        // affine (value0, slope) of the segment containing t in [0, P)
        let idx = segments.partition_point(|(a, _, _, _)| a <= t);
        let (a, ya, b, yb) = &segments[idx - 1];
        let slope = (yb - ya) / (b - a);
        (ya - &slope * a, slope)
    };

    let inv_period = one() / &period;
    let mut atom0 = zero();
    let mut atom_t = zero();
    // interior density accumulated as +/- events at interval endpoints
    let mut events: BTreeMap<Rat, Rat> = BTreeMap::new();
    let mut diagnostics = SweepDiagnostics::default();

    for w in breaks.windows(2) {
        let (alpha, beta) = (&w[0], &w[1]);
        let mid = (alpha + beta) / rint(2);

        let mut cands: Vec<Candidate> = Vec::new();
        for (q_abs, y, lo, hi) in &interiors {
            if lo <= alpha && beta <= hi {
                cands.push(Candidate {
                    c0: y.clone(),
                    c1: zero(),
                    kind: CandKind::Interior(q_abs.clone()),
                });
            }
        }
        {
            // left endpoint: value x(s)
            let (c0, c1) = seg_affine(&mid);
            cands.push(Candidate { c0, c1, kind: CandKind::LeftEnd });
        }
        {
            // right endpoint: value x((s + T) mod P); the reduction offset
            // is constant on the piece because s = P - T is a breakpoint
            let mut shifted_mid = (&mid + t_end) % &period;
            if shifted_mid.is_negative() {
                shifted_mid += &period;
            }
            let offset = &shifted_mid - &mid; // T - kP on this piece
            let (c0, c1) = seg_affine(&shifted_mid);
            cands.push(Candidate { c0: c0 + &c1 * &offset, c1, kind: CandKind::RightEnd });
        }

        // crossings subdivide the piece so that one candidate (up to exact
        // duplicates) dominates each open sub-piece
        let mut cuts: Vec<Rat> = vec![alpha.clone(), beta.clone()];
        for i in 0..cands.len() {
            for j in (i + 1)..cands.len() {
                if cands[i].c1 != cands[j].c1 {
                    let s_star = (&cands[j].c0 - &cands[i].c0) / (&cands[i].c1 - &cands[j].c1);
                    if &s_star > alpha && &s_star < beta {
                        cuts.push(s_star);
                    }
                }
            }
        }
        cuts.sort();
        cuts.dedup();

        for sub in cuts.windows(2) {
            let (g, h) = (&sub[0], &sub[1]);
            let m = (g + h) / rint(2);
            let mut best_val: Option<Rat> = None;
            for c in &cands {
                let v = &c.c0 + &c.c1 * &m;
                if best_val.as_ref().map_or(true, |b| &v > b) {
                    best_val = Some(v);
                }
            }
            let best_val = best_val.expect("candidate set never empty");
            let mut winners: Vec<&Candidate> = cands
                .iter()
                .filter(|c| &c.c0 + &c.c1 * &m == best_val)
                .collect();
            winners.sort_by(|a, b| a.kind.priority().cmp(&b.kind.priority()));
            if winners.len() > 1 {
                diagnostics.tie_intervals.push((g.clone(), h.clone()));
            }
            let len = h - g;
            match &winners[0].kind {
                CandKind::LeftEnd => atom0 += &len * &inv_period,
                CandKind::RightEnd => atom_t += &len * &inv_period,
                CandKind::Interior(q_abs) => {
                    let tau_lo = std::cmp::max(q_abs - h, zero());
                    let tau_hi = std::cmp::min(q_abs - g, t_end.clone());
                    if tau_lo < tau_hi {
                        *events.entry(tau_lo).or_insert_with(zero) += &inv_period;
                        *events.entry(tau_hi).or_insert_with(zero) -= &inv_period;
                    }
                }
            }
        }
    }

    // assemble the interior density from the events
    let mut break_list: Vec<Rat> = vec![zero(), t_end.clone()];
    break_list.extend(events.keys().cloned());
    break_list.sort();
    break_list.dedup();
    break_list.retain(|b| b >= &zero() && b <= t_end);
    let mut values: Vec<Rat> = Vec::with_capacity(break_list.len() - 1);
    let mut level = zero();
    let mut key = 0usize;
    let event_vec: Vec<(Rat, Rat)> = events.into_iter().collect();
    for w in break_list.windows(2) {
        while key < event_vec.len() && event_vec[key].0 <= w[0] {
            level += &event_vec[key].1;
            key += 1;
        }
        values.push(level.clone());
    }
    let interior = StepDensity::new(break_list, values)?;

    let law = SupLocationLaw {
        t_end: t_end.clone(),
        atom0,
        atom_t,
        interior,
        provenance: Provenance::Envelope,
    };
    if law.total_mass() != one() {
        return Err(Error::Internal(format!(
            "law mass {} differs from 1",
            law.total_mass()
        )));
    }
    Ok((law, diagnostics))
}

/// Checks the endpoint-mass identity `atom0 + atomT = m·d / (HT)` of a law
/// produced from the path built on `c` in repaired mode.
pub fn atom_identity_check(law: &SupLocationLaw, c: &BlockCollection) -> bool {
    let expected =
        rint(c.block_count() as i64) * c.spacing() / c.period();
    &law.atom0 + &law.atom_t == expected
}

/// Exact rational distances between two laws on the same window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawDistance {
    pub atom0_diff: Rat,
    pub atom_t_diff: Rat,
    pub interior_l1: Rat,
}

pub fn law_distance(a: &SupLocationLaw, b: &SupLocationLaw) -> Result<LawDistance> {
    if a.t_end != b.t_end {
        return Err(Error::Argument("laws live on different windows".into()));
    }
    Ok(LawDistance {
        atom0_diff: (&a.atom0 - &b.atom0).abs(),
        atom_t_diff: (&a.atom_t - &b.atom_t).abs(),
        interior_l1: a.interior.l1_distance(&b.interior)?,
    })
}

/// Largest discrepancy between the piece values of a binned law and the
/// piece-averaged exact density.
pub fn max_bin_mean_discrepancy(
    exact: &SupLocationLaw,
    binned: &SupLocationLaw,
) -> Result<Rat> {
    if exact.t_end != binned.t_end {
        return Err(Error::Argument("laws live on different windows".into()));
    }
    let mut worst = zero();
    let breaks = binned.interior.breaks();
    for (i, v) in binned.interior.values().iter().enumerate() {
        let (a, b) = (&breaks[i], &breaks[i + 1]);
        let mean = exact.interior.integral_over(a, b) / (b - a);
        worst = std::cmp::max(worst, (v - mean).abs());
    }
    Ok(worst)
}

/// Path data flattened to floats for the brute-force and Monte Carlo
/// layers. Knots are tripled so any window inside `[0, 2P)` lies within
/// the extended array.
pub(crate) struct FloatPath {
    pub pos: Vec<f64>,
    pub val: Vec<f64>,
    pub period: f64,
    pub maxima: Vec<(f64, f64)>,
}

impl FloatPath {
    pub fn new(path: &PiecewiseLinearPath) -> Self {
        let period = to_f64(path.period());
        let base_pos: Vec<f64> = path.knots().iter().map(|k| to_f64(&k.pos)).collect();
        let base_val: Vec<f64> = path.knots().iter().map(|k| to_f64(&k.val)).collect();
        let mut pos = Vec::with_capacity(base_pos.len() * 3 + 1);
        let mut val = Vec::with_capacity(base_val.len() * 3 + 1);
        for copy in 0..3 {
            let off = period * copy as f64;
            for (p, v) in base_pos.iter().zip(&base_val) {
                pos.push(p + off);
                val.push(*v);
            }
        }
        pos.push(3.0 * period);
        val.push(base_val[0]);
        let maxima = path
            .local_maxima()
            .iter()
            .map(|(q, y)| (to_f64(q), to_f64(y)))
            .collect();
        FloatPath { pos, val, period, maxima }
    }

    /// Segment index whose start position is the last one `<= t`.
    pub fn segment_at(&self, t: f64) -> usize {
        let idx = self.pos.partition_point(|p| *p <= t);
        idx.saturating_sub(1).min(self.pos.len() - 2)
    }

    pub fn eval_in_segment(&self, t: f64, seg: usize) -> f64 {
        let (a, b) = (self.pos[seg], self.pos[seg + 1]);
        let (ya, yb) = (self.val[seg], self.val[seg + 1]);
        ya + (yb - ya) * (t - a) / (b - a)
    }

    /// Advances `seg` until it contains `t`, then evaluates.
    pub fn eval_forward(&self, t: f64, seg: &mut usize) -> f64 {
        while *seg + 2 < self.pos.len() && self.pos[*seg + 1] <= t {
            *seg += 1;
        }
        self.eval_in_segment(t, *seg)
    }
}

/// Brute-force law: `n_shift` equispaced window starts; in each window the
/// path is evaluated on an `n_grid`-point mesh plus every knot inside the
/// window, and the leftmost argmax is recorded. Exact endpoint wins become
/// atom estimates; interior wins land in [`GRID_LAW_BINS`] uniform bins.
///
/// The result is the exact empirical measure of this deterministic
/// procedure, so all masses are rationals with denominator `n_shift`.
pub fn grid_law(
    path: &PiecewiseLinearPath,
    t_end: &Rat,
    n_grid: usize,
    n_shift: usize,
) -> Result<SupLocationLaw> {
    if n_grid < 1 || n_shift < 1 {
        return Err(Error::Argument("resolutions must be at least 1".into()));
    }
    if t_end > path.period() {
        return Err(Error::Argument("window exceeds the period".into()));
    }
    let fp = FloatPath::new(path);
    let t = to_f64(t_end);
    let p = fp.period;
    let ds = p / n_shift as f64;
    let dt = t / n_grid as f64;

    let knot_pos: Vec<f64> = fp.pos.clone();

    let (atom0_n, atom_t_n, bins) = (0..n_shift)
        .into_par_iter()
        .fold(
            || (0u64, 0u64, vec![0u64; GRID_LAW_BINS]),
            |(mut a0, mut at, mut bins), i| {
                let s = i as f64 * ds;
                let end = s + t;
                let mut seg = fp.segment_at(s);
                // first knot strictly inside the window
                let mut ki = knot_pos.partition_point(|kp| *kp <= s);
                let mut best_val = f64::NEG_INFINITY;
                let mut best_pos = s;
                let mut best_is_mesh_end = (false, false);
                for j in 0..=n_grid {
                    let tm = if j == n_grid { end } else { s + j as f64 * dt };
                    // interleave knots that precede this mesh point
                    while ki < knot_pos.len() && knot_pos[ki] < tm {
                        let kp = knot_pos[ki];
                        if kp < end {
                            let v = fp.eval_forward(kp, &mut seg);
                            if v > best_val {
                                best_val = v;
                                best_pos = kp;
                                best_is_mesh_end = (false, false);
                            }
                        }
                        ki += 1;
                    }
                    let v = fp.eval_forward(tm, &mut seg);
                    if v > best_val {
                        best_val = v;
                        best_pos = tm;
                        best_is_mesh_end = (j == 0, j == n_grid);
                    }
                }
                if best_is_mesh_end.0 {
                    a0 += 1;
                } else if best_is_mesh_end.1 {
                    at += 1;
                } else {
                    let tau = best_pos - s;
                    let bin = ((tau / t) * GRID_LAW_BINS as f64) as usize;
                    bins[bin.min(GRID_LAW_BINS - 1)] += 1;
                }
                (a0, at, bins)
            },
        )
        .reduce(
            || (0u64, 0u64, vec![0u64; GRID_LAW_BINS]),
            |(a0a, ata, mut ba), (a0b, atb, bb)| {
                for (x, y) in ba.iter_mut().zip(bb) {
                    *x += y;
                }
                (a0a + a0b, ata + atb, ba)
            },
        );

    let n = rint(n_shift as i64);
    let bin_width = t_end / rint(GRID_LAW_BINS as i64);
    let mut breaks = Vec::with_capacity(GRID_LAW_BINS + 1);
    let mut values = Vec::with_capacity(GRID_LAW_BINS);
    for j in 0..=GRID_LAW_BINS {
        breaks.push(&bin_width * rint(j as i64));
    }
    for c in &bins {
        let mass = Rat::from_integer(BigInt::from(*c)) / &n;
        values.push(mass / &bin_width);
    }
    let interior = StepDensity::new(breaks, values)?;
    Ok(SupLocationLaw {
        t_end: t_end.clone(),
        atom0: Rat::from_integer(BigInt::from(atom0_n)) / &n,
        atom_t: Rat::from_integer(BigInt::from(atom_t_n)) / &n,
        interior,
        provenance: Provenance::Grid,
    })
}

/// Leftmost argmax of one window, computed from the candidate set rather
/// than a mesh: all local maxima inside the window plus the endpoints.
/// Returns `(tau, endpoint_kind)` where the kind tells whether the win was
/// at `τ = 0`, interior, or `τ = T`.
pub(crate) fn window_argmax_f64(fp: &FloatPath, s: f64, t: f64) -> (f64, i8) {
    let end = s + t;
    let mut best_val = f64::NEG_INFINITY;
    let mut best_tau = 0.0;
    let mut best_kind = 0i8;
    // left endpoint first: it wins ties by leftmost preference
    let mut seg = fp.segment_at(s);
    let v = fp.eval_in_segment(s, seg);
    if v > best_val {
        best_val = v;
        best_tau = 0.0;
        best_kind = -1;
    }
    // interior maxima in ascending position
    for copy in 0..2 {
        let off = fp.period * copy as f64;
        for (q, y) in &fp.maxima {
            let qa = q + off;
            if qa > s && qa < end && *y > best_val {
                best_val = *y;
                best_tau = qa - s;
                best_kind = 0;
            }
        }
    }
    let v = fp.eval_forward(end, &mut seg);
    if v > best_val {
        best_tau = t;
        best_kind = 1;
    }
    (best_tau, best_kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{build_from_collection, FillMode};
    use crate::blocks::{decompose, peel_blocks, recompose, Block};
    use crate::density::{check_universal_bound, StepDensity};
    use crate::rat::rat;

    fn e1() -> (PiecewiseLinearPath, BlockCollection) {
        let f = StepDensity::constant(&rint(1), &rat(1, 2)).unwrap();
        let c = peel_blocks(&f, &rint(2)).unwrap();
        let (path, _) = build_from_collection(&c, FillMode::Literal).unwrap();
        (path, c)
    }

    fn e3(mode: FillMode) -> (PiecewiseLinearPath, BlockCollection) {
        let f = StepDensity::new(
            vec![zero(), rat(1, 2), rint(1)],
            vec![rint(1), rat(1, 2)],
        )
        .unwrap();
        let c = peel_blocks(&f, &rint(2)).unwrap();
        let (path, _) = build_from_collection(&c, mode).unwrap();
        (path, c)
    }

    #[test]
    fn e1_exact_law() {
        let (path, c) = e1();
        let (law, diag) = exact_law_with_diagnostics(&path, &rint(1)).unwrap();
        assert_eq!(law.atom0, rat(1, 4));
        assert_eq!(law.atom_t, rat(1, 4));
        assert_eq!(
            law.interior,
            StepDensity::constant(&rint(1), &rat(1, 2)).unwrap()
        );
        assert!(diag.tie_intervals.is_empty());
        assert!(atom_identity_check(&law, &c));
        assert!(check_universal_bound(&law.interior));
    }

    #[test]
    fn e3_repaired_exact_law() {
        let (path, c) = e3(FillMode::Repaired);
        let law = exact_law(&path, &rint(1)).unwrap();
        assert_eq!(law.atom0, rat(1, 8));
        assert_eq!(law.atom_t, rat(1, 8));
        assert_eq!(law.interior, recompose(&c).unwrap());
        assert!(atom_identity_check(&law, &c));
    }

    #[test]
    fn e3_literal_exact_law() {
        let (path, c) = e3(FillMode::Literal);
        let law = exact_law(&path, &rint(1)).unwrap();
        assert_eq!(law.atom0, rat(1, 12));
        assert_eq!(law.atom_t, rat(5, 12));
        assert_eq!(
            law.interior,
            StepDensity::constant(&rint(1), &rat(1, 2)).unwrap()
        );
        // the endpoint mass no longer matches m·d/(HT)
        assert!(!atom_identity_check(&law, &c));
    }

    #[test]
    fn uniform_preset_law() {
        let path = PiecewiseLinearPath::uniform_preset(&rint(1)).unwrap();
        let law = exact_law(&path, &rint(1)).unwrap();
        assert_eq!(law.atom0, zero());
        assert_eq!(law.atom_t, zero());
        assert_eq!(law.interior, StepDensity::uniform(&rint(1)).unwrap());
    }

    #[test]
    fn window_longer_than_period_is_rejected() {
        let (path, _) = e1();
        assert!(exact_law(&path, &rint(3)).is_err());
    }

    #[test]
    fn law_distance_examples() {
        let (lit_path, _) = e3(FillMode::Literal);
        let lit = exact_law(&lit_path, &rint(1)).unwrap();
        let target = SupLocationLaw {
            t_end: rint(1),
            atom0: rat(1, 8),
            atom_t: rat(1, 8),
            interior: StepDensity::new(
                vec![zero(), rat(1, 2), rint(1)],
                vec![rint(1), rat(1, 2)],
            )
            .unwrap(),
            provenance: Provenance::Envelope,
        };
        let d = law_distance(&lit, &target).unwrap();
        assert_eq!(d.atom0_diff, rat(1, 24));
        assert_eq!(d.atom_t_diff, rat(7, 24));
        assert_eq!(d.interior_l1, rat(1, 4));

        let self_d = law_distance(&lit, &lit).unwrap();
        assert_eq!(self_d.interior_l1, zero());
        assert_eq!(self_d.atom0_diff, zero());
    }

    #[test]
    fn grid_law_agrees_with_exact_on_e1() {
        let (path, _) = e1();
        let exact = exact_law(&path, &rint(1)).unwrap();
        let grid = grid_law(&path, &rint(1), 400, 4000).unwrap();
        assert!((&grid.atom0 - &exact.atom0).abs() < rat(1, 100));
        assert!((&grid.atom_t - &exact.atom_t).abs() < rat(1, 100));
        let disc = max_bin_mean_discrepancy(&exact, &grid).unwrap();
        assert!(disc < rat(3, 100), "bin discrepancy {disc}");
    }

    #[test]
    fn grid_law_single_shift_is_a_point_mass() {
        let (path, _) = e1();
        // s = 0: window [0, 1], max x(0) = 2 at the left endpoint
        let law = grid_law(&path, &rint(1), 100, 1).unwrap();
        assert_eq!(law.atom0, one());
        assert_eq!(law.atom_t, zero());
        assert_eq!(law.interior.integral(), zero());
    }

    #[test]
    fn grid_error_shrinks_with_resolution() {
        let (path, _) = e3(FillMode::Repaired);
        let exact = exact_law(&path, &rint(1)).unwrap();
        let t = rint(1);
        let metric = |g: &SupLocationLaw| -> Rat {
            let d = law_distance(g, &exact).unwrap();
            d.atom0_diff + d.atom_t_diff + d.interior_l1
        };
        let coarse = metric(&grid_law(&path, &t, 200, 200).unwrap());
        let fine = metric(&grid_law(&path, &t, 400, 400).unwrap());
        assert!(
            &fine * rint(2) <= coarse,
            "doubling resolution should at least halve the distance: {coarse} -> {fine}"
        );
    }

    #[test]
    fn exact_law_invariant_under_h_change() {
        let f = StepDensity::new(
            vec![zero(), rat(1, 2), rint(1)],
            vec![rint(1), rat(1, 2)],
        )
        .unwrap();
        let c2 = peel_blocks(&f, &rint(2)).unwrap();
        let c4 = peel_blocks(&f, &rint(4)).unwrap();
        let (p2, _) = build_from_collection(&c2, FillMode::Repaired).unwrap();
        let (p4, _) = build_from_collection(&c4, FillMode::Repaired).unwrap();
        let l2 = exact_law(&p2, &rint(1)).unwrap();
        let l4 = exact_law(&p4, &rint(1)).unwrap();
        assert_eq!(l2.atom0, l4.atom0);
        assert_eq!(l2.atom_t, l4.atom_t);
        assert_eq!(l2.interior, l4.interior);
    }

    #[test]
    fn exact_law_invariant_under_rotation() {
        let (path, _) = e3(FillMode::Repaired);
        let law = exact_law(&path, &rint(1)).unwrap();
        for delta in [rat(1, 3), rat(7, 8), rat(3, 2)] {
            let rot = path.rotate(&delta).unwrap();
            let law_rot = exact_law(&rot, &rint(1)).unwrap();
            assert_eq!(law.atom0, law_rot.atom0);
            assert_eq!(law.atom_t, law_rot.atom_t);
            assert_eq!(law.interior, law_rot.interior);
        }
    }

    #[test]
    fn exact_law_invariant_under_component_permutation() {
        let t = rint(1);
        let c = BlockCollection::new(
            rint(1),
            rint(4),
            vec![
                Block::new(zero(), rint(1), &t).unwrap(),
                Block::new(zero(), rint(1), &t).unwrap(),
                Block::new(zero(), rat(1, 2), &t).unwrap(),
                Block::new(rat(1, 4), rat(3, 4), &t).unwrap(),
            ],
        )
        .unwrap();
        let layout = crate::assembly::assign_components(&c).unwrap();
        let mut permuted = layout.clone();
        permuted.reverse();
        let d = c.spacing();
        let p1 = crate::assembly::build_path(&layout, &d, &t, c.period_factor(), FillMode::Repaired)
            .unwrap();
        let p2 =
            crate::assembly::build_path(&permuted, &d, &t, c.period_factor(), FillMode::Repaired)
                .unwrap();
        let l1 = exact_law(&p1, &t).unwrap();
        let l2 = exact_law(&p2, &t).unwrap();
        assert_eq!(l1.atom0, l2.atom0);
        assert_eq!(l1.atom_t, l2.atom_t);
        assert_eq!(l1.interior, l2.interior);
    }

    #[test]
    fn interior_matches_density_for_central_case() {
        let f = StepDensity::new(
            vec![zero(), rat(1, 4), rat(3, 4), rint(1)],
            vec![rat(1, 2), rint(1), rat(1, 2)],
        )
        .unwrap();
        let c = decompose(&f).unwrap();
        let (path, _) = build_from_collection(&c, FillMode::Repaired).unwrap();
        let law = exact_law(&path, &rint(1)).unwrap();
        assert_eq!(law.interior, f);
        assert!(atom_identity_check(&law, &c));
    }
}
