//! Synthesis of the periodic piecewise-linear path whose uniform shift
//! realizes a given block collection, plus the structural audit of the
//! built path.
//!
//! Each component (one base block, at most one central block, some left
//! and right blocks) generates one stretch of the period. The stretch
//! starts and ends at value 2; left blocks put landmark pairs on the way
//! down, a central block puts a plateau triple at value 1/2, right blocks
//! put landmark pairs on the way back up. Gaps between landmarks of equal
//! value are filled with downward tents so the path is nowhere constant.

use num::{Signed, Zero};

use crate::blocks::{Block, BlockCollection, BlockKind};
use crate::error::{Error, Result};
use crate::rat::{one, pow2, rat, rint, zero, Rat};

/// How degenerate components (no central block and blocks on one side
/// only) are filled.
///
/// `Literal` spans the long `d + T` gap with a single linear piece, which
/// erases the one-sided landmarks as local maxima and changes the realized
/// law. `Repaired` traverses the same gap as a `T`-long stay-below span
/// followed by a `d`-long linear rise, keeping every landmark a genuine
/// local maximum. Landmark positions are identical in both modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillMode {
    Literal,
    Repaired,
}

impl FillMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            FillMode::Literal => "literal",
            FillMode::Repaired => "repaired",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(FillMode::Literal),
            "repaired" => Ok(FillMode::Repaired),
            other => Err(Error::Structural(format!("unknown fill mode {other:?}"))),
        }
    }
}

/// One base block plus the central/left/right blocks assigned to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub base: Block,
    pub central: Option<Block>,
    /// Sorted ascending by `v`.
    pub lefts: Vec<Block>,
    /// Sorted ascending by `T - u`.
    pub rights: Vec<Block>,
}

impl Component {
    pub fn block_count(&self) -> usize {
        1 + self.lefts.len() + self.rights.len() + usize::from(self.central.is_some())
    }

    /// Total length of the blocks in the component.
    pub fn total_block_length(&self, t_end: &Rat) -> Rat {
        let mut acc = t_end.clone();
        for b in &self.lefts {
            acc += b.length();
        }
        for b in &self.rights {
            acc += b.length();
        }
        if let Some(c) = &self.central {
            acc += c.length();
        }
        acc
    }

    /// Component length: spacing per block plus total block length.
    pub fn length(&self, d: &Rat, t_end: &Rat) -> Rat {
        d * rint(self.block_count() as i64) + self.total_block_length(t_end)
    }
}

/// Distributes the blocks of a feasible collection over its base blocks:
/// one central per component until exhausted, lefts and rights dealt
/// round-robin in canonical order so per-component counts differ by at
/// most one. The returned layout is ordered deterministically: components
/// with a central block first, then by descending length.
pub fn assign_components(c: &BlockCollection) -> Result<Vec<Component>> {
    let t_end = c.t_end().clone();
    let d = c.spacing();
    let bases: Vec<Block> = c
        .blocks()
        .iter()
        .filter(|b| b.kind == BlockKind::Base)
        .cloned()
        .collect();
    if bases.is_empty() {
        return Err(Error::Infeasible("no base block".into()));
    }
    let b_count = bases.len();
    let mut centrals: Vec<Block> = c
        .blocks()
        .iter()
        .filter(|b| b.kind == BlockKind::Central)
        .cloned()
        .collect();
    if centrals.len() > b_count {
        return Err(Error::Infeasible(
            "more central blocks than base blocks".into(),
        ));
    }
    centrals.sort_by(|a, b| (&a.u, &a.v).cmp(&(&b.u, &b.v)));
    let mut lefts: Vec<Block> = c
        .blocks()
        .iter()
        .filter(|b| b.kind == BlockKind::Left)
        .cloned()
        .collect();
    lefts.sort_by(|a, b| a.v.cmp(&b.v));
    let mut rights: Vec<Block> = c
        .blocks()
        .iter()
        .filter(|b| b.kind == BlockKind::Right)
        .cloned()
        .collect();
    rights.sort_by(|a, b| b.u.cmp(&a.u)); // ascending by T - u

    let mut comps: Vec<Component> = bases
        .into_iter()
        .map(|base| Component {
            base,
            central: None,
            lefts: Vec::new(),
            rights: Vec::new(),
        })
        .collect();
    for (i, cb) in centrals.into_iter().enumerate() {
        comps[i].central = Some(cb);
    }
    for (i, lb) in lefts.into_iter().enumerate() {
        comps[i % b_count].lefts.push(lb);
    }
    for (i, rb) in rights.into_iter().enumerate() {
        comps[i % b_count].rights.push(rb);
    }

    let total: Rat = comps.iter().map(|cp| cp.length(&d, &t_end)).sum();
    if total != c.period() {
        return Err(Error::Internal(format!(
            "component lengths sum to {total}, period is {}",
            c.period()
        )));
    }

    comps.sort_by(|a, b| {
        let ka = (a.central.is_none(), std::cmp::Reverse(a.length(&d, &t_end)));
        let kb = (b.central.is_none(), std::cmp::Reverse(b.length(&d, &t_end)));
        ka.cmp(&kb)
    });
    Ok(comps)
}

/// Landmark skeleton of one component, as `(position, value)` knots
/// relative to the component start, including the initial `(0, 2)` and the
/// terminal `(L, 2)`.
pub fn build_component_profile(
    comp: &Component,
    d: &Rat,
    t_end: &Rat,
    mode: FillMode,
) -> Result<Vec<(Rat, Rat)>> {
    let l = comp.lefts.len() as i64;
    let r = comp.rights.len() as i64;
    let two = rint(2);
    let half = rat(1, 2);
    let mut knots: Vec<(Rat, Rat)> = vec![(zero(), two.clone())];
    let mut pos = zero();
    let push = |knots: &mut Vec<(Rat, Rat)>, pos: &mut Rat, gap: Rat, val: Rat| {
        *pos += gap;
        knots.push((pos.clone(), val));
    };

    // descending landmark pairs, one per left block
    for (j, lb) in comp.lefts.iter().enumerate() {
        let val = &two - pow2(j as i64 + 1 - l);
        push(&mut knots, &mut pos, d.clone(), val.clone());
        push(&mut knots, &mut pos, lb.v.clone(), val);
    }

    if let Some(cb) = &comp.central {
        // plateau triple at 1/2 spanning v then T - u: the middle point is
        // the central landmark and the two spans make the shift accounting
        // land it inside (u, v)
        push(&mut knots, &mut pos, d.clone(), half.clone());
        push(&mut knots, &mut pos, cb.v.clone(), half.clone());
        push(&mut knots, &mut pos, t_end - &cb.u, half);
        if r > 0 {
            emit_right_pairs(&mut knots, &mut pos, comp, d, t_end, true);
        }
    } else if r > 0 {
        // no central: the gap to the first ascending landmark is d + T
        let first_val = &two - pow2(0); // value 1
        if mode == FillMode::Repaired && l == 0 {
            // quick descent, then a T-long stay-below span
            push(&mut knots, &mut pos, d.clone(), first_val.clone());
            push(&mut knots, &mut pos, t_end.clone(), first_val);
        } else {
            push(&mut knots, &mut pos, d + t_end, first_val);
        }
        emit_right_pairs(&mut knots, &mut pos, comp, d, t_end, false);
    } else if l > 0 {
        // lefts only
        if mode == FillMode::Repaired {
            // T-long stay-below span at the last landmark value, then rise
            push(&mut knots, &mut pos, t_end.clone(), one());
            push(&mut knots, &mut pos, d.clone(), two.clone());
        } else {
            push(&mut knots, &mut pos, d + t_end, two.clone());
        }
        return finish_profile(comp, d, t_end, knots, pos);
    } else {
        // bare base block
        push(&mut knots, &mut pos, d + t_end, two.clone());
        return finish_profile(comp, d, t_end, knots, pos);
    }

    // terminal rise back to 2
    push(&mut knots, &mut pos, d.clone(), two);
    finish_profile(comp, d, t_end, knots, pos)
}

/// Ascending landmark pairs, one per right block. When `first_needs_gap`
/// the first pair is `d` after the current position (a central plateau was
/// just emitted); otherwise the current position already is the first pair
/// point's predecessor by the `d + T` rule and the pair's first point has
/// been emitted by the caller.
fn emit_right_pairs(
    knots: &mut Vec<(Rat, Rat)>,
    pos: &mut Rat,
    comp: &Component,
    d: &Rat,
    t_end: &Rat,
    first_needs_gap: bool,
) {
    let two = rint(2);
    for (j, rb) in comp.rights.iter().enumerate() {
        let val = &two - pow2(-(j as i64));
        let span = t_end - &rb.u;
        if j == 0 && !first_needs_gap {
            // first point already placed by the caller at the current pos
            *pos += span;
            knots.push((pos.clone(), val));
        } else {
            *pos += d.clone();
            knots.push((pos.clone(), val.clone()));
            *pos += span;
            knots.push((pos.clone(), val));
        }
    }
}

fn finish_profile(
    comp: &Component,
    d: &Rat,
    t_end: &Rat,
    knots: Vec<(Rat, Rat)>,
    pos: Rat,
) -> Result<Vec<(Rat, Rat)>> {
    let expected = comp.length(d, t_end);
    if pos != expected {
        return Err(Error::Internal(format!(
            "component profile ends at {pos}, expected length {expected}"
        )));
    }
    Ok(knots)
}

/// Fills the gaps between skeleton landmarks: unequal adjacent values get
/// a single linear piece; equal values `y` over `[a, b]` get a symmetric
/// tent with slopes `∓1/d`, clipped into a deep tent when the plain tent
/// would dip below -1. The deep tent descends at `1/d` to zero, crosses
/// the middle at slope `τ = min(1/d, 2/(b-a-2dy))`, and rises
/// symmetrically; the midpoint never drops below -1.
pub fn fill_gaps(skeleton: &[(Rat, Rat)], d: &Rat) -> Result<Vec<(Rat, Rat)>> {
    if skeleton.len() < 2 {
        return Err(Error::Structural("need at least two landmarks".into()));
    }
    let mut out: Vec<(Rat, Rat)> = vec![skeleton[0].clone()];
    for w in skeleton.windows(2) {
        let (a, ya) = &w[0];
        let (b, yb) = &w[1];
        if a >= b {
            return Err(Error::Structural(format!(
                "landmarks out of order at {a} and {b}"
            )));
        }
        if ya == yb {
            let y = ya;
            let gap = b - a;
            let mid = (a + b) / rint(2);
            let mid_val = y - &gap / (rint(2) * d);
            if mid_val >= rint(-1) {
                out.push((mid, mid_val));
            } else {
                if !y.is_positive() {
                    return Err(Error::Structural(
                        "deep tent needs a positive plateau value".into(),
                    ));
                }
                let dy = d * y;
                let half_inner = &gap / rint(2) - &dy;
                let tau = std::cmp::min(one() / d, rint(2) / (&gap - rint(2) * &dy));
                let depth = -(&tau * &half_inner);
                out.push((a + &dy, zero()));
                out.push((mid, depth));
                out.push((b - &dy, zero()));
            }
        }
        out.push((b.clone(), yb.clone()));
    }
    Ok(out)
}

/// One knot of a piecewise-linear path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Knot {
    pub pos: Rat,
    pub val: Rat,
}

/// A periodic piecewise-linear function given by knots on `[0, P)`, with
/// the wraparound segment from the last knot back to the first knot's
/// value at `P` implied. Between knots the function is linear; no segment
/// is constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinearPath {
    period: Rat,
    knots: Vec<Knot>,
}

impl PiecewiseLinearPath {
    pub fn new(period: Rat, knots: Vec<Knot>) -> Result<Self> {
        if period <= zero() {
            return Err(Error::Structural("period must be positive".into()));
        }
        if knots.len() < 2 {
            return Err(Error::Structural("need at least two knots".into()));
        }
        if !knots[0].pos.is_zero() {
            return Err(Error::Structural("first knot must sit at position 0".into()));
        }
        if knots.last().unwrap().pos >= period {
            return Err(Error::Structural("knot positions must stay below the period".into()));
        }
        for w in knots.windows(2) {
            if w[0].pos >= w[1].pos {
                return Err(Error::Structural(
                    "knot positions must be strictly increasing".into(),
                ));
            }
            if w[0].val == w[1].val {
                return Err(Error::Structural(
                    "constant segment between equal knot values".into(),
                ));
            }
        }
        if knots.last().unwrap().val == knots[0].val {
            return Err(Error::Structural(
                "constant wraparound segment".into(),
            ));
        }
        Ok(PiecewiseLinearPath { period, knots })
    }

    /// Path for the exactly uniform law: one peak at the origin, period
    /// equal to the window length, so every shift lands the peak uniformly.
    pub fn uniform_preset(t_end: &Rat) -> Result<Self> {
        Self::new(
            t_end.clone(),
            vec![
                Knot { pos: zero(), val: rint(2) },
                Knot { pos: t_end / rint(2), val: rat(1, 2) },
            ],
        )
    }

    pub fn period(&self) -> &Rat {
        &self.period
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    /// Cyclic segments `(pos_a, val_a, pos_b, val_b)`, the last one ending
    /// at `(P, first value)`.
    pub fn segments(&self) -> Vec<(Rat, Rat, Rat, Rat)> {
        let mut out = Vec::with_capacity(self.knots.len());
        for w in self.knots.windows(2) {
            out.push((w[0].pos.clone(), w[0].val.clone(), w[1].pos.clone(), w[1].val.clone()));
        }
        let last = self.knots.last().unwrap();
        out.push((
            last.pos.clone(),
            last.val.clone(),
            self.period.clone(),
            self.knots[0].val.clone(),
        ));
        out
    }

    /// Exact evaluation at any time (reduced modulo the period).
    pub fn eval(&self, t: &Rat) -> Rat {
        let mut tm = t % &self.period;
        if tm.is_negative() {
            tm += &self.period;
        }
        // index of the segment whose start is the last knot position <= tm
        let idx = self.knots.partition_point(|k| k.pos <= tm);
        let (a, ya, b, yb) = if idx == 0 {
            unreachable!("first knot is at 0")
        } else if idx == self.knots.len() {
            let last = self.knots.last().unwrap();
            (
                last.pos.clone(),
                last.val.clone(),
                self.period.clone(),
                self.knots[0].val.clone(),
            )
        } else {
            (
                self.knots[idx - 1].pos.clone(),
                self.knots[idx - 1].val.clone(),
                self.knots[idx].pos.clone(),
                self.knots[idx].val.clone(),
            )
        };
        &ya + (&yb - &ya) * (&tm - &a) / (&b - &a)
    }

    /// Local maxima `(position, value)` over one period: knots whose value
    /// exceeds both cyclic neighbors.
    pub fn local_maxima(&self) -> Vec<(Rat, Rat)> {
        let n = self.knots.len();
        let mut out = Vec::new();
        for i in 0..n {
            let prev = &self.knots[(i + n - 1) % n].val;
            let next = &self.knots[(i + 1) % n].val;
            let here = &self.knots[i].val;
            if here > prev && here > next {
                out.push((self.knots[i].pos.clone(), here.clone()));
            }
        }
        out
    }

    pub fn min_value(&self) -> Rat {
        self.knots.iter().map(|k| k.val.clone()).min().unwrap()
    }

    pub fn max_value(&self) -> Rat {
        self.knots.iter().map(|k| k.val.clone()).max().unwrap()
    }

    pub fn max_abs_slope(&self) -> Rat {
        self.segments()
            .iter()
            .map(|(a, ya, b, yb)| ((yb - ya) / (b - a)).abs())
            .max()
            .unwrap()
    }

    /// Re-bases the period origin at `delta`, inserting an interpolated
    /// knot at the new origin when needed. The rebased path is the same
    /// function up to a time shift.
    pub fn rotate(&self, delta: &Rat) -> Result<Self> {
        let mut dm = delta % &self.period;
        if dm.is_negative() {
            dm += &self.period;
        }
        let mut knots: Vec<Knot> = Vec::with_capacity(self.knots.len() + 1);
        for k in &self.knots {
            let mut p = &k.pos - &dm;
            if p.is_negative() {
                p += &self.period;
            }
            knots.push(Knot { pos: p, val: k.val.clone() });
        }
        knots.sort_by(|a, b| a.pos.cmp(&b.pos));
        if !knots[0].pos.is_zero() {
            knots.insert(
                0,
                Knot { pos: zero(), val: self.eval(&dm) },
            );
        }
        // drop a knot that became collinear with the inserted origin
        Self::new(self.period.clone(), knots)
    }
}

/// Concatenates the component profiles in layout order, fills the gaps,
/// and wraps the result into a periodic path starting and ending at 2.
pub fn build_path(
    layout: &[Component],
    d: &Rat,
    t_end: &Rat,
    period_factor: &Rat,
    mode: FillMode,
) -> Result<PiecewiseLinearPath> {
    if layout.is_empty() {
        return Err(Error::Argument("empty layout".into()));
    }
    let period = period_factor * t_end;
    let mut skeleton: Vec<(Rat, Rat)> = Vec::new();
    let mut offset = zero();
    for comp in layout {
        let profile = build_component_profile(comp, d, t_end, mode)?;
        let comp_len = profile.last().unwrap().0.clone();
        for (i, (p, v)) in profile.into_iter().enumerate() {
            let abs = &offset + &p;
            if i == 0 {
                match skeleton.last() {
                    None => skeleton.push((abs, v)),
                    Some((lp, lv)) => {
                        if *lp != abs || *lv != v {
                            return Err(Error::Internal(
                                "component profiles do not chain at value 2".into(),
                            ));
                        }
                    }
                }
            } else {
                skeleton.push((abs, v));
            }
        }
        offset += comp_len;
    }
    if offset != period {
        return Err(Error::Internal(format!(
            "profiles cover {offset}, period is {period}"
        )));
    }
    let expanded = fill_gaps(&skeleton, d)?;
    let mut knots: Vec<Knot> = expanded
        .into_iter()
        .map(|(pos, val)| Knot { pos, val })
        .collect();
    let last = knots.pop().unwrap();
    if last.pos != period || last.val != knots[0].val {
        return Err(Error::Internal("terminal knot does not close the period".into()));
    }
    PiecewiseLinearPath::new(period, knots)
}

/// Full pipeline from a feasible collection to a path plus its layout.
pub fn build_from_collection(
    c: &BlockCollection,
    mode: FillMode,
) -> Result<(PiecewiseLinearPath, Vec<Component>)> {
    let layout = assign_components(c)?;
    let path = build_path(&layout, &c.spacing(), c.t_end(), c.period_factor(), mode)?;
    Ok((path, layout))
}

/// Structural audit of a built path against the properties the
/// construction guarantees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathAudit {
    pub n_local_maxima: usize,
    pub min_maxima_gap: Rat,
    pub maxima_values: Vec<Rat>,
    pub min_value: Rat,
    pub max_slope: Rat,
    /// Local maxima per unit time over one period.
    pub rate_k: Rat,
    pub fill_mode: FillMode,
    /// Slope floor `1/(2^N d)` honored on segments touching `{x > 0}`.
    pub positive_region_floor_ok: bool,
    /// Slope floor `min(1/d, 2/(T+d))` honored on segments within `{x <= 0}`.
    pub nonpositive_region_floor_ok: bool,
}

/// Verifies bounds, Lipschitz constant, maxima separation, maxima value
/// multiplicity, and the derivative floors of a built path.
///
/// Bounds, Lipschitz, and the separation/value-count rules are always
/// enforced. The derivative floors are enforced in repaired mode and
/// reported informationally in literal mode, where the long one-sided
/// spans legitimately fall below them.
pub fn audit_path(
    path: &PiecewiseLinearPath,
    layout: &[Component],
    d: &Rat,
    t_end: &Rat,
    mode: FillMode,
) -> Result<PathAudit> {
    let period = path.period().clone();
    let maxima = path.local_maxima();
    if maxima.is_empty() {
        return Err(Error::AuditFailure("path has no local maximum".into()));
    }
    let mut violations: Vec<String> = Vec::new();

    let min_value = path.min_value();
    let max_value = path.max_value();
    if min_value < rint(-1) || max_value > rint(2) {
        violations.push(format!(
            "values leave [-1, 2]: min {min_value}, max {max_value}"
        ));
    }

    let max_slope = path.max_abs_slope();
    let lipschitz_cap = rat(3, 2) / d;
    if max_slope > lipschitz_cap {
        violations.push(format!(
            "slope {max_slope} exceeds the Lipschitz cap {lipschitz_cap}"
        ));
    }

    let min_gap = if maxima.len() == 1 {
        period.clone()
    } else {
        let mut gap: Option<Rat> = None;
        for i in 0..maxima.len() {
            let here = &maxima[i].0;
            let next = if i + 1 < maxima.len() {
                maxima[i + 1].0.clone()
            } else {
                &maxima[0].0 + &period
            };
            let g = next - here;
            gap = Some(match gap {
                None => g,
                Some(old) => std::cmp::min(old, g),
            });
        }
        gap.unwrap()
    };
    if &min_gap < d {
        violations.push(format!("maxima separation {min_gap} below spacing {d}"));
    }

    let mut values: Vec<Rat> = maxima.iter().map(|(_, v)| v.clone()).collect();
    values.sort();
    values.dedup();
    let n_rank = layout
        .iter()
        .map(|c| c.lefts.len().max(c.rights.len()))
        .max()
        .unwrap_or(0);
    if values.len() > n_rank + 3 {
        violations.push(format!(
            "{} distinct maxima values, allowed {}",
            values.len(),
            n_rank + 3
        ));
    }

    let pos_floor = one() / (pow2(n_rank as i64) * d);
    let neg_floor = std::cmp::min(one() / d, rint(2) / (t_end + d));
    let mut pos_ok = true;
    let mut neg_ok = true;
    let mut floor_violations: Vec<String> = Vec::new();
    for (a, ya, b, yb) in path.segments() {
        let slope = ((&yb - &ya) / (&b - &a)).abs();
        let seg_max = std::cmp::max(&ya, &yb);
        let seg_min = std::cmp::min(&ya, &yb);
        if seg_max.is_positive() && slope < pos_floor {
            pos_ok = false;
            floor_violations.push(format!(
                "segment [{a}, {b}] slope {slope} below positive-region floor {pos_floor}"
            ));
        }
        if !seg_min.is_positive() && slope < neg_floor {
            neg_ok = false;
            floor_violations.push(format!(
                "segment [{a}, {b}] slope {slope} below nonpositive-region floor {neg_floor}"
            ));
        }
    }
    if mode == FillMode::Repaired {
        violations.extend(floor_violations);
    }

    if !violations.is_empty() {
        return Err(Error::AuditFailure(violations.join("; ")));
    }

    Ok(PathAudit {
        n_local_maxima: maxima.len(),
        min_maxima_gap: min_gap,
        maxima_values: values,
        min_value,
        max_slope,
        rate_k: rint(maxima.len() as i64) / period,
        fill_mode: mode,
        positive_region_floor_ok: pos_ok,
        nonpositive_region_floor_ok: neg_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{peel_blocks, Block};
    use crate::density::StepDensity;

    fn block(u: (i64, i64), v: (i64, i64), t: &Rat) -> Block {
        Block::new(rat(u.0, u.1), rat(v.0, v.1), t).unwrap()
    }

    fn e1_collection() -> BlockCollection {
        let f = StepDensity::constant(&rint(1), &rat(1, 2)).unwrap();
        peel_blocks(&f, &rint(2)).unwrap()
    }

    fn e3_collection() -> BlockCollection {
        let f = StepDensity::new(
            vec![zero(), rat(1, 2), rint(1)],
            vec![rint(1), rat(1, 2)],
        )
        .unwrap();
        peel_blocks(&f, &rint(2)).unwrap()
    }

    #[test]
    fn assign_base_only() {
        let c = e1_collection();
        let layout = assign_components(&c).unwrap();
        assert_eq!(layout.len(), 1);
        assert_eq!(layout[0].length(&c.spacing(), c.t_end()), rint(2));
    }

    #[test]
    fn assign_base_plus_left() {
        let c = e3_collection();
        let layout = assign_components(&c).unwrap();
        assert_eq!(layout.len(), 1);
        assert_eq!(layout[0].lefts.len(), 1);
        // L = 2·(1/4) + 1 + 1/2 = 2
        assert_eq!(layout[0].length(&c.spacing(), c.t_end()), rint(2));
    }

    #[test]
    fn assign_balances_lefts_and_places_central_first() {
        let t = rint(1);
        let c = BlockCollection::new(
            rint(1),
            rint(4),
            vec![
                block((0, 1), (1, 1), &t),
                block((0, 1), (1, 1), &t),
                block((1, 4), (1, 2), &t),
                block((0, 1), (1, 3), &t),
                block((0, 1), (2, 3), &t),
            ],
        )
        .unwrap();
        let layout = assign_components(&c).unwrap();
        assert_eq!(layout.len(), 2);
        assert!(layout[0].central.is_some());
        assert!(layout[1].central.is_none());
        assert_eq!(layout[0].lefts.len(), 1);
        assert_eq!(layout[1].lefts.len(), 1);
        let d = c.spacing();
        let total: Rat = layout.iter().map(|cp| cp.length(&d, &t)).sum();
        assert_eq!(total, c.period());
    }

    #[test]
    fn profile_base_only() {
        let c = e1_collection();
        let layout = assign_components(&c).unwrap();
        let prof =
            build_component_profile(&layout[0], &c.spacing(), c.t_end(), FillMode::Literal)
                .unwrap();
        assert_eq!(prof, vec![(zero(), rint(2)), (rint(2), rint(2))]);
    }

    #[test]
    fn profile_base_plus_left_literal_and_repaired() {
        let c = e3_collection();
        let layout = assign_components(&c).unwrap();
        let d = c.spacing();
        let lit =
            build_component_profile(&layout[0], &d, c.t_end(), FillMode::Literal).unwrap();
        assert_eq!(
            lit,
            vec![
                (zero(), rint(2)),
                (rat(1, 4), rint(1)),
                (rat(3, 4), rint(1)),
                (rint(2), rint(2)),
            ]
        );
        let rep =
            build_component_profile(&layout[0], &d, c.t_end(), FillMode::Repaired).unwrap();
        assert_eq!(
            rep,
            vec![
                (zero(), rint(2)),
                (rat(1, 4), rint(1)),
                (rat(3, 4), rint(1)),
                (rat(7, 4), rint(1)),
                (rint(2), rint(2)),
            ]
        );
    }

    #[test]
    fn fill_tent_examples() {
        let filled = fill_gaps(&[(zero(), rint(2)), (rint(2), rint(2))], &rint(1)).unwrap();
        assert_eq!(
            filled,
            vec![(zero(), rint(2)), (rint(1), rint(1)), (rint(2), rint(2))]
        );

        let filled =
            fill_gaps(&[(rat(1, 4), rint(1)), (rat(3, 4), rint(1))], &rat(1, 4)).unwrap();
        assert_eq!(
            filled,
            vec![
                (rat(1, 4), rint(1)),
                (rat(1, 2), zero()),
                (rat(3, 4), rint(1)),
            ]
        );

        // boundary case: plain tent bottoming out exactly at -1
        let filled =
            fill_gaps(&[(rat(3, 4), rint(1)), (rat(7, 4), rint(1))], &rat(1, 4)).unwrap();
        assert_eq!(
            filled,
            vec![
                (rat(3, 4), rint(1)),
                (rat(5, 4), rint(-1)),
                (rat(7, 4), rint(1)),
            ]
        );
    }

    #[test]
    fn fill_deep_tent_bottoms_at_minus_one() {
        // plateau 1 over a span of 3 with d = 1/4: plain tent would reach
        // 1 - 6 = -5, so the deep tent engages
        let filled = fill_gaps(&[(zero(), rint(1)), (rint(3), rint(1))], &rat(1, 4)).unwrap();
        assert_eq!(filled.len(), 5);
        assert_eq!(filled[1], (rat(1, 4), zero()));
        assert_eq!(filled[2].1, rint(-1));
        assert_eq!(filled[3], (rat(11, 4), zero()));
        // inner slope tau = min(4, 2/(3 - 1/2)) = 4/5, depth -tau*(3/2 - 1/4) = -1
        assert_eq!(filled[2].0, rat(3, 2));
    }

    #[test]
    fn fill_rejects_zero_gap() {
        assert!(fill_gaps(&[(zero(), rint(1)), (zero(), rint(1))], &rint(1)).is_err());
    }

    #[test]
    fn build_e1_path() {
        let c = e1_collection();
        let (path, layout) = build_from_collection(&c, FillMode::Literal).unwrap();
        assert_eq!(path.period(), &rint(2));
        assert_eq!(path.knots().len(), 2);
        assert_eq!(path.eval(&rint(1)), rint(1));
        assert_eq!(path.eval(&rat(1, 2)), rat(3, 2));
        let audit = audit_path(&path, &layout, &c.spacing(), c.t_end(), FillMode::Literal)
            .unwrap();
        assert_eq!(audit.n_local_maxima, 1);
        assert_eq!(audit.rate_k, rat(1, 2));
        assert_eq!(audit.max_slope, rint(1));
    }

    #[test]
    fn build_e3_repaired_audit() {
        let c = e3_collection();
        let (path, layout) = build_from_collection(&c, FillMode::Repaired).unwrap();
        let d = c.spacing();
        let audit = audit_path(&path, &layout, &d, c.t_end(), FillMode::Repaired).unwrap();
        assert_eq!(audit.n_local_maxima, 2);
        let maxima = path.local_maxima();
        assert_eq!(maxima[0], (zero(), rint(2)));
        assert_eq!(maxima[1], (rat(3, 4), rint(1)));
        assert_eq!(audit.min_maxima_gap, rat(3, 4));
        assert_eq!(audit.max_slope, rint(4));
        assert_eq!(audit.min_value, rint(-1));
        assert!(audit.positive_region_floor_ok);
        assert!(audit.nonpositive_region_floor_ok);
    }

    #[test]
    fn e3_literal_has_single_maximum() {
        let c = e3_collection();
        let (path, _) = build_from_collection(&c, FillMode::Literal).unwrap();
        let maxima = path.local_maxima();
        assert_eq!(maxima.len(), 1);
        assert_eq!(maxima[0], (zero(), rint(2)));
    }

    #[test]
    fn two_component_maxima_at_boundaries() {
        let t = rint(1);
        let c = BlockCollection::new(
            rint(1),
            rint(3),
            vec![block((0, 1), (1, 1), &t), block((0, 1), (1, 1), &t)],
        )
        .unwrap();
        let (path, layout) = build_from_collection(&c, FillMode::Repaired).unwrap();
        let maxima = path.local_maxima();
        assert_eq!(maxima.len(), 2);
        assert!(maxima.iter().all(|(_, v)| v == &rint(2)));
        let audit = audit_path(&path, &layout, &c.spacing(), &t, FillMode::Repaired).unwrap();
        assert_eq!(audit.n_local_maxima, 2);
    }

    #[test]
    fn repair_is_noop_without_one_sided_degeneracy() {
        let t = rint(1);
        // base + central: no degenerate side
        let c = BlockCollection::new(
            rint(1),
            rint(2),
            vec![block((0, 1), (1, 1), &t), block((1, 4), (3, 4), &t)],
        )
        .unwrap();
        let (lit, _) = build_from_collection(&c, FillMode::Literal).unwrap();
        let (rep, _) = build_from_collection(&c, FillMode::Repaired).unwrap();
        assert_eq!(lit, rep);

        // base + left + right: both sides present
        let c = BlockCollection::new(
            rint(1),
            rint(3),
            vec![
                block((0, 1), (1, 1), &t),
                block((0, 1), (1, 2), &t),
                block((1, 2), (1, 1), &t),
            ],
        )
        .unwrap();
        let (lit, _) = build_from_collection(&c, FillMode::Literal).unwrap();
        let (rep, _) = build_from_collection(&c, FillMode::Repaired).unwrap();
        assert_eq!(lit, rep);
    }

    #[test]
    fn left_order_does_not_change_the_path() {
        let t = rint(1);
        let mk = |blocks: Vec<Block>| {
            BlockCollection::new(rint(1), rint(4), blocks).unwrap()
        };
        let a = mk(vec![
            block((0, 1), (1, 1), &t),
            block((0, 1), (1, 3), &t),
            block((0, 1), (2, 3), &t),
        ]);
        let b = mk(vec![
            block((0, 1), (2, 3), &t),
            block((0, 1), (1, 1), &t),
            block((0, 1), (1, 3), &t),
        ]);
        let (pa, _) = build_from_collection(&a, FillMode::Repaired).unwrap();
        let (pb, _) = build_from_collection(&b, FillMode::Repaired).unwrap();
        assert_eq!(pa, pb);
    }

    #[test]
    fn audit_rejects_close_maxima() {
        // two maxima at distance 1/2 with d = 1 claimed
        let path = PiecewiseLinearPath::new(
            rint(4),
            vec![
                Knot { pos: zero(), val: rint(2) },
                Knot { pos: rint(1), val: zero() },
                Knot { pos: rat(5, 4), val: rint(1) },
                Knot { pos: rat(3, 2), val: zero() },
                Knot { pos: rat(7, 4), val: rint(1) },
                Knot { pos: rint(3), val: rint(-1) },
            ],
        )
        .unwrap();
        let err = audit_path(&path, &[], &rint(1), &rint(1), FillMode::Repaired);
        assert!(matches!(err, Err(Error::AuditFailure(_))));
    }

    #[test]
    fn path_validation_rejects_constant_segments() {
        assert!(PiecewiseLinearPath::new(
            rint(2),
            vec![
                Knot { pos: zero(), val: rint(2) },
                Knot { pos: rint(1), val: rint(2) },
            ],
        )
        .is_err());
    }

    #[test]
    fn rotation_preserves_values() {
        let c = e3_collection();
        let (path, _) = build_from_collection(&c, FillMode::Repaired).unwrap();
        let rot = path.rotate(&rat(1, 3)).unwrap();
        for j in 0..24 {
            let t = rat(j, 12);
            assert_eq!(rot.eval(&t), path.eval(&(&t + rat(1, 3))));
        }
    }

    #[test]
    fn uniform_preset_shape() {
        let p = PiecewiseLinearPath::uniform_preset(&rint(1)).unwrap();
        assert_eq!(p.period(), &rint(1));
        assert_eq!(p.local_maxima(), vec![(zero(), rint(2))]);
    }
}
