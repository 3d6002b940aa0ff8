//! Block decompositions of admissible step densities.
//!
//! A density whose values all sit on the grid `1/(HT)` can be written as a
//! sum of indicator functions of subintervals of `(0, T)` scaled by
//! `1/(HT)`. The subintervals form a proper collection: any two are nested
//! or have disjoint closures. Blocks are classified by which window
//! endpoints they touch.

use num::{BigInt, One, Signed, ToPrimitive, Zero};

use crate::density::StepDensity;
use crate::error::{Error, Result};
use crate::rat::{denom_lcm, floor_plus_one, one, zero, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlockKind {
    /// Spans the whole window: `(0, T)`.
    Base,
    /// Touches the left endpoint only: `(0, v)` with `v < T`.
    Left,
    /// Touches the right endpoint only: `(u, T)` with `u > 0`.
    Right,
    /// Touches neither endpoint: `(u, v)` with `0 < u < v < T`.
    Central,
}

impl BlockKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BlockKind::Base => "base",
            BlockKind::Left => "left",
            BlockKind::Right => "right",
            BlockKind::Central => "central",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(BlockKind::Base),
            "left" => Ok(BlockKind::Left),
            "right" => Ok(BlockKind::Right),
            "central" => Ok(BlockKind::Central),
            other => Err(Error::Structural(format!("unknown block kind {other:?}"))),
        }
    }
}

/// One block `(u, v)` of a proper collection, classified against the
/// window `(0, T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub u: Rat,
    pub v: Rat,
}

impl Block {
    /// Classifies `(u, v)` against the window and validates `0 <= u < v <= T`.
    pub fn new(u: Rat, v: Rat, t_end: &Rat) -> Result<Self> {
        if u.is_negative() || &v > t_end || u >= v {
            return Err(Error::Structural(format!(
                "block ({u}, {v}) does not fit in (0, {t_end})"
            )));
        }
        let kind = match (u.is_zero(), &v == t_end) {
            (true, true) => BlockKind::Base,
            (true, false) => BlockKind::Left,
            (false, true) => BlockKind::Right,
            (false, false) => BlockKind::Central,
        };
        Ok(Block { kind, u, v })
    }

    pub fn length(&self) -> Rat {
        &self.v - &self.u
    }
}

/// A proper collection of blocks together with the period factor `H`.
///
/// The represented density is `(1/(HT)) Σ 1_{[u_i, v_i)}` and the spacing
/// `d = (HT - Σ(v_i - u_i)) / m` is the slack inserted between landmarks
/// of the synthesized path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCollection {
    t_end: Rat,
    period_factor: Rat,
    blocks: Vec<Block>,
}

impl BlockCollection {
    pub fn new(t_end: Rat, period_factor: Rat, blocks: Vec<Block>) -> Result<Self> {
        if t_end <= zero() {
            return Err(Error::Structural("window length must be positive".into()));
        }
        if period_factor <= one() {
            return Err(Error::Structural("period factor H must exceed 1".into()));
        }
        if blocks.is_empty() {
            return Err(Error::Structural("collection needs at least one block".into()));
        }
        for b in &blocks {
            // re-classify to catch inconsistent imported data
            let fresh = Block::new(b.u.clone(), b.v.clone(), &t_end)?;
            if fresh.kind != b.kind {
                return Err(Error::Structural(format!(
                    "block ({}, {}) declared {} but is {}",
                    b.u,
                    b.v,
                    b.kind.as_str(),
                    fresh.kind.as_str()
                )));
            }
        }
        Ok(BlockCollection { t_end, period_factor, blocks })
    }

    pub fn t_end(&self) -> &Rat {
        &self.t_end
    }

    pub fn period_factor(&self) -> &Rat {
        &self.period_factor
    }

    /// Period of the synthesized path: `HT`.
    pub fn period(&self) -> Rat {
        &self.period_factor * &self.t_end
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn count_kind(&self, kind: BlockKind) -> usize {
        self.blocks.iter().filter(|b| b.kind == kind).count()
    }

    pub fn total_block_length(&self) -> Rat {
        self.blocks.iter().map(Block::length).sum()
    }

    /// Spacing `d = (HT - Σ(v_i - u_i)) / m`. Positive exactly when the
    /// represented density has total mass below one.
    pub fn spacing(&self) -> Rat {
        let m = Rat::from_integer(BigInt::from(self.blocks.len()));
        (self.period() - self.total_block_length()) / m
    }
}

/// Per-check outcome of the feasibility rules for a block collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    /// Any two blocks are nested or have disjoint closures.
    pub proper_nesting: bool,
    /// At least one base block.
    pub has_base: bool,
    /// No more central blocks than base blocks.
    pub central_at_most_base: bool,
    /// Positive spacing.
    pub positive_spacing: bool,
}

impl FeasibilityReport {
    pub fn feasible(&self) -> bool {
        self.proper_nesting && self.has_base && self.central_at_most_base && self.positive_spacing
    }
}

/// Runs the four feasibility checks on a collection.
pub fn feasibility(c: &BlockCollection) -> FeasibilityReport {
    let blocks = c.blocks();
    let mut proper_nesting = true;
    'outer: for i in 0..blocks.len() {
        for j in (i + 1)..blocks.len() {
            let (a, b) = (&blocks[i], &blocks[j]);
            let a_in_b = a.u >= b.u && a.v <= b.v;
            let b_in_a = b.u >= a.u && b.v <= a.v;
            let disjoint = a.v < b.u || b.v < a.u;
            if !(a_in_b || b_in_a || disjoint) {
                proper_nesting = false;
                break 'outer;
            }
        }
    }
    let has_base = c.count_kind(BlockKind::Base) >= 1;
    let central_at_most_base = c.count_kind(BlockKind::Central) <= c.count_kind(BlockKind::Base);
    let positive_spacing = c.spacing() > zero();
    FeasibilityReport {
        proper_nesting,
        has_base,
        central_at_most_base,
        positive_spacing,
    }
}

/// Chooses the period factor for `f`: the smallest `H = L/T` where `L` is
/// an integer multiple of the least common denominator of the values and
/// `L > T`. All `f_i · HT` are then nonnegative integers.
///
/// The exactly uniform density needs no block representation and is
/// signalled as such.
pub fn choose_period(f: &StepDensity) -> Result<Rat> {
    if f.piece_count() == 1 && f.values()[0] == one() / f.t_end() {
        return Err(Error::UniformDensity);
    }
    let l0 = denom_lcm(f.values());
    let t_end = f.t_end();
    let factor = if &l0 > t_end {
        BigInt::one()
    } else {
        floor_plus_one(&(t_end / &l0))
    };
    Ok(&l0 * Rat::from_integer(factor) / t_end)
}

/// Decomposes an admissible grid density into a proper collection by
/// repeatedly peeling one unit layer: within each layer, every maximal run
/// of pieces with a positive level becomes one block at height `1/(HT)`,
/// and the level drops by one on the run.
pub fn peel_blocks(f: &StepDensity, period_factor: &Rat) -> Result<BlockCollection> {
    let t_end = f.t_end().clone();
    let ht = period_factor * &t_end;
    let mut levels: Vec<BigInt> = Vec::with_capacity(f.piece_count());
    for v in f.values() {
        let scaled = v * &ht;
        if !scaled.denom().is_one() {
            return Err(Error::Argument(format!(
                "value {v} is not an integer multiple of 1/(HT)"
            )));
        }
        let n = scaled.to_integer();
        if n.is_zero() {
            return Err(Error::Argument(
                "density touches zero; fails the positive-infimum condition".into(),
            ));
        }
        levels.push(n);
    }
    let breaks = f.breaks();
    let mut blocks = Vec::new();
    while levels.iter().any(|n| n.is_positive()) {
        let mut run_start: Option<usize> = None;
        for i in 0..=levels.len() {
            let positive = i < levels.len() && levels[i].is_positive();
            match (run_start, positive) {
                (None, true) => run_start = Some(i),
                (Some(s), false) => {
                    blocks.push(Block::new(breaks[s].clone(), breaks[i].clone(), &t_end)?);
                    for lv in &mut levels[s..i] {
                        *lv -= 1;
                    }
                    run_start = None;
                }
                _ => {}
            }
        }
    }
    BlockCollection::new(t_end, period_factor.clone(), blocks)
}

/// Rebuilds the step density `(1/(HT)) Σ 1_{[u_i, v_i)}` from a
/// collection, in canonical form.
pub fn recompose(c: &BlockCollection) -> Result<StepDensity> {
    let t_end = c.t_end().clone();
    let unit = one() / c.period();
    let mut breaks: Vec<Rat> = vec![zero(), t_end.clone()];
    for b in c.blocks() {
        breaks.push(b.u.clone());
        breaks.push(b.v.clone());
    }
    breaks.sort();
    breaks.dedup();
    let mut values = Vec::with_capacity(breaks.len() - 1);
    for w in breaks.windows(2) {
        let covering = c
            .blocks()
            .iter()
            .filter(|b| b.u <= w[0] && w[1] <= b.v)
            .count();
        values.push(&unit * Rat::from_integer(BigInt::from(covering)));
    }
    StepDensity::new(breaks, values)
}

/// Number of blocks covering each piece of `f` must equal `f_i · HT`;
/// used as a structural cross-check in tests.
pub fn level_counts_match(f: &StepDensity, c: &BlockCollection) -> bool {
    match recompose(c) {
        Ok(g) => &g == f,
        Err(_) => false,
    }
}

/// Convenience: full decomposition pipeline with the automatic period.
pub fn decompose(f: &StepDensity) -> Result<BlockCollection> {
    let h = choose_period(f)?;
    let c = peel_blocks(f, &h)?;
    let rep = feasibility(&c);
    if !rep.feasible() {
        return Err(Error::Infeasible(format!("{rep:?}")));
    }
    Ok(c)
}

impl BlockCollection {
    /// Largest number of blocks stacked over any single point; needed by
    /// the path audit.
    pub fn max_cover(&self) -> usize {
        match recompose(self) {
            Ok(f) => {
                let unit = one() / self.period();
                f.values()
                    .iter()
                    .map(|v| (v / &unit).to_integer().to_usize().unwrap_or(0))
                    .max()
                    .unwrap_or(0)
            }
            Err(_) => 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    fn two_level() -> StepDensity {
        StepDensity::new(
            vec![zero(), rat(1, 2), rint(1)],
            vec![rint(1), rat(1, 2)],
        )
        .unwrap()
    }

    #[test]
    fn choose_period_examples() {
        let half = StepDensity::constant(&rint(1), &rat(1, 2)).unwrap();
        assert_eq!(choose_period(&half).unwrap(), rint(2));
        assert_eq!(choose_period(&two_level()).unwrap(), rint(2));
        let sixth = StepDensity::constant(&rint(3), &rat(1, 6)).unwrap();
        assert_eq!(choose_period(&sixth).unwrap(), rint(2));
    }

    #[test]
    fn choose_period_rejects_uniform() {
        let f = StepDensity::uniform(&rint(1)).unwrap();
        assert!(matches!(choose_period(&f), Err(Error::UniformDensity)));
    }

    #[test]
    fn peel_single_level() {
        let f = StepDensity::constant(&rint(1), &rat(1, 2)).unwrap();
        let c = peel_blocks(&f, &rint(2)).unwrap();
        assert_eq!(c.block_count(), 1);
        assert_eq!(c.blocks()[0].kind, BlockKind::Base);
        assert_eq!(c.spacing(), rint(1));
    }

    #[test]
    fn peel_base_plus_left() {
        let c = peel_blocks(&two_level(), &rint(2)).unwrap();
        assert_eq!(c.block_count(), 2);
        assert_eq!(c.blocks()[0].kind, BlockKind::Base);
        assert_eq!(c.blocks()[1].kind, BlockKind::Left);
        assert_eq!(c.blocks()[1].v, rat(1, 2));
        assert_eq!(c.spacing(), rat(1, 4));
    }

    #[test]
    fn peel_base_plus_central() {
        let f = StepDensity::new(
            vec![zero(), rat(1, 4), rat(3, 4), rint(1)],
            vec![rat(1, 2), rint(1), rat(1, 2)],
        )
        .unwrap();
        let c = peel_blocks(&f, &rint(2)).unwrap();
        assert_eq!(c.block_count(), 2);
        assert_eq!(c.blocks()[0].kind, BlockKind::Base);
        assert_eq!(c.blocks()[1].kind, BlockKind::Central);
        assert_eq!((c.blocks()[1].u.clone(), c.blocks()[1].v.clone()), (rat(1, 4), rat(3, 4)));
        assert_eq!(c.spacing(), rat(1, 4));
    }

    #[test]
    fn peel_rejects_off_grid_values() {
        let f = StepDensity::constant(&rint(1), &rat(1, 3)).unwrap();
        assert!(peel_blocks(&f, &rint(2)).is_err());
    }

    #[test]
    fn feasibility_examples() {
        let t = rint(1);
        let base = Block::new(zero(), rint(1), &t).unwrap();
        let ok = BlockCollection::new(rint(1), rint(2), vec![base.clone()]).unwrap();
        assert!(feasibility(&ok).feasible());

        let left_only = BlockCollection::new(
            rint(1),
            rint(2),
            vec![Block::new(zero(), rat(1, 2), &t).unwrap()],
        )
        .unwrap();
        let rep = feasibility(&left_only);
        assert!(!rep.has_base);
        assert!(!rep.feasible());

        let two_central = BlockCollection::new(
            rint(1),
            rint(2),
            vec![
                base.clone(),
                Block::new(rat(1, 4), rat(1, 2), &t).unwrap(),
                Block::new(rat(2, 3), rat(3, 4), &t).unwrap(),
            ],
        )
        .unwrap();
        let rep = feasibility(&two_central);
        assert!(!rep.central_at_most_base);
        assert!(!rep.feasible());
    }

    #[test]
    fn feasibility_rejects_overlapping_blocks() {
        let t = rint(1);
        let c = BlockCollection::new(
            rint(1),
            rint(4),
            vec![
                Block::new(zero(), rint(1), &t).unwrap(),
                Block::new(zero(), rat(1, 2), &t).unwrap(),
                Block::new(rat(1, 4), rint(1), &t).unwrap(),
            ],
        )
        .unwrap();
        let rep = feasibility(&c);
        assert!(!rep.proper_nesting);
    }

    #[test]
    fn feasibility_rejects_touching_closures() {
        let t = rint(1);
        let c = BlockCollection::new(
            rint(1),
            rint(4),
            vec![
                Block::new(zero(), rint(1), &t).unwrap(),
                Block::new(zero(), rat(1, 2), &t).unwrap(),
                Block::new(rat(1, 2), rat(3, 4), &t).unwrap(),
            ],
        )
        .unwrap();
        assert!(!feasibility(&c).proper_nesting);
    }

    #[test]
    fn recompose_examples() {
        let t = rint(1);
        let c = BlockCollection::new(
            rint(1),
            rint(2),
            vec![Block::new(zero(), rint(1), &t).unwrap()],
        )
        .unwrap();
        assert_eq!(recompose(&c).unwrap(), StepDensity::constant(&rint(1), &rat(1, 2)).unwrap());

        let c = BlockCollection::new(
            rint(1),
            rint(2),
            vec![
                Block::new(zero(), rint(1), &t).unwrap(),
                Block::new(zero(), rat(1, 2), &t).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(recompose(&c).unwrap(), two_level());
    }

    #[test]
    fn peel_recompose_round_trip() {
        let f = StepDensity::new(
            vec![zero(), rat(1, 8), rat(1, 3), rat(5, 8), rint(1)],
            vec![rat(3, 4), rat(1, 4), rat(1, 2), rat(1, 4)],
        )
        .unwrap();
        let h = choose_period(&f).unwrap();
        let c = peel_blocks(&f, &h).unwrap();
        assert_eq!(recompose(&c).unwrap(), f);
        assert!(level_counts_match(&f, &c));
    }

    #[test]
    fn spacing_identity() {
        // m·d + Σ(v_i - u_i) = HT exactly
        let c = peel_blocks(&two_level(), &rint(2)).unwrap();
        let m = rint(c.block_count() as i64);
        assert_eq!(m * c.spacing() + c.total_block_length(), c.period());
    }

    #[test]
    fn base_count_matches_min_level() {
        let f = two_level();
        let c = peel_blocks(&f, &rint(2)).unwrap();
        let expected = (f.min_value() * c.period()).to_integer();
        assert_eq!(BigInt::from(c.count_kind(BlockKind::Base)), expected);
        assert_eq!(c.max_cover(), 2);
    }
}
