//! Per-series parameter tables.
//!
//! Everything series-specific in this crate is driven by two small tables:
//! [`SeqParams`] fixes the shape constraints of symbols and u-symbols
//! (length, minima, row spacing, entry sum, shift rule), and
//! [`StructParams`] fixes the structural constants used by the part, block,
//! and labeling machinery. [`Tables::standard`] holds the values for the
//! classical series B, C, D; all fields are public so tests can perturb a
//! single constant and confirm the verifier notices.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Classical series tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Series {
    B,
    C,
    D,
}

impl Series {
    /// All series, in report order.
    pub const ALL: [Series; 3] = [Series::B, Series::C, Series::D];

    pub(crate) fn index(self) -> usize {
        match self {
            Series::B => 0,
            Series::C => 1,
            Series::D => 2,
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
        })
    }
}

impl FromStr for Series {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "B" | "b" => Ok(Series::B),
            "C" | "c" => Ok(Series::C),
            "D" | "d" => Ok(Series::D),
            other => Err(format!("unknown series {other:?} (expected B, C, or D)")),
        }
    }
}

/// Whether a sequence is a symbol or a u-symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Symbol,
    USymbol,
}

impl Kind {
    /// Both kinds, in report order.
    pub const ALL: [Kind; 2] = [Kind::Symbol, Kind::USymbol];

    pub(crate) fn index(self) -> usize {
        match self {
            Kind::Symbol => 0,
            Kind::USymbol => 1,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Symbol => "symbol",
            Kind::USymbol => "usymbol",
        })
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "symbol" | "symbols" => Ok(Kind::Symbol),
            "usymbol" | "usymbols" => Ok(Kind::USymbol),
            other => Err(format!(
                "unknown kind {other:?} (expected symbols or usymbols)"
            )),
        }
    }
}

/// Parity of an index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity of `x`.
    pub fn of(x: usize) -> Parity {
        if x % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// The other parity.
    pub fn opposite(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// Which end of a block may be missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum End {
    Bottom,
    Top,
}

/// Rounding used when the bijection `i` subtracts half the index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rounding {
    Floor,
    Ceil,
}

impl Rounding {
    /// `i/2` rounded per this rule, as the offset subtracted from entry `a_i`.
    pub fn half(self, i: usize) -> u32 {
        let i = i as u32;
        match self {
            Rounding::Floor => i / 2,
            Rounding::Ceil => i.div_ceil(2),
        }
    }
}

/// How the basis labels attach to the value-ordered isolated points
/// `k_0, k_1, ...` of a family with group exponent `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ELabeling {
    /// `e_i = {k_{i-1}, k_i}` for `1 <= i <= 2f`; `e_0 = {k_1, ..., k_2f}`.
    /// Requires `2f + 1` isolated points.
    LowWrap,
    /// `e_i = {k_i, k_{i+1}}` for `0 <= i <= 2f - 1`; `e_2f = {k_0, ..., k_{2f-1}}`.
    /// Requires `2f + 1` isolated points.
    HighWrap,
    /// `e_i = {k_i, k_{i+1}}` for `0 <= i <= 2f`. Requires `2f + 2` isolated
    /// points; the induced map to the cell space is two-to-one, not injective.
    Chain,
}

/// Shape constraints for one (series, kind) pair.
///
/// A sequence `(a_0, ..., a_r)` at rank `n` and level `m` is valid when
/// its length is `2m + len_extra`, its first two entries respect
/// `min_a0`/`min_a1`, every pair in the same row satisfies
/// `a_i + gap <= a_{i+2}`, the entries sum to
/// `n + sum_m2 * m^2 + sum_m1 * m`, and (when `star` is set) the first
/// unequal even-indexed pair `a_{2i} != a_{2i+1}` has `a_{2i} < a_{2i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqParams {
    /// Sequence length is `2m + len_extra`.
    pub len_extra: usize,
    /// Minimum value of `a_0`.
    pub min_a0: u32,
    /// Minimum value of `a_1`.
    pub min_a1: u32,
    /// Row spacing: `a_i + gap <= a_{i+2}` for all `i`.
    pub gap: u32,
    /// Quadratic coefficient of the entry-sum target.
    pub sum_m2: u64,
    /// Linear coefficient of the entry-sum target.
    pub sum_m1: u64,
    /// First two entries of a shifted sequence.
    pub shift_prefix: [u32; 2],
    /// Amount added to each existing entry by a shift.
    pub shift_step: u32,
    /// Whether the ascending-pair condition on even-indexed pairs applies.
    pub star: bool,
}

impl SeqParams {
    /// Sequence length at level `m`.
    pub fn len(&self, m: u32) -> usize {
        2 * m as usize + self.len_extra
    }

    /// Required entry sum at rank `n`, level `m`.
    pub fn sum_target(&self, n: u32, m: u32) -> u64 {
        let m = m as u64;
        n as u64 + self.sum_m2 * m * m + self.sum_m1 * m
    }

    /// Minimum allowed value of entry `a_index`, ignoring row spacing.
    pub fn min_entry(&self, index: usize) -> u32 {
        match index {
            0 => self.min_a0,
            1 => self.min_a1,
            _ => 0,
        }
    }
}

/// Structural constants for one series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructParams {
    /// Rounding of the half-index offset subtracted by the bijection `i`.
    pub i_round: Rounding,
    /// Staircases whose bottom has this parity belong to no block.
    pub excluded_staircase_bottom: Parity,
    /// Staircases whose bottom has this parity carry one displaced pair each.
    pub displaced_staircase_bottom: Parity,
    /// A ladder's bottom index is isolated iff it has this parity; its top
    /// index is isolated iff it has the opposite parity.
    pub ladder_bottom_iso: Parity,
    /// Required bottom parity of the first part of a closed block.
    pub block_first_bottom: Parity,
    /// Required top parity of the last part of a closed block.
    pub block_last_top: Parity,
    /// Which end the series' single open block is missing, if any.
    pub open_end: Option<End>,
    /// How labels attach to isolated points.
    pub e_labeling: ELabeling,
}

/// The complete parameter set: shape constraints per (series, kind) and
/// structural constants per series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tables {
    seq: [[SeqParams; 2]; 3],
    structural: [StructParams; 3],
}

impl Tables {
    /// The standard tables for the classical series.
    pub fn standard() -> Tables {
        let b_symbol = SeqParams {
            len_extra: 1,
            min_a0: 0,
            min_a1: 0,
            gap: 1,
            sum_m2: 1,
            sum_m1: 0,
            shift_prefix: [0, 0],
            shift_step: 1,
            star: false,
        };
        let b_usymbol = SeqParams {
            len_extra: 1,
            min_a0: 0,
            min_a1: 0,
            gap: 2,
            sum_m2: 2,
            sum_m1: 0,
            shift_prefix: [0, 0],
            shift_step: 2,
            star: false,
        };
        let c_symbol = SeqParams {
            len_extra: 1,
            min_a0: 0,
            min_a1: 0,
            gap: 1,
            sum_m2: 1,
            sum_m1: 0,
            shift_prefix: [0, 0],
            shift_step: 1,
            star: false,
        };
        let c_usymbol = SeqParams {
            len_extra: 1,
            min_a0: 0,
            min_a1: 1,
            gap: 2,
            sum_m2: 2,
            sum_m1: 1,
            shift_prefix: [0, 1],
            shift_step: 2,
            star: false,
        };
        let d_symbol = SeqParams {
            len_extra: 2,
            min_a0: 0,
            min_a1: 0,
            gap: 1,
            sum_m2: 1,
            sum_m1: 1,
            shift_prefix: [0, 0],
            shift_step: 1,
            star: true,
        };
        let d_usymbol = SeqParams {
            len_extra: 2,
            min_a0: 0,
            min_a1: 0,
            gap: 2,
            sum_m2: 2,
            sum_m1: 2,
            shift_prefix: [0, 0],
            shift_step: 2,
            star: true,
        };

        let b_struct = StructParams {
            i_round: Rounding::Floor,
            excluded_staircase_bottom: Parity::Even,
            displaced_staircase_bottom: Parity::Odd,
            ladder_bottom_iso: Parity::Even,
            block_first_bottom: Parity::Even,
            block_last_top: Parity::Odd,
            open_end: Some(End::Top),
            e_labeling: ELabeling::HighWrap,
        };
        let c_struct = StructParams {
            i_round: Rounding::Ceil,
            excluded_staircase_bottom: Parity::Odd,
            displaced_staircase_bottom: Parity::Even,
            ladder_bottom_iso: Parity::Odd,
            block_first_bottom: Parity::Odd,
            block_last_top: Parity::Even,
            open_end: Some(End::Bottom),
            e_labeling: ELabeling::LowWrap,
        };
        let d_struct = StructParams {
            i_round: Rounding::Floor,
            excluded_staircase_bottom: Parity::Even,
            displaced_staircase_bottom: Parity::Odd,
            ladder_bottom_iso: Parity::Even,
            block_first_bottom: Parity::Even,
            block_last_top: Parity::Odd,
            open_end: None,
            e_labeling: ELabeling::Chain,
        };

        Tables {
            seq: [
                [b_symbol, b_usymbol],
                [c_symbol, c_usymbol],
                [d_symbol, d_usymbol],
            ],
            structural: [b_struct, c_struct, d_struct],
        }
    }

    /// Shape constraints for one (series, kind) pair.
    pub fn seq_params(&self, series: Series, kind: Kind) -> &SeqParams {
        &self.seq[series.index()][kind.index()]
    }

    /// Mutable access for sensitivity tests.
    pub fn seq_params_mut(&mut self, series: Series, kind: Kind) -> &mut SeqParams {
        &mut self.seq[series.index()][kind.index()]
    }

    /// Structural constants for one series.
    pub fn struct_params(&self, series: Series) -> &StructParams {
        &self.structural[series.index()]
    }

    /// Mutable access for sensitivity tests.
    pub fn struct_params_mut(&mut self, series: Series) -> &mut StructParams {
        &mut self.structural[series.index()]
    }
}
