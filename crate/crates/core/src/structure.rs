//! Parts, blocks, isolated points, and the label space of a family.
//!
//! A distinguished (nondecreasing) u-symbol decomposes uniquely into
//! *parts*: maximal runs that are either *ladders* (consecutive entries
//! stepping by one) or *staircases* (equal pairs stepping by two). Certain
//! unions of consecutive parts form *blocks*; which runs qualify, and which
//! staircases stay outside every block, is driven by the per-series
//! [`StructParams`]. Part and block tops/bottoms are index positions, and
//! all parity conditions below are conditions on those positions.
//!
//! An *isolated point* of a u-symbol is an index whose entry in the
//! corresponding symbol is unique. The isolated values of a family's
//! special symbol carry labels `0, 1, ...` in value order; the per-series
//! e-labeling turns subsets of labels into vectors of the family's cell
//! space, and [`IsoLabeling::pi`] is the resulting projection. A label is
//! *displaced* in a member symbol when its value sits at an index of the
//! opposite parity from where it sits in the special symbol.

use crate::error::StructureError;
use crate::f2space::F2Vector;
use crate::series::{ELabeling, End, Kind, Parity, Series, Tables};
use crate::symbols::Seq;
use crate::GroupSpace;
use std::fmt;

/// Whether a part steps by one (ladder) or in equal pairs (staircase).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartKind {
    Ladder,
    Staircase,
}

/// One part of a distinguished u-symbol: a maximal ladder or staircase.
///
/// `lo` is the part's bottom and `hi` its top, both index positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Part {
    pub kind: PartKind,
    pub lo: usize,
    pub hi: usize,
}

impl Part {
    pub fn is_ladder(&self) -> bool {
        self.kind == PartKind::Ladder
    }

    pub fn is_staircase(&self) -> bool {
        self.kind == PartKind::Staircase
    }

    /// Number of indices in the part.
    pub fn length(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn contains(&self, index: usize) -> bool {
        self.lo <= index && index <= self.hi
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            PartKind::Ladder => "ladder",
            PartKind::Staircase => "staircase",
        };
        write!(f, "{kind} [{},{}]", self.lo, self.hi)
    }
}

/// A block: a run of consecutive parts, possibly missing one end.
///
/// `lo..=hi` is the covered index range, `part_lo..=part_hi` the covered
/// run in the part list. A block with `missing_end` set has no bottom
/// (series C) or no top (series B).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UBlock {
    pub lo: usize,
    pub hi: usize,
    pub part_lo: usize,
    pub part_hi: usize,
    pub missing_end: Option<End>,
}

impl UBlock {
    pub fn is_closed(&self) -> bool {
        self.missing_end.is_none()
    }

    /// The block's bottom index, unless the bottom is missing.
    pub fn bottom(&self) -> Option<usize> {
        (self.missing_end != Some(End::Bottom)).then_some(self.lo)
    }

    /// The block's top index, unless the top is missing.
    pub fn top(&self) -> Option<usize> {
        (self.missing_end != Some(End::Top)).then_some(self.hi)
    }

    pub fn contains(&self, index: usize) -> bool {
        self.lo <= index && index <= self.hi
    }
}

impl fmt::Display for UBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)?;
        match self.missing_end {
            Some(End::Bottom) => f.write_str(" (no bottom)"),
            Some(End::Top) => f.write_str(" (no top)"),
            None => Ok(()),
        }
    }
}

/// The full part and block decomposition of a distinguished u-symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomp {
    pub parts: Vec<Part>,
    pub blocks: Vec<UBlock>,
}

impl BlockDecomp {
    /// The ladder parts of one block.
    pub fn ladders_of(&self, block: &UBlock) -> impl Iterator<Item = &Part> {
        self.parts[block.part_lo..=block.part_hi]
            .iter()
            .filter(|p| p.is_ladder())
    }

    /// Indices covered by the ladders of one block, ascending.
    pub fn ladder_indices(&self, block: &UBlock) -> Vec<usize> {
        self.ladders_of(block).flat_map(|p| p.lo..=p.hi).collect()
    }

    /// Indices covered by the ladders of a subset of blocks, given as a
    /// bitmask over `self.blocks`, ascending.
    pub fn ladder_indices_of_set(&self, mask: u64) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .blocks
            .iter()
            .enumerate()
            .filter(|&(q, _)| mask >> q & 1 == 1)
            .flat_map(|(_, b)| self.ladder_indices(b))
            .collect();
        out.sort_unstable();
        out
    }

    /// All ladder parts of the u-symbol, in position order.
    pub fn all_ladders(&self) -> Vec<Part> {
        self.parts.iter().copied().filter(Part::is_ladder).collect()
    }
}

/// Decompose a distinguished u-symbol into parts.
///
/// # Errors
///
/// [`StructureError::NotDistinguished`] unless the input is a
/// nondecreasing u-symbol; [`StructureError::BlockStructure`] if the
/// greedy decomposition fails the maximality conditions (possible only
/// when the shape tables are perturbed).
pub fn parts(u: &Seq) -> Result<Vec<Part>, StructureError> {
    if u.kind() != Kind::USymbol || !u.is_nondecreasing() {
        return Err(StructureError::NotDistinguished);
    }
    let a = u.entries();
    let len = a.len();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < len {
        if pos + 1 < len && a[pos + 1] == a[pos] {
            let mut j = pos + 1;
            while j + 2 < len && a[j + 1] == a[j + 2] && a[j + 1] == a[j] + 2 {
                j += 2;
            }
            out.push(Part {
                kind: PartKind::Staircase,
                lo: pos,
                hi: j,
            });
            pos = j + 1;
        } else {
            let mut j = pos;
            while j + 1 < len && a[j + 1] == a[j] + 1 {
                j += 1;
            }
            out.push(Part {
                kind: PartKind::Ladder,
                lo: pos,
                hi: j,
            });
            pos = j + 1;
        }
    }
    verify_parts(a, &out)?;
    Ok(out)
}

/// Check shape and maximality of a part decomposition. The row-spacing
/// condition on u-symbols makes these automatic; they can only fail when
/// the shape tables are perturbed.
fn verify_parts(a: &[u32], parts: &[Part]) -> Result<(), StructureError> {
    let len = a.len();
    let fail = |detail: String| Err(StructureError::BlockStructure { detail });
    let mut expected_lo = 0usize;
    for part in parts {
        if part.lo != expected_lo {
            return fail(format!("parts do not tile the index range at {}", part.lo));
        }
        expected_lo = part.hi + 1;
        match part.kind {
            PartKind::Ladder => {
                if part.lo > 0 && a[part.lo - 1] + 1 >= a[part.lo] {
                    return fail(format!("{part} is not maximal below"));
                }
                if part.hi + 1 < len && a[part.hi + 1] <= a[part.hi] + 1 {
                    return fail(format!("{part} is not maximal above"));
                }
            }
            PartKind::Staircase => {
                if part.length() % 2 != 0 {
                    return fail(format!("{part} has odd length"));
                }
                for q in (part.lo..part.hi).step_by(2) {
                    if a[q + 1] != a[q] || (q + 2 <= part.hi && a[q + 2] != a[q] + 2) {
                        return fail(format!("{part} does not step in equal pairs"));
                    }
                }
                if part.lo > 1 && a[part.lo - 2] + 2 >= a[part.lo] {
                    return fail(format!("{part} is not maximal below"));
                }
                if part.hi + 2 < len && a[part.hi + 2] <= a[part.hi] + 2 {
                    return fail(format!("{part} is not maximal above"));
                }
            }
        }
    }
    if expected_lo != len {
        return fail(format!(
            "parts cover {expected_lo} of {len} indices"
        ));
    }
    Ok(())
}

/// Decompose a distinguished u-symbol into parts and blocks.
///
/// # Errors
///
/// [`StructureError::NotDistinguished`] for non-distinguished input;
/// [`StructureError::BlockStructure`] when the blocks found violate the
/// series' axioms (overlap, wrong number of open blocks, or a part that is
/// neither in a block nor an excluded staircase).
pub fn u_blocks(tables: &Tables, u: &Seq) -> Result<BlockDecomp, StructureError> {
    let parts = parts(u)?;
    let sp = *tables.struct_params(u.series());
    let bottoms = |run: &[Part], parity: Parity| {
        run.iter().filter(|p| Parity::of(p.lo) == parity).count()
    };
    let tops = |run: &[Part], parity: Parity| {
        run.iter().filter(|p| Parity::of(p.hi) == parity).count()
    };

    let mut blocks = Vec::new();
    for i in 0..parts.len() {
        for j in i..parts.len() {
            let run = &parts[i..=j];
            let first = &parts[i];
            let last = &parts[j];
            if first.is_ladder()
                && Parity::of(first.lo) == sp.block_first_bottom
                && last.is_ladder()
                && Parity::of(last.hi) == sp.block_last_top
                && bottoms(run, sp.block_first_bottom) == 1
                && tops(run, sp.block_last_top) == 1
            {
                blocks.push(UBlock {
                    lo: first.lo,
                    hi: last.hi,
                    part_lo: i,
                    part_hi: j,
                    missing_end: None,
                });
            }
        }
    }
    match sp.open_end {
        Some(End::Bottom) => {
            for j in 0..parts.len() {
                let run = &parts[0..=j];
                let last = &parts[j];
                if last.is_ladder()
                    && Parity::of(last.hi) == sp.block_last_top
                    && tops(run, sp.block_last_top) == 1
                    && run
                        .iter()
                        .all(|p| Parity::of(p.lo) == sp.block_first_bottom.opposite())
                {
                    blocks.push(UBlock {
                        lo: 0,
                        hi: last.hi,
                        part_lo: 0,
                        part_hi: j,
                        missing_end: Some(End::Bottom),
                    });
                }
            }
        }
        Some(End::Top) => {
            for i in 0..parts.len() {
                let run = &parts[i..];
                let first = &parts[i];
                if first.is_ladder()
                    && Parity::of(first.lo) == sp.block_first_bottom
                    && bottoms(run, sp.block_first_bottom) == 1
                    && run
                        .iter()
                        .all(|p| Parity::of(p.hi) == sp.block_last_top.opposite())
                {
                    blocks.push(UBlock {
                        lo: first.lo,
                        hi: parts[parts.len() - 1].hi,
                        part_lo: i,
                        part_hi: parts.len() - 1,
                        missing_end: Some(End::Top),
                    });
                }
            }
        }
        None => {}
    }
    blocks.sort_by_key(|b| b.lo);

    for w in blocks.windows(2) {
        if w[0].hi >= w[1].lo {
            return Err(StructureError::BlockStructure {
                detail: format!("blocks {} and {} overlap", w[0], w[1]),
            });
        }
    }
    let open_count = blocks.iter().filter(|b| b.missing_end.is_some()).count();
    let open_expected = usize::from(sp.open_end.is_some());
    if open_count != open_expected {
        return Err(StructureError::BlockStructure {
            detail: format!("expected {open_expected} open block(s), found {open_count}"),
        });
    }
    for (q, part) in parts.iter().enumerate() {
        let covered = blocks.iter().any(|b| b.part_lo <= q && q <= b.part_hi);
        let excluded =
            part.is_staircase() && Parity::of(part.lo) == sp.excluded_staircase_bottom;
        if covered == excluded {
            let state = if covered { "covered" } else { "uncovered" };
            return Err(StructureError::BlockStructure {
                detail: format!("{part} is {state}"),
            });
        }
    }
    Ok(BlockDecomp { parts, blocks })
}

/// Solve `sum of chosen columns = target` over the two-element field.
///
/// Returns a bitmask of chosen column indices, or `None` when the target
/// is outside the span. When the columns satisfy a relation the returned
/// choice is one of the solutions.
pub fn solve_f2(columns: &[u64], target: u64) -> Option<u64> {
    assert!(columns.len() <= 64, "too many columns for a bitmask result");
    let mut pivots: [Option<(u64, u64)>; 64] = [None; 64];
    for (j, &column) in columns.iter().enumerate() {
        let mut v = column;
        let mut tag = 1u64 << j;
        while v != 0 {
            let bit = v.trailing_zeros() as usize;
            match pivots[bit] {
                Some((pv, ptag)) => {
                    v ^= pv;
                    tag ^= ptag;
                }
                None => {
                    pivots[bit] = Some((v, tag));
                    break;
                }
            }
        }
    }
    let mut t = target;
    let mut tag = 0u64;
    while t != 0 {
        let bit = t.trailing_zeros() as usize;
        let (pv, ptag) = pivots[bit]?;
        t ^= pv;
        tag ^= ptag;
    }
    Some(tag)
}

/// Rank of a set of bitmask columns over the two-element field.
pub fn rank_f2(columns: &[u64]) -> usize {
    let mut pivots: [u64; 64] = [0; 64];
    let mut rank = 0;
    for &column in columns {
        let mut v = column;
        while v != 0 {
            let bit = v.trailing_zeros() as usize;
            if pivots[bit] != 0 {
                v ^= pivots[bit];
            } else {
                pivots[bit] = v;
                rank += 1;
                break;
            }
        }
    }
    rank
}

/// Basis masks of the e-labeling over `p` value-ordered labels.
fn e_hat_masks(labeling: ELabeling, f: u32, p: usize) -> Vec<u64> {
    let dim = 2 * f as usize + 1;
    let mut v = vec![0u64; dim];
    match labeling {
        ELabeling::LowWrap => {
            for t in 1..p {
                v[0] |= 1 << t;
            }
            for (i, mask) in v.iter_mut().enumerate().skip(1) {
                *mask = (1 << (i - 1)) | (1 << i);
            }
        }
        ELabeling::HighWrap => {
            for (i, mask) in v.iter_mut().enumerate().take(dim - 1) {
                *mask = (1 << i) | (1 << (i + 1));
            }
            for t in 0..p.saturating_sub(1) {
                v[dim - 1] |= 1 << t;
            }
        }
        ELabeling::Chain => {
            if p > 0 {
                for (i, mask) in v.iter_mut().enumerate() {
                    *mask = (1 << i) | (1 << (i + 1));
                }
            }
        }
    }
    v
}

/// The label space of a family: its isolated values, where they sit in the
/// special symbol, and the e-labeling identifying label subsets with cell
/// space vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoLabeling {
    series: Series,
    space: GroupSpace,
    iso_values: Vec<u32>,
    special_indices: Vec<usize>,
    e_hat: Vec<u64>,
}

impl IsoLabeling {
    /// Build the labeling from a family's special symbol.
    ///
    /// # Errors
    ///
    /// [`StructureError::NotSpecial`] unless the input is a nondecreasing
    /// symbol; [`StructureError::IsolatedParity`] when the isolated-point
    /// count has the wrong parity for the series.
    pub fn from_special(tables: &Tables, special: &Seq) -> Result<IsoLabeling, StructureError> {
        if special.kind() != Kind::Symbol || !special.is_nondecreasing() {
            return Err(StructureError::NotSpecial);
        }
        let entries = special.entries();
        let mut iso_values = Vec::new();
        let mut special_indices = Vec::new();
        let mut idx = 0;
        while idx < entries.len() {
            let mut end = idx + 1;
            while end < entries.len() && entries[end] == entries[idx] {
                end += 1;
            }
            if end - idx == 1 {
                iso_values.push(entries[idx]);
                special_indices.push(idx);
            }
            idx = end;
        }
        let p = iso_values.len();
        let series = special.series();
        let expected = match series {
            Series::B | Series::C => "an odd number of",
            Series::D => "an even number of",
        };
        let parity_ok = match series {
            Series::B | Series::C => p % 2 == 1,
            Series::D => p % 2 == 0,
        };
        if !parity_ok {
            return Err(StructureError::IsolatedParity {
                series,
                expected,
                count: p,
            });
        }
        assert!(p <= 62, "isolated point count {p} exceeds bitset capacity");
        let f = match series {
            Series::B | Series::C => (p as u32 - 1) / 2,
            Series::D => (p as u32).saturating_sub(2) / 2,
        };
        let space = GroupSpace::new(f);
        let e_hat = e_hat_masks(tables.struct_params(series).e_labeling, f, p);
        Ok(IsoLabeling {
            series,
            space,
            iso_values,
            special_indices,
            e_hat,
        })
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn space(&self) -> GroupSpace {
        self.space
    }

    pub fn f(&self) -> u32 {
        self.space.f()
    }

    /// Number of isolated points (labels).
    pub fn point_count(&self) -> usize {
        self.iso_values.len()
    }

    /// Isolated entry values, ascending; position = label.
    pub fn iso_values(&self) -> &[u32] {
        &self.iso_values
    }

    /// Index of each isolated value in the special symbol.
    pub fn special_indices(&self) -> &[usize] {
        &self.special_indices
    }

    /// Mask with every label set.
    pub fn all_labels(&self) -> u64 {
        match self.point_count() {
            0 => 0,
            p => (1 << p) - 1,
        }
    }

    /// Label mask of basis vector `e_i`.
    pub fn e_hat(&self, i: usize) -> u64 {
        self.e_hat[i]
    }

    pub fn e_hat_all(&self) -> &[u64] {
        &self.e_hat
    }

    /// For each label, the index of its value in `symbol`.
    ///
    /// # Errors
    ///
    /// [`StructureError::NotInFamily`] when a value is missing or repeated,
    /// i.e. the symbol is not congruent to the labeling's special symbol.
    pub fn label_indices(&self, symbol: &Seq) -> Result<Vec<usize>, StructureError> {
        if symbol.kind() != Kind::Symbol {
            return Err(StructureError::NotInFamily {
                detail: "labels live on symbols, not u-symbols".into(),
            });
        }
        self.iso_values
            .iter()
            .map(|&v| {
                let mut found = None;
                for (idx, &e) in symbol.entries().iter().enumerate() {
                    if e == v {
                        if found.is_some() {
                            return Err(StructureError::NotInFamily {
                                detail: format!("value {v} is not isolated in {symbol}"),
                            });
                        }
                        found = Some(idx);
                    }
                }
                found.ok_or_else(|| StructureError::NotInFamily {
                    detail: format!("value {v} does not occur in {symbol}"),
                })
            })
            .collect()
    }

    /// Labels whose value sits at an index of the opposite parity from the
    /// special symbol.
    ///
    /// # Errors
    ///
    /// Same as [`IsoLabeling::label_indices`].
    pub fn displaced_labels(&self, symbol: &Seq) -> Result<u64, StructureError> {
        Ok(self.points_of(symbol)?.displaced())
    }

    /// Per-symbol isolated point data for a member of the family.
    ///
    /// # Errors
    ///
    /// Same as [`IsoLabeling::label_indices`].
    pub fn points_of(&self, symbol: &Seq) -> Result<IsoPoints, StructureError> {
        let k = self.label_indices(symbol)?;
        let mut displaced = 0u64;
        for (t, (&idx, &special_idx)) in k.iter().zip(&self.special_indices).enumerate() {
            if idx % 2 != special_idx % 2 {
                displaced |= 1 << t;
            }
        }
        Ok(IsoPoints {
            labeling: self.clone(),
            k,
            displaced,
        })
    }

    /// Project a label set into the cell space by expanding it in the
    /// e-labeling basis.
    ///
    /// # Errors
    ///
    /// [`StructureError::OddCardinality`] for odd-size sets;
    /// [`StructureError::Unsolvable`] when the set is outside the basis
    /// span (possible only with a perturbed labeling).
    pub fn pi(&self, label_mask: u64) -> Result<F2Vector, StructureError> {
        if label_mask.count_ones() % 2 == 1 {
            return Err(StructureError::OddCardinality);
        }
        let coeffs = solve_f2(&self.e_hat, label_mask).ok_or(StructureError::Unsolvable)?;
        Ok(self.space.from_bits(coeffs).canonical())
    }

    /// Convert a label set to the index set it occupies in `symbol`.
    ///
    /// # Errors
    ///
    /// Same as [`IsoLabeling::label_indices`].
    pub fn label_mask_to_indices(
        &self,
        symbol: &Seq,
        mask: u64,
    ) -> Result<Vec<usize>, StructureError> {
        let k = self.label_indices(symbol)?;
        let mut indices: Vec<usize> = (0..self.point_count())
            .filter(|&t| mask >> t & 1 == 1)
            .map(|t| k[t])
            .collect();
        indices.sort_unstable();
        Ok(indices)
    }
}

/// Isolated point data of one member symbol: where each label sits and
/// which labels are displaced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoPoints {
    labeling: IsoLabeling,
    k: Vec<usize>,
    displaced: u64,
}

impl IsoPoints {
    pub fn labeling(&self) -> &IsoLabeling {
        &self.labeling
    }

    /// `k[t]` = index of label `t`'s value in the member symbol.
    pub fn k(&self) -> &[usize] {
        &self.k
    }

    /// Mask of displaced labels.
    pub fn displaced(&self) -> u64 {
        self.displaced
    }

    /// The isolated indices in ascending position order.
    pub fn sorted_indices(&self) -> Vec<usize> {
        let mut v = self.k.clone();
        v.sort_unstable();
        v
    }

    /// Labels whose index lies inside the block.
    pub fn labels_in_block(&self, block: &UBlock) -> u64 {
        let mut mask = 0u64;
        for (t, &idx) in self.k.iter().enumerate() {
            if block.contains(idx) {
                mask |= 1 << t;
            }
        }
        mask
    }

    /// The block's character set: its isolated points, or their complement
    /// when the block holds an odd number of them.
    pub fn lambda_of(&self, block: &UBlock) -> u64 {
        let inside = self.labels_in_block(block);
        if inside.count_ones() % 2 == 0 {
            inside
        } else {
            self.labeling.all_labels() ^ inside
        }
    }

    /// The block's displaced isolated points.
    pub fn m_of(&self, block: &UBlock) -> u64 {
        self.labels_in_block(block) & self.displaced
    }

    /// Additive extension of [`IsoPoints::lambda_of`] over a block subset
    /// (bitmask over `blocks`), complement rule applied per block first.
    pub fn lambda_of_set(&self, blocks: &[UBlock], mask: u64) -> u64 {
        blocks
            .iter()
            .enumerate()
            .filter(|&(q, _)| mask >> q & 1 == 1)
            .fold(0u64, |acc, (_, b)| acc ^ self.lambda_of(b))
    }

    /// Sum of [`IsoPoints::m_of`] over a block subset.
    pub fn m_of_set(&self, blocks: &[UBlock], mask: u64) -> u64 {
        blocks
            .iter()
            .enumerate()
            .filter(|&(q, _)| mask >> q & 1 == 1)
            .fold(0u64, |acc, (_, b)| acc ^ self.m_of(b))
    }
}

/// The nondecreasing arrangement of a symbol's entry multiset: the special
/// symbol of its congruence class.
///
/// # Errors
///
/// [`StructureError::NotSpecial`] for u-symbol input;
/// [`StructureError::NotInFamily`] if the sorted multiset fails validation
/// (possible only with perturbed tables).
pub fn special_arrangement(tables: &Tables, symbol: &Seq) -> Result<Seq, StructureError> {
    if symbol.kind() != Kind::Symbol {
        return Err(StructureError::NotSpecial);
    }
    let mut entries = symbol.entries().to_vec();
    entries.sort_unstable();
    tables
        .validate(symbol.series(), Kind::Symbol, symbol.n(), symbol.m(), entries)
        .map_err(|e| StructureError::NotInFamily {
            detail: format!("sorted entry multiset is not a valid symbol: {e}"),
        })
}

/// Isolated point data of a u-symbol, resolved through its symbol image
/// and the special symbol of the symbol's congruence class.
///
/// # Errors
///
/// Propagates labeling construction errors; [`StructureError::NotInFamily`]
/// when the u-symbol has no valid symbol image (perturbed tables only).
pub fn isolated(tables: &Tables, u: &Seq) -> Result<IsoPoints, StructureError> {
    let symbol = tables
        .i_bijection(u)
        .map_err(|e| StructureError::NotInFamily {
            detail: format!("u-symbol has no symbol image: {e}"),
        })?;
    let special = special_arrangement(tables, &symbol)?;
    let labeling = IsoLabeling::from_special(tables, &special)?;
    labeling.points_of(&symbol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables() -> Tables {
        Tables::standard()
    }

    fn useq(series: Series, n: u32, m: u32, entries: &[u32]) -> Seq {
        tables()
            .validate(series, Kind::USymbol, n, m, entries.to_vec())
            .expect("test u-symbol should validate")
    }

    fn sym(series: Series, n: u32, m: u32, entries: &[u32]) -> Seq {
        tables()
            .validate(series, Kind::Symbol, n, m, entries.to_vec())
            .expect("test symbol should validate")
    }

    fn part(kind: PartKind, lo: usize, hi: usize) -> Part {
        Part { kind, lo, hi }
    }

    #[test]
    fn parts_of_small_u_symbols() {
        use PartKind::*;
        let cases: Vec<(Seq, Vec<Part>)> = vec![
            (
                useq(Series::C, 2, 1, &[1, 1, 3]),
                vec![part(Staircase, 0, 1), part(Ladder, 2, 2)],
            ),
            (
                useq(Series::C, 2, 1, &[0, 1, 4]),
                vec![part(Ladder, 0, 1), part(Ladder, 2, 2)],
            ),
            (
                useq(Series::C, 2, 1, &[0, 2, 3]),
                vec![part(Ladder, 0, 0), part(Ladder, 1, 2)],
            ),
            (
                useq(Series::C, 2, 2, &[0, 2, 2, 4, 4]),
                vec![part(Ladder, 0, 0), part(Staircase, 1, 4)],
            ),
            (
                useq(Series::B, 2, 1, &[0, 1, 3]),
                vec![part(Ladder, 0, 1), part(Ladder, 2, 2)],
            ),
            (
                useq(Series::D, 2, 1, &[0, 1, 2, 3]),
                vec![part(Ladder, 0, 3)],
            ),
            (
                useq(Series::D, 4, 1, &[1, 1, 3, 3]),
                vec![part(Staircase, 0, 3)],
            ),
        ];
        for (u, expected) in cases {
            assert_eq!(parts(&u).unwrap(), expected, "parts of {u}");
        }
    }

    #[test]
    fn parts_rejects_non_distinguished_input() {
        let u = useq(Series::C, 2, 1, &[0, 3, 2]);
        assert_eq!(parts(&u).unwrap_err(), StructureError::NotDistinguished);

        let s = sym(Series::C, 2, 1, &[0, 1, 2]);
        assert_eq!(parts(&s).unwrap_err(), StructureError::NotDistinguished);
    }

    fn block(
        lo: usize,
        hi: usize,
        part_lo: usize,
        part_hi: usize,
        missing_end: Option<End>,
    ) -> UBlock {
        UBlock {
            lo,
            hi,
            part_lo,
            part_hi,
            missing_end,
        }
    }

    #[test]
    fn blocks_in_series_c_have_one_bottomless_block() {
        let t = tables();

        let d = u_blocks(&t, &useq(Series::C, 2, 1, &[0, 2, 3])).unwrap();
        assert_eq!(
            d.blocks,
            vec![
                block(0, 0, 0, 0, Some(End::Bottom)),
                block(1, 2, 1, 1, None),
            ]
        );

        let d = u_blocks(&t, &useq(Series::C, 2, 1, &[1, 1, 3])).unwrap();
        assert_eq!(d.blocks, vec![block(0, 2, 0, 1, Some(End::Bottom))]);

        let d = u_blocks(&t, &useq(Series::C, 2, 1, &[0, 1, 4])).unwrap();
        assert_eq!(d.blocks, vec![block(0, 2, 0, 1, Some(End::Bottom))]);

        // The staircase stays outside; only the leading ladder is covered.
        let d = u_blocks(&t, &useq(Series::C, 2, 2, &[0, 2, 2, 4, 4])).unwrap();
        assert_eq!(d.blocks, vec![block(0, 0, 0, 0, Some(End::Bottom))]);
    }

    #[test]
    fn blocks_in_series_b_have_one_topless_block() {
        let d = u_blocks(&tables(), &useq(Series::B, 2, 1, &[0, 1, 3])).unwrap();
        assert_eq!(
            d.blocks,
            vec![block(0, 1, 0, 0, None), block(2, 2, 1, 1, Some(End::Top))]
        );
    }

    #[test]
    fn blocks_in_series_d_are_closed_and_possibly_absent() {
        let t = tables();
        let d = u_blocks(&t, &useq(Series::D, 2, 1, &[0, 1, 2, 3])).unwrap();
        assert_eq!(d.blocks, vec![block(0, 3, 0, 0, None)]);

        let d = u_blocks(&t, &useq(Series::D, 4, 1, &[1, 1, 3, 3])).unwrap();
        assert_eq!(d.blocks, Vec::<UBlock>::new());
    }

    #[test]
    fn ladder_indices_skip_staircases() {
        let t = tables();
        let d = u_blocks(&t, &useq(Series::C, 2, 1, &[1, 1, 3])).unwrap();
        assert_eq!(d.ladder_indices(&d.blocks[0]), vec![2]);
        assert_eq!(d.ladder_indices_of_set(0b1), vec![2]);
        assert_eq!(d.ladder_indices_of_set(0), Vec::<usize>::new());
    }

    #[test]
    fn solve_f2_finds_and_rejects_expansions() {
        let columns = [0b011u64, 0b110];
        assert_eq!(solve_f2(&columns, 0b011), Some(0b01));
        assert_eq!(solve_f2(&columns, 0b101), Some(0b11));
        assert_eq!(solve_f2(&columns, 0b111), None);
        assert_eq!(solve_f2(&columns, 0), Some(0));
        assert_eq!(solve_f2(&[], 0b1), None);
    }

    #[test]
    fn labeling_of_the_rank_two_series_c_family() {
        let labeling =
            IsoLabeling::from_special(&tables(), &sym(Series::C, 2, 1, &[0, 1, 2])).unwrap();
        assert_eq!(labeling.f(), 1);
        assert_eq!(labeling.iso_values(), &[0, 1, 2]);
        assert_eq!(labeling.special_indices(), &[0, 1, 2]);
        assert_eq!(labeling.e_hat_all(), &[0b110, 0b011, 0b110]);
    }

    #[test]
    fn labeling_of_series_b_wraps_at_the_high_end() {
        let labeling =
            IsoLabeling::from_special(&tables(), &sym(Series::B, 2, 1, &[0, 1, 2])).unwrap();
        assert_eq!(labeling.f(), 1);
        assert_eq!(labeling.e_hat_all(), &[0b011, 0b110, 0b011]);
    }

    #[test]
    fn labeling_of_series_d_chains_without_wrapping() {
        let t = tables();
        let labeling =
            IsoLabeling::from_special(&t, &sym(Series::D, 4, 1, &[0, 1, 2, 3])).unwrap();
        assert_eq!(labeling.f(), 1);
        assert_eq!(labeling.e_hat_all(), &[0b0011, 0b0110, 0b1100]);

        // Doubled middle value: two isolated points, group exponent zero.
        let labeling =
            IsoLabeling::from_special(&t, &sym(Series::D, 2, 1, &[0, 1, 1, 2])).unwrap();
        assert_eq!(labeling.f(), 0);
        assert_eq!(labeling.iso_values(), &[0, 2]);
        assert_eq!(labeling.e_hat_all(), &[0b11]);
    }

    #[test]
    fn basis_relation_per_series() {
        let t = tables();
        let cases = [
            (sym(Series::C, 2, 1, &[0, 1, 2]), 0u64),
            (sym(Series::B, 2, 1, &[0, 1, 2]), 0),
            (sym(Series::D, 4, 1, &[0, 1, 2, 3]), 0b1111),
        ];
        for (special, expected) in cases {
            let labeling = IsoLabeling::from_special(&t, &special).unwrap();
            let even_sum = labeling
                .e_hat_all()
                .iter()
                .step_by(2)
                .fold(0u64, |acc, &m| acc ^ m);
            assert_eq!(even_sum, expected, "series {}", special.series());
        }
    }

    #[test]
    fn displaced_labels_compare_index_parity_against_the_special_symbol() {
        let t = tables();
        let labeling = IsoLabeling::from_special(&t, &sym(Series::C, 2, 1, &[0, 1, 2])).unwrap();

        let member = sym(Series::C, 2, 1, &[1, 0, 2]);
        let points = labeling.points_of(&member).unwrap();
        assert_eq!(points.k(), &[1, 0, 2]);
        assert_eq!(points.displaced(), 0b011);

        let member = sym(Series::C, 2, 1, &[0, 2, 1]);
        assert_eq!(labeling.displaced_labels(&member).unwrap(), 0b110);

        assert_eq!(
            labeling
                .displaced_labels(&sym(Series::C, 2, 1, &[0, 1, 2]))
                .unwrap(),
            0
        );
    }

    #[test]
    fn label_lookup_rejects_foreign_symbols() {
        let t = tables();
        let labeling = IsoLabeling::from_special(&t, &sym(Series::C, 2, 1, &[0, 1, 2])).unwrap();
        let outside = sym(Series::C, 2, 1, &[0, 0, 3]);
        assert!(matches!(
            labeling.label_indices(&outside),
            Err(StructureError::NotInFamily { .. })
        ));
    }

    #[test]
    fn pi_projects_label_pairs_to_basis_vectors() {
        let t = tables();
        let labeling = IsoLabeling::from_special(&t, &sym(Series::C, 2, 1, &[0, 1, 2])).unwrap();
        let space = labeling.space();

        assert_eq!(labeling.pi(0).unwrap(), space.zero());
        assert_eq!(labeling.pi(0b011).unwrap(), space.basis(1));
        assert_eq!(labeling.pi(0b110).unwrap(), space.basis(2));
        assert_eq!(
            labeling.pi(0b101).unwrap(),
            space.basis(1).add(space.basis(2))
        );
        assert_eq!(
            labeling.pi(0b001).unwrap_err(),
            StructureError::OddCardinality
        );
    }

    #[test]
    fn pi_is_injective_on_even_label_sets_in_series_b_and_c() {
        let t = tables();
        for special in [sym(Series::C, 2, 1, &[0, 1, 2]), sym(Series::B, 2, 1, &[0, 1, 2])] {
            let labeling = IsoLabeling::from_special(&t, &special).unwrap();
            let p = labeling.point_count();
            let mut images = Vec::new();
            for mask in 0..(1u64 << p) {
                if mask.count_ones() % 2 == 0 {
                    images.push(labeling.pi(mask).unwrap());
                }
            }
            let total = images.len();
            images.sort_unstable();
            images.dedup();
            assert_eq!(images.len(), total, "series {}", special.series());
        }
    }

    #[test]
    fn pi_is_two_to_one_in_series_d_and_kills_the_full_label_set() {
        let t = tables();
        let labeling =
            IsoLabeling::from_special(&t, &sym(Series::D, 4, 1, &[0, 1, 2, 3])).unwrap();
        assert_eq!(
            labeling.pi(labeling.all_labels()).unwrap(),
            labeling.space().zero()
        );
        let mut by_image = std::collections::BTreeMap::new();
        for mask in 0..(1u64 << labeling.point_count()) {
            if mask.count_ones() % 2 == 0 {
                *by_image.entry(labeling.pi(mask).unwrap()).or_insert(0) += 1;
            }
        }
        assert!(by_image.values().all(|&c| c == 2));
    }

    /// The form on label sets (intersection size mod 2) must agree with
    /// the cell space form under projection; this pins the basis masks.
    #[test]
    fn pi_is_an_isometry_in_series_b_and_c() {
        let t = tables();
        let specials = [
            sym(Series::C, 2, 1, &[0, 1, 2]),
            sym(Series::B, 2, 1, &[0, 1, 2]),
            sym(Series::C, 6, 2, &[0, 1, 2, 3, 4]),
        ];
        for special in specials {
            let labeling = IsoLabeling::from_special(&t, &special).unwrap();
            let p = labeling.point_count();
            for v in 0..(1u64 << p) {
                if v.count_ones() % 2 != 0 {
                    continue;
                }
                for w in 0..(1u64 << p) {
                    if w.count_ones() % 2 != 0 {
                        continue;
                    }
                    let set_form = ((v & w).count_ones() % 2) as u8;
                    let image_form = labeling.pi(v).unwrap().pairing(labeling.pi(w).unwrap());
                    assert_eq!(
                        set_form, image_form,
                        "series {} {} f={}, v={v:b}, w={w:b}",
                        special.series(),
                        special,
                        labeling.f()
                    );
                }
            }
        }
    }

    #[test]
    fn lambda_takes_the_complement_on_odd_blocks() {
        let t = tables();

        // All three isolated points sit in the single bottomless block, so
        // the character set is the (empty) complement and the displaced
        // pair survives in m.
        let u = useq(Series::C, 2, 1, &[1, 1, 3]);
        let d = u_blocks(&t, &u).unwrap();
        let points = isolated(&t, &u).unwrap();
        assert_eq!(points.k(), &[1, 0, 2]);
        assert_eq!(points.displaced(), 0b011);
        assert_eq!(points.labels_in_block(&d.blocks[0]), 0b111);
        assert_eq!(points.lambda_of(&d.blocks[0]), 0);
        assert_eq!(points.m_of(&d.blocks[0]), 0b011);

        let u = useq(Series::C, 2, 1, &[0, 2, 3]);
        let d = u_blocks(&t, &u).unwrap();
        let points = isolated(&t, &u).unwrap();
        assert_eq!(points.displaced(), 0);
        assert_eq!(points.lambda_of(&d.blocks[0]), 0b110);
        assert_eq!(points.lambda_of(&d.blocks[1]), 0b110);
        assert_eq!(points.m_of(&d.blocks[0]), 0);
        assert_eq!(points.lambda_of_set(&d.blocks, 0b11), 0);
        assert_eq!(points.m_of_set(&d.blocks, 0b11), 0);
    }

    #[test]
    fn special_arrangement_sorts_the_multiset() {
        let t = tables();
        let s = sym(Series::C, 2, 1, &[1, 0, 2]);
        assert_eq!(special_arrangement(&t, &s).unwrap().entries(), &[0, 1, 2]);

        let u = useq(Series::C, 2, 1, &[0, 2, 3]);
        assert_eq!(
            special_arrangement(&t, &u).unwrap_err(),
            StructureError::NotSpecial
        );
    }
}
