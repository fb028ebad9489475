//! Families, piece classes, and the two routes around the main diagram.
//!
//! A *family* is a congruence class of symbols, anchored at its special
//! (nondecreasing) member, together with the label space of that special
//! symbol. The distinguished u-symbols whose symbol image is congruent to
//! the special symbol split the family into *piece classes*; each piece
//! class carries a block decomposition and a class invariant `t` in the
//! group part of the cell space.
//!
//! Twisting a distinguished u-symbol by the ladder indices of a block
//! subset walks through the class's *transversal*; applying the bijection
//! `i` lands on a member symbol of the family. The theorem identifies the
//! invariant of that member, computed from displaced labels, with the pair
//! `(t, pi(lambda))` read off from the blocks alone.

use crate::error::FamilyError;
use crate::f2space::{group_block_decomp, F2Vector};
use crate::series::{End, Series, Tables};
use crate::structure::{u_blocks, BlockDecomp, IsoLabeling, IsoPoints, UBlock};
use crate::symbols::{Seq, SeqClass};

/// One congruence class of distinguished u-symbols inside a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceClass {
    /// The distinguished (nondecreasing) u-symbol of the class.
    pub canonical: Seq,
    /// Every u-symbol congruent to `canonical`, sorted.
    pub members: Vec<Seq>,
    /// The symbol image `i(canonical)`.
    pub symbol: Seq,
    /// Parts and blocks of `canonical`.
    pub decomp: BlockDecomp,
    /// Isolated point data of `symbol` under the family labeling.
    pub points: IsoPoints,
    /// The class invariant: the group element `kappa(symbol)`.
    pub t: F2Vector,
}

/// A symbol congruence class with its label space and piece classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    /// The special (nondecreasing) symbol.
    pub special: Seq,
    /// Every symbol congruent to `special`, sorted.
    pub members: Vec<Seq>,
    pub labeling: IsoLabeling,
    /// Piece classes sorted by their distinguished u-symbol.
    pub pieces: Vec<PieceClass>,
}

impl Family {
    /// Build a family from one symbol class, selecting its piece classes
    /// out of the u-symbol classes of the same level.
    ///
    /// # Errors
    ///
    /// Labeling construction and block decomposition errors propagate;
    /// [`FamilyError::NonTrivialCharacterPart`] when a piece class's
    /// invariant is not a group element.
    pub fn assemble(
        tables: &Tables,
        symbol_class: &SeqClass,
        usymbol_classes: &[SeqClass],
    ) -> Result<Family, FamilyError> {
        let special = symbol_class.canonical.clone();
        let labeling = IsoLabeling::from_special(tables, &special)?;
        let mut members = symbol_class.members.clone();
        members.sort_by(|a, b| a.entries().cmp(b.entries()));

        let mut pieces = Vec::new();
        for class in usymbol_classes {
            let symbol = tables.i_bijection(&class.canonical)?;
            let mut multiset = symbol.entries().to_vec();
            multiset.sort_unstable();
            if multiset != special.entries() {
                continue;
            }
            let decomp = u_blocks(tables, &class.canonical)?;
            let points = labeling.points_of(&symbol)?;
            let t = t_of_class(&labeling, &symbol)?;
            let mut piece_members = class.members.clone();
            piece_members.sort_by(|a, b| a.entries().cmp(b.entries()));
            pieces.push(PieceClass {
                canonical: class.canonical.clone(),
                members: piece_members,
                symbol,
                decomp,
                points,
                t,
            });
        }
        pieces.sort_by(|a, b| a.canonical.entries().cmp(b.canonical.entries()));
        Ok(Family {
            special,
            members,
            labeling,
            pieces,
        })
    }

    pub fn series(&self) -> Series {
        self.special.series()
    }
}

/// The blockwise displaced-label sum of a piece class's symbol image.
pub fn kappa_tilde(points: &IsoPoints, decomp: &BlockDecomp) -> u64 {
    let all = match decomp.blocks.len() {
        0 => 0,
        count => (1u64 << count) - 1,
    };
    points.m_of_set(&decomp.blocks, all)
}

/// The class invariant of a member symbol: project its displaced labels
/// into the cell space.
///
/// # Errors
///
/// Propagates [`crate::error::StructureError`] from label lookup and
/// projection.
pub fn kappa(labeling: &IsoLabeling, member: &Seq) -> Result<F2Vector, FamilyError> {
    let displaced = labeling.displaced_labels(member)?;
    Ok(labeling.pi(displaced)?)
}

/// The `t`-value of a piece class: `kappa` of its symbol image, which the
/// theorems require to be a pure group element.
///
/// # Errors
///
/// [`FamilyError::NonTrivialCharacterPart`] when the invariant has a
/// character component.
pub fn t_of_class(labeling: &IsoLabeling, symbol: &Seq) -> Result<F2Vector, FamilyError> {
    let value = kappa(labeling, symbol)?;
    if !value.character_part().is_zero() {
        return Err(FamilyError::NonTrivialCharacterPart {
            detail: format!("kappa({symbol}) = {value}"),
        });
    }
    Ok(value)
}

fn mask_to_set(mask: u64) -> String {
    let indices: Vec<String> = (0..64)
        .filter(|&q| mask >> q & 1 == 1)
        .map(|q| q.to_string())
        .collect();
    format!("{{{}}}", indices.join(","))
}

/// The twistable block subsets of a distinguished u-symbol, as sorted
/// bitmasks over `decomp.blocks`, verified against the series rule.
///
/// Series C admits exactly the subsets avoiding the bottomless block and
/// series B those avoiding the topless one. In series D exactly one of
/// each complementary pair twists (every subset does when there are no
/// blocks at all).
///
/// # Errors
///
/// [`FamilyError::TransversalMismatch`] when the directly twistable
/// subsets disagree with the rule.
pub fn transversal(
    tables: &Tables,
    canonical: &Seq,
    decomp: &BlockDecomp,
) -> Result<Vec<u64>, FamilyError> {
    let count = decomp.blocks.len();
    let mut direct = Vec::new();
    for mask in 0..(1u64 << count) {
        let mu = decomp.ladder_indices_of_set(mask);
        if tables.twist(canonical, &mu)?.is_some() {
            direct.push(mask);
        }
    }
    let mismatch = |detail: String| Err(FamilyError::TransversalMismatch { detail });
    match canonical.series() {
        series @ (Series::B | Series::C) => {
            let missing = if series == Series::C {
                End::Bottom
            } else {
                End::Top
            };
            let Some(open) = decomp
                .blocks
                .iter()
                .position(|b| b.missing_end == Some(missing))
            else {
                return mismatch(format!("{canonical} has no open block"));
            };
            let predicted: Vec<u64> = (0..(1u64 << count))
                .filter(|m| m >> open & 1 == 0)
                .collect();
            if direct != predicted {
                return mismatch(format!(
                    "{canonical}: twistable sets {:?} differ from subsets avoiding block {open}",
                    direct.iter().map(|&m| mask_to_set(m)).collect::<Vec<_>>(),
                ));
            }
        }
        Series::D => {
            if count == 0 {
                if direct != [0] {
                    return mismatch(format!(
                        "{canonical} has no blocks, so only the empty set should twist"
                    ));
                }
            } else {
                let full = (1u64 << count) - 1;
                for mask in 0..(1u64 << count) {
                    let here = direct.binary_search(&mask).is_ok();
                    let there = direct.binary_search(&(mask ^ full)).is_ok();
                    if here == there {
                        return mismatch(format!(
                            "{canonical}: block sets {} and {} are {}",
                            mask_to_set(mask),
                            mask_to_set(mask ^ full),
                            if here {
                                "both twistable"
                            } else {
                                "both untwistable"
                            },
                        ));
                    }
                }
            }
        }
    }
    Ok(direct)
}

/// Recover the ladder-twist index set turning one distinguished u-symbol
/// into a congruent member: the indices of the unrepeated values that
/// switch row parity.
///
/// # Errors
///
/// [`FamilyError::NotInFamily`] when the entry multisets differ;
/// [`FamilyError::NoTwistFound`] when the recovered set does not twist
/// `canonical` onto `member`.
pub fn nu_tilde(tables: &Tables, canonical: &Seq, member: &Seq) -> Result<Vec<usize>, FamilyError> {
    let mut left = canonical.entries().to_vec();
    let mut right = member.entries().to_vec();
    left.sort_unstable();
    right.sort_unstable();
    if canonical.series() != member.series()
        || canonical.kind() != member.kind()
        || left != right
    {
        return Err(FamilyError::NotInFamily);
    }
    let entries = canonical.entries();
    let mut mu = Vec::new();
    for (idx, &v) in entries.iter().enumerate() {
        if entries.iter().filter(|&&w| w == v).count() > 1 {
            continue;
        }
        let target = member
            .entries()
            .iter()
            .position(|&w| w == v)
            .expect("equal multisets");
        if idx % 2 != target % 2 {
            mu.push(idx);
        }
    }
    match tables.twist(canonical, &mu)? {
        Some(twisted) if twisted == *member => Ok(mu),
        _ => Err(FamilyError::NoTwistFound {
            detail: format!(
                "parity-switched indices {mu:?} do not carry {canonical} onto {member}"
            ),
        }),
    }
}

/// The block subset whose ladder indices are exactly `mu`, if one exists.
pub fn block_set_for_indices(decomp: &BlockDecomp, mu: &[usize]) -> Option<u64> {
    let mut mask = 0u64;
    for (q, block) in decomp.blocks.iter().enumerate() {
        if decomp.ladder_indices(block).iter().all(|i| mu.contains(i)) {
            mask |= 1 << q;
        }
    }
    (decomp.ladder_indices_of_set(mask) == mu).then_some(mask)
}

/// Both routes from a piece class to a member symbol: twist the u-symbol
/// by a block subset and map through `i`, or map first and twist the
/// symbol by the matching label set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutePair {
    /// `i(canonical twisted by the blocks' ladder indices)`.
    pub via_blocks: Seq,
    /// `i(canonical)` twisted by the indices of `lambda`.
    pub via_labels: Seq,
}

impl CommutePair {
    pub fn agrees(&self) -> bool {
        self.via_blocks == self.via_labels
    }
}

/// Compute both routes of the commuting square for one block subset.
///
/// # Errors
///
/// [`FamilyError::NoTwistFound`] when either twist produces an invalid
/// sequence; twist and map errors propagate.
pub fn commute_check(
    tables: &Tables,
    piece: &PieceClass,
    block_mask: u64,
) -> Result<CommutePair, FamilyError> {
    let mu = piece.decomp.ladder_indices_of_set(block_mask);
    let twisted = tables
        .twist(&piece.canonical, &mu)?
        .ok_or_else(|| FamilyError::NoTwistFound {
            detail: format!(
                "block set {} does not twist {}",
                mask_to_set(block_mask),
                piece.canonical
            ),
        })?;
    let via_blocks = tables.i_bijection(&twisted)?;

    let labeling = piece.points.labeling();
    let lambda = piece.points.lambda_of_set(&piece.decomp.blocks, block_mask);
    let indices = labeling.label_mask_to_indices(&piece.symbol, lambda)?;
    let via_labels = tables
        .twist(&piece.symbol, &indices)?
        .ok_or_else(|| FamilyError::NoTwistFound {
            detail: format!(
                "label set {} does not twist {}",
                mask_to_set(lambda),
                piece.symbol
            ),
        })?;
    Ok(CommutePair {
        via_blocks,
        via_labels,
    })
}

/// The theorem-side data of one transversal element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramRow {
    /// Bitmask over the piece class's blocks.
    pub block_mask: u64,
    /// The twisted u-symbol `a^b`.
    pub twisted: Seq,
    /// The member symbol `i(a^b)`.
    pub member: Seq,
    /// `kappa(member)`, canonical.
    pub kappa: F2Vector,
    /// `pi(lambda_b)`, canonical.
    pub lambda_image: F2Vector,
    /// `t + pi(lambda_b)`, canonical.
    pub expected: F2Vector,
    /// Whether both routes of the commuting square agree.
    pub commutes: bool,
    /// Whether `kappa` of the label-twisted symbol equals `expected`.
    pub label_route_holds: bool,
    /// Whether `kappa == expected`.
    pub holds: bool,
}

/// Walk the full transversal of a piece class and evaluate the theorem's
/// diagram on every element.
///
/// # Errors
///
/// Transversal, twist, and labeling errors propagate;
/// [`FamilyError::CharacterOutsideSpan`] when some `pi(lambda_b)` leaves
/// the span of the blocks of `t`.
pub fn theorem_diagram(
    tables: &Tables,
    piece: &PieceClass,
) -> Result<Vec<DiagramRow>, FamilyError> {
    let labeling = piece.points.labeling();
    let masks = transversal(tables, &piece.canonical, &piece.decomp)?;
    let span = crate::f2space::irr_mod_parabolic(piece.t);
    let mut rows = Vec::with_capacity(masks.len());
    for mask in masks {
        let mu = piece.decomp.ladder_indices_of_set(mask);
        let twisted = tables
            .twist(&piece.canonical, &mu)?
            .ok_or_else(|| FamilyError::NoTwistFound {
                detail: format!(
                    "transversal member {} does not twist {}",
                    mask_to_set(mask),
                    piece.canonical
                ),
            })?;
        let member = tables.i_bijection(&twisted)?;
        let kappa_value = kappa(labeling, &member)?;

        let lambda = piece.points.lambda_of_set(&piece.decomp.blocks, mask);
        let lambda_image = labeling.pi(lambda)?;
        if !span.contains(&lambda_image.canonical()) {
            return Err(FamilyError::CharacterOutsideSpan {
                detail: format!(
                    "pi(lambda) = {lambda_image} for block set {} of {}, t = {}",
                    mask_to_set(mask),
                    piece.canonical,
                    piece.t
                ),
            });
        }
        let expected = piece.t.add(lambda_image).canonical();
        let pair = commute_check(tables, piece, mask)?;
        let label_route = kappa(labeling, &pair.via_labels)?;
        rows.push(DiagramRow {
            block_mask: mask,
            twisted,
            member,
            kappa: kappa_value,
            lambda_image,
            expected,
            commutes: pair.agrees(),
            label_route_holds: label_route == expected,
            holds: kappa_value == expected,
        });
    }
    Ok(rows)
}

/// The labeled set attached to a piece class: one `(t, pi(lambda_b))`
/// pair per transversal member.
///
/// # Errors
///
/// Transversal and projection errors propagate.
pub fn big_t(tables: &Tables, piece: &PieceClass) -> Result<Vec<(F2Vector, F2Vector)>, FamilyError> {
    let labeling = piece.points.labeling();
    transversal(tables, &piece.canonical, &piece.decomp)?
        .into_iter()
        .map(|mask| {
            let lambda = piece.points.lambda_of_set(&piece.decomp.blocks, mask);
            let image = labeling.pi(lambda)?;
            Ok((piece.t, image.canonical()))
        })
        .collect()
}

/// Both sides of the block correspondence: the projected character sets of
/// the u-symbol's blocks, and the block sums of the group element `t`,
/// each as sorted canonical representatives.
///
/// # Errors
///
/// Projection errors propagate.
pub fn group_blocks_match(piece: &PieceClass) -> Result<(Vec<F2Vector>, Vec<F2Vector>), FamilyError> {
    let labeling = piece.points.labeling();
    let mut left = Vec::with_capacity(piece.decomp.blocks.len());
    for block in &piece.decomp.blocks {
        let lambda = piece.points.lambda_of(block);
        left.push(labeling.pi(lambda)?.canonical());
    }
    let mut right: Vec<F2Vector> = group_block_decomp(piece.t)
        .blocks()
        .map(F2Vector::canonical)
        .collect();
    left.sort_unstable();
    right.sort_unstable();
    Ok((left, right))
}

/// The isolated points a block contributes, split by block ends, for the
/// positional checks: `(bottom, interior, top)` label masks.
pub fn block_end_labels(points: &IsoPoints, block: &UBlock) -> (u64, u64, u64) {
    let mut bottom = 0u64;
    let mut top = 0u64;
    let mut interior = 0u64;
    for (t, &idx) in points.k().iter().enumerate() {
        if !block.contains(idx) {
            continue;
        }
        if block.bottom() == Some(idx) {
            bottom |= 1 << t;
        } else if block.top() == Some(idx) {
            top |= 1 << t;
        } else {
            interior |= 1 << t;
        }
    }
    (bottom, interior, top)
}
