//! Bitset linear algebra for the finite groups attached to families.
//!
//! A family with group exponent `f` carries an elementary abelian group of
//! order `2^f`. Its combinatorics live in a `(2f+1)`-dimensional space over
//! the two-element field with basis `e_0, ..., e_{2f}`, together with the
//! quotient by the single relation `e_0 + e_2 + ... + e_{2f} = 0` (the
//! *cell space*) and the symmetric bilinear form `<e_i, e_j> = 1` iff
//! `|i - j| = 1`. Odd-indexed basis vectors span the group itself;
//! even-indexed ones span the character side.
//!
//! Vectors are stored as bits of a `u64` in the ambient `(2f+1)`-space.
//! Cell-space equality is "difference is 0 or the all-even vector"; the
//! canonical representative of a cell-space element is the lift without
//! `e_0`.

use serde::Serialize;
use std::fmt;

/// The ambient space of a family with group exponent `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupSpace {
    f: u32,
}

impl GroupSpace {
    /// Create the space for group exponent `f`.
    ///
    /// The bit width `2f + 1` must fit in a `u64`; desk-scale ranks stay
    /// far below the limit.
    pub fn new(f: u32) -> GroupSpace {
        assert!(2 * f < 63, "group exponent {f} exceeds bit capacity");
        GroupSpace { f }
    }

    /// The group exponent `f`.
    pub fn f(self) -> u32 {
        self.f
    }

    /// Dimension `2f + 1` of the ambient space.
    pub fn dim(self) -> u32 {
        2 * self.f + 1
    }

    /// Mask of all valid bits.
    pub fn full_mask(self) -> u64 {
        (1u64 << self.dim()) - 1
    }

    /// The all-even vector `e_0 + e_2 + ... + e_{2f}` (the cell-space
    /// relation, and the kernel of the form).
    pub fn even_mask(self) -> u64 {
        let mut mask = 0u64;
        let mut i = 0;
        while i < self.dim() {
            mask |= 1 << i;
            i += 2;
        }
        mask
    }

    /// Mask of the odd-indexed basis vectors (the group side).
    pub fn odd_mask(self) -> u64 {
        self.full_mask() & !self.even_mask()
    }

    /// The zero vector.
    pub fn zero(self) -> F2Vector {
        F2Vector {
            bits: 0,
            space: self,
        }
    }

    /// Basis vector `e_i`.
    pub fn basis(self, i: u32) -> F2Vector {
        assert!(i < self.dim(), "basis index {i} out of range");
        F2Vector {
            bits: 1 << i,
            space: self,
        }
    }

    /// A vector from raw bits (must fit the space).
    pub fn from_bits(self, bits: u64) -> F2Vector {
        assert_eq!(
            bits & !self.full_mask(),
            0,
            "bits exceed the space dimension"
        );
        F2Vector { bits, space: self }
    }

    /// A vector from a list of set indices.
    pub fn from_indices(self, indices: &[u32]) -> F2Vector {
        let mut bits = 0u64;
        for &i in indices {
            assert!(i < self.dim(), "index {i} out of range");
            bits |= 1 << i;
        }
        F2Vector { bits, space: self }
    }

    /// All `2^f` group elements (vectors supported on odd indices), in
    /// ascending bit order.
    pub fn group_elements(self) -> Vec<F2Vector> {
        let odd_positions: Vec<u32> = (0..self.f).map(|j| 2 * j + 1).collect();
        (0..(1u64 << self.f))
            .map(|combo| {
                let mut bits = 0u64;
                for (j, &pos) in odd_positions.iter().enumerate() {
                    if combo >> j & 1 == 1 {
                        bits |= 1 << pos;
                    }
                }
                F2Vector { bits, space: self }
            })
            .collect()
    }
}

/// A vector in the ambient space of a [`GroupSpace`].
///
/// Equality is exact (ambient-space) equality; use [`F2Vector::cell_eq`]
/// for equality in the cell-space quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct F2Vector {
    bits: u64,
    space: GroupSpace,
}

impl F2Vector {
    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn space(self) -> GroupSpace {
        self.space
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    /// Sum (exclusive or) of two vectors of the same space.
    pub fn add(self, other: F2Vector) -> F2Vector {
        assert_eq!(self.space, other.space, "mismatched ambient spaces");
        F2Vector {
            bits: self.bits ^ other.bits,
            space: self.space,
        }
    }

    /// The symmetric bilinear form: parity of the number of adjacent index
    /// pairs between the two supports. The all-even vector pairs to zero
    /// with everything, so the form descends to the cell space.
    pub fn pairing(self, other: F2Vector) -> u8 {
        assert_eq!(self.space, other.space, "mismatched ambient spaces");
        let ones = ((self.bits << 1) & other.bits).count_ones()
            + ((self.bits >> 1) & other.bits).count_ones();
        (ones % 2) as u8
    }

    /// Equality in the cell space: the difference is zero or the all-even
    /// vector.
    pub fn cell_eq(self, other: F2Vector) -> bool {
        assert_eq!(self.space, other.space, "mismatched ambient spaces");
        let diff = self.bits ^ other.bits;
        diff == 0 || diff == self.space.even_mask()
    }

    /// The canonical cell-space representative: of the two lifts, the one
    /// without `e_0`.
    pub fn canonical(self) -> F2Vector {
        if self.bits & 1 == 1 {
            F2Vector {
                bits: self.bits ^ self.space.even_mask(),
                space: self.space,
            }
        } else {
            self
        }
    }

    /// Whether the support uses only odd indices (a group element).
    pub fn is_group_element(self) -> bool {
        self.bits & self.space.even_mask() == 0
    }

    /// Whether the support uses only even indices (a character lift).
    pub fn is_character(self) -> bool {
        self.bits & self.space.odd_mask() == 0
    }

    /// The odd-indexed part (group component). Both lifts of a cell-space
    /// element agree here.
    pub fn group_part(self) -> F2Vector {
        F2Vector {
            bits: self.bits & self.space.odd_mask(),
            space: self.space,
        }
    }

    /// The even-indexed part as its canonical cell-space representative.
    pub fn character_part(self) -> F2Vector {
        F2Vector {
            bits: self.bits & self.space.even_mask(),
            space: self.space,
        }
        .canonical()
    }

    /// Sorted list of set indices.
    pub fn support(self) -> Vec<u32> {
        (0..self.space.dim()).filter(|&i| self.bits >> i & 1 == 1).collect()
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for i in self.support() {
            if !first {
                f.write_str("+")?;
            }
            write!(f, "e{i}")?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for F2Vector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.support().serialize(serializer)
    }
}

/// The blocks and components of a group element.
///
/// For a group element `x` with support `n(x)` on odd indices, a *block*
/// is a maximal run `e_i + e_{i+2} + ... + e_{i+2k}` of even-indexed basis
/// vectors whose interior odd indices all lie in `n(x)` and whose boundary
/// odd indices do not; its *component* is the sum of those interior odd
/// basis vectors. Every even index lies in exactly one block, the blocks
/// sum to zero in the cell space, and any proper subset of them is
/// independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupBlockDecomp {
    pub element: F2Vector,
    /// `(block, component)` pairs in ascending index order.
    pub entries: Vec<(F2Vector, F2Vector)>,
}

impl GroupBlockDecomp {
    /// The blocks alone.
    pub fn blocks(&self) -> impl Iterator<Item = F2Vector> + '_ {
        self.entries.iter().map(|&(b, _)| b)
    }

    /// The components alone.
    pub fn components(&self) -> impl Iterator<Item = F2Vector> + '_ {
        self.entries.iter().map(|&(_, c)| c)
    }
}

/// Decompose a group element into its blocks and components.
pub fn group_block_decomp(x: F2Vector) -> GroupBlockDecomp {
    assert!(x.is_group_element(), "blocks are defined for group elements");
    let space = x.space();
    let dim = space.dim();
    let mut entries = Vec::new();
    let mut i = 0u32;
    while i < dim {
        // Blocks start at even indices; extend while the odd index between
        // consecutive even indices lies in the support of x.
        let mut block = 1u64 << i;
        let mut component = 0u64;
        let mut top = i;
        while top + 2 < dim && x.bits() >> (top + 1) & 1 == 1 {
            component |= 1 << (top + 1);
            block |= 1 << (top + 2);
            top += 2;
        }
        entries.push((space.from_bits(block), space.from_bits(component)));
        i = top + 2;
    }
    GroupBlockDecomp {
        element: x,
        entries,
    }
}

/// The characters trivial on the parabolic subgroup of `x`: the span of
/// the blocks of `x` in the cell space, as sorted canonical
/// representatives.
pub fn irr_mod_parabolic(x: F2Vector) -> Vec<F2Vector> {
    let decomp = group_block_decomp(x);
    let blocks: Vec<F2Vector> = decomp.blocks().collect();
    span_canonical(x.space(), &blocks)
}

/// The cell-space span of a set of character lifts, as sorted canonical
/// representatives.
pub fn span_canonical(space: GroupSpace, generators: &[F2Vector]) -> Vec<F2Vector> {
    let mut elements: Vec<u64> = vec![space.zero().canonical().bits()];
    for &g in generators {
        let mut next: Vec<u64> = elements.clone();
        for &e in &elements {
            next.push(space.from_bits(e).add(g).canonical().bits());
        }
        next.sort_unstable();
        next.dedup();
        elements = next;
    }
    elements.into_iter().map(|bits| space.from_bits(bits)).collect()
}

/// The closure order on group elements: `x1 <= x2` iff the support of
/// `x2` is contained in the support of `x1`. The identity, with empty
/// support, is the unique maximum.
pub fn closure_leq(x1: F2Vector, x2: F2Vector) -> bool {
    assert_eq!(x1.space(), x2.space(), "mismatched ambient spaces");
    assert!(x1.is_group_element() && x2.is_group_element());
    x2.bits() & !x1.bits() == 0
}
