//! The partition model of series C.
//!
//! Unipotent classes of the rank-`n` symplectic group correspond to
//! partitions of `2n` in which every odd part occurs an even number of
//! times. Such a partition, padded with zeros to odd length and read in
//! ascending order, maps to a distinguished u-symbol by an entrywise
//! formula; the map is a bijection onto the distinguished u-symbols of the
//! level. Closure of unipotent classes is the dominance order, which on
//! u-symbol entries becomes a tail-sum comparison.

use crate::error::{PartitionError, ValidationError};
use crate::series::{Kind, Series, Tables};
use crate::symbols::Seq;
use std::collections::HashMap;
use std::fmt;

/// A partition of `2n` with every odd part of even multiplicity, stored
/// as nonincreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartitionC {
    parts: Vec<u32>,
}

impl PartitionC {
    /// Normalize and admit a part list: zeros are dropped, order is
    /// ignored.
    ///
    /// # Errors
    ///
    /// [`PartitionError::NotAdmissible`] when an odd part occurs an odd
    /// number of times.
    pub fn new(mut parts: Vec<u32>) -> Result<PartitionC, PartitionError> {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let mut idx = 0;
        while idx < parts.len() {
            let mut end = idx + 1;
            while end < parts.len() && parts[end] == parts[idx] {
                end += 1;
            }
            let multiplicity = end - idx;
            if parts[idx] % 2 == 1 && multiplicity % 2 == 1 {
                return Err(PartitionError::NotAdmissible {
                    part: parts[idx],
                    multiplicity,
                });
            }
            idx = end;
        }
        Ok(PartitionC { parts })
    }

    /// The parts, nonincreasing, without zeros.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Sum of the parts (`2n`).
    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// The rank `n` of the group the partition belongs to.
    pub fn rank(&self) -> u32 {
        self.total() / 2
    }

    /// The parts in ascending order, zero-padded to `len` entries, or
    /// `None` when there are more parts than that.
    pub fn padded_ascending(&self, len: usize) -> Option<Vec<u32>> {
        if self.parts.len() > len {
            return None;
        }
        let mut out = vec![0u32; len - self.parts.len()];
        out.extend(self.parts.iter().rev());
        Some(out)
    }
}

impl fmt::Display for PartitionC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// All admissible partitions of `2n`, sorted descending lexicographically.
pub fn enumerate_partitions(n: u32) -> Vec<PartitionC> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn go(remaining: u32, max_part: u32, stack: &mut Vec<u32>, out: &mut Vec<PartitionC>) {
        if remaining == 0 {
            if let Ok(p) = PartitionC::new(stack.clone()) {
                out.push(p);
            }
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            stack.push(part);
            go(remaining - part, part, stack, out);
            stack.pop();
        }
    }
    go(2 * n, 2 * n, &mut stack, &mut out);
    out.sort_by(|a, b| b.parts.cmp(&a.parts));
    out
}

/// Map a partition to its distinguished u-symbol at level `m`.
///
/// The padded ascending parts `l_0 <= ... <= l_{2m}` give entries
/// `a_i = l_i/2 + i` for even parts; for an odd part the half rounds up or
/// down according to whether an odd or even number of odd parts sits above
/// index `i`.
///
/// # Errors
///
/// [`PartitionError::InvalidOutput`] when the partition has more parts
/// than the level holds, or (under perturbed tables) when the formula's
/// output fails validation.
pub fn usymbol_of_partition(
    tables: &Tables,
    partition: &PartitionC,
    m: u32,
) -> Result<Seq, PartitionError> {
    let n = partition.rank();
    let len = 2 * m as usize + 1;
    let lambda = partition.padded_ascending(len).ok_or({
        PartitionError::InvalidOutput(ValidationError::WrongLength {
            series: Series::C,
            kind: Kind::USymbol,
            m,
            expected: len,
            actual: partition.parts().len(),
        })
    })?;
    let mut odd_above = vec![0usize; len];
    for i in (0..len - 1).rev() {
        odd_above[i] = odd_above[i + 1] + usize::from(lambda[i + 1] % 2 == 1);
    }
    let entries: Vec<u32> = lambda
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let base = i as u32;
            if l % 2 == 0 {
                l / 2 + base
            } else if odd_above[i] % 2 == 1 {
                l.div_ceil(2) + base
            } else {
                (l - 1) / 2 + base
            }
        })
        .collect();
    tables
        .validate(Series::C, Kind::USymbol, n, m, entries)
        .map_err(PartitionError::InvalidOutput)
}

/// The partition-to-u-symbol map over every admissible partition of `2n`
/// at level `m`, resolvable in both directions.
#[derive(Debug, Clone)]
pub struct PartitionTable {
    pairs: Vec<(PartitionC, Seq)>,
    by_entries: HashMap<Vec<u32>, usize>,
}

impl PartitionTable {
    /// Map every admissible partition of `2n` through
    /// [`usymbol_of_partition`] at level `m`.
    ///
    /// # Errors
    ///
    /// Propagates the first failing image; at a stable level there is
    /// none.
    pub fn build(tables: &Tables, n: u32, m: u32) -> Result<PartitionTable, PartitionError> {
        let mut pairs = Vec::new();
        let mut by_entries = HashMap::new();
        for partition in enumerate_partitions(n) {
            let u = usymbol_of_partition(tables, &partition, m)?;
            by_entries.insert(u.entries().to_vec(), pairs.len());
            pairs.push((partition, u));
        }
        Ok(PartitionTable { pairs, by_entries })
    }

    pub fn pairs(&self) -> &[(PartitionC, Seq)] {
        &self.pairs
    }

    /// The partition mapping to this u-symbol, if any.
    pub fn partition_of(&self, u: &Seq) -> Option<&PartitionC> {
        self.by_entries
            .get(u.entries())
            .map(|&idx| &self.pairs[idx].0)
    }
}

/// Number of distinct even part-values whose lowest occurrence sits at
/// even height: the dimension of the quotient the theorem identifies
/// block-counting with.
pub fn abar_dimension(partition: &PartitionC) -> usize {
    let raw = partition.parts().len();
    let len = if raw % 2 == 0 { raw + 1 } else { raw };
    let lambda = partition
        .padded_ascending(len)
        .expect("padded length covers every part");
    let mut count = 0;
    let mut idx = 0;
    while idx < lambda.len() {
        let mut end = idx + 1;
        while end < lambda.len() && lambda[end] == lambda[idx] {
            end += 1;
        }
        // Height of the value is its start index plus one.
        if lambda[idx] % 2 == 0 && lambda[idx] > 0 && idx % 2 == 1 {
            count += 1;
        }
        idx = end;
    }
    count
}

/// Tail sum of the entries from index `j` on.
pub fn sigma(seq: &Seq, j: usize) -> u64 {
    seq.entries()[j.min(seq.len())..]
        .iter()
        .map(|&e| u64::from(e))
        .sum()
}

/// Whether the class of `left` lies in the closure of the class of
/// `right`: every tail sum of `left` is at most the matching tail sum of
/// `right`. Equivalent to dominance of the underlying partitions.
///
/// # Errors
///
/// [`PartitionError::LengthMismatch`] unless both sequences sit at the
/// same level.
pub fn closure_leq(left: &Seq, right: &Seq) -> Result<bool, PartitionError> {
    if left.len() != right.len() {
        return Err(PartitionError::LengthMismatch {
            left: left.len(),
            right: right.len(),
        });
    }
    Ok((0..left.len()).all(|j| sigma(left, j) <= sigma(right, j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::classify;

    fn tables() -> Tables {
        Tables::standard()
    }

    fn partition(parts: &[u32]) -> PartitionC {
        PartitionC::new(parts.to_vec()).expect("test partition should be admissible")
    }

    #[test]
    fn admissibility_requires_even_odd_multiplicities() {
        assert!(PartitionC::new(vec![3, 1]).is_err());
        assert_eq!(
            PartitionC::new(vec![3, 3, 3, 1]).unwrap_err(),
            PartitionError::NotAdmissible {
                part: 3,
                multiplicity: 3,
            }
        );
        assert_eq!(partition(&[0, 1, 2, 1]).parts(), &[2, 1, 1]);
    }

    #[test]
    fn enumerate_small_ranks() {
        let reprs: Vec<Vec<u32>> = enumerate_partitions(1)
            .iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(reprs, vec![vec![2], vec![1, 1]]);

        let reprs: Vec<Vec<u32>> = enumerate_partitions(2)
            .iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(
            reprs,
            vec![vec![4], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]
        );

        assert_eq!(enumerate_partitions(3).len(), 8);
    }

    #[test]
    fn partition_images_match_known_u_symbols() {
        let t = tables();
        let cases: Vec<(&[u32], u32, &[u32])> = vec![
            (&[4], 0, &[2]),
            (&[4], 1, &[0, 1, 4]),
            (&[2, 2], 1, &[0, 2, 3]),
            (&[2, 1, 1], 1, &[1, 1, 3]),
            (&[1, 1, 1, 1], 2, &[0, 2, 2, 4, 4]),
            (&[2, 2, 1, 1], 2, &[0, 2, 2, 4, 5]),
        ];
        for (parts, m, expected) in cases {
            let p = partition(parts);
            let u = usymbol_of_partition(&t, &p, m).unwrap();
            assert_eq!(u.entries(), expected, "image of {p} at level {m}");
            assert!(u.is_nondecreasing());
        }
    }

    #[test]
    fn too_few_slots_is_reported_as_wrong_length() {
        let t = tables();
        let p = partition(&[1, 1, 1, 1]);
        assert!(matches!(
            usymbol_of_partition(&t, &p, 1),
            Err(PartitionError::InvalidOutput(
                ValidationError::WrongLength { .. }
            ))
        ));
    }

    #[test]
    fn partition_map_hits_each_distinguished_u_symbol_once() {
        let t = tables();
        for n in 0..=5 {
            let stable = t.stabilized(Series::C, n).unwrap();
            let classes = classify(stable.of_kind(Kind::USymbol)).unwrap();
            let table = PartitionTable::build(&t, n, stable.m_star).unwrap();
            assert_eq!(
                table.pairs().len(),
                classes.len(),
                "class count at n = {n}"
            );
            for class in &classes {
                let found = table.partition_of(&class.canonical);
                assert!(
                    found.is_some(),
                    "no partition maps to {} at n = {n}",
                    class.canonical
                );
            }
        }
    }

    #[test]
    fn round_trip_through_the_table() {
        let t = tables();
        let table = PartitionTable::build(&t, 2, 2).unwrap();
        for (p, u) in table.pairs() {
            assert_eq!(table.partition_of(u), Some(p));
        }
        let foreign = t
            .validate(Series::C, Kind::USymbol, 2, 1, vec![0, 2, 3])
            .unwrap();
        assert_eq!(table.partition_of(&foreign), None);
    }

    #[test]
    fn abar_dimension_counts_even_values_at_even_height() {
        assert_eq!(abar_dimension(&partition(&[4])), 0);
        assert_eq!(abar_dimension(&partition(&[2, 2])), 1);
        assert_eq!(abar_dimension(&partition(&[2, 1, 1])), 0);
        assert_eq!(abar_dimension(&partition(&[1, 1, 1, 1])), 0);
        assert_eq!(abar_dimension(&partition(&[2, 2, 1, 1])), 1);
        assert_eq!(abar_dimension(&partition(&[4, 4, 2, 2])), 2);
        assert_eq!(abar_dimension(&partition(&[6, 4, 2])), 1);
    }

    #[test]
    fn closure_comparison_uses_tail_sums() {
        let t = tables();
        let lower = t
            .validate(Series::C, Kind::USymbol, 2, 1, vec![1, 1, 3])
            .unwrap();
        let upper = t
            .validate(Series::C, Kind::USymbol, 2, 1, vec![0, 2, 3])
            .unwrap();
        assert_eq!(closure_leq(&lower, &upper), Ok(true));
        assert_eq!(closure_leq(&upper, &lower), Ok(false));
        assert_eq!(closure_leq(&lower, &lower), Ok(true));

        let other_level = t
            .validate(Series::C, Kind::USymbol, 2, 2, vec![0, 1, 2, 4, 5])
            .unwrap();
        assert!(matches!(
            closure_leq(&lower, &other_level),
            Err(PartitionError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn dominance_matches_partition_dominance() {
        // (4) dominates (2,2) dominates (2,1,1) dominates (1,1,1,1).
        let t = tables();
        let table = PartitionTable::build(&t, 2, 2).unwrap();
        let chain = [
            partition(&[1, 1, 1, 1]),
            partition(&[2, 1, 1]),
            partition(&[2, 2]),
            partition(&[4]),
        ];
        let images: Vec<&Seq> = chain
            .iter()
            .map(|p| {
                table
                    .pairs()
                    .iter()
                    .find(|(q, _)| q == p)
                    .map(|(_, u)| u)
                    .unwrap()
            })
            .collect();
        for i in 0..images.len() {
            for j in 0..images.len() {
                assert_eq!(
                    closure_leq(images[i], images[j]).unwrap(),
                    i <= j,
                    "chain positions {i}, {j}"
                );
            }
        }
    }
}
