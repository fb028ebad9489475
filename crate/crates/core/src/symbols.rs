//! Symbols and u-symbols: validation, enumeration, shifts, the bijection
//! `i`, congruence/similarity classes, and twisting.
//!
//! A [`Seq`] is a validated integer sequence `(a_0, ..., a_r)` tagged with
//! its series, kind, rank `n`, and level `m`. Even-indexed entries form the
//! upper row, odd-indexed entries the lower row. All constructors go
//! through [`Tables::validate`], so holding a `Seq` means the shape
//! constraints held at construction time.
//!
//! Enumeration works level by level: the set of sequences at level `m`
//! embeds into level `m + 1` by the shift operation, and a level is
//! *stable* when every sequence one level up is such a shift. The smallest
//! stable level `m*` is found by checking, never assumed.

use crate::error::{
    ClassifyError, MapError, StabilizeError, TwistError, ValidationError,
};
use crate::series::{Kind, Series, Tables};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A validated symbol or u-symbol.
///
/// Deserialized values bypass validation; revalidate anything read from an
/// external source with [`Tables::revalidate`] before trusting it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Seq {
    series: Series,
    kind: Kind,
    n: u32,
    m: u32,
    entries: Vec<u32>,
}

impl Seq {
    pub fn series(&self) -> Series {
        self.series
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether the entries are nondecreasing, i.e. whether this is the
    /// special (symbol) or distinguished (u-symbol) member of its class.
    pub fn is_nondecreasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] <= w[1])
    }

    /// The congruence/similarity class key: sorted entry multiset.
    pub fn class_id(&self) -> ClassId {
        let mut key = self.entries.clone();
        key.sort_unstable();
        ClassId {
            kind: self.kind,
            key,
        }
    }

    /// Value of the entry at `index` (which must be in range).
    pub fn entry(&self, index: usize) -> u32 {
        self.entries[index]
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Congruence (symbols) or similarity (u-symbols) class key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassId {
    kind: Kind,
    key: Vec<u32>,
}

impl ClassId {
    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// The sorted entry multiset.
    pub fn key(&self) -> &[u32] {
        &self.key
    }
}

/// One congruence/similarity class: its id, its unique nondecreasing
/// member, and all members in sorted order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqClass {
    pub id: ClassId,
    pub canonical: Seq,
    pub members: Vec<Seq>,
}

/// Both kinds enumerated at their joint smallest stable level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableLevel {
    pub series: Series,
    pub n: u32,
    /// Smallest `m` at which both kinds pass the shift-saturation check.
    pub m_star: u32,
    pub symbols: Vec<Seq>,
    pub usymbols: Vec<Seq>,
}

impl StableLevel {
    /// The enumerated sequences of one kind.
    pub fn of_kind(&self, kind: Kind) -> &[Seq] {
        match kind {
            Kind::Symbol => &self.symbols,
            Kind::USymbol => &self.usymbols,
        }
    }
}

impl Tables {
    /// Validate an entry list as a symbol or u-symbol.
    ///
    /// # Errors
    ///
    /// Returns the first violated constraint in the order: length, entry
    /// minima, row spacing, entry sum, ascending-pair condition.
    pub fn validate(
        &self,
        series: Series,
        kind: Kind,
        n: u32,
        m: u32,
        entries: Vec<u32>,
    ) -> Result<Seq, ValidationError> {
        let p = self.seq_params(series, kind);
        let expected = p.len(m);
        if entries.len() != expected {
            return Err(ValidationError::WrongLength {
                series,
                kind,
                m,
                expected,
                actual: entries.len(),
            });
        }
        for (index, &entry) in entries.iter().enumerate().take(2) {
            let min = p.min_entry(index);
            if entry < min {
                return Err(ValidationError::BoundViolation { index, entry, min });
            }
        }
        for index in 0..entries.len().saturating_sub(2) {
            let (lo, hi) = (entries[index], entries[index + 2]);
            if lo + p.gap > hi {
                return Err(ValidationError::GapViolation {
                    index,
                    lo,
                    hi,
                    gap: p.gap,
                });
            }
        }
        let actual: u64 = entries.iter().map(|&e| u64::from(e)).sum();
        let target = p.sum_target(n, m);
        if actual != target {
            return Err(ValidationError::SumMismatch {
                n,
                m,
                expected: target,
                actual,
            });
        }
        if p.star {
            for i in (0..entries.len()).step_by(2) {
                if i + 1 < entries.len() && entries[i] != entries[i + 1] {
                    if entries[i] > entries[i + 1] {
                        return Err(ValidationError::StarViolation { index: i });
                    }
                    break;
                }
            }
        }
        Ok(Seq {
            series,
            kind,
            n,
            m,
            entries,
        })
    }

    /// Re-run validation on a deserialized sequence.
    ///
    /// # Errors
    ///
    /// Same as [`Tables::validate`].
    pub fn revalidate(&self, seq: Seq) -> Result<Seq, ValidationError> {
        self.validate(seq.series, seq.kind, seq.n, seq.m, seq.entries)
    }

    /// Embed a sequence one level up: prepend the series prefix and raise
    /// every existing entry by the shift step.
    ///
    /// # Errors
    ///
    /// Under the standard tables a shift of a valid sequence is always
    /// valid; the result is revalidated so perturbed tables fail here
    /// rather than propagating bad data.
    pub fn shift(&self, s: &Seq) -> Result<Seq, ValidationError> {
        let p = self.seq_params(s.series, s.kind);
        let mut entries = Vec::with_capacity(s.len() + 2);
        entries.extend_from_slice(&p.shift_prefix);
        entries.extend(s.entries.iter().map(|&e| e + p.shift_step));
        self.validate(s.series, s.kind, s.n, s.m + 1, entries)
    }

    /// Invert [`Tables::shift`] if the sequence matches the shift pattern.
    pub fn unshift(&self, s: &Seq) -> Option<Seq> {
        if s.m == 0 {
            return None;
        }
        let p = self.seq_params(s.series, s.kind);
        if s.entries.len() < 2 || s.entries[..2] != p.shift_prefix {
            return None;
        }
        let entries: Option<Vec<u32>> = s.entries[2..]
            .iter()
            .map(|&e| e.checked_sub(p.shift_step))
            .collect();
        self.validate(s.series, s.kind, s.n, s.m - 1, entries?).ok()
    }

    /// Unshift as far as possible: the representative at the lowest level.
    pub fn minimal_form(&self, s: &Seq) -> Seq {
        let mut cur = s.clone();
        while let Some(prev) = self.unshift(&cur) {
            cur = prev;
        }
        cur
    }

    /// The bijection from u-symbols to symbols: subtract the rounded
    /// half-index from each entry.
    ///
    /// # Errors
    ///
    /// Fails only under perturbed tables (underflow or invalid image).
    pub fn i_bijection(&self, u: &Seq) -> Result<Seq, MapError> {
        if u.kind != Kind::USymbol {
            return Err(MapError::WrongKind {
                expected: Kind::USymbol,
                got: u.kind,
            });
        }
        let round = self.struct_params(u.series).i_round;
        let entries: Vec<u32> = u
            .entries
            .iter()
            .enumerate()
            .map(|(index, &e)| {
                e.checked_sub(round.half(index))
                    .ok_or(MapError::Underflow { index })
            })
            .collect::<Result<_, _>>()?;
        self.validate(u.series, Kind::Symbol, u.n, u.m, entries)
            .map_err(MapError::InvalidImage)
    }

    /// The inverse bijection from symbols to u-symbols.
    ///
    /// # Errors
    ///
    /// Fails only under perturbed tables (invalid image).
    pub fn i_inverse(&self, s: &Seq) -> Result<Seq, MapError> {
        if s.kind != Kind::Symbol {
            return Err(MapError::WrongKind {
                expected: Kind::Symbol,
                got: s.kind,
            });
        }
        let round = self.struct_params(s.series).i_round;
        let entries: Vec<u32> = s
            .entries
            .iter()
            .enumerate()
            .map(|(index, &e)| e + round.half(index))
            .collect();
        self.validate(s.series, Kind::USymbol, s.n, s.m, entries)
            .map_err(MapError::InvalidImage)
    }

    /// Twist a sequence by an index set.
    ///
    /// Entries at the given indices move to the other row; both rows are
    /// re-sorted and re-interleaved. Returns `Ok(None)` when the twist is
    /// undefined: the rows change length, or the recombined sequence fails
    /// validation.
    ///
    /// # Errors
    ///
    /// [`TwistError::IndexOutOfRange`] for a bad index,
    /// [`TwistError::EntryNotDistinct`] if a selected entry's value occurs
    /// more than once in the sequence.
    pub fn twist(&self, s: &Seq, mu: &[usize]) -> Result<Option<Seq>, TwistError> {
        for &index in mu {
            if index >= s.len() {
                return Err(TwistError::IndexOutOfRange {
                    index,
                    len: s.len(),
                });
            }
            let v = s.entries[index];
            if s.entries.iter().filter(|&&w| w == v).count() > 1 {
                return Err(TwistError::EntryNotDistinct { index });
            }
        }
        let moved: Vec<u32> = mu.iter().map(|&i| s.entries[i]).collect();
        let in_moved = |v: u32| moved.contains(&v);

        let mut upper: Vec<u32> = Vec::new();
        let mut lower: Vec<u32> = Vec::new();
        for (i, &v) in s.entries.iter().enumerate() {
            let stays_upper = (i % 2 == 0) != in_moved(v);
            if stays_upper {
                upper.push(v);
            } else {
                lower.push(v);
            }
        }
        let upper_len = s.len().div_ceil(2);
        if upper.len() != upper_len || lower.len() != s.len() - upper_len {
            return Ok(None);
        }
        upper.sort_unstable();
        lower.sort_unstable();

        let mut entries = Vec::with_capacity(s.len());
        for i in 0..s.len() {
            let v = if i % 2 == 0 {
                upper[i / 2]
            } else {
                lower[i / 2]
            };
            entries.push(v);
        }
        Ok(self
            .validate(s.series, s.kind, s.n, s.m, entries)
            .ok())
    }

    /// All valid sequences of one (series, kind) at rank `n`, level `m`,
    /// in lexicographic order.
    pub fn enumerate_level(&self, series: Series, kind: Kind, n: u32, m: u32) -> Vec<Seq> {
        let p = *self.seq_params(series, kind);
        let len = p.len(m);
        let target = p.sum_target(n, m);
        let mut out = Vec::new();
        let mut cur: Vec<u32> = Vec::with_capacity(len);

        // Smallest possible sum of entries from `from` onward, given the
        // row predecessors already chosen in `cur`.
        let min_tail = |cur: &[u32], from: usize| -> u64 {
            let mut prev = [None::<u32>; 2];
            if from >= 1 {
                prev[(from - 1) % 2] = Some(cur[from - 1]);
            }
            if from >= 2 {
                prev[from % 2] = Some(cur[from - 2]);
            }
            let mut total = 0u64;
            for j in from..len {
                let par = j % 2;
                let floor = match prev[par] {
                    Some(x) => (x + p.gap).max(p.min_entry(j)),
                    None => p.min_entry(j),
                };
                total += u64::from(floor);
                prev[par] = Some(floor);
            }
            total
        };

        fn rec(
            tables: &Tables,
            p: &crate::series::SeqParams,
            series: Series,
            kind: Kind,
            n: u32,
            m: u32,
            len: usize,
            target: u64,
            cur: &mut Vec<u32>,
            sum: u64,
            min_tail: &dyn Fn(&[u32], usize) -> u64,
            out: &mut Vec<Seq>,
        ) {
            let pos = cur.len();
            if pos == len {
                if sum == target {
                    if let Ok(seq) = tables.validate(series, kind, n, m, cur.clone()) {
                        out.push(seq);
                    }
                }
                return;
            }
            let lower = if pos >= 2 {
                (cur[pos - 2] + p.gap).max(p.min_entry(pos))
            } else {
                p.min_entry(pos)
            };
            let mut v = lower;
            loop {
                cur.push(v);
                let sum_v = sum + u64::from(v);
                if sum_v + min_tail(cur, pos + 1) > target {
                    cur.pop();
                    break;
                }
                rec(
                    tables, p, series, kind, n, m, len, target, cur, sum_v, min_tail, out,
                );
                cur.pop();
                v += 1;
            }
        }

        rec(
            self, &p, series, kind, n, m, len, target, &mut cur, 0, &min_tail, &mut out,
        );
        out
    }

    /// Enumerate both kinds at the joint smallest stable level.
    ///
    /// A level `m` is stable for one kind when the sequences at level
    /// `m + 1` are exactly the shifts of the sequences at level `m`. The
    /// returned level is the smallest `m` stable for both kinds; this is
    /// checked directly, not derived from a bound.
    ///
    /// # Errors
    ///
    /// [`StabilizeError::NotStabilized`] if no level up to the safety bound
    /// passes the check (possible only under perturbed tables).
    pub fn stabilized(&self, series: Series, n: u32) -> Result<StableLevel, StabilizeError> {
        let m_max = n + 4;
        let mut symbols = self.enumerate_level(series, Kind::Symbol, n, 0);
        let mut usymbols = self.enumerate_level(series, Kind::USymbol, n, 0);
        for m in 0..=m_max {
            let next_symbols = self.enumerate_level(series, Kind::Symbol, n, m + 1);
            let next_usymbols = self.enumerate_level(series, Kind::USymbol, n, m + 1);
            if self.level_is_saturated(&symbols, &next_symbols)
                && self.level_is_saturated(&usymbols, &next_usymbols)
            {
                return Ok(StableLevel {
                    series,
                    n,
                    m_star: m,
                    symbols,
                    usymbols,
                });
            }
            symbols = next_symbols;
            usymbols = next_usymbols;
        }
        Err(StabilizeError::NotStabilized { series, n, m_max })
    }

    /// Whether `next` consists exactly of the shifts of `level`.
    fn level_is_saturated(&self, level: &[Seq], next: &[Seq]) -> bool {
        if level.len() != next.len() {
            return false;
        }
        let mut shifted: Vec<Seq> = Vec::with_capacity(level.len());
        for s in level {
            match self.shift(s) {
                Ok(t) => shifted.push(t),
                Err(_) => return false,
            }
        }
        shifted.sort_unstable();
        shifted == next
    }

    /// All sequences of one kind at the joint stable level.
    ///
    /// # Errors
    ///
    /// Same as [`Tables::stabilized`].
    pub fn enumerate(&self, series: Series, kind: Kind, n: u32) -> Result<Vec<Seq>, StabilizeError> {
        let stable = self.stabilized(series, n)?;
        Ok(match kind {
            Kind::Symbol => stable.symbols,
            Kind::USymbol => stable.usymbols,
        })
    }
}

/// Group sequences into congruence/similarity classes.
///
/// # Errors
///
/// [`ClassifyError::MixedInput`] if the sequences disagree on series,
/// kind, rank, or level; [`ClassifyError::NoCanonicalMember`] if a class
/// lacks a nondecreasing member (impossible under the standard tables).
pub fn classify(seqs: &[Seq]) -> Result<Vec<SeqClass>, ClassifyError> {
    if let Some(first) = seqs.first() {
        let head = (first.series, first.kind, first.n, first.m);
        if seqs
            .iter()
            .any(|s| (s.series, s.kind, s.n, s.m) != head)
        {
            return Err(ClassifyError::MixedInput);
        }
    }
    let mut groups: BTreeMap<Vec<u32>, Vec<Seq>> = BTreeMap::new();
    for s in seqs {
        groups.entry(s.class_id().key.clone()).or_default().push(s.clone());
    }
    let mut classes = Vec::with_capacity(groups.len());
    for (key, mut members) in groups {
        members.sort_unstable();
        let canonical = members
            .iter()
            .find(|s| s.is_nondecreasing())
            .cloned()
            .ok_or(ClassifyError::NoCanonicalMember { key: key.clone() })?;
        classes.push(SeqClass {
            id: ClassId {
                kind: canonical.kind,
                key,
            },
            canonical,
            members,
        });
    }
    Ok(classes)
}
