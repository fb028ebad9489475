//! Named executable checks and verification reports.
//!
//! Every structural claim the other modules encode appears here as a
//! named check over assembled families: the labeling lemmas, the block
//! and transversal propositions, the commutation of the main diagram,
//! and the global counting oracles. Checks recompute what they need from
//! primitives instead of trusting earlier checks, so a failure localizes
//! to the narrowest violated claim, and failing results carry a witness
//! naming the family and the offending object.
//!
//! Reports are deterministic: the same tables, series, and rank always
//! produce the same report, byte for byte. Timing is tracked on the
//! report value but kept out of both renderings.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::correspondence::{
    big_t, block_set_for_indices, group_blocks_match, nu_tilde, t_of_class, theorem_diagram,
    Family, PieceClass,
};
use crate::error::{FamilyError, StructureError};
use crate::f2space::{self, irr_mod_parabolic, F2Vector, GroupSpace};
use crate::partitions::{self, abar_dimension, enumerate_partitions, PartitionTable};
use crate::series::{Parity, Series, Tables};
use crate::structure::rank_f2;
use crate::symbols::{classify, Seq, SeqClass};

/// A named check: one lemma, proposition, or theorem clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    /// Isolated values of a special symbol sit at indices of their own parity.
    IsolatedLabeling,
    /// Distinct parts carry strictly ordered symbol entries.
    DetailsOrdering,
    /// Isolated points inside staircases follow the bottom parity rule.
    DetailsStaircase,
    /// Isolated points at ladder ends follow the end parity rule.
    DetailsLadder,
    /// Each part holds as many isolated points as its length, mod 2.
    DetailsParity,
    /// Label positions are ordered except across inverting staircases.
    DetailsInversions,
    /// Displaced labels pair up along staircases as labeling basis elements.
    DetailsDisplaced,
    /// Block ends are isolated and in place; open blocks take the odd count.
    BlockIsolated,
    /// The displaced labels of each block project into the group.
    LusztigGroup,
    /// The map to t is an order isomorphism onto its image (series C).
    OrderIso,
    /// Projected block characters match the blocks of the group element t.
    BlocksMatch,
    /// The directly computed transversal matches the series' subset rule.
    Transversal,
    /// Twisting by a block set commutes with the bijection between kinds.
    Commute,
    /// The labeling's projection has exactly the predicted kernel.
    ProjectionKernel,
    /// Partition dimension equals block count minus one (series C).
    ImageDimension,
    /// Transversal twists biject onto the class members whose images
    /// stay in the family.
    Bijection,
    /// Admissible partitions biject onto distinguished u-symbols (series C).
    SpringerBijection,
    /// The main diagram commutes on every twisted member.
    Diagram,
    /// The image of t is closed under addition.
    Subgroup,
    /// The transversal parameters realize the full parameter set exactly once.
    Isomorphism,
    /// Characters trivial on a parabolic equal the span of its blocks.
    ParabolicCharacters,
    /// Enumeration reached a certified stable level.
    Stabilization,
    /// Counts at the stable level match the independent oracles.
    Counting,
}

impl CheckId {
    /// Every check, in report order.
    pub const ALL: [CheckId; 23] = [
        CheckId::IsolatedLabeling,
        CheckId::DetailsOrdering,
        CheckId::DetailsStaircase,
        CheckId::DetailsLadder,
        CheckId::DetailsParity,
        CheckId::DetailsInversions,
        CheckId::DetailsDisplaced,
        CheckId::BlockIsolated,
        CheckId::LusztigGroup,
        CheckId::OrderIso,
        CheckId::BlocksMatch,
        CheckId::Transversal,
        CheckId::Commute,
        CheckId::ProjectionKernel,
        CheckId::ImageDimension,
        CheckId::Bijection,
        CheckId::SpringerBijection,
        CheckId::Diagram,
        CheckId::Subgroup,
        CheckId::Isomorphism,
        CheckId::ParabolicCharacters,
        CheckId::Stabilization,
        CheckId::Counting,
    ];

    /// The checks evaluated per family.
    const FAMILY_SCOPE: [CheckId; 19] = [
        CheckId::IsolatedLabeling,
        CheckId::DetailsOrdering,
        CheckId::DetailsStaircase,
        CheckId::DetailsLadder,
        CheckId::DetailsParity,
        CheckId::DetailsInversions,
        CheckId::DetailsDisplaced,
        CheckId::BlockIsolated,
        CheckId::LusztigGroup,
        CheckId::OrderIso,
        CheckId::BlocksMatch,
        CheckId::Transversal,
        CheckId::Commute,
        CheckId::ProjectionKernel,
        CheckId::ImageDimension,
        CheckId::Bijection,
        CheckId::Diagram,
        CheckId::Subgroup,
        CheckId::Isomorphism,
    ];

    /// The series a check is restricted to, if any.
    fn series_restriction(self) -> Option<Series> {
        match self {
            CheckId::OrderIso | CheckId::ImageDimension | CheckId::SpringerBijection => {
                Some(Series::C)
            }
            _ => None,
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckId::IsolatedLabeling => "L-isol",
            CheckId::DetailsOrdering => "L-details-1",
            CheckId::DetailsStaircase => "L-details-2",
            CheckId::DetailsLadder => "L-details-3",
            CheckId::DetailsParity => "L-details-4",
            CheckId::DetailsInversions => "L-details-5",
            CheckId::DetailsDisplaced => "L-details-6",
            CheckId::BlockIsolated => "P-isol",
            CheckId::LusztigGroup => "P-lusztig",
            CheckId::OrderIso => "P-order",
            CheckId::BlocksMatch => "P-blocks",
            CheckId::Transversal => "L-transversal",
            CheckId::Commute => "P-commute",
            CheckId::ProjectionKernel => "P-kernel",
            CheckId::ImageDimension => "P-imageAb",
            CheckId::Bijection => "P-bijection",
            CheckId::SpringerBijection => "C-sprbijection",
            CheckId::Diagram => "T-diagram",
            CheckId::Subgroup => "T-subgroup",
            CheckId::Isomorphism => "T-isomorphism",
            CheckId::ParabolicCharacters => "L-Ib",
            CheckId::Stabilization => "STAB",
            CheckId::Counting => "COUNT",
        })
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> Result<CheckId, String> {
        CheckId::ALL
            .iter()
            .copied()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| format!("unknown check name {s:?}"))
    }
}

/// Outcome of one check at one scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check's claim is restricted to another series.
    NotApplicable,
    /// The observation falls outside what the underlying claims assert; it
    /// is reported distinctly rather than counted as a violation.
    NotAsserted,
}

impl CheckStatus {
    fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::NotApplicable => "not-applicable",
            CheckStatus::NotAsserted => "not-asserted",
        }
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One check outcome, with a witness when the status needs one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub id: CheckId,
    pub status: CheckStatus,
    pub witness: Option<String>,
}

impl CheckResult {
    fn to_json(&self) -> Value {
        json!({
            "check": self.id.to_string(),
            "status": self.status.as_str(),
            "witness": self.witness,
        })
    }
}

/// All check outcomes for one family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub special: Seq,
    pub results: Vec<CheckResult>,
}

impl FamilyReport {
    /// Whether no check failed. Not-asserted observations do not fail.
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.status != CheckStatus::Fail)
    }
}

/// All check outcomes for one series at one rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub series: Series,
    pub n: u32,
    /// The certified stable level, when stabilization succeeded.
    pub m_star: Option<u32>,
    pub rank_results: Vec<CheckResult>,
    pub families: Vec<FamilyReport>,
    /// Wall-clock cost; excluded from renderings so reports stay
    /// byte-identical across runs.
    pub elapsed_ms: u64,
}

impl RankReport {
    /// Whether no check failed anywhere in the rank.
    pub fn passed(&self) -> bool {
        self.rank_results.iter().all(|r| r.status != CheckStatus::Fail)
            && self.families.iter().all(FamilyReport::passed)
    }

    /// Every result in the report, rank scope first.
    pub fn results(&self) -> impl Iterator<Item = &CheckResult> {
        self.rank_results
            .iter()
            .chain(self.families.iter().flat_map(|f| f.results.iter()))
    }

    /// The report as a JSON value.
    pub fn to_json(&self) -> Value {
        json!({
            "series": self.series.to_string(),
            "n": self.n,
            "m_star": self.m_star,
            "passed": self.passed(),
            "checks": self.rank_results.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
            "families": self.families.iter().map(|f| json!({
                "special": f.special,
                "passed": f.passed(),
                "checks": f.results.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for RankReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        match self.m_star {
            Some(m) => writeln!(
                f,
                "series {}, n = {} (m* = {}, {} families): {verdict}",
                self.series,
                self.n,
                m,
                self.families.len()
            )?,
            None => writeln!(f, "series {}, n = {}: {verdict}", self.series, self.n)?,
        }
        for r in &self.rank_results {
            write_result_line(f, "  ", r)?;
        }
        for family in &self.families {
            let noisy: Vec<&CheckResult> = family
                .results
                .iter()
                .filter(|r| {
                    matches!(r.status, CheckStatus::Fail | CheckStatus::NotAsserted)
                })
                .collect();
            if noisy.is_empty() {
                writeln!(f, "  family {}: pass", family.special)?;
            } else {
                writeln!(f, "  family {}:", family.special)?;
                for r in noisy {
                    write_result_line(f, "    ", r)?;
                }
            }
        }
        Ok(())
    }
}

fn write_result_line(f: &mut fmt::Formatter<'_>, indent: &str, r: &CheckResult) -> fmt::Result {
    match &r.witness {
        Some(w) => writeln!(f, "{indent}{:<15} {}: {w}", r.id.to_string(), r.status),
        None => writeln!(f, "{indent}{:<15} {}", r.id.to_string(), r.status),
    }
}

/// Which ranks to verify and which checks to keep in the reports.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub series: Vec<Series>,
    pub min_rank: u32,
    pub max_rank: u32,
    /// Restrict the reports to these checks; `None` keeps all.
    pub checks: Option<Vec<CheckId>>,
}

/// Verify every requested rank, in parallel, with deterministic output
/// order: by position in `config.series`, then ascending rank.
pub fn verify_run(tables: &Tables, config: &RunConfig) -> Vec<RankReport> {
    let jobs: Vec<(Series, u32)> = config
        .series
        .iter()
        .flat_map(|&series| (config.min_rank..=config.max_rank).map(move |n| (series, n)))
        .collect();
    let mut reports: Vec<RankReport> = jobs
        .par_iter()
        .map(|&(series, n)| verify_rank(tables, series, n))
        .collect();
    if let Some(filter) = &config.checks {
        for report in &mut reports {
            report.rank_results.retain(|r| filter.contains(&r.id));
            for family in &mut report.families {
                family.results.retain(|r| filter.contains(&r.id));
            }
        }
    }
    reports
}

/// Verify one series at one rank: certify stabilization, run the global
/// oracles, assemble every family, and run all applicable checks.
pub fn verify_rank(tables: &Tables, series: Series, n: u32) -> RankReport {
    let start = Instant::now();
    let mut rank = Collector::new();
    rank.applicable(CheckId::Stabilization);
    let stable = match tables.stabilized(series, n) {
        Ok(stable) => stable,
        Err(e) => {
            rank.fail(CheckId::Stabilization, e.to_string());
            return RankReport {
                series,
                n,
                m_star: None,
                rank_results: rank.finish(),
                families: Vec::new(),
                elapsed_ms: elapsed_ms(start),
            };
        }
    };

    check_counting(&mut rank, series, n, &stable.symbols, &stable.usymbols);
    rank.applicable(CheckId::ParabolicCharacters);
    check_parabolic_characters(&mut rank);

    let symbol_classes = match classify(&stable.symbols) {
        Ok(classes) => classes,
        Err(e) => {
            rank.fail(CheckId::Bijection, format!("symbols at rank {n}: {e}"));
            Vec::new()
        }
    };
    let usymbol_classes = match classify(&stable.usymbols) {
        Ok(classes) => classes,
        Err(e) => {
            rank.fail(CheckId::Bijection, format!("u-symbols at rank {n}: {e}"));
            Vec::new()
        }
    };

    let partition_table = match series {
        Series::C => {
            rank.applicable(CheckId::SpringerBijection);
            match PartitionTable::build(tables, n, stable.m_star) {
                Ok(table) => {
                    check_springer_bijection(&mut rank, &table, &usymbol_classes);
                    Some(table)
                }
                Err(e) => {
                    rank.fail(CheckId::SpringerBijection, e.to_string());
                    None
                }
            }
        }
        _ => {
            rank.not_applicable(CheckId::SpringerBijection);
            None
        }
    };

    check_attachment(&mut rank, tables, &symbol_classes, &usymbol_classes);

    let families: Vec<FamilyReport> = symbol_classes
        .par_iter()
        .map(|symbol_class| {
            match Family::assemble(tables, symbol_class, &usymbol_classes) {
                Ok(family) => verify_family(tables, &family, partition_table.as_ref()),
                Err(e) => {
                    let mut c = Collector::new();
                    route_error(
                        &mut c,
                        &format!("family {}", symbol_class.canonical),
                        &e,
                    );
                    FamilyReport {
                        special: symbol_class.canonical.clone(),
                        results: c.finish(),
                    }
                }
            }
        })
        .collect();

    RankReport {
        series,
        n,
        m_star: Some(stable.m_star),
        rank_results: rank.finish(),
        families,
        elapsed_ms: elapsed_ms(start),
    }
}

/// Run every applicable check on one assembled family. The partition
/// table (series C) feeds the dimension and order checks.
pub fn verify_family(
    tables: &Tables,
    family: &Family,
    partition_table: Option<&PartitionTable>,
) -> FamilyReport {
    let series = family.series();
    let mut c = Collector::new();
    for id in CheckId::FAMILY_SCOPE {
        match id.series_restriction() {
            Some(required) if required != series => c.not_applicable(id),
            _ => c.applicable(id),
        }
    }

    check_isolated_labeling(&mut c, family);
    check_projection_kernel(&mut c, family);

    let mut covered: Vec<Seq> = Vec::new();
    let mut parameters: Vec<(F2Vector, F2Vector)> = Vec::new();
    let mut complete = true;
    for piece in &family.pieces {
        check_details(&mut c, tables, family, piece);
        check_block_isolated(&mut c, family, piece);
        check_lusztig_group(&mut c, family, piece);
        check_blocks_match(&mut c, family, piece);
        if series == Series::C {
            check_image_dimension(&mut c, family, piece, partition_table);
        }
        complete &= run_piece_diagram(&mut c, tables, family, piece, &mut covered);
        match big_t(tables, piece) {
            Ok(mut pairs) => parameters.append(&mut pairs),
            Err(e) => {
                complete = false;
                route_error(&mut c, &piece_context(family, piece), &e);
            }
        }
    }
    if series == Series::C {
        check_order_iso(&mut c, family);
    }
    if complete {
        check_family_cover(&mut c, tables, family, covered);
        check_isomorphism(&mut c, family, parameters);
    }
    check_subgroup(&mut c, family);

    FamilyReport {
        special: family.special.clone(),
        results: c.finish(),
    }
}

/// Accumulates check outcomes; the first failure witness per check wins.
struct Collector {
    results: BTreeMap<CheckId, (CheckStatus, Option<String>)>,
}

impl Collector {
    fn new() -> Collector {
        Collector {
            results: BTreeMap::new(),
        }
    }

    /// Record the check as run; passing unless a failure lands later.
    fn applicable(&mut self, id: CheckId) {
        self.results.entry(id).or_insert((CheckStatus::Pass, None));
    }

    fn not_applicable(&mut self, id: CheckId) {
        self.results.insert(id, (CheckStatus::NotApplicable, None));
    }

    fn fail(&mut self, id: CheckId, witness: String) {
        let slot = self.results.entry(id).or_insert((CheckStatus::Pass, None));
        if slot.0 != CheckStatus::Fail {
            *slot = (CheckStatus::Fail, Some(witness));
        }
    }

    /// Record an observation the claims do not cover; never displaces a
    /// failure.
    fn not_asserted(&mut self, id: CheckId, witness: String) {
        let slot = self.results.entry(id).or_insert((CheckStatus::Pass, None));
        if slot.0 == CheckStatus::Pass {
            *slot = (CheckStatus::NotAsserted, Some(witness));
        }
    }

    fn finish(self) -> Vec<CheckResult> {
        self.results
            .into_iter()
            .map(|(id, (status, witness))| CheckResult {
                id,
                status,
                witness,
            })
            .collect()
    }
}

fn elapsed_ms(start: Instant) -> u64 {
    u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX)
}

fn piece_context(family: &Family, piece: &PieceClass) -> String {
    format!("family {}, class {}", family.special, piece.canonical)
}

/// Render a label mask as a set, e.g. `{0,2}`.
fn label_set(mask: u64) -> String {
    let mut out = String::from("{");
    let mut first = true;
    for t in 0..64 {
        if mask >> t & 1 == 1 {
            if !first {
                out.push(',');
            }
            out.push_str(&t.to_string());
            first = false;
        }
    }
    out.push('}');
    out
}

/// Send a family-level error to the check whose claim it violates.
fn route_error(c: &mut Collector, context: &str, error: &FamilyError) {
    let id = match error {
        FamilyError::NonTrivialCharacterPart { .. } => CheckId::LusztigGroup,
        FamilyError::TransversalMismatch { .. } => CheckId::Transversal,
        FamilyError::NoTwistFound { .. } => CheckId::Bijection,
        FamilyError::CharacterOutsideSpan { .. } => CheckId::Diagram,
        FamilyError::NotInFamily => CheckId::Bijection,
        FamilyError::Structure(inner) => match inner {
            StructureError::BlockStructure { .. } => CheckId::Transversal,
            StructureError::IsolatedParity { .. } => CheckId::IsolatedLabeling,
            StructureError::OddCardinality | StructureError::Unsolvable => CheckId::LusztigGroup,
            _ => CheckId::Bijection,
        },
        FamilyError::Map(_) => CheckId::Bijection,
        FamilyError::Twist(_) => CheckId::Transversal,
    };
    c.fail(id, format!("{context}: {error}"));
}

/// Isolated values of a special symbol sit at indices of their own parity.
fn check_isolated_labeling(c: &mut Collector, family: &Family) {
    for (t, &index) in family.labeling.special_indices().iter().enumerate() {
        if index % 2 != t % 2 {
            c.fail(
                CheckId::IsolatedLabeling,
                format!(
                    "family {}: label {t} sits at index {index} of the special symbol",
                    family.special
                ),
            );
        }
    }
}

/// The labeling's basis has rank `p - 1`, its even-indexed sum is the
/// predicted relation, and (verified directly at small `p`) the induced
/// projection is injective for B and C and two-to-one for D.
fn check_projection_kernel(c: &mut Collector, family: &Family) {
    let labeling = &family.labeling;
    let p = labeling.point_count();
    let columns = labeling.e_hat_all();
    let context = format!("family {}", family.special);

    for (i, &column) in columns.iter().enumerate() {
        if column.count_ones() % 2 != 0 {
            c.fail(
                CheckId::ProjectionKernel,
                format!("{context}: basis element {i} covers an odd label set {}", label_set(column)),
            );
        }
    }

    let rank = rank_f2(columns);
    let expected = p.saturating_sub(1);
    if rank != expected {
        c.fail(
            CheckId::ProjectionKernel,
            format!("{context}: labeling basis has rank {rank}, expected {expected}"),
        );
    }

    let even_sum = columns
        .iter()
        .step_by(2)
        .fold(0u64, |acc, &column| acc ^ column);
    let expected_sum = match family.series() {
        Series::B | Series::C => 0,
        Series::D => labeling.all_labels(),
    };
    if even_sum != expected_sum {
        c.fail(
            CheckId::ProjectionKernel,
            format!(
                "{context}: even-indexed basis elements sum to {}, expected {}",
                label_set(even_sum),
                label_set(expected_sum)
            ),
        );
    }

    if p == 0 || p > 12 {
        return;
    }
    let mut preimages: HashMap<u64, Vec<u64>> = HashMap::new();
    for mask in 0..(1u64 << p) {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        match labeling.pi(mask) {
            Ok(image) => preimages.entry(image.bits()).or_default().push(mask),
            Err(e) => {
                c.fail(
                    CheckId::ProjectionKernel,
                    format!("{context}: label set {} has no image: {e}", label_set(mask)),
                );
                return;
            }
        }
    }
    let all = labeling.all_labels();
    for (image, masks) in preimages {
        let ok = match family.series() {
            Series::B | Series::C => masks.len() == 1,
            Series::D => masks.len() == 2 && masks[0] ^ masks[1] == all,
        };
        if !ok {
            c.fail(
                CheckId::ProjectionKernel,
                format!(
                    "{context}: image {} has {} preimages",
                    labeling.space().from_bits(image),
                    masks.len()
                ),
            );
            return;
        }
    }
}

/// The six positional lemmas on one distinguished u-symbol: entry
/// ordering across parts, isolated points in staircases and ladders,
/// count parity per part, label inversions, and the staircase pairing
/// that recomputes the displaced set.
fn check_details(c: &mut Collector, tables: &Tables, family: &Family, piece: &PieceClass) {
    let sp = tables.struct_params(family.series());
    let context = piece_context(family, piece);
    let symbol_values = piece.symbol.entries();
    let parts = &piece.decomp.parts;
    let points = &piece.points;
    let iso: BTreeSet<usize> = points.k().iter().copied().collect();
    let label_at: HashMap<usize, usize> = points
        .k()
        .iter()
        .enumerate()
        .map(|(t, &index)| (index, t))
        .collect();

    let mut earlier_max: Option<u32> = None;
    for part in parts {
        let span = &symbol_values[part.lo..=part.hi];
        let part_min = *span.iter().min().expect("parts are nonempty");
        let part_max = *span.iter().max().expect("parts are nonempty");
        if let Some(max) = earlier_max {
            if max >= part_min {
                c.fail(
                    CheckId::DetailsOrdering,
                    format!(
                        "{context}: {part} carries entry {part_min}, not above the earlier maximum {max}"
                    ),
                );
            }
        }
        earlier_max = Some(earlier_max.map_or(part_max, |max| max.max(part_max)));

        let in_span: BTreeSet<usize> = iso.range(part.lo..=part.hi).copied().collect();
        if part.is_staircase() {
            let bottom = Parity::of(part.lo);
            if bottom == sp.excluded_staircase_bottom {
                if !in_span.is_empty() {
                    c.fail(
                        CheckId::DetailsStaircase,
                        format!(
                            "{context}: {part} should carry no isolated points, found indices {in_span:?}"
                        ),
                    );
                }
            } else if bottom == sp.displaced_staircase_bottom {
                let expected: BTreeSet<usize> =
                    [part.lo + 1, part.hi - 1].into_iter().collect();
                if in_span != expected {
                    c.fail(
                        CheckId::DetailsStaircase,
                        format!(
                            "{context}: {part} holds isolated indices {in_span:?}, expected {expected:?}"
                        ),
                    );
                }
            }
        } else {
            let mut expected = BTreeSet::new();
            if Parity::of(part.lo) == sp.ladder_bottom_iso {
                expected.insert(part.lo);
            }
            if Parity::of(part.hi) == sp.ladder_bottom_iso.opposite() {
                expected.insert(part.hi);
            }
            if in_span != expected {
                c.fail(
                    CheckId::DetailsLadder,
                    format!(
                        "{context}: {part} holds isolated indices {in_span:?}, expected {expected:?}"
                    ),
                );
            }
        }
        if in_span.len() % 2 != part.length() % 2 {
            c.fail(
                CheckId::DetailsParity,
                format!(
                    "{context}: {part} holds {} isolated points over length {}",
                    in_span.len(),
                    part.length()
                ),
            );
        }
    }

    let k = points.k();
    for t in 0..k.len().saturating_sub(1) {
        let (lower, upper) = (k[t], k[t + 1]);
        if lower < upper {
            continue;
        }
        let inverting = lower == upper + 1
            && parts.iter().any(|part| {
                part.is_staircase()
                    && part.lo == upper
                    && part.hi == lower
                    && Parity::of(part.lo) == sp.displaced_staircase_bottom
            });
        if !inverting {
            c.fail(
                CheckId::DetailsInversions,
                format!(
                    "{context}: labels {t} and {} sit at indices {lower} and {upper} without an inverting staircase",
                    t + 1
                ),
            );
        }
    }
    for part in parts {
        if part.is_staircase()
            && part.length() == 2
            && Parity::of(part.lo) == sp.displaced_staircase_bottom
        {
            match (label_at.get(&part.lo), label_at.get(&part.hi)) {
                (Some(&below), Some(&above)) if below == above + 1 => {}
                _ => c.fail(
                    CheckId::DetailsInversions,
                    format!("{context}: {part} does not invert a consecutive label pair"),
                ),
            }
        }
    }

    let mut paired = 0u64;
    let mut ok = true;
    for part in parts {
        if !part.is_staircase() || Parity::of(part.lo) != sp.displaced_staircase_bottom {
            continue;
        }
        let ends = (label_at.get(&(part.lo + 1)), label_at.get(&(part.hi - 1)));
        let (Some(&ta), Some(&tb)) = ends else {
            c.fail(
                CheckId::DetailsDisplaced,
                format!("{context}: {part} lacks labeled isolated points"),
            );
            ok = false;
            continue;
        };
        let (lo, hi) = (ta.min(tb), ta.max(tb));
        if hi != lo + 1 {
            c.fail(
                CheckId::DetailsDisplaced,
                format!("{context}: {part} pairs non-consecutive labels {lo} and {hi}"),
            );
            ok = false;
            continue;
        }
        let basis_index = match family.series() {
            Series::C => {
                if lo % 2 != 0 {
                    c.fail(
                        CheckId::DetailsDisplaced,
                        format!("{context}: {part} pairs labels {{{lo},{hi}}} starting at an odd label"),
                    );
                    ok = false;
                    continue;
                }
                lo + 1
            }
            Series::B | Series::D => {
                if lo % 2 != 1 {
                    c.fail(
                        CheckId::DetailsDisplaced,
                        format!("{context}: {part} pairs labels {{{lo},{hi}}} starting at an even label"),
                    );
                    ok = false;
                    continue;
                }
                lo
            }
        };
        let mask = (1u64 << ta) | (1u64 << tb);
        if family.labeling.e_hat_all().get(basis_index) != Some(&mask) {
            c.fail(
                CheckId::DetailsDisplaced,
                format!(
                    "{context}: {part} pairs labels {} but basis element {basis_index} is {}",
                    label_set(mask),
                    label_set(family.labeling.e_hat_all().get(basis_index).copied().unwrap_or(0))
                ),
            );
            ok = false;
            continue;
        }
        if paired & mask != 0 {
            c.fail(
                CheckId::DetailsDisplaced,
                format!("{context}: {part} reuses labels {}", label_set(paired & mask)),
            );
            ok = false;
            continue;
        }
        paired |= mask;
    }
    if ok && paired != points.displaced() {
        c.fail(
            CheckId::DetailsDisplaced,
            format!(
                "{context}: staircase pairs give displaced labels {}, parity comparison gives {}",
                label_set(paired),
                label_set(points.displaced())
            ),
        );
    }
}

/// Block ends are isolated and undisplaced; open blocks hold an odd
/// number of isolated points, closed blocks an even number; isolated
/// points outside every block violate the claim only in series C.
fn check_block_isolated(c: &mut Collector, family: &Family, piece: &PieceClass) {
    let context = piece_context(family, piece);
    let points = &piece.points;
    let displaced = points.displaced();
    let label_at: HashMap<usize, usize> = points
        .k()
        .iter()
        .enumerate()
        .map(|(t, &index)| (index, t))
        .collect();

    for block in &piece.decomp.blocks {
        for end in [block.bottom(), block.top()].into_iter().flatten() {
            match label_at.get(&end) {
                Some(&t) => {
                    if displaced >> t & 1 == 1 {
                        c.fail(
                            CheckId::BlockIsolated,
                            format!("{context}: the end of {block} at index {end} is displaced"),
                        );
                    }
                }
                None => c.fail(
                    CheckId::BlockIsolated,
                    format!("{context}: the end of {block} at index {end} is not isolated"),
                ),
            }
        }
        let count = points.labels_in_block(block).count_ones();
        if (count % 2 == 1) != !block.is_closed() {
            c.fail(
                CheckId::BlockIsolated,
                format!("{context}: {block} holds {count} isolated points"),
            );
        }
    }

    let outside: Vec<usize> = points
        .k()
        .iter()
        .copied()
        .filter(|&index| !piece.decomp.blocks.iter().any(|b| b.contains(index)))
        .collect();
    if !outside.is_empty() {
        let witness =
            format!("{context}: isolated points outside every block at indices {outside:?}");
        match family.series() {
            Series::C => c.fail(CheckId::BlockIsolated, witness),
            Series::B | Series::D => c.not_asserted(CheckId::BlockIsolated, witness),
        }
    }
}

/// Each block's displaced labels project to a group element, and the
/// projection of the full displaced set reproduces the class's t.
fn check_lusztig_group(c: &mut Collector, family: &Family, piece: &PieceClass) {
    let context = piece_context(family, piece);
    for block in &piece.decomp.blocks {
        let displaced_in_block = piece.points.m_of(block);
        match family.labeling.pi(displaced_in_block) {
            Ok(image) => {
                if !image.character_part().is_zero() {
                    c.fail(
                        CheckId::LusztigGroup,
                        format!(
                            "{context}: displaced labels {} of {block} project to {image}, outside the group",
                            label_set(displaced_in_block)
                        ),
                    );
                }
            }
            Err(e) => c.fail(CheckId::LusztigGroup, format!("{context}: {e}")),
        }
    }
    match t_of_class(&family.labeling, &piece.symbol) {
        Ok(t) => {
            if t != piece.t {
                c.fail(
                    CheckId::LusztigGroup,
                    format!("{context}: recomputed t = {t} differs from the stored {}", piece.t),
                );
            }
        }
        Err(e) => c.fail(CheckId::LusztigGroup, format!("{context}: {e}")),
    }
}

/// The projected characters of the u-symbol's blocks match the blocks of
/// the group element t. Families with no blocks (series D, all-staircase
/// u-symbols) are degenerate: they must sit at t = 0 in the trivial group.
fn check_blocks_match(c: &mut Collector, family: &Family, piece: &PieceClass) {
    let context = piece_context(family, piece);
    if piece.decomp.blocks.is_empty() {
        if family.series() != Series::D || !piece.t.is_zero() || family.labeling.f() != 0 {
            c.fail(
                CheckId::BlocksMatch,
                format!(
                    "{context}: no blocks, yet t = {} in a group of parameter {}",
                    piece.t,
                    family.labeling.f()
                ),
            );
        }
        return;
    }
    match group_blocks_match(piece) {
        Ok((projected, of_t)) => {
            if projected != of_t {
                c.fail(
                    CheckId::BlocksMatch,
                    format!(
                        "{context}: block images [{}] do not match the blocks [{}] of t = {}",
                        join_vectors(&projected),
                        join_vectors(&of_t),
                        piece.t
                    ),
                );
            }
        }
        Err(e) => c.fail(CheckId::BlocksMatch, format!("{context}: {e}")),
    }
}

fn join_vectors(vectors: &[F2Vector]) -> String {
    let mut out = String::new();
    for (i, v) in vectors.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&v.to_string());
    }
    out
}

/// Partition dimension, block count minus one, and the number of
/// odd-bottom ladders agree (series C).
fn check_image_dimension(
    c: &mut Collector,
    family: &Family,
    piece: &PieceClass,
    partition_table: Option<&PartitionTable>,
) {
    let context = piece_context(family, piece);
    let Some(table) = partition_table else {
        c.fail(
            CheckId::ImageDimension,
            format!("{context}: no partition table available"),
        );
        return;
    };
    let Some(partition) = table.partition_of(&piece.canonical) else {
        c.fail(
            CheckId::ImageDimension,
            format!("{context}: class is not the image of an admissible partition"),
        );
        return;
    };
    let dimension = abar_dimension(partition);
    let blocks = piece.decomp.blocks.len();
    let odd_bottom_ladders = piece
        .decomp
        .parts
        .iter()
        .filter(|part| part.is_ladder() && part.lo % 2 == 1)
        .count();
    if dimension + 1 != blocks || odd_bottom_ladders + 1 != blocks {
        c.fail(
            CheckId::ImageDimension,
            format!(
                "{context}: partition {partition} has dimension {dimension}, against {blocks} blocks and {odd_bottom_ladders} odd-bottom ladders"
            ),
        );
    }
}

/// Run the main diagram on one piece class. The transversal twists must
/// biject onto the class members whose symbol images stay congruent to
/// the special symbol; members whose images leave the family must still
/// arise from a unique ladder twist, one that is not a union of block
/// ladders. Along the way the two routes to the expected character must
/// agree, and twisting must commute with the bijection between kinds.
/// Returns whether the rows were produced at all.
fn run_piece_diagram(
    c: &mut Collector,
    tables: &Tables,
    family: &Family,
    piece: &PieceClass,
    covered: &mut Vec<Seq>,
) -> bool {
    let context = piece_context(family, piece);
    let mut in_family: Vec<(&Seq, bool)> = Vec::with_capacity(piece.members.len());
    for member in &piece.members {
        match tables.i_bijection(member) {
            Ok(image) => {
                let mut sorted: Vec<u32> = image.entries().to_vec();
                sorted.sort_unstable();
                in_family.push((member, sorted == family.special.entries()));
            }
            Err(e) => {
                c.fail(
                    CheckId::Bijection,
                    format!("{context}: member {member} has no symbol image: {e}"),
                );
                return false;
            }
        }
    }

    let rows = match theorem_diagram(tables, piece) {
        Ok(rows) => rows,
        Err(e) => {
            route_error(c, &context, &e);
            return false;
        }
    };
    let expected_size = 1usize << piece.decomp.blocks.len().saturating_sub(1);
    if rows.len() != expected_size {
        c.fail(
            CheckId::Bijection,
            format!(
                "{context}: transversal has {} members, expected {expected_size}",
                rows.len()
            ),
        );
    }
    for row in &rows {
        let blocks = label_set(row.block_mask);
        if !row.holds {
            c.fail(
                CheckId::Diagram,
                format!(
                    "{context}, blocks {blocks}: member {} carries {} but the transversal predicts {}",
                    row.member, row.kappa, row.expected
                ),
            );
        }
        if !row.label_route_holds {
            c.fail(
                CheckId::Diagram,
                format!(
                    "{context}, blocks {blocks}: the label-twist route disagrees with the prediction"
                ),
            );
        }
        if !row.commutes {
            c.fail(
                CheckId::Commute,
                format!(
                    "{context}, blocks {blocks}: twisting does not commute with the bijection at {}",
                    row.twisted
                ),
            );
        }
    }

    let mut reached: Vec<Seq> = rows.iter().map(|row| row.twisted.clone()).collect();
    reached.sort_unstable();
    let mut staying: Vec<Seq> = in_family
        .iter()
        .filter(|(_, stays)| *stays)
        .map(|(member, _)| (*member).clone())
        .collect();
    staying.sort_unstable();
    if reached != staying {
        reached.dedup();
        c.fail(
            CheckId::Bijection,
            format!(
                "{context}: twists reach {} distinct class members, {} members keep their image in the family",
                reached.len(),
                staying.len()
            ),
        );
    }

    for (member, stays) in in_family {
        match nu_tilde(tables, &piece.canonical, member) {
            Ok(mu) => {
                let block_set = block_set_for_indices(&piece.decomp, &mu);
                if stays && block_set.is_none() {
                    c.fail(
                        CheckId::Bijection,
                        format!(
                            "{context}: member {member} stays in the family but twists at indices {mu:?}, not a union of block ladders"
                        ),
                    );
                }
                if !stays && block_set.is_some() {
                    c.fail(
                        CheckId::Bijection,
                        format!(
                            "{context}: member {member} leaves the family yet twists by the block set {}",
                            label_set(block_set.unwrap_or(0))
                        ),
                    );
                }
            }
            Err(e) => route_error(c, &format!("{context}, member {member}"), &e),
        }
    }

    covered.extend(rows.into_iter().map(|row| row.member));
    true
}

/// Within one family, the order on t values mirrors the closure order on
/// the distinguished u-symbols (series C).
fn check_order_iso(c: &mut Collector, family: &Family) {
    for (i, first) in family.pieces.iter().enumerate() {
        for (j, second) in family.pieces.iter().enumerate() {
            if i == j {
                continue;
            }
            let group_order = f2space::closure_leq(first.t, second.t);
            match partitions::closure_leq(&first.canonical, &second.canonical) {
                Ok(closure_order) => {
                    if closure_order != group_order {
                        c.fail(
                            CheckId::OrderIso,
                            format!(
                                "family {}: classes {} and {}: closure order {closure_order}, group order {group_order}",
                                family.special, first.canonical, second.canonical
                            ),
                        );
                    }
                }
                Err(e) => c.fail(
                    CheckId::OrderIso,
                    format!("family {}: {e}", family.special),
                ),
            }
        }
    }
}

/// The transversal images of all piece classes cover, exactly once, the
/// family members whose u-symbol preimages sort into one of the
/// family's piece classes.
fn check_family_cover(c: &mut Collector, tables: &Tables, family: &Family, mut covered: Vec<Seq>) {
    covered.sort_unstable();
    let piece_canonicals: BTreeSet<&[u32]> = family
        .pieces
        .iter()
        .map(|piece| piece.canonical.entries())
        .collect();
    let mut expected = Vec::new();
    for member in &family.members {
        match tables.i_inverse(member) {
            Ok(preimage) => {
                let mut sorted: Vec<u32> = preimage.entries().to_vec();
                sorted.sort_unstable();
                if piece_canonicals.contains(&sorted[..]) {
                    expected.push(member.clone());
                }
            }
            Err(e) => {
                c.fail(
                    CheckId::Bijection,
                    format!("family {}: member {member} has no u-symbol preimage: {e}", family.special),
                );
                return;
            }
        }
    }
    expected.sort_unstable();
    if covered != expected {
        covered.dedup();
        c.fail(
            CheckId::Bijection,
            format!(
                "family {}: transversal images cover {} distinct members, the piece classes own {}",
                family.special,
                covered.len(),
                expected.len()
            ),
        );
    }
}

/// The t values of a family form a set closed under addition.
fn check_subgroup(c: &mut Collector, family: &Family) {
    let mut image: Vec<F2Vector> = family.pieces.iter().map(|piece| piece.t).collect();
    image.sort_unstable();
    image.dedup();
    for &a in &image {
        for &b in &image {
            let sum = a.add(b);
            if image.binary_search(&sum).is_err() {
                c.fail(
                    CheckId::Subgroup,
                    format!(
                        "family {}: t values {a} and {b} sum to {sum}, outside the image",
                        family.special
                    ),
                );
            }
        }
    }
}

/// The transversal parameters across all pieces hit each pair
/// `(t, character mod parabolic)` exactly once.
fn check_isomorphism(c: &mut Collector, family: &Family, mut parameters: Vec<(F2Vector, F2Vector)>) {
    parameters.sort_unstable();
    let mut image: Vec<F2Vector> = family.pieces.iter().map(|piece| piece.t).collect();
    image.sort_unstable();
    image.dedup();
    let mut expected: Vec<(F2Vector, F2Vector)> = image
        .into_iter()
        .flat_map(|t| irr_mod_parabolic(t).into_iter().map(move |chi| (t, chi)))
        .collect();
    expected.sort_unstable();
    if parameters != expected {
        c.fail(
            CheckId::Isomorphism,
            format!(
                "family {}: transversals realize {} parameters, the group predicts {}",
                family.special,
                parameters.len(),
                expected.len()
            ),
        );
    }
}

/// Counting oracles at the stable level: symbols against bipartitions
/// (series B and C), distinguished u-symbols against admissible
/// partitions (series C). Series D has no external count.
fn check_counting(c: &mut Collector, series: Series, n: u32, symbols: &[Seq], usymbols: &[Seq]) {
    match series {
        Series::B | Series::C => {
            c.applicable(CheckId::Counting);
            let expected = bipartition_count(n);
            let got = symbols.len() as u64;
            if got != expected {
                c.fail(
                    CheckId::Counting,
                    format!("{got} symbols at the stable level against {expected} bipartitions of {n}"),
                );
            }
            if series == Series::C {
                let distinguished = usymbols.iter().filter(|u| u.is_nondecreasing()).count();
                let partitions = enumerate_partitions(n).len();
                if distinguished != partitions {
                    c.fail(
                        CheckId::Counting,
                        format!(
                            "{distinguished} distinguished u-symbols against {partitions} admissible partitions of {}",
                            2 * n
                        ),
                    );
                }
            }
        }
        Series::D => c.not_applicable(CheckId::Counting),
    }
}

/// The number of pairs of partitions with total `n`.
pub fn bipartition_count(n: u32) -> u64 {
    let n = n as usize;
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            p[total] += p[total - part];
        }
    }
    (0..=n).map(|k| p[k] * p[n - k]).sum()
}

/// Admissible partitions biject onto distinguished u-symbol classes.
fn check_springer_bijection(
    c: &mut Collector,
    table: &PartitionTable,
    usymbol_classes: &[SeqClass],
) {
    if table.pairs().len() != usymbol_classes.len() {
        c.fail(
            CheckId::SpringerBijection,
            format!(
                "{} admissible partitions against {} u-symbol classes",
                table.pairs().len(),
                usymbol_classes.len()
            ),
        );
    }
    let mut images: Vec<&[u32]> = table.pairs().iter().map(|(_, u)| u.entries()).collect();
    images.sort_unstable();
    for pair in images.windows(2) {
        if pair[0] == pair[1] {
            c.fail(
                CheckId::SpringerBijection,
                format!("two admissible partitions share the image {pair:?}"),
            );
        }
    }
    for class in usymbol_classes {
        if table.partition_of(&class.canonical).is_none() {
            c.fail(
                CheckId::SpringerBijection,
                format!(
                    "class {} is not the image of an admissible partition",
                    class.canonical
                ),
            );
        }
    }
}

/// Every u-symbol class attaches to exactly one family: the sorted image
/// of its distinguished member is the special symbol of some class.
fn check_attachment(
    c: &mut Collector,
    tables: &Tables,
    symbol_classes: &[SeqClass],
    usymbol_classes: &[SeqClass],
) {
    for class in usymbol_classes {
        match tables.i_bijection(&class.canonical) {
            Ok(image) => {
                let mut sorted: Vec<u32> = image.entries().to_vec();
                sorted.sort_unstable();
                if !symbol_classes
                    .iter()
                    .any(|sc| sc.canonical.entries() == &sorted[..])
                {
                    c.fail(
                        CheckId::Bijection,
                        format!("class {} attaches to no family", class.canonical),
                    );
                }
            }
            Err(e) => c.fail(
                CheckId::Bijection,
                format!("class {}: {e}", class.canonical),
            ),
        }
    }
}

/// For every group element in every small group, the characters trivial
/// on its parabolic subgroup, found by brute force over all character
/// lifts, equal the span of its blocks.
fn check_parabolic_characters(c: &mut Collector) {
    for f in 0..=4u32 {
        let space = GroupSpace::new(f);
        for x in space.group_elements() {
            let support = x.support();
            let mut brute: Vec<F2Vector> = Vec::new();
            let even_positions: Vec<u32> = (0..=f).map(|j| 2 * j).collect();
            for combo in 0..(1u64 << even_positions.len()) {
                let mut bits = 0u64;
                for (j, &position) in even_positions.iter().enumerate() {
                    if combo >> j & 1 == 1 {
                        bits |= 1 << position;
                    }
                }
                let lift = space.from_bits(bits);
                if support.iter().all(|&j| lift.pairing(space.basis(j)) == 0) {
                    brute.push(lift.canonical());
                }
            }
            brute.sort_unstable();
            brute.dedup();
            let span = irr_mod_parabolic(x);
            if span != brute {
                c.fail(
                    CheckId::ParabolicCharacters,
                    format!(
                        "f = {f}, x = {x}: span of blocks has {} characters, brute force finds {}",
                        span.len(),
                        brute.len()
                    ),
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Parity, Rounding};

    fn tables() -> Tables {
        Tables::standard()
    }

    #[test]
    fn check_names_match_the_documented_list() {
        let names: Vec<String> = CheckId::ALL.iter().map(|id| id.to_string()).collect();
        let expected = [
            "L-isol",
            "L-details-1",
            "L-details-2",
            "L-details-3",
            "L-details-4",
            "L-details-5",
            "L-details-6",
            "P-isol",
            "P-lusztig",
            "P-order",
            "P-blocks",
            "L-transversal",
            "P-commute",
            "P-kernel",
            "P-imageAb",
            "P-bijection",
            "C-sprbijection",
            "T-diagram",
            "T-subgroup",
            "T-isomorphism",
            "L-Ib",
            "STAB",
            "COUNT",
        ];
        assert_eq!(names, expected);
    }

    #[test]
    fn check_names_round_trip_through_parsing() {
        for id in CheckId::ALL {
            assert_eq!(id.to_string().parse::<CheckId>(), Ok(id));
        }
        assert!("L-unknown".parse::<CheckId>().is_err());
    }

    #[test]
    fn bipartition_count_matches_known_values() {
        assert_eq!(bipartition_count(0), 1);
        assert_eq!(bipartition_count(1), 2);
        assert_eq!(bipartition_count(2), 5);
        assert_eq!(bipartition_count(3), 10);
        assert_eq!(bipartition_count(8), 185);
    }

    #[test]
    fn rank_two_c_report_passes_every_check() {
        let report = verify_rank(&tables(), Series::C, 2);
        assert!(report.passed(), "{report}");
        assert_eq!(report.m_star, Some(2));
        assert_eq!(report.families.len(), 3);
        for result in report.results() {
            assert_ne!(result.status, CheckStatus::Fail, "{result:?}");
        }
    }

    #[test]
    fn rank_two_b_report_marks_series_c_checks_not_applicable() {
        let report = verify_rank(&tables(), Series::B, 2);
        assert!(report.passed(), "{report}");
        let not_applicable: Vec<CheckId> = report
            .results()
            .filter(|r| r.status == CheckStatus::NotApplicable)
            .map(|r| r.id)
            .collect();
        assert!(not_applicable.contains(&CheckId::SpringerBijection));
        for family in &report.families {
            for result in &family.results {
                if matches!(result.id, CheckId::OrderIso | CheckId::ImageDimension) {
                    assert_eq!(result.status, CheckStatus::NotApplicable);
                }
            }
        }
    }

    #[test]
    fn rank_two_d_report_passes_with_degenerate_families() {
        let report = verify_rank(&tables(), Series::D, 2);
        assert!(report.passed(), "{report}");
        let counting = report
            .rank_results
            .iter()
            .find(|r| r.id == CheckId::Counting)
            .expect("counting result present");
        assert_eq!(counting.status, CheckStatus::NotApplicable);
    }

    #[test]
    fn reports_are_identical_across_runs() {
        let first = verify_rank(&tables(), Series::C, 3);
        let second = verify_rank(&tables(), Series::C, 3);
        assert_eq!(first.to_json().to_string(), second.to_json().to_string());
        assert_eq!(first.to_string(), second.to_string());
    }

    #[test]
    fn run_covers_the_requested_grid_in_order() {
        let config = RunConfig {
            series: vec![Series::B, Series::D],
            min_rank: 0,
            max_rank: 2,
            checks: None,
        };
        let reports = verify_run(&tables(), &config);
        let grid: Vec<(Series, u32)> = reports.iter().map(|r| (r.series, r.n)).collect();
        assert_eq!(
            grid,
            [
                (Series::B, 0),
                (Series::B, 1),
                (Series::B, 2),
                (Series::D, 0),
                (Series::D, 1),
                (Series::D, 2),
            ]
        );
        assert!(reports.iter().all(RankReport::passed));
    }

    #[test]
    fn check_filter_restricts_report_contents() {
        let config = RunConfig {
            series: vec![Series::C],
            min_rank: 2,
            max_rank: 2,
            checks: Some(vec![CheckId::Diagram, CheckId::Stabilization]),
        };
        let reports = verify_run(&tables(), &config);
        for result in reports[0].results() {
            assert!(matches!(
                result.id,
                CheckId::Diagram | CheckId::Stabilization
            ));
        }
    }

    #[test]
    fn mutated_rounding_is_caught_at_small_rank() {
        let mut tables = tables();
        tables.struct_params_mut(Series::C).i_round = Rounding::Floor;
        let caught = (0..=4).any(|n| !verify_rank(&tables, Series::C, n).passed());
        assert!(caught);
    }

    #[test]
    fn mutated_ladder_parity_fails_the_ladder_details_check() {
        let mut tables = tables();
        tables.struct_params_mut(Series::B).ladder_bottom_iso = Parity::Odd;
        let report = verify_rank(&tables, Series::B, 2);
        assert!(!report.passed());
        let ladder_failed = report
            .results()
            .any(|r| r.id == CheckId::DetailsLadder && r.status == CheckStatus::Fail);
        assert!(ladder_failed, "{report}");
    }

    #[test]
    fn golden_family_report_names_the_expected_scopes() {
        let t = tables();
        let stable = t.stabilized(Series::C, 2).expect("rank 2 stabilizes");
        let symbol_classes = classify(&stable.symbols).expect("classifiable");
        let usymbol_classes = classify(&stable.usymbols).expect("classifiable");
        let golden = symbol_classes
            .iter()
            .find(|sc| sc.canonical.entries() == [0, 0, 1, 2, 3])
            .expect("the worked example family is present");
        let family = Family::assemble(&t, golden, &usymbol_classes).expect("assembles");
        let table = PartitionTable::build(&t, 2, stable.m_star).expect("partition table");
        let report = verify_family(&t, &family, Some(&table));
        assert!(report.passed());
        let ids: Vec<CheckId> = report.results.iter().map(|r| r.id).collect();
        assert_eq!(ids, CheckId::FAMILY_SCOPE.to_vec());
        for result in &report.results {
            assert_eq!(result.status, CheckStatus::Pass, "{result:?}");
        }
    }
}
