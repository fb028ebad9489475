//! Command-line surface for symbol and u-symbol combinatorics:
//! enumeration, family inspection, class lookup, verification, and
//! correspondence-table export.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use weyl_symbols::correspondence::{big_t, kappa, theorem_diagram, transversal, Family};
use weyl_symbols::series::{Kind, Series, Tables};
use weyl_symbols::structure::{u_blocks, BlockDecomp, IsoLabeling};
use weyl_symbols::symbols::{classify, Seq};
use weyl_symbols::verifier::{verify_run, CheckId, RankReport, RunConfig};

#[derive(Parser)]
#[command(
    name = "weyl-symbols",
    version,
    about = "Symbol and u-symbol combinatorics for classical Weyl groups",
    help_expected = true
)]
struct Cli {
    /// Worker threads for parallel verification (default: all cores).
    #[arg(long, global = true, value_name = "K")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, default_value = "text", value_parser = ["json", "csv", "text"])]
    format: String,
    /// Write output to a file instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List all symbols or u-symbols of one series at one rank.
    Enumerate {
        /// Series: B, C, or D.
        #[arg(long)]
        series: Series,
        /// Weyl group rank n.
        #[arg(long)]
        rank: u32,
        /// Which kind to enumerate: symbols or usymbols.
        #[arg(long, default_value = "symbols")]
        kind: Kind,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the assembled families of one series at one rank.
    Families {
        /// Series: B, C, or D.
        #[arg(long)]
        series: Series,
        /// Weyl group rank n.
        #[arg(long)]
        rank: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Inspect the class of one u-symbol: parts, blocks, isolated
    /// points, class invariant, and transversal.
    Class {
        /// Series: B, C, or D.
        #[arg(long)]
        series: Series,
        /// Comma-separated u-symbol entries, e.g. 1,1,3.
        #[arg(long, value_name = "ENTRIES")]
        usymbol: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the verification checks over a range of ranks.
    Verify {
        /// Series to verify (default: all three).
        #[arg(long, value_delimiter = ',')]
        series: Option<Vec<Series>>,
        /// Single rank to verify (lowest rank when --max-rank is given).
        #[arg(long)]
        rank: Option<u32>,
        /// Verify all ranks up to and including this one.
        #[arg(long)]
        max_rank: Option<u32>,
        /// Restrict the report to these comma-separated check names.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<CheckId>>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write the full correspondence table for one series at one rank.
    Export {
        /// Series: B, C, or D.
        #[arg(long)]
        series: Series,
        /// Weyl group rank n.
        #[arg(long)]
        rank: u32,
        #[command(flatten)]
        output: OutputArgs,
        /// Re-parse the exported JSON and compare it with the
        /// in-memory structures.
        #[arg(long, hide = true)]
        check_import: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            eprintln!("error: worker pool is already configured");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    let tables = Tables::standard();
    match command {
        Command::Enumerate {
            series,
            rank,
            kind,
            output,
        } => {
            let seqs = tables.enumerate(series, kind, rank)?;
            let rendered = render_enumeration(&seqs, &output.format)?;
            write_output(&output.out, &rendered)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Families {
            series,
            rank,
            output,
        } => {
            let families = assemble_families(&tables, series, rank)?;
            let rendered = render_families(&tables, series, rank, &families, &output.format)?;
            write_output(&output.out, &rendered)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Class {
            series,
            usymbol,
            output,
        } => {
            let rendered = render_class(&tables, series, &usymbol, &output.format)?;
            write_output(&output.out, &rendered)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            series,
            rank,
            max_rank,
            checks,
            output,
        } => {
            if rank.is_none() && max_rank.is_none() {
                bail!("specify --rank N, --max-rank N, or both");
            }
            let config = RunConfig {
                series: series.unwrap_or_else(|| Series::ALL.to_vec()),
                min_rank: rank.unwrap_or(0),
                max_rank: max_rank.or(rank).unwrap_or(0),
                checks,
            };
            if config.min_rank > config.max_rank {
                bail!(
                    "--rank {} exceeds --max-rank {}",
                    config.min_rank,
                    config.max_rank
                );
            }
            let start = Instant::now();
            let reports = verify_run(&tables, &config);
            let failed = reports.iter().filter(|r| !r.passed()).count();
            let rendered = render_reports(&reports, &output.format)?;
            write_output(&output.out, &rendered)?;
            eprintln!(
                "verified {} rank(s) in {} ms",
                reports.len(),
                start.elapsed().as_millis()
            );
            if failed > 0 {
                eprintln!("{failed} rank(s) failed");
                Ok(ExitCode::from(1))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Export {
            series,
            rank,
            output,
            check_import,
        } => {
            let table = build_export(&tables, series, rank)?;
            let rendered = match output.format.as_str() {
                "json" | "text" => format!("{:#}\n", table.json),
                "csv" => table.csv.clone(),
                other => bail!("unknown format {other:?}"),
            };
            write_output(&output.out, &rendered)?;
            if check_import {
                check_import_round_trip(&table)?;
                eprintln!("import round-trip ok");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => {
            use std::io::Write as _;
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(content.as_bytes()) {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    // The reader hung up (e.g. piped into head): die with
                    // the conventional SIGPIPE exit status, not a panic.
                    std::process::exit(141);
                }
                return Err(e).context("writing to standard output");
            }
        }
    }
    Ok(())
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn entries_field(seq: &Seq) -> String {
    let entries: Vec<String> = seq.entries().iter().map(u32::to_string).collect();
    entries.join(" ")
}

fn mask_bits(mask: u64) -> Vec<u32> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

fn mask_to_set(mask: u64) -> String {
    let members: Vec<String> = mask_bits(mask).iter().map(u32::to_string).collect();
    format!("{{{}}}", members.join(","))
}

fn render_enumeration(seqs: &[Seq], format: &str) -> Result<String> {
    let mut out = String::new();
    match format {
        "text" => {
            for seq in seqs {
                writeln!(out, "{seq}")?;
            }
        }
        "json" => {
            let value = serde_json::to_value(seqs)?;
            writeln!(out, "{value:#}")?;
        }
        "csv" => {
            writeln!(out, "series,kind,n,m,entries")?;
            for seq in seqs {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    seq.series(),
                    seq.kind(),
                    seq.n(),
                    seq.m(),
                    entries_field(seq)
                )?;
            }
        }
        other => bail!("unknown format {other:?}"),
    }
    Ok(out)
}

fn assemble_families(tables: &Tables, series: Series, rank: u32) -> Result<Vec<Family>> {
    let stable = tables.stabilized(series, rank)?;
    let symbol_classes = classify(&stable.symbols)?;
    let usymbol_classes = classify(&stable.usymbols)?;
    symbol_classes
        .iter()
        .map(|sc| {
            Family::assemble(tables, sc, &usymbol_classes)
                .map_err(|e| anyhow!("family {}: {e}", sc.canonical))
        })
        .collect()
}

/// The entry-index spans of the blocks a transversal mask selects.
fn block_spans(decomp: &BlockDecomp, mask: u64) -> Vec<[usize; 2]> {
    decomp
        .blocks
        .iter()
        .enumerate()
        .filter(|&(q, _)| mask >> q & 1 == 1)
        .map(|(_, block)| [block.lo, block.hi])
        .collect()
}

fn family_json(tables: &Tables, family: &Family) -> Result<Value> {
    let mut members = Vec::new();
    for member in &family.members {
        let invariant = kappa(&family.labeling, member)?.canonical();
        members.push(json!({
            "symbol": member,
            "kappa": {
                "x": invariant.group_part().support(),
                "chi": invariant.character_part().support(),
            },
        }));
    }
    let mut classes = Vec::new();
    for piece in &family.pieces {
        let masks = transversal(tables, &piece.canonical, &piece.decomp)?;
        classes.push(json!({
            "usymbol": piece.canonical,
            "t": piece.t,
            "transversal": masks
                .iter()
                .map(|&m| block_spans(&piece.decomp, m))
                .collect::<Vec<_>>(),
        }));
    }
    Ok(json!({
        "special": family.special,
        "f": family.labeling.f(),
        "members": members,
        "classes": classes,
    }))
}

fn render_families(
    tables: &Tables,
    series: Series,
    rank: u32,
    families: &[Family],
    format: &str,
) -> Result<String> {
    let mut out = String::new();
    match format {
        "text" => {
            for family in families {
                writeln!(
                    out,
                    "family {}: {} members, f = {}",
                    family.special,
                    family.members.len(),
                    family.labeling.f()
                )?;
                for piece in &family.pieces {
                    let masks = transversal(tables, &piece.canonical, &piece.decomp)?;
                    writeln!(
                        out,
                        "  class {}: t = {}, {} blocks, transversal size {}",
                        piece.canonical,
                        piece.t,
                        piece.decomp.blocks.len(),
                        masks.len()
                    )?;
                }
            }
        }
        "json" => {
            let values = families
                .iter()
                .map(|f| family_json(tables, f))
                .collect::<Result<Vec<_>>>()?;
            writeln!(out, "{:#}", Value::Array(values))?;
        }
        "csv" => {
            writeln!(out, "series,n,family,class,t,blocks,transversal_size")?;
            for family in families {
                for piece in &family.pieces {
                    let masks = transversal(tables, &piece.canonical, &piece.decomp)?;
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        series,
                        rank,
                        csv_field(&family.special.to_string()),
                        csv_field(&piece.canonical.to_string()),
                        csv_field(&piece.t.to_string()),
                        piece.decomp.blocks.len(),
                        masks.len()
                    )?;
                }
            }
        }
        other => bail!("unknown format {other:?}"),
    }
    Ok(out)
}

fn parse_entries(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .with_context(|| format!("invalid entry {part:?}"))
        })
        .collect()
}

/// Infer rank and level from raw u-symbol entries: the level comes from
/// the sequence length, the rank from the entry sum.
fn infer_u_rank(tables: &Tables, series: Series, entries: &[u32]) -> Result<(u32, u32)> {
    let params = tables.seq_params(series, Kind::USymbol);
    let len = entries.len();
    if len < params.len_extra || (len - params.len_extra) % 2 != 0 {
        bail!("{len} entries do not form a series {series} u-symbol");
    }
    let m = ((len - params.len_extra) / 2) as u32;
    let total: u64 = entries.iter().map(|&e| e as u64).sum();
    let base = params.sum_target(0, m);
    let n = total
        .checked_sub(base)
        .ok_or_else(|| anyhow!("entry sum {total} is below the level minimum {base}"))?;
    Ok((u32::try_from(n)?, m))
}

fn render_class(tables: &Tables, series: Series, usymbol: &str, format: &str) -> Result<String> {
    let entries = parse_entries(usymbol)?;
    let (n, m) = infer_u_rank(tables, series, &entries)?;
    let input = tables.validate(series, Kind::USymbol, n, m, entries)?;
    let mut sorted_entries = input.entries().to_vec();
    sorted_entries.sort_unstable();
    let canonical = tables.validate(series, Kind::USymbol, n, m, sorted_entries)?;

    let decomp = u_blocks(tables, &canonical)?;
    let image = tables.i_bijection(&canonical)?;
    let mut special_entries = image.entries().to_vec();
    special_entries.sort_unstable();
    let special = tables.validate(series, Kind::Symbol, n, m, special_entries)?;
    let labeling = IsoLabeling::from_special(tables, &special)?;
    let points = labeling.points_of(&image)?;
    let t = weyl_symbols::correspondence::t_of_class(&labeling, &image)?;
    let masks = transversal(tables, &canonical, &decomp)?;
    let piece = family_piece(tables, &special, &canonical)?;
    let parameters = big_t(tables, &piece)?;

    let mut out = String::new();
    match format {
        "text" => {
            writeln!(out, "u-symbol {input}: series {series}, n = {n}, m = {m}")?;
            if input.entries() != canonical.entries() {
                writeln!(out, "distinguished class member: {canonical}")?;
            }
            writeln!(out, "symbol image: {image}")?;
            writeln!(out, "special symbol: {special}")?;
            let parts: Vec<String> = decomp.parts.iter().map(|p| p.to_string()).collect();
            writeln!(out, "parts: {}", parts.join(", "))?;
            if decomp.blocks.is_empty() {
                writeln!(out, "blocks: none")?;
            } else {
                let blocks: Vec<String> = decomp.blocks.iter().map(|b| b.to_string()).collect();
                writeln!(out, "blocks: {}", blocks.join(", "))?;
            }
            writeln!(out, "isolated indices of the image: {:?}", points.k())?;
            writeln!(out, "displaced labels: {}", mask_to_set(points.displaced()))?;
            writeln!(out, "t = {t}")?;
            let sets: Vec<String> = masks.iter().map(|&mask| mask_to_set(mask)).collect();
            writeln!(out, "transversal block sets: {}", sets.join(", "))?;
            let values: Vec<String> = parameters
                .iter()
                .map(|(x, chi)| format!("({x}, {chi})"))
                .collect();
            writeln!(out, "T-values: {}", values.join(", "))?;
        }
        "json" => {
            let value = json!({
                "usymbol": input,
                "class": canonical,
                "symbol": image,
                "special": special,
                "parts": decomp.parts.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "blocks": decomp.blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                "isolated": points.k(),
                "displaced": mask_bits(points.displaced()),
                "t": t,
                "transversal": masks.iter().map(|&m| mask_bits(m)).collect::<Vec<_>>(),
                "parameters": parameters,
            });
            writeln!(out, "{value:#}")?;
        }
        "csv" => {
            writeln!(out, "class,block_set,t,character")?;
            for (mask, (x, chi)) in masks.iter().zip(&parameters) {
                writeln!(
                    out,
                    "{},{},{},{}",
                    csv_field(&canonical.to_string()),
                    csv_field(&mask_to_set(*mask)),
                    csv_field(&x.to_string()),
                    csv_field(&chi.to_string())
                )?;
            }
        }
        other => bail!("unknown format {other:?}"),
    }
    Ok(out)
}

/// Look up the assembled piece class of one distinguished u-symbol
/// within the family of its special symbol.
fn family_piece(
    tables: &Tables,
    special: &Seq,
    canonical: &Seq,
) -> Result<weyl_symbols::correspondence::PieceClass> {
    let stable = tables.stabilized(special.series(), special.n())?;
    let symbol_classes = classify(&stable.symbols)?;
    let usymbol_classes = classify(&stable.usymbols)?;
    let shifted_special = shift_to_level(tables, special, stable.m_star)?;
    let symbol_class = symbol_classes
        .iter()
        .find(|sc| sc.canonical.entries() == shifted_special.entries())
        .ok_or_else(|| anyhow!("special symbol {special} is not in the enumeration"))?;
    let family = Family::assemble(tables, symbol_class, &usymbol_classes)?;
    let shifted_canonical = shift_to_level(tables, canonical, stable.m_star)?;
    family
        .pieces
        .iter()
        .find(|p| p.canonical.entries() == shifted_canonical.entries())
        .cloned()
        .ok_or_else(|| anyhow!("class {canonical} is not attached to family {special}"))
}

fn shift_to_level(tables: &Tables, seq: &Seq, m_star: u32) -> Result<Seq> {
    let mut current = seq.clone();
    while current.m() < m_star {
        current = tables.shift(&current)?;
    }
    while current.m() > m_star {
        current = tables
            .unshift(&current)
            .ok_or_else(|| anyhow!("{seq} does not reduce to the stable level"))?;
    }
    Ok(current)
}

fn render_reports(reports: &[RankReport], format: &str) -> Result<String> {
    let mut out = String::new();
    match format {
        "text" => {
            for report in reports {
                write!(out, "{report}")?;
            }
        }
        "json" => {
            let values: Vec<Value> = reports.iter().map(RankReport::to_json).collect();
            writeln!(out, "{:#}", Value::Array(values))?;
        }
        "csv" => {
            writeln!(out, "series,n,scope,check,status,witness")?;
            for report in reports {
                for result in &report.rank_results {
                    writeln!(
                        out,
                        "{},{},rank,{},{},{}",
                        report.series,
                        report.n,
                        result.id,
                        result.status,
                        csv_field(result.witness.as_deref().unwrap_or("")),
                    )?;
                }
                for family in &report.families {
                    for result in &family.results {
                        writeln!(
                            out,
                            "{},{},{},{},{},{}",
                            report.series,
                            report.n,
                            csv_field(&family.special.to_string()),
                            result.id,
                            result.status,
                            csv_field(result.witness.as_deref().unwrap_or("")),
                        )?;
                    }
                }
            }
        }
        other => bail!("unknown format {other:?}"),
    }
    Ok(out)
}

struct ExportTable {
    json: Value,
    csv: String,
    symbols: Vec<Seq>,
    usymbols: Vec<Seq>,
    families: Vec<Family>,
}

fn build_export(tables: &Tables, series: Series, rank: u32) -> Result<ExportTable> {
    let stable = tables.stabilized(series, rank)?;
    let symbol_classes = classify(&stable.symbols)?;
    let usymbol_classes = classify(&stable.usymbols)?;
    let families: Vec<Family> = symbol_classes
        .iter()
        .map(|sc| {
            Family::assemble(tables, sc, &usymbol_classes)
                .map_err(|e| anyhow!("family {}: {e}", sc.canonical))
        })
        .collect::<Result<Vec<_>>>()?;

    let family_values = families
        .iter()
        .map(|f| family_json(tables, f))
        .collect::<Result<Vec<_>>>()?;
    let json = json!({
        "series": series.to_string(),
        "n": rank,
        "m_star": stable.m_star,
        "symbols": stable.symbols,
        "usymbols": stable.usymbols,
        "symbol_classes": symbol_classes.iter().map(|c| json!({
            "canonical": c.canonical,
            "members": c.members,
        })).collect::<Vec<_>>(),
        "usymbol_classes": usymbol_classes.iter().map(|c| json!({
            "canonical": c.canonical,
            "members": c.members,
        })).collect::<Vec<_>>(),
        "families": family_values,
    });

    let mut csv = String::new();
    writeln!(
        csv,
        "series,n,family,class,t,block_set,twisted,member,kappa"
    )?;
    for family in &families {
        for piece in &family.pieces {
            let rows = theorem_diagram(tables, piece)
                .map_err(|e| anyhow!("family {}, class {}: {e}", family.special, piece.canonical))?;
            for row in rows {
                writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{},{}",
                    series,
                    rank,
                    csv_field(&family.special.to_string()),
                    csv_field(&piece.canonical.to_string()),
                    csv_field(&piece.t.to_string()),
                    csv_field(&mask_to_set(row.block_mask)),
                    csv_field(&row.twisted.to_string()),
                    csv_field(&row.member.to_string()),
                    csv_field(&row.kappa.to_string()),
                )?;
            }
        }
    }

    Ok(ExportTable {
        json,
        csv,
        symbols: stable.symbols,
        usymbols: stable.usymbols,
        families,
    })
}

/// Parse the exported JSON back and compare the sequence-level data
/// with the in-memory structures it came from.
fn check_import_round_trip(table: &ExportTable) -> Result<()> {
    let text = table.json.to_string();
    let parsed: Value = serde_json::from_str(&text).context("re-parsing exported JSON")?;

    let symbols: Vec<Seq> = serde_json::from_value(parsed["symbols"].clone())
        .context("re-reading symbols")?;
    if symbols != table.symbols {
        bail!("re-imported symbols differ from the in-memory enumeration");
    }
    let usymbols: Vec<Seq> = serde_json::from_value(parsed["usymbols"].clone())
        .context("re-reading u-symbols")?;
    if usymbols != table.usymbols {
        bail!("re-imported u-symbols differ from the in-memory enumeration");
    }

    let family_values = parsed["families"]
        .as_array()
        .ok_or_else(|| anyhow!("exported families are not an array"))?;
    if family_values.len() != table.families.len() {
        bail!(
            "re-imported {} families, expected {}",
            family_values.len(),
            table.families.len()
        );
    }
    for (value, family) in family_values.iter().zip(&table.families) {
        let special: Seq = serde_json::from_value(value["special"].clone())
            .context("re-reading a family's special symbol")?;
        if special != family.special {
            bail!("re-imported family {special} does not match {}", family.special);
        }
        let member_values = value["members"]
            .as_array()
            .ok_or_else(|| anyhow!("family {special}: members are not an array"))?;
        if member_values.len() != family.members.len() {
            bail!(
                "family {special}: re-imported {} members, expected {}",
                member_values.len(),
                family.members.len()
            );
        }
        for (member_value, member) in member_values.iter().zip(&family.members) {
            let symbol: Seq = serde_json::from_value(member_value["symbol"].clone())
                .context("re-reading a family member")?;
            if symbol != *member {
                bail!("family {special}: member {symbol} does not match {member}");
            }
        }
        let classes = value["classes"]
            .as_array()
            .ok_or_else(|| anyhow!("family {special}: classes are not an array"))?;
        if classes.len() != family.pieces.len() {
            bail!(
                "family {special}: re-imported {} classes, expected {}",
                classes.len(),
                family.pieces.len()
            );
        }
        for (class_value, piece) in classes.iter().zip(&family.pieces) {
            let canonical: Seq = serde_json::from_value(class_value["usymbol"].clone())
                .context("re-reading a class")?;
            if canonical != piece.canonical {
                bail!(
                    "family {special}: class {canonical} does not match {}",
                    piece.canonical
                );
            }
            let support: Vec<u32> = serde_json::from_value(class_value["t"].clone())
                .context("re-reading a class invariant")?;
            if support != piece.t.support() {
                bail!("family {special}, class {canonical}: re-imported t differs");
            }
        }
    }
    Ok(())
}
