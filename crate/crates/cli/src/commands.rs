use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{bail, Context, Result};
use emsum_core::engine::{aggregate, merge_files, ReductionMode, ReductionPlan, SummaryFile};
use emsum_core::ingestion::{self, Dataset, Format, SplitStrategy};
use emsum_core::verification::harness::verify_records_with;
use emsum_core::verification::{
    check_witness, published_example, search_witness, Tolerance, WitnessQuadruple, WitnessReport,
};
use emsum_core::{Mergeable, Schema, SchemaSummary};

use crate::table::Table;
use crate::{MergeArgs, Status, SummarizeArgs, VerifyArgs, WitnessArgs};

fn read_schema(path: &Path) -> Result<Schema> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading schema {}", path.display()))?;
    Schema::from_json(&text).with_context(|| format!("schema {}", path.display()))
}

fn read_data(path: &Path, format: Option<Format>, schema: &Schema) -> Result<Dataset> {
    let format = match format.or_else(|| Format::from_path(path)) {
        Some(f) => f,
        None => bail!("cannot infer the format of {}; pass --format", path.display()),
    };
    ingestion::load(path, format, schema).with_context(|| format!("loading {}", path.display()))
}

fn split_strategy(name: &str, partitions: Option<usize>) -> Result<SplitStrategy> {
    if let Some(column) = name.strip_prefix("by-column:") {
        if partitions.is_some() {
            bail!("--partitions cannot be combined with --strategy by-column");
        }
        return Ok(SplitStrategy::ByColumn(column.to_string()));
    }
    let k = partitions.unwrap_or(1);
    if k == 0 {
        bail!("--partitions must be at least 1");
    }
    match name {
        "round-robin" => Ok(SplitStrategy::RoundRobin(k)),
        "contiguous" => Ok(SplitStrategy::Contiguous(k)),
        _ => bail!("unknown strategy {name:?}; expected round-robin, contiguous or by-column:NAME"),
    }
}

fn reduction_plan(args: &SummarizeArgs) -> Result<ReductionPlan> {
    let mode = match (args.plan, args.workers) {
        (m, None) => m,
        (ReductionMode::BalancedTree { .. }, Some(0)) => bail!("--workers must be at least 1"),
        (ReductionMode::BalancedTree { .. }, Some(workers)) => ReductionMode::BalancedTree { workers },
        (ReductionMode::SequentialLeftFold, Some(_)) => bail!("--workers needs --plan tree"),
    };
    if args.nondeterministic && mode == ReductionMode::SequentialLeftFold {
        bail!("--nondeterministic needs --plan tree");
    }
    Ok(ReductionPlan {
        mode,
        deterministic: !args.nondeterministic,
    })
}

fn summary_table(summaries: &SchemaSummary) -> String {
    let mut t = Table::new(["variable", "kind", "units", "summary"]);
    for (name, s) in &summaries.variables {
        let units = s.units().map_or_else(|| "-".to_string(), |n| n.to_string());
        t.row([name.clone(), s.spec().name().to_string(), units, s.to_string()]);
    }
    t.render()
}

fn print_file(file: &SummaryFile) {
    println!("partitions: {}", file.provenance.len());
    print!("{}", summary_table(&file.summaries));
}

pub fn summarize(args: &SummarizeArgs) -> Result<Status> {
    let strategy = split_strategy(&args.strategy, args.partitions)?;
    let plan = reduction_plan(args)?;
    let schema = read_schema(&args.schema)?;
    let data = read_data(&args.data, args.format, &schema)?;
    let parts = ingestion::split(&data, &strategy)?;
    let agg = aggregate(&parts, &schema, &plan)?;
    let label = match &args.label {
        Some(l) => l.clone(),
        None => args
            .data
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_else(|| "data".into()),
    };
    let provenance: BTreeSet<String> = agg.provenance.iter().map(|p| format!("{label}#{p}")).collect();
    let file = SummaryFile::new(agg.summary, provenance, args.encoding);
    if let Some(out) = &args.output {
        file.write(out)?;
    }
    print_file(&file);
    Ok(Status::Ok)
}

pub fn merge(args: &MergeArgs) -> Result<Status> {
    let file = merge_files(&args.files)?;
    if let Some(out) = &args.output {
        file.write(out)?;
    }
    print_file(&file);
    Ok(Status::Ok)
}

pub fn verify(args: &VerifyArgs) -> Result<Status> {
    if args.tolerance.is_nan() || args.tolerance < 0.0 {
        bail!("--tolerance must be non-negative");
    }
    let schema = read_schema(&args.schema)?;
    let data = read_data(&args.data, args.format, &schema)?;
    let tol = Tolerance {
        relative: args.tolerance,
    };
    let inject = args.inject_fault;
    let results = verify_records_with(&schema, &data.records, args.splits, args.seed, tol, |a, b| {
        if inject {
            Ok(a.clone())
        } else {
            a.merge(b)
        }
    })?;

    let mut t = Table::new(["variable", "kind", "splits", "exact", "within_tol", "violations", "max_rel_err", "status"]);
    let mut all_pass = true;
    for (name, r) in &results {
        all_pass &= r.passed();
        t.row([
            name.clone(),
            r.kind.clone(),
            r.trials.to_string(),
            r.exact.to_string(),
            r.within_tolerance.to_string(),
            r.violations.to_string(),
            format!("{:.3e}", r.max_relative_error),
            if r.passed() { "PASS" } else { "FAIL" }.to_string(),
        ]);
    }
    print!("{}", t.render());
    println!("{}", if all_pass { "verified" } else { "merge law violated" });
    if let Some(out) = &args.output {
        let report: serde_json::Map<String, serde_json::Value> = results
            .iter()
            .map(|(n, r)| Ok((n.clone(), serde_json::to_value(r)?)))
            .collect::<Result<_>>()?;
        std::fs::write(out, serde_json::to_vec_pretty(&report)?)
            .with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(if all_pass { Status::Ok } else { Status::Failed })
}

fn parse_universe(text: &str) -> Result<Vec<f64>> {
    if let Some((a, b)) = text.split_once("..") {
        let a: i64 = a.trim().parse().with_context(|| format!("universe start {a:?}"))?;
        let b: i64 = b.trim().parse().with_context(|| format!("universe end {b:?}"))?;
        if a > b {
            bail!("empty universe {text:?}");
        }
        return Ok((a..=b).map(|x| x as f64).collect());
    }
    text.split(',')
        .map(|x| x.trim().parse::<f64>().with_context(|| format!("universe value {x:?}")))
        .collect()
}

fn list(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|&x| emsum_core::value::fmt_real(x)).collect();
    format!("[{}]", items.join(", "))
}

/// Text rendering of a checked quadruple; parts first, then the unions.
pub fn render_witness(w: &WitnessQuadruple, r: &WitnessReport) -> String {
    let stat = w.statistic;
    let rows = [
        ("A1", list(&w.a1), &r.a1),
        ("B1", list(&w.b1), &r.b1),
        ("A1+B1", list(&w.union1()), &r.union1),
        ("A2", list(&w.a2), &r.a2),
        ("B2", list(&w.b2), &r.b2),
        ("A2+B2", list(&w.union2()), &r.union2),
    ];
    let mut t = Table::new(["set", "values", &stat.to_string()]);
    for (name, values, v) in rows {
        t.row([name.to_string(), values, v.to_string()]);
    }
    let mut out = format!("statistic: {stat}\n");
    out.push_str(&t.render());
    out.push_str(if r.valid {
        "result: valid witness, the statistic is not exactly mergeable\n"
    } else {
        "result: not a witness\n"
    });
    out
}

pub fn witness(args: &WitnessArgs) -> Result<Status> {
    if let Some(n) = args.published_example {
        let Some(w) = published_example(n) else {
            bail!("no published example {n}; expected 1 or 2");
        };
        let r = check_witness(&w)?;
        print!("{}", render_witness(&w, &r));
        return Ok(if r.valid { Status::Ok } else { Status::Failed });
    }
    let stat = args.stat.expect("clap requires --stat without --example");
    let universe = parse_universe(&args.universe)?;
    match search_witness(stat, &universe, args.max_size)? {
        Some(w) => {
            let r = check_witness(&w)?;
            print!("{}", render_witness(&w, &r));
            // a witness for a mergeable statistic means a bug somewhere
            Ok(if stat.is_mergeable() || !r.valid {
                Status::Failed
            } else {
                Status::Ok
            })
        }
        None => {
            println!(
                "none found: {stat} over {} with sets of at most {} values",
                args.universe, args.max_size
            );
            Ok(Status::Ok)
        }
    }
}
