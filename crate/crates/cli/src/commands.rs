use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use serde_json::json;

use scourbench::accuracy::{self, AccuracyReport, Subset};
use scourbench::dataset::{self, Flag, PierScourRecord};
use scourbench::distributions::{self, Family, Truncated};
use scourbench::equations::{predict_detailed, EquationId, InputParam, ScourInputs};
use scourbench::factors::FactorTables;
use scourbench::oat;
use scourbench::pawn::{self, GsaConfig, Marginal};
use scourbench::reference::{self, Block, Source, LENGTH_RATIO, LENGTH_RATIO_VARIANTS};
use scourbench::Error;

use crate::config::FileConfig;
use crate::output::{sig4, table, Outputs};
use crate::{AccuracyArgs, Cli, Command, Common, DataArgs, FitArgs, Format, GsaArgs, IngestArgs, OatArgs, PredictArgs, Usage};

const DEFAULT_OUT: &str = "scourbench-out";

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    if let Some(n) = cli.threads.or(file.threads) {
        set_threads(n)?;
    }
    match cli.command {
        Command::Ingest(a) => ingest(a, &file),
        Command::Predict(a) => predict(a),
        Command::Accuracy(a) => accuracy(a, &file),
        Command::Fit(a) => fit(a, &file),
        Command::Oat(a) => oat_cmd(a, &file),
        Command::Gsa(a) => gsa(a, &file),
    }
}

fn set_threads(n: usize) -> anyhow::Result<()> {
    if n == 0 {
        return Err(usage("--threads must be at least 1"));
    }
    start_pool(n)
}

#[cfg(feature = "parallel")]
fn start_pool(n: usize) -> anyhow::Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("starting worker pool")
}

#[cfg(not(feature = "parallel"))]
fn start_pool(_: usize) -> anyhow::Result<()> {
    Ok(())
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn equations(flag: &Option<String>, file: &FileConfig) -> anyhow::Result<Vec<EquationId>> {
    let names: Vec<String> = match (flag, &file.equation) {
        (Some(s), _) => s.split(',').map(|x| x.trim().to_string()).collect(),
        (None, Some(list)) => list.clone().into_vec(),
        (None, None) => vec!["all".into()],
    };
    let mut out = Vec::new();
    for n in names {
        if n.eq_ignore_ascii_case("all") {
            out.extend(EquationId::ALL);
        } else {
            out.push(n.parse::<EquationId>().map_err(|e| usage(e.to_string()))?);
        }
    }
    out.dedup();
    Ok(out)
}

fn source(flag: &Option<String>, file: &FileConfig) -> anyhow::Result<Source> {
    let s = flag
        .clone()
        .or_else(|| file.source.clone())
        .ok_or_else(|| usage("--source is required (lab or field)"))?;
    s.parse().map_err(|e: Error| usage(e.to_string()))
}

fn out_dir(c: &Common, file: &FileConfig) -> PathBuf {
    c.out.clone().or_else(|| file.out.clone()).unwrap_or_else(|| DEFAULT_OUT.into())
}

fn format(c: &Common, file: &FileConfig) -> anyhow::Result<Format> {
    match (c.format, &file.format) {
        (Some(f), _) => Ok(f),
        (None, Some(s)) => match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            _ => Err(usage(format!("unknown format {s:?}"))),
        },
        (None, None) => Ok(Format::Csv),
    }
}

fn data_path(d: &DataArgs, source: Source, file: &FileConfig) -> anyhow::Result<PathBuf> {
    if let Some(p) = d.data.clone().or_else(|| file.data.clone()) {
        return Ok(p);
    }
    match d.data_dir.clone().or_else(|| file.data_dir.clone()) {
        Some(dir) => Ok(dir.join(format!("{source}.csv"))),
        None => Err(usage("no dataset: pass --data, --data-dir or set SCOURBENCH_DATA_DIR")),
    }
}

fn load(path: &Path, source: Source) -> anyhow::Result<Vec<PierScourRecord>> {
    let report = dataset::load_records(path, source).with_context(|| format!("loading {}", path.display()))?;
    if let Some(first) = report.row_errors.first() {
        for e in &report.row_errors {
            eprintln!("{}:{}: {}", path.display(), e.line, e.message);
        }
        return Err(Error::Schema {
            path: path.to_path_buf(),
            message: format!("{} bad rows, first at line {}", report.row_errors.len(), first.line),
        }
        .into());
    }
    Ok(report.records)
}

fn ingest(a: IngestArgs, file: &FileConfig) -> anyhow::Result<()> {
    let source = source(&a.source, file)?;
    let out = out_dir(&a.common, file);
    let mut outputs = Outputs::new(&out)?;
    outputs.input(&a.input)?;
    let report = dataset::load_export(&a.input, source)?;
    if !report.row_errors.is_empty() {
        for e in &report.row_errors {
            eprintln!("{}:{}: {}", a.input.display(), e.line, e.message);
        }
        return Err(Error::Schema {
            path: a.input.clone(),
            message: format!("{} rows could not be read", report.row_errors.len()),
        }
        .into());
    }
    let mut records = report.records;
    let mut filled = 0;
    if let Some(companion) = &a.lengths {
        outputs.input(companion)?;
        let (merged, n) = dataset::merge_lengths(&records, companion)?;
        records = merged;
        filled = n;
    }
    for r in &mut records {
        if r.flow_depth == 0.0 {
            r.flags.insert(Flag::ExcludedZeroDepth);
        }
        if r.velocity == 0.0 {
            r.flags.insert(Flag::ExcludedZeroVelocity);
        }
    }
    let mut canonical = Vec::new();
    dataset::write_records(&mut canonical, &records)?;
    outputs.write(&format!("{source}.csv"), &canonical)?;

    let count = |f: &dyn Fn(&PierScourRecord) -> bool| records.iter().filter(|r| f(r)).count();
    let summary: Vec<_> = dataset::summarize_source(&records, source)
        .into_iter()
        .filter_map(|r| r.ok())
        .collect();
    let ingest_report = json!({
        "source": source,
        "records": records.len(),
        "excluded_zero_y1": count(&|r| r.has(Flag::ExcludedZeroDepth)),
        "excluded_zero_V1": count(&|r| r.has(Flag::ExcludedZeroVelocity)),
        "missing_length": count(&|r| r.pier_length.is_none()),
        "lengths_filled_from_companion": filled,
        "missing_critical_velocity": count(&|r| r.critical_velocity.is_none()),
        "missing_d50": count(&|r| r.d50_mm.is_none()),
        "summary": summary,
    });
    outputs.write_json(&format!("ingest-{source}.json"), &ingest_report)?;

    println!("{} {source} records written to {}", records.len(), out.join(format!("{source}.csv")).display());
    let rows: Vec<Vec<String>> = summary
        .iter()
        .map(|s| {
            vec![
                s.parameter.symbol().to_string(),
                sig4(s.min),
                sig4(s.max),
                sig4(s.mean),
                sig4(s.sd),
                s.count_used.to_string(),
            ]
        })
        .collect();
    print!("{}", table(&["param", "min", "max", "mean", "sd", "n"], &rows));
    outputs.finish(
        "ingest",
        None,
        json!({"source": source, "input": a.input, "lengths": a.lengths}),
    )
}

fn predict(a: PredictArgs) -> anyhow::Result<()> {
    let eq: EquationId = a.equation.parse().map_err(|e: Error| usage(e.to_string()))?;
    let need = |v: Option<f64>, p: InputParam, flag: &str| -> anyhow::Result<f64> {
        match v {
            Some(v) => Ok(v),
            None if eq.uses(p) => Err(usage(format!("{} requires --{flag}", eq.key()))),
            // placeholder for an input the equation never reads
            None => Ok(1.0),
        }
    };
    let mut x = ScourInputs::new(
        need(a.b, InputParam::Width, "B")?,
        need(a.y1, InputParam::Depth, "y1")?,
        need(a.v1, InputParam::Velocity, "V1")?,
    );
    x.pier_length = a.l;
    x.critical_velocity = a.vc;
    x.attack_angle = a.theta;
    x.d50_mm = a.d50;
    x.spacing = a.s;
    if let Some(s) = &a.shape {
        x.shape = Some(s.parse().map_err(|e: Error| usage(e.to_string()))?);
    }
    let loaded;
    let tables = match &a.factors {
        Some(dir) => {
            loaded = FactorTables::load_dir(dir)?;
            &loaded
        }
        None => FactorTables::embedded(),
    };
    let p = predict_detailed(eq, &x, tables)?;
    println!("{:.3}", p.depth);
    for (name, v) in &p.factors {
        println!("  {name} = {}", sig4(*v));
    }
    Ok(())
}

fn subset(flag: &Option<String>, file: &FileConfig) -> anyhow::Result<Subset> {
    match flag.clone().or_else(|| file.subset.clone()) {
        None => Ok(Subset::All),
        Some(s) => match s.parse::<Subset>() {
            Ok(Subset::All) => Ok(Subset::All),
            Ok(Subset::UpTo2m) => Ok(Subset::UpTo2m),
            _ => Err(usage(format!("subset must be all or le2m, got {s:?}"))),
        },
    }
}

fn length_ratio(flag: Option<f64>, file: &FileConfig) -> anyhow::Result<f64> {
    let r = flag.or(file.length_ratio).unwrap_or(LENGTH_RATIO);
    if LENGTH_RATIO_VARIANTS.contains(&r) {
        Ok(r)
    } else {
        Err(usage(format!("--length-ratio must be one of {LENGTH_RATIO_VARIANTS:?}, got {r}")))
    }
}

fn published_block(source: Source, subset: Subset) -> Option<Block> {
    match (source, subset) {
        (Source::Lab, Subset::All) => Some(Block::Lab),
        (Source::Field, Subset::All) => Some(Block::Field),
        (Source::Field, Subset::UpTo2m) => Some(Block::FieldUpTo2m),
        _ => None,
    }
}

fn accuracy(a: AccuracyArgs, file: &FileConfig) -> anyhow::Result<()> {
    let eqs = equations(&a.equation, file)?;
    let source = source(&a.data.source, file)?;
    let subset = subset(&a.subset, file)?;
    let ratio = length_ratio(a.length_ratio, file)?;
    let fmt = format(&a.common, file)?;
    let path = data_path(&a.data, source, file)?;
    let records = dataset::prepare(&load(&path, source)?, ratio)?;
    let out = out_dir(&a.common, file);
    let mut outputs = Outputs::new(&out)?;
    outputs.input(&path)?;

    let reports: Vec<AccuracyReport> = eqs.iter().map(|&eq| accuracy::accuracy_report(&records, eq, subset)).collect();
    let stem = format!("accuracy-{source}-{}", subset_key(subset));
    match fmt {
        Format::Json => {
            outputs.write_json(&format!("{stem}.json"), &reports)?;
        }
        Format::Csv | Format::Svg => {
            let mut buf = Vec::new();
            accuracy::write_reports_csv(&mut buf, &reports, |v| v.to_string())?;
            outputs.write(&format!("{stem}.csv"), &buf)?;
        }
    }
    for &eq in &eqs {
        let points = accuracy::scatter_export(&records, eq, subset);
        let name = format!("scatter-{}-{source}-{}", eq.key(), subset_key(subset));
        if fmt == Format::Svg {
            let svg = accuracy::scatter_svg(&points, &format!("{} ({source})", eq.display_name()));
            outputs.write(&format!("{name}.svg"), svg.as_bytes())?;
        } else {
            let mut buf = Vec::new();
            accuracy::write_scatter_csv(&mut buf, &points)?;
            outputs.write(&format!("{name}.csv"), &buf)?;
        }
    }

    let block = published_block(source, subset);
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let published = block.map(|b| reference::published_accuracy_row(b, r.equation));
            let pub_cell = |f: fn(&reference::PublishedAccuracy) -> f64| published.map(|p| sig4(f(p))).unwrap_or_else(|| "-".into());
            vec![
                r.equation.key().to_string(),
                r.n_evaluated.to_string(),
                sig4(r.pct_under),
                sig4(r.pct_over),
                sig4(r.pct_within_pm50),
                pub_cell(|p| p.pm50.1),
                sig4(r.pct_within_factor15),
                pub_cell(|p| p.factor15.1),
                r.skipped.len().to_string(),
            ]
        })
        .collect();
    print!(
        "{}",
        table(
            &["equation", "n", "under%", "over%", "pm50%", "published", "f1.5%", "published", "skipped"],
            &rows
        )
    );
    outputs.finish(
        "accuracy",
        None,
        json!({
            "equations": eqs.iter().map(|e| e.key()).collect::<Vec<_>>(),
            "source": source,
            "subset": subset,
            "length_ratio": ratio,
            "format": fmt,
            "data": path,
            "tie_rule": "predicted == measured counts as over",
        }),
    )
}

fn subset_key(s: Subset) -> &'static str {
    match s {
        Subset::UpTo2m => "le2m",
        other => other.as_str(),
    }
}

#[derive(Serialize)]
struct FitRow {
    #[serde(flatten)]
    row: distributions::FitReportRow,
    n: usize,
    published_family: Option<Family>,
}

fn published_family(source: Source, p: InputParam) -> Option<Family> {
    use reference::PublishedDist as D;
    reference::published_dist(source, p).map(|d| match d {
        D::Gev(_) => Family::Gev,
        D::Gamma(_) => Family::Gamma,
        D::LogNormal(_) => Family::LogNormal,
        D::Uniform(_) => Family::Uniform,
    })
}

fn fit(a: FitArgs, file: &FileConfig) -> anyhow::Result<()> {
    let source = source(&a.data.source, file)?;
    let fmt = format(&a.common, file)?;
    let path = data_path(&a.data, source, file)?;
    let records = load(&path, source)?;
    let out = out_dir(&a.common, file);
    let mut outputs = Outputs::new(&out)?;
    outputs.input(&path)?;

    let mut rows = Vec::new();
    let mut human = Vec::new();
    for &p in dataset::summary_params(source) {
        let values = dataset::usable_values(&records, p);
        let fits = distributions::fit_all(&values, &Family::ALL).with_context(|| format!("fitting {}", p.symbol()))?;
        let published = published_family(source, p);
        for r in distributions::report_rows(p.symbol(), &fits) {
            if r.selected {
                human.push(vec![
                    p.symbol().to_string(),
                    r.family.to_string(),
                    r.params.iter().map(|&v| sig4(v)).collect::<Vec<_>>().join(", "),
                    sig4(r.aic),
                    published.map(|f| f.to_string()).unwrap_or_else(|| "-".into()),
                ]);
            }
            rows.push(FitRow {
                row: r,
                n: values.len(),
                published_family: published,
            });
        }
    }
    let name = format!("fit-{source}");
    if fmt == Format::Json {
        outputs.write_json(&format!("{name}.json"), &rows)?;
    } else {
        let mut w = csv_writer();
        w.write_record(["parameter", "family", "params", "loglik", "aic", "selected", "n", "published_family"])?;
        for r in &rows {
            w.write_record([
                r.row.parameter.clone(),
                r.row.family.to_string(),
                r.row.params.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";"),
                r.row.loglik.to_string(),
                r.row.aic.to_string(),
                r.row.selected.to_string(),
                r.n.to_string(),
                r.published_family.map(|f| f.to_string()).unwrap_or_default(),
            ])?;
        }
        outputs.write(&format!("{name}.csv"), &w.into_inner()?)?;
    }
    print!("{}", table(&["param", "selected", "params", "AIC", "published"], &human));
    outputs.finish("fit", None, json!({"source": source, "format": fmt, "data": path}))
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn oat_cmd(a: OatArgs, file: &FileConfig) -> anyhow::Result<()> {
    let eqs = equations(&a.equation, file)?;
    let source = source(&a.source, file)?;
    let fmt = format(&a.common, file)?;
    let out = out_dir(&a.common, file);
    let mut outputs = Outputs::new(&out)?;
    let results = eqs
        .iter()
        .map(|&eq| oat::run_oat(eq, source))
        .collect::<scourbench::Result<Vec<_>>>()?;
    let name = format!("oat-{source}");
    if fmt == Format::Json {
        outputs.write_json(&format!("{name}.json"), &results)?;
    } else {
        let mut buf = Vec::new();
        oat::write_csv(&mut buf, &results)?;
        outputs.write(&format!("{name}.csv"), &buf)?;
    }
    for r in &results {
        println!("{} (baseline ys = {} m)", r.equation.display_name(), sig4(r.baseline_ys));
        let rows: Vec<Vec<String>> = r
            .rows
            .iter()
            .map(|row| {
                let mut v = vec![row.param.symbol().to_string()];
                v.extend(row.t.iter().map(|&t| sig4(t)));
                v.push(sig4(row.t_delta));
                v.push(row.rank.to_string());
                v
            })
            .collect();
        print!("{}", table(&["param", "t_min", "t_max", "t_mu-sd", "t_mu+sd", "t_delta", "rank"], &rows));
        for c in &r.clamps {
            println!("  clamped {} {:?}: {} -> {}", c.param.symbol(), c.experiment, sig4(c.requested), sig4(c.used));
        }
    }
    outputs.finish(
        "oat",
        None,
        json!({"equations": eqs.iter().map(|e| e.key()).collect::<Vec<_>>(), "source": source, "format": fmt}),
    )
}

fn fitted_marginals(
    eq: EquationId,
    source: Source,
    records: &[PierScourRecord],
) -> anyhow::Result<Vec<(InputParam, Marginal)>> {
    pawn::gsa_marginals(eq, source)?
        .into_iter()
        .map(|(p, published)| {
            if reference::published_stats(source, p).is_none() {
                // no measurements to refit, e.g. the sampled shape factor
                return Ok((p, published));
            }
            let values = dataset::usable_values(records, p);
            let best = distributions::select_best(&values, &Family::ALL)
                .with_context(|| format!("fitting {} for {}", p.symbol(), eq.key()))?;
            let (lo, hi) = reference::physical_bounds(p);
            Ok((p, Marginal::new(p.symbol(), Truncated::new(best.distribution, lo, hi)?)))
        })
        .collect()
}

fn gsa(a: GsaArgs, file: &FileConfig) -> anyhow::Result<()> {
    let eqs = equations(&a.equation, file)?;
    let source = source(&a.data.source, file)?;
    let seed = a
        .seed
        .or(file.seed)
        .ok_or_else(|| usage("--seed is required for gsa"))?;
    let defaults = GsaConfig::new(seed);
    let config = GsaConfig {
        n_samples: a.n.or(file.samples).unwrap_or(defaults.n_samples),
        n_intervals: a.intervals.or(file.intervals).unwrap_or(defaults.n_intervals),
        bootstrap_resamples: a.resamples.or(file.resamples).unwrap_or(defaults.bootstrap_resamples),
        seed,
    };
    config.validate().map_err(|e| usage(e.to_string()))?;
    let marginals = a.marginals.clone().or_else(|| file.marginals.clone()).unwrap_or_else(|| "published".into());
    let fmt = format(&a.common, file)?;
    let out = out_dir(&a.common, file);
    let mut outputs = Outputs::new(&out)?;
    let records = match marginals.as_str() {
        "published" => None,
        "fitted" => {
            let path = data_path(&a.data, source, file)?;
            outputs.input(&path)?;
            Some(load(&path, source)?)
        }
        other => return Err(usage(format!("--marginals must be published or fitted, got {other:?}"))),
    };

    for &eq in &eqs {
        let named = match &records {
            None => pawn::gsa_marginals(eq, source)?,
            Some(r) => fitted_marginals(eq, source, r)?,
        };
        let (report, analysis) = pawn::run_gsa_with(eq, source, &named, &config)?;
        let stem = format!("gsa-{}-{source}", eq.key());
        outputs.write_json(&format!("{stem}.json"), &report)?;
        if fmt == Format::Csv {
            let mut w = csv_writer();
            w.write_record(["param", "S", "S_sample", "ci_lo", "ci_hi", "significant"])?;
            for i in report.indices.iter().chain([&report.dummy_column]) {
                w.write_record([
                    i.param.clone(),
                    i.s.to_string(),
                    i.s_sample.to_string(),
                    i.ci_lo.to_string(),
                    i.ci_hi.to_string(),
                    i.significant.to_string(),
                ])?;
            }
            w.write_record(["dummy_threshold_mean", &report.dummy.mean.to_string(), "", "", "", ""])?;
            w.write_record(["dummy_threshold_q95", &report.dummy.q95.to_string(), "", "", "", ""])?;
            outputs.write(&format!("{stem}.csv"), &w.into_inner()?)?;
        }
        let mut cdf = Vec::new();
        pawn::write_conditional_cdfs(&mut cdf, &analysis, config.n_intervals)?;
        outputs.write(&format!("{stem}-cdf.csv"), &cdf)?;

        println!(
            "{} ({source}): dummy mean {} q95 {}",
            eq.display_name(),
            sig4(report.dummy.mean),
            sig4(report.dummy.q95)
        );
        let rows: Vec<Vec<String>> = report
            .indices
            .iter()
            .map(|i| {
                vec![
                    i.param.clone(),
                    sig4(i.s),
                    sig4(i.ci_lo),
                    sig4(i.ci_hi),
                    if i.significant { "yes" } else { "no" }.to_string(),
                ]
            })
            .collect();
        print!("{}", table(&["param", "S", "ci_lo", "ci_hi", "significant"], &rows));
    }
    outputs.finish(
        "gsa",
        Some(seed),
        json!({
            "equations": eqs.iter().map(|e| e.key()).collect::<Vec<_>>(),
            "source": source,
            "gsa": config,
            "marginals": marginals,
            "format": fmt,
        }),
    )
}
