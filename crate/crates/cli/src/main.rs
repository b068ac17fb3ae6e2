mod grades;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use moonshine_core::chartab::{self, check_fusion, fuse_subgroup};
use moonshine_core::decomp::{self, check_reconstruction, class_coefficients, ratio_row};
use moonshine_core::filtration::{self, exact_signs, fit_constant, m24_corollary_shape, nonfree_asymptotic, JSON_SCHEMA};
use moonshine_core::rademacher::CoefficientRecord;
use moonshine_core::{
    CharacterTable, CoefficientCache, CoefficientProvider, FiltrationError, PrecisionContext, RademacherProvider,
    TruncationPolicy,
};

use output::{sink, write_csv, write_json, Format};

const CACHE_FILE: &str = "coefficients.jsonl";

#[derive(Parser)]
#[command(name = "moonshine", version, about = "Mathieu moonshine coefficients, decompositions and filtrations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// `m24`, `a5`, or a path to a table file. Subgroup tables with a fusion
    /// map read their coefficients from M24.
    #[arg(long, global = true, default_value = "m24")]
    group: String,
    /// Cache directory; the cache file inside it is `coefficients.jsonl`.
    #[arg(long, global = true, env = "MOONSHINE_CACHE_DIR")]
    cache: Option<PathBuf>,
    /// Keep coefficients in memory only.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Working precision in decimal digits (at least 30).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Largest accepted distance of a series value from its integer.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// First cutoff, in units of the class level.
    #[arg(long, global = true)]
    c_max_initial: Option<u64>,
    /// Last cutoff, in units of the class level.
    #[arg(long, global = true)]
    c_max_limit: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for coefficient evaluation.
    #[arg(long, global = true, default_value_t = default_jobs())]
    jobs: usize,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Subcommand)]
enum Command {
    /// Checks a character table: structure, exact row and column
    /// orthogonality, dimensions, and the fusion map if present.
    ///
    /// CSV columns: check, status, detail.
    Validate {
        /// Table file; defaults to the `--group` table.
        path: Option<PathBuf>,
    },
    /// Coefficients c_g(n) with their provenance.
    ///
    /// CSV columns: class, n, value, residual, c_max_used, dedekind_mode, raw_sum.
    Coeff {
        /// Comma-separated classes; all classes when absent.
        #[arg(long)]
        class: Option<String>,
        /// Grades: `5`, `1,3,7`, `1..50`.
        #[arg(long, allow_hyphen_values = true)]
        n: String,
    },
    /// Multiplicities m_i(n) of the irreducibles in each graded piece.
    ///
    /// CSV columns: n, irrep, dim, m; with --ratios also ratio (m_i/Σm),
    /// limit_ratio (dim_i/Σdim), deviation and max_deviation over i.
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        #[arg(long)]
        ratios: bool,
    },
    /// Filtration chain of a graded piece (exact mode, --n) or of a residue
    /// class (asymptotic mode, --residue with optional --modulus).
    ///
    /// CSV columns: n (or residue), level, level_order, r, J, J_order, direction.
    Filtrate {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "residue")]
        n: Option<String>,
        #[arg(long, required_unless_present = "n")]
        residue: Option<i64>,
        /// Defaults to the lcm of the measured sign periods.
        #[arg(long, requires = "residue")]
        modulus: Option<u64>,
        /// Grades used to measure the sign periods.
        #[arg(long, default_value = "1..90")]
        window: String,
    },
    /// Observed against predicted growth.
    ///
    /// --free CSV columns: n, total, max_deviation.
    /// --nonfree CSV columns: n, irrep, observed, predicted, ratio.
    Asympt {
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        #[arg(long, conflicts_with = "nonfree", required_unless_present = "nonfree")]
        free: bool,
        #[arg(long)]
        nonfree: bool,
    },
    /// Inspects or clears the coefficient cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Clone, Copy)]
enum CacheAction {
    /// CSV columns: path, entries, truncated_bytes.
    Info,
    Clear,
}

struct Session {
    table: CharacterTable,
    provider: Arc<dyn CoefficientProvider>,
    /// The M24 engine behind `provider`, for provenance records.
    engine: Arc<RademacherProvider>,
    /// Subgroup class → M24 class.
    fusion: Option<Vec<(String, String)>>,
}

impl Global {
    fn table(&self) -> Result<CharacterTable> {
        Ok(match self.group.to_ascii_lowercase().as_str() {
            "m24" => chartab::m24().clone(),
            "a5" => chartab::a5().clone(),
            _ => CharacterTable::load(&self.group).with_context(|| format!("loading table {}", self.group))?,
        })
    }

    fn cache(&self) -> Result<Arc<CoefficientCache>> {
        if self.no_cache {
            return Ok(Arc::new(CoefficientCache::in_memory()));
        }
        let dir = match &self.cache {
            Some(d) => d.clone(),
            None => default_cache_dir(),
        };
        std::fs::create_dir_all(&dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        let file = dir.join(CACHE_FILE);
        Ok(Arc::new(
            CoefficientCache::open(&file).with_context(|| format!("opening cache {}", file.display()))?,
        ))
    }

    fn policy(&self) -> TruncationPolicy {
        let mut p = TruncationPolicy::default();
        if let Some(v) = self.tol {
            p.residual_tolerance = v;
        }
        if let Some(v) = self.c_max_initial {
            p.c_max_initial = v;
        }
        if let Some(v) = self.c_max_limit {
            p.c_max_limit = v;
        }
        p
    }

    fn precision(&self) -> Result<PrecisionContext> {
        Ok(match self.precision {
            Some(d) => PrecisionContext::new(d)?,
            None => PrecisionContext::default(),
        })
    }

    fn context(&self) -> Result<Session> {
        let table = self.table()?;
        let m24 = chartab::m24();
        let cache = self.cache()?;
        let engine = Arc::new(RademacherProvider::new(m24, self.policy(), self.precision()?, cache.clone())?);
        if table.is_subgroup_table() {
            check_fusion(&table, m24)?;
            let fused = fuse_subgroup(&table, engine.clone())?;
            let fusion = table
                .classes
                .iter()
                .map(|c| (c.name.clone(), fused.ambient_class(&c.name).unwrap_or_default().to_string()))
                .collect();
            return Ok(Session {
                table,
                provider: Arc::new(fused),
                engine,
                fusion: Some(fusion),
            });
        }
        let provider: Arc<dyn CoefficientProvider> = if table.group_name == m24.group_name {
            engine.clone()
        } else {
            Arc::new(RademacherProvider::new(&table, self.policy(), self.precision()?, cache)?)
        };
        Ok(Session {
            table,
            provider,
            engine,
            fusion: None,
        })
    }
}

fn default_cache_dir() -> PathBuf {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache")))
        .unwrap_or_else(|| PathBuf::from("."));
    base.join("moonshine")
}

impl Session {
    fn class_names(&self) -> Vec<String> {
        self.table.classes.iter().map(|c| c.name.clone()).collect()
    }

    fn prefetch(&self, grades: &[i64], jobs: usize) -> Result<()> {
        let positive: Vec<i64> = grades.iter().copied().filter(|&n| n >= 1).collect();
        self.provider.prefetch(&self.class_names(), &positive, jobs)?;
        Ok(())
    }

    fn record(&self, class: &str, n: i64) -> Result<CoefficientRecord> {
        let target = match &self.fusion {
            Some(map) => map
                .iter()
                .find(|(c, _)| c == class)
                .map(|(_, t)| t.as_str())
                .ok_or_else(|| anyhow!("{} has no class {class}", self.table.group_name))?,
            None => class,
        };
        let mut r = if self.fusion.is_some() || self.table.group_name == "M24" {
            self.engine.record(target, n)?
        } else {
            let v = self.provider.coefficient(class, n)?;
            CoefficientRecord {
                class_name: class.to_string(),
                n,
                value: v.value,
                residual: v.residual,
                c_max_used: 0,
                dedekind_mode_used: self.engine.gate().conventions.mode,
                raw_sum: String::new(),
            }
        };
        r.class_name = class.to_string();
        Ok(r)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// `Ok(false)` when the output was written but a gate failed.
fn run(cli: &Cli) -> Result<bool> {
    let g = &cli.global;
    match &cli.command {
        Command::Validate { path } => validate(g, path.as_deref()),
        Command::Coeff { class, n } => coeff(g, class.as_deref(), &grades::parse(n)?),
        Command::Decompose { n, ratios } => decompose(g, &grades::parse(n)?, *ratios),
        Command::Filtrate {
            n,
            residue,
            modulus,
            window,
        } => match n {
            Some(n) => filtrate_exact(g, &grades::parse(n)?),
            None => filtrate_residue(g, residue.expect("clap requires one"), *modulus, &grades::parse(window)?),
        },
        Command::Asympt { n, free, .. } => {
            let grades = grades::parse(n)?;
            if *free {
                asympt_free(g, &grades)
            } else {
                asympt_nonfree(g, &grades)
            }
        }
        Command::Cache { action } => cache(g, *action),
    }
}

fn validate(g: &Global, path: Option<&Path>) -> Result<bool> {
    let mut checks: Vec<(String, bool, String)> = Vec::new();
    let source = path.map(|p| p.display().to_string()).unwrap_or_else(|| g.group.clone());
    let table = match path {
        Some(p) => CharacterTable::load(p),
        None => g.table().map_err(|e| chartab::TableError::Structure(format!("{e:#}"))),
    };
    let mut summary = Map::new();
    match table {
        Err(e) => checks.push(("load".into(), false, e.to_string())),
        Ok(t) => {
            checks.push(("load".into(), true, format!("{} from {source}", t.group_name)));
            match t.validate() {
                Ok(r) => {
                    checks.push(("structure".into(), true, format!("{} classes, {} irreps", r.classes, r.irreps)));
                    checks.push(("dimension squares".into(), true, format!("sum = {}", r.group_order)));
                    checks.push(("row orthogonality".into(), true, format!("{} pairs exact", r.row_pairs_checked)));
                    checks.push((
                        "column orthogonality".into(),
                        true,
                        format!("{} pairs exact", r.column_pairs_checked),
                    ));
                    summary.insert("report".into(), serde_json::to_value(&r)?);
                }
                Err(e) => checks.push(("validation".into(), false, e.to_string())),
            }
            if t.is_subgroup_table() {
                match check_fusion(&t, chartab::m24()) {
                    Ok(()) => checks.push(("fusion".into(), true, "consistent with M24".into())),
                    Err(e) => checks.push(("fusion".into(), false, e.to_string())),
                }
            }
        }
    }
    let ok = checks.iter().all(|c| c.1);
    let mut out = sink(g.out.as_deref())?;
    match g.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|(c, pass, d)| vec![c.clone(), if *pass { "pass" } else { "fail" }.into(), d.clone()])
                .collect();
            write_csv(&mut out, &["check", "status", "detail"], &rows)?;
        }
        Format::Json => {
            let mut m = Map::new();
            m.insert("schema".into(), json!(JSON_SCHEMA));
            m.insert("source".into(), json!(source));
            m.insert("ok".into(), json!(ok));
            let list: Vec<Value> = checks
                .iter()
                .map(|(c, pass, d)| json!({"check": c, "pass": pass, "detail": d}))
                .collect();
            m.insert("checks".into(), Value::Array(list));
            m.extend(summary);
            write_json(&mut out, &Value::Object(m))?;
        }
    }
    Ok(ok)
}

fn coeff(g: &Global, classes: Option<&str>, grades: &[i64]) -> Result<bool> {
    let ctx = g.context()?;
    let classes: Vec<String> = match classes {
        Some(list) => list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => ctx.class_names(),
    };
    for c in &classes {
        if ctx.table.class_index(c).is_none() {
            bail!("{} has no class {c}", ctx.table.group_name);
        }
    }
    let positive: Vec<i64> = grades.iter().copied().filter(|&n| n >= 1).collect();
    ctx.provider.prefetch(&classes, &positive, g.jobs)?;
    let mut records = Vec::new();
    for class in &classes {
        for &n in grades {
            records.push(ctx.record(class, n).with_context(|| format!("class {class}, n = {n}"))?);
        }
    }
    let mut out = sink(g.out.as_deref())?;
    match g.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    vec![
                        r.class_name.clone(),
                        r.n.to_string(),
                        r.value.to_string(),
                        format!("{:e}", r.residual),
                        r.c_max_used.to_string(),
                        format!("{:?}", r.dedekind_mode_used),
                        r.raw_sum.clone(),
                    ]
                })
                .collect();
            write_csv(
                &mut out,
                &["class", "n", "value", "residual", "c_max_used", "dedekind_mode", "raw_sum"],
                &rows,
            )?;
        }
        Format::Json => {
            let v = json!({
                "schema": JSON_SCHEMA,
                "group": ctx.table.group_name,
                "records": records,
            });
            write_json(&mut out, &v)?;
        }
    }
    Ok(true)
}

fn decompose(g: &Global, grades: &[i64], ratios: bool) -> Result<bool> {
    let ctx = g.context()?;
    let t = &ctx.table;
    ctx.prefetch(grades, g.jobs)?;
    let mut ok = true;
    let mut vectors = Vec::new();
    for &n in grades {
        let coeffs = class_coefficients(t, ctx.provider.as_ref(), n)?;
        let mv = decomp::multiplicities(t, &coeffs, n, decomp::DEFAULT_TOLERANCE).with_context(|| format!("n = {n}"))?;
        if let Err(e) = check_reconstruction(&mv, t, &coeffs) {
            log::error!("{e}");
            ok = false;
        }
        vectors.push(mv);
    }
    let dims = t.dims();
    let mut out = sink(g.out.as_deref())?;
    match g.format {
        Format::Csv => {
            let mut header = vec!["n", "irrep", "dim", "m"];
            if ratios {
                header.extend(["ratio", "limit_ratio", "deviation", "max_deviation"]);
            }
            let mut rows = Vec::new();
            for mv in &vectors {
                let row = (ratios && mv.n >= 1).then(|| ratio_row(mv, t));
                for (i, irrep) in t.irreps.iter().enumerate() {
                    let mut r = vec![mv.n.to_string(), irrep.name.clone(), dims[i].to_string(), mv.m[i].to_string()];
                    if ratios {
                        match &row {
                            Some(row) => r.extend([
                                row.ratios[i].to_string(),
                                row.limits[i].to_string(),
                                (row.ratios[i] - row.limits[i]).abs().to_string(),
                                row.max_deviation.to_string(),
                            ]),
                            None => r.extend([String::new(), String::new(), String::new(), String::new()]),
                        }
                    }
                    rows.push(r);
                }
            }
            write_csv(&mut out, &header, &rows)?;
        }
        Format::Json => {
            let list: Vec<Value> = vectors
                .iter()
                .map(|mv| {
                    let mut m = Map::new();
                    m.insert("n".into(), json!(mv.n));
                    let mut mult = Map::new();
                    for (irrep, v) in t.irreps.iter().zip(&mv.m) {
                        mult.insert(irrep.name.clone(), json!(v.to_string()));
                    }
                    m.insert("m".into(), Value::Object(mult));
                    if ratios && mv.n >= 1 {
                        let row = ratio_row(mv, t);
                        m.insert("ratios".into(), json!(row.ratios));
                        m.insert("max_deviation".into(), json!(row.max_deviation));
                    }
                    Value::Object(m)
                })
                .collect();
            let v = json!({
                "schema": JSON_SCHEMA,
                "group": t.group_name,
                "irreps": t.irreps.iter().map(|r| r.name.clone()).collect::<Vec<_>>(),
                "grades": list,
            });
            write_json(&mut out, &v)?;
        }
    }
    Ok(ok)
}

fn chain_rows(label: &str, res: &moonshine_core::FiltrationResult) -> Vec<Vec<String>> {
    res.chain
        .iter()
        .map(|l| {
            let j: Vec<&str> = l.removed.iter().map(|&i| res.irreps[i].as_str()).collect();
            let dir: Vec<String> = l
                .support
                .iter()
                .map(|&i| match &l.direction {
                    Some(d) => format!("{}:{}", res.irreps[i], d[i]),
                    None => format!("{}:{}", res.irreps[i], l.normalized[i]),
                })
                .collect();
            vec![
                label.to_string(),
                l.level.to_string(),
                l.level_order.to_string(),
                l.r.map(|r| r.to_string()).unwrap_or_default(),
                j.join(" "),
                l.decided_at.map(|e| e.to_string()).unwrap_or_default(),
                dir.join(" "),
            ]
        })
        .collect()
}

const CHAIN_HEADER: [&str; 7] = ["n", "level", "level_order", "r", "J", "J_order", "direction"];

fn filtrate_exact(g: &Global, grades: &[i64]) -> Result<bool> {
    let ctx = g.context()?;
    if let Some(&n) = grades.iter().find(|&&n| n < 1) {
        bail!("filtration needs grades n >= 1, got {n}");
    }
    ctx.prefetch(grades, g.jobs)?;
    let mut results = Vec::new();
    let mut ok = true;
    for &n in grades {
        let (_, res) = filtration::filtrate_grade(&ctx.table, ctx.provider.as_ref(), n)
            .with_context(|| format!("n = {n}"))?;
        for v in &res.violations {
            log::error!("n = {n}: {v}");
            ok = false;
        }
        results.push(res);
    }
    let mut out = sink(g.out.as_deref())?;
    match g.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .zip(grades)
                .flat_map(|(r, n)| chain_rows(&n.to_string(), r))
                .collect();
            write_csv(&mut out, &CHAIN_HEADER, &rows)?;
        }
        Format::Json => {
            let v = if results.len() == 1 {
                results[0].to_json()
            } else {
                Value::Array(results.iter().map(|r| r.to_json()).collect())
            };
            write_json(&mut out, &v)?;
        }
    }
    Ok(ok)
}

fn filtrate_residue(g: &Global, residue: i64, modulus: Option<u64>, window: &[i64]) -> Result<bool> {
    let ctx = g.context()?;
    let lo = *window.iter().min().expect("parse gives at least one grade");
    let hi = *window.iter().max().expect("parse gives at least one grade");
    let profile = filtration::sign_profile(&ctx.table, ctx.provider.as_ref(), (lo, hi), g.jobs)?;
    let modulus = modulus.unwrap_or(profile.modulus);
    let aperiodic = profile.aperiodic();
    if !aperiodic.is_empty() {
        log::warn!("no sign period over [{lo}, {hi}] for {}", aperiodic.join(", "));
    }
    let (res, ok) = match filtration::filtrate_asymptotic(&ctx.table, &profile, residue, modulus) {
        Ok(r) => (r, true),
        Err(FiltrationError::AperiodicClass {
            class,
            partial: Some(partial),
        }) => {
            eprintln!("error: class {class} has no sign period over [{lo}, {hi}]; the chain stops there");
            (*partial, false)
        }
        Err(e) => return Err(e.into()),
    };
    let mut out = sink(g.out.as_deref())?;
    match g.format {
        Format::Csv => write_csv(&mut out, &CHAIN_HEADER, &chain_rows(&residue.to_string(), &res))?,
        Format::Json => write_json(&mut out, &res.to_json())?,
    }
    Ok(ok && res.violations.is_empty())
}

fn asympt_free(g: &Global, grades: &[i64]) -> Result<bool> {
    let ctx = g.context()?;
    if let Some(&n) = grades.iter().find(|&&n| n < 1) {
        bail!("growth checks need grades n >= 1, got {n}");
    }
    let rows = decomp::ratio_profile(&ctx.table, ctx.provider.as_ref(), grades, g.jobs)?;
    let vectors = decomp::decompose_grades(&ctx.table, ctx.provider.as_ref(), grades, g.jobs)?;
    let mut out = sink(g.out.as_deref())?;
    match g.format {
        Format::Csv => {
            let csv_rows: Vec<Vec<String>> = rows
                .iter()
                .zip(&vectors)
                .map(|(r, mv)| {
                    vec![
                        r.n.to_string(),
                        mv.m.iter().sum::<i128>().to_string(),
                        r.max_deviation.to_string(),
                    ]
                })
                .collect();
            write_csv(&mut out, &["n", "total", "max_deviation"], &csv_rows)?;
        }
        Format::Json => {
            let v = json!({
                "schema": JSON_SCHEMA,
                "group": ctx.table.group_name,
                "rows": rows,
            });
            write_json(&mut out, &v)?;
        }
    }
    Ok(true)
}

fn asympt_nonfree(g: &Global, grades: &[i64]) -> Result<bool> {
    let ctx = g.context()?;
    let t = &ctx.table;
    if let Some(&n) = grades.iter().find(|&&n| n < 1) {
        bail!("growth checks need grades n >= 1, got {n}");
    }
    ctx.prefetch(grades, g.jobs)?;
    let is_m24 = t.group_name == "M24";
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    let mut json_rows = Vec::new();
    for &n in grades {
        let coeffs = class_coefficients(t, ctx.provider.as_ref(), n)?;
        let mv = decomp::multiplicities(t, &coeffs, n, decomp::DEFAULT_TOLERANCE)?;
        let (_, nonfree) = decomp::free_part_split(&mv, t);
        let values: Vec<i128> = coeffs.iter().map(|c| c.value).collect();
        let pred = nonfree_asymptotic(t, &exact_signs(&values), n)?;
        let mut per = Map::new();
        for (i, irrep) in t.irreps.iter().enumerate() {
            let obs = nonfree.m[i];
            let p = pred.predicted[i];
            let ratio = if p != 0.0 { Some(obs as f64 / p) } else { None };
            rows.push(vec![
                n.to_string(),
                irrep.name.clone(),
                obs.to_string(),
                p.to_string(),
                ratio.map(|r| r.to_string()).unwrap_or_default(),
            ]);
            per.insert(
                irrep.name.clone(),
                json!({"observed": obs.to_string(), "predicted": p, "ratio": ratio}),
            );
        }
        json_rows.push(json!({"n": n, "j_prime": t.irreps[pred.j_prime].name, "irreps": per}));
        if is_m24 {
            let obs: Vec<f64> = nonfree.m.iter().map(|&m| m as f64).collect();
            samples.push((obs, m24_corollary_shape(t, n, 1.0)?));
        }
    }
    let fitted = if is_m24 { fit_constant(&samples) } else { None };
    if let Some(k) = fitted {
        log::info!("fitted constant of the M24 closed form: {k}");
    }
    let mut out = sink(g.out.as_deref())?;
    match g.format {
        Format::Csv => write_csv(&mut out, &["n", "irrep", "observed", "predicted", "ratio"], &rows)?,
        Format::Json => {
            let v = json!({
                "schema": JSON_SCHEMA,
                "group": t.group_name,
                "fitted_constant": fitted,
                "grades": json_rows,
            });
            write_json(&mut out, &v)?;
        }
    }
    Ok(true)
}

fn cache(g: &Global, action: CacheAction) -> Result<bool> {
    let cache = g.cache()?;
    if let CacheAction::Clear = action {
        cache.clear()?;
    }
    let stats = cache.stats();
    let path = cache.path().map(|p| p.display().to_string()).unwrap_or_default();
    let mut out = sink(g.out.as_deref())?;
    match g.format {
        Format::Csv => write_csv(
            &mut out,
            &["path", "entries", "truncated_bytes"],
            &[vec![path, stats.entries.to_string(), stats.truncated_bytes.to_string()]],
        )?,
        Format::Json => write_json(
            &mut out,
            &json!({
                "schema": JSON_SCHEMA,
                "path": path,
                "entries": stats.entries,
                "truncated_bytes": stats.truncated_bytes,
            }),
        )?,
    }
    Ok(true)
}
