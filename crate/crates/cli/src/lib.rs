//! Argument handling and dispatch for the `wishart-nc` binary.
//!
//! Every verb reads a [`RunConfig`]: flags given on the command line override
//! the fields of an optional `--config` JSON file. Exact verbs print rationals
//! as strings (`"3"`, `"7/2"`); `simulate` prints floats with a stderr column.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use wishart_nc::model::CumulantSpec;
use wishart_nc::moments::{cross_validate, limit_moment_enumerative, limit_moment_pair, WeightedCount};
use wishart_nc::partition::PairPartition;
use wishart_nc::rational::{parse_rational_list, Rational};
use wishart_nc::rmt::{convergence_report, empirical_wishart_moments, EnsembleSpec, Normalization, SpectralLaw, DEFAULT_REL_TOL};
use wishart_nc::series::solve::{dependent_moments, solve_psi_independent, t_coefficients};
use wishart_nc::series::verify::{run_suite, Suite};
use wishart_nc::words::{enumerate_pair_adapted, enumerate_pairings_of_w, make_w};
use wishart_nc::{cap_from_env, CumulantSequence, Label, LabelPattern, ModelParams, Partition};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "wishart-nc", version, about = "Limit moments of products of random-matrix blocks")]
pub struct Cli {
    /// JSON file with default values for any flag (keys use snake_case).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Largest word length to enumerate (default from WISHART_NC_CAP, else 24).
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Verb {
    /// List or count the partitions adapted to W^k.
    Enumerate(ModelArgs),
    /// Exact limit moment m_k.
    Moment(ModelArgs),
    /// Moment series from the functional equations.
    Series(ModelArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Monte Carlo estimate of the moments.
    Simulate(SimArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct ModelArgs {
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Moments k = 1..=kmax instead of a single k.
    #[arg(long)]
    pub kmax: Option<usize>,
    /// `same`, `distinct` or a comma-separated label list.
    #[arg(long)]
    pub labels: Option<String>,
    /// Free cumulants: `semicircle`, `free-poisson`, `mp:t` or `list:r1,r2,...`.
    /// Give once for every block or once per block.
    #[arg(long)]
    pub law: Vec<String>,
    /// Asymptotic dimensions d_1..d_{p+1}, comma-separated rationals.
    #[arg(long)]
    pub dims: Option<String>,
    /// Print only the number of partitions.
    #[arg(long)]
    pub count: bool,
    /// Enumerate pair partitions instead: `w` for NC²(W^k), `doubled` for NC²(W̃^k).
    #[arg(long)]
    pub pairs: Option<PairTarget>,
    /// Route for `moment`: enumerative, pair or all.
    #[arg(long)]
    pub route: Option<Route>,
    /// Series order.
    #[arg(long)]
    pub order: Option<usize>,
    /// Series for independent blocks or two dependent blocks of one matrix.
    #[arg(long)]
    pub mode: Option<SeriesMode>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct VerifyArgs {
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long)]
    pub kmax: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SimArgs {
    /// Block sizes n_1..n_{p+1}.
    #[arg(long)]
    pub blocks: Option<String>,
    #[arg(long)]
    pub labels: Option<String>,
    /// Spectral law: `semicircle`, `mp:t`, `mp-invariant:t` or `list:x1,x2,...`.
    /// Give once for every block or once per block.
    #[arg(long)]
    pub law: Vec<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub kmax: Option<usize>,
    /// `total` or `first-block`.
    #[arg(long)]
    pub normalization: Option<String>,
    /// Compare with the exact limit and fail outside max(4 stderr, rel_tol |m_k|).
    #[arg(long)]
    pub check: bool,
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairTarget {
    W,
    Doubled,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Enumerative,
    Pair,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesMode {
    Independent,
    Dependent,
}

/// Merged settings of one run. Every field is optional until validation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub verb: Option<String>,
    pub format: Option<Format>,
    pub cap: Option<usize>,
    pub p: Option<usize>,
    pub k: Option<usize>,
    pub kmax: Option<usize>,
    pub labels: Option<String>,
    pub law: Vec<String>,
    pub dims: Option<String>,
    pub count: bool,
    pub pairs: Option<PairTarget>,
    pub route: Option<Route>,
    pub order: Option<usize>,
    pub mode: Option<SeriesMode>,
    pub suite: Option<String>,
    pub blocks: Option<String>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub normalization: Option<String>,
    pub check: bool,
    pub rel_tol: Option<f64>,
}

/// Error with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: msg.into() }
}

impl From<wishart_nc::error::Error> for Failure {
    fn from(e: wishart_nc::error::Error) -> Self {
        usage(e.to_string())
    }
}

/// Output of a verb: a JSON document, rows for CSV and a text rendering.
pub struct Output {
    pub json: Value,
    pub csv: Vec<Vec<String>>,
    pub text: String,
    pub code: u8,
}

impl Cli {
    /// Flags folded into a [`RunConfig`], without the config file.
    pub fn to_config(&self) -> RunConfig {
        let mut c = RunConfig { format: self.format, cap: self.cap, ..Default::default() };
        match &self.verb {
            Verb::Enumerate(m) | Verb::Moment(m) | Verb::Series(m) => {
                c.verb = Some(
                    match self.verb {
                        Verb::Enumerate(_) => "enumerate",
                        Verb::Moment(_) => "moment",
                        _ => "series",
                    }
                    .into(),
                );
                c.p = m.p;
                c.k = m.k;
                c.kmax = m.kmax;
                c.labels = m.labels.clone();
                c.law = m.law.clone();
                c.dims = m.dims.clone();
                c.count = m.count;
                c.pairs = m.pairs;
                c.route = m.route;
                c.order = m.order;
                c.mode = m.mode;
            }
            Verb::Verify(v) => {
                c.verb = Some("verify".into());
                c.suite = v.suite.clone();
                c.kmax = v.kmax;
            }
            Verb::Simulate(s) => {
                c.verb = Some("simulate".into());
                c.blocks = s.blocks.clone();
                c.labels = s.labels.clone();
                c.law = s.law.clone();
                c.trials = s.trials;
                c.seed = s.seed;
                c.kmax = s.kmax;
                c.normalization = s.normalization.clone();
                c.check = s.check;
                c.rel_tol = s.rel_tol;
            }
        }
        c
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, Failure> {
        serde_json::from_str(text).map_err(|e| usage(format!("config: {e}")))
    }

    /// Fields set in `self` win over `base`.
    pub fn merged_over(self, base: RunConfig) -> RunConfig {
        RunConfig {
            verb: self.verb.or(base.verb),
            format: self.format.or(base.format),
            cap: self.cap.or(base.cap),
            p: self.p.or(base.p),
            k: self.k.or(base.k),
            kmax: self.kmax.or(base.kmax),
            labels: self.labels.or(base.labels),
            law: if self.law.is_empty() { base.law } else { self.law },
            dims: self.dims.or(base.dims),
            count: self.count || base.count,
            pairs: self.pairs.or(base.pairs),
            route: self.route.or(base.route),
            order: self.order.or(base.order),
            mode: self.mode.or(base.mode),
            suite: self.suite.or(base.suite),
            blocks: self.blocks.or(base.blocks),
            trials: self.trials.or(base.trials),
            seed: self.seed.or(base.seed),
            normalization: self.normalization.or(base.normalization),
            check: self.check || base.check,
            rel_tol: self.rel_tol.or(base.rel_tol),
        }
    }

    fn cap(&self) -> usize {
        self.cap.unwrap_or_else(cap_from_env)
    }

    fn need<T: Clone>(v: &Option<T>, field: &str) -> Result<T, Failure> {
        v.clone().ok_or_else(|| usage(format!("{field}: missing (pass --{} or set it in the config file)", field.replace('_', "-"))))
    }

    fn pattern(&self) -> Result<LabelPattern, Failure> {
        let s = self.labels.as_deref().unwrap_or("distinct");
        s.parse().map_err(|e| usage(format!("labels: {e}")))
    }

    /// Moment indices requested by `k` or `kmax`.
    fn ks(&self) -> Result<Vec<usize>, Failure> {
        match (self.k, self.kmax) {
            (Some(_), Some(_)) => Err(usage("k: give either --k or --kmax, not both")),
            (Some(0), _) | (_, Some(0)) => Err(usage("k: moments start at k = 1")),
            (Some(k), None) => Ok(vec![k]),
            (None, Some(m)) => Ok((1..=m).collect()),
            (None, None) => Err(usage("k: missing (pass --k or --kmax)")),
        }
    }

    fn model(&self, cumulant_len: usize) -> Result<ModelParams, Failure> {
        let p = Self::need(&self.p, "p")?;
        if p == 0 {
            return Err(usage("p: must be at least 1"));
        }
        let dims = match &self.dims {
            Some(s) => parse_rational_list(s).map_err(|e| usage(format!("dims: {e}")))?,
            None => vec![Rational::from_integer(1.into()); p + 1],
        };
        let laws: Vec<CumulantSpec> = if self.law.is_empty() {
            vec![CumulantSpec::Semicircle]
        } else {
            self.law
                .iter()
                .map(|s| s.parse().map_err(|e| usage(format!("law: {e}"))))
                .collect::<Result<_, _>>()?
        };
        let seqs: Vec<CumulantSequence> = match laws.len() {
            1 => vec![laws[0].sequence(cumulant_len); p],
            n if n == p => laws.iter().map(|l| l.sequence(cumulant_len)).collect(),
            n => return Err(usage(format!("law: expected 1 or {p} laws, found {n}"))),
        };
        Ok(ModelParams::per_block(p, dims, &self.pattern()?, seqs)?)
    }

    fn ensemble(&self) -> Result<EnsembleSpec, Failure> {
        let blocks_s = Self::need(&self.blocks, "blocks")?;
        let block_sizes = blocks_s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| usage(format!("blocks: `{t}` is not a size"))))
            .collect::<Result<Vec<_>, _>>()?;
        if block_sizes.len() < 2 {
            return Err(usage("blocks: need at least two block sizes"));
        }
        let p = block_sizes.len() - 1;
        let labels = self.pattern()?.labels(p)?;
        let laws: Vec<SpectralLaw> = if self.law.is_empty() {
            vec![SpectralLaw::Semicircle]
        } else {
            self.law
                .iter()
                .map(|s| s.parse().map_err(|e| usage(format!("law: {e}"))))
                .collect::<Result<_, _>>()?
        };
        let mut map: BTreeMap<Label, SpectralLaw> = BTreeMap::new();
        for (j, l) in labels.iter().enumerate() {
            let law = match laws.len() {
                1 => laws[0].clone(),
                n if n == p => laws[j].clone(),
                n => return Err(usage(format!("law: expected 1 or {p} laws, found {n}"))),
            };
            if map.get(l).is_some_and(|prev| *prev != law) {
                return Err(usage(format!("law: label {l} is given two different laws")));
            }
            map.insert(l.clone(), law);
        }
        let normalization = match &self.normalization {
            Some(s) => s.parse::<Normalization>().map_err(|e| usage(format!("normalization: {e}")))?,
            None => Normalization::Total,
        };
        let spec = EnsembleSpec {
            block_sizes,
            labels,
            laws: map,
            trials: self.trials.unwrap_or(100),
            seed: self.seed.unwrap_or(0),
            normalization,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn s(q: &Rational) -> String {
    q.to_string()
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(s).collect()
}

fn monomials_json(w: &WeightedCount) -> Value {
    Value::Array(
        w.terms
            .iter()
            .map(|(e, c)| json!({ "exponents": e, "coefficient": s(c) }))
            .collect(),
    )
}

fn enumerate(cfg: &RunConfig) -> Result<Output, Failure> {
    let p = RunConfig::need(&cfg.p, "p")?;
    let k = RunConfig::need(&cfg.k, "k")?;
    if p == 0 || k == 0 {
        return Err(usage("p, k: must be at least 1"));
    }
    let labels = cfg.pattern()?.labels(p)?;
    let cap = cfg.cap();
    let (word, items): (String, Option<Vec<String>>);
    let count: u64;
    match cfg.pairs {
        None => {
            let w = make_w(p, &labels)?.power(k);
            word = w.to_string();
            if cfg.count {
                count = w.count_adapted(cap)?;
                items = None;
            } else {
                let all: Vec<Partition> = w.enumerate_adapted(cap)?;
                count = all.len() as u64;
                items = Some(all.iter().map(ToString::to_string).collect());
            }
        }
        Some(target) => {
            let all: Vec<PairPartition> = match target {
                PairTarget::W => {
                    word = make_w(p, &labels)?.power(k).to_string();
                    enumerate_pairings_of_w(p, k, &labels, cap)?
                }
                PairTarget::Doubled => {
                    word = wishart_nc::words::make_wtilde(p, &labels)?.power(k).to_string();
                    enumerate_pair_adapted(p, k, &labels, cap)?
                }
            };
            count = all.len() as u64;
            items = if cfg.count { None } else { Some(all.iter().map(ToString::to_string).collect()) };
        }
    }
    let mut json = json!({ "p": p, "k": k, "word": word, "count": count });
    let mut csv = vec![vec!["index".to_string(), "partition".to_string()]];
    let mut text = String::new();
    match &items {
        Some(list) => {
            json["partitions"] = json!(list);
            for (i, it) in list.iter().enumerate() {
                csv.push(vec![(i + 1).to_string(), it.clone()]);
                text.push_str(it);
                text.push('\n');
            }
        }
        None => {
            csv = vec![vec!["count".into()], vec![count.to_string()]];
            text = format!("{count}\n");
        }
    }
    Ok(Output { json, csv, text, code: EXIT_OK })
}

fn moment(cfg: &RunConfig) -> Result<Output, Failure> {
    let ks = cfg.ks()?;
    let k_top = *ks.last().unwrap();
    let params = cfg.model(2 * cfg.p.unwrap_or(1) * k_top + 2)?;
    let cap = cfg.cap();
    let route = cfg.route.unwrap_or(Route::Enumerative);
    let mut rows = Vec::new();
    let mut csv = vec![vec!["k".to_string(), "route".into(), "moment".into()]];
    let mut text = String::new();
    let mut code = EXIT_OK;
    if route == Route::All {
        let cv = cross_validate(k_top, &params, cap)?;
        for row in cv.rows.iter().filter(|r| ks.contains(&r.k)) {
            let mut obj = json!({
                "k": row.k,
                "moment": s(&row.enumerative),
                "enumerative": s(&row.enumerative),
                "pair": s(&row.pair),
                "agree": row.agree(),
            });
            if let Some(c) = &row.closed_form {
                obj["closed_form"] = json!(s(c));
            }
            if let Some(c) = &row.series {
                obj["series"] = json!(s(c));
            }
            for (name, v) in [("enumerative", Some(&row.enumerative)), ("pair", Some(&row.pair)), ("closed_form", row.closed_form.as_ref()), ("series", row.series.as_ref())] {
                if let Some(v) = v {
                    csv.push(vec![row.k.to_string(), name.into(), s(v)]);
                }
            }
            text.push_str(&format!("m_{} = {}{}\n", row.k, row.enumerative, if row.agree() { "" } else { "  (routes disagree)" }));
            rows.push(obj);
        }
        if !cv.passed() {
            code = EXIT_VERIFY_FAILED;
        }
    } else {
        for &k in &ks {
            let res = match route {
                Route::Pair => limit_moment_pair(k, &params, cap)?,
                _ => limit_moment_enumerative(k, &params, cap)?,
            };
            let name = if route == Route::Pair { "pair" } else { "enumerative" };
            csv.push(vec![k.to_string(), name.into(), s(&res.moment)]);
            text.push_str(&format!("m_{k} = {}\n", res.moment));
            rows.push(json!({
                "k": k,
                "moment": s(&res.moment),
                "partitions": res.partitions,
                "monomials": monomials_json(&res.monomials),
            }));
        }
    }
    let json = if rows.len() == 1 { rows.pop().unwrap() } else { json!({ "rows": rows }) };
    Ok(Output { json, csv, text, code })
}

fn series(cfg: &RunConfig) -> Result<Output, Failure> {
    let order = cfg.order.or(cfg.kmax).unwrap_or(8);
    if order == 0 {
        return Err(usage("order: must be at least 1"));
    }
    let mode = cfg.mode.unwrap_or(SeriesMode::Independent);
    let mut json = json!({ "order": order });
    let moments: Vec<Rational>;
    match mode {
        SeriesMode::Independent => {
            let params = cfg.model(2 * order + 2)?;
            let psi = solve_psi_independent(&params, order)?;
            moments = psi.coeffs()[1..].to_vec();
            json["mode"] = json!("independent");
            json["t_coefficients"] = json!(strings(&t_coefficients(&params, order.saturating_sub(1))?));
        }
        SeriesMode::Dependent => {
            let law: CumulantSpec = match cfg.law.as_slice() {
                [] => CumulantSpec::Semicircle,
                [one] => one.parse().map_err(|e| usage(format!("law: {e}")))?,
                _ => return Err(usage("law: the dependent mode takes a single law")),
            };
            moments = dependent_moments(&law.sequence(4 * order), order)?;
            json["mode"] = json!("dependent");
        }
    }
    json["moments"] = json!(strings(&moments));
    let mut csv = vec![vec!["k".to_string(), "moment".into()]];
    let mut text = String::new();
    for (i, m) in moments.iter().enumerate() {
        csv.push(vec![(i + 1).to_string(), s(m)]);
        text.push_str(&format!("m_{} = {m}\n", i + 1));
    }
    Ok(Output { json, csv, text, code: EXIT_OK })
}

fn verify(cfg: &RunConfig) -> Result<Output, Failure> {
    let suite: Suite = cfg.suite.as_deref().unwrap_or("all").parse().map_err(|e| usage(format!("suite: {e}")))?;
    let k_max = cfg.kmax.unwrap_or(3);
    let reports = run_suite(suite, k_max, cfg.cap())?;
    let passed = reports.iter().all(|r| r.passed());
    let mut csv = vec![vec!["report".to_string(), "check".into(), "passed".into(), "detail".into()]];
    let mut text = String::new();
    let mut items = Vec::new();
    for r in &reports {
        text.push_str(&r.to_string());
        let checks: Vec<Value> = r
            .checks
            .iter()
            .map(|c| {
                csv.push(vec![r.name.clone(), c.name.clone(), c.passed.to_string(), c.detail.clone()]);
                json!({ "name": c.name, "passed": c.passed, "detail": c.detail })
            })
            .collect();
        items.push(json!({ "name": r.name, "passed": r.passed(), "checks": checks }));
    }
    text.push_str(if passed { "all checks passed\n" } else { "verification FAILED\n" });
    Ok(Output {
        json: json!({ "suite": format!("{suite:?}").to_lowercase(), "passed": passed, "reports": items }),
        csv,
        text,
        code: if passed { EXIT_OK } else { EXIT_VERIFY_FAILED },
    })
}

fn simulate(cfg: &RunConfig) -> Result<Output, Failure> {
    let spec = cfg.ensemble()?;
    let k_max = cfg.kmax.unwrap_or(3);
    if k_max == 0 {
        return Err(usage("kmax: must be at least 1"));
    }
    let mut csv = vec![vec!["k".to_string(), "estimate".into(), "stderr".into(), "trials".into()]];
    let mut text = String::new();
    let mut code = EXIT_OK;
    let rows: Vec<Value> = if cfg.check {
        let params = spec.model_params(2 * spec.p() * k_max + 2)?;
        let rep = convergence_report(&spec, &params, k_max, cfg.rel_tol.unwrap_or(DEFAULT_REL_TOL), cfg.cap())?;
        if !rep.passed() {
            code = EXIT_VERIFY_FAILED;
        }
        csv[0].extend(["exact".to_string(), "tolerance".into(), "pass".into()]);
        rep.rows
            .iter()
            .map(|r| {
                csv.push(vec![
                    r.k.to_string(),
                    format!("{:.6}", r.estimate),
                    format!("{:.6}", r.stderr),
                    spec.trials.to_string(),
                    s(&r.exact),
                    format!("{:.6}", r.tolerance),
                    r.pass.to_string(),
                ]);
                text.push_str(&format!(
                    "m_{} = {:.6} ± {:.6}  exact {}  {}\n",
                    r.k,
                    r.estimate,
                    r.stderr,
                    r.exact,
                    if r.pass { "ok" } else { "FAIL" }
                ));
                json!({
                    "k": r.k, "estimate": r.estimate, "stderr": r.stderr, "trials": spec.trials,
                    "exact": s(&r.exact), "tolerance": r.tolerance, "pass": r.pass,
                })
            })
            .collect()
    } else {
        let res = empirical_wishart_moments(&spec, k_max)?;
        res.rows
            .iter()
            .map(|r| {
                csv.push(vec![r.k.to_string(), format!("{:.6}", r.estimate), format!("{:.6}", r.stderr), r.trials.to_string()]);
                text.push_str(&format!("m_{} = {:.6} ± {:.6}\n", r.k, r.estimate, r.stderr));
                json!({ "k": r.k, "estimate": r.estimate, "stderr": r.stderr, "trials": r.trials })
            })
            .collect()
    };
    let json = json!({
        "block_sizes": spec.block_sizes,
        "labels": spec.labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "laws": spec.laws.iter().map(|(l, v)| (l.to_string(), v.to_string())).collect::<BTreeMap<_, _>>(),
        "normalization": format!("{:?}", spec.normalization),
        "seed": spec.seed,
        "rows": rows,
    });
    Ok(Output { json, csv, text, code })
}

/// Validates `cfg` and dispatches on its verb.
pub fn run(cfg: &RunConfig) -> Result<Output, Failure> {
    match cfg.verb.as_deref() {
        Some("enumerate") => enumerate(cfg),
        Some("moment") => moment(cfg),
        Some("series") => series(cfg),
        Some("verify") => verify(cfg),
        Some("simulate") => simulate(cfg),
        Some(v) => Err(usage(format!("verb: unknown verb `{v}`"))),
        None => Err(usage("verb: missing")),
    }
}

pub fn render(out: &Output, format: Format, w: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &out.json)?;
            writeln!(w)
        }
        Format::Text => w.write_all(out.text.as_bytes()),
        Format::Csv => {
            let mut wr = csv::Writer::from_writer(w);
            for row in &out.csv {
                wr.write_record(row)?;
            }
            wr.flush()
        }
    }
}

/// Loads the config file, merges flags over it, runs and prints; returns the exit status.
pub fn run_cli(cli: Cli, w: &mut dyn Write) -> u8 {
    let flags = cli.to_config();
    let cfg = match &cli.config {
        Some(path) => match fs::read_to_string(path) {
            Ok(text) => match RunConfig::from_json(&text) {
                Ok(base) => {
                    if base.verb.as_ref().is_some_and(|v| Some(v) != flags.verb.as_ref()) {
                        eprintln!("error: config: verb `{}` does not match the command line", base.verb.unwrap());
                        return EXIT_USAGE;
                    }
                    flags.merged_over(base)
                }
                Err(f) => {
                    eprintln!("error: {}", f.message);
                    return f.code;
                }
            },
            Err(e) => {
                eprintln!("error: config: cannot read {}: {e}", path.display());
                return EXIT_USAGE;
            }
        },
        None => flags,
    };
    match run(&cfg) {
        Ok(out) => {
            if let Err(e) = render(&out, cfg.format.unwrap_or(Format::Json), w) {
                eprintln!("error: cannot write output: {e}");
                return EXIT_USAGE;
            }
            out.code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
