//! Per-command parameter schemas and implementations.
//!
//! Each command has a clap argument struct (every field optional) and a
//! parameter struct with defaults. Flags are serialized, merged over the
//! config file's `params` object, and deserialized with unknown keys rejected.

use std::path::PathBuf;

use clap::Args;
use num_bigint::BigInt;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::{self, merge_params, parse_rep, positive, FileConfig, RunConfig};
use super::{write_outputs, Command, Output};
use crate::arithmetic::{self, HsSumMode, PrimeRange};
use crate::congruence::{self, CongruenceContext, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::schottky::{self, GroupSpec, SchottkyGroup, Word, DEFAULT_WORD_CAP};
use crate::transfer::{assemble, AssembleOptions, WordSet};
use crate::zeta::{self, fmt17, ZeroOptions};

/// Shared state handed to every command.
pub struct Context<'a> {
    pub file: &'a FileConfig,
    pub group: GroupSpec,
    pub out: PathBuf,
    pub workers: usize,
    pub command: &'a str,
}

type CmdResult = std::result::Result<(), (Error, Value)>;

pub fn dispatch(cmd: &Command, ctx: &Context<'_>) -> CmdResult {
    match cmd {
        Command::Validate => run::<_, ValidateParams>(ctx, &json!({}), validate),
        Command::Words(a) => run(ctx, a, words),
        Command::Partition(a) => run(ctx, a, partition),
        Command::Distortion(a) => run(ctx, a, distortion),
        Command::Zeta(a) => run(ctx, a, zeta_grid),
        Command::Zeros(a) => run(ctx, a, zeros),
        Command::Delta(a) => run(ctx, a, delta),
        Command::Np(a) => run(ctx, a, np),
        Command::TraceCheck(a) => run(ctx, a, trace_check),
        Command::Charsum(a) => run(ctx, a, charsum),
        Command::HsSum(a) => run(ctx, a, hs_sum),
        Command::Jensen(a) => run(ctx, a, jensen),
    }
}

fn run<A, P>(ctx: &Context<'_>, args: &A, f: fn(&SchottkyGroup, &P, &RunConfig<P>) -> Result<Output>) -> CmdResult
where
    A: Serialize,
    P: Serialize + DeserializeOwned,
{
    let flags = serde_json::to_value(args).map_err(|e| (Error::from(e), Value::Null))?;
    let params: P = merge_params(&ctx.file.params, flags.clone()).map_err(|e| (e, config::merged_value(&ctx.file.params, &flags)))?;
    let shown = serde_json::to_value(&params).unwrap_or(Value::Null);
    let cfg = RunConfig {
        command: ctx.command.to_string(),
        group: ctx.group.clone(),
        output_dir: ctx.out.clone(),
        workers: ctx.workers,
        params,
    };
    let attempt = || -> Result<()> {
        let g = config::validated(&cfg.group)?;
        let output = f(&g, &cfg.params, &cfg)?;
        write_outputs(&cfg, output)
    };
    attempt().map_err(|e| (e, shown))
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn opt17(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_default()
}

fn assemble_opts(n: usize) -> Result<AssembleOptions> {
    if n == 0 {
        return Err(Error::Config("n must be at least 1".into()));
    }
    Ok(AssembleOptions::with_n(n))
}

fn zero_opts(tol: f64, grid: usize, imag_tol: f64) -> Result<ZeroOptions> {
    if grid == 0 {
        return Err(Error::Config("grid must be at least 1".into()));
    }
    Ok(ZeroOptions { tol: positive("tol", tol)?, grid, imag_tol: positive("imag_tol", imag_tol)? })
}

fn resolve_delta(g: &SchottkyGroup, given: Option<f64>, opts: &AssembleOptions) -> Result<f64> {
    match given {
        Some(d) => positive("delta", d),
        None => Ok(zeta::delta(g, 1e-10, opts)?.value()),
    }
}

const DELTA_FRACTIONS: [f64; 3] = [0.6, 0.7, 0.8];

fn sigmas_or_default(sigma: &[f64], delta: f64) -> Vec<f64> {
    if sigma.is_empty() {
        DELTA_FRACTIONS.iter().map(|f| f * delta).collect()
    } else {
        sigma.to_vec()
    }
}

fn default_taus() -> Vec<f64> {
    (5..=14).map(|k| 2f64.powi(-k)).collect()
}

// ---------------------------------------------------------------- validate

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateParams {}

fn validate(g: &SchottkyGroup, _: &ValidateParams, _: &RunConfig<ValidateParams>) -> Result<Output> {
    let result = json!({
        "valid": true,
        "m": g.m,
        "alphabet_size": g.alphabet_size(),
        "min_letter_diameter": g.min_letter_diameter(),
    });
    Ok(Output { result, csv: vec![] })
}

// ---------------------------------------------------------------- words

#[derive(Debug, Args, Serialize)]
pub struct WordsArgs {
    #[arg(long)]
    pub max_len: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WordsParams {
    pub max_len: usize,
}

impl Default for WordsParams {
    fn default() -> Self {
        WordsParams { max_len: 3 }
    }
}

fn words(g: &SchottkyGroup, p: &WordsParams, _: &RunConfig<WordsParams>) -> Result<Output> {
    let list = g.words_up_to(p.max_len);
    let rows = list
        .par_iter()
        .map(|w| -> Result<Vec<String>> {
            let m = g.word_matrix(w);
            let (left, right) = g.interval(w)?;
            Ok(vec![
                w.to_string(),
                w.len().to_string(),
                m.a.to_string(),
                m.b.to_string(),
                m.c.to_string(),
                m.d.to_string(),
                m.trace().to_string(),
                fmt17(m.norm()),
                fmt17(left),
                fmt17(right),
                fmt17(g.diameter(w)?),
                fmt17(g.upsilon(w)?),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let header = ["word", "length", "a", "b", "c", "d", "trace", "norm", "left", "right", "diameter", "upsilon"];
    let result = json!({ "count": list.len(), "csv": "words.csv" });
    Ok(Output { result, csv: vec![("words.csv".into(), csv_bytes(&header, rows)?)] })
}

// ---------------------------------------------------------------- partition

#[derive(Debug, Args, Serialize)]
pub struct PartitionArgs {
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub word_cap: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PartitionParams {
    pub tau: f64,
    pub word_cap: usize,
}

impl Default for PartitionParams {
    fn default() -> Self {
        PartitionParams { tau: 2f64.powi(-6), word_cap: DEFAULT_WORD_CAP }
    }
}

fn word_data_rows(list: &[schottky::WordData]) -> Vec<Vec<String>> {
    list.iter()
        .map(|d| vec![d.word.to_string(), fmt17(d.left), fmt17(d.right), fmt17(d.diameter), fmt17(d.upsilon)])
        .collect()
}

fn partition(g: &SchottkyGroup, p: &PartitionParams, _: &RunConfig<PartitionParams>) -> Result<Output> {
    let part = g.partition(positive("tau", p.tau)?, p.word_cap)?;
    part.verify(g)?;
    let header = ["word", "left", "right", "diameter", "upsilon"];
    let terms = part.terms.iter().map(|t| vec![t.word.to_string(), (t.target + 1).to_string()]);
    let result = json!({
        "tau": part.tau,
        "z_count": part.z.len(),
        "y_count": part.y.len(),
        "term_count": part.terms.len(),
        "words_visited": part.words_visited,
        "max_len": part.z.iter().map(|d| d.word.len()).max().unwrap_or(0),
    });
    Ok(Output {
        result,
        csv: vec![
            ("partition_z.csv".into(), csv_bytes(&header, word_data_rows(&part.z))?),
            ("partition_y.csv".into(), csv_bytes(&header, word_data_rows(&part.y))?),
            ("partition_terms.csv".into(), csv_bytes(&["word", "target"], terms)?),
        ],
    })
}

// ---------------------------------------------------------------- distortion

#[derive(Debug, Args, Serialize)]
pub struct DistortionArgs {
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub taus: Option<Vec<f64>>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DistortionParams {
    pub max_len: usize,
    pub taus: Vec<f64>,
    /// Computed when absent.
    pub delta: Option<f64>,
    /// Truncation used when δ is computed.
    pub n: usize,
}

impl Default for DistortionParams {
    fn default() -> Self {
        DistortionParams { max_len: 6, taus: default_taus(), delta: None, n: 16 }
    }
}

fn distortion(g: &SchottkyGroup, p: &DistortionParams, _: &RunConfig<DistortionParams>) -> Result<Output> {
    for &t in &p.taus {
        positive("tau", t)?;
    }
    let delta = resolve_delta(g, p.delta, &assemble_opts(p.n)?)?;
    let rep = schottky::distortion_report(g, p.max_len, &p.taus, Some(delta))?;
    let rows = rep.taus.iter().map(|t| {
        vec![
            fmt17(t.tau),
            t.z_count.to_string(),
            t.y_count.to_string(),
            opt17(t.y_count_tau_delta),
            fmt17(t.upsilon_over_tau.min),
            fmt17(t.upsilon_over_tau.max),
            fmt17(t.norm_sqrt_tau.min),
            fmt17(t.norm_sqrt_tau.max),
        ]
    });
    let header = [
        "tau",
        "z_count",
        "y_count",
        "y_count_tau_delta",
        "upsilon_over_tau_min",
        "upsilon_over_tau_max",
        "norm_sqrt_tau_min",
        "norm_sqrt_tau_max",
    ];
    let csv = csv_bytes(&header, rows)?;
    let result = json!({ "delta": delta, "report": rep });
    Ok(Output { result, csv: vec![("distortion_tau.csv".into(), csv)] })
}

// ---------------------------------------------------------------- zeta

#[derive(Debug, Args, Serialize)]
pub struct ZetaArgs {
    /// `trivial`, `lambda:<p>`, `lambda0:<p>`, or `+`-joined sums.
    #[arg(long)]
    pub rep: Option<String>,
    #[arg(long)]
    pub re_lo: Option<f64>,
    #[arg(long)]
    pub re_hi: Option<f64>,
    #[arg(long)]
    pub re_steps: Option<usize>,
    #[arg(long)]
    pub im_lo: Option<f64>,
    #[arg(long)]
    pub im_hi: Option<f64>,
    #[arg(long)]
    pub im_steps: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Use the refined operator at this τ.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Also evaluate the Euler product up to this word length.
    #[arg(long)]
    pub euler_len: Option<usize>,
    /// Dump the transfer matrix at the first grid point.
    #[arg(long)]
    pub dump: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ZetaParams {
    pub rep: String,
    pub re_lo: f64,
    pub re_hi: f64,
    pub re_steps: usize,
    pub im_lo: f64,
    pub im_hi: f64,
    pub im_steps: usize,
    pub n: usize,
    pub tau: Option<f64>,
    pub euler_len: Option<usize>,
    pub dump: bool,
}

impl Default for ZetaParams {
    fn default() -> Self {
        ZetaParams {
            rep: "trivial".into(),
            re_lo: 1.0,
            re_hi: 1.0,
            re_steps: 1,
            im_lo: 0.0,
            im_hi: 0.0,
            im_steps: 1,
            n: 16,
            tau: None,
            euler_len: None,
            dump: false,
        }
    }
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    match steps {
        0 => Err(Error::Config("grid steps must be at least 1".into())),
        1 => Ok(vec![lo]),
        _ => Ok((0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect()),
    }
}

fn zeta_grid(g: &SchottkyGroup, p: &ZetaParams, cfg: &RunConfig<ZetaParams>) -> Result<Output> {
    let rho = parse_rep(g, &p.rep)?;
    let opts = assemble_opts(p.n)?;
    let part = p.tau.map(|t| g.partition(positive("tau", t)?, DEFAULT_WORD_CAP)).transpose()?;
    let classes = p.euler_len.map(|l| zeta::primitive_classes(g, l));
    let points: Vec<Complex64> = {
        let re = linspace(p.re_lo, p.re_hi, p.re_steps)?;
        let im = linspace(p.im_lo, p.im_hi, p.im_steps)?;
        re.iter().flat_map(|&x| im.iter().map(move |&y| Complex64::new(x, y))).collect()
    };
    if p.dump {
        std::fs::create_dir_all(&cfg.output_dir)?;
        let set = part.as_ref().map_or(WordSet::Standard, WordSet::Refined);
        assemble(g, set, points[0], &rho, &opts)?.dump(&cfg.output_dir, "zeta_matrix")?;
    }
    let rows = points
        .par_iter()
        .map(|&s| -> Result<Vec<String>> {
            let ld = match &part {
                Some(pt) => zeta::refined_zeta_log(g, pt, s, &rho, &opts)?,
                None => zeta::zeta_log_det(g, s, &rho, &opts)?,
            };
            let z = ld.value();
            let euler = match (&classes, p.euler_len) {
                (Some(c), Some(l)) => Some(zeta::euler_product_over(c, s, &rho, l)?.complex()),
                _ => None,
            };
            Ok(vec![
                fmt17(s.re),
                fmt17(s.im),
                fmt17(z.re),
                fmt17(z.im),
                fmt17(ld.log_abs),
                fmt17(ld.phase.arg()),
                opt17(euler.map(|e| e.re)),
                opt17(euler.map(|e| e.im)),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let header = ["re_s", "im_s", "re_zeta", "im_zeta", "log_abs", "arg", "re_euler", "im_euler"];
    let result = json!({
        "rep": rho.label,
        "rep_dim": rho.dim,
        "points": points.len(),
        "refined": part.as_ref().map(|pt| json!({"tau": pt.tau, "terms": pt.terms.len()})),
        "csv": "zeta.csv",
    });
    Ok(Output { result, csv: vec![("zeta.csv".into(), csv_bytes(&header, rows)?)] })
}

// ---------------------------------------------------------------- zeros

#[derive(Debug, Args, Serialize)]
pub struct ZerosArgs {
    #[arg(long)]
    pub rep: Option<String>,
    #[arg(long)]
    pub lo: Option<f64>,
    #[arg(long)]
    pub hi: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub imag_tol: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ZerosParams {
    pub rep: String,
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    pub grid: usize,
    pub imag_tol: f64,
    pub n: usize,
}

impl Default for ZerosParams {
    fn default() -> Self {
        let z = ZeroOptions::default();
        ZerosParams { rep: "trivial".into(), lo: 0.1, hi: 1.0, tol: z.tol, grid: z.grid, imag_tol: z.imag_tol, n: 16 }
    }
}

fn zeros(g: &SchottkyGroup, p: &ZerosParams, _: &RunConfig<ZerosParams>) -> Result<Output> {
    let rho = parse_rep(g, &p.rep)?;
    let zo = zero_opts(p.tol, p.grid, p.imag_tol)?;
    let report = zeta::real_zeros(g, &rho, p.lo, p.hi, &zo, &assemble_opts(p.n)?)?;
    let mut buf = Vec::new();
    report.write_csv(&mut buf)?;
    let result = json!({ "count": report.count(), "report": report });
    Ok(Output { result, csv: vec![("zeros.csv".into(), buf)] })
}

// ---------------------------------------------------------------- delta

#[derive(Debug, Args, Serialize)]
pub struct DeltaArgs {
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeltaParams {
    pub tol: f64,
    pub n: usize,
}

impl Default for DeltaParams {
    fn default() -> Self {
        DeltaParams { tol: 1e-10, n: 16 }
    }
}

fn delta(g: &SchottkyGroup, p: &DeltaParams, _: &RunConfig<DeltaParams>) -> Result<Output> {
    let r = zeta::delta(g, positive("tol", p.tol)?, &assemble_opts(p.n)?)?;
    let row = vec![fmt17(r.by_eigenvalue), fmt17(r.by_determinant), fmt17((r.by_eigenvalue - r.by_determinant).abs())];
    let csv = csv_bytes(&["by_eigenvalue", "by_determinant", "difference"], [row])?;
    let result = json!({ "delta": r.value(), "report": r });
    Ok(Output { result, csv: vec![("delta.csv".into(), csv)] })
}

// ---------------------------------------------------------------- np

#[derive(Debug, Args, Serialize)]
pub struct NpArgs {
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<u64>>,
    /// Absolute σ values; defaults to 0.6δ, 0.7δ, 0.8δ.
    #[arg(long, value_delimiter = ',')]
    pub sigma: Option<Vec<f64>>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NpParams {
    pub p: Vec<u64>,
    pub sigma: Vec<f64>,
    pub delta: Option<f64>,
    pub tol: f64,
    pub grid: usize,
    pub n: usize,
}

impl Default for NpParams {
    fn default() -> Self {
        NpParams { p: vec![5, 7, 11], sigma: vec![], delta: None, tol: 1e-10, grid: 64, n: 16 }
    }
}

fn np(g: &SchottkyGroup, p: &NpParams, _: &RunConfig<NpParams>) -> Result<Output> {
    let opts = assemble_opts(p.n)?;
    let zo = zero_opts(p.tol, p.grid, ZeroOptions::default().imag_tol)?;
    let delta = resolve_delta(g, p.delta, &opts)?;
    let sigmas = sigmas_or_default(&p.sigma, delta);
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for &prime in &p.p {
        for &sigma in &sigmas {
            let count = zeta::new_eigenvalue_count(g, prime, sigma, delta, &zo, &opts)?;
            rows.push(vec![prime.to_string(), fmt17(sigma), count.to_string()]);
            records.push(json!({ "p": prime, "sigma": sigma, "count": count }));
        }
    }
    let result = json!({ "delta": delta, "counts": records });
    Ok(Output { result, csv: vec![("np.csv".into(), csv_bytes(&["p", "sigma", "count"], rows)?)] })
}

// ---------------------------------------------------------------- trace-check

#[derive(Debug, Args, Serialize)]
pub struct TraceCheckArgs {
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long)]
    pub pmin: Option<u64>,
    #[arg(long)]
    pub pmax: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TraceCheckParams {
    pub max_len: usize,
    pub pmin: u64,
    pub pmax: u64,
}

impl Default for TraceCheckParams {
    fn default() -> Self {
        TraceCheckParams { max_len: 6, pmin: 5, pmax: 47 }
    }
}

#[derive(Debug, Serialize)]
struct TraceRow {
    p: u64,
    surjective: bool,
    closure_size: u64,
    words: usize,
    mismatches: usize,
    first_mismatch: Option<Word>,
}

fn trace_check(g: &SchottkyGroup, p: &TraceCheckParams, _: &RunConfig<TraceCheckParams>) -> Result<Output> {
    let primes: Vec<u64> = (p.pmin..=p.pmax).filter(|&q| arithmetic::is_prime(q)).collect();
    let elems: Vec<_> = g
        .words_up_to(p.max_len)
        .into_iter()
        .map(|w| {
            let m = g.word_matrix(&w);
            (w, m)
        })
        .filter(|(_, m)| m.is_hyperbolic())
        .collect();
    let rows = primes
        .par_iter()
        .map(|&q| -> Result<TraceRow> {
            let surj = congruence::surjective_mod_p(g, q, DEFAULT_ENUMERATION_CAP)?;
            let mut row = TraceRow {
                p: q,
                surjective: surj.surjective,
                closure_size: surj.closure_size,
                words: 0,
                mismatches: 0,
                first_mismatch: None,
            };
            if !surj.surjective {
                return Ok(row);
            }
            let ctx = CongruenceContext::new(g, q)?;
            for (w, m) in &elems {
                row.words += 1;
                if ctx.trace_formula(m) != ctx.trace_bruteforce(m) {
                    row.mismatches += 1;
                    row.first_mismatch.get_or_insert_with(|| w.clone());
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let total: usize = rows.iter().map(|r| r.mismatches).sum();
    let csv = csv_bytes(
        &["p", "surjective", "closure_size", "words", "mismatches"],
        rows.iter().map(|r| {
            vec![r.p.to_string(), r.surjective.to_string(), r.closure_size.to_string(), r.words.to_string(), r.mismatches.to_string()]
        }),
    )?;
    let result = json!({ "hyperbolic_words": elems.len(), "mismatches": total, "primes": rows });
    Ok(Output { result, csv: vec![("trace_check.csv".into(), csv)] })
}

// ---------------------------------------------------------------- charsum

#[derive(Debug, Args, Serialize)]
pub struct CharsumArgs {
    /// Discriminants (arbitrary-size integers).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub d: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    pub x: Option<Vec<f64>>,
    /// `dyadic` (x/2 < p ≤ x) or `full` (p ≤ x).
    #[arg(long)]
    pub range: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CharsumParams {
    pub d: Vec<String>,
    pub x: Vec<f64>,
    pub range: PrimeRange,
}

impl Default for CharsumParams {
    fn default() -> Self {
        CharsumParams { d: ["5", "8", "13", "60"].map(String::from).to_vec(), x: vec![1e4, 1e5, 1e6], range: PrimeRange::Dyadic }
    }
}

fn charsum(_: &SchottkyGroup, p: &CharsumParams, _: &RunConfig<CharsumParams>) -> Result<Output> {
    let ds = p
        .d
        .iter()
        .map(|s| s.trim().parse::<BigInt>().map_err(|_| Error::Config(format!("bad integer d = {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut jobs = Vec::new();
    for d in &ds {
        for &x in &p.x {
            jobs.push((d, positive("x", x)?));
        }
    }
    let records = jobs.par_iter().map(|(d, x)| arithmetic::char_sum_range(d, *x, p.range)).collect::<Result<Vec<_>>>()?;
    let rows = records.iter().map(|r| {
        vec![r.d.clone(), fmt17(r.x), fmt17(r.sum), r.unweighted.to_string(), fmt17(r.bound_ratio), r.prime_count.to_string()]
    });
    let csv = csv_bytes(&["d", "x", "sum", "unweighted", "bound_ratio", "prime_count"], rows)?;
    let result = json!({ "records": records });
    Ok(Output { result, csv: vec![("charsum.csv".into(), csv)] })
}

// ---------------------------------------------------------------- hs-sum

#[derive(Debug, Args, Serialize)]
pub struct HsSumArgs {
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s_im: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub x: Option<Vec<f64>>,
    /// `direct`, `decomposed` or `both`.
    #[arg(long)]
    pub mode: Option<String>,
    /// Radial quadrature order.
    #[arg(long)]
    pub q: Option<usize>,
    /// `dyadic` (x/2 < p ≤ x) or `full` (p ≤ x).
    #[arg(long)]
    pub range: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HsSumParams {
    pub tau: f64,
    pub s_re: f64,
    pub s_im: f64,
    pub x: Vec<f64>,
    pub mode: HsSumMode,
    pub q: usize,
    pub range: PrimeRange,
}

impl Default for HsSumParams {
    fn default() -> Self {
        HsSumParams { tau: 2f64.powi(-6), s_re: 0.9, s_im: 0.0, x: vec![12.0], mode: HsSumMode::Both, q: 16, range: PrimeRange::Dyadic }
    }
}

fn hs_sum(g: &SchottkyGroup, p: &HsSumParams, _: &RunConfig<HsSumParams>) -> Result<Output> {
    let tau = positive("tau", p.tau)?;
    let s = Complex64::new(p.s_re, p.s_im);
    let records = p
        .x
        .iter()
        .map(|&x| arithmetic::hs_prime_sum_range(g, tau, s, positive("x", x)?, p.mode, p.q, p.range))
        .collect::<Result<Vec<_>>>()?;
    let rows = records.iter().map(|r| {
        vec![
            fmt17(r.tau),
            fmt17(r.s[0]),
            fmt17(r.s[1]),
            fmt17(r.x),
            opt17(r.direct),
            opt17(r.decomposed),
            opt17(r.diagonal),
            opt17(r.offdiagonal),
        ]
    });
    let header = ["tau", "re_s", "im_s", "x", "direct", "decomposed", "diagonal", "offdiagonal"];
    let result = json!({ "records": records });
    Ok(Output { result, csv: vec![("hs_sum.csv".into(), csv_bytes(&header, rows)?)] })
}

// ---------------------------------------------------------------- jensen

#[derive(Debug, Args, Serialize)]
pub struct JensenArgs {
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<u64>>,
    /// Absolute σ values in (0, δ); defaults to 0.6δ, 0.7δ, 0.8δ.
    #[arg(long, value_delimiter = ',')]
    pub sigma: Option<Vec<f64>>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JensenParams {
    pub p: Vec<u64>,
    pub sigma: Vec<f64>,
    pub tau: f64,
    pub k: f64,
    pub delta: Option<f64>,
    pub n: usize,
}

impl Default for JensenParams {
    fn default() -> Self {
        JensenParams { p: vec![5, 7, 11], sigma: vec![], tau: 2f64.powi(-6), k: 6.0, delta: None, n: 8 }
    }
}

fn jensen(g: &SchottkyGroup, p: &JensenParams, _: &RunConfig<JensenParams>) -> Result<Output> {
    let opts = assemble_opts(p.n)?;
    let delta = resolve_delta(g, p.delta, &opts)?;
    let tau = positive("tau", p.tau)?;
    let k = positive("k", p.k)?;
    let sigmas = sigmas_or_default(&p.sigma, delta);
    let mut records = Vec::new();
    for &prime in &p.p {
        for &sigma in &sigmas {
            records.push(arithmetic::jensen_bound(g, prime, sigma, tau, k, delta, &opts)?);
        }
    }
    let rows = records.iter().map(|r| {
        vec![
            r.p.to_string(),
            fmt17(r.sigma),
            fmt17(r.tau),
            fmt17(r.k),
            fmt17(r.bound),
            fmt17(r.circle_mean),
            fmt17(r.center_log),
            r.samples.to_string(),
        ]
    });
    let header = ["p", "sigma", "tau", "k", "bound", "circle_mean", "center_log", "samples"];
    let result = json!({ "delta": delta, "records": records });
    Ok(Output { result, csv: vec![("jensen.csv".into(), csv_bytes(&header, rows)?)] })
}
