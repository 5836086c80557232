//! Command-line front end: parameter parsing, subcommand dispatch, parameter
//! sweeps, and CSV/JSON emission of plot-ready data.

mod output;
mod runcfg;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use output::{Document, Format, Value};
use runcfg::{apply_config, merge, parse_waiting, ConfigMap};
use wqed::entropy::Entropy;
use wqed::fcs::{Channel, FcsCalc};
use wqed::params::SystemParams;
use wqed::spectrum::Spectrum;
use wqed::{Error as CoreError, WaitingTime};

#[derive(Parser)]
#[command(
    name = "wqed",
    about = "Exact counting statistics, fluorescence spectra, and entanglement entropy \
             for a coherent pulse scattering off a two-level emitter in a 1D waveguide",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Physical and output options shared by all subcommands. Precedence:
/// explicit flags > config file entries > defaults.
#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Detuning delta (units of gamma)
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    /// Relaxation rate gamma (sets the unit scale)
    #[arg(long)]
    gamma: Option<f64>,
    /// Rabi frequency (units of gamma)
    #[arg(long)]
    rabi: Option<f64>,
    /// Carrier frequency offset k0 (spectral phases only)
    #[arg(long, allow_hyphen_values = true)]
    k0: Option<f64>,
    /// Counting window length tau (units of 1/gamma)
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    /// Waiting time T (units of 1/gamma), or "inf"
    #[arg(long = "T", value_name = "T", allow_hyphen_values = true)]
    waiting: Option<String>,
    /// Detection channel: reflected|chiral|transmitted or 0|1|2
    #[arg(long)]
    kappa: Option<String>,
    /// Output format: csv or json
    #[arg(long)]
    format: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    output: Option<String>,
    /// Significant digits in CSV output (JSON always uses 17)
    #[arg(long)]
    precision: Option<usize>,
    /// Optional key=value config file (flags win over file entries)
    #[arg(long)]
    config: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generating function F(chi) on a uniform chi grid
    Fcs {
        #[command(flatten)]
        common: Common,
        /// Number of chi samples on [0, 2pi)
        #[arg(long)]
        chi_samples: Option<usize>,
    },
    /// Photon-number distribution p(n) of a counting window
    Pn {
        #[command(flatten)]
        common: Common,
        /// Largest photon number to keep (auto-sized when omitted)
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Mandel Q factor: closed form and numeric value
    Qfactor {
        #[command(flatten)]
        common: Common,
    },
    /// Two-point correlation functions R, C, M, N on a tau grid
    Correlators {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        tau_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        tau_max: Option<f64>,
        #[arg(long)]
        tau_points: Option<usize>,
    },
    /// Inelastic (Mollow) spectrum against omega - k0
    Mollow {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        omega_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        omega_max: Option<f64>,
        #[arg(long)]
        omega_points: Option<usize>,
        /// Average the spectrum over waiting times [0, T0] instead of
        /// using a fixed T
        #[arg(long = "T0")]
        t0: Option<f64>,
    },
    /// Entanglement entropy of the counting interval on a tau grid
    Entropy {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        tau_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        tau_max: Option<f64>,
        #[arg(long)]
        tau_points: Option<usize>,
    },
    /// Sweep an observable over one or two parameter ranges
    Sweep {
        #[command(flatten)]
        common: Common,
        /// First varied parameter, e.g. delta=0:5:11 (name=start:stop:count)
        #[arg(long)]
        vary: Option<String>,
        /// Optional second varied parameter
        #[arg(long)]
        vary2: Option<String>,
        /// Observable: qfactor | mean | entropy | f0
        #[arg(long)]
        observable: Option<String>,
        /// Concurrency bound for sweep cells
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run the built-in invariant suite and print a pass/fail table
    Selftest,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => match err.downcast_ref::<CoreError>() {
            Some(CoreError::StabilityViolation { pole }) => {
                eprintln!("numerical stability error: pole at {pole} above the inversion contour");
                2
            }
            Some(
                CoreError::QuadratureFailure(_)
                | CoreError::StepUnderflow(_)
                | CoreError::Inconsistency(_)
                | CoreError::OnPole(_),
            ) => {
                eprintln!("numerical error: {err}");
                2
            }
            _ => {
                eprintln!("error: {err}");
                1
            }
        },
    };
    std::process::exit(code);
}

struct Resolved {
    params: SystemParams,
    tau: f64,
    waiting: WaitingTime,
    channel: Channel,
    format: Format,
    output: Option<String>,
    precision: usize,
    cfg: ConfigMap,
}

fn resolve(common: &Common) -> anyhow::Result<Resolved> {
    let cfg = match &common.config {
        Some(path) => apply_config(path)?,
        None => ConfigMap::default(),
    };
    let delta = merge(common.delta, cfg.get_f64("delta")?, 0.0);
    let gamma = merge(common.gamma, cfg.get_f64("gamma")?, 1.0);
    let rabi = merge(common.rabi, cfg.get_f64("rabi")?, 1.0);
    let k0 = merge(common.k0, cfg.get_f64("k0")?, 0.0);
    let tau = merge(common.tau, cfg.get_f64("tau")?, 10.0);
    let waiting_str = common
        .waiting
        .clone()
        .or_else(|| cfg.get_str("T"))
        .unwrap_or_else(|| "inf".to_string());
    let waiting = parse_waiting(&waiting_str)?;
    let kappa_str = common
        .kappa
        .clone()
        .or_else(|| cfg.get_str("kappa"))
        .unwrap_or_else(|| "transmitted".to_string());
    let channel = parse_channel(&kappa_str)?;
    let format_str = common
        .format
        .clone()
        .or_else(|| cfg.get_str("format"))
        .unwrap_or_else(|| "csv".to_string());
    let format = match format_str.as_str() {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => anyhow::bail!("unknown format {other:?} (expected csv or json)"),
    };
    let output = common.output.clone().or_else(|| cfg.get_str("output"));
    let precision = merge(common.precision, cfg.get_usize("precision")?, 12);
    if tau < 0.0 || !tau.is_finite() {
        anyhow::bail!("tau must be >= 0, got {tau}");
    }
    if gamma <= 0.0 || !gamma.is_finite() {
        anyhow::bail!("gamma must be > 0, got {gamma}");
    }
    // gamma is the unit: the library is exact under rescaling, so inputs are
    // normalized to gamma = 1 here; grid/window times below are likewise in
    // 1/gamma already.
    let params = SystemParams::new(delta / gamma, 1.0, rabi / gamma, k0 / gamma)?;
    Ok(Resolved {
        params,
        tau: tau * gamma,
        waiting: match waiting {
            WaitingTime::Finite(t) => WaitingTime::Finite(t * gamma),
            inf => inf,
        },
        channel,
        format,
        output,
        precision,
        cfg,
    })
}

fn parse_channel(s: &str) -> anyhow::Result<Channel> {
    match s {
        "reflected" | "0" => Ok(Channel::Reflected),
        "chiral" | "1" => Ok(Channel::Chiral),
        "transmitted" | "2" => Ok(Channel::Transmitted),
        other => anyhow::bail!("unknown kappa {other:?} (reflected|chiral|transmitted or 0|1|2)"),
    }
}

fn base_metadata(r: &Resolved) -> Vec<(String, Value)> {
    vec![
        (
            "tool".into(),
            Value::Str(format!("wqed {}", env!("CARGO_PKG_VERSION"))),
        ),
        (
            "units".into(),
            Value::Str("gamma = 1; rates in gamma, times in 1/gamma".into()),
        ),
        ("delta".into(), Value::Num(r.params.delta)),
        ("gamma".into(), Value::Num(1.0)),
        ("rabi".into(), Value::Num(r.params.rabi)),
        ("k0".into(), Value::Num(r.params.k0)),
    ]
}

fn linspace(lo: f64, hi: f64, n: usize) -> anyhow::Result<Vec<f64>> {
    if n < 1 || !lo.is_finite() || !hi.is_finite() || hi < lo {
        anyhow::bail!("invalid grid [{lo}, {hi}] with {n} points");
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect())
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Fcs {
            common,
            chi_samples,
        } => {
            let r = resolve(&common)?;
            let n = merge(chi_samples, r.cfg.get_usize("chi_samples")?, 256);
            let calc = FcsCalc::new(&r.params)?;
            let mut doc = Document::new(
                vec!["chi".into(), "re_f".into(), "im_f".into()],
                base_metadata(&r),
            );
            doc.meta.push(("tau".into(), Value::Num(r.tau)));
            doc.meta
                .push(("T".into(), Value::Str(r.waiting.to_string())));
            doc.meta
                .push(("kappa".into(), Value::Str(r.channel.to_string())));
            for k in 0..n {
                let chi = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                let f = calc.fcs_generating(r.channel, chi, r.tau, r.waiting)?;
                doc.rows.push(vec![chi, f.re, f.im]);
            }
            doc.emit(r.format, r.precision, r.output.as_deref())?;
            Ok(0)
        }
        Command::Pn { common, n_max } => {
            let r = resolve(&common)?;
            let n_max = n_max.or(r.cfg.get_usize("n_max")?);
            let calc = FcsCalc::new(&r.params)?;
            let res = calc.pmf(r.channel, r.tau, r.waiting, n_max)?;
            let mut doc = Document::new(vec!["n".into(), "p".into()], base_metadata(&r));
            doc.meta.push(("tau".into(), Value::Num(r.tau)));
            doc.meta
                .push(("T".into(), Value::Str(r.waiting.to_string())));
            doc.meta
                .push(("kappa".into(), Value::Str(r.channel.to_string())));
            doc.meta.push(("mean".into(), Value::Num(res.mean)));
            doc.meta.push(("variance".into(), Value::Num(res.variance)));
            doc.meta.push(("mandel_q".into(), Value::Num(res.q)));
            doc.meta
                .push(("mean_asymptotic".into(), Value::Num(res.mean_asymptotic)));
            doc.meta
                .push(("q_asymptotic".into(), Value::Num(res.q_asymptotic)));
            doc.meta.push(("z_factor".into(), Value::Num(res.z_factor)));
            doc.meta
                .push(("total_mass".into(), Value::Num(res.total_mass)));
            doc.meta.push(("max_imag".into(), Value::Num(res.max_imag)));
            if res.truncated {
                eprintln!(
                    "warning: probability mass {:.8} below 1 - 1e-6; raise --n-max",
                    res.total_mass
                );
            }
            for (n, p) in res.pmf.iter().enumerate() {
                doc.rows.push(vec![n as f64, *p]);
            }
            doc.emit(r.format, r.precision, r.output.as_deref())?;
            Ok(0)
        }
        Command::Qfactor { common } => {
            let r = resolve(&common)?;
            let calc = FcsCalc::new(&r.params)?;
            let q_closed = calc.mandel_q(r.channel);
            let q_num = calc.q_numeric(r.channel, r.tau, r.waiting)?;
            let (mean_num, var_num) = calc.mean_var_numeric(r.channel, r.tau, r.waiting)?;
            let mut doc = Document::new(
                vec![
                    "kappa".into(),
                    "q_closed".into(),
                    "q_numeric".into(),
                    "mean_closed".into(),
                    "mean_numeric".into(),
                    "variance_numeric".into(),
                    "z_factor".into(),
                ],
                base_metadata(&r),
            );
            doc.meta.push(("tau".into(), Value::Num(r.tau)));
            doc.meta
                .push(("T".into(), Value::Str(r.waiting.to_string())));
            doc.rows.push(vec![
                r.channel.kappa(),
                q_closed,
                q_num,
                calc.mean_counts(r.channel, r.tau),
                mean_num,
                var_num,
                calc.z_factor(r.channel),
            ]);
            doc.emit(r.format, r.precision, r.output.as_deref())?;
            Ok(0)
        }
        Command::Correlators {
            common,
            tau_min,
            tau_max,
            tau_points,
        } => {
            let r = resolve(&common)?;
            let lo = merge(tau_min, r.cfg.get_f64("tau_min")?, 0.0);
            let hi = merge(tau_max, r.cfg.get_f64("tau_max")?, 20.0);
            let n = merge(tau_points, r.cfg.get_usize("tau_points")?, 201);
            let corr = wqed::correlators::Correlators::new(&r.params)?;
            let mut doc = Document::new(
                vec![
                    "tau".into(),
                    "re_r".into(),
                    "im_r".into(),
                    "re_c".into(),
                    "im_c".into(),
                    "re_m".into(),
                    "im_m".into(),
                    "re_n".into(),
                    "im_n".into(),
                ],
                base_metadata(&r),
            );
            for tau in linspace(lo, hi, n)? {
                let (rr, cc, mm, nn) = (corr.r(tau), corr.c(tau), corr.m(tau), corr.n(tau));
                doc.rows.push(vec![
                    tau, rr.re, rr.im, cc.re, cc.im, mm.re, mm.im, nn.re, nn.im,
                ]);
            }
            doc.emit(r.format, r.precision, r.output.as_deref())?;
            Ok(0)
        }
        Command::Mollow {
            common,
            omega_min,
            omega_max,
            omega_points,
            t0,
        } => {
            let r = resolve(&common)?;
            let spect = Spectrum::new(&r.params)?;
            let half = 2.0 * r.params.rabi + 6.0;
            let lo = merge(omega_min, r.cfg.get_f64("omega_min")?, -half);
            let hi = merge(omega_max, r.cfg.get_f64("omega_max")?, half);
            let n = merge(omega_points, r.cfg.get_usize("omega_points")?, 2001);
            let t0 = t0.or(r.cfg.get_f64("T0")?);
            let grid = linspace(lo, hi, n)?;
            let result = spect.grid(&grid, r.waiting, t0)?;
            let mut doc = Document::new(
                vec!["omega_minus_k0".into(), "p_inel".into()],
                base_metadata(&r),
            );
            match t0 {
                Some(h) => doc.meta.push(("T0".into(), Value::Num(h))),
                None => doc
                    .meta
                    .push(("T".into(), Value::Str(r.waiting.to_string()))),
            }
            doc.meta.push((
                "power_prefactor".into(),
                Value::Str("printed power spectrum carries an overall factor k0".into()),
            ));
            for (nu, p) in result.nu.iter().zip(&result.p_inel) {
                doc.rows.push(vec![*nu, *p]);
            }
            doc.emit(r.format, r.precision, r.output.as_deref())?;
            Ok(0)
        }
        Command::Entropy {
            common,
            tau_min,
            tau_max,
            tau_points,
        } => {
            let r = resolve(&common)?;
            let lo = merge(tau_min, r.cfg.get_f64("tau_min")?, 0.0);
            let hi = merge(tau_max, r.cfg.get_f64("tau_max")?, 20.0);
            let n = merge(tau_points, r.cfg.get_usize("tau_points")?, 201);
            let ent = Entropy::new(&r.params)?;
            let mut doc = Document::new(
                vec![
                    "tau".into(),
                    "s".into(),
                    "lam1".into(),
                    "lam2".into(),
                    "lam3".into(),
                    "lam4".into(),
                ],
                base_metadata(&r),
            );
            doc.meta
                .push(("T".into(), Value::Str(r.waiting.to_string())));
            for tau in linspace(lo, hi, n)? {
                let res = ent.entanglement_entropy(tau, r.waiting)?;
                doc.rows.push(vec![
                    tau,
                    res.entropy,
                    res.eigenvalues[0],
                    res.eigenvalues[1],
                    res.eigenvalues[2],
                    res.eigenvalues[3],
                ]);
            }
            doc.emit(r.format, r.precision, r.output.as_deref())?;
            Ok(0)
        }
        Command::Sweep {
            common,
            vary,
            vary2,
            observable,
            jobs,
        } => {
            let r = resolve(&common)?;
            let vary = vary
                .or_else(|| r.cfg.get_str("vary"))
                .context("sweep requires --vary name=start:stop:count")?;
            let vary2 = vary2.or_else(|| r.cfg.get_str("vary2"));
            let observable = observable
                .or_else(|| r.cfg.get_str("observable"))
                .unwrap_or_else(|| "qfactor".to_string());
            let jobs = merge(jobs, r.cfg.get_usize("jobs")?, 1);
            run_sweep(&r, &vary, vary2.as_deref(), &observable, jobs)
        }
        Command::Selftest => {
            let results = wqed::selftest::run_all();
            let mut all = true;
            println!("{:<42} {:<6} detail", "check", "status");
            for c in &results {
                println!(
                    "{:<42} {:<6} {}",
                    c.name,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.detail
                );
                all &= c.passed;
            }
            Ok(if all { 0 } else { 2 })
        }
    }
}

struct VarySpec {
    name: String,
    values: Vec<f64>,
}

fn parse_vary(s: &str) -> anyhow::Result<VarySpec> {
    let (name, rest) = s
        .split_once('=')
        .context("vary spec must be name=start:stop:count")?;
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        anyhow::bail!("vary spec must be name=start:stop:count, got {s:?}");
    }
    let start: f64 = parts[0].parse().context("bad start")?;
    let stop: f64 = parts[1].parse().context("bad stop")?;
    let count: usize = parts[2].parse().context("bad count")?;
    if !["delta", "rabi", "tau", "k0"].contains(&name) {
        anyhow::bail!("can vary delta, rabi, tau or k0; got {name:?}");
    }
    Ok(VarySpec {
        name: name.to_string(),
        values: linspace(start, stop, count)?,
    })
}

fn run_sweep(
    r: &Resolved,
    vary: &str,
    vary2: Option<&str>,
    observable: &str,
    jobs: usize,
) -> anyhow::Result<i32> {
    use rayon::prelude::*;
    let v1 = parse_vary(vary)?;
    let v2 = match vary2 {
        Some(s) => Some(parse_vary(s)?),
        None => None,
    };
    let mut cells: Vec<(f64, Option<f64>)> = Vec::new();
    for &a in &v1.values {
        match &v2 {
            Some(v2) => {
                for &b in &v2.values {
                    cells.push((a, Some(b)));
                }
            }
            None => cells.push((a, None)),
        }
    }
    let obs_cols: Vec<String> = match observable {
        "qfactor" => vec![
            "q_reflected".into(),
            "q_chiral".into(),
            "q_transmitted".into(),
        ],
        "mean" => vec![
            "mean_reflected".into(),
            "mean_chiral".into(),
            "mean_transmitted".into(),
        ],
        "entropy" => vec!["s".into()],
        "f0" => vec!["f0_deviation".into()],
        other => anyhow::bail!("unknown observable {other:?} (qfactor|mean|entropy|f0)"),
    };
    let eval_cell = |cell: &(f64, Option<f64>)| -> anyhow::Result<Vec<f64>> {
        let mut delta = r.params.delta;
        let mut rabi = r.params.rabi;
        let mut k0 = r.params.k0;
        let mut tau = r.tau;
        {
            let mut assign = |name: &str, v: f64| match name {
                "delta" => delta = v,
                "rabi" => rabi = v,
                "tau" => tau = v,
                _ => k0 = v,
            };
            assign(&v1.name, cell.0);
            if let (Some(v2), Some(b)) = (&v2, cell.1) {
                assign(&v2.name, b);
            }
        }
        let params = SystemParams::new(delta, 1.0, rabi, k0)?;
        let values = match observable {
            "qfactor" => {
                let calc = FcsCalc::new(&params)?;
                vec![
                    calc.mandel_q(Channel::Reflected),
                    calc.mandel_q(Channel::Chiral),
                    calc.mandel_q(Channel::Transmitted),
                ]
            }
            "mean" => {
                let calc = FcsCalc::new(&params)?;
                vec![
                    calc.mean_counts(Channel::Reflected, tau),
                    calc.mean_counts(Channel::Chiral, tau),
                    calc.mean_counts(Channel::Transmitted, tau),
                ]
            }
            "entropy" => {
                let ent = Entropy::new(&params)?;
                vec![ent.entanglement_entropy(tau, r.waiting)?.entropy]
            }
            _ => {
                let calc = FcsCalc::new(&params)?;
                let f = calc.fcs_generating(r.channel, 0.0, tau, r.waiting)?;
                vec![(f - 1.0).norm()]
            }
        };
        Ok(values)
    };
    // evaluate cells concurrently, assemble in deterministic order
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .context("thread pool")?;
    let results: Vec<anyhow::Result<Vec<f64>>> =
        pool.install(|| cells.par_iter().map(eval_cell).collect());
    let mut columns = vec![v1.name.clone()];
    if let Some(v2) = &v2 {
        columns.push(v2.name.clone());
    }
    columns.extend(obs_cols);
    let mut doc = Document::new(columns, base_metadata(r));
    doc.meta
        .push(("observable".into(), Value::Str(observable.into())));
    doc.meta.push(("tau".into(), Value::Num(r.tau)));
    doc.meta
        .push(("T".into(), Value::Str(r.waiting.to_string())));
    for (cell, res) in cells.iter().zip(results) {
        let values = res?;
        let mut row = vec![cell.0];
        if let Some(b) = cell.1 {
            row.push(b);
        }
        row.extend(values);
        doc.rows.push(row);
    }
    doc.emit(r.format, r.precision, r.output.as_deref())?;
    Ok(0)
}
