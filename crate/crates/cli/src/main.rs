//! `dbd`: counting, asymptotics, densities and sampling for De Bruijn
//! formulae from the command line.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fodensity::asymptotics::{
    count_ratio, estimate_c_infinity, CmOptions, SingularityData, DEFAULT_TOLERANCE,
};
use fodensity::density::{
    independence_density_bound, tautology_bounds, ConnectiveNames, DensityReport, ImplicationMode,
};
use fodensity::enumerate::{enumerate, DEFAULT_SIZE_LIMIT};
use fodensity::numeric::{decimal, fraction, round6, sig6};
use fodensity::sampler::Sampler;
use fodensity::{CountTable, Error, Formula, Openness, Signature, Template};
use serde_json::{json, Value};

const COUNT_LIMIT: usize = 5000;

#[derive(Parser)]
#[command(
    name = "dbd",
    version,
    about = "Counting and densities of De Bruijn first-order formulae"
)]
struct Cli {
    /// Signature file (JSON); the default is {and/2, or/2, not/1} with unit weights
    #[arg(long, global = true, env = "DBD_SIG")]
    sig: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact counts of formulae of each size up to --size
    Count {
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        bound: BoundArgs,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        /// Allow sizes above 5000
        #[arg(long)]
        force: bool,
    },
    /// Dominant singularity, expansion constants and C_m estimates
    Asymptotics {
        /// Size of the count table used for C_m and the validation ratios
        #[arg(long, default_value_t = 500)]
        size: usize,
        /// Estimate C_0 ..= C_rows
        #[arg(long, default_value_t = 10)]
        rows: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Exact density of a template class among sentences
    Density {
        #[arg(long)]
        template: String,
        #[arg(long)]
        size: usize,
        /// Sizes to report; defaults to size/4, size/2 and size
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Also estimate the limiting density
        #[arg(long)]
        limit: bool,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Theorem-density bounds from a tautology
    Bounds {
        #[arg(long)]
        tautology: String,
        /// Independent sentence for the independence bound
        #[arg(long)]
        phi: Option<String>,
        /// Fail instead of rewriting implication through and/not
        #[arg(long)]
        native_implication: bool,
        #[command(flatten)]
        names: NameArgs,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Uniform random formulae of a given size
    Sample {
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        bound: BoundArgs,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Size, openness and validity of a formula
    Check {
        formula: String,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// List every formula of a given size (at most 16)
    Enumerate {
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        bound: BoundArgs,
    },
}

/// Openness class; sentences when no flag is given.
#[derive(Args)]
#[group(multiple = false)]
struct BoundArgs {
    /// m-open formulae
    #[arg(long, value_name = "M")]
    open: Option<usize>,
    /// Sentences (0-open)
    #[arg(long)]
    closed: bool,
    /// All formulae
    #[arg(long)]
    all: bool,
}

impl BoundArgs {
    fn bound(&self) -> Openness {
        match (self.open, self.all) {
            (Some(m), _) => Openness::AtMost(m),
            (None, true) => Openness::Any,
            _ => Openness::AtMost(0),
        }
    }
}

#[derive(Args)]
struct NameArgs {
    #[arg(long, default_value = "or")]
    or_name: String,
    #[arg(long, default_value = "and")]
    and_name: String,
    #[arg(long, default_value = "not")]
    not_name: String,
    #[arg(long, default_value = "implies")]
    implies_name: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidSignature(_) | Error::MissingConnective { .. } => 3,
            Error::NotAdmissible | Error::NoConvergence(_) | Error::DegenerateBranch(_) => 4,
            Error::InvalidTemplate(_) => 5,
            _ => 2,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn template_error(e: Error) -> Failure {
    let msg = match e {
        Error::InvalidTemplate(_) => e.to_string(),
        e => format!("invalid template: {e}"),
    };
    Failure { code: 5, msg }
}

type Out = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("dbd: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn load_signature(path: Option<&PathBuf>) -> Result<Signature, Failure> {
    match path {
        None => Ok(Signature::standard()),
        Some(p) => Signature::from_path(p).map_err(|e| Failure {
            code: 3,
            msg: e.to_string(),
        }),
    }
}

fn run(cli: Cli) -> Out {
    let sig = load_signature(cli.sig.as_ref())?;
    match cli.command {
        Command::Count {
            size,
            bound,
            format,
            force,
        } => cmd_count(&sig, size, bound.bound(), format, force),
        Command::Asymptotics {
            size,
            rows,
            tolerance,
            format,
        } => cmd_asymptotics(&sig, size, rows, tolerance, format),
        Command::Density {
            template,
            size,
            sizes,
            limit,
            format,
        } => cmd_density(&sig, &template, size, sizes, limit, format),
        Command::Bounds {
            tautology,
            phi,
            native_implication,
            names,
            format,
        } => cmd_bounds(
            &sig,
            &tautology,
            phi.as_deref(),
            native_implication,
            names,
            format,
        ),
        Command::Sample {
            size,
            bound,
            count,
            seed,
            stream,
        } => cmd_sample(&sig, size, bound.bound(), count, seed, stream),
        Command::Check { formula, format } => cmd_check(&sig, &formula, format),
        Command::Enumerate { size, bound } => cmd_enumerate(&sig, size, bound.bound()),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn table_for(sig: &Signature, size: usize, bound: Openness) -> CountTable {
    match bound {
        Openness::AtMost(m) => CountTable::with_rows(size, m, sig),
        Openness::Any => CountTable::with_rows(size, 0, sig),
    }
}

fn cmd_count(sig: &Signature, size: usize, bound: Openness, format: Format, force: bool) -> Out {
    if size > COUNT_LIMIT && !force {
        let mut f = Failure::from(Error::SizeLimit {
            requested: size,
            limit: COUNT_LIMIT,
        });
        f.msg.push_str(" (pass --force to override)");
        return Err(f);
    }
    let table = table_for(sig, size, bound);
    match format {
        Format::Tsv => Ok(table.to_tsv(&[bound])?),
        Format::Json => {
            let counts = (0..=size)
                .map(|n| Ok(table.count(bound, n)?.to_string()))
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(pretty(&json!({
                "m": bound.to_string(),
                "signature": sig.fingerprint(),
                "counts": counts,
            })))
        }
    }
}

fn cmd_asymptotics(sig: &Signature, size: usize, rows: usize, tol: f64, format: Format) -> Out {
    let mut sd = SingularityData::compute(sig, tol)?;
    let opts = CmOptions::default();
    let table = CountTable::with_rows(size, rows, sig);
    let mut notes = Vec::new();
    let mut c_inf = None;
    if size >= opts.min_size {
        sd.estimate_constants(&table, 0..=rows, &opts)?;
        c_inf = Some(estimate_c_infinity(&table, &sd, &opts)?);
    } else {
        notes.push(format!(
            "C_m estimates need --size of at least {}",
            opts.min_size
        ));
    }
    let checkpoints: Vec<usize> = [size / 4, size / 2, size]
        .into_iter()
        .filter(|&n| n > 0 && !table.infinity()[n].bits().eq(&0))
        .collect();
    let ratios = checkpoints
        .iter()
        .map(|&n| Ok((n, count_ratio(&table.infinity()[n], n, &sd, Openness::Any)?)))
        .collect::<Result<Vec<_>, Error>>()?;

    match format {
        Format::Tsv => {
            let mut out = String::new();
            for note in &notes {
                writeln!(out, "# {note}").unwrap();
            }
            out.push_str("quantity\tvalue\n");
            for (k, v) in [
                ("rho", sd.rho),
                ("tau", sd.tau),
                ("gamma", sd.gamma),
                ("a", sd.a),
                ("b", sd.b),
                ("C", sd.c),
                ("residual_value", sd.residuals.value),
                ("residual_branch", sd.residuals.branch),
            ] {
                writeln!(out, "{k}\t{}", sig6(v)).unwrap();
            }
            for e in sd.cm.values() {
                writeln!(out, "C_{}\t{}", e.m, sig6(e.value)).unwrap();
                writeln!(out, "deficit_{}\t{}", e.m, sig6(e.deficit)).unwrap();
            }
            if let Some(c) = c_inf {
                writeln!(out, "C_inf_extrapolated\t{}", sig6(c)).unwrap();
            }
            for (n, r) in &ratios {
                writeln!(out, "ratio_{n}\t{}", sig6(*r)).unwrap();
            }
            Ok(out)
        }
        Format::Json => Ok(pretty(&json!({
            "rho": round6(sd.rho),
            "tau": round6(sd.tau),
            "gamma": round6(sd.gamma),
            "a": round6(sd.a),
            "b": round6(sd.b),
            "C": round6(sd.c),
            "residuals": {
                "value": round6(sd.residuals.value),
                "branch": round6(sd.residuals.branch),
            },
            "C_m": sd.cm.values().map(|e| json!({
                "m": e.m,
                "value": round6(e.value),
                "deficit": round6(e.deficit),
            })).collect::<Vec<_>>(),
            "C_inf_extrapolated": c_inf.map(round6),
            "ratios": ratios.iter().map(|(n, r)| json!({"n": n, "ratio": round6(*r)})).collect::<Vec<_>>(),
            "notes": notes,
        }))),
    }
}

fn cmd_density(
    sig: &Signature,
    text: &str,
    size: usize,
    sizes: Vec<usize>,
    limit: bool,
    format: Format,
) -> Out {
    let template = Template::parse(text, sig).map_err(template_error)?;
    let m = template.permissiveness().map_err(template_error)?;
    let floor = template.size() + sig.min_atom_size();
    let sizes: Vec<usize> = if sizes.is_empty() {
        let mut v: Vec<usize> = [size / 4, size / 2, size]
            .into_iter()
            .filter(|&n| n >= floor)
            .collect();
        v.dedup();
        v
    } else {
        sizes
    };
    if sizes.is_empty() {
        return Err(
            Error::InsufficientData(format!("no reported size is at least {floor}")).into(),
        );
    }
    let top = sizes.iter().copied().max().unwrap_or(size).max(size);
    let opts = CmOptions::default();
    let table_size = if limit { top.max(opts.min_size) } else { top };
    let table = CountTable::with_rows(table_size, m, sig);
    let sd = if limit {
        let mut sd = SingularityData::compute(sig, DEFAULT_TOLERANCE)?;
        if m > 0 {
            sd.estimate_constants(&table, [0, m], &opts)?;
        }
        Some(sd)
    } else {
        None
    };
    let report = DensityReport::build(&template, &sizes, &table, sd.as_ref())?;
    match format {
        Format::Json => Ok(pretty(&report.to_json())),
        Format::Tsv => {
            let mut out = format!(
                "# template={} d={} m={} limit={}\n",
                report.template,
                report.d,
                report.m,
                report.limit.map_or("-".into(), sig6)
            );
            out.push_str("n\tfraction\tdecimal\tresidual\n");
            for e in &report.exact {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    e.n,
                    fraction(&e.value),
                    decimal(&e.value, 12),
                    e.residual.map_or("-".into(), sig6)
                )
                .unwrap();
            }
            Ok(out)
        }
    }
}

fn sentence(sig: &Signature, text: &str) -> Result<Formula, Failure> {
    Ok(Formula::parse(text, sig)?)
}

fn cmd_bounds(
    sig: &Signature,
    tautology: &str,
    phi: Option<&str>,
    native: bool,
    names: NameArgs,
    format: Format,
) -> Out {
    let names = ConnectiveNames {
        or: names.or_name,
        and: names.and_name,
        not: names.not_name,
        implies: names.implies_name,
    };
    let tau = sentence(sig, tautology)?;
    let sd = SingularityData::compute(sig, DEFAULT_TOLERANCE)?;
    let tb = tautology_bounds(&tau, sig, &sd, &names)?;
    let ib = phi
        .map(|p| {
            let phi = sentence(sig, p)?;
            let mode = if native {
                ImplicationMode::RequireNative
            } else {
                ImplicationMode::DesugarIfMissing
            };
            Ok::<_, Failure>(independence_density_bound(
                &phi, &tau, sig, &sd, &names, mode,
            )?)
        })
        .transpose()?;
    match format {
        Format::Tsv => {
            let mut out = String::from("quantity\tvalue\n");
            writeln!(out, "rho\t{}", sig6(sd.rho)).unwrap();
            writeln!(out, "tautology_size\t{}", tb.tautology_size).unwrap();
            writeln!(out, "lower\t{}", sig6(tb.lower)).unwrap();
            writeln!(out, "upper\t{}", sig6(tb.upper)).unwrap();
            writeln!(out, "upper_complement\t{}", sig6(1.0 - tb.upper)).unwrap();
            writeln!(out, "lower_template\t{}", tb.lower_template).unwrap();
            writeln!(out, "upper_template\t{}", tb.upper_template).unwrap();
            if let Some(ib) = &ib {
                writeln!(out, "independence_density\t{}", sig6(ib.density)).unwrap();
                writeln!(out, "independence_d\t{}", ib.d).unwrap();
                writeln!(out, "independence_template\t{}", ib.template).unwrap();
                let form = serde_json::to_value(ib.implication).expect("json");
                writeln!(out, "implication\t{}", form.as_str().unwrap_or("")).unwrap();
            }
            Ok(out)
        }
        Format::Json => Ok(pretty(&json!({
            "rho": round6(sd.rho),
            "tautology_size": tb.tautology_size,
            "lower": round6(tb.lower),
            "upper": round6(tb.upper),
            "upper_complement": round6(1.0 - tb.upper),
            "lower_template": tb.lower_template,
            "upper_template": tb.upper_template,
            "independence": ib.map(|ib| json!({
                "density": round6(ib.density),
                "d": ib.d,
                "template": ib.template,
                "implication": ib.implication,
            })),
        }))),
    }
}

fn cmd_sample(
    sig: &Signature,
    size: usize,
    bound: Openness,
    count: usize,
    seed: u64,
    stream: u64,
) -> Out {
    if size > COUNT_LIMIT {
        return Err(Error::SizeLimit {
            requested: size,
            limit: COUNT_LIMIT,
        }
        .into());
    }
    // quantifiers raise the bound, so every row is needed
    let table = CountTable::build(size, sig);
    let mut sampler = Sampler::with_stream(&table, seed, stream);
    Ok(sampler.dump(size, bound, count)?)
}

fn cmd_check(sig: &Signature, text: &str, format: Format) -> Out {
    let f = match Formula::parse(text, sig) {
        Ok(f) => f,
        Err(e) => {
            let msg = e.to_string();
            // still report on stdout, then fail
            match format {
                Format::Tsv => println!("valid\tfalse\nerror\t{msg}"),
                Format::Json => print!("{}", pretty(&json!({"valid": false, "error": msg}))),
            }
            return Err(e.into());
        }
    };
    let (size, open, closed) = (f.size(sig), f.openness(), f.is_sentence());
    match format {
        Format::Tsv => Ok(format!(
            "formula\t{f}\nsize\t{size}\nopenness\t{open}\nvalid\ttrue\nsentence\t{closed}\n"
        )),
        Format::Json => Ok(pretty(&json!({
            "formula": f.to_string(),
            "size": size,
            "openness": open,
            "valid": true,
            "sentence": closed,
        }))),
    }
}

fn cmd_enumerate(sig: &Signature, size: usize, bound: Openness) -> Out {
    if size > DEFAULT_SIZE_LIMIT {
        return Err(Error::SizeLimit {
            requested: size,
            limit: DEFAULT_SIZE_LIMIT,
        }
        .into());
    }
    let mut out = String::new();
    for f in enumerate(size, bound, sig)? {
        writeln!(out, "{f}").unwrap();
    }
    Ok(out)
}
