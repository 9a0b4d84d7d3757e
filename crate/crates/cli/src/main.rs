use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::Parser;
use ctx_core::pipeline::{execute, write_artifacts, Mode, Point, RunConfig};
use ctx_core::Error;

/// Builds Curtis-Tits unitary groups, their finite specializations and Cayley
/// graphs, and measures expansion.
#[derive(Parser, Debug)]
#[command(name = "ctx", version)]
struct Cli {
    /// lift | specialize | enumerate | graph | spectrum | cheeger | growth | covolume | full-report
    #[arg(long)]
    mode: Option<String>,
    /// Half-rank (the module has rank 2n).
    #[arg(long)]
    n: Option<usize>,
    /// Base field size, a prime power.
    #[arg(long)]
    q: Option<u64>,
    /// The root of unity has order q^s + 1.
    #[arg(long)]
    s: Option<u32>,
    /// Specialization point: root, 1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Element cap for group enumeration.
    #[arg(long)]
    limit: Option<usize>,
    /// Largest graph handled by the dense eigensolver.
    #[arg(long)]
    dense_bound: Option<usize>,
    /// Residual tolerance of the iterative eigensolver.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Series truncation length.
    #[arg(long = "L")]
    l: Option<usize>,
    /// Affine period for `growth` (default n + 1).
    #[arg(long)]
    m: Option<usize>,
    /// Basis vector for `lift`, e.g. e1 or f2.
    #[arg(long)]
    v: Option<String>,
    /// Transvection parameter for `lift`: 0, a, a^k or [c0,c1,...].
    #[arg(long)]
    lambda: Option<String>,
    /// Edge-list file for `cheeger`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "CTX_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
    /// key = value file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn read_config(path: &PathBuf) -> Result<HashMap<String, String>, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut out = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!(
                "{}:{}: expected key = value",
                path.display(),
                i + 1
            ))
        })?;
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

fn pick<T: FromStr>(
    flag: Option<T>,
    file: &HashMap<String, String>,
    key: &str,
) -> Result<Option<T>, Error> {
    if flag.is_some() {
        return Ok(flag);
    }
    file.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| Error::InvalidConfig(format!("bad value `{v}` for {key}")))
        })
        .transpose()
}

fn build_config(cli: Cli) -> Result<RunConfig, Error> {
    let file = match &cli.config {
        Some(p) => read_config(p)?,
        None => HashMap::new(),
    };
    let known = [
        "mode",
        "n",
        "q",
        "s",
        "a",
        "limit",
        "dense-bound",
        "tol",
        "max-iter",
        "seed",
        "L",
        "m",
        "v",
        "lambda",
        "input",
        "out",
        "cache-dir",
        "no-cache",
    ];
    if let Some(k) = file.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(Error::InvalidConfig(format!("unknown config key `{k}`")));
    }
    let mut cfg = RunConfig::default();
    if let Some(m) = pick(cli.mode, &file, "mode")? {
        cfg.mode = Mode::from_str(&m)?;
    }
    if let Some(a) = pick(cli.a, &file, "a")? {
        cfg.point = Point::from_str(&a)?;
    }
    cfg.n = pick(cli.n, &file, "n")?.unwrap_or(cfg.n);
    cfg.q = pick(cli.q, &file, "q")?.unwrap_or(cfg.q);
    cfg.s = pick(cli.s, &file, "s")?.unwrap_or(cfg.s);
    cfg.limit = pick(cli.limit, &file, "limit")?.unwrap_or(cfg.limit);
    cfg.dense_bound = pick(cli.dense_bound, &file, "dense-bound")?.unwrap_or(cfg.dense_bound);
    cfg.tol = pick(cli.tol, &file, "tol")?.unwrap_or(cfg.tol);
    cfg.max_iter = pick(cli.max_iter, &file, "max-iter")?.unwrap_or(cfg.max_iter);
    cfg.seed = pick(cli.seed, &file, "seed")?.unwrap_or(cfg.seed);
    cfg.l = pick(cli.l, &file, "L")?.unwrap_or(cfg.l);
    cfg.m = pick(cli.m, &file, "m")?;
    cfg.v = pick::<String>(cli.v, &file, "v")?
        .map(|v| v.parse())
        .transpose()?;
    cfg.lambda = pick(cli.lambda, &file, "lambda")?;
    cfg.input = pick(cli.input, &file, "input")?;
    cfg.out = pick(cli.out, &file, "out")?.unwrap_or(cfg.out);
    let no_cache = cli.no_cache || pick::<bool>(None, &file, "no-cache")?.unwrap_or(false);
    cfg.cache_dir = if no_cache {
        None
    } else {
        Some(pick(cli.cache_dir, &file, "cache-dir")?.unwrap_or_else(|| cfg.out.join("cache")))
    };
    Ok(cfg)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => 3,
        Error::Io(_) => 4,
        Error::InternalIdentity(_) | Error::SearchExhausted(_) | Error::NoConvergence { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_config(cli).and_then(|cfg| {
        let artifacts = execute(&cfg)?;
        let paths = write_artifacts(&cfg.out, &artifacts)?;
        Ok(paths)
    });
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
