use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cdindex::constructions::{barycentric, gorenstein_generator, standard_poset, unzip, Recipe};
use cdindex::corpus::{span_corpus, Named};
use cdindex::exec::par_map;
use cdindex::linalg::Field;
use cdindex::poset::GradedPoset;
use cdindex::verify::{
    a_expression_span_rank, fibonacci_plus_two, verify, Check, Report, Status, VerifyOptions,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "cdindex",
    version,
    about = "Flag vectors, cd-indices and their inequalities for graded posets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// `q` or `fp:<p>`.
    #[arg(long, default_value = "q")]
    field: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    report: Format,
    /// Write output here instead of stdout.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Flag vectors, ab-index, b-expression, extended cd-index and alpha table.
    Compute {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run theorem checks on one poset.
    Verify {
        file: PathBuf,
        /// Comma-separated check names, or `all`.
        #[arg(long, default_value = "all")]
        checks: String,
        /// Maximum number of order ideals examined by corollary74.
        #[arg(long, default_value_t = 64)]
        ideal_cap: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Write a fixture poset file.
    Gen {
        /// Generator input, e.g. `1,2,1`.
        #[arg(long, conflicts_with_all = ["polytope", "bary", "unzip"])]
        alphas: Option<String>,
        /// `szero`, `simplex:<d>`, `cross:<d>`, `ngon:<m>`, `boolean:<d>`, `cube[:<d>]`, `flap`.
        #[arg(long, conflicts_with_all = ["bary", "unzip"])]
        polytope: Option<String>,
        /// Barycentric subdivision of a poset file.
        #[arg(long, conflicts_with = "unzip")]
        bary: Option<PathBuf>,
        /// Unzip a poset file along `--sigma` > `--tau`.
        #[arg(long, requires_all = ["sigma", "tau"])]
        unzip: Option<PathBuf>,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        tau: Option<String>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Run checks over every `.poset` file in a directory, or over the built-in corpora.
    Corpus {
        dir: Option<PathBuf>,
        #[arg(long, conflicts_with = "dir")]
        builtin: bool,
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long, default_value_t = 64)]
        ideal_cap: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn read_poset(path: &Path) -> Result<GradedPoset> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    GradedPoset::parse(&text).with_context(|| format!("{}", path.display()))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn options(common: &Common, ideal_cap: usize) -> Result<VerifyOptions> {
    Ok(VerifyOptions {
        field: Field::parse(&common.field)?,
        seed: common.seed,
        ideal_cap,
    })
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

fn generate(
    alphas: Option<String>,
    polytope: Option<String>,
    bary: Option<PathBuf>,
    unzip_file: Option<PathBuf>,
    sigma: Option<String>,
    tau: Option<String>,
) -> Result<GradedPoset> {
    if let Some(a) = alphas {
        let list: Vec<u64> = a
            .split(',')
            .map(|s| s.trim().parse().with_context(|| format!("bad alpha `{s}`")))
            .collect::<Result<_>>()?;
        return Ok(gorenstein_generator(&list)?.0);
    }
    if let Some(r) = polytope {
        return Ok(standard_poset(&r.parse::<Recipe>()?)?);
    }
    if let Some(f) = bary {
        return Ok(barycentric(&read_poset(&f)?));
    }
    if let Some(f) = unzip_file {
        let p = read_poset(&f)?;
        let s = p.index_of(sigma.as_deref().unwrap_or_default())?;
        let t = p.index_of(tau.as_deref().unwrap_or_default())?;
        return Ok(unzip(&p, s, t)?);
    }
    bail!("gen needs one of --alphas, --polytope, --bary, --unzip")
}

fn corpus_members(dir: Option<&Path>, builtin: bool) -> Result<Vec<(String, Result<GradedPoset>)>> {
    if builtin {
        let mut out = Vec::new();
        for n in 2..=4 {
            out.extend(
                span_corpus(n)?
                    .into_iter()
                    .map(|(name, p): Named| (name, Ok(p))),
            );
        }
        return Ok(out);
    }
    let Some(dir) = dir else {
        bail!("corpus needs a directory or --builtin");
    };
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "poset"))
        .collect();
    files.sort();
    Ok(files.iter().map(|f| (stem(f), read_poset(f))).collect())
}

fn run_corpus(
    members: Vec<(String, Result<GradedPoset>)>,
    checks: &[Check],
    opts: &VerifyOptions,
    format: Format,
) -> String {
    let reports: Vec<std::result::Result<Report, String>> =
        par_map(&members, |(name, p)| match p {
            Ok(p) => verify(p, name, checks, opts.clone()).map_err(|e| e.to_string()),
            Err(e) => Err(format!("{e:#}")),
        });
    let mut by_rank: BTreeMap<usize, Vec<GradedPoset>> = BTreeMap::new();
    for (_, p) in &members {
        if let Ok(p) = p {
            by_rank.entry(p.rank()).or_default().push(p.clone());
        }
    }
    let spans: Vec<(usize, std::result::Result<usize, String>, usize)> = by_rank
        .iter()
        .filter(|(n, _)| (2..=5).contains(*n))
        .map(|(&n, ps)| {
            (
                n,
                a_expression_span_rank(ps, n).map_err(|e| e.to_string()),
                fibonacci_plus_two(n),
            )
        })
        .collect();
    match format {
        Format::Json => {
            let files: Vec<_> = members
                .iter()
                .zip(&reports)
                .map(|((name, _), r)| match r {
                    Ok(r) => json!({"poset": name, "checks": r.checks}),
                    Err(e) => json!({"poset": name, "error": e}),
                })
                .collect();
            let spans: Vec<_> = spans
                .iter()
                .map(|(n, r, f)| match r {
                    Ok(rank) => json!({"rank": n, "spanRank": rank, "expected": f}),
                    Err(e) => json!({"rank": n, "error": e, "expected": f}),
                })
                .collect();
            serde_json::to_string_pretty(&json!({"files": files, "span": spans})).expect("json")
                + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            let width = members
                .iter()
                .map(|(n, _)| n.len())
                .max()
                .unwrap_or(4)
                .max(4);
            out.push_str(&format!("{:<width$}", "file"));
            for c in checks {
                out.push_str(&format!(" {:>6}", abbreviate(c.name())));
            }
            out.push('\n');
            for ((name, _), r) in members.iter().zip(&reports) {
                out.push_str(&format!("{name:<width$}"));
                match r {
                    Ok(r) => {
                        for c in &r.checks {
                            let s = match c.status {
                                Status::Pass => "pass",
                                Status::Fail => "FAIL",
                                Status::Skipped => "skip",
                            };
                            out.push_str(&format!(" {s:>6}"));
                        }
                    }
                    Err(e) => out.push_str(&format!(" error: {e}")),
                }
                out.push('\n');
            }
            for (n, r, f) in &spans {
                match r {
                    Ok(rank) => out.push_str(&format!(
                        "rank {n}: a-expression span {rank} (F_{} = {f})\n",
                        n + 2
                    )),
                    Err(e) => out.push_str(&format!("rank {n}: span error: {e}\n")),
                }
            }
            out
        }
    }
}

fn abbreviate(name: &str) -> String {
    name.chars().take(6).collect()
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Compute { file, common } => {
            let p = read_poset(&file)?;
            let report = verify(&p, &stem(&file), &[], options(&common, 0)?)?;
            emit(&common.output, &render(&report, common.report))
        }
        Command::Verify {
            file,
            checks,
            ideal_cap,
            common,
        } => {
            let p = read_poset(&file)?;
            let checks = Check::parse_list(&checks)?;
            let report = verify(&p, &stem(&file), &checks, options(&common, ideal_cap)?)?;
            emit(&common.output, &render(&report, common.report))
        }
        Command::Gen {
            alphas,
            polytope,
            bary,
            unzip,
            sigma,
            tau,
            output,
        } => {
            let p = generate(alphas, polytope, bary, unzip, sigma, tau)?;
            emit(&output, &p.to_text())
        }
        Command::Corpus {
            dir,
            builtin,
            checks,
            ideal_cap,
            common,
        } => {
            let checks = Check::parse_list(&checks)?;
            let opts = options(&common, ideal_cap)?;
            let members = corpus_members(dir.as_deref(), builtin)?;
            emit(
                &common.output,
                &run_corpus(members, &checks, &opts, common.report),
            )
        }
    }
}
