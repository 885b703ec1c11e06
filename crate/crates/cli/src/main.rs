use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use mpres::cover::verify_cover;
use mpres::fiber::fiber_product;
use mpres::io::{self, Loader, Saved};
use mpres::random::random_cover_suite;
use mpres::{
    barycentric_subdivision, betti_numbers, build_cover, build_tower, homology_basis, resolve, star_subdivision,
    Prime, ResolutionStage, Simplex, SimplicialComplex, TowerStage, VerificationReport,
};

#[derive(Parser)]
#[command(name = "mpres", version, about = "Mod-p covers, equivariant resolutions and pull-back towers")]
struct Cli {
    /// Format of verification reports.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    report: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Mod-p Betti numbers of a complex.
    Homology {
        #[arg(long)]
        prime: u64,
        /// Only this dimension.
        #[arg(long)]
        dim: Option<usize>,
        /// Reduced homology.
        #[arg(long)]
        reduced: bool,
        input: PathBuf,
    },
    /// Regular cover with group H_1(-; F_p).
    Cover {
        #[arg(long)]
        prime: u64,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Equivariant resolution of a complex.
    Resolve {
        #[arg(long)]
        prime: u64,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Emit the unresolved identity stage instead (a negative control).
        #[arg(long)]
        unresolved: bool,
    },
    /// Fiber product of two maps with a common codomain.
    Pullback {
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Stages 1..=depth of the pull-back tower.
    Tower {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Use the unresolved identity first stage (a negative control; depth 1 only).
        #[arg(long)]
        unresolved: bool,
    },
    /// Barycentric subdivision, or the stellar subdivision at one simplex.
    Subdivide {
        input: PathBuf,
        /// Vertices of the simplex to star, comma separated.
        #[arg(long, value_delimiter = ',')]
        star: Option<Vec<usize>>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Re-run the checks of a saved cover, resolution or tower, or the
    /// random cover suite.
    Verify {
        #[arg(required_unless_present = "random")]
        dir: Option<PathBuf>,
        #[arg(long, conflicts_with = "dir")]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Complexes per prime.
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

/// What a command produced: named reports, or plain lines.
enum Outcome {
    Lines(Vec<String>, serde_json::Value),
    Reports(Vec<(String, VerificationReport)>),
}

fn prime(p: u64) -> Result<Prime> {
    Ok(Prime::new(p)?)
}

fn load(path: &Path) -> Result<Arc<SimplicialComplex>> {
    let k = io::read_complex(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Arc::new(k))
}

fn resolution_reports(s: &ResolutionStage) -> Vec<(String, VerificationReport)> {
    vec![("resolution".into(), s.report.clone())]
}

fn tower_reports(stages: &[TowerStage]) -> Vec<(String, VerificationReport)> {
    stages.iter().map(|s| (format!("stage {}", s.index), s.report.clone())).collect()
}

fn run(cmd: Command) -> Result<Outcome> {
    Ok(match cmd {
        Command::Homology { prime: p, dim, reduced, input } => {
            let p = prime(p)?;
            let k = load(&input)?;
            match dim {
                Some(d) => {
                    let r = homology_basis(&k, d, p, reduced).rank();
                    Outcome::Lines(vec![format!("rank {r}")], json!({"p": p.get(), "dim": d, "rank": r}))
                }
                None => {
                    let mut b = betti_numbers(&k, p);
                    if reduced && !b.is_empty() {
                        b[0] -= 1;
                    }
                    let lines = b.iter().enumerate().map(|(d, r)| format!("H{d} rank {r}")).collect();
                    Outcome::Lines(lines, json!({"p": p.get(), "betti": b}))
                }
            }
        }
        Command::Cover { prime: p, input, output } => {
            let p = prime(p)?;
            let c = build_cover(&load(&input)?, p)?;
            if let Some(dir) = output {
                io::write_cover(&dir, &c)?;
            }
            Outcome::Reports(vec![("cover".into(), verify_cover(&c))])
        }
        Command::Resolve { prime: p, input, output, unresolved } => {
            let p = prime(p)?;
            let k = load(&input)?;
            let s = if unresolved { ResolutionStage::identity(&k, p) } else { resolve(&k, p)? };
            if let Some(dir) = output {
                io::write_resolution(&dir, &s)?;
            }
            Outcome::Reports(resolution_reports(&s))
        }
        Command::Pullback { left, right, output } => {
            let mut loader = Loader::new();
            let f = loader.map(&left)?;
            let g = loader.map(&right)?;
            let fp = fiber_product(&f, &g)?;
            std::fs::create_dir_all(&output)?;
            io::write_complex(&output.join("complex.json"), &fp.complex)?;
            io::write_complex(&output.join("left.json"), f.domain())?;
            io::write_complex(&output.join("right.json"), g.domain())?;
            io::write_map(&output.join("to_left.json"), &fp.to_left, "complex.json", "left.json")?;
            io::write_map(&output.join("to_right.json"), &fp.to_right, "complex.json", "right.json")?;
            let fv = fp.complex.f_vector();
            Outcome::Lines(vec![format!("f-vector {fv:?}")], json!({"f_vector": fv}))
        }
        Command::Tower { prime: p, depth, input, output, unresolved } => {
            let p = prime(p)?;
            let y = load(&input)?;
            let stages = if unresolved {
                if depth != 1 {
                    bail!("--unresolved builds only the first stage; use --depth 1");
                }
                vec![TowerStage::identity(&y, p)]
            } else {
                build_tower(&y, p, depth)?
            };
            if let Some(dir) = output {
                io::write_tower(&dir, &y, &stages)?;
            }
            Outcome::Reports(tower_reports(&stages))
        }
        Command::Subdivide { input, star, output } => {
            let k = load(&input)?;
            let s = match star {
                Some(v) => {
                    let sigma = Simplex::new(v)?;
                    if !k.contains(&sigma) {
                        bail!("{sigma:?} is not a simplex of {}", input.display());
                    }
                    star_subdivision(&k, &sigma)?
                }
                None => barycentric_subdivision(&k),
            };
            std::fs::create_dir_all(&output)?;
            io::write_complex(&output.join("coarse.json"), &k)?;
            io::write_complex(&output.join("fine.json"), &s.fine)?;
            io::write_subdivision(&output.join("subdivision.json"), &s, "fine.json", "coarse.json")?;
            let fv = s.fine.f_vector();
            Outcome::Lines(vec![format!("f-vector {fv:?}")], json!({"f_vector": fv}))
        }
        Command::Verify { dir, random, seed, count } => {
            if random {
                Outcome::Reports(vec![(format!("random covers, seed {seed}"), random_cover_suite(seed, count)?)])
            } else {
                let dir = dir.expect("clap requires a directory");
                match io::read_saved(&dir)? {
                    Saved::Cover(c) => Outcome::Reports(vec![("cover".into(), verify_cover(&c))]),
                    Saved::Resolution(s) => Outcome::Reports(resolution_reports(&s)),
                    Saved::Tower(t) => Outcome::Reports(tower_reports(&t)),
                }
            }
        }
    })
}

fn render(outcome: &Outcome, format: Format) -> (String, bool) {
    match (outcome, format) {
        (Outcome::Lines(lines, _), Format::Text) => (lines.join("\n"), true),
        (Outcome::Lines(_, v), Format::Json) => (serde_json::to_string_pretty(v).expect("json"), true),
        (Outcome::Reports(rs), Format::Text) => {
            let text = rs.iter().map(|(name, r)| format!("== {name}\n{}", r.to_text().trim_end())).collect::<Vec<_>>();
            (text.join("\n"), rs.iter().all(|(_, r)| r.passed()))
        }
        (Outcome::Reports(rs), Format::Json) => {
            let passed = rs.iter().all(|(_, r)| r.passed());
            let v = if rs.len() == 1 {
                serde_json::to_value(&rs[0].1).expect("json")
            } else {
                json!(rs.iter().map(|(name, r)| json!({"name": name, "report": r})).collect::<Vec<_>>())
            };
            (serde_json::to_string_pretty(&v).expect("json"), passed)
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("MPRES_THREADS") {
        let n: usize = v.parse().with_context(|| format!("MPRES_THREADS={v} is not a number"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads().and_then(|()| run(cli.command));
    match result {
        Ok(outcome) => {
            let (text, passed) = render(&outcome, cli.report);
            println!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
