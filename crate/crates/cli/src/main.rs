use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use subsurf::enumerate::enumerate_subsurfaces;
use subsurf::fuzz::{glued_paths, twisted_paths, GluedSampler, TwistedConfig};
use subsurf::moves::{distance, Caps, DistanceMode};
use subsurf::paths::{decompose_path, path_metrics};
use subsurf::seifert::build_complex;
use subsurf::verify::{run_verification, Outcome, Parameters, LEMMAS};
use subsurf::{disk::render_svg, Subsurface};

const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "subsurf", version, about = "Subsurfaces of marked disks and torus knot fibers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DiskArgs {
    /// Number of marked points.
    #[arg(long = "N", default_value_t = 8)]
    n: u32,
    #[arg(long, default_value_t = 3)]
    max_chords: usize,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the JSON result to this file instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List canonical subsurfaces.
    Enumerate {
        #[command(flatten)]
        disk: DiskArgs,
        #[arg(long)]
        essential_only: bool,
        /// Print only the number of classes.
        #[arg(long)]
        count: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Run a lemma suite and report.
    Verify {
        /// Lemma id, or `list`.
        lemma: String,
        #[command(flatten)]
        disk: DiskArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Chord cap for distance searches.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 3)]
        q: u32,
        /// Override a lemma constant, `key=value`.
        #[arg(long, value_parser = parse_perturb)]
        perturb: Vec<(String, i64)>,
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Distance between two subsurfaces given as JSON text or files.
    Distance {
        from: String,
        to: String,
        #[arg(long, value_enum, default_value_t = Mode::Plain)]
        mode: Mode,
        /// Chord cap of the search.
        #[arg(long, default_value_t = 4)]
        cap: usize,
        #[arg(long)]
        max_depth: Option<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Torus knot complex summary and monodromy orbits.
    Monodromy {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 3)]
        q: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Decompose fuzzed glued paths into piece paths.
    Decompose {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 3)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        max_chords: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        max_length: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Generate seeded paths.
    FuzzPaths {
        #[arg(long, value_enum, default_value_t = PathKind::Twisted)]
        kind: PathKind,
        #[arg(long = "N", default_value_t = 8)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        max_chords: usize,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 3)]
        q: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Draw a subsurface given as JSON text or a file.
    Render {
        state: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Plain,
    EqClass,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathKind {
    Twisted,
    Glued,
}

fn parse_perturb(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or("expected key=value")?;
    let v = v.parse().map_err(|e| format!("bad value `{v}`: {e}"))?;
    Ok((k.to_string(), v))
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: USAGE, message: message.to_string() }
}

fn read_state(arg: &str) -> Result<Subsurface, Failure> {
    let text = if Path::new(arg).is_file() {
        fs::read_to_string(arg).map_err(|e| usage(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("bad subsurface: {e}")))
}

fn emit(out: &Output, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("values serialize");
    match &out.json {
        Some(path) => fs::write(path, text + "\n").map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            let _ = writeln!(io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Enumerate { disk, essential_only, count, out } => {
            if disk.n < 2 || disk.n % 2 == 1 {
                return Err(usage("N must be even and at least 2"));
            }
            let all = enumerate_subsurfaces(disk.n, disk.max_chords, essential_only);
            if count && out.json.is_none() {
                println!("{}", all.len());
                return Ok(PASS);
            }
            emit(&out, &json!({ "N": disk.n, "maxChords": disk.max_chords, "count": all.len(), "subsurfaces": all }))?;
            Ok(PASS)
        }
        Command::Verify { lemma, disk, seed, cap, samples, p, q, perturb, threads, out } => {
            if lemma == "list" {
                for l in LEMMAS {
                    println!("{:<22} {}", l.id, l.summary);
                }
                return Ok(PASS);
            }
            let params = Parameters {
                n: disk.n,
                max_chords: disk.max_chords,
                seed,
                cap,
                samples,
                p,
                q,
                perturb: perturb.into_iter().collect::<BTreeMap<_, _>>(),
                threads,
            };
            let report = run_verification(&lemma, &params).map_err(usage)?;
            emit(&out, &serde_json::to_value(&report).expect("reports serialize"))?;
            let line = match &report.outcome {
                Outcome::Pass => "PASS".to_string(),
                Outcome::Fail { .. } => "FAIL".to_string(),
                Outcome::Inexact { capped } => format!("INEXACT ({capped} capped)"),
            };
            eprintln!("{lemma}: {line} after {} instances", report.instances_checked);
            Ok(match report.outcome {
                Outcome::Pass => PASS,
                Outcome::Fail { .. } => FAIL,
                Outcome::Inexact { .. } => USAGE,
            })
        }
        Command::Distance { from, to, mode, cap, max_depth, out } => {
            let (a, b) = (read_state(&from)?, read_state(&to)?);
            let mode = match mode {
                Mode::Plain => DistanceMode::Plain,
                Mode::EqClass => DistanceMode::EqClass,
            };
            let r = distance(&a, &b, mode, Caps { max_chords: cap, max_depth }).map_err(usage)?;
            emit(&out, &serde_json::to_value(&r).expect("results serialize"))?;
            Ok(if r.exact { PASS } else { USAGE })
        }
        Command::Monodromy { p, q, out } => {
            let cx = build_complex(p, q).map_err(usage)?;
            let orbits: Vec<Vec<String>> =
                cx.orbits().iter().map(|o| o.iter().map(ToString::to_string).collect()).collect();
            emit(&out, &json!({ "summary": cx.summary(), "orbits": orbits }))?;
            Ok(PASS)
        }
        Command::Decompose { p, q, max_chords, seed, samples, max_length, out } => {
            let cx = build_complex(p, q).map_err(usage)?;
            if max_length == 0 {
                return Err(usage("max-length must be positive"));
            }
            let sampler = GluedSampler::new(&cx, max_chords);
            let mut rows = Vec::new();
            let mut code = PASS;
            for (i, path) in glued_paths(&sampler, seed, samples, max_length).iter().enumerate() {
                match decompose_path(path) {
                    Ok(d) => {
                        let pieces: Vec<Value> = d
                            .pieces
                            .iter()
                            .map(|(piece, dp)| {
                                let m = path_metrics(dp, 0).expect("zero rotation is valid");
                                json!({ "piece": piece.to_string(), "length": m.length, "eqLength": m.eq_length })
                            })
                            .collect();
                        rows.push(json!({
                            "index": i,
                            "length": path.len(),
                            "eqLengthSum": d.eq_length_sum,
                            "perStep": d.per_step,
                            "pieces": pieces,
                        }));
                    }
                    Err(e) => {
                        code = FAIL;
                        rows.push(json!({ "index": i, "error": e.to_string() }));
                    }
                }
            }
            emit(&out, &json!({ "p": p, "q": q, "seed": seed, "paths": rows }))?;
            Ok(code)
        }
        Command::FuzzPaths { kind, n, max_chords, p, q, seed, samples, out } => {
            let value = match kind {
                PathKind::Twisted => {
                    if n < 2 || n % 2 == 1 {
                        return Err(usage("N must be even and at least 2"));
                    }
                    let base = TwistedConfig::default();
                    let cfg =
                        TwistedConfig { n, max_chords, start_chords: max_chords.min(base.start_chords), ..base };
                    let paths: Vec<Value> = twisted_paths(&cfg, seed, samples)
                        .into_iter()
                        .map(|(path, rejected)| json!({ "path": path.to_json(cfg.twist), "rejected": rejected }))
                        .collect();
                    json!({ "kind": "twisted", "N": n, "seed": seed, "paths": paths })
                }
                PathKind::Glued => {
                    let cx = build_complex(p, q).map_err(usage)?;
                    let sampler = GluedSampler::new(&cx, max_chords);
                    json!({ "kind": "glued", "p": p, "q": q, "seed": seed, "paths": glued_paths(&sampler, seed, samples, 5) })
                }
            };
            emit(&out, &value)?;
            Ok(PASS)
        }
        Command::Render { state, svg } => {
            let s = read_state(&state)?;
            let doc = render_svg(&s);
            match svg {
                Some(path) => fs::write(&path, doc).map_err(|e| usage(format!("{}: {e}", path.display())))?,
                None => {
                    let _ = io::stdout().lock().write_all(doc.as_bytes());
                }
            }
            Ok(PASS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
