//! Command-line interface over session files.
//!
//! Every subcommand loads one session file, resolves the named inputs, and
//! runs a single computation or check. Exit codes: 0 when the check passed
//! or the result was computed, 1 when a check failed and a witness was
//! printed, 2 when the answer is inconclusive or fuel ran out, 3 for input
//! errors (unreadable file, parse error, unknown name, bad flags). `--json`
//! switches stdout to one machine-readable object; `interact --json PATH`
//! writes the trace to a file instead.

use std::fs;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::conn::{check_dual_decomposability_connective, check_harmony};
use crate::frontend::trace::{emit_trace_json, status_str};
use crate::frontend::{self, resolve_multi, SessionFile};
use crate::interact::{
    check_dual_decomposability_paths, check_regularity, iseq, msd_orthogonal, InteractError,
    InteractionStatus,
};
use crate::multi::MultiError;
use crate::ortho::{Verdict, Workbench};
use crate::path::{paths_of, shuffle, DesignViews, Path};
use crate::reduce::{normalize, EvalOutcome, DEFAULT_FUEL};
use crate::term::{Design, Var};

#[derive(Parser)]
#[command(
    name = "ludics",
    version,
    about = "designs, interaction sequences, and harmony checks over session files"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normalize a design and print its normal form.
    Normalize {
        file: PathBuf,
        #[arg(long)]
        design: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        #[arg(long)]
        json: bool,
    },
    /// Decide orthogonality of a design (or multi-design) and an anti-design.
    Orthogonal {
        file: PathBuf,
        #[arg(long)]
        design: String,
        #[arg(long)]
        anti: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run an interaction sequence and print the transcript.
    Interact {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Write the JSON trace to this path.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Check the harmony condition of a connective.
    Harmony {
        file: PathBuf,
        #[arg(long)]
        conn: String,
        #[arg(long)]
        json: bool,
    },
    /// Check dual decomposability of a connective over its assigned benches.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        conn: String,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate the paths of a design up to a length bound.
    Paths {
        file: PathBuf,
        #[arg(long)]
        design: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long)]
        json: bool,
    },
    /// Shuffle two sequences and print every interleaving.
    Shuffle {
        file: PathBuf,
        /// Name of a sequence; give the flag exactly twice.
        #[arg(long = "seq", required = true)]
        seqs: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Check regularity of a workbench against its dual workbench.
    Regularity {
        file: PathBuf,
        #[arg(long)]
        workbench: String,
        #[arg(long)]
        dual: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Connective,
    Paths,
}

pub fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too; they are not input errors.
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            3
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, String> {
    match cli.cmd {
        Cmd::Normalize { file, design, fuel, json } => cmd_normalize(&file, &design, fuel, json),
        Cmd::Orthogonal { file, design, anti, fuel, json } => {
            cmd_orthogonal(&file, &design, &anti, fuel, json)
        }
        Cmd::Interact { file, left, right, json, fuel } => {
            cmd_interact(&file, &left, &right, json.as_deref(), fuel)
        }
        Cmd::Harmony { file, conn, json } => cmd_harmony(&file, &conn, json),
        Cmd::Decompose { file, conn, mode, max_len, fuel, json } => {
            cmd_decompose(&file, &conn, mode, max_len, fuel, json)
        }
        Cmd::Paths { file, design, max_len, json } => cmd_paths(&file, &design, max_len, json),
        Cmd::Shuffle { file, seqs, json } => cmd_shuffle(&file, &seqs, json),
        Cmd::Regularity { file, workbench, dual, fuel, max_len, json } => {
            cmd_regularity(&file, &workbench, &dual, fuel, max_len, json)
        }
    }
}

fn load(path: &FsPath) -> Result<SessionFile, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    frontend::parse(&text).map_err(|e| format!("{}:{e}", path.display()))
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Inconclusive => 2,
    }
}

fn cmd_normalize(file: &FsPath, design: &str, fuel: u64, json: bool) -> Result<u8, String> {
    let session = load(file)?;
    let d = session
        .design(design)
        .ok_or_else(|| format!("no design named `{design}`"))?;
    match normalize(d, fuel) {
        EvalOutcome::Converged(n) => {
            if json {
                println!("{}", json!({ "outcome": "converged", "design": n.to_string() }));
            } else {
                println!("{n}");
            }
            Ok(0)
        }
        EvalOutcome::Omega => {
            if json {
                println!("{}", json!({ "outcome": "omega" }));
            } else {
                println!("omega");
            }
            Ok(0)
        }
        EvalOutcome::FuelExhausted { steps } => {
            if json {
                println!("{}", json!({ "outcome": "fuel_exhausted", "steps": steps }));
            } else {
                println!("fuel exhausted after {steps} steps");
            }
            Ok(2)
        }
    }
}

fn cmd_orthogonal(
    file: &FsPath,
    design: &str,
    anti: &str,
    fuel: u64,
    json: bool,
) -> Result<u8, String> {
    let session = load(file)?;
    let d = resolve_multi(&session, design)?;
    let e = resolve_multi(&session, anti)?;
    // The transcript engine reports fuel exactly but wants standard
    // members; designs with internal cuts fall back to cut-normalization.
    let verdict = match iseq(&d, &e, fuel) {
        Ok(run) => match run.status {
            InteractionStatus::Converged => Some(true),
            InteractionStatus::Omega => Some(false),
            InteractionStatus::FuelExhausted => None,
        },
        Err(InteractError::NotStandard(_)) => match msd_orthogonal(&d, &e, fuel) {
            Ok(b) => Some(b),
            Err(InteractError::Multi(MultiError::Substitution(s)))
                if s.contains("fuel exhausted") =>
            {
                None
            }
            Err(e) => return Err(e.to_string()),
        },
        Err(e) => return Err(e.to_string()),
    };
    match verdict {
        Some(b) => {
            if json {
                println!("{}", json!({ "orthogonal": b }));
            } else {
                println!("orthogonal: {b}");
            }
            Ok(if b { 0 } else { 1 })
        }
        None => {
            if json {
                println!("{}", json!({ "orthogonal": null, "outcome": "fuel_exhausted" }));
            } else {
                println!("fuel exhausted");
            }
            Ok(2)
        }
    }
}

fn cmd_interact(
    file: &FsPath,
    left: &str,
    right: &str,
    json: Option<&FsPath>,
    fuel: u64,
) -> Result<u8, String> {
    let session = load(file)?;
    let d = resolve_multi(&session, left)?;
    let e = resolve_multi(&session, right)?;
    let run = iseq(&d, &e, fuel).map_err(|e| e.to_string())?;
    let rendered: Vec<String> = run.actions.iter().map(|a| a.to_string()).collect();
    println!("[{}]", rendered.join(", "));
    println!("status: {}, steps: {}", status_str(run.status), run.steps);
    if let Some(out) = json {
        fs::write(out, emit_trace_json(&run)).map_err(|e| format!("{}: {e}", out.display()))?;
    }
    Ok(match run.status {
        InteractionStatus::Converged => 0,
        InteractionStatus::Omega => 1,
        InteractionStatus::FuelExhausted => 2,
    })
}

fn cmd_harmony(file: &FsPath, conn: &str, json: bool) -> Result<u8, String> {
    let session = load(file)?;
    let c = session
        .connective(conn)
        .ok_or_else(|| format!("no connective named `{conn}`"))?;
    let rep = check_harmony(c);
    if json {
        let strings = |acts: &[crate::conn::NegAction]| -> Vec<String> {
            acts.iter().map(|a| a.to_string()).collect()
        };
        println!(
            "{}",
            json!({
                "connective": conn,
                "inversion": rep.inversion,
                "recovery": rep.recovery,
                "harmony": rep.harmony,
                "missing_from_intro": strings(&rep.missing_from_intro),
                "missing_from_elim": strings(&rep.missing_from_elim),
            })
        );
    } else {
        println!("inversion: {}, recovery: {}", rep.inversion, rep.recovery);
        for a in &rep.missing_from_intro {
            println!("  elimination {a} has no introduction counterpart");
        }
        for a in &rep.missing_from_elim {
            println!("  introduction {a} has no elimination counterpart");
        }
        println!("harmony: {}", rep.harmony);
    }
    Ok(if rep.harmony { 0 } else { 1 })
}

fn cmd_decompose(
    file: &FsPath,
    conn: &str,
    mode: Mode,
    max_len: usize,
    fuel: u64,
    json: bool,
) -> Result<u8, String> {
    let session = load(file)?;
    let c = session
        .connective(conn)
        .ok_or_else(|| format!("no connective named `{conn}`"))?;
    let (negs, poss) = session.assignment(conn).ok_or_else(|| {
        format!("no bench assignment for `{conn}`: add `assign {conn} neg {{..}} pos {{..}}`")
    })?;
    let resolve = |names: &[String]| -> Vec<Workbench> {
        names
            .iter()
            .map(|b| session.bench(b).expect("assignments are validated at parse").clone())
            .collect()
    };
    let (neg, pos) = (resolve(negs), resolve(poss));
    let (label, elim, intro, verdict, caveat, notes) = match mode {
        Mode::Connective => {
            let r = check_dual_decomposability_connective(c, &neg, &pos, fuel)
                .map_err(|e| e.to_string())?;
            (r.label, r.elim_side, r.intro_side, r.verdict, r.caveat, r.notes)
        }
        Mode::Paths => {
            let r = check_dual_decomposability_paths(c, &neg, &pos, fuel, max_len)
                .map_err(|e| e.to_string())?;
            (r.label, r.elim_side, r.intro_side, r.verdict, r.caveat, r.notes)
        }
    };
    if json {
        println!(
            "{}",
            json!({
                "label": label,
                "elim_side": elim.to_string(),
                "intro_side": intro.to_string(),
                "verdict": verdict.to_string(),
                "notes": notes,
                "caveat": caveat,
            })
        );
    } else {
        println!("{label}: elimination {elim}, introduction {intro}, overall {verdict}");
        for n in &notes {
            println!("  {n}");
        }
        println!("note: {caveat}");
    }
    Ok(verdict_code(verdict))
}

fn cmd_paths(file: &FsPath, design: &str, max_len: usize, json: bool) -> Result<u8, String> {
    let session = load(file)?;
    let views = if let Some(d) = session.design(design) {
        let built = if d.is_positive() {
            DesignViews::of_positive(d)
        } else {
            DesignViews::of_negative(d)
        };
        built.map_err(|e| e.to_string())?
    } else if let Some(m) = session.multi(design) {
        let bindings: Vec<(Var, Design)> =
            m.bindings().iter().map(|(x, n)| (x.clone(), n.clone())).collect();
        DesignViews::build(m.positive(), &bindings).map_err(|e| e.to_string())?
    } else {
        return Err(format!("no design or multi-design named `{design}`"));
    };
    let set = paths_of(&views, max_len);
    if json {
        let paths: Vec<String> = set.iter().map(|p| p.to_string()).collect();
        println!("{}", json!({ "paths": paths, "count": set.len() }));
    } else {
        for p in &set {
            println!("{p}");
        }
        println!("count: {}", set.len());
    }
    Ok(0)
}

fn cmd_shuffle(file: &FsPath, seqs: &[String], json: bool) -> Result<u8, String> {
    let [pname, qname] = seqs else {
        return Err("give exactly two --seq names".into());
    };
    let session = load(file)?;
    let lookup = |name: &str| -> Result<Path, String> {
        let s = session
            .sequence(name)
            .ok_or_else(|| format!("no sequence named `{name}`"))?;
        Path::try_new(s.clone()).map_err(|e| format!("`{name}` is not a path: {e}"))
    };
    let (p, q) = (lookup(pname)?, lookup(qname)?);
    match shuffle(&p, &q) {
        None => {
            if json {
                println!("{}", json!({ "defined": false }));
            } else {
                println!(
                    "undefined: shuffling needs same-polarity paths whose first \
                     positive actions agree"
                );
            }
            Ok(1)
        }
        Some(set) => {
            if json {
                let paths: Vec<String> = set.iter().map(|p| p.to_string()).collect();
                println!("{}", json!({ "defined": true, "paths": paths, "count": set.len() }));
            } else {
                for r in &set {
                    println!("{r}");
                }
                println!("count: {}", set.len());
            }
            Ok(0)
        }
    }
}

fn cmd_regularity(
    file: &FsPath,
    workbench: &str,
    dual: &str,
    fuel: u64,
    max_len: usize,
    json: bool,
) -> Result<u8, String> {
    let session = load(file)?;
    let w = session
        .bench(workbench)
        .ok_or_else(|| format!("no bench named `{workbench}`"))?;
    let v = session
        .bench(dual)
        .ok_or_else(|| format!("no bench named `{dual}`"))?;
    let rep = check_regularity(w, v, fuel, max_len).map_err(|e| e.to_string())?;
    if json {
        println!(
            "{}",
            json!({
                "label": rep.label,
                "generator_paths": rep.generator_paths.to_string(),
                "dual_generator_paths": rep.dual_generator_paths.to_string(),
                "shuffle_closure": rep.shuffle_closure.to_string(),
                "verdict": rep.verdict.to_string(),
                "definitive": rep.definitive,
                "notes": rep.notes,
                "caveat": rep.caveat,
            })
        );
    } else {
        println!(
            "{}: generator paths {}, dual generator paths {}, shuffle closure {}",
            rep.label, rep.generator_paths, rep.dual_generator_paths, rep.shuffle_closure
        );
        for n in &rep.notes {
            println!("  {n}");
        }
        let scope = if rep.definitive { "definitive" } else { "bounded check" };
        println!("verdict: {} ({scope})", rep.verdict);
    }
    Ok(verdict_code(rep.verdict))
}
