use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use hyperhodge_cli::{
    parse_batch, render, run, run_batch, Format, JobSpec, Outcome, EXIT_VALIDATION,
};

#[derive(Parser)]
#[command(name = "hyperhodge", version, about = "GKZ systems, hypergeometric modules and irregular Hodge data")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Degree / box / grid bound, depending on the command.
    #[arg(long, global = true)]
    bound: Option<u32>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone, Default)]
struct Payload {
    /// JSON file holding the parameters.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Inline JSON parameters.
    #[arg(long)]
    params: Option<String>,
    /// Comma separated exponents, e.g. `0,1/2`.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Family matrix `n,m`.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Facets of the cone over the columns of A.
    Facets(Payload),
    /// Membership of beta in the (shifted) admissible region.
    Admissible(Payload),
    /// Emit a GKZ presentation (`which`: M, check_M, z_check_N, N).
    #[command(name = "gkz-emit")]
    GkzEmit(Payload),
    #[command(subcommand)]
    Gkz(GkzCmd),
    /// Fourier-Laplace transform of a presentation.
    Fl(Payload),
    /// Reduce the GKZ system to the hypergeometric presentation.
    Reduce(Payload),
    #[command(subcommand)]
    Hyp(HypCmd),
    /// Irregular Hodge numbers and filtration of a type (n,1) module.
    #[command(name = "irr-hodge")]
    IrrHodge(Payload),
    /// Hodge numbers in the regular case n = m.
    #[command(name = "regular-hodge")]
    RegularHodge(Payload),
    /// Connection matrices in the rescaled basis.
    Connection(Payload),
    /// Run a named verification case.
    Verify {
        case: String,
        #[command(flatten)]
        payload: Payload,
    },
    /// Run a JSON list of jobs concurrently.
    Batch { jobs: PathBuf },
}

#[derive(Subcommand)]
enum GkzCmd {
    Emit(Payload),
}

#[derive(Subcommand)]
enum HypCmd {
    Operator(Payload),
    Reduce(Payload),
    Check(Payload),
}

fn fail(msg: &str) -> ExitCode {
    eprintln!("hyperhodge: {msg}");
    ExitCode::from(EXIT_VALIDATION as u8)
}

fn split_list(s: &str) -> Vec<Value> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| json!(x))
        .collect()
}

fn payload_value(p: &Payload) -> Result<Value, String> {
    let mut obj = Map::new();
    if let Some(path) = &p.input {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        merge(&mut obj, serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?)?;
    }
    if let Some(s) = &p.params {
        merge(&mut obj, serde_json::from_str(s).map_err(|e| format!("--params: {e}"))?)?;
    }
    if let Some(a) = &p.alpha {
        obj.insert("alpha".into(), Value::Array(split_list(a)));
    }
    if let Some(b) = &p.beta {
        obj.insert("beta".into(), Value::Array(split_list(b)));
    }
    if let Some(f) = &p.family {
        let nm: Result<Vec<u64>, _> = f.split(',').map(|x| x.trim().parse::<u64>()).collect();
        obj.insert("family".into(), json!(nm.map_err(|_| "--family expects `n,m`".to_string())?));
    }
    Ok(Value::Object(obj))
}

fn merge(obj: &mut Map<String, Value>, v: Value) -> Result<(), String> {
    match v {
        Value::Object(m) => {
            obj.extend(m);
            Ok(())
        }
        other => {
            // a bare presentation or list is kept under `presentation`
            obj.insert("presentation".into(), other);
            Ok(())
        }
    }
}

fn extension(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Text => "txt",
    }
}

fn out_dir() -> Option<PathBuf> {
    std::env::var_os("HYPERHODGE_OUT_DIR").map(PathBuf::from)
}

fn emit(text: &str, target: Option<&Path>) -> Result<(), String> {
    match target {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            }
            fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn resolve_target(explicit: Option<&Path>, default_name: &str) -> Option<PathBuf> {
    match (explicit, out_dir()) {
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(dir)) => Some(dir.join(default_name)),
        (None, None) => None,
    }
}

fn report_error(o: &Outcome) {
    if let Some(e) = o.report.get("error") {
        let kind = e["kind"].as_str().unwrap_or("error");
        let msg = e["message"].as_str().unwrap_or("");
        eprintln!("hyperhodge: {kind}: {msg}");
    }
}

fn single(cli: &Cli, command: &str, payload: Value) -> ExitCode {
    let job = JobSpec {
        command: command.to_string(),
        params: payload,
        bound: cli.bound,
        format: cli.format,
        output: None,
    };
    let outcome = run(&job);
    report_error(&outcome);
    let text = render(command, &outcome.report, cli.format);
    let target = resolve_target(cli.out.as_deref(), &format!("{command}.{}", extension(cli.format)));
    if let Err(e) = emit(&text, target.as_deref()) {
        return fail(&e);
    }
    ExitCode::from(outcome.code as u8)
}

fn batch(cli: &Cli, path: &Path) -> ExitCode {
    let doc: Value = match fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|t| serde_json::from_str(&t).map_err(|e| e.to_string()))
    {
        Ok(v) => v,
        Err(e) => return fail(&format!("{}: {e}", path.display())),
    };
    let mut jobs = match parse_batch(&doc) {
        Ok(j) => j,
        Err(e) => return fail(&e.to_string()),
    };
    for j in &mut jobs {
        if j.bound.is_none() {
            j.bound = cli.bound;
        }
    }
    let outcomes = run_batch(&jobs);
    let mut worst = 0;
    let mut reports = Vec::with_capacity(jobs.len());
    for (i, (job, o)) in jobs.iter().zip(&outcomes).enumerate() {
        report_error(o);
        worst = worst.max(o.code);
        if let Some(name) = &job.output {
            let target = resolve_target(Some(Path::new(name)), name);
            let text = render(&job.command, &o.report, job.format);
            if let Err(e) = emit(&text, target.as_deref()) {
                eprintln!("hyperhodge: job {i}: {e}");
                worst = worst.max(EXIT_VALIDATION);
            }
        }
        reports.push(o.report.clone());
    }
    let summary = json!({
        "command": "batch",
        "version": hyperhodge::VERSION,
        "exit_code": worst,
        "jobs": reports,
    });
    let text = render("batch", &summary, cli.format);
    let target = resolve_target(cli.out.as_deref(), &format!("batch.{}", extension(cli.format)));
    if let Err(e) = emit(&text, target.as_deref()) {
        return fail(&e);
    }
    ExitCode::from(worst as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, payload) = match &cli.command {
        Cmd::Batch { jobs } => return batch(&cli, &jobs.clone()),
        Cmd::Facets(p) => ("facets", p.clone()),
        Cmd::Admissible(p) => ("admissible", p.clone()),
        Cmd::GkzEmit(p) | Cmd::Gkz(GkzCmd::Emit(p)) => ("gkz-emit", p.clone()),
        Cmd::Fl(p) => ("fl", p.clone()),
        Cmd::Reduce(p) | Cmd::Hyp(HypCmd::Reduce(p)) => ("reduce", p.clone()),
        Cmd::Hyp(HypCmd::Operator(p)) => ("hyp-operator", p.clone()),
        Cmd::Hyp(HypCmd::Check(p)) => ("hyp-check", p.clone()),
        Cmd::IrrHodge(p) => ("irr-hodge", p.clone()),
        Cmd::RegularHodge(p) => ("regular-hodge", p.clone()),
        Cmd::Connection(p) => ("connection", p.clone()),
        Cmd::Verify { case, payload } => {
            let mut v = match payload_value(payload) {
                Ok(v) => v,
                Err(e) => return fail(&e),
            };
            v["case"] = json!(case);
            return single(&cli, "verify", v);
        }
    };
    match payload_value(&payload) {
        Ok(v) => single(&cli, command, v),
        Err(e) => fail(&e),
    }
}
