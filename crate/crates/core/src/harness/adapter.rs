//! External solver processes: command templates, detection, and
//! normalization of their solution files to the plain `name value` dialect.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::str::FromStr;
use std::time::Instant;

use super::HarnessError;
use crate::mipir::{emit_lp, parse_solution, MipModel};

pub const HIGHS_SCRIPT: &str = include_str!("../../scripts/highs_solve.py");

/// Environment variable holding the default command template.
pub const SOLVER_ENV: &str = "PPDSP_SOLVER_CMD";
/// Optional dialect for [`SOLVER_ENV`]; `plain` when unset.
pub const DIALECT_ENV: &str = "PPDSP_SOLVER_DIALECT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    /// `name value` lines, optionally headed by `# status:` and `# objective:`.
    Plain,
    /// CBC `solu` output: a status line, then `index name value reduced_cost`.
    Cbc,
    /// CPLEX-style XML with `<variable name=".." value=".."/>` elements.
    Xml,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::Plain => "plain",
            Dialect::Cbc => "cbc",
            Dialect::Xml => "xml",
        })
    }
}

impl FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Dialect::Plain),
            "cbc" => Ok(Dialect::Cbc),
            "xml" => Ok(Dialect::Xml),
            other => Err(format!("unknown solution dialect {other:?} (plain|cbc|xml)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverStatus {
    Optimal,
    Feasible,
    Infeasible,
    TimeLimit,
    Error,
}

impl SolverStatus {
    pub fn has_solution(self) -> bool {
        matches!(self, SolverStatus::Optimal | SolverStatus::Feasible)
    }
}

impl fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverStatus::Optimal => "Optimal",
            SolverStatus::Feasible => "Feasible",
            SolverStatus::Infeasible => "Infeasible",
            SolverStatus::TimeLimit => "TimeLimit",
            SolverStatus::Error => "Error",
        })
    }
}

impl FromStr for SolverStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "optimal" => Ok(SolverStatus::Optimal),
            "feasible" => Ok(SolverStatus::Feasible),
            "infeasible" => Ok(SolverStatus::Infeasible),
            "timelimit" | "time_limit" => Ok(SolverStatus::TimeLimit),
            "error" => Ok(SolverStatus::Error),
            other => Err(format!("unknown status {other:?}")),
        }
    }
}

/// How to run one solver. The template is split like a POSIX shell line
/// and may use `{model_path}`, `{solution_path}`, `{time_limit_s}` and
/// `{script_path}` (the bundled helper script, when the adapter has one).
#[derive(Debug, Clone, PartialEq)]
pub struct SolverAdapter {
    pub name: String,
    pub template: String,
    pub dialect: Dialect,
    pub workdir: Option<PathBuf>,
    pub script: Option<&'static str>,
}

impl SolverAdapter {
    pub fn new(name: &str, template: &str, dialect: Dialect) -> Result<Self, HarnessError> {
        if !template.contains("{model_path}") {
            return Err(HarnessError::Config(format!(
                "solver template {template:?} lacks {{model_path}}"
            )));
        }
        if shlex::split(template).is_none_or(|w| w.is_empty()) {
            return Err(HarnessError::Config(format!("cannot split solver template {template:?}")));
        }
        Ok(Self { name: name.into(), template: template.into(), dialect, workdir: None, script: None })
    }

    /// CBC reading the LP and writing its `solu` file.
    pub fn cbc(binary: &Path) -> Self {
        let bin = shlex::try_quote(&binary.to_string_lossy()).map(|s| s.into_owned()).unwrap_or_default();
        Self {
            name: "cbc".into(),
            template: format!(
                "{bin} {{model_path}} sec {{time_limit_s}} ratioGap 0 allowableGap 0 solve solu {{solution_path}}"
            ),
            dialect: Dialect::Cbc,
            workdir: None,
            script: None,
        }
    }

    /// HiGHS through its Python bindings and the bundled helper script.
    pub fn highs(python: &str) -> Self {
        Self {
            name: "highs".into(),
            template: format!("{python} {{script_path}} {{model_path}} {{solution_path}} {{time_limit_s}}"),
            dialect: Dialect::Plain,
            workdir: None,
            script: Some(HIGHS_SCRIPT),
        }
    }

    pub fn with_workdir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.workdir = Some(dir.into());
        self
    }

    /// Adapter from [`SOLVER_ENV`], if set.
    pub fn from_env() -> Result<Option<Self>, HarnessError> {
        let Ok(template) = std::env::var(SOLVER_ENV) else {
            return Ok(None);
        };
        let dialect = match std::env::var(DIALECT_ENV) {
            Ok(d) => d.parse().map_err(HarnessError::Config)?,
            Err(_) => Dialect::Plain,
        };
        Self::new("env", &template, dialect).map(Some)
    }

    /// First available of: [`SOLVER_ENV`], `cbc` on `PATH`, HiGHS via
    /// Python, the CBC binary bundled with the PuLP Python package.
    pub fn detect() -> Option<Self> {
        if let Ok(Some(a)) = Self::from_env() {
            return Some(a);
        }
        Self::detect_all().into_iter().next()
    }

    /// Every locally available solver, ignoring [`SOLVER_ENV`].
    pub fn detect_all() -> Vec<Self> {
        let mut found = Vec::new();
        if let Some(cbc) = find_on_path("cbc") {
            found.push(Self::cbc(&cbc));
        }
        if python_ok("import highspy") {
            found.push(Self::highs("python3"));
        }
        if found.iter().all(|a| a.name != "cbc") {
            if let Some(cbc) = pulp_cbc() {
                found.push(Self::cbc(&cbc));
            }
        }
        found
    }

    /// Looks an adapter up by name: `cbc`, `highs`, or `env`.
    pub fn by_name(name: &str) -> Result<Self, HarnessError> {
        match name {
            "env" => Self::from_env()?
                .ok_or_else(|| HarnessError::Config(format!("{SOLVER_ENV} is not set"))),
            "cbc" | "highs" => Self::detect_all()
                .into_iter()
                .find(|a| a.name == name)
                .ok_or_else(|| HarnessError::Config(format!("solver {name} not found"))),
            other => Err(HarnessError::Config(format!("unknown solver {other:?} (cbc|highs|env)"))),
        }
    }

    /// Argument vector with all placeholders substituted.
    pub fn command(
        &self,
        model_path: &Path,
        solution_path: &Path,
        time_limit_s: u64,
        script_path: Option<&Path>,
    ) -> Vec<String> {
        let words = shlex::split(&self.template).unwrap_or_default();
        let script = script_path.map(|p| p.to_string_lossy().into_owned()).unwrap_or_default();
        words
            .into_iter()
            .map(|w| {
                w.replace("{model_path}", &model_path.to_string_lossy())
                    .replace("{solution_path}", &solution_path.to_string_lossy())
                    .replace("{time_limit_s}", &time_limit_s.to_string())
                    .replace("{script_path}", &script)
            })
            .collect()
    }
}

impl fmt::Display for SolverAdapter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} dialect)", self.name, self.dialect)
    }
}

fn find_on_path(program: &str) -> Option<PathBuf> {
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path)
        .map(|dir| dir.join(program))
        .find(|p| p.is_file())
}

fn python_ok(code: &str) -> bool {
    Command::new("python3")
        .args(["-c", code])
        .output()
        .is_ok_and(|o| o.status.success())
}

fn pulp_cbc() -> Option<PathBuf> {
    let out = Command::new("python3")
        .args([
            "-c",
            "import os, pulp; print(os.path.join(os.path.dirname(pulp.__file__), \
             'solverdir', 'cbc', 'linux', 'i64', 'cbc'))",
        ])
        .output()
        .ok()?;
    let path = PathBuf::from(String::from_utf8_lossy(&out.stdout).trim());
    path.is_file().then_some(path)
}

/// Solver file reduced to a status, an objective and plain `name value` text.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedOutput {
    pub status: SolverStatus,
    pub objective: Option<f64>,
    pub plain: String,
}

pub fn normalize(dialect: Dialect, text: &str) -> Result<NormalizedOutput, HarnessError> {
    match dialect {
        Dialect::Plain => normalize_plain(text),
        Dialect::Cbc => normalize_cbc(text),
        Dialect::Xml => normalize_xml(text),
    }
}

fn normalize_plain(text: &str) -> Result<NormalizedOutput, HarnessError> {
    let mut status = None;
    let mut objective = None;
    for line in text.lines() {
        let Some(comment) = line.trim().strip_prefix('#') else { continue };
        if let Some((key, value)) = comment.split_once(':') {
            match key.trim() {
                "status" => {
                    status = Some(value.trim().parse().map_err(HarnessError::UnparsableOutput)?)
                }
                "objective" => {
                    objective = Some(value.trim().parse().map_err(|_| {
                        HarnessError::UnparsableOutput(format!("bad objective {:?}", value.trim()))
                    })?)
                }
                _ => {}
            }
        }
    }
    let has_values = text.lines().any(|l| {
        let l = l.trim();
        !l.is_empty() && !l.starts_with('#')
    });
    let status = status.unwrap_or(if has_values { SolverStatus::Feasible } else { SolverStatus::Error });
    Ok(NormalizedOutput { status, objective, plain: text.to_string() })
}

fn normalize_cbc(text: &str) -> Result<NormalizedOutput, HarnessError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| HarnessError::UnparsableOutput("empty CBC solution file".into()))?;
    let objective = header
        .split("objective value")
        .nth(1)
        .and_then(|v| v.trim().parse::<f64>().ok());
    let mut plain = String::new();
    for (i, line) in lines.enumerate() {
        let mut words: Vec<&str> = line.split_whitespace().collect();
        if words.first() == Some(&"**") {
            words.remove(0);
        }
        if words.is_empty() {
            continue;
        }
        if words.len() < 3 {
            return Err(HarnessError::UnparsableOutput(format!(
                "CBC solution line {}: {line:?}",
                i + 2
            )));
        }
        plain.push_str(words[1]);
        plain.push(' ');
        plain.push_str(words[2]);
        plain.push('\n');
    }
    let lower = header.to_ascii_lowercase();
    let status = if lower.starts_with("optimal") {
        SolverStatus::Optimal
    } else if lower.contains("infeasible") {
        SolverStatus::Infeasible
    } else if lower.starts_with("stopped") {
        if objective.is_some() && !plain.is_empty() {
            SolverStatus::Feasible
        } else {
            SolverStatus::TimeLimit
        }
    } else {
        SolverStatus::Error
    };
    if !status.has_solution() {
        plain.clear();
    }
    Ok(NormalizedOutput { status, objective, plain })
}

fn attribute<'a>(tag: &'a str, key: &str) -> Option<&'a str> {
    let pattern = format!("{key}=\"");
    let start = tag.find(&pattern)? + pattern.len();
    let len = tag[start..].find('"')?;
    Some(&tag[start..start + len])
}

fn normalize_xml(text: &str) -> Result<NormalizedOutput, HarnessError> {
    let mut status = None;
    let mut objective = None;
    let mut plain = String::new();
    for tag in text.split('<').skip(1) {
        let tag = tag.split('>').next().unwrap_or("");
        if tag.starts_with("header") {
            objective = attribute(tag, "objectiveValue").and_then(|v| v.parse().ok());
            status = attribute(tag, "solutionStatusString").map(str::to_ascii_lowercase);
        } else if tag.starts_with("variable ") {
            let (Some(name), Some(value)) = (attribute(tag, "name"), attribute(tag, "value")) else {
                return Err(HarnessError::UnparsableOutput(format!("bad XML variable <{tag}>")));
            };
            plain.push_str(&format!("{name} {value}\n"));
        }
    }
    let status = match status.as_deref() {
        Some(s) if s.contains("infeasible") => SolverStatus::Infeasible,
        Some(s) if s.contains("optimal") => SolverStatus::Optimal,
        Some(s) if s.contains("time limit") && !plain.is_empty() => SolverStatus::Feasible,
        Some(s) if s.contains("time limit") => SolverStatus::TimeLimit,
        Some(_) if !plain.is_empty() => SolverStatus::Feasible,
        Some(_) => SolverStatus::Error,
        None => return Err(HarnessError::UnparsableOutput("XML solution has no header".into())),
    };
    Ok(NormalizedOutput { status, objective, plain })
}

/// Result of one solver process on one model.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverRun {
    pub status: SolverStatus,
    pub objective: Option<f64>,
    /// Dense assignment when the status carries a solution.
    pub values: Option<Vec<f64>>,
    pub unknown_names: Vec<String>,
    pub wall_time_s: f64,
}

/// Emits `model` into a fresh temporary directory, runs the solver and
/// reads its solution back.
pub fn run_solver(
    model: &MipModel,
    adapter: &SolverAdapter,
    time_limit_s: u64,
) -> Result<SolverRun, HarnessError> {
    if time_limit_s < 1 {
        return Err(HarnessError::Config("time limit must be at least 1 s".into()));
    }
    let lp = emit_lp(model).map_err(HarnessError::Encode)?;
    let dir = match &adapter.workdir {
        Some(root) => tempfile::Builder::new().prefix("ppdsp-").tempdir_in(root)?,
        None => tempfile::Builder::new().prefix("ppdsp-").tempdir()?,
    };
    let model_path = dir.path().join("model.lp");
    let solution_path = dir.path().join("solution.txt");
    std::fs::write(&model_path, lp)?;
    let script_path = match adapter.script {
        Some(body) => {
            let p = dir.path().join("solver_script.py");
            std::fs::write(&p, body)?;
            Some(p)
        }
        None => None,
    };
    let argv = adapter.command(&model_path, &solution_path, time_limit_s, script_path.as_deref());
    log::debug!("running {:?}", argv);
    let started = Instant::now();
    let output = Command::new(&argv[0])
        .args(&argv[1..])
        .current_dir(dir.path())
        .output()
        .map_err(|e| HarnessError::Process {
            command: argv.join(" "),
            detail: e.to_string(),
        })?;
    let wall_time_s = started.elapsed().as_secs_f64();
    let text = match std::fs::read_to_string(&solution_path) {
        Ok(t) => t,
        Err(_) => {
            let stderr = String::from_utf8_lossy(&output.stderr);
            let tail: String = stderr.lines().rev().take(5).collect::<Vec<_>>().join(" | ");
            return Err(HarnessError::Process {
                command: argv.join(" "),
                detail: format!("exit {:?}, no solution file; stderr: {tail}", output.status.code()),
            });
        }
    };
    let normalized = normalize(adapter.dialect, &text)?;
    let (values, unknown_names) = if normalized.status.has_solution() {
        let parsed = parse_solution(&normalized.plain, model)
            .map_err(|e| HarnessError::UnparsableOutput(e.to_string()))?;
        (Some(parsed.values), parsed.unknown)
    } else {
        (None, Vec::new())
    };
    Ok(SolverRun {
        status: normalized.status,
        objective: normalized.objective,
        values,
        unknown_names,
        wall_time_s,
    })
}
