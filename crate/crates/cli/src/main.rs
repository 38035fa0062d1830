mod source;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use verlinde::fusion::{
    involution_from_conjugation, neg_scan, normalized_ring, verlinde, FusionRing, Involution,
    NegScan, VerlindeReport,
};
use verlinde::kacpeterson::equiv_check;
use verlinde::modular::{exterior_t, gauss_sum_identity, sl2z_check, t_matrix_cyclic, ModularDatum};
use verlinde::smatrix::{default_unit, orthogonality_check, Label, ScaledMatrix};

use source::{load_matrix, parse_mult, Source, UsageError};

#[derive(Parser, Debug)]
#[command(name = "verlinde", version, about = "Exact fusion rings from cyclotomic S-matrices")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for the parallel kernels.
    #[arg(long, env = "VERLINDE_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a matrix.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Structure constants of a matrix as a ring.
    Fusion {
        /// Matrix JSON file, `-` for stdin, or a gen-spec such as `smatrix:e=4,exterior=2`.
        #[arg(long = "in")]
        input: String,
        /// A label such as `0,1` or `(0,1)x(2)`, or `auto`.
        #[arg(long, default_value = "auto")]
        unit: String,
        /// Apply row phases and column signs first.
        #[arg(long)]
        normalize: bool,
    },
    /// Run one verification; exit status 1 when it fails.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[command(flatten)]
        params: Params,
    },
    /// Scans over parameter ranges.
    #[command(subcommand)]
    Scan(ScanCommand),
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// The e×e DFT matrix or one of its exterior powers.
    Smatrix {
        #[arg(long)]
        e: u32,
        /// Exterior power.
        #[arg(long, alias = "n")]
        exterior: Option<usize>,
    },
    /// A Fourier block for G(e,1,n).
    Fourier {
        #[arg(long)]
        e: u32,
        #[arg(long)]
        m: u32,
        /// Comma-separated block sizes.
        #[arg(long)]
        mult: String,
        /// Leave out the ε signs on rows and columns.
        #[arg(long)]
        no_eps: bool,
    },
    /// A Kac-Peterson matrix.
    Kp {
        #[arg(long = "type", value_enum)]
        kind: KpType,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        rank: Option<usize>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KpType {
    A1,
    Cl,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Integrality,
    BasedRing,
    Orthogonality,
    Modular,
    KpEquiv,
}

#[derive(Subcommand, Debug)]
enum ScanCommand {
    /// Which exterior powers have negative constants under every sign choice.
    Neg {
        #[arg(long, default_value_t = 50)]
        max_basis: usize,
    },
}

#[derive(Args, Debug, Default)]
struct Params {
    #[arg(long)]
    e: Option<u32>,
    /// Exterior power.
    #[arg(long)]
    n: Option<usize>,
    /// Fourier block parameter; requires --mult.
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    mult: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    level: Option<u32>,
    /// Matrix JSON file, `-` or gen-spec instead of --e/--n/--m.
    #[arg(long = "in")]
    input: Option<String>,
    #[arg(long, default_value = "auto")]
    unit: String,
    /// based-ring: check the raw ring without normalizing.
    #[arg(long)]
    raw: bool,
}

impl Params {
    fn matrix(&self) -> Result<ScaledMatrix, UsageError> {
        if let Some(input) = &self.input {
            return load_matrix(input);
        }
        let e = self.e.ok_or_else(|| UsageError("--e or --in is required".into()))?;
        let src = match (&self.mult, self.m) {
            (Some(mult), m) => Source::Fourier {
                e,
                m: m.unwrap_or(1),
                mult: parse_mult(mult)?,
                eps: true,
            },
            (None, Some(_)) => return Err(UsageError("--m needs --mult".into())),
            (None, None) => Source::Smatrix { e, exterior: self.n },
        };
        src.build()
    }
}

fn resolve_unit(m: &ScaledMatrix, unit: &str) -> Result<usize, UsageError> {
    if unit == "auto" {
        return Ok(default_unit(m)?);
    }
    let label: Label = unit.parse()?;
    m.index_of(&label)
        .ok_or_else(|| UsageError(format!("unit {label} is not a label of the matrix")))
}

/// Printed text and whether the command succeeded.
struct Outcome {
    text: String,
    ok: bool,
}

fn json_text<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn matrix_text(m: &ScaledMatrix, format: Format) -> String {
    match format {
        Format::Json => json_text(m),
        Format::Csv => {
            let mut out = String::from("row,col,value\n");
            for i in 0..m.size() {
                for j in 0..m.size() {
                    let _ = writeln!(
                        out,
                        "{},{},{}",
                        csv_field(&m.labels[i].to_string()),
                        csv_field(&m.labels[j].to_string()),
                        csv_field(&m.entry(i, j).to_string())
                    );
                }
            }
            out
        }
        Format::Pretty => {
            let mut out = format!(
                "{} x {} matrix, scalar {} * {}^(-{}/2)\n",
                m.size(),
                m.size(),
                m.extra_scalar,
                m.base,
                m.scale_exp
            );
            for i in 0..m.size() {
                let row: Vec<String> = (0..m.size()).map(|j| m.entry(i, j).to_string()).collect();
                let _ = writeln!(out, "{}: {}", m.labels[i], row.join(" | "));
            }
            out
        }
    }
}

fn ring_text(r: &FusionRing, format: Format) -> String {
    match format {
        Format::Json => json_text(r),
        Format::Csv => {
            let mut out = String::from("i,j,k,N\n");
            for (i, j, k, n) in r.entries() {
                let _ = writeln!(out, "{i},{j},{k},{n}");
            }
            out
        }
        Format::Pretty => r.to_string(),
    }
}

/// Generic report output: JSON object, `key,value` CSV, or `key: value` lines.
fn report_text(v: &Value, format: Format) -> String {
    match format {
        Format::Json => json_text(v),
        Format::Csv | Format::Pretty => {
            let mut out = if format == Format::Csv { String::from("key,value\n") } else { String::new() };
            if let Value::Object(map) = v {
                for (k, x) in map {
                    let s = match x {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    if format == Format::Csv {
                        let _ = writeln!(out, "{},{}", csv_field(k), csv_field(&s));
                    } else {
                        let _ = writeln!(out, "{k}: {s}");
                    }
                }
            }
            out
        }
    }
}

fn scan_text(scan: &NegScan, format: Format) -> String {
    match format {
        Format::Json => json_text(scan),
        Format::Csv | Format::Pretty => {
            let sep = if format == Format::Csv { "," } else { " " };
            let mut out = String::new();
            let head = ["e", "n", "basis", "has_negative", "by_characters", "predicate", "agrees"];
            let _ = writeln!(out, "{}", head.join(sep));
            for r in &scan.rows {
                let row = [
                    r.e.to_string(),
                    r.n.to_string(),
                    r.basis.to_string(),
                    r.has_negative.to_string(),
                    r.by_characters.to_string(),
                    r.predicate.to_string(),
                    r.agrees.to_string(),
                ];
                let _ = writeln!(out, "{}", row.join(sep));
            }
            if format == Format::Pretty {
                let _ = writeln!(out, "all agree: {}", scan.all_agree);
                let _ = writeln!(out, "strategies agree: {}", scan.strategies_agree);
            }
            out
        }
    }
}

fn fusion_ring(m: &ScaledMatrix, unit: usize, normalize: bool) -> Result<(VerlindeReport, Option<Value>), UsageError> {
    if normalize {
        let (report, norm) = normalized_ring(m, unit)?;
        let meta = json!({
            "phase_root": norm.phase_root.to_string(),
            "phase_direction": norm.phase_direction,
        });
        Ok((report, Some(meta)))
    } else {
        let mut report = verlinde(m, unit)?;
        if let Involution::Found(perm) = involution_from_conjugation(m) {
            report.ring.involution = Some(perm);
        }
        Ok((report, None))
    }
}

fn run_fusion(input: &str, unit: &str, normalize: bool, format: Format) -> Result<Outcome, UsageError> {
    let m = load_matrix(input)?;
    let unit = resolve_unit(&m, unit)?;
    let (report, meta) = fusion_ring(&m, unit, normalize)?;
    if !report.all_integer {
        eprintln!("{} structure constants are not integers", report.violation_count);
    }
    if let Some(meta) = meta {
        eprintln!("normalization: {meta}");
    }
    Ok(Outcome {
        text: ring_text(&report.ring, format),
        ok: report.all_integer,
    })
}

fn run_verify(check: Check, p: &Params, format: Format) -> Result<Outcome, UsageError> {
    let report = match check {
        Check::Integrality => {
            let m = p.matrix()?;
            let r = verlinde(&m, resolve_unit(&m, &p.unit)?)?;
            let witnesses: Vec<Value> = r
                .violations
                .iter()
                .take(10)
                .map(|v| json!({"i": v.i, "j": v.j, "k": v.k, "value": v.value.to_string()}))
                .collect();
            json!({
                "check": "integrality",
                "passed": r.all_integer,
                "report": if r.all_integer { "all integer".to_string() } else { format!("{} non-integral constants", r.violation_count) },
                "basis": m.size(),
                "nonzero_constants": r.ring.nonzero_count(),
                "witnesses": witnesses,
            })
        }
        Check::BasedRing => {
            let m = p.matrix()?;
            let unit = resolve_unit(&m, &p.unit)?;
            let (r, _) = fusion_ring(&m, unit, !p.raw)?;
            let axioms = r.axioms();
            let mut v = serde_json::to_value(&axioms)?;
            v["check"] = json!("based-ring");
            v
        }
        Check::Orthogonality => {
            let m = p.matrix()?;
            let r = orthogonality_check(&m);
            json!({
                "check": "orthogonality",
                "passed": r.unitary,
                "offending": r.offending,
                "max_deviation": r.max_deviation,
            })
        }
        Check::Modular => {
            let e = p.e.ok_or_else(|| UsageError("--e is required".into()))?;
            let n = p.n.unwrap_or(1);
            let t = exterior_t(&t_matrix_cyclic(e)?, e, n as u32)?;
            let s = Source::Smatrix { e, exterior: Some(n) }.build()?;
            let r = sl2z_check(&ModularDatum::new(s, t)?)?;
            let g = gauss_sum_identity(e)?;
            json!({
                "check": "modular",
                "passed": r.passed && g.passed,
                "s4": r.s4,
                "st3": r.st3,
                "s2_commutes_with_t": r.s2_commutes_with_t,
                "s2_is_conjugation": r.s2_is_conjugation,
                "failing_relation": r.failing_relation,
                "gauss_sum_identity": g.passed,
            })
        }
        Check::KpEquiv => {
            let l = p.rank.ok_or_else(|| UsageError("--rank is required".into()))?;
            let k = p.level.ok_or_else(|| UsageError("--level is required".into()))?;
            let r = equiv_check(l, k)?;
            json!({
                "check": "kp-equiv",
                "passed": r.passed,
                "u": r.u.map(|u| u.to_string()),
                "fusion_agrees": r.fusion_agrees,
            })
        }
    };
    let ok = report["passed"].as_bool().unwrap_or(false);
    Ok(Outcome {
        text: report_text(&report, format),
        ok,
    })
}

fn run(cli: &Cli) -> Result<Outcome, UsageError> {
    let format = cli.format;
    match &cli.command {
        Command::Gen(g) => {
            let src = match g {
                GenCommand::Smatrix { e, exterior } => Source::Smatrix { e: *e, exterior: *exterior },
                GenCommand::Fourier { e, m, mult, no_eps } => Source::Fourier {
                    e: *e,
                    m: *m,
                    mult: parse_mult(mult)?,
                    eps: !no_eps,
                },
                GenCommand::Kp { kind: KpType::A1, level, .. } => Source::KpA1 { level: *level },
                GenCommand::Kp { kind: KpType::Cl, level, rank } => Source::KpCl {
                    rank: rank.ok_or_else(|| UsageError("--rank is required for type cl".into()))?,
                    level: *level,
                },
            };
            Ok(Outcome {
                text: matrix_text(&src.build()?, format),
                ok: true,
            })
        }
        Command::Fusion { input, unit, normalize } => run_fusion(input, unit, *normalize, format),
        Command::Verify { check, params } => run_verify(*check, params, format),
        Command::Scan(ScanCommand::Neg { max_basis }) => {
            let scan = neg_scan(*max_basis)?;
            Ok(Outcome {
                text: scan_text(&scan, format),
                ok: scan.all_agree,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: {e}");
        }
    }
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
