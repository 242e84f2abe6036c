use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cluster_ghz::bell::{
    bell_report, grand_bell_operator, standard_bell_operator, Choice, ReportLimits,
    DEFAULT_LHV_LIMIT,
};
use cluster_ghz::forms::{
    canonical_key, generate_forms, letters_pair_up, verify_contradiction, GhzForm,
};
use cluster_ghz::pauli::DEFAULT_DENSE_LIMIT;
use cluster_ghz::state::{
    build_cluster_state_with_limit, build_phi_family, expectation, StateVector,
    DEFAULT_STATEVECTOR_LIMIT,
};
use cluster_ghz::tables::{golden_compare, regenerate, Which};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "cluster-ghz",
    version,
    about = "GHZ arguments and Bell operators for 1D cluster states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, default_value_t = DEFAULT_STATEVECTOR_LIMIT, value_parser = positive)]
    limit_statevector: usize,

    #[arg(long, global = true, default_value_t = DEFAULT_DENSE_LIMIT, value_parser = positive)]
    limit_dense: usize,

    #[arg(long, global = true, default_value_t = DEFAULT_LHV_LIMIT, value_parser = positive)]
    limit_lhv: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every distinct GHZ form of the n-site cluster state.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Check a form file against the cluster state.
    Verify { file: PathBuf },
    /// Build a Bell operator and report its quantum value and classical bounds.
    Bell {
        #[arg(long)]
        n: usize,
        /// Head segment is 1..=j and the middle site is j+1.
        #[arg(long)]
        j: Option<usize>,
        /// Use E_{j+1} ∏ (1 + E_m) instead of a four-term operator.
        #[arg(long)]
        grand: bool,
        /// Head (Z″, Y″) choice as "z,y" indices.
        #[arg(long, default_value = "0,0", value_parser = parse_choice)]
        head: Choice,
        /// Tail (Z′, Y′) choice as "z,y" indices.
        #[arg(long, default_value = "0,0", value_parser = parse_choice)]
        tail: Choice,
    },
    /// Regenerate an operator table, optionally comparing with the reference copy.
    Tables {
        #[arg(long, value_parser = parse_which)]
        which: Which,
        /// Chain length for table III.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        golden: bool,
    },
    /// Dump amplitudes of the cluster state, or of a random four-site |Φ⟩ with --phi.
    State {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long)]
        phi: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("limits must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_choice(s: &str) -> Result<Choice, String> {
    let (z, y) = s.split_once(',').ok_or("expected z,y")?;
    let idx = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok(Choice {
        z: idx(z)?,
        y: idx(y)?,
    })
}

fn parse_which(s: &str) -> Result<Which, String> {
    s.parse().map_err(|e: cluster_ghz::Error| e.to_string())
}

/// Failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }
}

impl From<cluster_ghz::Error> for Failure {
    fn from(e: cluster_ghz::Error) -> Self {
        Failure::usage(e)
    }
}

/// Output text plus whether the command's check passed.
struct Outcome {
    text: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Enumerate { n } => cmd_enumerate(cli, *n),
        Command::Verify { file } => cmd_verify(cli, file),
        Command::Bell {
            n,
            j,
            grand,
            head,
            tail,
        } => cmd_bell(cli, *n, *j, *grand, *head, *tail),
        Command::Tables { which, n, golden } => cmd_tables(cli, *which, *n, *golden),
        Command::State { n, phi } => cmd_state(cli, *n, *phi),
    }
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

fn cmd_enumerate(cli: &Cli, n: usize) -> Result<Outcome, Failure> {
    if n < 3 || n > cli.limit_statevector {
        return Err(Failure::usage(format!(
            "n must lie in 3..={}, got {n}",
            cli.limit_statevector
        )));
    }
    let psi = build_cluster_state_with_limit(n, cli.limit_statevector)?;
    let forms = generate_forms(n)?;
    let results: Vec<bool> = forms
        .par_iter()
        .map(|f| verify_contradiction(f, &psi))
        .collect::<Result<_, _>>()?;
    let failed = results.iter().filter(|ok| !**ok).count();
    if failed > 0 {
        eprintln!("{failed} of {} forms failed verification", forms.len());
    }
    let text = match cli.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&json!({ "n": n, "count": forms.len(), "forms": forms })),
        Format::Csv => {
            let mut s = String::from("form,row,pauli,eigenvalue\n");
            for (k, f) in forms.iter().enumerate() {
                for (r, row) in f.rows.iter().enumerate() {
                    s.push_str(&format!(
                        "{},{},{},{}\n",
                        k + 1,
                        r + 1,
                        row.word,
                        row.eigenvalue
                    ));
                }
            }
            s
        }
        Format::Text => {
            let mut s = format!("n {n}\ncount {}\n", forms.len());
            for f in &forms {
                s.push_str(&canonical_key(f));
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome {
        text,
        ok: failed == 0,
    })
}

fn cmd_verify(cli: &Cli, file: &PathBuf) -> Result<Outcome, Failure> {
    let raw =
        fs::read_to_string(file).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
    let form: GhzForm = serde_json::from_str(&raw)
        .map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
    let psi = build_cluster_state_with_limit(form.n, cli.limit_statevector)?;
    let ok = verify_contradiction(&form, &psi)?;
    let mut rows = Vec::new();
    for r in &form.rows {
        let value = expectation(&r.word, &psi)?.re;
        let matched = (value - r.eigenvalue as f64).abs() <= 1e-9;
        rows.push((r.word.to_string(), r.eigenvalue, value, matched));
    }
    let pairs = letters_pair_up(&form.words());
    let product: i8 = form.rows.iter().map(|r| r.eigenvalue).product();
    let text = match cli.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&json!({
            "n": form.n,
            "rows": rows.iter().map(|(p, e, v, m)| json!({
                "pauli": p, "eigenvalue": e, "expectation": v, "matches": m
            })).collect::<Vec<_>>(),
            "letters_pair_up": pairs,
            "eigenvalue_product": product,
            "verified": ok,
        })),
        Format::Csv => {
            let mut s = String::from("pauli,eigenvalue,expectation,matches\n");
            for (p, e, v, m) in &rows {
                s.push_str(&format!("{p},{e},{v:.9},{m}\n"));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (p, e, v, m) in &rows {
                s.push_str(&format!(
                    "{p} claimed {e:+} measured {v:+.9} {}\n",
                    if *m { "ok" } else { "MISMATCH" }
                ));
            }
            s.push_str(&format!(
                "letters pair up: {pairs}\neigenvalue product: {product:+}\n"
            ));
            s.push_str(if ok { "verified\n" } else { "not verified\n" });
            s
        }
    };
    Ok(Outcome { text, ok })
}

fn cmd_bell(
    cli: &Cli,
    n: usize,
    j: Option<usize>,
    grand: bool,
    head: Choice,
    tail: Choice,
) -> Result<Outcome, Failure> {
    if n < 3 {
        return Err(Failure::usage(format!(
            "Bell operators need n >= 3, got {n}"
        )));
    }
    let (b, j) = if grand {
        let j = j.unwrap_or((n - 1) / 2);
        (grand_bell_operator(n, j)?, j)
    } else {
        let j = j.unwrap_or(n / 2);
        (standard_bell_operator(n, j, head, tail)?, j)
    };
    let limits = ReportLimits {
        dense: cli.limit_dense,
        lhv: cli.limit_lhv,
        statevector: cli.limit_statevector,
    };
    let report = bell_report(&b, j, limits)?;
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("coeff,pauli\n");
            for t in &report.terms {
                s.push_str(&format!("{},{}\n", t.coeff, t.pauli));
            }
            s
        }
        Format::Text => {
            let opt = |v: Option<i64>| v.map_or("skipped".to_string(), |v| v.to_string());
            let mut s = format!(
                "n {} j {} terms {}\n",
                report.n,
                report.j,
                report.terms.len()
            );
            s.push_str(&format!("quantum value {:.9}\n", report.quantum_value));
            if let Some(v) = report.lhv_party_bound {
                s.push_str(&format!("lhv party bound {v}\n"));
            }
            s.push_str(&format!(
                "lhv qubit bound {}\n",
                opt(report.lhv_qubit_bound)
            ));
            if let Some(sq) = report.square_identity {
                s.push_str(&format!("square identity {sq}\n"));
            }
            if let Some(sp) = &report.spectrum {
                s.push_str(&format!(
                    "top eigenvalue {:.9} multiplicity {} unique to cluster state {}\n",
                    sp.value, sp.multiplicity, sp.matches_state
                ));
            }
            for note in &report.notes {
                s.push_str(&format!("note: {note}\n"));
            }
            s
        }
    };
    Ok(Outcome { text, ok: true })
}

fn cmd_tables(cli: &Cli, which: Which, n: Option<usize>, golden: bool) -> Result<Outcome, Failure> {
    if n.is_some() && which != Which::III {
        return Err(Failure::usage("--n applies only to table III"));
    }
    let table = regenerate(which, n)?;
    let report = if golden {
        Some(golden_compare(which, n)?)
    } else {
        None
    };
    let ok = report.as_ref().is_none_or(|r| r.matches);
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&json!({
            "table": which.to_string(),
            "header": table.header,
            "rows": table.rows,
            "golden": report,
        })),
        Format::Csv | Format::Text => table.to_csv(),
    };
    if let Some(r) = &report {
        for m in &r.mismatches {
            eprintln!("mismatch: {m}");
        }
        eprintln!(
            "table {which}: {} reference{}",
            if r.matches { "matches" } else { "differs from" },
            if r.errata_applied > 0 {
                format!(" ({} errata entries applied)", r.errata_applied)
            } else {
                String::new()
            }
        );
    }
    Ok(Outcome { text, ok })
}

/// `(α, β)` uniform on `|α|² + |β|² = 1/2` with independent phases.
fn random_phi_coefficients(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
    let (p, q): (f64, f64) = (
        rng.gen_range(0.0..std::f64::consts::TAU),
        rng.gen_range(0.0..std::f64::consts::TAU),
    );
    let r = std::f64::consts::FRAC_1_SQRT_2;
    (
        Complex64::from_polar(r * theta.cos(), p),
        Complex64::from_polar(r * theta.sin(), q),
    )
}

fn cmd_state(cli: &Cli, n: usize, phi: bool) -> Result<Outcome, Failure> {
    let (psi, coeffs): (StateVector, Option<(Complex64, Complex64)>) = if phi {
        if n != 4 {
            return Err(Failure::usage(
                "--phi describes a four-site state; use --n 4",
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        let (a, b) = random_phi_coefficients(&mut rng);
        (build_phi_family(a, b)?, Some((a, b)))
    } else {
        if n < 2 {
            return Err(Failure::usage(format!("the chain needs n >= 2, got {n}")));
        }
        (
            build_cluster_state_with_limit(n, cli.limit_statevector)?,
            None,
        )
    };
    let text = match cli.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&json!({
            "n": psi.n(),
            "alpha": coeffs.map(|(a, _)| [a.re, a.im]),
            "beta": coeffs.map(|(_, b)| [b.re, b.im]),
            "amplitudes": psi.amplitudes().iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("basis,re,im\n");
            for line in psi.dump().lines() {
                s.push_str(&line.replace(' ', ","));
                s.push('\n');
            }
            s
        }
        Format::Text => psi.dump(),
    };
    Ok(Outcome { text, ok: true })
}
