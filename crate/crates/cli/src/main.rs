//! `g2moduli` — compute and reproduce moduli dimensions of invariant closed
//! and coclosed G2-structures on 7-dimensional nilpotent Lie algebras.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use g2moduli_core::catalog::{Catalog, CatalogEntry, CoclosedSource};
use g2moduli_core::exterior::KForm;
use g2moduli_core::g2::{
    is_positive_3form, principal_orbit_search, purely_coclosed_indicator, ModuliKind,
    ModuliReport, SearchOptions,
};
use g2moduli_core::liealg::LieAlgebra;
use g2moduli_core::notation::{parse_form, parse_salamon, render_form, render_salamon};
use g2moduli_core::reproduce::{reproduce, Status};
use g2moduli_core::Rational;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CATALOG: u8 = 3;

#[derive(Parser)]
#[command(name = "g2moduli", version, about)]
struct Cli {
    /// Path to a catalog JSON file replacing the built-in one.
    #[arg(long, global = true)]
    catalog: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog entries with the data available for each.
    List,
    /// Show everything the catalog knows about one entry.
    Info { name: String },
    /// Compute the moduli report for one entry.
    Compute {
        name: String,
        #[arg(long, value_parser = parse_kind)]
        kind: ModuliKind,
    },
    /// Betti numbers of an entry (all of them, or a single k).
    Betti { name: String, k: Option<usize> },
    /// Parse an expression and print its canonical rendering.
    Parse(ParseArgs),
    /// Perturbation search for a smaller stabilizer (principal orbit).
    Search {
        name: String,
        #[arg(long, value_parser = parse_kind)]
        kind: ModuliKind,
        /// Perturbation size, a rational like 1/10.
        #[arg(long, default_value = "1/10")]
        eps: String,
        #[arg(long, default_value_t = 1)]
        max_coeff: i64,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        /// RNG seed; the G2MODULI_SEED environment variable overrides the
        /// default when the flag is absent.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Recompute all expected values and compare against the catalog.
    Reproduce {
        #[arg(long)]
        json: bool,
        /// Comma-separated entry names; default is the whole catalog.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ParseArgs {
    /// Parse as a structure-equation tuple.
    #[arg(long)]
    salamon: Option<String>,
    /// Parse as a form expression (ambient dimension 7).
    #[arg(long)]
    form: Option<String>,
}

fn parse_kind(s: &str) -> Result<ModuliKind, String> {
    match s {
        "closed" => Ok(ModuliKind::Closed),
        "coclosed" => Ok(ModuliKind::Coclosed),
        other => Err(format!("expected 'closed' or 'coclosed', got '{other}'")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let catalog = match load_catalog(cli.catalog.as_deref()) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(EXIT_CATALOG);
        }
    };
    match run(&cli.command, &catalog) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn load_catalog(path: Option<&str>) -> Result<Catalog, String> {
    match path {
        None => Ok(Catalog::default_catalog()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read catalog '{p}': {e}"))?;
            Catalog::from_json(&text).map_err(|e| format!("invalid catalog '{p}': {e}"))
        }
    }
}

fn run(command: &Command, catalog: &Catalog) -> Result<ExitCode, String> {
    match command {
        Command::List => {
            for entry in &catalog.entries {
                let mut caps = Vec::new();
                if entry.salamon.is_some() {
                    caps.push("equations");
                }
                if entry.closed_form.is_some() {
                    caps.push("closed");
                }
                if entry.coclosed.is_some() {
                    caps.push("coclosed");
                }
                if caps.is_empty() {
                    caps.push("expected values only");
                }
                println!("{:<16} {}", entry.name, caps.join(", "));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Info { name } => {
            let entry = find(catalog, name)?;
            cmd_info(entry)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compute { name, kind } => {
            let entry = find(catalog, name)?;
            let report = build_report(entry, *kind, &SearchOptions::default(), 0)?;
            print_report(&report);
            Ok(ExitCode::SUCCESS)
        }
        Command::Betti { name, k } => {
            let entry = find(catalog, name)?;
            let g = algebra_of(entry)?;
            match k {
                Some(k) if *k > g.dim() => Err(format!("k={k} exceeds dimension {}", g.dim())),
                Some(k) => {
                    println!("b{}({}) = {}", k, entry.name, g.betti(*k));
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    for k in 0..=g.dim() {
                        println!("b{} = {}", k, g.betti(k));
                    }
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Parse(args) => cmd_parse(args),
        Command::Search {
            name,
            kind,
            eps,
            max_coeff,
            trials,
            seed,
        } => {
            let entry = find(catalog, name)?;
            let epsilon: Rational = eps
                .parse()
                .map_err(|e| format!("invalid --eps '{eps}': {e}"))?;
            let seed = seed.or_else(env_seed).unwrap_or(0);
            let opts = SearchOptions {
                epsilon,
                max_coeff: *max_coeff,
                trials: *trials,
                seed,
            };
            let report = build_report(entry, *kind, &opts, *trials)?;
            print_report(&report);
            Ok(ExitCode::SUCCESS)
        }
        Command::Reproduce { json, only } => {
            let report = reproduce(catalog, only.as_deref()).map_err(|e| e.to_string())?;
            if *json {
                println!("{}", report.to_json());
            } else {
                print_reproduce(&report);
            }
            if report.has_mismatch() {
                Ok(ExitCode::from(EXIT_MISMATCH))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}

fn env_seed() -> Option<u64> {
    std::env::var("G2MODULI_SEED").ok()?.parse().ok()
}

fn find<'a>(catalog: &'a Catalog, name: &str) -> Result<&'a CatalogEntry, String> {
    catalog
        .get(name)
        .ok_or_else(|| format!("unknown entry '{name}' (see `g2moduli list`)"))
}

fn algebra_of(entry: &CatalogEntry) -> Result<LieAlgebra, String> {
    entry
        .algebra()
        .ok_or_else(|| format!("entry '{}' has no structure equations", entry.name))?
        .map_err(|e| e.to_string())
}

fn form_of(entry: &CatalogEntry, kind: ModuliKind, dim: usize) -> Result<KForm, String> {
    match kind {
        ModuliKind::Closed => entry
            .closed_form
            .as_deref()
            .ok_or_else(|| format!("entry '{}' has no closed form", entry.name))
            .and_then(|t| parse_form(t, dim).map_err(|e| e.to_string())),
        ModuliKind::Coclosed => entry
            .coclosed_form(dim)
            .ok_or_else(|| format!("entry '{}' has no coclosed form", entry.name))?
            .map_err(|e| e.to_string()),
    }
}

fn published_perturbations(
    entry: &CatalogEntry,
    kind: ModuliKind,
    dim: usize,
) -> Result<Vec<KForm>, String> {
    let text = match kind {
        ModuliKind::Closed => &entry.closed_perturbation,
        ModuliKind::Coclosed => &entry.coclosed_perturbation,
    };
    text.as_deref()
        .map(|t| parse_form(t, dim).map_err(|e| e.to_string()))
        .transpose()
        .map(|o| o.into_iter().collect())
}

fn build_report(
    entry: &CatalogEntry,
    kind: ModuliKind,
    opts: &SearchOptions,
    trials: usize,
) -> Result<ModuliReport, String> {
    let g = algebra_of(entry)?;
    let alpha = form_of(entry, kind, g.dim())?;
    let published = published_perturbations(entry, kind, g.dim())?;
    let opts = SearchOptions {
        trials,
        ..opts.clone()
    };
    Ok(principal_orbit_search(
        &g,
        &entry.name,
        kind,
        &alpha,
        &published,
        &opts,
    ))
}

fn print_report(r: &ModuliReport) {
    println!("{} ({})", r.name, r.kind);
    println!("  dim V          = {}", r.dim_v);
    println!("  dim Aut        = {}", r.dim_aut);
    println!("  stab (given)   = {}", r.stab_given);
    println!("  stab (best)    = {}", r.stab_best);
    if let Some(beta) = &r.best_perturbation {
        println!("  perturbation   = {}", render_form(beta));
    }
    println!(
        "  moduli dim     {} {}",
        if r.is_upper_bound_only { "<=" } else { "=" },
        r.moduli_dim
    );
}

fn cmd_info(entry: &CatalogEntry) -> Result<(), String> {
    println!("name: {}", entry.name);
    if let Some(s) = &entry.salamon {
        println!("structure equations: {s}");
        let g = algebra_of(entry)?;
        match g.nilpotency_step() {
            Some(s) => println!("nilpotency step: {s}"),
            None => println!("nilpotency step: not nilpotent"),
        }
        println!("dim Der: {}", g.derivation_space().dim());
        println!("b3: {}", g.betti(3));
        if let Some(phi_text) = &entry.closed_form {
            let phi = parse_form(phi_text, g.dim()).map_err(|e| e.to_string())?;
            println!("closed form: {}", render_form(&phi));
            println!("  positive: {}", is_positive_3form(&phi));
            println!("  purely coclosed: {}", purely_coclosed_indicator(&phi, &g));
        }
        if let Some(src) = &entry.coclosed {
            if let CoclosedSource::Su3 { su3 } = src {
                println!(
                    "coclosed form from SU(3) data (omega = {}, psi_minus = {}, eta = {})",
                    su3.omega, su3.psi_minus, su3.eta
                );
            }
            let psi = form_of(entry, ModuliKind::Coclosed, g.dim())?;
            println!("coclosed form: {}", render_form(&psi));
        }
    } else {
        println!("structure equations: (not recorded)");
    }
    if let Some(n) = &entry.notes {
        println!("notes: {n}");
    }
    for (q, e) in &entry.expected {
        let bound = if e.upper_bound { " (upper bound)" } else { "" };
        let alt = e
            .alternate
            .map(|a| format!(" [alternate {a}]"))
            .unwrap_or_default();
        println!("expected {q} = {}{bound}{alt}  [{}]", e.value, e.source);
    }
    Ok(())
}

fn cmd_parse(args: &ParseArgs) -> Result<ExitCode, String> {
    if let Some(text) = &args.salamon {
        let spec = parse_salamon(text).map_err(|e| e.to_string())?;
        let g = LieAlgebra::from_salamon(&spec).map_err(|e| e.to_string())?;
        println!("{}", render_salamon(&spec));
        match g.nilpotency_step() {
            Some(s) => println!("nilpotency step: {s}"),
            None => println!("nilpotency step: not nilpotent"),
        }
        println!("dim Der: {}", g.derivation_space().dim());
        return Ok(ExitCode::SUCCESS);
    }
    if let Some(text) = &args.form {
        let f = parse_form(text, 7).map_err(|e| e.to_string())?;
        println!("{}", render_form(&f));
        return Ok(ExitCode::SUCCESS);
    }
    unreachable!("clap enforces exactly one of --salamon/--form");
}

fn print_reproduce(report: &g2moduli_core::reproduce::ReproduceReport) {
    let mut matches = 0usize;
    let mut flags = 0usize;
    let mut bounds = 0usize;
    let mut mismatches = 0usize;
    for entry in &report.entries {
        if entry.skipped {
            println!("{}: skipped (no structure equations recorded)", entry.name);
            continue;
        }
        for q in &entry.quantities {
            match q.status {
                Status::Match => matches += 1,
                Status::UpperBoundOnly => bounds += 1,
                Status::PaperInconsistencyFlag => flags += 1,
                Status::Mismatch => mismatches += 1,
            }
            match q.status {
                Status::Match => {}
                Status::UpperBoundOnly => println!(
                    "{}: {} = {} (published value is an upper bound) [{}]",
                    entry.name, q.quantity, q.computed, q.source
                ),
                Status::PaperInconsistencyFlag => println!(
                    "{}: {} computed {} vs published {} — source-internal inconsistency, both candidates reported [{}]",
                    entry.name, q.quantity, q.computed, q.expected, q.source
                ),
                Status::Mismatch => println!(
                    "{}: MISMATCH {} computed {} vs published {} [{}]",
                    entry.name, q.quantity, q.computed, q.expected, q.source
                ),
            }
        }
    }
    println!(
        "{matches} matched, {bounds} upper bounds, {flags} flagged, {mismatches} mismatched"
    );
}
