//! The `abcong` command line.
//!
//! Every verb writes either a JSON document or a plain-text table (`--format`), to stdout
//! or to `--out`. Exit status is 0 on success, 1 on bad usage or malformed input and 2 when
//! a consistency check fails (a theorem cross-check, a printed table, the `Delta` partition).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::abelian::{analyze, density_c, modulus_bound, oracle, BoundCase};
use crate::classify::classify_projective;
use crate::discover::{
    delta_partition, discover, goodmod_check, legendre_candidates, legendre_fit, search_modulus,
    verify_table, CongruenceReport, TableRow,
};
use crate::eigendata::{
    build_dataset, bundled_curve, load_curves, parse_forms, ApDataset, ApSource,
};
use crate::ffield::{is_prime, FieldSpec};
use crate::matgrp::{Mat2, MatGroup};

#[derive(Debug, Parser)]
#[command(name = "abcong", version, about = "Abelian congruences for traces of 2x2 matrix groups")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dickson label of the projective image, plus the zero-trace density.
    Classify(GroupArgs),
    /// Per-class verdicts, density, label and theorem cross-check.
    Analyze {
        #[command(flatten)]
        group: GroupArgs,
        /// Also report the modulus bound for this level and case.
        #[arg(long, requires = "case")]
        level: Option<u64>,
        #[arg(long, value_enum, requires = "level")]
        case: Option<BoundCase>,
    },
    /// Generate `(p, a_p mod l)` as CSV.
    Dataset {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 10_000)]
        pmax: u64,
    },
    /// Find congruence conditions in a dataset.
    Discover {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 10_000)]
        pmax: u64,
        /// Only this residue (default: every residue seen).
        #[arg(long)]
        x: Option<u64>,
        /// Fixed modulus. Without it, the divisors of the `--case` bound are searched.
        #[arg(long, conflicts_with = "case")]
        modulus: Option<u64>,
        #[arg(long, value_enum)]
        case: Option<BoundCase>,
        /// Exponent of the semisimplified image, needed for `--case borel`.
        #[arg(long)]
        exponent: Option<u64>,
    },
    /// Check a dataset against the `Delta mod 23` partition, the non-square criterion, or table rows.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 10_000)]
        pmax: u64,
        /// JSON list of table rows to check (needs `--modulus`).
        #[arg(long, requires = "modulus")]
        rows: Option<PathBuf>,
        #[arg(long)]
        modulus: Option<u64>,
        /// Ignore primes below this bound when checking rows.
        #[arg(long, default_value_t = 0)]
        pmin: u64,
    },
    /// Cross-check the classification against brute force on every two-generated subgroup of GL_2(F_q).
    Oracle {
        /// Field size `q`, as `9` or `3^2`.
        #[arg(long)]
        field: String,
    },
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Group file: `{"field": {"p": .., "r": ..}, "generators": [[[a,b],[c,d]], ...]}`.
    #[arg(long, conflicts_with_all = ["field", "gen"])]
    pub group: Option<PathBuf>,
    /// Field size for inline generators.
    #[arg(long, requires = "gen")]
    pub field: Option<String>,
    /// Inline generator `a,b,c,d` (integers, row by row); repeatable.
    #[arg(long = "gen", num_args = 1)]
    pub gen: Vec<String>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = true)]
pub struct SourceArgs {
    /// Ramanujan's `Delta`.
    #[arg(long)]
    pub delta: bool,
    /// Curve label, looked up in `--curves` or the bundled fixtures.
    #[arg(long)]
    pub curve: Option<String>,
    /// JSON-lines curve file.
    #[arg(long, requires = "curve")]
    pub curves: Option<PathBuf>,
    /// JSON-lines eigenform file; pick one with `--form`.
    #[arg(long, requires = "form")]
    pub forms: Option<PathBuf>,
    #[arg(long)]
    pub form: Option<String>,
    /// Existing CSV dataset (`p,ap_mod`); needs `--level`.
    #[arg(long, requires = "level")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub level: Option<u64>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Failure {
        Failure { code: 1, message: message.to_string() }
    }
}

/// A finished report and whether its consistency checks passed.
struct Report {
    json: serde_json::Value,
    table: String,
    consistent: bool,
}

pub fn main_with_args<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Failure> {
    let report = match &cli.command {
        Command::Classify(g) => classify_cmd(&load_group(g)?)?,
        Command::Analyze { group, level, case } => analyze_cmd(&load_group(group)?, *level, *case)?,
        Command::Dataset { source, ell, pmax } => {
            let ds = dataset(source, *ell, *pmax)?;
            Report {
                json: serde_json::to_value(&ds).expect("serializable"),
                table: ds.to_csv(),
                consistent: true,
            }
        }
        Command::Discover { source, ell, pmax, x, modulus, case, exponent } => {
            let ds = dataset(source, *ell, *pmax)?;
            discover_cmd(&ds, *x, *modulus, *case, *exponent)?
        }
        Command::Verify { source, ell, pmax, rows, modulus, pmin } => {
            let ds = dataset(source, *ell, *pmax)?;
            verify_cmd(&ds, source.delta, rows.as_deref(), *modulus, *pmin)?
        }
        Command::Oracle { field } => {
            let f = parse_field(field)?;
            let s = oracle(&MatGroup::gl2(&f));
            let mut t = format!("GL2(F{}): {} subgroups\n", s.q, s.subgroups);
            for (label, n) in &s.labels {
                let _ = writeln!(t, "  {label:<18} {n}");
            }
            for (order, what) in &s.failures {
                let _ = writeln!(t, "FAIL order {order}: {what}");
            }
            t.push_str(if s.consistent() { "consistent\n" } else { "inconsistent\n" });
            Report { json: s.to_json(), table: t, consistent: s.consistent() }
        }
    };
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report.json).expect("serializable") + "\n",
        Format::Table => report.table,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(if report.consistent { 0 } else { 2 })
}

/// Accepts `q` or `p^r`.
fn parse_field(s: &str) -> Result<FieldSpec, Failure> {
    let (p, r) = match s.split_once('^') {
        Some((p, r)) => (
            p.trim().parse::<u64>().map_err(Failure::usage)?,
            r.trim().parse::<u32>().map_err(Failure::usage)?,
        ),
        None => {
            let q: u64 = s.trim().parse().map_err(Failure::usage)?;
            let p = crate::ffield::prime_factors(q)
                .first()
                .copied()
                .ok_or_else(|| Failure::usage(format!("{q} is not a prime power")))?;
            let mut r = 0;
            let mut m = q;
            while m.is_multiple_of(p) {
                m /= p;
                r += 1;
            }
            if m != 1 {
                return Err(Failure::usage(format!("{q} is not a prime power")));
            }
            (p, r)
        }
    };
    FieldSpec::new(p, r, None).map_err(Failure::usage)
}

fn load_group(g: &GroupArgs) -> Result<MatGroup, Failure> {
    if let Some(path) = &g.group {
        let text = read(path)?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(Failure::usage)?;
        return MatGroup::from_json(&v).map_err(Failure::usage);
    }
    let field = g.field.as_deref().ok_or_else(|| Failure::usage("give --group or --field with --gen"))?;
    let f = parse_field(field)?;
    let gens = g
        .gen
        .iter()
        .map(|s| {
            let v: Vec<i64> = s
                .split(',')
                .map(|t| t.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(Failure::usage)?;
            match v[..] {
                [a, b, c, d] => Ok(Mat2::from_ints(&f, [[a, b], [c, d]])),
                _ => Err(Failure::usage(format!("generator `{s}` needs four entries"))),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    MatGroup::close(&f, &gens).map_err(Failure::usage)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn dataset(s: &SourceArgs, ell: u64, pmax: u64) -> Result<ApDataset, Failure> {
    if !is_prime(ell) {
        return Err(Failure::usage(format!("--ell {ell} is not prime")));
    }
    let picked = [s.delta, s.curve.is_some(), s.form.is_some(), s.input.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if picked != 1 {
        return Err(Failure::usage("choose exactly one of --delta, --curve, --form, --input"));
    }
    if let Some(path) = &s.input {
        let file = std::fs::File::open(path)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let name = path.display().to_string();
        let level = s.level.expect("clap enforces --level");
        return ApDataset::from_csv(&name, level, ell, std::io::BufReader::new(file))
            .map_err(Failure::usage);
    }
    let source = if s.delta {
        ApSource::Delta
    } else if let Some(label) = &s.curve {
        let found = match &s.curves {
            Some(path) => load_curves(path)
                .map_err(Failure::usage)?
                .into_iter()
                .find(|c| &c.label == label),
            None => bundled_curve(label),
        };
        ApSource::Curve(found.ok_or_else(|| Failure::usage(format!("no curve labelled {label}")))?)
    } else {
        let label = s.form.as_ref().expect("checked above");
        let path = s.forms.as_ref().ok_or_else(|| Failure::usage("--form needs --forms FILE"))?;
        let form = parse_forms(&read(path)?)
            .map_err(Failure::usage)?
            .into_iter()
            .find(|f| &f.label == label)
            .ok_or_else(|| Failure::usage(format!("no form labelled {label}")))?;
        ApSource::Form(form)
    };
    build_dataset(&source, ell, pmax).map_err(Failure::usage)
}

fn classify_cmd(g: &MatGroup) -> Result<Report, Failure> {
    let f = g.field();
    let class = classify_projective(&g.projectivize()).map_err(|e| Failure { code: 2, message: e.to_string() })?;
    let c = density_c(g).map_err(|e| Failure { code: 2, message: e.to_string() })?;
    let table = format!(
        "order {}\nprojective order {}\nlabel {}\nall applicable {}\nc = {}\n",
        g.order(),
        g.projectivize().order(),
        class.label,
        class.all_applicable.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", "),
        c
    );
    Ok(Report {
        json: json!({"order": g.order(), "dickson": class.to_json(f), "c": c.to_string()}),
        table,
        consistent: true,
    })
}

fn analyze_cmd(g: &MatGroup, level: Option<u64>, case: Option<BoundCase>) -> Result<Report, Failure> {
    let f = g.field();
    let r = analyze(g).map_err(|e| Failure { code: 2, message: e.to_string() })?;
    let mut json = r.to_json();
    let mut t = format!(
        "order {}  label {}  totally {}  c = {}\n",
        g.order(),
        r.dickson.label,
        r.totally,
        r.density
    );
    let _ = writeln!(t, "{:>6}  {:<5} {:<5} {:<7}", "x", "weak", "semi", "abelian");
    for (x, v) in &r.per_class {
        let _ = writeln!(t, "{:>6}  {:<5} {:<5} {:<7}", f.show(*x), v.weak, v.semi, v.abelian);
    }
    for c in r.crosscheck.failures() {
        let class = c.class.map(|x| f.show(x)).unwrap_or_else(|| "-".into());
        let _ = writeln!(t, "FAIL {} at {class}: predicted {} observed {}", c.name, c.predicted, c.observed);
    }
    if let (Some(level), Some(case)) = (level, case) {
        let b = crate::abelian::modulus_bound_for_group(g, level, case).map_err(Failure::usage)?;
        let _ = writeln!(t, "modulus bound {} = {}", b.bound, b.factored());
        json["modulus_bound"] = b.to_json();
    }
    t.push_str(if r.consistent() { "consistent\n" } else { "inconsistent\n" });
    Ok(Report { json, table: t, consistent: r.consistent() })
}

fn discover_cmd(
    ds: &ApDataset,
    x: Option<u64>,
    modulus: Option<u64>,
    case: Option<BoundCase>,
    exponent: Option<u64>,
) -> Result<Report, Failure> {
    match (modulus, case) {
        (Some(m), _) => {
            let mut rep = CongruenceReport::build(ds, m).map_err(Failure::usage)?;
            if let Some(x) = x {
                rep.per_class = [(x, discover(ds, x, m).map_err(Failure::usage)?)].into();
                rep.legendre_fits = legendre_fit(ds, x, &legendre_candidates(ds.level, ds.ell));
            }
            Ok(Report { json: rep.to_json(), table: rep.to_table(), consistent: true })
        }
        (None, Some(case)) => {
            let b = modulus_bound(ds.level, ds.ell, case, exponent).map_err(Failure::usage)?;
            let classes: Vec<u64> = match x {
                Some(x) => vec![x],
                None => {
                    let seen: std::collections::BTreeSet<u64> = ds.samples.iter().map(|s| s.1).collect();
                    seen.into_iter().collect()
                }
            };
            let mut t = format!(
                "{} mod {}: searching divisors of {} = {} [empirical]\n",
                ds.source,
                ds.ell,
                b.bound,
                b.factored()
            );
            let mut out = serde_json::Map::new();
            for x in classes {
                let s = search_modulus(ds, x, b.bound).map_err(Failure::usage)?;
                let show = |e: &Option<crate::discover::ClassEntry>| {
                    e.as_ref().map(|e| e.modulus.to_string()).unwrap_or_else(|| "-".into())
                };
                let _ = writeln!(
                    t,
                    "a_p = {x:>3}  iff at M = {}  weak at M = {}  semi at M = {}",
                    show(&s.iff),
                    show(&s.weak),
                    show(&s.semi)
                );
                out.insert(x.to_string(), serde_json::to_value(&s).expect("serializable"));
            }
            Ok(Report {
                json: json!({"bound": b.to_json(), "empirical": true, "per_class": out}),
                table: t,
                consistent: true,
            })
        }
        (None, None) => Err(Failure::usage("give --modulus M or --case to search the bound")),
    }
}

fn verify_cmd(
    ds: &ApDataset,
    is_delta: bool,
    rows: Option<&Path>,
    modulus: Option<u64>,
    pmin: u64,
) -> Result<Report, Failure> {
    let mut json = serde_json::Map::new();
    let mut t = String::new();
    let mut ok = true;
    if let Some(path) = rows {
        let rows: Vec<TableRow> = serde_json::from_str(&read(path)?).map_err(Failure::usage)?;
        let m = modulus.expect("clap enforces --modulus");
        let checks = verify_table(ds, m, pmin, &rows);
        for c in &checks {
            let _ = writeln!(
                t,
                "{:?} traces {:?} residues {:?} mod {m}: {} checked, {} violations",
                c.row.kind, c.row.traces, c.row.residues, c.checked, c.violations
            );
            ok &= c.violations == 0;
        }
        json.insert("rows".into(), serde_json::to_value(&checks).expect("serializable"));
    } else {
        if ds.ell % 2 == 1 {
            let g = goodmod_check(ds, ds.ell);
            let _ = writeln!(
                t,
                "a_p = 0 <=> (p/{}) = -1: {} primes, {} exceptions",
                ds.ell,
                g.samples,
                g.zero_but_square + g.nonsquare_but_nonzero
            );
            ok &= g.holds();
            json.insert("goodmod".into(), serde_json::to_value(&g).expect("serializable"));
        }
        if is_delta && ds.ell == 23 {
            let part = delta_partition(ds).map_err(Failure::usage)?;
            let _ = writeln!(
                t,
                "tau(p) mod 23 partition 0/2/-1: {} primes ({} / {} / {}), {} exceptions",
                part.checked,
                part.counts[0],
                part.counts[1],
                part.counts[2],
                part.exceptions.len()
            );
            ok &= part.exceptions.is_empty();
            json.insert("partition".into(), serde_json::to_value(&part).expect("serializable"));
        }
    }
    json.insert("consistent".into(), ok.into());
    Ok(Report { json: json.into(), table: t, consistent: ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> i32 {
        main_with_args(std::iter::once("abcong").chain(args.iter().copied()).map(OsString::from))
    }

    #[test]
    fn field_parsing() {
        assert_eq!(parse_field("9").unwrap().q(), 9);
        assert_eq!(parse_field("3^2").unwrap().r(), 2);
        assert!(parse_field("12").is_err());
        assert!(parse_field("x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["classify", "--field", "3", "--gen", "1,1,0,1", "--gen", "0,1,1,0"]), 0);
        assert_eq!(run_args(&["classify", "--field", "3", "--gen", "1,1,0"]), 1);
        assert_eq!(run_args(&["frobnicate"]), 1);
        assert_eq!(run_args(&["dataset", "--delta", "--ell", "4"]), 1);
        assert_eq!(run_args(&["verify", "--delta", "--ell", "23", "--pmax", "500"]), 0);
        assert_eq!(run_args(&["--help"]), 0);
    }
}
