//! Command-line surface. Each subcommand reads one JSON document and writes
//! its result to the given output stream.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use ringmat_core::group::{cyclic_surjection_exists, square_exists};
use ringmat_core::oracle::{self, achievable_squares, cyclic_quotients, p_groups};
use ringmat_core::tropical::{self, HeightFunction, TropicalVerdict};
use ringmat_core::tutte::{arithmetic_tutte, classical_tutte, quasi_tutte_eval, tutte_class};
use ringmat_core::{check_axioms, dual, gale_dual, to_qam, ExtNat, Poly2, ZMatroid};

use crate::docs::{emit_dvr, emit_subset_map, nat_value, to_text, MatroidDocument, RealizationDocument};

/// Exit status for a completed run whose answer is negative.
pub const EXIT_FALSE: i32 = 1;
/// Exit status for usage and parse errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ringmat", version, about = "Matroids over Z and over discrete valuation rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TutteForm {
    Class,
    Classical,
    Arithmetic,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the matroid axiom; exit 1 with the first violation.
    Check { file: PathBuf },
    /// Matroid of a realization document.
    Realize { file: PathBuf },
    /// Dual matroid.
    Dual { file: PathBuf },
    /// Realization of the dual matroid.
    Galedual { file: PathBuf },
    /// Delete and contract elements (deletions first).
    Minor {
        #[arg(long, value_delimiter = ',')]
        delete: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        contract: Vec<String>,
        file: PathBuf,
    },
    /// Split off the free part of M(E); the split rank goes to stderr.
    Essentialize { file: PathBuf },
    /// Tutte-Grothendieck class or one of its polynomial specializations.
    Tutte {
        #[arg(long, value_enum, default_value = "class")]
        form: TutteForm,
        /// Print polynomials in the variables (x-1), (y-1).
        #[arg(long)]
        shifted: bool,
        file: PathBuf,
    },
    /// Evaluate the Tutte quasi-polynomial at an integer point.
    Quasi {
        #[arg(long, allow_hyphen_values = true)]
        x: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        y: BigInt,
        file: PathBuf,
    },
    /// Quasi-arithmetic matroid data and its axiom check.
    Qam { file: PathBuf },
    /// Localization at a prime, as a DVR matroid document.
    Localize {
        #[arg(long)]
        p: BigUint,
        file: PathBuf,
    },
    /// Three-term, single-exchange and Dressian checks of the heights d_{<=n}.
    Dressian {
        #[arg(long)]
        p: BigUint,
        #[arg(long)]
        n: ExtNat,
        /// Restrict the Dressian check to |A| = |B| = r.
        #[arg(long)]
        r: Option<usize>,
        file: PathBuf,
    },
    /// Scan every flag Plücker relation; reports evidence only.
    Flagscan {
        #[arg(long)]
        p: BigUint,
        #[arg(long)]
        n: ExtNat,
        /// Write one line per relation to this file.
        #[arg(long)]
        log: Option<PathBuf>,
        file: PathBuf,
    },
    /// Dress-Wenzel exchange for the valuation given by torsion length.
    Valuated {
        #[arg(long)]
        p: BigUint,
        file: PathBuf,
    },
    /// Compare the closed-form criteria with exhaustive search on small p-groups.
    OracleVerify {
        #[arg(long, default_value_t = 32)]
        max_order: u64,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_matroid(path: &Path, err: &mut dyn Write) -> Result<ZMatroid> {
    let doc = MatroidDocument::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    for w in &doc.warnings {
        writeln!(err, "warning: {w}")?;
    }
    Ok(doc.matroid)
}

fn load_realization(path: &Path) -> Result<RealizationDocument> {
    RealizationDocument::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Verifies the input, reporting a violation as a negative answer.
fn load_verified(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<Option<ZMatroid>> {
    let m = load_matroid(path, err)?;
    match m.is_matroid() {
        Ok(()) => Ok(Some(m.verify()?)),
        Err(v) => {
            writeln!(out, "not a matroid: {v}")?;
            Ok(None)
        }
    }
}

fn load_essential(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<Option<ZMatroid>> {
    let Some(m) = load_verified(path, out, err)? else {
        return Ok(None);
    };
    if !m.is_essential() {
        bail!(
            "matroid is not essential (M(E) has free rank {}); run `ringmat essentialize` first",
            m.get(m.full()).rank()
        );
    }
    Ok(Some(m))
}

fn poly_text(p: &Poly2, shifted: bool) -> String {
    if shifted {
        p.display_shifted()
    } else {
        p.to_string()
    }
}

fn report(out: &mut dyn Write, name: &str, v: &TropicalVerdict) -> Result<bool> {
    if v.ok() {
        writeln!(out, "{name}: OK ({} relations)", v.relations)?;
    } else {
        writeln!(out, "{name}: {} violations of {} relations", v.violations.len(), v.relations)?;
        for x in &v.violations {
            let terms: Vec<String> = x.terms.iter().map(ToString::to_string).collect();
            writeln!(out, "  {} terms [{}]", x.relation, terms.join(", "))?;
        }
    }
    Ok(v.ok())
}

fn heights_at(m: &ZMatroid, p: &BigUint, n: ExtNat) -> Result<HeightFunction> {
    Ok(tropical::heights(&m.localize_matroid(p)?, n)?)
}

/// Runs one command. Returns the process exit status (0 or 1); errors map to 2.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let status = match cli.command {
        Command::Check { file } => {
            let m = load_matroid(&file, err)?;
            match m.is_matroid() {
                Ok(()) => {
                    writeln!(out, "OK")?;
                    0
                }
                Err(v) => {
                    writeln!(out, "violation {v}")?;
                    EXIT_FALSE
                }
            }
        }
        Command::Realize { file } => {
            let doc = load_realization(&file)?;
            let m = ZMatroid::from_realization_labeled(&doc.realization, doc.ground)?;
            write!(out, "{}", to_text(&MatroidDocument::emit(&m)))?;
            0
        }
        Command::Dual { file } => match load_verified(&file, out, err)? {
            Some(m) => {
                write!(out, "{}", to_text(&MatroidDocument::emit(&dual(&m)?)))?;
                0
            }
            None => EXIT_FALSE,
        },
        Command::Galedual { file } => {
            let doc = load_realization(&file)?;
            let g = gale_dual(&doc.realization);
            write!(out, "{}", to_text(&RealizationDocument::emit(&g, &doc.ground)))?;
            0
        }
        Command::Minor { delete, contract, file } => {
            let mut m = load_matroid(&file, err)?;
            for label in &delete {
                m = m.delete(label)?;
            }
            for label in &contract {
                m = m.contract(label)?;
            }
            write!(out, "{}", to_text(&MatroidDocument::emit(&m)))?;
            0
        }
        Command::Essentialize { file } => match load_verified(&file, out, err)? {
            Some(m) => {
                let (e, split) = m.essentialize();
                writeln!(err, "split rank: {split}")?;
                write!(out, "{}", to_text(&MatroidDocument::emit(&e)))?;
                0
            }
            None => EXIT_FALSE,
        },
        Command::Tutte { form, shifted, file } => match load_essential(&file, out, err)? {
            Some(m) => {
                let t = tutte_class(&m)?;
                match form {
                    TutteForm::Class => writeln!(out, "{t}")?,
                    TutteForm::Classical => writeln!(out, "{}", poly_text(&classical_tutte(&t), shifted))?,
                    TutteForm::Arithmetic => writeln!(out, "{}", poly_text(&arithmetic_tutte(&t), shifted))?,
                }
                0
            }
            None => EXIT_FALSE,
        },
        Command::Quasi { x, y, file } => match load_essential(&file, out, err)? {
            Some(m) => {
                writeln!(out, "{}", quasi_tutte_eval(&m, &x, &y)?)?;
                0
            }
            None => EXIT_FALSE,
        },
        Command::Qam { file } => match load_verified(&file, out, err)? {
            Some(m) => {
                let q = to_qam(&m);
                let verdict = check_axioms(&q);
                let doc = json!({
                    "ground_set": q.ground.labels(),
                    "rk": emit_subset_map(&q.ground, &q.rk, |r| json!(r)),
                    "m": emit_subset_map(&q.ground, &q.m, nat_value),
                    "axioms": match &verdict {
                        Ok(()) => Value::String("OK".into()),
                        Err(v) => Value::String(v.describe(&q.ground)),
                    },
                });
                write!(out, "{}", to_text(&doc))?;
                if verdict.is_ok() { 0 } else { EXIT_FALSE }
            }
            None => EXIT_FALSE,
        },
        Command::Localize { p, file } => {
            let m = load_matroid(&file, err)?;
            write!(out, "{}", to_text(&emit_dvr(&m.localize_matroid(&p)?)))?;
            0
        }
        Command::Dressian { p, n, r, file } => match load_verified(&file, out, err)? {
            Some(m) => {
                let h = heights_at(&m, &p, n)?;
                let mut ok = report(out, "three-term", &tropical::three_term_check(&h))?;
                ok &= report(out, "single-exchange", &tropical::single_exchange_check(&h))?;
                ok &= report(out, "dressian", &tropical::dressian_check(&h, r))?;
                if ok { 0 } else { EXIT_FALSE }
            }
            None => EXIT_FALSE,
        },
        Command::Flagscan { p, n, log, file } => match load_verified(&file, out, err)? {
            Some(m) => {
                let h = heights_at(&m, &p, n)?;
                let verdict = match &log {
                    Some(path) => {
                        let f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
                        let mut w = std::io::BufWriter::new(f);
                        let v = tropical::flag_pluecker_scan(&h, Some(&mut w))?;
                        w.flush()?;
                        v
                    }
                    None => tropical::flag_pluecker_scan(&h, None)?,
                };
                if report(out, "flag", &verdict)? { 0 } else { EXIT_FALSE }
            }
            None => EXIT_FALSE,
        },
        Command::Valuated { p, file } => match load_essential(&file, out, err)? {
            Some(m) => {
                let v = tropical::valuated_matroid_check(&m.localize_matroid(&p)?)?;
                if report(out, "valuated", &v)? { 0 } else { EXIT_FALSE }
            }
            None => EXIT_FALSE,
        },
        Command::OracleVerify { max_order } => oracle_verify(max_order, out)?,
    };
    Ok(status)
}

/// Surjections over p-groups for p <= 7, squares over 2- and 3-groups.
/// Square checks are capped at order 64 to respect the pair guard.
fn oracle_verify(max_order: u64, out: &mut dyn Write) -> Result<i32> {
    if max_order > oracle::DEFAULT_BOUND {
        bail!("--max-order must be at most {}", oracle::DEFAULT_BOUND);
    }
    let mut disagreements = 0;
    let mut pairs = 0;
    for p in [2, 3, 5, 7] {
        let groups = p_groups(p, max_order);
        for src in &groups {
            let quotients = cyclic_quotients(src, oracle::DEFAULT_BOUND)?;
            for dst in &groups {
                pairs += 1;
                if quotients.contains(dst) != cyclic_surjection_exists(src, dst) {
                    disagreements += 1;
                    writeln!(out, "surjection disagreement: {src} -> {dst}")?;
                }
            }
        }
    }
    writeln!(out, "surjections: {pairs} pairs, {disagreements} disagreements")?;

    let mut quads = 0;
    let square_max = max_order.min(64);
    for p in [2, 3] {
        let groups = p_groups(p, square_max);
        for n0 in &groups {
            let achievable = achievable_squares(n0, oracle::DEFAULT_BOUND)?;
            for n1 in &groups {
                for n2 in &groups {
                    for n12 in &groups {
                        quads += 1;
                        let truth = achievable.contains(&(n1.clone(), n2.clone(), n12.clone()));
                        if truth != square_exists(n0, n1, n2, n12) {
                            disagreements += 1;
                            writeln!(out, "square disagreement: {n0}, {n1}, {n2}, {n12}")?;
                        }
                    }
                }
            }
        }
    }
    writeln!(out, "squares: {quads} quadruples, {disagreements} total disagreements")?;
    Ok(if disagreements == 0 { 0 } else { EXIT_FALSE })
}
