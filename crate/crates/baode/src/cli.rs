//! The `baode` command line. Exit codes: 0 when every check passed, 1
//! when a check failed (a degenerate zigzag, a refuted schema, a failed
//! campaign), 2 on malformed input.

use crate::amalgam::superamalgamate;
use crate::campaign::{run_campaign, CAMPAIGN_NAMES};
use crate::error::Error;
use crate::frame::{atom_structure, complex_algebra, insep};
use crate::io::{
    load_document, parse_equation, save_document, BaoDoc, CampaignDoc, Document, FrameDoc,
    MorphismDoc,
};
use crate::report::Report;
use crate::schema::{check_schema, default_schema};
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "baode", version, about = "finite-model engine for BAOs in cylindric-polyadic signatures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for the JSON artifacts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Seed for the generated campaigns.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Check the dilated cylindrifier against every admissible
    /// permutation and presentation rather than the least one.
    #[arg(long, global = true)]
    verify_all_rho: bool,
    /// Cap on atom counts (or frame points) for generated instances.
    #[arg(long, global = true)]
    max_atoms: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Complex algebra of a frame.
    Cm { frame: PathBuf },
    /// Atom structure of an algebra.
    At { algebra: PathBuf },
    /// INSEP zigzag product of two frame morphisms into a common target.
    Zigzag { f: PathBuf, h: PathBuf },
    /// Superamalgamate an amalgamation instance.
    Amalgamate { instance: PathBuf },
    /// Check an algebra (or the complex algebra of a frame) against a
    /// schema; the default schema of its signature when none is given.
    Check {
        target: PathBuf,
        #[arg(long)]
        schema: Option<PathBuf>,
    },
    /// Run a named verification campaign.
    Property { name: String },
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(all_passed) => {
            if all_passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli) -> crate::Result<bool> {
    std::fs::create_dir_all(&cli.out)?;
    match &cli.command {
        Command::Cm { frame } => cmd_cm(frame, &cli.out),
        Command::At { algebra } => cmd_at(algebra, &cli.out),
        Command::Zigzag { f, h } => cmd_zigzag(f, h, &cli.out),
        Command::Amalgamate { instance } => cmd_amalgamate(instance, &cli.out),
        Command::Check { target, schema } => cmd_check(target, schema.as_deref(), &cli.out),
        Command::Property { name } => cmd_property(
            name,
            cli.seed,
            cli.max_atoms,
            cli.verify_all_rho,
            &cli.out,
        ),
    }
}

fn load_frame(path: &Path) -> crate::Result<crate::frame::Frame> {
    match load_document(path)? {
        Document::Frame(d) => d.build(),
        _ => Err(Error::Input(format!(
            "{}: expected a document of kind `frame`",
            path.display()
        ))),
    }
}

fn load_bao(path: &Path) -> crate::Result<crate::bao::FiniteBao> {
    match load_document(path)? {
        Document::Bao(d) => d.build(),
        _ => Err(Error::Input(format!(
            "{}: expected a document of kind `bao`",
            path.display()
        ))),
    }
}

fn cmd_cm(frame: &Path, out: &Path) -> crate::Result<bool> {
    let f = load_frame(frame)?;
    let a = complex_algebra(&f)?;
    save_document(&out.join("cm.json"), &Document::Bao(BaoDoc::of(&a)))?;
    println!(
        "pass cm: {} points, {} atoms",
        f.universe(),
        a.atom_count()
    );
    Ok(true)
}

fn cmd_at(algebra: &Path, out: &Path) -> crate::Result<bool> {
    let a = load_bao(algebra)?;
    let f = atom_structure(&a);
    save_document(&out.join("at.json"), &Document::Frame(FrameDoc::of(&f)))?;
    println!(
        "pass at: {} atoms, {} points",
        a.atom_count(),
        f.universe()
    );
    Ok(true)
}

fn cmd_zigzag(f_path: &Path, h_path: &Path, out: &Path) -> crate::Result<bool> {
    let load = |p: &Path| -> crate::Result<crate::frame::FrameMorphism> {
        match load_document(p)? {
            Document::Morphism(d) => d.build_frame(),
            _ => Err(Error::Input(format!(
                "{}: expected a document of kind `morphism`",
                p.display()
            ))),
        }
    };
    let f = load(f_path)?;
    let h = load(h_path)?;
    let z = insep(&f, &h)?;
    save_document(
        &out.join("insep.json"),
        &Document::Frame(FrameDoc::of(&z.frame)),
    )?;
    let mut report = Report::default();
    report.push(
        "insep-zigzag",
        !z.degenerate,
        Some(format!("{} pairs", z.pairs.len())),
    );
    print!("{report}");
    write_campaign(out, "zigzag", None, z.pairs.len(), &report)?;
    Ok(report.passed())
}

fn cmd_amalgamate(instance: &Path, out: &Path) -> crate::Result<bool> {
    let inst = match load_document(instance)? {
        Document::Instance(d) => d.build()?,
        _ => {
            return Err(Error::Input(format!(
                "{}: expected a document of kind `instance`",
                instance.display()
            )))
        }
    };
    let cert = superamalgamate(&inst)?;
    save_document(
        &out.join("amalgam.json"),
        &Document::Bao(BaoDoc::of(&cert.amalgam)),
    )?;
    save_document(
        &out.join("g.json"),
        &Document::Morphism(MorphismDoc::of_algebra(&cert.g)),
    )?;
    save_document(
        &out.join("k.json"),
        &Document::Morphism(MorphismDoc::of_algebra(&cert.k)),
    )?;
    print!("{}", cert.report);
    write_campaign(out, "amalgamate", None, 1, &cert.report)?;
    Ok(cert.report.passed())
}

fn cmd_check(target: &Path, schema: Option<&Path>, out: &Path) -> crate::Result<bool> {
    let a = match load_document(target)? {
        Document::Bao(d) => d.build()?,
        Document::Frame(d) => complex_algebra(&d.build()?)?,
        _ => {
            return Err(Error::Input(format!(
                "{}: expected a document of kind `bao` or `frame`",
                target.display()
            )))
        }
    };
    let axioms = match schema {
        None => default_schema(a.sig()),
        Some(p) => match load_document(p)? {
            Document::Schema(d) => d
                .axioms
                .iter()
                .map(|(name, eq)| {
                    Ok(crate::schema::SchemaAxiom {
                        name: name.clone(),
                        equation: parse_equation(eq)?,
                        positive: crate::term::is_positive_equation(&parse_equation(eq)?),
                        scope: crate::schema::Scope::Plain,
                    })
                })
                .collect::<crate::Result<Vec<_>>>()?,
            _ => {
                return Err(Error::Input(format!(
                    "{}: expected a document of kind `schema`",
                    p.display()
                )))
            }
        },
    };
    let results = check_schema(&a, &axioms)?;
    let mut report = Report::default();
    for (name, r) in &results {
        report.push(name, r.is_valid(), {
            match r {
                crate::term::CheckResult::Valid => None,
                crate::term::CheckResult::Counterexample(env) => {
                    Some(format!("refuted at {env:?}"))
                }
            }
        });
    }
    print!("{report}");
    write_campaign(out, "check", None, results.len(), &report)?;
    Ok(report.passed())
}

fn cmd_property(
    name: &str,
    seed: u64,
    max_atoms: Option<usize>,
    verify_all_rho: bool,
    out: &Path,
) -> crate::Result<bool> {
    let outcome = run_campaign(name, seed, max_atoms, verify_all_rho)?.ok_or_else(|| {
        Error::Input(format!(
            "unknown property `{name}`; expected one of {}",
            CAMPAIGN_NAMES.join(", ")
        ))
    })?;
    print!("{}", outcome.report);
    write_campaign(
        out,
        &format!("property-{name}"),
        Some(seed),
        outcome.cases,
        &outcome.report,
    )?;
    Ok(outcome.report.passed())
}

fn write_campaign(
    out: &Path,
    name: &str,
    seed: Option<u64>,
    cases: usize,
    report: &Report,
) -> crate::Result<()> {
    let doc = CampaignDoc::of(name, seed, cases, report);
    save_document(
        &out.join(format!("{name}.json")),
        &Document::Campaign(doc),
    )?;
    Ok(())
}
