mod config;
mod pipeline;

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::RunConfig;
use pipeline::Resolved;
use sl4coh::dirichlet::CharacterGroup;
use sl4coh::ffield::next_admissible_prime;

#[derive(Parser)]
#[command(name = "sl4coh", version, about = "Cohomology of Gamma_0(N) in SL_4(Z) with nebentype, Hecke eigenpackets and Galois representation matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// First prime p >= MIN with p ∤ N and the unit group exponent of N dividing p - 1.
    AdmissiblePrime {
        n: u64,
        #[arg(long, default_value_t = 1000)]
        min: u64,
    },
    /// Lists the characters mod N with values in F_p.
    Characters { n: u64, p: u64 },
    /// Builds the boundary matrices and writes them to the output directory.
    BuildComplex { config: PathBuf },
    /// Prints dim H_1.
    Homology { config: PathBuf },
    /// Reads and validates the Hecke matrices.
    HeckeValidate { config: PathBuf },
    /// Splits H_1 into simultaneous eigenspaces and writes their packets.
    Eigenspaces { config: PathBuf },
    /// Writes the eigenpacket of a direct sum such as "eps0 + eps1 + eps2*sigma_11_2".
    Synthesize {
        config: PathBuf,
        sum: String,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Matches one eigenpacket file against sums of known constituents.
    Find { config: PathBuf, packet: PathBuf },
    /// Identifies all eigenspaces and writes the result table.
    Report { config: PathBuf },
    /// Runs every stage the configured inputs allow.
    Run { config: PathBuf },
}

fn resolve(path: &PathBuf) -> Result<Resolved> {
    let config = RunConfig::load(path).with_context(|| format!("reading config {}", path.display()))?;
    Resolved::new(config)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::AdmissiblePrime { n, min } => println!("{}", next_admissible_prime(n, min)),
        Command::Characters { n, p } => {
            let group = CharacterGroup::new(n, p)?;
            println!("label\torder\tparity\tconductor");
            for chi in group.all() {
                let parity = if chi.is_even() { "even" } else { "odd" };
                println!("{}\t{}\t{}\t{}", chi.ascii_label(), chi.order(), parity, chi.conductor());
            }
        }
        Command::BuildComplex { config } => {
            let res = resolve(&config)?;
            let e1 = pipeline::complex(&res).context("stage complex")?;
            print!("{}", pipeline::complex_summary(&e1));
        }
        Command::Homology { config } => {
            let res = resolve(&config)?;
            println!("H1 dimension {}", pipeline::homology(&res)?);
        }
        Command::HeckeValidate { config } => {
            let mut res = resolve(&config)?;
            let alg = pipeline::hecke_algebra(&mut res).context("stage hecke")?;
            for op in alg.operators() {
                println!("T({}, {}) ok", op.ell, op.k);
            }
            println!("{} operators on a space of dimension {}", alg.operators().len(), alg.dim());
        }
        Command::Eigenspaces { config } => {
            let mut res = resolve(&config)?;
            let spaces = pipeline::eigenspaces(&mut res).context("stage eigenspaces")?;
            for (i, (packet, m)) in spaces.iter().enumerate() {
                println!("eigenspace {i}: multiplicity {m}, {} eigenvalues", packet.values.len());
            }
        }
        Command::Synthesize { config, sum, out } => {
            let mut res = resolve(&config)?;
            let text = pipeline::synthesize(&mut res, &sum).context("stage synthesize")?;
            match out {
                Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
        }
        Command::Find { config, packet } => {
            let mut res = resolve(&config)?;
            let packets = pipeline::read_packets(&mut res, &packet)?;
            for (p, _) in &packets {
                let (db, out) = pipeline::find(&mut res, p).context("stage find")?;
                print!("{}", pipeline::describe(&db, &out));
            }
        }
        Command::Report { config } => {
            let mut res = resolve(&config)?;
            let spaces = match res.config.packets.clone() {
                Some(p) if res.config.hecke.is_none() => pipeline::read_packets(&mut res, &p)?,
                _ => pipeline::eigenspaces(&mut res).context("stage eigenspaces")?,
            };
            print!("{}", pipeline::report(&mut res, &spaces).context("stage report")?);
        }
        Command::Run { config } => {
            let mut res = resolve(&config)?;
            print!("{}", pipeline::run(&mut res)?);
        }
    }
    Ok(())
}
