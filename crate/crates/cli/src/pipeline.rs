//! Pipeline stages driven by a `RunConfig`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use sl4coh::constituents::{load_gl3, load_newforms, splitting_degree, Database};
use sl4coh::dirichlet::{CharacterGroup, DirichletChar};
use sl4coh::ffield::{is_admissible_prime, is_prime, next_admissible_prime, unit_group_exponent, ExtField};
use sl4coh::finder::{
    ascii_representation, galois_multiplicity, representation, system_of_eigenspace, Finder, FinderOutcome, ReportRow,
    ReportTable,
};
use sl4coh::hecke::{read_hecke, read_packet, simultaneous_eigenspaces, write_packet, Eigenpacket, HeckeAlgebra};
use sl4coh::orbitcomplex::{build, E1Term};
use sl4coh::sparsela::{load, persist};
use sl4coh::voronoi::{enumerate_cell_classes, read_cells};

use crate::config::{Choice, Nebentype, RunConfig};

/// Largest extension degree tried when r is "auto".
const MAX_AUTO_R: usize = 60;

/// A config with p, r and the nebentype resolved.
pub struct Resolved {
    pub config: RunConfig,
    pub p: u64,
    pub group: CharacterGroup,
    pub eta: DirichletChar,
    r: Option<usize>,
}

impl Resolved {
    pub fn new(config: RunConfig) -> Result<Self> {
        let n = config.level;
        let p = match config.p {
            Choice::Auto => next_admissible_prime(n, config.min_prime),
            Choice::Fixed(p) => p,
        };
        if !is_prime(p) || !is_admissible_prime(p, n)? {
            bail!("p = {p} is not admissible for N = {n}: need a prime p > 5, p ∤ N, with {} | p - 1", unit_group_exponent(n));
        }
        for &(l, _) in &config.primes {
            if !is_prime(l) || n.is_multiple_of(l) || l == p {
                bail!("prime list entry {l} is not a prime coprime to pN");
            }
        }
        let group = CharacterGroup::new(n, p)?;
        let eta = match &config.nebentype {
            Nebentype::Label(l) => group.parse_label(l)?,
            Nebentype::Exponents(e) => group.character(e)?,
        };
        let r = match config.r {
            Choice::Fixed(r) => Some(r as usize),
            Choice::Auto => None,
        };
        Ok(Resolved { config, p, group, eta, r })
    }

    /// The working field degree; "auto" takes the splitting degree of the
    /// ingested newform fields.
    pub fn r(&mut self) -> Result<usize> {
        if let Some(r) = self.r {
            return Ok(r);
        }
        let records = load_newforms(&self.config.newforms, self.config.level)?;
        let r = splitting_degree(&records, self.p, MAX_AUTO_R)?
            .with_context(|| format!("newform fields do not split over F_(p^r) for r <= {MAX_AUTO_R}"))?;
        self.r = Some(r);
        Ok(r)
    }

    pub fn field(&mut self) -> Result<ExtField> {
        let r = self.r()?;
        Ok(ExtField::new(self.p, r)?)
    }

    pub fn database(&mut self) -> Result<Database> {
        let field = self.field()?;
        let n = self.config.level;
        let records = load_newforms(&self.config.newforms, n)?;
        let gl3 = load_gl3(&self.config.gl3, n, self.p)?;
        Ok(Database::new(n, field, records, gl3)?)
    }

    fn output(&self) -> Result<&Path> {
        fs::create_dir_all(&self.config.output).with_context(|| format!("creating {}", self.config.output.display()))?;
        Ok(&self.config.output)
    }

    fn stamp(&self) -> String {
        format!("N {} eta {} p {}\n", self.config.level, self.eta.ascii_label(), self.p)
    }
}

/// Builds the E^1 term, or loads it from the output directory when an
/// earlier run with the same N, eta and p left it there.
pub fn complex(res: &Resolved) -> Result<E1Term> {
    let out = res.output()?;
    let (d1p, d2p, stamp) = (out.join("d1.txt"), out.join("d2.txt"), out.join("complex.stamp"));
    let field = res.group.field().clone();
    if fs::read_to_string(&stamp).is_ok_and(|s| s == res.stamp()) && d1p.exists() && d2p.exists() {
        let d1 = load(&field, &d1p)?;
        let d2 = load(&field, &d2p)?;
        let dims = vec![d1.ncols(), d1.nrows(), d2.nrows()];
        return Ok(E1Term { dims, d1, d2 });
    }
    let cells = match &res.config.cells {
        Some(path) => read_cells(path).with_context(|| format!("reading {}", path.display()))?,
        None => enumerate_cell_classes(4)?,
    };
    let (_, e1) = build(&cells, &res.eta)?;
    persist(&e1.d1, &d1p)?;
    persist(&e1.d2, &d2p)?;
    fs::write(&stamp, res.stamp())?;
    Ok(e1)
}

pub fn complex_summary(e1: &E1Term) -> String {
    format!(
        "E1 dimensions {:?}\nd2: {}x{}\nd1: {}x{}\n",
        e1.dims,
        e1.d2.nrows(),
        e1.d2.ncols(),
        e1.d1.nrows(),
        e1.d1.ncols()
    )
}

pub fn homology(res: &Resolved) -> Result<usize> {
    let e1 = complex(res).context("stage complex")?;
    let h1 = e1.h1_dim();
    fs::write(res.output()?.join("homology.txt"), format!("H1 {h1}\n"))?;
    Ok(h1)
}

fn hecke_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    v.sort();
    Ok(v)
}

/// Reads and validates every Hecke matrix in the configured directory.
pub fn hecke_algebra(res: &mut Resolved) -> Result<HeckeAlgebra<ExtField>> {
    let dir = res.config.hecke.clone().context("no hecke directory configured")?;
    let field = res.field()?;
    let mut alg: Option<HeckeAlgebra<ExtField>> = None;
    for path in hecke_files(&dir)? {
        let (header, op) = read_hecke(&field, fs::File::open(&path)?).with_context(|| format!("reading {}", path.display()))?;
        if header.level != res.config.level {
            bail!("{}: level {} does not match {}", path.display(), header.level, res.config.level);
        }
        let eta = res.group.parse_label(&header.eta)?;
        if eta != res.eta {
            bail!("{}: nebentype {} does not match {}", path.display(), header.eta, res.eta.ascii_label());
        }
        let a = alg.get_or_insert_with(|| HeckeAlgebra::new(4, op.matrix.nrows(), field.clone(), res.eta.clone()));
        a.insert(op).with_context(|| format!("validating {}", path.display()))?;
    }
    alg.context("no Hecke matrices found")
}

/// Simultaneous eigenspaces: (packet, Hecke multiplicity).
pub fn eigenspaces(res: &mut Resolved) -> Result<Vec<(Eigenpacket<ExtField>, usize)>> {
    let alg = hecke_algebra(res)?;
    let spaces = simultaneous_eigenspaces(&alg)?;
    let out = res.output()?.join("packets");
    fs::create_dir_all(&out)?;
    let field = res.field()?;
    for (i, s) in spaces.iter().enumerate() {
        write_packet(&field, &s.packet, fs::File::create(out.join(format!("packet_{i:03}.txt")))?)?;
    }
    Ok(spaces.into_iter().map(|s| { let m = s.hecke_multiplicity(); (s.packet, m) }).collect())
}

/// Packets from a file or every .txt file in a directory, each with Hecke
/// multiplicity one.
pub fn read_packets(res: &mut Resolved, path: &Path) -> Result<Vec<(Eigenpacket<ExtField>, usize)>> {
    let field = res.field()?;
    let files = if path.is_dir() { hecke_files(path)? } else { vec![path.to_path_buf()] };
    files
        .iter()
        .map(|f| {
            let p = read_packet(&field, fs::File::open(f)?).with_context(|| format!("reading {}", f.display()))?;
            Ok((p, 1))
        })
        .collect()
}

fn prime_list(res: &Resolved) -> Vec<u64> {
    res.config.primes.iter().map(|&(l, _)| l).collect()
}

pub fn finder<'a>(res: &Resolved, db: &'a Database) -> Result<Finder<'a>> {
    Ok(Finder::new(db, &res.eta, &prime_list(res))?.with_multisets(res.config.multisets))
}

/// Eigenpacket of a named direct sum on the configured primes.
pub fn synthesize(res: &mut Resolved, sum: &str) -> Result<String> {
    let db = res.database()?;
    let finder = finder(res, &db)?;
    let cs = sl4coh::finder::parse_representation(&finder, sum)?;
    let packet = finder.synthesize(&cs, &res.config.primes)?;
    let mut buf = Vec::new();
    write_packet(db.field(), &packet, &mut buf)?;
    Ok(String::from_utf8(buf)?)
}

pub fn describe(db: &Database, out: &FinderOutcome) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "candidates {}", out.candidates.len());
    for a in &out.assignments {
        let _ = writeln!(
            s,
            "{} | ht {} | det {} | {:?}",
            representation(db, &a.constituents),
            if a.ht_ok { "ok" } else { "fail" },
            if a.det_ok { "ok" } else { "fail" },
            a.pattern
        );
    }
    let status = match (out.assignments.len(), out.unique, out.coincident) {
        (0, ..) => "none".to_string(),
        (_, true, _) => "unique".to_string(),
        (_, _, true) => "coincident".to_string(),
        _ => format!("ambiguous; separating primes {:?}", out.separating_primes),
    };
    let _ = writeln!(s, "status {status}");
    s
}

/// Runs the finder on one packet.
pub fn find(res: &mut Resolved, packet: &Eigenpacket<ExtField>) -> Result<(Database, FinderOutcome)> {
    let db = res.database()?;
    let out = {
        let finder = finder(res, &db)?;
        let sys = system_of_eigenspace(db.field(), packet)?;
        finder.find(&sys)?
    };
    Ok((db, out))
}

/// Identifies each eigenspace, groups Galois conjugates, and writes
/// report.txt and results.tsv to the output directory.
pub fn report(res: &mut Resolved, spaces: &[(Eigenpacket<ExtField>, usize)]) -> Result<ReportTable> {
    let db = res.database()?;
    let finder = finder(res, &db)?;
    let mut chosen = Vec::new();
    let mut tsv = String::from("eigenspace\thecke_mult\tassignment\tht_ok\tdet_ok\tpattern\tstatus\n");
    for (i, (packet, hm)) in spaces.iter().enumerate() {
        let sys = system_of_eigenspace(db.field(), packet)?;
        let out = finder.find(&sys).with_context(|| format!("eigenspace {i}"))?;
        let best = out.assignments.iter().find(|a| a.ht_ok && a.det_ok).or(out.assignments.first());
        let status = if out.unique { "unique" } else if out.coincident { "coincident" } else if best.is_none() { "none" } else { "ambiguous" };
        match best {
            Some(a) => {
                let _ = writeln!(
                    tsv,
                    "{i}\t{hm}\t{}\t{}\t{}\t{:?}\t{status}",
                    ascii_representation(&db, &a.constituents),
                    a.ht_ok,
                    a.det_ok,
                    a.pattern
                );
                chosen.push((a.constituents.clone(), *hm));
            }
            None => {
                let _ = writeln!(tsv, "{i}\t{hm}\t-\t-\t-\t-\t{status}");
            }
        }
    }
    let sums: Vec<_> = chosen.iter().map(|(c, _)| c.clone()).collect();
    let mut rows: Vec<ReportRow> = galois_multiplicity(&db, &sums)
        .into_iter()
        .map(|g| ReportRow { galois_mult: g.len(), hecke_mult: chosen[g[0]].1, representation: representation(&db, &chosen[g[0]].0) })
        .collect();
    rows.sort_by(|a, b| a.representation.cmp(&b.representation));
    let table = ReportTable {
        level: res.config.level,
        nebentype: res.eta.label(),
        p: res.p,
        r: res.r()?,
        computed: res.config.primes.clone(),
        rows,
    };
    let out = res.output()?;
    fs::write(out.join("report.txt"), table.to_string())?;
    fs::write(out.join("results.tsv"), tsv)?;
    Ok(table)
}

/// All stages the inputs allow: complex and homology always, then the
/// Hecke and finder stages when matrices or packets are configured.
pub fn run(res: &mut Resolved) -> Result<String> {
    let mut log = String::new();
    let e1 = complex(res).context("stage complex")?;
    log.push_str(&complex_summary(&e1));
    let h1 = e1.h1_dim();
    fs::write(res.output()?.join("homology.txt"), format!("H1 {h1}\n"))?;
    let _ = writeln!(log, "H1 dimension {h1}");
    let spaces = if res.config.hecke.is_some() {
        Some(eigenspaces(res).context("stage eigenspaces")?)
    } else if let Some(p) = res.config.packets.clone() {
        Some(read_packets(res, &p).context("stage packets")?)
    } else {
        None
    };
    if let Some(spaces) = spaces {
        let table = report(res, &spaces).context("stage report")?;
        log.push_str(&table.to_string());
    }
    Ok(log)
}
