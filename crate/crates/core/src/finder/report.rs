use std::fmt;

use itertools::Itertools;

use super::search::{Finder, FinderError};
use crate::constituents::{Constituent, Database};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error(transparent)]
    Finder(#[from] FinderError),
    #[error("no constituent matches {0:?}")]
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub galois_mult: usize,
    pub hecke_mult: usize,
    pub representation: String,
}

/// One result table for a level and nebentype.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportTable {
    pub level: u64,
    /// Nebentype label, "1" when trivial.
    pub nebentype: String,
    pub p: u64,
    pub r: usize,
    /// Primes with the flag true when every T(l, k) was used.
    pub computed: Vec<(u64, bool)>,
    pub rows: Vec<ReportRow>,
}

impl fmt::Display for ReportTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = if self.r == 1 { format!("GF({})", self.p) } else { format!("GF({}^{})", self.p, self.r) };
        writeln!(f, "Level N = {}. Nebentype η = {}. Field F = {}.", self.level, self.nebentype, field)?;
        let ops = self.computed.iter().map(|&(l, full)| if full { format!("T_{l}") } else { format!("T_{{{l},1}}") }).join(", ");
        writeln!(f, "Computed {ops}.")?;
        for row in &self.rows {
            writeln!(f, "{} | {} | {}", row.galois_mult, row.hecke_mult, row.representation)?;
        }
        Ok(())
    }
}

/// Parses tables written by `Display`, separated by blank lines.
pub fn parse_report(text: &str) -> Result<Vec<ReportTable>, ReportError> {
    let bad = |line: usize, msg: &str| ReportError::Malformed { line: line + 1, msg: msg.to_string() };
    let mut out: Vec<ReportTable> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("Level N = ") {
            let (level, rest) = rest.split_once(". Nebentype η = ").ok_or_else(|| bad(n, "bad header"))?;
            let (neb, rest) = rest.split_once(". Field F = GF(").ok_or_else(|| bad(n, "bad header"))?;
            let field = rest.strip_suffix(").").ok_or_else(|| bad(n, "bad field"))?;
            let (p, r) = field.split_once('^').unwrap_or((field, "1"));
            out.push(ReportTable {
                level: level.parse().map_err(|_| bad(n, "bad level"))?,
                nebentype: neb.to_string(),
                p: p.parse().map_err(|_| bad(n, "bad p"))?,
                r: r.parse().map_err(|_| bad(n, "bad r"))?,
                computed: Vec::new(),
                rows: Vec::new(),
            });
            continue;
        }
        let table = out.last_mut().ok_or_else(|| bad(n, "row before header"))?;
        if let Some(rest) = line.strip_prefix("Computed ") {
            let rest = rest.strip_suffix('.').ok_or_else(|| bad(n, "bad Computed line"))?;
            for op in rest.split(", ") {
                let op = op.strip_prefix("T_").ok_or_else(|| bad(n, "bad operator"))?;
                let entry = match op.strip_prefix('{').and_then(|x| x.strip_suffix(",1}")) {
                    Some(l) => (l.parse().map_err(|_| bad(n, "bad prime"))?, false),
                    None => (op.parse().map_err(|_| bad(n, "bad prime"))?, true),
                };
                table.computed.push(entry);
            }
            continue;
        }
        let parts: Vec<&str> = line.splitn(3, " | ").collect();
        let [g, h, rep] = parts[..] else { return Err(bad(n, "bad row")) };
        table.rows.push(ReportRow {
            galois_mult: g.parse().map_err(|_| bad(n, "bad multiplicity"))?,
            hecke_mult: h.parse().map_err(|_| bad(n, "bad multiplicity"))?,
            representation: rep.to_string(),
        });
    }
    Ok(out)
}

/// Characters first, by power of eps, then higher-dimensional constituents.
fn display_order(db: &Database, cs: &[Constituent]) -> Vec<Constituent> {
    let mut v = cs.to_vec();
    v.sort_by_cached_key(|c| (db.degree(c), c.w, db.label(c), *c));
    v
}

/// e.g. "ε^{0} ⊕ ε^{1} ⊕ ε^{2} σ_{11,2}".
pub fn representation(db: &Database, cs: &[Constituent]) -> String {
    display_order(db, cs).iter().map(|c| db.unicode_label(c)).join(" ⊕ ")
}

/// e.g. "eps0 + eps1 + eps2*sigma_11_2".
pub fn ascii_representation(db: &Database, cs: &[Constituent]) -> String {
    display_order(db, cs).iter().map(|c| db.label(c)).join(" + ")
}

/// Resolves a sum written with either grammar. Labels of conjugate
/// reductions are ambiguous; the first combination passing the HT and
/// determinant checks on the finder's primes is chosen, else the first.
pub fn parse_representation(finder: &Finder<'_>, s: &str) -> Result<Vec<Constituent>, ReportError> {
    let db = finder.database();
    let options: Vec<Vec<Constituent>> = s
        .split(['⊕', '+'])
        .map(|t| db.resolve(t.trim()).map_err(|_| ReportError::Unknown(t.trim().to_string())))
        .collect::<Result<_, _>>()?;
    let mut first = None;
    for combo in options.iter().multi_cartesian_product() {
        let mut v: Vec<Constituent> = combo.into_iter().copied().collect();
        v.sort();
        if finder.ht_ok(&v) && finder.det_ok(&v, finder.primes())? {
            return Ok(v);
        }
        first.get_or_insert(v);
    }
    first.ok_or_else(|| ReportError::Unknown(s.to_string()))
}
