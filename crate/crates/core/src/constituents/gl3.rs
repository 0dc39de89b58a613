use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::ConstituentError;
use crate::ffield::Fp;

/// Frobenius polynomials 1 + c1 X + c2 X^2 + c3 X^3 of an ingested
/// three-dimensional representation, with coefficients in F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gl3Table {
    pub label: String,
    pub level: u64,
    pub nebentype: String,
    pub p: u64,
    pub hodge_tate: Vec<u32>,
    pub polys: BTreeMap<u64, [Fp; 4]>,
}

/// Parses "GL3 label level nebentype p", "HT a b c", "POLY l: c0 c1 c2 c3"
/// lines and "END".
pub fn parse_gl3(text: &str) -> Result<Vec<Gl3Table>, ConstituentError> {
    let bad = |n: usize, m: &str| ConstituentError::Malformed(format!("line {}: {m}", n + 1));
    let mut out = Vec::new();
    let mut cur: Option<Gl3Table> = None;
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        match (key, cur.as_mut()) {
            ("GL3", None) => {
                let t: Vec<&str> = rest.split_whitespace().collect();
                let [label, level, neb, p] = t[..] else { return Err(bad(n, "bad GL3 line")) };
                cur = Some(Gl3Table {
                    label: label.to_string(),
                    level: level.parse().map_err(|_| bad(n, "bad level"))?,
                    nebentype: neb.to_string(),
                    p: p.parse().map_err(|_| bad(n, "bad prime"))?,
                    hodge_tate: vec![0, 1, 2],
                    polys: BTreeMap::new(),
                });
            }
            ("HT", Some(t)) => {
                t.hodge_tate = rest.split_whitespace().map(|x| x.parse()).collect::<Result<_, _>>().map_err(|_| bad(n, "bad HT"))?;
                if t.hodge_tate.len() != 3 {
                    return Err(bad(n, "HT needs three entries"));
                }
            }
            ("POLY", Some(t)) => {
                let (ell, c) = rest.split_once(':').ok_or_else(|| bad(n, "bad POLY line"))?;
                let ell: u64 = ell.trim().parse().map_err(|_| bad(n, "bad prime"))?;
                let c: Vec<u64> = c.split_whitespace().map(|x| x.parse()).collect::<Result<_, _>>().map_err(|_| bad(n, "bad coefficient"))?;
                if c.len() != 4 || c.iter().any(|&x| x >= t.p) || c[0] != 1 || c[3] == 0 {
                    return Err(bad(n, "need 1 c1 c2 c3 with c3 != 0, reduced mod p"));
                }
                t.polys.insert(ell, [Fp(c[0] as u32), Fp(c[1] as u32), Fp(c[2] as u32), Fp(c[3] as u32)]);
            }
            ("END", Some(_)) => out.push(cur.take().unwrap()),
            _ => return Err(bad(n, "unexpected line")),
        }
    }
    if cur.is_some() {
        return Err(ConstituentError::Malformed("missing END at end of file".into()));
    }
    Ok(out)
}

/// The shipped three-dimensional tables directory.
pub fn default_gl3_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("gl3")
}

/// All tables in `dir` whose level divides N and whose prime is p.
pub fn load_gl3(dir: &Path, level: u64, p: u64) -> Result<Vec<Gl3Table>, ConstituentError> {
    let mut out = Vec::new();
    if !dir.exists() {
        return Ok(out);
    }
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?.filter_map(|e| e.ok().map(|e| e.path())).collect();
    paths.sort();
    for path in paths.into_iter().filter(|p| p.extension().is_some_and(|e| e == "txt")) {
        let tables = parse_gl3(&std::fs::read_to_string(&path)?)?;
        out.extend(tables.into_iter().filter(|t| level.is_multiple_of(t.level) && t.p == p));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round() {
        let t = parse_gl3("GL3 d 7 1 11\nHT 0 1 2\nPOLY 2: 1 3 4 5\nEND\n").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].polys[&2], [Fp(1), Fp(3), Fp(4), Fp(5)]);
        assert!(parse_gl3("GL3 d 7 1 11\nPOLY 2: 2 3 4 5\nEND\n").is_err());
        assert!(parse_gl3("GL3 d 7 1 11\nPOLY 2: 1 3 4 5\n").is_err());
        assert!(parse_gl3("POLY 2: 1 3 4 5\n").is_err());
    }

    #[test]
    fn shipped_delta() {
        let t = load_gl3(&default_gl3_dir(), 41, 21881).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].label, "delta");
        assert_eq!(t[0].polys.len(), 167);
        assert!(load_gl3(&default_gl3_dir(), 41, 4001).unwrap().is_empty());
        assert!(load_gl3(&default_gl3_dir(), 11, 21881).unwrap().is_empty());
    }
}
