use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ConstituentError;
use crate::ffield::{is_prime, roots_of_fp_poly, ExtField, Field, Fp, Fq, PolyRing, PrimeField};
use crate::Rational;

/// An element of Q(t), low coefficient first.
pub type QtElem = Vec<Rational>;

/// A newform given by its level, weight, nebentype and Hecke eigenvalues.
///
/// The coefficient field is a relative extension Q(t)(y) where t is a root
/// of the cyclotomic polynomial `base` and y is a root of `field`.
#[derive(Debug, Clone, PartialEq)]
pub struct NewformRecord {
    pub level: u64,
    pub weight: u32,
    pub nebentype: String,
    pub label: String,
    pub base: Vec<Rational>,
    pub field: Vec<QtElem>,
    pub character: BTreeMap<u64, QtElem>,
    pub ap: BTreeMap<u64, Vec<QtElem>>,
}

impl NewformRecord {
    /// Largest prime with a listed eigenvalue.
    pub fn bound(&self) -> u64 {
        self.ap.keys().next_back().copied().unwrap_or(0)
    }

    /// Degree of the coefficient field over Q.
    pub fn field_degree(&self) -> usize {
        (self.base.len() - 1) * (self.field.len() - 1)
    }

    /// Display label: sigma_23_2a becomes σ_{23,2a}.
    pub fn unicode_label(&self) -> String {
        match self.label.strip_prefix("sigma_") {
            Some(rest) => format!("σ_{{{}}}", rest.replace('_', ",")),
            None => self.label.clone(),
        }
    }

    fn validate(&self) -> Result<(), ConstituentError> {
        let bad = |m: String| ConstituentError::Malformed(format!("{}: {m}", self.label));
        if !(2..=4).contains(&self.weight) {
            return Err(bad(format!("weight {}", self.weight)));
        }
        if self.base.len() < 2 || self.field.len() < 2 {
            return Err(bad("empty field data".into()));
        }
        if self.field.last().map(|c| c.len() == 1 && c[0] == Rational::from_integer(1.into())) != Some(true) {
            return Err(bad("relative minimal polynomial is not monic".into()));
        }
        let deg = self.field.len() - 1;
        for (&ell, a) in &self.ap {
            if a.len() > deg {
                return Err(bad(format!("a_{ell} has too many terms")));
            }
        }
        for ell in (2..=self.bound()).filter(|&l| is_prime(l)) {
            if !self.level.is_multiple_of(ell) && !self.ap.contains_key(&ell) {
                return Err(ConstituentError::IncompleteTable { label: self.label.clone(), ell });
            }
        }
        let minus_one = self.level.saturating_sub(1).max(1);
        let sign = self.character.get(&minus_one).ok_or_else(|| bad("character table incomplete".into()))?;
        let expected = if self.weight.is_multiple_of(2) { 1 } else { -1 };
        let parity_ok = sign.iter().enumerate().all(|(i, c)| {
            if i == 0 {
                *c == Rational::from_integer(expected.into())
            } else {
                c.is_zero()
            }
        });
        if !parity_ok {
            return Err(ConstituentError::Parity(self.label.clone()));
        }
        Ok(())
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    s.parse().ok()
}

fn parse_qt(s: &str) -> Option<QtElem> {
    s.split(',').map(parse_rational).collect()
}

/// Parses all records in a newform data file.
pub fn parse_newforms(text: &str) -> Result<Vec<NewformRecord>, ConstituentError> {
    let bad = |n: usize, m: &str| ConstituentError::Malformed(format!("line {}: {m}", n + 1));
    let mut out = Vec::new();
    let mut cur: Option<NewformRecord> = None;
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        if key == "NEWFORM" {
            if cur.is_some() {
                return Err(bad(n, "missing END"));
            }
            let t: Vec<&str> = rest.split_whitespace().collect();
            let [level, weight, nebentype, label] = t[..] else { return Err(bad(n, "bad NEWFORM line")) };
            cur = Some(NewformRecord {
                level: level.parse().map_err(|_| bad(n, "bad level"))?,
                weight: weight.parse().map_err(|_| bad(n, "bad weight"))?,
                nebentype: nebentype.to_string(),
                label: label.to_string(),
                base: Vec::new(),
                field: Vec::new(),
                character: BTreeMap::new(),
                ap: BTreeMap::new(),
            });
            continue;
        }
        let rec = cur.as_mut().ok_or_else(|| bad(n, "data outside a record"))?;
        match key {
            "BASE" => {
                rec.base = rest.split_whitespace().map(parse_rational).collect::<Option<_>>().ok_or_else(|| bad(n, "bad BASE"))?;
            }
            "FIELD" => {
                rec.field = rest.split_whitespace().map(parse_qt).collect::<Option<_>>().ok_or_else(|| bad(n, "bad FIELD"))?;
            }
            "CHAR" => {
                for item in rest.split_whitespace() {
                    let (b, v) = item.split_once(':').ok_or_else(|| bad(n, "bad CHAR entry"))?;
                    let b: u64 = b.parse().map_err(|_| bad(n, "bad CHAR index"))?;
                    rec.character.insert(b, parse_qt(v).ok_or_else(|| bad(n, "bad CHAR value"))?);
                }
            }
            "AP" => {
                let (ell, v) = rest.split_once(':').ok_or_else(|| bad(n, "bad AP line"))?;
                let ell: u64 = ell.trim().parse().map_err(|_| bad(n, "bad AP prime"))?;
                let v: Vec<QtElem> = v.split_whitespace().map(parse_qt).collect::<Option<_>>().ok_or_else(|| bad(n, "bad AP value"))?;
                rec.ap.insert(ell, v);
            }
            "END" => {
                let rec = cur.take().unwrap();
                rec.validate()?;
                out.push(rec);
            }
            _ => return Err(bad(n, "unknown record key")),
        }
    }
    if cur.is_some() {
        return Err(ConstituentError::Malformed("missing END at end of file".into()));
    }
    Ok(out)
}

/// The shipped newform data directory.
pub fn default_newform_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("newforms")
}

/// Records of every level dividing N found in `dir` (files level_NNN.txt).
pub fn load_newforms(dir: &Path, level: u64) -> Result<Vec<NewformRecord>, ConstituentError> {
    let mut out = Vec::new();
    for d in (1..=level).filter(|d| level.is_multiple_of(*d)) {
        let path = dir.join(format!("level_{d:03}.txt"));
        if path.exists() {
            out.extend(parse_newforms(&std::fs::read_to_string(&path)?)?);
        }
    }
    Ok(out)
}

/// Reduction of a newform modulo a prime above p, with values in F_q.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub record: usize,
    /// Image of t in F_p.
    pub tau: Fp,
    /// Image of y in F_q.
    pub y: Fq,
    pub weight: u32,
    pub level: u64,
    /// Nebentype values on 0..level (0 off the units).
    pub psi: Vec<Fp>,
    pub ap: BTreeMap<u64, Fq>,
}

impl Reduction {
    pub fn psi(&self, ell: u64) -> Fp {
        self.psi[(ell % self.level.max(1)) as usize]
    }

    pub fn ap(&self, ell: u64) -> Option<&Fq> {
        self.ap.get(&ell)
    }
}

fn reduce_rational(f: &PrimeField, q: &Rational, label: &str) -> Result<Fp, ConstituentError> {
    let p: num_bigint::BigInt = (f.p() as u64).into();
    let den = q.denom().mod_floor(&p).to_u64().unwrap();
    if den == 0 {
        return Err(ConstituentError::Ramified { label: label.to_string(), p: f.p() as u64 });
    }
    let num = q.numer().mod_floor(&p).to_u64().unwrap();
    let den = f.invp(Fp(den as u32)).unwrap();
    Ok(f.mulp(Fp(num as u32), den))
}

fn eval_qt(f: &PrimeField, a: &[Rational], tau: Fp, label: &str) -> Result<Fp, ConstituentError> {
    let mut acc = Fp(0);
    for c in a.iter().rev() {
        acc = f.addp(f.mulp(acc, tau), reduce_rational(f, c, label)?);
    }
    Ok(acc)
}

/// All reductions of a record into F_q: one per root t of the base
/// polynomial in F_p and root y of the relative polynomial in F_q.
pub fn reduce(record: &NewformRecord, index: usize, field: &ExtField) -> Result<Vec<Reduction>, ConstituentError> {
    let fp = field.prime_field();
    let label = record.label.as_str();
    let ring = PolyRing::new(fp);
    if record.level.is_multiple_of(fp.p() as u64) {
        return Err(ConstituentError::Ramified { label: label.to_string(), p: fp.p() as u64 });
    }
    let base: Vec<Fp> = record.base.iter().map(|c| reduce_rational(fp, c, label)).collect::<Result<_, _>>()?;
    if !ring.is_squarefree(&ring.normalize(base.clone())) {
        return Err(ConstituentError::Ramified { label: label.to_string(), p: fp.p() as u64 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut taus = ring.roots(&ring.normalize(base), &mut rng);
    taus.sort();
    let mut out = Vec::new();
    for tau in taus {
        let rel: Vec<Fp> = record.field.iter().map(|c| eval_qt(fp, c, tau, label)).collect::<Result<_, _>>()?;
        let rel = ring.normalize(rel);
        if !ring.is_squarefree(&rel) {
            return Err(ConstituentError::Ramified { label: label.to_string(), p: fp.p() as u64 });
        }
        let n1 = record.level.max(1);
        let mut psi = vec![Fp(0); n1 as usize];
        for (&b, v) in &record.character {
            psi[(b % n1) as usize] = eval_qt(fp, v, tau, label)?;
        }
        if n1 == 1 {
            psi[0] = Fp(1);
        }
        let mut tables = BTreeMap::new();
        for (&ell, a) in &record.ap {
            let c: Vec<Fp> = a.iter().map(|x| eval_qt(fp, x, tau, label)).collect::<Result<_, _>>()?;
            tables.insert(ell, c);
        }
        for y in roots_of_fp_poly(field, &rel) {
            let powers: Vec<Fq> = std::iter::successors(Some(field.one()), |x| Some(field.mul(x, &y)))
                .take(rel.len() - 1)
                .collect();
            let ap = tables
                .iter()
                .map(|(&ell, c)| {
                    let v = c.iter().zip(&powers).fold(field.zero(), |acc, (&ci, yp)| field.add(&acc, &field.scale_prime(yp, ci)));
                    (ell, v)
                })
                .collect();
            out.push(Reduction { record: index, tau, y, weight: record.weight, level: n1, psi: psi.clone(), ap });
        }
    }
    Ok(out)
}

/// ell + 1 - #E(F_ell) for y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6,
/// by counting points.
pub fn ap_from_elliptic_curve(a: [i64; 5], ell: u64) -> Result<i64, ConstituentError> {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let disc = num_bigint::BigInt::from(-b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6);
    if ell < 2 || !is_prime(ell) {
        return Err(ConstituentError::Malformed(format!("{ell} is not prime")));
    }
    if (&disc % num_bigint::BigInt::from(ell)).is_zero() {
        return Err(ConstituentError::BadReduction(ell));
    }
    let l = ell as i64;
    let m = |v: i64| v.rem_euclid(l);
    let mut count = 1i64;
    for x in 0..l {
        let rhs = m(m(m(x * x) * x) + m(a2 * m(x * x)) + m(a4 * x) + a6);
        for y in 0..l {
            if m(m(y * y) + m(a1 * m(x * y)) + m(a3 * y)) == rhs {
                count += 1;
            }
        }
    }
    let ap = l + 1 - count;
    Ok(ap)
}
