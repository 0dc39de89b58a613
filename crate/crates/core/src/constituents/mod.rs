//! Known Galois representations mod p: twists of characters by powers of
//! the cyclotomic character, reductions of newforms, their symmetric
//! squares, and ingested three-dimensional tables.

mod gl3;
mod newform;

use rayon::prelude::*;

pub use gl3::{default_gl3_dir, load_gl3, parse_gl3, Gl3Table};
pub use newform::{
    ap_from_elliptic_curve, default_newform_dir, load_newforms, parse_newforms, reduce, NewformRecord, QtElem, Reduction,
};

use crate::dirichlet::{cyclotomic_power, CharError, CharacterGroup, DirichletChar};
use crate::ffield::{ExtField, Field, FieldError, Fp, Fq};

#[derive(Debug, thiserror::Error)]
pub enum ConstituentError {
    #[error("malformed data: {0}")]
    Malformed(String),
    #[error("{label}: no eigenvalue for the prime {ell}")]
    IncompleteTable { label: String, ell: u64 },
    #[error("{0}: nebentype parity does not match the weight")]
    Parity(String),
    #[error("{label} is ramified at {p}")]
    Ramified { label: String, p: u64 },
    #[error("curve has bad reduction at {0}")]
    BadReduction(u64),
    #[error("{label}: no data at {ell}")]
    MissingPrime { label: String, ell: u64 },
    #[error("unknown constituent {0:?}")]
    UnknownLabel(String),
    #[error(transparent)]
    Character(#[from] CharError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The untwisted part of a constituent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    /// The trivial character.
    One,
    /// Index into the reductions.
    Newform(usize),
    /// Symmetric square of a reduction.
    Sym2(usize),
    /// Index into the ingested three-dimensional tables.
    Gl3(usize),
}

/// A base twisted by chi * eps^w, chi indexing the characters mod N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constituent {
    pub base: Base,
    pub chi: usize,
    pub w: u32,
}

/// Constituents related by conjugating newform coefficients share a key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaloisKey {
    kind: u8,
    source: usize,
    chi: usize,
    w: u32,
}

/// Constituent database for a level N over a field F_q.
#[derive(Debug, Clone)]
pub struct Database {
    level: u64,
    field: ExtField,
    group: CharacterGroup,
    chars: Vec<DirichletChar>,
    records: Vec<NewformRecord>,
    reductions: Vec<Reduction>,
    gl3: Vec<Gl3Table>,
}

impl Database {
    /// Reduces every record into `field`; embeddings outside F_q are skipped.
    pub fn new(level: u64, field: ExtField, records: Vec<NewformRecord>, gl3: Vec<Gl3Table>) -> Result<Self, ConstituentError> {
        let p = field.p() as u64;
        let group = CharacterGroup::new(level, p)?;
        let chars = group.all();
        let records: Vec<NewformRecord> = records.into_iter().filter(|r| level.is_multiple_of(r.level.max(1))).collect();
        let reductions = records
            .par_iter()
            .enumerate()
            .map(|(i, r)| reduce(r, i, &field))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .collect();
        let gl3 = gl3.into_iter().filter(|t| level.is_multiple_of(t.level) && t.p == p).collect();
        Ok(Database { level, field, group, chars, records, reductions, gl3 })
    }

    /// Database from the shipped data files.
    pub fn shipped(level: u64, field: ExtField) -> Result<Self, ConstituentError> {
        let records = load_newforms(&default_newform_dir(), level)?;
        let gl3 = load_gl3(&default_gl3_dir(), level, field.p() as u64)?;
        Self::new(level, field, records, gl3)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn group(&self) -> &CharacterGroup {
        &self.group
    }

    pub fn characters(&self) -> &[DirichletChar] {
        &self.chars
    }

    pub fn records(&self) -> &[NewformRecord] {
        &self.records
    }

    pub fn reductions(&self) -> &[Reduction] {
        &self.reductions
    }

    pub fn gl3_tables(&self) -> &[Gl3Table] {
        &self.gl3
    }

    /// Index of a character mod N in `characters`.
    pub fn character_index(&self, chi: &DirichletChar) -> Option<usize> {
        self.chars.iter().position(|c| c == chi)
    }

    fn twists(&self, base: Base) -> impl Iterator<Item = Constituent> + '_ {
        (0..self.chars.len()).flat_map(move |chi| (0..4).map(move |w| Constituent { base, chi, w }))
    }

    /// chi * eps^w for every character mod N and w in 0..4.
    pub fn l1(&self) -> Vec<Constituent> {
        self.twists(Base::One).collect()
    }

    /// Every reduction of every newform, untwisted.
    pub fn l2_0(&self) -> Vec<Constituent> {
        (0..self.reductions.len()).map(|i| Constituent { base: Base::Newform(i), chi: 0, w: 0 }).collect()
    }

    /// All twists of the reductions by L1.
    pub fn l2(&self) -> Vec<Constituent> {
        (0..self.reductions.len()).flat_map(|i| self.twists(Base::Newform(i))).collect()
    }

    /// All twists of symmetric squares and ingested tables by L1.
    pub fn l3(&self) -> Vec<Constituent> {
        let sym = (0..self.reductions.len()).map(Base::Sym2);
        let ing = (0..self.gl3.len()).map(Base::Gl3);
        sym.chain(ing).flat_map(|b| self.twists(b)).collect()
    }

    /// L1, L2 and L3 together.
    pub fn all(&self) -> Vec<Constituent> {
        let mut v = self.l1();
        v.extend(self.l2());
        v.extend(self.l3());
        v
    }

    pub fn base_degree(&self, base: Base) -> usize {
        match base {
            Base::One => 1,
            Base::Newform(_) => 2,
            Base::Sym2(_) | Base::Gl3(_) => 3,
        }
    }

    pub fn degree(&self, c: &Constituent) -> usize {
        self.base_degree(c.base)
    }

    pub fn hodge_tate(&self, c: &Constituent) -> Vec<u32> {
        let base = match c.base {
            Base::One => vec![0],
            Base::Newform(i) => vec![0, self.reductions[i].weight - 1],
            Base::Sym2(i) => {
                let k = self.reductions[i].weight - 1;
                vec![0, k, 2 * k]
            }
            Base::Gl3(i) => self.gl3[i].hodge_tate.clone(),
        };
        let mut v: Vec<u32> = base.into_iter().map(|h| h + c.w).collect();
        v.sort_unstable();
        v
    }

    /// chi(l) l^w in F_p.
    pub fn twist_scalar(&self, chi: usize, w: u32, ell: u64) -> Fp {
        let f = self.group.field();
        f.mulp(self.chars[chi].eval(ell as i64), cyclotomic_power(f, w, ell))
    }

    /// Whether the base has Frobenius data at l.
    pub fn has_data(&self, base: Base, ell: u64) -> bool {
        if self.level.is_multiple_of(ell) || self.field.p() as u64 == ell {
            return false;
        }
        match base {
            Base::One => true,
            Base::Newform(i) | Base::Sym2(i) => self.reductions[i].ap(ell).is_some(),
            Base::Gl3(i) => self.gl3[i].polys.contains_key(&ell),
        }
    }

    /// Frobenius polynomial of the untwisted base at l, low first.
    pub fn base_poly(&self, base: Base, ell: u64) -> Result<Vec<Fq>, ConstituentError> {
        let f = &self.field;
        if !self.has_data(base, ell) {
            return Err(ConstituentError::MissingPrime { label: self.base_label(base), ell });
        }
        Ok(match base {
            Base::One => vec![f.one(), f.neg(&f.one())],
            Base::Newform(i) => {
                let (a, d) = self.trace_det(i, ell);
                vec![f.one(), f.neg(&a), d]
            }
            Base::Sym2(i) => {
                let (a, d) = self.trace_det(i, ell);
                sym2_poly(f, &a, &d)
            }
            Base::Gl3(i) => self.gl3[i].polys[&ell].iter().map(|&c| f.from_prime(c)).collect(),
        })
    }

    fn trace_det(&self, i: usize, ell: u64) -> (Fq, Fq) {
        let r = &self.reductions[i];
        let fp = self.group.field();
        let d = fp.mulp(r.psi(ell), cyclotomic_power(fp, r.weight - 1, ell));
        (r.ap(ell).unwrap().clone(), self.field.from_prime(d))
    }

    /// det(1 - rho(Frob_l) X) for the twisted constituent.
    pub fn frob_poly(&self, c: &Constituent, ell: u64) -> Result<Vec<Fq>, ConstituentError> {
        let base = self.base_poly(c.base, ell)?;
        Ok(twist_poly(&self.field, &base, self.twist_scalar(c.chi, c.w, ell)))
    }

    /// The determinant character of the constituent at l.
    pub fn det_value(&self, c: &Constituent, ell: u64) -> Result<Fq, ConstituentError> {
        let f = &self.field;
        let s = self.twist_scalar(c.chi, c.w, ell);
        let sd = self.group.field().powp(s, self.degree(c) as u64);
        let base = match c.base {
            Base::One => f.one(),
            Base::Newform(i) => self.trace_det(i, ell).1,
            Base::Sym2(i) => {
                let d = self.trace_det(i, ell).1;
                f.mul(&f.mul(&d, &d), &d)
            }
            Base::Gl3(i) => {
                let c3 = self.gl3[i].polys.get(&ell).ok_or_else(|| ConstituentError::MissingPrime { label: self.gl3[i].label.clone(), ell })?[3];
                f.from_prime(self.group.field().negp(c3))
            }
        };
        Ok(f.scale_prime(&base, sd))
    }

    pub fn galois_key(&self, c: &Constituent) -> GaloisKey {
        let (kind, source) = match c.base {
            Base::One => (0, 0),
            Base::Newform(i) => (1, self.reductions[i].record),
            Base::Sym2(i) => (2, self.reductions[i].record),
            Base::Gl3(i) => (3, i),
        };
        GaloisKey { kind, source, chi: c.chi, w: c.w }
    }

    /// ASCII label of the untwisted base: "", "sigma_11_2", "Sym2(sigma_11_2)", "delta".
    pub fn base_label(&self, base: Base) -> String {
        match base {
            Base::One => String::new(),
            Base::Newform(i) => self.records[self.reductions[i].record].label.clone(),
            Base::Sym2(i) => format!("Sym2({})", self.records[self.reductions[i].record].label),
            Base::Gl3(i) => self.gl3[i].label.clone(),
        }
    }

    fn base_unicode(&self, base: Base) -> String {
        match base {
            Base::One => String::new(),
            Base::Newform(i) => self.records[self.reductions[i].record].unicode_label(),
            Base::Sym2(i) => format!("Sym²({})", self.records[self.reductions[i].record].unicode_label()),
            Base::Gl3(i) => match self.gl3[i].label.as_str() {
                "delta" => "δ".to_string(),
                l => l.to_string(),
            },
        }
    }

    /// e.g. "chi_24_2*eps3", "eps2*sigma_11_2", "eps1*Sym2(sigma_29_2d)".
    pub fn label(&self, c: &Constituent) -> String {
        let mut parts = Vec::new();
        if !self.chars[c.chi].is_trivial() {
            parts.push(self.chars[c.chi].ascii_label());
        }
        parts.push(format!("eps{}", c.w));
        if c.base != Base::One {
            parts.push(self.base_label(c.base));
        }
        parts.join("*")
    }

    /// e.g. "χ_{24,2} ε^{3}", "ε^{2} σ_{11,2}", "ε^{1} Sym²(σ_{29,2d})".
    pub fn unicode_label(&self, c: &Constituent) -> String {
        let mut parts = Vec::new();
        if !self.chars[c.chi].is_trivial() {
            parts.push(self.chars[c.chi].label());
        }
        parts.push(format!("ε^{{{}}}", c.w));
        if c.base != Base::One {
            parts.push(self.base_unicode(c.base));
        }
        parts.join(" ")
    }

    /// Every constituent with the given ASCII or Unicode label; conjugate
    /// reductions of one newform share a label.
    pub fn resolve(&self, label: &str) -> Result<Vec<Constituent>, ConstituentError> {
        let err = || ConstituentError::UnknownLabel(label.to_string());
        let s = normalize_label(label);
        let pos = s.find("eps").ok_or_else(err)?;
        let (chi_part, rest) = s.split_at(pos);
        let rest = &rest[3..];
        let digits = rest.chars().take_while(|c| c.is_ascii_digit()).count();
        let w: u32 = rest[..digits].parse().map_err(|_| err())?;
        if w > 3 {
            return Err(err());
        }
        let base_part = rest[digits..].trim_start_matches('*');
        let chi_part = chi_part.trim_end_matches('*');
        let chi = if chi_part.is_empty() { self.group.trivial() } else { self.group.parse_label(chi_part).map_err(|_| err())? };
        let chi = self.character_index(&chi).ok_or_else(err)?;
        let bases: Vec<Base> = if base_part.is_empty() {
            vec![Base::One]
        } else if let Some(inner) = base_part.strip_prefix("Sym2(").and_then(|x| x.strip_suffix(')')) {
            self.reductions_of(inner).into_iter().map(Base::Sym2).collect()
        } else {
            let mut b: Vec<Base> = self.reductions_of(base_part).into_iter().map(Base::Newform).collect();
            b.extend(self.gl3.iter().enumerate().filter(|(_, t)| t.label == base_part).map(|(i, _)| Base::Gl3(i)));
            b
        };
        if bases.is_empty() {
            return Err(err());
        }
        Ok(bases.into_iter().map(|base| Constituent { base, chi, w }).collect())
    }

    fn reductions_of(&self, label: &str) -> Vec<usize> {
        (0..self.reductions.len()).filter(|&i| self.records[self.reductions[i].record].label == label).collect()
    }
}

/// Smallest r with every record fully split over F_{p^r}, searching r up
/// to `max`; None when some record needs more.
pub fn splitting_degree(records: &[NewformRecord], p: u64, max: usize) -> Result<Option<usize>, ConstituentError> {
    let mut need: Vec<(usize, usize)> = Vec::new();
    let mut open: Vec<usize> = (0..records.len()).collect();
    for r in 1..=max {
        if open.is_empty() {
            break;
        }
        let field = ExtField::new(p, r)?;
        let mut still = Vec::new();
        for i in open {
            if reduce(&records[i], i, &field)?.len() == records[i].field_degree() {
                need.push((i, r));
            } else {
                still.push(i);
            }
        }
        open = still;
    }
    if !open.is_empty() {
        return Ok(None);
    }
    Ok(Some(need.iter().fold(1, |acc, &(_, r)| num_integer::lcm(acc, r))))
}

/// Frobenius polynomial of Sym^2 of a two-dimensional representation with
/// trace a and determinant d.
pub fn sym2_poly<F: Field>(f: &F, a: &F::Elem, d: &F::Elem) -> Vec<F::Elem> {
    let e1 = f.sub(&f.mul(a, a), d);
    let e2 = f.mul(d, &e1);
    let e3 = f.mul(&f.mul(d, d), d);
    vec![f.one(), f.neg(&e1), e2, f.neg(&e3)]
}

/// Substitutes X -> s X.
pub fn twist_poly(f: &ExtField, poly: &[Fq], s: Fp) -> Vec<Fq> {
    let fp = f.prime_field();
    let mut t = Fp(1);
    poly.iter()
        .map(|c| {
            let v = f.scale_prime(c, t);
            t = fp.mulp(t, s);
            v
        })
        .collect()
}

/// Rewrites Unicode labels in the ASCII grammar and drops whitespace.
pub fn normalize_label(label: &str) -> String {
    let mut s: String = label.chars().filter(|c| !c.is_whitespace()).collect();
    s = s.replace("Sym²", "Sym2").replace("Sym^2", "Sym2").replace('δ', "delta");
    // ε^w and ε^{w}
    let mut out = String::new();
    let mut it = s.chars().peekable();
    while let Some(c) = it.next() {
        match c {
            'ε' => {
                out.push_str("*eps");
                if it.peek() == Some(&'^') {
                    it.next();
                }
                let braced = it.peek() == Some(&'{');
                if braced {
                    it.next();
                }
                while let Some(&d) = it.peek() {
                    if d.is_ascii_digit() {
                        out.push(d);
                        it.next();
                    } else {
                        break;
                    }
                }
                if braced && it.peek() == Some(&'}') {
                    it.next();
                }
                out.push('*');
            }
            'σ' => {
                out.push_str("sigma_");
                if it.peek() == Some(&'_') {
                    it.next();
                }
                if it.peek() == Some(&'{') {
                    it.next();
                    for d in it.by_ref() {
                        if d == '}' {
                            break;
                        }
                        out.push(if d == ',' { '_' } else { d });
                    }
                }
            }
            _ => out.push(c),
        }
    }
    let mut s = out;
    while s.contains("**") {
        s = s.replace("**", "*");
    }
    s.trim_matches('*').to_string()
}

#[cfg(test)]
mod tests;
