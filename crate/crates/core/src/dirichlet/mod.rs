//! Dirichlet characters with values in a prime field F_p, where p is
//! admissible for the modulus so that every character value lies in F_p.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::ffield::{is_admissible_prime, FieldError, Fp, PrimeField};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("prime {p} is not admissible for modulus {n}")]
    Inadmissible { p: u64, n: u64 },
    #[error("expected {expected} exponents, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("cannot parse character label {0:?}")]
    Label(String),
}

/// A cyclic factor of (Z/N)^x with an explicit generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicFactor {
    pub generator: u64,
    pub order: u64,
}

fn mult_order(a: u64, m: u64) -> u64 {
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * a % m;
        k += 1;
    }
    k
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
pub(crate) fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(q, _)| acc / q * (q - 1))
}

/// Lift a residue mod `m` to a residue mod `n` that is 1 modulo `n / m`
/// (with m and n / m coprime).
fn crt_lift(a: u64, m: u64, n: u64) -> u64 {
    let rest = n / m;
    (0..n).find(|&x| x % m == a % m && x % rest == 1 % rest).unwrap_or(a)
}

/// Canonical decomposition of (Z/N)^x: prime powers in increasing order; an
/// odd q^e contributes its smallest primitive root, 4 contributes -1, and
/// 2^e with e >= 3 contributes -1 and 5. Each generator is lifted to be 1
/// modulo the other prime-power factors.
pub fn unit_group_generators(n: u64) -> Vec<CyclicFactor> {
    let mut out = Vec::new();
    for (q, e) in factorize(n) {
        let m = q.pow(e);
        let local: Vec<(u64, u64)> = if q == 2 {
            match e {
                1 => vec![],
                2 => vec![(m - 1, 2)],
                _ => vec![(m - 1, 2), (5, m / 4)],
            }
        } else {
            let phi = m / q * (q - 1);
            let g = (2..m).find(|&g| g % q != 0 && mult_order(g, m) == phi).unwrap();
            vec![(g, phi)]
        };
        for (g, order) in local {
            out.push(CyclicFactor { generator: crt_lift(g, m, n), order });
        }
    }
    out
}

/// (Z/N)^x with discrete logarithms relative to the canonical generators.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    modulus: u64,
    factors: Vec<CyclicFactor>,
    dlog: HashMap<u64, Vec<u64>>,
}

impl UnitGroup {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "modulus must be positive");
        let factors = unit_group_generators(n);
        let mut dlog = HashMap::new();
        dlog.insert(1 % n, vec![0; factors.len()]);
        for (i, f) in factors.iter().enumerate() {
            let current: Vec<(u64, Vec<u64>)> = dlog.iter().map(|(k, v)| (*k, v.clone())).collect();
            for (a, exps) in current {
                let mut x = a;
                for e in 1..f.order {
                    x = x * f.generator % n;
                    let mut v = exps.clone();
                    v[i] = e;
                    dlog.insert(x, v);
                }
            }
        }
        UnitGroup { modulus: n, factors, dlog }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn factors(&self) -> &[CyclicFactor] {
        &self.factors
    }

    /// Exponent vector of a unit, or None if gcd(m, N) > 1.
    pub fn log(&self, m: i64) -> Option<&[u64]> {
        let r = m.rem_euclid(self.modulus as i64) as u64;
        self.dlog.get(&r).map(|v| v.as_slice())
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().map(|f| f.order).product()
    }
}

/// A character (Z/N)^x -> F_p^x, stored as a value table on residues.
#[derive(Clone)]
pub struct DirichletChar {
    modulus: u64,
    p: u32,
    /// Value at each residue mod N; 0 on non-units.
    values: Arc<Vec<u32>>,
    order: u64,
    conductor: u64,
    /// Exponents over the canonical basis, when known.
    exponents: Option<Vec<u64>>,
}

impl PartialEq for DirichletChar {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.p == other.p && self.values == other.values
    }
}

impl Eq for DirichletChar {}

impl std::hash::Hash for DirichletChar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.modulus.hash(state);
        self.values.hash(state);
    }
}

impl fmt::Debug for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirichletChar({} mod {}, order {})", self.label(), self.modulus, self.order)
    }
}

impl DirichletChar {
    fn from_values(modulus: u64, p: u32, values: Vec<u32>, exponents: Option<Vec<u64>>) -> Self {
        let field = PrimeField::new(p as u64).expect("validated prime");
        let order = values
            .iter()
            .filter(|&&v| v != 0)
            .map(|&v| {
                let mut x = v;
                let mut k = 1u64;
                while x != 1 {
                    x = field.mulp(Fp(x), Fp(v)).0;
                    k += 1;
                }
                k
            })
            .fold(1, |a, k| a.lcm(&k));
        let conductor = (1..=modulus)
            .filter(|m| modulus.is_multiple_of(*m))
            .find(|&m| {
                (0..modulus).all(|a| values[a as usize] == 0 || a % m != 1 % m || values[a as usize] == 1)
            })
            .unwrap();
        DirichletChar { modulus, p, values: Arc::new(values), order, conductor, exponents }
    }

    /// The trivial character mod N over F_p.
    pub fn trivial(modulus: u64, p: u32) -> Self {
        let values = (0..modulus).map(|a| if a.gcd(&modulus) == 1 { 1 } else { 0 }).collect();
        let group = UnitGroup::new(modulus);
        Self::from_values(modulus, p, values, Some(vec![0; group.factors().len()]))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// chi(-1) as +1 or -1.
    pub fn parity(&self) -> i8 {
        if self.modulus <= 2 || self.values[(self.modulus - 1) as usize] == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 1
    }

    pub fn exponents(&self) -> Option<&[u64]> {
        self.exponents.as_deref()
    }

    /// chi(m) if gcd(m, N) = 1, else 0.
    pub fn eval(&self, m: i64) -> Fp {
        Fp(self.values[m.rem_euclid(self.modulus as i64) as usize])
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.modulus, self.p), (other.modulus, other.p), "incompatible characters");
        let p = self.p as u64;
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(&a, &b)| ((a as u64 * b as u64) % p) as u32)
            .collect();
        let exps = match (&self.exponents, &other.exponents) {
            (Some(a), Some(b)) => {
                let group = UnitGroup::new(self.modulus);
                Some(
                    a.iter()
                        .zip(b)
                        .zip(group.factors())
                        .map(|((x, y), f)| (x + y) % f.order)
                        .collect(),
                )
            }
            _ => None,
        };
        Self::from_values(self.modulus, self.p, values, exps)
    }

    pub fn pow(&self, e: u64) -> Self {
        let field = PrimeField::new(self.p as u64).expect("validated prime");
        let values = self.values.iter().map(|&v| if v == 0 { 0 } else { field.powp(Fp(v), e).0 }).collect();
        let exps = self.exponents.as_ref().map(|x| {
            let group = UnitGroup::new(self.modulus);
            x.iter().zip(group.factors()).map(|(a, f)| (a * e) % f.order).collect()
        });
        Self::from_values(self.modulus, self.p, values, exps)
    }

    pub fn inverse(&self) -> Self {
        self.pow(self.order - 1)
    }

    /// The same character viewed modulo a multiple M of N.
    pub fn lift(&self, m: u64) -> Self {
        assert_eq!(m % self.modulus, 0, "lift target must be a multiple of the modulus");
        let values = (0..m)
            .map(|a| if a.gcd(&m) == 1 { self.values[(a % self.modulus) as usize] } else { 0 })
            .collect();
        Self::from_values(m, self.p, values, None)
    }

    /// {chi^a : gcd(a, order) = 1}, without repetition, in order of a.
    pub fn galois_orbit(&self) -> Vec<Self> {
        (1..=self.order).filter(|a| a.gcd(&self.order) == 1).map(|a| self.pow(a)).collect()
    }

    /// A character from its value table mod N (0 on non-units); exponents
    /// are unknown until passed through `CharacterGroup::identify`.
    pub fn from_table(modulus: u64, p: u32, values: Vec<u32>) -> Self {
        assert_eq!(values.len() as u64, modulus.max(1));
        Self::from_values(modulus, p, values, None)
    }

    /// ASCII label over the canonical basis, e.g. "chi_24_0*chi_24_2" or
    /// "chi_41^10"; "1" for the trivial character.
    pub fn ascii_label(&self) -> String {
        let Some(exps) = &self.exponents else {
            return format!("chi[mod {}]", self.modulus);
        };
        let parts: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| {
                let base = if exps.len() == 1 { format!("chi_{}", self.modulus) } else { format!("chi_{}_{}", self.modulus, i) };
                if e > 1 {
                    format!("{base}^{e}")
                } else {
                    base
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Label over the canonical basis, e.g. "χ_{24,0}χ_{24,2}" or "χ_{41}^{10}".
    pub fn label(&self) -> String {
        let Some(exps) = &self.exponents else {
            return format!("χ[mod {}]", self.modulus);
        };
        if exps.iter().all(|&e| e == 0) {
            return "1".to_string();
        }
        let single = exps.len() == 1;
        let mut s = String::new();
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if single {
                s.push_str(&format!("χ_{{{}}}", self.modulus));
            } else {
                s.push_str(&format!("χ_{{{},{}}}", self.modulus, i));
            }
            if e > 1 {
                s.push_str(&format!("^{{{e}}}"));
            }
        }
        s
    }
}

/// The characters mod N with values in F_p, with the canonical basis: the
/// i-th basis character sends the i-th generator to the canonical root of
/// unity of that factor's order and the other generators to 1.
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    group: UnitGroup,
    field: PrimeField,
    roots: Vec<Fp>,
}

impl CharacterGroup {
    pub fn new(n: u64, p: u64) -> Result<Self, CharError> {
        if !is_admissible_prime(p, n)? {
            return Err(CharError::Inadmissible { p, n });
        }
        let field = PrimeField::new(p)?;
        let group = UnitGroup::new(n);
        let g = field.primitive_root();
        let roots = group
            .factors()
            .iter()
            .map(|f| field.powp(g, (p - 1) / f.order))
            .collect();
        Ok(CharacterGroup { group, field, roots })
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus()
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn unit_group(&self) -> &UnitGroup {
        &self.group
    }

    /// Canonical root of unity assigned to each generator.
    pub fn basis_roots(&self) -> &[Fp] {
        &self.roots
    }

    pub fn character(&self, exps: &[u64]) -> Result<DirichletChar, CharError> {
        let f = self.group.factors();
        if exps.len() != f.len() {
            return Err(CharError::Arity { expected: f.len(), got: exps.len() });
        }
        let exps: Vec<u64> = exps.iter().zip(f).map(|(e, f)| e % f.order).collect();
        let n = self.modulus();
        let values = (0..n)
            .map(|a| match self.group.log(a as i64) {
                None => 0,
                Some(l) => l
                    .iter()
                    .zip(&exps)
                    .zip(&self.roots)
                    .fold(Fp(1), |acc, ((li, ei), r)| {
                        self.field.mulp(acc, self.field.powp(*r, li * ei))
                    })
                    .0,
            })
            .collect();
        Ok(DirichletChar::from_values(n, self.field.p(), values, Some(exps)))
    }

    pub fn trivial(&self) -> DirichletChar {
        self.character(&vec![0; self.group.factors().len()]).unwrap()
    }

    pub fn basis(&self) -> Vec<DirichletChar> {
        let k = self.group.factors().len();
        (0..k)
            .map(|i| {
                let mut e = vec![0; k];
                e[i] = 1;
                self.character(&e).unwrap()
            })
            .collect()
    }

    /// All characters mod N, ordered by exponent vector.
    pub fn all(&self) -> Vec<DirichletChar> {
        let mut out = vec![Vec::new()];
        for f in self.group.factors() {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u64>| {
                    (0..f.order).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        out.iter().map(|e| self.character(e).unwrap()).collect()
    }

    /// The character with the given value table, if it exists, with its
    /// exponents filled in.
    pub fn identify(&self, chi: &DirichletChar) -> Option<DirichletChar> {
        self.all().into_iter().find(|c| c == chi)
    }

    /// Parses labels such as "1", "chi_41^10", "chi_24_0*chi_24_2",
    /// "χ_{24,0}χ_{24,2}" or "χ_{41}^{10}".
    pub fn parse_label(&self, label: &str) -> Result<DirichletChar, CharError> {
        let err = || CharError::Label(label.to_string());
        let k = self.group.factors().len();
        let mut exps = vec![0u64; k];
        let s: String = label.chars().filter(|c| !c.is_whitespace() && !"{}*".contains(*c)).collect();
        if s == "1" || s.is_empty() {
            return Ok(self.trivial());
        }
        let s = s.replace("chi", "χ");
        for part in s.split('χ').skip(1) {
            let part = part.strip_prefix('_').unwrap_or(part);
            let (body, e) = match part.split_once('^') {
                Some((b, e)) => (b, e.parse::<u64>().map_err(|_| err())?),
                None => (part, 1),
            };
            let nums: Vec<u64> = body
                .split([',', '_'])
                .map(|x| x.parse::<u64>().map_err(|_| err()))
                .collect::<Result<_, _>>()?;
            let idx = match nums.as_slice() {
                [m] if *m == self.modulus() && k == 1 => 0,
                [m, i] if *m == self.modulus() && (*i as usize) < k => *i as usize,
                _ => return Err(err()),
            };
            exps[idx] += e;
        }
        if !label.contains("chi") && !label.contains('χ') {
            return Err(err());
        }
        self.character(&exps)
    }
}

/// Evaluates eps^w at a prime ell: ell^w mod p.
pub fn cyclotomic_power(field: &PrimeField, w: u32, ell: u64) -> Fp {
    field.powp(field.elem(ell as i64), w as u64)
}
