//! Plain-text persistence of a truncated Voronoi complex.
//!
//! Stabilizers are written as generators; ingestion regenerates each group
//! by closure and re-verifies the simplex property, the stabilizer action,
//! the orientation character and every face incidence.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use super::cells::{is_interior, vertex_permutation, CellClass, Face, TruncatedVoronoiComplex, Vertices};
use super::VoronoiError;
use crate::lattice::{self, IMat, IVec};
use crate::sharbly;

fn fmt_vec(n: usize, v: &IVec) -> String {
    v[..n].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn fmt_mat(m: &IMat) -> String {
    m.rows().iter().flatten().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// A generating set of `group` (which must be closed under products).
fn generators(group: &[IMat]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span: BTreeSet<IMat> = BTreeSet::new();
    if let Some(e) = group.first() {
        span.insert(IMat::identity(e.n()));
    }
    for (i, g) in group.iter().enumerate() {
        if span.contains(g) {
            continue;
        }
        gens.push(i);
        let gs: Vec<IMat> = gens.iter().map(|&j| group[j]).collect();
        span = closure(&gs, g.n());
    }
    gens
}

fn closure(gens: &[IMat], n: usize) -> BTreeSet<IMat> {
    let mut out = BTreeSet::from([IMat::identity(n)]);
    let mut frontier = vec![IMat::identity(n)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g);
            if out.insert(y) {
                frontier.push(y);
            }
        }
    }
    out
}

pub fn export_cells(c: &TruncatedVoronoiComplex) -> String {
    let n = c.n;
    let mut s = format!("VCELLS {n} {}\n", c.degrees.len());
    for (k, classes) in c.degrees.iter().enumerate() {
        let _ = writeln!(s, "DEGREE {k} {}", classes.len());
        for class in classes {
            let verts: Vec<String> = class.vertices.iter().map(|v| fmt_vec(n, v)).collect();
            let _ = writeln!(s, "CLASS {} {} {}", class.dim(), class.gl_class, verts.join(";"));
            let gens = generators(&class.stabilizer);
            let _ = writeln!(s, "GENS {}", gens.len());
            for i in gens {
                let _ = writeln!(s, "{} {}", class.orientation[i], fmt_mat(&class.stabilizer[i]));
            }
            let _ = writeln!(s, "FACES {}", class.faces.len());
            for f in &class.faces {
                let _ = writeln!(s, "{} {} {} {}", f.position, f.target, f.sign, fmt_mat(&f.g));
            }
        }
    }
    s
}

struct Lines<'a> {
    it: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<(usize, Vec<&'a str>), VoronoiError> {
        loop {
            let (i, l) = self.it.next().ok_or_else(|| VoronoiError::Malformed("unexpected end of file".into()))?;
            let l = l.trim();
            if !l.is_empty() && !l.starts_with('#') {
                return Ok((i + 1, l.split_whitespace().collect()));
            }
        }
    }
}

fn bad(line: usize, what: &str) -> VoronoiError {
    VoronoiError::Malformed(format!("line {line}: {what}"))
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, VoronoiError> {
    s.parse().map_err(|_| bad(line, &format!("bad number {s:?}")))
}

fn parse_mat(line: usize, n: usize, toks: &[&str]) -> Result<IMat, VoronoiError> {
    if toks.len() != n * n {
        return Err(bad(line, "matrix has the wrong number of entries"));
    }
    let rows: Vec<Vec<i64>> = toks.chunks(n).map(|r| r.iter().map(|t| num(line, t)).collect()).collect::<Result<_, _>>()?;
    Ok(IMat::from_rows(&rows))
}

fn keyword<'a>(line: usize, toks: &[&'a str], kw: &str, arity: usize) -> Result<Vec<&'a str>, VoronoiError> {
    if toks.first() != Some(&kw) || toks.len() != arity + 1 {
        return Err(bad(line, &format!("expected {kw}")));
    }
    Ok(toks[1..].to_vec())
}

/// Parses and verifies an exported complex.
pub fn ingest_cells(text: &str) -> Result<TruncatedVoronoiComplex, VoronoiError> {
    let mut lines = Lines { it: text.lines().enumerate() };
    let (l, t) = lines.next()?;
    let h = keyword(l, &t, "VCELLS", 2)?;
    let n: usize = num(l, h[0])?;
    if !(2..=4).contains(&n) {
        return Err(VoronoiError::BadRank(n));
    }
    let ndeg: usize = num(l, h[1])?;
    let mut degrees = Vec::with_capacity(ndeg);
    for k in 0..ndeg {
        let (l, t) = lines.next()?;
        let h = keyword(l, &t, "DEGREE", 2)?;
        if num::<usize>(l, h[0])? != k {
            return Err(bad(l, "degrees out of order"));
        }
        let count: usize = num(l, h[1])?;
        let mut classes = Vec::with_capacity(count);
        for _ in 0..count {
            let (l, t) = lines.next()?;
            let h = keyword(l, &t, "CLASS", 3)?;
            if num::<usize>(l, h[0])? != n + k {
                return Err(bad(l, "cone dimension does not match the degree"));
            }
            let gl_class = num(l, h[1])?;
            let vertices: Vertices = h[2]
                .split(';')
                .map(|v| {
                    let xs: Vec<i64> = v.split(',').map(|x| num(l, x)).collect::<Result<_, _>>()?;
                    if xs.len() != n {
                        return Err(bad(l, "vertex has the wrong length"));
                    }
                    let mut out = [0; 4];
                    out[..n].copy_from_slice(&xs);
                    Ok(out)
                })
                .collect::<Result<_, _>>()?;
            if vertices.len() != n + k {
                return Err(bad(l, "wrong number of vertices for the degree"));
            }
            let (l, t) = lines.next()?;
            let ng: usize = num(l, keyword(l, &t, "GENS", 1)?[0])?;
            let mut gens = Vec::with_capacity(ng);
            let mut claimed = Vec::with_capacity(ng);
            for _ in 0..ng {
                let (l, t) = lines.next()?;
                if t.is_empty() {
                    return Err(bad(l, "empty generator line"));
                }
                claimed.push(num::<i8>(l, t[0])?);
                gens.push(parse_mat(l, n, &t[1..])?);
            }
            let (l, t) = lines.next()?;
            let nf: usize = num(l, keyword(l, &t, "FACES", 1)?[0])?;
            let mut faces = Vec::with_capacity(nf);
            for _ in 0..nf {
                let (l, t) = lines.next()?;
                if t.len() != 3 + n * n {
                    return Err(bad(l, "bad face line"));
                }
                faces.push(Face {
                    position: num(l, t[0])?,
                    target: num(l, t[1])?,
                    sign: num(l, t[2])?,
                    g: parse_mat(l, n, &t[3..])?,
                });
            }
            let stabilizer: Vec<IMat> = closure(&gens, n).into_iter().collect();
            let orientation = stabilizer
                .iter()
                .map(|g| {
                    vertex_permutation(g, &vertices, &vertices)
                        .map(|p| lattice::perm_sign(&p) as i8)
                        .ok_or_else(|| VoronoiError::Invalid("stabilizer element moves the cell".into()))
                })
                .collect::<Result<Vec<i8>, _>>()?;
            for (g, o) in gens.iter().zip(&claimed) {
                let i = stabilizer.iter().position(|h| h == g).unwrap_or_default();
                if orientation.get(i) != Some(o) {
                    return Err(VoronoiError::Invalid("orientation value disagrees with the vertex action".into()));
                }
            }
            classes.push(CellClass { vertices, gl_class, stabilizer, orientation, faces });
        }
        degrees.push(classes);
    }
    let c = TruncatedVoronoiComplex { n, degrees };
    verify(&c)?;
    Ok(c)
}

fn verify(c: &TruncatedVoronoiComplex) -> Result<(), VoronoiError> {
    let n = c.n;
    let invalid = |s: String| Err(VoronoiError::Invalid(s));
    for (k, classes) in c.degrees.iter().enumerate() {
        for (i, class) in classes.iter().enumerate() {
            if sharbly::theta(n, &class.vertices).is_err() {
                return invalid(format!("degree {k} class {i} is not a simplex"));
            }
            if !is_interior(n, &class.vertices) {
                return invalid(format!("degree {k} class {i} lies on the boundary"));
            }
            if class.stabilizer.iter().any(|g| g.det() != 1) {
                return invalid(format!("degree {k} class {i} has a stabilizer element outside SL"));
            }
            let mut orient: HashMap<IMat, i8> = HashMap::new();
            for (g, o) in class.stabilizer.iter().zip(&class.orientation) {
                orient.insert(*g, *o);
            }
            for (a, oa) in &orient {
                for (b, ob) in &orient {
                    if orient.get(&a.mul(b)) != Some(&(oa * ob)) {
                        return invalid(format!("degree {k} class {i}: orientation is not a character"));
                    }
                }
            }
            for f in &class.faces {
                let Some(target) = k.checked_sub(1).and_then(|j| c.degrees[j].get(f.target)) else {
                    return invalid(format!("degree {k} class {i}: face target out of range"));
                };
                if f.position >= class.vertices.len() || f.g.det() != 1 {
                    return invalid(format!("degree {k} class {i}: bad face record"));
                }
                let face: Vertices =
                    class.vertices.iter().enumerate().filter(|(j, _)| *j != f.position).map(|(_, v)| *v).collect();
                let Some(perm) = vertex_permutation(&f.g, &target.vertices, &face) else {
                    return invalid(format!("degree {k} class {i}: face does not match its target"));
                };
                let expect = if f.position % 2 == 1 { 1 } else { -1 } * lattice::perm_sign(&perm);
                if expect != f.sign as i64 {
                    return invalid(format!("degree {k} class {i}: wrong incidence sign"));
                }
            }
        }
    }
    Ok(())
}

pub fn write_cells(path: &Path, c: &TruncatedVoronoiComplex) -> Result<(), VoronoiError> {
    std::fs::write(path, export_cells(c))?;
    Ok(())
}

pub fn read_cells(path: &Path) -> Result<TruncatedVoronoiComplex, VoronoiError> {
    ingest_cells(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::super::enumerate_cell_classes;
    use super::*;

    #[test]
    fn round_trip_rank_three() {
        let c = enumerate_cell_classes(3).unwrap();
        let back = ingest_cells(&export_cells(&c)).unwrap();
        assert_eq!(back.class_counts(), c.class_counts());
        for (a, b) in c.degrees.iter().flatten().zip(back.degrees.iter().flatten()) {
            assert_eq!(a.vertices, b.vertices);
            assert_eq!(a.faces, b.faces);
            let sa: BTreeSet<_> = a.stabilizer.iter().collect();
            let sb: BTreeSet<_> = b.stabilizer.iter().collect();
            assert_eq!(sa, sb);
        }
    }

    #[test]
    fn tampered_cell_is_rejected() {
        let c = enumerate_cell_classes(3).unwrap();
        let text = export_cells(&c);
        // Replace the first top-degree cell by a non-simplex with 5 vertices
        // spanning a 4-dimensional space of quadratic forms.
        let top = c.degrees[2][0].vertices.iter().map(|v| fmt_vec(3, v)).collect::<Vec<_>>().join(";");
        let bad_cell = "1,0,0;0,1,0;1,1,0;1,-1,0;0,0,1";
        let tampered = text.replacen(&top, bad_cell, 1);
        assert!(matches!(ingest_cells(&tampered), Err(VoronoiError::Invalid(_))));
        let truncated: String = text.lines().take(5).collect::<Vec<_>>().join("\n");
        assert!(matches!(ingest_cells(&truncated), Err(VoronoiError::Malformed(_))));
    }
}
