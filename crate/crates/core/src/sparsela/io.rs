use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{LinalgError, SparseMatrix};
use crate::ffield::Field;

/// Writes "SMAT p r rows cols nnz", the modulus line when r > 1, then one
/// "row col value" line per entry with value = sum c_i p^i in decimal.
pub fn write_matrix<F: Field, W: Write>(a: &SparseMatrix<F>, mut w: W) -> Result<(), LinalgError> {
    let f = a.field();
    let p = f.characteristic();
    let r = f.degree();
    writeln!(w, "SMAT {} {} {} {} {}", p, r, a.nrows(), a.ncols(), a.nnz())?;
    if r > 1 {
        let m: Vec<String> = f.modulus_coeffs().iter().map(|c| c.to_string()).collect();
        writeln!(w, "{}", m.join(" "))?;
    }
    for (i, j, v) in a.triplets() {
        writeln!(w, "{i} {j} {}", encode_elem(f, v))?;
    }
    Ok(())
}

/// The integer sum c_i p^i for an element with coordinates c_i.
pub fn encode_elem<F: Field>(f: &F, v: &F::Elem) -> BigUint {
    let p = f.characteristic();
    f.to_coeffs(v).iter().rev().fold(BigUint::zero(), |acc, &c| acc * p + c)
}

/// Inverse of `encode_elem`; None if the code is not a decimal below p^r.
pub fn decode_elem<F: Field>(f: &F, s: &str) -> Option<F::Elem> {
    let p = f.characteristic();
    let mut code: BigUint = s.parse().ok()?;
    let mut c = Vec::with_capacity(f.degree());
    for _ in 0..f.degree() {
        c.push((&code % p).to_u64()?);
        code /= p;
    }
    code.is_zero().then(|| f.from_coeffs(&c))
}

pub fn read_matrix<F: Field, R: Read>(field: &F, r: R) -> Result<SparseMatrix<F>, LinalgError> {
    let bad = |m: &str| LinalgError::Malformed(m.to_string());
    let mut lines = BufReader::new(r).lines();
    let header = lines.next().ok_or_else(|| bad("empty file"))??;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 6 || h[0] != "SMAT" {
        return Err(bad("bad header"));
    }
    let num = |s: &str| s.parse::<u64>().map_err(|_| bad("bad header number"));
    let (fp, fr) = (num(h[1])?, num(h[2])? as usize);
    let (nrows, ncols, nnz) = (num(h[3])? as usize, num(h[4])? as usize, num(h[5])? as usize);
    let (p, deg) = (field.characteristic(), field.degree());
    if fp != p || fr != deg {
        return Err(LinalgError::FieldMismatch { file_p: fp, file_r: fr, p, r: deg });
    }
    if fr > 1 {
        let m = lines.next().ok_or_else(|| bad("missing modulus"))??;
        let m: Vec<u64> = m.split_whitespace().map(num).collect::<Result<_, _>>()?;
        if m != field.modulus_coeffs() {
            return Err(LinalgError::FieldMismatch { file_p: fp, file_r: fr, p, r: deg });
        }
    }
    let mut trip = Vec::with_capacity(nnz);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 3 {
            return Err(bad("bad entry line"));
        }
        let (i, j) = (num(t[0])? as usize, num(t[1])? as usize);
        if i >= nrows || j >= ncols {
            return Err(bad("entry out of range"));
        }
        let v = decode_elem(field, t[2]).ok_or_else(|| bad("bad value"))?;
        if field.is_zero(&v) {
            return Err(bad("stored zero"));
        }
        trip.push((i, j, v));
    }
    if trip.len() != nnz {
        return Err(bad("entry count differs from header"));
    }
    Ok(SparseMatrix::from_triplets(field.clone(), nrows, ncols, trip))
}

pub fn persist<F: Field>(a: &SparseMatrix<F>, path: &Path) -> Result<(), LinalgError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix(a, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load<F: Field>(field: &F, path: &Path) -> Result<SparseMatrix<F>, LinalgError> {
    read_matrix(field, File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{ExtField, Fp, PrimeField};

    #[test]
    fn round_trip() {
        let f = PrimeField::new(4001).unwrap();
        let a = SparseMatrix::from_triplets(f.clone(), 3, 5, [(0, 4, Fp(7)), (2, 1, Fp(4000))]);
        let mut buf = Vec::new();
        write_matrix(&a, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("SMAT 4001 1 3 5 2\n"));
        assert_eq!(read_matrix(&f, &buf[..]).unwrap(), a);
        let e = SparseMatrix::zeros(f.clone(), 0, 0);
        let mut buf = Vec::new();
        write_matrix(&e, &mut buf).unwrap();
        assert_eq!(read_matrix(&f, &buf[..]).unwrap(), e);
    }

    #[test]
    fn extension_round_trip_and_mismatch() {
        let f = ExtField::new(4001, 2).unwrap();
        let x = f.generator();
        let a = SparseMatrix::from_triplets(f.clone(), 2, 2, [(0, 0, x.clone()), (1, 1, f.add(&x, &f.one()))]);
        let mut buf = Vec::new();
        write_matrix(&a, &mut buf).unwrap();
        assert_eq!(read_matrix(&f, &buf[..]).unwrap(), a);
        let g = PrimeField::new(4001).unwrap();
        assert!(matches!(read_matrix(&g, &buf[..]), Err(LinalgError::FieldMismatch { .. })));
        assert!(matches!(read_matrix(&g, &b"SMAT 4001 1 1 1 2\n0 0 1\n"[..]), Err(LinalgError::Malformed(_))));
    }
}
