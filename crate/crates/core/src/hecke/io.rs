//! Hecke matrices: "HECKE N eta-label p r ell k dim", the modulus line when
//! r > 1, then dim rows of dim entries, each entry sum c_i p^i in decimal.
//! Eigenpackets: "PACKET n p r", the modulus line when r > 1, then one
//! "A ell k value" line per eigenvalue.

use std::io::{BufRead, BufReader, Read, Write};

use super::{Eigenpacket, HeckeError, HeckeOperator};
use crate::ffield::Field;
use crate::sparsela::{decode_elem, encode_elem, DenseMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeHeader {
    pub level: u64,
    pub eta: String,
}

pub fn write_hecke<F: Field, W: Write>(h: &HeckeHeader, op: &HeckeOperator<F>, mut w: W) -> Result<(), HeckeError> {
    let f = op.matrix.field();
    let dim = op.matrix.nrows();
    writeln!(w, "HECKE {} {} {} {} {} {} {}", h.level, h.eta, f.characteristic(), f.degree(), op.ell, op.k, dim)?;
    write_field_header(f, &mut w)?;
    for row in op.matrix.rows() {
        let r: Vec<String> = row.iter().map(|x| encode_elem(f, x).to_string()).collect();
        writeln!(w, "{}", r.join(" "))?;
    }
    Ok(())
}

pub fn read_hecke<F: Field, R: Read>(field: &F, r: R) -> Result<(HeckeHeader, HeckeOperator<F>), HeckeError> {
    let bad = |m: &str| HeckeError::Malformed(m.to_string());
    let mut lines = BufReader::new(r).lines().filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let header = lines.next().ok_or_else(|| bad("empty file"))??;
    let t: Vec<&str> = header.split_whitespace().collect();
    if t.len() != 8 || t[0] != "HECKE" {
        return Err(bad("bad header"));
    }
    let num = |s: &str| s.parse::<u64>().map_err(|_| bad("bad header number"));
    let (level, p, r, ell, k, dim) = (num(t[1])?, num(t[3])?, num(t[4])? as usize, num(t[5])?, num(t[6])? as usize, num(t[7])? as usize);
    if p != field.characteristic() || r != field.degree() {
        return Err(bad("field does not match the working field"));
    }
    if r > 1 {
        let m = lines.next().ok_or_else(|| bad("missing modulus"))??;
        let m: Vec<u64> = m.split_whitespace().map(num).collect::<Result<_, _>>()?;
        if m != field.modulus_coeffs() {
            return Err(bad("modulus does not match the working field"));
        }
    }
    let mut rows = Vec::with_capacity(dim);
    for _ in 0..dim {
        let line = lines.next().ok_or_else(|| bad("missing row"))??;
        let row: Vec<F::Elem> = line
            .split_whitespace()
            .map(|s| decode_elem(field, s).ok_or_else(|| bad("bad entry")))
            .collect::<Result<_, _>>()?;
        if row.len() != dim {
            return Err(bad("row has the wrong length"));
        }
        rows.push(row);
    }
    if lines.next().is_some() {
        return Err(bad("trailing data"));
    }
    let header = HeckeHeader { level, eta: t[2].to_string() };
    Ok((header, HeckeOperator { ell, k, matrix: DenseMatrix::from_rows(field.clone(), rows, dim) }))
}

fn write_field_header<F: Field, W: Write>(f: &F, w: &mut W) -> std::io::Result<()> {
    if f.degree() > 1 {
        let m: Vec<String> = f.modulus_coeffs().iter().map(|c| c.to_string()).collect();
        writeln!(w, "{}", m.join(" "))?;
    }
    Ok(())
}

pub fn write_packet<F: Field, W: Write>(f: &F, packet: &Eigenpacket<F>, mut w: W) -> Result<(), HeckeError> {
    writeln!(w, "PACKET {} {} {}", packet.n, f.characteristic(), f.degree())?;
    write_field_header(f, &mut w)?;
    for ((ell, k), v) in &packet.values {
        writeln!(w, "A {ell} {k} {}", encode_elem(f, v))?;
    }
    Ok(())
}

pub fn read_packet<F: Field, R: Read>(field: &F, r: R) -> Result<Eigenpacket<F>, HeckeError> {
    let bad = |m: &str| HeckeError::Malformed(m.to_string());
    let num = |s: &str| s.parse::<u64>().map_err(|_| bad("bad number"));
    let mut lines = BufReader::new(r).lines().filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let header = lines.next().ok_or_else(|| bad("empty file"))??;
    let t: Vec<&str> = header.split_whitespace().collect();
    if t.len() != 4 || t[0] != "PACKET" {
        return Err(bad("bad packet header"));
    }
    let (n, p, r) = (num(t[1])? as usize, num(t[2])?, num(t[3])? as usize);
    if p != field.characteristic() || r != field.degree() {
        return Err(bad("field does not match the working field"));
    }
    if r > 1 {
        let m = lines.next().ok_or_else(|| bad("missing modulus"))??;
        let m: Vec<u64> = m.split_whitespace().map(num).collect::<Result<_, _>>()?;
        if m != field.modulus_coeffs() {
            return Err(bad("modulus does not match the working field"));
        }
    }
    let mut packet = Eigenpacket::new(n);
    for line in lines {
        let line = line?;
        let t: Vec<&str> = line.split_whitespace().collect();
        let [key, ell, k, v] = t[..] else { return Err(bad("bad eigenvalue line")) };
        if key != "A" {
            return Err(bad("bad eigenvalue line"));
        }
        let v = decode_elem(field, v).ok_or_else(|| bad("bad entry"))?;
        packet.values.insert((num(ell)?, num(k)? as usize), v);
    }
    Ok(packet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::ExtField;

    #[test]
    fn round_trip_over_extension() {
        let f = ExtField::new(7, 2).unwrap();
        let g = f.generator();
        let m = DenseMatrix::from_rows(f.clone(), vec![vec![g.clone(), f.one()], vec![f.zero(), f.mul(&g, &g)]], 2);
        let op = HeckeOperator { ell: 3, k: 2, matrix: m };
        let h = HeckeHeader { level: 11, eta: "1".into() };
        let mut buf = Vec::new();
        write_hecke(&h, &op, &mut buf).unwrap();
        let (h2, op2) = read_hecke(&f, &buf[..]).unwrap();
        assert_eq!((h2, op2), (h, op));
        let wrong = ExtField::new(7, 3).unwrap();
        assert!(matches!(read_hecke(&wrong, &buf[..]), Err(HeckeError::Malformed(_))));
    }

    #[test]
    fn packet_round_trip() {
        let f = ExtField::new(7, 2).unwrap();
        let mut p = Eigenpacket::new(4);
        p.values.insert((2, 1), f.generator());
        p.values.insert((3, 2), f.one());
        let mut buf = Vec::new();
        write_packet(&f, &p, &mut buf).unwrap();
        assert_eq!(read_packet(&f, &buf[..]).unwrap(), p);
        assert!(read_packet(&ExtField::new(7, 3).unwrap(), &buf[..]).is_err());
    }
}
