//! Plain-text volume tables: a `V g n` header per polynomial followed by one
//! line per sorted multi-degree, `d_1 ... d_n numerator denominator pi_power`,
//! where `pi_power` is the exponent of `pi^2`. Permutations of a listed
//! multi-degree carry the same coefficient.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{dimension, VolumePolynomial, VolumeTable};
use crate::error::{LabError, Result};

pub fn export(table: &VolumeTable) -> String {
    let mut s = format!("# budget {}\n", table.budget);
    for (g, n) in table.cells() {
        let p = table.get(g, n).expect("tabled cell");
        let _ = writeln!(s, "V {g} {n}");
        for (d, c) in p.canonical_terms() {
            let degs: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "{} {} {} {}", degs.join(" "), c.numer(), c.denom(), p.pi_power(d));
        }
    }
    s
}

pub fn import(text: &str) -> Result<VolumeTable> {
    let err = |line: usize, msg: &str| LabError::Parse(format!("line {}: {msg}", line + 1));
    let mut budget = None;
    let mut list = Vec::new();
    let mut current: Option<(usize, usize, BTreeMap<Vec<u8>, BigRational>)> = None;
    let flush = |cur: Option<(usize, usize, BTreeMap<Vec<u8>, BigRational>)>, list: &mut Vec<VolumePolynomial>| {
        if let Some((g, n, terms)) = cur {
            list.push(VolumePolynomial::from_canonical_terms(g, n, terms)?);
        }
        Ok::<_, LabError>(())
    };
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# budget") {
            budget = Some(rest.trim().parse::<usize>().map_err(|_| err(i, "bad budget"))?);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "V" {
            if fields.len() != 3 {
                return Err(err(i, "expected `V g n`"));
            }
            let g = fields[1].parse().map_err(|_| err(i, "bad genus"))?;
            let n = fields[2].parse().map_err(|_| err(i, "bad boundary count"))?;
            dimension(g, n).map_err(|_| err(i, "not a hyperbolic type"))?;
            flush(current.take(), &mut list)?;
            current = Some((g, n, BTreeMap::new()));
            continue;
        }
        let Some((g, n, terms)) = current.as_mut() else {
            return Err(err(i, "coefficient before any `V g n` header"));
        };
        if fields.len() != *n + 3 {
            return Err(err(i, "wrong number of fields"));
        }
        let d: Vec<u8> = fields[..*n].iter().map(|f| f.parse()).collect::<std::result::Result<_, _>>().map_err(|_| err(i, "bad degree"))?;
        let num: BigInt = fields[*n].parse().map_err(|_| err(i, "bad numerator"))?;
        let den: BigInt = fields[*n + 1].parse().map_err(|_| err(i, "bad denominator"))?;
        let pp: usize = fields[*n + 2].parse().map_err(|_| err(i, "bad pi power"))?;
        let total: usize = d.iter().map(|&x| x as usize).sum();
        if total + pp != 3 * *g + *n - 3 {
            return Err(err(i, "pi power inconsistent with homogeneity"));
        }
        if den == BigInt::from(0) {
            return Err(err(i, "zero denominator"));
        }
        terms.insert(d, BigRational::new(num, den));
    }
    flush(current.take(), &mut list)?;
    let budget = budget.unwrap_or_else(|| list.iter().map(|p| p.dimension()).max().unwrap_or(0));
    Ok(VolumeTable::from_parts(budget, list))
}
