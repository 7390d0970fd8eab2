use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{Poly, Rational};
use crate::linalg::Matrix;
use crate::simplicial::MonotoneMap;

/// Highest level of the extension ansatz.
pub const EXTENSION_LEVEL: u8 = 3;

/// Unknown coefficient of the ansatz w_{ij} = a_{ij}θ_i + b_{ij}θ_j + c_{ij}θ_iθ_j at a level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub level: u8,
    pub i: u8,
    pub j: u8,
    pub kind: SlotKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SlotKind {
    A,
    B,
    C,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            SlotKind::A => "a",
            SlotKind::B => "b",
            SlotKind::C => "c",
        };
        write!(f, "{k}[{}]_{}{}", self.level, self.i, self.j)
    }
}

/// θ-monomial of a constraint row: θ_m or θ_mθ_n (m < n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ThetaMonomial {
    Single(u8),
    Pair(u8, u8),
}

impl fmt::Display for ThetaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaMonomial::Single(m) => write!(f, "th{m}"),
            ThetaMonomial::Pair(m, n) => write!(f, "th{m}*th{n}"),
        }
    }
}

/// One linear constraint: coefficient of a θ-monomial in
/// structure_map(f)(w_{ij}) − reindex_f(w_{ij}).
#[derive(Clone, Debug)]
pub struct Constraint {
    pub map: MonotoneMap,
    pub pair: (u8, u8),
    pub monomial: ThetaMonomial,
    pub terms: BTreeMap<Slot, i64>,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(s, c)| format!("{c:+}*{s}")).collect();
        write!(f, "{} on w{}{} at {}: {} = 0", self.map, self.pair.0, self.pair.1, self.monomial, parts.join(" "))
    }
}

fn slot(level: u8, i: u8, j: u8, kind: SlotKind) -> Slot {
    Slot { level, i, j, kind }
}

/// Adds c·(θ-expansion of u_{ij} at `level` under reindexing by `h`).
fn expand(
    out: &mut BTreeMap<(ThetaMonomial, Slot), i64>,
    level: u8,
    i: u8,
    j: u8,
    h: impl Fn(u8) -> u8,
    sign: i64,
) {
    let (m, n) = (h(i), h(j));
    *out.entry((ThetaMonomial::Single(m), slot(level, i, j, SlotKind::A))).or_default() += sign;
    *out.entry((ThetaMonomial::Single(n), slot(level, i, j, SlotKind::B))).or_default() += sign;
    if m != n {
        *out.entry((ThetaMonomial::Pair(m, n), slot(level, i, j, SlotKind::C))).or_default() += sign;
    }
}

/// All constraints from monotone maps between levels 0..=max_level.
pub fn extension_constraints(max_level: u8) -> Vec<Constraint> {
    let mut out = Vec::new();
    for l in 1..=max_level {
        for k in 0..=max_level {
            for f in MonotoneMap::all(l, k) {
                for i in 0..=l {
                    for j in i + 1..=l {
                        let mut acc: BTreeMap<(ThetaMonomial, Slot), i64> = BTreeMap::new();
                        let (fi, fj) = (f.apply(i), f.apply(j));
                        if fi != fj {
                            expand(&mut acc, k, fi, fj, |v| v, 1);
                        }
                        expand(&mut acc, l, i, j, |v| f.apply(v), -1);
                        let mut rows: BTreeMap<ThetaMonomial, BTreeMap<Slot, i64>> = BTreeMap::new();
                        for ((mono, s), c) in acc {
                            if c != 0 {
                                rows.entry(mono).or_default().insert(s, c);
                            }
                        }
                        for (monomial, terms) in rows {
                            out.push(Constraint { map: f.clone(), pair: (i, j), monomial, terms });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Ranks of the homogeneous system with the level-1 data also unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionRanks {
    pub unknowns: usize,
    pub rank: usize,
    pub nullity: usize,
    /// Level-1 slots not fixed by the elimination.
    pub level_one_free: Vec<Slot>,
}

fn all_slots(max_level: u8) -> Vec<Slot> {
    let mut out = Vec::new();
    for level in 1..=max_level {
        for i in 0..=level {
            for j in i + 1..=level {
                for kind in [SlotKind::A, SlotKind::B, SlotKind::C] {
                    out.push(slot(level, i, j, kind));
                }
            }
        }
    }
    out
}

/// Rank data of the full homogeneous system on levels ≤ max_level.
pub fn extension_ranks(max_level: u8) -> ExtensionRanks {
    let mut slots = all_slots(max_level);
    slots.sort_by_key(|s| (s.level == 1, *s));
    let index: BTreeMap<Slot, usize> = slots.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut m = Matrix::zeros(0, slots.len());
    for c in extension_constraints(max_level) {
        let mut row = vec![Rational::zero(); slots.len()];
        for (s, v) in &c.terms {
            row[index[s]] = Rational::from_integer((*v).into());
        }
        m.push_row(row);
    }
    let (_, pivots) = m.rref();
    let rank = pivots.len();
    let level_one_free = slots
        .iter()
        .enumerate()
        .filter(|(i, s)| s.level == 1 && !pivots.contains(i))
        .map(|(_, s)| *s)
        .collect();
    ExtensionRanks { unknowns: slots.len(), rank, nullity: slots.len() - rank, level_one_free }
}

/// Result of extending w₀₁ = aθ₀ + bθ₁ + cθ₀θ₁ to all levels ≤ 3.
#[derive(Clone, Debug)]
pub enum Extension {
    Unique { values: BTreeMap<Slot, Poly>, unknowns: usize, rank: usize },
    Obstructed { constraint: Constraint, residual: Poly },
}

impl Extension {
    pub fn is_unique(&self) -> bool {
        matches!(self, Extension::Unique { .. })
    }
}

struct Row {
    coeffs: Vec<Rational>,
    rhs: Poly,
}

/// Solves the compatibility system level by level with incremental
/// elimination; the first inconsistent constraint is the witness.
pub fn extension_solve(a: &Poly, b: &Poly, c: &Poly) -> Result<Extension> {
    let scheme = a.scheme().clone();
    let data: BTreeMap<Slot, Poly> = [
        (slot(1, 0, 1, SlotKind::A), a.clone()),
        (slot(1, 0, 1, SlotKind::B), b.embed(&scheme)?),
        (slot(1, 0, 1, SlotKind::C), c.embed(&scheme)?),
    ]
    .into_iter()
    .collect();
    let slots: Vec<Slot> = all_slots(EXTENSION_LEVEL).into_iter().filter(|s| s.level > 1).collect();
    let index: BTreeMap<Slot, usize> = slots.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let n = slots.len();
    let mut pivots: Vec<(usize, Row)> = Vec::new();
    for constraint in extension_constraints(EXTENSION_LEVEL) {
        let mut row = Row { coeffs: vec![Rational::zero(); n], rhs: Poly::zero(&scheme) };
        for (s, v) in &constraint.terms {
            let v = Rational::from_integer((*v).into());
            match index.get(s) {
                Some(&k) => row.coeffs[k] += v,
                None => row.rhs = &row.rhs - &data[s].scale(&v),
            }
        }
        for (col, p) in &pivots {
            let f = row.coeffs[*col].clone();
            if !f.is_zero() {
                for k in 0..n {
                    let delta = &f * &p.coeffs[k];
                    row.coeffs[k] -= delta;
                }
                row.rhs = &row.rhs - &p.rhs.scale(&f);
            }
        }
        match row.coeffs.iter().position(|x| !x.is_zero()) {
            Some(col) => {
                let inv = Rational::one() / &row.coeffs[col];
                row.coeffs.iter_mut().for_each(|x| *x *= &inv);
                row.rhs = row.rhs.scale(&inv);
                for (_, p) in pivots.iter_mut() {
                    let f = p.coeffs[col].clone();
                    if !f.is_zero() {
                        for k in 0..n {
                            let delta = &f * &row.coeffs[k];
                            p.coeffs[k] -= delta;
                        }
                        p.rhs = &p.rhs - &row.rhs.scale(&f);
                    }
                }
                pivots.push((col, row));
            }
            None => {
                if !row.rhs.is_zero() {
                    return Ok(Extension::Obstructed { constraint, residual: row.rhs });
                }
            }
        }
    }
    let rank = pivots.len();
    if rank != n {
        return Err(Error::Invalid(format!("extension system has rank {rank} < {n}")));
    }
    let mut values = data;
    for (col, row) in pivots {
        values.insert(slots[col], row.rhs);
    }
    Ok(Extension::Unique { values, unknowns: n, rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{ChartScheme, Generator};

    #[test]
    fn canonical_data_extends_uniquely() {
        let s = ChartScheme::phase(1);
        let eta = Poly::gen(&s, Generator::eta(1));
        let p = Poly::gen(&s, Generator::p(1));
        match extension_solve(&-eta.clone(), &eta, &p).unwrap() {
            Extension::Unique { values, .. } => {
                assert_eq!(values[&slot(3, 0, 2, SlotKind::A)], -eta.clone());
                assert_eq!(values[&slot(3, 1, 3, SlotKind::C)], p);
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn a_plus_b_nonzero_is_obstructed() {
        let s = ChartScheme::phase(1);
        let eta = Poly::gen(&s, Generator::eta(1));
        match extension_solve(&eta, &eta, &Poly::zero(&s)).unwrap() {
            Extension::Obstructed { constraint, .. } => {
                assert_eq!(constraint.map, MonotoneMap::codegeneracy(0, 0));
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn homogeneous_nullity_is_two() {
        let r = extension_ranks(3);
        assert_eq!(r.nullity, 2);
        assert_eq!(r.level_one_free, vec![slot(1, 0, 1, SlotKind::B), slot(1, 0, 1, SlotKind::C)]);
    }
}
