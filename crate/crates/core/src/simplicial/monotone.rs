use std::fmt;

use crate::error::{Error, Result};

/// A monotone map [n] → [m] in the simplex category.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotoneMap {
    target: u8,
    values: Vec<u8>,
}

/// Epi-mono factorization f = mono ∘ epi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub epi: MonotoneMap,
    pub mono: MonotoneMap,
    /// j's with epi = s^{j_1} ∘ ⋯ ∘ s^{j_t}, j_1 < ⋯ < j_t.
    pub codegeneracies: Vec<u8>,
    /// i's with mono = d^{i_1} ∘ ⋯ ∘ d^{i_r}, i_1 > ⋯ > i_r.
    pub cofaces: Vec<u8>,
}

impl MonotoneMap {
    pub fn new(target: u8, values: Vec<u8>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid("a monotone map needs a nonempty source".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invalid(format!("{values:?} is not monotone")));
        }
        if values.iter().any(|&v| v > target) {
            return Err(Error::Invalid(format!("{values:?} exceeds target [{target}]")));
        }
        Ok(MonotoneMap { target, values })
    }

    pub fn identity(n: u8) -> Self {
        MonotoneMap { target: n, values: (0..=n).collect() }
    }

    /// d^i : [n] → [n+1], the injection skipping i (0 ≤ i ≤ n+1).
    pub fn coface(n: u8, i: u8) -> Self {
        assert!(i <= n + 1, "coface index {i} out of range for [{n}]");
        MonotoneMap { target: n + 1, values: (0..=n).map(|k| if k < i { k } else { k + 1 }).collect() }
    }

    /// s^j : [n+1] → [n], the surjection hitting j twice (0 ≤ j ≤ n).
    pub fn codegeneracy(n: u8, j: u8) -> Self {
        assert!(j <= n, "codegeneracy index {j} out of range for [{n}]");
        MonotoneMap { target: n, values: (0..=n + 1).map(|k| if k <= j { k } else { k - 1 }).collect() }
    }

    pub fn source(&self) -> u8 {
        (self.values.len() - 1) as u8
    }

    pub fn target(&self) -> u8 {
        self.target
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn apply(&self, i: u8) -> u8 {
        self.values[i as usize]
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        (0..=self.target).all(|v| self.values.contains(&v))
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &MonotoneMap) -> Result<MonotoneMap> {
        if g.target != self.source() {
            return Err(Error::Invalid(format!(
                "cannot compose [{}]→[{}] after [{}]→[{}]",
                self.source(),
                self.target,
                g.source(),
                g.target
            )));
        }
        Ok(MonotoneMap { target: self.target, values: g.values.iter().map(|&v| self.apply(v)).collect() })
    }

    pub fn factor(&self) -> Factorization {
        let image: Vec<u8> = {
            let mut v = self.values.clone();
            v.dedup();
            v
        };
        let epi_target = (image.len() - 1) as u8;
        let epi = MonotoneMap {
            target: epi_target,
            values: self.values.iter().map(|v| image.iter().position(|w| w == v).unwrap() as u8).collect(),
        };
        let mono = MonotoneMap { target: self.target, values: image.clone() };
        let codegeneracies =
            (0..self.source()).filter(|&j| self.values[j as usize] == self.values[j as usize + 1]).collect();
        let mut cofaces: Vec<u8> = (0..=self.target).filter(|v| !image.contains(v)).collect();
        cofaces.reverse();
        Factorization { epi, mono, codegeneracies, cofaces }
    }

    /// All monotone maps [n] → [m], lexicographically.
    pub fn all(n: u8, m: u8) -> Vec<MonotoneMap> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n as usize + 1);
        fn rec(n: u8, m: u8, lo: u8, cur: &mut Vec<u8>, out: &mut Vec<MonotoneMap>) {
            if cur.len() == n as usize + 1 {
                out.push(MonotoneMap { target: m, values: cur.clone() });
                return;
            }
            for v in lo..=m {
                cur.push(v);
                rec(n, m, v, cur, out);
                cur.pop();
            }
        }
        rec(n, m, 0, &mut cur, &mut out);
        out
    }

    /// All injective monotone maps [n] → [m].
    pub fn injective(n: u8, m: u8) -> Vec<MonotoneMap> {
        Self::all(n, m).into_iter().filter(MonotoneMap::is_injective).collect()
    }
}

impl fmt::Display for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(u8::to_string).collect();
        write!(f, "[{}]->[{}]:({})", self.source(), self.target, v.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosimplicial_identities() {
        for n in 0..=4u8 {
            for j in 0..=n + 2 {
                for i in 0..j {
                    let lhs = MonotoneMap::coface(n + 1, j).compose(&MonotoneMap::coface(n, i)).unwrap();
                    let rhs = MonotoneMap::coface(n + 1, i).compose(&MonotoneMap::coface(n, j - 1)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            for i in 0..=n {
                let s = MonotoneMap::codegeneracy(n, i);
                assert_eq!(s.compose(&MonotoneMap::coface(n, i)).unwrap(), MonotoneMap::identity(n));
                assert_eq!(s.compose(&MonotoneMap::coface(n, i + 1)).unwrap(), MonotoneMap::identity(n));
            }
        }
    }

    #[test]
    fn factorization_example() {
        let f = MonotoneMap::new(2, vec![0, 0, 1, 2]).unwrap();
        let fac = f.factor();
        assert_eq!(fac.codegeneracies, vec![0]);
        assert!(fac.cofaces.is_empty());
        assert_eq!(fac.epi, MonotoneMap::codegeneracy(2, 0));
        assert_eq!(fac.mono.compose(&fac.epi).unwrap(), f);
    }

    #[test]
    fn counts() {
        assert_eq!(MonotoneMap::all(1, 2).len(), 6);
        assert_eq!(MonotoneMap::injective(1, 3).len(), 6);
        assert!(MonotoneMap::injective(3, 1).is_empty());
    }
}
