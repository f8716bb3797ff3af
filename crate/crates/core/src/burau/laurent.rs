use std::collections::BTreeMap;

use super::field::PrimeField;
use crate::braid::Permutation;

/// A Laurent polynomial in `t_1..t_n` over `F_p`, stored sparsely as
/// exponent vector → nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Vec<i32>, u32>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn constant(c: u32, vars: usize, field: &PrimeField) -> Self {
        LaurentPoly::monomial(c, vec![0; vars], field)
    }

    pub fn monomial(c: u32, exponents: Vec<i32>, field: &PrimeField) -> Self {
        let c = c % field.modulus();
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(exponents, c);
        }
        LaurentPoly { terms }
    }

    /// `c · t_k^power`, one-based `k`.
    pub fn variable(c: u32, k: usize, power: i32, vars: usize, field: &PrimeField) -> Self {
        let mut e = vec![0; vars];
        e[k - 1] = power;
        LaurentPoly::monomial(c, e, field)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], u32)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn add(&self, other: &LaurentPoly, field: &PrimeField) -> LaurentPoly {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c, field);
        }
        out
    }

    pub fn neg(&self, field: &PrimeField) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), field.neg(c))).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly, field: &PrimeField) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, field.mul(ca, cb), field);
            }
        }
        out
    }

    fn add_term(&mut self, e: Vec<i32>, c: u32, field: &PrimeField) {
        if c == 0 {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = field.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// The variable permutation `^s`: `t_j ↦ t_{s^{-1}(j)}`, so the new
    /// exponent of `t_k` is the old exponent of `t_{s(k)}`.
    pub fn permute(&self, s: &Permutation) -> LaurentPoly {
        let img = s.zero_based();
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| ((0..e.len()).map(|k| e[img[k] as usize]).collect(), c))
                .collect(),
        }
    }

    /// Substitutes `t_k = taus[k-1]`; every variable with a negative
    /// exponent must have a nonzero value.
    pub fn evaluate(&self, taus: &[u32], field: &PrimeField) -> u32 {
        let mut acc = 0;
        for (e, &c) in &self.terms {
            let mut v = c;
            for (k, &x) in e.iter().enumerate() {
                if x > 0 {
                    v = field.mul(v, field.pow(taus[k], x as u64));
                } else if x < 0 {
                    v = field.mul(v, field.pow(field.inv(taus[k]), x.unsigned_abs() as u64));
                }
            }
            acc = field.add(acc, v);
        }
        acc
    }
}
