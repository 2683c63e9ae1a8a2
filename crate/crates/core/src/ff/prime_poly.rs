//! Dense polynomials over the prime field F_p, used to pick the tower moduli.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A polynomial over F_p with coefficients in `[0, p)`, lowest degree first.
///
/// Trailing zeros are trimmed; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePoly {
    p: u32,
    coeffs: Vec<u32>,
}

impl PrimePoly {
    pub fn new(p: u32, coeffs: Vec<u32>) -> Self {
        let mut coeffs: Vec<u32> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PrimePoly { p, coeffs }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Monic polynomial of the given degree whose lower coefficients are the
    /// base-p digits of `index` (c_0 least significant).
    pub fn monic_from_index(p: u32, degree: usize, mut index: u64) -> Self {
        let mut coeffs = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            coeffs.push((index % p as u64) as u32);
            index /= p as u64;
        }
        coeffs.push(1);
        PrimePoly { p, coeffs }
    }

    pub fn eval_prime(&self, x: u32) -> u32 {
        let p = self.p as u64;
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p) as u32
    }

    /// Remainder of `self` modulo a monic `divisor`.
    pub fn rem_monic(&self, divisor: &PrimePoly) -> PrimePoly {
        debug_assert!(divisor.is_monic());
        let p = self.p as u64;
        let dd = divisor.coeffs.len() - 1;
        let mut r: Vec<u64> = self.coeffs.iter().map(|&c| c as u64).collect();
        while r.len() > dd {
            let lead = r[r.len() - 1] % p;
            let shift = r.len() - 1 - dd;
            if lead != 0 {
                for (j, &dc) in divisor.coeffs.iter().enumerate() {
                    r[shift + j] = (r[shift + j] + (p - lead) * dc as u64) % p;
                }
            }
            r.pop();
        }
        PrimePoly::new(self.p, r.into_iter().map(|c| c as u32).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Irreducibility by trial division against every monic polynomial of
    /// degree 1..=deg/2.
    pub fn is_irreducible(&self) -> bool {
        let deg = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return false,
        };
        if deg == 1 {
            return true;
        }
        if (0..self.p).any(|x| self.eval_prime(x) == 0) {
            return false;
        }
        for k in 2..=deg / 2 {
            let count = (self.p as u64).pow(k as u32);
            for idx in 0..count {
                let div = PrimePoly::monic_from_index(self.p, k, idx);
                if self.rem_monic(&div).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for PrimePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, u64)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c as u64))
            .collect();
        write!(f, "{}", super::format_terms(&terms, "t", "+"))
    }
}

/// Lexicographically smallest monic irreducible polynomial of `degree` over F_p.
///
/// Candidates are scanned by the index `Σ c_i p^i` of their lower coefficients
/// `(c_0, …, c_{deg−1})`.
pub fn find_irreducible(p: u32, degree: usize) -> PrimePoly {
    assert!(degree >= 1, "degree must be positive");
    let count = (p as u64).pow(degree as u32);
    (0..count)
        .map(|idx| PrimePoly::monic_from_index(p, degree, idx))
        .find(PrimePoly::is_irreducible)
        .expect("an irreducible polynomial exists in every degree")
}
