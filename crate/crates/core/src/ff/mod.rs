//! Exact arithmetic in the tower F_p ⊂ F_q ⊂ F_{q^d} ⊂ F_{q^{dn}}.
//!
//! Every level is represented directly over F_p by its own modulus, the
//! lexicographically smallest monic irreducible of the right degree. Elements
//! are coefficient vectors over F_p; the index `Σ c_i p^i` is the canonical
//! total order used to break every tie elsewhere in the crate.

mod linalg;
mod poly;
mod prime_poly;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

pub use linalg::{nullspace, rank, rref, solve_row_system};
pub use poly::{CenterPoly, Poly};
pub use prime_poly::{find_irreducible, PrimePoly};

/// Largest top-level field the context will build; everything here is scanned
/// exhaustively.
pub const MAX_FIELD_ORDER: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field level mismatch: {0:?} vs {1:?}")]
    LevelMismatch(Level, Level),
    #[error("no Hilbert-90 witness: trace is nonzero")]
    NoHilbert90Witness,
    #[error("cannot embed {from:?} into {to:?}")]
    IncompatibleEmbedding { from: Level, to: Level },
    #[error("element is not in F_q")]
    NotInBaseField,
    #[error("invalid field parameters: {0}")]
    InvalidParameters(String),
    #[error("cannot parse polynomial {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// The three constructed levels of the tower. F_p itself is implicit: it is
/// the coefficient field of every level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    /// F_q, degree e over F_p.
    Base,
    /// F_{q^d}, the coefficient field of the skew polynomial ring.
    Skew,
    /// F_{q^{dn}} = F_q[t]/(f), where the Cayley group lives.
    Top,
}

/// Element of one level of the tower: coefficient vector over F_p,
/// zero-padded to the level's degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FFElem {
    level: Level,
    coeffs: SmallVec<[u32; 8]>,
}

impl FFElem {
    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl Ord for FFElem {
    fn cmp(&self, other: &Self) -> Ordering {
        // highest coefficient is the most significant base-p digit of the index
        self.level
            .cmp(&other.level)
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for FFElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One level of the tower: F_p[u]/(modulus).
#[derive(Clone, Debug)]
pub struct Field {
    level: Level,
    p: u32,
    modulus: PrimePoly,
    degree: usize,
    order: u64,
}

impl Field {
    pub fn new(level: Level, modulus: PrimePoly) -> Result<Self, FfError> {
        let degree = modulus.degree().filter(|&d| d >= 1).ok_or_else(|| {
            FfError::InvalidParameters("modulus must have positive degree".into())
        })?;
        if !modulus.is_monic() {
            return Err(FfError::InvalidParameters(format!(
                "modulus {modulus} is not monic"
            )));
        }
        let order = (modulus.p() as u64)
            .checked_pow(degree as u32)
            .filter(|&o| o <= MAX_FIELD_ORDER)
            .ok_or_else(|| FfError::InvalidParameters("field too large".into()))?;
        if !modulus.is_irreducible() {
            return Err(FfError::InvalidParameters(format!(
                "modulus {modulus} is reducible"
            )));
        }
        Ok(Field {
            level,
            p: modulus.p(),
            modulus,
            degree,
            order,
        })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &PrimePoly {
        &self.modulus
    }

    pub fn zero(&self) -> FFElem {
        FFElem {
            level: self.level,
            coeffs: SmallVec::from_elem(0, self.degree),
        }
    }

    pub fn one(&self) -> FFElem {
        self.constant(1)
    }

    /// The element `c mod p` of the prime subfield.
    pub fn constant(&self, c: u64) -> FFElem {
        let mut x = self.zero();
        x.coeffs[0] = (c % self.p as u64) as u32;
        x
    }

    /// The class of the indeterminate, `u`, which generates the level over F_p.
    pub fn generator(&self) -> FFElem {
        if self.degree == 1 {
            // F_p[u]/(u - a): u = a
            return self.constant((self.p - self.modulus.coeffs()[0]) as u64);
        }
        let mut x = self.zero();
        x.coeffs[1] = 1;
        x
    }

    pub fn from_index(&self, mut index: u64) -> FFElem {
        debug_assert!(index < self.order(), "index {index} out of range");
        let mut x = self.zero();
        for c in x.coeffs.iter_mut() {
            *c = (index % self.p as u64) as u32;
            index /= self.p as u64;
        }
        x
    }

    pub fn index(&self, x: &FFElem) -> u64 {
        x.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.order).map(move |i| self.from_index(i))
    }

    pub fn contains(&self, x: &FFElem) -> bool {
        x.level == self.level && x.coeffs.len() == self.degree
    }

    fn check(&self, x: &FFElem) -> Result<(), FfError> {
        if x.level == self.level {
            Ok(())
        } else {
            Err(FfError::LevelMismatch(self.level, x.level))
        }
    }

    pub fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        debug_assert!(self.contains(a) && self.contains(b));
        let p = self.p;
        FFElem {
            level: self.level,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + y) % p)
                .collect(),
        }
    }

    pub fn sub(&self, a: &FFElem, b: &FFElem) -> FFElem {
        debug_assert!(self.contains(a) && self.contains(b));
        let p = self.p;
        FFElem {
            level: self.level,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + p - y) % p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FFElem) -> FFElem {
        let p = self.p;
        FFElem {
            level: self.level,
            coeffs: a.coeffs.iter().map(|&x| (p - x) % p).collect(),
        }
    }

    /// Multiplication by an element of the prime field.
    pub fn scale(&self, a: &FFElem, c: u64) -> FFElem {
        let p = self.p as u64;
        let c = c % p;
        FFElem {
            level: self.level,
            coeffs: a
                .coeffs
                .iter()
                .map(|&x| ((x as u64 * c) % p) as u32)
                .collect(),
        }
    }

    pub fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        debug_assert!(self.contains(a) && self.contains(b));
        let p = self.p as u64;
        let n = self.degree;
        let mut prod = [0u64; 64];
        let prod = if 2 * n <= 64 {
            &mut prod[..2 * n]
        } else {
            unreachable!("degree too large")
        };
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let m = self.modulus.coeffs();
        for i in (n..2 * n).rev() {
            let lead = prod[i];
            if lead == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..n {
                prod[i - n + j] = (prod[i - n + j] + (p - lead) * m[j] as u64) % p;
            }
        }
        FFElem {
            level: self.level,
            coeffs: prod[..n].iter().map(|&c| c as u32).collect(),
        }
    }

    pub fn square(&self, a: &FFElem) -> FFElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &FFElem, mut exp: u64) -> FFElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FFElem) -> Option<FFElem> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.order - 2))
        }
    }

    pub fn div(&self, a: &FFElem, b: &FFElem) -> Result<FFElem, FfError> {
        let inv = self.inv(b).ok_or(FfError::DivisionByZero)?;
        Ok(self.mul(a, &inv))
    }

    /// Evaluates a polynomial over F_p at `x`.
    pub fn eval_prime_poly(&self, f: &PrimePoly, x: &FFElem) -> FFElem {
        f.coeffs().iter().rev().fold(self.zero(), |acc, &c| {
            self.add(&self.mul(&acc, x), &self.constant(c as u64))
        })
    }

    /// Smallest-index generator of the multiplicative group.
    pub fn primitive_element(&self) -> FFElem {
        let m = self.order - 1;
        let primes = prime_factors(m);
        self.elements()
            .skip(1)
            .find(|x| primes.iter().all(|&r| self.pow(x, m / r) != self.one()))
            .expect("finite fields have cyclic unit groups")
    }
}

/// Checked arithmetic entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut r = 2;
    while r * r <= m {
        if m.is_multiple_of(r) {
            out.push(r);
            while m.is_multiple_of(r) {
                m /= r;
            }
        }
        r += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|r| r * r <= p)
            .all(|r| !p.is_multiple_of(r))
}

/// The tower F_p ⊂ F_q ⊂ F_{q^d} ⊂ F_{q^{dn}} with fixed embeddings.
///
/// The embedding of a lower level sends its generator to the smallest-index
/// root of its modulus in the next level up; F_q → F_{q^{dn}} is the
/// composite through F_{q^d}.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u32,
    e: usize,
    d: usize,
    n: usize,
    q: u64,
    base: Field,
    skew: Field,
    top: Field,
    base_root_in_skew: FFElem,
    skew_root_in_top: FFElem,
    base_in_skew: Vec<FFElem>,
    base_in_top: Vec<FFElem>,
    /// packed F_q-coordinates (w.r.t. 1, u, …, u^{d−1}) of each skew element by index
    skew_coords: Vec<u32>,
}

/// The three moduli of a tower, lowest level first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerModuli {
    pub base: PrimePoly,
    pub skew: PrimePoly,
    pub top: PrimePoly,
}

impl TowerModuli {
    pub fn smallest(p: u32, e: usize, d: usize, n: usize) -> Self {
        TowerModuli {
            base: find_irreducible(p, e),
            skew: find_irreducible(p, e * d),
            top: find_irreducible(p, e * d * n),
        }
    }
}

impl FieldCtx {
    /// Builds the tower with the deterministic (smallest irreducible) moduli.
    pub fn new(p: u32, e: usize, d: usize, n: usize) -> Result<Self, FfError> {
        Self::validate(p, e, d, n)?;
        Self::with_moduli(p, e, d, n, TowerModuli::smallest(p, e, d, n))
    }

    fn validate(p: u32, e: usize, d: usize, n: usize) -> Result<(), FfError> {
        if !is_prime(p as u64) || p >= 1 << 15 {
            return Err(FfError::InvalidParameters(format!(
                "p = {p} is not a supported prime"
            )));
        }
        if e < 1 || d < 2 || n < 1 {
            return Err(FfError::InvalidParameters(format!(
                "need e >= 1, d >= 2, n >= 1 (got e={e}, d={d}, n={n})"
            )));
        }
        let top_order = (p as u64).checked_pow((e * d * n) as u32);
        if top_order.is_none_or(|o| o > MAX_FIELD_ORDER) {
            return Err(FfError::InvalidParameters(
                "F_{q^{dn}} exceeds desk scale".into(),
            ));
        }
        Ok(())
    }

    /// Builds the tower from explicitly supplied moduli (e.g. a cache). The
    /// moduli are checked for degree and irreducibility, not minimality.
    pub fn with_moduli(
        p: u32,
        e: usize,
        d: usize,
        n: usize,
        moduli: TowerModuli,
    ) -> Result<Self, FfError> {
        Self::validate(p, e, d, n)?;
        for (m, deg) in [
            (&moduli.base, e),
            (&moduli.skew, e * d),
            (&moduli.top, e * d * n),
        ] {
            if m.p() != p || m.degree() != Some(deg) {
                return Err(FfError::InvalidParameters(format!(
                    "modulus {m} has wrong degree"
                )));
            }
        }
        let base = Field::new(Level::Base, moduli.base)?;
        let skew = Field::new(Level::Skew, moduli.skew)?;
        let top = Field::new(Level::Top, moduli.top)?;
        let q = base.order();
        let base_root_in_skew = smallest_root(&skew, base.modulus());
        let skew_root_in_top = smallest_root(&top, skew.modulus());
        let mut ctx = FieldCtx {
            p,
            e,
            d,
            n,
            q,
            base,
            skew,
            top,
            base_root_in_skew,
            skew_root_in_top,
            base_in_skew: Vec::new(),
            base_in_top: Vec::new(),
            skew_coords: Vec::new(),
        };
        ctx.base_in_skew = ctx
            .base
            .elements()
            .map(|b| ctx.eval_at(&b, &ctx.skew, &ctx.base_root_in_skew))
            .collect();
        ctx.base_in_top = ctx
            .base_in_skew
            .iter()
            .map(|b| ctx.eval_at(b, &ctx.top, &ctx.skew_root_in_top))
            .collect();
        ctx.skew_coords = ctx.build_coordinate_table();
        Ok(ctx)
    }

    fn build_coordinate_table(&self) -> Vec<u32> {
        let mut table = vec![0u32; self.skew.order() as usize];
        let powers: Vec<FFElem> = (0..self.d)
            .map(|i| self.skew.pow(&self.skew.generator(), i as u64))
            .collect();
        let total = self.q.pow(self.d as u32);
        for packed in 0..total {
            let mut rest = packed;
            let mut x = self.skew.zero();
            for pw in &powers {
                let c = &self.base_in_skew[(rest % self.q) as usize];
                rest /= self.q;
                x = self.skew.add(&x, &self.skew.mul(c, pw));
            }
            table[self.skew.index(&x) as usize] = packed as u32;
        }
        table
    }

    fn eval_at(&self, x: &FFElem, target: &Field, root: &FFElem) -> FFElem {
        x.coeffs.iter().rev().fold(target.zero(), |acc, &c| {
            target.add(&target.mul(&acc, root), &target.constant(c as u64))
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> usize {
        self.e
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn n(&self) -> usize {
        self.n
    }
    /// q = p^e
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn base(&self) -> &Field {
        &self.base
    }
    pub fn skew(&self) -> &Field {
        &self.skew
    }
    pub fn top(&self) -> &Field {
        &self.top
    }

    pub fn moduli(&self) -> TowerModuli {
        TowerModuli {
            base: self.base.modulus().clone(),
            skew: self.skew.modulus().clone(),
            top: self.top.modulus().clone(),
        }
    }

    pub fn level(&self, level: Level) -> &Field {
        match level {
            Level::Base => &self.base,
            Level::Skew => &self.skew,
            Level::Top => &self.top,
        }
    }

    pub fn field_of(&self, x: &FFElem) -> &Field {
        self.level(x.level)
    }

    /// Degree of a level over F_q.
    pub fn degree_over_base(&self, level: Level) -> usize {
        match level {
            Level::Base => 1,
            Level::Skew => self.d,
            Level::Top => self.d * self.n,
        }
    }

    pub fn arith(&self, x: &FFElem, y: &FFElem, op: ArithOp) -> Result<FFElem, FfError> {
        let f = self.field_of(x);
        f.check(y)?;
        Ok(match op {
            ArithOp::Add => f.add(x, y),
            ArithOp::Sub => f.sub(x, y),
            ArithOp::Mul => f.mul(x, y),
            ArithOp::Div => f.div(x, y)?,
        })
    }

    /// x^{q^k}.
    pub fn frobenius_q(&self, x: &FFElem, k: usize) -> FFElem {
        let f = self.field_of(x);
        let k = k % self.degree_over_base(x.level);
        (0..k).fold(x.clone(), |acc, _| f.pow(&acc, self.q))
    }

    /// Inverse Frobenius σ^{-k}, i.e. σ^{m−k} where m is the degree over F_q.
    pub fn inv_frobenius_q(&self, x: &FFElem, k: usize) -> FFElem {
        let m = self.degree_over_base(x.level);
        self.frobenius_q(x, (m - k % m) % m)
    }

    pub fn is_in_base(&self, x: &FFElem) -> bool {
        x.level == Level::Base || self.frobenius_q(x, 1) == *x
    }

    /// Image of `x` under the fixed embedding into `target`.
    pub fn embed(&self, x: &FFElem, target: Level) -> Result<FFElem, FfError> {
        match (x.level, target) {
            (a, b) if a == b => Ok(x.clone()),
            (Level::Base, Level::Skew) => {
                Ok(self.base_in_skew[self.base.index(x) as usize].clone())
            }
            (Level::Base, Level::Top) => Ok(self.base_in_top[self.base.index(x) as usize].clone()),
            (Level::Skew, Level::Top) => Ok(self.eval_at(x, &self.top, &self.skew_root_in_top)),
            (from, to) => Err(FfError::IncompatibleEmbedding { from, to }),
        }
    }

    /// Preimage in F_q of an element of a higher level, if it lies in F_q.
    pub fn restrict_to_base(&self, x: &FFElem) -> Option<FFElem> {
        let table = match x.level {
            Level::Base => return Some(x.clone()),
            Level::Skew => &self.base_in_skew,
            Level::Top => &self.base_in_top,
        };
        table
            .iter()
            .position(|y| y == x)
            .map(|i| self.base.from_index(i as u64))
    }

    /// Σ_{i<d} y^{q^i}, returned as an element of F_q.
    pub fn trace_to_base(&self, y: &FFElem) -> Result<FFElem, FfError> {
        self.skew.check(y)?;
        let mut acc = self.skew.zero();
        let mut conj = y.clone();
        for _ in 0..self.d {
            acc = self.skew.add(&acc, &conj);
            conj = self.skew.pow(&conj, self.q);
        }
        self.restrict_to_base(&acc).ok_or(FfError::NotInBaseField)
    }

    /// Π_{i<d} y^{q^i} as an element of F_q.
    pub fn norm_to_base(&self, y: &FFElem) -> Result<FFElem, FfError> {
        self.skew.check(y)?;
        let mut acc = self.skew.one();
        let mut conj = y.clone();
        for _ in 0..self.d {
            acc = self.skew.mul(&acc, &conj);
            conj = self.skew.pow(&conj, self.q);
        }
        self.restrict_to_base(&acc).ok_or(FfError::NotInBaseField)
    }

    /// F_q-coordinates of a skew element w.r.t. the basis 1, u, …, u^{d−1}.
    pub fn skew_coords(&self, x: &FFElem) -> Vec<FFElem> {
        debug_assert_eq!(x.level, Level::Skew);
        let mut packed = self.skew_coords[self.skew.index(x) as usize] as u64;
        (0..self.d)
            .map(|_| {
                let c = self.base.from_index(packed % self.q);
                packed /= self.q;
                c
            })
            .collect()
    }

    pub fn skew_from_coords(&self, coords: &[FFElem]) -> FFElem {
        let u = self.skew.generator();
        coords.iter().rev().fold(self.skew.zero(), |acc, c| {
            let c = self.embed(c, Level::Skew).expect("coordinates lie in F_q");
            self.skew.add(&self.skew.mul(&acc, &u), &c)
        })
    }

    /// θ ∈ F_{q^d} with θ − θ^q = β; the smallest-index one of the q solutions.
    pub fn hilbert90_solve(&self, beta: &FFElem) -> Result<FFElem, FfError> {
        self.skew.check(beta)?;
        if !self.trace_to_base(beta)?.is_zero() {
            return Err(FfError::NoHilbert90Witness);
        }
        // rows: coordinates of L(b_i) = b_i − b_i^q for the power basis b_i = u^i
        let u = self.skew.generator();
        let rows: Vec<Vec<FFElem>> = (0..self.d)
            .map(|i| {
                let b = self.skew.pow(&u, i as u64);
                self.skew_coords(&self.skew.sub(&b, &self.frobenius_q(&b, 1)))
            })
            .collect();
        let target = self.skew_coords(beta);
        let coeffs =
            solve_row_system(&self.base, &rows, &target).ok_or(FfError::NoHilbert90Witness)?;
        let theta0 = self.skew_from_coords(&coeffs);
        Ok(self
            .base_in_skew
            .iter()
            .map(|c| self.skew.add(&theta0, c))
            .min()
            .expect("F_q is nonempty"))
    }

    /// All roots of `g` in the given level, sorted by index.
    pub fn poly_roots(&self, g: &Poly, level: Level) -> Result<Vec<FFElem>, FfError> {
        let field = self.level(level);
        let g = g.embed(self, level)?;
        Ok(field
            .elements()
            .filter(|x| g.eval(field, x).is_zero())
            .collect())
    }

    pub fn parse_element(&self, level: Level, text: &str) -> Result<FFElem, FfError> {
        let field = self.level(level);
        let idx: u64 = text.trim().parse().map_err(|_| FfError::Parse {
            text: text.into(),
            reason: "element index must be a nonnegative integer".into(),
        })?;
        if idx >= field.order() {
            return Err(FfError::Parse {
                text: text.into(),
                reason: "element index out of range".into(),
            });
        }
        Ok(field.from_index(idx))
    }
}

fn smallest_root(target: &Field, f: &PrimePoly) -> FFElem {
    target
        .elements()
        .find(|x| target.eval_prime_poly(f, x).is_zero())
        .expect("subfield modulus splits in the larger field")
}

/// Renders `c*var^k` terms (highest degree first) joined by `sep`.
pub(crate) fn format_terms(terms: &[(usize, u64)], var: &str, sep: &str) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .rev()
        .map(|&(k, c)| {
            if k == 0 {
                c.to_string()
            } else {
                format!("{c}*{var}^{k}")
            }
        })
        .collect::<Vec<_>>()
        .join(sep)
}

/// Parses `c_k*var^k+...+c_0` into (degree, coefficient-index) pairs. Also
/// accepts `var`, `var^k` and `c*var` shorthand.
pub(crate) fn parse_terms(text: &str, var: &str) -> Result<Vec<(usize, u64)>, FfError> {
    let err = |reason: &str| FfError::Parse {
        text: text.into(),
        reason: reason.into(),
    };
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty polynomial"));
    }
    let mut out = Vec::new();
    for term in compact.split('+') {
        if term.is_empty() {
            return Err(err("empty term"));
        }
        let (coef, power) = match term.split_once('*') {
            Some((c, v)) => (c, Some(v)),
            None if term.starts_with(var) => ("1", Some(term)),
            None => (term, None),
        };
        let c: u64 = coef
            .parse()
            .map_err(|_| err("coefficient must be an element index"))?;
        let k = match power {
            None => 0,
            Some(v) => {
                let rest = v
                    .strip_prefix(var)
                    .ok_or_else(|| err("unexpected variable"))?;
                if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|e| e.parse().ok())
                        .ok_or_else(|| err("bad exponent"))?
                }
            }
        };
        out.push((k, c));
    }
    Ok(out)
}
