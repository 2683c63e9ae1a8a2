//! The skew polynomial ring F_{q^d}{τ} with τ·λ = λ^q·τ.
//!
//! Its center is F_q[t] with t = τ^d. Every polynomial the construction
//! touches divides 1 − t, whose additive polynomial has kernel exactly
//! F_{q^d}, so kernels are computed inside F_{q^d} only.

mod factor;
mod subspace;

use std::fmt;

use thiserror::Error;

use crate::ff::{nullspace, CenterPoly, FFElem, FfError, Field, FieldCtx, Level, Poly};

pub use factor::{StandardFactorization, StandardStep};
pub use subspace::{gaussian_binomial, Flag, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkewError {
    #[error(transparent)]
    Field(#[from] FfError),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("left gcd of two zero polynomials")]
    BothZero,
    #[error("reduced norm has a coefficient outside F_q")]
    NormOutsideBase,
    #[error("subspace product is not an additive polynomial")]
    NotAdditive,
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
    #[error("invalid subspace: {0}")]
    InvalidSubspace(String),
    #[error("no nonzero trace-dual element at step {0}")]
    NoTraceDual(usize),
    #[error("kernel basis became linearly dependent at step {0}")]
    LinearDependence(usize),
    #[error("factor product does not reproduce 1 - t")]
    ProductMismatch,
}

/// Element of F_{q^d}{τ}: coefficient `i` multiplies τ^i (on the left).
/// Trailing zeros are trimmed, so the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkewPoly {
    coeffs: Vec<FFElem>,
}

impl SkewPoly {
    pub fn new(coeffs: Vec<FFElem>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.level() == Level::Skew));
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(FFElem::is_zero) {
            coeffs.pop();
        }
        SkewPoly { coeffs }
    }

    pub fn zero() -> Self {
        SkewPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[FFElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// τ-degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FFElem> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> Option<&FFElem> {
        self.coeffs.first()
    }
}

/// Text form `a_k*T^k + … + a_0` with coefficients as element indices.
pub struct SkewText<'a> {
    poly: &'a SkewPoly,
    ctx: &'a FieldCtx,
}

impl fmt::Display for SkewText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.ctx.skew();
        let terms: Vec<(usize, u64)> = self
            .poly
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, field.index(c)))
            .collect();
        write!(f, "{}", crate::ff::format_terms(&terms, "T", " + "))
    }
}

/// Arithmetic in F_{q^d}{τ} over a fixed tower.
#[derive(Clone, Copy)]
pub struct SkewRing<'a> {
    ctx: &'a FieldCtx,
}

impl<'a> SkewRing<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Self {
        SkewRing { ctx }
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    fn field(&self) -> &'a Field {
        self.ctx.skew()
    }

    pub fn d(&self) -> usize {
        self.ctx.d()
    }

    pub fn one(&self) -> SkewPoly {
        self.constant(self.field().one())
    }

    pub fn constant(&self, c: FFElem) -> SkewPoly {
        SkewPoly::new(vec![c])
    }

    /// `c·τ^k`
    pub fn monomial(&self, c: FFElem, k: usize) -> SkewPoly {
        let mut coeffs = vec![self.field().zero(); k];
        coeffs.push(c);
        SkewPoly::new(coeffs)
    }

    pub fn tau(&self) -> SkewPoly {
        self.monomial(self.field().one(), 1)
    }

    /// A central polynomial c(t) viewed in the skew ring (t = τ^d).
    pub fn from_center(&self, c: &CenterPoly) -> SkewPoly {
        let f = self.field();
        let d = self.d();
        let mut coeffs = vec![f.zero(); c.coeffs().len().saturating_sub(1) * d + 1];
        for (j, cj) in c.coeffs().iter().enumerate() {
            coeffs[j * d] = self
                .ctx
                .embed(cj, Level::Skew)
                .expect("center coefficients lie in F_q");
        }
        SkewPoly::new(coeffs)
    }

    /// 1 − t = 1 − τ^d.
    pub fn one_minus_t(&self) -> SkewPoly {
        let f = self.field();
        let mut coeffs = vec![f.zero(); self.d() + 1];
        coeffs[0] = f.one();
        coeffs[self.d()] = f.neg(&f.one());
        SkewPoly::new(coeffs)
    }

    /// `1 − c·τ`
    pub fn one_minus_linear(&self, c: &FFElem) -> SkewPoly {
        let f = self.field();
        SkewPoly::new(vec![f.one(), f.neg(c)])
    }

    pub fn text<'b>(&'b self, a: &'b SkewPoly) -> SkewText<'b> {
        SkewText {
            poly: a,
            ctx: self.ctx,
        }
    }

    /// Ascending human-readable form with signs, e.g. `1 - T` or `1 + 4*T`.
    pub fn pretty(&self, a: &SkewPoly) -> String {
        let f = self.field();
        let minus_one = f.neg(&f.one());
        let mut out = String::new();
        for (k, c) in a.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let var = match k {
                0 => String::new(),
                1 => "T".into(),
                _ => format!("T^{k}"),
            };
            let (neg, body) = if k > 0 && *c == minus_one {
                (true, var)
            } else if k > 0 && *c == f.one() {
                (false, var)
            } else if k == 0 {
                (false, f.index(c).to_string())
            } else {
                (false, format!("{}*{var}", f.index(c)))
            };
            match (out.is_empty(), neg) {
                (true, true) => out.push_str(&format!("-{body}")),
                (true, false) => out.push_str(&body),
                (false, true) => out.push_str(&format!(" - {body}")),
                (false, false) => out.push_str(&format!(" + {body}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Factor list as `(1 - T)(1 + T)`.
    pub fn pretty_product(&self, factors: &[SkewPoly]) -> String {
        factors
            .iter()
            .map(|g| format!("({})", self.pretty(g)))
            .collect()
    }

    pub fn parse(&self, text: &str) -> Result<SkewPoly, SkewError> {
        let f = self.field();
        let terms = crate::ff::parse_terms(text, "T")?;
        let deg = terms.iter().map(|&(k, _)| k).max().unwrap_or(0);
        let mut coeffs = vec![f.zero(); deg + 1];
        for (k, c) in terms {
            if c >= f.order() {
                return Err(FfError::Parse {
                    text: text.into(),
                    reason: format!("coefficient {c} out of range"),
                }
                .into());
            }
            coeffs[k] = f.add(&coeffs[k], &f.from_index(c));
        }
        Ok(SkewPoly::new(coeffs))
    }

    pub fn add(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        let f = self.field();
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = f.zero();
        SkewPoly::new(
            (0..n)
                .map(|i| f.add(a.coeffs.get(i).unwrap_or(&z), b.coeffs.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn sub(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        let f = self.field();
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = f.zero();
        SkewPoly::new(
            (0..n)
                .map(|i| f.sub(a.coeffs.get(i).unwrap_or(&z), b.coeffs.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn neg(&self, a: &SkewPoly) -> SkewPoly {
        SkewPoly::new(a.coeffs.iter().map(|c| self.field().neg(c)).collect())
    }

    /// (λτ^i)(μτ^j) = λ·μ^{q^i}·τ^{i+j}, extended bilinearly.
    pub fn mul(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        if a.is_zero() || b.is_zero() {
            return SkewPoly::zero();
        }
        let f = self.field();
        let mut out = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        // b's coefficients twisted by σ^i, updated incrementally
        let mut twisted: Vec<FFElem> = b.coeffs.clone();
        for (i, ai) in a.coeffs.iter().enumerate() {
            if i > 0 {
                twisted = twisted.iter().map(|c| self.ctx.frobenius_q(c, 1)).collect();
            }
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in twisted.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(ai, bj));
            }
        }
        SkewPoly::new(out)
    }

    pub fn product<'b>(&self, factors: impl IntoIterator<Item = &'b SkewPoly>) -> SkewPoly {
        factors
            .into_iter()
            .fold(self.one(), |acc, g| self.mul(&acc, g))
    }

    /// `c·a` (scalar on the left).
    pub fn scale_left(&self, c: &FFElem, a: &SkewPoly) -> SkewPoly {
        SkewPoly::new(a.coeffs.iter().map(|x| self.field().mul(c, x)).collect())
    }

    /// `a·c` (scalar on the right): coefficient i picks up c^{q^i}.
    pub fn scale_right(&self, a: &SkewPoly, c: &FFElem) -> SkewPoly {
        SkewPoly::new(
            a.coeffs
                .iter()
                .enumerate()
                .map(|(i, x)| self.field().mul(x, &self.ctx.frobenius_q(c, i)))
                .collect(),
        )
    }

    /// Left-multiplies by the inverse leading coefficient.
    pub fn monic(&self, a: &SkewPoly) -> Result<SkewPoly, SkewError> {
        let lead = a.leading().ok_or(SkewError::ZeroPolynomial)?;
        let inv = self
            .field()
            .inv(lead)
            .expect("leading coefficient is nonzero");
        Ok(self.scale_left(&inv, a))
    }

    /// Scales on the left so the constant term is 1. Fails when τ divides `a`.
    pub fn constant_term_one(&self, a: &SkewPoly) -> Result<SkewPoly, SkewError> {
        let c = a.constant_term().ok_or(SkewError::ZeroPolynomial)?;
        let inv = self.field().inv(c).ok_or(SkewError::DivisionByZero)?;
        Ok(self.scale_left(&inv, a))
    }

    /// `a = quotient·b + remainder` with deg remainder < deg b.
    pub fn right_divmod(
        &self,
        a: &SkewPoly,
        b: &SkewPoly,
    ) -> Result<(SkewPoly, SkewPoly), SkewError> {
        let db = b.degree().ok_or(SkewError::DivisionByZero)?;
        let f = self.field();
        let lead_b = b.leading().unwrap();
        let mut quot = vec![f.zero(); a.coeffs.len().saturating_sub(db)];
        let mut rem = a.clone();
        while let Some(dr) = rem.degree().filter(|&dr| dr >= db) {
            let m = dr - db;
            // c·τ^m·b has leading term c·lead(b)^{q^m}·τ^{dr}
            let c = f.div(rem.leading().unwrap(), &self.ctx.frobenius_q(lead_b, m))?;
            rem = self.sub(&rem, &self.mul(&self.monomial(c.clone(), m), b));
            quot[m] = c;
        }
        Ok((SkewPoly::new(quot), rem))
    }

    /// `a = b·quotient + remainder` with deg remainder < deg b.
    pub fn left_divmod(
        &self,
        a: &SkewPoly,
        b: &SkewPoly,
    ) -> Result<(SkewPoly, SkewPoly), SkewError> {
        let db = b.degree().ok_or(SkewError::DivisionByZero)?;
        let f = self.field();
        let lead_b = b.leading().unwrap();
        let mut quot = vec![f.zero(); a.coeffs.len().saturating_sub(db)];
        let mut rem = a.clone();
        while let Some(dr) = rem.degree().filter(|&dr| dr >= db) {
            let m = dr - db;
            // b·c·τ^m has leading term lead(b)·c^{q^{db}}·τ^{dr}
            let ratio = f.div(rem.leading().unwrap(), lead_b)?;
            let c = self.ctx.inv_frobenius_q(&ratio, db);
            rem = self.sub(&rem, &self.mul(b, &self.monomial(c.clone(), m)));
            quot[m] = c;
        }
        Ok((SkewPoly::new(quot), rem))
    }

    /// Monic generator of the left ideal F_{q^d}{τ}·a + F_{q^d}{τ}·b; it
    /// right-divides both inputs.
    pub fn left_gcd(&self, a: &SkewPoly, b: &SkewPoly) -> Result<SkewPoly, SkewError> {
        if a.is_zero() && b.is_zero() {
            return Err(SkewError::BothZero);
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = self.right_divmod(&x, &y)?;
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Coefficients α_i(t) ∈ F_{q^d}[t] of `a = Σ_{i<d} α_i(t) τ^i`.
    pub fn center_decomposition(&self, a: &SkewPoly) -> Vec<Poly> {
        let d = self.d();
        (0..d)
            .map(|i| {
                Poly::new(
                    Level::Skew,
                    a.coeffs.iter().skip(i).step_by(d).cloned().collect(),
                )
            })
            .collect()
    }

    /// d×d matrix over F_{q^d}[t] of right multiplication by `a` on the basis
    /// 1, τ, …, τ^{d−1}: entry (r, c) = t^{[c<r]}·σ^r(α_{(c−r) mod d}).
    ///
    /// Row r holds the coordinates of τ^r·a, so the map is multiplicative:
    /// M(a·b) = M(a)·M(b).
    pub fn regular_representation(&self, a: &SkewPoly) -> Vec<Vec<Poly>> {
        let d = self.d();
        let f = self.field();
        let alphas = self.center_decomposition(a);
        let t = Poly::monomial(f, f.one(), 1);
        (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| {
                        let alpha = &alphas[(c + d - r) % d];
                        let twisted = alpha.map_coeffs(Level::Skew, |x| self.ctx.frobenius_q(x, r));
                        if c < r {
                            twisted.mul(&t, f)
                        } else {
                            twisted
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Reduced norm: determinant of [`Self::regular_representation`], with
    /// every coefficient checked to lie in F_q.
    pub fn reduced_norm(&self, a: &SkewPoly) -> Result<CenterPoly, SkewError> {
        let m = self.regular_representation(a);
        let det = poly_determinant(m, self.field());
        det.restrict_to_base(self.ctx)
            .map_err(|_| SkewError::NormOutsideBase)
    }

    /// φ_a(x) = Σ a_i x^{q^i}, for x in F_{q^d} or F_{q^{dn}}.
    pub fn phi_eval(&self, a: &SkewPoly, x: &FFElem) -> FFElem {
        let field = self.ctx.field_of(x);
        let mut acc = field.zero();
        let mut power = x.clone();
        for (i, c) in a.coeffs.iter().enumerate() {
            if i > 0 {
                power = field.pow(&power, self.ctx.q());
            }
            if !c.is_zero() {
                let c = self
                    .ctx
                    .embed(c, x.level())
                    .expect("coefficients embed upward");
                acc = field.add(&acc, &field.mul(&c, &power));
            }
        }
        acc
    }

    /// Matrix of φ_a on the power basis of F_{q^d}, rows = coordinates of
    /// φ_a(u^i).
    fn phi_matrix(&self, a: &SkewPoly) -> Vec<Vec<FFElem>> {
        let f = self.field();
        let u = f.generator();
        (0..self.d())
            .map(|i| {
                self.ctx
                    .skew_coords(&self.phi_eval(a, &f.pow(&u, i as u64)))
            })
            .collect()
    }

    /// {x ∈ F_{q^d} : φ_a(x) = 0} as an F_q-subspace in echelon form.
    pub fn phi_kernel(&self, a: &SkewPoly) -> Result<Subspace, SkewError> {
        if a.is_zero() {
            return Err(SkewError::ZeroPolynomial);
        }
        let basis = nullspace(self.ctx.base(), &self.phi_matrix(a));
        Ok(Subspace::from_echelon(self.d(), basis))
    }

    /// φ_a(F_{q^d}) as an F_q-subspace.
    pub fn phi_image(&self, a: &SkewPoly) -> Subspace {
        Subspace::span(self.ctx, self.d(), self.phi_matrix(a))
    }
}

/// Bareiss fraction-free determinant over a polynomial ring F[t].
fn poly_determinant(mut m: Vec<Vec<Poly>>, field: &Field) -> Poly {
    let n = m.len();
    let level = field.level();
    if n == 0 {
        return Poly::constant(field.one());
    }
    let mut negate = false;
    let mut prev = Poly::constant(field.one());
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Poly::zero(level),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j]
                    .mul(&m[k][k], field)
                    .sub(&m[i][k].mul(&m[k][j], field), field);
                let (quot, rem) = num.divmod(&prev, field).expect("Bareiss pivot is nonzero");
                debug_assert!(rem.is_zero(), "Bareiss division is exact");
                m[i][j] = quot;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        det.neg(field)
    } else {
        det
    }
}

#[cfg(test)]
mod tests;
