//! Commutative univariate polynomials over one level of the tower.

use super::{format_terms, parse_terms, FFElem, FfError, Field, FieldCtx, Level};

/// Polynomial in `t` with coefficients in a single tower level, lowest degree
/// first, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    level: Level,
    coeffs: Vec<FFElem>,
}

/// Polynomial in the center F_q[t] of the skew ring (coefficients at
/// [`Level::Base`]). Holds 1 − t, the modulus f and reduced norms.
pub type CenterPoly = Poly;

impl Poly {
    pub fn new(level: Level, coeffs: Vec<FFElem>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.level() == level));
        let mut p = Poly { level, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(FFElem::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn zero(level: Level) -> Self {
        Poly {
            level,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: FFElem) -> Self {
        Poly::new(c.level(), vec![c])
    }

    /// `c·t^k`
    pub fn monomial(field: &Field, c: FFElem, k: usize) -> Self {
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Poly::new(field.level(), coeffs)
    }

    /// 1 − t over the given level.
    pub fn one_minus_t(field: &Field) -> Self {
        Poly::new(field.level(), vec![field.one(), field.neg(&field.one())])
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeffs(&self) -> &[FFElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, field: &Field) -> FFElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self, field: &Field) -> bool {
        self.coeffs.last() == Some(&field.one())
    }

    pub fn add(&self, other: &Poly, field: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| field.add(&self.coeff(i, field), &other.coeff(i, field)))
            .collect();
        Poly::new(self.level, coeffs)
    }

    pub fn sub(&self, other: &Poly, field: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| field.sub(&self.coeff(i, field), &other.coeff(i, field)))
            .collect();
        Poly::new(self.level, coeffs)
    }

    pub fn neg(&self, field: &Field) -> Poly {
        Poly::new(
            self.level,
            self.coeffs.iter().map(|c| field.neg(c)).collect(),
        )
    }

    pub fn scale(&self, c: &FFElem, field: &Field) -> Poly {
        Poly::new(
            self.level,
            self.coeffs.iter().map(|x| field.mul(x, c)).collect(),
        )
    }

    pub fn mul(&self, other: &Poly, field: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.level);
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(&out[i + j], &field.mul(a, b));
            }
        }
        Poly::new(self.level, out)
    }

    pub fn pow(&self, k: usize, field: &Field) -> Poly {
        (0..k).fold(Poly::constant(field.one()), |acc, _| acc.mul(self, field))
    }

    /// Euclidean division: `self = quotient·divisor + remainder`.
    pub fn divmod(&self, divisor: &Poly, field: &Field) -> Result<(Poly, Poly), FfError> {
        let dd = divisor.degree().ok_or(FfError::DivisionByZero)?;
        let lead_inv = field
            .inv(&divisor.coeffs[dd])
            .expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = field.mul(&rem[top], &lead_inv);
            let shift = top - dd;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = field.sub(&rem[shift + j], &field.mul(&c, dc));
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(FFElem::is_zero) {
                rem.pop();
            }
        }
        Ok((Poly::new(self.level, quot), Poly::new(self.level, rem)))
    }

    pub fn eval(&self, field: &Field, x: &FFElem) -> FFElem {
        self.coeffs
            .iter()
            .rev()
            .fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
    }

    /// Applies a coefficient map (e.g. Frobenius) termwise.
    pub fn map_coeffs(&self, level: Level, f: impl Fn(&FFElem) -> FFElem) -> Poly {
        Poly::new(level, self.coeffs.iter().map(f).collect())
    }

    /// Same polynomial with coefficients pushed into a higher level.
    pub fn embed(&self, ctx: &FieldCtx, target: Level) -> Result<Poly, FfError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| ctx.embed(c, target))
            .collect::<Result<_, _>>()?;
        Ok(Poly::new(target, coeffs))
    }

    /// Pulls coefficients back to F_q; fails if any coefficient is outside it.
    pub fn restrict_to_base(&self, ctx: &FieldCtx) -> Result<CenterPoly, FfError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| ctx.restrict_to_base(c).ok_or(FfError::NotInBaseField))
            .collect::<Result<_, _>>()?;
        Ok(Poly::new(Level::Base, coeffs))
    }

    /// Text encoding `c_k*t^k+...+c_0`, coefficients as element indices.
    pub fn to_text(&self, ctx: &FieldCtx) -> String {
        let field = ctx.level(self.level);
        let terms: Vec<(usize, u64)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, field.index(c)))
            .collect();
        format_terms(&terms, "t", "+")
    }

    pub fn parse(ctx: &FieldCtx, level: Level, text: &str) -> Result<Poly, FfError> {
        let field = ctx.level(level);
        let terms = parse_terms(text, "t")?;
        let deg = terms.iter().map(|&(k, _)| k).max().unwrap_or(0);
        let mut coeffs = vec![field.zero(); deg + 1];
        for (k, c) in terms {
            if c >= field.order() {
                return Err(FfError::Parse {
                    text: text.into(),
                    reason: format!("coefficient {c} out of range"),
                });
            }
            coeffs[k] = field.add(&coeffs[k], &field.from_index(c));
        }
        Ok(Poly::new(level, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let ctx = FieldCtx::new(3, 1, 2, 1).unwrap();
        let f = Poly::parse(&ctx, Level::Base, "1*t^2+1*t^1+2").unwrap();
        assert_eq!(f.degree(), Some(2));
        assert_eq!(f.to_text(&ctx), "1*t^2+1*t^1+2");
        let g = Poly::parse(&ctx, Level::Base, "t^2 + 1").unwrap();
        assert_eq!(g.to_text(&ctx), "1*t^2+1");
        assert!(Poly::parse(&ctx, Level::Base, "5*t").is_err());
        assert!(Poly::parse(&ctx, Level::Base, "1*x^2").is_err());
        assert_eq!(Poly::zero(Level::Base).to_text(&ctx), "0");
    }

    #[test]
    fn divmod_reconstructs() {
        let ctx = FieldCtx::new(3, 1, 2, 1).unwrap();
        let s = ctx.skew();
        let a = Poly::new(
            Level::Skew,
            (0..6).map(|i| s.from_index((i * 2 + 1) % 9)).collect(),
        );
        let b = Poly::new(
            Level::Skew,
            vec![s.from_index(4), s.from_index(7), s.from_index(5)],
        );
        let (qt, r) = a.divmod(&b, s).unwrap();
        assert!(r.degree().is_none_or(|d| d < 2));
        assert_eq!(qt.mul(&b, s).add(&r, s), a);
        assert!(a.divmod(&Poly::zero(Level::Skew), s).is_err());
    }
}
