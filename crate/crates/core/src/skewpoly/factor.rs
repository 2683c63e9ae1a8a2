//! Subspace polynomials and factorizations of 1 − t.

use crate::ff::{rank, FFElem, Level, Poly};

use super::{Flag, SkewError, SkewPoly, SkewRing, Subspace};

/// One step of [`SkewRing::standard_factorization`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardStep {
    /// The chosen element x; its factor is 1 − x^{1−q}τ.
    pub x: FFElem,
    /// Basis of the kernel of the partial product ending at this factor.
    pub kernel_basis: Vec<FFElem>,
}

/// 1 − t = (1 − τ)(1 − x_{d−1}^{1−q}τ)…(1 − x_1^{1−q}τ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardFactorization {
    /// x_d = 1, x_{d−1}, …, x_1.
    pub xs: Vec<FFElem>,
    /// Factors in product order, left to right.
    pub factors: Vec<SkewPoly>,
    /// `steps[i]` describes the product of the first i+1 factors.
    pub steps: Vec<StandardStep>,
}

impl SkewRing<'_> {
    /// Monic skew polynomial whose additive polynomial is Π_{v∈W}(x − v).
    pub fn subspace_poly(&self, w: &Subspace) -> Result<SkewPoly, SkewError> {
        let f = self.ctx.skew();
        let q = self.ctx.q();
        let mut prod = Poly::constant(f.one());
        for v in w.elements(self.ctx) {
            let linear = Poly::new(Level::Skew, vec![f.neg(&v), f.one()]);
            prod = prod.mul(&linear, f);
        }
        let k = w.dim();
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut next_power = 1u64;
        for (deg, c) in prod.coeffs().iter().enumerate() {
            if deg as u64 == next_power {
                coeffs.push(c.clone());
                next_power *= q;
            } else if !c.is_zero() {
                return Err(SkewError::NotAdditive);
            }
        }
        // the loop only reaches exponents up to q^k, so the product is x^{q^k}-headed
        Ok(SkewPoly::new(coeffs))
    }

    /// Factors f_1, …, f_r of 1 − t, each with constant term 1, such that the
    /// kernel of f_{r−j+1}⋯f_r is the j-th member of the flag.
    pub fn factorize_by_flag(&self, flag: &Flag) -> Result<Vec<SkewPoly>, SkewError> {
        let members = flag.members();
        if members.last().map(Subspace::dim) != Some(self.d()) {
            return Err(SkewError::InvalidFlag("flag must end at F_{q^d}".into()));
        }
        let mut prev = self.one();
        let mut rev_factors = Vec::with_capacity(members.len());
        for w in members {
            let g = self.subspace_poly(w)?;
            let (quot, rem) = self.right_divmod(&g, &prev)?;
            if !rem.is_zero() {
                return Err(SkewError::InvalidFlag("flag members are not nested".into()));
            }
            rev_factors.push(quot);
            prev = g;
        }
        rev_factors.reverse();
        let factors = self.normalize_factors(rev_factors)?;
        if self.product(&factors) != self.one_minus_t() {
            return Err(SkewError::ProductMismatch);
        }
        Ok(factors)
    }

    /// Rescales a factor list to constant terms 1 without changing the product
    /// beyond a left scalar, moving scalars from each factor into its left
    /// neighbour.
    pub fn normalize_factors(
        &self,
        mut factors: Vec<SkewPoly>,
    ) -> Result<Vec<SkewPoly>, SkewError> {
        let f = self.ctx.skew();
        for i in (0..factors.len()).rev() {
            let c = factors[i]
                .constant_term()
                .ok_or(SkewError::ZeroPolynomial)?
                .clone();
            let inv = f.inv(&c).ok_or(SkewError::DivisionByZero)?;
            factors[i] = self.scale_left(&inv, &factors[i]);
            if i > 0 {
                factors[i - 1] = self.scale_right(&factors[i - 1], &c);
            }
        }
        Ok(factors)
    }

    /// The explicit factorization of 1 − t into d factors of the form
    /// 1 − x^{1−q}τ.
    ///
    /// Each x is the smallest-index nonzero element trace-orthogonal (via
    /// y ↦ Tr(y/x)) to the current kernel basis; the basis is then extended by
    /// lifting through θ − θ^q = y/x.
    pub fn standard_factorization(&self) -> Result<StandardFactorization, SkewError> {
        let ctx = self.ctx;
        let f = ctx.skew();
        let d = self.d();
        let mut xs = vec![f.one()];
        let mut factors = vec![self.one_minus_linear(&f.one())];
        let mut basis = vec![f.one()];
        let mut steps = vec![StandardStep {
            x: f.one(),
            kernel_basis: basis.clone(),
        }];
        for k in 1..d {
            let x = f
                .elements()
                .skip(1)
                .find(|u| {
                    basis.iter().all(|y| {
                        let ratio = f.div(y, u).expect("u is nonzero");
                        ctx.trace_to_base(&ratio)
                            .expect("ratio lies in F_{q^d}")
                            .is_zero()
                    })
                })
                .ok_or(SkewError::NoTraceDual(k))?;
            let mut next = vec![x.clone()];
            for y in &basis {
                let theta = ctx.hilbert90_solve(&f.div(y, &x)?)?;
                next.push(f.mul(&x, &theta));
            }
            let coords: Vec<Vec<FFElem>> = next.iter().map(|y| ctx.skew_coords(y)).collect();
            if rank(ctx.base(), &coords) != next.len() {
                return Err(SkewError::LinearDependence(k));
            }
            let coeff = f.div(&x, &ctx.frobenius_q(&x, 1))?;
            factors.push(self.one_minus_linear(&coeff));
            xs.push(x.clone());
            basis = next;
            steps.push(StandardStep {
                x,
                kernel_basis: basis.clone(),
            });
        }
        if self.product(&factors) != self.one_minus_t() {
            return Err(SkewError::ProductMismatch);
        }
        Ok(StandardFactorization { xs, factors, steps })
    }
}
