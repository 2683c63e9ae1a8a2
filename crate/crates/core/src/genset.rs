//! The generator set: one divisor of 1 − t per proper nonzero F_q-subspace
//! of F_{q^d}, normalized to constant term 1.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ff::{FFElem, FieldCtx};
use crate::skewpoly::{gaussian_binomial, SkewError, SkewPoly, SkewRing, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GensetError {
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error("subspace dimension {k} outside 1..={max}")]
    DimensionOutOfRange { k: usize, max: usize },
    #[error("no complement found for generator {0}")]
    ComplementNotFound(usize),
}

/// A divisor of 1 − t attached to its kernel subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    /// Position in the generator list.
    pub id: usize,
    /// Kernel dimension, equal to the τ-degree.
    pub kind: usize,
    pub subspace: Subspace,
    /// Constant term 1, degree `kind`.
    pub skew: SkewPoly,
    /// Id of the type d − kind generator γ' with γ'·γ = 1 − t.
    pub complement: Option<usize>,
}

/// All k-dimensional subspaces of F_{q^d} for 1 ≤ k ≤ d − 1, sorted.
pub fn enumerate_subspaces(ctx: &FieldCtx, k: usize) -> Result<Vec<Subspace>, GensetError> {
    if k == 0 || k >= ctx.d() {
        return Err(GensetError::DimensionOutOfRange {
            k,
            max: ctx.d() - 1,
        });
    }
    Ok(Subspace::enumerate(ctx, k))
}

/// The subspace polynomial of `w` scaled to constant term 1. The id is left at
/// 0 and the complement unresolved.
pub fn generator_for_subspace(ring: &SkewRing, w: &Subspace) -> Result<Generator, GensetError> {
    let k = w.dim();
    let d = ring.d();
    if k == 0 || k >= d {
        return Err(GensetError::DimensionOutOfRange { k, max: d - 1 });
    }
    let monic = ring.subspace_poly(w)?;
    let skew = ring.constant_term_one(&monic)?;
    Ok(Generator {
        id: 0,
        kind: k,
        subspace: w.clone(),
        skew,
        complement: None,
    })
}

/// Generators of every type k = 1..d−1 in (type, subspace) order, with
/// complements resolved and checked in both orders.
pub fn fund_set(ctx: &FieldCtx) -> Result<Vec<Generator>, GensetError> {
    let ring = SkewRing::new(ctx);
    let mut gens = Vec::new();
    for k in 1..ctx.d() {
        for w in Subspace::enumerate(ctx, k) {
            let mut g = generator_for_subspace(&ring, &w)?;
            g.id = gens.len();
            gens.push(g);
        }
    }
    let by_skew: BTreeMap<SkewPoly, usize> = gens.iter().map(|g| (g.skew.clone(), g.id)).collect();
    let one_minus_t = ring.one_minus_t();
    for i in 0..gens.len() {
        let (quot, rem) = ring.right_divmod(&one_minus_t, &gens[i].skew)?;
        if !rem.is_zero() {
            return Err(GensetError::ComplementNotFound(i));
        }
        let j = *by_skew
            .get(&quot)
            .ok_or(GensetError::ComplementNotFound(i))?;
        // 1 − t is central, so both orders must hold
        if ring.mul(&gens[j].skew, &gens[i].skew) != one_minus_t
            || ring.mul(&gens[i].skew, &gens[j].skew) != one_minus_t
        {
            return Err(GensetError::ComplementNotFound(i));
        }
        gens[i].complement = Some(j);
    }
    Ok(gens)
}

/// Regularity numbers n_k = [d choose k]_q for k = 1..d−1.
pub fn regularity_numbers(q: u64, d: usize) -> Vec<u64> {
    (1..d).map(|k| gaussian_binomial(q, d, k)).collect()
}

/// Outcome of comparing all constant-term-1 divisors of 1 − t with the
/// generator set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorCheck {
    pub ok: bool,
    pub divisors_found: usize,
    pub generators: usize,
    /// Divisors that no generator produces, as skew-polynomial text.
    pub missing_from_generators: Vec<String>,
    /// Generators that are not divisors found by the scan.
    pub not_divisors: Vec<String>,
}

/// Exhaustively scans every polynomial with constant term 1 and degree
/// 1..d−1 for divisors of 1 − t and compares with [`fund_set`].
pub fn divisor_bijection_check(ctx: &FieldCtx) -> Result<DivisorCheck, GensetError> {
    let ring = SkewRing::new(ctx);
    let f = ctx.skew();
    let one_minus_t = ring.one_minus_t();
    let elems: Vec<FFElem> = f.elements().collect();
    let mut found = BTreeSet::new();
    for deg in 1..ctx.d() {
        // coefficients of τ^1..τ^{deg−1} free, leading nonzero
        let free = deg - 1;
        let total = (elems.len() as u64).pow(free as u32);
        for code in 0..total {
            let mut coeffs = vec![f.one()];
            let mut rest = code;
            for _ in 0..free {
                coeffs.push(elems[(rest % elems.len() as u64) as usize].clone());
                rest /= elems.len() as u64;
            }
            for lead in &elems[1..] {
                coeffs.push(lead.clone());
                let g = SkewPoly::new(coeffs.clone());
                if ring.left_divmod(&one_minus_t, &g)?.1.is_zero() {
                    found.insert(g);
                }
                coeffs.pop();
            }
        }
    }
    let gens: BTreeSet<SkewPoly> = fund_set(ctx)?.into_iter().map(|g| g.skew).collect();
    let missing: Vec<String> = found
        .difference(&gens)
        .map(|g| ring.text(g).to_string())
        .collect();
    let extra: Vec<String> = gens
        .difference(&found)
        .map(|g| ring.text(g).to_string())
        .collect();
    Ok(DivisorCheck {
        ok: missing.is_empty() && extra.is_empty(),
        divisors_found: found.len(),
        generators: gens.len(),
        missing_from_generators: missing,
        not_divisors: extra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::CenterPoly;

    fn ctx(p: u32, d: usize) -> FieldCtx {
        FieldCtx::new(p, 1, d, 1).unwrap()
    }

    #[test]
    fn subspace_counts() {
        assert_eq!(enumerate_subspaces(&ctx(3, 2), 1).unwrap().len(), 4);
        let c = ctx(3, 3);
        assert_eq!(enumerate_subspaces(&c, 1).unwrap().len(), 13);
        assert_eq!(enumerate_subspaces(&c, 2).unwrap().len(), 13);
        assert!(enumerate_subspaces(&c, 0).is_err());
        assert!(enumerate_subspaces(&c, 3).is_err());
    }

    #[test]
    fn generators_for_lines_of_f9() {
        let c = ctx(3, 2);
        let r = SkewRing::new(&c);
        let one = Subspace::from_elements(&c, &[c.skew().one()]);
        assert_eq!(
            generator_for_subspace(&r, &one).unwrap().skew,
            r.parse("2*T + 1").unwrap()
        );
        let uline = Subspace::from_elements(&c, &[c.skew().generator()]);
        assert_eq!(
            generator_for_subspace(&r, &uline).unwrap().skew,
            r.parse("T + 1").unwrap()
        );
        assert!(generator_for_subspace(&r, &Subspace::full(&c)).is_err());
        assert!(generator_for_subspace(&r, &Subspace::zero(2)).is_err());
    }

    #[test]
    fn fund_set_q3_d2() {
        let c = ctx(3, 2);
        let r = SkewRing::new(&c);
        let gens = fund_set(&c).unwrap();
        let mut texts: Vec<String> = gens.iter().map(|g| r.pretty(&g.skew)).collect();
        texts.sort();
        // 1 − uτ and 1 − 2uτ: -u has index 6, -2u = u has index 3
        assert_eq!(texts, vec!["1 + 3*T", "1 + 6*T", "1 + T", "1 - T"]);
        let minus = gens.iter().find(|g| r.pretty(&g.skew) == "1 - T").unwrap();
        let plus = gens.iter().find(|g| r.pretty(&g.skew) == "1 + T").unwrap();
        assert_eq!(minus.complement, Some(plus.id));
        assert_eq!(plus.complement, Some(minus.id));
    }

    #[test]
    fn fund_set_invariants() {
        for (p, d) in [(3u32, 2usize), (3, 3), (5, 2), (2, 4)] {
            let c = ctx(p, d);
            let r = SkewRing::new(&c);
            let gens = fund_set(&c).unwrap();
            let n = regularity_numbers(p as u64, d);
            for k in 1..d {
                assert_eq!(gens.iter().filter(|g| g.kind == k).count() as u64, n[k - 1]);
            }
            let distinct: BTreeSet<&SkewPoly> = gens.iter().map(|g| &g.skew).collect();
            assert_eq!(distinct.len(), gens.len());
            let one_minus_t = CenterPoly::one_minus_t(c.base());
            for g in &gens {
                assert_eq!(g.skew.constant_term(), Some(&c.skew().one()));
                assert_eq!(g.skew.degree(), Some(g.kind));
                assert_eq!(r.phi_kernel(&g.skew).unwrap(), g.subspace);
                assert_eq!(
                    r.reduced_norm(&g.skew).unwrap(),
                    one_minus_t.pow(g.kind, c.base())
                );
                assert!(r
                    .right_divmod(&r.one_minus_t(), &g.skew)
                    .unwrap()
                    .1
                    .is_zero());
                let comp = &gens[g.complement.unwrap()];
                assert_eq!(comp.kind, d - g.kind);
                assert_eq!(comp.complement, Some(g.id));
                assert_eq!(r.mul(&comp.skew, &g.skew), r.one_minus_t());
            }
        }
    }

    #[test]
    fn complement_kernel_is_image() {
        let c = ctx(3, 3);
        let r = SkewRing::new(&c);
        let gens = fund_set(&c).unwrap();
        for g in &gens {
            let comp = &gens[g.complement.unwrap()];
            assert_eq!(r.phi_image(&g.skew), comp.subspace);
        }
    }

    #[test]
    fn divisor_scan_matches() {
        let r = divisor_bijection_check(&ctx(3, 2)).unwrap();
        assert!(r.ok, "{r:?}");
        assert_eq!(r.divisors_found, 4);
        let r = divisor_bijection_check(&ctx(3, 3)).unwrap();
        assert!(r.ok, "{r:?}");
        assert_eq!(r.divisors_found, 26);
    }
}
