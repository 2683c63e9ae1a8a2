use std::sync::OnceLock;

use proptest::prelude::*;

use super::*;
use crate::ff::{FieldCtx, Level};

fn f9() -> &'static FieldCtx {
    static CTX: OnceLock<FieldCtx> = OnceLock::new();
    CTX.get_or_init(|| FieldCtx::new(3, 1, 2, 1).unwrap())
}

fn f27() -> &'static FieldCtx {
    static CTX: OnceLock<FieldCtx> = OnceLock::new();
    CTX.get_or_init(|| FieldCtx::new(3, 1, 3, 1).unwrap())
}

fn poly(ctx: &FieldCtx, idx: &[u64]) -> SkewPoly {
    SkewPoly::new(idx.iter().map(|&i| ctx.skew().from_index(i)).collect())
}

fn skew_strategy(order: u64, max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..order, 0..=max_len)
}

fn nonzero_strategy(order: u64, max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    (prop::collection::vec(0..order, 0..max_len), 1..order).prop_map(|(mut v, lead)| {
        v.push(lead);
        v
    })
}

#[test]
fn tau_twists_scalars() {
    let ctx = f9();
    let r = SkewRing::new(ctx);
    let u = ctx.skew().generator();
    let prod = r.mul(&r.tau(), &r.constant(u.clone()));
    // u^3 = -u = 2u, index 6
    assert_eq!(prod, poly(ctx, &[0, 6]));
    let a = poly(ctx, &[4, 7, 2]);
    assert_eq!(r.mul(&a, &r.one()), a);
    assert_eq!(r.mul(&r.one(), &a), a);
}

#[test]
fn one_minus_tau_times_one_plus_tau() {
    let ctx = f9();
    let r = SkewRing::new(ctx);
    let a = r.parse("2*T^1 + 1").unwrap();
    let b = r.parse("1*T^1 + 1").unwrap();
    assert_eq!(r.mul(&a, &b), r.one_minus_t());
    assert_eq!(r.text(&r.one_minus_t()).to_string(), "2*T^2 + 1");
}

#[test]
fn division_examples() {
    let ctx = f9();
    let r = SkewRing::new(ctx);
    let a = poly(ctx, &[5, 0, 3, 8]);
    assert_eq!(
        r.right_divmod(&a, &r.one()).unwrap(),
        (a.clone(), SkewPoly::zero())
    );
    assert_eq!(
        r.left_divmod(&a, &r.one()).unwrap(),
        (a.clone(), SkewPoly::zero())
    );
    let one_minus_tau = r.parse("2*T + 1").unwrap();
    let one_plus_tau = r.parse("T + 1").unwrap();
    let (s, rem) = r.right_divmod(&r.one_minus_t(), &one_plus_tau).unwrap();
    assert_eq!((s, rem), (one_minus_tau.clone(), SkewPoly::zero()));
    let (s, rem) = r.left_divmod(&r.one_minus_t(), &one_minus_tau).unwrap();
    assert_eq!((s, rem), (one_plus_tau, SkewPoly::zero()));
    assert_eq!(
        r.right_divmod(&a, &SkewPoly::zero()),
        Err(SkewError::DivisionByZero)
    );
}

#[test]
fn left_gcd_examples() {
    let ctx = f9();
    let r = SkewRing::new(ctx);
    let a = poly(ctx, &[5, 0, 3, 8]);
    assert_eq!(
        r.left_gcd(&a, &SkewPoly::zero()).unwrap(),
        r.monic(&a).unwrap()
    );
    let one_plus_tau = r.parse("T + 1").unwrap();
    assert_eq!(
        r.left_gcd(&r.one_minus_t(), &one_plus_tau).unwrap(),
        one_plus_tau
    );
    assert_eq!(
        r.left_gcd(&SkewPoly::zero(), &SkewPoly::zero()),
        Err(SkewError::BothZero)
    );
}

#[test]
fn reduced_norm_of_linear_factors_is_one_minus_t() {
    let ctx = f9();
    let r = SkewRing::new(ctx);
    let f = ctx.skew();
    let expect = CenterPoly::one_minus_t(ctx.base());
    for x in f.elements().skip(1) {
        let c = f.div(&x, &ctx.frobenius_q(&x, 1)).unwrap();
        assert_eq!(r.reduced_norm(&r.one_minus_linear(&c)).unwrap(), expect);
    }
}

#[test]
fn reduced_norm_of_constants_and_central() {
    for ctx in [f9(), f27()] {
        let r = SkewRing::new(ctx);
        let f = ctx.skew();
        for lam in f.elements() {
            // oracle: product of conjugates
            let mut prod = f.one();
            for i in 0..ctx.d() {
                prod = f.mul(&prod, &ctx.frobenius_q(&lam, i));
            }
            let rn = r.reduced_norm(&r.constant(lam.clone())).unwrap();
            let expect = Poly::constant(ctx.restrict_to_base(&prod).unwrap());
            assert_eq!(
                rn,
                if lam.is_zero() {
                    Poly::zero(Level::Base)
                } else {
                    expect
                }
            );
        }
        let b = ctx.base();
        let c = CenterPoly::new(
            Level::Base,
            vec![b.constant(2), b.constant(1), b.constant(1)],
        );
        assert_eq!(
            r.reduced_norm(&r.from_center(&c)).unwrap(),
            c.pow(ctx.d(), b)
        );
        assert!(r.reduced_norm(&SkewPoly::zero()).unwrap().is_zero());
    }
}

#[test]
fn regular_representation_is_multiplicative_example() {
    let ctx = f27();
    let r = SkewRing::new(ctx);
    let f = ctx.skew();
    let a = poly(ctx, &[3, 1, 17, 0, 5]);
    let b = poly(ctx, &[11, 26, 2]);
    let ma = r.regular_representation(&a);
    let mb = r.regular_representation(&b);
    let mab = r.regular_representation(&r.mul(&a, &b));
    let d = ctx.d();
    for i in 0..d {
        for j in 0..d {
            let mut acc = Poly::zero(Level::Skew);
            for k in 0..d {
                acc = acc.add(&ma[i][k].mul(&mb[k][j], f), f);
            }
            assert_eq!(acc, mab[i][j]);
        }
    }
}

#[test]
fn phi_examples() {
    let ctx = FieldCtx::new(3, 1, 2, 2).unwrap();
    let r = SkewRing::new(&ctx);
    for x in ctx.top().elements() {
        assert_eq!(r.phi_eval(&r.tau(), &x), ctx.top().pow(&x, 3));
        let v = r.phi_eval(&r.one_minus_t(), &x);
        assert_eq!(v, ctx.top().sub(&x, &ctx.top().pow(&x, 9)));
    }
    // kernel of 1 - t inside F_81 is exactly the F_9 copy
    let kernel: Vec<_> = ctx
        .top()
        .elements()
        .filter(|x| r.phi_eval(&r.one_minus_t(), x).is_zero())
        .collect();
    assert_eq!(kernel.len(), 9);
    assert!(kernel.iter().all(|x| ctx
        .skew()
        .elements()
        .any(|y| ctx.embed(&y, Level::Top).unwrap() == *x)));
}

#[test]
fn phi_is_additive_on_f9() {
    let ctx = f9();
    let r = SkewRing::new(ctx);
    let f = ctx.skew();
    let a = poly(ctx, &[4, 7, 2, 5]);
    for x in f.elements() {
        for y in f.elements() {
            let lhs = r.phi_eval(&a, &f.add(&x, &y));
            assert_eq!(lhs, f.add(&r.phi_eval(&a, &x), &r.phi_eval(&a, &y)));
        }
    }
}

#[test]
fn phi_of_product_is_composition_on_f81() {
    let ctx = FieldCtx::new(3, 1, 2, 2).unwrap();
    let r = SkewRing::new(&ctx);
    let a = poly(&ctx, &[4, 7, 2]);
    let b = poly(&ctx, &[1, 0, 6, 3]);
    let ab = r.mul(&a, &b);
    for x in ctx.top().elements() {
        assert_eq!(r.phi_eval(&ab, &x), r.phi_eval(&a, &r.phi_eval(&b, &x)));
    }
}

#[test]
fn kernel_examples() {
    for ctx in [f9(), f27()] {
        let r = SkewRing::new(ctx);
        let k = r.phi_kernel(&r.parse("2*T + 1").unwrap()).unwrap();
        assert_eq!(k, Subspace::from_elements(ctx, &[ctx.skew().one()]));
        assert_eq!(r.phi_kernel(&r.one_minus_t()).unwrap(), Subspace::full(ctx));
        assert_eq!(
            r.phi_kernel(&SkewPoly::zero()),
            Err(SkewError::ZeroPolynomial)
        );
    }
}

#[test]
fn subspace_poly_examples() {
    let ctx = f9();
    let r = SkewRing::new(ctx);
    assert_eq!(r.subspace_poly(&Subspace::zero(2)).unwrap(), r.one());
    let line = Subspace::from_elements(ctx, &[ctx.skew().one()]);
    // x^3 - x
    assert_eq!(r.subspace_poly(&line).unwrap(), r.parse("T + 2").unwrap());
    // x^3 - u^2 x = x^3 + x
    let uline = Subspace::from_elements(ctx, &[ctx.skew().generator()]);
    assert_eq!(r.subspace_poly(&uline).unwrap(), r.parse("T + 1").unwrap());
    assert_eq!(
        r.subspace_poly(&Subspace::full(ctx)).unwrap(),
        r.neg(&r.one_minus_t())
    );
}

#[test]
fn subspace_kernel_roundtrip() {
    for ctx in [f9(), f27()] {
        let r = SkewRing::new(ctx);
        for k in 0..=ctx.d() {
            for w in Subspace::enumerate(ctx, k) {
                let g = r.subspace_poly(&w).unwrap();
                assert_eq!(g.degree(), Some(k));
                assert_eq!(g.leading(), Some(&ctx.skew().one()));
                assert_eq!(r.phi_kernel(&g).unwrap(), w);
                // the other direction on the separable monic side
                assert_eq!(r.subspace_poly(&r.phi_kernel(&g).unwrap()).unwrap(), g);
                // τ·g has the same kernel and is g up to the τ-power
                if k > 0 {
                    let tg = r.mul(&r.tau(), &g);
                    assert_eq!(r.phi_kernel(&tg).unwrap(), w);
                    let (s, rem) = r.right_divmod(&tg, &g).unwrap();
                    assert!(rem.is_zero());
                    assert_eq!(s, r.tau());
                }
            }
        }
    }
}

#[test]
fn flag_factorization_examples() {
    let ctx = f9();
    let r = SkewRing::new(ctx);
    let line = Subspace::from_elements(ctx, &[ctx.skew().one()]);
    let flag = Flag::new(ctx, vec![line, Subspace::full(ctx)]).unwrap();
    let factors = r.factorize_by_flag(&flag).unwrap();
    assert_eq!(factors.len(), 2);
    assert_eq!(r.product(&factors), r.one_minus_t());
    assert_eq!(factors[1], r.parse("2*T + 1").unwrap());
    let single = Flag::new(ctx, vec![Subspace::full(ctx)]).unwrap();
    assert_eq!(r.factorize_by_flag(&single).unwrap(), vec![r.one_minus_t()]);
    let partial = Flag::new(ctx, vec![Subspace::from_elements(ctx, &[ctx.skew().one()])]).unwrap();
    assert!(matches!(
        r.factorize_by_flag(&partial),
        Err(SkewError::InvalidFlag(_))
    ));
}

// Oracle: every ordered tuple of constant-term-1 linear polynomials whose
// product is 1 − τ^d.
fn brute_force_linear_factorizations(r: &SkewRing) -> Vec<Vec<SkewPoly>> {
    let f = r.ctx().skew();
    let linears: Vec<SkewPoly> = f
        .elements()
        .skip(1)
        .map(|c| SkewPoly::new(vec![f.one(), c]))
        .collect();
    let mut partial: Vec<(Vec<SkewPoly>, SkewPoly)> = vec![(Vec::new(), r.one())];
    for _ in 0..r.d() {
        partial = partial
            .into_iter()
            .flat_map(|(fs, prod)| {
                linears.iter().filter_map(move |l| {
                    let p = r.mul(&prod, l);
                    // prune: a prefix of a factorization left-divides 1 − t
                    let (_, rem) = r.left_divmod(&r.one_minus_t(), &p).unwrap();
                    rem.is_zero().then(|| {
                        let mut fs = fs.clone();
                        fs.push(l.clone());
                        (fs, p)
                    })
                })
            })
            .collect();
    }
    partial
        .into_iter()
        .filter(|(_, p)| *p == r.one_minus_t())
        .map(|(fs, _)| fs)
        .collect()
}

#[test]
fn complete_flags_biject_with_linear_factorizations() {
    for (ctx, expected) in [(f9(), 4usize), (f27(), 52)] {
        let r = SkewRing::new(ctx);
        let brute = brute_force_linear_factorizations(&r);
        assert_eq!(brute.len(), expected);
        let mut from_flags: Vec<Vec<SkewPoly>> = Flag::complete_flags(ctx)
            .iter()
            .map(|fl| r.factorize_by_flag(fl).unwrap())
            .collect();
        from_flags.sort();
        from_flags.dedup();
        assert_eq!(from_flags.len(), expected);
        let mut brute = brute;
        brute.sort();
        assert_eq!(brute, from_flags);
    }
}

#[test]
fn standard_factorization_q3_d2() {
    let ctx = f9();
    let r = SkewRing::new(ctx);
    let sf = r.standard_factorization().unwrap();
    assert_eq!(
        sf.xs
            .iter()
            .map(|x| ctx.skew().index(x))
            .collect::<Vec<_>>(),
        vec![1, 3]
    );
    assert_eq!(r.pretty_product(&sf.factors), "(1 - T)(1 + T)");
}

#[test]
fn standard_factorization_all_small_cases() {
    for &(p, d) in &[
        (3u32, 2usize),
        (5, 2),
        (7, 2),
        (3, 3),
        (5, 3),
        (3, 4),
        (2, 3),
    ] {
        let ctx = FieldCtx::new(p, 1, d, 1).unwrap();
        let r = SkewRing::new(&ctx);
        let sf = r.standard_factorization().unwrap();
        assert_eq!(sf.factors.len(), d);
        assert_eq!(r.product(&sf.factors), r.one_minus_t());
        let one_minus_t = CenterPoly::one_minus_t(ctx.base());
        for g in &sf.factors {
            assert_eq!(r.reduced_norm(g).unwrap(), one_minus_t);
        }
        // prefix kernels are spanned by the recorded bases
        for (i, step) in sf.steps.iter().enumerate() {
            let prefix = r.product(&sf.factors[..=i]);
            let k = r.phi_kernel(&prefix).unwrap();
            assert_eq!(k.dim(), i + 1);
            assert_eq!(k, Subspace::from_elements(&ctx, &step.kernel_basis));
        }
        // suffix kernels form a flag
        let suffix_kernels: Vec<Subspace> = (0..d)
            .rev()
            .map(|i| r.phi_kernel(&r.product(&sf.factors[i..])).unwrap())
            .collect();
        assert!(Flag::new(&ctx, suffix_kernels).is_ok());
    }
}

#[test]
fn standard_factorization_over_nonprime_base() {
    let ctx = FieldCtx::new(2, 2, 2, 1).unwrap();
    let r = SkewRing::new(&ctx);
    let sf = r.standard_factorization().unwrap();
    assert_eq!(r.product(&sf.factors), r.one_minus_t());
}

#[test]
fn text_roundtrip_and_pretty() {
    let ctx = f27();
    let r = SkewRing::new(ctx);
    let a = poly(ctx, &[5, 0, 13, 1]);
    let text = r.text(&a).to_string();
    assert_eq!(text, "1*T^3 + 13*T^2 + 5");
    assert_eq!(r.parse(&text).unwrap(), a);
    assert_eq!(r.text(&SkewPoly::zero()).to_string(), "0");
    assert!(r.parse("27*T").is_err());
    assert_eq!(r.pretty(&a), "5 + 13*T^2 + T^3");
    assert_eq!(r.pretty(&r.one_minus_t()), "1 - T^3");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn degree_is_additive(a in nonzero_strategy(27, 5), b in nonzero_strategy(27, 5)) {
        let ctx = f27();
        let r = SkewRing::new(ctx);
        let (a, b) = (poly(ctx, &a), poly(ctx, &b));
        prop_assert_eq!(r.mul(&a, &b).degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
    }

    #[test]
    fn divmod_reconstructs(a in skew_strategy(9, 7), b in nonzero_strategy(9, 4)) {
        let ctx = f9();
        let r = SkewRing::new(ctx);
        let (a, b) = (poly(ctx, &a), poly(ctx, &b));
        let (s, rem) = r.right_divmod(&a, &b).unwrap();
        prop_assert!(rem.degree().is_none_or(|d| d < b.degree().unwrap()));
        prop_assert_eq!(r.add(&r.mul(&s, &b), &rem), a.clone());
        let (s, rem) = r.left_divmod(&a, &b).unwrap();
        prop_assert!(rem.degree().is_none_or(|d| d < b.degree().unwrap()));
        prop_assert_eq!(r.add(&r.mul(&b, &s), &rem), a);
    }

    #[test]
    fn left_gcd_right_divides_both(a in skew_strategy(27, 5), b in nonzero_strategy(27, 5)) {
        let ctx = f27();
        let r = SkewRing::new(ctx);
        let (a, b) = (poly(ctx, &a), poly(ctx, &b));
        let g = r.left_gcd(&a, &b).unwrap();
        prop_assert!(r.right_divmod(&a, &g).unwrap().1.is_zero());
        prop_assert!(r.right_divmod(&b, &g).unwrap().1.is_zero());
    }

    #[test]
    fn reduced_norm_is_multiplicative(a in skew_strategy(27, 5), b in skew_strategy(27, 5)) {
        let ctx = f27();
        let r = SkewRing::new(ctx);
        let (a, b) = (poly(ctx, &a), poly(ctx, &b));
        let na = r.reduced_norm(&a).unwrap();
        let nb = r.reduced_norm(&b).unwrap();
        prop_assert_eq!(r.reduced_norm(&r.mul(&a, &b)).unwrap(), na.mul(&nb, ctx.base()));
    }

    #[test]
    fn kernel_dimension_bounded_by_degree(a in nonzero_strategy(27, 5)) {
        let ctx = f27();
        let r = SkewRing::new(ctx);
        let a = poly(ctx, &a);
        prop_assert!(r.phi_kernel(&a).unwrap().dim() <= a.degree().unwrap());
    }
}
