//! Reduction of skew polynomials modulo an irreducible f ∈ F_q[t] into
//! PGL(d, F_{q^{dn}}), with projective canonical forms and the PSL/PGL
//! classification of the image.

use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ff::{CenterPoly, FFElem, FfError, Field, FieldCtx, Level, Poly};
use crate::skewpoly::{SkewError, SkewPoly, SkewRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PsiError {
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error("inadmissible modulus f: {0}")]
    Inadmissible(String),
    #[error("not a unit modulo f")]
    NotAUnit,
    #[error("singular matrix")]
    Singular,
    #[error("residue symbol of zero")]
    ZeroResidue,
    #[error("determinant of the lift disagrees with the reduced norm")]
    NormMismatch,
    #[error("cannot parse matrix {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// Irreducible f ∈ F_q[t] of degree d·n together with its designated root
/// θ ∈ F_{q^{dn}} (the smallest-index root).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusF {
    f: CenterPoly,
    theta: FFElem,
}

impl ModulusF {
    /// Validates `f`: monic, degree d·n, irreducible over F_q, not t and not
    /// an associate of 1 − t.
    pub fn new(ctx: &FieldCtx, f: CenterPoly) -> Result<Self, PsiError> {
        let b = ctx.base();
        let m = ctx.d() * ctx.n();
        if f.level() != Level::Base {
            return Err(PsiError::Inadmissible(
                "coefficients must lie in F_q".into(),
            ));
        }
        if f.degree() != Some(m) {
            return Err(PsiError::Inadmissible(format!(
                "degree must be d*n = {m}, got {}",
                f.degree().map_or("-inf".into(), |d| d.to_string())
            )));
        }
        if !f.is_monic(b) {
            return Err(PsiError::Inadmissible("f must be monic".into()));
        }
        let roots = ctx.poly_roots(&f, Level::Top)?;
        // a root of exact degree m over F_q has a minimal polynomial of
        // degree m dividing f, so f is that minimal polynomial
        let theta = roots
            .iter()
            .find(|x| degree_over_base(ctx, x) == m)
            .cloned()
            .ok_or_else(|| {
                PsiError::Inadmissible(format!("{} is reducible over F_q", f.to_text(ctx)))
            })?;
        if roots.iter().any(|x| ctx.is_in_base(x)) {
            return Err(PsiError::Inadmissible("f has a root in F_q".into()));
        }
        Ok(ModulusF { f, theta })
    }

    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<Self, PsiError> {
        Self::new(ctx, Poly::parse(ctx, Level::Base, text)?)
    }

    /// The smallest monic irreducible of degree d·n over F_q, ordering
    /// candidates by Σ index(c_i)·q^i over the lower coefficients.
    pub fn auto(ctx: &FieldCtx) -> Result<Self, PsiError> {
        let m = ctx.d() * ctx.n();
        let top = ctx.top();
        let q = ctx.q();
        let best = top
            .elements()
            .filter(|x| degree_over_base(ctx, x) == m)
            .map(|x| {
                let mp = minimal_polynomial(ctx, &x);
                let key = mp.coeffs()[..m].iter().rev().fold(0u128, |acc, c| {
                    acc * q as u128 + ctx.base().index(c) as u128
                });
                (key, mp)
            })
            .min_by_key(|(k, _)| *k)
            .map(|(_, mp)| mp)
            .expect("F_{q^{dn}} has elements of full degree");
        Self::new(ctx, best)
    }

    pub fn f(&self) -> &CenterPoly {
        &self.f
    }

    pub fn theta(&self) -> &FFElem {
        &self.theta
    }

    /// c(θ) for a central polynomial.
    pub fn eval_center(&self, ctx: &FieldCtx, c: &CenterPoly) -> FFElem {
        let lifted = c.embed(ctx, Level::Top).expect("F_q embeds in F_{q^{dn}}");
        lifted.eval(ctx.top(), &self.theta)
    }
}

/// Degree of x over F_q: the smallest j ≥ 1 with x^{q^j} = x.
fn degree_over_base(ctx: &FieldCtx, x: &FFElem) -> usize {
    let f = ctx.field_of(x);
    let mut y = f.pow(x, ctx.q());
    let mut j = 1;
    while y != *x {
        y = f.pow(&y, ctx.q());
        j += 1;
    }
    j
}

/// Π_j (t − x^{q^j}) over the Frobenius orbit of x, as a polynomial over F_q.
fn minimal_polynomial(ctx: &FieldCtx, x: &FFElem) -> CenterPoly {
    let top = ctx.field_of(x);
    let mut prod = Poly::constant(top.one());
    let mut conj = x.clone();
    for _ in 0..degree_over_base(ctx, x) {
        prod = prod.mul(&Poly::new(x.level(), vec![top.neg(&conj), top.one()]), top);
        conj = top.pow(&conj, ctx.q());
    }
    prod.restrict_to_base(ctx)
        .expect("orbit product has coefficients in F_q")
}

/// d×d matrix over F_{q^{dn}}, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RawMatrix {
    d: usize,
    entries: Vec<FFElem>,
}

/// Matrix scaled so that its first nonzero entry (row-major) is 1; one
/// representative per class in PGL.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjMatrix {
    entries: Vec<FFElem>,
}

impl RawMatrix {
    pub fn new(d: usize, entries: Vec<FFElem>) -> Self {
        assert_eq!(entries.len(), d * d);
        RawMatrix { d, entries }
    }

    pub fn identity(field: &Field, d: usize) -> Self {
        let entries = (0..d * d)
            .map(|i| {
                if i / d == i % d {
                    field.one()
                } else {
                    field.zero()
                }
            })
            .collect();
        RawMatrix { d, entries }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[FFElem] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &FFElem {
        &self.entries[r * self.d + c]
    }

    pub fn mul(&self, other: &RawMatrix, field: &Field) -> RawMatrix {
        RawMatrix {
            d: self.d,
            entries: mat_mul(&self.entries, &other.entries, self.d, field),
        }
    }

    pub fn scale(&self, c: &FFElem, field: &Field) -> RawMatrix {
        RawMatrix {
            d: self.d,
            entries: self.entries.iter().map(|x| field.mul(x, c)).collect(),
        }
    }

    pub fn det(&self, field: &Field) -> FFElem {
        determinant(&self.entries, self.d, field)
    }
}

impl ProjMatrix {
    pub fn dim(&self) -> usize {
        (self.entries.len() as f64).sqrt().round() as usize
    }

    pub fn entries(&self) -> &[FFElem] {
        &self.entries
    }

    pub fn to_raw(&self) -> RawMatrix {
        RawMatrix::new(self.dim(), self.entries.clone())
    }

    /// Text form: rows separated by `;`, entries as element indices.
    pub fn to_text(&self, field: &Field) -> String {
        let d = self.dim();
        self.entries
            .chunks(d)
            .map(|row| {
                row.iter()
                    .map(|x| field.index(x).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Parses the text form; the matrix must already be canonical.
    pub fn parse(field: &Field, text: &str) -> Result<Self, PsiError> {
        let err = |reason: &str| PsiError::Parse {
            text: text.into(),
            reason: reason.into(),
        };
        let rows: Vec<&str> = text.trim().split(';').collect();
        let d = rows.len();
        let mut entries = Vec::with_capacity(d * d);
        for row in rows {
            let cells: Vec<&str> = row.split(',').collect();
            if cells.len() != d {
                return Err(err("matrix is not square"));
            }
            for c in cells {
                let i: u64 = c
                    .trim()
                    .parse()
                    .map_err(|_| err("entries must be element indices"))?;
                if i >= field.order() {
                    return Err(err("entry out of range"));
                }
                entries.push(field.from_index(i));
            }
        }
        let m = RawMatrix::new(d, entries);
        let canon = proj_canonicalize(field, &m)?;
        if canon.entries != m.entries {
            return Err(err("matrix is not in canonical form"));
        }
        Ok(canon)
    }
}

fn mat_mul(a: &[FFElem], b: &[FFElem], d: usize, field: &Field) -> Vec<FFElem> {
    let mut out = Vec::with_capacity(d * d);
    for r in 0..d {
        for c in 0..d {
            let mut acc = field.zero();
            for k in 0..d {
                acc = field.add(&acc, &field.mul(&a[r * d + k], &b[k * d + c]));
            }
            out.push(acc);
        }
    }
    out
}

fn determinant(entries: &[FFElem], d: usize, field: &Field) -> FFElem {
    let mut m: Vec<Vec<FFElem>> = entries.chunks(d).map(<[FFElem]>::to_vec).collect();
    let mut det = field.one();
    for c in 0..d {
        let Some(piv) = (c..d).find(|&r| !m[r][c].is_zero()) else {
            return field.zero();
        };
        if piv != c {
            m.swap(piv, c);
            det = field.neg(&det);
        }
        det = field.mul(&det, &m[c][c]);
        let inv = field.inv(&m[c][c]).unwrap();
        for r in c + 1..d {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = field.mul(&m[r][c], &inv);
            for k in c..d {
                let t = field.mul(&factor, &m[c][k]);
                m[r][k] = field.sub(&m[r][k], &t);
            }
        }
    }
    det
}

/// Scales an invertible matrix so its first nonzero entry is 1.
pub fn proj_canonicalize(field: &Field, m: &RawMatrix) -> Result<ProjMatrix, PsiError> {
    if m.det(field).is_zero() {
        return Err(PsiError::Singular);
    }
    Ok(canonicalize_unchecked(field, &m.entries))
}

fn canonicalize_unchecked(field: &Field, entries: &[FFElem]) -> ProjMatrix {
    let lead = entries
        .iter()
        .find(|x| !x.is_zero())
        .expect("invertible matrix has a nonzero entry");
    let inv = field.inv(lead).unwrap();
    ProjMatrix {
        entries: entries.iter().map(|x| field.mul(x, &inv)).collect(),
    }
}

/// Group operations on canonical forms for one tower.
#[derive(Clone, Copy)]
pub struct ProjGroup<'a> {
    field: &'a Field,
    d: usize,
}

impl<'a> ProjGroup<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Self {
        ProjGroup {
            field: ctx.top(),
            d: ctx.d(),
        }
    }

    pub fn field(&self) -> &'a Field {
        self.field
    }

    pub fn identity(&self) -> ProjMatrix {
        ProjMatrix {
            entries: RawMatrix::identity(self.field, self.d).entries,
        }
    }

    /// Product of canonical forms; invertibility is inherited.
    pub fn mul(&self, a: &ProjMatrix, b: &ProjMatrix) -> ProjMatrix {
        canonicalize_unchecked(
            self.field,
            &mat_mul(&a.entries, &b.entries, self.d, self.field),
        )
    }

    pub fn det(&self, a: &ProjMatrix) -> FFElem {
        determinant(&a.entries, self.d, self.field)
    }
}

/// The matrix of right multiplication by `a` reduced modulo f, before
/// canonicalization.
pub fn psi_lift(ctx: &FieldCtx, a: &SkewPoly, m: &ModulusF) -> RawMatrix {
    let ring = SkewRing::new(ctx);
    let top = ctx.top();
    let rep = ring.regular_representation(a);
    let d = ctx.d();
    let entries = rep
        .iter()
        .flat_map(|row| row.iter())
        .map(|p| {
            p.embed(ctx, Level::Top)
                .expect("F_{q^d} embeds in F_{q^{dn}}")
                .eval(top, &m.theta)
        })
        .collect();
    RawMatrix::new(d, entries)
}

/// ψ(a) in canonical projective form.
pub fn psi_matrix(ctx: &FieldCtx, a: &SkewPoly, m: &ModulusF) -> Result<ProjMatrix, PsiError> {
    let raw = psi_lift(ctx, a, m);
    if raw.det(ctx.top()).is_zero() {
        return Err(PsiError::NotAUnit);
    }
    Ok(canonicalize_unchecked(ctx.top(), &raw.entries))
}

/// Determinant of the uncanonicalized lift, checked against the reduced
/// norm evaluated at θ.
pub fn det_of_lift(ctx: &FieldCtx, a: &SkewPoly, m: &ModulusF) -> Result<FFElem, PsiError> {
    let det = psi_lift(ctx, a, m).det(ctx.top());
    let rn = SkewRing::new(ctx).reduced_norm(a)?;
    if m.eval_center(ctx, &rn) != det {
        return Err(PsiError::NormMismatch);
    }
    if det.is_zero() {
        return Err(PsiError::NotAUnit);
    }
    Ok(det)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// +1 if `a` is a d-th power in F_{q^{dn}}^×, −1 otherwise.
pub fn residue_symbol(ctx: &FieldCtx, a: &FFElem) -> Result<i8, PsiError> {
    if a.is_zero() {
        return Err(PsiError::ZeroResidue);
    }
    let top = ctx.field_of(a);
    let order = top.order() - 1;
    let g = gcd(ctx.d() as u64, order);
    Ok(if top.pow(a, order / g) == top.one() {
        1
    } else {
        -1
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    #[serde(rename = "PSL")]
    Psl,
    #[serde(rename = "PGL")]
    Pgl,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Psl => "PSL",
            GroupKind::Pgl => "PGL",
        })
    }
}

/// Predicted image of ψ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageClass {
    pub kind: GroupKind,
    pub order: BigUint,
    /// Residue symbol of 1 − θ.
    pub symbol: i8,
    /// False when q is even: the classification is computed but unproven.
    pub verified_hypothesis: bool,
}

/// |GL(d, Q)| = Π_{i<d} (Q^d − Q^i).
pub fn gl_order(big_q: u64, d: usize) -> BigUint {
    let q = BigUint::from(big_q);
    let qd = q.pow(d as u32);
    (0..d).fold(BigUint::from(1u32), |acc, i| acc * (&qd - q.pow(i as u32)))
}

pub fn pgl_order(big_q: u64, d: usize) -> BigUint {
    gl_order(big_q, d) / BigUint::from(big_q - 1)
}

pub fn psl_order(big_q: u64, d: usize) -> BigUint {
    pgl_order(big_q, d) / BigUint::from(gcd(d as u64, big_q - 1))
}

pub fn classify_image(ctx: &FieldCtx, m: &ModulusF) -> Result<ImageClass, PsiError> {
    let top = ctx.top();
    let one_minus_theta = top.sub(&top.one(), &m.theta);
    let symbol = residue_symbol(ctx, &one_minus_theta)?;
    let big_q = top.order();
    let (kind, order) = if symbol == 1 {
        (GroupKind::Psl, psl_order(big_q, ctx.d()))
    } else {
        (GroupKind::Pgl, pgl_order(big_q, ctx.d()))
    };
    Ok(ImageClass {
        kind,
        order,
        symbol,
        verified_hypothesis: ctx.q() % 2 == 1,
    })
}

/// F_{q^{dn}}^× modulo d-th powers, cyclic of order G = gcd(d, Q − 1).
/// Classes are labelled 0..G by discrete logarithm against a fixed
/// primitive element.
#[derive(Clone, Debug)]
pub struct DetClasses {
    order: u64,
    exponent: u64,
    /// ζ^i for i < G, ζ = ω^{(Q−1)/G}
    powers: Vec<FFElem>,
}

impl DetClasses {
    pub fn new(ctx: &FieldCtx) -> Self {
        let top = ctx.top();
        let unit_order = top.order() - 1;
        let g = gcd(ctx.d() as u64, unit_order);
        let exponent = unit_order / g;
        let zeta = top.pow(&top.primitive_element(), exponent);
        let mut powers = Vec::with_capacity(g as usize);
        let mut acc = top.one();
        for _ in 0..g {
            powers.push(acc.clone());
            acc = top.mul(&acc, &zeta);
        }
        DetClasses {
            order: g,
            exponent,
            powers,
        }
    }

    /// G, the number of classes.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn label(&self, top: &Field, x: &FFElem) -> Result<u64, PsiError> {
        if x.is_zero() {
            return Err(PsiError::ZeroResidue);
        }
        let y = top.pow(x, self.exponent);
        Ok(self
            .powers
            .iter()
            .position(|z| *z == y)
            .expect("power lands in the order-G subgroup") as u64)
    }

    /// Label of det(M); independent of the scalar representative since
    /// det(cM) = c^d·det(M).
    pub fn label_of(&self, group: &ProjGroup, m: &ProjMatrix) -> Result<u64, PsiError> {
        self.label(group.field(), &group.det(m))
    }
}

/// Outcome of [`representation_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationReport {
    pub ok: bool,
    pub pairs: usize,
    pub product_failures: usize,
    pub det_failures: usize,
}

/// Samples `samples` pairs of random skew polynomials of degree < 2d and
/// checks ψ(ab) = ψ(a)ψ(b) on the lifts and det ψ(a) = rn(a)(θ).
pub fn representation_check(
    ctx: &FieldCtx,
    m: &ModulusF,
    samples: usize,
    seed: u64,
) -> Result<RepresentationReport, PsiError> {
    let ring = SkewRing::new(ctx);
    let skew = ctx.skew();
    let top = ctx.top();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = |rng: &mut ChaCha8Rng| {
        let len = rng.random_range(1..=2 * ctx.d());
        SkewPoly::new(
            (0..len)
                .map(|_| skew.from_index(rng.random_range(0..skew.order())))
                .collect(),
        )
    };
    let mut report = RepresentationReport {
        ok: true,
        pairs: samples,
        product_failures: 0,
        det_failures: 0,
    };
    for _ in 0..samples {
        let a = random(&mut rng);
        let b = random(&mut rng);
        let lifted = psi_lift(ctx, &a, m).mul(&psi_lift(ctx, &b, m), top);
        if psi_lift(ctx, &ring.mul(&a, &b), m) != lifted {
            report.product_failures += 1;
        }
        let rn = ring.reduced_norm(&a)?;
        if m.eval_center(ctx, &rn) != psi_lift(ctx, &a, m).det(top) {
            report.det_failures += 1;
        }
    }
    report.ok = report.product_failures == 0 && report.det_failures == 0;
    Ok(report)
}
