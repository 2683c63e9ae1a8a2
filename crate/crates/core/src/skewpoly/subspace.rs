//! F_q-subspaces of F_{q^d} in canonical echelon form, and flags of them.

use std::cmp::Ordering;

use crate::ff::{rank, rref, FFElem, FieldCtx, Level};

use super::SkewError;

/// Number of k-dimensional subspaces of F_q^d.
pub fn gaussian_binomial(q: u64, d: usize, k: usize) -> u64 {
    if k > d {
        return 0;
    }
    let num: u128 = (d - k + 1..=d)
        .map(|m| (q as u128).pow(m as u32) - 1)
        .product();
    let den: u128 = (1..=k).map(|m| (q as u128).pow(m as u32) - 1).product();
    (num / den) as u64
}

/// An F_q-subspace of F_{q^d}, stored as the reduced row-echelon basis of
/// its coordinate vectors w.r.t. 1, u, …, u^{d−1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<FFElem>>,
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then(self.basis.len().cmp(&other.basis.len()))
            .then_with(|| self.basis.cmp(&other.basis))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subspace {
    /// Wraps a basis that is already in reduced echelon form.
    pub(crate) fn from_echelon(ambient: usize, basis: Vec<Vec<FFElem>>) -> Self {
        Subspace { ambient, basis }
    }

    /// Span of arbitrary coordinate rows.
    pub fn span(ctx: &FieldCtx, ambient: usize, rows: Vec<Vec<FFElem>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == ambient));
        Subspace {
            ambient,
            basis: rref(ctx.base(), &rows).0,
        }
    }

    /// Span of elements of F_{q^d}.
    pub fn from_elements(ctx: &FieldCtx, elems: &[FFElem]) -> Self {
        Self::span(
            ctx,
            ctx.d(),
            elems.iter().map(|x| ctx.skew_coords(x)).collect(),
        )
    }

    /// Parses a row-major list of base-field indices with the given dimension.
    pub fn from_indices(ctx: &FieldCtx, rows: &[Vec<u64>]) -> Result<Self, SkewError> {
        let d = ctx.d();
        let mut coords = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != d || row.iter().any(|&c| c >= ctx.q()) {
                return Err(SkewError::InvalidSubspace(format!("bad basis row {row:?}")));
            }
            coords.push(row.iter().map(|&c| ctx.base().from_index(c)).collect());
        }
        let s = Self::span(ctx, d, coords);
        if s.dim() != rows.len() {
            return Err(SkewError::InvalidSubspace(
                "basis rows are linearly dependent".into(),
            ));
        }
        Ok(s)
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    /// All of F_{q^d}.
    pub fn full(ctx: &FieldCtx) -> Self {
        let b = ctx.base();
        let basis = (0..ctx.d())
            .map(|i| {
                (0..ctx.d())
                    .map(|j| if i == j { b.one() } else { b.zero() })
                    .collect()
            })
            .collect();
        Subspace {
            ambient: ctx.d(),
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<FFElem>] {
        &self.basis
    }

    /// Basis rows as base-field indices, row-major.
    pub fn basis_indices(&self, ctx: &FieldCtx) -> Vec<Vec<u64>> {
        self.basis
            .iter()
            .map(|r| r.iter().map(|c| ctx.base().index(c)).collect())
            .collect()
    }

    /// Basis vectors as elements of F_{q^d}.
    pub fn basis_elements(&self, ctx: &FieldCtx) -> Vec<FFElem> {
        self.basis.iter().map(|r| ctx.skew_from_coords(r)).collect()
    }

    /// Every vector of the subspace as an element of F_{q^d}, q^dim of them.
    pub fn elements(&self, ctx: &FieldCtx) -> Vec<FFElem> {
        let s = ctx.skew();
        let basis = self.basis_elements(ctx);
        let scalars: Vec<FFElem> = ctx
            .base()
            .elements()
            .map(|c| ctx.embed(&c, Level::Skew).unwrap())
            .collect();
        let mut out = vec![s.zero()];
        for b in &basis {
            out = out
                .iter()
                .flat_map(|v| scalars.iter().map(move |c| (v, c)))
                .map(|(v, c)| s.add(v, &s.mul(c, b)))
                .collect();
        }
        out
    }

    pub fn contains_element(&self, ctx: &FieldCtx, x: &FFElem) -> bool {
        let mut rows = self.basis.clone();
        rows.push(ctx.skew_coords(x));
        rank(ctx.base(), &rows) == self.dim()
    }

    /// `other ⊂ self`
    pub fn contains(&self, ctx: &FieldCtx, other: &Subspace) -> bool {
        if other.dim() > self.dim() {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        rank(ctx.base(), &rows) == self.dim()
    }

    /// All k-dimensional subspaces, sorted by echelon basis.
    pub fn enumerate(ctx: &FieldCtx, k: usize) -> Vec<Subspace> {
        let d = ctx.d();
        let b = ctx.base();
        let scalars: Vec<FFElem> = b.elements().collect();
        let mut out = Vec::new();
        for pivots in combinations(d, k) {
            // free positions: (row, col) with col > pivot[row] and col not a pivot
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| (pivots[r] + 1..d).map(move |c| (r, c)))
                .filter(|(_, c)| !pivots.contains(c))
                .collect();
            let total = (scalars.len() as u64).pow(free.len() as u32);
            for code in 0..total {
                let mut rows = vec![vec![b.zero(); d]; k];
                for (r, &pc) in pivots.iter().enumerate() {
                    rows[r][pc] = b.one();
                }
                let mut rest = code;
                for &(r, c) in &free {
                    rows[r][c] = scalars[(rest % scalars.len() as u64) as usize].clone();
                    rest /= scalars.len() as u64;
                }
                out.push(Subspace {
                    ambient: d,
                    basis: rows,
                });
            }
        }
        out.sort();
        out
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Strictly increasing chain of subspaces W_1 ⊂ W_2 ⊂ … ⊂ W_r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    members: Vec<Subspace>,
}

impl Flag {
    pub fn new(ctx: &FieldCtx, members: Vec<Subspace>) -> Result<Self, SkewError> {
        if members.is_empty() {
            return Err(SkewError::InvalidFlag("empty flag".into()));
        }
        if members[0].dim() == 0 {
            return Err(SkewError::InvalidFlag(
                "flag members must be nonzero".into(),
            ));
        }
        for w in members.windows(2) {
            if w[1].dim() <= w[0].dim() || !w[1].contains(ctx, &w[0]) {
                return Err(SkewError::InvalidFlag("containment is not strict".into()));
            }
        }
        Ok(Flag { members })
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Every complete flag W_1 ⊂ … ⊂ W_d = F_{q^d} with dim W_i = i.
    pub fn complete_flags(ctx: &FieldCtx) -> Vec<Flag> {
        let d = ctx.d();
        let by_dim: Vec<Vec<Subspace>> = (0..d).map(|k| Subspace::enumerate(ctx, k)).collect();
        let mut chains: Vec<Vec<Subspace>> = by_dim[1].iter().map(|w| vec![w.clone()]).collect();
        for layer in by_dim.iter().skip(2) {
            chains = chains
                .into_iter()
                .flat_map(|chain| {
                    let last = chain.last().unwrap().clone();
                    layer
                        .iter()
                        .filter(move |w| w.contains(ctx, &last))
                        .map(move |w| {
                            let mut c = chain.clone();
                            c.push(w.clone());
                            c
                        })
                })
                .collect();
        }
        let full = Subspace::full(ctx);
        chains
            .into_iter()
            .map(|mut c| {
                c.push(full.clone());
                Flag { members: c }
            })
            .collect()
    }
}
