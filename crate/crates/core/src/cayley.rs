//! Colored Cayley graph of the generator images in PGL(d, F_{q^{dn}}).
//!
//! Vertices are canonical projective matrices in BFS discovery order from the
//! identity; the edge x → x·ψ(γ) carries the type of γ as its color.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ff::{FieldCtx, TowerModuli};
use crate::genset::{fund_set, regularity_numbers, GensetError};
use crate::psi::{
    classify_image, psi_matrix, DetClasses, GroupKind, ModulusF, ProjGroup, ProjMatrix, PsiError,
};
use crate::skewpoly::{SkewRing, Subspace};

#[derive(Debug, Error)]
pub enum CayleyError {
    #[error(transparent)]
    Psi(#[from] PsiError),
    #[error(transparent)]
    Genset(#[from] GensetError),
    #[error("closure exceeded the cap of {cap} vertices")]
    CapExceeded { cap: usize },
    #[error("generators {a} and {b} (same type) both map vertex {vertex} to vertex {target}")]
    Collision {
        vertex: usize,
        target: usize,
        a: usize,
        b: usize,
    },
    #[error("operation needs the full closure, graph is a radius-{0} ball")]
    Partial(usize),
    #[error("graph file: {0}")]
    Format(String),
}

/// One generator image with its type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorImage {
    pub kind: usize,
    pub matrix: ProjMatrix,
}

/// Raw BFS result.
#[derive(Clone, Debug, Default)]
pub struct Closure {
    pub vertices: Vec<ProjMatrix>,
    pub depth: Vec<usize>,
    /// `out[v][g]` = target of generator g at v; empty for unexpanded vertices.
    pub out: Vec<Vec<usize>>,
}

/// Deterministic BFS from the identity. Frontiers are expanded in parallel;
/// indices are assigned sequentially in (vertex, generator) order, so the
/// numbering is the sequential BFS numbering for any thread count.
///
/// With `radius = Some(r)` only vertices at depth < r are expanded.
pub fn bfs_closure(
    group: &ProjGroup,
    gens: &[GeneratorImage],
    radius: Option<usize>,
    cap: usize,
) -> Result<Closure, CayleyError> {
    let mut c = Closure {
        vertices: vec![group.identity()],
        depth: vec![0],
        out: vec![Vec::new()],
    };
    let mut index: HashMap<ProjMatrix, usize> = HashMap::from([(group.identity(), 0)]);
    let mut frontier = vec![0usize];
    let mut level = 0;
    while !frontier.is_empty() && radius.is_none_or(|r| level < r) {
        let products: Vec<Vec<ProjMatrix>> = frontier
            .par_iter()
            .map(|&v| {
                gens.iter()
                    .map(|g| group.mul(&c.vertices[v], &g.matrix))
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (&v, prods) in frontier.iter().zip(products) {
            let mut targets = Vec::with_capacity(gens.len());
            for m in prods {
                let t = match index.get(&m) {
                    Some(&t) => t,
                    None => {
                        if c.vertices.len() >= cap {
                            return Err(CayleyError::CapExceeded { cap });
                        }
                        let t = c.vertices.len();
                        index.insert(m.clone(), t);
                        c.vertices.push(m);
                        c.depth.push(level + 1);
                        c.out.push(Vec::new());
                        next.push(t);
                        t
                    }
                };
                targets.push(t);
            }
            for a in 0..gens.len() {
                for b in a + 1..gens.len() {
                    if gens[a].kind == gens[b].kind && targets[a] == targets[b] {
                        return Err(CayleyError::Collision {
                            vertex: v,
                            target: targets[a],
                            a,
                            b,
                        });
                    }
                }
            }
            c.out[v] = targets;
        }
        frontier = next;
        level += 1;
    }
    Ok(c)
}

/// Generator record as stored in graph files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub id: usize,
    #[serde(rename = "type")]
    pub kind: usize,
    /// Echelon basis of the kernel, base-field indices, row-major.
    pub subspace: Vec<Vec<u64>>,
    /// Echelon basis of φ_γ(F_{q^d}).
    pub image: Vec<Vec<u64>>,
    pub skew: String,
    pub complement: Option<usize>,
    pub matrix: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphParams {
    pub p: u32,
    pub e: usize,
    pub d: usize,
    pub n: usize,
    pub q: u64,
    pub f: String,
    /// Index of θ in F_{q^{dn}}.
    pub theta: u64,
    pub moduli: TowerModuli,
    pub group: GroupKind,
    pub predicted_order: String,
    pub residue_symbol: i8,
    pub odd_q: bool,
    /// n_k for k = 1..d−1.
    pub regularity: Vec<u64>,
    /// Order of F_{q^{dn}}^× modulo d-th powers.
    pub det_class_order: u64,
    /// Label of 1 − θ in that group.
    pub one_minus_theta_label: u64,
    /// `None` for the full closure.
    pub radius: Option<usize>,
}

/// Serialized graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub params: GraphParams,
    pub vertices: Vec<String>,
    pub edges: Vec<[usize; 3]>,
    pub generators: Vec<GeneratorRecord>,
    pub det_labels: Vec<u64>,
}

/// Colored Cayley graph with its generator metadata.
#[derive(Clone, Debug)]
pub struct CayleyHypergraph {
    pub params: GraphParams,
    pub vertices: Vec<ProjMatrix>,
    pub depth: Vec<usize>,
    /// `out[v][g]`, empty when v was not expanded.
    pub out: Vec<Vec<usize>>,
    pub generators: Vec<GeneratorRecord>,
    pub det_labels: Vec<u64>,
    kernels: Vec<Subspace>,
    images: Vec<Subspace>,
}

impl CayleyHypergraph {
    /// Builds the closure (`radius = None`) or a ball around the identity.
    pub fn build(
        ctx: &FieldCtx,
        m: &ModulusF,
        radius: Option<usize>,
        cap: usize,
    ) -> Result<Self, CayleyError> {
        let ring = SkewRing::new(ctx);
        let group = ProjGroup::new(ctx);
        let top = ctx.top();
        let gens = fund_set(ctx)?;
        let mut images = Vec::with_capacity(gens.len());
        let mut records = Vec::with_capacity(gens.len());
        for g in &gens {
            let matrix = psi_matrix(ctx, &g.skew, m)?;
            let image = ring.phi_image(&g.skew);
            records.push(GeneratorRecord {
                id: g.id,
                kind: g.kind,
                subspace: g.subspace.basis_indices(ctx),
                image: image.basis_indices(ctx),
                skew: ring.text(&g.skew).to_string(),
                complement: g.complement,
                matrix: matrix.to_text(top),
            });
            images.push(GeneratorImage {
                kind: g.kind,
                matrix,
            });
        }
        let closure = bfs_closure(&group, &images, radius, cap)?;
        let classes = DetClasses::new(ctx);
        let det_labels = closure
            .vertices
            .par_iter()
            .map(|v| classes.label_of(&group, v))
            .collect::<Result<Vec<_>, _>>()?;
        let image_class = classify_image(ctx, m)?;
        let one_minus_theta = top.sub(&top.one(), m.theta());
        let params = GraphParams {
            p: ctx.p(),
            e: ctx.e(),
            d: ctx.d(),
            n: ctx.n(),
            q: ctx.q(),
            f: m.f().to_text(ctx),
            theta: top.index(m.theta()),
            moduli: ctx.moduli(),
            group: image_class.kind,
            predicted_order: image_class.order.to_string(),
            residue_symbol: image_class.symbol,
            odd_q: image_class.verified_hypothesis,
            regularity: regularity_numbers(ctx.q(), ctx.d()),
            det_class_order: classes.order(),
            one_minus_theta_label: classes.label(top, &one_minus_theta)?,
            radius,
        };
        Ok(CayleyHypergraph {
            params,
            vertices: closure.vertices,
            depth: closure.depth,
            out: closure.out,
            generators: records,
            det_labels,
            kernels: gens.iter().map(|g| g.subspace.clone()).collect(),
            images: gens.iter().map(|g| ring.phi_image(&g.skew)).collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    pub fn is_complete(&self) -> bool {
        self.params.radius.is_none()
    }

    pub fn is_expanded(&self, v: usize) -> bool {
        !self.out[v].is_empty() || self.generators.is_empty()
    }

    /// n_k for color k.
    pub fn regularity(&self, k: usize) -> u64 {
        self.params.regularity[k - 1]
    }

    /// (source, target, color) in (source, generator) order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(move |(v, targets)| {
            targets
                .iter()
                .enumerate()
                .map(move |(g, &t)| (v, t, self.generators[g].kind))
        })
    }

    /// Targets of color k at v.
    pub fn neighbors(&self, v: usize, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[v]
            .iter()
            .enumerate()
            .filter(move |(g, _)| self.generators[*g].kind == k)
            .map(|(_, &t)| t)
    }

    pub fn to_file(&self, ctx: &FieldCtx) -> GraphFile {
        GraphFile {
            params: self.params.clone(),
            vertices: self.vertices.iter().map(|m| m.to_text(ctx.top())).collect(),
            edges: self.edges().map(|(s, t, c)| [s, t, c]).collect(),
            generators: self.generators.clone(),
            det_labels: self.det_labels.clone(),
        }
    }

    pub fn to_json(&self, ctx: &FieldCtx) -> String {
        serde_json::to_string(&self.to_file(ctx)).expect("graph serializes")
    }

    /// Rebuilds the graph from a file, rebuilding the tower from the stored
    /// moduli.
    pub fn from_file(file: GraphFile) -> Result<(FieldCtx, Self), CayleyError> {
        let p = &file.params;
        let ctx = FieldCtx::with_moduli(p.p, p.e, p.d, p.n, p.moduli.clone())
            .map_err(|e| CayleyError::Format(e.to_string()))?;
        let top = ctx.top();
        let vertices = file
            .vertices
            .iter()
            .map(|s| ProjMatrix::parse(top, s))
            .collect::<Result<Vec<_>, _>>()?;
        let nv = vertices.len();
        if file.det_labels.len() != nv {
            return Err(CayleyError::Format(
                "det_labels length differs from vertex count".into(),
            ));
        }
        let mut out = vec![Vec::new(); nv];
        let ng = file.generators.len();
        for (i, &[s, t, c]) in file.edges.iter().enumerate() {
            if s >= nv || t >= nv {
                return Err(CayleyError::Format(format!("edge {i} out of range")));
            }
            let g = out[s].len();
            if g >= ng || file.generators[g].kind != c {
                return Err(CayleyError::Format(format!(
                    "edge {i} does not follow generator order"
                )));
            }
            out[s].push(t);
        }
        if out.iter().any(|o| !o.is_empty() && o.len() != ng) {
            return Err(CayleyError::Format("vertex with partial out-edges".into()));
        }
        let parse_sub = |rows: &Vec<Vec<u64>>| {
            Subspace::from_indices(&ctx, rows).map_err(|e| CayleyError::Format(e.to_string()))
        };
        let kernels = file
            .generators
            .iter()
            .map(|g| parse_sub(&g.subspace))
            .collect::<Result<Vec<_>, _>>()?;
        let images = file
            .generators
            .iter()
            .map(|g| parse_sub(&g.image))
            .collect::<Result<Vec<_>, _>>()?;
        let depth = bfs_depths(&out);
        let graph = CayleyHypergraph {
            params: file.params,
            vertices,
            depth,
            out,
            generators: file.generators,
            det_labels: file.det_labels,
            kernels,
            images,
        };
        Ok((ctx, graph))
    }

    pub fn from_json(text: &str) -> Result<(FieldCtx, Self), CayleyError> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| CayleyError::Format(e.to_string()))?;
        Self::from_file(file)
    }

    /// `src dst color` per line.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (a, b, c) in self.edges() {
            writeln!(s, "{a} {b} {c}").unwrap();
        }
        s
    }

    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 6] = ["black", "red", "blue", "darkgreen", "orange", "purple"];
        let mut s = String::from("digraph cayley {\n");
        for v in 0..self.vertex_count() {
            writeln!(s, "  {v} [label=\"{v}\", det={}];", self.det_labels[v]).unwrap();
        }
        for (a, b, c) in self.edges() {
            writeln!(
                s,
                "  {a} -> {b} [color={}, type={c}];",
                PALETTE[c % PALETTE.len()]
            )
            .unwrap();
        }
        s.push_str("}\n");
        s
    }
}

fn bfs_depths(out: &[Vec<usize>]) -> Vec<usize> {
    let mut depth = vec![usize::MAX; out.len()];
    if out.is_empty() {
        return depth;
    }
    depth[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &t in &out[v] {
            if depth[t] == usize::MAX {
                depth[t] = depth[v] + 1;
                queue.push_back(t);
            }
        }
    }
    depth
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub ok: bool,
    pub checked_vertices: usize,
    /// n_k per color.
    pub expected: Vec<u64>,
    pub violations: Vec<String>,
}

/// Every expanded vertex has exactly n_k distinct color-k out-neighbors.
pub fn regularity_check(g: &CayleyHypergraph) -> RegularityReport {
    let d = g.d();
    let mut violations = Vec::new();
    let mut checked = 0;
    for v in (0..g.vertex_count()).filter(|&v| g.is_expanded(v)) {
        checked += 1;
        for k in 1..d {
            let distinct: HashSet<usize> = g.neighbors(v, k).collect();
            if distinct.len() as u64 != g.regularity(k) {
                violations.push(format!(
                    "vertex {v}: {} color-{k} neighbors, expected {}",
                    distinct.len(),
                    g.regularity(k)
                ));
            }
        }
    }
    RegularityReport {
        ok: violations.is_empty(),
        checked_vertices: checked,
        expected: g.params.regularity.clone(),
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkReport {
    pub ok: bool,
    pub sampled: Vec<usize>,
    /// Neighbor pairs (type k < type k') examined.
    pub pairs: usize,
    /// Pairs adjacent in the graph.
    pub adjacent_pairs: usize,
    /// Pairs where adjacency disagrees with containment of images
    /// φ_{γ'}(F_{q^d}) ⊂ φ_γ(F_{q^d}).
    pub image_mismatches: Vec<String>,
    /// Pairs where adjacency disagrees with kernel containment W ⊂ W'.
    pub kernel_mismatches: usize,
    /// For each type-1 neighbor, the number of adjacent type-2 neighbors
    /// (d ≥ 3 only).
    pub type1_link_degrees: Vec<usize>,
    /// Number of skipped sample vertices whose neighbors were not expanded.
    pub skipped: usize,
}

/// Local incidence: for neighbors y = x·ψ(γ), y' = x·ψ(γ') of types k < k',
/// an edge y → y' of color k' − k exists iff the subspace attached to γ'
/// lies in the one attached to γ. The attached subspace is the image of φ_γ
/// on F_{q^d}, i.e. the lattice γ·L_0 modulo (1 − t)·L_0.
pub fn link_check(g: &CayleyHypergraph, ctx: &FieldCtx, sample: &[usize]) -> LinkReport {
    let ng = g.generators.len();
    let mut report = LinkReport {
        ok: true,
        sampled: Vec::new(),
        pairs: 0,
        adjacent_pairs: 0,
        image_mismatches: Vec::new(),
        kernel_mismatches: 0,
        type1_link_degrees: Vec::new(),
        skipped: 0,
    };
    for &x in sample {
        if !g.is_expanded(x) || g.out[x].iter().any(|&y| !g.is_expanded(y)) {
            report.skipped += 1;
            continue;
        }
        report.sampled.push(x);
        let mut type1_degree: HashMap<usize, usize> = HashMap::new();
        for a in 0..ng {
            for b in 0..ng {
                let (ka, kb) = (g.generators[a].kind, g.generators[b].kind);
                if ka >= kb {
                    continue;
                }
                let (y, y2) = (g.out[x][a], g.out[x][b]);
                let adjacent = g.neighbors(y, kb - ka).any(|t| t == y2);
                let by_image = g.images[a].contains(ctx, &g.images[b]);
                let by_kernel = g.kernels[b].contains(ctx, &g.kernels[a]);
                report.pairs += 1;
                if adjacent {
                    report.adjacent_pairs += 1;
                    if ka == 1 && kb == 2 {
                        *type1_degree.entry(a).or_default() += 1;
                    }
                }
                if adjacent != by_image {
                    report
                        .image_mismatches
                        .push(format!("vertex {x}: generators {a}, {b}"));
                }
                if adjacent != by_kernel {
                    report.kernel_mismatches += 1;
                }
            }
        }
        if g.d() >= 3 {
            for a in (0..ng).filter(|&a| g.generators[a].kind == 1) {
                report
                    .type1_link_degrees
                    .push(type1_degree.get(&a).copied().unwrap_or(0));
            }
        }
    }
    report.ok = report.image_mismatches.is_empty() && report.skipped < sample.len().max(1);
    report
}

/// 0/1 matrix of color-k edges, stored as sorted target lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    pub color: usize,
    pub rows: Vec<Vec<usize>>,
}

/// Sparse integer matrix, rows of (column, value) sorted by column.
pub type SparseInt = Vec<Vec<(usize, u64)>>;

impl AdjacencyMatrix {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn transpose(&self) -> AdjacencyMatrix {
        let mut rows = vec![Vec::new(); self.dim()];
        for (i, r) in self.rows.iter().enumerate() {
            for &j in r {
                rows[j].push(i);
            }
        }
        AdjacencyMatrix {
            color: self.color,
            rows,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.transpose().rows == self.rows
    }

    /// Exact product self·other.
    pub fn mul_exact(&self, other: &AdjacencyMatrix) -> SparseInt {
        self.rows
            .par_iter()
            .map(|r| {
                let mut acc: HashMap<usize, u64> = HashMap::new();
                for &k in r {
                    for &j in &other.rows[k] {
                        *acc.entry(j).or_default() += 1;
                    }
                }
                let mut row: Vec<(usize, u64)> = acc.into_iter().collect();
                row.sort_unstable();
                row
            })
            .collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&j| x[j]).sum())
            .collect()
    }

    pub fn matvec_t(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        for (i, r) in self.rows.iter().enumerate() {
            for &j in r {
                y[j] += x[i];
            }
        }
        y
    }
}

pub fn adjacency_matrix(g: &CayleyHypergraph, k: usize) -> Result<AdjacencyMatrix, CayleyError> {
    if let Some(r) = g.params.radius {
        return Err(CayleyError::Partial(r));
    }
    let rows = (0..g.vertex_count())
        .map(|v| {
            let mut r: Vec<usize> = g.neighbors(v, k).collect();
            r.sort_unstable();
            r
        })
        .collect();
    Ok(AdjacencyMatrix { color: k, rows })
}

/// Exact structural checks on the adjacency matrices of a full closure:
/// transpose pairing A_k^T = A_{d−k} and pairwise commutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeReport {
    pub ok: bool,
    pub transpose_pairs: Vec<(usize, usize, bool)>,
    pub commuting_pairs: Vec<(usize, usize, bool)>,
    /// A_k·A_kᵀ = A_kᵀ·A_k for every k.
    pub normal: Vec<(usize, bool)>,
}

pub fn hecke_check(g: &CayleyHypergraph) -> Result<HeckeReport, CayleyError> {
    let d = g.d();
    let mats: Vec<AdjacencyMatrix> = (1..d)
        .map(|k| adjacency_matrix(g, k))
        .collect::<Result<_, _>>()?;
    let mut transpose_pairs = Vec::new();
    let mut commuting_pairs = Vec::new();
    let mut normal = Vec::new();
    for k in 1..d {
        transpose_pairs.push((
            k,
            d - k,
            mats[k - 1].transpose().rows == mats[d - k - 1].rows,
        ));
        let t = mats[k - 1].transpose();
        normal.push((k, mats[k - 1].mul_exact(&t) == t.mul_exact(&mats[k - 1])));
        for j in k + 1..d {
            let ok = mats[j - 1].mul_exact(&mats[k - 1]) == mats[k - 1].mul_exact(&mats[j - 1]);
            commuting_pairs.push((j, k, ok));
        }
    }
    let ok = transpose_pairs.iter().all(|x| x.2)
        && commuting_pairs.iter().all(|x| x.2)
        && normal.iter().all(|x| x.1);
    Ok(HeckeReport {
        ok,
        transpose_pairs,
        commuting_pairs,
        normal,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub vertices: usize,
    /// Shortest cycle in the underlying undirected simple graph; `None` if acyclic.
    pub girth: Option<usize>,
    /// Eccentricity of the identity, which is the diameter of a Cayley graph.
    pub diameter: usize,
    /// log_{Σ n_k} N.
    pub diameter_lower_bound: f64,
    pub det_class_sizes: Vec<usize>,
    pub bipartite: bool,
    /// Every color-k edge moves the det label by k·label(1 − θ).
    pub label_shift_ok: bool,
}

/// Girth, diameter and det-class structure of a full closure. Girth and
/// diameter are measured from the identity, which suffices by
/// vertex-transitivity.
pub fn graph_stats(g: &CayleyHypergraph) -> Result<GraphStats, CayleyError> {
    if let Some(r) = g.params.radius {
        return Err(CayleyError::Partial(r));
    }
    let n = g.vertex_count();
    let mut undirected: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, b, _) in g.edges() {
        if a != b {
            undirected[a].push(b);
            undirected[b].push(a);
        }
    }
    for r in undirected.iter_mut() {
        r.sort_unstable();
        r.dedup();
    }
    // girth through vertex 0
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    dist[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    let mut girth: Option<usize> = None;
    while let Some(v) = queue.pop_front() {
        for &w in &undirected[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = v;
                queue.push_back(w);
            } else if parent[v] != w {
                let len = dist[v] + dist[w] + 1;
                girth = Some(girth.map_or(len, |g0| g0.min(len)));
            }
        }
    }
    let directed = bfs_depths(&g.out);
    let diameter = directed
        .iter()
        .copied()
        .filter(|&x| x != usize::MAX)
        .max()
        .unwrap_or(0);
    let degree: u64 = g.params.regularity.iter().sum();
    let diameter_lower_bound = if degree > 1 && n > 1 {
        (n as f64).ln() / (degree as f64).ln()
    } else {
        0.0
    };
    let classes = g.params.det_class_order as usize;
    let mut det_class_sizes = vec![0usize; classes];
    for &l in &g.det_labels {
        det_class_sizes[l as usize] += 1;
    }
    let shift = g.params.one_minus_theta_label;
    let label_shift_ok = g
        .edges()
        .all(|(a, b, k)| (g.det_labels[a] + k as u64 * shift) % classes as u64 == g.det_labels[b]);
    // 2-coloring
    let mut color = vec![u8::MAX; n];
    let mut bipartite = true;
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &undirected[v] {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    bipartite = false;
                }
            }
        }
    }
    Ok(GraphStats {
        vertices: n,
        girth,
        diameter,
        diameter_lower_bound,
        det_class_sizes,
        bipartite,
        label_shift_ok,
    })
}

/// The identity-rooted BFS ball; vertices at depth < radius are expanded.
pub fn ball(
    ctx: &FieldCtx,
    m: &ModulusF,
    radius: usize,
    cap: usize,
) -> Result<CayleyHypergraph, CayleyError> {
    CayleyHypergraph::build(ctx, m, Some(radius), cap)
}

/// Checks that `v ↦ h·v` maps vertices to vertices and colored edges to
/// colored edges, for a vertex `h` of a full closure.
pub fn left_translation_preserves_edges(g: &CayleyHypergraph, ctx: &FieldCtx, h: usize) -> bool {
    let group = ProjGroup::new(ctx);
    let index: HashMap<&ProjMatrix, usize> =
        g.vertices.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let image: Option<Vec<usize>> = g
        .vertices
        .iter()
        .map(|v| index.get(&group.mul(&g.vertices[h], v)).copied())
        .collect();
    let Some(image) = image else {
        return false;
    };
    let mut seen = vec![false; image.len()];
    for &i in &image {
        if std::mem::replace(&mut seen[i], true) {
            return false;
        }
    }
    g.out.iter().enumerate().all(|(v, targets)| {
        targets
            .iter()
            .enumerate()
            .all(|(gi, &t)| g.out[image[v]][gi] == image[t])
    })
}
