//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line.
//!
//! Run with `cargo test -p forge-core --test acceptance -- --nocapture`.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use forge_core::cayley::{ball, hecke_check, link_check, regularity_check, CayleyHypergraph};
use forge_core::ff::{CenterPoly, FieldCtx};
use forge_core::genset::fund_set;
use forge_core::psi::{classify_image, representation_check, GroupKind, ModulusF};
use forge_core::skewpoly::{SkewPoly, SkewRing};
use forge_core::spectra::{ramanujan_check, CheckOptions, EigenClass, Method, BOUND_TOL};

const PGL_F: &str = "1*t^2+1";
const PSL_F: &str = "1*t^2+1*t^1+2";

fn report(id: u32, name: &str, ok: bool, detail: String) {
    println!(
        "{} [{id:>2}] {name}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn ctx(p: u32, e: usize, d: usize) -> FieldCtx {
    FieldCtx::new(p, e, d, 1).unwrap()
}

fn ctx32() -> &'static FieldCtx {
    static C: OnceLock<FieldCtx> = OnceLock::new();
    C.get_or_init(|| ctx(3, 1, 2))
}

fn ctx33() -> &'static FieldCtx {
    static C: OnceLock<FieldCtx> = OnceLock::new();
    C.get_or_init(|| ctx(3, 1, 3))
}

fn timed_graph(f: &str) -> (CayleyHypergraph, Duration) {
    let start = Instant::now();
    let m = ModulusF::parse(ctx32(), f).unwrap();
    let g = CayleyHypergraph::build(ctx32(), &m, None, 100_000).unwrap();
    (g, start.elapsed())
}

fn pgl() -> &'static (CayleyHypergraph, Duration) {
    static G: OnceLock<(CayleyHypergraph, Duration)> = OnceLock::new();
    G.get_or_init(|| timed_graph(PGL_F))
}

fn psl() -> &'static (CayleyHypergraph, Duration) {
    static G: OnceLock<(CayleyHypergraph, Duration)> = OnceLock::new();
    G.get_or_init(|| timed_graph(PSL_F))
}

fn ball33() -> &'static CayleyHypergraph {
    static G: OnceLock<CayleyHypergraph> = OnceLock::new();
    G.get_or_init(|| {
        let m = ModulusF::auto(ctx33()).unwrap();
        ball(ctx33(), &m, 2, 100_000).unwrap()
    })
}

#[test]
fn c01_factorization() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (p, d) in [(3u32, 2usize), (5, 2), (7, 2), (3, 3), (5, 3), (3, 4)] {
        let c = ctx(p, 1, d);
        let r = SkewRing::new(&c);
        let one_minus_t = CenterPoly::one_minus_t(c.base());
        let sf = r.standard_factorization().unwrap();
        let ok = sf.factors.len() == d
            && r.product(sf.factors.iter()) == r.one_minus_t()
            && sf
                .factors
                .iter()
                .all(|g| g.degree() == Some(1) && r.reduced_norm(g).unwrap() == one_minus_t);
        if !ok {
            bad.push((p, d));
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        "factorization of 1 - t",
        bad.is_empty() && elapsed < Duration::from_secs(1),
        format!("6 cases, failures {bad:?}, {elapsed:.2?}"),
    );
}

#[test]
fn c02_reduced_norm_of_linear_factors() {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for (p, e, d) in [
        (3u32, 1usize, 2usize),
        (5, 1, 2),
        (7, 1, 2),
        (3, 1, 3),
        (5, 1, 3),
        (3, 1, 4),
        (2, 1, 3),
        (2, 1, 4),
        (3, 2, 2),
        (3, 1, 6),
    ] {
        let c = ctx(p, e, d);
        assert!(c.skew().order() <= 729);
        let r = SkewRing::new(&c);
        let f = c.skew();
        let one_minus_t = CenterPoly::one_minus_t(c.base());
        for x in f.elements().skip(1) {
            let ratio = f.div(&x, &c.frobenius_q(&x, 1)).unwrap();
            checked += 1;
            if r.reduced_norm(&r.one_minus_linear(&ratio)).unwrap() != one_minus_t {
                bad.push((p, e, d, f.index(&x)));
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        2,
        "rn(1 - x^(1-q) T) = 1 - t",
        bad.is_empty() && elapsed < Duration::from_secs(5),
        format!(
            "{checked} elements over 10 fields, {} failures, {elapsed:.2?}",
            bad.len()
        ),
    );
}

/// Ordered factorizations 1 - τ^d = Π (1 + c_i τ), by exhaustive search.
fn brute_force_factorizations(c: &FieldCtx) -> usize {
    let r = SkewRing::new(c);
    let f = c.skew();
    let target = r.one_minus_t();
    let nonzero: Vec<_> = f.elements().skip(1).collect();
    let linear: Vec<SkewPoly> = nonzero
        .iter()
        .map(|x| SkewPoly::new(vec![f.one(), x.clone()]))
        .collect();
    let mut partial = vec![r.one()];
    for _ in 0..c.d() {
        partial = partial
            .iter()
            .flat_map(|a| linear.iter().map(|g| r.mul(a, g)))
            .collect();
        // prune to products still dividing the target on the left
        partial.retain(|a| r.left_divmod(&target, a).unwrap().1.is_zero());
    }
    partial.iter().filter(|a| **a == target).count()
}

/// Complete flags in F_q^d: Π_{k=1..d} (q^k − 1)/(q − 1).
fn flag_count(q: u64, d: usize) -> u64 {
    (1..=d as u32).map(|k| (q.pow(k) - 1) / (q - 1)).product()
}

#[test]
fn c03_flag_bijection() {
    let n32 = brute_force_factorizations(ctx32());
    let n33 = brute_force_factorizations(ctx33());
    let ok =
        n32 == 4 && n33 == 52 && n32 as u64 == flag_count(3, 2) && n33 as u64 == flag_count(3, 3);
    report(
        3,
        "factorizations = complete flags",
        ok,
        format!("(3,2): {n32}, (3,3): {n33}; flags 4, 52"),
    );
}

/// Number of k-dimensional subspaces of F_q^d.
fn subspace_count(q: u64, d: usize, k: usize) -> u64 {
    let num: u64 = (0..k as u32).map(|i| q.pow(d as u32) - q.pow(i)).product();
    let den: u64 = (0..k as u32).map(|i| q.pow(k as u32) - q.pow(i)).product();
    num / den
}

#[test]
fn c04_generator_counts() {
    let mut details = Vec::new();
    let mut ok = true;
    for (p, d, expect) in [
        (3u32, 2usize, vec![4u64]),
        (3, 3, vec![13, 13]),
        (5, 2, vec![6]),
    ] {
        let c = ctx(p, 1, d);
        let gens = fund_set(&c).unwrap();
        let counts: Vec<u64> = (1..d)
            .map(|k| gens.iter().filter(|g| g.kind == k).count() as u64)
            .collect();
        let oracle: Vec<u64> = (1..d).map(|k| subspace_count(p as u64, d, k)).collect();
        ok &= counts == expect && counts == oracle;
        details.push(format!("({p},{d}) {counts:?}"));
    }
    report(4, "generator counts", ok, details.join(", "));
}

#[test]
fn c05_classification() {
    let start = Instant::now();
    let (g_pgl, t_pgl) = pgl();
    let (g_psl, t_psl) = psl();
    let c = ctx32();
    let top = c.top();
    // squares of F_9^× by brute force
    let squares: BTreeSet<u64> = top
        .elements()
        .skip(1)
        .map(|x| top.index(&top.square(&x)))
        .collect();
    let mut ok = true;
    let mut details = Vec::new();
    for (f, g, kind, size) in [
        (PGL_F, g_pgl, GroupKind::Pgl, 720usize),
        (PSL_F, g_psl, GroupKind::Psl, 360),
    ] {
        let m = ModulusF::parse(c, f).unwrap();
        let class = classify_image(c, &m).unwrap();
        let one_minus_theta = top.sub(&top.one(), m.theta());
        let brute = if squares.contains(&top.index(&one_minus_theta)) {
            1
        } else {
            -1
        };
        ok &= class.kind == kind
            && class.symbol == brute
            && g.vertex_count() == size
            && g.params.group == kind;
        details.push(format!(
            "{f}: {} symbol {brute}, {} vertices",
            class.kind,
            g.vertex_count()
        ));
    }
    let elapsed = start.elapsed() + *t_pgl + *t_psl;
    ok &= elapsed < Duration::from_secs(30);
    report(
        5,
        "PSL/PGL classification",
        ok,
        format!("{}, {elapsed:.2?}", details.join("; ")),
    );
}

#[test]
fn c06_regularity() {
    let mut ok = true;
    let mut details = Vec::new();
    for (name, g) in [("PGL", &pgl().0), ("PSL", &psl().0)] {
        let r = regularity_check(g);
        let distinct_four =
            (0..g.vertex_count()).all(|v| g.neighbors(v, 1).collect::<BTreeSet<_>>().len() == 4);
        ok &= r.ok && distinct_four && r.checked_vertices == g.vertex_count();
        details.push(format!(
            "{name} 4-regular at {} vertices",
            r.checked_vertices
        ));
    }
    let b = ball33();
    let t1 = b.neighbors(0, 1).collect::<BTreeSet<_>>().len();
    let t2 = b.neighbors(0, 2).collect::<BTreeSet<_>>().len();
    ok &= t1 == 13 && t2 == 13;
    details.push(format!("(3,3) root: {t1} type-1, {t2} type-2"));
    report(6, "regularity", ok, details.join(", "));
}

#[test]
fn c07_ramanujan_bound() {
    let bound = 2.0 * 3f64.sqrt();
    let mut ok = true;
    let mut details = Vec::new();
    for (name, g, trivial) in [
        ("PGL", &pgl().0, vec![4.0, -4.0]),
        ("PSL", &psl().0, vec![4.0]),
    ] {
        let start = Instant::now();
        let r = ramanujan_check(g, &CheckOptions::default()).unwrap();
        let elapsed = start.elapsed();
        let c = &r.colors[0];
        let mut removed: Vec<f64> = c
            .eigenvalues
            .iter()
            .filter(|e| e.class == EigenClass::Trivial)
            .map(|e| e.re.round())
            .collect();
        removed.sort_by(|a, b| b.total_cmp(a));
        let rest_ok = c
            .eigenvalues
            .iter()
            .filter(|e| e.class == EigenClass::Nontrivial)
            .all(|e| e.modulus <= bound + BOUND_TOL);
        ok &= c.method == Method::DenseSymmetric
            && c.eigenvalues.len() == g.vertex_count()
            && removed == trivial
            && rest_ok
            && r.pass
            && elapsed < Duration::from_secs(60);
        details.push(format!(
            "{name}: removed {removed:?}, max |lambda| {:.6} <= {bound:.6}, {elapsed:.2?}",
            c.max_nontrivial_modulus
        ));
    }
    report(7, "Ramanujan bound", ok, details.join("; "));
}

#[test]
fn c08_representation() {
    let mut ok = true;
    let mut details = Vec::new();
    for c in [ctx32(), ctx33()] {
        let m = ModulusF::auto(c).unwrap();
        let r = representation_check(c, &m, 1000, 2024).unwrap();
        ok &= r.ok && r.pairs == 1000;
        details.push(format!(
            "(3,{}): {} pairs, {} + {} failures",
            c.d(),
            r.pairs,
            r.product_failures,
            r.det_failures
        ));
    }
    report(8, "representation soundness", ok, details.join("; "));
}

#[test]
fn c09_adjacency_structure() {
    let mut ok = true;
    let mut details = Vec::new();
    for (name, g) in [("PGL", &pgl().0), ("PSL", &psl().0)] {
        let h = hecke_check(g).unwrap();
        ok &= h.ok && h.transpose_pairs == vec![(1, 1, true)];
        details.push(format!(
            "{name}: A^T = A {}, normal {}",
            h.transpose_pairs[0].2, h.normal[0].1
        ));
    }
    report(9, "adjacency structure", ok, details.join("; "));
}

#[test]
fn c10_link_structure() {
    let b = ball33();
    let l = link_check(b, ctx33(), &[0]);
    // independent oracle: the type-1/type-2 link is the point-line incidence
    // of PG(2, 3), so two lines share exactly one plane
    let type1: Vec<usize> = b.neighbors(0, 1).collect();
    let type2: BTreeSet<usize> = b.neighbors(0, 2).collect();
    let planes_of: Vec<BTreeSet<usize>> = type1
        .iter()
        .map(|&y| b.neighbors(y, 1).filter(|z| type2.contains(z)).collect())
        .collect();
    let mut lines_per_plane: HashMap<usize, usize> = HashMap::new();
    for s in &planes_of {
        for &z in s {
            *lines_per_plane.entry(z).or_default() += 1;
        }
    }
    let pairs_ok = (0..type1.len()).all(|i| {
        (i + 1..type1.len()).all(|j| planes_of[i].intersection(&planes_of[j]).count() == 1)
    });
    let ok = l.ok
        && l.image_mismatches.is_empty()
        && l.type1_link_degrees == vec![4; 13]
        && planes_of.iter().all(|s| s.len() == 4)
        && lines_per_plane.len() == 13
        && lines_per_plane.values().all(|&n| n == 4)
        && pairs_ok;
    report(
        10,
        "link structure",
        ok,
        format!(
            "{} pairs, {} incident, 0 image mismatches: {}, each line in 4 planes: {}, each plane has 4 lines: {}",
            l.pairs,
            l.adjacent_pairs,
            l.image_mismatches.is_empty(),
            planes_of.iter().all(|s| s.len() == 4),
            lines_per_plane.values().all(|&n| n == 4)
        ),
    );
}
