//! `forge verify`: every pipeline check in one run.

use serde::Serialize;

use forge_core::cayley::{graph_stats, hecke_check, link_check, regularity_check};
use forge_core::ff::CenterPoly;
use forge_core::genset::{divisor_bijection_check, fund_set, regularity_numbers};
use forge_core::psi::representation_check;
use forge_core::skewpoly::SkewRing;
use forge_core::spectra::{ramanujan_check, CheckOptions};

use crate::config::{Failure, RunConfig};
use crate::{emit, VerifyArgs};

/// Divisor scans above this many candidates are skipped.
const DIVISOR_SCAN_LIMIT: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub p: u32,
    pub e: usize,
    pub d: usize,
    pub f: String,
    pub group: String,
    pub predicted_order: String,
    pub vertices: usize,
    pub complete: bool,
    pub checks: Vec<Check>,
    pub pass: bool,
}

fn check(name: &'static str, ok: bool, detail: String) -> Check {
    Check {
        name,
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

fn skip(name: &'static str, detail: &str) -> Check {
    Check {
        name,
        status: Status::Skip,
        detail: detail.to_string(),
    }
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<u8, Failure> {
    let cfg = RunConfig::from_graph_args(&a.graph)?;
    let ctx = &cfg.ctx;
    let ring = SkewRing::new(ctx);
    let internal = |e: &dyn std::fmt::Display| Failure::Internal(e.to_string());
    let mut checks = Vec::new();

    let one_minus_t = CenterPoly::one_minus_t(ctx.base());
    checks.push(match ring.standard_factorization() {
        Ok(sf) => {
            let norms_ok = sf
                .factors
                .iter()
                .all(|g| ring.reduced_norm(g).is_ok_and(|n| n == one_minus_t));
            check(
                "factorization",
                norms_ok,
                format!("1 - T^{} = {}", ctx.d(), ring.pretty_product(&sf.factors)),
            )
        }
        Err(e) => check("factorization", false, e.to_string()),
    });

    let gens = fund_set(ctx).map_err(|e| internal(&e))?;
    let n = regularity_numbers(ctx.q(), ctx.d());
    let counts: Vec<u64> = (1..ctx.d())
        .map(|k| gens.iter().filter(|g| g.kind == k).count() as u64)
        .collect();
    checks.push(check(
        "generators",
        counts == n,
        format!("type counts {counts:?}, expected {n:?}"),
    ));

    let qd = ctx.skew().order();
    let scan = qd.checked_pow(ctx.d() as u32 - 1);
    checks.push(match scan {
        Some(s) if s <= DIVISOR_SCAN_LIMIT => {
            let r = divisor_bijection_check(ctx).map_err(|e| internal(&e))?;
            check(
                "divisors",
                r.ok,
                format!(
                    "{} divisors of 1 - t, {} generators",
                    r.divisors_found, r.generators
                ),
            )
        }
        _ => skip("divisors", "exhaustive divisor scan too large"),
    });

    let rep =
        representation_check(ctx, &cfg.modulus, a.samples, a.seed).map_err(|e| internal(&e))?;
    checks.push(check(
        "representation",
        rep.ok,
        format!(
            "{} pairs, {} product and {} determinant failures",
            rep.pairs, rep.product_failures, rep.det_failures
        ),
    ));

    let ball = match a.graph.ball {
        Some(r) => Some(r),
        None if cfg.closure_fits() => None,
        None => Some(2),
    };
    let graph = cfg.build_graph(ball)?;
    let complete = graph.is_complete();

    checks.push(if complete {
        check(
            "classification",
            graph.vertex_count().to_string() == graph.params.predicted_order,
            format!(
                "{} predicted {} vertices, closure has {}",
                graph.params.group,
                graph.params.predicted_order,
                graph.vertex_count()
            ),
        )
    } else {
        skip("classification", "closure size not checked on a ball")
    });

    let reg = regularity_check(&graph);
    checks.push(check(
        "regularity",
        reg.ok,
        format!(
            "n_k = {:?} at {} {}vertices",
            reg.expected,
            reg.checked_vertices,
            if complete { "" } else { "interior " }
        ),
    ));

    checks.push(if ctx.d() < 3 {
        skip("link", "d = 2 links have no type pairs")
    } else {
        let sample: Vec<usize> = (0..graph.vertex_count())
            .take(a.link_samples.max(1))
            .collect();
        let l = link_check(&graph, ctx, &sample);
        let degrees_ok = l
            .type1_link_degrees
            .iter()
            .all(|&x| x as u64 == ctx.q() + 1);
        check(
            "link",
            l.ok && degrees_ok,
            format!(
                "{} pairs at {} vertices, {} image mismatches, type-1 link degrees {:?}",
                l.pairs,
                l.sampled.len(),
                l.image_mismatches.len(),
                l.type1_link_degrees
                    .iter()
                    .collect::<std::collections::BTreeSet<_>>()
            ),
        )
    });

    if complete {
        let h = hecke_check(&graph).map_err(|e| internal(&e))?;
        checks.push(check(
            "hecke",
            h.ok,
            format!(
                "transposes {:?}, commuting {:?}",
                h.transpose_pairs, h.commuting_pairs
            ),
        ));
        let s = graph_stats(&graph).map_err(|e| internal(&e))?;
        checks.push(check(
            "det-classes",
            s.label_shift_ok,
            format!(
                "class sizes {:?}, girth {:?}, diameter {}",
                s.det_class_sizes, s.girth, s.diameter
            ),
        ));
        let opts = CheckOptions {
            dense_cutoff: a.dense_cutoff,
            seed: a.seed,
            ..Default::default()
        };
        checks.push(match ramanujan_check(&graph, &opts) {
            Ok(r) => {
                let margins: Vec<String> = r
                    .colors
                    .iter()
                    .map(|c| format!("k={} margin {:.6}", c.color, c.margin))
                    .collect();
                check("ramanujan", r.pass, margins.join(", "))
            }
            Err(e) => check("ramanujan", false, e.to_string()),
        });
    } else {
        for name in ["hecke", "det-classes", "ramanujan"] {
            checks.push(skip(name, "needs the full closure; the graph is a ball"));
        }
    }

    let pass = checks.iter().all(|c| c.status != Status::Fail);
    for c in &checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        println!("{tag} {}: {}", c.name, c.detail);
    }
    println!(
        "{}: {} {} vertices{}",
        if pass { "PASS" } else { "FAIL" },
        graph.params.group,
        graph.vertex_count(),
        if complete {
            String::new()
        } else {
            format!(" (radius-{} ball)", ball.unwrap_or(0))
        }
    );
    if let Some(out) = &a.out {
        let report = VerifyReport {
            p: ctx.p(),
            e: ctx.e(),
            d: ctx.d(),
            f: graph.params.f.clone(),
            group: graph.params.group.to_string(),
            predicted_order: graph.params.predicted_order.clone(),
            vertices: graph.vertex_count(),
            complete,
            checks,
            pass,
        };
        emit(
            Some(out),
            &(serde_json::to_string_pretty(&report).unwrap() + "\n"),
        )?;
    }
    Ok(if pass { 0 } else { 2 })
}
