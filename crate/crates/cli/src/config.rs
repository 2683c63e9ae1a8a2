//! Parameter parsing, tower caching and graph construction shared by the
//! subcommands.

use std::fmt;
use std::fs;
use std::path::PathBuf;

use forge_core::cayley::{CayleyError, CayleyHypergraph};
use forge_core::ff::{FieldCtx, Level, Poly, TowerModuli};
use forge_core::psi::{classify_image, ImageClass, ModulusF};

use crate::GraphArgs;

#[derive(Debug)]
pub enum Failure {
    Internal(String),
    Invalid(String),
    Cap(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Invalid(_) => 3,
            Failure::Cap(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Internal(s) => write!(f, "{s}"),
            Failure::Invalid(s) => write!(f, "invalid input: {s}"),
            Failure::Cap(s) => write!(f, "resource cap: {s}"),
        }
    }
}

impl From<CayleyError> for Failure {
    fn from(e: CayleyError) -> Self {
        match e {
            CayleyError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            e => Failure::Internal(e.to_string()),
        }
    }
}

/// Field tower, modulus and predicted image for one run.
pub struct RunConfig {
    pub ctx: FieldCtx,
    pub modulus: ModulusF,
    pub image: ImageClass,
    pub cap: usize,
}

impl RunConfig {
    /// Tower for (p, e, d, n), memoized as JSON under `FORGE_CACHE_DIR` when set.
    pub fn field_ctx(p: u32, e: usize, d: usize, n: usize) -> Result<FieldCtx, Failure> {
        let cache = std::env::var_os("FORGE_CACHE_DIR")
            .map(|dir| PathBuf::from(dir).join(format!("tower-p{p}-e{e}-d{d}-n{n}.json")));
        if let Some(path) = &cache {
            if let Some(moduli) = fs::read_to_string(path)
                .ok()
                .and_then(|s| serde_json::from_str::<TowerModuli>(&s).ok())
            {
                if let Ok(ctx) = FieldCtx::with_moduli(p, e, d, n, moduli) {
                    return Ok(ctx);
                }
            }
        }
        let ctx = FieldCtx::new(p, e, d, n).map_err(|e| Failure::Invalid(e.to_string()))?;
        if let Some(path) = &cache {
            if let Some(dir) = path.parent() {
                let _ = fs::create_dir_all(dir);
            }
            // a failed cache write only costs recomputation next time
            let _ = fs::write(path, serde_json::to_string(&ctx.moduli()).unwrap());
        }
        Ok(ctx)
    }

    pub fn from_graph_args(a: &GraphArgs) -> Result<Self, Failure> {
        let invalid = |e: &dyn fmt::Display| Failure::Invalid(e.to_string());
        let (ctx, modulus) = match a.f.strip_prefix("auto:") {
            Some(n) => {
                let n: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| Failure::Invalid(format!("bad auto degree {n:?}")))?;
                let ctx = Self::field_ctx(a.p, a.e, a.d, n)?;
                let m = ModulusF::auto(&ctx).map_err(|e| invalid(&e))?;
                (ctx, m)
            }
            None => {
                let probe = Self::field_ctx(a.p, a.e, a.d, 1)?;
                let f = Poly::parse(&probe, Level::Base, &a.f).map_err(|e| invalid(&e))?;
                let deg = f.degree().unwrap_or(0);
                if deg == 0 || deg % a.d != 0 {
                    return Err(Failure::Invalid(format!(
                        "deg f = {deg} is not a positive multiple of d = {}",
                        a.d
                    )));
                }
                let ctx = Self::field_ctx(a.p, a.e, a.d, deg / a.d)?;
                let m = ModulusF::parse(&ctx, &a.f).map_err(|e| invalid(&e))?;
                (ctx, m)
            }
        };
        let image = classify_image(&ctx, &modulus).map_err(|e| Failure::Internal(e.to_string()))?;
        Ok(RunConfig {
            ctx,
            modulus,
            image,
            cap: a.cap,
        })
    }

    /// Whether the predicted closure fits under the vertex cap.
    pub fn closure_fits(&self) -> bool {
        u64::try_from(&self.image.order).is_ok_and(|n| n <= self.cap as u64)
    }

    pub fn build_graph(&self, ball: Option<usize>) -> Result<CayleyHypergraph, Failure> {
        if ball.is_none() && !self.closure_fits() {
            return Err(Failure::Cap(format!(
                "predicted closure of {} vertices exceeds the cap {}; use --ball",
                self.image.order, self.cap
            )));
        }
        Ok(CayleyHypergraph::build(
            &self.ctx,
            &self.modulus,
            ball,
            self.cap,
        )?)
    }
}
