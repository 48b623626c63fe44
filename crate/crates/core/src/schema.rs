//! Versioned JSON output schema.
//!
//! Exact rationals serialize as `num/den` strings; convenience decimal
//! fields carry 20 significant digits. Field order is fixed by the struct
//! definitions, so serialized output is byte-stable.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::depth::DepthOutcome;
use crate::error::Error;
use crate::exact::{to_decimal_string, to_fraction_string, Rat};
use crate::median::{DepthBounds, MedianResult};
use crate::region::DepthRegion;

pub const SCHEMA_VERSION: &str = "1";
const DECIMAL_SIG_DIGITS: usize = 20;

pub fn fraction(r: &Rat) -> String {
    to_fraction_string(r)
}

pub fn decimal(r: &Rat) -> String {
    to_decimal_string(r, DECIMAL_SIG_DIGITS)
}

pub fn fractions(v: &[Rat]) -> Vec<String> {
    v.iter().map(fraction).collect()
}

pub fn decimals(v: &[Rat]) -> Vec<String> {
    v.iter().map(decimal).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HalfspaceJson {
    /// The constraint is `normal . x >= offset`.
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionJson {
    pub dim: i32,
    pub vertices: Vec<Vec<String>>,
    pub halfspaces: Vec<HalfspaceJson>,
}

impl RegionJson {
    pub fn from_region(region: &DepthRegion) -> Self {
        RegionJson {
            dim: region.dim,
            vertices: region.vertices.iter().map(|v| fractions(v)).collect(),
            halfspaces: region
                .halfspaces
                .iter()
                .map(|c| {
                    let (normal, rhs) = c.geq_form();
                    HalfspaceJson {
                        normal: fractions(&normal),
                        offset: fraction(&rhs),
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlagsJson {
    pub is_singleton: bool,
    pub deepest_samples: Vec<usize>,
    pub sample_is_vertex: Vec<bool>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsJson {
    pub lo: usize,
    pub dg92: usize,
    pub thm1: usize,
    pub fulldim: usize,
}

impl From<DepthBounds> for BoundsJson {
    fn from(b: DepthBounds) -> Self {
        BoundsJson {
            lo: b.kappa_lo,
            dg92: b.kappa_hi_dg92,
            thm1: b.kappa_hi_thm1,
            fulldim: b.kappa_hi_fulldim,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EffortJson {
    pub strategy: String,
    pub regions_computed: usize,
    pub bounds: BoundsJson,
}

/// Full median result document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MedianJson {
    pub schema_version: String,
    pub n: usize,
    pub p: usize,
    pub kappa_star: usize,
    pub lambda_star: String,
    pub median: Vec<String>,
    pub median_decimal: Vec<String>,
    pub region: RegionJson,
    pub flags: FlagsJson,
    pub effort: EffortJson,
}

impl MedianJson {
    pub fn from_result(result: &MedianResult, n: usize, p: usize) -> Self {
        MedianJson {
            schema_version: SCHEMA_VERSION.into(),
            n,
            p,
            kappa_star: result.kappa_star,
            lambda_star: format!("{}/{}", result.kappa_star, n),
            median: fractions(&result.median),
            median_decimal: decimals(&result.median),
            region: RegionJson::from_region(&result.region),
            flags: FlagsJson {
                is_singleton: result.is_singleton,
                deepest_samples: result.deepest_sample_indices.clone(),
                sample_is_vertex: result.sample_is_vertex.clone(),
                degenerate: result.degenerate,
            },
            effort: EffortJson {
                strategy: result.effort.strategy.as_str().into(),
                regions_computed: result.effort.regions_computed,
                bounds: result.effort.bounds.into(),
            },
        }
    }
}

/// Depth query document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DepthJson {
    pub schema_version: String,
    pub n: usize,
    pub p: usize,
    pub point: Vec<String>,
    pub kappa: usize,
    pub lambda: String,
    pub witness_direction: Vec<String>,
    pub degenerate: bool,
}

impl DepthJson {
    pub fn from_outcome(outcome: &DepthOutcome, point: &[Rat], n: usize, p: usize) -> Self {
        DepthJson {
            schema_version: SCHEMA_VERSION.into(),
            n,
            p,
            point: fractions(point),
            kappa: outcome.depth.kappa,
            lambda: format!("{}/{}", outcome.depth.kappa, n),
            witness_direction: fractions(&outcome.witness.vector),
            degenerate: outcome.degenerate,
        }
    }
}

/// Standalone region query document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionQueryJson {
    pub schema_version: String,
    pub n: usize,
    pub p: usize,
    pub level_kappa: usize,
    pub region: RegionJson,
    pub degenerate: bool,
}

/// Serialize any document with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("schema types always serialize");
    s.push('\n');
    s
}

/// Write a median result as JSON.
pub fn save_json(result: &MedianResult, n: usize, p: usize, path: &Path) -> Result<(), Error> {
    let doc = MedianJson::from_result(result, n, p);
    std::fs::write(path, to_json_string(&doc))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::gen_square4;
    use crate::median::tukey_median;

    #[test]
    fn median_json_is_stable_and_exact() {
        let sq = gen_square4();
        let m = tukey_median(&sq.cloud).unwrap();
        let doc = MedianJson::from_result(&m, 4, 2);
        assert_eq!(doc.lambda_star, "2/4");
        assert_eq!(doc.median, vec!["1/2", "1/2"]);
        assert_eq!(doc.median_decimal, vec!["0.5", "0.5"]);
        assert_eq!(doc.effort.bounds.thm1, 2);
        let a = to_json_string(&doc);
        let b = to_json_string(&MedianJson::from_result(&m, 4, 2));
        assert_eq!(a, b);
        // Round-trips through serde.
        let back: MedianJson = serde_json::from_str(&a).unwrap();
        assert_eq!(back.kappa_star, 2);
    }
}
