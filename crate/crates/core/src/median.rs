//! Maximum-depth search over integer levels and the Tukey median.
//!
//! Level regions are nested and shrink to empty above the maximum depth, so
//! the search is a descending scan over integer levels from an upper bound.
//! Two bounds are supported: the classic half-sample bound `ceil(n/2)`
//! (strategy `dg92`) and the sharper dimension-adjusted bound
//! `floor((n-p+2)/2)` (strategy `thm1`). Starting lower probes fewer empty
//! levels; the scan records how many level regions it had to compute so the
//! two strategies can be compared.

use serde::{Deserialize, Serialize};

use crate::datasets::gen_gaussian;
use crate::depth::{depth_all_samples_forced, SampleDepths};
use crate::error::Error;
use crate::exact::Rat;
use crate::geometry::PointCloud;
use crate::region::{
    depth_region_with, level_nonempty, region_centroid, DepthRegion, HyperplaneFamily, ProbeCache,
};

/// Integer search bounds for the maximum depth count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DepthBounds {
    /// Search floor `ceil(n / (p + 1))`; always attainable.
    pub kappa_lo: usize,
    /// Half-sample upper bound `ceil(n / 2)`.
    pub kappa_hi_dg92: usize,
    /// Dimension-adjusted upper bound `floor((n - p + 2) / 2)`.
    pub kappa_hi_thm1: usize,
    /// The tighter bound `floor((n - p + 1) / 2)` that applies when the
    /// median region is full-dimensional; only checkable after the fact.
    pub kappa_hi_fulldim: usize,
}

/// Which upper bound the descending scan starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Dg92,
    Thm1,
}

impl Strategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Dg92 => "dg92",
            Strategy::Thm1 => "thm1",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dg92" => Ok(Strategy::Dg92),
            "thm1" => Ok(Strategy::Thm1),
            other => Err(format!("unknown strategy {other:?} (expected dg92 or thm1)")),
        }
    }
}

/// The four search bounds for a sample of n points in dimension p.
pub fn depth_bounds(n: usize, p: usize) -> Result<DepthBounds, Error> {
    if p < 1 || n <= p {
        return Err(Error::TooFewPoints { n, p });
    }
    let bounds = DepthBounds {
        kappa_lo: n.div_ceil(p + 1),
        kappa_hi_dg92: n.div_ceil(2),
        kappa_hi_thm1: (n - p + 2) / 2,
        kappa_hi_fulldim: (n - p + 1) / 2,
    };
    if bounds.kappa_lo > bounds.kappa_hi_thm1 {
        return Err(Error::EmptySearchInterval {
            lo: bounds.kappa_lo,
            hi: bounds.kappa_hi_thm1,
            n,
            p,
        });
    }
    Ok(bounds)
}

/// Outcome of the level scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxDepth {
    pub kappa_star: usize,
    /// Level regions computed during the scan.
    pub regions_computed: usize,
}

/// Componentwise median of the sample; cheap to evaluate and usually close
/// to the deepest point.
fn coordinatewise_median(cloud: &PointCloud) -> Vec<Rat> {
    let n = cloud.len();
    (0..cloud.dim())
        .map(|j| {
            let mut column: Vec<Rat> = cloud.points().iter().map(|q| q[j].clone()).collect();
            column.sort();
            if n % 2 == 1 {
                column[n / 2].clone()
            } else {
                (&column[n / 2 - 1] + &column[n / 2]) / Rat::from(num_bigint::BigInt::from(2))
            }
        })
        .collect()
}

/// A probe cache holding only the componentwise median's depth.
fn light_cache(cloud: &PointCloud) -> Result<ProbeCache, Error> {
    let center = coordinatewise_median(cloud);
    let out = crate::depth::tukey_depth_forced(&center, cloud)?;
    Ok(ProbeCache { deep_point: Some((center, out.depth.kappa)) })
}

/// A probe cache seeded with the deepest sample point and the componentwise
/// median: level probes at or below their depth are answered without
/// touching region geometry.
fn seeded_cache(cloud: &PointCloud, samples: &SampleDepths) -> Result<ProbeCache, Error> {
    let deepest = samples.deepest[0];
    let mut best = (cloud.point(deepest).to_vec(), samples.max_kappa());
    let center = coordinatewise_median(cloud);
    let center_depth = crate::depth::tukey_depth_forced(&center, cloud)?;
    if center_depth.depth.kappa > best.1 {
        best = (center, center_depth.depth.kappa);
    }
    Ok(ProbeCache { deep_point: Some(best) })
}

fn max_depth_with(
    cloud: &PointCloud,
    family: &HyperplaneFamily,
    strategy: Strategy,
    mut cache: ProbeCache,
) -> Result<MaxDepth, Error> {
    let bounds = depth_bounds(cloud.len(), cloud.dim())?;
    let hi = match strategy {
        Strategy::Dg92 => bounds.kappa_hi_dg92,
        Strategy::Thm1 => bounds.kappa_hi_thm1,
    };
    let mut regions_computed = 0;
    for kappa in (1..=hi).rev() {
        regions_computed += 1;
        if level_nonempty(cloud, family, kappa, &mut cache)? {
            return Ok(MaxDepth { kappa_star: kappa, regions_computed });
        }
        if kappa == bounds.kappa_lo {
            return Err(Error::Internal(format!(
                "level {} is empty but lies at the search floor",
                kappa
            )));
        }
    }
    Err(Error::Internal("no nonempty level found".into()))
}

fn max_depth_inner(
    cloud: &PointCloud,
    strategy: Strategy,
    force: bool,
) -> Result<MaxDepth, Error> {
    match cloud.general_position() {
        Ok(()) => {}
        Err(w) => {
            if !force {
                return Err(Error::NotInGeneralPosition(w));
            }
        }
    }
    let family = HyperplaneFamily::build(cloud);
    let samples = depth_all_samples_forced(cloud)?;
    let cache = seeded_cache(cloud, &samples)?;
    max_depth_with(cloud, &family, strategy, cache)
}

/// Largest kappa whose level region is nonempty, found by a descending scan
/// from the strategy's upper bound.
pub fn max_depth(cloud: &PointCloud, strategy: Strategy) -> Result<MaxDepth, Error> {
    max_depth_inner(cloud, strategy, false)
}

pub fn max_depth_forced(cloud: &PointCloud, strategy: Strategy) -> Result<MaxDepth, Error> {
    max_depth_inner(cloud, strategy, true)
}

/// Search effort bookkeeping attached to a median result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchEffort {
    pub strategy: Strategy,
    pub regions_computed: usize,
    pub bounds: DepthBounds,
}

/// The full median computation: maximum depth, its region, and the median
/// point, plus the deepest-sample bookkeeping.
#[derive(Debug, Clone)]
pub struct MedianResult {
    pub kappa_star: usize,
    pub region: DepthRegion,
    /// Centroid of the median region.
    pub median: Vec<Rat>,
    pub is_singleton: bool,
    /// Sample indices whose depth attains `kappa_star`; may be empty.
    pub deepest_sample_indices: Vec<usize>,
    /// Per deepest sample: is the point exactly a vertex of the region?
    pub sample_is_vertex: Vec<bool>,
    /// Depths of all sample points.
    pub sample_depths: SampleDepths,
    pub degenerate: bool,
    pub effort: SearchEffort,
}

fn tukey_median_inner(cloud: &PointCloud, force: bool) -> Result<MedianResult, Error> {
    let degenerate = match cloud.general_position() {
        Ok(()) => false,
        Err(w) => {
            if !force {
                return Err(Error::NotInGeneralPosition(w));
            }
            true
        }
    };
    let bounds = depth_bounds(cloud.len(), cloud.dim())?;
    let family = HyperplaneFamily::build(cloud);
    let sample_depths = depth_all_samples_forced(cloud)?;
    let cache = seeded_cache(cloud, &sample_depths)?;
    let search = max_depth_with(cloud, &family, Strategy::Thm1, cache)?;
    let region = depth_region_with(cloud, &family, search.kappa_star)?;
    if region.is_empty() {
        return Err(Error::Internal(
            "median level probed nonempty but assembled empty".into(),
        ));
    }
    let median = region_centroid(&region)?;
    if !region.contains(&median) {
        return Err(Error::Internal("median fell outside its region".into()));
    }
    let deepest_sample_indices: Vec<usize> = sample_depths
        .pairs()
        .filter(|(_, d)| d.kappa == search.kappa_star)
        .map(|(i, _)| i)
        .collect();
    let sample_is_vertex = deepest_sample_indices
        .iter()
        .map(|&i| region.is_vertex(cloud.point(i)))
        .collect();
    Ok(MedianResult {
        kappa_star: search.kappa_star,
        is_singleton: region.dim == 0,
        median,
        deepest_sample_indices,
        sample_is_vertex,
        sample_depths,
        degenerate,
        effort: SearchEffort {
            strategy: Strategy::Thm1,
            regions_computed: search.regions_computed,
            bounds,
        },
        region,
    })
}

/// Compute the Tukey median: the centroid of the deepest region.
pub fn tukey_median(cloud: &PointCloud) -> Result<MedianResult, Error> {
    tukey_median_inner(cloud, false)
}

/// [`tukey_median`] on a degenerate cloud, marking the result.
pub fn tukey_median_forced(cloud: &PointCloud) -> Result<MedianResult, Error> {
    tukey_median_inner(cloud, true)
}

/// Report of the maximum-depth upper-bound check (verify suite `thm1`).
#[derive(Debug, Clone, Serialize)]
pub struct MaxDepthBoundReport {
    pub kappa_star: usize,
    pub region_dim: i32,
    pub bound_general: usize,
    pub bound_fulldim: usize,
    /// `bound_general - kappa_star`.
    pub margin: usize,
    pub pass: bool,
}

/// Check `kappa_star <= floor((n-p+2)/2)`, and the tighter
/// `floor((n-p+1)/2)` when the region is full-dimensional.
pub fn verify_max_depth_bound(result: &MedianResult, n: usize, p: usize) -> MaxDepthBoundReport {
    let bound_general = (n - p + 2) / 2;
    let bound_fulldim = (n - p + 1) / 2;
    let general_ok = result.kappa_star <= bound_general;
    let fulldim_ok = result.region.dim != p as i32 || result.kappa_star <= bound_fulldim;
    MaxDepthBoundReport {
        kappa_star: result.kappa_star,
        region_dim: result.region.dim,
        bound_general,
        bound_fulldim,
        margin: bound_general.saturating_sub(result.kappa_star),
        pass: general_ok && fulldim_ok,
    }
}

/// Report of the deepest-sample vertex check (verify suite `thm2`).
#[derive(Debug, Clone, Serialize)]
pub struct DeepestSampleReport {
    pub deepest_samples: Vec<usize>,
    /// Per deepest sample: exactly a vertex of the median region.
    pub each_is_vertex: Vec<bool>,
    /// No sample point lies strictly inside the median region.
    pub none_strictly_interior: bool,
    pub pass: bool,
}

/// Every sample attaining the maximum depth must be a vertex of the median
/// region, and no sample may sit strictly inside it.
pub fn verify_deepest_sample_vertices(
    result: &MedianResult,
    cloud: &PointCloud,
) -> DeepestSampleReport {
    let each_is_vertex: Vec<bool> = result
        .deepest_sample_indices
        .iter()
        .map(|&i| result.region.is_vertex(cloud.point(i)))
        .collect();
    let none_strictly_interior = (0..cloud.len())
        .all(|i| !result.region.strictly_interior(cloud.point(i)));
    let pass = each_is_vertex.iter().all(|&b| b) && none_strictly_interior;
    DeepestSampleReport {
        deepest_samples: result.deepest_sample_indices.clone(),
        each_is_vertex,
        none_strictly_interior,
        pass,
    }
}

/// Report of the singleton-at-the-bound check (verify suite `thm3`).
#[derive(Debug, Clone, Serialize)]
pub struct SingletonReport {
    /// The check binds only when the maximum depth attains the bound.
    pub applicable: bool,
    pub kappa_star: usize,
    pub bound: usize,
    pub is_singleton: bool,
    pub pass: bool,
}

/// When the maximum depth attains `floor((n-p+2)/2)` with p >= 2, the median
/// region must be a single point.
pub fn verify_singleton_at_bound(result: &MedianResult, n: usize, p: usize) -> SingletonReport {
    let bound = (n - p + 2) / 2;
    let applicable = p >= 2 && result.kappa_star == bound;
    SingletonReport {
        applicable,
        kappa_star: result.kappa_star,
        bound,
        is_singleton: result.is_singleton,
        pass: !applicable || result.is_singleton,
    }
}

/// Report of the no-halfspace-center check (verify suite `prop1`).
#[derive(Debug, Clone, Serialize)]
pub struct NoCenterReport {
    pub kappa_star: usize,
    /// `ceil(n/2)`: a halfspace-symmetry center would need this depth count.
    pub half_count: usize,
    pub pass: bool,
}

/// For p >= 3 in general position the maximum depth stays strictly below
/// n/2, so no point is a halfspace-symmetry center.
pub fn verify_no_halfspace_center(cloud: &PointCloud) -> Result<NoCenterReport, Error> {
    if cloud.dim() < 3 {
        return Err(Error::UnsupportedDimension(cloud.dim()));
    }
    let search = max_depth(cloud, Strategy::Thm1)?;
    let half_count = cloud.len().div_ceil(2);
    Ok(NoCenterReport {
        kappa_star: search.kappa_star,
        half_count,
        pass: search.kappa_star < half_count,
    })
}

/// One repetition of the strategy comparison.
#[derive(Debug, Clone, Serialize)]
pub struct PruningRep {
    pub rep: usize,
    pub seed: u64,
    pub kappa_star: usize,
    pub regions_computed_dg92: usize,
    pub regions_computed_thm1: usize,
}

/// Comparison of the two upper-bound strategies on seeded Gaussian clouds.
#[derive(Debug, Clone, Serialize)]
pub struct PruningReport {
    pub n: usize,
    pub p: usize,
    pub bounds: DepthBounds,
    /// Scan interval lengths `hi - lo` per strategy.
    pub interval_dg92: usize,
    pub interval_thm1: usize,
    /// Candidate level counts `hi - lo + 1` per strategy.
    pub levels_dg92: usize,
    pub levels_thm1: usize,
    pub reps: Vec<PruningRep>,
}

impl PruningReport {
    pub fn interval_reduction(&self) -> (usize, usize) {
        (self.interval_dg92 - self.interval_thm1, self.interval_dg92)
    }

    pub fn level_reduction(&self) -> (usize, usize) {
        (self.levels_dg92 - self.levels_thm1, self.levels_dg92)
    }

    pub fn regions_reduction_total(&self) -> (usize, usize) {
        let saved: usize = self
            .reps
            .iter()
            .map(|r| r.regions_computed_dg92 - r.regions_computed_thm1)
            .sum();
        let base: usize = self.reps.iter().map(|r| r.regions_computed_dg92).sum();
        (saved, base)
    }
}

/// Run both strategies over `reps` seeded Gaussian clouds and tabulate the
/// search effort. The two scans must agree on the maximum depth; only the
/// number of level regions they compute differs.
pub fn pruning_report(n: usize, p: usize, reps: usize, seed: u64) -> Result<PruningReport, Error> {
    let bounds = depth_bounds(n, p)?;
    let mut out = PruningReport {
        n,
        p,
        bounds,
        interval_dg92: bounds.kappa_hi_dg92 - bounds.kappa_lo,
        interval_thm1: bounds.kappa_hi_thm1 - bounds.kappa_lo,
        levels_dg92: bounds.kappa_hi_dg92 - bounds.kappa_lo + 1,
        levels_thm1: bounds.kappa_hi_thm1 - bounds.kappa_lo + 1,
        reps: Vec::with_capacity(reps),
    };
    for rep in 0..reps {
        let rep_seed = seed.wrapping_add(rep as u64);
        let named = gen_gaussian(n, p, rep_seed)?;
        let family = HyperplaneFamily::build(&named.cloud);
        let cache = light_cache(&named.cloud)?;
        let dg = max_depth_with(&named.cloud, &family, Strategy::Dg92, cache.clone())?;
        let th = max_depth_with(&named.cloud, &family, Strategy::Thm1, cache)?;
        if dg.kappa_star != th.kappa_star {
            return Err(Error::Internal(format!(
                "strategies disagree on seed {rep_seed}: {} vs {}",
                dg.kappa_star, th.kappa_star
            )));
        }
        out.reps.push(PruningRep {
            rep,
            seed: rep_seed,
            kappa_star: th.kappa_star,
            regions_computed_dg92: dg.regions_computed,
            regions_computed_thm1: th.regions_computed,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_decimal;

    fn pt(strs: &[&str]) -> Vec<Rat> {
        strs.iter().map(|s| parse_decimal(s).unwrap()).collect()
    }

    fn cloud(strs: &[&[&str]]) -> PointCloud {
        PointCloud::new(strs.iter().map(|row| pt(row)).collect()).unwrap()
    }

    fn square4() -> PointCloud {
        cloud(&[&["0", "0"], &["1", "0"], &["0", "1"], &["1", "1"]])
    }

    fn t4() -> PointCloud {
        cloud(&[&["0", "0"], &["4", "0"], &["2", "4"], &["2", "1.5"]])
    }

    #[test]
    fn bounds_match_direct_evaluation() {
        let b = depth_bounds(25, 5).unwrap();
        assert_eq!(
            (b.kappa_lo, b.kappa_hi_dg92, b.kappa_hi_thm1, b.kappa_hi_fulldim),
            (5, 13, 11, 10)
        );
        let b = depth_bounds(4, 2).unwrap();
        assert_eq!(
            (b.kappa_lo, b.kappa_hi_dg92, b.kappa_hi_thm1, b.kappa_hi_fulldim),
            (2, 2, 2, 1)
        );
        let b = depth_bounds(3, 1).unwrap();
        assert_eq!(
            (b.kappa_lo, b.kappa_hi_dg92, b.kappa_hi_thm1, b.kappa_hi_fulldim),
            (2, 2, 2, 1)
        );
        assert!(depth_bounds(5, 5).is_err());
    }

    #[test]
    fn max_depth_square_and_t4() {
        let sq = square4();
        assert_eq!(max_depth(&sq, Strategy::Thm1).unwrap().kappa_star, 2);
        assert_eq!(max_depth(&sq, Strategy::Dg92).unwrap().kappa_star, 2);
        let c = t4();
        assert_eq!(max_depth(&c, Strategy::Thm1).unwrap().kappa_star, 2);
    }

    #[test]
    fn median_of_square_is_center() {
        let sq = square4();
        let m = tukey_median(&sq).unwrap();
        assert_eq!(m.kappa_star, 2);
        assert_eq!(m.median, pt(&["0.5", "0.5"]));
        assert!(m.is_singleton);
        assert!(m.deepest_sample_indices.is_empty());
        assert!(!m.degenerate);
    }

    #[test]
    fn median_of_t4_is_the_interior_sample() {
        let m = tukey_median(&t4()).unwrap();
        assert_eq!(m.kappa_star, 2);
        assert_eq!(m.median, pt(&["2", "1.5"]));
        assert!(m.is_singleton);
        assert_eq!(m.deepest_sample_indices, vec![3]);
        assert_eq!(m.sample_is_vertex, vec![true]);
    }

    #[test]
    fn verifiers_pass_on_square() {
        let sq = square4();
        let m = tukey_median(&sq).unwrap();
        let b = verify_max_depth_bound(&m, 4, 2);
        assert!(b.pass);
        assert_eq!(b.margin, 0);
        let v = verify_deepest_sample_vertices(&m, &sq);
        assert!(v.pass);
        assert!(v.deepest_samples.is_empty()); // vacuous
        let s = verify_singleton_at_bound(&m, 4, 2);
        assert!(s.applicable && s.pass);
    }

    #[test]
    fn verifiers_pass_on_t4() {
        let c = t4();
        let m = tukey_median(&c).unwrap();
        assert!(verify_max_depth_bound(&m, 4, 2).pass);
        let v = verify_deepest_sample_vertices(&m, &c);
        assert!(v.pass);
        assert_eq!(v.each_is_vertex, vec![true]);
        assert!(verify_singleton_at_bound(&m, 4, 2).pass);
    }

    #[test]
    fn no_center_check_requires_p3() {
        let sq = square4();
        assert!(matches!(
            verify_no_halfspace_center(&sq),
            Err(Error::UnsupportedDimension(2))
        ));
    }

    #[test]
    fn degenerate_cloud_needs_force() {
        let c = cloud(&[&["0", "0"], &["1", "1"], &["2", "2"], &["5", "0"]]);
        assert!(matches!(
            tukey_median(&c),
            Err(Error::NotInGeneralPosition(_))
        ));
        let m = tukey_median_forced(&c).unwrap();
        assert!(m.degenerate);
        assert!(m.kappa_star >= 1);
    }

    #[test]
    fn affine_image_of_square_median() {
        use crate::geometry::affine_transform;
        let sq = square4();
        let a = vec![pt(&["2", "1"]), pt(&["0", "3"])];
        let b = pt(&["-1", "5"]);
        let moved = affine_transform(&sq, &a, &b).unwrap();
        let m = tukey_median(&moved).unwrap();
        // A (0.5, 0.5) + b = (0.5, 6.5)
        assert_eq!(m.median, pt(&["0.5", "6.5"]));
    }
}
