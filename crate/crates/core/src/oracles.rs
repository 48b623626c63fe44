//! Brute-force reference implementations used to check the engines.
//!
//! Nothing here shares algorithmic machinery with the depth or region
//! engines: the exhaustive oracle enumerates representatives of every face
//! of the direction arrangement directly (sectors in the plane, circle arcs
//! and flanking cells on the sphere), and the sampled-direction oracle draws
//! random unit vectors. Counts are always exact; floats only pick candidate
//! directions, never decide a comparison.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::exact::{dot, primitive_integer_vector, sub, Rat};
use crate::geometry::PointCloud;

/// Grid and direction-sampling parameters for the oracles.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub lo: Vec<Rat>,
    pub hi: Vec<Rat>,
    /// Grid positions per axis, at least 2.
    pub resolution: usize,
    /// Sampled directions, at least 1.
    pub directions: usize,
    pub seed: u64,
}

impl GridSpec {
    fn validate(&self, p: usize) -> Result<(), Error> {
        if self.lo.len() != p || self.hi.len() != p {
            return Err(Error::DimensionMismatch { expected: p, got: self.lo.len() });
        }
        if self.resolution < 2 || self.directions < 1 {
            return Err(Error::OracleLimit(
                "need resolution >= 2 and directions >= 1".into(),
            ));
        }
        if self.lo.iter().zip(&self.hi).any(|(a, b)| a >= b) {
            return Err(Error::EmptyBoundingBox);
        }
        Ok(())
    }
}

/// Exact closed-halfspace count of the cloud along one direction.
pub fn closed_count_along(x: &[Rat], cloud: &PointCloud, u: &[Rat]) -> usize {
    let ux = dot(u, x);
    cloud.points().iter().filter(|q| dot(u, q) <= ux).count()
}

/// Minimum closed count over `spec.directions` sampled directions: an upper
/// bound on the exact depth count, since the true depth minimizes over all
/// directions.
pub fn depth_oracle_directions(x: &[Rat], cloud: &PointCloud, spec: &GridSpec) -> usize {
    let p = cloud.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut best = cloud.len();
    let mut sampled = 0;
    while sampled < spec.directions {
        let raw: Vec<f64> = (0..p).map(|_| rng.sample(rand_distr::StandardNormal)).collect();
        if raw.iter().all(|v| *v == 0.0) {
            continue;
        }
        sampled += 1;
        let u: Vec<Rat> = raw
            .iter()
            .map(|v| BigRational::from_float(*v).expect("finite float"))
            .collect();
        best = best.min(closed_count_along(x, cloud, &u));
    }
    best
}

const EXHAUSTIVE_MAX_N: usize = 14;
const EXHAUSTIVE_MAX_P: usize = 3;

/// Exact depth count by full enumeration of the direction arrangement.
/// Limited to p <= 3 and n <= 14; the limits are hard errors.
pub fn depth_oracle_exhaustive(x: &[Rat], cloud: &PointCloud) -> Result<usize, Error> {
    let p = cloud.dim();
    let n = cloud.len();
    if p > EXHAUSTIVE_MAX_P || n > EXHAUSTIVE_MAX_N {
        return Err(Error::OracleLimit(format!(
            "exhaustive oracle limited to p <= {EXHAUSTIVE_MAX_P}, n <= {EXHAUSTIVE_MAX_N}, got p = {p}, n = {n}"
        )));
    }
    if x.len() != p {
        return Err(Error::DimensionMismatch { expected: p, got: x.len() });
    }

    let mut coincident = 0usize;
    let mut diffs: Vec<Vec<BigInt>> = Vec::new();
    for q in cloud.points() {
        let d = sub(q, x);
        if d.iter().all(|v| v.is_zero()) {
            coincident += 1;
        } else {
            diffs.push(primitive_integer_vector(&d));
        }
    }
    if diffs.is_empty() {
        return Ok(n);
    }

    let candidates = match p {
        1 => vec![vec![BigInt::one()], vec![-BigInt::one()]],
        2 => candidates_2d(&diffs),
        _ => candidates_3d(&diffs),
    };
    let best = candidates
        .iter()
        .map(|u| {
            diffs
                .iter()
                .filter(|y| !int_dot(u, y).is_positive())
                .count()
        })
        .min()
        .expect("candidate list is never empty");
    Ok(coincident + best)
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

fn neg(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| -x).collect()
}

/// Angular order of plane vectors: by half-plane, then by cross product.
fn angle_cmp(a: &[BigInt], b: &[BigInt]) -> std::cmp::Ordering {
    let half = |v: &[BigInt]| -> u8 {
        if v[1].is_negative() || (v[1].is_zero() && v[0].is_negative()) {
            1
        } else {
            0
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a[0] * &b[1] - &a[1] * &b[0];
        if cross.is_positive() {
            std::cmp::Ordering::Less
        } else if cross.is_negative() {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    })
}

/// Representatives of every face of the 2-d direction arrangement: the
/// boundary rays of each sector plus one interior direction per sector.
fn candidates_2d(diffs: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    for y in diffs {
        let perp = vec![-y[1].clone(), y[0].clone()];
        let perp = primitive_int_vec(perp);
        rays.push(neg(&perp));
        rays.push(perp);
    }
    rays.sort_by(|a, b| angle_cmp(a, b));
    rays.dedup();
    let mut out = rays.clone();
    for i in 0..rays.len() {
        let a = &rays[i];
        let b = &rays[(i + 1) % rays.len()];
        let mid: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        if mid.iter().all(|v| v.is_zero()) {
            // Antipodal neighbours: the sector is a half-plane; take the
            // quarter-turn interior direction.
            out.push(vec![-a[1].clone(), a[0].clone()]);
        } else {
            out.push(mid);
        }
    }
    out
}

fn primitive_int_vec(mut v: Vec<BigInt>) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut g = BigInt::zero();
    for x in &v {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

fn cross3(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Representatives of every face of the 3-d direction arrangement: all
/// pairwise circle crossings (vertices), one direction inside every arc
/// between consecutive crossings on each circle, and both tilts of each arc
/// representative into the flanking full-dimensional cells.
fn candidates_3d(diffs: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    // Each difference vector defines the great circle of directions
    // orthogonal to it; dedupe up to sign.
    let mut lines: Vec<Vec<BigInt>> = diffs
        .iter()
        .map(|y| {
            let mut v = primitive_int_vec(y.clone());
            if v.iter().find(|x| !x.is_zero()).unwrap().is_negative() {
                v = neg(&v);
            }
            v
        })
        .collect();
    lines.sort();
    lines.dedup();

    if lines.len() == 1 {
        let c = &lines[0];
        let axis = if !c[0].is_zero() || !c[1].is_zero() {
            vec![BigInt::zero(), BigInt::zero(), BigInt::one()]
        } else {
            vec![BigInt::one(), BigInt::zero(), BigInt::zero()]
        };
        let on_circle = cross3(c, &axis);
        return vec![c.clone(), neg(c), on_circle];
    }

    let mut vertices: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let v = cross3(&lines[i], &lines[j]);
            if v.iter().all(|x| x.is_zero()) {
                continue;
            }
            let v = primitive_int_vec(v);
            vertices.push(neg(&v));
            vertices.push(v);
        }
    }
    vertices.sort();
    vertices.dedup();

    let mut candidates = vertices.clone();
    for c in &lines {
        let on_c: Vec<&Vec<BigInt>> = vertices.iter().filter(|v| int_dot(c, v).is_zero()).collect();
        if on_c.is_empty() {
            continue; // distinct great circles always cross; unreachable
        }
        // Order the crossings around the circle in the frame (a, b).
        let a = on_c[0].clone();
        let b = cross3(c, &a);
        let mut framed: Vec<(Vec<BigInt>, Vec<BigInt>)> = on_c
            .iter()
            .map(|v| {
                let coords = vec![int_dot(v, &a), int_dot(v, &b)];
                (coords, (*v).clone())
            })
            .collect();
        framed.sort_by(|x, y| angle_cmp(&x.0, &y.0));

        let mut arc_reps: Vec<Vec<BigInt>> = Vec::new();
        for i in 0..framed.len() {
            let v1 = &framed[i].1;
            let v2 = &framed[(i + 1) % framed.len()].1;
            let mid: Vec<BigInt> = v1.iter().zip(v2).map(|(x, y)| x + y).collect();
            if mid.iter().all(|x| x.is_zero()) {
                arc_reps.push(cross3(c, v1));
            } else {
                arc_reps.push(mid);
            }
        }

        for m in arc_reps {
            let m = primitive_int_vec(m);
            candidates.push(m.clone());
            // Tilt off the circle into the two adjacent cells, keeping every
            // other product's sign.
            let mut ratio: Option<Rat> = None;
            for y in diffs {
                let along = int_dot(c, y);
                let at = int_dot(&m, y);
                if along.is_zero() || at.is_zero() {
                    continue;
                }
                let r = Rat::new(at.abs(), along.abs());
                if ratio.as_ref().map_or(true, |cur| r < *cur) {
                    ratio = Some(r);
                }
            }
            let t = ratio.map_or_else(Rat::one, |r| r / Rat::from(BigInt::from(2)));
            for sign in [1i64, -1] {
                let tilt: Vec<Rat> = m
                    .iter()
                    .zip(c)
                    .map(|(mi, ci)| {
                        Rat::from(mi.clone())
                            + Rat::from(BigInt::from(sign)) * &t * Rat::from(ci.clone())
                    })
                    .collect();
                candidates.push(primitive_integer_vector(&tilt));
            }
        }
    }
    candidates
}

/// Outcome of the grid scan for the deepest region.
#[derive(Debug, Clone)]
pub struct GridMedian {
    pub max_kappa: usize,
    /// Grid points attaining the maximum.
    pub argmax_cells: Vec<Vec<Rat>>,
    pub used_engine: bool,
}

/// Evaluate the depth at every grid point and report the maximum and its
/// argmax cells. Uses the exhaustive oracle within its limits; with
/// `use_engine` the engine evaluates instead (flagged in the result).
pub fn median_oracle_grid(
    cloud: &PointCloud,
    spec: &GridSpec,
    use_engine: bool,
) -> Result<GridMedian, Error> {
    let p = cloud.dim();
    if p > EXHAUSTIVE_MAX_P {
        return Err(Error::OracleLimit(format!(
            "grid oracle limited to p <= {EXHAUSTIVE_MAX_P}, got {p}"
        )));
    }
    spec.validate(p)?;
    if !use_engine && cloud.len() > EXHAUSTIVE_MAX_N {
        return Err(Error::OracleLimit(format!(
            "exhaustive oracle limited to n <= {EXHAUSTIVE_MAX_N}; pass use_engine for larger clouds"
        )));
    }

    let steps: Vec<Vec<Rat>> = (0..p)
        .map(|j| {
            let span = &spec.hi[j] - &spec.lo[j];
            let denom = Rat::from(BigInt::from((spec.resolution - 1) as i64));
            (0..spec.resolution)
                .map(|i| &spec.lo[j] + &span * Rat::from(BigInt::from(i as i64)) / &denom)
                .collect()
        })
        .collect();

    let mut max_kappa = 0usize;
    let mut argmax: Vec<Vec<Rat>> = Vec::new();
    let mut index = vec![0usize; p];
    loop {
        let point: Vec<Rat> = (0..p).map(|j| steps[j][index[j]].clone()).collect();
        let kappa = if use_engine {
            crate::depth::tukey_depth_forced(&point, cloud)?.depth.kappa
        } else {
            depth_oracle_exhaustive(&point, cloud)?
        };
        if kappa > max_kappa {
            max_kappa = kappa;
            argmax.clear();
        }
        if kappa == max_kappa {
            argmax.push(point);
        }
        // Advance the mixed-radix counter.
        let mut j = 0;
        loop {
            if j == p {
                return Ok(GridMedian { max_kappa, argmax_cells: argmax, used_engine: use_engine });
            }
            index[j] += 1;
            if index[j] < spec.resolution {
                break;
            }
            index[j] = 0;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_decimal;

    fn r(s: &str) -> Rat {
        parse_decimal(s).unwrap()
    }

    fn pt(strs: &[&str]) -> Vec<Rat> {
        strs.iter().map(|s| r(s)).collect()
    }

    fn cloud(strs: &[&[&str]]) -> PointCloud {
        PointCloud::new(strs.iter().map(|row| pt(row)).collect()).unwrap()
    }

    fn square4() -> PointCloud {
        cloud(&[&["0", "0"], &["1", "0"], &["0", "1"], &["1", "1"]])
    }

    fn spec(lo: &[&str], hi: &[&str], res: usize, dirs: usize, seed: u64) -> GridSpec {
        GridSpec { lo: pt(lo), hi: pt(hi), resolution: res, directions: dirs, seed }
    }

    #[test]
    fn exhaustive_square_center_and_corners() {
        let sq = square4();
        assert_eq!(depth_oracle_exhaustive(&pt(&["0.5", "0.5"]), &sq).unwrap(), 2);
        assert_eq!(depth_oracle_exhaustive(&pt(&["0", "0"]), &sq).unwrap(), 1);
        assert_eq!(depth_oracle_exhaustive(&pt(&["10", "10"]), &sq).unwrap(), 0);
    }

    #[test]
    fn exhaustive_t4_interior_sample() {
        let t4 = cloud(&[&["0", "0"], &["4", "0"], &["2", "4"], &["2", "1.5"]]);
        assert_eq!(depth_oracle_exhaustive(&pt(&["2", "1.5"]), &t4).unwrap(), 2);
    }

    #[test]
    fn exhaustive_3d_tetra_center() {
        let tc = cloud(&[
            &["1", "1", "1"],
            &["1", "-1", "-1"],
            &["-1", "1", "-1"],
            &["-1", "-1", "1"],
            &["0", "0", "0"],
        ]);
        assert_eq!(depth_oracle_exhaustive(&pt(&["0", "0", "0"]), &tc).unwrap(), 2);
        assert_eq!(depth_oracle_exhaustive(&pt(&["1", "1", "1"]), &tc).unwrap(), 1);
        assert_eq!(depth_oracle_exhaustive(&pt(&["5", "5", "5"]), &tc).unwrap(), 0);
    }

    #[test]
    fn exhaustive_respects_limits() {
        let big = gen_big();
        assert!(matches!(
            depth_oracle_exhaustive(&pt(&["0", "0"]), &big),
            Err(Error::OracleLimit(_))
        ));
    }

    fn gen_big() -> PointCloud {
        let pts: Vec<Vec<Rat>> = (0..15)
            .map(|i| vec![Rat::from(BigInt::from(i)), Rat::from(BigInt::from(i * i))])
            .collect();
        PointCloud::new(pts).unwrap()
    }

    #[test]
    fn direction_oracle_upper_bounds_exact() {
        let sq = square4();
        let s = spec(&["0", "0"], &["1", "1"], 2, 2000, 42);
        let approx = depth_oracle_directions(&pt(&["0.5", "0.5"]), &sq, &s);
        assert_eq!(approx, 2); // enough directions to hit the diagonal sector
        let outside = depth_oracle_directions(&pt(&["10", "10"]), &sq, &s);
        assert_eq!(outside, 0);
    }

    #[test]
    fn single_direction_count_matches_rank() {
        let sq = square4();
        // Along e1 the closed count at x = (0.6, 0) is the number of points
        // with first coordinate <= 0.6.
        assert_eq!(closed_count_along(&pt(&["0.6", "0"]), &sq, &pt(&["1", "0"])), 2);
    }

    #[test]
    fn grid_scan_locates_the_center() {
        let sq = square4();
        let s = spec(&["-0.5", "-0.5"], &["1.5", "1.5"], 9, 1, 0);
        let g = median_oracle_grid(&sq, &s, false).unwrap();
        assert_eq!(g.max_kappa, 2);
        assert!(g.argmax_cells.contains(&pt(&["0.5", "0.5"])));
        assert!(!g.used_engine);
    }

    #[test]
    fn grid_scan_rejects_empty_box() {
        let sq = square4();
        let s = spec(&["1", "0"], &["0", "1"], 5, 1, 0);
        assert!(matches!(
            median_oracle_grid(&sq, &s, false),
            Err(Error::EmptyBoundingBox)
        ));
    }
}
