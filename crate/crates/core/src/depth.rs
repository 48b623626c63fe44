//! Exact Tukey halfspace depth of arbitrary query points.
//!
//! The depth of x is n times the minimum, over all directions u, of the
//! fraction of sample points in the closed halfspace {y : u.y <= u.x}. That
//! minimum is a piecewise-constant function of u whose cells are cut out by
//! the hyperplanes {u : u.(X_i - x) = 0}; it is attained at a direction
//! normal to a hyperplane through x and p-1 sample points, after an
//! infinitesimal rotation that clears removable on-hyperplane points.
//!
//! `min_closed_count` implements that search recursively and exactly: it
//! enumerates candidate normals from (d-1)-subsets of the difference
//! vectors, counts strict sides in integer arithmetic, and recurses on the
//! points left on the candidate hyperplane to decide how many of them any
//! rotation must keep. The returned witness direction is an exact rational
//! vector whose closed count equals the reported depth; callers re-verify
//! that equality.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::Error;
use crate::exact::{add_scaled, dot, int_sign, primitive_integer_vector, sub, Rat};
use crate::geometry::PointCloud;
use crate::linalg;

/// Exact depth as a count: the point's depth is `kappa / n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DepthValue {
    pub kappa: usize,
    pub n: usize,
}

impl DepthValue {
    pub fn lambda(&self) -> Rat {
        Rat::new(BigInt::from(self.kappa as i64), BigInt::from(self.n as i64))
    }
}

/// A nonzero direction vector. Only the sign pattern of inner products
/// matters, so directions are kept in primitive integer form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Direction {
    pub vector: Vec<Rat>,
}

impl Direction {
    pub fn from_ints(ints: &[BigInt]) -> Self {
        Direction {
            vector: ints.iter().map(|x| Rat::from(x.clone())).collect(),
        }
    }
}

/// Result of a depth query.
#[derive(Debug, Clone)]
pub struct DepthOutcome {
    pub depth: DepthValue,
    /// A direction attaining the minimum: the closed count of the cloud
    /// against the hyperplane through the query with this normal equals
    /// `depth.kappa` exactly.
    pub witness: Direction,
    /// Set when the cloud violates general position and the query was
    /// forced; the combinatorial guarantees then no longer apply, but the
    /// reported count is still the exact minimum.
    pub degenerate: bool,
}

use crate::linalg::{cofactor_normal, int_dot, primitive_int as primitive};

/// Minimum over all u != 0 of `#{i : u . y_i <= 0}` for nonzero integer
/// vectors `y_i`, together with a witness attaining it. Returns count 0 and a
/// zero witness for an empty input (no constraint to satisfy).
fn min_closed_count(vectors: &[Vec<BigInt>], dim: usize) -> (usize, Vec<BigInt>) {
    if vectors.is_empty() {
        return (0, vec![BigInt::zero(); dim]);
    }
    debug_assert!(vectors.iter().all(|y| y.iter().any(|x| !x.is_zero())));

    // Components of u orthogonal to span(y_i) never change a single product,
    // so a rank-deficient family is solved inside its own span.
    let basis_idx = linalg::independent_subset_int(vectors);
    let rank = basis_idx.len();
    if rank < dim {
        let basis: Vec<&Vec<BigInt>> = basis_idx.iter().map(|&i| &vectors[i]).collect();
        let reduced: Vec<Vec<BigInt>> = vectors
            .iter()
            .map(|y| primitive(basis.iter().map(|b| int_dot(b, y)).collect()))
            .collect();
        debug_assert!(reduced.iter().all(|y| y.iter().any(|x| !x.is_zero())));
        let (count, w_red) = min_closed_count(&reduced, rank);
        // Pull the reduced witness back into the ambient space.
        let mut w = vec![BigInt::zero(); dim];
        for (c, b) in w_red.iter().zip(&basis) {
            for (acc, x) in w.iter_mut().zip(b.iter()) {
                *acc += c * x;
            }
        }
        return (count, primitive(w));
    }

    if dim == 1 {
        let neg = vectors.iter().filter(|y| y[0].is_negative()).count();
        let pos = vectors.len() - neg;
        // u = +1 keeps the negatives in the closed side, u = -1 the positives.
        return if pos < neg {
            (pos, vec![BigInt::from(-1)])
        } else {
            (neg, vec![BigInt::from(1)])
        };
    }

    // Full rank, dim >= 2: every minimizing direction can be reached from a
    // normal of some (dim-1)-subset span, perturbed inside that hyperplane.
    // The scan tracks (count, candidate normal, on-set); the witness rotation
    // is reconstructed once, for the winner only.
    let subsets: Vec<Vec<usize>> = (0..vectors.len()).combinations(dim - 1).collect();
    let best = subsets
        .par_iter()
        .filter_map(|subset| {
            let rows: Vec<Vec<BigInt>> = subset.iter().map(|&i| vectors[i].clone()).collect();
            let normal = cofactor_normal(&rows, dim);
            if normal.iter().all(|x| x.is_zero()) {
                return None; // dependent subset; not an arrangement vertex
            }
            let normal = primitive(normal);
            let mut neg = 0usize;
            let mut pos = 0usize;
            let mut on_idx: Vec<usize> = Vec::new();
            for (i, y) in vectors.iter().enumerate() {
                match int_sign(&int_dot(&normal, y)) {
                    -1 => neg += 1,
                    0 => on_idx.push(i),
                    _ => pos += 1,
                }
            }
            // A spanning on-set of exactly dim - 1 vectors is independent, so
            // a rotation clears all of it; otherwise recurse for the count.
            let extra = if on_idx.len() == dim - 1 {
                0
            } else {
                let on_vecs: Vec<Vec<BigInt>> =
                    on_idx.iter().map(|&i| vectors[i].clone()).collect();
                min_closed_count(&on_vecs, dim).0
            };
            let mut local: Option<Cand> = None;
            for flip in [false, true] {
                let u: Vec<BigInt> = if flip {
                    normal.iter().map(|x| -x).collect()
                } else {
                    normal.clone()
                };
                let count = if flip { pos } else { neg } + extra;
                let cand = Cand { count, u, on_idx: on_idx.clone() };
                if local.as_ref().map_or(true, |c| cand.beats(c)) {
                    local = Some(cand);
                }
            }
            local
        })
        .reduce_with(|a, b| if b.beats(&a) { b } else { a })
        .expect("full-rank family has at least one spanning subset");

    let witness = reconstruct_witness(&best, vectors, dim);
    debug_assert_eq!(
        vectors
            .iter()
            .filter(|y| !int_dot(&witness, y).is_positive())
            .count(),
        best.count
    );
    (best.count, witness)
}

struct Cand {
    count: usize,
    u: Vec<BigInt>,
    on_idx: Vec<usize>,
}

impl Cand {
    fn beats(&self, other: &Cand) -> bool {
        self.count < other.count || (self.count == other.count && self.u < other.u)
    }
}

/// Rotate the winning candidate normal so that its achievable count is
/// realized exactly: the on-set resolves to the recursive optimum and every
/// strict side is preserved.
fn reconstruct_witness(best: &Cand, vectors: &[Vec<BigInt>], dim: usize) -> Vec<BigInt> {
    if best.on_idx.is_empty() {
        return best.u.clone();
    }
    let on_vecs: Vec<Vec<BigInt>> = best.on_idx.iter().map(|&i| vectors[i].clone()).collect();
    let (_, shift) = min_closed_count(&on_vecs, dim);
    if shift.iter().all(|x| x.is_zero()) {
        return best.u.clone();
    }
    let products: Vec<(usize, BigInt)> = vectors
        .iter()
        .enumerate()
        .map(|(i, y)| (i, int_dot(&best.u, y)))
        .collect();
    perturbed_witness(&best.u, &shift, &products, vectors)
}

/// Rotate `u` by a small exact multiple of `shift`: large enough to resolve
/// the on-hyperplane products to the sign of `shift . y_i`, small enough to
/// preserve every strict sign.
fn perturbed_witness(
    u: &[BigInt],
    shift: &[BigInt],
    products: &[(usize, BigInt)],
    vectors: &[Vec<BigInt>],
) -> Vec<BigInt> {
    let mut eps: Option<Rat> = None;
    for (i, s) in products {
        if s.is_zero() {
            continue;
        }
        let d = int_dot(shift, &vectors[*i]);
        if d.is_zero() {
            continue;
        }
        let ratio = Rat::new(s.abs(), d.abs());
        if eps.as_ref().map_or(true, |e| ratio < *e) {
            eps = Some(ratio);
        }
    }
    let eps = eps.map_or_else(Rat::one, |e| e / Rat::from(BigInt::from(2)));
    let rat: Vec<Rat> = u
        .iter()
        .zip(shift)
        .map(|(a, b)| Rat::from(a.clone()) + &eps * Rat::from(b.clone()))
        .collect();
    primitive_integer_vector(&rat)
}

/// Integer form of a depth query: query diffs share the positive factor
/// `1 / (D xd)` with the true differences, so all signs agree.
struct QueryInts {
    /// `Z_i xd - xn D` per sample point; zero iff the point coincides with x.
    diffs: Vec<Vec<BigInt>>,
    xn: Vec<BigInt>,
    xd: BigInt,
}

fn query_ints(x: &[Rat], cloud: &PointCloud) -> QueryInts {
    use num_integer::Integer;
    let scaled = cloud.scaled();
    let mut xd = BigInt::one();
    for c in x {
        xd = xd.lcm(c.denom());
    }
    let xn: Vec<BigInt> = x.iter().map(|c| c.numer() * (&xd / c.denom())).collect();
    let xn_d: Vec<BigInt> = xn.iter().map(|v| v * &scaled.denom).collect();
    let diffs = scaled
        .ints
        .iter()
        .map(|z| {
            z.iter()
                .zip(&xn_d)
                .map(|(zi, xi)| zi * &xd - xi)
                .collect()
        })
        .collect();
    QueryInts { diffs, xn, xd }
}

/// Scan all candidate directions for the query. Returns the best achievable
/// (count without coincident points, raw normal, on-set indices); with
/// `stop_below`, returns early once any candidate achieves a count under it.
fn kernel_scan(
    q: &QueryInts,
    cloud: &PointCloud,
    live: &[usize],
    stop_below: Option<usize>,
) -> Cand {
    let p = cloud.dim();
    let scaled = cloud.scaled();
    let kernel = cloud.normal_kernel();
    let xn_big = &q.xn;
    let denom = &scaled.denom;

    let scan_subset = |sk: &crate::geometry::SubsetKernel| -> Option<Cand> {
        let w = &q.diffs[sk.anchor];
        if w.iter().all(|v| v.is_zero()) {
            return None; // anchor coincides with the query
        }
        let u = crate::linalg::int_mat_vec(&sk.coeff, w);
        if u.iter().all(|v| v.is_zero()) {
            return None; // degenerate subset relative to the query
        }
        // sign(u . (X_i - x)) = sign(xd (u . Z_i) - D (u . xn))
        let shift = int_dot(&u, xn_big) * denom;
        let mut neg = 0usize;
        let mut pos = 0usize;
        // Positions into `live`, so the winner indexes the compacted diffs.
        let mut on_idx: Vec<usize> = Vec::new();
        for (pos_in_live, &i) in live.iter().enumerate() {
            let s = int_dot(&u, &scaled.ints[i]) * &q.xd - &shift;
            match int_sign(&s) {
                -1 => neg += 1,
                0 => on_idx.push(pos_in_live),
                _ => pos += 1,
            }
        }
        let extra = if on_idx.len() == p - 1 {
            0
        } else {
            let on_vecs: Vec<Vec<BigInt>> = on_idx
                .iter()
                .map(|&pos_in_live| primitive(q.diffs[live[pos_in_live]].clone()))
                .collect();
            min_closed_count(&on_vecs, p).0
        };
        let mut local: Option<Cand> = None;
        for flip in [false, true] {
            let u: Vec<BigInt> = if flip { u.iter().map(|v| -v).collect() } else { u.clone() };
            let count = if flip { pos } else { neg } + extra;
            let cand = Cand { count, u, on_idx: on_idx.clone() };
            if local.as_ref().map_or(true, |c| cand.beats(c)) {
                local = Some(cand);
            }
        }
        local
    };

    if let Some(limit) = stop_below {
        // Sequential scan with early exit: any witness under the limit will do.
        let mut best: Option<Cand> = None;
        for sk in &kernel.subsets {
            if let Some(cand) = scan_subset(sk) {
                if cand.count < limit {
                    return cand;
                }
                if best.as_ref().map_or(true, |c| cand.beats(c)) {
                    best = Some(cand);
                }
            }
        }
        best.expect("full-rank query has at least one candidate")
    } else {
        kernel
            .subsets
            .par_iter()
            .filter_map(scan_subset)
            .reduce_with(|a, b| if b.beats(&a) { b } else { a })
            .expect("full-rank query has at least one candidate")
    }
}

struct DepthComputation {
    kappa: usize,
    witness: Vec<BigInt>,
    degenerate: bool,
}

fn depth_compute(
    x: &[Rat],
    cloud: &PointCloud,
    force: bool,
    stop_below: Option<usize>,
) -> Result<DepthComputation, Error> {
    let p = cloud.dim();
    let n = cloud.len();
    if x.len() != p {
        return Err(Error::DimensionMismatch { expected: p, got: x.len() });
    }
    let degenerate = match cloud.general_position() {
        Ok(()) => false,
        Err(witness) => {
            if !force {
                return Err(Error::NotInGeneralPosition(witness));
            }
            true
        }
    };

    let q = query_ints(x, cloud);
    let live: Vec<usize> = (0..n)
        .filter(|&i| q.diffs[i].iter().any(|v| !v.is_zero()))
        .collect();
    let coincident = n - live.len();

    if live.is_empty() {
        let mut e1 = vec![BigInt::zero(); p];
        e1[0] = BigInt::one();
        return Ok(DepthComputation { kappa: n, witness: e1, degenerate });
    }

    let live_diffs: Vec<Vec<BigInt>> = live.iter().map(|&i| primitive(q.diffs[i].clone())).collect();
    let full_rank = p >= 2 && linalg::rank_int(&live_diffs) == p;

    let (kappa, witness) = if !full_rank {
        // p = 1, or every difference lies in a proper subspace: the generic
        // recursive search handles both.
        let (count, w) = min_closed_count(&live_diffs, p);
        (coincident + count, w)
    } else {
        let adjusted_stop = stop_below.map(|k| k.saturating_sub(coincident));
        let best = kernel_scan(&q, cloud, &live, adjusted_stop);
        let witness = reconstruct_witness(&best, &live_diffs, p);
        (coincident + best.count, witness)
    };

    // Cross-check the witness: its exact closed count must equal kappa.
    let recount = coincident
        + live_diffs
            .iter()
            .filter(|y| !int_dot(&witness, y).is_positive())
            .count();
    if recount != kappa {
        return Err(Error::Internal(format!(
            "witness count {recount} does not match depth {kappa}"
        )));
    }

    Ok(DepthComputation { kappa, witness, degenerate })
}

fn depth_inner(x: &[Rat], cloud: &PointCloud, force: bool) -> Result<DepthOutcome, Error> {
    let out = depth_compute(x, cloud, force, None)?;
    Ok(DepthOutcome {
        depth: DepthValue { kappa: out.kappa, n: cloud.len() },
        witness: Direction::from_ints(&out.witness),
        degenerate: out.degenerate,
    })
}

/// Outcome of a thresholded depth check.
pub(crate) enum DepthCheck {
    /// Certified: the exact depth count of the point.
    Deep { kappa: usize },
    /// Refuted, with a direction whose closed count at the point is below
    /// the threshold. The scan exits early, so refuting is cheap.
    Shallow { witness: Direction },
}

/// Does x reach depth count `kappa`?
pub(crate) fn depth_check(
    x: &[Rat],
    cloud: &PointCloud,
    kappa: usize,
) -> Result<DepthCheck, Error> {
    let out = depth_compute(x, cloud, true, Some(kappa))?;
    if out.kappa >= kappa {
        Ok(DepthCheck::Deep { kappa: out.kappa })
    } else {
        Ok(DepthCheck::Shallow { witness: Direction::from_ints(&out.witness) })
    }
}

/// Exact Tukey depth of `x` with respect to the cloud, with a witness
/// direction attaining it. Refuses clouds that violate general position.
pub fn tukey_depth(x: &[Rat], cloud: &PointCloud) -> Result<DepthOutcome, Error> {
    depth_inner(x, cloud, false)
}

/// Like [`tukey_depth`] but proceeds on degenerate clouds, marking the
/// outcome. The count is still the exact minimum closed-halfspace count.
pub fn tukey_depth_forced(x: &[Rat], cloud: &PointCloud) -> Result<DepthOutcome, Error> {
    depth_inner(x, cloud, true)
}

/// Depths of every sample point, plus the set attaining the maximum.
#[derive(Debug, Clone)]
pub struct SampleDepths {
    /// Depth of sample i, in index order.
    pub depths: Vec<DepthValue>,
    /// Indices attaining the maximum sample depth.
    pub deepest: Vec<usize>,
}

impl SampleDepths {
    pub fn max_kappa(&self) -> usize {
        self.depths[self.deepest[0]].kappa
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, DepthValue)> + '_ {
        self.depths.iter().copied().enumerate()
    }
}

fn sample_depths_inner(cloud: &PointCloud, force: bool) -> Result<SampleDepths, Error> {
    let depths: Vec<DepthValue> = (0..cloud.len())
        .into_par_iter()
        .map(|i| depth_inner(cloud.point(i), cloud, force).map(|o| o.depth))
        .collect::<Result<_, _>>()?;
    let max = depths.iter().map(|d| d.kappa).max().expect("nonempty cloud");
    let deepest = depths
        .iter()
        .enumerate()
        .filter(|(_, d)| d.kappa == max)
        .map(|(i, _)| i)
        .collect();
    Ok(SampleDepths { depths, deepest })
}

/// Depth of every sample point. Sample points always have kappa >= 1: the
/// point itself sits in each of its own closed halfspaces.
pub fn depth_all_samples(cloud: &PointCloud) -> Result<SampleDepths, Error> {
    sample_depths_inner(cloud, false)
}

pub fn depth_all_samples_forced(cloud: &PointCloud) -> Result<SampleDepths, Error> {
    sample_depths_inner(cloud, true)
}

/// Is the empirical distribution halfspace symmetric about `theta`?
///
/// Holds iff every closed halfspace with `theta` on its boundary carries at
/// least half the sample, i.e. n D(theta) >= ceil(n/2). Works on any cloud.
pub fn halfspace_symmetric(cloud: &PointCloud, theta: &[Rat]) -> Result<bool, Error> {
    let out = tukey_depth_forced(theta, cloud)?;
    Ok(out.depth.kappa >= cloud.len().div_ceil(2))
}

/// Tilt `u` away from the span of the on-points so that every on-point moves
/// strictly above the anchor `z` while every off-point keeps its exact side.
///
/// Writing v'' for the component of `z - X_{j_1}` orthogonal to the on-point
/// difference span, the result is `u - eps * v''` with
/// `eps = (1/2) min |u.(z - X_l)| / |v''.(z - X_l)|` over off-points l (a
/// ratio with zero denominator counts as infinite). Both guarantees are
/// re-checked exactly after construction.
pub fn perturb_direction(
    u: &Direction,
    z: &[Rat],
    on_indices: &[usize],
    cloud: &PointCloud,
) -> Result<Direction, Error> {
    let p = cloud.dim();
    if z.len() != p || u.vector.len() != p {
        return Err(Error::DimensionMismatch { expected: p, got: z.len() });
    }
    for &j in on_indices {
        if j >= cloud.len() {
            return Err(Error::IndexOutOfRange(j));
        }
    }
    if on_indices.is_empty() {
        return Ok(u.clone());
    }

    let anchor_last = cloud.point(*on_indices.last().unwrap());
    let span_rows: Vec<Vec<Rat>> = on_indices[..on_indices.len() - 1]
        .iter()
        .map(|&j| sub(cloud.point(j), anchor_last))
        .collect();
    let independent: Vec<Vec<Rat>> = {
        let idx = linalg::independent_subset(&span_rows);
        idx.into_iter().map(|i| span_rows[i].clone()).collect()
    };
    let v1 = sub(z, cloud.point(on_indices[0]));
    let proj = linalg::project_onto_span(&v1, &independent);
    let residual = sub(&v1, &proj);
    if residual.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroResidual);
    }

    let mut eps: Option<Rat> = None;
    for l in 0..cloud.len() {
        if on_indices.contains(&l) {
            continue;
        }
        let zl = sub(z, cloud.point(l));
        let denom = dot(&residual, &zl);
        if denom.is_zero() {
            continue; // infinite ratio, never the minimum
        }
        let numer = dot(&u.vector, &zl);
        let ratio = (numer / &denom).abs();
        if eps.as_ref().map_or(true, |e| ratio < *e) {
            eps = Some(ratio);
        }
    }
    let eps = eps.map_or_else(Rat::one, |e| e / Rat::from(BigInt::from(2)));

    let tilted = add_scaled(&u.vector, &(-eps), &residual);

    // (a) off-points keep their exact side; (b) on-points end strictly above.
    for l in 0..cloud.len() {
        let zl = sub(z, cloud.point(l));
        if on_indices.contains(&l) {
            if !dot(&tilted, &zl).is_negative() {
                return Err(Error::SignPreservationFailed);
            }
        } else {
            let before = dot(&u.vector, &zl);
            let after = dot(&tilted, &zl);
            let same = (before.is_zero() && after.is_zero())
                || (before.is_positive() && after.is_positive())
                || (before.is_negative() && after.is_negative());
            if !same {
                return Err(Error::SignPreservationFailed);
            }
        }
    }

    Ok(Direction { vector: tilted })
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

    fn t4() -> PointCloud {
        cloud(&[&["0", "0"], &["4", "0"], &["2", "4"], &["2", "1.5"]])
    }

    fn closed_count(cloud: &PointCloud, x: &[Rat], u: &[Rat]) -> usize {
        let ux = dot(u, x);
        cloud
            .points()
            .iter()
            .filter(|q| dot(u, q) <= ux)
            .count()
    }

    #[test]
    fn depth_center_of_square() {
        let sq = square4();
        let out = tukey_depth(&pt(&["0.5", "0.5"]), &sq).unwrap();
        assert_eq!(out.depth, DepthValue { kappa: 2, n: 4 });
        assert!(!out.degenerate);
        assert_eq!(closed_count(&sq, &pt(&["0.5", "0.5"]), &out.witness.vector), 2);
    }

    #[test]
    fn depth_hull_vertex_is_one() {
        let sq = square4();
        let out = tukey_depth(&pt(&["0", "0"]), &sq).unwrap();
        assert_eq!(out.depth.kappa, 1);
    }

    #[test]
    fn depth_outside_hull_is_zero() {
        let sq = square4();
        let out = tukey_depth(&pt(&["10", "10"]), &sq).unwrap();
        assert_eq!(out.depth.kappa, 0);
    }

    #[test]
    fn depth_interior_sample_of_t4() {
        let c = t4();
        let out = tukey_depth(&pt(&["2", "1.5"]), &c).unwrap();
        assert_eq!(out.depth, DepthValue { kappa: 2, n: 4 });
    }

    #[test]
    fn depth_univariate_median_point() {
        let c = cloud(&[&["0"], &["1"], &["2"]]);
        assert_eq!(tukey_depth(&pt(&["1"]), &c).unwrap().depth.kappa, 2);
        assert_eq!(tukey_depth(&pt(&["0"]), &c).unwrap().depth.kappa, 1);
        assert_eq!(tukey_depth(&pt(&["0.5"]), &c).unwrap().depth.kappa, 1);
        assert_eq!(tukey_depth(&pt(&["-3"]), &c).unwrap().depth.kappa, 0);
    }

    #[test]
    fn depth_refuses_degenerate_without_force() {
        let c = cloud(&[&["0", "0"], &["1", "1"], &["2", "2"], &["5", "0"]]);
        assert!(matches!(
            tukey_depth(&pt(&["1", "1"]), &c),
            Err(Error::NotInGeneralPosition(_))
        ));
        let out = tukey_depth_forced(&pt(&["1", "1"]), &c).unwrap();
        assert!(out.degenerate);
        // (1,1) is a sample point on the line through three samples: the
        // closed count along the collinear direction keeps it plus one end.
        assert_eq!(out.depth.kappa, 2);
    }

    #[test]
    fn all_sample_depths_square_and_t4() {
        let sq = square4();
        let d = depth_all_samples(&sq).unwrap();
        assert!(d.depths.iter().all(|v| v.kappa == 1));
        assert_eq!(d.deepest, vec![0, 1, 2, 3]);

        let c = t4();
        let d = depth_all_samples(&c).unwrap();
        assert_eq!(
            d.depths.iter().map(|v| v.kappa).collect::<Vec<_>>(),
            vec![1, 1, 1, 2]
        );
        assert_eq!(d.deepest, vec![3]);
        assert_eq!(d.max_kappa(), 2);
    }

    #[test]
    fn simplex_corners_have_depth_one() {
        let c = cloud(&[&["0", "0"], &["1", "0"], &["0", "1"]]);
        let d = depth_all_samples(&c).unwrap();
        assert!(d.depths.iter().all(|v| v.kappa == 1));
    }

    #[test]
    fn halfspace_symmetry_examples() {
        let sq = square4();
        assert!(halfspace_symmetric(&sq, &pt(&["0.5", "0.5"])).unwrap());
        assert!(!halfspace_symmetric(&sq, &pt(&["0", "0"])).unwrap());
    }

    #[test]
    fn perturb_clears_on_points_and_keeps_sides() {
        let sq = square4();
        let u = Direction { vector: pt(&["0", "1"]) };
        let z = pt(&["0.5", "-0.25"]);
        let tilted = perturb_direction(&u, &z, &[0, 1], &sq).unwrap();
        for j in [0usize, 1] {
            assert!(dot(&tilted.vector, &sub(&z, sq.point(j))).is_negative());
        }
        for j in [2usize, 3] {
            let before = dot(&u.vector, &sub(&z, sq.point(j)));
            let after = dot(&tilted.vector, &sub(&z, sq.point(j)));
            assert_eq!(before.is_negative(), after.is_negative());
        }
    }

    #[test]
    fn perturb_empty_on_set_is_identity() {
        let sq = square4();
        let u = Direction { vector: pt(&["1", "2"]) };
        let out = perturb_direction(&u, &pt(&["0.3", "0.3"]), &[], &sq).unwrap();
        assert_eq!(out.vector, u.vector);
    }

    #[test]
    fn perturb_zero_residual_errors() {
        let sq = square4();
        let u = Direction { vector: pt(&["0", "1"]) };
        // z equals the single on-point: residual of a zero vector is zero.
        assert_eq!(
            perturb_direction(&u, &pt(&["0", "0"]), &[0], &sq),
            Err(Error::ZeroResidual)
        );
    }

    #[test]
    fn witness_is_deterministic() {
        let sq = square4();
        let a = tukey_depth(&pt(&["0.5", "0.5"]), &sq).unwrap();
        for _ in 0..5 {
            let b = tukey_depth(&pt(&["0.5", "0.5"]), &sq).unwrap();
            assert_eq!(a.witness, b.witness);
        }
    }
}
