//! Exact geometric primitives: point clouds, hyperplanes, side counts, and
//! the general-position precondition every depth computation relies on.
//!
//! A cloud of n points in R^p is *in general position* when no hyperplane
//! contains more than p of them, i.e. every (p+1)-subset is affinely
//! independent. All predicates here are decided in exact integer arithmetic
//! after clearing denominators once per cloud.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::sync::OnceLock;

use crate::error::Error;
use crate::exact::{dot, int_sign, primitive_integer_vector, sub, Rat};
use crate::linalg;

/// An ordered sample of `n` points in R^p with exact coordinates.
///
/// Indices are stable identities: operations report results in terms of the
/// 0-based position of points in `points`.
#[derive(Debug, Clone)]
pub struct PointCloud {
    points: Vec<Vec<Rat>>,
    dim: usize,
    scaled: OnceLock<ScaledCloud>,
    general_position: OnceLock<Result<(), Vec<usize>>>,
    normal_kernel: OnceLock<NormalKernel>,
}

/// Per-subset multilinear normal coefficients, shared by every depth query
/// against the same cloud.
///
/// For a (p-1)-subset S with anchor a = min S, the hyperplane through a
/// query x and the points of S has normal `coeff . (Z_a xd - xn D)` in the
/// cloud's integer scale, where x = xn / xd and points are Z_i / D: the
/// cofactor normal is linear in the one row that involves the query, and
/// `coeff` collects the small sample-only minors once.
#[derive(Debug, Clone)]
pub(crate) struct NormalKernel {
    pub subsets: Vec<SubsetKernel>,
}

#[derive(Debug, Clone)]
pub(crate) struct SubsetKernel {
    pub anchor: usize,
    pub coeff: Vec<Vec<BigInt>>,
}

impl PartialEq for PointCloud {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}
impl Eq for PointCloud {}

/// Integer form of a cloud: `points[i] = ints[i] / denom` componentwise.
/// This is what the hot counting loops run on.
#[derive(Debug, Clone)]
pub(crate) struct ScaledCloud {
    pub ints: Vec<Vec<BigInt>>,
    pub denom: BigInt,
}

impl PointCloud {
    /// Build a cloud, requiring n > p >= 1 and uniform dimension.
    pub fn new(points: Vec<Vec<Rat>>) -> Result<Self, Error> {
        let n = points.len();
        let p = points.first().map(|q| q.len()).unwrap_or(0);
        if p < 1 || n <= p {
            return Err(Error::TooFewPoints { n, p });
        }
        for q in &points {
            if q.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    got: q.len(),
                });
            }
        }
        Ok(PointCloud {
            points,
            dim: p,
            scaled: OnceLock::new(),
            general_position: OnceLock::new(),
            normal_kernel: OnceLock::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n > p >= 1 by construction
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[Rat] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<Rat>] {
        &self.points
    }

    pub(crate) fn scaled(&self) -> &ScaledCloud {
        self.scaled.get_or_init(|| {
            let mut denom = BigInt::one();
            for q in &self.points {
                for x in q {
                    denom = denom.lcm(x.denom());
                }
            }
            let ints = self
                .points
                .iter()
                .map(|q| q.iter().map(|x| x.numer() * (&denom / x.denom())).collect())
                .collect();
            ScaledCloud { ints, denom }
        })
    }

    /// Cached general-position verdict; `Err` carries one violating subset.
    pub fn general_position(&self) -> Result<(), Vec<usize>> {
        self.general_position
            .get_or_init(|| match check_general_position(self) {
                GeneralPosition::Ok => Ok(()),
                GeneralPosition::Violation(w) => Err(w),
            })
            .clone()
    }

    /// Cached depth-query kernel; only meaningful for p >= 2.
    pub(crate) fn normal_kernel(&self) -> &NormalKernel {
        self.normal_kernel.get_or_init(|| {
            let p = self.dim;
            if p < 2 {
                return NormalKernel { subsets: Vec::new() };
            }
            let scaled = self.scaled();
            let combos: Vec<Vec<usize>> = (0..self.len()).combinations(p - 1).collect();
            let subsets = combos
                .par_iter()
                .map(|subset| {
                    let anchor = subset[0];
                    let base = &scaled.ints[anchor];
                    let rows: Vec<Vec<BigInt>> = subset[1..]
                        .iter()
                        .map(|&i| {
                            scaled.ints[i]
                                .iter()
                                .zip(base)
                                .map(|(a, b)| a - b)
                                .collect()
                        })
                        .collect();
                    SubsetKernel {
                        anchor,
                        coeff: linalg::cofactor_coefficients(&rows, p),
                    }
                })
                .collect();
            NormalKernel { subsets }
        })
    }
}

/// A hyperplane `{x : normal . x = offset}` with an exact normal.
///
/// Normals are canonicalized to a primitive integer vector whose first
/// nonzero coordinate is positive, so equal hyperplanes compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane {
    pub normal: Vec<Rat>,
    pub offset: Rat,
    /// Sample indices this hyperplane was constructed through, when known.
    pub defining_indices: Option<Vec<usize>>,
}

impl Hyperplane {
    /// Canonicalize: primitive integer normal, first nonzero coordinate
    /// positive, offset rescaled to match.
    pub fn new(normal: Vec<Rat>, offset: Rat) -> Self {
        let ints = primitive_integer_vector(&normal);
        let first = ints.iter().find(|x| !x.is_zero());
        let flip = matches!(first, Some(x) if x.is_negative());
        // offset scales by the same factor as the normal: recover it from any
        // nonzero component pair.
        let k = normal.iter().position(|x| !x.is_zero()).expect("nonzero normal");
        let factor = Rat::from(if flip { -ints[k].clone() } else { ints[k].clone() }) / &normal[k];
        let normal = ints
            .into_iter()
            .map(|x| Rat::from(if flip { -x } else { x }))
            .collect();
        Hyperplane {
            normal,
            offset: offset * factor,
            defining_indices: None,
        }
    }

    pub fn with_indices(mut self, mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        self.defining_indices = Some(idx);
        self
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        dot(&self.normal, point) - &self.offset
    }
}

/// Exact strict/equal/strict counts of a cloud against a hyperplane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SideCounts {
    pub below: usize,
    pub on: usize,
    pub above: usize,
}

/// Outcome of the general-position check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneralPosition {
    Ok,
    /// One (p+1)-subset of indices that lies on a common hyperplane.
    Violation(Vec<usize>),
}

/// Sign of the orientation determinant of p+1 points in R^p.
///
/// Zero iff the points are affinely dependent (lie on a common hyperplane).
pub fn orientation(points: &[Vec<Rat>]) -> Result<i32, Error> {
    let p = points
        .first()
        .map(|q| q.len())
        .ok_or(Error::DimensionMismatch { expected: 1, got: 0 })?;
    if points.len() != p + 1 {
        return Err(Error::DimensionMismatch {
            expected: p + 1,
            got: points.len(),
        });
    }
    for q in points {
        if q.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                got: q.len(),
            });
        }
    }
    let rows: Vec<Vec<Rat>> = points[1..].iter().map(|q| sub(q, &points[0])).collect();
    // Clear denominators row by row; row scaling by positives keeps the sign.
    let int_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| scale_row(r)).collect();
    Ok(linalg::det_sign_int(&int_rows))
}

fn scale_row(row: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in row {
        lcm = lcm.lcm(x.denom());
    }
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

fn orientation_of_subset(scaled: &ScaledCloud, idx: &[usize]) -> i32 {
    let base = &scaled.ints[idx[0]];
    let rows: Vec<Vec<BigInt>> = idx[1..]
        .iter()
        .map(|&i| {
            scaled.ints[i]
                .iter()
                .zip(base)
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    linalg::det_sign_int(&rows)
}

/// Check that no p+1 points of the cloud lie on a common hyperplane.
///
/// Exhaustive over all (p+1)-subsets; returns the lexicographically first
/// violating subset when there is one.
pub fn check_general_position(cloud: &PointCloud) -> GeneralPosition {
    let n = cloud.len();
    let p = cloud.dim();
    let scaled = cloud.scaled();
    let subsets: Vec<Vec<usize>> = (0..n).combinations(p + 1).collect();
    let hit = subsets
        .par_iter()
        .find_first(|idx| orientation_of_subset(scaled, idx) == 0);
    match hit {
        Some(idx) => GeneralPosition::Violation(idx.clone()),
        None => GeneralPosition::Ok,
    }
}

/// The hyperplane through exactly p sample points of the cloud.
///
/// The normal is the exact orthogonal complement of the points' difference
/// span; fails if the points are affinely dependent.
pub fn hyperplane_through(cloud: &PointCloud, indices: &[usize]) -> Result<Hyperplane, Error> {
    let p = cloud.dim();
    if indices.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: indices.len(),
        });
    }
    for &i in indices {
        if i >= cloud.len() {
            return Err(Error::IndexOutOfRange(i));
        }
    }
    let base = cloud.point(indices[0]);
    let rows: Vec<Vec<Rat>> = indices[1..]
        .iter()
        .map(|&i| sub(cloud.point(i), base))
        .collect();
    if linalg::rank(&rows) != p - 1 {
        return Err(Error::AffinelyDependent(indices.to_vec()));
    }
    let normal = linalg::orthogonal_to(&rows, p).ok_or(Error::AffinelyDependent(indices.to_vec()))?;
    let offset = dot(&normal, base);
    let h = Hyperplane::new(normal, offset).with_indices(indices.to_vec());
    debug_assert!(indices.iter().all(|&i| h.eval(cloud.point(i)).is_zero()));
    Ok(h)
}

/// Exact below/on/above counts of the cloud against a hyperplane.
pub fn side_counts(cloud: &PointCloud, h: &Hyperplane) -> Result<SideCounts, Error> {
    if h.normal.len() != cloud.dim() {
        return Err(Error::DimensionMismatch {
            expected: cloud.dim(),
            got: h.normal.len(),
        });
    }
    let scaled = cloud.scaled();
    let normal_int = primitive_integer_vector(&h.normal);
    // sign(normal.x_i - offset) = sign(q_den * normal_int.z_i - q_num' * denom)
    // where offset rescaled to the primitive normal is q_num'/q_den.
    let k = h.normal.iter().position(|x| !x.is_zero()).expect("nonzero normal");
    let factor = Rat::from(normal_int[k].clone()) / &h.normal[k];
    let q = &h.offset * factor;
    let (mut below, mut on, mut above) = (0usize, 0usize, 0usize);
    let q_num_denom = q.numer() * &scaled.denom;
    for z in &scaled.ints {
        let mut acc = BigInt::zero();
        for (a, zi) in normal_int.iter().zip(z) {
            acc += a * zi;
        }
        let s = int_sign(&(acc * q.denom() - &q_num_denom));
        match s {
            -1 => below += 1,
            0 => on += 1,
            _ => above += 1,
        }
    }
    Ok(SideCounts { below, on, above })
}

/// Apply `x -> A x + b` to every point. `A` must be square and nonsingular.
pub fn affine_transform(
    cloud: &PointCloud,
    a: &[Vec<Rat>],
    b: &[Rat],
) -> Result<PointCloud, Error> {
    let p = cloud.dim();
    if a.len() != p || a.iter().any(|row| row.len() != p) || b.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: a.len().max(b.len()),
        });
    }
    if linalg::det_rat(a).is_zero() {
        return Err(Error::SingularMatrix);
    }
    let points = cloud
        .points()
        .iter()
        .map(|q| {
            a.iter()
                .zip(b)
                .map(|(row, off)| dot(row, q) + off)
                .collect()
        })
        .collect();
    PointCloud::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_decimal;

    pub(crate) fn cloud_from(strs: &[&[&str]]) -> PointCloud {
        let points = strs
            .iter()
            .map(|row| row.iter().map(|s| parse_decimal(s).unwrap()).collect())
            .collect();
        PointCloud::new(points).unwrap()
    }

    fn square4() -> PointCloud {
        cloud_from(&[&["0", "0"], &["1", "0"], &["0", "1"], &["1", "1"]])
    }

    fn r(s: &str) -> Rat {
        parse_decimal(s).unwrap()
    }

    #[test]
    fn orientation_unit_simplex() {
        let pts = vec![
            vec![r("0"), r("0")],
            vec![r("1"), r("0")],
            vec![r("0"), r("1")],
        ];
        assert_eq!(orientation(&pts).unwrap(), 1);
    }

    #[test]
    fn orientation_collinear_is_zero() {
        let pts = vec![
            vec![r("0"), r("0")],
            vec![r("1"), r("1")],
            vec![r("2"), r("2")],
        ];
        assert_eq!(orientation(&pts).unwrap(), 0);
    }

    #[test]
    fn orientation_swap_negates() {
        let pts = vec![
            vec![r("0"), r("0")],
            vec![r("0"), r("1")],
            vec![r("1"), r("0")],
        ];
        assert_eq!(orientation(&pts).unwrap(), -1);
    }

    #[test]
    fn orientation_dimension_mismatch() {
        let pts = vec![vec![r("0"), r("0")], vec![r("1"), r("0")]];
        assert!(orientation(&pts).is_err());
    }

    #[test]
    fn hyperplane_through_x_axis() {
        let sq = square4();
        let h = hyperplane_through(&sq, &[0, 1]).unwrap();
        assert_eq!(h.normal, vec![r("0"), r("1")]);
        assert_eq!(h.offset, r("0"));
        assert_eq!(h.defining_indices, Some(vec![0, 1]));
    }

    #[test]
    fn hyperplane_through_diagonal() {
        let sq = square4();
        let h = hyperplane_through(&sq, &[0, 3]).unwrap();
        // proportional to (1, -1) through the origin
        assert_eq!(h.normal, vec![r("1"), r("-1")]);
        assert_eq!(h.offset, r("0"));
    }

    #[test]
    fn hyperplane_through_duplicate_errors() {
        let c = cloud_from(&[&["0", "0"], &["0", "0"], &["1", "0"], &["0", "1"]]);
        assert!(matches!(
            hyperplane_through(&c, &[0, 1]),
            Err(Error::AffinelyDependent(_))
        ));
    }

    #[test]
    fn hyperplane_order_invariant() {
        let sq = square4();
        let h1 = hyperplane_through(&sq, &[0, 3]).unwrap();
        let h2 = hyperplane_through(&sq, &[3, 0]).unwrap();
        assert_eq!(h1.normal, h2.normal);
        assert_eq!(h1.offset, h2.offset);
    }

    #[test]
    fn general_position_square_ok() {
        assert_eq!(check_general_position(&square4()), GeneralPosition::Ok);
    }

    #[test]
    fn general_position_collinear_witness() {
        let c = cloud_from(&[&["0", "0"], &["1", "1"], &["2", "2"], &["5", "0"]]);
        assert_eq!(
            check_general_position(&c),
            GeneralPosition::Violation(vec![0, 1, 2])
        );
    }

    #[test]
    fn general_position_octahedron_violation() {
        let c = cloud_from(&[
            &["1", "0", "0"],
            &["-1", "0", "0"],
            &["0", "1", "0"],
            &["0", "-1", "0"],
            &["0", "0", "1"],
            &["0", "0", "-1"],
        ]);
        match check_general_position(&c) {
            GeneralPosition::Violation(w) => {
                assert_eq!(w.len(), 4);
                // four coplanar points: verify directly
                let pts: Vec<_> = w.iter().map(|&i| c.point(i).to_vec()).collect();
                let rows: Vec<_> = pts[1..].iter().map(|q| sub(q, &pts[0])).collect();
                assert!(linalg::rank(&rows) < 3);
            }
            GeneralPosition::Ok => panic!("octahedron should violate general position"),
        }
    }

    #[test]
    fn side_counts_examples() {
        let sq = square4();
        let x_axis = hyperplane_through(&sq, &[0, 1]).unwrap();
        assert_eq!(
            side_counts(&sq, &x_axis).unwrap(),
            SideCounts { below: 0, on: 2, above: 2 }
        );
        let vertical = Hyperplane::new(vec![r("1"), r("0")], r("0.5"));
        assert_eq!(
            side_counts(&sq, &vertical).unwrap(),
            SideCounts { below: 2, on: 0, above: 2 }
        );
        let diag = hyperplane_through(&sq, &[0, 3]).unwrap();
        let c = side_counts(&sq, &diag).unwrap();
        assert_eq!((c.below, c.on, c.above), (1, 2, 1));
    }

    #[test]
    fn affine_identity_and_scale() {
        let sq = square4();
        let id = vec![vec![r("1"), r("0")], vec![r("0"), r("1")]];
        let same = affine_transform(&sq, &id, &[r("0"), r("0")]).unwrap();
        assert_eq!(same, sq);

        let two_i = vec![vec![r("2"), r("0")], vec![r("0"), r("2")]];
        let moved = affine_transform(&sq, &two_i, &[r("1"), r("1")]).unwrap();
        assert_eq!(
            moved.points(),
            cloud_from(&[&["1", "1"], &["3", "1"], &["1", "3"], &["3", "3"]]).points()
        );
    }

    #[test]
    fn affine_singular_rejected() {
        let sq = square4();
        let sing = vec![vec![r("1"), r("1")], vec![r("2"), r("2")]];
        assert!(matches!(
            affine_transform(&sq, &sing, &[r("0"), r("0")]),
            Err(Error::SingularMatrix)
        ));
    }
}
