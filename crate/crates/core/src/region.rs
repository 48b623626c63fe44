//! Depth regions as intersections of closed halfspaces.
//!
//! The region at level kappa is the set of points whose depth count is at
//! least kappa. Its H-representation comes from the hyperplanes through p
//! sample points: whenever such a hyperplane has at most kappa - 1 points
//! strictly on one open side, the closed complement of that side must
//! contain the whole region. The assembled intersection is then certified
//! pointwise: every vertex must reach depth kappa, and any vertex that does
//! not is cut off along its own witness direction at the exact level
//! quantile. The certified polytope equals the region exactly — soundness
//! never rests on the enumeration alone.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::collections::BTreeSet;

use crate::depth::{depth_check, DepthCheck};
use crate::error::Error;
use crate::exact::{dot, primitive_integer_vector, sub, Rat};
use crate::geometry::{Hyperplane, PointCloud};
use crate::linalg;
use crate::polytope::{Cutter, IntConstraint};

/// Which closed side of a hyperplane a constraint keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    /// `{x : normal . x >= offset}`
    AboveOrOn,
    /// `{x : normal . x <= offset}`
    BelowOrOn,
}

/// One closed halfspace constraint of a region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionConstraint {
    pub hyperplane: Hyperplane,
    pub side: Side,
}

impl RegionConstraint {
    /// The constraint in `u . x >= rhs` form.
    pub fn geq_form(&self) -> (Vec<Rat>, Rat) {
        match self.side {
            Side::AboveOrOn => (self.hyperplane.normal.clone(), self.hyperplane.offset.clone()),
            Side::BelowOrOn => (
                self.hyperplane.normal.iter().map(|x| -x).collect(),
                -self.hyperplane.offset.clone(),
            ),
        }
    }

    pub fn satisfied(&self, x: &[Rat]) -> bool {
        let v = self.hyperplane.eval(x);
        match self.side {
            Side::AboveOrOn => !v.is_negative(),
            Side::BelowOrOn => !v.is_positive(),
        }
    }

    pub fn tight(&self, x: &[Rat]) -> bool {
        self.hyperplane.eval(x).is_zero()
    }
}

/// Integer-cleared `u . x >= rhs` form for fast repeated evaluation:
/// `(normal ints, rhs_num, rhs_den)` with `rhs_den > 0`.
struct GeqInts {
    normal: Vec<BigInt>,
    rhs_num: BigInt,
    rhs_den: BigInt,
}

impl GeqInts {
    fn of(c: &RegionConstraint) -> Self {
        let (normal, rhs) = c.geq_form();
        let ints = primitive_integer_vector(&normal);
        let k = normal.iter().position(|x| !x.is_zero()).expect("nonzero normal");
        let factor = Rat::from(ints[k].clone()) / &normal[k];
        let rhs = rhs * factor;
        GeqInts {
            normal: ints,
            rhs_num: rhs.numer().clone(),
            rhs_den: rhs.denom().clone(),
        }
    }

    /// Sign of the slack at `nums / den` (`den > 0`).
    fn slack_sign(&self, nums: &[BigInt], den: &BigInt) -> i32 {
        let dot = linalg::int_dot(&self.normal, nums);
        crate::exact::int_sign(&(dot * &self.rhs_den - &self.rhs_num * den))
    }
}

/// Vertex coordinates as integers over one positive denominator.
fn to_int_point(v: &[Rat]) -> (Vec<BigInt>, BigInt) {
    use num_integer::Integer;
    let mut den = BigInt::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let nums = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    (nums, den)
}

/// Clear a rational row to integers by its denominator lcm, folding the lcm
/// into `scale` so determinants can be rescaled afterwards.
fn primitive_row_with_scale(row: &[Rat], scale: &mut BigInt) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in row {
        lcm = lcm.lcm(x.denom());
    }
    *scale *= &lcm;
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// A depth region: closed-halfspace description, exact vertex list, and
/// affine dimension (-1 for the empty region).
#[derive(Debug, Clone)]
pub struct DepthRegion {
    pub level_kappa: usize,
    pub halfspaces: Vec<RegionConstraint>,
    pub vertices: Vec<Vec<Rat>>,
    pub dim: i32,
}

impl DepthRegion {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.halfspaces.iter().all(|c| c.satisfied(x))
    }

    /// Exact membership of `x` in the vertex list.
    pub fn is_vertex(&self, x: &[Rat]) -> bool {
        self.vertices.iter().any(|v| v == x)
    }

    /// Does `x` satisfy every constraint strictly?
    pub fn strictly_interior(&self, x: &[Rat]) -> bool {
        !self.halfspaces.is_empty()
            && self
                .halfspaces
                .iter()
                .all(|c| c.satisfied(x) && !c.tight(x))
    }
}

/// All hyperplanes through p sample points, with exact side counts.
/// Built once per cloud and shared across levels.
#[derive(Debug)]
pub(crate) struct HyperplaneFamily {
    pub entries: Vec<FamilyEntry>,
    /// Common denominator of the cloud's integer form.
    pub denom: BigInt,
}

#[derive(Debug, Clone)]
pub(crate) struct FamilyEntry {
    /// Primitive integer normal, first nonzero coordinate positive.
    pub normal: Vec<BigInt>,
    /// The hyperplane is `normal . x = offset_scaled / denom`.
    pub offset_scaled: BigInt,
    pub indices: Vec<usize>,
    pub below: usize,
    pub above: usize,
}

impl HyperplaneFamily {
    pub fn build(cloud: &PointCloud) -> Self {
        let n = cloud.len();
        let p = cloud.dim();
        let scaled = cloud.scaled();
        let combos: Vec<Vec<usize>> = (0..n).combinations(p).collect();
        let entries: Vec<FamilyEntry> = combos
            .par_iter()
            .filter_map(|idx| {
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
                let normal = linalg::cofactor_normal(&rows, p);
                if normal.iter().all(|x| x.is_zero()) {
                    return None; // affinely dependent subset (degenerate cloud)
                }
                let mut normal = linalg::primitive_int(normal);
                if normal.iter().find(|x| !x.is_zero()).unwrap().is_negative() {
                    for x in &mut normal {
                        *x = -x.clone();
                    }
                }
                let offset_scaled = linalg::int_dot(&normal, base);
                let mut below = 0usize;
                let mut above = 0usize;
                for z in &scaled.ints {
                    let s = linalg::int_dot(&normal, z) - &offset_scaled;
                    if s.is_negative() {
                        below += 1;
                    } else if s.is_positive() {
                        above += 1;
                    }
                }
                Some(FamilyEntry {
                    normal,
                    offset_scaled,
                    indices: idx.clone(),
                    below,
                    above,
                })
            })
            .collect();
        HyperplaneFamily { entries, denom: scaled.denom.clone() }
    }

    /// Emitted closed halfspaces at a level, in entry order: whenever an open
    /// side holds at most kappa - 1 points, keep the closed complement.
    /// The `bool` is true when the kept side is `normal . x >= offset`.
    pub fn emitted(&self, kappa: usize) -> Vec<(usize, bool, usize)> {
        let mut out = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            if e.below <= kappa - 1 {
                out.push((i, true, e.below));
            }
            if e.above <= kappa - 1 {
                out.push((i, false, e.above));
            }
        }
        out
    }

    fn constraint(&self, entry: usize, geq: bool) -> IntConstraint {
        let e = &self.entries[entry];
        if geq {
            IntConstraint::new(e.normal.clone(), e.offset_scaled.clone(), self.denom.clone())
        } else {
            IntConstraint::new(
                e.normal.iter().map(|x| -x).collect(),
                -&e.offset_scaled,
                self.denom.clone(),
            )
        }
    }

    fn region_constraint(&self, entry: usize, geq: bool) -> RegionConstraint {
        let e = &self.entries[entry];
        let hyperplane = Hyperplane {
            normal: e.normal.iter().map(|x| Rat::from(x.clone())).collect(),
            offset: Rat::new(e.offset_scaled.clone(), self.denom.clone()),
            defining_indices: Some(e.indices.clone()),
        };
        RegionConstraint {
            hyperplane,
            side: if geq { Side::AboveOrOn } else { Side::BelowOrOn },
        }
    }
}

fn check_level(cloud: &PointCloud, kappa: usize) -> Result<(), Error> {
    if kappa == 0 || kappa > cloud.len() {
        return Err(Error::KappaOutOfRange { kappa, n: cloud.len() });
    }
    Ok(())
}

fn require_general_position(cloud: &PointCloud, force: bool) -> Result<bool, Error> {
    match cloud.general_position() {
        Ok(()) => Ok(false),
        Err(w) if force => {
            let _ = w;
            Ok(true)
        }
        Err(w) => Err(Error::NotInGeneralPosition(w)),
    }
}

/// The closed halfspaces whose intersection carries the level-kappa region.
pub fn region_halfspaces(cloud: &PointCloud, kappa: usize) -> Result<Vec<RegionConstraint>, Error> {
    check_level(cloud, kappa)?;
    require_general_position(cloud, false)?;
    let family = HyperplaneFamily::build(cloud);
    Ok(family
        .emitted(kappa)
        .into_iter()
        .map(|(i, geq, _)| family.region_constraint(i, geq))
        .collect())
}

/// Like [`region_halfspaces`] with the "exactly kappa - 1 cut off" filter:
/// only hyperplanes whose open side holds exactly kappa - 1 points. At the
/// maximum depth level both filters describe the same set.
pub fn region_halfspaces_exact_cut(
    cloud: &PointCloud,
    kappa: usize,
) -> Result<Vec<RegionConstraint>, Error> {
    check_level(cloud, kappa)?;
    require_general_position(cloud, false)?;
    let family = HyperplaneFamily::build(cloud);
    Ok(family
        .emitted(kappa)
        .into_iter()
        .filter(|&(_, _, open)| open == kappa - 1)
        .map(|(i, geq, _)| family.region_constraint(i, geq))
        .collect())
}

/// Result of brute-force vertex enumeration of a halfspace intersection.
#[derive(Debug, Clone)]
pub struct VertexEnumeration {
    pub vertices: Vec<Vec<Rat>>,
    /// A nonzero direction along which the intersection recedes, when one
    /// exists; the intersection is then unbounded (if nonempty).
    pub unbounded_ray: Option<Vec<Rat>>,
}

/// Enumerate the vertices of an intersection of closed halfspaces by solving
/// every p-subset of boundary hyperplanes and keeping feasible solutions.
///
/// Exhaustive and exact; meant for small constraint lists. The engine's own
/// region pipeline uses the incremental cutter instead.
pub fn region_vertices(halfspaces: &[RegionConstraint]) -> Result<VertexEnumeration, Error> {
    if halfspaces.is_empty() {
        return Err(Error::EmptyHalfspaces);
    }
    let p = halfspaces[0].hyperplane.normal.len();
    let geq: Vec<(Vec<Rat>, Rat)> = halfspaces.iter().map(|c| c.geq_form()).collect();
    let mut vertices: Vec<Vec<Rat>> = Vec::new();
    for subset in (0..geq.len()).combinations(p) {
        let a: Vec<Vec<Rat>> = subset.iter().map(|&i| geq[i].0.clone()).collect();
        let b: Vec<Rat> = subset.iter().map(|&i| geq[i].1.clone()).collect();
        let Some(x) = linalg::solve(&a, &b) else { continue };
        if geq.iter().all(|(u, q)| dot(u, &x) >= *q) {
            vertices.push(x);
        }
    }
    vertices.sort();
    vertices.dedup();
    let normals: Vec<Vec<Rat>> = geq.iter().map(|(u, _)| u.clone()).collect();
    Ok(VertexEnumeration {
        vertices,
        unbounded_ray: recession_ray(&normals),
    })
}

/// A nonzero direction d with `u . d >= 0` for every constraint normal, if
/// one exists. Enumerates candidate directions from (p-1)-subset normals;
/// a feasible ray, when present, survives at one of them.
pub fn recession_ray(normals: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    let p = normals.first()?.len();
    let rows: Vec<Vec<Rat>> = normals.to_vec();
    if linalg::rank(&rows) < p {
        // Anything orthogonal to every normal recedes both ways.
        return linalg::orthogonal_to(&rows, p);
    }
    if p == 1 {
        for d in [Rat::one(), -Rat::one()] {
            if normals.iter().all(|u| !(&u[0] * &d).is_negative()) {
                return Some(vec![d]);
            }
        }
        return None;
    }
    let ints: Vec<Vec<BigInt>> = normals.iter().map(|u| primitive_integer_vector(u)).collect();
    for subset in (0..ints.len()).combinations(p - 1) {
        let rows: Vec<Vec<BigInt>> = subset.iter().map(|&i| ints[i].clone()).collect();
        let w = linalg::cofactor_normal(&rows, p);
        if w.iter().all(|x| x.is_zero()) {
            continue;
        }
        for flip in [false, true] {
            let d: Vec<BigInt> = if flip {
                w.iter().map(|x| -x).collect()
            } else {
                w.clone()
            };
            if ints.iter().all(|u| !linalg::int_dot(u, &d).is_negative()) {
                return Some(d.iter().map(|x| Rat::from(x.clone())).collect());
            }
        }
    }
    None
}

/// Affine dimension of a vertex set: -1 for empty, else the exact rank of
/// the difference set.
pub fn region_dim(vertices: &[Vec<Rat>]) -> i32 {
    match vertices.first() {
        None => -1,
        Some(v0) => {
            let rows: Vec<Vec<Rat>> = vertices[1..].iter().map(|v| sub(v, v0)).collect();
            linalg::rank(&rows) as i32
        }
    }
}

/// Centroid of a region with respect to its own affine dimension: the single
/// vertex at dimension 0, the exact measure-weighted mean otherwise.
///
/// The polytope is mapped into a chart of its affine hull, fan-triangulated
/// from its lexicographically smallest vertex using constraint incidences,
/// and the simplex volumes are accumulated as exact rationals.
pub fn region_centroid(region: &DepthRegion) -> Result<Vec<Rat>, Error> {
    if region.vertices.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let mut vertices = region.vertices.clone();
    vertices.sort();
    vertices.dedup();
    if region.dim <= 0 {
        return Ok(vertices[0].clone());
    }
    let k = region.dim as usize;

    // Chart of the affine hull: independent difference vectors from v0.
    let v0 = &vertices[0];
    let diffs: Vec<Vec<Rat>> = vertices[1..].iter().map(|v| sub(v, v0)).collect();
    let basis: Vec<Vec<Rat>> = linalg::independent_subset(&diffs)
        .into_iter()
        .map(|i| diffs[i].clone())
        .collect();
    debug_assert_eq!(basis.len(), k);
    let mut gram = vec![vec![Rat::zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = dot(&basis[i], &basis[j]);
        }
    }
    let chart: Vec<Vec<Rat>> = vertices
        .iter()
        .map(|v| {
            let d = sub(v, v0);
            let rhs: Vec<Rat> = basis.iter().map(|b| dot(b, &d)).collect();
            linalg::solve(&gram, &rhs).expect("gram matrix is nonsingular")
        })
        .collect();

    // Vertex sets tight at each constraint, used to walk the face lattice.
    let int_vertices: Vec<(Vec<BigInt>, BigInt)> = vertices.iter().map(|v| to_int_point(v)).collect();
    let tight_sets: Vec<Vec<usize>> = region
        .halfspaces
        .par_iter()
        .map(|c| {
            let g = GeqInts::of(c);
            (0..vertices.len())
                .filter(|&i| {
                    let (nums, den) = &int_vertices[i];
                    g.slack_sign(nums, den) == 0
                })
                .collect()
        })
        .collect();

    let t_tri = std::time::Instant::now();
    let simplices = triangulate(&(0..vertices.len()).collect::<Vec<_>>(), k, &tight_sets, &chart)?;
    if std::env::var_os("HSDEPTH_TRACE").is_some() {
        eprintln!("triangulate: {:?} simplices={}", t_tri.elapsed(), simplices.len());
    }

    let mut total = Rat::zero();
    let mut weighted = vec![Rat::zero(); v0.len()];
    for simplex in &simplices {
        let base = &chart[simplex[0]];
        // Clear each difference row to integers, tracking the positive row
        // scales so the integer determinant recovers the exact volume.
        let mut scale = BigInt::one();
        let rows: Vec<Vec<BigInt>> = simplex[1..]
            .iter()
            .map(|&i| {
                let diff = sub(&chart[i], base);
                let ints = primitive_row_with_scale(&diff, &mut scale);
                ints
            })
            .collect();
        let det = linalg::det_int(&rows);
        if det.is_zero() {
            continue;
        }
        let vol = Rat::new(num_traits::Signed::abs(&det), scale);
        let count = Rat::from(BigInt::from(simplex.len() as i64));
        for (j, acc) in weighted.iter_mut().enumerate() {
            let mut centroid_j = Rat::zero();
            for &i in simplex {
                centroid_j += &vertices[i][j];
            }
            *acc += &vol * (centroid_j / &count);
        }
        total += vol;
    }
    if total.is_zero() {
        return Err(Error::Internal("triangulation produced zero total measure".into()));
    }
    Ok(weighted.into_iter().map(|w| w / &total).collect())
}

/// Fan triangulation of the face given by `set` (vertex indices, dimension
/// `d`), recursing through facets discovered from constraint incidences.
fn triangulate(
    set: &[usize],
    d: usize,
    tight_sets: &[Vec<usize>],
    chart: &[Vec<Rat>],
) -> Result<Vec<Vec<usize>>, Error> {
    if d == 0 {
        return Ok(vec![vec![set[0]]]);
    }
    let apex = set[0];
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for tight in tight_sets {
        let f: Vec<usize> = set.iter().copied().filter(|i| tight.contains(i)).collect();
        if f.is_empty() || f.len() == set.len() {
            continue;
        }
        let rows: Vec<Vec<Rat>> = f[1..].iter().map(|&i| sub(&chart[i], &chart[f[0]])).collect();
        if linalg::rank(&rows) == d - 1 {
            facets.insert(f);
        }
    }
    if facets.is_empty() {
        return Err(Error::Internal(format!(
            "no facets found for a {d}-dimensional face"
        )));
    }
    let mut out = Vec::new();
    for f in facets {
        if f.contains(&apex) {
            continue;
        }
        for mut simplex in triangulate(&f, d - 1, tight_sets, chart)? {
            simplex.push(apex);
            simplex.rotate_right(1);
            out.push(simplex);
        }
    }
    Ok(out)
}

/// Assemble the exact level-kappa region: emitted halfspaces cut down from a
/// bounding box, then every vertex certified by a depth query (a failing
/// vertex is cut off along its witness direction at the level quantile).
pub fn depth_region(cloud: &PointCloud, kappa: usize) -> Result<DepthRegion, Error> {
    check_level(cloud, kappa)?;
    require_general_position(cloud, false)?;
    let family = HyperplaneFamily::build(cloud);
    depth_region_with(cloud, &family, kappa)
}

/// [`depth_region`] on a degenerate cloud; counts stay exact, the
/// combinatorial guarantees do not.
pub fn depth_region_forced(cloud: &PointCloud, kappa: usize) -> Result<DepthRegion, Error> {
    check_level(cloud, kappa)?;
    require_general_position(cloud, true)?;
    let family = HyperplaneFamily::build(cloud);
    depth_region_with(cloud, &family, kappa)
}

const CERTIFICATION_ROUNDS: usize = 64;

fn enlarged_box(cloud: &PointCloud) -> (Vec<Rat>, Vec<Rat>) {
    let p = cloud.dim();
    let mut lo = cloud.point(0).to_vec();
    let mut hi = cloud.point(0).to_vec();
    for q in cloud.points() {
        for j in 0..p {
            if q[j] < lo[j] {
                lo[j] = q[j].clone();
            }
            if q[j] > hi[j] {
                hi[j] = q[j].clone();
            }
        }
    }
    let one = Rat::one();
    for j in 0..p {
        lo[j] -= &one;
        hi[j] += &one;
    }
    (lo, hi)
}

/// A constraint along `direction` at the level quantile: every point of
/// depth at least kappa satisfies `direction . x >= (kappa-th smallest
/// projection of the sample)`.
fn quantile_cut(cloud: &PointCloud, direction: &[Rat], kappa: usize) -> (IntConstraint, RegionConstraint) {
    let scaled = cloud.scaled();
    let u = primitive_integer_vector(direction);
    let mut projections: Vec<BigInt> = scaled.ints.iter().map(|z| linalg::int_dot(&u, z)).collect();
    projections.sort();
    let rhs = projections[kappa - 1].clone();
    let int = IntConstraint::new(u.clone(), rhs.clone(), scaled.denom.clone());
    let region = RegionConstraint {
        hyperplane: Hyperplane::new(
            u.iter().map(|x| Rat::from(x.clone())).collect(),
            Rat::new(rhs, scaled.denom.clone()),
        ),
        side: Side::AboveOrOn,
    };
    (int, region)
}

/// Emitted constraints ordered deepest cut first: opposing tight pairs meet
/// early, so empty levels die fast and nonempty ones shrink to size fast.
fn insertion_order(emitted: &[(usize, bool, usize)]) -> Vec<&(usize, bool, usize)> {
    let mut order: Vec<&(usize, bool, usize)> = emitted.iter().collect();
    order.sort_by(|a, b| b.2.cmp(&a.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    order
}

/// A small-denominator point near the vertex average, proposed in floating
/// point and used only where an exact check follows. `None` when the
/// coordinates do not fit.
fn rounded_center(cutter: &Cutter, dim: usize) -> Option<Vec<Rat>> {
    use num_traits::ToPrimitive;
    let verts = cutter.vertices();
    if verts.is_empty() {
        return None;
    }
    let mut avg = vec![0f64; dim];
    for v in verts {
        for (acc, c) in avg.iter_mut().zip(v.coords()) {
            *acc += c.to_f64()?;
        }
    }
    let scale = 1 << 16;
    let mut out = Vec::with_capacity(dim);
    for a in &avg {
        let x = *a / verts.len() as f64 * scale as f64;
        if !x.is_finite() || x.abs() >= i64::MAX as f64 {
            return None;
        }
        out.push(Rat::new(BigInt::from(x.round() as i64), BigInt::from(scale)));
    }
    Some(out)
}

/// Exact average of the cutter's vertices; always inside the intersection.
fn exact_center(cutter: &Cutter, dim: usize) -> Vec<Rat> {
    let verts = cutter.vertices();
    let count = Rat::from(BigInt::from(verts.len() as i64));
    let mut avg = vec![Rat::zero(); dim];
    for v in verts {
        for (acc, c) in avg.iter_mut().zip(v.coords()) {
            *acc += c;
        }
    }
    for x in &mut avg {
        *x /= &count;
    }
    avg
}

pub(crate) fn depth_region_with(
    cloud: &PointCloud,
    family: &HyperplaneFamily,
    kappa: usize,
) -> Result<DepthRegion, Error> {
    check_level(cloud, kappa)?;
    let emitted = family.emitted(kappa);

    // Stage one: only the hyperplanes cutting off exactly kappa - 1 points.
    // Their intersection already carries the region; the relaxed remainder
    // is only pulled in if certification finds a shallow vertex.
    let (lo, hi) = enlarged_box(cloud);
    let mut cutter = Cutter::from_box(&lo, &hi);
    // Region constraints aligned with the cutter's insertion indices.
    let mut inserted: Vec<RegionConstraint> = Vec::new();
    let mut alive = true;
    for &(i, geq, open) in insertion_order(&emitted) {
        if open != kappa - 1 {
            continue;
        }
        inserted.push(family.region_constraint(i, geq));
        if !cutter.insert(family.constraint(i, geq)) {
            alive = false;
            break;
        }
    }

    if std::env::var_os("HSDEPTH_TRACE").is_some() {
        eprintln!("stage1 inserted={} verts={} stats={:?}", inserted.len(), cutter.vertices().len(), cutter.stats);
    }
    let t_cert = std::time::Instant::now();
    let mut relaxed_inserted = false;
    if alive {
        'certify: for _ in 0..CERTIFICATION_ROUNDS {
            let coords: Vec<Vec<Rat>> = cutter.vertices().iter().map(|v| v.coords()).collect();
            let witnesses: Vec<Vec<Rat>> = coords
                .par_iter()
                .map(|v| match depth_check(v, cloud, kappa)? {
                    DepthCheck::Deep { .. } => Ok(None),
                    DepthCheck::Shallow { witness } => Ok(Some(witness.vector)),
                })
                .collect::<Result<Vec<_>, Error>>()?
                .into_iter()
                .flatten()
                .collect();
            if witnesses.is_empty() {
                break;
            }
            if !relaxed_inserted {
                relaxed_inserted = true;
                for &(i, geq, open) in insertion_order(&emitted) {
                    if open == kappa - 1 {
                        continue;
                    }
                    inserted.push(family.region_constraint(i, geq));
                    if !cutter.insert(family.constraint(i, geq)) {
                        alive = false;
                        break 'certify;
                    }
                }
                continue; // re-certify against the full family first
            }
            for witness in witnesses {
                let (int, region) = quantile_cut(cloud, &witness, kappa);
                inserted.push(region);
                if !cutter.insert(int) {
                    alive = false;
                    break 'certify;
                }
            }
        }
    }

    if std::env::var_os("HSDEPTH_TRACE").is_some() {
        eprintln!("certify: {:?}", t_cert.elapsed());
    }
    if alive && cutter.is_empty() {
        alive = false;
    }
    if !alive {
        // Document the whole emitted family for an empty level.
        let halfspaces = emitted
            .iter()
            .map(|&(i, geq, _)| family.region_constraint(i, geq))
            .collect();
        return Ok(DepthRegion {
            level_kappa: kappa,
            halfspaces,
            vertices: Vec::new(),
            dim: -1,
        });
    }

    if cutter.touches_box() {
        return Err(Error::Internal(
            "level region escaped the data bounding box".into(),
        ));
    }
    let t_asm = std::time::Instant::now();
    let mut vertices: Vec<Vec<Rat>> = cutter.vertices().iter().map(|v| v.coords()).collect();
    vertices.sort();
    vertices.dedup();
    let dim = region_dim(&vertices);
    if std::env::var_os("HSDEPTH_TRACE").is_some() {
        eprintln!("assembly(sort+dim): {:?}", t_asm.elapsed());
    }
    // A bounded polytope is the intersection of its vertex-tight constraints
    // (facets and affine-hull equalities are always tight at vertices), so
    // everything else in the inserted family is redundant. Tightness comes
    // straight off the cutter's active sets.
    let nb = cutter.box_constraint_count();
    let mut tight_ids: Vec<u32> = cutter
        .vertices()
        .iter()
        .flat_map(|v| v.active.iter().copied())
        .filter(|&a| a >= nb)
        .collect();
    tight_ids.sort_unstable();
    tight_ids.dedup();
    let mut halfspaces: Vec<RegionConstraint> = Vec::with_capacity(tight_ids.len());
    for id in tight_ids {
        let c = inserted[(id - nb) as usize].clone();
        if !halfspaces.contains(&c) {
            halfspaces.push(c);
        }
    }
    Ok(DepthRegion { level_kappa: kappa, halfspaces, vertices, dim })
}

/// Cache of the deepest point seen so far, shared across level probes.
#[derive(Debug, Default, Clone)]
pub(crate) struct ProbeCache {
    pub deep_point: Option<(Vec<Rat>, usize)>,
}

impl ProbeCache {
    fn record(&mut self, point: Vec<Rat>, kappa: usize) {
        if self.deep_point.as_ref().map_or(true, |(_, k)| kappa > *k) {
            self.deep_point = Some((point, kappa));
        }
    }
}

/// Is the level-kappa region nonempty?
///
/// Empty verdicts come from an exactly empty intersection of closed
/// halfspaces that all contain the region; nonempty verdicts from a point
/// whose exact depth reaches kappa. Both directions are unconditional, so
/// neither depends on the halfspace family being a tight description.
pub(crate) fn level_nonempty(
    cloud: &PointCloud,
    family: &HyperplaneFamily,
    kappa: usize,
    cache: &mut ProbeCache,
) -> Result<bool, Error> {
    check_level(cloud, kappa)?;
    if let Some((_, known)) = &cache.deep_point {
        if *known >= kappa {
            return Ok(true);
        }
    }
    let p = cloud.dim();
    let emitted = family.emitted(kappa);
    let (lo, hi) = enlarged_box(cloud);
    let mut cutter = Cutter::from_box(&lo, &hi);

    // Stage one: the exactly-kappa-minus-one family, then one cheap
    // certificate attempt at a small-coordinate near-center point.
    for &(i, geq, open) in insertion_order(&emitted) {
        if open != kappa - 1 {
            continue;
        }
        if !cutter.insert(family.constraint(i, geq)) {
            return Ok(false);
        }
    }
    if let Some(cand) = rounded_center(&cutter, p) {
        if let DepthCheck::Deep { kappa: reached } = depth_check(&cand, cloud, kappa)? {
            cache.record(cand, reached);
            return Ok(true);
        }
    }

    // Stage two: the relaxed remainder of the family.
    for &(i, geq, open) in insertion_order(&emitted) {
        if open == kappa - 1 {
            continue;
        }
        if !cutter.insert(family.constraint(i, geq)) {
            return Ok(false);
        }
    }

    // Certification ladder, cheapest candidate first. A failed ladder cuts
    // along the exact center, which lies in the intersection, so every round
    // removes something.
    for _ in 0..CERTIFICATION_ROUNDS {
        let single = cutter.vertices().len() == 1;
        let mut in_region_outcome = None;
        for step in 0..4 {
            let cand = match step {
                0 => match rounded_center(&cutter, p) {
                    Some(c) => c,
                    None => continue,
                },
                1 => cutter.vertices()[0].coords(),
                2 if !single => {
                    let a = cutter.vertices()[0].coords();
                    let b = cutter.vertices()[1].coords();
                    let half = Rat::new(BigInt::one(), BigInt::from(2));
                    a.iter().zip(&b).map(|(x, y)| (x + y) * &half).collect()
                }
                3 if !single => exact_center(&cutter, p),
                _ => continue,
            };
            match depth_check(&cand, cloud, kappa)? {
                DepthCheck::Deep { kappa: reached } => {
                    cache.record(cand, reached);
                    return Ok(true);
                }
                DepthCheck::Shallow { witness } => {
                    if step > 0 {
                        in_region_outcome = Some(witness);
                    }
                }
            }
        }
        let witness = in_region_outcome.expect("vertex candidate always evaluated");
        let (int, _) = quantile_cut(cloud, &witness.vector, kappa);
        if !cutter.insert(int) {
            return Ok(false);
        }
    }
    Err(Error::Internal(
        "level probe did not converge within the cut budget".into(),
    ))
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

    fn unit_square_constraints() -> Vec<RegionConstraint> {
        let mk = |n: &[&str], q: &str, side| RegionConstraint {
            hyperplane: Hyperplane::new(pt(n), r(q)),
            side,
        };
        vec![
            mk(&["1", "0"], "0", Side::AboveOrOn),
            mk(&["0", "1"], "0", Side::AboveOrOn),
            mk(&["1", "0"], "1", Side::BelowOrOn),
            mk(&["0", "1"], "1", Side::BelowOrOn),
        ]
    }

    #[test]
    fn halfspaces_at_level_one_bound_the_hull() {
        let sq = square4();
        let hs = region_halfspaces(&sq, 1).unwrap();
        // Exactly the four edge-supporting halfspaces.
        assert_eq!(hs.len(), 4);
        let en = region_vertices(&hs).unwrap();
        assert_eq!(
            en.vertices,
            vec![
                pt(&["0", "0"]),
                pt(&["0", "1"]),
                pt(&["1", "0"]),
                pt(&["1", "1"]),
            ]
        );
        assert!(en.unbounded_ray.is_none());
    }

    #[test]
    fn halfspaces_at_level_two_pin_the_center() {
        let sq = square4();
        let hs = region_halfspaces(&sq, 2).unwrap();
        let en = region_vertices(&hs).unwrap();
        assert_eq!(en.vertices, vec![pt(&["0.5", "0.5"])]);
    }

    #[test]
    fn level_out_of_range_rejected() {
        let sq = square4();
        assert!(matches!(
            region_halfspaces(&sq, 0),
            Err(Error::KappaOutOfRange { .. })
        ));
        assert!(matches!(
            region_halfspaces(&sq, 5),
            Err(Error::KappaOutOfRange { .. })
        ));
    }

    #[test]
    fn vertex_enumeration_unit_square() {
        let en = region_vertices(&unit_square_constraints()).unwrap();
        assert_eq!(en.vertices.len(), 4);
        assert!(en.unbounded_ray.is_none());
    }

    #[test]
    fn vertex_enumeration_infeasible_line() {
        // x >= 0 and -x >= 1 in R^1.
        let cons = vec![
            RegionConstraint {
                hyperplane: Hyperplane::new(pt(&["1"]), r("0")),
                side: Side::AboveOrOn,
            },
            RegionConstraint {
                hyperplane: Hyperplane::new(pt(&["1"]), r("-1")),
                side: Side::BelowOrOn,
            },
        ];
        let en = region_vertices(&cons).unwrap();
        assert!(en.vertices.is_empty());
        assert!(en.unbounded_ray.is_none());
    }

    #[test]
    fn vertex_enumeration_flags_unbounded() {
        // Single halfspace x + y >= 0 in the plane: recedes along (1, 1).
        let cons = vec![RegionConstraint {
            hyperplane: Hyperplane::new(pt(&["1", "1"]), r("0")),
            side: Side::AboveOrOn,
        }];
        let en = region_vertices(&cons).unwrap();
        let ray = en.unbounded_ray.expect("halfplane recedes");
        assert!(!dot(&cons[0].geq_form().0, &ray).is_negative());
    }

    #[test]
    fn region_dim_cases() {
        assert_eq!(region_dim(&[]), -1);
        assert_eq!(region_dim(&[pt(&["1", "2"])]), 0);
        let sq = [
            pt(&["0", "0"]),
            pt(&["1", "0"]),
            pt(&["0", "1"]),
            pt(&["1", "1"]),
        ];
        assert_eq!(region_dim(&sq), 2);
    }

    #[test]
    fn centroid_of_singleton_segment_and_square() {
        let single = DepthRegion {
            level_kappa: 1,
            halfspaces: vec![],
            vertices: vec![pt(&["0.5", "0.5"])],
            dim: 0,
        };
        assert_eq!(region_centroid(&single).unwrap(), pt(&["0.5", "0.5"]));

        // Segment (0,0)-(2,0) pinned by y = 0 and 0 <= x <= 2.
        let seg = DepthRegion {
            level_kappa: 1,
            halfspaces: vec![
                RegionConstraint {
                    hyperplane: Hyperplane::new(pt(&["0", "1"]), r("0")),
                    side: Side::AboveOrOn,
                },
                RegionConstraint {
                    hyperplane: Hyperplane::new(pt(&["0", "1"]), r("0")),
                    side: Side::BelowOrOn,
                },
                RegionConstraint {
                    hyperplane: Hyperplane::new(pt(&["1", "0"]), r("0")),
                    side: Side::AboveOrOn,
                },
                RegionConstraint {
                    hyperplane: Hyperplane::new(pt(&["1", "0"]), r("2")),
                    side: Side::BelowOrOn,
                },
            ],
            vertices: vec![pt(&["0", "0"]), pt(&["2", "0"])],
            dim: 1,
        };
        assert_eq!(region_centroid(&seg).unwrap(), pt(&["1", "0"]));

        let square = DepthRegion {
            level_kappa: 1,
            halfspaces: unit_square_constraints(),
            vertices: vec![
                pt(&["0", "0"]),
                pt(&["0", "1"]),
                pt(&["1", "0"]),
                pt(&["1", "1"]),
            ],
            dim: 2,
        };
        assert_eq!(region_centroid(&square).unwrap(), pt(&["0.5", "0.5"]));
    }

    #[test]
    fn depth_region_square_levels() {
        let sq = square4();
        let d1 = depth_region(&sq, 1).unwrap();
        assert_eq!(d1.dim, 2);
        assert_eq!(d1.vertices.len(), 4);
        assert!(d1.contains(&pt(&["0.5", "0.5"])));

        let d2 = depth_region(&sq, 2).unwrap();
        assert_eq!(d2.dim, 0);
        assert_eq!(d2.vertices, vec![pt(&["0.5", "0.5"])]);
        assert!(region_centroid(&d2).unwrap() == pt(&["0.5", "0.5"]));

        let d3 = depth_region(&sq, 3).unwrap();
        assert_eq!(d3.dim, -1);
        assert!(d3.is_empty());
    }

    #[test]
    fn depth_region_triangle_center() {
        let t4 = cloud(&[&["0", "0"], &["4", "0"], &["2", "4"], &["2", "1.5"]]);
        let m = depth_region(&t4, 2).unwrap();
        assert_eq!(m.dim, 0);
        assert_eq!(m.vertices, vec![pt(&["2", "1.5"])]);
    }

    #[test]
    fn exact_cut_filter_matches_at_max_level() {
        // The maximum level of the square is 2.
        let sq = square4();
        let relaxed = region_halfspaces(&sq, 2).unwrap();
        let exact = region_halfspaces_exact_cut(&sq, 2).unwrap();
        let vr = region_vertices(&relaxed).unwrap().vertices;
        let ve = region_vertices(&exact).unwrap().vertices;
        assert_eq!(vr, ve);
    }
}
