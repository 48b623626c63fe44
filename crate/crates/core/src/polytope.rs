//! Incremental exact intersection of closed halfspaces.
//!
//! The cutter starts from an axis-aligned box known to contain the target
//! region and inserts constraints one at a time, maintaining the vertex set
//! and, per vertex, the indices of the constraints tight at it. Two kept
//! vertices are endpoints of an edge iff their common tight constraints span
//! a (p-1)-dimensional normal space; each edge crossing the new hyperplane
//! contributes one new vertex. Everything is exact: vertices are stored as
//! integer vectors over a positive common denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{int_sign, Rat};
use crate::linalg;

/// Closed constraint `normal . x >= rhs_num / rhs_den`, `rhs_den > 0`.
#[derive(Debug, Clone)]
pub(crate) struct IntConstraint {
    pub normal: Vec<BigInt>,
    pub rhs_num: BigInt,
    pub rhs_den: BigInt,
}

impl IntConstraint {
    pub fn new(normal: Vec<BigInt>, rhs_num: BigInt, rhs_den: BigInt) -> Self {
        debug_assert!(rhs_den.is_positive());
        IntConstraint { normal, rhs_num, rhs_den }
    }
}

/// A polytope vertex: coordinates `nums / den` with `den > 0`, plus the
/// sorted indices of all inserted constraints tight at it.
#[derive(Debug, Clone)]
pub(crate) struct Vertex {
    pub nums: Vec<BigInt>,
    pub den: BigInt,
    pub active: Vec<u32>,
}

impl Vertex {
    pub fn coords(&self) -> Vec<Rat> {
        self.nums
            .iter()
            .map(|x| Rat::new(x.clone(), self.den.clone()))
            .collect()
    }

    fn from_rats(coords: &[Rat]) -> Self {
        let mut den = BigInt::one();
        for c in coords {
            den = den.lcm(c.denom());
        }
        let nums = coords.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Vertex { nums, den, active: Vec::new() }
    }
}

#[derive(Debug)]
pub(crate) struct Cutter {
    dim: usize,
    vertices: Vec<Vertex>,
    constraints: Vec<IntConstraint>,
    pub stats: CutterStats,
}

#[derive(Debug, Default, Clone)]
pub(crate) struct CutterStats {
    pub inserts: usize,
    pub cuts: usize,
    pub max_verts: usize,
    pub slack_evals: usize,
    pub pairs: usize,
    pub rank_calls: usize,
}

impl Cutter {
    /// Start from the box `lo <= x <= hi` (componentwise, all strict ranges).
    pub fn from_box(lo: &[Rat], hi: &[Rat]) -> Self {
        let dim = lo.len();
        debug_assert_eq!(hi.len(), dim);
        debug_assert!(lo.iter().zip(hi).all(|(a, b)| a < b));
        let mut constraints = Vec::with_capacity(2 * dim);
        for j in 0..dim {
            let mut e = vec![BigInt::zero(); dim];
            e[j] = BigInt::one();
            constraints.push(IntConstraint::new(
                e.clone(),
                lo[j].numer().clone(),
                lo[j].denom().clone(),
            ));
            let neg: Vec<BigInt> = e.iter().map(|x| -x).collect();
            constraints.push(IntConstraint::new(
                neg,
                -hi[j].numer(),
                hi[j].denom().clone(),
            ));
        }
        let mut vertices = Vec::with_capacity(1 << dim);
        for mask in 0..(1usize << dim) {
            let coords: Vec<Rat> = (0..dim)
                .map(|j| if mask >> j & 1 == 0 { lo[j].clone() } else { hi[j].clone() })
                .collect();
            let mut v = Vertex::from_rats(&coords);
            v.active = (0..dim)
                .map(|j| (2 * j + (mask >> j & 1)) as u32)
                .collect();
            v.active.sort_unstable();
            vertices.push(v);
        }
        Cutter { dim, vertices, constraints, stats: CutterStats::default() }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Number of initial box constraints.
    pub fn box_constraint_count(&self) -> u32 {
        2 * self.dim as u32
    }

    /// Numerator of the exact slack over the positive denominator
    /// `v.den * c.rhs_den`; its sign is the side of the vertex.
    fn slack_num(&self, c: &IntConstraint, v: &Vertex) -> BigInt {
        let mut acc = BigInt::zero();
        for (a, z) in c.normal.iter().zip(&v.nums) {
            acc += a * z;
        }
        acc * &c.rhs_den - &c.rhs_num * &v.den
    }

    /// Intersect with one more halfspace. Returns false once the polytope is
    /// empty (and stays empty).
    pub fn insert(&mut self, c: IntConstraint) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let idx = self.constraints.len() as u32;
        self.stats.inserts += 1;
        self.stats.max_verts = self.stats.max_verts.max(self.vertices.len());
        self.stats.slack_evals += self.vertices.len();
        let slacks: Vec<BigInt> = self.vertices.iter().map(|v| self.slack_num(&c, v)).collect();
        let signs: Vec<i32> = slacks.iter().map(int_sign).collect();

        if signs.iter().all(|&s| s >= 0) {
            for (v, &s) in self.vertices.iter_mut().zip(&signs) {
                if s == 0 {
                    v.active.push(idx);
                }
            }
            self.constraints.push(c);
            return true;
        }
        if signs.iter().all(|&s| s < 0) {
            self.vertices.clear();
            self.constraints.push(c);
            return false;
        }

        let strict_keep: Vec<usize> = (0..self.vertices.len()).filter(|&i| signs[i] > 0).collect();
        let drop: Vec<usize> = (0..self.vertices.len()).filter(|&i| signs[i] < 0).collect();

        self.stats.cuts += 1;
        let mut new_vertices: Vec<Vertex> = Vec::new();
        for &ki in &strict_keep {
            for &di in &drop {
                self.stats.pairs += 1;
                let vk = &self.vertices[ki];
                let vd = &self.vertices[di];
                let common = sorted_intersection(&vk.active, &vd.active);
                if !self.is_edge(&common, vk, vd) {
                    continue;
                }
                // Crossing point v = vk + t (vd - vk) where the slack
                // vanishes; true slacks are slack_num / (den * rhs_den).
                let a = &slacks[ki] * &vd.den;
                let b = &slacks[di] * &vk.den;
                let t = Rat::new(a.clone(), a - b); // in (0, 1)
                let ck = vk.coords();
                let cd = vd.coords();
                let coords: Vec<Rat> = ck
                    .iter()
                    .zip(&cd)
                    .map(|(x, y)| x + &t * (y - x))
                    .collect();
                let mut v = Vertex::from_rats(&coords);
                let mut active = common;
                active.push(idx);
                active.sort_unstable();
                v.active = active;
                debug_assert_eq!(int_sign(&self.slack_num(&c, &v)), 0);
                new_vertices.push(v);
            }
        }

        let mut kept: Vec<Vertex> = (0..self.vertices.len())
            .filter(|&i| signs[i] >= 0)
            .map(|i| {
                let mut v = self.vertices[i].clone();
                if signs[i] == 0 {
                    v.active.push(idx);
                }
                v
            })
            .collect();
        kept.extend(new_vertices);
        self.vertices = kept;
        self.constraints.push(c);
        !self.vertices.is_empty()
    }

    /// Are two distinct vertices the endpoints of an edge? Their common tight
    /// constraints must span a (dim-1)-dimensional normal space. At a vertex
    /// with exactly `dim` tight constraints those constraints are
    /// independent, so counting suffices; the rank test only runs when both
    /// endpoints are degenerate.
    fn is_edge(&self, common: &[u32], vk: &Vertex, vd: &Vertex) -> bool {
        if common.len() < self.dim - 1 {
            return false;
        }
        if vk.active.len() == self.dim || vd.active.len() == self.dim {
            return common.len() == self.dim - 1;
        }
        let rows: Vec<Vec<BigInt>> = common
            .iter()
            .map(|&i| self.constraints[i as usize].normal.clone())
            .collect();
        linalg::rank_int(&rows) == self.dim - 1
        // note: rank path taken only for degenerate endpoints
    }

    /// True when some final vertex has a box constraint tight: the maintained
    /// region escaped the data hull, which callers treat as an error.
    pub fn touches_box(&self) -> bool {
        let nb = self.box_constraint_count();
        self.vertices.iter().any(|v| v.active.iter().any(|&a| a < nb))
    }
}

fn sorted_intersection(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(x: i64) -> Rat {
        Rat::from(BigInt::from(x))
    }

    fn box01() -> Cutter {
        Cutter::from_box(&[r(-2), r(-2)], &[r(2), r(2)])
    }

    fn sorted_coords(c: &Cutter) -> Vec<Vec<Rat>> {
        let mut v: Vec<Vec<Rat>> = c.vertices().iter().map(|v| v.coords()).collect();
        v.sort();
        v
    }

    #[test]
    fn box_has_corner_vertices() {
        let c = box01();
        assert_eq!(c.vertices().len(), 4);
    }

    #[test]
    fn cut_to_unit_square() {
        let mut c = box01();
        // x >= 0, y >= 0, -x >= -1, -y >= -1
        let cons = [
            (vec![1i64, 0], 0i64),
            (vec![0, 1], 0),
            (vec![-1, 0], -1),
            (vec![0, -1], -1),
        ];
        for (n, q) in cons {
            let ok = c.insert(IntConstraint::new(
                n.into_iter().map(BigInt::from).collect(),
                BigInt::from(q),
                BigInt::one(),
            ));
            assert!(ok);
        }
        let got = sorted_coords(&c);
        let want: Vec<Vec<Rat>> = vec![
            vec![r(0), r(0)],
            vec![r(0), r(1)],
            vec![r(1), r(0)],
            vec![r(1), r(1)],
        ];
        assert_eq!(got, want);
        assert!(!c.touches_box());
    }

    #[test]
    fn opposite_halfspaces_leave_a_segment_then_empty() {
        let mut c = box01();
        // x >= 0 and -x >= 0 pin x = 0.
        for (n, q) in [(vec![1i64, 0], 0i64), (vec![-1, 0], 0)] {
            assert!(c.insert(IntConstraint::new(
                n.into_iter().map(BigInt::from).collect(),
                BigInt::from(q),
                BigInt::one(),
            )));
        }
        assert_eq!(c.vertices().len(), 2); // segment endpoints on the box
        assert!(c.touches_box());
        // Now demand x >= 1: empty.
        assert!(!c.insert(IntConstraint::new(
            vec![BigInt::from(1), BigInt::zero()],
            BigInt::from(1),
            BigInt::one(),
        )));
        assert!(c.is_empty());
    }

    #[test]
    fn redundant_constraint_changes_nothing() {
        let mut c = box01();
        let before = sorted_coords(&c);
        assert!(c.insert(IntConstraint::new(
            vec![BigInt::from(1), BigInt::zero()],
            BigInt::from(-10),
            BigInt::one(),
        )));
        assert_eq!(sorted_coords(&c), before);
    }

    #[test]
    fn three_dimensional_corner_cut() {
        let mut c = Cutter::from_box(&[r(0), r(0), r(0)], &[r(1), r(1), r(1)]);
        // Slice off the origin corner: x + y + z >= 1/2.
        assert!(c.insert(IntConstraint::new(
            vec![BigInt::one(), BigInt::one(), BigInt::one()],
            BigInt::one(),
            BigInt::from(2),
        )));
        // 8 - 1 corners kept, 3 new triangle vertices.
        assert_eq!(c.vertices().len(), 10);
    }
}
