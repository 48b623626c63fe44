//! Exact dense linear algebra on small matrices.
//!
//! Everything here is O(p^3)-ish Gaussian elimination over `BigRational`, or
//! fraction-free Bareiss over `BigInt` where only a determinant sign is
//! needed. Matrices are row-major `Vec<Vec<_>>`; sizes are desk scale (p
//! rarely above 5), so clarity beats cleverness.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::{dot, Rat};

/// Exact determinant of a square integer matrix via fraction-free Bareiss
/// elimination.
pub fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact division (Bareiss)
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Determinant sign of a square integer matrix. Returns -1, 0 or +1.
pub fn det_sign_int(m: &[Vec<BigInt>]) -> i32 {
    let d = det_int(m);
    if d.is_positive() {
        1
    } else if d.is_negative() {
        -1
    } else {
        0
    }
}

/// Generalized cross product: an integer vector orthogonal to all `rows`
/// (each of length `dim`, with `rows.len() == dim - 1`), via cofactor
/// expansion. All-zero iff the rows are linearly dependent.
pub fn cofactor_normal(rows: &[Vec<BigInt>], dim: usize) -> Vec<BigInt> {
    debug_assert_eq!(rows.len() + 1, dim);
    let mut normal = Vec::with_capacity(dim);
    for k in 0..dim {
        let minor: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let d = det_int(&minor);
        normal.push(if k % 2 == 0 { d } else { -d });
    }
    normal
}

pub fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// The matrix `A` with `cofactor_normal([rows.., w], dim) = A w` for every
/// `w`: the cofactor normal is linear in its final row, and column `l` of
/// `A` is the normal with the unit vector `e_l` plugged in.
pub fn cofactor_coefficients(rows: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    debug_assert_eq!(rows.len() + 2, dim);
    let mut columns = Vec::with_capacity(dim);
    for l in 0..dim {
        let mut unit = vec![BigInt::zero(); dim];
        unit[l] = BigInt::one();
        let mut with_unit = rows.to_vec();
        with_unit.push(unit);
        columns.push(cofactor_normal(&with_unit, dim));
    }
    // Transpose the columns into row-major form.
    (0..dim)
        .map(|k| (0..dim).map(|l| columns[l][k].clone()).collect())
        .collect()
}

/// `A v` for a row-major square integer matrix.
pub fn int_mat_vec(a: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|row| int_dot(row, v)).collect()
}

/// Divide an integer vector by the gcd of its entries.
pub fn primitive_int(mut v: Vec<BigInt>) -> Vec<BigInt> {
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

/// Indices of a maximal linearly independent subset of integer rows, via
/// fraction-free elimination with gcd reduction.
pub fn independent_subset_int(rows: &[Vec<BigInt>]) -> Vec<usize> {
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut picked = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for b in &basis {
            let lead = b.iter().position(|x| !x.is_zero()).unwrap();
            if !v[lead].is_zero() {
                let f_keep = b[lead].clone();
                let f_drop = v[lead].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    *x = &*x * &f_keep - y * &f_drop;
                }
                v = primitive_int(v);
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            basis.push(v);
            picked.push(i);
        }
    }
    picked
}

/// Rank of a family of integer rows.
pub fn rank_int(rows: &[Vec<BigInt>]) -> usize {
    independent_subset_int(rows).len()
}

/// Determinant of a square rational matrix.
pub fn det_rat(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::one();
    for k in 0..n {
        let pivot = match (k..n).find(|&i| !a[i][k].is_zero()) {
            Some(i) => i,
            None => return Rat::zero(),
        };
        if pivot != k {
            a.swap(k, pivot);
            det = -det;
        }
        det *= &a[k][k];
        let inv = a[k][k].recip();
        for j in k..n {
            a[k][j] *= &inv;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in k..n {
                let sub = &f * &a[k][j];
                a[i][j] -= sub;
            }
        }
    }
    det
}

/// Rank of a rational matrix (rows are vectors).
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    row_echelon(rows).len()
}

/// Reduced independent rows spanning the same row space.
fn row_echelon(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for row in rows {
        let mut v = row.clone();
        for b in &basis {
            let lead = b.iter().position(|x| !x.is_zero()).unwrap();
            if !v[lead].is_zero() {
                let f = &v[lead] / &b[lead];
                for (x, y) in v.iter_mut().zip(b) {
                    let sub = &f * y;
                    *x -= sub;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            basis.push(v);
        }
    }
    basis
}

/// Indices of a maximal linearly independent subset of `rows`, in order.
pub fn independent_subset(rows: &[Vec<Rat>]) -> Vec<usize> {
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    let mut picked = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for b in &basis {
            let lead = b.iter().position(|x| !x.is_zero()).unwrap();
            if !v[lead].is_zero() {
                let f = &v[lead] / &b[lead];
                for (x, y) in v.iter_mut().zip(b) {
                    let sub = &f * y;
                    *x -= sub;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            basis.push(v);
            picked.push(i);
        }
    }
    picked
}

/// Solve the square system `A x = b` exactly. `None` if `A` is singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    debug_assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, pivot);
        let inv = m[k][k].recip();
        for j in k..=n {
            m[k][j] *= &inv;
        }
        for i in 0..n {
            if i != k && !m[i][k].is_zero() {
                let f = m[i][k].clone();
                for j in k..=n {
                    let sub = &f * &m[k][j];
                    m[i][j] -= sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// A nonzero vector orthogonal to every row of `rows` (rows of length `dim`).
/// `None` when the rows already span the full space.
pub fn orthogonal_to(rows: &[Vec<Rat>], dim: usize) -> Option<Vec<Rat>> {
    let basis = row_echelon(rows);
    if basis.len() >= dim {
        return None;
    }
    // Extend the row space with unit vectors to find a coordinate direction
    // independent of it, then solve for the orthogonal complement component.
    // Equivalently: find x with basis * x = 0, x != 0 by back substitution.
    let mut pivots = Vec::new();
    for b in &basis {
        pivots.push(b.iter().position(|x| !x.is_zero()).unwrap());
    }
    let free = (0..dim).find(|j| !pivots.contains(j))?;
    let mut x = vec![Rat::zero(); dim];
    x[free] = Rat::one();
    // Solve in reverse order of the echelon rows.
    for (b, &pj) in basis.iter().zip(&pivots).rev() {
        let s = dot(b, &x);
        if !s.is_zero() {
            let adj = &s / &b[pj];
            x[pj] -= adj;
        }
    }
    debug_assert!(rows.iter().all(|r| dot(r, &x).is_zero()));
    Some(x)
}

/// Orthogonal projection of `v` onto the span of `basis` (independent rows),
/// computed from the normal equations. Returns the projection.
pub fn project_onto_span(v: &[Rat], basis: &[Vec<Rat>]) -> Vec<Rat> {
    if basis.is_empty() {
        return vec![Rat::zero(); v.len()];
    }
    let k = basis.len();
    let mut gram = vec![vec![Rat::zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = dot(&basis[i], &basis[j]);
        }
    }
    let rhs: Vec<Rat> = basis.iter().map(|b| dot(b, v)).collect();
    let coeffs = solve(&gram, &rhs).expect("gram matrix of independent vectors is nonsingular");
    let mut proj = vec![Rat::zero(); v.len()];
    for (c, b) in coeffs.iter().zip(basis) {
        for (p, x) in proj.iter_mut().zip(b) {
            *p += c * x;
        }
    }
    proj
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(x: i64) -> Rat {
        Rat::from(BigInt::from(x))
    }

    #[test]
    fn det_sign_matches_rational_det() {
        let m_int = vec![
            vec![BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(5), BigInt::from(3)],
        ];
        let m_rat = vec![vec![r(2), r(1)], vec![r(5), r(3)]];
        assert_eq!(det_sign_int(&m_int), 1);
        assert_eq!(det_rat(&m_rat), r(1));

        let sing = vec![
            vec![BigInt::from(1), BigInt::from(2)],
            vec![BigInt::from(2), BigInt::from(4)],
        ];
        assert_eq!(det_sign_int(&sing), 0);
    }

    #[test]
    fn solve_small_system() {
        let a = vec![vec![r(2), r(0)], vec![r(1), r(3)]];
        let b = vec![r(4), r(5)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![r(2), r(1)]);
        let sing = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        assert!(solve(&sing, &b).is_none());
    }

    #[test]
    fn orthogonal_vector_is_orthogonal() {
        let rows = vec![vec![r(1), r(2), r(3)], vec![r(0), r(1), r(1)]];
        let x = orthogonal_to(&rows, 3).unwrap();
        assert!(rows.iter().all(|row| dot(row, &x).is_zero()));
        assert!(x.iter().any(|v| !v.is_zero()));
        let full = vec![vec![r(1), r(0)], vec![r(0), r(1)]];
        assert!(orthogonal_to(&full, 2).is_none());
    }

    #[test]
    fn projection_recovers_in_span_vectors() {
        let basis = vec![vec![r(1), r(0), r(0)], vec![r(0), r(1), r(0)]];
        let v = vec![r(3), r(4), r(5)];
        let p = project_onto_span(&v, &basis);
        assert_eq!(p, vec![r(3), r(4), r(0)]);
    }

    #[test]
    fn rank_counts_independent_rows() {
        let rows = vec![
            vec![r(1), r(2)],
            vec![r(2), r(4)],
            vec![r(0), r(1)],
        ];
        assert_eq!(rank(&rows), 2);
        assert_eq!(independent_subset(&rows), vec![0, 2]);
    }
}
