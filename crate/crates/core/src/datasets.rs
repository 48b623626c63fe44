//! Canned test configurations, seeded Gaussian clouds, and CSV ingestion.
//!
//! Generated coordinates are truncated to nine decimal digits and treated
//! exactly from then on: that keeps rational sizes bounded without ever
//! rounding inside a predicate.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::Error;
use crate::exact::{parse_decimal, Rat};
use crate::geometry::PointCloud;
use crate::median::tukey_median;

/// Where a named cloud came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Generated { recipe: String, seed: Option<u64> },
    Ingested { path: String },
}

/// A cloud with a name, provenance, and a general-position certificate.
#[derive(Debug, Clone)]
pub struct NamedCloud {
    pub name: String,
    pub cloud: PointCloud,
    pub provenance: Provenance,
    /// Set only after the general-position check passed.
    pub certified_general_position: bool,
}

fn certified(name: &str, cloud: PointCloud, provenance: Provenance) -> NamedCloud {
    let certified = cloud.general_position().is_ok();
    NamedCloud {
        name: name.to_string(),
        cloud,
        provenance,
        certified_general_position: certified,
    }
}

fn cloud_from_ints(rows: &[&[i64]]) -> PointCloud {
    let points = rows
        .iter()
        .map(|row| row.iter().map(|&x| Rat::from(BigInt::from(x))).collect())
        .collect();
    PointCloud::new(points).expect("static configuration is well formed")
}

/// The four corners of the unit square. Its maximum depth count is 2 and the
/// median region is the single center point.
pub fn gen_square4() -> NamedCloud {
    let cloud = cloud_from_ints(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
    let named = certified("square4", cloud, Provenance::Generated {
        recipe: "square4".into(),
        seed: None,
    });
    debug_assert!(named.certified_general_position);
    named
}

/// A triangle with one interior point: the median region is the singleton
/// holding that sample, so a sample point is the median here.
pub fn gen_triangle_plus_center() -> NamedCloud {
    let points = vec![
        vec![Rat::from(BigInt::from(0)), Rat::from(BigInt::from(0))],
        vec![Rat::from(BigInt::from(4)), Rat::from(BigInt::from(0))],
        vec![Rat::from(BigInt::from(2)), Rat::from(BigInt::from(4))],
        vec![parse_decimal("2").unwrap(), parse_decimal("1.5").unwrap()],
    ];
    let cloud = PointCloud::new(points).expect("static configuration is well formed");
    let named = certified("triangle-center", cloud, Provenance::Generated {
        recipe: "triangle-center".into(),
        seed: None,
    });
    debug_assert!(named.certified_general_position);
    named
}

/// Regular tetrahedron plus its centroid: five points in R^3 whose maximum
/// depth count is 2 = floor((5-3+2)/2), attaining the upper bound with a
/// singleton median region at the center sample.
pub fn gen_tetrahedron_plus_center() -> NamedCloud {
    let cloud = cloud_from_ints(&[
        &[1, 1, 1],
        &[1, -1, -1],
        &[-1, 1, -1],
        &[-1, -1, 1],
        &[0, 0, 0],
    ]);
    let named = certified("tetra-center", cloud, Provenance::Generated {
        recipe: "tetra-center".into(),
        seed: None,
    });
    debug_assert!(named.certified_general_position);
    named
}

/// A configuration attaining the dimension-adjusted upper bound with zero
/// margin: the unit square for p = 2, the tetrahedron-plus-center for p = 3.
pub fn gen_bound_attaining(p: usize) -> Result<NamedCloud, Error> {
    match p {
        2 => Ok(gen_square4()),
        3 => Ok(gen_tetrahedron_plus_center()),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

const GAUSSIAN_DECIMALS: u32 = 9;
const GAUSSIAN_RETRIES: usize = 64;

/// Standard normal sample with coordinates truncated to nine decimals,
/// regenerated until general position certifies. Deterministic per seed.
pub fn gen_gaussian(n: usize, p: usize, seed: u64) -> Result<NamedCloud, Error> {
    if p < 1 || n <= p {
        return Err(Error::TooFewPoints { n, p });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let denom = BigInt::from(10u64.pow(GAUSSIAN_DECIMALS));
    for _ in 0..GAUSSIAN_RETRIES {
        let points: Vec<Vec<Rat>> = (0..n)
            .map(|_| {
                (0..p)
                    .map(|_| {
                        let x: f64 = rng.sample(StandardNormal);
                        let scaled = (x * 10f64.powi(GAUSSIAN_DECIMALS as i32)).trunc() as i64;
                        Rat::new(BigInt::from(scaled), denom.clone())
                    })
                    .collect()
            })
            .collect();
        let cloud = PointCloud::new(points)?;
        if cloud.general_position().is_ok() {
            let name = format!("gaussian-n{n}-p{p}-s{seed}");
            return Ok(NamedCloud {
                name,
                cloud,
                provenance: Provenance::Generated {
                    recipe: format!("gaussian:n={n},p={p},seed={seed}"),
                    seed: Some(seed),
                },
                certified_general_position: true,
            });
        }
    }
    Err(Error::RetryBudgetExhausted { seed })
}

/// Randomized search for a p = 3 configuration attaining the upper bound:
/// perturbs the tetrahedron-plus-center template by small rationals and
/// keeps the first certified cloud whose maximum depth still reaches the
/// bound. Seed-deterministic; used to regenerate bound-attaining assets.
pub fn search_bound_attaining_p3(seed: u64, attempts: usize) -> Option<NamedCloud> {
    let template = gen_tetrahedron_plus_center();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = template.cloud.len();
    let bound = (n - 3 + 2) / 2;
    for attempt in 0..attempts {
        let points: Vec<Vec<Rat>> = template
            .cloud
            .points()
            .iter()
            .map(|q| {
                q.iter()
                    .map(|x| {
                        let jitter: i64 = rng.random_range(-40..=40);
                        x + Rat::new(BigInt::from(jitter), BigInt::from(1000))
                    })
                    .collect()
            })
            .collect();
        let Ok(cloud) = PointCloud::new(points) else { continue };
        if cloud.general_position().is_err() {
            continue;
        }
        let Ok(median) = tukey_median(&cloud) else { continue };
        if median.kappa_star == bound {
            return Some(NamedCloud {
                name: format!("bound3-s{seed}-a{attempt}"),
                cloud,
                provenance: Provenance::Generated {
                    recipe: format!("bound3-search:seed={seed}"),
                    seed: Some(seed),
                },
                certified_general_position: true,
            });
        }
    }
    None
}

/// Load a cloud from CSV: one point per row, decimal literals, uniform
/// column count. Certification runs and is recorded, but a degenerate cloud
/// still loads; callers decide whether to proceed.
pub fn load_csv(path: &Path, has_header: bool) -> Result<NamedCloud, Error> {
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    let mut points: Vec<Vec<Rat>> = Vec::new();
    let mut width: Option<usize> = None;
    for (i, line) in text.lines().enumerate() {
        let row_no = i + 1;
        if i == 0 && has_header {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        match width {
            None => width = Some(fields.len()),
            Some(w) if w != fields.len() => {
                return Err(Error::Csv {
                    row: row_no,
                    msg: format!("expected {w} fields, got {}", fields.len()),
                })
            }
            _ => {}
        }
        let point = fields
            .iter()
            .map(|f| parse_decimal(f))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Error::Csv { row: row_no, msg: e.to_string() })?;
        points.push(point);
    }
    let cloud = PointCloud::new(points)?;
    Ok(certified(&name, cloud, Provenance::Ingested {
        path: path.display().to_string(),
    }))
}

/// Exact fixed-point decimal rendering; fails when the denominator has a
/// prime factor other than 2 or 5.
pub fn rat_to_exact_decimal(r: &Rat) -> Result<String, Error> {
    let mut den = r.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if den != BigInt::from(1) {
        return Err(Error::NotDecimal(crate::exact::to_fraction_string(r)));
    }
    let digits = twos.max(fives);
    let scale = BigInt::from(10).pow(digits);
    let scaled = r.numer() * (&scale / r.denom());
    let neg = scaled < BigInt::zero();
    let mut body = scaled.magnitude().to_string();
    if digits > 0 {
        while body.len() <= digits as usize {
            body.insert(0, '0');
        }
        body.insert(body.len() - digits as usize, '.');
    }
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let _ = write!(out, "{body}");
    Ok(out)
}

/// Write a cloud as CSV with exact decimal literals.
pub fn save_csv(cloud: &PointCloud, path: &Path) -> Result<(), Error> {
    let mut out = String::new();
    for q in cloud.points() {
        let fields = q
            .iter()
            .map(rat_to_exact_decimal)
            .collect::<Result<Vec<_>, _>>()?;
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::depth_all_samples;
    use crate::median::tukey_median;

    #[test]
    fn square4_is_certified_and_attains_its_bound() {
        let sq = gen_square4();
        assert!(sq.certified_general_position);
        let m = tukey_median(&sq.cloud).unwrap();
        assert_eq!(m.kappa_star, 2); // floor((4-2+2)/2)
        assert_eq!(m.median, vec![parse_decimal("0.5").unwrap(); 2]);
    }

    #[test]
    fn triangle_center_median_is_the_sample() {
        let t4 = gen_triangle_plus_center();
        assert!(t4.certified_general_position);
        let d = depth_all_samples(&t4.cloud).unwrap();
        assert_eq!(d.deepest, vec![3]);
        assert_eq!(d.max_kappa(), 2);
        let m = tukey_median(&t4.cloud).unwrap();
        assert_eq!(m.median, t4.cloud.point(3).to_vec());
    }

    #[test]
    fn tetra_center_attains_p3_bound() {
        let tc = gen_tetrahedron_plus_center();
        assert!(tc.certified_general_position);
        let m = tukey_median(&tc.cloud).unwrap();
        let n = tc.cloud.len();
        assert_eq!(m.kappa_star, (n - 1) / 2); // = floor((n-3+2)/2) = 2
        assert!(m.is_singleton);
        assert_eq!(m.median, tc.cloud.point(4).to_vec());
    }

    #[test]
    fn bound_attaining_dispatch() {
        assert_eq!(gen_bound_attaining(2).unwrap().name, "square4");
        assert_eq!(gen_bound_attaining(3).unwrap().name, "tetra-center");
        assert!(matches!(
            gen_bound_attaining(4),
            Err(Error::UnsupportedDimension(4))
        ));
    }

    #[test]
    fn gaussian_is_seed_deterministic_and_certified() {
        let a = gen_gaussian(20, 3, 7).unwrap();
        let b = gen_gaussian(20, 3, 7).unwrap();
        assert_eq!(a.cloud, b.cloud);
        assert!(a.certified_general_position);
        let c = gen_gaussian(20, 3, 8).unwrap();
        assert_ne!(a.cloud, c.cloud);
    }

    #[test]
    fn gaussian_rejects_tiny_n() {
        assert!(matches!(
            gen_gaussian(2, 2, 0),
            Err(Error::TooFewPoints { n: 2, p: 2 })
        ));
    }

    #[test]
    fn csv_round_trip_square() {
        let dir = std::env::temp_dir().join("hsdepth-test-csv");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("sq4.csv");
        let sq = gen_square4();
        save_csv(&sq.cloud, &path).unwrap();
        let loaded = load_csv(&path, false).unwrap();
        assert_eq!(loaded.cloud, sq.cloud);
        assert!(loaded.certified_general_position);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn csv_errors_carry_row_numbers() {
        let dir = std::env::temp_dir().join("hsdepth-test-csv");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ragged.csv");
        std::fs::write(&path, "0,0\n1,0\n2\n").unwrap();
        match load_csv(&path, false) {
            Err(Error::Csv { row, .. }) => assert_eq!(row, 3),
            other => panic!("expected csv error, got {other:?}"),
        }
        std::fs::remove_file(&path).ok();

        let path = dir.join("short.csv");
        std::fs::write(&path, "0,0,0\n1,1,1\n2,4,8\n").unwrap();
        assert!(matches!(
            load_csv(&path, false),
            Err(Error::TooFewPoints { n: 3, p: 3 })
        ));
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn exact_decimal_rendering() {
        assert_eq!(rat_to_exact_decimal(&parse_decimal("1.5").unwrap()).unwrap(), "1.5");
        assert_eq!(rat_to_exact_decimal(&parse_decimal("-0.25").unwrap()).unwrap(), "-0.25");
        assert_eq!(rat_to_exact_decimal(&parse_decimal("7").unwrap()).unwrap(), "7");
        let third = Rat::new(BigInt::from(1), BigInt::from(3));
        assert!(rat_to_exact_decimal(&third).is_err());
    }

    #[test]
    fn bound_search_finds_a_perturbed_asset() {
        let found = search_bound_attaining_p3(11, 50).expect("search should succeed");
        assert!(found.certified_general_position);
        let m = tukey_median(&found.cloud).unwrap();
        assert_eq!(m.kappa_star, 2);
    }
}
