//! Extreme rays of pointed cones `{d : A d <= 0}` by the double description
//! method, with integer rays and combinatorial adjacency.

use crate::linalg;
use crate::matroid::subsets::MaskIter;
use crate::rational::{common_denominator, q, Q};
use num_integer::Integer;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub dir: Vec<i64>,
    /// Bit `i` is set when row `i` vanishes on the ray.
    pub zeros: u128,
}

fn eval(row: &[i64], d: &[i64]) -> i128 {
    row.iter().zip(d).map(|(&a, &b)| a as i128 * b as i128).sum()
}

fn primitive(v: Vec<i128>) -> Vec<i64> {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    let g = if g == 0 { 1 } else { g };
    v.into_iter()
        .map(|x| i64::try_from(x / g).expect("ray coordinate overflow"))
        .collect()
}

/// Extreme rays of `{d : row · d <= 0 for every row}`. The rows must span
/// the ambient space, so that the cone is pointed. At most 128 rows.
pub fn extreme_rays(rows: &[Vec<i64>], dim: usize) -> Vec<Ray> {
    assert!(rows.len() <= 128, "too many rows");
    // Pick `dim` independent rows for the initial simplicial cone.
    let mut basis_rows: Vec<usize> = Vec::with_capacity(dim);
    let mut current: Vec<Vec<Q>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if basis_rows.len() == dim {
            break;
        }
        let mut trial = current.clone();
        trial.push(r.iter().map(|&x| q(x)).collect());
        if linalg::rank(&trial) == trial.len() {
            current = trial;
            basis_rows.push(i);
        }
    }
    assert_eq!(basis_rows.len(), dim, "rows do not span; cone is not pointed");

    // Rays of the simplicial cone: columns of -A0^{-1}.
    let mut rays: Vec<Ray> = Vec::with_capacity(dim);
    let mut processed: u128 = 0;
    for &i in &basis_rows {
        processed |= 1 << i;
    }
    for (j, &row_j) in basis_rows.iter().enumerate() {
        let rhs: Vec<Q> = (0..dim).map(|k| if k == j { q(-1) } else { q(0) }).collect();
        let sol = linalg::solve(&current, &rhs).expect("invertible");
        let den = common_denominator(&sol);
        let ints: Vec<i128> = sol
            .iter()
            .map(|x| (x * Q::from_integer(den.clone())).to_integer().to_i128().expect("small"))
            .collect();
        rays.push(Ray {
            dir: primitive(ints),
            zeros: processed & !(1 << row_j),
        });
    }

    for (h, row) in rows.iter().enumerate() {
        if processed >> h & 1 == 1 {
            continue;
        }
        let vals: Vec<i128> = rays.iter().map(|r| eval(row, &r.dir)).collect();
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for (r, &v) in rays.iter().zip(&vals) {
            if v <= 0 {
                let mut r = r.clone();
                if v == 0 {
                    r.zeros |= 1 << h;
                }
                next.push(r);
            }
        }
        for (pi, p) in rays.iter().enumerate() {
            if vals[pi] <= 0 {
                continue;
            }
            for (mi, m) in rays.iter().enumerate() {
                if vals[mi] >= 0 {
                    continue;
                }
                let common = p.zeros & m.zeros;
                if (common.count_ones() as usize) + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == pi || k == mi || r.zeros & common != common);
                if !adjacent {
                    continue;
                }
                let (vp, vm) = (vals[pi], vals[mi]);
                let combo: Vec<i128> = p
                    .dir
                    .iter()
                    .zip(&m.dir)
                    .map(|(&a, &b)| vp * b as i128 - vm * a as i128)
                    .collect();
                next.push(Ray {
                    dir: primitive(combo),
                    zeros: common | 1 << h,
                });
            }
        }
        rays = next;
        processed |= 1 << h;
    }
    rays.sort_by(|a, b| a.dir.cmp(&b.dir));
    rays
}

/// Pairs of extreme rays spanning a 2-face of the cone.
pub fn adjacent_pairs(rays: &[Ray], dim: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            let common = rays[i].zeros & rays[j].zeros;
            if (common.count_ones() as usize) + 2 < dim {
                continue;
            }
            if rays
                .iter()
                .enumerate()
                .all(|(k, r)| k == i || k == j || r.zeros & common != common)
            {
                out.push((i, j));
            }
        }
    }
    out
}

/// Rows vanishing on a ray, as indices.
pub fn zero_rows(ray: &Ray) -> Vec<usize> {
    MaskIter(ray.zeros).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_orthant() {
        // -x <= 0, -y <= 0, -z <= 0: rays are the unit vectors.
        let rows = vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]];
        let rays = extreme_rays(&rows, 3);
        assert_eq!(rays.len(), 3);
        assert_eq!(adjacent_pairs(&rays, 3).len(), 3);
    }

    #[test]
    fn square_pyramid() {
        // Cone over a square: four facets, four rays, four 2-faces.
        let rows = vec![
            vec![-1, 0, -1],
            vec![1, 0, -1],
            vec![0, -1, -1],
            vec![0, 1, -1],
        ];
        let rays = extreme_rays(&rows, 3);
        let mut dirs: Vec<Vec<i64>> = rays.iter().map(|r| r.dir.clone()).collect();
        dirs.sort();
        assert_eq!(
            dirs,
            vec![vec![-1, -1, 1], vec![-1, 1, 1], vec![1, -1, 1], vec![1, 1, 1]]
        );
        for r in &rays {
            assert_eq!(r.zeros.count_ones(), 2);
        }
        assert_eq!(adjacent_pairs(&rays, 3).len(), 4);
    }

    #[test]
    fn redundant_rows_are_harmless() {
        let rows = vec![
            vec![-1, 0],
            vec![0, -1],
            vec![-1, -1],
            vec![-2, -1],
        ];
        let rays = extreme_rays(&rows, 2);
        let mut dirs: Vec<Vec<i64>> = rays.iter().map(|r| r.dir.clone()).collect();
        dirs.sort();
        assert_eq!(dirs, vec![vec![0, 1], vec![1, 0]]);
    }
}
