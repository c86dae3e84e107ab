//! Hyperplane arrangements and their chambers.
//!
//! Points live in the functional space: a point is a rational coordinate
//! vector c with c_i = phi([S_i]), and the hyperplane attached to a root beta
//! is { phi : phi(beta) = 0 }. Normals are therefore integer root vectors and
//! every sign test is an exact dot product.

use crate::coxeter::{CartanData, WeylGroup};
use crate::error::{Error, Result};
use crate::linalg::{dot_ri, primitive, rat, sign_of, Rat};

#[derive(Clone, Debug)]
pub struct Arrangement {
    /// Primitive integer normals, each positive on the base point.
    pub normals: Vec<Vec<i64>>,
    pub base_point: Vec<Rat>,
    pub dim: usize,
}

impl Arrangement {
    /// The reflection arrangement: normals are the positive roots and the
    /// base point is the all-ones functional (positive on every one).
    pub fn reflection(cartan: &CartanData) -> Self {
        let normals = cartan.positive_roots();
        let dim = cartan.rank();
        Arrangement { normals, base_point: vec![rat(1); dim], dim }
    }

    /// An arbitrary central arrangement of lines in the plane. Lines are
    /// sorted by angle in [0, pi), which fixes the labels H_1 <= ... <= H_r;
    /// the base point is placed in the sector between H_r and the opposite
    /// ray of H_1, and every normal is re-oriented positive on it.
    pub fn rank2(input_normals: &[Vec<i64>]) -> Result<Self> {
        for n in input_normals {
            if n.len() != 2 {
                return Err(Error::InvalidRank2(format!("normal {n:?} is not 2-dimensional")));
            }
        }
        let mut prims: Vec<Vec<i64>> = Vec::new();
        for n in input_normals {
            let p = primitive(n)
                .ok_or_else(|| Error::InvalidRank2("zero normal".into()))?;
            prims.push(p);
        }
        // Line directions, normalized into the upper half plane.
        let mut dirs: Vec<Vec<i64>> = prims.iter().map(|n| upper_half(&[-n[1], n[0]])).collect();
        for i in 0..dirs.len() {
            for j in i + 1..dirs.len() {
                if cross(&dirs[i], &dirs[j]) == 0 {
                    return Err(Error::InvalidRank2(format!(
                        "normals {:?} and {:?} define the same line",
                        prims[i], prims[j]
                    )));
                }
            }
        }
        let mut order: Vec<usize> = (0..dirs.len()).collect();
        order.sort_by(|&a, &b| {
            if cross(&dirs[a], &dirs[b]) > 0 {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        dirs = order.iter().map(|&i| dirs[i].clone()).collect();
        let mut normals: Vec<Vec<i64>> = order.iter().map(|&i| prims[i].clone()).collect();
        // Base sector: between the last line's direction and the reversal of
        // the first line's direction (the two span an angle < pi).
        let base_dir = if dirs.len() == 1 {
            vec![normals[0][0], normals[0][1]]
        } else {
            let last = dirs.last().unwrap();
            let first = &dirs[0];
            vec![last[0] - first[0], last[1] - first[1]]
        };
        let base_point: Vec<Rat> = base_dir.iter().map(|&x| rat(x)).collect();
        for n in normals.iter_mut() {
            let v = dot_ri(&base_point, n);
            let s = sign_of(&v);
            if s == 0 {
                return Err(Error::InvalidRank2("base point landed on a line".into()));
            }
            if s < 0 {
                for x in n.iter_mut() {
                    *x = -*x;
                }
            }
        }
        Ok(Arrangement { normals, base_point, dim: 2 })
    }

    pub fn evaluate(&self, k: usize, point: &[Rat]) -> Rat {
        dot_ri(point, &self.normals[k])
    }

    /// Sign vector of a point as a bitmask: bit k set = negative side of
    /// normal k. Returns None if the point lies on some hyperplane.
    pub fn sign_mask(&self, point: &[Rat]) -> Option<u128> {
        let mut mask = 0u128;
        for (k, _) in self.normals.iter().enumerate() {
            match sign_of(&self.evaluate(k, point)) {
                0 => return None,
                -1 => mask |= 1 << k,
                _ => {}
            }
        }
        Some(mask)
    }
}

fn cross(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn upper_half(v: &[i64; 2]) -> Vec<i64> {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        vec![v[0], v[1]]
    } else {
        vec![-v[0], -v[1]]
    }
}

#[derive(Clone, Debug)]
pub struct Chamber {
    /// bit k set = this chamber is on the negative side of normal k.
    pub signs: u128,
    pub rep: Vec<Rat>,
    /// Index into the Weyl group when the arrangement is a reflection one.
    pub weyl: Option<usize>,
}

/// Chambers of a reflection arrangement as the Weyl orbit of the base point.
///
/// The chamber labelled by w is base . matrix(w^{-1}); with that convention
/// the separating set of chamber(w) is exactly the inversion set of w, so the
/// poset of regions below is right weak order on the labels.
pub fn weyl_chambers(arr: &Arrangement, group: &WeylGroup) -> Result<Vec<Chamber>> {
    let mut chambers = Vec::with_capacity(group.order());
    for w in 0..group.order() {
        let inv = group.inverse[w];
        let rep = group.elements[inv].act_on_functional(&arr.base_point)?;
        let signs = arr.sign_mask(&rep).ok_or_else(|| {
            Error::ShardConstruction("orbit point landed on a hyperplane".into())
        })?;
        chambers.push(Chamber { signs, rep, weyl: Some(w) });
    }
    // The identity chamber must be the all-positive base chamber.
    debug_assert_eq!(chambers[0].signs, 0);
    Ok(chambers)
}

/// Chambers of a rank-2 arrangement: sectors between consecutive rays.
/// Enumeration starts at the base chamber and proceeds counterclockwise.
pub fn rank2_chambers(arr: &Arrangement) -> Result<Vec<Chamber>> {
    if arr.dim != 2 {
        return Err(Error::Unsupported(
            "chamber enumeration without a Weyl group requires rank 2".into(),
        ));
    }
    // Collect all 2r ray directions and sort them by full angle.
    let mut rays: Vec<Vec<i64>> = Vec::new();
    for n in &arr.normals {
        let d = vec![-n[1], n[0]];
        let nd = vec![n[1], -n[0]];
        rays.push(d);
        rays.push(nd);
    }
    rays.sort_by(|a, b| angle_cmp(a, b));
    let m = rays.len();
    let mut chambers = Vec::with_capacity(m);
    for i in 0..m {
        let j = (i + 1) % m;
        // Opposite rays (single-line case): take the ccw perpendicular.
        let mid = if rays[i][0] + rays[j][0] == 0 && rays[i][1] + rays[j][1] == 0 {
            vec![-rays[i][1], rays[i][0]]
        } else {
            vec![rays[i][0] + rays[j][0], rays[i][1] + rays[j][1]]
        };
        let rep: Vec<Rat> = vec![rat(mid[0]), rat(mid[1])];
        let signs = arr
            .sign_mask(&rep)
            .ok_or_else(|| Error::InvalidRank2("sector midpoint on a line".into()))?;
        chambers.push(Chamber { signs, rep, weyl: None });
    }
    // Rotate so the base chamber (all-positive) comes first.
    let base = chambers
        .iter()
        .position(|c| c.signs == 0)
        .ok_or_else(|| Error::InvalidRank2("no all-positive chamber found".into()))?;
    chambers.rotate_left(base);
    Ok(chambers)
}

/// Total order on nonzero integer plane vectors by angle in [0, 2pi).
fn angle_cmp(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    let half = |v: &[i64]| -> u8 {
        if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = cross(a, b);
        if c > 0 {
            std::cmp::Ordering::Less
        } else if c < 0 {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::build_cartan;

    #[test]
    fn reflection_a2() {
        let c = build_cartan('A', 2).unwrap();
        let arr = Arrangement::reflection(&c);
        assert_eq!(arr.normals.len(), 3);
        assert!(arr.normals.contains(&vec![1, 0]));
        assert!(arr.normals.contains(&vec![0, 1]));
        assert!(arr.normals.contains(&vec![1, 1]));
        assert_eq!(arr.base_point, vec![rat(1), rat(1)]);
    }

    #[test]
    fn reflection_d4_normal_count() {
        let c = build_cartan('D', 4).unwrap();
        assert_eq!(Arrangement::reflection(&c).normals.len(), 12);
    }

    #[test]
    fn weyl_chambers_a2() {
        let c = build_cartan('A', 2).unwrap();
        let g = WeylGroup::generate(&c);
        let arr = Arrangement::reflection(&c);
        let chambers = weyl_chambers(&arr, &g).unwrap();
        assert_eq!(chambers.len(), 6);
        assert_eq!(chambers[0].signs, 0);
        // chamber of s_1 has rep (-1, 2)
        let s1 = g.element_of_word(&[0]);
        assert_eq!(chambers[s1].rep, vec![rat(-1), rat(2)]);
        // all sign vectors distinct
        let mut signs: Vec<u128> = chambers.iter().map(|c| c.signs).collect();
        signs.sort();
        signs.dedup();
        assert_eq!(signs.len(), 6);
    }

    #[test]
    fn rank2_single_line() {
        let arr = Arrangement::rank2(&[vec![0, 1]]).unwrap();
        let chambers = rank2_chambers(&arr).unwrap();
        assert_eq!(chambers.len(), 2);
    }

    #[test]
    fn rank2_rejects_bad_input() {
        assert!(Arrangement::rank2(&[vec![1, 0], vec![-2, 0]]).is_err());
        assert!(Arrangement::rank2(&[vec![0, 0]]).is_err());
        assert!(Arrangement::rank2(&[vec![1, 2, 3]]).is_err());
    }

    #[test]
    fn rank2_four_lines() {
        // Integer stand-ins for four lines spaced roughly 45 degrees apart.
        let arr = Arrangement::rank2(&[
            vec![-1, 2],
            vec![-2, 1],
            vec![-2, -1],
            vec![-1, -2],
        ])
        .unwrap();
        assert_eq!(arr.normals.len(), 4);
        let chambers = rank2_chambers(&arr).unwrap();
        assert_eq!(chambers.len(), 8);
        assert_eq!(chambers[0].signs, 0);
        for n in &arr.normals {
            assert!(sign_of(&dot_ri(&arr.base_point, n)) > 0);
        }
    }

    #[test]
    fn rank2_matches_reflection_path_for_a2() {
        let c = build_cartan('A', 2).unwrap();
        let refl = Arrangement::reflection(&c);
        let via_rank2 = Arrangement::rank2(&refl.normals).unwrap();
        // Same lines; chamber counts agree.
        assert_eq!(via_rank2.normals.len(), 3);
        assert_eq!(rank2_chambers(&via_rank2).unwrap().len(), 6);
    }
}
