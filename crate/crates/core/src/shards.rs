//! Codimension-two flats, split sets, and shards.
//!
//! A hyperplane H is broken at a flat X when H is not one of the two walls of
//! the localized chamber containing the base point; the pieces are encoded by
//! the signs of canonical cut functionals, so membership in a shard closure
//! is a finite list of exact sign tests.

use crate::arrangement::{Arrangement, Chamber};
use crate::error::{Error, Result};
use crate::linalg::{dot_ri, primitive_of_rational, rat, sign_of, QMat, Rat, SpanSolver, Subspace};
use crate::poset::{Cover, RegionPoset};
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct Codim2Flat {
    /// Indices of all hyperplanes containing the flat, sorted.
    pub hyperplanes: Vec<usize>,
    /// Integer basis of the flat itself.
    pub basis: Vec<Vec<i64>>,
    /// Hyperplanes split at this flat: all except the two walls of the
    /// localized chamber containing the base point.
    pub split: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShardCut {
    pub flat: usize,
    /// Canonical cut functional: the normal of the smallest-index hyperplane
    /// other than the shard's own that contains the flat.
    pub functional: Vec<i64>,
    /// Which side of the cut this shard occupies (+1 / -1).
    pub side: i8,
}

#[derive(Clone, Debug)]
pub struct Shard {
    pub hyperplane: usize,
    pub cuts: Vec<ShardCut>,
    /// Interior rational point, taken from a cover facet.
    pub witness: Vec<Rat>,
}

impl Shard {
    /// True iff phi lies in the closed shard: on the hyperplane, and weakly
    /// on the correct side of every cut.
    pub fn closure_contains(&self, arr: &Arrangement, phi: &[Rat]) -> bool {
        if sign_of(&arr.evaluate(self.hyperplane, phi)) != 0 {
            return false;
        }
        self.cuts.iter().all(|cut| {
            let s = sign_of(&dot_ri(phi, &cut.functional));
            s == 0 || s == cut.side
        })
    }

    fn key(&self) -> (usize, Vec<(usize, i8)>) {
        (self.hyperplane, self.cuts.iter().map(|c| (c.flat, c.side)).collect())
    }
}

#[derive(Clone, Debug)]
pub struct ShardSet {
    pub flats: Vec<Codim2Flat>,
    pub shards: Vec<Shard>,
    /// shard index for each cover (parallel to poset.covers).
    pub cover_to_shard: Vec<usize>,
    /// For each hyperplane, the flats that cut it, sorted.
    pub cutting_flats: Vec<Vec<usize>>,
}

/// All pairwise intersections of hyperplanes, deduplicated as subspaces.
pub fn codim2_flats(arr: &Arrangement) -> Vec<Codim2Flat> {
    let r = arr.normals.len();
    let mut flats: Vec<(Subspace, Vec<usize>)> = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            // The flat is determined by the 2-dimensional span of its normals.
            let span = Subspace::from_rows(
                vec![
                    arr.normals[i].iter().map(|&x| rat(x)).collect(),
                    arr.normals[j].iter().map(|&x| rat(x)).collect(),
                ],
                arr.dim,
            );
            if span.dim() != 2 {
                continue;
            }
            if !flats.iter().any(|(s, _)| s == &span) {
                let containing: Vec<usize> = (0..r)
                    .filter(|&k| {
                        span.contains(&arr.normals[k].iter().map(|&x| rat(x)).collect::<Vec<_>>())
                    })
                    .collect();
                flats.push((span, containing));
            }
        }
    }
    flats.sort_by_key(|(_, containing)| containing.clone());
    flats
        .into_iter()
        .map(|(span, hyperplanes)| {
            let normal_rows: Vec<Vec<Rat>> = span.rows.clone();
            let m = QMat::from_rows(normal_rows, arr.dim);
            let basis = m
                .kernel()
                .iter()
                .map(|v| primitive_of_rational(v).expect("kernel vector"))
                .collect();
            let split = split_set(arr, &hyperplanes);
            Codim2Flat { hyperplanes, basis, split }
        })
        .collect()
}

/// Localizes the arrangement at a flat: plane coordinates for each containing
/// hyperplane's normal, plus the image of the base point.
pub(crate) fn localize(
    arr: &Arrangement,
    containing: &[usize],
) -> (Vec<Vec<Rat>>, Vec<Rat>) {
    let k0 = containing[0];
    let k1 = containing[1];
    let rows: Vec<Vec<Rat>> = vec![
        arr.normals[k0].iter().map(|&x| rat(x)).collect(),
        arr.normals[k1].iter().map(|&x| rat(x)).collect(),
    ];
    let solver = SpanSolver::new(&rows, arr.dim);
    let locals: Vec<Vec<Rat>> = containing
        .iter()
        .map(|&k| {
            solver
                .solve(&arr.normals[k].iter().map(|&x| rat(x)).collect::<Vec<_>>())
                .expect("containing normal lies in the span")
        })
        .collect();
    let p = vec![
        dot_ri(&arr.base_point, &arr.normals[k0]),
        dot_ri(&arr.base_point, &arr.normals[k1]),
    ];
    (locals, p)
}

/// Hyperplanes through a flat that are not walls of the localized base
/// chamber. The localized normals are all strictly positive on the base
/// point's image, hence lie in an open half plane; the two walls are the
/// angular extremes.
fn split_set(arr: &Arrangement, containing: &[usize]) -> Vec<usize> {
    if containing.len() <= 2 {
        return Vec::new();
    }
    let (locals, _) = localize(arr, containing);
    let cross = |a: &[Rat], b: &[Rat]| -> Rat { &a[0] * &b[1] - &a[1] * &b[0] };
    let mut lo = 0usize;
    let mut hi = 0usize;
    for i in 1..locals.len() {
        if sign_of(&cross(&locals[i], &locals[lo])) > 0 {
            lo = i;
        }
        if sign_of(&cross(&locals[hi], &locals[i])) > 0 {
            hi = i;
        }
    }
    containing
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != lo && i != hi)
        .map(|(_, &k)| k)
        .collect()
}

impl ShardSet {
    /// Builds all shards from cover facets. Every shard contains at least one
    /// cover facet (this is the content of the bijection with
    /// join-irreducibles), so enumerating facets enumerates shards.
    pub fn build(
        arr: &Arrangement,
        chambers: &[Chamber],
        poset: &RegionPoset,
    ) -> Result<ShardSet> {
        let flats = codim2_flats(arr);
        let r = arr.normals.len();
        let mut cutting_flats: Vec<Vec<usize>> = vec![Vec::new(); r];
        for (xi, x) in flats.iter().enumerate() {
            for &h in &x.split {
                cutting_flats[h].push(xi);
            }
        }
        let mut shards: Vec<Shard> = Vec::new();
        let mut by_key: HashMap<(usize, Vec<(usize, i8)>), usize> = HashMap::new();
        let mut cover_to_shard = Vec::with_capacity(poset.covers.len());
        for &cover in &poset.covers {
            let shard = shard_at_facet(arr, chambers, poset, &flats, &cutting_flats, cover)?;
            let key = shard.key();
            let idx = match by_key.get(&key) {
                Some(&i) => i,
                None => {
                    let i = shards.len();
                    by_key.insert(key, i);
                    shards.push(shard);
                    i
                }
            };
            cover_to_shard.push(idx);
        }
        Ok(ShardSet { flats, shards, cover_to_shard, cutting_flats })
    }

    pub fn shard_of_cover(&self, poset: &RegionPoset, cover: Cover) -> Option<usize> {
        poset
            .covers
            .iter()
            .position(|c| c.lower == cover.lower && c.upper == cover.upper)
            .map(|i| self.cover_to_shard[i])
    }

    /// Locates the shard containing a point that lies on `hyperplane` and on
    /// none of its cuts.
    pub fn shard_containing(
        &self,
        arr: &Arrangement,
        hyperplane: usize,
        point: &[Rat],
    ) -> Result<usize> {
        if sign_of(&arr.evaluate(hyperplane, point)) != 0 {
            return Err(Error::ShardConstruction(
                "point is not on the hyperplane".into(),
            ));
        }
        let cuts = cut_signs(arr, &self.flats, &self.cutting_flats, hyperplane, point)?;
        let key = (hyperplane, cuts.iter().map(|c| (c.flat, c.side)).collect::<Vec<_>>());
        self.shards
            .iter()
            .position(|s| s.key() == key)
            .ok_or_else(|| {
                Error::ShardConstruction(format!(
                    "no shard of hyperplane {hyperplane} realizes the sign vector"
                ))
            })
    }
}

fn cut_signs(
    arr: &Arrangement,
    flats: &[Codim2Flat],
    cutting_flats: &[Vec<usize>],
    hyperplane: usize,
    point: &[Rat],
) -> Result<Vec<ShardCut>> {
    let mut cuts = Vec::new();
    for &xi in &cutting_flats[hyperplane] {
        let k = flats[xi]
            .hyperplanes
            .iter()
            .copied()
            .find(|&k| k != hyperplane)
            .expect("flat lies on at least two hyperplanes");
        let functional = arr.normals[k].clone();
        let side = sign_of(&dot_ri(point, &functional));
        if side == 0 {
            return Err(Error::ShardConstruction(
                "facet point lies on a cutting flat".into(),
            ));
        }
        cuts.push(ShardCut { flat: xi, functional, side });
    }
    Ok(cuts)
}

fn shard_at_facet(
    arr: &Arrangement,
    chambers: &[Chamber],
    poset: &RegionPoset,
    flats: &[Codim2Flat],
    cutting_flats: &[Vec<usize>],
    cover: Cover,
) -> Result<Shard> {
    let q = poset.facet_point(arr, chambers, cover);
    let cuts = cut_signs(arr, flats, cutting_flats, cover.hyperplane, &q)?;
    Ok(Shard { hyperplane: cover.hyperplane, cuts, witness: q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{rank2_chambers, weyl_chambers, Arrangement};
    use crate::coxeter::{build_cartan, WeylGroup};

    fn setup(letter: char, rank: usize) -> (Arrangement, Vec<Chamber>, RegionPoset, ShardSet) {
        let c = build_cartan(letter, rank).unwrap();
        let g = WeylGroup::generate(&c);
        let arr = Arrangement::reflection(&c);
        let ch = weyl_chambers(&arr, &g).unwrap();
        let p = RegionPoset::build(&arr, &ch).unwrap();
        let s = ShardSet::build(&arr, &ch, &p).unwrap();
        (arr, ch, p, s)
    }

    #[test]
    fn flats_a2_single_origin() {
        let (_, _, _, s) = setup('A', 2);
        assert_eq!(s.flats.len(), 1);
        assert_eq!(s.flats[0].hyperplanes, vec![0, 1, 2]);
        assert!(s.flats[0].basis.is_empty());
    }

    #[test]
    fn flats_a1_empty() {
        let c = build_cartan('A', 1).unwrap();
        let arr = Arrangement::reflection(&c);
        assert!(codim2_flats(&arr).is_empty());
    }

    #[test]
    fn flats_a3_seven() {
        let (_, _, _, s) = setup('A', 3);
        assert_eq!(s.flats.len(), 7);
        // rank-2 subsystems: four triples and three orthogonal pairs
        let sizes: Vec<usize> = {
            let mut v: Vec<usize> = s.flats.iter().map(|f| f.hyperplanes.len()).collect();
            v.sort();
            v
        };
        assert_eq!(sizes, vec![2, 2, 2, 3, 3, 3, 3]);
    }

    #[test]
    fn split_a2_is_highest_root() {
        let (arr, _, _, s) = setup('A', 2);
        let split = &s.flats[0].split;
        assert_eq!(split.len(), 1);
        assert_eq!(arr.normals[split[0]], vec![1, 1]);
    }

    #[test]
    fn split_empty_for_two_hyperplane_flats() {
        let (_, _, _, s) = setup('A', 3);
        for f in &s.flats {
            if f.hyperplanes.len() == 2 {
                assert!(f.split.is_empty());
            } else {
                assert_eq!(f.split.len(), 1);
            }
        }
    }

    #[test]
    fn shards_a2_figure_two() {
        let (arr, _, _, s) = setup('A', 2);
        assert_eq!(s.shards.len(), 4);
        let whole: Vec<&Shard> = s.shards.iter().filter(|sh| sh.cuts.is_empty()).collect();
        let halves: Vec<&Shard> = s.shards.iter().filter(|sh| !sh.cuts.is_empty()).collect();
        assert_eq!(whole.len(), 2);
        assert_eq!(halves.len(), 2);
        for h in &halves {
            assert_eq!(arr.normals[h.hyperplane], vec![1, 1]);
        }
        // the two halves sit on opposite sides of the cut
        assert_eq!(halves[0].cuts[0].side * halves[1].cuts[0].side, -1);
    }

    #[test]
    fn shards_a1_single() {
        let c = build_cartan('A', 1).unwrap();
        let g = WeylGroup::generate(&c);
        let arr = Arrangement::reflection(&c);
        let ch = weyl_chambers(&arr, &g).unwrap();
        let p = RegionPoset::build(&arr, &ch).unwrap();
        let s = ShardSet::build(&arr, &ch, &p).unwrap();
        assert_eq!(s.shards.len(), 1);
        assert!(s.shards[0].cuts.is_empty());
    }

    #[test]
    fn shard_count_equals_join_irreducibles() {
        for (letter, rank) in [('A', 2), ('A', 3), ('D', 4)] {
            let (_, _, p, s) = setup(letter, rank);
            assert_eq!(p.join_irreducibles().len(), s.shards.len());
        }
        let (_, _, p2, s2) = setup('A', 2);
        assert_eq!(s2.shards.len(), 4);
        assert_eq!(p2.join_irreducibles().len(), 4);
        let (_, _, p3, s3) = setup('A', 3);
        assert_eq!(s3.shards.len(), 11);
        assert_eq!(p3.join_irreducibles().len(), 11);
    }

    #[test]
    fn fig3_style_arrangement_six_shards() {
        let arr = Arrangement::rank2(&[
            vec![-1, 2],
            vec![-2, 1],
            vec![-2, -1],
            vec![-1, -2],
        ])
        .unwrap();
        let ch = rank2_chambers(&arr).unwrap();
        let p = RegionPoset::build(&arr, &ch).unwrap();
        let s = ShardSet::build(&arr, &ch, &p).unwrap();
        // walls H_1, H_4 stay whole; H_2, H_3 split in two
        assert_eq!(s.flats.len(), 1);
        assert_eq!(s.flats[0].split, vec![1, 2]);
        assert_eq!(s.shards.len(), 6);
        assert_eq!(p.join_irreducibles().len(), 6);
    }

    #[test]
    fn closure_membership() {
        let (arr, _, _, s) = setup('A', 2);
        let origin = vec![rat(0), rat(0)];
        for sh in &s.shards {
            assert!(sh.closure_contains(&arr, &origin));
            assert!(sh.closure_contains(&arr, &sh.witness));
        }
        // witness of one half-line is outside the closure of the other
        let halves: Vec<&Shard> = s.shards.iter().filter(|sh| !sh.cuts.is_empty()).collect();
        assert!(!halves[0].closure_contains(&arr, &halves[1].witness));
        assert!(!halves[1].closure_contains(&arr, &halves[0].witness));
    }

    #[test]
    fn facet_points_interior_to_one_shard() {
        let (arr, ch, p, s) = setup('A', 3);
        for (ci, cover) in p.covers.iter().enumerate() {
            let q = p.facet_point(&arr, &ch, *cover);
            // q is on exactly one hyperplane
            let zeros = (0..arr.normals.len())
                .filter(|&k| sign_of(&arr.evaluate(k, &q)) == 0)
                .count();
            assert_eq!(zeros, 1);
            let found = s.shard_containing(&arr, cover.hyperplane, &q).unwrap();
            assert_eq!(found, s.cover_to_shard[ci]);
        }
    }
}
