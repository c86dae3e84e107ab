//! The poset of regions of an arrangement, with exact lattice tables.
//!
//! Chambers are ordered by containment of separating sets, stored as
//! bitmasks; covers are the single-bit steps. Join and meet are tabulated by
//! brute force over the finite poset, with existence and uniqueness verified
//! rather than assumed.

use crate::arrangement::{Arrangement, Chamber};
use crate::coxeter::WeylGroup;
use crate::error::{Error, Result};
use crate::linalg::{sign_of, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cover {
    pub lower: usize,
    pub upper: usize,
    /// Index of the hyperplane separating the two chambers.
    pub hyperplane: usize,
}

#[derive(Clone, Debug)]
pub struct RegionPoset {
    pub masks: Vec<u128>,
    pub covers: Vec<Cover>,
    pub lower_covers: Vec<Vec<usize>>,
    pub upper_covers: Vec<Vec<usize>>,
    join: Vec<u32>,
    meet: Vec<u32>,
    pub bottom: usize,
    pub top: usize,
}

const TABLE_LIMIT: usize = 16_384;

impl RegionPoset {
    pub fn build(arr: &Arrangement, chambers: &[Chamber]) -> Result<Self> {
        let n = chambers.len();
        if n > TABLE_LIMIT {
            return Err(Error::Unsupported(format!(
                "{n} chambers exceeds the lattice table limit {TABLE_LIMIT}"
            )));
        }
        let masks: Vec<u128> = chambers.iter().map(|c| c.signs).collect();
        let bottom = masks
            .iter()
            .position(|&m| m == 0)
            .ok_or_else(|| Error::NotLattice("no base chamber".into()))?;
        let full: u128 = if arr.normals.len() == 128 {
            u128::MAX
        } else {
            (1u128 << arr.normals.len()) - 1
        };
        let top = masks
            .iter()
            .position(|&m| m == full)
            .ok_or_else(|| Error::NotLattice("no antipodal chamber".into()))?;

        // Covers: sign vectors differing in exactly one coordinate, with the
        // lower chamber on the base side. For reflection and rank-2
        // arrangements this single-flip rule is exact adjacency.
        let mut covers = Vec::new();
        let mut lower_covers = vec![Vec::new(); n];
        let mut upper_covers = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                let diff = masks[a] ^ masks[b];
                if diff.count_ones() == 1 && masks[a] & diff == 0 {
                    let hyperplane = diff.trailing_zeros() as usize;
                    lower_covers[b].push(a);
                    upper_covers[a].push(b);
                    covers.push(Cover { lower: a, upper: b, hyperplane });
                }
            }
        }
        covers.sort_by_key(|c| (c.lower, c.upper));

        let mut poset = RegionPoset {
            masks,
            covers,
            lower_covers,
            upper_covers,
            join: vec![u32::MAX; n * n],
            meet: vec![u32::MAX; n * n],
            bottom,
            top,
        };
        poset.fill_tables()?;
        Ok(poset)
    }

    fn fill_tables(&mut self) -> Result<()> {
        let n = self.masks.len();
        for a in 0..n {
            for b in a..n {
                let j = self.bound(a, b, true).ok_or_else(|| {
                    Error::NotLattice(format!("join of {a} and {b} does not exist"))
                })?;
                let m = self.bound(a, b, false).ok_or_else(|| {
                    Error::NotLattice(format!("meet of {a} and {b} does not exist"))
                })?;
                self.join[a * n + b] = j as u32;
                self.join[b * n + a] = j as u32;
                self.meet[a * n + b] = m as u32;
                self.meet[b * n + a] = m as u32;
            }
        }
        Ok(())
    }

    /// Unique least upper (or greatest lower) bound, found by intersecting
    /// (or uniting) the separating sets of all candidates and checking the
    /// result is itself a candidate.
    fn bound(&self, a: usize, b: usize, upper: bool) -> Option<usize> {
        let mut acc: Option<u128> = None;
        for (c, &m) in self.masks.iter().enumerate() {
            let is_bound = if upper {
                self.leq(a, c) && self.leq(b, c)
            } else {
                self.leq(c, a) && self.leq(c, b)
            };
            if is_bound {
                acc = Some(match acc {
                    None => m,
                    Some(x) => {
                        if upper {
                            x & m
                        } else {
                            x | m
                        }
                    }
                });
                let _ = c;
            }
        }
        let target = acc?;
        self.masks.iter().position(|&m| m == target)
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.masks[a] & !self.masks[b] == 0
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b] as usize
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b] as usize
    }

    /// Elements covering exactly one element, each with its unique lower cover.
    pub fn join_irreducibles(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .filter(|&c| self.lower_covers[c].len() == 1)
            .map(|c| (c, self.lower_covers[c][0]))
            .collect()
    }

    /// The j-label of a cover: the minimum G with G v lower = upper.
    pub fn j_label(&self, cover: Cover) -> Result<usize> {
        let candidates: Vec<usize> = (0..self.len())
            .filter(|&g| self.join(g, cover.lower) == cover.upper)
            .collect();
        let target: u128 = candidates
            .iter()
            .fold(u128::MAX, |acc, &g| acc & self.masks[g]);
        let min = candidates
            .iter()
            .copied()
            .find(|&g| self.masks[g] == target)
            .ok_or(Error::NonUniqueLabel(cover.lower, cover.upper))?;
        debug_assert!(self.lower_covers[min].len() == 1);
        Ok(min)
    }

    /// Interior point of the facet shared by a cover, found by cutting the
    /// segment between the two representatives with the separating wall.
    pub fn facet_point(&self, arr: &Arrangement, chambers: &[Chamber], cover: Cover) -> Vec<Rat> {
        let lo = &chambers[cover.lower].rep;
        let hi = &chambers[cover.upper].rep;
        let a = arr.evaluate(cover.hyperplane, lo);
        let b = arr.evaluate(cover.hyperplane, hi);
        debug_assert!(sign_of(&a) > 0 && sign_of(&b) < 0);
        let t = &a / (&a - &b);
        lo.iter()
            .zip(hi)
            .map(|(x, y)| x + &t * (y - x))
            .collect()
    }

    /// Verifies the cover list against the Weyl group: covers must be exactly
    /// the pairs chamber(v) < chamber(v s_i) with the length increasing.
    pub fn check_covers_match_length(&self, chambers: &[Chamber], group: &WeylGroup) -> Result<u64> {
        let mut expected: Vec<(usize, usize)> = Vec::new();
        for (ci, ch) in chambers.iter().enumerate() {
            let w = ch.weyl.ok_or_else(|| {
                Error::Unsupported("length check requires a reflection arrangement".into())
            })?;
            for i in 0..group.cartan.rank() {
                let v = group.right_mult[w][i];
                if group.elements[v].length == group.elements[w].length + 1 {
                    let cj = chambers.iter().position(|c| c.weyl == Some(v)).unwrap();
                    expected.push((ci, cj));
                }
            }
        }
        expected.sort_unstable();
        let mut actual: Vec<(usize, usize)> = self.covers.iter().map(|c| (c.lower, c.upper)).collect();
        actual.sort_unstable();
        if expected != actual {
            return Err(Error::NotLattice(
                "covers do not match weak-order length steps".into(),
            ));
        }
        Ok(expected.len() as u64)
    }
}
