//! King semistability: exact functional evaluations over an exhaustively
//! enumerated set of submodule dimension vectors.
//!
//! Submodules are enumerated over small finite fields (arrow matrices scaled
//! to primitive integers first, which does not change which subspaces are
//! closed), and the dimension-vector sets must agree across all requested
//! primes; a disagreement is an error, never a silent choice.

use crate::algebra::AlgebraTable;
use crate::error::{Error, Result};
use crate::linalg::{dot_rr, primitive_of_rational, rat, sign_of, QMat, Rat};
use crate::rep::{
    end_dim, hom_space, image_sub_rep, kernel_sub_rep, QuiverRep,
};
use num_traits::Zero;
use std::collections::BTreeSet;

pub type StabilityFunctional = Vec<Rat>;

/// phi([M]) as an exact rational.
pub fn evaluate(phi: &[Rat], class: &[i64]) -> Result<Rat> {
    if phi.len() != class.len() {
        return Err(Error::DimensionMismatch { expected: phi.len(), got: class.len() });
    }
    let class_r: Vec<Rat> = class.iter().map(|&x| rat(x)).collect();
    Ok(dot_rr(phi, &class_r))
}

#[derive(Clone, Debug)]
pub struct DimVectorSet {
    pub module_dims: Vec<usize>,
    pub achievable: BTreeSet<Vec<usize>>,
    pub primes_used: Vec<u64>,
}

/// All dimension vectors of submodules of M, by exhaustive closure over each
/// prime field: cyclic submodules from every nonzero vector, then pairwise
/// sums until stable.
pub fn submodule_dim_vectors(
    alg: &AlgebraTable,
    m: &QuiverRep,
    primes: &[u64],
) -> Result<DimVectorSet> {
    if primes.is_empty() {
        return Err(Error::Unsupported("at least one prime is required".into()));
    }
    let mut sets: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    for &p in primes {
        sets.push(submodules_mod_p(alg, m, p)?);
    }
    for w in sets.windows(2) {
        if w[0] != w[1] {
            return Err(Error::PrimeDisagreement {
                primes: primes.to_vec(),
                detail: format!(
                    "sets of sizes {} and {} differ; inspect the module by hand",
                    w[0].len(),
                    w[1].len()
                ),
            });
        }
    }
    Ok(DimVectorSet {
        module_dims: m.dims.clone(),
        achievable: sets.pop().unwrap(),
        primes_used: primes.to_vec(),
    })
}

/// Arrow matrices reduced mod p after primitive integer scaling. Scaling a
/// map by a nonzero constant leaves its closed subspaces alone, so the
/// submodule lattice is unaffected.
fn reduce_maps_mod_p(m: &QuiverRep, p: u64) -> Result<Vec<Vec<Vec<u64>>>> {
    let mut out = Vec::with_capacity(m.maps.len());
    for map in &m.maps {
        let mut rows_int: Vec<Vec<i64>> = Vec::with_capacity(map.rows);
        if map.rows * map.cols == 0 || map.is_zero() {
            rows_int = vec![vec![0; map.cols]; map.rows];
        } else {
            let flat: Vec<Rat> = (0..map.rows).flat_map(|i| map.row(i).to_vec()).collect();
            let prim = primitive_of_rational(&flat)
                .ok_or_else(|| Error::Rep("scaling failed".into()))?;
            for i in 0..map.rows {
                rows_int.push(prim[i * map.cols..(i + 1) * map.cols].to_vec());
            }
        }
        out.push(
            rows_int
                .into_iter()
                .map(|r| r.into_iter().map(|x| x.rem_euclid(p as i64) as u64).collect())
                .collect(),
        );
    }
    Ok(out)
}

struct FpRep {
    p: u64,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    maps: Vec<Vec<Vec<u64>>>,
    arrows: Vec<(usize, usize)>,
}

fn submodules_mod_p(alg: &AlgebraTable, m: &QuiverRep, p: u64) -> Result<BTreeSet<Vec<usize>>> {
    let rep = FpRep {
        p,
        dims: m.dims.clone(),
        offsets: m.offsets(),
        maps: reduce_maps_mod_p(m, p)?,
        arrows: alg.arrows.iter().map(|a| (a.from, a.to)).collect(),
    };
    let total = m.total_dim();
    let mut dim_vectors = BTreeSet::new();
    dim_vectors.insert(vec![0usize; m.dims.len()]);
    if total == 0 {
        return Ok(dim_vectors);
    }
    // Cyclic submodules from every nonzero vector of the reduced module.
    let mut subs: Vec<FpGradedSpace> = Vec::new();
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut vector = vec![0u64; total];
    loop {
        // increment base-p counter
        let mut k = 0;
        while k < total {
            vector[k] += 1;
            if vector[k] < p {
                break;
            }
            vector[k] = 0;
            k += 1;
        }
        if k == total {
            break;
        }
        let cyc = rep.cyclic_closure(&vector);
        if seen.insert(cyc.key()) {
            subs.push(cyc);
        }
    }
    // Close under pairwise sums.
    let mut queue: Vec<usize> = (0..subs.len()).collect();
    while let Some(qi) = queue.pop() {
        let current = subs[qi].clone();
        let snapshot = subs.len();
        for other in 0..snapshot {
            let sum = rep.sum(&current, &subs[other]);
            if seen.insert(sum.key()) {
                subs.push(sum);
                queue.push(subs.len() - 1);
            }
        }
    }
    for s in &subs {
        dim_vectors.insert(s.dims());
    }
    Ok(dim_vectors)
}

/// A vertex-graded subspace over F_p, each block in row echelon form.
#[derive(Clone)]
struct FpGradedSpace {
    p: u64,
    blocks: Vec<Vec<Vec<u64>>>,
}

impl FpGradedSpace {
    fn new(p: u64, nv: usize) -> Self {
        FpGradedSpace { p, blocks: vec![Vec::new(); nv] }
    }

    fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    fn key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for b in &self.blocks {
            out.push(255);
            for row in b {
                out.push(254);
                out.extend(row.iter().map(|&x| x as u8));
            }
        }
        out
    }

    /// Row-reduce and insert; returns true if dimension grew.
    fn insert(&mut self, v: usize, mut row: Vec<u64>) -> bool {
        let p = self.p;
        let block = &mut self.blocks[v];
        for r in block.iter() {
            let lead = r.iter().position(|&x| x != 0).unwrap();
            if row[lead] != 0 {
                let c = row[lead] * inv_mod(r[lead], p) % p;
                for (x, y) in row.iter_mut().zip(r) {
                    *x = (*x + (p - c * y % p)) % p;
                }
            }
        }
        if row.iter().all(|&x| x == 0) {
            return false;
        }
        // normalize leading entry to 1 and back-substitute
        let lead = row.iter().position(|&x| x != 0).unwrap();
        let inv = inv_mod(row[lead], p);
        for x in row.iter_mut() {
            *x = *x * inv % p;
        }
        for r in block.iter_mut() {
            if r[lead] != 0 {
                let c = r[lead];
                for (x, y) in r.iter_mut().zip(&row) {
                    *x = (*x + (p - c * y % p)) % p;
                }
            }
        }
        let at = block
            .iter()
            .position(|r| r.iter().position(|&x| x != 0).unwrap() > lead)
            .unwrap_or(block.len());
        block.insert(at, row);
        true
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is a small prime
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

impl FpRep {
    /// The submodule generated by a total-space vector: graded components,
    /// closed under all arrow maps.
    fn cyclic_closure(&self, vector: &[u64]) -> FpGradedSpace {
        let nv = self.dims.len();
        let mut space = FpGradedSpace::new(self.p, nv);
        let mut frontier: Vec<(usize, Vec<u64>)> = Vec::new();
        for v in 0..nv {
            let comp = vector[self.offsets[v]..self.offsets[v] + self.dims[v]].to_vec();
            if comp.iter().any(|&x| x != 0) && space.insert(v, comp.clone()) {
                frontier.push((v, comp));
            }
        }
        while let Some((v, row)) = frontier.pop() {
            for (ai, &(from, to)) in self.arrows.iter().enumerate() {
                if from != v || self.dims[to] == 0 {
                    continue;
                }
                let image: Vec<u64> = (0..self.dims[to])
                    .map(|i| {
                        let mut acc = 0u64;
                        for (j, &x) in row.iter().enumerate() {
                            acc = (acc + self.maps[ai][i][j] * x) % self.p;
                        }
                        acc
                    })
                    .collect();
                if image.iter().any(|&x| x != 0) && space.insert(to, image.clone()) {
                    frontier.push((to, image));
                }
            }
        }
        space
    }

    fn sum(&self, a: &FpGradedSpace, b: &FpGradedSpace) -> FpGradedSpace {
        let mut out = a.clone();
        for (v, block) in b.blocks.iter().enumerate() {
            for row in block {
                out.insert(v, row.clone());
            }
        }
        out
    }
}

/// King semistability: phi([M]) = 0 and phi([N]) <= 0 for every submodule N.
pub fn is_semistable(
    alg: &AlgebraTable,
    m: &QuiverRep,
    phi: &[Rat],
    primes: &[u64],
) -> Result<bool> {
    let total = evaluate(phi, &m.class())?;
    if !total.is_zero() {
        return Ok(false);
    }
    let set = submodule_dim_vectors(alg, m, primes)?;
    for dims in &set.achievable {
        let class: Vec<i64> = dims.iter().map(|&d| d as i64).collect();
        if sign_of(&evaluate(phi, &class)?) > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A composition-like filtration of a semistable module by semistable
/// bricks: peel non-invertible endomorphisms, recursing on image and kernel.
pub fn brick_filtration(
    alg: &AlgebraTable,
    m: &QuiverRep,
    phi: &[Rat],
    primes: &[u64],
) -> Result<Vec<QuiverRep>> {
    if !is_semistable(alg, m, phi, primes)? {
        return Err(Error::Rep("brick filtration requires a semistable module".into()));
    }
    let mut out = Vec::new();
    filtration_rec(alg, m, &mut out)?;
    Ok(out)
}

fn filtration_rec(alg: &AlgebraTable, m: &QuiverRep, out: &mut Vec<QuiverRep>) -> Result<()> {
    if m.is_zero() {
        return Ok(());
    }
    if end_dim(alg, m) == 1 {
        out.push(m.clone());
        return Ok(());
    }
    let alpha = non_invertible_endo(alg, m)?;
    let (image, _) = image_sub_rep(alg, m, &alpha)?;
    let (kernel, _) = kernel_sub_rep(alg, m, &alpha)?;
    debug_assert!(image.total_dim() < m.total_dim());
    debug_assert!(kernel.total_dim() < m.total_dim());
    filtration_rec(alg, &image, out)?;
    filtration_rec(alg, &kernel, out)?;
    Ok(())
}

/// A nonzero non-invertible endomorphism: a non-scalar basis element if one
/// is already singular, otherwise a basis element shifted by a rational
/// eigenvalue.
fn non_invertible_endo(alg: &AlgebraTable, m: &QuiverRep) -> Result<Vec<QMat>> {
    let end = hom_space(alg, m, m);
    for f in &end {
        let nonzero = f.iter().any(|g| !g.is_zero());
        if nonzero && !f.iter().all(|g| g.is_invertible()) {
            return Ok(f.clone());
        }
    }
    for f in &end {
        let mut total = QMat::zero(m.total_dim(), m.total_dim());
        let off = m.offsets();
        for (v, g) in f.iter().enumerate() {
            for i in 0..g.rows {
                for j in 0..g.cols {
                    total[(i + off[v], j + off[v])] = g[(i, j)].clone();
                }
            }
        }
        for lambda in crate::linalg::rational_roots(&crate::linalg::char_poly(&total)) {
            let shifted: Vec<QMat> = f
                .iter()
                .map(|g| {
                    let mut s = g.clone();
                    for i in 0..s.rows {
                        s[(i, i)] -= &lambda;
                    }
                    s
                })
                .collect();
            if shifted.iter().any(|g| !g.is_zero()) {
                return Ok(shifted);
            }
        }
    }
    Err(Error::IndeterminateBrick(end.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraTable;
    use crate::coxeter::build_cartan;
    use crate::rep::{is_brick, projective, BrickVerdict};

    const PRIMES: [u64; 3] = [2, 3, 5];

    fn a2() -> AlgebraTable {
        AlgebraTable::preprojective(&build_cartan('A', 2).unwrap()).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let phi = vec![rat(1), rat(-1)];
        assert_eq!(evaluate(&phi, &[1, 1]).unwrap(), rat(0));
        assert_eq!(evaluate(&phi, &[1, 0]).unwrap(), rat(1));
        assert_eq!(evaluate(&[rat(0), rat(0)], &[7, 9]).unwrap(), rat(0));
        assert!(evaluate(&phi, &[1, 2, 3]).is_err());
    }

    #[test]
    fn submodules_of_simple() {
        let alg = a2();
        let s1 = QuiverRep::simple(&alg, 0);
        let set = submodule_dim_vectors(&alg, &s1, &PRIMES).unwrap();
        let expect: BTreeSet<Vec<usize>> = [vec![0, 0], vec![1, 0]].into_iter().collect();
        assert_eq!(set.achievable, expect);
    }

    #[test]
    fn submodules_of_projective() {
        let alg = a2();
        let p2 = projective(&alg, 1).unwrap();
        let set = submodule_dim_vectors(&alg, &p2, &PRIMES).unwrap();
        let expect: BTreeSet<Vec<usize>> =
            [vec![0, 0], vec![1, 0], vec![1, 1]].into_iter().collect();
        assert_eq!(set.achievable, expect);
    }

    #[test]
    fn submodules_of_semisimple_sum() {
        let alg = a2();
        let s1 = QuiverRep::simple(&alg, 0);
        let s2 = QuiverRep::simple(&alg, 1);
        let m = s1.direct_sum(&s2, &alg);
        let set = submodule_dim_vectors(&alg, &m, &PRIMES).unwrap();
        let expect: BTreeSet<Vec<usize>> =
            [vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]].into_iter().collect();
        assert_eq!(set.achievable, expect);
    }

    #[test]
    fn semistability_examples() {
        let alg = a2();
        let s1 = QuiverRep::simple(&alg, 0);
        // S_1 is semistable anywhere on [S_1]-perp
        assert!(is_semistable(&alg, &s1, &[rat(0), rat(5)], &PRIMES).unwrap());
        assert!(is_semistable(&alg, &s1, &[rat(0), rat(-5)], &PRIMES).unwrap());
        // P_2 is destabilized by its socle S_1 where phi([S_1]) > 0
        let p2 = projective(&alg, 1).unwrap();
        assert!(!is_semistable(&alg, &p2, &[rat(1), rat(-1)], &PRIMES).unwrap());
        assert!(is_semistable(&alg, &p2, &[rat(-1), rat(1)], &PRIMES).unwrap());
        // at the origin everything is semistable
        let zero = vec![rat(0), rat(0)];
        for m in [&s1, &p2] {
            assert!(is_semistable(&alg, m, &zero, &PRIMES).unwrap());
        }
        // generic phi kills everything
        let generic = vec![rat(2), rat(1)];
        for i in 0..2 {
            let p = projective(&alg, i).unwrap();
            let s = QuiverRep::simple(&alg, i);
            assert!(!is_semistable(&alg, &p, &generic, &PRIMES).unwrap());
            assert!(!is_semistable(&alg, &s, &generic, &PRIMES).unwrap());
        }
    }

    #[test]
    fn filtration_of_simple() {
        let alg = a2();
        let s1 = QuiverRep::simple(&alg, 0);
        let phi = vec![rat(0), rat(3)];
        let parts = brick_filtration(&alg, &s1, &phi, &PRIMES).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].dims, vec![1, 0]);
    }

    #[test]
    fn filtration_of_square() {
        let alg = a2();
        let s1 = QuiverRep::simple(&alg, 0);
        let m = s1.direct_sum(&s1, &alg);
        let phi = vec![rat(0), rat(-2)];
        let parts = brick_filtration(&alg, &m, &phi, &PRIMES).unwrap();
        assert_eq!(parts.len(), 2);
        for p in &parts {
            assert_eq!(p.dims, vec![1, 0]);
        }
    }

    #[test]
    fn filtration_of_projective_sum_at_origin() {
        let alg = a2();
        let p1 = projective(&alg, 0).unwrap();
        let p2 = projective(&alg, 1).unwrap();
        let m = p1.direct_sum(&p2, &alg);
        let phi = vec![rat(0), rat(0)];
        let parts = brick_filtration(&alg, &m, &phi, &PRIMES).unwrap();
        let mut sums = vec![0i64; 2];
        for part in &parts {
            assert_eq!(is_brick(&alg, part), BrickVerdict::Brick);
            assert!(is_semistable(&alg, part, &phi, &PRIMES).unwrap());
            for (s, d) in sums.iter_mut().zip(&part.class()) {
                *s += d;
            }
        }
        assert_eq!(sums, vec![2, 2]);
    }

    #[test]
    fn filtration_rejects_unstable_input() {
        let alg = a2();
        let p2 = projective(&alg, 1).unwrap();
        assert!(brick_filtration(&alg, &p2, &[rat(1), rat(-1)], &PRIMES).is_err());
    }
}
