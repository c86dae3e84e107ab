//! Quiver representations over the rationals: Hom spaces, bricks, quotients,
//! tensoring with vertex ideals, and short exact sequence searches.
//!
//! A representation assigns a rational vector space to each vertex and a
//! matrix to each arrow of the algebra's quiver. Module-level constructions
//! (subquotients of ideals, tensor products) are funneled through
//! `module_from_action`, which splits an abstract module with known basis
//! actions into vertex components using the idempotent projectors.

use crate::algebra::{AlgebraTable, Ideal};
use crate::error::{Error, Result};
use crate::linalg::{rat, QMat, Rat, SpanSolver, Subspace};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct QuiverRep {
    pub dims: Vec<usize>,
    /// maps[a]: dims[to] x dims[from] matrix for the a-th arrow of the algebra.
    pub maps: Vec<QMat>,
}

impl QuiverRep {
    pub fn zero(alg: &AlgebraTable) -> Self {
        let dims = vec![0; alg.n_vertices()];
        let maps = alg.arrows.iter().map(|a| QMat::zero(dims[a.to], dims[a.from])).collect();
        QuiverRep { dims, maps }
    }

    pub fn simple(alg: &AlgebraTable, i: usize) -> Self {
        let mut dims = vec![0; alg.n_vertices()];
        dims[i] = 1;
        let maps = alg
            .arrows
            .iter()
            .map(|a| QMat::zero(dims[a.to], dims[a.from]))
            .collect();
        QuiverRep { dims, maps }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Class in K0: the dimension vector.
    pub fn class(&self) -> Vec<i64> {
        self.dims.iter().map(|&d| d as i64).collect()
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.dims.len() + 1);
        let mut acc = 0;
        for &d in &self.dims {
            off.push(acc);
            acc += d;
        }
        off.push(acc);
        off
    }

    pub fn direct_sum(&self, other: &QuiverRep, alg: &AlgebraTable) -> QuiverRep {
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = alg
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let mut m = QMat::zero(dims[a.to], dims[a.from]);
                for r in 0..self.dims[a.to] {
                    for c in 0..self.dims[a.from] {
                        m[(r, c)] = self.maps[ai][(r, c)].clone();
                    }
                }
                for r in 0..other.dims[a.to] {
                    for c in 0..other.dims[a.from] {
                        m[(r + self.dims[a.to], c + self.dims[a.from])] =
                            other.maps[ai][(r, c)].clone();
                    }
                }
                m
            })
            .collect();
        QuiverRep { dims, maps }
    }

    /// The preprojective relation at every vertex: sum over arrows a of
    /// (a a* - a* a) acts as zero. Only meaningful for doubled quivers.
    pub fn satisfies_preprojective_relation(&self, alg: &AlgebraTable) -> bool {
        let n = alg.n_vertices();
        for v in 0..n {
            let mut acc = QMat::zero(self.dims[v], self.dims[v]);
            for (ai, a) in alg.arrows.iter().enumerate() {
                if a.reverse {
                    continue;
                }
                let star = alg
                    .arrows
                    .iter()
                    .position(|b| b.reverse && b.from == a.to && b.to == a.from)
                    .expect("doubled quiver");
                if a.to == v {
                    let prod = self.maps[ai].mul(&self.maps[star]);
                    add_into(&mut acc, &prod, false);
                }
                if a.from == v {
                    let prod = self.maps[star].mul(&self.maps[ai]);
                    add_into(&mut acc, &prod, true);
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
        true
    }

    /// Action of an algebra basis element on the total space.
    pub fn basis_action(&self, alg: &AlgebraTable, b: usize) -> QMat {
        let off = self.offsets();
        let total = self.total_dim();
        let path = &alg.basis[b];
        // Compose the arrow maps along the path.
        let mut block = QMat::identity(self.dims[path.source]);
        for &ai in &path.arrows {
            block = self.maps[ai].mul(&block);
        }
        let mut out = QMat::zero(total, total);
        for r in 0..self.dims[path.target] {
            for c in 0..self.dims[path.source] {
                out[(r + off[path.target], c + off[path.source])] = block[(r, c)].clone();
            }
        }
        out
    }
}

fn add_into(acc: &mut QMat, m: &QMat, negate: bool) {
    for r in 0..acc.rows {
        for c in 0..acc.cols {
            if negate {
                let t = m[(r, c)].clone();
                acc[(r, c)] -= t;
            } else {
                let t = m[(r, c)].clone();
                acc[(r, c)] += t;
            }
        }
    }
}

/// A module presented by actions of all algebra basis elements, reassembled
/// into a quiver representation; `from_rep` columns express the adapted basis
/// in the original coordinates, `to_rep` is its inverse.
pub struct AdaptedModule {
    pub rep: QuiverRep,
    pub to_rep: QMat,
    pub from_rep: QMat,
}

pub fn module_from_action(alg: &AlgebraTable, actions: &[QMat]) -> Result<AdaptedModule> {
    let k = actions.first().map_or(0, |m| m.rows);
    let n = alg.n_vertices();
    // Idempotent projectors must decompose the space.
    let mut sum = QMat::zero(k, k);
    for v in 0..n {
        add_into(&mut sum, &actions[alg.idempotents[v]], false);
    }
    if sum != QMat::identity(k) {
        return Err(Error::Rep("idempotent actions do not sum to the identity".into()));
    }
    let mut dims = Vec::with_capacity(n);
    let mut basis_vectors: Vec<Vec<Rat>> = Vec::new();
    for v in 0..n {
        let p = &actions[alg.idempotents[v]];
        let mut col_space = Subspace::empty(k);
        for j in 0..k {
            col_space.insert(p.col(j));
        }
        dims.push(col_space.dim());
        basis_vectors.extend(col_space.rows.iter().cloned());
    }
    if dims.iter().sum::<usize>() != k {
        return Err(Error::Rep("vertex components do not fill the module".into()));
    }
    let mut from_rep = QMat::zero(k, k);
    for (j, b) in basis_vectors.iter().enumerate() {
        for (i, x) in b.iter().enumerate() {
            from_rep[(i, j)] = x.clone();
        }
    }
    let to_rep = from_rep
        .inverse()
        .ok_or_else(|| Error::Rep("adapted basis is singular".into()))?;
    let rep = QuiverRep {
        dims: dims.clone(),
        maps: alg
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let full = to_rep.mul(&actions[alg.arrow_elems[ai]]).mul(&from_rep);
                let off = {
                    let mut o = Vec::with_capacity(n + 1);
                    let mut acc = 0;
                    for &d in &dims {
                        o.push(acc);
                        acc += d;
                    }
                    o.push(acc);
                    o
                };
                let mut m = QMat::zero(dims[a.to], dims[a.from]);
                for r in 0..dims[a.to] {
                    for c in 0..dims[a.from] {
                        m[(r, c)] = full[(r + off[a.to], c + off[a.from])].clone();
                    }
                }
                m
            })
            .collect(),
    };
    Ok(AdaptedModule { rep, to_rep, from_rep })
}

/// Left-module structure on a subspace of the algebra (an ideal, a projective
/// summand, or the whole algebra).
pub fn rep_of_subspace(alg: &AlgebraTable, rows: &[Vec<Rat>]) -> Result<AdaptedModule> {
    let solver = SpanSolver::new(rows, alg.dim);
    let k = rows.len();
    let actions: Vec<QMat> = (0..alg.dim)
        .map(|b| {
            let mut m = QMat::zero(k, k);
            for (j, row) in rows.iter().enumerate() {
                let image = alg.left_mul_dense(b, row);
                let coords = solver
                    .solve(&image)
                    .ok_or_else(|| Error::Rep("subspace is not a left submodule".into()))?;
                for (i, c) in coords.iter().enumerate() {
                    m[(i, j)] = c.clone();
                }
            }
            Ok(m)
        })
        .collect::<Result<Vec<QMat>>>()?;
    module_from_action(alg, &actions)
}

/// The projective left module at a vertex, as the span of paths with that
/// source.
pub fn projective(alg: &AlgebraTable, i: usize) -> Result<QuiverRep> {
    let rows: Vec<Vec<Rat>> = (0..alg.dim)
        .filter(|&b| alg.basis[b].source == i)
        .map(|b| {
            let mut v = vec![Rat::zero(); alg.dim];
            v[b] = Rat::one();
            v
        })
        .collect();
    Ok(rep_of_subspace(alg, &rows)?.rep)
}

pub fn algebra_as_rep(alg: &AlgebraTable) -> Result<QuiverRep> {
    let rows: Vec<Vec<Rat>> = (0..alg.dim)
        .map(|b| {
            let mut v = vec![Rat::zero(); alg.dim];
            v[b] = Rat::one();
            v
        })
        .collect();
    Ok(rep_of_subspace(alg, &rows)?.rep)
}

/// The brick label of a cover: the quotient I_lower / I_upper as a
/// representation. Demands strict inclusion I_upper inside I_lower.
pub fn ideal_quotient_rep(
    alg: &AlgebraTable,
    lower: &Ideal,
    upper: &Ideal,
) -> Result<QuiverRep> {
    if !lower.contains(upper) {
        return Err(Error::Ideal(
            "quotient requires the second ideal inside the first".into(),
        ));
    }
    // Complement basis of upper inside lower.
    let mut extended = upper.space.clone();
    let mut complement: Vec<Vec<Rat>> = Vec::new();
    for row in &lower.space.rows {
        if extended.insert(row.clone()) {
            complement.push(row.clone());
        }
    }
    let k = complement.len();
    // Solve against (upper basis | complement); coset coords are the tail.
    let mut spanning: Vec<Vec<Rat>> = upper.space.rows.clone();
    spanning.extend(complement.iter().cloned());
    let solver = SpanSolver::new(&spanning, alg.dim);
    let m = upper.space.dim();
    let actions: Vec<QMat> = (0..alg.dim)
        .map(|b| {
            let mut mat = QMat::zero(k, k);
            for (j, q) in complement.iter().enumerate() {
                let image = alg.left_mul_dense(b, q);
                let coords = solver
                    .solve(&image)
                    .ok_or_else(|| Error::Ideal("ideal is not left-closed".into()))?;
                for i in 0..k {
                    mat[(i, j)] = coords[m + i].clone();
                }
            }
            Ok(mat)
        })
        .collect::<Result<Vec<QMat>>>()?;
    Ok(module_from_action(alg, &actions)?.rep)
}

/// Basis of intertwiners M -> N: tuples of vertex matrices commuting with
/// every arrow map.
pub fn hom_space(alg: &AlgebraTable, m: &QuiverRep, n: &QuiverRep) -> Vec<Vec<QMat>> {
    let nv = alg.n_vertices();
    let mut offsets = Vec::with_capacity(nv + 1);
    let mut acc = 0;
    for v in 0..nv {
        offsets.push(acc);
        acc += n.dims[v] * m.dims[v];
    }
    offsets.push(acc);
    let unknowns = acc;
    let mut eqs: Vec<Vec<Rat>> = Vec::new();
    for (ai, a) in alg.arrows.iter().enumerate() {
        let (s, t) = (a.from, a.to);
        for i in 0..n.dims[t] {
            for j in 0..m.dims[s] {
                let mut row = vec![Rat::zero(); unknowns];
                // (g_t M_a)[i][j]: g_t[i][k] * M_a[k][j]
                for k in 0..m.dims[t] {
                    let c = &m.maps[ai][(k, j)];
                    if !c.is_zero() {
                        row[offsets[t] + i * m.dims[t] + k] += c;
                    }
                }
                // -(N_a g_s)[i][j]: N_a[i][k] * g_s[k][j]
                for k in 0..n.dims[s] {
                    let c = &n.maps[ai][(i, k)];
                    if !c.is_zero() {
                        row[offsets[s] + k * m.dims[s] + j] -= c;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    eqs.push(row);
                }
            }
        }
    }
    let kernel: Vec<Vec<Rat>> = if eqs.is_empty() {
        (0..unknowns)
            .map(|j| {
                let mut v = vec![Rat::zero(); unknowns];
                v[j] = Rat::one();
                v
            })
            .collect()
    } else {
        QMat::from_rows(eqs, unknowns).kernel()
    };
    kernel
        .into_iter()
        .map(|sol| {
            (0..nv)
                .map(|v| {
                    let mut g = QMat::zero(n.dims[v], m.dims[v]);
                    for i in 0..n.dims[v] {
                        for j in 0..m.dims[v] {
                            g[(i, j)] = sol[offsets[v] + i * m.dims[v] + j].clone();
                        }
                    }
                    g
                })
                .collect()
        })
        .collect()
}

pub fn end_dim(alg: &AlgebraTable, m: &QuiverRep) -> usize {
    hom_space(alg, m, m).len()
}

fn total_matrix(rep_src: &QuiverRep, rep_dst: &QuiverRep, f: &[QMat]) -> QMat {
    let so = rep_src.offsets();
    let to = rep_dst.offsets();
    let mut out = QMat::zero(rep_dst.total_dim(), rep_src.total_dim());
    for (v, g) in f.iter().enumerate() {
        for i in 0..g.rows {
            for j in 0..g.cols {
                out[(i + to[v], j + so[v])] = g[(i, j)].clone();
            }
        }
    }
    out
}

fn map_is_injective(m: &QuiverRep, f: &[QMat]) -> bool {
    f.iter().zip(&m.dims).all(|(g, &d)| g.rank() == d)
}

fn map_is_invertible(m: &QuiverRep, n: &QuiverRep, f: &[QMat]) -> bool {
    m.dims == n.dims && f.iter().all(|g| g.is_invertible())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BrickVerdict {
    Brick,
    NotBrick,
    /// End has dimension > 1 but no rational eigenvalue witnesses a zero
    /// divisor; cannot happen on the verified corpus.
    Indeterminate,
}

/// A module is a brick when its endomorphism ring is a division algebra;
/// over Q we certify the one-dimensional case and hunt for zero divisors
/// otherwise.
pub fn is_brick(alg: &AlgebraTable, m: &QuiverRep) -> BrickVerdict {
    if m.is_zero() {
        return BrickVerdict::NotBrick;
    }
    let end = hom_space(alg, m, m);
    match end.len() {
        0 => unreachable!("identity endomorphism always exists"),
        1 => BrickVerdict::Brick,
        _ => {
            for f in &end {
                if !map_is_invertible(m, m, f) {
                    return BrickVerdict::NotBrick;
                }
            }
            // All basis endomorphisms invertible: shift by eigenvalues.
            for f in &end {
                let total = total_matrix(m, m, f);
                for lambda in crate::linalg::rational_roots(&crate::linalg::char_poly(&total)) {
                    let mut shifted = total.clone();
                    let mut nonzero = false;
                    for i in 0..shifted.rows {
                        shifted[(i, i)] -= &lambda;
                    }
                    for i in 0..shifted.rows {
                        for j in 0..shifted.cols {
                            if !shifted[(i, j)].is_zero() {
                                nonzero = true;
                            }
                        }
                    }
                    if nonzero && !shifted.is_invertible() {
                        return BrickVerdict::NotBrick;
                    }
                }
            }
            BrickVerdict::Indeterminate
        }
    }
}

/// Sub-representation spanned by given vertex subspaces (which must be
/// closed under the arrow maps). Returns the subrep and the inclusion.
pub fn sub_rep(
    alg: &AlgebraTable,
    m: &QuiverRep,
    vertex_bases: &[Vec<Vec<Rat>>],
) -> Result<(QuiverRep, Vec<QMat>)> {
    let nv = alg.n_vertices();
    let mut bases: Vec<Vec<Vec<Rat>>> = Vec::with_capacity(nv);
    for v in 0..nv {
        let sub = Subspace::from_rows(vertex_bases[v].clone(), m.dims[v]);
        bases.push(sub.rows.clone());
    }
    let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let incl: Vec<QMat> = (0..nv)
        .map(|v| {
            let mut inc = QMat::zero(m.dims[v], dims[v]);
            for (j, b) in bases[v].iter().enumerate() {
                for (i, x) in b.iter().enumerate() {
                    inc[(i, j)] = x.clone();
                }
            }
            inc
        })
        .collect();
    let solvers: Vec<SpanSolver> = (0..nv)
        .map(|v| SpanSolver::new(&bases[v], m.dims[v]))
        .collect();
    let maps: Vec<QMat> = alg
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let mut out = QMat::zero(dims[a.to], dims[a.from]);
            for (j, b) in bases[a.from].iter().enumerate() {
                let image = m.maps[ai].apply(b);
                let coords = solvers[a.to]
                    .solve(&image)
                    .ok_or_else(|| Error::Rep("subspaces not closed under arrows".into()))?;
                for (i, c) in coords.iter().enumerate() {
                    out[(i, j)] = c.clone();
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<QMat>>>()?;
    Ok((QuiverRep { dims, maps }, incl))
}

/// Quotient by vertex subspaces closed under arrows. Returns the quotient
/// and the per-vertex projection matrices.
pub fn quotient_rep(
    alg: &AlgebraTable,
    m: &QuiverRep,
    vertex_bases: &[Vec<Vec<Rat>>],
) -> Result<(QuiverRep, Vec<QMat>)> {
    let nv = alg.n_vertices();
    let subs: Vec<Subspace> = (0..nv)
        .map(|v| Subspace::from_rows(vertex_bases[v].clone(), m.dims[v]))
        .collect();
    let nonpivots: Vec<Vec<usize>> = (0..nv)
        .map(|v| {
            (0..m.dims[v])
                .filter(|j| !subs[v].pivots.contains(j))
                .collect()
        })
        .collect();
    let dims: Vec<usize> = nonpivots.iter().map(|np| np.len()).collect();
    let proj: Vec<QMat> = (0..nv)
        .map(|v| {
            let mut p = QMat::zero(dims[v], m.dims[v]);
            for j in 0..m.dims[v] {
                let mut e = vec![Rat::zero(); m.dims[v]];
                e[j] = Rat::one();
                let r = subs[v].reduce(e);
                for (i, &np) in nonpivots[v].iter().enumerate() {
                    p[(i, j)] = r[np].clone();
                }
            }
            p
        })
        .collect();
    let maps: Vec<QMat> = alg
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let mut out = QMat::zero(dims[a.to], dims[a.from]);
            for (j, &np) in nonpivots[a.from].iter().enumerate() {
                // representative of the j-th quotient basis vector
                let mut e = vec![Rat::zero(); m.dims[a.from]];
                e[np] = Rat::one();
                let image = m.maps[ai].apply(&e);
                let img = proj[a.to].apply(&image);
                for (i, c) in img.iter().enumerate() {
                    out[(i, j)] = c.clone();
                }
            }
            out
        })
        .collect();
    Ok((QuiverRep { dims, maps }, proj))
}

/// Per-vertex socle: vectors killed by every arrow leaving the vertex.
pub fn socle(alg: &AlgebraTable, m: &QuiverRep) -> Vec<Vec<Vec<Rat>>> {
    let nv = alg.n_vertices();
    (0..nv)
        .map(|v| {
            let mut stacked: Vec<Vec<Rat>> = Vec::new();
            for (ai, a) in alg.arrows.iter().enumerate() {
                if a.from != v {
                    continue;
                }
                for r in 0..m.dims[a.to] {
                    stacked.push(m.maps[ai].row(r).to_vec());
                }
            }
            if stacked.is_empty() {
                // no arrows out: the whole component
                return (0..m.dims[v])
                    .map(|j| {
                        let mut e = vec![Rat::zero(); m.dims[v]];
                        e[j] = Rat::one();
                        e
                    })
                    .collect();
            }
            QMat::from_rows(stacked, m.dims[v]).kernel()
        })
        .collect()
}

/// Kernel of a module map as a subrep of the source.
pub fn kernel_sub_rep(
    alg: &AlgebraTable,
    m: &QuiverRep,
    f: &[QMat],
) -> Result<(QuiverRep, Vec<QMat>)> {
    let bases: Vec<Vec<Vec<Rat>>> = f.iter().map(|g| g.kernel()).collect();
    sub_rep(alg, m, &bases)
}

/// Image of a module map as a subrep of the target.
pub fn image_sub_rep(
    alg: &AlgebraTable,
    n: &QuiverRep,
    f: &[QMat],
) -> Result<(QuiverRep, Vec<QMat>)> {
    let bases: Vec<Vec<Vec<Rat>>> = f
        .iter()
        .map(|g| (0..g.cols).map(|j| g.col(j)).collect())
        .collect();
    sub_rep(alg, n, &bases)
}

/// Isomorphism test: look for an invertible intertwiner among the Hom basis
/// and bounded random combinations. Invertibility is Zariski-open, so small
/// random combinations find an isomorphism whenever one exists.
pub fn is_isomorphic(
    alg: &AlgebraTable,
    m: &QuiverRep,
    n: &QuiverRep,
    rng: &mut ChaCha8Rng,
) -> bool {
    if m.dims != n.dims {
        return false;
    }
    if m.is_zero() {
        return true;
    }
    let homs = hom_space(alg, m, n);
    if homs.is_empty() {
        return false;
    }
    for f in &homs {
        if map_is_invertible(m, n, f) {
            return true;
        }
    }
    for _ in 0..40 {
        let f = random_combination(&homs, rng);
        if map_is_invertible(m, n, &f) {
            return true;
        }
    }
    false
}

fn random_combination(homs: &[Vec<QMat>], rng: &mut ChaCha8Rng) -> Vec<QMat> {
    let nv = homs[0].len();
    let coeffs: Vec<Rat> = (0..homs.len()).map(|_| rat(rng.gen_range(-4i64..=4))).collect();
    (0..nv)
        .map(|v| {
            let mut acc = QMat::zero(homs[0][v].rows, homs[0][v].cols);
            for (c, f) in coeffs.iter().zip(homs) {
                if c.is_zero() {
                    continue;
                }
                for i in 0..acc.rows {
                    for j in 0..acc.cols {
                        let t = c * &f[v][(i, j)];
                        acc[(i, j)] += t;
                    }
                }
            }
            acc
        })
        .collect()
}

/// Does a short exact sequence 0 -> E -> B -> F -> 0 exist? Searches the
/// Hom(E, B) basis and seeded random combinations for an injection whose
/// cokernel is isomorphic to F.
pub fn ses_exists(
    alg: &AlgebraTable,
    e: &QuiverRep,
    b: &QuiverRep,
    f: &QuiverRep,
    rng: &mut ChaCha8Rng,
) -> Result<bool> {
    let sum: Vec<usize> = e.dims.iter().zip(&f.dims).map(|(x, y)| x + y).collect();
    if sum != b.dims {
        return Err(Error::Rep(format!(
            "class mismatch: [E] + [F] = {:?} but [B] = {:?}",
            sum, b.dims
        )));
    }
    if e.is_zero() {
        return Ok(is_isomorphic(alg, b, f, rng));
    }
    let homs = hom_space(alg, e, b);
    if homs.is_empty() {
        return Ok(false);
    }
    let mut candidates: Vec<Vec<QMat>> = homs.clone();
    for _ in 0..64 {
        candidates.push(random_combination(&homs, rng));
    }
    for cand in &candidates {
        if !map_is_injective(e, cand) {
            continue;
        }
        let image_bases: Vec<Vec<Vec<Rat>>> = cand
            .iter()
            .map(|g| (0..g.cols).map(|j| g.col(j)).collect())
            .collect();
        let (coker, _) = quotient_rep(alg, b, &image_bases)?;
        if is_isomorphic(alg, &coker, f, rng) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Result of tensoring a two-sided ideal with a module: the representation
/// together with maps between its coordinates and the raw tensor coordinates
/// (ideal basis row r, module basis coordinate c) -> r * D + c.
pub struct TensorModule {
    pub rep: QuiverRep,
    relations: Subspace,
    nonpivot: Vec<usize>,
    to_rep: QMat,
    from_rep: QMat,
    pub module_total: usize,
}

impl TensorModule {
    pub fn raw_to_rep(&self, raw: Vec<Rat>) -> Vec<Rat> {
        let reduced = self.relations.reduce(raw);
        let q: Vec<Rat> = self.nonpivot.iter().map(|&j| reduced[j].clone()).collect();
        self.to_rep.apply(&q)
    }

    pub fn rep_to_raw(&self, coords: &[Rat]) -> Vec<Rat> {
        let q = self.from_rep.apply(coords);
        let total = self.relations.ambient;
        let mut raw = vec![Rat::zero(); total];
        for (&j, x) in self.nonpivot.iter().zip(&q) {
            raw[j] = x.clone();
        }
        raw
    }
}

/// I tensor_Pi M for a two-sided ideal I, computed as the quotient of the
/// vector-space tensor product by the bimodule relations x b (x) m - x (x) b m
/// over the algebra generators (idempotents and arrows).
pub fn tensor_ideal_with(
    alg: &AlgebraTable,
    ideal: &Ideal,
    m: &QuiverRep,
) -> Result<TensorModule> {
    let rows = &ideal.space.rows;
    let d = rows.len();
    let dm = m.total_dim();
    let raw_dim = d * dm;
    let solver = SpanSolver::new(rows, alg.dim);
    // Generators: idempotents and arrows.
    let mut gens: Vec<usize> = alg.idempotents.clone();
    gens.extend(alg.arrow_elems.iter().copied());

    let mut relations = Subspace::empty(raw_dim);
    for &g in &gens {
        // right action on ideal rows, expressed back in the row basis
        let right: Vec<Vec<Rat>> = rows
            .iter()
            .map(|u| {
                solver
                    .solve(&alg.right_mul_dense(u, g))
                    .ok_or_else(|| Error::Ideal("ideal not right-closed".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let act = m.basis_action(alg, g);
        for r in 0..d {
            for c in 0..dm {
                let mut rel = vec![Rat::zero(); raw_dim];
                for (s, coeff) in right[r].iter().enumerate() {
                    if !coeff.is_zero() {
                        rel[s * dm + c] += coeff;
                    }
                }
                for t in 0..dm {
                    let coeff = &act[(t, c)];
                    if !coeff.is_zero() {
                        rel[r * dm + t] -= coeff;
                    }
                }
                relations.insert(rel);
            }
        }
    }
    let nonpivot: Vec<usize> = (0..raw_dim)
        .filter(|j| !relations.pivots.contains(j))
        .collect();
    let k = nonpivot.len();
    // Action of each algebra basis element on the quotient via left
    // multiplication on the ideal factor.
    let left_actions: Vec<QMat> = (0..alg.dim)
        .map(|b| {
            let left: Vec<Vec<Rat>> = rows
                .iter()
                .map(|u| {
                    solver
                        .solve(&alg.left_mul_dense(b, u))
                        .ok_or_else(|| Error::Ideal("ideal not left-closed".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut act = QMat::zero(k, k);
            for (jq, &j) in nonpivot.iter().enumerate() {
                let (r, c) = (j / dm, j % dm);
                let mut raw = vec![Rat::zero(); raw_dim];
                for (s, coeff) in left[r].iter().enumerate() {
                    if !coeff.is_zero() {
                        raw[s * dm + c] += coeff;
                    }
                }
                let reduced = relations.reduce(raw);
                for (iq, &i) in nonpivot.iter().enumerate() {
                    act[(iq, jq)] = reduced[i].clone();
                }
            }
            Ok(act)
        })
        .collect::<Result<Vec<QMat>>>()?;
    let adapted = module_from_action(alg, &left_actions)?;
    Ok(TensorModule {
        rep: adapted.rep,
        relations,
        nonpivot,
        to_rep: adapted.to_rep,
        from_rep: adapted.from_rep,
        module_total: dm,
    })
}

/// The map I (x) N -> I (x) M induced by an inclusion N -> M, in the rep
/// coordinates of the two tensor modules; returned as per-vertex blocks.
pub fn tensor_induced_map(
    tn: &TensorModule,
    tm: &TensorModule,
    incl_total: &QMat,
    ideal_dim: usize,
) -> Vec<QMat> {
    let k_n = tn.rep.total_dim();
    let dn = tn.module_total;
    let dm = tm.module_total;
    let mut total = QMat::zero(tm.rep.total_dim(), k_n);
    for j in 0..k_n {
        let mut coords = vec![Rat::zero(); k_n];
        coords[j] = Rat::one();
        let raw_n = tn.rep_to_raw(&coords);
        let mut raw_m = vec![Rat::zero(); ideal_dim * dm];
        for r in 0..ideal_dim {
            for c in 0..dn {
                let x = &raw_n[r * dn + c];
                if x.is_zero() {
                    continue;
                }
                for t in 0..dm {
                    let coeff = &incl_total[(t, c)];
                    if !coeff.is_zero() {
                        raw_m[r * dm + t] += x * coeff;
                    }
                }
            }
        }
        let out = tm.raw_to_rep(raw_m);
        for (i, x) in out.iter().enumerate() {
            total[(i, j)] = x.clone();
        }
    }
    // Split into vertex blocks.
    let no = tn.rep.offsets();
    let mo = tm.rep.offsets();
    (0..tn.rep.dims.len())
        .map(|v| {
            let mut g = QMat::zero(tm.rep.dims[v], tn.rep.dims[v]);
            for i in 0..tm.rep.dims[v] {
                for j in 0..tn.rep.dims[v] {
                    g[(i, j)] = total[(i + mo[v], j + no[v])].clone();
                }
            }
            g
        })
        .collect()
}

/// Total-space inclusion matrix from per-vertex inclusion blocks.
pub fn total_inclusion(m: &QuiverRep, sub: &QuiverRep, incl: &[QMat]) -> QMat {
    total_matrix(sub, m, incl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraTable;
    use crate::coxeter::{build_cartan, WeylGroup};
    use rand::SeedableRng;

    fn a2() -> (AlgebraTable, WeylGroup) {
        let cartan = build_cartan('A', 2).unwrap();
        let alg = AlgebraTable::preprojective(&cartan).unwrap();
        let group = WeylGroup::generate(&cartan);
        (alg, group)
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn standard_modules_a2() {
        let (alg, _) = a2();
        let s1 = QuiverRep::simple(&alg, 0);
        assert_eq!(s1.dims, vec![1, 0]);
        let p2 = projective(&alg, 1).unwrap();
        assert_eq!(p2.dims, vec![1, 1]);
        assert!(p2.satisfies_preprojective_relation(&alg));
        let p1 = projective(&alg, 0).unwrap();
        assert_eq!(p1.dims, vec![1, 1]);
    }

    #[test]
    fn projective_a1_is_simple() {
        let cartan = build_cartan('A', 1).unwrap();
        let alg = AlgebraTable::preprojective(&cartan).unwrap();
        let p1 = projective(&alg, 0).unwrap();
        assert_eq!(p1.dims, vec![1]);
    }

    #[test]
    fn projective_dims_match_algebra_columns_a3() {
        let cartan = build_cartan('A', 3).unwrap();
        let alg = AlgebraTable::preprojective(&cartan).unwrap();
        for i in 0..3 {
            let p = projective(&alg, i).unwrap();
            let paths_from_i = alg.basis.iter().filter(|b| b.source == i).count();
            assert_eq!(p.total_dim(), paths_from_i);
            assert!(p.satisfies_preprojective_relation(&alg));
        }
    }

    #[test]
    fn hom_space_examples() {
        let (alg, _) = a2();
        let s1 = QuiverRep::simple(&alg, 0);
        let s2 = QuiverRep::simple(&alg, 1);
        let p2 = projective(&alg, 1).unwrap();
        assert_eq!(hom_space(&alg, &s1, &s2).len(), 0);
        assert_eq!(hom_space(&alg, &s1, &s1).len(), 1);
        assert_eq!(hom_space(&alg, &s2, &p2).len(), 0);
        assert_eq!(hom_space(&alg, &s1, &p2).len(), 1);
    }

    #[test]
    fn brick_examples() {
        let (alg, _) = a2();
        let s1 = QuiverRep::simple(&alg, 0);
        assert_eq!(is_brick(&alg, &s1), BrickVerdict::Brick);
        let double = s1.direct_sum(&s1, &alg);
        assert_eq!(end_dim(&alg, &double), 4);
        assert_eq!(is_brick(&alg, &double), BrickVerdict::NotBrick);
        for i in 0..2 {
            let p = projective(&alg, i).unwrap();
            assert_eq!(is_brick(&alg, &p), BrickVerdict::Brick);
        }
        assert_eq!(is_brick(&alg, &QuiverRep::zero(&alg)), BrickVerdict::NotBrick);
    }

    #[test]
    fn brick_labels_a2() {
        let (alg, group) = a2();
        let s1 = group.element_of_word(&[0]);
        let ie = alg.element_ideal(&group, 0, false).unwrap();
        let is1 = alg.element_ideal(&group, s1, false).unwrap();
        let b = ideal_quotient_rep(&alg, &ie, &is1).unwrap();
        assert_eq!(b.dims, vec![1, 0]); // S_1
        assert!(b.satisfies_preprojective_relation(&alg));

        // canonical covers of the length-2 join-irreducibles give P_2, P_1
        let s1s2 = group.element_of_word(&[0, 1]);
        let i12 = alg.element_ideal(&group, s1s2, false).unwrap();
        let brick = ideal_quotient_rep(&alg, &is1, &i12).unwrap();
        assert_eq!(brick.dims, vec![1, 1]);
        let p2 = projective(&alg, 1).unwrap();
        assert!(is_isomorphic(&alg, &brick, &p2, &mut rng()));

        let s2 = group.element_of_word(&[1]);
        let s2s1 = group.element_of_word(&[1, 0]);
        let is2 = alg.element_ideal(&group, s2, false).unwrap();
        let i21 = alg.element_ideal(&group, s2s1, false).unwrap();
        let brick = ideal_quotient_rep(&alg, &is2, &i21).unwrap();
        let p1 = projective(&alg, 0).unwrap();
        assert!(is_isomorphic(&alg, &brick, &p1, &mut rng()));
    }

    #[test]
    fn covers_below_w0_give_simples_a2() {
        let (alg, group) = a2();
        let w0 = group.longest_element();
        let s1s2 = group.element_of_word(&[0, 1]);
        let i12 = alg.element_ideal(&group, s1s2, false).unwrap();
        let iw0 = alg.element_ideal(&group, w0, false).unwrap();
        let b = ideal_quotient_rep(&alg, &i12, &iw0).unwrap();
        assert_eq!(b.dims, vec![0, 1]); // S_2
    }

    #[test]
    fn quotient_by_full_ideal_is_simple() {
        let (alg, group) = a2();
        for i in 0..2 {
            let unit = alg.unit_ideal();
            let vi = alg.vertex_ideal(i);
            let q = ideal_quotient_rep(&alg, &unit, &vi).unwrap();
            let mut expect = vec![0usize; 2];
            expect[i] = 1;
            assert_eq!(q.dims, expect);
        }
        let _ = group;
    }

    #[test]
    fn tensor_class_reflection_example() {
        let (alg, _) = a2();
        let s2 = QuiverRep::simple(&alg, 1);
        // Hom(S_1, S_2) = 0, so [I_1 (x) S_2] = s_1([S_2]) = (1,1)
        let i1 = alg.vertex_ideal(0);
        let t = tensor_ideal_with(&alg, &i1, &s2).unwrap();
        assert_eq!(t.rep.dims, vec![1, 1]);
        assert!(t.rep.satisfies_preprojective_relation(&alg));
        // and it is the projective P_2
        let p2 = projective(&alg, 1).unwrap();
        assert!(is_isomorphic(&alg, &t.rep, &p2, &mut rng()));
    }

    #[test]
    fn tensor_with_free_module() {
        let (alg, _) = a2();
        for i in 0..2 {
            let ideal = alg.vertex_ideal(i);
            let pi_rep = algebra_as_rep(&alg).unwrap();
            let t = tensor_ideal_with(&alg, &ideal, &pi_rep).unwrap();
            let ideal_rep = rep_of_subspace(&alg, &ideal.space.rows).unwrap().rep;
            assert_eq!(t.rep.total_dim(), ideal.dim());
            assert!(is_isomorphic(&alg, &t.rep, &ideal_rep, &mut rng()));
        }
    }

    #[test]
    fn lemma8_kernel_example() {
        let (alg, _) = a2();
        // S_1 = socle of P_2; Hom(S_2, P_2) = 0; the kernel of
        // I_2 (x) S_1 -> I_2 (x) P_2 must be a sum of copies of S_2.
        let p2 = projective(&alg, 1).unwrap();
        let soc = socle(&alg, &p2);
        let (soc_rep, incl) = sub_rep(&alg, &p2, &soc).unwrap();
        assert_eq!(soc_rep.dims, vec![1, 0]);
        let i2 = alg.vertex_ideal(1);
        let tn = tensor_ideal_with(&alg, &i2, &soc_rep).unwrap();
        let tm = tensor_ideal_with(&alg, &i2, &p2).unwrap();
        let incl_total = total_inclusion(&p2, &soc_rep, &incl);
        let f = tensor_induced_map(&tn, &tm, &incl_total, i2.dim());
        let (ker, _) = kernel_sub_rep(&alg, &tn.rep, &f).unwrap();
        assert_eq!(ker.dims, vec![0, 1]); // one copy of S_2
    }

    #[test]
    fn ses_examples() {
        let (alg, _) = a2();
        let s1 = QuiverRep::simple(&alg, 0);
        let s2 = QuiverRep::simple(&alg, 1);
        let p2 = projective(&alg, 1).unwrap();
        assert!(ses_exists(&alg, &s1, &p2, &s2, &mut rng()).unwrap());
        // E = B, F = 0
        let zero = QuiverRep::zero(&alg);
        assert!(ses_exists(&alg, &p2, &p2, &zero, &mut rng()).unwrap());
        // no injection S_2 -> S_1 + S_1 at all
        let dbl = s1.direct_sum(&s1, &alg);
        assert!(hom_space(&alg, &s2, &dbl).is_empty());
        // same obstruction through the search: Hom(S_1, P_1) = 0
        let p1 = projective(&alg, 0).unwrap();
        assert!(!ses_exists(&alg, &s1, &p1, &s2, &mut rng()).unwrap());
        // class mismatch rejected
        assert!(ses_exists(&alg, &p2, &p2, &s1, &mut rng()).is_err());
    }

    #[test]
    fn a3_canonical_bricks_pairwise_distinct() {
        let cartan = build_cartan('A', 3).unwrap();
        let alg = AlgebraTable::preprojective(&cartan).unwrap();
        let group = WeylGroup::generate(&cartan);
        // join-irreducibles of weak order: elements with exactly one descent
        let mut bricks = Vec::new();
        for w in 0..group.order() {
            let descents: Vec<usize> = (0..3)
                .filter(|&i| {
                    group.elements[group.right_mult[w][i]].length < group.elements[w].length
                })
                .collect();
            if descents.len() == 1 {
                let u = group.right_mult[w][descents[0]];
                let iu = alg.element_ideal(&group, u, false).unwrap();
                let iw = alg.element_ideal(&group, w, false).unwrap();
                let b = ideal_quotient_rep(&alg, &iu, &iw).unwrap();
                assert_eq!(is_brick(&alg, &b), BrickVerdict::Brick);
                assert!(b.satisfies_preprojective_relation(&alg));
                bricks.push(b);
            }
        }
        assert_eq!(bricks.len(), 11);
        let mut r = rng();
        for i in 0..bricks.len() {
            for j in i + 1..bricks.len() {
                assert!(!is_isomorphic(&alg, &bricks[i], &bricks[j], &mut r));
            }
        }
    }

    #[test]
    fn socle_of_projectives_a2() {
        let (alg, _) = a2();
        let p1 = projective(&alg, 0).unwrap();
        let soc = socle(&alg, &p1);
        // socle of P_1 is S_2
        assert_eq!(soc[0].len(), 0);
        assert_eq!(soc[1].len(), 1);
    }
}
