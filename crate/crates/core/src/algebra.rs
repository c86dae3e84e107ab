//! The preprojective algebra as an explicit multiplication table, and its
//! two-sided ideals.
//!
//! Paths compose right to left: p * q means "q then p", matching the left
//! action on modules. The algebra is built degree by degree: the raw paths of
//! each degree are reduced modulo all embeddings p * r_v * q of the degree-2
//! preprojective relations, the surviving paths form the normal-form basis,
//! and construction stops at the first degree that reduces to zero.

use crate::coxeter::{Arrow, CartanData, WeylGroup};
use crate::error::{Error, Result};
use crate::linalg::{rat, Rat, Subspace};
use num_traits::Zero;
use std::collections::HashMap;

/// A coordinate vector in the algebra basis, kept sparse.
pub type Elem = Vec<(usize, Rat)>;

fn elem_add(acc: &mut HashMap<usize, Rat>, idx: usize, c: Rat) {
    let entry = acc.entry(idx).or_insert_with(Rat::zero);
    *entry += c;
    if entry.is_zero() {
        acc.remove(&idx);
    }
}

fn elem_from_map(map: HashMap<usize, Rat>) -> Elem {
    let mut v: Vec<(usize, Rat)> = map.into_iter().collect();
    v.sort_by_key(|&(i, _)| i);
    v
}

#[derive(Clone, Debug)]
pub struct BasisPath {
    pub source: usize,
    pub target: usize,
    /// Arrow indices in application order (first applied first); empty for
    /// the idempotent at `source`.
    pub arrows: Vec<usize>,
}

impl BasisPath {
    pub fn degree(&self) -> usize {
        self.arrows.len()
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraTable {
    pub cartan: CartanData,
    /// Arrows of the underlying quiver of this algebra (doubled for the
    /// preprojective algebra, plain for a hereditary path algebra).
    pub arrows: Vec<Arrow>,
    pub basis: Vec<BasisPath>,
    pub dim: usize,
    /// basis index of e_v for each vertex.
    pub idempotents: Vec<usize>,
    /// basis index of each arrow (all arrows survive reduction).
    pub arrow_elems: Vec<usize>,
    /// mult[x][y] = coordinates of basis[x] * basis[y].
    mult: Vec<Vec<Elem>>,
}

struct DegreeLayer {
    /// raw paths of this degree, as (source, arrows in application order)
    paths: Vec<(usize, Vec<usize>)>,
    index: HashMap<(usize, Vec<usize>), usize>,
    /// reduction of each raw path to normal-form basis indices (global)
    reduce: Vec<Elem>,
}

impl AlgebraTable {
    /// The preprojective algebra of the doubled quiver.
    pub fn preprojective(cartan: &CartanData) -> Result<Self> {
        Self::build(cartan, cartan.doubled_arrows.clone(), true)
    }

    /// The hereditary path algebra of the quiver itself (no relations).
    /// With `opposite`, every arrow is reversed first.
    pub fn path_algebra(cartan: &CartanData, opposite: bool) -> Result<Self> {
        let arrows: Vec<Arrow> = cartan
            .quiver_arrows
            .iter()
            .map(|&(a, b)| {
                if opposite {
                    Arrow { from: b, to: a, reverse: false }
                } else {
                    Arrow { from: a, to: b, reverse: false }
                }
            })
            .collect();
        Self::build(cartan, arrows, false)
    }

    fn build(cartan: &CartanData, arrows: Vec<Arrow>, preprojective: bool) -> Result<Self> {
        let n = cartan.rank();
        // Degree cap: the preprojective algebra of Dynkin type lives in
        // degrees <= 2(h-2); anything deeper means non-Dynkin input.
        let cap = 2 * cartan.dynkin.coxeter_number() + 2;

        let mut basis: Vec<BasisPath> = Vec::new();
        let mut layers: Vec<DegreeLayer> = Vec::new();

        // Degree 0: idempotents, always independent.
        let mut layer0 = DegreeLayer {
            paths: (0..n).map(|v| (v, Vec::new())).collect(),
            index: HashMap::new(),
            reduce: Vec::new(),
        };
        for (i, p) in layer0.paths.iter().enumerate() {
            layer0.index.insert(p.clone(), i);
        }
        let idempotents: Vec<usize> = (0..n)
            .map(|v| {
                basis.push(BasisPath { source: v, target: v, arrows: Vec::new() });
                basis.len() - 1
            })
            .collect();
        layer0.reduce = (0..n).map(|v| vec![(idempotents[v], rat(1))]).collect();
        layers.push(layer0);

        // Relation components r_v over degree-2 raw paths, one per vertex:
        // sum of a a* with t(a) = v minus sum of a* a with s(a) = v.
        let relation_terms: Vec<Vec<(Vec<usize>, i64)>> = (0..n)
            .map(|v| {
                let mut terms = Vec::new();
                if preprojective {
                    for (ai, a) in arrows.iter().enumerate() {
                        if a.reverse {
                            continue;
                        }
                        let astar = arrows
                            .iter()
                            .position(|b| b.reverse && b.from == a.to && b.to == a.from)
                            .expect("doubled quiver has the reverse arrow");
                        if a.to == v {
                            terms.push((vec![astar, ai], 1)); // a a*: apply a* then a
                        }
                        if a.from == v {
                            terms.push((vec![ai, astar], -1)); // a* a: apply a then a*
                        }
                    }
                }
                terms
            })
            .collect();

        let mut degree = 1usize;
        loop {
            if degree > cap {
                return Err(Error::Algebra(format!(
                    "{}: no vanishing degree below {cap}; algebra is not finite-dimensional",
                    cartan.dynkin
                )));
            }
            // Raw paths of this degree: arrow composed after each raw path of
            // the previous degree.
            let prev = &layers[degree - 1];
            let mut paths = Vec::new();
            let mut index = HashMap::new();
            for (src, arrs) in &prev.paths {
                let tgt = match arrs.last() {
                    None => *src,
                    Some(&last) => arrows[last].to,
                };
                for (ai, a) in arrows.iter().enumerate() {
                    if a.from == tgt {
                        let mut arrs2 = arrs.clone();
                        arrs2.push(ai);
                        let key = (*src, arrs2);
                        if !index.contains_key(&key) {
                            index.insert(key.clone(), paths.len());
                            paths.push(key);
                        }
                    }
                }
            }
            if paths.is_empty() {
                layers.push(DegreeLayer { paths, index, reduce: Vec::new() });
                break;
            }

            // Relation subspace: p * r_v * q over all compatible raw paths.
            let m = paths.len();
            let mut rel = Subspace::empty(m);
            if preprojective && degree >= 2 {
                let dq_max = degree - 2;
                for dq in 0..=dq_max {
                    let dp = degree - 2 - dq;
                    for (qsrc, qarrs) in &layers[dq].paths {
                        let v = if qarrs.is_empty() {
                            *qsrc
                        } else {
                            arrows[qarrs[qarrs.len() - 1]].to
                        };
                        for (psrc, parrs) in &layers[dp].paths {
                            if *psrc != v {
                                continue;
                            }
                            let mut vec = vec![Rat::zero(); m];
                            let mut nonzero = false;
                            for (term, sign) in &relation_terms[v] {
                                let mut arrs = qarrs.clone();
                                arrs.extend(term);
                                arrs.extend(parrs);
                                if let Some(&pi) = index.get(&(*qsrc, arrs)) {
                                    vec[pi] += rat(*sign);
                                    nonzero = true;
                                }
                            }
                            if nonzero {
                                rel.insert(vec);
                            }
                        }
                    }
                }
            }

            // Normal forms: raw paths at non-pivot columns survive.
            let mut is_pivot = vec![false; m];
            for &p in &rel.pivots {
                is_pivot[p] = true;
            }
            let mut path_to_basis: Vec<Option<usize>> = vec![None; m];
            let mut any = false;
            for (pi, (src, arrs)) in paths.iter().enumerate() {
                if !is_pivot[pi] {
                    let tgt = arrows[arrs[arrs.len() - 1]].to;
                    basis.push(BasisPath { source: *src, target: tgt, arrows: arrs.clone() });
                    path_to_basis[pi] = Some(basis.len() - 1);
                    any = true;
                }
            }
            // reduction: pivot path = -(rest of its RREF row)
            let mut reduce: Vec<Elem> = vec![Vec::new(); m];
            for (pi, slot) in path_to_basis.iter().enumerate() {
                if let Some(b) = slot {
                    reduce[pi] = vec![(*b, rat(1))];
                }
            }
            for (row, &p) in rel.rows.iter().zip(&rel.pivots) {
                let mut acc: HashMap<usize, Rat> = HashMap::new();
                for (j, c) in row.iter().enumerate() {
                    if j != p && !c.is_zero() {
                        if let Some(b) = path_to_basis[j] {
                            elem_add(&mut acc, b, -c.clone());
                        }
                    }
                }
                reduce[p] = elem_from_map(acc);
            }
            layers.push(DegreeLayer { paths, index, reduce });
            if !any {
                // A degree can only die completely if its relation space
                // swallowed everything; then all higher degrees vanish too.
                break;
            }
            degree += 1;
        }

        let dim = basis.len();
        let arrow_elems: Vec<usize> = arrows
            .iter()
            .enumerate()
            .map(|(ai, _)| {
                basis
                    .iter()
                    .position(|b| b.arrows == vec![ai])
                    .expect("arrows survive in degree 1")
            })
            .collect();

        // Multiplication table via raw concatenation + reduction.
        let top_degree = layers.len() - 1;
        let mut mult: Vec<Vec<Elem>> = vec![vec![Vec::new(); dim]; dim];
        for (xi, x) in basis.iter().enumerate() {
            for (yi, y) in basis.iter().enumerate() {
                if x.source != y.target {
                    continue;
                }
                let d = x.degree() + y.degree();
                if d >= top_degree + 1 {
                    continue;
                }
                let mut arrs = y.arrows.clone();
                arrs.extend(&x.arrows);
                let layer = &layers[d];
                let pi = layer.index[&(y.source, arrs)];
                mult[xi][yi] = layer.reduce[pi].clone();
            }
        }

        let table = AlgebraTable {
            cartan: cartan.clone(),
            arrows,
            basis,
            dim,
            idempotents,
            arrow_elems,
            mult,
        };
        table.check_structure()?;
        Ok(table)
    }

    /// Build-time sanity: associativity on all basis triples, grading, and
    /// orthogonal idempotents summing to one.
    fn check_structure(&self) -> Result<()> {
        for x in 0..self.dim {
            for y in 0..self.dim {
                for (b, _) in &self.mult[x][y] {
                    let expect = self.basis[x].degree() + self.basis[y].degree();
                    if self.basis[*b].degree() != expect {
                        return Err(Error::Algebra("grading violated".into()));
                    }
                }
                for z in 0..self.dim {
                    let left = self.mul_elem(&self.mult[x][y], &[(z, rat(1))]);
                    let right = self.mul_elem(&[(x, rat(1))], &self.mult[y][z]);
                    if left != right {
                        return Err(Error::Algebra(format!(
                            "associativity fails on basis triple ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        for (v, &e) in self.idempotents.iter().enumerate() {
            for (w, &f) in self.idempotents.iter().enumerate() {
                let prod = self.mul_basis(e, f);
                if v == w {
                    if prod != vec![(e, rat(1))] {
                        return Err(Error::Algebra("idempotent not idempotent".into()));
                    }
                } else if !prod.is_empty() {
                    return Err(Error::Algebra("idempotents not orthogonal".into()));
                }
            }
        }
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.cartan.rank()
    }

    pub fn mul_basis(&self, x: usize, y: usize) -> Elem {
        self.mult[x][y].clone()
    }

    /// Bilinear extension of the multiplication table.
    pub fn mul_elem(&self, x: &[(usize, Rat)], y: &[(usize, Rat)]) -> Elem {
        let mut acc: HashMap<usize, Rat> = HashMap::new();
        for (xi, cx) in x {
            for (yi, cy) in y {
                for (b, c) in &self.mult[*xi][*yi] {
                    elem_add(&mut acc, *b, cx * cy * c);
                }
            }
        }
        elem_from_map(acc)
    }

    pub fn dense(&self, e: &[(usize, Rat)]) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        for (i, c) in e {
            v[*i] = c.clone();
        }
        v
    }

    /// x * v for v a dense coordinate vector (left multiplication).
    pub fn left_mul_dense(&self, x: usize, v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (yi, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (b, m) in &self.mult[x][yi] {
                out[*b] += c * m;
            }
        }
        out
    }

    /// v * x for v a dense coordinate vector (right multiplication).
    pub fn right_mul_dense(&self, v: &[Rat], x: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (yi, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (b, m) in &self.mult[yi][x] {
                out[*b] += c * m;
            }
        }
        out
    }

    pub fn unit_ideal(&self) -> Ideal {
        Ideal { space: Subspace::full(self.dim), word: Some(Vec::new()) }
    }

    /// The two-sided ideal generated by 1 - e_i: the span of all products
    /// x * y running through a vertex other than i.
    pub fn vertex_ideal(&self, i: usize) -> Ideal {
        let mut space = Subspace::empty(self.dim);
        for (xi, x) in self.basis.iter().enumerate() {
            if x.source == i {
                continue;
            }
            for (yi, y) in self.basis.iter().enumerate() {
                if y.target != x.source {
                    continue;
                }
                let prod = self.mul_basis(xi, yi);
                if !prod.is_empty() {
                    space.insert(self.dense(&prod));
                }
            }
        }
        Ideal { space, word: Some(vec![i]) }
    }

    /// Product of two ideals: the span of pairwise products of basis rows.
    pub fn ideal_product(&self, left: &Ideal, right: &Ideal) -> Ideal {
        let mut space = Subspace::empty(self.dim);
        // I*J sits inside the intersection, so the rank is capped.
        let cap = left.space.dim().min(right.space.dim());
        'outer: for u in &left.space.rows {
            for v in &right.space.rows {
                let prod = self.mul_dense(u, v);
                space.insert(prod);
                if space.dim() == cap {
                    break 'outer;
                }
            }
        }
        let word = match (&left.word, &right.word) {
            (Some(a), Some(b)) => {
                let mut w = a.clone();
                w.extend(b);
                Some(w)
            }
            _ => None,
        };
        Ideal { space, word }
    }

    fn mul_dense(&self, u: &[Rat], v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (xi, cx) in u.iter().enumerate() {
            if cx.is_zero() {
                continue;
            }
            for (yi, cy) in v.iter().enumerate() {
                if cy.is_zero() {
                    continue;
                }
                for (b, m) in &self.mult[xi][yi] {
                    out[*b] += cx * cy * m;
                }
            }
        }
        out
    }

    /// I_w from one reduced word of w. With `verify_all_words`, recomputes
    /// the product over every reduced word and insists the results agree.
    pub fn element_ideal(&self, group: &WeylGroup, w: usize, verify_all_words: bool) -> Result<Ideal> {
        let word = group.elements[w].word.clone();
        let ideal = self.word_ideal(group, &word)?;
        if verify_all_words {
            for other in group.reduced_words(w) {
                let alt = self.word_ideal(group, &other)?;
                if alt.space != ideal.space {
                    return Err(Error::Ideal(format!(
                        "reduced words {word:?} and {other:?} give different ideals"
                    )));
                }
            }
        }
        Ok(ideal)
    }

    /// The ideal product along a word, rejecting non-reduced words.
    pub fn word_ideal(&self, group: &WeylGroup, word: &[usize]) -> Result<Ideal> {
        if !group.is_reduced(word) {
            return Err(Error::NotReduced(word.to_vec()));
        }
        let mut ideal = self.unit_ideal();
        for &i in word {
            ideal = self.ideal_product(&ideal, &self.vertex_ideal(i));
        }
        ideal.word = Some(word.to_vec());
        Ok(ideal)
    }
}

/// A two-sided ideal as a canonical subspace of the algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Ideal {
    pub space: Subspace,
    /// The word that produced it, if any.
    pub word: Option<Vec<usize>>,
}

impl Ideal {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn zero(algebra_dim: usize) -> Self {
        Ideal { space: Subspace::empty(algebra_dim), word: None }
    }

    pub fn contains(&self, other: &Ideal) -> bool {
        self.space.contains_space(&other.space)
    }

    /// Two-sidedness: closure under left and right multiplication by every
    /// basis element.
    pub fn is_two_sided(&self, alg: &AlgebraTable) -> bool {
        for row in &self.space.rows {
            for b in 0..alg.dim {
                if !self.space.contains(&alg.left_mul_dense(b, row)) {
                    return false;
                }
                if !self.space.contains(&alg.right_mul_dense(row, b)) {
                    return false;
                }
            }
        }
        true
    }
}
