//! Simply-laced Cartan data, root systems, and Weyl groups.
//!
//! Conventions, fixed once and used everywhere:
//! - Vertices are 1..=n externally, 0..n internally.
//! - Quiver orientation: A_n is the linear chain 1 -> 2 -> ... -> n; for D_n
//!   and E_n every edge is oriented toward the branch node. The preprojective
//!   algebra does not depend on this choice up to isomorphism.
//! - A group element stores the matrix of its action on K0 in the simple
//!   basis; for a word (i_1,...,i_r) the matrix is S_{i_1}...S_{i_r}. Columns
//!   transform classes (x -> Mx), rows transform functionals (c -> cM), so the
//!   same matrix realizes the left action on classes and the right action on
//!   functionals and (phi . w)(x) = phi(w(x)) holds on the nose.

use crate::error::{Error, Result};
use crate::linalg::{dot_ii, rat, Rat};
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E(usize),
}

impl DynkinType {
    pub fn new(letter: char, rank: usize) -> Result<Self> {
        let t = match letter.to_ascii_uppercase() {
            'A' if rank >= 1 => DynkinType::A(rank),
            'D' if rank >= 4 => DynkinType::D(rank),
            'E' if (6..=8).contains(&rank) => DynkinType::E(rank),
            _ => return Err(Error::InvalidDynkin(format!("{letter}{rank}"))),
        };
        Ok(t)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| Error::InvalidDynkin(s.into()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidDynkin(s.into()))?;
        DynkinType::new(letter, rank)
    }

    pub fn rank(&self) -> usize {
        match *self {
            DynkinType::A(n) | DynkinType::D(n) | DynkinType::E(n) => n,
        }
    }

    pub fn coxeter_number(&self) -> usize {
        match *self {
            DynkinType::A(n) => n + 1,
            DynkinType::D(n) => 2 * n - 2,
            DynkinType::E(6) => 12,
            DynkinType::E(7) => 18,
            DynkinType::E(8) => 30,
            DynkinType::E(_) => unreachable!(),
        }
    }

    /// Edges of the Dynkin diagram as ordered arrows (source, target).
    fn arrows(&self) -> Vec<(usize, usize)> {
        match *self {
            DynkinType::A(n) => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
            DynkinType::D(n) => {
                // Chain 1-...-(n-2) with n-1 and n attached to the branch
                // node n-2; all edges oriented into the branch node.
                let branch = n - 3; // 0-indexed vertex n-2
                let mut arrows: Vec<(usize, usize)> = Vec::new();
                for i in 0..n - 3 {
                    arrows.push((i, i + 1));
                }
                arrows.push((n - 2, branch));
                arrows.push((n - 1, branch));
                arrows
            }
            DynkinType::E(n) => {
                // Bourbaki labels: chain 1-3-4-5-...-n, with 2 attached to 4;
                // branch node is 4 (0-indexed 3). All edges point toward it.
                let mut arrows = vec![(0, 2), (2, 3), (1, 3)];
                for v in 4..n {
                    arrows.push((v, v - 1));
                }
                arrows
            }
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
        }
    }
}

/// An arrow of the doubled quiver. `reverse = true` marks the added a* arrows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub reverse: bool,
}

#[derive(Clone, Debug)]
pub struct CartanData {
    pub dynkin: DynkinType,
    pub cartan: Vec<Vec<i64>>,
    pub quiver_arrows: Vec<(usize, usize)>,
    pub doubled_arrows: Vec<Arrow>,
}

/// Builds the Cartan matrix, quiver, and doubled quiver for a valid type.
pub fn build_cartan(letter: char, rank: usize) -> Result<CartanData> {
    CartanData::new(DynkinType::new(letter, rank)?)
}

impl CartanData {
    pub fn new(dynkin: DynkinType) -> Result<Self> {
        let n = dynkin.rank();
        let quiver_arrows = dynkin.arrows();
        let mut cartan = vec![vec![0i64; n]; n];
        for i in 0..n {
            cartan[i][i] = 2;
        }
        for &(a, b) in &quiver_arrows {
            cartan[a][b] = -1;
            cartan[b][a] = -1;
        }
        let mut doubled_arrows: Vec<Arrow> = quiver_arrows
            .iter()
            .map(|&(a, b)| Arrow { from: a, to: b, reverse: false })
            .collect();
        doubled_arrows.extend(
            quiver_arrows
                .iter()
                .map(|&(a, b)| Arrow { from: b, to: a, reverse: true }),
        );
        let data = CartanData { dynkin, cartan, quiver_arrows, doubled_arrows };
        if !data.is_positive_definite() {
            return Err(Error::InvalidDynkin(format!(
                "{dynkin}: Cartan matrix is not positive definite"
            )));
        }
        Ok(data)
    }

    pub fn rank(&self) -> usize {
        self.dynkin.rank()
    }

    /// Symmetric bilinear form <x, y> from the Cartan matrix.
    pub fn form(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.rank();
        let mut acc = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                acc += x[i] * self.cartan[i][j] * y[j];
            }
        }
        acc
    }

    /// All leading principal minors positive (checked with exact integers).
    pub fn is_positive_definite(&self) -> bool {
        let n = self.rank();
        for k in 1..=n {
            let sub: Vec<Vec<Rat>> = (0..k)
                .map(|i| (0..k).map(|j| rat(self.cartan[i][j])).collect())
                .collect();
            if det(&sub) <= Rat::from_integer(0.into()) {
                return false;
            }
        }
        true
    }

    /// Matrix of the simple reflection s_i on K0: x -> x - <x, a_i> a_i.
    pub fn simple_reflection_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut m = vec![vec![0i64; n]; n];
        for r in 0..n {
            m[r][r] = 1;
        }
        for c in 0..n {
            m[i][c] -= self.cartan[i][c];
        }
        m
    }

    /// The simple root [S_i] as a coordinate vector.
    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.rank()];
        v[i] = 1;
        v
    }

    /// Positive roots, as the closure of the simple roots under simple
    /// reflections restricted to nonnegative vectors. Sorted by height then
    /// lexicographically, which fixes hyperplane indices everywhere else.
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut seen: Vec<Vec<i64>> = (0..n).map(|i| self.simple_root(i)).collect();
        let mut queue: Vec<Vec<i64>> = seen.clone();
        while let Some(beta) = queue.pop() {
            for i in 0..n {
                let gamma = self.reflect_class(i, &beta);
                if gamma.iter().all(|&x| x >= 0) && !seen.contains(&gamma) {
                    seen.push(gamma.clone());
                    queue.push(gamma);
                }
            }
        }
        seen.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        seen
    }

    fn reflect_class(&self, i: usize, x: &[i64]) -> Vec<i64> {
        let n = self.rank();
        let pairing: i64 = (0..n).map(|j| self.cartan[i][j] * x[j]).sum();
        let mut out = x.to_vec();
        out[i] -= pairing;
        out
    }
}

fn det(m: &[Vec<Rat>]) -> Rat {
    use num_traits::{One, Zero};
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut d = Rat::one();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        d *= &a[col][col];
        let scale = a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &scale;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    d
}

pub type Matrix = Vec<Vec<i64>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn mat_apply(m: &Matrix, v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| dot_ii(row, v)).collect()
}

#[derive(Clone, Debug)]
pub struct WeylElement {
    pub matrix: Matrix,
    pub length: usize,
    /// One reduced word, as 0-indexed generator indices.
    pub word: Vec<usize>,
}

impl WeylElement {
    /// Action on a class in K0 (left action, column convention).
    pub fn act_on_class(&self, x: &[i64]) -> Result<Vec<i64>> {
        if x.len() != self.matrix.len() {
            return Err(Error::DimensionMismatch { expected: self.matrix.len(), got: x.len() });
        }
        Ok(mat_apply(&self.matrix, x))
    }

    /// Right action on a functional: (phi . w)(x) = phi(w(x)).
    pub fn act_on_functional(&self, phi: &[Rat]) -> Result<Vec<Rat>> {
        let n = self.matrix.len();
        if phi.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: phi.len() });
        }
        let mut out = vec![Rat::from_integer(0.into()); n];
        for (k, c) in phi.iter().enumerate() {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            for j in 0..n {
                if self.matrix[k][j] != 0 {
                    out[j] += c * rat(self.matrix[k][j]);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub cartan: CartanData,
    pub elements: Vec<WeylElement>,
    index: HashMap<Vec<i64>, usize>,
    /// right_mult[w][i] = index of w * s_i
    pub right_mult: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
}

impl WeylGroup {
    /// Generates the whole group by breadth-first closure under right
    /// multiplication by the simple reflections. Index 0 is the identity.
    pub fn generate(cartan: &CartanData) -> Self {
        let n = cartan.rank();
        let gens: Vec<Matrix> = (0..n).map(|i| cartan.simple_reflection_matrix(i)).collect();
        let id: Matrix = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut elements = vec![WeylElement { matrix: id.clone(), length: 0, word: vec![] }];
        let mut index = HashMap::new();
        index.insert(flatten(&id), 0usize);
        let mut right_mult: Vec<Vec<usize>> = Vec::new();
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &wi in &frontier {
                for (i, gen) in gens.iter().enumerate() {
                    let m = mat_mul(&elements[wi].matrix, gen);
                    let key = flatten(&m);
                    if !index.contains_key(&key) {
                        let mut word = elements[wi].word.clone();
                        word.push(i);
                        let idx = elements.len();
                        index.insert(key, idx);
                        elements.push(WeylElement {
                            matrix: m,
                            length: elements[wi].length + 1,
                            word,
                        });
                        next.push(idx);
                    }
                }
            }
            frontier = next;
        }
        // Fill the right multiplication table now that all elements exist.
        for w in &elements {
            let mut row = Vec::with_capacity(n);
            for gen in &gens {
                let m = mat_mul(&w.matrix, gen);
                row.push(index[&flatten(&m)]);
            }
            right_mult.push(row);
        }
        let inverse: Vec<usize> = elements
            .iter()
            .map(|w| {
                let mut m = id.clone();
                for &i in w.word.iter().rev() {
                    m = mat_mul(&m, &gens[i]);
                }
                index[&flatten(&m)]
            })
            .collect();
        WeylGroup { cartan: cartan.clone(), elements, index, right_mult, inverse }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, matrix: &Matrix) -> Option<usize> {
        self.index.get(&flatten(matrix)).copied()
    }

    /// Index of s_i * w (left multiplication).
    pub fn left_mult(&self, i: usize, w: usize) -> usize {
        let m = mat_mul(
            &self.cartan.simple_reflection_matrix(i),
            &self.elements[w].matrix,
        );
        self.index[&flatten(&m)]
    }

    /// Index of the element with the given word (not necessarily reduced).
    pub fn element_of_word(&self, word: &[usize]) -> usize {
        let mut w = 0usize;
        for &i in word {
            w = self.right_mult[w][i];
        }
        w
    }

    pub fn longest_element(&self) -> usize {
        (0..self.order()).max_by_key(|&i| self.elements[i].length).unwrap()
    }

    /// All reduced words of the element, lexicographically sorted. A word is
    /// found by peeling descents: every reduced word of w ends with a
    /// generator i such that l(w s_i) < l(w).
    pub fn reduced_words(&self, w: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.reduced_words_capped(w, usize::MAX, &mut out);
        out.sort();
        out
    }

    /// Up to `cap` reduced words (deterministic prefix of the full search).
    pub fn some_reduced_words(&self, w: usize, cap: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.reduced_words_capped(w, cap, &mut out);
        out.sort();
        out
    }

    fn reduced_words_capped(&self, w: usize, cap: usize, out: &mut Vec<Vec<usize>>) {
        if out.len() >= cap {
            return;
        }
        if self.elements[w].length == 0 {
            out.push(Vec::new());
            return;
        }
        for i in 0..self.cartan.rank() {
            let v = self.right_mult[w][i];
            if self.elements[v].length < self.elements[w].length {
                let mut sub = Vec::new();
                self.reduced_words_capped(v, cap.saturating_sub(out.len()), &mut sub);
                for mut word in sub {
                    if out.len() >= cap {
                        return;
                    }
                    word.push(i);
                    out.push(word);
                }
            }
        }
    }

    /// Checks that a word is reduced (its product has length = word length).
    pub fn is_reduced(&self, word: &[usize]) -> bool {
        let w = self.element_of_word(word);
        self.elements[w].length == word.len()
    }
}

fn flatten(m: &Matrix) -> Vec<i64> {
    m.iter().flatten().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn a2() -> CartanData {
        build_cartan('A', 2).unwrap()
    }

    #[test]
    fn cartan_a2_matches_presentation() {
        let c = a2();
        assert_eq!(c.cartan, vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(c.quiver_arrows, vec![(0, 1)]);
        assert_eq!(c.doubled_arrows.len(), 2);
    }

    #[test]
    fn cartan_a1_trivial() {
        let c = build_cartan('A', 1).unwrap();
        assert_eq!(c.cartan, vec![vec![2]]);
        assert!(c.quiver_arrows.is_empty());
    }

    #[test]
    fn cartan_d4_branch_node() {
        let c = build_cartan('D', 4).unwrap();
        // vertex 2 (0-indexed 1) is adjacent to vertices 1, 3, 4
        let neighbors: Vec<usize> = (0..4).filter(|&j| c.cartan[1][j] == -1).collect();
        assert_eq!(neighbors, vec![0, 2, 3]);
        assert!(c.is_positive_definite());
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(build_cartan('D', 3).is_err());
        assert!(build_cartan('E', 9).is_err());
        assert!(build_cartan('A', 0).is_err());
        assert!(build_cartan('B', 2).is_err());
    }

    #[test]
    fn positive_roots_small_types() {
        assert_eq!(a2().positive_roots().len(), 3);
        assert!(a2().positive_roots().contains(&vec![1, 1]));
        assert_eq!(build_cartan('A', 1).unwrap().positive_roots(), vec![vec![1]]);
        assert_eq!(build_cartan('A', 3).unwrap().positive_roots().len(), 6);
        assert_eq!(build_cartan('D', 4).unwrap().positive_roots().len(), 12);
    }

    #[test]
    fn positive_root_count_is_nh_over_2() {
        for t in [DynkinType::A(3), DynkinType::A(4), DynkinType::D(4), DynkinType::D(5)] {
            let c = CartanData::new(t).unwrap();
            assert_eq!(c.positive_roots().len(), t.rank() * t.coxeter_number() / 2);
        }
    }

    #[test]
    fn roots_have_norm_two() {
        for t in [DynkinType::A(3), DynkinType::D(4)] {
            let c = CartanData::new(t).unwrap();
            for beta in c.positive_roots() {
                assert_eq!(c.form(&beta, &beta), 2);
            }
        }
    }

    #[test]
    fn weyl_group_sizes_and_lengths() {
        let g = WeylGroup::generate(&a2());
        assert_eq!(g.order(), 6);
        let mut lengths: Vec<usize> = g.elements.iter().map(|w| w.length).collect();
        lengths.sort();
        assert_eq!(lengths, vec![0, 1, 1, 2, 2, 3]);

        let g1 = WeylGroup::generate(&build_cartan('A', 1).unwrap());
        assert_eq!(g1.order(), 2);

        let g3 = WeylGroup::generate(&build_cartan('A', 3).unwrap());
        assert_eq!(g3.order(), 24);
        assert_eq!(g3.elements[g3.longest_element()].length, 6);

        let gd = WeylGroup::generate(&build_cartan('D', 4).unwrap());
        assert_eq!(gd.order(), 192);
    }

    #[test]
    fn length_counts_inverted_roots() {
        let g = WeylGroup::generate(&build_cartan('A', 3).unwrap());
        let roots = g.cartan.positive_roots();
        for w in &g.elements {
            let inversions = roots
                .iter()
                .filter(|beta| {
                    w.act_on_class(beta).unwrap().iter().all(|&x| x <= 0)
                })
                .count();
            assert_eq!(inversions, w.length);
        }
    }

    #[test]
    fn act_on_class_examples() {
        let g = WeylGroup::generate(&a2());
        let s1 = g.element_of_word(&[0]);
        assert_eq!(g.elements[s1].act_on_class(&[0, 1]).unwrap(), vec![1, 1]);
        assert_eq!(g.elements[s1].act_on_class(&[1, 0]).unwrap(), vec![-1, 0]);
        assert_eq!(g.elements[0].act_on_class(&[5, -3]).unwrap(), vec![5, -3]);
        assert!(g.elements[s1].act_on_class(&[1, 2, 3]).is_err());
    }

    #[test]
    fn act_on_functional_examples() {
        let g = WeylGroup::generate(&a2());
        let s1 = &g.elements[g.element_of_word(&[0])];
        assert_eq!(
            s1.act_on_functional(&[rat(1), rat(1)]).unwrap(),
            vec![rat(-1), rat(2)]
        );
        // points of [S_1]-perp are fixed
        assert_eq!(
            s1.act_on_functional(&[rat(0), rat(5)]).unwrap(),
            vec![rat(0), rat(5)]
        );
        // involution
        let phi = vec![rat(7), rat(-2)];
        let once = s1.act_on_functional(&phi).unwrap();
        assert_eq!(s1.act_on_functional(&once).unwrap(), phi);
    }

    #[test]
    fn matrices_preserve_cartan_form() {
        let g = WeylGroup::generate(&build_cartan('A', 3).unwrap());
        let roots = g.cartan.positive_roots();
        for w in &g.elements {
            for a in &roots {
                for b in &roots {
                    let wa = w.act_on_class(a).unwrap();
                    let wb = w.act_on_class(b).unwrap();
                    assert_eq!(g.cartan.form(&wa, &wb), g.cartan.form(a, b));
                }
            }
        }
    }

    #[test]
    fn root_system_stable_under_group() {
        let g = WeylGroup::generate(&a2());
        let roots = g.cartan.positive_roots();
        for w in &g.elements {
            for beta in &roots {
                let image = w.act_on_class(beta).unwrap();
                let neg: Vec<i64> = image.iter().map(|x| -x).collect();
                assert!(roots.contains(&image) || roots.contains(&neg));
            }
        }
    }

    #[test]
    fn word_reproduces_matrix() {
        let g = WeylGroup::generate(&build_cartan('A', 3).unwrap());
        for (i, w) in g.elements.iter().enumerate() {
            assert_eq!(g.element_of_word(&w.word), i);
            assert_eq!(w.word.len(), w.length);
        }
    }

    #[test]
    fn reduced_words_a2_longest() {
        let g = WeylGroup::generate(&a2());
        let w0 = g.longest_element();
        let words = g.reduced_words(w0);
        assert_eq!(words, vec![vec![0, 1, 0], vec![1, 0, 1]]);
        assert_eq!(g.reduced_words(0), vec![Vec::<usize>::new()]);
    }

    /// Independent oracle for the number of reduced words of the longest
    /// element of A_3: standard Young tableaux of staircase shape (3,2,1).
    fn count_syt_staircase() -> usize {
        // cells of shape (3,2,1) in reading order
        let shape = [3usize, 2, 1];
        let mut grid = [[0usize; 3]; 3];
        fn fill(k: usize, grid: &mut [[usize; 3]; 3], shape: &[usize; 3]) -> usize {
            if k == 7 {
                return 1;
            }
            let mut total = 0;
            for r in 0..3 {
                for c in 0..shape[r] {
                    if grid[r][c] != 0 {
                        continue;
                    }
                    let row_ok = c == 0 || grid[r][c - 1] != 0;
                    let col_ok = r == 0 || grid[r - 1][c] != 0;
                    if row_ok && col_ok {
                        grid[r][c] = k;
                        total += fill(k + 1, grid, shape);
                        grid[r][c] = 0;
                    }
                }
            }
            total
        }
        fill(1, &mut grid, &shape)
    }

    #[test]
    fn reduced_words_a3_longest_count() {
        let g = WeylGroup::generate(&build_cartan('A', 3).unwrap());
        let words = g.reduced_words(g.longest_element());
        assert_eq!(words.len(), count_syt_staircase());
        assert_eq!(words.len(), 16);
        for w in &words {
            assert!(g.is_reduced(w));
        }
    }

    #[test]
    fn length_increases_by_one() {
        let g = WeylGroup::generate(&build_cartan('A', 3).unwrap());
        for w in 0..g.order() {
            for i in 0..3 {
                let v = g.right_mult[w][i];
                let (lw, lv) = (g.elements[w].length, g.elements[v].length);
                assert!(lv == lw + 1 || lv + 1 == lw);
            }
        }
    }

    #[test]
    fn functional_action_composes_along_words() {
        let g = WeylGroup::generate(&build_cartan('A', 3).unwrap());
        let phi = vec![rat(3), rat(-1), rat(2)];
        for w in &g.elements {
            let direct = w.act_on_functional(&phi).unwrap();
            let mut via_word = phi.clone();
            for &i in &w.word {
                let s = &g.elements[g.element_of_word(&[i])];
                via_word = s.act_on_functional(&via_word).unwrap();
            }
            assert_eq!(direct, via_word);
        }
    }
}
