//! Exact linear algebra over the rationals.
//!
//! Everything downstream (ideals, representations, stability verdicts) reduces
//! to row reduction, kernels, and solving small dense systems, so these are
//! implemented once here over `BigRational` and never approximated.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Sign of a rational as -1, 0, or +1.
pub fn sign_of(x: &Rat) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Canonical string for a rational: "n" or "n/d" with d > 0 and gcd(n,d)=1.
pub fn frac_str(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_frac(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

pub fn dot_ii(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_ri(a: &[Rat], b: &[i64]) -> Rat {
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if *y != 0 {
            acc += x * rat(*y);
        }
    }
    acc
}

pub fn dot_rr(a: &[Rat], b: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Divide an integer vector by the gcd of its entries, keeping the first
/// nonzero entry's sign. Returns None for the zero vector.
pub fn primitive(v: &[i64]) -> Option<Vec<i64>> {
    let mut g: i64 = 0;
    for &x in v {
        g = g.gcd(&x.abs());
    }
    if g == 0 {
        return None;
    }
    Some(v.iter().map(|&x| x / g).collect())
}

/// Scale a rational vector to a primitive integer vector (same line).
pub fn primitive_of_rational(v: &[Rat]) -> Option<Vec<i64>> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return None;
    }
    ints.iter()
        .map(|x| i64::try_from(x / &g).ok())
        .collect::<Option<Vec<i64>>>()
}

/// Dense rational matrix, row major. Rows and columns may be zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols);
            data.extend(row);
        }
        QMat { rows: r, cols, data }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        QMat::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(),
            cols,
        )
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Rat] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn push_row(&mut self, row: Vec<Rat>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        let mut out = QMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] += prod;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot_rr(self.row(i), v)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Rank via a scratch row reduction.
    pub fn rank(&self) -> usize {
        Subspace::from_rows(
            (0..self.rows).map(|i| self.row(i).to_vec()).collect(),
            self.cols,
        )
        .dim()
    }

    /// Kernel basis (column-vector kernel), as rows of the returned matrix.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        // Reduce self, then back-substitute free columns.
        let sub = Subspace::from_rows(
            (0..self.rows).map(|i| self.row(i).to_vec()).collect(),
            self.cols,
        );
        let pivots = &sub.pivots;
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for j in 0..self.cols {
            if is_pivot[j] {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[j] = Rat::one();
            for (ri, &p) in pivots.iter().enumerate() {
                // row: e_p + sum over non-pivot cols; solve pivot entry
                v[p] = -sub.rows[ri][j].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Square-matrix inverse; None if singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMat::identity(n);
        for col in 0..n {
            let mut piv = None;
            for r in col..n {
                if !a[(r, col)].is_zero() {
                    piv = Some(r);
                    break;
                }
            }
            let piv = piv?;
            a.swap_rows(col, piv);
            inv.swap_rows(col, piv);
            let scale = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] /= &scale;
                inv[(col, j)] /= &scale;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    let t = &factor * &a[(col, j)];
                    a[(r, j)] -= t;
                    let t = &factor * &inv[(col, j)];
                    inv[(r, j)] -= t;
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            let a = i * self.cols + c;
            let b = j * self.cols + c;
            self.data.swap(a, b);
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// A linear subspace of Q^n in reduced row echelon form.
///
/// The RREF rows are the canonical representation: two subspaces are equal
/// iff their `rows` are equal, which is what makes ideal comparison exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    pub rows: Vec<Vec<Rat>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn empty(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Subspace::empty(ambient);
        for i in 0..ambient {
            let mut v = vec![Rat::zero(); ambient];
            v[i] = Rat::one();
            s.insert(v);
        }
        s
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>, ambient: usize) -> Self {
        let mut s = Subspace::empty(ambient);
        for r in rows {
            s.insert(r);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current rows; returns the residual.
    pub fn reduce(&self, mut v: Vec<Rat>) -> Vec<Rat> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p].clone();
                for (vi, ri) in v.iter_mut().zip(row) {
                    let t = &c * ri;
                    *vi -= t;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Insert a vector, keeping RREF; returns true if the dimension grew.
    pub fn insert(&mut self, v: Vec<Rat>) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut v = self.reduce(v);
        let piv = match v.iter().position(|x| !x.is_zero()) {
            Some(p) => p,
            None => return false,
        };
        let c = v[piv].clone();
        for x in v.iter_mut() {
            *x /= &c;
        }
        // Clear the new pivot column from existing rows.
        for row in self.rows.iter_mut() {
            if !row[piv].is_zero() {
                let c = row[piv].clone();
                for (ri, vi) in row.iter_mut().zip(&v) {
                    let t = &c * vi;
                    *ri -= t;
                }
            }
        }
        let at = self.pivots.iter().position(|&p| p > piv).unwrap_or(self.pivots.len());
        self.pivots.insert(at, piv);
        self.rows.insert(at, v);
        true
    }

    /// Coordinates of `v` in terms of the RREF rows; None if outside.
    pub fn coords_of(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let mut v = v.to_vec();
        let mut coords = vec![Rat::zero(); self.rows.len()];
        for (idx, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if !v[p].is_zero() {
                let c = v[p].clone();
                for (vi, ri) in v.iter_mut().zip(row) {
                    let t = &c * ri;
                    *vi -= t;
                }
                coords[idx] = c;
            }
        }
        if v.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }

    /// Rows scaled to primitive integer vectors with positive leading entry.
    pub fn integer_rows(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| primitive_of_rational(r).expect("nonzero RREF row"))
            .collect()
    }
}

/// Solves A x = v repeatedly for the same spanning set A (columns).
pub struct SpanSolver {
    space: Subspace,
    /// transform[i] = coefficients expressing RREF row i in the input rows.
    transform: Vec<Vec<Rat>>,
    n_inputs: usize,
}

impl SpanSolver {
    /// `vectors` are the spanning vectors (not necessarily independent).
    pub fn new(vectors: &[Vec<Rat>], ambient: usize) -> Self {
        let mut space = Subspace::empty(ambient);
        let mut transform: Vec<Vec<Rat>> = Vec::new();
        let n = vectors.len();
        for (k, v) in vectors.iter().enumerate() {
            // Track v reduced alongside its expression in the inputs.
            let mut expr = vec![Rat::zero(); n];
            expr[k] = Rat::one();
            let mut vv = v.clone();
            for (idx, (row, &p)) in space.rows.iter().zip(&space.pivots).enumerate() {
                if !vv[p].is_zero() {
                    let c = vv[p].clone();
                    for (vi, ri) in vv.iter_mut().zip(row) {
                        let t = &c * ri;
                        *vi -= t;
                    }
                    for (ei, ti) in expr.iter_mut().zip(&transform[idx]) {
                        let t = &c * ti;
                        *ei -= t;
                    }
                }
            }
            if let Some(piv) = vv.iter().position(|x| !x.is_zero()) {
                let c = vv[piv].clone();
                for x in vv.iter_mut() {
                    *x /= &c;
                }
                for x in expr.iter_mut() {
                    *x /= &c;
                }
                for (idx, row) in space.rows.iter_mut().enumerate() {
                    if !row[piv].is_zero() {
                        let c = row[piv].clone();
                        for (ri, vi) in row.iter_mut().zip(&vv) {
                            let t = &c * vi;
                            *ri -= t;
                        }
                        for (ti, ei) in transform[idx].iter_mut().zip(&expr) {
                            let t = &c * ei;
                            *ti -= t;
                        }
                    }
                }
                let at = space.pivots.iter().position(|&p| p > piv).unwrap_or(space.pivots.len());
                space.pivots.insert(at, piv);
                space.rows.insert(at, vv);
                transform.insert(at, expr);
            }
        }
        SpanSolver { space, transform, n_inputs: n }
    }

    /// Express `v` as a combination of the input vectors; None if outside span.
    pub fn solve(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let coords = self.space.coords_of(v)?;
        let mut out = vec![Rat::zero(); self.n_inputs];
        for (c, expr) in coords.iter().zip(&self.transform) {
            if c.is_zero() {
                continue;
            }
            for (o, e) in out.iter_mut().zip(expr) {
                let t = c * e;
                *o += t;
            }
        }
        Some(out)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// Characteristic polynomial coefficients c_0..c_n of a square matrix
/// (p(x) = sum c_k x^k, monic), by the Faddeev-LeVerrier recurrence.
pub fn char_poly(a: &QMat) -> Vec<Rat> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut m = QMat::identity(n);
    for k in 1..=n {
        m = a.mul(&m);
        let tr: Rat = (0..n).map(|i| m[(i, i)].clone()).fold(Rat::zero(), |s, x| s + x);
        let c = -tr / rat(k as i64);
        coeffs[n - k] = c.clone();
        for i in 0..n {
            m[(i, i)] += &c;
        }
    }
    coeffs
}

/// All rational roots of the polynomial with the given coefficients c_0..c_n.
pub fn rational_roots(coeffs: &[Rat]) -> Vec<Rat> {
    // Clear denominators to an integer polynomial.
    let mut lcm = BigInt::one();
    for c in coeffs {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let deg = match ints.iter().rposition(|c| !c.is_zero()) {
        Some(d) => d,
        None => return Vec::new(),
    };
    // Factor out x^k for zero constant terms.
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Rat::zero());
    }
    if deg == low {
        return roots;
    }
    let a0 = ints[low].abs();
    let an = ints[deg].abs();
    let eval = |x: &Rat| -> Rat {
        let mut acc = Rat::zero();
        for c in ints.iter().rev() {
            acc = acc * x + Rat::from_integer(c.clone());
        }
        acc
    };
    for p in divisors(&a0) {
        for q in divisors(&an) {
            for s in [1i64, -1] {
                let cand = Rat::new(&p * BigInt::from(s), q.clone());
                if roots.contains(&cand) {
                    continue;
                }
                if eval(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn subspace_rref_canonical() {
        let a = Subspace::from_rows(
            vec![vec![rat(1), rat(2), rat(3)], vec![rat(2), rat(4), rat(7)]],
            3,
        );
        let b = Subspace::from_rows(
            vec![vec![rat(3), rat(6), rat(10)], vec![rat(0), rat(0), rat(1)]],
            3,
        );
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn kernel_annihilates() {
        let m = QMat::from_int_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        for v in &k {
            assert!(m.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn span_solver_roundtrip() {
        let vs = vec![
            vec![rat(1), rat(0), rat(2)],
            vec![rat(0), rat(1), rat(1)],
            vec![rat(1), rat(1), rat(3)],
        ];
        let solver = SpanSolver::new(&vs, 3);
        assert_eq!(solver.dim(), 2);
        let target = vec![rat(2), rat(3), rat(7)];
        let sol = solver.solve(&target).unwrap();
        let mut acc = vec![Rat::zero(); 3];
        for (c, v) in sol.iter().zip(&vs) {
            for (a, x) in acc.iter_mut().zip(v) {
                *a += c * x;
            }
        }
        assert_eq!(acc, target);
        assert!(solver.solve(&[rat(0), rat(0), rat(1)]).is_none());
    }

    #[test]
    fn char_poly_and_roots() {
        // [[2,1],[0,3]] has char poly (x-2)(x-3) = x^2 -5x + 6
        let m = QMat::from_int_rows(&[vec![2, 1], vec![0, 3]]);
        let cp = char_poly(&m);
        assert_eq!(cp, vec![rat(6), rat(-5), rat(1)]);
        let mut roots = rational_roots(&cp);
        roots.sort();
        assert_eq!(roots, vec![rat(2), rat(3)]);
    }

    #[test]
    fn inverse_small() {
        let m = QMat::from_int_rows(&[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(2));
        let sing = QMat::from_int_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse().is_none());
    }

    proptest! {
        #[test]
        fn insert_is_idempotent_on_span(rows in proptest::collection::vec(
            proptest::collection::vec(-5i64..=5, 4), 1..5)) {
            let sub = Subspace::from_rows(
                rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), 4);
            let mut sub2 = sub.clone();
            // Re-inserting any combination of rows must not grow the space.
            for r in &rows {
                let v: Vec<Rat> = r.iter().map(|&x| rat(x) * rat(3)).collect();
                prop_assert!(!sub2.insert(v));
            }
            prop_assert_eq!(sub, sub2);
        }

        #[test]
        fn kernel_dimension_theorem(rows in proptest::collection::vec(
            proptest::collection::vec(-4i64..=4, 5), 0..5)) {
            let m = QMat::from_int_rows(&rows);
            if m.rows > 0 {
                prop_assert_eq!(m.rank() + m.kernel().len(), m.cols);
            }
        }
    }
}
