//! Exact integer matrices: Smith and Hermite forms, integer kernels, integer
//! solving, and lattices of `Z^n` kept in Hermite form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// Reduce `x` into `[0, m)` when `m > 0`; leave it untouched when `m == 0`.
pub fn reduce_mod(x: &Int, m: &Int) -> Int {
    if m.is_zero() {
        x.clone()
    } else {
        x.mod_floor(m)
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    pub fn diagonal(entries: &[Int]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// Build from row vectors. `cols` is needed so that an empty list still
    /// has a width.
    pub fn from_rows(rows: Vec<Vec<Int>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r);
        }
        IntMatrix { rows: n, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| ints(r)).collect(), cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// `A · x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x · A` for a row vector `x`.
    pub fn vec_mul(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(self.rows, x.len());
        let mut out = vec![Int::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += xi * a;
            }
        }
        out
    }

    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let rows = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend(other.row(i).iter().cloned());
                r
            })
            .collect();
        IntMatrix::from_rows(rows, self.cols + other.cols)
    }

    pub fn push_row(&mut self, row: Vec<Int>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> IntMatrix {
        let rows = idx.into_iter().map(|i| self.row(i).to_vec()).collect();
        IntMatrix::from_rows(rows, self.cols)
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let rows = (0..self.rows)
            .map(|i| idx.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        IntMatrix::from_rows(rows, idx.len())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * c;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * c;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }
}

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d₁ | d₂ | …`, zeros trailing. The inverses of `U` and `V` are tracked
/// alongside.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }
}

fn min_nonzero(d: &IntMatrix, t: usize, whole_block: bool) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let consider = |i: usize, j: usize, best: &mut Option<(usize, usize)>| {
        let x = d.get(i, j);
        if x.is_zero() {
            return;
        }
        match best {
            Some((bi, bj)) if d.get(*bi, *bj).abs() <= x.abs() => {}
            _ => *best = Some((i, j)),
        }
    };
    if whole_block {
        for i in t..d.rows() {
            for j in t..d.cols() {
                consider(i, j, &mut best);
            }
        }
    } else {
        for i in t..d.rows() {
            consider(i, t, &mut best);
        }
        for j in t + 1..d.cols() {
            consider(t, j, &mut best);
        }
    }
    best
}

/// Smith normal form by elementary row and column operations, choosing the
/// smallest available pivot at every step.
pub fn smith(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        let Some(mut pivot) = min_nonzero(&d, t, true) else { break };
        loop {
            let (pi, pj) = pivot;
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let p = d.get(t, t).clone();
            for i in t + 1..m {
                let q = d.get(i, t).div_floor(&p);
                if !q.is_zero() {
                    d.add_row(i, t, &-&q);
                    u.add_row(i, t, &-&q);
                    u_inv.add_col(t, i, &q);
                }
            }
            for j in t + 1..n {
                let q = d.get(t, j).div_floor(&p);
                if !q.is_zero() {
                    d.add_col(j, t, &-&q);
                    v.add_col(j, t, &-&q);
                    v_inv.add_row(t, j, &q);
                }
            }
            let clean = (t + 1..m).all(|i| d.get(i, t).is_zero())
                && (t + 1..n).all(|j| d.get(t, j).is_zero());
            if !clean {
                pivot = min_nonzero(&d, t, false).expect("pivot row/column is nonzero");
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let offending = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match offending {
                Some(i) => {
                    d.add_row(t, i, &Int::one());
                    u.add_row(t, i, &Int::one());
                    u_inv.add_col(i, t, &-Int::one());
                    pivot = min_nonzero(&d, t, false).expect("pivot row is nonzero");
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    SmithDecomposition { u, v, d, u_inv, v_inv }
}

/// Row Hermite normal form: rows in echelon form with positive pivots,
/// entries above each pivot reduced into `[0, pivot)`. Zero rows dropped.
pub fn hermite(a: &IntMatrix) -> IntMatrix {
    let mut m = a.clone();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m.rows() {
                if !m.get(i, c).is_zero()
                    && best.map_or(true, |b| m.get(i, c).abs() < m.get(b, c).abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap_rows(r, b);
            let p = m.get(r, c).clone();
            let mut clean = true;
            for i in r + 1..m.rows() {
                let q = m.get(i, c).div_floor(&p);
                m.add_row(i, r, &-q);
                if !m.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r < m.rows() && !m.get(r, c).is_zero() {
            if m.get(r, c).is_negative() {
                m.negate_row(r);
            }
            let p = m.get(r, c).clone();
            for i in 0..r {
                let q = m.get(i, c).div_floor(&p);
                m.add_row(i, r, &-q);
            }
            r += 1;
        }
    }
    m.select_rows(0..r)
}

fn reverse_cols(a: &IntMatrix) -> IntMatrix {
    let idx: Vec<usize> = (0..a.cols()).rev().collect();
    a.select_cols(&idx)
}

/// Echelon form with pivots at the *last* nonzero entry of each row; used
/// to pick canonical particular solutions (later unknowns reduced first).
pub fn trailing_hermite(a: &IntMatrix) -> IntMatrix {
    reverse_cols(&hermite(&reverse_cols(a)))
}

fn pivot_col(row: &[Int]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// Reduce `v` modulo the row lattice of a Hermite basis.
pub fn reduce_by_hermite(v: &[Int], basis: &IntMatrix) -> Vec<Int> {
    let mut v = v.to_vec();
    for i in 0..basis.rows() {
        let row = basis.row(i);
        let Some(p) = pivot_col(row) else { continue };
        let q = v[p].div_floor(&row[p]);
        if !q.is_zero() {
            for (x, b) in v.iter_mut().zip(row) {
                *x -= &q * b;
            }
        }
    }
    v
}

fn reduce_by_trailing(v: &[Int], basis: &IntMatrix) -> Vec<Int> {
    let rv: Vec<Int> = v.iter().rev().cloned().collect();
    let mut out = reduce_by_hermite(&rv, &reverse_cols(basis));
    out.reverse();
    out
}

/// Basis (Hermite form) of `{x : x · A = 0}`.
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let s = smith(a);
    let r = s.rank();
    hermite(&s.u.select_rows(r..a.rows()))
}

/// Basis (Hermite form, as rows) of `{x : A · x = 0}`.
pub fn right_kernel(a: &IntMatrix) -> IntMatrix {
    left_kernel(&a.transpose())
}

/// Integer solution set of `A · x = b`: a particular solution reduced
/// modulo the kernel lattice, and a kernel basis (rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSolution {
    pub particular: Vec<Int>,
    pub kernel: IntMatrix,
}

pub fn solve(a: &IntMatrix, b: &[Int]) -> Option<IntSolution> {
    assert_eq!(a.rows(), b.len(), "right-hand side has wrong length");
    let (m, n) = (a.rows(), a.cols());
    let s = smith(a);
    let r = s.rank();
    let ub = s.u.mul_vec(b);
    let mut y = vec![Int::zero(); n];
    for i in 0..r {
        let (q, rem) = ub[i].div_rem(s.d.get(i, i));
        if !rem.is_zero() {
            return None;
        }
        y[i] = q;
    }
    if ub[r..m].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let x = s.v.mul_vec(&y);
    let kernel = trailing_hermite(&s.v.transpose().select_rows(r..n));
    let particular = reduce_by_trailing(&x, &kernel);
    Some(IntSolution { particular, kernel })
}

/// Solve `x · A = b`.
pub fn solve_left(a: &IntMatrix, b: &[Int]) -> Option<IntSolution> {
    solve(&a.transpose(), b)
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(a: &IntMatrix) -> Option<IntMatrix> {
    if a.rows() != a.cols() {
        return None;
    }
    let s = smith(a);
    if s.diagonal().iter().any(|x| !x.is_one()) {
        return None;
    }
    // U A V = I  =>  A^{-1} = V U
    Some(s.v.mul(&s.u))
}

/// A sublattice of `Z^dim`, stored by its Hermite basis so that equal
/// lattices compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    dim: usize,
    basis: IntMatrix,
}

impl Lattice {
    pub fn new(dim: usize, generators: &IntMatrix) -> Self {
        assert_eq!(generators.cols(), dim);
        Lattice { dim, basis: hermite(generators) }
    }

    pub fn from_vecs(dim: usize, gens: Vec<Vec<Int>>) -> Self {
        Self::new(dim, &IntMatrix::from_rows(gens, dim))
    }

    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: IntMatrix::zeros(0, dim) }
    }

    pub fn full(dim: usize) -> Self {
        Lattice { dim, basis: IntMatrix::identity(dim) }
    }

    /// `⊕ d_i Z` for the given moduli (0 contributes nothing).
    pub fn from_moduli(moduli: &[Int]) -> Self {
        let dim = moduli.len();
        let rows = moduli
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| {
                let mut r = vec![Int::zero(); dim];
                r[i] = d.clone();
                r
            })
            .collect();
        Self::from_vecs(dim, rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    /// Coordinates of `v` in the Hermite basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.dim);
        let mut cur = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for i in 0..self.rank() {
            let row = self.basis.row(i);
            let p = pivot_col(row).expect("basis rows are nonzero");
            let (q, rem) = cur[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, b) in cur.iter_mut().zip(row) {
                    *x -= &q * b;
                }
            }
            coords.push(q);
        }
        cur.iter().all(|x| x.is_zero()).then_some(coords)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        (0..other.rank()).all(|i| self.contains(other.basis.row(i)))
    }

    /// Canonical coset representative of `v` modulo this lattice.
    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        reduce_by_hermite(v, &self.basis)
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        Lattice::new(self.dim, &self.basis.vstack(&other.basis))
    }

    pub fn add_vecs(&self, gens: &[Vec<Int>]) -> Lattice {
        let extra = IntMatrix::from_rows(gens.to_vec(), self.dim);
        Lattice::new(self.dim, &self.basis.vstack(&extra))
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        if self.rank() == 0 || other.rank() == 0 {
            return Lattice::zero(self.dim);
        }
        let stacked = self.basis.vstack(&other.basis);
        let k = left_kernel(&stacked);
        let left = k.select_cols(&(0..self.rank()).collect::<Vec<_>>());
        Lattice::new(self.dim, &left.mul(&self.basis))
    }

    /// `{x : n·x ∈ self for some n ≥ 1}`.
    pub fn saturate(&self) -> Lattice {
        if self.rank() == 0 {
            return Lattice::zero(self.dim);
        }
        let orth = left_kernel(&self.basis.transpose());
        if orth.rows() == 0 {
            return Lattice::full(self.dim);
        }
        Lattice::new(self.dim, &left_kernel(&orth.transpose()))
    }

    /// `{x : x · map ∈ target}` for a `dim × k` matrix.
    pub fn preimage(map: &IntMatrix, target: &Lattice) -> Lattice {
        let dim = map.rows();
        assert_eq!(map.cols(), target.dim);
        if map.cols() == 0 {
            return Lattice::full(dim);
        }
        let stacked = map.vstack(&target.basis);
        let k = left_kernel(&stacked);
        let x = k.select_cols(&(0..dim).collect::<Vec<_>>());
        Lattice::new(dim, &x)
    }

    /// Image `{x · map : x ∈ self}`.
    pub fn image(&self, map: &IntMatrix) -> Lattice {
        assert_eq!(map.rows(), self.dim);
        Lattice::new(map.cols(), &self.basis.mul(map))
    }

    /// Rows of `sub`'s basis expressed in this lattice's basis.
    pub fn relative_basis(&self, sub: &Lattice) -> Option<IntMatrix> {
        let rows: Option<Vec<Vec<Int>>> =
            (0..sub.rank()).map(|i| self.coordinates(sub.basis.row(i))).collect();
        Some(IntMatrix::from_rows(rows?, self.rank()))
    }

    /// Invariant factors of `self / sub` (`sub ⊆ self` required): nonunit
    /// torsion orders ascending, then one zero per free summand.
    pub fn quotient_invariants(&self, sub: &Lattice) -> Vec<Int> {
        let rel = self.relative_basis(sub).expect("sublattice is contained");
        invariant_factors_of_relations(&rel, self.rank())
    }

    /// `[self : sub]` when finite.
    pub fn index_of(&self, sub: &Lattice) -> Option<Int> {
        let inv = self.quotient_invariants(sub);
        if inv.iter().any(|x| x.is_zero()) {
            None
        } else {
            Some(inv.iter().product())
        }
    }
}

/// Homogeneous linear congruences `Σ_v a_v z_v ≡ 0 (mod m)` over integer
/// unknowns; a modulus of 0 means exact equality.
#[derive(Clone, Debug, Default)]
pub struct Congruences {
    nvars: usize,
    rows: Vec<(Vec<Int>, Int)>,
}

impl Congruences {
    pub fn new(nvars: usize) -> Self {
        Congruences { nvars, rows: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn push(&mut self, coeffs: Vec<Int>, modulus: Int) {
        assert_eq!(coeffs.len(), self.nvars);
        if modulus.is_one() || coeffs.iter().all(|c| c.is_zero()) {
            return;
        }
        self.rows.push((coeffs, modulus));
    }

    /// The solution lattice in `Z^nvars`, cutting down one congruence at a
    /// time.
    pub fn solutions(&self) -> Lattice {
        let mut basis = IntMatrix::identity(self.nvars);
        for (coeffs, modulus) in &self.rows {
            let values = basis.mul_vec(coeffs);
            if values.iter().all(|v| reduce_mod(v, modulus).is_zero()) {
                continue;
            }
            let column = IntMatrix::from_rows(values.into_iter().map(|v| vec![v]).collect(), 1);
            let kept = Lattice::preimage(&column, &Lattice::from_moduli(std::slice::from_ref(modulus)));
            basis = hermite(&kept.basis().mul(&basis));
            if basis.rows() == 0 {
                break;
            }
        }
        Lattice::new(self.nvars, &basis)
    }
}

/// Invariant factors of `Z^ngens / rowspan(relations)`.
pub fn invariant_factors_of_relations(relations: &IntMatrix, ngens: usize) -> Vec<Int> {
    assert_eq!(relations.cols(), ngens);
    let s = smith(relations);
    let diag = s.diagonal();
    let r = s.rank();
    let mut out: Vec<Int> = diag[..r].iter().filter(|x| !x.is_one()).cloned().collect();
    out.extend(std::iter::repeat(Int::zero()).take(ngens - r));
    out
}

/// Diagonal re-presentation of `Z^ngens / rowspan(relations)`: new
/// generators (as rows in the old coordinates) with their orders, unit
/// orders dropped, plus the coordinate change.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub orders: Vec<Int>,
    /// `lifts[k]` is the old-coordinate vector of the k-th new generator.
    pub lifts: Vec<Vec<Int>>,
    to_new: IntMatrix,
}

impl Presentation {
    pub fn new(relations: &IntMatrix, ngens: usize) -> Self {
        assert_eq!(relations.cols(), ngens);
        let s = smith(relations);
        let diag = s.diagonal();
        let order_of = |k: usize| diag.get(k).cloned().unwrap_or_else(Int::zero);
        let keep: Vec<usize> = (0..ngens).filter(|&k| !order_of(k).is_one()).collect();
        let orders = keep.iter().map(|&k| order_of(k)).collect();
        let lifts = keep.iter().map(|&k| s.v_inv.row(k).to_vec()).collect();
        let to_new = s.v.select_cols(&keep);
        Presentation { orders, lifts, to_new }
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// New coordinates (reduced) of an old-coordinate vector.
    pub fn coords(&self, old: &[Int]) -> Vec<Int> {
        let z = self.to_new.vec_mul(old);
        z.iter().zip(&self.orders).map(|(x, d)| reduce_mod(x, d)).collect()
    }

    /// Old-coordinate vector of a new-coordinate vector.
    pub fn lift(&self, new: &[Int]) -> Vec<Int> {
        let n = self.to_new.rows();
        let mut out = vec![Int::zero(); n];
        for (c, l) in new.iter().zip(&self.lifts) {
            for (o, x) in out.iter_mut().zip(l) {
                *o += c * x;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(a: &IntMatrix) -> SmithDecomposition {
        let s = smith(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d, "U A V != D for {a:?}");
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(a.cols()));
        let diag = s.diagonal();
        for i in 0..diag.len() {
            for j in 0..diag.len() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn smith_identity_and_zero() {
        let s = check_smith(&IntMatrix::identity(2));
        assert_eq!(s.diagonal(), ints(&[1, 1]));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
        let s = check_smith(&IntMatrix::zeros(2, 3));
        assert!(s.d.is_zero());
    }

    #[test]
    fn smith_two_by_two() {
        let s = check_smith(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.diagonal(), ints(&[2, 4]));
        assert_eq!(s.u.determinant().abs(), Int::one());
        assert_eq!(s.v.determinant().abs(), Int::one());
    }

    #[test]
    fn smith_rectangular() {
        check_smith(&IntMatrix::from_i64(&[&[3, 5, 7], &[6, 10, 15]]));
        check_smith(&IntMatrix::from_i64(&[&[0, 4], &[6, 0], &[0, 0]]));
    }

    #[test]
    fn solve_examples() {
        let s = solve(&IntMatrix::from_i64(&[&[2]]), &ints(&[4])).unwrap();
        assert_eq!(s.particular, ints(&[2]));
        assert_eq!(s.kernel.rows(), 0);
        assert!(solve(&IntMatrix::from_i64(&[&[2]]), &ints(&[3])).is_none());
        let a = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let s = solve(&a, &ints(&[3, 6])).unwrap();
        assert_eq!(s.particular, ints(&[3, 0]));
        assert_eq!(s.kernel, IntMatrix::from_i64(&[&[-2, 1]]));
        assert_eq!(a.mul_vec(&s.particular), ints(&[3, 6]));
    }

    #[test]
    fn hermite_is_canonical() {
        let a = IntMatrix::from_i64(&[&[2, 2], &[0, 3]]);
        let b = IntMatrix::from_i64(&[&[2, 5], &[0, 3], &[4, 1]]);
        assert_eq!(Lattice::new(2, &a), Lattice::new(2, &b));
    }

    #[test]
    fn lattice_operations() {
        let two = Lattice::from_vecs(1, vec![ints(&[2])]);
        let three = Lattice::from_vecs(1, vec![ints(&[3])]);
        assert_eq!(two.sum(&three), Lattice::full(1));
        assert_eq!(two.intersect(&three), Lattice::from_vecs(1, vec![ints(&[6])]));
        assert_eq!(two.intersect(&Lattice::zero(1)), Lattice::zero(1));
        let s = Lattice::from_vecs(2, vec![ints(&[2, 2])]);
        assert_eq!(s.saturate(), Lattice::from_vecs(2, vec![ints(&[1, 1])]));
        assert_eq!(Lattice::full(3).saturate(), Lattice::full(3));
        assert_eq!(Lattice::full(2).index_of(&Lattice::from_moduli(&ints(&[2, 4]))), Some(int(8)));
    }

    #[test]
    fn preimage_of_congruence() {
        // x with 2x ≡ 0 mod 4
        let map = IntMatrix::from_i64(&[&[2]]);
        let t = Lattice::from_moduli(&ints(&[4]));
        assert_eq!(Lattice::preimage(&map, &t), Lattice::from_vecs(1, vec![ints(&[2])]));
    }

    #[test]
    fn presentation_of_quotient() {
        let rel = IntMatrix::from_i64(&[&[2, 0], &[0, 4]]);
        let p = Presentation::new(&rel, 2);
        assert_eq!(p.orders, ints(&[2, 4]));
        let rel = IntMatrix::from_i64(&[&[2, 3]]);
        let p = Presentation::new(&rel, 2);
        assert_eq!(p.orders, ints(&[0]));
        // (2,3) is zero in the quotient
        assert_eq!(p.coords(&ints(&[2, 3])), ints(&[0]));
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let a = IntMatrix::from_i64(&[&[2, 3], &[1, 2]]);
        let inv = unimodular_inverse(&a).unwrap();
        assert_eq!(a.mul(&inv), IntMatrix::identity(2));
        assert!(unimodular_inverse(&IntMatrix::from_i64(&[&[2]])).is_none());
    }
}
