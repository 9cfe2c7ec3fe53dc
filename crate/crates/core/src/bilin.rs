//! The bilinear map `f_A : Â × Â → A²`, its width and complete systems, and
//! the scalar rings `P(f)` and `P(A)`.

use std::collections::HashSet;

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::FgAbelianGroup;
use crate::linalg::{reduce_mod, Congruences, Int, IntMatrix, Lattice, Presentation};
use crate::ring::FdzRing;

/// Largest carrier enumerated when computing exact widths.
const WIDTH_ENUMERATION_LIMIT: usize = 1 << 12;

/// A bilinear map between diagonal groups `⊕ Z/d_i × ⊕ Z/d_i → ⊕ Z/d'_k`,
/// given on generator pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearMap {
    domain_orders: Vec<Int>,
    codomain_orders: Vec<Int>,
    /// `values[a * s + b]` = `f(x_a, x_b)` in codomain coordinates.
    values: Vec<Vec<Int>>,
    /// Domain coordinates of the image of each codomain generator under
    /// the canonical map `A² → Â`, when `f` comes from a ring.
    projection: Option<IntMatrix>,
    ring_data: Option<RingData>,
}

/// How the abstract domain and codomain sit inside the source ring.
#[derive(Clone, Debug, PartialEq, Eq)]
struct RingData {
    domain_pres: Presentation,
    domain_lifts: Vec<Vec<Int>>,
    square: Lattice,
    codomain_pres: Presentation,
    codomain_lifts: Vec<Vec<Int>>,
}

impl BilinearMap {
    pub fn new(domain_orders: Vec<Int>, codomain_orders: Vec<Int>, values: Vec<Vec<Int>>) -> Result<Self> {
        let s = domain_orders.len();
        let t = codomain_orders.len();
        if values.len() != s * s || values.iter().any(|v| v.len() != t) {
            return Err(Error::Dimension(format!("bilinear map values must be {s}x{s} vectors of length {t}")));
        }
        let values = values
            .into_iter()
            .map(|v| v.iter().zip(&codomain_orders).map(|(x, d)| reduce_mod(x, d)).collect())
            .collect();
        let f = BilinearMap { domain_orders, codomain_orders, values, projection: None, ring_data: None };
        f.check_well_defined()?;
        Ok(f)
    }

    fn check_well_defined(&self) -> Result<()> {
        let s = self.domain_len();
        for a in 0..s {
            for b in 0..s {
                for (k, dk) in self.codomain_orders.iter().enumerate() {
                    let v = &self.values[a * s + b][k];
                    for d in [&self.domain_orders[a], &self.domain_orders[b]] {
                        let x = reduce_mod(&(d * v), dk);
                        if !x.is_zero() {
                            return Err(Error::InvalidRing { i: a + 1, j: b + 1, k: k + 1 });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn domain_len(&self) -> usize {
        self.domain_orders.len()
    }

    pub fn codomain_len(&self) -> usize {
        self.codomain_orders.len()
    }

    pub fn domain_orders(&self) -> &[Int] {
        &self.domain_orders
    }

    pub fn codomain_orders(&self) -> &[Int] {
        &self.codomain_orders
    }

    pub fn domain(&self) -> FgAbelianGroup {
        FgAbelianGroup::from_orders(&self.domain_orders)
    }

    pub fn codomain(&self) -> FgAbelianGroup {
        FgAbelianGroup::from_orders(&self.codomain_orders)
    }

    pub fn projection(&self) -> Option<&IntMatrix> {
        self.projection.as_ref()
    }

    pub fn gen_value(&self, a: usize, b: usize) -> &[Int] {
        &self.values[a * self.domain_len() + b]
    }

    pub fn reduce_codomain(&self, v: &[Int]) -> Vec<Int> {
        v.iter().zip(&self.codomain_orders).map(|(x, d)| reduce_mod(x, d)).collect()
    }

    pub fn reduce_domain(&self, v: &[Int]) -> Vec<Int> {
        v.iter().zip(&self.domain_orders).map(|(x, d)| reduce_mod(x, d)).collect()
    }

    pub fn eval(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        let s = self.domain_len();
        let mut out = vec![Int::zero(); self.codomain_len()];
        for a in 0..s {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..s {
                if y[b].is_zero() {
                    continue;
                }
                let c = &x[a] * &y[b];
                for (o, v) in out.iter_mut().zip(self.gen_value(a, b)) {
                    *o += &c * v;
                }
            }
        }
        self.reduce_codomain(&out)
    }

    pub fn is_zero_map(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|x| x.is_zero()))
    }

    /// Domain coordinates of a ring element (its class modulo `Ann`).
    pub fn domain_coords_of(&self, x: &[Int]) -> Option<Vec<Int>> {
        self.ring_data.as_ref().map(|d| d.domain_pres.coords(x))
    }

    /// Codomain coordinates of a ring element lying in `A²`.
    pub fn codomain_coords_of(&self, x: &[Int]) -> Option<Vec<Int>> {
        let d = self.ring_data.as_ref()?;
        let c = d.square.coordinates(x)?;
        Some(d.codomain_pres.coords(&c))
    }

    /// Ring elements lifting the domain generators.
    pub fn domain_lifts(&self) -> Option<&[Vec<Int>]> {
        self.ring_data.as_ref().map(|d| d.domain_lifts.as_slice())
    }

    /// Ring elements representing the codomain generators.
    pub fn codomain_lifts(&self) -> Option<&[Vec<Int>]> {
        self.ring_data.as_ref().map(|d| d.codomain_lifts.as_slice())
    }

    /// Elements `x` with `f(x, ·) = f(·, x) = 0`, as a lattice in domain
    /// coordinates (containing the domain relations).
    pub fn radical(&self) -> Lattice {
        self.kernel_against(&(0..self.domain_len()).collect::<Vec<_>>())
    }

    /// `{x : f(x, e) = f(e, x) = 0 for all generators e in the list}`.
    fn kernel_against(&self, gens: &[usize]) -> Lattice {
        let s = self.domain_len();
        let mut cong = Congruences::new(s);
        for &e in gens {
            for (k, dk) in self.codomain_orders.iter().enumerate() {
                let left = (0..s).map(|a| self.gen_value(a, e)[k].clone()).collect();
                let right = (0..s).map(|a| self.gen_value(e, a)[k].clone()).collect();
                cong.push(left, dk.clone());
                cong.push(right, dk.clone());
            }
        }
        cong.solutions().sum(&Lattice::from_moduli(&self.domain_orders))
    }

    pub fn is_degenerate(&self) -> bool {
        self.radical() != Lattice::from_moduli(&self.domain_orders)
    }

    pub fn width(&self) -> Width {
        let upper_bound = if self.codomain().is_trivial() { 0 } else { self.domain_len() };
        let lower_bound = usize::from(!self.codomain().is_trivial());
        let exact = if upper_bound <= lower_bound {
            Some(upper_bound)
        } else {
            self.exact_width_by_enumeration()
        };
        Width { exact, upper_bound }
    }

    fn exact_width_by_enumeration(&self) -> Option<usize> {
        let domain = enumerate_group(&self.domain_orders, WIDTH_ENUMERATION_LIMIT)?;
        let codomain_size = enumerate_group(&self.codomain_orders, WIDTH_ENUMERATION_LIMIT)?.len();
        let mut values: HashSet<Vec<Int>> = HashSet::new();
        for x in &domain {
            for y in &domain {
                values.insert(self.eval(x, y));
            }
        }
        let mut reached: HashSet<Vec<Int>> = HashSet::from([vec![Int::zero(); self.codomain_len()]]);
        let mut steps = 0;
        while reached.len() < codomain_size {
            let next: HashSet<Vec<Int>> = reached
                .iter()
                .flat_map(|r| values.iter().map(move |v| (r, v)))
                .map(|(r, v)| self.reduce_codomain(&r.iter().zip(v).map(|(a, b)| a + b).collect::<Vec<_>>()))
                .collect();
            if next.len() == reached.len() {
                return None;
            }
            reached = next;
            steps += 1;
        }
        Some(steps)
    }

    /// Smallest complete system among subsets of the domain generators.
    pub fn complete_system(&self) -> Result<CompleteSystem> {
        let trivial = Lattice::from_moduli(&self.domain_orders);
        if self.radical() != trivial {
            return Err(Error::Degenerate);
        }
        let s = self.domain_len();
        // Generators of order 1 never occur (presentations drop them).
        for size in 0..=s {
            for subset in subsets(s, size) {
                if self.kernel_against(&subset) == trivial {
                    let witness = subset
                        .iter()
                        .map(|&i| {
                            let mut v = vec![Int::zero(); s];
                            v[i] = Int::one();
                            v
                        })
                        .collect();
                    return Ok(CompleteSystem { generators: subset, witness, size_bound: size });
                }
            }
        }
        Err(Error::Internal("the full generator set is complete for a non-degenerate map".into()))
    }

    /// Is `xs` a complete system?
    pub fn is_complete_system(&self, xs: &[Vec<Int>]) -> bool {
        let s = self.domain_len();
        let mut cong = Congruences::new(s);
        for e in xs {
            for (k, dk) in self.codomain_orders.iter().enumerate() {
                let left = (0..s)
                    .map(|a| {
                        let mut unit = vec![Int::zero(); s];
                        unit[a] = Int::one();
                        self.eval(&unit, e)[k].clone()
                    })
                    .collect();
                let right = (0..s)
                    .map(|a| {
                        let mut unit = vec![Int::zero(); s];
                        unit[a] = Int::one();
                        self.eval(e, &unit)[k].clone()
                    })
                    .collect();
                cong.push(left, dk.clone());
                cong.push(right, dk.clone());
            }
        }
        let trivial = Lattice::from_moduli(&self.domain_orders);
        cong.solutions().sum(&trivial) == trivial
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All elements of `⊕ Z/d_i` if finite and not larger than `limit`.
pub fn enumerate_group(orders: &[Int], limit: usize) -> Option<Vec<Vec<Int>>> {
    let mut size: usize = 1;
    for d in orders {
        let d = d.to_usize().filter(|&d| d > 0)?;
        size = size.checked_mul(d).filter(|&s| s <= limit)?;
    }
    let mut out: Vec<Vec<Int>> = vec![Vec::new()];
    for d in orders {
        let d = d.to_usize()?;
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..d).map(move |x| {
                    let mut w = v.clone();
                    w.push(Int::from(x));
                    w
                })
            })
            .collect();
    }
    Some(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Width {
    pub exact: Option<usize>,
    pub upper_bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleteSystem {
    /// Indices of the domain generators used.
    pub generators: Vec<usize>,
    /// The same elements in domain coordinates.
    pub witness: Vec<Vec<Int>>,
    pub size_bound: usize,
}

/// `f_A(x + Ann, y + Ann) = xy` with domain `A/Ann(A)` and codomain `A²`.
pub fn induced_bilinear_map(ring: &FdzRing) -> BilinearMap {
    let r = ring.rank();
    let ann = ring.annihilator();
    let sq = ring.square();
    let domain_pres = Presentation::new(ann.lattice().basis(), r);
    let domain_lifts: Vec<Vec<Int>> = domain_pres.lifts.iter().map(|l| ring.reduce(l)).collect();

    let square = sq.lattice().clone();
    let rel = square.relative_basis(ring.additive().relations()).expect("relations lie in A²");
    let codomain_pres = Presentation::new(Lattice::new(square.rank(), &rel).basis(), square.rank());
    let codomain_lifts: Vec<Vec<Int>> =
        codomain_pres.lifts.iter().map(|l| ring.reduce(&square.basis().vec_mul(l))).collect();

    let s = domain_lifts.len();
    let mut values = Vec::with_capacity(s * s);
    for a in 0..s {
        for b in 0..s {
            let p = ring.mul(&domain_lifts[a], &domain_lifts[b]);
            let c = square.coordinates(&p).expect("products lie in A²");
            values.push(codomain_pres.coords(&c));
        }
    }
    let projection = IntMatrix::from_rows(codomain_lifts.iter().map(|u| domain_pres.coords(u)).collect(), s);
    BilinearMap {
        domain_orders: domain_pres.orders.clone(),
        codomain_orders: codomain_pres.orders.clone(),
        values,
        projection: Some(projection),
        ring_data: Some(RingData { domain_pres, domain_lifts, square, codomain_pres, codomain_lifts }),
    }
}

/// A scalar ring `P` acting on the domain and codomain of a bilinear map.
/// Actions are matrices on row vectors: `x ↦ x·X`.
#[derive(Clone, Debug)]
pub struct ScalarRingAction {
    pub ring: FdzRing,
    pub domain_action: Vec<IntMatrix>,
    pub codomain_action: Vec<IntMatrix>,
    /// Coordinates of the unit of `ring`.
    pub identity: Vec<Int>,
    /// All compatible endomorphism pairs, flattened `(X, Y)`.
    pub solutions: Lattice,
    /// Pairs acting as zero.
    pub zero: Lattice,
    pub map: BilinearMap,
}

impl ScalarRingAction {
    fn flatten(&self, x: &IntMatrix, y: &IntMatrix) -> Vec<Int> {
        flatten_pair(x, y)
    }

    /// `(X, Y)` for a ring element given in `ring` coordinates.
    pub fn action_of(&self, p: &[Int]) -> (IntMatrix, IntMatrix) {
        let s = self.map.domain_len();
        let t = self.map.codomain_len();
        let mut x = IntMatrix::zeros(s, s);
        let mut y = IntMatrix::zeros(t, t);
        for (c, (xa, ya)) in p.iter().zip(self.domain_action.iter().zip(&self.codomain_action)) {
            for i in 0..s {
                for j in 0..s {
                    x.set(i, j, x.get(i, j) + c * xa.get(i, j));
                }
            }
            for i in 0..t {
                for j in 0..t {
                    y.set(i, j, y.get(i, j) + c * ya.get(i, j));
                }
            }
        }
        (x, y)
    }

    /// Does the pair `(X, Y)` lie in the solution lattice?
    pub fn contains_pair(&self, x: &IntMatrix, y: &IntMatrix) -> bool {
        self.solutions.contains(&self.flatten(x, y))
    }

    /// Exact checks: actions are ring homomorphisms into endomorphisms and
    /// `f(αx, y) = α f(x, y) = f(x, αy)` on generators.
    pub fn check_axioms(&self) -> Result<()> {
        let f = &self.map;
        let (s, t) = (f.domain_len(), f.codomain_len());
        let k = self.ring.rank();
        let unit = |n: usize, i: usize| {
            let mut v = vec![Int::zero(); n];
            v[i] = Int::one();
            v
        };
        for g in 0..k {
            let (x, y) = (&self.domain_action[g], &self.codomain_action[g]);
            for a in 0..s {
                for b in 0..s {
                    let fab = f.gen_value(a, b);
                    let rhs = f.reduce_codomain(&y.vec_mul(fab));
                    let lhs1 = f.eval(&x.vec_mul(&unit(s, a)), &unit(s, b));
                    let lhs2 = f.eval(&unit(s, a), &x.vec_mul(&unit(s, b)));
                    if lhs1 != rhs || lhs2 != rhs {
                        return Err(Error::ScalarAxioms(format!("generator {} is not f-linear", g + 1)));
                    }
                }
            }
            for h in 0..k {
                let prod = self.ring.mul(&unit(k, g), &unit(k, h));
                let (px, py) = self.action_of(&prod);
                let composed = self.flatten(&x.mul(&self.domain_action[h]), &y.mul(&self.codomain_action[h]));
                let diff: Vec<Int> = composed.iter().zip(self.flatten(&px, &py)).map(|(a, b)| a - b).collect();
                if !self.zero.contains(&diff) {
                    return Err(Error::ScalarAxioms("action is not multiplicative".into()));
                }
            }
        }
        let (ix, iy) = self.action_of(&self.identity);
        let diff: Vec<Int> = self
            .flatten(&ix, &iy)
            .iter()
            .zip(self.flatten(&IntMatrix::identity(s), &IntMatrix::identity(t)))
            .map(|(a, b)| a - b)
            .collect();
        if !self.zero.contains(&diff) {
            return Err(Error::ScalarAxioms("unit does not act as the identity".into()));
        }
        Ok(())
    }
}

fn flatten_pair(x: &IntMatrix, y: &IntMatrix) -> Vec<Int> {
    let mut v: Vec<Int> = x.row_vecs().into_iter().flatten().collect();
    v.extend(y.row_vecs().into_iter().flatten());
    v
}

fn unflatten_pair(v: &[Int], s: usize, t: usize) -> (IntMatrix, IntMatrix) {
    let x = IntMatrix::from_rows(v[..s * s].chunks(s.max(1)).map(|c| c.to_vec()).take(s).collect(), s);
    let y = IntMatrix::from_rows(v[s * s..].chunks(t.max(1)).map(|c| c.to_vec()).take(t).collect(), t);
    (x, y)
}

/// The defining congruences of `P(f)` on unknowns `(X, Y)`.
fn pf_congruences(f: &BilinearMap) -> Congruences {
    let (s, t) = (f.domain_len(), f.codomain_len());
    let nvars = s * s + t * t;
    let xv = |i: usize, j: usize| i * s + j;
    let yv = |i: usize, j: usize| s * s + i * t + j;
    let mut cong = Congruences::new(nvars);
    // Well-definedness: d_i X_ij ≡ 0 (mod d_j), likewise for Y.
    for i in 0..s {
        for j in 0..s {
            let mut row = vec![Int::zero(); nvars];
            row[xv(i, j)] = f.domain_orders[i].clone();
            cong.push(row, f.domain_orders[j].clone());
        }
    }
    for i in 0..t {
        for j in 0..t {
            let mut row = vec![Int::zero(); nvars];
            row[yv(i, j)] = f.codomain_orders[i].clone();
            cong.push(row, f.codomain_orders[j].clone());
        }
    }
    // f(x_a X, x_b) ≡ f(x_a, x_b) Y and f(x_a, x_b X) ≡ f(x_a, x_b) Y.
    for a in 0..s {
        for b in 0..s {
            let fab = f.gen_value(a, b);
            for (k, dk) in f.codomain_orders.iter().enumerate() {
                for left in [true, false] {
                    let mut row = vec![Int::zero(); nvars];
                    for c in 0..s {
                        let v = if left { &f.gen_value(c, b)[k] } else { &f.gen_value(a, c)[k] };
                        let var = if left { xv(a, c) } else { xv(b, c) };
                        row[var] += v;
                    }
                    for (m, fm) in fab.iter().enumerate() {
                        row[yv(m, k)] -= fm;
                    }
                    cong.push(row, dk.clone());
                }
            }
        }
    }
    cong
}

/// Extra congruences cutting `P(A)` out of `P(f_A)`: `π(ψ u) = φ(π u)`.
fn pa_congruences(f: &BilinearMap, cong: &mut Congruences) -> Result<()> {
    let pi = f
        .projection
        .as_ref()
        .ok_or_else(|| Error::ScalarRingUndefined("P(A) needs a map induced by a ring".into()))?;
    let (s, t) = (f.domain_len(), f.codomain_len());
    let nvars = cong.nvars();
    for u in 0..t {
        for (j, dj) in f.domain_orders.iter().enumerate() {
            let mut row = vec![Int::zero(); nvars];
            for v in 0..t {
                row[s * s + u * t + v] += pi.get(v, j);
            }
            for c in 0..s {
                row[c * s + j] -= pi.get(u, c);
            }
            cong.push(row, dj.clone());
        }
    }
    Ok(())
}

fn scalar_ring_from(f: &BilinearMap, cong: Congruences) -> Result<ScalarRingAction> {
    if f.domain().is_trivial() || f.codomain().is_trivial() {
        return Err(Error::ScalarRingUndefined(
            "the bilinear map has trivial domain or codomain (A² = 0 or A = Ann)".into(),
        ));
    }
    if f.is_degenerate() {
        return Err(Error::ScalarAxioms("bilinear map is degenerate".into()));
    }
    let (s, t) = (f.domain_len(), f.codomain_len());
    let solutions = cong.solutions();
    let mut moduli: Vec<Int> = Vec::with_capacity(s * s + t * t);
    for _ in 0..s {
        moduli.extend(f.domain_orders.iter().cloned());
    }
    for _ in 0..t {
        moduli.extend(f.codomain_orders.iter().cloned());
    }
    let zero = Lattice::from_moduli(&moduli);
    if !solutions.contains_lattice(&zero) {
        return Err(Error::Internal("zero endomorphisms fail the defining conditions".into()));
    }
    let basis = solutions.basis().clone();
    let n = basis.rows();
    let coords = |v: &[Int]| -> Result<Vec<Int>> {
        solutions
            .coordinates(v)
            .ok_or_else(|| Error::ScalarAxioms("composition leaves the solution set".into()))
    };
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        let (xa, ya) = unflatten_pair(basis.row(a), s, t);
        for b in 0..n {
            let (xb, yb) = unflatten_pair(basis.row(b), s, t);
            table.push(coords(&flatten_pair(&xa.mul(&xb), &ya.mul(&yb)))?);
        }
    }
    let rel = solutions.relative_basis(&zero).expect("zero pairs are solutions");
    let rel_lat = Lattice::new(n, &rel);
    let pres = Presentation::new(rel_lat.basis(), n);
    let ring = FdzRing::from_presentation(&rel_lat, |a, b| table[a * n + b].clone())?;
    let mut domain_action = Vec::with_capacity(pres.len());
    let mut codomain_action = Vec::with_capacity(pres.len());
    for lift in &pres.lifts {
        let (x, y) = unflatten_pair(&basis.vec_mul(lift), s, t);
        domain_action.push(x);
        codomain_action.push(y);
    }
    let id = flatten_pair(&IntMatrix::identity(s), &IntMatrix::identity(t));
    let identity = ring.reduce(&pres.coords(&coords(&id)?));
    let action = ScalarRingAction { ring, domain_action, codomain_action, identity, solutions, zero, map: f.clone() };
    if !action.ring.is_commutative() {
        return Err(Error::ScalarAxioms("not commutative".into()));
    }
    if !action.ring.is_associative() {
        return Err(Error::ScalarAxioms("not associative".into()));
    }
    if !action.ring.is_identity(&action.identity) {
        return Err(Error::ScalarAxioms("(id, id) is not a unit".into()));
    }
    action.check_axioms()?;
    Ok(action)
}

/// `P(f)`: all endomorphism pairs `(φ, ψ)` with
/// `f(φx, y) = f(x, φy) = ψ f(x, y)`.
pub fn pf_ring(f: &BilinearMap) -> Result<ScalarRingAction> {
    scalar_ring_from(f, pf_congruences(f))
}

/// `P(A)`: the part of `P(f_A)` for which `A² → Â` is linear.
pub fn pa_ring(ring: &FdzRing) -> Result<ScalarRingAction> {
    let f = induced_bilinear_map(ring);
    let mut cong = pf_congruences(&f);
    pa_congruences(&f, &mut cong)?;
    scalar_ring_from(&f, cong)
}

/// The endomorphism pair by which a ring element acts on `Â` and `A²` by
/// left multiplication (meaningful when the ring is commutative and
/// associative).
pub fn multiplication_pair(ring: &FdzRing, f: &BilinearMap, a: &[Int]) -> Option<(IntMatrix, IntMatrix)> {
    let dl = f.domain_lifts()?;
    let cl = f.codomain_lifts()?;
    let x = IntMatrix::from_rows(
        dl.iter().map(|l| f.domain_coords_of(&ring.mul(a, l))).collect::<Option<Vec<_>>>()?,
        f.domain_len(),
    );
    let y = IntMatrix::from_rows(
        cl.iter().map(|l| f.codomain_coords_of(&ring.mul(a, l))).collect::<Option<Vec<_>>>()?,
        f.codomain_len(),
    );
    Some((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, ints};
    use crate::ring::samples::*;
    use crate::ring::{integers, z0_ring};

    /// Every pair of endomorphism matrices of a finite map satisfying the
    /// defining equations, counted up to equality as endomorphisms.
    fn brute_force_pf_size(f: &BilinearMap) -> usize {
        let (s, t) = (f.domain_len(), f.codomain_len());
        let dom = enumerate_group(&f.domain_orders, 4096).unwrap();
        let cod = enumerate_group(&f.codomain_orders, 4096).unwrap();
        let unit = |n: usize, i: usize| {
            let mut v = vec![Int::zero(); n];
            v[i] = Int::one();
            v
        };
        let rows_choices = |elems: &Vec<Vec<Int>>, n: usize| -> Vec<Vec<Vec<Int>>> {
            let mut out = vec![vec![]];
            for _ in 0..n {
                out = out
                    .into_iter()
                    .flat_map(|rows: Vec<Vec<Int>>| {
                        elems.iter().map(move |e| {
                            let mut r = rows.clone();
                            r.push(e.clone());
                            r
                        })
                    })
                    .collect();
            }
            out
        };
        let ok_hom = |rows: &Vec<Vec<Int>>, orders: &[Int], red: &dyn Fn(&[Int]) -> Vec<Int>| {
            rows.iter().zip(orders).all(|(r, d)| red(&r.iter().map(|x| d * x).collect::<Vec<_>>()).iter().all(|x| x.is_zero()))
        };
        let mut count = 0;
        for xr in rows_choices(&dom, s) {
            if !ok_hom(&xr, &f.domain_orders, &|v| f.reduce_domain(v)) {
                continue;
            }
            let x = IntMatrix::from_rows(xr, s);
            for yr in rows_choices(&cod, t) {
                if !ok_hom(&yr, &f.codomain_orders, &|v| f.reduce_codomain(v)) {
                    continue;
                }
                let y = IntMatrix::from_rows(yr, t);
                let good = (0..s).all(|a| {
                    (0..s).all(|b| {
                        let rhs = f.reduce_codomain(&y.vec_mul(f.gen_value(a, b)));
                        f.eval(&x.vec_mul(&unit(s, a)), &unit(s, b)) == rhs
                            && f.eval(&unit(s, a), &x.vec_mul(&unit(s, b))) == rhs
                    })
                });
                if good {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn induced_maps() {
        let f = induced_bilinear_map(&integers());
        assert_eq!((f.domain_orders(), f.codomain_orders()), (&ints(&[0])[..], &ints(&[0])[..]));
        assert_eq!(f.gen_value(0, 0), &ints(&[1])[..]);
        let f = induced_bilinear_map(&z0_ring());
        assert_eq!((f.domain_len(), f.codomain_len()), (0, 0));
        let f = induced_bilinear_map(&w());
        assert_eq!((f.domain_orders(), f.codomain_orders()), (&ints(&[2])[..], &ints(&[2])[..]));
        assert_eq!(f.gen_value(0, 0), &ints(&[1])[..]);
        assert!(!f.is_degenerate());
    }

    #[test]
    fn widths() {
        assert_eq!(induced_bilinear_map(&z0_ring()).width(), Width { exact: Some(0), upper_bound: 0 });
        assert_eq!(induced_bilinear_map(&w()).width(), Width { exact: Some(1), upper_bound: 1 });
        assert_eq!(induced_bilinear_map(&integers()).width(), Width { exact: Some(1), upper_bound: 1 });
        // Z/2 × Z/2 → Z/2 with the standard inner product: every value is a
        // single product.
        let f = BilinearMap::new(ints(&[2, 2]), ints(&[2]), vec![ints(&[1]), ints(&[0]), ints(&[0]), ints(&[1])]).unwrap();
        assert_eq!(f.width(), Width { exact: Some(1), upper_bound: 2 });
    }

    #[test]
    fn complete_systems() {
        let c = induced_bilinear_map(&z0_ring()).complete_system().unwrap();
        assert_eq!(c.size_bound, 0);
        let c = induced_bilinear_map(&integers()).complete_system().unwrap();
        assert_eq!((c.size_bound, c.witness.clone()), (1, vec![ints(&[1])]));
        let c = induced_bilinear_map(&w()).complete_system().unwrap();
        assert_eq!(c.size_bound, 1);
        let degenerate = BilinearMap::new(ints(&[0, 0]), ints(&[0]), vec![ints(&[1]), ints(&[0]), ints(&[0]), ints(&[0])]).unwrap();
        assert_eq!(degenerate.complete_system(), Err(Error::Degenerate));
    }

    #[test]
    fn pf_of_integers() {
        let p = pf_ring(&induced_bilinear_map(&integers())).unwrap();
        assert_eq!(p.ring, integers());
        assert_eq!(p.identity, ints(&[1]));
    }

    #[test]
    fn pf_of_dual_numbers() {
        let zx2 = zx2();
        let f = induced_bilinear_map(&zx2);
        let p = pf_ring(&f).unwrap();
        assert_eq!(p.ring.rank(), 2);
        assert!(p.ring.is_infinite());
        // the ring acts on itself through the scalar ring
        for i in 0..2 {
            let (x, y) = multiplication_pair(&zx2, &f, &zx2.basis_vector(i)).unwrap();
            assert!(p.contains_pair(&x, &y));
        }
        // P(f) ≅ Z[x]/(x²): some nonzero element squares to zero
        let elems = [ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1])];
        assert!(elems.iter().any(|e| p.ring.mul(e, e) == ints(&[0, 0])));
    }

    #[test]
    fn pf_of_w_matches_enumeration() {
        let f = induced_bilinear_map(&w());
        let p = pf_ring(&f).unwrap();
        assert_eq!(p.ring.order(), Some(int(2)));
        assert_eq!(brute_force_pf_size(&f), 2);
        let pa = pa_ring(&w()).unwrap();
        assert_eq!(pa.ring.order(), Some(int(2)));
    }

    #[test]
    fn pf_of_z4_matches_enumeration() {
        let z4 = integers().reduce_mod_n(&int(4));
        let f = induced_bilinear_map(&z4);
        let p = pf_ring(&f).unwrap();
        assert_eq!(p.ring.order(), Some(int(brute_force_pf_size(&f) as i64)));
        assert_eq!(p.ring.order(), Some(int(4)));
    }

    #[test]
    fn pa_inside_pf() {
        for ring in [integers(), zx2(), w(), twoz()] {
            let pf = pf_ring(&induced_bilinear_map(&ring)).unwrap();
            let pa = pa_ring(&ring).unwrap();
            assert!(pf.solutions.contains_lattice(&pa.solutions));
        }
        assert!(matches!(pf_ring(&induced_bilinear_map(&z0_ring())), Err(Error::ScalarRingUndefined(_))));
    }
}
