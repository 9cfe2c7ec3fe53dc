//! Rings of finite rank over `Z` given by structure constants, and their
//! characteristic ideals.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::{complement_within, FgAbelianGroup, Subgroup};
use crate::linalg::{int, reduce_mod, Int, IntMatrix, Lattice, Presentation};

/// `(A, +, ·)` with `A = ⊕ Z/d_i` (`d_i = 0` meaning `Z`) and
/// `e_i · e_j = Σ_k c[i][j][k] e_k`. Neither associativity, commutativity
/// nor a unit is assumed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FdzRing {
    orders: Vec<Int>,
    /// `table[i * r + j]` holds the coordinates of `e_i · e_j`.
    table: Vec<Vec<Int>>,
}

/// Check the well-definedness congruences and reduce the tensor.
pub fn validate_ring(orders: Vec<Int>, tensor: Vec<Vec<Vec<Int>>>) -> Result<FdzRing> {
    let r = orders.len();
    if let Some(d) = orders.iter().find(|d| d.is_negative()) {
        return Err(Error::Shape(format!("negative additive order {d}")));
    }
    if tensor.len() != r || tensor.iter().any(|row| row.len() != r || row.iter().any(|v| v.len() != r)) {
        return Err(Error::Shape(format!("structure tensor must have shape {r}x{r}x{r}")));
    }
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let c = &tensor[i][j][k];
                let ok = |d: &Int| {
                    let v = d * c;
                    if orders[k].is_zero() {
                        v.is_zero()
                    } else {
                        v.is_multiple_of(&orders[k])
                    }
                };
                if !ok(&orders[i]) || !ok(&orders[j]) {
                    return Err(Error::InvalidRing { i: i + 1, j: j + 1, k: k + 1 });
                }
            }
        }
    }
    let table = tensor
        .into_iter()
        .flatten()
        .map(|v| v.iter().zip(&orders).map(|(x, d)| reduce_mod(x, d)).collect())
        .collect();
    Ok(FdzRing { orders, table })
}

impl FdzRing {
    /// Build from a possibly non-diagonal presentation `Z^n / relations`
    /// with a bilinear product given on the old generators. The result is
    /// re-presented on diagonal generators (unit orders dropped).
    pub fn from_presentation(
        relations: &Lattice,
        product: impl Fn(usize, usize) -> Vec<Int>,
    ) -> Result<FdzRing> {
        let n = relations.dim();
        let old: Vec<Vec<Int>> = (0..n * n).map(|ij| product(ij / n, ij % n)).collect();
        let pres = Presentation::new(relations.basis(), n);
        let m = pres.len();
        let mut tensor = vec![vec![vec![Int::zero(); m]; m]; m];
        for a in 0..m {
            for b in 0..m {
                let mut acc = vec![Int::zero(); n];
                for (i, x) in pres.lifts[a].iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in pres.lifts[b].iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        let xy = x * y;
                        for (o, v) in acc.iter_mut().zip(&old[i * n + j]) {
                            *o += &xy * v;
                        }
                    }
                }
                tensor[a][b] = pres.coords(&acc);
            }
        }
        validate_ring(pres.orders.clone(), tensor).map_err(|e| match e {
            Error::InvalidRing { .. } => {
                Error::Internal("product is not well defined on the presented group".into())
            }
            other => other,
        })
    }

    pub fn from_i64(orders: &[i64], products: &[(usize, usize, &[i64])]) -> Result<FdzRing> {
        let r = orders.len();
        let mut tensor = vec![vec![vec![Int::zero(); r]; r]; r];
        for (i, j, v) in products {
            tensor[*i][*j] = v.iter().map(|&x| int(x)).collect();
        }
        validate_ring(orders.iter().map(|&d| int(d)).collect(), tensor)
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[Int] {
        &self.orders
    }

    pub fn additive(&self) -> FgAbelianGroup {
        FgAbelianGroup::from_orders(&self.orders)
    }

    pub fn gen_product(&self, i: usize, j: usize) -> &[Int] {
        &self.table[i * self.rank() + j]
    }

    pub fn tensor(&self) -> Vec<Vec<Vec<Int>>> {
        let r = self.rank();
        (0..r).map(|i| (0..r).map(|j| self.gen_product(i, j).to_vec()).collect()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.orders.iter().all(|d| !d.is_zero())
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    /// Number of elements when finite.
    pub fn order(&self) -> Option<Int> {
        self.is_finite().then(|| self.orders.iter().product())
    }

    pub fn reduce(&self, x: &[Int]) -> Vec<Int> {
        x.iter().zip(&self.orders).map(|(v, d)| reduce_mod(v, d)).collect()
    }

    pub fn zero(&self) -> Vec<Int> {
        vec![Int::zero(); self.rank()]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Int> {
        let mut v = self.zero();
        v[i] = Int::one();
        self.reduce(&v)
    }

    pub fn add(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        self.reduce(&x.iter().zip(y).map(|(a, b)| a + b).collect::<Vec<_>>())
    }

    pub fn neg(&self, x: &[Int]) -> Vec<Int> {
        self.reduce(&x.iter().map(|a| -a).collect::<Vec<_>>())
    }

    pub fn scale(&self, n: &Int, x: &[Int]) -> Vec<Int> {
        self.reduce(&x.iter().map(|a| n * a).collect::<Vec<_>>())
    }

    pub fn mul(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        let r = self.rank();
        let mut out = vec![Int::zero(); r];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (o, v) in out.iter_mut().zip(self.gen_product(i, j)) {
                    if !v.is_zero() {
                        *o += &c * v;
                    }
                }
            }
        }
        self.reduce(&out)
    }

    pub fn is_null(&self) -> bool {
        self.table.iter().all(|v| v.iter().all(|x| x.is_zero()))
    }

    pub fn is_commutative(&self) -> bool {
        let r = self.rank();
        (0..r).all(|i| (0..i).all(|j| self.gen_product(i, j) == self.gen_product(j, i)))
    }

    pub fn is_associative(&self) -> bool {
        let r = self.rank();
        (0..r).all(|i| {
            (0..r).all(|j| {
                (0..r).all(|k| {
                    let e = |t| self.basis_vector(t);
                    self.mul(&self.mul(&e(i), &e(j)), &e(k)) == self.mul(&e(i), &self.mul(&e(j), &e(k)))
                })
            })
        })
    }

    pub fn is_identity(&self, u: &[Int]) -> bool {
        (0..self.rank()).all(|i| {
            let e = self.basis_vector(i);
            self.mul(u, &e) == e && self.mul(&e, u) == e
        })
    }

    /// The two-sided multiplicative identity, if there is one.
    pub fn unit(&self) -> Option<Vec<Int>> {
        let r = self.rank();
        if r == 0 {
            return Some(Vec::new());
        }
        // Unknowns: u (r), then one slack per equation for the modulus.
        let neq = 2 * r * r;
        let nvars = r + neq;
        let mut rows = Vec::with_capacity(neq);
        let mut rhs = Vec::with_capacity(neq);
        for side in 0..2 {
            for j in 0..r {
                for k in 0..r {
                    let eq = side * r * r + j * r + k;
                    let mut row = vec![Int::zero(); nvars];
                    for (i, cell) in row.iter_mut().take(r).enumerate() {
                        let c = if side == 0 { self.gen_product(i, j) } else { self.gen_product(j, i) };
                        *cell = c[k].clone();
                    }
                    row[r + eq] = self.orders[k].clone();
                    rows.push(row);
                    rhs.push(if j == k { Int::one() } else { Int::zero() });
                }
            }
        }
        let sol = crate::linalg::solve(&IntMatrix::from_rows(rows, nvars), &rhs)?;
        let u = self.reduce(&sol.particular[..r]);
        debug_assert!(self.is_identity(&u));
        Some(u)
    }

    /// All elements of a finite ring in lexicographic coordinate order.
    pub fn elements(&self) -> Result<Vec<Vec<Int>>> {
        if !self.is_finite() {
            return Err(Error::InfiniteRing);
        }
        let mut out = vec![Vec::new()];
        for d in &self.orders {
            let d = d.to_usize().ok_or_else(|| Error::CarrierTooLarge { size: d.to_string(), limit: usize::MAX })?;
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
        Ok(out)
    }

    /// Smallest two-sided ideal containing the given generators.
    pub fn ideal_closure(&self, gens: Vec<Vec<Int>>) -> Subgroup {
        let g = self.additive();
        let mut ideal = g.subgroup_from_vecs(gens);
        loop {
            let mut extra = Vec::new();
            for x in ideal.nonzero_generators() {
                for j in 0..self.rank() {
                    let e = self.basis_vector(j);
                    extra.push(self.mul(&x, &e));
                    extra.push(self.mul(&e, &x));
                }
            }
            let next = ideal.sum(&g.subgroup_from_vecs(extra)).expect("same parent");
            if next == ideal {
                return ideal;
            }
            ideal = next;
        }
    }

    pub fn is_ideal(&self, s: &Subgroup) -> bool {
        s.nonzero_generators().iter().all(|x| {
            (0..self.rank()).all(|j| {
                let e = self.basis_vector(j);
                s.contains(&self.mul(x, &e)) && s.contains(&self.mul(&e, x))
            })
        })
    }

    pub fn is_closed_under_product(&self, s: &Subgroup) -> bool {
        let gens = s.nonzero_generators();
        gens.iter().all(|x| gens.iter().all(|y| s.contains(&self.mul(x, y))))
    }

    pub fn annihilator(&self) -> Subgroup {
        let r = self.rank();
        // x ↦ (x·e_j, e_j·x)_j as a map Z^r → Z^{2r·r}.
        let width = 2 * r * r;
        let mut map = IntMatrix::zeros(r, width);
        let mut moduli = Vec::with_capacity(width);
        for side in 0..2 {
            for j in 0..r {
                for k in 0..r {
                    moduli.push(self.orders[k].clone());
                    let col = side * r * r + j * r + k;
                    for i in 0..r {
                        let c = if side == 0 { &self.gen_product(i, j)[k] } else { &self.gen_product(j, i)[k] };
                        map.set(i, col, c.clone());
                    }
                }
            }
        }
        let lattice = Lattice::preimage(&map, &Lattice::from_moduli(&moduli));
        Subgroup::from_lattice(&self.additive(), lattice)
    }

    /// `A²`, the ideal generated by all products.
    pub fn square(&self) -> Subgroup {
        let r = self.rank();
        let prods = (0..r * r).map(|ij| self.table[ij].clone()).collect();
        self.ideal_closure(prods)
    }

    pub fn characteristic_ideals(&self) -> IdealChain {
        let a = self.additive();
        let ann = self.annihilator();
        let sq = self.square();
        let delta = sq.saturation();
        let k_ideal = ann.sum(&delta).expect("same parent");
        let l_ideal = ann.sum(&sq).expect("same parent").saturation();
        let o_ideal = ann.intersect(&delta).expect("same parent");
        let m_quot = subquotient(&a.whole(), &l_ideal);
        let n_quot = subquotient(&l_ideal, &k_ideal);
        IdealChain { ann, sq, delta, k_ideal, l_ideal, o_ideal, m_quot, n_quot }
    }

    pub fn predicates(&self) -> Predicates {
        self.characteristic_ideals().predicates()
    }

    /// `A / I` for an ideal `I`.
    pub fn quotient_ring(&self, ideal: &Subgroup) -> Result<FdzRing> {
        FdzRing::from_presentation(ideal.lattice(), |i, j| self.gen_product(i, j).to_vec())
    }

    /// A subgroup closed under multiplication, as a ring in its own right.
    /// Returns the ring and the ambient coordinates of its generators.
    pub fn subring(&self, s: &Subgroup) -> Result<(FdzRing, Vec<Vec<Int>>)> {
        let basis = s.lattice().basis().clone();
        let rel = s.lattice().relative_basis(self.additive().relations()).expect("relations inside");
        let k = basis.rows();
        let coords = |v: &[Int]| -> Result<Vec<Int>> {
            s.lattice()
                .coordinates(v)
                .ok_or_else(|| Error::Internal("subgroup is not closed under multiplication".into()))
        };
        let mut table = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                table.push(coords(&self.mul(basis.row(a), basis.row(b)))?);
            }
        }
        let rel_lat = Lattice::new(k, &rel);
        let pres = Presentation::new(rel_lat.basis(), k);
        let ring = FdzRing::from_presentation(&rel_lat, |a, b| table[a * k + b].clone())?;
        let gens = pres.lifts.iter().map(|l| self.reduce(&basis.vec_mul(l))).collect();
        Ok((ring, gens))
    }

    pub fn addition_and_foundation(&self) -> AdditionFoundation {
        let chain = self.characteristic_ideals();
        let a = self.additive();
        let relations = a.relations().clone();
        let addition = complement_within(chain.ann.lattice(), chain.o_ideal.lattice(), &relations)
            .map(|l| Subgroup::from_lattice(&a, l));
        let foundation = match &addition {
            None => None,
            Some(a0) => {
                let inner = a0.sum(&chain.delta).expect("same parent");
                match complement_within(&Lattice::full(self.rank()), inner.lattice(), chain.delta.lattice()) {
                    Some(c) => Some(Foundation::Subring(Subgroup::from_lattice(&a, c))),
                    None => Some(Foundation::Quotient(
                        self.quotient_ring(a0).expect("quotient by an ideal is a ring"),
                    )),
                }
            }
        };
        AdditionFoundation { addition, foundation }
    }

    /// Free generators first, then torsion generators in invariant-factor
    /// form, with the five constant families of the generator products.
    pub fn normal_presentation(&self) -> NormalPresentation {
        // Orders are diagonal already: free generators are the infinite-order
        // basis vectors, and only the torsion block needs normalizing.
        let free: Vec<usize> = (0..self.rank()).filter(|&i| self.orders[i].is_zero()).collect();
        let tors: Vec<usize> = (0..self.rank()).filter(|&i| !self.orders[i].is_zero()).collect();
        let tors_orders: Vec<Int> = tors.iter().map(|&i| self.orders[i].clone()).collect();
        let pres = Presentation::new(Lattice::from_moduli(&tors_orders).basis(), tors.len());
        let free_rank = free.len();
        let mut gens: Vec<Vec<Int>> = free.iter().map(|&i| self.basis_vector(i)).collect();
        for lift in &pres.lifts {
            let mut v = self.zero();
            for (&i, x) in tors.iter().zip(lift) {
                v[i] = x.clone();
            }
            gens.push(self.reduce(&v));
        }
        let mut orders = vec![Int::zero(); free_rank];
        orders.extend(pres.orders.iter().cloned());
        let coords = |v: &[Int]| -> Vec<Int> {
            let mut c: Vec<Int> = free.iter().map(|&i| v[i].clone()).collect();
            let t: Vec<Int> = tors.iter().map(|&i| v[i].clone()).collect();
            c.extend(pres.coords(&t));
            c
        };
        let l = free_rank;
        let m = orders.len() - l;
        let prod = |a: usize, b: usize| coords(&self.mul(&gens[a], &gens[b]));
        let block = |rows: std::ops::Range<usize>, cols: std::ops::Range<usize>, part: std::ops::Range<usize>, swap: bool| {
            rows.clone()
                .map(|i| {
                    cols.clone()
                        .map(|j| {
                            let p = if swap { prod(j, i) } else { prod(i, j) };
                            p[part.clone()].to_vec()
                        })
                        .collect()
                })
                .collect()
        };
        NormalPresentation {
            free_rank: l,
            torsion_orders: orders[l..].to_vec(),
            free_gens: gens[..l].to_vec(),
            torsion_gens: gens[l..].to_vec(),
            c: block(0..l, 0..l, 0..l, false),
            t: block(0..l, 0..l, l..l + m, false),
            s: block(0..l, l..l + m, l..l + m, false),
            u: block(0..l, l..l + m, l..l + m, true),
            v: block(l..l + m, l..l + m, l..l + m, false),
        }
    }

    /// The ring with additive group in invariant-factor form (torsion first,
    /// then free), isomorphic to `self`.
    pub fn canonicalized(&self) -> FdzRing {
        self.canonical_form().ring
    }

    /// Invariant-factor re-presentation together with the coordinate change.
    pub fn canonical_form(&self) -> CanonicalForm {
        let pres = Presentation::new(self.additive().relations().basis(), self.rank());
        let ring = FdzRing::from_presentation(self.additive().relations(), |i, j| self.gen_product(i, j).to_vec())
            .expect("re-presenting a valid ring");
        CanonicalForm { ring, pres }
    }

    /// `A / nA`.
    pub fn reduce_mod_n(&self, n: &Int) -> FdzRing {
        assert!(n.is_positive(), "modulus must be positive");
        let orders: Vec<Int> =
            self.orders.iter().map(|d| if d.is_zero() { n.clone() } else { d.gcd(n) }).collect();
        let tensor = self.tensor();
        let tensor = tensor
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| v.iter().zip(&orders).map(|(x, d)| reduce_mod(x, d)).collect())
                    .collect()
            })
            .collect();
        // Congruences carry over because every new order divides the old one.
        let ring = validate_ring(orders, tensor).expect("quotient of a valid ring");
        let keep: Vec<usize> = (0..ring.rank()).filter(|&i| !ring.orders[i].is_one()).collect();
        ring.restrict_coords(&keep)
    }

    /// Drop coordinates whose order is 1 (they carry no information).
    fn restrict_coords(&self, keep: &[usize]) -> FdzRing {
        let orders = keep.iter().map(|&i| self.orders[i].clone()).collect();
        let tensor = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .map(|&j| keep.iter().map(|&k| self.gen_product(i, j)[k].clone()).collect())
                    .collect()
            })
            .collect();
        validate_ring(orders, tensor).expect("restriction of a valid ring")
    }

    pub fn direct_product(&self, other: &FdzRing) -> FdzRing {
        let (r, s) = (self.rank(), other.rank());
        let n = r + s;
        let mut tensor = vec![vec![vec![Int::zero(); n]; n]; n];
        for i in 0..r {
            for j in 0..r {
                tensor[i][j][..r].clone_from_slice(self.gen_product(i, j));
            }
        }
        for i in 0..s {
            for j in 0..s {
                tensor[r + i][r + j][r..].clone_from_slice(other.gen_product(i, j));
            }
        }
        let mut orders = self.orders.clone();
        orders.extend(other.orders.iter().cloned());
        validate_ring(orders, tensor).expect("product of valid rings")
    }

    /// Transport along an additive base change: row `i` of `u` gives the
    /// new `i`-th generator in old coordinates. `u` must be invertible over
    /// the integers modulo the relations; the result is re-presented.
    pub fn transport(&self, u: &IntMatrix) -> Result<FdzRing> {
        let r = self.rank();
        if u.rows() != r || u.cols() != r {
            return Err(Error::Dimension("base change must be square of the ring's rank".into()));
        }
        let inv = crate::linalg::unimodular_inverse(u)
            .ok_or_else(|| Error::MalformedMap("base change is not unimodular".into()))?;
        // New coordinates y satisfy x = y·u, so relations map by u⁻¹.
        let rel = self.additive().relations().image(&inv);
        FdzRing::from_presentation(&rel, |i, j| inv.vec_mul(&self.mul(u.row(i), u.row(j))))
    }
}

/// A ring re-presented on invariant-factor generators.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub ring: FdzRing,
    pres: Presentation,
}

impl CanonicalForm {
    /// Canonical coordinates of an element given in original coordinates.
    pub fn to_canonical(&self, x: &[Int]) -> Vec<Int> {
        self.pres.coords(x)
    }

    /// Original coordinates (unreduced) of a canonical-coordinate element.
    pub fn to_original(&self, y: &[Int]) -> Vec<Int> {
        self.pres.lift(y)
    }
}

pub fn z0_ring() -> FdzRing {
    FdzRing::from_i64(&[0], &[]).expect("null ring is valid")
}

pub fn integers() -> FdzRing {
    FdzRing::from_i64(&[0], &[(0, 0, &[1])]).expect("Z is valid")
}

pub fn direct_product(a: &FdzRing, b: &FdzRing) -> FdzRing {
    a.direct_product(b)
}

pub fn reduce_mod_n(a: &FdzRing, n: &Int) -> FdzRing {
    a.reduce_mod_n(n)
}

/// `upper / lower` as an abstract group.
pub fn subquotient(upper: &Subgroup, lower: &Subgroup) -> FgAbelianGroup {
    let rel = upper.lattice().relative_basis(lower.lattice()).expect("lower ⊆ upper");
    FgAbelianGroup::new(upper.lattice().rank(), &rel)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealChain {
    pub ann: Subgroup,
    pub sq: Subgroup,
    pub delta: Subgroup,
    pub k_ideal: Subgroup,
    pub l_ideal: Subgroup,
    pub o_ideal: Subgroup,
    pub m_quot: FgAbelianGroup,
    pub n_quot: FgAbelianGroup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Predicates {
    pub tame: bool,
    pub regular: bool,
}

impl IdealChain {
    pub fn predicates(&self) -> Predicates {
        Predicates {
            tame: self.ann.is_subgroup_of(&self.delta),
            regular: self.k_ideal == self.l_ideal,
        }
    }

    /// `A = Δ(A)`.
    pub fn delta_is_whole(&self) -> bool {
        self.delta.is_whole()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Foundation {
    Subring(Subgroup),
    Quotient(FdzRing),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditionFoundation {
    pub addition: Option<Subgroup>,
    pub foundation: Option<Foundation>,
}

/// Generators `a_1..a_l` (free) and `b_1..b_m` (torsion, orders
/// `d_1 | … | d_m`) with
/// `a_i a_j = Σ c_ijk a_k + Σ t_ijk b_k`, `a_i b_j = Σ s_ijk b_k`,
/// `b_j a_i = Σ u_ijk b_k`, `b_i b_j = Σ v_ijk b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalPresentation {
    pub free_rank: usize,
    pub torsion_orders: Vec<Int>,
    pub free_gens: Vec<Vec<Int>>,
    pub torsion_gens: Vec<Vec<Int>>,
    pub c: Vec<Vec<Vec<Int>>>,
    pub t: Vec<Vec<Vec<Int>>>,
    pub s: Vec<Vec<Vec<Int>>>,
    pub u: Vec<Vec<Vec<Int>>>,
    pub v: Vec<Vec<Vec<Int>>>,
}

#[cfg(test)]
pub(crate) mod samples {
    use super::*;

    pub fn w() -> FdzRing {
        FdzRing::from_i64(&[0, 0, 2], &[(0, 0, &[0, 0, 1])]).unwrap()
    }

    pub fn twoz() -> FdzRing {
        FdzRing::from_i64(&[0], &[(0, 0, &[2])]).unwrap()
    }

    pub fn zx2() -> FdzRing {
        FdzRing::from_i64(&[0, 0], &[(0, 0, &[1, 0]), (0, 1, &[0, 1]), (1, 0, &[0, 1])]).unwrap()
    }
}
