//! Finitely generated abelian groups `Z^r / L` and their subgroups.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    invariant_factors_of_relations, solve, Int, IntMatrix, Lattice, Presentation,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    rank: usize,
    relations: Lattice,
}

impl FgAbelianGroup {
    pub fn new(rank: usize, relations: &IntMatrix) -> Self {
        FgAbelianGroup { rank, relations: Lattice::new(rank, relations) }
    }

    pub fn from_lattice(relations: Lattice) -> Self {
        FgAbelianGroup { rank: relations.dim(), relations }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { rank, relations: Lattice::zero(rank) }
    }

    /// `⊕ Z/d_i`, with `d_i = 0` meaning a copy of `Z`.
    pub fn from_orders(orders: &[Int]) -> Self {
        FgAbelianGroup { rank: orders.len(), relations: Lattice::from_moduli(orders) }
    }

    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &Lattice {
        &self.relations
    }

    pub fn invariant_factors(&self) -> Vec<Int> {
        invariant_factors_of_relations(self.relations.basis(), self.rank)
    }

    pub fn free_rank(&self) -> usize {
        self.rank - self.relations.rank()
    }

    pub fn is_finite(&self) -> bool {
        self.relations.is_full_rank()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors().is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.invariant_factors().iter().all(|d| d.is_zero())
    }

    /// Order of the group when finite.
    pub fn order(&self) -> Option<Int> {
        Lattice::full(self.rank).index_of(&self.relations)
    }

    pub fn equal(&self, x: &[Int], y: &[Int]) -> bool {
        let diff: Vec<Int> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.relations.contains(&diff)
    }

    pub fn is_zero(&self, x: &[Int]) -> bool {
        self.relations.contains(x)
    }

    /// Canonical representative of the class of `x`.
    pub fn reduce(&self, x: &[Int]) -> Vec<Int> {
        self.relations.reduce(x)
    }

    /// Diagonal re-presentation of the group.
    pub fn presentation(&self) -> Presentation {
        Presentation::new(self.relations.basis(), self.rank)
    }

    /// Order of the element `x` (0 if infinite).
    pub fn element_order(&self, x: &[Int]) -> Int {
        let p = self.presentation();
        let c = p.coords(x);
        let mut ord = Int::one();
        for (ci, d) in c.iter().zip(&p.orders) {
            if ci.is_zero() {
                continue;
            }
            if d.is_zero() {
                return Int::zero();
            }
            let g = num_integer::Integer::gcd(ci, d);
            ord = num_integer::Integer::lcm(&ord, &(d / g));
        }
        ord
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { parent: self.clone(), lattice: Lattice::full(self.rank) }
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup { parent: self.clone(), lattice: self.relations.clone() }
    }

    pub fn subgroup(&self, generators: &IntMatrix) -> Subgroup {
        Subgroup::new(self, generators)
    }

    pub fn subgroup_from_vecs(&self, generators: Vec<Vec<Int>>) -> Subgroup {
        Subgroup::new(self, &IntMatrix::from_rows(generators, self.rank))
    }
}

/// Subgroup `(span(generators) + L) / L`, stored by the Hermite basis of its
/// full preimage in `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    parent: FgAbelianGroup,
    lattice: Lattice,
}

impl Subgroup {
    pub fn new(parent: &FgAbelianGroup, generators: &IntMatrix) -> Self {
        let lattice = Lattice::new(parent.rank, generators).sum(&parent.relations);
        Subgroup { parent: parent.clone(), lattice }
    }

    /// Wrap a lattice already containing the relations.
    pub fn from_lattice(parent: &FgAbelianGroup, lattice: Lattice) -> Self {
        let lattice = lattice.sum(&parent.relations);
        Subgroup { parent: parent.clone(), lattice }
    }

    pub fn parent(&self) -> &FgAbelianGroup {
        &self.parent
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Canonical generators (Hermite basis of the preimage lattice).
    pub fn generators(&self) -> &IntMatrix {
        self.lattice.basis()
    }

    /// Generators that are nonzero in the parent group.
    pub fn nonzero_generators(&self) -> Vec<Vec<Int>> {
        self.generators()
            .row_vecs()
            .into_iter()
            .filter(|g| !self.parent.is_zero(g))
            .collect()
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.lattice.contains(x)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        other.lattice.contains_lattice(&self.lattice)
    }

    pub fn is_whole(&self) -> bool {
        self.lattice.is_full_rank() && self.lattice == Lattice::full(self.parent.rank)
    }

    pub fn is_trivial(&self) -> bool {
        self.lattice == self.parent.relations
    }

    /// The subgroup as an abstract group.
    pub fn as_group(&self) -> FgAbelianGroup {
        let rel = self
            .lattice
            .relative_basis(&self.parent.relations)
            .expect("relations lie in every subgroup");
        FgAbelianGroup::new(self.lattice.rank(), &rel)
    }

    pub fn invariant_factors(&self) -> Vec<Int> {
        self.lattice.quotient_invariants(&self.parent.relations)
    }

    pub fn is_finite(&self) -> bool {
        self.invariant_factors().iter().all(|d| !d.is_zero())
    }

    /// Index in the parent, when finite.
    pub fn index(&self) -> Option<Int> {
        Lattice::full(self.parent.rank).index_of(&self.lattice)
    }

    fn same_parent(&self, other: &Subgroup) -> Result<()> {
        if self.parent == other.parent {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    pub fn sum(&self, other: &Subgroup) -> Result<Subgroup> {
        self.same_parent(other)?;
        Ok(Subgroup { parent: self.parent.clone(), lattice: self.lattice.sum(&other.lattice) })
    }

    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup> {
        self.same_parent(other)?;
        Ok(Subgroup { parent: self.parent.clone(), lattice: self.lattice.intersect(&other.lattice) })
    }

    /// `{x : n·x ∈ S for some n ≥ 1}`.
    pub fn saturation(&self) -> Subgroup {
        Subgroup { parent: self.parent.clone(), lattice: self.lattice.saturate() }
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation() == *self
    }

    /// Invariant factors of `self / sub`.
    pub fn quotient_invariants(&self, sub: &Subgroup) -> Vec<Int> {
        self.lattice.quotient_invariants(&sub.lattice)
    }

    /// A complement `C` with `G = S ⊕ C`, if `S` is a direct summand.
    pub fn split_complement(&self) -> Option<Subgroup> {
        complement_within(&Lattice::full(self.parent.rank), &self.lattice, &self.parent.relations)
            .map(|lattice| Subgroup { parent: self.parent.clone(), lattice })
    }
}

pub fn subgroup_sum(s: &Subgroup, t: &Subgroup) -> Result<Subgroup> {
    s.sum(t)
}

pub fn subgroup_intersect(s: &Subgroup, t: &Subgroup) -> Result<Subgroup> {
    s.intersect(t)
}

pub fn saturation(s: &Subgroup) -> Subgroup {
    s.saturation()
}

pub fn quotient_group(g: &FgAbelianGroup, s: &Subgroup) -> FgAbelianGroup {
    FgAbelianGroup::from_lattice(s.lattice.sum(&g.relations))
}

pub fn split_complement(g: &FgAbelianGroup, s: &Subgroup) -> Option<Subgroup> {
    debug_assert_eq!(g, &s.parent);
    s.split_complement()
}

/// For lattices `base ⊆ inner ⊆ outer`, find `C` with `base ⊆ C ⊆ outer`,
/// `C + inner = outer` and `C ∩ inner = base`, by solving for a projection
/// `outer/base → inner/base` that fixes `inner/base`.
pub fn complement_within(outer: &Lattice, inner: &Lattice, base: &Lattice) -> Option<Lattice> {
    let u = outer.rank();
    // Work in coordinates of `outer`.
    let s = outer.relative_basis(inner)?;
    let b = outer.relative_basis(base)?;
    let s_lat = Lattice::new(u, &s);
    let b_lat = Lattice::new(u, &b);
    let k = s_lat.rank();
    let r_in_s = s_lat.relative_basis(&b_lat)?;
    let r_lat = Lattice::new(k, &r_in_s);
    let m = r_lat.rank();
    let s_basis = s_lat.basis().clone();

    // Unknowns: A (u×k, row-major) then one λ-block of length m per condition.
    // Conditions: ρ·A ∈ R' for basis rows ρ of the base, and s_j·A − e_j ∈ R'.
    let conditions: Vec<(Vec<Int>, Option<usize>)> = b_lat
        .basis()
        .row_vecs()
        .into_iter()
        .map(|r| (r, None))
        .chain(s_basis.row_vecs().into_iter().enumerate().map(|(j, r)| (r, Some(j))))
        .collect();
    let nconds = conditions.len();
    let nvars = u * k + nconds * m;
    let mut rows = Vec::with_capacity(nconds * k);
    let mut rhs = Vec::with_capacity(nconds * k);
    for (c, (vec, target)) in conditions.iter().enumerate() {
        for col in 0..k {
            let mut row = vec![Int::zero(); nvars];
            for (i, vi) in vec.iter().enumerate() {
                row[i * k + col] = vi.clone();
            }
            for l in 0..m {
                row[u * k + c * m + l] = -r_lat.basis().get(l, col).clone();
            }
            rows.push(row);
            rhs.push(if *target == Some(col) { Int::one() } else { Int::zero() });
        }
    }
    let a_mat = if rows.is_empty() {
        IntMatrix::zeros(u, k)
    } else {
        let sol = solve(&IntMatrix::from_rows(rows, nvars), &rhs)?;
        IntMatrix::from_rows(
            (0..u).map(|i| sol.particular[i * k..(i + 1) * k].to_vec()).collect(),
            k,
        )
    };
    let p = a_mat.mul(&s_basis);
    let mut complement = IntMatrix::identity(u);
    for i in 0..u {
        for j in 0..u {
            let v = complement.get(i, j) - p.get(i, j);
            complement.set(i, j, v);
        }
    }
    let c_coords = Lattice::new(u, &complement).sum(&b_lat);
    Some(c_coords.image(outer.basis()))
}
