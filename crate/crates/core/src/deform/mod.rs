//! Abelian deformations of an FDZ-ring over the integers: the additive
//! extension of `A/K` by `K` is twisted by a symmetric cocycle on `N` with
//! values in `Ann(A)`, and the product is pulled back through `A/Ann`.

pub mod cocycle;
pub mod sixterm;

pub use cocycle::{build_group_extension, cyclic_cocycle, CocycleAnalysis, CocycleForm, GroupExtension, SymmetricCocycle};
pub use sixterm::{verify_sixterm, SixTermMaps, SixTermReport};

use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::linalg::{smith, Int, IntMatrix, Lattice, Presentation};
use crate::ring::FdzRing;

pub const DEFAULT_SIDE_CONDITION_BOUND: u32 = 16;

/// Value of `g` on one cyclic factor `Z/e` of `N`, in base coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicComponent {
    pub order: Int,
    pub value: Vec<Int>,
}

#[derive(Clone, Debug)]
pub struct DeformationSpec {
    pub base: FdzRing,
    pub g: Vec<CyclicComponent>,
    pub side_condition_bound: u32,
}

impl DeformationSpec {
    pub fn new(base: FdzRing, g: Vec<CyclicComponent>) -> Self {
        DeformationSpec { base, g, side_condition_bound: DEFAULT_SIDE_CONDITION_BOUND }
    }

    pub fn trivial(base: FdzRing) -> Self {
        Self::new(base, Vec::new())
    }
}

/// Cyclic decomposition of `N = L/K`: orders `e_1 | … | e_m` and lifts
/// `a_i ∈ L` in base coordinates, alongside the basis adapted to `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NDecomposition {
    pub orders: Vec<Int>,
    pub lifts: Vec<Vec<Int>>,
    /// Positions of the `N` factors among the adapted basis.
    positions: Vec<usize>,
    /// Rows `w_j` with `K̃ = ⊕ δ_j w_j`.
    adapted: IntMatrix,
    steps: Vec<Int>,
}

pub fn n_decomposition(a: &FdzRing) -> NDecomposition {
    let chain = a.characteristic_ideals();
    let k = chain.k_ideal.lattice();
    let s = smith(k.basis());
    let r = a.rank();
    let diag = s.diagonal();
    let steps: Vec<Int> = (0..r).map(|j| diag.get(j).cloned().unwrap_or_else(Int::zero)).collect();
    let positions: Vec<usize> = (0..r).filter(|&j| steps[j] > Int::one()).collect();
    NDecomposition {
        orders: positions.iter().map(|&j| steps[j].clone()).collect(),
        lifts: positions.iter().map(|&j| a.reduce(s.v_inv.row(j))).collect(),
        positions,
        adapted: s.v_inv.clone(),
        steps,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideCondition {
    pub bound: u32,
    /// Smallest modulus at which independence fails (0 when some `e_i b_i`
    /// falls outside `K(B)`).
    pub failing_modulus: Option<u32>,
}

impl SideCondition {
    pub fn holds(&self) -> bool {
        self.failing_modulus.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct Deformation {
    pub ring: FdzRing,
    pub addition_rank: usize,
    /// `g` on `N` with values in `Ann(A)`, in the coordinates of `Ann(A)`.
    pub cocycle: SymmetricCocycle,
    /// Row `k`: image in the base (modulo `Ann(A)`) of the `k`-th generator.
    pub to_base: IntMatrix,
    /// The copy of `Ann(A)` inside the deformed ring.
    pub embedded_annihilator: Subgroup,
    /// Lifts `b_i` of the `N` generators in the deformed ring.
    pub n_lifts: Vec<Vec<Int>>,
    pub side_condition: SideCondition,
}

/// Assign the requested cyclic values to the factors of `N`, matching by
/// order in sequence.
fn assign_components(n: &NDecomposition, g: &[CyclicComponent], rank: usize) -> Result<Vec<Vec<Int>>> {
    let mut values = vec![vec![Int::zero(); rank]; n.orders.len()];
    let mut used = vec![false; n.orders.len()];
    for comp in g {
        if comp.value.len() != rank {
            return Err(Error::Dimension(format!(
                "cocycle value has length {}, ring has rank {rank}",
                comp.value.len()
            )));
        }
        let slot = (0..n.orders.len())
            .find(|&i| !used[i] && n.orders[i] == comp.order)
            .ok_or_else(|| Error::ClassConstraint(format!("N has no free cyclic factor of order {}", comp.order)))?;
        used[slot] = true;
        values[slot] = comp.value.clone();
    }
    Ok(values)
}

pub fn build_deformation(spec: &DeformationSpec) -> Result<Deformation> {
    let a = &spec.base;
    let r = a.rank();
    let chain = a.characteristic_ideals();
    let ann = &chain.ann;
    let k_lat = chain.k_ideal.lattice();
    let s = k_lat.rank();
    let ndec = n_decomposition(a);
    let values = assign_components(&ndec, &spec.g, r)?;

    let ann_group = ann.as_group();
    let mut ann_coords = Vec::with_capacity(values.len());
    for v in &values {
        let c = ann
            .lattice()
            .coordinates(v)
            .ok_or_else(|| Error::ClassConstraint("cocycle value lies outside Ann".into()))?;
        ann_coords.push(c);
    }
    let cocycle = SymmetricCocycle::cyclic(ndec.orders.clone(), &ann_group, ann_coords)?;
    let analysis = cocycle.analyze()?;
    if !analysis.is_cocycle {
        return Err(Error::InvalidCocycle("g fails the cocycle identity".into()));
    }

    let in_k = |v: &[Int]| -> Vec<Int> { k_lat.coordinates(v).expect("element of K") };
    let total = r + s;
    let mut rows = Vec::new();
    for rel in a.additive().relations().basis().row_vecs() {
        let mut row = vec![Int::zero(); r];
        row.extend(in_k(&rel));
        rows.push(row);
    }
    for j in 0..r {
        let step = &ndec.steps[j];
        if step.is_zero() {
            continue;
        }
        let mut target: Vec<Int> = ndec.adapted.row(j).iter().map(|x| x * step).collect();
        if let Some(slot) = ndec.positions.iter().position(|&p| p == j) {
            for (t, v) in target.iter_mut().zip(&values[slot]) {
                *t += v;
            }
        }
        let mut row = vec![Int::zero(); total];
        row[j] = step.clone();
        for (i, c) in in_k(&target).into_iter().enumerate() {
            row[r + i] = -c;
        }
        rows.push(row);
    }
    let relations = Lattice::from_vecs(total, rows);

    // Generator images in the base: u_j ↦ w_j, κ_i ↦ i-th basis vector of K̃.
    let base_image = |x: &[Int]| -> Vec<Int> {
        let mut out = vec![Int::zero(); r];
        for (j, c) in x[..r].iter().enumerate() {
            for (o, w) in out.iter_mut().zip(ndec.adapted.row(j)) {
                *o += c * w;
            }
        }
        for (i, c) in x[r..].iter().enumerate() {
            for (o, w) in out.iter_mut().zip(k_lat.basis().row(i)) {
                *o += c * w;
            }
        }
        a.reduce(&out)
    };
    let unit = |i: usize| {
        let mut v = vec![Int::zero(); total];
        v[i] = Int::one();
        v
    };
    let images: Vec<Vec<Int>> = (0..total).map(|i| base_image(&unit(i))).collect();
    let embed_k = |v: &[Int]| -> Vec<Int> {
        let mut out = vec![Int::zero(); r];
        out.extend(in_k(v));
        out
    };
    let ring = FdzRing::from_presentation(&relations, |i, j| embed_k(&a.mul(&images[i], &images[j])))?;
    let pres = Presentation::new(relations.basis(), total);

    let to_base = IntMatrix::from_rows(pres.lifts.iter().map(|l| base_image(l)).collect(), r);
    let embedded_annihilator = ring
        .additive()
        .subgroup_from_vecs(ann.nonzero_generators().iter().map(|g| pres.coords(&embed_k(g))).collect());
    let n_lifts: Vec<Vec<Int>> = ndec.positions.iter().map(|&j| pres.coords(&unit(j))).collect();
    let side_condition = side_condition(&ring, &n_lifts, &ndec.orders, spec.side_condition_bound);
    let addition_rank = ann.lattice().rank() - chain.o_ideal.lattice().rank();
    Ok(Deformation { ring, addition_rank, cocycle, to_base, embedded_annihilator, n_lifts, side_condition })
}

/// Independence of the images of `e_i b_i` in `Q/dQ`, `Q = K(B)/Δ(B)`, for
/// `2 ≤ d ≤ bound`.
pub fn side_condition(b: &FdzRing, lifts: &[Vec<Int>], orders: &[Int], bound: u32) -> SideCondition {
    let chain = b.characteristic_ideals();
    let k = chain.k_ideal.lattice();
    let delta = chain.delta.lattice();
    let vs: Vec<Vec<Int>> = lifts.iter().zip(orders).map(|(x, e)| b.scale(e, x)).collect();
    if vs.iter().any(|v| !k.contains(v)) {
        return SideCondition { bound, failing_modulus: Some(0) };
    }
    let m = vs.len() as u32;
    let failing = (2..=bound).find(|&d| {
        let d_int = Int::from(d);
        let dk: Vec<Vec<Int>> = k.basis().row_vecs().into_iter().map(|row| row.iter().map(|x| x * &d_int).collect()).collect();
        let lower = delta.add_vecs(&dk);
        let upper = lower.add_vecs(&vs);
        upper.index_of(&lower) != Some(d_int.pow(m))
    });
    SideCondition { bound, failing_modulus: failing }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqcheck::{invariant_profile, iso_search, IsoOutcome, SearchLimits};
    use crate::linalg::{int, ints};
    use crate::ring::samples::*;
    use crate::ring::{integers, z0_ring};

    fn isomorphic(a: &FdzRing, b: &FdzRing) -> bool {
        matches!(iso_search(a, b, SearchLimits::with_bound(5)), IsoOutcome::Yes(_))
    }

    #[test]
    fn n_of_w() {
        let n = n_decomposition(&w());
        assert_eq!(n.orders, ints(&[2]));
        assert_eq!(n.lifts.len(), 1);
        let chain = w().characteristic_ideals();
        assert!(chain.l_ideal.contains(&n.lifts[0]) && !chain.k_ideal.contains(&n.lifts[0]));
    }

    #[test]
    fn trivial_deformations_are_isomorphic() {
        for base in [integers(), twoz(), z0_ring(), w(), zx2(), z0_ring().direct_product(&integers())] {
            let d = build_deformation(&DeformationSpec::trivial(base.clone())).unwrap();
            assert!(isomorphic(&base, &d.ring), "{base:?}");
            assert!(d.side_condition.holds());
        }
    }

    #[test]
    fn w_deformations() {
        for value in [ints(&[0, 1, 0]), ints(&[0, 0, 1]), ints(&[0, 3, 1])] {
            let spec = DeformationSpec::new(w(), vec![CyclicComponent { order: int(2), value }]);
            let d = build_deformation(&spec).unwrap();
            assert_eq!(invariant_profile(&d.ring), invariant_profile(&w()));
            let ann = d.ring.annihilator();
            assert!(d.embedded_annihilator.is_subgroup_of(&ann));
            assert!(d.side_condition.holds());
            assert_eq!(d.addition_rank, 2);
        }
    }

    #[test]
    fn class_constraint_is_enforced() {
        let outside = DeformationSpec::new(w(), vec![CyclicComponent { order: int(2), value: ints(&[1, 0, 0]) }]);
        assert!(matches!(build_deformation(&outside), Err(Error::ClassConstraint(_))));
        let wrong_order = DeformationSpec::new(w(), vec![CyclicComponent { order: int(3), value: ints(&[0, 1, 0]) }]);
        assert!(matches!(build_deformation(&wrong_order), Err(Error::ClassConstraint(_))));
    }

    #[test]
    fn deformation_product_factors_through_base() {
        let spec = DeformationSpec::new(w(), vec![CyclicComponent { order: int(2), value: ints(&[0, 1, 0]) }]);
        let d = build_deformation(&spec).unwrap();
        let a = w();
        let ann = a.annihilator();
        for i in 0..d.ring.rank() {
            for j in 0..d.ring.rank() {
                let down = d.to_base.vec_mul(d.ring.gen_product(i, j));
                let prod = a.mul(d.to_base.row(i), d.to_base.row(j));
                let diff: Vec<Int> = down.iter().zip(&prod).map(|(x, y)| x - y).collect();
                assert!(ann.contains(&a.reduce(&diff)));
            }
        }
    }
}
