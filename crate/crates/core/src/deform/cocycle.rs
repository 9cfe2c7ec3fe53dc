//! Symmetric 2-cocycles on f.g. abelian groups and the abelian extensions
//! they define.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::bilin::enumerate_group;
use crate::error::{Error, Result};
use crate::group::{FgAbelianGroup, Subgroup};
use crate::linalg::{reduce_mod, Congruences, Int, IntMatrix, Lattice};

/// Largest torsion part on which cocycle identities are checked
/// exhaustively.
pub const ANALYZE_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleForm {
    /// One target element per cyclic factor of the source; free factors
    /// carry the zero element.
    Cyclic(Vec<Vec<Int>>),
    /// `values[ix * |G| + iy]` over the enumerated elements of a finite
    /// source.
    Table(Vec<Vec<Int>>),
}

/// A map `G × G → D` with `G = ⊕ Z/e_i` (0 meaning infinite cyclic).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricCocycle {
    source: Vec<Int>,
    target: FgAbelianGroup,
    form: CocycleForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleAnalysis {
    pub is_cocycle: bool,
    pub is_symmetric: bool,
    pub is_normalized: bool,
    pub is_coboundary: bool,
    /// `d mod e·D` per cyclic factor, for cyclic forms.
    pub ext_class: Option<Vec<Vec<Int>>>,
}

/// `g(i·a, j·a) = d` when `i + j ≥ e`, else 0, on `Z/e = ⟨a⟩`.
pub fn cyclic_cocycle(e: &Int, d: Vec<Int>, target: &FgAbelianGroup) -> Result<SymmetricCocycle> {
    if *e <= Int::zero() {
        return Err(Error::InvalidCocycle("cyclic order must be at least 1".into()));
    }
    SymmetricCocycle::cyclic(vec![e.clone()], target, vec![d])
}

impl SymmetricCocycle {
    pub fn cyclic(source: Vec<Int>, target: &FgAbelianGroup, values: Vec<Vec<Int>>) -> Result<Self> {
        if values.len() != source.len() {
            return Err(Error::InvalidCocycle(format!(
                "expected {} cyclic values, got {}",
                source.len(),
                values.len()
            )));
        }
        if source.iter().any(|e| e < &Int::zero()) {
            return Err(Error::InvalidCocycle("negative cyclic order".into()));
        }
        let n = target.ambient_rank();
        let mut reduced = Vec::with_capacity(values.len());
        for (e, d) in source.iter().zip(values) {
            if d.len() != n {
                return Err(Error::InvalidCocycle(format!("value has length {}, target rank is {n}", d.len())));
            }
            let d = target.reduce(&d);
            if e.is_zero() && !target.is_zero(&d) {
                return Err(Error::InvalidCocycle("infinite cyclic factors carry no cyclic value".into()));
            }
            reduced.push(d);
        }
        Ok(SymmetricCocycle { source, target: target.clone(), form: CocycleForm::Cyclic(reduced) })
    }

    pub fn from_table(source: Vec<Int>, target: &FgAbelianGroup, values: Vec<Vec<Int>>) -> Result<Self> {
        let size = finite_size(&source)
            .ok_or_else(|| Error::InvalidCocycle("table form needs a finite source".into()))?;
        if values.len() != size * size {
            return Err(Error::InvalidCocycle(format!("expected {} table entries, got {}", size * size, values.len())));
        }
        if values.iter().any(|v| v.len() != target.ambient_rank()) {
            return Err(Error::InvalidCocycle("table entry has the wrong length".into()));
        }
        let values = values.iter().map(|v| target.reduce(v)).collect();
        Ok(SymmetricCocycle { source, target: target.clone(), form: CocycleForm::Table(values) })
    }

    pub fn zero(source: Vec<Int>, target: &FgAbelianGroup) -> Self {
        let values = vec![vec![Int::zero(); target.ambient_rank()]; source.len()];
        SymmetricCocycle { source, target: target.clone(), form: CocycleForm::Cyclic(values) }
    }

    pub fn source(&self) -> &[Int] {
        &self.source
    }

    pub fn target(&self) -> &FgAbelianGroup {
        &self.target
    }

    pub fn form(&self) -> &CocycleForm {
        &self.form
    }

    fn reduce_source(&self, x: &[Int]) -> Vec<Int> {
        x.iter().zip(&self.source).map(|(v, e)| reduce_mod(v, e)).collect()
    }

    fn index(&self, x: &[Int]) -> usize {
        self.reduce_source(x)
            .iter()
            .zip(&self.source)
            .fold(0usize, |acc, (v, e)| acc * e.to_usize().unwrap() + v.to_usize().unwrap())
    }

    pub fn eval(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        match &self.form {
            CocycleForm::Cyclic(values) => {
                let mut out = vec![Int::zero(); self.target.ambient_rank()];
                for ((e, d), (xi, yi)) in self.source.iter().zip(values).zip(x.iter().zip(y)) {
                    if e.is_zero() {
                        continue;
                    }
                    if reduce_mod(xi, e) + reduce_mod(yi, e) >= *e {
                        for (o, v) in out.iter_mut().zip(d) {
                            *o += v;
                        }
                    }
                }
                self.target.reduce(&out)
            }
            CocycleForm::Table(values) => {
                let size = finite_size(&self.source).unwrap();
                values[self.index(x) * size + self.index(y)].clone()
            }
        }
    }

    /// Orders of the finite factors on which the cocycle can be nonzero.
    fn torsion_source(&self) -> Vec<Int> {
        self.source.iter().filter(|e| !e.is_zero()).cloned().collect()
    }

    fn embed_torsion(&self, t: &[Int]) -> Vec<Int> {
        let mut it = t.iter();
        self.source.iter().map(|e| if e.is_zero() { Int::zero() } else { it.next().unwrap().clone() }).collect()
    }

    fn torsion_elements(&self) -> Result<Vec<Vec<Int>>> {
        let tors = self.torsion_source();
        enumerate_group(&tors, ANALYZE_LIMIT)
            .map(|els| els.iter().map(|t| self.embed_torsion(t)).collect())
            .ok_or_else(|| Error::CarrierTooLarge {
                size: tors.iter().product::<Int>().to_string(),
                limit: ANALYZE_LIMIT,
            })
    }

    fn add_source(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        let s: Vec<Int> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce_source(&s)
    }

    pub fn analyze(&self) -> Result<CocycleAnalysis> {
        let els = self.torsion_elements()?;
        let zero = vec![Int::zero(); self.source.len()];
        let d = &self.target;
        let is_normalized = els.iter().all(|x| d.is_zero(&self.eval(&zero, x)) && d.is_zero(&self.eval(x, &zero)));
        let is_symmetric = els.iter().all(|x| els.iter().all(|y| d.equal(&self.eval(x, y), &self.eval(y, x))));
        let is_cocycle = els.iter().all(|x| {
            els.iter().all(|y| {
                let xy = self.add_source(x, y);
                els.iter().all(|z| {
                    let yz = self.add_source(y, z);
                    let lhs: Vec<Int> =
                        self.eval(x, y).iter().zip(self.eval(&xy, z)).map(|(a, b)| a + b).collect();
                    let rhs: Vec<Int> =
                        self.eval(y, z).iter().zip(self.eval(x, &yz)).map(|(a, b)| a + b).collect();
                    d.equal(&lhs, &rhs)
                })
            })
        });
        let is_coboundary = is_cocycle && is_symmetric && self.solve_shift(&els);
        let ext_class = match &self.form {
            CocycleForm::Cyclic(values) => Some(
                self.source
                    .iter()
                    .zip(values)
                    .map(|(e, v)| {
                        let n = d.ambient_rank();
                        let multiples = Lattice::new(n, &IntMatrix::diagonal(&vec![e.clone(); n]));
                        d.relations().sum(&multiples).reduce(v)
                    })
                    .collect(),
            ),
            CocycleForm::Table(_) => None,
        };
        Ok(CocycleAnalysis { is_cocycle, is_symmetric, is_normalized, is_coboundary, ext_class })
    }

    /// Is there `φ: G → D` with `c(x,y) = φ(x) + φ(y) − φ(x+y)`? Solved one
    /// coordinate of `D`'s diagonal presentation at a time, with an extra
    /// unknown standing for the constant term.
    fn solve_shift(&self, els: &[Vec<Int>]) -> bool {
        let pres = self.target.presentation();
        let m = els.len();
        let index_of = |x: &[Int]| els.iter().position(|e| e == x).unwrap();
        (0..pres.len()).all(|k| {
            let modulus = &pres.orders[k];
            // unknowns: φ(els[1..]) then the constant slot
            let mut system = Congruences::new(m);
            for i in 1..m {
                for j in i..m {
                    let s = index_of(&self.add_source(&els[i], &els[j]));
                    let mut row = vec![Int::zero(); m];
                    row[i - 1] += Int::one();
                    row[j - 1] += Int::one();
                    if s > 0 {
                        row[s - 1] -= Int::one();
                    }
                    row[m - 1] = -pres.coords(&self.eval(&els[i], &els[j]))[k].clone();
                    system.push(row, modulus.clone());
                }
            }
            let sols = system.solutions();
            let g = sols.basis().col(m - 1).iter().fold(Int::zero(), |g, v| g.gcd(v));
            g.is_one()
        })
    }
}

fn finite_size(orders: &[Int]) -> Option<usize> {
    orders.iter().try_fold(1usize, |acc, e| e.to_usize().filter(|&e| e > 0).and_then(|e| acc.checked_mul(e)))
}

/// `E = G × D` with `(x,o) ⊞ (y,p) = (x+y, o+p+c(x,y))`, presented on the
/// generators `u_i = (x_i, 0)` followed by the generators of `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupExtension {
    pub group: FgAbelianGroup,
    cocycle: SymmetricCocycle,
}

pub fn build_group_extension(c: &SymmetricCocycle) -> Result<GroupExtension> {
    let analysis = c.analyze()?;
    if !(analysis.is_cocycle && analysis.is_symmetric && analysis.is_normalized) {
        return Err(Error::InvalidCocycle("not a normalized symmetric 2-cocycle".into()));
    }
    let g = c.source.len();
    let n = c.target.ambient_rank();
    let mut rows = Vec::new();
    for (i, e) in c.source.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        let mut unit = vec![Int::zero(); g];
        unit[i] = Int::one();
        let s = c.accumulate(&unit, e.to_usize().expect("small cyclic order"));
        let mut row = vec![Int::zero(); g + n];
        row[i] = e.clone();
        for (k, v) in s.into_iter().enumerate() {
            row[g + k] = -v;
        }
        rows.push(row);
    }
    for r in c.target.relations().basis().row_vecs() {
        let mut row = vec![Int::zero(); g];
        row.extend(r);
        rows.push(row);
    }
    let group = FgAbelianGroup::new(g + n, &IntMatrix::from_rows(rows, g + n));
    Ok(GroupExtension { group, cocycle: c.clone() })
}

impl SymmetricCocycle {
    /// Second component of `(x,0) ⊞ … ⊞ (x,0)` (`times` terms).
    fn accumulate(&self, x: &[Int], times: usize) -> Vec<Int> {
        let mut pos = vec![Int::zero(); self.source.len()];
        let mut acc = vec![Int::zero(); self.target.ambient_rank()];
        for _ in 0..times {
            for (a, v) in acc.iter_mut().zip(self.eval(&pos, x)) {
                *a += v;
            }
            pos = self.add_source(&pos, x);
        }
        self.target.reduce(&acc)
    }
}

impl GroupExtension {
    fn split(&self) -> usize {
        self.cocycle.source.len()
    }

    /// Extension coordinates of the pair `(x, o)`.
    pub fn element(&self, x: &[Int], o: &[Int]) -> Vec<Int> {
        let c = &self.cocycle;
        let x = c.reduce_source(x);
        // Σ x_i u_i = (x, s) where s accumulates the cocycle one step at a time.
        let mut pos = vec![Int::zero(); x.len()];
        let mut s = vec![Int::zero(); c.target.ambient_rank()];
        for (i, xi) in x.iter().enumerate() {
            if c.source[i].is_zero() {
                pos[i] = xi.clone();
                continue;
            }
            let mut unit = vec![Int::zero(); x.len()];
            unit[i] = Int::one();
            for _ in 0..xi.to_usize().unwrap() {
                for (a, v) in s.iter_mut().zip(c.eval(&pos, &unit)) {
                    *a += v;
                }
                pos = c.add_source(&pos, &unit);
            }
        }
        let mut out = x.clone();
        out.extend(o.iter().zip(&s).map(|(a, b)| a - b));
        self.group.reduce(&out)
    }

    /// `(x,o) ⊞ (y,p)` computed on pairs.
    pub fn add_pairs(&self, a: (&[Int], &[Int]), b: (&[Int], &[Int])) -> (Vec<Int>, Vec<Int>) {
        let c = &self.cocycle;
        let x = c.add_source(a.0, b.0);
        let o: Vec<Int> = a.1.iter().zip(b.1).zip(c.eval(a.0, b.0)).map(|((p, q), r)| p + q + r).collect();
        (x, c.target.reduce(&o))
    }

    pub fn embed(&self, o: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::zero(); self.split()];
        out.extend(o.iter().cloned());
        self.group.reduce(&out)
    }

    pub fn project(&self, e: &[Int]) -> Vec<Int> {
        self.cocycle.reduce_source(&e[..self.split()])
    }

    /// Image of the embedding of `D`.
    pub fn embedded_target(&self) -> Subgroup {
        let n = self.cocycle.target.ambient_rank();
        let gens = (0..n)
            .map(|k| {
                let mut o = vec![Int::zero(); n];
                o[k] = Int::one();
                self.embed(&o)
            })
            .collect();
        self.group.subgroup_from_vecs(gens)
    }

    /// Kernel of the projection onto `G`.
    pub fn projection_kernel(&self) -> Subgroup {
        let g = self.split();
        let total = self.group.ambient_rank();
        let mut map = IntMatrix::zeros(total, g);
        for i in 0..g {
            map.set(i, i, Int::one());
        }
        let lat = Lattice::preimage(&map, &Lattice::from_moduli(&self.cocycle.source)).sum(self.group.relations());
        Subgroup::from_lattice(&self.group, lat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, ints};

    fn cyc(n: i64) -> FgAbelianGroup {
        FgAbelianGroup::from_orders(&[int(n)])
    }

    #[test]
    fn cyclic_values() {
        let d = cyc(0);
        let g = cyclic_cocycle(&int(3), ints(&[5]), &d).unwrap();
        let v = |i: i64, j: i64| g.eval(&ints(&[i]), &ints(&[j]));
        assert_eq!(v(1, 1), ints(&[0]));
        for (i, j) in [(1, 2), (2, 1), (2, 2)] {
            assert_eq!(v(i, j), ints(&[5]));
        }
        assert_eq!(v(0, 2), ints(&[0]));
        let trivial = cyclic_cocycle(&int(1), ints(&[5]), &d).unwrap();
        assert_eq!(trivial.eval(&ints(&[0]), &ints(&[0])), ints(&[0]));
        assert!(cyclic_cocycle(&int(0), ints(&[1]), &d).is_err());
    }

    #[test]
    fn coboundary_detection() {
        let d = cyc(0);
        let nontrivial = cyclic_cocycle(&int(2), ints(&[1]), &d).unwrap().analyze().unwrap();
        assert!(nontrivial.is_cocycle && !nontrivial.is_coboundary);
        assert_eq!(nontrivial.ext_class, Some(vec![ints(&[1])]));
        let even = cyclic_cocycle(&int(2), ints(&[2]), &d).unwrap().analyze().unwrap();
        assert!(even.is_coboundary);
        assert_eq!(even.ext_class, Some(vec![ints(&[0])]));
        let zero = SymmetricCocycle::zero(vec![int(4)], &d).analyze().unwrap();
        assert!(zero.is_coboundary);
    }

    #[test]
    fn non_cocycle_table_is_rejected() {
        // c(1,1) = 1 only for Z/3 into Z breaks the identity at (1,1,1).
        let mut values = vec![ints(&[0]); 9];
        values[4] = ints(&[1]);
        let c = SymmetricCocycle::from_table(vec![int(3)], &cyc(0), values).unwrap();
        assert!(!c.analyze().unwrap().is_cocycle);
        assert!(build_group_extension(&c).is_err());
    }

    #[test]
    fn extensions_of_z2() {
        let by_z = build_group_extension(&cyclic_cocycle(&int(2), ints(&[1]), &cyc(0)).unwrap()).unwrap();
        assert_eq!(by_z.group.invariant_factors(), ints(&[0]));
        assert_eq!(by_z.group.whole().quotient_invariants(&by_z.embedded_target()), ints(&[2]));
        // (1,0) ⊞ (1,0) = (0,1)
        let u = by_z.element(&ints(&[1]), &ints(&[0]));
        let twice: Vec<Int> = u.iter().map(|x| x * 2).collect();
        assert!(by_z.group.equal(&twice, &by_z.embed(&ints(&[1]))));

        let by_z2 = build_group_extension(&cyclic_cocycle(&int(2), ints(&[1]), &cyc(2)).unwrap()).unwrap();
        assert_eq!(by_z2.group.invariant_factors(), ints(&[4]));
        assert_eq!(by_z2.group.element_order(&by_z2.element(&ints(&[1]), &ints(&[0]))), int(4));
    }

    #[test]
    fn extension_coordinates_respect_addition() {
        let d = FgAbelianGroup::from_orders(&[int(2), int(0)]);
        let c = SymmetricCocycle::cyclic(vec![int(2), int(3)], &d, vec![ints(&[1, 3]), ints(&[0, 1])]).unwrap();
        let ext = build_group_extension(&c).unwrap();
        let gs = enumerate_group(&[int(2), int(3)], 16).unwrap();
        let os = [ints(&[0, 0]), ints(&[1, 2]), ints(&[0, -1])];
        for x in &gs {
            for y in &gs {
                for o in &os {
                    for p in &os {
                        let (s, q) = ext.add_pairs((x, o), (y, p));
                        let lhs = ext.element(&s, &q);
                        let rhs: Vec<Int> =
                            ext.element(x, o).iter().zip(ext.element(y, p)).map(|(a, b)| a + b).collect();
                        assert!(ext.group.equal(&lhs, &rhs));
                    }
                }
            }
        }
        assert_eq!(ext.embedded_target(), ext.projection_kernel());
        assert_eq!(ext.project(&ext.element(&ints(&[1, 2]), &ints(&[1, 1]))), ints(&[1, 2]));
    }
}
