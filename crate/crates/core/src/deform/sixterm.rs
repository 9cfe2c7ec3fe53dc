//! Comparison of the exact sequences
//! `0 → O → Δ → Â → A/K → 0` of two rings through compatible isomorphisms.

use num_traits::Zero;

use crate::classify::TriState;
use crate::eqcheck::{apply, is_ring_isomorphism, iso_search, CheckLine, IsoOutcome, SearchLimits};
use crate::error::Result;
use crate::linalg::{solve_left, Int, IntMatrix, Lattice, Presentation};
use crate::ring::FdzRing;

/// Largest candidate list per generator when lifting to `Δ`.
const LIFT_CANDIDATE_LIMIT: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixTermMaps {
    /// `Â(A) → Â(B)` on the generators of the quotient rings.
    pub phi: IntMatrix,
    /// `Δ(A) → Δ(B)` on the generators of the subrings.
    pub psi: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixTermReport {
    pub verdict: TriState,
    pub reason: Option<String>,
    pub checks: Vec<CheckLine>,
    pub maps: Option<SixTermMaps>,
}

impl SixTermReport {
    fn stop(verdict: TriState, reason: String, checks: Vec<CheckLine>) -> Self {
        SixTermReport { verdict, reason: Some(reason), checks, maps: None }
    }
}

/// One side of the comparison: the quotient `Â`, the subring `Δ` and the
/// restriction `Δ → Â` as a matrix on the generators of `Δ`.
struct Side {
    hat: FdzRing,
    delta: FdzRing,
    projection: IntMatrix,
}

fn side(a: &FdzRing) -> Result<Side> {
    let chain = a.characteristic_ideals();
    let hat = a.quotient_ring(&chain.ann)?;
    let pres = Presentation::new(chain.ann.lattice().basis(), a.rank());
    let (delta, gens) = a.subring(&chain.delta)?;
    let rows = gens.iter().map(|g| pres.coords(g)).collect();
    Ok(Side { hat: hat.clone(), delta, projection: IntMatrix::from_rows(rows, hat.rank()) })
}

impl Side {
    /// `ker(Δ → Â)`, i.e. `O`, in the coordinates of `Δ`.
    fn kernel(&self) -> Lattice {
        Lattice::preimage(&self.projection, &Lattice::from_moduli(self.hat.orders()))
    }

    fn image(&self) -> Lattice {
        Lattice::new(self.hat.rank(), &self.projection).sum(self.hat.additive().relations())
    }

    fn project(&self, y: &[Int]) -> Vec<Int> {
        apply(&self.hat, &self.projection, y)
    }
}

pub fn verify_sixterm(a: &FdzRing, b: &FdzRing, limits: SearchLimits) -> Result<SixTermReport> {
    let ca = a.characteristic_ideals();
    let cb = b.characteristic_ideals();
    let pieces = |r: &FdzRing, c: &crate::ring::IdealChain| {
        let whole = r.additive().whole();
        vec![
            ("Δ", c.delta.invariant_factors()),
            ("O", c.o_ideal.invariant_factors()),
            ("Â", whole.quotient_invariants(&c.ann)),
            ("A/K", whole.quotient_invariants(&c.k_ideal)),
            ("Ann/O", c.ann.quotient_invariants(&c.o_ideal)),
        ]
    };
    let mut checks = Vec::new();
    for ((name, x), (_, y)) in pieces(a, &ca).into_iter().zip(pieces(b, &cb)) {
        let passed = x == y;
        checks.push(CheckLine { name: invariant_check_name(name), passed, detail: String::new() });
        if !passed {
            return Ok(SixTermReport::stop(TriState::No, format!("{name} invariants differ"), checks));
        }
    }

    let sa = side(a)?;
    let sb = side(b)?;
    let phi = match iso_search(&sa.hat, &sb.hat, limits) {
        IsoOutcome::Yes(w) => w.images,
        IsoOutcome::No(reason) => {
            return Ok(SixTermReport::stop(TriState::No, format!("Â not isomorphic: {reason}"), checks));
        }
        IsoOutcome::Unknown(reason) => {
            return Ok(SixTermReport::stop(TriState::Unknown, format!("Â isomorphism: {reason}"), checks));
        }
    };
    checks.push(CheckLine { name: "quotient_by_ann", passed: true, detail: String::new() });

    let psi = match lift_to_delta(&sa, &sb, &phi, limits) {
        Lift::Found(psi) => psi,
        Lift::Missing(reason) => return Ok(SixTermReport::stop(TriState::Unknown, reason, checks)),
    };
    checks.push(CheckLine { name: "delta_isomorphism", passed: true, detail: String::new() });

    // η = ψ restricted to O.
    let o_image = sa.kernel().image(&psi).sum(sb.delta.additive().relations());
    checks.push(CheckLine { name: "left_square", passed: o_image == sb.kernel(), detail: String::new() });
    let middle = (0..sa.delta.rank()).all(|i| {
        let unit = sa.delta.basis_vector(i);
        apply(&sb.hat, &phi, &sa.project(&unit)) == sb.project(psi.row(i))
    });
    checks.push(CheckLine { name: "middle_square", passed: middle, detail: String::new() });
    // μ is induced by φ exactly when φ carries the image of Δ onto the image of Δ.
    let pushed = sa.image().image(&phi).sum(sb.hat.additive().relations());
    checks.push(CheckLine { name: "right_square", passed: pushed == sb.image(), detail: String::new() });

    let all = checks.iter().all(|c| c.passed);
    Ok(SixTermReport {
        verdict: if all { TriState::Yes } else { TriState::No },
        reason: if all { None } else { Some("diagram does not commute".into()) },
        checks,
        maps: Some(SixTermMaps { phi, psi }),
    })
}

fn invariant_check_name(piece: &str) -> &'static str {
    match piece {
        "Δ" => "delta_invariants",
        "O" => "o_invariants",
        "Â" => "hat_invariants",
        "A/K" => "a_mod_k_invariants",
        _ => "ann_mod_o_invariants",
    }
}

enum Lift {
    Found(IntMatrix),
    Missing(String),
}

/// Search for a ring isomorphism `ψ: Δ(A) → Δ(B)` with `π ∘ ψ = φ ∘ π`.
/// Each generator's image ranges over a coset of `O(B)` with bounded
/// coefficients.
fn lift_to_delta(sa: &Side, sb: &Side, phi: &IntMatrix, limits: SearchLimits) -> Lift {
    let na = sa.delta.rank();
    let nb = sb.delta.rank();
    if na != nb {
        return Lift::Missing("Δ presentations differ in length".into());
    }
    let hat_rel = IntMatrix::diagonal(sb.hat.orders());
    let system = sb.projection.vstack(&hat_rel);
    let kernel: Vec<Vec<Int>> = sb.kernel().basis().row_vecs();
    let bound = limits.coeff_bound as i64;
    let mut candidates = Vec::with_capacity(na);
    for i in 0..na {
        let target = apply(&sb.hat, phi, &sa.project(&sa.delta.basis_vector(i)));
        let Some(sol) = solve_left(&system, &target) else {
            return Lift::Missing("φ does not map the image of Δ into the image of Δ".into());
        };
        let y0 = sol.particular[..nb].to_vec();
        let order = sa.delta.additive().element_order(&sa.delta.basis_vector(i));
        let mut list: Vec<Vec<Int>> = vec![y0];
        for o in &kernel {
            let mut next = Vec::new();
            for y in &list {
                for c in -bound..=bound {
                    next.push(y.iter().zip(o).map(|(a, b)| a + b * c).collect::<Vec<Int>>());
                }
            }
            list = next.into_iter().map(|y| sb.delta.reduce(&y)).collect();
            list.sort();
            list.dedup();
            if list.len() > LIFT_CANDIDATE_LIMIT {
                return Lift::Missing("too many lift candidates for Δ".into());
            }
        }
        list.retain(|y| sb.delta.additive().element_order(y) == order);
        list.sort_by_key(|y| y.iter().map(|x| x.magnitude().clone()).sum::<num_bigint::BigUint>());
        candidates.push(list);
    }

    let mut nodes = 0u64;
    let mut assigned: Vec<Vec<Int>> = Vec::with_capacity(na);
    fn dfs(
        i: usize,
        assigned: &mut Vec<Vec<Int>>,
        candidates: &[Vec<Vec<Int>>],
        sa: &Side,
        sb: &Side,
        nodes: &mut u64,
        budget: u64,
    ) -> Option<std::result::Result<IntMatrix, ()>> {
        if i == candidates.len() {
            let psi = IntMatrix::from_rows(assigned.clone(), sb.delta.rank());
            return is_ring_isomorphism(&sa.delta, &sb.delta, &psi).then_some(Ok(psi));
        }
        for c in &candidates[i] {
            *nodes += 1;
            if *nodes > budget {
                return Some(Err(()));
            }
            assigned.push(c.clone());
            let ok = (0..=i).all(|j| {
                let p = sa.delta.gen_product(i, j);
                let q = sa.delta.gen_product(j, i);
                let fits = |v: &[Int]| v[i + 1..].iter().all(|x| x.is_zero());
                let image = |v: &[Int]| {
                    let mut out = sb.delta.zero();
                    for (x, h) in v.iter().zip(assigned.iter()) {
                        for (o, y) in out.iter_mut().zip(h) {
                            *o += x * y;
                        }
                    }
                    sb.delta.reduce(&out)
                };
                (!fits(p) || image(p) == sb.delta.mul(&assigned[i], &assigned[j]))
                    && (!fits(q) || image(q) == sb.delta.mul(&assigned[j], &assigned[i]))
            });
            if ok {
                if let Some(found) = dfs(i + 1, assigned, candidates, sa, sb, nodes, budget) {
                    return Some(found);
                }
            }
            assigned.pop();
        }
        None
    }
    match dfs(0, &mut assigned, &candidates, sa, sb, &mut nodes, limits.node_budget) {
        Some(Ok(psi)) => Lift::Found(psi),
        Some(Err(())) => Lift::Missing(format!("search budget of {} nodes exceeded", limits.node_budget)),
        None => Lift::Missing(format!(
            "no compatible Δ isomorphism within coefficient bound {}",
            limits.coeff_bound
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deform::{build_deformation, CyclicComponent, DeformationSpec};
    use crate::linalg::{int, ints};
    use crate::ring::integers;
    use crate::ring::samples::*;

    fn run(a: &FdzRing, b: &FdzRing) -> SixTermReport {
        verify_sixterm(a, b, SearchLimits::default()).unwrap()
    }

    #[test]
    fn identical_rings_commute() {
        for r in [integers(), twoz(), w(), zx2()] {
            let rep = run(&r, &r);
            assert_eq!(rep.verdict, TriState::Yes, "{:?}", rep);
        }
    }

    #[test]
    fn deformations_commute() {
        let trivial = build_deformation(&DeformationSpec::trivial(w())).unwrap();
        assert_eq!(run(&w(), &trivial.ring).verdict, TriState::Yes);
        let spec = DeformationSpec::new(w(), vec![CyclicComponent { order: int(2), value: ints(&[0, 1, 0]) }]);
        let twisted = build_deformation(&spec).unwrap();
        assert_eq!(run(&w(), &twisted.ring).verdict, TriState::Yes);
    }

    #[test]
    fn corrupted_tensor_is_rejected() {
        // e₁·e₁ = e₂ instead of t.
        let corrupted = FdzRing::from_i64(&[0, 0, 2], &[(0, 0, &[0, 1, 0])]).unwrap();
        let rep = run(&w(), &corrupted);
        assert_eq!(rep.verdict, TriState::No);
        assert_eq!(rep.reason.as_deref(), Some("Δ invariants differ"));
    }
}
