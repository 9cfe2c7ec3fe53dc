//! Finite-dimensional commutative algebras over `Q` and their primitive
//! idempotents.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::{factor_rational, q_divmod, q_ext_gcd, q_mul, QPoly};

pub type Q = BigRational;

/// Attempts per block before giving up on splitting it.
const SPLIT_ATTEMPTS: usize = 48;

/// Algebra with basis `b_1..b_n` and `b_i b_j = Σ table[i*n+j][k] b_k`.
#[derive(Clone, Debug)]
pub struct RationalAlgebra {
    n: usize,
    table: Vec<Vec<Q>>,
}

fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Rank of a rational matrix given as rows.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for j in c..ncols {
                let v = &f * &a[r][j];
                a[i][j] -= v;
            }
        }
        r += 1;
    }
    r
}

/// Coefficients `x` with `Σ x_i vecs[i] = target`, if any.
fn express(vecs: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let m = vecs.len();
    let n = target.len();
    // Augmented system: n equations, m unknowns.
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|k| {
            let mut row: Vec<Q> = vecs.iter().map(|v| v[k].clone()).collect();
            row.push(target[k].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=m {
                    let v = &f * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[m].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); m];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = a[row][m].clone();
    }
    Some(x)
}

impl RationalAlgebra {
    pub fn new(n: usize, table: Vec<Vec<Q>>) -> Self {
        assert_eq!(table.len(), n * n);
        RationalAlgebra { n, table }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> Vec<Q> {
        vec![Q::zero(); self.n]
    }

    pub fn add(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    pub fn mul(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = self.zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (o, v) in out.iter_mut().zip(&self.table[i * self.n + j]) {
                    if !v.is_zero() {
                        *o += &c * v;
                    }
                }
            }
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<Q> {
        let mut v = self.zero();
        v[i] = Q::one();
        v
    }

    fn trace(&self, x: &[Q]) -> Q {
        (0..self.n).map(|j| self.mul(x, &self.basis(j))[j].clone()).sum()
    }

    /// Dimension of the block `eB`.
    pub fn block_dim(&self, e: &[Q]) -> usize {
        let rows: Vec<Vec<Q>> = (0..self.n).map(|j| self.mul(e, &self.basis(j))).collect();
        rank(&rows)
    }

    /// `dim eB − dim rad(eB)`, via the rank of the trace form on `eB`.
    pub fn semisimple_dim(&self, e: &[Q]) -> usize {
        let eb: Vec<Vec<Q>> = (0..self.n).map(|j| self.mul(e, &self.basis(j))).collect();
        let rows: Vec<Vec<Q>> =
            eb.iter().map(|x| eb.iter().map(|y| self.trace(&self.mul(x, y))).collect()).collect();
        rank(&rows)
    }

    /// Minimal polynomial of `a` inside the block with unit `e`.
    pub fn min_poly(&self, a: &[Q], e: &[Q]) -> QPoly {
        let mut powers = vec![e.to_vec()];
        loop {
            let next = self.mul(a, powers.last().unwrap());
            if let Some(c) = express(&powers, &next) {
                let mut poly: QPoly = c.into_iter().map(|x| -x).collect();
                poly.push(Q::one());
                return poly;
            }
            powers.push(next);
        }
    }

    /// `p(a)` with `a⁰ = e`.
    pub fn eval(&self, p: &QPoly, a: &[Q], e: &[Q]) -> Vec<Q> {
        let mut acc = self.zero();
        for c in p.iter().rev() {
            acc = self.mul(&acc, a);
            for (x, y) in acc.iter_mut().zip(e) {
                *x += c * y;
            }
        }
        acc
    }

    /// Primitive idempotents of the algebra, given its unit. Blocks are
    /// split by factoring minimal polynomials of seeded random elements.
    pub fn primitive_idempotents(&self, unit: &[Q], rng: &mut ChaCha8Rng) -> Result<Vec<Vec<Q>>> {
        if self.n == 0 || unit.iter().all(|x| x.is_zero()) {
            return Ok(Vec::new());
        }
        let mut pending = vec![unit.to_vec()];
        let mut done = Vec::new();
        'blocks: while let Some(e) = pending.pop() {
            let target = self.semisimple_dim(&e);
            for attempt in 0..SPLIT_ATTEMPTS {
                let spread = 2 + attempt as i64;
                let r: Vec<Q> = (0..self.n).map(|_| q(rng.gen_range(-spread..=spread))).collect();
                let a = self.mul(&r, &e);
                let m = self.min_poly(&a, &e);
                let factors = factor_rational(&m)?;
                if factors.len() == 1 {
                    if factors[0].0.len() - 1 == target {
                        done.push(e);
                        continue 'blocks;
                    }
                    continue;
                }
                for part in crt_idempotents(&m, &factors) {
                    pending.push(self.eval(&part, &a, &e));
                }
                continue 'blocks;
            }
            return Err(Error::FactorizationIncomplete(
                "could not split a block of the rational algebra".into(),
            ));
        }
        done.sort();
        Ok(done)
    }
}

/// Polynomials `E_j` with `E_j ≡ δ_ij (mod g_i^{k_i})`, reduced mod `m`.
fn crt_idempotents(m: &QPoly, factors: &[(QPoly, usize)]) -> Vec<QPoly> {
    factors
        .iter()
        .map(|(g, k)| {
            let qj = (0..*k).fold(vec![Q::one()], |acc, _| q_mul(&acc, g));
            let uj = q_divmod(m, &qj).0;
            let (_, s, _) = q_ext_gcd(&uj, &qj);
            q_divmod(&q_mul(&s, &uj), m).1
        })
        .collect()
}
