//! Random rings and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use fdz_core::linalg::{int, Int, IntMatrix};
use fdz_core::ringfile::parse_ring;
use fdz_core::FdzRing;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_ring(name: &str) -> FdzRing {
    let path = corpus_dir().join(format!("{name}.ring"));
    parse_ring(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

pub const NAMED: [&str; 6] = ["z", "twoz", "z0", "zxz0", "w", "zx2"];

pub fn all_corpus() -> Vec<(String, FdzRing)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "ring"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, parse_ring(&std::fs::read_to_string(&p).unwrap()).unwrap())
        })
        .collect()
}

/// Cyclic orders with product at most `max_order`.
pub fn random_orders(rng: &mut impl Rng, max_order: u64) -> Vec<u64> {
    let total = rng.gen_range(2..=max_order);
    let mut orders = Vec::new();
    let mut rest = total;
    while rest > 1 {
        let divisors: Vec<u64> = (2..=rest).filter(|d| rest % d == 0).collect();
        let d = *divisors.choose(rng).unwrap();
        orders.push(d);
        rest /= d;
    }
    orders
}

/// A random valid structure tensor on the given orders; each entry is
/// zero with probability `sparsity`.
pub fn random_finite_ring(rng: &mut impl Rng, orders: &[u64], sparsity: f64) -> FdzRing {
    let r = orders.len();
    let mut tensor = vec![vec![vec![Int::zero(); r]; r]; r];
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                if rng.gen_bool(sparsity) {
                    continue;
                }
                let dk = orders[k];
                let step = (dk / dk.gcd(&orders[i])).lcm(&(dk / dk.gcd(&orders[j])));
                tensor[i][j][k] = int((step * rng.gen_range(0..dk / step)) as i64);
            }
        }
    }
    fdz_core::ring::validate_ring(orders.iter().map(|&d| int(d as i64)).collect(), tensor).unwrap()
}

/// Random unimodular matrix built from elementary operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize) -> IntMatrix {
    let mut rows: Vec<Vec<Int>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect())
        .collect();
    for _ in 0..3 * n {
        if n < 2 {
            break;
        }
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b {
            continue;
        }
        let c = int(rng.gen_range(-2..=2));
        let src = rows[b].clone();
        for (x, y) in rows[a].iter_mut().zip(&src) {
            *x += &c * y;
        }
    }
    rows.shuffle(rng);
    IntMatrix::from_rows(rows, n)
}

/// Carrier and operation tables of a finite ring, by index.
pub struct Brute {
    pub elements: Vec<Vec<Int>>,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
}

impl Brute {
    pub fn new(r: &FdzRing) -> Brute {
        let elements = r.elements().unwrap();
        let index = |x: &[Int]| elements.iter().position(|e| e.as_slice() == x).unwrap();
        let add = elements.iter().map(|x| elements.iter().map(|y| index(&r.add(x, y))).collect()).collect();
        let mul = elements.iter().map(|x| elements.iter().map(|y| index(&r.mul(x, y))).collect()).collect();
        let zero = index(&r.zero());
        Brute { elements, add, mul, zero }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Smallest subgroup containing the given elements.
    pub fn span(&self, gens: impl IntoIterator<Item = usize>) -> HashSet<usize> {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut set: HashSet<usize> = HashSet::from([self.zero]);
        let mut frontier = vec![self.zero];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.add[x][g];
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    pub fn annihilator(&self) -> HashSet<usize> {
        (0..self.len())
            .filter(|&x| (0..self.len()).all(|y| self.mul[x][y] == self.zero && self.mul[y][x] == self.zero))
            .collect()
    }

    pub fn square(&self) -> HashSet<usize> {
        let products: HashSet<usize> = (0..self.len()).flat_map(|x| (0..self.len()).map(move |y| (x, y))).map(|(x, y)| self.mul[x][y]).collect();
        self.span(products)
    }

    /// `{x : n·x ∈ I for some n ≥ 1}`.
    pub fn isolator(&self, ideal: &HashSet<usize>) -> HashSet<usize> {
        (0..self.len())
            .filter(|&x| {
                let mut y = x;
                for _ in 0..self.len() {
                    if ideal.contains(&y) {
                        return true;
                    }
                    y = self.add[y][x];
                }
                false
            })
            .collect()
    }

    pub fn sum(&self, a: &HashSet<usize>, b: &HashSet<usize>) -> HashSet<usize> {
        a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| self.add[x][y]).collect()
    }

    pub fn order_of(&self, x: usize) -> usize {
        let mut y = x;
        let mut n = 1;
        while y != self.zero {
            y = self.add[y][x];
            n += 1;
        }
        n
    }
}

/// Exhaustive search for a ring isomorphism through the images of the
/// additive generators.
pub fn brute_isomorphic(a: &FdzRing, b: &FdzRing) -> bool {
    let (ba, bb) = (Brute::new(a), Brute::new(b));
    if ba.len() != bb.len() {
        return false;
    }
    let r = a.rank();
    let gen_orders: Vec<usize> = a.orders().iter().map(|d| d.to_usize().unwrap()).collect();
    // images must have order dividing the generator's order
    let choices: Vec<Vec<usize>> = gen_orders
        .iter()
        .map(|&d| (0..bb.len()).filter(|&y| d % bb.order_of(y) == 0).collect())
        .collect();
    let mut pick = vec![0usize; r];
    loop {
        let images: Vec<usize> = (0..r).map(|i| choices[i][pick[i]]).collect();
        if is_iso(&ba, &bb, &images) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == r {
                return false;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn is_iso(ba: &Brute, bb: &Brute, images: &[usize]) -> bool {
    // h(x) for every x = Σ c_i e_i in A
    let h: Vec<usize> = ba
        .elements
        .iter()
        .map(|x| {
            let mut acc = bb.zero;
            for (c, &img) in x.iter().zip(images) {
                for _ in 0..c.to_usize().unwrap() {
                    acc = bb.add[acc][img];
                }
            }
            acc
        })
        .collect();
    let distinct: HashSet<usize> = h.iter().copied().collect();
    if distinct.len() != bb.len() {
        return false;
    }
    (0..ba.len()).all(|x| (0..ba.len()).all(|y| h[ba.mul[x][y]] == bb.mul[h[x]][h[y]] && h[ba.add[x][y]] == bb.add[h[x]][h[y]]))
}
