//! Univariate polynomials over `Z`, `Q` and small prime fields, with
//! factorization over `Q` (Berlekamp modulo a prime, Hensel lifting,
//! recombination of lifted factors).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEGREE_BOUND: usize = 12;
pub const PRIME_BOUND: u64 = 10_000;

/// Coefficients, constant term first, no trailing zeros.
pub type ZPoly = Vec<BigInt>;
pub type QPoly = Vec<BigRational>;
type FpPoly = Vec<u64>;

fn trim<T: Zero>(mut p: Vec<T>) -> Vec<T> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree<T>(p: &[T]) -> Option<usize> {
    p.len().checked_sub(1)
}

// ---------- Q[x] ----------

pub fn q_add(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

pub fn q_sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

pub fn q_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn q_divmod(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

pub fn q_monic(a: &QPoly) -> QPoly {
    match a.last() {
        None => Vec::new(),
        Some(l) => a.iter().map(|c| c / l).collect(),
    }
}

/// `(g, s, t)` with `g = s a + t b` monic.
pub fn q_ext_gcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let one = vec![BigRational::one()];
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (one.clone(), Vec::new());
    let (mut t0, mut t1) = (Vec::new(), one);
    while !r1.is_empty() {
        let (q, r) = q_divmod(&r0, &r1);
        let s2 = q_sub(&s0, &q_mul(&q, &s1));
        let t2 = q_sub(&t0, &q_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last().cloned() {
        None => (r0, s0, t0),
        Some(l) => {
            let scale = |p: &QPoly| p.iter().map(|c| c / &l).collect::<QPoly>();
            (scale(&r0), scale(&s0), scale(&t0))
        }
    }
}

pub fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    q_ext_gcd(a, b).0
}

pub fn q_derivative(a: &QPoly) -> QPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect())
}

/// Primitive integer polynomial with positive leading coefficient,
/// proportional to `a`.
pub fn q_to_primitive(a: &QPoly) -> ZPoly {
    let lcm = a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: ZPoly = a.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    z_primitive(&ints)
}

pub fn z_to_q(a: &ZPoly) -> QPoly {
    a.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

// ---------- Z[x] ----------

pub fn z_primitive(a: &ZPoly) -> ZPoly {
    let a = trim(a.clone());
    let content = a.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if content.is_zero() {
        return a;
    }
    let sign = if a.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    a.iter().map(|c| c / &content * &sign).collect()
}

fn z_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Exact quotient `a / b` in `Z[x]`, if it exists.
pub fn z_exact_div(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let mut r = trim(a.clone());
    let b = trim(b.clone());
    let db = degree(&b)?;
    if r.is_empty() {
        return Some(Vec::new());
    }
    if r.len() < b.len() {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    while !r.is_empty() && r.len() > db {
        let shift = r.len() - 1 - db;
        let (c, rem) = r.last().unwrap().div_rem(&b[db]);
        if !rem.is_zero() {
            return None;
        }
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        q[shift] = c;
        r = trim(r);
    }
    r.is_empty().then(|| trim(q))
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

// ---------- F_p[x] ----------

fn fp_trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let (mut t, mut nt, mut r, mut nr) = (0i64, 1i64, p as i64, a as i64);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    t.rem_euclid(p as i64) as u64
}

fn fp_from_z(a: &ZPoly, p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    fp_trim(a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn fp_sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    fp_trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + p - b.get(i).unwrap_or(&0)) % p).collect())
}

fn fp_mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

fn fp_divmod(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let mut r = a.clone();
    let db = b.len() - 1;
    let inv = fp_inv(b[db], p);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while !r.is_empty() && r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() * inv % p;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
        }
        q[shift] = c;
        r = fp_trim(r);
    }
    (fp_trim(q), r)
}

fn fp_monic(a: &FpPoly, p: u64) -> FpPoly {
    let inv = fp_inv(*a.last().unwrap(), p);
    a.iter().map(|c| c * inv % p).collect()
}

/// `(g, s, t)` with monic `g = s a + t b`.
fn fp_ext_gcd(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divmod(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = fp_inv(*r0.last().unwrap(), p);
    let scale = |v: &FpPoly| fp_trim(v.iter().map(|c| c * inv % p).collect());
    (scale(&r0), scale(&s0), scale(&t0))
}

fn fp_derivative(a: &FpPoly, p: u64) -> FpPoly {
    fp_trim(a.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect())
}

/// Monic irreducible factors of a monic squarefree polynomial over `F_p`
/// by Berlekamp's algorithm.
fn berlekamp(f: &FpPoly, p: u64) -> Vec<FpPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    // Rows of Q: x^{p·i} mod f.
    let xp = fp_powmod(&vec![0, 1], p, f, p);
    let mut rows = Vec::with_capacity(n);
    let mut cur = vec![1u64];
    for _ in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        rows.push(row);
        cur = fp_divmod(&fp_mul(&cur, &xp, p), f, p).1;
    }
    // Kernel of (Q − I)ᵀ acting on coefficient vectors: v with v·(Q − I) = 0.
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = (row[i] + p - 1) % p;
    }
    let basis = fp_left_kernel(&rows, n, p);
    let k = basis.len();
    let mut factors = vec![f.clone()];
    for v in basis.iter().skip(1) {
        if factors.len() == k {
            break;
        }
        let v = fp_trim(v.clone());
        let mut next = Vec::new();
        for g in factors {
            if g.len() <= 2 {
                next.push(g);
                continue;
            }
            let mut rest = g.clone();
            for s in 0..p {
                if rest.len() <= 2 {
                    break;
                }
                let shifted = fp_sub(&v, &vec![s], p);
                let d = fp_ext_gcd(&rest, &shifted, p).0;
                if d.len() > 1 && d.len() < rest.len() {
                    rest = fp_divmod(&rest, &d, p).0;
                    next.push(d);
                }
            }
            next.push(rest);
        }
        factors = next;
    }
    factors.into_iter().map(|g| fp_monic(&g, p)).collect()
}

fn fp_powmod(base: &FpPoly, mut e: u64, m: &FpPoly, p: u64) -> FpPoly {
    let mut result = vec![1u64];
    let mut b = fp_divmod(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            result = fp_divmod(&fp_mul(&result, &b, p), m, p).1;
        }
        b = fp_divmod(&fp_mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    result
}

/// Basis of `{v : v · M = 0}` over `F_p` for an `n × n` matrix.
fn fp_left_kernel(m: &[Vec<u64>], n: usize, p: u64) -> Vec<Vec<u64>> {
    // Solve Mᵀ v = 0 by row reduction of Mᵀ.
    let mut a: Vec<Vec<u64>> = (0..n).map(|j| (0..n).map(|i| m[i][j]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..n).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = fp_inv(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..n {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..n {
                    a[i][j] = (a[i][j] + p - f * a[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[row][fc]) % p;
            }
            v
        })
        .collect()
}

// ---------- Hensel lifting ----------

fn z_from_fp(a: &FpPoly) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn z_mod(a: &ZPoly, m: &BigInt) -> ZPoly {
    trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

/// Lift `f ≡ g·h (mod p)` with `h` monic to `f ≡ G·H (mod p^k)`.
fn hensel_two(f: &ZPoly, g: &FpPoly, h: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let pb = BigInt::from(p);
    let lc = f.last().unwrap().clone();
    // Make G carry f's leading coefficient.
    let mut big_g = z_from_fp(g);
    let inv_lead = fp_inv(*g.last().unwrap(), p);
    let lc_mod = lc.mod_floor(&pb).to_u64().unwrap();
    let scale = inv_lead * lc_mod % p;
    big_g = big_g.iter().map(|c| c * scale % &pb).collect();
    *big_g.last_mut().unwrap() = lc.clone();
    let g_fp = fp_from_z(&big_g, p);
    let (_, s, t) = fp_ext_gcd(&g_fp, h, p);
    let mut big_h = z_from_fp(h);
    let mut pj = pb.clone();
    for _ in 1..k {
        let diff: ZPoly = {
            let gh = z_mul(&big_g, &big_h);
            let n = f.len().max(gh.len());
            let z = BigInt::zero();
            trim((0..n).map(|i| f.get(i).unwrap_or(&z) - gh.get(i).unwrap_or(&z)).collect())
        };
        let e: FpPoly = fp_from_z(&diff.iter().map(|c| c / &pj).collect(), p);
        if !e.is_empty() {
            let se = fp_mul(&s, &e, p);
            let (q, sigma) = fp_divmod(&se, h, p);
            let tau = fp_trim({
                let te = fp_mul(&t, &e, p);
                let qg = fp_mul(&q, &g_fp, p);
                let n = te.len().max(qg.len());
                (0..n).map(|i| (te.get(i).unwrap_or(&0) + qg.get(i).unwrap_or(&0)) % p).collect()
            });
            let add = |big: &mut ZPoly, small: &FpPoly| {
                if big.len() < small.len() {
                    big.resize(small.len(), BigInt::zero());
                }
                for (b, c) in big.iter_mut().zip(small) {
                    *b += &pj * BigInt::from(*c);
                }
            };
            // σ corrects H (degree below deg H), τ corrects G.
            add(&mut big_h, &sigma);
            add(&mut big_g, &tau);
        }
        pj *= &pb;
    }
    let modulus = pj;
    (z_mod(&big_g, &modulus), z_mod(&big_h, &modulus))
}

/// Lift monic modular factors of `f` (with `f ≡ lc·Π factors`) to `p^k`;
/// returns monic lifts.
fn hensel_multi(f: &ZPoly, factors: &[FpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    let modulus = BigInt::from(p).pow(k);
    if factors.len() == 1 {
        let lc = f.last().unwrap();
        let inv = lc.modinv(&modulus).expect("leading coefficient is a unit mod p");
        return vec![z_mod(&f.iter().map(|c| c * &inv).collect(), &modulus)];
    }
    let mid = factors.len() / 2;
    let g = factors[..mid].iter().fold(vec![1u64], |acc, x| fp_mul(&acc, x, p));
    let h = factors[mid..].iter().fold(vec![1u64], |acc, x| fp_mul(&acc, x, p));
    let (big_g, big_h) = hensel_two(f, &g, &h, p, k);
    let mut out = hensel_multi(&big_g, &factors[..mid], p, k);
    out.extend(hensel_multi(&big_h, &factors[mid..], p, k));
    out
}

/// Irreducible factors over `Z` of a primitive squarefree polynomial.
pub fn factor_squarefree(f: &ZPoly) -> Result<Vec<ZPoly>> {
    let f = z_primitive(f);
    let n = degree(&f).unwrap_or(0);
    if n <= 1 {
        return Ok(vec![f]);
    }
    if n > DEGREE_BOUND {
        return Err(Error::FactorizationIncomplete(format!("degree {n} exceeds the bound {DEGREE_BOUND}")));
    }
    let lc = f.last().unwrap().clone();
    let p = (3..PRIME_BOUND)
        .filter(|&q| is_prime(q))
        .find(|&q| {
            if lc.mod_floor(&BigInt::from(q)).is_zero() {
                return false;
            }
            let fp = fp_monic(&fp_from_z(&f, q), q);
            let d = fp_derivative(&fp, q);
            !d.is_empty() && fp_ext_gcd(&fp, &d, q).0.len() == 1
        })
        .ok_or_else(|| Error::FactorizationIncomplete(format!("no good prime below {PRIME_BOUND}")))?;
    let modular = berlekamp(&fp_monic(&fp_from_z(&f, p), p), p);
    if modular.len() == 1 {
        return Ok(vec![f]);
    }
    // Coefficient bound for factors: 2^n · (n + 1) · max|a_i| · |lc|.
    let maxc = f.iter().map(|c| c.abs()).max().unwrap();
    let bound = (BigInt::one() << n) * BigInt::from(n + 1) * maxc * lc.abs() * 2;
    let mut k = 1u32;
    while BigInt::from(p).pow(k) <= bound {
        k += 1;
    }
    let modulus = BigInt::from(p).pow(k);
    let mut lifted = hensel_multi(&f, &modular, p, k);
    let mut rest = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut progressed = false;
        for subset in combinations(lifted.len(), size) {
            let lc_rest = rest.last().unwrap().clone();
            let prod = subset.iter().fold(vec![lc_rest.clone()], |acc, &i| z_mul(&acc, &lifted[i]));
            let candidate = z_primitive(&prod.iter().map(|c| symmetric_mod(c, &modulus)).collect());
            if let Some(q) = z_exact_div(&rest, &candidate) {
                found.push(candidate);
                rest = z_primitive(&q);
                let keep: Vec<ZPoly> = lifted
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g.clone())
                    .collect();
                lifted = keep;
                progressed = true;
                break;
            }
        }
        if !progressed {
            size += 1;
        }
    }
    found.push(rest);
    Ok(found)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Distinct monic irreducible factors over `Q` with their multiplicities.
pub fn factor_rational(m: &QPoly) -> Result<Vec<(QPoly, usize)>> {
    let m = q_monic(m);
    if degree(&m).unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let sqfree = q_divmod(&m, &q_gcd(&m, &q_derivative(&m))).0;
    let mut out = Vec::new();
    for g in factor_squarefree(&q_to_primitive(&sqfree))? {
        let gq = q_monic(&z_to_q(&g));
        let mut mult = 0;
        let mut cur = m.clone();
        loop {
            let (q, r) = q_divmod(&cur, &gq);
            if !r.is_empty() {
                break;
            }
            cur = q;
            mult += 1;
        }
        out.push((gq, mult));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ints;

    fn expand(factors: &[ZPoly]) -> ZPoly {
        factors.iter().fold(vec![BigInt::one()], |a, b| z_mul(&a, b))
    }

    fn check(f: &[i64], expected_count: usize) {
        let f = ints(f);
        let factors = factor_squarefree(&f).unwrap();
        assert_eq!(factors.len(), expected_count, "factors of {f:?}: {factors:?}");
        assert_eq!(z_primitive(&expand(&factors)), z_primitive(&f));
    }

    #[test]
    fn factors_small_polynomials() {
        check(&[-1, 0, 1], 2); // x² − 1
        check(&[1, 0, 1], 1); // x² + 1
        check(&[-2, 0, 1], 1); // x² − 2
        check(&[6, -5, 1], 2); // (x − 2)(x − 3)
        check(&[0, -1, 0, 1], 3); // x³ − x
        check(&[-1, 0, 0, 0, 1], 3); // x⁴ − 1 = (x−1)(x+1)(x²+1)
        check(&[1, 0, 0, 0, 1], 1); // x⁴ + 1, reducible mod every prime
        check(&[-6, 0, 5, 0, 1], 3); // (x² + 6)(x − 1)(x + 1)
    }

    #[test]
    fn factors_with_leading_coefficient() {
        check(&[-1, 0, 4], 2); // (2x − 1)(2x + 1)
        check(&[3, 7, 2], 2); // (2x + 1)(x + 3)
    }

    #[test]
    fn rational_factorization_with_multiplicity() {
        // (x − 1)² (x + 2)
        let m = z_to_q(&ints(&[2, -3, 0, 1]));
        let f = factor_rational(&m).unwrap();
        let mut mults: Vec<usize> = f.iter().map(|(_, k)| *k).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 2]);
    }

    #[test]
    fn degree_bound_is_enforced() {
        let mut f = vec![BigInt::zero(); 14];
        f[0] = BigInt::from(-1);
        f[13] = BigInt::one();
        assert!(matches!(factor_squarefree(&f), Err(Error::FactorizationIncomplete(_))));
    }
}
