//! Line-oriented ring files.
//!
//! ```text
//! # W: e1*e1 = t
//! rank: 3
//! orders: 0 0 2
//! mult 1 1 : 0 0 1
//! ```
//!
//! Generators are numbered from 1; absent products are zero.

use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Int;
use crate::ring::{validate_ring, FdzRing};

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, message: message.into() })
}

fn integers(line: usize, words: &str) -> Result<Vec<Int>> {
    words
        .split_whitespace()
        .map(|w| w.parse::<Int>().or_else(|_| parse_err(line, format!("'{w}' is not an integer"))))
        .collect()
}

fn index(line: usize, word: Option<&str>, rank: usize) -> Result<usize> {
    let Some(word) = word else {
        return parse_err(line, "expected 'mult i j : c1 ... cr'");
    };
    match word.parse::<usize>() {
        Ok(i) if (1..=rank).contains(&i) => Ok(i - 1),
        _ => parse_err(line, format!("generator index '{word}' outside 1..{rank}")),
    }
}

pub fn parse_ring(text: &str) -> Result<FdzRing> {
    let mut rank: Option<(usize, usize)> = None;
    let mut orders: Option<(Vec<Int>, usize)> = None;
    let mut mults: Vec<(usize, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        if let Some(rest) = content.strip_prefix("rank:") {
            if rank.is_some() {
                return parse_err(line, "duplicate 'rank:' line");
            }
            let r = rest.trim().parse::<usize>().or_else(|_| parse_err(line, "rank must be a non-negative integer"))?;
            rank = Some((r, line));
        } else if let Some(rest) = content.strip_prefix("orders:") {
            if orders.is_some() {
                return parse_err(line, "duplicate 'orders:' line");
            }
            orders = Some((integers(line, rest)?, line));
        } else if content.starts_with("mult") && content[4..].starts_with(char::is_whitespace) {
            mults.push((line, content[4..].to_string()));
        } else {
            return parse_err(line, format!("unrecognized line '{content}'"));
        }
    }
    let Some((r, _)) = rank else {
        return parse_err(1, "missing 'rank:' line");
    };
    let Some((orders, orders_line)) = orders else {
        return parse_err(1, "missing 'orders:' line");
    };
    if orders.len() != r {
        return parse_err(orders_line, format!("expected {r} orders, found {}", orders.len()));
    }
    if orders.iter().any(|d| d < &Int::zero()) {
        return parse_err(orders_line, "orders must be non-negative");
    }
    let mut tensor = vec![vec![vec![Int::zero(); r]; r]; r];
    let mut seen = vec![vec![false; r]; r];
    for (line, body) in mults {
        let Some((head, coords)) = body.split_once(':') else {
            return parse_err(line, "expected ':' after the generator indices");
        };
        let mut words = head.split_whitespace();
        let i = index(line, words.next(), r)?;
        let j = index(line, words.next(), r)?;
        if words.next().is_some() {
            return parse_err(line, "expected exactly two generator indices");
        }
        let c = integers(line, coords)?;
        if c.len() != r {
            return parse_err(line, format!("expected {r} coordinates, found {}", c.len()));
        }
        if std::mem::replace(&mut seen[i][j], true) {
            return parse_err(line, format!("duplicate product {} {}", i + 1, j + 1));
        }
        tensor[i][j] = c;
    }
    validate_ring(orders, tensor)
}

/// Canonical text: header lines then the nonzero products in row order.
pub fn serialize_ring(ring: &FdzRing) -> String {
    let r = ring.rank();
    let join = |v: &[Int]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = format!("rank: {r}\norders:");
    if r > 0 {
        let _ = write!(out, " {}", join(ring.orders()));
    }
    out.push('\n');
    for i in 0..r {
        for j in 0..r {
            let c = ring.gen_product(i, j);
            if c.iter().any(|x| !x.is_zero()) {
                let _ = writeln!(out, "mult {} {} : {}", i + 1, j + 1, join(c));
            }
        }
    }
    out
}
