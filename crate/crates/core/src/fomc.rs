//! First-order model checking over finite rings in the language
//! `{0, +, −, ·}` without a unit constant.
//!
//! Quantifier blocks whose variables occur only inside one sum term are
//! evaluated over the set of values that term takes, which keeps the
//! definability formulas for products of sums tractable.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Int;
use crate::ring::FdzRing;

/// Largest carrier the checker enumerates.
pub const CARRIER_LIMIT: usize = 4096;
/// Carriers up to this size get precomputed operation tables.
const TABLE_LIMIT: usize = 1024;
/// Largest number of assignments enumerated for one group of summands.
const GROUP_LIMIT: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Zero,
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quant(Quantifier, String, Box<Formula>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    /// Left-nested sum; the empty sum is `0`.
    pub fn sum(terms: impl IntoIterator<Item = Term>) -> Term {
        terms.into_iter().reduce(Term::add).unwrap_or(Term::Zero)
    }

    fn vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero => {}
            Term::Neg(a) => a.vars_into(out),
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.vars_into(&mut out);
        out
    }

    fn replace(&self, target: &Term, with: &Term) -> Term {
        if self == target {
            return with.clone();
        }
        match self {
            Term::Var(_) | Term::Zero => self.clone(),
            Term::Neg(a) => Term::Neg(Box::new(a.replace(target, with))),
            Term::Add(a, b) => Term::add(a.replace(target, with), b.replace(target, with)),
            Term::Sub(a, b) => Term::Sub(Box::new(a.replace(target, with)), Box::new(b.replace(target, with))),
            Term::Mul(a, b) => Term::mul(a.replace(target, with), b.replace(target, with)),
        }
    }

    /// Summands of a top-level sum, with subtraction as adding a negation.
    fn summands(&self) -> Vec<Term> {
        match self {
            Term::Add(a, b) => {
                let mut s = a.summands();
                s.extend(b.summands());
                s
            }
            Term::Sub(a, b) => {
                let mut s = a.summands();
                s.push(Term::Neg(b.clone()));
                s
            }
            _ => vec![self.clone()],
        }
    }
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(vars: &[String], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |f, v| Formula::Quant(Quantifier::Exists, v.clone(), Box::new(f)))
    }

    pub fn forall(vars: &[String], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |f, v| Formula::Quant(Quantifier::Forall, v.clone(), Box::new(f)))
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.free_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_into(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let term = |t: &Term, bound: &Vec<String>, out: &mut Vec<String>| {
            let mut vs = Vec::new();
            collect_in_order(t, &mut vs);
            for v in vs {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) => {
                term(a, bound, out);
                term(b, bound, out);
            }
            Formula::Not(f) => f.free_into(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.free_into(bound, out)),
            Formula::Implies(a, b) => {
                a.free_into(bound, out);
                b.free_into(bound, out);
            }
            Formula::Quant(_, v, f) => {
                bound.push(v.clone());
                f.free_into(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Number of quantifiers of each kind, counted syntactically.
    pub fn quantifier_counts(&self) -> (usize, usize) {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) => (0, 0),
            Formula::Not(f) => f.quantifier_counts(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(|f| f.quantifier_counts()).fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1)),
            Formula::Implies(a, b) => {
                let (x, y) = (a.quantifier_counts(), b.quantifier_counts());
                (x.0 + y.0, x.1 + y.1)
            }
            Formula::Quant(q, _, f) => {
                let (e, a) = f.quantifier_counts();
                match q {
                    Quantifier::Exists => (e + 1, a),
                    Quantifier::Forall => (e, a + 1),
                }
            }
        }
    }

    fn bound_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) => {}
            Formula::Not(f) => f.bound_names(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.bound_names(out)),
            Formula::Implies(a, b) => {
                a.bound_names(out);
                b.bound_names(out);
            }
            Formula::Quant(_, v, f) => {
                out.insert(v.clone());
                f.bound_names(out);
            }
        }
    }

    fn atom_sides(&self, out: &mut Vec<Term>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) => {
                out.push(a.clone());
                out.push(b.clone());
            }
            Formula::Not(f) | Formula::Quant(_, _, f) => f.atom_sides(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.atom_sides(out)),
            Formula::Implies(a, b) => {
                a.atom_sides(out);
                b.atom_sides(out);
            }
        }
    }

    fn replace_term(&self, target: &Term, with: &Term) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Eq(a, b) => Formula::Eq(a.replace(target, with), b.replace(target, with)),
            Formula::Not(f) => Formula::not(f.replace_term(target, with)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.replace_term(target, with)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.replace_term(target, with)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.replace_term(target, with), b.replace_term(target, with)),
            Formula::Quant(q, v, f) => Formula::Quant(*q, v.clone(), Box::new(f.replace_term(target, with))),
        }
    }
}

fn collect_in_order(t: &Term, out: &mut Vec<String>) {
    match t {
        Term::Var(v) => {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        Term::Zero => {}
        Term::Neg(a) => collect_in_order(a, out),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
            collect_in_order(a, out);
            collect_in_order(b, out);
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Zero => write!(f, "0"),
            Term::Add(a, b) => write!(f, "(add {a} {b})"),
            Term::Sub(a, b) => write!(f, "(sub {a} {b})"),
            Term::Neg(a) => write!(f, "(neg {a})"),
            Term::Mul(a, b) => write!(f, "(mul {a} {b})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, fs: &[Formula]| {
            write!(f, "({head}")?;
            for x in fs {
                write!(f, " {x}")?;
            }
            write!(f, ")")
        };
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Eq(a, b) => write!(f, "(eq {a} {b})"),
            Formula::Not(x) => write!(f, "(not {x})"),
            Formula::And(fs) => list(f, "and", fs),
            Formula::Or(fs) => list(f, "or", fs),
            Formula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            Formula::Quant(Quantifier::Exists, v, x) => write!(f, "(exists {v} {x})"),
            Formula::Quant(Quantifier::Forall, v, x) => write!(f, "(forall {v} {x})"),
        }
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Vec<(Token, usize)> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut word = String::new();
        let flush = |word: &mut String, out: &mut Vec<(Token, usize)>| {
            if !word.is_empty() {
                out.push((Token::Atom(std::mem::take(word)), n + 1));
            }
        };
        for ch in line.chars() {
            match ch {
                '(' | ')' => {
                    flush(&mut word, &mut out);
                    out.push((if ch == '(' { Token::Open } else { Token::Close }, n + 1));
                }
                c if c.is_whitespace() => flush(&mut word, &mut out),
                c => word.push(c),
            }
        }
        flush(&mut word, &mut out);
    }
    out
}

const KEYWORDS: &[&str] =
    &["eq", "not", "and", "or", "implies", "exists", "forall", "true", "false", "add", "sub", "neg", "mul"];

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.tokens.get(self.pos).or(self.tokens.last()).map_or(1, |t| t.1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.line(), message: message.into() })
    }

    fn next(&mut self) -> Result<Token> {
        match self.tokens.get(self.pos) {
            Some((t, _)) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => self.err("unexpected end of formula"),
        }
    }

    fn expect_close(&mut self) -> Result<()> {
        match self.next()? {
            Token::Close => Ok(()),
            _ => {
                self.pos -= 1;
                self.err("expected ')'")
            }
        }
    }

    fn peek_close(&self) -> bool {
        matches!(self.tokens.get(self.pos), Some((Token::Close, _)))
    }

    fn variable(&mut self) -> Result<String> {
        match self.next()? {
            Token::Atom(a) if is_identifier(&a) => Ok(a),
            Token::Atom(a) => self.err(format!("'{a}' is not a variable name")),
            _ => self.err("expected a variable name"),
        }
    }

    fn variables(&mut self) -> Result<Vec<String>> {
        if matches!(self.tokens.get(self.pos), Some((Token::Open, _))) {
            self.pos += 1;
            let mut vs = Vec::new();
            while !self.peek_close() {
                vs.push(self.variable()?);
            }
            self.expect_close()?;
            if vs.is_empty() {
                return self.err("empty variable list");
            }
            Ok(vs)
        } else {
            Ok(vec![self.variable()?])
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.next()? {
            Token::Atom(a) if a == "true" => Ok(Formula::True),
            Token::Atom(a) if a == "false" => Ok(Formula::False),
            Token::Atom(a) => self.err(format!("expected a formula, found '{a}'")),
            Token::Close => self.err("unexpected ')'"),
            Token::Open => {
                let head = match self.next()? {
                    Token::Atom(h) => h,
                    _ => return self.err("expected a connective"),
                };
                let f = match head.as_str() {
                    "eq" => {
                        let a = self.term()?;
                        Formula::Eq(a, self.term()?)
                    }
                    "not" => Formula::not(self.formula()?),
                    "and" | "or" => {
                        let mut fs = Vec::new();
                        while !self.peek_close() {
                            fs.push(self.formula()?);
                        }
                        if head == "and" {
                            Formula::And(fs)
                        } else {
                            Formula::Or(fs)
                        }
                    }
                    "implies" => {
                        let a = self.formula()?;
                        Formula::implies(a, self.formula()?)
                    }
                    "exists" | "forall" => {
                        let vs = self.variables()?;
                        let body = self.formula()?;
                        if head == "exists" {
                            Formula::exists(&vs, body)
                        } else {
                            Formula::forall(&vs, body)
                        }
                    }
                    other => return self.err(format!("unknown connective '{other}'")),
                };
                self.expect_close()?;
                Ok(f)
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.next()? {
            Token::Atom(a) if a == "0" => Ok(Term::Zero),
            Token::Atom(a) if is_identifier(&a) => Ok(Term::Var(a)),
            Token::Atom(a) => self.err(format!("'{a}' is not a term")),
            Token::Close => self.err("unexpected ')'"),
            Token::Open => {
                let head = match self.next()? {
                    Token::Atom(h) => h,
                    _ => return self.err("expected an operation"),
                };
                let t = match head.as_str() {
                    "add" => {
                        let mut ts = vec![self.term()?, self.term()?];
                        while !self.peek_close() {
                            ts.push(self.term()?);
                        }
                        Term::sum(ts)
                    }
                    "sub" => {
                        let a = self.term()?;
                        Term::Sub(Box::new(a), Box::new(self.term()?))
                    }
                    "neg" => Term::Neg(Box::new(self.term()?)),
                    "mul" => {
                        let a = self.term()?;
                        Term::mul(a, self.term()?)
                    }
                    other => return self.err(format!("unknown operation '{other}'")),
                };
                self.expect_close()?;
                Ok(t)
            }
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&s)
}

/// Parse the fully parenthesized prefix syntax, e.g.
/// `(exists x1 (eq x (mul x1 x1)))`. `#` starts a comment.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser { tokens: tokenize(text), pos: 0 };
    let f = p.formula()?;
    if p.pos != p.tokens.len() {
        return p.err("trailing input after formula");
    }
    Ok(f)
}

// --------------------------------------------------------------- builtins

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Theta,
    Phi,
    Psi,
}

impl std::str::FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(Builtin::Theta),
            "phi" => Ok(Builtin::Phi),
            "psi" => Ok(Builtin::Psi),
            other => Err(Error::Parse { line: 1, message: format!("unknown builtin '{other}'") }),
        }
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn products(xs: &[String], ys: &[String]) -> Term {
    Term::sum(xs.iter().zip(ys).map(|(x, y)| Term::mul(Term::var(x), Term::var(y))))
}

fn interleave(xs: &[String], ys: &[String]) -> Vec<String> {
    xs.iter().zip(ys).flat_map(|(x, y)| [x.clone(), y.clone()]).collect()
}

/// `Θ_n(x) = ∃x₁y₁…x_ny_n (x = Σ x_i y_i)`.
pub fn theta(n: usize) -> Formula {
    let (xs, ys) = (names("x", n), names("y", n));
    Formula::exists(&interleave(&xs, &ys), Formula::eq(Term::var("x"), products(&xs, &ys)))
}

/// `Φ_n = ∀x₁y₁…x_{n+1}y_{n+1} ∃s₁t₁…s_nt_n (Σ x_i y_i = Σ s_i t_i)`.
pub fn phi(n: usize) -> Formula {
    let (xs, ys) = (names("x", n + 1), names("y", n + 1));
    let (ss, ts) = (names("s", n), names("t", n));
    Formula::forall(
        &interleave(&xs, &ys),
        Formula::exists(&interleave(&ss, &ts), Formula::eq(products(&xs, &ys), products(&ss, &ts))),
    )
}

/// `ψ_n(x₁…x_n)`: the classes of the `x_i` modulo `Ann` form a complete
/// system for the product map, i.e. any `z` killing every `x_i` on both
/// sides lies in `Ann`.
pub fn psi(n: usize) -> Formula {
    let xs = names("x", n);
    let z = || Term::var("z");
    let zero = || Term::Zero;
    let kills: Vec<Formula> = xs
        .iter()
        .flat_map(|x| {
            [
                Formula::eq(Term::mul(z(), Term::var(x)), zero()),
                Formula::eq(Term::mul(Term::var(x), z()), zero()),
            ]
        })
        .collect();
    let in_ann = Formula::forall(
        &["w".to_string()],
        Formula::And(vec![
            Formula::eq(Term::mul(z(), Term::var("w")), zero()),
            Formula::eq(Term::mul(Term::var("w"), z()), zero()),
        ]),
    );
    Formula::forall(&["z".to_string()], Formula::implies(Formula::And(kills), in_ann))
}

pub fn builtin(which: Builtin, n: usize) -> Formula {
    match which {
        Builtin::Theta => theta(n),
        Builtin::Phi => phi(n),
        Builtin::Psi => psi(n),
    }
}

// ------------------------------------------------------------- evaluation

/// A finite ring with its carrier enumerated; elements are indices.
pub struct Model {
    elements: Vec<Vec<Int>>,
    index: HashMap<Vec<Int>, usize>,
    ring: FdzRing,
    tables: Option<(Vec<u16>, Vec<u16>)>,
    neg: Vec<usize>,
    zero: usize,
}

impl Model {
    pub fn new(ring: &FdzRing) -> Result<Model> {
        if ring.is_infinite() {
            return Err(Error::InfiniteRing);
        }
        let order = ring.order().expect("finite");
        if order > Int::from(CARRIER_LIMIT) {
            return Err(Error::CarrierTooLarge { size: order.to_string(), limit: CARRIER_LIMIT });
        }
        let elements = ring.elements()?;
        let index: HashMap<Vec<Int>, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elements.len();
        let lookup = |v: Vec<Int>| index[&ring.reduce(&v)];
        let neg = elements.iter().map(|e| lookup(ring.neg(e))).collect();
        let zero = lookup(ring.zero());
        let tables = (n <= TABLE_LIMIT).then(|| {
            let mut add = vec![0u16; n * n];
            let mut mul = vec![0u16; n * n];
            for i in 0..n {
                for j in 0..n {
                    add[i * n + j] = lookup(ring.add(&elements[i], &elements[j])) as u16;
                    mul[i * n + j] = lookup(ring.mul(&elements[i], &elements[j])) as u16;
                }
            }
            (add, mul)
        });
        Ok(Model { elements, index, ring: ring.clone(), tables, neg, zero })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &[Int] {
        &self.elements[i]
    }

    pub fn index_of(&self, x: &[Int]) -> Option<usize> {
        self.index.get(&self.ring.reduce(x)).copied()
    }

    fn add(&self, i: usize, j: usize) -> usize {
        match &self.tables {
            Some((add, _)) => add[i * self.len() + j] as usize,
            None => self.index[&self.ring.add(&self.elements[i], &self.elements[j])],
        }
    }

    fn mul(&self, i: usize, j: usize) -> usize {
        match &self.tables {
            Some((_, mul)) => mul[i * self.len() + j] as usize,
            None => self.index[&self.ring.mul(&self.elements[i], &self.elements[j])],
        }
    }

    /// Truth of `f` under an assignment of its free variables.
    pub fn evaluate(&self, f: &Formula, assignment: &[(String, Vec<Int>)]) -> Result<bool> {
        let mut scope = Vec::new();
        let mut env = Vec::new();
        for v in f.free_vars() {
            let Some((_, value)) = assignment.iter().find(|(name, _)| *name == v) else {
                return Err(Error::UnassignedVariable(v));
            };
            let idx = self
                .index_of(value)
                .ok_or_else(|| Error::Dimension(format!("value for '{v}' has the wrong length")))?;
            scope.push(v);
            env.push(idx);
        }
        let mut compiler = Compiler { model: self, scope, fresh: 0 };
        let program = compiler.formula(f);
        Ok(self.run(&program, &mut env))
    }

    /// `{a : f(a)}` for a formula with exactly one free variable.
    pub fn defined_set(&self, f: &Formula) -> Result<Vec<Vec<Int>>> {
        let free = f.free_vars();
        if free.len() != 1 {
            return Err(Error::Arity { expected: 1, found: free.len() });
        }
        let mut compiler = Compiler { model: self, scope: free, fresh: 0 };
        let program = compiler.formula(f);
        let mut out = Vec::new();
        let mut env = vec![0];
        for i in 0..self.len() {
            env[0] = i;
            if self.run(&program, &mut env) {
                out.push(self.elements[i].clone());
            }
        }
        Ok(out)
    }

    fn term(&self, t: &CTerm, env: &[usize]) -> usize {
        match t {
            CTerm::Slot(s) => env[*s],
            CTerm::Zero => self.zero,
            CTerm::Add(a, b) => self.add(self.term(a, env), self.term(b, env)),
            CTerm::Neg(a) => self.neg[self.term(a, env)],
            CTerm::Mul(a, b) => self.mul(self.term(a, env), self.term(b, env)),
        }
    }

    fn run(&self, f: &CFormula, env: &mut Vec<usize>) -> bool {
        match f {
            CFormula::Const(b) => *b,
            CFormula::Eq(a, b) => self.term(a, env) == self.term(b, env),
            CFormula::Not(x) => !self.run(x, env),
            CFormula::And(fs) => fs.iter().all(|x| self.run(x, env)),
            CFormula::Or(fs) => fs.iter().any(|x| self.run(x, env)),
            CFormula::Implies(a, b) => !self.run(a, env) || self.run(b, env),
            CFormula::Quant(q, body) => {
                env.push(0);
                let want = *q == Quantifier::Exists;
                let mut result = !want;
                for i in 0..self.len() {
                    *env.last_mut().unwrap() = i;
                    if self.run(body, env) == want {
                        result = want;
                        break;
                    }
                }
                env.pop();
                result
            }
            CFormula::OverValues { quantifier, groups, constants, body } => {
                let values = self.value_set(groups, constants, env);
                let want = *quantifier == Quantifier::Exists;
                env.push(0);
                let mut result = !want;
                for (i, hit) in values.iter().enumerate() {
                    if !hit {
                        continue;
                    }
                    *env.last_mut().unwrap() = i;
                    if self.run(body, env) == want {
                        result = want;
                        break;
                    }
                }
                env.pop();
                result
            }
        }
    }

    /// Set of values of `Σ constants + Σ_groups Σ summands` as the group
    /// variables range over the carrier.
    fn value_set(&self, groups: &[SumGroup], constants: &[CTerm], env: &mut Vec<usize>) -> Vec<bool> {
        let n = self.len();
        let base = constants.iter().fold(self.zero, |acc, t| self.add(acc, self.term(t, env)));
        let mut reach = vec![false; n];
        reach[base] = true;
        for g in groups {
            let mut hits = vec![false; n];
            let start = env.len();
            env.extend(std::iter::repeat(0).take(g.width));
            loop {
                let v = g.summands.iter().fold(self.zero, |acc, t| self.add(acc, self.term(t, env)));
                hits[v] = true;
                // odometer over the group's slots
                let mut k = start;
                loop {
                    if k == env.len() {
                        break;
                    }
                    env[k] += 1;
                    if env[k] < n {
                        break;
                    }
                    env[k] = 0;
                    k += 1;
                }
                if k == env.len() {
                    break;
                }
            }
            env.truncate(start);
            let mut next = vec![false; n];
            for (a, _) in reach.iter().enumerate().filter(|(_, r)| **r) {
                for (b, _) in hits.iter().enumerate().filter(|(_, h)| **h) {
                    next[self.add(a, b)] = true;
                }
            }
            reach = next;
        }
        reach
    }
}

pub fn evaluate(ring: &FdzRing, f: &Formula, assignment: &[(String, Vec<Int>)]) -> Result<bool> {
    Model::new(ring)?.evaluate(f, assignment)
}

pub fn defined_set(ring: &FdzRing, f: &Formula) -> Result<Vec<Vec<Int>>> {
    Model::new(ring)?.defined_set(f)
}

// ---------------------------------------------------------------- compile

#[derive(Debug)]
enum CTerm {
    Slot(usize),
    Zero,
    Add(Box<CTerm>, Box<CTerm>),
    Neg(Box<CTerm>),
    Mul(Box<CTerm>, Box<CTerm>),
}

/// Summands sharing quantified variables; their slots are pushed on top of
/// the environment while the group is enumerated.
#[derive(Debug)]
struct SumGroup {
    width: usize,
    summands: Vec<CTerm>,
}

#[derive(Debug)]
enum CFormula {
    Const(bool),
    Eq(CTerm, CTerm),
    Not(Box<CFormula>),
    And(Vec<CFormula>),
    Or(Vec<CFormula>),
    Implies(Box<CFormula>, Box<CFormula>),
    /// Quantifies the next slot over the carrier.
    Quant(Quantifier, Box<CFormula>),
    /// Quantifies the next slot over the values of a sum term.
    OverValues { quantifier: Quantifier, groups: Vec<SumGroup>, constants: Vec<CTerm>, body: Box<CFormula> },
}

struct Compiler<'m> {
    model: &'m Model,
    /// Variable names by slot; the innermost binding of a name wins.
    scope: Vec<String>,
    fresh: usize,
}

impl Compiler<'_> {
    fn slot(&self, v: &str) -> usize {
        self.scope.iter().rposition(|s| s == v).expect("free variables are bound before compiling")
    }

    fn term(&self, t: &Term) -> CTerm {
        match t {
            Term::Var(v) => CTerm::Slot(self.slot(v)),
            Term::Zero => CTerm::Zero,
            Term::Add(a, b) => CTerm::Add(Box::new(self.term(a)), Box::new(self.term(b))),
            Term::Sub(a, b) => CTerm::Add(Box::new(self.term(a)), Box::new(CTerm::Neg(Box::new(self.term(b))))),
            Term::Neg(a) => CTerm::Neg(Box::new(self.term(a))),
            Term::Mul(a, b) => CTerm::Mul(Box::new(self.term(a)), Box::new(self.term(b))),
        }
    }

    fn formula(&mut self, f: &Formula) -> CFormula {
        match f {
            Formula::True => CFormula::Const(true),
            Formula::False => CFormula::Const(false),
            Formula::Eq(a, b) => CFormula::Eq(self.term(a), self.term(b)),
            Formula::Not(x) => CFormula::Not(Box::new(self.formula(x))),
            Formula::And(fs) => CFormula::And(fs.iter().map(|x| self.formula(x)).collect()),
            Formula::Or(fs) => CFormula::Or(fs.iter().map(|x| self.formula(x)).collect()),
            Formula::Implies(a, b) => CFormula::Implies(Box::new(self.formula(a)), Box::new(self.formula(b))),
            Formula::Quant(q, _, _) => {
                let (vars, body) = quantifier_block(f, *q);
                if let Some(c) = self.over_values(*q, &vars, body) {
                    return c;
                }
                let Formula::Quant(_, v, inner) = f else { unreachable!() };
                self.scope.push(v.clone());
                let body = self.formula(inner);
                self.scope.pop();
                CFormula::Quant(*q, Box::new(body))
            }
        }
    }

    /// Rewrite `Q v̄ B` as a quantifier over the values of the single sum
    /// term through which `B` sees `v̄`, when there is one.
    fn over_values(&mut self, q: Quantifier, vars: &[String], body: &Formula) -> Option<CFormula> {
        let block: BTreeSet<String> = vars.iter().cloned().collect();
        if block.len() != vars.len() {
            return None;
        }
        let mut sides = Vec::new();
        body.atom_sides(&mut sides);
        let touching: Vec<&Term> = sides.iter().filter(|t| !t.vars().is_disjoint(&block)).collect();
        let target = (*touching.first()?).clone();
        if touching.iter().any(|t| **t != target) {
            return None;
        }
        let mut rebound = BTreeSet::new();
        body.bound_names(&mut rebound);
        if !rebound.is_disjoint(&target.vars()) {
            return None;
        }
        let summands = target.summands();
        // Group summands connected through shared block variables.
        let mut groups: Vec<(BTreeSet<String>, Vec<Term>)> = Vec::new();
        let mut constants = Vec::new();
        for s in summands {
            let mine: BTreeSet<String> = s.vars().intersection(&block).cloned().collect();
            if mine.is_empty() {
                constants.push(s);
                continue;
            }
            let mut merged = (mine, vec![s]);
            groups.retain(|g| {
                if g.0.is_disjoint(&merged.0) {
                    true
                } else {
                    merged.0.extend(g.0.iter().cloned());
                    merged.1.extend(g.1.iter().cloned());
                    false
                }
            });
            groups.push(merged);
        }
        let n = self.model.len() as u64;
        for (gv, _) in &groups {
            let cost = (0..gv.len()).try_fold(1u64, |acc, _| acc.checked_mul(n).filter(|&c| c <= GROUP_LIMIT));
            cost?;
        }
        let constants = constants.iter().map(|t| self.term(t)).collect();
        let groups = groups
            .into_iter()
            .map(|(gv, ts)| {
                let width = gv.len();
                let depth = self.scope.len();
                self.scope.extend(gv);
                let summands = ts.iter().map(|t| self.term(t)).collect();
                self.scope.truncate(depth);
                SumGroup { width, summands }
            })
            .collect();
        self.fresh += 1;
        let placeholder = format!("#{}", self.fresh);
        let body = body.replace_term(&target, &Term::Var(placeholder.clone()));
        self.scope.push(placeholder);
        let body = self.formula(&body);
        self.scope.pop();
        Some(CFormula::OverValues { quantifier: q, groups, constants, body: Box::new(body) })
    }
}

/// Maximal run of quantifiers of one kind.
fn quantifier_block(f: &Formula, q: Quantifier) -> (Vec<String>, &Formula) {
    let mut vars = Vec::new();
    let mut cur = f;
    while let Formula::Quant(k, v, inner) = cur {
        if *k != q {
            break;
        }
        vars.push(v.clone());
        cur = inner;
    }
    (vars, cur)
}
