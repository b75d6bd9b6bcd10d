//! Sparse multivariate polynomials over an exact field.
//!
//! The same type models the ring `R = k[x1..xN]` (lowercase variables) and
//! the dual space `S = k[X1..XN]` (uppercase variables); [`VarRole`] tells
//! them apart. `R` acts on `S` by [`contract`].
//!
//! Terms are kept in the crate-wide canonical order: total degree ascending,
//! then lexicographic with `x1 > x2 > …` (so `x1^2, x1*x2, x2^2`). Every
//! matrix in the crate indexes monomials in this order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use thiserror::Error;

use crate::field::{FieldElem, FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live in different contexts ({0} vs {1})")]
    ContextMismatch(String, String),
    #[error("syntax error at byte {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
    #[error("mixed variable case at byte {offset}: use only x (ring) or only X (dual)")]
    MixedCase { offset: usize },
    #[error("variable index 0 at byte {offset}: variables are 1-indexed")]
    IndexZero { offset: usize },
    #[error("variable x{index} exceeds --nvars {n_vars}")]
    IndexTooLarge { index: usize, n_vars: usize },
    #[error("{0} is not divisible by the monomial")]
    NotDivisible(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarRole {
    /// `R = k[x1..xN]`, the ring that acts.
    Ring,
    /// `S = k[X1..XN]`, the module acted on.
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarContext {
    pub n_vars: usize,
    pub role: VarRole,
}

impl VarContext {
    pub fn new(n_vars: usize, role: VarRole) -> Self {
        assert!(n_vars >= 1, "a polynomial ring needs at least one variable");
        VarContext { n_vars, role }
    }

    pub fn ring(n_vars: usize) -> Self {
        Self::new(n_vars, VarRole::Ring)
    }

    pub fn dual(n_vars: usize) -> Self {
        Self::new(n_vars, VarRole::Dual)
    }

    fn letter(&self) -> char {
        match self.role {
            VarRole::Ring => 'x',
            VarRole::Dual => 'X',
        }
    }
}

impl fmt::Display for VarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}1..{}{}", self.letter(), self.letter(), self.n_vars)
    }
}

/// Exponent tuple of a monomial. Ordered canonically (see module docs).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exps: Vec<u32>) -> Self {
        ExponentVector(exps)
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn unit(n: usize, var: usize) -> Self {
        let mut v = vec![0; n];
        v[var] = 1;
        ExponentVector(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// Number of variables with a nonzero exponent.
    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|&&e| e > 0).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` if componentwise `self >= other`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.len(), other.len());
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(ExponentVector(out))
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn scale(&self, k: u32) -> Self {
        ExponentVector(self.0.iter().map(|e| e * k).collect())
    }

    /// Componentwise minimum (the exponent of the monomial gcd).
    pub fn meet(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// Reindex: output position `i` takes input position `perm[i]`.
    pub fn gather(&self, perm: &[usize]) -> Self {
        ExponentVector(perm.iter().map(|&p| self.0[p]).collect())
    }

    /// Inverse of [`gather`](Self::gather): input position `i` goes to output position `perm[i]`.
    pub fn scatter(&self, perm: &[usize], n: usize) -> Self {
        let mut v = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            v[p] = self.0[i];
        }
        ExponentVector(v)
    }

    /// Append exponents for additional variables.
    pub fn extend(&self, extra: &[u32]) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(extra);
        ExponentVector(v)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

/// All exponent vectors of total degree `d` in `n` variables, in canonical order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<ExponentVector> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fill(&mut cur, 0, d, &mut out);
    out
}

fn fill(cur: &mut [u32], pos: usize, left: u32, out: &mut Vec<ExponentVector>) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(ExponentVector(cur.to_vec()));
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        fill(cur, pos + 1, left - e, out);
    }
    cur[pos] = 0;
}

/// Index of every monomial of degree `<= max_degree`, in canonical order.
/// This is the coordinate system for truncated ideals.
#[derive(Debug, Clone)]
pub struct MonomialIndex {
    n_vars: usize,
    max_degree: u32,
    monomials: Vec<ExponentVector>,
    positions: HashMap<ExponentVector, usize>,
    degree_starts: Vec<usize>,
}

impl MonomialIndex {
    pub fn new(n_vars: usize, max_degree: u32) -> Self {
        let mut monomials = Vec::new();
        let mut degree_starts = Vec::new();
        for d in 0..=max_degree {
            degree_starts.push(monomials.len());
            monomials.extend(monomials_of_degree(n_vars, d));
        }
        degree_starts.push(monomials.len());
        let positions = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MonomialIndex {
            n_vars,
            max_degree,
            monomials,
            positions,
            degree_starts,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &ExponentVector {
        &self.monomials[i]
    }

    pub fn monomials(&self) -> &[ExponentVector] {
        &self.monomials
    }

    pub fn position(&self, e: &ExponentVector) -> Option<usize> {
        self.positions.get(e).copied()
    }

    /// Index range of the monomials of exactly degree `d`.
    pub fn degree_range(&self, d: u32) -> std::ops::Range<usize> {
        let d = d as usize;
        self.degree_starts[d]..self.degree_starts[d + 1]
    }

    /// Position of `x_var * monomial(i)`, or `None` when it leaves the truncation.
    pub fn shift(&self, i: usize, var: usize) -> Option<usize> {
        let mut e = self.monomials[i].clone();
        e.0[var] += 1;
        self.position(&e)
    }
}

/// A sparse polynomial. No stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    ctx: VarContext,
    field: FieldSpec,
    terms: BTreeMap<ExponentVector, FieldElem>,
}

impl Poly {
    pub fn zero(ctx: VarContext, field: FieldSpec) -> Self {
        Poly {
            ctx,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: VarContext, c: FieldElem) -> Self {
        Self::monomial(ctx, ExponentVector::zero(ctx.n_vars), c)
    }

    pub fn monomial(ctx: VarContext, e: ExponentVector, c: FieldElem) -> Self {
        assert_eq!(e.len(), ctx.n_vars);
        let field = c.spec();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly { ctx, field, terms }
    }

    /// The variable `x_{var+1}` (0-indexed argument).
    pub fn var(ctx: VarContext, field: FieldSpec, var: usize) -> Self {
        Self::monomial(ctx, ExponentVector::unit(ctx.n_vars, var), field.one())
    }

    /// Sum of terms; repeated exponents are combined and zeros dropped.
    pub fn from_terms<I>(ctx: VarContext, field: FieldSpec, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, FieldElem)>,
    {
        let mut p = Poly::zero(ctx, field);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn context(&self) -> VarContext {
        self.ctx
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n_vars(&self) -> usize {
        self.ctx.n_vars
    }

    pub fn role(&self) -> VarRole {
        self.ctx.role
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Option<&FieldElem> {
        self.terms.get(e)
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.degree()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.degree()).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// First term in canonical order.
    pub fn leading_term(&self) -> Option<(&ExponentVector, &FieldElem)> {
        self.terms.iter().next()
    }

    /// Scaled so the first term in canonical order has coefficient 1.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().expect("stored coefficients are nonzero");
                self.scale(&inv)
            }
        }
    }

    pub fn add_term(&mut self, e: ExponentVector, c: &FieldElem) {
        assert_eq!(e.len(), self.ctx.n_vars, "exponent length must match the context");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = &*old + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.ctx != other.ctx || self.field != other.field {
            return Err(PolyError::ContextMismatch(
                format!("{} over {}", self.ctx, self.field),
                format!("{} over {}", other.ctx, other.field),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &-c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut out = Poly::zero(self.ctx, self.field);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        if c.is_zero() {
            return Poly::zero(self.ctx, self.field);
        }
        Poly {
            ctx: self.ctx,
            field: self.field,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, e: &ExponentVector) -> Self {
        Poly {
            ctx: self.ctx,
            field: self.field,
            terms: self.terms.iter().map(|(t, v)| (t.add(e), v.clone())).collect(),
        }
    }

    /// Exact division by a monomial; fails unless every term is divisible.
    pub fn div_monomial(&self, e: &ExponentVector) -> Result<Self, PolyError> {
        let mut terms = BTreeMap::new();
        for (t, v) in &self.terms {
            let q = t
                .checked_sub(e)
                .ok_or_else(|| PolyError::NotDivisible(format_poly(self)))?;
            terms.insert(q, v.clone());
        }
        Ok(Poly {
            ctx: self.ctx,
            field: self.field,
            terms,
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::constant(self.ctx, self.field.one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Same polynomial in another role (`x_i <-> X_i`).
    pub fn with_role(&self, role: VarRole) -> Self {
        Poly {
            ctx: VarContext::new(self.ctx.n_vars, role),
            field: self.field,
            terms: self.terms.clone(),
        }
    }

    /// Rename variables: internal variable `i` becomes variable `perm[i]` of an
    /// `n`-variable context.
    pub fn scatter_vars(&self, perm: &[usize], n: usize) -> Self {
        let ctx = VarContext::new(n, self.ctx.role);
        Poly::from_terms(
            ctx,
            self.field,
            self.terms.iter().map(|(e, c)| (e.scatter(perm, n), c.clone())),
        )
    }

    /// View in a context with `extra` more variables appended (all at exponent 0).
    pub fn embed(&self, extra: usize) -> Self {
        let zeros = vec![0; extra];
        let ctx = VarContext::new(self.ctx.n_vars + extra, self.ctx.role);
        Poly {
            ctx,
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (e.extend(&zeros), c.clone())).collect(),
        }
    }
}

macro_rules! forward_poly_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs)
                    .expect("polynomial operands must share a context")
            }
        }
    };
}

forward_poly_op!(Add, add, try_add);
forward_poly_op!(Sub, sub, try_sub);
forward_poly_op!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-self.field.one())
    }
}

/// Contraction of exponent vectors: `x^a ∘ X^b = X^(b-a)` when `a <= b`.
pub fn contract_monomial(a: &ExponentVector, b: &ExponentVector) -> Option<ExponentVector> {
    b.checked_sub(a)
}

/// The action of `f ∈ R` on `big_f ∈ S`: bilinear extension of the monomial
/// rule `x^a ∘ X^b = X^(b-a)` if `b >= a` componentwise, else `0`. No
/// multinomial factors appear, so this is valid in every characteristic.
pub fn contract(f: &Poly, big_f: &Poly) -> Result<Poly, PolyError> {
    if f.role() != VarRole::Ring
        || big_f.role() != VarRole::Dual
        || f.n_vars() != big_f.n_vars()
        || f.field != big_f.field
    {
        return Err(PolyError::ContextMismatch(
            format!("{} over {}", f.ctx, f.field),
            format!("{} over {}", big_f.ctx, big_f.field),
        ));
    }
    let mut out = Poly::zero(big_f.ctx, big_f.field);
    for (a, ca) in &f.terms {
        for (b, cb) in &big_f.terms {
            if let Some(e) = contract_monomial(a, b) {
                out.add_term(e, &(ca * cb));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Text form

/// Canonical text: terms in canonical order, `*` between factors,
/// `0` for the zero polynomial.
pub fn format_poly(f: &Poly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let letter = f.ctx.letter();
    let mut out = String::new();
    for (k, (e, c)) in f.terms.iter().enumerate() {
        let negative = c.is_negative();
        let mag = if negative { -c } else { c.clone() };
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mut factors = Vec::new();
        for (i, &x) in e.exps().iter().enumerate() {
            match x {
                0 => {}
                1 => factors.push(format!("{letter}{}", i + 1)),
                _ => factors.push(format!("{letter}{}^{x}", i + 1)),
            }
        }
        if factors.is_empty() {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self))
    }
}

/// Options for [`parse_poly_with`].
#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    /// Number of variables; inferred from the largest index when `None`.
    pub n_vars: Option<usize>,
    /// Role used when the text contains no variables at all (e.g. `"0"`).
    pub default_role: VarRole,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            n_vars: None,
            default_role: VarRole::Dual,
        }
    }
}

/// Parse with default options.
pub fn parse_poly(text: &str, field: FieldSpec) -> Result<Poly, PolyError> {
    parse_poly_with(text, field, ParseOptions::default())
}

/// Grammar:
///
/// ```text
/// poly   := ["+"|"-"] term (("+"|"-") term)*
/// term   := coeff | coeff? factor ("*"? factor)*
/// factor := ("x"|"X") index ("^" exponent)?
/// coeff  := integer | integer "/" integer
/// ```
///
/// Whitespace is insignificant between tokens.
pub fn parse_poly_with(text: &str, field: FieldSpec, opts: ParseOptions) -> Result<Poly, PolyError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        role: None,
    };
    let raw = parser.parse_poly(field)?;
    let max_index = raw
        .iter()
        .flat_map(|(factors, _)| factors.iter().map(|f| f.0))
        .max()
        .unwrap_or(0);
    let n_vars = match opts.n_vars {
        Some(n) => {
            if max_index > n {
                return Err(PolyError::IndexTooLarge {
                    index: max_index,
                    n_vars: n,
                });
            }
            n
        }
        None => max_index.max(1),
    };
    let role = parser.role.unwrap_or(opts.default_role);
    let ctx = VarContext::new(n_vars, role);
    let mut p = Poly::zero(ctx, field);
    for (factors, c) in raw {
        let mut e = vec![0u32; n_vars];
        for (idx, pow) in factors {
            e[idx - 1] += pow;
        }
        p.add_term(ExponentVector(e), &c);
    }
    Ok(p)
}

type RawTerm = (Vec<(usize, u32)>, FieldElem);

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    role: Option<VarRole>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::SyntaxError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse as an integer"))
    }

    fn small_integer(&mut self, what: &str) -> Result<u64, PolyError> {
        let start = self.pos;
        let n = self.integer()?;
        u64::try_from(&n).map_err(|_| PolyError::SyntaxError {
            offset: start,
            message: format!("{what} too large"),
        })
    }

    fn parse_poly(&mut self, field: FieldSpec) -> Result<Vec<RawTerm>, PolyError> {
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            Some(_) => false,
            None => return self.err("empty polynomial"),
        };
        loop {
            let (factors, mut c) = self.parse_term(field)?;
            if negate {
                c = -c;
            }
            terms.push((factors, c));
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                Some(ch) => return self.err(format!("unexpected `{}`", ch as char)),
            }
        }
        Ok(terms)
    }

    fn parse_term(&mut self, field: FieldSpec) -> Result<RawTerm, PolyError> {
        let mut coeff = field.one();
        let mut has_coeff = false;
        if matches!(self.peek(), Some(b'0'..=b'9')) {
            let num = self.integer()?;
            let mut den = BigInt::from(1);
            if self.peek() == Some(b'/') {
                self.pos += 1;
                let at = self.pos;
                den = self.integer()?;
                if den == BigInt::from(0) {
                    return Err(PolyError::SyntaxError {
                        offset: at,
                        message: "zero denominator".into(),
                    });
                }
            }
            coeff = field.fraction(&num, &den)?;
            has_coeff = true;
        }
        let mut factors = Vec::new();
        loop {
            match self.peek() {
                Some(b'*') => {
                    if !has_coeff && factors.is_empty() {
                        return self.err("`*` before any factor");
                    }
                    self.pos += 1;
                    match self.peek() {
                        Some(b'x' | b'X') => factors.push(self.parse_factor()?),
                        _ => return self.err("expected a variable after `*`"),
                    }
                }
                Some(b'x' | b'X') => factors.push(self.parse_factor()?),
                _ => break,
            }
        }
        if !has_coeff && factors.is_empty() {
            return self.err("expected a coefficient or variable");
        }
        Ok((factors, coeff))
    }

    fn parse_factor(&mut self) -> Result<(usize, u32), PolyError> {
        self.skip_ws();
        let at = self.pos;
        let role = if self.src[self.pos] == b'x' {
            VarRole::Ring
        } else {
            VarRole::Dual
        };
        match self.role {
            None => self.role = Some(role),
            Some(r) if r != role => return Err(PolyError::MixedCase { offset: at }),
            _ => {}
        }
        self.pos += 1;
        if !matches!(self.src.get(self.pos), Some(b'0'..=b'9')) {
            return self.err("expected a variable index");
        }
        let idx_at = self.pos;
        let index = self.small_integer("variable index")? as usize;
        if index == 0 {
            return Err(PolyError::IndexZero { offset: idx_at });
        }
        let mut pow = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e_at = self.pos;
            let e = self.small_integer("exponent")?;
            pow = u32::try_from(e).map_err(|_| PolyError::SyntaxError {
                offset: e_at,
                message: "exponent too large".into(),
            })?;
        }
        Ok((index, pow))
    }
}
