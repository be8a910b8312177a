//! Ground scalars: exact integers, rationals, prime fields and univariate
//! Laurent polynomials over a field.
//!
//! Everything downstream (graded algebra, complexes, Smith normal form) is
//! generic over these through the `Ring`/`EuclideanRing`/`Field` traits.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact literal appearing in bundle files: a Laurent polynomial with
/// rational coefficients. Plain integers and rationals are the constant case.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ScalarLit {
    /// exponent of t -> coefficient, no zero coefficients stored
    pub terms: BTreeMap<i64, BigRational>,
}

impl ScalarLit {
    pub fn zero() -> Self {
        ScalarLit { terms: BTreeMap::new() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_big(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        ScalarLit { terms }
    }

    pub fn monomial(exp: i64, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        ScalarLit { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == 0)
    }

    pub fn as_constant(&self) -> Option<&BigRational> {
        if self.is_zero() {
            None
        } else if self.is_constant() {
            self.terms.get(&0)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        ScalarLit { terms }
    }

    pub fn neg(&self) -> Self {
        ScalarLit { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Parse the canonical polynomial literal syntax:
    /// `0`, `-3`, `1/2`, `t`, `t^-1`, `3*t^2`, `1 - t`, `t^-1 + 1/2*t`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty scalar literal".into());
        }
        let mut out = ScalarLit::zero();
        let mut rest = s;
        let mut sign = 1i64;
        let mut first = true;
        loop {
            rest = rest.trim_start();
            if rest.is_empty() {
                if first {
                    return Err("empty scalar literal".into());
                }
                break;
            }
            if !first {
                if let Some(r) = rest.strip_prefix('+') {
                    sign = 1;
                    rest = r;
                } else if let Some(r) = rest.strip_prefix('-') {
                    sign = -1;
                    rest = r;
                } else {
                    return Err(format!("expected + or - before {rest:?}"));
                }
                rest = rest.trim_start();
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -1;
                rest = r;
            }
            first = false;
            // one term: [coef]['*'] ['t' ['^' exp]]
            let term_end = rest
                .find(|c: char| c == '+' || c.is_whitespace())
                .unwrap_or(rest.len());
            let term = &rest[..term_end];
            rest = &rest[term_end..];
            if term.is_empty() {
                return Err("dangling sign in scalar literal".into());
            }
            let (coef_str, var_str) = match term.find('t') {
                None => (term, ""),
                Some(0) => ("", term),
                Some(i) => {
                    let head = &term[..i];
                    let head = head.strip_suffix('*').ok_or_else(|| {
                        format!("expected * between coefficient and t in {term:?}")
                    })?;
                    (head, &term[i..])
                }
            };
            let coef: BigRational = if coef_str.is_empty() {
                BigRational::one()
            } else {
                coef_str
                    .parse()
                    .map_err(|_| format!("bad coefficient {coef_str:?}"))?
            };
            let exp: i64 = if var_str.is_empty() {
                0
            } else if var_str == "t" {
                1
            } else {
                let e = var_str
                    .strip_prefix("t^")
                    .ok_or_else(|| format!("bad power {var_str:?}"))?;
                e.parse().map_err(|_| format!("bad exponent {e:?}"))?
            };
            let signed = if sign < 0 { -coef } else { coef };
            out = ScalarLit::add(&out, &ScalarLit::monomial(exp, signed));
            sign = 1;
        }
        Ok(out)
    }
}

impl Display for ScalarLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let cs = c.to_string();
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            match *e {
                0 => write!(f, "{mag}")?,
                1 if mag == "1" => write!(f, "t")?,
                1 => write!(f, "{mag}*t")?,
                e if mag == "1" => write!(f, "t^{e}")?,
                e => write!(f, "{mag}*t^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add for ScalarLit {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ScalarLit::add(&self, &o)
    }
}
impl Sub for ScalarLit {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ScalarLit::add(&self, &o.neg())
    }
}
impl Neg for ScalarLit {
    type Output = Self;
    fn neg(self) -> Self {
        ScalarLit::neg(&self)
    }
}
impl Mul for ScalarLit {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = ScalarLit::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out = ScalarLit::add(&out, &ScalarLit::monomial(e1 + e2, c1 * c2));
            }
        }
        out
    }
}
impl Zero for ScalarLit {
    fn zero() -> Self {
        ScalarLit { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
impl One for ScalarLit {
    fn one() -> Self {
        ScalarLit::from_int(1)
    }
}

impl Ring for ScalarLit {
    const NAME: &'static str = "lit";

    fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    fn from_lit(_ctx: &ScalarCtx, lit: &ScalarLit) -> Result<Self, Error> {
        Ok(lit.clone())
    }

    fn from_i64(n: i64) -> Self {
        ScalarLit::from_int(n)
    }
}

impl EuclideanRing for ScalarLit {
    fn euclid_norm(&self) -> Option<u64> {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => Some((hi - lo) as u64),
            _ => None,
        }
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero literal");
        let mut r = self.clone();
        let mut q = ScalarLit::zero();
        let d_hi = d.max_exp().unwrap();
        let d_span = d_hi - d.min_exp().unwrap();
        let d_lc = d.terms[&d_hi].clone();
        while let (Some(r_hi), Some(r_lo)) = (r.max_exp(), r.min_exp()) {
            if (r_hi - r_lo) < d_span {
                break;
            }
            let m = ScalarLit::monomial(r_hi - d_hi, &r.terms[&r_hi] / &d_lc);
            r = ScalarLit::add(&r, &(m.clone() * d.clone()).neg());
            q = ScalarLit::add(&q, &m);
        }
        (q, r)
    }

    fn unit_normalize(&self) -> (Self, Self) {
        if self.is_zero() {
            return (Self::one(), Self::zero());
        }
        let lo = self.min_exp().unwrap();
        let trail = self.terms[&lo].clone();
        let unit = ScalarLit::monomial(lo, trail.clone());
        let inv = ScalarLit::monomial(-lo, trail.recip());
        (unit, inv * self.clone())
    }
}

/// Commutative ring with exact arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + Eq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const NAME: &'static str;

    fn is_unit(&self) -> bool;

    /// Instantiate an exact bundle literal in this ring.
    fn from_lit(ctx: &ScalarCtx, lit: &ScalarLit) -> Result<Self, Error>;

    fn from_i64(n: i64) -> Self;
}

/// Ring in which Smith normal form is available.
pub trait EuclideanRing: Ring {
    /// Euclidean size of a nonzero element; `None` for zero.
    fn euclid_norm(&self) -> Option<u64>;

    /// `self = q*d + r` with `r` strictly smaller than `d` (or zero).
    fn div_rem(&self, d: &Self) -> (Self, Self);

    /// Write `self = unit * canonical`; returns `(unit, canonical)`.
    /// Canonical forms: nonnegative integers; monic-trailing Laurent
    /// polynomials with lowest exponent 0; `1` for nonzero field elements.
    fn unit_normalize(&self) -> (Self, Self);

    /// Like `div_rem`, but with the remainder as small as the ring allows
    /// (balanced remainders over the integers). Used to control entry
    /// growth during matrix reduction.
    fn balanced_div_rem(&self, d: &Self) -> (Self, Self) {
        self.div_rem(d)
    }

    /// Exact quotient if `d` divides `self`.
    fn try_exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }
}

pub trait Field: EuclideanRing {
    fn inv(&self) -> Self;
}

/// Runtime scalar selection carried by bundle coefficient tags.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScalarCtx {
    Int,
    Rat,
    Fp(u64),
    LaurentRat,
}

impl Display for ScalarCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarCtx::Int => write!(f, "Z"),
            ScalarCtx::Rat => write!(f, "Q"),
            ScalarCtx::Fp(p) => write!(f, "F{p}"),
            ScalarCtx::LaurentRat => write!(f, "Q[t,t^-1]"),
        }
    }
}

// ---------------------------------------------------------------------------
// Integers
// ---------------------------------------------------------------------------

pub type Int = BigInt;

impl Ring for BigInt {
    const NAME: &'static str = "Z";

    fn is_unit(&self) -> bool {
        self.magnitude() == BigInt::one().magnitude()
    }

    fn from_lit(_ctx: &ScalarCtx, lit: &ScalarLit) -> Result<Self, Error> {
        if lit.is_zero() {
            return Ok(BigInt::zero());
        }
        let c = lit
            .as_constant()
            .ok_or_else(|| Error::ScalarMismatch("Laurent literal in integer context".into()))?;
        if !c.is_integer() {
            return Err(Error::ScalarMismatch(format!("non-integer literal {c} in Z context")));
        }
        Ok(c.to_integer())
    }

    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }
}

impl EuclideanRing for BigInt {
    fn euclid_norm(&self) -> Option<u64> {
        if self.is_zero() {
            None
        } else {
            // only used for pivot preference; coarse is fine
            Some(self.magnitude().bits())
        }
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let q = self / d;
        let r = self - &q * d;
        (q, r)
    }

    fn balanced_div_rem(&self, d: &Self) -> (Self, Self) {
        let (mut q, mut r) = EuclideanRing::div_rem(self, d);
        // shift the remainder into (-|d|/2, |d|/2]
        if r.magnitude() * 2u32 > *d.magnitude() {
            if r.is_negative() == d.is_negative() {
                q += 1;
                r -= d;
            } else {
                q -= 1;
                r += d;
            }
        }
        (q, r)
    }

    fn unit_normalize(&self) -> (Self, Self) {
        if self.is_negative() {
            (BigInt::from(-1), -self.clone())
        } else {
            (BigInt::one(), self.clone())
        }
    }
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

pub type Rat = BigRational;

impl Ring for BigRational {
    const NAME: &'static str = "Q";

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn from_lit(_ctx: &ScalarCtx, lit: &ScalarLit) -> Result<Self, Error> {
        if lit.is_zero() {
            return Ok(BigRational::zero());
        }
        lit.as_constant()
            .cloned()
            .ok_or_else(|| Error::ScalarMismatch("Laurent literal in rational context".into()))
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl EuclideanRing for BigRational {
    fn euclid_norm(&self) -> Option<u64> {
        if self.is_zero() {
            None
        } else {
            Some(1)
        }
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        (self / d, BigRational::zero())
    }

    fn unit_normalize(&self) -> (Self, Self) {
        if self.is_zero() {
            (BigRational::one(), BigRational::zero())
        } else {
            (self.clone(), BigRational::one())
        }
    }
}

impl Field for BigRational {
    fn inv(&self) -> Self {
        self.recip()
    }
}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

/// Prime field element. The modulus is carried per element and unified on
/// every binary operation; `p == 0` marks context-free small integers coming
/// from `zero()`/`one()`, which adopt the modulus of the other operand.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    pub v: i64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        assert!(p >= 2, "modulus must be a prime >= 2");
        Fp { v: v.rem_euclid(p as i64), p }
    }

    fn unify(a: Fp, b: Fp) -> u64 {
        match (a.p, b.p) {
            (0, p) | (p, 0) => p,
            (p, q) => {
                assert_eq!(p, q, "mixed prime-field moduli {p} and {q}");
                p
            }
        }
    }

    fn reduced(v: i64, p: u64) -> Fp {
        if p == 0 {
            Fp { v, p }
        } else {
            Fp { v: v.rem_euclid(p as i64), p }
        }
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        let p = Fp::unify(*self, *other);
        if p == 0 {
            self.v == other.v
        } else {
            self.v.rem_euclid(p as i64) == other.v.rem_euclid(p as i64)
        }
    }
}
impl Eq for Fp {}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        let p = Fp::unify(self, o);
        Fp::reduced(self.v + o.v, p)
    }
}
impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        let p = Fp::unify(self, o);
        Fp::reduced(self.v - o.v, p)
    }
}
impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        let p = Fp::unify(self, o);
        let prod = self.v as i128 * o.v as i128;
        if p == 0 {
            Fp { v: prod as i64, p }
        } else {
            Fp { v: prod.rem_euclid(p as i128) as i64, p }
        }
    }
}
impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::reduced(-self.v, self.p)
    }
}
impl Zero for Fp {
    fn zero() -> Self {
        Fp { v: 0, p: 0 }
    }
    fn is_zero(&self) -> bool {
        if self.p == 0 {
            self.v == 0
        } else {
            self.v.rem_euclid(self.p as i64) == 0
        }
    }
}
impl One for Fp {
    fn one() -> Self {
        Fp { v: 1, p: 0 }
    }
}

impl Ring for Fp {
    const NAME: &'static str = "Fp";

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn from_lit(ctx: &ScalarCtx, lit: &ScalarLit) -> Result<Self, Error> {
        let p = match ctx {
            ScalarCtx::Fp(p) => *p,
            _ => return Err(Error::ScalarMismatch("prime field literal without modulus".into())),
        };
        if lit.is_zero() {
            return Ok(Fp { v: 0, p });
        }
        let c = lit
            .as_constant()
            .ok_or_else(|| Error::ScalarMismatch("Laurent literal in prime-field context".into()))?;
        if !c.is_integer() {
            // a/b mod p
            let den = BigInt::from_lit(&ScalarCtx::Int, &ScalarLit::from_big(BigRational::from_integer(c.denom().clone())))?;
            let num = c.numer().clone();
            let d = big_mod(&den, p);
            let inv = mod_inverse(d, p).ok_or_else(|| {
                Error::ScalarMismatch(format!("denominator {den} not invertible mod {p}"))
            })?;
            let n = big_mod(&num, p);
            return Ok(Fp::new((n as i128 * inv as i128 % p as i128) as i64, p));
        }
        Ok(Fp::new(big_mod(&c.to_integer(), p), p))
    }

    fn from_i64(n: i64) -> Self {
        Fp { v: n, p: 0 }
    }
}

fn big_mod(n: &BigInt, p: u64) -> i64 {
    use num_integer::Integer;
    let (_, r) = n.div_mod_floor(&BigInt::from(p));
    i64::try_from(r).expect("residue fits i64")
}

fn mod_inverse(a: i64, p: u64) -> Option<i64> {
    let a = a.rem_euclid(p as i64);
    if a == 0 {
        return None;
    }
    // extended Euclid
    let (mut r0, mut r1) = (p as i64, a);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        None
    } else {
        Some(s0.rem_euclid(p as i64))
    }
}

impl EuclideanRing for Fp {
    fn euclid_norm(&self) -> Option<u64> {
        if self.is_zero() {
            None
        } else {
            Some(1)
        }
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        (*self * d.inv(), Fp { v: 0, p: self.p.max(d.p) })
    }

    fn unit_normalize(&self) -> (Self, Self) {
        if self.is_zero() {
            (Fp::one(), *self)
        } else {
            (*self, Fp { v: 1, p: self.p })
        }
    }
}

impl Field for Fp {
    fn inv(&self) -> Self {
        let p = self.p;
        assert!(p != 0, "cannot invert a context-free Fp element other than +-1");
        let inv = mod_inverse(self.v, p).expect("inverse of nonzero element mod prime");
        Fp { v: inv, p }
    }
}

// ---------------------------------------------------------------------------
// Laurent polynomials over a field
// ---------------------------------------------------------------------------

/// Univariate Laurent polynomial in `t` over a field. Normalized: no zero
/// coefficients stored; exponents strictly increasing (BTreeMap order).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Laurent<F: Field> {
    pub terms: BTreeMap<i64, F>,
}

pub type LaurentRat = Laurent<BigRational>;

impl<F: Field> Laurent<F> {
    pub fn monomial(exp: i64, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Laurent { terms }
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(0, c)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Dimension of `F[t,t^-1]/(self)` over `F`; `None` for the zero divisor.
    pub fn quotient_dim(&self) -> Option<u64> {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => Some((hi - lo) as u64),
            _ => None,
        }
    }

}

impl<F: Field> Zero for Laurent<F> {
    fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Field> One for Laurent<F> {
    fn one() -> Self {
        Self::constant(F::one())
    }
}

impl<F: Field> Add for Laurent<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut terms = self.terms;
        for (e, c) in o.terms {
            let cur = terms.remove(&e);
            let s = match cur {
                Some(x) => x + c,
                None => c,
            };
            if !s.is_zero() {
                terms.insert(e, s);
            }
        }
        Laurent { terms }
    }
}
impl<F: Field> Sub for Laurent<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}
impl<F: Field> Neg for Laurent<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Laurent { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}
impl<F: Field> Mul for Laurent<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut terms: BTreeMap<i64, F> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1 + e2;
                let prod = c1.clone() * c2.clone();
                let cur = terms.remove(&e);
                let s = match cur {
                    Some(x) => x + prod,
                    None => prod,
                };
                if !s.is_zero() {
                    terms.insert(e, s);
                }
            }
        }
        Laurent { terms }
    }
}

impl<F: Field> Display for Laurent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let cs = c.to_string();
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            match *e {
                0 => write!(f, "{mag}")?,
                1 if mag == "1" => write!(f, "t")?,
                1 => write!(f, "{mag}*t")?,
                e if mag == "1" => write!(f, "t^{e}")?,
                e => write!(f, "{mag}*t^{e}")?,
            }
        }
        Ok(())
    }
}

impl<F: Field> Ring for Laurent<F> {
    const NAME: &'static str = "k[t,t^-1]";

    fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    fn from_lit(ctx: &ScalarCtx, lit: &ScalarLit) -> Result<Self, Error> {
        let mut out = Self::zero();
        for (e, c) in &lit.terms {
            let coeff = F::from_lit(ctx, &ScalarLit::from_big(c.clone()))?;
            out = out + Self::monomial(*e, coeff);
        }
        Ok(out)
    }

    fn from_i64(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }
}

impl<F: Field> EuclideanRing for Laurent<F> {
    fn euclid_norm(&self) -> Option<u64> {
        self.quotient_dim()
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero Laurent polynomial");
        let mut r = self.clone();
        let mut q = Self::zero();
        let d_hi = d.max_exp().unwrap();
        let d_lc = d.terms[&d_hi].clone();
        while let (Some(r_hi), Some(r_lo)) = (r.max_exp(), r.min_exp()) {
            if (r_hi - r_lo) < (d_hi - d.min_exp().unwrap()) {
                break;
            }
            let e = r_hi - d_hi;
            let c = r.terms[&r_hi].clone() * d_lc.inv();
            let m = Self::monomial(e, c);
            r = r - m.clone() * d.clone();
            q = q + m;
        }
        (q, r)
    }

    fn unit_normalize(&self) -> (Self, Self) {
        if self.is_zero() {
            return (Self::one(), Self::zero());
        }
        let lo = self.min_exp().unwrap();
        let trail = self.terms[&lo].clone();
        let unit = Self::monomial(lo, trail.clone());
        let inv = Self::monomial(-lo, trail.inv());
        (unit, inv * self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentRat {
        let mut out = LaurentRat::zero();
        for (e, c) in terms {
            out = out + Laurent::monomial(*e, Rat::from_i64(*c));
        }
        out
    }

    #[test]
    fn laurent_mul_and_normalization() {
        // (1 - t)(1 + t + t^2) = 1 - t^3
        let a = lp(&[(0, 1), (1, -1)]);
        let b = lp(&[(0, 1), (1, 1), (2, 1)]);
        assert_eq!(a * b, lp(&[(0, 1), (3, -1)]));
    }

    #[test]
    fn laurent_div_rem() {
        // (1 - t^2) / (1 - t) = 1 + t
        let a = lp(&[(0, 1), (2, -1)]);
        let d = lp(&[(0, 1), (1, -1)]);
        let (q, r) = a.div_rem(&d);
        assert!(r.is_zero());
        assert_eq!(q, lp(&[(0, 1), (1, 1)]));
        // nontrivial remainder, strictly smaller span
        let a = lp(&[(-1, 1), (2, 3)]);
        let d = lp(&[(0, 1), (1, 1)]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(q.clone() * d.clone() + r.clone(), a);
        assert!(r.is_zero() || r.euclid_norm().unwrap() < d.euclid_norm().unwrap());
        let _ = q;
    }

    #[test]
    fn laurent_unit_normalize() {
        let a = lp(&[(2, -3), (4, 6)]);
        let (u, c) = a.unit_normalize();
        assert!(u.is_unit());
        assert_eq!(u.clone() * c.clone(), a);
        assert_eq!(c.min_exp(), Some(0));
        assert_eq!(c.terms[&0], Rat::one());
        // 1 - t is already canonical
        let b = lp(&[(0, 1), (1, -1)]);
        let (_, c) = b.unit_normalize();
        assert_eq!(c, b);
    }

    #[test]
    fn fp_arithmetic() {
        let a = Fp::new(5, 7);
        let b = Fp::new(4, 7);
        assert_eq!(a * b, Fp::new(6, 7));
        assert_eq!(a + b, Fp::new(2, 7));
        assert_eq!(a.inv() * a, Fp::new(1, 7));
        assert_eq!(Fp::one() + Fp::new(6, 7), Fp::new(0, 7));
    }

    #[test]
    fn int_unit_normalize() {
        let (u, c) = Int::from(-6).unit_normalize();
        assert_eq!(u, Int::from(-1));
        assert_eq!(c, Int::from(6));
    }

    #[test]
    fn lit_instantiation() {
        let lit = ScalarLit::from_int(-3);
        assert_eq!(Int::from_lit(&ScalarCtx::Int, &lit).unwrap(), Int::from(-3));
        assert_eq!(Fp::from_lit(&ScalarCtx::Fp(5), &lit).unwrap(), Fp::new(2, 5));
        let tlit = ScalarLit::monomial(1, Rat::from_i64(1));
        assert!(Int::from_lit(&ScalarCtx::Int, &tlit).is_err());
        assert_eq!(
            LaurentRat::from_lit(&ScalarCtx::LaurentRat, &tlit).unwrap(),
            Laurent::monomial(1, Rat::one())
        );
    }
}
