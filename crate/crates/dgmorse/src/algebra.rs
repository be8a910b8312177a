//! Presented differential graded algebras.
//!
//! A presentation carries a finite graded basis in a degree window. When a
//! group is declared, the degree-0 part is the whole group algebra (the
//! listed degree-0 generators are names for group elements via the declared
//! projection); positive-degree generators together with the multiplication
//! and differential tables describe the rest. Products whose degree escapes
//! the window are a hard error, never truncated.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::group::{GroupElt, GroupSpec};
use crate::scalar::Ring;

/// (-1)^(p*q), the sign rule used everywhere.
pub fn koszul_sign(p: i64, q: i64) -> i64 {
    if (p * q).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedBasis {
    /// (name, degree), in declaration order
    pub gens: Vec<(String, i64)>,
    /// inclusive degree window [d_min, d_max]
    pub window: (i64, i64),
}

impl GradedBasis {
    pub fn degree_of(&self, name: &str) -> Option<i64> {
        self.gens.iter().find(|(n, _)| n == name).map(|(_, d)| *d)
    }

    pub fn names_in_degree(&self, d: i64) -> Vec<&str> {
        self.gens.iter().filter(|(_, g)| *g == d).map(|(n, _)| n.as_str()).collect()
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen = BTreeMap::new();
        for (n, d) in &self.gens {
            if seen.insert(n.clone(), ()).is_some() {
                out.push(format!("duplicate generator name {n}"));
            }
            if *d < self.window.0 || *d > self.window.1 {
                out.push(format!("generator {n} of degree {d} outside window {:?}", self.window));
            }
        }
        if self.window.0 > self.window.1 {
            out.push(format!("empty degree window {:?}", self.window));
        }
        out
    }
}

/// Basis element of a presented algebra: a group element (degree 0, present
/// when a group is declared) or a listed generator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum AlgKey {
    Grp(GroupElt),
    Gen(String),
}

/// Homogeneous element: finite sum of basis keys with ring coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraElement<R> {
    pub degree: i64,
    pub terms: BTreeMap<AlgKey, R>,
}

impl<R: Ring> AlgebraElement<R> {
    pub fn zero(degree: i64) -> Self {
        AlgebraElement { degree, terms: BTreeMap::new() }
    }

    pub fn single(degree: i64, key: AlgKey, coef: R) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(key, coef);
        }
        AlgebraElement { degree, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding inhomogeneous elements");
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let cur = terms.remove(k);
            let s = match cur {
                Some(x) => x + c.clone(),
                None => c.clone(),
            };
            if !s.is_zero() {
                terms.insert(k.clone(), s);
            }
        }
        AlgebraElement { degree: self.degree, terms }
    }

    pub fn neg(&self) -> Self {
        AlgebraElement {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        AlgebraElement {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, x)| (k.clone(), c.clone() * x.clone()))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    pub fn scale_sign(&self, sign: i64) -> Self {
        if sign >= 0 {
            self.clone()
        } else {
            self.neg()
        }
    }
}

/// Declared identification of the degree-0 part with a group algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupDecl {
    pub spec: GroupSpec,
    /// image of each listed degree-0 generator in the group (unit -> identity)
    pub proj: BTreeMap<String, GroupElt>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DgaPresentation<R> {
    pub basis: GradedBasis,
    pub unit: String,
    /// products of listed generators of positive degree
    pub mul_table: BTreeMap<(String, String), AlgebraElement<R>>,
    /// differential of listed generators; missing entry means zero
    pub diff_table: BTreeMap<String, AlgebraElement<R>>,
    pub group: Option<GroupDecl>,
    /// loop inversion on listed positive-degree generators; on the group part
    /// it is g -> g^-1. `Some` marks the involution as declared.
    pub involution: Option<BTreeMap<String, AlgebraElement<R>>>,
}

/// Structural-validation outcome: a list of violated axioms with witnesses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: String) {
        self.violations.push(v);
    }
}

impl<R: Ring> DgaPresentation<R> {
    pub fn window(&self) -> (i64, i64) {
        self.basis.window
    }

    pub fn key_degree(&self, key: &AlgKey) -> i64 {
        match key {
            AlgKey::Grp(_) => 0,
            AlgKey::Gen(n) => self.basis.degree_of(n).expect("key from this presentation"),
        }
    }

    /// Resolve a listed generator name to its canonical basis key.
    pub fn resolve_key(&self, name: &str) -> Result<AlgKey, Error> {
        let deg = self
            .basis
            .degree_of(name)
            .ok_or_else(|| Error::UnresolvedName { path: "dga".into(), name: name.into() })?;
        if deg == 0 {
            if let Some(gd) = &self.group {
                let g = gd.proj.get(name).ok_or_else(|| {
                    Error::InvalidPresentation(format!(
                        "degree-0 generator {name} has no group projection"
                    ))
                })?;
                return Ok(AlgKey::Grp(g.clone()));
            }
        }
        Ok(AlgKey::Gen(name.into()))
    }

    pub fn unit_elt(&self) -> AlgebraElement<R> {
        let key = match &self.group {
            Some(gd) => AlgKey::Grp(gd.spec.identity()),
            None => AlgKey::Gen(self.unit.clone()),
        };
        AlgebraElement::single(0, key, R::one())
    }

    pub fn gen_elt(&self, name: &str) -> Result<AlgebraElement<R>, Error> {
        let deg = self
            .basis
            .degree_of(name)
            .ok_or_else(|| Error::UnresolvedName { path: "dga".into(), name: name.into() })?;
        Ok(AlgebraElement::single(deg, self.resolve_key(name)?, R::one()))
    }

    pub fn group_elt(&self, g: GroupElt) -> AlgebraElement<R> {
        AlgebraElement::single(0, AlgKey::Grp(g), R::one())
    }

    fn is_unit_key(&self, key: &AlgKey) -> bool {
        match (key, &self.group) {
            (AlgKey::Grp(g), Some(gd)) => *g == gd.spec.identity(),
            (AlgKey::Gen(n), None) => n == &self.unit,
            _ => false,
        }
    }

    fn mul_keys(&self, a: &AlgKey, b: &AlgKey) -> Result<AlgebraElement<R>, Error> {
        if self.is_unit_key(a) {
            return Ok(AlgebraElement::single(self.key_degree(b), b.clone(), R::one()));
        }
        if self.is_unit_key(b) {
            return Ok(AlgebraElement::single(self.key_degree(a), a.clone(), R::one()));
        }
        match (a, b) {
            (AlgKey::Grp(g), AlgKey::Grp(h)) => {
                let gd = self.group.as_ref().expect("group keys imply a declaration");
                Ok(self.group_elt(gd.spec.mul(g, h)))
            }
            (AlgKey::Gen(x), AlgKey::Gen(y)) => {
                let deg = self.key_degree(a) + self.key_degree(b);
                if deg > self.basis.window.1 {
                    return Err(Error::WindowOverflow(deg));
                }
                let prod = self
                    .mul_table
                    .get(&(x.clone(), y.clone()))
                    .ok_or_else(|| Error::MissingTableEntry(x.clone(), y.clone()))?;
                if prod.degree != deg {
                    return Err(Error::InvalidPresentation(format!(
                        "product {x}*{y} has degree {} instead of {deg}",
                        prod.degree
                    )));
                }
                Ok(prod.clone())
            }
            _ => Err(Error::InvalidPresentation(
                "product of a nontrivial group element with a positive-degree generator".into(),
            )),
        }
    }

    /// Bilinear product. Fails on window overflow or a missing table entry.
    pub fn mul(
        &self,
        x: &AlgebraElement<R>,
        y: &AlgebraElement<R>,
    ) -> Result<AlgebraElement<R>, Error> {
        let deg = x.degree + y.degree;
        if !x.is_zero() && !y.is_zero() && deg > self.basis.window.1 {
            return Err(Error::WindowOverflow(deg));
        }
        let mut acc = AlgebraElement::zero(deg);
        for (ka, ca) in &x.terms {
            for (kb, cb) in &y.terms {
                let prod = self.mul_keys(ka, kb)?;
                acc = acc.add(&prod.scale(&(ca.clone() * cb.clone())));
            }
        }
        Ok(acc)
    }

    /// Differential, extended linearly from the table; group elements and
    /// untabulated generators are cycles.
    pub fn diff(&self, x: &AlgebraElement<R>) -> Result<AlgebraElement<R>, Error> {
        let deg = x.degree - 1;
        let mut acc = AlgebraElement::zero(deg);
        for (k, c) in &x.terms {
            if let AlgKey::Gen(n) = k {
                if let Some(dx) = self.diff_table.get(n) {
                    if dx.degree != self.key_degree(k) - 1 {
                        return Err(Error::InvalidPresentation(format!(
                            "differential of {n} has degree {} instead of {}",
                            dx.degree,
                            self.key_degree(k) - 1
                        )));
                    }
                    acc = acc.add(&dx.scale(c));
                }
            }
        }
        Ok(acc)
    }

    /// Loop inversion `I_*`: inverse on the group part, declared table on
    /// positive-degree generators.
    pub fn involute(&self, x: &AlgebraElement<R>) -> Result<AlgebraElement<R>, Error> {
        let table = self.involution.as_ref().ok_or(Error::NoInvolution)?;
        let mut acc = AlgebraElement::zero(x.degree);
        for (k, c) in &x.terms {
            let img = match k {
                AlgKey::Grp(g) => {
                    let gd = self.group.as_ref().expect("group keys imply a declaration");
                    self.group_elt(gd.spec.inv(g))
                }
                AlgKey::Gen(n) => table
                    .get(n)
                    .ok_or_else(|| Error::MissingTableEntry(n.clone(), "involution".into()))?
                    .clone(),
            };
            if img.degree != x.degree {
                return Err(Error::InvalidPresentation(format!(
                    "involution is not degree-preserving on a degree-{} term",
                    x.degree
                )));
            }
            acc = acc.add(&img.scale(c));
        }
        Ok(acc)
    }

    /// Project a degree-0 element to the group algebra over `R` (coefficients
    /// per group element). Requires a group declaration.
    pub fn project_h0(&self, x: &AlgebraElement<R>) -> Result<BTreeMap<GroupElt, R>, Error> {
        if self.group.is_none() {
            return Err(Error::NoGroupDeclaration);
        }
        if x.degree != 0 {
            return Err(Error::Internal(format!(
                "H0 projection applied to a degree-{} element",
                x.degree
            )));
        }
        let mut out = BTreeMap::new();
        for (k, c) in &x.terms {
            match k {
                AlgKey::Grp(g) => {
                    out.insert(g.clone(), c.clone());
                }
                AlgKey::Gen(_) => {
                    return Err(Error::Internal(
                        "degree-0 generator key under a group declaration".into(),
                    ))
                }
            }
        }
        Ok(out)
    }

    /// Every listed generator as a canonical element, for table-driven checks.
    fn listed_elements(&self) -> Result<Vec<(String, AlgebraElement<R>)>, Error> {
        self.basis
            .gens
            .iter()
            .map(|(n, _)| Ok((n.clone(), self.gen_elt(n)?)))
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for v in self.basis.validate() {
            report.push(v);
        }
        if self.basis.window.0 != 0 {
            report.push(format!("algebra window must start at 0, found {}", self.basis.window.0));
        }
        match self.basis.degree_of(&self.unit) {
            None => report.push(format!("unit {} is not a listed generator", self.unit)),
            Some(0) => {}
            Some(d) => report.push(format!("unit {} has degree {d}", self.unit)),
        }
        if let Some(gd) = &self.group {
            if let Err(e) = gd.spec.validate() {
                report.push(format!("group declaration: {e}"));
            }
            for (n, d) in &self.basis.gens {
                if *d == 0 && !gd.proj.contains_key(n) {
                    report.push(format!("degree-0 generator {n} has no group projection"));
                }
                if *d > 0 && !gd.spec.is_trivial() {
                    report.push(format!(
                        "positive-degree generator {n} alongside a nontrivial group declaration \
                         is unsupported"
                    ));
                }
            }
            match gd.proj.get(&self.unit) {
                Some(g) if *g == gd.spec.identity() => {}
                Some(_) => report.push(format!("unit {} does not project to the identity", self.unit)),
                None => {}
            }
        }
        if !report.is_empty() {
            // the checks below assume a structurally coherent presentation
            return report;
        }

        let elems = match self.listed_elements() {
            Ok(e) => e,
            Err(e) => {
                report.push(format!("cannot resolve generators: {e}"));
                return report;
            }
        };
        let unit = self.unit_elt();

        // unit is a two-sided identity
        for (n, a) in &elems {
            match (self.mul(&unit, a), self.mul(a, &unit)) {
                (Ok(l), Ok(r)) => {
                    if &l != a || &r != a {
                        report.push(format!("unit axiom fails on {n}"));
                    }
                }
                (Err(e), _) | (_, Err(e)) => report.push(format!("unit product on {n}: {e}")),
            }
        }

        // associativity on listed triples whose products stay in the window
        let max = self.basis.window.1;
        for (na, a) in &elems {
            for (nb, b) in &elems {
                for (nc, c) in &elems {
                    if a.degree + b.degree + c.degree > max {
                        continue;
                    }
                    let lhs = self.mul(a, b).and_then(|ab| self.mul(&ab, c));
                    let rhs = self.mul(b, c).and_then(|bc| self.mul(a, &bc));
                    match (lhs, rhs) {
                        (Ok(l), Ok(r)) => {
                            if l != r {
                                report.push(format!("associativity fails on ({na}, {nb}, {nc})"));
                            }
                        }
                        (Err(e), _) | (_, Err(e)) => {
                            report.push(format!("associativity on ({na}, {nb}, {nc}): {e}"))
                        }
                    }
                }
            }
        }

        // d^2 = 0 on generators
        for (n, a) in &elems {
            match self.diff(a).and_then(|da| self.diff(&da)) {
                Ok(dda) => {
                    if !dda.is_zero() {
                        report.push(format!("d^2 nonzero on {n}"));
                    }
                }
                Err(e) => report.push(format!("d^2 on {n}: {e}")),
            }
        }

        // Leibniz d(ab) = (da)b + (-1)^|a| a(db) where both sides exist
        for (na, a) in &elems {
            for (nb, b) in &elems {
                if a.degree + b.degree > max {
                    continue;
                }
                let lhs = self.mul(a, b).and_then(|ab| self.diff(&ab));
                let rhs = (|| {
                    let da_b = self.mul(&self.diff(a)?, b)?;
                    let a_db = self.mul(a, &self.diff(b)?)?;
                    Ok::<_, Error>(da_b.add(&a_db.scale_sign(koszul_sign(a.degree, 1))))
                })();
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => {
                        if l != r {
                            report.push(format!("Leibniz fails on ({na}, {nb})"));
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => report.push(format!("Leibniz on ({na}, {nb}): {e}")),
                }
            }
        }

        // involution: degree-preserving, squares to the identity, commutes
        // with d, anti-homomorphism with the Koszul sign
        if self.involution.is_some() {
            for (n, a) in &elems {
                match self.involute(a).and_then(|ia| self.involute(&ia)) {
                    Ok(iia) => {
                        if &iia != a {
                            report.push(format!("involution does not square to identity on {n}"));
                        }
                    }
                    Err(e) => report.push(format!("involution squared on {n}: {e}")),
                }
                let lhs = self.involute(a).and_then(|ia| self.diff(&ia));
                let rhs = self.diff(a).and_then(|da| self.involute(&da));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => {
                        if l != r {
                            report.push(format!("involution does not commute with d on {n}"));
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        report.push(format!("involution vs d on {n}: {e}"))
                    }
                }
            }
            for (na, a) in &elems {
                for (nb, b) in &elems {
                    if a.degree + b.degree > max {
                        continue;
                    }
                    let lhs = self.mul(a, b).and_then(|ab| self.involute(&ab));
                    let rhs = (|| {
                        let ib_ia = self.mul(&self.involute(b)?, &self.involute(a)?)?;
                        Ok::<_, Error>(ib_ia.scale_sign(koszul_sign(a.degree, b.degree)))
                    })();
                    match (lhs, rhs) {
                        (Ok(l), Ok(r)) => {
                            if l != r {
                                report.push(format!(
                                    "involution anti-homomorphism fails on ({na}, {nb})"
                                ));
                            }
                        }
                        (Err(e), _) | (_, Err(e)) => {
                            report.push(format!("involution product on ({na}, {nb}): {e}"))
                        }
                    }
                }
            }
        }

        report
    }

    /// Render an element using the declared names (deterministic term order).
    pub fn render_elt(&self, x: &AlgebraElement<R>) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in &x.terms {
            parts.push(format!("({c})*{}", self.render_key(k)));
        }
        parts.join(" + ")
    }

    pub fn render_key(&self, k: &AlgKey) -> String {
        match k {
            AlgKey::Grp(g) => {
                let gd = self.group.as_ref().expect("group keys imply a declaration");
                gd.spec.render_elt(g)
            }
            AlgKey::Gen(n) => n.clone(),
        }
    }
}

/// Small expression tree over algebra elements, evaluated with exact
/// bilinearity and Koszul signs.
#[derive(Clone, Debug)]
pub enum AlgExpr<R> {
    Elem(AlgebraElement<R>),
    Add(Box<AlgExpr<R>>, Box<AlgExpr<R>>),
    Mul(Box<AlgExpr<R>>, Box<AlgExpr<R>>),
    Neg(Box<AlgExpr<R>>),
    Diff(Box<AlgExpr<R>>),
}

pub fn algebra_eval<R: Ring>(
    dga: &DgaPresentation<R>,
    expr: &AlgExpr<R>,
) -> Result<AlgebraElement<R>, Error> {
    match expr {
        AlgExpr::Elem(x) => Ok(x.clone()),
        AlgExpr::Add(a, b) => Ok(algebra_eval(dga, a)?.add(&algebra_eval(dga, b)?)),
        AlgExpr::Mul(a, b) => dga.mul(&algebra_eval(dga, a)?, &algebra_eval(dga, b)?),
        AlgExpr::Neg(a) => Ok(algebra_eval(dga, a)?.neg()),
        AlgExpr::Diff(a) => dga.diff(&algebra_eval(dga, a)?),
    }
}
