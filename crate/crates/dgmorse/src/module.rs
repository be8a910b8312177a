//! DG right modules over a presented DGA: the local coefficient systems.
//!
//! The action table covers the listed algebra generators; the action of a
//! general group element is assembled from the per-generator matrices via the
//! group's normal form (inverting matrices over the scalar ring for negative
//! exponents).

use std::collections::BTreeMap;

use crate::algebra::{koszul_sign, AlgKey, AlgebraElement, DgaPresentation, GradedBasis, ValidationReport};
use crate::error::Error;
use crate::group::{GroupElt, SignCharacter};
use crate::matrix::{invert, Mat};
use crate::scalar::EuclideanRing;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GradingSense {
    /// differential lowers degree by 1
    Homological,
    /// differential raises degree by 1
    Cohomological,
}

/// Homogeneous element of a presented module.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleElement<R> {
    pub degree: i64,
    pub terms: BTreeMap<String, R>,
}

impl<R: EuclideanRing> ModuleElement<R> {
    pub fn zero(degree: i64) -> Self {
        ModuleElement { degree, terms: BTreeMap::new() }
    }

    pub fn single(degree: i64, gen: &str, coef: R) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(gen.to_string(), coef);
        }
        ModuleElement { degree, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding inhomogeneous module elements");
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
        ModuleElement { degree: self.degree, terms }
    }

    pub fn neg(&self) -> Self {
        ModuleElement {
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
        ModuleElement {
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

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DgModulePresentation<R> {
    pub basis: GradedBasis,
    /// (module generator, listed algebra generator) -> image; missing entries
    /// on positive-degree algebra generators mean the action is zero there
    pub action: BTreeMap<(String, String), ModuleElement<R>>,
    /// differential per module generator; missing means zero
    pub diff: BTreeMap<String, ModuleElement<R>>,
    pub sense: GradingSense,
}

impl<R: EuclideanRing> DgModulePresentation<R> {
    fn sense_sign(&self) -> i64 {
        match self.sense {
            GradingSense::Homological => 1,
            GradingSense::Cohomological => -1,
        }
    }

    /// Degree of `x . a` for a module degree and an algebra degree.
    pub fn acted_degree(&self, module_deg: i64, alg_deg: i64) -> i64 {
        module_deg + self.sense_sign() * alg_deg
    }

    /// Degree of the differential's target.
    pub fn diff_degree(&self, module_deg: i64) -> i64 {
        module_deg - self.sense_sign()
    }

    pub fn gen_elt(&self, name: &str) -> Result<ModuleElement<R>, Error> {
        let deg = self
            .basis
            .degree_of(name)
            .ok_or_else(|| Error::UnresolvedName { path: "module".into(), name: name.into() })?;
        Ok(ModuleElement::single(deg, name, R::one()))
    }

    pub fn diff_elt(&self, x: &ModuleElement<R>) -> ModuleElement<R> {
        let mut acc = ModuleElement::zero(self.diff_degree(x.degree));
        for (g, c) in &x.terms {
            if let Some(dg) = self.diff.get(g) {
                acc = acc.add(&dg.scale(c));
            }
        }
        acc
    }

    /// Action of a single listed algebra generator, extended linearly.
    fn act_listed(&self, x: &ModuleElement<R>, gen: &str, alg_deg: i64) -> ModuleElement<R> {
        let mut acc = ModuleElement::zero(self.acted_degree(x.degree, alg_deg));
        for (g, c) in &x.terms {
            if let Some(img) = self.action.get(&(g.clone(), gen.to_string())) {
                acc = acc.add(&img.scale(c));
            }
        }
        acc
    }

    /// Matrix of the action of a degree-0 listed generator on the whole basis
    /// (columns indexed by module generators in declaration order).
    fn action_matrix(&self, gen: &str) -> Mat<R> {
        let names: Vec<&str> = self.basis.gens.iter().map(|(n, _)| n.as_str()).collect();
        Mat::from_fn(names.len(), names.len(), |i, j| {
            self.action
                .get(&(names[j].to_string(), gen.to_string()))
                .and_then(|img| img.terms.get(names[i]))
                .cloned()
                .unwrap_or_else(R::zero)
        })
    }

    fn apply_matrix(&self, x: &ModuleElement<R>, m: &Mat<R>) -> ModuleElement<R> {
        let names: Vec<&str> = self.basis.gens.iter().map(|(n, _)| n.as_str()).collect();
        let v: Vec<R> = names
            .iter()
            .map(|n| x.terms.get(*n).cloned().unwrap_or_else(R::zero))
            .collect();
        let w = m.mul_vec(&v);
        let mut out = ModuleElement::zero(x.degree);
        for (n, c) in names.iter().zip(w) {
            if !c.is_zero() {
                out.terms.insert(n.to_string(), c);
            }
        }
        out
    }

    /// Action of an arbitrary group element through the declared projection:
    /// the group's normal-form word in the degree-0 generators, with matrix
    /// inverses for negative exponents.
    pub fn act_group(
        &self,
        dga: &DgaPresentation<R>,
        x: &ModuleElement<R>,
        g: &GroupElt,
    ) -> Result<ModuleElement<R>, Error> {
        let gd = dga.group.as_ref().ok_or(Error::NoGroupDeclaration)?;
        // name the group generators by the listed degree-0 algebra generators
        // projecting onto them
        let mut gen_name: BTreeMap<GroupElt, String> = BTreeMap::new();
        for (alg_name, elt) in &gd.proj {
            gen_name.entry(elt.clone()).or_insert_with(|| alg_name.clone());
        }
        let mut acc = x.clone();
        for (grp_gen, exp) in gd.spec.word_for(g) {
            let elt = gd
                .spec
                .generator_elts()
                .into_iter()
                .find(|(n, _)| *n == grp_gen)
                .map(|(_, e)| e)
                .expect("word uses declared generators");
            let alg_name = gen_name.get(&elt).ok_or_else(|| {
                Error::ActionNotGroupFactored(format!(
                    "group generator {grp_gen} is not the image of a listed degree-0 generator"
                ))
            })?;
            let m = self.action_matrix(alg_name);
            let m = if exp >= 0 {
                m
            } else {
                invert(&m).ok_or_else(|| {
                    Error::ActionNotGroupFactored(format!(
                        "action of {alg_name} is not invertible over {}",
                        R::NAME
                    ))
                })?
            };
            for _ in 0..exp.unsigned_abs() {
                acc = self.apply_matrix(&acc, &m);
            }
        }
        Ok(acc)
    }

    fn act_key(
        &self,
        dga: &DgaPresentation<R>,
        x: &ModuleElement<R>,
        key: &AlgKey,
    ) -> Result<ModuleElement<R>, Error> {
        match key {
            AlgKey::Grp(g) => self.act_group(dga, x, g),
            AlgKey::Gen(n) => {
                let deg = dga
                    .basis
                    .degree_of(n)
                    .ok_or_else(|| Error::UnresolvedName { path: "dga".into(), name: n.clone() })?;
                Ok(self.act_listed(x, n, deg))
            }
        }
    }

    /// Right action `x . a`, bilinear over the algebra element's terms.
    pub fn act(
        &self,
        dga: &DgaPresentation<R>,
        x: &ModuleElement<R>,
        a: &AlgebraElement<R>,
    ) -> Result<ModuleElement<R>, Error> {
        let mut acc = ModuleElement::zero(self.acted_degree(x.degree, a.degree));
        for (key, c) in &a.terms {
            acc = acc.add(&self.act_key(dga, x, key)?.scale(c));
        }
        Ok(acc)
    }

    pub fn validate(&self, dga: &DgaPresentation<R>) -> ValidationReport {
        let mut report = ValidationReport::default();
        for v in self.basis.validate() {
            report.push(v);
        }
        for ((mg, ag), img) in &self.action {
            let (Some(md), Some(ad)) = (self.basis.degree_of(mg), dga.basis.degree_of(ag)) else {
                report.push(format!("action entry ({mg}, {ag}) references unknown generators"));
                continue;
            };
            if img.degree != self.acted_degree(md, ad) {
                report.push(format!(
                    "action entry ({mg}, {ag}) has degree {} instead of {}",
                    img.degree,
                    self.acted_degree(md, ad)
                ));
            }
        }
        for (mg, img) in &self.diff {
            let Some(md) = self.basis.degree_of(mg) else {
                report.push(format!("differential entry {mg} references an unknown generator"));
                continue;
            };
            if img.degree != self.diff_degree(md) {
                report.push(format!(
                    "differential of {mg} has degree {} instead of {}",
                    img.degree,
                    self.diff_degree(md)
                ));
            }
        }
        if !report.is_empty() {
            return report;
        }

        let mod_gens: Vec<String> = self.basis.gens.iter().map(|(n, _)| n.clone()).collect();
        let alg_gens: Vec<String> = dga.basis.gens.iter().map(|(n, _)| n.clone()).collect();

        // d^2 = 0
        for mg in &mod_gens {
            let x = self.gen_elt(mg).unwrap();
            if !self.diff_elt(&self.diff_elt(&x)).is_zero() {
                report.push(format!("module d^2 nonzero on {mg}"));
            }
        }

        // unit acts as identity
        for mg in &mod_gens {
            let x = self.gen_elt(mg).unwrap();
            match self.act(dga, &x, &dga.unit_elt()) {
                Ok(xu) => {
                    if xu != x {
                        report.push(format!("unit action fails on {mg}"));
                    }
                }
                Err(e) => report.push(format!("unit action on {mg}: {e}")),
            }
        }

        // Leibniz for the action: d(x.a) = (dx).a + (-1)^|x| x.(da)
        for mg in &mod_gens {
            for ag in &alg_gens {
                let x = self.gen_elt(mg).unwrap();
                let a = match dga.gen_elt(ag) {
                    Ok(a) => a,
                    Err(e) => {
                        report.push(format!("cannot resolve {ag}: {e}"));
                        continue;
                    }
                };
                let lhs = self.act(dga, &x, &a).map(|xa| self.diff_elt(&xa));
                let rhs = (|| {
                    let dx_a = self.act(dga, &self.diff_elt(&x), &a)?;
                    let x_da = self.act(dga, &x, &dga.diff(&a)?)?;
                    Ok::<_, Error>(dx_a.add(&x_da.scale_sign(koszul_sign(x.degree, 1))))
                })();
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => {
                        if l != r {
                            report.push(format!("action Leibniz fails on ({mg}, {ag})"));
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        report.push(format!("action Leibniz on ({mg}, {ag}): {e}"))
                    }
                }
            }
        }

        // associativity of the action against the algebra product
        let max = dga.basis.window.1;
        for mg in &mod_gens {
            for ag in &alg_gens {
                for bg in &alg_gens {
                    let (Some(da), Some(db)) =
                        (dga.basis.degree_of(ag), dga.basis.degree_of(bg))
                    else {
                        continue;
                    };
                    if da + db > max {
                        continue;
                    }
                    let x = self.gen_elt(mg).unwrap();
                    let res = (|| {
                        let a = dga.gen_elt(ag)?;
                        let b = dga.gen_elt(bg)?;
                        let lhs = self.act(dga, &self.act(dga, &x, &a)?, &b)?;
                        let rhs = self.act(dga, &x, &dga.mul(&a, &b)?)?;
                        Ok::<_, Error>((lhs, rhs))
                    })();
                    match res {
                        Ok((l, r)) => {
                            if l != r {
                                report.push(format!(
                                    "action associativity fails on ({mg}, {ag}, {bg})"
                                ));
                            }
                        }
                        Err(e) => {
                            report.push(format!("action associativity on ({mg}, {ag}, {bg}): {e}"))
                        }
                    }
                }
            }
        }

        report
    }

    /// `F^bar`: negate degrees and flip the grading sense, content unchanged.
    pub fn opposite_grading(&self) -> Self {
        let flip = |deg: i64| -deg;
        let mut basis = self.basis.clone();
        for (_, d) in &mut basis.gens {
            *d = flip(*d);
        }
        basis.window = (flip(self.basis.window.1), flip(self.basis.window.0));
        DgModulePresentation {
            basis,
            action: self
                .action
                .iter()
                .map(|(k, v)| {
                    (k.clone(), ModuleElement { degree: flip(v.degree), terms: v.terms.clone() })
                })
                .collect(),
            diff: self
                .diff
                .iter()
                .map(|(k, v)| {
                    (k.clone(), ModuleElement { degree: flip(v.degree), terms: v.terms.clone() })
                })
                .collect(),
            sense: match self.sense {
                GradingSense::Homological => GradingSense::Cohomological,
                GradingSense::Cohomological => GradingSense::Homological,
            },
        }
    }

    /// Tensor with a sign character concentrated in degree 0: the action of
    /// each degree-0 algebra generator is multiplied by its sign.
    pub fn twist_by_character(
        &self,
        dga: &DgaPresentation<R>,
        w: &SignCharacter,
    ) -> Result<Self, Error> {
        let gd = dga.group.as_ref().ok_or(Error::NoGroupDeclaration)?;
        w.validate(&gd.spec)?;
        let mut out = self.clone();
        for ((mg, ag), img) in &self.action {
            let Some(ad) = dga.basis.degree_of(ag) else { continue };
            if ad != 0 {
                continue;
            }
            let g = gd.proj.get(ag).ok_or_else(|| {
                Error::ActionNotGroupFactored(format!(
                    "degree-0 generator {ag} has no declared group image"
                ))
            })?;
            let sign = w.eval(&gd.spec, g);
            out.action
                .insert((mg.clone(), ag.clone()), img.scale_sign(sign as i64));
        }
        Ok(out)
    }
}

/// The rank-1 degree-0 DG local system on which degree-0 generators act by
/// the character's signs and positive-degree generators act by zero.
pub fn orientation_system<R: EuclideanRing>(
    dga: &DgaPresentation<R>,
    w: &SignCharacter,
) -> Result<DgModulePresentation<R>, Error> {
    let gd = dga.group.as_ref().ok_or(Error::NoGroupDeclaration)?;
    w.validate(&gd.spec)?;
    let gen = "o".to_string();
    let mut action = BTreeMap::new();
    for (n, d) in &dga.basis.gens {
        if *d == 0 {
            let g = gd.proj.get(n).ok_or_else(|| {
                Error::ActionNotGroupFactored(format!(
                    "degree-0 generator {n} has no declared group image"
                ))
            })?;
            let sign = w.eval(&gd.spec, g);
            action.insert(
                (gen.clone(), n.clone()),
                ModuleElement::single(0, &gen, R::one()).scale_sign(sign as i64),
            );
        }
        // positive-degree generators act by zero: no entry
    }
    Ok(DgModulePresentation {
        basis: GradedBasis { gens: vec![(gen, 0)], window: (0, 0) },
        action,
        diff: BTreeMap::new(),
        sense: GradingSense::Homological,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupDecl;
    use crate::group::GroupSpec;
    use crate::scalar::{Int, Laurent, LaurentRat, Rat};
    use num_traits::One;

    fn circle_dga<R: EuclideanRing>() -> DgaPresentation<R> {
        let spec = GroupSpec::FreeAbelian { gens: vec!["t".into()] };
        let t = spec.generator_elts()[0].1.clone();
        DgaPresentation {
            basis: GradedBasis { gens: vec![("1".into(), 0), ("t".into(), 0)], window: (0, 2) },
            unit: "1".into(),
            mul_table: BTreeMap::new(),
            diff_table: BTreeMap::new(),
            group: Some(GroupDecl {
                spec: spec.clone(),
                proj: [("1".to_string(), spec.identity()), ("t".to_string(), t)]
                    .into_iter()
                    .collect(),
            }),
            involution: Some(BTreeMap::new()),
        }
    }

    /// Rank-1 module over Q[t,t^-1] scalars where t acts by the scalar t.
    fn laurent_line() -> DgModulePresentation<LaurentRat> {
        let e = "e".to_string();
        DgModulePresentation {
            basis: GradedBasis { gens: vec![(e.clone(), 0)], window: (0, 0) },
            action: [(
                (e.clone(), "t".to_string()),
                ModuleElement::single(0, &e, Laurent::monomial(1, Rat::one())),
            )]
            .into_iter()
            .collect(),
            diff: BTreeMap::new(),
            sense: GradingSense::Homological,
        }
    }

    #[test]
    fn laurent_line_validates_and_inverts() {
        let dga = circle_dga::<LaurentRat>();
        let f = laurent_line();
        let report = f.validate(&dga);
        assert!(report.is_empty(), "{report:?}");
        let spec = &dga.group.as_ref().unwrap().spec;
        let e = f.gen_elt("e").unwrap();
        let acted = f.act_group(&dga, &e, &spec.parse_elt("t^-2").unwrap()).unwrap();
        assert_eq!(acted, ModuleElement::single(0, "e", Laurent::monomial(-2, Rat::one())));
    }

    #[test]
    fn trivial_int_module_over_circle() {
        let dga = circle_dga::<Int>();
        let e = "e".to_string();
        let f: DgModulePresentation<Int> = DgModulePresentation {
            basis: GradedBasis { gens: vec![(e.clone(), 0)], window: (0, 0) },
            action: [((e.clone(), "t".to_string()), ModuleElement::single(0, &e, Int::from(1)))]
                .into_iter()
                .collect(),
            diff: BTreeMap::new(),
            sense: GradingSense::Homological,
        };
        assert!(f.validate(&dga).is_empty());
        let spec = &dga.group.as_ref().unwrap().spec;
        let x = f.gen_elt("e").unwrap();
        let acted = f.act_group(&dga, &x, &spec.parse_elt("t^-5").unwrap()).unwrap();
        assert_eq!(acted, x);
    }

    #[test]
    fn twist_by_sign_character() {
        let spec = GroupSpec::cyclic(2, "g");
        let g = spec.parse_elt("g").unwrap();
        let dga: DgaPresentation<Int> = DgaPresentation {
            basis: GradedBasis { gens: vec![("1".into(), 0), ("g".into(), 0)], window: (0, 2) },
            unit: "1".into(),
            mul_table: BTreeMap::new(),
            diff_table: BTreeMap::new(),
            group: Some(GroupDecl {
                spec: spec.clone(),
                proj: [("1".to_string(), spec.identity()), ("g".to_string(), g)]
                    .into_iter()
                    .collect(),
            }),
            involution: None,
        };
        assert!(dga.validate().is_empty());
        let w = SignCharacter { values: [("g".to_string(), -1i8)].into_iter().collect() };
        let o = orientation_system(&dga, &w).unwrap();
        assert!(o.validate(&dga).is_empty(), "{:?}", o.validate(&dga));
        let x = o.gen_elt("o").unwrap();
        let gx = o.act(&dga, &x, &dga.gen_elt("g").unwrap()).unwrap();
        assert_eq!(gx, x.neg());
        // double twist is the identity on presentations
        let tw = o.twist_by_character(&dga, &w).unwrap();
        let tw2 = tw.twist_by_character(&dga, &w).unwrap();
        assert_eq!(tw2, o);
        // trivial character is a unit for twisting
        let triv = SignCharacter::trivial(&spec);
        assert_eq!(o.twist_by_character(&dga, &triv).unwrap(), o);
    }

    #[test]
    fn opposite_grading_involutive() {
        let f = laurent_line();
        let ff = f.opposite_grading().opposite_grading();
        assert_eq!(ff, f);
        assert_eq!(f.opposite_grading().sense, GradingSense::Cohomological);
    }
}
