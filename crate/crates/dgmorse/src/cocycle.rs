//! Twisting, continuation and homotopy cocycles over a critical-point basis,
//! and the exact verification of their defining equations.

use std::collections::BTreeMap;

use crate::algebra::{AlgebraElement, DgaPresentation};
use crate::error::Error;
use crate::scalar::Ring;

/// Critical points with Morse indices, bounded by an ambient dimension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CriticalBasis {
    /// (name, Morse index)
    pub points: Vec<(String, i64)>,
    pub ambient_dim: i64,
}

impl CriticalBasis {
    pub fn index_of(&self, name: &str) -> Option<i64> {
        self.points.iter().find(|(n, _)| n == name).map(|(_, d)| *d)
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen = BTreeMap::new();
        for (n, d) in &self.points {
            if seen.insert(n.clone(), ()).is_some() {
                out.push(format!("duplicate critical point {n}"));
            }
            if *d < 0 || *d > self.ambient_dim {
                out.push(format!("index {d} of {n} outside [0, {}]", self.ambient_dim));
            }
        }
        out
    }

    /// Dual basis for the reversed function: x^v has index n - |x|.
    pub fn dual(&self) -> CriticalBasis {
        CriticalBasis {
            points: self
                .points
                .iter()
                .map(|(n, d)| (dual_name(n), self.ambient_dim - d))
                .collect(),
            ambient_dim: self.ambient_dim,
        }
    }

    /// Dual names with unchanged indices (the cohomological complex of the
    /// same function: |x^v| = |x|).
    pub fn dual_renamed(&self) -> CriticalBasis {
        CriticalBasis {
            points: self.points.iter().map(|(n, d)| (dual_name(n), *d)).collect(),
            ambient_dim: self.ambient_dim,
        }
    }
}

pub fn dual_name(name: &str) -> String {
    format!("{name}^v")
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CocycleKind {
    /// entry degree |x| - |y| - 1, nonzero only for |x| > |y|
    Twisting,
    /// cohomological twisting on dual points: entry (a, b) has algebra
    /// degree |b| - |a| - 1 and is nonzero only for |b| > |a|
    CohTwisting,
    /// entry degree |x| - |y|
    Continuation,
    /// entry degree |x| - |y| + 1
    Homotopy,
}

impl CocycleKind {
    pub fn entry_degree(&self, ix: i64, iy: i64) -> i64 {
        match self {
            CocycleKind::Twisting => ix - iy - 1,
            CocycleKind::CohTwisting => iy - ix - 1,
            CocycleKind::Continuation => ix - iy,
            CocycleKind::Homotopy => ix - iy + 1,
        }
    }
}

/// `(x, y) -> algebra element`; rows are the source critical basis, columns
/// the target one (they coincide for twisting cocycles).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CocycleMatrix<R> {
    pub kind: CocycleKind,
    pub entries: BTreeMap<(String, String), AlgebraElement<R>>,
}

impl<R: Ring> CocycleMatrix<R> {
    pub fn new(kind: CocycleKind) -> Self {
        CocycleMatrix { kind, entries: BTreeMap::new() }
    }

    pub fn entry(&self, x: &str, y: &str, degree: i64) -> AlgebraElement<R> {
        self.entries
            .get(&(x.to_string(), y.to_string()))
            .cloned()
            .unwrap_or_else(|| AlgebraElement::zero(degree))
    }

    /// Degree and support constraints against the given bases and window.
    pub fn validate(
        &self,
        src: &CriticalBasis,
        tgt: &CriticalBasis,
        dga: &DgaPresentation<R>,
    ) -> Result<(), Error> {
        for ((x, y), e) in &self.entries {
            let ix = src.index_of(x).ok_or_else(|| Error::UnresolvedName {
                path: "cocycle".into(),
                name: x.clone(),
            })?;
            let iy = tgt.index_of(y).ok_or_else(|| Error::UnresolvedName {
                path: "cocycle".into(),
                name: y.clone(),
            })?;
            let want = self.kind.entry_degree(ix, iy);
            if e.degree != want {
                return Err(Error::SchemaViolation {
                    path: format!("cocycle entry ({x}, {y})"),
                    msg: format!("degree {} but kind requires {want}", e.degree),
                });
            }
            if !e.is_zero() && (want < dga.window().0 || want > dga.window().1) {
                return Err(Error::SchemaViolation {
                    path: format!("cocycle entry ({x}, {y})"),
                    msg: format!("nonzero entry of degree {want} outside the algebra window"),
                });
            }
            if self.kind == CocycleKind::Twisting && !e.is_zero() && ix <= iy {
                return Err(Error::SchemaViolation {
                    path: format!("cocycle entry ({x}, {y})"),
                    msg: "twisting entry with |x| <= |y|".into(),
                });
            }
            if self.kind == CocycleKind::CohTwisting && !e.is_zero() && iy <= ix {
                return Err(Error::SchemaViolation {
                    path: format!("cocycle entry ({x}, {y})"),
                    msg: "cohomological twisting entry with |b| <= |a|".into(),
                });
            }
        }
        Ok(())
    }

    /// All nonzero single terms of entries whose index gap matches `gap`
    /// (for mutation sweeps).
    pub fn terms_with_gap(
        &self,
        src: &CriticalBasis,
        tgt: &CriticalBasis,
        gap: i64,
    ) -> Vec<(String, String, crate::algebra::AlgKey)> {
        let mut out = Vec::new();
        for ((x, y), e) in &self.entries {
            let (Some(ix), Some(iy)) = (src.index_of(x), tgt.index_of(y)) else { continue };
            if ix - iy != gap {
                continue;
            }
            for k in e.terms.keys() {
                out.push((x.clone(), y.clone(), k.clone()));
            }
        }
        out
    }

    /// Flip the sign of one term of one entry.
    pub fn flip_term(&self, x: &str, y: &str, key: &crate::algebra::AlgKey) -> Self {
        let mut out = self.clone();
        if let Some(e) = out.entries.get_mut(&(x.to_string(), y.to_string())) {
            if let Some(c) = e.terms.get_mut(key) {
                *c = -c.clone();
            }
        }
        out
    }
}

/// Outcome of a cocycle-equation check: the failing pairs with their
/// residuals, rendered in the algebra's basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostic {
    pub failures: Vec<PairFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFailure {
    pub x: String,
    pub y: String,
    pub residual: String,
}

impl Diagnostic {
    pub fn is_empty(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Maurer-Cartan: d m_{x,y} = sum over |x| > |z| > |y| of
/// (-1)^(|x|-|z|) m_{x,z} m_{z,y}, for every pair.
pub fn check_maurer_cartan<R: Ring>(
    c: &CriticalBasis,
    dga: &DgaPresentation<R>,
    m: &CocycleMatrix<R>,
) -> Result<Diagnostic, Error> {
    if m.kind != CocycleKind::Twisting {
        return Err(Error::SchemaViolation {
            path: "cocycle".into(),
            msg: "Maurer-Cartan check requires a twisting cocycle".into(),
        });
    }
    m.validate(c, c, dga)?;
    let mut diag = Diagnostic::default();
    for (x, ix) in &c.points {
        for (y, iy) in &c.points {
            if ix <= iy {
                continue;
            }
            let exy = m.entry(x, y, ix - iy - 1);
            let mut residual = dga.diff(&exy)?;
            for (z, iz) in &c.points {
                if !(iz < ix && iz > iy) {
                    continue;
                }
                let a = m.entry(x, z, ix - iz - 1);
                let b = m.entry(z, y, iz - iy - 1);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let prod = dga.mul(&a, &b)?;
                let sign = if (ix - iz).rem_euclid(2) == 0 { 1 } else { -1 };
                residual = residual.sub(&prod.scale_sign(sign));
            }
            if !residual.is_zero() {
                diag.failures.push(PairFailure {
                    x: x.clone(),
                    y: y.clone(),
                    residual: dga.render_elt(&residual),
                });
            }
        }
    }
    Ok(diag)
}

/// Continuation equation (for a cocycle from the `m0`-twisted complex on
/// `c0` to the `m1`-twisted complex on `c1`):
/// d nu_{x,y} = sum m0_{x,z} nu_{z,y}
///            + sum (-1)^(|x|-|z|-1) nu_{x,z} m1_{z,y}.
pub fn check_continuation_cocycle<R: Ring>(
    c0: &CriticalBasis,
    c1: &CriticalBasis,
    dga: &DgaPresentation<R>,
    m0: &CocycleMatrix<R>,
    m1: &CocycleMatrix<R>,
    nu: &CocycleMatrix<R>,
) -> Result<Diagnostic, Error> {
    if nu.kind != CocycleKind::Continuation {
        return Err(Error::SchemaViolation {
            path: "cocycle".into(),
            msg: "continuation check requires a continuation cocycle".into(),
        });
    }
    nu.validate(c0, c1, dga)?;
    m0.validate(c0, c0, dga)?;
    m1.validate(c1, c1, dga)?;
    let mut diag = Diagnostic::default();
    for (x, ix) in &c0.points {
        for (y, iy) in &c1.points {
            if ix < iy {
                continue;
            }
            let exy = nu.entry(x, y, ix - iy);
            let mut residual = dga.diff(&exy)?;
            for (z, iz) in &c0.points {
                if iz >= ix || iz < iy {
                    continue;
                }
                let a = m0.entry(x, z, ix - iz - 1);
                let b = nu.entry(z, y, iz - iy);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                residual = residual.sub(&dga.mul(&a, &b)?);
            }
            for (z, iz) in &c1.points {
                if iz > ix || iz <= iy {
                    continue;
                }
                let a = nu.entry(x, z, ix - iz);
                let b = m1.entry(z, y, iz - iy - 1);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let sign = if (ix - iz - 1).rem_euclid(2) == 0 { 1 } else { -1 };
                residual = residual.sub(&dga.mul(&a, &b)?.scale_sign(sign));
            }
            if !residual.is_zero() {
                diag.failures.push(PairFailure {
                    x: x.clone(),
                    y: y.clone(),
                    residual: dga.render_elt(&residual),
                });
            }
        }
    }
    Ok(diag)
}

/// Homotopy equation between two continuation cocycles nu0, nu1:
/// d h_{x,y} = nu1_{x,y} - nu0_{x,y}
///           + sum (-1)^(|x|-|z|) m0_{x,z} h_{z,y}
///           + sum (-1)^(|x|-|z|) h_{x,z} m1_{z,y}.
pub fn check_homotopy_cocycle<R: Ring>(
    c0: &CriticalBasis,
    c1: &CriticalBasis,
    dga: &DgaPresentation<R>,
    m0: &CocycleMatrix<R>,
    m1: &CocycleMatrix<R>,
    nu0: &CocycleMatrix<R>,
    nu1: &CocycleMatrix<R>,
    h: &CocycleMatrix<R>,
) -> Result<Diagnostic, Error> {
    if h.kind != CocycleKind::Homotopy {
        return Err(Error::SchemaViolation {
            path: "cocycle".into(),
            msg: "homotopy check requires a homotopy cocycle".into(),
        });
    }
    h.validate(c0, c1, dga)?;
    nu0.validate(c0, c1, dga)?;
    nu1.validate(c0, c1, dga)?;
    let mut diag = Diagnostic::default();
    for (x, ix) in &c0.points {
        for (y, iy) in &c1.points {
            if ix - iy + 1 < 0 {
                continue;
            }
            let exy = h.entry(x, y, ix - iy + 1);
            let mut residual = dga.diff(&exy)?;
            if ix >= iy {
                let dnu = nu1.entry(x, y, ix - iy).sub(&nu0.entry(x, y, ix - iy));
                residual = residual.sub(&dnu);
            }
            for (z, iz) in &c0.points {
                if iz >= ix {
                    continue;
                }
                let a = m0.entry(x, z, ix - iz - 1);
                let b = h.entry(z, y, iz - iy + 1);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let sign = if (ix - iz).rem_euclid(2) == 0 { 1 } else { -1 };
                residual = residual.sub(&dga.mul(&a, &b)?.scale_sign(sign));
            }
            for (z, iz) in &c1.points {
                if iz <= iy {
                    continue;
                }
                let a = h.entry(x, z, ix - iz + 1);
                let b = m1.entry(z, y, iz - iy - 1);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let sign = if (ix - iz).rem_euclid(2) == 0 { 1 } else { -1 };
                residual = residual.sub(&dga.mul(&a, &b)?.scale_sign(sign));
            }
            if !residual.is_zero() {
                diag.failures.push(PairFailure {
                    x: x.clone(),
                    y: y.clone(),
                    residual: dga.render_elt(&residual),
                });
            }
        }
    }
    Ok(diag)
}

/// Cohomological cocycle on the renamed dual basis (|x^v| = |x|):
/// m_{y^v, x^v} = (-1)^(|x||y| + |x| + 1) I_* m_{x,y}.
pub fn cohomological_cocycle<R: Ring>(
    c: &CriticalBasis,
    dga: &DgaPresentation<R>,
    m: &CocycleMatrix<R>,
) -> Result<CocycleMatrix<R>, Error> {
    if dga.involution.is_none() {
        return Err(Error::NoInvolution);
    }
    let mut out = CocycleMatrix::new(CocycleKind::CohTwisting);
    for ((x, y), e) in &m.entries {
        if e.is_zero() {
            continue;
        }
        let ix = c.index_of(x).ok_or_else(|| Error::UnresolvedName {
            path: "cocycle".into(),
            name: x.clone(),
        })?;
        let iy = c.index_of(y).ok_or_else(|| Error::UnresolvedName {
            path: "cocycle".into(),
            name: y.clone(),
        })?;
        let sign = if (ix * iy + ix + 1).rem_euclid(2) == 0 { 1 } else { -1 };
        let img = dga.involute(e)?.scale_sign(sign);
        out.entries.insert((dual_name(y), dual_name(x)), img);
    }
    Ok(out)
}

/// Cohomological Maurer-Cartan relation on dual points:
/// d m_{a,b} = sum over |a| < |z| < |b| of (-1)^(|a|-|z|) m_{a,z} m_{z,b}.
pub fn check_cohomological_mc<R: Ring>(
    c: &CriticalBasis,
    dga: &DgaPresentation<R>,
    m: &CocycleMatrix<R>,
) -> Result<Diagnostic, Error> {
    if m.kind != CocycleKind::CohTwisting {
        return Err(Error::SchemaViolation {
            path: "cocycle".into(),
            msg: "cohomological MC check requires a cohomological twisting cocycle".into(),
        });
    }
    m.validate(c, c, dga)?;
    let mut diag = Diagnostic::default();
    for (a, ia) in &c.points {
        for (b, ib) in &c.points {
            if ib <= ia {
                continue;
            }
            let eab = m.entry(a, b, ib - ia - 1);
            let mut residual = dga.diff(&eab)?;
            for (z, iz) in &c.points {
                if !(iz > ia && iz < ib) {
                    continue;
                }
                let l = m.entry(a, z, iz - ia - 1);
                let r = m.entry(z, b, ib - iz - 1);
                if l.is_zero() || r.is_zero() {
                    continue;
                }
                let prod = dga.mul(&l, &r)?;
                let sign = if (ia - iz).rem_euclid(2) == 0 { 1 } else { -1 };
                residual = residual.sub(&prod.scale_sign(sign));
            }
            if !residual.is_zero() {
                diag.failures.push(PairFailure {
                    x: a.clone(),
                    y: b.clone(),
                    residual: dga.render_elt(&residual),
                });
            }
        }
    }
    Ok(diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GradedBasis, GroupDecl};
    use crate::group::GroupSpec;
    use crate::scalar::Int;
    use std::collections::BTreeMap;

    fn circle_dga() -> DgaPresentation<Int> {
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

    fn circle_basis() -> CriticalBasis {
        CriticalBasis {
            points: vec![("min".into(), 0), ("max".into(), 1)],
            ambient_dim: 1,
        }
    }

    fn tpow(dga: &DgaPresentation<Int>, k: i64) -> AlgebraElement<Int> {
        let spec = &dga.group.as_ref().unwrap().spec;
        dga.group_elt(spec.parse_elt(&format!("t^{k}")).unwrap())
    }

    fn circle_cocycle(dga: &DgaPresentation<Int>) -> CocycleMatrix<Int> {
        // m_{max,min} = 1 - t
        let mut m = CocycleMatrix::new(CocycleKind::Twisting);
        m.entries
            .insert(("max".into(), "min".into()), tpow(dga, 0).sub(&tpow(dga, 1)));
        m
    }

    #[test]
    fn circle_mc_holds() {
        let dga = circle_dga();
        let c = circle_basis();
        let diag = check_maurer_cartan(&c, &dga, &circle_cocycle(&dga)).unwrap();
        assert!(diag.is_empty(), "{diag:?}");
    }

    #[test]
    fn continuation_between_circle_cocycles() {
        // m0 = 1 - t, m1 = t^-1 - 1, nu = (min: 1, max: t)
        let dga = circle_dga();
        let c = circle_basis();
        let m0 = circle_cocycle(&dga);
        let mut m1 = CocycleMatrix::new(CocycleKind::Twisting);
        m1.entries
            .insert(("max".into(), "min".into()), tpow(&dga, -1).sub(&tpow(&dga, 0)));
        assert!(check_maurer_cartan(&c, &dga, &m1).unwrap().is_empty());

        let mut nu = CocycleMatrix::new(CocycleKind::Continuation);
        nu.entries.insert(("min".into(), "min".into()), tpow(&dga, 0));
        nu.entries.insert(("max".into(), "max".into()), tpow(&dga, 1));
        let diag = check_continuation_cocycle(&c, &c, &dga, &m0, &m1, &nu).unwrap();
        assert!(diag.is_empty(), "{diag:?}");

        // flipping the sign of the max entry must fail at (max, min)
        let bad = nu.flip_term(
            "max",
            "max",
            nu.entries[&("max".to_string(), "max".to_string())]
                .terms
                .keys()
                .next()
                .unwrap(),
        );
        let diag = check_continuation_cocycle(&c, &c, &dga, &m0, &m1, &bad).unwrap();
        assert_eq!(diag.failures.len(), 1);
        assert_eq!((diag.failures[0].x.as_str(), diag.failures[0].y.as_str()), ("max", "min"));
    }

    #[test]
    fn homotopy_between_continuations() {
        // nu0 = (1, t), nu1 = (t^-1, 1), h_{min,max} = 1
        let dga = circle_dga();
        let c = circle_basis();
        let m0 = circle_cocycle(&dga);
        let mut m1 = CocycleMatrix::new(CocycleKind::Twisting);
        m1.entries
            .insert(("max".into(), "min".into()), tpow(&dga, -1).sub(&tpow(&dga, 0)));
        let mut nu0 = CocycleMatrix::new(CocycleKind::Continuation);
        nu0.entries.insert(("min".into(), "min".into()), tpow(&dga, 0));
        nu0.entries.insert(("max".into(), "max".into()), tpow(&dga, 1));
        let mut nu1 = CocycleMatrix::new(CocycleKind::Continuation);
        nu1.entries.insert(("min".into(), "min".into()), tpow(&dga, -1));
        nu1.entries.insert(("max".into(), "max".into()), tpow(&dga, 0));
        assert!(check_continuation_cocycle(&c, &c, &dga, &m0, &m1, &nu1).unwrap().is_empty());

        let mut h = CocycleMatrix::new(CocycleKind::Homotopy);
        h.entries.insert(("min".into(), "max".into()), tpow(&dga, 0));
        let diag = check_homotopy_cocycle(&c, &c, &dga, &m0, &m1, &nu0, &nu1, &h).unwrap();
        assert!(diag.is_empty(), "{diag:?}");

        // zero homotopy between equal cocycles
        let z = CocycleMatrix::new(CocycleKind::Homotopy);
        let diag = check_homotopy_cocycle(&c, &c, &dga, &m0, &m0, &nu0, &nu0, &z).unwrap();
        assert!(diag.is_empty());
    }

    #[test]
    fn cohomological_circle_cocycle() {
        // |max| = 1, |min| = 0: sign (-1)^(0+1+1) = +1, I_*(1 - t) = 1 - t^-1
        let dga = circle_dga();
        let c = circle_basis();
        let m = circle_cocycle(&dga);
        let mv = cohomological_cocycle(&c, &dga, &m).unwrap();
        let e = &mv.entries[&("min^v".to_string(), "max^v".to_string())];
        assert_eq!(*e, tpow(&dga, 0).sub(&tpow(&dga, -1)));
        let diag = check_cohomological_mc(&c.dual_renamed(), &dga, &mv).unwrap();
        assert!(diag.is_empty());
    }

    #[test]
    fn mc_failure_names_the_pair() {
        // z (2) -> y (1) -> x (0) over a degree-0 algebra: the two-step
        // product must vanish, and (1 - t)(1 + t) does not
        let dga = circle_dga();
        let c = CriticalBasis {
            points: vec![("x".into(), 0), ("y".into(), 1), ("z".into(), 2)],
            ambient_dim: 2,
        };
        let mut m = CocycleMatrix::new(CocycleKind::Twisting);
        m.entries.insert(("z".into(), "y".into()), tpow(&dga, 0).sub(&tpow(&dga, 1)));
        m.entries.insert(("y".into(), "x".into()), tpow(&dga, 0).add(&tpow(&dga, 1)));
        let diag = check_maurer_cartan(&c, &dga, &m).unwrap();
        assert_eq!(diag.failures.len(), 1);
        assert_eq!((diag.failures[0].x.as_str(), diag.failures[0].y.as_str()), ("z", "x"));
    }
}
