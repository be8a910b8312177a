//! Example bundles: the in-memory document holding a presented DGA, critical
//! data, cocycles, coefficient systems and expectations, stored with exact
//! literal scalars and instantiated in a concrete ring on demand.

use std::collections::BTreeMap;

use crate::algebra::{AlgebraElement, DgaPresentation};
use crate::cocycle::{
    check_continuation_cocycle, check_homotopy_cocycle, check_maurer_cartan, CocycleKind,
    CocycleMatrix, CriticalBasis,
};
use crate::error::Error;
use crate::group::SignCharacter;
use crate::homology::GroupModule;
use crate::matrix::Mat;
use crate::module::{DgModulePresentation, ModuleElement};
use crate::scalar::{EuclideanRing, ScalarCtx, ScalarLit};

/// A named cocycle together with the critical bases it runs between.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CocycleDecl {
    pub kind: CocycleKind,
    pub src: String,
    pub tgt: String,
    pub matrix: CocycleMatrix<ScalarLit>,
}

/// Which coefficient system a tag selects.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CoeffSystem {
    /// twisted complex with a DG module (by name)
    Dg(String),
    /// lifted complex tensored with a group module (by name)
    Lifted(String),
    /// lifted complex read over the bare group ring
    GroupRing,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoeffTag {
    pub ctx: ScalarCtx,
    pub system: CoeffSystem,
    /// cocycle the tag computes with
    pub cocycle: String,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MapKind {
    Continuation,
    Homotopy,
}

/// A declared map between twisted complexes: continuation data, or a
/// homotopy between two continuations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MapDecl {
    pub kind: MapKind,
    /// coefficient tag fixing scalars and module for induced-map checks
    pub coeff: String,
    pub src: (String, String),
    pub tgt: (String, String),
    /// continuation: the single cocycle; homotopy: nu0
    pub nu0: String,
    pub nu1: Option<String>,
    pub h: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairingDecl {
    pub ctx: ScalarCtx,
    pub module: String,
    pub f: (String, String),
    pub negf: (String, String),
    pub orientation: Option<String>,
    /// critical point of f -> critical point of -f
    pub matching: BTreeMap<String, String>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expectation {
    /// (tag, degree, rendered summary)
    Homology(String, i64, String),
    /// (tag, p, q, dimension)
    E2(String, i64, i64, usize),
    /// (tag, p, q, rank)
    D2(String, i64, i64, usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bundle {
    pub name: String,
    pub ambient: i64,
    pub notes: Vec<String>,
    pub dga: DgaPresentation<ScalarLit>,
    pub modules: BTreeMap<String, DgModulePresentation<ScalarLit>>,
    pub gmodules: BTreeMap<String, GroupModule<ScalarLit>>,
    pub criticals: BTreeMap<String, CriticalBasis>,
    pub cocycles: BTreeMap<String, CocycleDecl>,
    pub characters: BTreeMap<String, SignCharacter>,
    pub maps: BTreeMap<String, MapDecl>,
    pub pairings: BTreeMap<String, PairingDecl>,
    pub coeffs: BTreeMap<String, CoeffTag>,
    pub expects: Vec<Expectation>,
}

impl Bundle {
    pub fn critical(&self, name: &str) -> Result<&CriticalBasis, Error> {
        self.criticals.get(name).ok_or_else(|| Error::UnresolvedName {
            path: "critical".into(),
            name: name.into(),
        })
    }

    pub fn cocycle(&self, name: &str) -> Result<&CocycleDecl, Error> {
        self.cocycles.get(name).ok_or_else(|| Error::UnresolvedName {
            path: "cocycle".into(),
            name: name.into(),
        })
    }

    pub fn module(&self, name: &str) -> Result<&DgModulePresentation<ScalarLit>, Error> {
        self.modules.get(name).ok_or_else(|| Error::UnresolvedName {
            path: "module".into(),
            name: name.into(),
        })
    }

    pub fn coeff(&self, tag: &str) -> Result<&CoeffTag, Error> {
        self.coeffs.get(tag).ok_or_else(|| Error::UnknownTag(tag.into()))
    }

    /// Stored homology expectations for a declared tag, keyed by degree.
    pub fn expected_homology(&self, tag: &str) -> Result<BTreeMap<i64, String>, Error> {
        self.coeff(tag)?;
        let mut out = BTreeMap::new();
        for e in &self.expects {
            if let Expectation::Homology(t, deg, val) = e {
                if t == tag {
                    out.insert(*deg, val.clone());
                }
            }
        }
        Ok(out)
    }

    /// Full structural validation over the literal scalars: presentation
    /// axioms, cocycle shapes, Maurer-Cartan, continuation and homotopy
    /// equations, characters, and name resolution for tags and pairings.
    pub fn validate(&self) -> Result<Vec<String>, Error> {
        let mut issues = Vec::new();
        let report = self.dga.validate();
        issues.extend(report.violations.iter().map(|v| format!("dga: {v}")));
        for (name, m) in &self.modules {
            let report = m.validate(&self.dga);
            issues.extend(report.violations.iter().map(|v| format!("module {name}: {v}")));
        }
        for (name, c) in &self.criticals {
            for v in c.validate() {
                issues.push(format!("critical {name}: {v}"));
            }
            if c.ambient_dim != self.ambient {
                issues.push(format!(
                    "critical {name}: ambient dimension {} differs from bundle ambient {}",
                    c.ambient_dim, self.ambient
                ));
            }
        }
        if let Some(gd) = &self.dga.group {
            for (name, w) in &self.characters {
                if let Err(e) = w.validate(&gd.spec) {
                    issues.push(format!("character {name}: {e}"));
                }
            }
            for (name, gm) in &self.gmodules {
                if let Err(e) = gm.validate(&gd.spec) {
                    issues.push(format!("gmodule {name}: {e}"));
                }
            }
        } else if !self.characters.is_empty() || !self.gmodules.is_empty() {
            issues.push("characters or group modules without a group declaration".into());
        }
        for (name, c) in &self.cocycles {
            let src = self.critical(&c.src)?;
            let tgt = self.critical(&c.tgt)?;
            if let Err(e) = c.matrix.validate(src, tgt, &self.dga) {
                issues.push(format!("cocycle {name}: {e}"));
                continue;
            }
            if c.matrix.kind == CocycleKind::Twisting {
                if c.src != c.tgt {
                    issues.push(format!("cocycle {name}: twisting cocycle must be square"));
                    continue;
                }
                match check_maurer_cartan(src, &self.dga, &c.matrix) {
                    Ok(diag) => {
                        for fail in &diag.failures {
                            issues.push(format!(
                                "cocycle {name}: Maurer-Cartan fails at ({}, {}): {}",
                                fail.x, fail.y, fail.residual
                            ));
                        }
                    }
                    Err(e) => issues.push(format!("cocycle {name}: {e}")),
                }
            }
        }
        for (name, m) in &self.maps {
            if let Err(e) = self.check_map(m) {
                issues.push(format!("map {name}: {e}"));
            }
        }
        for (name, p) in &self.pairings {
            if let Err(e) = self.check_pairing_names(p) {
                issues.push(format!("pairing {name}: {e}"));
            }
        }
        for (tag, c) in &self.coeffs {
            self.cocycle(&c.cocycle)?;
            match &c.system {
                CoeffSystem::Dg(m) => {
                    self.module(m)?;
                }
                CoeffSystem::Lifted(g) => {
                    if !self.gmodules.contains_key(g) {
                        return Err(Error::UnresolvedName {
                            path: format!("coeff {tag}"),
                            name: g.clone(),
                        });
                    }
                }
                CoeffSystem::GroupRing => {}
            }
        }
        for e in &self.expects {
            let tag = match e {
                Expectation::Homology(t, _, _) | Expectation::E2(t, _, _, _) | Expectation::D2(t, _, _, _) => t,
            };
            self.coeff(tag)?;
        }
        Ok(issues)
    }

    fn check_map(&self, m: &MapDecl) -> Result<(), Error> {
        self.coeff(&m.coeff)?;
        let c0 = self.critical(&m.src.0)?;
        let m0 = &self.cocycle(&m.src.1)?.matrix;
        let c1 = self.critical(&m.tgt.0)?;
        let m1 = &self.cocycle(&m.tgt.1)?.matrix;
        match m.kind {
            MapKind::Continuation => {
                let nu = &self.cocycle(&m.nu0)?.matrix;
                let diag = check_continuation_cocycle(c0, c1, &self.dga, m0, m1, nu)?;
                if let Some(f) = diag.failures.first() {
                    return Err(Error::NotAChainMap {
                        degree: c0.index_of(&f.x).unwrap_or(0),
                        column: 0,
                        residual: format!("continuation fails at ({}, {}): {}", f.x, f.y, f.residual),
                    });
                }
            }
            MapKind::Homotopy => {
                let nu0 = &self.cocycle(&m.nu0)?.matrix;
                let nu1 = &self
                    .cocycle(m.nu1.as_deref().ok_or_else(|| Error::SchemaViolation {
                        path: "map".into(),
                        msg: "homotopy map needs nu1".into(),
                    })?)?
                    .matrix;
                let h = &self
                    .cocycle(m.h.as_deref().ok_or_else(|| Error::SchemaViolation {
                        path: "map".into(),
                        msg: "homotopy map needs h".into(),
                    })?)?
                    .matrix;
                let diag = check_homotopy_cocycle(c0, c1, &self.dga, m0, m1, nu0, nu1, h)?;
                if let Some(f) = diag.failures.first() {
                    return Err(Error::NotAHomotopy {
                        degree: c0.index_of(&f.x).unwrap_or(0),
                        column: 0,
                        residual: format!("homotopy fails at ({}, {}): {}", f.x, f.y, f.residual),
                    });
                }
            }
        }
        Ok(())
    }

    fn check_pairing_names(&self, p: &PairingDecl) -> Result<(), Error> {
        self.module(&p.module)?;
        self.critical(&p.f.0)?;
        self.cocycle(&p.f.1)?;
        self.critical(&p.negf.0)?;
        self.cocycle(&p.negf.1)?;
        if let Some(w) = &p.orientation {
            if !self.characters.contains_key(w) {
                return Err(Error::UnresolvedName { path: "pairing".into(), name: w.clone() });
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Instantiation in a concrete scalar ring
// ---------------------------------------------------------------------------

pub fn inst_alg_elt<R: EuclideanRing>(
    ctx: &ScalarCtx,
    e: &AlgebraElement<ScalarLit>,
) -> Result<AlgebraElement<R>, Error> {
    let mut out = AlgebraElement::zero(e.degree);
    for (k, c) in &e.terms {
        let c = R::from_lit(ctx, c)?;
        if !c.is_zero() {
            out.terms.insert(k.clone(), c);
        }
    }
    Ok(out)
}

pub fn inst_mod_elt<R: EuclideanRing>(
    ctx: &ScalarCtx,
    e: &ModuleElement<ScalarLit>,
) -> Result<ModuleElement<R>, Error> {
    let mut out = ModuleElement::zero(e.degree);
    for (k, c) in &e.terms {
        let c = R::from_lit(ctx, c)?;
        if !c.is_zero() {
            out.terms.insert(k.clone(), c);
        }
    }
    Ok(out)
}

pub fn inst_dga<R: EuclideanRing>(
    ctx: &ScalarCtx,
    d: &DgaPresentation<ScalarLit>,
) -> Result<DgaPresentation<R>, Error> {
    let mut mul_table = BTreeMap::new();
    for (k, v) in &d.mul_table {
        mul_table.insert(k.clone(), inst_alg_elt(ctx, v)?);
    }
    let mut diff_table = BTreeMap::new();
    for (k, v) in &d.diff_table {
        diff_table.insert(k.clone(), inst_alg_elt(ctx, v)?);
    }
    let involution = match &d.involution {
        None => None,
        Some(t) => {
            let mut out = BTreeMap::new();
            for (k, v) in t {
                out.insert(k.clone(), inst_alg_elt(ctx, v)?);
            }
            Some(out)
        }
    };
    Ok(DgaPresentation {
        basis: d.basis.clone(),
        unit: d.unit.clone(),
        mul_table,
        diff_table,
        group: d.group.clone(),
        involution,
    })
}

pub fn inst_module<R: EuclideanRing>(
    ctx: &ScalarCtx,
    m: &DgModulePresentation<ScalarLit>,
) -> Result<DgModulePresentation<R>, Error> {
    let mut action = BTreeMap::new();
    for (k, v) in &m.action {
        action.insert(k.clone(), inst_mod_elt(ctx, v)?);
    }
    let mut diff = BTreeMap::new();
    for (k, v) in &m.diff {
        diff.insert(k.clone(), inst_mod_elt(ctx, v)?);
    }
    Ok(DgModulePresentation { basis: m.basis.clone(), action, diff, sense: m.sense })
}

pub fn inst_cocycle<R: EuclideanRing>(
    ctx: &ScalarCtx,
    m: &CocycleMatrix<ScalarLit>,
) -> Result<CocycleMatrix<R>, Error> {
    let mut out = CocycleMatrix::new(m.kind);
    for (k, v) in &m.entries {
        let e = inst_alg_elt(ctx, v)?;
        if !e.is_zero() {
            out.entries.insert(k.clone(), e);
        }
    }
    Ok(out)
}

pub fn inst_gmodule<R: EuclideanRing>(
    ctx: &ScalarCtx,
    g: &GroupModule<ScalarLit>,
) -> Result<GroupModule<R>, Error> {
    let mut action = BTreeMap::new();
    for (name, m) in &g.action {
        let mut out: Mat<R> = Mat::zero(m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                out[(i, j)] = R::from_lit(ctx, &m[(i, j)])?;
            }
        }
        action.insert(name.clone(), out);
    }
    Ok(GroupModule { rank: g.rank, action })
}
