//! Chain maps between twisted complexes: maps induced by continuation
//! cocycles, homotopies, DGA morphisms with pushforward cocycles, module
//! morphisms, and quasi-isomorphism detection through mapping cones.

use std::collections::BTreeMap;

use crate::algebra::{AlgKey, AlgebraElement, DgaPresentation};
use crate::cocycle::{
    check_continuation_cocycle, check_homotopy_cocycle, CocycleMatrix, CriticalBasis,
};
use crate::complex::{TcGen, TwistedComplex};
use crate::error::Error;
use crate::group::{GroupElt, GroupSpec};
use crate::homology::HomologyResult;
use crate::matrix::Mat;
use crate::module::{DgModulePresentation, ModuleElement};
use crate::scalar::EuclideanRing;

/// Degree-preserving (up to a fixed shift) linear map between twisted
/// complexes, stored as one block per source degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainMap<R> {
    /// maps degree d to degree d + shift
    pub shift: i64,
    pub blocks: BTreeMap<i64, Mat<R>>,
}

impl<R: EuclideanRing> ChainMap<R> {
    pub fn identity(x: &TwistedComplex<R>) -> Self {
        let mut blocks = BTreeMap::new();
        for (k, layer) in x.basis.iter().enumerate() {
            blocks.insert(x.lo + k as i64, Mat::identity(layer.len()));
        }
        ChainMap { shift: 0, blocks }
    }

    pub fn zero(shift: i64) -> Self {
        ChainMap { shift, blocks: BTreeMap::new() }
    }

    pub fn block(&self, src: &TwistedComplex<R>, tgt: &TwistedComplex<R>, d: i64) -> Mat<R> {
        self.blocks
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Mat::zero(tgt.rank(d + self.shift), src.rank(d)))
    }

    pub fn scale(&self, c: &R) -> Self {
        ChainMap {
            shift: self.shift,
            blocks: self.blocks.iter().map(|(d, m)| (*d, m.scale(c))).collect(),
        }
    }

    /// `next` after `self`.
    pub fn then(&self, mid: &TwistedComplex<R>, next: &ChainMap<R>) -> Self {
        let mut blocks = BTreeMap::new();
        for (d, m) in &self.blocks {
            let n = next
                .blocks
                .get(&(d + self.shift))
                .cloned()
                .unwrap_or_else(|| Mat::zero(0, mid.rank(d + self.shift)));
            if n.rows > 0 {
                blocks.insert(*d, n.mul(m));
            }
        }
        ChainMap { shift: self.shift + next.shift, blocks }
    }

    /// Certify `d_tgt . psi = (-1)^shift psi . d_src` at every degree.
    pub fn check(&self, src: &TwistedComplex<R>, tgt: &TwistedComplex<R>) -> Result<(), Error> {
        let sign = if self.shift.rem_euclid(2) == 0 { 1 } else { -1 };
        for k in 0..src.basis.len() {
            let d = src.lo + k as i64;
            let psi_d = self.block(src, tgt, d);
            let psi_prev = self.block(src, tgt, d - 1);
            let d_src = if k == 0 {
                Mat::zero(src.rank(d - 1), src.rank(d))
            } else {
                src.d[k].clone()
            };
            let t = d + self.shift;
            let kt = t - tgt.lo;
            let d_tgt = if kt >= 0 && (kt as usize) < tgt.d.len() && kt > 0 {
                tgt.d[kt as usize].clone()
            } else {
                Mat::zero(tgt.rank(t - 1), tgt.rank(t))
            };
            let lhs = d_tgt.mul(&psi_d);
            let rhs = psi_prev.mul(&d_src);
            let rhs = if sign == 1 { rhs } else { rhs.neg() };
            let diff = lhs.sub(&rhs);
            for j in 0..diff.cols {
                for i in 0..diff.rows {
                    if !diff[(i, j)].is_zero() {
                        return Err(Error::NotAChainMap {
                            degree: d,
                            column: j,
                            residual: format!("{}", diff[(i, j)]),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Degree +1 map witnessing that two chain maps are homotopic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Homotopy<R> {
    /// maps degree d to degree d + 1
    pub blocks: BTreeMap<i64, Mat<R>>,
}

impl<R: EuclideanRing> Homotopy<R> {
    pub fn block(&self, src: &TwistedComplex<R>, tgt: &TwistedComplex<R>, d: i64) -> Mat<R> {
        self.blocks
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Mat::zero(tgt.rank(d + 1), src.rank(d)))
    }

    /// Certify `psi1 - psi0 = d_tgt . H + H . d_src`.
    pub fn check(
        &self,
        src: &TwistedComplex<R>,
        tgt: &TwistedComplex<R>,
        psi0: &ChainMap<R>,
        psi1: &ChainMap<R>,
    ) -> Result<(), Error> {
        for k in 0..src.basis.len() {
            let d = src.lo + k as i64;
            let h_d = self.block(src, tgt, d);
            let h_prev = self.block(src, tgt, d - 1);
            let d_src = if k == 0 {
                Mat::zero(src.rank(d - 1), src.rank(d))
            } else {
                src.d[k].clone()
            };
            let kt = d + 1 - tgt.lo;
            let d_tgt = if kt > 0 && (kt as usize) < tgt.d.len() {
                tgt.d[kt as usize].clone()
            } else {
                Mat::zero(tgt.rank(d), tgt.rank(d + 1))
            };
            let lhs = psi1.block(src, tgt, d).sub(&psi0.block(src, tgt, d));
            let rhs = d_tgt.mul(&h_d).add(&h_prev.mul(&d_src));
            let diff = lhs.sub(&rhs);
            for j in 0..diff.cols {
                for i in 0..diff.rows {
                    if !diff[(i, j)].is_zero() {
                        return Err(Error::NotAHomotopy {
                            degree: d,
                            column: j,
                            residual: format!("{}", diff[(i, j)]),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

fn slot(layer: &[TcGen], coeff_gen: &str, point: &str) -> Result<usize, Error> {
    layer
        .iter()
        .position(|g| g.coeff_gen == coeff_gen && g.point == point)
        .ok_or_else(|| Error::Internal(format!("missing target slot {coeff_gen}({point})")))
}

/// Chain map `Psi(a (x) x) = sum_y a.nu_{x,y} (x) y` induced by a
/// continuation cocycle `nu` between `(c0, m0)` and `(c1, m1)`.
/// Verifies the continuation equation first and certifies the chain map
/// identity afterwards.
pub fn induce_chain_map<R: EuclideanRing>(
    dga: &DgaPresentation<R>,
    f: &DgModulePresentation<R>,
    c0: &CriticalBasis,
    m0: &CocycleMatrix<R>,
    c1: &CriticalBasis,
    m1: &CocycleMatrix<R>,
    nu: &CocycleMatrix<R>,
    src: &TwistedComplex<R>,
    tgt: &TwistedComplex<R>,
) -> Result<ChainMap<R>, Error> {
    let diag = check_continuation_cocycle(c0, c1, dga, m0, m1, nu)?;
    if let Some(fail) = diag.failures.first() {
        return Err(Error::NotAChainMap {
            degree: c0.index_of(&fail.x).unwrap_or(0),
            column: 0,
            residual: format!("continuation equation fails at ({}, {}): {}", fail.x, fail.y, fail.residual),
        });
    }
    let map = assemble_cocycle_map(dga, f, nu, src, tgt, 0, false)?;
    map.check(src, tgt)?;
    Ok(map)
}

/// Homotopy `H(a (x) x) = (-1)^|a| sum_y a.h_{x,y} (x) y` induced by a
/// homotopy cocycle between two continuation cocycles.
#[allow(clippy::too_many_arguments)]
pub fn induce_homotopy<R: EuclideanRing>(
    dga: &DgaPresentation<R>,
    f: &DgModulePresentation<R>,
    c0: &CriticalBasis,
    m0: &CocycleMatrix<R>,
    c1: &CriticalBasis,
    m1: &CocycleMatrix<R>,
    nu0: &CocycleMatrix<R>,
    nu1: &CocycleMatrix<R>,
    h: &CocycleMatrix<R>,
    src: &TwistedComplex<R>,
    tgt: &TwistedComplex<R>,
) -> Result<(ChainMap<R>, ChainMap<R>, Homotopy<R>), Error> {
    let diag = check_homotopy_cocycle(c0, c1, dga, m0, m1, nu0, nu1, h)?;
    if let Some(fail) = diag.failures.first() {
        return Err(Error::NotAHomotopy {
            degree: c0.index_of(&fail.x).unwrap_or(0),
            column: 0,
            residual: format!("homotopy equation fails at ({}, {}): {}", fail.x, fail.y, fail.residual),
        });
    }
    let psi0 = induce_chain_map(dga, f, c0, m0, c1, m1, nu0, src, tgt)?;
    let psi1 = induce_chain_map(dga, f, c0, m0, c1, m1, nu1, src, tgt)?;
    let raw = assemble_cocycle_map(dga, f, h, src, tgt, 1, true)?;
    let hom = Homotopy { blocks: raw.blocks };
    hom.check(src, tgt, &psi0, &psi1)?;
    Ok((psi0, psi1, hom))
}

fn assemble_cocycle_map<R: EuclideanRing>(
    dga: &DgaPresentation<R>,
    f: &DgModulePresentation<R>,
    nu: &CocycleMatrix<R>,
    src: &TwistedComplex<R>,
    tgt: &TwistedComplex<R>,
    shift: i64,
    koszul: bool,
) -> Result<ChainMap<R>, Error> {
    let mut blocks = BTreeMap::new();
    for (k, layer) in src.basis.iter().enumerate() {
        let d = src.lo + k as i64;
        let t = d + shift;
        let kt = t - tgt.lo;
        let tgt_layer: &[TcGen] = if kt >= 0 && (kt as usize) < tgt.basis.len() {
            &tgt.basis[kt as usize]
        } else {
            &[]
        };
        let mut mat: Mat<R> = Mat::zero(tgt_layer.len(), layer.len());
        for (j, gen) in layer.iter().enumerate() {
            let alpha = f.gen_elt(&gen.coeff_gen)?;
            let sign_neg = koszul && alpha.degree.rem_euclid(2) == 1;
            for ((x, y), e) in &nu.entries {
                if x != &gen.point || e.is_zero() {
                    continue;
                }
                let acted = f.act(dga, &alpha, e)?;
                for (b, cf) in &acted.terms {
                    let i = slot(tgt_layer, b, y)?;
                    let cf = if sign_neg { -cf.clone() } else { cf.clone() };
                    mat[(i, j)] = mat[(i, j)].clone() + cf;
                }
            }
        }
        if !mat.is_zero_matrix() || !layer.is_empty() {
            blocks.insert(d, mat);
        }
    }
    Ok(ChainMap { shift, blocks })
}

// ---------------------------------------------------------------------------
// DGA morphisms and pushforward cocycles
// ---------------------------------------------------------------------------

/// Morphism of presented DGAs, determined by images of the source group
/// generators and of the positive-degree generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DgaMorphism<R> {
    pub grp_images: BTreeMap<String, GroupElt>,
    pub gen_images: BTreeMap<String, AlgebraElement<R>>,
}

impl<R: EuclideanRing> DgaMorphism<R> {
    pub fn apply_group_elt(
        &self,
        src: &GroupSpec,
        tgt: &GroupSpec,
        g: &GroupElt,
    ) -> Result<GroupElt, Error> {
        let mut acc = tgt.identity();
        for (gen, exp) in src.word_for(g) {
            let img = self.grp_images.get(&gen).ok_or_else(|| {
                Error::UnresolvedName { path: "morphism".into(), name: gen.clone() }
            })?;
            let step = if exp >= 0 { img.clone() } else { tgt.inv(img) };
            for _ in 0..exp.unsigned_abs() {
                acc = tgt.mul(&acc, &step);
            }
        }
        Ok(acc)
    }

    pub fn apply(
        &self,
        src_dga: &DgaPresentation<R>,
        tgt_dga: &DgaPresentation<R>,
        elt: &AlgebraElement<R>,
    ) -> Result<AlgebraElement<R>, Error> {
        let mut acc = AlgebraElement::zero(elt.degree);
        for (key, c) in &elt.terms {
            let img = match key {
                AlgKey::Grp(g) => {
                    let src_spec = &src_dga.group.as_ref().ok_or(Error::NoGroupDeclaration)?.spec;
                    let tgt_spec = &tgt_dga.group.as_ref().ok_or(Error::NoGroupDeclaration)?.spec;
                    tgt_dga.group_elt(self.apply_group_elt(src_spec, tgt_spec, g)?)
                }
                AlgKey::Gen(n) => self
                    .gen_images
                    .get(n)
                    .cloned()
                    .ok_or_else(|| Error::UnresolvedName {
                        path: "morphism".into(),
                        name: n.clone(),
                    })?,
            };
            if img.degree != elt.degree {
                return Err(Error::InvalidPresentation(format!(
                    "morphism image of a degree-{} term has degree {}",
                    elt.degree, img.degree
                )));
            }
            acc = acc.add(&img.scale(c));
        }
        Ok(acc)
    }

    /// Group homomorphism property on the defining relations, degree
    /// preservation, and compatibility with differentials and listed products.
    pub fn validate(
        &self,
        src_dga: &DgaPresentation<R>,
        tgt_dga: &DgaPresentation<R>,
    ) -> Result<(), Error> {
        if let Some(gd) = &src_dga.group {
            let tgt_spec = &tgt_dga.group.as_ref().ok_or(Error::NoGroupDeclaration)?.spec;
            for (name, _) in gd.spec.generator_elts() {
                if !self.grp_images.contains_key(&name) {
                    return Err(Error::UnresolvedName { path: "morphism".into(), name });
                }
            }
            match &gd.spec {
                GroupSpec::Trivial => {}
                GroupSpec::Finite { .. } => {
                    let elems = gd.spec.elements().expect("finite group enumerates");
                    for g in &elems {
                        for h in &elems {
                            let lhs = tgt_spec.mul(
                                &self.apply_group_elt(&gd.spec, tgt_spec, g)?,
                                &self.apply_group_elt(&gd.spec, tgt_spec, h)?,
                            );
                            let rhs =
                                self.apply_group_elt(&gd.spec, tgt_spec, &gd.spec.mul(g, h))?;
                            if lhs != rhs {
                                return Err(Error::InvalidPresentation(
                                    "morphism is not a group homomorphism".into(),
                                ));
                            }
                        }
                    }
                }
                GroupSpec::FreeAbelian { gens } => {
                    for i in 0..gens.len() {
                        for j in i + 1..gens.len() {
                            let a = &self.grp_images[&gens[i]];
                            let b = &self.grp_images[&gens[j]];
                            if tgt_spec.mul(a, b) != tgt_spec.mul(b, a) {
                                return Err(Error::InvalidPresentation(
                                    "images of commuting generators do not commute".into(),
                                ));
                            }
                        }
                    }
                }
                GroupSpec::KleinBottle { gens } => {
                    let a = &self.grp_images[&gens[0]];
                    let b = &self.grp_images[&gens[1]];
                    let lhs = tgt_spec.mul(&tgt_spec.mul(&tgt_spec.mul(a, b), &tgt_spec.inv(a)), b);
                    if lhs != tgt_spec.identity() {
                        return Err(Error::InvalidPresentation(
                            "image violates the Klein bottle relation".into(),
                        ));
                    }
                }
            }
        }
        // degree preservation and d-compatibility on positive-degree generators
        for (name, deg) in &src_dga.basis.gens {
            if src_dga.resolve_key(name)? != AlgKey::Gen(name.clone()) {
                continue;
            }
            let img = self.gen_images.get(name).ok_or_else(|| Error::UnresolvedName {
                path: "morphism".into(),
                name: name.clone(),
            })?;
            if img.degree != *deg {
                return Err(Error::InvalidPresentation(format!(
                    "image of {name} has degree {} instead of {deg}",
                    img.degree
                )));
            }
            let da = src_dga.diff(&src_dga.gen_elt(name)?)?;
            let lhs = self.apply(src_dga, tgt_dga, &da)?;
            let rhs = tgt_dga.diff(&self.apply(src_dga, tgt_dga, &src_dga.gen_elt(name)?)?)?;
            if lhs.sub(&rhs) != AlgebraElement::zero(lhs.degree) {
                return Err(Error::InvalidPresentation(format!(
                    "morphism does not commute with d on {name}"
                )));
            }
        }
        // multiplicativity on the listed products
        for ((a, b), prod) in &src_dga.mul_table {
            let lhs = self.apply(src_dga, tgt_dga, prod)?;
            let fa = self.apply(src_dga, tgt_dga, &src_dga.gen_elt(a)?)?;
            let fb = self.apply(src_dga, tgt_dga, &src_dga.gen_elt(b)?)?;
            let rhs = tgt_dga.mul(&fa, &fb)?;
            if lhs.sub(&rhs) != AlgebraElement::zero(lhs.degree) {
                return Err(Error::InvalidPresentation(format!(
                    "morphism is not multiplicative on ({a}, {b})"
                )));
            }
        }
        Ok(())
    }
}

/// Entrywise image of a cocycle under a DGA morphism (same kind, same
/// critical bases).
pub fn pushforward_cocycle<R: EuclideanRing>(
    src_dga: &DgaPresentation<R>,
    tgt_dga: &DgaPresentation<R>,
    phi: &DgaMorphism<R>,
    m: &CocycleMatrix<R>,
) -> Result<CocycleMatrix<R>, Error> {
    let mut out = CocycleMatrix::new(m.kind);
    for ((x, y), e) in &m.entries {
        let img = phi.apply(src_dga, tgt_dga, e)?;
        if !img.is_zero() {
            out.entries.insert((x.clone(), y.clone()), img);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Module morphisms
// ---------------------------------------------------------------------------

/// Morphism of DG modules over a fixed algebra, by images of generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleMorphism<R> {
    pub images: BTreeMap<String, ModuleElement<R>>,
}

impl<R: EuclideanRing> ModuleMorphism<R> {
    pub fn apply(&self, x: &ModuleElement<R>) -> Result<ModuleElement<R>, Error> {
        let mut acc = ModuleElement::zero(x.degree);
        for (g, c) in &x.terms {
            let img = self.images.get(g).ok_or_else(|| {
                Error::UnresolvedName { path: "module morphism".into(), name: g.clone() }
            })?;
            acc = acc.add(&img.scale(c));
        }
        Ok(acc)
    }

    /// Degree preservation, d-compatibility, and compatibility with the
    /// action of every listed algebra generator.
    pub fn validate(
        &self,
        dga: &DgaPresentation<R>,
        src: &DgModulePresentation<R>,
        tgt: &DgModulePresentation<R>,
    ) -> Result<(), Error> {
        if src.sense != tgt.sense {
            return Err(Error::NotModuleMorphism("mixed grading senses".into()));
        }
        for (name, deg) in &src.basis.gens {
            let img = self.images.get(name).ok_or_else(|| {
                Error::UnresolvedName { path: "module morphism".into(), name: name.clone() }
            })?;
            if img.degree != *deg {
                return Err(Error::NotModuleMorphism(format!(
                    "image of {name} has degree {} instead of {deg}",
                    img.degree
                )));
            }
            let x = src.gen_elt(name)?;
            let lhs = self.apply(&src.diff_elt(&x))?;
            let rhs = tgt.diff_elt(&self.apply(&x)?);
            if !lhs.sub(&rhs).is_zero() {
                return Err(Error::NotModuleMorphism(format!(
                    "does not commute with d on {name}"
                )));
            }
            for (alg_name, _) in &dga.basis.gens {
                let a = dga.gen_elt(alg_name)?;
                let lhs = self.apply(&src.act(dga, &x, &a)?)?;
                let rhs = tgt.act(dga, &self.apply(&x)?, &a)?;
                if !lhs.sub(&rhs).is_zero() {
                    return Err(Error::NotModuleMorphism(format!(
                        "does not commute with the action of {alg_name} on {name}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The chain map `phi (x) id` between twisted complexes built from the
    /// same cocycle.
    pub fn induce(
        &self,
        src: &TwistedComplex<R>,
        tgt: &TwistedComplex<R>,
    ) -> Result<ChainMap<R>, Error> {
        let mut blocks = BTreeMap::new();
        for (k, layer) in src.basis.iter().enumerate() {
            let d = src.lo + k as i64;
            let kt = d - tgt.lo;
            let tgt_layer: &[TcGen] = if kt >= 0 && (kt as usize) < tgt.basis.len() {
                &tgt.basis[kt as usize]
            } else {
                &[]
            };
            let mut mat: Mat<R> = Mat::zero(tgt_layer.len(), layer.len());
            for (j, gen) in layer.iter().enumerate() {
                let img = self.images.get(&gen.coeff_gen).ok_or_else(|| {
                    Error::UnresolvedName {
                        path: "module morphism".into(),
                        name: gen.coeff_gen.clone(),
                    }
                })?;
                for (b, c) in &img.terms {
                    let i = slot(tgt_layer, b, &gen.point)?;
                    mat[(i, j)] = mat[(i, j)].clone() + c.clone();
                }
            }
            blocks.insert(d, mat);
        }
        let map = ChainMap { shift: 0, blocks };
        map.check(src, tgt)?;
        Ok(map)
    }
}

// ---------------------------------------------------------------------------
// Mapping cone and quasi-isomorphisms
// ---------------------------------------------------------------------------

/// Mapping cone of a shift-0 chain map:
/// `Cone_k = Src_{k-1} (+) Tgt_k`, `d(c, e) = (-d c, psi c + d e)`.
pub fn mapping_cone<R: EuclideanRing>(
    src: &TwistedComplex<R>,
    tgt: &TwistedComplex<R>,
    psi: &ChainMap<R>,
) -> Result<TwistedComplex<R>, Error> {
    if psi.shift != 0 {
        return Err(Error::SchemaViolation {
            path: "chain map".into(),
            msg: "mapping cone requires a shift-0 chain map".into(),
        });
    }
    psi.check(src, tgt)?;
    let lo = (src.lo + 1).min(tgt.lo);
    let hi = (src.hi() + 1).max(tgt.hi());
    let mut basis = Vec::new();
    let mut d = Vec::new();
    let src_layer = |deg: i64| -> Vec<TcGen> {
        let k = deg - src.lo;
        if k >= 0 && (k as usize) < src.basis.len() {
            src.basis[k as usize].clone()
        } else {
            Vec::new()
        }
    };
    let tgt_layer = |deg: i64| -> Vec<TcGen> {
        let k = deg - tgt.lo;
        if k >= 0 && (k as usize) < tgt.basis.len() {
            tgt.basis[k as usize].clone()
        } else {
            Vec::new()
        }
    };
    for deg in lo..=hi {
        let mut layer = src_layer(deg - 1);
        layer.extend(tgt_layer(deg));
        basis.push(layer);

        let (sa, sb) = (src.rank(deg - 1), tgt.rank(deg));
        let (ta, tb) = (src.rank(deg - 2), tgt.rank(deg - 1));
        let rows = if deg == lo { 0 } else { ta + tb };
        let mut mat: Mat<R> = Mat::zero(rows, sa + sb);
        if deg > lo {
            let ks = deg - 1 - src.lo;
            if ks > 0 && (ks as usize) < src.d.len() {
                let ds = &src.d[ks as usize];
                for i in 0..ta {
                    for j in 0..sa {
                        mat[(i, j)] = -ds[(i, j)].clone();
                    }
                }
            }
            let pb = psi.block(src, tgt, deg - 1);
            for i in 0..tb {
                for j in 0..sa {
                    mat[(ta + i, j)] = pb[(i, j)].clone();
                }
            }
            let kt = deg - tgt.lo;
            if kt > 0 && (kt as usize) < tgt.d.len() {
                let dt = &tgt.d[kt as usize];
                for i in 0..tb {
                    for j in 0..sb {
                        mat[(ta + i, sa + j)] = dt[(i, j)].clone();
                    }
                }
            }
        }
        d.push(mat);
    }
    let cone = TwistedComplex { lo, basis, d };
    cone.certify_d_squared()?;
    Ok(cone)
}

/// A shift-0 chain map is a quasi-isomorphism iff its cone is acyclic.
pub fn is_quasi_iso<R: EuclideanRing>(
    src: &TwistedComplex<R>,
    tgt: &TwistedComplex<R>,
    psi: &ChainMap<R>,
) -> Result<bool, Error> {
    let cone = mapping_cone(src, tgt, psi)?;
    Ok(cone.homology()?.is_acyclic())
}

/// Matrix of the induced map on homology per source degree: column `j` holds
/// the target-class coordinates of the image of the j-th source generator.
pub fn induced_on_homology<R: EuclideanRing>(
    psi: &ChainMap<R>,
    src: &TwistedComplex<R>,
    tgt: &TwistedComplex<R>,
    src_h: &HomologyResult<R>,
    tgt_h: &HomologyResult<R>,
) -> Result<BTreeMap<i64, Mat<R>>, Error> {
    let mut out = BTreeMap::new();
    for (deg, sh) in &src_h.degrees {
        if sh.class_len() == 0 {
            continue;
        }
        let t = deg + psi.shift;
        let block = psi.block(src, tgt, *deg);
        let Some(th) = tgt_h.degrees.get(&t) else {
            // target degree absent: image classes must vanish there
            for rep in &sh.reps {
                if block.mul_vec(rep).iter().any(|c| !c.is_zero()) {
                    return Err(Error::Internal(
                        "image hits a degree with no homology data".into(),
                    ));
                }
            }
            continue;
        };
        let mut mat: Mat<R> = Mat::zero(th.class_len(), sh.class_len());
        for (j, rep) in sh.reps.iter().enumerate() {
            let img = block.mul_vec(rep);
            let cls = th
                .class_of(&img)
                .ok_or_else(|| Error::Internal("image of a cycle is not a cycle".into()))?;
            mat.set_column(j, &cls);
        }
        out.insert(*deg, mat);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedBasis;
    use crate::cocycle::CocycleKind;
    use crate::complex::build_twisted_complex;
    use crate::module::GradingSense;
    use crate::scalar::{Int, Laurent, LaurentRat, Rat};
    use num_bigint::BigInt;
    use num_traits::One;

    fn circle_dga<R: EuclideanRing>() -> DgaPresentation<R> {
        let spec = GroupSpec::FreeAbelian { gens: vec!["t".into()] };
        let t = spec.generator_elts()[0].1.clone();
        DgaPresentation {
            basis: GradedBasis { gens: vec![("1".into(), 0), ("t".into(), 0)], window: (0, 2) },
            unit: "1".into(),
            mul_table: BTreeMap::new(),
            diff_table: BTreeMap::new(),
            group: Some(crate::algebra::GroupDecl {
                spec: spec.clone(),
                proj: [("1".to_string(), spec.identity()), ("t".to_string(), t)]
                    .into_iter()
                    .collect(),
            }),
            involution: Some(BTreeMap::new()),
        }
    }

    fn circle_basis() -> CriticalBasis {
        CriticalBasis { points: vec![("min".into(), 0), ("max".into(), 1)], ambient_dim: 1 }
    }

    fn grp_elt<R: EuclideanRing>(dga: &DgaPresentation<R>, word: &str) -> AlgebraElement<R> {
        let spec = &dga.group.as_ref().unwrap().spec;
        dga.group_elt(spec.parse_elt(word).unwrap())
    }

    fn twisting<R: EuclideanRing>(entries: &[(&str, &str, AlgebraElement<R>)]) -> CocycleMatrix<R> {
        let mut m = CocycleMatrix::new(CocycleKind::Twisting);
        for (x, y, e) in entries {
            m.entries.insert((x.to_string(), y.to_string()), e.clone());
        }
        m
    }

    fn continuation<R: EuclideanRing>(
        entries: &[(&str, &str, AlgebraElement<R>)],
    ) -> CocycleMatrix<R> {
        let mut m = CocycleMatrix::new(CocycleKind::Continuation);
        for (x, y, e) in entries {
            m.entries.insert((x.to_string(), y.to_string()), e.clone());
        }
        m
    }

    fn trivial_int_module() -> DgModulePresentation<Int> {
        DgModulePresentation {
            basis: GradedBasis { gens: vec![("e".into(), 0)], window: (0, 0) },
            action: [(
                ("e".to_string(), "t".to_string()),
                ModuleElement::single(0, "e", BigInt::from(1)),
            )]
            .into_iter()
            .collect(),
            diff: BTreeMap::new(),
            sense: GradingSense::Homological,
        }
    }

    fn laurent_line() -> DgModulePresentation<LaurentRat> {
        DgModulePresentation {
            basis: GradedBasis { gens: vec![("e".into(), 0)], window: (0, 0) },
            action: [(
                ("e".to_string(), "t".to_string()),
                ModuleElement::single(0, "e", Laurent::monomial(1, Rat::one())),
            )]
            .into_iter()
            .collect(),
            diff: BTreeMap::new(),
            sense: GradingSense::Homological,
        }
    }

    #[test]
    fn self_continuation_is_quasi_iso() {
        let dga = circle_dga::<LaurentRat>();
        let c = circle_basis();
        let f = laurent_line();
        let one = grp_elt(&dga, "1");
        let t = grp_elt(&dga, "t");
        let tinv = grp_elt(&dga, "t^-1");
        let m0 = twisting(&[("max", "min", one.sub(&t))]);
        let m1 = twisting(&[("max", "min", tinv.sub(&one))]);
        let nu = continuation(&[("min", "min", one.clone()), ("max", "max", t.clone())]);
        let src = build_twisted_complex(&dga, &f, &c, &m0).unwrap();
        let tgt = build_twisted_complex(&dga, &f, &c, &m1).unwrap();
        let psi = induce_chain_map(&dga, &f, &c, &m0, &c, &m1, &nu, &src, &tgt).unwrap();
        assert!(is_quasi_iso(&src, &tgt, &psi).unwrap());

        // the zero map has the same source and target but is not one
        let zero = ChainMap::zero(0);
        assert!(!is_quasi_iso(&src, &tgt, &zero).unwrap());
    }

    #[test]
    fn homotopic_continuations() {
        let dga = circle_dga::<LaurentRat>();
        let c = circle_basis();
        let f = laurent_line();
        let one = grp_elt(&dga, "1");
        let t = grp_elt(&dga, "t");
        let tinv = grp_elt(&dga, "t^-1");
        let m0 = twisting(&[("max", "min", one.sub(&t))]);
        let m1 = twisting(&[("max", "min", tinv.sub(&one))]);
        let nu0 = continuation(&[("min", "min", one.clone()), ("max", "max", t.clone())]);
        let nu1 = continuation(&[("min", "min", tinv.clone()), ("max", "max", one.clone())]);
        let mut h = CocycleMatrix::new(CocycleKind::Homotopy);
        h.entries.insert(("min".into(), "max".into()), one.clone());
        let src = build_twisted_complex(&dga, &f, &c, &m0).unwrap();
        let tgt = build_twisted_complex(&dga, &f, &c, &m1).unwrap();
        let (psi0, psi1, hom) =
            induce_homotopy(&dga, &f, &c, &m0, &c, &m1, &nu0, &nu1, &h, &src, &tgt).unwrap();
        hom.check(&src, &tgt, &psi0, &psi1).unwrap();
    }

    #[test]
    fn degree_two_selfmap_composite_is_doubling() {
        // trivial coefficients: both complexes have zero differential,
        // phi_* = (1, 2), phi_! = (2, 1), composite 2.Id on homology
        let dga = circle_dga::<Int>();
        let c = circle_basis();
        let f = trivial_int_module();
        let one = grp_elt(&dga, "1");
        let t = grp_elt(&dga, "t");
        let t2 = grp_elt(&dga, "t^2");
        let m_pull = twisting(&[("max", "min", one.sub(&t2))]);
        let m_base = twisting(&[("max", "min", one.sub(&t))]);
        let nu_fwd =
            continuation(&[("min", "min", one.clone()), ("max", "max", one.add(&t))]);
        let nu_back =
            continuation(&[("min", "min", one.add(&t)), ("max", "max", one.clone())]);
        let e = build_twisted_complex(&dga, &f, &c, &m_pull).unwrap();
        let b = build_twisted_complex(&dga, &f, &c, &m_base).unwrap();
        let fwd = induce_chain_map(&dga, &f, &c, &m_pull, &c, &m_base, &nu_fwd, &e, &b).unwrap();
        let back = induce_chain_map(&dga, &f, &c, &m_base, &c, &m_pull, &nu_back, &b, &e).unwrap();
        let composite = back.then(&e, &fwd);
        let bh = b.homology().unwrap();
        let induced = induced_on_homology(&composite, &b, &b, &bh, &bh).unwrap();
        for deg in [0i64, 1] {
            let m = &induced[&deg];
            assert_eq!(m.rows, 1);
            assert_eq!(m[(0, 0)], BigInt::from(2));
        }
        // a degree-two map is not a quasi-isomorphism over Z
        assert!(!is_quasi_iso(&b, &b, &composite).unwrap());
    }

    #[test]
    fn pushforward_along_degree_two_morphism() {
        let dga = circle_dga::<Int>();
        let spec = &dga.group.as_ref().unwrap().spec;
        let phi = DgaMorphism {
            grp_images: [("t".to_string(), spec.parse_elt("t^2").unwrap())]
                .into_iter()
                .collect(),
            gen_images: BTreeMap::new(),
        };
        phi.validate(&dga, &dga).unwrap();
        let one = grp_elt(&dga, "1");
        let t = grp_elt(&dga, "t");
        let t2 = grp_elt(&dga, "t^2");
        let m = twisting(&[("max", "min", one.sub(&t))]);
        let pm = pushforward_cocycle(&dga, &dga, &phi, &m).unwrap();
        assert_eq!(pm.entry("max", "min", 0), one.sub(&t2));
    }

    #[test]
    fn bad_continuation_rejected() {
        let dga = circle_dga::<LaurentRat>();
        let c = circle_basis();
        let f = laurent_line();
        let one = grp_elt(&dga, "1");
        let t = grp_elt(&dga, "t");
        let tinv = grp_elt(&dga, "t^-1");
        let m0 = twisting(&[("max", "min", one.sub(&t))]);
        let m1 = twisting(&[("max", "min", tinv.sub(&one))]);
        // wrong max entry: -t^-1 instead of t
        let nu = continuation(&[("min", "min", one.clone()), ("max", "max", tinv.neg())]);
        let src = build_twisted_complex(&dga, &f, &c, &m0).unwrap();
        let tgt = build_twisted_complex(&dga, &f, &c, &m1).unwrap();
        let err = induce_chain_map(&dga, &f, &c, &m0, &c, &m1, &nu, &src, &tgt).unwrap_err();
        assert!(matches!(err, Error::NotAChainMap { .. }));
    }

    #[test]
    fn module_morphism_multiplication_by_two() {
        let dga = circle_dga::<Int>();
        let c = circle_basis();
        let f = trivial_int_module();
        let one = grp_elt(&dga, "1");
        let t = grp_elt(&dga, "t");
        let m = twisting(&[("max", "min", one.sub(&t))]);
        let x = build_twisted_complex(&dga, &f, &c, &m).unwrap();
        let phi = ModuleMorphism {
            images: [("e".to_string(), ModuleElement::single(0, "e", BigInt::from(2)))]
                .into_iter()
                .collect(),
        };
        phi.validate(&dga, &f, &f).unwrap();
        let map = phi.induce(&x, &x).unwrap();
        assert_eq!(map.block(&x, &x, 0)[(0, 0)], BigInt::from(2));
    }
}
