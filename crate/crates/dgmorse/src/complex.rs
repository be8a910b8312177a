//! Assembly of twisted chain complexes, cohomological complexes and lifted
//! group-ring complexes, all with certified d^2 = 0.

use std::collections::BTreeMap;

use crate::algebra::DgaPresentation;
use crate::cocycle::{CocycleKind, CocycleMatrix, CriticalBasis};
use crate::error::Error;
use crate::group::{GroupElt, GroupSpec};
use crate::matrix::Mat;
use crate::module::{DgModulePresentation, GradingSense};
use crate::scalar::EuclideanRing;

/// Generator of a twisted (co)chain complex: coefficient generator tensor
/// critical point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TcGen {
    pub coeff_gen: String,
    pub coeff_degree: i64,
    pub point: String,
    pub point_index: i64,
}

impl TcGen {
    pub fn label(&self) -> String {
        format!("{}({})", self.coeff_gen, self.point)
    }
}

/// Finite free homological complex: `d[k]` maps degree `lo + k` to
/// `lo + k - 1` (`d[0]` has zero rows).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwistedComplex<R> {
    pub lo: i64,
    pub basis: Vec<Vec<TcGen>>,
    pub d: Vec<Mat<R>>,
}

/// Finite free cochain complex: `d[k]` maps degree `lo + k` to `lo + k + 1`
/// (the last one has zero rows).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CochainComplex<R> {
    pub lo: i64,
    pub basis: Vec<Vec<TcGen>>,
    pub d: Vec<Mat<R>>,
}

impl<R: EuclideanRing> TwistedComplex<R> {
    pub fn hi(&self) -> i64 {
        self.lo + self.basis.len() as i64 - 1
    }

    pub fn rank(&self, degree: i64) -> usize {
        let k = degree - self.lo;
        if k < 0 || k as usize >= self.basis.len() {
            0
        } else {
            self.basis[k as usize].len()
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        let mut chi = 0i64;
        for (k, b) in self.basis.iter().enumerate() {
            let deg = self.lo + k as i64;
            if deg.rem_euclid(2) == 0 {
                chi += b.len() as i64;
            } else {
                chi -= b.len() as i64;
            }
        }
        chi
    }

    /// Certify that consecutive differentials compose to zero.
    pub fn certify_d_squared(&self) -> Result<(), Error> {
        certify_squared_zero(&self.d, |k| self.lo + k as i64)
    }
}

impl<R: EuclideanRing> CochainComplex<R> {
    pub fn hi(&self) -> i64 {
        self.lo + self.basis.len() as i64 - 1
    }

    pub fn certify_d_squared(&self) -> Result<(), Error> {
        // d[k+1] . d[k] = 0
        for k in 0..self.d.len().saturating_sub(1) {
            let comp = self.d[k + 1].mul(&self.d[k]);
            for j in 0..comp.cols {
                if (0..comp.rows).any(|i| !comp[(i, j)].is_zero()) {
                    return Err(Error::DSquaredNonzero { degree: self.lo + k as i64, column: j });
                }
            }
        }
        Ok(())
    }

    /// View as a homological complex by negating degrees, for homology
    /// computations: H^t here is H_(-t) there.
    pub fn as_homological(&self) -> TwistedComplex<R> {
        let n = self.basis.len();
        let lo = -(self.lo + n as i64 - 1);
        let basis: Vec<Vec<TcGen>> = self.basis.iter().rev().cloned().collect();
        // the map out of reversed slot k is the cochain map out of slot
        // n-1-k, which raises cochain degree, i.e. lowers reversed degree
        let mut d = Vec::with_capacity(n);
        for k in 0..n {
            let orig = n - 1 - k;
            if orig + 1 < n {
                d.push(self.d[orig].clone());
            } else {
                d.push(Mat::zero(0, self.basis[orig].len()));
            }
        }
        TwistedComplex { lo, basis, d }
    }
}

fn certify_squared_zero<R: EuclideanRing>(
    d: &[Mat<R>],
    degree_of: impl Fn(usize) -> i64,
) -> Result<(), Error> {
    for k in 1..d.len() {
        let comp = d[k - 1].mul(&d[k]);
        for j in 0..comp.cols {
            if (0..comp.rows).any(|i| !comp[(i, j)].is_zero()) {
                return Err(Error::DSquaredNonzero { degree: degree_of(k), column: j });
            }
        }
    }
    Ok(())
}

fn grade_pairs(
    coeff: &[(String, i64)],
    points: &[(String, i64)],
    total: impl Fn(i64, i64) -> i64,
) -> BTreeMap<i64, Vec<TcGen>> {
    let mut by_degree: BTreeMap<i64, Vec<TcGen>> = BTreeMap::new();
    let mut slots: Vec<(i64, usize, usize, TcGen)> = Vec::new();
    for (p_pos, (pt, ix)) in points.iter().enumerate() {
        for (g_pos, (g, gd)) in coeff.iter().enumerate() {
            slots.push((
                *ix,
                p_pos,
                g_pos,
                TcGen {
                    coeff_gen: g.clone(),
                    coeff_degree: *gd,
                    point: pt.clone(),
                    point_index: *ix,
                },
            ));
        }
    }
    // order within a degree: by critical index (the canonical filtration is
    // then a basis prefix), then declaration order
    slots.sort_by_key(|(ix, p_pos, g_pos, _)| (*ix, *p_pos, *g_pos));
    for (_, _, _, gen) in slots {
        let deg = total(gen.coeff_degree, gen.point_index);
        by_degree.entry(deg).or_default().push(gen);
    }
    by_degree
}

fn dense_layers(by_degree: BTreeMap<i64, Vec<TcGen>>) -> (i64, Vec<Vec<TcGen>>) {
    let Some((&lo, _)) = by_degree.first_key_value() else {
        return (0, Vec::new());
    };
    let hi = *by_degree.last_key_value().unwrap().0;
    let mut layers = Vec::with_capacity((hi - lo + 1) as usize);
    for deg in lo..=hi {
        layers.push(by_degree.get(&deg).cloned().unwrap_or_default());
    }
    (lo, layers)
}

fn row_index(layer: &[TcGen], coeff_gen: &str, point: &str) -> Option<usize> {
    layer
        .iter()
        .position(|g| g.coeff_gen == coeff_gen && g.point == point)
}

/// The twisted chain complex `F (x) <Crit(f)>` with
/// `d(a(x)x) = da (x) x + (-1)^|a| sum_y a.m_{x,y} (x) y`.
pub fn build_twisted_complex<R: EuclideanRing>(
    dga: &DgaPresentation<R>,
    f: &DgModulePresentation<R>,
    c: &CriticalBasis,
    m: &CocycleMatrix<R>,
) -> Result<TwistedComplex<R>, Error> {
    if f.sense != GradingSense::Homological {
        return Err(Error::SchemaViolation {
            path: "module".into(),
            msg: "twisted chain complex requires a homological module".into(),
        });
    }
    if m.kind != CocycleKind::Twisting {
        return Err(Error::SchemaViolation {
            path: "cocycle".into(),
            msg: "twisted chain complex requires a twisting cocycle".into(),
        });
    }
    m.validate(c, c, dga)?;
    let by_degree = grade_pairs(&f.basis.gens, &c.points, |gd, ix| gd + ix);
    let (lo, basis) = dense_layers(by_degree);
    let n = basis.len();

    let mut d = Vec::with_capacity(n);
    for k in 0..n {
        let src = &basis[k];
        let tgt: &[TcGen] = if k == 0 { &[] } else { &basis[k - 1] };
        let mut mat: Mat<R> = Mat::zero(tgt.len(), src.len());
        for (j, gen) in src.iter().enumerate() {
            let alpha = f.gen_elt(&gen.coeff_gen)?;
            // tensor part: da (x) x
            let da = f.diff_elt(&alpha);
            for (b, cf) in &da.terms {
                let i = row_index(tgt, b, &gen.point).ok_or_else(|| {
                    Error::Internal(format!("missing target slot {b}({})", gen.point))
                })?;
                mat[(i, j)] = mat[(i, j)].clone() + cf.clone();
            }
            // cocycle part: (-1)^|a| a.m_{x,y} (x) y
            let sign_neg = alpha.degree.rem_euclid(2) == 1;
            for ((x, y), e) in &m.entries {
                if x != &gen.point || e.is_zero() {
                    continue;
                }
                let acted = f.act(dga, &alpha, e)?;
                for (b, cf) in &acted.terms {
                    let i = row_index(tgt, b, y).ok_or_else(|| {
                        Error::Internal(format!("missing target slot {b}({y})"))
                    })?;
                    let cf = if sign_neg { -cf.clone() } else { cf.clone() };
                    mat[(i, j)] = mat[(i, j)].clone() + cf;
                }
            }
        }
        d.push(mat);
    }
    let out = TwistedComplex { lo, basis, d };
    out.certify_d_squared()?;
    Ok(out)
}

/// The cohomological Morse complex `G (x) <Crit(f)^v>` with
/// `d(a(x)x^v) = da (x) x^v + (-1)^|a| sum a.m_{x^v,y^v} (x) y^v`
/// (dual indices unchanged: |x^v| = |x|).
pub fn build_cochain_complex<R: EuclideanRing>(
    dga: &DgaPresentation<R>,
    g: &DgModulePresentation<R>,
    c_dual: &CriticalBasis,
    m: &CocycleMatrix<R>,
) -> Result<CochainComplex<R>, Error> {
    if g.sense != GradingSense::Cohomological {
        return Err(Error::SchemaViolation {
            path: "module".into(),
            msg: "cochain complex requires a cohomological module".into(),
        });
    }
    if m.kind != CocycleKind::CohTwisting {
        return Err(Error::SchemaViolation {
            path: "cocycle".into(),
            msg: "cochain complex requires a cohomological twisting cocycle".into(),
        });
    }
    m.validate(c_dual, c_dual, dga)?;
    let by_degree = grade_pairs(&g.basis.gens, &c_dual.points, |gd, ix| gd + ix);
    let (lo, basis) = dense_layers(by_degree);
    let n = basis.len();

    let mut d = Vec::with_capacity(n);
    for k in 0..n {
        let src = &basis[k];
        let tgt: &[TcGen] = if k + 1 < n { &basis[k + 1] } else { &[] };
        let mut mat: Mat<R> = Mat::zero(tgt.len(), src.len());
        for (j, gen) in src.iter().enumerate() {
            let beta = g.gen_elt(&gen.coeff_gen)?;
            let db = g.diff_elt(&beta);
            for (b, cf) in &db.terms {
                let i = row_index(tgt, b, &gen.point).ok_or_else(|| {
                    Error::Internal(format!("missing target slot {b}({})", gen.point))
                })?;
                mat[(i, j)] = mat[(i, j)].clone() + cf.clone();
            }
            let sign_neg = beta.degree.rem_euclid(2) == 1;
            for ((a, b_pt), e) in &m.entries {
                if a != &gen.point || e.is_zero() {
                    continue;
                }
                let acted = g.act(dga, &beta, e)?;
                for (bg, cf) in &acted.terms {
                    let i = row_index(tgt, bg, b_pt).ok_or_else(|| {
                        Error::Internal(format!("missing target slot {bg}({b_pt})"))
                    })?;
                    let cf = if sign_neg { -cf.clone() } else { cf.clone() };
                    mat[(i, j)] = mat[(i, j)].clone() + cf;
                }
            }
        }
        d.push(mat);
    }
    let out = CochainComplex { lo, basis, d };
    out.certify_d_squared()?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Lifted complex over the group ring
// ---------------------------------------------------------------------------

/// Element of the group ring with coefficients in `R`.
pub type GroupRing<R> = BTreeMap<GroupElt, R>;

pub fn gr_zero<R: EuclideanRing>() -> GroupRing<R> {
    BTreeMap::new()
}

pub fn gr_is_zero<R: EuclideanRing>(a: &GroupRing<R>) -> bool {
    a.values().all(|c| c.is_zero())
}

pub fn gr_add<R: EuclideanRing>(a: &GroupRing<R>, b: &GroupRing<R>) -> GroupRing<R> {
    let mut out = a.clone();
    for (g, c) in b {
        let cur = out.remove(g);
        let s = match cur {
            Some(x) => x + c.clone(),
            None => c.clone(),
        };
        if !s.is_zero() {
            out.insert(g.clone(), s);
        }
    }
    out
}

pub fn gr_mul<R: EuclideanRing>(
    spec: &GroupSpec,
    a: &GroupRing<R>,
    b: &GroupRing<R>,
) -> GroupRing<R> {
    let mut out: GroupRing<R> = BTreeMap::new();
    for (g, cg) in a {
        for (h, ch) in b {
            let gh = spec.mul(g, h);
            let prod = cg.clone() * ch.clone();
            let cur = out.remove(&gh);
            let s = match cur {
                Some(x) => x + prod,
                None => prod,
            };
            if !s.is_zero() {
                out.insert(gh, s);
            }
        }
    }
    out
}

pub fn gr_render<R: EuclideanRing>(spec: &GroupSpec, a: &GroupRing<R>) -> String {
    if gr_is_zero(a) {
        return "0".into();
    }
    a.iter()
        .map(|(g, c)| format!("({c})*{}", spec.render_elt(g)))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Free based complex over the declared group ring: one generator per
/// critical point, graded by index, `delta(x) = sum m^_{x,y} y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupRingComplex<R> {
    pub spec: GroupSpec,
    /// basis[p] = critical points of index p
    pub basis: Vec<Vec<String>>,
    /// d[p][i][j]: coefficient of basis[p-1][i] in delta(basis[p][j])
    pub d: Vec<Vec<Vec<GroupRing<R>>>>,
}

impl<R: EuclideanRing> GroupRingComplex<R> {
    pub fn certify_d_squared(&self) -> Result<(), Error> {
        for p in 2..self.basis.len() {
            let rows = self.basis[p - 2].len();
            let mid = self.basis[p - 1].len();
            for j in 0..self.basis[p].len() {
                for i in 0..rows {
                    let mut acc = gr_zero::<R>();
                    for k in 0..mid {
                        acc = gr_add(&acc, &gr_mul(&self.spec, &self.d[p - 1][i][k], &self.d[p][k][j]));
                    }
                    if !gr_is_zero(&acc) {
                        return Err(Error::DSquaredNonzero { degree: p as i64, column: j });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Lifted complex over the declared group ring: project index-gap-1 cocycle
/// entries and certify that the projected differential squares to zero.
pub fn lifted_complex<R: EuclideanRing>(
    c: &CriticalBasis,
    m: &CocycleMatrix<R>,
    dga: &DgaPresentation<R>,
) -> Result<GroupRingComplex<R>, Error> {
    let gd = dga.group.as_ref().ok_or(Error::NoGroupDeclaration)?;
    m.validate(c, c, dga)?;
    let n = c.ambient_dim;
    let mut basis: Vec<Vec<String>> = vec![Vec::new(); (n + 1) as usize];
    for (pt, ix) in &c.points {
        basis[*ix as usize].push(pt.clone());
    }
    let mut d = Vec::with_capacity(basis.len());
    d.push(Vec::new());
    for p in 1..basis.len() {
        let rows = basis[p - 1].len();
        let cols = basis[p].len();
        let mut mat = vec![vec![gr_zero::<R>(); cols]; rows];
        for (j, x) in basis[p].iter().enumerate() {
            for (i, y) in basis[p - 1].iter().enumerate() {
                let e = m.entry(x, y, 0);
                if !e.is_zero() {
                    mat[i][j] = dga.project_h0(&e)?;
                }
            }
        }
        d.push(mat);
    }
    let out = GroupRingComplex { spec: gd.spec.clone(), basis, d };
    out.certify_d_squared()?;
    Ok(out)
}

/// Chain map between lifted complexes, one group-ring block per index.
/// `blocks[p][i][j]` is the coefficient of the i-th target point on the j-th
/// source point of index `p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LiftedMap<R> {
    pub blocks: Vec<Vec<Vec<GroupRing<R>>>>,
}

impl<R: EuclideanRing> LiftedMap<R> {
    /// Certifies invertibility over the group ring by exhibiting the map as
    /// a monomial matrix in every index: exactly one nonzero entry per row
    /// and per column, each a single group element with a unit coefficient.
    /// This is a sufficient condition, not a general unit test.
    pub fn is_unit_monomial(&self) -> bool {
        for block in &self.blocks {
            let rows = block.len();
            if block.iter().any(|r| r.len() != rows) {
                return false;
            }
            let mut col_used = vec![false; rows];
            for row in block {
                let mut hit = None;
                for (j, e) in row.iter().enumerate() {
                    if !gr_is_zero(e) {
                        if hit.is_some() {
                            return false;
                        }
                        hit = Some(j);
                    }
                }
                let Some(j) = hit else { return false };
                if col_used[j] || row[j].len() != 1 {
                    return false;
                }
                if !row[j].values().next().unwrap().is_unit() {
                    return false;
                }
                col_used[j] = true;
            }
        }
        true
    }
}

/// Project a gap-0 continuation cocycle to a map of lifted complexes and
/// certify that it commutes with the projected differentials.
pub fn lifted_continuation_map<R: EuclideanRing>(
    src: &GroupRingComplex<R>,
    tgt: &GroupRingComplex<R>,
    nu: &CocycleMatrix<R>,
    dga: &DgaPresentation<R>,
) -> Result<LiftedMap<R>, Error> {
    if nu.kind != CocycleKind::Continuation {
        return Err(Error::SchemaViolation {
            path: "cocycle".into(),
            msg: "lifted map requires a continuation cocycle".into(),
        });
    }
    if src.basis.len() != tgt.basis.len() {
        return Err(Error::SchemaViolation {
            path: "lifted map".into(),
            msg: "source and target complexes have different ambient dimensions".into(),
        });
    }
    let spec = &src.spec;
    let mut blocks = Vec::with_capacity(src.basis.len());
    for p in 0..src.basis.len() {
        let rows = tgt.basis[p].len();
        let cols = src.basis[p].len();
        let mut block = vec![vec![gr_zero::<R>(); cols]; rows];
        for (j, x) in src.basis[p].iter().enumerate() {
            for (i, y) in tgt.basis[p].iter().enumerate() {
                let e = nu.entry(x, y, 0);
                if !e.is_zero() {
                    block[i][j] = dga.project_h0(&e)?;
                }
            }
        }
        blocks.push(block);
    }
    // the projected map must intertwine the projected differentials
    for p in 1..src.basis.len() {
        for (j, _x) in src.basis[p].iter().enumerate() {
            for i in 0..tgt.basis[p - 1].len() {
                let mut lhs = gr_zero::<R>();
                for k in 0..src.basis[p - 1].len() {
                    lhs = gr_add(&lhs, &gr_mul(spec, &src.d[p][k][j], &blocks[p - 1][i][k]));
                }
                let mut rhs = gr_zero::<R>();
                for k in 0..tgt.basis[p].len() {
                    rhs = gr_add(&rhs, &gr_mul(spec, &blocks[p][k][j], &tgt.d[p][i][k]));
                }
                if lhs != rhs {
                    return Err(Error::NotAChainMap {
                        degree: p as i64,
                        column: j,
                        residual: gr_render(spec, &gr_add(&lhs, &rhs.iter().map(|(g, c)| (g.clone(), R::zero() - c.clone())).collect())),
                    });
                }
            }
        }
    }
    Ok(LiftedMap { blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraElement, GradedBasis, GroupDecl};
    use crate::module::ModuleElement;
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

    fn circle_basis() -> CriticalBasis {
        CriticalBasis { points: vec![("min".into(), 0), ("max".into(), 1)], ambient_dim: 1 }
    }

    fn circle_m<R: EuclideanRing>(dga: &DgaPresentation<R>) -> CocycleMatrix<R> {
        let spec = &dga.group.as_ref().unwrap().spec;
        let one = dga.group_elt(spec.identity());
        let t = dga.group_elt(spec.parse_elt("t").unwrap());
        let mut m = CocycleMatrix::new(CocycleKind::Twisting);
        m.entries.insert(("max".into(), "min".into()), one.sub(&t));
        m
    }

    #[test]
    fn circle_with_laurent_line_is_acyclic_shape() {
        // F = Q[t,t^-1], m = 1 - t: differential [1 - t]
        let dga = circle_dga::<LaurentRat>();
        let e = "e".to_string();
        let f: DgModulePresentation<LaurentRat> = DgModulePresentation {
            basis: GradedBasis { gens: vec![(e.clone(), 0)], window: (0, 0) },
            action: [(
                (e.clone(), "t".to_string()),
                ModuleElement::single(0, &e, Laurent::monomial(1, Rat::one())),
            )]
            .into_iter()
            .collect(),
            diff: BTreeMap::new(),
            sense: crate::module::GradingSense::Homological,
        };
        let m = circle_m(&dga);
        let x = build_twisted_complex(&dga, &f, &circle_basis(), &m).unwrap();
        assert_eq!(x.lo, 0);
        assert_eq!(x.basis.len(), 2);
        let one_minus_t: LaurentRat =
            Laurent::constant(Rat::one()) - Laurent::monomial(1, Rat::one());
        assert_eq!(x.d[1][(0, 0)], one_minus_t);
        assert_eq!(x.euler_characteristic(), 0);
    }

    #[test]
    fn trivial_coefficients_give_classical_shape() {
        // F = Z with t acting by 1: differential is the augmentation of m
        let dga = circle_dga::<Int>();
        let e = "e".to_string();
        let f: DgModulePresentation<Int> = DgModulePresentation {
            basis: GradedBasis { gens: vec![(e.clone(), 0)], window: (0, 0) },
            action: [((e.clone(), "t".to_string()), ModuleElement::single(0, &e, Int::from(1)))]
                .into_iter()
                .collect(),
            diff: BTreeMap::new(),
            sense: crate::module::GradingSense::Homological,
        };
        let m = circle_m(&dga);
        let x = build_twisted_complex(&dga, &f, &circle_basis(), &m).unwrap();
        assert!(x.d[1].is_zero_matrix());
    }

    #[test]
    fn hopf_complex_shape() {
        // free algebra on u in degree 1, fiber module e0, e1 with e0.u = e1
        let spec = GroupSpec::Trivial;
        let dga: DgaPresentation<Int> = DgaPresentation {
            basis: GradedBasis { gens: vec![("1".into(), 0), ("u".into(), 1)], window: (0, 2) },
            unit: "1".into(),
            mul_table: BTreeMap::new(),
            diff_table: BTreeMap::new(),
            group: Some(GroupDecl {
                spec: spec.clone(),
                proj: [("1".to_string(), spec.identity())].into_iter().collect(),
            }),
            involution: None,
        };
        let f: DgModulePresentation<Int> = DgModulePresentation {
            basis: GradedBasis {
                gens: vec![("e0".into(), 0), ("e1".into(), 1)],
                window: (0, 1),
            },
            action: [(
                ("e0".to_string(), "u".to_string()),
                ModuleElement::single(1, "e1", Int::from(1)),
            )]
            .into_iter()
            .collect(),
            diff: BTreeMap::new(),
            sense: crate::module::GradingSense::Homological,
        };
        let c = CriticalBasis {
            points: vec![("min".into(), 0), ("max".into(), 2)],
            ambient_dim: 2,
        };
        let mut m = CocycleMatrix::new(CocycleKind::Twisting);
        m.entries.insert(
            ("max".into(), "min".into()),
            AlgebraElement::single(1, crate::algebra::AlgKey::Gen("u".into()), Int::from(1)),
        );
        let x = build_twisted_complex(&dga, &f, &c, &m).unwrap();
        // degrees 0..3, one generator each; the only nonzero differential is
        // e0(max) -> e1(min) in degree 2
        assert_eq!(x.lo, 0);
        assert_eq!(x.basis.iter().map(|b| b.len()).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        assert_eq!(x.d[2][(0, 0)], Int::from(1));
        assert!(x.d[1].is_zero_matrix());
        assert!(x.d[3].is_zero_matrix());
    }

    #[test]
    fn rp2_lifted_complex() {
        // Z/2 group ring: differentials 1+g then g-1, (1+g)(g-1) = 0
        let spec = GroupSpec::cyclic(2, "g");
        let g = spec.parse_elt("g").unwrap();
        let dga: DgaPresentation<Int> = DgaPresentation {
            basis: GradedBasis { gens: vec![("1".into(), 0), ("g".into(), 0)], window: (0, 2) },
            unit: "1".into(),
            mul_table: BTreeMap::new(),
            diff_table: BTreeMap::new(),
            group: Some(GroupDecl {
                spec: spec.clone(),
                proj: [("1".to_string(), spec.identity()), ("g".to_string(), g.clone())]
                    .into_iter()
                    .collect(),
            }),
            involution: None,
        };
        let c = CriticalBasis {
            points: vec![("e0".into(), 0), ("e1".into(), 1), ("e2".into(), 2)],
            ambient_dim: 2,
        };
        let one = dga.group_elt(spec.identity());
        let ge = dga.group_elt(g);
        let mut m = CocycleMatrix::new(CocycleKind::Twisting);
        m.entries.insert(("e1".into(), "e0".into()), ge.sub(&one));
        m.entries.insert(("e2".into(), "e1".into()), one.add(&ge));
        let l = lifted_complex(&c, &m, &dga).unwrap();
        assert_eq!(l.basis, vec![vec!["e0".to_string()], vec!["e1".to_string()], vec!["e2".to_string()]]);
        // delta^2 certified on construction; double-check the product is zero
        let prod = gr_mul(&l.spec, &l.d[1][0][0], &l.d[2][0][0]);
        assert!(gr_is_zero(&prod));
    }

    #[test]
    fn circle_lifted_continuation_is_unit_monomial() {
        let b = crate::examples::load_example("circle").unwrap();
        let ctx = crate::scalar::ScalarCtx::Int;
        let dga = crate::bundle::inst_dga::<Int>(&ctx, &b.dga).unwrap();
        let c = b.critical("morse").unwrap();
        let m = crate::bundle::inst_cocycle::<Int>(&ctx, &b.cocycle("m").unwrap().matrix).unwrap();
        let malt =
            crate::bundle::inst_cocycle::<Int>(&ctx, &b.cocycle("malt").unwrap().matrix).unwrap();
        let nu0 = crate::bundle::inst_cocycle::<Int>(&ctx, &b.cocycle("nu0").unwrap().matrix).unwrap();
        let src = lifted_complex(c, &m, &dga).unwrap();
        let tgt = lifted_complex(c, &malt, &dga).unwrap();
        let psi = lifted_continuation_map(&src, &tgt, &nu0, &dga).unwrap();
        assert!(psi.is_unit_monomial());
        // the zero continuation is a chain map but carries no unit certificate
        let zero = CocycleMatrix::new(CocycleKind::Continuation);
        let zmap = lifted_continuation_map(&src, &tgt, &zero, &dga).unwrap();
        assert!(!zmap.is_unit_monomial());
    }
}
