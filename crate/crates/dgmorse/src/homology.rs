//! Homology of finite free complexes over Euclidean rings via Smith normal
//! form, local-coefficient homology of lifted complexes, and the closed
//! degree-zero formula used as a cross-check.

use std::collections::BTreeMap;

use crate::algebra::DgaPresentation;
use crate::complex::{CochainComplex, GroupRingComplex, TwistedComplex};
use crate::error::Error;
use crate::group::{GroupElt, GroupSpec};
use crate::matrix::{invert, snf_checked, Mat};
use crate::module::DgModulePresentation;
use crate::scalar::EuclideanRing;

/// Homology in one degree, with enough transform data retained to express an
/// arbitrary cycle in the chosen generators.
#[derive(Clone, Debug)]
pub struct DegreeHomology<R> {
    pub free_rank: usize,
    /// Non-unit invariant factors in divisibility order, unit-normalized.
    pub torsion: Vec<R>,
    /// Cycle vectors generating the homology: torsion classes first (matching
    /// `torsion`), then `free_rank` free classes.
    pub reps: Vec<Vec<R>>,
    // transforms for class_of: chain coords -> kernel coords -> SNF coords
    vinv1: Mat<R>,
    rank1: usize,
    u2: Mat<R>,
    diag2: Vec<R>,
}

impl<R: EuclideanRing> DegreeHomology<R> {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Coordinates of a cycle in the homology generators (torsion
    /// coordinates canonically reduced, then free coordinates).
    /// `None` if the vector is not a cycle.
    pub fn class_of(&self, z: &[R]) -> Option<Vec<R>> {
        let w = self.vinv1.mul_vec(z);
        if w[..self.rank1].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let y = self.u2.mul_vec(&w[self.rank1..]);
        let mut out = Vec::new();
        for (i, d) in self.diag2.iter().enumerate() {
            if d.is_unit() {
                continue;
            }
            let (_, r) = y[i].div_rem(d);
            out.push(r);
        }
        for c in &y[self.diag2.len()..] {
            out.push(c.clone());
        }
        Some(out)
    }

    /// `class_of` for the zero class, as a length reference.
    pub fn class_len(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push(R::NAME.to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("{}^{}", R::NAME, self.free_rank));
        }
        for d in &self.torsion {
            parts.push(format!("{}/({})", R::NAME, d));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Homology of a whole complex, keyed by degree.
#[derive(Clone, Debug)]
pub struct HomologyResult<R> {
    pub degrees: BTreeMap<i64, DegreeHomology<R>>,
}

impl<R: EuclideanRing> HomologyResult<R> {
    pub fn summary_lines(&self, symbol: &str) -> Vec<String> {
        self.degrees
            .iter()
            .map(|(deg, h)| format!("{symbol}_{deg} = {}", h.summary()))
            .collect()
    }

    pub fn free_rank(&self, degree: i64) -> usize {
        self.degrees.get(&degree).map_or(0, |h| h.free_rank)
    }

    pub fn torsion(&self, degree: i64) -> Vec<R> {
        self.degrees.get(&degree).map_or_else(Vec::new, |h| h.torsion.clone())
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees.values().all(|h| h.is_zero())
    }
}

/// Homology of the finite free complex with `sizes[k]` generators in degree
/// `lo + k` and `d[k] : C_{lo+k} -> C_{lo+k-1}`.
pub fn homology_of<R: EuclideanRing>(
    lo: i64,
    sizes: &[usize],
    d: &[Mat<R>],
) -> Result<HomologyResult<R>, Error> {
    let n = sizes.len();
    let mut degrees = BTreeMap::new();
    for k in 0..n {
        let dk = if k == 0 {
            Mat::zero(0, sizes[0])
        } else {
            d[k].clone()
        };
        let dnext = if k + 1 < n {
            d[k + 1].clone()
        } else {
            Mat::zero(sizes[k], 0)
        };
        degrees.insert(lo + k as i64, degree_homology(&dk, &dnext)?);
    }
    Ok(HomologyResult { degrees })
}

fn degree_homology<R: EuclideanRing>(
    dk: &Mat<R>,
    dnext: &Mat<R>,
) -> Result<DegreeHomology<R>, Error> {
    let snf1 = snf_checked(dk)?;
    let r1 = snf1.rank;
    let dim = dk.cols;
    let kappa = dim - r1;
    // kernel basis: last `kappa` columns of V1
    let kernel: Vec<usize> = (r1..dim).collect();
    let kernel_mat = snf1.v.columns_subset(&kernel);

    // boundaries in kernel coordinates: (V1^-1 . d_{k+1}) restricted to the
    // kernel rows; the discarded rows must vanish by d^2 = 0
    let coords = snf1.vinv.mul(dnext);
    for i in 0..r1 {
        for j in 0..coords.cols {
            if !coords[(i, j)].is_zero() {
                return Err(Error::Internal(
                    "boundary image escapes the kernel".to_string(),
                ));
            }
        }
    }
    let b = Mat::from_fn(kappa, coords.cols, |i, j| coords[(r1 + i, j)].clone());
    let snf2 = snf_checked(&b)?;
    let diag2 = snf2.diagonal();
    let free_rank = kappa - snf2.rank;
    let torsion: Vec<R> = diag2
        .iter()
        .filter(|c| !c.is_unit())
        .map(|c| c.unit_normalize().1)
        .collect();

    // generators: columns of U2^-1, pushed back to chain coordinates
    let mut reps = Vec::new();
    for i in 0..kappa {
        let keep = if i < snf2.rank {
            !diag2[i].is_unit()
        } else {
            true
        };
        if !keep {
            continue;
        }
        let col = snf2.uinv.column(i);
        reps.push(kernel_mat.mul_vec(&col));
    }
    Ok(DegreeHomology {
        free_rank,
        torsion,
        reps,
        vinv1: snf1.vinv,
        rank1: r1,
        u2: snf2.u,
        diag2,
    })
}

impl<R: EuclideanRing> TwistedComplex<R> {
    pub fn homology(&self) -> Result<HomologyResult<R>, Error> {
        let sizes: Vec<usize> = self.basis.iter().map(|b| b.len()).collect();
        homology_of(self.lo, &sizes, &self.d)
    }
}

impl<R: EuclideanRing> CochainComplex<R> {
    /// Cohomology, keyed by cochain degree.
    pub fn cohomology(&self) -> Result<HomologyResult<R>, Error> {
        let hom = self.as_homological();
        let res = hom.homology()?;
        let degrees = res.degrees.into_iter().map(|(deg, h)| (-deg, h)).collect();
        Ok(HomologyResult { degrees })
    }
}

// ---------------------------------------------------------------------------
// Local coefficients over the group ring
// ---------------------------------------------------------------------------

/// Finitely generated free right module over the group ring, presented by a
/// matrix per group generator in the row convention: row `a` of `action[g]`
/// holds the coordinates of `e_a . g`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupModule<R> {
    pub rank: usize,
    pub action: BTreeMap<String, Mat<R>>,
}

impl<R: EuclideanRing> GroupModule<R> {
    /// Rank-one module with every generator acting by the identity.
    pub fn trivial(spec: &GroupSpec) -> Self {
        let action = spec
            .generator_elts()
            .into_iter()
            .map(|(name, _)| (name, Mat::identity(1)))
            .collect();
        GroupModule { rank: 1, action }
    }

    /// Action matrix of an arbitrary group element through its normal-form
    /// word (row convention composes left to right).
    pub fn elt_matrix(&self, spec: &GroupSpec, g: &GroupElt) -> Result<Mat<R>, Error> {
        let mut acc = Mat::identity(self.rank);
        for (gen, exp) in spec.word_for(g) {
            let m = self.action.get(&gen).ok_or_else(|| {
                Error::ActionNotGroupFactored(format!("no action matrix for generator {gen}"))
            })?;
            let m = if exp >= 0 {
                m.clone()
            } else {
                invert(m).ok_or_else(|| {
                    Error::ActionNotGroupFactored(format!(
                        "action of {gen} is not invertible over {}",
                        R::NAME
                    ))
                })?
            };
            for _ in 0..exp.unsigned_abs() {
                acc = acc.mul(&m);
            }
        }
        Ok(acc)
    }

    /// Check shapes, invertibility and the defining relations of the group.
    pub fn validate(&self, spec: &GroupSpec) -> Result<(), Error> {
        for (name, m) in &self.action {
            if m.rows != self.rank || m.cols != self.rank {
                return Err(Error::SchemaViolation {
                    path: "coefficients".into(),
                    msg: format!("action matrix for {name} is not {0}x{0}", self.rank),
                });
            }
            if invert(m).is_none() {
                return Err(Error::ActionNotGroupFactored(format!(
                    "action of {name} is not invertible over {}",
                    R::NAME
                )));
            }
        }
        for (name, _) in spec.generator_elts() {
            if !self.action.contains_key(&name) {
                return Err(Error::SchemaViolation {
                    path: "coefficients".into(),
                    msg: format!("missing action matrix for generator {name}"),
                });
            }
        }
        match spec {
            GroupSpec::Trivial => {}
            GroupSpec::Finite { .. } => {
                // multiplicativity on the full table
                let elems = spec.elements().expect("finite group enumerates");
                for g in &elems {
                    for h in &elems {
                        let lhs = self.elt_matrix(spec, g)?.mul(&self.elt_matrix(spec, h)?);
                        let rhs = self.elt_matrix(spec, &spec.mul(g, h))?;
                        if lhs != rhs {
                            return Err(Error::SchemaViolation {
                                path: "coefficients".into(),
                                msg: "action does not respect the group table".into(),
                            });
                        }
                    }
                }
            }
            GroupSpec::FreeAbelian { gens } => {
                let mats: Vec<&Mat<R>> = gens.iter().map(|g| &self.action[g]).collect();
                for i in 0..mats.len() {
                    for j in i + 1..mats.len() {
                        if mats[i].mul(mats[j]) != mats[j].mul(mats[i]) {
                            return Err(Error::SchemaViolation {
                                path: "coefficients".into(),
                                msg: "abelian generator actions do not commute".into(),
                            });
                        }
                    }
                }
            }
            GroupSpec::KleinBottle { gens } => {
                let a = &self.action[&gens[0]];
                let b = &self.action[&gens[1]];
                let ainv = invert(a).expect("checked above");
                if a.mul(b).mul(&ainv).mul(b) != Mat::identity(self.rank) {
                    return Err(Error::SchemaViolation {
                        path: "coefficients".into(),
                        msg: "action does not satisfy the Klein bottle relation".into(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Homology of `M (x)_{Z[pi]} C~` for a lifted complex `C~`.
///
/// Basis of the tensored complex in index `p`: pairs (point, module basis
/// vector), point-major, matching the twisted-complex ordering.
pub fn local_coefficient_homology<R: EuclideanRing>(
    module: &GroupModule<R>,
    l: &GroupRingComplex<R>,
) -> Result<HomologyResult<R>, Error> {
    module.validate(&l.spec)?;
    let r = module.rank;
    let sizes: Vec<usize> = l.basis.iter().map(|b| b.len() * r).collect();
    let mut d = Vec::with_capacity(l.basis.len());
    for p in 0..l.basis.len() {
        if p == 0 {
            d.push(Mat::zero(0, sizes[0]));
            continue;
        }
        let mut mat: Mat<R> = Mat::zero(sizes[p - 1], sizes[p]);
        for (j, _) in l.basis[p].iter().enumerate() {
            for (i, _) in l.basis[p - 1].iter().enumerate() {
                let entry = &l.d[p][i][j];
                for (g, c) in entry {
                    let rho = module.elt_matrix(&l.spec, g)?;
                    for a in 0..r {
                        for b in 0..r {
                            let add = c.clone() * rho[(a, b)].clone();
                            if !add.is_zero() {
                                let cur = mat[(i * r + b, j * r + a)].clone();
                                mat[(i * r + b, j * r + a)] = cur + add;
                            }
                        }
                    }
                }
            }
        }
        d.push(mat);
    }
    homology_of(0, &sizes, &d)
}

/// Homology of a lifted complex read with scalar coefficients. Only the
/// trivial group ring collapses to the scalar ring; anything else is an
/// unsupported coefficient ring for Smith reduction.
pub fn group_ring_homology<R: EuclideanRing>(
    l: &GroupRingComplex<R>,
) -> Result<HomologyResult<R>, Error> {
    match &l.spec {
        GroupSpec::Trivial => {
            let module = GroupModule::trivial(&l.spec);
            local_coefficient_homology(&module, l)
        }
        GroupSpec::Finite { elements, .. } => Err(Error::UnsupportedRing(format!(
            "group ring {}[G] with |G| = {}",
            R::NAME,
            elements.len()
        ))),
        GroupSpec::FreeAbelian { gens } => Err(Error::UnsupportedRing(format!(
            "Laurent ring {}[Z^{}]",
            R::NAME,
            gens.len()
        ))),
        GroupSpec::KleinBottle { .. } => Err(Error::UnsupportedRing(format!(
            "group ring {}[Klein bottle group]",
            R::NAME
        ))),
    }
}

// ---------------------------------------------------------------------------
// Closed formula in degree zero
// ---------------------------------------------------------------------------

/// Invariants (free rank, torsion) of `H_0` computed from the closed formula
/// `H_0(F) (x)_{H_0(R)} H_0(lifted)`, as a presentation cokernel.
pub fn degree_zero_formula<R: EuclideanRing>(
    dga: &DgaPresentation<R>,
    f: &DgModulePresentation<R>,
    l: &GroupRingComplex<R>,
) -> Result<(usize, Vec<R>), Error> {
    if f.basis.window.0 < 0 {
        return Err(Error::SchemaViolation {
            path: "module".into(),
            msg: "degree-zero formula needs a non-negatively graded module".into(),
        });
    }
    let deg0: Vec<String> = f
        .basis
        .gens
        .iter()
        .filter(|(_, d)| *d == 0)
        .map(|(n, _)| n.clone())
        .collect();
    let deg1: Vec<String> = f
        .basis
        .gens
        .iter()
        .filter(|(_, d)| *d == 1)
        .map(|(n, _)| n.clone())
        .collect();
    let a = deg0.len();
    let points0 = &l.basis[0];
    let points1 = if l.basis.len() > 1 { l.basis[1].clone() } else { Vec::new() };

    // ambient: (deg-0 module gen) x (index-0 point), point-major
    let rows = a * points0.len();
    let row_of = |pt: usize, gen: &str| -> usize {
        pt * a + deg0.iter().position(|n| n == gen).expect("degree-0 generator")
    };

    let mut cols: Vec<Vec<R>> = Vec::new();
    // relations from the module differential, per index-0 point
    for pt in 0..points0.len() {
        for g1 in &deg1 {
            let img = f.diff_elt(&f.gen_elt(g1)?);
            let mut col = vec![R::zero(); rows];
            for (n, c) in &img.terms {
                col[row_of(pt, n)] = c.clone();
            }
            cols.push(col);
        }
    }
    // relations from the lifted differential, with the module action applied
    for (j, _) in points1.iter().enumerate() {
        for g0 in &deg0 {
            let mut col = vec![R::zero(); rows];
            for (i, _) in points0.iter().enumerate() {
                for (g, c) in &l.d[1][i][j] {
                    let acted = f.act_group(dga, &f.gen_elt(g0)?, g)?;
                    for (n, cf) in &acted.terms {
                        let idx = row_of(i, n);
                        col[idx] = col[idx].clone() + c.clone() * cf.clone();
                    }
                }
            }
            cols.push(col);
        }
    }

    let mat = Mat::from_fn(rows, cols.len(), |i, j| cols[j][i].clone());
    let snf = snf_checked(&mat)?;
    let torsion: Vec<R> = snf
        .diagonal()
        .iter()
        .filter(|c| !c.is_unit())
        .map(|c| c.unit_normalize().1)
        .collect();
    Ok((rows - snf.rank, torsion))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, Int};
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn int_mat(rows: &[&[i64]]) -> Mat<Int> {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rp2_integral_homology() {
        // 0 -> Z --2--> Z --0--> Z -> 0 : H = (Z, Z/2, 0)
        let sizes = [1usize, 1, 1];
        let d = vec![int_mat(&[&[]]), int_mat(&[&[0]]), int_mat(&[&[2]])];
        let d = {
            let mut v = d;
            v[0] = Mat::zero(0, 1);
            v
        };
        let h = homology_of(0, &sizes, &d).unwrap();
        assert_eq!(h.free_rank(0), 1);
        assert!(h.torsion(0).is_empty());
        assert_eq!(h.free_rank(1), 0);
        assert_eq!(h.torsion(1), vec![BigInt::from(2)]);
        assert!(h.degrees[&2].is_zero());
        assert_eq!(h.summary_lines("H"), vec!["H_0 = Z", "H_1 = Z/(2)", "H_2 = 0"]);
    }

    #[test]
    fn torsion_class_reduction() {
        // C_1 = Z --2--> C_0 = Z: H_0 = Z/2, class of 3 = class of 1
        let sizes = [1usize, 1];
        let d = vec![Mat::zero(0, 1), int_mat(&[&[2]])];
        let h = homology_of(0, &sizes, &d).unwrap();
        let h0 = &h.degrees[&0];
        assert_eq!(h0.torsion, vec![BigInt::from(2)]);
        let c3 = h0.class_of(&[BigInt::from(3)]).unwrap();
        let c1 = h0.class_of(&[BigInt::from(1)]).unwrap();
        let c2 = h0.class_of(&[BigInt::from(2)]).unwrap();
        assert_eq!(c3, c1);
        assert!(c2.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn non_cycle_detected() {
        // d[1] = [1 0]^T from C_1 = Z to C_0 = Z^2... use d_1 out of degree 1
        let sizes = [2usize, 1];
        let d = vec![Mat::zero(0, 2), int_mat(&[&[1], &[0]])];
        let h = homology_of(0, &sizes, &d).unwrap();
        // in degree 1, the generator is not a cycle for d_1
        let h1 = &h.degrees[&1];
        assert!(h1.class_of(&[BigInt::from(1)]).is_none());
        assert_eq!(h.free_rank(0), 1);
    }

    #[test]
    fn free_class_coordinates() {
        // torus-like middle degree: H_1 = Z^2 with zero differentials
        let sizes = [1usize, 2, 1];
        let d = vec![Mat::zero(0, 1), int_mat(&[&[0, 0]]), int_mat(&[&[0], &[0]])];
        let h = homology_of(0, &sizes, &d).unwrap();
        let h1 = &h.degrees[&1];
        assert_eq!(h1.free_rank, 2);
        let c = h1.class_of(&[BigInt::from(3), BigInt::from(-5)]).unwrap();
        // classes of the reps themselves are unit vectors
        let r0 = h1.class_of(&h1.reps[0]).unwrap();
        let r1 = h1.class_of(&h1.reps[1]).unwrap();
        assert_ne!(r0, r1);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn field_homology_of_rp2_complex() {
        // same complex over F_2 and F_3
        let two = |p: u64| {
            vec![
                Mat::zero(0, 1),
                Mat::from_rows(vec![vec![Fp::new(0, p)]]),
                Mat::from_rows(vec![vec![Fp::new(2, p)]]),
            ]
        };
        let h2 = homology_of(0, &[1, 1, 1], &two(2)).unwrap();
        assert_eq!(
            (h2.free_rank(0), h2.free_rank(1), h2.free_rank(2)),
            (1, 1, 1)
        );
        let h3 = homology_of(0, &[1, 1, 1], &two(3)).unwrap();
        assert_eq!(
            (h3.free_rank(0), h3.free_rank(1), h3.free_rank(2)),
            (1, 0, 0)
        );
    }

    #[test]
    fn rp2_local_coefficients() {
        // lifted complex over Z[Z/2]: delta_2 = 1+g, delta_1 = g-1
        let spec = GroupSpec::cyclic(2, "g");
        let g = spec.parse_elt("g").unwrap();
        let one = spec.identity();
        let mut d2 = BTreeMap::new();
        d2.insert(one.clone(), BigInt::from(1));
        d2.insert(g.clone(), BigInt::from(1));
        let mut d1 = BTreeMap::new();
        d1.insert(g.clone(), BigInt::from(1));
        d1.insert(one.clone(), BigInt::from(-1));
        let l: GroupRingComplex<Int> = GroupRingComplex {
            spec: spec.clone(),
            basis: vec![vec!["e0".into()], vec!["e1".into()], vec!["e2".into()]],
            d: vec![Vec::new(), vec![vec![d1]], vec![vec![d2]]],
        };
        l.certify_d_squared().unwrap();

        // trivial coefficients: H = (Z, Z/2, 0)
        let triv = GroupModule::trivial(&spec);
        let h = local_coefficient_homology(&triv, &l).unwrap();
        assert_eq!(h.free_rank(0), 1);
        assert_eq!(h.torsion(1), vec![BigInt::from(2)]);
        assert!(h.degrees[&2].is_zero());

        // sign representation: H = (Z/2, 0, Z)
        let sign = GroupModule {
            rank: 1,
            action: [(
                "g".to_string(),
                Mat::from_rows(vec![vec![BigInt::from(-1)]]),
            )]
            .into_iter()
            .collect(),
        };
        let hw = local_coefficient_homology(&sign, &l).unwrap();
        assert_eq!(hw.free_rank(0), 0);
        assert_eq!(hw.torsion(0), vec![BigInt::from(2)]);
        assert!(hw.degrees[&1].is_zero());
        assert_eq!(hw.free_rank(2), 1);

        // regular representation: recovers the sphere, H = (Z, 0, Z)
        let reg = GroupModule {
            rank: 2,
            action: [(
                "g".to_string(),
                int_mat(&[&[0, 1], &[1, 0]]),
            )]
            .into_iter()
            .collect(),
        };
        let hr = local_coefficient_homology(&reg, &l).unwrap();
        assert_eq!(hr.free_rank(0), 1);
        assert!(hr.torsion(0).is_empty());
        assert!(hr.degrees[&1].is_zero());
        assert_eq!(hr.free_rank(2), 1);
    }

    #[test]
    fn group_ring_refusals() {
        let l: GroupRingComplex<Int> = GroupRingComplex {
            spec: GroupSpec::FreeAbelian { gens: vec!["t".into(), "s".into()] },
            basis: vec![vec!["x".into()]],
            d: vec![Vec::new()],
        };
        match group_ring_homology(&l) {
            Err(Error::UnsupportedRing(msg)) => assert!(msg.contains("Z^2")),
            other => panic!("expected refusal, got {other:?}"),
        }
    }
}
