//! Chain-level Poincare duality: the cochain complex of `f` against the
//! chain complex of `-f`, through the dual-point pairing, in both the
//! orientable and the character-twisted non-orientable form.

use std::collections::BTreeMap;

use crate::algebra::{AlgKey, DgaPresentation};
use crate::cocycle::{cohomological_cocycle, dual_name, CocycleMatrix, CriticalBasis};
use crate::complex::{build_cochain_complex, build_twisted_complex, CochainComplex, TwistedComplex};
use crate::error::Error;
use crate::group::SignCharacter;
use crate::module::DgModulePresentation;
use crate::scalar::EuclideanRing;

/// Outcome of a certified duality check: both complexes, plus the matched
/// generator labels `(cochain side, chain side)` per cochain degree.
#[derive(Clone, Debug)]
pub struct PdCertificate<R> {
    pub cochain: CochainComplex<R>,
    pub chain: TwistedComplex<R>,
    pub ambient_dim: i64,
    pub matched: Vec<(i64, String, String)>,
}

/// Validate a declared matching `x -> x'` of critical points of `f` with
/// critical points of `-f` with complementary indices.
fn check_match(
    c_f: &CriticalBasis,
    c_negf: &CriticalBasis,
    dual_match: &BTreeMap<String, String>,
) -> Result<(), Error> {
    if c_f.ambient_dim != c_negf.ambient_dim {
        return Err(Error::SchemaViolation {
            path: "duality".into(),
            msg: "ambient dimensions differ".into(),
        });
    }
    let n = c_f.ambient_dim;
    let mut used = BTreeMap::new();
    for (x, ix) in &c_f.points {
        let tgt = dual_match.get(x).ok_or_else(|| Error::SchemaViolation {
            path: "duality".into(),
            msg: format!("critical point {x} has no dual partner"),
        })?;
        let it = c_negf.index_of(tgt).ok_or_else(|| Error::UnresolvedName {
            path: "duality".into(),
            name: tgt.clone(),
        })?;
        if it != n - ix {
            return Err(Error::SchemaViolation {
                path: "duality".into(),
                msg: format!("{x} (index {ix}) paired with {tgt} (index {it}), expected {}", n - ix),
            });
        }
        if used.insert(tgt.clone(), x.clone()).is_some() {
            return Err(Error::SchemaViolation {
                path: "duality".into(),
                msg: format!("{tgt} is matched twice"),
            });
        }
    }
    if used.len() != c_negf.points.len() {
        return Err(Error::SchemaViolation {
            path: "duality".into(),
            msg: "matching does not cover the critical points of -f".into(),
        });
    }
    Ok(())
}

/// Entrywise pairing between the cohomological cocycle of `f` and the
/// twisting cocycle of `-f`. Orientable: plain equality. Non-orientable:
/// equality twisted by the orientation character on group terms.
fn check_pairing<R: EuclideanRing>(
    dga: &DgaPresentation<R>,
    c_f: &CriticalBasis,
    mcoh: &CocycleMatrix<R>,
    m_negf: &CocycleMatrix<R>,
    dual_match: &BTreeMap<String, String>,
    orientation: Option<&SignCharacter>,
) -> Result<(), Error> {
    for (x, ix) in &c_f.points {
        for (y, iy) in &c_f.points {
            if ix <= iy {
                continue;
            }
            let deg = ix - iy - 1;
            // cohomological entry runs from the lower dual to the higher dual
            let lhs = mcoh.entry(&dual_name(y), &dual_name(x), deg);
            let rhs = m_negf.entry(&dual_match[y], &dual_match[x], deg);
            let mut keys: Vec<&AlgKey> = lhs.terms.keys().collect();
            for k in rhs.terms.keys() {
                if !lhs.terms.contains_key(k) {
                    keys.push(k);
                }
            }
            for key in keys {
                let a = lhs.terms.get(key).cloned().unwrap_or_else(R::zero);
                let b = rhs.terms.get(key).cloned().unwrap_or_else(R::zero);
                let a = match (orientation, key) {
                    (Some(w), AlgKey::Grp(g)) => {
                        let spec = &dga.group.as_ref().ok_or(Error::NoGroupDeclaration)?.spec;
                        if w.eval(spec, g) < 0 {
                            -a
                        } else {
                            a
                        }
                    }
                    _ => a,
                };
                if a != b {
                    return Err(Error::PairingMismatch(
                        x.clone(),
                        y.clone(),
                        format!("term {}: expected {b}, pairing gives {a}", dga.render_key(key)),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Build both sides of the duality and certify that the dual-point
/// relabeling intertwines the cochain differential of `f` with the chain
/// differential of `-f`.
pub fn poincare_duality<R: EuclideanRing>(
    dga: &DgaPresentation<R>,
    f: &DgModulePresentation<R>,
    c_f: &CriticalBasis,
    m_f: &CocycleMatrix<R>,
    c_negf: &CriticalBasis,
    m_negf: &CocycleMatrix<R>,
    dual_match: &BTreeMap<String, String>,
    orientation: Option<&SignCharacter>,
) -> Result<PdCertificate<R>, Error> {
    check_match(c_f, c_negf, dual_match)?;
    let mcoh = cohomological_cocycle(c_f, dga, m_f)?;
    check_pairing(dga, c_f, &mcoh, m_negf, dual_match, orientation)?;

    // coefficient module for the cochain side: opposite grading, twisted by
    // the orientation character in the non-orientable case
    let g_mod = match orientation {
        None => f.opposite_grading(),
        Some(w) => f.twist_by_character(dga, w)?.opposite_grading(),
    };
    let cochain = build_cochain_complex(dga, &g_mod, &c_f.dual_renamed(), &mcoh)?;
    let chain = build_twisted_complex(dga, f, c_negf, m_negf)?;

    // invert dual naming to reach the declared matching
    let undual: BTreeMap<String, String> = c_f
        .points
        .iter()
        .map(|(x, _)| (dual_name(x), x.clone()))
        .collect();
    let n = c_f.ambient_dim;

    // position of a cochain generator's partner in the chain layer of
    // complementary degree
    let mut matched = Vec::new();
    let mut perms: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (k, layer) in cochain.basis.iter().enumerate() {
        let t = cochain.lo + k as i64;
        let ck = n - t - chain.lo;
        let chain_layer = if ck >= 0 && (ck as usize) < chain.basis.len() {
            &chain.basis[ck as usize]
        } else {
            return Err(Error::PairingMismatch(
                "-".into(),
                "-".into(),
                format!("cochain degree {t} has no chain partner in degree {}", n - t),
            ));
        };
        if chain_layer.len() != layer.len() {
            return Err(Error::PairingMismatch(
                "-".into(),
                "-".into(),
                format!(
                    "rank {} in cochain degree {t} against rank {} in chain degree {}",
                    layer.len(),
                    chain_layer.len(),
                    n - t
                ),
            ));
        }
        let mut perm = Vec::with_capacity(layer.len());
        for gen in layer {
            let orig = undual.get(&gen.point).ok_or_else(|| Error::UnresolvedName {
                path: "duality".into(),
                name: gen.point.clone(),
            })?;
            let partner = &dual_match[orig];
            let pos = chain_layer
                .iter()
                .position(|h| h.coeff_gen == gen.coeff_gen && &h.point == partner)
                .ok_or_else(|| {
                    Error::PairingMismatch(
                        orig.clone(),
                        partner.clone(),
                        format!("no chain generator {}({})", gen.coeff_gen, partner),
                    )
                })?;
            perm.push(pos);
            matched.push((t, gen.label(), chain_layer[pos].label()));
        }
        perms.insert(t, perm);
    }

    // d . PD = PD . delta, entry by entry under the relabeling
    for (k, _) in cochain.basis.iter().enumerate() {
        let t = cochain.lo + k as i64;
        let d = &cochain.d[k];
        if d.rows == 0 {
            continue;
        }
        let src_perm = &perms[&t];
        let tgt_perm = &perms[&(t + 1)];
        let ck = n - t - chain.lo;
        let del = &chain.d[ck as usize];
        for j in 0..d.cols {
            for i in 0..d.rows {
                if d[(i, j)] != del[(tgt_perm[i], src_perm[j])] {
                    return Err(Error::Internal(format!(
                        "duality relabeling fails to intertwine differentials at cochain degree {t}, entry ({i}, {j})"
                    )));
                }
            }
        }
    }

    Ok(PdCertificate { cochain, chain, ambient_dim: n, matched })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraElement, GradedBasis, GroupDecl};
    use crate::cocycle::CocycleKind;
    use crate::group::GroupSpec;
    use crate::module::GradingSense;
    use crate::scalar::Int;
    use num_bigint::BigInt;

    fn sphere_dga() -> DgaPresentation<Int> {
        let spec = GroupSpec::Trivial;
        DgaPresentation {
            basis: GradedBasis { gens: vec![("1".into(), 0), ("u".into(), 1)], window: (0, 2) },
            unit: "1".into(),
            mul_table: BTreeMap::new(),
            diff_table: BTreeMap::new(),
            group: Some(GroupDecl {
                spec: spec.clone(),
                proj: [("1".to_string(), spec.identity())].into_iter().collect(),
            }),
            involution: Some(
                [(
                    "u".to_string(),
                    AlgebraElement::single(1, AlgKey::Gen("u".into()), BigInt::from(-1)),
                )]
                .into_iter()
                .collect(),
            ),
        }
    }

    fn trivial_module() -> DgModulePresentation<Int> {
        DgModulePresentation {
            basis: GradedBasis { gens: vec![("e".into(), 0)], window: (0, 0) },
            action: BTreeMap::new(),
            diff: BTreeMap::new(),
            sense: GradingSense::Homological,
        }
    }

    #[test]
    fn sphere_duality_with_zero_cocycle() {
        let dga = sphere_dga();
        let f = trivial_module();
        let c_f = CriticalBasis {
            points: vec![("min".into(), 0), ("max".into(), 2)],
            ambient_dim: 2,
        };
        let c_negf = CriticalBasis {
            points: vec![("min'".into(), 0), ("max'".into(), 2)],
            ambient_dim: 2,
        };
        let m_f = CocycleMatrix::new(CocycleKind::Twisting);
        let m_negf = CocycleMatrix::new(CocycleKind::Twisting);
        let dual_match: BTreeMap<String, String> = [
            ("min".to_string(), "max'".to_string()),
            ("max".to_string(), "min'".to_string()),
        ]
        .into_iter()
        .collect();
        let cert =
            poincare_duality(&dga, &f, &c_f, &m_f, &c_negf, &m_negf, &dual_match, None).unwrap();
        assert_eq!(cert.ambient_dim, 2);
        // H^0 = H_2 = Z, H^2 = H_0 = Z
        let hc = cert.cochain.cohomology().unwrap();
        let h = cert.chain.homology().unwrap();
        for t in [0i64, 2] {
            assert_eq!(hc.free_rank(t), h.free_rank(2 - t));
        }
    }

    #[test]
    fn index_mismatch_rejected() {
        let dga = sphere_dga();
        let f = trivial_module();
        let c_f = CriticalBasis {
            points: vec![("min".into(), 0), ("max".into(), 2)],
            ambient_dim: 2,
        };
        let c_negf = c_f.clone();
        let m = CocycleMatrix::new(CocycleKind::Twisting);
        // identity matching pairs index 0 with index 0: wrong
        let dual_match: BTreeMap<String, String> = [
            ("min".to_string(), "min".to_string()),
            ("max".to_string(), "max".to_string()),
        ]
        .into_iter()
        .collect();
        let err =
            poincare_duality(&dga, &f, &c_f, &m, &c_negf, &m, &dual_match, None).unwrap_err();
        assert!(matches!(err, Error::SchemaViolation { .. }));
    }

    #[test]
    fn pairing_mismatch_reported() {
        // nonzero cocycle u on the f side against zero on the -f side
        let dga = sphere_dga();
        let f = trivial_module();
        let c_f = CriticalBasis {
            points: vec![("min".into(), 0), ("max".into(), 2)],
            ambient_dim: 2,
        };
        let c_negf = CriticalBasis {
            points: vec![("min'".into(), 0), ("max'".into(), 2)],
            ambient_dim: 2,
        };
        let mut m_f = CocycleMatrix::new(CocycleKind::Twisting);
        m_f.entries.insert(
            ("max".into(), "min".into()),
            AlgebraElement::single(1, AlgKey::Gen("u".into()), BigInt::from(1)),
        );
        let m_negf = CocycleMatrix::new(CocycleKind::Twisting);
        let dual_match: BTreeMap<String, String> = [
            ("min".to_string(), "max'".to_string()),
            ("max".to_string(), "min'".to_string()),
        ]
        .into_iter()
        .collect();
        let err = poincare_duality(&dga, &f, &c_f, &m_f, &c_negf, &m_negf, &dual_match, None)
            .unwrap_err();
        assert!(matches!(err, Error::PairingMismatch(..)));
    }
}
