//! Command implementations shared by the command-line interface: each one
//! loads a bundle, runs a computation in the ring a tag or pairing selects,
//! and renders a byte-deterministic plain-text or JSON report.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::bundle::{Bundle, CoeffSystem, Expectation, MapKind};
use crate::bundle::{inst_cocycle, inst_dga, inst_module};
use crate::complex::build_twisted_complex;
use crate::duality::poincare_duality;
use crate::error::Error;
use crate::examples::{ctx_ring_name, example_text, load_example, tag_homology, EXAMPLE_NAMES};
use crate::format::parse_bundle;
use crate::maps::{induce_chain_map, induce_homotopy, is_quasi_iso};
use crate::scalar::{Field, Fp, Int, LaurentRat, Rat, ScalarCtx};
use crate::spectral::canonical_spectral_sequence;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Plain,
    Structured,
}

/// Load a bundle from a file path, falling back to the built-in example of
/// that name.
pub fn load_bundle(source: &str) -> Result<Bundle, Error> {
    match std::fs::read_to_string(source) {
        Ok(text) => parse_bundle(&text),
        Err(_) => load_example(source),
    }
}

macro_rules! with_ring {
    ($ctx:expr, $R:ident, $body:block) => {
        match $ctx {
            ScalarCtx::Int => {
                type $R = Int;
                $body
            }
            ScalarCtx::Rat => {
                type $R = Rat;
                $body
            }
            ScalarCtx::Fp(_) => {
                type $R = Fp;
                $body
            }
            ScalarCtx::LaurentRat => {
                type $R = LaurentRat;
                $body
            }
        }
    };
}

fn render(format: Format, plain: String, value: Value) -> String {
    match format {
        Format::Plain => plain,
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(&value).expect("serializable report");
            s.push('\n');
            s
        }
    }
}

/// `validate`: structural report; the boolean says whether the bundle is
/// clean, the issue list is empty exactly then.
pub fn cmd_validate(b: &Bundle, format: Format) -> Result<(String, bool), Error> {
    let issues = b.validate()?;
    let ok = issues.is_empty();
    let mut plain = format!("bundle {}\n", b.name);
    if ok {
        plain.push_str("validation: ok\n");
    } else {
        plain.push_str("validation: failed\n");
        for i in &issues {
            plain.push_str(&format!("  {i}\n"));
        }
    }
    let value = json!({
        "bundle": b.name,
        "ok": ok,
        "issues": issues,
    });
    Ok((render(format, plain, value), ok))
}

/// `homology`: per-degree summary for one coefficient tag.
pub fn cmd_homology(b: &Bundle, tag: &str, format: Format) -> Result<String, Error> {
    let coeff = b.coeff(tag)?;
    let ring = ctx_ring_name(&coeff.ctx);
    let degrees = tag_homology(b, tag)?;
    let mut plain = format!("bundle {}\ncoefficients {tag} over {ring}\n", b.name);
    for (deg, s) in &degrees {
        plain.push_str(&format!("H_{deg} = {s}\n"));
    }
    let by_degree: BTreeMap<String, &String> =
        degrees.iter().map(|(d, s)| (d.to_string(), s)).collect();
    let value = json!({
        "bundle": b.name,
        "coeff": tag,
        "ring": ring,
        "homology": by_degree,
    });
    Ok(render(format, plain, value))
}

/// `ss`: pages of the canonical filtration spectral sequence for a field
/// coefficient tag backed by a DG module.
pub fn cmd_ss(b: &Bundle, tag: &str, format: Format) -> Result<String, Error> {
    let coeff = b.coeff(tag)?;
    match coeff.ctx {
        ScalarCtx::Rat => ss_in::<Rat>(b, tag, format),
        ScalarCtx::Fp(_) => ss_in::<Fp>(b, tag, format),
        other => Err(Error::FieldRequired(format!(
            "spectral sequence pages need field scalars, tag {tag} uses {other}"
        ))),
    }
}

fn ss_in<F: Field>(b: &Bundle, tag: &str, format: Format) -> Result<String, Error> {
    let coeff = b.coeff(tag)?;
    let CoeffSystem::Dg(module) = &coeff.system else {
        return Err(Error::SchemaViolation {
            path: format!("coeff {tag}"),
            msg: "spectral sequence requires a DG module coefficient system".into(),
        });
    };
    let dga = inst_dga::<F>(&coeff.ctx, &b.dga)?;
    let decl = b.cocycle(&coeff.cocycle)?;
    let crit = b.critical(&decl.src)?;
    let m = inst_cocycle::<F>(&coeff.ctx, &decl.matrix)?;
    let f = inst_module::<F>(&coeff.ctx, b.module(module)?)?;
    let x = build_twisted_complex(&dga, &f, crit, &m)?;
    let ss = canonical_spectral_sequence(&x)?;

    let mut plain = format!("bundle {}\ncoefficients {tag} over {}\n", b.name, ctx_ring_name(&coeff.ctx));
    let mut pages = Vec::new();
    for page in &ss.pages {
        plain.push_str(&format!("page r={}\n", page.r));
        for ((p, q), dim) in &page.dims {
            plain.push_str(&format!("  E^{}_({p},{q}) = {dim}\n", page.r));
        }
        for ((p, q), rank) in &page.d_ranks {
            plain.push_str(&format!("  d_{} rank at ({p},{q}) = {rank}\n", page.r));
        }
        pages.push(json!({
            "r": page.r,
            "dims": page.dims.iter().map(|((p, q), d)| json!([p, q, d])).collect::<Vec<_>>(),
            "d_ranks": page.d_ranks.iter().map(|((p, q), d)| json!([p, q, d])).collect::<Vec<_>>(),
        }));
    }
    plain.push_str("infinity\n");
    for ((p, q), dim) in &ss.infinity {
        plain.push_str(&format!("  E^inf_({p},{q}) = {dim}\n"));
    }
    plain.push_str(&format!("converges: {}\n", ss.converges));
    let value = json!({
        "bundle": b.name,
        "coeff": tag,
        "pages": pages,
        "infinity": ss.infinity.iter().map(|((p, q), d)| json!([p, q, d])).collect::<Vec<_>>(),
        "converges": ss.converges,
    });
    Ok(render(format, plain, value))
}

/// `map-check`: verify a declared continuation or homotopy and report
/// whether the induced map is a quasi-isomorphism.
pub fn cmd_map_check(b: &Bundle, name: &str, format: Format) -> Result<String, Error> {
    let decl = b.maps.get(name).ok_or_else(|| Error::UnresolvedName {
        path: "map".into(),
        name: name.into(),
    })?;
    let coeff = b.coeff(&decl.coeff)?;
    let CoeffSystem::Dg(module) = &coeff.system else {
        return Err(Error::SchemaViolation {
            path: format!("coeff {}", decl.coeff),
            msg: "map checks require a DG module coefficient system".into(),
        });
    };
    with_ring!(coeff.ctx, R, {
        let dga = inst_dga::<R>(&coeff.ctx, &b.dga)?;
        let f = inst_module::<R>(&coeff.ctx, b.module(module)?)?;
        let c0 = b.critical(&decl.src.0)?;
        let m0 = inst_cocycle::<R>(&coeff.ctx, &b.cocycle(&decl.src.1)?.matrix)?;
        let c1 = b.critical(&decl.tgt.0)?;
        let m1 = inst_cocycle::<R>(&coeff.ctx, &b.cocycle(&decl.tgt.1)?.matrix)?;
        let src = build_twisted_complex(&dga, &f, c0, &m0)?;
        let tgt = build_twisted_complex(&dga, &f, c1, &m1)?;
        match decl.kind {
            MapKind::Continuation => {
                let nu = inst_cocycle::<R>(&coeff.ctx, &b.cocycle(&decl.nu0)?.matrix)?;
                let psi = induce_chain_map(&dga, &f, c0, &m0, c1, &m1, &nu, &src, &tgt)?;
                psi.check(&src, &tgt)?;
                let qiso = is_quasi_iso(&src, &tgt, &psi)?;
                let plain = format!(
                    "bundle {}\nmap {name}: continuation verified\nchain map: ok\nquasi-isomorphism: {qiso}\n",
                    b.name
                );
                let value = json!({
                    "bundle": b.name,
                    "map": name,
                    "kind": "continuation",
                    "chain_map": true,
                    "quasi_iso": qiso,
                });
                Ok(render(format, plain, value))
            }
            MapKind::Homotopy => {
                let nu0name = &decl.nu0;
                let nu1name = decl.nu1.as_deref().ok_or_else(|| Error::SchemaViolation {
                    path: format!("map {name}"),
                    msg: "homotopy map needs nu1".into(),
                })?;
                let hname = decl.h.as_deref().ok_or_else(|| Error::SchemaViolation {
                    path: format!("map {name}"),
                    msg: "homotopy map needs h".into(),
                })?;
                let nu0 = inst_cocycle::<R>(&coeff.ctx, &b.cocycle(nu0name)?.matrix)?;
                let nu1 = inst_cocycle::<R>(&coeff.ctx, &b.cocycle(nu1name)?.matrix)?;
                let h = inst_cocycle::<R>(&coeff.ctx, &b.cocycle(hname)?.matrix)?;
                let (psi0, psi1, hom) =
                    induce_homotopy(&dga, &f, c0, &m0, c1, &m1, &nu0, &nu1, &h, &src, &tgt)?;
                hom.check(&src, &tgt, &psi0, &psi1)?;
                let plain = format!(
                    "bundle {}\nmap {name}: homotopy verified\nboth continuations induce chain maps: ok\nhomotopy identity: ok\n",
                    b.name
                );
                let value = json!({
                    "bundle": b.name,
                    "map": name,
                    "kind": "homotopy",
                    "chain_maps": true,
                    "homotopy": true,
                });
                Ok(render(format, plain, value))
            }
        }
    })
}

/// `duality`: certify a declared pairing and report both sides' groups.
pub fn cmd_duality(b: &Bundle, name: &str, format: Format) -> Result<String, Error> {
    let decl = b.pairings.get(name).ok_or_else(|| Error::UnresolvedName {
        path: "pairing".into(),
        name: name.into(),
    })?;
    let orientation = match &decl.orientation {
        None => None,
        Some(w) => Some(b.characters.get(w).ok_or_else(|| Error::UnresolvedName {
            path: "pairing".into(),
            name: w.clone(),
        })?),
    };
    with_ring!(decl.ctx, R, {
        let dga = inst_dga::<R>(&decl.ctx, &b.dga)?;
        let f = inst_module::<R>(&decl.ctx, b.module(&decl.module)?)?;
        let c_f = b.critical(&decl.f.0)?;
        let m_f = inst_cocycle::<R>(&decl.ctx, &b.cocycle(&decl.f.1)?.matrix)?;
        let c_negf = b.critical(&decl.negf.0)?;
        let m_negf = inst_cocycle::<R>(&decl.ctx, &b.cocycle(&decl.negf.1)?.matrix)?;
        let cert = poincare_duality(
            &dga,
            &f,
            c_f,
            &m_f,
            c_negf,
            &m_negf,
            &decl.matching,
            orientation,
        )?;
        let coh = cert.cochain.cohomology()?;
        let hom = cert.chain.homology()?;
        let mut plain = format!(
            "bundle {}\npairing {name}: certified (ambient dimension {})\n",
            b.name, cert.ambient_dim
        );
        for (ix, x, y) in &cert.matched {
            plain.push_str(&format!("  {x} (index {ix}) ~ {y} (index {})\n", cert.ambient_dim - ix));
        }
        let mut coh_map = BTreeMap::new();
        for (deg, h) in &coh.degrees {
            plain.push_str(&format!("H^{deg}(f) = {}\n", h.summary()));
            coh_map.insert(deg.to_string(), h.summary());
        }
        let mut hom_map = BTreeMap::new();
        for (deg, h) in &hom.degrees {
            plain.push_str(&format!("H_{deg}(-f) = {}\n", h.summary()));
            hom_map.insert(deg.to_string(), h.summary());
        }
        let value = json!({
            "bundle": b.name,
            "pairing": name,
            "certified": true,
            "ambient": cert.ambient_dim,
            "matched": cert.matched.iter().map(|(ix, x, y)| json!([ix, x, y])).collect::<Vec<_>>(),
            "cohomology_f": coh_map,
            "homology_negf": hom_map,
        });
        Ok(render(format, plain, value))
    })
}

/// `examples`: list the built-in bundles, or print one in canonical form.
pub fn cmd_examples(name: Option<&str>, format: Format) -> Result<String, Error> {
    match name {
        Some(n) => Ok(example_text(n)?.to_string()),
        None => {
            let mut plain = String::new();
            let mut list = Vec::new();
            for n in EXAMPLE_NAMES {
                let b = load_example(n)?;
                let tags: Vec<&String> = b.coeffs.keys().collect();
                plain.push_str(&format!(
                    "{n}: ambient {}, coefficient tags: {}\n",
                    b.ambient,
                    tags.iter().map(|t| t.as_str()).collect::<Vec<_>>().join(", ")
                ));
                list.push(json!({
                    "name": n,
                    "ambient": b.ambient,
                    "tags": tags,
                    "expectations": b.expects.iter().filter(|e| matches!(e, Expectation::Homology(..))).count(),
                }));
            }
            Ok(render(format, plain, json!({ "examples": list })))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homology_report_is_deterministic() {
        let b = load_example("rp2").unwrap();
        let a1 = cmd_homology(&b, "triv", Format::Plain).unwrap();
        let a2 = cmd_homology(&b, "triv", Format::Plain).unwrap();
        assert_eq!(a1, a2);
        assert!(a1.contains("H_1 = Z/(2)"));
        let s = cmd_homology(&b, "triv", Format::Structured).unwrap();
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["homology"]["1"], "Z/(2)");
    }

    #[test]
    fn ss_refuses_integer_scalars() {
        let b = load_example("hopf").unwrap();
        match cmd_ss(&b, "int", Format::Plain) {
            Err(Error::FieldRequired(_)) => {}
            other => panic!("expected FieldRequired, got {other:?}"),
        }
        let report = cmd_ss(&b, "rat", Format::Plain).unwrap();
        assert!(report.contains("converges: true"), "{report}");
    }

    #[test]
    fn map_check_reports_quasi_iso() {
        let b = load_example("circle").unwrap();
        let report = cmd_map_check(&b, "cont", Format::Plain).unwrap();
        assert!(report.contains("quasi-isomorphism: true"), "{report}");
        let report = cmd_map_check(&b, "homot", Format::Plain).unwrap();
        assert!(report.contains("homotopy identity: ok"), "{report}");
    }

    #[test]
    fn duality_reports_both_pairs() {
        for name in ["sphere2-pd-pair", "klein-pd-pair"] {
            let b = load_example(name).unwrap();
            let report = cmd_duality(&b, "pd", Format::Plain).unwrap();
            assert!(report.contains("certified"), "{name}: {report}");
        }
    }
}
