//! Built-in example bundles, embedded from the `fixtures/` directory, and
//! the coefficient-tag dispatcher that computes homology for a bundle tag
//! in the scalar ring the tag selects.

use std::collections::BTreeMap;

use crate::bundle::{inst_cocycle, inst_dga, inst_gmodule, inst_module, Bundle, CoeffSystem};
use crate::complex::{build_twisted_complex, lifted_complex};
use crate::error::Error;
use crate::format::parse_bundle;
use crate::homology::{group_ring_homology, local_coefficient_homology, HomologyResult};
use crate::scalar::{EuclideanRing, Fp, Int, LaurentRat, Rat, Ring, ScalarCtx};

pub const EXAMPLE_NAMES: [&str; 10] = [
    "circle",
    "sphere2",
    "sphereN",
    "torus2",
    "rp2",
    "klein",
    "hopf",
    "circle-deg2-selfmap",
    "sphere2-pd-pair",
    "klein-pd-pair",
];

pub fn example_text(name: &str) -> Result<&'static str, Error> {
    match name {
        "circle" => Ok(include_str!("../../../fixtures/circle")),
        "sphere2" => Ok(include_str!("../../../fixtures/sphere2")),
        "sphereN" => Ok(include_str!("../../../fixtures/sphereN")),
        "torus2" => Ok(include_str!("../../../fixtures/torus2")),
        "rp2" => Ok(include_str!("../../../fixtures/rp2")),
        "klein" => Ok(include_str!("../../../fixtures/klein")),
        "hopf" => Ok(include_str!("../../../fixtures/hopf")),
        "circle-deg2-selfmap" => Ok(include_str!("../../../fixtures/circle-deg2-selfmap")),
        "sphere2-pd-pair" => Ok(include_str!("../../../fixtures/sphere2-pd-pair")),
        "klein-pd-pair" => Ok(include_str!("../../../fixtures/klein-pd-pair")),
        other => Err(Error::UnknownExample(other.into())),
    }
}

pub fn load_example(name: &str) -> Result<Bundle, Error> {
    parse_bundle(example_text(name)?)
}

/// Stored homology expectations of a built-in example for one coefficient
/// tag, keyed by degree.
pub fn expected_homology(name: &str, tag: &str) -> Result<BTreeMap<i64, String>, Error> {
    load_example(name)?.expected_homology(tag)
}

fn homology_in<R: EuclideanRing>(
    b: &Bundle,
    ctx: &ScalarCtx,
    tag: &str,
) -> Result<HomologyResult<R>, Error> {
    let coeff = b.coeff(tag)?;
    let dga = inst_dga::<R>(ctx, &b.dga)?;
    let decl = b.cocycle(&coeff.cocycle)?;
    let crit = b.critical(&decl.src)?;
    let m = inst_cocycle::<R>(ctx, &decl.matrix)?;
    match &coeff.system {
        CoeffSystem::Dg(name) => {
            let f = inst_module::<R>(ctx, b.module(name)?)?;
            build_twisted_complex(&dga, &f, crit, &m)?.homology()
        }
        CoeffSystem::Lifted(name) => {
            let g = b.gmodules.get(name).ok_or_else(|| Error::UnresolvedName {
                path: format!("coeff {tag}"),
                name: name.clone(),
            })?;
            let gm = inst_gmodule::<R>(ctx, g)?;
            let l = lifted_complex(crit, &m, &dga)?;
            local_coefficient_homology(&gm, &l)
        }
        CoeffSystem::GroupRing => {
            let l = lifted_complex(crit, &m, &dga)?;
            group_ring_homology(&l)
        }
    }
}

/// Homology for a bundle coefficient tag, rendered per degree in the ring
/// the tag selects. Every degree the underlying complex touches appears.
pub fn tag_homology(b: &Bundle, tag: &str) -> Result<BTreeMap<i64, String>, Error> {
    let ctx = b.coeff(tag)?.ctx;
    match ctx {
        ScalarCtx::Int => render_degrees(homology_in::<Int>(b, &ctx, tag)?),
        ScalarCtx::Rat => render_degrees(homology_in::<Rat>(b, &ctx, tag)?),
        ScalarCtx::Fp(_) => render_degrees(homology_in::<Fp>(b, &ctx, tag)?),
        ScalarCtx::LaurentRat => render_degrees(homology_in::<LaurentRat>(b, &ctx, tag)?),
    }
}

fn render_degrees<R: EuclideanRing>(
    h: HomologyResult<R>,
) -> Result<BTreeMap<i64, String>, Error> {
    Ok(h.degrees.iter().map(|(deg, dh)| (*deg, dh.summary())).collect())
}

/// `Ring::NAME` of the scalars a tag selects, for report headers.
pub fn ctx_ring_name(ctx: &ScalarCtx) -> &'static str {
    match ctx {
        ScalarCtx::Int => Int::NAME,
        ScalarCtx::Rat => Rat::NAME,
        ScalarCtx::Fp(_) => Fp::NAME,
        ScalarCtx::LaurentRat => LaurentRat::NAME,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::Expectation;
    use crate::format::render_bundle;

    #[test]
    fn unknown_example_is_reported() {
        match load_example("nope") {
            Err(Error::UnknownExample(n)) => assert_eq!(n, "nope"),
            other => panic!("expected UnknownExample, got {other:?}"),
        }
    }

    #[test]
    fn unknown_tag_is_reported() {
        match expected_homology("circle", "nope") {
            Err(Error::UnknownTag(t)) => assert_eq!(t, "nope"),
            other => panic!("expected UnknownTag, got {other:?}"),
        }
    }

    #[test]
    fn all_examples_load_validate_and_round_trip() {
        for name in EXAMPLE_NAMES {
            let text = example_text(name).unwrap();
            let b = parse_bundle(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(b.name, name);
            let issues = b.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(issues, Vec::<String>::new(), "{name} has validation issues");
            assert_eq!(render_bundle(&b), text, "{name} is not in canonical form");
        }
    }

    /// Rewrites the fixture files in canonical form. Run explicitly with
    /// `cargo test -p dgmorse -- --ignored canonicalize_fixtures` after
    /// editing a fixture by hand.
    #[test]
    #[ignore]
    fn canonicalize_fixtures() {
        for name in EXAMPLE_NAMES {
            let path = format!("../../fixtures/{name}");
            let text = std::fs::read_to_string(&path).unwrap();
            let b = parse_bundle(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            std::fs::write(&path, render_bundle(&b)).unwrap();
        }
    }

    #[test]
    fn all_homology_expectations_hold() {
        for name in EXAMPLE_NAMES {
            let b = load_example(name).unwrap();
            for e in &b.expects {
                let Expectation::Homology(tag, deg, want) = e else { continue };
                let got = tag_homology(&b, tag)
                    .unwrap_or_else(|e| panic!("{name}/{tag}: {e}"));
                let got = got.get(deg).cloned().unwrap_or_else(|| "0".into());
                assert_eq!(&got, want, "{name}/{tag} degree {deg}");
            }
        }
    }

    #[test]
    fn group_ring_tags_are_refused_with_the_ring_name() {
        let b = load_example("torus2").unwrap();
        match tag_homology(&b, "group-ring") {
            Err(Error::UnsupportedRing(msg)) => assert!(msg.contains("Z[Z^2]"), "{msg}"),
            other => panic!("expected UnsupportedRing, got {other:?}"),
        }
    }
}
