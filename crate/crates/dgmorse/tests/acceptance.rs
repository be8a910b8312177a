//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::process::Command;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dgmorse::bundle::{inst_cocycle, inst_dga, inst_module, Bundle, CoeffSystem, Expectation};
use dgmorse::cocycle::check_maurer_cartan;
use dgmorse::complex::{
    build_twisted_complex, lifted_complex, lifted_continuation_map, TwistedComplex,
};
use dgmorse::duality::poincare_duality;
use dgmorse::examples::{load_example, tag_homology, EXAMPLE_NAMES};
use dgmorse::format::{parse_bundle, render_bundle};
use dgmorse::homology::degree_zero_formula;
use dgmorse::maps::{induce_chain_map, induced_on_homology, is_quasi_iso, ChainMap};
use dgmorse::matrix::{smith_normal_form, Mat};
use dgmorse::report::{cmd_homology, cmd_map_check, Format};
use dgmorse::scalar::{EuclideanRing, Fp, Int, LaurentRat, Rat, ScalarCtx};
use dgmorse::spectral::canonical_spectral_sequence;

fn criterion(n: usize, what: &str, body: impl FnOnce() + UnwindSafe) {
    match catch_unwind(body) {
        Ok(()) => println!("criterion {n} ({what}): pass"),
        Err(e) => {
            println!("criterion {n} ({what}): fail");
            resume_unwind(e);
        }
    }
}

fn homology_matches_expectations(name: &str, tag: &str) {
    let b = load_example(name).unwrap();
    let got = tag_homology(&b, tag).unwrap();
    let mut checked = 0;
    for e in &b.expects {
        let Expectation::Homology(t, deg, want) = e else { continue };
        if t != tag {
            continue;
        }
        let g = got.get(deg).cloned().unwrap_or_else(|| "0".into());
        assert_eq!(&g, want, "{name}/{tag} degree {deg}");
        checked += 1;
    }
    assert!(checked > 0, "{name}/{tag} has no stored expectations");
}

#[test]
fn criterion_1_twisted_complexes_over_the_dga() {
    criterion(1, "twisted complexes with DG coefficients", || {
        homology_matches_expectations("circle", "loop");
        homology_matches_expectations("circle", "triv");
        homology_matches_expectations("sphere2", "int");
        let circle = load_example("circle").unwrap();
        let h = tag_homology(&circle, "loop").unwrap();
        assert_eq!(h.get(&0).unwrap(), "k[t,t^-1]/(1 - t)");
        assert_eq!(h.get(&1).unwrap(), "0");
    });
}

#[test]
fn criterion_2_hopf_total_space() {
    criterion(2, "Hopf-type bundle over Z", || {
        let b = load_example("hopf").unwrap();
        let h = tag_homology(&b, "int").unwrap();
        let want: BTreeMap<i64, &str> = [(0, "Z"), (1, "0"), (2, "0"), (3, "Z")].into();
        assert_eq!(h.len(), want.len());
        for (deg, s) in want {
            assert_eq!(h.get(&deg).unwrap(), s, "degree {deg}");
        }
    });
}

#[test]
fn criterion_3_many_coefficient_systems() {
    criterion(3, "one bundle under several coefficient systems", || {
        let b = load_example("rp2").unwrap();
        let systems: Vec<_> = b.coeffs.values().map(|c| (&c.ctx, &c.system)).collect();
        assert!(systems.len() >= 3);
        for tag in ["triv", "f2", "f3", "reg", "sgn"] {
            homology_matches_expectations("rp2", tag);
        }
    });
}

#[test]
fn criterion_4_spectral_sequence() {
    criterion(4, "canonical filtration spectral sequence", || {
        let b = load_example("hopf").unwrap();
        let coeff = b.coeff("rat").unwrap();
        let dga = inst_dga::<Rat>(&coeff.ctx, &b.dga).unwrap();
        let decl = b.cocycle(&coeff.cocycle).unwrap();
        let crit = b.critical(&decl.src).unwrap();
        let m = inst_cocycle::<Rat>(&coeff.ctx, &decl.matrix).unwrap();
        let CoeffSystem::Dg(module) = &coeff.system else { panic!("rat tag is DG") };
        let f = inst_module::<Rat>(&coeff.ctx, b.module(module).unwrap()).unwrap();
        let x = build_twisted_complex(&dga, &f, crit, &m).unwrap();
        let ss = canonical_spectral_sequence(&x).unwrap();
        let e2 = ss.page(2).unwrap();
        let mut checked = 0;
        for e in &b.expects {
            match e {
                Expectation::E2(tag, p, q, n) if tag == "rat" => {
                    assert_eq!(e2.dims.get(&(*p, *q)).copied().unwrap_or(0), *n, "E2({p},{q})");
                    checked += 1;
                }
                Expectation::D2(tag, p, q, n) if tag == "rat" => {
                    assert_eq!(e2.d_ranks.get(&(*p, *q)).copied().unwrap_or(0), *n, "d2({p},{q})");
                    checked += 1;
                }
                _ => {}
            }
        }
        assert!(checked >= 5, "hopf stores E2 and d2 expectations");
        let inf: BTreeMap<(i64, i64), usize> = [((0, 0), 1), ((2, 1), 1)].into();
        assert_eq!(ss.infinity, inf);
        assert!(ss.converges);
    });
}

fn degree_zero_agrees<R: EuclideanRing>(b: &Bundle, ctx: &ScalarCtx, tag: &str) {
    let coeff = b.coeff(tag).unwrap();
    let CoeffSystem::Dg(module) = &coeff.system else { return };
    let dga = inst_dga::<R>(ctx, &b.dga).unwrap();
    let decl = b.cocycle(&coeff.cocycle).unwrap();
    let crit = b.critical(&decl.src).unwrap();
    let m = inst_cocycle::<R>(ctx, &decl.matrix).unwrap();
    let f = inst_module::<R>(ctx, b.module(module).unwrap()).unwrap();
    let x = build_twisted_complex(&dga, &f, crit, &m).unwrap();
    let h = x.homology().unwrap();
    let h0 = h.degrees.get(&0).unwrap();
    let l = lifted_complex(crit, &m, &dga).unwrap();
    let (rank, torsion) = degree_zero_formula(&dga, &f, &l).unwrap();
    assert_eq!(rank, h0.free_rank, "{}/{tag} free rank", b.name);
    assert_eq!(torsion, h0.torsion, "{}/{tag} torsion", b.name);
}

#[test]
fn criterion_5_degree_zero_closed_formula() {
    criterion(5, "closed formula for H_0", || {
        let mut checked = 0;
        for name in EXAMPLE_NAMES {
            let b = load_example(name).unwrap();
            for (tag, coeff) in &b.coeffs {
                if !matches!(coeff.system, CoeffSystem::Dg(_)) {
                    continue;
                }
                match coeff.ctx {
                    ScalarCtx::Int => degree_zero_agrees::<Int>(&b, &coeff.ctx, tag),
                    ScalarCtx::Rat => degree_zero_agrees::<Rat>(&b, &coeff.ctx, tag),
                    ScalarCtx::Fp(_) => degree_zero_agrees::<Fp>(&b, &coeff.ctx, tag),
                    ScalarCtx::LaurentRat => {
                        degree_zero_agrees::<LaurentRat>(&b, &coeff.ctx, tag)
                    }
                }
                checked += 1;
            }
        }
        assert!(checked >= 10, "only {checked} DG tags checked");
    });
}

#[test]
fn criterion_6_morphisms_and_mutation_detection() {
    criterion(6, "verified morphisms; sign flips are caught", || {
        // every declared continuation and homotopy verifies
        let mut maps = 0;
        for name in EXAMPLE_NAMES {
            let b = load_example(name).unwrap();
            for mapname in b.maps.keys() {
                cmd_map_check(&b, mapname, Format::Plain)
                    .unwrap_or_else(|e| panic!("{name}/{mapname}: {e}"));
                maps += 1;
            }
        }
        assert!(maps >= 4);

        // flipping the sign of any single term of a twisting cocycle with a
        // non-vacuous Maurer-Cartan relation must be detected
        let targets = [
            ("torus2", "m"),
            ("rp2", "m"),
            ("klein", "m"),
            ("klein-pd-pair", "mf"),
            ("klein-pd-pair", "mnegf"),
        ];
        let (mut total, mut caught) = (0, 0);
        for (name, cname) in targets {
            let b = load_example(name).unwrap();
            let ctx = ScalarCtx::Int;
            let dga = inst_dga::<Int>(&ctx, &b.dga).unwrap();
            let decl = b.cocycle(cname).unwrap();
            let crit = b.critical(&decl.src).unwrap();
            let m = inst_cocycle::<Int>(&ctx, &decl.matrix).unwrap();
            assert!(check_maurer_cartan(crit, &dga, &m).unwrap().is_empty());
            for ((x, y), elt) in &m.entries {
                for key in elt.terms.keys() {
                    total += 1;
                    let flipped = m.flip_term(x, y, key);
                    if !check_maurer_cartan(crit, &dga, &flipped).unwrap().is_empty() {
                        caught += 1;
                    } else {
                        panic!("{name}/{cname}: flip of {key:?} in ({x}, {y}) undetected");
                    }
                }
            }
        }
        assert_eq!(caught, total);
        assert!(total >= 20, "only {total} mutations exercised");
    });
}

#[test]
fn criterion_7_lifted_continuation_invertibility() {
    criterion(7, "unit-monomial certificate over the group ring", || {
        let b = load_example("circle").unwrap();
        let ctx = ScalarCtx::Int;
        let dga = inst_dga::<Int>(&ctx, &b.dga).unwrap();
        let crit = b.critical("morse").unwrap();
        let m = inst_cocycle::<Int>(&ctx, &b.cocycle("m").unwrap().matrix).unwrap();
        let malt = inst_cocycle::<Int>(&ctx, &b.cocycle("malt").unwrap().matrix).unwrap();
        let nu0 = inst_cocycle::<Int>(&ctx, &b.cocycle("nu0").unwrap().matrix).unwrap();
        let src = lifted_complex(crit, &m, &dga).unwrap();
        let tgt = lifted_complex(crit, &malt, &dga).unwrap();
        let lifted = lifted_continuation_map(&src, &tgt, &nu0, &dga).unwrap();
        assert!(lifted.is_unit_monomial());

        // downstairs, the same continuation data induces a quasi-isomorphism
        // of the Laurent-coefficient complexes, and the zero map does not
        let coeff = b.coeff("loop").unwrap();
        let dga = inst_dga::<LaurentRat>(&coeff.ctx, &b.dga).unwrap();
        let f = inst_module::<LaurentRat>(&coeff.ctx, b.module("line").unwrap()).unwrap();
        let m = inst_cocycle::<LaurentRat>(&coeff.ctx, &b.cocycle("m").unwrap().matrix).unwrap();
        let malt =
            inst_cocycle::<LaurentRat>(&coeff.ctx, &b.cocycle("malt").unwrap().matrix).unwrap();
        let nu0 =
            inst_cocycle::<LaurentRat>(&coeff.ctx, &b.cocycle("nu0").unwrap().matrix).unwrap();
        let x = build_twisted_complex(&dga, &f, crit, &m).unwrap();
        let y = build_twisted_complex(&dga, &f, crit, &malt).unwrap();
        let psi = induce_chain_map(&dga, &f, crit, &m, crit, &malt, &nu0, &x, &y).unwrap();
        assert!(is_quasi_iso(&x, &y, &psi).unwrap());
        assert!(!is_quasi_iso(&x, &y, &ChainMap::zero(0)).unwrap());
    });
}

fn induced<R: EuclideanRing>(
    b: &Bundle,
    ctx: &ScalarCtx,
    mapname: &str,
) -> (TwistedComplex<R>, TwistedComplex<R>, ChainMap<R>) {
    let decl = b.maps.get(mapname).unwrap();
    let coeff = b.coeff(&decl.coeff).unwrap();
    let CoeffSystem::Dg(module) = &coeff.system else { panic!("DG coefficients expected") };
    let dga = inst_dga::<R>(ctx, &b.dga).unwrap();
    let f = inst_module::<R>(ctx, b.module(module).unwrap()).unwrap();
    let c0 = b.critical(&decl.src.0).unwrap();
    let m0 = inst_cocycle::<R>(ctx, &b.cocycle(&decl.src.1).unwrap().matrix).unwrap();
    let c1 = b.critical(&decl.tgt.0).unwrap();
    let m1 = inst_cocycle::<R>(ctx, &b.cocycle(&decl.tgt.1).unwrap().matrix).unwrap();
    let nu = inst_cocycle::<R>(ctx, &b.cocycle(&decl.nu0).unwrap().matrix).unwrap();
    let src = build_twisted_complex(&dga, &f, c0, &m0).unwrap();
    let tgt = build_twisted_complex(&dga, &f, c1, &m1).unwrap();
    let psi = induce_chain_map(&dga, &f, c0, &m0, c1, &m1, &nu, &src, &tgt).unwrap();
    (src, tgt, psi)
}

#[test]
fn criterion_8_degree_two_selfmap() {
    criterion(8, "composite of wrong-way maps is multiplication by two", || {
        let b = load_example("circle-deg2-selfmap").unwrap();
        let ctx = ScalarCtx::Int;
        let (base, pull, back) = induced::<Int>(&b, &ctx, "back");
        let (pull2, base2, fwd) = induced::<Int>(&b, &ctx, "fwd");
        let h_base = base.homology().unwrap();
        let h_pull = pull.homology().unwrap();
        let mb = induced_on_homology(&back, &base, &pull, &h_base, &h_pull).unwrap();
        let mf = induced_on_homology(&fwd, &pull2, &base2, &h_pull, &h_base).unwrap();
        for deg in [0i64, 1] {
            let comp = mf.get(&deg).unwrap().mul(mb.get(&deg).unwrap());
            assert_eq!(comp.rows, 1);
            assert_eq!(comp[(0, 0)], Int::from(2), "degree {deg}");
        }
    });
}

fn pd_summaries(name: &str) -> (Vec<(i64, String)>, Vec<(i64, String)>) {
    let b = load_example(name).unwrap();
    let decl = b.pairings.get("pd").unwrap();
    let orientation = decl.orientation.as_ref().map(|w| b.characters.get(w).unwrap());
    let dga = inst_dga::<Int>(&decl.ctx, &b.dga).unwrap();
    let f = inst_module::<Int>(&decl.ctx, b.module(&decl.module).unwrap()).unwrap();
    let c_f = b.critical(&decl.f.0).unwrap();
    let m_f = inst_cocycle::<Int>(&decl.ctx, &b.cocycle(&decl.f.1).unwrap().matrix).unwrap();
    let c_negf = b.critical(&decl.negf.0).unwrap();
    let m_negf = inst_cocycle::<Int>(&decl.ctx, &b.cocycle(&decl.negf.1).unwrap().matrix).unwrap();
    let cert = poincare_duality(
        &dga, &f, c_f, &m_f, c_negf, &m_negf, &decl.matching, orientation,
    )
    .unwrap();
    let coh = cert.cochain.cohomology().unwrap();
    let hom = cert.chain.homology().unwrap();
    (
        coh.degrees.iter().map(|(d, h)| (*d, h.summary())).collect(),
        hom.degrees.iter().map(|(d, h)| (*d, h.summary())).collect(),
    )
}

#[test]
fn criterion_9_poincare_duality() {
    criterion(9, "chain-level duality, orientable and not", || {
        let (coh, hom) = pd_summaries("sphere2-pd-pair");
        let want: Vec<(i64, String)> =
            vec![(0, "Z".into()), (1, "0".into()), (2, "Z".into())];
        assert_eq!(coh, want, "sphere cochain side");
        assert_eq!(hom, want, "sphere chain side");

        let (coh, hom) = pd_summaries("klein-pd-pair");
        assert_eq!(
            coh,
            vec![(0, "0".into()), (1, "Z + Z/(2)".into()), (2, "Z".into())],
            "klein cochain side"
        );
        assert_eq!(
            hom,
            vec![(0, "Z".into()), (1, "Z + Z/(2)".into()), (2, "0".into())],
            "klein chain side"
        );
    });
}

#[test]
fn criterion_10_structural_guarantees() {
    criterion(10, "d-squared, SNF verification, round-trips, determinism", || {
        // d^2 = 0 certified for every complex the corpus can build
        for name in EXAMPLE_NAMES {
            let b = load_example(name).unwrap();
            for coeff in b.coeffs.values() {
                let decl = b.cocycle(&coeff.cocycle).unwrap();
                let crit = b.critical(&decl.src).unwrap();
                match &coeff.system {
                    CoeffSystem::Dg(module) => {
                        fn dg_d2<R: EuclideanRing>(
                            b: &Bundle,
                            ctx: &ScalarCtx,
                            module: &str,
                            cocycle: &str,
                        ) {
                            let dga = inst_dga::<R>(ctx, &b.dga).unwrap();
                            let decl = b.cocycle(cocycle).unwrap();
                            let crit = b.critical(&decl.src).unwrap();
                            let m = inst_cocycle::<R>(ctx, &decl.matrix).unwrap();
                            let f = inst_module::<R>(ctx, b.module(module).unwrap()).unwrap();
                            let x = build_twisted_complex(&dga, &f, crit, &m).unwrap();
                            x.certify_d_squared().unwrap();
                        }
                        match coeff.ctx {
                            ScalarCtx::Int => dg_d2::<Int>(&b, &coeff.ctx, module, &coeff.cocycle),
                            ScalarCtx::Rat => dg_d2::<Rat>(&b, &coeff.ctx, module, &coeff.cocycle),
                            ScalarCtx::Fp(_) => dg_d2::<Fp>(&b, &coeff.ctx, module, &coeff.cocycle),
                            ScalarCtx::LaurentRat => {
                                dg_d2::<LaurentRat>(&b, &coeff.ctx, module, &coeff.cocycle)
                            }
                        }
                    }
                    CoeffSystem::Lifted(_) | CoeffSystem::GroupRing => {
                        let dga = inst_dga::<Int>(&ScalarCtx::Int, &b.dga).unwrap();
                        let m = inst_cocycle::<Int>(&ScalarCtx::Int, &decl.matrix).unwrap();
                        let l = lifted_complex(crit, &m, &dga).unwrap();
                        l.certify_d_squared().unwrap();
                    }
                }
            }
        }

        // seeded random Smith normal forms verify the transform identities
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..1000 {
            let rows = rng.gen_range(0..=12);
            let cols = rng.gen_range(0..=12);
            let mut a = Mat::<Int>::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a[(i, j)] = Int::from(rng.gen_range(-9i64..=9));
                }
            }
            let snf = smith_normal_form(&a);
            assert!(snf.verify(&a));
            let d = snf.diagonal();
            for w in d.windows(2) {
                if w[0].is_zero() {
                    assert!(w[1].is_zero());
                } else {
                    assert!((w[1].clone() % w[0].clone()).is_zero());
                }
            }
        }

        // every fixture validates cleanly and parses back to the same bytes
        for name in EXAMPLE_NAMES {
            let b = load_example(name).unwrap();
            assert!(b.validate().unwrap().is_empty(), "{name}");
            let text = render_bundle(&b);
            let b2 = parse_bundle(&text).unwrap();
            assert_eq!(render_bundle(&b2), text, "{name}");
        }

        // reports are byte-deterministic, in-process and through the binary
        let b = load_example("rp2").unwrap();
        let r1 = cmd_homology(&b, "triv", Format::Structured).unwrap();
        let r2 = cmd_homology(&b, "triv", Format::Structured).unwrap();
        assert_eq!(r1, r2);
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_dgmorse"))
                .args(["homology", "rp2", "--coeff", "triv", "--format", "structured"])
                .output()
                .unwrap()
        };
        let (o1, o2) = (run(), run());
        assert!(o1.status.success());
        assert_eq!(o1.stdout, o2.stdout);
        assert_eq!(String::from_utf8(o1.stdout).unwrap(), r1);
    });
}
