//! Spectral sequence of the canonical filtration by critical index, over a
//! field, with page-by-page differential ranks and a convergence
//! certificate against the homology of the total complex.

use std::collections::BTreeMap;

use crate::complex::{TcGen, TwistedComplex};
use crate::error::Error;
use crate::matrix::{kernel_basis, rank, Mat};
use crate::scalar::Field;

/// One page: entry dimensions and the ranks of the page differential
/// `d_r : E^r_{p,q} -> E^r_{p-r,q+r-1}` keyed by source `(p, q)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Page {
    pub r: i64,
    pub dims: BTreeMap<(i64, i64), usize>,
    pub d_ranks: BTreeMap<(i64, i64), usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpectralSequence {
    /// pages E^1, E^2, ... up to and including the stable page
    pub pages: Vec<Page>,
    /// stable entry dimensions
    pub infinity: BTreeMap<(i64, i64), usize>,
    /// for each total degree, sum of stable entries equals dim H
    pub converges: bool,
}

impl SpectralSequence {
    pub fn page(&self, r: i64) -> Option<&Page> {
        self.pages.iter().find(|p| p.r == r)
    }
}

// subspace helpers: subspaces of F^n as column spans

fn intersect<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    if a.cols == 0 || b.cols == 0 {
        return Mat::zero(a.rows, 0);
    }
    let k = kernel_basis(&a.hstack(b));
    let u = Mat::from_fn(a.cols, k.cols, |i, j| k[(i, j)].clone());
    a.mul(&u)
}

/// Span of `{x : d x in span(w)}`.
fn preimage<F: Field>(d: &Mat<F>, w: &Mat<F>) -> Mat<F> {
    if d.rows == 0 {
        return Mat::identity(d.cols);
    }
    if w.cols == 0 {
        return kernel_basis(d);
    }
    let k = kernel_basis(&d.hstack(w));
    Mat::from_fn(d.cols, k.cols, |i, j| k[(i, j)].clone())
}

fn quotient_dim<F: Field>(z: &Mat<F>, b: &Mat<F>) -> usize {
    rank(&z.hstack(b)) - rank(b)
}

/// Spectral sequence of the filtration `F_p = span{a (x) x : |x| <= p}`.
/// Relies on the basis being ordered by critical index within each degree,
/// which `build_twisted_complex` guarantees.
pub fn canonical_spectral_sequence<F: Field>(
    x: &TwistedComplex<F>,
) -> Result<SpectralSequence, Error> {
    let layers = &x.basis;
    let n_layers = layers.len();
    for layer in layers {
        if layer.windows(2).any(|w| w[0].point_index > w[1].point_index) {
            return Err(Error::Internal(
                "basis is not ordered by critical index".into(),
            ));
        }
    }
    let pmin = layers
        .iter()
        .flatten()
        .map(|g| g.point_index)
        .min()
        .unwrap_or(0);
    let pmax = layers
        .iter()
        .flatten()
        .map(|g| g.point_index)
        .max()
        .unwrap_or(0);

    // filtration prefix of a degree layer
    let filt = |layer: &[TcGen], p: i64| -> Mat<F> {
        let count = layer.iter().take_while(|g| g.point_index <= p).count();
        Mat::from_fn(layer.len(), count, |i, j| {
            if i == j { F::one() } else { F::zero() }
        })
    };
    // differential out of degree slot k
    let d_out = |k: i64| -> Mat<F> {
        if k <= 0 || k as usize >= n_layers {
            let cols = if k >= 0 && (k as usize) < n_layers {
                layers[k as usize].len()
            } else {
                0
            };
            Mat::zero(0, cols)
        } else {
            x.d[k as usize].clone()
        }
    };

    // Z^r at (p, slot k): F_p C_k meet d^{-1} F_{p-r} C_{k-1}
    let z_space = |r: i64, p: i64, k: i64| -> Mat<F> {
        if k < 0 || k as usize >= n_layers {
            return Mat::zero(0, 0);
        }
        let layer = &layers[k as usize];
        let d = d_out(k);
        let target: Mat<F> = if (k - 1) >= 0 && ((k - 1) as usize) < n_layers {
            filt(&layers[(k - 1) as usize], p - r)
        } else {
            Mat::zero(0, 0)
        };
        let pre = if d.rows == 0 {
            Mat::identity(layer.len())
        } else {
            preimage(&d, &target)
        };
        intersect(&filt(layer, p), &pre)
    };
    // boundary part at (p, slot k) for page r:
    // Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1} from slot k+1
    let b_space = |r: i64, p: i64, k: i64| -> Mat<F> {
        let za = z_space(r - 1, p - 1, k);
        let zup = z_space(r - 1, p + r - 1, k + 1);
        let dzup = if zup.rows == 0 || zup.cols == 0 {
            Mat::zero(layers.get(k as usize).map_or(0, |l| l.len()), 0)
        } else {
            d_out(k + 1).mul(&zup)
        };
        za.hstack(&dzup)
    };

    let rmax = (pmax - pmin).max(0) + 2;
    let mut pages = Vec::new();
    let mut prev_dims: Option<BTreeMap<(i64, i64), usize>> = None;
    for r in 1..=rmax {
        let mut dims = BTreeMap::new();
        let mut d_ranks = BTreeMap::new();
        for k in 0..n_layers as i64 {
            let n = x.lo + k;
            for p in pmin..=pmax {
                let q = n - p;
                let z = z_space(r, p, k);
                let b = b_space(r, p, k);
                // the boundary space sits inside z, so this is dim z/b
                let dim = quotient_dim(&z, &b);
                if dim > 0 {
                    dims.insert((p, q), dim);
                }
                // rank of d_r out of (p, q)
                if z.cols > 0 {
                    let dz = d_out(k).mul(&z);
                    let bt = b_space(r, p - r, k - 1);
                    let quot = if dz.rows == 0 {
                        0
                    } else {
                        quotient_dim(&dz, &bt)
                    };
                    if quot > 0 {
                        d_ranks.insert((p, q), quot);
                    }
                }
            }
        }
        let stable = d_ranks.is_empty() && prev_dims.as_ref() == Some(&dims);
        prev_dims = Some(dims.clone());
        pages.push(Page { r, dims, d_ranks });
        if stable {
            break;
        }
    }
    let infinity = pages.last().map(|p| p.dims.clone()).unwrap_or_default();

    // convergence certificate against the homology of the total complex
    let h = x.homology()?;
    let mut by_total: BTreeMap<i64, usize> = BTreeMap::new();
    for ((p, q), dim) in &infinity {
        *by_total.entry(p + q).or_insert(0) += dim;
    }
    let mut converges = true;
    for k in 0..n_layers as i64 {
        let n = x.lo + k;
        let expected = h.free_rank(n);
        if by_total.get(&n).copied().unwrap_or(0) != expected {
            converges = false;
        }
    }
    Ok(SpectralSequence { pages, infinity, converges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgKey, AlgebraElement, DgaPresentation, GradedBasis, GroupDecl};
    use crate::cocycle::{CocycleKind, CocycleMatrix, CriticalBasis};
    use crate::complex::build_twisted_complex;
    use crate::group::GroupSpec;
    use crate::module::{DgModulePresentation, GradingSense, ModuleElement};
    use crate::scalar::Rat;
    use num_traits::One;

    fn hopf_complex() -> TwistedComplex<Rat> {
        let spec = GroupSpec::Trivial;
        let dga: DgaPresentation<Rat> = DgaPresentation {
            basis: GradedBasis { gens: vec![("1".into(), 0), ("u".into(), 1)], window: (0, 2) },
            unit: "1".into(),
            mul_table: std::collections::BTreeMap::new(),
            diff_table: std::collections::BTreeMap::new(),
            group: Some(GroupDecl {
                spec: spec.clone(),
                proj: [("1".to_string(), spec.identity())].into_iter().collect(),
            }),
            involution: None,
        };
        let f: DgModulePresentation<Rat> = DgModulePresentation {
            basis: GradedBasis {
                gens: vec![("e0".into(), 0), ("e1".into(), 1)],
                window: (0, 1),
            },
            action: [(
                ("e0".to_string(), "u".to_string()),
                ModuleElement::single(1, "e1", Rat::one()),
            )]
            .into_iter()
            .collect(),
            diff: std::collections::BTreeMap::new(),
            sense: GradingSense::Homological,
        };
        let c = CriticalBasis {
            points: vec![("min".into(), 0), ("max".into(), 2)],
            ambient_dim: 2,
        };
        let mut m = CocycleMatrix::new(CocycleKind::Twisting);
        m.entries.insert(
            ("max".into(), "min".into()),
            AlgebraElement::single(1, AlgKey::Gen("u".into()), Rat::one()),
        );
        build_twisted_complex(&dga, &f, &c, &m).unwrap()
    }

    #[test]
    fn hopf_pages() {
        let x = hopf_complex();
        let ss = canonical_spectral_sequence(&x).unwrap();
        let e2 = ss.page(2).unwrap();
        // E^2 = E^1: four one-dimensional entries
        for key in [(0, 0), (0, 1), (2, 0), (2, 1)] {
            assert_eq!(e2.dims.get(&key).copied().unwrap_or(0), 1, "entry {key:?}");
        }
        // one rank-1 differential d_2 : E^2_{2,0} -> E^2_{0,1}
        assert_eq!(e2.d_ranks.get(&(2, 0)).copied(), Some(1));
        assert_eq!(e2.d_ranks.len(), 1);
        // E^3 onward: only (0,0) and (2,1) survive
        assert_eq!(
            ss.infinity,
            [((0, 0), 1), ((2, 1), 1)].into_iter().collect()
        );
        assert!(ss.converges);
    }

    #[test]
    fn no_differentials_beyond_stability() {
        let x = hopf_complex();
        let ss = canonical_spectral_sequence(&x).unwrap();
        let last = ss.pages.last().unwrap();
        assert!(last.d_ranks.is_empty());
    }
}
