//! Pointwise clutching maps: families of fiber isomorphisms indexed by
//! ordered pairs of base points, subject to three axioms:
//!
//! - reflexivity: `psi[x][x] = I`,
//! - symmetry: `psi[x'][x] = psi[x][x']^-1`,
//! - transitivity: `psi[x][x''] = psi[x'][x''] psi[x][x']`.
//!
//! The group acts on clutching maps by conjugation with the bundle
//! transport; the fixed points are the equivariant maps, and those glue the
//! bundle into a single representation carried by any one fiber.

use crate::bundle::{EquivariantBundle, ValidationReport};
use crate::cmatrix::{self, C64, CMat};
use crate::error::Error;
use crate::rep::Representation;
use crate::{Result, Tol};

/// An invertible matrix for every ordered pair of base points;
/// `psi[x][x']` maps the fiber at `x` to the fiber at `x'`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseClutchingMap {
    pub bundle: EquivariantBundle,
    psi: Vec<Vec<CMat>>,
}

impl PointwiseClutchingMap {
    /// Shape-checks the matrix family. A clutching map requires every fiber
    /// to have the same rank; bundles with differing ranks across orbits
    /// are rejected here.
    pub fn new(bundle: EquivariantBundle, psi: Vec<Vec<CMat>>) -> Result<Self> {
        let base = bundle.base_size();
        let Some(_) = bundle.constant_rank() else {
            return Err(Error::RankMismatch);
        };
        if psi.len() != base {
            return Err(Error::InvalidClutch(format!(
                "expected {base} rows, found {}",
                psi.len()
            )));
        }
        for (x, row) in psi.iter().enumerate() {
            if row.len() != base {
                return Err(Error::InvalidClutch(format!(
                    "row {x} has {} entries, expected {base}",
                    row.len()
                )));
            }
            for (xp, m) in row.iter().enumerate() {
                if m.nrows() != bundle.rank_at(xp) || m.ncols() != bundle.rank_at(x) {
                    return Err(Error::InvalidClutch(format!(
                        "psi[{x}][{xp}] has shape {}x{}, expected {}x{}",
                        m.nrows(),
                        m.ncols(),
                        bundle.rank_at(xp),
                        bundle.rank_at(x)
                    )));
                }
            }
        }
        Ok(PointwiseClutchingMap { bundle, psi })
    }

    /// The identity clutching map of a constant-rank bundle.
    pub fn identity(bundle: EquivariantBundle) -> Result<Self> {
        let r = bundle.constant_rank().ok_or(Error::RankMismatch)?;
        let base = bundle.base_size();
        let psi = vec![vec![cmatrix::identity(r); base]; base];
        PointwiseClutchingMap::new(bundle, psi)
    }

    pub fn psi(&self, x: usize, xp: usize) -> &CMat {
        &self.psi[x][xp]
    }

    pub fn base_size(&self) -> usize {
        self.bundle.base_size()
    }

    pub fn rank(&self) -> usize {
        self.bundle.constant_rank().expect("checked at construction")
    }

    /// Checks the three axioms, reporting each violated identity with its
    /// residual. Symmetry is checked as `psi[x'][x] psi[x][x'] = I`, which
    /// avoids inverting anything.
    pub fn validate(&self, tol: &Tol) -> ValidationReport {
        let mut report = ValidationReport::default();
        let base = self.base_size();
        for x in 0..base {
            let residual = cmatrix::residual_from_identity(&self.psi[x][x]);
            if residual > tol.eps_mat {
                report.record("reflexivity", format!("x={x}"), residual);
            }
        }
        for x in 0..base {
            for xp in 0..base {
                let product = &self.psi[xp][x] * &self.psi[x][xp];
                let residual = cmatrix::residual_from_identity(&product);
                if residual > tol.eps_mat {
                    report.record("symmetry", format!("x={x}, x'={xp}"), residual);
                }
            }
        }
        for x in 0..base {
            for xp in 0..base {
                for xpp in 0..base {
                    let composed = &self.psi[xp][xpp] * &self.psi[x][xp];
                    let residual = cmatrix::rel_residual(&composed, &self.psi[x][xpp]);
                    if residual > tol.eps_mat {
                        report.record(
                            "transitivity",
                            format!("x={x}, x'={xp}, x''={xpp}"),
                            residual,
                        );
                    }
                }
            }
        }
        report
    }

    /// The action of a group element: `(g.psi)[x][x']` conjugates the value
    /// at `(g^-1 x, g^-1 x')` by the transports of `g`. The inverse factor
    /// is the transport of `g^-1`, which equals `A[g][g^-1 x]^-1` by the
    /// cocycle law without any matrix inversion.
    pub fn act(&self, g: usize) -> Self {
        let action = &self.bundle.action;
        let gi = action.group.inv(g);
        let base = self.base_size();
        let psi = (0..base)
            .map(|x| {
                let xs = action.apply(gi, x);
                (0..base)
                    .map(|xp| {
                        let xps = action.apply(gi, xp);
                        self.bundle.transport(g, xps)
                            * &self.psi[xs][xps]
                            * self.bundle.transport(gi, x)
                    })
                    .collect()
            })
            .collect();
        PointwiseClutchingMap {
            bundle: self.bundle.clone(),
            psi,
        }
    }

    /// Worst relative residual of `g.psi = psi` over all group elements.
    pub fn equivariance_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for g in self.bundle.action.group.elements() {
            let moved = self.act(g);
            for x in 0..self.base_size() {
                for xp in 0..self.base_size() {
                    worst = worst.max(cmatrix::rel_residual(&moved.psi[x][xp], &self.psi[x][xp]));
                }
            }
        }
        worst
    }

    pub fn is_equivariant(&self, tol: &Tol) -> bool {
        self.equivariance_residual() <= tol.eps_mat
    }

    /// The glued representation at a basepoint: `g` acts on the fiber at
    /// `x0` by transporting and then clutching back,
    /// `rep(g) = psi[g.x0][x0] A[g][x0]`.
    ///
    /// For stabilizer elements the clutching factor is the diagonal value,
    /// which the axioms force to be the identity, so the raw transport is
    /// used; the restriction of the glued representation to the stabilizer
    /// is then the fiber representation with zero residual.
    pub fn glued_representation(&self, x0: usize, tol: &Tol) -> Result<GluedRepresentation> {
        if x0 >= self.base_size() {
            return Err(Error::PointOutOfRange {
                point: x0,
                base_size: self.base_size(),
            });
        }
        let residual = self.equivariance_residual();
        if residual > tol.eps_mat {
            return Err(Error::NotEquivariant { residual });
        }
        let action = &self.bundle.action;
        let mats = action
            .group
            .elements()
            .map(|g| {
                let gx0 = action.apply(g, x0);
                if gx0 == x0 {
                    self.bundle.transport(g, x0).clone()
                } else {
                    &self.psi[gx0][x0] * self.bundle.transport(g, x0)
                }
            })
            .collect();
        let rep = Representation::new(action.group.clone(), mats, tol)?;
        Ok(GluedRepresentation {
            basepoint: x0,
            rep,
        })
    }

    /// The equivariant fiberwise isomorphism onto the glued fiber:
    /// `p[x] = psi[x][x0]`.
    pub fn quotient_map(&self, x0: usize, tol: &Tol) -> Result<FiberwiseIso> {
        let glued = self.glued_representation(x0, tol)?;
        let maps: Vec<CMat> = (0..self.base_size())
            .map(|x| self.psi[x][x0].clone())
            .collect();
        let p = FiberwiseIso { maps };
        debug_assert!(
            p.equivariance_residual(&self.bundle, &glued.rep) <= 10.0 * tol.eps_mat,
            "quotient map must intertwine the glued representation"
        );
        Ok(p)
    }

    /// The unique clutching map determined by an equivariant fiberwise
    /// isomorphism `p` onto `w`: `psi[x][x'] = p[x']^-1 p[x]`.
    pub fn from_fiberwise_iso(
        bundle: EquivariantBundle,
        w: &Representation,
        p: &FiberwiseIso,
        tol: &Tol,
    ) -> Result<Self> {
        let base = bundle.base_size();
        if p.maps.len() != base {
            return Err(Error::InvalidFiso(format!(
                "expected {base} fiber maps, found {}",
                p.maps.len()
            )));
        }
        for (x, m) in p.maps.iter().enumerate() {
            if m.nrows() != w.dim || m.ncols() != bundle.rank_at(x) {
                return Err(Error::InvalidFiso(format!(
                    "map {x} has shape {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    w.dim,
                    bundle.rank_at(x)
                )));
            }
            let smin = cmatrix::sigma_min(m);
            if m.nrows() != m.ncols() || smin <= tol.eps_sing {
                return Err(Error::InvalidFiso(format!(
                    "map {x} is not a fiber isomorphism (sigma_min {smin:.3e})"
                )));
            }
        }
        let residual = p.equivariance_residual(&bundle, w);
        if residual > tol.eps_mat {
            return Err(Error::InvalidFiso(format!(
                "family is not equivariant (worst residual {residual:.3e})"
            )));
        }
        let inverses: Vec<CMat> = p
            .maps
            .iter()
            .map(|m| cmatrix::inverse(m, tol.eps_sing))
            .collect::<Result<_>>()?;
        let psi = (0..base)
            .map(|x| {
                (0..base)
                    .map(|xp| {
                        if x == xp {
                            cmatrix::identity(bundle.rank_at(x))
                        } else {
                            &inverses[xp] * &p.maps[x]
                        }
                    })
                    .collect()
            })
            .collect();
        PointwiseClutchingMap::new(bundle, psi)
    }
}

/// A representation glued out of a bundle, carried by the fiber at the
/// basepoint.
#[derive(Debug, Clone)]
pub struct GluedRepresentation {
    pub basepoint: usize,
    pub rep: Representation,
}

/// A family of linear isomorphisms from the fibers of a bundle onto one
/// representation space.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberwiseIso {
    pub maps: Vec<CMat>,
}

impl FiberwiseIso {
    /// Worst residual of `p[g.x] A[g][x] = w(g) p[x]` over all `(g, x)`.
    pub fn equivariance_residual(&self, bundle: &EquivariantBundle, w: &Representation) -> f64 {
        let action = &bundle.action;
        let mut worst = 0.0f64;
        for g in action.group.elements() {
            for x in 0..bundle.base_size() {
                let lhs = &self.maps[action.apply(g, x)] * bundle.transport(g, x);
                let rhs = w.mat(g) * &self.maps[x];
                worst = worst.max(cmatrix::rel_residual(&lhs, &rhs));
            }
        }
        worst
    }

    /// Rescales every fiber map by the same nonzero scalar.
    pub fn rescale(&self, c: C64) -> FiberwiseIso {
        FiberwiseIso {
            maps: self.maps.iter().map(|m| m * c).collect(),
        }
    }
}

/// Result of averaging the two glued representations against each other.
#[derive(Debug, Clone)]
pub struct Averaging {
    pub alpha: CMat,
    pub sigma_min: f64,
    /// worst residual of the intertwining identity over all group elements
    pub intertwining_residual: f64,
}

impl Averaging {
    pub fn is_invertible(&self, tol: &Tol) -> bool {
        self.sigma_min > tol.eps_sing
    }
}

/// Averages `rho_{psi0}(g) rho_psi(g)^-1` over the group. The result
/// intertwines the glued representation of `psi` into that of `psi0`; it is
/// invertible when the two maps are close enough, and singular when they
/// lie in different components. Identical inputs short-circuit to the exact
/// identity, the value the normalized average attains there.
pub fn averaging(
    psi0: &PointwiseClutchingMap,
    psi: &PointwiseClutchingMap,
    x0: usize,
    tol: &Tol,
) -> Result<Averaging> {
    if psi0.bundle != psi.bundle {
        return Err(Error::BundleMismatch);
    }
    let rank = psi0.rank();
    if psi0.psi == psi.psi {
        // equivariance is still a precondition
        let residual = psi0.equivariance_residual();
        if residual > tol.eps_mat {
            return Err(Error::NotEquivariant { residual });
        }
        return Ok(Averaging {
            alpha: cmatrix::identity(rank),
            sigma_min: 1.0,
            intertwining_residual: 0.0,
        });
    }
    let glued0 = psi0.glued_representation(x0, tol)?;
    let glued = psi.glued_representation(x0, tol)?;
    let group = &psi0.bundle.action.group;
    let n = group.order();
    let mut alpha = cmatrix::zeros(rank, rank);
    for g in group.elements() {
        alpha += glued0.rep.mat(g) * glued.rep.mat(group.inv(g));
    }
    alpha /= C64::new(n as f64, 0.0);
    let mut intertwining_residual = 0.0f64;
    for g in group.elements() {
        let lhs = glued0.rep.mat(g) * &alpha;
        let rhs = &alpha * glued.rep.mat(g);
        intertwining_residual = intertwining_residual.max(cmatrix::rel_residual(&lhs, &rhs));
    }
    Ok(Averaging {
        sigma_min: cmatrix::sigma_min(&alpha),
        alpha,
        intertwining_residual,
    })
}

/// The averaging map as an isomorphism, refusing the singular case rather
/// than inverting it.
pub fn averaging_isomorphism(
    psi0: &PointwiseClutchingMap,
    psi: &PointwiseClutchingMap,
    x0: usize,
    tol: &Tol,
) -> Result<CMat> {
    let avg = averaging(psi0, psi, x0, tol)?;
    if !avg.is_invertible(tol) {
        return Err(Error::SingularAveraging {
            sigma_min: avg.sigma_min,
        });
    }
    Ok(avg.alpha)
}

/// Free-function aliases for the clutch operations.
pub fn validate_clutch(psi: &PointwiseClutchingMap, tol: &Tol) -> ValidationReport {
    psi.validate(tol)
}

pub fn act_on_clutch(g: usize, psi: &PointwiseClutchingMap) -> PointwiseClutchingMap {
    psi.act(g)
}

pub fn is_equivariant(psi: &PointwiseClutchingMap, tol: &Tol) -> bool {
    psi.is_equivariant(tol)
}

pub fn glued_representation(
    psi: &PointwiseClutchingMap,
    x0: usize,
    tol: &Tol,
) -> Result<GluedRepresentation> {
    psi.glued_representation(x0, tol)
}

pub fn quotient_map(psi: &PointwiseClutchingMap, x0: usize, tol: &Tol) -> Result<FiberwiseIso> {
    psi.quotient_map(x0, tol)
}

pub fn clutch_from_fiberwise_iso(
    bundle: EquivariantBundle,
    w: &Representation,
    p: &FiberwiseIso,
    tol: &Tol,
) -> Result<PointwiseClutchingMap> {
    PointwiseClutchingMap::from_fiberwise_iso(bundle, w, p, tol)
}
