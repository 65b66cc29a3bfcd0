//! Equivariant complex vector bundles over a finite base set.
//!
//! A bundle assigns a fiber dimension to every base point and a transport
//! matrix to every (group element, point) pair, subject to the cocycle law
//! `A[g h][x] = A[g][h.x] A[h][x]`. Transports are stored densely for all
//! pairs, so validation is a direct scan.

use serde::Serialize;

use crate::cmatrix::{self, CMat};
use crate::error::Error;
use crate::group::{GroupAction, Subgroup};
use crate::rep::Representation;
use crate::{Result, Tol};

/// One failed invariant: the rule that failed, where, and the residual.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub rule: String,
    pub location: String,
    pub residual: f64,
}

/// Outcome of validating an object against its numeric invariants.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn worst_residual(&self) -> f64 {
        self.violations
            .iter()
            .map(|v| v.residual)
            .fold(0.0, f64::max)
    }

    pub(crate) fn record(&mut self, rule: &str, location: String, residual: f64) {
        self.violations.push(Violation {
            rule: rule.to_string(),
            location,
            residual,
        });
    }
}

/// An equivariant complex vector bundle over a finite set.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivariantBundle {
    pub action: GroupAction,
    ranks: Vec<usize>,
    /// transport[g][x] has shape ranks[g.x] x ranks[x]
    transport: Vec<Vec<CMat>>,
}

impl EquivariantBundle {
    /// Shape-checks the data. Numeric invariants are the business of
    /// [`EquivariantBundle::validate`].
    pub fn new(
        action: GroupAction,
        ranks: Vec<usize>,
        transport: Vec<Vec<CMat>>,
    ) -> Result<Self> {
        let n = action.group.order();
        let base = action.base_size();
        if ranks.len() != base {
            return Err(Error::InvalidBundle(format!(
                "expected {base} ranks, found {}",
                ranks.len()
            )));
        }
        if ranks.contains(&0) {
            return Err(Error::InvalidBundle("zero-dimensional fiber".into()));
        }
        if transport.len() != n {
            return Err(Error::InvalidBundle(format!(
                "expected {n} transport rows, found {}",
                transport.len()
            )));
        }
        for (g, row) in transport.iter().enumerate() {
            if row.len() != base {
                return Err(Error::InvalidBundle(format!(
                    "transport row {g} has {} entries, expected {base}",
                    row.len()
                )));
            }
            for (x, m) in row.iter().enumerate() {
                let target = action.apply(g, x);
                if m.nrows() != ranks[target] || m.ncols() != ranks[x] {
                    return Err(Error::InvalidBundle(format!(
                        "transport[{g}][{x}] has shape {}x{}, expected {}x{}",
                        m.nrows(),
                        m.ncols(),
                        ranks[target],
                        ranks[x]
                    )));
                }
            }
        }
        Ok(EquivariantBundle {
            action,
            ranks,
            transport,
        })
    }

    /// Every fiber carries the space of `w` and every transport is `w(g)`.
    pub fn pullback(w: &Representation, action: GroupAction) -> Result<Self> {
        if !action.group.same_structure(&w.group) {
            return Err(Error::GroupMismatch);
        }
        let base = action.base_size();
        let ranks = vec![w.dim; base];
        let transport = w
            .group
            .elements()
            .map(|g| vec![w.mat(g).clone(); base])
            .collect();
        EquivariantBundle::new(action, ranks, transport)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank_at(&self, x: usize) -> usize {
        self.ranks[x]
    }

    /// The single fiber rank, if all fibers agree.
    pub fn constant_rank(&self) -> Option<usize> {
        let r = self.ranks[0];
        self.ranks.iter().all(|&s| s == r).then_some(r)
    }

    pub fn transport(&self, g: usize, x: usize) -> &CMat {
        &self.transport[g][x]
    }

    pub fn base_size(&self) -> usize {
        self.action.base_size()
    }

    /// Checks identity transports, the cocycle law, invertibility, and
    /// constancy of ranks along orbits. Returns every violation found.
    pub fn validate(&self, tol: &Tol) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.action.group.order();
        let base = self.base_size();
        for x in 0..base {
            let residual = cmatrix::residual_from_identity(&self.transport[0][x]);
            if residual > tol.eps_mat {
                report.record("identity", format!("x={x}"), residual);
            }
        }
        for g in 0..n {
            for x in 0..base {
                let smin = cmatrix::sigma_min(&self.transport[g][x]);
                if smin <= tol.eps_sing {
                    report.record("invertible", format!("g={g}, x={x}"), smin);
                }
            }
        }
        for g in 0..n {
            for h in 0..n {
                let gh = self.action.group.mul(g, h);
                for x in 0..base {
                    let lhs = &self.transport[gh][x];
                    let rhs = &self.transport[g][self.action.apply(h, x)] * &self.transport[h][x];
                    let residual = cmatrix::rel_residual(&rhs, lhs);
                    if residual > tol.eps_mat {
                        report.record("cocycle", format!("g={g}, h={h}, x={x}"), residual);
                    }
                }
            }
        }
        for orbit in self.action.orbits().orbits {
            let r = self.ranks[orbit[0]];
            if orbit.iter().any(|&x| self.ranks[x] != r) {
                report.record(
                    "constant-rank-on-orbit",
                    format!("orbit of {}", orbit[0]),
                    f64::INFINITY,
                );
            }
        }
        report
    }

    /// The fiber at `x` as a representation of the stabilizer of `x`.
    pub fn fiber_representation(&self, x: usize, tol: &Tol) -> Result<Representation> {
        let stab = self.action.stabilizer(x)?;
        let mats = stab
            .elements()
            .iter()
            .map(|&g| self.transport[g][x].clone())
            .collect();
        Representation::new(stab.as_group(), mats, tol)
    }

    /// The bundle over a subset, carried by the maximal subgroup preserving
    /// that subset. Base points are reindexed in ascending order.
    pub fn restrict(&self, subset: &[usize]) -> Result<EquivariantBundle> {
        let sub = self.action.preserving_subgroup(subset)?;
        let mut points = subset.to_vec();
        points.sort_unstable();
        points.dedup();
        let local_index = |y: usize| points.iter().position(|&p| p == y).unwrap();
        let group = sub.as_group();
        let act = sub
            .elements()
            .iter()
            .map(|&g| {
                points
                    .iter()
                    .map(|&x| local_index(self.action.apply(g, x)))
                    .collect()
            })
            .collect();
        let action = GroupAction::new(group, points.len(), act)?;
        let ranks = points.iter().map(|&x| self.ranks[x]).collect();
        let transport = sub
            .elements()
            .iter()
            .map(|&g| {
                points
                    .iter()
                    .map(|&x| self.transport[g][x].clone())
                    .collect()
            })
            .collect();
        EquivariantBundle::new(action, ranks, transport)
    }

    /// The subgroup carrying the restriction to `subset`.
    pub fn preserving_subgroup(&self, subset: &[usize]) -> Result<Subgroup> {
        self.action.preserving_subgroup(subset)
    }
}

/// Free-function aliases for the bundle operations.
pub fn validate_bundle(bundle: &EquivariantBundle, tol: &Tol) -> ValidationReport {
    bundle.validate(tol)
}

pub fn fiber_representation(
    bundle: &EquivariantBundle,
    x: usize,
    tol: &Tol,
) -> Result<Representation> {
    bundle.fiber_representation(x, tol)
}

pub fn restrict_bundle(bundle: &EquivariantBundle, subset: &[usize]) -> Result<EquivariantBundle> {
    bundle.restrict(subset)
}

pub fn pullback_bundle(w: &Representation, action: GroupAction) -> Result<EquivariantBundle> {
    EquivariantBundle::pullback(w, action)
}
