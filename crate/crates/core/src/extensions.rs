//! Representation extensions of a bundle and the path components of the
//! space of equivariant clutching maps.
//!
//! A representation of the whole group is an extension of a bundle when its
//! restriction to every point stabilizer matches that point's fiber. The
//! extensions classify the path components: gluing sends each equivariant
//! clutching map to an extension, every extension is realized, and two maps
//! lie in the same component exactly when they glue to the same class.

use crate::bundle::EquivariantBundle;
use crate::clutch::{FiberwiseIso, PointwiseClutchingMap};
use crate::cmatrix::{C64, CMat};
use crate::error::Error;
use crate::group::Subgroup;
use crate::rep::{self, CharacterTable, Representation};
use crate::{Result, Tol};

/// An isomorphism class of representation extensions, identified by its
/// exact multiplicity vector over the irreducible characters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExtensionClass {
    /// multiplicity of each irreducible, in character-table row order
    pub mults: Vec<usize>,
}

impl ExtensionClass {
    pub fn dim(&self, table: &CharacterTable) -> usize {
        self.mults
            .iter()
            .zip(&table.dims)
            .map(|(&n, &d)| n * d)
            .sum()
    }

    pub fn character(&self, table: &CharacterTable) -> Vec<C64> {
        let k = table.num_classes();
        (0..k)
            .map(|j| {
                self.mults
                    .iter()
                    .enumerate()
                    .map(|(i, &n)| table.rows[i][j] * n as f64)
                    .sum()
            })
            .collect()
    }

    /// The class realized as a block-diagonal representation.
    pub fn realize(&self, irreps: &[Representation]) -> Result<Representation> {
        rep::rep_from_mult_vector(irreps, &self.mults)
    }
}

/// Restriction data at one orbit representative: the integer restriction
/// matrix of the group's irreducibles and the fiber's multiplicities, both
/// over the stabilizer's irreducibles.
struct OrbitConstraint {
    restriction: Vec<Vec<usize>>,
    fiber_mults: Vec<usize>,
}

impl OrbitConstraint {
    /// Whether a multiplicity vector restricts to the fiber at this orbit.
    fn admits(&self, mults: &[usize]) -> bool {
        self.restriction.iter().zip(&self.fiber_mults).all(|(row, &target)| {
            row.iter().zip(mults).map(|(&m, &n)| m * n).sum::<usize>() == target
        })
    }
}

fn orbit_constraints(
    bundle: &EquivariantBundle,
    table: &CharacterTable,
    tol: &Tol,
) -> Result<Vec<OrbitConstraint>> {
    bundle
        .action
        .orbits()
        .representatives
        .iter()
        .map(|&s| {
            let stab = bundle.action.stabilizer(s)?;
            let table_k = rep::character_table(&stab.as_group())?;
            let restriction = rep::restriction_multiplicities(table, &stab, &table_k, tol)?;
            let fiber = bundle.fiber_representation(s, tol)?;
            let fiber_mults = table_k.multiplicities(&fiber.character(), tol)?;
            Ok(OrbitConstraint {
                restriction,
                fiber_mults,
            })
        })
        .collect()
}

/// Whether `w` is a representation extension of the bundle: its restriction
/// to the stabilizer of each orbit representative must match the fiber
/// there. Stabilizers along an orbit are conjugate, so representatives
/// suffice.
pub fn is_extension(w: &Representation, bundle: &EquivariantBundle, tol: &Tol) -> Result<bool> {
    if !w.group.same_structure(&bundle.action.group) {
        return Err(Error::GroupMismatch);
    }
    let table = rep::character_table(&bundle.action.group)?;
    let mults = table.multiplicities(&w.character(), tol)?;
    is_extension_mults(&mults, bundle, &table, tol)
}

/// The same test on a bare multiplicity vector.
pub fn is_extension_mults(
    mults: &[usize],
    bundle: &EquivariantBundle,
    table: &CharacterTable,
    tol: &Tol,
) -> Result<bool> {
    let constraints = orbit_constraints(bundle, table, tol)?;
    Ok(constraints.iter().all(|c| c.admits(mults)))
}

/// All representation extensions of a constant-rank bundle, as multiplicity
/// vectors in ascending lexicographic order. The list may be empty.
pub fn enumerate_extensions(bundle: &EquivariantBundle, tol: &Tol) -> Result<Vec<ExtensionClass>> {
    let Some(rank) = bundle.constant_rank() else {
        return Err(Error::RankMismatch);
    };
    let table = rep::character_table(&bundle.action.group)?;
    let constraints = orbit_constraints(bundle, &table, tol)?;
    let mut found = Vec::new();
    let mut current = vec![0usize; table.dims.len()];
    search_extensions(&table.dims, rank, 0, &mut current, &constraints, &mut found);
    Ok(found)
}

fn search_extensions(
    dims: &[usize],
    remaining: usize,
    index: usize,
    current: &mut Vec<usize>,
    constraints: &[OrbitConstraint],
    found: &mut Vec<ExtensionClass>,
) {
    if index == dims.len() {
        if remaining == 0 && constraints.iter().all(|c| c.admits(current)) {
            found.push(ExtensionClass {
                mults: current.clone(),
            });
        }
        return;
    }
    let max_mult = remaining / dims[index];
    for n in 0..=max_mult {
        current[index] = n;
        search_extensions(
            dims,
            remaining - n * dims[index],
            index + 1,
            current,
            constraints,
            found,
        );
    }
    current[index] = 0;
}

/// An equivariant fiberwise isomorphism from the bundle onto `w`, built one
/// orbit at a time: an intertwiner at the orbit representative is spread to
/// the rest of the orbit through fixed coset representatives,
/// `p[x] = w(g_x) r A[g_x][s]^-1` for the minimal `g_x` with `g_x.s = x`.
/// The transport inverse is the transport of the inverse element, so no
/// matrix is inverted. Independence of the coset choice is verified through
/// the equivariance residual of the finished family.
pub fn build_fiberwise_iso(
    bundle: &EquivariantBundle,
    w: &Representation,
    seed: u64,
    tol: &Tol,
) -> Result<FiberwiseIso> {
    if !w.group.same_structure(&bundle.action.group) {
        return Err(Error::GroupMismatch);
    }
    let action = &bundle.action;
    let orbits = action.orbits();
    let mut maps: Vec<Option<CMat>> = vec![None; bundle.base_size()];
    for (oi, (&s, orbit)) in orbits
        .representatives
        .iter()
        .zip(&orbits.orbits)
        .enumerate()
    {
        let stab = action.stabilizer(s)?;
        let fiber = bundle.fiber_representation(s, tol)?;
        let res = w.restrict(&stab)?;
        let r = rep::random_intertwiner(&fiber, &res, rep::derive_seed(seed, oi as u64), tol)?;
        for &x in orbit {
            let gx = action
                .transporter(s, x)
                .expect("orbit points are reachable");
            let back = bundle.transport(action.group.inv(gx), x);
            maps[x] = Some(w.mat(gx) * &r * back);
        }
    }
    let p = FiberwiseIso {
        maps: maps.into_iter().map(|m| m.expect("orbits cover")).collect(),
    };
    let residual = p.equivariance_residual(bundle, w);
    if residual > tol.eps_mat {
        return Err(Error::Internal(format!(
            "orbitwise family failed equivariance (residual {residual:.3e})"
        )));
    }
    Ok(p)
}

/// A representative clutching map in the component of `w`.
pub fn representative_for_rep(
    bundle: &EquivariantBundle,
    w: &Representation,
    seed: u64,
    tol: &Tol,
) -> Result<PointwiseClutchingMap> {
    let p = build_fiberwise_iso(bundle, w, seed, tol)?;
    PointwiseClutchingMap::from_fiberwise_iso(bundle.clone(), w, &p, tol)
}

/// A representative clutching map in the component of an extension class.
pub fn component_representative(
    bundle: &EquivariantBundle,
    class: &ExtensionClass,
    seed: u64,
    tol: &Tol,
) -> Result<PointwiseClutchingMap> {
    let group = &bundle.action.group;
    let table = rep::character_table(group)?;
    if !is_extension_mults(&class.mults, bundle, &table, tol)? {
        return Err(Error::NotAnExtension);
    }
    let irreps = rep::irreducibles(group, &table)?;
    let w = class.realize(&irreps)?;
    representative_for_rep(bundle, &w, seed, tol)
}

/// The gluing map: the extension class of the glued representation at the
/// minimal basepoint.
pub fn gl(psi: &PointwiseClutchingMap, tol: &Tol) -> Result<ExtensionClass> {
    let glued = psi.glued_representation(0, tol)?;
    let table = rep::character_table(&psi.bundle.action.group)?;
    let mults = table.multiplicities(&glued.rep.character(), tol)?;
    Ok(ExtensionClass { mults })
}

/// The path components of the space of equivariant clutching maps: one
/// extension class each, paired with a constructed representative. The
/// bijection with extensions is what makes this list exhaustive.
pub fn pi0(
    bundle: &EquivariantBundle,
    seed: u64,
    tol: &Tol,
) -> Result<Vec<(ExtensionClass, PointwiseClutchingMap)>> {
    let classes = enumerate_extensions(bundle, tol)?;
    let group = &bundle.action.group;
    let table = rep::character_table(group)?;
    let irreps = rep::irreducibles(group, &table)?;
    classes
        .into_iter()
        .enumerate()
        .map(|(ci, class)| {
            let w = class.realize(&irreps)?;
            let psi = representative_for_rep(bundle, &w, rep::derive_seed(seed, ci as u64), tol)?;
            let glued = gl(&psi, tol)?;
            if glued != class {
                return Err(Error::Internal(format!(
                    "representative glued to {:?}, expected {:?}",
                    glued.mults, class.mults
                )));
            }
            Ok((class, psi))
        })
        .collect()
}

/// Two equivariant maps lie in the same path component exactly when they
/// glue to the same extension class.
pub fn same_component(
    psi1: &PointwiseClutchingMap,
    psi2: &PointwiseClutchingMap,
    tol: &Tol,
) -> Result<bool> {
    if psi1.bundle != psi2.bundle {
        return Err(Error::BundleMismatch);
    }
    Ok(gl(psi1, tol)? == gl(psi2, tol)?)
}

/// Stabilizer of an orbit representative, exposed for report output.
pub fn representative_stabilizer(bundle: &EquivariantBundle, s: usize) -> Result<Subgroup> {
    bundle.action.stabilizer(s)
}
