//! The binary-relation calculus for clutching maps: when partial data on a
//! set of ordered pairs determines a whole equivariant clutching map, how
//! to rebuild the map from that data, and how to restrict a map to a
//! subset of the base.
//!
//! A relation closed under reflexivity, symmetry, transitivity and the
//! group action is an equivariant equivalence relation; the smallest such
//! closure of an evaluation set decides determinacy. Reconstruction
//! propagates the given matrices along exactly those four rules and reports
//! any pair whose derivations disagree.

use std::collections::BTreeMap;

use crate::bundle::EquivariantBundle;
use crate::clutch::PointwiseClutchingMap;
use crate::cmatrix::{self, CMat};
use crate::error::Error;
use crate::group::GroupAction;
use crate::{Result, Tol};

/// A set of ordered pairs of base points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryRelation {
    base_size: usize,
    pairs: std::collections::BTreeSet<(usize, usize)>,
}

impl BinaryRelation {
    pub fn new(base_size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let pairs: std::collections::BTreeSet<_> = pairs.into_iter().collect();
        for &(x, xp) in &pairs {
            let bad = if x >= base_size { x } else { xp };
            if x >= base_size || xp >= base_size {
                return Err(Error::PointOutOfRange {
                    point: bad,
                    base_size,
                });
            }
        }
        Ok(BinaryRelation { base_size, pairs })
    }

    pub fn diagonal(base_size: usize) -> Self {
        BinaryRelation {
            base_size,
            pairs: (0..base_size).map(|x| (x, x)).collect(),
        }
    }

    pub fn full(base_size: usize) -> Self {
        BinaryRelation {
            base_size,
            pairs: (0..base_size)
                .flat_map(|x| (0..base_size).map(move |xp| (x, xp)))
                .collect(),
        }
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, pair: (usize, usize)) -> bool {
        self.pairs.contains(&pair)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.base_size * self.base_size
    }

    /// `{(x', x) : (x, x') in B}`
    pub fn inverse(&self) -> Self {
        BinaryRelation {
            base_size: self.base_size,
            pairs: self.pairs.iter().map(|&(x, xp)| (xp, x)).collect(),
        }
    }

    /// `{(x, x'') : exists x' with (x, x') in B and (x', x'') in other}`
    pub fn compose(&self, other: &BinaryRelation) -> Self {
        let mut pairs = std::collections::BTreeSet::new();
        for &(x, xp) in &self.pairs {
            for &(y, xpp) in &other.pairs {
                if y == xp {
                    pairs.insert((x, xpp));
                }
            }
        }
        BinaryRelation {
            base_size: self.base_size,
            pairs,
        }
    }

    /// `{(g.x, g.x') : g in G, (x, x') in B}`
    pub fn saturate(&self, action: &GroupAction) -> Self {
        let mut pairs = std::collections::BTreeSet::new();
        for g in action.group.elements() {
            for &(x, xp) in &self.pairs {
                pairs.insert((action.apply(g, x), action.apply(g, xp)));
            }
        }
        BinaryRelation {
            base_size: self.base_size,
            pairs,
        }
    }

    /// Whether the relation is an equivariant equivalence relation:
    /// reflexive, symmetric, transitive and closed under the action.
    pub fn is_equivariant_equivalence(&self, action: &GroupAction) -> bool {
        let diag = BinaryRelation::diagonal(self.base_size);
        diag.pairs.is_subset(&self.pairs)
            && self.inverse().pairs.is_subset(&self.pairs)
            && self.compose(self).pairs.is_subset(&self.pairs)
            && self.saturate(action).pairs.is_subset(&self.pairs)
    }
}

/// Free-function aliases for the three relation operations.
pub fn rel_inverse(b: &BinaryRelation) -> BinaryRelation {
    b.inverse()
}

pub fn rel_compose(bp: &BinaryRelation, b: &BinaryRelation) -> BinaryRelation {
    b.compose(bp)
}

pub fn rel_saturate(action: &GroupAction, b: &BinaryRelation) -> BinaryRelation {
    b.saturate(action)
}

/// The smallest equivariant equivalence relation containing `b`, computed
/// as a fixpoint of the four generation rules. It terminates because the
/// pair set is bounded by the square of the base size.
pub fn equivariant_closure(action: &GroupAction, b: &BinaryRelation) -> BinaryRelation {
    let mut closure = BinaryRelation::diagonal(b.base_size);
    closure.pairs.extend(b.pairs.iter().copied());
    loop {
        let mut next = closure.clone();
        next.pairs.extend(closure.inverse().pairs);
        next.pairs.extend(closure.compose(&closure).pairs);
        next.pairs.extend(closure.saturate(action).pairs);
        if next.pairs.len() == closure.pairs.len() {
            return closure;
        }
        closure = next;
    }
}

/// Whether evaluation on `b` pins down every equivariant clutching map:
/// true exactly when the closure is the full relation.
pub fn determines_all(action: &GroupAction, b: &BinaryRelation) -> bool {
    equivariant_closure(action, b).is_full()
}

/// The values of a clutching map on the pairs of a relation.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialClutchData {
    pub relation: BinaryRelation,
    pub values: BTreeMap<(usize, usize), CMat>,
}

impl PartialClutchData {
    pub fn new(
        relation: BinaryRelation,
        values: BTreeMap<(usize, usize), CMat>,
    ) -> Result<Self> {
        for pair in relation.pairs() {
            if !values.contains_key(&pair) {
                return Err(Error::InvalidClutch(format!(
                    "missing value at pair ({}, {})",
                    pair.0, pair.1
                )));
            }
        }
        if values.len() != relation.len() {
            return Err(Error::InvalidClutch(
                "values present for pairs outside the relation".into(),
            ));
        }
        Ok(PartialClutchData { relation, values })
    }
}

/// Restriction of a clutching map to the pairs of a relation.
pub fn evaluate(psi: &PointwiseClutchingMap, b: &BinaryRelation) -> Result<PartialClutchData> {
    if b.base_size() != psi.base_size() {
        return Err(Error::BundleMismatch);
    }
    let values = b
        .pairs()
        .map(|(x, xp)| ((x, xp), psi.psi(x, xp).clone()))
        .collect();
    PartialClutchData::new(b.clone(), values)
}

/// One derived value with a human-readable account of how it was obtained.
struct Derived {
    value: CMat,
    via: String,
}

/// Rebuilds the whole clutching map from values on a determining relation
/// by propagating reflexivity, inversion, composition and the group action
/// to a fixpoint. Every rule application either derives a new pair or
/// cross-checks an existing one; a disagreement beyond `tol.eps_mat`
/// surfaces as an inconsistency carrying both derivations.
pub fn reconstruct(
    bundle: &EquivariantBundle,
    data: &PartialClutchData,
    tol: &Tol,
) -> Result<PointwiseClutchingMap> {
    let action = &bundle.action;
    let base = bundle.base_size();
    if data.relation.base_size() != base {
        return Err(Error::BundleMismatch);
    }
    if bundle.constant_rank().is_none() {
        return Err(Error::RankMismatch);
    }
    if !determines_all(action, &data.relation) {
        return Err(Error::Insufficient {
            relation: data.relation.pairs().collect(),
        });
    }

    let mut known: BTreeMap<(usize, usize), Derived> = BTreeMap::new();
    let record = |known: &mut BTreeMap<(usize, usize), Derived>,
                      pair: (usize, usize),
                      value: CMat,
                      via: String|
     -> Result<bool> {
        match known.get(&pair) {
            Some(existing) => {
                let residual = cmatrix::rel_residual(&value, &existing.value);
                if residual > tol.eps_mat {
                    return Err(Error::Inconsistent {
                        pair,
                        detail: format!("{} conflicts with {}", via, existing.via),
                        residual,
                    });
                }
                Ok(false)
            }
            None => {
                known.insert(pair, Derived { value, via });
                Ok(true)
            }
        }
    };

    for x in 0..base {
        record(
            &mut known,
            (x, x),
            cmatrix::identity(bundle.rank_at(x)),
            "reflexivity".to_string(),
        )?;
    }
    for (&(x, xp), value) in &data.values {
        if value.nrows() != bundle.rank_at(xp) || value.ncols() != bundle.rank_at(x) {
            return Err(Error::InvalidClutch(format!(
                "value at ({x}, {xp}) has shape {}x{}, expected {}x{}",
                value.nrows(),
                value.ncols(),
                bundle.rank_at(xp),
                bundle.rank_at(x)
            )));
        }
        let smin = cmatrix::sigma_min(value);
        if smin <= tol.eps_sing {
            return Err(Error::Singular { sigma_min: smin });
        }
        record(&mut known, (x, xp), value.clone(), format!("given ({x}, {xp})"))?;
    }

    // saturate; every sweep revisits all rules, so the final sweep also
    // cross-checks every identity on the completed map
    loop {
        let mut grew = false;
        let snapshot: Vec<(usize, usize)> = known.keys().copied().collect();
        for &(x, xp) in &snapshot {
            let value = known[&(x, xp)].value.clone();
            let inv = cmatrix::inverse(&value, tol.eps_sing)?;
            grew |= record(
                &mut known,
                (xp, x),
                inv,
                format!("inverse of ({x}, {xp})"),
            )?;
            for &(y, xpp) in &snapshot {
                if y == xp {
                    let composed = &known[&(xp, xpp)].value * &known[&(x, xp)].value;
                    grew |= record(
                        &mut known,
                        (x, xpp),
                        composed,
                        format!("({x}, {xp}) then ({xp}, {xpp})"),
                    )?;
                }
            }
            for g in action.group.elements() {
                let gx = action.apply(g, x);
                let gxp = action.apply(g, xp);
                let moved =
                    bundle.transport(g, xp) * &value * bundle.transport(action.group.inv(g), gx);
                grew |= record(
                    &mut known,
                    (gx, gxp),
                    moved,
                    format!("element {g} applied to ({x}, {xp})"),
                )?;
            }
        }
        if !grew {
            break;
        }
    }

    let psi: Vec<Vec<CMat>> = (0..base)
        .map(|x| (0..base).map(|xp| known[&(x, xp)].value.clone()).collect())
        .collect();
    let result = PointwiseClutchingMap::new(bundle.clone(), psi)?;
    debug_assert!(result.validate(tol).is_valid());
    debug_assert!(result.is_equivariant(tol));
    Ok(result)
}

/// Restriction of an equivariant clutching map to a subset of the base:
/// the values on the subset's pairs, packaged over the restricted bundle
/// carried by the maximal preserving subgroup.
pub fn restrict_clutch(
    psi: &PointwiseClutchingMap,
    subset: &[usize],
    tol: &Tol,
) -> Result<PointwiseClutchingMap> {
    let residual = psi.equivariance_residual();
    if residual > tol.eps_mat {
        return Err(Error::NotEquivariant { residual });
    }
    let restricted_bundle = psi.bundle.restrict(subset)?;
    let mut points = subset.to_vec();
    points.sort_unstable();
    points.dedup();
    let values = points
        .iter()
        .map(|&x| {
            points
                .iter()
                .map(|&xp| psi.psi(x, xp).clone())
                .collect::<Vec<_>>()
        })
        .collect();
    let restricted = PointwiseClutchingMap::new(restricted_bundle, values)?;
    debug_assert!(restricted.validate(tol).is_valid());
    debug_assert!(restricted.is_equivariant(tol));
    Ok(restricted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::C64;
    use crate::fixtures;
    use crate::group::{BuiltinGroup, GroupAction};
    use crate::rep;

    fn tol() -> Tol {
        Tol::default()
    }

    fn rel(n: usize, pairs: &[(usize, usize)]) -> BinaryRelation {
        BinaryRelation::new(n, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn relation_operations() {
        assert_eq!(rel(2, &[(0, 1)]).inverse(), rel(2, &[(1, 0)]));
        assert_eq!(
            rel_compose(&rel(3, &[(1, 2)]), &rel(3, &[(0, 1)])),
            rel(3, &[(0, 2)])
        );
        let (_, z3) = BuiltinGroup::Cyclic(3).build().unwrap();
        assert_eq!(
            rel_saturate(&z3, &rel(3, &[(0, 1)])),
            rel(3, &[(0, 1), (1, 2), (2, 0)])
        );
        assert!(BinaryRelation::new(2, [(0, 2)]).is_err());
    }

    #[test]
    fn closure_of_the_diagonal_is_the_diagonal() {
        let (z2, _) = BuiltinGroup::Cyclic(2).build().unwrap();
        let trivial = GroupAction::trivial(z2, 3).unwrap();
        let closure = equivariant_closure(&trivial, &BinaryRelation::diagonal(3));
        assert_eq!(closure, BinaryRelation::diagonal(3));
        assert!(!determines_all(&trivial, &BinaryRelation::diagonal(3)));
    }

    #[test]
    fn closure_examples_from_the_rotation_actions() {
        // one pair saturates the three-point rotation orbit
        let (_, z3) = BuiltinGroup::Cyclic(3).build().unwrap();
        let closure = equivariant_closure(&z3, &rel(3, &[(0, 1)]));
        assert!(closure.is_full());
        assert_eq!(closure.len(), 9);
        assert!(determines_all(&z3, &rel(3, &[(0, 1)])));

        // the dihedral action needs the same single pair
        let (_, d4) = BuiltinGroup::Dihedral(4).build().unwrap();
        assert!(determines_all(&d4, &rel(4, &[(0, 1)])));

        // the four-point D2 action needs both evaluation pairs
        let action = fixtures::d2_on_four_points();
        assert!(!determines_all(&action, &rel(4, &[(0, 1)])));
        let closure = equivariant_closure(&action, &rel(4, &[(0, 1), (0, 3)]));
        assert_eq!(closure.len(), 16);
    }

    #[test]
    fn closure_is_minimal_and_closed() {
        let actions = [
            BuiltinGroup::Cyclic(3).build().unwrap().1,
            BuiltinGroup::Dihedral(2).build().unwrap().1,
            fixtures::d2_on_four_points(),
        ];
        let seeds: Vec<Vec<(usize, usize)>> = vec![vec![(0, 1)], vec![(1, 0)], vec![(0, 1), (0, 3)]];
        for action in &actions {
            for seed in &seeds {
                if seed.iter().any(|&(x, y)| {
                    x >= action.base_size() || y >= action.base_size()
                }) {
                    continue;
                }
                let b = rel(action.base_size(), seed);
                let closure = equivariant_closure(action, &b);
                assert!(closure.is_equivariant_equivalence(action));
                assert!(b.pairs().all(|p| closure.contains(p)));
                // minimality: dropping any off-diagonal pair breaks one of
                // the closure conditions or the containment of the seed
                for drop in closure.pairs() {
                    if drop.0 == drop.1 {
                        continue;
                    }
                    let mut smaller = closure.clone();
                    smaller.pairs.remove(&drop);
                    let still_closed = smaller.is_equivariant_equivalence(action)
                        && b.pairs().all(|p| smaller.contains(p));
                    assert!(!still_closed, "pair {drop:?} was removable");
                }
            }
        }
    }

    #[test]
    fn evaluation_projects_the_map() {
        let z = C64::new(0.0, 1.0);
        let psi = fixtures::swap_clutch(z);
        let diag = evaluate(&psi, &BinaryRelation::diagonal(2)).unwrap();
        for (_, v) in diag.values {
            assert!(cmatrix::is_identity(&v, 0.0));
        }
        let full = evaluate(&psi, &BinaryRelation::full(2)).unwrap();
        assert_eq!(full.values.len(), 4);
        let single = evaluate(&psi, &rel(2, &[(0, 1)])).unwrap();
        assert!((single.values[&(0, 1)][(0, 0)] - z).norm() < 1e-15);
    }

    #[test]
    fn reconstruct_a_constant_map() {
        let (d3, action) = BuiltinGroup::Dihedral(3).build().unwrap();
        let bundle =
            crate::bundle::EquivariantBundle::pullback(&fixtures::trivial_rep(&d3), action)
                .unwrap();
        let b = rel(3, &[(0, 1)]);
        let data = PartialClutchData::new(
            b,
            [((0usize, 1usize), cmatrix::identity(1))].into_iter().collect(),
        )
        .unwrap();
        let psi = reconstruct(&bundle, &data, &tol()).unwrap();
        for x in 0..3 {
            for xp in 0..3 {
                assert!(cmatrix::is_identity(psi.psi(x, xp), 1e-12));
            }
        }
    }

    #[test]
    fn reconstruct_propagates_roots_of_unity() {
        let (z3g, action) = BuiltinGroup::Cyclic(3).build().unwrap();
        let bundle =
            crate::bundle::EquivariantBundle::pullback(&fixtures::trivial_rep(&z3g), action)
                .unwrap();
        let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let data = PartialClutchData::new(
            rel(3, &[(0, 1)]),
            [((0usize, 1usize), CMat::from_element(1, 1, omega))]
                .into_iter()
                .collect(),
        )
        .unwrap();
        let psi = reconstruct(&bundle, &data, &tol()).unwrap();
        assert!((psi.psi(0, 2)[(0, 0)] - omega * omega).norm() < 1e-12);
        assert!(psi.is_equivariant(&tol()));

        // a value off the unit circle contradicts reflexivity around the
        // triangle
        let data = PartialClutchData::new(
            rel(3, &[(0, 1)]),
            [((0usize, 1usize), CMat::from_element(1, 1, C64::new(2.0, 0.0)))]
                .into_iter()
                .collect(),
        )
        .unwrap();
        let err = reconstruct(&bundle, &data, &tol()).unwrap_err();
        assert!(matches!(err, Error::Inconsistent { .. }));
    }

    #[test]
    fn reconstruct_requires_a_determining_relation() {
        let bundle = fixtures::d2_four_point_bundle();
        let data = PartialClutchData::new(
            rel(4, &[(0, 1)]),
            [((0usize, 1usize), cmatrix::identity(1))].into_iter().collect(),
        )
        .unwrap();
        assert!(matches!(
            reconstruct(&bundle, &data, &tol()),
            Err(Error::Insufficient { .. })
        ));
    }

    #[test]
    fn reconstruct_inverts_evaluation() {
        // determining relations of the worked examples, on bundles with
        // genuinely different transports
        let bundle = fixtures::tetra_vertex_bundle();
        let exts = crate::extensions::enumerate_extensions(&bundle, &tol()).unwrap();
        let psi = crate::extensions::component_representative(&bundle, &exts[1], 9, &tol()).unwrap();
        let b = rel(3, &[(0, 1)]);
        assert!(determines_all(&bundle.action, &b));
        let data = evaluate(&psi, &b).unwrap();
        let rebuilt = reconstruct(&bundle, &data, &tol()).unwrap();
        for x in 0..3 {
            for xp in 0..3 {
                assert!(cmatrix::approx_eq(rebuilt.psi(x, xp), psi.psi(x, xp), 1e-9));
            }
        }
        // and the other way: evaluating the reconstruction returns the data
        let again = evaluate(&rebuilt, &b).unwrap();
        for (pair, v) in &again.values {
            assert!(cmatrix::approx_eq(v, &data.values[pair], 1e-9));
        }
    }

    #[test]
    fn restriction_of_the_full_base_is_the_identity() {
        let psi = fixtures::swap_clutch(C64::new(-1.0, 0.0));
        let restricted = restrict_clutch(&psi, &[0, 1], &tol()).unwrap();
        for x in 0..2 {
            for xp in 0..2 {
                assert_eq!(restricted.psi(x, xp), psi.psi(x, xp));
            }
        }
    }

    #[test]
    fn restriction_character_identity_on_the_vertex_fixture() {
        let bundle = fixtures::tetra_vertex_bundle();
        let exts = crate::extensions::enumerate_extensions(&bundle, &tol()).unwrap();
        for (ci, ext) in exts.iter().enumerate() {
            let psi =
                crate::extensions::component_representative(&bundle, ext, ci as u64, &tol())
                    .unwrap();
            let restricted = restrict_clutch(&psi, &[0, 1], &tol()).unwrap();
            assert!(restricted.validate(&tol()).is_valid());
            assert!(restricted.is_equivariant(&tol()));

            // the glued representation restricted to the preserving
            // subgroup matches the glued restriction
            let glued = psi.glued_representation(0, &tol()).unwrap();
            let k = bundle.preserving_subgroup(&[0, 1]).unwrap();
            let res = glued.rep.restrict(&k).unwrap();
            let glued_small = restricted.glued_representation(0, &tol()).unwrap();
            assert!(rep::is_isomorphic(&res, &glued_small.rep, &tol()).unwrap());
        }
    }

    #[test]
    fn restriction_refuses_non_equivariant_maps() {
        let bad = fixtures::swap_clutch(C64::new(2.0, 0.0));
        assert!(matches!(
            restrict_clutch(&bad, &[0], &tol()),
            Err(Error::NotEquivariant { .. })
        ));
    }
}
