//! Built-in fixtures used by the test suites and emitted by the
//! `clutchlab catalog` subcommand.

use crate::bundle::EquivariantBundle;
use crate::cmatrix::{C64, CMat};
use crate::group::{self, BuiltinGroup, FiniteGroup, GroupAction};
use crate::rep::{self, Representation};
use crate::Tol;

fn scalar(v: f64) -> CMat {
    CMat::from_element(1, 1, C64::new(v, 0.0))
}

/// Rank-one bundle with every transport equal to 1 over any action.
pub fn trivial_rank1_bundle(action: GroupAction) -> EquivariantBundle {
    let base = action.base_size();
    let transport = action
        .group
        .elements()
        .map(|_| vec![scalar(1.0); base])
        .collect();
    EquivariantBundle::new(action, vec![1; base], transport)
        .expect("all-ones transport satisfies the cocycle")
}

/// Z2 swapping two points, one-dimensional fibers, trivial transport.
pub fn swap_bundle() -> EquivariantBundle {
    let (_, swap) = BuiltinGroup::Cyclic(2).build().expect("cyclic(2) builds");
    trivial_rank1_bundle(swap)
}

/// The natural three-point action of the order-6 dihedral group with
/// one-dimensional trivial fibers.
pub fn s3_rotation_bundle() -> EquivariantBundle {
    let (_, action) = BuiltinGroup::Dihedral(3).build().expect("dihedral(3) builds");
    trivial_rank1_bundle(action)
}

/// Clutching map on the swap bundle with off-diagonal value `z`. Valid for
/// any nonzero `z`; equivariant exactly when `z = z^-1`.
pub fn swap_clutch(z: C64) -> crate::clutch::PointwiseClutchingMap {
    let bundle = swap_bundle();
    let psi = vec![
        vec![CMat::identity(1, 1), CMat::from_element(1, 1, z)],
        vec![CMat::from_element(1, 1, z.inv()), CMat::identity(1, 1)],
    ];
    crate::clutch::PointwiseClutchingMap::new(bundle, psi).expect("shapes are consistent")
}

/// Z4 acting on two points through its quotient of order two; the fiber at
/// each point restricts to the sign character of the stabilizer {0, 2}.
pub fn z4_two_point_bundle() -> EquivariantBundle {
    let (z4, _) = BuiltinGroup::Cyclic(4).build().expect("cyclic(4) builds");
    let act = (0..4).map(|k| vec![k % 2, (k + 1) % 2]).collect();
    let action = GroupAction::new(z4, 2, act).expect("quotient action is valid");
    // generator transport (1, -1); the cocycle determines the rest
    let transport = vec![
        vec![scalar(1.0), scalar(1.0)],
        vec![scalar(1.0), scalar(-1.0)],
        vec![scalar(-1.0), scalar(-1.0)],
        vec![scalar(-1.0), scalar(1.0)],
    ];
    EquivariantBundle::new(action, vec![1, 1], transport).expect("shapes are consistent")
}

/// Pullback of the two-dimensional irreducible of the tetra group over its
/// twelve-point action on vertex preimages.
pub fn tetra_full_bundle() -> EquivariantBundle {
    let (g, action) = BuiltinGroup::Tetra.build().expect("tetra builds");
    let table = rep::character_table(&g).expect("character table of the tetra group");
    let two_dim = table
        .dims
        .iter()
        .position(|&d| d == 2)
        .expect("the tetra group has a two-dimensional irreducible");
    let w = rep::irreducible(&g, &table, two_dim).expect("explicit irreducible");
    EquivariantBundle::pullback(&w, action).expect("pullback is valid")
}

/// The tetra bundle restricted to the three preimages of one vertex; the
/// carrying group is the order-6 vertex stabilizer.
pub fn tetra_vertex_bundle() -> EquivariantBundle {
    tetra_full_bundle()
        .restrict(&group::tetra_vertex_fiber(0))
        .expect("vertex fiber restriction")
}

/// Bundle with no representation extension: the trivial action of Z2 on two
/// points with the trivial character on one fiber and the sign character on
/// the other. Any one-dimensional extension would have to restrict to both.
pub fn empty_ext_bundle() -> EquivariantBundle {
    let (z2, _) = BuiltinGroup::Cyclic(2).build().expect("cyclic(2) builds");
    let action = GroupAction::trivial(z2, 2).expect("trivial action");
    let transport = vec![
        vec![scalar(1.0), scalar(1.0)],
        vec![scalar(1.0), scalar(-1.0)],
    ];
    EquivariantBundle::new(action, vec![1, 1], transport).expect("shapes are consistent")
}

/// D2 (order 4) acting on four points by a.x_i = x_{i+2}, b.x_i = x_{1-i}.
///
/// This is not the canonical rotation action of D2; it is the four-point
/// dihedral example in which a clutching map needs two evaluation pairs to
/// be determined.
pub fn d2_on_four_points() -> GroupAction {
    let (d2, _) = BuiltinGroup::Dihedral(2)
        .build()
        .expect("dihedral(2) builds");
    // element order: [id, a, b, ba]
    let mut act = vec![vec![0usize; 4]; 4];
    for x in 0..4usize {
        act[0][x] = x;
        act[1][x] = (x + 2) % 4;
        act[2][x] = (5 - x) % 4; // b: x -> 1 - x
        act[3][x] = (3 - x) % 4; // ba: x -> 1 - (x + 2) = -1 - x
    }
    GroupAction::new(d2, 4, act).expect("d2 four-point action is valid")
}

/// Rank-one bundle over [`d2_on_four_points`] with trivial transport.
pub fn d2_four_point_bundle() -> EquivariantBundle {
    trivial_rank1_bundle(d2_on_four_points())
}

/// The order-6 vertex group of the tetra action: the preserving subgroup of
/// one vertex fiber, as a standalone group acting on the three preimages.
pub fn tetra_vertex_group() -> (FiniteGroup, GroupAction) {
    let (_, action) = BuiltinGroup::Tetra.build().expect("tetra builds");
    let fiber = group::tetra_vertex_fiber(0);
    let sub = action
        .preserving_subgroup(&fiber)
        .expect("vertex fiber preserved by the vertex stabilizer");
    let local = sub.as_group();
    let act = sub
        .elements()
        .iter()
        .map(|&g| {
            fiber
                .iter()
                .map(|&x| fiber.iter().position(|&y| y == action.apply(g, x)).unwrap())
                .collect()
        })
        .collect();
    let local_action =
        GroupAction::new(local.clone(), fiber.len(), act).expect("restricted action is valid");
    (local, local_action)
}

/// Pullback of a block-diagonal representation with the given multiplicity
/// vector over the trivial action on `n` points.
pub fn trivial_action_pullback(
    spec: BuiltinGroup,
    mults: &[usize],
    n: usize,
) -> EquivariantBundle {
    let (g, _) = spec.build().expect("builtin group");
    let table = rep::character_table(&g).expect("character table");
    let irreps = rep::irreducibles(&g, &table).expect("irreducibles");
    let w = rep::rep_from_mult_vector(&irreps, mults).expect("block sum");
    let action = GroupAction::trivial(g, n).expect("trivial action");
    EquivariantBundle::pullback(&w, action).expect("pullback is valid")
}

/// The trivial one-dimensional representation of any group.
pub fn trivial_rep(group: &FiniteGroup) -> Representation {
    let mats = group.elements().map(|_| scalar(1.0)).collect();
    Representation::new(group.clone(), mats, &Tol::default()).expect("trivial representation")
}
