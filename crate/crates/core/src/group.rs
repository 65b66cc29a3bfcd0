//! Finite groups given by Cayley tables, their subgroups, and their actions
//! on finite base sets.
//!
//! Groups are fully tabulated: element `0` is the identity and
//! `table[g][h]` is the product `g*h`. At the orders this crate targets
//! (up to a few dozen) that makes every axiom a direct scan, and keeps
//! orbits, stabilizers and conjugacy classes trivially exact.

use crate::error::Error;
use crate::Result;

/// A finite group as a validated Cayley table with identity `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates and wraps a Cayley table. Checks that `0` is a two-sided
    /// identity, that every row and column is a permutation, and that the
    /// table is associative.
    pub fn new(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {g} has length {}, expected {n}",
                    row.len()
                )));
            }
            for &e in row {
                if e >= n {
                    return Err(Error::InvalidGroup(format!(
                        "entry {e} in row {g} out of range"
                    )));
                }
            }
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(Error::InvalidGroup(
                    "element 0 is not a two-sided identity".into(),
                ));
            }
        }
        for g in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for h in 0..n {
                seen_row[table[g][h]] = true;
                seen_col[table[h][g]] = true;
            }
            if seen_row.iter().any(|s| !s) || seen_col.iter().any(|s| !s) {
                return Err(Error::InvalidGroup(format!(
                    "row or column {g} is not a permutation"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverse = vec![0; n];
        for g in 0..n {
            inverse[g] = (0..n).find(|&h| table[g][h] == 0).unwrap();
        }
        Ok(FiniteGroup {
            name: name.into(),
            table,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|g| (0..n).all(|h| self.table[g][h] == self.table[h][g]))
    }

    /// Structural equality: same order and multiplication table. Names are
    /// labels and do not participate.
    pub fn same_structure(&self, other: &FiniteGroup) -> bool {
        self.table == other.table
    }

    /// Conjugacy classes as sorted element lists, ordered by their minimal
    /// element; the identity class `{0}` always comes first.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if assigned[g] {
                continue;
            }
            let mut class: Vec<usize> = (0..n)
                .map(|h| self.mul(self.mul(h, g), self.inv(h)))
                .collect();
            class.sort_unstable();
            class.dedup();
            for &e in &class {
                assigned[e] = true;
            }
            classes.push(class);
        }
        classes
    }
}

/// A subgroup of a parent group, stored as a sorted element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub parent: FiniteGroup,
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn new(parent: FiniteGroup, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(Error::InvalidGroup(
                "subgroup does not contain the identity".into(),
            ));
        }
        for &a in &elements {
            if a >= parent.order() {
                return Err(Error::InvalidGroup(format!("element {a} out of range")));
            }
            if elements.binary_search(&parent.inv(a)).is_err() {
                return Err(Error::InvalidGroup(format!(
                    "subgroup not closed under inversion at {a}"
                )));
            }
            for &b in &elements {
                if elements.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(Error::InvalidGroup(format!(
                        "subgroup not closed under product at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Subgroup { parent, elements })
    }

    /// Closure of a generating set.
    pub fn generated(parent: FiniteGroup, generators: &[usize]) -> Result<Self> {
        for &g in generators {
            if g >= parent.order() {
                return Err(Error::InvalidGroup(format!("generator {g} out of range")));
            }
        }
        let mut members = vec![false; parent.order()];
        members[0] = true;
        let mut stack = vec![0usize];
        while let Some(a) = stack.pop() {
            for &g in generators {
                for p in [parent.mul(a, g), parent.mul(g, a)] {
                    if !members[p] {
                        members[p] = true;
                        stack.push(p);
                    }
                }
            }
        }
        let elements = (0..parent.order()).filter(|&e| members[e]).collect();
        Ok(Subgroup { parent, elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_whole_group(&self) -> bool {
        self.order() == self.parent.order()
    }

    /// Local index of a parent element, if it belongs to the subgroup.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }

    /// The subgroup as a standalone group with its own Cayley table. The
    /// element list is sorted, so the identity lands at local index 0.
    pub fn as_group(&self) -> FiniteGroup {
        let k = self.order();
        let mut table = vec![vec![0; k]; k];
        for i in 0..k {
            for j in 0..k {
                let p = self.parent.mul(self.elements[i], self.elements[j]);
                table[i][j] = self.position(p).expect("subgroup closed");
            }
        }
        FiniteGroup::new(format!("{}<{}>", self.parent.name, k), table)
            .expect("subgroup table is a group")
    }
}

/// An action of a finite group on the base set `{0, .., base_size-1}`,
/// tabulated as `act[g][x] = g.x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    pub group: FiniteGroup,
    base_size: usize,
    act: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(group: FiniteGroup, base_size: usize, act: Vec<Vec<usize>>) -> Result<Self> {
        if base_size == 0 {
            return Err(Error::InvalidAction("base set is empty".into()));
        }
        let n = group.order();
        if act.len() != n {
            return Err(Error::InvalidAction(format!(
                "expected {n} rows, found {}",
                act.len()
            )));
        }
        for (g, row) in act.iter().enumerate() {
            if row.len() != base_size {
                return Err(Error::InvalidAction(format!(
                    "row {g} has length {}, expected {base_size}",
                    row.len()
                )));
            }
            let mut seen = vec![false; base_size];
            for &x in row {
                if x >= base_size {
                    return Err(Error::InvalidAction(format!(
                        "target {x} in row {g} out of range"
                    )));
                }
                seen[x] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::InvalidAction(format!(
                    "row {g} is not a permutation of the base set"
                )));
            }
        }
        for x in 0..base_size {
            if act[0][x] != x {
                return Err(Error::InvalidAction(
                    "identity does not act trivially".into(),
                ));
            }
        }
        for g in 0..n {
            for h in 0..n {
                for x in 0..base_size {
                    if act[group.mul(g, h)][x] != act[g][act[h][x]] {
                        return Err(Error::InvalidAction(format!(
                            "action law fails at (g={g}, h={h}, x={x})"
                        )));
                    }
                }
            }
        }
        Ok(GroupAction {
            group,
            base_size,
            act,
        })
    }

    /// The action in which every group element fixes every point.
    pub fn trivial(group: FiniteGroup, base_size: usize) -> Result<Self> {
        let act = vec![(0..base_size).collect(); group.order()];
        GroupAction::new(group, base_size, act)
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.act[g][x]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.act
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().orbits.len() == 1
    }

    /// Minimal group element carrying `from` to `to`, if any.
    pub fn transporter(&self, from: usize, to: usize) -> Option<usize> {
        self.group.elements().find(|&g| self.apply(g, from) == to)
    }

    /// Orbit partition. Orbits are sorted internally and listed by their
    /// minimal element, which also serves as the representative.
    pub fn orbits(&self) -> Orbits {
        let mut seen = vec![false; self.base_size];
        let mut orbits = Vec::new();
        let mut representatives = Vec::new();
        for x in 0..self.base_size {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.group.elements().map(|g| self.apply(g, x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            representatives.push(x);
            orbits.push(orbit);
        }
        Orbits {
            orbits,
            representatives,
        }
    }

    /// Stabilizer subgroup of a point.
    pub fn stabilizer(&self, x: usize) -> Result<Subgroup> {
        if x >= self.base_size {
            return Err(Error::PointOutOfRange {
                point: x,
                base_size: self.base_size,
            });
        }
        let elements = self
            .group
            .elements()
            .filter(|&g| self.apply(g, x) == x)
            .collect();
        Subgroup::new(self.group.clone(), elements)
    }

    /// Maximal subgroup mapping the subset `a` onto itself.
    pub fn preserving_subgroup(&self, a: &[usize]) -> Result<Subgroup> {
        if a.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut subset = a.to_vec();
        subset.sort_unstable();
        subset.dedup();
        for &x in &subset {
            if x >= self.base_size {
                return Err(Error::PointOutOfRange {
                    point: x,
                    base_size: self.base_size,
                });
            }
        }
        let preserves = |g: usize| {
            subset
                .iter()
                .all(|&x| subset.binary_search(&self.apply(g, x)).is_ok())
        };
        let elements = self.group.elements().filter(|&g| preserves(g)).collect();
        Subgroup::new(self.group.clone(), elements)
    }
}

/// Orbit partition of a base set together with one representative (the
/// minimal point) per orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbits {
    pub orbits: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
}

impl Orbits {
    /// Index of the orbit containing `x`.
    pub fn orbit_of(&self, x: usize) -> usize {
        self.orbits
            .iter()
            .position(|o| o.binary_search(&x).is_ok())
            .expect("orbits cover the base set")
    }
}

/// Catalog of built-in groups with their canonical actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinGroup {
    /// Z_m = <a>, rotating m points: a.x_i = x_{i+1}.
    Cyclic(usize),
    /// D_m of order 2m with a^m = id, b^2 = id, b a b^-1 = a^-1, acting on
    /// m points by a.x_i = x_{i+1}, b.x_i = x_{-i}.
    Dihedral(usize),
    /// The order-24 full isometry group of a regular tetrahedron, acting on
    /// the 12 vertex preimages in the disjoint union of the four faces
    /// (one point per incident vertex-face pair).
    Tetra,
}

impl BuiltinGroup {
    pub fn parse(spec: &str) -> Result<Self> {
        if spec == "tetra" {
            return Ok(BuiltinGroup::Tetra);
        }
        let bad = || Error::UnknownFixture(spec.to_string());
        let (kind, arg) = spec.split_once(':').ok_or_else(bad)?;
        let m: usize = arg.parse().map_err(|_| bad())?;
        if m < 1 {
            return Err(Error::InvalidGroup("order parameter must be >= 1".into()));
        }
        match kind {
            "cyclic" => Ok(BuiltinGroup::Cyclic(m)),
            "dihedral" => Ok(BuiltinGroup::Dihedral(m)),
            _ => Err(bad()),
        }
    }

    /// The group together with its canonical action.
    pub fn build(self) -> Result<(FiniteGroup, GroupAction)> {
        match self {
            BuiltinGroup::Cyclic(m) => {
                if m < 1 {
                    return Err(Error::InvalidGroup("cyclic order must be >= 1".into()));
                }
                let table = (0..m)
                    .map(|i| (0..m).map(|j| (i + j) % m).collect())
                    .collect();
                let group = FiniteGroup::new(format!("Z{m}"), table)?;
                let act = (0..m)
                    .map(|k| (0..m).map(|x| (x + k) % m).collect())
                    .collect();
                let action = GroupAction::new(group.clone(), m, act)?;
                Ok((group, action))
            }
            BuiltinGroup::Dihedral(m) => {
                if m < 1 {
                    return Err(Error::InvalidGroup("dihedral order must be >= 1".into()));
                }
                // indices 0..m are a^k, indices m..2m are b a^k
                let n = 2 * m;
                let mut table = vec![vec![0; n]; n];
                for i in 0..m {
                    for j in 0..m {
                        table[i][j] = (i + j) % m;
                        table[i][m + j] = m + (j + m - i) % m;
                        table[m + i][j] = m + (i + j) % m;
                        table[m + i][m + j] = (j + m - i) % m;
                    }
                }
                let group = FiniteGroup::new(format!("D{m}"), table)?;
                let mut act = vec![vec![0; m]; n];
                for k in 0..m {
                    for x in 0..m {
                        act[k][x] = (x + k) % m;
                        act[m + k][x] = (2 * m - x - k) % m;
                    }
                }
                let action = GroupAction::new(group.clone(), m, act)?;
                Ok((group, action))
            }
            BuiltinGroup::Tetra => {
                // all permutations of the four vertices, in lexicographic
                // order so the identity sits at index 0
                let perms = permutations4();
                let index_of = |p: &[usize; 4]| perms.iter().position(|q| q == p).unwrap();
                let mut table = vec![vec![0; 24]; 24];
                for (g, pg) in perms.iter().enumerate() {
                    for (h, ph) in perms.iter().enumerate() {
                        let comp = [pg[ph[0]], pg[ph[1]], pg[ph[2]], pg[ph[3]]];
                        table[g][h] = index_of(&comp);
                    }
                }
                let group = FiniteGroup::new("Tetra", table)?;
                // base points are ordered pairs (v, w), v != w: the preimage
                // of vertex v lying in the face opposite to vertex w
                let points = tetra_points();
                let point_index =
                    |v: usize, w: usize| points.iter().position(|&p| p == (v, w)).unwrap();
                let mut act = vec![vec![0; 12]; 24];
                for (g, pg) in perms.iter().enumerate() {
                    for (i, &(v, w)) in points.iter().enumerate() {
                        act[g][i] = point_index(pg[v], pg[w]);
                    }
                }
                let action = GroupAction::new(group.clone(), 12, act)?;
                Ok((group, action))
            }
        }
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut perms = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    for &e in &p {
                        seen[e] = true;
                    }
                    if seen.iter().all(|&s| s) {
                        perms.push(p);
                    }
                }
            }
        }
    }
    perms
}

/// Vertex-face incidence pairs of the tetrahedron, lexicographic.
pub fn tetra_points() -> Vec<(usize, usize)> {
    let mut points = Vec::with_capacity(12);
    for v in 0..4 {
        for w in 0..4 {
            if v != w {
                points.push((v, w));
            }
        }
    }
    points
}

/// The points lying over one vertex in the tetra action: base indices of
/// the pairs `(vertex, *)`.
pub fn tetra_vertex_fiber(vertex: usize) -> Vec<usize> {
    tetra_points()
        .iter()
        .enumerate()
        .filter(|(_, &(v, _))| v == vertex)
        .map(|(i, _)| i)
        .collect()
}
