//! Python bindings: actions, bundles and clutching maps with the
//! operations on them, as thin wrappers over the core crate.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use clutchlab_core::bundle::EquivariantBundle;
use clutchlab_core::clutch::PointwiseClutchingMap;
use clutchlab_core::cmatrix::CMat;
use clutchlab_core::group::{BuiltinGroup, FiniteGroup, GroupAction};
use clutchlab_core::relations::{self, BinaryRelation, PartialClutchData};
use clutchlab_core::{extensions, fixtures, homotopy, rep, Tol};

fn err(e: clutchlab_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn tol() -> Tol {
    Tol::default()
}

fn mat_to_py(m: &CMat) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn mat_from_py(rows: &[Vec<Complex64>]) -> PyResult<CMat> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err(
            "matrix must be rectangular and nonempty",
        ));
    }
    Ok(CMat::from_fn(r, c, |i, j| rows[i][j]))
}

/// A finite group acting on a finite base set.
#[pyclass(frozen)]
struct Action {
    inner: GroupAction,
}

#[pymethods]
impl Action {
    /// Build from a Cayley table (identity at index 0) and an action table.
    #[new]
    fn new(name: String, table: Vec<Vec<usize>>, act: Vec<Vec<usize>>) -> PyResult<Self> {
        let group = FiniteGroup::new(name, table).map_err(err)?;
        let base = act.first().map_or(0, Vec::len);
        let inner = GroupAction::new(group, base, act).map_err(err)?;
        Ok(Action { inner })
    }

    /// The rotation action of the cyclic group of order m on m points.
    #[staticmethod]
    fn cyclic(m: usize) -> PyResult<Self> {
        let (_, action) = BuiltinGroup::Cyclic(m).build().map_err(err)?;
        Ok(Action { inner: action })
    }

    /// The dihedral group of order 2m on m points.
    #[staticmethod]
    fn dihedral(m: usize) -> PyResult<Self> {
        let (_, action) = BuiltinGroup::Dihedral(m).build().map_err(err)?;
        Ok(Action { inner: action })
    }

    /// The order-24 tetrahedral isometry group on the 12 vertex preimages.
    #[staticmethod]
    fn tetra() -> PyResult<Self> {
        let (_, action) = BuiltinGroup::Tetra.build().map_err(err)?;
        Ok(Action { inner: action })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.group.order()
    }

    #[getter]
    fn base_size(&self) -> usize {
        self.inner.base_size()
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.group.name.clone()
    }

    fn apply(&self, g: usize, x: usize) -> PyResult<usize> {
        if g >= self.inner.group.order() || x >= self.inner.base_size() {
            return Err(PyValueError::new_err("element or point out of range"));
        }
        Ok(self.inner.apply(g, x))
    }

    fn orbits(&self) -> Vec<Vec<usize>> {
        self.inner.orbits().orbits
    }

    fn stabilizer(&self, x: usize) -> PyResult<Vec<usize>> {
        Ok(self.inner.stabilizer(x).map_err(err)?.elements().to_vec())
    }

    fn preserving_subgroup(&self, points: Vec<usize>) -> PyResult<Vec<usize>> {
        Ok(self
            .inner
            .preserving_subgroup(&points)
            .map_err(err)?
            .elements()
            .to_vec())
    }

    #[getter]
    fn is_transitive(&self) -> bool {
        self.inner.is_transitive()
    }

    /// Degrees of the irreducible characters, in table order.
    fn irreducible_degrees(&self) -> PyResult<Vec<usize>> {
        Ok(rep::character_table(&self.inner.group).map_err(err)?.dims)
    }

    /// Smallest equivariant equivalence relation containing the pairs.
    fn closure(&self, pairs: Vec<(usize, usize)>) -> PyResult<Vec<(usize, usize)>> {
        let b = BinaryRelation::new(self.inner.base_size(), pairs).map_err(err)?;
        Ok(relations::equivariant_closure(&self.inner, &b)
            .pairs()
            .collect())
    }

    /// Whether evaluation on the pairs determines every equivariant map.
    fn determines(&self, pairs: Vec<(usize, usize)>) -> PyResult<bool> {
        let b = BinaryRelation::new(self.inner.base_size(), pairs).map_err(err)?;
        Ok(relations::determines_all(&self.inner, &b))
    }

    fn __repr__(&self) -> String {
        format!(
            "Action({}, order={}, base_size={})",
            self.inner.group.name,
            self.inner.group.order(),
            self.inner.base_size()
        )
    }
}

/// An equivariant complex vector bundle over the base set of an action.
#[pyclass(frozen)]
struct Bundle {
    inner: EquivariantBundle,
}

#[pymethods]
impl Bundle {
    /// Pullback bundle of a representation: every fiber is the
    /// representation space and every transport is the representing matrix.
    #[staticmethod]
    fn pullback(action: &Action, mats: Vec<Vec<Vec<Complex64>>>) -> PyResult<Self> {
        let parsed: Vec<CMat> = mats
            .iter()
            .map(|m| mat_from_py(m))
            .collect::<PyResult<_>>()?;
        let rep =
            clutchlab_core::rep::Representation::new(action.inner.group.clone(), parsed, &tol())
                .map_err(err)?;
        let inner = EquivariantBundle::pullback(&rep, action.inner.clone()).map_err(err)?;
        Ok(Bundle { inner })
    }

    /// One of the built-in fixtures: swap, s3-rotation, z4-two-point,
    /// tetra, tetra-vertex, d2-four, empty-ext.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        let inner = match name {
            "swap" => fixtures::swap_bundle(),
            "s3-rotation" => fixtures::s3_rotation_bundle(),
            "z4-two-point" => fixtures::z4_two_point_bundle(),
            "tetra" => fixtures::tetra_full_bundle(),
            "tetra-vertex" => fixtures::tetra_vertex_bundle(),
            "d2-four" => fixtures::d2_four_point_bundle(),
            "empty-ext" => fixtures::empty_ext_bundle(),
            other => {
                return Err(PyValueError::new_err(format!("unknown fixture `{other}`")))
            }
        };
        Ok(Bundle { inner })
    }

    #[getter]
    fn base_size(&self) -> usize {
        self.inner.base_size()
    }

    #[getter]
    fn ranks(&self) -> Vec<usize> {
        self.inner.ranks().to_vec()
    }

    fn action(&self) -> Action {
        Action {
            inner: self.inner.action.clone(),
        }
    }

    /// Violated invariants as (rule, location, residual) triples.
    fn validate(&self) -> Vec<(String, String, f64)> {
        self.inner
            .validate(&tol())
            .violations
            .into_iter()
            .map(|v| (v.rule, v.location, v.residual))
            .collect()
    }

    fn transport(&self, g: usize, x: usize) -> PyResult<Vec<Vec<Complex64>>> {
        if g >= self.inner.action.group.order() || x >= self.inner.base_size() {
            return Err(PyValueError::new_err("element or point out of range"));
        }
        Ok(mat_to_py(self.inner.transport(g, x)))
    }

    fn restrict(&self, points: Vec<usize>) -> PyResult<Bundle> {
        Ok(Bundle {
            inner: self.inner.restrict(&points).map_err(err)?,
        })
    }

    /// Multiplicity vectors of all representation extensions.
    fn extensions(&self) -> PyResult<Vec<Vec<usize>>> {
        Ok(extensions::enumerate_extensions(&self.inner, &tol())
            .map_err(err)?
            .into_iter()
            .map(|c| c.mults)
            .collect())
    }

    /// Path components of the space of equivariant clutching maps: the
    /// extension classes paired with representative maps.
    fn pi0(&self, seed: u64) -> PyResult<Vec<(Vec<usize>, ClutchMap)>> {
        Ok(extensions::pi0(&self.inner, seed, &tol())
            .map_err(err)?
            .into_iter()
            .map(|(c, psi)| (c.mults, ClutchMap { inner: psi }))
            .collect())
    }

    /// Fundamental group of the component of the extension with the given
    /// index: (free_rank, torsion, condition_i, certified_trivial).
    fn pi1(&self, extension_index: usize) -> PyResult<(usize, Vec<u64>, bool, bool)> {
        let classes = extensions::enumerate_extensions(&self.inner, &tol()).map_err(err)?;
        let class = classes
            .get(extension_index)
            .ok_or_else(|| PyValueError::new_err("extension index out of range"))?;
        let analysis = homotopy::pi1_analysis(&self.inner, class, &tol()).map_err(err)?;
        let certificate =
            homotopy::simply_connected_certificate(&self.inner, class, &tol()).map_err(err)?;
        Ok((
            analysis.group.free_rank,
            analysis.group.torsion,
            analysis.condition_i,
            certificate == homotopy::Pi1Certificate::CertifiedTrivial,
        ))
    }

    /// Rebuild a full clutching map from values on a determining relation.
    fn reconstruct(
        &self,
        values: std::collections::BTreeMap<(usize, usize), Vec<Vec<Complex64>>>,
    ) -> PyResult<ClutchMap> {
        let relation =
            BinaryRelation::new(self.inner.base_size(), values.keys().copied()).map_err(err)?;
        let parsed = values
            .iter()
            .map(|(&pair, m)| Ok((pair, mat_from_py(m)?)))
            .collect::<PyResult<_>>()?;
        let data = PartialClutchData::new(relation, parsed).map_err(err)?;
        Ok(ClutchMap {
            inner: relations::reconstruct(&self.inner, &data, &tol()).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Bundle(group={}, base_size={}, ranks={:?})",
            self.inner.action.group.name,
            self.inner.base_size(),
            self.inner.ranks()
        )
    }
}

/// A pointwise clutching map on a bundle.
#[pyclass(frozen)]
struct ClutchMap {
    inner: PointwiseClutchingMap,
}

#[pymethods]
impl ClutchMap {
    /// The value on an ordered pair of base points.
    fn psi(&self, x: usize, xp: usize) -> PyResult<Vec<Vec<Complex64>>> {
        if x >= self.inner.base_size() || xp >= self.inner.base_size() {
            return Err(PyValueError::new_err("point out of range"));
        }
        Ok(mat_to_py(self.inner.psi(x, xp)))
    }

    fn validate(&self) -> Vec<(String, String, f64)> {
        self.inner
            .validate(&tol())
            .violations
            .into_iter()
            .map(|v| (v.rule, v.location, v.residual))
            .collect()
    }

    #[getter]
    fn is_equivariant(&self) -> bool {
        self.inner.is_equivariant(&tol())
    }

    /// The map moved by a group element.
    fn act(&self, g: usize) -> PyResult<ClutchMap> {
        if g >= self.inner.bundle.action.group.order() {
            return Err(PyValueError::new_err("element out of range"));
        }
        Ok(ClutchMap {
            inner: self.inner.act(g),
        })
    }

    /// Character of the glued representation, one value per conjugacy
    /// class.
    fn glued_character(&self, basepoint: usize) -> PyResult<Vec<Complex64>> {
        let glued = self
            .inner
            .glued_representation(basepoint, &tol())
            .map_err(err)?;
        Ok(glued.rep.character().values)
    }

    /// Multiplicity vector of the glued representation: the extension class
    /// of the component this map lies in.
    fn gl(&self) -> PyResult<Vec<usize>> {
        Ok(extensions::gl(&self.inner, &tol()).map_err(err)?.mults)
    }

    fn same_component(&self, other: &ClutchMap) -> PyResult<bool> {
        extensions::same_component(&self.inner, &other.inner, &tol()).map_err(err)
    }

    /// Average the two glued representations into an intertwiner:
    /// (alpha, sigma_min, invertible).
    fn average(
        &self,
        other: &ClutchMap,
        basepoint: usize,
    ) -> PyResult<(Vec<Vec<Complex64>>, f64, bool)> {
        let avg = clutchlab_core::clutch::averaging(&self.inner, &other.inner, basepoint, &tol())
            .map_err(err)?;
        let invertible = avg.is_invertible(&tol());
        Ok((mat_to_py(&avg.alpha), avg.sigma_min, invertible))
    }

    /// Restriction to a subset of the base, over the preserving subgroup.
    fn restrict(&self, points: Vec<usize>) -> PyResult<ClutchMap> {
        Ok(ClutchMap {
            inner: relations::restrict_clutch(&self.inner, &points, &tol()).map_err(err)?,
        })
    }

    /// Values on a set of pairs, as a dict keyed by the pairs.
    fn evaluate(
        &self,
        pairs: Vec<(usize, usize)>,
    ) -> PyResult<std::collections::BTreeMap<(usize, usize), Vec<Vec<Complex64>>>> {
        let b = BinaryRelation::new(self.inner.base_size(), pairs).map_err(err)?;
        let data = relations::evaluate(&self.inner, &b).map_err(err)?;
        Ok(data
            .values
            .iter()
            .map(|(&pair, m)| (pair, mat_to_py(m)))
            .collect())
    }

    fn bundle(&self) -> Bundle {
        Bundle {
            inner: self.inner.bundle.clone(),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "ClutchMap(base_size={}, rank={}, equivariant={})",
            self.inner.base_size(),
            self.inner.rank(),
            self.inner.is_equivariant(&tol())
        )
    }
}

/// Equivariant pointwise clutching maps over finite sets.
#[pymodule]
fn clutchlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Action>()?;
    m.add_class::<Bundle>()?;
    m.add_class::<ClutchMap>()?;
    Ok(())
}
