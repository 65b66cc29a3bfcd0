//! JSON document formats and deterministic serialization.
//!
//! Every file format is a plain serde document. References to other
//! documents (`"group"`, `"action"`, `"bundle"`, `"rep"`) are either a
//! path string, resolved relative to the referencing file, or the inline
//! document. Complex numbers are `[re, im]` pairs and matrices are
//! row-major. Output goes through a canonical writer: sorted object keys
//! and floats at twelve significant digits, so identical inputs produce
//! byte-identical reports.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bundle::EquivariantBundle;
use crate::clutch::{FiberwiseIso, PointwiseClutchingMap};
use crate::cmatrix::{C64, CMat};
use crate::error::Error;
use crate::group::{FiniteGroup, GroupAction};
use crate::relations::{BinaryRelation, PartialClutchData};
use crate::rep::Representation;
use crate::{Result, Tol};

/// A reference to another document: a path or the document itself.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref<T> {
    Path(String),
    Inline(T),
}

pub type MatrixData = Vec<Vec<(f64, f64)>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDoc {
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionDoc {
    pub group: Ref<GroupDoc>,
    pub base_size: usize,
    pub act: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepDoc {
    pub group: Ref<GroupDoc>,
    pub dim: usize,
    pub mats: Vec<MatrixData>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleDoc {
    pub action: Ref<ActionDoc>,
    pub ranks: Vec<usize>,
    /// keyed by "g,x"
    pub transport: BTreeMap<String, MatrixData>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClutchDoc {
    pub bundle: Ref<BundleDoc>,
    /// keyed by "x,x'"
    pub psi: BTreeMap<String, MatrixData>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationDoc {
    pub base_size: usize,
    pub pairs: Vec<(usize, usize)>,
    /// present when the document carries partial clutching data, keyed by
    /// "x,x'"
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<BTreeMap<String, MatrixData>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FisoDoc {
    pub bundle: Ref<BundleDoc>,
    pub rep: Ref<RepDoc>,
    /// keyed by "x"
    pub maps: BTreeMap<String, MatrixData>,
}

pub fn matrix_to_data(m: &CMat) -> MatrixData {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| (m[(i, j)].re, m[(i, j)].im)).collect())
        .collect()
}

pub fn matrix_from_data(data: &MatrixData) -> Result<CMat> {
    let rows = data.len();
    let cols = data.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || data.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidBundle("empty or ragged matrix".into()));
    }
    Ok(CMat::from_fn(rows, cols, |i, j| {
        C64::new(data[i][j].0, data[i][j].1)
    }))
}

fn parse_pair_key(key: &str) -> Result<(usize, usize)> {
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidBundle(format!("bad index in key `{key}`")))
    };
    let (a, b) = key
        .split_once(',')
        .ok_or_else(|| Error::InvalidBundle(format!("key `{key}` is not of the form `a,b`")))?;
    Ok((parse(a)?, parse(b)?))
}

fn pair_key(a: usize, b: usize) -> String {
    format!("{a},{b}")
}

/// Document builders from the domain types. Nested references are always
/// written inline, so every emitted file is self-contained.
pub fn group_to_doc(group: &FiniteGroup) -> GroupDoc {
    GroupDoc {
        name: group.name.clone(),
        order: group.order(),
        table: group.table().to_vec(),
    }
}

pub fn action_to_doc(action: &GroupAction) -> ActionDoc {
    ActionDoc {
        group: Ref::Inline(group_to_doc(&action.group)),
        base_size: action.base_size(),
        act: action.rows().to_vec(),
    }
}

pub fn rep_to_doc(rep: &Representation) -> RepDoc {
    RepDoc {
        group: Ref::Inline(group_to_doc(&rep.group)),
        dim: rep.dim,
        mats: rep.mats.iter().map(matrix_to_data).collect(),
    }
}

pub fn bundle_to_doc(bundle: &EquivariantBundle) -> BundleDoc {
    let mut transport = BTreeMap::new();
    for g in bundle.action.group.elements() {
        for x in 0..bundle.base_size() {
            transport.insert(pair_key(g, x), matrix_to_data(bundle.transport(g, x)));
        }
    }
    BundleDoc {
        action: Ref::Inline(action_to_doc(&bundle.action)),
        ranks: bundle.ranks().to_vec(),
        transport,
    }
}

pub fn clutch_to_doc(psi: &PointwiseClutchingMap) -> ClutchDoc {
    let mut values = BTreeMap::new();
    for x in 0..psi.base_size() {
        for xp in 0..psi.base_size() {
            values.insert(pair_key(x, xp), matrix_to_data(psi.psi(x, xp)));
        }
    }
    ClutchDoc {
        bundle: Ref::Inline(bundle_to_doc(&psi.bundle)),
        psi: values,
    }
}

pub fn relation_to_doc(relation: &BinaryRelation) -> RelationDoc {
    RelationDoc {
        base_size: relation.base_size(),
        pairs: relation.pairs().collect(),
        values: None,
    }
}

pub fn partial_data_to_doc(data: &PartialClutchData) -> RelationDoc {
    RelationDoc {
        base_size: data.relation.base_size(),
        pairs: data.relation.pairs().collect(),
        values: Some(
            data.values
                .iter()
                .map(|(&(x, xp), m)| (pair_key(x, xp), matrix_to_data(m)))
                .collect(),
        ),
    }
}

/// Loader with per-path caching and referential integrity. Every document
/// reaches its domain type through the validating constructor, so a file
/// that parses but breaks a structural invariant is rejected here.
#[derive(Debug, Default)]
pub struct Workspace {
    pub tol: Tol,
    pub seed: u64,
    groups: BTreeMap<PathBuf, FiniteGroup>,
    actions: BTreeMap<PathBuf, GroupAction>,
    bundles: BTreeMap<PathBuf, EquivariantBundle>,
}

impl Workspace {
    pub fn new(tol: Tol, seed: u64) -> Result<Self> {
        if tol.eps_mat <= 0.0 || tol.eps_char <= 0.0 || tol.eps_sing <= 0.0 {
            return Err(Error::Internal("tolerances must be positive".into()));
        }
        Ok(Workspace {
            tol,
            seed,
            groups: BTreeMap::new(),
            actions: BTreeMap::new(),
            bundles: BTreeMap::new(),
        })
    }

    fn read_doc<T: serde::de::DeserializeOwned>(&self, path: &Path) -> Result<T> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    fn resolve(base: &Path, reference: &str) -> PathBuf {
        let p = Path::new(reference);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    }

    pub fn group_from_doc(&self, doc: &GroupDoc) -> Result<FiniteGroup> {
        if doc.table.len() != doc.order {
            return Err(Error::InvalidGroup(format!(
                "declared order {} does not match table size {}",
                doc.order,
                doc.table.len()
            )));
        }
        FiniteGroup::new(doc.name.clone(), doc.table.clone())
    }

    fn resolve_group(&mut self, reference: &Ref<GroupDoc>, base: &Path) -> Result<FiniteGroup> {
        match reference {
            Ref::Inline(doc) => self.group_from_doc(doc),
            Ref::Path(p) => self.load_group(&Self::resolve(base, p)),
        }
    }

    pub fn load_group(&mut self, path: &Path) -> Result<FiniteGroup> {
        let key = path.canonicalize()?;
        if let Some(g) = self.groups.get(&key) {
            return Ok(g.clone());
        }
        let doc: GroupDoc = self.read_doc(path)?;
        let group = self.group_from_doc(&doc)?;
        self.groups.insert(key, group.clone());
        Ok(group)
    }

    pub fn action_from_doc(&mut self, doc: &ActionDoc, base: &Path) -> Result<GroupAction> {
        let group = self.resolve_group(&doc.group, base)?;
        GroupAction::new(group, doc.base_size, doc.act.clone())
    }

    fn resolve_action(&mut self, reference: &Ref<ActionDoc>, base: &Path) -> Result<GroupAction> {
        match reference {
            Ref::Inline(doc) => self.action_from_doc(doc, base),
            Ref::Path(p) => self.load_action(&Self::resolve(base, p)),
        }
    }

    pub fn load_action(&mut self, path: &Path) -> Result<GroupAction> {
        let key = path.canonicalize()?;
        if let Some(a) = self.actions.get(&key) {
            return Ok(a.clone());
        }
        let doc: ActionDoc = self.read_doc(path)?;
        let action = self.action_from_doc(&doc, parent_dir(path))?;
        self.actions.insert(key, action.clone());
        Ok(action)
    }

    pub fn rep_from_doc(&mut self, doc: &RepDoc, base: &Path) -> Result<Representation> {
        let group = self.resolve_group(&doc.group, base)?;
        let mats = doc
            .mats
            .iter()
            .map(matrix_from_data)
            .collect::<Result<Vec<_>>>()?;
        if mats.iter().any(|m| m.nrows() != doc.dim || m.ncols() != doc.dim) {
            return Err(Error::InvalidRepresentation(
                "matrix shape disagrees with the declared dimension".into(),
            ));
        }
        Representation::new(group, mats, &self.tol)
    }

    fn resolve_rep(&mut self, reference: &Ref<RepDoc>, base: &Path) -> Result<Representation> {
        match reference {
            Ref::Inline(doc) => self.rep_from_doc(&doc.clone(), base),
            Ref::Path(p) => {
                let path = Self::resolve(base, p);
                let doc: RepDoc = self.read_doc(&path)?;
                self.rep_from_doc(&doc, parent_dir(&path))
            }
        }
    }

    pub fn bundle_from_doc(&mut self, doc: &BundleDoc, base: &Path) -> Result<EquivariantBundle> {
        let action = self.resolve_action(&doc.action, base)?;
        let n = action.group.order();
        let base_size = action.base_size();
        let mut transport = vec![vec![CMat::zeros(0, 0); base_size]; n];
        let mut seen = vec![vec![false; base_size]; n];
        for (key, data) in &doc.transport {
            let (g, x) = parse_pair_key(key)?;
            if g >= n || x >= base_size {
                return Err(Error::InvalidBundle(format!(
                    "transport key `{key}` out of range"
                )));
            }
            transport[g][x] = matrix_from_data(data)?;
            seen[g][x] = true;
        }
        if seen.iter().flatten().any(|&s| !s) {
            return Err(Error::InvalidBundle(
                "transport must cover every (element, point) pair".into(),
            ));
        }
        EquivariantBundle::new(action, doc.ranks.clone(), transport)
    }

    fn resolve_bundle(
        &mut self,
        reference: &Ref<BundleDoc>,
        base: &Path,
    ) -> Result<EquivariantBundle> {
        match reference {
            Ref::Inline(doc) => {
                let doc = doc.clone();
                self.bundle_from_doc(&doc, base)
            }
            Ref::Path(p) => self.load_bundle(&Self::resolve(base, p)),
        }
    }

    pub fn load_bundle(&mut self, path: &Path) -> Result<EquivariantBundle> {
        let key = path.canonicalize()?;
        if let Some(b) = self.bundles.get(&key) {
            return Ok(b.clone());
        }
        let doc: BundleDoc = self.read_doc(path)?;
        let bundle = self.bundle_from_doc(&doc, parent_dir(path))?;
        self.bundles.insert(key, bundle.clone());
        Ok(bundle)
    }

    pub fn clutch_from_doc(&mut self, doc: &ClutchDoc, base: &Path) -> Result<PointwiseClutchingMap> {
        let bundle = self.resolve_bundle(&doc.bundle, base)?;
        let n = bundle.base_size();
        let mut psi = vec![vec![CMat::zeros(0, 0); n]; n];
        let mut seen = vec![vec![false; n]; n];
        for (key, data) in &doc.psi {
            let (x, xp) = parse_pair_key(key)?;
            if x >= n || xp >= n {
                return Err(Error::InvalidClutch(format!("psi key `{key}` out of range")));
            }
            psi[x][xp] = matrix_from_data(data)?;
            seen[x][xp] = true;
        }
        if seen.iter().flatten().any(|&s| !s) {
            return Err(Error::InvalidClutch(
                "psi must cover every ordered pair".into(),
            ));
        }
        PointwiseClutchingMap::new(bundle, psi)
    }

    pub fn load_clutch(&mut self, path: &Path) -> Result<PointwiseClutchingMap> {
        let doc: ClutchDoc = self.read_doc(path)?;
        self.clutch_from_doc(&doc, parent_dir(path))
    }

    pub fn load_relation(&mut self, path: &Path) -> Result<BinaryRelation> {
        let doc: RelationDoc = self.read_doc(path)?;
        BinaryRelation::new(doc.base_size, doc.pairs.iter().copied())
    }

    pub fn load_partial_data(&mut self, path: &Path) -> Result<PartialClutchData> {
        let doc: RelationDoc = self.read_doc(path)?;
        let relation = BinaryRelation::new(doc.base_size, doc.pairs.iter().copied())?;
        let Some(values) = doc.values else {
            return Err(Error::InvalidClutch(
                "partial clutching data needs a `values` object".into(),
            ));
        };
        let mut parsed = BTreeMap::new();
        for (key, data) in &values {
            let pair = parse_pair_key(key)?;
            parsed.insert(pair, matrix_from_data(data)?);
        }
        PartialClutchData::new(relation, parsed)
    }

    pub fn load_fiso(
        &mut self,
        path: &Path,
    ) -> Result<(EquivariantBundle, Representation, FiberwiseIso)> {
        let doc: FisoDoc = self.read_doc(path)?;
        let base = parent_dir(path);
        let bundle = self.resolve_bundle(&doc.bundle, base)?;
        let rep = self.resolve_rep(&doc.rep, base)?;
        let n = bundle.base_size();
        let mut maps = vec![CMat::zeros(0, 0); n];
        let mut seen = vec![false; n];
        for (key, data) in &doc.maps {
            let x: usize = key
                .trim()
                .parse()
                .map_err(|_| Error::InvalidFiso(format!("bad point key `{key}`")))?;
            if x >= n {
                return Err(Error::InvalidFiso(format!("map key `{key}` out of range")));
            }
            maps[x] = matrix_from_data(data)?;
            seen[x] = true;
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidFiso("maps must cover every point".into()));
        }
        Ok((bundle, rep, FiberwiseIso { maps }))
    }
}

fn parent_dir(path: &Path) -> &Path {
    path.parent().unwrap_or_else(|| Path::new("."))
}

struct CanonicalFormatter;

impl serde_json::ser::Formatter for CanonicalFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        // twelve significant digits, negative zero normalized
        let v = if value == 0.0 { 0.0 } else { value };
        write!(writer, "{v:.11e}")
    }
}

/// Canonical JSON: sorted keys (through `serde_json::Value`) and fixed
/// float formatting, so equal inputs give byte-identical output.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let tree: Value = serde_json::to_value(value)?;
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, CanonicalFormatter);
    tree.serialize(&mut ser)?;
    let mut out = String::from_utf8(buf).expect("serde_json emits utf-8");
    out.push('\n');
    Ok(out)
}
