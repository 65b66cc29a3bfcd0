//! Fundamental groups of the components of the space of equivariant
//! clutching maps.
//!
//! Over a transitive action the component of an extension `w` fibers over
//! the quotient of the stabilizer's isomorphism group by the diagonal copy
//! of the full isomorphism group. Both are products of complex general
//! linear groups, whose fundamental groups are free abelian with one
//! generator per factor, and the induced map on fundamental groups is the
//! integer matrix of restriction multiplicities. The fundamental group of
//! the component is its cokernel, computed exactly through Smith normal
//! form. Multiple orbits stack one block of rows per orbit representative.

use std::fmt;

use crate::bundle::EquivariantBundle;
use crate::error::Error;
use crate::extensions::{self, ExtensionClass};
use crate::group::Subgroup;
use crate::rep::{self, CharacterTable};
use crate::{Result, Tol};

/// Integer matrix of the map induced on fundamental groups by restricting
/// equivariant automorphisms to a subgroup. Rows are indexed by the
/// subgroup irreducibles occurring in the restriction, columns by the group
/// irreducibles occurring in the extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi1Matrix {
    pub entries: Vec<Vec<i64>>,
    /// subgroup character-table row of each matrix row
    pub row_irreps: Vec<usize>,
    /// group character-table row of each matrix column
    pub col_irreps: Vec<usize>,
}

/// A finitely generated abelian group in Smith normal form: free rank plus
/// a divisibility chain of torsion coefficients, each greater than one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        FgAbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Smith normal form `S = U M V` with unimodular `U`, `V` and a diagonal
/// divisibility chain on `S`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub s: Vec<Vec<i64>>,
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i64> {
        let r = self.s.len().min(self.s.first().map_or(0, Vec::len));
        (0..r).map(|t| self.s[t][t]).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&d| d != 0).count()
    }
}

fn checked_mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn checked_sub_mul(target: &mut [i128], source: &[i128], q: i128) -> Result<()> {
    for (t, &s) in target.iter_mut().zip(source) {
        *t = t.checked_sub(checked_mul(q, s)?).ok_or(Error::Overflow)?;
    }
    Ok(())
}

struct Reduction {
    rows: usize,
    cols: usize,
    b: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
}

impl Reduction {
    fn new(m: &[Vec<i64>]) -> Result<Self> {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        if m.iter().any(|r| r.len() != cols) {
            return Err(Error::Internal("ragged integer matrix".into()));
        }
        let ident = |n: usize| -> Vec<Vec<i128>> {
            (0..n)
                .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
                .collect()
        };
        Ok(Reduction {
            rows,
            cols,
            b: m.iter()
                .map(|r| r.iter().map(|&e| i128::from(e)).collect())
                .collect(),
            u: ident(rows),
            v: ident(cols),
        })
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.b.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.b {
            row.swap(i, j);
        }
        for row in &mut self.v {
            row.swap(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for e in &mut self.b[i] {
            *e = -*e;
        }
        for e in &mut self.u[i] {
            *e = -*e;
        }
    }

    /// row_i -= q * row_t
    fn row_op(&mut self, i: usize, t: usize, q: i128) -> Result<()> {
        let src = self.b[t].clone();
        checked_sub_mul(&mut self.b[i], &src, q)?;
        let src = self.u[t].clone();
        checked_sub_mul(&mut self.u[i], &src, q)
    }

    /// col_j -= q * col_t
    fn col_op(&mut self, j: usize, t: usize, q: i128) -> Result<()> {
        for row in &mut self.b {
            row[j] = row[j]
                .checked_sub(checked_mul(q, row[t])?)
                .ok_or(Error::Overflow)?;
        }
        for row in &mut self.v {
            row[j] = row[j]
                .checked_sub(checked_mul(q, row[t])?)
                .ok_or(Error::Overflow)?;
        }
        Ok(())
    }

    /// row_i += row_t (used to pull non-divisible entries into the pivot row)
    fn add_row(&mut self, i: usize, t: usize) -> Result<()> {
        self.row_op(i, t, -1)
    }

    fn smallest_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, i128)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let a = self.b[i][j].abs();
                if a != 0 && best.is_none_or(|(_, _, m)| a < m) {
                    best = Some((i, j, a));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(mut self) -> Result<Snf> {
        let steps = self.rows.min(self.cols);
        for t in 0..steps {
            loop {
                let Some((pi, pj)) = self.smallest_nonzero(t) else {
                    break;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                if self.b[t][t] < 0 {
                    self.negate_row(t);
                }
                let pivot = self.b[t][t];
                let mut clean = true;
                for i in t + 1..self.rows {
                    let q = self.b[i][t].div_euclid(pivot);
                    if q != 0 {
                        self.row_op(i, t, q)?;
                    }
                    if self.b[i][t] != 0 {
                        clean = false;
                    }
                }
                for j in t + 1..self.cols {
                    let q = self.b[t][j].div_euclid(pivot);
                    if q != 0 {
                        self.col_op(j, t, q)?;
                    }
                    if self.b[t][j] != 0 {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                // divisibility: pull any entry the pivot misses into row t
                let offender = (t + 1..self.rows)
                    .flat_map(|i| (t + 1..self.cols).map(move |j| (i, j)))
                    .find(|&(i, j)| self.b[i][j] % pivot != 0);
                match offender {
                    Some((i, _)) => {
                        self.add_row(t, i)?;
                    }
                    None => break,
                }
            }
        }
        let to_i64 = |m: Vec<Vec<i128>>| -> Result<Vec<Vec<i64>>> {
            m.into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|e| i64::try_from(e).map_err(|_| Error::Overflow))
                        .collect()
                })
                .collect()
        };
        Ok(Snf {
            s: to_i64(self.b)?,
            u: to_i64(self.u)?,
            v: to_i64(self.v)?,
        })
    }
}

/// Smith normal form by unimodular row and column reduction, in exact
/// integer arithmetic (128-bit internally, with overflow detection).
pub fn smith_normal_form(m: &[Vec<i64>]) -> Result<Snf> {
    Reduction::new(m)?.run()
}

/// Cokernel of the map `Z^cols -> Z^rows` given by an integer matrix: the
/// free rank is the row count minus the rank, the torsion is the set of
/// diagonal entries exceeding one.
pub fn cokernel(m: &[Vec<i64>]) -> Result<FgAbelianGroup> {
    let rows = m.len();
    if rows == 0 {
        return Ok(FgAbelianGroup::trivial());
    }
    let snf = smith_normal_form(m)?;
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|&&d| d != 0).count();
    let torsion = diag
        .iter()
        .filter(|&&d| d > 1)
        .map(|&d| d as u64)
        .collect();
    Ok(FgAbelianGroup {
        free_rank: rows - rank,
        torsion,
    })
}

/// The restriction-multiplicity matrix of an extension class at a
/// subgroup: columns are the occurring irreducibles of the group, rows the
/// irreducibles of the subgroup occurring in the restriction, and the entry
/// is the multiplicity of the row irreducible in the restriction of the
/// column irreducible.
pub fn pi1_restriction_matrix(
    class: &ExtensionClass,
    table_g: &CharacterTable,
    sub: &Subgroup,
    tol: &Tol,
) -> Result<Pi1Matrix> {
    let table_k = rep::character_table(&sub.as_group())?;
    let full = rep::restriction_multiplicities(table_g, sub, &table_k, tol)?;
    let col_irreps: Vec<usize> = class
        .mults
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(i, _)| i)
        .collect();
    let row_irreps: Vec<usize> = (0..table_k.dims.len())
        .filter(|&j| col_irreps.iter().any(|&i| full[j][i] > 0))
        .collect();
    let entries: Vec<Vec<i64>> = row_irreps
        .iter()
        .map(|&j| col_irreps.iter().map(|&i| full[j][i] as i64).collect())
        .collect();
    // each column resolves the dimension of its irreducible
    for (c, &i) in col_irreps.iter().enumerate() {
        let total: usize = row_irreps
            .iter()
            .zip(&entries)
            .map(|(&j, row)| row[c] as usize * table_k.dims[j])
            .sum();
        if total != table_g.dims[i] {
            return Err(Error::Internal(format!(
                "restriction of irreducible {i} lost dimension ({total} != {})",
                table_g.dims[i]
            )));
        }
    }
    Ok(Pi1Matrix {
        entries,
        row_irreps,
        col_irreps,
    })
}

/// Condition (I): every irreducible occurring in the class restricts
/// irreducibly to the subgroup, tested by the norm of the restricted
/// character.
pub fn condition_i(
    class: &ExtensionClass,
    table_g: &CharacterTable,
    sub: &Subgroup,
    tol: &Tol,
) -> Result<bool> {
    if !sub.parent.same_structure(&table_g.group) {
        return Err(Error::GroupMismatch);
    }
    let k = sub.order() as f64;
    for (i, &n) in class.mults.iter().enumerate() {
        if n == 0 {
            continue;
        }
        let norm: f64 = sub
            .elements()
            .iter()
            .map(|&g| table_g.value(i, g).norm_sqr())
            .sum::<f64>()
            / k;
        if (norm - 1.0).abs() > tol.eps_char {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Everything the fundamental-group computation produces: the stacked
/// matrix, whether Condition (I) holds at every orbit representative,
/// whether the action is transitive (the case treated directly by the
/// fibration argument; with several orbits the same argument applies to the
/// product over representatives), and the group itself.
#[derive(Debug, Clone)]
pub struct Pi1Analysis {
    pub group: FgAbelianGroup,
    pub matrix: Vec<Vec<i64>>,
    pub condition_i: bool,
    pub transitive: bool,
}

/// The fundamental group of the component of an extension class: the
/// cokernel of the restriction-multiplicity matrices of all orbit
/// representatives stacked vertically.
pub fn pi1_component(
    bundle: &EquivariantBundle,
    class: &ExtensionClass,
    tol: &Tol,
) -> Result<FgAbelianGroup> {
    Ok(pi1_analysis(bundle, class, tol)?.group)
}

pub fn pi1_analysis(
    bundle: &EquivariantBundle,
    class: &ExtensionClass,
    tol: &Tol,
) -> Result<Pi1Analysis> {
    let table = rep::character_table(&bundle.action.group)?;
    if !extensions::is_extension_mults(&class.mults, bundle, &table, tol)? {
        return Err(Error::NotAnExtension);
    }
    let orbits = bundle.action.orbits();
    let mut stacked: Vec<Vec<i64>> = Vec::new();
    let mut cond = true;
    for &s in &orbits.representatives {
        let stab = bundle.action.stabilizer(s)?;
        let block = pi1_restriction_matrix(class, &table, &stab, tol)?;
        stacked.extend(block.entries);
        cond &= condition_i(class, &table, &stab, tol)?;
    }
    let group = cokernel(&stacked)?;
    Ok(Pi1Analysis {
        group,
        matrix: stacked,
        condition_i: cond,
        transitive: orbits.representatives.len() == 1,
    })
}

/// Either a structural proof of simple connectivity (transitive action and
/// Condition (I), which makes the induced map surjective) or the computed
/// fundamental group. The certificate is cross-checked against the
/// cokernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pi1Certificate {
    CertifiedTrivial,
    Computed(FgAbelianGroup),
}

pub fn simply_connected_certificate(
    bundle: &EquivariantBundle,
    class: &ExtensionClass,
    tol: &Tol,
) -> Result<Pi1Certificate> {
    let analysis = pi1_analysis(bundle, class, tol)?;
    if analysis.transitive && analysis.condition_i {
        if !analysis.group.is_trivial() {
            return Err(Error::Internal(format!(
                "certificate claims trivial fundamental group but the cokernel is {}",
                analysis.group
            )));
        }
        return Ok(Pi1Certificate::CertifiedTrivial);
    }
    Ok(Pi1Certificate::Computed(analysis.group))
}
