//! Complex representations of finite groups: characters, character tables,
//! isotypic multiplicities, restriction, and intertwiners.
//!
//! The character table is computed numerically. Multiplication by a class
//! sum is a self-adjoint-in-pairs family of operators on the center of the
//! group algebra; a seeded random combination that respects the
//! inverse-class pairing is Hermitian, and its eigenvectors simultaneously
//! diagonalize every class sum. Characters follow from the eigenvalues.
//! Explicit irreducible matrices come from the regular representation: the
//! isotypic projector of a character is an orthogonal projector, and the
//! eigenspaces of a random invariant Hermitian operator inside the isotypic
//! component are single irreducible copies.

use crate::cmatrix::{self, C64, CMat};
use crate::error::Error;
use crate::group::{FiniteGroup, Subgroup};
use crate::{Result, Tol};

/// Splitmix64 step, used to derive independent substream seeds.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E3779B97F4A7C15u64.wrapping_mul(salt.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// A complex matrix representation, one matrix per group element.
#[derive(Debug, Clone)]
pub struct Representation {
    pub group: FiniteGroup,
    pub dim: usize,
    pub mats: Vec<CMat>,
}

impl Representation {
    /// Validates the homomorphism property: identity at the identity,
    /// `mats[g*h] = mats[g] mats[h]` within `tol.eps_mat`, all invertible.
    pub fn new(group: FiniteGroup, mats: Vec<CMat>, tol: &Tol) -> Result<Self> {
        let n = group.order();
        if mats.len() != n {
            return Err(Error::InvalidRepresentation(format!(
                "expected {n} matrices, found {}",
                mats.len()
            )));
        }
        let dim = mats[0].nrows();
        for (g, m) in mats.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::InvalidRepresentation(format!(
                    "matrix {g} has shape {}x{}, expected {dim}x{dim}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if cmatrix::sigma_min(m) <= tol.eps_sing {
                return Err(Error::InvalidRepresentation(format!(
                    "matrix {g} is singular"
                )));
            }
        }
        if !cmatrix::is_identity(&mats[0], tol.eps_mat) {
            return Err(Error::InvalidRepresentation(
                "identity element is not the identity matrix".into(),
            ));
        }
        for g in 0..n {
            for h in 0..n {
                let prod = &mats[g] * &mats[h];
                if !cmatrix::approx_eq(&prod, &mats[group.mul(g, h)], tol.eps_mat) {
                    return Err(Error::InvalidRepresentation(format!(
                        "homomorphism fails at ({g}, {h})"
                    )));
                }
            }
        }
        Ok(Representation { group, dim, mats })
    }

    pub fn mat(&self, g: usize) -> &CMat {
        &self.mats[g]
    }

    /// Trace character, one value per conjugacy class representative.
    pub fn character(&self) -> Character {
        let values = self
            .group
            .conjugacy_classes()
            .iter()
            .map(|class| self.mats[class[0]].diagonal().sum())
            .collect();
        Character {
            group: self.group.clone(),
            values,
        }
    }

    /// The same matrices reindexed along a subgroup.
    pub fn restrict(&self, sub: &Subgroup) -> Result<Representation> {
        if !sub.parent.same_structure(&self.group) {
            return Err(Error::GroupMismatch);
        }
        let mats = sub.elements().iter().map(|&g| self.mats[g].clone()).collect();
        Ok(Representation {
            group: sub.as_group(),
            dim: self.dim,
            mats,
        })
    }

    /// Direct sum with another representation over the same group.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        if !self.group.same_structure(&other.group) {
            return Err(Error::GroupMismatch);
        }
        let dim = self.dim + other.dim;
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| {
                let mut m = cmatrix::zeros(dim, dim);
                m.view_mut((0, 0), (self.dim, self.dim)).copy_from(a);
                m.view_mut((self.dim, self.dim), (other.dim, other.dim))
                    .copy_from(b);
                m
            })
            .collect();
        Ok(Representation {
            group: self.group.clone(),
            dim,
            mats,
        })
    }
}

/// Restriction of a representation to a subgroup; free-function alias for
/// [`Representation::restrict`].
pub fn restrict_rep(w: &Representation, sub: &Subgroup) -> Result<Representation> {
    w.restrict(sub)
}

/// A class function: one complex value per conjugacy class.
#[derive(Debug, Clone)]
pub struct Character {
    pub group: FiniteGroup,
    pub values: Vec<C64>,
}

impl Character {
    pub fn dim(&self) -> f64 {
        self.values[0].re
    }

    /// Class-weighted inner product `(1/|G|) sum |C_j| a_j conj(b_j)`.
    pub fn inner(&self, other: &Character) -> C64 {
        let classes = self.group.conjugacy_classes();
        let mut acc = C64::new(0.0, 0.0);
        for (j, class) in classes.iter().enumerate() {
            acc += C64::new(class.len() as f64, 0.0) * self.values[j] * other.values[j].conj();
        }
        acc / C64::new(self.group.order() as f64, 0.0)
    }

    pub fn approx_eq(&self, other: &Character, eps_char: f64) -> bool {
        self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| (a - b).norm() <= eps_char)
    }
}

pub fn character_of(rep: &Representation) -> Character {
    rep.character()
}

/// Character equality test; valid as an isomorphism test over the complex
/// numbers.
pub fn is_isomorphic(v: &Representation, w: &Representation, tol: &Tol) -> Result<bool> {
    if !v.group.same_structure(&w.group) {
        return Err(Error::GroupMismatch);
    }
    Ok(v.character().approx_eq(&w.character(), tol.eps_char))
}

/// The table of irreducible characters of a finite group.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub group: FiniteGroup,
    pub classes: Vec<Vec<usize>>,
    /// class index of every group element
    pub class_of: Vec<usize>,
    /// irreducible characters, in canonical row order
    pub rows: Vec<Vec<C64>>,
    pub dims: Vec<usize>,
}

impl CharacterTable {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Value of irreducible `i` at a group element.
    pub fn value(&self, i: usize, g: usize) -> C64 {
        self.rows[i][self.class_of[g]]
    }

    pub fn row_character(&self, i: usize) -> Character {
        Character {
            group: self.group.clone(),
            values: self.rows[i].clone(),
        }
    }

    /// Multiplicity of each irreducible in a character, rounded from the
    /// inner products and rejected if any is negative or non-integral.
    pub fn multiplicities(&self, chi: &Character, tol: &Tol) -> Result<Vec<usize>> {
        if !chi.group.same_structure(&self.group) {
            return Err(Error::GroupMismatch);
        }
        let mut mults = Vec::with_capacity(self.rows.len());
        for i in 0..self.rows.len() {
            let ip = chi.inner(&self.row_character(i));
            let rounded = ip.re.round();
            if ip.im.abs() > tol.eps_char || (ip.re - rounded).abs() > tol.eps_char || rounded < 0.0
            {
                return Err(Error::NonIntegralMultiplicity {
                    value: format!("{:.6}+{:.6}i", ip.re, ip.im),
                });
            }
            mults.push(rounded as usize);
        }
        Ok(mults)
    }
}

/// Commutant shape of a representation: the multiset of multiplicities of
/// the distinct irreducibles it contains. The equivariant automorphism
/// group is the product of general linear groups of these sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutantShape {
    /// indices of the occurring irreducibles, in table order
    pub irreps: Vec<usize>,
    /// their positive multiplicities
    pub mults: Vec<usize>,
}

impl CommutantShape {
    pub fn from_mult_vector(mults: &[usize]) -> Self {
        let mut irreps = Vec::new();
        let mut occurring = Vec::new();
        for (i, &l) in mults.iter().enumerate() {
            if l > 0 {
                irreps.push(i);
                occurring.push(l);
            }
        }
        CommutantShape {
            irreps,
            mults: occurring,
        }
    }

    /// Number of distinct irreducible constituents.
    pub fn num_factors(&self) -> usize {
        self.irreps.len()
    }

    pub fn dim(&self, table: &CharacterTable) -> usize {
        self.irreps
            .iter()
            .zip(&self.mults)
            .map(|(&i, &l)| l * table.dims[i])
            .sum()
    }
}

/// Isotypic multiplicities of `chi` as a commutant shape.
pub fn multiplicities(chi: &Character, table: &CharacterTable, tol: &Tol) -> Result<CommutantShape> {
    let mults = table.multiplicities(chi, tol)?;
    Ok(CommutantShape::from_mult_vector(&mults))
}

const TABLE_ATTEMPTS: usize = 10;
const TABLE_SEED: u64 = 0xC1A55;

/// Computes the character table by diagonalizing a seeded random Hermitian
/// combination of the class-sum operators. Deterministic: the seed is fixed
/// and rows are canonically ordered (degree ascending, then lexicographic
/// on quantized values, descending, so the trivial character leads).
pub fn character_table(group: &FiniteGroup) -> Result<CharacterTable> {
    let classes = group.conjugacy_classes();
    let k = classes.len();
    let n = group.order();
    let mut class_of = vec![0usize; n];
    for (j, class) in classes.iter().enumerate() {
        for &g in class {
            class_of[g] = j;
        }
    }
    // class of the inverses of class j
    let inv_class: Vec<usize> = (0..k).map(|j| class_of[group.inv(classes[j][0])]).collect();

    // class algebra constants: c_j * c_s = sum_t a[j][s][t] c_t, computed as
    // a[j][s][t] = #{ x in C_j : x^-1 z_t in C_s } for the fixed rep z_t
    let mut coeff = vec![vec![vec![0u64; k]; k]; k];
    for j in 0..k {
        for (t, class_t) in classes.iter().enumerate() {
            let z = class_t[0];
            for &x in &classes[j] {
                let s = class_of[group.mul(group.inv(x), z)];
                coeff[j][s][t] += 1;
            }
        }
    }

    // class-sum operators in the orthonormal basis c_s / sqrt(|C_s|)
    let sqrt_sizes: Vec<f64> = classes.iter().map(|c| (c.len() as f64).sqrt()).collect();
    let ops: Vec<CMat> = (0..k)
        .map(|j| {
            CMat::from_fn(k, k, |t, s| {
                C64::new(
                    coeff[j][s][t] as f64 * sqrt_sizes[t] / sqrt_sizes[s],
                    0.0,
                )
            })
        })
        .collect();

    for attempt in 0..TABLE_ATTEMPTS {
        let seed = derive_seed(TABLE_SEED, attempt as u64);
        let weights = paired_weights(&inv_class, seed);
        let mut h = cmatrix::zeros(k, k);
        for j in 0..k {
            h += &ops[j] * weights[j];
        }
        // the pairing makes this Hermitian up to rounding
        h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
        let (_, vecs) = cmatrix::hermitian_eigen(&h);

        if let Some(table) = table_from_eigenvectors(group, &classes, &class_of, &ops, &vecs) {
            return Ok(table);
        }
    }
    Err(Error::CharacterTableDegenerate {
        attempts: TABLE_ATTEMPTS,
    })
}

/// Random weights with `w[inv_class[j]] = conj(w[j])`, so the weighted sum
/// of class-sum operators is self-adjoint.
fn paired_weights(inv_class: &[usize], seed: u64) -> Vec<C64> {
    let k = inv_class.len();
    let r = cmatrix::random_matrix(k, 2, seed);
    let mut weights = vec![C64::new(0.0, 0.0); k];
    for j in 0..k {
        let jstar = inv_class[j];
        if jstar == j {
            weights[j] = C64::new(r[(j, 0)].re, 0.0);
        } else if j < jstar {
            weights[j] = r[(j, 0)];
            weights[jstar] = r[(j, 0)].conj();
        }
    }
    weights
}

fn table_from_eigenvectors(
    group: &FiniteGroup,
    classes: &[Vec<usize>],
    class_of: &[usize],
    ops: &[CMat],
    vecs: &CMat,
) -> Option<CharacterTable> {
    let k = classes.len();
    let n = group.order() as f64;
    let mut rows: Vec<Vec<C64>> = Vec::with_capacity(k);
    let mut dims: Vec<usize> = Vec::with_capacity(k);
    for i in 0..k {
        let u = vecs.column(i).into_owned();
        // eigenvalue of class sum j on this common eigenvector
        let omegas: Vec<C64> = (0..k).map(|j| u.dotc(&(&ops[j] * &u))).collect();
        let inv_sq: f64 = omegas
            .iter()
            .enumerate()
            .map(|(j, w)| w.norm_sqr() / classes[j].len() as f64)
            .sum();
        let d = (n / inv_sq).sqrt();
        let rounded = d.round();
        if rounded < 1.0 || (d - rounded).abs() > 1e-6 {
            return None;
        }
        dims.push(rounded as usize);
        let row: Vec<C64> = (0..k)
            .map(|j| omegas[j] * rounded / classes[j].len() as f64)
            .collect();
        rows.push(row);
    }
    if dims.iter().map(|d| d * d).sum::<usize>() != group.order() {
        return None;
    }
    // orthonormality of the recovered rows
    for a in 0..k {
        for b in 0..k {
            let mut ip = C64::new(0.0, 0.0);
            for j in 0..k {
                ip += C64::new(classes[j].len() as f64, 0.0) * rows[a][j] * rows[b][j].conj();
            }
            ip /= C64::new(n, 0.0);
            let target = if a == b { 1.0 } else { 0.0 };
            if (ip - C64::new(target, 0.0)).norm() > 1e-6 {
                return None;
            }
        }
    }
    // canonical order: degree ascending, then quantized values descending
    let mut order: Vec<usize> = (0..k).collect();
    let key = |i: usize| -> (usize, Vec<(i64, i64)>) {
        (
            dims[i],
            rows[i]
                .iter()
                .map(|v| (-(v.re * 1e6).round() as i64, -(v.im * 1e6).round() as i64))
                .collect(),
        )
    };
    order.sort_by_key(|&i| key(i));
    let rows = order.iter().map(|&i| rows[i].clone()).collect();
    let dims = order.iter().map(|&i| dims[i]).collect();
    Some(CharacterTable {
        group: group.clone(),
        classes: classes.to_vec(),
        class_of: class_of.to_vec(),
        rows,
        dims,
    })
}

/// Integer matrix of restriction multiplicities: entry `[j][i]` is the
/// multiplicity of the `j`-th irreducible of the subgroup in the
/// restriction of the `i`-th irreducible of the parent group.
pub fn restriction_multiplicities(
    table_g: &CharacterTable,
    sub: &Subgroup,
    table_k: &CharacterTable,
    tol: &Tol,
) -> Result<Vec<Vec<usize>>> {
    if !sub.parent.same_structure(&table_g.group) {
        return Err(Error::GroupMismatch);
    }
    let restricted: Vec<Character> = (0..table_g.rows.len())
        .map(|i| restrict_character(table_g, i, sub, table_k))
        .collect();
    let mut matrix = vec![vec![0usize; table_g.rows.len()]; table_k.rows.len()];
    for (i, chi) in restricted.iter().enumerate() {
        let mults = table_k.multiplicities(chi, tol)?;
        for (j, &m) in mults.iter().enumerate() {
            matrix[j][i] = m;
        }
    }
    Ok(matrix)
}

/// The character of `res_K U_i` as a class function on the subgroup.
pub fn restrict_character(
    table_g: &CharacterTable,
    i: usize,
    sub: &Subgroup,
    table_k: &CharacterTable,
) -> Character {
    let values = table_k
        .classes
        .iter()
        .map(|class| table_g.value(i, sub.elements()[class[0]]))
        .collect();
    Character {
        group: table_k.group.clone(),
        values,
    }
}

const INTERTWINER_ATTEMPTS: usize = 10;

/// A seeded invertible intertwiner `T` with `T v(g) = w(g) T`, built by
/// averaging a random matrix over the group and retried until the smallest
/// singular value clears `tol.eps_sing`.
pub fn random_intertwiner(
    v: &Representation,
    w: &Representation,
    seed: u64,
    tol: &Tol,
) -> Result<CMat> {
    if !v.group.same_structure(&w.group) {
        return Err(Error::GroupMismatch);
    }
    if v.dim != w.dim || !v.character().approx_eq(&w.character(), tol.eps_char) {
        return Err(Error::NonIsomorphic);
    }
    let n = v.group.order();
    let scale = C64::new(1.0 / n as f64, 0.0);
    for attempt in 0..INTERTWINER_ATTEMPTS {
        let r = cmatrix::random_matrix(w.dim, v.dim, derive_seed(seed, attempt as u64));
        let mut t = cmatrix::zeros(w.dim, v.dim);
        for g in 0..n {
            t += w.mat(g) * &r * v.mat(v.group.inv(g));
        }
        t *= scale;
        if cmatrix::sigma_min(&t) > tol.eps_sing {
            return Ok(t);
        }
    }
    Err(Error::IntertwinerRetries {
        attempts: INTERTWINER_ATTEMPTS,
    })
}

const IRREP_ATTEMPTS: usize = 8;
const IRREP_SEED: u64 = 0x1BBE5;

/// Explicit unitary irreducible representations, one per character-table
/// row, cut out of the regular representation.
pub fn irreducibles(group: &FiniteGroup, table: &CharacterTable) -> Result<Vec<Representation>> {
    (0..table.rows.len())
        .map(|i| irreducible(group, table, i))
        .collect()
}

/// The explicit irreducible matching one character-table row.
pub fn irreducible(group: &FiniteGroup, table: &CharacterTable, i: usize) -> Result<Representation> {
    let d = table.dims[i];
    if d == 1 {
        let mats = (0..group.order())
            .map(|g| CMat::from_element(1, 1, table.value(i, g)))
            .collect();
        return Representation::new(group.clone(), mats, &Tol::default());
    }
    irreducible_from_regular(group, table, i).ok_or(Error::CharacterTableDegenerate {
        attempts: IRREP_ATTEMPTS,
    })
}

fn irreducible_from_regular(
    group: &FiniteGroup,
    table: &CharacterTable,
    i: usize,
) -> Option<Representation> {
    let n = group.order();
    let d = table.dims[i];
    // isotypic projector in the regular representation:
    // P[a][b] = (d/n) conj(chi(a b^-1)); Hermitian and idempotent
    let p = CMat::from_fn(n, n, |a, b| {
        table.value(i, group.mul(a, group.inv(b))).conj() * (d as f64 / n as f64)
    });
    let (vals, vecs) = cmatrix::hermitian_eigen(&p);
    let keep: Vec<usize> = (0..n).filter(|&j| vals[j] > 0.5).collect();
    if keep.len() != d * d {
        return None;
    }
    let basis = CMat::from_fn(n, keep.len(), |r, c| vecs[(r, keep[c])]);

    for attempt in 0..IRREP_ATTEMPTS {
        let seed = derive_seed(IRREP_SEED, (i as u64) << 8 | attempt as u64);
        let h = cmatrix::random_hermitian(n, seed);
        // average of R(g) H R(g)^-1: entry (a, b) averages H[g^-1 a][g^-1 b]
        let mut z = cmatrix::zeros(n, n);
        for g in 0..n {
            let gi = group.inv(g);
            for a in 0..n {
                for b in 0..n {
                    z[(a, b)] += h[(group.mul(gi, a), group.mul(gi, b))];
                }
            }
        }
        z /= C64::new(n as f64, 0.0);
        let zw = basis.adjoint() * &z * &basis;
        let (zvals, zvecs) = cmatrix::hermitian_eigen(&zw);
        // expect d clusters of size d; take the lowest
        let spread = zvals[d - 1] - zvals[0];
        let gap = if d * d > d { zvals[d] - zvals[d - 1] } else { 1.0 };
        if spread > 1e-7 || gap < 1e-4 {
            continue;
        }
        let copy = &basis * zvecs.columns(0, d);
        // matrices of left translation in the orthonormal basis of the copy:
        // (R(g) C)[a][j] = C[g^-1 a][j]
        let mats: Vec<CMat> = (0..n)
            .map(|g| {
                let gi = group.inv(g);
                let moved = CMat::from_fn(n, d, |a, j| copy[(group.mul(gi, a), j)]);
                copy.adjoint() * moved
            })
            .collect();
        let tol = Tol::default();
        if let Ok(rep) = Representation::new(group.clone(), mats, &tol) {
            if rep
                .character()
                .approx_eq(&table.row_character(i), tol.eps_char)
            {
                return Some(rep);
            }
        }
    }
    None
}

/// Assembles a representation with the given multiplicity vector as a block
/// diagonal of irreducibles.
pub fn rep_from_mult_vector(
    irreps: &[Representation],
    mults: &[usize],
) -> Result<Representation> {
    let mut acc: Option<Representation> = None;
    for (i, &l) in mults.iter().enumerate() {
        for _ in 0..l {
            acc = Some(match acc {
                None => irreps[i].clone(),
                Some(a) => a.direct_sum(&irreps[i])?,
            });
        }
    }
    acc.ok_or_else(|| Error::InvalidRepresentation("empty multiplicity vector".into()))
}

/// The left regular representation as permutation matrices.
pub fn regular_representation(group: &FiniteGroup) -> Representation {
    let n = group.order();
    let mats = (0..n)
        .map(|g| {
            CMat::from_fn(n, n, |a, b| {
                if a == group.mul(g, b) {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        })
        .collect();
    Representation {
        group: group.clone(),
        dim: n,
        mats,
    }
}
