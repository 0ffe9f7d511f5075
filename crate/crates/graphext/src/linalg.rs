//! Exact integer linear algebra over labeled matrices.
//!
//! The workhorse is the Smith normal form `U * M * V = D` with unimodular
//! `U`, `V` and a divisibility chain on the diagonal of `D`. On top of it sit
//! integer solvability with certificates and obstructions, cokernel
//! invariants, class equality in cokernels, and well-definedness and
//! bijectivity checks for maps induced between cokernels.
//!
//! Everything is arbitrary precision: intermediate entries of an elimination
//! can outgrow any fixed-width integer even for small inputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::matrix::{IntMatrix, IntVector, MatrixError};

/// `u * m * v = d` with `|det u| = |det v| = 1` and `d` diagonal,
/// nonnegative, each entry dividing the next, zeros last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal of `d` up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.n_rows().min(self.d.n_cols());
        (0..k).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Invariant factors of the cokernel presented by a matrix: the torsion
/// factors (diagonal entries > 1, in divisibility order) and the free rank
/// (rows not covered by a nonzero diagonal entry).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CokerInvariants {
    #[serde(serialize_with = "crate::matrix::int_serde::bigint_vec")]
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

/// Canonical coordinates of a vector's class in a cokernel: one residue in
/// `[0, d)` per torsion factor `d > 1`, and one integer per free coordinate.
/// Two vectors are in the same class iff their coordinates are equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CokerClass {
    #[serde(serialize_with = "crate::matrix::int_serde::bigint_pair_vec")]
    pub torsion: Vec<(BigInt, BigInt)>,
    #[serde(serialize_with = "crate::matrix::int_serde::bigint_vec")]
    pub free: Vec<BigInt>,
}

/// Why a vector is not in the integer column span: a row functional `u`
/// (a row of the Smith `U`) with `u * M == 0 (mod modulus)` but
/// `u * b = value != 0 (mod modulus)`. A `modulus` of zero means `u * M`
/// vanishes exactly while `u * b` does not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub index: usize,
    #[serde(serialize_with = "crate::matrix::int_serde::bigint")]
    pub modulus: BigInt,
    #[serde(serialize_with = "crate::matrix::int_serde::bigint")]
    pub value: BigInt,
    #[serde(serialize_with = "crate::matrix::int_serde::bigint")]
    pub residue: BigInt,
    pub functional: IntVector,
}

impl Obstruction {
    /// Re-derives the refusal from scratch: the functional must annihilate
    /// the columns of `m` modulo `modulus` yet not annihilate `b`.
    pub fn verify(&self, m: &IntMatrix, b: &IntVector) -> bool {
        let Ok(um) = row_times_matrix(&self.functional, m) else {
            return false;
        };
        let Ok(ub) = self.functional.dot(b) else {
            return false;
        };
        if ub != self.value {
            return false;
        }
        if self.modulus.is_zero() {
            um.iter().all(Zero::is_zero) && !ub.is_zero()
        } else {
            um.iter().all(|x| x.mod_floor(&self.modulus).is_zero())
                && !ub.mod_floor(&self.modulus).is_zero()
        }
    }
}

fn row_times_matrix(row: &IntVector, m: &IntMatrix) -> Result<Vec<BigInt>, MatrixError> {
    if row.labels() != m.row_labels() {
        return Err(MatrixError::LabelMismatch(
            "functional labels must match matrix rows".into(),
        ));
    }
    Ok((0..m.n_cols())
        .map(|j| {
            (0..m.n_rows())
                .map(|i| row.get(i) * m.get(i, j))
                .sum::<BigInt>()
        })
        .collect())
}

/// Outcome of an integer solvability query `M * z = b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ImageMembership {
    Member { certificate: IntVector },
    NotMember { obstruction: Obstruction },
}

impl ImageMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, ImageMembership::Member { .. })
    }

    pub fn certificate(&self) -> Option<&IntVector> {
        match self {
            ImageMembership::Member { certificate } => Some(certificate),
            ImageMembership::NotMember { .. } => None,
        }
    }

    pub fn obstruction(&self) -> Option<&Obstruction> {
        match self {
            ImageMembership::Member { .. } => None,
            ImageMembership::NotMember { obstruction } => Some(obstruction),
        }
    }
}

/// Result of comparing two classes in a cokernel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassComparison {
    pub equal: bool,
    pub detail: ImageMembership,
}

/// Well-definedness and bijectivity of the map a matrix induces between two
/// cokernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InducedMapCheck {
    pub well_defined: bool,
    pub isomorphism: bool,
}

// --- Smith normal form -----------------------------------------------------

struct SnfWork {
    d: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
}

impl SnfWork {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            self.d.swap(a, b);
            self.u.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in &mut self.d {
            row.swap(a, b);
        }
        for row in &mut self.v {
            row.swap(a, b);
        }
    }

    /// row[i] -= q * row[k]
    fn row_sub(&mut self, i: usize, k: usize, q: &BigInt) {
        for j in 0..self.cols {
            let t = q * &self.d[k][j];
            self.d[i][j] -= t;
        }
        for j in 0..self.rows {
            let t = q * &self.u[k][j];
            self.u[i][j] -= t;
        }
    }

    /// col[j] -= q * col[k]
    fn col_sub(&mut self, j: usize, k: usize, q: &BigInt) {
        for row in &mut self.d {
            let t = q * &row[k];
            row[j] -= t;
        }
        for row in &mut self.v {
            let t = q * &row[k];
            row[j] -= t;
        }
    }

    /// row[k] += row[i]
    fn row_add(&mut self, k: usize, i: usize) {
        for j in 0..self.cols {
            let t = self.d[i][j].clone();
            self.d[k][j] += t;
        }
        for j in 0..self.rows {
            let t = self.u[i][j].clone();
            self.u[k][j] += t;
        }
    }

    fn negate_row(&mut self, k: usize) {
        for x in &mut self.d[k] {
            *x = -x.clone();
        }
        for x in &mut self.u[k] {
            *x = -x.clone();
        }
    }

    /// Smallest nonzero absolute value in `d[k.., k..]`, row-major ties.
    fn pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut best_abs = BigInt::zero();
        for i in k..self.rows {
            for j in k..self.cols {
                let a = self.d[i][j].abs();
                if a.is_zero() {
                    continue;
                }
                if best.is_none() || a < best_abs {
                    best = Some((i, j));
                    best_abs = a;
                }
            }
        }
        best
    }

    fn first_nondivisible(&self, k: usize) -> Option<usize> {
        let p = &self.d[k][k];
        for i in (k + 1)..self.rows {
            for j in (k + 1)..self.cols {
                if !self.d[i][j].mod_floor(p).is_zero() {
                    return Some(i);
                }
            }
        }
        None
    }
}

fn identity_entries(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Smith normal form of `m`. Deterministic: the pivot is always the entry of
/// smallest nonzero absolute value in the working submatrix, ties broken in
/// row-major order.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let rows = m.n_rows();
    let cols = m.n_cols();
    let mut w = SnfWork {
        d: m.entries().to_vec(),
        u: identity_entries(rows),
        v: identity_entries(cols),
        rows,
        cols,
    };

    let steps = rows.min(cols);
    'steps: for k in 0..steps {
        loop {
            let Some((pi, pj)) = w.pivot(k) else {
                break 'steps; // remaining submatrix is zero
            };
            w.swap_rows(k, pi);
            w.swap_cols(k, pj);

            // Euclidean sweeps until row k and column k are clear
            let mut settled = false;
            while !settled {
                settled = true;
                for i in (k + 1)..rows {
                    if w.d[i][k].is_zero() {
                        continue;
                    }
                    let q = &w.d[i][k] / &w.d[k][k];
                    if !q.is_zero() {
                        w.row_sub(i, k, &q);
                    }
                    if !w.d[i][k].is_zero() {
                        // strictly smaller remainder becomes the pivot
                        w.swap_rows(k, i);
                        settled = false;
                    }
                }
                for j in (k + 1)..cols {
                    if w.d[k][j].is_zero() {
                        continue;
                    }
                    let q = &w.d[k][j] / &w.d[k][k];
                    if !q.is_zero() {
                        w.col_sub(j, k, &q);
                    }
                    if !w.d[k][j].is_zero() {
                        w.swap_cols(k, j);
                        settled = false;
                    }
                }
            }

            // enforce the divisibility chain: drag a bad row into row k and
            // keep reducing (the pivot's absolute value strictly shrinks)
            match w.first_nondivisible(k) {
                Some(i) => w.row_add(k, i),
                None => break,
            }
        }
    }

    for k in 0..steps {
        if w.d[k][k].is_negative() {
            w.negate_row(k);
        }
    }

    let row_labels = m.row_labels().to_vec();
    let col_labels = m.col_labels().to_vec();
    let snf = SmithDecomposition {
        u: IntMatrix::new(row_labels.clone(), row_labels.clone(), w.u)
            .expect("labels validated by input matrix"),
        d: IntMatrix::new(row_labels, col_labels.clone(), w.d)
            .expect("labels validated by input matrix"),
        v: IntMatrix::new(col_labels.clone(), col_labels, w.v)
            .expect("labels validated by input matrix"),
    };
    #[cfg(debug_assertions)]
    verify_smith(m, &snf).expect("smith normal form invariants");
    snf
}

/// Checks every decomposition invariant exactly; returns a description of
/// the first failure.
pub fn verify_smith(m: &IntMatrix, snf: &SmithDecomposition) -> Result<(), String> {
    let umv = snf
        .u
        .mul(m)
        .and_then(|um| um.mul(&snf.v))
        .map_err(|e| e.to_string())?;
    if umv != snf.d {
        return Err("u * m * v differs from d".into());
    }
    for i in 0..snf.d.n_rows() {
        for j in 0..snf.d.n_cols() {
            let x = snf.d.get(i, j);
            if i != j && !x.is_zero() {
                return Err(format!("off-diagonal entry at ({i}, {j})"));
            }
            if i == j && x.is_negative() {
                return Err(format!("negative diagonal entry at {i}"));
            }
        }
    }
    let diag = snf.diagonal();
    for i in 1..diag.len() {
        if diag[i - 1].is_zero() {
            if !diag[i].is_zero() {
                return Err("zero diagonal entry precedes a nonzero one".into());
            }
        } else if !diag[i].mod_floor(&diag[i - 1]).is_zero() {
            return Err(format!("divisibility fails between d{} and d{}", i - 1, i));
        }
    }
    if determinant(&snf.u).abs() != BigInt::one() {
        return Err("u is not unimodular".into());
    }
    if determinant(&snf.v).abs() != BigInt::one() {
        return Err("v is not unimodular".into());
    }
    Ok(())
}

/// Exact determinant of a square matrix by fraction-free (Bareiss)
/// elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.n_rows(), m.n_cols(), "determinant needs a square matrix");
    let n = m.n_rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.entries().to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// A cokernel presentation with its Smith decomposition computed once.
#[derive(Debug, Clone)]
pub struct CokernelPresentation {
    matrix: IntMatrix,
    snf: SmithDecomposition,
}

impl CokernelPresentation {
    pub fn new(matrix: IntMatrix) -> Self {
        let snf = smith_normal_form(&matrix);
        CokernelPresentation { matrix, snf }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.snf
    }

    pub fn invariants(&self) -> CokerInvariants {
        let diag = self.snf.diagonal();
        let torsion: Vec<BigInt> = diag
            .iter()
            .filter(|d| **d > BigInt::one())
            .cloned()
            .collect();
        let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
        CokerInvariants {
            torsion,
            free_rank: self.matrix.n_rows() - nonzero,
        }
    }

    /// Solves `M * z = b` over the integers.
    pub fn in_image(&self, b: &IntVector) -> Result<ImageMembership, MatrixError> {
        if b.labels() != self.matrix.row_labels() {
            return Err(MatrixError::LabelMismatch(
                "vector labels must match matrix rows".into(),
            ));
        }
        let c = self.snf.u.mul_vec(b)?;
        let diag = self.snf.diagonal();
        let cols = self.matrix.n_cols();
        let mut y = vec![BigInt::zero(); cols];
        for i in 0..self.matrix.n_rows() {
            let d_i = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            let c_i = c.get(i);
            if d_i.is_zero() {
                if !c_i.is_zero() {
                    return Ok(ImageMembership::NotMember {
                        obstruction: Obstruction {
                            index: i,
                            modulus: BigInt::zero(),
                            value: c_i.clone(),
                            residue: c_i.clone(),
                            functional: self.snf.u.row(i),
                        },
                    });
                }
            } else {
                let r = c_i.mod_floor(&d_i);
                if r.is_zero() {
                    y[i] = c_i / &d_i;
                } else {
                    return Ok(ImageMembership::NotMember {
                        obstruction: Obstruction {
                            index: i,
                            modulus: d_i,
                            value: c_i.clone(),
                            residue: r,
                            functional: self.snf.u.row(i),
                        },
                    });
                }
            }
        }
        let y = IntVector::new(self.matrix.col_labels().to_vec(), y)?;
        let z = self.snf.v.mul_vec(&y)?;
        debug_assert_eq!(self.matrix.mul_vec(&z), Ok(b.clone()));
        Ok(ImageMembership::Member { certificate: z })
    }

    /// Canonical class coordinates of `x` in the cokernel.
    pub fn class_of(&self, x: &IntVector) -> Result<CokerClass, MatrixError> {
        if x.labels() != self.matrix.row_labels() {
            return Err(MatrixError::LabelMismatch(
                "vector labels must match matrix rows".into(),
            ));
        }
        let c = self.snf.u.mul_vec(x)?;
        let diag = self.snf.diagonal();
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for i in 0..self.matrix.n_rows() {
            let d_i = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d_i.is_zero() {
                free.push(c.get(i).clone());
            } else if d_i > BigInt::one() {
                torsion.push((d_i.clone(), c.get(i).mod_floor(&d_i)));
            }
        }
        Ok(CokerClass { torsion, free })
    }

    /// Class equality of `x` and `y`: integer solvability of
    /// `M * z = x - y`.
    pub fn classes_equal(
        &self,
        x: &IntVector,
        y: &IntVector,
    ) -> Result<ClassComparison, MatrixError> {
        let diff = x.sub(y)?;
        let detail = self.in_image(&diff)?;
        Ok(ClassComparison {
            equal: detail.is_member(),
            detail,
        })
    }
}

/// One-shot form of [`CokernelPresentation::in_image`].
pub fn in_image(m: &IntMatrix, b: &IntVector) -> Result<ImageMembership, MatrixError> {
    CokernelPresentation::new(m.clone()).in_image(b)
}

/// One-shot form of [`CokernelPresentation::invariants`].
pub fn coker_invariants(m: &IntMatrix) -> CokerInvariants {
    CokernelPresentation::new(m.clone()).invariants()
}

/// One-shot form of [`CokernelPresentation::classes_equal`].
pub fn classes_equal(
    m: &IntMatrix,
    x: &IntVector,
    y: &IntVector,
) -> Result<ClassComparison, MatrixError> {
    CokernelPresentation::new(m.clone()).classes_equal(x, y)
}

/// Stacks two matrices side by side under fresh positional labels, scaling
/// the right block by `right_sign`.
fn hstack(left: &IntMatrix, right: &IntMatrix, right_sign: i64) -> IntMatrix {
    assert_eq!(left.n_rows(), right.n_rows(), "hstack needs equal heights");
    let sign = BigInt::from(right_sign);
    let entries: Vec<Vec<BigInt>> = (0..left.n_rows())
        .map(|i| {
            let mut row: Vec<BigInt> = (0..left.n_cols()).map(|j| left.get(i, j).clone()).collect();
            row.extend((0..right.n_cols()).map(|j| right.get(i, j) * &sign));
            row
        })
        .collect();
    IntMatrix::from_entries(entries).expect("positional labels are distinct")
}

/// Basis of the integer kernel of `m`, one vector per column.
fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let diag = snf.diagonal();
    let mut basis = Vec::new();
    for j in 0..m.n_cols() {
        let free = j >= diag.len() || diag[j].is_zero();
        if free {
            basis.push((0..m.n_cols()).map(|i| snf.v.get(i, j).clone()).collect());
        }
    }
    basis
}

/// Does `s` induce a well-defined map between the cokernels of `m_src` and
/// `m_dst`, and is that map an isomorphism?
///
/// Well-definedness asks that `s` carry the column span of `m_src` into the
/// column span of `m_dst`. Surjectivity is triviality of the cokernel of
/// `[s | m_dst]`. Injectivity asks that every vector whose image under `s`
/// lies in the destination span already lie in the source span; those
/// vectors are generated by projecting the kernel of `[s | -m_dst]`.
pub fn induced_cokernel_map_check(
    s: &IntMatrix,
    m_src: &IntMatrix,
    m_dst: &IntMatrix,
) -> Result<InducedMapCheck, MatrixError> {
    if s.col_labels() != m_src.row_labels() {
        return Err(MatrixError::LabelMismatch(
            "map columns must match source rows".into(),
        ));
    }
    if s.row_labels() != m_dst.row_labels() {
        return Err(MatrixError::LabelMismatch(
            "map rows must match destination rows".into(),
        ));
    }
    let dst = CokernelPresentation::new(m_dst.clone());
    let carried = s.mul(m_src)?;
    for j in 0..carried.n_cols() {
        if !dst.in_image(&carried.column(j))?.is_member() {
            return Ok(InducedMapCheck {
                well_defined: false,
                isomorphism: false,
            });
        }
    }

    // surjective iff coker([s | m_dst]) is trivial
    let aug = hstack(s, m_dst, 1);
    let aug_inv = CokernelPresentation::new(aug).invariants();
    let surjective = aug_inv.torsion.is_empty() && aug_inv.free_rank == 0;

    // injective iff the preimage of the destination span is inside the
    // source span
    let src = CokernelPresentation::new(m_src.clone());
    let mut injective = true;
    let src_dim = s.n_cols();
    for gen in kernel_basis(&hstack(s, m_dst, -1)) {
        let x = IntVector::new(
            m_src.row_labels().to_vec(),
            gen[..src_dim].to_vec(),
        )?;
        if !src.in_image(&x)?.is_member() {
            injective = false;
            break;
        }
    }

    Ok(InducedMapCheck {
        well_defined: true,
        isomorphism: surjective && injective,
    })
}
