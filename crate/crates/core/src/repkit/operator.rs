use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{build_basis, RepBasis, RepLabel};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense operator on a truncated [`RepBasis`]. Immutable once built; every
/// arithmetic method returns a new operator.
#[derive(Clone, Debug)]
pub struct Operator {
    basis: Arc<RepBasis>,
    entries: CMatrix,
}

impl Operator {
    pub fn new(basis: Arc<RepBasis>, entries: CMatrix) -> Result<Self> {
        let n = basis.dim();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::BasisMismatch(format!(
                "matrix is {}x{}, basis has dimension {n}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Operator { basis, entries })
    }

    pub fn zeros(basis: &Arc<RepBasis>) -> Self {
        let n = basis.dim();
        Operator {
            basis: basis.clone(),
            entries: CMatrix::zeros(n, n),
        }
    }

    pub fn identity(basis: &Arc<RepBasis>) -> Self {
        let n = basis.dim();
        Operator {
            basis: basis.clone(),
            entries: CMatrix::identity(n, n),
        }
    }

    pub fn from_diagonal(basis: &Arc<RepBasis>, diag: impl Fn(usize) -> Complex64) -> Self {
        let n = basis.dim();
        let mut entries = CMatrix::zeros(n, n);
        for i in 0..n {
            entries[(i, i)] = diag(i);
        }
        Operator {
            basis: basis.clone(),
            entries,
        }
    }

    pub fn basis(&self) -> &Arc<RepBasis> {
        &self.basis
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    /// `⟨j',m'|A|j,m⟩`, zero when either label is outside the basis.
    pub fn element(&self, bra: (HalfInt, HalfInt), ket: (HalfInt, HalfInt)) -> Complex64 {
        match (
            self.basis.index_of(bra.0, bra.1),
            self.basis.index_of(ket.0, ket.1),
        ) {
            (Some(r), Some(c)) => self.entries[(r, c)],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    fn check_same(&self, other: &Operator) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) || *self.basis == *other.basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch(format!(
                "s={} jmax={} vs s={} jmax={}",
                self.basis.s(),
                self.basis.jmax(),
                other.basis.s(),
                other.basis.jmax()
            )))
        }
    }

    fn same_basis(&self, other: &Operator) {
        self.check_same(other).expect("operators on different bases");
    }

    pub fn try_add(&self, other: &Operator) -> Result<Operator> {
        self.check_same(other)?;
        Ok(self.with_entries(&self.entries + &other.entries))
    }

    pub fn add(&self, other: &Operator) -> Operator {
        self.same_basis(other);
        self.with_entries(&self.entries + &other.entries)
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        self.same_basis(other);
        self.with_entries(&self.entries - &other.entries)
    }

    pub fn scale(&self, c: Complex64) -> Operator {
        self.with_entries(&self.entries * c)
    }

    pub fn scale_re(&self, c: f64) -> Operator {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn adjoint(&self) -> Operator {
        self.with_entries(self.entries.adjoint())
    }

    /// Matrix product in the truncated space. The generators are banded, so
    /// zero entries of the right factor are skipped; the result is identical
    /// to a dense product.
    pub fn mul(&self, other: &Operator) -> Operator {
        self.same_basis(other);
        self.with_entries(sparse_aware_product(&self.entries, &other.entries))
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.entries * v
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        max_abs(&self.entries)
    }

    /// `‖A − A†‖` in the max-entry norm.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.entries - self.entries.adjoint()))
    }

    /// `P A P` where `P` keeps only the states for which `keep` is true.
    pub fn compress(&self, keep: impl Fn(usize) -> bool) -> Operator {
        let n = self.dim();
        let mask: Vec<bool> = (0..n).map(keep).collect();
        let mut m = self.entries.clone();
        for c in 0..n {
            for r in 0..n {
                if !(mask[r] && mask[c]) {
                    m[(r, c)] = Complex64::new(0.0, 0.0);
                }
            }
        }
        self.with_entries(m)
    }

    /// Compression onto states with `j ≤ jmax − 1`.
    pub fn interior(&self) -> Operator {
        let b = self.basis.clone();
        self.compress(|i| b.is_interior(i))
    }

    /// Submatrix over the selected indices.
    pub fn block(&self, keep: impl Fn(usize) -> bool) -> CMatrix {
        let idx: Vec<usize> = (0..self.dim()).filter(|&i| keep(i)).collect();
        CMatrix::from_fn(idx.len(), idx.len(), |r, c| self.entries[(idx[r], idx[c])])
    }

    pub fn interior_block(&self) -> CMatrix {
        let b = self.basis.clone();
        self.block(|i| b.is_interior(i))
    }

    fn with_entries(&self, entries: CMatrix) -> Operator {
        Operator {
            basis: self.basis.clone(),
            entries,
        }
    }

    pub fn to_json(&self) -> OperatorJson {
        let n = self.dim();
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let z = self.entries[(r, c)];
                entries.push([z.re, z.im]);
            }
        }
        OperatorJson {
            basis: BasisJson {
                s: self.basis.s(),
                jmax: self.basis.jmax(),
                hbar: self.basis.hbar(),
            },
            dim: n,
            entries,
        }
    }

    pub fn from_json(json: &OperatorJson) -> Result<Operator> {
        let label = RepLabel::new(json.basis.s, json.basis.jmax, json.basis.hbar)?;
        let basis = Arc::new(build_basis(label)?);
        let n = basis.dim();
        if json.dim != n || json.entries.len() != n * n {
            return Err(Error::BasisMismatch(format!(
                "serialized operator has dim {} and {} entries, basis needs {n}",
                json.dim,
                json.entries.len()
            )));
        }
        let entries = CMatrix::from_fn(n, n, |r, c| {
            let [re, im] = json.entries[r * n + c];
            Complex64::new(re, im)
        });
        Operator::new(basis, entries)
    }
}

/// JSON form: `{"basis": {"s": "1/2", "jmax": "5/2", "hbar": 1.0}, "dim": n,
/// "entries": [[re, im], ...]}` with entries in row-major order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OperatorJson {
    pub basis: BasisJson,
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BasisJson {
    pub s: HalfInt,
    pub jmax: HalfInt,
    pub hbar: f64,
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub(crate) fn sparse_aware_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let p = b.ncols();
    let mut out = CMatrix::zeros(n, p);
    for j in 0..p {
        for k in 0..b.nrows() {
            let bkj = b[(k, j)];
            if bkj.re == 0.0 && bkj.im == 0.0 {
                continue;
            }
            let col_a = a.column(k);
            let mut col_out = out.column_mut(j);
            col_out.axpy(bkj, &col_a, Complex64::new(1.0, 0.0));
        }
    }
    out
}
