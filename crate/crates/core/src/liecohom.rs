//! Second cohomology of a finite-dimensional Lie algebra with trivial real
//! coefficients, by exact rational linear algebra on its structure constants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::classical::levi_civita;
use crate::error::{Error, Result};

pub type Q = BigRational;

fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// `[e_a, e_b] = Σ_k c[a][b][k] e_k`
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    pub name: String,
    pub labels: Vec<String>,
    c: Vec<Vec<Vec<Q>>>,
}

impl StructureConstants {
    pub fn new(name: &str, labels: Vec<String>, c: Vec<Vec<Vec<Q>>>) -> Result<Self> {
        let n = labels.len();
        if c.len() != n || c.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::StructureConstants(format!("expected a {n}x{n}x{n} array")));
        }
        let sc = StructureConstants {
            name: name.to_string(),
            labels,
            c,
        };
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    if sc.c[a][b][k] != -sc.c[b][a][k].clone() {
                        return Err(Error::StructureConstants(format!("c[{a}][{b}][{k}] is not antisymmetric")));
                    }
                }
            }
        }
        if !sc.jacobi_residual().is_zero() {
            return Err(Error::StructureConstants(format!("{name} violates the Jacobi identity")));
        }
        Ok(sc)
    }

    fn from_int(name: &str, labels: &[&str], f: impl Fn(usize, usize, usize) -> i64) -> Result<Self> {
        let n = labels.len();
        let c = (0..n)
            .map(|a| (0..n).map(|b| (0..n).map(|k| q(f(a, b, k))).collect()).collect())
            .collect();
        Self::new(name, labels.iter().map(|s| s.to_string()).collect(), c)
    }

    /// Basis `J₁, J₂, J₃, N₁, N₂, N₃` with `[J_i, J_j] = ε_ijk J_k`,
    /// `[J_i, N_j] = ε_ijk N_k`, `[N_i, N_j] = 0`.
    pub fn e3() -> Self {
        Self::from_int("e3", &["J1", "J2", "J3", "N1", "N2", "N3"], |a, b, k| {
            let eps = |i, j, l| levi_civita(i, j, l) as i64;
            match (a / 3, b / 3, k / 3) {
                (0, 0, 0) => eps(a, b, k),
                (0, 1, 1) => eps(a, b - 3, k - 3),
                (1, 0, 1) => eps(a - 3, b, k - 3),
                _ => 0,
            }
        })
        .expect("e3 is a Lie algebra")
    }

    pub fn so3() -> Self {
        Self::from_int("so3", &["J1", "J2", "J3"], |a, b, k| levi_civita(a, b, k) as i64).expect("so3 is a Lie algebra")
    }

    pub fn abelian(n: usize) -> Self {
        let labels: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        Self::from_int(&format!("abelian{n}"), &refs, |_, _, _| 0).expect("abelian algebra")
    }

    /// Basis `J, P₁, P₂` with `[J, P₁] = P₂`, `[J, P₂] = −P₁`, `[P₁, P₂] = 0`.
    pub fn e2() -> Self {
        Self::from_int("e2", &["J", "P1", "P2"], |a, b, k| match (a, b, k) {
            (0, 1, 2) => 1,
            (1, 0, 2) => -1,
            (0, 2, 1) => -1,
            (2, 0, 1) => 1,
            _ => 0,
        })
        .expect("e2 is a Lie algebra")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn c(&self, a: usize, b: usize, k: usize) -> &Q {
        &self.c[a][b][k]
    }

    /// `max |[[a,b],c] + [[b,c],a] + [[c,a],b]|` over basis triples.
    pub fn jacobi_residual(&self) -> Q {
        let n = self.dim();
        let mut worst = Q::zero();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for k in 0..n {
                        let mut r = Q::zero();
                        for m in 0..n {
                            r += &self.c[a][b][m] * &self.c[m][c][k];
                            r += &self.c[b][c][m] * &self.c[m][a][k];
                            r += &self.c[c][a][m] * &self.c[m][b][k];
                        }
                        if r.abs() > worst {
                            worst = r.abs();
                        }
                    }
                }
            }
        }
        worst
    }

    /// Index pairs `(p, q)`, `p < q`, labelling the antisymmetric unknowns.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).collect()
    }

    /// Rows of the linear system `θ([a,b],c) + θ([b,c],a) + θ([c,a],b) = 0`
    /// for `a < b < c`.
    pub fn cocycle_system(&self) -> Vec<Vec<Q>> {
        let n = self.dim();
        let pairs = self.pairs();
        let index = |p: usize, q: usize| -> Option<(usize, i64)> {
            match p.cmp(&q) {
                std::cmp::Ordering::Less => Some((pairs.iter().position(|&x| x == (p, q)).unwrap(), 1)),
                std::cmp::Ordering::Greater => Some((pairs.iter().position(|&x| x == (q, p)).unwrap(), -1)),
                std::cmp::Ordering::Equal => None,
            }
        };
        let mut rows = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let mut row = vec![Q::zero(); pairs.len()];
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        for m in 0..n {
                            let coef = &self.c[x][y][m];
                            if coef.is_zero() {
                                continue;
                            }
                            if let Some((i, sign)) = index(m, z) {
                                row[i] += coef * q(sign);
                            }
                        }
                    }
                    rows.push(row);
                }
            }
        }
        rows
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / m[r][col].clone();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot_row = m[r].clone();
                for (v, pv) in m[i].iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{v : Mv = 0}` for `M` with `cols` columns.
pub fn null_space(rows: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Cocycles as vectors over `sc.pairs()`.
pub fn cocycle_space(sc: &StructureConstants) -> Vec<Vec<Q>> {
    null_space(&sc.cocycle_system(), sc.pairs().len())
}

/// A basis of `{θ_f(a,b) = f([a,b])}`; the spanning set is `f = e_k*`.
pub fn coboundary_space(sc: &StructureConstants) -> Vec<Vec<Q>> {
    let n = sc.dim();
    let pairs = sc.pairs();
    let span: Vec<Vec<Q>> = (0..n)
        .map(|k| pairs.iter().map(|&(a, b)| sc.c(a, b, k).clone()).collect())
        .collect();
    let mut m = span;
    let r = rref(&mut m).len();
    m.truncate(r);
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub algebra: String,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub h2: usize,
}

pub fn h2_report(sc: &StructureConstants) -> Result<CohomologyReport> {
    let system = sc.cocycle_system();
    let cocycles = cocycle_space(sc);
    let coboundaries = coboundary_space(sc);
    for v in &coboundaries {
        for row in &system {
            let r: Q = row.iter().zip(v).map(|(a, b)| a * b).sum();
            if !r.is_zero() {
                return Err(Error::StructureConstants(format!(
                    "a coboundary of {} fails the cocycle condition",
                    sc.name
                )));
            }
        }
    }
    Ok(CohomologyReport {
        algebra: sc.name.clone(),
        dim_cocycles: cocycles.len(),
        dim_coboundaries: coboundaries.len(),
        h2: cocycles.len() - coboundaries.len(),
    })
}

pub fn h2_dim(sc: &StructureConstants) -> Result<usize> {
    Ok(h2_report(sc)?.h2)
}

/// `h_γ = ½ ε_αβγ θ(N_α, N_β)` for an `e₃` cocycle.
pub fn e3_h_components(sc: &StructureConstants, theta: &[Q]) -> [Q; 3] {
    let pairs = sc.pairs();
    let value = |a: usize, b: usize| -> Q {
        if a < b {
            theta[pairs.iter().position(|&x| x == (a, b)).unwrap()].clone()
        } else if a > b {
            -theta[pairs.iter().position(|&x| x == (b, a)).unwrap()].clone()
        } else {
            Q::zero()
        }
    };
    std::array::from_fn(|g| {
        let mut h = Q::zero();
        for a in 0..3 {
            for b in 0..3 {
                let e = levi_civita(a, b, g) as i64;
                if e != 0 {
                    h += value(3 + a, 3 + b) * q(e);
                }
            }
        }
        h / q(2)
    })
}
