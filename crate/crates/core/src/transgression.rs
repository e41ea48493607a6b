//! The transgression `H^1(T) -> H^2(G/T)` as an integer matrix.
//!
//! Row `i` of the matrix lists the coefficients of `tau(t_i)` in the Schubert
//! basis `w_1..w_n`. With respect to these bases the matrix is the transpose
//! of the transition matrix from the unit-lattice basis to the simple roots.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{self, modp_cokernel, modp_kernel, IntMatrix, LinAlgError, ModPSubspace};
use crate::lattices::{self, GroupSpec, LatticeError, ThetaChoice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransgressionError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Debug, Clone)]
pub struct TransgressionMap {
    pub group: GroupSpec,
    pub matrix: IntMatrix,
    pub domain_labels: Vec<String>,
    pub codomain_labels: Vec<String>,
}

pub fn domain_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("t_{i}")).collect()
}

pub fn codomain_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("w_{i}")).collect()
}

pub fn transgression_matrix(g: &GroupSpec) -> Result<TransgressionMap, TransgressionError> {
    transgression_matrix_with(g, ThetaChoice::Preferred)
}

pub fn transgression_matrix_with(g: &GroupSpec, choice: ThetaChoice) -> Result<TransgressionMap, TransgressionError> {
    let basis = lattices::unit_lattice_basis(g, choice)?;
    let c = lattices::transition_matrix_for(g, &basis)?;
    let n = g.rank();
    Ok(TransgressionMap {
        group: g.clone(),
        matrix: c.transpose(),
        domain_labels: domain_labels(n),
        codomain_labels: codomain_labels(n),
    })
}

impl TransgressionMap {
    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn det(&self) -> BigInt {
        self.matrix.det().expect("square")
    }

    /// Image of `sum x_i t_i` in the `w` basis.
    pub fn apply(&self, x: &[i64]) -> Vec<BigInt> {
        let n = self.rank();
        (0..n)
            .map(|j| (0..n).map(|i| BigInt::from(x[i]) * &self.matrix[(i, j)]).sum())
            .collect()
    }

    /// `tau(t_i)` written out, e.g. `2 w_1 - w_2`.
    pub fn describe_row(&self, i: usize) -> String {
        let coeffs: Vec<i64> = self
            .matrix
            .row(i)
            .iter()
            .map(|x| i64::try_from(x).expect("small entries"))
            .collect();
        format_combination(&coeffs, &self.codomain_labels)
    }
}

/// Kernel and cokernel of the transgression with `Z/p` coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModPAnalysis {
    pub p: u64,
    /// Subspace of `H^1(T; Z/p)` in the `t` basis.
    pub kernel: ModPSubspace,
    /// Complement representatives in `H^2(G/T; Z/p)` in the `w` basis.
    pub cokernel: ModPSubspace,
    /// Image of the transgression, kept for membership queries.
    pub image: ModPSubspace,
    pub is_isomorphism: bool,
}

impl ModPAnalysis {
    pub fn kernel_contains(&self, x: &[i64]) -> bool {
        self.kernel.contains_int(x)
    }

    /// Whether the class of `y` generates the cokernel, i.e. `y` together
    /// with the image spans everything. Only meaningful when the cokernel is
    /// cyclic (dimension one).
    pub fn generates_cokernel(&self, y: &[i64]) -> bool {
        if self.image.contains_int(y) {
            return false;
        }
        let p = self.p;
        let mut rows = self.image.basis.clone();
        rows.push(y.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect());
        ModPSubspace::span(p, self.image.ambient_dim, rows).dim() == self.image.ambient_dim
    }
}

pub fn modp_analysis(g: &GroupSpec, p: u64) -> Result<ModPAnalysis, TransgressionError> {
    let tau = transgression_matrix(g)?;
    modp_analysis_of(&tau, p)
}

pub fn modp_analysis_of(tau: &TransgressionMap, p: u64) -> Result<ModPAnalysis, TransgressionError> {
    // The linear map t -> w in column form is the transpose of the row table.
    let map = tau.matrix.transpose();
    let kernel = modp_kernel(&map, p)?;
    let cokernel = modp_cokernel(&map, p)?;
    let image = exactlin::modp_image(&map, p)?;
    let is_isomorphism = kernel.is_trivial() && cokernel.is_trivial();
    Ok(ModPAnalysis {
        p,
        kernel,
        cokernel,
        image,
        is_isomorphism,
    })
}

/// Primes at which the transgression fails to be an isomorphism.
pub fn kac_contradiction_report(g: &GroupSpec) -> Result<Vec<u64>, TransgressionError> {
    let tau = transgression_matrix(g)?;
    Ok(exactlin::prime_divisors(&tau.det()))
}

/// Renders `sum c_i label_i` with signs, skipping zero terms.
pub fn format_combination(coeffs: &[i64], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, label) in coeffs.iter().zip(labels) {
        if *c == 0 {
            continue;
        }
        let mag = c.unsigned_abs();
        let sign = if *c < 0 { "-" } else { "+" };
        if out.is_empty() {
            if *c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if mag != 1 {
            out.push_str(&mag.to_string());
            out.push(' ');
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Symmetric representatives in `(-p/2, p/2]` of a `Z/p` vector.
pub fn symmetric_lift(v: &[u64], p: u64) -> Vec<i64> {
    v.iter()
        .map(|&x| if 2 * x > p { x as i64 - p as i64 } else { x as i64 })
        .collect()
}
