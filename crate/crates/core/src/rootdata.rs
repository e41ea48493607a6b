//! Root data for the simple Lie types A through G.
//!
//! Roots here live in the Lie algebra of the torus (they are the coroots of
//! the usual dual-space convention). Coordinates are always taken with
//! respect to the fundamental weights, so the weight lattice is `Z^n` and
//! simple root `i` is row `i` of the Cartan matrix.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{solve_rational, IntMatrix, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootDataError {
    #[error("invalid rank {rank} for type {family}: {constraint}")]
    InvalidRank {
        family: Family,
        rank: usize,
        constraint: &'static str,
    },
    #[error("unknown Lie family '{0}'")]
    UnknownFamily(String),
    #[error("simple root index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("weight vector has length {found}, expected {expected}")]
    WrongLength { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn constraint(self) -> &'static str {
        match self {
            Family::A => "A requires rank >= 1",
            Family::B => "B requires rank >= 2",
            Family::C => "C requires rank >= 2",
            Family::D => "D requires rank >= 3",
            Family::E => "E requires rank 6, 7 or 8",
            Family::F => "F requires rank 4",
            Family::G => "G requires rank 2",
        }
    }

    fn admits(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }

    pub const ALL: [Family; 7] = [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
    ];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl FromStr for Family {
    type Err = RootDataError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            "F" | "f" => Ok(Family::F),
            "G" | "g" => Ok(Family::G),
            other => Err(RootDataError::UnknownFamily(other.to_string())),
        }
    }
}

/// A simple Lie type such as `C3` or `E7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LieType {
    family: Family,
    rank: usize,
}

impl LieType {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootDataError> {
        if family.admits(rank) {
            Ok(LieType { family, rank })
        } else {
            Err(RootDataError::InvalidRank {
                family,
                rank,
                constraint: family.constraint(),
            })
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Every valid type with rank at most `max_rank`.
    pub fn all_up_to(max_rank: usize) -> Vec<LieType> {
        let mut out = Vec::new();
        for family in Family::ALL {
            for rank in 1..=max_rank {
                if let Ok(t) = LieType::new(family, rank) {
                    out.push(t);
                }
            }
        }
        out
    }

    /// Order of the Weyl group, from the classical formulas.
    pub fn weyl_order(&self) -> u128 {
        let n = self.rank as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u128 << n) * fact(n),
            Family::D => (1u128 << (n - 1)) * fact(n),
            Family::E => match self.rank {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }

    /// Number of roots, from the classical table.
    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Family::F => 48,
            Family::G => 12,
        }
    }

    /// Real dimension of the compact group.
    pub fn group_dimension(&self) -> usize {
        self.rank + self.root_count()
    }

    /// Standard (Bourbaki/Humphreys) numbering of the Dynkin diagram:
    /// symmetric edges plus the multiply-laced entries of the Bourbaki
    /// matrix as `(row, col, value)`, zero-based.
    fn diagram(&self) -> (Vec<(usize, usize)>, Vec<(usize, usize, i64)>) {
        let n = self.rank;
        let path = |k: usize| (0..k.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
        match self.family {
            Family::A => (path(n), vec![]),
            Family::B => (path(n), vec![(n - 1, n - 2, -2)]),
            Family::C => (path(n), vec![(n - 2, n - 1, -2)]),
            Family::D => {
                let mut e = path(n - 1);
                e.push((n - 3, n - 1));
                (e, vec![])
            }
            Family::E => {
                let mut e = vec![(0, 2), (1, 3)];
                e.extend((2..n - 1).map(|i| (i, i + 1)));
                (e, vec![])
            }
            Family::F => (path(4), vec![(2, 1, -2)]),
            Family::G => (path(2), vec![(0, 1, -3)]),
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// Integer vector in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn zero(n: usize) -> Self {
        WeightVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        WeightVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// `self + k * other`
    pub fn add_scaled(&self, k: i64, other: &WeightVector) -> WeightVector {
        WeightVector(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }

    pub fn neg(&self) -> WeightVector {
        WeightVector(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A root together with the data needed to reflect in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub weight: WeightVector,
    /// Coefficients in the simple-root basis.
    pub simple_coeffs: Vec<i64>,
    /// Integer functional `v -> 2(v, beta)/(beta, beta)` on weight coordinates.
    pub coroot: Vec<i64>,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.simple_coeffs.iter().all(|&c| c >= 0)
    }

    pub fn pairing(&self, v: &WeightVector) -> i64 {
        self.coroot.iter().zip(&v.0).map(|(a, b)| a * b).sum()
    }

    /// Reflection of `v` in the hyperplane orthogonal to this root.
    pub fn reflect(&self, v: &WeightVector) -> WeightVector {
        v.add_scaled(-self.pairing(v), &self.weight)
    }

    pub fn height(&self) -> i64 {
        self.simple_coeffs.iter().sum()
    }
}

/// Which way round to store the Cartan matrix. `Transposed` builds the
/// Langlands-dual data and exists only to demonstrate that the convention
/// matters (the fixture corpus must fail under it).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    #[default]
    Bourbaki,
    Transposed,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    lie_type: LieType,
    convention: Convention,
    cartan: IntMatrix,
    cartan_rows: Vec<Vec<i64>>,
    simple_roots: Vec<WeightVector>,
    gram: RatMatrix,
    roots: Vec<Root>,
    index: HashMap<WeightVector, usize>,
}

/// Cartan matrix `b_ij = 2(a_i, a_j)/(a_j, a_j)` for roots in the torus Lie
/// algebra: the transpose of the matrix tabulated by Humphreys.
fn bourbaki_cartan(t: &LieType) -> Vec<Vec<i64>> {
    let n = t.rank;
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let (edges, multi) = t.diagram();
    for (i, j) in edges {
        a[i][j] = -1;
        a[j][i] = -1;
    }
    for (i, j, v) in multi {
        a[i][j] = v;
    }
    a
}

/// Squared lengths `(a_i, a_i)` making `A * diag(d)` symmetric, scaled so the
/// longest simple root has squared length 2.
fn symmetrizer(a: &[Vec<i64>]) -> Vec<BigRational> {
    let n = a.len();
    let mut d: Vec<Option<BigRational>> = vec![None; n];
    d[0] = Some(BigRational::from_integer(1.into()));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if i != j && a[i][j] != 0 && d[j].is_none() {
                // a_ij d_j = a_ji d_i
                let di = d[i].clone().unwrap();
                d[j] = Some(di * BigRational::new(a[j][i].into(), a[i][j].into()));
                queue.push_back(j);
            }
        }
    }
    let d: Vec<BigRational> = d.into_iter().map(|x| x.expect("connected diagram")).collect();
    let max = d.iter().max().unwrap().clone();
    let scale = BigRational::from_integer(2.into()) / max;
    d.into_iter().map(|x| x * &scale).collect()
}

impl RootSystem {
    pub fn new(t: LieType) -> Self {
        Self::with_convention(t, Convention::Bourbaki)
    }

    pub fn with_convention(t: LieType, convention: Convention) -> Self {
        let mut rows = bourbaki_cartan(&t);
        if convention == Convention::Transposed {
            let n = rows.len();
            rows = (0..n).map(|i| (0..n).map(|j| rows[j][i]).collect()).collect();
        }
        let cartan = IntMatrix::from_rows(&rows);
        let n = t.rank;
        let simple_roots: Vec<WeightVector> = rows.iter().cloned().map(WeightVector).collect();

        // (phi_i, phi_j) = d_i/2 * (A^-1)_{ji}
        let d = symmetrizer(&rows);
        let inv = solve_rational(&cartan, &IntMatrix::identity(n)).expect("Cartan matrix is invertible");
        let mut gram = RatMatrix::from_int(&IntMatrix::zeros(n, n));
        let half = BigRational::new(1.into(), 2.into());
        for i in 0..n {
            for j in 0..n {
                gram.set(i, j, &d[i] * &half * inv.get(j, i));
            }
        }

        let roots = generate_roots(&simple_roots, &(0..n).collect::<Vec<_>>());
        let mut roots = roots;
        roots.sort_by(|a, b| a.weight.cmp(&b.weight));
        let index = roots
            .iter()
            .enumerate()
            .map(|(k, r)| (r.weight.clone(), k))
            .collect();
        RootSystem {
            lie_type: t,
            convention,
            cartan,
            cartan_rows: rows,
            simple_roots,
            gram,
            roots,
            index,
        }
    }

    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn rank(&self) -> usize {
        self.lie_type.rank
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn cartan_rows(&self) -> &[Vec<i64>] {
        &self.cartan_rows
    }

    pub fn simple_roots(&self) -> &[WeightVector] {
        &self.simple_roots
    }

    /// Inner products `(phi_i, phi_j)` of the fundamental weights.
    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// All roots, sorted lexicographically by weight coordinates.
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    pub fn root(&self, weight: &WeightVector) -> Option<&Root> {
        self.index.get(weight).map(|&k| &self.roots[k])
    }

    pub fn inner(&self, a: &WeightVector, b: &WeightVector) -> BigRational {
        let n = self.rank();
        let mut s = BigRational::zero();
        for i in 0..n {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                if b.0[j] != 0 {
                    s += self.gram.get(i, j) * BigRational::from_integer(BigInt::from(a.0[i] * b.0[j]));
                }
            }
        }
        s
    }

    /// `2(a_i, a_j)/(a_j, a_j)` recomputed from the Gram matrix.
    pub fn cartan_from_gram(&self) -> Vec<Vec<BigRational>> {
        let two = BigRational::from_integer(2.into());
        let n = self.rank();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let aj = &self.simple_roots[j];
                        &two * self.inner(&self.simple_roots[i], aj) / self.inner(aj, aj)
                    })
                    .collect()
            })
            .collect()
    }

    fn check_vector(&self, v: &WeightVector) -> Result<(), RootDataError> {
        if v.len() != self.rank() {
            return Err(RootDataError::WrongLength {
                expected: self.rank(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Simple reflection `s_i` (1-based index): `v - v_i * alpha_i`.
    pub fn reflect(&self, v: &WeightVector, i: usize) -> Result<WeightVector, RootDataError> {
        if i == 0 || i > self.rank() {
            return Err(RootDataError::IndexOutOfRange {
                index: i,
                rank: self.rank(),
            });
        }
        self.check_vector(v)?;
        Ok(v.add_scaled(-v.0[i - 1], &self.simple_roots[i - 1]))
    }

    /// Zero-based simple reflection without checks.
    #[cfg(test)]
    pub(crate) fn reflect0(&self, v: &WeightVector, i: usize) -> WeightVector {
        v.add_scaled(-v.0[i], &self.simple_roots[i])
    }

    /// Weight-coordinate expansion of the simple-root combination `coeffs`.
    pub fn from_simple_coeffs(&self, coeffs: &[i64]) -> WeightVector {
        let n = self.rank();
        let mut v = WeightVector::zero(n);
        for (c, a) in coeffs.iter().zip(&self.simple_roots) {
            v = v.add_scaled(*c, a);
        }
        v
    }

    /// Order of the center of the simply connected form, `|det A|`.
    pub fn center_order(&self) -> u64 {
        self.cartan.det().expect("square").magnitude().to_u64().expect("small")
    }
}

/// All roots: closure of the simple roots under the simple reflections, in the
/// order given by `schedule` (a permutation of `0..n`).
pub fn generate_roots(simple_roots: &[WeightVector], schedule: &[usize]) -> Vec<Root> {
    let n = simple_roots.len();
    let mut seen: HashMap<WeightVector, usize> = HashMap::new();
    let mut out: Vec<Root> = Vec::new();
    let mut queue = VecDeque::new();
    for (j, a) in simple_roots.iter().enumerate() {
        let mut coeffs = vec![0; n];
        coeffs[j] = 1;
        let r = Root {
            weight: a.clone(),
            simple_coeffs: coeffs,
            coroot: WeightVector::unit(n, j).0,
        };
        seen.insert(r.weight.clone(), out.len());
        out.push(r.clone());
        queue.push_back(r);
    }
    while let Some(r) = queue.pop_front() {
        for &i in schedule {
            // s_i beta = beta - beta_i alpha_i ; coroot' = coroot - coroot(alpha_i) e_i
            let k = r.weight.0[i];
            if k == 0 {
                continue;
            }
            let weight = r.weight.add_scaled(-k, &simple_roots[i]);
            if seen.contains_key(&weight) {
                continue;
            }
            let mut simple_coeffs = r.simple_coeffs.clone();
            simple_coeffs[i] -= k;
            let f_alpha: i64 = r.coroot.iter().zip(&simple_roots[i].0).map(|(a, b)| a * b).sum();
            let mut coroot = r.coroot.clone();
            coroot[i] -= f_alpha;
            let nr = Root {
                weight,
                simple_coeffs,
                coroot,
            };
            seen.insert(nr.weight.clone(), out.len());
            out.push(nr.clone());
            queue.push_back(nr);
        }
    }
    out
}

/// The root set as sorted weights.
pub fn generate_all_roots(rs: &RootSystem) -> Vec<WeightVector> {
    rs.roots.iter().map(|r| r.weight.clone()).collect()
}

pub fn build_root_system(t: LieType) -> RootSystem {
    RootSystem::new(t)
}
