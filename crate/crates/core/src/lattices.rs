//! The lattice chain `root lattice ⊆ unit lattice ⊆ weight lattice`.
//!
//! In weight coordinates the weight lattice is `Z^n` and the root lattice is
//! the row lattice of the Cartan matrix. A group form is chosen by a subgroup
//! of the center `Z^n / root lattice`, given by generator vectors.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exactlin::{hermite_normal_form, smith_normal_form, solve_integral, IntMatrix, LinAlgError};
use crate::rootdata::{RootSystem, WeightVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("pi1 generator {index} has length {found}, expected {expected}")]
    InvalidGenerator {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("lattice consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// `Z^n / root lattice`, as a product of cyclic groups.
#[derive(Debug, Clone)]
pub struct CenterGroup {
    invariant_factors: Vec<u64>,
    generators: Vec<WeightVector>,
    // y -> y * v maps Z^n / root lattice onto the diagonal form
    v: IntMatrix,
    offset: usize,
    root_hnf: IntMatrix,
}

pub fn center_group(rs: &RootSystem) -> CenterGroup {
    let a = rs.cartan();
    let n = rs.rank();
    let snf = smith_normal_form(a);
    let diag: Vec<u64> = (0..n)
        .map(|i| snf.d[(i, i)].to_u64().expect("nonsingular Cartan matrix"))
        .collect();
    let offset = diag.iter().position(|&d| d > 1).unwrap_or(n);
    // generator k is row k of V^-1, i.e. the solution of x V = e_k
    let vinv = solve_integral(&snf.v, &IntMatrix::identity(n)).expect("V is unimodular");
    let (root_hnf, _) = hermite_normal_form(a);
    let mut cg = CenterGroup {
        invariant_factors: diag[offset..].to_vec(),
        generators: Vec::new(),
        v: snf.v,
        offset,
        root_hnf,
    };
    cg.generators = (offset..n)
        .map(|k| {
            let row: Vec<i64> = vinv.row(k).iter().map(|x| x.to_i64().unwrap()).collect();
            cg.canonical_rep(&WeightVector(row))
        })
        .collect();
    cg
}

impl CenterGroup {
    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn generators(&self) -> &[WeightVector] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    /// The representative of `v + root lattice` reduced against the Hermite
    /// basis of the root lattice (coordinate `k` lands in `[0, h_kk)`).
    pub fn canonical_rep(&self, v: &WeightVector) -> WeightVector {
        let n = v.len();
        let mut out = v.0.clone();
        for k in 0..n {
            let h = self.root_hnf[(k, k)].to_i64().unwrap();
            let q = Integer::div_floor(&out[k], &h);
            if q != 0 {
                for (j, o) in out.iter_mut().enumerate() {
                    *o -= q * self.root_hnf[(k, j)].to_i64().unwrap();
                }
            }
        }
        WeightVector(out)
    }

    /// Coordinates of the class of `v` in `Z/d_1 x ... x Z/d_k`.
    pub fn coordinates(&self, v: &WeightVector) -> Vec<u64> {
        let n = v.len();
        (0..self.invariant_factors.len())
            .map(|k| {
                let col = self.offset + k;
                let s: BigInt = (0..n).map(|i| BigInt::from(v.0[i]) * &self.v[(i, col)]).sum();
                s.mod_floor(&BigInt::from(self.invariant_factors[k])).to_u64().unwrap()
            })
            .collect()
    }

    /// Canonical weight representative of a coordinate tuple.
    pub fn element(&self, coords: &[u64]) -> WeightVector {
        let n = self.root_hnf.rows();
        let mut v = WeightVector::zero(n);
        for (c, g) in coords.iter().zip(&self.generators) {
            v = v.add_scaled(*c as i64, g);
        }
        self.canonical_rep(&v)
    }

    fn all_elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &d in &self.invariant_factors {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        out
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.invariant_factors)
            .map(|((x, y), d)| (x + y) % d)
            .collect()
    }

    /// Subgroup generated by the given coordinate tuples, as a sorted set.
    fn generated(&self, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
        let zero = vec![0u64; self.invariant_factors.len()];
        let mut set = BTreeSet::from([zero]);
        loop {
            let mut added = false;
            let current: Vec<_> = set.iter().cloned().collect();
            for x in &current {
                for g in gens {
                    let y = self.add(x, g);
                    added |= set.insert(y);
                }
            }
            if !added {
                return set;
            }
        }
    }

    /// Order of the subgroup generated by weight vectors.
    pub fn subgroup_order(&self, gens: &[WeightVector]) -> u64 {
        let coords: Vec<_> = gens.iter().map(|g| self.coordinates(g)).collect();
        self.generated(&coords).len() as u64
    }
}

/// One subgroup of the center, i.e. one choice of fundamental group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi1Choice {
    pub generators: Vec<WeightVector>,
    pub order: u64,
    /// Generators in the `pi1=[..;..]` syntax, or `sc` for the trivial group.
    pub label: String,
}

pub fn pi1_label(gens: &[WeightVector]) -> String {
    if gens.is_empty() {
        return "sc".to_string();
    }
    let parts: Vec<String> = gens
        .iter()
        .map(|g| g.0.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
        .collect();
    format!("pi1=[{}]", parts.join(";"))
}

/// Every subgroup of the center, trivial and full included, ordered by
/// subgroup order and then label.
pub fn enumerate_pi1_choices(c: &CenterGroup) -> Vec<Pi1Choice> {
    let elements = c.all_elements();
    let mut subgroups: BTreeSet<BTreeSet<Vec<u64>>> = BTreeSet::new();
    let mut frontier = vec![c.generated(&[])];
    while let Some(h) = frontier.pop() {
        if !subgroups.insert(h.clone()) {
            continue;
        }
        for e in &elements {
            if !h.contains(e) {
                let mut gens: Vec<_> = h.iter().cloned().collect();
                gens.push(e.clone());
                frontier.push(c.generated(&gens));
            }
        }
    }
    let mut out: Vec<Pi1Choice> = subgroups
        .into_iter()
        .map(|h| {
            // greedy generating set over elements sorted by canonical weight
            let mut members: Vec<(WeightVector, Vec<u64>)> =
                h.iter().map(|x| (c.element(x), x.clone())).collect();
            members.sort();
            let mut chosen: Vec<Vec<u64>> = Vec::new();
            let mut span = c.generated(&[]);
            for (_, x) in &members {
                if !span.contains(x) {
                    chosen.push(x.clone());
                    span = c.generated(&chosen);
                }
            }
            let generators: Vec<WeightVector> = chosen.iter().map(|x| c.element(x)).collect();
            Pi1Choice {
                label: pi1_label(&generators),
                order: h.len() as u64,
                generators,
            }
        })
        .collect();
    out.sort_by(|a, b| (a.order, &a.label).cmp(&(b.order, &b.label)));
    out
}

/// A group form: root data plus a subgroup of the center.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    root_system: Arc<RootSystem>,
    pi1_generators: Vec<WeightVector>,
    // Distinguishes the adjoint basis choice when the center is trivial.
    declared_adjoint: bool,
}

impl GroupSpec {
    /// Generators are reduced to canonical coset representatives; zero
    /// classes are dropped.
    pub fn new(root_system: Arc<RootSystem>, pi1_generators: Vec<WeightVector>) -> Result<Self, LatticeError> {
        let n = root_system.rank();
        for (index, g) in pi1_generators.iter().enumerate() {
            if g.len() != n {
                return Err(LatticeError::InvalidGenerator {
                    index,
                    expected: n,
                    found: g.len(),
                });
            }
        }
        let center = center_group(&root_system);
        let mut gens: Vec<WeightVector> = Vec::new();
        for g in pi1_generators {
            let r = center.canonical_rep(&g);
            if !r.is_zero() && !gens.contains(&r) {
                gens.push(r);
            }
        }
        Ok(GroupSpec {
            root_system,
            pi1_generators: gens,
            declared_adjoint: false,
        })
    }

    pub fn simply_connected(root_system: Arc<RootSystem>) -> Self {
        GroupSpec {
            root_system,
            pi1_generators: Vec::new(),
            declared_adjoint: false,
        }
    }

    pub fn adjoint(root_system: Arc<RootSystem>) -> Self {
        let gens = center_group(&root_system).generators().to_vec();
        GroupSpec {
            root_system,
            pi1_generators: gens,
            declared_adjoint: true,
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        Arc::clone(&self.root_system)
    }

    pub fn pi1_generators(&self) -> &[WeightVector] {
        &self.pi1_generators
    }

    pub fn rank(&self) -> usize {
        self.root_system.rank()
    }

    pub fn center(&self) -> CenterGroup {
        center_group(&self.root_system)
    }

    /// `|pi_1(G)|`, the order of the chosen center subgroup.
    pub fn pi1_order(&self) -> u64 {
        self.center().subgroup_order(&self.pi1_generators)
    }

    pub fn is_simply_connected(&self) -> bool {
        self.pi1_order() == 1
    }

    pub fn is_adjoint(&self) -> bool {
        self.pi1_order() == self.center().order()
    }

    /// True when built with [`GroupSpec::adjoint`]. For types with trivial
    /// center the group is both simply connected and adjoint; this flag
    /// selects the fundamental weights as the preferred unit-lattice basis.
    pub fn declared_adjoint(&self) -> bool {
        self.declared_adjoint
    }

    /// Generators of the unit lattice as rows: the simple roots followed by
    /// the pi1 generators.
    fn lattice_generators(&self) -> IntMatrix {
        let extra = IntMatrix::from_rows(
            &self.pi1_generators.iter().map(|g| g.0.clone()).collect::<Vec<_>>(),
        );
        if extra.rows() == 0 {
            self.root_system.cartan().clone()
        } else {
            self.root_system.cartan().vstack(&extra).expect("matching widths")
        }
    }

    pub fn label(&self) -> String {
        let t = self.root_system.lie_type();
        if self.declared_adjoint || (self.is_adjoint() && !self.is_simply_connected()) {
            format!("{t}:adj")
        } else if self.is_simply_connected() {
            format!("{t}:sc")
        } else {
            format!("{t}:{}", pi1_label(&self.pi1_generators))
        }
    }
}

/// How the ordered basis of the unit lattice is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThetaChoice {
    /// Simple roots for simply connected groups, fundamental weights for
    /// adjoint ones, Hermite basis otherwise.
    #[default]
    Preferred,
    /// Always the Hermite normal form basis.
    Hermite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitLatticeBasis {
    /// Rows are the basis vectors in weight coordinates.
    pub theta: IntMatrix,
}

pub fn unit_lattice_basis(g: &GroupSpec, choice: ThetaChoice) -> Result<UnitLatticeBasis, LatticeError> {
    let n = g.rank();
    if choice == ThetaChoice::Preferred {
        if g.declared_adjoint || (g.is_adjoint() && !g.is_simply_connected()) {
            return Ok(UnitLatticeBasis {
                theta: IntMatrix::identity(n),
            });
        }
        if g.is_simply_connected() {
            return Ok(UnitLatticeBasis {
                theta: g.root_system.cartan().clone(),
            });
        }
    }
    let (h, _) = hermite_normal_form(&g.lattice_generators());
    let rows: Vec<BigInt> = (0..n).flat_map(|i| h.row(i).to_vec()).collect();
    let theta = IntMatrix::from_vec(n, n, rows);
    if (n..h.rows()).any(|i| h.row(i).iter().any(|x| !x.is_zero())) {
        return Err(LatticeError::Inconsistent("unit lattice has rank above n".into()));
    }
    Ok(UnitLatticeBasis { theta })
}

/// `C = A * theta^-1`: simple roots expressed in the unit-lattice basis.
pub fn transition_matrix_for(g: &GroupSpec, basis: &UnitLatticeBasis) -> Result<IntMatrix, LatticeError> {
    // C theta = A  <=>  theta^T C^T = A^T
    let ct = solve_integral(&basis.theta.transpose(), &g.root_system.cartan().transpose()).map_err(|e| match e {
        LinAlgError::NonIntegral => {
            LatticeError::Inconsistent("root lattice not contained in unit lattice".into())
        }
        other => LatticeError::LinAlg(other),
    })?;
    Ok(ct.transpose())
}

pub fn transition_matrix(g: &GroupSpec) -> Result<IntMatrix, LatticeError> {
    let basis = unit_lattice_basis(g, ThetaChoice::Preferred)?;
    transition_matrix_for(g, &basis)
}

/// Product of the nonzero Smith invariants: the index in `Z^n` of the row
/// lattice of a full-rank generator matrix.
fn index_in_weight_lattice(m: &IntMatrix) -> BigInt {
    smith_normal_form(m).invariant_factors().iter().product()
}

/// `[unit lattice : root lattice]`, computed from Smith forms alone.
pub fn lattice_index(g: &GroupSpec) -> u64 {
    let full = index_in_weight_lattice(g.root_system.cartan());
    let unit = index_in_weight_lattice(&g.lattice_generators());
    let (q, r) = full.div_rem(&unit);
    assert!(r.is_zero(), "unit lattice index must divide the center order");
    q.to_u64().unwrap()
}

/// Checks `root lattice ⊆ rows(theta) ⊆ Z^n` by integral solvability.
pub fn check_sandwich(g: &GroupSpec, basis: &UnitLatticeBasis) -> bool {
    // theta has integer entries, so its rows already lie in Z^n
    let nonsingular = basis.theta.det().map(|d| !d.is_zero()).unwrap_or(false);
    nonsingular && transition_matrix_for(g, basis).is_ok()
}
