use thiserror::Error;
use transgress_core::exactlin::prime_divisors;
use transgress_core::lattices::{self, GroupSpec, LatticeError, ThetaChoice};
use transgress_core::rootdata::Convention;
use transgress_core::spectral::{self, Coefficients, PageOptions, SpectralError, DEFAULT_WEYL_CAP};
use transgress_core::transgression::{self, format_combination, symmetric_lift, TransgressionError};

use crate::document::*;
use crate::spec::{self, SpecError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Transgression(#[from] TransgressionError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("invalid coefficients '{0}': expected 'q' or a prime")]
    Coefficients(String),
    #[error("{0}")]
    Fixtures(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for refused computations, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spectral(SpectralError::CapExceeded { .. }) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub convention: Convention,
    pub jobs: usize,
    pub force: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            convention: Convention::Bourbaki,
            jobs: 0,
            force: false,
        }
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}_{i}")).collect()
}

fn echo(input: &str, g: &GroupSpec) -> GroupEcho {
    GroupEcho {
        input: input.to_string(),
        canonical: g.label(),
        lie_type: g.root_system().lie_type().to_string(),
        rank: g.rank(),
        pi1_generators: g.pi1_generators().iter().map(|v| v.0.clone()).collect(),
    }
}

fn convention_note(c: Convention) -> String {
    match c {
        Convention::Bourbaki => "Cartan entry (i,j) is <alpha_i^vee, alpha_j>; row i is alpha_i in fundamental weight coordinates fw_j".into(),
        Convention::Transposed => "Cartan matrix transposed: entry (i,j) is <alpha_j^vee, alpha_i>".into(),
    }
}

fn theta_note(g: &GroupSpec) -> String {
    let source = if g.declared_adjoint() || (g.is_adjoint() && !g.is_simply_connected()) {
        "fundamental weights (adjoint form)"
    } else if g.is_simply_connected() {
        "simple roots (simply connected form)"
    } else {
        "Hermite normal form of the simple roots and pi1 generators"
    };
    format!("unit lattice basis Theta: {source}")
}

pub fn cmd_describe(input: &str, opts: RunOptions) -> Result<ResultDocument, CliError> {
    let g = spec::parse_group(input, opts.convention)?;
    let rs = g.root_system();
    let n = g.rank();
    let basis = lattices::unit_lattice_basis(&g, ThetaChoice::Preferred)?;
    let c = lattices::transition_matrix_for(&g, &basis)?;
    let payload = DescribePayload {
        cartan: LabeledMatrix::new(rs.cartan(), labels("alpha", n), labels("fw", n)),
        simple_roots: rs.simple_roots().iter().map(|v| v.0.clone()).collect(),
        center_invariant_factors: g.center().invariant_factors().to_vec(),
        theta: LabeledMatrix::new(&basis.theta, labels("theta", n), labels("fw", n)),
        transition: LabeledMatrix::new(&c, labels("alpha", n), labels("theta", n)),
        pi1_order: g.pi1_order(),
        weyl_order: rs.lie_type().weyl_order() as u64,
        dimension: rs.lie_type().group_dimension(),
    };
    Ok(ResultDocument {
        schema_version: SCHEMA_VERSION,
        group: echo(input, &g),
        result: Computation::Describe(payload),
        provenance: vec![convention_note(opts.convention), theta_note(&g)],
    })
}

fn describe_vectors(vs: &[Vec<i64>], labels: &[String]) -> Vec<String> {
    vs.iter().map(|v| format_combination(v, labels)).collect()
}

pub fn cmd_transgression(input: &str, modulus: Option<u64>, opts: RunOptions) -> Result<ResultDocument, CliError> {
    let g = spec::parse_group(input, opts.convention)?;
    let tau = transgression::transgression_matrix(&g)?;
    let det = tau.det();
    let images = (0..tau.rank())
        .map(|i| format!("tau({}) = {}", tau.domain_labels[i], tau.describe_row(i)))
        .collect();
    let modp = match modulus {
        None => None,
        Some(p) => {
            let a = transgression::modp_analysis_of(&tau, p)?;
            let kernel: Vec<Vec<i64>> = a.kernel.basis.iter().map(|v| symmetric_lift(v, p)).collect();
            let cokernel: Vec<Vec<i64>> = a.cokernel.basis.iter().map(|v| symmetric_lift(v, p)).collect();
            Some(ModPPayload {
                p,
                kernel_described: describe_vectors(&kernel, &tau.domain_labels),
                cokernel_described: describe_vectors(&cokernel, &tau.codomain_labels),
                kernel,
                cokernel,
                is_isomorphism: a.is_isomorphism,
            })
        }
    };
    let mut provenance = vec![
        convention_note(opts.convention),
        theta_note(&g),
        "row i lists tau(t_i) in the Schubert basis w_1..w_n; the matrix is the transpose of C(Theta)".into(),
    ];
    if modp.is_some() {
        provenance.push("kernel in the t basis; cokernel as complement representatives in the w basis".into());
    }
    Ok(ResultDocument {
        schema_version: SCHEMA_VERSION,
        group: echo(input, &g),
        result: Computation::Transgression(TransgressionPayload {
            matrix: LabeledMatrix::new(&tau.matrix, tau.domain_labels.clone(), tau.codomain_labels.clone()),
            determinant: i64::try_from(&det).expect("small determinant"),
            images,
            singular_primes: prime_divisors(&det),
            modp,
        }),
        provenance,
    })
}

pub fn parse_coefficients(text: &str) -> Result<Coefficients, CliError> {
    match text {
        "q" | "Q" => Ok(Coefficients::Rational),
        _ => text
            .parse::<u64>()
            .map(Coefficients::ModP)
            .map_err(|_| CliError::Coefficients(text.to_string())),
    }
}

pub fn cmd_e3(
    input: &str,
    coefficients: Coefficients,
    max_degree: Option<usize>,
    bidegrees: bool,
    opts: RunOptions,
) -> Result<ResultDocument, CliError> {
    let g = spec::parse_group(input, opts.convention)?;
    let page_opts = PageOptions {
        weyl_cap: if opts.force { usize::MAX } else { DEFAULT_WEYL_CAP },
        jobs: opts.jobs,
    };
    let page = spectral::build_e2(&g, coefficients, max_degree, page_opts)?;
    let graded = spectral::e3_ranks(&page)?;
    let ranks: Vec<DegreeRank> = graded
        .ranks
        .iter()
        .map(|(&degree, &rank)| DegreeRank { degree, rank })
        .collect();
    let bidegrees = bidegrees.then(|| {
        graded
            .bidegrees
            .iter()
            .map(|(&(s, t), &rank)| BidegreeRank { s, t, rank })
            .collect()
    });
    Ok(ResultDocument {
        schema_version: SCHEMA_VERSION,
        group: echo(input, &g),
        result: Computation::E3(E3Payload {
            coefficients: coefficients.to_string(),
            max_degree: page.max_total_degree,
            weyl_order: g.root_system().lie_type().weyl_order() as u64,
            poincare: poincare_string(&ranks),
            ranks,
            bidegrees,
        }),
        provenance: vec![
            convention_note(opts.convention),
            "E3 is the homology of d2 on H*(G/T) (x) Lambda(t_1..t_n); Schubert products by the Chevalley rule".into(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn payload_describe(spec: &str) -> DescribePayload {
        match cmd_describe(spec, RunOptions::default()).unwrap().result {
            Computation::Describe(d) => d,
            _ => unreachable!(),
        }
    }

    fn payload_tau(spec: &str, p: Option<u64>) -> TransgressionPayload {
        match cmd_transgression(spec, p, RunOptions::default()).unwrap().result {
            Computation::Transgression(t) => t,
            _ => unreachable!(),
        }
    }

    #[test]
    fn describe_a2_adj() {
        let d = payload_describe("A2:adj");
        assert_eq!(d.center_invariant_factors, vec![3]);
        assert_eq!(d.theta.entries, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(d.pi1_order, 3);
    }

    #[test]
    fn describe_c3_sc() {
        let d = payload_describe("C3:sc");
        assert_eq!(d.pi1_order, 1);
        assert_eq!(d.transition.entries, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(d.cartan.entries[1][2], -2);
    }

    #[test]
    fn describe_rejects_bad_family() {
        let err = cmd_describe("X9", RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("byte 0"), "{err}");
    }

    #[test]
    fn tau_examples() {
        let m = payload_tau("C2:adj", Some(2)).modp.unwrap();
        assert_eq!(m.kernel, vec![vec![0, 1]]);
        assert_eq!(m.kernel_described, vec!["t_2"]);
        assert_eq!(m.cokernel_described, vec!["w_1"]);

        let e6 = payload_tau("E6:adj", Some(3));
        assert_eq!(e6.singular_primes, vec![3]);
        let m = e6.modp.unwrap();
        assert_eq!(m.kernel.len(), 1);
        let k = &m.kernel[0];
        let target = [1, 0, -1, 0, 1, -1];
        // kernel is one-dimensional, so its generator is a multiple of the target
        assert!(k == &target.to_vec() || k.iter().zip(target).all(|(a, b)| *a == -b), "{k:?}");

        assert!(payload_tau("A3:sc", Some(5)).modp.unwrap().is_isomorphism);
        assert!(cmd_transgression("A3:sc", Some(9), RunOptions::default()).is_err());
    }

    #[test]
    fn e3_cap() {
        let err = cmd_e3("E6", Coefficients::Rational, Some(3), false, RunOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("51840"));
    }

    #[test]
    fn coefficients() {
        assert_eq!(parse_coefficients("q").unwrap(), Coefficients::Rational);
        assert_eq!(parse_coefficients("3").unwrap(), Coefficients::ModP(3));
        assert!(parse_coefficients("z").is_err());
    }
}
