//! Regression fixture corpus.
//!
//! A corpus is a JSON object:
//!
//! ```json
//! {
//!   "description": "free text",
//!   "convention": "bourbaki",
//!   "fixtures": [
//!     { "name": "Sp(2) mod 2", "kind": "modp", "group": "C2:adj", "p": 2,
//!       "kernel_dim": 1, "cokernel_dim": 1,
//!       "kernel_contains": [[0, 1]], "cokernel_generated_by": [[1, 0]] }
//!   ]
//! }
//! ```
//!
//! `convention` is `bourbaki` (default) or `transposed`; the latter builds every
//! root system from the transposed Cartan matrix. Fixture kinds:
//!
//! - `modp`: kernel/cokernel dimensions of the transgression mod `p`, listed
//!   kernel members, and cokernel generators (each must generate on its own).
//! - `extreme_forms`: for all types up to `max_rank`, the simply connected
//!   matrix is the identity and the adjoint one is the Cartan transpose.
//! - `determinant_law`: for all types up to `max_rank` and every subgroup of
//!   the center, `|det| = [unit lattice : root lattice]`, and the map is an
//!   isomorphism mod each of `primes` exactly when the prime misses the index.
//! - `singular_primes`: the primes where the map is singular include `contains`.
//! - `e3`: E3 ranks over `coeff` (`"q"` or a prime); compared with `expected`
//!   if given, otherwise with the exterior algebra on the Weyl degrees.
//! - `d2_squared`: `d2 ∘ d2 = 0` on the whole page.
//! - `root_counts`: number of roots for all types up to `max_rank` against the
//!   closed formulas.
//! - `snf_random`: Smith form properties on `count` seeded random matrices.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use transgress_core::exactlin::{smith_normal_form, IntMatrix};
use transgress_core::lattices::{center_group, enumerate_pi1_choices, lattice_index, GroupSpec};
use transgress_core::rootdata::{Convention, Family, LieType, RootSystem};
use transgress_core::spectral::{self, PageOptions, DEFAULT_WEYL_CAP};
use transgress_core::transgression::{self, kac_contradiction_report};

use crate::commands::{parse_coefficients, CliError};
use crate::spec;

pub const DEFAULT_CORPUS: &str = include_str!("../fixtures/corpus.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusConvention {
    #[default]
    Bourbaki,
    Transposed,
}

impl From<CorpusConvention> for Convention {
    fn from(c: CorpusConvention) -> Self {
        match c {
            CorpusConvention::Bourbaki => Convention::Bourbaki,
            CorpusConvention::Transposed => Convention::Transposed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub convention: CorpusConvention,
    pub fixtures: Vec<Fixture>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Fixture {
    Modp {
        name: String,
        group: String,
        p: u64,
        kernel_dim: usize,
        cokernel_dim: usize,
        #[serde(default)]
        kernel_contains: Vec<Vec<i64>>,
        #[serde(default)]
        cokernel_generated_by: Vec<Vec<i64>>,
    },
    ExtremeForms {
        name: String,
        max_rank: usize,
    },
    DeterminantLaw {
        name: String,
        max_rank: usize,
        primes: Vec<u64>,
    },
    SingularPrimes {
        name: String,
        group: String,
        contains: Vec<u64>,
    },
    E3 {
        name: String,
        group: String,
        coeff: String,
        #[serde(default)]
        expected: Option<Vec<usize>>,
    },
    D2Squared {
        name: String,
        group: String,
        coeff: String,
    },
    RootCounts {
        name: String,
        max_rank: usize,
    },
    SnfRandom {
        name: String,
        seed: u64,
        count: usize,
    },
}

impl Fixture {
    pub fn name(&self) -> &str {
        match self {
            Fixture::Modp { name, .. }
            | Fixture::ExtremeForms { name, .. }
            | Fixture::DeterminantLaw { name, .. }
            | Fixture::SingularPrimes { name, .. }
            | Fixture::E3 { name, .. }
            | Fixture::D2Squared { name, .. }
            | Fixture::RootCounts { name, .. }
            | Fixture::SnfRandom { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub schema_version: u32,
    pub convention: CorpusConvention,
    pub outcomes: Vec<FixtureOutcome>,
}

impl FixtureReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.passed).count()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            match &o.detail {
                None => out.push_str(&format!("PASS {}\n", o.name)),
                Some(d) => out.push_str(&format!("FAIL {}: {d}\n", o.name)),
            }
        }
        out.push_str(&format!(
            "{} passed, {} failed\n",
            self.outcomes.len() - self.failures(),
            self.failures()
        ));
        out
    }
}

pub fn parse_corpus(text: &str) -> Result<Corpus, CliError> {
    let corpus: Corpus =
        serde_json::from_str(text).map_err(|e| CliError::Fixtures(format!("invalid fixture corpus: {e}")))?;
    if corpus.fixtures.is_empty() {
        return Err(CliError::Fixtures("no fixtures".into()));
    }
    Ok(corpus)
}

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn group(text: &str, c: Convention) -> Result<GroupSpec, String> {
    spec::parse_group(text, c).map_err(|e| e.to_string())
}

fn root_system(t: LieType, c: Convention) -> Arc<RootSystem> {
    Arc::new(RootSystem::with_convention(t, c))
}

fn classical_root_count(t: LieType) -> usize {
    let n = t.rank();
    match t.family() {
        Family::A => n * (n + 1),
        Family::B | Family::C => 2 * n * n,
        Family::D => 2 * n * (n - 1),
        Family::E => [72, 126, 240][n - 6],
        Family::F => 48,
        Family::G => 12,
    }
}

fn check_snf(seed: u64, count: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..count {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        let umv = s.u.mul(&m).and_then(|x| x.mul(&s.v)).map_err(|e| e.to_string())?;
        ensure(umv == s.d, || format!("case {case}: U M V != D"))?;
        ensure(s.u.is_unimodular() && s.v.is_unimodular(), || format!("case {case}: not unimodular"))?;
        let d = s.d.to_i64_rows().ok_or_else(|| format!("case {case}: oversized entries"))?;
        let off_diagonal_zero = (0..r).all(|i| (0..c).all(|j| i == j || d[i][j] == 0));
        ensure(off_diagonal_zero, || format!("case {case}: off-diagonal entry"))?;
        let d: Vec<i64> = (0..r.min(c)).map(|i| d[i][i]).collect();
        for w in d.windows(2) {
            let ok = w[0] >= 0 && if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 };
            ensure(ok, || format!("case {case}: diagonal {d:?}"))?;
        }
    }
    Ok(())
}

fn run_fixture(f: &Fixture, c: Convention, jobs: usize) -> Check {
    match f {
        Fixture::Modp {
            group: g,
            p,
            kernel_dim,
            cokernel_dim,
            kernel_contains,
            cokernel_generated_by,
            ..
        } => {
            let a = transgression::modp_analysis(&group(g, c)?, *p).map_err(|e| e.to_string())?;
            ensure(a.kernel.dim() == *kernel_dim, || format!("kernel dimension {}", a.kernel.dim()))?;
            ensure(a.cokernel.dim() == *cokernel_dim, || format!("cokernel dimension {}", a.cokernel.dim()))?;
            for v in kernel_contains {
                ensure(a.kernel_contains(v), || format!("{v:?} not in the kernel"))?;
            }
            for v in cokernel_generated_by {
                ensure(a.generates_cokernel(v), || format!("{v:?} does not generate the cokernel"))?;
            }
            Ok(())
        }
        Fixture::ExtremeForms { max_rank, .. } => {
            for t in LieType::all_up_to(*max_rank) {
                let rs = root_system(t, c);
                let sc = transgression::transgression_matrix(&GroupSpec::simply_connected(rs.clone()))
                    .map_err(|e| e.to_string())?;
                ensure(sc.matrix.is_identity(), || format!("{t}:sc is not the identity"))?;
                let adj =
                    transgression::transgression_matrix(&GroupSpec::adjoint(rs.clone())).map_err(|e| e.to_string())?;
                ensure(adj.matrix == rs.cartan().transpose(), || format!("{t}:adj is not the Cartan transpose"))?;
            }
            Ok(())
        }
        Fixture::DeterminantLaw { max_rank, primes, .. } => {
            for t in LieType::all_up_to(*max_rank) {
                let rs = root_system(t, c);
                for choice in enumerate_pi1_choices(&center_group(&rs)) {
                    let g = GroupSpec::new(rs.clone(), choice.generators.clone()).map_err(|e| e.to_string())?;
                    let tau = transgression::transgression_matrix(&g).map_err(|e| e.to_string())?;
                    let det = tau.det();
                    let index = lattice_index(&g);
                    let det_abs = i64::try_from(&det).map_err(|e| e.to_string())?.unsigned_abs();
                    ensure(det_abs == index, || format!("{t}:{}: |det| {det_abs}, index {index}", choice.label))?;
                    for &p in primes {
                        let iso = transgression::modp_analysis_of(&tau, p)
                            .map_err(|e| e.to_string())?
                            .is_isomorphism;
                        ensure(iso == (index % p != 0), || format!("{t}:{} mod {p}", choice.label))?;
                    }
                }
            }
            Ok(())
        }
        Fixture::SingularPrimes { group: g, contains, .. } => {
            let found = kac_contradiction_report(&group(g, c)?).map_err(|e| e.to_string())?;
            ensure(contains.iter().all(|p| found.contains(p)), || format!("singular primes {found:?}"))
        }
        Fixture::E3 {
            group: g,
            coeff,
            expected,
            ..
        } => {
            let g = group(g, c)?;
            let coeff = parse_coefficients(coeff).map_err(|e| e.to_string())?;
            let opts = PageOptions {
                weyl_cap: DEFAULT_WEYL_CAP,
                jobs,
            };
            let page = spectral::build_e2(&g, coeff, None, opts).map_err(|e| e.to_string())?;
            let got = spectral::e3_ranks(&page).map_err(|e| e.to_string())?.as_vec();
            let want = match expected {
                Some(v) => v.clone(),
                None => {
                    let wg = spectral::weyl_group(g.root_system(), DEFAULT_WEYL_CAP).map_err(|e| e.to_string())?;
                    let degrees = spectral::weyl_degrees(&wg).map_err(|e| e.to_string())?;
                    spectral::exterior_poincare(&degrees, page.max_total_degree)
                }
            };
            ensure(got == want, || format!("ranks {got:?}, expected {want:?}"))
        }
        Fixture::D2Squared { group: g, coeff, .. } => {
            let coeff = parse_coefficients(coeff).map_err(|e| e.to_string())?;
            let opts = PageOptions {
                weyl_cap: DEFAULT_WEYL_CAP,
                jobs,
            };
            let page = spectral::build_e2(&group(g, c)?, coeff, None, opts).map_err(|e| e.to_string())?;
            ensure(page.d2_squares_zero(), || "d2 d2 != 0".into())
        }
        Fixture::RootCounts { max_rank, .. } => {
            for t in LieType::all_up_to(*max_rank) {
                let found = RootSystem::with_convention(t, c).roots().len();
                ensure(found == classical_root_count(t), || format!("{t}: {found} roots"))?;
            }
            Ok(())
        }
        Fixture::SnfRandom { seed, count, .. } => check_snf(*seed, *count),
    }
}

/// Runs every fixture; `override_convention` replaces the corpus setting.
pub fn run_corpus(corpus: &Corpus, override_convention: Option<CorpusConvention>, jobs: usize) -> FixtureReport {
    let convention = override_convention.unwrap_or(corpus.convention);
    let outcomes = corpus
        .fixtures
        .iter()
        .map(|f| {
            let result = run_fixture(f, convention.into(), jobs);
            FixtureOutcome {
                name: f.name().to_string(),
                passed: result.is_ok(),
                detail: result.err(),
            }
        })
        .collect();
    FixtureReport {
        schema_version: crate::document::SCHEMA_VERSION,
        convention,
        outcomes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_corpus_passes() {
        let corpus = parse_corpus(DEFAULT_CORPUS).unwrap();
        let report = run_corpus(&corpus, None, 0);
        assert!(report.all_passed(), "{}", report.render_text());
    }

    #[test]
    fn transposed_convention_fails_sp_rows() {
        let corpus = parse_corpus(DEFAULT_CORPUS).unwrap();
        let report = run_corpus(&corpus, Some(CorpusConvention::Transposed), 0);
        let sp: Vec<_> = report.outcomes.iter().filter(|o| o.name.starts_with("Sp(")).collect();
        assert!(!sp.is_empty());
        assert!(sp.iter().all(|o| !o.passed), "{}", report.render_text());
    }

    #[test]
    fn empty_corpus() {
        let err = parse_corpus(r#"{"fixtures": []}"#).unwrap_err();
        assert_eq!(err.to_string(), "no fixtures");
    }

    #[test]
    fn failing_fixture_reports_detail() {
        let corpus = parse_corpus(
            r#"{"fixtures": [{"kind": "singular_primes", "name": "bogus", "group": "A2:sc", "contains": [2]}]}"#,
        )
        .unwrap();
        let report = run_corpus(&corpus, None, 0);
        assert_eq!(report.failures(), 1);
        assert!(report.render_text().starts_with("FAIL bogus: singular primes []"));
    }
}
