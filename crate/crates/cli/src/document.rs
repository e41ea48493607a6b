//! Versioned JSON results and their plain-text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use transgress_core::exactlin::IntMatrix;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub group: GroupEcho,
    #[serde(flatten)]
    pub result: Computation,
    /// Conventions that the payload depends on.
    pub provenance: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupEcho {
    /// The spec as typed.
    pub input: String,
    /// Canonical spec of the parsed group.
    pub canonical: String,
    pub lie_type: String,
    pub rank: usize,
    pub pi1_generators: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Computation {
    Describe(DescribePayload),
    Transgression(TransgressionPayload),
    E3(E3Payload),
}

/// Row-major integer matrix with basis labels for both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledMatrix {
    pub rows: usize,
    pub cols: usize,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub entries: Vec<Vec<i64>>,
}

impl LabeledMatrix {
    pub fn new(m: &IntMatrix, row_labels: Vec<String>, col_labels: Vec<String>) -> Self {
        LabeledMatrix {
            rows: m.rows(),
            cols: m.cols(),
            row_labels,
            col_labels,
            entries: m.to_i64_rows().expect("entries fit in i64"),
        }
    }

    pub fn render(&self) -> String {
        let width = self
            .entries
            .iter()
            .flatten()
            .map(|x| x.to_string().len())
            .chain(self.col_labels.iter().map(String::len))
            .max()
            .unwrap_or(1);
        let label_width = self.row_labels.iter().map(String::len).max().unwrap_or(0);
        let mut out = format!("{:label_width$}", "");
        for c in &self.col_labels {
            write!(out, " {c:>width$}").unwrap();
        }
        out.push('\n');
        for (label, row) in self.row_labels.iter().zip(&self.entries) {
            write!(out, "{label:label_width$}").unwrap();
            for x in row {
                write!(out, " {x:>width$}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescribePayload {
    pub cartan: LabeledMatrix,
    pub simple_roots: Vec<Vec<i64>>,
    pub center_invariant_factors: Vec<u64>,
    pub theta: LabeledMatrix,
    pub transition: LabeledMatrix,
    pub pi1_order: u64,
    pub weyl_order: u64,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransgressionPayload {
    pub matrix: LabeledMatrix,
    pub determinant: i64,
    pub images: Vec<String>,
    pub singular_primes: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modp: Option<ModPPayload>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModPPayload {
    pub p: u64,
    /// Generators in the `t` basis, lifted to `(-p/2, p/2]`.
    pub kernel: Vec<Vec<i64>>,
    pub kernel_described: Vec<String>,
    /// Representatives of a basis of the cokernel in the `w` basis.
    pub cokernel: Vec<Vec<i64>>,
    pub cokernel_described: Vec<String>,
    pub is_isomorphism: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRank {
    pub degree: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidegreeRank {
    pub s: usize,
    pub t: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct E3Payload {
    pub coefficients: String,
    pub max_degree: usize,
    pub weyl_order: u64,
    pub ranks: Vec<DegreeRank>,
    pub poincare: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bidegrees: Option<Vec<BidegreeRank>>,
}

/// `1 + q^3 + 2 q^5`, terms with zero coefficient omitted.
pub fn poincare_string(ranks: &[DegreeRank]) -> String {
    let terms: Vec<String> = ranks
        .iter()
        .filter(|r| r.rank > 0)
        .map(|r| match (r.rank, r.degree) {
            (c, 0) => c.to_string(),
            (1, 1) => "q".to_string(),
            (c, 1) => format!("{c} q"),
            (1, d) => format!("q^{d}"),
            (c, d) => format!("{c} q^{d}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

impl ResultDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("group {} ({})\n", self.group.canonical, self.group.lie_type);
        match &self.result {
            Computation::Describe(d) => {
                out.push_str("Cartan matrix:\n");
                out.push_str(&d.cartan.render());
                out.push_str("simple roots (fundamental weight coordinates):\n");
                for (i, r) in d.simple_roots.iter().enumerate() {
                    writeln!(out, "  alpha_{} = {r:?}", i + 1).unwrap();
                }
                writeln!(out, "center invariant factors: {:?}", d.center_invariant_factors).unwrap();
                writeln!(out, "|pi1| = {}", d.pi1_order).unwrap();
                out.push_str("unit lattice basis Theta (rows):\n");
                out.push_str(&d.theta.render());
                out.push_str("transition matrix C(Theta):\n");
                out.push_str(&d.transition.render());
                writeln!(out, "|W| = {}, dim G = {}", d.weyl_order, d.dimension).unwrap();
            }
            Computation::Transgression(t) => {
                out.push_str("transgression matrix (row i = tau(t_i)):\n");
                out.push_str(&t.matrix.render());
                for line in &t.images {
                    writeln!(out, "  {line}").unwrap();
                }
                writeln!(out, "det = {}", t.determinant).unwrap();
                writeln!(out, "singular primes: {:?}", t.singular_primes).unwrap();
                if let Some(m) = &t.modp {
                    writeln!(out, "mod {}:", m.p).unwrap();
                    writeln!(out, "  kernel: {}", braces(&m.kernel_described)).unwrap();
                    writeln!(out, "  cokernel: {}", braces(&m.cokernel_described)).unwrap();
                    writeln!(out, "  isomorphism: {}", m.is_isomorphism).unwrap();
                }
            }
            Computation::E3(e) => {
                writeln!(out, "E3 ranks over {} up to degree {}:", e.coefficients, e.max_degree).unwrap();
                out.push_str("degree rank\n");
                for r in &e.ranks {
                    writeln!(out, "{:>6} {:>4}", r.degree, r.rank).unwrap();
                }
                writeln!(out, "Poincare series: {}", e.poincare).unwrap();
                if let Some(b) = &e.bidegrees {
                    out.push_str("bidegrees (s, t): rank\n");
                    for x in b {
                        writeln!(out, "  ({}, {}): {}", x.s, x.t, x.rank).unwrap();
                    }
                }
            }
        }
        for note in &self.provenance {
            writeln!(out, "note: {note}").unwrap();
        }
        out
    }
}

fn braces(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultDocument {
        let m = IntMatrix::from_rows(&[[2, -1], [-1, 2]]);
        ResultDocument {
            schema_version: SCHEMA_VERSION,
            group: GroupEcho {
                input: "A2:adj".into(),
                canonical: "A2:adj".into(),
                lie_type: "A2".into(),
                rank: 2,
                pi1_generators: vec![vec![1, 0]],
            },
            result: Computation::Transgression(TransgressionPayload {
                matrix: LabeledMatrix::new(&m, vec!["t_1".into(), "t_2".into()], vec!["w_1".into(), "w_2".into()]),
                determinant: 3,
                images: vec!["tau(t_1) = 2 w_1 - w_2".into()],
                singular_primes: vec![3],
                modp: Some(ModPPayload {
                    p: 3,
                    kernel: vec![vec![1, 1]],
                    kernel_described: vec!["t_1 + t_2".into()],
                    cokernel: vec![vec![1, 0]],
                    cokernel_described: vec!["w_1".into()],
                    is_isomorphism: false,
                }),
            }),
            provenance: vec!["note".into()],
        }
    }

    #[test]
    fn round_trip() {
        let doc = sample();
        let json = doc.to_json();
        assert_eq!(ResultDocument::from_json(&json).unwrap(), doc);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["kind"], "transgression");
        assert_eq!(v["payload"]["matrix"]["rows"], 2);
        assert_eq!(v["payload"]["matrix"]["entries"][0][1], -1);
    }

    #[test]
    fn e3_round_trip() {
        let ranks = vec![DegreeRank { degree: 0, rank: 1 }, DegreeRank { degree: 3, rank: 1 }];
        let mut doc = sample();
        doc.result = Computation::E3(E3Payload {
            coefficients: "Q".into(),
            max_degree: 3,
            weyl_order: 2,
            poincare: poincare_string(&ranks),
            ranks,
            bidegrees: Some(vec![BidegreeRank { s: 2, t: 1, rank: 1 }]),
        });
        assert_eq!(ResultDocument::from_json(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn poincare_formatting() {
        let r = |degree, rank| DegreeRank { degree, rank };
        assert_eq!(poincare_string(&[r(0, 1), r(1, 0), r(3, 1)]), "1 + q^3");
        assert_eq!(poincare_string(&[r(0, 1), r(1, 2), r(2, 1)]), "1 + 2 q + q^2");
        assert_eq!(poincare_string(&[]), "0");
    }

    #[test]
    fn matrix_rendering() {
        let m = LabeledMatrix::new(
            &IntMatrix::from_rows(&[[2, -1], [-1, 2]]),
            vec!["t_1".into(), "t_2".into()],
            vec!["w_1".into(), "w_2".into()],
        );
        assert_eq!(m.render(), "    w_1 w_2\nt_1   2  -1\nt_2  -1   2\n");
    }
}
