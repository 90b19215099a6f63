//! Step outputs and their text and JSON renderings.

use std::fmt::Write;

use densprob_core::{DensityMatrix, KetTable, Partition};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct RunReport {
    pub steps: Vec<StepOutput>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepOutput {
    pub id: String,
    pub op: String,
    pub output: Output,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixOut {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl From<&DensityMatrix> for MatrixOut {
    fn from(m: &DensityMatrix) -> Self {
        MatrixOut { labels: m.space().labels().to_vec(), rows: m.rows() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeOut {
    pub value: f64,
    pub probability: f64,
    pub post_state: MatrixOut,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisOut {
    pub name: String,
    pub labels: Vec<String>,
    pub vectors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Output {
    Scalar { value: f64 },
    Bool { value: bool },
    Vector { labels: Vec<String>, values: Vec<f64> },
    Matrix(MatrixOut),
    Partition { blocks: Vec<Vec<String>>, probabilities: Vec<f64> },
    Outcomes { outcomes: Vec<OutcomeOut> },
    Entropy { before: f64, after: f64, created: f64, zeroed_square_sum: f64 },
    Projection { probability: f64, post_state: MatrixOut },
    /// Exact integers are carried as decimal strings.
    Count { value: String },
    Bases { bases: Vec<BasisOut> },
    KetTable { columns: Vec<String>, rows: Vec<Vec<Vec<String>>> },
    Gf2Matrix { rows: Vec<String> },
    Coords { coords: String, labels: Vec<String> },
    Summary { outcomes: usize, events: usize, partitions: usize, variables: usize, steps: usize },
}

impl Output {
    pub fn partition(p: &Partition) -> Self {
        Output::Partition {
            blocks: p.label_blocks().into_iter().map(|b| b.into_iter().map(String::from).collect()).collect(),
            probabilities: p.block_probabilities(),
        }
    }

    pub fn ket_table(t: &KetTable) -> Self {
        Output::KetTable { columns: t.columns.clone(), rows: t.rows.iter().map(|r| r.cells.clone()).collect() }
    }
}

/// Decimal with 12 digits after the point. Values that round to zero print
/// without a sign.
pub fn num(x: f64) -> String {
    let s = format!("{x:.12}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

fn braces(items: &[String]) -> String {
    format!("{{{}}}", items.join(","))
}

fn render_matrix(out: &mut String, m: &MatrixOut, indent: &str) {
    let cells: Vec<Vec<String>> = m.rows.iter().map(|r| r.iter().map(|&x| num(x)).collect()).collect();
    let label_w = m.labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
    let col_w = cells
        .iter()
        .flatten()
        .map(|c| c.len())
        .chain(m.labels.iter().map(|l| l.chars().count()))
        .max()
        .unwrap_or(0);
    let _ = write!(out, "{indent}{:label_w$}", "");
    for l in &m.labels {
        let _ = write!(out, "  {l:>col_w$}");
    }
    out.push('\n');
    for (l, row) in m.labels.iter().zip(&cells) {
        let _ = write!(out, "{indent}{l:<label_w$}");
        for c in row {
            let _ = write!(out, "  {c:>col_w$}");
        }
        out.push('\n');
    }
}

impl Output {
    pub fn render(&self, out: &mut String) {
        match self {
            Output::Scalar { value } => {
                let _ = writeln!(out, "  {}", num(*value));
            }
            Output::Bool { value } => {
                let _ = writeln!(out, "  {value}");
            }
            Output::Vector { labels, values } => {
                for (l, v) in labels.iter().zip(values) {
                    let _ = writeln!(out, "  {l}: {}", num(*v));
                }
            }
            Output::Matrix(m) => render_matrix(out, m, "  "),
            Output::Partition { blocks, probabilities } => {
                for (b, p) in blocks.iter().zip(probabilities) {
                    let _ = writeln!(out, "  {}  {}", braces(b), num(*p));
                }
            }
            Output::Outcomes { outcomes } => {
                for o in outcomes {
                    let _ = writeln!(out, "  value {}  probability {}", num(o.value), num(o.probability));
                    render_matrix(out, &o.post_state, "    ");
                }
            }
            Output::Entropy { before, after, created, zeroed_square_sum } => {
                let _ = writeln!(out, "  before             {}", num(*before));
                let _ = writeln!(out, "  after              {}", num(*after));
                let _ = writeln!(out, "  created            {}", num(*created));
                let _ = writeln!(out, "  zeroed square sum  {}", num(*zeroed_square_sum));
            }
            Output::Projection { probability, post_state } => {
                let _ = writeln!(out, "  probability {}", num(*probability));
                render_matrix(out, post_state, "  ");
            }
            Output::Count { value } => {
                let _ = writeln!(out, "  {value}");
            }
            Output::Bases { bases } => {
                for b in bases {
                    let pairs: Vec<String> =
                        b.labels.iter().zip(&b.vectors).map(|(l, v)| format!("{l}={v}")).collect();
                    let _ = writeln!(out, "  {}: {{{}}}", b.name, pairs.join(", "));
                }
            }
            Output::KetTable { columns, rows } => {
                let table = KetTable {
                    columns: columns.clone(),
                    rows: rows
                        .iter()
                        .map(|cells| densprob_core::qmsets::KetRow { coords: vec![], cells: cells.clone() })
                        .collect(),
                };
                for line in table.to_string().lines() {
                    let _ = writeln!(out, "  {}", line.trim_end());
                }
            }
            Output::Gf2Matrix { rows } => {
                for r in rows {
                    let _ = writeln!(out, "  {r}");
                }
            }
            Output::Coords { coords, labels } => {
                let _ = writeln!(out, "  {coords}  {}", braces(labels));
            }
            Output::Summary { outcomes, events, partitions, variables, steps } => {
                let _ = writeln!(
                    out,
                    "  ok: {outcomes} outcomes, {events} events, {partitions} partitions, {variables} variables, {steps} steps"
                );
            }
        }
    }
}

impl RunReport {
    pub fn push(&mut self, id: impl Into<String>, op: impl Into<String>, output: Output) {
        self.steps.push(StepOutput { id: id.into(), op: op.into(), output });
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let _ = writeln!(out, "[{}] {}", s.id, s.op);
            s.output.render(&mut out);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_twelve_digits() {
        assert_eq!(num(2.0 / 3.0), "0.666666666667");
        assert_eq!(num(-0.0), "0.000000000000");
        assert_eq!(num(-1e-17), "0.000000000000");
        assert_eq!(num(-0.5), "-0.500000000000");
        assert_eq!(num(0.25), "0.250000000000");
    }

    #[test]
    fn matrix_text() {
        let m = MatrixOut { labels: vec!["H".into(), "T".into()], rows: vec![vec![0.5, 0.0], vec![0.0, 0.5]] };
        let mut s = String::new();
        render_matrix(&mut s, &m, "");
        assert_eq!(s, "                H               T\nH  0.500000000000  0.000000000000\nT  0.000000000000  0.500000000000\n");
    }

    #[test]
    fn json_is_tagged() {
        let mut r = RunReport::default();
        r.push("p", "prob", Output::Scalar { value: 0.5 });
        r.push("n", "count", Output::Count { value: "28".into() });
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["steps"][0]["output"]["kind"], "scalar");
        assert_eq!(v["steps"][1]["output"]["value"], "28");
    }
}
