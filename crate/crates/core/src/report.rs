//! Output shaping for the CLI and FFI surfaces: fixed-key-order JSON and a
//! plain table renderer. Rationals are always rendered as strings, integral
//! values without the denominator.

use crate::classify::{is_non_degenerate, Classification, Label};
use crate::game::{AssignmentGame, Imputation, Vertex};
use crate::mechanism::{Trace, TraceKind};
use crate::profile::{Mode, Profile};
use crate::rational::Rational;
use crate::solutions::CoreCheckReport;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

#[derive(Serialize)]
pub struct SolveReport {
    pub worth: Rational,
    pub imputation: Imputation,
    pub profile: Vec<Rational>,
}

impl SolveReport {
    pub fn new(worth: Rational, imputation: Imputation, profile: &Profile) -> Self {
        SolveReport {
            worth,
            imputation,
            profile: profile.values().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    pub fn to_table(&self, game: &AssignmentGame) -> String {
        let mut out = String::new();
        out.push_str(&format!("worth: {}\n", self.worth));
        out.push_str(&render_profit_rows(game, &self.imputation));
        let profile: Vec<String> = self.profile.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("profile: {}\n", profile.join(" ")));
        out
    }
}

fn render_profit_rows(game: &AssignmentGame, imputation: &Imputation) -> String {
    let mut out = String::from("vertex  profit\n");
    for i in 0..game.left_size() {
        out.push_str(&format!(
            "{:<7} {}\n",
            game.vertex_label(Vertex::u(i)),
            imputation.u[i]
        ));
    }
    for j in 0..game.right_size() {
        out.push_str(&format!(
            "{:<7} {}\n",
            game.vertex_label(Vertex::v(j)),
            imputation.v[j]
        ));
    }
    out
}

#[derive(Serialize)]
struct EdgeClassRow {
    u: usize,
    v: usize,
    w: Rational,
    label: Label,
}

#[derive(Serialize)]
struct VertexLabels {
    u: Vec<Label>,
    v: Vec<Label>,
}

#[derive(Serialize)]
pub struct ClassifyReport {
    worth: Rational,
    non_degenerate: bool,
    vertices: VertexLabels,
    edges: Vec<EdgeClassRow>,
}

impl ClassifyReport {
    pub fn new(game: &AssignmentGame, c: &Classification) -> Self {
        ClassifyReport {
            worth: c.worth.clone(),
            non_degenerate: is_non_degenerate(c),
            vertices: VertexLabels {
                u: c.u_labels.clone(),
                v: c.v_labels.clone(),
            },
            edges: game
                .edges()
                .iter()
                .zip(&c.edge_labels)
                .map(|(e, l)| EdgeClassRow {
                    u: e.u,
                    v: e.v,
                    w: e.weight.clone(),
                    label: *l,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    pub fn to_table(&self, game: &AssignmentGame) -> String {
        let label = |l: Label| match l {
            Label::Essential => "essential",
            Label::Viable => "viable",
            Label::Subpar => "subpar",
        };
        let mut out = String::new();
        out.push_str(&format!("worth: {}\n", self.worth));
        out.push_str(&format!("non-degenerate: {}\n", self.non_degenerate));
        out.push_str("vertex  label\n");
        for (i, l) in self.vertices.u.iter().enumerate() {
            out.push_str(&format!(
                "{:<7} {}\n",
                game.vertex_label(Vertex::u(i)),
                label(*l)
            ));
        }
        for (j, l) in self.vertices.v.iter().enumerate() {
            out.push_str(&format!(
                "{:<7} {}\n",
                game.vertex_label(Vertex::v(j)),
                label(*l)
            ));
        }
        out.push_str("edge            weight  label\n");
        for e in &self.edges {
            out.push_str(&format!(
                "{:<15} {:<7} {}\n",
                format!(
                    "({}, {})",
                    game.vertex_label(Vertex::u(e.u)),
                    game.vertex_label(Vertex::v(e.v))
                ),
                e.w.to_string(),
                label(e.label)
            ));
        }
        out
    }
}

#[derive(Serialize)]
pub struct ExtremesReport {
    pub u_optimal: Imputation,
    pub v_optimal: Imputation,
}

impl ExtremesReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    pub fn to_table(&self, game: &AssignmentGame) -> String {
        let mut out = String::from("U-optimal\n");
        out.push_str(&render_profit_rows(game, &self.u_optimal));
        out.push_str("V-optimal\n");
        out.push_str(&render_profit_rows(game, &self.v_optimal));
        out
    }
}

pub fn check_report_to_json(report: &CoreCheckReport) -> String {
    serde_json::to_string(report).expect("report serialization cannot fail")
}

pub fn check_report_to_table(report: &CoreCheckReport) -> String {
    let mut out = format!("in core: {}\n", report.is_core);
    for e in &report.violated_edges {
        out.push_str(&format!(
            "under-tight edge (u{}, v{}): needs {}, has {}\n",
            e.u + 1,
            e.v + 1,
            e.required,
            e.actual
        ));
    }
    for q in &report.negative_vertices {
        out.push_str(&format!("negative profit at {}\n", q));
    }
    out.push_str(&format!("total gap: {}\n", report.total_gap));
    out
}

#[derive(Serialize)]
struct EdgeRef {
    u: usize,
    v: usize,
}

#[derive(Serialize)]
struct TraceLine<'a> {
    omega: &'a Rational,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    component: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edge: Option<EdgeRef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kept: Option<&'a [usize]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    imputation: Option<&'a Imputation>,
}

/// One JSON object per event, in order, newline-separated.
pub fn trace_to_jsonl(trace: &Trace) -> String {
    let mut out = String::new();
    for (idx, event) in trace.events.iter().enumerate() {
        let snapshot = trace.snapshots.as_ref().and_then(|snaps| snaps.get(idx));
        let mut line = TraceLine {
            omega: &event.omega,
            kind: "",
            component: None,
            edge: None,
            case: None,
            vertex: None,
            kept: None,
            imputation: snapshot,
        };
        match &event.kind {
            TraceKind::Activation { component } => {
                line.kind = "activation";
                line.component = Some(*component);
            }
            TraceKind::FullyRepaired { valid, kept } => {
                line.kind = "fully_repaired";
                line.component = Some(*valid);
                line.kept = Some(kept);
            }
            TraceKind::LegitimateEdge { edge, case, kept } => {
                line.kind = "legitimate_edge";
                line.edge = Some(EdgeRef {
                    u: edge.0,
                    v: edge.1,
                });
                line.case = Some(case.as_str());
                line.kept = Some(kept);
            }
            TraceKind::ZeroProfit { vertex, kept } => {
                line.kind = "zero_profit";
                line.vertex = Some(vertex.to_string());
                line.kept = Some(kept);
            }
            TraceKind::Termination => {
                line.kind = "termination";
            }
        }
        out.push_str(&serde_json::to_string(&line).expect("trace serialization cannot fail"));
        out.push('\n');
    }
    out
}

/// The run result in the shape the `solve` subcommand prints.
pub fn solve_report(
    classification: &Classification,
    imputation: Imputation,
    mode: Mode,
) -> SolveReport {
    let essentials = classification.essential_vertices();
    let profile = crate::profile::profile_of(&imputation, &essentials, mode);
    SolveReport::new(classification.worth.clone(), imputation, &profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mechanism;

    #[test]
    fn solve_report_bytes_for_worked_example() {
        let g = fixtures::ex2();
        let c = crate::classify::classify(&g);
        let (imp, _) = mechanism::run(&g, Mode::Leximin).unwrap();
        let report = solve_report(&c, imp, Mode::Leximin);
        assert_eq!(
            report.to_json(),
            r#"{"worth":"160","imputation":{"u":["70","30"],"v":["30","30","0"]},"profile":["30","30","30","70"]}"#
        );
    }

    #[test]
    fn trace_lines_end_with_termination() {
        let g = fixtures::ex2();
        let start = Imputation {
            u: vec![Rational::from_int(60), Rational::from_int(10)],
            v: vec![
                Rational::from_int(40),
                Rational::from_int(50),
                Rational::from_int(0),
            ],
        };
        let (_, trace) = mechanism::run_from(&g, Mode::Leximin, start).unwrap();
        let lines: Vec<String> = trace_to_jsonl(&trace).lines().map(String::from).collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].contains(r#""omega":"10""#));
        assert!(lines[0].contains(r#""kind":"activation""#));
        assert!(lines[1].contains(r#""omega":"20""#));
        assert!(lines[1].contains(r#""kind":"legitimate_edge""#));
        assert!(lines[1].contains(r#""case":"to_bin""#));
        assert!(lines[3].contains(r#""kind":"termination""#));
        assert!(lines[3].contains(r#""omega":"30""#));
    }
}
