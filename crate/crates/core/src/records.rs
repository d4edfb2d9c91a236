//! Artifact serialization: line-oriented stratum records, CSV tables,
//! JSON-lines, flow traces and the text format for lattice states.
//!
//! All output is UTF-8 with LF line endings and deterministic field order;
//! floats render in Rust's shortest round-trip form.

use num_rational::Rational64;
use serde::Serialize;

use crate::census::{ComponentReport, Count};
use crate::critical::CriticalStratum;
use crate::flow::heat::FlowTrace;
use crate::flow::FlowState;
use crate::morse::{IndexReport, IndexValue};

fn weight_str(w: Rational64) -> String {
    if w.is_integer() {
        format!("{}", w.numer())
    } else {
        format!("{}/{}", w.numer(), w.denom())
    }
}

/// One stratum per line: stable key=value fields with summand and route tables.
pub fn strata_records(strata: &[CriticalStratum]) -> String {
    let mut out = String::new();
    for s in strata {
        let summands: Vec<String> = s
            .hodge
            .summands
            .iter()
            .map(|m| format!("({},{},{})", m.rank, m.degree, weight_str(m.weight)))
            .collect();
        let routes: Vec<String> = s
            .hodge
            .routes
            .iter()
            .map(|r| format!("{}:{}->{}", r.tag.letter(), r.src, r.tgt))
            .collect();
        out.push_str(&format!(
            "stratum group={} class={} label=\"{}\" mult={} phi_zero={} total_degree={} summands={} routes={}",
            s.hodge.group.name,
            s.description.as_str(),
            s.label,
            s.multiplicity,
            s.is_phi_zero,
            s.hodge.total_degree,
            summands.join(";"),
            if routes.is_empty() { "-".to_string() } else { routes.join(";") },
        ));
        for n in &s.notes {
            out.push_str(&format!(" note=\"{n}\""));
        }
        out.push('\n');
    }
    out
}

pub fn strata_csv(strata: &[CriticalStratum]) -> String {
    let mut out = String::from("group,class,label,mult,phi_zero,total_degree,summands,routes\n");
    for s in strata {
        let summands: Vec<String> = s
            .hodge
            .summands
            .iter()
            .map(|m| format!("({} {} {})", m.rank, m.degree, weight_str(m.weight)))
            .collect();
        let routes: Vec<String> = s
            .hodge
            .routes
            .iter()
            .map(|r| format!("{}:{}->{}", r.tag.letter(), r.src, r.tgt))
            .collect();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            s.hodge.group.name,
            s.description.as_str(),
            s.label.replace(',', ";"),
            s.multiplicity,
            s.is_phi_zero,
            s.hodge.total_degree,
            summands.join(";"),
            routes.join(";"),
        ));
    }
    out
}

#[derive(Serialize)]
struct StratumJson<'a> {
    group: String,
    class: &'a str,
    label: &'a str,
    multiplicity: u64,
    phi_zero: bool,
    total_degree: i64,
    summands: Vec<(u32, i64, String)>,
    routes: Vec<String>,
    notes: &'a [String],
}

pub fn strata_json_lines(strata: &[CriticalStratum]) -> String {
    let mut out = String::new();
    for s in strata {
        let rec = StratumJson {
            group: s.hodge.group.name.to_string(),
            class: s.description.as_str(),
            label: &s.label,
            multiplicity: s.multiplicity,
            phi_zero: s.is_phi_zero,
            total_degree: s.hodge.total_degree,
            summands: s
                .hodge
                .summands
                .iter()
                .map(|m| (m.rank, m.degree, weight_str(m.weight)))
                .collect(),
            routes: s
                .hodge
                .routes
                .iter()
                .map(|r| format!("{}:{}->{}", r.tag.letter(), r.src, r.tgt))
                .collect(),
            notes: &s.notes,
        };
        out.push_str(&serde_json::to_string(&rec).expect("serializable"));
        out.push('\n');
    }
    out
}

/// Index reports in the stratum record format plus an index field.
pub fn index_records(rows: &[(CriticalStratum, IndexReport, bool)]) -> String {
    let mut out = String::new();
    for (s, report, minimum) in rows {
        let idx = match &report.index {
            IndexValue::Exact(v) => format!("{v}"),
            IndexValue::Interval { lower, upper } => match upper {
                Some(u) => format!("[{lower},{u}]"),
                None => format!("[{lower},unresolved)"),
            },
        };
        out.push_str(&format!(
            "index group={} class={} label=\"{}\" morse_index={} minimum={}",
            s.hodge.group.name,
            s.description.as_str(),
            s.label,
            idx,
            minimum
        ));
        for w in &report.per_weight {
            out.push_str(&format!(
                " mu={}:{}",
                weight_str(w.weight),
                match &w.resolution {
                    crate::morse::PieceResolution::Isomorphism => "iso".to_string(),
                    crate::morse::PieceResolution::DegreeVanishing { h1 } => format!("h1={h1}"),
                    crate::morse::PieceResolution::Unresolved { h1_lower } =>
                        format!("UNRESOLVED(h1>={h1_lower})"),
                }
            ));
        }
        out.push('\n');
    }
    out
}

/// Census table: group, g, d, label, count, provenance.
pub fn census_csv(reports: &[ComponentReport]) -> String {
    let mut out = String::from("group,g,d,label,count,provenance\n");
    for r in reports {
        let total = match r.total {
            Count::Known(v) => v.to_string(),
            Count::Unknown => "UNKNOWN".to_string(),
        };
        out.push_str(&format!(
            "{},{},{},TOTAL,{},\n",
            r.group, r.genus, r.toledo, total
        ));
        for b in &r.breakdown {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.group,
                r.genus,
                r.toledo,
                b.label.replace(',', ";"),
                b.count,
                b.provenance.replace(',', ";")
            ));
        }
    }
    out
}

/// Flow trace: time, energy, gradient_norm, step.
pub fn trace_csv(trace: &FlowTrace) -> String {
    let mut out = String::from("time,energy,gradient_norm,step\n");
    for r in &trace.steps {
        out.push_str(&format!(
            "{:?},{:?},{:?},{:?}\n",
            r.time, r.energy, r.grad_norm, r.step
        ));
    }
    out
}

/// Lattice state text format: header lines, then one line per site per field
/// with row-major matrix entries as `re im` pairs, full round-trip precision.
pub fn state_to_text(state: &FlowState) -> String {
    let mut out = String::new();
    out.push_str("higgsmorse-state v1\n");
    out.push_str(&format!(
        "size {} spacing {:?} rank {} group {}\n",
        state.geometry.size(),
        state.geometry.spacing(),
        state.rank,
        state.group_tag.label()
    ));
    let emit = |out: &mut String, name: &str, field: &[crate::cmatrix::CMat]| {
        for (s, m) in field.iter().enumerate() {
            out.push_str(&format!("{name} {s}"));
            for v in &m.d {
                out.push_str(&format!(" {:?} {:?}", v.re, v.im));
            }
            out.push('\n');
        }
    };
    emit(&mut out, "a", &state.base_a);
    emit(&mut out, "phi", &state.higgs);
    emit(&mut out, "h", &state.metric);
    out
}
