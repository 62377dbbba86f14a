use std::fmt::Write;

use serde::Serialize;
use wdtab::engine::{decide_with, valid_with, Config, EngineError, Stats};
use wdtab::formula::{Formula, Modality};
use wdtab::kripke::KripkeModel;
use wdtab::saturation::LogicId;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// The answer to one `sat` or `valid` question.
#[derive(Debug, Serialize)]
pub struct Verdict {
    pub result: &'static str,
    pub logic: LogicId,
    pub formula: String,
    pub stats: Stats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<KripkeModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<KripkeModel>,
}

impl Verdict {
    pub fn sat(f: &Formula, logic: LogicId, cfg: &Config) -> Result<Verdict, EngineError> {
        let r = decide_with(f, logic, cfg)?;
        Ok(Verdict {
            result: if r.satisfiable { "sat" } else { "unsat" },
            logic,
            formula: f.to_string(),
            stats: r.stats,
            model: r.model,
            countermodel: None,
        })
    }

    pub fn valid(f: &Formula, logic: LogicId, cfg: &Config) -> Result<Verdict, EngineError> {
        let r = valid_with(f, logic, cfg)?;
        Ok(Verdict {
            result: if r.valid { "valid" } else { "invalid" },
            logic,
            formula: f.to_string(),
            stats: r.stats,
            model: None,
            countermodel: r.countermodel,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(self).expect("verdicts serialize"),
            Format::Text => {
                let mut out = format!("{}\nlogic: {}\nformula: {}\n", self.result, self.logic, self.formula);
                if let Some(m) = &self.model {
                    out.push_str("model:\n");
                    out.push_str(&model_text(m));
                }
                if let Some(m) = &self.countermodel {
                    out.push_str("countermodel:\n");
                    out.push_str(&model_text(m));
                }
                out.push_str(&stats_text(&self.stats));
                out.trim_end().to_string()
            }
        }
    }

    /// Just the model, or the bare verdict when there is none.
    pub fn render_model(&self, format: Format) -> String {
        match (&self.model, format) {
            (Some(m), Format::Json) => serde_json::to_string(m).expect("models serialize"),
            (Some(m), Format::Text) => model_text(m).trim_end().to_string(),
            (None, Format::Json) => serde_json::json!({ "result": self.result }).to_string(),
            (None, Format::Text) => self.result.to_string(),
        }
    }
}

pub fn model_text(m: &KripkeModel) -> String {
    let mut out = String::new();
    let worlds: Vec<String> = m.worlds().iter().map(|w| w.to_string()).collect();
    writeln!(out, "  worlds: {}", worlds.join(" ")).unwrap();
    writeln!(out, "  root: {}", m.root()).unwrap();
    for (name, x) in [("a", Modality::A), ("b", Modality::B)] {
        let edges: Vec<String> = m.relation(x).iter().map(|(s, t)| format!("{s}->{t}")).collect();
        writeln!(out, "  {name}: {}", edges.join(" ")).unwrap();
    }
    for (p, ws) in m.valuation() {
        let ws: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
        writeln!(out, "  {p}: {}", ws.join(" ")).unwrap();
    }
    out
}

pub fn stats_text(s: &Stats) -> String {
    format!(
        "stats: max_stack_depth={} max_recursion_depth={} max_window_chain={} nodes_visited={} ccs_enumerated={} chains_looped={} chains_fuelled={} context_loops={}\n",
        s.max_stack_depth,
        s.max_recursion_depth,
        s.max_window_chain,
        s.nodes_visited,
        s.ccs_enumerated,
        s.chains_looped,
        s.chains_fuelled,
        s.context_loops
    )
}
