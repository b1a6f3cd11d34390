use std::time::Duration;

use serde_json::{json, Value};

pub const VERSION: &str = concat!("fibtree ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Everything a command prints. Rendering is a pure function of the fields,
/// except for the optional wall-time footer.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub spec_digest: Option<String>,
    pub body: String,
    pub results: Value,
}

impl RunReport {
    pub fn render(&self, format: Format, wall: Option<Duration>) -> String {
        match format {
            Format::Text => {
                let mut out = format!("{VERSION}\ncommand: {}\n", self.command);
                if let Some(d) = &self.spec_digest {
                    out.push_str(&format!("spec digest: sha256:{d}\n"));
                }
                out.push('\n');
                out.push_str(&self.body);
                if !self.body.ends_with('\n') {
                    out.push('\n');
                }
                if let Some(w) = wall {
                    out.push_str(&format!("\nwall time: {:.6} s\n", w.as_secs_f64()));
                }
                out
            }
            Format::Json => {
                let mut v = json!({
                    "version": VERSION,
                    "command": self.command,
                    "spec_digest": self.spec_digest,
                    "results": self.results,
                });
                if let Some(w) = wall {
                    v["wall_time_seconds"] = json!(w.as_secs_f64());
                }
                let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
                s.push('\n');
                s
            }
        }
    }
}
