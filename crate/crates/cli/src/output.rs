//! Rendering of results and run manifests.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::args::Format;
use crate::commands::sha256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn word(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Answer::Yes => 0,
            Answer::No => 1,
            Answer::Unknown => 2,
        }
    }
}

#[derive(Default, Debug)]
pub struct Outcome {
    /// Printed first and bare in text mode.
    pub result: Option<String>,
    pub answer: Option<Answer>,
    pub fields: Vec<(String, String)>,
    /// `(file name, contents)`.
    pub artifacts: Vec<(String, String)>,
    pub params: Vec<(String, String)>,
}

impl Outcome {
    pub fn field(&mut self, k: impl Into<String>, v: impl Display) {
        self.fields.push((k.into(), v.to_string()));
    }

    pub fn param(&mut self, k: impl Into<String>, v: impl Display) {
        self.params.push((k.into(), v.to_string()));
    }

    pub fn artifact(&mut self, name: impl Into<String>, text: impl Into<String>) {
        self.artifacts.push((name.into(), text.into()));
    }

    pub fn verdict(&mut self, a: Answer) {
        self.answer = Some(a);
        self.result = Some(a.word().to_string());
    }

    pub fn exit_code(&self) -> i32 {
        self.answer.map_or(0, Answer::exit_code)
    }

    /// Standard output. Artifacts are inlined unless they go to files.
    pub fn render(&self, format: Format, inline_artifacts: bool) -> String {
        let mut s = String::new();
        match format {
            Format::Text => {
                if let Some(r) = &self.result {
                    s += &format!("{r}\n");
                }
                for (k, v) in &self.fields {
                    s += &format!("{k} {v}\n");
                }
                if inline_artifacts {
                    for (name, text) in &self.artifacts {
                        s += &format!("# artifact {name}\n{text}");
                    }
                }
            }
            Format::Lines => {
                let mut line = |v: Value| s += &format!("{v}\n");
                if let Some(r) = &self.result {
                    line(json!({"key": "result", "value": r}));
                }
                for (k, v) in &self.fields {
                    line(json!({"key": k, "value": v}));
                }
                if inline_artifacts {
                    for (name, text) in &self.artifacts {
                        line(json!({"key": "artifact", "name": name, "value": text}));
                    }
                }
            }
        }
        s
    }
}

/// Files written for the artifacts, or none when they were inlined.
pub fn write_artifacts(o: &Outcome, dir: Option<&Path>) -> std::io::Result<Vec<(PathBuf, String)>> {
    let Some(dir) = dir else {
        return Ok(Vec::new());
    };
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, text) in &o.artifacts {
        let p = dir.join(name);
        fs::write(&p, text)?;
        written.push((p, sha256(text.as_bytes())));
    }
    Ok(written)
}

pub struct ManifestData<'a> {
    pub args: &'a [String],
    pub inputs: &'a [(String, String)],
    pub outcome: &'a Outcome,
    pub stdout: &'a str,
    pub exit: i32,
}

pub fn manifest(m: &ManifestData) -> Value {
    let params: serde_json::Map<String, Value> = m
        .outcome
        .params
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    json!({
        "command": m.args,
        "inputs": m.inputs.iter().map(|(p, d)| json!({"path": p, "sha256": d})).collect::<Vec<_>>(),
        "parameters": params,
        "outputs": m.outcome.artifacts.iter().map(|(n, t)| json!({"name": n, "sha256": sha256(t.as_bytes())})).collect::<Vec<_>>(),
        "stdout_sha256": sha256(m.stdout.as_bytes()),
        "verdict": m.outcome.answer.map(Answer::word),
        "exit": m.exit,
    })
}
