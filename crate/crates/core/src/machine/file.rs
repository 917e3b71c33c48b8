//! The machine JSON file format.
//!
//! ```json
//! {"kind":"ndfa","states":["S","A"],"sigma":["a"],"gamma":[],"start":"S",
//!  "finals":["A"],"rules":[["S","","A"]],"invariants":{"S":"len(ci)==0"}}
//! ```
//!
//! An NFA rule is `[src, read, dst]`; a PDA rule is
//! `[[src, read, [pop...]], [dst, [push...]]]`. An empty read is written as
//! `""` (`"EMP"` is accepted on input); an empty pop or push is `[]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Machine, MachineKind, NfaRule, PdaRule, Rule, StateName, Symbol, EMP};

#[derive(Debug, Error)]
pub enum MachineFileError {
    /// Malformed JSON or a field of the wrong shape. `path` locates the field.
    #[error("{path}: {message}")]
    Json { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineFile {
    pub kind: MachineKind,
    pub states: Vec<String>,
    pub sigma: Vec<String>,
    #[serde(default)]
    pub gamma: Vec<String>,
    pub start: String,
    pub finals: Vec<String>,
    pub rules: Vec<RuleFile>,
    #[serde(default)]
    pub invariants: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RuleFile {
    Nfa(String, String, String),
    Pda((String, String, SeqFile), (String, SeqFile)),
}

/// A pop or push sequence. `"EMP"` and `""` are tolerated for the empty one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeqFile {
    List(Vec<String>),
    Token(String),
}

impl SeqFile {
    fn symbols(&self) -> Vec<Symbol> {
        match self {
            SeqFile::List(v) => v.iter().map(|s| Symbol::new(s.as_str())).collect(),
            SeqFile::Token(t) if t.is_empty() || t == EMP => vec![],
            SeqFile::Token(t) => vec![Symbol::new(t.as_str())],
        }
    }
}

fn read_field(read: &str) -> Option<Symbol> {
    if read.is_empty() || read == EMP {
        None
    } else {
        Some(Symbol::new(read))
    }
}

impl MachineFile {
    pub fn parse(text: &str) -> Result<MachineFile, MachineFileError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            MachineFileError::Json {
                path: if path == "." || path == "?" { "machine".into() } else { path },
                message: inner.to_string(),
            }
        })
    }

    /// Converts to a [`Machine`]. The result is not validated.
    pub fn into_machine(self) -> Machine {
        let rules = self
            .rules
            .iter()
            .map(|r| match r {
                RuleFile::Nfa(src, read, dst) => Rule::Nfa(NfaRule {
                    src: StateName::new(src.as_str()),
                    read: read_field(read),
                    dst: StateName::new(dst.as_str()),
                }),
                RuleFile::Pda((src, read, pop), (dst, push)) => Rule::Pda(PdaRule {
                    src: StateName::new(src.as_str()),
                    read: read_field(read),
                    pop: pop.symbols(),
                    dst: StateName::new(dst.as_str()),
                    push: push.symbols(),
                }),
            })
            .collect();
        Machine::from_parts(
            self.kind,
            self.states.into_iter().map(StateName::new).collect(),
            self.sigma.into_iter().map(Symbol::new).collect(),
            self.gamma.into_iter().map(Symbol::new).collect(),
            StateName::new(self.start),
            self.finals.into_iter().map(StateName::new).collect(),
            rules,
        )
        .with_invariants(
            self.invariants
                .into_iter()
                .map(|(k, v)| (StateName::new(k), v))
                .collect(),
        )
    }

    /// Serializes only the original rules; dead-state augmentation is a view
    /// option, not part of the machine definition.
    pub fn from_machine(m: &Machine) -> MachineFile {
        let names = |v: &[Symbol]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let read = |r: Option<&Symbol>| r.map_or(String::new(), |s| s.to_string());
        let mut states: Vec<String> = m.states().iter().map(|s| s.to_string()).collect();
        if m.is_augmented() {
            states.pop();
        }
        MachineFile {
            kind: m.kind(),
            states,
            sigma: names(m.sigma()),
            gamma: names(m.gamma()),
            start: m.start().to_string(),
            finals: m.finals().iter().map(|s| s.to_string()).collect(),
            rules: m.rules()[..m.original_rule_count()]
                .iter()
                .map(|r| match r {
                    Rule::Nfa(r) => RuleFile::Nfa(
                        r.src.to_string(),
                        read(r.read.as_ref()),
                        r.dst.to_string(),
                    ),
                    Rule::Pda(r) => RuleFile::Pda(
                        (r.src.to_string(), read(r.read.as_ref()), SeqFile::List(names(&r.pop))),
                        (r.dst.to_string(), SeqFile::List(names(&r.push))),
                    ),
                })
                .collect(),
            invariants: m
                .invariants()
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("machine file serializes")
    }
}

impl Machine {
    /// Parses a machine JSON document. Structural validation is separate.
    pub fn from_json(text: &str) -> Result<Machine, MachineFileError> {
        MachineFile::parse(text).map(MachineFile::into_machine)
    }

    pub fn to_json(&self) -> String {
        MachineFile::from_machine(self).to_json()
    }
}
