use super::{Machine, MachineKind, NfaRule, PdaRule, Rule, StateName};

pub const DEFAULT_DEAD_STATE: &str = "ds";

/// Adds a non-final trap state so every computation can consume the whole
/// word.
///
/// For an NFA, a consuming rule `(q σ ds)` is added for each `(q, σ)` pair
/// that has none, plus `(ds σ ds)` loops. If the consuming transitions are
/// already total the machine comes back unchanged. For a PDA, escape rules
/// `((q σ ε) (ds ε))` are added for every pair, along with rules that let
/// `ds` read any symbol and pop any stack symbol. Synthetic rules are
/// appended after the original ones.
///
/// A machine that is already augmented is returned as is.
pub fn add_dead_state(machine: &Machine) -> Machine {
    if machine.is_augmented() {
        return machine.clone();
    }
    let ds = fresh_name(machine);
    let mut out = machine.clone();
    let mut added = Vec::new();

    match machine.kind {
        MachineKind::Nfa => {
            for q in &machine.states {
                for sym in &machine.sigma {
                    let covered = machine.rules.iter().any(|r| {
                        r.src() == q && r.read() == Some(sym)
                    });
                    if !covered {
                        added.push(Rule::Nfa(NfaRule {
                            src: q.clone(),
                            read: Some(sym.clone()),
                            dst: ds.clone(),
                        }));
                    }
                }
            }
            if added.is_empty() {
                return out;
            }
            for sym in &machine.sigma {
                added.push(Rule::Nfa(NfaRule {
                    src: ds.clone(),
                    read: Some(sym.clone()),
                    dst: ds.clone(),
                }));
            }
        }
        MachineKind::Pda => {
            let escape = |src: &StateName, read| {
                Rule::Pda(PdaRule {
                    src: src.clone(),
                    read,
                    pop: vec![],
                    dst: ds.clone(),
                    push: vec![],
                })
            };
            for q in &machine.states {
                for sym in &machine.sigma {
                    added.push(escape(q, Some(sym.clone())));
                }
            }
            for sym in &machine.sigma {
                added.push(escape(&ds, Some(sym.clone())));
            }
            for g in &machine.gamma {
                added.push(Rule::Pda(PdaRule {
                    src: ds.clone(),
                    read: None,
                    pop: vec![g.clone()],
                    dst: ds.clone(),
                    push: vec![],
                }));
            }
        }
    }

    out.synthetic_from = out.rules.len();
    out.rules.extend(added);
    out.states.push(ds.clone());
    out.dead_state = Some(ds);
    out
}

fn fresh_name(machine: &Machine) -> StateName {
    let mut name = DEFAULT_DEAD_STATE.to_string();
    while machine.states.iter().any(|s| s.as_str() == name) {
        name.push('\'');
    }
    StateName::new(name)
}
