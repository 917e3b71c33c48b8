use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::{Machine, MachineKind, Rule, StateName, Symbol};
use crate::invariant::InvariantProgram;

/// One broken machine invariant. `component` names the offending part of
/// the machine in JSON-path style (`start`, `rules[3]`, `invariants.B`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub component: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.component, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// True if some violation carries exactly this message.
    pub fn mentions(&self, message: &str) -> bool {
        self.violations.iter().any(|v| v.message == message)
    }

    fn push(&mut self, component: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            component: component.into(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every structural requirement on `machine`. Violations are
/// collected, not short-circuited.
pub fn validate(machine: &Machine) -> ValidationReport {
    let mut report = ValidationReport::default();

    let mut seen = HashSet::new();
    for (i, s) in machine.states.iter().enumerate() {
        if s.as_str().is_empty() || s.as_str().chars().any(char::is_whitespace) {
            report.push(format!("states[{i}]"), "invalid state name");
        }
        if !seen.insert(s) {
            report.push(format!("states[{i}]"), format!("duplicate state '{s}'"));
        }
    }

    check_alphabet(&mut report, "sigma", &machine.sigma);
    match machine.kind {
        MachineKind::Pda => check_alphabet(&mut report, "gamma", &machine.gamma),
        MachineKind::Nfa => {
            if !machine.gamma.is_empty() {
                report.push("gamma", "stack alphabet given for an ndfa");
            }
        }
    }

    if !machine.has_state(&machine.start) {
        report.push("start", "start not a state");
    }
    for (i, f) in machine.finals.iter().enumerate() {
        if !machine.has_state(f) {
            report.push(format!("finals[{i}]"), format!("final '{f}' not a state"));
        }
    }

    for (i, rule) in machine.rules.iter().enumerate() {
        let component = format!("rules[{i}]");
        if rule.kind() != machine.kind {
            report.push(component, format!("{} rule in a {} machine", rule.kind(), machine.kind));
            continue;
        }
        check_state(&mut report, &component, machine, rule.src());
        check_state(&mut report, &component, machine, rule.dst());
        if let Some(read) = rule.read() {
            if !machine.sigma.contains(read) {
                report.push(component.clone(), "unknown input symbol");
            }
        }
        if let Rule::Pda(r) = rule {
            for s in r.pop.iter().chain(&r.push) {
                if !machine.gamma.contains(s) {
                    report.push(component.clone(), format!("unknown stack symbol '{s}'"));
                }
            }
        }
    }

    for (state, source) in &machine.invariants {
        let component = format!("invariants.{state}");
        if !machine.has_state(state) {
            report.push(component, "invariant for unknown state");
            continue;
        }
        if machine.dead_state.as_ref() == Some(state) {
            report.push(component, "invariant on the dead state");
            continue;
        }
        if let Err(e) = InvariantProgram::parse(source, machine.kind) {
            report.push(component, e.to_string());
        }
    }

    report
}

fn check_alphabet(report: &mut ValidationReport, name: &str, alphabet: &[Symbol]) {
    let mut seen = HashSet::new();
    for (i, s) in alphabet.iter().enumerate() {
        if !Symbol::is_valid_name(s.as_str()) {
            report.push(format!("{name}[{i}]"), format!("invalid symbol '{s}'"));
        }
        if !seen.insert(s) {
            report.push(format!("{name}[{i}]"), format!("duplicate symbol '{s}'"));
        }
    }
}

fn check_state(report: &mut ValidationReport, component: &str, machine: &Machine, s: &StateName) {
    if !machine.has_state(s) {
        report.push(component, format!("unknown state '{s}'"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::Rule;

    fn ab_nfa() -> Machine {
        Machine::nfa(
            &["S", "A"],
            &["a", "b"],
            "S",
            &["A"],
            vec![Rule::nfa("S", "a", "A")],
        )
    }

    #[test]
    fn well_formed_machine_is_ok() {
        let report = validate(&ab_nfa());
        assert!(report.is_ok(), "{report}");
        assert_eq!(report.to_string(), "ok");
    }

    #[test]
    fn start_outside_states() {
        let m = Machine::nfa(&["S"], &["a"], "Z", &[], vec![]);
        let report = validate(&m);
        assert!(report.mentions("start not a state"));
        assert_eq!(report.violations[0].component, "start");
    }

    #[test]
    fn unknown_input_symbol() {
        let m = Machine::nfa(
            &["S", "A"],
            &["a", "b"],
            "S",
            &[],
            vec![Rule::nfa("S", "c", "A")],
        );
        let report = validate(&m);
        assert!(report.mentions("unknown input symbol"));
        assert_eq!(report.violations[0].component, "rules[0]");
    }

    #[test]
    fn collects_every_violation() {
        let m = Machine::pda(
            &["S", "S"],
            &["a", "EMP"],
            &["x"],
            "S",
            &["F"],
            vec![
                Rule::pda("S", "a", &["y"], "T", &[]),
                Rule::nfa("S", "a", "S"),
            ],
        );
        let report = validate(&m);
        let messages: Vec<_> = report.violations.iter().map(|v| v.to_string()).collect();
        assert!(messages.contains(&"states[1]: duplicate state 'S'".to_string()));
        assert!(messages.contains(&"sigma[1]: invalid symbol 'EMP'".to_string()));
        assert!(messages.contains(&"finals[0]: final 'F' not a state".to_string()));
        assert!(messages.contains(&"rules[0]: unknown stack symbol 'y'".to_string()));
        assert!(messages.contains(&"rules[0]: unknown state 'T'".to_string()));
        assert!(messages.contains(&"rules[1]: ndfa rule in a pda machine".to_string()));
    }

    #[test]
    fn invariant_checks() {
        let m = ab_nfa().with_invariant("Q", "true");
        assert!(validate(&m).mentions("invariant for unknown state"));

        let m = ab_nfa().with_invariant("S", "len(stack) == 0");
        let report = validate(&m);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].component, "invariants.S");

        let m = ab_nfa().with_invariant("S", "len(ci) == 0");
        assert!(validate(&m).is_ok());
    }

    #[test]
    fn nfa_with_stack_alphabet() {
        let mut m = ab_nfa();
        m.gamma = vec!["x".into()];
        assert!(validate(&m).mentions("stack alphabet given for an ndfa"));
        assert!(m.gamma().is_empty());
    }
}
