//! Index-based form of a machine used during exploration.

use std::collections::HashMap;

use crate::machine::{Machine, MachineKind, Rule, Symbol};

#[derive(Debug, Clone)]
pub(crate) struct CRule {
    pub src: u32,
    pub read: Option<u32>,
    /// Top of stack first.
    pub pop: Vec<u32>,
    pub dst: u32,
    /// Top of stack first.
    pub push: Vec<u32>,
}

#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub kind: MachineKind,
    pub start: u32,
    pub finals: Vec<bool>,
    pub rules: Vec<CRule>,
    pub by_state: Vec<Vec<usize>>,
    pub sigma: HashMap<Symbol, u32>,
    pub gamma: HashMap<Symbol, u32>,
}

/// Stack stored bottom-first so the top is the last element.
pub(crate) type Stack = [u32];

impl Compiled {
    /// Assumes `machine` has passed validation.
    pub fn new(machine: &Machine) -> Compiled {
        let state_ix: HashMap<_, _> = machine
            .states()
            .iter()
            .enumerate()
            .map(|(i, s)| (s, i as u32))
            .collect();
        let index = |v: &[Symbol]| -> HashMap<Symbol, u32> {
            v.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect()
        };
        let sigma = index(machine.sigma());
        let gamma = index(machine.gamma());

        let rules: Vec<CRule> = machine
            .rules()
            .iter()
            .map(|r| {
                let src = state_ix[r.src()];
                let dst = state_ix[r.dst()];
                let read = r.read().map(|s| sigma[s]);
                match r {
                    Rule::Nfa(_) => CRule {
                        src,
                        read,
                        pop: vec![],
                        dst,
                        push: vec![],
                    },
                    Rule::Pda(p) => CRule {
                        src,
                        read,
                        pop: p.pop.iter().map(|s| gamma[s]).collect(),
                        dst,
                        push: p.push.iter().map(|s| gamma[s]).collect(),
                    },
                }
            })
            .collect();

        let mut by_state = vec![Vec::new(); machine.states().len()];
        for (i, r) in rules.iter().enumerate() {
            by_state[r.src as usize].push(i);
        }
        let mut finals = vec![false; machine.states().len()];
        for f in machine.finals() {
            finals[state_ix[f] as usize] = true;
        }

        Compiled {
            kind: machine.kind(),
            start: state_ix[machine.start()],
            finals,
            rules,
            by_state,
            sigma,
            gamma,
        }
    }

    pub fn applies(&self, rule: &CRule, next: Option<u32>, stack: &Stack) -> bool {
        if let Some(r) = rule.read {
            if next != Some(r) {
                return false;
            }
        }
        rule.pop.len() <= stack.len()
            && rule
                .pop
                .iter()
                .zip(stack.iter().rev())
                .all(|(p, s)| p == s)
    }

    /// Rule indices that apply, in machine rule order.
    pub fn applicable(&self, state: u32, next: Option<u32>, stack: &Stack) -> Vec<usize> {
        self.by_state[state as usize]
            .iter()
            .copied()
            .filter(|&i| self.applies(&self.rules[i], next, stack))
            .collect()
    }

    /// Pops `rule.pop` then pushes `rule.push`. Caller checked applicability.
    pub fn next_stack(&self, rule: &CRule, stack: &Stack) -> Vec<u32> {
        let keep = stack.len() - rule.pop.len();
        let mut out = Vec::with_capacity(keep + rule.push.len());
        out.extend_from_slice(&stack[..keep]);
        out.extend(rule.push.iter().rev());
        out
    }

    pub fn is_accepting(&self, state: u32, at_end: bool, stack: &Stack) -> bool {
        self.finals[state as usize] && at_end && (self.kind == MachineKind::Nfa || stack.is_empty())
    }
}
