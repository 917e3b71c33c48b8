//! Independent reference implementations and random machine generators
//! shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use ndviz_core::machine::{Machine, Rule, Symbol};
use ndviz_core::Verdict;
use rand::seq::SliceRandom;
use rand::Rng;

/// NFA membership by subset construction: ε-closed sets of states, one
/// transition per input symbol.
pub fn dfa_accepts(m: &Machine, word: &[Symbol]) -> bool {
    fn closure<'m>(m: &'m Machine, set: BTreeSet<&'m str>) -> BTreeSet<&'m str> {
        let mut out = set.clone();
        let mut work: Vec<&str> = set.into_iter().collect();
        while let Some(q) = work.pop() {
            for r in m.rules() {
                if r.src().as_str() == q && r.read().is_none() && out.insert(r.dst().as_str()) {
                    work.push(r.dst().as_str());
                }
            }
        }
        out
    }
    let mut current = closure(m, BTreeSet::from([m.start().as_str()]));
    for sym in word {
        let next: BTreeSet<&str> = m
            .rules()
            .iter()
            .filter(|r| current.contains(r.src().as_str()) && r.read() == Some(sym))
            .map(|r| r.dst().as_str())
            .collect();
        current = closure(m, next);
    }
    current.iter().any(|q| m.finals().iter().any(|f| f.as_str() == *q))
}

/// Configuration with the stack top first.
type Config = (String, usize, Vec<String>);

fn successors(m: &Machine, word: &[Symbol], (q, pos, stack): &Config) -> Vec<Config> {
    let mut out = Vec::new();
    for r in m.rules() {
        let Rule::Pda(p) = r else { continue };
        if p.src.as_str() != q {
            continue;
        }
        let next_pos = match &p.read {
            None => *pos,
            Some(s) if word.get(*pos) == Some(s) => pos + 1,
            Some(_) => continue,
        };
        let pop: Vec<String> = p.pop.iter().map(|s| s.to_string()).collect();
        if !stack.starts_with(&pop) {
            continue;
        }
        let mut next: Vec<String> = p.push.iter().map(|s| s.to_string()).collect();
        next.extend_from_slice(&stack[pop.len()..]);
        out.push((p.dst.to_string(), next_pos, next));
    }
    out
}

/// PDA verdict by depth-first enumeration of every computation of at most
/// `k` moves. Each configuration keeps the least depth at which it was
/// found; accept if an accepting configuration is within `k` moves,
/// otherwise cutoff if some configuration first reachable in exactly `k`
/// moves can still move.
pub fn pda_verdict(m: &Machine, word: &[Symbol], k: usize) -> Verdict {
    let mut best: HashMap<Config, usize> = HashMap::new();
    fn dfs(
        m: &Machine,
        word: &[Symbol],
        k: usize,
        c: Config,
        depth: usize,
        best: &mut HashMap<Config, usize>,
    ) {
        if best.get(&c).is_some_and(|&d| d <= depth) {
            return;
        }
        best.insert(c.clone(), depth);
        if depth == k {
            return;
        }
        for next in successors(m, word, &c) {
            dfs(m, word, k, next, depth + 1, best);
        }
    }
    dfs(m, word, k, (m.start().to_string(), 0, vec![]), 0, &mut best);

    let accepting = |(q, pos, stack): &Config| {
        *pos == word.len() && stack.is_empty() && m.finals().iter().any(|f| f.as_str() == q)
    };
    if best.keys().any(accepting) {
        Verdict::Accept
    } else if best
        .iter()
        .any(|(c, &d)| d == k && !successors(m, word, c).is_empty())
    {
        Verdict::CutoffLimit
    } else {
        Verdict::Reject
    }
}

pub const STATES: [&str; 5] = ["S", "A", "B", "C", "D"];

/// Up to 5 states, 1 or 2 input symbols, up to 12 rules.
pub fn random_nfa(rng: &mut impl Rng) -> Machine {
    let n = rng.gen_range(1..=5);
    let states = &STATES[..n];
    let sigma: &[&str] = if rng.gen_bool(0.2) { &["a"] } else { &["a", "b"] };
    let reads: Vec<&str> = sigma.iter().copied().chain(["EMP"]).collect();
    let rules = (0..rng.gen_range(0..=12))
        .map(|_| {
            Rule::nfa(
                states.choose(rng).unwrap(),
                reads.choose(rng).unwrap(),
                states.choose(rng).unwrap(),
            )
        })
        .collect();
    let finals: Vec<&str> = states.iter().copied().filter(|_| rng.gen_bool(0.35)).collect();
    Machine::nfa(states, sigma, "S", &finals, rules)
}

/// Up to 3 states, two input and two stack symbols, up to 8 rules popping
/// and pushing at most two symbols.
pub fn random_pda(rng: &mut impl Rng) -> Machine {
    let n = rng.gen_range(1..=3);
    let states = &STATES[..n];
    let ab = ["a", "b"];
    let reads = ["a", "b", "EMP"];
    let seq = |rng: &mut dyn rand::RngCore| -> Vec<&str> {
        let len = rng.gen_range(0..=2);
        (0..len).map(|_| *ab.choose(rng).unwrap()).collect()
    };
    let rules = (0..rng.gen_range(0..=8))
        .map(|_| {
            let src = *states.choose(rng).unwrap();
            let read = *reads.choose(rng).unwrap();
            let pop = seq(rng);
            let dst = *states.choose(rng).unwrap();
            let push = seq(rng);
            Rule::pda(src, read, &pop, dst, &push)
        })
        .collect();
    let finals: Vec<&str> = states.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    Machine::pda(states, &ab, &ab, "S", &finals, rules)
}

/// Every word over `sigma` of length at most `max`, shortest first.
pub fn all_words(sigma: &[Symbol], max: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &frontier {
            for s in sigma {
                let mut w2: Vec<Symbol> = w.clone();
                w2.push(s.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
