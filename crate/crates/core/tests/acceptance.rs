//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines are always shown.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{all_words, dfa_accepts, pda_verdict, random_nfa, random_pda};
use ndviz_core::engine::{explore, trace, ExploreOptions, NodeStatus, Verdict};
use ndviz_core::frames::{HighlightColor, NodeColor};
use ndviz_core::invariant::InvariantProgram;
use ndviz_core::machine::{word, Machine, MachineKind};
use ndviz_core::samples::{ab_2a, ab_u_abb, buggy_ab_2a, equal_ab, growing_stack, AB_2A_H_INV};
use ndviz_core::Visualization;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn build(m: &Machine, w: &str, opts: &ExploreOptions) -> Visualization {
    Visualization::build(m, &word(w), opts).expect("pipeline")
}

fn golden_nfa() -> Outcome {
    let m = ab_u_abb();
    let cases = [
        ("b a b a a", Verdict::Reject),
        ("a a a", Verdict::Reject),
        ("", Verdict::Accept),
        ("a b b b", Verdict::Accept),
        ("a b a b b b", Verdict::Accept),
    ];
    for (w, want) in cases {
        let got = ndviz_core::apply(&m, &word(w), &ExploreOptions::default()).unwrap();
        ensure!(got == want, "({w}) gave {got}, expected {want}");
    }
    Ok(format!("{} of {} verdicts reproduce", cases.len(), cases.len()))
}

fn golden_pda() -> Outcome {
    let m = equal_ab();
    let cases = [
        ("", Verdict::Accept),
        ("a b b", Verdict::Reject),
        ("a", Verdict::Reject),
        ("b a b", Verdict::Reject),
        ("b a a b", Verdict::Accept),
        ("a b b a a b", Verdict::Accept),
    ];
    for (w, want) in cases {
        let got = ndviz_core::apply(&m, &word(w), &ExploreOptions::default()).unwrap();
        ensure!(got == want, "({w}) gave {got}, expected {want}");
    }
    Ok(format!("{} of {} verdicts reproduce with max_steps=100", cases.len(), cases.len()))
}

fn rule_index(m: &Machine, text: &str) -> usize {
    m.rules()
        .iter()
        .position(|r| r.to_string() == text)
        .unwrap_or_else(|| panic!("no rule {text}"))
}

fn frame_golden() -> Outcome {
    let m = ab_u_abb();
    let v = build(&m, "a b b b b", &ExploreOptions::default());
    let f = v.frame(2).unwrap();
    ensure!(f.computation_count == 3, "computation_count {}", f.computation_count);
    let mut states: Vec<&str> = f
        .displayed_nodes
        .iter()
        .map(|&id| v.forest().state_name(id).as_str())
        .collect();
    states.sort();
    ensure!(states == ["A", "C", "E"], "displayed {states:?}");
    let want = vec![
        (rule_index(&m, "(B b A)"), HighlightColor::Green),
        (rule_index(&m, "(A EMP C)"), HighlightColor::Green),
        (rule_index(&m, "(E b E)"), HighlightColor::DarkGreen),
    ];
    let mut got: Vec<_> = f.highlighted_edges.iter().map(|h| (h.rule, h.color)).collect();
    let mut want_sorted = want.clone();
    want_sorted.sort();
    got.sort();
    ensure!(got == want_sorted, "highlights {got:?}");
    Ok("frame 2: 3 computations in {A, C, E}; (B b A) GREEN, (A ε C) GREEN, (E b E) DARK_GREEN".into())
}

fn dead_state_golden() -> Outcome {
    let v = build(
        &ab_u_abb(),
        "a b b b b",
        &ExploreOptions::default().with_add_dead(true),
    );
    let m = v.machine();
    let f = v.frame(1).unwrap();
    ensure!(f.highlighted_edges.len() == 4, "{} highlighted edges", f.highlighted_edges.len());
    let into_ds = f
        .highlighted_edges
        .iter()
        .filter(|h| Some(m.rules()[h.rule].dst()) == m.dead_state())
        .count();
    ensure!(into_ds == 2, "{into_ds} edges into ds");
    ensure!(f.computation_count == 3, "computation_count {}", f.computation_count);
    let pruned_ds = v
        .forest()
        .nodes()
        .iter()
        .filter(|n| n.consumed_count() == 1 && n.status() == NodeStatus::Pruned)
        .count();
    ensure!(pruned_ds == 1, "{pruned_ds} pruned nodes at frame 1");
    Ok("frame 1: 4 highlighted edges (2 into ds), 3 computations, duplicate ds pruned".into())
}

/// Accepting root-to-leaf paths by unpruned breadth-first enumeration,
/// returned in the order found; each path is a list of configurations.
fn accepting_paths_bfs(m: &Machine, w: &[ndviz_core::Symbol], max_depth: usize) -> Vec<Vec<String>> {
    use ndviz_core::engine::{applicable_rules, step, Configuration};
    let start = Configuration::nfa(m.start().as_str(), w);
    let mut queue = std::collections::VecDeque::from([vec![start]]);
    let mut found = Vec::new();
    while let Some(path) = queue.pop_front() {
        let last = path.last().unwrap();
        if last.unconsumed.is_empty() && m.is_final(&last.state) {
            found.push(path.iter().map(|c| c.to_string()).collect());
        }
        if path.len() > max_depth {
            continue;
        }
        for r in applicable_rules(m, last) {
            let mut next = path.clone();
            next.push(step(m, last, r).unwrap());
            queue.push_back(next);
        }
    }
    found
}

fn trace_format() -> Outcome {
    let m = ab_u_abb();
    let w = word("a b");
    let t = trace(&m, &w, &ExploreOptions::default()).unwrap();
    let text = t.to_string();
    ensure!(text.starts_with("(((a b) S) ") && text.ends_with(" accept)"), "shape: {text}");

    let paths = accepting_paths_bfs(&m, &w, 8);
    let oracle = paths.first().ok_or("oracle found no accepting path")?;
    let oracle_text = format!("({} accept)", oracle.join(" "));
    ensure!(text == oracle_text, "tracked {text}, BFS-first oracle {oracle_text}");

    let c_path = ["((a b) S)", "((a b) A)", "((b) B)", "(() A)", "(() C)"];
    ensure!(
        paths.iter().any(|p| p == &c_path),
        "the 5-configuration path ending in C is not an accepting computation"
    );
    Ok(format!(
        "tracked = BFS-first oracle {text} ({} configurations); the 5-configuration C path is accepting but deeper",
        t.configurations.len()
    ))
}

fn nfa_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let (machines, mut checks) = (1000, 0usize);
    for i in 0..machines {
        let m = random_nfa(&mut rng);
        for w in all_words(m.sigma(), 6) {
            let got = ndviz_core::apply(&m, &w, &ExploreOptions::default()).unwrap();
            let want = if dfa_accepts(&m, &w) { Verdict::Accept } else { Verdict::Reject };
            ensure!(
                got == want,
                "machine #{i} on {w:?}: engine {got}, subset construction {want}\n{}",
                m.to_json()
            );
            checks += 1;
        }
    }
    Ok(format!("{machines} random NFAs, {checks} words, 0 mismatches"))
}

fn pda_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let (machines, mut checks) = (300, 0usize);
    let mut seen = [0usize; 3];
    let opts = ExploreOptions::with_max_steps(12);
    for i in 0..machines {
        let m = random_pda(&mut rng);
        for w in all_words(m.sigma(), 4) {
            let got = ndviz_core::apply(&m, &w, &opts).unwrap();
            let want = pda_verdict(&m, &w, 12);
            ensure!(
                got == want,
                "machine #{i} on {w:?}: engine {got}, enumerator {want}\n{}",
                m.to_json()
            );
            seen[got as usize] += 1;
            checks += 1;
        }
    }
    Ok(format!(
        "{machines} random PDAs, {checks} words (accept {}, reject {}, cutoff {}), 0 mismatches",
        seen[Verdict::Accept as usize],
        seen[Verdict::Reject as usize],
        seen[Verdict::CutoffLimit as usize]
    ))
}

fn termination() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    // A step bound of 1 would cut every longer computation if it applied.
    let opts = ExploreOptions::with_max_steps(1);
    for i in 0..300 {
        let m = random_nfa(&mut rng);
        for w in all_words(m.sigma(), 4) {
            let f = explore(&m, &w, &opts).unwrap();
            ensure!(f.cutoff_count() == 0, "NFA #{i} was cut off on {w:?}");
            let want = dfa_accepts(&m, &w);
            ensure!((f.verdict() == Verdict::Accept) == want, "NFA #{i} on {w:?} wrong verdict");
        }
    }
    let v = build(&growing_stack(), "", &ExploreOptions::with_max_steps(10));
    ensure!(v.verdict() == Verdict::CutoffLimit, "growing stack gave {}", v.verdict());
    let last = v.frames().last().unwrap();
    ensure!(
        last.decoration(&"S".into()) == NodeColor::Gold,
        "S is {} at the final frame",
        last.decoration(&"S".into())
    );
    ensure!(last.verdict_banner == Some(Verdict::CutoffLimit), "banner {:?}", last.verdict_banner);
    Ok("300 NFAs explored without a step bound, none cut off; growing stack is CUTOFF-LIMIT with gold S".into())
}

fn invariant_debugging() -> Outcome {
    let buggy = ab_u_abb().with_invariant("B", "len(ci) > 0 and not matches(ci, (a|b)* a)");
    let v = build(&buggy, "a b b b b", &ExploreOptions::default());
    let jump = v.jump(0, ndviz_core::frames::Direction::Next);
    ensure!(jump == Some(1), "buggy jump gave {jump:?}");
    let b = v.frame(1).unwrap().decoration(&"B".into());
    ensure!(b == NodeColor::InvRed, "B is {b} at frame 1");

    let fixed = ab_u_abb().with_invariant("B", "len(ci) > 0 and matches(ci, (a|b)* a)");
    let v = build(&fixed, "a b b b b", &ExploreOptions::default());
    let jump = v.jump(0, ndviz_core::frames::Direction::Next);
    ensure!(jump.is_none(), "corrected jump gave {jump:?}");
    Ok("buggy B-INV: jump(0, next) = 1 with B INV_RED; corrected: none".into())
}

fn no_accept_coloring() -> Outcome {
    let sessions = [
        (ab_2a(), "a"),
        (ab_2a(), "a a b"),
        (
            ab_u_abb()
                .with_invariant("B", "len(ci) > 0 and not matches(ci, (a|b)* a)")
                .with_invariant("S", "len(ci) == 0"),
            "b a b a a",
        ),
    ];
    for (m, w) in sessions {
        let v = build(&m, w, &ExploreOptions::default());
        ensure!(v.verdict() != Verdict::Accept, "({w}) was accepted");
        for f in v.frames() {
            let inv = f.node_decorations.values().filter(|c| c.is_invariant()).count();
            ensure!(inv == 0, "({w}) frame {} has {inv} invariant colors", f.index);
        }
    }
    Ok("3 rejected sessions, no INV_* decoration on any frame".into())
}

fn bicolor() -> Outcome {
    let m = buggy_ab_2a();
    let v = build(&m, "a", &ExploreOptions::default());
    ensure!(!v.forest().accepting_leaves().is_empty(), "no accepting computation");
    // Two distinct accepting computations: push (b) and pop it, or push
    // (b b) and pop twice through the shared (H, (b)) configuration.
    let accepting_paths = accepting_pda_paths(&m, &word("a"), 6);
    ensure!(accepting_paths >= 2, "{accepting_paths} accepting computations");
    let h = v.frame(1).unwrap().decoration(&"H".into());
    ensure!(h == NodeColor::InvBicolor, "H is {h} at frame 1");
    Ok(format!("{accepting_paths} accepting computations; H is INV_BICOLOR at frame 1"))
}

/// Counts accepting PDA computations of at most `k` moves, unpruned.
fn accepting_pda_paths(m: &Machine, w: &[ndviz_core::Symbol], k: usize) -> usize {
    use ndviz_core::engine::{applicable_rules, step, Configuration};
    fn go(m: &Machine, c: &Configuration, k: usize) -> usize {
        let here = usize::from(
            c.unconsumed.is_empty()
                && m.is_final(&c.state)
                && c.stack.as_ref().is_some_and(|s| s.is_empty()),
        );
        if k == 0 {
            return here;
        }
        here + applicable_rules(m, c)
            .into_iter()
            .map(|r| go(m, &step(m, c, r).unwrap(), k - 1))
            .sum::<usize>()
    }
    go(m, &Configuration::pda(m.start().as_str(), w, &[]), k)
}

fn dsl_regression() -> Outcome {
    let mut n = 0;
    let mut check = |src: &str, kind, ci: &str, stack: Option<&str>, want: bool| -> Outcome {
        let p = InvariantProgram::parse(src, kind).map_err(|e| format!("{src}: {e}"))?;
        let st = stack.map(word);
        let got = p.eval(&word(ci), st.as_deref());
        ensure!(got == want, "{src} on ci=({ci}) stack={stack:?}: {got}");
        n += 1;
        Ok(String::new())
    };
    let s_inv = "len(ci) == 0";
    check(s_inv, MachineKind::Nfa, "", None, true)?;
    check(s_inv, MachineKind::Nfa, "a b a", None, false)?;
    let counting = "count(ci ++ stack, a) == count(ci ++ stack, b)";
    check(counting, MachineKind::Pda, "b a", Some("b b b"), false)?;
    check(counting, MachineKind::Pda, "a", Some("a"), false)?;
    check(counting, MachineKind::Pda, "", Some(""), true)?;
    check(counting, MachineKind::Pda, "a a b", Some("b"), true)?;
    // Corrected B-INV holds wherever B is reached; the buggy one failed on (a).
    let b_inv = "len(ci) > 0 and matches(ci, (a|b)* a)";
    check(b_inv, MachineKind::Nfa, "a", None, true)?;
    check(b_inv, MachineKind::Nfa, "a b a", None, true)?;
    check("len(ci) > 0 and not matches(ci, (a|b)* a)", MachineKind::Nfa, "a", None, false)?;
    check(AB_2A_H_INV, MachineKind::Pda, "a a b", Some("b"), true)?;
    Ok(format!("{n} check-equal outcomes reproduce"))
}

fn determinism() -> Outcome {
    let runs = [
        (ab_u_abb(), "a b b b b", ExploreOptions::default()),
        (ab_u_abb(), "a b b b b", ExploreOptions::default().with_add_dead(true)),
        (equal_ab(), "a b b a a b", ExploreOptions::default()),
        (buggy_ab_2a(), "a", ExploreOptions::default()),
    ];
    for (m, w, opts) in runs {
        let (a, b) = (build(&m, w, &opts), build(&m.clone(), w, &opts.clone()));
        ensure!(a.frames_json() == b.frames_json(), "frame JSON differs for ({w})");
        for i in 0..a.frames().len() {
            ensure!(a.dot(Some(i)).unwrap() == b.dot(Some(i)).unwrap(), "DOT differs at frame {i}");
        }
    }
    Ok("4 pipelines run twice: frame JSON and DOT byte-identical".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("golden verdicts (NFA)", golden_nfa),
        ("golden verdicts (PDA)", golden_pda),
        ("frame golden test", frame_golden),
        ("dead-state golden test", dead_state_golden),
        ("trace format", trace_format),
        ("NFA oracle equivalence", nfa_oracle),
        ("PDA oracle equivalence", pda_oracle),
        ("termination", termination),
        ("invariant debugging", invariant_debugging),
        ("no-accept coloring", no_accept_coloring),
        ("bicolor", bicolor),
        ("DSL regression", dsl_regression),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let took = fmt_duration(t.elapsed());
        match outcome {
            Ok(detail) => println!("PASS  {name} [{took}]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name} [{took}]: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

fn fmt_duration(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}
