//! Every solver against the brute-force oracles on small graphs.

mod common;

use graphforge::oracle::{self, MAX_ORACLE_NODES};
use graphforge::solvers::replay::replay;
use graphforge::task::TaskKind;

const PER_TASK: u64 = 200;

#[test]
fn solvers_agree_with_oracles_on_small_graphs() {
    let mut failures = Vec::new();
    for kind in TaskKind::ALL {
        for i in 0..PER_TASK {
            let inst = common::mini(kind, 17, i);
            assert!(inst.graph.node_count() <= MAX_ORACLE_NODES);
            if let Err(why) = oracle::check(kind, &inst.graph, &inst.query_args, &inst.answer) {
                failures.push(format!("{kind} #{i}: {why}"));
            }
        }
    }
    assert!(failures.is_empty(), "{} disagreements:\n{}", failures.len(), failures.join("\n"));
}

#[test]
fn traces_replay_to_the_answer() {
    for kind in TaskKind::ALL {
        for i in 0..50 {
            let inst = common::mini(kind, 23, i);
            assert_eq!(replay(kind, &inst.trace), Ok(inst.answer.clone()), "{kind} #{i}");
        }
    }
}
