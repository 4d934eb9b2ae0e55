//! Label balance of the yes/no tasks under the factory's resampling policy.

mod common;

use graphforge::answer::Answer;
use graphforge::gdl::LabelScheme;
use graphforge::generate::SizeClass;
use graphforge::task::TaskKind;

fn true_rate(kind: TaskKind, size: SizeClass) -> f64 {
    let yes = (0..200)
        .filter(|&i| common::instance(kind, size, 41, i, LabelScheme::IntegerId).answer == Answer::Bool(true))
        .count();
    yes as f64 / 200.0
}

#[test]
fn boolean_tasks_are_balanced() {
    for kind in [TaskKind::Connectivity, TaskKind::Cycle, TaskKind::Edge] {
        for size in [SizeClass::Mini, SizeClass::Large] {
            let rate = true_rate(kind, size);
            assert!((0.4..=0.6).contains(&rate), "{kind} {size:?}: {rate}");
        }
    }
}

#[test]
fn infeasible_draws_are_rare() {
    for kind in TaskKind::ALL {
        let draws: usize =
            (0..100).map(|i| common::instance(kind, SizeClass::Small, 43, i, LabelScheme::IntegerId).attempts).sum();
        assert!(draws < 100 * 4, "{kind}: {draws} draws for 100 instances");
    }
}
