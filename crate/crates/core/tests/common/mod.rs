#![allow(dead_code)]

use graphforge::factory::{make_instance, TaskInstance};
use graphforge::gdl::{GdlKind, LabelScheme};
use graphforge::generate::{derive_seed, Distribution, GenSpec, SizeClass};
use graphforge::task::TaskKind;

/// The `i`th instance of a seeded family: distribution, directedness and
/// description language rotate with `i`.
pub fn instance(kind: TaskKind, size: SizeClass, base: u64, i: u64, scheme: LabelScheme) -> TaskInstance {
    let distribution = Distribution::ALL[(i % 3) as usize];
    let gdl = [GdlKind::EdgeList, GdlKind::AdjacencyTable, GdlKind::AdjacencyNl][(i / 3 % 3) as usize];
    let spec = GenSpec::new(distribution, size, i.is_multiple_of(2), derive_seed(base, &[kind as u64, i]));
    make_instance(kind, &spec, gdl, scheme).unwrap_or_else(|e| panic!("{kind} #{i}: {e}"))
}

pub fn mini(kind: TaskKind, base: u64, i: u64) -> TaskInstance {
    instance(kind, SizeClass::Mini, base, i, LabelScheme::IntegerId)
}
