#![allow(dead_code)]

use morselab_core::{GroupKind, Letter, NormalWord, Presentation};
use morselab_oracle::{Mat, MatrixGroup, Symbol};
use proptest::prelude::*;

pub fn matrix_group(p: &Presentation) -> MatrixGroup {
    let g = p.graph();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    match p.kind() {
        GroupKind::Racg => MatrixGroup::racg(g.vertex_count(), &edges),
        GroupKind::Raag => MatrixGroup::raag(g.vertex_count(), &edges),
    }
}

pub fn symbols(letters: &[Letter]) -> Vec<Symbol> {
    letters.iter().map(|x| (x.vertex(), x.is_inverted())).collect()
}

pub fn matrix(m: &MatrixGroup, letters: &[Letter]) -> Mat {
    m.evaluate(&symbols(letters))
}

/// Arbitrary (unreduced) words of length at most `max_len`.
pub fn letters(p: &Presentation, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    let gens = p.generators();
    prop::collection::vec(prop::sample::select(gens), 0..=max_len)
}

pub fn element(p: &Presentation, max_len: usize) -> impl Strategy<Value = NormalWord> {
    let p = p.clone();
    letters(&p, max_len).prop_map(move |w| p.reduce(&w))
}
