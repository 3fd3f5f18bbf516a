//! Decidable verdicts for special subgroups of right-angled Coxeter groups
//! over triangle-free graphs, long-cycle witnesses, and loxodromic checks
//! for subgroups of right-angled Artin groups.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, InducedCycle, VertexSet};
use crate::word::{NormalWord, Presentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    True,
    False,
    OutsideScope,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

/// Evidence attached to a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Witness {
    /// An induced 4-cycle with a non-adjacent pair inside the subset but
    /// not all four vertices.
    PartialFourCycle(InducedCycle),
    /// An induced 4-cycle with a non-adjacent pair inside the subset.
    FourCycleDiagonal(InducedCycle),
    /// Every induced 4-cycle was checked.
    Exhausted { four_cycles: usize },
    /// The subset spans a clique.
    Clique(VertexSet),
    /// Two vertices of the subset that are not adjacent.
    NonAdjacent(usize, usize),
    /// A triangle, which puts the graph outside the theorem's hypotheses.
    Triangle([usize; 3]),
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassificationReport {
    pub subset: VertexSet,
    pub strongly_quasiconvex: Verdict,
    pub stable: Verdict,
    pub finite: Verdict,
    pub witnesses: Vec<(String, Witness)>,
}

fn find_triangle(g: &DefiningGraph) -> Option<[usize; 3]> {
    for (u, v) in g.edges() {
        if let Some(w) = g.link(u).intersection(g.link(v)).first() {
            return Some([u, v, w]);
        }
    }
    None
}

fn has_diagonal(cyc: &InducedCycle, s1: VertexSet) -> bool {
    let c = cyc.vertices();
    (s1.contains(c[0]) && s1.contains(c[2])) || (s1.contains(c[1]) && s1.contains(c[3]))
}

/// Strong quasiconvexity, stability and finiteness of the special subgroup
/// generated by `s1`. Graphs with a triangle are outside scope.
pub fn classify_special_racg(g: &DefiningGraph, s1: VertexSet) -> ClassificationReport {
    if let Some(t) = find_triangle(g) {
        return ClassificationReport {
            subset: s1,
            strongly_quasiconvex: Verdict::OutsideScope,
            stable: Verdict::OutsideScope,
            finite: Verdict::OutsideScope,
            witnesses: alloc::vec![("scope".to_string(), Witness::Triangle(t))],
        };
    }
    let cycles = g.induced_4cycles();
    let exhausted = Witness::Exhausted { four_cycles: cycles.len() };
    let mut witnesses = Vec::new();

    let partial = cycles
        .iter()
        .find(|c| has_diagonal(c, s1) && !c.vertex_set().is_subset(s1));
    witnesses.push((
        "strongly_quasiconvex".to_string(),
        partial.map_or(exhausted.clone(), |c| Witness::PartialFourCycle(c.clone())),
    ));

    let diagonal = cycles.iter().find(|c| has_diagonal(c, s1));
    witnesses.push((
        "stable".to_string(),
        diagonal.map_or(exhausted, |c| Witness::FourCycleDiagonal(c.clone())),
    ));

    let finite = g.is_clique(s1);
    let finite_witness = if finite {
        Witness::Clique(s1)
    } else {
        let (u, v) = s1
            .iter()
            .flat_map(|u| s1.iter().filter(move |&v| v > u).map(move |v| (u, v)))
            .find(|&(u, v)| !g.adjacent(u, v))
            .expect("a non-clique has a non-adjacent pair");
        Witness::NonAdjacent(u, v)
    };
    witnesses.push(("finite".to_string(), finite_witness));

    ClassificationReport {
        subset: s1,
        strongly_quasiconvex: partial.is_none().into(),
        stable: diagonal.is_none().into(),
        finite: finite.into(),
        witnesses,
    }
}

/// The first induced cycle of length in `5..=max_len` (canonical order)
/// whose vertex set contains no non-adjacent pair of an induced 4-cycle.
pub fn morse_boundary_witness(g: &DefiningGraph, max_len: usize) -> Result<Option<InducedCycle>> {
    if find_triangle(g).is_some() {
        return Err(Error::Scope("graph has a triangle".into()));
    }
    let max_len = max_len.min(g.vertex_count());
    if max_len < 5 {
        return Ok(None);
    }
    let squares = g.induced_4cycles();
    Ok(g.induced_cycles(5, max_len)?
        .into_iter()
        .find(|c| !squares.iter().any(|sq| has_diagonal(sq, c.vertex_set()))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WordVerdict {
    pub word: NormalWord,
    pub loxodromic: bool,
    pub max_join_subword: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LoxodromicReport {
    pub words: Vec<WordVerdict>,
    /// Longest product length searched.
    pub k: usize,
    pub products_checked: usize,
    /// Longest join subword over all nontrivial products searched.
    pub max_join_subword: usize,
    /// A nontrivial product that is not loxodromic, as signed generator indices
    /// (`i + 1` for generator `i`, `-(i + 1)` for its inverse).
    pub counterexample: Option<(Vec<i32>, NormalWord)>,
}

impl LoxodromicReport {
    /// No counterexample among products of at most `k` generators. Not a proof.
    pub fn no_counterexample(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Per-word loxodromic verdicts plus a search over freely reduced products
/// of at most `k` generators and inverses.
pub fn loxodromic_report(p: &Presentation, words: &[NormalWord], k: usize) -> Result<LoxodromicReport> {
    p.require_loxodromic_setting()?;
    let mut verdicts = Vec::new();
    for w in words {
        verdicts.push(WordVerdict {
            word: w.clone(),
            loxodromic: p.is_loxodromic(w)?,
            max_join_subword: p.max_join_subword_length(w),
        });
    }
    let symbols: Vec<(i32, NormalWord)> = words
        .iter()
        .enumerate()
        .flat_map(|(i, w)| [(i as i32 + 1, w.clone()), (-(i as i32) - 1, p.inverse(w))])
        .collect();
    let mut report = LoxodromicReport {
        words: verdicts,
        k,
        products_checked: 0,
        max_join_subword: 0,
        counterexample: None,
    };
    let mut frontier: Vec<(Vec<i32>, NormalWord)> = alloc::vec![(Vec::new(), NormalWord::identity())];
    for _ in 0..k {
        let mut next = Vec::new();
        for (seq, value) in &frontier {
            for (s, w) in &symbols {
                if seq.last() == Some(&-s) {
                    continue;
                }
                let prod = p.multiply(value, w);
                let mut seq = seq.clone();
                seq.push(*s);
                if !prod.is_identity() {
                    report.products_checked += 1;
                    report.max_join_subword = report.max_join_subword.max(p.max_join_subword_length(&prod));
                    if report.counterexample.is_none() && !p.is_loxodromic(&prod)? {
                        report.counterexample = Some((seq.clone(), prod.clone()));
                    }
                }
                next.push((seq, prod));
            }
        }
        frontier = next;
    }
    Ok(report)
}
