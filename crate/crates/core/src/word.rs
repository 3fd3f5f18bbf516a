//! Group elements of right-angled Coxeter and Artin groups as shortlex normal forms.
//!
//! Reduced words of an element differ only by commuting adjacent letters, so
//! the element is identified with its shortlex-least reduced word under the
//! vertex order of the defining graph. Appending a letter either cancels
//! against a letter that can be shuffled to the end, or inserts the letter at
//! the earliest position that keeps the word shortlex-least.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GroupKind {
    /// Right-angled Coxeter group: generators are involutions.
    Racg,
    /// Right-angled Artin group.
    Raag,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Racg => "racg",
            GroupKind::Raag => "raag",
        })
    }
}

/// A generator or inverse generator, packed as `vertex * 2 + inverted`.
///
/// The derived order (`a < a^-1 < b < ...`) is the letter order used for shortlex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Letter(u8);

impl Letter {
    pub const fn new(vertex: usize, inverted: bool) -> Self {
        Letter(((vertex as u8) << 1) | inverted as u8)
    }

    pub const fn from_code(code: u8) -> Self {
        Letter(code)
    }

    pub const fn code(self) -> u8 {
        self.0
    }

    pub const fn vertex(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub const fn is_inverted(self) -> bool {
        self.0 & 1 == 1
    }

    pub const fn exponent(self) -> i8 {
        if self.is_inverted() {
            -1
        } else {
            1
        }
    }

    #[must_use]
    pub const fn flipped(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverted() {
            write!(f, "s{}^-1", self.vertex())
        } else {
            write!(f, "s{}", self.vertex())
        }
    }
}

/// The canonical (shortlex-least reduced) word of a group element.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormalWord(Vec<Letter>);

impl NormalWord {
    pub fn identity() -> Self {
        NormalWord(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Word length, which is the distance from the identity in the Cayley graph.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Vertices occurring in the word. Every reduced spelling of an element
    /// uses the same letters, so this is a property of the element.
    pub fn support(&self) -> VertexSet {
        support_of(&self.0)
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl fmt::Debug for NormalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

pub(crate) fn support_of(letters: &[Letter]) -> VertexSet {
    letters
        .iter()
        .fold(VertexSet::EMPTY, |s, l| s.with(l.vertex()))
}

/// A defining graph together with the choice of group it presents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    graph: DefiningGraph,
    kind: GroupKind,
    link: Vec<u64>,
}

impl Presentation {
    pub fn new(graph: DefiningGraph, kind: GroupKind) -> Self {
        let link = (0..graph.vertex_count())
            .map(|v| graph.link(v).bits())
            .collect();
        Presentation { graph, kind, link }
    }

    pub fn racg(graph: DefiningGraph) -> Self {
        Presentation::new(graph, GroupKind::Racg)
    }

    pub fn raag(graph: DefiningGraph) -> Self {
        Presentation::new(graph, GroupKind::Raag)
    }

    pub fn graph(&self) -> &DefiningGraph {
        &self.graph
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    /// Letter for `vertex` raised to `exponent` (`±1`). RACG letters are
    /// always stored with exponent `+1`.
    pub fn letter(&self, vertex: usize, exponent: i8) -> Letter {
        Letter::new(vertex, self.kind == GroupKind::Raag && exponent < 0)
    }

    /// Symmetric generating set: `s` for a RACG, `s, s^-1` for a RAAG.
    pub fn generators(&self) -> Vec<Letter> {
        let n = self.graph.vertex_count();
        match self.kind {
            GroupKind::Racg => (0..n).map(|v| Letter::new(v, false)).collect(),
            GroupKind::Raag => (0..n)
                .flat_map(|v| [Letter::new(v, false), Letter::new(v, true)])
                .collect(),
        }
    }

    pub fn inverse_letter(&self, x: Letter) -> Letter {
        match self.kind {
            GroupKind::Racg => x,
            GroupKind::Raag => x.flipped(),
        }
    }

    pub(crate) fn commute(&self, x: Letter, y: Letter) -> bool {
        self.link[x.vertex()] >> y.vertex() & 1 == 1
    }

    /// Appends `x` to the canonical word `w` in place, keeping it canonical.
    /// Returns `false` when `x` cancelled a letter instead of being inserted.
    pub fn push_letter(&self, w: &mut Vec<Letter>, x: Letter) -> bool {
        let inv = self.inverse_letter(x);
        let mut stop = 0;
        for i in (0..w.len()).rev() {
            let y = w[i];
            if y.vertex() == x.vertex() {
                if y == inv {
                    // y commutes with everything after it, so it is a maximal
                    // element of the trace and removing it keeps the word canonical
                    w.remove(i);
                    return false;
                }
                stop = i + 1;
                break;
            }
            if !self.commute(x, y) {
                stop = i + 1;
                break;
            }
        }
        let pos = (stop..w.len()).find(|&p| x < w[p]).unwrap_or(w.len());
        w.insert(pos, x);
        true
    }

    /// Canonical normal form of the element spelled by `letters`.
    pub fn reduce(&self, letters: &[Letter]) -> NormalWord {
        let mut w = Vec::with_capacity(letters.len());
        for &x in letters {
            self.push_letter(&mut w, self.letter(x.vertex(), x.exponent()));
        }
        NormalWord(w)
    }

    /// Wraps letters that are already canonical, checking that they are.
    pub fn normal_word(&self, letters: Vec<Letter>) -> Result<NormalWord> {
        let reduced = self.reduce(&letters);
        if reduced.0 != letters {
            return Err(Error::Precondition(format!(
                "{} is not in normal form",
                self.format_letters(&letters)
            )));
        }
        Ok(reduced)
    }

    pub fn multiply(&self, u: &NormalWord, v: &NormalWord) -> NormalWord {
        let mut w = u.0.clone();
        for &x in &v.0 {
            self.push_letter(&mut w, x);
        }
        NormalWord(w)
    }

    /// `u` times a single letter.
    pub fn mul_letter(&self, u: &NormalWord, x: Letter) -> NormalWord {
        let mut w = u.0.clone();
        self.push_letter(&mut w, x);
        NormalWord(w)
    }

    pub fn inverse(&self, u: &NormalWord) -> NormalWord {
        let rev: Vec<Letter> = u.0.iter().rev().map(|&x| self.inverse_letter(x)).collect();
        self.reduce(&rev)
    }

    pub fn power(&self, u: &NormalWord, k: usize) -> NormalWord {
        let mut w = NormalWord::identity();
        for _ in 0..k {
            w = self.multiply(&w, u);
        }
        w
    }

    /// Word-metric distance `|g^-1 h|`.
    pub fn distance(&self, g: &NormalWord, h: &NormalWord) -> usize {
        self.multiply(&self.inverse(g), h).len()
    }

    /// Letters that can be shuffled to the front of `w`, as positions.
    fn first_movable(&self, w: &[Letter]) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &x) in w.iter().enumerate() {
            if w[..i]
                .iter()
                .all(|&y| y.vertex() != x.vertex() && self.commute(x, y))
            {
                out.push(i);
            }
        }
        out
    }

    /// Letters that can be shuffled to the end of `w`, as positions.
    fn last_movable(&self, w: &[Letter]) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &x) in w.iter().enumerate() {
            if w[i + 1..]
                .iter()
                .all(|&y| y.vertex() != x.vertex() && self.commute(x, y))
            {
                out.push(i);
            }
        }
        out
    }

    /// Splits `u = c · k · c^-1` where no conjugation by a single letter
    /// shortens `k`. Returns `(c, k)`.
    pub fn cyclically_reduce(&self, u: &NormalWord) -> (NormalWord, NormalWord) {
        let mut conj = NormalWord::identity();
        let mut core = u.clone();
        loop {
            let firsts = self.first_movable(&core.0);
            let lasts = self.last_movable(&core.0);
            // core = y^-1 · k' · y with y^-1 in front and y at the back
            let mut best: Option<Letter> = None;
            for &i in &firsts {
                let lead = core.0[i];
                let tail = self.inverse_letter(lead);
                if lasts.iter().any(|&j| j != i && core.0[j] == tail)
                    && best.is_none_or(|b| lead < b)
                {
                    best = Some(lead);
                }
            }
            let Some(lead) = best else {
                return (conj, core);
            };
            let y = self.inverse_letter(lead);
            let mut w = core.0.clone();
            self.push_letter(&mut w, lead);
            let shifted = NormalWord(w);
            let mut front = alloc::vec![y];
            front.extend_from_slice(&shifted.0);
            core = self.reduce(&front);
            conj = self.mul_letter(&conj, lead);
        }
    }

    /// Whether `u` is loxodromic: not conjugate into a join subgroup.
    /// Requires a RAAG over a connected graph that is not itself a join.
    pub fn is_loxodromic(&self, u: &NormalWord) -> Result<bool> {
        self.require_loxodromic_setting()?;
        if u.is_identity() {
            return Ok(false);
        }
        let (_, core) = self.cyclically_reduce(u);
        Ok(!self.graph.extends_to_join(core.support()))
    }

    pub(crate) fn require_loxodromic_setting(&self) -> Result<()> {
        if self.kind != GroupKind::Raag {
            return Err(Error::Precondition(
                "loxodromic elements are defined for right-angled Artin groups".into(),
            ));
        }
        if !self.graph.is_connected() {
            return Err(Error::Precondition("defining graph is disconnected".into()));
        }
        if self.graph.is_join(self.graph.all()) {
            return Err(Error::Precondition("defining graph is a nontrivial join".into()));
        }
        Ok(())
    }

    /// Longest contiguous subword of `u` whose support lies in some join.
    pub fn max_join_subword_length(&self, u: &NormalWord) -> usize {
        let w = u.letters();
        let mut best = 0;
        for i in 0..w.len() {
            let mut support = VertexSet::EMPTY;
            for (j, x) in w.iter().enumerate().skip(i) {
                support = support.with(x.vertex());
                // supersets of a non-extendable support are non-extendable
                if !self.graph.extends_to_join(support) {
                    break;
                }
                best = best.max(j + 1 - i);
            }
        }
        best
    }

    pub fn special_subgroup_member(&self, u: &NormalWord, s1: VertexSet) -> bool {
        u.support().is_subset(s1)
    }

    /// Distance from `g` to the special subgroup `K = <s1>`: the length of
    /// the shortest element of the coset `K g`, found by stripping every
    /// `s1`-letter that can be shuffled to the front of `g`.
    pub fn special_distance(&self, g: &[Letter], s1: VertexSet) -> usize {
        let mut kept = 0u64;
        let mut stripped = 0;
        for &x in g {
            let v = x.vertex();
            // x reaches the front iff every kept letter so far commutes with it
            let blocked = kept & !self.link[v] != 0;
            if s1.contains(v) && !blocked {
                stripped += 1;
            } else {
                kept |= 1 << v;
            }
        }
        g.len() - stripped
    }

    /// Renders letters as whitespace-separated tokens, e.g. `a1 b2^-1`.
    pub fn format_letters(&self, letters: &[Letter]) -> String {
        let mut out = String::new();
        for (i, x) in letters.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(self.graph.name(x.vertex()));
            if x.is_inverted() {
                out.push_str("^-1");
            }
        }
        out
    }

    pub fn format(&self, u: &NormalWord) -> String {
        self.format_letters(&u.0)
    }

    /// Parses tokens separated by whitespace or commas; `name^-1` inverts a
    /// RAAG letter and is ignored for RACGs.
    pub fn parse_letters(&self, text: &str) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((name, "-1")) => (name, -1),
                Some((name, "1" | "+1")) => (name, 1),
                Some(_) => {
                    return Err(Error::Validation(format!("bad exponent in `{tok}`")));
                }
                None => (tok, 1),
            };
            let v = self
                .graph
                .index_of(name)
                .ok_or_else(|| Error::Validation(format!("unknown generator `{name}`")))?;
            out.push(self.letter(v, exp));
        }
        Ok(out)
    }

    pub fn parse(&self, text: &str) -> Result<NormalWord> {
        Ok(self.reduce(&self.parse_letters(text)?))
    }
}
