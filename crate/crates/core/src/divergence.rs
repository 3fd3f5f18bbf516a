//! Ball-local measurements of lower relative divergence, geodesic divergence
//! and lower divergence, explicit witness paths, and closed-form bounds.
//!
//! Every measured value is an over-estimate of the infinite-graph quantity:
//! pairs and paths are restricted to the ball.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;

use crate::cayley::{BallIndex, SubgroupField, NONE};
use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, InducedCycle, VertexSet};
use crate::word::{Letter, NormalWord, Presentation};

/// A rational in `(0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rho {
    num: u32,
    den: u32,
}

impl Rho {
    pub const ONE: Rho = Rho { num: 1, den: 1 };

    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 || num == 0 || num > den {
            return Err(Error::Precondition(format!("rho = {num}/{den} is not in (0, 1]")));
        }
        let g = gcd(num, den);
        Ok(Rho { num: num / g, den: den / g })
    }

    pub fn numer(self) -> u32 {
        self.num
    }

    pub fn denom(self) -> u32 {
        self.den
    }

    /// `⌈ρ·r⌉`, the vertex-resolution exclusion radius.
    pub fn ceil_mul(self, r: u32) -> u32 {
        (r as u64 * self.num as u64).div_ceil(self.den as u64) as u32
    }

    pub fn as_ratio(self) -> Ratio<i64> {
        Ratio::new(self.num as i64, self.den as i64)
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rho {
    type Err = Error;

    /// Accepts `p/q` or a decimal such as `0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation(format!("cannot parse rho from {s:?}"));
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = p.trim().parse().map_err(|_| bad())?;
            let q = q.trim().parse().map_err(|_| bad())?;
            return Rho::new(p, q);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 6 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u32.pow(frac.len() as u32);
        let int: u32 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u32 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        Rho::new(int * den + frac, den)
    }
}

/// Parameters for [`sigma_profile`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaConfig {
    pub n: u32,
    pub rho: Rho,
    /// Extra room required between `r + n·r` and the ball radius.
    pub slack: u32,
    /// Maximum number of boundary pairs whose word distance is tested per row.
    pub pair_cap: u64,
}

impl SigmaConfig {
    pub fn new(n: u32, rho: Rho) -> Self {
        SigmaConfig {
            n,
            rho,
            slack: 0,
            pair_cap: 100_000,
        }
    }
}

/// One measured radius. `value == None` is infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DivergenceRow {
    pub r: u32,
    pub value: Option<u32>,
    pub pairs_examined: u64,
    pub capped: bool,
    pub witness: Option<(NormalWord, NormalWord)>,
}

/// A table of ball-local measurements. Geodesic profiles record `n = 1`
/// and `ρ = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DivergenceProfile {
    pub n: u32,
    pub rho: Rho,
    pub r_max: u32,
    pub rows: Vec<DivergenceRow>,
}

impl DivergenceProfile {
    pub fn growth(&self) -> Result<GrowthReport> {
        let points: Vec<(u32, Option<u32>)> = self.rows.iter().map(|row| (row.r, row.value)).collect();
        growth_diagnostic(&points)
    }
}

struct Scratch {
    dist: Vec<u32>,
    touched: Vec<u32>,
    queue: VecDeque<u32>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            dist: alloc::vec![NONE; n],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v as usize] = NONE;
        }
        self.touched.clear();
        self.queue.clear();
    }

    fn visit(&mut self, v: u32, d: u32) {
        self.dist[v as usize] = d;
        self.touched.push(v);
        self.queue.push_back(v);
    }

    fn flood(&mut self, ball: &BallIndex, source: u32, admissible: impl Fn(u32) -> bool) {
        self.reset();
        self.visit(source, 0);
        while let Some(v) = self.queue.pop_front() {
            let d = self.dist[v as usize] + 1;
            for &w in ball.neighbor_ids(v) {
                if w != NONE && self.dist[w as usize] == NONE && admissible(w) {
                    self.visit(w, d);
                }
            }
        }
    }
}

/// Lower relative divergence `σⁿ_ρ(r)` measured inside `ball`.
///
/// The measurement is invariant under left translation by the subgroup, so
/// it suffices to start from boundary points `x` whose nearest subgroup
/// element is the identity (`|x| = r`). From each such `x` a BFS through
/// the complement of the open `⌈ρr⌉`-neighbourhood visits boundary points
/// `y` in order of path length; the first `y` with `d(x, y) ≥ n·r` that is
/// also connected to `x` outside the open `r`-neighbourhood gives the
/// minimum for that `x`. Ties are broken by the smallest `(id_x, id_y)`.
pub fn sigma_profile(
    ball: &BallIndex,
    field: &SubgroupField,
    config: &SigmaConfig,
    r_list: &[u32],
) -> Result<DivergenceProfile> {
    if config.n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    let p = ball.presentation();
    let mut rows = Vec::with_capacity(r_list.len());
    let mut scratch = Scratch::new(ball.len());
    let mut reach = Scratch::new(ball.len());
    for &r in r_list {
        let threshold = config.n * r;
        if r == 0 || r + threshold + config.slack > ball.radius() {
            return Err(Error::Precondition(format!(
                "r = {r} needs r + n·r + slack <= {} (ball radius)",
                ball.radius()
            )));
        }
        let exclusion = config.rho.ceil_mul(r);
        let sources: Vec<u32> = ball
            .layer(r)
            .filter(|&id| field.distance(id) == Some(r))
            .collect();
        let mut best: Option<(u32, u32, u32)> = None;
        let mut pairs = 0u64;
        let mut capped = false;
        'sources: for &x in &sources {
            let x_inv = p.inverse(&ball.normal_word(x));
            if exclusion < r {
                reach.flood(ball, x, |v| field.outside(v, r));
            }
            scratch.reset();
            scratch.visit(x, 0);
            let mut found: Option<(u32, u32)> = None;
            while let Some(v) = scratch.queue.pop_front() {
                let d = scratch.dist[v as usize];
                if let Some((fd, _)) = found {
                    if d > fd {
                        break;
                    }
                }
                if best.is_some_and(|(bd, _, _)| d >= bd) {
                    break;
                }
                if d >= threshold
                    && field.distance(v) == Some(r)
                    && (exclusion >= r || reach.dist[v as usize] != NONE)
                {
                    if pairs >= config.pair_cap {
                        capped = true;
                        break 'sources;
                    }
                    pairs += 1;
                    let far = ball.depth(v) >= r + threshold
                        || p.multiply(&x_inv, &ball.normal_word(v)).len() as u32 >= threshold;
                    if far && found.is_none_or(|(_, fy)| v < fy) {
                        found = Some((d, v));
                    }
                }
                if found.is_some() {
                    continue;
                }
                for &w in ball.neighbor_ids(v) {
                    if w != NONE && scratch.dist[w as usize] == NONE && field.outside(w, exclusion) {
                        scratch.visit(w, d + 1);
                    }
                }
            }
            if let Some((d, y)) = found {
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, x, y));
                }
            }
        }
        rows.push(DivergenceRow {
            r,
            value: best.map(|(d, _, _)| d),
            pairs_examined: pairs,
            capped,
            witness: best.map(|(_, x, y)| (ball.normal_word(x), ball.normal_word(y))),
        });
    }
    Ok(DivergenceProfile {
        n: config.n,
        rho: config.rho,
        r_max: ball.radius(),
        rows,
    })
}

/// Re-checks a finite row: both endpoints on `∂N_r`, word distance at least
/// `n·r`, connected outside the open `r`-neighbourhood, and an explicit path
/// outside the open `⌈ρr⌉`-neighbourhood of length exactly `value`.
pub fn verify_sigma_row(
    ball: &BallIndex,
    field: &SubgroupField,
    config: &SigmaConfig,
    row: &DivergenceRow,
) -> Result<bool> {
    let (Some(value), Some((wx, wy))) = (row.value, &row.witness) else {
        return Ok(row.value.is_none() && row.witness.is_none());
    };
    let (Some(x), Some(y)) = (ball.id_of(wx), ball.id_of(wy)) else {
        return Ok(false);
    };
    let r = row.r;
    if field.distance(x) != Some(r) || field.distance(y) != Some(r) {
        return Ok(false);
    }
    if ball.distance(wx, wy) < config.n * r {
        return Ok(false);
    }
    if field.complement_distance(ball, r, x, y)?.is_none() {
        return Ok(false);
    }
    let exclusion = config.rho.ceil_mul(r);
    let Some(path) = field.complement_path(ball, exclusion, x, y) else {
        return Ok(false);
    };
    let adjacent = path
        .windows(2)
        .all(|w| ball.neighbor_ids(w[0]).contains(&w[1]));
    Ok(adjacent
        && path.iter().all(|&v| field.outside(v, exclusion))
        && path.len() as u32 == value + 1)
}

/// An explicit path between two points of `∂N_r(K)` that stays outside the
/// open `r`-neighbourhood of a special subgroup `K`, built from an induced
/// 4-cycle `a1 b1 a2 b2` with `a1, a2 ∈ K` and `b1 ∉ K`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WitnessPath {
    /// Cycle vertices in the order `a1, b1, a2, b2`.
    pub labels: [usize; 4],
    pub path: Vec<NormalWord>,
}

impl WitnessPath {
    pub fn length(&self) -> usize {
        self.path.len() - 1
    }

    pub fn start(&self) -> &NormalWord {
        &self.path[0]
    }

    pub fn end(&self) -> &NormalWord {
        &self.path[self.path.len() - 1]
    }
}

fn orient_cycle(cyc: &InducedCycle, s1: VertexSet) -> Option<[usize; 4]> {
    let c = cyc.vertices();
    for shift in 0..2 {
        let (a1, a2) = (c[shift], c[shift + 2]);
        let (p, q) = (c[(shift + 1) % 4], c[(shift + 3) % 4]);
        if !(s1.contains(a1) && s1.contains(a2)) {
            continue;
        }
        for (b1, b2) in [(p, q), (q, p)] {
            if !s1.contains(b1) {
                return Some([a1, b1, a2, b2]);
            }
        }
    }
    None
}

/// Builds the 4-cycle witness path in the right-angled Coxeter group on `g`.
///
/// With `m = r + 1`, `x` is the alternating `b1 b2 …` word of length `m` and
/// `u` its prefix of length `r`. The path runs `u → x`, then along the
/// alternating `a1 a2 …` word of length `2mn` to `y = x·(a1a2)^{mn}`, then
/// back down to `v = u·(a1a2)^{mn}`. Its length is `2 + 2mn ≤ (4n+2)r`.
pub fn four_cycle_witness_path(
    g: &DefiningGraph,
    s1: VertexSet,
    cyc: &InducedCycle,
    n: u32,
    r: u32,
) -> Result<WitnessPath> {
    if cyc.len() != 4 || !cyc.is_valid_in(g) {
        return Err(Error::Precondition("not an induced 4-cycle of the graph".into()));
    }
    if n < 2 || r == 0 {
        return Err(Error::Precondition("need n >= 2 and r >= 1".into()));
    }
    let labels = orient_cycle(cyc, s1).ok_or_else(|| {
        Error::Precondition("no orientation with a1, a2 in the subgroup and b1 outside".into())
    })?;
    let p = Presentation::racg(g.clone());
    let [a1, b1, a2, b2] = labels.map(|v| p.letter(v, 1));
    let m = r as usize + 1;
    let b_word: Vec<Letter> = (0..m).map(|i| if i % 2 == 0 { b1 } else { b2 }).collect();
    let mut path = Vec::new();
    let mut cur = p.reduce(&b_word[..r as usize]);
    path.push(cur.clone());
    for &x in &b_word[r as usize..] {
        cur = p.mul_letter(&cur, x);
        path.push(cur.clone());
    }
    for i in 0..2 * m * n as usize {
        cur = p.mul_letter(&cur, if i % 2 == 0 { a1 } else { a2 });
        path.push(cur.clone());
    }
    for &x in b_word[r as usize..].iter().rev() {
        cur = p.mul_letter(&cur, x);
        path.push(cur.clone());
    }
    let witness = WitnessPath { labels, path };
    if !verify_witness_path(&p, s1, &witness, n, r) {
        return Err(Error::Precondition("constructed path failed verification".into()));
    }
    Ok(witness)
}

/// Independent check of a witness path: unit steps, every vertex at
/// subgroup distance at least `r`, endpoints at exactly `r` and at least
/// `n·r` apart, and length at most `(4n+2)r`.
pub fn verify_witness_path(p: &Presentation, s1: VertexSet, w: &WitnessPath, n: u32, r: u32) -> bool {
    let r = r as usize;
    let steps_ok = w
        .path
        .windows(2)
        .all(|pair| p.distance(&pair[0], &pair[1]) == 1);
    let outside = w
        .path
        .iter()
        .all(|g| p.special_distance(g.letters(), s1) >= r);
    steps_ok
        && outside
        && p.special_distance(w.start().letters(), s1) == r
        && p.special_distance(w.end().letters(), s1) == r
        && p.distance(w.start(), w.end()) >= n as usize * r
        && w.length() <= (4 * n as usize + 2) * r
}

/// A bi-infinite geodesic through the identity labelled by a repeated period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicGeodesic {
    period: Vec<Letter>,
}

impl PeriodicGeodesic {
    /// Checks that `period^k` is reduced for every `k ≤ horizon`.
    pub fn new(p: &Presentation, period: Vec<Letter>, horizon: usize) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Precondition("empty period".into()));
        }
        let mut w = Vec::new();
        for k in 1..=horizon.max(2) {
            w.extend_from_slice(&period);
            if p.reduce(&w).len() != k * period.len() {
                return Err(Error::Precondition(format!(
                    "period^{k} is not geodesic"
                )));
            }
        }
        Ok(PeriodicGeodesic { period })
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    /// The point `α(t)`: the first `t` letters of `period^∞` for `t ≥ 0`,
    /// and the inverse of the `|t|` letters before the basepoint otherwise.
    pub fn point(&self, p: &Presentation, t: i64) -> NormalWord {
        let len = self.period.len();
        let letters: Vec<Letter> = if t >= 0 {
            (0..t as usize).map(|i| self.period[i % len]).collect()
        } else {
            (1..=t.unsigned_abs() as usize)
                .map(|i| p.inverse_letter(self.period[(len - i % len) % len]))
                .collect()
        };
        p.reduce(&letters)
    }

    /// The same line re-based at `α(t)` for `0 ≤ t < period length`.
    pub fn rotated(&self, t: usize) -> PeriodicGeodesic {
        let mut period = self.period[t % self.period.len()..].to_vec();
        period.extend_from_slice(&self.period[..t % self.period.len()]);
        PeriodicGeodesic { period }
    }
}

fn check_geodesic_radius(ball: &BallIndex, r: u32, slack: u32) -> Result<()> {
    if r == 0 || r + slack > ball.radius() {
        return Err(Error::Precondition(format!(
            "r = {r} needs 1 <= r <= {} - {slack}",
            ball.radius()
        )));
    }
    Ok(())
}

fn divergence_at(ball: &BallIndex, gamma: &PeriodicGeodesic, r: u32) -> DivergenceRow {
    let p = ball.presentation();
    let (fwd, back) = (gamma.point(p, r as i64), gamma.point(p, -(r as i64)));
    let (x, y) = (
        ball.id_of(&fwd).expect("α(r) lies in the ball"),
        ball.id_of(&back).expect("α(-r) lies in the ball"),
    );
    let dist = ball.bfs(&[x], |v| ball.depth(v) >= r);
    let value = (dist[y as usize] != NONE).then(|| dist[y as usize]);
    DivergenceRow {
        r,
        value,
        pairs_examined: 1,
        capped: false,
        witness: value.map(|_| (fwd, back)),
    }
}

/// `Div_α(r)`: in-ball distance from `α(r)` to `α(-r)` through elements at
/// distance at least `r` from the identity.
pub fn geodesic_divergence(
    ball: &BallIndex,
    gamma: &PeriodicGeodesic,
    r_list: &[u32],
    slack: u32,
) -> Result<DivergenceProfile> {
    let mut rows = Vec::new();
    for &r in r_list {
        check_geodesic_radius(ball, r, slack)?;
        rows.push(divergence_at(ball, gamma, r));
    }
    Ok(DivergenceProfile {
        n: 1,
        rho: Rho::ONE,
        r_max: ball.radius(),
        rows,
    })
}

/// `ldiv_α(r)` with the per-offset values it minimizes over.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LowerDivergenceRow {
    pub r: u32,
    pub value: Option<u32>,
    pub offset: usize,
    pub per_offset: Vec<Option<u32>>,
}

/// Lower divergence of a periodic geodesic. Left translation by `α(t)^-1`
/// carries the line centred at `α(t)` to the rotated line through the
/// identity, so one period of integer offsets covers every centre point.
pub fn geodesic_lower_divergence(
    ball: &BallIndex,
    gamma: &PeriodicGeodesic,
    r_list: &[u32],
    slack: u32,
) -> Result<Vec<LowerDivergenceRow>> {
    let rotations: Vec<PeriodicGeodesic> = (0..gamma.period().len()).map(|t| gamma.rotated(t)).collect();
    let mut rows = Vec::new();
    for &r in r_list {
        check_geodesic_radius(ball, r, slack)?;
        let per_offset: Vec<Option<u32>> = rotations
            .iter()
            .map(|rot| divergence_at(ball, rot, r).value)
            .collect();
        let (offset, value) = per_offset
            .iter()
            .enumerate()
            .min_by_key(|(_, v)| v.unwrap_or(u32::MAX))
            .map(|(i, v)| (i, *v))
            .expect("nonempty period");
        rows.push(LowerDivergenceRow { r, value, offset, per_offset });
    }
    Ok(rows)
}

/// The three closed-form bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// `(4n+2)·r`, an upper bound from the 4-cycle witness path.
    WitnessUpper,
    /// `(r−1)(ρr−1)` for subgroups satisfying the 4-cycle containment condition.
    QuadraticLower,
    /// `((r−1)/(3N+1))(ρr−3N) − 2r` for purely loxodromic RAAG subgroups.
    LoxodromicLower,
}

impl BoundKind {
    pub const ALL: [BoundKind; 3] = [BoundKind::WitnessUpper, BoundKind::QuadraticLower, BoundKind::LoxodromicLower];

    pub fn token(self) -> &'static str {
        match self {
            BoundKind::WitnessUpper => "witness_upper",
            BoundKind::QuadraticLower => "quadratic_lower",
            BoundKind::LoxodromicLower => "loxodromic_lower",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.token() == s)
            .ok_or_else(|| Error::Validation(format!("unknown bound kind {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundArgs {
    pub n: u32,
    pub r: u32,
    pub rho: Rho,
    /// Bound on join subwords of the subgroup generators (the `N` above).
    pub join_bound: Option<u32>,
    /// Morse gauge constant; when given, `r > (2M+3N+2)/ρ` is enforced.
    pub gauge: Option<u32>,
}

impl BoundArgs {
    pub fn new(n: u32, r: u32, rho: Rho) -> Self {
        BoundArgs {
            n,
            r,
            rho,
            join_bound: None,
            gauge: None,
        }
    }
}

/// The closed form without range checks.
pub fn bound_closed_form(kind: BoundKind, args: &BoundArgs) -> Ratio<i64> {
    let r = Ratio::from_integer(args.r as i64);
    let n = Ratio::from_integer(args.n as i64);
    let rho = args.rho.as_ratio();
    let one = Ratio::from_integer(1);
    match kind {
        BoundKind::WitnessUpper => (n * 4 + 2) * r,
        BoundKind::QuadraticLower => (r - one) * (rho * r - one),
        BoundKind::LoxodromicLower => {
            let big_n = Ratio::from_integer(args.join_bound.unwrap_or(0) as i64);
            (r - one) / (big_n * 3 + one) * (rho * r - big_n * 3) - r * 2
        }
    }
}

/// Exact evaluation of a bound inside the parameter range where it is proved.
pub fn checked_bound(kind: BoundKind, args: &BoundArgs) -> Result<Ratio<i64>> {
    if args.r == 0 {
        return Err(Error::Precondition("r must be positive".into()));
    }
    match kind {
        BoundKind::WitnessUpper if args.n < 2 => {
            return Err(Error::Precondition("witness_upper needs n >= 2".into()));
        }
        BoundKind::QuadraticLower if args.n < 3 => {
            return Err(Error::Precondition("quadratic_lower needs n >= 3".into()));
        }
        BoundKind::LoxodromicLower => {
            if args.n < 9 {
                return Err(Error::Precondition("loxodromic_lower needs n >= 9".into()));
            }
            let big_n = args
                .join_bound
                .ok_or_else(|| Error::Precondition("loxodromic_lower needs the join bound N".into()))?;
            if let Some(m) = args.gauge {
                let min = Ratio::from_integer(2 * m as i64 + 3 * big_n as i64 + 2) / args.rho.as_ratio();
                if Ratio::from_integer(args.r as i64) <= min {
                    return Err(Error::Precondition(format!("loxodromic_lower needs r > {min}")));
                }
            }
        }
        _ => {}
    }
    Ok(bound_closed_form(kind, args))
}

/// Log-log slope and a monotonicity test of `value / r`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GrowthReport {
    pub loglog_slope: f64,
    pub superlinear: bool,
    pub rows_used: usize,
}

/// Least-squares slope of `ln value` against `ln r` over finite rows, and
/// whether `value / r` strictly increases along them. A diagnostic only.
pub fn growth_diagnostic(points: &[(u32, Option<u32>)]) -> Result<GrowthReport> {
    let finite: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|&(r, v)| v.filter(|&v| v > 0 && r > 0).map(|v| (r as f64, v as f64)))
        .collect();
    if finite.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} finite rows, need at least 3",
            finite.len()
        )));
    }
    let k = finite.len() as f64;
    let xs: Vec<f64> = finite.iter().map(|&(r, _)| libm::log(r)).collect();
    let ys: Vec<f64> = finite.iter().map(|&(_, v)| libm::log(v)).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all rows share one radius".into()));
    }
    let superlinear = finite
        .windows(2)
        .all(|w| w[1].1 * w[0].0 > w[0].1 * w[1].0);
    Ok(GrowthReport {
        loglog_slope: sxy / sxx,
        superlinear,
        rows_used: finite.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::SubgroupSpec;

    #[test]
    fn rho_parsing() {
        assert_eq!("1".parse::<Rho>().unwrap(), Rho::ONE);
        assert_eq!("0.5".parse::<Rho>().unwrap(), Rho::new(1, 2).unwrap());
        assert_eq!("2/4".parse::<Rho>().unwrap(), Rho::new(1, 2).unwrap());
        assert!("0".parse::<Rho>().is_err());
        assert!("3/2".parse::<Rho>().is_err());
        assert_eq!(Rho::new(1, 2).unwrap().ceil_mul(3), 2);
    }

    #[test]
    fn bound_examples() {
        let b = |kind, n, r, big_n| {
            let mut args = BoundArgs::new(n, r, Rho::ONE);
            args.join_bound = big_n;
            checked_bound(kind, &args)
        };
        assert_eq!(b(BoundKind::WitnessUpper, 2, 3, None).unwrap(), Ratio::from_integer(30));
        assert_eq!(b(BoundKind::QuadraticLower, 3, 1, None).unwrap(), Ratio::from_integer(0));
        assert_eq!(b(BoundKind::LoxodromicLower, 9, 10, Some(2)).unwrap(), Ratio::new(-104, 7));
        assert!(b(BoundKind::QuadraticLower, 2, 3, None).is_err());
        assert!(b(BoundKind::LoxodromicLower, 8, 10, Some(2)).is_err());
        assert!(b(BoundKind::LoxodromicLower, 9, 10, None).is_err());
        let mut args = BoundArgs::new(9, 10, Rho::ONE);
        args.join_bound = Some(2);
        args.gauge = Some(1);
        assert!(checked_bound(BoundKind::LoxodromicLower, &args).is_err());
        args.r = 11;
        assert!(checked_bound(BoundKind::LoxodromicLower, &args).is_ok());
    }

    #[test]
    fn growth_on_synthetic_rows() {
        let quad: Vec<_> = (1..6).map(|r| (r, Some(r * r))).collect();
        let rep = growth_diagnostic(&quad).unwrap();
        assert!((rep.loglog_slope - 2.0).abs() < 1e-9);
        assert!(rep.superlinear);
        let lin: Vec<_> = (1..6).map(|r| (r, Some(3 * r))).collect();
        assert!(!growth_diagnostic(&lin).unwrap().superlinear);
        assert!(growth_diagnostic(&[(1, Some(1)), (2, None), (3, Some(4))]).is_err());
    }

    #[test]
    fn witness_paths_on_c4() {
        let g = DefiningGraph::c4();
        let s1 = g.vertex_set(&["a1", "a2"]).unwrap();
        let cyc = g.induced_4cycles().remove(0);
        for r in 1..=3 {
            let w = four_cycle_witness_path(&g, s1, &cyc, 2, r).unwrap();
            assert_eq!(w.length() as u32, 2 + 2 * (r + 1) * 2);
            assert!(w.length() as u32 <= 10 * r);
        }
        let adjacent_pair = g.vertex_set(&["a1", "b1"]).unwrap();
        assert!(four_cycle_witness_path(&g, adjacent_pair, &cyc, 2, 2).is_err());
        assert!(four_cycle_witness_path(&g, g.all(), &cyc, 2, 2).is_err());
    }

    #[test]
    fn periodic_points() {
        let p = Presentation::racg(DefiningGraph::gamma_d(2).unwrap());
        let period = p.parse_letters("a2 b2").unwrap();
        let gamma = PeriodicGeodesic::new(&p, period, 8).unwrap();
        assert_eq!(p.format(&gamma.point(&p, 3)), "a2 b2 a2");
        assert_eq!(p.format(&gamma.point(&p, -3)), "b2 a2 b2");
        assert!(gamma.point(&p, 0).is_identity());
        let rot = gamma.rotated(1);
        assert_eq!(p.format(&rot.point(&p, 2)), "b2 a2");
        let commuting = p.parse_letters("a0 a1").unwrap();
        assert!(PeriodicGeodesic::new(&p, commuting, 4).is_err());
    }

    #[test]
    fn sigma_on_c4_respects_the_witness_bound() {
        let p = Presentation::racg(DefiningGraph::c4());
        let ball = BallIndex::build(&p, 12, 1_000_000).unwrap();
        let s1 = p.graph().vertex_set(&["a1", "a2"]).unwrap();
        let field = SubgroupField::new(&ball, &SubgroupSpec::Special(s1)).unwrap();
        let config = SigmaConfig::new(2, Rho::ONE);
        let profile = sigma_profile(&ball, &field, &config, &[2, 3]).unwrap();
        for row in &profile.rows {
            let value = row.value.expect("finite");
            assert!(value <= 10 * row.r);
            assert!(value >= 2 * row.r);
            assert!(verify_sigma_row(&ball, &field, &config, row).unwrap());
        }
        assert!(sigma_profile(&ball, &field, &config, &[5]).is_err());
    }
}
