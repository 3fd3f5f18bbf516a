//! Canned acceptance experiments E1 to E5.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use morselab_core::{
    classify_special_racg, four_cycle_witness_path, geodesic_divergence, growth_diagnostic, loxodromic_report,
    checked_bound, sigma_profile, verify_sigma_row, verify_witness_path, BallIndex, BoundArgs, BoundKind,
    DefiningGraph, Error, GroupKind, Letter, NormalWord, PeriodicGeodesic, Presentation, Rho, SigmaConfig,
    SubgroupField, SubgroupSpec, Verdict, VertexSet, Witness, DEFAULT_ELEMENT_BUDGET, NONE,
};
use morselab_oracle::{Mat, MatrixGroup, Symbol};
use num_rational::Ratio;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::io;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Recipe {
    #[value(name = "E1")]
    E1,
    #[value(name = "E2")]
    E2,
    #[value(name = "E3")]
    E3,
    #[value(name = "E4")]
    E4,
    #[value(name = "E5")]
    E5,
}

impl Recipe {
    pub const ALL: [Recipe; 5] = [Recipe::E1, Recipe::E2, Recipe::E3, Recipe::E4, Recipe::E5];

    pub fn time_limit(self) -> Duration {
        Duration::from_secs(match self {
            Recipe::E1 => 10,
            Recipe::E2 => 30,
            Recipe::E3 => 300,
            Recipe::E4 => 600,
            Recipe::E5 => 300,
        })
    }

    fn default_rmax(self) -> u32 {
        match self {
            Recipe::E1 => 14,
            Recipe::E2 => 0,
            Recipe::E3 => 12,
            Recipe::E4 => 45,
            Recipe::E5 => 10,
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug)]
pub struct RecipeOptions {
    pub seed: u64,
    pub rmax: Option<u32>,
    pub budget: usize,
}

impl Default for RecipeOptions {
    fn default() -> Self {
        RecipeOptions {
            seed: 1,
            rmax: None,
            budget: DEFAULT_ELEMENT_BUDGET,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(label: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            label: label.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RecipeReport {
    pub recipe: Recipe,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl RecipeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// One line per sub-check followed by the overall verdict.
    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .checks
            .iter()
            .map(|c| format!("  {} {}.{}: {}", verdict(c.pass), self.recipe, c.label, c.detail))
            .collect();
        out.push(format!(
            "{} {} ({} checks, {:.1}s)",
            verdict(self.passed()),
            self.recipe,
            self.checks.len(),
            self.elapsed.as_secs_f64()
        ));
        out
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn run(recipe: Recipe, opts: &RecipeOptions) -> RecipeReport {
    let start = Instant::now();
    let rmax = opts.rmax.unwrap_or(recipe.default_rmax());
    let mut checks = match recipe {
        Recipe::E1 => e1(rmax, opts),
        Recipe::E2 => e2(),
        Recipe::E3 => e3(rmax, opts),
        Recipe::E4 => e4(rmax, opts),
        Recipe::E5 => e5(rmax, opts),
    };
    let elapsed = start.elapsed();
    let limit = recipe.time_limit();
    checks.push(Check::new(
        "runtime",
        elapsed <= limit,
        format!("{:.1}s within {}s", elapsed.as_secs_f64(), limit.as_secs()),
    ));
    RecipeReport {
        recipe,
        checks,
        elapsed,
    }
}

fn failure(label: &str, e: &Error) -> Check {
    let detail = match e {
        Error::BudgetExceeded { .. } => format!("{e}; lower --rmax or raise --budget"),
        other => other.to_string(),
    };
    Check::new(label, false, detail)
}

pub fn matrix_group(p: &Presentation) -> MatrixGroup {
    let g = p.graph();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    match p.kind() {
        GroupKind::Racg => MatrixGroup::racg(g.vertex_count(), &edges),
        GroupKind::Raag => MatrixGroup::raag(g.vertex_count(), &edges),
    }
}

fn symbols(letters: &[Letter]) -> Vec<Symbol> {
    letters.iter().map(|x| (x.vertex(), x.is_inverted())).collect()
}

fn special_gens(s1: VertexSet) -> Vec<Vec<Symbol>> {
    s1.iter().map(|v| vec![(v, false)]).collect()
}

fn names(p: &Presentation, s: VertexSet) -> String {
    let v: Vec<&str> = s.iter().map(|v| p.graph().name(v)).collect();
    format!("{{{}}}", v.join(","))
}

fn racg(family: &str) -> Presentation {
    Presentation::racg(DefiningGraph::family(family).expect("built-in family"))
}

/// Distances to `⟨a1,a2⟩` in the square group, three ways: greedy descent,
/// multi-source BFS in the normal-form ball, and BFS in the matrix oracle.
fn e1(rmax: u32, opts: &RecipeOptions) -> Vec<Check> {
    let p = racg("c4");
    let ball = match io::ball(&p, rmax, opts.budget) {
        Ok(b) => b,
        Err(e) => return vec![failure("distances", &e)],
    };
    let s1 = p.graph().vertex_set(&["a1", "a2"]).unwrap();
    let field = SubgroupField::new(&ball, &SubgroupSpec::Special(s1)).unwrap();
    let members: Vec<u32> = (0..ball.len() as u32)
        .filter(|&id| ball.word(id).iter().all(|x| s1.contains(x.vertex())))
        .collect();
    let in_ball = ball.bfs(&members, |_| true);
    let m = matrix_group(&p);
    let member_mats: Vec<Mat> = members.iter().map(|&id| m.evaluate(&symbols(ball.word(id)))).collect();
    let oracle = m.bfs(&member_mats, rmax);
    let [b1, b2] = ["b1", "b2"].map(|s| p.parse_letters(s).unwrap()[0]);
    let mut checks = Vec::new();
    for n in 1..=6usize {
        let pow: Vec<Letter> = (0..2 * n).map(|i| if i % 2 == 0 { b1 } else { b2 }).collect();
        let mut tail = pow.clone();
        tail.push(b1);
        for (label, w, expected) in [
            (format!("(b1b2)^{n}"), pow, 2 * n as u32),
            (format!("(b1b2)^{n}b1"), tail, 2 * n as u32 + 1),
        ] {
            let word = p.reduce(&w);
            let greedy = p.special_distance(word.letters(), s1) as u32;
            let Some(id) = ball.id_of(&word) else {
                checks.push(Check::new(label, false, format!("outside the radius-{rmax} ball")));
                continue;
            };
            let field_d = field.distance(id);
            let bfs_d = (in_ball[id as usize] != NONE).then_some(in_ball[id as usize]);
            let oracle_d = oracle.get(&m.evaluate(&symbols(word.letters()))).copied();
            let pass = greedy == expected
                && field_d == Some(expected)
                && bfs_d == Some(expected)
                && oracle_d == Some(expected);
            checks.push(Check::new(
                label,
                pass,
                format!("expected {expected}: greedy {greedy}, field {field_d:?}, ball BFS {bfs_d:?}, oracle BFS {oracle_d:?}"),
            ));
        }
    }
    checks
}

/// Induced 4-cycles found by testing every 4-subset in its three cyclic orders.
fn brute_squares(g: &DefiningGraph) -> Vec<[usize; 4]> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    for [w, x, y, z] in [[a, b, c, d], [a, b, d, c], [a, c, b, d]] {
                        let sides = g.adjacent(w, x) && g.adjacent(x, y) && g.adjacent(y, z) && g.adjacent(z, w);
                        if sides && !g.adjacent(w, y) && !g.adjacent(x, z) {
                            out.push([w, x, y, z]);
                        }
                    }
                }
            }
        }
    }
    out
}

fn brute_verdicts(g: &DefiningGraph, squares: &[[usize; 4]], s1: VertexSet) -> [Verdict; 3] {
    let n = g.vertex_count();
    let triangle = (0..n).any(|a| (a + 1..n).any(|b| (b + 1..n).any(|c| g.adjacent(a, b) && g.adjacent(b, c) && g.adjacent(a, c))));
    if triangle {
        return [Verdict::OutsideScope; 3];
    }
    let diagonal = |q: &[usize; 4]| (s1.contains(q[0]) && s1.contains(q[2])) || (s1.contains(q[1]) && s1.contains(q[3]));
    let sqc = squares.iter().all(|q| !diagonal(q) || q.iter().all(|&v| s1.contains(v)));
    let stable = squares.iter().all(|q| !diagonal(q));
    let members: Vec<usize> = s1.iter().collect();
    let clique = members.iter().all(|&u| members.iter().all(|&v| u == v || g.adjacent(u, v)));
    [sqc.into(), stable.into(), clique.into()]
}

fn e2() -> Vec<Check> {
    let mut checks = Vec::new();
    for family in ["c4", "gamma_d:2", "omega_d:2", "cycle:5"] {
        let g = DefiningGraph::family(family).unwrap();
        let squares = brute_squares(&g);
        let total = 1u64 << g.vertex_count();
        let mut mismatches = Vec::new();
        let mut failing = 0;
        for bits in 0..total {
            let s1 = VertexSet::from_bits(bits);
            let rep = classify_special_racg(&g, s1);
            let got = [rep.strongly_quasiconvex, rep.stable, rep.finite];
            if got != brute_verdicts(&g, &squares, s1) {
                mismatches.push(bits);
            }
            failing += usize::from(rep.strongly_quasiconvex == Verdict::False);
        }
        checks.push(Check::new(
            format!("classifier[{family}]"),
            mismatches.is_empty(),
            format!(
                "{total} subsets, {} induced 4-cycles, {failing} not strongly quasiconvex, {} mismatches",
                squares.len(),
                mismatches.len()
            ),
        ));
    }
    checks.push(e2_witnesses());
    checks
}

/// Every non-quasiconvex subset of the square gets a witness path for n = 2,
/// r = 2, 3, checked against a matrix-oracle BFS from the subgroup.
fn e2_witnesses() -> Check {
    let p = racg("c4");
    let g = p.graph();
    let m = matrix_group(&p);
    let n = 2;
    let mut paths = 0;
    let mut problems = Vec::new();
    for bits in 0u64..16 {
        let s1 = VertexSet::from_bits(bits);
        let rep = classify_special_racg(g, s1);
        if rep.strongly_quasiconvex != Verdict::False {
            continue;
        }
        let Some((_, Witness::PartialFourCycle(cyc))) = rep.witnesses.iter().find(|(k, _)| k == "strongly_quasiconvex")
        else {
            problems.push(format!("{} has no 4-cycle witness", names(&p, s1)));
            continue;
        };
        let members = m.subgroup_elements(&special_gens(s1), 48);
        for r in [2u32, 3] {
            match four_cycle_witness_path(g, s1, cyc, n, r) {
                Ok(w) => {
                    paths += 1;
                    let near = m.bfs(&members, r - 1);
                    let inside = w.path.iter().filter(|v| near.contains_key(&m.evaluate(&symbols(v.letters())))).count();
                    let bound = (4 * n + 2) * r;
                    if inside > 0 || w.length() as u32 > bound || !verify_witness_path(&p, s1, &w, n, r) {
                        problems.push(format!(
                            "{} r={r}: length {} (bound {bound}), {inside} vertices inside N_r",
                            names(&p, s1),
                            w.length()
                        ));
                    }
                }
                Err(e) => problems.push(format!("{} r={r}: {e}", names(&p, s1))),
            }
        }
    }
    let detail = if problems.is_empty() {
        format!("{paths} witness paths, all within (4n+2)r and outside N_r(K)")
    } else {
        problems.join("; ")
    };
    Check::new("four_cycle_witness[c4]", problems.is_empty() && paths > 0, detail)
}

fn pick_e3_subset(p: &Presentation) -> (VertexSet, String) {
    let g = p.graph();
    let first = g.vertex_set(&["a0", "b0"]).unwrap();
    let rep = classify_special_racg(g, first);
    if rep.strongly_quasiconvex == Verdict::True {
        return (first, "{a0,b0} passes condition (2)".into());
    }
    let fallback = g.vertex_set(&["a1"]).unwrap();
    let finite = classify_special_racg(g, fallback).finite == Verdict::True;
    (
        fallback,
        format!("{{a0,b0}} fails condition (2); using {{a1}}{}", if finite { " (a finite subgroup)" } else { "" }),
    )
}

fn quadratic_rows(label: &str, ball: &BallIndex, s1: VertexSet, note: &str) -> Check {
    let p = ball.presentation();
    let field = SubgroupField::new(ball, &SubgroupSpec::Special(s1)).unwrap();
    let config = SigmaConfig::new(3, Rho::ONE);
    let profile = match sigma_profile(ball, &field, &config, &[2, 3]) {
        Ok(prof) => prof,
        Err(e) => return failure(label, &e),
    };
    let mut pass = true;
    let mut parts = vec![format!("{} {note}", names(p, s1))];
    for row in &profile.rows {
        let bound = checked_bound(BoundKind::QuadraticLower, &BoundArgs::new(3, row.r, Rho::ONE)).unwrap();
        let ok = match row.value {
            Some(v) => {
                Ratio::from_integer(v as i64) >= bound && verify_sigma_row(ball, &field, &config, row).unwrap_or(false)
            }
            None => true,
        };
        pass &= ok;
        parts.push(format!(
            "r={} value={} bound={bound} pairs={} capped={}",
            row.r,
            row.value.map_or("inf".into(), |v| v.to_string()),
            row.pairs_examined,
            row.capped
        ));
    }
    Check::new(label, pass, parts.join("; "))
}

fn e3(rmax: u32, opts: &RecipeOptions) -> Vec<Check> {
    let p = racg("gamma_d:2");
    let ball = match io::ball(&p, rmax, opts.budget) {
        Ok(b) => b,
        Err(e) => return vec![failure("sigma", &e)],
    };
    let (s1, note) = pick_e3_subset(&p);
    let supplementary = p.graph().vertex_set(&["a2", "b2"]).unwrap();
    vec![
        quadratic_rows("sigma", &ball, s1, &note),
        quadratic_rows("sigma_supplementary", &ball, supplementary, "(infinite, passes condition (2))"),
    ]
}

fn e4(rmax: u32, opts: &RecipeOptions) -> Vec<Check> {
    let p = Presentation::raag(DefiningGraph::p4());
    let gens: Vec<NormalWord> = ["a d a", "d a d"].iter().map(|s| p.parse(s).unwrap()).collect();
    let mut checks = Vec::new();
    match loxodromic_report(&p, &gens, 4) {
        Ok(rep) => {
            let all_lox = rep.words.iter().all(|w| w.loxodromic);
            checks.push(Check::new(
                "loxodromic",
                all_lox && rep.no_counterexample(),
                format!("generators and {} products up to 4-fold, counterexample {:?}", rep.products_checked, rep.counterexample.as_ref().map(|(_, w)| p.format(w))),
            ));
            checks.push(Check::new(
                "join_subwords",
                rep.max_join_subword <= 2,
                format!("max join subword length {}", rep.max_join_subword),
            ));
        }
        Err(e) => checks.push(failure("loxodromic", &e)),
    }
    let big_n = 2;
    let mut bounds = Vec::new();
    for r in [3u32, 4] {
        let mut args = BoundArgs::new(9, r, Rho::ONE);
        args.join_bound = Some(big_n);
        bounds.push((r, checked_bound(BoundKind::LoxodromicLower, &args).unwrap()));
    }
    let bound_text: Vec<String> = bounds.iter().map(|(r, b)| format!("loxodromic_lower({r})={b}")).collect();
    let field_for = |ball: &BallIndex| SubgroupField::new(ball, &SubgroupSpec::FinitelyGenerated(gens.clone()));
    match io::ball(&p, rmax, opts.budget) {
        Err(e) => {
            let mut c = failure("sigma", &e);
            c.detail = format!("{}; {}", c.detail, bound_text.join(", "));
            checks.push(c);
            checks.push(failure("growth", &e));
        }
        Ok(ball) => {
            let field = match field_for(&ball) {
                Ok(f) => f,
                Err(e) => {
                    checks.push(failure("sigma", &e));
                    return checks;
                }
            };
            let config = SigmaConfig::new(9, Rho::ONE);
            match sigma_profile(&ball, &field, &config, &[3, 4]) {
                Ok(profile) => {
                    let ok = profile.rows.iter().zip(&bounds).all(|(row, (_, b))| {
                        *b <= Ratio::from_integer(0) || row.value.is_some_and(|v| Ratio::from_integer(v as i64) >= *b)
                    });
                    let values: Vec<String> = profile.rows.iter().map(|r| format!("r={} value={:?}", r.r, r.value)).collect();
                    checks.push(Check::new("sigma", ok, format!("{}; {}", values.join(", "), bound_text.join(", "))));
                }
                Err(e) => checks.push(failure("sigma", &e)),
            }
            match sigma_profile(&ball, &field, &config, &[2, 3, 4, 5]) {
                Ok(profile) => {
                    let points: Vec<(u32, Option<u32>)> = profile.rows.iter().map(|r| (r.r, r.value)).collect();
                    match growth_diagnostic(&points) {
                        Ok(g) => checks.push(Check::new(
                            "growth",
                            g.superlinear,
                            format!("slope {:.2}, superlinear={}", g.loglog_slope, g.superlinear),
                        )),
                        Err(e) => checks.push(failure("growth", &e)),
                    }
                }
                Err(e) => checks.push(failure("growth", &e)),
            }
        }
    }
    checks
}

fn random_element(p: &Presentation, rng: &mut StdRng, max_len: usize) -> NormalWord {
    let gens = p.generators();
    let len = rng.gen_range(0..=max_len);
    let w: Vec<Letter> = (0..len).map(|_| gens[rng.gen_range(0..gens.len())]).collect();
    p.reduce(&w)
}

fn e5(rmax: u32, opts: &RecipeOptions) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let mut checks = Vec::new();
    for (label, p) in [
        ("normal_form_lengths[c4]", racg("c4")),
        ("normal_form_lengths[p4]", Presentation::raag(DefiningGraph::p4())),
    ] {
        checks.push(e5_lengths(label, &p));
    }
    checks.push(e5_coset_scan(&mut rng));
    checks.push(e5_cone_distance(&mut rng));
    checks.push(e5_sandwich(rmax, opts));
    checks
}

fn e5_lengths(label: &str, p: &Presentation) -> Check {
    let radius = 5;
    let ball = BallIndex::build(p, radius, DEFAULT_ELEMENT_BUDGET).unwrap();
    let m = matrix_group(p);
    let oracle = m.ball(radius);
    let mut seen: HashMap<Mat, u32> = HashMap::new();
    let mut bad = 0;
    for id in 0..ball.len() as u32 {
        let mat = m.evaluate(&symbols(ball.word(id)));
        if oracle.length(&mat) != Some(ball.depth(id)) || seen.insert(mat, id).is_some() {
            bad += 1;
        }
    }
    let pass = bad == 0 && ball.len() == oracle.len();
    Check::new(
        label,
        pass,
        format!("{} normal forms vs {} oracle elements, {bad} disagreements", ball.len(), oracle.len()),
    )
}

/// Greedy special distance against the minimum over the coset, scanned by
/// BFS in the matrix oracle from `g` until subgroup elements are met.
fn e5_coset_scan(rng: &mut StdRng) -> Check {
    let p = racg("gamma_d:2");
    let m = matrix_group(&p);
    let n = p.graph().vertex_count();
    let mut bad = Vec::new();
    for _ in 0..200 {
        let g = random_element(&p, rng, 5);
        let s1 = VertexSet::from_bits(rng.gen_range(1..1u64 << n));
        let greedy = p.special_distance(g.letters(), s1) as u32;
        // a nearest subgroup element has length at most 2|g|
        let members: std::collections::HashSet<Mat> =
            m.subgroup_elements(&special_gens(s1), 2 * g.len() as u32).into_iter().collect();
        let dist = m.bfs(&[m.evaluate(&symbols(g.letters()))], g.len() as u32);
        let scan = dist.iter().filter(|(k, _)| members.contains(*k)).map(|(_, &d)| d).min();
        if scan != Some(greedy) {
            bad.push(format!("{} in {}: greedy {greedy}, scan {scan:?}", p.format(&g), names(&p, s1)));
        }
    }
    let detail = if bad.is_empty() {
        "200 seeded elements agree".to_string()
    } else {
        bad.join("; ")
    };
    Check::new("coset_scan[gamma_d:2]", bad.is_empty(), detail)
}

fn e5_cone_distance(rng: &mut StdRng) -> Check {
    let gamma = racg("gamma_d:2");
    let omega = racg("omega_d:2");
    let link = gamma.graph().vertex_set(&["a2", "b2"]).unwrap();
    let base = omega.graph().vertex_set(gamma.graph().names()).unwrap();
    let t = omega.parse_letters("t").unwrap()[0];
    let mut bad = Vec::new();
    for _ in 0..50 {
        let x = random_element(&gamma, rng, 5);
        let text = gamma.format(&x);
        let tx = omega.reduce(&[&[t][..], omega.parse_letters(&text).unwrap().as_slice()].concat());
        let lhs = omega.special_distance(tx.letters(), base);
        let rhs = gamma.special_distance(x.letters(), link) + 1;
        if lhs != rhs {
            bad.push(format!("x={text}: {lhs} vs {rhs}"));
        }
    }
    let detail = if bad.is_empty() {
        "50 seeded x satisfy d(tx, G_Gamma) = d(x, <a2,b2>) + 1".to_string()
    } else {
        bad.join("; ")
    };
    Check::new("cone_distance", bad.is_empty(), detail)
}

fn e5_sandwich(rmax: u32, opts: &RecipeOptions) -> Check {
    let rs = [2, 3, 4, 5];
    let mut profiles = Vec::new();
    for family in ["gamma_d:2", "omega_d:2"] {
        let p = racg(family);
        let ball = match io::ball(&p, rmax, opts.budget) {
            Ok(b) => b,
            Err(e) => return failure("sandwich", &e),
        };
        let line = PeriodicGeodesic::new(&p, p.parse_letters("a2 b2").unwrap(), 2 * rmax as usize + 2).unwrap();
        match geodesic_divergence(&ball, &line, &rs, 0) {
            Ok(prof) => profiles.push(prof),
            Err(e) => return failure("sandwich", &e),
        }
    }
    let mut pass = true;
    let mut parts = Vec::new();
    for (g, o) in profiles[0].rows.iter().zip(&profiles[1].rows) {
        let ok = o.value.unwrap_or(u32::MAX) <= g.value.unwrap_or(u32::MAX);
        pass &= ok;
        let show = |v: Option<u32>| v.map_or("inf".into(), |v| v.to_string());
        parts.push(format!("r={}: Omega {} <= Gamma {}", g.r, show(o.value), show(g.value)));
    }
    Check::new("sandwich", pass, parts.join(", "))
}
