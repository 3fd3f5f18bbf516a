mod common;

use std::collections::HashSet;
use std::sync::OnceLock;

use common::{element, matrix, matrix_group};
use morselab_core::{BallIndex, DefiningGraph, Presentation, SubgroupField, SubgroupSpec, VertexSet, NONE};
use morselab_oracle::{Mat, Symbol};
use proptest::prelude::*;

fn gamma2() -> &'static (Presentation, BallIndex) {
    static CELL: OnceLock<(Presentation, BallIndex)> = OnceLock::new();
    CELL.get_or_init(|| {
        let p = Presentation::racg(DefiningGraph::gamma_d(2).unwrap());
        let ball = BallIndex::build(&p, 7, 1_000_000).unwrap();
        (p, ball)
    })
}

#[test]
fn balls_match_matrix_enumeration() {
    for p in [
        Presentation::racg(DefiningGraph::c4()),
        Presentation::raag(DefiningGraph::p4()),
    ] {
        let ball = BallIndex::build(&p, 6, 1_000_000).unwrap();
        let oracle = matrix_group(&p).ball(6);
        assert_eq!(ball.len(), oracle.len());
        let sizes: Vec<usize> = (0..=6).map(|k| ball.layer(k).len()).collect();
        assert_eq!(sizes, oracle.sphere_sizes());
    }
}

#[test]
fn special_subgroup_membership_on_c4() {
    let p = Presentation::racg(DefiningGraph::c4());
    let ball = BallIndex::build(&p, 5, 10_000).unwrap();
    let m = matrix_group(&p);
    for mask in 0u64..16 {
        let s1 = VertexSet::from_bits(mask);
        let gens: Vec<Vec<Symbol>> = s1.iter().map(|v| vec![(v, false)]).collect();
        let members = m.subgroup_elements(&gens, 10);
        let field = SubgroupField::new(&ball, &SubgroupSpec::Special(s1)).unwrap();
        for id in 0..ball.len() as u32 {
            let inside = members.contains(&matrix(&m, ball.word(id)));
            assert_eq!(field.distance(id) == Some(0), inside, "mask {mask} element {id}");
        }
        let sphere = field.boundary_sphere(&ball, 0, 0).unwrap();
        assert!(sphere.iter().all(|&id| p.special_subgroup_member(&ball.normal_word(id), s1)));
    }
}

#[test]
fn finitely_generated_field_matches_oracle_where_certified() {
    let p = Presentation::raag(DefiningGraph::p4());
    let ball = BallIndex::build(&p, 5, 1_000_000).unwrap();
    let gens = vec![p.parse("a d a").unwrap(), p.parse("d a d").unwrap()];
    let field = SubgroupField::new(&ball, &SubgroupSpec::FinitelyGenerated(gens.clone())).unwrap();
    let m = matrix_group(&p);
    let gen_symbols: Vec<Vec<Symbol>> = gens.iter().map(|g| common::symbols(g.letters())).collect();
    // products of s free generators have length exactly 3s, so s <= 2 covers the ball
    let members = m.subgroup_elements(&gen_symbols, 2);
    let dist = m.bfs(&members, 5);
    let mut certified = 0;
    for id in 0..ball.len() as u32 {
        let truth = dist.get(&matrix(&m, ball.word(id))).copied();
        if let Some(d) = field.distance(id) {
            certified += 1;
            assert_eq!(Some(d), truth, "{}", p.format_letters(ball.word(id)));
        } else {
            // unresolved values are upper bounds
            assert!(field.upper_bound(id) == NONE || truth.is_none_or(|t| t <= field.upper_bound(id)));
        }
    }
    assert!(certified > ball.layer(2).end as usize);
    // two bands of generator length 3 need radius 6
    assert!(!field.appears_infinite());
    let wider = BallIndex::build(&p, 7, 1_000_000).unwrap();
    let spec = SubgroupSpec::FinitelyGenerated(gens);
    assert!(SubgroupField::new(&wider, &spec).unwrap().appears_infinite());
}

#[test]
fn finite_special_subgroups_do_not_appear_infinite() {
    let p = Presentation::racg(DefiningGraph::c4());
    let ball = BallIndex::build(&p, 8, 10_000).unwrap();
    let edge = p.graph().vertex_set(&["a1", "b1"]).unwrap();
    assert!(!SubgroupField::new(&ball, &SubgroupSpec::Special(edge)).unwrap().appears_infinite());
    let diagonal = p.graph().vertex_set(&["a1", "a2"]).unwrap();
    assert!(SubgroupField::new(&ball, &SubgroupSpec::Special(diagonal)).unwrap().appears_infinite());
}

#[test]
fn complement_distance_at_radius_zero_is_ball_distance() {
    let (p, ball) = gamma2();
    let field = SubgroupField::new(ball, &SubgroupSpec::Special(VertexSet::singleton(2))).unwrap();
    let step = ball.len() / 37;
    for x in (0..ball.len() as u32).step_by(step) {
        let dist = ball.bfs(&[x], |_| true);
        for y in (0..ball.len() as u32).step_by(step * 3 + 1) {
            let d0 = field.complement_distance(ball, 0, x, y).unwrap();
            assert_eq!(d0, Some(dist[y as usize]));
            assert!(d0.unwrap() >= p.distance(&ball.normal_word(x), &ball.normal_word(y)) as u32);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn greedy_special_distance_equals_coset_scan(g in element(&gamma2().0, 5), mask in 1u64..64) {
        let (p, _) = gamma2();
        let s1 = VertexSet::from_bits(mask);
        let m = matrix_group(p);
        // a nearest subgroup element has length at most 2|g| <= 10
        let gens: Vec<Vec<Symbol>> = s1.iter().map(|v| vec![(v, false)]).collect();
        let members: HashSet<Mat> = m.subgroup_elements(&gens, 10).into_iter().collect();
        let dist = m.bfs(&[matrix(&m, g.letters())], 5);
        let scan = dist.iter().filter(|(k, _)| members.contains(*k)).map(|(_, &d)| d).min();
        prop_assert_eq!(Some(p.special_distance(g.letters(), s1) as u32), scan);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn complement_metric_properties(
        (a, b, c) in (0u32..2000, 0u32..2000, 0u32..2000),
        mask in 1u64..64,
    ) {
        let (p, ball) = gamma2();
        let s1 = VertexSet::from_bits(mask);
        let field = SubgroupField::new(ball, &SubgroupSpec::Special(s1)).unwrap();
        let pick = |i: u32| i % ball.len() as u32;
        let (x, y, z) = (pick(a), pick(b), pick(c));
        let r = [x, y, z].iter().map(|&v| field.distance(v).unwrap()).min().unwrap();
        let (wx, wy) = (ball.normal_word(x), ball.normal_word(y));
        let mut previous = 0;
        for radius in 0..=r {
            if let Some(d) = field.complement_distance(ball, radius, x, y).unwrap() {
                prop_assert!(d >= p.distance(&wx, &wy) as u32);
                prop_assert!(d >= previous);
                previous = d;
            } else {
                previous = u32::MAX;
            }
        }
        let dxy = field.complement_distance(ball, r, x, y).unwrap();
        let dyz = field.complement_distance(ball, r, y, z).unwrap();
        let dxz = field.complement_distance(ball, r, x, z).unwrap();
        if let (Some(dxy), Some(dyz)) = (dxy, dyz) {
            prop_assert!(dxz.is_some_and(|dxz| dxz <= dxy + dyz));
        }
    }
}
