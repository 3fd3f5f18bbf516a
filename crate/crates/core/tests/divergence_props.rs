use morselab_core::divergence::{bound_closed_form, verify_sigma_row, verify_witness_path};
use morselab_core::{
    classify_special_racg, four_cycle_witness_path, geodesic_divergence, geodesic_lower_divergence,
    checked_bound, sigma_profile, BallIndex, BoundArgs, BoundKind, DefiningGraph, PeriodicGeodesic,
    Presentation, Rho, SigmaConfig, SubgroupField, SubgroupSpec, Verdict, VertexSet, NONE,
};
use num_rational::Ratio;

fn special(ball: &BallIndex, names: &[&str]) -> SubgroupField {
    let s1 = ball.presentation().graph().vertex_set(names).unwrap();
    SubgroupField::new(ball, &SubgroupSpec::Special(s1)).unwrap()
}

/// Minimum over every pair of boundary points in the ball, without the
/// translation reduction.
fn brute_force_sigma(ball: &BallIndex, field: &SubgroupField, n: u32, rho: Rho, r: u32) -> Option<u32> {
    let p = ball.presentation();
    let boundary: Vec<u32> = (0..ball.len() as u32).filter(|&id| field.distance(id) == Some(r)).collect();
    let exclusion = rho.ceil_mul(r);
    let mut best: Option<u32> = None;
    for &x in &boundary {
        let reach = ball.bfs(&[x], |v| field.outside(v, r));
        let near = ball.bfs(&[x], |v| field.outside(v, exclusion));
        for &y in &boundary {
            if reach[y as usize] == NONE || near[y as usize] == NONE {
                continue;
            }
            if (p.distance(&ball.normal_word(x), &ball.normal_word(y)) as u32) < n * r {
                continue;
            }
            best = Some(best.map_or(near[y as usize], |b| b.min(near[y as usize])));
        }
    }
    best
}

#[test]
fn c4_scan_agrees_with_all_pairs_and_respects_the_witness() {
    let p = Presentation::racg(DefiningGraph::c4());
    let ball = BallIndex::build(&p, 12, 100_000).unwrap();
    let g = p.graph();
    let cyc = g.induced_4cycles().remove(0);
    for names in [["a1", "a2"], ["a1", "b1"]] {
        let field = special(&ball, &names);
        let s1 = g.vertex_set(&names).unwrap();
        for n in [2, 3] {
            let config = SigmaConfig::new(n, Rho::ONE);
            let rs: Vec<u32> = [2, 3].into_iter().filter(|r| r + n * r <= 12).collect();
            let profile = sigma_profile(&ball, &field, &config, &rs).unwrap();
            for row in &profile.rows {
                assert!(verify_sigma_row(&ball, &field, &config, row).unwrap());
                let brute = brute_force_sigma(&ball, &field, n, Rho::ONE, row.r);
                assert_eq!(row.value, brute, "{names:?} n={n} r={}", row.r);
                if names == ["a1", "a2"] {
                    let value = row.value.expect("finite");
                    let upper = checked_bound(BoundKind::WitnessUpper, &BoundArgs::new(n, row.r, Rho::ONE)).unwrap();
                    assert!(Ratio::from_integer(value as i64) <= upper);
                    let w = four_cycle_witness_path(g, s1, &cyc, n, row.r).unwrap();
                    assert!(w.length() as u32 >= value);
                }
            }
        }
    }
}

#[test]
fn fractional_rho_rows_verify() {
    let p = Presentation::racg(DefiningGraph::c4());
    let ball = BallIndex::build(&p, 12, 100_000).unwrap();
    let field = special(&ball, &["a1", "a2"]);
    let config = SigmaConfig::new(2, Rho::new(1, 2).unwrap());
    let profile = sigma_profile(&ball, &field, &config, &[2, 3]).unwrap();
    let full = sigma_profile(&ball, &field, &SigmaConfig::new(2, Rho::ONE), &[2, 3]).unwrap();
    for (half, one) in profile.rows.iter().zip(&full.rows) {
        assert!(verify_sigma_row(&ball, &field, &config, half).unwrap());
        assert!(half.value.unwrap() <= one.value.unwrap());
        assert_eq!(brute_force_sigma(&ball, &field, 2, config.rho, half.r), half.value);
    }
}

#[test]
fn sigma_is_non_increasing_in_the_ball_radius() {
    let cases: [(Presentation, &[&str], u32, u32, u32); 2] = [
        (Presentation::racg(DefiningGraph::c4()), &["a1", "a2"], 2, 2, 14),
        (Presentation::racg(DefiningGraph::gamma_d(2).unwrap()), &["a2", "b2"], 2, 1, 8),
    ];
    for (p, names, n, r, r_max) in cases {
        let mut previous = None::<Option<u32>>;
        for radius in r + n * r..=r_max {
            let ball = BallIndex::build(&p, radius, 10_000_000).unwrap();
            let field = special(&ball, names);
            let row = sigma_profile(&ball, &field, &SigmaConfig::new(n, Rho::ONE), &[r]).unwrap().rows.remove(0);
            if let Some(prev) = previous {
                assert!(row.value.unwrap_or(u32::MAX) <= prev.unwrap_or(u32::MAX));
            }
            previous = Some(row.value);
        }
    }
}

#[test]
fn quadratic_lower_bound_on_gamma2_subsets() {
    let p = Presentation::racg(DefiningGraph::gamma_d(2).unwrap());
    let ball = BallIndex::build(&p, 8, 10_000_000).unwrap();
    let g = p.graph();
    let bound = checked_bound(BoundKind::QuadraticLower, &BoundArgs::new(3, 2, Rho::ONE)).unwrap();
    let mut checked = 0;
    for bits in 1u64..1 << g.vertex_count() {
        let s1 = VertexSet::from_bits(bits);
        if classify_special_racg(g, s1).strongly_quasiconvex != Verdict::True {
            continue;
        }
        let field = SubgroupField::new(&ball, &SubgroupSpec::Special(s1)).unwrap();
        let config = SigmaConfig::new(3, Rho::ONE);
        let row = sigma_profile(&ball, &field, &config, &[2]).unwrap().rows.remove(0);
        if let Some(value) = row.value {
            assert!(Ratio::from_integer(value as i64) >= bound);
            assert!(verify_sigma_row(&ball, &field, &config, &row).unwrap());
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn witness_paths_stay_outside_the_neighbourhood() {
    for g in [DefiningGraph::c4(), DefiningGraph::gamma_d(2).unwrap()] {
        let p = Presentation::racg(g.clone());
        for bits in 1u64..1 << g.vertex_count() {
            let s1 = VertexSet::from_bits(bits);
            if classify_special_racg(&g, s1).strongly_quasiconvex != Verdict::False {
                continue;
            }
            let cyc = g
                .induced_4cycles()
                .into_iter()
                .find(|c| four_cycle_witness_path(&g, s1, c, 2, 1).is_ok())
                .expect("a non-quasiconvex subset has a usable 4-cycle");
            for r in 1..=3 {
                let w = four_cycle_witness_path(&g, s1, &cyc, 2, r).unwrap();
                assert!(verify_witness_path(&p, s1, &w, 2, r));
                assert!(w.path.iter().all(|v| p.special_distance(v.letters(), s1) >= r as usize));
                assert!(w.length() as u32 <= 10 * r);
            }
        }
    }
}

fn alternating(p: &Presentation, period: &str) -> PeriodicGeodesic {
    PeriodicGeodesic::new(p, p.parse_letters(period).unwrap(), 16).unwrap()
}

#[test]
fn gamma2_geodesic_divergence_is_superlinear() {
    let p = Presentation::racg(DefiningGraph::gamma_d(2).unwrap());
    let ball = BallIndex::build(&p, 10, 10_000_000).unwrap();
    let gamma = alternating(&p, "a2 b2");
    let rs = [2, 3, 4, 5, 6];
    let profile = geodesic_divergence(&ball, &gamma, &rs, 0).unwrap();
    let values: Vec<u32> = profile.rows.iter().map(|row| row.value.unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?}");
    let growth = profile.growth().unwrap();
    assert!(growth.superlinear, "{values:?}");
    assert!((1.3..=2.8).contains(&growth.loglog_slope), "{}", growth.loglog_slope);

    let lower = geodesic_lower_divergence(&ball, &gamma, &rs, 0).unwrap();
    for (row, div) in lower.iter().zip(&profile.rows) {
        assert_eq!(row.per_offset[0], div.value);
        assert!(row.value.unwrap() <= div.value.unwrap());
    }
    assert!(geodesic_divergence(&ball, &gamma, &[11], 0).is_err());
    assert!(geodesic_divergence(&ball, &gamma, &[10], 1).is_err());
}

#[test]
fn rotated_offsets_match_translated_balls() {
    let p = Presentation::racg(DefiningGraph::gamma_d(2).unwrap());
    let radius = 7;
    let ball = BallIndex::build(&p, radius, 10_000_000).unwrap();
    let wide = BallIndex::build(&p, radius + 1, 10_000_000).unwrap();
    let gamma = alternating(&p, "a2 b2");
    let rows = geodesic_lower_divergence(&ball, &gamma, &[2, 3, 4], 0).unwrap();
    for row in rows {
        for (t, value) in row.per_offset.iter().enumerate() {
            let centre = gamma.point(&p, t as i64);
            let from = wide.id_of(&gamma.point(&p, t as i64 + row.r as i64)).unwrap();
            let to = wide.id_of(&gamma.point(&p, t as i64 - row.r as i64)).unwrap();
            let around = |v: u32| p.distance(&centre, &wide.normal_word(v)) as u32;
            let dist = wide.bfs(&[from], |v| (row.r..=radius).contains(&around(v)));
            let direct = (dist[to as usize] != NONE).then(|| dist[to as usize]);
            assert_eq!(*value, direct, "r={} t={t}", row.r);
        }
    }
}

#[test]
fn coned_graph_has_shorter_detours() {
    let gamma = Presentation::racg(DefiningGraph::gamma_d(2).unwrap());
    let omega = Presentation::racg(DefiningGraph::omega_d(2).unwrap());
    let rs = [2, 3, 4];
    let mut values = Vec::new();
    for p in [&gamma, &omega] {
        let ball = BallIndex::build(p, 8, 10_000_000).unwrap();
        let line = alternating(p, "a2 b2");
        values.push(geodesic_divergence(&ball, &line, &rs, 0).unwrap());
    }
    for (g, o) in values[0].rows.iter().zip(&values[1].rows) {
        assert!(o.value.unwrap() <= g.value.unwrap());
    }
}

#[test]
fn loxodromic_bound_is_vacuous_at_small_radius() {
    let mut args = BoundArgs::new(9, 3, Rho::ONE);
    args.join_bound = Some(2);
    for r in 1..=25 {
        args.r = r;
        let value = checked_bound(BoundKind::LoxodromicLower, &args).unwrap();
        assert_eq!(value, bound_closed_form(BoundKind::LoxodromicLower, &args));
        // ((r-1)/7)(r-6) - 2r, computed by hand
        let expected = Ratio::new((r as i64 - 1) * (r as i64 - 6), 7) - Ratio::from_integer(2 * r as i64);
        assert_eq!(value, expected);
        assert_eq!(value > Ratio::from_integer(0), r >= 21);
    }
}
