use horolab::fuchsian::{LatticeFilter, Letter, SurfaceGroup};
use horolab::group::{crossover_delta, hyp_distance, BruhatFactors, HPoint};
use horolab::iet::{uniform_theta_grid, weak_mix_statistic, Iet, Permutation};
use horolab::suspension::{Direction, FlatRay, FlowOutcome};
use horolab::traintrack::WeightSystem;
use horolab::{GroupElement, Rational, Scalar, TrainTrack, TranslationSurface};
use proptest::prelude::*;

fn element() -> impl Strategy<Value = GroupElement> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
        .prop_filter_map("needs positive determinant", |(a, b, c, d)| {
            let det = a * d - b * c;
            (det > 0.05).then(|| GroupElement::new(a, b, c, d).ok()).flatten()
        })
}

fn point() -> impl Strategy<Value = HPoint> {
    (-3.0..3.0f64, 0.05..3.0f64).prop_map(|(x, y)| HPoint::new(x, y).unwrap())
}

fn lengths(p: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1..2.0f64, p)
}

fn irreducible(p: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=p).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_filter_map("irreducible", |images| {
            Permutation::new(&images).ok().filter(Permutation::is_irreducible)
        })
}

fn rational(n: i64, d: i64) -> Rational {
    Rational::from_int(n) / Rational::from_int(d)
}

fn word(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..4usize, any::<bool>()).prop_map(|(g, i)| Letter::new(g, i)), 0..max)
}

// Distance as PSL elements.
fn entrywise(g: &GroupElement, h: &GroupElement) -> f64 {
    let [a, b, c, d] = h.entries();
    let [p, q, r, s] = g.entries();
    let plus = [(p - a), (q - b), (r - c), (s - d)].map(f64::abs);
    let minus = [(p + a), (q + b), (r + c), (s + d)].map(f64::abs);
    plus.into_iter().fold(0.0, f64::max).min(minus.into_iter().fold(0.0, f64::max))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bruhat_reconstructs(g in element()) {
        prop_assume!(g.entries()[0].abs() > 1e-3);
        let back = BruhatFactors::decompose(&g).recompose().unwrap();
        prop_assert!(entrywise(&g, &back) < 1e-10);
    }

    #[test]
    fn flow_conjugation_scales_unipotents(r in -5.0..5.0f64, s in -5.0..5.0f64, t in -4.0..4.0f64) {
        let u = GroupElement::unstable(r).flow_conjugate(t);
        let n = GroupElement::stable(s).flow_conjugate(t);
        prop_assert!(u.max_entry_diff(&GroupElement::unstable(r * (-t).exp())) < 1e-12 * (1.0 + r.abs()));
        prop_assert!(n.max_entry_diff(&GroupElement::stable(s * t.exp())) < 1e-12 * (1.0 + (s * t.exp()).abs()));
    }

    #[test]
    fn distance_is_isometry_invariant(g in element(), z in point(), w in point()) {
        let before = hyp_distance(&z, &w);
        let after = hyp_distance(&g.act(z), &g.act(w));
        prop_assert!((before - after).abs() < 1e-9 * (1.0 + before));
    }

    #[test]
    fn crossover_ignores_outer_unipotents(h in element(), g in element(), s in -2.0..2.0f64, r in -2.0..2.0f64) {
        let base = crossover_delta(&h, &g);
        prop_assume!(base.is_ok());
        let moved = crossover_delta(&(GroupElement::stable(s) * h), &(GroupElement::unstable(r) * g));
        prop_assume!(moved.is_ok());
        prop_assert!((base.unwrap() - moved.unwrap()).abs() < 1e-9);
    }

    #[test]
    fn slide_back(s in -2.0..2.0f64, l in -2.0..2.0f64, r in -2.0..2.0f64, g in element(), t in 0.0..5.0f64) {
        let (n, a, u) = (GroupElement::stable(s), GroupElement::geodesic(l), GroupElement::unstable(r));
        let h = n * a * u * g;
        let back = GroupElement::geodesic(-t);
        let n_hat = n.flow_conjugate(t);
        let lhs = n_hat.inverse() * (back * h);
        let rhs = a * u.flow_conjugate(t) * (back * g);
        prop_assert!(entrywise(&lhs, &rhs) < 1e-10 * (1.0 + lhs.max_abs_entry()));
    }

    #[test]
    fn inverse_undoes_apply(perm in irreducible(5), ls in lengths(5), u in 0.0..1.0f64) {
        let iet = Iet::new(ls, perm).unwrap();
        let x = u * iet.total();
        let y = iet.apply(&x).unwrap();
        prop_assert!((iet.inverse_apply(&y).unwrap() - x).abs() < 1e-12);
    }

    #[test]
    fn images_of_pieces_are_disjoint(perm in irreducible(4), ls in lengths(4), u in 0.0..1.0f64, v in 0.0..1.0f64) {
        let iet = Iet::new(ls, perm).unwrap();
        let total = *iet.total();
        let (a, b) = (u.min(v) * total, u.max(v) * total);
        let mut cuts: Vec<f64> = iet.discontinuities().iter().copied().filter(|&d| d > a && d < b).collect();
        cuts.insert(0, a);
        cuts.push(b);
        let mut images: Vec<(f64, f64)> = cuts
            .windows(2)
            .map(|w| {
                let start = iet.apply(&w[0]).unwrap();
                (start, start + (w[1] - w[0]))
            })
            .collect();
        images.sort_by(|x, y| x.0.total_cmp(&y.0));
        let covered: f64 = images.iter().map(|(s, e)| e - s).sum();
        prop_assert!((covered - (b - a)).abs() < 1e-12);
        prop_assert!(images.windows(2).all(|w| w[0].1 <= w[1].0 + 1e-12));
        prop_assert!(images.iter().all(|&(s, e)| s >= -1e-12 && e <= total + 1e-12));
    }

    #[test]
    fn rotation_statistic_peaks_at_rotation_number(first in 0.1..2.0f64, second in 0.1..2.0f64) {
        let iet = Iet::new(vec![first, second], Permutation::new(&[2, 1]).unwrap()).unwrap();
        let theta = second / (first + second);
        let spectrum = weak_mix_statistic(&iet, &[theta], 2000, 0.0).unwrap();
        prop_assert!((spectrum.max - 1.0).abs() < 1e-9);
    }

    #[test]
    fn phi_is_additive(w1 in word(8), w2 in word(8)) {
        let g = SurfaceGroup::octagon();
        let joined = [w1.clone(), w2.clone()].concat();
        prop_assert_eq!(g.phi(&joined), g.phi(&w1) + g.phi(&w2));
    }

    #[test]
    fn translation_length_is_conjugation_invariant(w in word(6), h in element()) {
        let g = SurfaceGroup::octagon();
        let m = g.word_matrix(&w);
        let conj = h * m * h.inverse();
        prop_assert!((m.translation_length() - conj.translation_length()).abs() < 1e-9 * (1.0 + m.max_abs_entry()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kappa_is_monotone(weights in prop::collection::vec(-2i64..3, 4)) {
        let g = SurfaceGroup::octagon_with_phi(weights).unwrap();
        let k = [1, 2, 3, 4].map(|r| g.kappa_estimate(r).unwrap().kappa);
        prop_assert!(k.windows(2).all(|w| w[0] <= w[1]));
        let single = (0..4)
            .map(|i| g.letter_phi(Letter::new(i, false)).unsigned_abs() as f64 / g.generators()[i].translation_length())
            .fold(0.0, f64::max);
        prop_assert!(k[0] >= single);
    }

    #[test]
    fn certified_defect_is_nonnegative(x in element(), t in 0.0..4.0f64) {
        let g = SurfaceGroup::octagon();
        let curve = g.qm_defect(&x, &[t], 4, LatticeFilter::Full).unwrap();
        let p = curve.points[0];
        if !p.radius_limited {
            prop_assert!(p.defect >= -1e-9);
        }
    }

    #[test]
    fn flow_gains_tau_and_commutes_with_deck(
        perm in irreducible(4),
        num in prop::collection::vec(1i64..9, 4),
        (a, b, h) in prop::sample::select(vec![(3i64, 4i64, 5i64), (4, 3, 5), (5, 12, 13), (12, -5, 13), (-3, 4, 5), (8, 15, 17)]),
        sx in 1i64..40, sy in 1i64..97, st in 1i64..200, m in -3i64..4,
    ) {
        let ls: Vec<Rational> = num.iter().map(|&n| rational(n, 4)).collect();
        let height: Rational = ls.iter().cloned().sum();
        let surface = TranslationSurface::suspend(Iet::new(ls, perm).unwrap(), Rational::from_int(1)).unwrap();
        let start = surface.point(0, rational(sx, 41), height * rational(sy, 97)).unwrap();
        prop_assume!(!surface.is_singular(&start));
        let dir = Direction::pythagorean(a, b, h).unwrap();
        let t = rational(st, 23);
        let end = surface.straight_flow(&start, &dir, &t).unwrap();
        if let FlowOutcome::Arrived(end) = end {
            let roof = surface.roof();
            prop_assert_eq!(end.tau(roof) - start.tau(roof), t.clone() * dir.cos.clone());
            let shifted = surface.straight_flow(&start.deck_shift(m), &dir, &t).unwrap();
            prop_assert_eq!(shifted, FlowOutcome::Arrived(end.deck_shift(m)));
            let times: Vec<Rational> = (1..=4).map(|k| t.clone() * rational(k, 4)).collect();
            let ray = FlatRay { start: start.clone(), direction: dir };
            let profile = surface.busemann_profile(&ray, &times).unwrap();
            prop_assert!(profile.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn route_counts_grow_and_submultiply(l1 in 0.5..6.0f64, l2 in 0.5..6.0f64) {
        let track = TrainTrack::from_permutation(
            &Iet::new(vec![1.0, 1.618_033_988_749_895, 1.309_016_994_374_947_5, 2f64.sqrt()], Permutation::new(&[3, 1, 4, 2]).unwrap()).unwrap(),
        )
        .unwrap();
        prop_assert!(track.count_routes(l1.min(l2)) <= track.count_routes(l1.max(l2)));
        // Cut at the longest prefix of length at most l1; the rest is shorter than l2 plus one branch.
        let split = |t: &TrainTrack| {
            let longest = t.lengths().iter().copied().fold(0.0, f64::max);
            t.count_routes(l1 + l2) <= (1 + t.count_routes(l1)) * (1 + t.count_routes(l2 + longest))
        };
        prop_assert!(split(&track));
        prop_assert!(split(&TrainTrack::figure_eight(1.0, 1.618_033_988_749_895).unwrap()));
    }

    #[test]
    fn dimension_decreases_past_twice_the_longest_branch(perm in irreducible(4), ls in lengths(4)) {
        let track = TrainTrack::from_permutation(&Iet::new(ls.clone(), perm).unwrap()).unwrap();
        let longest = ls.iter().copied().fold(0.0, f64::max);
        let grid: Vec<f64> = (0..5).map(|k| 2.0 * longest + 2.0 + 3.0 * k as f64).collect();
        let dims: Vec<f64> = grid.iter().map(|&l| track.dimension_estimate(l).unwrap()).collect();
        prop_assert!(dims.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{:?}", dims);
    }

    #[test]
    fn rational_approximation_is_exact(perm in irreducible(4), ls in lengths(4), q in 5i64..200) {
        let track = TrainTrack::from_permutation(&Iet::new(ls.clone(), perm).unwrap()).unwrap();
        let approx = track.rational_approximation(&WeightSystem(ls), q).unwrap();
        prop_assert_eq!(track.integer_switch_defect(&approx.numerators), 0);
    }

    #[test]
    fn records_round_trip(perm in irreducible(5), ls in lengths(5)) {
        let iet = Iet::new(ls.clone(), perm).unwrap();
        let text = iet.to_record();
        prop_assert_eq!(Iet::<f64>::parse_record(&text).unwrap().to_record(), text);
        let track = TrainTrack::from_permutation(&iet).unwrap();
        let dump = track.dump();
        prop_assert_eq!(TrainTrack::parse_dump(&dump).unwrap().dump(), dump);
    }
}

#[test]
fn rotation_grid_peak() {
    let iet = Iet::new(vec![1.0, 3.0], Permutation::new(&[2, 1]).unwrap()).unwrap();
    let spectrum = weak_mix_statistic(&iet, &uniform_theta_grid(400), 4000, 0.0).unwrap();
    assert_eq!(spectrum.argmax, 0.75);
    assert!(spectrum.max > 1.0 - 1e-9);
}
