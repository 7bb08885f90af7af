use std::collections::HashMap;

use horolab::fuchsian::{LatticeFilter, Letter, SurfaceGroup};
use horolab::group::{crossover_delta, BruhatFactors};
use horolab::GroupElement;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KAPPA_6: f64 = 0.4431115788018502;
const KAPPA_8: f64 = 0.44311162645921676;

fn random_frame(rng: &mut ChaCha8Rng) -> GroupElement {
    loop {
        let e: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        if let Ok(g) = GroupElement::new(e[0], e[1], e[2], e[3]) {
            if g.max_abs_entry() < 5.0 {
                return g;
            }
        }
    }
}

#[test]
fn dedup_removes_relator_coincidences_at_radius_eight() {
    let g = SurfaceGroup::octagon();
    let table = g.element_table(8);
    assert!((table.len() as u64) < g.reduced_word_count(8));
    assert_eq!(g.reduced_word_count(8), 7_686_401);
}

#[test]
fn kappa_fixtures() {
    let g = SurfaceGroup::octagon();
    let six = g.kappa_estimate(6).unwrap();
    let eight = g.kappa_estimate(8).unwrap();
    assert!((six.kappa - KAPPA_6).abs() < 1e-9, "{}", six.kappa);
    assert!((eight.kappa - KAPPA_8).abs() < 1e-9, "{}", eight.kappa);
    assert!(six.kappa <= eight.kappa);
    let w = &eight.witness;
    let recomputed = w.phi.unsigned_abs() as f64 / g.word_matrix(&w.letters).translation_length();
    assert!((recomputed - eight.kappa).abs() < 1e-12);
}

#[test]
fn axis_defect_stays_bounded_and_generic_defect_grows() {
    let g = SurfaceGroup::octagon();
    let times: Vec<f64> = (0..=40).map(|k| 0.5 * k as f64).collect();
    let axis = g.generators()[0].axis_frame().unwrap();
    let generic = GroupElement::rotation(0.7) * GroupElement::stable(0.3);
    let along = g.qm_defect(&axis, &times, 10, LatticeFilter::Kernel).unwrap();
    let across = g.qm_defect(&generic, &times, 10, LatticeFilter::Kernel).unwrap();
    assert!(along.sup().abs() < 1e-6, "{}", along.sup());
    assert!(across.sup() > along.sup() + 5.0, "{}", across.sup());
    assert_eq!(along.points[0].defect, 0.0);
}

#[test]
fn spectrum_witnesses() {
    let g = SurfaceGroup::octagon();
    let h = GroupElement::new(0.9, -0.4, 0.35, 1.2).unwrap();
    let spectrum = g.delta_spectrum(&h, 3);
    let a2 = vec![Letter::new(2, false)];
    let entry = spectrum.entries.iter().find(|e| e.letters == a2).unwrap();
    let conj = h * g.generators()[2] * h.inverse();
    assert!((entry.r - 2.0 * conj.entries()[0].abs().ln()).abs() < 1e-9);
    assert!(!spectrum.entries.iter().any(|e| e.letters == vec![Letter::new(0, false)]));
    assert!(spectrum.entries.windows(2).all(|w| w[0].r <= w[1].r));
}

// Second pass: shortlex enumeration of every reduced word with a grid hash
// for coincidences, then filter, decompose and stable sort.
fn spectrum_oracle(g: &SurfaceGroup, h: &GroupElement, radius: usize) -> Vec<(u64, Vec<Letter>)> {
    let alphabet = g.alphabet();
    let mut words: Vec<Vec<Letter>> = vec![vec![]];
    let mut layer: Vec<(Vec<Letter>, GroupElement)> = vec![(vec![], GroupElement::IDENTITY)];
    let mut cells: HashMap<(i64, i64), Vec<GroupElement>> = HashMap::new();
    let cell = |m: &GroupElement| {
        let [a, b, _, _] = m.entries();
        ((a * 1e5).floor() as i64, (b * 1e5).floor() as i64)
    };
    let seen = |cells: &HashMap<(i64, i64), Vec<GroupElement>>, m: &GroupElement| {
        let (i, j) = cell(m);
        let tol = 1e-7 * m.max_abs_entry().max(1.0);
        (i - 1..=i + 1).any(|a| {
            (j - 1..=j + 1).any(|b| {
                cells
                    .get(&(a, b))
                    .is_some_and(|v| v.iter().any(|o| o.max_entry_diff(m) <= tol))
            })
        })
    };
    cells.entry(cell(&GroupElement::IDENTITY)).or_default().push(GroupElement::IDENTITY);
    for _ in 0..radius {
        let mut next = Vec::new();
        for (word, matrix) in &layer {
            for &l in &alphabet {
                if word.last() == Some(&l.inverted()) {
                    continue;
                }
                let m = *matrix * g.letter_matrix(l);
                if seen(&cells, &m) {
                    continue;
                }
                cells.entry(cell(&m)).or_default().push(m);
                let mut w = word.clone();
                w.push(l);
                words.push(w.clone());
                next.push((w, m));
            }
        }
        layer = next;
    }
    let mut out: Vec<(f64, Vec<Letter>)> = words
        .into_iter()
        .skip(1)
        .filter(|w| g.phi(w) == 0)
        .filter_map(|w| {
            let m = *h * g.word_matrix(&w) * h.inverse();
            match BruhatFactors::decompose(&m) {
                BruhatFactors::BigCell { t, .. } => Some((t, w)),
                BruhatFactors::OmegaCell => None,
            }
        })
        .collect();
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out.into_iter().map(|(r, w)| (r.to_bits(), w)).collect()
}

#[test]
fn spectrum_matches_second_pass_bit_for_bit() {
    let g = SurfaceGroup::octagon();
    let h = random_frame(&mut ChaCha8Rng::seed_from_u64(11));
    let spectrum = g.delta_spectrum(&h, 6);
    let oracle = spectrum_oracle(&g, &h, 6);
    assert_eq!(spectrum.entries.len(), oracle.len());
    for (e, (bits, w)) in spectrum.entries.iter().zip(&oracle) {
        assert_eq!(e.r.to_bits(), *bits);
        assert_eq!(&e.letters, w);
    }
}

#[test]
fn stable_contraction_is_proximal() {
    let g = SurfaceGroup::octagon();
    let x = random_frame(&mut ChaCha8Rng::seed_from_u64(3));
    let y = GroupElement::stable(1.0) * x;
    let times: Vec<f64> = (0..=10).map(f64::from).collect();
    let scan = g.proximality_scan(&x, &y, &times, 1).unwrap();
    assert!(scan.inf_distance < 1e-3, "{}", scan.inf_distance);
    let (_, d0) = scan.per_time[0];
    let (_, d10) = scan.per_time[10];
    assert!(d10 < d0 * 1e-3);
}

#[test]
fn extracted_ell_matches_crossover() {
    let g = SurfaceGroup::octagon();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let times: Vec<f64> = (0..=8).map(|k| 0.5 * k as f64).collect();
    for _ in 0..20 {
        let x = random_frame(&mut rng);
        let shift = GroupElement::stable(rng.random_range(-1.0..1.0))
            * GroupElement::geodesic(rng.random_range(-0.5..0.5))
            * GroupElement::unstable(rng.random_range(-0.05..0.05));
        let y = shift * x * g.generators()[0].inverse();
        let scan = g.proximality_scan(&x, &y, &times, 2).unwrap();
        let lifted = y * scan.witness.matrix;
        let expected = crossover_delta(&x, &lifted).unwrap();
        assert!((scan.ell - expected).abs() < 1e-6, "{} vs {expected}", scan.ell);
    }
}
