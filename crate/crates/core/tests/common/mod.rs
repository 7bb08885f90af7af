#![allow(dead_code)]

use std::collections::BTreeSet;

use horolab::iet::{Iet, Permutation};
use horolab::traintrack::Switch;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Edge {
    Bottom,
    Top,
    Segment(Side, usize),
}

// The two edges bounding the sector at vertex `k` of `side`.
fn sector_edges(side: Side, k: usize, p: usize) -> [Edge; 2] {
    let below = if k == 0 { Edge::Bottom } else { Edge::Segment(side, k - 1) };
    let above = if k == p { Edge::Top } else { Edge::Segment(side, k) };
    [below, above]
}

// Where the endpoint `k` of `side` lands after crossing `edge`.
fn across(edge: Edge, side: Side, k: usize, images: &[usize]) -> (Edge, Side, usize) {
    let p = images.len();
    match edge {
        Edge::Bottom => (Edge::Top, side, p),
        Edge::Top => (Edge::Bottom, side, 0),
        Edge::Segment(Side::Right, j) => {
            let m = images[j];
            (Edge::Segment(Side::Left, m), Side::Left, if k == j { m } else { m + 1 })
        }
        Edge::Segment(Side::Left, m) => {
            let j = images.iter().position(|&i| i == m).unwrap();
            (Edge::Segment(Side::Right, j), Side::Right, if k == m { j } else { j + 1 })
        }
    }
}

/// Cone angles (multiples of 2π) by walking every vertex link.
pub fn link_angles(images: &[usize]) -> Vec<u32> {
    let p = images.len();
    let mut visited = vec![[false; 2]; p + 1];
    let slot = |s: Side| usize::from(s == Side::Right);
    let mut angles = Vec::new();
    for side in [Side::Left, Side::Right] {
        for k in 0..=p {
            if visited[k][slot(side)] {
                continue;
            }
            let mut quarters = 0;
            let (mut s, mut v) = (side, k);
            let mut exit = sector_edges(s, v, p)[1];
            loop {
                visited[v][slot(s)] = true;
                quarters += if v == 0 || v == p { 1 } else { 2 };
                let (entry, ns, nv) = across(exit, s, v, images);
                let [e0, e1] = sector_edges(ns, nv, p);
                exit = if e0 == entry { e1 } else { e0 };
                (s, v) = (ns, nv);
                if (s, v) == (side, k) && exit == sector_edges(side, k, p)[1] {
                    break;
                }
            }
            assert_eq!(quarters % 4, 0);
            angles.push(quarters / 4);
        }
    }
    angles.sort_unstable();
    angles
}

pub fn irreducible_permutations(p: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, p: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == p {
            out.push(prefix.clone());
            return;
        }
        for m in 0..p {
            if !prefix.contains(&m) {
                prefix.push(m);
                extend(prefix, p, out);
                prefix.pop();
            }
        }
    }
    let mut all = Vec::new();
    extend(&mut Vec::new(), p, &mut all);
    all.retain(|images| permutation(images).is_irreducible());
    all
}

pub fn permutation(images: &[usize]) -> Permutation {
    let one_based: Vec<usize> = images.iter().map(|m| m + 1).collect();
    Permutation::new(&one_based).unwrap()
}

fn fits(length: f64, bound: f64) -> bool {
    length <= bound + 1e-12 * (1.0 + bound)
}

/// Plain depth-first count over head-to-tail transitions.
pub fn combinatorial_oracle(lengths: &[f64], switches: &[Switch], bound: f64) -> u128 {
    let next = |b: usize| -> Vec<usize> {
        switches
            .iter()
            .filter(|s| s.incoming.contains(&b))
            .flat_map(|s| s.outgoing.clone())
            .collect()
    };
    fn walk(b: usize, length: f64, bound: f64, lengths: &[f64], next: &dyn Fn(usize) -> Vec<usize>) -> u128 {
        1 + next(b)
            .into_iter()
            .filter(|&n| fits(length + lengths[n], bound))
            .map(|n| walk(n, length + lengths[n], bound, lengths, next))
            .sum::<u128>()
    }
    (0..lengths.len())
        .filter(|&b| fits(lengths[b], bound))
        .map(|b| walk(b, lengths[b], bound, lengths, &next))
        .sum()
}

/// Routes on a permutation track are the itineraries of `T⁻¹` with positive-length
/// cylinders. An itinerary changes where `T⁻ʲx` crosses a domain cut, so cell
/// boundaries are forward images of the cuts; each cell midpoint realizes one itinerary.
pub fn itinerary_oracle(iet: &Iet<f64>, bound: f64) -> u128 {
    let min_length = iet.lengths().iter().copied().fold(f64::INFINITY, f64::min);
    let depth = (bound / min_length).floor() as usize + 1;
    let total = *iet.total();
    let mut cuts = vec![0.0, total];
    let mut front: Vec<f64> = iet.discontinuities().to_vec();
    for _ in 0..depth {
        cuts.extend(&front);
        front = front.iter().map(|y| iet.apply(y).unwrap()).collect();
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    let mut routes = BTreeSet::new();
    for w in cuts.windows(2) {
        let mut x = 0.5 * (w[0] + w[1]);
        let mut route = Vec::new();
        let mut length = 0.0;
        loop {
            let b = iet.interval_of(&x).unwrap();
            length += iet.lengths()[b];
            if !fits(length, bound) {
                break;
            }
            route.push(b);
            routes.insert(route.clone());
            x = iet.inverse_apply(&x).unwrap();
        }
    }
    routes.len() as u128
}

