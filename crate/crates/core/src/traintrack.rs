//! Oriented train tracks, weight systems and route counting.
//!
//! Each branch runs from its tail, on the outgoing side of a switch, to its
//! head, on the incoming side of a switch. A route is a sequence of branches
//! in which every consecutive pair meets at a switch: the head of one branch
//! and the tail of the next lie on opposite sides of the same switch.
//!
//! Tracks built from a permutation also carry a weight system. For those,
//! a route must be realized by a band of strands of positive width. Strands
//! are stacked on each side of a switch by weight, in side order.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::iet::Iet;

/// Minimal strand width for a carried route.
pub const CARRIED_WIDTH_TOLERANCE: f64 = 1e-12;

/// Relative slack allowed when comparing a route length with its bound.
const LENGTH_SLACK: f64 = 1e-12;

/// Search radius limits for lattice repair in [`TrainTrack::rational_approximation`].
const REPAIR_LIMITS: [(i64, u32); 2] = [(1, 12), (2, 8)];

#[derive(Clone, Debug, PartialEq)]
pub struct Switch {
    /// Branches whose heads arrive here, in side order.
    pub incoming: Vec<usize>,
    /// Branches whose tails leave from here, in side order.
    pub outgoing: Vec<usize>,
}

/// Nonnegative weight per branch.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSystem(pub Vec<f64>);

/// Weight system with entries `numerators[i] / denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalWeights {
    pub numerators: Vec<i64>,
    pub denominator: i64,
}

impl RationalWeights {
    pub fn to_f64(&self) -> Vec<f64> {
        self.numerators
            .iter()
            .map(|&n| n as f64 / self.denominator as f64)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Route {
    pub branches: Vec<usize>,
    pub length: f64,
}

impl Route {
    pub fn start(&self) -> usize {
        self.branches[0]
    }

    /// Passes through each branch at most once.
    pub fn is_almost_embedded(&self) -> bool {
        let mut seen = self.branches.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteStats {
    pub total: u128,
    pub almost_embedded: u128,
    pub by_start: Vec<u128>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainTrack {
    lengths: Vec<f64>,
    switches: Vec<Switch>,
    tail: Vec<usize>,
    head: Vec<usize>,
    weights: Option<WeightSystem>,
    // Stack offsets of each branch at its head and tail, when weighted.
    head_offset: Vec<f64>,
    tail_offset: Vec<f64>,
}

impl TrainTrack {
    /// Combinatorial track: every head-to-tail transition at a switch is legal.
    pub fn new(lengths: Vec<f64>, switches: Vec<Switch>) -> Result<Self> {
        let b = lengths.len();
        if b == 0 {
            return Err(Error::InvalidTrack("no branches".into()));
        }
        if let Some((i, l)) = lengths.iter().enumerate().find(|(_, l)| !(**l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidTrack(format!("branch {i} has length {l}")));
        }
        let mut tail = vec![usize::MAX; b];
        let mut head = vec![usize::MAX; b];
        for (s, switch) in switches.iter().enumerate() {
            for (ends, list, side) in [(&mut head, &switch.incoming, "incoming"), (&mut tail, &switch.outgoing, "outgoing")] {
                for &branch in list {
                    if branch >= b {
                        return Err(Error::InvalidTrack(format!("switch {s} lists unknown branch {branch}")));
                    }
                    if ends[branch] != usize::MAX {
                        return Err(Error::InvalidTrack(format!(
                            "branch {branch} attaches to two {side} sides"
                        )));
                    }
                    ends[branch] = s;
                }
            }
        }
        for i in 0..b {
            if head[i] == usize::MAX || tail[i] == usize::MAX {
                return Err(Error::InvalidTrack(format!("branch {i} has a free end")));
            }
        }
        Ok(Self {
            lengths,
            switches,
            tail,
            head,
            weights: None,
            head_offset: Vec::new(),
            tail_offset: Vec::new(),
        })
    }

    /// Attaches a weight system; routes are then counted by carried legality.
    pub fn with_weights(mut self, weights: WeightSystem) -> Result<Self> {
        self.check_switch_conditions(&weights.0)?;
        let b = self.lengths.len();
        let mut head_offset = vec![0.0; b];
        let mut tail_offset = vec![0.0; b];
        for switch in &self.switches {
            let mut acc = 0.0;
            for &i in &switch.incoming {
                head_offset[i] = acc;
                acc += weights.0[i];
            }
            let mut acc = 0.0;
            for &i in &switch.outgoing {
                tail_offset[i] = acc;
                acc += weights.0[i];
            }
        }
        self.head_offset = head_offset;
        self.tail_offset = tail_offset;
        self.weights = Some(weights);
        Ok(self)
    }

    /// One switch, branch `j` of length `ℓ_j`: the incoming side lists branches
    /// in domain order, the outgoing side in range order. Weights are the lengths.
    pub fn from_permutation(iet: &Iet<f64>) -> Result<Self> {
        if let Some(k) = iet.permutation().reducing_prefix() {
            return Err(Error::Reducible(k));
        }
        let p = iet.len();
        let switch = Switch {
            incoming: (0..p).collect(),
            outgoing: (0..p).map(|m| iet.permutation().interval_at(m)).collect(),
        };
        let lengths = iet.lengths().to_vec();
        Self::new(lengths.clone(), vec![switch])?.with_weights(WeightSystem(lengths))
    }

    /// A single branch closing up on one switch.
    pub fn single_loop(length: f64) -> Result<Self> {
        Self::new(
            vec![length],
            vec![Switch {
                incoming: vec![0],
                outgoing: vec![0],
            }],
        )
    }

    /// Two loops through one switch, all four transitions legal.
    pub fn figure_eight(first: f64, second: f64) -> Result<Self> {
        Self::new(
            vec![first, second],
            vec![Switch {
                incoming: vec![0, 1],
                outgoing: vec![0, 1],
            }],
        )
    }

    /// A loop at switch 0 plus a branch from switch 0 into a dead end.
    pub fn loop_with_spur(loop_length: f64, spur_length: f64) -> Result<Self> {
        Self::new(
            vec![loop_length, spur_length],
            vec![
                Switch {
                    incoming: vec![0],
                    outgoing: vec![0, 1],
                },
                Switch {
                    incoming: vec![1],
                    outgoing: vec![],
                },
            ],
        )
    }

    pub fn branch_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn switches(&self) -> &[Switch] {
        &self.switches
    }

    pub fn weights(&self) -> Option<&WeightSystem> {
        self.weights.as_ref()
    }

    pub fn is_carried(&self) -> bool {
        self.weights.is_some()
    }

    pub fn head(&self, branch: usize) -> usize {
        self.head[branch]
    }

    pub fn tail(&self, branch: usize) -> usize {
        self.tail[branch]
    }

    /// Branches that may follow `branch` combinatorially.
    pub fn successors(&self, branch: usize) -> &[usize] {
        &self.switches[self.head[branch]].outgoing
    }

    /// Largest switch-condition defect `|Σ incoming − Σ outgoing|`.
    pub fn switch_defects(&self, weights: &[f64]) -> Vec<f64> {
        self.switches
            .iter()
            .map(|s| {
                let incoming: f64 = s.incoming.iter().map(|&i| weights[i]).sum();
                let outgoing: f64 = s.outgoing.iter().map(|&i| weights[i]).sum();
                (incoming - outgoing).abs()
            })
            .collect()
    }

    fn check_switch_conditions(&self, weights: &[f64]) -> Result<()> {
        if weights.len() != self.branch_count() {
            return Err(Error::InvalidTrack(format!(
                "{} weights for {} branches",
                weights.len(),
                self.branch_count()
            )));
        }
        if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidTrack("weights must be nonnegative".into()));
        }
        let scale = weights.iter().fold(1.0f64, |m, w| m.max(*w));
        for (switch, defect) in self.switch_defects(weights).into_iter().enumerate() {
            if defect > 1e-9 * scale {
                return Err(Error::SwitchCondition { switch, defect });
            }
        }
        Ok(())
    }

    fn fits(total: f64, bound: f64) -> bool {
        total <= bound + LENGTH_SLACK * (1.0 + bound.abs())
    }

    /// Number of legal routes of length at most `bound`, over all start branches.
    pub fn count_routes(&self, bound: f64) -> u128 {
        self.route_stats(bound).total
    }

    pub fn route_stats(&self, bound: f64) -> RouteStats {
        let b = self.branch_count();
        let mut by_start = vec![0u128; b];
        let mut almost_embedded = 0u128;
        if self.is_carried() {
            for (start, slot) in by_start.iter_mut().enumerate() {
                let mut counter = CarriedCounter {
                    track: self,
                    bound,
                    total: 0,
                    almost_embedded: 0,
                    used: vec![0; b],
                };
                counter.start(start);
                *slot = counter.total;
                almost_embedded += counter.almost_embedded;
            }
        } else {
            let mut memo = HashMap::new();
            for (start, slot) in by_start.iter_mut().enumerate() {
                let mut counts = vec![0u32; b];
                counts[start] = 1;
                if Self::fits(self.lengths[start], bound) {
                    *slot = self.count_from(start, &mut counts, bound, &mut memo);
                }
            }
            almost_embedded = self.count_simple_paths(bound);
        }
        RouteStats {
            total: by_start.iter().sum(),
            almost_embedded,
            by_start,
        }
    }

    fn weighted_length(&self, counts: &[u32]) -> f64 {
        counts
            .iter()
            .zip(&self.lengths)
            .map(|(&c, &l)| c as f64 * l)
            .sum()
    }

    // Number of routes extending the current prefix, whose last branch is `last`;
    // the residual length is determined by the branch-count vector.
    fn count_from(&self, last: usize, counts: &mut Vec<u32>, bound: f64, memo: &mut HashMap<(usize, Vec<u32>), u128>) -> u128 {
        if let Some(&n) = memo.get(&(last, counts.clone())) {
            return n;
        }
        let mut n = 1u128;
        for &next in self.successors(last) {
            counts[next] += 1;
            if Self::fits(self.weighted_length(counts), bound) {
                n += self.count_from(next, counts, bound, memo);
            }
            counts[next] -= 1;
        }
        memo.insert((last, counts.clone()), n);
        n
    }

    fn count_simple_paths(&self, bound: f64) -> u128 {
        fn walk(track: &TrainTrack, last: usize, used: &mut [bool], length: f64, bound: f64) -> u128 {
            let mut n = 1;
            for &next in track.successors(last) {
                let extended = length + track.lengths[next];
                if !used[next] && TrainTrack::fits(extended, bound) {
                    used[next] = true;
                    n += walk(track, next, used, extended, bound);
                    used[next] = false;
                }
            }
            n
        }
        let mut used = vec![false; self.branch_count()];
        (0..self.branch_count())
            .filter(|&s| Self::fits(self.lengths[s], bound))
            .map(|s| {
                used[s] = true;
                let n = walk(self, s, &mut used, self.lengths[s], bound);
                used[s] = false;
                n
            })
            .sum()
    }

    /// All legal routes of length at most `bound`, in depth-first order by start branch.
    pub fn enumerate_routes(&self, bound: f64) -> Vec<Route> {
        let mut out = Vec::new();
        for start in 0..self.branch_count() {
            if !Self::fits(self.lengths[start], bound) {
                continue;
            }
            let band = self.full_band(start);
            let mut prefix = vec![start];
            self.enumerate_from(&mut prefix, self.lengths[start], band, bound, &mut out);
        }
        out
    }

    fn enumerate_from(&self, prefix: &mut Vec<usize>, length: f64, band: Option<(f64, f64)>, bound: f64, out: &mut Vec<Route>) {
        out.push(Route {
            branches: prefix.clone(),
            length,
        });
        let last = *prefix.last().expect("routes are nonempty");
        for &next in self.successors(last) {
            let extended = length + self.lengths[next];
            if !Self::fits(extended, bound) {
                continue;
            }
            let next_band = match band {
                Some(band) => match self.carry(band, next) {
                    Some(b) => Some(b),
                    None => continue,
                },
                None => None,
            };
            prefix.push(next);
            self.enumerate_from(prefix, extended, next_band, bound, out);
            prefix.pop();
        }
    }

    fn full_band(&self, branch: usize) -> Option<(f64, f64)> {
        let weights = self.weights.as_ref()?;
        let lo = self.head_offset[branch];
        Some((lo, lo + weights.0[branch]))
    }

    /// Transverse band at the head of the next branch, if it keeps positive width.
    fn carry(&self, band: (f64, f64), next: usize) -> Option<(f64, f64)> {
        let weights = self.weights.as_ref()?;
        let lo = self.tail_offset[next];
        let hi = lo + weights.0[next];
        let (a, b) = (band.0.max(lo), band.1.min(hi));
        if b - a <= CARRIED_WIDTH_TOLERANCE {
            return None;
        }
        let shift = self.head_offset[next] - lo;
        Some((a + shift, b + shift))
    }

    /// `ln N(L) / L`.
    pub fn dimension_estimate(&self, bound: f64) -> Result<f64> {
        let n = self.count_routes(bound);
        if n == 0 {
            return Err(Error::EmptyRouteSet { length: bound });
        }
        Ok((n as f64).ln() / bound)
    }

    /// Least-squares slope of `ln N(L)` against `L`.
    pub fn growth_exponent(&self, bounds: &[f64]) -> Result<f64> {
        let points = self.log_counts(bounds)?;
        least_squares_slope(points.iter().map(|&(l, ln_n)| (l, ln_n)))
    }

    /// Least-squares slope of `ln N(L)` against `ln L`, the empirical polynomial degree.
    pub fn polynomial_degree(&self, bounds: &[f64]) -> Result<f64> {
        let points = self.log_counts(bounds)?;
        least_squares_slope(points.iter().map(|&(l, ln_n)| (l.ln(), ln_n)))
    }

    fn log_counts(&self, bounds: &[f64]) -> Result<Vec<(f64, f64)>> {
        if bounds.len() < 2 {
            return Err(Error::InvalidArgument("need at least two lengths to fit".into()));
        }
        bounds
            .iter()
            .map(|&l| {
                let n = self.count_routes(l);
                if n == 0 {
                    Err(Error::EmptyRouteSet { length: l })
                } else {
                    Ok((l, (n as f64).ln()))
                }
            })
            .collect()
    }

    /// Every branch lies on a closed route of the combinatorial transition graph.
    pub fn is_recurrent(&self) -> bool {
        let mut graph = DiGraph::<(), ()>::new();
        let nodes: Vec<_> = (0..self.branch_count()).map(|_| graph.add_node(())).collect();
        for b in 0..self.branch_count() {
            for &next in self.successors(b) {
                graph.add_edge(nodes[b], nodes[next], ());
            }
        }
        kosaraju_scc(&graph).iter().all(|component| {
            component.len() > 1 || {
                let b = component[0].index();
                self.successors(b).contains(&b)
            }
        })
    }

    /// Rational weight system with denominator `q` satisfying every switch
    /// condition exactly, within `B/q` of `target` in max norm (`B` branches).
    pub fn rational_approximation(&self, target: &WeightSystem, q: i64) -> Result<RationalWeights> {
        if q < 1 {
            return Err(Error::InvalidArgument(format!("denominator {q} must be positive")));
        }
        self.check_switch_conditions(&target.0)?;
        let b = self.branch_count();
        let bound = b as f64 / q as f64;
        let rounded: Vec<i64> = target.0.iter().map(|w| (w * q as f64).round() as i64).collect();
        let distance = |n: &[i64]| {
            n.iter()
                .zip(&target.0)
                .map(|(&k, &w)| (k as f64 / q as f64 - w).abs())
                .fold(0.0, f64::max)
        };
        if self.integer_switch_defect(&rounded) == 0 {
            return Ok(RationalWeights {
                numerators: rounded,
                denominator: q,
            });
        }
        let mut best: Option<(Vec<i64>, f64)> = None;
        for &(radius, max_branches) in &REPAIR_LIMITS {
            if b as u32 > max_branches {
                continue;
            }
            let mut delta = vec![-radius; b];
            loop {
                let candidate: Vec<i64> = rounded.iter().zip(&delta).map(|(n, d)| n + d).collect();
                if candidate.iter().all(|&n| n >= 0) && self.integer_switch_defect(&candidate) == 0 {
                    let d = distance(&candidate);
                    if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
                        best = Some((candidate, d));
                    }
                }
                if !odometer(&mut delta, radius) {
                    break;
                }
            }
            if best.is_some() {
                break;
            }
        }
        match best {
            Some((numerators, d)) if d <= bound + 1e-15 => Ok(RationalWeights {
                numerators,
                denominator: q,
            }),
            Some((numerators, d)) => Err(Error::Infeasible {
                best: Some(numerators),
                best_distance: d,
                bound,
            }),
            None => Err(Error::Infeasible {
                best: None,
                best_distance: f64::INFINITY,
                bound,
            }),
        }
    }

    /// Sum of absolute integer switch defects.
    pub fn integer_switch_defect(&self, numerators: &[i64]) -> i64 {
        self.switches
            .iter()
            .map(|s| {
                let incoming: i64 = s.incoming.iter().map(|&i| numerators[i]).sum();
                let outgoing: i64 = s.outgoing.iter().map(|&i| numerators[i]).sum();
                (incoming - outgoing).abs()
            })
            .sum()
    }

    /// Branch table and switch table.
    pub fn dump(&self) -> String {
        let mut out = format!("branches {}\n", self.branch_count());
        for (i, l) in self.lengths.iter().enumerate() {
            match &self.weights {
                Some(w) => out.push_str(&format!("branch {i} {l} {}\n", w.0[i])),
                None => out.push_str(&format!("branch {i} {l}\n")),
            }
        }
        out.push_str(&format!("switches {}\n", self.switches.len()));
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        for (s, switch) in self.switches.iter().enumerate() {
            out.push_str(&format!(
                "switch {s} in {} out {}\n",
                join(&switch.incoming),
                join(&switch.outgoing)
            ));
        }
        out
    }

    /// Parses the format written by [`TrainTrack::dump`].
    pub fn parse_dump(text: &str) -> Result<Self> {
        let mut lengths = Vec::new();
        let mut weights = Vec::new();
        let mut switches = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let tokens: Vec<&str> = raw.split_whitespace().collect();
            match tokens.first().copied() {
                None | Some("branches") | Some("switches") => {}
                Some("branch") => {
                    let id: usize = parse_token(&tokens, 1, line, "branch id")?;
                    if id != lengths.len() {
                        return Err(Error::parse(line, "branch id", format!("expected {}, found {id}", lengths.len())));
                    }
                    lengths.push(parse_token::<f64>(&tokens, 2, line, "length")?);
                    if tokens.len() > 3 {
                        weights.push(parse_token::<f64>(&tokens, 3, line, "weight")?);
                    }
                }
                Some("switch") => {
                    let in_pos = tokens.iter().position(|t| *t == "in");
                    let out_pos = tokens.iter().position(|t| *t == "out");
                    let (Some(i), Some(o)) = (in_pos, out_pos) else {
                        return Err(Error::parse(line, "switch", "expected `switch <id> in ... out ...`"));
                    };
                    let ids = |range: &[&str]| {
                        range
                            .iter()
                            .map(|t| t.parse::<usize>().map_err(|_| Error::parse(line, "switch", format!("bad branch id `{t}`"))))
                            .collect::<Result<Vec<usize>>>()
                    };
                    switches.push(Switch {
                        incoming: ids(&tokens[i + 1..o])?,
                        outgoing: ids(&tokens[o + 1..])?,
                    });
                }
                Some(other) => return Err(Error::parse(line, "record", format!("unknown record `{other}`"))),
            }
        }
        let track = Self::new(lengths, switches)?;
        if weights.is_empty() {
            Ok(track)
        } else if weights.len() != track.branch_count() {
            Err(Error::parse(0, "weight", "weights must be given for every branch or none"))
        } else {
            track.with_weights(WeightSystem(weights))
        }
    }
}

impl fmt::Display for TrainTrack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

impl FromStr for TrainTrack {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_dump(s)
    }
}

fn parse_token<T: FromStr>(tokens: &[&str], i: usize, line: usize, field: &str) -> Result<T> {
    let token = tokens
        .get(i)
        .ok_or_else(|| Error::parse(line, field, "missing value"))?;
    token
        .parse()
        .map_err(|_| Error::parse(line, field, format!("cannot parse `{token}`")))
}

/// Advances `digits` through `{−r..r}^n`; returns `false` after the last vector.
fn odometer(digits: &mut [i64], radius: i64) -> bool {
    for d in digits.iter_mut() {
        if *d < radius {
            *d += 1;
            return true;
        }
        *d = -radius;
    }
    false
}

struct CarriedCounter<'a> {
    track: &'a TrainTrack,
    bound: f64,
    total: u128,
    almost_embedded: u128,
    used: Vec<u32>,
}

impl CarriedCounter<'_> {
    fn start(&mut self, branch: usize) {
        let length = self.track.lengths[branch];
        if !TrainTrack::fits(length, self.bound) {
            return;
        }
        let band = self.track.full_band(branch).expect("carried tracks have weights");
        self.used[branch] += 1;
        self.visit(branch, length, band, 0);
        self.used[branch] -= 1;
    }

    fn visit(&mut self, last: usize, length: f64, band: (f64, f64), repeats: u32) {
        self.total += 1;
        if repeats == 0 {
            self.almost_embedded += 1;
        }
        for &next in self.track.successors(last) {
            let extended = length + self.track.lengths[next];
            if !TrainTrack::fits(extended, self.bound) {
                continue;
            }
            if let Some(next_band) = self.track.carry(band, next) {
                let repeat = u32::from(self.used[next] > 0);
                self.used[next] += 1;
                self.visit(next, extended, next_band, repeats + repeat);
                self.used[next] -= 1;
            }
        }
    }
}

fn least_squares_slope(points: impl Iterator<Item = (f64, f64)>) -> Result<f64> {
    let points: Vec<(f64, f64)> = points.collect();
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("fit needs distinct lengths".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    Ok(sxy / sxx)
}
