//! Constant-roof suspension of an IET and its flat Z-cover.
//!
//! The surface is the rectangle `[0, c] × [0, |I|)` with the horizontal sides
//! glued by translation and the vertical sides glued by `(c, y) ~ (0, T(y))`.
//! Crossing the right side moves to the next sheet of the Z-cover, so a point
//! on the cover is `(sheet, x, y)` with `τ = sheet·c + x`.
//!
//! Boundary vertices are the points where the vertical gluing changes
//! translation: on the right side `y = 0, d_2, ..., d_p, |I|` (domain offsets),
//! on the left side `y = 0` and the range offsets of positions `2..p`, `|I|`.
//! Their identification classes are the cone points and marked points.

use std::fmt;

use crate::error::{Error, Result};
use crate::iet::Iet;
use crate::scalar::Scalar;

/// A boundary vertex of the rectangle, indexed from the bottom of its side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SideVertex {
    Left(usize),
    Right(usize),
}

impl fmt::Display for SideVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideVertex::Left(i) => write!(f, "L{i}"),
            SideVertex::Right(i) => write!(f, "R{i}"),
        }
    }
}

/// One identification class of boundary vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexClass {
    pub members: Vec<SideVertex>,
    /// Total angle in multiples of `2π`.
    pub angle_multiple: u32,
}

impl VertexClass {
    pub fn is_singular(&self) -> bool {
        self.angle_multiple != 1
    }
}

/// A cone point with its angle and a representative position on the left side.
#[derive(Clone, Debug, PartialEq)]
pub struct ConePoint<S> {
    pub class: usize,
    pub angle_multiple: u32,
    pub x: S,
    pub y: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TranslationSurface<S> {
    iet: Iet<S>,
    roof: S,
    classes: Vec<VertexClass>,
    left_class: Vec<usize>,
    right_class: Vec<usize>,
    genus: u32,
}

/// Unit direction `(cos θ, sin θ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction<S> {
    pub cos: S,
    pub sin: S,
}

impl Direction<f64> {
    pub fn from_angle(theta: f64) -> Self {
        Self {
            cos: theta.cos(),
            sin: theta.sin(),
        }
    }

    pub fn angle(&self) -> f64 {
        self.sin.atan2(self.cos)
    }
}

impl<S: Scalar> Direction<S> {
    /// Checks `cos² + sin² = 1` (exactly for rationals).
    pub fn new(cos: S, sin: S) -> Result<Self> {
        let norm = cos.clone() * cos.clone() + sin.clone() * sin.clone();
        if !norm.coincides(&S::one()) {
            return Err(Error::InvalidArgument(format!(
                "direction ({cos}, {sin}) is not a unit vector"
            )));
        }
        Ok(Self { cos, sin })
    }

    /// Rational unit vector `(a/h, b/h)` from a Pythagorean triple.
    pub fn pythagorean(a: i64, b: i64, h: i64) -> Result<Self> {
        if h == 0 || a * a + b * b != h * h {
            return Err(Error::InvalidArgument(format!(
                "({a}, {b}, {h}) is not a Pythagorean triple"
            )));
        }
        Ok(Self {
            cos: S::from_int(a) / S::from_int(h),
            sin: S::from_int(b) / S::from_int(h),
        })
    }

    pub fn horizontal() -> Self {
        Self {
            cos: S::one(),
            sin: S::zero(),
        }
    }

    pub fn vertical() -> Self {
        Self {
            cos: S::zero(),
            sin: S::one(),
        }
    }

    pub fn reversed(&self) -> Self {
        Self {
            cos: -self.cos.clone(),
            sin: -self.sin.clone(),
        }
    }

    fn is_forward_horizontal(&self) -> bool {
        self.sin.coincides(&S::zero()) && self.cos > S::zero()
    }
}

/// A point of the Z-cover: sheet index plus coordinates in the rectangle.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverPoint<S> {
    pub sheet: i64,
    pub x: S,
    pub y: S,
}

impl<S: Scalar> CoverPoint<S> {
    pub fn new(sheet: i64, x: S, y: S) -> Self {
        Self { sheet, x, y }
    }

    /// `τ = sheet·c + x`.
    pub fn tau(&self, roof: &S) -> S {
        S::from_int(self.sheet) * roof.clone() + self.x.clone()
    }

    /// Deck transformation by `m` sheets.
    pub fn deck_shift(&self, m: i64) -> Self {
        Self {
            sheet: self.sheet + m,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatRay<S> {
    pub start: CoverPoint<S>,
    pub direction: Direction<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FlowOutcome<S> {
    Arrived(CoverPoint<S>),
    /// The trajectory reaches a cone point at `time`, at the given position.
    SingularityHit { time: S, at: CoverPoint<S> },
}

impl<S: Scalar> FlowOutcome<S> {
    pub fn into_result(self) -> Result<CoverPoint<S>> {
        match self {
            FlowOutcome::Arrived(p) => Ok(p),
            FlowOutcome::SingularityHit { time, .. } => Err(Error::SingularityHit {
                time: time.to_string(),
            }),
        }
    }
}

/// Value of a flat Busemann function.
#[derive(Clone, Debug, PartialEq)]
pub enum BusemannValue<S> {
    Finite(S),
    /// `τ(g_t x) − t` decreases linearly at this (negative) rate.
    NegInfinity { decay_rate: f64 },
    /// `τ(g_{−t} x) + t` increases linearly at this (positive) rate.
    PosInfinity { growth_rate: f64 },
    /// The horizontal leaf runs into a cone point after `time`; the limit is undefined.
    Separatrix { time: S },
}

/// A closed straight trajectory on the surface.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedLoop<S> {
    pub start: CoverPoint<S>,
    pub direction: Direction<S>,
    pub length: S,
}

/// Depth used when checking that a horizontal leaf avoids cone points.
pub const DEFAULT_LEAF_DEPTH: usize = 10_000;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut i = i;
        while self.parent[i] != root {
            let next = self.parent[i];
            self.parent[i] = root;
            i = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl<S: Scalar> TranslationSurface<S> {
    /// Suspends `iet` with constant roof `roof`.
    pub fn suspend(iet: Iet<S>, roof: S) -> Result<Self> {
        if !roof.is_positive_strict() {
            return Err(Error::InvalidArgument(format!("roof {roof} must be positive")));
        }
        if let Some(k) = iet.permutation().reducing_prefix() {
            return Err(Error::Reducible(k));
        }
        let p = iet.len();
        // Left vertices 0..=p occupy slots 0..=p, right vertices slots p+1..=2p+1.
        let left = |i: usize| i;
        let right = |i: usize| p + 1 + i;
        let mut uf = UnionFind::new(2 * p + 2);
        uf.union(left(0), left(p));
        uf.union(right(0), right(p));
        for j in 0..p {
            let m = iet.permutation().image(j);
            uf.union(right(j), left(m));
            uf.union(right(j + 1), left(m + 1));
        }
        let quarter_turns = |i: usize| if i == 0 || i == p { 1 } else { 2 };

        let mut root_to_class = std::collections::BTreeMap::new();
        let mut members: Vec<Vec<SideVertex>> = Vec::new();
        let mut turns: Vec<u32> = Vec::new();
        let mut left_class = vec![0; p + 1];
        let mut right_class = vec![0; p + 1];
        for slot in 0..2 * p + 2 {
            let root = uf.find(slot);
            let class = *root_to_class.entry(root).or_insert_with(|| {
                members.push(Vec::new());
                turns.push(0);
                members.len() - 1
            });
            let vertex = if slot <= p {
                left_class[slot] = class;
                SideVertex::Left(slot)
            } else {
                right_class[slot - p - 1] = class;
                SideVertex::Right(slot - p - 1)
            };
            let index = match vertex {
                SideVertex::Left(i) | SideVertex::Right(i) => i,
            };
            turns[class] += quarter_turns(index);
            members[class].push(vertex);
        }
        let classes: Vec<VertexClass> = members
            .into_iter()
            .zip(&turns)
            .map(|(members, &t)| {
                assert_eq!(t % 4, 0, "vertex angles of a translation surface are multiples of 2π");
                VertexClass {
                    members,
                    angle_multiple: t / 4,
                }
            })
            .collect();
        // One face, p + 1 edges (the glued horizontal side and p vertical segments).
        let euler = classes.len() as i64 - p as i64;
        let genus = u32::try_from((2 - euler) / 2).expect("Euler characteristic at most 2");
        Ok(Self {
            iet,
            roof,
            classes,
            left_class,
            right_class,
            genus,
        })
    }

    pub fn iet(&self) -> &Iet<S> {
        &self.iet
    }

    pub fn roof(&self) -> &S {
        &self.roof
    }

    pub fn height(&self) -> &S {
        self.iet.total()
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn vertex_classes(&self) -> &[VertexClass] {
        &self.classes
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.classes.len() as i64 - self.iet.len() as i64
    }

    /// Genuine cone points (angle ≠ 2π).
    pub fn cone_points(&self) -> Vec<ConePoint<S>> {
        self.class_points(true)
    }

    /// Boundary vertices with angle exactly 2π.
    pub fn marked_points(&self) -> Vec<ConePoint<S>> {
        self.class_points(false)
    }

    fn class_points(&self, singular: bool) -> Vec<ConePoint<S>> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_singular() == singular)
            .map(|(k, c)| {
                let left = (0..=self.iet.len())
                    .find(|&i| self.left_class[i] == k)
                    .expect("every class meets the left side");
                ConePoint {
                    class: k,
                    angle_multiple: c.angle_multiple,
                    x: S::zero(),
                    y: self.left_vertex_height(left),
                }
            })
            .collect()
    }

    /// `Σ (angle/2π − 1)` over all vertex classes.
    pub fn gauss_bonnet_excess(&self) -> i64 {
        self.classes
            .iter()
            .map(|c| c.angle_multiple as i64 - 1)
            .sum()
    }

    fn left_vertex_height(&self, i: usize) -> S {
        if i == self.iet.len() {
            self.height().clone()
        } else {
            self.iet.range_offsets_by_position()[i].clone()
        }
    }

    fn matching_vertex(offsets: &[S], total: &S, y: &S) -> Option<usize> {
        if y.coincides(total) {
            return Some(offsets.len());
        }
        let idx = offsets.partition_point(|o| o < y);
        [idx.checked_sub(1), Some(idx)]
            .into_iter()
            .flatten()
            .filter(|&k| k < offsets.len())
            .find(|&k| offsets[k].coincides(y))
    }

    /// Vertex class at height `y` on the left side, if `y` is a vertex.
    pub fn left_vertex_at(&self, y: &S) -> Option<usize> {
        Self::matching_vertex(self.iet.range_offsets_by_position(), self.height(), y)
            .map(|i| self.left_class[i])
    }

    /// Vertex class at height `y` on the right side, if `y` is a vertex.
    pub fn right_vertex_at(&self, y: &S) -> Option<usize> {
        Self::matching_vertex(self.iet.domain_offsets(), self.height(), y).map(|i| self.right_class[i])
    }

    fn singular_left(&self, y: &S) -> bool {
        self.left_vertex_at(y)
            .is_some_and(|k| self.classes[k].is_singular())
    }

    fn singular_right(&self, y: &S) -> bool {
        self.right_vertex_at(y)
            .is_some_and(|k| self.classes[k].is_singular())
    }

    /// Whether the point sits on a cone point.
    pub fn is_singular(&self, p: &CoverPoint<S>) -> bool {
        p.x.coincides(&S::zero()) && self.singular_left(&p.y)
    }

    /// Validates coordinates: `0 ≤ x < c`, `0 ≤ y < |I|`.
    pub fn point(&self, sheet: i64, x: S, y: S) -> Result<CoverPoint<S>> {
        if x < S::zero() || x >= self.roof {
            return Err(Error::OutOfDomain {
                x: x.to_string(),
                total: self.roof.to_string(),
            });
        }
        if y < S::zero() || y >= *self.height() {
            return Err(Error::OutOfDomain {
                x: y.to_string(),
                total: self.height().to_string(),
            });
        }
        Ok(CoverPoint::new(sheet, x, y))
    }

    /// Unit-speed straight-line flow for time `t ≥ 0`.
    pub fn straight_flow(&self, start: &CoverPoint<S>, direction: &Direction<S>, t: &S) -> Result<FlowOutcome<S>> {
        if *t < S::zero() {
            return Err(Error::InvalidArgument(format!("flow time {t} is negative")));
        }
        if self.is_singular(start) {
            return Err(Error::StartsAtSingularity);
        }
        let zero = S::zero();
        let c = self.roof.clone();
        let h = self.height().clone();
        let (cos, sin) = (direction.cos.clone(), direction.sin.clone());
        let moves_right = cos > zero && !cos.coincides(&zero);
        let moves_left = cos < zero && !cos.coincides(&zero);
        let moves_up = sin > zero && !sin.coincides(&zero);
        let moves_down = sin < zero && !sin.coincides(&zero);

        let mut sheet = start.sheet;
        let mut x = start.x.clone();
        let mut y = start.y.clone();
        let mut elapsed = S::zero();
        let hit = |time: S, sheet: i64, y: S| {
            Ok(FlowOutcome::SingularityHit {
                time,
                at: CoverPoint::new(sheet, S::zero(), y),
            })
        };

        loop {
            let remaining = t.clone() - elapsed.clone();
            let to_side = if moves_right {
                Some((c.clone() - x.clone()) / cos.clone())
            } else if moves_left {
                Some(x.clone() / -cos.clone())
            } else {
                None
            };
            let to_edge = if moves_up {
                Some((h.clone() - y.clone()) / sin.clone())
            } else if moves_down {
                Some(y.clone() / -sin.clone())
            } else {
                None
            };
            let mut dt = remaining.clone();
            for candidate in [&to_side, &to_edge].into_iter().flatten() {
                if *candidate < dt {
                    dt = candidate.clone();
                }
            }
            let side_event = to_side.as_ref().is_some_and(|s| s.coincides(&dt));
            let edge_event = to_edge.as_ref().is_some_and(|s| s.coincides(&dt));

            // Vertical motion along the glued side passes through left vertices.
            if !moves_right && !moves_left && x.coincides(&zero) && (moves_up || moves_down) {
                let end = y.clone() + sin.clone() * dt.clone();
                if let Some(hit_y) = self.first_singular_between(&y, &end, moves_up) {
                    let time = elapsed + (hit_y.clone() - y.clone()) / sin.clone();
                    return hit(time, sheet, self.wrap_height(hit_y));
                }
            }

            x = if side_event {
                if moves_right {
                    c.clone()
                } else {
                    zero.clone()
                }
            } else {
                x + cos.clone() * dt.clone()
            };
            y = if edge_event {
                if moves_up {
                    h.clone()
                } else {
                    zero.clone()
                }
            } else {
                y + sin.clone() * dt.clone()
            };
            elapsed = elapsed + dt.clone();
            let done = dt.coincides(&remaining);

            if edge_event {
                if moves_up {
                    y = zero.clone();
                } else if !done && !side_event {
                    // Re-enter from the top and keep moving down.
                    y = h.clone();
                }
            }
            if side_event {
                if moves_right {
                    if self.singular_right(&y) {
                        let landing = self.iet.apply(&y)?;
                        return hit(elapsed, sheet + 1, landing);
                    }
                    y = self.iet.apply(&y)?;
                    x = zero.clone();
                    sheet += 1;
                } else {
                    if self.singular_left(&y) {
                        return hit(elapsed, sheet, y);
                    }
                    if !done {
                        y = self.iet.inverse_apply(&y)?;
                        x = c.clone();
                        sheet -= 1;
                    }
                }
            }
            if done {
                break;
            }
        }
        if y.coincides(&h) || y >= h {
            y = zero.clone();
        }
        Ok(FlowOutcome::Arrived(CoverPoint::new(sheet, x, y)))
    }

    fn wrap_height(&self, y: S) -> S {
        if y >= *self.height() {
            y - self.height().clone()
        } else {
            y
        }
    }

    /// First singular left vertex strictly after `from` and up to `to`.
    fn first_singular_between(&self, from: &S, to: &S, upward: bool) -> Option<S> {
        let p = self.iet.len();
        let mut heights: Vec<(S, usize)> = (0..=p).map(|i| (self.left_vertex_height(i), i)).collect();
        if !upward {
            heights.reverse();
        }
        heights.into_iter().find_map(|(v, i)| {
            let strictly_after = if upward { v > *from } else { v < *from } && !v.coincides(from);
            let within = if upward { v <= *to } else { v >= *to } || v.coincides(to);
            (strictly_after && within && self.classes[self.left_class[i]].is_singular()).then_some(v)
        })
    }

    /// Horizontal flow for time `c` from `(0, y)`: lands at `(0, T(y))` on the next sheet.
    pub fn first_return_vertical(&self, y: &S) -> Result<S> {
        let start = self.point(0, S::zero(), y.clone())?;
        let end = self
            .straight_flow(&start, &Direction::horizontal(), &self.roof)?
            .into_result()?;
        debug_assert_eq!(end.sheet, 1);
        Ok(end.y)
    }

    /// Forward Busemann function `lim τ(g_t x) − t`.
    pub fn beta_plus(&self, ray: &FlatRay<S>) -> Result<BusemannValue<S>> {
        self.beta_plus_with_depth(ray, DEFAULT_LEAF_DEPTH)
    }

    pub fn beta_plus_with_depth(&self, ray: &FlatRay<S>, depth: usize) -> Result<BusemannValue<S>> {
        if self.is_singular(&ray.start) {
            return Err(Error::StartsAtSingularity);
        }
        if !ray.direction.is_forward_horizontal() {
            return Ok(BusemannValue::NegInfinity {
                decay_rate: ray.direction.cos.to_f64() - 1.0,
            });
        }
        match self.horizontal_leaf_hit(&ray.start, depth, true) {
            Some(time) => Ok(BusemannValue::Separatrix { time }),
            None => Ok(BusemannValue::Finite(ray.start.tau(&self.roof))),
        }
    }

    /// Backward Busemann function `lim τ(g_{−t} x) + t`.
    pub fn beta_minus(&self, ray: &FlatRay<S>) -> Result<BusemannValue<S>> {
        self.beta_minus_with_depth(ray, DEFAULT_LEAF_DEPTH)
    }

    pub fn beta_minus_with_depth(&self, ray: &FlatRay<S>, depth: usize) -> Result<BusemannValue<S>> {
        if self.is_singular(&ray.start) {
            return Err(Error::StartsAtSingularity);
        }
        if !ray.direction.is_forward_horizontal() {
            return Ok(BusemannValue::PosInfinity {
                growth_rate: 1.0 - ray.direction.cos.to_f64(),
            });
        }
        match self.horizontal_leaf_hit(&ray.start, depth, false) {
            Some(time) => Ok(BusemannValue::Separatrix { time }),
            None => Ok(BusemannValue::Finite(ray.start.tau(&self.roof))),
        }
    }

    /// Time at which the horizontal leaf through `start` reaches a cone point
    /// within `depth` side crossings, forward or backward.
    fn horizontal_leaf_hit(&self, start: &CoverPoint<S>, depth: usize, forward: bool) -> Option<S> {
        let mut y = start.y.clone();
        let mut time = if forward {
            self.roof.clone() - start.x.clone()
        } else {
            start.x.clone()
        };
        for _ in 0..depth {
            if forward {
                if self.singular_right(&y) {
                    return Some(time);
                }
                y = self.iet.apply(&y).ok()?;
            } else {
                if self.singular_left(&y) {
                    return Some(time);
                }
                y = self.iet.inverse_apply(&y).ok()?;
            }
            time = time + self.roof.clone();
        }
        None
    }

    /// Membership in the forward horoball through `base`: `β₊(candidate) ≥ β₊(base)`.
    pub fn in_horoball(&self, base: &FlatRay<S>, candidate: &FlatRay<S>) -> Result<bool> {
        let rank = |v: &BusemannValue<S>| -> Result<(u8, Option<S>)> {
            match v {
                BusemannValue::NegInfinity { .. } => Ok((0, None)),
                BusemannValue::Finite(x) => Ok((1, Some(x.clone()))),
                BusemannValue::PosInfinity { .. } => Ok((2, None)),
                BusemannValue::Separatrix { time } => Err(Error::SingularityHit {
                    time: time.to_string(),
                }),
            }
        };
        let (rb, vb) = rank(&self.beta_plus(base)?)?;
        let (rc, vc) = rank(&self.beta_plus(candidate)?)?;
        Ok(match (vb, vc) {
            (Some(b), Some(c)) => c >= b || c.coincides(&b),
            _ => rc >= rb,
        })
    }

    /// `τ(g_t x) − τ(x) − t` along a ray at the given times.
    pub fn busemann_profile(&self, ray: &FlatRay<S>, times: &[S]) -> Result<Vec<S>> {
        let tau0 = ray.start.tau(&self.roof);
        times
            .iter()
            .map(|t| {
                let end = self.straight_flow(&ray.start, &ray.direction, t)?.into_result()?;
                Ok(end.tau(&self.roof) - tau0.clone() - t.clone())
            })
            .collect()
    }

    /// `|φ(loop)|·c / length`, where `φ` counts signed crossings of the vertical side.
    pub fn cylinder_phi_ratio(&self, closed: &ClosedLoop<S>) -> Result<f64> {
        let end = self
            .straight_flow(&closed.start, &closed.direction, &closed.length)?
            .into_result()?;
        let gap = self.torus_gap(&closed.start, &end);
        let closes = if S::EXACT {
            gap == 0.0
        } else {
            gap <= 1e-10
        };
        if !closes {
            return Err(Error::NotClosed { gap });
        }
        let crossings = (end.sheet - closed.start.sheet).unsigned_abs() as f64;
        Ok(crossings * self.roof.to_f64() / closed.length.to_f64())
    }

    // Distance between two points in the rectangle, y taken modulo |I|.
    fn torus_gap(&self, a: &CoverPoint<S>, b: &CoverPoint<S>) -> f64 {
        let h = self.height().to_f64();
        let dy = (a.y.to_f64() - b.y.to_f64()).abs();
        let dx = (a.x.to_f64() - b.x.to_f64()).abs();
        if S::EXACT && a.x == b.x && a.y == b.y {
            return 0.0;
        }
        dx.max(dy.min(h - dy))
    }

    /// Text dump: roof, IET record, genus, cone-point table and marked points.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("roof {}\n", self.roof.to_record()));
        out.push_str(&format!("iet {}\n", self.iet.to_record()));
        out.push_str(&format!("genus {}\n", self.genus));
        out.push_str(&format!("euler {}\n", self.euler_characteristic()));
        let line = |kind: &str, p: &ConePoint<S>, class: &VertexClass| {
            let members: Vec<String> = class.members.iter().map(ToString::to_string).collect();
            format!(
                "{kind} {} angle {}pi at {} {} [{}]\n",
                p.class,
                2 * p.angle_multiple,
                p.x.to_record(),
                p.y.to_record(),
                members.join(" ")
            )
        };
        for p in self.cone_points() {
            out.push_str(&line("cone", &p, &self.classes[p.class]));
        }
        for p in self.marked_points() {
            out.push_str(&line("marked", &p, &self.classes[p.class]));
        }
        out
    }
}

impl TranslationSurface<f64> {
    /// Searches for a closed trajectory of period `period` (side crossings)
    /// through `(0, y0)` with slope near `slope_guess`, by Newton iteration on
    /// the slope. Returns `None` when the iteration does not settle or the
    /// trajectory runs into a cone point.
    pub fn find_closed_loop(&self, y0: f64, period: usize, slope_guess: f64) -> Option<ClosedLoop<f64>> {
        if period == 0 || !(0.0..*self.height()).contains(&y0) {
            return None;
        }
        let c = self.roof;
        let h = *self.height();
        let mut slope = slope_guess;
        for _ in 0..64 {
            let displacement = self.lifted_displacement(y0, period, slope)?;
            if displacement.abs() < 1e-13 {
                let norm = (1.0 + slope * slope).sqrt();
                let direction = Direction {
                    cos: 1.0 / norm,
                    sin: slope / norm,
                };
                let start = CoverPoint::new(0, 0.0, y0);
                if self.is_singular(&start) {
                    return None;
                }
                let closed = ClosedLoop {
                    start,
                    direction,
                    length: period as f64 * c * norm,
                };
                return self.cylinder_phi_ratio(&closed).ok().map(|_| closed);
            }
            slope -= displacement / (period as f64 * c);
            if !slope.is_finite() || slope.abs() > 1e6 * h / c {
                return None;
            }
        }
        None
    }

    // Vertical drift of `period` returns to the left side, reduced to (−|I|/2, |I|/2].
    // Within fixed combinatorics its derivative in the slope is `period · c`.
    fn lifted_displacement(&self, y0: f64, period: usize, slope: f64) -> Option<f64> {
        let h = *self.height();
        let mut y = y0;
        for _ in 0..period {
            let raw = (y + self.roof * slope).rem_euclid(h);
            y = self.iet.apply(&if raw >= h { 0.0 } else { raw }).ok()?;
        }
        let drift = y - y0;
        Some(drift - h * (drift / h).round())
    }
}
