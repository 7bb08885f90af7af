//! PSL(2,R) with fixed subgroup conventions.
//!
//! - geodesic flow `a_t = diag(e^{t/2}, e^{-t/2})`
//! - stable horocycle `n_s = [[1,0],[s,1]]` (lower unipotent, `N`)
//! - unstable horocycle `u_r = [[1,r],[0,1]]` (upper unipotent, `U`)
//! - Weyl element `ω = [[0,-1],[1,0]]`, so `ω a_t ω⁻¹ = a_{-t}`
//!
//! Elements are frames; the geodesic flow acts on the left and the lattice on
//! the right. The basepoint of a frame `g` in the upper half-plane is
//! `g⁻¹·i`, which makes `t ↦ a_t g` a unit-speed geodesic.
//!
//! The SO(d,1) analogues for d ≥ 3 use `(d+1)×(d+1)` matrices with the same
//! block structure (`A` a one-parameter boost, `N`/`U` the two horospherical
//! subgroups); only d = 2 is implemented here.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// Threshold on `|a|` below which an element is assigned to the ω-cell.
pub const CELL_TOLERANCE: f64 = 1e-9;

const SINGULAR_TOLERANCE: f64 = 1e-12;

/// A unimodular 2×2 matrix modulo `±I`.
///
/// The stored representative has nonnegative trace; when the trace is zero the
/// first nonzero entry among `(a, b, c)` is positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Builds an element from arbitrary entries with positive determinant,
    /// rescaling to determinant one and fixing the sign of the representative.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det.abs() <= SINGULAR_TOLERANCE {
            return Err(Error::SingularMatrix { det });
        }
        if det < 0.0 {
            return Err(Error::NegativeDeterminant { det });
        }
        Ok(Self::from_positive_det(a, b, c, d, det))
    }

    /// Accepts entries whose determinant is already within `1e-12` of one,
    /// keeping them bit-for-bit apart from the sign rule. Used when reading
    /// serialized matrices back.
    pub fn from_unimodular(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() > SINGULAR_TOLERANCE {
            return Self::new(a, b, c, d);
        }
        Ok(Self { a, b, c, d }.with_canonical_sign())
    }

    fn from_positive_det(a: f64, b: f64, c: f64, d: f64, det: f64) -> Self {
        let scale = det.sqrt().recip();
        Self {
            a: a * scale,
            b: b * scale,
            c: c * scale,
            d: d * scale,
        }
        .with_canonical_sign()
    }

    fn with_canonical_sign(self) -> Self {
        let trace = self.a + self.d;
        let flip = if trace != 0.0 {
            trace < 0.0
        } else {
            [self.a, self.b, self.c]
                .into_iter()
                .find(|&x| x != 0.0)
                .is_some_and(|x| x < 0.0)
        };
        if flip {
            Self {
                a: -self.a,
                b: -self.b,
                c: -self.c,
                d: -self.d,
            }
        } else {
            self
        }
    }

    /// Geodesic flow element `a_t`.
    pub fn geodesic(t: f64) -> Self {
        let h = (0.5 * t).exp();
        Self {
            a: h,
            b: 0.0,
            c: 0.0,
            d: h.recip(),
        }
    }

    /// Stable horocycle element `n_s` (lower unipotent).
    pub fn stable(s: f64) -> Self {
        Self {
            a: 1.0,
            b: 0.0,
            c: s,
            d: 1.0,
        }
    }

    /// Unstable horocycle element `u_r` (upper unipotent).
    pub fn unstable(r: f64) -> Self {
        Self {
            a: 1.0,
            b: r,
            c: 0.0,
            d: 1.0,
        }
    }

    pub fn weyl() -> Self {
        Self {
            a: 0.0,
            b: -1.0,
            c: 1.0,
            d: 0.0,
        }
        .with_canonical_sign()
    }

    /// Rotation about `i` by angle `theta` (counterclockwise).
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (0.5 * theta).sin_cos();
        Self { a: c, b: s, c: -s, d: c }.with_canonical_sign()
    }

    /// Entries `[a, b, c, d]` of the stored representative.
    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
        .with_canonical_sign()
    }

    /// `|trace| > 2 + tol`.
    pub fn is_hyperbolic(&self, tol: f64) -> bool {
        self.trace().abs() > 2.0 + tol
    }

    /// Translation length `2·arccosh(|tr|/2)`, zero for non-hyperbolic elements.
    pub fn translation_length(&self) -> f64 {
        let half = 0.5 * self.trace().abs();
        if half > 1.0 {
            2.0 * half.acosh()
        } else {
            0.0
        }
    }

    /// Largest entrywise deviation between the two stored representatives.
    pub fn max_entry_diff(&self, other: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries().iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Right-invariant frame distance `min_± ‖g h⁻¹ ∓ I‖_F`.
    pub fn frame_distance(&self, other: &Self) -> f64 {
        frobenius_from_identity(&(*self * other.inverse()))
    }

    /// Möbius action on the upper half-plane.
    pub fn act(&self, z: HPoint) -> HPoint {
        let (x, y) = (z.x, z.y);
        // (a z + b)/(c z + d) with z = x + i y
        let nr = self.a * x + self.b;
        let dr = self.c * x + self.d;
        let ni = self.a * y;
        let di = self.c * y;
        let den = dr * dr + di * di;
        let re = (nr * dr + ni * di) / den;
        // Im = det·y / |cz+d|², which stays positive.
        let im = y / den;
        HPoint { x: re, y: im }
    }

    /// Basepoint `g⁻¹·i` of the frame `g`.
    pub fn basepoint(&self) -> HPoint {
        self.inverse().act(HPoint::I)
    }

    /// `a_{-T} · g · a_T`: stable directions are expanded, unstable contracted.
    pub fn flow_conjugate(&self, time: f64) -> Self {
        GroupElement::geodesic(-time) * *self * GroupElement::geodesic(time)
    }

    /// A frame `x` with `x · self · x⁻¹ = a_ℓ`, `ℓ` the translation length.
    ///
    /// Flowing `x` by `a_t` runs along the axis of `self`; returns `None` for
    /// non-hyperbolic elements.
    pub fn axis_frame(&self) -> Option<Self> {
        let tr = self.trace();
        if tr.abs() <= 2.0 {
            return None;
        }
        // Work with the positive-trace representative (already canonical).
        let disc = (tr * tr - 4.0).sqrt();
        let grow = 0.5 * (tr + disc);
        let shrink = 0.5 * (tr - disc);
        // Left eigenvectors v with v·M = λ v solve (a-λ) v1 + c v2 = 0.
        let left = |lambda: f64| -> [f64; 2] {
            let (a, b, c, d) = (self.a, self.b, self.c, self.d);
            if c.abs() >= b.abs() {
                [c, lambda - a]
            } else {
                [lambda - d, b]
            }
        };
        let top = left(grow);
        let bottom = left(shrink);
        let det = top[0] * bottom[1] - top[1] * bottom[0];
        if det.abs() <= SINGULAR_TOLERANCE {
            return None;
        }
        let top = if det < 0.0 { [-top[0], -top[1]] } else { top };
        GroupElement::new(top[0], top[1], bottom[0], bottom[1]).ok()
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        let a = self.a * rhs.a + self.b * rhs.c;
        let b = self.a * rhs.b + self.b * rhs.d;
        let c = self.c * rhs.a + self.d * rhs.c;
        let d = self.c * rhs.b + self.d * rhs.d;
        let det = a * d - b * c;
        GroupElement::from_positive_det(a, b, c, d, det)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{:.16e}, {:.16e}], [{:.16e}, {:.16e}]]",
            self.a, self.b, self.c, self.d
        )
    }
}

fn frobenius_from_identity(g: &GroupElement) -> f64 {
    let [a, b, c, d] = g.entries();
    let off = b * b + c * c;
    let plus = (a - 1.0).powi(2) + (d - 1.0).powi(2) + off;
    let minus = (a + 1.0).powi(2) + (d + 1.0).powi(2) + off;
    plus.min(minus).sqrt()
}

/// Bruhat cell of an element together with its `N·A·U` factors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BruhatFactors {
    /// `g = n_s · a_t · u_r` up to sign.
    BigCell { s: f64, t: f64, r: f64 },
    /// `g ∈ N M A ω`; the `δ` projection is the identity there.
    OmegaCell,
}

impl BruhatFactors {
    pub fn decompose(g: &GroupElement) -> Self {
        Self::decompose_with_tolerance(g, CELL_TOLERANCE)
    }

    pub fn decompose_with_tolerance(g: &GroupElement, cell_tolerance: f64) -> Self {
        let [a, b, c, _] = g.entries();
        if a.abs() <= cell_tolerance {
            return BruhatFactors::OmegaCell;
        }
        BruhatFactors::BigCell {
            s: c / a,
            t: 2.0 * a.abs().ln(),
            r: b / a,
        }
    }

    /// A-parameter of `δ(g)`; zero on the ω-cell.
    pub fn delta(&self) -> f64 {
        match *self {
            BruhatFactors::BigCell { t, .. } => t,
            BruhatFactors::OmegaCell => 0.0,
        }
    }

    pub fn is_big_cell(&self) -> bool {
        matches!(self, BruhatFactors::BigCell { .. })
    }

    /// `n_s · a_t · u_r`, or `None` on the ω-cell.
    pub fn recompose(&self) -> Option<GroupElement> {
        match *self {
            BruhatFactors::BigCell { s, t, r } => Some(
                GroupElement::stable(s) * GroupElement::geodesic(t) * GroupElement::unstable(r),
            ),
            BruhatFactors::OmegaCell => None,
        }
    }
}

/// `Δ(h, g)`: the A-parameter of `δ(h·g⁻¹)`.
pub fn crossover_delta(h: &GroupElement, g: &GroupElement) -> Result<f64> {
    match BruhatFactors::decompose(&(*h * g.inverse())) {
        BruhatFactors::BigCell { t, .. } => Ok(t),
        BruhatFactors::OmegaCell => Err(Error::CrossoverUndefined),
    }
}

/// Point of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub const I: HPoint = HPoint { x: 0.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() || y <= 0.0 {
            return Err(Error::NotInUpperHalfPlane { y });
        }
        Ok(Self { x, y })
    }

    /// Hyperbolic distance, via `sinh(d/2) = |z - w| / (2 √(Im z Im w))`.
    pub fn distance(&self, other: &HPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let chord = (dx * dx + dy * dy).sqrt();
        2.0 * (chord / (2.0 * (self.y * other.y).sqrt())).asinh()
    }
}

/// Hyperbolic distance between two points of the upper half-plane.
pub fn hyp_distance(z: &HPoint, w: &HPoint) -> f64 {
    z.distance(w)
}

/// `cosh` of the distance from `i` to `g·i`, i.e. `‖g‖²_F / 2`.
pub fn cosh_displacement(g: &GroupElement) -> f64 {
    let [a, b, c, d] = g.entries();
    0.5 * (a * a + b * b + c * c + d * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn make_element_examples() {
        let id = GroupElement::new(1.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(id, GroupElement::IDENTITY);
        let scaled = GroupElement::new(2.0, 0.0, 0.0, 2.0).unwrap();
        assert!(scaled.max_entry_diff(&GroupElement::IDENTITY) < 1e-15);
        let neg = GroupElement::new(-2.0, -1.0, -1.0, -1.0).unwrap();
        let pos = GroupElement::new(2.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(neg, pos);
        assert_eq!(pos.entries(), [2.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn singular_and_reflecting_matrices_are_rejected() {
        assert!(matches!(
            GroupElement::new(1.0, 2.0, 2.0, 4.0),
            Err(Error::SingularMatrix { .. })
        ));
        assert!(matches!(
            GroupElement::new(0.0, 1.0, 1.0, 0.0),
            Err(Error::NegativeDeterminant { .. })
        ));
    }

    #[test]
    fn sign_rule_on_zero_trace() {
        let w = GroupElement::weyl();
        assert_eq!(w.entries(), [0.0, 1.0, -1.0, 0.0]);
        let again = GroupElement::new(0.0, -1.0, 1.0, 0.0).unwrap();
        assert_eq!(again, w);
    }

    #[test]
    fn bruhat_examples() {
        assert_eq!(
            BruhatFactors::decompose(&GroupElement::IDENTITY),
            BruhatFactors::BigCell {
                s: 0.0,
                t: 0.0,
                r: 0.0
            }
        );
        let g = GroupElement::new(2.0, 1.0, 1.0, 1.0).unwrap();
        match BruhatFactors::decompose(&g) {
            BruhatFactors::BigCell { s, t, r } => {
                assert!(close(s, 0.5, 1e-15));
                assert!(close(t, 2.0 * 2f64.ln(), 1e-15));
                assert!(close(r, 0.5, 1e-15));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            BruhatFactors::decompose(&GroupElement::weyl()),
            BruhatFactors::OmegaCell
        );
        assert_eq!(BruhatFactors::OmegaCell.delta(), 0.0);
    }

    #[test]
    fn bruhat_handles_negative_leading_entry() {
        // trace positive but a < 0: the -I representative is used.
        let g = GroupElement::new(-0.5, 1.0, -3.0, 4.0).unwrap();
        let factors = BruhatFactors::decompose(&g);
        let back = factors.recompose().unwrap();
        let err = back
            .max_entry_diff(&g)
            .min(back.max_entry_diff(&GroupElement::new(0.5, -1.0, 3.0, -4.0).unwrap()));
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn flow_conjugate_examples() {
        let t = 2.0;
        let u = GroupElement::unstable(1.0).flow_conjugate(t);
        assert!(u.max_entry_diff(&GroupElement::unstable((-t).exp())) < 1e-15);
        let n = GroupElement::stable(1.0).flow_conjugate(t);
        assert!(n.max_entry_diff(&GroupElement::stable(t.exp())) < 1e-12);
        let a = GroupElement::geodesic(0.7).flow_conjugate(3.1);
        assert!(a.max_entry_diff(&GroupElement::geodesic(0.7)) < 1e-15);
    }

    #[test]
    fn distance_examples() {
        let i = HPoint::I;
        let two_i = HPoint::new(0.0, 2.0).unwrap();
        assert!(close(hyp_distance(&i, &two_i), 2f64.ln(), 1e-15));
        assert_eq!(hyp_distance(&i, &i), 0.0);
        let w = HPoint::new(1.0, 1.0).unwrap();
        assert!(close(hyp_distance(&i, &w), 1.5f64.acosh(), 1e-15));
        assert!(close(hyp_distance(&i, &w), 0.962424, 1e-6));
        assert!(HPoint::new(0.0, 0.0).is_err());
    }

    #[test]
    fn crossover_examples() {
        let g = GroupElement::new(1.3, 0.2, -0.4, 0.7).unwrap();
        assert!(crossover_delta(&g, &g).unwrap().abs() < 1e-14);
        let h = GroupElement::stable(1.0) * g;
        assert!(crossover_delta(&h, &g).unwrap().abs() < 1e-14);
        let h = GroupElement::new(2.0, 1.0, 1.0, 1.0).unwrap() * g;
        assert!(close(crossover_delta(&h, &g).unwrap(), 2.0 * 2f64.ln(), 1e-12));
        let h = GroupElement::weyl() * g;
        assert_eq!(crossover_delta(&h, &g), Err(Error::CrossoverUndefined));
    }

    #[test]
    fn geodesic_flow_moves_basepoint_at_unit_speed() {
        let g = GroupElement::new(1.3, 0.2, -0.4, 0.7).unwrap();
        for t in [0.5, 1.0, 4.0] {
            let moved = GroupElement::geodesic(t) * g;
            assert!(close(g.basepoint().distance(&moved.basepoint()), t, 1e-12));
        }
    }

    #[test]
    fn axis_frame_diagonalizes() {
        let m = GroupElement::new(1.70710678, -3.90447501, -0.49026145, 1.70710678).unwrap();
        let x = m.axis_frame().unwrap();
        let conj = x * m * x.inverse();
        let expected = GroupElement::geodesic(m.translation_length());
        assert!(conj.max_entry_diff(&expected) < 1e-9, "{conj}");
        assert!(GroupElement::rotation(0.3).axis_frame().is_none());
    }

    #[test]
    fn frame_distance_is_right_invariant() {
        let g = GroupElement::new(1.3, 0.2, -0.4, 0.7).unwrap();
        let h = GroupElement::new(0.9, -0.5, 0.3, 0.95).unwrap();
        let k = GroupElement::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let d1 = g.frame_distance(&h);
        let d2 = (g * k).frame_distance(&(h * k));
        assert!(close(d1, d2, 1e-12));
        assert_eq!(g.frame_distance(&g), 0.0);
    }
}
