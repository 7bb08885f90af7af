//! Interval exchange transformations.
//!
//! Interval `j` (1-based in records, 0-based in code) is placed at range
//! position `π(j)`. Intervals are half-open, so `T` is a bijection of
//! `[0, |I|)` defined at left endpoints.
//!
//! Worked example for images `(3,1,4,2)` and lengths `(0.2, 0.3, 0.1, 0.4)`:
//! the range order is intervals `2, 4, 1, 3`, giving range offsets
//! `interval 2 → 0`, `interval 4 → 0.3`, `interval 1 → 0.7`, `interval 3 → 0.9`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A permutation of `{1..p}` stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
    positions: Vec<usize>,
}

impl Permutation {
    /// From 1-based images: interval `j` goes to position `images[j-1]`.
    pub fn new(images: &[usize]) -> Result<Self> {
        let p = images.len();
        if p == 0 {
            return Err(Error::InvalidPermutation("empty permutation".into()));
        }
        let mut positions = vec![usize::MAX; p];
        let mut zero_based = Vec::with_capacity(p);
        for (j, &image) in images.iter().enumerate() {
            if image == 0 || image > p {
                return Err(Error::InvalidPermutation(format!(
                    "image {image} of interval {} is outside 1..{p}",
                    j + 1
                )));
            }
            if positions[image - 1] != usize::MAX {
                return Err(Error::InvalidPermutation(format!(
                    "image {image} is repeated (intervals {} and {})",
                    positions[image - 1] + 1,
                    j + 1
                )));
            }
            positions[image - 1] = j;
            zero_based.push(image - 1);
        }
        Ok(Self {
            images: zero_based,
            positions,
        })
    }

    pub fn identity(p: usize) -> Self {
        Self::new(&(1..=p).collect::<Vec<_>>()).expect("identity is a permutation")
    }

    /// Reverses the order of the intervals: `(p, p-1, ..., 1)`.
    pub fn reversal(p: usize) -> Self {
        Self::new(&(1..=p).rev().collect::<Vec<_>>()).expect("reversal is a permutation")
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// 0-based range position of interval `j`.
    pub fn image(&self, j: usize) -> usize {
        self.images[j]
    }

    /// 0-based interval sitting at range position `m`.
    pub fn interval_at(&self, m: usize) -> usize {
        self.positions[m]
    }

    /// 1-based images, as in records.
    pub fn images_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    /// Range order: intervals listed by position (1-based).
    pub fn range_order_one_based(&self) -> Vec<usize> {
        self.positions.iter().map(|i| i + 1).collect()
    }

    /// Smallest `k < p` with `π({1..k}) = {1..k}`, if any.
    pub fn reducing_prefix(&self) -> Option<usize> {
        let mut max_image = 0;
        for (j, &image) in self.images.iter().enumerate().take(self.len() - 1) {
            max_image = max_image.max(image);
            if max_image == j {
                return Some(j + 1);
            }
        }
        None
    }

    pub fn is_irreducible(&self) -> bool {
        self.len() >= 2 && self.reducing_prefix().is_none()
    }
}

/// Interval exchange transformation with coordinates in `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct Iet<S> {
    lengths: Vec<S>,
    permutation: Permutation,
    domain_offsets: Vec<S>,
    range_offsets: Vec<S>,
    /// Range offsets ordered by position.
    range_by_position: Vec<S>,
    total: S,
}

impl<S: Scalar> Iet<S> {
    pub fn new(lengths: Vec<S>, permutation: Permutation) -> Result<Self> {
        if lengths.len() != permutation.len() {
            return Err(Error::InvalidLengths(format!(
                "{} lengths for a permutation of {} symbols",
                lengths.len(),
                permutation.len()
            )));
        }
        if let Some((j, l)) = lengths.iter().enumerate().find(|(_, l)| !l.is_positive_strict()) {
            return Err(Error::InvalidLengths(format!(
                "length {} of interval {} is not positive",
                l,
                j + 1
            )));
        }
        let p = lengths.len();
        let mut domain_offsets = Vec::with_capacity(p);
        let mut acc = S::zero();
        for l in &lengths {
            domain_offsets.push(acc.clone());
            acc = acc + l.clone();
        }
        let total = acc;
        let mut range_by_position = Vec::with_capacity(p);
        let mut acc = S::zero();
        for m in 0..p {
            range_by_position.push(acc.clone());
            acc = acc + lengths[permutation.interval_at(m)].clone();
        }
        let range_offsets = (0..p)
            .map(|j| range_by_position[permutation.image(j)].clone())
            .collect();
        Ok(Self {
            lengths,
            permutation,
            domain_offsets,
            range_offsets,
            range_by_position,
            total,
        })
    }

    pub fn from_images(lengths: Vec<S>, images: &[usize]) -> Result<Self> {
        Self::new(lengths, Permutation::new(images)?)
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn lengths(&self) -> &[S] {
        &self.lengths
    }

    pub fn permutation(&self) -> &Permutation {
        &self.permutation
    }

    pub fn total(&self) -> &S {
        &self.total
    }

    pub fn domain_offsets(&self) -> &[S] {
        &self.domain_offsets
    }

    /// Range offset of each interval, indexed by interval.
    pub fn range_offsets(&self) -> &[S] {
        &self.range_offsets
    }

    /// Range offsets indexed by position.
    pub fn range_offsets_by_position(&self) -> &[S] {
        &self.range_by_position
    }

    /// Interior discontinuities of `T`: left endpoints of intervals `2..p`.
    pub fn discontinuities(&self) -> &[S] {
        &self.domain_offsets[1..]
    }

    /// Interior discontinuities of `T⁻¹`.
    pub fn inverse_discontinuities(&self) -> &[S] {
        &self.range_by_position[1..]
    }

    fn check_domain(&self, x: &S) -> Result<()> {
        if *x < S::zero() || *x >= self.total {
            return Err(Error::OutOfDomain {
                x: x.to_string(),
                total: self.total.to_string(),
            });
        }
        Ok(())
    }

    /// Index of the interval containing `x`.
    pub fn interval_of(&self, x: &S) -> Result<usize> {
        self.check_domain(x)?;
        Ok(self.domain_offsets.partition_point(|o| o <= x) - 1)
    }

    /// Interval whose image contains `y`.
    pub fn preimage_interval_of(&self, y: &S) -> Result<usize> {
        self.check_domain(y)?;
        let position = self.range_by_position.partition_point(|o| o <= y) - 1;
        Ok(self.permutation.interval_at(position))
    }

    pub fn apply(&self, x: &S) -> Result<S> {
        let j = self.interval_of(x)?;
        Ok(self.settle(x.clone() + (self.range_offsets[j].clone() - self.domain_offsets[j].clone())))
    }

    pub fn inverse_apply(&self, y: &S) -> Result<S> {
        let j = self.preimage_interval_of(y)?;
        Ok(self.settle(y.clone() - (self.range_offsets[j].clone() - self.domain_offsets[j].clone())))
    }

    // Floating round-off can push a value onto |I|; treat the interval as a circle there.
    fn settle(&self, x: S) -> S {
        if x >= self.total {
            x - self.total.clone()
        } else if x < S::zero() {
            x + self.total.clone()
        } else {
            x
        }
    }

    /// `x, T(x), ..., T^n(x)` (n + 1 points).
    pub fn orbit(&self, x: &S, n: usize) -> Result<Vec<S>> {
        let mut out = Vec::with_capacity(n + 1);
        let mut current = x.clone();
        self.check_domain(&current)?;
        out.push(current.clone());
        for _ in 0..n {
            current = self.apply(&current)?;
            out.push(current.clone());
        }
        Ok(out)
    }

    /// Keane-type diagnostic: iterates every interior discontinuity forward for
    /// up to `depth` steps and reports the first step at which one lands on a
    /// discontinuity. Steps are scanned in increasing order, discontinuities in
    /// increasing order within a step.
    pub fn keane_check(&self, depth: usize) -> KeaneVerdict {
        if let Some(k) = self.permutation.reducing_prefix() {
            return KeaneVerdict::Reducible { prefix: k };
        }
        let targets = self.discontinuities();
        let mut points: Vec<S> = targets.to_vec();
        for step in 1..=depth {
            for (i, point) in points.iter_mut().enumerate() {
                let next = self
                    .apply(point)
                    .expect("orbit points stay in the domain");
                *point = next;
                if let Some(j) = self.matching_discontinuity(point) {
                    return KeaneVerdict::Collision {
                        step,
                        from: i + 2,
                        hits: j + 2,
                        exact: S::EXACT,
                    };
                }
            }
        }
        KeaneVerdict::Pass { depth }
    }

    fn matching_discontinuity(&self, x: &S) -> Option<usize> {
        let targets = self.discontinuities();
        let idx = targets.partition_point(|t| t < x);
        [idx.checked_sub(1), Some(idx)]
            .into_iter()
            .flatten()
            .filter(|&k| k < targets.len())
            .find(|&k| targets[k].coincides(x))
    }

    /// Record form `p; lengths; images`.
    pub fn to_record(&self) -> String {
        let lengths: Vec<String> = self.lengths.iter().map(Scalar::to_record).collect();
        let images: Vec<String> = self
            .permutation
            .images_one_based()
            .iter()
            .map(ToString::to_string)
            .collect();
        format!("{}; {}; {}", self.len(), lengths.join(" "), images.join(" "))
    }

    /// Parses `p; lengths; images`, lengths as decimals or `num/den`.
    pub fn parse_record(text: &str) -> Result<Self> {
        let fields: Vec<&str> = text.split(';').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                1,
                "iet",
                format!("expected `p; lengths; images`, found {} fields", fields.len()),
            ));
        }
        let p: usize = fields[0]
            .parse()
            .map_err(|_| Error::parse(1, "p", format!("`{}` is not a count", fields[0])))?;
        let lengths = fields[1]
            .split_whitespace()
            .map(|t| S::parse(t).ok_or_else(|| Error::parse(1, "lengths", format!("bad length `{t}`"))))
            .collect::<Result<Vec<S>>>()?;
        let images = fields[2]
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::parse(1, "images", format!("bad image `{t}`")))
            })
            .collect::<Result<Vec<usize>>>()?;
        if lengths.len() != p {
            return Err(Error::parse(
                1,
                "lengths",
                format!("expected {p} lengths, found {}", lengths.len()),
            ));
        }
        if images.len() != p {
            return Err(Error::parse(
                1,
                "images",
                format!("expected {p} images, found {}", images.len()),
            ));
        }
        let permutation = Permutation::new(&images).map_err(|e| Error::parse(1, "images", e.to_string()))?;
        Self::new(lengths, permutation).map_err(|e| Error::parse(1, "lengths", e.to_string()))
    }

    /// Converts coordinates to another backend.
    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<Iet<T>> {
        Iet::new(self.lengths.iter().map(f).collect(), self.permutation.clone())
    }
}

impl Iet<BigRational> {
    pub fn to_f64(&self) -> Iet<f64> {
        self.map_scalar(|x| x.to_f64())
            .expect("positive rationals stay positive")
    }
}

impl<S: Scalar> fmt::Display for Iet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_record())
    }
}

impl<S: Scalar> FromStr for Iet<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_record(s)
    }
}

/// Outcome of [`Iet::keane_check`]. Discontinuity indices are 1-based interval
/// numbers (the discontinuity at the left end of interval `k`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KeaneVerdict {
    Pass {
        depth: usize,
    },
    Collision {
        step: usize,
        from: usize,
        hits: usize,
        /// Certified in exact arithmetic rather than within tolerance.
        exact: bool,
    },
    Reducible {
        prefix: usize,
    },
}

/// Eigenvalue-scan statistic `S(θ) = |(1/N) Σ_{n<N} e^{-2πiθn} e^{2πi T^n(x0)/|I|}|`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakMixSpectrum {
    pub thetas: Vec<f64>,
    pub values: Vec<f64>,
    pub max: f64,
    pub argmax: f64,
}

/// Resynchronisation period for the phasor recurrence.
const PHASOR_RESYNC: usize = 512;

pub fn weak_mix_statistic(iet: &Iet<f64>, thetas: &[f64], samples: usize, x0: f64) -> Result<WeakMixSpectrum> {
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let total = *iet.total();
    let tau = std::f64::consts::TAU;
    let mut observations = Vec::with_capacity(samples);
    let mut x = x0;
    iet.check_domain(&x)?;
    for n in 0..samples {
        observations.push(Complex64::from_polar(1.0, tau * x / total));
        if n + 1 < samples {
            x = iet.apply(&x)?;
        }
    }
    let inv_n = 1.0 / samples as f64;
    let values: Vec<f64> = thetas
        .iter()
        .map(|&theta| {
            let step = Complex64::from_polar(1.0, -tau * theta);
            let mut sum = Complex64::new(0.0, 0.0);
            let mut phasor = Complex64::new(1.0, 0.0);
            for (n, z) in observations.iter().enumerate() {
                if n % PHASOR_RESYNC == 0 {
                    let phase = (theta * n as f64).fract();
                    phasor = Complex64::from_polar(1.0, -tau * phase);
                }
                sum += z * phasor;
                phasor *= step;
            }
            (sum.norm() * inv_n).min(1.0)
        })
        .collect();
    let (argmax, max) = thetas
        .iter()
        .zip(&values)
        .fold((f64::NAN, f64::NEG_INFINITY), |best, (&t, &v)| {
            if v > best.1 {
                (t, v)
            } else {
                best
            }
        });
    Ok(WeakMixSpectrum {
        thetas: thetas.to_vec(),
        values,
        max,
        argmax,
    })
}

/// Uniform grid `k/m`, `k = 0..m`.
pub fn uniform_theta_grid(m: usize) -> Vec<f64> {
    (0..m).map(|k| k as f64 / m as f64).collect()
}
