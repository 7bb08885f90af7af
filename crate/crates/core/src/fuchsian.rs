//! A cocompact surface group with a homomorphism to Z, and samplers over its
//! elements: word enumeration, the stretch ratio `|φ(γ)|/ℓ(γ)`, defect curves
//! of flowed frames, `δ`-spectra of conjugates and proximality scans.
//!
//! Frames are group elements and the lattice acts on the right, so the orbit
//! of a frame `x` is `{xγ}`. Letters are generators or their inverses; the
//! inverse of a lowercase label is written in uppercase (`a1` and `A1`).

use std::collections::BTreeSet;
use std::fmt;

use ordered_float::OrderedFloat;

use crate::error::{Error, Result};
use crate::group::{BruhatFactors, GroupElement};

/// Entrywise tolerance for the relator check.
pub const RELATOR_TOLERANCE: f64 = 1e-9;

/// Trace margin for hyperbolicity.
pub const HYPERBOLIC_MARGIN: f64 = 1e-9;

/// Relative tolerance for identifying two enumerated matrices.
pub const DEDUP_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self {
            generator: generator as u8,
            inverse,
        }
    }

    /// Position in the alphabet `g0, G0, g1, G1, ...`.
    pub fn index(self) -> usize {
        2 * self.generator as usize + usize::from(self.inverse)
    }

    pub fn inverted(self) -> Self {
        Self {
            inverse: !self.inverse,
            ..self
        }
    }
}

/// Which elements a sampler ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeFilter {
    /// The whole surface group.
    Full,
    /// The kernel of `φ`, i.e. the deck-invariant subgroup of the Z-cover.
    Kernel,
}

impl LatticeFilter {
    fn admits(self, phi: i64) -> bool {
        match self {
            LatticeFilter::Full => true,
            LatticeFilter::Kernel => phi == 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceGroup {
    labels: Vec<String>,
    generators: Vec<GroupElement>,
    letter_matrices: Vec<GroupElement>,
    relator: Vec<Letter>,
    phi_weights: Vec<i64>,
}

/// A word together with its matrix and `φ` value.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupWord {
    pub letters: Vec<Letter>,
    pub matrix: GroupElement,
    pub phi: i64,
}

impl GroupWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn translation_length(&self) -> f64 {
        self.matrix.translation_length()
    }
}

impl SurfaceGroup {
    /// Validates the relator, hyperbolicity of generators and `φ(relator) = 0`.
    pub fn new(labels: Vec<String>, generators: Vec<GroupElement>, relator: Vec<Letter>, phi_weights: Vec<i64>) -> Result<Self> {
        if labels.len() != generators.len() || phi_weights.len() != generators.len() {
            return Err(Error::InvalidGroup(format!(
                "{} labels, {} generators and {} weights",
                labels.len(),
                generators.len(),
                phi_weights.len()
            )));
        }
        if generators.is_empty() || generators.len() > u8::MAX as usize {
            return Err(Error::InvalidGroup("need between 1 and 255 generators".into()));
        }
        for label in &labels {
            let valid = label.chars().next().is_some_and(|c| c.is_ascii_lowercase())
                && label.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit());
            if !valid {
                return Err(Error::InvalidGroup(format!(
                    "label `{label}` must be lowercase alphanumeric starting with a letter"
                )));
            }
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::InvalidGroup(format!("label `{label}` is repeated")));
            }
        }
        if let Some(bad) = relator.iter().find(|l| l.generator as usize >= generators.len()) {
            return Err(Error::InvalidGroup(format!("relator uses unknown generator {}", bad.generator)));
        }
        for (label, g) in labels.iter().zip(&generators) {
            if !g.is_hyperbolic(HYPERBOLIC_MARGIN) {
                return Err(Error::InvalidGroup(format!(
                    "generator {label} has trace {} and is not hyperbolic",
                    g.trace()
                )));
            }
        }
        let letter_matrices = generators
            .iter()
            .flat_map(|g| [*g, g.inverse()])
            .collect();
        let group = Self {
            labels,
            generators,
            letter_matrices,
            relator,
            phi_weights,
        };
        let deviation = group.word_matrix(&group.relator).max_entry_diff(&GroupElement::IDENTITY);
        if deviation > RELATOR_TOLERANCE {
            return Err(Error::InvalidGroup(format!(
                "relator evaluates to a matrix {deviation:e} away from the identity"
            )));
        }
        if group.phi(&group.relator) != 0 {
            return Err(Error::InvalidGroup("φ does not vanish on the relator".into()));
        }
        Ok(group)
    }

    /// Genus-two group of the regular octagon with interior angles `π/4`, side
    /// pairings `a1, b1, a2, b2`, relator `[a1,b1][a2,b2]` and `φ` weights `(1,0,0,0)`.
    pub fn octagon() -> Self {
        Self::octagon_with_phi(vec![1, 0, 0, 0]).expect("octagon side pairings satisfy the relator")
    }

    pub fn octagon_with_phi(phi_weights: Vec<i64>) -> Result<Self> {
        use std::f64::consts::FRAC_PI_4;
        // Pairing of the side at distance r from i with the opposite-rotated side.
        let r = (1.0 + 2f64.sqrt()).acosh();
        let base = GroupElement::geodesic(r)
            * GroupElement::weyl()
            * GroupElement::geodesic(-r)
            * GroupElement::rotation(2.0 * FRAC_PI_4);
        let pairing = |m: i32| {
            let turn = GroupElement::rotation(f64::from(m) * FRAC_PI_4);
            turn * base * turn.inverse()
        };
        let generators = vec![pairing(0).inverse(), pairing(1), pairing(4).inverse(), pairing(5)];
        let labels = ["a1", "b1", "a2", "b2"].map(String::from).to_vec();
        let commutator = |a: usize, b: usize| {
            [
                Letter::new(a, false),
                Letter::new(b, false),
                Letter::new(a, true),
                Letter::new(b, true),
            ]
        };
        let relator = [commutator(0, 1), commutator(2, 3)].concat();
        Self::new(labels, generators, relator, phi_weights)
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relator(&self) -> &[Letter] {
        &self.relator
    }

    pub fn phi_weights(&self) -> &[i64] {
        &self.phi_weights
    }

    /// Letters in alphabet order `g0, G0, g1, G1, ...`.
    pub fn alphabet(&self) -> Vec<Letter> {
        (0..self.generators.len())
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .collect()
    }

    pub fn letter_matrix(&self, letter: Letter) -> GroupElement {
        self.letter_matrices[letter.index()]
    }

    pub fn letter_phi(&self, letter: Letter) -> i64 {
        let w = self.phi_weights[letter.generator as usize];
        if letter.inverse {
            -w
        } else {
            w
        }
    }

    /// Product of letter matrices, folded from the left.
    pub fn word_matrix(&self, letters: &[Letter]) -> GroupElement {
        letters
            .iter()
            .fold(GroupElement::IDENTITY, |m, &l| m * self.letter_matrix(l))
    }

    /// Exponent sum weighted by `φ`.
    pub fn phi(&self, letters: &[Letter]) -> i64 {
        letters.iter().map(|&l| self.letter_phi(l)).sum()
    }

    pub fn word(&self, letters: Vec<Letter>) -> GroupWord {
        GroupWord {
            matrix: self.word_matrix(&letters),
            phi: self.phi(&letters),
            letters,
        }
    }

    pub fn letter_label(&self, letter: Letter) -> String {
        let label = &self.labels[letter.generator as usize];
        if letter.inverse {
            label.to_ascii_uppercase()
        } else {
            label.clone()
        }
    }

    /// Space-separated labels; the empty word is `e`.
    pub fn format_word(&self, letters: &[Letter]) -> String {
        if letters.is_empty() {
            return "e".to_string();
        }
        letters
            .iter()
            .map(|&l| self.letter_label(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse_word(&self, text: &str) -> Result<Vec<Letter>> {
        text.split_whitespace()
            .filter(|t| *t != "e")
            .map(|token| {
                let lower = token.to_ascii_lowercase();
                let generator = self
                    .labels
                    .iter()
                    .position(|l| *l == lower)
                    .ok_or_else(|| Error::InvalidGroup(format!("unknown letter `{token}`")))?;
                let inverse = token != lower;
                if inverse && token != lower.to_ascii_uppercase() {
                    return Err(Error::InvalidGroup(format!("mixed-case letter `{token}`")));
                }
                Ok(Letter::new(generator, inverse))
            })
            .collect()
    }

    /// Number of reduced words of length at most `radius`.
    pub fn reduced_word_count(&self, radius: usize) -> u64 {
        let k = 2 * self.generators.len() as u64;
        let mut total = 1u64;
        let mut layer = k;
        for _ in 0..radius {
            total += layer;
            layer *= k - 1;
        }
        total
    }

    /// Breadth-first enumeration of distinct elements of word length at most
    /// `radius`, one shortlex-least reduced word per matrix.
    pub fn element_table(&self, radius: usize) -> ElementTable {
        let mut nodes = vec![TableNode {
            parent: u32::MAX,
            last: None,
            matrix: GroupElement::IDENTITY,
            phi: 0,
            length: 0,
        }];
        let mut index = BTreeSet::from([(OrderedFloat(1.0), 0u32)]);
        let alphabet = self.alphabet();
        let mut layer_start = 0;
        for length in 1..=radius {
            let layer_end = nodes.len();
            for parent in layer_start..layer_end {
                let (matrix, phi, last) = {
                    let node = &nodes[parent];
                    (node.matrix, node.phi, node.last)
                };
                for &letter in &alphabet {
                    if last == Some(letter.inverted()) {
                        continue;
                    }
                    let product = matrix * self.letter_matrix(letter);
                    if find_duplicate(&index, &nodes, &product).is_some() {
                        continue;
                    }
                    let id = nodes.len() as u32;
                    index.insert((OrderedFloat(product.entries()[0]), id));
                    nodes.push(TableNode {
                        parent: parent as u32,
                        last: Some(letter),
                        matrix: product,
                        phi: phi + self.letter_phi(letter),
                        length: length as u8,
                    });
                }
            }
            layer_start = layer_end;
        }
        ElementTable { nodes, radius }
    }

    /// Distinct elements of word length at most `radius` admitted by `filter`.
    pub fn enumerate_elements(&self, radius: usize, filter: LatticeFilter) -> Vec<GroupWord> {
        let table = self.element_table(radius);
        (0..table.len())
            .filter(|&i| filter.admits(table.phi(i)))
            .map(|i| GroupWord {
                letters: table.letters(i),
                matrix: table.matrix(i),
                phi: table.phi(i),
            })
            .collect()
    }

    /// Depth-first visit of every reduced word of length at most `radius`,
    /// starting with the empty word. The callback receives the word, the
    /// product of `conjugated` letter matrices along it, and `φ`.
    fn walk_words(&self, radius: usize, conjugated: &[GroupElement], visit: &mut impl FnMut(&[Letter], &GroupElement, i64)) {
        #[allow(clippy::too_many_arguments)]
        fn descend(
            group: &SurfaceGroup,
            alphabet: &[Letter],
            conjugated: &[GroupElement],
            radius: usize,
            word: &mut Vec<Letter>,
            matrix: GroupElement,
            phi: i64,
            visit: &mut impl FnMut(&[Letter], &GroupElement, i64),
        ) {
            visit(word, &matrix, phi);
            if word.len() == radius {
                return;
            }
            let last = word.last().copied();
            for &letter in alphabet {
                if last == Some(letter.inverted()) {
                    continue;
                }
                word.push(letter);
                descend(
                    group,
                    alphabet,
                    conjugated,
                    radius,
                    word,
                    matrix * conjugated[letter.index()],
                    phi + group.letter_phi(letter),
                    visit,
                );
                word.pop();
            }
        }
        let alphabet = self.alphabet();
        let mut word = Vec::with_capacity(radius);
        descend(self, &alphabet, conjugated, radius, &mut word, GroupElement::IDENTITY, 0, visit);
    }

    /// `max |φ(γ)| / ℓ(γ)` over hyperbolic reduced words of length at most `radius`.
    pub fn kappa_estimate(&self, radius: usize) -> Result<KappaEstimate> {
        let mut best: Option<(f64, Vec<Letter>)> = None;
        let mut examined = 0u64;
        let letters = self.letter_matrices.clone();
        self.walk_words(radius, &letters, &mut |word, matrix, phi| {
            examined += 1;
            if !matrix.is_hyperbolic(HYPERBOLIC_MARGIN) {
                return;
            }
            let ratio = phi.unsigned_abs() as f64 / matrix.translation_length();
            if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
                best = Some((ratio, word.to_vec()));
            }
        });
        let (kappa, letters) = best.ok_or(Error::NoHyperbolicElement(radius))?;
        Ok(KappaEstimate {
            kappa,
            witness: self.word(letters),
            words_examined: examined,
        })
    }

    /// Defect curve `D(t) = t − min_γ d(a_t x·o, xγ·o)` over reduced words of
    /// length at most `radius` admitted by `filter`; `o = i` is the basepoint.
    pub fn qm_defect(&self, frame: &GroupElement, times: &[f64], radius: usize, filter: LatticeFilter) -> Result<DefectCurve> {
        if let Some(t) = times.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return Err(Error::InvalidArgument(format!("time {t} must be nonnegative")));
        }
        // d(a_t x·o, xγ·o) = d(o, a_t m·o) with m = x γ⁻¹ x⁻¹, and the ball is
        // closed under inversion, so m ranges over x γ x⁻¹. With P, Q the squared
        // row norms of m, cosh d = (e^t P + e^{−t} Q) / 2.
        let inverse = frame.inverse();
        let conjugated: Vec<GroupElement> = self
            .letter_matrices
            .iter()
            .map(|g| *frame * *g * inverse)
            .collect();
        let growth: Vec<f64> = times.iter().map(|t| t.exp()).collect();
        let mut best: Vec<f64> = times.iter().map(|t| t.cosh()).collect();
        let mut best_length = vec![0usize; times.len()];
        let mut p_limit = limit(&best, &growth, false);
        let mut q_limit = limit(&best, &growth, true);
        self.walk_words(radius, &conjugated, &mut |word, m, phi| {
            if word.is_empty() || !filter.admits(phi) {
                return;
            }
            let [a, b, c, d] = m.entries();
            let p = a * a + b * b;
            let q = c * c + d * d;
            if p >= p_limit || q >= q_limit {
                return;
            }
            let mut improved = false;
            for k in 0..times.len() {
                let cosh = 0.5 * (growth[k] * p + q / growth[k]);
                if cosh < best[k] {
                    best[k] = cosh;
                    best_length[k] = word.len();
                    improved = true;
                }
            }
            if improved {
                p_limit = limit(&best, &growth, false);
                q_limit = limit(&best, &growth, true);
            }
        });
        let points = times
            .iter()
            .zip(best.iter().zip(&best_length))
            .map(|(&t, (&cosh, &length))| DefectPoint {
                t,
                defect: t - cosh.max(1.0).acosh(),
                witness_length: length,
                radius_limited: radius > 0 && length == radius,
            })
            .collect();
        Ok(DefectCurve { points, radius })
    }

    /// A-parameters of `h γ h⁻¹` for `γ ≠ e` in the kernel of `φ` with word length at most `radius`.
    pub fn delta_spectrum(&self, basepoint: &GroupElement, radius: usize) -> DeltaSpectrum {
        let table = self.element_table(radius);
        let inverse = basepoint.inverse();
        let mut entries = Vec::new();
        let mut omega_count = 0;
        for i in 1..table.len() {
            if table.phi(i) != 0 {
                continue;
            }
            let conjugate = *basepoint * table.matrix(i) * inverse;
            let factors = BruhatFactors::decompose(&conjugate);
            match factors {
                BruhatFactors::BigCell { t, .. } => entries.push(DeltaEntry {
                    r: t,
                    letters: table.letters(i),
                    phi: 0,
                    factors,
                }),
                BruhatFactors::OmegaCell => omega_count += 1,
            }
        }
        entries.sort_by(|x, y| x.r.total_cmp(&y.r));
        DeltaSpectrum {
            entries,
            omega_count,
            basepoint: *basepoint,
            radius,
        }
    }

    /// Minimizes the frame distance between `a_t x` and `a_t y γ` over `t` in
    /// `times` and enumerated `γ`, and reports the A-parameter of the
    /// discrepancy `h = a_t x (a_t y γ)⁻¹` at the minimum.
    pub fn proximality_scan(&self, x: &GroupElement, y: &GroupElement, times: &[f64], radius: usize) -> Result<ProximityScan> {
        if times.is_empty() {
            return Err(Error::InvalidArgument("time grid is empty".into()));
        }
        let table = self.element_table(radius);
        let mut per_time = Vec::with_capacity(times.len());
        let mut omega_samples = 0usize;
        let mut best: Option<(f64, f64, usize, GroupElement)> = None;
        for &t in times {
            let flowed_x = GroupElement::geodesic(t) * *x;
            let flowed_y = GroupElement::geodesic(t) * *y;
            let mut best_here = f64::INFINITY;
            for i in 0..table.len() {
                let other = flowed_y * table.matrix(i);
                let discrepancy = flowed_x * other.inverse();
                if !BruhatFactors::decompose(&discrepancy).is_big_cell() {
                    omega_samples += 1;
                    continue;
                }
                let distance = flowed_x.frame_distance(&other);
                best_here = best_here.min(distance);
                if best.as_ref().is_none_or(|b| distance < b.0) {
                    best = Some((distance, t, i, discrepancy));
                }
            }
            per_time.push((t, best_here));
        }
        let (distance, t, i, discrepancy) = best.ok_or_else(|| Error::InvalidArgument("every sample fell in the ω-cell".into()))?;
        Ok(ProximityScan {
            inf_distance: distance,
            time: t,
            witness: GroupWord {
                letters: table.letters(i),
                matrix: table.matrix(i),
                phi: table.phi(i),
            },
            ell: BruhatFactors::decompose(&discrepancy).delta(),
            omega_samples,
            per_time,
        })
    }

    /// `generator <label> a b c d` lines, then `relator ...` and `phi ...`.
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        for (label, g) in self.labels.iter().zip(&self.generators) {
            let [a, b, c, d] = g.entries();
            out.push_str(&format!("generator {label} {a:.16e} {b:.16e} {c:.16e} {d:.16e}\n"));
        }
        out.push_str(&format!("relator {}\n", self.format_word(&self.relator)));
        let weights: Vec<String> = self.phi_weights.iter().map(ToString::to_string).collect();
        out.push_str(&format!("phi {}\n", weights.join(" ")));
        out
    }

    pub fn parse_record(text: &str) -> Result<Self> {
        let mut labels = Vec::new();
        let mut generators = Vec::new();
        let mut relator_text = None;
        let mut phi = None;
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let tokens: Vec<&str> = raw.split_whitespace().collect();
            match tokens.first().copied() {
                None => {}
                Some(t) if t.starts_with('#') => {}
                Some("generator") => {
                    if tokens.len() != 6 {
                        return Err(Error::parse(line, "generator", "expected a label and four entries"));
                    }
                    let entries = tokens[2..]
                        .iter()
                        .map(|t| t.parse::<f64>().map_err(|_| Error::parse(line, "generator", format!("bad entry `{t}`"))))
                        .collect::<Result<Vec<f64>>>()?;
                    let g = GroupElement::from_unimodular(entries[0], entries[1], entries[2], entries[3])
                        .map_err(|e| Error::parse(line, "generator", e.to_string()))?;
                    labels.push(tokens[1].to_string());
                    generators.push(g);
                }
                Some("relator") => relator_text = Some((line, tokens[1..].join(" "))),
                Some("phi") => {
                    phi = Some(
                        tokens[1..]
                            .iter()
                            .map(|t| t.parse::<i64>().map_err(|_| Error::parse(line, "phi", format!("bad weight `{t}`"))))
                            .collect::<Result<Vec<i64>>>()?,
                    );
                }
                Some(other) => return Err(Error::parse(line, "record", format!("unknown record `{other}`"))),
            }
        }
        let (relator_line, relator_text) = relator_text.ok_or_else(|| Error::parse(0, "relator", "missing relator"))?;
        let phi = phi.unwrap_or_else(|| vec![0; generators.len()]);
        // Parse the relator against the labels read so far.
        let probe = ProbeLabels(&labels);
        let relator = probe
            .parse(&relator_text)
            .map_err(|m| Error::parse(relator_line, "relator", m))?;
        Self::new(labels, generators, relator, phi)
    }
}

struct ProbeLabels<'a>(&'a [String]);

impl ProbeLabels<'_> {
    fn parse(&self, text: &str) -> std::result::Result<Vec<Letter>, String> {
        text.split_whitespace()
            .map(|token| {
                let lower = token.to_ascii_lowercase();
                let generator = self
                    .0
                    .iter()
                    .position(|l| *l == lower)
                    .ok_or_else(|| format!("unknown letter `{token}`"))?;
                Ok(Letter::new(generator, token != lower))
            })
            .collect()
    }
}

impl fmt::Display for SurfaceGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_record())
    }
}

// Largest P (or Q) that could still beat the current best at some time.
fn limit(best: &[f64], growth: &[f64], lower_row: bool) -> f64 {
    best.iter()
        .zip(growth)
        .map(|(&b, &g)| if lower_row { 2.0 * b * g } else { 2.0 * b / g })
        .fold(0.0, f64::max)
}

fn find_duplicate(index: &BTreeSet<(OrderedFloat<f64>, u32)>, nodes: &[TableNode], candidate: &GroupElement) -> Option<u32> {
    let tol = DEDUP_TOLERANCE * candidate.max_abs_entry().max(1.0);
    let a = candidate.entries()[0];
    index
        .range((OrderedFloat(a - tol), 0)..=(OrderedFloat(a + tol), u32::MAX))
        .map(|&(_, id)| id)
        .find(|&id| nodes[id as usize].matrix.max_entry_diff(candidate) <= tol)
}

#[derive(Clone, Debug)]
struct TableNode {
    parent: u32,
    last: Option<Letter>,
    matrix: GroupElement,
    phi: i64,
    length: u8,
}

/// Distinct elements of a word-length ball, stored as a prefix tree.
#[derive(Clone, Debug)]
pub struct ElementTable {
    nodes: Vec<TableNode>,
    radius: usize,
}

impl ElementTable {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn matrix(&self, i: usize) -> GroupElement {
        self.nodes[i].matrix
    }

    pub fn phi(&self, i: usize) -> i64 {
        self.nodes[i].phi
    }

    pub fn word_length(&self, i: usize) -> usize {
        self.nodes[i].length as usize
    }

    pub fn letters(&self, i: usize) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.nodes[i].length as usize);
        let mut cursor = i;
        while let Some(letter) = self.nodes[cursor].last {
            out.push(letter);
            cursor = self.nodes[cursor].parent as usize;
        }
        out.reverse();
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KappaEstimate {
    pub kappa: f64,
    pub witness: GroupWord,
    pub words_examined: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DefectPoint {
    pub t: f64,
    pub defect: f64,
    /// Word length of the minimizing element (0 for the identity).
    pub witness_length: usize,
    /// The minimizer sits on the boundary of the enumerated ball.
    pub radius_limited: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DefectCurve {
    pub points: Vec<DefectPoint>,
    pub radius: usize,
}

impl DefectCurve {
    pub fn sup(&self) -> f64 {
        self.points.iter().map(|p| p.defect).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn any_radius_limited(&self) -> bool {
        self.points.iter().any(|p| p.radius_limited)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaEntry {
    pub r: f64,
    pub letters: Vec<Letter>,
    pub phi: i64,
    pub factors: BruhatFactors,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaSpectrum {
    /// Sorted by `r`; ties keep enumeration order.
    pub entries: Vec<DeltaEntry>,
    pub omega_count: usize,
    pub basepoint: GroupElement,
    pub radius: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProximityScan {
    pub inf_distance: f64,
    pub time: f64,
    pub witness: GroupWord,
    /// A-parameter of the discrepancy at the minimizing sample.
    pub ell: f64,
    pub omega_samples: usize,
    /// Smallest distance found at each time.
    pub per_time: Vec<(f64, f64)>,
}
