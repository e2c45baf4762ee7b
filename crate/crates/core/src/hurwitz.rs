//! Ramification profiles of covers `P¹ → P¹` and the dimension of the
//! corresponding genus-0 Hurwitz spaces.
//!
//! A profile lists, for each of `m` marked target points, the ramification
//! indices of the fiber over it as a partition of the degree `d`. Target
//! positions never enter the dimension, so points carry labels only.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permgroup::{self, CycleType, MonodromyWitness, SearchBudget, SearchError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HurwitzError {
    #[error("a profile needs at least two marked points, got {0}")]
    TooFewPoints(usize),
    #[error("point {label:?} has parts summing to {sum}, expected degree {degree}")]
    DegreeMismatch {
        label: String,
        sum: usize,
        degree: usize,
    },
    #[error("point {label:?} has an empty partition")]
    EmptyPartition { label: String },
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("no point with index {0}")]
    NoSuchPoint(usize),
    #[error("point {point} has no part with index {part}")]
    NoSuchPart { point: usize, part: usize },
    #[error("cannot split a part of size {part} into {k} and {rest}", rest = *part as i64 - *k as i64)]
    InvalidSplit { part: usize, k: usize },
    #[error("residues at point {label:?} cannot complete to degree {degree} modulo {modulus}")]
    InfeasibleResidues {
        label: String,
        degree: usize,
        modulus: usize,
    },
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// One marked target point with the ramification indices above it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedPoint {
    pub label: String,
    pub parts: CycleType,
}

impl MarkedPoint {
    pub fn new(label: impl Into<String>, parts: CycleType) -> Self {
        Self {
            label: label.into(),
            parts,
        }
    }
}

/// Ramification data of a degree-`d` cover over `m ≥ 2` marked points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationProfile {
    d: usize,
    points: Vec<MarkedPoint>,
}

#[derive(Deserialize)]
struct RawProfile {
    d: usize,
    points: Vec<MarkedPoint>,
}

impl<'de> Deserialize<'de> for RamificationProfile {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawProfile::deserialize(deserializer)?;
        RamificationProfile::new(raw.d, raw.points).map_err(serde::de::Error::custom)
    }
}

impl RamificationProfile {
    pub fn new(d: usize, points: Vec<MarkedPoint>) -> Result<Self, HurwitzError> {
        if points.len() < 2 {
            return Err(HurwitzError::TooFewPoints(points.len()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.parts.is_empty() {
                return Err(HurwitzError::EmptyPartition {
                    label: p.label.clone(),
                });
            }
            if p.parts.degree() != d {
                return Err(HurwitzError::DegreeMismatch {
                    label: p.label.clone(),
                    sum: p.parts.degree(),
                    degree: d,
                });
            }
            if points[..i].iter().any(|q| q.label == p.label) {
                return Err(HurwitzError::DuplicateLabel(p.label.clone()));
            }
        }
        Ok(Self { d, points })
    }

    /// Builds a profile with labels `"P1"`, `"P2"`, ….
    pub fn unlabeled(d: usize, partitions: Vec<CycleType>) -> Result<Self, HurwitzError> {
        let points = partitions
            .into_iter()
            .enumerate()
            .map(|(i, parts)| MarkedPoint::new(format!("P{}", i + 1), parts))
            .collect();
        Self::new(d, points)
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[MarkedPoint] {
        &self.points
    }

    pub fn partitions(&self) -> Vec<CycleType> {
        self.points.iter().map(|p| p.parts.clone()).collect()
    }

    /// Number of marked points `m`.
    pub fn marked(&self) -> usize {
        self.points.len()
    }

    /// Total number of parts `q` over all marked points.
    pub fn total_parts(&self) -> usize {
        self.points.iter().map(|p| p.parts.len()).sum()
    }

    fn fresh_label(&self) -> String {
        (self.points.len() + 1..)
            .map(|i| format!("P{i}"))
            .find(|l| self.points.iter().all(|p| &p.label != l))
            .expect("unbounded label supply")
    }
}

impl fmt::Display for RamificationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}", self.d)?;
        for p in &self.points {
            write!(f, " {}:{}", p.label, p.parts)?;
        }
        Ok(())
    }
}

/// `q - (m-2)d - 2`. A negative value means no genus-0 cover exists.
pub fn predicted_dimension(profile: &RamificationProfile) -> i64 {
    profile.total_parts() as i64 - (profile.marked() as i64 - 2) * profile.d as i64 - 2
}

/// Extends the profile by `predicted_dimension` simple branch points, giving
/// the data of a cover that is unramified outside the listed points.
pub fn with_simple_branching(profile: &RamificationProfile) -> Option<RamificationProfile> {
    let b = predicted_dimension(profile);
    if b < 0 {
        return None;
    }
    let mut out = profile.clone();
    if profile.d < 2 {
        return (b == 0).then_some(out);
    }
    for _ in 0..b {
        let label = out.fresh_label();
        out.points
            .push(MarkedPoint::new(label, CycleType::transposition(profile.d)));
    }
    Some(out)
}

/// Whether a genus-0 cover exists with exactly these indices over the marked
/// points and simple ramification elsewhere.
pub fn realizable(
    profile: &RamificationProfile,
    budget: &SearchBudget,
) -> Result<bool, HurwitzError> {
    Ok(realizing_witness(profile, budget)?.is_some())
}

/// The monodromy tuple behind [`realizable`]: one entry per marked point,
/// followed by the appended simple branch points.
pub fn realizing_witness(
    profile: &RamificationProfile,
    budget: &SearchBudget,
) -> Result<Option<MonodromyWitness>, HurwitzError> {
    let Some(full) = with_simple_branching(profile) else {
        return Ok(None);
    };
    Ok(permgroup::monodromy_search(
        full.d,
        &full.partitions(),
        budget,
    )?)
}

/// Existence verdict that keeps "not decided within budget" separate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Existence {
    Yes,
    No,
    Unverified,
}

impl fmt::Display for Existence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Existence::Yes => "yes",
            Existence::No => "no",
            Existence::Unverified => "unverified",
        })
    }
}

/// Runs [`realizable`], turning budget exhaustion into [`Existence::Unverified`].
pub fn existence(
    profile: &RamificationProfile,
    budget: &SearchBudget,
) -> Result<Existence, HurwitzError> {
    match realizable(profile, budget) {
        Ok(true) => Ok(Existence::Yes),
        Ok(false) => Ok(Existence::No),
        Err(HurwitzError::Search(e)) if e.is_budget() => Ok(Existence::Unverified),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HurwitzReport {
    pub profile: RamificationProfile,
    pub q: usize,
    pub m: usize,
    pub predicted_dimension: i64,
    pub existence: Existence,
    /// Cycle notation of the realizing tuple, when one was found.
    pub witness: Option<Vec<String>>,
}

/// Formula value together with the existence verdict. When existence cannot
/// be decided the dimension is reported with `existence = unverified`.
pub fn hurwitz_report(
    profile: &RamificationProfile,
    budget: &SearchBudget,
) -> Result<HurwitzReport, HurwitzError> {
    let predicted = predicted_dimension(profile);
    let (existence, witness) = match realizing_witness(profile, budget) {
        Ok(Some(w)) => (Existence::Yes, Some(w.to_cycle_strings())),
        Ok(None) => (Existence::No, None),
        Err(HurwitzError::Search(e)) if e.is_budget() => (Existence::Unverified, None),
        Err(e) => return Err(e),
    };
    Ok(HurwitzReport {
        profile: profile.clone(),
        q: profile.total_parts(),
        m: profile.marked(),
        predicted_dimension: predicted,
        existence,
        witness,
    })
}

/// Replaces part `part` (index into the descending partition) at point
/// `point` by `k` and `e - k`, and appends a new simple branch point.
pub fn split_ramification(
    profile: &RamificationProfile,
    point: usize,
    part: usize,
    k: usize,
) -> Result<RamificationProfile, HurwitzError> {
    let target = profile
        .points
        .get(point)
        .ok_or(HurwitzError::NoSuchPoint(point))?;
    let e = *target
        .parts
        .parts()
        .get(part)
        .ok_or(HurwitzError::NoSuchPart { point, part })?;
    if e <= 1 || k == 0 || k >= e {
        return Err(HurwitzError::InvalidSplit { part: e, k });
    }
    let mut parts = target.parts.parts().to_vec();
    parts[part] = k;
    parts.push(e - k);
    let mut out = profile.clone();
    out.points[point].parts = CycleType::new(parts).expect("positive parts");
    let label = out.fresh_label();
    out.points
        .push(MarkedPoint::new(label, CycleType::transposition(profile.d)));
    Ok(out)
}

/// Residues of the ramification indices above one point, modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueConstraint {
    pub label: String,
    /// Prescribed small indices `1 ≤ a < modulus`.
    pub residues: Vec<usize>,
    pub modulus: usize,
}

impl ResidueConstraint {
    pub fn new(label: impl Into<String>, residues: Vec<usize>, modulus: usize) -> Self {
        Self {
            label: label.into(),
            residues,
            modulus,
        }
    }
}

/// The profile with the smallest indices compatible with the residues: the
/// prescribed residues themselves, padded with parts equal to the modulus.
/// Among all profiles with these residues its Hurwitz space is the largest.
pub fn minimal_profile_mod_n(
    d: usize,
    constraints: &[ResidueConstraint],
) -> Result<RamificationProfile, HurwitzError> {
    let mut points = Vec::with_capacity(constraints.len());
    for c in constraints {
        let infeasible = || HurwitzError::InfeasibleResidues {
            label: c.label.clone(),
            degree: d,
            modulus: c.modulus,
        };
        if c.modulus == 0 || c.residues.contains(&0) {
            return Err(infeasible());
        }
        let used: usize = c.residues.iter().sum();
        if used > d || (d - used) % c.modulus != 0 {
            return Err(infeasible());
        }
        let mut parts = c.residues.clone();
        parts.extend(std::iter::repeat_n(c.modulus, (d - used) / c.modulus));
        if parts.is_empty() {
            return Err(infeasible());
        }
        points.push(MarkedPoint::new(
            c.label.clone(),
            CycleType::new(parts).map_err(|_| infeasible())?,
        ));
    }
    RamificationProfile::new(d, points)
}

/// The minimal double-cover profile used for genus-`g` hyperelliptic curves
/// mapping to a fixed elliptic curve: four points, `2g+2` odd indices in
/// total, at the smallest feasible degree.
pub fn hyperelliptic_profile(g: usize, min_degree: usize) -> RamificationProfile {
    let odd = 2 * g + 2;
    for d in min_degree.max(1).. {
        // per-point counts of odd indices: each at most d and congruent to d mod 2
        let fits = |x: usize| x <= d && x % 2 == d % 2;
        let mut counts = None;
        'search: for a in (0..=odd).rev().filter(|&a| fits(a)) {
            for b in (0..=a.min(odd - a)).rev().filter(|&b| fits(b)) {
                for c in (0..=b.min(odd - a - b)).rev().filter(|&c| fits(c)) {
                    let e = odd - a - b - c;
                    if e <= c && fits(e) {
                        counts = Some([a, b, c, e]);
                        break 'search;
                    }
                }
            }
        }
        if let Some(counts) = counts {
            let constraints: Vec<ResidueConstraint> = ["0", "1", "lambda", "inf"]
                .iter()
                .zip(counts)
                .map(|(label, n)| ResidueConstraint::new(*label, vec![1; n], 2))
                .collect();
            return minimal_profile_mod_n(d, &constraints).expect("counts chosen feasible");
        }
    }
    unreachable!("some degree is always feasible")
}

/// Dimension of the locus of genus-`g` hyperelliptic curves admitting a
/// non-constant map to a fixed elliptic curve, evaluated from the minimal
/// mod-2 Hurwitz profile.
pub fn hyperelliptic_cover_locus_dim(g: usize) -> i64 {
    assert!(g >= 1, "genus must be positive");
    let profile = hyperelliptic_profile(g, 1);
    let value = predicted_dimension(&profile);
    let shifted = hyperelliptic_profile(g, profile.degree() + 2);
    debug_assert_eq!(predicted_dimension(&shifted), value);
    value
}
