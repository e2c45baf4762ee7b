//! Dimensions of loci of elliptic surfaces with prescribed singular fibers.
//!
//! For a configuration with non-constant `j`, the `j`-map `P¹ → P¹` is
//! constrained over `0`, `1728` and `∞`; the locus dimension is the Hurwitz
//! dimension of the minimal such profile plus the twisting freedom.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::hurwitz::{
    self, Existence, HurwitzError, MarkedPoint, RamificationProfile, ResidueConstraint,
};
use crate::kodaira::{
    self, Configuration, EnumerateOptions, Fiber, FiberType, KodairaError,
};
use crate::permgroup::{CycleType, SearchBudget};
use crate::table::Table;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LociError {
    #[error(transparent)]
    Kodaira(#[from] KodairaError),
    #[error("configuration {0} has constant j-invariant")]
    ConstantJ(Configuration),
    #[error("r = {r} is outside [2, {max}] for n = {n}")]
    RankOutOfRange { n: u64, r: u64, max: u64 },
    #[error("n = {0} is too small, need n >= 2")]
    DegreeTooSmall(u64),
    #[error("base change of additive fiber {0} is not supported")]
    AdditiveFiber(FiberType),
    #[error("ramified slot {fiber} is not available in the configuration")]
    MissingSlot { fiber: FiberType },
    #[error("base change degree must be positive")]
    ZeroDegree,
    #[error(transparent)]
    Hurwitz(#[from] HurwitzError),
}

pub const LABEL_ZERO: &str = "0";
pub const LABEL_1728: &str = "1728";
pub const LABEL_INFINITY: &str = "inf";

/// Ramification data the `j`-map of a configuration must have.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JMapRequirement {
    pub d: usize,
    /// Minimal profile over `0`, `1728`, `inf` in that order.
    pub profile: RamificationProfile,
    /// Points over 0 with index ≡ 1 mod 3 (`ii + iv*`).
    pub zero_residue_one: usize,
    /// Points over 0 with index ≡ 2 mod 3 (`iv + ii*`).
    pub zero_residue_two: usize,
    /// Points over 1728 with odd index (`iii + iii*`).
    pub odd_over_1728: usize,
    /// Exact indices over infinity.
    pub poles: CycleType,
}

fn count(c: &Configuration, types: &[FiberType]) -> usize {
    types.iter().map(|&t| c.count(t) as usize).sum()
}

pub fn jmap_requirement(c: &Configuration) -> Result<JMapRequirement, LociError> {
    kodaira::noether_check(c)?;
    let poles: Vec<usize> = c
        .fibers()
        .filter_map(|t| match t {
            FiberType::I(nu) | FiberType::IStar(nu) if nu > 0 => Some(nu as usize),
            _ => None,
        })
        .collect();
    if poles.is_empty() {
        return Err(LociError::ConstantJ(c.clone()));
    }
    let d: usize = poles.iter().sum();
    use FiberType::*;
    let zero_residue_one = count(c, &[II, IVStar]);
    let zero_residue_two = count(c, &[IV, IIStar]);
    let odd_over_1728 = count(c, &[III, IIIStar]);

    let mut zero = vec![1; zero_residue_one];
    zero.extend(std::iter::repeat_n(2, zero_residue_two));
    let base = hurwitz::minimal_profile_mod_n(
        d,
        &[
            ResidueConstraint::new(LABEL_ZERO, zero, 3),
            ResidueConstraint::new(LABEL_1728, vec![1; odd_over_1728], 2),
        ],
    )?;
    let poles = CycleType::new(poles).expect("positive parts");
    let mut points = base.points().to_vec();
    points.push(MarkedPoint::new(LABEL_INFINITY, poles.clone()));
    let profile = RamificationProfile::new(d, points)?;
    Ok(JMapRequirement {
        d,
        profile,
        zero_residue_one,
        zero_residue_two,
        odd_over_1728,
        poles,
    })
}

/// Where a point of the base maps under `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JClass {
    Zero,
    #[serde(rename = "1728")]
    J1728,
    Generic,
    Pole,
}

/// The fiber over a point with `j`-class `jclass` and ramification index `e`.
pub fn fiber_from_jdata(jclass: JClass, e: u32, twisted: bool) -> Fiber {
    let untwisted = match jclass {
        JClass::Pole => Fiber::Singular(FiberType::I(e)),
        JClass::Zero => match e % 3 {
            0 => Fiber::Smooth,
            1 => Fiber::Singular(FiberType::II),
            _ => Fiber::Singular(FiberType::IV),
        },
        JClass::J1728 if e % 2 == 1 => Fiber::Singular(FiberType::III),
        JClass::J1728 | JClass::Generic => Fiber::Smooth,
    };
    if twisted {
        untwisted.twist()
    } else {
        untwisted
    }
}

impl JMapRequirement {
    /// Rebuilds a configuration from the requirement. `twist` is asked once
    /// per ramification point over 0, 1728 and infinity, in profile order.
    pub fn configuration(&self, mut twist: impl FnMut(JClass, u32) -> bool) -> Configuration {
        let mut c = Configuration::new();
        for point in self.profile.points() {
            let class = match point.label.as_str() {
                LABEL_ZERO => JClass::Zero,
                LABEL_1728 => JClass::J1728,
                _ => JClass::Pole,
            };
            for &e in point.parts.parts() {
                let e = e as u32;
                c.add_fiber(fiber_from_jdata(class, e, twist(class, e)), 1);
            }
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocusReport {
    pub config: Configuration,
    pub n: u64,
    pub dim: i64,
    pub rho_tr: u64,
    pub realizable: Existence,
}

impl LocusReport {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["config", "n", "dim", "rho_tr", "realizable"]);
        t.row([
            self.config.to_string(),
            self.n.to_string(),
            self.dim.to_string(),
            self.rho_tr.to_string(),
            self.realizable.to_string(),
        ]);
        t
    }
}

/// `#singular + #starred - 2n - 2`, with `I0*` counted as starred.
pub fn dim_by_fiber_counts(c: &Configuration, n: u64) -> i64 {
    c.singular_fibers() as i64 + c.count_where(FiberType::is_starred) as i64 - 2 * n as i64 - 2
}

/// `10n - rho_tr - #{II, III, IV}`.
pub fn dim_by_trivial_rank(c: &Configuration, n: u64) -> i64 {
    let unstarred_additive = count(c, &[FiberType::II, FiberType::III, FiberType::IV]);
    10 * n as i64 - kodaira::rho_tr(c) as i64 - unstarred_additive as i64
}

/// Dimension of the locus of surfaces with configuration `c`, assuming one exists.
pub fn locus_dimension(c: &Configuration) -> Result<i64, LociError> {
    let n = kodaira::noether_check(c)?;
    if !c.has_nonconstant_j() {
        return Err(LociError::ConstantJ(c.clone()));
    }
    let dim = dim_by_fiber_counts(c, n);
    assert_eq!(dim, dim_by_trivial_rank(c, n), "dimension formulas disagree for {c}");
    Ok(dim)
}

/// Whether a surface with configuration `c` exists, decided by searching for
/// a `j`-map with the minimal admissible profile.
pub fn realizability(c: &Configuration, budget: &SearchBudget) -> Result<Existence, LociError> {
    let req = match jmap_requirement(c) {
        Ok(req) => req,
        Err(LociError::Hurwitz(HurwitzError::InfeasibleResidues { .. })) => {
            return Ok(Existence::No)
        }
        Err(e) => return Err(e),
    };
    Ok(hurwitz::existence(&req.profile, budget)?)
}

pub fn locus_dim(c: &Configuration, budget: &SearchBudget) -> Result<LocusReport, LociError> {
    let dim = locus_dimension(c)?;
    Ok(LocusReport {
        config: c.clone(),
        n: kodaira::noether_check(c)?,
        dim,
        rho_tr: kodaira::rho_tr(c),
        realizable: realizability(c, budget)?,
    })
}

/// The configuration `I(12n-k+1) + (k-1)·I1` with `k = 12n + 2 - r` fibers.
pub fn nl_witness_config(n: u64, r: u64) -> Result<Configuration, LociError> {
    if n < 2 {
        return Err(LociError::DegreeTooSmall(n));
    }
    if !(2..=10 * n).contains(&r) {
        return Err(LociError::RankOutOfRange { n, r, max: 10 * n });
    }
    let k = 12 * n + 2 - r;
    let big = u32::try_from(12 * n - k + 1).expect("fits");
    let ones = u32::try_from(k - 1).expect("fits");
    Ok(Configuration::from_entries([
        (FiberType::I(big), 1),
        (FiberType::I(1), ones),
    ])?)
}

/// A configuration with trivial rank exactly `r` and no `II, III, IV` fibers,
/// with its locus report.
pub fn nl_lower_bound_witness(
    n: u64,
    r: u64,
    budget: &SearchBudget,
) -> Result<LocusReport, LociError> {
    locus_dim(&nl_witness_config(n, r)?, budget)
}

/// Cyclic base change of degree `deg` totally ramified at two fibers.
pub fn cyclic_base_change_config(
    c: &Configuration,
    deg: u32,
    ramified: [FiberType; 2],
) -> Result<Configuration, LociError> {
    if deg == 0 {
        return Err(LociError::ZeroDegree);
    }
    if let Some(t) = c.entries().map(|(t, _)| t).find(|t| t.is_additive()) {
        return Err(LociError::AdditiveFiber(t));
    }
    let mut rest = c.clone();
    let mut out = Configuration::new();
    for t in ramified {
        let FiberType::I(nu) = t else {
            return Err(LociError::AdditiveFiber(t));
        };
        if rest.count(t) == 0 {
            return Err(LociError::MissingSlot { fiber: t });
        }
        let mut without = Configuration::new();
        for (u, k) in rest.entries() {
            without.add(u, if u == t { k - 1 } else { k })?;
        }
        rest = without;
        out.add(FiberType::I(nu * deg), 1)?;
    }
    for (t, k) in rest.entries() {
        out.add(t, k * deg)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstantJRow {
    pub k: u64,
    pub dim: i64,
    pub rho_tr: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankRow {
    /// Lower bound `2r` on the trivial rank.
    pub r: u64,
    /// Number of singular fibers on the extremal stratum.
    pub k: u64,
    pub dim: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialLociReport {
    pub n: u64,
    pub p_g: u64,
    /// All `2n` fibers of type `I0*`, general `j`.
    pub constant_j_dim: i64,
    pub constant_j_rho_tr: u64,
    /// Mordell-Weil rank at least 1.
    pub l1_dim: i64,
    /// Mordell-Weil rank at least 2: one of these two values.
    pub l2_dims: [i64; 2],
    pub j_zero: Vec<ConstantJRow>,
    pub j_1728: Vec<ConstantJRow>,
    /// `j = 0` and trivial rank at least `2r`.
    pub j_zero_rank: Vec<RankRow>,
    /// `j = 1728` and trivial rank at least `2r`.
    pub j_1728_rank: Vec<RankRow>,
    /// Dimension of the locus with Picard number `10n`, where known.
    pub nl_max_dim: Option<i64>,
    pub excess_r: u64,
    pub excess: i64,
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Surfaces with `j` constant 0 (`max_mult = 5`, `deg = 6n`) or 1728
/// (`max_mult = 3`, `deg = 4n`): `k` distinct zeros of a form of degree `deg`
/// with every multiplicity at most `max_mult`.
fn constant_j_rows(n: u64, deg: u64, max_mult: u64) -> Vec<ConstantJRow> {
    (ceil_div(deg, max_mult)..=deg)
        .map(|k| ConstantJRow {
            k,
            dim: k as i64 - 3,
            rho_tr: 2 + 12 * n - 2 * k,
        })
        .collect()
}

/// Rank rows from `rho_tr = 2 + 12n - 2k >= 2r`, i.e. `k <= 6n - r + 1`.
fn rank_rows(n: u64, rows: &[ConstantJRow]) -> Vec<RankRow> {
    let mut out: Vec<RankRow> = rows
        .iter()
        .filter(|row| row.k >= 1 && 6 * n + 1 >= row.k)
        .map(|row| RankRow {
            r: 6 * n + 1 - row.k,
            k: row.k,
            dim: row.dim,
        })
        .filter(|row| row.r >= 1)
        .collect();
    out.sort_by_key(|row| row.r);
    out
}

/// Largest `r` with `r <= 1 + 24n/5`.
pub fn j_zero_rank_bound(n: u64) -> u64 {
    let bound = Ratio::from_integer(1) + Ratio::new(24 * n, 5);
    bound.floor().to_integer()
}

pub fn special_loci_report(n: u64) -> Result<SpecialLociReport, LociError> {
    if n < 2 {
        return Err(LociError::DegreeTooSmall(n));
    }
    let p_g = n - 1;
    let ni = n as i64;
    let j_zero = constant_j_rows(n, 6 * n, 5);
    let j_1728 = constant_j_rows(n, 4 * n, 3);
    let j_zero_rank = rank_rows(n, &j_zero);
    let j_1728_rank = rank_rows(n, &j_1728);
    debug_assert!(j_zero_rank
        .iter()
        .all(|row| Ratio::from_integer(row.r) <= Ratio::from_integer(1) + Ratio::new(24 * n, 5)));
    debug_assert_eq!(
        j_zero_rank.last().map(|row| row.r),
        Some(j_zero_rank_bound(n))
    );

    let dim_at = |r: u64| {
        j_zero_rank
            .iter()
            .find(|row| row.r == r)
            .map(|row| row.dim)
    };
    // Picard number 10n needs rho_tr = 10n, i.e. r = 5n with constant j = 0.
    let nl_max_dim = dim_at(5 * n);
    let excess_r = 1 + 4 * n + 4 * n / 5;
    let excess_dim = dim_at(excess_r).expect("r is within the admissible range");
    let excess = excess_dim + 2 * excess_r as i64 - 10 * ni;

    let i0 = Configuration::from_entries([(FiberType::IStar(0), 2 * n as u32)])?;
    Ok(SpecialLociReport {
        n,
        p_g,
        constant_j_dim: dim_by_fiber_counts(&i0, n),
        constant_j_rho_tr: kodaira::rho_tr(&i0),
        l1_dim: p_g as i64,
        l2_dims: [p_g as i64, p_g as i64 - 1],
        j_zero,
        j_1728,
        j_zero_rank,
        j_1728_rank,
        nl_max_dim,
        excess_r,
        excess,
    })
}

impl SpecialLociReport {
    pub fn to_table(&self) -> String {
        let mut summary = Table::new(["locus", "dim", "rho_tr"]);
        summary
            .row([
                format!("{}*I0*", 2 * self.n),
                self.constant_j_dim.to_string(),
                self.constant_j_rho_tr.to_string(),
            ])
            .row(["L1".into(), self.l1_dim.to_string(), String::new()])
            .row([
                "L2".into(),
                format!("{} or {}", self.l2_dims[0], self.l2_dims[1]),
                String::new(),
            ])
            .row([
                format!("NL_{}", 10 * self.n),
                self.nl_max_dim
                    .map_or_else(|| "unknown".into(), |d| d.to_string()),
                (10 * self.n).to_string(),
            ])
            .row([
                format!("excess (r={})", self.excess_r),
                self.excess.to_string(),
                (2 * self.excess_r).to_string(),
            ]);
        let mut out = format!("n = {}, p_g = {}\n\n{summary}", self.n, self.p_g);
        for (title, rows) in [("j = 0", &self.j_zero), ("j = 1728", &self.j_1728)] {
            let mut t = Table::new(["k", "dim", "rho_tr"]);
            for row in rows {
                t.row([row.k as i64, row.dim, row.rho_tr as i64]);
            }
            out.push_str(&format!("\n{title}\n{t}"));
        }
        for (title, rows) in [
            ("j = 0, rho_tr >= 2r", &self.j_zero_rank),
            ("j = 1728, rho_tr >= 2r", &self.j_1728_rank),
        ] {
            let mut t = Table::new(["r", "k", "dim"]);
            for row in rows {
                t.row([row.r as i64, row.k as i64, row.dim]);
            }
            out.push_str(&format!("\n{title}\n{t}"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub config: Configuration,
    pub profile: RamificationProfile,
    pub realizable: Existence,
    pub witness: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub rows: Vec<CensusRow>,
    pub realizable: usize,
    pub unverified: usize,
}

/// Tests every configuration of four multiplicative fibers with `n = 1`.
pub fn beauville_census(budget: &SearchBudget) -> Result<Census, LociError> {
    let mut rows = Vec::new();
    for config in kodaira::enumerate_configs(1, EnumerateOptions::exactly(4).multiplicative()) {
        let req = jmap_requirement(&config)?;
        let report = hurwitz::hurwitz_report(&req.profile, budget)?;
        rows.push(CensusRow {
            config,
            profile: req.profile,
            realizable: report.existence,
            witness: report.witness,
        });
    }
    let tally = |e| rows.iter().filter(|r| r.realizable == e).count();
    Ok(Census {
        realizable: tally(Existence::Yes),
        unverified: tally(Existence::Unverified),
        rows,
    })
}

impl Census {
    pub fn to_table(&self) -> String {
        let mut t = Table::new(["config", "realizable"]);
        for row in &self.rows {
            t.row([row.config.to_string(), row.realizable.to_string()]);
        }
        format!(
            "{t}\nrealizable: {}, unverified: {}\n",
            self.realizable, self.unverified
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use FiberType::*;

    fn cfg(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    fn parts(v: &[usize]) -> CycleType {
        CycleType::new(v.to_vec()).unwrap()
    }

    #[test]
    fn jmap_beauville() {
        let req = jmap_requirement(&cfg("I9 + 3*I1")).unwrap();
        assert_eq!(req.d, 12);
        let p = req.profile.points();
        assert_eq!(p[0].parts, parts(&[3, 3, 3, 3]));
        assert_eq!(p[1].parts, parts(&[2; 6]));
        assert_eq!(p[2].parts, parts(&[9, 1, 1, 1]));
    }

    #[test]
    fn jmap_n2_and_residues() {
        let req = jmap_requirement(&cfg("I12 + 12*I1")).unwrap();
        assert_eq!(req.d, 24);
        let p = req.profile.points();
        assert_eq!(p[0].parts, parts(&[3; 8]));
        assert_eq!(p[1].parts, parts(&[2; 12]));
        assert_eq!(p[2].parts.parts().len(), 13);

        let req = jmap_requirement(&cfg("I10 + II")).unwrap();
        let ones = req.profile.points()[0]
            .parts
            .parts()
            .iter()
            .filter(|&&e| e % 3 == 1)
            .count();
        assert_eq!(ones, 1);
    }

    #[test]
    fn jmap_errors() {
        assert!(matches!(
            jmap_requirement(&cfg("2*I0*")),
            Err(LociError::ConstantJ(_))
        ));
        assert!(matches!(
            jmap_requirement(&cfg("I1 + II")),
            Err(LociError::Kodaira(_))
        ));
        // five points of index 1 over 0 but j has degree 2
        assert!(matches!(
            jmap_requirement(&cfg("I2 + 5*II")),
            Err(LociError::Hurwitz(HurwitzError::InfeasibleResidues { .. }))
        ));
    }

    #[test]
    fn fiber_from_jdata_examples() {
        assert_eq!(fiber_from_jdata(JClass::Zero, 1, false), Fiber::Singular(II));
        assert_eq!(fiber_from_jdata(JClass::Zero, 1, true), Fiber::Singular(IVStar));
        assert_eq!(fiber_from_jdata(JClass::Zero, 5, true), Fiber::Singular(IIStar));
        assert_eq!(fiber_from_jdata(JClass::Pole, 3, true), Fiber::Singular(IStar(3)));
        assert_eq!(fiber_from_jdata(JClass::J1728, 2, false), Fiber::Smooth);
        assert_eq!(fiber_from_jdata(JClass::J1728, 1, true), Fiber::Singular(IIIStar));
        assert_eq!(fiber_from_jdata(JClass::Generic, 1, true), Fiber::Singular(IStar(0)));
    }

    fn random_config(rng: &mut ChaCha8Rng, n: u64) -> Configuration {
        let types = FiberType::all_up_to(12 * n as u32);
        loop {
            let mut c = Configuration::new();
            let mut left = 12 * n as u32;
            while left > 0 {
                let t = types[rng.gen_range(0..types.len())];
                if t.euler() <= left && (t != IStar(0) || rng.gen_bool(0.3)) {
                    c.add(t, 1).unwrap();
                    left -= t.euler();
                }
            }
            if c.has_nonconstant_j() {
                return c;
            }
        }
    }

    #[test]
    fn reconstruct_from_requirement() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 200 {
            let n = rng.gen_range(1..4);
            let c = random_config(&mut rng, n);
            let Ok(req) = jmap_requirement(&c) else { continue };
            // starred fibers to hand out, per class and index
            let mut starred: Vec<FiberType> = c.fibers().filter(|t| t.is_starred()).collect();
            let rebuilt = req.configuration(|class, e| {
                let wanted = match fiber_from_jdata(class, e, true) {
                    Fiber::Singular(IStar(0)) | Fiber::Smooth => return false,
                    Fiber::Singular(t) => t,
                };
                match starred.iter().position(|&s| s == wanted) {
                    Some(i) => {
                        starred.remove(i);
                        true
                    }
                    None => false,
                }
            });
            // I0* sits over generic points, which the requirement does not record
            let expected = Configuration::from_entries(
                c.entries().filter(|&(t, _)| t != IStar(0)),
            )
            .unwrap();
            assert_eq!(rebuilt, expected, "{c}");
            checked += 1;
        }
    }

    #[test]
    fn locus_dim_examples() {
        let budget = SearchBudget::default();
        let r = locus_dim(&cfg("I9 + 3*I1"), &budget).unwrap();
        assert_eq!((r.n, r.dim, r.rho_tr), (1, 0, 10));
        assert_eq!(r.realizable, Existence::Yes);
        let r = locus_dim(&cfg("I12 + 12*I1"), &budget).unwrap();
        assert_eq!((r.n, r.dim, r.rho_tr), (2, 7, 13));
        assert_eq!(r.realizable, Existence::Unverified);
        assert_eq!(dim_by_trivial_rank(&cfg("I12 + 12*I1"), 2), 7);
        assert!(matches!(
            locus_dim(&cfg("4*I0*"), &budget),
            Err(LociError::ConstantJ(_))
        ));
    }

    #[test]
    fn unrealizable_configs() {
        let budget = SearchBudget::default();
        let r = locus_dim(&cfg("I6 + I4 + I1 + I1"), &budget).unwrap();
        assert_eq!(r.realizable, Existence::No);
        assert_eq!(realizability(&cfg("I2 + 5*II"), &budget), Ok(Existence::No));
    }

    #[test]
    fn dimension_formulas_agree_on_random_configs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let n = rng.gen_range(1..5);
            let c = random_config(&mut rng, n);
            assert_eq!(dim_by_fiber_counts(&c, n), dim_by_trivial_rank(&c, n), "{c}");
        }
    }

    #[test]
    fn constant_j_dimension_from_counts() {
        for n in 2..8u64 {
            let c = Configuration::from_entries([(IStar(0), 2 * n as u32)]).unwrap();
            assert_eq!(dim_by_fiber_counts(&c, n), 2 * n as i64 - 2);
        }
    }

    #[test]
    fn nl_witness_examples() {
        let budget = SearchBudget::default();
        let r = nl_lower_bound_witness(2, 20, &budget).unwrap();
        assert_eq!(r.config.to_string(), "I19 + 5*I1");
        assert_eq!((r.rho_tr, r.dim), (20, 0));
        let r = nl_lower_bound_witness(2, 2, &budget).unwrap();
        assert_eq!(r.config, cfg("24*I1"));
        assert_eq!((r.rho_tr, r.dim), (2, 18));
        let r = nl_lower_bound_witness(3, 15, &budget).unwrap();
        assert_eq!(r.config.singular_fibers(), 23);
        assert_eq!((r.rho_tr, r.dim), (15, 15));
        assert!(nl_witness_config(2, 21).is_err());
        assert!(nl_witness_config(2, 1).is_err());
        assert!(nl_witness_config(1, 5).is_err());
        for n in 2..6 {
            for r in 2..=10 * n {
                let c = nl_witness_config(n, r).unwrap();
                assert_eq!(kodaira::rho_tr(&c), r);
                assert_eq!(locus_dimension(&c).unwrap() + r as i64, 10 * n as i64);
            }
        }
    }

    #[test]
    fn base_change_examples() {
        let c = cfg("I9 + 3*I1");
        let b = cyclic_base_change_config(&c, 2, [I(9), I(1)]).unwrap();
        assert_eq!(b, cfg("I18 + I2 + 4*I1"));
        assert_eq!(kodaira::noether_check(&b), Ok(2));
        assert_eq!(kodaira::rho_tr(&b), 20);
        assert_eq!(cyclic_base_change_config(&c, 1, [I(9), I(1)]).unwrap(), c);
        let b = cyclic_base_change_config(&cfg("12*I1"), 2, [I(1), I(1)]).unwrap();
        assert_eq!(b, cfg("2*I2 + 20*I1"));
        assert!(matches!(
            cyclic_base_change_config(&cfg("I9 + I1 + II"), 2, [I(9), I(1)]),
            Err(LociError::AdditiveFiber(II))
        ));
        assert!(matches!(
            cyclic_base_change_config(&c, 2, [I(9), I(9)]),
            Err(LociError::MissingSlot { .. })
        ));
    }

    #[test]
    fn base_change_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..4);
            let c = enumerate_random_multiplicative(&mut rng, n);
            let fibers: Vec<FiberType> = c.fibers().collect();
            if fibers.len() < 2 {
                continue;
            }
            let a = rng.gen_range(0..fibers.len());
            let mut b = rng.gen_range(0..fibers.len() - 1);
            if b >= a {
                b += 1;
            }
            let deg = rng.gen_range(1..5);
            let out = cyclic_base_change_config(&c, deg, [fibers[a], fibers[b]]).unwrap();
            assert_eq!(out.euler_sum(), u64::from(deg) * c.euler_sum());
            assert_eq!(
                out.singular_fibers(),
                2 + u64::from(deg) * (c.singular_fibers() - 2)
            );
        }
    }

    fn enumerate_random_multiplicative(rng: &mut ChaCha8Rng, n: u64) -> Configuration {
        let mut c = Configuration::new();
        let mut left = 12 * n as u32;
        while left > 0 {
            let nu = rng.gen_range(1..=left.min(9));
            c.add(I(nu), 1).unwrap();
            left -= nu;
        }
        c
    }

    #[test]
    fn special_loci_n2() {
        let r = special_loci_report(2).unwrap();
        assert_eq!((r.constant_j_dim, r.constant_j_rho_tr), (2, 18));
        assert_eq!(r.l1_dim, 1);
        assert_eq!(r.l2_dims, [1, 0]);
        let ks: Vec<u64> = r.j_zero.iter().map(|row| row.k).collect();
        assert_eq!(ks, (3..=12).collect::<Vec<_>>());
        assert_eq!(r.nl_max_dim, Some(0));
        let at10 = r.j_zero_rank.iter().find(|row| row.r == 10).unwrap();
        assert_eq!(at10.dim, 0);
        assert_eq!(r.j_zero_rank.last().unwrap().r, 10);
        let ks: Vec<u64> = r.j_1728.iter().map(|row| row.k).collect();
        assert_eq!(ks, (3..=8).collect::<Vec<_>>());
    }

    #[test]
    fn special_loci_identities() {
        for n in 2..=12u64 {
            let r = special_loci_report(n).unwrap();
            let ni = n as i64;
            assert_eq!(r.constant_j_dim, 2 * ni - 2);
            assert_eq!(r.constant_j_rho_tr, 8 * n + 2);
            assert_eq!(r.j_zero.first().unwrap().k, (6 * n).div_ceil(5));
            assert_eq!(r.j_1728.first().unwrap().k, (4 * n).div_ceil(3));
            for row in &r.j_zero_rank {
                assert_eq!(row.k, 6 * n - row.r + 1);
                assert_eq!(row.dim, 6 * ni - row.r as i64 - 2);
                assert!(5 * row.r <= 5 + 24 * n);
            }
            assert_eq!(r.j_zero_rank.len() as u64, j_zero_rank_bound(n));
            for row in &r.j_1728_rank {
                assert_eq!(row.dim, 6 * ni - row.r as i64 - 2);
                assert!(3 * row.r <= 14 * n + 3);
            }
            assert_eq!(r.excess, (4 * ni) / 5 - 1);
            assert_eq!(r.nl_max_dim.is_some(), n <= 5);
            if n <= 5 {
                assert_eq!(r.nl_max_dim, Some(ni - 2));
            }
        }
        assert_eq!(special_loci_report(5).unwrap().excess, 3);
        assert!(special_loci_report(1).is_err());
    }

    #[test]
    fn census_counts_six() {
        let census = beauville_census(&SearchBudget::default()).unwrap();
        assert_eq!(census.rows.len(), 15);
        assert_eq!(census.unverified, 0);
        assert_eq!(census.realizable, 6);
    }
}
