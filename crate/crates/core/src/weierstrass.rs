//! Weierstrass models `-w² + z³ + P z + Q` with `P, Q` binary forms of
//! degrees `4n` and `6n` over Q, and their singular fibers.
//!
//! Places of the base are irreducible rational binary forms, so a place of
//! degree `k` stands for `k` conjugate points with the same fiber type.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::kodaira::{self, Configuration, FiberType};
use crate::poly::{q, QPoly, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeierstrassError {
    #[error("form of degree {degree} needs {expected} coefficients, got {found}")]
    CoefficientCount {
        degree: usize,
        expected: usize,
        found: usize,
    },
    #[error("P has degree {p} and Q has degree {q}; expected 4n and 6n")]
    DegreeMismatch { p: usize, q: usize },
    #[error("n must be positive")]
    ZeroN,
    #[error("discriminant 4P^3 + 27Q^2 vanishes identically")]
    Degenerate,
    #[error("minimalization leaves a model with n = 0")]
    Trivial,
    #[error("model is not minimal at place {place}: vP = {vp}, vQ = {vq}")]
    NonMinimal { place: String, vp: Val, vq: Val },
    #[error("bad rational {0:?}")]
    BadRational(String),
}

/// `Σ c_i x^i y^(degree - i)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<Q>,
}

impl BinaryForm {
    pub fn new(degree: usize, coeffs: Vec<Q>) -> Result<Self, WeierstrassError> {
        if coeffs.len() != degree + 1 {
            return Err(WeierstrassError::CoefficientCount {
                degree,
                expected: degree + 1,
                found: coeffs.len(),
            });
        }
        Ok(Self { degree, coeffs })
    }

    pub fn from_ints(degree: usize, coeffs: &[i64]) -> Result<Self, WeierstrassError> {
        Self::new(degree, coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            coeffs: vec![Q::zero(); degree + 1],
        }
    }

    pub fn one() -> Self {
        Self {
            degree: 0,
            coeffs: vec![Q::one()],
        }
    }

    /// `x^a y^b`.
    pub fn monomial(a: usize, b: usize) -> Self {
        let mut f = Self::zero(a + b);
        f.coeffs[a] = Q::one();
        f
    }

    /// The form of degree `degree` whose dehomogenization at `y = 1` is `f`.
    pub fn homogenize(f: &QPoly, degree: usize) -> Self {
        assert!(f.degree().unwrap_or(0) <= degree);
        Self {
            degree,
            coeffs: (0..=degree).map(|i| f.coeff(i)).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        Self {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `∂/∂x`, a form of degree `degree - 1` (zero for constants).
    pub fn dx(&self) -> Self {
        if self.degree == 0 {
            return Self::zero(0);
        }
        Self {
            degree: self.degree - 1,
            coeffs: (1..=self.degree)
                .map(|i| &self.coeffs[i] * q(i as i64))
                .collect(),
        }
    }

    /// `∂/∂y`.
    pub fn dy(&self) -> Self {
        if self.degree == 0 {
            return Self::zero(0);
        }
        Self {
            degree: self.degree - 1,
            coeffs: (0..self.degree)
                .map(|i| &self.coeffs[i] * q((self.degree - i) as i64))
                .collect(),
        }
    }

    /// `F(x, 1)`.
    pub fn dehomogenize(&self) -> QPoly {
        QPoly::new(self.coeffs.clone())
    }

    /// `F(y, x)`.
    pub fn swap(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self {
            degree: self.degree,
            coeffs,
        }
    }

    /// Exact division by another form.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if self.degree < d.degree {
            return None;
        }
        // divide as polynomials in x after moving the y-part of d aside
        let dv = d.swap().dehomogenize().multiplicity(&QPoly::x()).unwrap_or(0);
        let sv = self.swap().dehomogenize().multiplicity(&QPoly::x());
        if let Some(sv) = sv {
            if sv < dv {
                return None;
            }
        }
        let quot = self.dehomogenize().exact_div(&d.dehomogenize())?;
        Some(Self::homogenize(&quot, self.degree - d.degree))
    }

    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        let mut acc = Q::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * num_traits::pow(x.clone(), i) * num_traits::pow(y.clone(), self.degree - i);
            }
        }
        acc
    }

    /// Squarefree as a form: no repeated factor, including `y`.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let f = self.dehomogenize();
        let drop = self.degree - f.degree().unwrap_or(0);
        drop <= 1 && f.is_squarefree()
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let j = self.degree - i;
            let mut mono = Vec::new();
            match i {
                0 => {}
                1 => mono.push("x".to_string()),
                _ => mono.push(format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => mono.push("y".to_string()),
                _ => mono.push(format!("y^{j}")),
            }
            let mono = mono.join("*");
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn parse_rational(s: &str) -> Result<Q, WeierstrassError> {
    let t = s.trim();
    t.parse::<Q>()
        .ok()
        .filter(|r| !r.denom().is_zero())
        .ok_or_else(|| WeierstrassError::BadRational(s.to_string()))
}

/// Rational coefficients as `"p/q"` strings.
pub fn rational_strings(coeffs: &[Q]) -> Vec<String> {
    coeffs.iter().map(|c| c.to_string()).collect()
}

pub fn parse_rationals(items: &[String]) -> Result<Vec<Q>, WeierstrassError> {
    items.iter().map(|s| parse_rational(s)).collect()
}

/// A valuation, `Infinite` for the zero form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Finite(u32),
    Infinite,
}

impl Val {
    fn at_least(self, k: u32) -> bool {
        match self {
            Val::Finite(v) => v >= k,
            Val::Infinite => true,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(v) => write!(f, "{v}"),
            Val::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Val {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Val::Finite(v) => serializer.serialize_u32(*v),
            Val::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// A closed point of `P¹` over Q: an irreducible binary form up to scaling.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Place {
    /// Zero of the primitive irreducible `g(x)` in the chart `y = 1`.
    Affine(QPoly),
    /// `[1 : 0]`, the zero of `y`.
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Affine(g) => g.degree().expect("non-constant"),
            Place::Infinity => 1,
        }
    }

    pub fn form(&self) -> BinaryForm {
        match self {
            Place::Affine(g) => BinaryForm::homogenize(g, self.degree()),
            Place::Infinity => BinaryForm::monomial(0, 1),
        }
    }

    /// Order of vanishing of `f` along this place.
    pub fn valuation(&self, f: &BinaryForm) -> Val {
        let poly = match self {
            Place::Affine(_) => f.dehomogenize(),
            // swap x and y so that [1:0] becomes [0:1], the zero of x
            Place::Infinity => f.swap().dehomogenize(),
        };
        let g = match self {
            Place::Affine(g) => g.clone(),
            Place::Infinity => QPoly::x(),
        };
        match poly.multiplicity(&g) {
            None => Val::Infinite,
            Some(k) => Val::Finite(k as u32),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.form().fmt(f)
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Places where `f` vanishes, in a fixed order (affine by factor, then infinity).
pub fn zero_places(f: &BinaryForm) -> Vec<Place> {
    let dehom = f.dehomogenize();
    let mut out: Vec<Place> = dehom
        .factor()
        .into_iter()
        .map(|(g, _)| Place::Affine(g))
        .collect();
    if dehom.degree().unwrap_or(0) < f.degree() {
        out.push(Place::Infinity);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassModel {
    n: usize,
    p: BinaryForm,
    q: BinaryForm,
}

impl WeierstrassModel {
    /// Checks degrees and that the discriminant is not identically zero.
    pub fn new(n: usize, p: BinaryForm, q: BinaryForm) -> Result<Self, WeierstrassError> {
        if n == 0 {
            return Err(WeierstrassError::ZeroN);
        }
        if p.degree() != 4 * n || q.degree() != 6 * n {
            return Err(WeierstrassError::DegreeMismatch {
                p: p.degree(),
                q: q.degree(),
            });
        }
        let m = Self { n, p, q };
        if discriminant(&m).is_zero() {
            return Err(WeierstrassError::Degenerate);
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> &BinaryForm {
        &self.p
    }

    pub fn q(&self) -> &BinaryForm {
        &self.q
    }

    /// No place `u` with `u⁴ | P` and `u⁶ | Q`.
    pub fn is_minimal(&self) -> bool {
        common_places(&self.p, &self.q)
            .iter()
            .all(|u| !(u.valuation(&self.p).at_least(4) && u.valuation(&self.q).at_least(6)))
    }
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    n: usize,
    #[serde(rename = "P")]
    p: Vec<String>,
    #[serde(rename = "Q")]
    q: Vec<String>,
}

impl Serialize for WeierstrassModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ModelJson {
            n: self.n,
            p: rational_strings(self.p.coeffs()),
            q: rational_strings(self.q.coeffs()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WeierstrassModel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = ModelJson::deserialize(deserializer)?;
        let p = parse_rationals(&raw.p).map_err(D::Error::custom)?;
        let q = parse_rationals(&raw.q).map_err(D::Error::custom)?;
        let p = BinaryForm::new(4 * raw.n, p).map_err(D::Error::custom)?;
        let q = BinaryForm::new(6 * raw.n, q).map_err(D::Error::custom)?;
        WeierstrassModel::new(raw.n, p, q).map_err(D::Error::custom)
    }
}

/// `4P³ + 27Q²`, a form of degree `12n`.
pub fn discriminant(m: &WeierstrassModel) -> BinaryForm {
    m.p.pow(3)
        .scale(&q(4))
        .add(&m.q.pow(2).scale(&q(27)))
}

/// `P_x Q_y - P_y Q_x`, identically zero exactly when `j` is constant.
pub fn wronskian(m: &WeierstrassModel) -> BinaryForm {
    m.p.dx().mul(&m.q.dy()).sub(&m.p.dy().mul(&m.q.dx()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JInvariant {
    /// `6912 P³`.
    #[serde(serialize_with = "ser_form")]
    pub numerator: BinaryForm,
    /// `4P³ + 27Q²`.
    #[serde(serialize_with = "ser_form")]
    pub denominator: BinaryForm,
    pub is_constant: bool,
    #[serde(serialize_with = "ser_opt_q")]
    pub constant_value: Option<Q>,
}

fn ser_form<S: Serializer>(f: &BinaryForm, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(f)
}

fn ser_opt_q<S: Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

pub fn j_invariant(m: &WeierstrassModel) -> JInvariant {
    let numerator = m.p.pow(3).scale(&q(6912));
    let denominator = discriminant(m);
    let is_constant = wronskian(m).is_zero();
    let constant_value = is_constant.then(|| {
        let i = denominator
            .coeffs()
            .iter()
            .position(|c| !c.is_zero())
            .expect("non-degenerate");
        &numerator.coeffs()[i] / &denominator.coeffs()[i]
    });
    JInvariant {
        numerator,
        denominator,
        is_constant,
        constant_value,
    }
}

/// Places where both forms vanish (all zeros of the nonzero one if the other is zero).
fn common_places(p: &BinaryForm, q: &BinaryForm) -> Vec<Place> {
    match (p.is_zero(), q.is_zero()) {
        (true, true) => Vec::new(),
        (true, false) => zero_places(q),
        (false, true) => zero_places(p),
        (false, false) => {
            let g = p.dehomogenize().gcd(&q.dehomogenize());
            let mut out: Vec<Place> = g
                .factor()
                .into_iter()
                .map(|(g, _)| Place::Affine(g))
                .collect();
            if Place::Infinity.valuation(p).at_least(1) && Place::Infinity.valuation(q).at_least(1)
            {
                out.push(Place::Infinity);
            }
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minimalized {
    pub model: WeierstrassModel,
    /// `u` with `P = u⁴ P'` and `Q = u⁶ Q'`.
    pub factor: BinaryForm,
}

/// Divides out every place `u` with `u⁴ | P` and `u⁶ | Q`.
pub fn minimalize(p: &BinaryForm, q: &BinaryForm) -> Result<Minimalized, WeierstrassError> {
    let k = p.degree() / 4;
    if p.degree() % 4 != 0 || q.degree() != 6 * k {
        return Err(WeierstrassError::DegreeMismatch {
            p: p.degree(),
            q: q.degree(),
        });
    }
    if p.is_zero() && q.is_zero() {
        return Err(WeierstrassError::Degenerate);
    }
    let (mut p, mut q) = (p.clone(), q.clone());
    let mut factor = BinaryForm::one();
    for u in common_places(&p, &q) {
        let e = match (u.valuation(&p), u.valuation(&q)) {
            (Val::Finite(a), Val::Finite(b)) => (a / 4).min(b / 6),
            (Val::Finite(a), Val::Infinite) => a / 4,
            (Val::Infinite, Val::Finite(b)) => b / 6,
            (Val::Infinite, Val::Infinite) => unreachable!("not both zero"),
        };
        if e == 0 {
            continue;
        }
        let form = u.form();
        let divide = |f: &BinaryForm, times: u32| {
            if f.is_zero() {
                BinaryForm::zero(f.degree() - times as usize * form.degree())
            } else {
                f.exact_div(&form.pow(times)).expect("valuation bounds the power")
            }
        };
        p = divide(&p, 4 * e);
        q = divide(&q, 6 * e);
        factor = factor.mul(&form.pow(e));
    }
    let n = p.degree() / 4;
    if n == 0 {
        return Err(WeierstrassError::Trivial);
    }
    Ok(Minimalized {
        model: WeierstrassModel::new(n, p, q)?,
        factor,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaceValuation {
    pub place: Place,
    pub degree: usize,
    pub v_p: Val,
    pub v_q: Val,
    pub v_delta: u32,
}

/// Valuations of `P`, `Q`, `Δ` at every place where `Δ` vanishes.
pub fn place_valuations(m: &WeierstrassModel) -> Vec<PlaceValuation> {
    let delta = discriminant(m);
    let out: Vec<PlaceValuation> = zero_places(&delta)
        .into_iter()
        .map(|place| {
            let v_delta = match place.valuation(&delta) {
                Val::Finite(v) => v,
                Val::Infinite => unreachable!("discriminant is nonzero"),
            };
            PlaceValuation {
                degree: place.degree(),
                v_p: place.valuation(&m.p),
                v_q: place.valuation(&m.q),
                v_delta,
                place,
            }
        })
        .collect();
    debug_assert_eq!(
        out.iter()
            .map(|pv| pv.degree * pv.v_delta as usize)
            .sum::<usize>(),
        12 * m.n
    );
    out
}

/// Kodaira type from `(v(P), v(Q), v(Δ))` in characteristic zero.
pub fn kodaira_type(vp: Val, vq: Val, vd: u32) -> Option<FiberType> {
    use FiberType::*;
    let eq = |v: Val, k: u32| v == Val::Finite(k);
    let t = if eq(vp, 0) && eq(vq, 0) {
        I(vd)
    } else if eq(vq, 1) {
        II
    } else if eq(vp, 1) {
        III
    } else if eq(vq, 2) {
        IV
    } else if eq(vp, 2) {
        IStar(vd.checked_sub(6)?)
    } else if eq(vq, 3) {
        IStar(0)
    } else if eq(vq, 4) {
        IVStar
    } else if eq(vp, 3) {
        IIIStar
    } else if eq(vq, 5) {
        IIStar
    } else {
        return None;
    };
    (t.is_valid() && t.euler() == vd).then_some(t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifiedPlace {
    #[serde(flatten)]
    pub valuation: PlaceValuation,
    pub fiber: FiberType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberClassification {
    pub n: usize,
    pub config: Configuration,
    /// Rational places; a place of degree `k` carries `k` geometric fibers.
    pub places: Vec<ClassifiedPlace>,
    pub geometric_points: usize,
}

pub fn classify_fibers(m: &WeierstrassModel) -> Result<FiberClassification, WeierstrassError> {
    let mut config = Configuration::new();
    let mut places = Vec::new();
    for pv in place_valuations(m) {
        let fiber = kodaira_type(pv.v_p, pv.v_q, pv.v_delta).ok_or_else(|| {
            WeierstrassError::NonMinimal {
                place: pv.place.to_string(),
                vp: pv.v_p,
                vq: pv.v_q,
            }
        })?;
        config
            .add(fiber, pv.degree as u32)
            .expect("classified types are valid");
        places.push(ClassifiedPlace {
            valuation: pv,
            fiber,
        });
    }
    debug_assert_eq!(kodaira::noether_check(&config), Ok(m.n as u64));
    Ok(FiberClassification {
        n: m.n,
        geometric_points: places.iter().map(|p| p.valuation.degree).sum(),
        config,
        places,
    })
}

/// Random binary form with integer coefficients in `[-bound, bound]`.
pub fn random_form<R: Rng>(degree: usize, bound: i64, rng: &mut R) -> BinaryForm {
    BinaryForm::new(
        degree,
        (0..=degree)
            .map(|_| Q::from_integer(BigInt::from(rng.gen_range(-bound..=bound))))
            .collect(),
    )
    .expect("length matches")
}

/// Random squarefree form of the given degree.
pub fn random_squarefree_form<R: Rng>(degree: usize, bound: i64, rng: &mut R) -> BinaryForm {
    loop {
        let f = random_form(degree, bound, rng);
        if f.is_squarefree() {
            return f;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFamily {
    Generic,
    /// `P = 0`, `Q` squarefree.
    PZero,
    /// `Q = 0`, `P` squarefree.
    QZero,
}

/// Random minimal model; generic ones have squarefree discriminant coprime to `PQ`.
pub fn random_model<R: Rng>(n: usize, family: ModelFamily, rng: &mut R) -> WeierstrassModel {
    loop {
        let (p, q) = match family {
            ModelFamily::Generic => (random_form(4 * n, 9, rng), random_form(6 * n, 9, rng)),
            ModelFamily::PZero => (BinaryForm::zero(4 * n), random_squarefree_form(6 * n, 9, rng)),
            ModelFamily::QZero => (random_squarefree_form(4 * n, 9, rng), BinaryForm::zero(6 * n)),
        };
        let Ok(m) = WeierstrassModel::new(n, p, q) else {
            continue;
        };
        if family == ModelFamily::Generic && !discriminant(&m).is_squarefree() {
            continue;
        }
        if family == ModelFamily::Generic
            && place_valuations(&m)
                .iter()
                .any(|pv| pv.v_p != Val::Finite(0) || pv.v_q != Val::Finite(0))
        {
            continue;
        }
        return m;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use FiberType::*;

    fn form(degree: usize, c: &[i64]) -> BinaryForm {
        BinaryForm::from_ints(degree, c).unwrap()
    }

    /// `x^a y^b` scaled.
    fn mono(a: usize, b: usize, c: i64) -> BinaryForm {
        BinaryForm::monomial(a, b).scale(&q(c))
    }

    #[test]
    fn discriminant_examples() {
        let qf = random_squarefree_form(6, 5, &mut ChaCha8Rng::seed_from_u64(1));
        let m = WeierstrassModel::new(1, BinaryForm::zero(4), qf.clone()).unwrap();
        assert_eq!(discriminant(&m), qf.pow(2).scale(&q(27)));
        let m = WeierstrassModel::new(1, mono(4, 0, 1), mono(0, 6, 1)).unwrap();
        assert_eq!(discriminant(&m), mono(12, 0, 4).add(&mono(0, 12, 27)));
        assert_eq!(
            WeierstrassModel::new(1, BinaryForm::zero(4), BinaryForm::zero(6)),
            Err(WeierstrassError::Degenerate)
        );
        // 4P^3 + 27Q^2 = 0 with P = -3u^2, Q = 2u^3
        let u = form(2, &[1, 0, 1]);
        let p = u.pow(2).scale(&q(-3));
        let qq = u.pow(3).scale(&q(2));
        assert_eq!(WeierstrassModel::new(1, p, qq), Err(WeierstrassError::Degenerate));
    }

    #[test]
    fn j_invariant_examples() {
        let m = WeierstrassModel::new(1, form(4, &[1, 0, 3, 0, 1]), BinaryForm::zero(6)).unwrap();
        let j = j_invariant(&m);
        assert!(j.is_constant);
        assert_eq!(j.constant_value, Some(q(1728)));
        let m = WeierstrassModel::new(1, BinaryForm::zero(4), form(6, &[1, 0, 0, 0, 0, 0, 1])).unwrap();
        let j = j_invariant(&m);
        assert!(j.is_constant);
        assert_eq!(j.constant_value, Some(q(0)));
        for n in 1..4 {
            let m = WeierstrassModel::new(n, mono(4 * n, 0, 1), mono(0, 6 * n, 1)).unwrap();
            let w = wronskian(&m);
            let nn = n as i64;
            assert_eq!(w, mono(4 * n - 1, 6 * n - 1, 24 * nn * nn));
            assert!(!j_invariant(&m).is_constant);
        }
    }

    #[test]
    fn minimalize_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m0 = random_model(1, ModelFamily::Generic, &mut rng);
        let x = mono(1, 0, 1);
        let out = minimalize(&x.pow(4).mul(m0.p()), &x.pow(6).mul(m0.q())).unwrap();
        assert_eq!(out.model, m0);
        assert_eq!(out.factor, x);
        let out = minimalize(m0.p(), m0.q()).unwrap();
        assert_eq!((out.model.clone(), out.factor), (m0.clone(), BinaryForm::one()));
        let out = minimalize(&x.pow(8).mul(m0.p()), &x.pow(12).mul(m0.q())).unwrap();
        assert_eq!(out.model, m0);
        assert_eq!(out.factor, x.pow(2));
        // irreducible quadratic place and the place at infinity together
        let u = form(2, &[1, 0, 1]).mul(&mono(0, 1, 1));
        let out = minimalize(&u.pow(4).mul(m0.p()), &u.pow(6).mul(m0.q())).unwrap();
        assert_eq!(out.model, m0);
        assert!(out.model.is_minimal());
        let again = minimalize(out.model.p(), out.model.q()).unwrap();
        assert_eq!(again.model, out.model);
    }

    #[test]
    fn minimalize_with_zero_p() {
        let x = mono(1, 0, 1);
        let qf = form(6, &[1, 1, 0, 0, 0, 0, 1]);
        let out = minimalize(&BinaryForm::zero(8), &x.pow(6).mul(&qf)).unwrap();
        assert_eq!(out.model.q(), &qf);
        assert!(out.model.p().is_zero());
        assert_eq!(out.factor, x);
    }

    #[test]
    fn valuations_of_special_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_model(1, ModelFamily::PZero, &mut rng);
        let pv = place_valuations(&m);
        assert_eq!(pv.iter().map(|p| p.degree).sum::<usize>(), 6);
        assert!(pv
            .iter()
            .all(|p| (p.v_p, p.v_q, p.v_delta) == (Val::Infinite, Val::Finite(1), 2)));
        let m = random_model(1, ModelFamily::QZero, &mut rng);
        let pv = place_valuations(&m);
        assert_eq!(pv.iter().map(|p| p.degree).sum::<usize>(), 4);
        assert!(pv
            .iter()
            .all(|p| (p.v_p, p.v_q, p.v_delta) == (Val::Finite(1), Val::Infinite, 3)));
    }

    #[test]
    fn classify_special_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=2 {
            let c = classify_fibers(&random_model(n, ModelFamily::PZero, &mut rng)).unwrap();
            assert_eq!(c.config.count(II), 6 * n as u32);
            let c = classify_fibers(&random_model(n, ModelFamily::QZero, &mut rng)).unwrap();
            assert_eq!(c.config.count(III), 4 * n as u32);
        }
    }

    #[test]
    fn classify_generic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_model(1, ModelFamily::Generic, &mut rng);
        let c = classify_fibers(&m).unwrap();
        assert_eq!(c.config.count(I(1)), 12);
        assert_eq!(kodaira::rho_tr(&c.config), 2);
    }

    /// Each model is built from local data at x = 0 so the expected type is known.
    #[test]
    fn classify_table_from_local_shapes() {
        let x = mono(1, 0, 1);
        let y = mono(0, 1, 1);
        // (vP, vQ) at x = 0 with generic cofactors; expected type
        let cases: &[(u32, u32, FiberType)] = &[
            (1, 1, II),
            (1, 2, III),
            (2, 2, IV),
            (2, 3, IStar(0)),
            (3, 3, IStar(0)),
            (3, 4, IVStar),
            (3, 5, IIIStar),
            (4, 5, IIStar),
        ];
        for &(a, b, expected) in cases {
            let n = 2;
            let p = x.pow(a).mul(&y.pow(4 * n as u32 - a).add(&x.pow(4 * n as u32 - a).scale(&q(2))));
            let qf = x.pow(b).mul(&y.pow(6 * n as u32 - b).add(&x.pow(6 * n as u32 - b).scale(&q(3))));
            let m = WeierstrassModel::new(n, p, qf).unwrap();
            let c = classify_fibers(&m).unwrap();
            let at_zero = c
                .places
                .iter()
                .find(|p| p.valuation.place == Place::Affine(QPoly::x()))
                .unwrap();
            assert_eq!(at_zero.fiber, expected, "vP={a} vQ={b}");
            assert_eq!(kodaira::noether_check(&c.config), Ok(n as u64));
        }
    }

    #[test]
    fn multiplicative_reduction_from_nodal_family() {
        // P = -3 u^2, Q = 2 u^3 + x^k v makes Δ vanish to order k at x = 0
        let x = mono(1, 0, 1);
        let y = mono(0, 1, 1);
        let u = y.pow(2).add(&x.mul(&y));
        let p = u.pow(2).scale(&q(-3));
        for k in 1..=5u32 {
            let v = y.pow(6 - k).add(&x.pow(6 - k).scale(&q(5)));
            let qf = u.pow(3).scale(&q(2)).add(&x.pow(k).mul(&v));
            let m = WeierstrassModel::new(1, p.clone(), qf).unwrap();
            let c = classify_fibers(&m).unwrap();
            let at_zero = c
                .places
                .iter()
                .find(|pl| pl.valuation.place == Place::Affine(QPoly::x()))
                .unwrap();
            assert_eq!(at_zero.fiber, I(k));
        }
    }

    #[test]
    fn non_minimal_is_reported() {
        let x = mono(1, 0, 1);
        let y = mono(0, 1, 1);
        let p = x.pow(4).mul(&y.pow(4));
        let qf = x.pow(6).mul(&y.pow(6)).add(&x.pow(12).scale(&q(1)));
        let m = WeierstrassModel::new(2, p, qf).unwrap();
        assert!(!m.is_minimal());
        assert!(matches!(
            classify_fibers(&m),
            Err(WeierstrassError::NonMinimal { .. })
        ));
    }

    #[test]
    fn random_models_satisfy_noether() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for i in 0..12 {
            let n = 1 + i % 2;
            let p = random_form(4 * n, 3, &mut rng);
            let qf = random_form(6 * n, 3, &mut rng);
            let Ok(min) = minimalize(&p, &qf) else { continue };
            let m = min.model;
            let pv = place_valuations(&m);
            let total: usize = pv.iter().map(|p| p.degree * p.v_delta as usize).sum();
            assert_eq!(total, 12 * m.n());
            let c = classify_fibers(&m).unwrap();
            assert_eq!(kodaira::noether_check(&c.config), Ok(m.n() as u64));
            for place in &c.places {
                assert_eq!(place.fiber.euler(), place.valuation.v_delta);
            }
        }
    }

    #[test]
    fn model_json_round_trip() {
        let text = r#"{"n":1,"P":["0","1/2","0","0","1"],"Q":["1","0","0","0","0","0","-3/4"]}"#;
        let m: WeierstrassModel = serde_json::from_str(text).unwrap();
        assert_eq!(m.p().coeffs()[1], Q::new(1.into(), 2.into()));
        let back = serde_json::to_string(&m).unwrap();
        assert_eq!(back, text);
        assert!(serde_json::from_str::<WeierstrassModel>(r#"{"n":1,"P":["0"],"Q":[]}"#).is_err());
        assert!(serde_json::from_str::<WeierstrassModel>(
            r#"{"n":1,"P":["0","0","0","0","0"],"Q":["0","0","0","0","0","0","0"]}"#
        )
        .is_err());
    }
}
