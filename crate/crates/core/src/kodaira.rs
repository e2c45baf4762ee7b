//! Kodaira fiber types and configurations of singular fibers.
//!
//! A configuration is a multiset of singular fiber types. It satisfies
//! Noether's condition when its total Euler number is `12n` with `n ≥ 1`;
//! `n - 1` is then the geometric genus of the surface.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KodairaError {
    #[error("Euler number sum {euler} is not a positive multiple of 12")]
    NotMultipleOf12 { euler: u64 },
    #[error("invalid fiber type {0}")]
    InvalidFiberType(String),
    #[error("twisting needs an even number of places, got {0}")]
    OddPlaceCount(u64),
    #[error("cannot flip {fiber}: only {available} present")]
    FlipNotPresent { fiber: FiberType, available: u32 },
    #[error("twist removes every singular fiber")]
    TrivialTwist,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A singular Kodaira fiber type. Smooth fibers are not fiber types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiberType {
    /// `I_ν`, `ν ≥ 1`.
    I(u32),
    II,
    III,
    IV,
    /// `I_ν^*`, `ν ≥ 0`.
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

/// A fiber that may also be smooth; the twist dual of `I_0^*` is smooth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Fiber {
    Smooth,
    Singular(FiberType),
}

impl fmt::Display for Fiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fiber::Smooth => f.write_str("smooth"),
            Fiber::Singular(t) => t.fmt(f),
        }
    }
}

impl Fiber {
    /// Quadratic twist at this place.
    pub fn twist(self) -> Fiber {
        match self {
            Fiber::Smooth => Fiber::Singular(FiberType::IStar(0)),
            Fiber::Singular(t) => t.twist_dual(),
        }
    }
}

/// Euler number, component count and twist dual of a fiber type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiberData {
    pub euler: u32,
    pub components: u32,
    pub twist_dual: Fiber,
}

impl FiberType {
    pub fn is_valid(self) -> bool {
        !matches!(self, FiberType::I(0))
    }

    pub fn is_multiplicative(self) -> bool {
        matches!(self, FiberType::I(_))
    }

    pub fn is_additive(self) -> bool {
        !self.is_multiplicative()
    }

    /// `I_ν` or `I_ν^*` with `ν > 0`: fibers that force a pole of `j`.
    pub fn has_pole(self) -> bool {
        matches!(self, FiberType::I(nu) | FiberType::IStar(nu) if nu > 0)
    }

    /// `II^*, III^*, IV^*` or `I_ν^*` for any `ν`.
    pub fn is_starred(self) -> bool {
        matches!(
            self,
            FiberType::IStar(_) | FiberType::IVStar | FiberType::IIIStar | FiberType::IIStar
        )
    }

    pub fn euler(self) -> u32 {
        match self {
            FiberType::I(nu) => nu,
            FiberType::II => 2,
            FiberType::III => 3,
            FiberType::IV => 4,
            FiberType::IStar(nu) => nu + 6,
            FiberType::IVStar => 8,
            FiberType::IIIStar => 9,
            FiberType::IIStar => 10,
        }
    }

    /// Number of irreducible components: `e` for `I_ν`, `e - 1` otherwise.
    pub fn components(self) -> u32 {
        let e = self.euler();
        if self.is_multiplicative() {
            e
        } else {
            e - 1
        }
    }

    pub fn twist_dual(self) -> Fiber {
        use FiberType::*;
        match self {
            I(nu) => Fiber::Singular(IStar(nu)),
            IStar(0) => Fiber::Smooth,
            IStar(nu) => Fiber::Singular(I(nu)),
            II => Fiber::Singular(IVStar),
            IVStar => Fiber::Singular(II),
            III => Fiber::Singular(IIIStar),
            IIIStar => Fiber::Singular(III),
            IV => Fiber::Singular(IIStar),
            IIStar => Fiber::Singular(IV),
        }
    }

    pub fn data(self) -> FiberData {
        FiberData {
            euler: self.euler(),
            components: self.components(),
            twist_dual: self.twist_dual(),
        }
    }

    // multiplicative by decreasing ν, then II, III, IV, I_ν^* by increasing ν, IV^*, III^*, II^*
    fn order_key(self) -> (u8, u32) {
        match self {
            FiberType::I(nu) => (0, u32::MAX - nu),
            FiberType::II => (1, 0),
            FiberType::III => (2, 0),
            FiberType::IV => (3, 0),
            FiberType::IStar(nu) => (4, nu),
            FiberType::IVStar => (5, 0),
            FiberType::IIIStar => (6, 0),
            FiberType::IIStar => (7, 0),
        }
    }

    /// Every valid type with Euler number at most `max_euler`, in canonical order.
    pub fn all_up_to(max_euler: u32) -> Vec<FiberType> {
        let mut out: Vec<FiberType> = (1..=max_euler).map(FiberType::I).collect();
        out.extend([FiberType::II, FiberType::III, FiberType::IV]);
        out.extend((0..=max_euler.saturating_sub(6)).map(FiberType::IStar));
        out.extend([FiberType::IVStar, FiberType::IIIStar, FiberType::IIStar]);
        out.retain(|t| t.euler() <= max_euler);
        out.sort();
        out
    }
}

/// Fiber data of `t`.
pub fn fiber_data(t: FiberType) -> FiberData {
    t.data()
}

impl Ord for FiberType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for FiberType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::I(nu) => write!(f, "I{nu}"),
            FiberType::II => f.write_str("II"),
            FiberType::III => f.write_str("III"),
            FiberType::IV => f.write_str("IV"),
            FiberType::IStar(nu) => write!(f, "I{nu}*"),
            FiberType::IVStar => f.write_str("IV*"),
            FiberType::IIIStar => f.write_str("III*"),
            FiberType::IIStar => f.write_str("II*"),
        }
    }
}

impl FromStr for FiberType {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        p.skip_ws();
        let t = p.fiber_type()?;
        p.skip_ws();
        if p.pos < s.len() {
            return Err(ParseError::new(p.pos, ParseErrorKind::Trailing));
        }
        Ok(t)
    }
}

impl Serialize for FiberType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FiberType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A multiset of singular fiber types, kept in canonical order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    entries: BTreeMap<FiberType, u32>,
}

impl Configuration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I>(entries: I) -> Result<Self, KodairaError>
    where
        I: IntoIterator<Item = (FiberType, u32)>,
    {
        let mut c = Self::new();
        for (t, k) in entries {
            c.add(t, k)?;
        }
        Ok(c)
    }

    pub fn add(&mut self, t: FiberType, k: u32) -> Result<(), KodairaError> {
        if !t.is_valid() {
            return Err(KodairaError::InvalidFiberType(t.to_string()));
        }
        if k > 0 {
            *self.entries.entry(t).or_insert(0) += k;
        }
        Ok(())
    }

    /// Adds one fiber; `Fiber::Smooth` is ignored.
    pub fn add_fiber(&mut self, f: Fiber, k: u32) {
        if let Fiber::Singular(t) = f {
            self.add(t, k).expect("singular fibers are valid");
        }
    }

    fn remove(&mut self, t: FiberType, k: u32) -> Result<(), KodairaError> {
        let available = self.count(t);
        if available < k {
            return Err(KodairaError::FlipNotPresent {
                fiber: t,
                available,
            });
        }
        if available == k {
            self.entries.remove(&t);
        } else {
            self.entries.insert(t, available - k);
        }
        Ok(())
    }

    pub fn count(&self, t: FiberType) -> u32 {
        self.entries.get(&t).copied().unwrap_or(0)
    }

    /// `(type, count)` pairs in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (FiberType, u32)> + '_ {
        self.entries.iter().map(|(&t, &k)| (t, k))
    }

    /// Fiber types repeated by multiplicity, in canonical order.
    pub fn fibers(&self) -> impl Iterator<Item = FiberType> + '_ {
        self.entries()
            .flat_map(|(t, k)| std::iter::repeat_n(t, k as usize))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn singular_fibers(&self) -> u64 {
        self.entries.values().map(|&k| u64::from(k)).sum()
    }

    pub fn euler_sum(&self) -> u64 {
        self.entries()
            .map(|(t, k)| u64::from(t.euler()) * u64::from(k))
            .sum()
    }

    pub fn multiplicative_fibers(&self) -> u64 {
        self.count_where(FiberType::is_multiplicative)
    }

    pub fn additive_fibers(&self) -> u64 {
        self.count_where(FiberType::is_additive)
    }

    pub fn count_where(&self, pred: impl Fn(FiberType) -> bool) -> u64 {
        self.entries()
            .filter(|(t, _)| pred(*t))
            .map(|(_, k)| u64::from(k))
            .sum()
    }

    pub fn is_multiplicative_only(&self) -> bool {
        self.entries.keys().all(|t| t.is_multiplicative())
    }

    /// Whether some fiber forces a non-constant `j`.
    pub fn has_nonconstant_j(&self) -> bool {
        self.entries.keys().any(|t| t.has_pole())
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (t, k) in self.entries() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if k == 1 {
                write!(f, "{t}")?;
            } else {
                write!(f, "{k}*{t}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Configuration {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_config(s)
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Returns `n` if the Euler numbers sum to `12n` with `n ≥ 1`.
pub fn noether_check(c: &Configuration) -> Result<u64, KodairaError> {
    let euler = c.euler_sum();
    if euler == 0 || euler % 12 != 0 {
        return Err(KodairaError::NotMultipleOf12 { euler });
    }
    Ok(euler / 12)
}

/// Rank of the trivial lattice: zero section, a fiber, and the fiber
/// components missing the zero section.
pub fn rho_tr(c: &Configuration) -> u64 {
    let rank = 2 + c
        .entries()
        .map(|(t, k)| u64::from(t.components() - 1) * u64::from(k))
        .sum::<u64>();
    if let Ok(n) = noether_check(c) {
        debug_assert_eq!(
            rank,
            2 + 12 * n - c.multiplicative_fibers() - 2 * c.additive_fibers()
        );
    }
    rank
}

/// Quadratic twist at the places listed in `flips` plus `extra_smooth`
/// places with smooth fibers. The total number of places must be even.
pub fn twist_config(
    c: &Configuration,
    flips: &Configuration,
    extra_smooth: u32,
) -> Result<Configuration, KodairaError> {
    let places = flips.singular_fibers() + u64::from(extra_smooth);
    if places % 2 == 1 {
        return Err(KodairaError::OddPlaceCount(places));
    }
    let mut out = c.clone();
    for (t, k) in flips.entries() {
        out.remove(t, k)?;
    }
    for (t, k) in flips.entries() {
        out.add_fiber(t.twist_dual(), k);
    }
    out.add_fiber(Fiber::Smooth.twist(), extra_smooth);
    if out.is_empty() {
        return Err(KodairaError::TrivialTwist);
    }
    debug_assert!(noether_check(&out).is_ok() || noether_check(c).is_err());
    Ok(out)
}

/// Filters for [`enumerate_configs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EnumerateOptions {
    pub min_fibers: usize,
    pub max_fibers: Option<usize>,
    pub multiplicative_only: bool,
}

impl EnumerateOptions {
    pub fn exactly(fibers: usize) -> Self {
        Self {
            min_fibers: fibers,
            max_fibers: Some(fibers),
            multiplicative_only: false,
        }
    }

    pub fn multiplicative(mut self) -> Self {
        self.multiplicative_only = true;
        self
    }
}

/// Lazily enumerates configurations with `n(C) = n` in canonical order
/// (lexicographic on the canonically sorted fiber sequence).
#[derive(Debug, Clone)]
pub struct ConfigEnumerator {
    types: Vec<FiberType>,
    target: u64,
    options: EnumerateOptions,
    seq: Vec<usize>,
    sum: u64,
    state: EnumState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EnumState {
    Extend(usize),
    Backtrack,
    Done,
}

impl ConfigEnumerator {
    pub fn new(n: u64, options: EnumerateOptions) -> Self {
        let target = 12 * n;
        let max_euler = u32::try_from(target).unwrap_or(u32::MAX);
        let mut types = FiberType::all_up_to(max_euler);
        if options.multiplicative_only {
            types.retain(|t| t.is_multiplicative());
        }
        let state = if n == 0 {
            EnumState::Done
        } else {
            EnumState::Extend(0)
        };
        Self {
            types,
            target,
            options,
            seq: Vec::new(),
            sum: 0,
            state,
        }
    }

    /// Resumes enumeration right after `cursor`.
    pub fn resume_after(n: u64, options: EnumerateOptions, cursor: &Configuration) -> Self {
        let mut e = Self::new(n, options);
        if e.state == EnumState::Done {
            return e;
        }
        let mut seq = Vec::new();
        for t in cursor.fibers() {
            match e.types.iter().position(|&u| u == t) {
                Some(i) => seq.push(i),
                None => {
                    // cursor outside this enumeration: resume at the first larger sequence
                    break;
                }
            }
        }
        e.sum = seq.iter().map(|&i| u64::from(e.types[i].euler())).sum();
        e.seq = seq;
        e.state = EnumState::Backtrack;
        e
    }

    fn max_len(&self) -> usize {
        self.options.max_fibers.unwrap_or(usize::MAX)
    }

    fn current(&self) -> Configuration {
        let mut c = Configuration::new();
        for &i in &self.seq {
            c.add(self.types[i], 1).expect("valid");
        }
        c
    }
}

impl Iterator for ConfigEnumerator {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        loop {
            match self.state {
                EnumState::Done => return None,
                EnumState::Backtrack => match self.seq.pop() {
                    None => self.state = EnumState::Done,
                    Some(i) => {
                        self.sum -= u64::from(self.types[i].euler());
                        self.state = EnumState::Extend(i + 1);
                    }
                },
                EnumState::Extend(from) => {
                    if self.seq.len() >= self.max_len() {
                        self.state = EnumState::Backtrack;
                        continue;
                    }
                    let room = self.target - self.sum;
                    let pick = (from..self.types.len())
                        .find(|&i| u64::from(self.types[i].euler()) <= room);
                    match pick {
                        None => self.state = EnumState::Backtrack,
                        Some(i) => {
                            self.seq.push(i);
                            self.sum += u64::from(self.types[i].euler());
                            if self.sum == self.target {
                                self.state = EnumState::Backtrack;
                                if self.seq.len() >= self.options.min_fibers {
                                    return Some(self.current());
                                }
                            } else {
                                self.state = EnumState::Extend(i);
                            }
                        }
                    }
                }
            }
        }
    }
}

/// All configurations with `n(C) = n` passing `options`, lazily.
pub fn enumerate_configs(n: u64, options: EnumerateOptions) -> ConfigEnumerator {
    ConfigEnumerator::new(n, options)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(offset: usize, kind: ParseErrorKind) -> Self {
        Self { offset, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    /// A `+` with no fiber term after it.
    DanglingPlus,
    ExpectedTerm,
    ExpectedPlus,
    BadCount,
    UnknownFiberType(String),
    Trailing,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Empty => f.write_str("empty configuration"),
            ParseErrorKind::DanglingPlus => f.write_str("'+' is not followed by a fiber term"),
            ParseErrorKind::ExpectedTerm => f.write_str("expected a fiber term"),
            ParseErrorKind::ExpectedPlus => f.write_str("expected '+'"),
            ParseErrorKind::BadCount => f.write_str("multiplicity must be a positive integer"),
            ParseErrorKind::UnknownFiberType(s) => write!(f, "unknown fiber type {s:?}"),
            ParseErrorKind::Trailing => f.write_str("unexpected trailing input"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> Option<(usize, &'a str)> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| (start, &self.src[start..self.pos]))
    }

    fn starts_term(&self) -> bool {
        self.peek().is_some_and(|b| b.is_ascii_alphanumeric())
    }

    fn fiber_type(&mut self) -> Result<FiberType, ParseError> {
        let start = self.pos;
        // the longest run that could be a type name
        let mut end = start;
        while end < self.bytes.len() && self.bytes[end].is_ascii_alphanumeric() {
            end += 1;
        }
        let starred = self.bytes.get(end) == Some(&b'*');
        let word = &self.src[start..end];
        let unknown = || {
            let shown = if starred {
                format!("{word}*")
            } else {
                word.to_string()
            };
            ParseError::new(start, ParseErrorKind::UnknownFiberType(shown))
        };
        let t = match word {
            "II" if starred => FiberType::IIStar,
            "III" if starred => FiberType::IIIStar,
            "IV" if starred => FiberType::IVStar,
            "II" => FiberType::II,
            "III" => FiberType::III,
            "IV" => FiberType::IV,
            _ => {
                let nu = word
                    .strip_prefix('I')
                    .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                    .and_then(|d| d.parse::<u32>().ok())
                    .ok_or_else(unknown)?;
                match (nu, starred) {
                    (0, false) => return Err(unknown()),
                    (_, false) => FiberType::I(nu),
                    (_, true) => FiberType::IStar(nu),
                }
            }
        };
        self.pos = end + usize::from(starred);
        Ok(t)
    }

    fn term(&mut self) -> Result<(FiberType, u32), ParseError> {
        let start = self.pos;
        if let Some((at, text)) = self.digits() {
            let save = self.pos;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                let k: u32 = text
                    .parse()
                    .ok()
                    .filter(|&k| k > 0)
                    .ok_or_else(|| ParseError::new(at, ParseErrorKind::BadCount))?;
                self.pos += 1;
                self.skip_ws();
                if !self.starts_term() {
                    return Err(ParseError::new(self.pos, ParseErrorKind::ExpectedTerm));
                }
                return Ok((self.fiber_type()?, k));
            }
            self.pos = save;
            return Err(ParseError::new(
                start,
                ParseErrorKind::UnknownFiberType(text.to_string()),
            ));
        }
        if !self.starts_term() {
            return Err(ParseError::new(self.pos, ParseErrorKind::ExpectedTerm));
        }
        Ok((self.fiber_type()?, 1))
    }
}

/// Parses `"k*TYPE + TYPE + …"`; whitespace between tokens is ignored.
pub fn parse_config(text: &str) -> Result<Configuration, ParseError> {
    let mut p = Parser::new(text);
    p.skip_ws();
    if p.peek().is_none() {
        return Err(ParseError::new(0, ParseErrorKind::Empty));
    }
    let mut c = Configuration::new();
    loop {
        let (t, k) = p.term()?;
        c.add(t, k).expect("parser yields valid types");
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b'+') => {
                let plus = p.pos;
                p.pos += 1;
                p.skip_ws();
                if !p.starts_term() {
                    return Err(ParseError::new(plus, ParseErrorKind::DanglingPlus));
                }
            }
            Some(_) => return Err(ParseError::new(p.pos, ParseErrorKind::ExpectedPlus)),
        }
    }
    Ok(c)
}
