//! Permutations of `{1..d}`, cycle types, and a backtracking search for
//! monodromy tuples.
//!
//! A monodromy tuple for a degree `d` cover of the line branched over `m`
//! points is a sequence `(σ_1, …, σ_m)` of permutations with prescribed cycle
//! types, generating a transitive subgroup of `S_d`, whose product is the
//! identity. Products compose left to right: `σ·τ` first applies `σ`, then
//! `τ`, so the product condition reads `τ_m(…τ_2(τ_1(i))…) = i`.
//!
//! # Search order
//!
//! Every class of tuples under simultaneous conjugation contains tuples whose
//! last entry is the canonical representative of its cycle type (see
//! [`CycleType::canonical_representative`]). [`monodromy_search`] only looks
//! at those tuples and returns the least one when `(σ_1, …, σ_{m-1})` is
//! compared lexicographically by image vectors (`σ_1` first, then `σ_2`, …).
//! The answer does not depend on scheduling or on the memo cache.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest degree the search engine can represent.
pub const ENGINE_MAX_DEGREE: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("images do not form a bijection of 1..{0}")]
    NotBijection(usize),
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("cycle notation error at offset {offset}: {reason}")]
    Notation { offset: usize, reason: String },
    #[error("cycle type error: {0}")]
    CycleType(String),
}

/// A permutation of `{1..d}`, stored 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from 1-based images: `images[i-1]` is the image of `i`.
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        let d = images.len();
        if d == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; d];
        let mut zero_based = Vec::with_capacity(d);
        for &v in &images {
            if v == 0 || v > d || seen[v - 1] {
                return Err(PermError::NotBijection(d));
            }
            seen[v - 1] = true;
            zero_based.push(v - 1);
        }
        Ok(Self { images: zero_based })
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!(is_bijection(&images));
        Self { images }
    }

    pub fn identity(d: usize) -> Self {
        Self { images: (0..d).collect() }
    }

    /// Builds a permutation of degree `d` from disjoint 1-based cycles.
    pub fn from_cycles(d: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        if d == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut images: Vec<Option<usize>> = vec![None; d];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a == 0 || a > d || b == 0 || b > d || images[a - 1].is_some() {
                    return Err(PermError::NotBijection(d));
                }
                images[a - 1] = Some(b - 1);
            }
        }
        let images: Vec<usize> = images
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.unwrap_or(i))
            .collect();
        if !is_bijection(&images) {
            return Err(PermError::NotBijection(d));
        }
        Ok(Self { images })
    }

    /// Parses cycle notation such as `"(1 2)(3 4 5)"` for a permutation of degree `d`.
    /// The identity may be written `"()"`.
    pub fn parse_cycles(text: &str, d: usize) -> Result<Self, PermError> {
        let cycles = parse_cycle_notation(text)?;
        if let Some(max) = cycles.iter().flatten().max() {
            if *max > d {
                return Err(PermError::Notation {
                    offset: 0,
                    reason: format!("point {max} exceeds degree {d}"),
                });
            }
        }
        Self::from_cycles(d, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    /// 1-based image vector.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }

    pub(crate) fn raw(&self) -> &[usize] {
        &self.images
    }

    /// Left-to-right product: apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: self.images.iter().map(|&v| other.images[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    /// `g⁻¹·self·g`, i.e. the relabelling of `self` along `g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Disjoint cycles in 1-based notation, each starting at its least point,
    /// ordered by that point. Fixed points are included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_sorted_unchecked(self.cycles().iter().map(Vec::len).collect())
    }

    /// Parity of `d - #cycles`, which is the sign exponent.
    pub fn is_even(&self) -> bool {
        (self.degree() - self.cycles().len()) % 2 == 0
    }
}

fn is_bijection(images: &[usize]) -> bool {
    let mut seen = vec![false; images.len()];
    for &v in images {
        if v >= images.len() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
            write!(f, "({})", body.join(" "))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in S_{}", self.degree())
    }
}

fn parse_cycle_notation(text: &str) -> Result<Vec<Vec<usize>>, PermError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut cycles = Vec::new();
    let err = |offset: usize, reason: &str| PermError::Notation {
        offset,
        reason: reason.to_string(),
    };
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos == bytes.len() {
            break;
        }
        if bytes[pos] != b'(' {
            return Err(err(pos, "expected '('"));
        }
        pos += 1;
        let mut cycle = Vec::new();
        loop {
            while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b',') {
                pos += 1;
            }
            if pos == bytes.len() {
                return Err(err(pos, "unterminated cycle"));
            }
            if bytes[pos] == b')' {
                pos += 1;
                break;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(err(pos, "expected a point number"));
            }
            let value: usize = text[start..pos]
                .parse()
                .map_err(|_| err(start, "point number out of range"))?;
            if value == 0 {
                return Err(err(start, "points are numbered from 1"));
            }
            cycle.push(value);
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
    }
    Ok(cycles)
}

/// A partition of `d`, stored with parts sorted in descending order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Result<Self, PermError> {
        if parts.is_empty() {
            return Err(PermError::CycleType("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(PermError::CycleType("parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    fn from_sorted_unchecked(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    /// The cycle type `(2,1,…,1)` of a transposition in degree `d`.
    pub fn transposition(d: usize) -> Self {
        assert!(d >= 2);
        let mut parts = vec![1; d - 1];
        parts[0] = 2;
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts (cycles), fixed points included.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `d - #parts`: the number of transpositions needed to write an element of this type.
    pub fn index(&self) -> usize {
        self.degree() - self.len()
    }

    /// The representative `(1 … λ_1)(λ_1+1 … λ_1+λ_2)…`, cycles laid out
    /// consecutively in descending part order.
    pub fn canonical_representative(&self) -> Permutation {
        let d = self.degree();
        let mut images = vec![0; d];
        let mut start = 0;
        for &len in &self.parts {
            for k in 0..len {
                images[start + k] = start + (k + 1) % len;
            }
            start += len;
        }
        Permutation { images }
    }

    /// Multiplicity of each cycle length, indexed by length.
    pub(crate) fn length_counts(&self) -> Vec<u8> {
        let mut counts = vec![0u8; self.degree() + 1];
        for &p in &self.parts {
            counts[p] += 1;
        }
        counts
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "[{}]", body.join(","))
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CycleType {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| PermError::CycleType(format!("expected \"[a,b,…]\", got {s:?}")))?;
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| PermError::CycleType(format!("bad part {p:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        CycleType::new(parts)
    }
}

impl Serialize for CycleType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycleType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(deserializer)?;
        CycleType::new(parts).map_err(serde::de::Error::custom)
    }
}

pub fn cycle_type(p: &Permutation) -> CycleType {
    p.cycle_type()
}

/// Whether the group generated by `tuple` acts transitively on `{1..d}`.
pub fn is_transitive(tuple: &[Permutation], d: usize) -> bool {
    let mut uf = UnionFind::new(d);
    for p in tuple {
        assert_eq!(p.degree(), d, "degree mismatch");
        for (i, &v) in p.raw().iter().enumerate() {
            uf.union(i, v);
        }
    }
    uf.components() <= 1
}

struct UnionFind {
    parent: Vec<usize>,
    count: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            count: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
            self.count -= 1;
        }
    }

    fn components(&self) -> usize {
        self.count
    }
}

/// A tuple of permutations certifying a branched cover of the line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonodromyWitness {
    tuple: Vec<Permutation>,
}

impl MonodromyWitness {
    /// Validates the product and transitivity conditions.
    pub fn new(tuple: Vec<Permutation>) -> Option<Self> {
        let d = tuple.first()?.degree();
        if tuple.len() < 2 || tuple.iter().any(|p| p.degree() != d) {
            return None;
        }
        let w = Self { tuple };
        (w.product_is_identity() && w.is_transitive()).then_some(w)
    }

    pub fn tuple(&self) -> &[Permutation] {
        &self.tuple
    }

    pub fn degree(&self) -> usize {
        self.tuple[0].degree()
    }

    pub fn cycle_types(&self) -> Vec<CycleType> {
        self.tuple.iter().map(Permutation::cycle_type).collect()
    }

    pub fn product_is_identity(&self) -> bool {
        self.tuple
            .iter()
            .fold(Permutation::identity(self.degree()), |acc, p| acc.then(p))
            .is_identity()
    }

    pub fn is_transitive(&self) -> bool {
        is_transitive(&self.tuple, self.degree())
    }

    /// Diagonal conjugation by `g`.
    pub fn conjugate_by(&self, g: &Permutation) -> MonodromyWitness {
        MonodromyWitness {
            tuple: self.tuple.iter().map(|p| p.conjugate_by(g)).collect(),
        }
    }

    /// Cycle-notation strings, one per branch point.
    pub fn to_cycle_strings(&self) -> Vec<String> {
        self.tuple.iter().map(Permutation::to_string).collect()
    }

    /// A labelling-independent key: two transitive tuples are simultaneously
    /// conjugate exactly when their keys agree.
    pub fn conjugacy_key(&self) -> Vec<u8> {
        let raws: Vec<&[usize]> = self.tuple.iter().map(|p| p.raw()).collect();
        conjugacy_key(&raws, self.degree())
    }
}

/// Relabels points in breadth-first order from each possible start point,
/// following generators in tuple order, and keeps the least relabelled tuple.
fn conjugacy_key(tuple: &[&[usize]], d: usize) -> Vec<u8> {
    let mut best: Option<Vec<u8>> = None;
    let mut label = vec![usize::MAX; d];
    let mut order = Vec::with_capacity(d);
    for start in 0..d {
        label.iter_mut().for_each(|l| *l = usize::MAX);
        order.clear();
        label[start] = 0;
        order.push(start);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for g in tuple {
                let y = g[x];
                if label[y] == usize::MAX {
                    label[y] = order.len();
                    order.push(y);
                }
            }
        }
        if order.len() < d {
            // intransitive tuples get a key from their raw images
            return tuple.iter().flat_map(|g| g.iter().map(|&v| v as u8)).collect();
        }
        let mut key = Vec::with_capacity(tuple.len() * d);
        for g in tuple {
            for &x in &order {
                key.push(label[g[x]] as u8);
            }
        }
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    best.unwrap_or_default()
}

/// Limits for the exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Largest degree searched exhaustively.
    pub max_degree: usize,
    /// Number of search-tree nodes after which the search gives up.
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_degree: 13,
            max_nodes: 50_000_000,
        }
    }
}

impl SearchBudget {
    pub fn with_max_degree(max_degree: usize) -> Self {
        Self {
            max_degree,
            ..Self::default()
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("profile {index} is a partition of {found}, expected {degree}")]
    DegreeMismatch {
        index: usize,
        found: usize,
        degree: usize,
    },
    #[error("at least two branch points are required, got {0}")]
    TooFewPoints(usize),
    #[error("degree {degree} exceeds the search budget of {max_degree}")]
    DegreeTooLarge { degree: usize, max_degree: usize },
    #[error("search gave up after {0} nodes without a verdict")]
    NodeBudgetExhausted(u64),
}

impl SearchError {
    /// Whether the failure means "undecided" rather than "malformed input".
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            SearchError::DegreeTooLarge { .. } | SearchError::NodeBudgetExhausted(_)
        )
    }
}

/// Finds the least monodromy tuple (see the module docs for the order) with
/// the given cycle types, or `None` if none exists.
pub fn monodromy_search(
    d: usize,
    profiles: &[CycleType],
    budget: &SearchBudget,
) -> Result<Option<MonodromyWitness>, SearchError> {
    let mut engine = match Engine::prepare(d, profiles, budget)? {
        Some(engine) => engine,
        None => return Ok(None),
    };
    let mut found = None;
    engine.run(&mut |tuple| {
        found = Some(tuple.to_vec());
        false
    })?;
    Ok(found.map(|raw| MonodromyWitness {
        tuple: raw
            .into_iter()
            .map(|p| Permutation::from_zero_based(p[..d].iter().map(|&v| v as usize).collect()))
            .collect(),
    }))
}

/// Number of classes of monodromy tuples with the given cycle types under
/// simultaneous conjugation.
pub fn count_classes(
    d: usize,
    profiles: &[CycleType],
    budget: &SearchBudget,
) -> Result<usize, SearchError> {
    let mut engine = match Engine::prepare(d, profiles, budget)? {
        Some(engine) => engine,
        None => return Ok(0),
    };
    let mut keys = HashSet::new();
    engine.run(&mut |tuple| {
        let raws: Vec<Vec<usize>> = tuple
            .iter()
            .map(|p| p[..d].iter().map(|&v| v as usize).collect())
            .collect();
        let refs: Vec<&[usize]> = raws.iter().map(Vec::as_slice).collect();
        keys.insert(conjugacy_key(&refs, d));
        true
    })?;
    Ok(keys.len())
}

type Raw = [u8; ENGINE_MAX_DEGREE];

const MEMO_LIMIT: usize = 4_000_000;

/// Partial permutation with open-path bookkeeping for cycle-type pruning.
#[derive(Clone, Copy)]
struct Partial {
    image: Raw,
    // head of the open path ending at a tail point
    head: Raw,
    // tail of the open path starting at a head point
    tail: Raw,
    // length of the open path starting at a head point
    len: Raw,
    // remaining cycles per length
    need: Raw,
    has_pre: u32,
}

const UNSET: u8 = u8::MAX;

impl Partial {
    fn new(d: usize, lengths: &[u8]) -> Self {
        let mut p = Partial {
            image: [UNSET; ENGINE_MAX_DEGREE],
            head: [0; ENGINE_MAX_DEGREE],
            tail: [0; ENGINE_MAX_DEGREE],
            len: [0; ENGINE_MAX_DEGREE],
            need: [0; ENGINE_MAX_DEGREE],
            has_pre: 0,
        };
        for i in 0..d {
            p.head[i] = i as u8;
            p.tail[i] = i as u8;
            p.len[i] = 1;
        }
        for (l, &c) in lengths.iter().enumerate().skip(1) {
            p.need[l - 1] = c;
        }
        p
    }

    fn is_free_target(&self, v: usize) -> bool {
        self.has_pre & (1 << v) == 0
    }

    fn max_need(&self, d: usize) -> usize {
        (1..=d).rev().find(|&l| self.need[l - 1] > 0).unwrap_or(0)
    }

    /// Assigns `i ↦ v`; `i` has no image yet and `v` no preimage.
    /// Returns false if the partial cycle structure can no longer complete
    /// to the required type.
    fn assign(&mut self, i: usize, v: usize, d: usize) -> bool {
        debug_assert!(self.image[i] == UNSET && self.is_free_target(v));
        self.image[i] = v as u8;
        self.has_pre |= 1 << v;
        let h = self.head[i] as usize;
        if h == v {
            let l = self.len[h] as usize;
            if self.need[l - 1] == 0 {
                return false;
            }
            self.need[l - 1] -= 1;
            true
        } else {
            let t = self.tail[v] as usize;
            let l = self.len[h] as usize + self.len[v] as usize;
            self.head[t] = h as u8;
            self.tail[h] = t as u8;
            self.len[h] = l as u8;
            l <= self.max_need(d)
        }
    }
}

enum Level {
    /// Enumerate a permutation of the given type.
    Free(Vec<u8>),
    /// The last two free positions, solved jointly against the target.
    Pair(Vec<u8>, Vec<u8>),
    /// A single free position, forced to equal the target.
    Forced(CycleType),
}

struct Engine {
    d: usize,
    levels: Vec<Level>,
    // d - #parts summed over positions >= j
    remaining_index: Vec<usize>,
    last: Raw,
    last_inv: Raw,
    budget: SearchBudget,
    nodes: u64,
    witnesses: u64,
    memo: HashSet<(u8, Raw, Raw)>,
    use_memo: bool,
}

impl Engine {
    /// Validates input. Returns `None` when a cheap obstruction already rules
    /// out every tuple.
    fn prepare(
        d: usize,
        profiles: &[CycleType],
        budget: &SearchBudget,
    ) -> Result<Option<Self>, SearchError> {
        if profiles.len() < 2 {
            return Err(SearchError::TooFewPoints(profiles.len()));
        }
        for (index, p) in profiles.iter().enumerate() {
            if p.degree() != d {
                return Err(SearchError::DegreeMismatch {
                    index,
                    found: p.degree(),
                    degree: d,
                });
            }
        }
        if d > budget.max_degree || d > ENGINE_MAX_DEGREE {
            return Err(SearchError::DegreeTooLarge {
                degree: d,
                max_degree: budget.max_degree.min(ENGINE_MAX_DEGREE),
            });
        }
        let total_index: usize = profiles.iter().map(CycleType::index).sum();
        // sign of the product must be even
        if total_index % 2 == 1 {
            return Ok(None);
        }
        // a transitive group needs at least d-1 merges
        if total_index < 2 * (d - 1) {
            return Ok(None);
        }
        let (free, last) = profiles.split_at(profiles.len() - 1);
        let c = last[0].canonical_representative();
        let mut last_raw = [0u8; ENGINE_MAX_DEGREE];
        let mut last_inv = [0u8; ENGINE_MAX_DEGREE];
        for (i, &v) in c.raw().iter().enumerate() {
            last_raw[i] = v as u8;
            last_inv[v] = i as u8;
        }
        let mut levels = Vec::new();
        match free.len() {
            1 => levels.push(Level::Forced(free[0].clone())),
            f => {
                for p in &free[..f - 2] {
                    levels.push(Level::Free(p.length_counts()));
                }
                levels.push(Level::Pair(
                    free[f - 2].length_counts(),
                    free[f - 1].length_counts(),
                ));
            }
        }
        let mut remaining_index = vec![0; free.len() + 1];
        for j in (0..free.len()).rev() {
            remaining_index[j] = remaining_index[j + 1] + free[j].index();
        }
        Ok(Some(Self {
            d,
            levels,
            remaining_index,
            last: last_raw,
            last_inv,
            budget: *budget,
            nodes: 0,
            witnesses: 0,
            memo: HashSet::new(),
            use_memo: true,
        }))
    }

    /// Runs the depth-first search; `visit` receives each witness in order and
    /// returns whether to continue.
    fn run(&mut self, visit: &mut dyn FnMut(&[Raw]) -> bool) -> Result<(), SearchError> {
        let d = self.d;
        let mut identity = [0u8; ENGINE_MAX_DEGREE];
        for (i, slot) in identity.iter_mut().enumerate().take(d) {
            *slot = i as u8;
        }
        let blocks = self.blocks_with(&identity_blocks(d), &self.last.clone());
        let mut prefix = Vec::with_capacity(self.levels.len() + 2);
        self.descend(0, identity, blocks, &mut prefix, visit)?;
        Ok(())
    }

    fn tick(&mut self) -> Result<(), SearchError> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(SearchError::NodeBudgetExhausted(self.budget.max_nodes));
        }
        Ok(())
    }

    /// Block labels after joining `blocks` with the cycles of `perm`,
    /// relabelled by first occurrence.
    fn blocks_with(&self, blocks: &Raw, perm: &Raw) -> Raw {
        let d = self.d;
        let mut uf = UnionFind::new(d);
        let mut first = [UNSET; ENGINE_MAX_DEGREE];
        for i in 0..d {
            let b = blocks[i] as usize;
            if first[b] == UNSET {
                first[b] = i as u8;
            } else {
                uf.union(first[b] as usize, i);
            }
            uf.union(i, perm[i] as usize);
        }
        let mut out = [0u8; ENGINE_MAX_DEGREE];
        let mut names = [UNSET; ENGINE_MAX_DEGREE];
        let mut next = 0u8;
        for i in 0..d {
            let r = uf.find(i);
            if names[r] == UNSET {
                names[r] = next;
                next += 1;
            }
            out[i] = names[r];
        }
        out
    }

    fn block_count(&self, blocks: &Raw) -> usize {
        blocks[..self.d].iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    /// Target for the remaining free positions: `prefix⁻¹ · last⁻¹`.
    fn target(&self, product: &Raw) -> Raw {
        let mut inv = [0u8; ENGINE_MAX_DEGREE];
        for i in 0..self.d {
            inv[product[i] as usize] = i as u8;
        }
        let mut t = [0u8; ENGINE_MAX_DEGREE];
        for i in 0..self.d {
            t[i] = self.last_inv[inv[i] as usize];
        }
        t
    }

    fn cycle_count(&self, perm: &Raw) -> usize {
        let mut seen = 0u32;
        let mut count = 0;
        for s in 0..self.d {
            if seen & (1 << s) != 0 {
                continue;
            }
            count += 1;
            let mut x = s;
            while seen & (1 << x) == 0 {
                seen |= 1 << x;
                x = perm[x] as usize;
            }
        }
        count
    }

    fn feasible(&self, level: usize, product: &Raw, blocks: &Raw) -> bool {
        let budget = self.remaining_index[level];
        let t = self.target(product);
        let need = self.d - self.cycle_count(&t);
        if need > budget || (budget - need) % 2 == 1 {
            return false;
        }
        self.block_count(blocks) - 1 <= budget
    }

    fn descend(
        &mut self,
        level: usize,
        product: Raw,
        blocks: Raw,
        prefix: &mut Vec<Raw>,
        visit: &mut dyn FnMut(&[Raw]) -> bool,
    ) -> Result<bool, SearchError> {
        if !self.feasible(level, &product, &blocks) {
            return Ok(true);
        }
        let key = (level as u8, product, blocks);
        if self.use_memo && level > 0 && self.memo.contains(&key) {
            return Ok(true);
        }
        let before = prefix.len();
        let before_witnesses = self.witnesses;
        let keep_going = match &self.levels[level] {
            Level::Forced(ct) => {
                let ct = ct.clone();
                self.forced(&product, &blocks, &ct, prefix, visit)?
            }
            Level::Pair(a, b) => {
                let (a, b) = (a.clone(), b.clone());
                self.pair(&product, &blocks, &a, &b, prefix, visit)?
            }
            Level::Free(lengths) => {
                let lengths = lengths.clone();
                let partial = Partial::new(self.d, &lengths);
                self.free(level, 0, partial, &product, &blocks, prefix, visit)?
            }
        };
        debug_assert_eq!(prefix.len(), before);
        if self.witnesses == before_witnesses && self.use_memo {
            if self.memo.len() < MEMO_LIMIT {
                self.memo.insert(key);
            }
        }
        Ok(keep_going)
    }

    fn forced(
        &mut self,
        product: &Raw,
        blocks: &Raw,
        ct: &CycleType,
        prefix: &mut Vec<Raw>,
        visit: &mut dyn FnMut(&[Raw]) -> bool
    ) -> Result<bool, SearchError> {
        self.tick()?;
        let t = self.target(product);
        let perm = Permutation::from_zero_based(t[..self.d].iter().map(|&v| v as usize).collect());
        if perm.cycle_type() != *ct {
            return Ok(true);
        }
        let joined = self.blocks_with(blocks, &t);
        if self.block_count(&joined) != 1 {
            return Ok(true);
        }
        self.witnesses += 1;
        prefix.push(t);
        prefix.push(self.last);
        let cont = visit(prefix);
        prefix.truncate(prefix.len() - 2);
        Ok(cont)
    }

    #[allow(clippy::too_many_arguments)]
    fn free(
        &mut self,
        level: usize,
        i: usize,
        partial: Partial,
        product: &Raw,
        blocks: &Raw,
        prefix: &mut Vec<Raw>,
        visit: &mut dyn FnMut(&[Raw]) -> bool
    ) -> Result<bool, SearchError> {
        let d = self.d;
        if i == d {
            let sigma = partial.image;
            let mut next = [0u8; ENGINE_MAX_DEGREE];
            for x in 0..d {
                next[x] = sigma[product[x] as usize];
            }
            let joined = self.blocks_with(blocks, &sigma);
            prefix.push(sigma);
            let cont = self.descend(level + 1, next, joined, prefix, visit)?;
            prefix.pop();
            return Ok(cont);
        }
        for v in 0..d {
            if !partial.is_free_target(v) {
                continue;
            }
            self.tick()?;
            let mut p = partial;
            if !p.assign(i, v, d) {
                continue;
            }
            if !self.free(level, i + 1, p, product, blocks, prefix, visit)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    #[allow(clippy::too_many_arguments)]
    fn pair(
        &mut self,
        product: &Raw,
        blocks: &Raw,
        first: &[u8],
        second: &[u8],
        prefix: &mut Vec<Raw>,
        visit: &mut dyn FnMut(&[Raw]) -> bool
    ) -> Result<bool, SearchError> {
        let t = self.target(product);
        let a = Partial::new(self.d, first);
        let b = Partial::new(self.d, second);
        self.pair_step(0, a, b, &t, blocks, prefix, visit)
    }

    /// Fills `σ_a(i)` in increasing `i`; each choice forces `σ_b(σ_a(i)) = t(i)`.
    #[allow(clippy::too_many_arguments)]
    fn pair_step(
        &mut self,
        i: usize,
        a: Partial,
        b: Partial,
        t: &Raw,
        blocks: &Raw,
        prefix: &mut Vec<Raw>,
        visit: &mut dyn FnMut(&[Raw]) -> bool
    ) -> Result<bool, SearchError> {
        let d = self.d;
        if i == d {
            let joined = self.blocks_with(&self.blocks_with(blocks, &a.image), &b.image);
            if self.block_count(&joined) != 1 {
                return Ok(true);
            }
            self.witnesses += 1;
            prefix.push(a.image);
            prefix.push(b.image);
            prefix.push(self.last);
            let cont = visit(prefix);
            prefix.truncate(prefix.len() - 3);
            return Ok(cont);
        }
        let w = t[i] as usize;
        for v in 0..d {
            if !a.is_free_target(v) {
                continue;
            }
            self.tick()?;
            let mut a2 = a;
            if !a2.assign(i, v, d) {
                continue;
            }
            let mut b2 = b;
            if !b2.assign(v, w, d) {
                continue;
            }
            if !self.pair_step(i + 1, a2, b2, t, blocks, prefix, visit)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

}

fn identity_blocks(d: usize) -> Raw {
    let mut b = [0u8; ENGINE_MAX_DEGREE];
    for (i, slot) in b.iter_mut().enumerate().take(d) {
        *slot = i as u8;
    }
    b
}
