//! The graded ring `A = Q[x, y, z, w]` with weights `(1, 1, 2n, 3n)` and the
//! Jacobian ideal of `F = -w² + z³ + P z + Q`.
//!
//! `B = Q[x, y]`. The truncation `Ã` is the `B`-submodule generated by
//! `A_{≤6n}`, free on the seven monomials `z^c w^e` with `2c + 3e ≤ 6`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Echelon};
use crate::poly::{q, QPoly, Q};
use crate::weierstrass::{self, BinaryForm, WeierstrassError, WeierstrassModel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JacobiError {
    #[error("j-invariant is constant")]
    ConstantJ,
    #[error("subspace does not contain J in degree {0}")]
    MissingJacobian(usize),
    #[error("polynomial {index} is not homogeneous of degree {expected}")]
    WrongDegree { index: usize, expected: usize },
    #[error(transparent)]
    Model(#[from] WeierstrassError),
}

/// Exponents of `x, y, z, w`.
pub type Exponents = [u32; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct WeightedMonomial {
    pub exps: Exponents,
    pub n: usize,
}

impl WeightedMonomial {
    pub fn degree(&self) -> usize {
        weighted_degree(self.exps, self.n)
    }
}

pub fn weighted_degree(e: Exponents, n: usize) -> usize {
    e[0] as usize + e[1] as usize + 2 * n * e[2] as usize + 3 * n * e[3] as usize
}

/// The `z^c w^e` parts of the generators of `Ã`: `1, z, z², z³, w, zw, w²`.
pub const TILDE_GENERATORS: [(u32, u32); 7] =
    [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (0, 2)];

/// All monomials of weighted degree `d`, ordered by `w`, then `z`
/// exponent ascending, then `x` exponent descending.
pub fn monomial_basis(n: usize, d: usize) -> Vec<Exponents> {
    let mut out = Vec::new();
    let mut e = 0;
    while 3 * n * e <= d {
        let mut c = 0;
        while 3 * n * e + 2 * n * c <= d {
            let rest = d - 3 * n * e - 2 * n * c;
            for a in (0..=rest).rev() {
                out.push([a as u32, (rest - a) as u32, c as u32, e as u32]);
            }
            c += 1;
        }
        e += 1;
    }
    out
}

/// Monomials of `Ã` in degree `d`.
pub fn tilde_basis(n: usize, d: usize) -> Vec<Exponents> {
    monomial_basis(n, d)
        .into_iter()
        .filter(|m| TILDE_GENERATORS.contains(&(m[2], m[3])))
        .collect()
}

/// Sparse polynomial in `A`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WPoly {
    terms: BTreeMap<Exponents, Q>,
}

impl WPoly {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, e: Exponents, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// `f(x, y) z^c w^e` scaled by `k`.
    pub fn from_form(f: &BinaryForm, c: u32, e: u32, k: &Q) -> Self {
        let mut out = Self::new();
        let deg = f.degree() as u32;
        for (i, coef) in f.coeffs().iter().enumerate() {
            out.add_term([i as u32, deg - i as u32, c, e], coef * k);
        }
        out
    }

    pub fn plus(mut self, other: &Self) -> Self {
        for (e, c) in &other.terms {
            self.add_term(*e, c.clone());
        }
        self
    }

    pub fn times_monomial(&self, m: Exponents) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    (
                        [e[0] + m[0], e[1] + m[1], e[2] + m[2], e[3] + m[3]],
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common weighted degree of all terms, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self, n: usize) -> Option<usize> {
        let mut degs = self.terms.keys().map(|&e| weighted_degree(e, n));
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    /// Coordinates in a basis; `None` if some term lies outside it.
    pub fn coordinates(&self, index: &HashMap<Exponents, usize>) -> Option<Vec<Q>> {
        let mut v = vec![Q::zero(); index.len()];
        for (e, c) in &self.terms {
            v[*index.get(e)?] = c.clone();
        }
        Some(v)
    }
}

fn index_of(basis: &[Exponents]) -> HashMap<Exponents, usize> {
    basis.iter().enumerate().map(|(i, &m)| (m, i)).collect()
}

/// `F_x, F_y, F_z, F_w` with their weighted degrees.
pub fn partials(m: &WeierstrassModel) -> [(WPoly, usize); 4] {
    let n = m.n();
    let one = q(1);
    let (p, qq) = (m.p(), m.q());
    let fx = WPoly::from_form(&p.dx(), 1, 0, &one).plus(&WPoly::from_form(&qq.dx(), 0, 0, &one));
    let fy = WPoly::from_form(&p.dy(), 1, 0, &one).plus(&WPoly::from_form(&qq.dy(), 0, 0, &one));
    let mut fz = WPoly::from_form(p, 0, 0, &one);
    fz.add_term([0, 0, 2, 0], q(3));
    let mut fw = WPoly::new();
    fw.add_term([0, 0, 0, 1], q(-2));
    [(fx, 6 * n - 1), (fy, 6 * n - 1), (fz, 4 * n), (fw, 3 * n)]
}

/// Spanning set of `J_d`: every monomial multiple of a partial landing in degree `d`.
pub fn jacobian_span(m: &WeierstrassModel, d: usize) -> Vec<WPoly> {
    let n = m.n();
    let mut out = Vec::new();
    for (f, deg) in partials(m) {
        if deg > d || f.is_zero() {
            continue;
        }
        for mono in monomial_basis(n, d - deg) {
            out.push(f.times_monomial(mono));
        }
    }
    out
}

fn span_echelon(polys: &[WPoly], basis: &[Exponents]) -> Echelon {
    let index = index_of(basis);
    let mut e = Echelon::new(basis.len());
    for f in polys {
        e.insert(&f.coordinates(&index).expect("term in basis"));
    }
    e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GradedPiece {
    pub n: usize,
    pub d: usize,
    pub dim_a: usize,
    pub dim_j: usize,
    pub dim_r: usize,
}

pub fn jacobi_dims(m: &WeierstrassModel, d: usize) -> GradedPiece {
    let basis = monomial_basis(m.n(), d);
    let dim_j = span_echelon(&jacobian_span(m, d), &basis).rank();
    GradedPiece {
        n: m.n(),
        d,
        dim_a: basis.len(),
        dim_j,
        dim_r: basis.len() - dim_j,
    }
}

/// Seven generators of `J̃` written over the seven generators of `Ã`, as
/// a matrix of binary forms (rows: `w², wz, w, 3z³+Pz, 3z²+P, F_x, F_y`).
fn jtilde_matrix(m: &WeierstrassModel) -> Vec<Vec<BinaryForm>> {
    let (p, qq) = (m.p(), m.q());
    let col = |c: u32, e: u32| {
        TILDE_GENERATORS
            .iter()
            .position(|&g| g == (c, e))
            .expect("generator")
    };
    let zero_row = || vec![BinaryForm::zero(0); 7];
    let mut rows = Vec::new();
    for (c, e) in [(0, 2), (1, 1), (0, 1)] {
        let mut r = zero_row();
        r[col(c, e)] = BinaryForm::one();
        rows.push(r);
    }
    let mut r = zero_row();
    r[col(3, 0)] = BinaryForm::one().scale(&q(3));
    r[col(1, 0)] = p.clone();
    rows.push(r);
    let mut r = zero_row();
    r[col(2, 0)] = BinaryForm::one().scale(&q(3));
    r[col(0, 0)] = p.clone();
    rows.push(r);
    for (dp, dq) in [(p.dx(), qq.dx()), (p.dy(), qq.dy())] {
        let mut r = zero_row();
        r[col(1, 0)] = dp;
        r[col(0, 0)] = dq;
        rows.push(r);
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JTildeRank {
    pub rank: usize,
    /// Ranks at the random specialization points.
    pub specialized: Vec<usize>,
    /// Whether the exact computation over `Q(x)` was needed.
    pub symbolic: bool,
}

/// Rank of the `B`-module `J̃` inside `Ã`: 7 when `j` is non-constant, else 6.
pub fn jtilde_rank<R: Rng>(m: &WeierstrassModel, rng: &mut R) -> JTildeRank {
    let mat = jtilde_matrix(m);
    let specialized: Vec<usize> = (0..3)
        .map(|_| {
            let (x, y) = (q(rng.gen_range(-1000..=1000)), q(rng.gen_range(1..=1000)));
            let rows: Vec<Vec<Q>> = mat
                .iter()
                .map(|r| r.iter().map(|f| f.eval(&x, &y)).collect())
                .collect();
            linalg::rank(&rows)
        })
        .collect();
    let first = specialized[0];
    if specialized.iter().all(|&r| r == first) {
        return JTildeRank {
            rank: first,
            specialized,
            symbolic: false,
        };
    }
    let rows: Vec<Vec<QPoly>> = mat
        .iter()
        .map(|r| r.iter().map(BinaryForm::dehomogenize).collect())
        .collect();
    JTildeRank {
        rank: linalg::rank_over_rational_functions(rows),
        specialized,
        symbolic: true,
    }
}

/// For `k = 0..=k_max`, the codimension of `V · B_k` in `Ã_{6n+k}`.
pub fn codim_series(
    m: &WeierstrassModel,
    v: &[WPoly],
    k_max: usize,
) -> Result<Vec<usize>, JacobiError> {
    let n = m.n();
    let top = 6 * n;
    for (index, f) in v.iter().enumerate() {
        if !f.is_zero() && f.homogeneous_degree(n) != Some(top) {
            return Err(JacobiError::WrongDegree {
                index,
                expected: top,
            });
        }
    }
    if weierstrass::wronskian(m).is_zero() {
        return Err(JacobiError::ConstantJ);
    }
    let basis = monomial_basis(n, top);
    let index = index_of(&basis);
    let span = span_echelon(v, &basis);
    for f in jacobian_span(m, top) {
        if !span.contains(&f.coordinates(&index).expect("term in basis")) {
            return Err(JacobiError::MissingJacobian(top));
        }
    }
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let tb = tilde_basis(n, top + k);
        let products: Vec<WPoly> = v
            .iter()
            .flat_map(|f| (0..=k as u32).map(move |a| f.times_monomial([a, k as u32 - a, 0, 0])))
            .collect();
        let rank = span_echelon(&products, &tb).rank();
        out.push(tb.len() - rank);
    }
    Ok(out)
}

/// `J_{6n}` plus `extra` random vectors of `A_{6n}`.
pub fn random_subspace_over_jacobian<R: Rng>(
    m: &WeierstrassModel,
    extra: usize,
    rng: &mut R,
) -> Vec<WPoly> {
    let n = m.n();
    let basis = monomial_basis(n, 6 * n);
    let mut v = jacobian_span(m, 6 * n);
    for _ in 0..extra {
        let mut f = WPoly::new();
        for &mono in &basis {
            f.add_term(mono, q(rng.gen_range(-3..=3)));
        }
        v.push(f);
    }
    v
}

/// One term of a polynomial in the subspace JSON format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    #[serde(default)]
    pub x: u32,
    #[serde(default)]
    pub y: u32,
    #[serde(default)]
    pub z: u32,
    #[serde(default)]
    pub w: u32,
    pub c: String,
}

/// Parses a list of polynomials, each a list of terms.
pub fn parse_subspace(json: &str) -> Result<Vec<WPoly>, String> {
    let raw: Vec<Vec<TermJson>> = serde_json::from_str(json).map_err(|e| e.to_string())?;
    raw.into_iter()
        .map(|terms| {
            let mut f = WPoly::new();
            for t in terms {
                let c: Q = t
                    .c
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad rational {:?}", t.c))?;
                f.add_term([t.x, t.y, t.z, t.w], c);
            }
            Ok(f)
        })
        .collect()
}

pub fn subspace_to_json(v: &[WPoly]) -> Vec<Vec<TermJson>> {
    v.iter()
        .map(|f| {
            f.terms()
                .map(|(e, c)| TermJson {
                    x: e[0],
                    y: e[1],
                    z: e[2],
                    w: e[3],
                    c: c.to_string(),
                })
                .collect()
        })
        .collect()
}
