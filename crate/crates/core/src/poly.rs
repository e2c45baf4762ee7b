//! Dense univariate polynomials over Q and factorization into irreducibles.
//!
//! Factoring follows Zassenhaus: squarefree decomposition over Q, modular
//! factorization at a small prime, Hensel lifting past a Mignotte bound, and
//! recombination of the lifted factors by trial division.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Coefficients from low to high degree, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QPoly {
    coeffs: Vec<Q>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![Q::zero(), Q::one()])
    }

    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(Q::from_integer).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let inv = d.lead().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = &r[i] * &inv;
            for (j, dj) in d.coeffs.iter().enumerate() {
                let t = &c * dj;
                r[i - dd + j] -= t;
            }
            quot[i - dd] = c;
        }
        r.truncate(dd);
        (Self::new(quot), Self::new(r))
    }

    /// `self / d` when the division is exact.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (quot, r) = self.divrem(d);
        r.is_zero().then_some(quot)
    }

    /// How often `g` divides `self`; `None` for the zero polynomial.
    pub fn multiplicity(&self, g: &Self) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        assert!(g.degree().unwrap_or(0) > 0, "multiplicity of a constant");
        let mut f = self.clone();
        let mut k = 0;
        while let Some(next) = f.exact_div(g) {
            f = next;
            k += 1;
        }
        Some(k)
    }

    /// Monic gcd; zero only if both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Q::from_integer(den.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &content * &sign).collect()
    }

    pub fn primitive(&self) -> Self {
        Self::from_bigints(&self.primitive_integer())
    }

    /// Squarefree decomposition `self = c · ∏ f_i^i` with monic pairwise
    /// coprime squarefree `f_i`; only non-constant factors are returned.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = self.monic();
        let df = f.derivative();
        let a = f.gcd(&df);
        let mut b = f.exact_div(&a).expect("gcd divides");
        let mut c = df.exact_div(&a).expect("gcd divides");
        let mut out = Vec::new();
        let mut i = 1;
        loop {
            let d = &c - &b.derivative();
            if b.degree() == Some(0) {
                break;
            }
            let g = b.gcd(&d);
            if g.degree().unwrap_or(0) > 0 {
                out.push((g.clone(), i));
            }
            b = b.exact_div(&g).expect("gcd divides");
            c = d.exact_div(&g).expect("gcd divides");
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> Self {
        self.squarefree_decomposition()
            .into_iter()
            .fold(Self::one(), |acc, (g, _)| &acc * &g)
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree_decomposition().iter().all(|&(_, i)| i == 1)
    }

    /// Factors into irreducibles: primitive integer polynomials with positive
    /// leading coefficient, with multiplicities, sorted by degree then
    /// coefficients. Constants are dropped.
    pub fn factor(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        for (part, mult) in self.squarefree_decomposition() {
            for g in zassenhaus(&part.primitive_integer()) {
                out.push((Self::from_bigints(&g), mult));
            }
        }
        out.sort_by(|a, b| {
            a.0.coeffs
                .len()
                .cmp(&b.0.coeffs.len())
                .then_with(|| a.0.coeffs.iter().rev().cmp(b.0.coeffs.iter().rev()))
        });
        out
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Arithmetic in `F_p[x]` for word-sized primes, coefficients low to high.
mod fp {
    use super::*;

    pub type Poly = Vec<u64>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1 % p;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow_mod(a, p - 2, p)
    }

    pub fn reduce(f: &[BigInt], p: u64) -> Poly {
        let pb = BigInt::from(p);
        trim(
            f.iter()
                .map(|c| c.mod_floor(&pb).to_u64().expect("reduced"))
                .collect(),
        )
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
        assert!(!b.is_empty());
        let db = b.len() - 1;
        let mut r = a.to_vec();
        if r.len() <= db {
            return (Vec::new(), trim(r));
        }
        let inv_lead = inv(b[db], p);
        let mut quot = vec![0u64; r.len() - db];
        for i in (db..r.len()).rev() {
            if r[i] == 0 {
                continue;
            }
            let c = r[i] * inv_lead % p;
            quot[i - db] = c;
            for (j, &bj) in b.iter().enumerate() {
                r[i - db + j] = (r[i - db + j] + p - c * bj % p) % p;
            }
        }
        r.truncate(db);
        (trim(quot), trim(r))
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
        divrem(a, b, p).1
    }

    pub fn monic(a: &[u64], p: u64) -> Poly {
        match a.last() {
            None => Vec::new(),
            Some(&l) => {
                let i = inv(l, p);
                a.iter().map(|&c| c * i % p).collect()
            }
        }
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        monic(&a, p)
    }

    /// `(g, s, t)` with `s a + t b = g` monic.
    pub fn ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (qq, r) = divrem(&r0, &r1, p);
            let s = sub(&s0, &mul(&qq, &s1, p), p);
            let t = sub(&t0, &mul(&qq, &t1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let l = inv(*r0.last().expect("not both zero"), p);
        let sc = |v: &[u64]| trim(v.iter().map(|&c| c * l % p).collect());
        (sc(&r0), sc(&s0), sc(&t0))
    }

    pub fn derivative(a: &[u64], p: u64) -> Poly {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| (i as u64 % p) * c % p)
                .collect(),
        )
    }

    pub fn pow_poly_mod(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Poly {
        let mut result = vec![1u64];
        let b = rem(base, m, p);
        for i in (0..e.bits()).rev() {
            result = rem(&mul(&result, &result, p), m, p);
            if e.bit(i) {
                result = rem(&mul(&result, &b, p), m, p);
            }
        }
        result
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x = vec![0, 1];
        let mut h = rem(&x, &f, p);
        let pe = BigUint::from(p);
        let mut d = 0;
        while f.len() - 1 >= 2 * (d + 1) {
            d += 1;
            h = pow_poly_mod(&h, &pe, &f, p);
            let g = gcd(&sub(&h, &x, p), &f, p);
            if g.len() > 1 {
                f = divrem(&f, &g, p).0;
                h = rem(&h, &f, p);
                out.push((g, d));
            }
        }
        if f.len() > 1 {
            let deg = f.len() - 1;
            out.push((f, deg));
        }
        out
    }

    /// Splits a product of distinct monic irreducibles of degree `d` (odd `p`).
    pub fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.to_vec()];
        }
        let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: Poly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = sub(&pow_poly_mod(&a, &e, f, p), &[1], p);
            let g = gcd(&b, f, p);
            if g.len() > 1 && g.len() < f.len() {
                let h = divrem(f, &g, p).0;
                let mut out = equal_degree(&g, d, p, rng);
                out.extend(equal_degree(&monic(&h, p), d, p, rng));
                return out;
            }
        }
    }

    pub fn factor_squarefree(f: &[u64], p: u64, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let f = monic(f, p);
        let mut out = Vec::new();
        for (g, d) in distinct_degree(&f, p) {
            out.extend(equal_degree(&g, d, p, rng));
        }
        out
    }
}

/// Arithmetic in `(Z/m)[x]` with big moduli, coefficients in `[0, m)`.
mod zm {
    use super::*;

    pub type Poly = Vec<BigInt>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last().is_some_and(Zero::is_zero) {
            a.pop();
        }
        a
    }

    pub fn reduce(a: &[BigInt], m: &BigInt) -> Poly {
        trim(a.iter().map(|c| c.mod_floor(m)).collect())
    }

    pub fn from_fp(a: &[u64]) -> Poly {
        a.iter().map(|&c| BigInt::from(c)).collect()
    }

    pub fn add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        reduce(
            &(0..n)
                .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
                .collect::<Vec<_>>(),
            m,
        )
    }

    pub fn sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        reduce(
            &(0..n)
                .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
                .collect::<Vec<_>>(),
            m,
        )
    }

    pub fn mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        reduce(&out, m)
    }

    /// Division by a monic polynomial.
    pub fn divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Poly, Poly) {
        let db = b.len() - 1;
        debug_assert!(b[db].is_one());
        let mut r = reduce(a, m);
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let mut quot = vec![BigInt::zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            let c = r[i].mod_floor(m);
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                r[i - db + j] -= &c * bj;
            }
            quot[i - db] = c;
        }
        r.truncate(db);
        (trim(quot), reduce(&r, m))
    }

    pub fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        let half = m / 2;
        a.iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect()
    }
}

/// One quadratic Hensel step: from `f ≡ g h`, `s g + t h ≡ 1 (mod m)` with
/// `h` monic to the same relations modulo `m²`.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (zm::Poly, zm::Poly, zm::Poly, zm::Poly) {
    let m2 = m * m;
    let e = zm::sub(f, &zm::mul(g, h, &m2), &m2);
    let (qq, r) = zm::divrem_monic(&zm::mul(s, &e, &m2), h, &m2);
    let g2 = zm::add(
        g,
        &zm::add(&zm::mul(t, &e, &m2), &zm::mul(&qq, g, &m2), &m2),
        &m2,
    );
    let h2 = zm::add(h, &r, &m2);
    let b = zm::sub(
        &zm::add(&zm::mul(s, &g2, &m2), &zm::mul(t, &h2, &m2), &m2),
        &[BigInt::one()],
        &m2,
    );
    let (c, d) = zm::divrem_monic(&zm::mul(s, &b, &m2), &h2, &m2);
    let s2 = zm::sub(s, &d, &m2);
    let t2 = zm::sub(
        t,
        &zm::add(&zm::mul(t, &b, &m2), &zm::mul(&c, &g2, &m2), &m2),
        &m2,
    );
    (g2, h2, s2, t2)
}

/// Lifts `f ≡ lc(f) ∏ u_i (mod p)` to monic factors modulo `p^(2^k) ≥ target`.
fn hensel_lift(f: &[BigInt], factors: &[fp::Poly], p: u64, target: &BigInt) -> Vec<zm::Poly> {
    if factors.len() == 1 {
        let lc = f.last().expect("nonzero").clone();
        let inv = lc
            .extended_gcd(target)
            .x
            .mod_floor(target);
        return vec![zm::reduce(
            &f.iter().map(|c| c * &inv).collect::<Vec<_>>(),
            target,
        )];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let lc = fp::reduce(&[f.last().expect("nonzero").clone()], p);
    let g0 = left
        .iter()
        .fold(lc, |acc, u| fp::mul(&acc, u, p));
    let h0 = right.iter().fold(vec![1u64], |acc, u| fp::mul(&acc, u, p));
    let (one, s0, t0) = fp::ext_gcd(&g0, &h0, p);
    debug_assert_eq!(one, vec![1]);
    let (mut g, mut h, mut s, mut t) = (
        zm::from_fp(&g0),
        zm::from_fp(&h0),
        zm::from_fp(&s0),
        zm::from_fp(&t0),
    );
    let mut m = BigInt::from(p);
    while &m < target {
        (g, h, s, t) = hensel_step(f, &g, &h, &s, &t, &m);
        m = &m * &m;
    }
    debug_assert_eq!(&m, target);
    let mut out = hensel_lift(&g, left, p, target);
    out.extend(hensel_lift(&h, right, p, target));
    out
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Coefficient bound for `lc(f)` times any factor of `f`.
fn mignotte_bound(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1;
    (BigInt::one() << n) * norm * f.last().expect("nonzero").abs()
}

fn divides_over_z(g: &[BigInt], f: &[BigInt]) -> Option<Vec<BigInt>> {
    let (gq, fq) = (QPoly::from_bigints(g), QPoly::from_bigints(f));
    let quot = fq.exact_div(&gq)?;
    quot.coeffs
        .iter()
        .all(|c| c.is_integer())
        .then(|| quot.coeffs.iter().map(|c| c.to_integer()).collect())
}

/// Next `k`-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Irreducible factors of a primitive squarefree integer polynomial.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len().saturating_sub(1);
    if n <= 1 {
        return if n == 1 { vec![f.to_vec()] } else { Vec::new() };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let lc = f.last().expect("nonzero");
    // among a few admissible primes, keep the one with the fewest modular factors
    let mut best: Option<(u64, Vec<fp::Poly>)> = None;
    let mut tried = 0;
    for p in (3u64..).filter(|&p| is_prime(p)) {
        if (lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp_ = fp::reduce(f, p);
        if fp::gcd(&fp_, &fp::derivative(&fp_, p), p).len() > 1 {
            continue;
        }
        let factors = fp::factor_squarefree(&fp_, p, &mut rng);
        if factors.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
            best = Some((p, factors));
        }
        tried += 1;
        if tried == 5 {
            break;
        }
    }
    let (p, modular) = best.expect("some prime is admissible");

    let bound = mignotte_bound(f) * 2;
    let mut target = BigInt::from(p);
    while target <= bound {
        target = &target * &target;
    }
    let mut lifted = hensel_lift(f, &modular, p, &target);

    let mut found = Vec::new();
    let mut rest = f.to_vec();
    let mut k = 1;
    while 2 * k <= lifted.len() {
        let mut idx: Vec<usize> = (0..k).collect();
        let mut hit = false;
        loop {
            let lc_rest = rest.last().expect("nonzero").clone();
            let g = idx
                .iter()
                .fold(vec![lc_rest], |acc, &i| zm::mul(&acc, &lifted[i], &target));
            let g = QPoly::from_bigints(&zm::symmetric(&g, &target)).primitive_integer();
            if let Some(quot) = divides_over_z(&g, &rest) {
                found.push(g);
                rest = QPoly::from_bigints(&quot).primitive_integer();
                for &i in idx.iter().rev() {
                    lifted.remove(i);
                }
                hit = true;
                break;
            }
            if !next_combination(&mut idx, lifted.len()) {
                break;
            }
        }
        if !hit {
            k += 1;
        }
    }
    if rest.len() > 1 {
        found.push(rest);
    }
    found
}
