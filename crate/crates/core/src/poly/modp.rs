//! Univariate polynomials over a prime field, with complete factorization.
//!
//! The factorization chain is the usual one: squarefree decomposition,
//! distinct-degree splitting via Frobenius powers, then Cantor-Zassenhaus
//! equal-degree splitting with a deterministic retry schedule (trace maps in
//! characteristic 2). Primes up to 62 bits are supported; products go
//! through `u128`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// The fixed prime list used by irreducibility certificates: the first eight
/// primes above 100.
pub const CERT_PRIMES: [u64; 8] = [101, 103, 107, 109, 113, 127, 131, 137];

/// Dense univariate polynomial over F_p, coefficients ascending, normalized
/// (no leading zeros).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyModP {
    pub p: u64,
    coeffs: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

impl PolyModP {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        let mut out = PolyModP { p, coeffs };
        out.trim();
        out
    }

    pub fn zero(p: u64) -> Self {
        PolyModP { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        PolyModP { p, coeffs: vec![1] }
    }

    pub fn x(p: u64) -> Self {
        PolyModP { p, coeffs: vec![0, 1] }
    }

    /// Reduces signed arbitrary-precision coefficients into F_p.
    pub fn from_bigints(p: u64, coeffs: &[num_bigint::BigInt]) -> Self {
        let pb = num_bigint::BigInt::from(p);
        let reduced: Vec<u64> = coeffs
            .iter()
            .map(|c| {
                let r = ((c % &pb) + &pb) % &pb;
                r.to_u64().expect("residue fits u64")
            })
            .collect();
        Self::new(p, reduced)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn lc(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = (a + self.p - b) % self.p;
        }
        Self::new(self.p, out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = (a + b) % self.p;
        }
        Self::new(self.p, out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        Self::new(self.p, out)
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&a| mulmod(a, c, self.p)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.lc() == 1 {
            return self.clone();
        }
        self.scale(invmod(self.lc(), self.p))
    }

    pub fn divrem(&self, den: &Self) -> (Self, Self) {
        assert!(!den.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.is_zero() || self.degree() < den.degree() {
            return (Self::zero(p), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dn = den.degree();
        let inv_lc = invmod(den.lc(), p);
        let mut quo = vec![0u64; self.degree() - dn + 1];
        for k in (0..quo.len()).rev() {
            let lead = rem[k + dn] % p;
            if lead == 0 {
                continue;
            }
            let q = mulmod(lead, inv_lc, p);
            quo[k] = q;
            for (j, &dc) in den.coeffs.iter().enumerate() {
                let sub = mulmod(q, dc, p);
                rem[k + j] = (rem[k + j] + p - sub) % p;
            }
        }
        (Self::new(p, quo), Self::new(p, rem))
    }

    pub fn div_exact(&self, den: &Self) -> Self {
        let (q, r) = self.divrem(den);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn rem(&self, den: &Self) -> Self {
        self.divrem(den).1
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.p);
        }
        let out: Vec<u64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % self.p, self.p))
            .collect();
        Self::new(self.p, out)
    }

    pub fn is_squarefree(&self) -> bool {
        !self.derivative().is_zero() && self.gcd(&self.derivative()).degree() == 0
    }

    /// `self^e mod modulus` with an arbitrary-precision exponent.
    pub fn powmod_big(&self, e: &BigUint, modulus: &Self) -> Self {
        let mut acc = Self::one(self.p);
        let base = self.rem(modulus);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(modulus);
            if e.bit(i) {
                acc = acc.mul(&base).rem(modulus);
            }
        }
        acc
    }

    pub fn eval(&self, v: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mulmod(acc, v, self.p) + c) % self.p;
        }
        acc
    }

    /// Complete factorization into monic irreducibles with multiplicities;
    /// the leading coefficient is returned separately.
    pub fn factor(&self) -> (u64, Vec<(PolyModP, usize)>) {
        assert!(!self.is_zero(), "factor of the zero polynomial");
        let lead = self.lc();
        let mut out: Vec<(PolyModP, usize)> = Vec::new();
        for (part, mult) in squarefree_parts(&self.monic()) {
            for (prod, degree) in distinct_degree(&part) {
                for irr in equal_degree_split(&prod, degree) {
                    out.push((irr, mult));
                }
            }
        }
        out.sort_by(|a, b| (a.0.degree(), a.0.coeffs()).cmp(&(b.0.degree(), b.0.coeffs())));
        (lead, out)
    }

    /// Multiset of irreducible-factor degrees, with multiplicity, ascending.
    pub fn degree_pattern(&self) -> Vec<usize> {
        let (_, factors) = self.factor();
        let mut degs: Vec<usize> =
            factors.iter().flat_map(|(f, mult)| std::iter::repeat(f.degree()).take(*mult)).collect();
        degs.sort_unstable();
        degs
    }
}

/// Takes the p-th root of a polynomial whose derivative vanishes (only
/// exponents divisible by p; coefficients are Frobenius-fixed in F_p).
fn pth_root(f: &PolyModP) -> PolyModP {
    let p = f.p as usize;
    let mut root = Vec::new();
    for (i, &c) in f.coeffs().iter().enumerate() {
        if i % p == 0 {
            root.push(c);
        } else {
            assert_eq!(c, 0, "derivative vanished but exponents are not multiples of p");
        }
    }
    PolyModP::new(f.p, root)
}

/// Squarefree decomposition over F_p: returns pairwise coprime squarefree
/// monic parts `g` with multiplicities `k` such that the input is `prod g^k`.
fn squarefree_parts(f: &PolyModP) -> Vec<(PolyModP, usize)> {
    if f.degree() == 0 {
        return vec![];
    }
    let d = f.derivative();
    if d.is_zero() {
        return squarefree_parts(&pth_root(f))
            .into_iter()
            .map(|(g, k)| (g, k * f.p as usize))
            .collect();
    }
    let mut out = Vec::new();
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c).monic();
    let mut i = 1usize;
    while w.degree() > 0 {
        let y = w.gcd(&c);
        let part = w.div_exact(&y).monic();
        if part.degree() > 0 {
            out.push((part, i));
        }
        w = y;
        c = c.div_exact(&w).monic();
        i += 1;
    }
    if c.degree() > 0 {
        // The leftover is a p-th power.
        for (g, k) in squarefree_parts(&pth_root(&c)) {
            out.push((g, k * f.p as usize));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into (product, d) pairs where every
/// irreducible factor of `product` has degree exactly `d`.
fn distinct_degree(f: &PolyModP) -> Vec<(PolyModP, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut h = PolyModP::x(p);
    let mut d = 0usize;
    while f.degree() >= 2 * (d + 1) {
        d += 1;
        h = h.powmod_big(&BigUint::from(p), &f);
        let g = h.sub(&PolyModP::x(p)).gcd(&f);
        if g.degree() > 0 {
            out.push((g.clone(), d));
            f = f.div_exact(&g).monic();
            h = h.rem(&f);
        }
    }
    if f.degree() > 0 {
        out.push((f.clone(), f.degree()));
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting with seeded, bounded retries;
/// trace maps in characteristic 2.
fn equal_degree_split(f: &PolyModP, d: usize) -> Vec<PolyModP> {
    let p = f.p;
    if f.degree() == d {
        return vec![f.monic()];
    }
    let seed = 0x5EED_0001u64
        ^ p.wrapping_mul(0x9E37_79B9)
        ^ ((d as u64) << 8)
        ^ f.coeffs().iter().fold(0u64, |acc, &c| acc.wrapping_mul(1099511628211).wrapping_add(c));
    let mut rng = StdRng::seed_from_u64(seed);
    for _attempt in 0..500 {
        let deg = f.degree();
        let mut coeffs = vec![0u64; deg];
        for c in coeffs.iter_mut() {
            *c = rng.gen_range(0..p);
        }
        let a = PolyModP::new(p, coeffs);
        if a.is_zero() {
            continue;
        }
        let b = if p == 2 {
            // Trace map: a + a^2 + a^4 + ... + a^(2^(d-1)) mod f.
            let mut acc = PolyModP::zero(p);
            let mut power = a.rem(f);
            for _ in 0..d {
                acc = acc.add(&power);
                power = power.mul(&power).rem(f);
            }
            acc
        } else {
            let exponent = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            a.powmod_big(&exponent, f).sub(&PolyModP::one(p))
        };
        let g = b.gcd(f);
        if g.degree() > 0 && g.degree() < f.degree() {
            let rest = f.div_exact(&g).monic();
            let mut out = equal_degree_split(&g, d);
            out.extend(equal_degree_split(&rest, d));
            return out;
        }
    }
    unreachable!("equal-degree splitting exhausted its retry budget");
}

/// All degrees realizable as sums of sub-multisets of `pattern`, as a bitset.
pub fn subset_sums(pattern: &[usize]) -> u64 {
    let mut bits: u64 = 1;
    for &d in pattern {
        bits |= bits << d;
    }
    bits
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, coeffs: &[i64]) -> PolyModP {
        PolyModP::new(p, coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
    }

    /// Brute-force oracle: trial division by every monic polynomial of degree
    /// <= deg(f)/2.
    fn irreducible_oracle(f: &PolyModP) -> bool {
        let p = f.p;
        let n = f.degree();
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut coeffs = Vec::with_capacity(d + 1);
                let mut k = idx;
                for _ in 0..d {
                    coeffs.push(k % p);
                    k /= p;
                }
                coeffs.push(1);
                let cand = PolyModP::new(p, coeffs);
                if f.rem(&cand).is_zero() {
                    return false;
                }
            }
        }
        n >= 1
    }

    #[test]
    fn factors_pinned_examples() {
        // t^2 + t factors as t * (t + 1) mod 2.
        let f = poly(2, &[0, 1, 1]);
        let (lead, factors) = f.factor();
        assert_eq!(lead, 1);
        assert_eq!(factors, vec![(poly(2, &[0, 1]), 1), (poly(2, &[1, 1]), 1)]);

        // t^2 + 1 is irreducible mod 3.
        let f = poly(3, &[1, 0, 1]);
        let (_, factors) = f.factor();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0.degree(), 2);
        assert!(irreducible_oracle(&f));

        // t^4 + 1 factors as (t^2 + 2)(t^2 + 3) mod 5.
        let f = poly(5, &[1, 0, 0, 0, 1]);
        let (_, factors) = f.factor();
        assert_eq!(factors, vec![(poly(5, &[2, 0, 1]), 1), (poly(5, &[3, 0, 1]), 1)]);
    }

    #[test]
    fn factor_product_reassembles_input() {
        let primes = [2u64, 3, 5, 101, 137];
        let mut rng = StdRng::seed_from_u64(0xFACE_0001);
        for _ in 0..150 {
            let p = primes[rng.gen_range(0..primes.len())];
            let deg = rng.gen_range(1..=6);
            let mut coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
            if *coeffs.last().unwrap() == 0 {
                *coeffs.last_mut().unwrap() = 1;
            }
            let f = PolyModP::new(p, coeffs);
            let (lead, factors) = f.factor();
            let mut prod = PolyModP::one(p).scale(lead);
            for (g, mult) in &factors {
                assert_eq!(g.lc(), 1, "factors are monic");
                for _ in 0..*mult {
                    prod = prod.mul(g);
                }
            }
            assert_eq!(prod, f, "factor product mismatch at p={p} f={f:?}");
        }
    }

    #[test]
    fn low_degree_factors_agree_with_trial_division_oracle() {
        let primes = [2u64, 3, 5];
        let mut rng = StdRng::seed_from_u64(0xFACE_0002);
        let mut checked = 0;
        while checked < 60 {
            let p = primes[rng.gen_range(0..primes.len())];
            let deg = rng.gen_range(2..=4);
            let mut coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
            *coeffs.last_mut().unwrap() = 1;
            let f = PolyModP::new(p, coeffs);
            let (_, factors) = f.factor();
            let claim_irreducible = factors.len() == 1 && factors[0].1 == 1;
            assert_eq!(claim_irreducible, irreducible_oracle(&f), "disagreement for {f:?}");
            checked += 1;
        }
    }

    #[test]
    fn squarefree_parts_track_multiplicities() {
        // (t+1)^2 * (t+2) mod 5.
        let f = poly(5, &[1, 1]).mul(&poly(5, &[1, 1])).mul(&poly(5, &[2, 1]));
        let (_, factors) = f.factor();
        assert_eq!(factors, vec![(poly(5, &[1, 1]), 2), (poly(5, &[2, 1]), 1)]);
        // (t+1)^2 mod 2 has vanishing derivative; p-th root path.
        let g = poly(2, &[1, 1]).mul(&poly(2, &[1, 1]));
        let (_, factors) = g.factor();
        assert_eq!(factors, vec![(poly(2, &[1, 1]), 2)]);
    }

    #[test]
    fn subset_sums_collects_achievable_degrees() {
        let bits = subset_sums(&[2, 2, 3]);
        for d in [0usize, 2, 3, 4, 5, 7] {
            assert!(bits & (1 << d) != 0, "degree {d} should be achievable");
        }
        for d in [1usize, 6] {
            assert!(bits & (1 << d) == 0, "degree {d} should not be achievable");
        }
    }

    #[test]
    fn degree_pattern_degrees_sum_to_total() {
        let f = poly(101, &[1, 0, 0, 0, 1]);
        let pattern = f.degree_pattern();
        assert_eq!(pattern.iter().sum::<usize>(), 4);
    }
}
