//! Univariate polynomials over Z and their exact factorization.
//!
//! Factoring a monic integer polynomial goes through one large prime: pick
//! `p` beyond twice the Mignotte coefficient bound, factor mod `p`, then
//! recombine factor subsets with symmetric lifts and verify each candidate
//! by exact division. No Hensel lifting is needed at block degrees.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modp::PolyModP;

/// Dense univariate integer polynomial, coefficients ascending, trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyZ {
    coeffs: Vec<BigInt>,
}

impl PolyZ {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        PolyZ { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        PolyZ { coeffs: vec![] }
    }

    pub fn one() -> Self {
        PolyZ { coeffs: vec![BigInt::one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| c.is_one())
    }

    pub fn eval(&self, v: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * v + c;
        }
        acc
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Division by a monic divisor; returns `None` if the remainder is
    /// nonzero.
    pub fn div_exact_monic(&self, den: &Self) -> Option<Self> {
        assert!(den.is_monic(), "divisor must be monic");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < den.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dn = den.degree();
        let mut quo = vec![BigInt::zero(); self.degree() - dn + 1];
        for k in (0..quo.len()).rev() {
            let q = rem[k + dn].clone();
            if q.is_zero() {
                continue;
            }
            for (j, dc) in den.coeffs.iter().enumerate() {
                rem[k + j] -= &q * dc;
            }
            quo[k] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Self::new(quo))
        } else {
            None
        }
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Polynomial gcd over Z via the primitive pseudo-remainder sequence,
    /// normalized primitive with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.is_zero() {
            return b;
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    fn pseudo_rem(&self, den: &Self) -> Self {
        let mut rem = self.clone();
        let dn = den.degree();
        let lc = den.lc();
        while !rem.is_zero() && rem.degree() >= dn {
            let shift = rem.degree() - dn;
            let lead = rem.lc();
            let mut coeffs: Vec<BigInt> = rem.coeffs.iter().map(|c| c * &lc).collect();
            for (j, dc) in den.coeffs.iter().enumerate() {
                coeffs[shift + j] -= &lead * dc;
            }
            rem = Self::new(coeffs);
            if !rem.is_zero() && rem.degree() == shift + dn {
                // Leading term must have cancelled.
                unreachable!("pseudo-division failed to reduce the degree");
            }
        }
        rem
    }

    /// Squarefree decomposition of a monic polynomial (Yun, characteristic
    /// zero): pairwise coprime monic squarefree parts with multiplicities.
    pub fn squarefree_decomposition(&self) -> Vec<(PolyZ, usize)> {
        assert!(self.is_monic());
        if self.degree() == 0 {
            return vec![];
        }
        let deriv = self.derivative();
        let a0 = self.gcd(&deriv);
        if a0.degree() == 0 {
            return vec![(self.clone(), 1)];
        }
        let mut out = Vec::new();
        let mut b = self.div_exact_monic(&a0).expect("gcd divides");
        let mut c = div_exact_general(&deriv, &a0);
        let mut d = c.sub(&b.derivative());
        let mut i = 1usize;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = div_exact_general(&b, &a);
            c = div_exact_general(&d, &a);
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            *slot = a - b;
        }
        Self::new(out)
    }

    /// Complete factorization of a monic polynomial into monic irreducibles
    /// with multiplicities. Returns `None` when the single-prime method
    /// would need a modulus beyond 62 bits (far outside block scale).
    pub fn factor_monic(&self) -> Option<Vec<(PolyZ, usize)>> {
        assert!(self.is_monic(), "factorization requires a monic input");
        let mut out: Vec<(PolyZ, usize)> = Vec::new();
        for (part, mult) in self.squarefree_decomposition() {
            for irr in factor_squarefree(&part)? {
                out.push((irr, mult));
            }
        }
        out.sort_by(|a, b| (a.0.degree(), a.0.coeffs()).cmp(&(b.0.degree(), b.0.coeffs())));
        Some(out)
    }

    /// Integer roots (with multiplicity collapsed), via complete
    /// factorization; empty when factoring is unavailable.
    pub fn integer_roots(&self) -> Vec<BigInt> {
        if self.degree() == 0 || self.is_zero() {
            return vec![];
        }
        match self.factor_monic() {
            Some(factors) => factors
                .into_iter()
                .filter(|(f, _)| f.degree() == 1)
                .map(|(f, _)| -f.coeffs()[0].clone())
                .collect(),
            None => vec![],
        }
    }
}

/// Exact division where the divisor is primitive but not necessarily monic
/// (the quotient is known to be integral).
fn div_exact_general(num: &PolyZ, den: &PolyZ) -> PolyZ {
    if num.is_zero() {
        return PolyZ::zero();
    }
    assert!(num.degree() >= den.degree());
    let dn = den.degree();
    let lc = den.lc();
    let mut rem = num.coeffs.clone();
    let mut quo = vec![BigInt::zero(); num.degree() - dn + 1];
    for k in (0..quo.len()).rev() {
        let lead = rem[k + dn].clone();
        if lead.is_zero() {
            continue;
        }
        let (q, r) = lead.div_rem(&lc);
        assert!(r.is_zero(), "inexact division in squarefree decomposition");
        for (j, dc) in den.coeffs.iter().enumerate() {
            rem[k + j] -= &q * dc;
        }
        quo[k] = q;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact division in squarefree decomposition");
    PolyZ::new(quo)
}

/// Miller-Rabin, deterministic for u64 with the standard witness set.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let powmod = |mut a: u64, mut e: u64| -> u64 {
        let mut acc = 1u64;
        a %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = ((acc as u128 * a as u128) % n as u128) as u64;
            }
            a = ((a as u128 * a as u128) % n as u128) as u64;
            e >>= 1;
        }
        acc
    };
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn next_prime_above(n: u64) -> u64 {
    let mut k = n.max(2) | 1;
    loop {
        if is_prime_u64(k) {
            return k;
        }
        k = k.checked_add(2).expect("prime search overflow");
    }
}

/// Mignotte-style bound on the coefficients of any monic factor.
fn factor_coeff_bound(f: &PolyZ) -> BigInt {
    let norm_sq: BigInt = f.coeffs.iter().map(|c| c * c).sum();
    let mut norm = norm_sq.sqrt() + 1;
    norm = norm << f.degree(); // 2^deg * ||f||_2
    norm
}

/// Factors a monic squarefree integer polynomial.
fn factor_squarefree(f: &PolyZ) -> Option<Vec<PolyZ>> {
    if f.degree() <= 1 {
        return Some(vec![f.clone()]);
    }
    let bound = factor_coeff_bound(f);
    let need: BigInt = &bound * 2 + 1;
    let need = need.to_u64()?;
    if need >= (1u64 << 62) {
        return None;
    }
    // Find a prime keeping the reduction squarefree (all but finitely many do).
    let mut p = next_prime_above(need);
    let fp = loop {
        let fp = PolyModP::from_bigints(p, f.coeffs());
        if fp.degree() == f.degree() && fp.is_squarefree() {
            break fp;
        }
        p = next_prime_above(p + 1);
        if p >= (1u64 << 62) {
            return None;
        }
    };
    let (_, local) = fp.factor();
    let mut pool: Vec<PolyModP> = local.into_iter().map(|(g, _)| g).collect();
    let mut remaining = f.clone();
    let mut out = Vec::new();
    let mut subset_size = 1usize;
    while 2 * subset_size <= pool.len() {
        let mut found = None;
        'subsets: for subset in subsets_of_size(pool.len(), subset_size) {
            let mut prod = PolyModP::one(p);
            for &idx in &subset {
                prod = prod.mul(&pool[idx]);
            }
            let candidate = symmetric_lift(&prod);
            let c0 = candidate.eval(&BigInt::zero());
            if !c0.is_zero() && !remaining.eval(&BigInt::zero()).is_multiple_of(&c0) {
                continue 'subsets;
            }
            if let Some(quo) = remaining.div_exact_monic(&candidate) {
                found = Some((subset, candidate, quo));
                break 'subsets;
            }
        }
        match found {
            Some((subset, candidate, quo)) => {
                out.push(candidate);
                remaining = quo;
                for idx in subset.into_iter().rev() {
                    pool.remove(idx);
                }
            }
            None => subset_size += 1,
        }
    }
    if remaining.degree() > 0 {
        out.push(remaining);
    }
    out.sort_by(|a, b| (a.degree(), a.coeffs()).cmp(&(b.degree(), b.coeffs())));
    Some(out)
}

/// Symmetric lift of a mod-p polynomial into Z with coefficients in
/// (-p/2, p/2].
fn symmetric_lift(f: &PolyModP) -> PolyZ {
    let p = BigInt::from(f.p);
    let half = BigInt::from(f.p / 2);
    PolyZ::new(
        f.coeffs()
            .iter()
            .map(|&c| {
                let c = BigInt::from(c);
                if c > half {
                    c - &p
                } else {
                    c
                }
            })
            .collect(),
    )
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
