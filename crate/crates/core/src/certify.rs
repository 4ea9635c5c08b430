//! Irreducibility certificates, the parity test, separation checks and
//! specialization reports for block characteristic polynomials.
//!
//! The REDUCIBLE verdict always carries an exact factor pair verified by
//! multiplication. The IRREDUCIBLE verdict rests on one integer
//! specialization of the frequencies whose degree patterns modulo the fixed
//! prime list exclude every proper factor degree: a monic-in-t factorization
//! over the polynomial ring would specialize to one over Z with the same
//! t-degrees, so the exclusion is sound. Everything else is INCONCLUSIVE.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blocks::charpoly_marked;
use crate::graphs::ColoredGraph;
use crate::poly::modp::{subset_sums, PolyModP, CERT_PRIMES};
use crate::poly::zuni::PolyZ;
use crate::poly::MultiPoly;

/// Number of integer specializations tried before giving up.
pub const HILBERT_ATTEMPTS: usize = 96;

/// Coordinate box for specialization draws.
const SPECIALIZATION_BOUND: i64 = 9;

/// Cap on cartesian linear-factor candidates, a safety valve for
/// pathological inputs.
const LINEAR_CANDIDATE_CAP: usize = 4096;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Irreducible,
    Reducible,
    Inconclusive,
}

/// The evidence behind a verdict.
///
/// For `Irreducible`: the specialization point, the primes used and the
/// factor degree pattern of the specialized polynomial modulo each prime;
/// the subset sums of every pattern exclude all proper degrees.
/// For `Reducible`: the exact factors, in canonical text form; their product
/// is the input.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub primes: Vec<u64>,
    pub degree_patterns: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub specialization: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<String>>,
    pub attempts: usize,
}

impl Certificate {
    fn inconclusive(attempts: usize) -> Self {
        Certificate {
            verdict: Verdict::Inconclusive,
            primes: CERT_PRIMES.to_vec(),
            degree_patterns: Vec::new(),
            specialization: None,
            factors: None,
            attempts,
        }
    }

    fn reducible(chi: &MultiPoly, f: &MultiPoly, g: &MultiPoly) -> Self {
        assert_eq!(f.mul(g), *chi, "reducible witness must reproduce the input");
        Certificate {
            verdict: Verdict::Reducible,
            primes: Vec::new(),
            degree_patterns: Vec::new(),
            specialization: None,
            factors: Some(vec![f.to_string(), g.to_string()]),
            attempts: 0,
        }
    }
}

/// Keeps the candidate linear factors `t + <a, x>` whose coefficient sum has
/// the parity of the black-vertex mass `ell`.
pub fn parity_filter(candidates: &[Vec<i64>], ell: i64) -> Vec<Vec<i64>> {
    candidates
        .iter()
        .filter(|a| (a.iter().sum::<i64>() - ell).rem_euclid(2) == 0)
        .cloned()
        .collect()
}

/// Evaluates `chi` at `t = g` with every frequency set to 1 and reports
/// whether the value is odd. For `g` of parity different from the
/// black-vertex mass the value is always odd (in particular nonzero).
pub fn parity_probe(chi: &MultiPoly, g: i64) -> bool {
    let ones = vec![BigInt::from(1); chi.num_vars()];
    let coeffs = chi.eval_int(&ones).expect("parity probe needs a root-free polynomial");
    let value = PolyZ::new(coeffs).eval(&BigInt::from(g));
    value.is_odd()
}

trait OddCheck {
    fn is_odd(&self) -> bool;
}

impl OddCheck for BigInt {
    fn is_odd(&self) -> bool {
        !(self % BigInt::from(2)).is_zero()
    }
}

/// Certifies irreducibility of a monic-in-t polynomial over `Z[x, t]`.
pub fn certify_irreducible(chi: &MultiPoly) -> Certificate {
    assert!(!chi.has_roots(), "certification runs after root elimination");
    if !chi.is_monic_in_t() || chi.t_degree() == 0 {
        return Certificate::inconclusive(0);
    }

    if let Some((f, g)) = find_linear_split(chi) {
        return Certificate::reducible(chi, &f, &g);
    }
    if let Some((f, g)) = find_single_variable_split(chi) {
        return Certificate::reducible(chi, &f, &g);
    }
    if let Some((f, g)) = find_two_specialization_split(chi) {
        return Certificate::reducible(chi, &f, &g);
    }

    hilbert_certificate(chi)
}

/// Deterministic specialization schedule: seeded from a hash of the
/// canonical text, so certificates are reproducible.
fn schedule_rng(chi: &MultiPoly) -> ChaCha8Rng {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in chi.to_string().bytes() {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(hash)
}

fn hilbert_certificate(chi: &MultiPoly) -> Certificate {
    let m = chi.num_vars();
    let n = chi.t_degree();
    let mut rng = schedule_rng(chi);
    for attempt in 1..=HILBERT_ATTEMPTS {
        let z: Vec<i64> =
            (0..m).map(|_| rng.gen_range(-SPECIALIZATION_BOUND..=SPECIALIZATION_BOUND)).collect();
        let zb: Vec<BigInt> = z.iter().map(|&v| BigInt::from(v)).collect();
        let u = PolyZ::new(chi.eval_int(&zb).expect("root-free by precondition"));
        debug_assert_eq!(u.degree(), n, "monic polynomials keep their degree");
        // A repeated factor over Z makes the patterns useless; skip early.
        if u.gcd(&u.derivative()).degree() > 0 {
            continue;
        }
        let mut primes = Vec::new();
        let mut patterns = Vec::new();
        for &p in CERT_PRIMES.iter() {
            let up = PolyModP::from_bigints(p, u.coeffs());
            if up.degree() != n || !up.is_squarefree() {
                continue;
            }
            primes.push(p);
            patterns.push(up.degree_pattern());
        }
        if primes.len() < 2 {
            continue;
        }
        let excluded = (1..n).all(|d| {
            patterns.iter().any(|pattern| subset_sums(pattern) & (1u64 << d) == 0)
        });
        if excluded {
            return Certificate {
                verdict: Verdict::Irreducible,
                primes,
                degree_patterns: patterns,
                specialization: Some(z),
                factors: None,
                attempts: attempt,
            };
        }
    }
    Certificate::inconclusive(HILBERT_ATTEMPTS)
}

/// Searches for a linear factor `t + <a, x>`. Candidate coefficients come
/// from the integer roots of the specializations at the coordinate unit
/// vectors; each candidate is checked by exact division.
fn find_linear_split(chi: &MultiPoly) -> Option<(MultiPoly, MultiPoly)> {
    let m = chi.num_vars();
    if m == 0 {
        return None;
    }
    let mut per_axis: Vec<Vec<i64>> = Vec::with_capacity(m);
    for i in 0..m {
        let unit: Vec<BigInt> =
            (0..m).map(|k| if k == i { BigInt::from(1) } else { BigInt::zero() }).collect();
        let u = PolyZ::new(chi.eval_int(&unit).ok()?);
        let mut axis: Vec<i64> = u
            .integer_roots()
            .iter()
            .filter_map(|r| (-r).to_i64())
            .collect();
        axis.sort_unstable();
        axis.dedup();
        if axis.is_empty() {
            return None;
        }
        per_axis.push(axis);
    }
    let total: usize = per_axis.iter().map(Vec::len).product();
    if total > LINEAR_CANDIDATE_CAP {
        return None;
    }
    let mut candidate = vec![0usize; m];
    loop {
        let a: Vec<i64> = candidate.iter().enumerate().map(|(i, &k)| per_axis[i][k]).collect();
        let factor = MultiPoly::t(m).add(&MultiPoly::linear_form(m, &a));
        if let Some((q, r)) = chi.divrem_t(&factor) {
            if r.is_zero() && q.t_degree() > 0 {
                return Some((factor, q));
            }
        }
        // Odometer over the cartesian candidate set.
        let mut pos = 0;
        loop {
            if pos == m {
                return None;
            }
            candidate[pos] += 1;
            if candidate[pos] < per_axis[pos].len() {
                break;
            }
            candidate[pos] = 0;
            pos += 1;
        }
    }
}

/// Indices of the frequency variables that actually occur.
fn used_variables(p: &MultiPoly) -> Vec<usize> {
    let m = p.num_vars();
    (0..m)
        .filter(|&i| p.specialize(i, &BigInt::zero()) != *p)
        .collect()
}

/// Completely factors a homogeneous monic-in-t polynomial that uses at most
/// one frequency variable, by specializing that variable to 1, factoring
/// over Z and rehomogenizing. Returns the factors with multiplicity
/// expanded; `None` when the shape does not apply.
fn homogeneous_single_variable_factors(p: &MultiPoly) -> Option<Vec<MultiPoly>> {
    let m = p.num_vars();
    if !p.is_monic_in_t() || !p.is_homogeneous() || p.has_roots() {
        return None;
    }
    let used = used_variables(p);
    if used.len() > 1 {
        return None;
    }
    let n = p.t_degree();
    if used.is_empty() {
        // Homogeneous in t alone: a power of t.
        return Some(vec![MultiPoly::t(m); n]);
    }
    let var = used[0];
    let point: Vec<BigInt> =
        (0..m).map(|k| if k == var { BigInt::from(1) } else { BigInt::zero() }).collect();
    let u = PolyZ::new(p.eval_int(&point).ok()?);
    let factored = u.factor_monic()?;
    let mut out = Vec::new();
    for (f, mult) in factored {
        let lifted = homogenize_in(m, var, &f);
        for _ in 0..mult {
            out.push(lifted.clone());
        }
    }
    // The lift is exact only if the product reproduces the input.
    let mut product = MultiPoly::one(m);
    for f in &out {
        product = product.mul(f);
    }
    if product == *p {
        Some(out)
    } else {
        None
    }
}

/// Lifts an integer polynomial `f(t)` of degree d to the homogeneous
/// polynomial `x^(d-k) * c_k * t^k`.
fn homogenize_in(m: usize, var: usize, f: &PolyZ) -> MultiPoly {
    let d = f.degree();
    let mut out = MultiPoly::zero(m);
    let x = MultiPoly::x(m, var);
    let t = MultiPoly::t(m);
    for (k, c) in f.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = t.pow(k as u32).mul(&x.pow((d - k) as u32)).scale(c);
        out = out.add(&term);
    }
    out
}

/// Complete factorization when the whole polynomial uses at most one
/// frequency variable (every single-edge block and every `m = 1` input).
fn find_single_variable_split(chi: &MultiPoly) -> Option<(MultiPoly, MultiPoly)> {
    let factors = homogeneous_single_variable_factors(chi)?;
    if factors.len() < 2 {
        return None;
    }
    let f = factors[0].clone();
    let mut g = MultiPoly::one(chi.num_vars());
    for other in &factors[1..] {
        g = g.mul(other);
    }
    Some((f, g))
}

/// Factor reconstruction from two specializations: when both `chi` at
/// `x_i = 0` and at `x_j = 0` factor completely (they collapse onto at most
/// one remaining variable), candidate factors of `chi` are reassembled from
/// factor subsets of matching degree that agree on the doubly specialized
/// core. Mixed monomials containing both variables are invisible to this
/// reconstruction, so it is a partial test; every candidate is verified by
/// exact division before use.
fn find_two_specialization_split(chi: &MultiPoly) -> Option<(MultiPoly, MultiPoly)> {
    let m = chi.num_vars();
    let n = chi.t_degree();
    if m < 2 || n < 2 || !chi.is_homogeneous() {
        return None;
    }
    let used = used_variables(chi);
    for (pos_a, &i) in used.iter().enumerate() {
        for &j in used.iter().skip(pos_a + 1) {
            let zi = chi.specialize(i, &BigInt::zero());
            let zj = chi.specialize(j, &BigInt::zero());
            let (Some(fi), Some(fj)) = (
                homogeneous_single_variable_factors(&zi),
                homogeneous_single_variable_factors(&zj),
            ) else {
                continue;
            };
            let mut tried = BTreeSet::new();
            for sa in subsets(fi.len()) {
                if sa.is_empty() || sa.len() == fi.len() {
                    continue;
                }
                let f_part = product_of(&fi, &sa, m);
                let d = f_part.t_degree();
                if d == 0 || d >= n {
                    continue;
                }
                for sb in subsets(fj.len()) {
                    let g_part = product_of(&fj, &sb, m);
                    if g_part.t_degree() != d {
                        continue;
                    }
                    // The two halves must agree where both are visible.
                    let core = f_part.specialize(j, &BigInt::zero());
                    if g_part.specialize(i, &BigInt::zero()) != core {
                        continue;
                    }
                    let candidate = f_part.add(&g_part).sub(&core);
                    if !tried.insert(candidate.to_string()) {
                        continue;
                    }
                    if let Some((q, r)) = chi.divrem_t(&candidate) {
                        if r.is_zero() && q.t_degree() > 0 {
                            return Some((candidate, q));
                        }
                    }
                }
            }
        }
    }
    None
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1u32 << n)).map(move |mask| {
        (0..n).filter(|k| mask & (1 << k) != 0).collect()
    })
}

fn product_of(factors: &[MultiPoly], subset: &[usize], m: usize) -> MultiPoly {
    let mut out = MultiPoly::one(m);
    for &k in subset {
        out = out.mul(&factors[k]);
    }
    out
}

/// A pair of graphs with distinct canonical keys but equal characteristic
/// polynomials.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Collision {
    pub chi: String,
    pub first: Vec<Vec<i64>>,
    pub second: Vec<Vec<i64>>,
}

/// Groups a family by exact polynomial equality and reports every pair of
/// distinct canonical keys sharing a polynomial.
pub fn separation_check(family: &[(ColoredGraph, MultiPoly)]) -> Vec<Collision> {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<String, Vec<&ColoredGraph>> = BTreeMap::new();
    for (g, chi) in family {
        groups.entry(chi.to_string()).or_default().push(g);
    }
    let mut collisions = Vec::new();
    for (chi, members) in groups {
        let mut keys: Vec<Vec<Vec<i64>>> = members.iter().map(|g| g.canonical_form()).collect();
        keys.sort();
        keys.dedup();
        for a in 0..keys.len() {
            for b in a + 1..keys.len() {
                collisions.push(Collision {
                    chi: chi.clone(),
                    first: keys[a].clone(),
                    second: keys[b].clone(),
                });
            }
        }
    }
    collisions
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IndexFactorization {
    /// 1-based frequency index that was set to zero.
    pub index: usize,
    pub factors: Vec<String>,
    pub product_matches: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CongruentPair {
    /// 1-based index pair that was specialized away.
    pub indices: [usize; 2],
    /// Positions of the two projected components whose polynomials agree.
    pub components: [usize; 2],
    pub residual: String,
}

/// Per-index component factorizations of the specializations and the pairs
/// of components that become congruent under double specialization.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SpecializationReport {
    pub per_index: Vec<IndexFactorization>,
    pub congruent_pairs: Vec<CongruentPair>,
}

pub fn specialization_tree(chi: &MultiPoly, g: &ColoredGraph) -> SpecializationReport {
    let m = g.m();
    assert_eq!(chi.num_vars(), m);
    let mut per_index = Vec::new();
    let mut congruent_pairs = Vec::new();
    let mut lifted_by_index: Vec<Vec<MultiPoly>> = Vec::new();
    for i in 0..m {
        let components = g.project_components(i);
        let lifted: Vec<MultiPoly> = components
            .iter()
            .map(|c| charpoly_marked(c).expect("component blocks eliminate their roots").insert_var(i))
            .collect();
        let mut product = MultiPoly::one(m);
        for f in &lifted {
            product = product.mul(f);
        }
        let specialized = chi.specialize(i, &BigInt::zero());
        per_index.push(IndexFactorization {
            index: i + 1,
            factors: lifted.iter().map(MultiPoly::to_string).collect(),
            product_matches: product == specialized,
        });
        lifted_by_index.push(lifted);
    }
    for i in 0..m {
        for j in i + 1..m {
            let polys: Vec<MultiPoly> = lifted_by_index[i]
                .iter()
                .map(|f| f.specialize(j, &BigInt::zero()))
                .collect();
            for a in 0..polys.len() {
                for b in a + 1..polys.len() {
                    if polys[a] == polys[b] && polys[a].t_degree() > 0 {
                        congruent_pairs.push(CongruentPair {
                            indices: [i + 1, j + 1],
                            components: [a, b],
                            residual: polys[a].to_string(),
                        });
                    }
                }
            }
        }
    }
    SpecializationReport { per_index, congruent_pairs }
}
