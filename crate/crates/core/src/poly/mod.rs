//! Exact multivariate polynomials over arbitrary-precision integers.
//!
//! A [`MultiPoly`] in `m` lattice variables lives in Z[y1..ym, x1..xm, t]
//! where `xk` stands for the k-th frequency variable and `yk` for its square
//! root (`yk^2 = xk`). Block-matrix entries use the `y` variables; the
//! characteristic polynomials obtained from them always carry the roots in
//! even powers, and [`MultiPoly::eliminate_roots`] rewrites them into
//! Z[x1..xm, t].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub mod modp;
pub mod zuni;

use crate::error::PolyError;

/// Exponent vector with layout `[t, x1..xm, y1..ym]`.
///
/// Ordered by total degree first and lexicographically second, so the
/// reverse iteration order of a `BTreeMap` keyed by `Mono` is exactly the
/// canonical display order. The total degree is cached at construction;
/// comparisons sit on the hottest path of the determinant expansion.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono {
    deg: u32,
    exps: Vec<u16>,
}

impl Mono {
    pub fn new(exps: Vec<u16>) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Mono { deg, exps }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    fn total_degree(&self) -> u32 {
        self.deg
    }

    /// Componentwise sum; the degree of a product is the sum of degrees.
    fn product_with(&self, other: &Self) -> Self {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Mono { deg: self.deg + other.deg, exps }
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse exact polynomial in Z[y1..ym, x1..xm, t].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly {
    m: usize,
    terms: BTreeMap<Mono, BigInt>,
}

impl MultiPoly {
    pub fn zero(m: usize) -> Self {
        MultiPoly { m, terms: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(m);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(Mono::new(vec![0; 1 + 2 * m]), c);
        }
        p
    }

    pub fn one(m: usize) -> Self {
        Self::constant(m, 1)
    }

    fn monomial(m: usize, build: impl FnOnce(&mut Vec<u16>)) -> Self {
        let mut exps = vec![0u16; 1 + 2 * m];
        build(&mut exps);
        let mut p = Self::zero(m);
        p.terms.insert(Mono::new(exps), BigInt::one());
        p
    }

    /// The spectral variable `t`.
    pub fn t(m: usize) -> Self {
        Self::monomial(m, |e| e[0] = 1)
    }

    /// The frequency variable `x(i)`, zero-indexed.
    pub fn x(m: usize, i: usize) -> Self {
        assert!(i < m, "variable index out of range");
        Self::monomial(m, |e| e[1 + i] = 1)
    }

    /// The root variable `y(i)` with `y(i)^2 = x(i)`, zero-indexed.
    pub fn y(m: usize, i: usize) -> Self {
        assert!(i < m, "variable index out of range");
        Self::monomial(m, |e| e[1 + m + i] = 1)
    }

    /// Linear form `sum u_i * x_i`.
    pub fn linear_form(m: usize, u: &[i64]) -> Self {
        assert_eq!(u.len(), m);
        let mut p = Self::zero(m);
        for (i, &c) in u.iter().enumerate() {
            if c != 0 {
                let mut exps = vec![0u16; 1 + 2 * m];
                exps[1 + i] = 1;
                p.add_term(Mono::new(exps), BigInt::from(c));
            }
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, mono: Mono, coeff: BigInt) {
        debug_assert_eq!(mono.exps().len(), 1 + 2 * self.m);
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "variable count mismatch");
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(mono.clone(), c.clone());
        }
        out
    }


    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "variable count mismatch");
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(mono.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "variable count mismatch");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.m);
        }
        let (small, big) =
            if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let sv: TermVec = small.terms.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let bv: TermVec = big.terms.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        MultiPoly { m: self.m, terms: mul_term_vecs(&sv, &bv).into_iter().collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.m);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.m);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::total_degree).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Mono::total_degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Degree in `t`.
    pub fn t_degree(&self) -> usize {
        self.terms.keys().map(|mono| mono.exps()[0] as usize).max().unwrap_or(0)
    }

    /// Does any term carry a root variable?
    pub fn has_roots(&self) -> bool {
        self.terms.keys().any(|mono| mono.exps()[1 + self.m..].iter().any(|&e| e > 0))
    }

    /// Coefficient of `t^k`, as a polynomial in the remaining variables.
    pub fn coeff_of_t(&self, k: usize) -> Self {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            if mono.exps()[0] as usize == k {
                let mut exps = mono.exps().to_vec();
                exps[0] = 0;
                out.add_term(Mono::new(exps), c.clone());
            }
        }
        out
    }

    /// `true` when the leading `t`-coefficient is the constant 1.
    pub fn is_monic_in_t(&self) -> bool {
        self.coeff_of_t(self.t_degree()) == Self::one(self.m)
    }

    /// Rewrites every `yk^(2j)` as `xk^j`.
    ///
    /// Fails loudly on an odd root exponent: that would mean a block
    /// characteristic polynomial with a path whose marking multiset is odd,
    /// which the closed-path structure rules out. The failure is never
    /// silently repaired.
    pub fn eliminate_roots(&self) -> Result<Self, PolyError> {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            let mut exps = mono.exps().to_vec();
            for i in 0..self.m {
                let ye = exps[1 + self.m + i];
                if ye % 2 != 0 {
                    return Err(PolyError::OddRootExponent { term: format_term(self.m, mono, c) });
                }
                exps[1 + i] += ye / 2;
                exps[1 + self.m + i] = 0;
            }
            out.add_term(Mono::new(exps), c.clone());
        }
        Ok(out)
    }

    /// Exact substitution `x(i) := value` (and `y(i)^2 := value`).
    ///
    /// With `value = 0` every term carrying `x(i)` or `y(i)` vanishes.
    /// Nonzero values require even root exponents; block polynomials always
    /// satisfy this once the roots are eliminated.
    pub fn specialize(&self, i: usize, value: &BigInt) -> Self {
        assert!(i < self.m);
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            let xe = mono.exps()[1 + i] as u32;
            let ye = mono.exps()[1 + self.m + i] as u32;
            if value.is_zero() {
                if xe > 0 || ye > 0 {
                    continue;
                }
                out.add_term(mono.clone(), c.clone());
            } else {
                assert!(ye % 2 == 0, "odd root exponent under nonzero specialization");
                let mut exps = mono.exps().to_vec();
                exps[1 + i] = 0;
                exps[1 + self.m + i] = 0;
                out.add_term(Mono::new(exps), c * value.pow(xe + ye / 2));
            }
        }
        out
    }

    /// Embeds into `m+1` variables by inserting a fresh unused variable at
    /// position `pos` (used to lift projected-component polynomials back to
    /// the parent variable set).
    pub fn insert_var(&self, pos: usize) -> Self {
        assert!(pos <= self.m);
        let m2 = self.m + 1;
        let mut out = Self::zero(m2);
        for (mono, c) in &self.terms {
            let mut exps = Vec::with_capacity(1 + 2 * m2);
            exps.push(mono.exps()[0]);
            exps.extend_from_slice(&mono.exps()[1..1 + pos]);
            exps.push(0);
            exps.extend_from_slice(&mono.exps()[1 + pos..1 + self.m]);
            exps.extend_from_slice(&mono.exps()[1 + self.m..1 + self.m + pos]);
            exps.push(0);
            exps.extend_from_slice(&mono.exps()[1 + self.m + pos..]);
            out.add_term(Mono::new(exps), c.clone());
        }
        out
    }

    /// Multiplies by `t^k`.
    pub fn shift_t(&self, k: usize) -> Self {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            let mut exps = mono.exps().to_vec();
            exps[0] += k as u16;
            out.add_term(Mono::new(exps), c.clone());
        }
        out
    }

    /// Division with remainder by a divisor that is monic in `t`, performed
    /// in `Z[x][t]`. Returns `(quotient, remainder)` with the remainder of
    /// `t`-degree strictly below the divisor's. `None` when the divisor is
    /// not monic in `t`.
    pub fn divrem_t(&self, den: &Self) -> Option<(Self, Self)> {
        assert_eq!(self.m, den.m);
        if !den.is_monic_in_t() {
            return None;
        }
        let d = den.t_degree();
        let mut quotient = Self::zero(self.m);
        let mut rem = self.clone();
        while !rem.is_zero() && rem.t_degree() >= d {
            let k = rem.t_degree();
            let lead = rem.coeff_of_t(k);
            if lead.is_zero() {
                break;
            }
            let q_term = lead.shift_t(k - d);
            quotient = quotient.add(&q_term);
            rem = rem.sub(&q_term.mul(den));
        }
        Some((quotient, rem))
    }

    /// Substitutes `t := r` where `r` is any polynomial in the same variables.
    pub fn subst_t(&self, r: &Self) -> Self {
        assert_eq!(self.m, r.m);
        // Horner evaluation over the t-coefficients.
        let d = self.t_degree();
        let mut acc = self.coeff_of_t(d);
        for k in (0..d).rev() {
            acc = acc.mul(r).add(&self.coeff_of_t(k));
        }
        acc
    }

    pub fn derivative_t(&self) -> Self {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            let k = mono.exps()[0];
            if k > 0 {
                let mut exps = mono.exps().to_vec();
                exps[0] = k - 1;
                out.add_term(Mono::new(exps), c * BigInt::from(k));
            }
        }
        out
    }

    /// Evaluates at positive frequencies (so `y(i) = sqrt(x_i)` is real) and
    /// a complex `t`.
    pub fn eval_complex(&self, xi: &[f64], tval: Complex64) -> Result<Complex64, PolyError> {
        if xi.len() != self.m {
            return Err(PolyError::DimensionMismatch { expected: self.m, got: xi.len() });
        }
        if xi.iter().any(|&v| v <= 0.0) {
            return Err(PolyError::NonPositiveFrequency);
        }
        let roots: Vec<f64> = xi.iter().map(|&v| v.sqrt()).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (mono, c) in &self.terms {
            let mut term = Complex64::new(coeff_to_f64(c), 0.0);
            term *= tval.powu(mono.exps()[0] as u32);
            for i in 0..self.m {
                term *= Complex64::new(xi[i].powi(mono.exps()[1 + i] as i32), 0.0);
                term *= Complex64::new(roots[i].powi(mono.exps()[1 + self.m + i] as i32), 0.0);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Sum of absolute term values at `|t| = tmag`; a residual scale for
    /// floating cross-checks.
    pub fn eval_majorant(&self, xi: &[f64], tmag: f64) -> Result<f64, PolyError> {
        if xi.len() != self.m {
            return Err(PolyError::DimensionMismatch { expected: self.m, got: xi.len() });
        }
        if xi.iter().any(|&v| v <= 0.0) {
            return Err(PolyError::NonPositiveFrequency);
        }
        let roots: Vec<f64> = xi.iter().map(|&v| v.sqrt()).collect();
        let tm = tmag.max(1.0);
        let mut acc = 0.0;
        for (mono, c) in &self.terms {
            let mut term = coeff_to_f64(c).abs();
            term *= tm.powi(mono.exps()[0] as i32);
            for i in 0..self.m {
                term *= xi[i].powi(mono.exps()[1 + i] as i32);
                term *= roots[i].powi(mono.exps()[1 + self.m + i] as i32);
            }
            acc += term;
        }
        Ok(acc.max(1.0))
    }

    /// Substitutes integer frequencies, returning the univariate coefficients
    /// of the result in `t` (constant term first). Requires a root-free
    /// polynomial.
    pub fn eval_int(&self, z: &[BigInt]) -> Result<Vec<BigInt>, PolyError> {
        if z.len() != self.m {
            return Err(PolyError::DimensionMismatch { expected: self.m, got: z.len() });
        }
        if self.has_roots() {
            return Err(PolyError::OddRootExponent { term: "root variable in integer evaluation".into() });
        }
        let d = self.t_degree();
        let mut coeffs = vec![BigInt::zero(); d + 1];
        for (mono, c) in &self.terms {
            let mut v = c.clone();
            for i in 0..self.m {
                let e = mono.exps()[1 + i] as u32;
                if e > 0 {
                    v *= z[i].pow(e);
                }
            }
            coeffs[mono.exps()[0] as usize] += v;
        }
        Ok(coeffs)
    }

    /// Determinant by cofactor expansion with memoization on the live column
    /// subset; exact, and quick at block sizes (matrices up to ~10x10).
    pub fn det(mat: &[Vec<MultiPoly>]) -> MultiPoly {
        let n = mat.len();
        if n == 0 {
            return MultiPoly::one(0);
        }
        let m = mat[0][0].m;
        for row in mat {
            assert_eq!(row.len(), n, "determinant of a non-square matrix");
        }
        assert!(n <= 32, "block too large for subset memoization");
        let entries: Vec<Vec<TermVec>> = mat
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| p.terms.iter().map(|(k, v)| (k.clone(), v.clone())).collect())
                    .collect()
            })
            .collect();
        let mut memo: HashMap<u32, Rc<TermVec>> = HashMap::new();
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let out = det_rec(&entries, m, n, full, &mut memo);
        drop(memo);
        let terms = Rc::try_unwrap(out).unwrap_or_else(|rc| (*rc).clone());
        MultiPoly { m, terms: terms.into_iter().collect() }
    }

    /// `det(t*Id - mat)`, the characteristic polynomial of `mat`.
    pub fn charpoly_of(mat: &[Vec<MultiPoly>]) -> MultiPoly {
        let n = mat.len();
        if n == 0 {
            return MultiPoly::one(0);
        }
        let m = mat[0][0].m;
        let tvar = MultiPoly::t(m);
        let shifted: Vec<Vec<MultiPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { tvar.sub(&mat[i][j]) } else { mat[i][j].neg() })
                    .collect()
            })
            .collect();
        Self::det(&shifted)
    }

    /// Parses the canonical text format, e.g. `3*x1*x2 - t^2` or
    /// `t^2 + x1*t + x2*t + 4*x1*x2`.
    pub fn parse(m: usize, input: &str) -> Result<Self, PolyError> {
        Parser { m, bytes: input.as_bytes(), pos: 0, input }.parse()
    }
}

/// Sorted term list, the internal currency of multiplication and the
/// determinant expansion; same content as `MultiPoly::terms` without the tree.
type TermVec = Vec<(Mono, BigInt)>;

/// Product of two sorted term lists; `small` should be the shorter one.
///
/// One sorted row per term of `small`: shifting every monomial of `big` by a
/// fixed exponent vector preserves the (degree, lexicographic) order, so the
/// rows need no sorting and reduce by balanced pairwise merges.
fn mul_term_vecs(small: &[(Mono, BigInt)], big: &[(Mono, BigInt)]) -> TermVec {
    let mut rows: Vec<TermVec> = small
        .iter()
        .map(|(mo, co)| big.iter().map(|(mi, ci)| (mi.product_with(mo), ci * co)).collect())
        .collect();
    while rows.len() > 1 {
        let mut next = Vec::with_capacity(rows.len().div_ceil(2));
        let mut it = rows.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(merge_sorted_terms(a, b)),
                None => next.push(a),
            }
        }
        rows = next;
    }
    rows.pop().unwrap_or_default()
}

fn negate_terms(v: TermVec) -> TermVec {
    v.into_iter().map(|(mono, c)| (mono, -c)).collect()
}

fn det_rec(
    mat: &[Vec<TermVec>],
    m: usize,
    n: usize,
    cols: u32,
    memo: &mut HashMap<u32, Rc<TermVec>>,
) -> Rc<TermVec> {
    let k = cols.count_ones() as usize;
    if k == 0 {
        return Rc::new(vec![(Mono::new(vec![0; 1 + 2 * m]), BigInt::one())]);
    }
    if let Some(hit) = memo.get(&cols) {
        return Rc::clone(hit);
    }
    let row = n - k;
    let mut acc = TermVec::new();
    let mut sign = false;
    for j in 0..n {
        if cols & (1 << j) == 0 {
            continue;
        }
        let entry = &mat[row][j];
        if !entry.is_empty() {
            let minor = det_rec(mat, m, n, cols & !(1 << j), memo);
            let prod = mul_term_vecs(entry, &minor);
            acc = merge_sorted_terms(acc, if sign { negate_terms(prod) } else { prod });
        }
        sign = !sign;
    }
    let shared = Rc::new(acc);
    memo.insert(cols, Rc::clone(&shared));
    shared
}

/// Merges two term lists sorted ascending by monomial, summing coefficients
/// on collisions and dropping exact cancellations.
fn merge_sorted_terms(
    a: Vec<(Mono, BigInt)>,
    b: Vec<(Mono, BigInt)>,
) -> Vec<(Mono, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().peekable();
    loop {
        let order = match (ia.peek(), ib.peek()) {
            (Some((ka, _)), Some((kb, _))) => ka.cmp(kb),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => break,
        };
        match order {
            Ordering::Less => out.push(ia.next().expect("peeked")),
            Ordering::Greater => out.push(ib.next().expect("peeked")),
            Ordering::Equal => {
                let (mono, ca) = ia.next().expect("peeked");
                let (_, cb) = ib.next().expect("peeked");
                let c = ca + cb;
                if !c.is_zero() {
                    out.push((mono, c));
                }
            }
        }
    }
    out
}

fn coeff_to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or_else(|| if c.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

fn format_term(m: usize, mono: &Mono, coeff: &BigInt) -> String {
    let mut factors: Vec<String> = Vec::new();
    let push = |factors: &mut Vec<String>, name: String, e: u16| {
        if e == 1 {
            factors.push(name);
        } else if e > 1 {
            factors.push(format!("{name}^{e}"));
        }
    };
    for i in 0..m {
        push(&mut factors, format!("x{}", i + 1), mono.exps()[1 + i]);
    }
    for i in 0..m {
        push(&mut factors, format!("y{}", i + 1), mono.exps()[1 + m + i]);
    }
    push(&mut factors, "t".into(), mono.exps()[0]);
    let mag = coeff.magnitude();
    if factors.is_empty() {
        format!("{mag}")
    } else if mag.is_one() {
        factors.join("*")
    } else {
        format!("{}*{}", mag, factors.join("*"))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (mono, coeff)) in self.terms.iter().rev().enumerate() {
            if idx == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_term(self.m, mono, coeff))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    m: usize,
    bytes: &'a [u8],
    pos: usize,
    input: &'a str,
}

impl<'a> Parser<'a> {
    fn parse(mut self) -> Result<MultiPoly, PolyError> {
        let mut out = MultiPoly::zero(self.m);
        self.skip_ws();
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        loop {
            let (mono, coeff) = self.term()?;
            out.add_term(mono, if negate { -coeff } else { coeff });
            self.skip_ws();
            if self.pos >= self.bytes.len() {
                break;
            }
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                return Err(self.fail("expected '+' or '-'"));
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Mono, BigInt), PolyError> {
        let mut coeff = BigInt::one();
        let mut exps = vec![0u16; 1 + 2 * self.m];
        loop {
            self.skip_ws();
            let c = *self.bytes.get(self.pos).ok_or_else(|| self.fail("unexpected end of input"))?;
            if c.is_ascii_digit() {
                coeff *= self.integer()?;
            } else if c == b't' || c == b'x' || c == b'y' {
                let slot = self.variable()?;
                let e = if self.eat(b'^') { self.exponent()? } else { 1 };
                exps[slot] = exps[slot]
                    .checked_add(e)
                    .ok_or_else(|| self.fail("exponent overflow"))?;
            } else {
                return Err(self.fail("expected a number or a variable"));
            }
            self.skip_ws();
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((Mono::new(exps), coeff))
    }

    fn variable(&mut self) -> Result<usize, PolyError> {
        let c = self.bytes[self.pos];
        self.pos += 1;
        if c == b't' {
            return Ok(0);
        }
        let idx = self.integer()?.to_usize().filter(|&k| k >= 1 && k <= self.m).ok_or_else(|| {
            self.fail(&format!("variable index out of range 1..={}", self.m))
        })?;
        Ok(if c == b'x' { idx } else { self.m + idx })
    }

    fn exponent(&mut self) -> Result<u16, PolyError> {
        self.integer()?.to_u16().ok_or_else(|| self.fail("exponent too large"))
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.fail("expected an integer"));
        }
        Ok(self.input[start..self.pos].parse().expect("digits parse as BigInt"))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos] == b' ' {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn fail(&self, msg: &str) -> PolyError {
        PolyError::Parse { at: self.pos, message: msg.into() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_poly(rng: &mut StdRng, m: usize, terms: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(m);
        for _ in 0..terms {
            let mut exps = vec![0u16; 1 + 2 * m];
            for e in exps.iter_mut() {
                *e = rng.gen_range(0..3);
            }
            p.add_term(Mono::new(exps), BigInt::from(rng.gen_range(-6i64..=6)));
        }
        p
    }

    /// Random polynomial with even root exponents only, so that nonzero
    /// specialization is defined.
    fn random_rootfree_poly(rng: &mut StdRng, m: usize, terms: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(m);
        for _ in 0..terms {
            let mut exps = vec![0u16; 1 + 2 * m];
            for (slot, e) in exps.iter_mut().enumerate() {
                *e = rng.gen_range(0..3);
                if slot > m {
                    *e *= 2;
                }
            }
            p.add_term(Mono::new(exps), BigInt::from(rng.gen_range(-6i64..=6)));
        }
        p
    }

    #[test]
    fn ring_laws_hold_on_random_triples() {
        let mut rng = StdRng::seed_from_u64(0xABCD_0001);
        for _ in 0..500 {
            let m = rng.gen_range(1..=3);
            let a = random_poly(&mut rng, m, 4);
            let b = random_poly(&mut rng, m, 4);
            let c = random_poly(&mut rng, m, 4);
            assert_eq!(a.add(&b), b.add(&a));
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.sub(&a), MultiPoly::zero(m));
            assert_eq!(a.mul(&MultiPoly::one(m)), a);
        }
    }

    /// Independent oracle: Laplace expansion along the first row, no memo.
    fn det_oracle(mat: &[Vec<MultiPoly>]) -> MultiPoly {
        let n = mat.len();
        let m = mat[0][0].num_vars();
        if n == 1 {
            return mat[0][0].clone();
        }
        let mut acc = MultiPoly::zero(m);
        for j in 0..n {
            let minor: Vec<Vec<MultiPoly>> = (1..n)
                .map(|i| (0..n).filter(|&k| k != j).map(|k| mat[i][k].clone()).collect())
                .collect();
            let term = mat[0][j].mul(&det_oracle(&minor));
            acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    #[test]
    fn memoized_determinant_matches_plain_laplace_expansion() {
        let mut rng = StdRng::seed_from_u64(0xABCD_0002);
        for _ in 0..60 {
            let n = rng.gen_range(1..=4);
            let m = rng.gen_range(1..=2);
            let mat: Vec<Vec<MultiPoly>> =
                (0..n).map(|_| (0..n).map(|_| random_poly(&mut rng, m, 2)).collect()).collect();
            assert_eq!(MultiPoly::det(&mat), det_oracle(&mat));
        }
    }

    #[test]
    fn charpoly_of_integer_matrix_matches_hand_computation() {
        // [[1, 2], [3, 4]] has char poly t^2 - 5t - 2.
        let c = |v: i64| MultiPoly::constant(0, v);
        let mat = vec![vec![c(1), c(2)], vec![c(3), c(4)]];
        let chi = MultiPoly::charpoly_of(&mat);
        let expect = MultiPoly::parse(0, "t^2 - 5*t - 2").unwrap();
        assert_eq!(chi, expect);
    }

    #[test]
    fn eliminate_roots_rewrites_even_powers() {
        let m = 2;
        // 4*y1^2*y2^2 + y1^4 -> 4*x1*x2 + x1^2
        let p = MultiPoly::y(m, 0).pow(2).mul(&MultiPoly::y(m, 1).pow(2)).scale(&BigInt::from(4))
            .add(&MultiPoly::y(m, 0).pow(4));
        let q = p.eliminate_roots().unwrap();
        assert_eq!(q, MultiPoly::parse(m, "x1^2 + 4*x1*x2").unwrap());
    }

    #[test]
    fn eliminate_roots_rejects_odd_exponents() {
        let p = MultiPoly::y(1, 0);
        let err = p.eliminate_roots().unwrap_err();
        assert!(matches!(err, PolyError::OddRootExponent { .. }), "got {err:?}");
    }

    #[test]
    fn specialize_at_zero_kills_root_terms_of_any_parity() {
        let m = 2;
        let p = MultiPoly::y(m, 0).add(&MultiPoly::y(m, 0).pow(2)).add(&MultiPoly::x(m, 1));
        assert_eq!(p.specialize(0, &BigInt::zero()), MultiPoly::x(m, 1));
    }

    #[test]
    fn specialization_commutes_with_arithmetic() {
        let mut rng = StdRng::seed_from_u64(0xABCD_0003);
        for _ in 0..200 {
            let m = 2;
            let a = random_rootfree_poly(&mut rng, m, 4);
            let b = random_rootfree_poly(&mut rng, m, 4);
            let i = rng.gen_range(0..m);
            let v = BigInt::from(rng.gen_range(-3i64..=3));
            assert_eq!(a.mul(&b).specialize(i, &v), a.specialize(i, &v).mul(&b.specialize(i, &v)));
            assert_eq!(a.add(&b).specialize(i, &v), a.specialize(i, &v).add(&b.specialize(i, &v)));
        }
    }

    #[test]
    fn canonical_display_orders_by_total_degree_then_lexicographically() {
        let m = 2;
        let t = MultiPoly::t(m);
        let x1 = MultiPoly::x(m, 0);
        let x2 = MultiPoly::x(m, 1);
        let chi = t.pow(2).add(&x1.mul(&t)).add(&x2.mul(&t)).add(&x1.mul(&x2).scale(&BigInt::from(4)));
        assert_eq!(chi.to_string(), "t^2 + x1*t + x2*t + 4*x1*x2");
    }

    #[test]
    fn display_parse_round_trip_is_exact() {
        let mut rng = StdRng::seed_from_u64(0xABCD_0004);
        for _ in 0..300 {
            let m = rng.gen_range(1..=3);
            let p = random_poly(&mut rng, m, 5);
            let q = MultiPoly::parse(m, &p.to_string()).unwrap();
            assert_eq!(p, q, "round trip failed for {p}");
        }
    }

    #[test]
    fn parse_accepts_the_documented_example() {
        let p = MultiPoly::parse(2, "3*x1*x2 - t^2").unwrap();
        assert_eq!(p.to_string(), "-t^2 + 3*x1*x2");
        assert_eq!(p.t_degree(), 2);
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(MultiPoly::parse(2, "x3 + 1").is_err());
        assert!(MultiPoly::parse(2, "t +").is_err());
        assert!(MultiPoly::parse(2, "* x1").is_err());
    }

    #[test]
    fn eval_complex_matches_known_values() {
        // chi_G1 = t^2 + x1*t + x2*t - 3*x1*x2 vanishes at (1,1,t=1).
        let chi = MultiPoly::parse(2, "t^2 + x1*t + x2*t - 3*x1*x2").unwrap();
        let v = chi.eval_complex(&[1.0, 1.0], Complex64::new(1.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-12);
        assert!(chi.eval_complex(&[1.0, -1.0], Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn subst_t_shifts_polynomials_exactly() {
        let m = 1;
        let chi = MultiPoly::parse(m, "t^2 - x1^2").unwrap();
        let shift = MultiPoly::parse(m, "t + x1").unwrap();
        assert_eq!(chi.subst_t(&shift), MultiPoly::parse(m, "t^2 + 2*x1*t").unwrap());
    }

    #[test]
    fn insert_var_round_trips_through_specialization() {
        let p = MultiPoly::parse(2, "t^2 + x1*x2 + 5*x2^2").unwrap();
        let q = p.insert_var(1);
        assert_eq!(q.num_vars(), 3);
        assert_eq!(q.to_string(), "t^2 + x1*x3 + 5*x3^2");
        assert_eq!(q.specialize(1, &BigInt::zero()), q);
    }

    #[test]
    fn eval_int_returns_t_coefficients() {
        let chi = MultiPoly::parse(2, "t^2 + x1*t + x2*t - 3*x1*x2").unwrap();
        let coeffs = chi.eval_int(&[BigInt::from(2), BigInt::from(3)]).unwrap();
        assert_eq!(coeffs, vec![BigInt::from(-18), BigInt::from(5), BigInt::from(1)]);
    }

    #[test]
    fn division_in_t_recovers_quotient_and_remainder() {
        let m = 2;
        let f = MultiPoly::parse(m, "t - x1 + x2").unwrap();
        let g = MultiPoly::parse(m, "t^2 - 2*x1*t + 2*x2*t - 8*x1*x2").unwrap();
        let chi = f.mul(&g);
        let (q, r) = chi.divrem_t(&f).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, g);

        // A non-divisor leaves the substitution value as remainder.
        let h = MultiPoly::parse(m, "t - x1").unwrap();
        let (q2, r2) = chi.divrem_t(&h).unwrap();
        assert_eq!(r2, chi.subst_t(&MultiPoly::parse(m, "x1").unwrap()));
        assert!(!r2.is_zero());
        assert_eq!(q2.mul(&h).add(&r2), chi);

        // Non-monic divisors are rejected.
        assert!(chi.divrem_t(&MultiPoly::parse(m, "2*t").unwrap()).is_none());
        assert!(chi.divrem_t(&MultiPoly::parse(m, "x1").unwrap()).is_none());
    }
}
