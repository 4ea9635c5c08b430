//! The lattice group Z^m x| Z/2, its quadratic energy maps and edge rules.
//!
//! Elements are written `(a, sigma)` with `a` in Z^m and `sigma = -1` marking
//! the twisted copy; the product is `(a, s)(b, r) = (a + s b, s r)`, so the
//! twist `tau = (0, -1)` conjugates by negation. Combinatorial vertices are
//! coordinate vectors whose mass (coordinate sum) is 0 (black) or -2 (red);
//! the twist of a vertex is its color and is never stored separately.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;

pub type Coord = i64;

/// Vertex color: black vertices are untwisted group elements of mass 0, red
/// vertices are twisted elements of mass -2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Black,
    Red,
}

impl Color {
    /// The sign `sigma` entering the quadratic energy map.
    pub fn sign(self) -> i64 {
        match self {
            Color::Black => 1,
            Color::Red => -1,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Color::Black => Color::Red,
            Color::Red => Color::Black,
        }
    }
}

/// Returns the color a combinatorial vertex of the given mass would carry.
pub fn color_of_mass(mass: i64) -> Option<Color> {
    match mass {
        0 => Some(Color::Black),
        -2 => Some(Color::Red),
        _ => None,
    }
}

/// A group element `(coeffs, twisted)` of Z^m x| Z/2.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement {
    pub coeffs: Vec<Coord>,
    pub twisted: bool,
}

impl GroupElement {
    pub fn identity(m: usize) -> Self {
        GroupElement { coeffs: vec![0; m], twisted: false }
    }

    pub fn new(coeffs: Vec<Coord>, twisted: bool) -> Self {
        GroupElement { coeffs, twisted }
    }

    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    /// Group product `(a, s)(b, r) = (a + s b, s r)`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.m(), other.m(), "rank mismatch");
        let s = if self.twisted { -1 } else { 1 };
        GroupElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + s * b).collect(),
            twisted: self.twisted ^ other.twisted,
        }
    }

    pub fn inverse(&self) -> Self {
        if self.twisted {
            // (a, -)^-1 = (a, -): twisted elements are involutions.
            self.clone()
        } else {
            GroupElement { coeffs: self.coeffs.iter().map(|a| -a).collect(), twisted: false }
        }
    }

    /// Mass: the coordinate sum, blind to the twist.
    pub fn mass(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Parses `[a1,...,am]` or `[a1,...,am]t`.
    pub fn parse(s: &str) -> Result<Self, GraphError> {
        let s = s.trim();
        let (body, twisted) = match s.strip_suffix('t') {
            Some(rest) => (rest.trim(), true),
            None => (s, false),
        };
        let inner = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| GraphError::Parse(format!("expected [a1,...,am], got `{s}`")))?;
        let coeffs = inner
            .split(',')
            .map(|tok| tok.trim().parse::<Coord>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| GraphError::Parse(format!("bad coordinate in `{s}`: {e}")))?;
        Ok(GroupElement { coeffs, twisted })
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")?;
        if self.twisted {
            write!(f, "t")?;
        }
        Ok(())
    }
}

/// Integer quadratic form `sum d_i e_i^2 + sum c_ij e_i e_j` on the lattice
/// directions, the value space of the quadratic energy map.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QuadForm {
    /// Coefficients of `e_i^2`.
    pub diag: Vec<BigInt>,
    /// Coefficients of `e_i e_j` for `i < j`.
    pub cross: BTreeMap<(usize, usize), BigInt>,
}

impl QuadForm {
    pub fn zero(m: usize) -> Self {
        QuadForm { diag: vec![BigInt::zero(); m], cross: BTreeMap::new() }
    }

    pub fn m(&self) -> usize {
        self.diag.len()
    }

    pub fn is_zero(&self) -> bool {
        self.diag.iter().all(Zero::is_zero) && self.cross.values().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.m(), other.m());
        let mut out = self.clone();
        for (d, o) in out.diag.iter_mut().zip(&other.diag) {
            *d += o;
        }
        for (k, v) in &other.cross {
            *out.cross.entry(*k).or_insert_with(BigInt::zero) += v;
        }
        out.normalize();
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = self.clone();
        for d in out.diag.iter_mut() {
            *d *= c;
        }
        for v in out.cross.values_mut() {
            *v *= c;
        }
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        self.cross.retain(|_, v| !v.is_zero());
    }

    /// Pushes the form through the momentum map: `e_i^2 -> |v_i|^2`,
    /// `e_i e_j -> (v_i, v_j)`.
    pub fn momentum(&self, sites: &TangentialSites) -> BigInt {
        assert_eq!(self.m(), sites.len());
        let mut acc = BigInt::zero();
        for (i, d) in self.diag.iter().enumerate() {
            acc += d * sites.dot(i, i);
        }
        for (&(i, j), c) in &self.cross {
            acc += c * sites.dot(i, j);
        }
        acc
    }

    /// The product form of two linear lattice vectors, `u * v` expanded on
    /// the `e_i e_j` basis.
    pub fn product_of(u: &[Coord], v: &[Coord]) -> Self {
        assert_eq!(u.len(), v.len());
        let m = u.len();
        let mut out = QuadForm::zero(m);
        for i in 0..m {
            out.diag[i] = BigInt::from(u[i] * v[i]);
        }
        for i in 0..m {
            for j in i + 1..m {
                let c = u[i] * v[j] + u[j] * v[i];
                if c != 0 {
                    out.cross.insert((i, j), BigInt::from(c));
                }
            }
        }
        out
    }
}

/// Quadratic energy of a group element with coordinates `a` and sign
/// `sigma`: `(sigma/2) (a^2 + a^(2))`, i.e. diagonal terms
/// `sigma * a_i (a_i + 1) / 2` and cross terms `sigma * a_i a_j`.
pub fn quad_energy(a: &[Coord], color: Color) -> QuadForm {
    let m = a.len();
    let sigma = color.sign();
    let mut out = QuadForm::zero(m);
    for i in 0..m {
        let d = sigma * a[i] * (a[i] + 1) / 2;
        out.diag[i] = BigInt::from(d);
    }
    for i in 0..m {
        for j in i + 1..m {
            let c = sigma * a[i] * a[j];
            if c != 0 {
                out.cross.insert((i, j), BigInt::from(c));
            }
        }
    }
    out
}

/// Scalar energy: the momentum of the quadratic energy,
/// `(sigma/2) (|sum a_i v_i|^2 + sum a_i |v_i|^2)`.
pub fn scalar_energy(a: &[Coord], color: Color, sites: &TangentialSites) -> BigInt {
    quad_energy(a, color).momentum(sites)
}

/// Edge marking between two vertices of the generator graph: `Black { i, j }`
/// when the difference is `±(e_i - e_j)` within one color class and
/// `Red { i, j }` when the sum is `-e_i - e_j` across color classes
/// (`i < j` always).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EdgeKind {
    Black { i: usize, j: usize },
    Red { i: usize, j: usize },
}

impl EdgeKind {
    pub fn marking(&self) -> (usize, usize) {
        match *self {
            EdgeKind::Black { i, j } | EdgeKind::Red { i, j } => (i, j),
        }
    }

    pub fn involves(&self, index: usize) -> bool {
        let (i, j) = self.marking();
        i == index || j == index
    }
}

/// Edge rule for explicitly colored vertices.
pub fn edge_between_colored(a: &[Coord], ca: Color, b: &[Coord], cb: Color) -> Option<EdgeKind> {
    assert_eq!(a.len(), b.len());
    if ca == cb {
        // Difference must be e_i - e_j for some i != j.
        let mut plus = None;
        let mut minus = None;
        for (k, (x, y)) in a.iter().zip(b).enumerate() {
            match y - x {
                0 => {}
                1 if plus.is_none() => plus = Some(k),
                -1 if minus.is_none() => minus = Some(k),
                _ => return None,
            }
        }
        match (plus, minus) {
            (Some(i), Some(j)) => {
                let (i, j) = if i < j { (i, j) } else { (j, i) };
                Some(EdgeKind::Black { i, j })
            }
            _ => None,
        }
    } else {
        // Sum must be -e_i - e_j for some i != j.
        let mut ones = Vec::new();
        for (k, (x, y)) in a.iter().zip(b).enumerate() {
            match x + y {
                0 => {}
                -1 => ones.push(k),
                _ => return None,
            }
        }
        match ones.as_slice() {
            [i, j] => Some(EdgeKind::Red { i: *i, j: *j }),
            _ => None,
        }
    }
}

/// Edge rule for combinatorial vertices (colors derived from masses, which
/// must lie in {0, -2}).
pub fn edge_between(a: &[Coord], b: &[Coord]) -> Option<EdgeKind> {
    let ca = color_of_mass(a.iter().sum())?;
    let cb = color_of_mass(b.iter().sum())?;
    edge_between_colored(a, ca, b, cb)
}

/// A tangential site family: distinct integer vectors `v_1..v_m` in Z^n.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TangentialSites {
    pub vectors: Vec<Vec<Coord>>,
}

impl TangentialSites {
    pub fn new(vectors: Vec<Vec<Coord>>) -> Self {
        if let Some(first) = vectors.first() {
            assert!(vectors.iter().all(|v| v.len() == first.len()), "sites of mixed dimension");
        }
        TangentialSites { vectors }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    pub fn dot(&self, i: usize, j: usize) -> BigInt {
        let s: i128 = self.vectors[i]
            .iter()
            .zip(&self.vectors[j])
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum();
        BigInt::from(s)
    }

    /// Momentum of a lattice vector: `sum a_i v_i` in Z^n.
    pub fn momentum_vector(&self, a: &[Coord]) -> Vec<BigInt> {
        assert_eq!(a.len(), self.len());
        let n = self.ambient_dim();
        let mut out = vec![BigInt::zero(); n];
        for (ai, v) in a.iter().zip(&self.vectors) {
            if *ai != 0 {
                for (slot, c) in out.iter_mut().zip(v) {
                    *slot += BigInt::from(*ai) * BigInt::from(*c);
                }
            }
        }
        out
    }

    /// Genericity: pairwise distinct sites whose Gram matrix has full rank.
    /// Finer degeneracies (a particular constraint vanishing) are handled by
    /// re-drawing at the point of use.
    pub fn is_generic(&self) -> bool {
        let m = self.len();
        for i in 0..m {
            for j in i + 1..m {
                if self.vectors[i] == self.vectors[j] {
                    return false;
                }
            }
        }
        let gram: Vec<Vec<BigInt>> =
            (0..m).map(|i| (0..m).map(|j| self.dot(i, j)).collect()).collect();
        crate::graphs::integer_rank(&gram) == m.min(self.ambient_dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn sites(vs: &[&[Coord]]) -> TangentialSites {
        TangentialSites::new(vs.iter().map(|v| v.to_vec()).collect())
    }

    #[test]
    fn group_product_and_inverse_follow_the_twist_rule() {
        let a = GroupElement::new(vec![1, -1], false);
        let tau = GroupElement::new(vec![0, 0], true);
        // a tau = (a, -) and (a tau)^2 = identity.
        let at = a.compose(&tau);
        assert!(at.twisted);
        assert_eq!(at.coeffs, vec![1, -1]);
        assert_eq!(at.compose(&at), GroupElement::identity(2));
        // tau a = (-a, -).
        let ta = tau.compose(&a);
        assert_eq!(ta.coeffs, vec![-1, 1]);
        assert_eq!(a.compose(&a.inverse()), GroupElement::identity(2));
        assert_eq!(at.compose(&at.inverse()), GroupElement::identity(2));
    }

    #[test]
    fn mass_counts_coordinates_regardless_of_twist() {
        assert_eq!(GroupElement::new(vec![1, -1, 0], false).mass(), 0);
        assert_eq!(GroupElement::new(vec![-1, -1], true).mass(), -2);
        assert_eq!(GroupElement::new(vec![2, 0, -1], false).mass(), 1);
    }

    #[test]
    fn element_text_round_trips() {
        for s in ["[0,0]", "[1,-2,3]t", "[-1,-1]t", "[5]"] {
            let e = GroupElement::parse(s).unwrap();
            assert_eq!(e.to_string(), s);
        }
        assert!(GroupElement::parse("(1,2)").is_err());
        assert!(GroupElement::parse("[1,b]").is_err());
    }

    #[test]
    fn quad_energy_matches_hand_values() {
        // C(e1 - e2, +) = -e1 e2 + e2^2  (diag: 1*2/2=1 at i=1 ... )
        let q = quad_energy(&[1, -1], Color::Black);
        assert_eq!(q.diag, vec![BigInt::from(1), BigInt::from(0)]);
        assert_eq!(q.cross.get(&(0, 1)), Some(&BigInt::from(-1)));

        // C(-e1 - e2, -) = -e1 e2 (diagonals vanish: (-1)(0)/2 = 0).
        let q = quad_energy(&[-1, -1], Color::Red);
        assert!(q.diag.iter().all(Zero::is_zero));
        assert_eq!(q.cross.get(&(0, 1)), Some(&BigInt::from(-1)));

        // C(-2 e1, -) = -e1^2.
        let q = quad_energy(&[-2, 0], Color::Red);
        assert_eq!(q.diag, vec![BigInt::from(-1), BigInt::from(0)]);
        assert!(q.cross.is_empty());

        // C(0, sigma) = 0 and C(-e_i, sigma) = 0.
        assert!(quad_energy(&[0, 0, 0], Color::Black).is_zero());
        assert!(quad_energy(&[0, -1, 0], Color::Red).is_zero());
    }

    #[test]
    fn quad_energy_vanishes_exactly_on_the_kernel() {
        // Zero set is {0} union {-e_i}, for either sign, exhaustively for
        // m <= 4 and |a_i| <= 3.
        for m in 1..=4usize {
            let mut a = vec![-3i64; m];
            loop {
                let expect_zero = a.iter().all(|&x| x == 0)
                    || (a.iter().filter(|&&x| x == -1).count() == 1
                        && a.iter().filter(|&&x| x == 0).count() == m - 1);
                for color in [Color::Black, Color::Red] {
                    assert_eq!(
                        quad_energy(&a, color).is_zero(),
                        expect_zero,
                        "zero-set mismatch at {a:?}"
                    );
                }
                // Odometer increment.
                let mut k = 0;
                loop {
                    if k == m {
                        break;
                    }
                    a[k] += 1;
                    if a[k] <= 3 {
                        break;
                    }
                    a[k] = -3;
                    k += 1;
                }
                if k == m {
                    break;
                }
            }
        }
    }

    #[test]
    fn quad_energy_satisfies_the_composition_rules() {
        let mut rng = StdRng::seed_from_u64(0x1A77_0001);
        for _ in 0..150 {
            let m = rng.gen_range(1..=4);
            let u: Vec<Coord> = (0..m).map(|_| rng.gen_range(-4..=4)).collect();
            let v: Vec<Coord> = (0..m).map(|_| rng.gen_range(-4..=4)).collect();
            let sum: Vec<Coord> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            let diff: Vec<Coord> = u.iter().zip(&v).map(|(a, b)| a - b).collect();
            let uv = QuadForm::product_of(&u, &v);
            let vv = QuadForm::product_of(&v, &v);

            // Both untwisted: C(u + v) = C(u) + C(v) + u v.
            let lhs = quad_energy(&sum, Color::Black);
            let rhs = quad_energy(&u, Color::Black).add(&quad_energy(&v, Color::Black)).add(&uv);
            assert_eq!(lhs, rhs, "black/black rule at u={u:?} v={v:?}");

            // u untwisted, v twisted: C(u + v, -) = -C(u, +) + C(v, -) - u v.
            let lhs = quad_energy(&sum, Color::Red);
            let rhs = quad_energy(&u, Color::Black)
                .scale(-1)
                .add(&quad_energy(&v, Color::Red))
                .add(&uv.scale(-1));
            assert_eq!(lhs, rhs, "black/red rule at u={u:?} v={v:?}");

            // Both twisted: C(u - v, +) = -C(u, -) + C(v, -) + v^2 - u v.
            let lhs = quad_energy(&diff, Color::Black);
            let rhs = quad_energy(&u, Color::Red)
                .scale(-1)
                .add(&quad_energy(&v, Color::Red))
                .add(&vv)
                .add(&uv.scale(-1));
            assert_eq!(lhs, rhs, "red/red rule at u={u:?} v={v:?}");
        }
    }

    #[test]
    fn scalar_energy_matches_pinned_values() {
        let s = sites(&[&[1, 0], &[0, 1]]);
        // K(e1 - e2, +) = (1/2)(|v1 - v2|^2 + |v1|^2 - |v2|^2) = 1 here.
        assert_eq!(scalar_energy(&[1, -1], Color::Black, &s), BigInt::from(1));
        // K(-2 e1, -) = -|v1|^2.
        assert_eq!(scalar_energy(&[-2, 0], Color::Red, &s), BigInt::from(-1));
        // K(-e1 - e2, -) = -(v1, v2) = 0 for orthonormal sites.
        assert_eq!(scalar_energy(&[-1, -1], Color::Red, &s), BigInt::from(0));

        let s = sites(&[&[2, 1], &[1, 3]]);
        // K(-e1 - e2, -) = -(v1, v2) = -5.
        assert_eq!(scalar_energy(&[-1, -1], Color::Red, &s), BigInt::from(-5));
    }

    #[test]
    fn scalar_energy_is_momentum_of_quad_energy() {
        let mut rng = StdRng::seed_from_u64(0x1A77_0002);
        for _ in 0..100 {
            let m = rng.gen_range(1..=3);
            let n = rng.gen_range(m..=5);
            let vs: Vec<Vec<Coord>> =
                (0..m).map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect()).collect();
            let s = TangentialSites::new(vs);
            let a: Vec<Coord> = (0..m).map(|_| rng.gen_range(-3..=3)).collect();
            for color in [Color::Black, Color::Red] {
                assert_eq!(scalar_energy(&a, color, &s), quad_energy(&a, color).momentum(&s));
            }
        }
    }

    #[test]
    fn edge_rules_match_the_generator_set() {
        // Black edge: same color, difference ±(e_i - e_j).
        assert_eq!(edge_between(&[0, 0], &[1, -1]), Some(EdgeKind::Black { i: 0, j: 1 }));
        assert_eq!(edge_between(&[1, -1], &[0, 0]), Some(EdgeKind::Black { i: 0, j: 1 }));
        // Red edge: opposite colors, sum -e_i - e_j.
        assert_eq!(edge_between(&[0, 0], &[-1, -1]), Some(EdgeKind::Red { i: 0, j: 1 }));
        assert_eq!(edge_between(&[1, -1], &[-2, 0]), Some(EdgeKind::Red { i: 0, j: 1 }));
        // No edge: -2 e_1 is not a generator sum with i != j.
        assert_eq!(edge_between(&[0, 0], &[-2, 0]), None);
        // No edge between distant vertices.
        assert_eq!(edge_between(&[0, 0, 0], &[2, -1, -1]), None);
        // Same color but difference has three moved slots.
        assert_eq!(edge_between(&[1, -1, 0], &[0, 0, 0]), Some(EdgeKind::Black { i: 0, j: 1 }));
        assert_eq!(edge_between(&[1, 0, -1], &[-1, 1, 0]), None);
    }

    #[test]
    fn colored_edge_rule_handles_shifted_masses() {
        // Two untwisted vertices of mass 1 ({e1, e2}) are black-adjacent.
        assert_eq!(
            edge_between_colored(&[1, 0], Color::Black, &[0, 1], Color::Black),
            Some(EdgeKind::Black { i: 0, j: 1 })
        );
        // Their mirror with twists is still black-adjacent.
        assert_eq!(
            edge_between_colored(&[-1, 0], Color::Red, &[0, -1], Color::Red),
            Some(EdgeKind::Black { i: 0, j: 1 })
        );
    }

    #[test]
    fn genericity_rejects_collisions_and_rank_drops() {
        assert!(sites(&[&[1, 0], &[0, 1]]).is_generic());
        assert!(!sites(&[&[1, 0], &[1, 0]]).is_generic());
        // Rank drop: colinear sites.
        assert!(!sites(&[&[1, 1], &[2, 2]]).is_generic());
        assert!(sites(&[&[3, 0, 0], &[0, 2, 0], &[0, 0, 1]]).is_generic());
    }
}
