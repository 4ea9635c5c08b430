//! The block matrix of a colored graph and its characteristic polynomial.
//!
//! Entries live in the root variables: `2*y_i*y_j` stands for
//! `2*sqrt(x_i*x_j)`. The scalar part of the block is dropped, so the matrix
//! is homogeneous of degree 1 (with `y_i*y_j` of degree 1 in the
//! frequencies). The characteristic polynomial `det(t*Id - C)` always closes
//! the roots in even powers; `charpoly` eliminates them and returns an
//! element of `Z[x_1..x_m, t]`.

use num_bigint::BigInt;

use crate::error::PolyError;
use crate::graphs::{ColoredGraph, MarkedGraph};
use crate::lattice::{Color, Coord, EdgeKind};
use crate::poly::MultiPoly;

pub type Vertex = Vec<Coord>;

/// A square matrix over the polynomial ring, one row per graph vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockMatrix {
    pub m: usize,
    pub order: Vec<(Vertex, Color)>,
    pub entries: Vec<Vec<MultiPoly>>,
}

/// Builds the block matrix of an explicitly colored graph.
///
/// Diagonal of a black vertex `a` is `-sum a_j x_j`, of a red vertex
/// `+sum a_j x_j`. An edge marked `{i,j}` contributes `2*y_i*y_j` with
/// signs: `+` symmetric between black vertices, `-` symmetric between red
/// vertices, and `-`/`+` at the (black row, red column)/(red row, black
/// column) positions of a red edge.
pub fn build_matrix_marked(g: &MarkedGraph) -> BlockMatrix {
    let n = g.len();
    let m = g.m();
    let mut entries = vec![vec![MultiPoly::zero(m); n]; n];
    for (p, (v, color)) in g.vertices.iter().enumerate() {
        let sign = match color {
            Color::Black => -1,
            Color::Red => 1,
        };
        let u: Vec<i64> = v.iter().map(|&c| sign * c).collect();
        entries[p][p] = MultiPoly::linear_form(m, &u);
    }
    for e in &g.edges {
        let (i, j) = e.kind.marking();
        let two_yy = MultiPoly::y(m, i).mul(&MultiPoly::y(m, j)).scale(&BigInt::from(2));
        match e.kind {
            EdgeKind::Black { .. } => {
                let value = match g.color(e.a) {
                    Color::Black => two_yy,
                    Color::Red => two_yy.neg(),
                };
                entries[e.a][e.b] = value.clone();
                entries[e.b][e.a] = value;
            }
            EdgeKind::Red { .. } => {
                let (black, red) = match g.color(e.a) {
                    Color::Black => (e.a, e.b),
                    Color::Red => (e.b, e.a),
                };
                entries[black][red] = two_yy.neg();
                entries[red][black] = two_yy;
            }
        }
    }
    BlockMatrix { m, order: g.vertices.clone(), entries }
}

/// Builds the block matrix of a combinatorial graph.
pub fn build_matrix(g: &ColoredGraph) -> BlockMatrix {
    build_matrix_marked(&g.to_marked())
}

impl BlockMatrix {
    pub fn size(&self) -> usize {
        self.order.len()
    }

    /// `t*Id - C`, the matrix whose determinant is the characteristic
    /// polynomial (the form printed in matrix dumps).
    pub fn charpoly_matrix(&self) -> Vec<Vec<MultiPoly>> {
        let n = self.size();
        let t = MultiPoly::t(self.m);
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            t.sub(&self.entries[i][j])
                        } else {
                            self.entries[i][j].neg()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// The characteristic polynomial in `Z[x, t]`; the root variables are
    /// required to cancel, anything else is a construction bug.
    pub fn charpoly(&self) -> Result<MultiPoly, PolyError> {
        MultiPoly::charpoly_of(&self.entries).eliminate_roots()
    }

    /// Multi-line dump, one row per line with entries separated by ` | `.
    pub fn dump(&self) -> String {
        self.entries
            .iter()
            .map(|row| {
                row.iter().map(MultiPoly::to_string).collect::<Vec<_>>().join(" | ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Applies a root translation: subtracts `u(x)*Id`, then negates everything
/// when the translation is twisted.
pub fn translate_block(mat: &BlockMatrix, u: &[Coord], twisted: bool) -> BlockMatrix {
    assert_eq!(u.len(), mat.m, "translation lives in the lattice of the block");
    let shift = MultiPoly::linear_form(mat.m, u);
    let n = mat.size();
    let mut entries = mat.entries.clone();
    for (i, row) in entries.iter_mut().enumerate().take(n) {
        row[i] = row[i].sub(&shift);
    }
    if twisted {
        for row in entries.iter_mut() {
            for e in row.iter_mut() {
                *e = e.neg();
            }
        }
    }
    BlockMatrix { m: mat.m, order: mat.order.clone(), entries }
}

/// Characteristic polynomial of a combinatorial graph.
pub fn charpoly_block(g: &ColoredGraph) -> Result<MultiPoly, PolyError> {
    build_matrix(g).charpoly()
}

/// Characteristic polynomial of an explicitly colored graph.
pub fn charpoly_marked(g: &MarkedGraph) -> Result<MultiPoly, PolyError> {
    build_matrix_marked(g).charpoly()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete_closure, marked_closure};
    use num_traits::Zero;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn combinatorial(vertices: &[&[Coord]]) -> ColoredGraph {
        complete_closure(vertices.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    fn marked(vertices: &[(&[Coord], Color)]) -> MarkedGraph {
        marked_closure(vertices.iter().map(|(v, c)| (v.to_vec(), *c)).collect()).unwrap()
    }

    fn p(m: usize, s: &str) -> MultiPoly {
        MultiPoly::parse(m, s).unwrap()
    }

    fn assert_entries(mat: &[Vec<MultiPoly>], expected: &[&[&str]]) {
        let m = mat[0][0].num_vars();
        for (i, row) in expected.iter().enumerate() {
            for (j, text) in row.iter().enumerate() {
                assert_eq!(
                    mat[i][j],
                    p(m, text),
                    "entry ({i},{j}) differs: got {}",
                    mat[i][j]
                );
            }
        }
    }

    #[test]
    fn first_pair_block_matches_the_printed_matrix() {
        let g = marked(&[(&[1, 0], Color::Black), (&[0, 1], Color::Black)]);
        let b = build_matrix_marked(&g);
        assert_entries(
            &b.entries,
            &[&["-x1", "2*y1*y2"], &["2*y1*y2", "-x2"]],
        );
        let chi = b.charpoly().unwrap();
        assert_eq!(chi.to_string(), "t^2 + x1*t + x2*t - 3*x1*x2");
    }

    #[test]
    fn second_pair_block_matches_the_printed_matrix() {
        let g = combinatorial(&[&[0, 0], &[-1, -1]]);
        let b = build_matrix(&g);
        assert_entries(
            &b.entries,
            &[&["0", "-2*y1*y2"], &["2*y1*y2", "-x1 - x2"]],
        );
        let chi = b.charpoly().unwrap();
        assert_eq!(chi.to_string(), "t^2 + x1*t + x2*t + 4*x1*x2");
    }

    #[test]
    fn the_two_pair_polynomials_coincide_after_one_specialization() {
        let chi1 = charpoly_marked(&marked(&[(&[1, 0], Color::Black), (&[0, 1], Color::Black)]))
            .unwrap();
        let chi2 = charpoly_block(&combinatorial(&[&[0, 0], &[-1, -1]])).unwrap();
        assert_ne!(chi1, chi2);
        let zero = BigInt::zero();
        let s1 = chi1.specialize(0, &zero);
        let s2 = chi2.specialize(0, &zero);
        assert_eq!(s1, s2);
        assert_eq!(s1.to_string(), "t^2 + x2*t");
    }

    #[test]
    fn three_vertex_block_and_translation_match_the_printed_matrices() {
        // Printed with the root in the middle; caller order is preserved.
        let g = combinatorial(&[&[-1, -1], &[0, 0], &[1, -1]]);
        let b = build_matrix(&g);
        assert_entries(
            &b.entries,
            &[
                &["-x1 - x2", "2*y1*y2", "0"],
                &["-2*y1*y2", "0", "2*y1*y2"],
                &["0", "2*y1*y2", "-x1 + x2"],
            ],
        );
        // Translation by u subtracts u(x) from each diagonal entry.
        let shifted = translate_block(&b, &[3, 5], false);
        assert_entries(
            &shifted.entries,
            &[
                &["-4*x1 - 6*x2", "2*y1*y2", "0"],
                &["-2*y1*y2", "-3*x1 - 5*x2", "2*y1*y2"],
                &["0", "2*y1*y2", "-4*x1 - 4*x2"],
            ],
        );
        // Zero translation is the identity; the twisted zero translation is
        // entrywise negation.
        assert_eq!(translate_block(&b, &[0, 0], false), b);
        let negated = translate_block(&b, &[0, 0], true);
        for (row, orig) in negated.entries.iter().zip(&b.entries) {
            for (e, o) in row.iter().zip(orig) {
                assert_eq!(*e, o.neg());
            }
        }
    }

    #[test]
    fn four_vertex_chain_block_matches_the_printed_matrix() {
        // Chain of one red and two black edges, all vertices after the root
        // red; printed as t*Id - C.
        let g = combinatorial(&[&[0, 0, 0], &[-1, -1, 0], &[-1, -2, 1], &[-2, -2, 2]]);
        let b = build_matrix(&g);
        assert_eq!(b.entries.len(), 4);
        assert_entries(
            &b.charpoly_matrix(),
            &[
                &["t", "2*y1*y2", "0", "0"],
                &["-2*y1*y2", "t + x1 + x2", "2*y2*y3", "0"],
                &["0", "2*y2*y3", "t + x1 + 2*x2 - x3", "2*y1*y3"],
                &["0", "0", "2*y1*y3", "t + 2*x1 + 2*x2 - 2*x3"],
            ],
        );
    }

    #[test]
    fn four_vertex_mixed_chain_block_matches_the_printed_matrix() {
        // Chain with the red edge in the middle; one black vertex after the
        // root, then two red ones.
        let g = combinatorial(&[&[0, 0, 0], &[-1, 1, 0], &[1, -2, -1], &[2, -2, -2]]);
        let b = build_matrix(&g);
        assert_entries(
            &b.charpoly_matrix(),
            &[
                &["t", "-2*y1*y2", "0", "0"],
                &["-2*y1*y2", "t - x1 + x2", "2*y2*y3", "0"],
                &["0", "-2*y2*y3", "t - x1 + 2*x2 + x3", "2*y1*y3"],
                &["0", "0", "2*y1*y3", "t - 2*x1 + 2*x2 + 2*x3"],
            ],
        );
    }

    #[test]
    fn single_vertex_block_has_charpoly_t() {
        let g = combinatorial(&[&[0, 0]]);
        let chi = charpoly_block(&g).unwrap();
        assert_eq!(chi, MultiPoly::t(2));
    }

    #[test]
    fn degenerate_stretch_charpoly_factors_as_derived() {
        // chi = (t - x1 + x2) * (t^2 - 2(x1 - x2) t - 8 x1 x2).
        let g = combinatorial(&[&[0, 0], &[-1, 1], &[-2, 2]]);
        let chi = charpoly_block(&g).unwrap();
        let factor1 = p(2, "t - x1 + x2");
        let factor2 = p(2, "t^2 - 2*x1*t + 2*x2*t - 8*x1*x2");
        assert_eq!(chi, factor1.mul(&factor2));
    }

    #[test]
    fn charpolys_are_monic_homogeneous_and_root_free_across_a_sample() {
        for g in crate::graphs::enumerate_graphs(2, 4, 2) {
            let chi = charpoly_block(&g).unwrap();
            assert!(chi.is_monic_in_t(), "not monic for {:?}", g.vertices);
            assert!(chi.is_homogeneous(), "not homogeneous for {:?}", g.vertices);
            assert!(!chi.has_roots());
            assert_eq!(chi.t_degree(), g.len());
        }
    }

    #[test]
    fn translation_covariance_shifts_the_t_variable() {
        let mut rng = StdRng::seed_from_u64(0xB10C_0001);
        let graphs: Vec<_> = crate::graphs::enumerate_graphs(2, 3, 2).collect();
        for g in &graphs {
            let b = build_matrix(g);
            let chi = b.charpoly().unwrap();
            for _ in 0..5 {
                let u: Vec<Coord> = (0..2).map(|_| rng.gen_range(-4..=4)).collect();
                let translated = translate_block(&b, &u, false).charpoly().unwrap();
                let shift = MultiPoly::t(2).add(&MultiPoly::linear_form(2, &u));
                assert_eq!(translated, chi.subst_t(&shift), "covariance fails for u={u:?}");
            }
            // Twist covariance: the twisted block has charpoly
            // (-1)^n chi(-t).
            let twisted = translate_block(&b, &[0, 0], true).charpoly().unwrap();
            let minus_t = MultiPoly::t(2).neg();
            let sign = if g.len() % 2 == 0 { 1 } else { -1 };
            assert_eq!(twisted, chi.subst_t(&minus_t).scale(&BigInt::from(sign)));
        }
    }

    #[test]
    fn blocks_are_diagonal_mod_two() {
        // Every off-diagonal entry has coefficient 2, so integer linear
        // factors of the charpoly are constrained by the diagonal parity.
        for g in crate::graphs::enumerate_graphs(2, 4, 2) {
            let b = build_matrix(&g);
            for (i, row) in b.entries.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    if i != j {
                        for (_, c) in e.terms() {
                            assert!(
                                (c % BigInt::from(2)).is_zero(),
                                "odd off-diagonal coefficient in {:?}",
                                g.vertices
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn projected_component_charpolys_multiply_to_the_specialization() {
        // Setting x_i = 0 splits the block along the components of the
        // projection; lifted back, the component polynomials multiply to
        // the specialized one.
        for g in crate::graphs::enumerate_graphs(2, 4, 2) {
            let chi = charpoly_block(&g).unwrap();
            for i in 0..2 {
                let specialized = chi.specialize(i, &BigInt::zero());
                let mut product = MultiPoly::one(2);
                for comp in g.project_components(i) {
                    let factor = charpoly_marked(&comp).unwrap().insert_var(i);
                    product = product.mul(&factor);
                }
                assert_eq!(specialized, product, "split fails for {:?} at {i}", g.vertices);
            }
        }
    }
}
