//! Combinatorial colored marked graphs: enumeration, completion, projection,
//! degeneracy rank, resonance relations, allowability and canonical forms.
//!
//! A combinatorial graph is a finite set of lattice vectors containing 0,
//! each of mass 0 (black) or -2 (red), whose induced edge set (every pair
//! satisfying the generator rule) is connected. The induced edges are always
//! all present, so a graph is determined by its vertex set; the edge list is
//! computed once at construction.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::lattice::{
    color_of_mass, edge_between, edge_between_colored, quad_energy, Color, Coord, EdgeKind,
    QuadForm,
};

pub type Vertex = Vec<Coord>;

/// An edge between vertex positions `a < b`, with its generator marking.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
}

/// A combinatorial graph: vertex colors are derived from masses and the edge
/// list is the full induced one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColoredGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<GraphEdge>,
}

/// A graph with explicitly stored colors. Projections produce these: after a
/// coordinate is dropped the mass normalization is lost, so colors must be
/// carried along. Explicitly colored inputs (printed matrices at shifted
/// masses) also take this form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MarkedGraph {
    pub vertices: Vec<(Vertex, Color)>,
    pub edges: Vec<GraphEdge>,
}

/// Builds the complete induced graph on a vertex set, preserving the caller's
/// vertex order. The set must contain the root 0, have masses in {0, -2},
/// and be connected under the induced edges.
pub fn complete_closure(vertices: Vec<Vertex>) -> Result<ColoredGraph, GraphError> {
    if vertices.is_empty() {
        return Err(GraphError::RootMissing);
    }
    let m = vertices[0].len();
    for v in &vertices {
        if v.len() != m {
            return Err(GraphError::DimensionMismatch {
                vertex: v.clone(),
                expected: m,
                got: v.len(),
            });
        }
        let mass: i64 = v.iter().sum();
        if color_of_mass(mass).is_none() {
            return Err(GraphError::BadMass { vertex: v.clone(), mass });
        }
    }
    if !vertices.iter().any(|v| v.iter().all(|&c| c == 0)) {
        return Err(GraphError::RootMissing);
    }
    let mut seen = HashSet::new();
    for v in &vertices {
        if !seen.insert(v.clone()) {
            return Err(GraphError::DuplicateVertex { vertex: v.clone() });
        }
    }
    let edges = induced_edges(&vertices, |i, j| edge_between(&vertices[i], &vertices[j]));
    if !connected(vertices.len(), &edges) {
        return Err(GraphError::Disconnected);
    }
    Ok(ColoredGraph { vertices, edges })
}

/// Builds the complete induced graph on explicitly colored vertices. No root
/// or mass constraint; used for projections and shifted printed examples.
pub fn marked_closure(vertices: Vec<(Vertex, Color)>) -> Result<MarkedGraph, GraphError> {
    if vertices.is_empty() {
        return Err(GraphError::RootMissing);
    }
    let m = vertices[0].0.len();
    for (v, _) in &vertices {
        if v.len() != m {
            return Err(GraphError::DimensionMismatch {
                vertex: v.clone(),
                expected: m,
                got: v.len(),
            });
        }
    }
    let mut seen = HashSet::new();
    for vc in &vertices {
        if !seen.insert(vc.clone()) {
            return Err(GraphError::DuplicateVertex { vertex: vc.0.clone() });
        }
    }
    let edges = induced_edges(&vertices, |i, j| {
        let (va, ca) = &vertices[i];
        let (vb, cb) = &vertices[j];
        edge_between_colored(va, *ca, vb, *cb)
    });
    if !connected(vertices.len(), &edges) {
        return Err(GraphError::Disconnected);
    }
    Ok(MarkedGraph { vertices, edges })
}

fn induced_edges<T>(vertices: &[T], rule: impl Fn(usize, usize) -> Option<EdgeKind>) -> Vec<GraphEdge> {
    let mut edges = Vec::new();
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            if let Some(kind) = rule(a, b) {
                edges.push(GraphEdge { a, b, kind });
            }
        }
    }
    edges
}

fn connected(n: usize, edges: &[GraphEdge]) -> bool {
    if n == 0 {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.a].push(e.b);
        adj[e.b].push(e.a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

impl ColoredGraph {
    pub fn m(&self) -> usize {
        self.vertices.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn color(&self, index: usize) -> Color {
        let mass: i64 = self.vertices[index].iter().sum();
        color_of_mass(mass).expect("vertex mass was validated at construction")
    }

    pub fn to_marked(&self) -> MarkedGraph {
        MarkedGraph {
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), self.color(i)))
                .collect(),
            edges: self.edges.clone(),
        }
    }

    /// Positions of the nonzero vertices, in vertex order.
    pub fn nonzero_positions(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.vertices[i].iter().any(|&c| c != 0)).collect()
    }

    /// Dimension (vertex count minus one), rank of the nonzero vertices over
    /// Q, and the degeneracy flag.
    pub fn rank_and_degeneracy(&self) -> Degeneracy {
        let dimension = self.len() - 1;
        let rows: Vec<Vec<BigInt>> = self
            .nonzero_positions()
            .iter()
            .map(|&i| self.vertices[i].iter().map(|&c| BigInt::from(c)).collect())
            .collect();
        let rank = integer_rank(&rows);
        Degeneracy { dimension, rank, degenerate: rank < dimension }
    }

    /// Primitive integer basis of the relations `sum n_a a = 0` among the
    /// vertices. Coefficients are aligned with the vertex list; the root
    /// coefficient is always 0.
    pub fn relation_basis(&self) -> RelationBasis {
        let positions = self.nonzero_positions();
        // Columns of the eliminated matrix are the nonzero vertices, so
        // nullspace vectors are relation coefficients.
        let mut mat: Vec<Vec<BigRational>> = (0..self.m())
            .map(|row| {
                positions
                    .iter()
                    .map(|&i| BigRational::from_integer(BigInt::from(self.vertices[i][row])))
                    .collect()
            })
            .collect();
        if positions.is_empty() {
            return RelationBasis { relations: Vec::new() };
        }
        let null = rational_nullspace(&mut mat, positions.len());
        let relations = null
            .into_iter()
            .map(|v| {
                let primitive = primitive_integer_vector(&v);
                let mut full = vec![BigInt::zero(); self.len()];
                for (slot, coeff) in positions.iter().zip(primitive) {
                    full[*slot] = coeff;
                }
                full
            })
            .collect();
        RelationBasis { relations }
    }

    /// The quadratic-energy combination `sum n_a C(a)` of a relation.
    pub fn resonance_combination(&self, relation: &[BigInt]) -> QuadForm {
        assert_eq!(relation.len(), self.len(), "relation indexed by vertices");
        let mut acc = QuadForm::zero(self.m());
        for (i, n) in relation.iter().enumerate() {
            if n.is_zero() {
                continue;
            }
            let c = quad_energy(&self.vertices[i], self.color(i));
            let n = n.to_i64().expect("relation coefficients are desk-scale");
            acc = acc.add(&c.scale(n));
        }
        acc
    }

    /// Degeneracy and resonance class.
    pub fn classify(&self) -> GraphClass {
        let basis = self.relation_basis();
        if basis.relations.is_empty() {
            return GraphClass::NonDegenerate;
        }
        let resonant = basis
            .relations
            .iter()
            .all(|relation| self.resonance_combination(relation).is_zero());
        if resonant {
            GraphClass::DegenerateResonant
        } else {
            GraphClass::Avoidable
        }
    }

    /// Scans black/red vertex pairs whose sum is a forbidden twisted
    /// translation `-2 e_i` or `-3 e_i + e_j`. Returns the first such pair.
    pub fn allowability_witness(&self) -> Option<ForbiddenPair> {
        for a in 0..self.len() {
            if self.color(a) != Color::Black {
                continue;
            }
            for b in 0..self.len() {
                if self.color(b) != Color::Red {
                    continue;
                }
                let sum: Vertex = self.vertices[a]
                    .iter()
                    .zip(&self.vertices[b])
                    .map(|(x, y)| x + y)
                    .collect();
                if is_forbidden_sum(&sum) {
                    return Some(ForbiddenPair {
                        black: self.vertices[a].clone(),
                        red: self.vertices[b].clone(),
                        sum,
                    });
                }
            }
        }
        None
    }

    pub fn is_allowable(&self) -> bool {
        self.allowability_witness().is_none()
    }

    /// Per-color count of nonzero vertices and rank of each color class.
    pub fn color_counts_and_ranks(&self) -> ColorStats {
        let mut out = ColorStats::default();
        for color in [Color::Black, Color::Red] {
            let rows: Vec<Vec<BigInt>> = self
                .nonzero_positions()
                .iter()
                .filter(|&&i| self.color(i) == color)
                .map(|&i| self.vertices[i].iter().map(|&c| BigInt::from(c)).collect())
                .collect();
            let count = rows.len();
            let rank = integer_rank(&rows);
            match color {
                Color::Black => {
                    out.black_count = count;
                    out.black_rank = rank;
                }
                Color::Red => {
                    out.red_count = count;
                    out.red_rank = rank;
                }
            }
        }
        out
    }

    /// Removes the edges marked with index `i`, splits into connected
    /// components, and drops coordinate `i` from every vertex. Colors are
    /// carried explicitly since the mass normalization no longer holds.
    pub fn project_components(&self, i: usize) -> Vec<MarkedGraph> {
        assert!(i < self.m(), "projection index out of range");
        let kept: Vec<&GraphEdge> = self.edges.iter().filter(|e| !e.kind.involves(i)).collect();
        let n = self.len();
        let mut comp = (0..n).collect::<Vec<usize>>();
        fn find(comp: &mut Vec<usize>, x: usize) -> usize {
            if comp[x] != x {
                let root = find(comp, comp[x]);
                comp[x] = root;
            }
            comp[x]
        }
        for e in &kept {
            let (ra, rb) = (find(&mut comp, e.a), find(&mut comp, e.b));
            if ra != rb {
                comp[ra.max(rb)] = ra.min(rb);
            }
        }
        // Group vertex positions by component root, in vertex order.
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for v in 0..n {
            let root = find(&mut comp, v);
            match groups.iter_mut().find(|(r, _)| *r == root) {
                Some((_, g)) => g.push(v),
                None => groups.push((root, vec![v])),
            }
        }
        groups
            .into_iter()
            .map(|(_, members)| {
                let vertices: Vec<(Vertex, Color)> = members
                    .iter()
                    .map(|&v| {
                        let reduced: Vertex = self.vertices[v]
                            .iter()
                            .enumerate()
                            .filter(|(k, _)| *k != i)
                            .map(|(_, &c)| c)
                            .collect();
                        (reduced, self.color(v))
                    })
                    .collect();
                let edges = kept
                    .iter()
                    .filter(|e| members.contains(&e.a) && members.contains(&e.b))
                    .map(|e| GraphEdge {
                        a: members.iter().position(|&v| v == e.a).unwrap(),
                        b: members.iter().position(|&v| v == e.b).unwrap(),
                        kind: shift_marking(e.kind, i),
                    })
                    .collect();
                MarkedGraph { vertices, edges }
            })
            .collect()
    }

    /// Canonical key: the sorted vertex list, replaced by the sorted negated
    /// list when that is smaller and the graph is all black (the twist image
    /// is a valid graph exactly then).
    pub fn canonical_form(&self) -> Vec<Vertex> {
        canonical_vertex_key(&self.vertices)
    }

    /// One-line text form, `vertices: [[0,0],[1,-1]]`.
    pub fn to_line(&self) -> String {
        let list: Vec<String> = self
            .vertices
            .iter()
            .map(|v| {
                let inner: Vec<String> = v.iter().map(Coord::to_string).collect();
                format!("[{}]", inner.join(","))
            })
            .collect();
        format!("vertices: [{}]", list.join(","))
    }

    /// Classification report used by the CLI.
    pub fn report(&self) -> GraphReport {
        let deg = self.rank_and_degeneracy();
        let witness = self.allowability_witness();
        let relations = self
            .relation_basis()
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .map(|n| n.to_i64().expect("relation coefficients are desk-scale"))
                    .collect()
            })
            .collect();
        GraphReport {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().map(EdgeReport::from).collect(),
            dimension: deg.dimension,
            rank: deg.rank,
            class: self.classify(),
            allowable: witness.is_none(),
            witness,
            relations,
        }
    }
}

impl MarkedGraph {
    pub fn m(&self) -> usize {
        self.vertices.first().map_or(0, |(v, _)| v.len())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn color(&self, index: usize) -> Color {
        self.vertices[index].1
    }
}

fn shift_marking(kind: EdgeKind, dropped: usize) -> EdgeKind {
    let shift = |k: usize| if k > dropped { k - 1 } else { k };
    match kind {
        EdgeKind::Black { i, j } => EdgeKind::Black { i: shift(i), j: shift(j) },
        EdgeKind::Red { i, j } => EdgeKind::Red { i: shift(i), j: shift(j) },
    }
}

/// True when `sum` is `-2 e_i` or `-3 e_i + e_j` with `i != j`.
fn is_forbidden_sum(sum: &[Coord]) -> bool {
    let minus_two = sum.iter().filter(|&&c| c == -2).count();
    let minus_three = sum.iter().filter(|&&c| c == -3).count();
    let plus_one = sum.iter().filter(|&&c| c == 1).count();
    let zero = sum.iter().filter(|&&c| c == 0).count();
    let n = sum.len();
    (minus_two == 1 && zero == n - 1) || (minus_three == 1 && plus_one == 1 && zero == n - 2)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Degeneracy {
    pub dimension: usize,
    pub rank: usize,
    pub degenerate: bool,
}

/// Integer relations `sum n_a a = 0`, one coefficient per vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelationBasis {
    pub relations: Vec<Vec<BigInt>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphClass {
    NonDegenerate,
    DegenerateResonant,
    Avoidable,
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GraphClass::NonDegenerate => "nondegenerate",
            GraphClass::DegenerateResonant => "degenerate_resonant",
            GraphClass::Avoidable => "avoidable",
        };
        write!(f, "{name}")
    }
}

/// A black/red vertex pair whose twisted product is a forbidden translation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ForbiddenPair {
    pub black: Vertex,
    pub red: Vertex,
    pub sum: Vertex,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ColorStats {
    pub black_count: usize,
    pub black_rank: usize,
    pub red_count: usize,
    pub red_rank: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EdgeReport {
    pub a: usize,
    pub b: usize,
    pub color: Color,
    /// Generator marking, 1-based to match the frequency variable names.
    pub marking: [usize; 2],
}

impl From<&GraphEdge> for EdgeReport {
    fn from(e: &GraphEdge) -> Self {
        let (i, j) = e.kind.marking();
        let color = match e.kind {
            EdgeKind::Black { .. } => Color::Black,
            EdgeKind::Red { .. } => Color::Red,
        };
        EdgeReport { a: e.a, b: e.b, color, marking: [i + 1, j + 1] }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GraphReport {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<EdgeReport>,
    pub dimension: usize,
    pub rank: usize,
    pub class: GraphClass,
    pub allowable: bool,
    pub witness: Option<ForbiddenPair>,
    pub relations: Vec<Vec<i64>>,
}

/// Graph input file: either a JSON object `{"vertices": [...], "colors":
/// optional}` or a single line `vertices: [[0,0],[1,-1]]`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<Vertex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<Color>>,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let trimmed = text.trim();
        if trimmed.starts_with('{') {
            return serde_json::from_str(trimmed)
                .map_err(|e| GraphError::Parse(format!("bad graph JSON: {e}")));
        }
        let vertices = parse_vertices_line(trimmed)?;
        Ok(GraphFile { vertices, colors: None })
    }

    /// Builds the graph with colors taken from the file when present and
    /// derived from masses otherwise.
    pub fn build_marked(&self) -> Result<MarkedGraph, GraphError> {
        match &self.colors {
            Some(colors) => {
                if colors.len() != self.vertices.len() {
                    return Err(GraphError::Parse(format!(
                        "{} colors for {} vertices",
                        colors.len(),
                        self.vertices.len()
                    )));
                }
                marked_closure(
                    self.vertices.iter().cloned().zip(colors.iter().copied()).collect(),
                )
            }
            None => Ok(self.build_combinatorial()?.to_marked()),
        }
    }

    /// Builds a combinatorial graph; explicit colors must match the masses.
    pub fn build_combinatorial(&self) -> Result<ColoredGraph, GraphError> {
        let g = complete_closure(self.vertices.clone())?;
        if let Some(colors) = &self.colors {
            for (i, c) in colors.iter().enumerate() {
                if *c != g.color(i) {
                    return Err(GraphError::BadMass {
                        vertex: g.vertices[i].clone(),
                        mass: g.vertices[i].iter().sum(),
                    });
                }
            }
        }
        Ok(g)
    }
}

/// Parses `vertices: [[0,0],[1,-1]]`.
pub fn parse_vertices_line(line: &str) -> Result<Vec<Vertex>, GraphError> {
    let rest = line
        .trim()
        .strip_prefix("vertices:")
        .ok_or_else(|| GraphError::Parse(format!("expected `vertices: [...]`, got `{line}`")))?;
    serde_json::from_str(rest.trim())
        .map_err(|e| GraphError::Parse(format!("bad vertex list in `{line}`: {e}")))
}

/// Canonical key of a vertex set: lexicographically sorted, and replaced by
/// the sorted negation when all masses are 0 and the negation sorts lower.
pub fn canonical_vertex_key(vertices: &[Vertex]) -> Vec<Vertex> {
    let mut sorted = vertices.to_vec();
    sorted.sort();
    let all_black = vertices.iter().all(|v| v.iter().sum::<i64>() == 0);
    if all_black {
        let mut negated: Vec<Vertex> =
            vertices.iter().map(|v| v.iter().map(|&c| -c).collect()).collect();
        negated.sort();
        if negated < sorted {
            return negated;
        }
    }
    sorted
}

fn root_first(mut set: Vec<Vertex>) -> Vec<Vertex> {
    set.sort();
    let pos = set
        .iter()
        .position(|v| v.iter().all(|&c| c == 0))
        .expect("enumerated sets contain the root");
    let root = set.remove(pos);
    let mut out = vec![root];
    out.extend(set);
    out
}

/// Enumerates every connected complete vertex set containing 0 with
/// coordinates bounded by `coord_bound`, masses in {0, -2} and at most
/// `max_vertices` vertices, one representative per canonical class.
pub fn enumerate_graphs(m: usize, max_vertices: usize, coord_bound: i64) -> GraphEnumeration {
    assert!(m >= 1 && max_vertices >= 1 && coord_bound >= 1, "bounds must be at least 1");
    let root = vec![0; m];
    let start = vec![root];
    let mut visited = HashSet::new();
    visited.insert(canonical_vertex_key(&start));
    let mut queue = VecDeque::new();
    queue.push_back(start);
    GraphEnumeration { m, max_vertices, coord_bound, visited, queue }
}

pub struct GraphEnumeration {
    m: usize,
    max_vertices: usize,
    coord_bound: i64,
    visited: HashSet<Vec<Vertex>>,
    queue: VecDeque<Vec<Vertex>>,
}

impl GraphEnumeration {
    /// All vertices adjacent to some vertex of `set` within the coordinate
    /// bound, excluding the set itself.
    fn extensions(&self, set: &[Vertex]) -> BTreeSet<Vertex> {
        let mut out = BTreeSet::new();
        let in_bound = |v: &Vertex| v.iter().all(|&c| c.abs() <= self.coord_bound);
        for v in set {
            for i in 0..self.m {
                for j in 0..self.m {
                    if i == j {
                        continue;
                    }
                    // Same-color neighbor across e_i - e_j.
                    let mut u = v.clone();
                    u[i] += 1;
                    u[j] -= 1;
                    if in_bound(&u) && !set.contains(&u) {
                        out.insert(u);
                    }
                    // Opposite-color neighbor: u + v = -e_i - e_j.
                    if i < j {
                        let mut u: Vertex = v.iter().map(|&c| -c).collect();
                        u[i] -= 1;
                        u[j] -= 1;
                        if in_bound(&u) && !set.contains(&u) {
                            out.insert(u);
                        }
                    }
                }
            }
        }
        out
    }
}

impl Iterator for GraphEnumeration {
    type Item = ColoredGraph;

    fn next(&mut self) -> Option<ColoredGraph> {
        let set = self.queue.pop_front()?;
        if set.len() < self.max_vertices {
            // Extend both the representative and, when its twist image is a
            // valid graph (all black), the image: classes reachable only
            // through the image's extensions would otherwise be missed.
            let all_black = set.iter().all(|v| v.iter().sum::<i64>() == 0);
            let mut sources = vec![set.clone()];
            if all_black {
                sources.push(set.iter().map(|v| v.iter().map(|&c| -c).collect()).collect());
            }
            for source in sources {
                for u in self.extensions(&source) {
                    let mut grown = source.clone();
                    grown.push(u);
                    let key = canonical_vertex_key(&grown);
                    if self.visited.insert(key.clone()) {
                        self.queue.push_back(key);
                    }
                }
            }
        }
        let graph = complete_closure(root_first(set))
            .expect("enumerated sets are connected with valid masses");
        Some(graph)
    }
}

/// Rank over Q of an integer matrix given by rows.
pub fn integer_rank(rows: &[Vec<BigInt>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut mat: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|c| BigRational::from_integer(c.clone())).collect())
        .collect();
    rational_echelon(&mut mat, cols).len()
}

/// Reduces `mat` to row echelon form in place; returns the pivot columns.
pub(crate) fn rational_echelon(mat: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let rows = mat.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else { continue };
        mat.swap(r, p);
        let inv = mat[r][c].recip();
        for x in mat[r][c..cols].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for k in c..cols {
                    let sub = &f * &mat[r][k];
                    mat[i][k] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Basis of the right nullspace of `mat` (rows of length `cols`).
pub(crate) fn rational_nullspace(mat: &mut [Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let pivots = rational_echelon(mat, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); cols];
            v[fc] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -mat[row][fc].clone();
            }
            v
        })
        .collect()
}

/// Clears denominators and divides by the content; the first nonzero entry
/// is made positive.
pub(crate) fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in ints.iter_mut() {
            *x /= &g;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
    }
    ints
}
