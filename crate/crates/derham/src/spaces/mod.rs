//! Finite simplicial complexes and space-level cohomology calculators.
//!
//! A [`SimplicialComplex`] is stored as the full face closure of a list of
//! maximal simplices; its rational cochain complex (coboundary =
//! transposed boundary with alternating signs) plugs straight into the
//! exact linear algebra of [`crate::chains`], so Betti numbers are exact
//! integers, not floating-point ranks.
//!
//! On top of the combinatorics sit the dimension-counting calculators:
//! Betti profiles with Künneth products and Poincaré-duality checks
//! ([`profile`]), and two faces of Mayer–Vietoris — the numeric
//! long-exact-sequence solver on [`CoverSpec`], and [`mayer_vietoris`],
//! which builds the actual short exact sequence of cochain complexes for a
//! cover of a complex by two subcomplexes and hands it to the zigzag
//! machinery.

pub mod models;
pub mod profile;

pub use profile::{BettiProfile, CoverSpec, DualityOutcome, MayerVietorisSolution};

use std::collections::{BTreeMap, BTreeSet};

use crate::chains::{ChainError, CochainComplex, ComplexSes, RationalMatrix, ZigzagReport};
use crate::Rational;

/// Errors from simplicial-complex construction and cover analysis.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("a complex needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} is out of range for a complex on {n_vertices} vertices")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },
    #[error("simplex {0:?} repeats a vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("simplex {0:?} is empty")]
    EmptySimplex(Vec<usize>),
    #[error("vertex {0} appears in no maximal simplex; list it as a singleton to keep it")]
    UnusedVertex(usize),
    #[error("{0:?} is not a simplex of the complex")]
    NotASimplex(Vec<usize>),
    #[error("the two subcomplexes do not cover the complex: {0:?} lies in neither")]
    CoverIncomplete(Vec<usize>),
    #[error("intersection has {found} components but {expected} incidence entries")]
    IncidenceCount { expected: usize, found: usize },
    #[error("incidence entry {component} points at a missing component on the {side} side")]
    IncidenceOutOfRange { component: usize, side: &'static str },
    #[error("comparison rank {rank} at degree {degree} exceeds the possible maximum {max}")]
    RankTooLarge { degree: usize, rank: usize, max: usize },
    #[error("degree-0 comparison rank comes from the incidence data and cannot be overridden")]
    ReservedDegree,
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Simplices of one dimension, each a strictly increasing vertex list,
/// stored sorted for deterministic indexing.
type Layer = Vec<Vec<usize>>;

/// A finite abstract simplicial complex on vertices `0..n_vertices`,
/// closed under taking faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    n_vertices: usize,
    /// `simplices[k]` lists the `k`-simplices in lexicographic order.
    simplices: Vec<Layer>,
}

/// Sorts a simplex and validates its vertices.
fn canonical_simplex(simplex: &[usize], n_vertices: usize) -> Result<Vec<usize>, SpaceError> {
    if simplex.is_empty() {
        return Err(SpaceError::EmptySimplex(simplex.to_vec()));
    }
    let mut s = simplex.to_vec();
    s.sort_unstable();
    for w in s.windows(2) {
        if w[0] == w[1] {
            return Err(SpaceError::RepeatedVertex(simplex.to_vec()));
        }
    }
    if let Some(&v) = s.last() {
        if v >= n_vertices {
            return Err(SpaceError::VertexOutOfRange {
                vertex: v,
                n_vertices,
            });
        }
    }
    Ok(s)
}

/// Face closure of a list of simplices, bucketed by dimension.
fn face_closure(
    maximal: &[Vec<usize>],
    n_vertices: usize,
) -> Result<Vec<BTreeSet<Vec<usize>>>, SpaceError> {
    let mut layers: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    for raw in maximal {
        let s = canonical_simplex(raw, n_vertices)?;
        // Every nonempty vertex subset is a face.
        for mask in 1u32..(1 << s.len()) {
            let face: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            let k = face.len() - 1;
            while layers.len() <= k {
                layers.push(BTreeSet::new());
            }
            layers[k].insert(face);
        }
    }
    Ok(layers)
}

fn layers_to_lists(layers: Vec<BTreeSet<Vec<usize>>>) -> Vec<Layer> {
    layers
        .into_iter()
        .map(|set| set.into_iter().collect())
        .collect()
}

/// Boundary matrix of a dimension-bucketed simplex collection:
/// `∂σ = Σ_i (−1)^i (σ with vertex i removed)`.
fn boundary_of_layers(layers: &[Layer], k: usize) -> RationalMatrix {
    let empty: Layer = Vec::new();
    let rows_list = layers.get(k - 1).unwrap_or(&empty);
    let cols_list = layers.get(k).unwrap_or(&empty);
    let index: BTreeMap<&[usize], usize> = rows_list
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let mut d = RationalMatrix::zeros(rows_list.len(), cols_list.len());
    for (j, s) in cols_list.iter().enumerate() {
        for drop in 0..s.len() {
            let mut face = s.clone();
            face.remove(drop);
            let i = index[face.as_slice()];
            let sign = if drop % 2 == 0 { 1 } else { -1 };
            d[(i, j)] = Rational::from_integer(sign.into());
        }
    }
    d
}

/// Cochain complex (transposed boundaries) of a simplex collection,
/// padded with zero spaces up to `len` degrees.
fn cochain_of_layers(layers: &[Layer], len: usize) -> CochainComplex {
    let dims: Vec<usize> = (0..len)
        .map(|k| layers.get(k).map_or(0, |l| l.len()))
        .collect();
    let diffs: Vec<RationalMatrix> = (1..len)
        .map(|k| boundary_of_layers(layers, k).transpose())
        .collect();
    CochainComplex::new(dims, diffs).expect("∂∂ = 0 transposes to d d = 0")
}

/// Connected components of a simplex collection by union-find over its
/// vertices and edges; returns the count and a vertex → component map,
/// components numbered by their smallest vertex.
fn components_of_layers(layers: &[Layer]) -> (usize, BTreeMap<usize, usize>) {
    let vertices: Vec<usize> = layers
        .first()
        .map(|l| l.iter().map(|s| s[0]).collect())
        .unwrap_or_default();
    let mut parent: BTreeMap<usize, usize> = vertices.iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<usize, usize>, v: usize) -> usize {
        let p = parent[&v];
        if p == v {
            v
        } else {
            let root = find(parent, p);
            parent.insert(v, root);
            root
        }
    }
    if let Some(edges) = layers.get(1) {
        for e in edges {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                parent.insert(hi, lo);
            }
        }
    }
    let mut roots: Vec<usize> = vertices.iter().map(|&v| find(&mut parent, v)).collect();
    roots.sort_unstable();
    roots.dedup();
    let root_id: BTreeMap<usize, usize> = roots.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let map = vertices
        .iter()
        .map(|&v| (v, root_id[&find(&mut parent, v)]))
        .collect();
    (roots.len(), map)
}

impl SimplicialComplex {
    /// Builds the face closure of `maximal`.  Every vertex `0..n_vertices`
    /// must appear in some listed simplex — an intentionally isolated
    /// vertex is declared as the singleton `[v]`.
    pub fn from_maximal(n_vertices: usize, maximal: &[Vec<usize>]) -> Result<Self, SpaceError> {
        if n_vertices == 0 {
            return Err(SpaceError::Empty);
        }
        let layers = face_closure(maximal, n_vertices)?;
        let seen: BTreeSet<usize> = layers
            .first()
            .map(|l| l.iter().map(|s| s[0]).collect())
            .unwrap_or_default();
        for v in 0..n_vertices {
            if !seen.contains(&v) {
                return Err(SpaceError::UnusedVertex(v));
            }
        }
        Ok(SimplicialComplex {
            n_vertices,
            simplices: layers_to_lists(layers),
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Dimension of the largest simplex.
    pub fn dimension(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn simplex_count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, |l| l.len())
    }

    /// The `k`-simplices in lexicographic order.
    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], |l| l.as_slice())
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        canonical_simplex(simplex, self.n_vertices)
            .ok()
            .and_then(|s| {
                self.simplices
                    .get(s.len() - 1)
                    .map(|l| l.binary_search(&s).is_ok())
            })
            .unwrap_or(false)
    }

    /// Boundary matrix `∂_k : C_k → C_{k−1}` with alternating signs, in
    /// the lexicographic simplex bases.
    pub fn boundary_matrix(&self, k: usize) -> RationalMatrix {
        assert!(k >= 1, "boundary starts at dimension 1");
        boundary_of_layers(&self.simplices, k)
    }

    /// The rational cochain complex: degree-`k` space spanned by the
    /// `k`-simplices, differential the transposed boundary.
    pub fn cochain_complex(&self) -> CochainComplex {
        cochain_of_layers(&self.simplices, self.dimension() + 1)
    }

    /// Betti numbers, exactly.
    pub fn betti(&self) -> Vec<usize> {
        self.cochain_complex().betti()
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dimension())
            .map(|k| {
                let n = self.simplex_count(k) as i64;
                if k % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    /// Number of connected components, by union-find on the 1-skeleton.
    /// Independent of the linear algebra behind `betti()[0]`.
    pub fn component_count(&self) -> usize {
        components_of_layers(&self.simplices).0
    }

    /// Disjoint union, with `other`'s vertices shifted past `self`'s.
    pub fn disjoint_union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let offset = self.n_vertices;
        let mut maximal: Vec<Vec<usize>> = Vec::new();
        for layer in &self.simplices {
            maximal.extend(layer.iter().cloned());
        }
        for layer in &other.simplices {
            maximal.extend(
                layer
                    .iter()
                    .map(|s| s.iter().map(|&v| v + offset).collect::<Vec<_>>()),
            );
        }
        SimplicialComplex::from_maximal(self.n_vertices + other.n_vertices, &maximal)
            .expect("both operands were valid complexes")
    }

    /// Face closure of `maximal` inside this complex, as dimension
    /// layers; errors when a listed simplex is not part of the complex.
    fn subcomplex_layers(&self, maximal: &[Vec<usize>]) -> Result<Vec<Layer>, SpaceError> {
        let layers = face_closure(maximal, self.n_vertices)?;
        for layer in &layers {
            for s in layer {
                if !self.contains(s) {
                    return Err(SpaceError::NotASimplex(s.clone()));
                }
            }
        }
        Ok(layers_to_lists(layers))
    }
}

/// The Mayer–Vietoris short exact sequence of a cover of a simplicial
/// complex by two subcomplexes, plus the component bookkeeping that the
/// numeric solver needs.  Produced by [`mayer_vietoris`].
#[derive(Debug, Clone)]
pub struct MayerVietoris {
    /// `0 → C•(M) → C•(U) ⊕ C•(V) → C•(U∩V) → 0`, restriction maps on
    /// the left, signed difference of restrictions on the right.
    pub ses: ComplexSes,
    pub u_betti: Vec<usize>,
    pub v_betti: Vec<usize>,
    pub intersection_betti: Vec<usize>,
    /// For each component of `U∩V`, the components of `U` and `V`
    /// containing it (all numbered by smallest vertex).
    pub incidence: Vec<(usize, usize)>,
}

impl MayerVietoris {
    /// Runs the zigzag construction on the underlying sequence.
    pub fn zigzag(&self) -> ZigzagReport {
        self.ses.zigzag()
    }

    /// Dimension-counting cover description with only the degree-0
    /// comparison data (component incidence) filled in.
    pub fn cover_spec(&self) -> Result<CoverSpec, SpaceError> {
        CoverSpec::new(
            self.u_betti.clone(),
            self.v_betti.clone(),
            self.intersection_betti.clone(),
            self.incidence.clone(),
        )
    }

    /// Cover description with the higher comparison ranks read off from
    /// the induced maps of a zigzag run.
    pub fn solved_cover_spec(&self, zigzag: &ZigzagReport) -> Result<CoverSpec, SpaceError> {
        let mut spec = self.cover_spec()?;
        for (k, g) in zigzag.g_star.iter().enumerate().skip(1) {
            if g.rows() > 0 && g.cols() > 0 {
                spec = spec.with_j_rank(k, g.rank())?;
            }
        }
        Ok(spec)
    }
}

/// Builds the Mayer–Vietoris sequence for `m = U ∪ V`, where `U` and `V`
/// are the face closures of the given maximal simplices.  Every simplex
/// of `m` must land in at least one of the two.
pub fn mayer_vietoris(
    m: &SimplicialComplex,
    u_maximal: &[Vec<usize>],
    v_maximal: &[Vec<usize>],
) -> Result<MayerVietoris, SpaceError> {
    let u = m.subcomplex_layers(u_maximal)?;
    let v = m.subcomplex_layers(v_maximal)?;

    let in_layers = |layers: &[Layer], s: &Vec<usize>| {
        layers
            .get(s.len() - 1)
            .is_some_and(|l| l.binary_search(s).is_ok())
    };
    for layer in &m.simplices {
        for s in layer {
            if !in_layers(&u, s) && !in_layers(&v, s) {
                return Err(SpaceError::CoverIncomplete(s.clone()));
            }
        }
    }

    // Intersection is simplexwise.
    let w: Vec<Layer> = (0..u.len().min(v.len()))
        .map(|k| {
            u[k].iter()
                .filter(|s| in_layers(&v, s))
                .cloned()
                .collect::<Vec<_>>()
        })
        .collect();

    let len = m.dimension() + 1;
    let cm = m.cochain_complex();
    let cu = cochain_of_layers(&u, len);
    let cv = cochain_of_layers(&v, len);
    let cw = cochain_of_layers(&w, len);
    let (u_betti, v_betti, w_betti) = (cu.betti(), cv.betti(), cw.betti());

    // f: restrict a cochain on M to U and to V (stacked);
    // g: restriction to U∩V through U minus restriction through V.
    let layer_index = |layers: &[Layer], k: usize| -> BTreeMap<Vec<usize>, usize> {
        layers
            .get(k)
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .unwrap_or_default()
    };
    let mut f = Vec::with_capacity(len);
    let mut g = Vec::with_capacity(len);
    for k in 0..len {
        let m_idx = layer_index(&m.simplices, k);
        let u_idx = layer_index(&u, k);
        let v_idx = layer_index(&v, k);
        let w_list: &[Vec<usize>] = w.get(k).map_or(&[], |l| l.as_slice());

        let mut fk = RationalMatrix::zeros(cu.dim(k) + cv.dim(k), cm.dim(k));
        for (s, &col) in &m_idx {
            if let Some(&row) = u_idx.get(s) {
                fk[(row, col)] = Rational::from_integer(1.into());
            }
            if let Some(&row) = v_idx.get(s) {
                fk[(cu.dim(k) + row, col)] = Rational::from_integer(1.into());
            }
        }
        f.push(fk);

        let mut gk = RationalMatrix::zeros(w_list.len(), cu.dim(k) + cv.dim(k));
        for (row, s) in w_list.iter().enumerate() {
            gk[(row, u_idx[s])] = Rational::from_integer(1.into());
            gk[(row, cu.dim(k) + v_idx[s])] = Rational::from_integer((-1).into());
        }
        g.push(gk);
    }

    let ses = ComplexSes::new(cm, cu.direct_sum(&cv)?, cw, f, g)?;

    // Component incidence: each intersection component sits inside one
    // component of U and one of V; record both by their component ids.
    let (_, u_comp) = components_of_layers(&u);
    let (_, v_comp) = components_of_layers(&v);
    let (w_count, w_comp) = components_of_layers(&w);
    let mut reps: Vec<usize> = vec![usize::MAX; w_count];
    for (&vertex, &comp) in &w_comp {
        if vertex < reps[comp] {
            reps[comp] = vertex;
        }
    }
    let incidence = reps
        .into_iter()
        .map(|vertex| (u_comp[&vertex], v_comp[&vertex]))
        .collect();

    Ok(MayerVietoris {
        ses,
        u_betti,
        v_betti,
        intersection_betti: w_betti,
        incidence,
    })
}
