//! Stock simplicial complexes and the product triangulation.

use super::SimplicialComplex;

/// A single vertex.
pub fn point() -> SimplicialComplex {
    SimplicialComplex::from_maximal(1, &[vec![0]]).expect("valid by construction")
}

/// Two vertices joined by an edge.
pub fn interval() -> SimplicialComplex {
    SimplicialComplex::from_maximal(2, &[vec![0, 1]]).expect("valid by construction")
}

/// The hollow triangle — the smallest simplicial circle.
pub fn circle() -> SimplicialComplex {
    SimplicialComplex::from_maximal(3, &[vec![0, 1], vec![1, 2], vec![0, 2]])
        .expect("valid by construction")
}

/// A filled triangle.
pub fn disk() -> SimplicialComplex {
    SimplicialComplex::from_maximal(3, &[vec![0, 1, 2]]).expect("valid by construction")
}

/// The boundary of a tetrahedron — the smallest simplicial 2-sphere.
pub fn sphere() -> SimplicialComplex {
    SimplicialComplex::from_maximal(
        4,
        &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
    )
    .expect("valid by construction")
}

/// The torus as the product of two circles: 9 vertices, 27 edges,
/// 18 triangles.
pub fn torus() -> SimplicialComplex {
    product(&circle(), &circle())
}

/// Staircase triangulation of the product `|a| × |b|`.
///
/// The vertex `(i, j)` gets the id `i · b.n_vertices() + j`.  For every
/// pair of simplices `σ ∈ a`, `τ ∈ b`, the cell `σ × τ` is cut into the
/// simplices traced by monotone staircase paths through the vertex grid
/// of `σ × τ`; neighbouring cells agree on shared faces, so the union of
/// all staircases triangulates the whole product.
pub fn product(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    let nb = b.n_vertices();
    let mut maximal: Vec<Vec<usize>> = Vec::new();
    for ka in 0..=a.dimension() {
        for sa in a.simplices(ka) {
            for kb in 0..=b.dimension() {
                for sb in b.simplices(kb) {
                    staircases(sa, sb, nb, &mut maximal);
                }
            }
        }
    }
    SimplicialComplex::from_maximal(a.n_vertices() * nb, &maximal)
        .expect("staircases of valid simplices are valid")
}

/// Appends every staircase simplex of `sa × sb` to `out`.  A staircase
/// chooses, among the `p + q` unit steps from `(sa[0], sb[0])` to
/// `(sa[p], sb[q])`, which ones advance in `sa`; the visited grid points
/// are the simplex vertices.
fn staircases(sa: &[usize], sb: &[usize], nb: usize, out: &mut Vec<Vec<usize>>) {
    let p = sa.len() - 1;
    let q = sb.len() - 1;
    let steps = p + q;
    for mask in 0u32..(1 << steps) {
        if mask.count_ones() as usize != p {
            continue;
        }
        let (mut i, mut j) = (0, 0);
        let mut simplex = vec![sa[0] * nb + sb[0]];
        for s in 0..steps {
            if mask >> s & 1 == 1 {
                i += 1;
            } else {
                j += 1;
            }
            simplex.push(sa[i] * nb + sb[j]);
        }
        out.push(simplex);
    }
}
