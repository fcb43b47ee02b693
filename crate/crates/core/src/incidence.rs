//! Permutations of GF(q), their graphs, collinear triple counts and the
//! hypergraph of maximal collinear subsets.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::field::{FieldElement, FieldSpec};
use crate::geometry::{collinear, AffineLine, Direction, PlanePoint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IncidenceError {
    #[error("expected {expected} images, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("not a bijection: image {0} occurs more than once")]
    NotABijection(u32),
    #[error("image {index} is not an element of a field of order {order}")]
    ImageOutOfRange { index: u32, order: u32 },
}

#[inline]
pub fn choose2(m: u64) -> u64 {
    m * m.saturating_sub(1) / 2
}

#[inline]
pub fn choose3(m: u64) -> u64 {
    if m < 3 {
        0
    } else {
        m * (m - 1) * (m - 2) / 6
    }
}

/// Inverse of `choose2` on its image: the `m` with `m (m - 1) / 2 = pairs`.
fn points_from_pairs(pairs: u64) -> u64 {
    let disc = 1 + 8 * pairs;
    let r = disc.isqrt();
    debug_assert_eq!(r * r, disc, "pair count {pairs} is not triangular");
    r.div_ceil(2)
}

/// A bijection of GF(q). Position `i` holds the image of the element with index `i`.
#[derive(Clone, PartialEq, Eq)]
pub struct Permutation {
    field: Arc<FieldSpec>,
    images: Vec<FieldElement>,
}

impl core::fmt::Debug for Permutation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_list().entries(self.images.iter().map(|e| e.index())).finish()
    }
}

impl Permutation {
    /// Validates `images` as a bijection on `[0, q)`.
    pub fn new(field: Arc<FieldSpec>, images: &[u32]) -> Result<Self, IncidenceError> {
        let q = field.order();
        if images.len() != q as usize {
            return Err(IncidenceError::WrongLength { expected: q as usize, got: images.len() });
        }
        let mut seen = vec![false; q as usize];
        for &v in images {
            if v >= q {
                return Err(IncidenceError::ImageOutOfRange { index: v, order: q });
            }
            if core::mem::replace(&mut seen[v as usize], true) {
                return Err(IncidenceError::NotABijection(v));
            }
        }
        let images = images.iter().map(|&v| FieldElement::from_index_unchecked(v)).collect();
        Ok(Permutation { field, images })
    }

    pub fn identity(field: Arc<FieldSpec>) -> Self {
        let images = field.elements().collect();
        Permutation { field, images }
    }

    /// The power map x -> x^k; a bijection iff gcd(k, q - 1) = 1.
    pub fn power(field: Arc<FieldSpec>, k: u64) -> Result<Self, IncidenceError> {
        let images: Vec<u32> = field.elements().map(|x| field.pow(x, k).index()).collect();
        Self::new(field, &images)
    }

    /// Builds a permutation from a function on elements, validating bijectivity.
    pub fn from_fn(
        field: Arc<FieldSpec>,
        f: impl Fn(FieldElement) -> FieldElement,
    ) -> Result<Self, IncidenceError> {
        let images: Vec<u32> = field.elements().map(|x| f(x).index()).collect();
        Self::new(field, &images)
    }

    /// Trusted constructor for internally generated bijections.
    pub(crate) fn from_trusted(field: Arc<FieldSpec>, images: Vec<FieldElement>) -> Self {
        debug_assert_eq!(images.len(), field.order() as usize);
        Permutation { field, images }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    #[inline]
    pub fn image(&self, x: FieldElement) -> FieldElement {
        self.images[x.index() as usize]
    }

    pub fn images(&self) -> &[FieldElement] {
        &self.images
    }

    pub fn image_indices(&self) -> Vec<u32> {
        self.images.iter().map(|e| e.index()).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![FieldElement::ZERO; self.images.len()];
        for (x, &y) in self.field.elements().zip(&self.images) {
            inv[y.index() as usize] = x;
        }
        Permutation { field: self.field.clone(), images: inv }
    }

    /// The graph point of domain index `i`.
    #[inline]
    pub fn graph_point(&self, i: u32) -> PlanePoint {
        PlanePoint::new(FieldElement::from_index_unchecked(i), self.images[i as usize])
    }

    pub fn graph_points(&self) -> impl Iterator<Item = PlanePoint> + '_ {
        (0..self.order()).map(|i| self.graph_point(i))
    }

    /// Every permutation of GF(q) in lexicographic order of image lists.
    pub fn all(field: Arc<FieldSpec>) -> AllPermutations {
        let current = Some((0..field.order()).collect());
        AllPermutations { field, current }
    }
}

pub struct AllPermutations {
    field: Arc<FieldSpec>,
    current: Option<Vec<u32>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.current.as_mut()?;
        let out = Permutation::from_trusted(
            self.field.clone(),
            cur.iter().map(|&v| FieldElement::from_index_unchecked(v)).collect(),
        );
        if !next_permutation(cur) {
            self.current = None;
        }
        Some(out)
    }
}

/// Advances to the next lexicographic permutation; false when `v` was the last.
pub fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Reference count of collinear triples: every unordered triple, O(q^3).
pub fn psi_brute(alpha: &Permutation) -> u64 {
    let field = alpha.field();
    let pts: Vec<PlanePoint> = alpha.graph_points().collect();
    let mut count = 0u64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if collinear(field, pts[i], pts[j], pts[k]) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Key of the non-vertical line through graph points `i < j`, in `0..q^2`.
#[inline]
fn carrier_key(field: &FieldSpec, alpha: &Permutation, i: u32, j: u32) -> (usize, AffineLine) {
    let xi = FieldElement::from_index_unchecked(i);
    let xj = FieldElement::from_index_unchecked(j);
    let dx = field.sub(xj, xi);
    assert!(!dx.is_zero(), "distinct domain points cannot span a vertical carrier");
    let (yi, yj) = (alpha.image(xi), alpha.image(xj));
    let slope = field.mul(field.sub(yj, yi), field.inv(dx).expect("dx is nonzero"));
    let offset = field.sub(yi, field.mul(slope, xi));
    let q = field.order() as usize;
    let line = AffineLine::new(Direction::Slope(slope), offset);
    (slope.index() as usize * q + offset.index() as usize, line)
}

/// Triple count by grouping the C(q, 2) point pairs by carrier line.
///
/// A carrier holding `m` graph points receives C(m, 2) pairs and contributes
/// C(m, 3) triples. Expected work and memory are O(q^2).
pub fn psi_fast(alpha: &Permutation) -> u64 {
    let field = alpha.field();
    let q = field.order();
    let mut pairs = vec![0u32; q as usize * q as usize];
    for i in 0..q {
        for j in i + 1..q {
            let (key, _) = carrier_key(field, alpha, i, j);
            pairs[key] += 1;
        }
    }
    pairs
        .iter()
        .filter(|&&k| k >= 3)
        .map(|&k| choose3(points_from_pairs(k as u64)))
        .sum()
}

/// A maximal collinear subset of the graph, identified by domain indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollinearEdge {
    /// Sorted, at least two.
    pub members: Vec<u32>,
    /// Never vertical.
    pub carrier: AffineLine,
}

impl CollinearEdge {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollinearHypergraph {
    pub perm: Permutation,
    /// Ordered by smallest member, then second member.
    pub edges: Vec<CollinearEdge>,
    pub psi: u64,
    pub norm: u64,
}

impl CollinearHypergraph {
    /// Sum of C(|e|, 2); always C(q, 2).
    pub fn pair_total(&self) -> u64 {
        self.edges.iter().map(|e| choose2(e.len() as u64)).sum()
    }

    pub fn edge_containing(&self, i: u32, j: u32) -> Option<&CollinearEdge> {
        self.edges
            .iter()
            .find(|e| e.members.binary_search(&i).is_ok() && e.members.binary_search(&j).is_ok())
    }
}

/// Every carrier line with at least two graph points, as an edge.
///
/// Pairs are visited in lexicographic order, so an edge is created at the
/// pair of its two smallest members and its remaining members all arrive
/// while the outer index is still its smallest member.
pub fn maximal_hypergraph(alpha: &Permutation) -> CollinearHypergraph {
    let field = alpha.field();
    let q = field.order();
    const NONE: u32 = u32::MAX;
    let mut edge_of = vec![NONE; q as usize * q as usize];
    let mut edges: Vec<CollinearEdge> = Vec::new();
    for i in 0..q {
        for j in i + 1..q {
            let (key, carrier) = carrier_key(field, alpha, i, j);
            match edge_of[key] {
                NONE => {
                    edge_of[key] = edges.len() as u32;
                    edges.push(CollinearEdge { members: vec![i, j], carrier });
                }
                id => {
                    let edge = &mut edges[id as usize];
                    if edge.members[0] == i {
                        edge.members.push(j);
                    }
                }
            }
        }
    }
    let psi = edges.iter().map(|e| choose3(e.len() as u64)).sum();
    let norm = edges.iter().map(|e| choose2(e.len() as u64 - 1)).sum();
    CollinearHypergraph { perm: alpha.clone(), edges, psi, norm }
}
