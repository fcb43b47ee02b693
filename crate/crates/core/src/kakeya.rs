//! Kakeya line families, point multiplicities and Faber's incidence formula,
//! plus the correspondence between multiple points of K_alpha and the
//! collinear subsets of the graph of alpha.
//!
//! For a permutation alpha the family consists of the q lines
//! `y = i x + alpha(i)` together with the vertical line `x = 0`. The vertical
//! line adds no points since alpha is onto, and each column point lies on
//! exactly two family lines, so it contributes nothing to the excess.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::field::{FieldElement, FieldSpec};
use crate::geometry::{directions, AffineLine, Direction, PlanePoint};
use crate::incidence::{choose2, CollinearEdge, CollinearHypergraph, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KakeyaError {
    #[error("a line family needs exactly one line per direction (q + 1 = {expected}), got {got}")]
    WrongLineCount { expected: usize, got: usize },
    #[error("direction index {0} appears more than once")]
    DuplicateDirection(u32),
    #[error("offset {offset} is not a field element")]
    OffsetOutOfRange { offset: u32 },
    #[error("the point lies on the column x = 0")]
    OffColumnRequired,
    #[error("the point lies on fewer than two construction lines")]
    NotAMultiplePoint,
    #[error("an edge needs at least two members")]
    TooFewMembers,
    #[error("edge carrier has slope 0; its pencil point would sit on the column x = 0")]
    DegenerateEdge,
}

/// One line per direction, indexed by [`Direction::index`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineFamily {
    field: Arc<FieldSpec>,
    lines: Vec<AffineLine>,
}

impl LineFamily {
    pub fn new(field: Arc<FieldSpec>, lines: &[AffineLine]) -> Result<Self, KakeyaError> {
        let q = field.order();
        let expected = q as usize + 1;
        if lines.len() != expected {
            return Err(KakeyaError::WrongLineCount { expected, got: lines.len() });
        }
        let mut slots: Vec<Option<AffineLine>> = vec![None; expected];
        for line in lines {
            if line.offset.index() >= q {
                return Err(KakeyaError::OffsetOutOfRange { offset: line.offset.index() });
            }
            let d = line.direction.index(q);
            if slots[d as usize].replace(*line).is_some() {
                return Err(KakeyaError::DuplicateDirection(d));
            }
        }
        let lines = slots.into_iter().map(|l| l.expect("all q + 1 slots filled")).collect();
        Ok(LineFamily { field, lines })
    }

    /// `offsets[d]` is the offset of the line with direction index `d`.
    pub fn from_offsets(field: Arc<FieldSpec>, offsets: &[u32]) -> Result<Self, KakeyaError> {
        let expected = field.order() as usize + 1;
        if offsets.len() != expected {
            return Err(KakeyaError::WrongLineCount { expected, got: offsets.len() });
        }
        let mut lines = Vec::with_capacity(expected);
        for (d, &c) in directions(&field).zip(offsets) {
            let offset =
                field.element(c).map_err(|_| KakeyaError::OffsetOutOfRange { offset: c })?;
            lines.push(AffineLine::new(d, offset));
        }
        Ok(LineFamily { field, lines })
    }

    /// K_alpha: the lines `y = i x + alpha(i)` and the column `x = 0`.
    pub fn from_permutation(alpha: &Permutation) -> Self {
        let field = alpha.field_arc().clone();
        let mut lines: Vec<AffineLine> = field
            .elements()
            .map(|i| AffineLine::new(Direction::Slope(i), alpha.image(i)))
            .collect();
        lines.push(AffineLine::new(Direction::Vertical, FieldElement::ZERO));
        LineFamily { field, lines }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn lines(&self) -> &[AffineLine] {
        &self.lines
    }

    pub fn line(&self, direction: Direction) -> &AffineLine {
        &self.lines[direction.index(self.field.order()) as usize]
    }

    pub fn offsets(&self) -> Vec<u32> {
        self.lines.iter().map(|l| l.offset.index()).collect()
    }

    pub fn translate(&self, dx: FieldElement, dy: FieldElement) -> Self {
        let lines = self.lines.iter().map(|l| l.translate(&self.field, dx, dy)).collect();
        LineFamily { field: self.field.clone(), lines }
    }

    /// Number of distinct points on the union of the lines.
    pub fn union_size(&self) -> u64 {
        let q = self.field.order();
        let mut covered = vec![false; (q * q) as usize];
        let mut size = 0;
        for line in &self.lines {
            for p in line.points(&self.field) {
                let cell = &mut covered[p.grid_index(q)];
                if !*cell {
                    *cell = true;
                    size += 1;
                }
            }
        }
        size
    }
}

/// The number of family lines through each point of the union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityMap {
    pub family: LineFamily,
    /// Sorted by `(x, y)` index; every `mu >= 1`.
    pub entries: Vec<(PlanePoint, u32)>,
}

impl MultiplicityMap {
    /// Number of distinct points.
    pub fn size(&self) -> u64 {
        self.entries.len() as u64
    }

    pub fn mu(&self, p: PlanePoint) -> u32 {
        self.entries
            .binary_search_by(|(e, _)| e.cmp(&p))
            .map(|k| self.entries[k].1)
            .unwrap_or(0)
    }

    /// `mu -> number of points with that multiplicity`.
    pub fn histogram(&self) -> BTreeMap<u32, u64> {
        let mut h = BTreeMap::new();
        for &(_, mu) in &self.entries {
            *h.entry(mu).or_insert(0) += 1;
        }
        h
    }
}

pub fn multiplicity_map(family: &LineFamily) -> MultiplicityMap {
    let field = family.field();
    let q = field.order();
    let mut counts = vec![0u32; (q * q) as usize];
    for line in family.lines() {
        for p in line.points(field) {
            counts[p.grid_index(q)] += 1;
        }
    }
    // Grid order is x-major, which is the (x, y) lexicographic order.
    let entries = counts
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > 0)
        .map(|(cell, &mu)| {
            let x = FieldElement::from_index_unchecked(cell as u32 / q);
            let y = FieldElement::from_index_unchecked(cell as u32 % q);
            (PlanePoint::new(x, y), mu)
        })
        .collect();
    MultiplicityMap { family: family.clone(), entries }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaberReport {
    pub q: u32,
    pub size: u64,
    /// Sum over the union of C(mu - 1, 2).
    pub excess: u64,
    /// Sum of mu.
    pub moment1: u64,
    /// Sum of mu^2.
    pub moment2: u64,
    /// `size == q (q + 1) / 2 + excess`.
    pub formula_holds: bool,
    pub mu_histogram: BTreeMap<u32, u64>,
}

impl FaberReport {
    pub fn from_map(map: &MultiplicityMap) -> Self {
        let q = map.family.field().order();
        let mut excess = 0;
        let mut moment1 = 0;
        let mut moment2 = 0;
        for &(_, mu) in &map.entries {
            let mu = mu as u64;
            excess += choose2(mu - 1);
            moment1 += mu;
            moment2 += mu * mu;
        }
        let size = map.size();
        FaberReport {
            q,
            size,
            excess,
            moment1,
            moment2,
            formula_holds: size == half_plane_count(q) + excess,
            mu_histogram: map.histogram(),
        }
    }

    pub fn first_moment_holds(&self) -> bool {
        let q = self.q as u64;
        self.moment1 == q * (q + 1)
    }

    pub fn second_moment_holds(&self) -> bool {
        let q = self.q as u64;
        self.moment2 == 2 * q * (q + 1)
    }

    pub fn all_hold(&self) -> bool {
        self.formula_holds && self.first_moment_holds() && self.second_moment_holds()
    }
}

/// q (q + 1) / 2.
pub fn half_plane_count(q: u32) -> u64 {
    q as u64 * (q as u64 + 1) / 2
}

pub fn faber_verify(family: &LineFamily) -> FaberReport {
    FaberReport::from_map(&multiplicity_map(family))
}

/// The domain indices `i` whose construction line `y = i x + alpha(i)` passes through `x`.
fn lines_through(alpha: &Permutation, x: PlanePoint) -> Vec<u32> {
    let field = alpha.field();
    field
        .elements()
        .filter(|&i| field.add(field.mul(i, x.x), alpha.image(i)) == x.y)
        .map(|i| i.index())
        .collect()
}

/// The maximal collinear subset of the graph attached to a multiple point of K_alpha.
///
/// Members are the `i` with `x2 = i x1 + alpha(i)`; the carrier has slope `-x1`
/// and passes through `(0, x2)`.
pub fn edge_for_point(alpha: &Permutation, x: PlanePoint) -> Result<CollinearEdge, KakeyaError> {
    if x.x.is_zero() {
        return Err(KakeyaError::OffColumnRequired);
    }
    let members = lines_through(alpha, x);
    if members.len() < 2 {
        return Err(KakeyaError::NotAMultiplePoint);
    }
    let field = alpha.field();
    let carrier = AffineLine::through(
        field,
        alpha.graph_point(members[0]),
        Direction::Slope(field.neg(x.x)),
    );
    Ok(CollinearEdge { members, carrier })
}

/// The point where the construction lines of members `i` and `j` meet.
pub fn pencil_point(alpha: &Permutation, i: u32, j: u32) -> Result<PlanePoint, KakeyaError> {
    let field = alpha.field();
    let xi = field.element(i).map_err(|_| KakeyaError::TooFewMembers)?;
    let xj = field.element(j).map_err(|_| KakeyaError::TooFewMembers)?;
    if xi == xj {
        return Err(KakeyaError::TooFewMembers);
    }
    let z1 = field
        .div(field.sub(alpha.image(xj), alpha.image(xi)), field.sub(xi, xj))
        .expect("distinct members");
    if z1.is_zero() {
        return Err(KakeyaError::DegenerateEdge);
    }
    let z2 = field.add(alpha.image(xi), field.mul(z1, xi));
    Ok(PlanePoint::new(z1, z2))
}

/// Inverse of [`edge_for_point`], built from the two smallest members.
pub fn point_for_edge(alpha: &Permutation, edge: &CollinearEdge) -> Result<PlanePoint, KakeyaError> {
    match edge.members[..] {
        [i1, i2, ..] => pencil_point(alpha, i1, i2),
        _ => Err(KakeyaError::TooFewMembers),
    }
}

/// Checks that multiple points off the column and edges of the hypergraph
/// correspond one to one, with `mu_x = |e|`, and that the excess equals
/// the hypergraph norm.
pub fn correspondence_holds(hyper: &CollinearHypergraph, map: &MultiplicityMap) -> bool {
    let alpha = &hyper.perm;
    let mut matched = 0usize;
    for &(x, mu) in &map.entries {
        if x.x.is_zero() {
            // One affine line and the vertical line through each column point.
            if mu != 2 {
                return false;
            }
            continue;
        }
        if mu < 2 {
            continue;
        }
        let Ok(edge) = edge_for_point(alpha, x) else {
            return false;
        };
        if edge.len() != mu as usize || point_for_edge(alpha, &edge) != Ok(x) {
            return false;
        }
        if hyper.edges.binary_search_by(|e| e.members.cmp(&edge.members)).is_err() {
            return false;
        }
        matched += 1;
    }
    let excess: u64 = map.entries.iter().map(|&(_, mu)| choose2(mu as u64 - 1)).sum();
    matched == hyper.edges.len() && excess == hyper.norm
}
