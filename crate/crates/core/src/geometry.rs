//! Points, directions and lines of the affine plane AG(2, q).

use crate::field::{FieldElement, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("a line needs two distinct points")]
    CoincidentPoints,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanePoint {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl PlanePoint {
    pub const fn new(x: FieldElement, y: FieldElement) -> Self {
        PlanePoint { x, y }
    }

    /// Position of the point in the row-major `q * q` grid, `x` major.
    #[inline]
    pub fn grid_index(self, q: u32) -> usize {
        self.x.index() as usize * q as usize + self.y.index() as usize
    }
}

/// A parallel class of lines: one of the q + 1 points of PG(1, q).
///
/// Ordering puts the affine slopes first, by index, then the vertical class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Slope(FieldElement),
    Vertical,
}

impl Direction {
    /// Dense index in `0..=q`; the vertical class is `q`.
    #[inline]
    pub fn index(self, q: u32) -> u32 {
        match self {
            Direction::Slope(s) => s.index(),
            Direction::Vertical => q,
        }
    }

    pub fn from_index(field: &FieldSpec, index: u32) -> Option<Direction> {
        let q = field.order();
        match index {
            i if i < q => Some(Direction::Slope(FieldElement::from_index_unchecked(i))),
            i if i == q => Some(Direction::Vertical),
            _ => None,
        }
    }
}

/// All q + 1 directions in canonical order.
pub fn directions(field: &FieldSpec) -> impl Iterator<Item = Direction> + '_ {
    field.elements().map(Direction::Slope).chain(core::iter::once(Direction::Vertical))
}

/// A line in canonical form: `y = s x + offset` for slope `s`, or
/// `x = offset` for the vertical direction. Structural equality is
/// point-set equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineLine {
    pub direction: Direction,
    pub offset: FieldElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Intersection {
    Point(PlanePoint),
    Same,
    Parallel,
}

impl AffineLine {
    pub const fn new(direction: Direction, offset: FieldElement) -> Self {
        AffineLine { direction, offset }
    }

    /// The line through `p` in direction `direction`.
    pub fn through(field: &FieldSpec, p: PlanePoint, direction: Direction) -> Self {
        let offset = match direction {
            Direction::Slope(s) => field.sub(p.y, field.mul(s, p.x)),
            Direction::Vertical => p.x,
        };
        AffineLine { direction, offset }
    }

    pub fn slope(&self) -> Option<FieldElement> {
        match self.direction {
            Direction::Slope(s) => Some(s),
            Direction::Vertical => None,
        }
    }

    /// Dense index in `0..(q + 1) q`.
    #[inline]
    pub fn key(&self, q: u32) -> usize {
        self.direction.index(q) as usize * q as usize + self.offset.index() as usize
    }

    pub fn contains(&self, field: &FieldSpec, p: PlanePoint) -> bool {
        match self.direction {
            Direction::Slope(s) => field.add(field.mul(s, p.x), self.offset) == p.y,
            Direction::Vertical => p.x == self.offset,
        }
    }

    /// The q points of the line, ordered by the free coordinate.
    pub fn points<'a>(&self, field: &'a FieldSpec) -> impl Iterator<Item = PlanePoint> + 'a {
        let line = *self;
        field.elements().map(move |t| match line.direction {
            Direction::Slope(s) => PlanePoint::new(t, field.add(field.mul(s, t), line.offset)),
            Direction::Vertical => PlanePoint::new(line.offset, t),
        })
    }

    /// The image of the line under translation by `(dx, dy)`.
    pub fn translate(&self, field: &FieldSpec, dx: FieldElement, dy: FieldElement) -> Self {
        let offset = match self.direction {
            // y - dy = s (x - dx) + c
            Direction::Slope(s) => field.add(field.sub(self.offset, field.mul(s, dx)), dy),
            Direction::Vertical => field.add(self.offset, dx),
        };
        AffineLine { direction: self.direction, offset }
    }
}

/// The unique line through two distinct points.
pub fn line_through(
    field: &FieldSpec,
    p1: PlanePoint,
    p2: PlanePoint,
) -> Result<AffineLine, GeometryError> {
    if p1 == p2 {
        return Err(GeometryError::CoincidentPoints);
    }
    if p1.x == p2.x {
        return Ok(AffineLine::new(Direction::Vertical, p1.x));
    }
    let dx = field.sub(p2.x, p1.x);
    let dy = field.sub(p2.y, p1.y);
    let slope = field.mul(dy, field.inv(dx).expect("dx is nonzero"));
    Ok(AffineLine::through(field, p1, Direction::Slope(slope)))
}

pub fn intersect(field: &FieldSpec, l1: &AffineLine, l2: &AffineLine) -> Intersection {
    if l1 == l2 {
        return Intersection::Same;
    }
    match (l1.direction, l2.direction) {
        (d1, d2) if d1 == d2 => Intersection::Parallel,
        (Direction::Vertical, Direction::Slope(s)) | (Direction::Slope(s), Direction::Vertical) => {
            let (x, c) = if l1.direction == Direction::Vertical {
                (l1.offset, l2.offset)
            } else {
                (l2.offset, l1.offset)
            };
            Intersection::Point(PlanePoint::new(x, field.add(field.mul(s, x), c)))
        }
        (Direction::Slope(s1), Direction::Slope(s2)) => {
            // s1 x + c1 = s2 x + c2
            let x = field
                .div(field.sub(l2.offset, l1.offset), field.sub(s1, s2))
                .expect("slopes differ");
            Intersection::Point(PlanePoint::new(x, field.add(field.mul(s1, x), l1.offset)))
        }
        (Direction::Vertical, Direction::Vertical) => unreachable!("handled as parallel"),
    }
}

/// Division-free collinearity test. Any repeated point makes the triple collinear.
#[inline]
pub fn collinear(field: &FieldSpec, p1: PlanePoint, p2: PlanePoint, p3: PlanePoint) -> bool {
    let lhs = field.mul(field.sub(p2.y, p1.y), field.sub(p3.x, p1.x));
    let rhs = field.mul(field.sub(p3.y, p1.y), field.sub(p2.x, p1.x));
    lhs == rhs
}
