//! The `d × d` discrete phase space `F_d²`: points, lines, striations and
//! circles `q² + p² = c`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhasePoint {
    pub q: Elem,
    pub p: Elem,
}

impl PhasePoint {
    pub fn new(q: Elem, p: Elem) -> Self {
        Self { q, p }
    }

    /// Row-major grid index `q·d + p`.
    pub fn grid_index(self, d: usize) -> usize {
        self.q.index() * d + self.p.index()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slope {
    /// Lines `p = m q + b`.
    Finite(Elem),
    /// Vertical lines `q = b`.
    Infinite,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(m) => write!(f, "{}", m.index()),
            Slope::Infinite => f.write_str("inf"),
        }
    }
}

// Finite slopes serialize as the element index, the vertical slope as "inf".
impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Slope::Finite(m) => s.serialize_u32(m.0),
            Slope::Infinite => s.serialize_str("inf"),
        }
    }
}

/// A line, identified by its slope and displacement `b` (the intercept
/// `p = m q + b`, or the abscissa `q = b` for vertical lines).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    pub slope: Slope,
    pub displacement: Elem,
}

impl Line {
    pub fn new(slope: Slope, displacement: Elem) -> Self {
        Self { slope, displacement }
    }

    /// Coefficients `(a, b, c)` of the equation `a q + b p = c`.
    pub fn coefficients(&self, field: &Field) -> (Elem, Elem, Elem) {
        match self.slope {
            Slope::Finite(m) => (field.neg(m), field.one(), self.displacement),
            Slope::Infinite => (field.one(), field.zero(), self.displacement),
        }
    }

    pub fn contains(&self, field: &Field, pt: PhasePoint) -> bool {
        match self.slope {
            Slope::Finite(m) => pt.p == field.add(field.mul(m, pt.q), self.displacement),
            Slope::Infinite => pt.q == self.displacement,
        }
    }

    /// The `d` points of the line, ordered by the free coordinate
    /// (`q` for finite slopes, `p` for vertical lines).
    pub fn points(&self, field: &Field) -> Vec<PhasePoint> {
        match self.slope {
            Slope::Finite(m) => field
                .elements()
                .map(|q| PhasePoint::new(q, field.add(field.mul(m, q), self.displacement)))
                .collect(),
            Slope::Infinite => field
                .elements()
                .map(|p| PhasePoint::new(self.displacement, p))
                .collect(),
        }
    }

    /// The unique line through two distinct points.
    pub fn through(field: &Field, a: PhasePoint, b: PhasePoint) -> Option<Line> {
        if a == b {
            return None;
        }
        if a.q == b.q {
            return Some(Line::new(Slope::Infinite, a.q));
        }
        let m = field
            .div(field.sub(b.p, a.p), field.sub(b.q, a.q))
            .expect("distinct abscissae");
        let intercept = field.sub(a.p, field.mul(m, a.q));
        Some(Line::new(Slope::Finite(m), intercept))
    }

    pub fn is_parallel(&self, other: &Line) -> bool {
        self.slope == other.slope
    }
}

/// The `d` parallel lines of one slope, indexed by displacement.
#[derive(Debug, Clone)]
pub struct Striation {
    pub slope: Slope,
    pub lines: Vec<Line>,
}

impl Striation {
    pub fn new(field: &Field, slope: Slope) -> Self {
        let lines = field.elements().map(|b| Line::new(slope, b)).collect();
        Self { slope, lines }
    }
}

/// All `d + 1` slopes: finite slopes in element order, then the vertical slope.
pub fn slopes(field: &Field) -> Vec<Slope> {
    field
        .elements()
        .map(Slope::Finite)
        .chain(std::iter::once(Slope::Infinite))
        .collect()
}

pub fn enumerate_striations(field: &Field) -> Vec<Striation> {
    slopes(field)
        .into_iter()
        .map(|s| Striation::new(field, s))
        .collect()
}

pub fn line_points(field: &Field, line: &Line) -> Vec<PhasePoint> {
    line.points(field)
}

/// `q² + p²`, the label of the circle through `pt`.
pub fn circle_of(field: &Field, pt: PhasePoint) -> Elem {
    field.add(field.square(pt.q), field.square(pt.p))
}

/// The solution set of `q² + p² = c`, in grid order.
pub fn circle_points(field: &Field, c: Elem) -> Vec<PhasePoint> {
    all_points(field)
        .filter(|&pt| circle_of(field, pt) == c)
        .collect()
}

/// Every point of the plane in grid order.
pub fn all_points(field: &Field) -> impl Iterator<Item = PhasePoint> + '_ {
    field
        .elements()
        .flat_map(move |q| field.elements().map(move |p| PhasePoint::new(q, p)))
}

/// A unit-determinant linear map of the plane, `(q, p) ↦ (a q + b p, c q + e p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticMap {
    a: Elem,
    b: Elem,
    c: Elem,
    e: Elem,
}

impl SymplecticMap {
    /// Row-major entries `[[a, b], [c, e]]`; fails unless `a e − b c = 1`.
    pub fn new(field: &Field, a: Elem, b: Elem, c: Elem, e: Elem) -> Result<Self> {
        let det = field.sub(field.mul(a, e), field.mul(b, c));
        if det != field.one() {
            return Err(Error::DeterminantNotOne(det.0));
        }
        Ok(Self { a, b, c, e })
    }

    pub fn from_ints(field: &Field, m: [[i64; 2]; 2]) -> Result<Self> {
        Self::new(
            field,
            field.from_int(m[0][0]),
            field.from_int(m[0][1]),
            field.from_int(m[1][0]),
            field.from_int(m[1][1]),
        )
    }

    pub fn identity(field: &Field) -> Self {
        Self { a: field.one(), b: field.zero(), c: field.zero(), e: field.one() }
    }

    pub fn entries(&self) -> [[Elem; 2]; 2] {
        [[self.a, self.b], [self.c, self.e]]
    }

    pub fn apply(&self, field: &Field, pt: PhasePoint) -> PhasePoint {
        PhasePoint::new(
            field.add(field.mul(self.a, pt.q), field.mul(self.b, pt.p)),
            field.add(field.mul(self.c, pt.q), field.mul(self.e, pt.p)),
        )
    }

    /// Image of a line, found from the images of two of its points.
    pub fn apply_line(&self, field: &Field, line: &Line) -> Line {
        let pts = line.points(field);
        Line::through(field, self.apply(field, pts[0]), self.apply(field, pts[1]))
            .expect("a bijection keeps distinct points distinct")
    }
}

pub fn apply_linear(field: &Field, map: &SymplecticMap, pt: PhasePoint) -> PhasePoint {
    map.apply(field, pt)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    fn pt(f: &Field, q: i64, p: i64) -> PhasePoint {
        PhasePoint::new(f.from_int(q), f.from_int(p))
    }

    #[test]
    fn counts_for_d3() {
        let f = Field::new(3, 1).unwrap();
        let s = enumerate_striations(&f);
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|st| st.lines.len() == 3));
        assert_eq!(s.last().unwrap().slope, Slope::Infinite);
    }

    #[test]
    fn vertical_line_through_origin() {
        let f = Field::new(3, 1).unwrap();
        let l = Line::new(Slope::Infinite, f.zero());
        assert_eq!(l.points(&f), vec![pt(&f, 0, 0), pt(&f, 0, 1), pt(&f, 0, 2)]);
    }

    #[test]
    fn line_points_for_d3() {
        let f = Field::new(3, 1).unwrap();
        let l = Line::new(Slope::Finite(f.one()), f.one());
        assert_eq!(l.points(&f), vec![pt(&f, 0, 1), pt(&f, 1, 2), pt(&f, 2, 0)]);
        let axis = Line::new(Slope::Finite(f.zero()), f.zero());
        assert_eq!(axis.points(&f), vec![pt(&f, 0, 0), pt(&f, 1, 0), pt(&f, 2, 0)]);
    }

    #[test]
    fn line_equation_coefficients_hold_on_every_point() {
        let f = Field::new(3, 2).unwrap();
        for st in enumerate_striations(&f) {
            for l in &st.lines {
                let (a, b, c) = l.coefficients(&f);
                let pts = l.points(&f);
                assert_eq!(pts.iter().collect::<HashSet<_>>().len(), 9);
                for x in pts {
                    assert!(l.contains(&f, x));
                    assert_eq!(f.add(f.mul(a, x.q), f.mul(b, x.p)), c);
                }
            }
        }
    }

    #[test]
    fn circle_label_for_d7() {
        let f = Field::new(7, 1).unwrap();
        assert_eq!(circle_of(&f, pt(&f, 0, 0)), f.zero());
        assert_eq!(circle_of(&f, pt(&f, 1, 2)), f.from_int(5));
    }

    #[test]
    fn circle_sizes_for_d3() {
        // enumerated: q² + p² over Z_3
        let f = Field::new(3, 1).unwrap();
        assert_eq!(circle_points(&f, f.zero()), vec![pt(&f, 0, 0)]);
        assert_eq!(circle_points(&f, f.from_int(1)).len(), 4);
        assert_eq!(circle_points(&f, f.from_int(2)).len(), 4);
    }

    #[test]
    fn determinant_is_checked() {
        let f = Field::new(7, 1).unwrap();
        assert!(matches!(
            SymplecticMap::from_ints(&f, [[1, 1], [1, 1]]),
            Err(Error::DeterminantNotOne(0))
        ));
        assert!(matches!(
            SymplecticMap::from_ints(&f, [[2, 0], [0, 1]]),
            Err(Error::DeterminantNotOne(2))
        ));
    }

    #[test]
    fn identity_fixes_points() {
        let f = Field::new(7, 1).unwrap();
        let id = SymplecticMap::identity(&f);
        for x in all_points(&f) {
            assert_eq!(apply_linear(&f, &id, x), x);
        }
    }

    #[test]
    fn shear_maps_horizontal_striation_to_a_striation() {
        let f = Field::new(7, 1).unwrap();
        let shear = SymplecticMap::from_ints(&f, [[1, 1], [0, 1]]).unwrap();
        let st = Striation::new(&f, Slope::Finite(f.zero()));
        let images: Vec<Line> = st.lines.iter().map(|l| shear.apply_line(&f, l)).collect();
        let slope = images[0].slope;
        assert!(images.iter().all(|l| l.slope == slope));
        let displacements: HashSet<_> = images.iter().map(|l| l.displacement).collect();
        assert_eq!(displacements.len(), 7);
        // every image point really lies on the image line
        for (l, img) in st.lines.iter().zip(&images) {
            for x in l.points(&f) {
                assert!(img.contains(&f, shear.apply(&f, x)));
            }
        }
    }

    #[test]
    fn rotation_preserves_circles_d3() {
        let f = Field::new(3, 1).unwrap();
        let rot = SymplecticMap::from_ints(&f, [[0, -1], [1, 0]]).unwrap();
        for x in all_points(&f) {
            assert_eq!(circle_of(&f, rot.apply(&f, x)), circle_of(&f, x));
        }
    }

    #[test]
    fn slope_serialization() {
        let f = Field::new(7, 1).unwrap();
        assert_eq!(serde_json::to_string(&Slope::Finite(f.from_int(3))).unwrap(), "3");
        assert_eq!(serde_json::to_string(&Slope::Infinite).unwrap(), "\"inf\"");
    }
}
