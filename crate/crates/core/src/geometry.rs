//! Plane vectors, 2x2 matrices and exact predicates.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::ExactField;

/// A displacement in a flat chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector<T> {
    pub x: T,
    pub y: T,
}

impl<T: ExactField> Vector<T> {
    pub fn new(x: T, y: T) -> Self {
        Vector { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Vector::new(T::from_int(x), T::from_int(y))
    }

    pub fn zero() -> Self {
        Vector::new(T::zero(), T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn cross(&self, other: &Self) -> T {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    pub fn norm_squared(&self) -> T {
        self.dot(self)
    }

    pub fn scale(&self, s: &T) -> Self {
        Vector::new(self.x.clone() * s.clone(), self.y.clone() * s.clone())
    }

    /// `+1` if `other == self`, `-1` if `other == -self`, `None` otherwise.
    pub fn sign_to(&self, other: &Self) -> Option<i8> {
        if self == other {
            Some(1)
        } else if &-self.clone() == other {
            Some(-1)
        } else {
            None
        }
    }

    pub fn signed(&self, sign: i8) -> Self {
        if sign < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Whether the vector points into the closed upper half plane minus the
    /// negative x-axis, i.e. it is the representative of `{v, -v}` used for
    /// sign gauge fixing.
    pub fn is_gauge_positive(&self) -> bool {
        self.y.is_positive() || (self.y.is_zero() && self.x.is_positive())
    }
}

impl<T: ExactField> Add for Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: Self) -> Self {
        Vector::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: ExactField> Sub for Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: Self) -> Self {
        Vector::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: ExactField> Neg for Vector<T> {
    type Output = Vector<T>;
    fn neg(self) -> Self {
        Vector::new(-self.x, -self.y)
    }
}

impl<T: ExactField> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A 2x2 matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: ExactField> Matrix2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Matrix2::new(T::from_int(a), T::from_int(b), T::from_int(c), T::from_int(d))
    }

    pub fn identity() -> Self {
        Matrix2::from_ints(1, 0, 0, 1)
    }

    pub fn diag(x: T, y: T) -> Self {
        Matrix2::new(x, T::zero(), T::zero(), y)
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn trace(&self) -> T {
        self.a.clone() + self.d.clone()
    }

    pub fn apply(&self, v: &Vector<T>) -> Vector<T> {
        Vector::new(
            self.a.clone() * v.x.clone() + self.b.clone() * v.y.clone(),
            self.c.clone() * v.x.clone() + self.d.clone() * v.y.clone(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        Matrix2::new(
            self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
        )
    }

    pub fn neg(&self) -> Self {
        Matrix2::new(-self.a.clone(), -self.b.clone(), -self.c.clone(), -self.d.clone())
    }

    pub fn is_plus_minus_identity(&self) -> bool {
        *self == Self::identity() || *self == Self::identity().neg()
    }
}

impl<T: ExactField> Mul<&Vector<T>> for &Matrix2<T> {
    type Output = Vector<T>;
    fn mul(self, rhs: &Vector<T>) -> Vector<T> {
        self.apply(rhs)
    }
}

/// Whether the direction `d` lies in the half-open sector that starts at
/// direction `from` and turns counterclockwise to direction `to`. The sector
/// must have opening angle in `(0, pi]`; `to` itself is excluded.
pub fn in_half_open_sector<T: ExactField>(from: &Vector<T>, to: &Vector<T>, d: &Vector<T>) -> bool {
    let same_as_from = from.cross(d).is_zero() && from.dot(d).is_positive();
    if same_as_from {
        return true;
    }
    let opening = from.cross(to);
    if opening.is_positive() {
        from.cross(d).is_positive() && d.cross(to).is_positive()
    } else {
        // straight sector (opening angle exactly pi)
        from.cross(d).is_positive()
    }
}

/// Number of horizontal directions (angle 0 or pi) inside a half-open
/// sector with opening angle in `(0, pi]`.
pub fn horizontal_crossings<T: ExactField>(from: &Vector<T>, to: &Vector<T>) -> usize {
    let east = Vector::from_ints(1, 0);
    let west = Vector::from_ints(-1, 0);
    usize::from(in_half_open_sector(from, to, &east)) + usize::from(in_half_open_sector(from, to, &west))
}

/// Twice the signed area of a closed polygon given by its edge vectors.
pub fn shoelace_doubled<T: ExactField>(edges: &[Vector<T>]) -> T {
    let mut p = Vector::<T>::zero();
    let mut acc = T::zero();
    for e in edges {
        let q = p.clone() + e.clone();
        acc = acc + p.cross(&q);
        p = q;
    }
    acc
}

/// Index of the first bad corner of a polygon given by its edge vectors, or
/// `None` when the polygon closes, every corner has angle in `(0, pi]`, it
/// turns around exactly once and its area is positive. Corner `i` sits
/// between edge `i - 1` and edge `i`.
pub fn convex_polygon_defect<T: ExactField>(edges: &[Vector<T>]) -> Option<usize> {
    let k = edges.len();
    if k < 3 {
        return Some(0);
    }
    let sum = edges.iter().fold(Vector::zero(), |acc, e| acc + e.clone());
    if !sum.is_zero() {
        return Some(0);
    }
    let east = Vector::from_ints(1, 0);
    let mut windings = 0;
    for i in 0..k {
        let incoming = &edges[(i + k - 1) % k];
        let out = &edges[i];
        if out.is_zero() {
            return Some(i);
        }
        let turn = incoming.cross(out);
        if turn.is_negative() || (turn.is_zero() && incoming.dot(out).is_negative()) {
            return Some(i);
        }
        if !turn.is_zero() && in_half_open_sector(incoming, out, &east) {
            windings += 1;
        }
    }
    if windings != 1 || !shoelace_doubled(edges).is_positive() {
        return Some(0);
    }
    None
}

/// Sign of the incircle determinant: positive iff `d` lies strictly inside
/// the circle through the counterclockwise triangle `a, b, c`.
pub fn incircle<T: ExactField>(a: &Vector<T>, b: &Vector<T>, c: &Vector<T>, d: &Vector<T>) -> Ordering {
    let ad = a.clone() - d.clone();
    let bd = b.clone() - d.clone();
    let cd = c.clone() - d.clone();
    let (a2, b2, c2) = (ad.norm_squared(), bd.norm_squared(), cd.norm_squared());
    let det = ad.x.clone() * (bd.y.clone() * c2.clone() - b2.clone() * cd.y.clone())
        - ad.y.clone() * (bd.x.clone() * c2 - b2 * cd.x.clone())
        + a2 * (bd.x.clone() * cd.y.clone() - bd.y.clone() * cd.x.clone());
    det.cmp(&T::zero())
}
