//! Reference surfaces.
//!
//! Square-tiled surfaces are built from a pair of permutations on squares.
//! Every unit square is cut along its diagonal into two triangles, so each
//! square contributes six flags `6 * square + k`:
//!
//! | k | edge            | vector   |
//! |---|-----------------|----------|
//! | 0 | bottom          | (1, 0)   |
//! | 1 | right           | (0, 1)   |
//! | 2 | diagonal, lower | (-1, -1) |
//! | 3 | top             | (-1, 0)  |
//! | 4 | left            | (0, -1)  |
//! | 5 | diagonal, upper | (1, 1)   |

use crate::geometry::Vector;
use crate::refine::{refine, RefineStep};
use crate::scalar::ExactField;
use crate::surface::{HalfTranslationSurface, VertexStatus};

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Square-tiled surface with `right[s]` the square to the right of `s` and
/// `up[s]` the square above it. All vertices are punctures.
pub fn origami<T: ExactField>(right: &[usize], up: &[usize]) -> HalfTranslationSurface<T> {
    let n = right.len();
    assert_eq!(up.len(), n);
    let right_inv = invert(right);
    let up_inv = invert(up);
    let mut twin = vec![0; 6 * n];
    let mut next = vec![0; 6 * n];
    let mut vectors = Vec::with_capacity(6 * n);
    let base = [(1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)];
    for s in 0..n {
        let f = |k: usize| 6 * s + k;
        twin[f(0)] = 6 * up_inv[s] + 3;
        twin[f(3)] = 6 * up[s];
        twin[f(1)] = 6 * right[s] + 4;
        twin[f(4)] = 6 * right_inv[s] + 1;
        twin[f(2)] = f(5);
        twin[f(5)] = f(2);
        next[f(0)] = f(1);
        next[f(1)] = f(2);
        next[f(2)] = f(0);
        next[f(3)] = f(4);
        next[f(4)] = f(5);
        next[f(5)] = f(3);
        for &(x, y) in &base {
            vectors.push(Vector::from_ints(x, y));
        }
    }
    let statuses: Vec<_> = (0..6 * n).map(|e| (e, VertexStatus::Puncture)).collect();
    HalfTranslationSurface::new(twin, next, vectors, &statuses).expect("origami data is well formed")
}

/// Unit-square torus with one puncture.
pub fn t1p<T: ExactField>() -> HalfTranslationSurface<T> {
    origami(&[0], &[0]).with_name("T1p")
}

/// Two unit squares side by side, punctured at both lattice points.
pub fn t2x1p<T: ExactField>() -> HalfTranslationSurface<T> {
    origami(&[1, 0], &[0, 1]).with_name("T2x1p")
}

/// 2x2 square torus with four punctures.
pub fn t2x2p<T: ExactField>() -> HalfTranslationSurface<T> {
    origami(&[1, 0, 3, 2], &[2, 3, 0, 1]).with_name("T2x2p")
}

/// Three-square L-shaped origami: genus 2, one puncture of angle `6 pi`.
pub fn l3p<T: ExactField>() -> HalfTranslationSurface<T> {
    origami(&[1, 0, 2], &[2, 1, 0]).with_name("L3p")
}

/// Pillowcase of area 1/2: the triangle `(0,0), (1,0), (1,1)` with its
/// three sides folded at their midpoints. The triangle corners form one
/// punctured vertex of angle `pi`; the midpoints are orbifold points of
/// order 2.
pub fn pillowcase<T: ExactField>() -> HalfTranslationSurface<T> {
    let h = T::half();
    let z = T::zero();
    let v = |x: T, y: T| Vector::new(x, y);
    let vectors = vec![
        v(h.clone(), z.clone()),
        v(h.clone(), z.clone()),
        v(z.clone(), h.clone()),
        v(z.clone(), h.clone()),
        v(-h.clone(), -h.clone()),
        v(-h.clone(), -h),
    ];
    let twin = vec![1, 0, 3, 2, 5, 4];
    let next = vec![1, 2, 3, 4, 5, 0];
    let statuses = [
        (0, VertexStatus::Puncture),
        (1, VertexStatus::Orbifold(2)),
        (3, VertexStatus::Orbifold(2)),
        (5, VertexStatus::Orbifold(2)),
    ];
    HalfTranslationSurface::new(twin, next, vectors, &statuses)
        .expect("pillowcase data is well formed")
        .with_name("Pstar")
}

/// `t1p` with filled marked points at the three half-period points.
pub fn t1p_half_periods<T: ExactField>() -> HalfTranslationSurface<T> {
    let script: Vec<_> = (0..3).map(|edge| RefineStep::SplitEdge { edge, t: T::half() }).collect();
    let (s, _) = refine(&t1p(), &script).expect("midpoint splits are valid");
    s.with_name("T1p-half")
}
