//! Affine automorphisms and their descent through coverings.
//!
//! An automorphism is a flag bijection of one cell complex together with a
//! derivative `A`, so that `vector(F(e)) = +-A vector(e)` face by face. A
//! map of this kind permutes finitely many edge vectors up to sign, so its
//! derivative always has finite order up to sign; affine maps of infinite
//! order never preserve a finite cell structure and cannot be represented.

use std::collections::VecDeque;

use crate::commensurate::{quotient_by_partition, FlagPartition};
use crate::covering::{is_symmetric, CoveringMap};
use crate::error::{Error, Result};
use crate::geometry::Matrix2;
use crate::scalar::ExactField;
use crate::surface::{FlagId, HalfTranslationSurface};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineAutomorphism<T> {
    surface: HalfTranslationSurface<T>,
    map: Vec<FlagId>,
    derivative: Matrix2<T>,
}

/// Result of [`order_of`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

impl<T: ExactField> AffineAutomorphism<T> {
    /// Unchecked; see [`validate_affine`].
    pub fn new(surface: HalfTranslationSurface<T>, map: Vec<FlagId>, derivative: Matrix2<T>) -> Self {
        AffineAutomorphism { surface, map, derivative }
    }

    pub fn identity(surface: &HalfTranslationSurface<T>) -> Self {
        Self::new(surface.clone(), (0..surface.num_flags()).collect(), Matrix2::identity())
    }

    pub fn surface(&self) -> &HalfTranslationSurface<T> {
        &self.surface
    }

    pub fn map(&self) -> &[FlagId] {
        &self.map
    }

    pub fn derivative(&self) -> &Matrix2<T> {
        &self.derivative
    }

    pub fn image(&self, e: FlagId) -> FlagId {
        self.map[e]
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        let map = other.map.iter().map(|&e| self.map[e]).collect();
        Self::new(self.surface.clone(), map, self.derivative.mul(&other.derivative))
    }

    pub fn inverse(&self) -> Self {
        let mut map = vec![0; self.map.len()];
        for (e, &f) in self.map.iter().enumerate() {
            map[f] = e;
        }
        let m = &self.derivative;
        let det = m.det();
        let inv = Matrix2::new(
            m.d.clone() / det.clone(),
            -m.b.clone() / det.clone(),
            -m.c.clone() / det.clone(),
            m.a.clone() / det,
        );
        Self::new(self.surface.clone(), map, inv)
    }

    /// `self` applied `n` times.
    pub fn power(&self, n: usize) -> Self {
        let mut acc = Self::identity(&self.surface);
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn is_identity_map(&self) -> bool {
        self.map.iter().enumerate().all(|(e, &f)| e == f)
    }

    /// Pushforward of the differential: flag `F(e)` receives `vector(e)`.
    pub fn pushforward(&self) -> Result<HalfTranslationSurface<T>> {
        let mut vectors = self.surface.vectors().to_vec();
        for (e, &f) in self.map.iter().enumerate() {
            vectors[f] = self.surface.vector(e).clone();
        }
        self.surface.with_vectors(vectors)
    }
}

/// Checks that `f` is a flag bijection commuting with `next` and `twin`,
/// matches its derivative up to one sign per face and preserves vertex
/// statuses and cone angles. Returns the face signs.
pub fn validate_affine<T: ExactField>(f: &AffineAutomorphism<T>) -> Result<Vec<i8>> {
    let s = &f.surface;
    let n = s.num_flags();
    if f.map.len() != n {
        return Err(Error::NotEquivariant { flag: f.map.len().min(n) });
    }
    let mut hit = vec![false; n];
    for (e, &g) in f.map.iter().enumerate() {
        if g >= n {
            return Err(Error::UnknownFlag { flag: g });
        }
        if std::mem::replace(&mut hit[g], true) {
            return Err(Error::NotEquivariant { flag: e });
        }
    }
    for e in 0..n {
        if f.map[s.next(e)] != s.next(f.map[e]) || f.map[s.twin(e)] != s.twin(f.map[e]) {
            return Err(Error::NotEquivariant { flag: e });
        }
    }
    if !f.derivative.det().is_positive() {
        return Err(Error::DerivativeMismatch { flag: 0 });
    }
    let mut signs = Vec::with_capacity(s.faces().len());
    for face in s.faces() {
        let rep = face[0];
        let image = f.derivative.apply(s.vector(rep));
        let tau = image.sign_to(s.vector(f.map[rep])).ok_or(Error::DerivativeMismatch { flag: rep })?;
        for &e in face {
            if s.vector(f.map[e]) != &f.derivative.apply(s.vector(e)).signed(tau) {
                return Err(Error::DerivativeMismatch { flag: e });
            }
        }
        signs.push(tau);
    }
    for e in 0..n {
        let g = f.map[e];
        if s.status_at(g) != s.status_at(e) || s.angle_multiple_at(g) != s.angle_multiple_at(e) {
            return Err(Error::StatusBroken { flag: e });
        }
    }
    Ok(signs)
}

/// All automorphisms of the cell complex of `s` with derivative `a`.
pub fn automorphisms_with_derivative<T: ExactField>(
    s: &HalfTranslationSurface<T>,
    a: &Matrix2<T>,
) -> Vec<AffineAutomorphism<T>> {
    let n = s.num_flags();
    let mut out = Vec::new();
    for image in 0..n {
        let mut map = vec![usize::MAX; n];
        map[0] = image;
        let mut queue = VecDeque::from([0]);
        let mut ok = true;
        while let Some(e) = queue.pop_front() {
            for (x, y) in [(s.next(e), s.next(map[e])), (s.twin(e), s.twin(map[e]))] {
                if map[x] == usize::MAX {
                    map[x] = y;
                    queue.push_back(x);
                } else if map[x] != y {
                    ok = false;
                }
            }
            if !ok {
                break;
            }
        }
        if !ok || map.contains(&usize::MAX) {
            continue;
        }
        let f = AffineAutomorphism::new(s.clone(), map, a.clone());
        if validate_affine(&f).is_ok() {
            out.push(f);
        }
    }
    out
}

fn permutation_order(map: &[FlagId]) -> u64 {
    let mut seen = vec![false; map.len()];
    let mut order = 1u64;
    for start in 0..map.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut e = start;
        while !seen[e] {
            seen[e] = true;
            e = map[e];
            len += 1;
        }
        order = num_integer::lcm(order, len);
    }
    order
}

/// Largest order of a rational 2x2 matrix of finite order, up to sign.
const MATRIX_ORDER_BOUND: u64 = 12;

/// Order of `f`: the least `k` with `F^k` the identity and `A^k = +-I`.
pub fn order_of<T: ExactField>(f: &AffineAutomorphism<T>) -> Order {
    if f.derivative.det() != T::one() {
        return Order::Infinite;
    }
    let mut power = f.derivative.clone();
    let mut matrix_order = None;
    for m in 1..=MATRIX_ORDER_BOUND {
        if power.is_plus_minus_identity() {
            matrix_order = Some(m);
            break;
        }
        power = power.mul(&f.derivative);
    }
    let Some(m) = matrix_order else {
        return Order::Infinite;
    };
    let k = num_integer::lcm(m, permutation_order(&f.map));
    debug_assert!(f.power(k as usize).is_identity_map());
    Order::Finite(k)
}

/// Result of [`descend_automorphism`].
#[derive(Clone, Debug)]
pub struct Descent<T> {
    pub partition: FlagPartition,
    /// `S~ -> S'`.
    pub quotient_map: CoveringMap<T>,
    /// The induced automorphism of `S'`.
    pub descended: AffineAutomorphism<T>,
    /// `S -> S'`; present when the fibers of `p` lie inside the partition.
    pub factor: Option<CoveringMap<T>>,
    /// Number of powers of `f` that were checked for symmetry.
    pub probes: usize,
}

impl<T: ExactField> Descent<T> {
    pub fn quotient(&self) -> &HalfTranslationSurface<T> {
        self.quotient_map.target()
    }

    /// Whether `p' . f = f' . p'` as flag maps.
    pub fn commutes(&self, f: &AffineAutomorphism<T>) -> bool {
        (0..f.map.len())
            .all(|e| self.quotient_map.image(f.image(e)) == self.descended.image(self.quotient_map.image(e)))
    }
}

/// Pulls `part` back along `f`: `x ~ y` iff `F(x) ~ F(y)`.
fn pull_back<T: ExactField>(part: &FlagPartition, f: &AffineAutomorphism<T>) -> FlagPartition {
    let labels: Vec<usize> = f.map.iter().map(|&g| part.block_of(g)).collect();
    FlagPartition::from_labels(&labels)
}

/// Descends `f` through `p`: quotients the source of `p` by the join of the
/// `F`-translates of the fibers of `p` and induces `f'` on the quotient.
pub fn descend_automorphism<T: ExactField>(f: &AffineAutomorphism<T>, p: &CoveringMap<T>) -> Result<Descent<T>> {
    validate_affine(f)?;
    p.validate()?;
    if &f.surface != p.source() {
        return Err(Error::SourceMismatch);
    }
    let det = f.derivative.det();
    if det != T::one() {
        return Err(Error::NotAreaPreserving { det: det.to_fraction_string() });
    }
    let fibers = FlagPartition::fibers_of(p);
    let mut partition = fibers.clone();
    let mut probes = 0;
    let mut power = f.clone();
    loop {
        probes += 1;
        if is_symmetric(&power.pushforward()?, p)?.is_none() {
            return Err(Error::NotSymmetricUnderPowers { power: probes });
        }
        let next = partition.join(&pull_back(&partition, f));
        if next == partition {
            break;
        }
        partition = next;
        power = f.compose(&power);
    }
    let quotient_map = quotient_by_partition(p.source(), &partition)?;
    let map: Vec<FlagId> = partition.blocks().iter().map(|b| partition.block_of(f.image(b[0]))).collect();
    let descended = AffineAutomorphism::new(quotient_map.target().clone(), map, f.derivative.clone());
    validate_affine(&descended)?;
    let factor = if fibers.refines(&partition) {
        let phi = p.fibers().iter().map(|fib| quotient_map.image(fib[0])).collect();
        let m = CoveringMap::new(p.target().clone(), quotient_map.target().clone(), phi);
        m.validate_map()?;
        Some(m)
    } else {
        None
    };
    let out = Descent { partition, quotient_map, descended, factor, probes };
    debug_assert!(out.commutes(f));
    Ok(out)
}
