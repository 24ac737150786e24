//! Half-translation surfaces as polygonal complexes with exact holonomy.
//!
//! A surface is a set of half-edges (flags). `next` walks the
//! counterclockwise boundary of a face, `twin` pairs the two sides of an
//! edge, and every half-edge carries the displacement vector of its edge in
//! the chart of its own face. Twins carry equal or opposite vectors, so the
//! charts are glued by maps `z -> +-z + c` and directions are only defined
//! modulo `pi`.
//!
//! Vertices are the orbits of `around(e) = next(twin(e))`; every flag sits in
//! the vertex it starts from.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::geometry::{horizontal_crossings, shoelace_doubled, Matrix2, Vector};
use crate::scalar::ExactField;

pub type FlagId = usize;

/// Marking of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexStatus {
    /// Removed point; simple poles may only sit here.
    Puncture,
    /// Honest point of the surface (regular marked point or zero).
    Filled,
    /// Cone point of an orbifold, locally a disk modulo rotation of order n.
    Orbifold(u32),
}

impl VertexStatus {
    pub fn is_puncture(self) -> bool {
        matches!(self, VertexStatus::Puncture)
    }

    /// Angle multiple of the point that locally covers this vertex by a
    /// surface, or `None` for punctures. Two non-puncture vertices may be
    /// identified by a covering only if these agree.
    pub fn resolved_angle(self, angle_multiple: u32) -> Option<u64> {
        match self {
            VertexStatus::Puncture => None,
            VertexStatus::Filled => Some(u64::from(angle_multiple)),
            VertexStatus::Orbifold(n) => Some(u64::from(angle_multiple) * u64::from(n)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HalfTranslationSurface<T> {
    twin: Vec<FlagId>,
    next: Vec<FlagId>,
    vectors: Vec<Vector<T>>,
    prev: Vec<FlagId>,
    face_of: Vec<usize>,
    faces: Vec<Vec<FlagId>>,
    vertex_of: Vec<usize>,
    vertices: Vec<Vec<FlagId>>,
    status: Vec<VertexStatus>,
    name: Option<String>,
}

impl<T: PartialEq> PartialEq for HalfTranslationSurface<T> {
    fn eq(&self, other: &Self) -> bool {
        self.twin == other.twin
            && self.next == other.next
            && self.vectors == other.vectors
            && self.status == other.status
    }
}

impl<T: Eq> Eq for HalfTranslationSurface<T> {}

/// Per-vertex row of a [`ValidationReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexInfo {
    pub representative: FlagId,
    pub flags: Vec<FlagId>,
    pub angle_multiple: u32,
    pub status: VertexStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport<T> {
    pub vertices: Vec<VertexInfo>,
    pub genus: i64,
    pub punctures: usize,
    pub orbifold_points: usize,
    pub area: T,
    pub orbifold_euler_characteristic: T,
    /// Warning only: `3g - 3 + p > 0` fails.
    pub type_condition_violated: bool,
}

fn orbits(n: usize, step: impl Fn(usize) -> usize) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut of = vec![usize::MAX; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = Vec::new();
        let mut e = start;
        loop {
            of[e] = id;
            orbit.push(e);
            e = step(e);
            if e == start {
                break;
            }
        }
        orbits.push(orbit);
    }
    (orbits, of)
}

impl<T: ExactField> HalfTranslationSurface<T> {
    /// Builds a surface; `statuses` attaches a status to the vertex of each
    /// listed flag. Unlisted vertices default to a puncture when their cone
    /// angle is `pi` and to a filled point otherwise.
    pub fn new(
        twin: Vec<FlagId>,
        next: Vec<FlagId>,
        vectors: Vec<Vector<T>>,
        statuses: &[(FlagId, VertexStatus)],
    ) -> Result<Self> {
        let n = twin.len();
        let mut per_flag = vec![None; n];
        for &(flag, status) in statuses {
            if flag >= n {
                return Err(Error::UnknownFlag { flag });
            }
            per_flag[flag] = Some(status);
        }
        Self::from_flag_statuses(twin, next, vectors, per_flag)
    }

    /// Like [`new`](Self::new) with one optional status per flag; all given
    /// statuses on one vertex must agree.
    pub fn from_flag_statuses(
        twin: Vec<FlagId>,
        next: Vec<FlagId>,
        vectors: Vec<Vector<T>>,
        flag_status: Vec<Option<VertexStatus>>,
    ) -> Result<Self> {
        let n = twin.len();
        if n == 0 || next.len() != n || vectors.len() != n || flag_status.len() != n {
            return Err(Error::Malformed { flag: 0, reason: "array lengths differ or are empty".into() });
        }
        for e in 0..n {
            let t = twin[e];
            if t >= n {
                return Err(Error::UnknownFlag { flag: t });
            }
            if t == e || twin[t] != e {
                return Err(Error::Malformed { flag: e, reason: "twin is not a fixed-point-free involution".into() });
            }
            if next[e] >= n {
                return Err(Error::UnknownFlag { flag: next[e] });
            }
        }
        let mut prev = vec![usize::MAX; n];
        for e in 0..n {
            if prev[next[e]] != usize::MAX {
                return Err(Error::Malformed { flag: next[e], reason: "next is not a permutation".into() });
            }
            prev[next[e]] = e;
        }
        let (faces, face_of) = orbits(n, |e| next[e]);
        let (vertices, vertex_of) = orbits(n, |e| next[twin[e]]);

        let mut surface = HalfTranslationSurface {
            twin,
            next,
            vectors,
            prev,
            face_of,
            faces,
            vertex_of,
            vertices,
            status: Vec::new(),
            name: None,
        };
        let mut status = Vec::with_capacity(surface.vertices.len());
        for (v, flags) in surface.vertices.iter().enumerate() {
            let mut chosen: Option<VertexStatus> = None;
            for &e in flags {
                if let Some(s) = flag_status[e] {
                    match chosen {
                        Some(c) if c != s => {
                            return Err(Error::Malformed {
                                flag: e,
                                reason: "conflicting statuses on one vertex".into(),
                            })
                        }
                        _ => chosen = Some(s),
                    }
                }
            }
            let s = chosen.unwrap_or_else(|| {
                if surface.angle_multiple(v) == 1 {
                    VertexStatus::Puncture
                } else {
                    VertexStatus::Filled
                }
            });
            status.push(s);
        }
        surface.status = status;
        Ok(surface)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn num_flags(&self) -> usize {
        self.twin.len()
    }

    pub fn num_edges(&self) -> usize {
        self.twin.len() / 2
    }

    pub fn twin(&self, e: FlagId) -> FlagId {
        self.twin[e]
    }

    pub fn next(&self, e: FlagId) -> FlagId {
        self.next[e]
    }

    pub fn prev(&self, e: FlagId) -> FlagId {
        self.prev[e]
    }

    pub fn around(&self, e: FlagId) -> FlagId {
        self.next[self.twin[e]]
    }

    pub fn vector(&self, e: FlagId) -> &Vector<T> {
        &self.vectors[e]
    }

    pub fn twins(&self) -> &[FlagId] {
        &self.twin
    }

    pub fn nexts(&self) -> &[FlagId] {
        &self.next
    }

    pub fn vectors(&self) -> &[Vector<T>] {
        &self.vectors
    }

    pub fn faces(&self) -> &[Vec<FlagId>] {
        &self.faces
    }

    pub fn face_of(&self, e: FlagId) -> usize {
        self.face_of[e]
    }

    /// Flags of the face of `e` in boundary order, starting at `e`.
    pub fn face_from(&self, e: FlagId) -> Vec<FlagId> {
        let mut out = vec![e];
        let mut f = self.next[e];
        while f != e {
            out.push(f);
            f = self.next[f];
        }
        out
    }

    pub fn vertices(&self) -> &[Vec<FlagId>] {
        &self.vertices
    }

    pub fn vertex_of(&self, e: FlagId) -> usize {
        self.vertex_of[e]
    }

    pub fn status(&self, vertex: usize) -> VertexStatus {
        self.status[vertex]
    }

    /// Status of the vertex the flag starts from.
    pub fn status_at(&self, e: FlagId) -> VertexStatus {
        self.status[self.vertex_of[e]]
    }

    pub fn statuses(&self) -> &[VertexStatus] {
        &self.status
    }

    /// Status of the origin vertex for every flag.
    pub fn flag_statuses(&self) -> Vec<Option<VertexStatus>> {
        (0..self.num_flags()).map(|e| Some(self.status_at(e))).collect()
    }

    /// `+1` for a translation gluing, `-1` for a half-turn gluing, `0` when
    /// the twin vectors do not agree up to sign.
    pub fn gluing_sign(&self, e: FlagId) -> i8 {
        match self.vectors[e].sign_to(&self.vectors[self.twin[e]]) {
            Some(-1) => 1,
            Some(_) => -1,
            None => 0,
        }
    }

    pub fn is_translation_surface_gauge(&self) -> bool {
        (0..self.num_flags()).all(|e| self.gluing_sign(e) == 1)
    }

    /// Horizontal directions in the half-open corner sector at the origin of
    /// `e`, between `e` and the reverse of its predecessor.
    pub fn corner_crossings(&self, e: FlagId) -> usize {
        let out = &self.vectors[e];
        let back = -self.vectors[self.prev[e]].clone();
        horizontal_crossings(out, &back)
    }

    /// Cone angle of a vertex in units of `pi`.
    pub fn angle_multiple(&self, vertex: usize) -> u32 {
        self.vertices[vertex].iter().map(|&e| self.corner_crossings(e)).sum::<usize>() as u32
    }

    pub fn angle_multiple_at(&self, e: FlagId) -> u32 {
        self.angle_multiple(self.vertex_of[e])
    }

    pub fn cone_angle_multiples(&self) -> Vec<u32> {
        (0..self.vertices.len()).map(|v| self.angle_multiple(v)).collect()
    }

    /// `V - E + F` of the underlying closed surface.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.num_edges() as i64 + self.faces.len() as i64
    }

    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    pub fn puncture_count(&self) -> usize {
        self.status.iter().filter(|s| s.is_puncture()).count()
    }

    pub fn orbifold_point_count(&self) -> usize {
        self.status.iter().filter(|s| matches!(s, VertexStatus::Orbifold(_))).count()
    }

    /// `3g - 3 + p > 0` with `p` counting punctures and orbifold points.
    pub fn satisfies_type_condition(&self) -> bool {
        3 * self.genus() - 3 + (self.puncture_count() + self.orbifold_point_count()) as i64 > 0
    }

    pub fn require_type_condition(&self) -> Result<()> {
        if self.satisfies_type_condition() {
            Ok(())
        } else {
            Err(Error::TypeConditionViolated {
                genus: self.genus(),
                punctures: self.puncture_count() + self.orbifold_point_count(),
            })
        }
    }

    pub fn face_vectors(&self, e: FlagId) -> Vec<Vector<T>> {
        self.face_from(e).into_iter().map(|f| self.vectors[f].clone()).collect()
    }

    /// Corner positions of the face of `e` in its chart, with the origin of
    /// `e` at zero. Entry `i` is the origin of the `i`-th flag after `e`.
    pub fn face_positions(&self, e: FlagId) -> Vec<Vector<T>> {
        let mut p = Vector::zero();
        let mut out = Vec::new();
        for f in self.face_from(e) {
            out.push(p.clone());
            p = p + self.vectors[f].clone();
        }
        out
    }

    pub fn face_area(&self, face: usize) -> T {
        shoelace_doubled(&self.face_vectors(self.faces[face][0])) / T::from_int(2)
    }

    pub fn area(&self) -> T {
        (0..self.faces.len()).fold(T::zero(), |acc, f| acc + self.face_area(f))
    }

    /// `(V - E + F) - #punctures - sum over orbifold points of (1 - 1/n)`.
    pub fn orbifold_euler_characteristic(&self) -> T {
        let mut chi = T::from_int(self.euler_characteristic());
        for s in &self.status {
            match *s {
                VertexStatus::Puncture => chi = chi - T::one(),
                VertexStatus::Filled => {}
                VertexStatus::Orbifold(n) => chi = chi - (T::one() - T::frac(1, i64::from(n))),
            }
        }
        chi
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_flags();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(e) = queue.pop_front() {
            for f in [self.next[e], self.twin[e]] {
                if !seen[f] {
                    seen[f] = true;
                    count += 1;
                    queue.push_back(f);
                }
            }
        }
        count == n
    }

    /// Checks every invariant of a valid surface.
    pub fn validate(&self) -> Result<ValidationReport<T>> {
        let n = self.num_flags();
        for e in 0..n {
            if self.vectors[e].is_zero() {
                return Err(Error::ZeroVector { flag: e });
            }
        }
        for face in &self.faces {
            let sum = face.iter().fold(Vector::zero(), |acc, &f| acc + self.vectors[f].clone());
            if !sum.is_zero() {
                return Err(Error::NonClosedFace { face: face[0] });
            }
        }
        for e in 0..n {
            if self.gluing_sign(e) == 0 {
                return Err(Error::BadTwinVector { flag: e });
            }
        }
        for face in &self.faces {
            let rep = face[0];
            for &f in face {
                let incoming = &self.vectors[self.prev[f]];
                let out = &self.vectors[f];
                let turn = incoming.cross(out);
                if turn.is_negative() || (turn.is_zero() && incoming.dot(out).is_negative()) {
                    return Err(Error::NonConvexCorner { flag: f });
                }
            }
            // a convex polygon turns exactly once around
            let east = Vector::from_ints(1, 0);
            let windings = face
                .iter()
                .filter(|&&f| {
                    let from = &self.vectors[self.prev[f]];
                    let to = &self.vectors[f];
                    if from.cross(to).is_zero() {
                        false
                    } else {
                        crate::geometry::in_half_open_sector(from, to, &east)
                    }
                })
                .count();
            let area2 = shoelace_doubled(&self.face_vectors(rep));
            if windings != 1 || !area2.is_positive() {
                return Err(Error::NonConvexCorner { flag: rep });
            }
        }
        let mut infos = Vec::with_capacity(self.vertices.len());
        for (v, flags) in self.vertices.iter().enumerate() {
            let a = self.angle_multiple(v);
            let s = self.status[v];
            if a == 0 {
                return Err(Error::NonConvexCorner { flag: flags[0] });
            }
            if a == 1 && !s.is_puncture() {
                // an orbifold point of angle pi resolves to angle n*pi
                if !matches!(s, VertexStatus::Orbifold(_)) {
                    return Err(Error::PoleNotPunctured { vertex: flags[0] });
                }
            }
            match s {
                VertexStatus::Filled if a < 2 => {
                    return Err(Error::PoleNotPunctured { vertex: flags[0] });
                }
                VertexStatus::Orbifold(k) if k < 2 => {
                    return Err(Error::BadStatus { vertex: flags[0], reason: "orbifold order below 2".into() })
                }
                _ => {}
            }
            infos.push(VertexInfo { representative: flags[0], flags: flags.clone(), angle_multiple: a, status: s });
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let lhs: i64 = infos.iter().map(|i| 2 - i64::from(i.angle_multiple)).sum();
        let rhs = 2 * self.euler_characteristic();
        if lhs != rhs {
            return Err(Error::GaussBonnet { lhs, rhs });
        }
        Ok(ValidationReport {
            vertices: infos,
            genus: self.genus(),
            punctures: self.puncture_count(),
            orbifold_points: self.orbifold_point_count(),
            area: self.area(),
            orbifold_euler_characteristic: self.orbifold_euler_characteristic(),
            type_condition_violated: !self.satisfies_type_condition(),
        })
    }

    /// Applies `m` to every edge vector. Combinatorics and vertex data are
    /// unchanged; the area scales by `det m`.
    pub fn matrix_act(&self, m: &Matrix2<T>) -> Result<Self> {
        if !m.det().is_positive() {
            return Err(Error::NonPositiveDeterminant);
        }
        let mut out = self.clone();
        out.vectors = self.vectors.iter().map(|v| m.apply(v)).collect();
        Ok(out)
    }

    /// Same combinatorics and statuses, new vectors. Used for pushforwards
    /// and relabelled copies; the caller validates.
    pub fn with_vectors(&self, vectors: Vec<Vector<T>>) -> Result<Self> {
        if vectors.len() != self.num_flags() {
            return Err(Error::StructureMismatch);
        }
        Self::from_flag_statuses(self.twin.clone(), self.next.clone(), vectors, self.flag_statuses())
    }

    pub fn same_combinatorics(&self, other: &Self) -> bool {
        self.twin == other.twin && self.next == other.next
    }

    /// Relabels flags: flag `e` of `self` becomes flag `perm[e]`.
    pub fn relabel(&self, perm: &[FlagId]) -> Result<Self> {
        let n = self.num_flags();
        let mut twin = vec![0; n];
        let mut next = vec![0; n];
        let mut vectors = vec![Vector::zero(); n];
        let mut status = vec![None; n];
        for e in 0..n {
            let p = perm[e];
            twin[p] = perm[self.twin[e]];
            next[p] = perm[self.next[e]];
            vectors[p] = self.vectors[e].clone();
            status[p] = Some(self.status_at(e));
        }
        let mut s = Self::from_flag_statuses(twin, next, vectors, status)?;
        s.name = self.name.clone();
        Ok(s)
    }
}
