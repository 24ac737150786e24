//! Subdivision of cell structures without changing the flat surface.
//!
//! Flag ids are stable under every step: an edge split keeps the old id on
//! the first piece (the one leaving the old origin) and appends the second
//! piece, new chords and spokes get fresh ids at the end in a fixed order.

use crate::error::{Error, Result};
use crate::geometry::{convex_polygon_defect, Vector};
use crate::scalar::ExactField;
use crate::surface::{FlagId, HalfTranslationSurface, VertexStatus};

/// One subdivision step. Faces are named by any flag on them; corners are
/// counted from that flag, corner `i` being the origin of the `i`-th flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefineStep<T> {
    /// Insert a vertex at parameter `t` along `edge`, measured from its
    /// origin.
    SplitEdge { edge: FlagId, t: T },
    /// Add a straight edge between corners `from` and `to` of a face.
    InsertChord { face: FlagId, from: usize, to: usize },
    /// Cone off the face from an interior point given in the face chart
    /// with the origin of `face` at zero.
    SplitFace { face: FlagId, point: Vector<T> },
}

/// Which cell of the original surface a refined flag lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    /// Along the original half-edge with this id.
    Edge(FlagId),
    /// Inside the original face, named by its smallest flag.
    Face(FlagId),
}

/// Mutable half-edge arrays used while subdividing.
#[derive(Clone, Debug)]
pub(crate) struct Editor<T> {
    pub twin: Vec<FlagId>,
    pub next: Vec<FlagId>,
    pub vectors: Vec<Vector<T>>,
    pub status: Vec<Option<VertexStatus>>,
    pub cell: Vec<Cell>,
}

impl<T: ExactField> Editor<T> {
    pub fn new(s: &HalfTranslationSurface<T>) -> Self {
        let cell = (0..s.num_flags()).map(Cell::Edge).collect();
        Editor {
            twin: s.twins().to_vec(),
            next: s.nexts().to_vec(),
            vectors: s.vectors().to_vec(),
            status: s.flag_statuses(),
            cell,
        }
    }

    fn len(&self) -> usize {
        self.twin.len()
    }

    fn check(&self, e: FlagId) -> Result<()> {
        if e < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownFlag { flag: e })
        }
    }

    fn face_from(&self, e: FlagId) -> Vec<FlagId> {
        let mut out = vec![e];
        let mut f = self.next[e];
        while f != e {
            out.push(f);
            f = self.next[f];
        }
        out
    }

    fn face_cell(&self, face: &[FlagId], origin_faces: &[FlagId]) -> Cell {
        // any flag of the face tells which original face it belongs to
        match self.cell[face[0]] {
            Cell::Face(f) => Cell::Face(f),
            Cell::Edge(e) => Cell::Face(origin_faces[e]),
        }
    }

    fn push(&mut self, twin: FlagId, next: FlagId, v: Vector<T>, s: Option<VertexStatus>, cell: Cell) -> FlagId {
        let id = self.len();
        self.twin.push(twin);
        self.next.push(next);
        self.vectors.push(v);
        self.status.push(s);
        self.cell.push(cell);
        id
    }

    /// Returns the new second pieces of `e` and of its twin.
    pub fn split_edge(&mut self, e: FlagId, t: &T) -> Result<(FlagId, FlagId)> {
        self.check(e)?;
        if !t.is_positive() || *t >= T::one() {
            return Err(Error::DegenerateSplit);
        }
        let tw = self.twin[e];
        let v = self.vectors[e].clone();
        let w = self.vectors[tw].clone();
        let rest = T::one() - t.clone();
        let e2 = self.len();
        let t2 = e2 + 1;
        let (e_next, tw_next) = (self.next[e], self.next[tw]);
        let (e_cell, tw_cell) = (self.cell[e], self.cell[tw]);
        self.push(tw, e_next, v.scale(&rest), Some(VertexStatus::Filled), e_cell);
        self.push(e, tw_next, w.scale(t), Some(VertexStatus::Filled), tw_cell);
        self.vectors[e] = v.scale(t);
        self.vectors[tw] = w.scale(&rest);
        self.next[e] = e2;
        self.next[tw] = t2;
        self.twin[e] = t2;
        self.twin[tw] = e2;
        Ok((e2, t2))
    }

    /// Returns the chord flags lying in the face of corner `from` and in the
    /// face of corner `to`, in that order.
    pub fn insert_chord(
        &mut self,
        face: FlagId,
        from: usize,
        to: usize,
        origin_faces: &[FlagId],
    ) -> Result<(FlagId, FlagId)> {
        self.check(face)?;
        let flags = self.face_from(face);
        let k = flags.len();
        let bad = Error::ChordIsExistingEdge { face, from, to };
        if from >= k || to >= k || from == to || (from + 1) % k == to || (to + 1) % k == from {
            return Err(bad);
        }
        let mut pos = vec![Vector::<T>::zero()];
        for &f in &flags {
            let p = pos.last().unwrap().clone() + self.vectors[f].clone();
            pos.push(p);
        }
        let chord = pos[to].clone() - pos[from].clone();
        // face A: flags from..to-1 then the chord back; face B: to..from-1 then the chord
        let walk = |a: usize, b: usize| -> Vec<FlagId> {
            let mut out = Vec::new();
            let mut i = a;
            while i != b {
                out.push(flags[i]);
                i = (i + 1) % k;
            }
            out
        };
        let part_a = walk(from, to);
        let part_b = walk(to, from);
        let mut va: Vec<Vector<T>> = part_a.iter().map(|&f| self.vectors[f].clone()).collect();
        va.push(-chord.clone());
        let mut vb: Vec<Vector<T>> = part_b.iter().map(|&f| self.vectors[f].clone()).collect();
        vb.push(chord.clone());
        if convex_polygon_defect(&va).is_some() || convex_polygon_defect(&vb).is_some() {
            return Err(bad);
        }
        let cell = self.face_cell(&flags, origin_faces);
        let ca = self.len();
        let cb = ca + 1;
        let status_to = self.status[flags[to]];
        let status_from = self.status[flags[from]];
        self.push(cb, flags[from], -chord.clone(), status_to, cell);
        self.push(ca, flags[to], chord, status_from, cell);
        self.next[*part_a.last().unwrap()] = ca;
        self.next[*part_b.last().unwrap()] = cb;
        Ok((ca, cb))
    }

    /// Returns `(out, in)` spoke pairs, one per boundary flag starting at
    /// `face`: `out` leaves the head of that flag towards the new vertex,
    /// `in` returns from the new vertex to its origin.
    pub fn split_face(
        &mut self,
        face: FlagId,
        point: &Vector<T>,
        origin_faces: &[FlagId],
    ) -> Result<Vec<(FlagId, FlagId)>> {
        self.check(face)?;
        let flags = self.face_from(face);
        let k = flags.len();
        let mut pos = vec![Vector::<T>::zero()];
        for &f in &flags {
            let p = pos.last().unwrap().clone() + self.vectors[f].clone();
            pos.push(p);
        }
        for i in 0..k {
            let rel = point.clone() - pos[i].clone();
            if !self.vectors[flags[i]].cross(&rel).is_positive() {
                return Err(Error::PointNotInterior { face });
            }
        }
        let cell = self.face_cell(&flags, origin_faces);
        let base = self.len();
        let out_id = |i: usize| base + 2 * i;
        let in_id = |i: usize| base + 2 * i + 1;
        let mut spokes = Vec::with_capacity(k);
        for i in 0..k {
            let j = (i + 1) % k;
            let out_v = point.clone() - pos[i + 1].clone();
            let in_v = pos[i].clone() - point.clone();
            let s_head = self.status[flags[j]];
            let o = self.push(in_id(j), in_id(i), out_v, s_head, cell);
            let n = self.push(out_id((i + k - 1) % k), flags[i], in_v, Some(VertexStatus::Filled), cell);
            debug_assert_eq!((o, n), (out_id(i), in_id(i)));
            spokes.push((o, n));
        }
        for (i, &f) in flags.iter().enumerate() {
            self.next[f] = out_id(i);
        }
        Ok(spokes)
    }

    pub fn finish(self) -> Result<HalfTranslationSurface<T>> {
        HalfTranslationSurface::from_flag_statuses(self.twin, self.next, self.vectors, self.status)
    }
}

/// Smallest flag of the face of every flag, for mapping flags to faces.
pub(crate) fn face_representatives<T: ExactField>(s: &HalfTranslationSurface<T>) -> Vec<FlagId> {
    (0..s.num_flags()).map(|e| s.faces()[s.face_of(e)][0]).collect()
}

pub(crate) fn apply_step<T: ExactField>(
    ed: &mut Editor<T>,
    step: &RefineStep<T>,
    origin_faces: &[FlagId],
) -> Result<Vec<FlagId>> {
    Ok(match step {
        RefineStep::SplitEdge { edge, t } => {
            let (a, b) = ed.split_edge(*edge, t)?;
            vec![a, b]
        }
        RefineStep::InsertChord { face, from, to } => {
            let (a, b) = ed.insert_chord(*face, *from, *to, origin_faces)?;
            vec![a, b]
        }
        RefineStep::SplitFace { face, point } => {
            ed.split_face(*face, point, origin_faces)?.into_iter().flat_map(|(a, b)| [a, b]).collect()
        }
    })
}

/// Applies a subdivision script. The returned correspondence lists, for
/// every flag of the refined surface, the original cell it lies in.
pub fn refine<T: ExactField>(
    surface: &HalfTranslationSurface<T>,
    script: &[RefineStep<T>],
) -> Result<(HalfTranslationSurface<T>, Vec<Cell>)> {
    let origin_faces = face_representatives(surface);
    let mut ed = Editor::new(surface);
    for step in script {
        apply_step(&mut ed, step, &origin_faces)?;
    }
    let cells = ed.cell.clone();
    let mut out = ed.finish()?;
    if let Some(name) = surface.name() {
        out = out.with_name(name);
    }
    Ok((out, cells))
}
