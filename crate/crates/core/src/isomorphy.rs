//! Conjugacy of quadratic differentials through canonical Delaunay forms.
//!
//! Every valid surface has a unique Delaunay cell decomposition with its
//! vertices as sites. Cocircular triangles are merged back into polygonal
//! cells, so no flip choices remain. The canonical form is the
//! lexicographically least breadth-first encoding of that complex over all
//! starting flags, with each face's vectors sign-normalized at its entry
//! flag.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::covering::{extend_from_anchor, CoveringMap};
use crate::geometry::{incircle, Vector};
use crate::refine::Editor;
use crate::scalar::ExactField;
use crate::surface::{FlagId, HalfTranslationSurface, VertexStatus};

/// Version tag carried by every encoding.
pub const ENCODING_VERSION: &str = "qdc-canon/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm<T> {
    pub encoding: Vec<u8>,
    /// Starting flag of the least encoding, in [`complex`](Self::complex).
    pub anchor: FlagId,
    /// The Delaunay cell complex of the input, flags in an arbitrary order.
    pub complex: HalfTranslationSurface<T>,
    /// `order[i]` is the flag of `complex` carrying label `i`.
    pub order: Vec<FlagId>,
    /// The complex relabelled by `order`, with gauge-normalized vectors.
    pub realization: HalfTranslationSurface<T>,
}

impl<T> CanonicalForm<T> {
    pub fn encoding_str(&self) -> &str {
        std::str::from_utf8(&self.encoding).expect("encodings are ASCII")
    }
}

/// Flat arrays with one status per flag, mutated by flips and merges.
struct Complex<T> {
    twin: Vec<FlagId>,
    next: Vec<FlagId>,
    vectors: Vec<Vector<T>>,
    status: Vec<VertexStatus>,
}

impl<T: ExactField> Complex<T> {
    fn from_editor(ed: Editor<T>) -> Self {
        Complex {
            twin: ed.twin,
            next: ed.next,
            vectors: ed.vectors,
            status: ed.status.into_iter().map(|s| s.expect("statuses are resolved")).collect(),
        }
    }

    fn sigma(&self, e: FlagId) -> i8 {
        if self.vectors[self.twin[e]] == -self.vectors[e].clone() {
            1
        } else {
            -1
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

    /// Incircle sign of the quadrilateral around the triangle edge `e`.
    fn edge_incircle(&self, e: FlagId) -> Ordering {
        let e1 = self.next[e];
        let t = self.twin[e];
        let f1 = self.next[t];
        let a = Vector::zero();
        let b = self.vectors[e].clone();
        let c = b.clone() + self.vectors[e1].clone();
        let d = self.vectors[f1].signed(self.sigma(e));
        incircle(&a, &b, &c, &d)
    }

    fn flip(&mut self, e: FlagId) {
        let (e1, t) = (self.next[e], self.twin[e]);
        let e2 = self.next[e1];
        let (f1, f2) = (self.next[t], self.next[self.next[t]]);
        let sigma = self.sigma(e);
        let b = self.vectors[e].clone();
        let c = b.clone() + self.vectors[e1].clone();
        let d = self.vectors[f1].signed(sigma);
        let (status_c, status_d) = (self.status[e2], self.status[f2]);
        self.vectors[f1] = self.vectors[f1].signed(sigma);
        self.vectors[f2] = self.vectors[f2].signed(sigma);
        self.vectors[e] = c.clone() - d.clone();
        self.vectors[t] = d - c;
        self.status[e] = status_d;
        self.status[t] = status_c;
        self.next[e] = e2;
        self.next[e2] = f1;
        self.next[f1] = e;
        self.next[t] = f2;
        self.next[f2] = e1;
        self.next[e1] = t;
    }
}

fn triangulate<T: ExactField>(q: &HalfTranslationSurface<T>) -> Complex<T> {
    let mut ed = Editor::new(q);
    let no_cells: Vec<FlagId> = (0..q.num_flags()).collect();
    for face in q.faces() {
        let mut current = face[0];
        loop {
            let mut k = 1;
            let mut f = ed.next[current];
            while f != current {
                k += 1;
                f = ed.next[f];
            }
            if k <= 3 {
                break;
            }
            let mut cut = None;
            for corner in 0..k {
                let from = (corner + k - 1) % k;
                let to = (corner + 1) % k;
                if let Ok((_, cb)) = ed.insert_chord(current, from, to, &no_cells) {
                    cut = Some(cb);
                    break;
                }
            }
            current = cut.expect("a convex polygon always has a clippable ear");
        }
    }
    Complex::from_editor(ed)
}

/// Delaunay cell complex of a valid surface.
pub fn delaunay_complex<T: ExactField>(q: &HalfTranslationSurface<T>) -> HalfTranslationSurface<T> {
    let mut c = triangulate(q);
    let n = c.twin.len();
    loop {
        let mut flipped = false;
        for e in 0..n {
            if e < c.twin[e] && c.edge_incircle(e) == Ordering::Greater {
                c.flip(e);
                flipped = true;
            }
        }
        if !flipped {
            break;
        }
    }
    // merge cocircular neighbours into polygonal cells
    let cocircular: Vec<FlagId> = (0..n).filter(|&e| e < c.twin[e] && c.edge_incircle(e) == Ordering::Equal).collect();
    let mut deleted = vec![false; n];
    for e in cocircular {
        let t = c.twin[e];
        let face_e = c.face_from(e);
        if face_e.contains(&t) {
            continue;
        }
        let sigma = c.sigma(e);
        let face_t = c.face_from(t);
        for &f in &face_t {
            c.vectors[f] = c.vectors[f].signed(sigma);
        }
        let prev_e = *face_e.last().unwrap();
        let prev_t = *face_t.last().unwrap();
        c.next[prev_e] = c.next[t];
        c.next[prev_t] = c.next[e];
        deleted[e] = true;
        deleted[t] = true;
    }
    let mut new_id = vec![usize::MAX; n];
    let mut kept = Vec::new();
    for e in 0..n {
        if !deleted[e] {
            new_id[e] = kept.len();
            kept.push(e);
        }
    }
    let twin = kept.iter().map(|&e| new_id[c.twin[e]]).collect();
    let next = kept.iter().map(|&e| new_id[c.next[e]]).collect();
    let vectors = kept.iter().map(|&e| c.vectors[e].clone()).collect();
    let status = kept.iter().map(|&e| Some(c.status[e])).collect();
    let mut out = HalfTranslationSurface::from_flag_statuses(twin, next, vectors, status)
        .expect("flips and merges preserve the half-edge structure");
    if let Some(name) = q.name() {
        out = out.with_name(name);
    }
    out
}

fn status_code(s: VertexStatus) -> String {
    match s {
        VertexStatus::Puncture => "p".into(),
        VertexStatus::Filled => "f".into(),
        VertexStatus::Orbifold(n) => format!("o{n}"),
    }
}

/// Breadth-first labelling from `start`; returns the label order and the
/// face sign gauge of every flag.
fn traverse<T: ExactField>(c: &HalfTranslationSurface<T>, start: FlagId) -> (Vec<FlagId>, Vec<i8>) {
    let n = c.num_flags();
    let mut label = vec![usize::MAX; n];
    let mut face_sign = vec![0i8; c.faces().len()];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    let mut visit = |e: FlagId, label: &mut Vec<usize>, order: &mut Vec<FlagId>, queue: &mut VecDeque<FlagId>| {
        if label[e] != usize::MAX {
            return;
        }
        let f = c.face_of(e);
        if face_sign[f] == 0 {
            face_sign[f] = if c.vector(e).is_gauge_positive() { 1 } else { -1 };
        }
        label[e] = order.len();
        order.push(e);
        queue.push_back(e);
    };
    visit(start, &mut label, &mut order, &mut queue);
    while let Some(x) = queue.pop_front() {
        visit(c.next(x), &mut label, &mut order, &mut queue);
        visit(c.twin(x), &mut label, &mut order, &mut queue);
    }
    let signs = (0..n).map(|e| face_sign[c.face_of(e)]).collect();
    (order, signs)
}

fn encode<T: ExactField>(c: &HalfTranslationSurface<T>, order: &[FlagId], signs: &[i8]) -> Vec<u8> {
    let n = c.num_flags();
    let mut label = vec![0; n];
    for (i, &e) in order.iter().enumerate() {
        label[e] = i;
    }
    let mut out = format!("{ENCODING_VERSION};{n};");
    for &e in order {
        let v = c.vector(e).signed(signs[e]);
        let _ = write!(
            out,
            "{},{},{},{},{};",
            label[c.next(e)],
            label[c.twin(e)],
            v.x.to_fraction_string(),
            v.y.to_fraction_string(),
            status_code(c.status_at(e))
        );
    }
    out.into_bytes()
}

struct Labelling {
    encoding: Vec<u8>,
    anchor: FlagId,
    order: Vec<FlagId>,
    signs: Vec<i8>,
}

/// Canonical form of a surface. The input is assumed valid.
pub fn canonical_form<T: ExactField>(q: &HalfTranslationSurface<T>) -> CanonicalForm<T> {
    let complex = delaunay_complex(q);
    let mut best: Option<Labelling> = None;
    for anchor in 0..complex.num_flags() {
        let (order, signs) = traverse(&complex, anchor);
        let encoding = encode(&complex, &order, &signs);
        if best.as_ref().is_none_or(|b| encoding < b.encoding) {
            best = Some(Labelling { encoding, anchor, order, signs });
        }
    }
    let Labelling { encoding, anchor, order, signs } = best.expect("surfaces have flags");
    let realization = realize(&complex, &order, &signs);
    CanonicalForm { encoding, anchor, complex, order, realization }
}

fn realize<T: ExactField>(c: &HalfTranslationSurface<T>, order: &[FlagId], signs: &[i8]) -> HalfTranslationSurface<T> {
    let n = c.num_flags();
    let mut label = vec![0; n];
    for (i, &e) in order.iter().enumerate() {
        label[e] = i;
    }
    let twin = order.iter().map(|&e| label[c.twin(e)]).collect();
    let next = order.iter().map(|&e| label[c.next(e)]).collect();
    let vectors = order.iter().map(|&e| c.vector(e).signed(signs[e])).collect();
    let status = order.iter().map(|&e| Some(c.status_at(e))).collect();
    let mut out = HalfTranslationSurface::from_flag_statuses(twin, next, vectors, status)
        .expect("relabelling preserves the structure");
    if let Some(name) = c.name() {
        out = out.with_name(name);
    }
    out
}

/// A degree-one covering between the Delaunay complexes of `q1` and `q2`
/// when the two differentials are conjugate.
pub fn are_conjugate<T: ExactField>(
    q1: &HalfTranslationSurface<T>,
    q2: &HalfTranslationSurface<T>,
) -> Option<CoveringMap<T>> {
    let c1 = canonical_form(q1);
    let c2 = canonical_form(q2);
    if c1.encoding != c2.encoding {
        return None;
    }
    let mut phi = vec![0; c1.complex.num_flags()];
    for (i, &e) in c1.order.iter().enumerate() {
        phi[e] = c2.order[i];
    }
    Some(CoveringMap::new(c1.complex, c2.complex, phi))
}

/// All self-isomorphisms of `q` as degree-one self-coverings of its
/// Delaunay complex, identity first.
pub fn symmetry_group<T: ExactField>(q: &HalfTranslationSurface<T>) -> Vec<CoveringMap<T>> {
    let c = delaunay_complex(q);
    let mut phis = Vec::new();
    for image in 0..c.num_flags() {
        if let Some(phi) = extend_from_anchor(&c, &c, 0, image) {
            let map = CoveringMap::new(c.clone(), c.clone(), phi);
            if map.validate_map().is_ok() {
                phis.push(map.into_parts().2);
            }
        }
    }
    phis.sort();
    let set: BTreeSet<&Vec<FlagId>> = phis.iter().collect();
    for a in &phis {
        for b in &phis {
            let ab: Vec<FlagId> = b.iter().map(|&x| a[x]).collect();
            assert!(set.contains(&ab), "symmetries are closed under composition");
        }
    }
    phis.into_iter().map(|phi| CoveringMap::new(c.clone(), c.clone(), phi)).collect()
}
