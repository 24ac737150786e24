//! Finite coverings between half-translation surfaces.
//!
//! A covering is a flag map `phi` from the source complex onto the target
//! complex that commutes with `next` and `twin`. On every source face it is
//! an isometry `z -> tau z + c` with `tau = +-1`, so `vector(phi(e)) =
//! tau(face(e)) * vector(e)`. Branching is allowed only over punctures and
//! orbifold points.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::isomorphy::canonical_form;
use crate::refine::{face_representatives, Editor, RefineStep};
use crate::scalar::ExactField;
use crate::surface::{FlagId, HalfTranslationSurface, VertexStatus};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringMap<T> {
    source: HalfTranslationSurface<T>,
    target: HalfTranslationSurface<T>,
    phi: Vec<FlagId>,
}

/// Local degree of a covering at one source vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalDegree {
    /// Smallest flag of the source vertex.
    pub source_vertex: FlagId,
    /// Smallest flag of the image vertex.
    pub target_vertex: FlagId,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub degree: usize,
    /// `tau` for every source face, indexed like `source.faces()`.
    pub face_signs: Vec<i8>,
    pub local_degrees: Vec<LocalDegree>,
}

/// Status a source vertex must carry when it winds `m` times around a
/// target vertex of the given status.
pub fn status_over(target: VertexStatus, m: usize) -> std::result::Result<VertexStatus, String> {
    match target {
        VertexStatus::Filled if m == 1 => Ok(VertexStatus::Filled),
        VertexStatus::Filled => Err(format!("winding {m} over a filled point")),
        VertexStatus::Puncture => Ok(VertexStatus::Puncture),
        VertexStatus::Orbifold(n) => {
            let n = n as usize;
            if m == 0 || !n.is_multiple_of(m) {
                Err(format!("winding {m} does not divide orbifold order {n}"))
            } else if m == n {
                Ok(VertexStatus::Filled)
            } else {
                Ok(VertexStatus::Orbifold((n / m) as u32))
            }
        }
    }
}

impl<T: ExactField> CoveringMap<T> {
    /// Wraps a flag map without checking it; see [`validate`](Self::validate).
    pub fn new(source: HalfTranslationSurface<T>, target: HalfTranslationSurface<T>, phi: Vec<FlagId>) -> Self {
        CoveringMap { source, target, phi }
    }

    pub fn identity(surface: &HalfTranslationSurface<T>) -> Self {
        let phi = (0..surface.num_flags()).collect();
        CoveringMap::new(surface.clone(), surface.clone(), phi)
    }

    pub fn source(&self) -> &HalfTranslationSurface<T> {
        &self.source
    }

    pub fn target(&self) -> &HalfTranslationSurface<T> {
        &self.target
    }

    pub fn phi(&self) -> &[FlagId] {
        &self.phi
    }

    pub fn image(&self, e: FlagId) -> FlagId {
        self.phi[e]
    }

    pub fn into_parts(self) -> (HalfTranslationSurface<T>, HalfTranslationSurface<T>, Vec<FlagId>) {
        (self.source, self.target, self.phi)
    }

    /// Preimages of every target flag, in increasing order.
    pub fn fibers(&self) -> Vec<Vec<FlagId>> {
        let mut out = vec![Vec::new(); self.target.num_flags()];
        for (e, &t) in self.phi.iter().enumerate() {
            out[t].push(e);
        }
        out
    }

    /// `other . self`, for `self: A -> B` and `other: B -> C`.
    pub fn then(&self, other: &CoveringMap<T>) -> Result<CoveringMap<T>> {
        if self.target != other.source {
            return Err(Error::SourceMismatch);
        }
        let phi = self.phi.iter().map(|&e| other.phi[e]).collect();
        Ok(CoveringMap::new(self.source.clone(), other.target.clone(), phi))
    }

    /// Checks equivariance, face sizes and fiber sizes; returns the degree.
    pub fn validate_combinatorics(&self) -> Result<usize> {
        let (s, t) = (&self.source, &self.target);
        if self.phi.len() != s.num_flags() {
            return Err(Error::NotEquivariant { flag: self.phi.len().min(s.num_flags()) });
        }
        for e in 0..s.num_flags() {
            let u = self.phi[e];
            if u >= t.num_flags() {
                return Err(Error::UnknownFlag { flag: u });
            }
            if self.phi[s.next(e)] != t.next(u) || self.phi[s.twin(e)] != t.twin(u) {
                return Err(Error::NotEquivariant { flag: e });
            }
        }
        for face in s.faces() {
            let image = t.faces()[t.face_of(self.phi[face[0]])].len();
            if image != face.len() {
                return Err(Error::NotEquivariant { flag: face[0] });
            }
        }
        let fibers = self.fibers();
        let d = fibers[0].len();
        if d == 0 || fibers.iter().any(|f| f.len() != d) {
            return Err(Error::DegreeMismatch { reason: "fibers have different sizes".into() });
        }
        Ok(d)
    }

    /// Per-source-face signs, or the first flag whose vector disagrees.
    pub fn face_signs(&self) -> Result<Vec<i8>> {
        let (s, t) = (&self.source, &self.target);
        let mut signs = Vec::with_capacity(s.faces().len());
        for face in s.faces() {
            let rep = face[0];
            let tau = s.vector(rep).sign_to(t.vector(self.phi[rep])).ok_or(Error::VectorMismatch { flag: rep })?;
            for &e in face {
                if t.vector(self.phi[e]) != &s.vector(e).signed(tau) {
                    return Err(Error::VectorMismatch { flag: e });
                }
            }
            signs.push(tau);
        }
        Ok(signs)
    }

    /// Validates the map assuming both surfaces are valid.
    pub fn validate_map(&self) -> Result<CoverReport> {
        let (s, t) = (&self.source, &self.target);
        let degree = self.validate_combinatorics()?;
        let face_signs = self.face_signs()?;
        for e in 0..s.num_flags() {
            let tau = face_signs[s.face_of(e)];
            let tau_twin = face_signs[s.face_of(s.twin(e))];
            if t.gluing_sign(self.phi[e]) != s.gluing_sign(e) * tau * tau_twin {
                return Err(Error::SignInconsistency { flag: e });
            }
        }
        let mut local_degrees = Vec::with_capacity(s.vertices().len());
        for (v, flags) in s.vertices().iter().enumerate() {
            let image_vertex = t.vertex_of(self.phi[flags[0]]);
            let image_len = t.vertices()[image_vertex].len();
            let rule = |msg: String| Error::LocalDegreeViolation { vertex: flags[0], rule: msg };
            if flags.len() % image_len != 0 {
                return Err(rule("orbit length not a multiple of the image orbit".into()));
            }
            let m = flags.len() / image_len;
            let expected = status_over(t.status(image_vertex), m).map_err(rule)?;
            if s.status(v) != expected {
                return Err(rule(format!(
                    "source status {:?} but winding {m} over {:?} requires {:?}",
                    s.status(v),
                    t.status(image_vertex),
                    expected
                )));
            }
            if s.angle_multiple(v) as usize != m * t.angle_multiple(image_vertex) as usize {
                return Err(rule("cone angle is not the winding times the image angle".into()));
            }
            local_degrees.push(LocalDegree {
                source_vertex: flags[0],
                target_vertex: t.vertices()[image_vertex][0],
                degree: m,
            });
        }
        let ratio = s.area() / t.area();
        if ratio != T::from_int(degree as i64) {
            return Err(Error::DegreeMismatch { reason: format!("area ratio {ratio} but {degree} sheets") });
        }
        Ok(CoverReport { degree, face_signs, local_degrees })
    }

    /// Validates both surfaces and certifies `phi^* q_target = q_source`.
    pub fn validate(&self) -> Result<CoverReport> {
        self.source.validate()?;
        self.target.validate()?;
        self.validate_map()
    }

    pub fn degree(&self) -> usize {
        self.phi.len() / self.target.num_flags()
    }
}

/// Sheet permutations for building a cover of a base surface.
///
/// `perms[e]` (0-based images) sends sheet `i` of flag `e` across the edge
/// to sheet `perms[e][i]` of `twin(e)`. Pairs without an entry glue each
/// sheet to itself. Only one flag of each twin pair may carry an entry.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MonodromySpec {
    pub degree: usize,
    pub perms: BTreeMap<FlagId, Vec<usize>>,
}

impl MonodromySpec {
    pub fn trivial(degree: usize) -> Self {
        MonodromySpec { degree, perms: BTreeMap::new() }
    }

    pub fn with(mut self, flag: FlagId, perm: Vec<usize>) -> Self {
        self.perms.insert(flag, perm);
        self
    }
}

fn check_perm(p: &[usize], d: usize) -> bool {
    let mut seen = vec![false; d];
    p.len() == d && p.iter().all(|&i| i < d && !std::mem::replace(&mut seen[i], true))
}

/// Builds the cover described by `spec`, split into connected components.
/// Each component comes with its covering map onto `base`.
pub fn construct_cover<T: ExactField>(
    base: &HalfTranslationSurface<T>,
    spec: &MonodromySpec,
) -> Result<Vec<CoveringMap<T>>> {
    let n = base.num_flags();
    let d = spec.degree;
    if d == 0 {
        return Err(Error::BadMonodromy { reason: "degree must be positive".into() });
    }
    let mut sheet_of_twin = vec![(0..d).collect::<Vec<_>>(); n];
    for (&e, perm) in &spec.perms {
        if e >= n {
            return Err(Error::UnknownFlag { flag: e });
        }
        if !check_perm(perm, d) {
            return Err(Error::BadMonodromy {
                reason: format!("entry for flag {e} is not a permutation of {d} sheets"),
            });
        }
        let t = base.twin(e);
        if spec.perms.contains_key(&t) {
            return Err(Error::BadMonodromy { reason: format!("both flags {e} and {t} carry permutations") });
        }
        let mut inv = vec![0; d];
        for (i, &j) in perm.iter().enumerate() {
            inv[j] = i;
        }
        sheet_of_twin[e] = perm.clone();
        sheet_of_twin[t] = inv;
    }
    let id = |e: FlagId, i: usize| i * n + e;
    let total = n * d;
    let mut twin = vec![0; total];
    let mut next = vec![0; total];
    for i in 0..d {
        for e in 0..n {
            twin[id(e, i)] = id(base.twin(e), sheet_of_twin[e][i]);
            next[id(e, i)] = id(base.next(e), i);
        }
    }
    // connected components, each labelled in increasing global order
    let mut comp = vec![usize::MAX; total];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..total {
        if comp[start] != usize::MAX {
            continue;
        }
        let c = components.len();
        let mut members = vec![start];
        comp[start] = c;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for y in [next[x], twin[x]] {
                if comp[y] == usize::MAX {
                    comp[y] = c;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    let mut out = Vec::with_capacity(components.len());
    for members in &components {
        let mut local = vec![usize::MAX; total];
        for (k, &g) in members.iter().enumerate() {
            local[g] = k;
        }
        let ctwin: Vec<_> = members.iter().map(|&g| local[twin[g]]).collect();
        let cnext: Vec<_> = members.iter().map(|&g| local[next[g]]).collect();
        let vectors: Vec<_> = members.iter().map(|&g| base.vector(g % n).clone()).collect();
        let phi: Vec<_> = members.iter().map(|&g| g % n).collect();
        // statuses follow from the winding around each base vertex
        let mut status = vec![None; members.len()];
        let mut visited = vec![false; members.len()];
        for start in 0..members.len() {
            if visited[start] {
                continue;
            }
            let mut orbit = vec![start];
            visited[start] = true;
            let mut x = cnext[ctwin[start]];
            while x != start {
                visited[x] = true;
                orbit.push(x);
                x = cnext[ctwin[x]];
            }
            let base_vertex = base.vertex_of(phi[start]);
            let m = orbit.len() / base.vertices()[base_vertex].len();
            let s = status_over(base.status(base_vertex), m)
                .map_err(|rule| Error::LocalDegreeViolation { vertex: start, rule })?;
            for x in orbit {
                status[x] = Some(s);
            }
        }
        let source = HalfTranslationSurface::from_flag_statuses(ctwin, cnext, vectors, status)?;
        out.push(CoveringMap::new(source, base.clone(), phi));
    }
    Ok(out)
}

/// Whether `qt` (same complex as `map.source`, possibly different vectors)
/// is a lift through `map`. When it is, returns the pushforward: the target
/// complex carrying the common vectors of the preimage faces.
pub fn is_symmetric<T: ExactField>(
    qt: &HalfTranslationSurface<T>,
    map: &CoveringMap<T>,
) -> Result<Option<HalfTranslationSurface<T>>> {
    if !qt.same_combinatorics(map.source()) {
        return Err(Error::StructureMismatch);
    }
    map.validate_combinatorics()?;
    let target = map.target();
    let fibers = map.fibers();
    let mut pushed = vec![None; target.num_flags()];
    for face in target.faces() {
        let rep = face[0];
        let pre = &fibers[rep];
        let first = pre[0];
        let offset_vectors: Vec<_> = qt.face_from(first).into_iter().map(|e| qt.vector(e).clone()).collect();
        for &other in &pre[1..] {
            let vs: Vec<_> = qt.face_from(other).into_iter().map(|e| qt.vector(e).clone()).collect();
            let tau = match offset_vectors[0].sign_to(&vs[0]) {
                Some(t) => t,
                None => return Ok(None),
            };
            if vs.iter().zip(&offset_vectors).any(|(a, b)| a != &b.signed(tau)) {
                return Ok(None);
            }
        }
        for (k, t) in target.face_from(rep).into_iter().enumerate() {
            pushed[t] = Some(offset_vectors[k].clone());
        }
    }
    let vectors = pushed.into_iter().map(|v| v.expect("every target flag lies on a face")).collect();
    Ok(Some(target.with_vectors(vectors)?))
}

/// One connected component of a fiber product with its two projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberComponent<T> {
    pub surface: HalfTranslationSurface<T>,
    pub proj1: CoveringMap<T>,
    pub proj2: CoveringMap<T>,
}

/// Pullback of two coverings of the same surface: faces are pairs of faces
/// over a common base face, glued componentwise.
pub fn fiber_product<T: ExactField>(p1: &CoveringMap<T>, p2: &CoveringMap<T>) -> Result<Vec<FiberComponent<T>>> {
    if p1.target() != p2.target() {
        return Err(Error::TargetMismatch);
    }
    let base = p1.target();
    let (f1, f2) = (p1.fibers(), p2.fibers());
    let mut index = BTreeMap::new();
    let mut pairs = Vec::new();
    for t in 0..base.num_flags() {
        for &a in &f1[t] {
            for &b in &f2[t] {
                index.insert((a, b), pairs.len());
                pairs.push((a, b));
            }
        }
    }
    let (s1, s2) = (p1.source(), p2.source());
    let total = pairs.len();
    let next: Vec<_> = pairs.iter().map(|&(a, b)| index[&(s1.next(a), s2.next(b))]).collect();
    let twin: Vec<_> = pairs.iter().map(|&(a, b)| index[&(s1.twin(a), s2.twin(b))]).collect();
    let mut comp = vec![usize::MAX; total];
    let mut out = Vec::new();
    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by_key(|&k| pairs[k]);
    for &start in &order {
        if comp[start] != usize::MAX {
            continue;
        }
        let c = out.len();
        comp[start] = c;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for y in [next[x], twin[x]] {
                if comp[y] == usize::MAX {
                    comp[y] = c;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_by_key(|&k| pairs[k]);
        let mut local = vec![usize::MAX; total];
        for (k, &g) in members.iter().enumerate() {
            local[g] = k;
        }
        let ctwin: Vec<_> = members.iter().map(|&g| local[twin[g]]).collect();
        let cnext: Vec<_> = members.iter().map(|&g| local[next[g]]).collect();
        let base_flag: Vec<_> = members.iter().map(|&g| p1.image(pairs[g].0)).collect();
        let vectors: Vec<_> = base_flag.iter().map(|&t| base.vector(t).clone()).collect();
        let mut status = vec![None; members.len()];
        for start in 0..members.len() {
            if status[start].is_some() {
                continue;
            }
            let mut orbit = vec![start];
            let mut x = cnext[ctwin[start]];
            while x != start {
                orbit.push(x);
                x = cnext[ctwin[x]];
            }
            let bv = base.vertex_of(base_flag[start]);
            let m = orbit.len() / base.vertices()[bv].len();
            let s =
                status_over(base.status(bv), m).map_err(|rule| Error::LocalDegreeViolation { vertex: start, rule })?;
            for x in orbit {
                status[x] = Some(s);
            }
        }
        let surface = HalfTranslationSurface::from_flag_statuses(ctwin, cnext, vectors, status)?;
        let proj1 = CoveringMap::new(surface.clone(), s1.clone(), members.iter().map(|&g| pairs[g].0).collect());
        let proj2 = CoveringMap::new(surface.clone(), s2.clone(), members.iter().map(|&g| pairs[g].1).collect());
        out.push(FiberComponent { surface, proj1, proj2 });
    }
    Ok(out)
}

/// Attempts to extend `anchor -> image` to a flag map of face isometries.
pub(crate) fn extend_from_anchor<T: ExactField>(
    q1: &HalfTranslationSurface<T>,
    q2: &HalfTranslationSurface<T>,
    anchor: FlagId,
    image: FlagId,
) -> Option<Vec<FlagId>> {
    let n = q1.num_flags();
    let mut phi = vec![usize::MAX; n];
    let mut tau = vec![0i8; q1.faces().len()];
    let mut queue = VecDeque::new();
    let assign =
        |e: FlagId, u: FlagId, phi: &mut Vec<FlagId>, tau: &mut Vec<i8>, queue: &mut VecDeque<FlagId>| -> bool {
            if phi[e] != usize::MAX {
                return phi[e] == u;
            }
            let f = q1.face_of(e);
            match q1.vector(e).sign_to(q2.vector(u)) {
                Some(s) if tau[f] == 0 || tau[f] == s => tau[f] = s,
                _ => return false,
            }
            if q1.status_at(e).is_puncture() != q2.status_at(u).is_puncture() {
                return false;
            }
            phi[e] = u;
            queue.push_back(e);
            true
        };
    if !assign(anchor, image, &mut phi, &mut tau, &mut queue) {
        return None;
    }
    while let Some(e) = queue.pop_front() {
        let u = phi[e];
        if !assign(q1.next(e), q2.next(u), &mut phi, &mut tau, &mut queue)
            || !assign(q1.twin(e), q2.twin(u), &mut phi, &mut tau, &mut queue)
        {
            return None;
        }
    }
    if phi.contains(&usize::MAX) {
        return None;
    }
    Some(phi)
}

/// All coverings from `q1` onto `q2` as flag maps of the given complexes.
pub fn find_coverings<T: ExactField>(
    q1: &HalfTranslationSurface<T>,
    q2: &HalfTranslationSurface<T>,
) -> Vec<CoveringMap<T>> {
    let ratio = q1.area() / q2.area();
    if !ratio.is_integer_valued() || !ratio.is_positive() {
        return Vec::new();
    }
    if !q1.num_flags().is_multiple_of(q2.num_flags()) {
        return Vec::new();
    }
    let mut found: Vec<Vec<FlagId>> = Vec::new();
    for image in 0..q2.num_flags() {
        if let Some(phi) = extend_from_anchor(q1, q2, 0, image) {
            let map = CoveringMap::new(q1.clone(), q2.clone(), phi);
            if map.validate_map().is_ok() {
                found.push(map.phi);
            }
        }
    }
    found.sort();
    found.dedup();
    found.into_iter().map(|phi| CoveringMap::new(q1.clone(), q2.clone(), phi)).collect()
}

/// Default enumeration cap; overridable by callers.
pub const DEFAULT_MAX_DEGREE: usize = 6;

/// Connected covers of `base` of degree exactly `degree`, one per conjugacy
/// class of the covering differential, sorted by canonical encoding.
pub fn enumerate_covers<T: ExactField>(
    base: &HalfTranslationSurface<T>,
    degree: usize,
    cap: usize,
) -> Result<Vec<CoveringMap<T>>> {
    if degree > cap {
        return Err(Error::DegreeCapExceeded { degree, cap });
    }
    if degree == 0 {
        return Ok(Vec::new());
    }
    // sheets over a spanning tree of the dual graph can be taken trivial
    let mut face_seen = vec![false; base.faces().len()];
    let mut tree_edge = vec![false; base.num_flags()];
    let mut queue = VecDeque::from([0usize]);
    face_seen[0] = true;
    while let Some(f) = queue.pop_front() {
        for &e in &base.faces()[f] {
            let g = base.face_of(base.twin(e));
            if !face_seen[g] {
                face_seen[g] = true;
                tree_edge[e] = true;
                tree_edge[base.twin(e)] = true;
                queue.push_back(g);
            }
        }
    }
    let free: Vec<FlagId> = (0..base.num_flags()).filter(|&e| e < base.twin(e) && !tree_edge[e]).collect();
    let perms = all_permutations(degree);
    let mut choice = vec![0usize; free.len()];
    let mut classes: BTreeMap<Vec<u8>, CoveringMap<T>> = BTreeMap::new();
    loop {
        let mut spec = MonodromySpec::trivial(degree);
        for (k, &e) in free.iter().enumerate() {
            spec.perms.insert(e, perms[choice[k]].clone());
        }
        if let Ok(mut comps) = construct_cover(base, &spec) {
            if comps.len() == 1 {
                let map = comps.pop().unwrap();
                let key = canonical_form(map.source()).encoding;
                classes.entry(key).or_insert(map);
            }
        }
        // odometer over the free edges
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(classes.into_values().collect());
            }
            choice[k] += 1;
            if choice[k] < perms.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn all_permutations(d: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

/// Refines the target by `script` and the source by its full pullback.
pub fn refine_cover<T: ExactField>(map: &CoveringMap<T>, script: &[RefineStep<T>]) -> Result<CoveringMap<T>> {
    map.validate_combinatorics()?;
    let src_faces = face_representatives(map.source());
    let tgt_faces = face_representatives(map.target());
    let mut src = Editor::new(map.source());
    let mut tgt = Editor::new(map.target());
    let mut phi = map.phi.clone();
    for step in script {
        let target_flag = match step {
            RefineStep::SplitEdge { edge, .. } => *edge,
            RefineStep::InsertChord { face, .. } => *face,
            RefineStep::SplitFace { face, .. } => *face,
        };
        if target_flag >= tgt.twin.len() {
            return Err(Error::UnknownFlag { flag: target_flag });
        }
        let pre: Vec<FlagId> = (0..phi.len()).filter(|&e| phi[e] == target_flag).collect();
        let new_target = crate::refine::apply_step(&mut tgt, step, &tgt_faces)?;
        for e in pre {
            let lifted = match step {
                RefineStep::SplitFace { point, .. } => {
                    let tau =
                        tgt.vectors[target_flag].sign_to(&src.vectors[e]).ok_or(Error::VectorMismatch { flag: e })?;
                    RefineStep::SplitFace { face: e, point: point.signed(tau) }
                }
                RefineStep::SplitEdge { t, .. } => RefineStep::SplitEdge { edge: e, t: t.clone() },
                RefineStep::InsertChord { from, to, .. } => RefineStep::InsertChord { face: e, from: *from, to: *to },
            };
            let new_source = crate::refine::apply_step(&mut src, &lifted, &src_faces)?;
            debug_assert_eq!(new_source.len(), new_target.len());
            phi.extend(new_target.iter().copied());
        }
    }
    let out = CoveringMap::new(src.finish()?, tgt.finish()?, phi);
    out.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{fixtures, Rational};

    fn horizontal_double_cover() -> CoveringMap<Rational> {
        let t = fixtures::t1p::<Rational>();
        let mut c = construct_cover(&t, &MonodromySpec::trivial(2).with(1, vec![1, 0])).unwrap();
        assert_eq!(c.len(), 1);
        c.pop().unwrap()
    }

    #[test]
    fn translation_double_cover_validates() {
        let p = horizontal_double_cover();
        let r = p.validate().unwrap();
        assert_eq!(r.degree, 2);
        assert!(r.local_degrees.iter().all(|l| l.degree == 1));
        assert_eq!(r.local_degrees.len(), 2);
        assert_eq!(p.source(), &fixtures::t2x1p::<Rational>());
    }

    #[test]
    fn trivial_spec_gives_copies_of_base() {
        let t = fixtures::t1p::<Rational>();
        let c = construct_cover(&t, &MonodromySpec::trivial(1)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].source(), &t);
        let c = construct_cover(&t, &MonodromySpec::trivial(2)).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn triple_cover_with_full_winding() {
        let t = fixtures::t1p::<Rational>();
        // right: (0 1), up: (0 2); the commutator is a 3-cycle
        let spec = MonodromySpec::trivial(3).with(1, vec![1, 0, 2]).with(3, vec![2, 1, 0]);
        let c = construct_cover(&t, &spec).unwrap();
        assert_eq!(c.len(), 1);
        let s = c[0].source();
        assert_eq!(s.genus(), 2);
        assert_eq!(s.cone_angle_multiples(), vec![6]);
        assert_eq!(s.status(0), VertexStatus::Puncture);
        c[0].validate().unwrap();
    }

    #[test]
    fn equivariance_violation() {
        let p = horizontal_double_cover();
        let (s, t, mut phi) = p.into_parts();
        phi.swap(0, 6);
        phi[1] = 4;
        let bad = CoveringMap::new(s, t, phi);
        assert!(matches!(bad.validate(), Err(Error::NotEquivariant { .. })));
    }

    #[test]
    fn filled_vertex_cannot_branch() {
        let t = fixtures::t1p::<Rational>();
        let closed = HalfTranslationSurface::new(
            t.twins().to_vec(),
            t.nexts().to_vec(),
            t.vectors().to_vec(),
            &[(0, VertexStatus::Filled)],
        )
        .unwrap();
        let spec = MonodromySpec::trivial(3).with(1, vec![1, 0, 2]).with(3, vec![2, 1, 0]);
        assert!(matches!(construct_cover(&closed, &spec), Err(Error::LocalDegreeViolation { .. })));
    }

    #[test]
    fn half_turn_quotient_onto_pillowcase() {
        let t = fixtures::t1p_half_periods::<Rational>();
        let p = fixtures::pillowcase::<Rational>();
        let maps = find_coverings(&t, &p);
        assert!(!maps.is_empty());
        for m in &maps {
            let r = m.validate().unwrap();
            assert_eq!(r.degree, 2);
            // the four special points are all branch points of order 2
            assert_eq!(r.local_degrees.len(), 4);
            assert!(r.local_degrees.iter().all(|l| l.degree == 2));
        }
    }

    #[test]
    fn find_coverings_area_filter() {
        let t = fixtures::t1p::<Rational>();
        let t2 = fixtures::t2x1p::<Rational>();
        assert!(find_coverings(&t, &t2).is_empty());
        let maps = find_coverings(&t2, &t);
        assert!(!maps.is_empty());
        assert!(maps.iter().all(|m| m.degree() == 2));
    }

    #[test]
    fn symmetric_lift_and_sheared_sheet() {
        let p = horizontal_double_cover();
        let push = is_symmetric(p.source(), &p).unwrap().unwrap();
        assert_eq!(&push, p.target());

        // shear the second square vertically; the twins stay compatible
        let m = crate::Matrix2::<Rational>::from_ints(1, 0, 1, 1);
        let mut v = p.source().vectors().to_vec();
        for x in &mut v[6..12] {
            *x = m.apply(x);
        }
        let sheared = p.source().with_vectors(v).unwrap();
        sheared.validate().unwrap();
        assert_eq!(is_symmetric(&sheared, &p).unwrap(), None);
    }

    #[test]
    fn symmetric_structure_mismatch() {
        let p = horizontal_double_cover();
        let other = fixtures::l3p::<Rational>();
        assert_eq!(is_symmetric(&other, &p), Err(Error::StructureMismatch));
    }

    #[test]
    fn refine_cover_splits_every_preimage() {
        let p = horizontal_double_cover();
        let r = refine_cover(&p, &[RefineStep::SplitEdge { edge: 0, t: Rational::half() }]).unwrap();
        assert_eq!(r.source().num_flags(), p.source().num_flags() + 4);
        assert_eq!(r.degree(), 2);

        let t = fixtures::t1p::<Rational>();
        let spec = MonodromySpec::trivial(3).with(1, vec![1, 2, 0]);
        let c = construct_cover(&t, &spec).unwrap().pop().unwrap();
        let point = crate::Vector::new(Rational::frac(2, 3), Rational::frac(1, 3));
        let r = refine_cover(&c, &[RefineStep::SplitFace { face: 0, point }]).unwrap();
        let filled = r.source().statuses().iter().filter(|s| **s == VertexStatus::Filled).count();
        assert_eq!(filled, 3);
        assert_eq!(r.degree(), 3);
    }
}
