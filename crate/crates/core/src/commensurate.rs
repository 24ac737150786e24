//! Quotients by flag identifications and minimal elements of
//! commensurability classes.
//!
//! An equivariant, metric-compatible partition of the flags of a surface
//! describes a covering onto the quotient orbifold. Partitions come from
//! the fibers of coverings (`pair_closure`) or from propagating a single
//! proposed identification (`propagate_single_pair`). Blocks that fold an
//! edge or a face onto itself are resolved by subdividing at the fixed
//! point, which becomes an orbifold point of the quotient.

use std::collections::VecDeque;
use std::fmt;

use crate::covering::CoveringMap;
use crate::error::{Error, Result};
use crate::geometry::Vector;
use crate::refine::{face_representatives, Editor};
use crate::scalar::ExactField;
use crate::surface::{FlagId, HalfTranslationSurface, VertexStatus};

/// A point whose neighbourhood a partition maps onto itself non-trivially.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixedLocus {
    /// Midpoint of the edge of this flag; the flag is identified with its twin.
    EdgeMidpoint(FlagId),
    /// Centre of the face of `flag`, where `flag` is identified with
    /// `partner` on the same face by a half-turn.
    FaceCenter { flag: FlagId, partner: FlagId },
}

impl fmt::Display for FixedLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedLocus::EdgeMidpoint(e) => write!(f, "midpoint of edge {e}"),
            FixedLocus::FaceCenter { flag, partner } => write!(f, "centre of face {flag} (half-turn to {partner})"),
        }
    }
}

/// A generating identification `vector(y) = sign * vector(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Identification {
    pub x: FlagId,
    pub y: FlagId,
    pub sign: i8,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller root so roots are block minima
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }

    fn labels(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|x| self.find(x)).collect()
    }
}

/// Partition of the flags of one surface. Blocks are sorted and ordered by
/// their smallest flag; equality ignores provenance.
#[derive(Clone, Debug)]
pub struct FlagPartition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<FlagId>>,
    provenance: Vec<Identification>,
}

impl PartialEq for FlagPartition {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}

impl Eq for FlagPartition {}

impl FlagPartition {
    /// Builds a partition from arbitrary per-flag labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let n = labels.len();
        let mut index = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<FlagId>> = Vec::new();
        let mut block_of = vec![0; n];
        for (e, l) in labels.iter().enumerate() {
            let b = *index.entry(*l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(e);
            block_of[e] = b;
        }
        FlagPartition { block_of, blocks, provenance: Vec::new() }
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<FlagId>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition { reason: "empty block".into() });
            }
            for &e in block {
                if e >= n || labels[e] != usize::MAX {
                    return Err(Error::InvalidPartition { reason: format!("flag {e} is out of range or repeated") });
                }
                labels[e] = b;
            }
        }
        if let Some(e) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition { reason: format!("flag {e} is in no block") });
        }
        Ok(Self::from_labels(&labels))
    }

    /// The fibers of a covering, as a partition of its source flags.
    pub fn fibers_of<T: ExactField>(map: &CoveringMap<T>) -> Self {
        let mut p = Self::from_labels(map.phi());
        for block in &p.blocks {
            for &y in &block[1..] {
                let x = block[0];
                let sign = map.source().vector(x).sign_to(map.source().vector(y)).unwrap_or(1);
                p.provenance.push(Identification { x, y, sign });
            }
        }
        p
    }

    fn with_provenance(mut self, provenance: Vec<Identification>) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn num_flags(&self) -> usize {
        self.block_of.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<FlagId>] {
        &self.blocks
    }

    pub fn block_of(&self, e: FlagId) -> usize {
        self.block_of[e]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block_of
    }

    pub fn provenance(&self) -> &[Identification] {
        &self.provenance
    }

    pub fn same_block(&self, a: FlagId, b: FlagId) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.block_of.len()
    }

    /// Finest partition coarser than both.
    pub fn join(&self, other: &FlagPartition) -> FlagPartition {
        assert_eq!(self.num_flags(), other.num_flags(), "partitions of different flag sets");
        let mut uf = UnionFind::new(self.num_flags());
        for p in [self, other] {
            for block in &p.blocks {
                for &y in &block[1..] {
                    uf.union(block[0], y);
                }
            }
        }
        let mut provenance = self.provenance.clone();
        provenance.extend(other.provenance.iter().copied());
        Self::from_labels(&uf.labels()).with_provenance(provenance)
    }

    /// Whether every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &FlagPartition) -> bool {
        self.num_flags() == coarser.num_flags()
            && self.blocks.iter().all(|b| b.iter().all(|&e| coarser.same_block(b[0], e)))
    }

    /// Checks equivariance, metric compatibility with one sign per face
    /// pair, and status compatibility on `s`.
    pub fn check<T: ExactField>(&self, s: &HalfTranslationSurface<T>) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidPartition { reason });
        if self.num_flags() != s.num_flags() {
            return bad("partition and surface have different flag counts".into());
        }
        for block in &self.blocks {
            let x = block[0];
            for &y in &block[1..] {
                if !self.same_block(s.next(x), s.next(y)) || !self.same_block(s.twin(x), s.twin(y)) {
                    return bad(format!("flags {x} and {y} have unrelated neighbours"));
                }
                let Some(sign) = s.vector(x).sign_to(s.vector(y)) else {
                    return bad(format!("flags {x} and {y} carry different vectors"));
                };
                let (fx, fy) = (s.face_from(x), s.face_from(y));
                if fx.len() != fy.len() || fx.iter().zip(&fy).any(|(a, b)| s.vector(*b) != &s.vector(*a).signed(sign)) {
                    return bad(format!("faces of {x} and {y} are not related by one sign"));
                }
                if !statuses_compatible(s, x, y) {
                    return bad(format!("flags {x} and {y} start at incompatible vertices"));
                }
            }
        }
        Ok(())
    }
}

fn statuses_compatible<T: ExactField>(s: &HalfTranslationSurface<T>, a: FlagId, b: FlagId) -> bool {
    let (sa, sb) = (s.status_at(a), s.status_at(b));
    match (sa.is_puncture(), sb.is_puncture()) {
        (true, true) => true,
        (false, false) => sa.resolved_angle(s.angle_multiple_at(a)) == sb.resolved_angle(s.angle_multiple_at(b)),
        _ => false,
    }
}

/// Join of the fiber partitions of two coverings out of the same surface.
pub fn pair_closure<T: ExactField>(p1: &CoveringMap<T>, p2: &CoveringMap<T>) -> Result<FlagPartition> {
    if p1.source() != p2.source() {
        return Err(Error::SourceMismatch);
    }
    Ok(FlagPartition::fibers_of(p1).join(&FlagPartition::fibers_of(p2)))
}

/// Finest equivariant partition containing `x ~ y` with
/// `vector(y) = sign * vector(x)`, or `None` if propagation meets a vector
/// or status contradiction.
pub fn propagate_single_pair<T: ExactField>(
    s: &HalfTranslationSurface<T>,
    x: FlagId,
    y: FlagId,
    sign: i8,
) -> Option<FlagPartition> {
    let n = s.num_flags();
    if x >= n || y >= n {
        return None;
    }
    let mut uf = UnionFind::new(n);
    let mut provenance = Vec::new();
    let mut queue = VecDeque::from([(x, y, sign)]);
    while let Some((a, b, sg)) = queue.pop_front() {
        if s.vector(b) != &s.vector(a).signed(sg) || !statuses_compatible(s, a, b) {
            return None;
        }
        if !uf.union(a, b) {
            continue;
        }
        provenance.push(Identification { x: a, y: b, sign: sg });
        queue.push_back((s.next(a), s.next(b), sg));
        queue.push_back((s.twin(a), s.twin(b), sg * s.gluing_sign(a) * s.gluing_sign(b)));
    }
    Some(FlagPartition::from_labels(&uf.labels()).with_provenance(provenance))
}

/// Cells that a partition folds onto themselves.
pub fn fixed_loci<T: ExactField>(s: &HalfTranslationSurface<T>, part: &FlagPartition) -> Vec<FixedLocus> {
    let mut loci = Vec::new();
    for e in 0..s.num_flags() {
        if e < s.twin(e) && part.same_block(e, s.twin(e)) {
            loci.push(FixedLocus::EdgeMidpoint(e));
        }
    }
    for face in s.faces() {
        let r = face[0];
        if let Some(&partner) = face[1..].iter().find(|&&f| part.same_block(r, f)) {
            loci.push(FixedLocus::FaceCenter { flag: r, partner });
        }
    }
    loci
}

/// Quotient orbifold of `s` by `part`, with the quotient covering.
pub fn quotient_by_partition<T: ExactField>(
    s: &HalfTranslationSurface<T>,
    part: &FlagPartition,
) -> Result<CoveringMap<T>> {
    part.check(s)?;
    let loci = fixed_loci(s, part);
    if !loci.is_empty() {
        return Err(Error::RefinementNeeded(loci));
    }
    let blocks = part.blocks();
    let k = blocks.len();
    let twin: Vec<usize> = blocks.iter().map(|b| part.block_of(s.twin(b[0]))).collect();
    let next: Vec<usize> = blocks.iter().map(|b| part.block_of(s.next(b[0]))).collect();

    let mut vectors: Vec<Option<Vector<T>>> = vec![None; k];
    for start in 0..k {
        if vectors[start].is_some() {
            continue;
        }
        let mut qface = vec![start];
        let mut b = next[start];
        while b != start {
            qface.push(b);
            b = next[b];
        }
        // blocks are ordered by minimum, so the smallest flag of the face
        // is the minimum of its first block
        let m = qface.iter().map(|&b| blocks[b][0]).min().expect("faces are non-empty");
        let gauge = if s.vector(m).is_gauge_positive() { 1 } else { -1 };
        let mut e = m;
        for _ in 0..qface.len() {
            vectors[part.block_of(e)] = Some(s.vector(e).signed(gauge));
            e = s.next(e);
        }
    }
    let vectors: Vec<Vector<T>> = vectors.into_iter().map(|v| v.expect("every block lies on a face")).collect();

    // vertex statuses from the winding of each source vertex
    let mut status: Vec<Option<VertexStatus>> = vec![None; k];
    let mut seen = vec![false; k];
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut b = next[twin[start]];
        while b != start {
            seen[b] = true;
            orbit.push(b);
            b = next[twin[b]];
        }
        let mut chosen: Option<(VertexStatus, FlagId)> = None;
        for &b in &orbit {
            for &e in &blocks[b] {
                let v = s.vertex_of(e);
                let m = s.vertices()[v].len() / orbit.len();
                let st = match s.status(v) {
                    VertexStatus::Puncture => VertexStatus::Puncture,
                    VertexStatus::Filled if m == 1 => VertexStatus::Filled,
                    VertexStatus::Filled => VertexStatus::Orbifold(m as u32),
                    VertexStatus::Orbifold(o) => VertexStatus::Orbifold(o * m as u32),
                };
                match chosen {
                    Some((c, _)) if c != st => return Err(Error::StatusClash { flag: e }),
                    None => chosen = Some((st, e)),
                    _ => {}
                }
            }
        }
        let st = chosen.expect("orbits are non-empty").0;
        for b in orbit {
            status[b] = Some(st);
        }
    }
    let mut quotient = HalfTranslationSurface::from_flag_statuses(twin, next, vectors, status)?;
    if let Some(name) = s.name() {
        quotient = quotient.with_name(format!("{name}/~"));
    }
    quotient.validate()?;
    let map = CoveringMap::new(s.clone(), quotient, part.labels().to_vec());
    map.validate_map()?;
    Ok(map)
}

/// Splits every fixed edge at its midpoint and every fixed face at its
/// centre, and lifts `guide` and each of `others` (all refining `guide`) to
/// the subdivided surface.
pub fn refine_fixed_loci<T: ExactField>(
    s: &HalfTranslationSurface<T>,
    guide: &FlagPartition,
    others: &[&FlagPartition],
) -> Result<(HalfTranslationSurface<T>, FlagPartition, Vec<FlagPartition>)> {
    let mut parts: Vec<FlagPartition> = std::iter::once(guide).chain(others.iter().copied()).cloned().collect();
    if parts.iter().any(|p| !p.refines(guide)) {
        return Err(Error::InvalidPartition { reason: "lifted partitions must refine the guide".into() });
    }
    // edges first, then faces of the edge-split surface
    let mut current = s.clone();
    for phase in 0..2 {
        let guide = &parts[0];
        let mut ed = Editor::new(&current);
        let n = current.num_flags();
        let mut extra: Vec<Vec<FlagId>> = vec![Vec::new(); n];
        if phase == 0 {
            for e in 0..n {
                let t = current.twin(e);
                if e < t && guide.same_block(e, t) {
                    let (e2, t2) = ed.split_edge(e, &T::half())?;
                    extra[e] = vec![e2];
                    extra[t] = vec![t2];
                }
            }
        } else {
            let origin = face_representatives(&current);
            for face in current.faces() {
                let r = face[0];
                let Some(j) = (1..face.len()).find(|&j| guide.same_block(r, face[j])) else {
                    continue;
                };
                let pos = current.face_positions(r);
                let center = (pos[0].clone() + pos[j].clone()).scale(&T::half());
                let spokes = ed.split_face(r, &center, &origin)?;
                for (i, &f) in face.iter().enumerate() {
                    extra[f] = vec![spokes[i].0, spokes[i].1];
                }
            }
        }
        if extra.iter().all(|x| x.is_empty()) {
            continue;
        }
        let refined = ed.finish()?;
        let total = refined.num_flags();
        for p in parts.iter_mut() {
            let mut uf = UnionFind::new(total);
            for block in p.blocks() {
                let x = block[0];
                for &y in &block[1..] {
                    uf.union(x, y);
                    if extra[x].len() != extra[y].len() {
                        return Err(Error::InvalidPartition {
                            reason: format!("flags {x} and {y} are subdivided differently"),
                        });
                    }
                    for (a, b) in extra[x].iter().zip(&extra[y]) {
                        uf.union(*a, *b);
                    }
                }
            }
            let provenance = p.provenance.clone();
            *p = FlagPartition::from_labels(&uf.labels()).with_provenance(provenance);
        }
        current = refined;
    }
    if let Some(name) = s.name() {
        current = current.with_name(name);
    }
    let guide = parts.remove(0);
    Ok((current, guide, parts))
}

/// Default cap on subdivide-and-retry rounds.
pub const DEFAULT_MAX_ROUNDS: usize = 64;

/// Result of [`common_quotient_pair`].
#[derive(Clone, Debug)]
pub struct CommonQuotient<T> {
    /// The common cover, subdivided if fixed points had to be resolved.
    pub cover: HalfTranslationSurface<T>,
    pub closure: FlagPartition,
    /// `cover -> quotient`.
    pub to_quotient: CoveringMap<T>,
    /// `cover -> q_i`, on the subdivided `q_i` when subdivision happened.
    pub lifts: [CoveringMap<T>; 2],
    /// `q_i -> quotient`; `factors[i]` composed with `lifts[i]` is `to_quotient`.
    pub factors: [CoveringMap<T>; 2],
}

impl<T: ExactField> CommonQuotient<T> {
    pub fn quotient(&self) -> &HalfTranslationSurface<T> {
        self.to_quotient.target()
    }
}

fn factor<T: ExactField>(lift: &CoveringMap<T>, to_quotient: &CoveringMap<T>) -> Result<CoveringMap<T>> {
    let fibers = lift.fibers();
    let phi = fibers.iter().map(|f| to_quotient.image(f[0])).collect();
    let map = CoveringMap::new(lift.target().clone(), to_quotient.target().clone(), phi);
    map.validate_map()?;
    Ok(map)
}

/// Common quotient of `q1 = p1.target()` and `q2 = p2.target()` through the
/// joint fibers of `p1` and `p2`.
pub fn common_quotient_pair<T: ExactField>(p1: &CoveringMap<T>, p2: &CoveringMap<T>) -> Result<CommonQuotient<T>> {
    p1.validate()?;
    p2.validate()?;
    let mut closure = pair_closure(p1, p2)?;
    let mut cover = p1.source().clone();
    let mut fibers = [FlagPartition::fibers_of(p1), FlagPartition::fibers_of(p2)];
    let mut lifts = [p1.clone(), p2.clone()];
    for _ in 0..DEFAULT_MAX_ROUNDS {
        match quotient_by_partition(&cover, &closure) {
            Ok(to_quotient) => {
                let factors = [factor(&lifts[0], &to_quotient)?, factor(&lifts[1], &to_quotient)?];
                return Ok(CommonQuotient { cover, closure, to_quotient, lifts, factors });
            }
            Err(Error::RefinementNeeded(_)) => {
                let (refined, guide, mut lifted) = refine_fixed_loci(&cover, &closure, &[&fibers[0], &fibers[1]])?;
                let f2 = lifted.pop().expect("two lifted partitions");
                let f1 = lifted.pop().expect("two lifted partitions");
                lifts = [quotient_by_partition(&refined, &f1)?, quotient_by_partition(&refined, &f2)?];
                fibers = [f1, f2];
                cover = refined;
                closure = guide;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::IterationLimitExceeded { rounds: DEFAULT_MAX_ROUNDS })
}

/// A seed `(x, y, sign)` for [`propagate_single_pair`].
pub type Seed = (FlagId, FlagId, i8);

/// All seeds in their default order.
pub fn default_seeds(n: usize) -> Vec<Seed> {
    let mut seeds = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in x + 1..n {
            seeds.push((x, y, 1));
            seeds.push((x, y, -1));
        }
    }
    seeds
}

/// Coarsest valid partition of `s`: the join of every successful single
/// pair propagation, taken in the order given by `seeds`.
pub fn maximal_partition<T: ExactField>(s: &HalfTranslationSurface<T>, seeds: &[Seed]) -> FlagPartition {
    let mut acc = FlagPartition::discrete(s.num_flags());
    for &(x, y, sign) in seeds {
        if acc.same_block(x, y) {
            continue;
        }
        if let Some(p) = propagate_single_pair(s, x, y, sign) {
            acc = acc.join(&p);
        }
    }
    acc
}

/// Result of [`maximal_quotient`].
#[derive(Clone, Debug)]
pub struct MaximalQuotient<T> {
    /// The input, subdivided at the fixed points that became orbifold points.
    pub refined: HalfTranslationSurface<T>,
    pub partition: FlagPartition,
    /// `refined -> minimal element`.
    pub map: CoveringMap<T>,
    pub rounds: usize,
}

impl<T: ExactField> MaximalQuotient<T> {
    pub fn quotient(&self) -> &HalfTranslationSurface<T> {
        self.map.target()
    }
}

/// Minimal element of the commensurability class of `q`.
pub fn maximal_quotient<T: ExactField>(q: &HalfTranslationSurface<T>) -> Result<MaximalQuotient<T>> {
    maximal_quotient_with(q, DEFAULT_MAX_ROUNDS, |_| {})
}

/// [`maximal_quotient`] with a round cap and a hook that may reorder the
/// seeds of every round.
pub fn maximal_quotient_with<T: ExactField>(
    q: &HalfTranslationSurface<T>,
    max_rounds: usize,
    mut reorder: impl FnMut(&mut Vec<Seed>),
) -> Result<MaximalQuotient<T>> {
    q.require_type_condition()?;
    let mut surface = q.clone();
    for round in 0..max_rounds {
        let mut seeds = default_seeds(surface.num_flags());
        reorder(&mut seeds);
        let partition = maximal_partition(&surface, &seeds);
        match quotient_by_partition(&surface, &partition) {
            Ok(map) => {
                return Ok(MaximalQuotient { refined: surface, partition, map, rounds: round });
            }
            Err(Error::RefinementNeeded(_)) => {
                surface = refine_fixed_loci(&surface, &partition, &[])?.0;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::IterationLimitExceeded { rounds: max_rounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{construct_cover, MonodromySpec};
    use crate::isomorphy::{are_conjugate, canonical_form, delaunay_complex};
    use crate::{fixtures, Rational};

    fn translation_cover() -> CoveringMap<Rational> {
        let t = fixtures::t1p::<Rational>();
        construct_cover(&t, &MonodromySpec::trivial(2).with(1, vec![1, 0])).unwrap().pop().unwrap()
    }

    fn assert_pillowcase(q: &HalfTranslationSurface<Rational>) {
        let r = q.validate().unwrap();
        assert_eq!(r.genus, 0);
        assert_eq!(r.area, Rational::half());
        assert_eq!(r.punctures, 1);
        let mut st: Vec<_> = q.statuses().to_vec();
        st.sort_by_key(|s| format!("{s:?}"));
        assert_eq!(st.iter().filter(|s| **s == VertexStatus::Orbifold(2)).count(), 3);
        assert!(q.cone_angle_multiples().iter().all(|&a| a == 1));
        assert_eq!(q.orbifold_euler_characteristic(), Rational::frac(-1, 2));
    }

    #[test]
    fn single_pair_basics() {
        let t = fixtures::t1p::<Rational>();
        assert!(propagate_single_pair(&t, 0, 0, 1).unwrap().is_discrete());
        // bottom against top, reversed: the half-turn
        let p = propagate_single_pair(&t, 0, 3, -1).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 3], vec![1, 4], vec![2, 5]]);
        // bottom against right: different lengths? same length, wrong direction
        assert!(propagate_single_pair(&t, 0, 1, 1).is_none());
        let l = fixtures::l3p::<Rational>();
        assert!(propagate_single_pair(&l, 0, 2, 1).is_none());
    }

    #[test]
    fn half_turn_needs_midpoints() {
        let t = fixtures::t1p::<Rational>();
        let p = propagate_single_pair(&t, 0, 3, -1).unwrap();
        match quotient_by_partition(&t, &p) {
            Err(Error::RefinementNeeded(loci)) => assert_eq!(loci.len(), 3),
            other => panic!("{other:?}"),
        }
        let (r, lifted, _) = refine_fixed_loci(&t, &p, &[]).unwrap();
        assert_eq!(r, fixtures::t1p_half_periods());
        let map = quotient_by_partition(&r, &lifted).unwrap();
        assert_pillowcase(map.target());
        assert_eq!(map.degree(), 2);
    }

    #[test]
    fn quotient_examples() {
        let t = fixtures::t2x1p::<Rational>();
        let id = quotient_by_partition(&t, &FlagPartition::discrete(t.num_flags())).unwrap();
        assert_eq!(id.degree(), 1);
        assert!(id.target().same_combinatorics(&t));
        assert!(are_conjugate(id.target(), &t).is_some());
        let p = translation_cover();
        let q = quotient_by_partition(p.source(), &FlagPartition::fibers_of(&p)).unwrap();
        assert_eq!(q.degree(), 2);
        assert!(are_conjugate(q.target(), p.target()).is_some());
    }

    #[test]
    fn minimal_element_of_torus() {
        let t = fixtures::t1p::<Rational>();
        let m = maximal_quotient(&t).unwrap();
        assert_pillowcase(m.quotient());
        assert_eq!(m.map.degree(), 2);
        assert_eq!(m.rounds, 1);
        let again = maximal_quotient(m.quotient()).unwrap();
        assert_eq!(again.map.degree(), 1);
        assert!(are_conjugate(m.quotient(), &fixtures::pillowcase()).is_some());
    }

    #[test]
    fn minimal_element_of_two_square_torus() {
        let m = maximal_quotient(&fixtures::t2x1p::<Rational>()).unwrap();
        assert_eq!(m.map.degree(), 4);
        assert_eq!(canonical_form(m.quotient()).encoding, canonical_form(&fixtures::pillowcase::<Rational>()).encoding);
    }

    #[test]
    fn face_centre_refinement() {
        // the single square cell of the torus is folded by the half-turn
        let d = delaunay_complex(&fixtures::t1p::<Rational>());
        let m = maximal_quotient(&d).unwrap();
        assert_pillowcase(m.quotient());
        assert!(m.refined.statuses().iter().filter(|s| **s == VertexStatus::Filled).count() >= 3);
    }

    #[test]
    fn closed_torus_is_rejected() {
        let t = fixtures::t1p::<Rational>();
        let closed = HalfTranslationSurface::new(
            t.twins().to_vec(),
            t.nexts().to_vec(),
            t.vectors().to_vec(),
            &[(0, VertexStatus::Filled)],
        )
        .unwrap();
        assert!(matches!(maximal_quotient(&closed), Err(Error::TypeConditionViolated { .. })));
    }

    #[test]
    fn pair_closure_examples() {
        let p = translation_cover();
        let f = FlagPartition::fibers_of(&p);
        assert_eq!(pair_closure(&p, &p).unwrap(), f);
        // deck translation: swap the two squares
        let deck: Vec<FlagId> = (0..12).map(|e| (e + 6) % 12).collect();
        let deck = CoveringMap::new(p.source().clone(), p.source().clone(), deck);
        deck.validate().unwrap();
        let p2 = deck.then(&p).unwrap();
        assert_eq!(pair_closure(&p, &p2).unwrap(), f);
        let other = construct_cover(&fixtures::t1p::<Rational>(), &MonodromySpec::trivial(2).with(0, vec![1, 0]))
            .unwrap()
            .pop()
            .unwrap();
        assert_eq!(pair_closure(&p, &other), Err(Error::SourceMismatch));
    }

    #[test]
    fn common_quotient_examples() {
        let t = fixtures::t1p::<Rational>();
        let id = CoveringMap::identity(&t);
        let c = common_quotient_pair(&id, &id).unwrap();
        assert!(are_conjugate(c.quotient(), &t).is_some());
        assert!(c.factors.iter().all(|f| f.degree() == 1));

        let p = translation_cover();
        let c = common_quotient_pair(&CoveringMap::identity(p.source()), &p).unwrap();
        assert!(are_conjugate(c.quotient(), &t).is_some());
        assert_eq!(c.factors[0].degree(), 2);
        assert_eq!(c.factors[1].degree(), 1);
    }

    #[test]
    fn common_quotient_with_fixed_points() {
        // a degree-2 cover of the pillowcase and its half-turn partner
        let half = fixtures::t1p_half_periods::<Rational>();
        let p = crate::covering::find_coverings(&half, &fixtures::pillowcase()).pop().unwrap();
        let c = common_quotient_pair(&p, &p).unwrap();
        assert_eq!(c.to_quotient.degree(), 2);
        for i in 0..2 {
            let composed = c.lifts[i].then(&c.factors[i]).unwrap();
            assert_eq!(composed.phi(), c.to_quotient.phi());
        }
    }

    #[test]
    fn partition_check_rejects_bad_blocks() {
        let t = fixtures::t1p::<Rational>();
        let p = FlagPartition::from_blocks(6, &[vec![0, 1], vec![2], vec![3], vec![4], vec![5]]).unwrap();
        assert!(matches!(p.check(&t), Err(Error::InvalidPartition { .. })));
        assert!(FlagPartition::from_blocks(6, &[vec![0, 1]]).is_err());
    }
}
