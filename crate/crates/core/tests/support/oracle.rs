//! Brute-force enumeration of valid flag partitions.
//!
//! Restricted-growth strings over the flags in breadth-first order, pruned
//! by vector, status and partial equivariance checks. Shares no code with
//! the propagation engine.

use qdc_core::{ExactField, FlagId, HalfTranslationSurface, VertexStatus};

fn resolved<T: ExactField>(s: &HalfTranslationSurface<T>, e: FlagId) -> Option<u64> {
    let a = s.angle_multiple_at(e) as u64;
    match s.status_at(e) {
        VertexStatus::Puncture => None,
        VertexStatus::Filled => Some(a),
        VertexStatus::Orbifold(n) => Some(a * n as u64),
    }
}

fn pair_ok<T: ExactField>(s: &HalfTranslationSurface<T>, a: FlagId, b: FlagId) -> bool {
    let (va, vb) = (s.vector(a), s.vector(b));
    (va == vb || &-va.clone() == vb)
        && resolved(s, a) == resolved(s, b)
        && s.status_at(a).is_puncture() == s.status_at(b).is_puncture()
}

struct Search<'a, T> {
    s: &'a HalfTranslationSurface<T>,
    order: Vec<FlagId>,
    label: Vec<usize>,
    out: Vec<Vec<usize>>,
    nodes: u64,
}

impl<'a, T: ExactField> Search<'a, T> {
    fn gens(&self, e: FlagId) -> [FlagId; 2] {
        [self.s.next(e), self.s.twin(e)]
    }

    fn consistent(&self, x: FlagId) -> bool {
        let n = self.label.len();
        let lx = self.label[x];
        let unset = usize::MAX;
        for y in 0..n {
            if y == x || self.label[y] != lx {
                continue;
            }
            if !pair_ok(self.s, x, y) {
                return false;
            }
            for (gx, gy) in self.gens(x).into_iter().zip(self.gens(y)) {
                if self.label[gx] != unset && self.label[gy] != unset && self.label[gx] != self.label[gy] {
                    return false;
                }
            }
        }
        // x as the image of an assigned flag u under a generator
        for u in 0..n {
            if self.label[u] == unset {
                continue;
            }
            for g in 0..2 {
                if self.gens(u)[g] != x {
                    continue;
                }
                for v in 0..n {
                    if v == u || self.label[v] != self.label[u] {
                        continue;
                    }
                    let gv = self.gens(v)[g];
                    if self.label[gv] != unset && self.label[gv] != lx {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize, blocks: usize) {
        self.nodes += 1;
        if k == self.order.len() {
            if full_check(self.s, &self.label) {
                self.out.push(self.label.clone());
            }
            return;
        }
        let x = self.order[k];
        for b in 0..=blocks {
            self.label[x] = b;
            if self.consistent(x) {
                self.run(k + 1, blocks.max(b + 1));
            }
        }
        self.label[x] = usize::MAX;
    }
}

fn full_check<T: ExactField>(s: &HalfTranslationSurface<T>, label: &[usize]) -> bool {
    let n = label.len();
    for x in 0..n {
        for y in 0..n {
            if x == y || label[x] != label[y] {
                continue;
            }
            if label[s.next(x)] != label[s.next(y)] || label[s.twin(x)] != label[s.twin(y)] || !pair_ok(s, x, y) {
                return false;
            }
            // one sign for the whole face
            let sign_pos = s.vector(x) == s.vector(y);
            let (mut a, mut b) = (s.next(x), s.next(y));
            while a != x {
                if (s.vector(a) == s.vector(b)) != sign_pos {
                    return false;
                }
                a = s.next(a);
                b = s.next(b);
            }
        }
    }
    true
}

/// Every valid partition, as restricted-growth label vectors indexed by flag.
pub fn valid_partitions<T: ExactField>(s: &HalfTranslationSurface<T>) -> (Vec<Vec<usize>>, u64) {
    let n = s.num_flags();
    let mut order = vec![0];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let e = order[i];
        for f in [s.next(e), s.twin(e)] {
            if !seen[f] {
                seen[f] = true;
                order.push(f);
            }
        }
        i += 1;
    }
    assert_eq!(order.len(), n, "surface must be connected");
    let mut search = Search { s, order, label: vec![usize::MAX; n], out: Vec::new(), nodes: 0 };
    search.run(0, 0);
    (search.out, search.nodes)
}

/// Blocks of a label vector, sorted canonically.
pub fn blocks_of(label: &[usize]) -> Vec<Vec<FlagId>> {
    let mut map = std::collections::BTreeMap::<usize, Vec<FlagId>>::new();
    for (e, &l) in label.iter().enumerate() {
        map.entry(l).or_default().push(e);
    }
    let mut blocks: Vec<_> = map.into_values().collect();
    blocks.sort();
    blocks
}

/// The valid partition that every other valid partition refines.
pub fn coarsest<T: ExactField>(s: &HalfTranslationSurface<T>) -> Vec<Vec<FlagId>> {
    let (all, _) = valid_partitions(s);
    let fewest =
        all.iter().min_by_key(|l| l.iter().max().copied().unwrap_or(0)).expect("the discrete partition is valid");
    for other in &all {
        for x in 0..other.len() {
            for y in 0..other.len() {
                if other[x] == other[y] {
                    assert_eq!(fewest[x], fewest[y], "no coarsest valid partition");
                }
            }
        }
    }
    blocks_of(fewest)
}
