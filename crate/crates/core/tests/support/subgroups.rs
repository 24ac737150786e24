//! Counts conjugacy classes of finite-index subgroups of the free group of
//! rank two, as transitive permutation pairs up to simultaneous conjugation.

use std::collections::BTreeSet;

fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..d {
        let mut next = Vec::new();
        for p in &out {
            for pos in 0..=k {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn transitive(a: &[usize], b: &[usize]) -> bool {
    let mut seen = vec![false; a.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in [a[i], b[i]] {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn conj(g: &[usize], p: &[usize]) -> Vec<usize> {
    // g p g^-1
    let mut out = vec![0; p.len()];
    for i in 0..p.len() {
        out[g[i]] = g[p[i]];
    }
    out
}

pub fn index_classes(d: usize) -> usize {
    let perms = permutations(d);
    let mut classes = BTreeSet::new();
    for a in &perms {
        for b in &perms {
            if !transitive(a, b) {
                continue;
            }
            let rep = perms.iter().map(|g| (conj(g, a), conj(g, b))).min().unwrap();
            classes.insert(rep);
        }
    }
    classes.len()
}
