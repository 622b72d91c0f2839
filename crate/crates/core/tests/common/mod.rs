//! Independent oracles and property checks shared by the integration tests
//! and the acceptance target. The oracles only use plain vectors, so they
//! do not depend on the library's permutation or search code.

#![allow(dead_code)]

pub mod criteria;
pub mod props;

use std::collections::{BTreeMap, HashMap, VecDeque};

/// Order of the group generated by 0-indexed image vectors, by listing
/// every element.
pub fn closure_order(gens: &[Vec<usize>]) -> usize {
    let d = gens[0].len();
    let id: Vec<usize> = (0..d).collect();
    let mut seen = std::collections::HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h: Vec<usize> = g.iter().map(|&p| s[p]).collect();
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen.len()
}

/// Every fixed-point-free involution on `0..d`, as image vectors.
pub fn fpf_involutions(d: usize) -> Vec<Vec<usize>> {
    fn rec(x: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(p) = x.iter().position(|&v| v == usize::MAX) else {
            out.push(x.clone());
            return;
        };
        for q in p + 1..x.len() {
            if x[q] == usize::MAX {
                x[p] = q;
                x[q] = p;
                rec(x, out);
                x[p] = usize::MAX;
                x[q] = usize::MAX;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![usize::MAX; d], &mut out);
    out
}

/// `(0,1,2)(3,4,5)...`
pub fn canonical_y(d: usize) -> Vec<usize> {
    (0..d)
        .map(|p| if p % 3 == 2 { p - 2 } else { p + 1 })
        .collect()
}

pub fn transitive(gens: &[&[usize]]) -> bool {
    let d = gens[0].len();
    let mut seen = vec![false; d];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(p) = stack.pop() {
        for g in gens {
            let q = g[p];
            if !seen[q] {
                seen[q] = true;
                count += 1;
                stack.push(q);
            }
        }
    }
    count == d
}

/// Cycle lengths of `p -> x(y(p))`, descending.
pub fn cusp_type(x: &[usize], y: &[usize]) -> Vec<usize> {
    let d = x.len();
    let mut seen = vec![false; d];
    let mut parts = Vec::new();
    for s in 0..d {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut p = s;
        while !seen[p] {
            seen[p] = true;
            len += 1;
            p = x[y[p]];
        }
        parts.push(len);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Transitive involutions against the canonical `y`, grouped by cusp type.
pub fn oracle_census(d: usize) -> BTreeMap<Vec<usize>, Vec<Vec<usize>>> {
    let y = canonical_y(d);
    let mut out: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
    for x in fpf_involutions(d) {
        if transitive(&[&x, &y]) {
            out.entry(cusp_type(&x, &y)).or_default().push(x);
        }
    }
    out
}

/// Number of orbits of the centralizer of the canonical `y` acting by
/// conjugation on `xs` (which must be closed under that action).
pub fn centralizer_orbits(xs: &[Vec<usize>]) -> usize {
    let d = xs[0].len();
    let t = d / 3;
    let mut gens: Vec<Vec<usize>> = Vec::new();
    // rotate triangle 0
    gens.push(
        (0..d)
            .map(|p| if p < 3 { (p + 1) % 3 } else { p })
            .collect(),
    );
    if t > 1 {
        // swap triangles 0 and 1
        gens.push(
            (0..d)
                .map(|p| match p / 3 {
                    0 => p + 3,
                    1 => p - 3,
                    _ => p,
                })
                .collect(),
        );
        // cycle all triangles
        gens.push((0..d).map(|p| (p + 3) % d).collect());
    }
    let index: HashMap<&Vec<usize>, usize> = xs.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut parent: Vec<usize> = (0..xs.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, x) in xs.iter().enumerate() {
        for g in &gens {
            // g^-1 x g as a relabelling: p -> g(p)
            let mut h = vec![0; d];
            for p in 0..d {
                h[g[p]] = g[x[p]];
            }
            let j = index[&h];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    (0..xs.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Partitions of `n` into exactly `k` parts, by filtering all
/// nonincreasing sequences.
pub fn oracle_partitions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in 1..=max.min(n) {
            prefix.push(p);
            rec(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.retain(|p| p.len() == k);
    out
}
