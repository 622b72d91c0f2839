//! Census of clean trivalent constellations with prescribed cusp widths.
//!
//! The order-3 side is fixed as `(1,2,3)(4,5,6)...` and the involution is
//! built by backtracking. Each step extends the cusp cycle through the
//! lowest point that is not yet on a closed cycle, so closed cycles can be
//! matched against the target partition as soon as they appear. With
//! symmetry reduction on, a new triangle is only ever entered at the first
//! point of the first untouched triangle: any other choice is conjugate to
//! that one under the centralizer of the order-3 permutation.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::dessin::{ramification, Constellation, DessinError};
use crate::perm::{is_transitive, Partition, Permutation};

const NONE: usize = usize::MAX;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("degree {0} is not a positive multiple of 6")]
    Degree(usize),
    #[error("target partition sums to {total}, expected {degree}")]
    Total { total: usize, degree: usize },
    #[error("census file {path}:{line}: {message}")]
    Census {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("i/o on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Dessin(#[from] DessinError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SearchError + '_ {
    move |source| SearchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// All partitions of `n` into exactly `k` positive parts, each stored in
/// descending order, listed in decreasing lexicographic order.
pub fn partitions_exact(n: usize, k: usize) -> Vec<Partition> {
    fn rec(n: usize, k: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if k == 0 {
            if n == 0 {
                out.push(Partition::new(prefix.clone()));
            }
            return;
        }
        if n < k {
            return;
        }
        let top = max.min(n - (k - 1));
        for part in (1..=top).rev() {
            if part * k < n {
                break;
            }
            prefix.push(part);
            rec(n - part, k - 1, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k >= 1 && n >= k {
        rec(n, k, n, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Quotient by the centralizer of the order-3 permutation.
    pub symmetry_reduction: bool,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            symmetry_reduction: true,
            node_budget: None,
            time_budget: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusTask {
    pub degree: usize,
    pub target_cusps: Partition,
    pub options: SearchOptions,
}

impl CensusTask {
    pub fn new(target_cusps: Partition) -> Self {
        CensusTask {
            degree: target_cusps.total(),
            target_cusps,
            options: SearchOptions::default(),
        }
    }

    pub fn with_options(mut self, options: SearchOptions) -> Self {
        self.options = options;
        self
    }

    fn check(&self) -> Result<(), SearchError> {
        if self.degree == 0 || !self.degree.is_multiple_of(6) {
            return Err(SearchError::Degree(self.degree));
        }
        if self.target_cusps.total() != self.degree {
            return Err(SearchError::Total {
                total: self.target_cusps.total(),
                degree: self.degree,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusResult {
    pub realizable: bool,
    pub witness: Option<Constellation>,
    pub nodes_explored: u64,
    /// The pruned space was fully covered.
    pub exhausted: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Realizable,
    NotRealizable,
    Unknown,
}

impl CensusResult {
    pub fn status(&self) -> Status {
        if self.realizable {
            Status::Realizable
        } else if self.exhausted {
            Status::NotRealizable
        } else {
            Status::Unknown
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Realizable => "yes",
            Status::NotRealizable => "no",
            Status::Unknown => "unknown",
        })
    }
}

/// The fixed order-3 side as 0-indexed images.
fn y_images(d: usize) -> Vec<usize> {
    (0..d).map(|p| 3 * (p / 3) + (p + 1) % 3).collect()
}

fn y_of(p: usize) -> usize {
    3 * (p / 3) + (p + 1) % 3
}

fn y_inv(p: usize) -> usize {
    3 * (p / 3) + (p + 2) % 3
}

/// Builds the constellation with the canonical order-3 side and the given
/// 0-indexed involution.
pub fn constellation_from_involution(x: &[usize]) -> Result<Constellation, DessinError> {
    let d = x.len();
    let x = Permutation::from_images0(x.to_vec())?;
    let y = Permutation::from_images0(y_images(d))?;
    Constellation::from_generators(x, y)
}

enum Visit {
    Continue,
    Stop,
}

struct Searcher<'a> {
    d: usize,
    symmetric: bool,
    x: Vec<usize>,
    closed: Vec<bool>,
    /// Remaining multiplicity of each cusp width.
    remaining: Vec<usize>,
    /// Number of touched triangles.
    touched: usize,
    nodes: u64,
    budget: Option<u64>,
    deadline: Option<Instant>,
    out_of_budget: bool,
    on_leaf: &'a mut dyn FnMut(&[usize]) -> Visit,
}

impl<'a> Searcher<'a> {
    fn new(task: &CensusTask, on_leaf: &'a mut dyn FnMut(&[usize]) -> Visit) -> Self {
        let d = task.degree;
        let mut remaining = vec![0; d + 1];
        for &p in task.target_cusps.parts() {
            remaining[p] += 1;
        }
        let symmetric = task.options.symmetry_reduction;
        Searcher {
            d,
            symmetric,
            x: vec![NONE; d],
            closed: vec![false; d],
            remaining,
            touched: if symmetric { 1 } else { d / 3 },
            nodes: 0,
            budget: task.options.node_budget,
            deadline: task.options.time_budget.map(|t| Instant::now() + t),
            out_of_budget: false,
            on_leaf,
        }
    }

    fn cusp_next(&self, r: usize) -> usize {
        self.x[y_of(r)]
    }

    fn cusp_prev(&self, r: usize) -> usize {
        match self.x[r] {
            NONE => NONE,
            q => y_inv(q),
        }
    }

    fn max_remaining(&self) -> usize {
        (1..=self.d)
            .rev()
            .find(|&w| self.remaining[w] > 0)
            .unwrap_or(0)
    }

    /// Point whose involution image extends the open cusp path through the
    /// lowest touched point not on a closed cycle.
    fn select(&self) -> Option<usize> {
        let limit = 3 * self.touched;
        let s = (0..limit).find(|&p| !self.closed[p])?;
        let mut r = s;
        loop {
            let py = y_of(r);
            if self.x[py] == NONE {
                return Some(py);
            }
            r = self.x[py];
        }
    }

    /// Examines the cusp path through `a` after a new pairing. Closed
    /// cycles consume a width; open paths must fit in the widest remaining
    /// width. Records what it changed in `undo`.
    fn absorb(&mut self, a: usize, undo: &mut Vec<(usize, Vec<usize>)>) -> bool {
        if self.closed[a] {
            return true;
        }
        let mut members = vec![a];
        let mut r = self.cusp_next(a);
        while r != NONE && r != a {
            members.push(r);
            r = self.cusp_next(r);
        }
        if r == a {
            let w = members.len();
            if self.remaining[w] == 0 {
                return false;
            }
            self.remaining[w] -= 1;
            for &m in &members {
                self.closed[m] = true;
            }
            undo.push((w, members));
            return true;
        }
        let mut len = members.len();
        let mut r = self.cusp_prev(a);
        while r != NONE {
            len += 1;
            r = self.cusp_prev(r);
        }
        len <= self.max_remaining()
    }

    fn rollback(&mut self, undo: Vec<(usize, Vec<usize>)>) {
        for (w, members) in undo {
            self.remaining[w] += 1;
            for m in members {
                self.closed[m] = false;
            }
        }
    }

    fn budget_hit(&mut self) -> bool {
        if self.out_of_budget {
            return true;
        }
        if self.budget.is_some_and(|b| self.nodes >= b) {
            self.out_of_budget = true;
        }
        if self.nodes.is_multiple_of(4096) && self.deadline.is_some_and(|t| Instant::now() >= t) {
            self.out_of_budget = true;
        }
        self.out_of_budget
    }

    fn leaf(&mut self) -> Visit {
        if !self.symmetric {
            let x = Permutation::from_images0(self.x.clone()).expect("involution");
            let y = Permutation::from_images0(y_images(self.d)).expect("3-cycles");
            if !is_transitive(&[x, y], self.d).expect("same degree") {
                return Visit::Continue;
            }
        }
        (self.on_leaf)(&self.x)
    }

    fn dfs(&mut self) -> Visit {
        self.nodes += 1;
        if self.budget_hit() {
            return Visit::Stop;
        }
        let Some(p) = self.select() else {
            if 3 * self.touched == self.d {
                return self.leaf();
            }
            return Visit::Continue;
        };
        let limit = 3 * self.touched;
        let fresh = self.symmetric && limit < self.d;
        let candidates: Vec<usize> = (0..limit)
            .filter(|&q| q != p && self.x[q] == NONE)
            .chain(fresh.then_some(limit))
            .collect();
        for q in candidates {
            let opens = q == limit;
            if opens {
                self.touched += 1;
            }
            self.x[p] = q;
            self.x[q] = p;
            let mut undo = Vec::new();
            let ok = self.absorb(p, &mut undo) && self.absorb(q, &mut undo);
            let verdict = if ok { self.dfs() } else { Visit::Continue };
            self.rollback(undo);
            self.x[p] = NONE;
            self.x[q] = NONE;
            if opens {
                self.touched -= 1;
            }
            if let Visit::Stop = verdict {
                return Visit::Stop;
            }
        }
        Visit::Continue
    }
}

/// Decides whether some clean trivalent transitive constellation of the
/// task's degree has the target cusp widths.
pub fn find_triple(task: &CensusTask) -> Result<CensusResult, SearchError> {
    task.check()?;
    let mut found: Option<Vec<usize>> = None;
    let mut on_leaf = |x: &[usize]| {
        found = Some(x.to_vec());
        Visit::Stop
    };
    let (nodes, out_of_budget) = {
        let mut s = Searcher::new(task, &mut on_leaf);
        s.dfs();
        (s.nodes, s.out_of_budget)
    };
    match found {
        Some(x) => {
            let witness = constellation_from_involution(&x)?;
            debug_assert_eq!(ramification(&witness).cusps, task.target_cusps);
            Ok(CensusResult {
                realizable: true,
                witness: Some(witness),
                nodes_explored: nodes,
                exhausted: false,
            })
        }
        None => Ok(CensusResult {
            realizable: false,
            witness: None,
            nodes_explored: nodes,
            exhausted: !out_of_budget,
        }),
    }
}

/// Relabelling-invariant form of an involution against the canonical
/// order-3 side: the least image vector over all choices of basepoint,
/// where triangles are numbered in order of discovery.
pub fn canonical_form(x: &[usize]) -> Vec<usize> {
    let d = x.len();
    let mut best: Option<Vec<usize>> = None;
    let mut label = vec![NONE; d];
    let mut order = Vec::with_capacity(d);
    for base in 0..d {
        label.iter_mut().for_each(|l| *l = NONE);
        order.clear();
        let mut next = 0;
        let mut enter = |p: usize, label: &mut Vec<usize>, order: &mut Vec<usize>| {
            let mut r = p;
            for _ in 0..3 {
                label[r] = next;
                order.push(r);
                next += 1;
                r = y_of(r);
            }
        };
        enter(base, &mut label, &mut order);
        let mut i = 0;
        while i < order.len() {
            let q = x[order[i]];
            if label[q] == NONE {
                enter(q, &mut label, &mut order);
            }
            i += 1;
        }
        if order.len() < d {
            return x.to_vec();
        }
        let mut img = vec![0; d];
        for p in 0..d {
            img[label[p]] = label[x[p]];
        }
        if best.as_ref().is_none_or(|b| img < *b) {
            best = Some(img);
        }
    }
    best.unwrap_or_default()
}

/// The orientation-reversed involution, relabelled so that the order-3
/// side is canonical again.
pub fn mirror_involution(x: &[usize]) -> Vec<usize> {
    let tau = |p: usize| match p % 3 {
        1 => p + 1,
        2 => p - 1,
        _ => p,
    };
    (0..x.len()).map(|p| tau(x[tau(p)])).collect()
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    /// Representatives up to simultaneous conjugacy.
    pub oriented: Vec<Constellation>,
    /// Number of classes once mirror images are identified.
    pub up_to_reflection: usize,
    pub truncated: bool,
    pub nodes_explored: u64,
}

/// Distinct realizations up to simultaneous conjugacy, at most `limit`.
pub fn enumerate_triples(task: &CensusTask, limit: usize) -> Result<Enumeration, SearchError> {
    task.check()?;
    let mut forms: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut truncated = false;
    let mut on_leaf = |x: &[usize]| {
        forms.insert(canonical_form(x));
        if forms.len() > limit {
            truncated = true;
            Visit::Stop
        } else {
            Visit::Continue
        }
    };
    let (nodes, out_of_budget) = {
        let mut s = Searcher::new(task, &mut on_leaf);
        s.dfs();
        (s.nodes, s.out_of_budget)
    };
    let forms: Vec<Vec<usize>> = forms.into_iter().take(limit).collect();
    let mut reflection_classes = BTreeSet::new();
    for f in &forms {
        let m = canonical_form(&mirror_involution(f));
        reflection_classes.insert(f.clone().min(m));
    }
    let oriented = forms
        .iter()
        .map(|x| constellation_from_involution(x))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Enumeration {
        oriented,
        up_to_reflection: reflection_classes.len(),
        truncated: truncated || out_of_budget,
        nodes_explored: nodes,
    })
}

#[derive(Clone, Debug)]
pub struct CensusRow {
    pub partition: Partition,
    pub status: Status,
    pub witness: Option<Constellation>,
    pub witness_file: Option<String>,
    pub nodes: u64,
    pub wall_time: Duration,
}

#[derive(Clone, Debug)]
pub struct CensusTable {
    pub degree: usize,
    pub parts: usize,
    pub rows: Vec<CensusRow>,
}

impl CensusTable {
    pub fn realizable(&self) -> Vec<&Partition> {
        self.rows
            .iter()
            .filter(|r| r.status == Status::Realizable)
            .map(|r| &r.partition)
            .collect()
    }

    pub fn count(&self, status: Status) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    pub fn summary(&self) -> String {
        format!(
            "{} partitions, {} realizable",
            self.rows.len(),
            self.count(Status::Realizable)
        )
    }
}

/// File name used for a partition's witness, e.g. `4-4-4-4-4-4.txt`.
pub fn witness_file_name(p: &Partition) -> String {
    let s: Vec<String> = p.parts().iter().map(|x| x.to_string()).collect();
    format!("{}.txt", s.join("-"))
}

fn format_row(row: &CensusRow) -> String {
    format!(
        "{} | {} | {} | {} | {:.3}",
        row.partition,
        row.status,
        row.witness_file.as_deref().unwrap_or("-"),
        row.nodes,
        row.wall_time.as_secs_f64()
    )
}

pub const CENSUS_FILE: &str = "census.txt";
pub const WITNESS_DIR: &str = "witnesses";

/// Reads a census file, re-validating every referenced witness.
pub fn read_census(dir: &Path) -> Result<Vec<CensusRow>, SearchError> {
    let path = dir.join(CENSUS_FILE);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: &str| SearchError::Census {
            path: path.clone(),
            line: i + 1,
            message: message.to_string(),
        };
        let f: Vec<&str> = line.split('|').map(str::trim).collect();
        if f.len() != 5 {
            return Err(bad("expected 5 fields"));
        }
        let partition: Partition = f[0].parse().map_err(|_| bad("bad partition"))?;
        let status = match f[1] {
            "yes" => Status::Realizable,
            "no" => Status::NotRealizable,
            "unknown" => Status::Unknown,
            _ => return Err(bad("bad status")),
        };
        let nodes = f[3].parse().map_err(|_| bad("bad node count"))?;
        let secs: f64 = f[4].parse().map_err(|_| bad("bad wall time"))?;
        let (witness, witness_file) = if f[2] == "-" {
            (None, None)
        } else {
            let wpath = dir.join(f[2]);
            let text = fs::read_to_string(&wpath).map_err(io_err(&wpath))?;
            let c: Constellation = text.parse()?;
            if ramification(&c).cusps != partition || !c.is_clean_trivalent() {
                return Err(bad("witness does not match its partition"));
            }
            (Some(c), Some(f[2].to_string()))
        };
        if status == Status::Realizable && witness.is_none() {
            return Err(bad("realizable row without witness"));
        }
        rows.push(CensusRow {
            partition,
            status,
            witness,
            witness_file,
            nodes,
            wall_time: Duration::from_secs_f64(secs),
        });
    }
    Ok(rows)
}

fn write_census(dir: &Path, rows: &[CensusRow]) -> Result<(), SearchError> {
    let path = dir.join(CENSUS_FILE);
    let tmp = dir.join(format!("{CENSUS_FILE}.tmp"));
    let mut text = String::from("# partition | realizable | witness-file | nodes | wall-time\n");
    for r in rows {
        text.push_str(&format_row(r));
        text.push('\n');
    }
    fs::write(&tmp, text).map_err(io_err(&tmp))?;
    fs::rename(&tmp, &path).map_err(io_err(&path))
}

/// Runs [`find_triple`] on every partition of `n` into `k` parts in
/// parallel. With `out_dir`, results are checkpointed to `census.txt`
/// after each task and witnesses are written under `witnesses/`; rows
/// already decided in an existing census file are reused.
pub fn classify_all(
    n: usize,
    k: usize,
    options: &SearchOptions,
    out_dir: Option<&Path>,
) -> Result<CensusTable, SearchError> {
    let partitions = partitions_exact(n, k);
    let mut previous: Vec<CensusRow> = Vec::new();
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir.join(WITNESS_DIR)).map_err(io_err(dir))?;
        if dir.join(CENSUS_FILE).exists() {
            previous = read_census(dir)?;
        }
    }
    let done: Vec<CensusRow> = previous
        .into_iter()
        .filter(|r| r.status != Status::Unknown && partitions.contains(&r.partition))
        .collect();
    let todo: Vec<&Partition> = partitions
        .iter()
        .filter(|p| !done.iter().any(|r| &r.partition == *p))
        .collect();

    let finished = Mutex::new(done);
    let results: Vec<Result<(), SearchError>> = todo
        .par_iter()
        .map(|p| {
            let start = Instant::now();
            let task = CensusTask::new((*p).clone()).with_options(options.clone());
            let result = find_triple(&task)?;
            let mut row = CensusRow {
                partition: (*p).clone(),
                status: result.status(),
                witness: result.witness,
                witness_file: None,
                nodes: result.nodes_explored,
                wall_time: start.elapsed(),
            };
            let mut rows = finished.lock().expect("census lock");
            if let (Some(dir), Some(w)) = (out_dir, &row.witness) {
                let name = format!("{WITNESS_DIR}/{}", witness_file_name(p));
                let path = dir.join(&name);
                let mut f = fs::File::create(&path).map_err(io_err(&path))?;
                f.write_all(w.to_text().as_bytes()).map_err(io_err(&path))?;
                row.witness_file = Some(name);
            }
            rows.push(row);
            if let Some(dir) = out_dir {
                rows.sort_by(|a, b| b.partition.cmp(&a.partition));
                write_census(dir, &rows)?;
            }
            Ok(())
        })
        .collect();
    for r in results {
        r?;
    }
    let mut rows = finished.into_inner().expect("census lock");
    rows.sort_by(|a, b| b.partition.cmp(&a.partition));
    if let Some(dir) = out_dir {
        write_census(dir, &rows)?;
    }
    Ok(CensusTable {
        degree: n,
        parts: k,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn partition_lists() {
        assert_eq!(
            partitions_exact(6, 3),
            vec![p("4,1,1"), p("3,2,1"), p("2,2,2")]
        );
        assert_eq!(partitions_exact(24, 6).len(), 199);
        assert_eq!(partitions_exact(1, 1), vec![p("1")]);
        assert!(partitions_exact(2, 3).is_empty());
    }

    #[test]
    fn degree_six() {
        for (target, expected) in [("2,2,2", true), ("4,1,1", true), ("3,2,1", false)] {
            let r = find_triple(&CensusTask::new(p(target))).unwrap();
            assert_eq!(r.realizable, expected, "{target}");
            if let Some(w) = r.witness {
                assert_eq!(ramification(&w).cusps, p(target));
            } else {
                assert!(r.exhausted);
            }
        }
    }

    #[test]
    fn gamma2_is_unique() {
        let e = enumerate_triples(&CensusTask::new(p("2,2,2")), 10).unwrap();
        assert_eq!(e.oriented.len(), 1);
        assert_eq!(e.up_to_reflection, 1);
        assert!(!e.truncated);
    }

    #[test]
    fn bad_tasks() {
        assert!(find_triple(&CensusTask::new(p("4,1"))).is_err());
        let mut t = CensusTask::new(p("2,2,2"));
        t.degree = 12;
        assert!(find_triple(&t).is_err());
    }

    #[test]
    fn canonical_form_is_conjugation_invariant() {
        let x = vec![3, 5, 4, 0, 2, 1];
        let c = canonical_form(&x);
        // Rotate the second triangle and swap the two triangles.
        let relabel = [4, 5, 3, 0, 1, 2];
        let mut y = vec![0; 6];
        for i in 0..6 {
            y[relabel[i]] = relabel[x[i]];
        }
        assert_eq!(canonical_form(&y), c);
        let m = mirror_involution(&x);
        assert_eq!(m.len(), 6);
    }

    #[test]
    fn budget_gives_unknown() {
        let mut t = CensusTask::new(p("19,1,1,1,1,1"));
        t.options.node_budget = Some(1);
        let r = find_triple(&t).unwrap();
        assert_eq!(r.status(), Status::Unknown);
    }
}
