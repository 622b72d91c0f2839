//! Constellations (permutation triples), their ramification data and genus,
//! and the correspondence with Schreier coset graphs.
//!
//! Colour convention: `sigma0` describes the pre-images of 0 and, for
//! modular-group data, is the order-3 generator `y` (white nodes, the
//! oriented triangles of the coset graph). `sigma1` describes the
//! pre-images of 1 and is the involution `x` (black nodes, the undirected
//! x-edges). `sigma_inf` is stored explicitly and must satisfy
//! `sigma0 * sigma1 * sigma_inf = 1` with left-to-right products.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::{
    compose, cycle_type, is_transitive, parse_cycle_list, Partition, PermError, Permutation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DessinError {
    #[error("broken triple: sigma0 * sigma1 * sigma_inf is not the identity")]
    BrokenTriple,
    #[error("disconnected dessin: <sigma0, sigma1> is not transitive")]
    Disconnected,
    #[error("not clean trivalent: sigma0 must be a product of 3-cycles and sigma1 of 2-cycles")]
    NotCleanTrivalent,
    #[error("malformed coset graph: {0}")]
    MalformedGraph(String),
    #[error("odd Euler characteristic (internal error)")]
    OddEuler,
    #[error("constellation text: {0}")]
    Format(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Outcome of checking a candidate triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub degree: usize,
    pub product_identity: bool,
    pub transitive: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.product_identity && self.transitive
    }
}

/// Checks product identity and transitivity of a triple of equal degree.
pub fn validate(
    sigma0: &Permutation,
    sigma1: &Permutation,
    sigma_inf: &Permutation,
) -> Result<ValidationReport, DessinError> {
    let product = compose(&compose(sigma0, sigma1)?, sigma_inf)?;
    let degree = sigma0.degree();
    Ok(ValidationReport {
        degree,
        product_identity: product.is_identity(),
        transitive: is_transitive(&[sigma0.clone(), sigma1.clone()], degree)?,
    })
}

/// A transitive permutation triple with product identity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Constellation {
    sigma0: Permutation,
    sigma1: Permutation,
    sigma_inf: Permutation,
}

impl Constellation {
    pub fn new(
        sigma0: Permutation,
        sigma1: Permutation,
        sigma_inf: Permutation,
    ) -> Result<Self, DessinError> {
        let report = validate(&sigma0, &sigma1, &sigma_inf)?;
        if !report.product_identity {
            return Err(DessinError::BrokenTriple);
        }
        if !report.transitive {
            return Err(DessinError::Disconnected);
        }
        Ok(Constellation {
            sigma0,
            sigma1,
            sigma_inf,
        })
    }

    /// Completes a pair with `sigma_inf = (sigma0 * sigma1)^-1`.
    pub fn from_pair(sigma0: Permutation, sigma1: Permutation) -> Result<Self, DessinError> {
        let sigma_inf = compose(&sigma0, &sigma1)?.inverse();
        Self::new(sigma0, sigma1, sigma_inf)
    }

    /// Builds a constellation from modular-group generator images: `y` is
    /// the order-3 permutation, `x` the involution.
    pub fn from_generators(x: Permutation, y: Permutation) -> Result<Self, DessinError> {
        Self::from_pair(y, x)
    }

    pub fn degree(&self) -> usize {
        self.sigma0.degree()
    }

    pub fn sigma0(&self) -> &Permutation {
        &self.sigma0
    }

    pub fn sigma1(&self) -> &Permutation {
        &self.sigma1
    }

    pub fn sigma_inf(&self) -> &Permutation {
        &self.sigma_inf
    }

    /// Image of the involution `x`.
    pub fn x_action(&self) -> &Permutation {
        &self.sigma1
    }

    /// Image of the order-3 generator `y`.
    pub fn y_action(&self) -> &Permutation {
        &self.sigma0
    }

    /// Simultaneous relabelling by `c`.
    pub fn conjugate_by(&self, c: &Permutation) -> Result<Self, DessinError> {
        Ok(Constellation {
            sigma0: self.sigma0.conjugate_by(c)?,
            sigma1: self.sigma1.conjugate_by(c)?,
            sigma_inf: self.sigma_inf.conjugate_by(c)?,
        })
    }

    /// Orientation reversal: both generators inverted.
    pub fn mirror(&self) -> Self {
        let sigma0 = self.sigma0.inverse();
        let sigma1 = self.sigma1.inverse();
        let sigma_inf = self.sigma1.then_unchecked(&self.sigma0);
        Constellation {
            sigma0,
            sigma1,
            sigma_inf,
        }
    }

    pub fn is_clean_trivalent(&self) -> bool {
        let d = self.degree();
        d.is_multiple_of(6)
            && cycle_type(&self.sigma0).is_uniform(3)
            && cycle_type(&self.sigma1).is_uniform(2)
    }

    /// Renders the `degree:` / `s0:` / `s1:` / `sinf:` text format.
    pub fn to_text(&self) -> String {
        format!(
            "degree: {}\ns0: {}\ns1: {}\nsinf: {}\n",
            self.degree(),
            self.sigma0,
            self.sigma1,
            self.sigma_inf
        )
    }
}

impl fmt::Debug for Constellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Constellation(d={}, s0={}, s1={}, sinf={})",
            self.degree(),
            self.sigma0,
            self.sigma1,
            self.sigma_inf
        )
    }
}

/// Raw permutations read from the constellation text format, before the
/// triple is checked. `sinf` is `None` when the line is absent.
pub struct RawTriple {
    pub sigma0: Permutation,
    pub sigma1: Permutation,
    pub sigma_inf: Option<Permutation>,
}

pub fn parse_triple(text: &str) -> Result<RawTriple, DessinError> {
    let mut degree = None;
    let (mut s0, mut s1, mut sinf) = (None, None, None);
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once(':').ok_or_else(|| {
            DessinError::Format(format!("line {}: expected 'key: value'", lineno + 1))
        })?;
        let value = value.trim().to_string();
        match key.trim() {
            "degree" => {
                degree =
                    Some(value.parse::<usize>().map_err(|_| {
                        DessinError::Format(format!("line {}: bad degree", lineno + 1))
                    })?)
            }
            "s0" => s0 = Some(value),
            "s1" => s1 = Some(value),
            "sinf" => sinf = Some(value),
            other => {
                return Err(DessinError::Format(format!(
                    "line {}: unknown key '{other}'",
                    lineno + 1
                )))
            }
        }
    }
    let degree = degree.ok_or_else(|| DessinError::Format("missing degree".into()))?;
    let parse = |name: &str, v: Option<String>| -> Result<Permutation, DessinError> {
        let v = v.ok_or_else(|| DessinError::Format(format!("missing {name}")))?;
        Ok(Permutation::parse_cycles(&v, degree)?)
    };
    Ok(RawTriple {
        sigma0: parse("s0", s0)?,
        sigma1: parse("s1", s1)?,
        sigma_inf: sinf
            .map(|v| Permutation::parse_cycles(&v, degree))
            .transpose()?,
    })
}

impl FromStr for Constellation {
    type Err = DessinError;

    /// Parses the four-line text format. `sinf` may be omitted, in which
    /// case it is completed from the other two.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = parse_triple(text)?;
        match t.sigma_inf {
            Some(sinf) => Constellation::new(t.sigma0, t.sigma1, sinf),
            None => Constellation::from_pair(t.sigma0, t.sigma1),
        }
    }
}

/// The partitions over 0, 1 and infinity together with derived counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RamificationData {
    pub index: usize,
    pub over0: Partition,
    pub over1: Partition,
    pub cusps: Partition,
}

impl RamificationData {
    pub fn new(over0: Partition, over1: Partition, cusps: Partition) -> Self {
        RamificationData {
            index: cusps.total(),
            over0,
            over1,
            cusps,
        }
    }

    /// Number of cusps.
    pub fn nu_inf(&self) -> usize {
        self.cusps.len()
    }

    /// Number of white nodes (parts over 0).
    pub fn v(&self) -> usize {
        self.over0.len()
    }

    /// Number of black nodes (parts over 1).
    pub fn e(&self) -> usize {
        self.over1.len()
    }

    /// Elliptic points of order 2: fixed points of the involution.
    pub fn nu2(&self) -> usize {
        self.over1.parts().iter().filter(|&&p| p == 1).count()
    }

    /// Elliptic points of order 3: fixed points of the order-3 generator.
    pub fn nu3(&self) -> usize {
        self.over0.parts().iter().filter(|&&p| p == 1).count()
    }

    pub fn is_clean_trivalent(&self) -> bool {
        self.index.is_multiple_of(6)
            && self.over0.is_uniform(3)
            && self.over1.is_uniform(2)
            && self.v() == self.index / 3
            && self.e() == self.index / 2
    }

    /// Totals agree with the index.
    pub fn totals_consistent(&self) -> bool {
        self.over0.total() == self.index
            && self.over1.total() == self.index
            && self.cusps.total() == self.index
    }

    /// Genus from `2 - 2g = V + E + nu_inf - index`.
    pub fn genus_euler(&self) -> Result<i64, DessinError> {
        let chi = (self.v() + self.e() + self.nu_inf()) as i64 - self.index as i64;
        if chi % 2 != 0 {
            return Err(DessinError::OddEuler);
        }
        Ok(1 - chi / 2)
    }

    /// Genus of the modular curve, `1 + mu/12 - nu2/4 - nu3/3 - nu_inf/2`,
    /// when the data is that of a modular-group coset action.
    pub fn genus_rh(&self) -> Option<i64> {
        let over0_ok = self.over0.parts().iter().all(|&p| p == 1 || p == 3);
        let over1_ok = self.over1.parts().iter().all(|&p| p == 1 || p == 2);
        if !over0_ok || !over1_ok || !self.totals_consistent() {
            return None;
        }
        let twelve_g = 12 + self.index as i64
            - 3 * self.nu2() as i64
            - 4 * self.nu3() as i64
            - 6 * self.nu_inf() as i64;
        (twelve_g % 12 == 0).then_some(twelve_g / 12)
    }
}

impl fmt::Display for RamificationData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}; {}; {}}}",
            self.over0.to_exponent_string(),
            self.over1.to_exponent_string(),
            self.cusps.to_exponent_string()
        )
    }
}

pub fn ramification(c: &Constellation) -> RamificationData {
    RamificationData::new(
        cycle_type(&c.sigma0),
        cycle_type(&c.sigma1),
        cycle_type(&c.sigma_inf),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenusReport {
    pub genus_euler: i64,
    /// `None` when the triple is not a modular-group coset action.
    pub genus_rh: Option<i64>,
    pub nu2: usize,
    pub nu3: usize,
}

pub fn genus(c: &Constellation) -> Result<GenusReport, DessinError> {
    let r = ramification(c);
    Ok(GenusReport {
        genus_euler: r.genus_euler()?,
        genus_rh: r.genus_rh(),
        nu2: r.nu2(),
        nu3: r.nu3(),
    })
}

/// No fixed points of `x` or `y`: every `sigma1` cycle has length 2 and
/// every `sigma0` cycle length 3.
pub fn is_torsion_free_profile(c: &Constellation) -> bool {
    c.is_clean_trivalent()
}

/// Schreier coset graph: undirected x-edges and positively oriented
/// y-triangles on the nodes `1..=degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetGraph {
    pub degree: usize,
    /// Pairs `(a, b)` with `a < b`, sorted.
    pub x_edges: Vec<(usize, usize)>,
    /// Oriented triangles `[p, y(p), y(y(p))]` starting at their smallest
    /// node, sorted.
    pub triangles: Vec<[usize; 3]>,
}

impl CosetGraph {
    /// Renders the `degree:` / `x-edges:` / `triangles:` text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("degree: {}\nx-edges: ", self.degree);
        for (a, b) in &self.x_edges {
            let _ = write!(out, "({a},{b})");
        }
        out.push_str("\ntriangles: ");
        for t in &self.triangles {
            let _ = write!(out, "({})", join(t));
        }
        out.push('\n');
        out
    }
}

impl FromStr for CosetGraph {
    type Err = DessinError;

    /// Parses the text format written by [`CosetGraph::to_text`]. Shape
    /// checks are left to [`dessin_of`].
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut degree = None;
        let mut x_edges = Vec::new();
        let mut triangles = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: &str| DessinError::Format(format!("line {}: {m}", lineno + 1));
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| bad("expected 'key: value'"))?;
            match key.trim() {
                "degree" => degree = Some(value.trim().parse().map_err(|_| bad("bad degree"))?),
                "x-edges" => {
                    for c in parse_cycle_list(value.trim())? {
                        match c[..] {
                            [a, b] => x_edges.push((a.min(b), a.max(b))),
                            _ => return Err(bad("x-edges must have two nodes")),
                        }
                    }
                }
                "triangles" => {
                    for c in parse_cycle_list(value.trim())? {
                        match c[..] {
                            [a, b, c] => triangles.push([a, b, c]),
                            _ => return Err(bad("triangles must have three nodes")),
                        }
                    }
                }
                other => return Err(bad(&format!("unknown key '{other}'"))),
            }
        }
        Ok(CosetGraph {
            degree: degree.ok_or_else(|| DessinError::Format("missing degree".into()))?,
            x_edges,
            triangles,
        })
    }
}

pub fn coset_graph_of(c: &Constellation) -> Result<CosetGraph, DessinError> {
    if !c.is_clean_trivalent() {
        return Err(DessinError::NotCleanTrivalent);
    }
    let x_edges = c
        .sigma1
        .cycles()
        .into_iter()
        .map(|cy| (cy[0], cy[1]))
        .collect();
    let triangles = c
        .sigma0
        .cycles()
        .into_iter()
        .map(|cy| [cy[0], cy[1], cy[2]])
        .collect();
    Ok(CosetGraph {
        degree: c.degree(),
        x_edges,
        triangles,
    })
}

pub fn dessin_of(g: &CosetGraph) -> Result<Constellation, DessinError> {
    let d = g.degree;
    let mut in_edge = vec![false; d];
    let mut in_triangle = vec![false; d];
    let check = |p: usize| -> Result<usize, DessinError> {
        if p == 0 || p > d {
            Err(DessinError::MalformedGraph(format!(
                "node {p} out of range"
            )))
        } else {
            Ok(p - 1)
        }
    };
    let mut edges = Vec::with_capacity(g.x_edges.len());
    for &(a, b) in &g.x_edges {
        let (a0, b0) = (check(a)?, check(b)?);
        if a0 == b0 {
            return Err(DessinError::MalformedGraph(format!(
                "x-edge loop at node {a}"
            )));
        }
        for p in [a0, b0] {
            if in_edge[p] {
                return Err(DessinError::MalformedGraph(format!(
                    "node {} lies on two x-edges",
                    p + 1
                )));
            }
            in_edge[p] = true;
        }
        edges.push(vec![a, b]);
    }
    let mut tris = Vec::with_capacity(g.triangles.len());
    for t in &g.triangles {
        for &p in t {
            let p0 = check(p)?;
            if in_triangle[p0] {
                return Err(DessinError::MalformedGraph(format!(
                    "node {p} lies in two triangles"
                )));
            }
            in_triangle[p0] = true;
        }
        tris.push(t.to_vec());
    }
    if let Some(p) = (0..d).find(|&p| !in_edge[p]) {
        return Err(DessinError::MalformedGraph(format!(
            "node {} has no x-edge",
            p + 1
        )));
    }
    if let Some(p) = (0..d).find(|&p| !in_triangle[p]) {
        return Err(DessinError::MalformedGraph(format!(
            "node {} has no triangle",
            p + 1
        )));
    }
    let sigma0 = Permutation::from_cycles(d, &tris)?;
    let sigma1 = Permutation::from_cycles(d, &edges)?;
    Constellation::from_pair(sigma0, sigma1)
}

/// Graphviz description of the bipartite map: white nodes are the
/// `sigma0` cycles, black nodes the `sigma1` cycles, one edge per point.
pub fn export_map(c: &Constellation) -> Result<String, DessinError> {
    if !c.is_clean_trivalent() {
        return Err(DessinError::NotCleanTrivalent);
    }
    let whites = c.sigma0.cycles();
    let blacks = c.sigma1.cycles();
    let d = c.degree();
    let mut white_of = vec![0; d];
    let mut black_of = vec![0; d];
    for (i, cy) in whites.iter().enumerate() {
        for &p in cy {
            white_of[p - 1] = i + 1;
        }
    }
    for (i, cy) in blacks.iter().enumerate() {
        for &p in cy {
            black_of[p - 1] = i + 1;
        }
    }
    let mut out = String::from("graph dessin {\n");
    let _ = writeln!(
        out,
        "  // degree {d}, {} white, {} black",
        whites.len(),
        blacks.len()
    );
    for (i, cy) in whites.iter().enumerate() {
        let _ = writeln!(
            out,
            "  w{} [shape=circle, style=filled, fillcolor=white, label=\"{}\"];",
            i + 1,
            join(cy)
        );
    }
    for (i, cy) in blacks.iter().enumerate() {
        let _ = writeln!(
            out,
            "  b{} [shape=circle, style=filled, fillcolor=black, fontcolor=white, label=\"{}\"];",
            i + 1,
            join(cy)
        );
    }
    for p in 0..d {
        let _ = writeln!(
            out,
            "  w{} -- b{} [label=\"{}\"];",
            white_of[p],
            black_of[p],
            p + 1
        );
    }
    out.push_str("}\n");
    Ok(out)
}

fn join(points: &[usize]) -> String {
    points
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
