//! Built-in data: the 33 genus-zero torsion-free congruence classes, the
//! 112 six-cusp partitions of 24 with field labels, printed j-maps, and
//! the worked index-24 example.
//!
//! Data ships as plain-text files checked against `checksums.txt`. Setting
//! `DESSINS_DATA_DIR` reads them from that directory instead.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::belyi::{parse_ratfunc, BelyiError};
use crate::dessin::{ramification, Constellation, RamificationData};
use crate::modular::GroupWord;
use crate::perm::{Partition, Permutation};
use crate::RatFunc;

pub const DATA_DIR_ENV: &str = "DESSINS_DATA_DIR";

const TABLE1: &str = include_str!("../data/table1.txt");
const APPENDIX_A: &str = include_str!("../data/appendix_a.txt");
const JMAPS: &str = include_str!("../data/jmaps.txt");
const CHECKSUMS: &str = include_str!("../data/checksums.txt");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error("checksum mismatch for {0}")]
    Checksum(String),
    #[error("{file}:{line}: {message}")]
    Format {
        file: String,
        line: usize,
        message: String,
    },
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("witness rejected: {0}")]
    Witness(String),
    #[error(transparent)]
    Belyi(#[from] BelyiError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub index: usize,
    pub ramification: RamificationData,
    pub congruence: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPEntry {
    pub partition: Partition,
    pub field_label: String,
    pub dessin_ordinal: char,
    pub witness: Option<Constellation>,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub mp: Vec<MPEntry>,
    jmaps: Vec<(String, String)>,
}

/// Result of a name-or-partition lookup.
#[derive(Debug)]
pub enum Lookup<'a> {
    Class(&'a CatalogEntry),
    Partitions(Vec<&'a MPEntry>),
}

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('|').map(str::trim).collect()))
        }
    })
}

fn format_err(file: &str, line: usize, message: impl Into<String>) -> CatalogError {
    CatalogError::Format {
        file: file.to_string(),
        line,
        message: message.into(),
    }
}

fn partition_field(file: &str, line: usize, s: &str) -> Result<Partition, CatalogError> {
    s.parse()
        .map_err(|e| format_err(file, line, format!("bad partition '{s}': {e}")))
}

impl Catalog {
    /// Embedded data, or the directory named by `DESSINS_DATA_DIR`.
    pub fn load() -> Result<Self, CatalogError> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => Self::load_dir(Path::new(&dir)),
            None => Self::builtin(),
        }
    }

    pub fn builtin() -> Result<Self, CatalogError> {
        Self::from_texts(TABLE1, APPENDIX_A, JMAPS, CHECKSUMS)
    }

    pub fn load_dir(dir: &Path) -> Result<Self, CatalogError> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).map_err(|source| CatalogError::Io { path, source })
        };
        Self::from_texts(
            &read("table1.txt")?,
            &read("appendix_a.txt")?,
            &read("jmaps.txt")?,
            &read("checksums.txt")?,
        )
    }

    fn from_texts(
        table1: &str,
        appendix: &str,
        jmaps: &str,
        checksums: &str,
    ) -> Result<Self, CatalogError> {
        let expected: BTreeMap<&str, &str> = checksums
            .lines()
            .filter_map(|l| l.split_once(char::is_whitespace))
            .map(|(h, f)| (f.trim(), h))
            .collect();
        for (name, text) in [
            ("table1.txt", table1),
            ("appendix_a.txt", appendix),
            ("jmaps.txt", jmaps),
        ] {
            if expected.get(name) != Some(&sha256_hex(text).as_str()) {
                return Err(CatalogError::Checksum(name.to_string()));
            }
        }

        let mut entries = Vec::new();
        for (line, f) in records(table1) {
            let file = "table1.txt";
            if f.len() != 5 {
                return Err(format_err(file, line, "expected 5 fields"));
            }
            let index: usize = f[1]
                .parse()
                .map_err(|_| format_err(file, line, "bad index"))?;
            let ramification = RamificationData::new(
                partition_field(file, line, f[2])?,
                partition_field(file, line, f[3])?,
                partition_field(file, line, f[4])?,
            );
            if ramification.index != index {
                return Err(format_err(file, line, "index does not match partitions"));
            }
            entries.push(CatalogEntry {
                name: f[0].to_string(),
                index,
                ramification,
                congruence: true,
            });
        }

        let mut mp = Vec::new();
        for (line, f) in records(appendix) {
            let file = "appendix_a.txt";
            if f.len() != 3 {
                return Err(format_err(file, line, "expected 3 fields"));
            }
            let mut ordinal = f[2].chars();
            let dessin_ordinal = match (ordinal.next(), ordinal.next()) {
                (Some(c), None) if c.is_ascii_uppercase() => c,
                _ => return Err(format_err(file, line, "bad ordinal")),
            };
            mp.push(MPEntry {
                partition: partition_field(file, line, f[0])?,
                field_label: f[1].to_string(),
                dessin_ordinal,
                witness: None,
            });
        }

        let mut maps = Vec::new();
        for (line, f) in records(jmaps) {
            if f.len() != 2 {
                return Err(format_err("jmaps.txt", line, "expected 2 fields"));
            }
            maps.push((f[0].to_string(), f[1].to_string()));
        }
        Ok(Catalog {
            entries,
            mp,
            jmaps: maps,
        })
    }

    pub fn entry(&self, name: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| CatalogError::NotFound(name.to_string()))
    }

    /// All Appendix entries for a partition, in Appendix order.
    pub fn mp_entries(&self, partition: &Partition) -> Vec<&MPEntry> {
        self.mp
            .iter()
            .filter(|e| &e.partition == partition)
            .collect()
    }

    /// Looks up a class name, or failing that a partition such as
    /// `18,2,1,1,1,1`.
    pub fn lookup(&self, key: &str) -> Result<Lookup<'_>, CatalogError> {
        if let Ok(e) = self.entry(key) {
            return Ok(Lookup::Class(e));
        }
        if let Ok(p) = key.parse::<Partition>() {
            let found = self.mp_entries(&p);
            if !found.is_empty() {
                return Ok(Lookup::Partitions(found));
            }
        }
        Err(CatalogError::NotFound(key.to_string()))
    }

    pub fn by_index(&self, index: usize) -> Vec<&CatalogEntry> {
        self.entries.iter().filter(|e| e.index == index).collect()
    }

    /// Number of Appendix dessins per partition.
    pub fn mp_partition_multiplicities(&self) -> BTreeMap<Partition, usize> {
        let mut out = BTreeMap::new();
        for e in &self.mp {
            *out.entry(e.partition.clone()).or_insert(0) += 1;
        }
        out
    }

    /// Index-24 classes whose cusp widths appear among the six-cusp
    /// partitions.
    pub fn table1_mp_intersection(&self) -> Vec<(&CatalogEntry, Partition)> {
        let mult = self.mp_partition_multiplicities();
        self.by_index(24)
            .into_iter()
            .filter(|e| mult.contains_key(&e.ramification.cusps))
            .map(|e| (e, e.ramification.cusps.clone()))
            .collect()
    }

    pub fn jmap_names(&self) -> Vec<&str> {
        self.jmaps.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn jmap(&self, name: &str) -> Result<RatFunc, CatalogError> {
        let (_, text) = self
            .jmaps
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| CatalogError::NotFound(name.to_string()))?;
        Ok(parse_ratfunc(text)?)
    }

    /// Catalog classes whose ramification equals `r`.
    pub fn classes_with(&self, r: &RamificationData) -> Vec<&CatalogEntry> {
        self.entries
            .iter()
            .filter(|e| &e.ramification == r)
            .collect()
    }

    /// Stores a witness for the Appendix entry `(partition, ordinal)` after
    /// checking its cusp widths and clean trivalent shape.
    pub fn attach_witness(
        &mut self,
        partition: &Partition,
        ordinal: char,
        witness: Constellation,
    ) -> Result<(), CatalogError> {
        let entry = self
            .mp
            .iter_mut()
            .find(|e| &e.partition == partition && e.dessin_ordinal == ordinal)
            .ok_or_else(|| CatalogError::NotFound(format!("{partition} {ordinal}")))?;
        if !witness.is_clean_trivalent() {
            return Err(CatalogError::Witness("not clean trivalent".into()));
        }
        let cusps = ramification(&witness).cusps;
        if &cusps != partition {
            return Err(CatalogError::Witness(format!("cusp widths {cusps}")));
        }
        entry.witness = Some(witness);
        Ok(())
    }

    pub fn validate(&self) -> CatalogReport {
        validate_catalog(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogReport {
    pub classes: usize,
    pub valid_classes: usize,
    pub mp_entries: usize,
    pub valid_mp_entries: usize,
    pub mp_partitions: usize,
    pub classes_by_index: BTreeMap<usize, usize>,
    pub problems: Vec<String>,
}

impl CatalogReport {
    pub fn is_clean(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Checks every class for genus 0 with no elliptic points,
/// `index = 6 * cusps - 12`, cusp widths summing to the index and the
/// `3^(index/3)`, `2^(index/2)` shape; every Appendix entry for six parts
/// summing to 24.
pub fn validate_catalog(c: &Catalog) -> CatalogReport {
    let mut problems = Vec::new();
    let mut valid_classes = 0;
    let mut classes_by_index = BTreeMap::new();
    for e in &c.entries {
        let r = &e.ramification;
        let mu = e.index;
        *classes_by_index.entry(mu).or_insert(0) += 1;
        let mut bad = Vec::new();
        if ![6, 12, 24, 36, 48, 60].contains(&mu) {
            bad.push(format!("index {mu} not allowed"));
        }
        if !r.totals_consistent() || r.cusps.total() != mu {
            bad.push("partition totals differ from the index".to_string());
        }
        if r.v() != mu / 3 || r.e() != mu / 2 || !r.is_clean_trivalent() {
            bad.push("not 3^(mu/3), 2^(mu/2)".to_string());
        }
        if r.nu2() != 0 || r.nu3() != 0 {
            bad.push("elliptic points".to_string());
        }
        if r.genus_rh() != Some(0) {
            bad.push(format!("genus {:?}", r.genus_rh()));
        }
        if 6 * r.nu_inf() != mu + 12 {
            bad.push(format!("{} cusps at index {mu}", r.nu_inf()));
        }
        if bad.is_empty() {
            valid_classes += 1;
        } else {
            problems.push(format!("{}: {}", e.name, bad.join("; ")));
        }
    }
    let mut valid_mp = 0;
    for e in &c.mp {
        if e.partition.len() == 6 && e.partition.total() == 24 {
            valid_mp += 1;
        } else {
            problems.push(format!(
                "{} {}: not six parts of 24",
                e.partition, e.dessin_ordinal
            ));
        }
    }
    CatalogReport {
        classes: c.entries.len(),
        valid_classes,
        mp_entries: c.mp.len(),
        valid_mp_entries: valid_mp,
        mp_partitions: c.mp_partition_multiplicities().len(),
        classes_by_index,
        problems,
    }
}

/// Generator images for the principal congruence subgroup of level 4:
/// `x` the involution, `y` the product of 3-cycles.
pub fn gamma4_constellation() -> Constellation {
    let d = 24;
    let x = Permutation::parse_cycles(
        "(1,10)(2,4)(3,24)(5,7)(6,21)(8,12)(9,18)(11,14)(13,16)(15,23)(17,19)(20,22)",
        d,
    )
    .expect("valid cycles");
    let y = Permutation::parse_cycles(
        "(1,2,3)(4,5,6)(7,8,9)(10,11,12)(13,14,15)(16,17,18)(19,20,21)(22,23,24)",
        d,
    )
    .expect("valid cycles");
    Constellation::from_generators(x, y).expect("valid constellation")
}

/// An alternative set of free generators for the level-4 example.
pub fn gamma4_reference_words() -> Vec<GroupWord> {
    [
        "y*x*y*x*y*x^-1*y*x^-1",
        "y^-1*x*y^-1*x*y^-1*x^-1*y^-1*x^-1",
        "y*x*y^-1*x*y^-1*x^-1*y^-1*x^-1*y",
        "x*y*x*y^-1*x*y^-1*x^-1*y^-1*x^-1*y*x^-1",
        "y*x*y^-1*x*y*x*y^-1*x^-1*y*x^-1*y^-1*x^-1",
    ]
    .iter()
    .map(|s| s.parse().expect("valid word"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> Catalog {
        Catalog::builtin().unwrap()
    }

    #[test]
    fn counts() {
        let c = cat();
        let r = c.validate();
        assert!(r.is_clean(), "{:?}", r.problems);
        assert_eq!((r.valid_classes, r.mp_partitions), (33, 112));
        assert_eq!(r.mp_entries, 191);
        assert_eq!(c.by_index(24).len(), 9);
        let idx36 = c.by_index(36);
        assert_eq!(idx36.len(), 6);
        assert!(idx36.iter().all(|e| e.ramification.nu_inf() == 8));
    }

    #[test]
    fn lookups() {
        let c = cat();
        match c.lookup("Gamma(4)").unwrap() {
            Lookup::Class(e) => {
                assert_eq!(e.index, 24);
                assert_eq!(e.ramification.cusps, Partition::uniform(4, 6));
            }
            other => panic!("{other:?}"),
        }
        match c.lookup("18,2,1,1,1,1").unwrap() {
            Lookup::Partitions(v) => {
                let fields: Vec<&str> = v.iter().map(|e| e.field_label.as_str()).collect();
                assert_eq!(fields, ["Q", "sqrt(-3)", "sqrt(-3)"]);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            c.lookup("Gamma(6)"),
            Err(CatalogError::NotFound(_))
        ));
    }

    #[test]
    fn multiplicities() {
        let m = cat().mp_partition_multiplicities();
        let p = |s: &str| s.parse::<Partition>().unwrap();
        assert_eq!(m[&p("4,4,4,4,4,4")], 1);
        assert_eq!(m[&p("12,5,3,2,1,1")], 4);
        assert_eq!(m[&p("19,1,1,1,1,1")], 1);
        assert_eq!(m.values().sum::<usize>(), 191);
    }

    #[test]
    fn intersection_is_all_nine() {
        assert_eq!(cat().table1_mp_intersection().len(), 9);
    }

    #[test]
    fn gamma4_data() {
        let g = gamma4_constellation();
        assert_eq!(ramification(&g).cusps, Partition::uniform(4, 6));
        assert_eq!(gamma4_reference_words().len(), 5);
    }

    #[test]
    fn witnesses_are_checked() {
        let mut c = cat();
        let p: Partition = "4,4,4,4,4,4".parse().unwrap();
        c.attach_witness(&p, 'A', gamma4_constellation()).unwrap();
        let q: Partition = "19,1,1,1,1,1".parse().unwrap();
        assert!(c.attach_witness(&q, 'A', gamma4_constellation()).is_err());
    }

    #[test]
    fn checksum_guard() {
        let broken = TABLE1.replace("Gamma(4) | 24", "Gamma(4) | 25");
        assert!(matches!(
            Catalog::from_texts(&broken, APPENDIX_A, JMAPS, CHECKSUMS),
            Err(CatalogError::Checksum(_))
        ));
    }
}
