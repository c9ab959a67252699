use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{EnumerateError, GENERATOR_VERSION};
use crate::graph::{CanonKey, GraphError, HalfEdgeGraph, Label, OrientationKind, StabilityProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Marked,
    Oriented,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Marked => "marked",
            Flavor::Oriented => "oriented",
        }
    }

    pub fn orientation_kind(self) -> OrientationKind {
        match self {
            Flavor::Marked => OrientationKind::EdgeOrder,
            Flavor::Oriented => OrientationKind::VertexOrder,
        }
    }

    /// Cell degree of a graph: edges for marked, vertices for oriented.
    pub fn degree_of(self, g: &HalfEdgeGraph) -> usize {
        match self {
            Flavor::Marked => g.num_edges(),
            Flavor::Oriented => g.num_vertices(),
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "marked" => Ok(Flavor::Marked),
            "oriented" => Ok(Flavor::Oriented),
            _ => Err(format!(
                "unknown flavor {s:?} (expected marked or oriented)"
            )),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    /// Canonical representative.
    pub graph: HalfEdgeGraph,
    pub key: CanonKey,
    /// Some automorphism reverses the orientation, so the cell vanishes.
    pub zero: bool,
    pub automorphisms: u128,
}

impl CatalogEntry {
    pub fn new(graph: HalfEdgeGraph, key: CanonKey, kind: OrientationKind) -> Self {
        let form = graph.canonical_form();
        debug_assert_eq!(form.key, key);
        CatalogEntry {
            zero: form.has_odd_automorphism(kind),
            automorphisms: form.automorphism_count(),
            graph,
            key,
        }
    }
}

/// Position of a graph inside a catalog: `(degree, index in stratum)`.
pub type CatalogIndex = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumCount {
    pub degree: usize,
    pub count: usize,
    pub nonzero: usize,
}

#[derive(Clone, Debug)]
pub struct GraphCatalog {
    flavor: Flavor,
    genus: u32,
    labels: Vec<Label>,
    profile: StabilityProfile,
    generator_version: String,
    strata: BTreeMap<usize, Vec<CatalogEntry>>,
}

#[derive(Serialize, Deserialize)]
struct IndexFile {
    flavor: Flavor,
    genus: u32,
    labels: Vec<Label>,
    profile: String,
    generator_version: String,
    strata: Vec<IndexStratum>,
}

#[derive(Serialize, Deserialize)]
struct IndexStratum {
    degree: usize,
    count: usize,
    nonzero: usize,
    file: String,
}

pub const INDEX_FILE: &str = "index.json";

impl GraphCatalog {
    pub(crate) fn from_entries(
        flavor: Flavor,
        genus: u32,
        labels: Vec<Label>,
        profile: StabilityProfile,
        entries: Vec<CatalogEntry>,
    ) -> Self {
        let mut strata: BTreeMap<usize, Vec<CatalogEntry>> = BTreeMap::new();
        for e in entries {
            strata
                .entry(flavor.degree_of(&e.graph))
                .or_default()
                .push(e);
        }
        for list in strata.values_mut() {
            list.sort_by(|a, b| a.key.cmp(&b.key));
        }
        GraphCatalog {
            flavor,
            genus,
            labels,
            profile,
            generator_version: GENERATOR_VERSION.to_string(),
            strata,
        }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn profile(&self) -> &StabilityProfile {
        &self.profile
    }

    pub fn generator_version(&self) -> &str {
        &self.generator_version
    }

    pub fn len(&self) -> usize {
        self.strata.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Degrees with at least one graph, increasing.
    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.strata.keys().copied()
    }

    pub fn stratum(&self, degree: usize) -> &[CatalogEntry] {
        self.strata.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.strata.values().flatten()
    }

    pub fn lookup(&self, key: &CanonKey) -> Option<CatalogIndex> {
        // keys start with the vertex count, the direction flag and the edge count
        let k = key.as_slice();
        let degree = match self.flavor {
            Flavor::Marked => *k.get(2)?,
            Flavor::Oriented => *k.first()?,
        } as usize;
        let list = self.strata.get(&degree)?;
        let i = list.binary_search_by(|e| e.key.cmp(key)).ok()?;
        Some((degree, i))
    }

    pub fn counts(&self) -> Vec<StratumCount> {
        self.strata
            .iter()
            .map(|(&degree, list)| StratumCount {
                degree,
                count: list.len(),
                nonzero: list.iter().filter(|e| !e.zero).count(),
            })
            .collect()
    }

    /// Re-checks the catalog invariants: canonical, distinct, stable, of the
    /// right genus and markings, acyclic when oriented.
    pub fn check_invariants(&self) -> Result<(), EnumerateError> {
        let fail = |msg: String| Err(EnumerateError::Closure(msg));
        for (&d, list) in &self.strata {
            for (i, e) in list.iter().enumerate() {
                let g = &e.graph;
                let form = g.canonical_form();
                if form.key != e.key || &form.graph != g {
                    return fail(format!("entry ({d},{i}) is not canonical"));
                }
                if i > 0 && list[i - 1].key >= e.key {
                    return fail(format!(
                        "entries ({d},{}) and ({d},{i}) are duplicated or out of order",
                        i - 1
                    ));
                }
                if self.flavor.degree_of(g) != d {
                    return fail(format!("entry ({d},{i}) is filed under the wrong degree"));
                }
                if !g.is_weight_zero() || !g.is_stable(&self.profile) {
                    return fail(format!("entry ({d},{i}) is unstable"));
                }
                if g.genus()? != self.genus {
                    return fail(format!("entry ({d},{i}) has the wrong genus"));
                }
                if !g.markings().keys().copied().eq(self.labels.iter().copied()) {
                    return fail(format!("entry ({d},{i}) has the wrong markings"));
                }
                if g.is_directed() != (self.flavor == Flavor::Oriented) {
                    return fail(format!("entry ({d},{i}) has the wrong edge type"));
                }
                if g.is_directed() && !g.is_acyclic()? {
                    return fail(format!("entry ({d},{i}) has a directed cycle"));
                }
            }
        }
        Ok(())
    }

    fn stratum_file(degree: usize) -> String {
        format!("stratum-{degree:02}.jsonl")
    }

    /// Writes `index.json` and one file of JSON graphs (one per line) per
    /// stratum into `dir`.
    pub fn save(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        let mut strata = Vec::new();
        for (&degree, list) in &self.strata {
            let file = Self::stratum_file(degree);
            let mut w = BufWriter::new(fs::File::create(dir.join(&file))?);
            for e in list {
                writeln!(w, "{}", e.graph.to_json())?;
            }
            w.flush()?;
            strata.push(IndexStratum {
                degree,
                count: list.len(),
                nonzero: list.iter().filter(|e| !e.zero).count(),
                file,
            });
        }
        let index = IndexFile {
            flavor: self.flavor,
            genus: self.genus,
            labels: self.labels.clone(),
            profile: self.profile.name().to_string(),
            generator_version: self.generator_version.clone(),
            strata,
        };
        let text = serde_json::to_string_pretty(&index).expect("index serializes");
        fs::write(dir.join(INDEX_FILE), text + "\n")
    }

    /// Loads a catalog written by [`GraphCatalog::save`], validating every
    /// graph. Errors name the offending file.
    pub fn load(dir: &Path) -> Result<Self, CatalogLoadError> {
        let index_path = dir.join(INDEX_FILE);
        let bad = |path: &PathBuf, msg: String| CatalogLoadError {
            path: path.clone(),
            message: msg,
        };
        let text = fs::read_to_string(&index_path).map_err(|e| bad(&index_path, e.to_string()))?;
        let index: IndexFile =
            serde_json::from_str(&text).map_err(|e| bad(&index_path, e.to_string()))?;
        let profile = StabilityProfile::by_name(&index.profile)
            .ok_or_else(|| bad(&index_path, format!("unknown profile {:?}", index.profile)))?;
        let kind = index.flavor.orientation_kind();
        let mut entries = Vec::new();
        for s in &index.strata {
            let path = dir.join(&s.file);
            let file = fs::File::open(&path).map_err(|e| bad(&path, e.to_string()))?;
            let mut count = 0;
            for (lineno, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|e| bad(&path, e.to_string()))?;
                let g = HalfEdgeGraph::from_json(&line)
                    .map_err(|e: GraphError| bad(&path, format!("line {}: {e}", lineno + 1)))?;
                let form = g.canonical_form();
                if form.graph != g {
                    return Err(bad(
                        &path,
                        format!("line {}: graph is not canonical", lineno + 1),
                    ));
                }
                if index.flavor.degree_of(&g) != s.degree {
                    return Err(bad(&path, format!("line {}: wrong degree", lineno + 1)));
                }
                entries.push(CatalogEntry::new(g, form.key, kind));
                count += 1;
            }
            if count != s.count {
                return Err(bad(
                    &path,
                    format!("expected {} graphs, found {count}", s.count),
                ));
            }
        }
        let catalog =
            GraphCatalog::from_entries(index.flavor, index.genus, index.labels, profile, entries);
        catalog
            .check_invariants()
            .map_err(|e| bad(&index_path, e.to_string()))?;
        Ok(GraphCatalog {
            generator_version: index.generator_version,
            ..catalog
        })
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{}: {message}", path.display())]
pub struct CatalogLoadError {
    pub path: PathBuf,
    pub message: String,
}
