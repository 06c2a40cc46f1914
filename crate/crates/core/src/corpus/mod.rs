//! The graphs drawn in the classification, with their expected verdicts.
//!
//! Each entry is a `corpus/<ID>.graph` file in the graph text format. The
//! side file `corpus/expectations.toml` records the expected group order,
//! the expected intersection-property verdict, witness words, and a recorded
//! failure witness where one is known. `corpus/groups.toml` names the target
//! groups used by enumeration.

pub mod word;

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::perm::{parse_cycles, PermError, PermGroup, Permutation};
use crate::prgraph::{GraphError, PRGraph};
use crate::sggi::{IpStatus, IpWitness, Sggi, SggiError};

pub use word::{evaluate, WordError};

/// Environment variable that points the CLI at a corpus directory.
pub const CORPUS_DIR_VAR: &str = "SCG_CORPUS_DIR";

macro_rules! embedded {
    ($($id:literal),* $(,)?) => {
        &[$(($id, include_str!(concat!("../../corpus/", $id, ".graph")))),*]
    };
}

static GRAPH_FILES: &[(&str, &str)] = embedded!(
    "A1",
    "A2",
    "A3",
    "A4",
    "B1",
    "B2",
    "B3",
    "B4",
    "B5",
    "B6",
    "B7",
    "B8",
    "B9",
    "B10",
    "B11",
    "B12",
    "B13",
    "B14",
    "B15",
    "C1",
    "C2",
    "C3",
    "C4",
    "C5",
    "C6",
    "D1",
    "D2",
    "D3",
    "D4",
    "E1",
    "E2",
    "E3",
    "E4",
    "E5",
    "E6",
    "E7",
    "E8",
    "E9",
    "E10",
    "E11",
    "E12",
    "E13",
    "F1",
    "F2",
    "F3",
    "F4",
    "F5",
    "F6",
    "F7",
    "F8",
    "F9",
    "F10",
    "PSL1",
    "PSL2",
    "PSL3",
    "PSL4",
    "PSL5",
    "ELEVEN_CELL",
    "NOPSL_A",
    "NOPSL_B",
    "NOPSL_C",
);
static EXPECTATIONS: &str = include_str!("../../corpus/expectations.toml");
static GROUPS: &str = include_str!("../../corpus/groups.toml");

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("unknown corpus id {0:?}")]
    UnknownId(String),
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{id}: {source}")]
    Graph { id: String, source: GraphError },
    #[error("{file}: {message}")]
    Config { file: String, message: String },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A named word and the permutation it should evaluate to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessWord {
    pub name: String,
    pub word: String,
    /// A cycle literal or another word.
    pub expected: String,
}

/// An intersection-property failure witness stored as text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordedIpWitness {
    pub j: Vec<usize>,
    pub k: Vec<usize>,
    pub element: String,
}

impl RecordedIpWitness {
    pub fn from_witness(w: &IpWitness) -> RecordedIpWitness {
        RecordedIpWitness {
            j: w.j.clone(),
            k: w.k.clone(),
            element: w.element.to_string(),
        }
    }

    pub fn to_witness(&self, degree: usize) -> Result<IpWitness, PermError> {
        Ok(IpWitness {
            element: parse_cycles(&self.element, degree)?,
            j: self.j.clone(),
            k: self.k.clone(),
        })
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Expectation {
    source: Option<String>,
    order: Option<u64>,
    ip: Option<IpStatus>,
    #[serde(default)]
    words: Vec<WitnessWord>,
    ip_witness: Option<RecordedIpWitness>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpec {
    graph: Option<String>,
    generators: Option<Vec<String>>,
    degree: Option<usize>,
    order: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: String,
    pub graph: PRGraph,
    pub source: String,
    pub expected_order: Option<u128>,
    pub expected_ip: Option<IpStatus>,
    pub witnesses: Vec<WitnessWord>,
    pub ip_witness: Option<RecordedIpWitness>,
}

/// Outcome of evaluating one witness word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordCheck {
    pub name: String,
    pub word: String,
    pub expected: String,
    pub computed: Option<String>,
    pub matches: bool,
    pub error: Option<String>,
}

impl CorpusEntry {
    pub fn sggi(&self) -> Result<Sggi, SggiError> {
        Sggi::from_graph(&self.graph)
    }

    /// One of the lettered graphs A1 to F10.
    pub fn is_appendix(&self) -> bool {
        is_appendix_id(&self.id)
    }

    /// Evaluates the witness words in order; later words may use earlier names.
    pub fn evaluate_witnesses(&self) -> Vec<WordCheck> {
        let gens = self.graph.to_generators();
        let n = self.graph.n();
        let mut named = HashMap::new();
        self.witnesses
            .iter()
            .map(|w| {
                let computed = evaluate(&w.word, &gens, n, &named);
                let expected = evaluate(&w.expected, &gens, n, &named);
                let check = match (&computed, &expected) {
                    (Ok(c), Ok(e)) => WordCheck {
                        name: w.name.clone(),
                        word: w.word.clone(),
                        expected: w.expected.clone(),
                        computed: Some(c.to_string()),
                        matches: c == e,
                        error: None,
                    },
                    (c, e) => WordCheck {
                        name: w.name.clone(),
                        word: w.word.clone(),
                        expected: w.expected.clone(),
                        computed: c.as_ref().ok().map(Permutation::to_string),
                        matches: false,
                        error: Some(
                            c.as_ref()
                                .err()
                                .or(e.as_ref().err())
                                .map(ToString::to_string)
                                .unwrap_or_default(),
                        ),
                    },
                };
                if let Ok(c) = computed {
                    named.insert(w.name.clone(), c);
                }
                check
            })
            .collect()
    }
}

pub fn is_appendix_id(id: &str) -> bool {
    let mut chars = id.chars();
    matches!(chars.next(), Some('A'..='F'))
        && !chars.as_str().is_empty()
        && chars.all(|c| c.is_ascii_digit())
}

/// Sorts ids as drawn: lettered families by number, then PSL, then the rest.
fn id_key(id: &str) -> (usize, u32, String) {
    const FAMILIES: [&str; 9] = ["A", "B", "C", "D", "E", "F", "PSL", "ELEVEN_CELL", "NOPSL_"];
    for (k, fam) in FAMILIES.iter().enumerate() {
        if let Some(rest) = id.strip_prefix(fam) {
            if rest.is_empty() || rest.chars().all(|c| c.is_ascii_digit()) || *fam == "NOPSL_" {
                return (k, rest.parse().unwrap_or(0), id.to_string());
            }
        }
    }
    (FAMILIES.len(), 0, id.to_string())
}

#[derive(Debug, Clone)]
pub struct Corpus {
    entries: Vec<CorpusEntry>,
    groups: BTreeMap<String, GroupSpec>,
    expectations_text: String,
    groups_text: String,
}

impl Corpus {
    /// The corpus compiled into the library.
    pub fn embedded() -> &'static Corpus {
        static CORPUS: OnceLock<Corpus> = OnceLock::new();
        CORPUS.get_or_init(|| {
            let files = GRAPH_FILES
                .iter()
                .map(|(id, text)| (id.to_string(), text.to_string()))
                .collect();
            Corpus::build(files, EXPECTATIONS, GROUPS).expect("embedded corpus is well formed")
        })
    }

    /// Reads every `*.graph` file in `dir`, plus `expectations.toml` and
    /// `groups.toml` when present.
    pub fn from_dir(dir: &Path) -> Result<Corpus, CorpusError> {
        let io = |path: &Path, e: std::io::Error| CorpusError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let mut files = Vec::new();
        for item in std::fs::read_dir(dir).map_err(|e| io(dir, e))? {
            let path = item.map_err(|e| io(dir, e))?.path();
            if path.extension().is_some_and(|e| e == "graph") {
                let id = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or_default()
                    .to_string();
                files.push((
                    id,
                    std::fs::read_to_string(&path).map_err(|e| io(&path, e))?,
                ));
            }
        }
        let read_optional = |name: &str| -> Result<String, CorpusError> {
            let path = dir.join(name);
            match std::fs::read_to_string(&path) {
                Ok(s) => Ok(s),
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(String::new()),
                Err(e) => Err(io(&path, e)),
            }
        };
        Corpus::build(
            files,
            &read_optional("expectations.toml")?,
            &read_optional("groups.toml")?,
        )
    }

    /// The directory named by `SCG_CORPUS_DIR`, or the embedded corpus.
    pub fn from_env() -> Result<Corpus, CorpusError> {
        match std::env::var_os(CORPUS_DIR_VAR) {
            Some(dir) => Corpus::from_dir(Path::new(&dir)),
            None => Ok(Corpus::embedded().clone()),
        }
    }

    fn build(
        mut files: Vec<(String, String)>,
        expectations: &str,
        groups_text: &str,
    ) -> Result<Corpus, CorpusError> {
        let config = |file: &str, e: toml::de::Error| CorpusError::Config {
            file: file.into(),
            message: e.to_string(),
        };
        let mut expect: BTreeMap<String, Expectation> =
            toml::from_str(expectations).map_err(|e| config("expectations.toml", e))?;
        let groups: BTreeMap<String, GroupSpec> =
            toml::from_str(groups_text).map_err(|e| config("groups.toml", e))?;
        files.sort_by_key(|(id, _)| id_key(id));
        let mut entries = Vec::with_capacity(files.len());
        for (id, text) in files {
            let graph = PRGraph::parse(&text).map_err(|source| CorpusError::Graph {
                id: id.clone(),
                source,
            })?;
            let e = expect.remove(&id).unwrap_or_default();
            let comment = text
                .lines()
                .next()
                .and_then(|l| l.strip_prefix('#'))
                .map(|s| s.trim().to_string());
            entries.push(CorpusEntry {
                source: e.source.or(comment).unwrap_or_default(),
                expected_order: e.order.map(u128::from),
                expected_ip: e.ip,
                witnesses: e.words,
                ip_witness: e.ip_witness,
                graph,
                id,
            });
        }
        Ok(Corpus {
            entries,
            groups,
            expectations_text: expectations.to_string(),
            groups_text: groups_text.to_string(),
        })
    }

    /// Writes the corpus as a directory readable by [`Corpus::from_dir`].
    pub fn write_dir(&self, dir: &Path) -> Result<(), CorpusError> {
        let io = |path: &Path, e: std::io::Error| CorpusError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        for e in &self.entries {
            let path = dir.join(format!("{}.graph", e.id));
            std::fs::write(&path, format!("# {}\n{}", e.source, e.graph.to_text()))
                .map_err(|err| io(&path, err))?;
        }
        for (name, text) in [
            ("expectations.toml", &self.expectations_text),
            ("groups.toml", &self.groups_text),
        ] {
            let path = dir.join(name);
            std::fs::write(&path, text).map_err(|e| io(&path, e))?;
        }
        Ok(())
    }

    pub fn ids(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.id.as_str()).collect()
    }

    pub fn entries(&self) -> &[CorpusEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Result<&CorpusEntry, CorpusError> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| CorpusError::UnknownId(id.to_string()))
    }

    pub fn group_names(&self) -> Vec<&str> {
        self.groups.keys().map(String::as_str).collect()
    }

    /// A named target group, checked against its recorded order.
    pub fn group(&self, name: &str) -> Result<PermGroup, CorpusError> {
        let spec = self
            .groups
            .get(name)
            .ok_or_else(|| CorpusError::UnknownGroup(name.to_string()))?;
        let group = match (&spec.graph, &spec.generators) {
            (Some(id), _) => {
                let g = &self.get(id)?.graph;
                PermGroup::new(g.n(), g.to_generators())?
            }
            (None, Some(gens)) => {
                let n = spec.degree.unwrap_or(11);
                let gens = gens
                    .iter()
                    .map(|c| parse_cycles(c, n))
                    .collect::<Result<_, _>>()?;
                PermGroup::new(n, gens)?
            }
            (None, None) => {
                return Err(CorpusError::Config {
                    file: "groups.toml".into(),
                    message: format!("group {name:?} has neither graph nor generators"),
                })
            }
        };
        match spec.order {
            Some(o) if u128::from(o) != group.order() => Err(CorpusError::Config {
                file: "groups.toml".into(),
                message: format!("group {name:?} has order {}, recorded {o}", group.order()),
            }),
            _ => Ok(group),
        }
    }
}

pub fn load(id: &str) -> Result<CorpusEntry, CorpusError> {
    Corpus::embedded().get(id).cloned()
}

pub fn all_ids() -> Vec<&'static str> {
    Corpus::embedded().ids()
}

/// Witness words recorded for `id`; empty for unknown ids or ids without any.
pub fn witnesses(id: &str) -> Vec<WitnessWord> {
    Corpus::embedded()
        .get(id)
        .map(|e| e.witnesses.clone())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_in_drawing_order() {
        let ids = all_ids();
        assert_eq!(ids.len(), 61);
        assert_eq!(&ids[..5], &["A1", "A2", "A3", "A4", "B1"]);
        assert_eq!(ids[13], "B10");
        assert!(ids.contains(&"F10"));
        assert_eq!(
            &ids[52..],
            &[
                "PSL1",
                "PSL2",
                "PSL3",
                "PSL4",
                "PSL5",
                "ELEVEN_CELL",
                "NOPSL_A",
                "NOPSL_B",
                "NOPSL_C"
            ]
        );
        let mut unique = ids.clone();
        unique.sort();
        unique.dedup();
        assert_eq!(unique.len(), ids.len());
        assert_eq!(ids.iter().filter(|i| is_appendix_id(i)).count(), 52);
    }

    #[test]
    fn a1_shape() {
        let a1 = load("A1").unwrap();
        assert_eq!((a1.graph.n(), a1.graph.rank()), (11, 4));
        let doubles: Vec<Vec<usize>> = a1
            .graph
            .find_motifs()
            .into_iter()
            .filter(|m| m.kind == crate::prgraph::MotifKind::DoubleEdge)
            .map(|m| m.labels)
            .collect();
        assert_eq!(doubles, vec![vec![0, 2], vec![1, 3]]);
        assert!(load("Z9").is_err());
    }

    #[test]
    fn eleven_cell_multi_edges() {
        let g = load("ELEVEN_CELL").unwrap().graph;
        assert_eq!(g.rank(), 4);
        let labels: Vec<Vec<usize>> = g
            .find_motifs()
            .into_iter()
            .filter(|m| m.vertices.len() == 2)
            .map(|m| m.labels)
            .collect();
        assert!(labels.contains(&vec![0, 2]));
        assert!(labels.contains(&vec![0, 1, 3]));
    }

    #[test]
    fn witness_words_evaluate() {
        for id in ["A1", "B14", "NOPSL_A", "NOPSL_B", "NOPSL_C"] {
            let entry = load(id).unwrap();
            assert!(!entry.witnesses.is_empty());
            for check in entry.evaluate_witnesses() {
                assert!(check.matches, "{id} {}: {:?}", check.name, check);
            }
        }
        assert!(witnesses("PSL1").is_empty());
        assert!(witnesses("nope").is_empty());
    }

    #[test]
    fn named_groups() {
        let c = Corpus::embedded();
        assert_eq!(c.group("m11").unwrap().order(), 7920);
        assert_eq!(c.group("psl2_11").unwrap().order(), 660);
        assert_eq!(c.group("s4").unwrap().order(), 24);
        assert!(matches!(c.group("a5"), Err(CorpusError::UnknownGroup(_))));
    }

    #[test]
    fn directory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("P.graph"),
            "points 3\nrank 2\nedge 1 2 0\nedge 2 3 1\n",
        )
        .unwrap();
        std::fs::write(
            dir.path().join("expectations.toml"),
            "[P]\norder = 6\nip = \"holds\"\n",
        )
        .unwrap();
        let c = Corpus::from_dir(dir.path()).unwrap();
        let p = c.get("P").unwrap();
        assert_eq!(p.expected_order, Some(6));
        assert_eq!(p.expected_ip, Some(IpStatus::Holds));
        std::fs::write(
            dir.path().join("Q.graph"),
            "points 3\nrank 2\nedge 1 2 0\nedge 1 3 0\n",
        )
        .unwrap();
        assert!(matches!(
            Corpus::from_dir(dir.path()),
            Err(CorpusError::Graph { .. })
        ));
    }
}
