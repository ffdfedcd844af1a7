//! File formats shared by the command line tools.

use crate::error::{Error, Result};
use crate::graph::{parse_designator, Graph, PairIndex};
use crate::prescription::MissedPairSet;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A graph from a designator such as `cycle:5`, or from an edge-list file.
pub fn load_graph(designator: &str) -> Result<Graph> {
    let path = Path::new(designator);
    if path.is_file() {
        let text = read_text(path)?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("graph").to_string();
        return Ok(Graph::from_edge_list(&text)?.with_name(name));
    }
    parse_designator(designator)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// Missed pairs of a host, each as two edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissedPairFile {
    pub host: Graph,
    pub missed: Vec<[usize; 2]>,
}

impl MissedPairFile {
    pub fn new(host: &Graph, missed: &MissedPairSet) -> MissedPairFile {
        MissedPairFile {
            host: host.clone(),
            missed: missed.edge_pairs(&PairIndex::new(host)),
        }
    }

    pub fn to_set(&self) -> Result<MissedPairSet> {
        let pairs: Vec<(usize, usize)> = self.missed.iter().map(|&[a, b]| (a, b)).collect();
        MissedPairSet::from_edge_pairs(&PairIndex::new(&self.host), &pairs)
    }
}

/// Output of an enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateList {
    pub host: Graph,
    pub k: usize,
    pub suite: String,
    pub complete: bool,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub candidates: Vec<Vec<[usize; 2]>>,
}

impl CandidateList {
    pub fn sets(&self) -> Result<Vec<MissedPairSet>> {
        let index = PairIndex::new(&self.host);
        self.candidates
            .iter()
            .map(|c| {
                let pairs: Vec<(usize, usize)> = c.iter().map(|&[a, b]| (a, b)).collect();
                MissedPairSet::from_edge_pairs(&index, &pairs)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missed_file_round_trip() {
        let g = parse_designator("prism").unwrap();
        let index = PairIndex::new(&g);
        let m = MissedPairSet::from_edge_pairs(&index, &[index.pair(0), index.pair(5)]).unwrap();
        let file = MissedPairFile::new(&g, &m);
        let back: MissedPairFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(back.to_set().unwrap(), m);
    }

    #[test]
    fn designators_and_files() {
        assert_eq!(load_graph("cycle:5").unwrap().edge_count(), 5);
        let dir = std::env::temp_dir().join(format!("maxcr-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("tri.txt");
        std::fs::write(&path, "0 1\n1 2\n0 2\n").unwrap();
        let g = load_graph(path.to_str().unwrap()).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.name()), (3, 3, "tri"));
        std::fs::remove_dir_all(dir).unwrap();
    }
}
