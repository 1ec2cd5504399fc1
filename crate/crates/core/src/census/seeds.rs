use std::path::PathBuf;

use crate::polyhedron::CombinatorialPolyhedron;
use crate::surgery::{compose, lobell, CompositionSite};

use super::db::Provenance;
use super::CensusError;

/// Löbell polyhedra L5..L14 and the doubled dodecahedron.
pub const DEFAULT_SEEDS: &str = "lobell:5..14,double:lobell:5";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedSource {
    Lobell(usize),
    /// L_n glued to itself along an n-gon.
    DoubleLobell(usize),
    File(PathBuf),
}

impl SeedSource {
    pub fn build(&self) -> Result<(CombinatorialPolyhedron, Provenance), CensusError> {
        match self {
            SeedSource::Lobell(n) => lobell(*n)
                .map(|p| (p, Provenance::Seed))
                .map_err(|e| CensusError::SeedSpec(e.to_string())),
            SeedSource::DoubleLobell(n) => {
                let l = lobell(*n).map_err(|e| CensusError::SeedSpec(e.to_string()))?;
                // Face 0 is an n-gon; glue it to its copy identically.
                let site = CompositionSite {
                    face_p: 0,
                    face_q: 0,
                    offset: 0,
                    flip: true,
                };
                let p = compose(&l, &l, &site).map_err(|e| CensusError::SeedSpec(e.to_string()))?;
                Ok((p, Provenance::Composition))
            }
            SeedSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CensusError::Io {
                    path: path.clone(),
                    source,
                })?;
                let p = CombinatorialPolyhedron::parse(&text).map_err(|source| {
                    CensusError::Polyhedron {
                        path: path.clone(),
                        source,
                    }
                })?;
                Ok((p, Provenance::Seed))
            }
        }
    }
}

const MAX_LOBELL: usize = 200;

/// Parses `lobell:<n|a..b>`, `double:lobell:<n>` and `file:<path>` items
/// separated by commas.
pub fn parse_seed_spec(spec: &str) -> Result<Vec<SeedSource>, CensusError> {
    let bad = || CensusError::SeedSpec(spec.to_string());
    let mut out = Vec::new();
    for item in spec.split(',') {
        let item = item.trim();
        if let Some(rest) = item.strip_prefix("double:lobell:") {
            let n = parse_index(rest).ok_or_else(bad)?;
            out.push(SeedSource::DoubleLobell(n));
        } else if let Some(rest) = item.strip_prefix("lobell:") {
            if let Some((a, b)) = rest.split_once("..") {
                let a = parse_index(a).ok_or_else(bad)?;
                let b = parse_index(b).ok_or_else(bad)?;
                if a > b {
                    return Err(bad());
                }
                out.extend((a..=b).map(SeedSource::Lobell));
            } else {
                out.push(SeedSource::Lobell(parse_index(rest).ok_or_else(bad)?));
            }
        } else if let Some(rest) = item.strip_prefix("file:") {
            if rest.is_empty() {
                return Err(bad());
            }
            out.push(SeedSource::File(PathBuf::from(rest)));
        } else {
            return Err(bad());
        }
    }
    Ok(out)
}

fn parse_index(s: &str) -> Option<usize> {
    let n: usize = s.trim().parse().ok()?;
    (5..=MAX_LOBELL).contains(&n).then_some(n)
}
