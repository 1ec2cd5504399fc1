use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::canon::{canonical_code, CanonicalCode};
use crate::polyhedron::{CombinatorialPolyhedron, FaceVector};

use super::engine::CensusOptions;
use super::CensusError;

pub const HEADER: &str = "# rapcensus v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Seed,
    EdgeChild,
    Composition,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Seed => "seed",
            Provenance::EdgeChild => "edge-child",
            Provenance::Composition => "composition",
        })
    }
}

impl std::str::FromStr for Provenance {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "seed" => Ok(Provenance::Seed),
            "edge-child" => Ok(Provenance::EdgeChild),
            "composition" => Ok(Provenance::Composition),
            _ => Err(format!("unknown provenance `{s}`")),
        }
    }
}

/// `site` is the edge-addition site on the parent's stored polyhedron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentLink {
    pub parent: usize,
    pub site: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusEntry {
    pub id: usize,
    pub code: CanonicalCode,
    pub volume: Option<f64>,
    pub volume_status: VolumeStatus,
    pub expanded: bool,
    pub rank: Option<usize>,
    pub face_vector: FaceVector,
    pub parents: Vec<ParentLink>,
    pub provenance: Provenance,
}

/// The census: entries by id, their canonical polyhedra, and indexes.
#[derive(Debug, Clone)]
pub struct CensusDatabase {
    pub(super) path: Option<PathBuf>,
    pub(super) entries: Vec<CensusEntry>,
    pub(super) polyhedra: Vec<CombinatorialPolyhedron>,
    pub(super) by_code: HashMap<CanonicalCode, usize>,
    pub(super) by_face_vector: BTreeMap<FaceVector, Vec<usize>>,
    pub(super) by_rank: Vec<usize>,
    pub(super) options: CensusOptions,
}

impl CensusDatabase {
    pub fn empty(path: Option<PathBuf>, options: CensusOptions) -> Self {
        CensusDatabase {
            path,
            entries: Vec::new(),
            polyhedra: Vec::new(),
            by_code: HashMap::new(),
            by_face_vector: BTreeMap::new(),
            by_rank: Vec::new(),
            options,
        }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn options(&self) -> &CensusOptions {
        &self.options
    }

    pub fn set_options(&mut self, options: CensusOptions) {
        self.options = options;
    }

    pub fn entries(&self) -> &[CensusEntry] {
        &self.entries
    }

    pub fn entry(&self, id: usize) -> Option<&CensusEntry> {
        self.entries.get(id)
    }

    /// The stored polyhedron of an entry, in canonical labeling.
    pub fn polyhedron(&self, id: usize) -> Option<&CombinatorialPolyhedron> {
        self.polyhedra.get(id)
    }

    pub fn find_code(&self, code: &CanonicalCode) -> Option<usize> {
        self.by_code.get(code).copied()
    }

    pub fn find(&self, p: &CombinatorialPolyhedron) -> Option<usize> {
        self.find_code(&canonical_code(p))
    }

    pub fn with_face_vector(&self, fv: &FaceVector) -> &[usize] {
        self.by_face_vector.get(fv).map_or(&[], Vec::as_slice)
    }

    /// Entry ids in rank order (index 0 holds rank 1).
    pub fn ranked(&self) -> &[usize] {
        &self.by_rank
    }

    pub fn by_rank(&self, rank: usize) -> Option<&CensusEntry> {
        rank.checked_sub(1)
            .and_then(|i| self.by_rank.get(i))
            .map(|&id| &self.entries[id])
    }

    pub fn num_ranked(&self) -> usize {
        self.by_rank.len()
    }

    pub(super) fn insert(&mut self, entry: CensusEntry, poly: CombinatorialPolyhedron) -> usize {
        let id = self.entries.len();
        debug_assert_eq!(entry.id, id);
        self.by_code.insert(entry.code.clone(), id);
        self.by_face_vector
            .entry(entry.face_vector.clone())
            .or_default()
            .push(id);
        if let Some(r) = entry.rank {
            if self.by_rank.len() < r {
                self.by_rank.resize(r, usize::MAX);
            }
            self.by_rank[r - 1] = id;
        }
        self.entries.push(entry);
        self.polyhedra.push(poly);
        id
    }

    /// The database table as text.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        s.push_str(HEADER);
        s.push('\n');
        for e in &self.entries {
            let parents = if e.parents.is_empty() {
                "-".to_string()
            } else {
                e.parents
                    .iter()
                    .map(|l| format!("{}@{}", l.parent, l.site))
                    .collect::<Vec<_>>()
                    .join(";")
            };
            let volume = match (e.volume_status, e.volume) {
                (VolumeStatus::Ok, Some(v)) => format_volume(v),
                _ => "FAIL".to_string(),
            };
            s.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                e.id,
                if e.expanded { "expanded" } else { "unexpanded" },
                e.rank.map_or("-".to_string(), |r| r.to_string()),
                volume,
                e.face_vector.to_sparse_string(),
                e.code.to_hex(),
                parents,
                e.provenance
            ));
        }
        s
    }

    /// Parses the table; polyhedra are not attached.
    pub fn parse_entries(text: &str) -> Result<Vec<CensusEntry>, CensusError> {
        let mut lines = text.lines().enumerate();
        let bad = |line: usize, message: String| CensusError::Format { line, message };
        match lines.next() {
            Some((_, h)) if h.trim_end() == HEADER => {}
            _ => return Err(bad(1, format!("missing header `{HEADER}`"))),
        }
        let mut out: Vec<CensusEntry> = Vec::new();
        for (idx, raw) in lines {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').collect();
            if cols.len() != 8 {
                return Err(bad(line, format!("expected 8 columns, found {}", cols.len())));
            }
            let id: usize = cols[0]
                .parse()
                .map_err(|_| bad(line, format!("bad id `{}`", cols[0])))?;
            if id != out.len() {
                return Err(bad(line, format!("id {id} out of sequence")));
            }
            let expanded = match cols[1] {
                "expanded" => true,
                "unexpanded" => false,
                s => return Err(bad(line, format!("bad status `{s}`"))),
            };
            let rank = match cols[2] {
                "-" => None,
                s => Some(
                    s.parse::<usize>()
                        .ok()
                        .filter(|&r| r >= 1)
                        .ok_or_else(|| bad(line, format!("bad rank `{s}`")))?,
                ),
            };
            let (volume, volume_status) = match cols[3] {
                "FAIL" => (None, VolumeStatus::Failed),
                s => {
                    let v: f64 = s
                        .parse()
                        .ok()
                        .filter(|v: &f64| v.is_finite() && *v > 0.0)
                        .ok_or_else(|| bad(line, format!("bad volume `{s}`")))?;
                    (Some(v), VolumeStatus::Ok)
                }
            };
            let face_vector = FaceVector::parse_sparse(cols[4])
                .ok_or_else(|| bad(line, format!("bad face vector `{}`", cols[4])))?;
            let code = CanonicalCode::from_hex(cols[5])
                .ok_or_else(|| bad(line, "bad code".to_string()))?;
            let mut parents = Vec::new();
            if cols[6] != "-" {
                for part in cols[6].split(';') {
                    let (pid, site) = part
                        .split_once('@')
                        .ok_or_else(|| bad(line, format!("bad parent `{part}`")))?;
                    let parent: usize = pid
                        .parse()
                        .map_err(|_| bad(line, format!("bad parent id `{pid}`")))?;
                    // The discovering parent comes first and must precede the
                    // entry; later links may point anywhere in the table.
                    if parents.is_empty() && parent >= id {
                        return Err(bad(line, format!("parent {parent} is not an earlier entry")));
                    }
                    if parent == id {
                        return Err(bad(line, "entry is its own parent".to_string()));
                    }
                    if site.is_empty() {
                        return Err(bad(line, "empty parent site".to_string()));
                    }
                    parents.push(ParentLink {
                        parent,
                        site: site.to_string(),
                    });
                }
            }
            let provenance = cols[7].parse().map_err(|m| bad(line, m))?;
            if rank.is_some() != expanded {
                return Err(bad(line, "rank must be present exactly when expanded".into()));
            }
            out.push(CensusEntry {
                id,
                code,
                volume,
                volume_status,
                expanded,
                rank,
                face_vector,
                parents,
                provenance,
            });
        }
        if let Some(e) = out.iter().find(|e| e.parents.iter().any(|l| l.parent >= out.len())) {
            return Err(bad(0, format!("entry {} has a parent outside the table", e.id)));
        }
        let mut seen_rank = vec![false; out.len() + 1];
        for e in &out {
            if let Some(r) = e.rank {
                if r > out.len() || seen_rank[r] {
                    return Err(bad(0, format!("rank {r} repeated or out of range")));
                }
                seen_rank[r] = true;
            }
        }
        let ranked = seen_rank.iter().filter(|&&s| s).count();
        if seen_rank[1..=ranked].iter().any(|s| !s) {
            return Err(bad(0, "ranks are not contiguous from 1".into()));
        }
        Ok(out)
    }

    /// Loads a database and its polyhedron files.
    pub fn load(path: &Path, options: CensusOptions) -> Result<Self, CensusError> {
        let text = fs::read_to_string(path).map_err(|source| CensusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let entries = Self::parse_entries(&text)?;
        let mut db = CensusDatabase::empty(Some(path.to_path_buf()), options);
        for e in entries {
            let rap = db.rap_path(e.id).expect("path set");
            let body = fs::read_to_string(&rap).map_err(|source| CensusError::Io {
                path: rap.clone(),
                source,
            })?;
            let poly = CombinatorialPolyhedron::parse(&body)
                .map_err(|source| CensusError::Polyhedron { path: rap, source })?;
            if canonical_code(&poly) != e.code {
                return Err(CensusError::CodeMismatch { id: e.id });
            }
            if let Some(&other) = db.by_code.get(&e.code) {
                return Err(CensusError::Duplicate(other));
            }
            db.insert(e, poly);
        }
        Ok(db)
    }

    pub(super) fn rap_path(&self, id: usize) -> Option<PathBuf> {
        let path = self.path.as_ref()?;
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        Some(dir.join(format!("{id}.rap")))
    }

    /// Writes polyhedron files for `ids` and then the table, each through a
    /// temporary file and a rename.
    pub(super) fn persist(&self, ids: impl IntoIterator<Item = usize>) -> Result<(), CensusError> {
        let Some(path) = self.path.clone() else {
            return Ok(());
        };
        for id in ids {
            let rap = self.rap_path(id).expect("path set");
            atomic_write(&rap, self.polyhedra[id].serialize().as_bytes())?;
        }
        atomic_write(&path, self.serialize().as_bytes())
    }
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), CensusError> {
    let io = |source| CensusError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(bytes).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, path).map_err(io)
}

/// 17 significant digits in positional notation.
pub fn format_volume(v: f64) -> String {
    let int_digits = if v.abs() < 1.0 {
        1
    } else {
        v.abs().log10().floor() as i32 + 1
    };
    let prec = (17 - int_digits).max(0) as usize;
    format!("{v:.prec$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volume_format_round_trips() {
        for v in [4.306_207_600_730_818_5, 10.670_589_1, 0.5, 123.456] {
            let s = format_volume(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(format_volume(4.306_207_600_730_818_5), "4.3062076007308185");
    }

    #[test]
    fn header_required() {
        assert!(CensusDatabase::parse_entries("0\tx").is_err());
        assert!(CensusDatabase::parse_entries(HEADER).unwrap().is_empty());
    }
}
