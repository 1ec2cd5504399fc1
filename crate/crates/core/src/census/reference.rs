use std::fmt;

use super::db::CensusDatabase;
use super::engine::TIE_TOLERANCE;
use super::CensusError;

/// Adjacent ranks closer than this are reported as near-collisions.
pub const NEAR_COLLISION: f64 = 1e-6;

/// Rank to volume table. Ranks start at 1 and are contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTable {
    volumes: Vec<f64>,
}

impl ReferenceTable {
    /// The 825 published volumes.
    pub fn bundled() -> Self {
        Self::parse(include_str!("../../data/reference_volumes.tsv")).expect("bundled table parses")
    }

    pub fn from_volumes(volumes: Vec<f64>) -> Self {
        ReferenceTable { volumes }
    }

    /// Accepts `rank<TAB>volume` lines and `rank: volume` lines, with `#`
    /// comments and blank lines ignored.
    pub fn parse(text: &str) -> Result<Self, CensusError> {
        let mut volumes = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: &str| CensusError::Reference {
                line,
                message: message.to_string(),
            };
            let s = raw.split('#').next().unwrap_or("").trim();
            if s.is_empty() {
                continue;
            }
            let (rank, vol) = match s.split_once(':') {
                Some((a, b)) => (a, b),
                None => s
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| err("expected rank and volume"))?,
            };
            let rank: usize = rank.trim().parse().map_err(|_| err("bad rank"))?;
            let vol: f64 = vol.trim().parse().map_err(|_| err("bad volume"))?;
            if !vol.is_finite() || vol <= 0.0 {
                return Err(err("volume must be positive"));
            }
            if rank != volumes.len() + 1 {
                return Err(err("ranks must start at 1 and increase by one"));
            }
            volumes.push(vol);
        }
        Ok(ReferenceTable { volumes })
    }

    pub fn len(&self) -> usize {
        self.volumes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.volumes.is_empty()
    }

    pub fn volume(&self, rank: usize) -> Option<f64> {
        rank.checked_sub(1).and_then(|i| self.volumes.get(i)).copied()
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub rank: usize,
    pub computed: f64,
    pub reference: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub requested: usize,
    pub compared: usize,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub first_mismatch: Option<Mismatch>,
    /// Ranks `r` whose volume exceeds that of rank `r + 1`.
    pub inversions: Vec<usize>,
    /// Ranks `r` whose volume is within [`NEAR_COLLISION`] of rank `r + 1`.
    pub near_collisions: Vec<usize>,
    pub passed: bool,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "compared {} of {} ranks at tolerance {:e}",
            self.compared, self.requested, self.tolerance
        )?;
        writeln!(f, "max deviation {:.3e}", self.max_deviation)?;
        if let Some(m) = &self.first_mismatch {
            writeln!(
                f,
                "first mismatch at rank {}: computed {} reference {}",
                m.rank, m.computed, m.reference
            )?;
        }
        for r in &self.inversions {
            writeln!(f, "inversion between ranks {} and {}", r, r + 1)?;
        }
        for r in &self.near_collisions {
            writeln!(f, "near-collision between ranks {} and {}", r, r + 1)?;
        }
        write!(f, "{}", if self.passed { "PASS" } else { "FAIL" })
    }
}

/// Compares ranks `1..=upto` of `db` with `table`.
pub fn verify_against(db: &CensusDatabase, table: &ReferenceTable, upto: usize, tol: f64) -> VerifyReport {
    let mut computed = Vec::new();
    for rank in 1..=upto {
        match db.by_rank(rank).and_then(|e| e.volume) {
            Some(v) => computed.push(v),
            None => break,
        }
    }
    let mut compared = 0;
    let mut max_deviation: f64 = 0.0;
    let mut first_mismatch = None;
    for (i, &v) in computed.iter().enumerate() {
        let Some(r) = table.volume(i + 1) else { break };
        compared += 1;
        let dev = (v - r).abs();
        max_deviation = max_deviation.max(dev);
        if !(dev <= tol) && first_mismatch.is_none() {
            first_mismatch = Some(Mismatch {
                rank: i + 1,
                computed: v,
                reference: r,
            });
        }
    }
    let mut inversions = Vec::new();
    let mut near_collisions = Vec::new();
    for (i, w) in computed.windows(2).enumerate() {
        if w[0] > w[1] + TIE_TOLERANCE {
            inversions.push(i + 1);
        }
        if (w[1] - w[0]).abs() < NEAR_COLLISION {
            near_collisions.push(i + 1);
        }
    }
    let passed = compared == upto && first_mismatch.is_none() && inversions.is_empty();
    VerifyReport {
        requested: upto,
        compared,
        tolerance: tol,
        max_deviation,
        first_mismatch,
        inversions,
        near_collisions,
        passed,
    }
}
