//! Versioned binary persistence for the quadrature rules and the Legendre table.
//!
//! Layout of a table file, all integers and reals little-endian:
//!
//! ```text
//! "SGLT" | version: u32 | B: u32 | kind: u8 | payload: f64 × len | crc32(payload): u32
//! ```
//!
//! Payload order per kind:
//!
//! * radial (1): `2B` nodes, `2B` weights, `2B` modified weights
//! * spherical (2): `2B` polar nodes, `2B` azimuths, `2B` raw weights, `2B` calibrated weights
//! * Legendre (3): for `m = 0..B`, `l = m..B`: the row length `l + 1` as a real, then the row
//!
//! A directory written by [`precompute_all`] also holds `manifest.txt` with one
//! `filename  sha256  kind  B` line per table.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Result, SglError};
use crate::quadrature::{half_range_hermite_rule, sphere_rule, RadialRule, SphericalRule};
use crate::spherical::LegendreDctTable;
use crate::transform::TransformPlan;

pub const MAGIC: &[u8; 4] = b"SGLT";
pub const FORMAT_VERSION: u32 = 1;
pub const MANIFEST_NAME: &str = "manifest.txt";
const HEADER_LEN: usize = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum TableKind {
    Radial = 1,
    Spherical = 2,
    Legendre = 3,
}

impl TableKind {
    pub const ALL: [TableKind; 3] = [TableKind::Radial, TableKind::Spherical, TableKind::Legendre];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(TableKind::Radial),
            2 => Some(TableKind::Spherical),
            3 => Some(TableKind::Legendre),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TableKind::Radial => "radial",
            TableKind::Spherical => "spherical",
            TableKind::Legendre => "legendre",
        }
    }

    /// Canonical file name inside a table directory.
    pub fn file_name(self, bandlimit: usize) -> String {
        format!("{}_b{bandlimit}.sglt", self.name())
    }
}

/// Any persisted table.
#[derive(Debug, Clone, PartialEq)]
pub enum Table {
    Radial(RadialRule),
    Spherical(SphericalRule),
    Legendre(LegendreDctTable),
}

impl Table {
    pub fn kind(&self) -> TableKind {
        match self {
            Table::Radial(_) => TableKind::Radial,
            Table::Spherical(_) => TableKind::Spherical,
            Table::Legendre(_) => TableKind::Legendre,
        }
    }

    /// Bandlimit the table belongs to.
    pub fn bandlimit(&self) -> usize {
        match self {
            Table::Radial(rule) => rule.order / 2,
            Table::Spherical(rule) => rule.order,
            Table::Legendre(table) => table.order(),
        }
    }

    fn payload(&self) -> Vec<f64> {
        match self {
            Table::Radial(rule) => [&rule.nodes[..], &rule.weights, &rule.modified_weights].concat(),
            Table::Spherical(rule) => [&rule.theta[..], &rule.phi, &rule.weights_raw, &rule.weights].concat(),
            Table::Legendre(table) => {
                let mut out = Vec::with_capacity(table.stored_len() + table.rows().len());
                for row in table.rows() {
                    out.push(row.len() as f64);
                    out.extend_from_slice(row);
                }
                out
            }
        }
    }
}

/// Serializes a table to its file image.
pub fn encode_table(table: &Table) -> Vec<u8> {
    let payload = table.payload();
    let mut bytes = Vec::with_capacity(HEADER_LEN + 8 * payload.len() + 4);
    bytes.extend_from_slice(MAGIC);
    bytes.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    bytes.extend_from_slice(&(table.bandlimit() as u32).to_le_bytes());
    bytes.push(table.kind().code());
    let start = bytes.len();
    for x in &payload {
        bytes.extend_from_slice(&x.to_le_bytes());
    }
    let crc = crc32fast::hash(&bytes[start..]);
    bytes.extend_from_slice(&crc.to_le_bytes());
    bytes
}

fn malformed(path: &Path, reason: impl Into<String>) -> SglError {
    SglError::Malformed {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn take(values: &mut &[f64], count: usize, path: &Path) -> Result<Vec<f64>> {
    if values.len() < count {
        return Err(malformed(path, format!("payload ends early: need {count} more values")));
    }
    let (head, tail) = values.split_at(count);
    *values = tail;
    Ok(head.to_vec())
}

/// Parses a file image; `path` only labels errors.
pub fn decode_table(bytes: &[u8], path: &Path) -> Result<Table> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(SglError::BadMagic {
            path: path.to_path_buf(),
        });
    }
    if bytes.len() < HEADER_LEN + 4 {
        return Err(malformed(path, "file shorter than header and checksum"));
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"));
    let version = word(4);
    if version != FORMAT_VERSION {
        return Err(SglError::VersionMismatch {
            path: path.to_path_buf(),
            found: version,
            supported: FORMAT_VERSION,
        });
    }
    let bandlimit = word(8) as usize;
    let code = bytes[12];
    let payload = &bytes[HEADER_LEN..bytes.len() - 4];
    let stored = word(bytes.len() - 4);
    let computed = crc32fast::hash(payload);
    if stored != computed {
        return Err(SglError::Checksum {
            path: path.to_path_buf(),
            stored,
            computed,
        });
    }
    let kind = TableKind::from_code(code).ok_or_else(|| malformed(path, format!("unknown table kind {code}")))?;
    if bandlimit == 0 {
        return Err(malformed(path, "bandlimit 0"));
    }
    if !payload.len().is_multiple_of(8) {
        return Err(malformed(path, "payload is not a whole number of reals"));
    }
    let values: Vec<f64> = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    let side = 2 * bandlimit;
    let mut rest = &values[..];
    let table = match kind {
        TableKind::Radial => {
            let nodes = take(&mut rest, side, path)?;
            let weights = take(&mut rest, side, path)?;
            let modified_weights = take(&mut rest, side, path)?;
            Table::Radial(RadialRule {
                order: side,
                nodes,
                weights,
                modified_weights,
            })
        }
        TableKind::Spherical => Table::Spherical(SphericalRule {
            order: bandlimit,
            theta: take(&mut rest, side, path)?,
            phi: take(&mut rest, side, path)?,
            weights_raw: take(&mut rest, side, path)?,
            weights: take(&mut rest, side, path)?,
        }),
        TableKind::Legendre => {
            let mut rows = Vec::with_capacity(bandlimit * (bandlimit + 1) / 2);
            for m in 0..bandlimit {
                for l in m..bandlimit {
                    let len = take(&mut rest, 1, path)?[0];
                    if len != (l + 1) as f64 {
                        return Err(malformed(path, format!("row (l, m) = ({l}, {m}) declares length {len}, expected {}", l + 1)));
                    }
                    rows.push(take(&mut rest, l + 1, path)?);
                }
            }
            Table::Legendre(LegendreDctTable::from_rows(bandlimit, rows)?)
        }
    };
    if !rest.is_empty() {
        return Err(malformed(path, format!("{} trailing values after the payload", rest.len())));
    }
    Ok(table)
}

/// Writes a table file; identical tables give identical bytes.
pub fn save_table(table: &Table, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_table(table)).map_err(|e| SglError::io(path, e))
}

/// Reads and validates a table file.
pub fn load_table(path: impl AsRef<Path>) -> Result<Table> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| SglError::io(path, e))?;
    decode_table(&bytes, path)
}

fn load_expected(dir: &Path, kind: TableKind, bandlimit: usize) -> Result<Table> {
    let path = dir.join(kind.file_name(bandlimit));
    let table = load_table(&path)?;
    if table.kind() != kind {
        return Err(SglError::KindMismatch {
            path,
            expected: kind.code(),
            found: table.kind().code(),
        });
    }
    if table.bandlimit() != bandlimit {
        return Err(SglError::BandlimitMismatch {
            plan: table.bandlimit(),
            requested: bandlimit,
        });
    }
    Ok(table)
}

/// One manifest line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub file: String,
    pub sha256: String,
    pub kind: TableKind,
    pub bandlimit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(out, "{}  {}  {}  {}", e.file, e.sha256, e.kind.name(), e.bandlimit);
        }
        out
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let entries = text
            .lines()
            .filter(|line| !line.trim().is_empty())
            .map(|line| {
                let fields: Vec<&str> = line.split_whitespace().collect();
                let [file, sha256, kind, bandlimit] = fields[..] else {
                    return Err(malformed(path, format!("manifest line `{line}` needs 4 fields")));
                };
                let kind = TableKind::ALL
                    .into_iter()
                    .find(|k| k.name() == kind)
                    .ok_or_else(|| malformed(path, format!("unknown table kind `{kind}`")))?;
                let bandlimit = bandlimit
                    .parse()
                    .map_err(|_| malformed(path, format!("bad bandlimit `{bandlimit}`")))?;
                Ok(ManifestEntry {
                    file: file.to_string(),
                    sha256: sha256.to_string(),
                    kind,
                    bandlimit,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Manifest { entries })
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Generates all three tables for `B`, writes them to `dir` and records them
/// in the directory manifest. Returns the entries for `B`.
pub fn precompute_all(bandlimit: usize, dir: impl AsRef<Path>) -> Result<Manifest> {
    let dir = dir.as_ref();
    if bandlimit == 0 {
        return Err(SglError::InvalidBandlimit(bandlimit));
    }
    fs::create_dir_all(dir).map_err(|e| SglError::io(dir, e))?;
    let spherical = sphere_rule(bandlimit)?;
    let legendre = LegendreDctTable::build_with(&spherical)?;
    let tables = [
        Table::Radial(half_range_hermite_rule(2 * bandlimit)?),
        Table::Spherical(spherical),
        Table::Legendre(legendre),
    ];
    let mut entries = Vec::with_capacity(tables.len());
    for table in &tables {
        let file = table.kind().file_name(bandlimit);
        let bytes = encode_table(table);
        let path = dir.join(&file);
        fs::write(&path, &bytes).map_err(|e| SglError::io(&path, e))?;
        entries.push(ManifestEntry {
            file,
            sha256: sha256_hex(&bytes),
            kind: table.kind(),
            bandlimit,
        });
    }
    let path = dir.join(MANIFEST_NAME);
    // entries for other bandlimits survive; an unreadable manifest is replaced
    let mut merged = fs::read_to_string(&path)
        .ok()
        .and_then(|text| Manifest::parse(&text, &path).ok())
        .map(|m| m.entries)
        .unwrap_or_default();
    merged.retain(|e| e.bandlimit != bandlimit);
    merged.extend(entries.iter().cloned());
    merged.sort_by_key(|a| (a.bandlimit, a.kind.code()));
    fs::write(&path, Manifest { entries: merged }.render()).map_err(|e| SglError::io(&path, e))?;
    Ok(Manifest { entries })
}

/// Builds a plan from the tables in `dir`. When a manifest is present, every
/// listed file for this bandlimit must match its digest.
pub fn load_plan(dir: impl AsRef<Path>, bandlimit: usize) -> Result<TransformPlan> {
    let dir = dir.as_ref();
    let manifest_path = dir.join(MANIFEST_NAME);
    if manifest_path.exists() {
        let text = fs::read_to_string(&manifest_path).map_err(|e| SglError::io(&manifest_path, e))?;
        let manifest = Manifest::parse(&text, &manifest_path)?;
        for entry in manifest.entries.iter().filter(|e| e.bandlimit == bandlimit) {
            let path = dir.join(&entry.file);
            let bytes = fs::read(&path).map_err(|e| SglError::io(&path, e))?;
            if sha256_hex(&bytes) != entry.sha256 {
                return Err(malformed(&path, "contents do not match the manifest digest"));
            }
        }
    }
    let Table::Radial(radial) = load_expected(dir, TableKind::Radial, bandlimit)? else {
        unreachable!("kind checked")
    };
    let Table::Spherical(spherical) = load_expected(dir, TableKind::Spherical, bandlimit)? else {
        unreachable!("kind checked")
    };
    let Table::Legendre(legendre) = load_expected(dir, TableKind::Legendre, bandlimit)? else {
        unreachable!("kind checked")
    };
    TransformPlan::from_tables(radial, spherical, legendre)
}

/// Whether `dir` holds all three table files for `B`.
pub fn has_tables(dir: impl AsRef<Path>, bandlimit: usize) -> bool {
    let dir = dir.as_ref();
    TableKind::ALL
        .iter()
        .all(|k| dir.join(k.file_name(bandlimit)).is_file())
}

/// Sizes in bytes of the three table files for `B`, in [`TableKind::ALL`] order.
pub fn table_file_sizes(dir: impl AsRef<Path>, bandlimit: usize) -> Result<Vec<(TableKind, u64)>> {
    let dir = dir.as_ref();
    TableKind::ALL
        .iter()
        .map(|&k| {
            let path: PathBuf = dir.join(k.file_name(bandlimit));
            let meta = fs::metadata(&path).map_err(|e| SglError::io(&path, e))?;
            Ok((k, meta.len()))
        })
        .collect()
}
