//! Map file container.
//!
//! ```text
//! offset  size  content
//! 0       8     magic "REACHMAP"
//! 8       4     header length H (u32 LE)
//! 12      H     JSON header: {"magic", "format_version", "grid", "n_dir",
//!               "entry_count", "metadata"}
//! 12+H    6N    N entries sorted by voxel index: u32 LE index, u16 LE
//!               score numerator (score = numerator / n_dir)
//! end-32  32    SHA-256 of every preceding byte
//! ```
//!
//! [`CapabilityMap::to_json`] is the pure-JSON variant of the same content.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CapMapError, CapabilityMap, MapMetadata, VoxelGrid};

pub const MAP_MAGIC: &[u8; 8] = b"REACHMAP";
pub const MAP_FORMAT_VERSION: u32 = 1;

const ENTRY_BYTES: usize = 6;
const DIGEST_BYTES: usize = 32;
const PREFIX_BYTES: usize = 12;

#[derive(Serialize, Deserialize)]
struct Header {
    magic: String,
    format_version: u32,
    grid: VoxelGrid,
    n_dir: u16,
    entry_count: u64,
    metadata: MapMetadata,
}

#[derive(Serialize, Deserialize)]
struct JsonMap {
    #[serde(flatten)]
    header: Header,
    /// `[voxel_index, numerator]` pairs.
    entries: Vec<(u32, u16)>,
}

impl CapabilityMap {
    fn header(&self) -> Header {
        Header {
            magic: String::from_utf8_lossy(MAP_MAGIC).into_owned(),
            format_version: MAP_FORMAT_VERSION,
            grid: self.grid,
            n_dir: self.n_dir,
            entry_count: self.occupied_count() as u64,
            metadata: self.metadata.clone(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let header = serde_json::to_vec(&self.header()).expect("header serializes");
        let n = self.occupied_count();
        let mut out = Vec::with_capacity(PREFIX_BYTES + header.len() + ENTRY_BYTES * n + DIGEST_BYTES);
        out.extend_from_slice(MAP_MAGIC);
        out.extend_from_slice(&(header.len() as u32).to_le_bytes());
        out.extend_from_slice(&header);
        for (idx, k) in self.occupied() {
            out.extend_from_slice(&idx.to_le_bytes());
            out.extend_from_slice(&k.to_le_bytes());
        }
        let digest = Sha256::digest(&out);
        out.extend_from_slice(&digest);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CapMapError> {
        if bytes.len() < MAP_MAGIC.len() || &bytes[..MAP_MAGIC.len()] != MAP_MAGIC {
            return Err(CapMapError::BadMagic);
        }
        if bytes.len() < PREFIX_BYTES {
            return Err(CapMapError::Corrupt("missing header length".into()));
        }
        let header_len = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        let header_end = PREFIX_BYTES
            .checked_add(header_len)
            .filter(|end| *end <= bytes.len())
            .ok_or_else(|| CapMapError::Corrupt("header extends past end of file".into()))?;
        let header: Header = serde_json::from_slice(&bytes[PREFIX_BYTES..header_end])
            .map_err(|e| CapMapError::Corrupt(format!("header: {e}")))?;
        if header.format_version != MAP_FORMAT_VERSION {
            return Err(CapMapError::VersionMismatch {
                found: header.format_version,
                expected: MAP_FORMAT_VERSION,
            });
        }
        if header.magic.as_bytes() != MAP_MAGIC {
            return Err(CapMapError::BadMagic);
        }
        let expected_len = (header.entry_count as usize)
            .checked_mul(ENTRY_BYTES)
            .and_then(|b| b.checked_add(header_end + DIGEST_BYTES));
        if expected_len != Some(bytes.len()) {
            return Err(CapMapError::Corrupt(format!(
                "expected {} entries, file length {} does not match",
                header.entry_count,
                bytes.len()
            )));
        }
        let body_end = bytes.len() - DIGEST_BYTES;
        if Sha256::digest(&bytes[..body_end]).as_slice() != &bytes[body_end..] {
            return Err(CapMapError::ChecksumMismatch);
        }
        let mut entries = Vec::with_capacity(header.entry_count as usize);
        let mut last: Option<u32> = None;
        for chunk in bytes[header_end..body_end].chunks_exact(ENTRY_BYTES) {
            let idx = u32::from_le_bytes(chunk[..4].try_into().unwrap());
            let k = u16::from_le_bytes(chunk[4..].try_into().unwrap());
            if last.is_some_and(|l| l >= idx) {
                return Err(CapMapError::InvalidMap("entries not strictly sorted by index".into()));
            }
            last = Some(idx);
            entries.push((idx, k));
        }
        Self::from_entries(header.grid, header.n_dir, entries, header.metadata)
    }

    pub fn to_json(&self) -> String {
        let doc = JsonMap { header: self.header(), entries: self.occupied().collect() };
        serde_json::to_string_pretty(&doc).expect("map serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CapMapError> {
        let doc: JsonMap = serde_json::from_str(text).map_err(|e| CapMapError::Corrupt(e.to_string()))?;
        if doc.header.format_version != MAP_FORMAT_VERSION {
            return Err(CapMapError::VersionMismatch {
                found: doc.header.format_version,
                expected: MAP_FORMAT_VERSION,
            });
        }
        if doc.entries.len() as u64 != doc.header.entry_count {
            return Err(CapMapError::Corrupt("entry_count does not match entries".into()));
        }
        Self::from_entries(doc.header.grid, doc.header.n_dir, doc.entries, doc.header.metadata)
    }
}

pub fn save_map(map: &CapabilityMap, path: impl AsRef<Path>) -> Result<(), CapMapError> {
    std::fs::write(path, map.to_bytes())?;
    Ok(())
}

pub fn load_map(path: impl AsRef<Path>) -> Result<CapabilityMap, CapMapError> {
    CapabilityMap::from_bytes(&std::fs::read(path)?)
}
