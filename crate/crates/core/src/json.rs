//! JSON records for census files.
//!
//! A family file is a JSON array of self-contained records
//! `{"group": {"orders": [...]}, "auts": [imageTables], "sections":
//! [[autId, ...]], "phi": [[sectionIdx, ...]]}`. Automorphism ids index the
//! record's own `auts` array; on load they are re-anchored to the freshly
//! enumerated catalog and the family is re-validated, so a file cannot
//! smuggle in a non-automorphism or an inconsistent `phi`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brace::Brace;
use crate::dbrace::{DBraceFamily, FamilyError, Section};
use crate::group::{FiniteAbelianGroup, GroupError, Holomorph};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupRecord {
    pub orders: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub group: GroupRecord,
    pub auts: Vec<Vec<usize>>,
    pub sections: Vec<Vec<usize>>,
    pub phi: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BraceRecord {
    pub group: GroupRecord,
    pub mult: Vec<Vec<usize>>,
}

impl BraceRecord {
    pub fn new(g: &FiniteAbelianGroup, brace: &Brace) -> Self {
        Self {
            group: GroupRecord {
                orders: g.orders().to_vec(),
            },
            mult: brace.mult.clone(),
        }
    }
}

/// Serializes one family against its holomorph. The record carries the full
/// automorphism catalog, so section entries are catalog ids verbatim.
pub fn family_record(hol: &Holomorph, fam: &DBraceFamily) -> FamilyRecord {
    FamilyRecord {
        group: GroupRecord {
            orders: hol.group().orders().to_vec(),
        },
        auts: (0..hol.aut_count())
            .map(|id| hol.aut_images(id).iter().map(|&v| v as usize).collect())
            .collect(),
        sections: fam
            .sections()
            .iter()
            .map(|s| s.0.iter().map(|&v| v as usize).collect())
            .collect(),
        phi: fam
            .phi_rows()
            .iter()
            .map(|row| row.iter().map(|&v| v as usize).collect())
            .collect(),
    }
}

/// Compact deterministic serialization of a census (JSON array plus newline).
pub fn families_to_json(hol: &Holomorph, families: &[DBraceFamily]) -> String {
    let records: Vec<FamilyRecord> = families.iter().map(|f| family_record(hol, f)).collect();
    let mut out = serde_json::to_string(&records).expect("records serialize");
    out.push('\n');
    out
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("record {index}: {source}")]
    Group {
        index: usize,
        source: GroupError,
    },
    #[error("record {index}: aut table {aut} is not an automorphism of the group")]
    NotAnAutomorphism { index: usize, aut: usize },
    #[error("record {index}: section {section} refers to aut id {id} outside the record's auts")]
    AutIdRange {
        index: usize,
        section: usize,
        id: usize,
    },
    #[error("record {index}: section entry does not fit the group order")]
    SectionShape { index: usize },
    #[error("record {index}: {source}")]
    Family {
        index: usize,
        source: FamilyError,
    },
    #[error("record {index}: phi table disagrees with the translation-defined phi")]
    PhiMismatch { index: usize },
}

/// A family together with the holomorph it lives in. Holomorphs are shared
/// across records with the same factor orders.
pub struct LoadedFamily {
    pub hol: Arc<Holomorph>,
    pub family: DBraceFamily,
}

/// Parses and fully re-validates a census file.
pub fn load_families(json: &str) -> Result<Vec<LoadedFamily>, LoadError> {
    let records: Vec<FamilyRecord> = serde_json::from_str(json)?;
    let mut cache: HashMap<Vec<u32>, Arc<Holomorph>> = HashMap::new();
    let mut out = Vec::with_capacity(records.len());
    for (index, record) in records.into_iter().enumerate() {
        let hol = match cache.get(&record.group.orders) {
            Some(h) => h.clone(),
            None => {
                let group = FiniteAbelianGroup::new(&record.group.orders)
                    .map_err(|source| LoadError::Group { index, source })?;
                let hol = Arc::new(
                    Holomorph::new(group).map_err(|source| LoadError::Group { index, source })?,
                );
                cache.insert(record.group.orders.clone(), hol.clone());
                hol
            }
        };
        // Map the record's aut tables onto catalog ids.
        let mut aut_map = Vec::with_capacity(record.auts.len());
        for (aut, images) in record.auts.iter().enumerate() {
            let table: Vec<u16> = images.iter().map(|&v| v as u16).collect();
            if images.iter().any(|&v| v >= hol.group().order()) {
                return Err(LoadError::NotAnAutomorphism { index, aut });
            }
            match hol.aut_id(&table) {
                Some(id) => aut_map.push(id as u16),
                None => return Err(LoadError::NotAnAutomorphism { index, aut }),
            }
        }
        let n = hol.group().order();
        let mut sections = Vec::with_capacity(record.sections.len());
        for (si, entries) in record.sections.iter().enumerate() {
            if entries.len() != n {
                return Err(LoadError::SectionShape { index });
            }
            let mut auts = Vec::with_capacity(n);
            for &id in entries {
                let mapped = *aut_map.get(id).ok_or(LoadError::AutIdRange {
                    index,
                    section: si,
                    id,
                })?;
                auts.push(mapped);
            }
            sections.push(Section(auts));
        }
        let family = DBraceFamily::from_sections(&hol, sections)
            .map_err(|source| LoadError::Family { index, source })?;
        // The declared phi must match the recomputed one.
        let declared_ok = record.phi.len() == family.len()
            && family.phi_rows().iter().enumerate().all(|(l, row)| {
                record.phi[l].len() == row.len()
                    && row
                        .iter()
                        .zip(record.phi[l].iter())
                        .all(|(&a, &b)| a as usize == b)
            });
        if !declared_ok {
            return Err(LoadError::PhiMismatch { index });
        }
        out.push(LoadedFamily { hol, family });
    }
    Ok(out)
}
