use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ElParams, GroupError, GroupTable};
use crate::algebra::{Elementary, FieldSpec};

const MAGIC: &[u8; 4] = b"CCXG";

/// Header of the binary table format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableHeader {
    pub q: u32,
    pub p: u32,
    pub k: u32,
    pub poly: Vec<u32>,
    pub n: usize,
    pub s: usize,
    pub generators: Vec<Elementary>,
    /// The code list is a full enumeration.
    pub complete: bool,
    pub count: usize,
}

/// MAGIC, header length (u32 LE), JSON header, then one 16-byte LE code per
/// element in table order.
pub fn export_table(params: &ElParams, table: &GroupTable, complete: bool) -> Vec<u8> {
    let sm = params.summary();
    let header = TableHeader {
        q: sm.q,
        p: sm.p,
        k: sm.k,
        poly: sm.poly,
        n: sm.n,
        s: sm.s,
        generators: table.generators().to_vec(),
        complete,
        count: table.len(),
    };
    let json = serde_json::to_vec(&header).expect("serialisable");
    let mut out = Vec::with_capacity(8 + json.len() + 16 * table.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(json.len() as u32).to_le_bytes());
    out.extend_from_slice(&json);
    for &c in table.codes() {
        out.extend_from_slice(&c.to_le_bytes());
    }
    out
}

pub fn import_table(bytes: &[u8]) -> Result<(ElParams, TableHeader, GroupTable), GroupError> {
    let bad = |m: &str| GroupError::Format(m.to_string());
    if bytes.len() < 8 || &bytes[..4] != MAGIC {
        return Err(bad("missing table magic"));
    }
    let hlen = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let body = bytes.get(8..8 + hlen).ok_or_else(|| bad("truncated header"))?;
    let header: TableHeader = serde_json::from_slice(body).map_err(|e| bad(&e.to_string()))?;
    let rest = &bytes[8 + hlen..];
    if rest.len() != 16 * header.count {
        return Err(bad("code section length does not match the header"));
    }
    let field = FieldSpec::new(header.p, header.k, Some(&header.poly))?;
    let params = ElParams::new(Arc::new(field), header.n, header.s)?;
    let bits = params.space().code_bits();
    let codes: Vec<u128> = rest.chunks_exact(16).map(|c| u128::from_le_bytes(c.try_into().unwrap())).collect();
    if bits < 128 && codes.iter().any(|&c| c >> bits != 0) {
        return Err(bad("code out of range"));
    }
    let table = GroupTable::from_codes(params.space().clone(), codes, header.generators.clone());
    Ok((params, header, table))
}
