//! Binary evidence cache.
//!
//! Layout (little-endian):
//!
//! ```text
//! b"ADCE"  u32 version  u64 predicates  u64 distinct sets  u64 tuples  [u8; 32] fingerprint
//! distinct-sets × ( ceil(predicates / 8) bitset bytes, u64 multiplicity )
//! until EOF: ( u32 set index, u32 tuple, u32 count )
//! ```
//!
//! The fingerprint is a SHA-256 digest of the dataset cells and the rendered
//! predicate space; a cache built for other data is ignored.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, ErrorKind, Read, Write};
use std::path::Path;

use adcminer_core::{Dataset, EvidenceSet, PredicateSet, PredicateSpace, Vios};
use sha2::{Digest, Sha256};

const MAGIC: &[u8; 4] = b"ADCE";
const VERSION: u32 = 1;

pub type Fingerprint = [u8; 32];

pub fn fingerprint(d: &Dataset, ps: &PredicateSpace) -> Fingerprint {
    let mut h = Sha256::new();
    h.update((d.row_count() as u64).to_le_bytes());
    for (name, ty) in d.schema() {
        h.update(name.as_bytes());
        h.update([0, ty as u8]);
    }
    for rec in d.to_records("\u{0}") {
        for cell in rec {
            h.update(cell.as_bytes());
            h.update([0x1f]);
        }
    }
    for id in 0..ps.len() {
        h.update(ps.render(id).as_bytes());
        h.update([0x1e]);
    }
    h.finalize().into()
}

fn bitset_bytes(predicates: usize) -> usize {
    predicates.div_ceil(8)
}

pub fn write_cache<W: Write>(
    writer: W,
    e: &EvidenceSet,
    v: &Vios,
    fp: &Fingerprint,
) -> io::Result<()> {
    let mut w = BufWriter::new(writer);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(e.predicate_count() as u64).to_le_bytes())?;
    w.write_all(&(e.len() as u64).to_le_bytes())?;
    w.write_all(&(e.tuple_count() as u64).to_le_bytes())?;
    w.write_all(fp)?;
    let width = bitset_bytes(e.predicate_count());
    for (s, &m) in e.sets().iter().zip(e.multiplicities()) {
        let bytes: Vec<u8> = s.words().iter().flat_map(|w| w.to_le_bytes()).collect();
        w.write_all(&bytes[..width])?;
        w.write_all(&m.to_le_bytes())?;
    }
    for s in 0..v.set_count() {
        for &(t, c) in v.entries(s) {
            w.write_all(&(s as u32).to_le_bytes())?;
            w.write_all(&t.to_le_bytes())?;
            w.write_all(&c.to_le_bytes())?;
        }
    }
    w.flush()
}

fn invalid(msg: &str) -> io::Error {
    io::Error::new(ErrorKind::InvalidData, msg.to_string())
}

fn read_u32(r: &mut impl Read) -> io::Result<u32> {
    let mut b = [0; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> io::Result<u64> {
    let mut b = [0; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

/// Reads a cache. Returns `Ok(None)` when it was built for other data.
pub fn read_cache<R: Read>(
    reader: R,
    expected: &Fingerprint,
) -> io::Result<Option<(EvidenceSet, Vios)>> {
    let mut r = BufReader::new(reader);
    let mut magic = [0; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(invalid("not an evidence cache"));
    }
    if read_u32(&mut r)? != VERSION {
        return Err(invalid("unsupported cache version"));
    }
    let predicates = read_u64(&mut r)? as usize;
    let distinct = read_u64(&mut r)? as usize;
    let tuples = read_u64(&mut r)? as usize;
    let mut fp = [0u8; 32];
    r.read_exact(&mut fp)?;
    if &fp != expected {
        return Ok(None);
    }

    let width = bitset_bytes(predicates);
    let mut buf = vec![0u8; width.div_ceil(8) * 8];
    let mut sets = Vec::with_capacity(distinct);
    let mut multiplicity = Vec::with_capacity(distinct);
    for _ in 0..distinct {
        r.read_exact(&mut buf[..width])?;
        let words: Vec<u64> = buf
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        sets.push(PredicateSet::from_words(predicates, &words));
        multiplicity.push(read_u64(&mut r)?);
    }

    let mut per_set: Vec<Vec<(u32, u32)>> = vec![Vec::new(); distinct];
    let mut triple = [0u8; 12];
    loop {
        match r.read_exact(&mut triple) {
            Ok(()) => {}
            Err(e) if e.kind() == ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(e),
        }
        let s = u32::from_le_bytes(triple[0..4].try_into().unwrap()) as usize;
        let t = u32::from_le_bytes(triple[4..8].try_into().unwrap());
        let c = u32::from_le_bytes(triple[8..12].try_into().unwrap());
        if s >= distinct || t as usize >= tuples {
            return Err(invalid("incidence entry out of range"));
        }
        per_set[s].push((t, c));
    }
    let e = EvidenceSet::from_parts(predicates, tuples, sets, multiplicity)
        .map_err(|err| invalid(&err.to_string()))?;
    Ok(Some((e, Vios::from_parts(per_set))))
}

pub fn load_cache(path: &Path, expected: &Fingerprint) -> io::Result<Option<(EvidenceSet, Vios)>> {
    match File::open(path) {
        Ok(f) => read_cache(f, expected),
        Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn store_cache(path: &Path, e: &EvidenceSet, v: &Vios, fp: &Fingerprint) -> io::Result<()> {
    write_cache(File::create(path)?, e, v, fp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use adcminer_core::evidence::build_evidence;

    fn sample() -> (Dataset, PredicateSpace) {
        let rows: Vec<Vec<String>> = (0..9)
            .map(|i| vec![(i % 4).to_string(), format!("v{}", i % 3), (i * 3 % 7).to_string()])
            .collect();
        let d = Dataset::from_records(vec!["a".into(), "b".into(), "c".into()], &rows, "").unwrap();
        let ps = PredicateSpace::generate(&d, 0.0).unwrap();
        (d, ps)
    }

    #[test]
    fn round_trip() {
        let (d, ps) = sample();
        let (e, v) = build_evidence(&d, &ps).unwrap();
        let fp = fingerprint(&d, &ps);
        let mut bytes = Vec::new();
        write_cache(&mut bytes, &e, &v, &fp).unwrap();
        let (e2, v2) = read_cache(&bytes[..], &fp).unwrap().unwrap();
        assert_eq!(e, e2);
        assert_eq!(v, v2);
    }

    #[test]
    fn other_data_is_ignored() {
        let (d, ps) = sample();
        let (e, v) = build_evidence(&d, &ps).unwrap();
        let mut bytes = Vec::new();
        write_cache(&mut bytes, &e, &v, &fingerprint(&d, &ps)).unwrap();
        let other = d.subset(&[0, 1, 2]);
        assert!(read_cache(&bytes[..], &fingerprint(&other, &ps)).unwrap().is_none());
    }

    #[test]
    fn garbage_is_an_error() {
        assert!(read_cache(&b"nope"[..], &[0; 32]).is_err());
        assert!(read_cache(&b"AD"[..], &[0; 32]).is_err());
    }
}
