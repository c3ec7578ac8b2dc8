//! Spreading a string over a cluster in id order.
//!
//! The string is padded with a `1` and then zeros up to the next multiple of
//! the cluster size strictly above its length, and cut into equal blocks.

use std::collections::BTreeMap;

use crate::{BitString, Cluster, Error, NodeId, Result};

pub fn pad(s: &BitString, k: usize) -> BitString {
    let mut out = s.clone();
    out.push(true);
    while out.len() % k != 0 {
        out.push(false);
    }
    out
}

/// Block of `pad(s, |c|)` belonging to `v`.
pub fn lex_encode(c: &Cluster, s: &BitString, v: NodeId) -> Result<BitString> {
    let rank = c
        .iter()
        .position(|&u| u == v)
        .ok_or_else(|| Error::InvalidParams(format!("node {v} is not in the cluster")))?;
    let padded = pad(s, c.len());
    let b = padded.len() / c.len();
    Ok(padded.slice(rank * b, (rank + 1) * b))
}

/// Every block of the encoding, in id order.
pub fn lex_blocks(c: &Cluster, s: &BitString) -> Vec<BitString> {
    let padded = pad(s, c.len().max(1));
    let b = padded.len() / c.len().max(1);
    (0..c.len()).map(|k| padded.slice(k * b, (k + 1) * b)).collect()
}

/// Inverse of the block split; `None` on unequal blocks or non-canonical padding.
pub fn decode_blocks<'a, I: IntoIterator<Item = &'a BitString>>(blocks: I) -> Option<BitString> {
    let mut joined = BitString::new();
    let mut width = None;
    let mut k = 0;
    for b in blocks {
        if *width.get_or_insert(b.len()) != b.len() {
            return None;
        }
        joined.extend(b);
        k += 1;
    }
    if k == 0 {
        return None;
    }
    let one = joined.as_slice().iter().rposition(|&b| b)?;
    // At most `k` padding bits (the marker plus zeros).
    if joined.len() - one > k {
        return None;
    }
    joined.truncate(one);
    Some(joined)
}

pub fn lex_decode(c: &Cluster, labels: &BTreeMap<NodeId, BitString>) -> Result<BitString> {
    let blocks = c
        .iter()
        .map(|v| labels.get(v).ok_or_else(|| Error::InvalidParams(format!("no block for node {v}"))))
        .collect::<Result<Vec<_>>>()?;
    decode_blocks(blocks).ok_or_else(|| Error::Parse("malformed cluster encoding".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cl(ids: &[NodeId]) -> Cluster {
        ids.iter().copied().collect()
    }

    fn bits(s: &str) -> BitString {
        BitString::parse01(s).unwrap()
    }

    fn encode_all(c: &Cluster, s: &BitString) -> BTreeMap<NodeId, BitString> {
        c.iter().map(|&v| (v, lex_encode(c, s, v).unwrap())).collect()
    }

    #[test]
    fn singleton_holds_everything() {
        let c = cl(&[9]);
        assert_eq!(lex_encode(&c, &bits("0110"), 9).unwrap(), bits("01101"));
    }

    #[test]
    fn empty_string_is_padding_only() {
        let c = cl(&[1, 4, 6]);
        let enc = encode_all(&c, &BitString::new());
        assert_eq!(enc[&1], bits("1"));
        assert_eq!(enc[&4], bits("0"));
        assert_eq!(lex_decode(&c, &enc).unwrap(), BitString::new());
    }

    #[test]
    fn three_blocks_of_seven_bits() {
        let c = cl(&[2, 30, 7]);
        let s = bits("1011001");
        let enc = encode_all(&c, &s);
        // 7 bits plus marker is 8, padded to 9: blocks of 3.
        assert!(enc.values().all(|b| b.len() == 3));
        assert_eq!(enc[&2], bits("101"));
        assert_eq!(enc[&7], bits("100"));
        assert_eq!(enc[&30], bits("110"));
        assert_eq!(lex_decode(&c, &enc).unwrap(), s);
    }

    #[test]
    fn malformed_blocks() {
        let c = cl(&[1, 2]);
        let mut enc = encode_all(&c, &bits("111"));
        enc.insert(2, bits("0"));
        assert!(lex_decode(&c, &enc).is_err());
        // All zeros: no marker.
        let zeros: BTreeMap<_, _> = [(1, bits("00")), (2, bits("00"))].into();
        assert!(lex_decode(&c, &zeros).is_err());
        // Padding longer than the cluster size is not canonical.
        let long: BTreeMap<_, _> = [(1, bits("11")), (2, bits("00"))].into();
        assert!(lex_decode(&c, &long).is_err());
        assert!(lex_encode(&c, &bits("1"), 3).is_err());
    }

    #[test]
    fn permuted_blocks_never_decode_silently() {
        let c = cl(&[1, 2, 3]);
        let s = bits("0001110");
        let mut enc = encode_all(&c, &s);
        let (a, b) = (enc[&1].clone(), enc[&3].clone());
        enc.insert(1, b);
        enc.insert(3, a);
        match lex_decode(&c, &enc) {
            Ok(d) => assert_ne!(d, s),
            Err(_) => {}
        }
    }
}
