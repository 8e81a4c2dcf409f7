//! graph6 short form (at most 62 vertices).
//!
//! The first byte is `n + 63`. The remaining bytes carry the upper triangle of
//! the adjacency matrix in column-major order (`(0,1), (0,2), (1,2), (0,3), …`),
//! six bits per byte, most significant bit first, each byte offset by 63 and
//! the final byte zero-padded.

use super::{Graph, GraphError, MAX_VERTICES};

const HEADER: &str = ">>graph6<<";

/// Decodes a graph6 string; an optional `>>graph6<<` header is stripped.
pub fn graph6_decode(s: &str) -> Result<Graph, GraphError> {
    let s = s.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    let err = |m: String| GraphError::Graph6(m);
    let Some((&first, body)) = bytes.split_first() else {
        return Err(err("empty string".into()));
    };
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(format!("byte {b} at position {i} is outside [63,126]")));
        }
    }
    if first == 126 {
        return Err(err("long form (n > 62) is not supported".into()));
    }
    let n = (first - 63) as usize;
    debug_assert!(n <= MAX_VERTICES);
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() != expected {
        return Err(err(format!("expected {} bytes for {n} vertices, found {}", expected + 1, bytes.len())));
    }
    let bit = |k: usize| -> bool { (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1 };
    for k in nbits..expected * 6 {
        if bit(k) {
            return Err(err("nonzero padding bits".into()));
        }
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Encodes a graph in graph6 short form under its current labeling.
pub fn graph6_encode(g: &Graph) -> String {
    let n = g.n();
    let nbits = n * n.saturating_sub(1) / 2;
    let mut out = Vec::with_capacity(1 + nbits.div_ceil(6));
    out.push(n as u8 + 63);
    let mut acc = 0u8;
    let mut used = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            used += 1;
            if used == 6 {
                out.push(acc + 63);
                acc = 0;
                used = 0;
            }
        }
    }
    if used > 0 {
        out.push((acc << (6 - used)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(graph6_decode("?").unwrap().n(), 0);
        assert_eq!(graph6_encode(&Graph::empty(0)), "?");
        assert_eq!(graph6_decode("Bw").unwrap(), Graph::complete(3));
        assert_eq!(graph6_encode(&Graph::complete(3)), "Bw");
        assert_eq!(graph6_decode(">>graph6<<Bw").unwrap(), Graph::complete(3));
        assert_eq!(graph6_decode("@").unwrap().n(), 1);
    }

    #[test]
    fn malformed() {
        assert!(graph6_decode("").is_err());
        assert!(graph6_decode("B").is_err());
        assert!(graph6_decode("Bww").is_err());
        assert!(graph6_decode("Bx").is_err());
        assert!(graph6_decode("B\x7f").is_err());
        assert!(graph6_decode("~?").is_err());
    }
}
