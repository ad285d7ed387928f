//! TSPLIB reader/writer for `TYPE: ATSP` with explicit full-matrix weights.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::AsymCostMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsplibInstance {
    pub name: Option<String>,
    pub matrix: AsymCostMatrix,
    /// Diagonal weights found in the file, replaced by INF in `matrix`.
    pub self_loops: Vec<i64>,
}

fn header_value<'a>(headers: &'a [(String, String)], key: &str) -> Option<&'a str> {
    headers.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

/// Parses an ATSP file. Every failure is one of `UnsupportedFormat`,
/// `Malformed` or `NonInteger`.
pub fn parse_tsplib(text: &str) -> Result<TsplibInstance> {
    let mut headers: Vec<(String, String)> = Vec::new();
    let mut lines = text.lines();
    let mut weights_head: Option<&str> = None;
    for line in lines.by_ref() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("EDGE_WEIGHT_SECTION") {
            weights_head = Some(rest.trim_start_matches(':'));
            break;
        }
        if trimmed == "EOF" {
            break;
        }
        if trimmed.ends_with("_SECTION") {
            return Err(Error::UnsupportedFormat(format!("section {trimmed}")));
        }
        let Some((key, value)) = trimmed.split_once(':') else {
            return Err(Error::Malformed(format!("header line without ':': {trimmed:?}")));
        };
        headers.push((key.trim().to_ascii_uppercase(), value.trim().to_string()));
    }

    match header_value(&headers, "TYPE") {
        Some(t) if t.eq_ignore_ascii_case("ATSP") => {}
        Some(t) => return Err(Error::UnsupportedFormat(format!("TYPE {t}"))),
        None => return Err(Error::Malformed("missing TYPE".into())),
    }
    match header_value(&headers, "EDGE_WEIGHT_TYPE") {
        Some(t) if t.eq_ignore_ascii_case("EXPLICIT") => {}
        Some(t) => return Err(Error::UnsupportedFormat(format!("EDGE_WEIGHT_TYPE {t}"))),
        None => return Err(Error::Malformed("missing EDGE_WEIGHT_TYPE".into())),
    }
    match header_value(&headers, "EDGE_WEIGHT_FORMAT") {
        Some(t) if t.eq_ignore_ascii_case("FULL_MATRIX") => {}
        Some(t) => return Err(Error::UnsupportedFormat(format!("EDGE_WEIGHT_FORMAT {t}"))),
        None => return Err(Error::Malformed("missing EDGE_WEIGHT_FORMAT".into())),
    }
    let n: usize = header_value(&headers, "DIMENSION")
        .ok_or_else(|| Error::Malformed("missing DIMENSION".into()))?
        .parse()
        .map_err(|_| Error::Malformed("DIMENSION is not a non-negative integer".into()))?;
    if n < 2 {
        return Err(Error::Malformed(format!("DIMENSION {n} is below 2")));
    }
    let expected = n
        .checked_mul(n)
        .filter(|&e| e <= text.len())
        .ok_or_else(|| Error::Malformed(format!("DIMENSION {n} cannot fit in the file")))?;
    let weights_head = weights_head.ok_or_else(|| Error::Malformed("missing EDGE_WEIGHT_SECTION".into()))?;

    let mut weights = Vec::with_capacity(expected);
    let tokens = weights_head
        .split_whitespace()
        .chain(lines.flat_map(str::split_whitespace))
        .take_while(|t| *t != "EOF" && !t.ends_with("_SECTION"));
    for tok in tokens {
        let v: i64 = tok.parse().map_err(|_| Error::NonInteger(tok.to_string()))?;
        weights.push(v);
    }
    if weights.len() != expected {
        return Err(Error::Malformed(format!(
            "DIMENSION {n} needs {expected} weights, found {}",
            weights.len()
        )));
    }

    let self_loops = (0..n).map(|i| weights[i * n + i]).collect();
    let matrix = AsymCostMatrix::from_fn(n, |i, j| weights[i * n + j]).map_err(|e| Error::Malformed(e.to_string()))?;
    Ok(TsplibInstance {
        name: header_value(&headers, "NAME").map(str::to_string),
        matrix,
        self_loops,
    })
}

/// Writes a FULL_MATRIX ATSP file; the diagonal is written as 0.
pub fn write_tsplib(name: &str, comment: &str, m: &AsymCostMatrix) -> String {
    let n = m.n();
    let mut out = String::new();
    let _ = writeln!(out, "NAME: {name}");
    let _ = writeln!(out, "TYPE: ATSP");
    if !comment.is_empty() {
        let _ = writeln!(out, "COMMENT: {comment}");
    }
    let _ = writeln!(out, "DIMENSION: {n}");
    let _ = writeln!(out, "EDGE_WEIGHT_TYPE: EXPLICIT");
    let _ = writeln!(out, "EDGE_WEIGHT_FORMAT: FULL_MATRIX");
    let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| if i == j { "0".to_string() } else { m.arc(i, j).to_string() })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out.push_str("EOF\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const E1: &str = "NAME: e1
TYPE: ATSP
COMMENT: three cities
DIMENSION: 3
EDGE_WEIGHT_TYPE: EXPLICIT
EDGE_WEIGHT_FORMAT: FULL_MATRIX
EDGE_WEIGHT_SECTION
 9999 1 2
 2 9999 1
 1   2
 9999
EOF
";

    #[test]
    fn parses_e1() {
        let inst = parse_tsplib(E1).unwrap();
        let e1 = AsymCostMatrix::from_rows(&[vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]]).unwrap();
        assert_eq!(inst.matrix, e1);
        assert_eq!(inst.self_loops, vec![9999, 9999, 9999]);
        assert_eq!(inst.name.as_deref(), Some("e1"));
    }

    #[test]
    fn writer_round_trips() {
        let m = AsymCostMatrix::from_rows(&[vec![0, -4, 7], vec![3, 0, 12], vec![5, 6, 0]]).unwrap();
        let text = write_tsplib("x", "round trip", &m);
        assert_eq!(parse_tsplib(&text).unwrap().matrix, m);
    }

    #[test]
    fn rejects_other_weight_formats() {
        let text = E1.replace("FULL_MATRIX", "UPPER_ROW");
        assert!(matches!(parse_tsplib(&text), Err(Error::UnsupportedFormat(_))));
        let text = E1.replace("TYPE: ATSP", "TYPE: TSP");
        assert!(matches!(parse_tsplib(&text), Err(Error::UnsupportedFormat(_))));
        let text = E1.replace("EDGE_WEIGHT_TYPE: EXPLICIT", "EDGE_WEIGHT_TYPE: EUC_2D");
        assert!(matches!(parse_tsplib(&text), Err(Error::UnsupportedFormat(_))));
    }

    #[test]
    fn token_count_mismatch_is_malformed() {
        let mut text = String::from(
            "TYPE: ATSP\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n",
        );
        text.push_str(&vec!["1"; 17].join(" "));
        assert!(matches!(parse_tsplib(&text), Err(Error::Malformed(_))));
    }

    #[test]
    fn non_integer_weights() {
        let text = E1.replace(" 2 9999 1", " 2.5 9999 1");
        assert!(matches!(parse_tsplib(&text), Err(Error::NonInteger(t)) if t == "2.5"));
    }

    #[test]
    fn missing_pieces_are_malformed() {
        assert!(matches!(parse_tsplib(""), Err(Error::Malformed(_))));
        let text = E1.replace("DIMENSION: 3\n", "");
        assert!(matches!(parse_tsplib(&text), Err(Error::Malformed(_))));
        let text = E1.replace("DIMENSION: 3", "DIMENSION: 999999999999");
        assert!(matches!(parse_tsplib(&text), Err(Error::Malformed(_))));
    }
}
