//! Direction numbers for the Sobol' generator.
//!
//! The text format is the one published by Joe and Kuo: a single header line
//! followed by one line per dimension `d s a m_1 ... m_s`, where `s` is the
//! degree of the primitive polynomial, `a` encodes its interior coefficients
//! and `m_i` are the initial direction integers. Dimension 1 is implicit.

use std::path::Path;
use std::sync::OnceLock;

use thiserror::Error;

/// Bits per coordinate.
pub const BITS: usize = 32;

const BUNDLED: &str = include_str!("../../data/new-joe-kuo-6.1111");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("direction table line {line}: {kind}")]
pub struct DirectionTableError {
    pub line: usize,
    pub kind: TableErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableErrorKind {
    #[error("missing header line")]
    MissingHeader,
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("dimension {0} is listed twice")]
    Duplicate(u64),
    #[error("expected dimension {expected}, found {found}")]
    Gap { expected: u64, found: u64 },
    #[error("polynomial degree {0} is outside 1..=32")]
    Degree(u64),
    #[error("coefficient mask {a} does not fit degree {degree}")]
    Coefficient { a: u64, degree: u64 },
    #[error("m_{index} = {value} is even")]
    EvenDirection { index: usize, value: u64 },
    #[error("m_{index} = {value} is not below 2^{index}")]
    DirectionTooLarge { index: usize, value: u64 },
}

/// Primitive-polynomial data for one dimension (2 and above).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    pub dimension: usize,
    pub degree: u32,
    pub coefficients: u32,
    pub initial: Vec<u32>,
}

/// Parsed direction numbers, expanded to 32-bit direction integers per dimension.
#[derive(Debug, Clone)]
pub struct DirectionTable {
    polynomials: Vec<Polynomial>,
    // directions[k][b] is the direction integer for bit b of dimension k + 1
    directions: Vec<[u32; BITS]>,
}

impl DirectionTable {
    /// The bundled Joe-Kuo table (D6 criterion, 1111 dimensions).
    pub fn bundled() -> &'static DirectionTable {
        static TABLE: OnceLock<DirectionTable> = OnceLock::new();
        TABLE.get_or_init(|| parse_direction_table(BUNDLED).expect("bundled direction table is valid"))
    }

    pub fn bundled_text() -> &'static str {
        BUNDLED
    }

    pub fn from_path(path: impl AsRef<Path>) -> crate::Result<DirectionTable> {
        let text = std::fs::read_to_string(path)?;
        Ok(parse_direction_table(&text)?)
    }

    /// Number of dimensions the table supports, including the implicit first one.
    pub fn dimensions(&self) -> usize {
        self.directions.len()
    }

    pub fn polynomials(&self) -> &[Polynomial] {
        &self.polynomials
    }

    /// Direction integers of dimension `dim` (1-based).
    pub fn directions(&self, dim: usize) -> &[u32; BITS] {
        &self.directions[dim - 1]
    }
}

fn expand(degree: usize, coefficients: u32, initial: &[u32]) -> [u32; BITS] {
    let mut v = [0u32; BITS];
    for (b, &m) in initial.iter().enumerate() {
        v[b] = m << (BITS - 1 - b);
    }
    for b in degree..BITS {
        let base = v[b - degree];
        let mut x = base ^ (base >> degree);
        for k in 0..degree - 1 {
            if (coefficients >> k) & 1 == 1 {
                x ^= v[b - degree + 1 + k];
            }
        }
        v[b] = x;
    }
    v
}

fn van_der_corput() -> [u32; BITS] {
    std::array::from_fn(|b| 1u32 << (BITS - 1 - b))
}

/// Parses a direction-number file. Blank lines are ignored; dimensions must
/// start at 2 and be listed in increasing order without gaps.
pub fn parse_direction_table(text: &str) -> Result<DirectionTable, DirectionTableError> {
    let mut lines = text.lines().enumerate();
    if lines.next().is_none() {
        return Err(DirectionTableError { line: 1, kind: TableErrorKind::MissingHeader });
    }

    let mut polynomials = Vec::new();
    let mut directions = vec![van_der_corput()];
    for (idx, raw) in lines {
        let line = idx + 1;
        let err = |kind| DirectionTableError { line, kind };
        if raw.trim().is_empty() {
            continue;
        }
        let mut fields = Vec::new();
        for tok in raw.split_whitespace() {
            let v: u64 = tok
                .parse()
                .map_err(|_| err(TableErrorKind::Malformed(format!("{tok:?} is not an unsigned integer"))))?;
            fields.push(v);
        }
        if fields.len() < 4 {
            return Err(err(TableErrorKind::Malformed("expected at least `d s a m_1`".into())));
        }
        let (dim, degree, a) = (fields[0], fields[1], fields[2]);
        let expected = directions.len() as u64 + 1;
        if dim < expected {
            return Err(err(if dim >= 2 {
                TableErrorKind::Duplicate(dim)
            } else {
                TableErrorKind::Malformed(format!("dimension {dim} cannot be listed"))
            }));
        }
        if dim > expected {
            return Err(err(TableErrorKind::Gap { expected, found: dim }));
        }
        if degree == 0 || degree > BITS as u64 {
            return Err(err(TableErrorKind::Degree(degree)));
        }
        if a >> (degree - 1) != 0 {
            return Err(err(TableErrorKind::Coefficient { a, degree }));
        }
        let m = &fields[3..];
        if m.len() as u64 != degree {
            return Err(err(TableErrorKind::Malformed(format!(
                "degree {degree} needs {degree} direction integers, found {}",
                m.len()
            ))));
        }
        for (i, &value) in m.iter().enumerate() {
            let index = i + 1;
            if value % 2 == 0 {
                return Err(err(TableErrorKind::EvenDirection { index, value }));
            }
            if value >> index != 0 {
                return Err(err(TableErrorKind::DirectionTooLarge { index, value }));
            }
        }
        let initial: Vec<u32> = m.iter().map(|&v| v as u32).collect();
        directions.push(expand(degree as usize, a as u32, &initial));
        polynomials.push(Polynomial {
            dimension: dim as usize,
            degree: degree as u32,
            coefficients: a as u32,
            initial,
        });
    }
    Ok(DirectionTable { polynomials, directions })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "d s a m_i\n";

    #[test]
    fn parses_single_line() {
        let t = parse_direction_table(&format!("{HEADER}2 1 0 1\n")).unwrap();
        assert_eq!(t.dimensions(), 2);
        assert_eq!(t.polynomials()[0], Polynomial { dimension: 2, degree: 1, coefficients: 0, initial: vec![1] });
    }

    #[test]
    fn rejects_even_direction() {
        let e = parse_direction_table(&format!("{HEADER}2 1 0 1\n3 2 1 1 4\n")).unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(e.kind, TableErrorKind::EvenDirection { index: 2, value: 4 });
    }

    #[test]
    fn rejects_large_direction() {
        let e = parse_direction_table(&format!("{HEADER}2 1 0 1\n3 2 1 1 5\n")).unwrap_err();
        assert_eq!(e.kind, TableErrorKind::DirectionTooLarge { index: 2, value: 5 });
    }

    #[test]
    fn rejects_duplicate_and_gap() {
        let e = parse_direction_table(&format!("{HEADER}2 1 0 1\n2 1 0 1\n")).unwrap_err();
        assert_eq!(e, DirectionTableError { line: 3, kind: TableErrorKind::Duplicate(2) });
        let e = parse_direction_table(&format!("{HEADER}2 1 0 1\n4 2 1 1 3\n")).unwrap_err();
        assert_eq!(e.kind, TableErrorKind::Gap { expected: 3, found: 4 });
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["2 1 0", "2 1 0 x", "2 2 0 1", "2 1 0 1 1", "2 1 1 1", "2 0 0 1", "1 1 0 1"] {
            let e = parse_direction_table(&format!("{HEADER}{bad}\n")).unwrap_err();
            assert_eq!(e.line, 2, "{bad}");
        }
        assert_eq!(parse_direction_table("").unwrap_err().kind, TableErrorKind::MissingHeader);
    }

    #[test]
    fn header_only_gives_one_dimension() {
        assert_eq!(parse_direction_table("d s a m\n").unwrap().dimensions(), 1);
    }

    #[test]
    fn bundled_table_size() {
        let data_lines = BUNDLED.lines().skip(1).filter(|l| !l.trim().is_empty()).count();
        let t = DirectionTable::bundled();
        assert_eq!(t.dimensions(), data_lines + 1);
        assert!(t.dimensions() >= 1111);
    }

    #[test]
    fn expansion_matches_recurrence_for_dimension_three() {
        // s = 2, a = 1, m = (1, 3): m_3 = 2 m_2 ^ 4 m_1 ^ m_1 = 6 ^ 4 ^ 1 = 3
        let t = DirectionTable::bundled();
        let v = t.directions(3);
        assert_eq!(v[0], 1 << 31);
        assert_eq!(v[1], 3 << 30);
        assert_eq!(v[2], 3 << 29);
    }
}
