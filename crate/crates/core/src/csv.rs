//! Minimal CSV helpers shared by the exporters. Floats are written with 17
//! significant digits so a parse/format cycle is bit exact.

use crate::error::{Error, Result};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A parsed numeric table: header names, data rows and any `# key=value`
/// comment lines that trail or precede the data.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub comments: Vec<String>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// Value of a `key=value` pair found in the comment lines.
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.comments.iter().flat_map(|c| c.split(',')).find_map(|kv| {
            let (k, v) = kv.split_once('=')?;
            (k.trim() == key).then(|| v.trim())
        })
    }
}

pub fn parse_table(text: &str) -> Result<Table> {
    let mut table = Table::default();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            table.comments.push(c.trim().to_string());
            continue;
        }
        if table.header.is_empty() {
            table.header = line.split(',').map(|s| s.trim().to_string()).collect();
            continue;
        }
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse { line: idx + 1, msg: e.to_string() })?;
        if row.len() != table.header.len() {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected {} fields, found {}", table.header.len(), row.len()),
            });
        }
        table.rows.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn seventeen_digits_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let back: f64 = fmt_f64(x).parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn parses_header_rows_and_meta() {
        let t = parse_table("# spread=0.5,max_error=1\nz,k\n0,0\n1.5,2\n").unwrap();
        assert_eq!(t.header, vec!["z", "k"]);
        assert_eq!(t.column("k").unwrap(), vec![0.0, 2.0]);
        assert_eq!(t.meta("spread"), Some("0.5"));
        assert!(parse_table("a,b\n1\n").is_err());
    }
}
