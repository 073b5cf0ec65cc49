use std::fs::File;
use std::path::Path;

use zeta_tail::fit::CountHistogram;

/// Reads a `count,frequency` histogram. Errors carry the offending line.
pub fn read_histogram_csv(path: &Path) -> Result<CountHistogram, String> {
    let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_histogram_csv(file).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse_histogram_csv(reader: impl std::io::Read) -> Result<CountHistogram, String> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| format!("line 1: {e}"))?.clone();
    if headers.len() != 2 || &headers[0] != "count" || &headers[1] != "frequency" {
        return Err(format!(
            "line 1: expected header 'count,frequency', found '{}'",
            headers.iter().collect::<Vec<_>>().join(",")
        ));
    }
    let mut pairs = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| match e.position() {
            Some(pos) => format!("line {}: {e}", pos.line()),
            None => e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(format!("line {line}: expected 2 fields, found {}", record.len()));
        }
        let count = field(&record[0], "count", line)?;
        let freq = field(&record[1], "frequency", line)?;
        pairs.push((count, freq));
    }
    CountHistogram::from_pairs(pairs).map_err(|e| e.to_string())
}

fn field(text: &str, what: &str, line: u64) -> Result<u64, String> {
    if text.starts_with('-') {
        return Err(format!("line {line}: {what} must be non-negative, got '{text}'"));
    }
    text.parse()
        .map_err(|_| format!("line {line}: {what} is not a non-negative integer: '{text}'"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs() {
        let h = parse_histogram_csv("count,frequency\n0,5\n2, 3\n".as_bytes()).unwrap();
        assert_eq!(h.total(), 8);
        assert_eq!(h.frequency(2), 3);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_histogram_csv("count,frequency\n0,5\n1,x\n".as_bytes()).unwrap_err();
        assert!(err.starts_with("line 3:"), "{err}");
        let err = parse_histogram_csv("count,frequency\n0,5\n-1,2\n".as_bytes()).unwrap_err();
        assert!(err.contains("line 3") && err.contains("non-negative"), "{err}");
        let err = parse_histogram_csv("x,y\n0,5\n".as_bytes()).unwrap_err();
        assert!(err.starts_with("line 1:"), "{err}");
    }
}
