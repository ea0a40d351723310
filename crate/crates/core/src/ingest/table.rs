use super::IngestError;

/// A parsed CSV source. Every row has exactly `header.len()` cells.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub source_id: String,
}

impl Table {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn with_source_id(mut self, id: impl Into<String>) -> Self {
        self.source_id = id.into();
        self
    }
}

/// RFC 4180 style parsing. Row numbers in errors count the header as row 1.
pub fn parse_csv(bytes: &[u8], delimiter: u8, quote: u8) -> Result<Table, IngestError> {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(delimiter)
        .quote(quote)
        .double_quote(true)
        .from_reader(bytes);

    let mut records = reader.records();
    let header: Vec<String> = match records.next() {
        None => return Err(IngestError::EmptyInput),
        Some(r) => {
            r.map_err(|e| IngestError::Csv { row: 1, message: e.to_string() })?.iter().map(str::to_owned).collect()
        }
    };
    if header.len() == 1 && header[0].is_empty() {
        return Err(IngestError::EmptyInput);
    }

    let mut rows = Vec::new();
    for (i, record) in records.enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| IngestError::Csv { row, message: e.to_string() })?;
        if record.len() != header.len() {
            return Err(IngestError::RaggedRow(row));
        }
        rows.push(record.iter().map(str::to_owned).collect());
    }
    Ok(Table { header, rows, source_id: String::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_table() {
        let t = parse_csv(b"a,b\n1,2\n", b',', b'"').unwrap();
        assert_eq!(t.header, ["a", "b"]);
        assert_eq!(t.rows, [["1", "2"]]);
    }

    #[test]
    fn quoted_fields() {
        let t = parse_csv(b"a,b\n\"x,y\",2\n\"multi\nline\",\"say \"\"hi\"\"\"\n", b',', b'"').unwrap();
        assert_eq!(t.rows[0], ["x,y", "2"]);
        assert_eq!(t.rows[1], ["multi\nline", "say \"hi\""]);
    }

    #[test]
    fn ragged_and_empty() {
        assert!(matches!(parse_csv(b"a,b\n1\n", b',', b'"'), Err(IngestError::RaggedRow(2))));
        assert!(matches!(parse_csv(b"a,b\n1,2\n3,4,5\n", b',', b'"'), Err(IngestError::RaggedRow(3))));
        assert!(matches!(parse_csv(b"", b',', b'"'), Err(IngestError::EmptyInput)));
    }

    #[test]
    fn other_delimiter_and_bom() {
        let t = parse_csv("\u{FEFF}a;b\r\n'1;2';3\r\n".as_bytes(), b';', b'\'').unwrap();
        assert_eq!(t.header, ["a", "b"]);
        assert_eq!(t.rows, [["1;2", "3"]]);
    }

    #[test]
    fn header_only() {
        let t = parse_csv(b"a,b\n", b',', b'"').unwrap();
        assert!(t.rows.is_empty());
    }
}
