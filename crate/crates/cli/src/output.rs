use anyhow::Result;

use crate::TableFormat;

/// Renders `rows` under `header` as an aligned text table or CSV.
pub fn render(header: &[&str], rows: &[Vec<String>], format: TableFormat) -> Result<String> {
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header)?;
            for row in rows {
                w.write_record(row)?;
            }
            Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)?)
        }
        TableFormat::Table => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
            for row in rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let mut out = String::new();
            let mut line = |cells: &mut dyn Iterator<Item = &str>| {
                let padded: Vec<String> = cells.zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
                out.push_str(padded.join("  ").trim_end());
                out.push('\n');
            };
            line(&mut header.iter().copied());
            let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            line(&mut rule.iter().map(String::as_str));
            for row in rows {
                line(&mut row.iter().map(String::as_str));
            }
            Ok(out)
        }
    }
}

/// Shortest plain rendering of a float; `NaN`-free inputs assumed.
pub fn number(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{x:.0}")
    } else {
        format!("{x}")
    }
}
