use serde::Serialize;

use crate::Format;

/// Renders a report in the requested format. JSON is pretty-printed with a
/// trailing newline; field order is fixed by the report types.
pub fn emit<T: Serialize>(
    format: Format,
    value: &T,
    csv: impl FnOnce(&T) -> String,
    text: impl FnOnce(&T) -> String,
) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => csv(value),
        Format::Text => text(value),
    }
}

pub fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or(String::new(), T::to_string)
}

pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
