//! One-line `key=value` records used by every report the crate emits.

use std::fmt;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Record::default().text("record", kind)
    }

    pub fn text(mut self, key: &str, value: impl fmt::Display) -> Self {
        let value = value.to_string();
        // values never contain whitespace so records split cleanly
        let value = value.split_whitespace().collect::<Vec<_>>().join("_");
        self.fields.push((key.to_owned(), value));
        self
    }

    pub fn real(self, key: &str, value: f64) -> Self {
        self.text(key, format_real(value))
    }

    pub fn int(self, key: &str, value: usize) -> Self {
        self.text(key, value)
    }

    pub fn flag(self, key: &str, value: bool) -> Self {
        self.text(key, value)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Parses a line produced by `Display`.
    pub fn parse(line: &str) -> Option<Self> {
        let mut fields = Vec::new();
        for token in line.split_whitespace() {
            let (k, v) = token.split_once('=')?;
            fields.push((k.to_owned(), v.to_owned()));
        }
        if fields.is_empty() {
            None
        } else {
            Some(Record { fields })
        }
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Shortest representation that round-trips.
pub fn format_real(value: f64) -> String {
    if value == 0.0 || (1e-4..1e7).contains(&value.abs()) {
        format!("{value}")
    } else {
        format!("{value:e}")
    }
}
