use serde::Serialize;
use std::collections::BTreeMap;

/// A named verdict with the numbers it was decided from.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Certificate {
    pub name: String,
    pub pass: bool,
    pub data: BTreeMap<String, f64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn new(name: &str, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            pass: false,
            data: BTreeMap::new(),
            tolerance,
            notes: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.data.insert(key.to_string(), value);
        self
    }

    pub fn note(mut self, text: &str) -> Self {
        self.notes.push(text.to_string());
        self
    }

    pub fn verdict(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn get(&self, key: &str) -> f64 {
        self.data[key]
    }
}
