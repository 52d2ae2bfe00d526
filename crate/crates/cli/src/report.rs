use num_complex::Complex64;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "TRUE")]
    True,
    #[serde(rename = "FALSE")]
    False,
    #[serde(rename = "INDETERMINATE")]
    Indeterminate,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::False => 1,
            Verdict::True | Verdict::Indeterminate => 0,
        }
    }
}

/// A point (or slice-matrix vector) reproducing a verdict, with the value it attains.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub slice: usize,
    /// `[re, im]` pairs.
    pub vector: Vec<[f64; 2]>,
    pub value: f64,
}

impl Witness {
    pub fn new(slice: usize, vector: &[Complex64], value: f64) -> Self {
        Witness { slice, vector: vector.iter().map(|z| [z.re, z.im]).collect(), value }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificateReport {
    pub verdict: Verdict,
    pub reason: String,
    pub eigenvalue_table: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl CertificateReport {
    pub fn new(verdict: Verdict, reason: &str, eigenvalue_table: Vec<Vec<f64>>) -> Self {
        CertificateReport { verdict, reason: reason.into(), eigenvalue_table, witnesses: Vec::new(), extra: Map::new() }
    }

    pub fn error(code: &str, message: &str) -> Self {
        let mut r = CertificateReport::new(Verdict::Indeterminate, code, Vec::new());
        r.extra.insert("message".into(), message.into());
        r
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.extra.insert(key.into(), value.into());
        self
    }

    pub fn witness(mut self, w: Witness) -> Self {
        self.witnesses.push(w);
        self
    }
}
