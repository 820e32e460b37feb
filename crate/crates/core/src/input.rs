//! Input documents: a measure space plus named functions, read from JSON or
//! CSV.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::space::{Atom, Field, FunctionVec, MeasureSpace, Scalar};

/// One function value: a bare number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Value(pub Scalar);

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::report::scalar::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Value;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or an [re, im] pair")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Value, E> {
                Ok(Value(Scalar::new(v, 0.0)))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Value, A::Error> {
                let re: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(Value(Scalar::new(re, im)))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub field: Field,
    pub atoms: Vec<Atom>,
    pub functions: BTreeMap<String, Vec<Value>>,
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Header `atom_id,weight,...`; every other column is a function, either
    /// `NAME` (real) or a `NAME_re`/`NAME_im` pair. The field is complex iff
    /// some `_im` column is present.
    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |m: String| Error::Input(m);
        let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
        if headers.get(0) != Some("atom_id") || headers.get(1) != Some("weight") {
            return Err(bad("CSV header must start with atom_id,weight".into()));
        }
        // (function name, is imaginary part) per value column
        let columns: Vec<(String, bool)> = headers
            .iter()
            .skip(2)
            .map(|h| {
                if let Some(name) = h.strip_suffix("_im") {
                    (name.to_string(), true)
                } else {
                    (h.strip_suffix("_re").unwrap_or(h).to_string(), false)
                }
            })
            .collect();
        let field = if columns.iter().any(|c| c.1) { Field::Complex } else { Field::Real };
        let mut seen = BTreeMap::new();
        for (name, im) in &columns {
            if name.is_empty() {
                return Err(bad("empty function name in CSV header".into()));
            }
            let slot: &mut [bool; 2] = seen.entry(name.clone()).or_default();
            if slot[*im as usize] {
                return Err(bad(format!("duplicate column for function `{name}`")));
            }
            slot[*im as usize] = true;
        }
        if let Some((name, _)) = seen.iter().find(|(_, s)| !s[0]) {
            return Err(bad(format!("function `{name}` has an imaginary column but no real one")));
        }

        let mut atoms = Vec::new();
        let mut functions: BTreeMap<String, Vec<Value>> = seen.keys().map(|k| (k.clone(), Vec::new())).collect();
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| bad(e.to_string()))?;
            let number = |k: usize| -> Result<f64> {
                let cell = record.get(k).unwrap_or("");
                cell.parse::<f64>().map_err(|_| bad(format!("row {}: `{cell}` is not a number", row + 2)))
            };
            atoms.push(Atom { id: record.get(0).unwrap_or("").to_string(), weight: number(1)? });
            let mut values: BTreeMap<&str, Scalar> = BTreeMap::new();
            for (k, (name, im)) in columns.iter().enumerate() {
                let x = number(k + 2)?;
                let z = values.entry(name).or_default();
                if *im {
                    z.im = x;
                } else {
                    z.re = x;
                }
            }
            for (name, z) in values {
                functions.get_mut(name).expect("column names are registered").push(Value(z));
            }
        }
        let doc = Self { field, atoms, functions };
        doc.validate()?;
        Ok(doc)
    }

    /// Reads `path` as CSV when it ends in `.csv`, JSON otherwise.
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            Self::from_csv(&text)
        } else {
            Self::from_json(&text)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let space = self.space()?;
        for name in self.functions.keys() {
            space.check(&self.function(name)?)?;
        }
        Ok(())
    }

    pub fn space(&self) -> Result<MeasureSpace> {
        MeasureSpace::new(self.atoms.clone(), self.field)
    }

    pub fn function(&self, name: &str) -> Result<FunctionVec> {
        let values = self.functions.get(name).ok_or_else(|| Error::Input(format!("no function named `{name}`")))?;
        FunctionVec::new(values.iter().map(|v| v.0).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const JSON: &str = r#"{
        "field": "complex",
        "atoms": [{"id": "a", "weight": 1.0}, {"id": "b", "weight": 2.5}],
        "functions": {"f": [1, [0.5, -2]], "g": [[0, 1], 3.25]}
    }"#;

    #[test]
    fn json_accepts_numbers_and_pairs() {
        let doc = InputDocument::from_json(JSON).unwrap();
        assert_eq!(doc.function("f").unwrap().values(), &[Scalar::new(1.0, 0.0), Scalar::new(0.5, -2.0)]);
        assert_eq!(doc.space().unwrap().weights().collect::<Vec<_>>(), vec![1.0, 2.5]);
    }

    #[test]
    fn json_round_trip() {
        let doc = InputDocument::from_json(JSON).unwrap();
        assert_eq!(InputDocument::from_json(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn csv_matches_json() {
        let csv = "atom_id,weight,f_re,f_im,g_re,g_im\na,1.0,1,0,0,1\nb,2.5,0.5,-2,3.25,0\n";
        assert_eq!(InputDocument::from_csv(csv).unwrap(), InputDocument::from_json(JSON).unwrap());
    }

    #[test]
    fn csv_plain_columns_are_real() {
        let doc = InputDocument::from_csv("atom_id,weight,f\nx,1,2\ny,1,-3\n").unwrap();
        assert_eq!(doc.field, Field::Real);
        assert_eq!(doc.function("f").unwrap().values()[1], Scalar::new(-3.0, 0.0));
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        let cases = [
            r#"{"field": "real", "atoms": [{"id": "a", "weight": 1}], "functions": {"f": [1, 2]}}"#,
            r#"{"field": "real", "atoms": [{"id": "a", "weight": 0}], "functions": {}}"#,
            r#"{"field": "real", "atoms": [{"id": "a", "weight": 1}], "functions": {"f": [[1, 2]]}}"#,
            r#"{"field": "real", "atoms": [{"id": "a", "weight": 1}, {"id": "a", "weight": 1}], "functions": {}}"#,
            r#"{"field": "quaternion", "atoms": [], "functions": {}}"#,
            r#"{"field": "real", "atoms": [{"id": "a", "weight": 1}], "functions": {"f": [[1, 2, 3]]}}"#,
        ];
        for c in cases {
            assert!(InputDocument::from_json(c).is_err(), "{c}");
        }
        assert!(InputDocument::from_csv("id,weight,f\na,1,1\n").is_err());
        assert!(InputDocument::from_csv("atom_id,weight,f_im\na,1,1\n").is_err());
        assert!(InputDocument::from_csv("atom_id,weight,f\na,1,x\n").is_err());
    }
}
