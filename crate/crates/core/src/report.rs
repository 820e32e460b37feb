//! Serde helpers: scalars travel as `[re, im]` pairs.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::space::{FunctionVec, Scalar};

pub mod scalar {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Scalar::new(re, im))
    }
}

pub mod scalars {
    use super::*;

    pub fn serialize<S: Serializer>(zs: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = zs.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }
}

pub mod function {
    use super::*;

    pub fn serialize<S: Serializer>(f: &FunctionVec, s: S) -> Result<S::Ok, S::Error> {
        scalars::serialize(f.values(), s)
    }
}
