//! Serde forms shared by the CLI, session files and the wasm demo.
//!
//! Output is produced through [`serde_json::Value`], whose maps keep keys
//! sorted, so every emitted document is canonical.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poly::{Ring, RingCtx};

/// A ring in JSON: either `"Q[x,y]"` or `{"variables": [...], "characteristic": 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingSpec {
    Text(String),
    Fields {
        variables: Vec<String>,
        #[serde(default)]
        characteristic: u32,
    },
}

impl RingSpec {
    pub fn to_ring(&self) -> Result<Ring> {
        match self {
            RingSpec::Text(s) => RingCtx::parse(s),
            RingSpec::Fields { variables, characteristic } => RingCtx::new(variables, *characteristic),
        }
    }

    pub fn from_ring(ring: &Ring) -> Self {
        RingSpec::Fields {
            variables: ring.variables().to_vec(),
            characteristic: ring.characteristic(),
        }
    }
}

pub fn ring_json(ring: &Ring) -> Value {
    serde_json::to_value(RingSpec::from_ring(ring)).expect("ring spec serializes")
}

/// Pretty, key-sorted rendering.
pub fn canonical(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("values always serialize")
}

pub fn from_str<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

pub fn from_value<T: serde::de::DeserializeOwned>(value: Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::Format(e.to_string()))
}
