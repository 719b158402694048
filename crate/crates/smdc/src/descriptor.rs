//! JSON descriptor for a built code: everything needed to re-encode,
//! decode, verify, and audit it, including the literal generator matrices
//! and the full share coefficient map.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{CodeSpec, CodecError, LevelGenerator, Scheme, SmdcCode};

pub const FORMAT_TAG: &str = "smdc-code/v1";

#[derive(Debug, Error)]
pub enum DescriptorError {
    #[error("unsupported descriptor format {0:?}")]
    BadFormat(String),
    #[error("inconsistent descriptor: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub format: String,
    pub scheme: Scheme,
    pub l: usize,
    pub p: u64,
    pub m: Vec<u64>,
    pub n: Vec<usize>,
    pub seed: u64,
    pub blocklength: u64,
    pub scaled_m: Vec<u64>,
    pub key_len: usize,
    pub borrowed: usize,
    pub rates: Vec<usize>,
    pub generators: Vec<LevelGenerator>,
    /// Per encoder, per symbol: coefficients over `[messages | keys]`.
    pub share_rows: Vec<Vec<Vec<u64>>>,
}

impl CodeDescriptor {
    pub fn of(code: &SmdcCode) -> CodeDescriptor {
        CodeDescriptor {
            format: FORMAT_TAG.to_string(),
            scheme: code.scheme,
            l: code.levels(),
            p: code.spec.p,
            m: code.spec.m.clone(),
            n: code.spec.n.clone(),
            seed: code.seed,
            blocklength: code.blocklength,
            scaled_m: code.scaled_m.clone(),
            key_len: code.key_len,
            borrowed: code.borrowed,
            rates: code.rates.clone(),
            generators: code.generators.clone(),
            share_rows: code.share_rows().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serializes")
    }

    pub fn from_json(text: &str) -> Result<CodeDescriptor, DescriptorError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn into_code(self) -> Result<SmdcCode, DescriptorError> {
        if self.format != FORMAT_TAG {
            return Err(DescriptorError::BadFormat(self.format));
        }
        let spec = CodeSpec::new(self.p, self.m, self.n)?;
        if spec.levels() != self.l || self.scaled_m.len() != self.l {
            return Err(DescriptorError::Inconsistent(
                "level count does not match the size vectors".into(),
            ));
        }
        if self.share_rows.len() != self.l {
            return Err(DescriptorError::Inconsistent(
                "share map must list every encoder".into(),
            ));
        }
        for (idx, (&m, &scaled)) in spec.m.iter().zip(&self.scaled_m).enumerate() {
            if m * self.blocklength != scaled {
                return Err(DescriptorError::Inconsistent(format!(
                    "level {}: scaled size {} is not blocklength * {}",
                    idx + 1,
                    scaled,
                    m
                )));
            }
        }
        let free_len = self.scaled_m.iter().sum::<u64>() as usize + self.key_len;
        for (enc, rows) in self.share_rows.iter().enumerate() {
            if rows.len() != self.rates[enc] {
                return Err(DescriptorError::Inconsistent(format!(
                    "encoder {} has {} rows but rate {}",
                    enc + 1,
                    rows.len(),
                    self.rates[enc]
                )));
            }
            for row in rows {
                if row.len() != free_len {
                    return Err(DescriptorError::Inconsistent(format!(
                        "encoder {} row width {} vs free length {}",
                        enc + 1,
                        row.len(),
                        free_len
                    )));
                }
                if row.iter().any(|&v| v >= self.p) {
                    return Err(DescriptorError::Inconsistent(format!(
                        "encoder {} row has out-of-field coefficients",
                        enc + 1
                    )));
                }
            }
        }
        Ok(SmdcCode::from_parts(
            spec,
            self.scheme,
            self.seed,
            self.blocklength,
            self.scaled_m,
            self.key_len,
            self.borrowed,
            self.generators,
            self.share_rows,
        ))
    }
}
