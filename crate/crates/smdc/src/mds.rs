//! The two systematic-key MDS generator families used throughout the crate.
//!
//! A `(c, k, n)` generator maps a row vector `[U | Z]` of `k - c` message
//! symbols and `c` key symbols to `n` coded symbols `Y = [U | Z] * G`.
//! Variant A keeps the keys in the clear as its first `c` coded symbols;
//! variant B codes every symbol through dense columns, which additionally
//! hides key subsets from small eavesdropping sets. Columns are drawn from
//! a Cauchy matrix so that every `k`-subset of the pooled unit and dense
//! columns is invertible.

use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, Matrix, PrimeField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MdsError {
    #[error("invalid parameters: need 0 <= c < k <= n, got c={c} k={k} n={n}")]
    InvalidParams { c: usize, k: usize, n: usize },
    #[error("field too small: need p >= n + k = {need}, got p = {p}")]
    FieldTooSmall { p: u64, need: u64 },
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("no column set satisfying the joint full-rank condition after {0} attempts")]
    GenerationFailed(u64),
    #[error("matrix does not decode: columns {0:?} are rank deficient")]
    NotMds(Vec<usize>),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Parameters of a `(c, k, n)` scheme: `c` key symbols, reconstruction from
/// any `k` of `n` coded symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdsParams {
    pub c: usize,
    pub k: usize,
    pub n: usize,
    pub p: u64,
}

impl MdsParams {
    pub fn new(c: usize, k: usize, n: usize, p: u64) -> Result<Self, MdsError> {
        if !(c < k && k <= n) {
            return Err(MdsError::InvalidParams { c, k, n });
        }
        PrimeField::new(p)?;
        Ok(MdsParams { c, k, n, p })
    }

    pub fn message_len(&self) -> usize {
        self.k - self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MdsVariant {
    A,
    B,
}

/// A reference into the pooled column set: the unit columns `f_1..f_k`
/// followed by the dense columns `g_1..g_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoolColumn {
    Unit(usize),
    Dense(usize),
}

/// Outcome of the exhaustive joint full-rank check over all `k`-subsets of
/// the pooled columns.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FullRankReport {
    pub checked_subsets: u64,
    pub failures: Vec<Vec<PoolColumn>>,
}

impl FullRankReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A concrete generator matrix plus the dense-column pool it was drawn from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdsGenerator {
    params: MdsParams,
    variant: MdsVariant,
    matrix: Matrix,
    /// All `n` dense columns. For generated codes this is the Cauchy pool
    /// the matrix was assembled from; for literal matrices it is the matrix
    /// itself.
    dense_pool: Matrix,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derive an independent stream seed from a base seed and a domain tag.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut s = seed ^ tag.wrapping_mul(0xa076_1d64_78bd_642f);
    splitmix64(&mut s)
}

/// Draw `n` dense columns from a seeded Cauchy matrix: pick distinct
/// `x_1..x_k` and `y_1..y_n` in GF(p) and set `g_j[i] = 1 / (x_i - y_j)`.
/// Every square submatrix of a Cauchy matrix is invertible, and mixing with
/// unit columns is verified exhaustively anyway; on the (unexpected) failure
/// of that check the seed is advanced and the draw retried.
pub fn gen_cauchy_columns(params: &MdsParams, seed: u64) -> Result<Matrix, MdsError> {
    let (k, n, p) = (params.k, params.n, params.p);
    if p < (n + k) as u64 {
        return Err(MdsError::FieldTooSmall {
            p,
            need: (n + k) as u64,
        });
    }
    let field = PrimeField::new(p)?;
    const MAX_ATTEMPTS: u64 = 64;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(derive_seed(seed, attempt));
        // partial Fisher-Yates: the first k + n entries of a random
        // permutation of GF(p)
        let mut pool: Vec<u64> = (0..p).collect();
        for i in 0..(k + n) {
            let j = i + (rng.next_u64() as usize) % (pool.len() - i);
            pool.swap(i, j);
        }
        let xs = &pool[..k];
        let ys = &pool[k..k + n];
        let mut cols = Matrix::zero(k, n, p)?;
        for (j, &y) in ys.iter().enumerate() {
            for (i, &x) in xs.iter().enumerate() {
                cols.set(i, j, field.inv(field.sub(x, y))?);
            }
        }
        let candidate = MdsGenerator {
            params: *params,
            variant: MdsVariant::B,
            matrix: cols.clone(),
            dense_pool: cols.clone(),
        };
        if candidate.verify_full_rank_condition().passed() {
            return Ok(cols);
        }
    }
    Err(MdsError::GenerationFailed(64))
}

impl MdsGenerator {
    /// Build a generator of the requested variant from seeded Cauchy columns.
    pub fn generate(params: MdsParams, variant: MdsVariant, seed: u64) -> Result<Self, MdsError> {
        let pool = gen_cauchy_columns(&params, seed)?;
        let matrix = match variant {
            MdsVariant::A => {
                // [ f_{k-c+1} .. f_k | g_1 .. g_{n-c} ]
                let mut m = Matrix::zero(params.k, params.n, params.p)?;
                for j in 0..params.c {
                    m.set(params.k - params.c + j, j, 1);
                }
                for j in 0..params.n - params.c {
                    for i in 0..params.k {
                        m.set(i, params.c + j, pool.get(i, j));
                    }
                }
                m
            }
            MdsVariant::B => pool.clone(),
        };
        Ok(MdsGenerator {
            params,
            variant,
            matrix,
            dense_pool: pool,
        })
    }

    /// Wrap a literal generator matrix. Only the decoding property is
    /// validated here: every `k`-subset of its columns must be invertible.
    /// The stronger pooled condition can still be queried through
    /// [`MdsGenerator::verify_full_rank_condition`].
    pub fn from_matrix(
        params: MdsParams,
        variant: MdsVariant,
        matrix: Matrix,
    ) -> Result<Self, MdsError> {
        if matrix.rows() != params.k || matrix.cols() != params.n {
            return Err(MdsError::LengthMismatch(format!(
                "matrix is {}x{}, params need {}x{}",
                matrix.rows(),
                matrix.cols(),
                params.k,
                params.n
            )));
        }
        if matrix.modulus() != params.p {
            return Err(MdsError::LengthMismatch(format!(
                "matrix modulus {} vs params p {}",
                matrix.modulus(),
                params.p
            )));
        }
        for subset in combinations(params.n, params.k) {
            if matrix.select_columns(&subset).rank() < params.k {
                return Err(MdsError::NotMds(subset));
            }
        }
        Ok(MdsGenerator {
            params,
            variant,
            dense_pool: matrix.clone(),
            matrix,
        })
    }

    pub fn params(&self) -> &MdsParams {
        &self.params
    }

    pub fn variant(&self) -> MdsVariant {
        self.variant
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dense_pool(&self) -> &Matrix {
        &self.dense_pool
    }

    /// Exhaustively check that every `k`-subset of `{f_1..f_k} ∪ {g_1..g_n}`
    /// has rank `k`. Failures are reported, not raised.
    pub fn verify_full_rank_condition(&self) -> FullRankReport {
        let (k, n, p) = (self.params.k, self.params.n, self.params.p);
        let mut failures = Vec::new();
        let mut checked = 0u64;
        for subset in combinations(k + n, k) {
            checked += 1;
            let mut rows: Vec<Vec<u64>> = Vec::with_capacity(k);
            let mut named = Vec::with_capacity(k);
            for &idx in &subset {
                if idx < k {
                    let mut unit = vec![0u64; k];
                    unit[idx] = 1;
                    rows.push(unit);
                    named.push(PoolColumn::Unit(idx + 1));
                } else {
                    rows.push(self.dense_pool.column(idx - k));
                    named.push(PoolColumn::Dense(idx - k + 1));
                }
            }
            if crate::field::rank_of_rows(p, &rows) < k {
                failures.push(named);
            }
        }
        FullRankReport {
            checked_subsets: checked,
            failures,
        }
    }

    /// Flat JSON document `{p, c, k, n, variant, matrix: [[..]]}` with the
    /// generator matrix row-major.
    pub fn to_json_doc(&self) -> serde_json::Value {
        let rows: Vec<Vec<u64>> = (0..self.params.k)
            .map(|r| self.matrix.row(r).to_vec())
            .collect();
        serde_json::json!({
            "p": self.params.p,
            "c": self.params.c,
            "k": self.params.k,
            "n": self.params.n,
            "variant": match self.variant { MdsVariant::A => "A", MdsVariant::B => "B" },
            "matrix": rows,
        })
    }

    /// Parse the flat document produced by [`MdsGenerator::to_json_doc`].
    /// The matrix is re-validated for decodability.
    pub fn from_json_doc(doc: &serde_json::Value) -> Result<Self, MdsError> {
        let field = |name: &str| -> Result<u64, MdsError> {
            doc.get(name)
                .and_then(|v| v.as_u64())
                .ok_or_else(|| MdsError::LengthMismatch(format!("missing field {name}")))
        };
        let params = MdsParams::new(
            field("c")? as usize,
            field("k")? as usize,
            field("n")? as usize,
            field("p")?,
        )?;
        let variant = match doc.get("variant").and_then(|v| v.as_str()) {
            Some("A") => MdsVariant::A,
            Some("B") => MdsVariant::B,
            other => {
                return Err(MdsError::LengthMismatch(format!(
                    "bad variant field {other:?}"
                )))
            }
        };
        let rows: Vec<Vec<u64>> = serde_json::from_value(
            doc.get("matrix")
                .cloned()
                .ok_or_else(|| MdsError::LengthMismatch("missing field matrix".into()))?,
        )
        .map_err(|e| MdsError::LengthMismatch(e.to_string()))?;
        let matrix = Matrix::from_rows(params.p, &rows)?;
        MdsGenerator::from_matrix(params, variant, matrix)
    }

    /// `Y = [U | Z] * G`.
    pub fn encode(&self, message: &[u64], keys: &[u64]) -> Result<Vec<u64>, MdsError> {
        if message.len() != self.params.message_len() {
            return Err(MdsError::LengthMismatch(format!(
                "message length {} vs {}",
                message.len(),
                self.params.message_len()
            )));
        }
        if keys.len() != self.params.c {
            return Err(MdsError::LengthMismatch(format!(
                "key length {} vs {}",
                keys.len(),
                self.params.c
            )));
        }
        let mut input = Vec::with_capacity(self.params.k);
        input.extend_from_slice(message);
        input.extend_from_slice(keys);
        Ok(self.matrix.left_mul_vec(&input)?)
    }

    /// Recover `(U, Z)` from the coded symbols at `positions` (0-based,
    /// distinct, exactly `k` of them).
    pub fn decode(
        &self,
        positions: &[usize],
        symbols: &[u64],
    ) -> Result<(Vec<u64>, Vec<u64>), MdsError> {
        let k = self.params.k;
        if positions.len() != k || symbols.len() != k {
            return Err(MdsError::LengthMismatch(format!(
                "need exactly {} positions and symbols, got {} / {}",
                k,
                positions.len(),
                symbols.len()
            )));
        }
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k || *sorted.last().unwrap() >= self.params.n {
            return Err(MdsError::LengthMismatch(
                "positions must be distinct and within range".into(),
            ));
        }
        // [U|Z] * G_sel = Y  <=>  G_sel^T * [U|Z]^T = Y^T
        let system = self.matrix.select_columns(positions).transpose();
        let input = system.solve(symbols)?;
        let (u, z) = input.split_at(self.params.message_len());
        Ok((u.to_vec(), z.to_vec()))
    }
}

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - r {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(4, 4), vec![vec![0, 1, 2, 3]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn cauchy_columns_pass_joint_check() {
        for (c, k, n, p) in [(1usize, 2usize, 3usize, 5u64), (2, 3, 4, 11)] {
            let params = MdsParams::new(c, k, n, p).unwrap();
            let cols = gen_cauchy_columns(&params, 7).unwrap();
            assert_eq!((cols.rows(), cols.cols()), (k, n));
            let gen = MdsGenerator::generate(params, MdsVariant::B, 7).unwrap();
            let report = gen.verify_full_rank_condition();
            assert!(report.passed(), "failures: {:?}", report.failures);
        }
    }

    #[test]
    fn field_too_small() {
        let params = MdsParams::new(1, 2, 3, 3).unwrap();
        assert!(matches!(
            gen_cauchy_columns(&params, 0),
            Err(MdsError::FieldTooSmall { .. })
        ));
    }

    #[test]
    fn duplicated_column_fails_check() {
        let params = MdsParams::new(1, 2, 3, 7).unwrap();
        let gen = MdsGenerator::generate(params, MdsVariant::B, 1).unwrap();
        let mut bad = gen.matrix().clone();
        for r in 0..2 {
            let v = bad.get(r, 0);
            bad.set(r, 1, v);
        }
        // decoding already fails, so from_matrix refuses it
        assert!(matches!(
            MdsGenerator::from_matrix(params, MdsVariant::B, bad.clone()),
            Err(MdsError::NotMds(_))
        ));
        let forced = MdsGenerator {
            params,
            variant: MdsVariant::B,
            matrix: bad.clone(),
            dense_pool: bad,
        };
        let report = forced.verify_full_rank_condition();
        assert!(!report.passed());
    }

    #[test]
    fn trivial_k_equals_n_generator_passes() {
        let params = MdsParams::new(0, 3, 3, 7).unwrap();
        let gen = MdsGenerator::generate(params, MdsVariant::B, 3).unwrap();
        assert!(gen.verify_full_rank_condition().passed());
    }

    #[test]
    fn variant_a_exposes_keys() {
        let params = MdsParams::new(2, 3, 4, 11).unwrap();
        let gen = MdsGenerator::generate(params, MdsVariant::A, 5).unwrap();
        let y = gen.encode(&[4], &[7, 9]).unwrap();
        assert_eq!(&y[..2], &[7, 9]);
        let zero = gen.encode(&[0], &[0, 0]).unwrap();
        assert_eq!(zero, vec![0; 4]);
    }

    #[test]
    fn encode_decode_roundtrip() {
        let params = MdsParams::new(1, 3, 4, 7).unwrap();
        for variant in [MdsVariant::A, MdsVariant::B] {
            let gen = MdsGenerator::generate(params, variant, 9).unwrap();
            for seed in 0..20u64 {
                let msg = vec![seed % 7, (seed / 7) % 7];
                let key = vec![(seed * 3) % 7];
                let y = gen.encode(&msg, &key).unwrap();
                for positions in combinations(4, 3) {
                    let symbols: Vec<u64> = positions.iter().map(|&i| y[i]).collect();
                    let (u, z) = gen.decode(&positions, &symbols).unwrap();
                    assert_eq!(u, msg);
                    assert_eq!(z, key);
                }
            }
        }
    }

    #[test]
    fn decode_wrong_arity_is_error() {
        let params = MdsParams::new(1, 3, 4, 7).unwrap();
        let gen = MdsGenerator::generate(params, MdsVariant::B, 9).unwrap();
        assert!(gen.decode(&[0, 1], &[1, 2]).is_err());
        assert!(gen.decode(&[0, 1, 1], &[1, 2, 3]).is_err());
    }

    #[test]
    fn generator_json_roundtrip() {
        let params = MdsParams::new(1, 2, 3, 5).unwrap();
        let gen = MdsGenerator::generate(params, MdsVariant::A, 42).unwrap();
        let text = serde_json::to_string(&gen).unwrap();
        let back: MdsGenerator = serde_json::from_str(&text).unwrap();
        assert_eq!(back, gen);
    }

    #[test]
    fn flat_json_document() {
        let params = MdsParams::new(1, 2, 3, 7).unwrap();
        let gen = MdsGenerator::generate(params, MdsVariant::B, 4).unwrap();
        let doc = gen.to_json_doc();
        assert_eq!(doc["p"], 7);
        assert_eq!(doc["variant"], "B");
        assert_eq!(doc["matrix"].as_array().unwrap().len(), 2);
        let back = MdsGenerator::from_json_doc(&doc).unwrap();
        assert_eq!(back.matrix(), gen.matrix());
        assert_eq!(back.params(), gen.params());
    }
}
