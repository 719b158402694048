//! The four code families: superposition (one ramp sub-code per level),
//! the two pairwise joint strategies, and the group-pairwise scheme for
//! differential security profiles. Every constructed code is represented
//! uniformly as a linear map over a free symbol vector
//! `[messages | keys]`, which gives one encoder and one universal decoder
//! for all of them and lets the verifier enumerate states directly.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{is_prime, FieldError, Matrix, PrimeField};
use crate::mds::{derive_seed, MdsError, MdsGenerator, MdsParams, MdsVariant};
use crate::region::RateTuple;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodecError {
    #[error("invalid code spec: {0}")]
    InvalidSpec(String),
    #[error("non-integral layout at level {level}: {detail}")]
    NonIntegralLayout { level: usize, detail: String },
    #[error("joint condition not met for pair ({alpha}, {beta}): {detail}")]
    ConditionNotMet {
        alpha: usize,
        beta: usize,
        detail: String,
    },
    #[error("security profile is not differential with r = {r}")]
    ProfileNotDS { r: usize },
    #[error("unsupported layout: {0}")]
    LayoutUnsupported(String),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("insufficient shares: cannot determine level {level}")]
    InsufficientShares { level: usize },
    #[error(transparent)]
    Mds(#[from] MdsError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A full problem instance: `L` levels over GF(p), per-level message sizes
/// and per-level security parameters `N_alpha < alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub p: u64,
    pub m: Vec<u64>,
    pub n: Vec<usize>,
}

impl CodeSpec {
    pub fn new(p: u64, m: Vec<u64>, n: Vec<usize>) -> Result<Self, CodecError> {
        let spec = CodeSpec { p, m, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn levels(&self) -> usize {
        self.m.len()
    }

    pub fn validate(&self) -> Result<(), CodecError> {
        let l = self.m.len();
        if l < 2 {
            return Err(CodecError::InvalidSpec("need at least two levels".into()));
        }
        if self.n.len() != l {
            return Err(CodecError::InvalidSpec(format!(
                "security profile has {} entries for {} levels",
                self.n.len(),
                l
            )));
        }
        if !is_prime(self.p) {
            return Err(CodecError::InvalidSpec(format!(
                "p = {} is not prime",
                self.p
            )));
        }
        for (idx, &n) in self.n.iter().enumerate() {
            if n > idx {
                return Err(CodecError::InvalidSpec(format!(
                    "need N_{} < {}, got {}",
                    idx + 1,
                    idx + 1,
                    n
                )));
            }
        }
        Ok(())
    }

    pub fn total_message(&self) -> u64 {
        self.m.iter().sum()
    }

    pub fn normalized_sizes(&self) -> Vec<BigRational> {
        let total = crate::rat::rat_u64(self.total_message());
        self.m
            .iter()
            .map(|&v| crate::rat::rat_u64(v) / total.clone())
            .collect()
    }

    /// Differential profile: maximally protected up to level `r`,
    /// unprotected above.
    pub fn is_ds_profile(&self, r: usize) -> bool {
        r >= 1
            && r <= self.levels()
            && self
                .n
                .iter()
                .enumerate()
                .all(|(idx, &n)| if idx < r { n == idx } else { n == 0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scheme {
    Superposition,
    PairwiseA { alpha: usize, beta: usize },
    PairwiseB { alpha: usize, beta: usize },
    GroupPairwise { r: usize },
}

impl Scheme {
    pub fn id_byte(&self) -> u8 {
        match self {
            Scheme::Superposition => 0,
            Scheme::PairwiseA { .. } => 1,
            Scheme::PairwiseB { .. } => 2,
            Scheme::GroupPairwise { .. } => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Superposition => "superposition",
            Scheme::PairwiseA { .. } => "pairwise-a",
            Scheme::PairwiseB { .. } => "pairwise-b",
            Scheme::GroupPairwise { .. } => "group-pairwise",
        }
    }
}

/// One encoder output per level: the `L` share vectors of a realization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareSet {
    pub shares: Vec<Vec<u64>>,
}

/// Per-level generator metadata kept for the code descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelGenerator {
    pub level: usize,
    pub blocks: usize,
    pub generator: MdsGenerator,
}

/// A fully built code: the linear share map plus enough metadata to
/// serialize, re-encode, and audit it.
#[derive(Debug, Clone, PartialEq)]
pub struct SmdcCode {
    pub spec: CodeSpec,
    pub scheme: Scheme,
    pub seed: u64,
    /// Scaling factor applied to the message sizes to make every sub-code
    /// layout integral.
    pub blocklength: u64,
    /// Concrete per-level message sizes (`blocklength * m`).
    pub scaled_m: Vec<u64>,
    /// Fresh uniform key symbols consumed by the code (including any
    /// auxiliary donor keys of the group-pairwise scheme).
    pub key_len: usize,
    /// Message symbols riding inside another level's key slots.
    pub borrowed: usize,
    /// Symbols emitted per encoder.
    pub rates: Vec<usize>,
    pub generators: Vec<LevelGenerator>,
    /// Per encoder, per emitted symbol: its coefficient row over the free
    /// vector `[messages | keys]`.
    share_rows: Vec<Vec<Vec<u64>>>,
}

impl SmdcCode {
    pub fn levels(&self) -> usize {
        self.spec.levels()
    }

    pub fn free_len(&self) -> usize {
        self.total_scaled_message() as usize + self.key_len
    }

    pub fn total_scaled_message(&self) -> u64 {
        self.scaled_m.iter().sum()
    }

    pub fn message_offset(&self, level: usize) -> usize {
        self.scaled_m[..level - 1].iter().sum::<u64>() as usize
    }

    pub fn total_symbols(&self) -> usize {
        self.rates.iter().sum()
    }

    pub fn share_rows(&self) -> &[Vec<Vec<u64>>] {
        &self.share_rows
    }

    pub fn rate_tuple(&self) -> RateTuple {
        RateTuple::from_symbol_counts(&self.rates, self.blocklength, self.spec.total_message())
    }

    pub(crate) fn from_parts(
        spec: CodeSpec,
        scheme: Scheme,
        seed: u64,
        blocklength: u64,
        scaled_m: Vec<u64>,
        key_len: usize,
        borrowed: usize,
        generators: Vec<LevelGenerator>,
        share_rows: Vec<Vec<Vec<u64>>>,
    ) -> Self {
        let rates = share_rows.iter().map(|s| s.len()).collect();
        SmdcCode {
            spec,
            scheme,
            seed,
            blocklength,
            scaled_m,
            key_len,
            borrowed,
            rates,
            generators,
            share_rows,
        }
    }

    /// Encode one realization. `messages[level-1]` must hold the scaled
    /// message symbols of that level, `key` the `key_len` key symbols.
    pub fn encode(&self, messages: &[Vec<u64>], key: &[u64]) -> Result<ShareSet, CodecError> {
        if messages.len() != self.levels() {
            return Err(CodecError::LengthMismatch(format!(
                "expected {} message vectors, got {}",
                self.levels(),
                messages.len()
            )));
        }
        for (idx, msg) in messages.iter().enumerate() {
            if msg.len() as u64 != self.scaled_m[idx] {
                return Err(CodecError::LengthMismatch(format!(
                    "level {} message has {} symbols, expected {}",
                    idx + 1,
                    msg.len(),
                    self.scaled_m[idx]
                )));
            }
        }
        if key.len() != self.key_len {
            return Err(CodecError::LengthMismatch(format!(
                "key has {} symbols, expected {}",
                key.len(),
                self.key_len
            )));
        }
        let field = PrimeField::new(self.spec.p)?;
        let mut free = Vec::with_capacity(self.free_len());
        for msg in messages {
            free.extend(msg.iter().map(|&v| field.reduce(v)));
        }
        free.extend(key.iter().map(|&v| field.reduce(v)));
        let shares = self
            .share_rows
            .iter()
            .map(|rows| {
                rows.iter()
                    .map(|row| {
                        row.iter()
                            .zip(&free)
                            .fold(0u64, |acc, (&c, &x)| field.add(acc, field.mul(c, x)))
                    })
                    .collect()
            })
            .collect();
        Ok(ShareSet { shares })
    }

    /// Universal decoder: from the shares of any nonempty access set of
    /// `u` encoders, recover the first `u` messages (at their scaled
    /// sizes). Encoders are 1-based.
    pub fn decode(
        &self,
        access: &[usize],
        shares: &[Vec<u64>],
    ) -> Result<Vec<Vec<u64>>, CodecError> {
        let l = self.levels();
        let mut seen = vec![false; l];
        if access.is_empty() || access.len() != shares.len() {
            return Err(CodecError::LengthMismatch(
                "access set and share list must be nonempty and equal length".into(),
            ));
        }
        for &e in access {
            if e == 0 || e > l || seen[e - 1] {
                return Err(CodecError::LengthMismatch(format!(
                    "bad access set entry {e}"
                )));
            }
            seen[e - 1] = true;
        }
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut rhs: Vec<u64> = Vec::new();
        for (&enc, share) in access.iter().zip(shares) {
            let expect = self.rates[enc - 1];
            if share.len() != expect {
                return Err(CodecError::LengthMismatch(format!(
                    "encoder {} share has {} symbols, expected {}",
                    enc,
                    share.len(),
                    expect
                )));
            }
            rows.extend(self.share_rows[enc - 1].iter().cloned());
            rhs.extend(share.iter().copied());
        }
        // Each wanted message coordinate must be a linear functional of the
        // received symbols: solve rows^T w = e_coord, then apply w to rhs.
        let depth = access.len();
        if rows.is_empty() {
            return match (1..=depth).find(|&lvl| self.scaled_m[lvl - 1] > 0) {
                Some(level) => Err(CodecError::InsufficientShares { level }),
                None => Ok(vec![Vec::new(); depth]),
            };
        }
        let system = Matrix::from_rows(self.spec.p, &rows)?.transpose();
        let mut targets = Vec::new();
        for level in 1..=depth {
            let off = self.message_offset(level);
            for j in 0..self.scaled_m[level - 1] as usize {
                let mut e = vec![0u64; self.free_len()];
                e[off + j] = 1;
                targets.push((level, e));
            }
        }
        let solutions =
            system.solve_columns(&targets.iter().map(|(_, e)| e.clone()).collect::<Vec<_>>());
        let field = PrimeField::new(self.spec.p)?;
        let mut out: Vec<Vec<u64>> = (0..depth).map(|_| Vec::new()).collect();
        for ((level, _), w) in targets.iter().zip(solutions) {
            let Some(w) = w else {
                return Err(CodecError::InsufficientShares { level: *level });
            };
            let value = w
                .iter()
                .zip(&rhs)
                .fold(0u64, |acc, (&c, &y)| field.add(acc, field.mul(c, y)));
            out[level - 1].push(value);
        }
        Ok(out)
    }
}

/// Where per-level generators come from: seeded draws, or literal matrices
/// for reproducing published codes.
#[derive(Debug, Clone, Default)]
pub enum GeneratorSource {
    #[default]
    Seeded,
    Fixed(BTreeMap<usize, MdsGenerator>),
}

impl GeneratorSource {
    fn level_generator(
        &self,
        level: usize,
        params: MdsParams,
        variant: MdsVariant,
        seed: u64,
    ) -> Result<MdsGenerator, CodecError> {
        match self {
            GeneratorSource::Seeded => Ok(MdsGenerator::generate(
                params,
                variant,
                derive_seed(seed, level as u64),
            )?),
            GeneratorSource::Fixed(map) => {
                let gen = map.get(&level).ok_or_else(|| {
                    CodecError::LayoutUnsupported(format!("no fixed generator for level {level}"))
                })?;
                if *gen.params() != params {
                    return Err(CodecError::LayoutUnsupported(format!(
                        "fixed generator for level {level} has mismatched parameters"
                    )));
                }
                Ok(gen.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Blocklength {
    /// Scale the message sizes by the minimal factor making every layout
    /// integral.
    Auto,
    /// Require the layout to work at the given sizes; fail otherwise.
    Unit,
}

// --- assembly machinery ----------------------------------------------------

type SparseRow = Vec<(usize, u64)>;

struct Assembler {
    p: u64,
    levels: usize,
    scaled_m: Vec<u64>,
    msg_offsets: Vec<usize>,
    total_msg: usize,
    key_count: usize,
    shares: Vec<Vec<SparseRow>>,
    generators: Vec<LevelGenerator>,
}

impl Assembler {
    fn new(p: u64, scaled_m: &[u64]) -> Self {
        let levels = scaled_m.len();
        let mut msg_offsets = Vec::with_capacity(levels);
        let mut acc = 0usize;
        for &m in scaled_m {
            msg_offsets.push(acc);
            acc += m as usize;
        }
        Assembler {
            p,
            levels,
            scaled_m: scaled_m.to_vec(),
            msg_offsets,
            total_msg: acc,
            key_count: 0,
            shares: vec![Vec::new(); levels],
            generators: Vec::new(),
        }
    }

    fn msg_row(&self, level: usize, idx: usize) -> SparseRow {
        debug_assert!((idx as u64) < self.scaled_m[level - 1]);
        vec![(self.msg_offsets[level - 1] + idx, 1)]
    }

    fn fresh_key(&mut self) -> SparseRow {
        let idx = self.total_msg + self.key_count;
        self.key_count += 1;
        vec![(idx, 1)]
    }

    /// Coded rows of one sub-code block: column `j` of the generator applied
    /// to the input rows.
    fn encode_block(&self, gen: &MdsGenerator, inputs: &[SparseRow]) -> Vec<SparseRow> {
        let field = PrimeField::new(self.p).expect("validated modulus");
        let matrix = gen.matrix();
        debug_assert_eq!(inputs.len(), matrix.rows());
        (0..matrix.cols())
            .map(|j| {
                let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
                for (i, input) in inputs.iter().enumerate() {
                    let coeff = matrix.get(i, j);
                    if coeff == 0 {
                        continue;
                    }
                    for &(idx, v) in input {
                        let add = field.mul(coeff, v);
                        let slot = acc.entry(idx).or_insert(0);
                        *slot = field.add(*slot, add);
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect()
    }

    fn push(&mut self, encoder: usize, row: SparseRow) {
        self.shares[encoder].push(row);
    }

    /// Emit one sub-code block across all encoders (coded symbol `j` to
    /// encoder `j`).
    fn push_block(&mut self, coded: Vec<SparseRow>) {
        debug_assert_eq!(coded.len(), self.levels);
        for (enc, row) in coded.into_iter().enumerate() {
            self.push(enc, row);
        }
    }

    fn record_generator(&mut self, level: usize, blocks: usize, gen: &MdsGenerator) {
        self.generators.push(LevelGenerator {
            level,
            blocks,
            generator: gen.clone(),
        });
    }

    fn finish(
        self,
        spec: CodeSpec,
        scheme: Scheme,
        seed: u64,
        blocklength: u64,
        borrowed: usize,
    ) -> SmdcCode {
        let free_len = self.total_msg + self.key_count;
        let share_rows = self
            .shares
            .into_iter()
            .map(|rows| {
                rows.into_iter()
                    .map(|sparse| {
                        let mut dense = vec![0u64; free_len];
                        for (idx, v) in sparse {
                            dense[idx] = v;
                        }
                        dense
                    })
                    .collect()
            })
            .collect();
        SmdcCode::from_parts(
            spec,
            scheme,
            seed,
            blocklength,
            self.scaled_m,
            self.key_count,
            borrowed,
            self.generators,
            share_rows,
        )
    }
}

// --- layout helpers ---------------------------------------------------------

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        a.max(b).max(1)
    } else {
        a / gcd(a, b) * b
    }
}

/// Sub-code parameters of level `alpha` under profile `n`: a
/// `(N_alpha, alpha, L)` scheme.
fn level_params(spec: &CodeSpec, alpha: usize) -> Result<MdsParams, CodecError> {
    Ok(MdsParams::new(
        spec.n[alpha - 1],
        alpha,
        spec.levels(),
        spec.p,
    )?)
}

/// Minimal blocklength making `m_alpha / span` integral for every listed
/// `(level, span)`.
fn lcm_blocklength(spec: &CodeSpec, spans: &[(usize, usize)]) -> u64 {
    let mut a = 1u64;
    for &(level, span) in spans {
        let m = spec.m[level - 1];
        if m == 0 {
            continue;
        }
        let denom = span as u64 / gcd(m, span as u64);
        a = lcm(a, denom);
    }
    a
}

fn require_unit(a: u64, spec: &CodeSpec, spans: &[(usize, usize)]) -> Result<(), CodecError> {
    if a == 1 {
        return Ok(());
    }
    let (level, span) = spans
        .iter()
        .find(|&&(level, span)| !spec.m[level - 1].is_multiple_of(span as u64))
        .copied()
        .expect("some level forced the scaling");
    Err(CodecError::NonIntegralLayout {
        level,
        detail: format!(
            "message size {} is not a multiple of {} symbols per block",
            spec.m[level - 1],
            span
        ),
    })
}

/// Superposition-encode one level: `blocks` independent sub-code blocks,
/// key slots drawn from fresh uniform keys.
fn emit_superposition_level(asm: &mut Assembler, gen: &MdsGenerator, level: usize, blocks: usize) {
    let params = *gen.params();
    asm.record_generator(level, blocks, gen);
    for b in 0..blocks {
        let mut inputs: Vec<SparseRow> = (0..params.message_len())
            .map(|j| asm.msg_row(level, b * params.message_len() + j))
            .collect();
        for _ in 0..params.c {
            let key = asm.fresh_key();
            inputs.push(key);
        }
        let coded = asm.encode_block(gen, &inputs);
        asm.push_block(coded);
    }
}

// --- builders ----------------------------------------------------------------

/// Separate per-level encoding: level `alpha` is carried by
/// `m_alpha / (alpha - N_alpha)` blocks of an `(N_alpha, alpha, L)` scheme.
pub fn build_superposition(spec: &CodeSpec, seed: u64) -> Result<SmdcCode, CodecError> {
    build_superposition_with(spec, seed, Blocklength::Auto, &GeneratorSource::Seeded)
}

/// Superposition at blocklength 1; errors when some level's layout is
/// fractional instead of scaling.
pub fn build_superposition_unit(spec: &CodeSpec, seed: u64) -> Result<SmdcCode, CodecError> {
    build_superposition_with(spec, seed, Blocklength::Unit, &GeneratorSource::Seeded)
}

pub fn build_superposition_with(
    spec: &CodeSpec,
    seed: u64,
    blocklength: Blocklength,
    gens: &GeneratorSource,
) -> Result<SmdcCode, CodecError> {
    spec.validate()?;
    let spans: Vec<(usize, usize)> = (1..=spec.levels())
        .filter(|&a| spec.m[a - 1] > 0)
        .map(|a| (a, a - spec.n[a - 1]))
        .collect();
    let a = lcm_blocklength(spec, &spans);
    if blocklength == Blocklength::Unit {
        require_unit(a, spec, &spans)?;
    }
    let scaled: Vec<u64> = spec.m.iter().map(|&m| m * a).collect();
    let mut asm = Assembler::new(spec.p, &scaled);
    for alpha in 1..=spec.levels() {
        if spec.m[alpha - 1] == 0 {
            continue;
        }
        let params = level_params(spec, alpha)?;
        let gen = gens.level_generator(alpha, params, MdsVariant::B, seed)?;
        let blocks = (scaled[alpha - 1] as usize) / params.message_len();
        emit_superposition_level(&mut asm, &gen, alpha, blocks);
    }
    Ok(asm.finish(spec.clone(), Scheme::Superposition, seed, a, 0))
}

/// Joint strategy for a pair `alpha < beta` with `N_alpha < N_beta <
/// alpha`: both levels use key-exposing generators, and the first
/// `theta = min(N_beta, alpha - N_beta)` key symbols of the higher level
/// are replaced by coded symbols of the lower one, which then serve double
/// duty in the first `theta` shares.
pub fn build_pairwise_a(
    spec: &CodeSpec,
    alpha: usize,
    beta: usize,
    seed: u64,
) -> Result<SmdcCode, CodecError> {
    build_pairwise_a_with(
        spec,
        alpha,
        beta,
        seed,
        Blocklength::Auto,
        &GeneratorSource::Seeded,
    )
}

pub fn build_pairwise_a_with(
    spec: &CodeSpec,
    alpha: usize,
    beta: usize,
    seed: u64,
    blocklength: Blocklength,
    gens: &GeneratorSource,
) -> Result<SmdcCode, CodecError> {
    spec.validate()?;
    let l = spec.levels();
    if !(alpha < beta && beta <= l) {
        return Err(CodecError::InvalidSpec(format!(
            "need alpha < beta <= L, got ({alpha}, {beta})"
        )));
    }
    let (na, nb) = (spec.n[alpha - 1], spec.n[beta - 1]);
    if !(na < nb && nb < alpha) {
        return Err(CodecError::ConditionNotMet {
            alpha,
            beta,
            detail: format!("need N_a < N_b < a, got N_a = {na}, N_b = {nb}"),
        });
    }
    if spec.m[alpha - 1] == 0 || spec.m[beta - 1] == 0 {
        return Err(CodecError::ConditionNotMet {
            alpha,
            beta,
            detail: "both paired levels need nonzero messages".into(),
        });
    }
    // paired blocks replace one key of a beta-block by a coded symbol of
    // the matching alpha-block, so the block counts must agree
    let (sa, sb) = (alpha - na, beta - nb);
    if spec.m[alpha - 1] * sb as u64 != spec.m[beta - 1] * sa as u64 {
        return Err(CodecError::LayoutUnsupported(format!(
            "pair needs matching block counts: m_{alpha}/{sa} vs m_{beta}/{sb}"
        )));
    }
    let spans: Vec<(usize, usize)> = (1..=l)
        .filter(|&g| spec.m[g - 1] > 0)
        .map(|g| (g, g - spec.n[g - 1]))
        .collect();
    let a = lcm_blocklength(spec, &spans);
    if blocklength == Blocklength::Unit {
        require_unit(a, spec, &spans)?;
    }
    let scaled: Vec<u64> = spec.m.iter().map(|&m| m * a).collect();
    let theta = nb.min(alpha - nb);
    debug_assert!(theta > 0);

    let mut asm = Assembler::new(spec.p, &scaled);
    // levels outside the pair are plain superposition
    for gamma in 1..=l {
        if gamma == alpha || gamma == beta || spec.m[gamma - 1] == 0 {
            continue;
        }
        let params = level_params(spec, gamma)?;
        let gen = gens.level_generator(gamma, params, MdsVariant::B, seed)?;
        let blocks = (scaled[gamma - 1] as usize) / params.message_len();
        emit_superposition_level(&mut asm, &gen, gamma, blocks);
    }

    let pa = level_params(spec, alpha)?;
    let pb = level_params(spec, beta)?;
    let gen_a = gens.level_generator(alpha, pa, MdsVariant::A, seed)?;
    let gen_b = gens.level_generator(beta, pb, MdsVariant::A, seed)?;
    // the replaced key slots must surface verbatim in the coded symbols
    for i in 0..theta {
        let col = gen_b.matrix().column(i);
        let key_slot = pb.message_len() + i;
        let is_unit = col
            .iter()
            .enumerate()
            .all(|(row, &v)| (v == 1) == (row == key_slot) && (v == 0) == (row != key_slot));
        if !is_unit {
            return Err(CodecError::LayoutUnsupported(format!(
                "level {beta} generator does not expose key slot {i} as a coded symbol"
            )));
        }
    }
    let blocks = (scaled[alpha - 1] as usize) / pa.message_len();
    asm.record_generator(alpha, blocks, &gen_a);
    asm.record_generator(beta, blocks, &gen_b);
    for b in 0..blocks {
        let mut inputs_a: Vec<SparseRow> = (0..pa.message_len())
            .map(|j| asm.msg_row(alpha, b * pa.message_len() + j))
            .collect();
        for _ in 0..pa.c {
            let key = asm.fresh_key();
            inputs_a.push(key);
        }
        let coded_a = asm.encode_block(&gen_a, &inputs_a);

        let mut inputs_b: Vec<SparseRow> = (0..pb.message_len())
            .map(|j| asm.msg_row(beta, b * pb.message_len() + j))
            .collect();
        inputs_b.extend(coded_a[..theta].iter().cloned());
        for _ in theta..pb.c {
            let key = asm.fresh_key();
            inputs_b.push(key);
        }
        let coded_b = asm.encode_block(&gen_b, &inputs_b);
        for enc in 0..l {
            asm.push(enc, coded_a[enc].clone());
            if enc >= theta {
                asm.push(enc, coded_b[enc].clone());
            } else {
                // the dropped symbol duplicates the one just pushed
                debug_assert_eq!(coded_b[enc], coded_a[enc]);
            }
        }
    }
    Ok(asm.finish(
        spec.clone(),
        Scheme::PairwiseA { alpha, beta },
        seed,
        a,
        theta * blocks,
    ))
}

/// Joint strategy for a pair `alpha < beta` with `N_beta <= N_alpha` and
/// `N_alpha > 0`: up to `min(N_alpha, alpha - N_beta)` message symbols of
/// the higher level ride inside the lower level's key slots and need no
/// shares of their own; any leftover of the higher level is encoded
/// separately.
pub fn build_pairwise_b(
    spec: &CodeSpec,
    alpha: usize,
    beta: usize,
    seed: u64,
) -> Result<SmdcCode, CodecError> {
    build_pairwise_b_with(
        spec,
        alpha,
        beta,
        seed,
        Blocklength::Auto,
        &GeneratorSource::Seeded,
    )
}

pub fn build_pairwise_b_with(
    spec: &CodeSpec,
    alpha: usize,
    beta: usize,
    seed: u64,
    blocklength: Blocklength,
    gens: &GeneratorSource,
) -> Result<SmdcCode, CodecError> {
    spec.validate()?;
    let l = spec.levels();
    if !(alpha < beta && beta <= l) {
        return Err(CodecError::InvalidSpec(format!(
            "need alpha < beta <= L, got ({alpha}, {beta})"
        )));
    }
    let (na, nb) = (spec.n[alpha - 1], spec.n[beta - 1]);
    if !(nb <= na && na > 0) {
        return Err(CodecError::ConditionNotMet {
            alpha,
            beta,
            detail: format!("need N_b <= N_a and N_a > 0, got N_a = {na}, N_b = {nb}"),
        });
    }
    if spec.m[alpha - 1] == 0 || spec.m[beta - 1] == 0 {
        return Err(CodecError::ConditionNotMet {
            alpha,
            beta,
            detail: "both paired levels need nonzero messages".into(),
        });
    }
    let eta_per_block = na.min(alpha - nb);
    debug_assert!(eta_per_block > 0);
    let span_a = alpha - na;
    let span_b = beta - nb;

    // pick the smallest blocklength with all layouts integral, including
    // the leftover of the donated level
    let layout = |a: u64| -> Option<(Vec<u64>, u64, u64)> {
        for gamma in 1..=l {
            if gamma == beta || spec.m[gamma - 1] == 0 {
                continue;
            }
            let span = if gamma == alpha {
                span_a
            } else {
                gamma - spec.n[gamma - 1]
            };
            if !(spec.m[gamma - 1] * a).is_multiple_of(span as u64) {
                return None;
            }
        }
        let blocks_a = spec.m[alpha - 1] * a / span_a as u64;
        let borrow = (eta_per_block as u64 * blocks_a).min(spec.m[beta - 1] * a);
        let leftover = spec.m[beta - 1] * a - borrow;
        if !leftover.is_multiple_of(span_b as u64) {
            return None;
        }
        Some((spec.m.iter().map(|&m| m * a).collect(), borrow, leftover))
    };
    let mut chosen = None;
    for a in 1..=4096u64 {
        if let Some(parts) = layout(a) {
            chosen = Some((a, parts));
            break;
        }
        if blocklength == Blocklength::Unit {
            break;
        }
    }
    let Some((a, (scaled, borrow, leftover))) = chosen else {
        return Err(CodecError::NonIntegralLayout {
            level: beta,
            detail: "no blocklength makes the borrowed-key layout integral".into(),
        });
    };

    let mut asm = Assembler::new(spec.p, &scaled);
    for gamma in 1..=l {
        if gamma == alpha || gamma == beta || spec.m[gamma - 1] == 0 {
            continue;
        }
        let params = level_params(spec, gamma)?;
        let gen = gens.level_generator(gamma, params, MdsVariant::B, seed)?;
        let blocks = (scaled[gamma - 1] as usize) / params.message_len();
        emit_superposition_level(&mut asm, &gen, gamma, blocks);
    }

    let pa = level_params(spec, alpha)?;
    let gen_a = gens.level_generator(alpha, pa, MdsVariant::B, seed)?;
    let blocks_a = (scaled[alpha - 1] as usize) / span_a;
    asm.record_generator(alpha, blocks_a, &gen_a);
    let mut donated = 0usize;
    for b in 0..blocks_a {
        let mut inputs: Vec<SparseRow> = (0..span_a)
            .map(|j| asm.msg_row(alpha, b * span_a + j))
            .collect();
        for _ in 0..eta_per_block.min(borrow as usize - donated) {
            inputs.push(asm.msg_row(beta, donated));
            donated += 1;
        }
        while inputs.len() < pa.k {
            let key = asm.fresh_key();
            inputs.push(key);
        }
        let coded = asm.encode_block(&gen_a, &inputs);
        asm.push_block(coded);
    }
    debug_assert_eq!(donated as u64, borrow);

    if leftover > 0 {
        let pb = level_params(spec, beta)?;
        let gen_b = gens.level_generator(beta, pb, MdsVariant::B, seed)?;
        let blocks_b = leftover as usize / span_b;
        asm.record_generator(beta, blocks_b, &gen_b);
        for b in 0..blocks_b {
            let mut inputs: Vec<SparseRow> = (0..span_b)
                .map(|j| asm.msg_row(beta, borrow as usize + b * span_b + j))
                .collect();
            for _ in 0..pb.c {
                let key = asm.fresh_key();
                inputs.push(key);
            }
            let coded = asm.encode_block(&gen_b, &inputs);
            asm.push_block(coded);
        }
    }
    Ok(asm.finish(
        spec.clone(),
        Scheme::PairwiseB { alpha, beta },
        seed,
        a,
        borrow as usize,
    ))
}

/// The group-pairwise scheme for a differential profile with `r` protected
/// levels: each protected level is threshold-shared with its key slots
/// filled, in order, by the symbols of the donor levels `r+1 .. eta*` (plus
/// an auxiliary uniform key if the donors run out); whatever the donors do
/// not absorb is layered like an unprotected code.
pub fn build_group_pairwise(spec: &CodeSpec, r: usize, seed: u64) -> Result<SmdcCode, CodecError> {
    build_group_pairwise_with(spec, r, seed, Blocklength::Auto, &GeneratorSource::Seeded)
}

pub fn build_group_pairwise_with(
    spec: &CodeSpec,
    r: usize,
    seed: u64,
    blocklength: Blocklength,
    gens: &GeneratorSource,
) -> Result<SmdcCode, CodecError> {
    spec.validate()?;
    let l = spec.levels();
    if !spec.is_ds_profile(r) {
        return Err(CodecError::ProfileNotDS { r });
    }
    let (eta, aux_unit) = crate::region::compute_eta_star(l, r, &spec.m);
    let demand_unit: u64 = (1..=r).map(|a| (a as u64 - 1) * spec.m[a - 1]).sum();

    // plain-coded levels need their symbol counts divisible by the level,
    // except level L, whose symbols can ride raw on individual encoders
    let plain_count_unit = |gamma: usize| -> u64 {
        if gamma < eta || gamma > l {
            0
        } else if gamma == eta {
            let absorbed: u64 = (r + 1..=eta.min(l)).map(|j| spec.m[j - 1]).sum();
            absorbed - demand_unit.min(absorbed)
        } else {
            spec.m[gamma - 1]
        }
    };
    let mut a = 1u64;
    for gamma in eta.max(r + 1)..l {
        let count = plain_count_unit(gamma);
        if count > 0 {
            let denom = gamma as u64 / gcd(count, gamma as u64);
            a = lcm(a, denom);
        }
    }
    if blocklength == Blocklength::Unit && a != 1 {
        let gamma = (eta.max(r + 1)..l)
            .find(|&g| {
                let c = plain_count_unit(g);
                c > 0 && c % g as u64 != 0
            })
            .expect("some level forced the scaling");
        return Err(CodecError::NonIntegralLayout {
            level: gamma,
            detail: format!(
                "{} leftover symbols cannot fill blocks of {}",
                plain_count_unit(gamma),
                gamma
            ),
        });
    }
    let scaled: Vec<u64> = spec.m.iter().map(|&m| m * a).collect();
    let demand = demand_unit * a;
    let aux = aux_unit * a;

    let mut asm = Assembler::new(spec.p, &scaled);
    // donor queue: the messages consumed as key material, in level order,
    // then the auxiliary uniform key
    let mut donors: Vec<SparseRow> = Vec::new();
    let mut donated_at = vec![0u64; l + 1];
    for gamma in r + 1..=l.min(eta) {
        let available = scaled[gamma - 1];
        let still_needed = demand.saturating_sub(donors.len() as u64);
        let take = available.min(still_needed);
        for j in 0..take {
            donors.push(asm.msg_row(gamma, j as usize));
        }
        donated_at[gamma] = take;
    }
    for _ in 0..aux {
        let key = asm.fresh_key();
        donors.push(key);
    }
    debug_assert_eq!(donors.len() as u64, demand);
    let mut next_donor = 0usize;

    // protected levels: one message symbol per block, keys from the queue
    for alpha in 1..=r {
        if scaled[alpha - 1] == 0 {
            continue;
        }
        let params = MdsParams::new(alpha - 1, alpha, l, spec.p)?;
        let gen = gens.level_generator(alpha, params, MdsVariant::B, seed)?;
        let blocks = scaled[alpha - 1] as usize;
        asm.record_generator(alpha, blocks, &gen);
        for b in 0..blocks {
            let mut inputs = vec![asm.msg_row(alpha, b)];
            for _ in 0..alpha - 1 {
                inputs.push(donors[next_donor].clone());
                next_donor += 1;
            }
            let coded = asm.encode_block(&gen, &inputs);
            asm.push_block(coded);
        }
    }
    debug_assert_eq!(next_donor, donors.len());

    // leftover of the cutoff level and everything above it
    let mut borrowed_msgs = 0u64;
    for gamma in r + 1..=l {
        borrowed_msgs += donated_at[gamma];
        let skip = donated_at[gamma] as usize;
        let count = scaled[gamma - 1] as usize - skip;
        if count == 0 {
            continue;
        }
        if gamma == l {
            // raw placement: spread evenly, extras on the last encoders
            let q = count / l;
            let rem = count % l;
            let mut sym = skip;
            for enc in 0..l {
                let take = q + usize::from(enc >= l - rem);
                for _ in 0..take {
                    let row = asm.msg_row(gamma, sym);
                    asm.push(enc, row);
                    sym += 1;
                }
            }
        } else {
            let params = MdsParams::new(0, gamma, l, spec.p)?;
            let gen = gens.level_generator(gamma, params, MdsVariant::B, seed)?;
            let blocks = count / gamma;
            debug_assert_eq!(blocks * gamma, count);
            asm.record_generator(gamma, blocks, &gen);
            for b in 0..blocks {
                let inputs: Vec<SparseRow> = (0..gamma)
                    .map(|j| asm.msg_row(gamma, skip + b * gamma + j))
                    .collect();
                let coded = asm.encode_block(&gen, &inputs);
                asm.push_block(coded);
            }
        }
    }
    Ok(asm.finish(
        spec.clone(),
        Scheme::GroupPairwise { r },
        seed,
        a,
        borrowed_msgs as usize,
    ))
}

/// Build any scheme with automatic blocklength scaling.
pub fn build(spec: &CodeSpec, scheme: Scheme, seed: u64) -> Result<SmdcCode, CodecError> {
    match scheme {
        Scheme::Superposition => build_superposition(spec, seed),
        Scheme::PairwiseA { alpha, beta } => build_pairwise_a(spec, alpha, beta, seed),
        Scheme::PairwiseB { alpha, beta } => build_pairwise_b(spec, alpha, beta, seed),
        Scheme::GroupPairwise { r } => build_group_pairwise(spec, r, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;

    fn spec(p: u64, m: &[u64], n: &[usize]) -> CodeSpec {
        CodeSpec::new(p, m.to_vec(), n.to_vec()).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(CodeSpec::new(5, vec![1], vec![0]).is_err());
        assert!(CodeSpec::new(6, vec![1, 1], vec![0, 0]).is_err());
        assert!(CodeSpec::new(5, vec![1, 1], vec![1, 0]).is_err());
        assert!(CodeSpec::new(5, vec![1, 1], vec![0, 2]).is_err());
        assert!(CodeSpec::new(5, vec![1, 1], vec![0, 1]).is_ok());
    }

    #[test]
    fn superposition_rates_and_roundtrip() {
        // p = 7 covers every sub-code: the largest needs p >= L + k = 6
        let s = spec(7, &[1, 1, 2], &[0, 1, 1]);
        let code = build_superposition(&s, 42).unwrap();
        assert_eq!(code.blocklength, 1);
        assert_eq!(code.rates, vec![3, 3, 3]);
        assert_eq!(code.key_len, 2); // one key for level 2, one for level 3
        let messages = vec![vec![3], vec![5], vec![1, 6]];
        let key = vec![2, 4];
        let shares = code.encode(&messages, &key).unwrap();
        for (enc, share) in shares.shares.iter().enumerate() {
            assert_eq!(share.len(), code.rates[enc]);
        }
        let got = code
            .decode(
                &[1, 2, 3],
                &[
                    shares.shares[0].clone(),
                    shares.shares[1].clone(),
                    shares.shares[2].clone(),
                ],
            )
            .unwrap();
        assert_eq!(got, messages);
        // partial access recovers the prefix
        let got = code
            .decode(
                &[2, 3],
                &[shares.shares[1].clone(), shares.shares[2].clone()],
            )
            .unwrap();
        assert_eq!(got, vec![vec![3], vec![5]]);
        let got = code.decode(&[3], &[shares.shares[2].clone()]).unwrap();
        assert_eq!(got, vec![vec![3]]);
    }

    #[test]
    fn superposition_zero_inputs_give_zero_shares() {
        let s = spec(7, &[1, 1], &[0, 1]);
        let code = build_superposition(&s, 1).unwrap();
        let shares = code
            .encode(&[vec![0], vec![0]], &vec![0; code.key_len])
            .unwrap();
        assert!(shares.shares.iter().all(|s| s.iter().all(|&v| v == 0)));
    }

    #[test]
    fn superposition_scales_fractional_layouts() {
        // level 3 with one unprotected symbol needs three copies to fill
        // whole blocks
        let s = spec(7, &[1, 1, 1], &[0, 1, 1]);
        let code = build_superposition(&s, 3).unwrap();
        assert_eq!(code.blocklength, 2);
        assert!(matches!(
            build_superposition_unit(&s, 3),
            Err(CodecError::NonIntegralLayout { level: 3, .. })
        ));
    }

    #[test]
    fn single_level_only() {
        // two blocks of a one-key threshold code; per-encoder rate
        // m_2 / (2 - 1) = 2
        let s = spec(7, &[0, 2, 0], &[0, 1, 0]);
        let code = build_superposition(&s, 5).unwrap();
        assert_eq!(code.rates, vec![2, 2, 2]);
        assert_eq!(code.scaled_m, vec![0, 2, 0]);
        assert_eq!(code.blocklength, 1);
        assert_eq!(code.key_len, 2);
    }

    #[test]
    fn pairwise_a_needs_its_condition() {
        let s = spec(7, &[1, 1, 2], &[0, 1, 1]);
        // N_2 = N_3 violates the strict chain
        assert!(matches!(
            build_pairwise_a(&s, 2, 3, 0),
            Err(CodecError::ConditionNotMet { .. })
        ));
    }

    #[test]
    fn pairwise_a_saves_theta_symbols() {
        // (alpha, beta) = (2, 3), N = (0, 0, 1): theta = 1
        let s = spec(11, &[0, 2, 2], &[0, 0, 1]);
        let joint = build_pairwise_a(&s, 2, 3, 9).unwrap();
        let separate = build_superposition(&s, 9).unwrap();
        assert_eq!(joint.blocklength, 1);
        assert_eq!(
            separate.total_symbols() - joint.total_symbols(),
            joint.borrowed
        );
        assert_eq!(joint.borrowed, 1);
        assert_eq!(joint.rates, vec![1, 2, 2]);
        // exhaustive round-trip over a sample of realizations
        for trial in 0..50u64 {
            let m2 = vec![trial % 11, (trial * 3) % 11];
            let m3 = vec![(trial * 5) % 11, (trial * 7) % 11];
            let shares = joint
                .encode(&[vec![], m2.clone(), m3.clone()], &[])
                .unwrap();
            let all: Vec<Vec<u64>> = shares.shares.clone();
            let got = joint.decode(&[1, 2, 3], &all).unwrap();
            assert_eq!(got, vec![vec![], m2.clone(), m3]);
            let got = joint
                .decode(&[1, 3], &[all[0].clone(), all[2].clone()])
                .unwrap();
            assert_eq!(got[1], m2);
        }
    }

    #[test]
    fn pairwise_b_saves_borrowed_symbols() {
        // (alpha, beta) = (2, 3), N = (0, 1, 0): one symbol of level 3 rides
        // in level 2's key slot
        let s = spec(11, &[1, 1, 1], &[0, 1, 0]);
        let code = build_pairwise_b(&s, 2, 3, 4).unwrap();
        assert_eq!(code.blocklength, 1);
        assert_eq!(code.borrowed, 1);
        assert_eq!(code.key_len, 0);
        assert_eq!(code.rates, vec![2, 2, 2]);
        let m = vec![vec![9], vec![4], vec![6]];
        let shares = code.encode(&m, &[]).unwrap();
        let all = shares.shares.clone();
        assert_eq!(code.decode(&[1, 2, 3], &all).unwrap(), m);
        // any two shares already recover levels 1 and 2
        let got = code
            .decode(&[1, 3], &[all[0].clone(), all[2].clone()])
            .unwrap();
        assert_eq!(got, vec![vec![9], vec![4]]);
    }

    #[test]
    fn pairwise_b_needs_its_condition() {
        let s = spec(11, &[1, 1, 1], &[0, 0, 0]);
        assert!(matches!(
            build_pairwise_b(&s, 2, 3, 0),
            Err(CodecError::ConditionNotMet { .. })
        ));
    }

    #[test]
    fn group_pairwise_profile_check() {
        let s = spec(11, &[1, 1, 1, 4], &[0, 1, 2, 0]);
        assert!(build_group_pairwise(&s, 2, 0).is_err());
        assert!(build_group_pairwise(&s, 3, 0).is_ok());
        let bad = spec(11, &[1, 1, 1, 4], &[0, 1, 1, 0]);
        assert!(matches!(
            build_group_pairwise(&bad, 3, 0),
            Err(CodecError::ProfileNotDS { r: 3 })
        ));
    }

    #[test]
    fn group_pairwise_r_equals_l_is_threshold_superposition() {
        let s = spec(7, &[1, 1], &[0, 1]);
        let code = build_group_pairwise(&s, 2, 8).unwrap();
        // every encoder carries one symbol per level
        assert_eq!(code.rates, vec![2, 2]);
        // donors are exhausted, so the whole key demand is auxiliary
        assert_eq!(code.key_len, 1);
        assert_eq!(code.borrowed, 0);
        let m = vec![vec![3], vec![6]];
        let shares = code.encode(&m, &[5]).unwrap();
        assert_eq!(code.decode(&[1, 2], &shares.shares.clone()).unwrap(), m);
    }

    #[test]
    fn group_pairwise_all_messages_above_r_zero() {
        // no donors at all: auxiliary key carries the demand, and the rates
        // match the fully protected superposition
        let s = spec(7, &[1, 1, 0], &[0, 1, 0]);
        let code = build_group_pairwise(&s, 2, 8).unwrap();
        assert_eq!(code.rates, vec![2, 2, 2]);
        assert_eq!(code.key_len, 1);
    }

    #[test]
    fn normalized_rates_match_symbol_counts() {
        let s = spec(11, &[1, 1, 1, 4], &[0, 1, 2, 0]);
        let code = build_group_pairwise(&s, 3, 0).unwrap();
        assert_eq!(code.rates, vec![3, 3, 3, 4]);
        let rt = code.rate_tuple();
        assert_eq!(rt.values[0], ratio(3, 7));
        assert_eq!(rt.values[3], ratio(4, 7));
        assert_eq!(rt.sum(), ratio(13, 7));
    }

    #[test]
    fn decode_rejects_bad_access_sets() {
        let s = spec(7, &[1, 1], &[0, 1]);
        let code = build_superposition(&s, 1).unwrap();
        let shares = code
            .encode(&[vec![1], vec![2]], &vec![0; code.key_len])
            .unwrap();
        assert!(code.decode(&[], &[]).is_err());
        assert!(code
            .decode(
                &[1, 1],
                &[shares.shares[0].clone(), shares.shares[0].clone()]
            )
            .is_err());
        assert!(code.decode(&[3], &[shares.shares[0].clone()]).is_err());
    }
}
