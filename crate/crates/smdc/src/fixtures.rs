//! Literal reference codes with fixed generator matrices. These reproduce
//! well-known worked instances byte-for-byte, so tests and demos can pin
//! exact share values instead of seeded draws.

use std::collections::BTreeMap;

use crate::codec::{
    build_group_pairwise_with, build_pairwise_a_with, build_pairwise_b_with,
    build_superposition_with, Blocklength, CodeSpec, CodecError, GeneratorSource, SmdcCode,
};
use crate::field::Matrix;
use crate::mds::{MdsGenerator, MdsParams, MdsVariant};

fn fixed(
    p: u64,
    entries: Vec<(usize, usize, usize, MdsVariant, Vec<Vec<u64>>)>,
) -> Result<GeneratorSource, CodecError> {
    let mut map = BTreeMap::new();
    for (level, c, k, variant, rows) in entries {
        let n = rows[0].len();
        let params = MdsParams::new(c, k, n, p)?;
        let matrix = Matrix::from_rows(p, &rows)?;
        map.insert(level, MdsGenerator::from_matrix(params, variant, matrix)?);
    }
    Ok(GeneratorSource::Fixed(map))
}

/// The three-level fully protected instance over GF(3) with unit messages:
/// level 1 replicated, level 2 a one-key threshold code, level 3 a two-key
/// threshold code. Shares come out as
/// `W_1 = (M_1, M_2 + Z_2, M_3 + Z_3^1)`,
/// `W_2 = (M_1, M_2 + 2 Z_2, M_3 + Z_3^2)`,
/// `W_3 = (M_1, Z_2, Z_3^1 + Z_3^2)`.
pub fn threshold_triple() -> Result<SmdcCode, CodecError> {
    let spec = CodeSpec::new(3, vec![1, 1, 1], vec![0, 1, 2])?;
    let gens = fixed(
        3,
        vec![
            (1, 0, 1, MdsVariant::B, vec![vec![1, 1, 1]]),
            (2, 1, 2, MdsVariant::A, vec![vec![1, 1, 0], vec![1, 2, 1]]),
            (
                3,
                2,
                3,
                MdsVariant::A,
                vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]],
            ),
        ],
    )?;
    build_superposition_with(&spec, 0, Blocklength::Unit, &gens)
}

fn two_level_pair_generators() -> Result<GeneratorSource, CodecError> {
    fixed(
        5,
        vec![
            (2, 0, 2, MdsVariant::A, vec![vec![1, 2, 1], vec![1, 1, 2]]),
            (
                3,
                1,
                3,
                MdsVariant::A,
                vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 1, 1]],
            ),
        ],
    )
}

fn pair_code_spec() -> Result<CodeSpec, CodecError> {
    CodeSpec::new(5, vec![0, 2, 2], vec![0, 0, 1])
}

/// Two-level separate encoding over GF(5) with `m_2 = m_3 = 2` and one key
/// protecting level 3; the key itself appears in the first share:
/// `W_1 = (M_2^1 + M_2^2, Z_3)`,
/// `W_2 = (2 M_2^1 + M_2^2, M_3^1 + 2 M_3^2 + Z_3)`,
/// `W_3 = (M_2^1 + 2 M_2^2, 2 M_3^1 + M_3^2 + Z_3)`.
pub fn pair_separate() -> Result<SmdcCode, CodecError> {
    build_superposition_with(
        &pair_code_spec()?,
        0,
        Blocklength::Unit,
        &two_level_pair_generators()?,
    )
}

/// The joint version of [`pair_separate`]: the level-2 coded symbol
/// `Y_2^1 = M_2^1 + M_2^2` replaces the key `Z_3`, dropping one symbol:
/// `W_1 = (Y_2^1)`,
/// `W_2 = (2 M_2^1 + M_2^2, M_3^1 + 2 M_3^2 + Y_2^1)`,
/// `W_3 = (M_2^1 + 2 M_2^2, 2 M_3^1 + M_3^2 + Y_2^1)`.
pub fn pair_joint() -> Result<SmdcCode, CodecError> {
    build_pairwise_a_with(
        &pair_code_spec()?,
        2,
        3,
        0,
        Blocklength::Unit,
        &two_level_pair_generators()?,
    )
}

fn reversed_pair_matrix() -> Vec<Vec<u64>> {
    // columns: (1,2,9), (9,8,6), (6,10,7), (7,9,7) over GF(11)
    vec![vec![1, 9, 6, 7], vec![2, 8, 10, 9], vec![9, 6, 7, 7]]
}

fn reversed_pair_generators() -> Result<GeneratorSource, CodecError> {
    fixed(11, vec![(3, 2, 3, MdsVariant::B, reversed_pair_matrix())])
}

/// Four-encoder code over GF(11) for a single level-3 message symbol under
/// two keys:
/// `(M_3 + 2 Z_1 + 9 Z_2, 9 M_3 + 8 Z_1 + 6 Z_2, 6 M_3 + 10 Z_1 + 7 Z_2,
///   7 M_3 + 9 Z_1 + 7 Z_2)`.
pub fn reversed_pair_separate() -> Result<SmdcCode, CodecError> {
    let spec = CodeSpec::new(11, vec![0, 0, 1, 0], vec![0, 0, 2, 0])?;
    build_superposition_with(&spec, 0, Blocklength::Unit, &reversed_pair_generators()?)
}

/// The joint version of [`reversed_pair_separate`] carrying a level-4
/// message symbol in the first key slot:
/// `(M_3 + 2 M_4 + 9 Z_2, 9 M_3 + 8 M_4 + 6 Z_2, 6 M_3 + 10 M_4 + 7 Z_2,
///   7 M_3 + 9 M_4 + 7 Z_2)`.
pub fn reversed_pair_joint() -> Result<SmdcCode, CodecError> {
    let spec = CodeSpec::new(11, vec![0, 0, 1, 1], vec![0, 0, 2, 1])?;
    build_pairwise_b_with(
        &spec,
        3,
        4,
        0,
        Blocklength::Unit,
        &reversed_pair_generators()?,
    )
}

fn group_instance_generators() -> Result<GeneratorSource, CodecError> {
    fixed(
        11,
        vec![
            (1, 0, 1, MdsVariant::B, vec![vec![1, 1, 1, 1]]),
            (
                2,
                1,
                2,
                MdsVariant::B,
                vec![vec![1, 1, 1, 1], vec![1, 2, 3, 4]],
            ),
            (3, 2, 3, MdsVariant::B, reversed_pair_matrix()),
            (
                4,
                0,
                4,
                MdsVariant::B,
                vec![
                    vec![1, 0, 0, 0],
                    vec![0, 1, 0, 0],
                    vec![0, 0, 1, 0],
                    vec![0, 0, 0, 1],
                ],
            ),
        ],
    )
}

fn group_instance_spec() -> Result<CodeSpec, CodecError> {
    CodeSpec::new(11, vec![1, 1, 1, 4], vec![0, 1, 2, 0])
}

/// The four-level differential instance over GF(11) with sizes
/// `(1, 1, 1, 4)`, encoded separately: level 4 split into raw quarters and
/// fresh keys `Z_2, Z_3^1, Z_3^2` protecting levels 2 and 3. 16 symbols per
/// realization.
pub fn group_instance_separate() -> Result<SmdcCode, CodecError> {
    build_superposition_with(
        &group_instance_spec()?,
        0,
        Blocklength::Unit,
        &group_instance_generators()?,
    )
}

/// The group-pairwise version of [`group_instance_separate`]: the first
/// three level-4 symbols replace the keys, the fourth rides raw on the last
/// encoder. 13 symbols per realization, rates `(3, 3, 3, 4)`:
/// `W_l = (M_1, M_2 + l M_4^1, <level-3 column l on (M_3, M_4^2, M_4^3)>)`
/// plus `M_4^4` on encoder 4.
pub fn group_instance_joint() -> Result<SmdcCode, CodecError> {
    build_group_pairwise_with(
        &group_instance_spec()?,
        3,
        0,
        Blocklength::Unit,
        &group_instance_generators()?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn encode_all(code: &SmdcCode, messages: &[Vec<u64>], key: &[u64]) -> Vec<Vec<u64>> {
        code.encode(messages, key).unwrap().shares
    }

    #[test]
    fn threshold_triple_share_values() {
        let code = threshold_triple().unwrap();
        assert_eq!(code.rates, vec![3, 3, 3]);
        assert_eq!(code.key_len, 3); // Z_2, Z_3^1, Z_3^2
        let (m1, m2, m3) = (1u64, 2u64, 1u64);
        let (z2, z31, z32) = (1u64, 2u64, 1u64);
        let shares = encode_all(&code, &[vec![m1], vec![m2], vec![m3]], &[z2, z31, z32]);
        let p = 3;
        assert_eq!(shares[0], vec![m1, (m2 + z2) % p, (m3 + z31) % p]);
        assert_eq!(shares[1], vec![m1, (m2 + 2 * z2) % p, (m3 + z32) % p]);
        assert_eq!(shares[2], vec![m1, z2 % p, (z31 + z32) % p]);
    }

    #[test]
    fn pair_fixtures_match_published_rows() {
        let sep = pair_separate().unwrap();
        assert_eq!(sep.rates, vec![2, 2, 2]);
        let joint = pair_joint().unwrap();
        assert_eq!(joint.rates, vec![1, 2, 2]);
        assert_eq!(joint.borrowed, 1);
        assert_eq!(joint.key_len, 0);

        let (m21, m22, m31, m32) = (1u64, 1, 2, 3);
        let shares = encode_all(&joint, &[vec![], vec![m21, m22], vec![m31, m32]], &[]);
        let p = 5;
        let y21 = (m21 + m22) % p;
        assert_eq!(shares[0], vec![y21]);
        assert_eq!(
            shares[1],
            vec![(2 * m21 + m22) % p, (m31 + 2 * m32 + y21) % p]
        );
        assert_eq!(
            shares[2],
            vec![(m21 + 2 * m22) % p, (2 * m31 + m32 + y21) % p]
        );

        // the unit-message check: Y_2^1 = M_2^1 + M_2^2 = 2 over GF(5)
        let shares = encode_all(&joint, &[vec![], vec![1, 1], vec![0, 0]], &[]);
        assert_eq!(shares[0], vec![2]);

        // separate version emits Z_3 as its own symbol in share 1
        let shares = encode_all(&sep, &[vec![], vec![1, 1], vec![0, 0]], &[4]);
        assert_eq!(shares[0], vec![2, 4]);
    }

    #[test]
    fn reversed_pair_fixture_matches_published_rows() {
        let sep = reversed_pair_separate().unwrap();
        assert_eq!(sep.rates, vec![1, 1, 1, 1]);
        assert_eq!(sep.key_len, 2);
        let (m3, z1, z2) = (3u64, 5, 7);
        let shares = encode_all(&sep, &[vec![], vec![], vec![m3], vec![]], &[z1, z2]);
        let p = 11;
        assert_eq!(shares[0], vec![(m3 + 2 * z1 + 9 * z2) % p]);
        assert_eq!(shares[1], vec![(9 * m3 + 8 * z1 + 6 * z2) % p]);
        assert_eq!(shares[2], vec![(6 * m3 + 10 * z1 + 7 * z2) % p]);
        assert_eq!(shares[3], vec![(7 * m3 + 9 * z1 + 7 * z2) % p]);

        let joint = reversed_pair_joint().unwrap();
        assert_eq!(joint.rates, vec![1, 1, 1, 1]);
        assert_eq!(joint.key_len, 1); // Z_2 survives, Z_1 is replaced
        assert_eq!(joint.borrowed, 1);
        let (m3, m4, z2) = (3u64, 5, 7);
        let shares = encode_all(&joint, &[vec![], vec![], vec![m3], vec![m4]], &[z2]);
        assert_eq!(shares[0], vec![(m3 + 2 * m4 + 9 * z2) % p]);
        assert_eq!(shares[1], vec![(9 * m3 + 8 * m4 + 6 * z2) % p]);
        assert_eq!(shares[2], vec![(6 * m3 + 10 * m4 + 7 * z2) % p]);
        assert_eq!(shares[3], vec![(7 * m3 + 9 * m4 + 7 * z2) % p]);
    }

    #[test]
    fn group_instance_share_values() {
        let joint = group_instance_joint().unwrap();
        assert_eq!(joint.rates, vec![3, 3, 3, 4]);
        assert_eq!(joint.blocklength, 1);
        assert_eq!(joint.key_len, 0);
        assert_eq!(joint.borrowed, 3);
        assert_eq!(joint.total_symbols(), 13);

        let (m1, m2, m3) = (1u64, 2, 3);
        let m4 = [4u64, 5, 6, 7];
        let shares = encode_all(&joint, &[vec![m1], vec![m2], vec![m3], m4.to_vec()], &[]);
        let p = 11;
        for enc in 0..4u64 {
            let idx = enc as usize;
            assert_eq!(shares[idx][0], m1);
            assert_eq!(shares[idx][1], (m2 + (enc + 1) * m4[0]) % p);
        }
        // level-3 columns applied to (M_3, M_4^2, M_4^3)
        assert_eq!(shares[0][2], (m3 + 2 * m4[1] + 9 * m4[2]) % p);
        assert_eq!(shares[1][2], (9 * m3 + 8 * m4[1] + 6 * m4[2]) % p);
        assert_eq!(shares[2][2], (6 * m3 + 10 * m4[1] + 7 * m4[2]) % p);
        assert_eq!(shares[3][2], (7 * m3 + 9 * m4[1] + 7 * m4[2]) % p);
        // the leftover quarter rides raw on the last encoder
        assert_eq!(shares[3][3], m4[3]);

        let sep = group_instance_separate().unwrap();
        assert_eq!(sep.total_symbols(), 16);
        assert_eq!(sep.key_len, 3);
    }

    #[test]
    fn group_instance_decodes_all_prefixes() {
        let joint = group_instance_joint().unwrap();
        let messages = vec![vec![9], vec![8], vec![7], vec![1, 2, 3, 4]];
        let shares = joint.encode(&messages, &[]).unwrap().shares;
        for access in crate::mds::combinations(4, 3) {
            let access1: Vec<usize> = access.iter().map(|&i| i + 1).collect();
            let picked: Vec<Vec<u64>> = access.iter().map(|&i| shares[i].clone()).collect();
            let got = joint.decode(&access1, &picked).unwrap();
            assert_eq!(got, vec![vec![9], vec![8], vec![7]]);
        }
        let all: Vec<Vec<u64>> = shares.clone();
        assert_eq!(joint.decode(&[1, 2, 3, 4], &all).unwrap(), messages);
    }
}
