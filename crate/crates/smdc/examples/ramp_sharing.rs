//! Ramp secret sharing: any c or fewer shares reveal nothing, any k shares
//! recover the message, and the per-share rates sit exactly on the scheme's
//! optimal region boundary.
//!
//! ```sh
//! cargo run --example ramp_sharing
//! ```

use smdc::mds::{combinations, MdsParams};
use smdc::ramp::{ramp_region_check, RampScheme};
use smdc::rat::{rat, ratio};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // two-symbol message, one key, any 3 of 4 shares reconstruct
    let params = MdsParams::new(1, 3, 4, 11)?;
    let scheme = RampScheme::new(params, 7)?;
    let message = [3u64, 8];
    let keys = [5u64];
    let shares = scheme.share(&message, &keys)?;
    println!("(c, k, n) = (1, 3, 4) over GF(11)");
    println!("message {message:?} -> shares {shares:?}");

    for positions in combinations(4, 3) {
        let picked: Vec<u64> = positions.iter().map(|&i| shares[i]).collect();
        assert_eq!(scheme.reconstruct(&positions, &picked)?, message);
    }
    println!("reconstructed from every 3-subset of shares");

    // brute-force secrecy audit: one share never narrows the message
    let mut compatible = std::collections::BTreeSet::new();
    for m1 in 0..11u64 {
        for m2 in 0..11u64 {
            for z in 0..11u64 {
                let s = scheme.share(&[m1, m2], &[z])?;
                if s[0] == shares[0] {
                    compatible.insert((m1, m2));
                }
            }
        }
    }
    println!(
        "messages compatible with share 1 alone: {} of 121 (all of them)",
        compatible.len()
    );
    assert_eq!(compatible.len(), 121);

    // the constructed per-share rates sit on the region boundary
    let h = rat(2); // two uniform symbols
    let rates = vec![rat(1); 4];
    assert!(ramp_region_check(&rates, &h, &params));
    let mut below = rates.clone();
    below[0] = ratio(9, 10);
    assert!(!ramp_region_check(&below, &h, &params));
    println!("uniform one-symbol shares are admissible; any smaller rate is not");

    // threshold special case: k = c + 1 forces every single rate >= H(M)
    let threshold = MdsParams::new(2, 3, 4, 11)?;
    assert!(ramp_region_check(&vec![rat(1); 4], &rat(1), &threshold));
    assert!(!ramp_region_check(
        &[rat(1), rat(1), ratio(1, 2), rat(1)],
        &rat(1),
        &threshold
    ));
    println!("threshold case: every single share must carry the whole message entropy");
    Ok(())
}
