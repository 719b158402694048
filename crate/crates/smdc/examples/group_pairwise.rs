//! Group-pairwise coding for a differential security profile: the
//! unprotected levels donate their symbols as the protected levels' keys
//! up to the donor cutoff, and whatever remains is layered plainly. The
//! published four-level instance achieves 13 coded symbols per 7 message
//! symbols — the exact optimum of its rate region.
//!
//! ```sh
//! cargo run --example group_pairwise
//! ```

use smdc::codec::{build_group_pairwise, CodeSpec};
use smdc::fixtures;
use smdc::rat::format_rational;
use smdc::region::{compute_eta_star, ds_sum_rate, gp_region_contains};
use smdc::verify::{check_reconstruction, check_security, SystemView, DEFAULT_BUDGET};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let code = fixtures::group_instance_joint()?;
    let spec = &code.spec;
    println!(
        "four levels over GF(11), sizes {:?}, differential protection {:?} (r = 3)",
        spec.m, spec.n
    );
    let (eta, aux) = compute_eta_star(4, 3, &spec.m);
    println!("key demand 0+1+2 = 3 symbols; donor cutoff {eta}, auxiliary key size {aux}");

    let messages = vec![vec![1], vec![2], vec![3], vec![4, 5, 6, 7]];
    let shares = code.encode(&messages, &[])?;
    for (i, share) in shares.shares.iter().enumerate() {
        println!("  W_{} = {:?}", i + 1, share);
    }
    println!("  (three donated level-4 symbols serve as keys; the fourth rides raw)");
    println!(
        "rates {:?}: {} coded symbols per {} message symbols",
        code.rates,
        code.total_symbols(),
        spec.total_message()
    );

    // any three encoders recover the first three levels and, implicitly,
    // the donated symbols
    let got = code.decode(
        &[1, 2, 4],
        &[
            shares.shares[0].clone(),
            shares.shares[1].clone(),
            shares.shares[3].clone(),
        ],
    )?;
    println!(
        "decoders 1,2,4 recover M_1..M_3 = {:?} {:?} {:?}",
        got[0], got[1], got[2]
    );

    // full verification over 11^7 realizations (a few seconds)
    println!("running the exhaustive oracle over 11^7 = 19487171 states...");
    let view = SystemView::of(&code);
    let rec = check_reconstruction(&view, DEFAULT_BUDGET)?;
    let sec = check_security(&view, &spec.n, DEFAULT_BUDGET)?;
    println!(
        "  reconstruction {} (15 access sets), security {} ({} eavesdrop sets)",
        if rec.passed() { "pass" } else { "FAIL" },
        if sec.passed() { "pass" } else { "FAIL" },
        sec.results.len()
    );

    // the achieved sum rate meets the exact region optimum
    let m_hat = spec.normalized_sizes();
    let optimum = ds_sum_rate(4, 3, &m_hat);
    let achieved = code.rate_tuple();
    println!(
        "normalized rates [{}] sum to {} = region optimum {}",
        achieved
            .values
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(", "),
        format_rational(&achieved.sum()),
        format_rational(&optimum)
    );
    assert!(gp_region_contains(&achieved.values, 3, &m_hat));
    assert_eq!(achieved.sum(), optimum);

    // degenerate corners of the same machinery
    let all_protected = CodeSpec::new(7, vec![1, 1], vec![0, 1])?;
    let code = build_group_pairwise(&all_protected, 2, 1)?;
    println!(
        "\nr = L degenerates to per-level threshold coding: rates {:?}, auxiliary key {}",
        code.rates, code.key_len
    );
    let classical = CodeSpec::new(11, vec![1, 2, 3], vec![0, 0, 0])?;
    let code = build_group_pairwise(&classical, 1, 1)?;
    println!(
        "r = 1 degenerates to plain layered coding: rates {:?}, no keys ({})",
        code.rates, code.key_len
    );
    Ok(())
}
