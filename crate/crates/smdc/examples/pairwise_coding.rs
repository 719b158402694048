//! The two pairwise joint strategies and when they apply.
//!
//! When a higher level is protected but the lower level's coded symbols
//! are already uniform, those coded symbols can stand in for the higher
//! level's keys (coded-key replacement). When the lower level is the
//! protected one, raw symbols of the higher level can stand in for its
//! keys (message-key replacement). Either way coded symbols are saved; the
//! optimality checker names the applicable pair and strategy.
//!
//! ```sh
//! cargo run --example pairwise_coding
//! ```

use smdc::fixtures;
use smdc::rat::rat;
use smdc::region::{check_superposition_optimal, sup_sum_rate, PairwiseCondition, Verdict};
use smdc::verify::{
    check_reconstruction, check_security, entropy_rank, Item, SystemView, DEFAULT_BUDGET,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // --- coded-key replacement -------------------------------------------
    let separate = fixtures::pair_separate()?;
    let joint = fixtures::pair_joint()?;
    println!(
        "two active levels over GF(5), sizes {:?}, protection {:?}",
        separate.spec.m, separate.spec.n
    );
    println!(
        "separate coding: {} symbols; joint coding: {} symbols (one key symbol saved)",
        separate.total_symbols(),
        joint.total_symbols()
    );
    let messages = vec![vec![], vec![1, 1], vec![2, 3]];
    let shares = joint.encode(&messages, &[])?;
    for (i, share) in shares.shares.iter().enumerate() {
        println!("  W_{} = {:?}", i + 1, share);
    }
    println!("  (the level-2 symbol in W_1 doubles as the level-3 key)");

    let view = SystemView::of(&joint);
    assert!(check_reconstruction(&view, DEFAULT_BUDGET)?.passed());
    assert!(check_security(&view, &joint.spec.n, DEFAULT_BUDGET)?.passed());
    let h = entropy_rank(&view, &[Item::MessageLevel(3)], &[]);
    for enc in 1..=3 {
        assert_eq!(
            entropy_rank(&view, &[Item::MessageLevel(3)], &[Item::Encoder(enc)]),
            h
        );
    }
    println!("oracle: reconstruction + secrecy pass; H(M_3 | any one share) = H(M_3) = {h}\n");

    // --- message-key replacement -----------------------------------------
    let separate = fixtures::reversed_pair_separate()?;
    let joint = fixtures::reversed_pair_joint()?;
    println!(
        "reversed protection over GF(11): sizes {:?}, protection {:?}",
        joint.spec.m, joint.spec.n
    );
    let shares = joint.encode(&[vec![], vec![], vec![3], vec![5]], &[7])?;
    for (i, share) in shares.shares.iter().enumerate() {
        println!("  W_{} = {:?}", i + 1, share);
    }
    println!(
        "joint: {} symbols carrying both messages; separate level-3 code alone: {} symbols",
        joint.total_symbols(),
        separate.total_symbols()
    );
    let view = SystemView::of(&joint);
    assert!(check_reconstruction(&view, DEFAULT_BUDGET)?.passed());
    assert!(check_security(&view, &joint.spec.n, DEFAULT_BUDGET)?.passed());
    println!("oracle: the borrowed level-4 symbol stays hidden from any single encoder\n");

    // --- the checker names the opportunity --------------------------------
    for n in [
        vec![0usize, 0, 1],
        vec![0, 1, 0],
        vec![0, 1, 2],
        vec![0, 0, 0],
    ] {
        let m = vec![rat(1); 3];
        let w = check_superposition_optimal(&m, &n);
        let bound = sup_sum_rate(&m, &n);
        match w.verdict {
            Verdict::Optimal => {
                println!("N = {n:?}: separate coding already sum-rate optimal (bound {bound})")
            }
            Verdict::Suboptimal => {
                let (a, b) = w.pair.unwrap();
                let strategy = match w.condition.unwrap() {
                    PairwiseCondition::A => "coded-key replacement",
                    PairwiseCondition::B => "message-key replacement",
                };
                println!("N = {n:?}: pair ({a}, {b}) admits {strategy}, beating {bound}");
            }
        }
    }
    Ok(())
}
