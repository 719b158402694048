//! Exact rate-region computations: resolution values against their
//! defining linear program, supporting hyperplanes and the donor cutoff,
//! membership tests, and constructed boundary points — all in exact
//! rational arithmetic.
//!
//! ```sh
//! cargo run --example rate_regions
//! ```

use num_rational::BigRational;
use smdc::rat::{format_rational, rat, ratio};
use smdc::region::{
    ds_sum_rate, eta_star_rational, f_alpha, f_alpha_lp, g_eta, gp_region_contains,
    pseudo_message_sizes, star_lambda_samples, star_region_contains, sup_region_contains,
    sup_sum_rate, supporting_rate_tuple,
};

fn show(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

fn main() {
    // resolution values: closed form vs the exact LP
    let ones = vec![rat(1); 4];
    let (lp_value, resolution) = f_alpha_lp(3, &ones);
    println!(
        "f_3(1,1,1,1) = {} (closed form {})",
        lp_value,
        f_alpha(3, &ones)
    );
    println!("optimal 3-resolution:");
    for (v, c) in &resolution.entries {
        println!("  weight {} on {:?}", format_rational(c), v);
    }

    let lambda = vec![rat(2), rat(1), rat(1)];
    println!(
        "\nf_2(2,1,1) = {} (tail averages: min(4/2, 2/1))",
        format_rational(&f_alpha(2, &lambda))
    );

    // the differential instance: donor cutoff, pseudo-sizes, sum rate
    let m_hat = vec![ratio(1, 7), ratio(1, 7), ratio(1, 7), ratio(4, 7)];
    let (eta, aux) = eta_star_rational(3, &m_hat);
    println!("\nfour-level differential instance, sizes {}", show(&m_hat));
    println!(
        "donor cutoff {eta}, auxiliary mass {}",
        format_rational(&aux)
    );
    println!("pseudo-sizes {}", show(&pseudo_message_sizes(3, &m_hat)));
    println!(
        "exact minimum sum rate {}",
        format_rational(&ds_sum_rate(4, 3, &m_hat))
    );

    // supporting hyperplane values in a few directions
    for lambda in [
        vec![rat(1), rat(0), rat(0), rat(0)],
        vec![rat(1), rat(1), rat(1), rat(1)],
        vec![rat(2), rat(1), rat(1), rat(0)],
    ] {
        println!(
            "g at cutoff for direction {} = {}",
            show(&lambda),
            format_rational(&g_eta(eta, &lambda, &m_hat, 3))
        );
    }

    // boundary points constructed per direction, then membership-tested
    let ones = vec![rat(1); 4];
    let tuple = supporting_rate_tuple(&ones, 3, &m_hat);
    println!(
        "\nsupporting tuple for the all-ones direction: {} (sum {})",
        show(&tuple.values),
        format_rational(&tuple.sum())
    );
    assert!(gp_region_contains(&tuple.values, 3, &m_hat));
    let lambdas = star_lambda_samples(4, 16, 1);
    assert!(star_region_contains(&tuple.values, 3, &m_hat, &lambdas));
    println!("it lies in the exact region and respects all sampled hyperplanes");

    let shrunk: Vec<BigRational> = tuple.values.iter().map(|v| v * ratio(9, 10)).collect();
    println!(
        "shrunk by 10%: exact membership {}, sampled hyperplanes {}",
        gp_region_contains(&shrunk, 3, &m_hat),
        star_region_contains(&shrunk, 3, &m_hat, &lambdas)
    );

    // separate-coding region of a fully protected triple
    let m_hat = vec![ratio(1, 3); 3];
    let n = [0usize, 1, 2];
    println!(
        "\nfully protected triple: separate-coding sum rate {}",
        format_rational(&sup_sum_rate(&m_hat, &n))
    );
    let vertex = vec![rat(1); 3];
    println!(
        "uniform unit rates inside the separate-coding region: {}",
        sup_region_contains(&vertex, &m_hat, &n)
    );
}
