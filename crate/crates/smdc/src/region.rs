//! Exact rate-region computation: weight-resolution values `f_alpha`,
//! supporting-hyperplane values `g_eta`, the donor cutoff `eta*`, the
//! superposition optimality test, and membership tests for the
//! superposition and group-pairwise regions. Everything here is exact
//! rational arithmetic; none of these functions touch floating point.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand_core::{RngCore, SeedableRng};

use crate::mds::combinations;
use crate::rat::{rat, rat_u64};
use crate::simplex::{feasible, solve_lp, Cmp, Constraint, LpResult};

/// Per-encoder rates, either normalized (per source symbol) or as raw
/// symbol counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateTuple {
    pub values: Vec<BigRational>,
    pub normalized: bool,
}

impl RateTuple {
    pub fn normalized(values: Vec<BigRational>) -> Self {
        RateTuple {
            values,
            normalized: true,
        }
    }

    /// Normalize raw per-encoder symbol counts by `blocklength * total
    /// message symbols`.
    pub fn from_symbol_counts(counts: &[usize], blocklength: u64, total_message: u64) -> Self {
        let denom = rat_u64(blocklength) * rat_u64(total_message);
        RateTuple {
            values: counts
                .iter()
                .map(|&c| rat_u64(c as u64) / denom.clone())
                .collect(),
            normalized: true,
        }
    }

    pub fn sum(&self) -> BigRational {
        self.values.iter().cloned().sum()
    }
}

/// A feasible weight assignment on the 0/1 vectors of Hamming weight
/// `alpha`, dominated componentwise by the direction it was solved for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub alpha: usize,
    pub entries: Vec<(Vec<u8>, BigRational)>,
}

impl Resolution {
    pub fn total_weight(&self) -> BigRational {
        self.entries.iter().map(|(_, c)| c.clone()).sum()
    }

    /// Exact feasibility: all weights nonnegative on weight-`alpha` vectors,
    /// and the weighted vector sum dominated by `lambda`.
    pub fn is_feasible_for(&self, lambda: &[BigRational]) -> bool {
        let l = lambda.len();
        let mut load = vec![BigRational::zero(); l];
        for (v, c) in &self.entries {
            if v.len() != l
                || c.is_negative()
                || v.iter().map(|&b| b as usize).sum::<usize>() != self.alpha
            {
                return false;
            }
            for (i, &b) in v.iter().enumerate() {
                if b == 1 {
                    load[i] += c;
                }
            }
        }
        load.iter().zip(lambda).all(|(used, cap)| used <= cap)
    }
}

fn sorted_desc(lambda: &[BigRational]) -> Vec<BigRational> {
    let mut s = lambda.to_vec();
    s.sort_by(|a, b| b.cmp(a));
    s
}

fn assert_direction(lambda: &[BigRational]) {
    assert!(!lambda.is_empty(), "empty direction vector");
    assert!(
        lambda.iter().all(|v| !v.is_negative()),
        "direction must be nonnegative"
    );
    assert!(
        lambda.iter().any(|v| !v.is_zero()),
        "direction must be nonzero"
    );
}

/// Closed-form value of the optimal `alpha`-resolution for `lambda`:
/// the minimum over `beta < alpha` of the tail mass below `beta` averaged
/// over `alpha - beta` slots. Insensitive to the ordering of `lambda`.
pub fn f_alpha(alpha: usize, lambda: &[BigRational]) -> BigRational {
    f_alpha_argmin(alpha, lambda).0
}

/// Same as [`f_alpha`] but also reports the minimizing `beta` (ties broken
/// toward the smallest).
pub fn f_alpha_argmin(alpha: usize, lambda: &[BigRational]) -> (BigRational, usize) {
    assert_direction(lambda);
    let l = lambda.len();
    assert!(alpha >= 1 && alpha <= l, "need 1 <= alpha <= {l}");
    let sorted = sorted_desc(lambda);
    let mut best: Option<(BigRational, usize)> = None;
    let mut tail: BigRational = sorted.iter().cloned().sum();
    for beta in 0..alpha {
        if beta > 0 {
            tail -= sorted[beta - 1].clone();
        }
        let value = tail.clone() / rat((alpha - beta) as i64);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, beta));
        }
    }
    best.expect("alpha >= 1")
}

/// The same value obtained by solving the defining linear program exactly,
/// together with an optimal resolution. This is the independent cross-check
/// for [`f_alpha`].
pub fn f_alpha_lp(alpha: usize, lambda: &[BigRational]) -> (BigRational, Resolution) {
    assert_direction(lambda);
    let l = lambda.len();
    assert!(alpha >= 1 && alpha <= l);
    let supports = combinations(l, alpha);
    let nvars = supports.len();
    let objective = vec![rat(1); nvars];
    let mut constraints = Vec::with_capacity(l);
    for (i, cap) in lambda.iter().enumerate() {
        let coeffs: Vec<BigRational> = supports
            .iter()
            .map(|s| if s.contains(&i) { rat(1) } else { rat(0) })
            .collect();
        constraints.push(Constraint::new(coeffs, Cmp::Le, cap.clone()));
    }
    match solve_lp(nvars, &objective, &constraints) {
        LpResult::Optimal { value, solution } => {
            let entries = supports
                .iter()
                .zip(solution)
                .filter(|(_, c)| !c.is_zero())
                .map(|(s, c)| {
                    let mut v = vec![0u8; l];
                    for &i in s {
                        v[i] = 1;
                    }
                    (v, c)
                })
                .collect();
            (value, Resolution { alpha, entries })
        }
        other => unreachable!("resolution LP is feasible and bounded: {other:?}"),
    }
}

/// Donor cutoff for the group-pairwise scheme: the smallest level whose
/// cumulative donor mass covers the total key demand of the protected
/// levels, together with the auxiliary key mass needed when the donors run
/// out. Returned cutoff lies in `r+1 ..= L+1`.
pub fn eta_star_rational(r: usize, m: &[BigRational]) -> (usize, BigRational) {
    let l = m.len();
    assert!(r >= 1 && r <= l, "need 1 <= r <= L");
    assert!(m.iter().all(|v| !v.is_negative()));
    let demand: BigRational = (1..=r).map(|a| rat((a - 1) as i64) * &m[a - 1]).sum();
    let donors: BigRational = (r + 1..=l).map(|a| m[a - 1].clone()).sum();
    let aux = if demand > donors {
        demand.clone() - donors
    } else {
        BigRational::zero()
    };
    let mut cumulative = BigRational::zero();
    for eta in r + 1..=l {
        cumulative += &m[eta - 1];
        if cumulative >= demand {
            return (eta, aux);
        }
    }
    (l + 1, aux)
}

/// Integer-size version of [`eta_star_rational`].
pub fn compute_eta_star(l: usize, r: usize, m: &[u64]) -> (usize, u64) {
    assert_eq!(m.len(), l);
    let rational: Vec<BigRational> = m.iter().map(|&v| rat_u64(v)).collect();
    let (eta, aux) = eta_star_rational(r, &rational);
    let aux_int = aux.to_integer();
    (
        eta,
        u64::try_from(aux_int).expect("auxiliary size fits u64"),
    )
}

/// Pseudo-message sizes induced by donating levels `r+1 .. eta*` as keys:
/// zero for fully donated levels, the leftover at the cutoff level, and the
/// original size above it. Entries at levels `<= r` are returned unchanged.
pub fn pseudo_message_sizes(r: usize, m_hat: &[BigRational]) -> Vec<BigRational> {
    let l = m_hat.len();
    let (eta, _) = eta_star_rational(r, m_hat);
    let demand: BigRational = (1..=r).map(|a| rat((a - 1) as i64) * &m_hat[a - 1]).sum();
    let mut out = m_hat.to_vec();
    for alpha in r + 1..=l {
        if alpha < eta {
            out[alpha - 1] = BigRational::zero();
        } else if alpha == eta {
            let absorbed: BigRational = (r + 1..=eta).map(|j| m_hat[j - 1].clone()).sum();
            out[alpha - 1] = absorbed - demand.clone();
        }
    }
    out
}

/// Supporting-hyperplane value in direction `lambda` when levels
/// `r+1 .. eta` act as the key donors. `eta = L+1` contributes nothing for
/// the donated block (its coefficient is zero).
pub fn g_eta(eta: usize, lambda: &[BigRational], m_hat: &[BigRational], r: usize) -> BigRational {
    let l = m_hat.len();
    assert!(r >= 1 && r <= l);
    assert!(eta > r && eta <= l + 1, "need r+1 <= eta <= L+1");
    assert_eq!(lambda.len(), l);
    let f = |alpha: usize| -> BigRational {
        if alpha > l {
            BigRational::zero()
        } else {
            f_alpha(alpha, lambda)
        }
    };
    let f1 = f_alpha(1, lambda);
    let protected: BigRational = (1..=r).map(|a| &f1 * &m_hat[a - 1]).sum();
    let above: BigRational = (eta + 1..=l).map(|a| f(a) * &m_hat[a - 1]).sum();
    let demand: BigRational = (1..=r).map(|a| rat((a - 1) as i64) * &m_hat[a - 1]).sum();
    let absorbed: BigRational = (r + 1..=eta.min(l)).map(|a| m_hat[a - 1].clone()).sum();
    protected + above + f(eta) * (absorbed - demand)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Optimal,
    Suboptimal,
}

/// Which joint coding strategy a witnessing pair admits.
/// `A`: the more important level's coded symbols can key the less important
/// one (`N_a < N_b < a`). `B`: the less important level's message symbols
/// can key the more important one (`N_b <= N_a`, `N_a > 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairwiseCondition {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalityWitness {
    pub verdict: Verdict,
    /// 1-based `(alpha, beta)` pair witnessing suboptimality.
    pub pair: Option<(usize, usize)>,
    pub condition: Option<PairwiseCondition>,
    /// Largest unprotected prefix when the profile is optimal and every
    /// message is nonzero.
    pub threshold: Option<usize>,
}

/// Decide whether separate per-level encoding already achieves the minimum
/// sum rate for this security profile, and if not, name a pair of levels
/// and the joint strategy that beats it.
pub fn check_superposition_optimal(m: &[BigRational], n_profile: &[usize]) -> OptimalityWitness {
    let l = m.len();
    assert_eq!(n_profile.len(), l);
    for (idx, &n) in n_profile.iter().enumerate() {
        assert!(n < idx + 1, "need N_alpha < alpha");
    }
    for alpha in 1..=l {
        for beta in alpha + 1..=l {
            if m[alpha - 1].is_zero() || m[beta - 1].is_zero() {
                continue;
            }
            let (na, nb) = (n_profile[alpha - 1], n_profile[beta - 1]);
            let fine = (na < alpha && alpha <= nb && nb < beta) || (na == 0 && nb == 0);
            if fine {
                continue;
            }
            let condition = if na < nb && nb < alpha {
                PairwiseCondition::A
            } else {
                debug_assert!(nb <= na && na > 0);
                PairwiseCondition::B
            };
            return OptimalityWitness {
                verdict: Verdict::Suboptimal,
                pair: Some((alpha, beta)),
                condition: Some(condition),
                threshold: None,
            };
        }
    }
    // threshold shape: unprotected prefix, then maximally protected tail
    let threshold = if m.iter().all(|v| v.is_positive()) {
        let t = (1..=l)
            .filter(|&a| n_profile[a - 1] == 0)
            .max()
            .unwrap_or(l);
        let shaped = (1..=l).all(|a| {
            if a <= t {
                n_profile[a - 1] == 0
            } else {
                n_profile[a - 1] == a - 1
            }
        });
        shaped.then_some(t)
    } else {
        None
    };
    OptimalityWitness {
        verdict: Verdict::Optimal,
        pair: None,
        condition: None,
        threshold,
    }
}

/// Sum rate of the per-level superposition scheme.
pub fn sup_sum_rate(m_hat: &[BigRational], n_profile: &[usize]) -> BigRational {
    let l = m_hat.len();
    assert_eq!(n_profile.len(), l);
    (1..=l)
        .map(|a| rat(l as i64) * &m_hat[a - 1] / rat((a - n_profile[a - 1]) as i64))
        .sum()
}

/// Exact membership in the superposition rate region: does some
/// per-level split of `rates` satisfy every subset bound?
pub fn sup_region_contains(
    rates: &[BigRational],
    m_hat: &[BigRational],
    n_profile: &[usize],
) -> bool {
    let l = m_hat.len();
    assert_eq!(rates.len(), l);
    assert_eq!(n_profile.len(), l);
    if rates.iter().any(|r| r.is_negative()) {
        return false;
    }
    let active: Vec<usize> = (1..=l).filter(|&a| m_hat[a - 1].is_positive()).collect();
    if active.is_empty() {
        return rates.iter().all(|r| r.is_zero());
    }
    let group_bounds: Vec<(usize, usize, BigRational)> = active
        .iter()
        .map(|&a| (a, a - n_profile[a - 1], m_hat[a - 1].clone()))
        .collect();
    split_feasible(rates, &group_bounds, &[])
}

/// Exact membership in the group-pairwise region for the differential
/// profile with `r` protected levels.
pub fn gp_region_contains(rates: &[BigRational], r: usize, m_hat: &[BigRational]) -> bool {
    let l = m_hat.len();
    assert_eq!(rates.len(), l);
    if rates.iter().any(|v| v.is_negative()) {
        return false;
    }
    let pseudo = pseudo_message_sizes(r, m_hat);
    // protected levels: every encoder individually carries the message size
    let mut single_bounds = Vec::new();
    let mut group_bounds = Vec::new();
    for alpha in 1..=l {
        if alpha <= r {
            if m_hat[alpha - 1].is_positive() {
                single_bounds.push((alpha, m_hat[alpha - 1].clone()));
            }
        } else if pseudo[alpha - 1].is_positive() {
            group_bounds.push((alpha, alpha, pseudo[alpha - 1].clone()));
        }
    }
    if single_bounds.is_empty() && group_bounds.is_empty() {
        return true; // nothing to carry
    }
    split_feasible(rates, &group_bounds, &single_bounds)
}

/// Shared feasibility core: can `rates` be split into per-level sub-rates
/// `r_l^alpha >= 0` such that each listed level meets its subset-sum bound
/// (`sum over any B, |B| = size, >= need`) or its per-encoder bound?
fn split_feasible(
    rates: &[BigRational],
    group_bounds: &[(usize, usize, BigRational)], // (level, subset size, need)
    single_bounds: &[(usize, BigRational)],       // (level, per-encoder need)
) -> bool {
    let l = rates.len();
    let levels: Vec<usize> = group_bounds
        .iter()
        .map(|&(a, _, _)| a)
        .chain(single_bounds.iter().map(|&(a, _)| a))
        .collect();
    let nlevels = levels.len();
    let var = |li: usize, enc: usize| li * l + enc;
    let nvars = nlevels * l;
    let mut constraints = Vec::new();
    // coupling: the sub-rates at each encoder sum to the encoder's rate
    for enc in 0..l {
        let mut coeffs = vec![BigRational::zero(); nvars];
        for li in 0..nlevels {
            coeffs[var(li, enc)] = rat(1);
        }
        constraints.push(Constraint::new(coeffs, Cmp::Le, rates[enc].clone()));
    }
    let level_index = |a: usize| levels.iter().position(|&x| x == a).expect("listed level");
    for (a, size, need) in group_bounds {
        let li = level_index(*a);
        for subset in combinations(l, *size) {
            let mut coeffs = vec![BigRational::zero(); nvars];
            for &enc in &subset {
                coeffs[var(li, enc)] = rat(1);
            }
            constraints.push(Constraint::new(coeffs, Cmp::Ge, need.clone()));
        }
    }
    for (a, need) in single_bounds {
        let li = level_index(*a);
        for enc in 0..l {
            let mut coeffs = vec![BigRational::zero(); nvars];
            coeffs[var(li, enc)] = rat(1);
            constraints.push(Constraint::new(coeffs, Cmp::Ge, need.clone()));
        }
    }
    feasible(nvars, &constraints)
}

/// Necessary membership test against the supporting hyperplanes: checks
/// `lambda . R >= g_{eta*}(lambda)` for every supplied direction. A tuple
/// failing here is certainly outside; a tuple passing may still be outside
/// (the authoritative test is [`gp_region_contains`]).
pub fn star_region_contains(
    rates: &[BigRational],
    r: usize,
    m_hat: &[BigRational],
    lambdas: &[Vec<BigRational>],
) -> bool {
    let (eta, _) = eta_star_rational(r, m_hat);
    for lambda in lambdas {
        if lambda.iter().all(|v| v.is_zero()) {
            continue;
        }
        let dot: BigRational = lambda.iter().zip(rates).map(|(a, b)| a * b).sum();
        if dot < g_eta(eta, lambda, m_hat, r) {
            return false;
        }
    }
    true
}

/// Standard direction sample: all unit vectors, the all-ones vector, every
/// nonzero 0/1 vector, and `extra` seeded random rational directions.
pub fn star_lambda_samples(l: usize, extra: usize, seed: u64) -> Vec<Vec<BigRational>> {
    let mut out = Vec::new();
    for mask in 1u64..(1 << l) {
        out.push(
            (0..l)
                .map(|i| if mask >> i & 1 == 1 { rat(1) } else { rat(0) })
                .collect(),
        );
    }
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    while out.len() < (1usize << l) - 1 + extra {
        let v: Vec<BigRational> = (0..l)
            .map(|_| {
                let numer = (rng.next_u64() % 13) as i64;
                let denom = (rng.next_u64() % 4 + 1) as i64;
                crate::rat::ratio(numer, denom)
            })
            .collect();
        if v.iter().any(|x| !x.is_zero()) {
            out.push(v);
        }
    }
    out
}

/// Build a rate tuple inside the group-pairwise region whose cost in
/// direction `lambda` meets the supporting hyperplane with equality.
///
/// Protected levels replicate their message size on every encoder. Each
/// remaining level with positive pseudo-size spreads it evenly over the
/// encoders outside the strict-surplus prefix of an optimal resolution,
/// which for the closed form is exactly the set of coordinates exceeding
/// the level's resolution value.
pub fn supporting_rate_tuple(lambda: &[BigRational], r: usize, m_hat: &[BigRational]) -> RateTuple {
    assert_direction(lambda);
    let l = m_hat.len();
    assert_eq!(lambda.len(), l);
    // sort descending, remembering original positions (stable on ties)
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&i, &j| lambda[j].cmp(&lambda[i]).then(i.cmp(&j)));
    let sorted: Vec<BigRational> = order.iter().map(|&i| lambda[i].clone()).collect();

    let pseudo = pseudo_message_sizes(r, m_hat);
    let (eta, _) = eta_star_rational(r, m_hat);
    let mut by_rank = vec![BigRational::zero(); l];
    for alpha in 1..=r {
        for v in by_rank.iter_mut() {
            *v += &m_hat[alpha - 1];
        }
    }
    for alpha in eta.max(r + 1)..=l {
        if pseudo[alpha - 1].is_zero() {
            continue;
        }
        let value = f_alpha(alpha, &sorted);
        let surplus_prefix = sorted.iter().filter(|v| **v > value).count();
        debug_assert!(surplus_prefix < alpha);
        let share = pseudo[alpha - 1].clone() / rat((alpha - surplus_prefix) as i64);
        for slot in by_rank[surplus_prefix..].iter_mut() {
            *slot += &share;
        }
    }
    let mut values = vec![BigRational::zero(); l];
    for (rank, &orig) in order.iter().enumerate() {
        values[orig] = by_rank[rank].clone();
    }
    RateTuple::normalized(values)
}

/// Minimum sum rate of the group-pairwise region: the supporting value in
/// the all-ones direction.
pub fn ds_sum_rate(l: usize, r: usize, m_hat: &[BigRational]) -> BigRational {
    assert_eq!(m_hat.len(), l);
    let ones = vec![rat(1); l];
    let (eta, _) = eta_star_rational(r, m_hat);
    g_eta(eta, &ones, m_hat, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;
    use proptest::prelude::*;

    fn rv(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn f_alpha_anchors() {
        assert_eq!(f_alpha(3, &rv(&[1, 1, 1, 1])), ratio(4, 3));
        // f_1 is the plain coordinate sum
        assert_eq!(f_alpha(1, &rv(&[2, 5, 1])), rat(8));
        // a weight-2 vector always hits a zero coordinate here
        assert_eq!(f_alpha(2, &rv(&[1, 0, 0])), rat(0));
        assert_eq!(f_alpha(2, &rv(&[2, 1, 1])), rat(2));
        // permutation invariance
        assert_eq!(f_alpha(2, &rv(&[1, 2, 1])), f_alpha(2, &rv(&[1, 1, 2])));
    }

    #[test]
    fn f_alpha_tie_breaks_to_smallest_beta() {
        // (3,2,1): both beta = 0 and beta = 1 give value 3 for alpha = 2
        let (value, beta) = f_alpha_argmin(2, &rv(&[3, 2, 1]));
        assert_eq!(value, rat(3));
        assert_eq!(beta, 0);
    }

    #[test]
    fn f_alpha_lp_unique_optimum() {
        let (value, res) = f_alpha_lp(3, &rv(&[1, 1, 1, 1]));
        assert_eq!(value, ratio(4, 3));
        assert!(res.is_feasible_for(&rv(&[1, 1, 1, 1])));
        assert_eq!(res.total_weight(), ratio(4, 3));
        // the optimum is unique: every weight-3 vector at 1/3
        assert_eq!(res.entries.len(), 4);
        assert!(res.entries.iter().all(|(_, c)| *c == ratio(1, 3)));

        let (value, res) = f_alpha_lp(1, &rv(&[2, 5, 1]));
        assert_eq!(value, rat(8));
        assert!(res.is_feasible_for(&rv(&[2, 5, 1])));

        let (value, _) = f_alpha_lp(2, &rv(&[2, 1, 1]));
        assert_eq!(value, rat(2));
    }

    #[test]
    fn eta_star_examples() {
        // donors cover a demand of 3 at the last level
        assert_eq!(compute_eta_star(4, 3, &[1, 1, 1, 4]), (4, 0));
        // zero demand resolves to the first donor level
        assert_eq!(compute_eta_star(4, 1, &[5, 1, 1, 1]), (2, 0));
        // r = L leaves only the auxiliary slot
        assert_eq!(compute_eta_star(2, 2, &[1, 0]), (3, 0));
        assert_eq!(compute_eta_star(2, 2, &[1, 3]), (3, 3));
        // donors insufficient: auxiliary key carries the whole demand
        assert_eq!(compute_eta_star(3, 3, &[1, 1, 1]), (4, 3));
    }

    #[test]
    fn pseudo_sizes_examples() {
        let m = vec![ratio(1, 7), ratio(1, 7), ratio(1, 7), ratio(4, 7)];
        let pseudo = pseudo_message_sizes(3, &m);
        assert_eq!(pseudo[3], ratio(1, 7));
        // r = 1: zero demand, sizes unchanged above level 1
        let m = vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)];
        let pseudo = pseudo_message_sizes(1, &m);
        assert_eq!(&pseudo[1..], &m[1..]);
        // demand exactly exhausting the cutoff level leaves zero there
        let m = vec![rat(1), rat(1), rat(1)]; // r=2: demand 1, donor m_3 = 1
        let pseudo = pseudo_message_sizes(2, &m);
        assert_eq!(pseudo[2], rat(0));
    }

    #[test]
    fn g_eta_examples() {
        let m_hat = vec![ratio(1, 7), ratio(1, 7), ratio(1, 7), ratio(4, 7)];
        let ones = rv(&[1, 1, 1, 1]);
        assert_eq!(g_eta(4, &ones, &m_hat, 3), ratio(13, 7));
        assert_eq!(ds_sum_rate(4, 3, &m_hat), ratio(13, 7));
        // r = 1 reduces to the plain layered bound
        let m_hat = vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)];
        let ones = rv(&[1, 1, 1]);
        let classical: BigRational = (1..=3).map(|a| f_alpha(a, &ones) * &m_hat[a - 1]).sum();
        let (eta, _) = eta_star_rational(1, &m_hat);
        assert_eq!(g_eta(eta, &ones, &m_hat, 1), classical);
        // eta = L+1 drops the donated block entirely
        let m_hat = vec![ratio(1, 2), ratio(1, 2)];
        let ones = rv(&[1, 1]);
        assert_eq!(g_eta(3, &ones, &m_hat, 2), rat(2));
    }

    #[test]
    fn optimality_checker_examples() {
        let m = rv(&[1, 1, 1]);
        // fully protected profile
        let w = check_superposition_optimal(&m, &[0, 1, 2]);
        assert_eq!(w.verdict, Verdict::Optimal);
        assert_eq!(w.threshold, Some(1));
        // no protection at all
        let w = check_superposition_optimal(&m, &[0, 0, 0]);
        assert_eq!(w.verdict, Verdict::Optimal);
        assert_eq!(w.threshold, Some(3));
        // a lightly protected top level invites coded-key replacement
        let w = check_superposition_optimal(&m, &[0, 0, 1]);
        assert_eq!(w.verdict, Verdict::Suboptimal);
        assert_eq!(w.pair, Some((2, 3)));
        assert_eq!(w.condition, Some(PairwiseCondition::A));
        // reversed protection invites message-key replacement
        let w = check_superposition_optimal(&m, &[0, 1, 0]);
        assert_eq!(w.verdict, Verdict::Suboptimal);
        assert_eq!(w.pair, Some((2, 3)));
        assert_eq!(w.condition, Some(PairwiseCondition::B));
        // degenerate middle level hides the violation
        let w = check_superposition_optimal(&rv(&[1, 0, 1]), &[0, 1, 0]);
        assert_eq!(w.verdict, Verdict::Optimal);
        assert_eq!(w.threshold, None);
    }

    #[test]
    fn sup_sum_rate_examples() {
        let third = ratio(1, 3);
        let m_hat = vec![third.clone(), third.clone(), third];
        assert_eq!(sup_sum_rate(&m_hat, &[0, 1, 2]), rat(3));
        // unprotected: the classical layered sum rate
        let expect = rat(3) * (ratio(1, 3) + ratio(1, 6) + ratio(1, 9));
        assert_eq!(sup_sum_rate(&m_hat, &[0, 0, 0]), expect);
        let m_hat = vec![rat(0), rat(0), rat(1)];
        assert_eq!(sup_sum_rate(&m_hat, &[0, 0, 1]), ratio(3, 2));
    }

    #[test]
    fn sup_region_membership() {
        let third = ratio(1, 3);
        let m_hat = vec![third.clone(), third.clone(), third];
        let n = [0usize, 1, 2];
        // the uniform superposition vertex
        let vertex: Vec<BigRational> = (1..=3)
            .map(|_| {
                (1..=3)
                    .map(|a| m_hat[a - 1].clone() / rat((a - n[a - 1]) as i64))
                    .sum()
            })
            .collect();
        assert!(sup_region_contains(&vertex, &m_hat, &n));
        assert!(!sup_region_contains(&rv(&[0, 0, 0]), &m_hat, &n));
        assert!(sup_region_contains(&rv(&[1, 1, 1]), &m_hat, &n));
    }

    #[test]
    fn gp_region_membership() {
        let m_hat = vec![ratio(1, 7), ratio(1, 7), ratio(1, 7), ratio(4, 7)];
        let rates = vec![ratio(3, 7), ratio(3, 7), ratio(3, 7), ratio(4, 7)];
        assert!(gp_region_contains(&rates, 3, &m_hat));
        // any encoder below the protected mass is excluded
        let low = vec![ratio(2, 7), ratio(3, 7), ratio(3, 7), ratio(4, 7)];
        assert!(!gp_region_contains(&low, 3, &m_hat));
        // r = L collapses to per-encoder total-mass bounds
        let m_hat = vec![ratio(1, 2), ratio(1, 2)];
        assert!(gp_region_contains(&rv(&[1, 1]), 2, &m_hat));
        assert!(!gp_region_contains(&[ratio(9, 10), rat(1)], 2, &m_hat));
    }

    #[test]
    fn star_directions_match_closed_forms() {
        let m_hat = vec![ratio(1, 7), ratio(1, 7), ratio(1, 7), ratio(4, 7)];
        let r = 3;
        // unit direction: per-encoder protected mass
        let e1 = rv(&[1, 0, 0, 0]);
        let (eta, _) = eta_star_rational(r, &m_hat);
        assert_eq!(g_eta(eta, &e1, &m_hat, r), ratio(3, 7));
        // all-ones direction: the sum-rate bound
        let ones = rv(&[1, 1, 1, 1]);
        assert_eq!(g_eta(eta, &ones, &m_hat, r), ratio(13, 7));
        let rates = vec![ratio(3, 7), ratio(3, 7), ratio(3, 7), ratio(4, 7)];
        assert!(star_region_contains(&rates, r, &m_hat, &[e1, ones]));
    }

    #[test]
    fn supporting_tuple_meets_hyperplane() {
        let m_hat = vec![ratio(1, 7), ratio(1, 7), ratio(1, 7), ratio(4, 7)];
        let (eta, _) = eta_star_rational(3, &m_hat);
        let ones = rv(&[1, 1, 1, 1]);
        let tuple = supporting_rate_tuple(&ones, 3, &m_hat);
        assert_eq!(
            tuple.values,
            vec![ratio(13, 28), ratio(13, 28), ratio(13, 28), ratio(13, 28)]
        );
        let dot: BigRational = tuple.values.iter().cloned().sum();
        assert_eq!(dot, g_eta(eta, &ones, &m_hat, 3));
        assert!(gp_region_contains(&tuple.values, 3, &m_hat));

        let e1 = rv(&[1, 0, 0, 0]);
        let tuple = supporting_rate_tuple(&e1, 3, &m_hat);
        assert_eq!(tuple.values[0], ratio(3, 7));

        // r = L: replicate the full mass where lambda is supported
        let m_hat = vec![ratio(1, 2), ratio(1, 2)];
        let tuple = supporting_rate_tuple(&rv(&[1, 1]), 2, &m_hat);
        assert_eq!(tuple.values, rv(&[1, 1]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn f_alpha_scales_linearly(
            l in 2usize..6, alpha_seed in 0usize..6,
            raw in prop::collection::vec(0i64..9, 2..6), t in 1i64..7) {
            let lambda: Vec<BigRational> = raw.iter().take(l).map(|&x| rat(x)).collect();
            prop_assume!(lambda.len() >= 2 && lambda.iter().any(|v| !v.is_zero()));
            let alpha = alpha_seed % lambda.len() + 1;
            let scaled: Vec<BigRational> = lambda.iter().map(|v| v * rat(t)).collect();
            prop_assert_eq!(f_alpha(alpha, &scaled), rat(t) * f_alpha(alpha, &lambda));
        }

        #[test]
        fn f_alpha_permutation_invariant(
            raw in prop::collection::vec(0i64..9, 3..6), alpha_seed in 0usize..6, rot in 0usize..6) {
            let lambda: Vec<BigRational> = raw.iter().map(|&x| rat(x)).collect();
            prop_assume!(lambda.iter().any(|v| !v.is_zero()));
            let alpha = alpha_seed % lambda.len() + 1;
            let mut rotated = lambda.clone();
            rotated.rotate_left(rot % lambda.len());
            prop_assert_eq!(f_alpha(alpha, &rotated), f_alpha(alpha, &lambda));
        }

        #[test]
        fn lp_agrees_with_closed_form(
            raw in prop::collection::vec(0i64..9, 3..6), alpha_seed in 0usize..6) {
            let lambda: Vec<BigRational> = raw.iter().map(|&x| rat(x)).collect();
            prop_assume!(lambda.iter().any(|v| !v.is_zero()));
            let alpha = alpha_seed % lambda.len() + 1;
            let (value, res) = f_alpha_lp(alpha, &lambda);
            prop_assert_eq!(&value, &f_alpha(alpha, &lambda));
            prop_assert!(res.is_feasible_for(&lambda));
            prop_assert_eq!(res.total_weight(), value);
        }

        #[test]
        fn considerable_directions_dominate_top_coordinate(
            raw in prop::collection::vec(1i64..9, 3..6)) {
            let mut lambda: Vec<BigRational> = raw.iter().map(|&x| rat(x)).collect();
            lambda.sort_by(|a, b| b.cmp(a));
            let l = lambda.len();
            let tail: BigRational = lambda[1..].iter().cloned().sum();
            for eta in 2..=l {
                // only sorted directions whose top coordinate fits under the
                // tail average are in scope for this bound
                if lambda[0].clone() * rat((eta - 1) as i64) <= tail {
                    prop_assert!(f_alpha(eta, &lambda) >= lambda[0]);
                }
            }
        }
    }
}
