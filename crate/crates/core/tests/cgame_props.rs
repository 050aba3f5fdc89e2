use proptest::prelude::*;
use qugame::cgame::{ess_test, expected_payoff, pure_nash, repeated_payoff_distribution, Bimatrix, MixedStrategy};

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("m{k}")).collect()
}

fn arb_game() -> impl Strategy<Value = Bimatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        let m = move || proptest::collection::vec(proptest::collection::vec(-3i32..=5, c), r);
        (m(), m()).prop_map(move |(a, b)| {
            let f = |m: Vec<Vec<i32>>| m.into_iter().map(|row| row.into_iter().map(f64::from).collect()).collect();
            Bimatrix::new(labels(r), labels(c), f(a), f(b)).unwrap()
        })
    })
}

fn arb_mix(n: usize) -> impl Strategy<Value = MixedStrategy> {
    proptest::collection::vec(0.01f64..1.0, n).prop_map(|w| {
        let t: f64 = w.iter().sum();
        MixedStrategy::new(w.iter().map(|x| x / t).collect()).unwrap()
    })
}

/// Cells where each player's move is a best reply to the other's.
fn brute_nash(g: &Bimatrix) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            let best_a = (0..g.rows()).map(|k| g.a(k, j)).fold(f64::NEG_INFINITY, f64::max);
            let best_b = (0..g.cols()).map(|k| g.b(i, k)).fold(f64::NEG_INFINITY, f64::max);
            if g.a(i, j) == best_a && g.b(i, j) == best_b {
                out.push((i, j));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pure_nash_matches_brute_force(g in arb_game()) {
        let mut got = pure_nash(&g);
        got.sort_unstable();
        prop_assert_eq!(got, brute_nash(&g));
    }

    #[test]
    fn payoff_is_bilinear(
        (g, p1, p2, q) in arb_game().prop_flat_map(|g| {
            let (r, c) = (g.rows(), g.cols());
            (Just(g), arb_mix(r), arb_mix(r), arb_mix(c))
        }),
        lam in 0.0f64..1.0,
    ) {
        let mix: Vec<f64> = p1.probs().iter().zip(p2.probs()).map(|(a, b)| lam * a + (1.0 - lam) * b).collect();
        let mix = MixedStrategy::new(mix).unwrap();
        let (a, b) = expected_payoff(&g, &mix, &q).unwrap();
        let (a1, b1) = expected_payoff(&g, &p1, &q).unwrap();
        let (a2, b2) = expected_payoff(&g, &p2, &q).unwrap();
        prop_assert!((a - (lam * a1 + (1.0 - lam) * a2)).abs() < 1e-9);
        prop_assert!((b - (lam * b1 + (1.0 - lam) * b2)).abs() < 1e-9);
    }

    #[test]
    fn zero_sum_payoffs_cancel(
        (a, p, q) in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
            (proptest::collection::vec(proptest::collection::vec(-3.0f64..5.0, c), r), arb_mix(r), arb_mix(c))
        })
    ) {
        let g = Bimatrix::zero_sum(labels(a.len()), labels(a[0].len()), a).unwrap();
        let (x, y) = expected_payoff(&g, &p, &q).unwrap();
        prop_assert!((x + y).abs() < 1e-12);
    }

    #[test]
    fn ess_at_vanishing_share_is_a_best_reply_test(a in proptest::collection::vec(proptest::collection::vec(-3i32..=5, 3), 3), i in 0usize..3, j in 0usize..3) {
        prop_assume!(i != j);
        let pa: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|&x| f64::from(x)).collect()).collect();
        let pb: Vec<Vec<f64>> = (0..3).map(|r| (0..3).map(|c| pa[c][r]).collect()).collect();
        let g = Bimatrix::new(labels(3), labels(3), pa.clone(), pb).unwrap();
        let rep = ess_test(&g, i, j, 1e-9).unwrap();
        if pa[i][i] > pa[j][i] {
            prop_assert!(rep.stable);
        }
        if pa[i][i] < pa[j][i] {
            prop_assert!(!rep.stable);
        }
    }
}

#[test]
fn repeated_distributions_are_normalized() {
    for n in 1..=30 {
        for p in [0.0, 0.1, 0.25, 0.5, 0.9, 1.0] {
            let total: f64 = repeated_payoff_distribution(n, p).unwrap().iter().map(|(_, q)| q).sum();
            assert!((total - 1.0).abs() < 1e-12, "n={n} p={p}");
        }
    }
}
