use qugame::qalgo::{bernstein_vazirani, grover_search, grover_success_probability};

#[test]
fn grover_rotation_is_symmetric_and_exact() {
    for n in 1..=8usize {
        for a in 0..1usize << n {
            let run = grover_search(n, a).unwrap();
            assert!(run.trajectory_complete);
            for s in &run.trajectory {
                let rest: Vec<_> = (0..s.len()).filter(|&i| i != a).map(|i| s.amp(i)).collect();
                for x in &rest {
                    assert!((x - rest[0]).norm() < 1e-10, "n={n} a={a}");
                }
            }
            let p = run.final_state().amp(a).norm_sqr();
            assert!((p - grover_success_probability(n, run.k)).abs() < 1e-9);
            assert!((run.success_probability - p).abs() < 1e-9);
        }
    }
}

#[test]
fn bernstein_vazirani_is_deterministic() {
    for n in 1..=5usize {
        for a in 0..1usize << n {
            let run = bernstein_vazirani(n, a).unwrap();
            assert_eq!(run.recovered, a);
            assert_eq!(run.oracle_calls, 1);
            assert!((run.probability - 1.0).abs() < 1e-12);
        }
    }
}
