mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tmoga_core::infotheory::{
    build_ib_instance, entropy, exhaustive_entropy_bound, faulty_instance, kl_divergence, random_instance,
    set_partitions, verify_batch, verify_theorems, JointDistribution, THEOREM_TOLERANCE,
};
use tmoga_core::{CliqueSet, Partition};

#[test]
fn random_instances_satisfy_every_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let inst = random_instance(&mut rng);
        let r = verify_theorems(&inst).unwrap();
        assert!(r.passes(), "{inst:?} {r:?}");
        assert!(r.sufficiency_gap >= -THEOREM_TOLERANCE);
        assert!((r.sufficiency_gap - r.sufficiency_kl).abs() <= THEOREM_TOLERANCE);
        assert!(r.transfer_gap >= -THEOREM_TOLERANCE);

        // The same gap from partition NMI on the combined (community, feature) label.
        let k = inst.feature.iter().max().unwrap() + 1;
        let combined: Vec<usize> = inst.current.iter().zip(&inst.feature).map(|(&c, &z)| c * k + z).collect();
        let gap = common::nmi(&combined, &inst.previous) - common::nmi(&inst.current, &inst.previous);
        assert!((gap - r.transfer_gap).abs() < 1e-9, "{gap} vs {}", r.transfer_gap);
    }
}

#[test]
fn batch_summary() {
    let s = verify_batch(1000, 7, false).unwrap();
    assert!(s.passed(), "{s:?}");
    assert_eq!(s.trials, 1000);
    assert!(s.min_transfer_gap >= -THEOREM_TOLERANCE);
    assert!(s.max_sufficiency_kl_mismatch <= THEOREM_TOLERANCE);
    let bad = verify_batch(10, 7, true).unwrap();
    assert_eq!(bad.failures, 1);
    assert!(!bad.passed());
    assert!(verify_batch(0, 7, false).is_err());
}

#[test]
fn faulty_instance_is_caught() {
    let r = verify_theorems(&faulty_instance()).unwrap();
    assert!(r.transfer_gap < -THEOREM_TOLERANCE);
    assert!(!r.passes());
}

#[test]
fn entropy_bound_holds_exhaustively() {
    assert!(exhaustive_entropy_bound(6));
    let bell = [1, 1, 2, 5, 15, 52, 203];
    for (n, &b) in bell.iter().enumerate() {
        assert_eq!(set_partitions(n).len(), b);
        assert_eq!(set_partitions(n), common::all_partitions(n));
    }
}

#[test]
fn unstable_cliques_are_rejected() {
    let prev = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
    let cur = Partition::from_labels(&[0, 0, 1, 1, 1, 1]);
    let split = CliqueSet::new(vec![vec![0, 1, 2]], 0);
    assert!(build_ib_instance(&prev, &cur, &split, 1.0).is_err());
    let stable = CliqueSet::new(vec![vec![3, 4, 5]], 0);
    let inst = build_ib_instance(&prev, &cur, &stable, 1.0).unwrap();
    assert_eq!(inst.feature, vec![0, 0, 0, 1, 1, 1]);
    assert!(build_ib_instance(&prev, &cur, &stable, -1.0).is_err());
}

#[test]
fn distribution_primitives() {
    assert!((entropy(&[0.5, 0.5]).unwrap() - 2f64.ln()).abs() < 1e-12);
    assert_eq!(entropy(&[1.0, 0.0]).unwrap(), 0.0);
    assert!(entropy(&[0.5, 0.6]).is_err());
    assert_eq!(kl_divergence(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
    assert!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]).unwrap().is_infinite());
    let j = JointDistribution::from_labels(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap();
    assert_eq!(j.probs(), &[0.25; 4]);
    assert_eq!(j.marginal(&[0]).unwrap(), vec![0.5, 0.5]);
}
