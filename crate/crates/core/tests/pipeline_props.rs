mod common;

use tmoga_core::benchgen::{gen_events, gen_synfix, gen_synvar, EventModel, EventParams};
use tmoga_core::pipeline::{run_label_propagation_only, REPORT_SCHEMA_VERSION};
use tmoga_core::{metrics, run_tmoga, DynamicNetwork, GaParams, NodeRegistry, Partition, RunReport};

fn quick(seed: u64) -> GaParams {
    GaParams {
        population_size: 40,
        generations: 15,
        seed,
        ..GaParams::default()
    }
}

#[test]
fn report_round_trips_through_json() {
    let seq = gen_synfix(2, 4).unwrap();
    let r = run_tmoga(&seq.network, &quick(4), Some(&seq.truths)).unwrap();
    assert_eq!(r.schema_version, REPORT_SCHEMA_VERSION);
    let text = serde_json::to_string(&r).unwrap();
    let back: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["schema_version"], REPORT_SCHEMA_VERSION);
}

#[test]
fn reports_are_internally_consistent() {
    let seq = gen_synvar(2, 2).unwrap();
    let r = run_tmoga(&seq.network, &quick(2), Some(&seq.truths)).unwrap();
    assert_eq!(r.snapshots.len(), seq.network.len());
    for (t, s) in r.snapshots.iter().enumerate() {
        let snap = seq.network.snapshot(t);
        let p = s.partition();
        assert_eq!(s.time, t + 1);
        assert_eq!(s.communities, p.community_count());
        assert!((s.modularity - metrics::modularity(snap, &p).unwrap()).abs() < 1e-12);
        assert!((s.nmi_truth.unwrap() - metrics::nmi(&p, &seq.truths[t]).unwrap()).abs() < 1e-12);
        assert!(s.chosen < s.front.len());
        assert_eq!(s.front[s.chosen].modularity, s.modularity);
        // The chosen solution has the best community score on the front.
        assert!(s.front.iter().all(|e| e.community_score <= s.community_score));
        assert_eq!(s.trace.len(), 16);
        assert_eq!(s.nmi_previous.is_some(), t > 0);
        assert_eq!(s.front[0].objectives.len(), if t == 0 { 1 } else { 2 });
    }
}

#[test]
fn same_seed_same_result() {
    let seq = gen_synfix(3, 8).unwrap();
    let a = run_tmoga(&seq.network, &quick(8), None).unwrap();
    let b = run_tmoga(&seq.network, &quick(8), None).unwrap();
    assert_eq!(a.without_timings(), b.without_timings());
    let c = run_tmoga(&seq.network, &quick(9), None).unwrap();
    assert_ne!(a.without_timings(), c.without_timings());
}

#[test]
fn clean_planted_structure_is_recovered() {
    let seq = gen_synfix(0, 1).unwrap();
    for run in [run_tmoga, run_label_propagation_only] {
        let r = run(&seq.network, &quick(1), Some(&seq.truths)).unwrap();
        assert!(r.mean_nmi_truth().unwrap() > 0.99, "{:?}", r.mean_nmi_truth());
    }
}

#[test]
fn barbell_sequence_keeps_both_triangles() {
    let b = common::barbell();
    let net = DynamicNetwork::new(vec![b.clone(), b.clone(), b], NodeRegistry::sequential(6)).unwrap();
    let split = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
    let r = run_tmoga(&net, &quick(3), Some(&[split.clone(), split.clone(), split])).unwrap();
    for s in &r.snapshots {
        assert!((s.modularity - 5.0 / 14.0).abs() < 1e-12);
        assert_eq!(s.nmi_truth, Some(1.0));
    }
    assert!(r.snapshots[1].cliques >= 2);
}

#[test]
fn generated_sequences_are_well_formed() {
    let small = EventParams {
        nodes: 300,
        ..EventParams::default()
    };
    for seed in 1..=3 {
        let mut seqs = vec![gen_synfix(3, seed).unwrap(), gen_synvar(3, seed).unwrap()];
        for model in [
            EventModel::BirthDeath,
            EventModel::ExpandContract,
            EventModel::Intermittent,
            EventModel::MergeSplit,
        ] {
            seqs.push(gen_events(model, &small, seed).unwrap());
        }
        for seq in seqs {
            let n = seq.network.node_count();
            assert_eq!(seq.truths.len(), seq.network.len());
            for (snap, truth) in seq.network.snapshots().iter().zip(&seq.truths) {
                assert_eq!(snap.node_count(), n);
                assert_eq!(truth.node_count(), n);
                assert!(snap.edges().all(|(u, v)| u != v));
                if snap.edge_count() > 0 {
                    // Planted communities beat a random split by a wide margin.
                    assert!(metrics::modularity(snap, truth).unwrap() > 0.2);
                }
            }
            for e in &seq.events {
                assert!((1..=seq.network.len()).contains(&e.time));
            }
        }
    }
}

#[test]
fn generators_are_seeded() {
    let p = EventParams {
        nodes: 200,
        ..EventParams::default()
    };
    let a = gen_events(EventModel::MergeSplit, &p, 5).unwrap();
    let b = gen_events(EventModel::MergeSplit, &p, 5).unwrap();
    assert_eq!(a.truths, b.truths);
    assert_eq!(a.events, b.events);
    assert_eq!(a.network.snapshots(), b.network.snapshots());
    let c = gen_synvar(3, 6).unwrap();
    assert_ne!(c.network.snapshots(), gen_synvar(3, 7).unwrap().network.snapshots());
}
