use nag_core::UniformStream;
use nag_network::{build_topology, is_connected, TopologyKind, WeightMatrix};

fn weights(kind: TopologyKind, n: usize) -> WeightMatrix {
    WeightMatrix::from_edges(&build_topology(kind, n).unwrap()).unwrap()
}

fn deviation_norm(v: &[f64]) -> f64 {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter()
        .map(|x| (x - mean) * (x - mean))
        .sum::<f64>()
        .sqrt()
}

#[test]
fn default_topologies_are_connected_and_ordered() {
    let mut sigmas = Vec::new();
    for kind in [
        TopologyKind::Complete,
        TopologyKind::Log,
        TopologyKind::Linear,
    ] {
        let edges = build_topology(kind, 20).unwrap();
        assert!(is_connected(&edges), "{kind} disconnected");
        let w = WeightMatrix::from_edges(&edges).unwrap();
        assert!(w.sigma() < 1.0);
        sigmas.push(w.sigma());
    }
    assert!(sigmas[0] < sigmas[1] && sigmas[1] < sigmas[2], "{sigmas:?}");
}

#[test]
fn complete_twenty_sigma_closed_form() {
    // W = (1/2 − δ) I + δ 11ᵀ with δ = 1/38
    let w = weights(TopologyKind::Complete, 20);
    assert!((w.sigma() - (0.5 - 0.5 / 19.0)).abs() < 1e-12);
}

#[test]
fn weights_are_symmetric_and_supported_on_edges() {
    for kind in TopologyKind::ALL {
        let edges = build_topology(kind, 20).unwrap();
        let w = WeightMatrix::from_edges(&edges).unwrap();
        let m = w.matrix();
        assert!((m - m.transpose()).amax() <= 1e-15);
        for i in 0..20 {
            for j in 0..20 {
                let linked = i == j || edges.contains(i + 1, j + 1);
                assert_eq!(m[(i, j)] > 0.0, linked);
                assert!(m[(i, j)] >= 0.0);
            }
        }
    }
}

#[test]
fn consensus_contraction_and_mean_preservation() {
    let mut rng = UniformStream::new(9);
    for kind in TopologyKind::ALL {
        let w = weights(kind, 20);
        for _ in 0..1000 {
            let v: Vec<f64> = (0..20).map(|_| rng.uniform(-10.0, 10.0)).collect();
            let mixed = w.mix(&v, 1);
            assert!(deviation_norm(&mixed) <= w.sigma() * deviation_norm(&v) + 1e-12);
            let (s0, s1): (f64, f64) = (v.iter().sum(), mixed.iter().sum());
            assert!((s0 - s1).abs() <= 1e-10);
        }
    }
}
