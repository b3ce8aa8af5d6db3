use qcohom_core::algebra::Rational;
use qcohom_core::oracle::{
    ks_statistic, sample_marginals, sample_points, sample_slice, SampleConfig,
};

#[test]
fn one_qubit_is_uniform() {
    let cfg = SampleConfig::new(1, 400_000, 20, 3);
    let h = sample_marginals(&cfg).unwrap();
    let expect = cfg.samples as f64 / 20.0;
    let se = (expect * (1.0 - 1.0 / 20.0)).sqrt();
    for (k, &c) in h.counts.iter().enumerate() {
        assert!(
            (c as f64 - expect).abs() < 5.0 * se,
            "bin {k}: {c} vs {expect}"
        );
    }
}

#[test]
fn coordinates_have_zero_mean() {
    for r in 1..=3 {
        let pts = sample_points(&SampleConfig::new(r, 200_000, 8, 11), 200_000).unwrap();
        let n = pts.len() as f64;
        for i in 0..r {
            let mean = pts.iter().map(|p| p[i]).sum::<f64>() / n;
            let var = pts.iter().map(|p| (p[i] - mean).powi(2)).sum::<f64>() / (n - 1.0);
            let se = (var / n).sqrt();
            assert!(
                mean.abs() < 4.0 * se,
                "r = {r}, axis {i}: mean {mean}, se {se}"
            );
        }
    }
}

#[test]
fn marginals_are_symmetric() {
    let n = 40_000;
    // 0.1% two-sample critical value
    let crit = 1.95 * (2.0 / n as f64).sqrt();
    for r in 2..=3 {
        let pts = sample_points(&SampleConfig::new(r, n as u64 * 2, 8, 5), n * 2).unwrap();
        let (first, second) = pts.split_at(n);
        let x1: Vec<f64> = first.iter().map(|p| p[0]).collect();
        let neg: Vec<f64> = second.iter().map(|p| -p[0]).collect();
        let last: Vec<f64> = second.iter().map(|p| p[r - 1]).collect();
        assert!(ks_statistic(&x1, &neg) < crit, "r = {r}: reflection");
        assert!(ks_statistic(&x1, &last) < crit, "r = {r}: swap");
    }
}

#[test]
fn independent_of_thread_count() {
    let cfg = SampleConfig::new(2, 300_000, 10, 42);
    let many = sample_marginals(&cfg).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let one = pool.install(|| sample_marginals(&cfg)).unwrap();
    assert_eq!(many, one);
    let half = Rational::new(1.into(), 10.into());
    let a = sample_slice(&SampleConfig::new(3, 200_000, 6, 9), 2, &half).unwrap();
    let b = pool
        .install(|| sample_slice(&SampleConfig::new(3, 200_000, 6, 9), 2, &half))
        .unwrap();
    assert_eq!(a, b);
}

#[test]
fn reruns_are_bit_identical() {
    let cfg = SampleConfig::new(3, 100_000, 6, 1234);
    let a = sample_points(&cfg, 1000).unwrap();
    let b = sample_points(&cfg, 1000).unwrap();
    assert!(a
        .iter()
        .flatten()
        .zip(b.iter().flatten())
        .all(|(x, y)| x.to_bits() == y.to_bits()));
    assert_eq!(
        sample_marginals(&cfg).unwrap(),
        sample_marginals(&cfg).unwrap()
    );
}

#[test]
fn bad_configs_are_rejected() {
    assert!(sample_marginals(&SampleConfig::new(2, 1000, 2, 0)).is_err());
    let mut cfg = SampleConfig::new(2, 1000, 10, 0);
    cfg.band = Some(Rational::new(1.into(), 2.into()));
    assert!(sample_marginals(&cfg).is_err());
    let cfg = SampleConfig::new(1, 1000, 10, 0);
    assert!(sample_slice(&cfg, 0, &Rational::new(1.into(), 10.into())).is_err());
}
