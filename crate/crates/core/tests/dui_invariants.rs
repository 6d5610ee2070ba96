use oscint::dui::{check_interchange, uniform_tail_probe, DifferentiatedFamily, DuiOptions, InterchangeDecision};
use oscint::{QuadratureConfig, SourceEq, Trig};

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn control_is_valid_at_every_b() {
    for b in [0.1, 0.5, 1.0, 2.0, 4.0] {
        let r = check_interchange(&DifferentiatedFamily::Control, b, &DuiOptions::default(), &cfg()).unwrap();
        assert_eq!(r.decision, InterchangeDecision::Valid, "b={b}: {}", r.reason);
        assert!((r.formal_limit.unwrap() - r.exact_derivative).abs() < 1e-8);
    }
}

#[test]
fn control_tail_decays_exponentially() {
    let fam = DifferentiatedFamily::Control;
    let mut last = f64::INFINITY;
    for t in [5.0, 10.0, 15.0, 20.0] {
        let sup = uniform_tail_probe(&fam, 0.5, 2.0, 16, t, 2.0 * t, &cfg()).unwrap();
        // |int_T^inf x e^{-x} sin(bx)| <= (T+1) e^{-T}
        assert!(sup <= (t + 1.0) * (-t).exp(), "T={t}: {sup}");
        assert!(sup < last * (-4.0f64).exp());
        last = sup;
    }
}

#[test]
fn table_tails_do_not_shrink() {
    let fam = DifferentiatedFamily::table(SourceEq::E5, Trig::Cos, 1.0).unwrap();
    let near = uniform_tail_probe(&fam, 0.5, 2.0, 16, 10.0, 20.0, &cfg()).unwrap();
    let far = uniform_tail_probe(&fam, 0.5, 2.0, 16, 20.0, 40.0, &cfg()).unwrap();
    assert!(near > 0.2 && far > 0.2, "{near} {far}");
}

#[test]
fn reports_are_deterministic() {
    let fam = DifferentiatedFamily::table(SourceEq::E6, Trig::Sin, 2.0).unwrap();
    let a = check_interchange(&fam, 0.5, &DuiOptions::default(), &cfg()).unwrap();
    let b = check_interchange(&fam, 0.5, &DuiOptions::default(), &cfg()).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
