use num_complex::Complex64;
use utaylor_core::geometry::ApproachRegion;
use utaylor_core::probe::{fatou_probe, polar_grid, uk_diagnostic, FatouVerdict};
use utaylor_core::universal::{
    build_universal, read_artifact, write_artifact, BuildConfig, DiscBuilder, Schedule, ScheduleSpec,
};
use utaylor_core::{ComplexValue, Error, Precision};

const SMALL: &str = r#"
domain = "disc"

[a]
shape = "disc"
center = [0.5, 0.0]
radius = 0.5

[weight]
kind = "inv_sqrt_distance"

[build]
max_degree = 40

[build.density]
boundary = 64
interior = 16

[[steps]]
target = [[-1.0, 0.0], [1.0, 0.0]]
tau = 1e-3

[steps.set]
shape = "disc"
center = [-1.1, 0.0]
radius = 0.02

[[steps]]
target = [[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
tau = 1e-4

[steps.set]
shape = "disc"
center = [-1.08, 0.06]
radius = 0.02

[[steps]]
target = [[0.0, -0.5], [0.0, 0.5]]
tau = 1e-5

[steps.set]
shape = "disc"
center = [-1.08, -0.06]
radius = 0.02
"#;

fn schedule() -> Schedule {
    Schedule::new(ScheduleSpec::from_toml(SMALL).unwrap(), Precision::default()).unwrap()
}

#[test]
fn resumed_builder_matches_a_straight_build() {
    let s = schedule();
    let straight = build_universal(&s, 2, BuildConfig::empirical()).unwrap();
    let first = build_universal(&s, 1, BuildConfig::empirical()).unwrap();
    let mut b = DiscBuilder::resume(&s, BuildConfig::empirical(), first).unwrap();
    b.step().unwrap();
    assert_eq!(b.series(), &straight);
}

#[test]
fn resume_rejects_a_foreign_series() {
    let s = schedule();
    let mut series = build_universal(&s, 1, BuildConfig::empirical()).unwrap();
    series.schedule_hash = "0".repeat(64);
    assert!(matches!(DiscBuilder::resume(&s, BuildConfig::empirical(), series), Err(Error::Schedule(_))));
}

#[test]
fn blocks_occupy_disjoint_degree_ranges() {
    // n_k <= val(q_k) and deg(q_k) < n_{k+1}, so S_{n_{k+1}-1}(f) is exactly
    // q_1 + ... + q_k.
    let s = schedule();
    let series = build_universal(&s, 3, BuildConfig::empirical()).unwrap();
    let b = &series.blocks;
    for k in 0..b.len() {
        let q = b[k].q();
        assert!(q.valuation().is_none_or(|v| v >= b[k].exponent));
        if k + 1 < b.len() {
            assert!((q.degree() as i64) < b[k + 1].exponent as i64);
            let mut sum = b[0].q();
            for blk in &b[1..=k] {
                sum = &sum + &blk.q();
            }
            assert_eq!(series.partial_sum(b[k + 1].exponent - 1), sum);
        }
    }
}

#[test]
fn artifact_round_trip_of_a_build_is_exact() {
    let s = schedule();
    let series = build_universal(&s, 2, BuildConfig::strict()).unwrap();
    let text = write_artifact(&series, "cafe");
    let back = read_artifact(&text).unwrap();
    assert_eq!(back.series, series);
    assert_eq!(back.config_hash, "cafe");
    assert_eq!(write_artifact(&back.series, "cafe"), text);
}

#[test]
fn tail_bound_extends_the_uk_range() {
    let s = schedule();
    let mut b = DiscBuilder::new(&s, BuildConfig::empirical()).unwrap();
    b.step().unwrap();
    b.step().unwrap();
    let n3 = b.next_exponent().unwrap();
    let tail = b.tail_bound(n3);
    assert_eq!(tail.radius, 0.75);
    assert!(n3 as isize > b.series().sum().degree());
    let grid = polar_grid(0.7, 4, 16, s.prec);
    let series = b.series();
    let built = series.available_coefficients();
    assert!(matches!(uk_diagnostic(series, built, &grid, None), Err(Error::BeyondBuiltBlocks { .. })));
    assert!(matches!(uk_diagnostic(series, n3, &grid, Some(&tail)), Err(Error::BeyondBuiltBlocks { .. })));
    let rep = uk_diagnostic(series, n3 - 1, &grid, Some(&tail)).unwrap();
    assert_eq!(rep.points.len(), 64);
    assert!((rep.fraction_below + rep.fraction_above + rep.fraction_indeterminate - 1.0).abs() < 1e-12);
}

#[test]
fn a_finite_prefix_has_nontangential_limits() {
    // A polynomial is continuous on the closed disc, so the probe converges
    // to its value at zeta.
    let s = schedule();
    let series = build_universal(&s, 2, BuildConfig::empirical()).unwrap();
    let p = s.prec;
    for theta in [0.5, 2.0, -2.5] {
        let zeta = ComplexValue::unit(&p.real(theta));
        let r = ApproachRegion::new(zeta.clone(), p.real(2.0), p.real(0.5)).unwrap();
        let exact: Complex64 = series.eval(&zeta).to_c64();
        match fatou_probe(&series, &r, 40) {
            FatouVerdict::Convergent { limit, .. } => {
                assert!((Complex64::new(limit[0], limit[1]) - exact).norm() < 1e-6 * (1.0 + exact.norm()));
            }
            v => panic!("theta {theta}: {v:?}"),
        }
    }
}
