#![allow(clippy::excessive_precision, clippy::type_complexity)]

use pipestab::operators::assemble;
use pipestab::special::{airy, airy_a0, bessel_j, bessel_zero, harmonic_axisym, harmonic_j, harmonic_j_star};
use pipestab::{build_grid, FourierMode, RadialField, C64};

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

// reference values from 30-digit arithmetic
const AIRY: [((f64, f64), (f64, f64), (f64, f64)); 10] = [
    ((1.0, 0.0), (0.135292416312881415524, 0.0), (-0.159147441296793212788, 0.0)),
    ((-1.0, 0.0), (0.535560883292352118800, 0.0), (-0.0101605671166452093950, 0.0)),
    ((2.0, 0.0), (0.0349241304232743791353, 0.0), (-0.0530903844336536317040, 0.0)),
    ((-2.0, 0.0), (0.227407428201685575992, 0.0), (0.618259020741691041406, 0.0)),
    ((5.0, 0.0), (1.08344428136074417350e-4, 0.0), (-2.47413890868462476000e-4, 0.0)),
    ((-6.0, 0.0), (-0.329145173629823105231, 0.0), (0.345935487281342894930, 0.0)),
    (
        (0.0, 1.0),
        (0.331493305432141188985, -0.317449858968443773478),
        (-0.432492659841807099306, 0.0980478562292432323838),
    ),
    (
        (3.0, -2.0),
        (-0.00967720105861024015423, -0.00552468911173270568601),
        (0.0209900852451602450441, 0.00534746569557464580607),
    ),
    (
        (-4.0, 1.0),
        (-0.360008730636868575700, -1.40838450710882623102),
        (-2.86097227026441330898, 0.959949841308996255914),
    ),
    (
        (7.0, 7.0),
        (4.85608604703195751898e-5, -2.83197100017644661907e-5),
        (-1.75640302851904967345e-4, 2.52061087865667368980e-5),
    ),
];

#[test]
fn airy_matches_reference() {
    for &((x, y), (a, b), (c, d)) in &AIRY {
        let (ai, aip) = airy(C64::new(x, y));
        assert!(rel(ai, C64::new(a, b)) < 1e-11, "Ai({x}+{y}i) = {ai}");
        assert!(rel(aip, C64::new(c, d)) < 1e-11, "Ai'({x}+{y}i) = {aip}");
    }
}

#[test]
fn airy_integral_matches_reference() {
    let cases = [
        ((0.0, 0.0), (1.0 / 3.0, 0.0)),
        ((1.0, 0.0), (0.0944465418994495318931, -0.0760086805365316843887)),
        ((-2.0, 0.05), (1.39958300134446296009, 0.454003671802178611512)),
        ((3.0, -1.0), (9.60462413435598045579e-4, -0.00279788026314586741653)),
    ];
    for ((x, y), (a, b)) in cases {
        let e = airy_a0(C64::new(x, y)).unwrap();
        assert!(rel(e.a0, C64::new(a, b)) < 1e-9, "A0({x}+{y}i) = {}", e.a0);
    }
    assert!(airy_a0(C64::new(0.0, 0.5)).is_err());
}

#[test]
fn bessel_matches_reference() {
    let values = [
        (0, 1.0, 0.765197686557966551450),
        (1, 2.5, 0.497094102464274038011),
        (3, 7.0, -0.167555587995334236032),
        (5, 0.3, 6.30443263377107111579e-7),
    ];
    for (n, x, want) in values {
        let got = bessel_j(n, x);
        assert!(((got - want) / want).abs() < 1e-12, "J_{n}({x}) = {got}");
    }
    let zeros = [
        (0, 1, 2.40482555769577276862),
        (0, 5, 14.9309177084877859478),
        (1, 1, 3.83170597020751231561),
        (2, 3, 11.6198411721490594271),
        (4, 10, 36.6990011287446494999),
    ];
    for (n, k, want) in zeros {
        let got = bessel_zero(n, k).unwrap();
        assert!(((got - want) / want).abs() < 1e-12, "j_{n},{k} = {got}");
    }
}

#[test]
fn axisymmetric_harmonic_matches_reference() {
    for (l, r, want) in
        [(0.5, 0.3, 0.291635502508014758470), (3.0, 0.7, 0.441521970584103454643), (20.0, 0.9, 0.142342174785877357462)]
    {
        let got = harmonic_axisym(l, r).unwrap();
        assert!(((got - want) / want).abs() < 1e-12, "l={l} r={r}: {got}");
    }
}

#[test]
fn harmonic_functions_solve_their_equations() {
    let g = build_grid(64).unwrap();
    for (n, l) in [(1, 0.7), (2, 2.0), (3, 5.0)] {
        let mode = FourierMode::new(n, l);
        let ops = assemble(mode, &g);
        let j = RadialField::from_real_fn(&g, |r| harmonic_j(mode, r).unwrap());
        let js = RadialField::from_real_fn(&g, |r| harmonic_j_star(mode, r).unwrap());
        assert!((j.at_wall().re - 1.0).abs() < 1e-14 && (js.at_wall().re - 1.0).abs() < 1e-14);
        let interior = |f: &RadialField| f.values()[1..g.n()].iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(interior(&ops.lap1(&j)) < 1e-8, "Δ̂₁J for n={n}, l={l}");
        assert!(interior(&ops.lap1_adj(&js)) < 1e-8, "Δ̂₁*J* for n={n}, l={l}");
    }
}
