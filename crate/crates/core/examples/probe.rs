// Scratch numeric probes; not part of the library surface.

use kicked_top::classical::{
    classical_ignorance, classical_map, find_periodic_orbits, ClassicalState,
};

fn main() {
    // Multiplier of the antipodal two-cycle x = z = pi/kappa.
    for kappa in [4.6, 5.0, 5.5, 6.0, 6.5, 7.0] {
        let x = std::f64::consts::PI / kappa;
        let y = (1.0 - 2.0 * x * x).sqrt();
        let s = ClassicalState::new(x, y, x).unwrap();
        // Find it via the orbit finder to get the multiplier.
        let orbits = find_periodic_orbits(kappa, 2, 40, 80).unwrap();
        let m = orbits
            .iter()
            .filter(|o| o.minimal_period == 2)
            .map(|o| {
                let d = (o.representative().as_vector() - s.as_vector()).norm();
                let d2 = (o.representative().as_vector() + s.as_vector()).norm();
                (d.min(d2), o.multiplier, o.stable)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0));
        println!("kappa={kappa}: antipodal cycle match {m:?}");
    }

    // I_C convergence under doubling at the spec's sample point.
    for n in [10_000u64, 100_000, 1_000_000] {
        let a = classical_ignorance(1.2, 0.3, 2.5, n, 0).unwrap();
        let b = classical_ignorance(1.2, 0.3, 2.5, 2 * n, 0).unwrap();
        println!("ic n={n}: {a:.6} vs doubled {b:.6}, drift {:.2e}", (a - b).abs());
    }

    // Exact-state ignorance on the antipodal cycle, various lengths.
    let kappa = 5.0;
    let x = std::f64::consts::PI / kappa;
    let y = (1.0 - 2.0 * x * x).sqrt();
    let mut s = ClassicalState::new(x, y, x).unwrap();
    let mut mean = nalgebra::Vector3::zeros();
    for step in 1..=10_000u64 {
        mean += s.as_vector();
        s = classical_map(s, kappa);
        if [2u64, 10, 100, 1000, 10_000].contains(&step) {
            let m = mean / step as f64;
            println!("antipodal ic at n={step}: {:.12}", 0.5 * (1.0 - m.norm_squared()));
        }
    }

    // Stable period-1 orbits at kappa=2.5 (positive phi per the islands).
    for o in find_periodic_orbits(2.5, 1, 30, 60).unwrap() {
        let (t, p) = o.representative().angles();
        println!(
            "p1 orbit theta={t:.4} phi={p:.4} mult={:.4} stable={}",
            o.multiplier, o.stable
        );
    }
    for o in find_periodic_orbits(2.5, 2, 30, 60).unwrap() {
        if o.minimal_period == 2 {
            let (t, p) = o.representative().angles();
            println!(
                "p2 orbit theta={t:.4} phi={p:.4} mult={:.4} stable={}",
                o.multiplier, o.stable
            );
        }
    }
}
