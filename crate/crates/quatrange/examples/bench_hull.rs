// temporary accuracy probe
use quatrange::qmatrix::QMatrix;
use quatrange::quat::Quaternion;
use quatrange::sampler::{upper_hull, HullParams};
use std::time::Instant;

fn main() {
    let q = |a0: f64, a1: f64| Quaternion::new(a0, a1, 0.0, 0.0);
    let a = QMatrix::from_rows(vec![
        vec![q(0.0, 0.125), q(0.25, 0.0)],
        vec![q(-0.25, 0.0), q(1.0, 0.125)],
    ]).unwrap();
    let t0 = Instant::now();
    let est = upper_hull(&a, &HullParams::default()).unwrap();
    let dt = t0.elapsed().as_secs_f64();
    let m = 0.5 - 3.0f64.sqrt() / 4.0;
    let mm = 0.5 + 3.0f64.sqrt() / 4.0;
    println!("time        {dt:.2} s");
    println!("hull verts  {}", est.hull.len());
    println!("m    err {:.2e}", (est.real_min - m).abs());
    println!("M    err {:.2e}", (est.real_max - mm).abs());
    println!("pi_m err {:.2e}", est.proj_min.abs());
    println!("pi_M err {:.2e}", (est.proj_max - 1.0).abs());
    println!("y_M  err {:.2e}", (est.height - 0.375).abs());
}
