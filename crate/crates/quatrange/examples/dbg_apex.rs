use quatrange::bild::{boundary_functions, center_upper, left_derivatives, ProbeSchedule};
use quatrange::qmatrix::QMatrix;
use quatrange::quat::Quaternion;
use quatrange::sampler::{upper_hull, HullParams};
use std::time::Instant;

fn main() {
    let q = |a0: f64, a1: f64| Quaternion::from_complex(a0, a1);
    let a = QMatrix::from_rows(vec![
        vec![q(0.0, 0.125), q(0.25, 0.0)],
        vec![q(-0.25, 0.0), q(1.0, 0.125)],
    ]).unwrap();
    let t0 = Instant::now();
    let est = upper_hull(&a, &HullParams::default()).unwrap();
    let bf = boundary_functions(&est).unwrap();
    let tp = left_derivatives(&bf, &ProbeSchedule::default()).unwrap();
    let cr = center_upper(&est, &tp);
    let apex = cr.apex.unwrap();
    let sq3 = 3.0f64.sqrt();
    println!("time {:.2}s", t0.elapsed().as_secs_f64());
    println!("a err {:+.3e}  b err {:+.3e}", tp.a - 2.0*sq3/3.0, tp.b + 2.0*sq3/3.0);
    println!("a secants {:?}", tp.a_secants);
    println!("apex ({:.6}, {:.6}) dist {:.3e}",
        apex.x, apex.y, (apex.x - 0.5).hypot(apex.y - 0.375));
}
