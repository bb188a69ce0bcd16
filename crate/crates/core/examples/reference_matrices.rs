//! Vectorized collision, rotation and composed channels, compared with their
//! closed-form matrices.

use std::f64::consts::PI;

use colltherm::analytic::{self, reference};
use colltherm::channels::{collision_superoperator, rotation_superoperator, Axis, BathSpec, CollisionSpec, RotationSpec};
use colltherm::linalg::ComplexMatrix;

fn show(label: &str, m: &ComplexMatrix) {
    println!("{label}:");
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format!("{:>7.4}{:+.4}i", m[(i, j)].re, m[(i, j)].im)).collect();
        println!("  [{}]", row.join(", "));
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = 0.3 * PI;
    let (b1, b2) = (BathSpec::new(2.0, 0.0), BathSpec::new(1.0, 0.0));
    let [p, p1] = b1.populations()?;
    let [q, _] = b2.populations()?;

    let e1 = collision_superoperator(&CollisionSpec::from_angle(g), &b1, 2)?;
    let e2 = collision_superoperator(&CollisionSpec::from_angle(g), &b2, 2)?;
    show("collision channel (T = 2)", e1.matrix());
    println!("  max deviation from closed form: {:.2e}\n", e1.matrix().max_abs_diff(&reference::collision(g, p, p1)));

    let rot = rotation_superoperator(&RotationSpec::new(PI / 4.0, Axis::X), 2)?;
    show("rotation exp(-iπσx/4)", rot.matrix());
    println!("  max deviation from closed form: {:.2e}\n", rot.matrix().max_abs_diff(&reference::rotation_quarter_x()));

    let plain = e2.after(&e1);
    show("two collisions, no rotation", plain.matrix());
    println!(
        "  corner entries: v = {:.6} (q sin²g + p sin²g cos²g = {:.6})",
        plain.matrix()[(0, 3)].re,
        analytic::no_rotation_population(g, g, p, q)
    );
    println!(
        "  deviation from the reference block form: {:.2e}",
        plain.matrix().max_abs_diff(&reference::composed_no_rotation(g, p, q))
    );
    println!(
        "  deviation with the two probes' labels exchanged: {:.2e}\n",
        plain.matrix().max_abs_diff(&reference::composed_no_rotation(g, q, p))
    );

    let rotated = e2.after(&rot.after(&e1));
    show("two collisions with rotation", rotated.matrix());
    println!("  max deviation from closed form: {:.2e}", rotated.matrix().max_abs_diff(&reference::composed_with_rotation(g, p, q)));
    Ok(())
}
