//! Point counts of the conic fibres, and the fibre sum that gives the
//! surface count.

use markoff_lab::conics::{brute_force_conic_count, classify_and_count, closed_form_total, fiber_conic, fiber_sum_total, ConicParams};
use markoff_lab::surface::Coord;
use markoff_lab::{Prime, SurfaceParams};

fn main() -> markoff_lab::Result<()> {
    let p = Prime::new(13)?;
    for (b, d, e, f) in [(0, 0, 0, 1), (2, 0, 0, 0), (3, 1, 4, 1), (-2, 1, -1, 0)] {
        let c = ConicParams::new(p, b, d, e, f);
        let (class, n) = classify_and_count(&c)?;
        println!("x^2 + {b}xy + y^2 + {d}x + {e}y + {f}: {class:?}, {n} points (brute force {})", brute_force_conic_count(&c));
    }
    let sp = SurfaceParams::new(p, [1, 2, 4]);
    println!("\nfibre x1 = 3 of {sp}: {:?}", classify_and_count(&fiber_conic(&sp, Coord::X1, p.elem(3)))?);
    println!("fibre sum {} (includes the origin), closed form {}", fiber_sum_total(&sp)?, closed_form_total(&sp)?);
    Ok(())
}
