//! Special-form parameters split into several orbits; the quadratic
//! characters of the obstruction explain the split.

use markoff_lab::obstruction::verify_breakup;
use markoff_lab::{Prime, SurfaceParams};

fn main() -> markoff_lab::Result<()> {
    for (p, a) in [(7, [2, 3, 3]), (5, [2, 4, 4]), (13, [-2, 5, -5]), (11, [2, 2, 2]), (13, [2, -2, -2])] {
        let sp = SurfaceParams::new(Prime::new(p)?, a);
        let r = verify_breakup(&sp)?;
        println!(
            "{sp:<22} sigma={:>2} alpha={:>3}  orbits {:?}  conjectured {:?}  classes {:?}",
            r.form.sigma, r.form.alpha, r.orbit_sizes, r.conjectured_sizes, r.class_sizes
        );
    }
    Ok(())
}
