//! Orbits of the group generated by the three Vieta moves.

use markoff_lab::enumeration::enumerate_solutions;
use markoff_lab::orbits::{compute_orbits, verify_divisibility};
use markoff_lab::{Prime, SurfaceParams};

fn main() -> markoff_lab::Result<()> {
    let p = Prime::new(13)?;
    for a in [[0, 0, 0], [1, 3, 5], [2, 2, -2]] {
        let sp = SurfaceParams::new(p, a);
        let part = compute_orbits(enumerate_solutions(&sp)?);
        let div = verify_divisibility(&part)?;
        println!("{sp}\n  table: {}\n  every size divisible by p: {} (asserted: {})", part.size_table(), div.failures.is_empty(), div.asserted);
        for o in part.orbits().iter().take(3) {
            println!("  orbit of size {:>3} through {}", o.size, o.rep);
        }
    }
    Ok(())
}
