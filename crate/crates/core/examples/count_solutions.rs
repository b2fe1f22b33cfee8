//! Enumerate the nonzero solutions of one surface and compare with the
//! closed-form count.

use markoff_lab::conics::closed_form_total;
use markoff_lab::enumeration::enumerate_solutions;
use markoff_lab::{Prime, SurfaceParams};

fn main() -> markoff_lab::Result<()> {
    let p = Prime::new(31)?;
    for a in [[0, 0, 0], [1, 2, 3], [2, 2, -2], [2, 3, 3]] {
        let sp = SurfaceParams::new(p, a);
        let sol = enumerate_solutions(&sp)?;
        println!("{sp:<24} class={:<20} enumerated={:>5} formula={:>5}", sp.classify().name(), sol.len(), closed_form_total(&sp)?);
    }
    let sp = SurfaceParams::new(Prime::new(5)?, [1, 1, 1]);
    let sol = enumerate_solutions(&sp)?;
    println!("\nfirst points for {sp}:");
    for x in sol.points().iter().take(5) {
        println!("  {x}");
    }
    Ok(())
}
