//! Orbit sizes for a = (2, 2, -2) against the published table, plus the
//! tiny orbits that exist for every p.

use markoff_lab::special::{table_22m2, tiny_orbits_22m2};
use markoff_lab::Prime;

fn main() -> markoff_lab::Result<()> {
    for row in table_22m2(43)? {
        println!("p={:<3} {:<40} {:?}", row.p, row.computed, row.status);
    }
    let rep = tiny_orbits_22m2(Prime::new(101)?)?;
    println!("\ntiny orbits at p = 101: all present = {}", rep.passed());
    for o in &rep.orbits {
        println!("  {:<9} size {}", o.kind, o.expected_size);
    }
    Ok(())
}
