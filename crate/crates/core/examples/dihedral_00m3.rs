//! For a = (0, 0, -3) the planes x3 = 0 and x3 = 1 carry a dihedral action
//! whose orbits are predicted by the order of lambda = (7 + 3 sqrt 5) / 2.

use markoff_lab::special::orbits_00_minus3;
use markoff_lab::Prime;

fn main() -> markoff_lab::Result<()> {
    for p in [7, 11, 29, 41, 89, 101] {
        let r = orbits_00_minus3(Prime::new(p)?)?;
        println!("p={p:<4} {}  agrees={}", r.summary(), r.agrees());
    }
    Ok(())
}
