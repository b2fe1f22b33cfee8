//! Build the angle-function certificate and watch it force `p | |orbit|`.

use markoff_lab::delta::{build_assignment, verify_certificate};
use markoff_lab::enumeration::enumerate_solutions;
use markoff_lab::orbits::compute_orbits;
use markoff_lab::{Error, Prime, SurfaceParams};

fn main() -> markoff_lab::Result<()> {
    let p = Prime::new(11)?;
    let sp = SurfaceParams::new(p, [1, 3, 5]);
    let part = compute_orbits(enumerate_solutions(&sp)?);
    let asg = build_assignment(&part)?;
    let rep = verify_certificate(&part, &asg)?;
    println!("{sp}: {} points, {} zero cycles, passed={}", rep.points, rep.cycles, rep.passed());
    for o in &rep.orbits {
        println!("  orbit size {:>4}: size mod p = {}, divisible = {}", o.size, o.size_mod_p, o.derived_divisible);
    }

    // a_2 = 2 breaks the hypothesis and no assignment exists
    let bad = SurfaceParams::new(p, [2, 2, -2]);
    match build_assignment(&compute_orbits(enumerate_solutions(&bad)?)) {
        Err(e @ Error::NoConsistentExtension { .. }) => println!("{bad}: {e}"),
        other => println!("{bad}: unexpected {:?}", other.map(|a| a.cycles)),
    }
    Ok(())
}
