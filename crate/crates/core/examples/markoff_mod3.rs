//! The Markoff surface mod 3: eight points, one orbit, the moves act as
//! sign changes and the move graph is a cube.

use markoff_lab::special::markoff_p3;

fn main() -> markoff_lab::Result<()> {
    let r = markoff_p3()?;
    println!("orbits: {}", r.table);
    println!("moves are negations: {}", r.moves_are_negation);
    println!("move graph is the 3-cube: {}", r.is_cube);
    Ok(())
}
