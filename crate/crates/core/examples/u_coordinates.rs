//! The substitution u_i = s x_i - a_i turns the moves into the Markoff-like
//! form u_i -> -u_i + u_{i-1} u_{i+1} - 2 a_i - a_{i-1} a_{i+1}.

use markoff_lab::enumeration::enumerate_solutions;
use markoff_lab::surface::Coord;
use markoff_lab::{Prime, SurfaceParams};

fn main() -> markoff_lab::Result<()> {
    let sp = SurfaceParams::new(Prime::new(17)?, [3, -1, 4]);
    let sol = enumerate_solutions(&sp)?;
    let mut ok = true;
    for x in sol.points() {
        for i in Coord::ALL {
            ok &= sp.u_move_equivariance(x, i);
        }
    }
    let x = sol.points()[7];
    let u = sp.u_coords(&x);
    println!("{sp}\nx = {x}  u = {:?}  u-residual = {}", u.0.map(|v| v.value()), sp.u_residual(&u));
    println!("moves commute with the change of coordinates on all {} points: {ok}", sol.len());
    Ok(())
}
