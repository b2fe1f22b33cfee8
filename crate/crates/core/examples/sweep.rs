//! Count formula, divisibility and certificate over many parameter sets.

use markoff_lab::enumeration::primes_in;
use markoff_lab::sweep::{run_sweep, summarize, SweepMode, SweepOptions};

fn main() -> markoff_lab::Result<()> {
    let opts = SweepOptions { certificate: true };
    let small = run_sweep(&primes_in(5, 7), SweepMode::Exhaustive, 0, opts)?;
    println!("exhaustive p = 5, 7: {:?}", summarize(&small));
    let large = run_sweep(&primes_in(17, 41), SweepMode::Samples(20), 42, opts)?;
    println!("20 random sets per prime 17..41: {:?}", summarize(&large));
    Ok(())
}
