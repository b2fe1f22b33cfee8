//! Materializing the nonzero solution set and the coordinate-zero loci.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{chi, sqrt_mod, FieldTables, Fp, Prime};
use crate::surface::{Coord, SurfaceParams, Triple};

/// Default cap on `p` for full enumeration (about `p^2` points).
pub const DEFAULT_MAX_PRIME: u64 = 20_000;

/// All nonzero solutions, sorted lexicographically by integer coordinates.
///
/// Lookup uses per-`x1` row offsets and a binary search inside the row, so
/// the index costs O(p) memory.
#[derive(Clone, Debug)]
pub struct SolutionSet {
    params: SurfaceParams,
    points: Vec<Triple>,
    row_start: Vec<usize>,
}

impl SolutionSet {
    pub fn params(&self) -> &SurfaceParams {
        &self.params
    }

    pub fn points(&self) -> &[Triple] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The origin is always excluded.
    pub fn includes_origin(&self) -> bool {
        false
    }

    /// Position of `x` in [`points`](Self::points).
    pub fn index_of(&self, x: &Triple) -> Option<usize> {
        let row = x.get(Coord::X1).value() as usize;
        let (lo, hi) = (self.row_start[row], self.row_start[row + 1]);
        self.points[lo..hi].binary_search(x).ok().map(|k| lo + k)
    }

    pub fn contains(&self, x: &Triple) -> bool {
        self.index_of(x).is_some()
    }

    /// Writes `x1,x2,x3` lines.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for x in &self.points {
            let [a, b, c] = x.values();
            writeln!(out, "{a},{b},{c}")?;
        }
        Ok(())
    }

    fn from_sorted(params: SurfaceParams, points: Vec<Triple>) -> Self {
        let p = params.prime().get() as usize;
        let mut row_start = vec![0usize; p + 1];
        for x in &points {
            row_start[x.get(Coord::X1).value() as usize + 1] += 1;
        }
        for r in 0..p {
            row_start[r + 1] += row_start[r];
        }
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        SolutionSet { params, points, row_start }
    }
}

/// Enumerates with the default prime cap.
pub fn enumerate_solutions(params: &SurfaceParams) -> Result<SolutionSet> {
    enumerate_solutions_capped(params, DEFAULT_MAX_PRIME)
}

/// Solves for `x3` given each `(x1, x2)`:
/// `x3^2 + (a1 x2 + a2 x1 - s x1 x2) x3 + (x1^2 + x2^2 + a3 x1 x2) = 0`.
pub fn enumerate_solutions_capped(params: &SurfaceParams, max_prime: u64) -> Result<SolutionSet> {
    let p = params.prime();
    if p.get() > max_prime {
        return Err(Error::ResourceLimit { p: p.get(), cap: max_prime });
    }
    if !p.is_odd() {
        return Ok(SolutionSet::from_sorted(*params, scan_cube(params)));
    }
    let tables = FieldTables::new(p);
    let [a1, a2, a3] = params.a_all();
    let s = params.s();
    let rows: Vec<Vec<Triple>> = p
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|x1| {
            let mut row = Vec::with_capacity(p.get() as usize + 2);
            for x2 in p.elements() {
                let b = a1 * x2 + a2 * x1 - s * x1 * x2;
                let c = x1 * x1 + x2 * x2 + a3 * x1 * x2;
                let disc = b * b - c * 4;
                let Some(r) = tables.sqrt(disc) else { continue };
                let r1 = (-b - r).half();
                let r2 = (-b + r).half();
                let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
                let x = Triple([x1, x2, lo]);
                if !x.is_origin() {
                    row.push(x);
                }
                if hi != lo {
                    let y = Triple([x1, x2, hi]);
                    if !y.is_origin() {
                        row.push(y);
                    }
                }
            }
            row
        })
        .collect();
    let points = rows.concat();
    Ok(SolutionSet::from_sorted(*params, points))
}

/// Direct scan of all `p^3` triples; the reference route for small `p`.
pub fn scan_cube(params: &SurfaceParams) -> Vec<Triple> {
    let p = params.prime();
    let mut out = Vec::new();
    for x1 in p.elements() {
        for x2 in p.elements() {
            for x3 in p.elements() {
                let x = Triple([x1, x2, x3]);
                if !x.is_origin() && params.on_surface(&x) {
                    out.push(x);
                }
            }
        }
    }
    out
}

/// Roots `r` of `r^2 + a_i r + 1 = 0` in F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocusRoots {
    /// `chi(a_i^2 - 4) = -1`: no roots, only the origin has `x_i = 0`.
    Absent,
    /// `a_i^2 = 4`: the double root `-a_i / 2`.
    Double(Fp),
    /// Two roots `r` and `1 / r`, smaller residue first.
    Pair(Fp, Fp),
}

impl LocusRoots {
    pub fn to_vec(self) -> Vec<Fp> {
        match self {
            LocusRoots::Absent => vec![],
            LocusRoots::Double(r) => vec![r],
            LocusRoots::Pair(r, s) => vec![r, s],
        }
    }
}

/// Nonzero solutions with `x_i = 0`: the lines `x_{i+1} = r x_{i-1}`.
#[derive(Clone, Debug)]
pub struct ZeroLocus {
    pub coord: Coord,
    pub roots: LocusRoots,
    /// Sorted lexicographically.
    pub points: Vec<Triple>,
}

pub fn zero_locus(params: &SurfaceParams, i: Coord) -> Result<ZeroLocus> {
    let p = params.prime();
    p.require_odd()?;
    let ai = params.a(i);
    let disc = ai * ai - 4;
    let roots = match sqrt_mod(disc) {
        None => LocusRoots::Absent,
        Some(sq) => {
            let root = sq.smallest();
            if root.is_zero() {
                LocusRoots::Double((-ai).half())
            } else {
                let r1 = (-ai + root).half();
                let r2 = (-ai - root).half();
                LocusRoots::Pair(r1.min(r2), r1.max(r2))
            }
        }
    };
    debug_assert!(roots.to_vec().iter().all(|&r| (r * r + ai * r + 1).is_zero()));
    debug_assert_eq!(roots == LocusRoots::Absent, chi(disc) == -1);
    let mut points = Vec::new();
    for r in roots.to_vec() {
        for t in p.elements().skip(1) {
            let x = Triple::origin(p).with(i.prev(), t).with(i.next(), r * t);
            points.push(x);
        }
    }
    points.sort();
    Ok(ZeroLocus { coord: i, roots, points })
}

/// Number of nonzero solutions by direct cube scan.
pub fn brute_force_count(params: &SurfaceParams) -> u64 {
    scan_cube(params).len() as u64
}

/// Convenience for tests and examples: every prime in `[lo, hi]`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<Prime> {
    (lo..=hi).filter_map(|n| Prime::new(n).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_solutions(&SurfaceParams::new(pr(3), [0, 0, 0])).unwrap().len(), 8);
        assert_eq!(enumerate_solutions(&SurfaceParams::new(pr(5), [0, 0, 0])).unwrap().len(), 40);
        assert_eq!(enumerate_solutions(&SurfaceParams::new(pr(7), [2, 2, -2])).unwrap().len(), 49);
        assert_eq!(enumerate_solutions(&SurfaceParams::new(pr(2), [0, 0, 0])).unwrap().len(), 4);
    }

    #[test]
    fn enumeration_matches_cube_scan() {
        for p in [3u64, 5, 7] {
            let p = pr(p);
            for a in [[0, 0, 0], [1, 1, 1], [2, 2, -2], [0, 0, -3], [2, 3, 3], [4, 1, 6]] {
                let sp = SurfaceParams::new(p, a);
                let set = enumerate_solutions(&sp).unwrap();
                assert_eq!(set.points(), scan_cube(&sp).as_slice(), "{sp}");
                for (k, x) in set.points().iter().enumerate() {
                    assert_eq!(set.index_of(x), Some(k));
                }
                assert_eq!(set.index_of(&Triple::origin(p)), None);
            }
        }
    }

    #[test]
    fn resource_cap() {
        let sp = SurfaceParams::new(pr(101), [0, 0, 0]);
        assert_eq!(
            enumerate_solutions_capped(&sp, 100).unwrap_err(),
            Error::ResourceLimit { p: 101, cap: 100 }
        );
    }

    #[test]
    fn zero_locus_examples() {
        let p5 = pr(5);
        let z = zero_locus(&SurfaceParams::new(p5, [0, 0, 0]), Coord::X1).unwrap();
        assert_eq!(z.roots, LocusRoots::Pair(p5.elem(2), p5.elem(3)));
        assert_eq!(z.points.len(), 8);

        let p7 = pr(7);
        let z = zero_locus(&SurfaceParams::new(p7, [1, 1, 1]), Coord::X1).unwrap();
        assert_eq!(z.roots, LocusRoots::Pair(p7.elem(2), p7.elem(4)));
        assert_eq!(z.points.len(), 12);

        let z = zero_locus(&SurfaceParams::new(p7, [0, 0, 3]), Coord::X3).unwrap();
        assert_eq!(z.roots, LocusRoots::Absent);
        assert!(z.points.is_empty());

        let z = zero_locus(&SurfaceParams::new(p7, [2, 3, 3]), Coord::X1).unwrap();
        assert_eq!(z.roots, LocusRoots::Double(p7.elem(-1)));
        assert_eq!(z.points.len(), 6);
    }

    #[test]
    fn csv_export() {
        let set = enumerate_solutions(&SurfaceParams::new(pr(3), [0, 0, 0])).unwrap();
        let mut buf = Vec::new();
        set.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 8);
        assert_eq!(text.lines().next(), Some("1,1,1"));
    }
}
