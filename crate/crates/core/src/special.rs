//! Two parameter families where divisibility fails: `a = (2, 2, -2)`, whose
//! small orbits come in fixed shapes, and `a = (0, 0, -3)` with `s = 0`,
//! where the moves are linear on each slice `x3 = t`. Also the Markoff
//! surface mod 3.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Write};

use serde::Serialize;

use crate::enumeration::enumerate_solutions;
use crate::error::{domain, Result};
use crate::field::{chi, mult_order, Fp, Fp2, Prime};
use crate::orbits::{compute_orbits, format_size_table, orbit_by_bfs, parse_size_table};
use crate::surface::{Coord, SurfaceParams, Triple};

/// 2x2 matrix acting on `(x1, x2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mat2(pub [[Fp; 2]; 2]);

impl Mat2 {
    pub fn identity(p: Prime) -> Self {
        Mat2([[p.one(), p.zero()], [p.zero(), p.one()]])
    }

    pub fn apply(&self, v: (Fp, Fp)) -> (Fp, Fp) {
        let m = &self.0;
        (m[0][0] * v.0 + m[0][1] * v.1, m[1][0] * v.0 + m[1][1] * v.1)
    }

    /// `self * rhs`: apply `rhs` first.
    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let e = |r: usize, c: usize| a[r][0] * b[0][c] + a[r][1] * b[1][c];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn trace(&self) -> Fp {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Fp {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }
}

/// `m1: x1 -> -x1 + 3 x2` and `m2: x2 -> -x2 + 3 x1` for `a = (0, 0, -3)`.
pub fn dihedral_generators(p: Prime) -> (Mat2, Mat2) {
    let e = |v| p.elem(v);
    (Mat2([[e(-1), e(3)], [e(0), e(1)]]), Mat2([[e(1), e(0)], [e(3), e(-1)]]))
}

pub fn params_00m3(p: Prime) -> SurfaceParams {
    SurfaceParams::new(p, [0, 0, -3])
}

/// `lambda = (7 + 3 sqrt 5) / 2`, in F_p or F_{p^2}.
pub fn lambda(p: Prime) -> Fp2 {
    let r5 = Fp2::sqrt_of(p.elem(5));
    (r5.scale(p.elem(3)) + Fp2::embed(p.elem(7))).scale(p.elem(2).inv().expect("p odd"))
}

/// `theta = (3 + sqrt 5) / 2`, a square root of `lambda`.
pub fn theta(p: Prime) -> Fp2 {
    let r5 = Fp2::sqrt_of(p.elem(5));
    (r5 + Fp2::embed(p.elem(3))).scale(p.elem(2).inv().expect("p odd"))
}

/// Whether 5 is a square mod `p`, and the multiplicative order of `lambda`.
pub fn lambda_order(p: Prime) -> Result<(bool, u64)> {
    p.require_at_least(7)?;
    Ok((chi(p.elem(5)) == 1, mult_order(lambda(p))?))
}

/// Nonzero points of `x1^2 + x2^2 - 3 x1 x2 + t^2 = 0`, sorted.
pub fn conic_points(p: Prime, t: Fp) -> Vec<(Fp, Fp)> {
    let mut out = Vec::new();
    for x1 in p.elements() {
        for x2 in p.elements() {
            if (x1 * x1 + x2 * x2 - x1 * x2 * 3 + t * t).is_zero() && !(t.is_zero() && x1.is_zero() && x2.is_zero()) {
                out.push((x1, x2));
            }
        }
    }
    out
}

/// Orbit sizes (descending) of a finite set under maps that preserve it.
pub fn orbit_sizes_under<T: Ord + Copy>(points: &[T], maps: &[&dyn Fn(&T) -> T]) -> Vec<u64> {
    let mut sorted: Vec<T> = points.to_vec();
    sorted.sort();
    let index = |x: &T| sorted.binary_search(x).expect("map leaves the set");
    let mut comp = vec![usize::MAX; sorted.len()];
    let mut sizes = Vec::new();
    for start in 0..sorted.len() {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        comp[start] = id;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(k) = stack.pop() {
            size += 1;
            for f in maps {
                let j = index(&f(&sorted[k]));
                if comp[j] == usize::MAX {
                    comp[j] = id;
                    stack.push(j);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Orbit count by the average number of fixed points over the dihedral
/// group `{rho^k, m1 rho^k}` with `rho = m2 m1` of order `n`.
pub fn burnside_count(points: &[(Fp, Fp)], m1: &Mat2, rho: &Mat2, n: u64) -> Result<(u64, u64)> {
    let p = m1.0[0][0].modulus();
    let mut total = 0u64;
    let mut reflection_fixed = 0u64;
    let mut r = Mat2::identity(p);
    for _ in 0..n {
        let refl = m1.mul(&r);
        total += points.iter().filter(|&&v| r.apply(v) == v).count() as u64;
        let f = points.iter().filter(|&&v| refl.apply(v) == v).count() as u64;
        total += f;
        reflection_fixed += f;
        r = rho.mul(&r);
    }
    if r != Mat2::identity(p) {
        return Err(domain(format!("rho does not have order {n}")));
    }
    if !total.is_multiple_of(2 * n) {
        return Err(domain("fixed-point average is not an integer"));
    }
    Ok((total / (2 * n), reflection_fixed))
}

#[derive(Clone, Debug, Serialize)]
pub struct DihedralReport {
    pub p: u64,
    pub sqrt5_in_fp: bool,
    pub lambda_order: u64,
    /// Closed forms.
    pub conic1_orbits: u64,
    pub conic0_orbits: u64,
    /// Breadth-first search under `m1, m2`.
    pub bfs_conic1: u64,
    pub bfs_conic0: u64,
    pub burnside_conic1: u64,
    pub burnside_conic0: u64,
    pub conic1_sizes: Vec<u64>,
    pub conic0_sizes: Vec<u64>,
    /// Fixed points of all reflections on `x3 = 0`.
    pub conic0_reflection_fixed: u64,
    /// Orbits of `m1, m2, m3` on `x3 = +-1`.
    pub full_action_pm1_sizes: Vec<u64>,
}

impl DihedralReport {
    pub fn agrees(&self) -> bool {
        self.conic1_orbits == self.bfs_conic1
            && self.bfs_conic1 == self.burnside_conic1
            && self.conic0_orbits == self.bfs_conic0
            && self.bfs_conic0 == self.burnside_conic0
    }

    pub fn summary(&self) -> String {
        let sizes: Vec<String> = self.conic1_sizes.iter().map(u64::to_string).collect();
        format!(
            "ord(lambda)={}; conic1 orbits={} ({}); conic0 orbits={}",
            self.lambda_order,
            self.bfs_conic1,
            sizes.join(","),
            self.bfs_conic0
        )
    }
}

pub fn orbits_00_minus3(p: Prime) -> Result<DihedralReport> {
    let (sqrt5, n) = lambda_order(p)?;
    let pv = p.get();
    let (m1, m2) = dihedral_generators(p);
    let rho = m2.mul(&m1);
    let step1 = |v: &(Fp, Fp)| m1.apply(*v);
    let step2 = |v: &(Fp, Fp)| m2.apply(*v);

    let conic1 = conic_points(p, p.one());
    let conic0 = conic_points(p, p.zero());
    let conic1_sizes = orbit_sizes_under(&conic1, &[&step1, &step2]);
    let conic0_sizes = orbit_sizes_under(&conic0, &[&step1, &step2]);
    let (burnside1, _) = burnside_count(&conic1, &m1, &rho, n)?;
    let (burnside0, refl0) = burnside_count(&conic0, &m1, &rho, n)?;

    let c5 = chi(p.elem(5));
    let conic1_formula = ((pv as i64 - c5 as i64) as u64 / n) / 2 + u64::from(sqrt5);
    let conic0_formula = if sqrt5 { (pv - 1) / n } else { 0 };

    let params = params_00m3(p);
    let mut pm1: Vec<Triple> = conic1.iter().map(|&(a, b)| Triple([a, b, p.one()])).collect();
    pm1.extend(conic_points(p, -p.one()).iter().map(|&(a, b)| Triple([a, b, -p.one()])));
    let mv = |c: Coord| move |x: &Triple| params.apply_move(x, c);
    let (f1, f2, f3) = (mv(Coord::X1), mv(Coord::X2), mv(Coord::X3));
    let full_action_pm1_sizes = orbit_sizes_under(&pm1, &[&f1, &f2, &f3]);

    Ok(DihedralReport {
        p: pv,
        sqrt5_in_fp: sqrt5,
        lambda_order: n,
        conic1_orbits: conic1_formula,
        conic0_orbits: conic0_formula,
        bfs_conic1: conic1_sizes.len() as u64,
        bfs_conic0: conic0_sizes.len() as u64,
        burnside_conic1: burnside1,
        burnside_conic0: burnside0,
        conic1_sizes,
        conic0_sizes,
        conic0_reflection_fixed: refl0,
        full_action_pm1_sizes,
    })
}

/// Checks that `x -> t x` carries the slice `x3 = 1` onto `x3 = t` and
/// commutes with all three moves, for every `t != 0`.
pub fn scaling_commutes_00m3(p: Prime) -> bool {
    let params = params_00m3(p);
    let conic1 = conic_points(p, p.one());
    p.elements().skip(1).all(|t| {
        let target: BTreeSet<(Fp, Fp)> = conic_points(p, t).into_iter().collect();
        let image: BTreeSet<(Fp, Fp)> = conic1.iter().map(|&(a, b)| (a * t, b * t)).collect();
        image == target
            && conic1.iter().all(|&(a, b)| {
                let x = Triple([a, b, p.one()]);
                Coord::ALL.iter().all(|&c| params.apply_move(&x.scale(t), c) == params.apply_move(&x, c).scale(t))
            })
    })
}

/// A point template `X / s` for `a = (2, 2, -2)`.
fn at(params: &SurfaceParams, x: [i64; 3]) -> Triple {
    let s_inv = params.s().inv().expect("s != 0");
    params.triple(x).scale(s_inv)
}

/// One small orbit shape and the outcome of validating it.
#[derive(Clone, Debug, Serialize)]
pub struct TinyOrbit {
    pub kind: &'static str,
    pub points: Vec<Triple>,
    pub expected_size: usize,
    pub on_surface: bool,
    pub structure_ok: bool,
    pub bfs_size: usize,
}

impl TinyOrbit {
    pub fn ok(&self) -> bool {
        self.on_surface && self.structure_ok && self.bfs_size == self.expected_size
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TinyOrbitReport {
    pub p: u64,
    pub orbits: Vec<TinyOrbit>,
}

impl TinyOrbitReport {
    pub fn passed(&self) -> bool {
        self.orbits.iter().all(TinyOrbit::ok)
    }
}

/// The three singletons, three barbells and four tripods of `a = (2, 2, -2)`.
pub fn tiny_orbits_22m2(p: Prime) -> Result<TinyOrbitReport> {
    p.require_at_least(3)?;
    let params = SurfaceParams::new(p, [2, 2, -2]);
    if params.s().is_zero() {
        return Err(domain(format!("s = 0 for p = {p}")));
    }
    let [m1, m2, m3] = Coord::ALL;
    let mv = |x: &Triple, c: Coord| params.apply_move(x, c);
    let fixed_except = |x: &Triple, c: Option<Coord>| Coord::ALL.iter().filter(|&&d| Some(d) != c).all(|&d| mv(x, d) == *x);
    let mut orbits = Vec::new();

    for x in [[4, 4, 0], [4, 0, -4], [0, 4, -4]] {
        let x = at(&params, x);
        orbits.push(TinyOrbit {
            kind: "singleton",
            points: vec![x],
            expected_size: 1,
            on_surface: params.on_surface(&x),
            structure_ok: fixed_except(&x, None),
            bfs_size: 0,
        });
    }
    for (a, b, c) in [([0, 2, -2], [4, 2, -2], m1), ([2, 0, -2], [2, 4, -2], m2), ([2, 2, 0], [2, 2, -4], m3)] {
        let (a, b) = (at(&params, a), at(&params, b));
        orbits.push(TinyOrbit {
            kind: "barbell",
            points: vec![a, b],
            expected_size: 2,
            on_surface: params.on_surface(&a) && params.on_surface(&b),
            structure_ok: a != b && mv(&a, c) == b && fixed_except(&a, Some(c)) && fixed_except(&b, Some(c)),
            bfs_size: 0,
        });
    }
    // centre, then the leaves reached by m1, m2, m3
    let tripods = [
        ([3, 3, -3], [[0, 3, -3], [3, 0, -3], [3, 3, 0]]),
        ([3, 1, -1], [[0, 1, -1], [3, 4, -1], [3, 1, -4]]),
        ([1, 3, -1], [[4, 3, -1], [1, 0, -1], [1, 3, -4]]),
        ([1, 1, -3], [[4, 1, -3], [1, 4, -3], [1, 1, 0]]),
    ];
    for (centre, leaves) in tripods {
        let centre = at(&params, centre);
        let leaves = leaves.map(|l| at(&params, l));
        let mut points = vec![centre];
        points.extend(leaves);
        let distinct = points.iter().collect::<BTreeSet<_>>().len() == 4;
        let structure_ok = distinct
            && Coord::ALL.iter().zip(&leaves).all(|(&c, leaf)| mv(&centre, c) == *leaf && fixed_except(leaf, Some(c)));
        orbits.push(TinyOrbit {
            kind: "tripod",
            on_surface: points.iter().all(|x| params.on_surface(x)),
            points,
            expected_size: 4,
            structure_ok,
            bfs_size: 0,
        });
    }
    for o in &mut orbits {
        o.bfs_size = orbit_by_bfs(&params, &o.points[0], 64).map_or(usize::MAX, |v| v.len());
    }
    Ok(TinyOrbitReport { p: p.get(), orbits })
}

/// The Markoff surface mod 3.
#[derive(Clone, Debug, Serialize)]
pub struct CubeReport {
    pub points: Vec<Triple>,
    pub table: String,
    /// Every move negates its coordinate.
    pub moves_are_negation: bool,
    /// The move graph is the 3-cube: points are the sign patterns
    /// `(+-1, +-1, +-1)` and `m_i` flips sign `i`.
    pub is_cube: bool,
}

impl CubeReport {
    pub fn passed(&self) -> bool {
        self.table == "8^1" && self.moves_are_negation && self.is_cube
    }
}

pub fn markoff_p3() -> Result<CubeReport> {
    let p = Prime::new(3)?;
    let params = SurfaceParams::new(p, [0, 0, 0]);
    let part = compute_orbits(enumerate_solutions(&params)?);
    let points = part.solutions().points().to_vec();
    let moves_are_negation = points
        .iter()
        .all(|x| Coord::ALL.iter().all(|&c| params.apply_move(x, c) == x.with(c, -x.get(c))));
    // bit c of a vertex is set when x_c = -1; adjacency must be a single bit flip
    let bits = |x: &Triple| Coord::ALL.iter().fold(0u8, |acc, &c| acc | (u8::from(x.get(c) == -p.one()) << c.idx()));
    let vertex_set: BTreeSet<u8> = points.iter().map(bits).collect();
    let is_cube = points.len() == 8
        && vertex_set.len() == 8
        && points.iter().all(|x| x.0.iter().all(|v| !v.is_zero()))
        && points.iter().all(|x| Coord::ALL.iter().all(|&c| bits(&params.apply_move(x, c)) == bits(x) ^ (1 << c.idx())));
    Ok(CubeReport { points, table: part.size_table(), moves_are_negation, is_cube })
}

/// Orbit tables for `a = (2, 2, -2)` as printed in the literature, `p <= 43`.
pub const PUBLISHED_TABLE_22M2: [(u64, &str); 14] = [
    (2, "4^1"),
    (3, "1^3, 2^3"),
    (5, "12^2"),
    (7, "1^3, 2^3, 4^3, 8^3"),
    (11, "1^3, 2^3, 4^3, 12^4, 16^3"),
    (13, "1^3, 2^3, 4^4, 16^3, 24^4"),
    (17, "1^3, 2^3, 4^4, 8^3, 32^3, 36^4"),
    (19, "1^3, 2^3, 4^3, 12^4, 36^4, 48^3"),
    (23, "1^3, 2^3, 4^3, 8^3, 16^3, 60^4, 64^3"),
    (29, "1^3, 2^3, 4^3, 12^4, 24^4, 96^7"),
    (31, "1^3, 2^3, 4^3, 8^3, 12^4, 32^3, 96^4, 128^3"),
    (37, "1^3, 2^3, 4^3, 16^3, 36^4, 144^3, 180^4"),
    (41, "1^3, 2^3, 4^3, 8^3, 12^4, 24^4, 48^3, 192^7"),
    (43, "1^3, 2^3, 4^3, 24^4, 60^4, 192^4, 240^3"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RowStatus {
    Match,
    /// The printed row lists three orbits of size 4 where there are four.
    MatchAfterTripodFix,
    Mismatch,
    Unpublished,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub p: u64,
    pub computed: String,
    pub total: u64,
    pub printed: Option<String>,
    pub status: RowStatus,
}

pub fn compare_row(computed: &BTreeMap<u64, u64>, printed: Option<&str>) -> RowStatus {
    let Some(printed) = printed else { return RowStatus::Unpublished };
    let Some(mut pm) = parse_size_table(printed) else { return RowStatus::Mismatch };
    let total: u64 = computed.iter().map(|(c, d)| c * d).sum();
    let printed_total: u64 = pm.iter().map(|(c, d)| c * d).sum();
    if printed_total == total {
        return if pm == *computed { RowStatus::Match } else { RowStatus::Mismatch };
    }
    if printed_total + 4 == total && pm.get(&4) == Some(&3) {
        pm.insert(4, 4);
        if pm == *computed {
            return RowStatus::MatchAfterTripodFix;
        }
    }
    RowStatus::Mismatch
}

/// Recomputes the `(2, 2, -2)` orbit table for every prime up to `max_p`.
pub fn table_22m2(max_p: u64) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for n in 2..=max_p {
        let Ok(p) = Prime::new(n) else { continue };
        let part = compute_orbits(enumerate_solutions(&SurfaceParams::new(p, [2, 2, -2]))?);
        let printed = PUBLISHED_TABLE_22M2.iter().find(|(q, _)| *q == n).map(|(_, r)| *r);
        rows.push(TableRow {
            p: n,
            computed: format_size_table(part.multiset()),
            total: part.total(),
            printed: printed.map(str::to_owned),
            status: compare_row(part.multiset(), printed),
        });
    }
    Ok(rows)
}

/// CSV with header `p,orbit_sizes`.
pub fn write_table_csv<W: Write>(rows: &[TableRow], mut out: W) -> io::Result<()> {
    writeln!(out, "p,orbit_sizes")?;
    for r in rows {
        writeln!(out, "{},\"{}\"", r.p, r.computed)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_order(pr(89)).unwrap(), (true, 11));
        assert_eq!(lambda_order(pr(11)).unwrap(), (true, 5));
        assert_eq!(lambda_order(pr(13)).unwrap(), (false, 7));
        assert!(lambda_order(pr(5)).is_err());
    }

    #[test]
    fn theta_squares_to_lambda() {
        for p in [7u64, 11, 13, 29, 31, 89] {
            let p = pr(p);
            let t = theta(p);
            assert_eq!(t * t, lambda(p));
            assert_eq!(t * t, t.scale(p.elem(3)) - Fp2::embed(p.one()));
        }
    }

    #[test]
    fn matrices() {
        let p = pr(31);
        let (m1, m2) = dihedral_generators(p);
        let rho = m2.mul(&m1);
        assert_eq!(rho.trace(), p.elem(7));
        assert_eq!(rho.det(), p.one());
    }

    #[test]
    fn p89_worked_example() {
        let r = orbits_00_minus3(pr(89)).unwrap();
        assert!(r.agrees());
        assert_eq!(r.summary(), "ord(lambda)=11; conic1 orbits=5 (22,22,22,11,11); conic0 orbits=8");
    }

    #[test]
    fn small_dihedral_cases() {
        let r = orbits_00_minus3(pr(13)).unwrap();
        assert_eq!((r.conic1_orbits, r.conic0_orbits), (1, 0));
        assert!(r.agrees());
        let r = orbits_00_minus3(pr(11)).unwrap();
        assert_eq!((r.conic1_orbits, r.conic0_orbits), (2, 2));
        assert!(r.agrees());
        assert_eq!(r.conic0_reflection_fixed, 0);
    }

    #[test]
    fn tiny_orbits() {
        for p in [7u64, 11, 13, 17, 19, 23] {
            let r = tiny_orbits_22m2(pr(p)).unwrap();
            assert!(r.passed(), "p = {p}: {r:?}");
        }
        assert!(tiny_orbits_22m2(pr(5)).is_err());
    }

    #[test]
    fn cube() {
        let r = markoff_p3().unwrap();
        assert!(r.passed());
        assert_eq!(r.table, "8^1");
    }

    #[test]
    fn row_comparison() {
        let m = parse_size_table("1^3, 2^3, 4^4, 8^3").unwrap();
        assert_eq!(compare_row(&m, Some("1^3, 2^3, 4^3, 8^3")), RowStatus::MatchAfterTripodFix);
        assert_eq!(compare_row(&m, Some("1^3, 2^3, 4^4, 8^3")), RowStatus::Match);
        assert_eq!(compare_row(&m, Some("1^3, 2^3, 4^4, 7^3")), RowStatus::Mismatch);
        assert_eq!(compare_row(&m, None), RowStatus::Unpublished);
    }
}
