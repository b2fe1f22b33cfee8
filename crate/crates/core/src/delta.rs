//! The angle-function certificate for divisibility of orbit sizes by `p`.
//!
//! Each nonzero solution gets three values `Delta_1, Delta_2, Delta_3` with
//!
//! * `Delta_1 + Delta_2 + Delta_3 = s` at every point,
//! * `Delta_i(x) + Delta_i(m_i x) = s` on every edge,
//! * `Delta_i(x) = s / 2` whenever `m_i x = x`.
//!
//! Summing over an orbit of size `V` gives `s V = (3/2) s V`, so `p | V`.
//! Off the coordinate planes the values come from a closed formula; on the
//! plane `x_i = 0` they are propagated around cycles of the dihedral group
//! generated by `m_{i-1}` and `m_{i+1}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::field::{mult_order, FieldTables, Fp, Fp2};
use crate::orbits::OrbitPartition;
use crate::surface::{Coord, SurfaceParams, Triple};

/// `x_i / (x_{i-1} x_{i+1}) + (a_{i-1} / x_{i-1} + a_{i+1} / x_{i+1}) / 2`.
///
/// Only needs `x_{i-1}, x_{i+1} != 0`, so it also covers `x_i = 0`.
pub fn delta_component(params: &SurfaceParams, x: &Triple, i: Coord) -> Option<Fp> {
    let (ip, inx) = (i.prev(), i.next());
    let inv_p = x.get(ip).inv()?;
    let inv_n = x.get(inx).inv()?;
    Some(x.get(i) * inv_p * inv_n + (params.a(ip) * inv_p + params.a(inx) * inv_n).half())
}

/// All three values at a point with no zero coordinate.
pub fn delta_values(params: &SurfaceParams, x: &Triple) -> Result<[Fp; 3]> {
    if x.zero_coords().next().is_some() {
        return Err(domain(format!("{x} has a zero coordinate; use a zero cycle")));
    }
    Ok(Coord::ALL.map(|c| delta_component(params, x, c).expect("nonzero coordinates")))
}

// table-driven variant used on whole solution sets
fn delta_values_fast(params: &SurfaceParams, tables: &FieldTables, x: &Triple) -> [Fp; 3] {
    let inv = Coord::ALL.map(|c| tables.inv(x.get(c)).expect("nonzero coordinates"));
    Coord::ALL.map(|c| {
        let (ip, inx) = (c.prev().idx(), c.next().idx());
        x.get(c) * inv[ip] * inv[inx] + (params.a(c.prev()) * inv[ip] + params.a(c.next()) * inv[inx]).half()
    })
}

/// `Delta_i` on the plane `x_i = 0`: `(a_{i-1} / x_{i-1} + a_{i+1} / x_{i+1}) / 2`.
pub fn reduced_delta(params: &SurfaceParams, x: &Triple, i: Coord) -> Result<Fp> {
    if !x.get(i).is_zero() {
        return Err(domain(format!("coordinate {i} of {x} is not zero")));
    }
    delta_component(params, x, i).ok_or_else(|| domain("the origin has no angle functions"))
}

/// `rho = m_{i+1} m_{i-1}`: apply `m_{i-1}` first.
pub fn rho(params: &SurfaceParams, x: &Triple, i: Coord) -> Triple {
    params.apply_move(&params.apply_move(x, i.prev()), i.next())
}

/// The slope `r = x_{i+1} / x_{i-1}` of the line through `x` in the plane `x_i = 0`.
pub fn line_ratio(x: &Triple, i: Coord) -> Result<Fp> {
    x.get(i.prev())
        .inv()
        .map(|inv| x.get(i.next()) * inv)
        .ok_or_else(|| domain(format!("{x} is not a nonzero point of the plane x{i} = 0")))
}

/// The dihedral orbit of a point with `x_i = 0` under `m_{i-1}` and `m_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCycle {
    pub coord: Coord,
    pub base: Triple,
    /// Order `N` of `rho`, equal to the multiplicative order of `r^2`.
    pub rho_order: u64,
    /// `x, rho x, ..., rho^{N-1} x, m_{i-1} x, ..., m_{i-1} rho^{N-1} x`.
    /// For `N = 1` both entries equal the base point.
    pub points: Vec<Triple>,
}

impl ZeroCycle {
    pub fn corner(&self, k: usize) -> Triple {
        self.points[k % self.rho_order as usize]
    }

    pub fn midpoint(&self, k: usize) -> Triple {
        let n = self.rho_order as usize;
        self.points[n + k % n]
    }

    /// Sum of `Delta_i(m_{i-1} rho^l x) + Delta_i(rho^l x)` over `l < N`.
    pub fn delta_sum(&self, params: &SurfaceParams) -> Fp {
        self.points
            .iter()
            .map(|y| reduced_delta(params, y, self.coord).expect("points lie on the plane"))
            .sum()
    }
}

pub fn build_zero_cycle(params: &SurfaceParams, x: &Triple, i: Coord) -> Result<ZeroCycle> {
    let p = params.prime();
    p.require_odd()?;
    if !x.get(i).is_zero() || x.is_origin() || !params.on_surface(x) {
        return Err(domain(format!("{x} is not a nonzero solution with x{i} = 0")));
    }
    let r = line_ratio(x, i)?;
    let n = mult_order(Fp2::embed(r * r))?;
    let mut corners = Vec::with_capacity(n as usize);
    let mut y = *x;
    for _ in 0..n {
        corners.push(y);
        y = rho(params, &y, i);
    }
    if y != *x {
        return Err(domain(format!("rho^{n} does not return to {x}")));
    }
    let mids: Vec<Triple> = corners.iter().map(|c| params.apply_move(c, i.prev())).collect();
    let mut points = corners;
    points.extend(mids);
    if n >= 2 {
        let mut sorted = points.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != points.len() {
            return Err(domain(format!("cycle through {x} is degenerate with N = {n}")));
        }
    } else if params.apply_move(x, i.prev()) != *x || params.apply_move(x, i.next()) != *x {
        return Err(domain(format!("{x} has N = 1 but is not doubly fixed")));
    }
    Ok(ZeroCycle { coord: i, base: *x, rho_order: n, points })
}

/// The nine conditions that are all equivalent for a nonzero point with `x_i = 0`:
///
/// 1. `a_i^2 = 4`
/// 2. `r^2 = 1`
/// 3. `N = 1`
/// 4. `r = -a_i / 2`
/// 5. `1 / r = -a_i / 2`
/// 6. `x_{i-1} + (a_i / 2) x_{i+1} = 0`
/// 7. `x_{i-1}^2 = x_{i+1}^2`
/// 8. `m_{i-1} x = x`
/// 9. `m_{i+1} x = x`
pub fn nine_conditions(params: &SurfaceParams, x: &Triple, i: Coord) -> Result<[bool; 9]> {
    let r = line_ratio(x, i)?;
    let ai = params.a(i);
    let half_ai = ai.half();
    let (xp, xn) = (x.get(i.prev()), x.get(i.next()));
    let r_inv = r.inv().ok_or_else(|| domain("line ratio vanishes"))?;
    Ok([
        ai * ai == ai.modulus().elem(4),
        (r * r).value() == 1,
        r.square().mult_order()? == 1,
        r == -half_ai,
        r_inv == -half_ai,
        (xp + half_ai * xn).is_zero(),
        xp * xp == xn * xn,
        params.is_fixed_by(x, i.prev()),
        params.is_fixed_by(x, i.next()),
    ])
}

/// Propagates `Delta_{i-1}` around a cycle from the starting value `delta0`
/// and fills in the other two values. Returns values aligned with
/// `cycle.points`.
///
/// Polygon order is `x, m_{i-1} x, rho x, m_{i-1} rho x, ...`; edges alternate
/// between `m_{i-1}` and `m_{i+1}`. Pairing along `m_{i-1}` gives
/// `Delta_{i-1}(m_{i-1} y) = s - Delta_{i-1}(y)`, and pairing along `m_{i+1}`
/// (after substituting `Delta_{i+1} = s - Delta_i - Delta_{i-1}`) gives
/// `Delta_{i-1}(rho y) = Delta_{i-1}(y) - Delta_i(m_{i-1} y) - Delta_i(rho y)`.
/// Closing the polygon requires the cycle sum of `Delta_i` to vanish.
pub fn extend_delta(params: &SurfaceParams, cycle: &ZeroCycle, delta0: Fp) -> Result<Vec<[Fp; 3]>> {
    let i = cycle.coord;
    let s = params.s();
    let n = cycle.rho_order as usize;
    let di: Vec<Fp> = cycle.points.iter().map(|y| reduced_delta(params, y, i)).collect::<Result<_>>()?;
    let no_extension = || Error::NoConsistentExtension { coord: i.number(), point: cycle.base.to_string() };

    let mut prev = vec![s; 2 * n];
    if n == 1 {
        // doubly fixed: both neighbours pin their values to s/2, forcing Delta_i = 0
        if !di[0].is_zero() {
            return Err(no_extension());
        }
        prev = vec![s.half(); 2];
    } else {
        let mut d = delta0;
        for k in 0..n {
            prev[k] = d;
            prev[n + k] = s - d;
            d = d - di[n + k] - di[(k + 1) % n];
        }
        if d != delta0 {
            return Err(no_extension());
        }
    }
    Ok((0..2 * n)
        .map(|k| {
            let mut v = [s; 3];
            v[i.idx()] = di[k];
            v[i.prev().idx()] = prev[k];
            v[i.next().idx()] = s - di[k] - prev[k];
            v
        })
        .collect())
}

/// Angle-function values for every point of a solution set.
#[derive(Clone, Debug)]
pub struct DeltaAssignment {
    pub params: SurfaceParams,
    /// Aligned with the solution set's point list.
    pub values: Vec<[Fp; 3]>,
    pub cycles: usize,
}

/// Builds the assignment with the symmetric start `delta = s / 2` on every cycle.
pub fn build_assignment(part: &OrbitPartition) -> Result<DeltaAssignment> {
    let half = part.params().s().half();
    build_assignment_with(part, |_| half)
}

/// Builds the assignment, choosing each cycle's starting value independently.
pub fn build_assignment_with(
    part: &OrbitPartition,
    mut start: impl FnMut(&ZeroCycle) -> Fp,
) -> Result<DeltaAssignment> {
    let params = *part.params();
    let p = params.prime();
    p.require_at_least(5)?;
    if params.s().is_zero() {
        return Err(domain("the certificate needs s != 0"));
    }
    let sol = part.solutions();
    let tables = FieldTables::new(p);
    let mut values: Vec<Option<[Fp; 3]>> = sol
        .points()
        .par_iter()
        .map(|x| x.zero_coords().next().is_none().then(|| delta_values_fast(&params, &tables, x)))
        .collect();
    let mut cycles = 0;
    for k in 0..sol.len() {
        if values[k].is_some() {
            continue;
        }
        let x = sol.points()[k];
        let i = x.zero_coords().next().expect("only plane points remain");
        let cycle = build_zero_cycle(&params, &x, i)?;
        let vals = extend_delta(&params, &cycle, start(&cycle))?;
        for (y, v) in cycle.points.iter().zip(vals) {
            let j = sol.index_of(y).expect("cycle stays on the surface");
            values[j] = Some(v);
        }
        cycles += 1;
    }
    let values = values.into_iter().map(|v| v.expect("every point assigned")).collect();
    Ok(DeltaAssignment { params, values, cycles })
}

/// Per-orbit outcome of the double-counting argument.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitCertificate {
    pub size: u64,
    pub size_mod_p: u64,
    /// `sum Delta_1 + Delta_2 + Delta_3` over the orbit, i.e. `s V`.
    pub total_sum: Fp,
    /// Whether the sums force `s V = 0`.
    pub derived_divisible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub points: usize,
    pub cycles: usize,
    pub total_failures: usize,
    pub pair_failures: usize,
    pub fixed_points: usize,
    pub fix_failures: usize,
    pub orbits: Vec<OrbitCertificate>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.total_failures == 0
            && self.pair_failures == 0
            && self.fix_failures == 0
            && self.orbits.iter().all(|o| o.derived_divisible && o.size_mod_p == 0)
    }
}

pub fn verify_certificate(part: &OrbitPartition, assignment: &DeltaAssignment) -> Result<CertificateReport> {
    let params = *part.params();
    let n = part.solutions().len();
    if assignment.values.len() != n || assignment.params != params {
        return Err(domain("assignment does not cover the solution set"));
    }
    let p = params.prime().get();
    let s = params.s();
    let half = s.half();
    let vals = &assignment.values;
    let moves = part.moves();

    let mut report = CertificateReport {
        points: n,
        cycles: assignment.cycles,
        total_failures: 0,
        pair_failures: 0,
        fixed_points: 0,
        fix_failures: 0,
        orbits: Vec::new(),
    };
    let zero = params.prime().zero();
    let mut sums = vec![[zero; 4]; part.orbits().len()];
    for k in 0..n {
        let v = vals[k];
        let total = v[0] + v[1] + v[2];
        if total != s {
            report.total_failures += 1;
        }
        for c in 0..3 {
            let j = moves[k][c] as usize;
            if v[c] + vals[j][c] != s {
                report.pair_failures += 1;
            }
            if j == k {
                report.fixed_points += 1;
                if v[c] != half {
                    report.fix_failures += 1;
                }
            }
        }
        let acc = &mut sums[part.component_id()[k] as usize];
        acc[0] += total;
        for c in 0..3 {
            acc[c + 1] += v[c];
        }
    }
    for (o, acc) in part.orbits().iter().zip(&sums) {
        let sv = acc[0];
        // pairing along m_c makes each partial sum s V / 2; the three of them
        // add up to s V, so s V / 2 = 0
        let pairs_ok = (1..4).all(|c| acc[c] * 2 == sv);
        let totals_ok = sv == s * o.size as i64;
        report.orbits.push(OrbitCertificate {
            size: o.size,
            size_mod_p: o.size % p,
            total_sum: sv,
            derived_divisible: pairs_ok && totals_ok && sv.is_zero(),
        });
    }
    Ok(report)
}

/// Certificate dump: per-point values and per-orbit sizes.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateDump {
    pub prime: u64,
    pub params: [i64; 3],
    pub s: u64,
    pub points: Vec<PointDelta>,
    pub orbits: Vec<OrbitCertificate>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointDelta {
    pub x: Triple,
    pub delta: [Fp; 3],
}

pub fn certificate_dump(part: &OrbitPartition, assignment: &DeltaAssignment, report: &CertificateReport) -> CertificateDump {
    let params = part.params();
    CertificateDump {
        prime: params.prime().get(),
        params: params.a_signed(),
        s: params.s().value(),
        points: part
            .solutions()
            .points()
            .iter()
            .zip(&assignment.values)
            .map(|(x, d)| PointDelta { x: *x, delta: *d })
            .collect(),
        orbits: report.orbits.clone(),
        passed: report.passed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{enumerate_solutions, zero_locus};
    use crate::field::Prime;
    use crate::orbits::compute_orbits;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn partition(p: u64, a: [i64; 3]) -> OrbitPartition {
        compute_orbits(enumerate_solutions(&SurfaceParams::new(pr(p), a)).unwrap())
    }

    #[test]
    fn delta_value_examples() {
        let p = pr(7);
        let sp = SurfaceParams::new(p, [0, 0, 0]);
        assert_eq!(delta_values(&sp, &sp.triple([1, 1, 1])).unwrap(), [p.one(); 3]);
        let sp = SurfaceParams::new(p, [1, 1, 1]);
        assert_eq!(delta_values(&sp, &sp.triple([1, 1, 1])).unwrap(), [p.elem(2); 3]);
        assert!(delta_values(&sp, &sp.triple([0, 1, 2])).is_err());
    }

    #[test]
    fn cycle_examples() {
        let p = pr(7);
        let sp = SurfaceParams::new(p, [1, 1, 1]);
        let z = zero_locus(&sp, Coord::X1).unwrap();
        let c = build_zero_cycle(&sp, &z.points[0], Coord::X1).unwrap();
        assert_eq!(c.rho_order, 3);
        assert_eq!(c.points.len(), 6);

        let p = pr(13);
        let sp = SurfaceParams::new(p, [0, 0, 0]);
        let z = zero_locus(&sp, Coord::X2).unwrap();
        let c = build_zero_cycle(&sp, &z.points[0], Coord::X2).unwrap();
        assert_eq!(c.rho_order, 2);

        let sp = SurfaceParams::new(pr(7), [2, 3, 3]);
        let x = zero_locus(&sp, Coord::X1).unwrap().points[0];
        let c = build_zero_cycle(&sp, &x, Coord::X1).unwrap();
        assert_eq!(c.rho_order, 1);
    }

    #[test]
    fn markoff_values_alternate() {
        let p = pr(13);
        let sp = SurfaceParams::new(p, [0, 0, 0]);
        let x = zero_locus(&sp, Coord::X1).unwrap().points[0];
        let c = build_zero_cycle(&sp, &x, Coord::X1).unwrap();
        let d = p.elem(5);
        let vals = extend_delta(&sp, &c, d).unwrap();
        let s = sp.s();
        // Delta_3 is Delta_{i-1} for i = 1
        let pairs: Vec<_> = vals.iter().map(|v| (v[2], v[1])).collect();
        assert_eq!(pairs, vec![(d, s - d), (d, s - d), (s - d, d), (s - d, d)]);
    }

    #[test]
    fn forced_values_when_doubly_fixed() {
        let p = pr(7);
        let sp = SurfaceParams::new(p, [2, 3, 3]);
        let x = zero_locus(&sp, Coord::X1).unwrap().points[0];
        let c = build_zero_cycle(&sp, &x, Coord::X1).unwrap();
        let vals = extend_delta(&sp, &c, p.elem(3)).unwrap();
        let h = sp.s().half();
        assert_eq!(vals[0], [p.zero(), h, h]);
    }

    #[test]
    fn no_extension_for_22m2() {
        let sp = SurfaceParams::new(pr(11), [2, 2, -2]);
        let x = zero_locus(&sp, Coord::X1).unwrap().points[0];
        let c = build_zero_cycle(&sp, &x, Coord::X1).unwrap();
        let err = extend_delta(&sp, &c, sp.s()).unwrap_err();
        assert!(matches!(err, Error::NoConsistentExtension { coord: 1, .. }));
        assert!(build_assignment(&partition(11, [2, 2, -2])).is_err());
    }

    #[test]
    fn certificate_examples() {
        for a in [[1, 1, 1], [2, 3, 3], [0, 0, 0]] {
            let part = partition(7, a);
            let asg = build_assignment(&part).unwrap();
            let rep = verify_certificate(&part, &asg).unwrap();
            assert!(rep.passed(), "{a:?}: {rep:?}");
        }
    }

    #[test]
    fn certificate_independent_of_start() {
        let part = partition(13, [1, 4, 6]);
        let p = pr(13);
        let mut k = 0;
        let asg = build_assignment_with(&part, |_| {
            k += 3;
            p.elem(k)
        })
        .unwrap();
        assert!(asg.cycles > 1);
        assert!(verify_certificate(&part, &asg).unwrap().passed());
    }

    #[test]
    fn shifting_the_propagation_index_breaks_pairing() {
        // using Delta_i(rho^l x) in place of Delta_i(rho^{l+1} x) in the
        // propagation step does not satisfy the pairing along m_{i+1}
        let p = pr(13);
        let sp = SurfaceParams::new(p, [1, 1, 1]);
        let x = zero_locus(&sp, Coord::X1).unwrap().points[0];
        let c = build_zero_cycle(&sp, &x, Coord::X1).unwrap();
        let i = Coord::X1;
        let di = |y: &Triple| reduced_delta(&sp, y, i).unwrap();
        let s = sp.s();
        let d0 = s.half();
        let shifted_d1 = d0 - di(&c.midpoint(0)) - di(&c.corner(0));
        let correct_d1 = d0 - di(&c.midpoint(0)) - di(&c.corner(1));
        let pair = |d_corner: Fp| {
            let mid = c.midpoint(0);
            let d_mid_next = s - di(&mid) - (s - d0);
            let d_corner_next = s - di(&c.corner(1)) - d_corner;
            d_mid_next + d_corner_next == s
        };
        assert!(pair(correct_d1));
        assert!(!pair(shifted_d1));
    }
}
