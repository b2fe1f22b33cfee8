//! Point counts on plane conics `x^2 + Bxy + y^2 + Dx + Ey + F = 0` and the
//! closed-form total number of surface solutions.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::field::{chi, Fp, Fp2, Prime};
use crate::surface::{Coord, SurfaceParams};

/// Coefficients of `x^2 + Bxy + y^2 + Dx + Ey + F = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConicParams {
    pub b: Fp,
    pub d: Fp,
    pub e: Fp,
    pub f: Fp,
}

impl ConicParams {
    pub fn new(p: Prime, b: i64, d: i64, e: i64, f: i64) -> Self {
        ConicParams { b: p.elem(b), d: p.elem(d), e: p.elem(e), f: p.elem(f) }
    }

    pub fn prime(&self) -> Prime {
        self.b.modulus()
    }

    pub fn eval(&self, x: Fp, y: Fp) -> Fp {
        x * x + self.b * x * y + y * y + self.d * x + self.e * y + self.f
    }

    /// `D^2 + E^2 + F B^2 - 4F - BDE`; the conic degenerates iff this vanishes.
    pub fn degeneracy(&self) -> Fp {
        let ConicParams { b, d, e, f } = *self;
        d * d + e * e + f * b * b - f * 4 - b * d * e
    }
}

/// Kind of conic over F_p, each with a fixed point count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConicClass {
    SmoothEllipse,
    SmoothHyperbola,
    Parabola,
    IntersectingLines,
    SinglePoint,
    DoubleLine,
    ParallelLines,
    EmptyParallel,
}

impl ConicClass {
    pub fn count(self, p: Prime) -> u64 {
        let p = p.get();
        match self {
            ConicClass::SmoothEllipse => p + 1,
            ConicClass::SmoothHyperbola => p - 1,
            ConicClass::Parabola => p,
            ConicClass::IntersectingLines => 2 * p - 1,
            ConicClass::SinglePoint => 1,
            ConicClass::DoubleLine => p,
            ConicClass::ParallelLines => 2 * p,
            ConicClass::EmptyParallel => 0,
        }
    }
}

/// The slice of the surface with coordinate `i` fixed to `xi`, as a conic in
/// `(x_{i-1}, x_{i+1})`.
pub fn fiber_conic(params: &SurfaceParams, i: Coord, xi: Fp) -> ConicParams {
    ConicParams {
        b: params.a(i) - params.s() * xi,
        d: params.a(i.next()) * xi,
        e: params.a(i.prev()) * xi,
        f: xi * xi,
    }
}

/// Classifies a conic by completing the square and returns its point count.
pub fn classify_and_count(c: &ConicParams) -> Result<(ConicClass, u64)> {
    let p = c.prime();
    p.require_odd()?;
    let bb4 = c.b * c.b - 4;
    let class = if !bb4.is_zero() {
        match (c.degeneracy().is_zero(), chi(bb4)) {
            (false, -1) => ConicClass::SmoothEllipse,
            (false, _) => ConicClass::SmoothHyperbola,
            (true, 1) => ConicClass::IntersectingLines,
            (true, _) => ConicClass::SinglePoint,
        }
    } else if !(c.e - c.b.half() * c.d).is_zero() {
        ConicClass::Parabola
    } else {
        match chi(c.d * c.d - c.f * 4) {
            0 => ConicClass::DoubleLine,
            1 => ConicClass::ParallelLines,
            _ => ConicClass::EmptyParallel,
        }
    };
    Ok((class, class.count(p)))
}

/// Number of `(x, y)` pairs on the conic by direct evaluation of all `p^2`
/// pairs.
pub fn brute_force_conic_count(c: &ConicParams) -> u64 {
    let p = c.prime();
    let mut n = 0;
    for x in p.elements() {
        for y in p.elements() {
            if c.eval(x, y).is_zero() {
                n += 1;
            }
        }
    }
    n
}

/// `a1^2 + a2^2 + a3^2 = a1 a2 a3 + 4`.
pub fn cayley_membership(a1: Fp, a2: Fp, a3: Fp) -> bool {
    a1 * a1 + a2 * a2 + a3 * a3 == a1 * a2 * a3 + 4
}

/// The correction term `C(a1, a2, a3) in {-1, 0, 1}`.
pub fn cayley_correction(params: &SurfaceParams) -> i64 {
    let [a1, a2, a3] = params.a_all();
    if !cayley_membership(a1, a2, a3) {
        return 0;
    }
    match params.special_form() {
        // the two sign conventions for the special form coincide since sigma^2 = 1
        Some(sf) => -(chi(sf.alpha * sf.alpha - 4) as i64),
        None => -(params.a_all().iter().map(|&a| chi(a * a - 4) as i64).product::<i64>()),
    }
}

/// `p^2 + p (sum_i chi(a_i^2 - 4) + C)`: the number of nonzero solutions.
pub fn closed_form_total(params: &SurfaceParams) -> Result<u64> {
    params.prime().require_at_least(5)?;
    if params.s().is_zero() {
        return Err(domain("closed form needs s != 0"));
    }
    let p = params.prime().get() as i64;
    let chi_sum: i64 = params.a_all().iter().map(|&a| chi(a * a - 4) as i64).sum();
    let total = p * p + p * (chi_sum + cayley_correction(params));
    Ok(total as u64)
}

/// Total number of solutions (origin included) as a sum of fiber counts over
/// `x3`.
pub fn fiber_sum_total(params: &SurfaceParams) -> Result<u64> {
    let p = params.prime();
    p.require_odd()?;
    let mut total = 0;
    for x3 in p.elements() {
        total += classify_and_count(&fiber_conic(params, Coord::X3, x3))?.1;
    }
    Ok(total)
}

/// Roots `t_+-` of `t^2 - a1 a2 t + a1^2 + a2^2 - 4 = 0`: the fiber values of
/// `B` (besides `B = a3`) where the `x3`-fiber can degenerate. Empty when the
/// discriminant `(a1^2 - 4)(a2^2 - 4)` is a non-residue.
pub fn degenerate_fiber_roots(params: &SurfaceParams) -> Vec<Fp> {
    let (a1, a2) = (params.a(Coord::X1), params.a(Coord::X2));
    let disc = (a1 * a1 - 4) * (a2 * a2 - 4);
    if chi(disc) == -1 {
        return Vec::new();
    }
    let root = Fp2::sqrt_of(disc).c0();
    let mut ts = vec![(a1 * a2 + root).half(), (a1 * a2 - root).half()];
    ts.sort();
    ts.dedup();
    ts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Prime;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn fiber_examples() {
        let p = pr(11);
        let sp = SurfaceParams::new(p, [0, 0, 0]);
        let c = fiber_conic(&sp, Coord::X3, p.one());
        assert_eq!(c, ConicParams::new(p, -3, 0, 0, 1));
        let sp = SurfaceParams::new(p, [4, -2, 7]);
        for i in Coord::ALL {
            let c = fiber_conic(&sp, i, p.zero());
            assert_eq!(c, ConicParams { b: sp.a(i), d: p.zero(), e: p.zero(), f: p.zero() });
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_and_count(&ConicParams::new(pr(7), 0, 0, 0, -1)).unwrap(),
            (ConicClass::SmoothEllipse, 8)
        );
        assert_eq!(
            classify_and_count(&ConicParams::new(pr(5), 0, 0, 0, 0)).unwrap(),
            (ConicClass::IntersectingLines, 9)
        );
        assert_eq!(classify_and_count(&ConicParams::new(pr(7), 2, 0, 0, 0)).unwrap(), (ConicClass::DoubleLine, 7));
        assert!(classify_and_count(&ConicParams::new(pr(2), 0, 0, 0, 0)).is_err());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_conic_count(&ConicParams::new(pr(7), 0, 0, 0, -1)), 8);
        assert_eq!(brute_force_conic_count(&ConicParams::new(pr(5), 0, 0, 0, 0)), 9);
    }

    #[test]
    fn cayley_examples() {
        let p = pr(7);
        assert!(cayley_membership(p.elem(2), p.elem(2), p.elem(2)));
        assert!(!cayley_membership(p.zero(), p.zero(), p.zero()));
        assert!(!cayley_membership(p.elem(2), p.elem(2), p.elem(-2)));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_total(&SurfaceParams::new(pr(5), [0, 0, 0])).unwrap(), 40);
        assert_eq!(closed_form_total(&SurfaceParams::new(pr(13), [2, 2, -2])).unwrap(), 169);
        assert_eq!(closed_form_total(&SurfaceParams::new(pr(7), [1, 1, 1])).unwrap(), 70);
        assert!(closed_form_total(&SurfaceParams::new(pr(7), [0, 0, -3])).is_err());
        assert!(closed_form_total(&SurfaceParams::new(pr(3), [1, 1, 1])).is_err());
    }

    #[test]
    fn degenerate_b_identity() {
        // B^2 = 4 makes the degeneracy quantity a perfect square
        for p in [5u64, 7, 13, 31] {
            let p = pr(p);
            for b in [p.elem(2), p.elem(-2)] {
                for d in p.elements() {
                    for e in p.elements().step_by(3) {
                        let f = d * e + p.elem(3);
                        let c = ConicParams { b, d, e, f };
                        let lin = e - b.half() * d;
                        assert_eq!(c.degeneracy(), lin * lin);
                    }
                }
            }
        }
    }

    #[test]
    fn fiber_roots_satisfy_quadratic() {
        let p = pr(13);
        for a1 in p.elements() {
            for a2 in p.elements() {
                let sp = SurfaceParams::from_elements([a1, a2, p.zero()]);
                for t in degenerate_fiber_roots(&sp) {
                    assert!((t * t - a1 * a2 * t + a1 * a1 + a2 * a2 - 4).is_zero());
                }
            }
        }
    }
}
