//! The surface
//!
//! `x1^2 + x2^2 + x3^2 + a1 x2 x3 + a2 x1 x3 + a3 x1 x2 = s x1 x2 x3`
//!
//! over F_p, its three Vieta moves, and the parameter classification that
//! decides which divisibility statements apply.

use std::fmt;
use std::ops::Index;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::field::{Fp, Prime};

/// One of the three coordinate slots, with cyclic neighbours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    X1,
    X2,
    X3,
}

impl Coord {
    pub const ALL: [Coord; 3] = [Coord::X1, Coord::X2, Coord::X3];

    /// 1-based index, matching the usual `x1, x2, x3` naming.
    pub fn number(self) -> usize {
        self.idx() + 1
    }

    pub fn from_number(n: usize) -> Option<Coord> {
        match n {
            1 => Some(Coord::X1),
            2 => Some(Coord::X2),
            3 => Some(Coord::X3),
            _ => None,
        }
    }

    #[inline]
    pub fn idx(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn prev(self) -> Coord {
        Coord::ALL[(self.idx() + 2) % 3]
    }

    #[inline]
    pub fn next(self) -> Coord {
        Coord::ALL[(self.idx() + 1) % 3]
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl Serialize for Coord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.number() as u64)
    }
}

/// `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_fp(self, p: Prime) -> Fp {
        p.elem(self.as_i64())
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.as_i64())
    }
}

/// A point of F_p^3.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple(pub [Fp; 3]);

impl Triple {
    pub fn new(p: Prime, x: [i64; 3]) -> Self {
        Triple(x.map(|v| p.elem(v)))
    }

    pub fn origin(p: Prime) -> Self {
        Triple([p.zero(); 3])
    }

    pub fn prime(&self) -> Prime {
        self.0[0].modulus()
    }

    #[inline]
    pub fn get(&self, c: Coord) -> Fp {
        self.0[c.idx()]
    }

    /// Copy with coordinate `c` replaced.
    #[inline]
    pub fn with(&self, c: Coord, v: Fp) -> Self {
        let mut out = *self;
        out.0[c.idx()] = v;
        out
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|v| v.is_zero())
    }

    pub fn scale(&self, t: Fp) -> Self {
        Triple(self.0.map(|v| v * t))
    }

    pub fn values(&self) -> [u64; 3] {
        self.0.map(|v| v.value())
    }

    /// Coordinates that vanish.
    pub fn zero_coords(&self) -> impl Iterator<Item = Coord> + '_ {
        Coord::ALL.into_iter().filter(|&c| self.get(c).is_zero())
    }

    /// Applies a permutation of coordinate slots: slot `k` of the result
    /// holds slot `perm[k]` of `self`.
    pub fn permute(&self, perm: [usize; 3]) -> Self {
        Triple(perm.map(|k| self.0[k]))
    }
}

impl Index<Coord> for Triple {
    type Output = Fp;
    fn index(&self, c: Coord) -> &Fp {
        &self.0[c.idx()]
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Triple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.values().serialize(s)
    }
}

/// Parameters `(p; a1, a2, a3)` together with the cubic coefficient `s`.
///
/// [`SurfaceParams::new`] sets `s = 3 + a1 + a2 + a3`; [`SurfaceParams::with_s`]
/// allows any `s`, which is what rescaling produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceParams {
    p: Prime,
    a: [Fp; 3],
    s: Fp,
}

impl SurfaceParams {
    pub fn new(p: Prime, a: [i64; 3]) -> Self {
        Self::from_elements(a.map(|v| p.elem(v)))
    }

    pub fn from_elements(a: [Fp; 3]) -> Self {
        let p = a[0].modulus();
        let s = p.elem(3) + a[0] + a[1] + a[2];
        SurfaceParams { p, a, s }
    }

    pub fn with_s(a: [Fp; 3], s: Fp) -> Self {
        SurfaceParams { p: s.modulus(), a, s }
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn a(&self, c: Coord) -> Fp {
        self.a[c.idx()]
    }

    pub fn a_all(&self) -> [Fp; 3] {
        self.a
    }

    #[inline]
    pub fn s(&self) -> Fp {
        self.s
    }

    /// True when `s = 3 + a1 + a2 + a3`.
    pub fn has_standard_s(&self) -> bool {
        self.s == self.p.elem(3) + self.a[0] + self.a[1] + self.a[2]
    }

    /// Parameters as signed integers in `(-p/2, p/2]`.
    pub fn a_signed(&self) -> [i64; 3] {
        self.a.map(|v| v.signed())
    }

    /// Permutes the parameter slots the same way [`Triple::permute`] permutes
    /// coordinates, so that `residual` is preserved.
    pub fn permute(&self, perm: [usize; 3]) -> Self {
        SurfaceParams { p: self.p, a: perm.map(|k| self.a[k]), s: self.s }
    }

    pub fn triple(&self, x: [i64; 3]) -> Triple {
        Triple::new(self.p, x)
    }

    /// LHS minus RHS of the surface equation; zero iff `x` is on the surface.
    pub fn residual(&self, x: &Triple) -> Fp {
        let [x1, x2, x3] = x.0;
        let [a1, a2, a3] = self.a;
        x1 * x1 + x2 * x2 + x3 * x3 + a1 * x2 * x3 + a2 * x1 * x3 + a3 * x1 * x2 - self.s * x1 * x2 * x3
    }

    #[inline]
    pub fn on_surface(&self, x: &Triple) -> bool {
        self.residual(x).is_zero()
    }

    /// The Vieta move `m_i`: replaces `x_i` by the other root of the
    /// equation viewed as a quadratic in `x_i`.
    #[inline]
    pub fn apply_move(&self, x: &Triple, i: Coord) -> Triple {
        let (prev, next) = (i.prev(), i.next());
        let xp = x.get(prev);
        let xn = x.get(next);
        let new = self.s * xp * xn - x.get(i) - self.a(next) * xp - self.a(prev) * xn;
        x.with(i, new)
    }

    /// `x_i + m_i(x)_i`, the Vieta sum.
    pub fn vieta_sum(&self, x: &Triple, i: Coord) -> Fp {
        let (xp, xn) = (x.get(i.prev()), x.get(i.next()));
        self.s * xp * xn - self.a(i.prev()) * xn - self.a(i.next()) * xp
    }

    /// `x_i * m_i(x)_i` for on-surface `x`, the Vieta product.
    pub fn vieta_product(&self, x: &Triple, i: Coord) -> Fp {
        let (xp, xn) = (x.get(i.prev()), x.get(i.next()));
        xp * xp + xn * xn + self.a(i) * xp * xn
    }

    /// Rescales `x -> t x`. If `x` solves the surface with coefficient `s`,
    /// the image solves the surface with coefficient `s / t`.
    pub fn rescale(&self, x: &Triple, t: Fp) -> Result<(SurfaceParams, Triple)> {
        let t_inv = t.inv().ok_or_else(|| domain("rescale by t = 0"))?;
        Ok((SurfaceParams { s: self.s * t_inv, ..*self }, x.scale(t)))
    }

    /// Rescales so that the cubic coefficient becomes 1 (`t = s`).
    pub fn normalize(&self, x: &Triple) -> Result<(SurfaceParams, Triple)> {
        if self.s.is_zero() {
            return Err(domain("cannot normalize s = 0"));
        }
        self.rescale(x, self.s)
    }

    pub fn classify(&self) -> ParamClass {
        classify_parameters(self)
    }

    /// The form `a_i = 2 sigma, a_{i+1} = alpha, a_{i-1} = alpha sigma`, if
    /// present. Scans `i = 1, 2, 3` then `sigma = +1, -1`.
    pub fn special_form(&self) -> Option<SpecialForm> {
        let p = self.p;
        for i in Coord::ALL {
            for sigma in [Sign::Plus, Sign::Minus] {
                let sg = sigma.as_fp(p);
                if self.a(i) == sg * 2 && self.a(i.prev()) == self.a(i.next()) * sg {
                    return Some(SpecialForm { index: i, sigma, alpha: self.a(i.next()) });
                }
            }
        }
        None
    }

    /// `u_i = s x_i - a_i`.
    pub fn u_coords(&self, x: &Triple) -> UTriple {
        UTriple(Coord::ALL.map(|c| self.s * x.get(c) - self.a(c)))
    }

    /// The move on u-coordinates:
    /// `u_i -> -u_i + u_{i-1} u_{i+1} - 2 a_i - a_{i-1} a_{i+1}`.
    pub fn u_move(&self, u: &UTriple, i: Coord) -> UTriple {
        let (ip, inx) = (i.prev(), i.next());
        let new = -u.get(i) + u.get(ip) * u.get(inx) - self.a(i) * 2 - self.a(ip) * self.a(inx);
        let mut out = *u;
        out.0[i.idx()] = new;
        out
    }

    /// Residual of the u-coordinate form
    /// `sum (u_i^2 + (2 a_i + a_{i-1} a_{i+1}) u_i) = u1 u2 u3 - 2 a1 a2 a3 - a1^2 - a2^2 - a3^2`.
    pub fn u_residual(&self, u: &UTriple) -> Fp {
        let mut lhs = self.p.zero();
        for c in Coord::ALL {
            let uc = u.get(c);
            lhs += uc * uc + (self.a(c) * 2 + self.a(c.prev()) * self.a(c.next())) * uc;
        }
        let [a1, a2, a3] = self.a;
        let rhs = u.0[0] * u.0[1] * u.0[2] - a1 * a2 * a3 * 2 - a1 * a1 - a2 * a2 - a3 * a3;
        lhs - rhs
    }

    /// Checks that moving in u-coordinates agrees with moving in x and then
    /// changing coordinates, and that the u-form residual vanishes exactly
    /// when the x-form residual does.
    ///
    /// The second check needs `s != 0`: the u-form residual equals
    /// `s^2` times the x-form residual.
    pub fn u_move_equivariance(&self, x: &Triple, i: Coord) -> bool {
        let u = self.u_coords(x);
        let moved_u = self.u_move(&u, i);
        let moved_x = self.apply_move(x, i);
        let commutes = moved_u.get(i) == self.s * moved_x.get(i) - self.a(i);
        let residuals_agree = if self.s.is_zero() {
            true
        } else {
            self.residual(x).is_zero() == self.u_residual(&u).is_zero()
        };
        commutes && residuals_agree
    }

    /// `x_i^2 (u^2 - 4)(u^2 + a_{i-1} a_{i+1} u + a_{i-1}^2 + a_{i+1}^2 - 4)`
    /// with `u = s x_i - a_i`; vanishes at on-surface points fixed by both
    /// `m_{i-1}` and `m_{i+1}`.
    pub fn double_fixed_residual(&self, x: &Triple, i: Coord) -> Fp {
        let xi = x.get(i);
        let u = self.s * xi - self.a(i);
        let (ap, an) = (self.a(i.prev()), self.a(i.next()));
        xi * xi * (u * u - 4) * (u * u + ap * an * u + ap * ap + an * an - 4)
    }

    pub fn is_fixed_by(&self, x: &Triple, i: Coord) -> bool {
        self.apply_move(x, i) == *x
    }
}

impl fmt::Display for SurfaceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3] = self.a_signed();
        write!(f, "p={} a=({},{},{}) s={}", self.p, a1, a2, a3, self.s)
    }
}

/// Point in u-coordinates `u_i = s x_i - a_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UTriple(pub [Fp; 3]);

impl UTriple {
    pub fn get(&self, c: Coord) -> Fp {
        self.0[c.idx()]
    }
}

/// The shape `a_i = 2 sigma, a_{i+1} = alpha, a_{i-1} = alpha sigma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialForm {
    #[serde(rename = "i")]
    pub index: Coord,
    pub sigma: Sign,
    pub alpha: Fp,
}

impl SpecialForm {
    /// `alpha = +-2`: all three parameters are `+-2`.
    pub fn is_degenerate(&self) -> bool {
        let two = self.alpha.modulus().elem(2);
        self.alpha == two || self.alpha == -two
    }
}

/// Which divisibility statement, if any, covers a parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamClass {
    /// `s != 0` and `a_i^2 != 4` for every `i`.
    AllNonDegenerate,
    /// `s != 0`, some `a_i^2 = 4`, and `2 a_{i-1} = a_{i+1} a_i` at the reported index.
    SpecialForm(SpecialForm),
    /// `s != 0`, some `a_i^2 = 4`, but no index satisfies the sign condition.
    HypothesisViolated,
    /// `s = 0`, regardless of anything else.
    SZero,
}

impl ParamClass {
    pub fn name(&self) -> &'static str {
        match self {
            ParamClass::AllNonDegenerate => "AllNonDegenerate",
            ParamClass::SpecialForm(_) => "SpecialForm",
            ParamClass::HypothesisViolated => "HypothesisViolated",
            ParamClass::SZero => "SZero",
        }
    }

    /// Whether the divisibility theorem applies.
    pub fn divisibility_applies(&self) -> bool {
        matches!(self, ParamClass::AllNonDegenerate | ParamClass::SpecialForm(_))
    }
}

impl fmt::Display for ParamClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamClass::SpecialForm(sf) => write!(
                f,
                "SpecialForm(i={}, sigma={}, alpha={})",
                sf.index,
                sf.sigma.as_i64(),
                sf.alpha.signed()
            ),
            other => f.write_str(other.name()),
        }
    }
}

pub fn classify_parameters(params: &SurfaceParams) -> ParamClass {
    if params.s().is_zero() {
        return ParamClass::SZero;
    }
    let four = params.prime().elem(4);
    if Coord::ALL.iter().all(|&c| params.a(c).square() != four) {
        return ParamClass::AllNonDegenerate;
    }
    match params.special_form() {
        Some(sf) => ParamClass::SpecialForm(sf),
        None => ParamClass::HypothesisViolated,
    }
}

/// All six permutations of three slots.
pub const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn residual_examples() {
        for a in [[0, 0, 0], [1, 2, 3], [2, 2, -2], [5, -1, 4]] {
            let sp = SurfaceParams::new(pr(11), a);
            assert!(sp.residual(&sp.triple([1, 1, 1])).is_zero());
            assert!(sp.residual(&sp.triple([0, 0, 0])).is_zero());
        }
        let sp = SurfaceParams::new(pr(5), [0, 0, 0]);
        assert_eq!(sp.residual(&sp.triple([1, 2, 3])), pr(5).elem(1));
    }

    #[test]
    fn move_examples() {
        let sp = SurfaceParams::new(pr(7), [0, 0, 0]);
        assert_eq!(sp.apply_move(&sp.triple([1, 1, 1]), Coord::X1), sp.triple([2, 1, 1]));

        let sp = SurfaceParams::new(pr(7), [2, 2, -2]);
        assert_eq!(sp.s(), pr(7).elem(5));
        let x = sp.triple([0, 6, 1]);
        assert!(sp.on_surface(&x));
        assert_eq!(sp.apply_move(&x, Coord::X1), sp.triple([5, 6, 1]));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(SurfaceParams::new(pr(5), [0, 0, 0]).classify(), ParamClass::AllNonDegenerate);
        let p7 = pr(7);
        assert_eq!(
            SurfaceParams::new(p7, [2, 3, 3]).classify(),
            ParamClass::SpecialForm(SpecialForm { index: Coord::X1, sigma: Sign::Plus, alpha: p7.elem(3) })
        );
        assert_eq!(SurfaceParams::new(p7, [2, 2, -2]).classify(), ParamClass::HypothesisViolated);
        for p in [5, 7, 11, 13, 101] {
            assert_eq!(SurfaceParams::new(pr(p), [0, 0, -3]).classify(), ParamClass::SZero);
        }
        // several matches: first index wins
        let sf = SurfaceParams::new(p7, [2, 2, 2]).special_form().unwrap();
        assert_eq!((sf.index, sf.sigma), (Coord::X1, Sign::Plus));
        assert!(sf.is_degenerate());
    }

    #[test]
    fn special_form_satisfies_sign_condition() {
        let p = pr(11);
        for a1 in p.elements() {
            for a2 in p.elements() {
                for a3 in p.elements() {
                    let sp = SurfaceParams::from_elements([a1, a2, a3]);
                    if let ParamClass::SpecialForm(sf) = sp.classify() {
                        let i = sf.index;
                        assert_eq!(sp.a(i).square(), p.elem(4));
                        assert_eq!(sp.a(i.prev()) * 2, sp.a(i.next()) * sp.a(i));
                    }
                }
            }
        }
    }

    #[test]
    fn rescale_examples() {
        let p = pr(7);
        let sp = SurfaceParams::new(p, [2, 2, 2]);
        let x = sp.triple([1, 1, 1]);
        let (same, y) = sp.rescale(&x, p.one()).unwrap();
        assert_eq!((same, y), (sp, x));

        assert_eq!(sp.s(), p.elem(2));
        let (scaled, y) = sp.rescale(&x, sp.s()).unwrap();
        assert_eq!(scaled.s(), p.one());
        assert_eq!(y, sp.triple([2, 2, 2]));
        assert!(scaled.on_surface(&y));

        assert!(sp.rescale(&x, p.zero()).is_err());
    }

    #[test]
    fn u_coordinates_at_one() {
        let sp = SurfaceParams::new(pr(13), [1, 4, 6]);
        let u = sp.u_coords(&sp.triple([1, 1, 1]));
        assert_eq!(u.0, [sp.s() - sp.a(Coord::X1), sp.s() - sp.a(Coord::X2), sp.s() - sp.a(Coord::X3)]);
    }

    #[test]
    fn markoff_u_move_has_no_parameter_terms() {
        let sp = SurfaceParams::new(pr(11), [0, 0, 0]);
        let u = UTriple([pr(11).elem(3), pr(11).elem(5), pr(11).elem(7)]);
        let moved = sp.u_move(&u, Coord::X2);
        assert_eq!(moved.get(Coord::X2), -u.get(Coord::X2) + u.get(Coord::X1) * u.get(Coord::X3));
    }

    #[test]
    fn double_fixed_examples() {
        let p = pr(7);
        let sp = SurfaceParams::new(p, [2, 2, -2]);
        let x = sp.triple([5, 5, 0]);
        assert!(sp.on_surface(&x));
        assert!(sp.double_fixed_residual(&x, Coord::X3).is_zero());
        assert!(sp.double_fixed_residual(&Triple::origin(p), Coord::X1).is_zero());
    }

    #[test]
    fn permutation_preserves_residual_and_moves() {
        let p = pr(13);
        let sp = SurfaceParams::new(p, [1, 5, -3]);
        let x = sp.triple([2, 7, 11]);
        for perm in PERMUTATIONS {
            let (q, y) = (sp.permute(perm), x.permute(perm));
            assert_eq!(q.residual(&y), sp.residual(&x));
            for k in 0..3 {
                // slot k of the permuted triple is slot perm[k] of the original
                let moved = sp.apply_move(&x, Coord::ALL[perm[k]]).permute(perm);
                assert_eq!(q.apply_move(&y, Coord::ALL[k]), moved);
            }
        }
    }
}
