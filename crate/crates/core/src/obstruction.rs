//! Quadratic-character invariants that split the solutions for parameters
//! of the form `(2 sigma, alpha, alpha sigma)` into move-closed classes.
//!
//! All formulas are evaluated on the rescaled point `y = s x`, which solves
//! the surface with cubic coefficient 1.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::enumeration::enumerate_solutions;
use crate::error::{domain, Result};
use crate::field::{chi, Fp};
use crate::orbits::{compute_orbits, OrbitPartition};
use crate::surface::{Coord, SpecialForm, SurfaceParams, Triple};

/// Class of a point under the generic obstruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ClassLabel {
    /// Both characters in `{0, 1}`, not both zero.
    NonNeg,
    /// Both characters in `{0, -1}`, not both zero.
    NonPos,
    /// Both characters zero.
    Ambiguous,
}

impl ClassLabel {
    pub fn in_non_neg(self) -> bool {
        matches!(self, ClassLabel::NonNeg | ClassLabel::Ambiguous)
    }

    pub fn in_non_pos(self) -> bool {
        matches!(self, ClassLabel::NonPos | ClassLabel::Ambiguous)
    }
}

/// Signs `(e1, e2, e3)` with `e1 e2 e3 = +1`, one of four classes in the
/// case `alpha = +-2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SignTriple(pub [i8; 3]);

pub fn special_form_detect(params: &SurfaceParams) -> Option<SpecialForm> {
    params.special_form()
}

fn form_of(params: &SurfaceParams) -> Result<SpecialForm> {
    params.special_form().ok_or_else(|| domain(format!("{params} is not of special form")))
}

fn rescaled(params: &SurfaceParams, x: &Triple) -> Result<(SurfaceParams, Triple)> {
    if !params.on_surface(x) {
        return Err(domain(format!("{x} is not on the surface")));
    }
    params.normalize(x)
}

/// `chi(y_i)` and `chi(y_i + y_i' + 2 y_{i+1} + 2 sigma y_{i-1})`.
pub fn obstruction_characters(params: &SurfaceParams, x: &Triple) -> Result<(i8, i8)> {
    let sf = form_of(params)?;
    let (norm, y) = rescaled(params, x)?;
    let i = sf.index;
    let sg = sf.sigma.as_fp(params.prime());
    let companion = norm.vieta_sum(&y, i) + y.get(i.next()) * 2 + sg * y.get(i.prev()) * 2;
    Ok((chi(y.get(i)), chi(companion)))
}

pub fn class_label(params: &SurfaceParams, x: &Triple) -> Result<ClassLabel> {
    let (c1, c2) = obstruction_characters(params, x)?;
    if c1 * c2 == -1 {
        return Err(domain(format!("characters of opposite sign at {x}")));
    }
    Ok(match (c1, c2) {
        (0, 0) => ClassLabel::Ambiguous,
        _ if c1 + c2 > 0 => ClassLabel::NonNeg,
        _ => ClassLabel::NonPos,
    })
}

/// Sign label for `alpha = +-2`. On the rescaled surface
/// `chi(y1) chi(y2) chi(y3) != -1`; a zero coordinate (at most one occurs)
/// takes the sign making the product `+1`.
pub fn degenerate_label(params: &SurfaceParams, x: &Triple) -> Result<SignTriple> {
    let sf = form_of(params)?;
    if !sf.is_degenerate() {
        return Err(domain("degenerate label needs alpha = +-2"));
    }
    let (_, y) = rescaled(params, x)?;
    let mut c = Coord::ALL.map(|k| chi(y.get(k)));
    if c.iter().product::<i8>() == -1 {
        return Err(domain(format!("character product -1 at {x}")));
    }
    match c.iter().filter(|&&v| v == 0).count() {
        0 => {}
        1 => {
            let z = c.iter().position(|&v| v == 0).unwrap();
            c[z] = c[(z + 1) % 3] * c[(z + 2) % 3];
        }
        _ => return Err(domain("the origin has no label")),
    }
    Ok(SignTriple(c))
}

/// The product identity that makes the generic classes closed under
/// `m_{i+1}`, together with its mirror for `m_{i-1}`:
///
/// `L(y_{i+1}) L(y_{i+1}') = (y_{i-1}^2 + y_{i-1} y_i - sigma (alpha - 2) y_i)^2`
/// with `L(t) = y_{i-1} t - sigma (alpha - 2) t - (alpha - 2) y_{i-1}`.
///
/// The mirror swaps `i - 1` and `i + 1`, which turns `alpha` into `sigma alpha`.
pub fn perfect_square_check(params: &SurfaceParams, x: &Triple) -> Result<bool> {
    let sf = form_of(params)?;
    let (norm, y) = params.normalize(x)?;
    let i = sf.index;
    let p = params.prime();
    let sg = sf.sigma.as_fp(p);
    let side = |far: Coord, near: Coord, alpha: Fp| {
        let k = alpha - 2;
        let (yf, yi) = (y.get(far), y.get(i));
        let yn = y.get(near);
        let yn_alt = norm.apply_move(&y, near).get(near);
        let l = |t: Fp| yf * t - sg * k * t - k * yf;
        let r = yf * yf + yf * yi - sg * k * yi;
        l(yn) * l(yn_alt) == r * r
    };
    Ok(side(i.prev(), i.next(), sf.alpha) && side(i.next(), i.prev(), sg * sf.alpha))
}

/// Predicted orbit sizes for the special forms, when the classes do not
/// split further.
pub fn conjectured_sizes(params: &SurfaceParams) -> Result<Vec<u64>> {
    let sf = form_of(params)?;
    let p = params.prime().get() as i64;
    let mut v: Vec<i64> = if sf.is_degenerate() {
        let c = chi(params.prime().elem(-1)) as i64;
        vec![p * (p + 3 * c) / 4, p * (p - c) / 4, p * (p - c) / 4, p * (p - c) / 4]
    } else {
        let c = chi(sf.alpha * sf.alpha - 4) as i64;
        vec![p * (p - c) / 2, p * (p + 3 * c) / 2]
    };
    v.sort_unstable();
    Ok(v.into_iter().map(|n| n as u64).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct FormReport {
    pub i: usize,
    pub sigma: i64,
    pub alpha: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BreakupReport {
    pub params: [i64; 3],
    pub prime: u64,
    pub form: FormReport,
    pub orbit_count: usize,
    pub required_orbits: usize,
    pub orbit_sizes: Vec<u64>,
    pub class_sizes: BTreeMap<String, u64>,
    /// Whether every orbit lies inside one class.
    pub classes_closed: bool,
    pub conjectured_sizes: Vec<u64>,
    pub conjecture_partition_matched: bool,
}

impl BreakupReport {
    /// The asserted part: enough orbits and move-closed classes. The
    /// conjectured sizes are informational.
    pub fn passed(&self) -> bool {
        self.orbit_count >= self.required_orbits && self.classes_closed
    }
}

pub fn verify_breakup(params: &SurfaceParams) -> Result<BreakupReport> {
    params.prime().require_at_least(5)?;
    let sf = form_of(params)?;
    if params.s().is_zero() {
        return Err(domain("break-up check needs s != 0"));
    }
    let part = compute_orbits(enumerate_solutions(params)?);
    breakup_from_partition(&part, sf)
}

pub fn breakup_from_partition(part: &OrbitPartition, sf: SpecialForm) -> Result<BreakupReport> {
    let params = part.params();
    let points = part.solutions().points();
    let labels: Vec<String> = if sf.is_degenerate() {
        points
            .iter()
            .map(|x| degenerate_label(params, x).map(|l| format!("{:?}", l.0)))
            .collect::<Result<_>>()?
    } else {
        points.iter().map(|x| class_label(params, x).map(|l| format!("{l:?}"))).collect::<Result<_>>()?
    };
    let mut class_sizes = BTreeMap::new();
    for l in &labels {
        *class_sizes.entry(l.clone()).or_insert(0) += 1;
    }
    // generic classes are closed half-sets: an orbit may contain ambiguous
    // points next to one definite class, never both definite classes
    let mut seen: Vec<Option<&str>> = vec![None; part.orbits().len()];
    let mut classes_closed = true;
    for (k, l) in labels.iter().enumerate() {
        if l == "Ambiguous" {
            continue;
        }
        let slot = &mut seen[part.component_id()[k] as usize];
        match slot {
            None => *slot = Some(l),
            Some(prev) if *prev != l => classes_closed = false,
            _ => {}
        }
    }
    let conjectured = conjectured_sizes(params)?;
    let sizes = part.sizes();
    Ok(BreakupReport {
        params: params.a_signed(),
        prime: params.prime().get(),
        form: FormReport { i: sf.index.number(), sigma: sf.sigma.as_i64(), alpha: sf.alpha.signed() },
        orbit_count: part.orbits().len(),
        required_orbits: if sf.is_degenerate() { 4 } else { 2 },
        conjecture_partition_matched: sizes == conjectured,
        orbit_sizes: sizes,
        class_sizes,
        classes_closed,
        conjectured_sizes: conjectured,
    })
}
