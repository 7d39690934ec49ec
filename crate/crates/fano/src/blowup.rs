//! Intersection numbers on the blowup of a smooth threefold along a smooth
//! curve or at a point, always reported on the basis `(-K~, E)`.

use serde::{Deserialize, Serialize};

use crate::error::{FanoError, Result};
use crate::exactcore::{BasisTag, DivisorClass, Rational, TrilinearForm};

/// A smooth curve `Z` on the blown-up variety `V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveCenter {
    /// `(-K_V) . Z`
    pub deg_antik: i64,
    pub genus: i64,
}

impl CurveCenter {
    pub fn new(deg_antik: i64, genus: i64) -> Result<Self> {
        if deg_antik < 1 || genus < 0 {
            return Err(FanoError::InvalidInput(format!(
                "curve center needs (-K).Z >= 1 and genus >= 0, got ({deg_antik}, {genus})"
            )));
        }
        Ok(CurveCenter { deg_antik, genus })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointCenter;

/// The form of a blowup together with a flag raised when `(-K~)^3 <= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blowup {
    pub form: TrilinearForm,
    pub not_big: bool,
}

impl Blowup {
    fn new(form: TrilinearForm) -> Self {
        let not_big = !form.values().expect("rank-2 form")[0].is_positive();
        Blowup { form, not_big }
    }
}

/// Rewrites a form given on `(P, E)`, where `-K~ = lambda P - delta E`, in
/// the basis `(-K~, E)`.
///
/// `P` is usually a pullback such as `sigma^*(-K)` or `sigma^*H`.
pub fn pullback_to_ke(raw: &TrilinearForm, lambda: i64, delta: i64) -> Result<TrilinearForm> {
    let v = raw.values().ok_or_else(|| FanoError::Basis("expected a rank-2 form".into()))?;
    let raw = TrilinearForm::mf(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone());
    raw.change_basis([&DivisorClass::mf(lambda, -delta), &DivisorClass::mf(0, 1)], BasisTag::KE)
}

/// The inverse of [`pullback_to_ke`]: `P = (-K~ + delta E) / lambda` must be
/// integral, so `lambda` is restricted to 1.
pub fn ke_to_pullback(form: &TrilinearForm, delta: i64) -> Result<TrilinearForm> {
    form.change_basis([&DivisorClass::ke(1, delta), &DivisorClass::ke(0, 1)], BasisTag::MF)
}

pub fn blowup_curve(antik_cube: impl Into<Rational>, center: CurveCenter) -> Result<Blowup> {
    let c = antik_cube.into();
    if !c.is_positive() {
        return Err(FanoError::InvalidInput(format!("(-K)^3 = {c} must be positive")));
    }
    let d = center.deg_antik;
    let g = center.genus;
    // On (sigma^*(-K), E): sigma^*A . sigma^*B . E = 0, sigma^*A . E^2 = -A.Z,
    // E^3 = -deg N = 2 - 2g + K.Z.
    let raw = TrilinearForm::mf(c, 0, -d, 2 - 2 * g - d);
    Ok(Blowup::new(pullback_to_ke(&raw, 1, 1)?))
}

pub fn blowup_point(antik_cube: impl Into<Rational>) -> Result<Blowup> {
    let c = antik_cube.into();
    if !c.is_positive() {
        return Err(FanoError::InvalidInput(format!("(-K)^3 = {c} must be positive")));
    }
    let raw = TrilinearForm::mf(c, 0, 0, 1);
    Ok(Blowup::new(pullback_to_ke(&raw, 1, 2)?))
}

pub fn anticanonical_cube_after_curve(antik_cube: impl Into<Rational>, center: CurveCenter) -> Result<Rational> {
    let b = blowup_curve(antik_cube, center)?;
    Ok(b.form.values().expect("rank-2 form")[0].clone())
}
