//! Weighted projective spaces and numerical invariants of Fano complete
//! intersections in them.

use serde::{Deserialize, Serialize};

use crate::error::{FanoError, Result};
use crate::exactcore::{gcd_all, lcm_all, Rational};
use crate::riemannroch::FanoNumerics;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightSystem {
    pub weights: Vec<u64>,
}

impl WeightSystem {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(FanoError::InvalidInput("need at least two weights".into()));
        }
        if weights.contains(&0) {
            return Err(FanoError::InvalidInput("weights must be positive".into()));
        }
        Ok(WeightSystem { weights })
    }

    /// Dimension `n` of `P(w_0, ..., w_n)`.
    pub fn dim(&self) -> usize {
        self.weights.len() - 1
    }

    fn gcd_without(&self, i: usize) -> u64 {
        let rest: Vec<u64> = self.weights.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &w)| w).collect();
        gcd_all(&rest)
    }
}

pub fn is_well_formed(w: &WeightSystem) -> bool {
    (0..w.weights.len()).all(|i| w.gcd_without(i) == 1)
}

/// Divides out common factors of `n` weights at a time until the system is
/// well-formed. This does not change the weighted projective space.
pub fn normalize(w: &WeightSystem) -> WeightSystem {
    let mut weights = w.weights.clone();
    let total = gcd_all(&weights);
    weights.iter_mut().for_each(|x| *x /= total);
    loop {
        let current = WeightSystem { weights: weights.clone() };
        let Some((i, g)) = (0..weights.len()).map(|i| (i, current.gcd_without(i))).find(|&(_, g)| g > 1) else {
            return current;
        };
        for (j, x) in weights.iter_mut().enumerate() {
            if j != i {
                *x /= g;
            }
        }
    }
}

pub fn pic_index(w: &WeightSystem) -> u64 {
    lcm_all(&w.weights)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteIntersectionSpec {
    pub weights: WeightSystem,
    pub degrees: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiInvariants {
    pub dim: u32,
    pub index: u32,
    /// `H^dim = prod d_j / prod w_i` for `H = O(1)`.
    pub fundamental_degree: Rational,
    /// `(-K)^dim = index^dim H^dim`.
    pub antik_degree: Rational,
    pub genus: Option<i64>,
    /// False when `(-K)^dim` is not an integer.
    pub integral: bool,
    /// The ambient space has dimension below 4, so the Lefschetz argument
    /// for the index does not apply.
    pub lefschetz_warning: bool,
}

impl CiInvariants {
    pub fn numerics(&self) -> Result<FanoNumerics> {
        FanoNumerics::new(self.dim, self.index, self.fundamental_degree.clone())
    }
}

pub fn ci_fano_invariants(ci: &CompleteIntersectionSpec) -> Result<CiInvariants> {
    let w = &ci.weights;
    let n = w.dim();
    let r = ci.degrees.len();
    if r >= n {
        return Err(FanoError::InvalidInput(format!("{r} equations in P^{n} leave no positive-dimensional variety")));
    }
    if ci.degrees.contains(&0) {
        return Err(FanoError::InvalidInput("degrees must be positive".into()));
    }
    if !is_well_formed(w) {
        return Err(FanoError::InvalidInput(format!("weights {:?} are not well-formed", w.weights)));
    }
    let sw: u64 = w.weights.iter().sum();
    let sd: u64 = ci.degrees.iter().sum();
    if sd >= sw {
        return Err(FanoError::NotFano { degrees: sd, weights: sw });
    }
    let dim = (n - r) as u32;
    let index = (sw - sd) as u32;
    let pd: Rational = ci.degrees.iter().fold(Rational::one(), |a, &d| a * d as i64);
    let pw: Rational = w.weights.iter().fold(Rational::one(), |a, &x| a * x as i64);
    let fundamental_degree = pd / pw;
    let antik_degree = Rational::integer(index as i64).pow(dim) * &fundamental_degree;
    let integral = antik_degree.is_integer();
    let genus = match (dim, index, antik_degree.to_i64()) {
        (3, 1, Some(d)) if d % 2 == 0 => Some(d / 2 + 1),
        _ => None,
    };
    Ok(CiInvariants { dim, index, fundamental_degree, antik_degree, genus, integral, lefschetz_warning: n < 4 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(v: &[u64]) -> WeightSystem {
        WeightSystem::new(v.to_vec()).unwrap()
    }

    fn ci(w: &[u64], d: &[u64]) -> CiInvariants {
        ci_fano_invariants(&CompleteIntersectionSpec { weights: ws(w), degrees: d.to_vec() }).unwrap()
    }

    #[test]
    fn well_formedness() {
        assert!(is_well_formed(&ws(&[1, 1, 1, 2, 3])));
        assert!(!is_well_formed(&ws(&[2, 2, 3])));
        assert!(!is_well_formed(&ws(&[1, 7])));
        assert!(is_well_formed(&ws(&[1, 1, 7])));
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize(&ws(&[2, 2, 2, 1])).weights, vec![1, 1, 1, 1]);
        let n = normalize(&ws(&[4, 6, 2, 1]));
        assert_eq!(n.weights, vec![2, 3, 1, 1]);
        assert!(is_well_formed(&n));
        assert_eq!(normalize(&n), n);
    }

    #[test]
    fn weighted_models() {
        let a = ci(&[1, 1, 1, 2, 3], &[6]);
        assert_eq!((a.index, a.antik_degree.to_i64()), (2, Some(8)));
        assert_eq!(a.fundamental_degree, 1);
        let b = ci(&[1, 1, 1, 1, 2], &[4]);
        assert_eq!((b.index, b.antik_degree.to_i64()), (2, Some(16)));
        let c = ci(&[1, 1, 1, 1, 3], &[6]);
        assert_eq!((c.index, c.antik_degree.to_i64(), c.genus), (1, Some(2), Some(2)));
        let d = ci(&[1, 1, 1, 1, 1, 2], &[2, 4]);
        assert_eq!((d.index, d.antik_degree.to_i64(), d.genus), (1, Some(4), Some(3)));
        assert!(!d.lefschetz_warning && !a.lefschetz_warning);
        assert!(ci(&[1, 1, 1, 1], &[2]).lefschetz_warning);
    }

    #[test]
    fn cubic_threefold() {
        let c = ci(&[1, 1, 1, 1, 1], &[3]);
        assert_eq!((c.index, c.antik_degree.to_i64()), (2, Some(24)));
    }

    #[test]
    fn not_fano() {
        let e = ci_fano_invariants(&CompleteIntersectionSpec { weights: ws(&[1, 1, 1, 1, 1]), degrees: vec![5] });
        assert!(matches!(e, Err(FanoError::NotFano { .. })));
    }

    #[test]
    fn picard_index() {
        assert_eq!(pic_index(&ws(&[1, 1, 1, 2, 3])), 6);
        assert_eq!(pic_index(&ws(&[1, 1, 1])), 1);
        assert_eq!(pic_index(&ws(&[1, 1, 2, 5])), 10);
    }
}
