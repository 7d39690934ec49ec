//! Hilbert polynomials of Fano varieties of coindex at most 3.
//!
//! The polynomial `chi(t) = chi(O(tH))` is pinned down by its leading term
//! `d t^n / n!`, by `chi(0) = 1`, by the vanishing `chi(-k) = 0` for
//! `0 < k < index`, and by Serre duality `chi(-index - t) = (-1)^n chi(t)`.
//! For coindex at most 3 these conditions have a unique solution, which is
//! found here by exact Gaussian elimination.

use serde::{Deserialize, Serialize};

use crate::error::{FanoError, Result};
use crate::exactcore::Rational;

/// Numerical data of a Fano variety polarized by its fundamental divisor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoNumerics {
    pub dim: u32,
    pub index: u32,
    /// `H^n` for the fundamental divisor `H`.
    pub degree: Rational,
    /// Present only in the coindex-3 case, where `H^n = 2g - 2`.
    pub genus: Option<i64>,
}

impl FanoNumerics {
    pub fn new(dim: u32, index: u32, degree: impl Into<Rational>) -> Result<Self> {
        let degree = degree.into();
        if dim == 0 {
            return Err(FanoError::InvalidInput("dimension must be positive".into()));
        }
        if index == 0 || index > dim + 1 {
            return Err(FanoError::InvalidInput(format!("index {index} outside 1..={}", dim + 1)));
        }
        if !degree.is_positive() {
            return Err(FanoError::InvalidInput(format!("degree {degree} must be positive")));
        }
        if index == dim + 1 && degree != 1 {
            return Err(FanoError::InvalidInput("index n+1 forces degree 1".into()));
        }
        if index == dim && degree != 2 {
            return Err(FanoError::InvalidInput("index n forces degree 2".into()));
        }
        let genus = if dim >= 3 && index == dim - 2 {
            let d = degree
                .to_i64()
                .ok_or_else(|| FanoError::Parity(format!("degree {degree} is not an integer")))?;
            Some(genus_from_degree(d)?)
        } else {
            None
        };
        Ok(FanoNumerics { dim, index, degree, genus })
    }

    /// Coindex-3 data from the genus: `H^n = 2g - 2`.
    pub fn from_genus(dim: u32, genus: i64) -> Result<Self> {
        if dim < 3 {
            return Err(FanoError::GenusUndefined { dim, index: 0 });
        }
        if genus < 2 {
            return Err(FanoError::InvalidInput(format!("genus {genus} must be at least 2")));
        }
        FanoNumerics::new(dim, dim - 2, degree_from_genus(genus))
    }

    pub fn coindex(&self) -> i64 {
        self.dim as i64 + 1 - self.index as i64
    }

    pub fn genus(&self) -> Result<i64> {
        self.genus.ok_or(FanoError::GenusUndefined { dim: self.dim, index: self.index })
    }
}

/// `g = d/2 + 1`; odd degrees have no genus.
pub fn genus_from_degree(degree: i64) -> Result<i64> {
    if degree % 2 != 0 {
        return Err(FanoError::Parity(format!("degree {degree} is odd")));
    }
    Ok(degree / 2 + 1)
}

pub fn degree_from_genus(genus: i64) -> i64 {
    2 * genus - 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenusOrDegree {
    Genus(i64),
    Degree(i64),
}

/// Converts a genus to the degree of an index-1 threefold and back.
pub fn genus_degree(x: GenusOrDegree) -> Result<GenusOrDegree> {
    match x {
        GenusOrDegree::Genus(g) => Ok(GenusOrDegree::Degree(degree_from_genus(g))),
        GenusOrDegree::Degree(d) => genus_from_degree(d).map(GenusOrDegree::Genus),
    }
}

/// A polynomial with exact coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertPolynomial {
    pub coefficients: Vec<Rational>,
}

impl HilbertPolynomial {
    pub fn eval(&self, t: &Rational) -> Rational {
        self.coefficients.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_int(&self, t: i64) -> Rational {
        self.eval(&Rational::integer(t))
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }
}

pub fn hilbert_polynomial(fv: &FanoNumerics) -> Result<HilbertPolynomial> {
    if fv.coindex() > 3 {
        return Err(FanoError::UnsupportedCoindex(fv.coindex()));
    }
    let n = fv.dim as usize;
    let iota = fv.index as i64;
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();

    let mut lead = vec![Rational::zero(); n + 1];
    lead[n] = Rational::one();
    rows.push((lead, &fv.degree / factorial(n as u32)));

    rows.push((powers(&Rational::zero(), n), Rational::one()));
    for k in 1..iota {
        rows.push((powers(&Rational::integer(-k), n), Rational::zero()));
    }
    // Serre duality, imposed at n+1 points so that it holds identically.
    let sign = if n % 2 == 0 { 1 } else { -1 };
    for t in 0..=(n as i64) {
        let left = powers(&Rational::integer(-iota - t), n);
        let right = powers(&Rational::integer(t), n);
        let row = left.iter().zip(&right).map(|(l, r)| l - r * sign).collect();
        rows.push((row, Rational::zero()));
    }

    let coefficients = solve_unique(rows, n + 1).map_err(|e| match e {
        SolveError::Underdetermined => FanoError::UnsupportedCoindex(fv.coindex()),
        SolveError::Inconsistent => {
            FanoError::InvalidInput(format!("no Hilbert polynomial exists for {fv:?}"))
        }
    })?;
    Ok(HilbertPolynomial { coefficients })
}

/// `h^0(X, H)` for the fundamental divisor.
pub fn h0_fundamental(fv: &FanoNumerics) -> Result<i64> {
    let n = fv.dim as i64;
    match fv.coindex() {
        0 => Ok(n + 1),
        1 => Ok(n + 2),
        2 => fv
            .degree
            .to_i64()
            .map(|d| n + d - 1)
            .ok_or_else(|| FanoError::InvalidInput(format!("degree {} is not an integer", fv.degree))),
        3 => Ok(n + fv.genus()? - 1),
        c => Err(FanoError::UnsupportedCoindex(c)),
    }
}

/// `h^0(S, -tK_S)`-style count on a surface: `d t (t + index) / 2 + 1`.
pub fn surface_h0(d: i64, index: i64, t: i64) -> Result<i64> {
    if t < 0 || d < 1 {
        return Err(FanoError::InvalidInput(format!("need t >= 0 and d >= 1, got t={t}, d={d}")));
    }
    let v = Rational::new(d * t * (t + index), 2) + 1;
    v.to_i64().ok_or_else(|| FanoError::Parity(format!("d t (t + index) = {} is odd", d * t * (t + index))))
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * k)
}

fn powers(x: &Rational, n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut p = Rational::one();
    for _ in 0..=n {
        out.push(p.clone());
        p = &p * x;
    }
    out
}

enum SolveError {
    Underdetermined,
    Inconsistent,
}

fn solve_unique(mut rows: Vec<(Vec<Rational>, Rational)>, unknowns: usize) -> std::result::Result<Vec<Rational>, SolveError> {
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r].0[col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row].0[col].recip().expect("pivot is nonzero");
        let (prow, prhs) = rows[pivot_row].clone();
        let prow: Vec<Rational> = prow.iter().map(|x| x * &inv).collect();
        let prhs = prhs * &inv;
        for r in 0..rows.len() {
            if r == pivot_row || rows[r].0[col].is_zero() {
                continue;
            }
            let factor = rows[r].0[col].clone();
            for c in 0..unknowns {
                rows[r].0[c] = &rows[r].0[c] - &factor * &prow[c];
            }
            rows[r].1 = &rows[r].1 - &factor * &prhs;
        }
        rows[pivot_row] = (prow, prhs);
        pivots.push(col);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|(_, rhs)| !rhs.is_zero()) {
        return Err(SolveError::Inconsistent);
    }
    if pivots.len() < unknowns {
        return Err(SolveError::Underdetermined);
    }
    Ok(rows.into_iter().take(unknowns).map(|(_, rhs)| rhs).collect())
}
