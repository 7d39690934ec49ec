//! Rational normal scrolls `P(O(d_1) + ... + O(d_m))` over `P^1`.
//!
//! Divisor classes are written as `aM + bF` with `M` the tautological class
//! and `F` a fiber. Top intersections follow from `M^m = sum d_i`,
//! `M^(m-1) F = 1` and `F^2 = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{FanoError, Result};
use crate::exactcore::{BasisTag, DivisorClass, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScrollData {
    pub splitting: Vec<i64>,
}

impl ScrollData {
    /// Sorts the splitting in descending order.
    pub fn new(mut splitting: Vec<i64>) -> Result<Self> {
        if splitting.len() < 2 {
            return Err(FanoError::InvalidInput("a scroll needs rank at least 2".into()));
        }
        if splitting.iter().any(|&d| d < 0) {
            return Err(FanoError::InvalidInput("splitting degrees must be non-negative".into()));
        }
        splitting.sort_unstable_by(|a, b| b.cmp(a));
        Ok(ScrollData { splitting })
    }

    pub fn rank(&self) -> usize {
        self.splitting.len()
    }

    pub fn degree(&self) -> i64 {
        self.splitting.iter().sum()
    }
}

pub fn scroll_h0(s: &ScrollData) -> i64 {
    s.splitting.iter().map(|d| d + 1).sum()
}

pub fn scroll_intersection(s: &ScrollData, classes: &[DivisorClass]) -> Result<Rational> {
    let m = s.rank();
    if classes.len() != m {
        return Err(FanoError::Arity { expected: m, got: classes.len() });
    }
    if let Some(bad) = classes.iter().find(|c| c.basis != BasisTag::MF) {
        return Err(FanoError::Basis(format!("scroll classes live in (M, F), got {:?}", bad.basis)));
    }
    let a: Vec<&Rational> = classes.iter().map(|c| &c.coords[0]).collect();
    let b: Vec<&Rational> = classes.iter().map(|c| &c.coords[1]).collect();
    let all_m = a.iter().fold(Rational::one(), |acc, x| acc * *x) * s.degree();
    let one_f: Rational = (0..m)
        .map(|j| {
            (0..m)
                .filter(|&i| i != j)
                .fold(b[j].clone(), |acc, i| acc * a[i])
        })
        .sum();
    Ok(all_m + one_f)
}

/// `K = -mM + (sum d_i - 2)F`.
pub fn scroll_canonical(s: &ScrollData) -> DivisorClass {
    DivisorClass::mf(-(s.rank() as i64), s.degree() - 2)
}

/// Classes of the form `p(M) + q(M) F` in the Chow ring of a scroll,
/// truncated above the dimension.
#[derive(Clone, Debug)]
struct ChowElement {
    m: Vec<Rational>,
    f: Vec<Rational>,
}

impl ChowElement {
    fn zero(dim: usize) -> Self {
        ChowElement { m: vec![Rational::zero(); dim + 1], f: vec![Rational::zero(); dim + 1] }
    }

    fn linear(dim: usize, c: Rational, a: &Rational, b: &Rational) -> Self {
        let mut x = ChowElement::zero(dim);
        x.m[0] = c;
        if dim >= 1 {
            x.m[1] = a.clone();
        }
        x.f[0] = b.clone();
        x
    }

    fn mul(&self, o: &ChowElement) -> ChowElement {
        let dim = self.m.len() - 1;
        let mut out = ChowElement::zero(dim);
        for i in 0..=dim {
            for j in 0..=dim - i {
                out.m[i + j] = &out.m[i + j] + &self.m[i] * &o.m[j];
                out.f[i + j] = &out.f[i + j] + &self.m[i] * &o.f[j] + &self.f[i] * &o.m[j];
            }
        }
        out
    }

    /// Degree of the top-dimensional part; `M^k F` has dimension `k + 1`.
    fn integrate(&self, s: &ScrollData) -> Rational {
        let dim = self.m.len() - 1;
        &self.m[dim] * s.degree() + &self.f[dim - 1]
    }
}

/// Topological Euler number of a smooth divisor of class `aM + bF` in the
/// scroll, from `c(T) = (1 + 2F) prod (1 + M - d_i F)` and adjunction.
pub fn euler_number_of_divisor(s: &ScrollData, class: &DivisorClass) -> Result<Rational> {
    if class.basis != BasisTag::MF {
        return Err(FanoError::Basis(format!("scroll classes live in (M, F), got {:?}", class.basis)));
    }
    let dim = s.rank();
    let (a, b) = (&class.coords[0], &class.coords[1]);
    let mut c = ChowElement::linear(dim, Rational::one(), &Rational::zero(), &Rational::integer(2));
    for &d in &s.splitting {
        c = c.mul(&ChowElement::linear(dim, Rational::one(), &Rational::one(), &Rational::integer(-d)));
    }
    // c(N)^{-1} = 1 - X + X^2 - ... truncated at the dimension.
    let x = ChowElement::linear(dim, Rational::zero(), a, b);
    let minus_x = ChowElement::linear(dim, Rational::zero(), &-a, &-b);
    let mut inv = ChowElement::linear(dim, Rational::one(), &Rational::zero(), &Rational::zero());
    let mut power = inv.clone();
    for _ in 0..dim {
        power = power.mul(&minus_x);
        for i in 0..=dim {
            inv.m[i] = &inv.m[i] + &power.m[i];
            inv.f[i] = &inv.f[i] + &power.f[i];
        }
    }
    Ok(c.mul(&inv).mul(&x).integrate(s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CandidateStatus {
    /// Passes every numerical test; realization unknown.
    Admissible,
    /// Recorded as an actual Fano threefold.
    Realized,
    /// Passes the numerical tests but is not realized.
    NumericOnly,
    /// Fails the intersection test `X . G' . G^2 >= 0` for `G' = M - kF`.
    Excluded { k: i64, witness: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrollCandidate {
    pub genus: i64,
    pub scroll: ScrollData,
    /// Branch divisor for double covers, or the class of `X` in the scroll.
    pub divisor: DivisorClass,
    #[serde(flatten)]
    pub status: CandidateStatus,
}

/// Partitions of `total` into exactly `parts` positive integers, each in
/// descending order, listed lexicographically from the top.
fn partitions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    fn rec(remaining: i64, parts: usize, max: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let hi = max.min(remaining - (parts as i64 - 1));
        let mut d = hi;
        while d >= 1 {
            if d * parts as i64 >= remaining {
                prefix.push(d);
                rec(remaining - d, parts - 1, d, prefix, out);
                prefix.pop();
            }
            d -= 1;
        }
    }
    let mut out = Vec::new();
    if total >= parts as i64 {
        rec(total, parts, total, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// Rank-3 scrolls carrying a hyperelliptic double cover of genus `g`.
pub fn hyperelliptic_candidates(g: i64) -> Vec<ScrollCandidate> {
    partitions(g - 1, 3)
        .into_iter()
        .map(|splitting| {
            let scroll = ScrollData { splitting };
            let divisor = DivisorClass::mf(4, 2 * (2 - scroll.degree()));
            ScrollCandidate { genus: g, scroll, divisor, status: CandidateStatus::Admissible }
        })
        .collect()
}

/// Rank-4 scrolls containing a trigonal Fano threefold of genus `g`, each
/// tested against `X . (M - kF) . (M - F)^2 >= 0` for `k = 1..=max d_i`.
pub fn trigonal_candidates(g: i64) -> Vec<ScrollCandidate> {
    partitions(g - 2, 4)
        .into_iter()
        .map(|splitting| {
            let scroll = ScrollData { splitting };
            let x = DivisorClass::mf(3, 2 - scroll.degree());
            let status = trigonal_verdict(&scroll, &x);
            ScrollCandidate { genus: g, scroll, divisor: x, status }
        })
        .collect()
}

fn trigonal_verdict(scroll: &ScrollData, x: &DivisorClass) -> CandidateStatus {
    let gg = DivisorClass::mf(1, -1);
    let max_d = scroll.splitting[0];
    for k in 1..=max_d {
        let gp = DivisorClass::mf(1, -k);
        let v = scroll_intersection(scroll, &[x.clone(), gp, gg.clone(), gg.clone()]).expect("rank 4");
        if v.is_negative() {
            return CandidateStatus::Excluded { k, witness: v };
        }
    }
    CandidateStatus::Admissible
}

/// Replaces `Admissible` by `Realized` or `NumericOnly` according to the
/// list of realized splittings.
pub fn mark_realized(cands: &mut [ScrollCandidate], realized: &[Vec<i64>]) {
    for c in cands.iter_mut() {
        if c.status == CandidateStatus::Admissible {
            c.status = if realized.contains(&c.scroll.splitting) {
                CandidateStatus::Realized
            } else {
                CandidateStatus::NumericOnly
            };
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegreeBound {
    BelowBound,
    Minimal,
    Above,
}

/// Compares `deg` with `codim + 1`. Meaningful only for nondegenerate
/// varieties, which cannot be checked from numbers alone.
pub fn minimal_degree_check(deg: i64, ambient_dim: i64, var_dim: i64) -> Result<DegreeBound> {
    if deg < 1 || var_dim < 1 || ambient_dim <= var_dim {
        return Err(FanoError::InvalidInput(format!(
            "need deg >= 1 and ambient_dim > var_dim >= 1, got ({deg}, {ambient_dim}, {var_dim})"
        )));
    }
    let bound = ambient_dim - var_dim + 1;
    Ok(match deg.cmp(&bound) {
        std::cmp::Ordering::Less => DegreeBound::BelowBound,
        std::cmp::Ordering::Equal => DegreeBound::Minimal,
        std::cmp::Ordering::Greater => DegreeBound::Above,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sd(v: &[i64]) -> ScrollData {
        ScrollData::new(v.to_vec()).unwrap()
    }

    #[test]
    fn h0_counts() {
        assert_eq!(scroll_h0(&sd(&[1, 1, 1])), 6);
        assert_eq!(scroll_h0(&sd(&[0, 0])), 2);
        assert_eq!(scroll_h0(&sd(&[2, 2, 1, 1])), 10);
    }

    #[test]
    fn exclusion_value() {
        let s = sd(&[2, 2, 1, 1]);
        let cls = [DivisorClass::mf(3, -4), DivisorClass::mf(1, -3), DivisorClass::mf(1, -1), DivisorClass::mf(1, -1)];
        assert_eq!(scroll_intersection(&s, &cls).unwrap(), -1);
    }

    #[test]
    fn fiber_squared_vanishes() {
        let s = sd(&[3, 1, 1]);
        let f = DivisorClass::mf(0, 1);
        assert_eq!(scroll_intersection(&s, &[f.clone(), f, DivisorClass::mf(5, 2)]).unwrap(), 0);
    }

    #[test]
    fn tautological_top_power() {
        let m = DivisorClass::mf(1, 0);
        assert_eq!(scroll_intersection(&sd(&[1, 1, 1, 1]), &vec![m; 4]).unwrap(), 4);
    }

    #[test]
    fn arity_checked() {
        assert!(matches!(
            scroll_intersection(&sd(&[1, 1, 1]), &[DivisorClass::mf(1, 0)]),
            Err(FanoError::Arity { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn canonical_classes() {
        assert_eq!(scroll_canonical(&sd(&[1, 1, 1])), DivisorClass::mf(-3, 1));
        assert_eq!(scroll_canonical(&sd(&[1, 1, 1, 1])), DivisorClass::mf(-4, 2));
        assert_eq!(scroll_canonical(&sd(&[2, 2, 2])), DivisorClass::mf(-3, 4));
    }

    #[test]
    fn hyperelliptic_lists() {
        let sp = |g| hyperelliptic_candidates(g).into_iter().map(|c| c.scroll.splitting).collect::<Vec<_>>();
        assert_eq!(sp(4), vec![vec![1, 1, 1]]);
        assert_eq!(sp(5), vec![vec![2, 1, 1]]);
        assert_eq!(sp(7), vec![vec![2, 2, 2], vec![3, 2, 1], vec![4, 1, 1]]);
        for c in hyperelliptic_candidates(7) {
            assert_eq!(c.divisor, DivisorClass::mf(4, -8));
        }
    }

    #[test]
    fn realized_marking() {
        let mut c = hyperelliptic_candidates(7);
        mark_realized(&mut c, &[vec![2, 2, 2]]);
        assert_eq!(c[0].status, CandidateStatus::Realized);
        assert_eq!(c[1].status, CandidateStatus::NumericOnly);
        assert_eq!(c[2].status, CandidateStatus::NumericOnly);
    }

    #[test]
    fn trigonal_genus_eight() {
        let c = trigonal_candidates(8);
        let find = |v: &[i64]| c.iter().find(|x| x.scroll.splitting == v).unwrap().status.clone();
        assert_eq!(find(&[2, 2, 1, 1]), CandidateStatus::Admissible);
        assert_eq!(find(&[3, 1, 1, 1]), CandidateStatus::Excluded { k: 3, witness: Rational::integer(-1) });
    }

    #[test]
    fn trigonal_small_genera() {
        let c = trigonal_candidates(6);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].status, CandidateStatus::Admissible);
        assert!(trigonal_candidates(10)
            .iter()
            .any(|x| x.scroll.splitting == [2, 2, 2, 2] && x.status == CandidateStatus::Admissible));
    }

    #[test]
    fn trigonal_euler_numbers() {
        let e = |v: &[i64]| {
            let s = sd(v);
            euler_number_of_divisor(&s, &DivisorClass::mf(3, 2 - s.degree())).unwrap()
        };
        assert_eq!(e(&[1, 1, 1, 1]), -14);
        assert_eq!(e(&[2, 1, 1, 1]), -6);
        assert_eq!(e(&[2, 2, 1, 1]), 2);
        assert_eq!(e(&[2, 2, 2, 2]), 18);
    }

    #[test]
    fn quadric_surface_in_p3_scroll() {
        // A fiber of P^1 x P^1 -> P^1 is P^1 with Euler number 2; M is a
        // section of P(O + O) over P^1 with Euler number 2 as well.
        let s = sd(&[0, 0]);
        assert_eq!(euler_number_of_divisor(&s, &DivisorClass::mf(0, 1)).unwrap(), 2);
        assert_eq!(euler_number_of_divisor(&s, &DivisorClass::mf(1, 0)).unwrap(), 2);
    }

    fn majorizes(x: &[i64], y: &[i64]) -> bool {
        let mut sx = 0;
        let mut sy = 0;
        x.iter().zip(y).all(|(a, b)| {
            sx += a;
            sy += b;
            sx >= sy
        })
    }

    #[test]
    fn trigonal_exclusion_is_monotone() {
        for g in 6..=14 {
            let c = trigonal_candidates(g);
            for x in c.iter().filter(|x| matches!(x.status, CandidateStatus::Excluded { .. })) {
                for y in c.iter().filter(|y| majorizes(&y.scroll.splitting, &x.scroll.splitting)) {
                    assert!(
                        matches!(y.status, CandidateStatus::Excluded { .. }),
                        "{:?} excluded but {:?} is not",
                        x.scroll.splitting,
                        y.scroll.splitting
                    );
                }
            }
        }
    }

    #[test]
    fn branch_class_coefficient() {
        for g in 4..=30 {
            for c in hyperelliptic_candidates(g) {
                assert_eq!(c.divisor, DivisorClass::mf(4, 2 * (2 - (g - 1))));
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn canonical_against_tautological(v in proptest::collection::vec(0i64..8, 2..6)) {
            proptest::prop_assume!(v.iter().sum::<i64>() <= 30);
            let s = sd(&v);
            let m = s.rank();
            let mut cls = vec![DivisorClass::mf(1, 0); m];
            cls[0] = scroll_canonical(&s);
            let expected = -(m as i64) * s.degree() + (s.degree() - 2);
            proptest::prop_assert_eq!(scroll_intersection(&s, &cls).unwrap(), expected);
        }

        #[test]
        fn intersection_is_symmetric(v in proptest::collection::vec(1i64..5, 3..4),
                                     c in proptest::collection::vec((-4i64..5, -4i64..5), 3)) {
            let s = sd(&v);
            let cls: Vec<DivisorClass> = c.iter().map(|&(a, b)| DivisorClass::mf(a, b)).collect();
            let mut rev = cls.clone();
            rev.reverse();
            proptest::prop_assert_eq!(scroll_intersection(&s, &cls).unwrap(), scroll_intersection(&s, &rev).unwrap());
        }
    }

    #[test]
    fn minimal_degree() {
        assert_eq!(minimal_degree_check(4, 5, 2).unwrap(), DegreeBound::Minimal);
        assert_eq!(minimal_degree_check(1, 3, 1).unwrap(), DegreeBound::BelowBound);
        for g in 3..20 {
            assert_eq!(minimal_degree_check(g - 1, g, 2).unwrap(), DegreeBound::Minimal);
        }
        assert!(minimal_degree_check(3, 2, 2).is_err());
    }
}
