//! Exact lattice width of 4-simplices with optimality certificates.
//!
//! Every vertex value set contains 0 (the origin vertex of the standard
//! simplex, or the translated pivot of a general one), so a functional of
//! spread at most `W` has every value in `[-W, W]`. Searching all
//! windows of size `W = 1, 2, ...` in turn is therefore complete, and the
//! first level with a dual functional is the width.
//!
//! Ties are broken deterministically: among optimal functionals the
//! certificate carries the lexicographically smallest one whose first
//! nonzero coordinate is positive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{CyclicSimplexSpec, GeneralSimplex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthCertificate {
    pub functional: [i64; 4],
    pub vertex_values: [i64; 5],
    pub width: i64,
    pub optimal: bool,
}

impl WidthCertificate {
    /// Certificate for `y` on the standard simplex `conv(0, e1..e4)`.
    pub fn standard(functional: [i64; 4], optimal: bool) -> Self {
        let y = functional;
        let vertex_values = [0, y[0], y[1], y[2], y[3]];
        WidthCertificate { functional, vertex_values, width: spread(&vertex_values), optimal }
    }

    /// Checks the certificate against a cyclic spec: nonzero dual functional,
    /// standard-simplex vertex values and a consistent spread.
    pub fn validate(&self, spec: &CyclicSimplexSpec) -> bool {
        let y = self.functional;
        y != [0; 4]
            && is_dual(spec, &y)
            && self.vertex_values == [0, y[0], y[1], y[2], y[3]]
            && self.width == spread(&self.vertex_values)
    }
}

pub fn spread(values: &[i64]) -> i64 {
    let max = values.iter().copied().max().unwrap_or(0);
    let min = values.iter().copied().min().unwrap_or(0);
    max - min
}

fn is_dual(spec: &CyclicSimplexSpec, y: &[i64; 4]) -> bool {
    let n = spec.det() as i128;
    let dot: i128 = y.iter().zip(spec.residues()).map(|(&a, b)| a as i128 * b as i128).sum();
    dot.rem_euclid(n) == 0
}

/// Initial upper bound: 1 if some coordinate functional is dual, else `N`
/// (the functional `N·e1` is always dual).
pub fn initial_bound(spec: &CyclicSimplexSpec) -> i64 {
    if spec.residues().contains(&0) {
        1
    } else {
        spec.det()
    }
}

/// Lexicographically first sign-normalised `y` with all of `0, y1..y4`
/// inside a window of size `w` that passes `accept`.
fn first_in_window(w: i64, accept: &mut impl FnMut(&[i64; 4]) -> bool) -> Option<[i64; 4]> {
    fn rec(
        i: usize,
        lo: i64,
        hi: i64,
        w: i64,
        y: &mut [i64; 4],
        all_zero: bool,
        accept: &mut impl FnMut(&[i64; 4]) -> bool,
    ) -> bool {
        if i == 4 {
            return !all_zero && accept(y);
        }
        let start = if all_zero { 0 } else { hi - w };
        for v in start..=lo + w {
            y[i] = v;
            if rec(i + 1, lo.min(v), hi.max(v), w, y, all_zero && v == 0, accept) {
                return true;
            }
        }
        false
    }
    let mut y = [0; 4];
    rec(0, 0, 0, w, &mut y, true, accept).then_some(y)
}

/// Optimal width of the standard simplex in `Z^4 + Z·a/N`.
pub fn width(spec: &CyclicSimplexSpec) -> WidthCertificate {
    let bound = initial_bound(spec);
    for w in 1..=bound {
        if let Some(y) = first_in_window(w, &mut |y| is_dual(spec, y)) {
            let cert = WidthCertificate::standard(y, true);
            assert!(cert.validate(spec), "width certificate failed self-check for {spec}");
            debug_assert_eq!(cert.width, w);
            return cert;
        }
    }
    unreachable!("N·e1 is dual with spread N")
}

/// Optimal width of a lattice simplex over the standard dual `Z^4`.
///
/// Values are taken relative to vertex 0, so `t = E·y` with `E` the edge
/// matrix and `|t_i| <= W`; hence `|y_j| <= W · Σ_i |adj(E)_{ji}| / |det E|`.
/// The first three coordinates are scanned inside that box and the last is
/// solved for: it must put every edge value inside the window spanned by
/// the values already fixed.
pub fn width_general(s: &GeneralSimplex) -> Result<WidthCertificate> {
    let e = s.edge_matrix(0);
    let det = e.determinant()?;
    if det == 0 {
        return Err(Error::DegenerateSimplex);
    }
    let adj = e.adjugate()?;
    let weight: Vec<i128> = (0..4).map(|j| (0..4).map(|i| adj.get(j, i).abs()).sum()).collect();
    let edges: Vec<[i64; 4]> = (0..4).map(|i| {
        let r = e.row(i);
        [r[0] as i64, r[1] as i64, r[2] as i64, r[3] as i64]
    }).collect();

    // W0: spread of the best coordinate functional
    let v = s.vertices();
    let upper = (0..4).map(|c| spread(&v.map(|x| x[c]))).filter(|&w| w > 0).min().expect("full-dimensional");

    for w in 1..=upper {
        let bound: Vec<i64> = weight.iter().map(|&x| (w as i128 * x / det.abs()) as i64).collect();
        if let Some(y) = general_level(&edges, &bound, w) {
            let vertex_values = v.map(|x| (0..4).map(|c| x[c] * y[c]).sum());
            let width = spread(&vertex_values);
            debug_assert_eq!(width, w);
            return Ok(WidthCertificate { functional: y, vertex_values, width, optimal: true });
        }
    }
    unreachable!("a coordinate functional attains the upper bound")
}

fn general_level(edges: &[[i64; 4]], bound: &[i64], w: i64) -> Option<[i64; 4]> {
    for y0 in 0..=bound[0] {
        let lo0 = if y0 == 0 { 0 } else { -bound[1] };
        for y1 in lo0..=bound[1] {
            let lo1 = if y0 == 0 && y1 == 0 { 0 } else { -bound[2] };
            for y2 in lo1..=bound[2] {
                let head_zero = y0 == 0 && y1 == 0 && y2 == 0;
                let partial: Vec<i64> = edges.iter().map(|e| e[0] * y0 + e[1] * y1 + e[2] * y2).collect();
                let (mut fmin, mut fmax) = (0i64, 0i64);
                for (p, e) in partial.iter().zip(edges) {
                    if e[3] == 0 {
                        fmin = fmin.min(*p);
                        fmax = fmax.max(*p);
                    }
                }
                if fmax - fmin > w {
                    continue;
                }
                // every variable value must land in [fmax - w, fmin + w]
                let (mut y3_lo, mut y3_hi) = (-bound[3], bound[3]);
                if head_zero {
                    y3_lo = y3_lo.max(1);
                }
                for (p, e) in partial.iter().zip(edges) {
                    let c = e[3];
                    if c == 0 {
                        continue;
                    }
                    let (a, b) = (fmax - w - p, fmin + w - p);
                    let (lo, hi) = if c > 0 {
                        (div_ceil(a, c), div_floor(b, c))
                    } else {
                        (div_ceil(b, c), div_floor(a, c))
                    };
                    y3_lo = y3_lo.max(lo);
                    y3_hi = y3_hi.min(hi);
                }
                for y3 in y3_lo..=y3_hi {
                    let vals = partial.iter().zip(edges).map(|(p, e)| p + e[3] * y3);
                    let (mut lo, mut hi) = (0i64, 0i64);
                    for v in vals {
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                    if hi - lo <= w {
                        return Some([y0, y1, y2, y3]);
                    }
                }
            }
        }
    }
    None
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b) - if b < 0 && a.rem_euclid(b) != 0 { 1 } else { 0 }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

/// Which window a relation-derived functional maps the vertices into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValueSet {
    /// `{0, 1, 2}`
    ZeroOneTwo,
    /// `{-1, 0, 1}`
    MinusOneZeroOne,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFunctional {
    pub functional: [i64; 4],
    /// The relation after shifting its `j`-th entry to zero.
    pub shifted_relation: [i64; 5],
    pub vertex_values: [i64; 5],
    pub value_set: ValueSet,
    pub spread: i64,
}

/// Turns a `{0,1,2}` relation `r` of the quintuple `q` into a functional on
/// the `j`-th projection (`j` is 1-based).
///
/// The `j`-th entry of the relation is moved to zero: kept if it is 0,
/// replaced by `(2,2,2,2,2) - r` if it is 2, by `r - (1,1,1,1,1)` if it is 1.
/// Because `q` sums to zero the shifted relation stays orthogonal to `q`, so
/// after dropping coordinate `j` it annihilates the projected quintuple.
pub fn functional_from_relation(q: &[i64; 5], relation: &[i64; 5], j: usize) -> Result<RelationFunctional> {
    if !(1..=5).contains(&j) {
        return Err(Error::InvalidArgument(format!("projection index {j} not in 1..=5")));
    }
    if relation.iter().any(|r| !(0..=2).contains(r)) {
        return Err(Error::InvalidArgument(format!("relation {relation:?} has coefficients outside {{0,1,2}}")));
    }
    let dot: i128 = q.iter().zip(relation).map(|(&a, &b)| a as i128 * b as i128).sum();
    if dot != 0 {
        return Err(Error::InvalidArgument(format!("relation {relation:?} is not orthogonal to {q:?}")));
    }
    let (shifted, value_set) = match relation[j - 1] {
        0 => (*relation, ValueSet::ZeroOneTwo),
        2 => (relation.map(|r| 2 - r), ValueSet::ZeroOneTwo),
        _ => (relation.map(|r| r - 1), ValueSet::MinusOneZeroOne),
    };
    let mut y = [0i64; 4];
    for (slot, (_, &v)) in y.iter_mut().zip(shifted.iter().enumerate().filter(|&(i, _)| i != j - 1)) {
        *slot = v;
    }
    let vertex_values = [0, y[0], y[1], y[2], y[3]];
    Ok(RelationFunctional { functional: y, shifted_relation: shifted, vertex_values, value_set, spread: spread(&vertex_values) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::to_standard_form;

    fn spec(n: i64, a: [i64; 4]) -> CyclicSimplexSpec {
        CyclicSimplexSpec::new(n, a).unwrap()
    }

    /// Oracle: plain scan of the full box [-b, b]^4, no windows, no ordering tricks.
    fn brute_width(spec: &CyclicSimplexSpec, b: i64) -> i64 {
        let mut best = i64::MAX;
        for y0 in -b..=b {
            for y1 in -b..=b {
                for y2 in -b..=b {
                    for y3 in -b..=b {
                        let y = [y0, y1, y2, y3];
                        if y != [0; 4] && is_dual(spec, &y) {
                            best = best.min(spread(&[0, y0, y1, y2, y3]));
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn unimodular_width_one() {
        let c = width(&spec(1, [0; 4]));
        assert_eq!(c.width, 1);
        assert!(c.optimal);
        assert_eq!(c.functional.iter().filter(|&&x| x != 0).count(), 1);
    }

    #[test]
    fn order_five_width_one() {
        let s = spec(5, [1, 2, 3, 4]);
        let c = width(&s);
        assert_eq!(c.width, 1);
        assert!(c.validate(&s));
        // the hand-derived functional (1,0,0,1) is an equally good certificate
        let alt = WidthCertificate::standard([1, 0, 0, 1], true);
        assert!(alt.validate(&s));
        assert_eq!(alt.vertex_values, [0, 1, 0, 0, 1]);
        assert_eq!(alt.width, 1);
        assert_eq!(c.functional, [0, 1, 1, 0]);
    }

    fn apex(v: [i64; 4]) -> GeneralSimplex {
        GeneralSimplex::new([[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], v]).unwrap()
    }

    #[test]
    fn width_four_example() {
        let s = *to_standard_form(&apex([6, 14, 17, 101]), 0).unwrap().cyclic().unwrap();
        assert_eq!(s.det(), 101);
        let c = width(&s);
        assert_eq!(c.width, 4);
        assert_eq!(brute_width(&s, 4), 4);
    }

    #[test]
    fn apex_65_has_width_three() {
        // (-3,-1,-2,1) takes the values 0,-3,-1,-2,-1 on the vertices
        let s = *to_standard_form(&apex([6, 14, 17, 65]), 0).unwrap().cyclic().unwrap();
        assert_eq!(width(&s).width, 3);
        assert_eq!(brute_width(&s, 4), 3);
        let y = [-3i64, -1, -2, 1];
        let last: i64 = [6, 14, 17, 65].iter().zip(y).map(|(a, b)| a * b).sum();
        assert_eq!(spread(&[0, y[0], y[1], y[2], last]), 3);
    }

    #[test]
    fn search_matches_brute_force_on_small_specs() {
        for n in 2..14i64 {
            for a in [[1, 2, 3, 4], [1, 1, 2, 3], [1, 3, 5, 7], [2, 3, 5, 1], [1, n - 1, 2, 5]] {
                let Ok(s) = CyclicSimplexSpec::new(n, a) else { continue };
                let c = width(&s);
                assert!(c.validate(&s));
                assert_eq!(c.width, brute_width(&s, c.width + 1), "spec {s}");
            }
        }
    }

    #[test]
    fn general_width_examples() {
        let unit = GeneralSimplex::new([[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]).unwrap();
        assert_eq!(width_general(&unit).unwrap().width, 1);
        for (v, w) in [([6, 14, 17, 65], 3), ([6, 14, 17, 101], 4)] {
            let c = width_general(&apex(v)).unwrap();
            assert_eq!(c.width, w);
            assert_eq!(spread(&c.vertex_values), w);
            let via_spec = width(to_standard_form(&apex(v), 0).unwrap().cyclic().unwrap());
            assert_eq!(via_spec.width, w);
        }
    }

    #[test]
    fn relation_functional_examples() {
        let f = functional_from_relation(&[9, 1, -2, -3, -5], &[0, 2, 1, 0, 0], 5).unwrap();
        assert_eq!(f.functional, [0, 2, 1, 0]);
        assert_eq!(f.vertex_values, [0, 0, 2, 1, 0]);
        assert_eq!(f.spread, 2);
        assert_eq!(f.value_set, ValueSet::ZeroOneTwo);

        // family (i) with x=1, y=2, z=3
        let f = functional_from_relation(&[1, -1, 2, 3, -5], &[1, 1, 0, 0, 0], 5).unwrap();
        assert_eq!(f.functional, [1, 1, 0, 0]);
        assert_eq!(f.spread, 1);

        let f = functional_from_relation(&[12, 3, -4, -5, -6], &[0, 2, 0, 0, 1], 5).unwrap();
        assert_eq!(f.shifted_relation, [-1, 1, -1, -1, 0]);
        assert_eq!(f.functional, [-1, 1, -1, -1]);
        assert_eq!(f.vertex_values, [0, -1, 1, -1, -1]);
        assert_eq!(f.value_set, ValueSet::MinusOneZeroOne);
        assert_eq!(-12 + 3 + 4 + 5, 0);

        // entry 2 at j: (2,2,2,2,2) - r
        let f = functional_from_relation(&[9, 1, -2, -3, -5], &[2, 0, 1, 2, 2], 1).unwrap();
        assert_eq!(f.shifted_relation, [0, 2, 1, 0, 0]);
        assert_eq!(f.functional, [2, 1, 0, 0]);
    }

    #[test]
    fn relation_functional_rejects_bad_input() {
        assert!(functional_from_relation(&[9, 1, -2, -3, -5], &[0, 2, 1, 0, 0], 0).is_err());
        assert!(functional_from_relation(&[9, 1, -2, -3, -5], &[0, 2, 1, 0, 0], 6).is_err());
        assert!(functional_from_relation(&[9, 1, -2, -3, -5], &[0, 3, 1, 0, 0], 5).is_err());
        assert!(functional_from_relation(&[1, 1, 1, 1, -4], &[1, 0, 0, 0, 1], 5).is_err());
    }

    #[test]
    fn division_helpers() {
        for a in -20..20 {
            for b in [-7, -3, -1, 1, 2, 5] {
                let q = a as f64 / b as f64;
                assert_eq!(div_floor(a, b), q.floor() as i64, "{a}/{b}");
                assert_eq!(div_ceil(a, b), q.ceil() as i64, "{a}/{b}");
            }
        }
    }
}
