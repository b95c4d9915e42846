//! Intersection theory on the blow-up `X` of `P^2` or `P^3` at `r` general
//! points.
//!
//! A class is stored as `(d; m_1, ..., m_r)` meaning `dH - sum m_i E_i`.
//! Products follow from `H^n = 1`, `E_i^n = (-1)^(n-1)` and the vanishing of
//! all mixed products, which gives
//!
//! ```text
//! P^2:  A.B   = d_A d_B     - sum m_A m_B
//! P^3:  A.B.C = d_A d_B d_C - sum m_A m_B m_C
//! ```
//!
//! with canonical classes `(-3; -1^r)` and `(-4; -2^r)`. On the threefold,
//! Riemann-Roch reads `chi(D) = [D (D-K) (2D-K) + c2.D] / 12 + 1` with
//! `c2.(dH - sum m E) = 6d`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, ParseError, Result};
use crate::par::Execution;
use crate::parse::{write_runs, Cursor};
use crate::syscore::FatPointSystem;

/// `dH - sum m_i E_i` on the blow-up of `P^n` (`n` is 2 or 3). Negative
/// entries are allowed and never clamped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DivisorClass {
    ambient_dim: usize,
    d: i64,
    m: Vec<i64>,
}

fn check_dim(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::Domain(format!("blow-ups are supported over P^2 and P^3, not P^{n}")))
    }
}

impl DivisorClass {
    pub fn new(ambient_dim: usize, d: i64, m: Vec<i64>) -> Result<Self> {
        check_dim(ambient_dim)?;
        Ok(Self { ambient_dim, d, m })
    }

    pub fn zero(ambient_dim: usize, r: usize) -> Result<Self> {
        Self::new(ambient_dim, 0, vec![0; r])
    }

    pub fn hyperplane(ambient_dim: usize, r: usize) -> Result<Self> {
        Self::new(ambient_dim, 1, vec![0; r])
    }

    /// The class `E_i`, i.e. `(0; 0, ..., -1, ..., 0)`.
    pub fn exceptional(ambient_dim: usize, r: usize, i: usize) -> Result<Self> {
        if i >= r {
            return Err(Error::Domain(format!("point index {i} out of range for {r} points")));
        }
        let mut m = vec![0; r];
        m[i] = -1;
        Self::new(ambient_dim, 0, m)
    }

    pub fn from_system(sys: &FatPointSystem) -> Result<Self> {
        Self::new(sys.ambient_dim(), sys.degree() as i64, sys.mults().iter().map(|&m| m as i64).collect())
    }

    /// The fat-point system with this class, when every coefficient is
    /// non-negative.
    pub fn to_system(&self) -> Option<FatPointSystem> {
        let degree = u32::try_from(self.d).ok()?;
        let mults = self.m.iter().map(|&m| u32::try_from(m).ok()).collect::<Option<Vec<_>>>()?;
        FatPointSystem::new(self.ambient_dim, degree, mults).ok()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn mults(&self) -> &[i64] {
        &self.m
    }

    pub fn r(&self) -> usize {
        self.m.len()
    }

    /// Same class with zero coefficients appended up to `len` points.
    pub fn padded(&self, len: usize) -> Self {
        let mut m = self.m.clone();
        if m.len() < len {
            m.resize(len, 0);
        }
        Self { ambient_dim: self.ambient_dim, d: self.d, m }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Result<Self> {
        same_space(self, other)?;
        Ok(Self {
            ambient_dim: self.ambient_dim,
            d: f(self.d, other.d),
            m: self.m.iter().zip(&other.m).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self { ambient_dim: self.ambient_dim, d: k * self.d, m: self.m.iter().map(|&x| k * x).collect() }
    }

    /// Parses `[d; m_1, m_2^k, ...]`; the point list may be omitted (`[d]`).
    pub fn parse(ambient_dim: usize, s: &str) -> Result<Self> {
        check_dim(ambient_dim)?;
        let mut c = Cursor::new(s);
        let parsed = (|| -> Result<Self, ParseError> {
            c.expect('[')?;
            let d = c.int(true)?;
            let m = if c.eat(';') { c.list(true, ']')? } else { Vec::new() };
            c.expect(']')?;
            c.finish()?;
            Ok(Self { ambient_dim, d, m })
        })();
        Ok(parsed?)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = format!("[{}", self.d);
        if !self.m.is_empty() {
            s.push(';');
            write_runs(&mut s, &self.m);
        }
        s.push(']');
        f.write_str(&s)
    }
}

fn same_space(a: &DivisorClass, b: &DivisorClass) -> Result<()> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::Mismatch { what: "ambient dimension", left: a.ambient_dim, right: b.ambient_dim });
    }
    if a.r() != b.r() {
        return Err(Error::Mismatch { what: "number of blown-up points", left: a.r(), right: b.r() });
    }
    Ok(())
}

fn require_dim(d: &DivisorClass, n: usize) -> Result<()> {
    if d.ambient_dim == n {
        Ok(())
    } else {
        Err(Error::WrongDimension { expected: n, found: d.ambient_dim })
    }
}

/// The blow-up of `P^n` at `r` points, as far as the Chow ring needs it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChowContext {
    pub ambient_dim: usize,
    pub r: usize,
}

impl ChowContext {
    pub fn new(ambient_dim: usize, r: usize) -> Result<Self> {
        check_dim(ambient_dim)?;
        Ok(Self { ambient_dim, r })
    }

    pub fn of(d: &DivisorClass) -> Self {
        Self { ambient_dim: d.ambient_dim, r: d.r() }
    }

    /// `K_X = -(n+1) H + (n-1) sum E_i`.
    pub fn canonical(&self) -> DivisorClass {
        let n = self.ambient_dim as i64;
        DivisorClass { ambient_dim: self.ambient_dim, d: -(n + 1), m: vec![-(n - 1); self.r] }
    }
}

pub fn canonical(ctx: &ChowContext) -> DivisorClass {
    ctx.canonical()
}

/// Triple product on the threefold blow-up.
pub fn intersect3(a: &DivisorClass, b: &DivisorClass, c: &DivisorClass) -> Result<i64> {
    require_dim(a, 3)?;
    same_space(a, b)?;
    same_space(a, c)?;
    let tail: i64 = a.m.iter().zip(&b.m).zip(&c.m).map(|((x, y), z)| x * y * z).sum();
    Ok(a.d * b.d * c.d - tail)
}

/// Intersection pairing on the surface blow-up.
pub fn intersect2(a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
    require_dim(a, 2)?;
    same_space(a, b)?;
    let tail: i64 = a.m.iter().zip(&b.m).map(|(x, y)| x * y).sum();
    Ok(a.d * b.d - tail)
}

/// Euler characteristic by Riemann-Roch on the threefold blow-up.
pub fn chi_rr(d: &DivisorClass) -> Result<i64> {
    require_dim(d, 3)?;
    let k = ChowContext::of(d).canonical();
    let l_minus_k = d.sub(&k)?;
    let two_l_minus_k = d.scale(2).sub(&k)?;
    let numerator = intersect3(d, &l_minus_k, &two_l_minus_k)? + 6 * d.d;
    if numerator % 12 != 0 {
        return Err(Error::Invariant(format!("Riemann-Roch numerator {numerator} of {d} is not divisible by 12")));
    }
    Ok(numerator / 12 + 1)
}

pub fn vdim_rr(d: &DivisorClass) -> Result<i64> {
    Ok(chi_rr(d)? - 1)
}

/// The terms of `v(L) = v(F) + v(M) + F.M.(L-K)/2` for `L = F + M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub whole: DivisorClass,
    pub v_whole: i64,
    pub v_fixed: i64,
    pub v_moving: i64,
    /// `F.M.(L-K) / 2`
    pub cross: i64,
    /// `v(F) + cross`: when negative and `M` is non-special, `L` is special.
    pub defect: i64,
}

pub fn decompose(f: &DivisorClass, m: &DivisorClass) -> Result<Decomposition> {
    require_dim(f, 3)?;
    let whole = f.add(m)?;
    let k = ChowContext::of(&whole).canonical();
    let triple = intersect3(f, m, &whole.sub(&k)?)?;
    if triple % 2 != 0 {
        return Err(Error::Invariant(format!("F.M.(L-K) = {triple} is odd for F = {f}, M = {m}")));
    }
    let cross = triple / 2;
    let (v_whole, v_fixed, v_moving) = (vdim_rr(&whole)?, vdim_rr(f)?, vdim_rr(m)?);
    if v_whole != v_fixed + v_moving + cross {
        return Err(Error::Invariant(format!(
            "v({whole}) = {v_whole} but v(F) + v(M) + cross = {v_fixed} + {v_moving} + {cross}"
        )));
    }
    Ok(Decomposition { whole, v_whole, v_fixed, v_moving, cross, defect: v_fixed + cross })
}

pub fn speciality_defect(f: &DivisorClass, m: &DivisorClass) -> Result<i64> {
    Ok(decompose(f, m)?.defect)
}

/// Arithmetic genus of a curve class on the surface blow-up.
pub fn genus_planar(d: &DivisorClass) -> Result<i64> {
    require_dim(d, 2)?;
    Ok((d.d - 1) * (d.d - 2) / 2 - d.m.iter().map(|&m| m * (m - 1) / 2).sum::<i64>())
}

/// `D.D = -1` and `D.K = -1`.
pub fn is_minus_one_class(d: &DivisorClass) -> Result<bool> {
    require_dim(d, 2)?;
    let k = ChowContext::of(d).canonical();
    Ok(intersect2(d, d)? == -1 && intersect2(d, &k)? == -1)
}

/// The quadratic transformation based at points `i`, `j`, `k`.
pub fn cremona(d: &DivisorClass, i: usize, j: usize, k: usize) -> Result<DivisorClass> {
    require_dim(d, 2)?;
    let r = d.r();
    if i == j || j == k || i == k || i.max(j).max(k) >= r {
        return Err(Error::Domain(format!("Cremona needs three distinct point indices below {r}, got ({i}, {j}, {k})")));
    }
    let (mi, mj, mk) = (d.m[i], d.m[j], d.m[k]);
    let mut m = d.m.clone();
    m[i] = d.d - mj - mk;
    m[j] = d.d - mi - mk;
    m[k] = d.d - mi - mj;
    Ok(DivisorClass { ambient_dim: 2, d: 2 * d.d - mi - mj - mk, m })
}

/// A fixed exceptional component split off during reduction: the class had
/// coefficient `-multiplicity` at `point`, i.e. contained `multiplicity E_point`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrippedPart {
    /// Cremona steps applied before the strip.
    pub step: usize,
    pub point: usize,
    pub multiplicity: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CremonaReduction {
    pub start: DivisorClass,
    /// Standard form (`d >= m_1 + m_2 + m_3` after sorting, all `m_i >= 0`),
    /// or the first class with `d < 0`. Padded to three points if needed.
    pub reduced: DivisorClass,
    pub stripped: Vec<StrippedPart>,
    pub steps: usize,
    /// The reduction reached a negative degree: the system has no members.
    pub empty: bool,
}

/// Cremona reduction to standard form, splitting off exceptional curves
/// that become fixed components along the way.
pub fn cremona_reduce(d: &DivisorClass) -> Result<CremonaReduction> {
    require_dim(d, 2)?;
    let mut cls = d.padded(3);
    let mut stripped = Vec::new();
    let mut steps = 0;
    let strip = |cls: &mut DivisorClass, stripped: &mut Vec<StrippedPart>, step: usize| {
        for (point, m) in cls.m.iter_mut().enumerate() {
            if *m < 0 {
                stripped.push(StrippedPart { step, point, multiplicity: -*m });
                *m = 0;
            }
        }
    };
    strip(&mut cls, &mut stripped, 0);
    let mut order: Vec<usize> = (0..cls.r()).collect();
    while cls.d >= 0 {
        order.sort_by_key(|&i| std::cmp::Reverse(cls.m[i]));
        let (i, j, k) = (order[0], order[1], order[2]);
        if cls.d >= cls.m[i] + cls.m[j] + cls.m[k] {
            break;
        }
        cls = cremona(&cls, i, j, k)?;
        steps += 1;
        strip(&mut cls, &mut stripped, steps);
    }
    Ok(CremonaReduction { start: d.clone(), empty: cls.d < 0, reduced: cls, stripped, steps })
}

/// Box of planar classes `(d; m_1, ..., m_r)` to search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub d_max: i64,
    pub mult_min: i64,
    /// Upper bound per point; its length is the number of points.
    pub mult_max: Vec<i64>,
    /// Points from the third on all carry the same multiplicity.
    pub symmetric_tail: bool,
}

impl SearchBounds {
    /// `d <= d_max`, the first two multiplicities in `[0, m12_max]`, the
    /// remaining `r - 2` in `[0, tail_max]`.
    pub fn box_bounds(r: usize, d_max: i64, m12_max: i64, tail_max: i64, symmetric_tail: bool) -> Self {
        let mult_max = (0..r).map(|i| if i < 2 { m12_max } else { tail_max }).collect();
        Self { d_max, mult_min: 0, mult_max, symmetric_tail }
    }

    /// Bounds for curves `C` with `C.D <= -2`. Such a curve lies at least
    /// twice in the base locus of `D`, so `2 d_C <= d` and `2 m_{C,i} <= m_i`.
    pub fn containment(d: &DivisorClass) -> Self {
        Self {
            d_max: d.d.div_euclid(2),
            mult_min: 0,
            mult_max: d.m.iter().map(|&m| m.div_euclid(2)).collect(),
            symmetric_tail: false,
        }
    }

    pub fn r(&self) -> usize {
        self.mult_max.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NegCurve {
    pub class: DivisorClass,
    pub pairing: i64,
    /// `pairing <= threshold`
    pub flagged: bool,
}

/// Every `(-1)`-class inside `bounds`, paired with `against`, sorted by
/// class. A `(-1)`-class has `sum m_i = 3d - 1` and `sum m_i^2 = d^2 + 1`;
/// the search prunes on both.
pub fn enumerate_neg_curves(bounds: &SearchBounds, against: &DivisorClass, threshold: i64) -> Result<Vec<NegCurve>> {
    enumerate_neg_curves_with(bounds, against, threshold, Execution::default())
}

pub fn enumerate_neg_curves_with(
    bounds: &SearchBounds,
    against: &DivisorClass,
    threshold: i64,
    exec: Execution,
) -> Result<Vec<NegCurve>> {
    require_dim(against, 2)?;
    if against.r() != bounds.r() {
        return Err(Error::Mismatch { what: "number of blown-up points", left: bounds.r(), right: against.r() });
    }
    if bounds.d_max < 0 {
        return Ok(Vec::new());
    }
    let per_degree = exec.map_range(bounds.d_max as usize + 1, |d| {
        let d = d as i64;
        let mut found = Vec::new();
        if bounds.symmetric_tail && bounds.r() > 2 {
            search_symmetric(bounds, d, &mut found);
        } else {
            let mut search = Dfs::new(bounds);
            search.run(0, 3 * d - 1, d * d + 1, &mut Vec::with_capacity(bounds.r()), &mut |m| found.push(m.to_vec()));
        }
        found.into_iter().map(|m| DivisorClass { ambient_dim: 2, d, m }).collect::<Vec<_>>()
    });
    let mut out = Vec::new();
    for class in per_degree.into_iter().flatten() {
        let pairing = intersect2(&class, against)?;
        out.push(NegCurve { class, pairing, flagged: pairing <= threshold });
    }
    out.sort_by(|a, b| a.class.cmp(&b.class));
    Ok(out)
}

fn search_symmetric(bounds: &SearchBounds, d: i64, found: &mut Vec<Vec<i64>>) {
    let tail_len = (bounds.r() - 2) as i64;
    let tail_max = bounds.mult_max[2..].iter().copied().min().unwrap_or(0);
    for a in bounds.mult_min..=bounds.mult_max[0] {
        for b in bounds.mult_min..=bounds.mult_max[1] {
            for t in bounds.mult_min..=tail_max {
                if a + b + tail_len * t == 3 * d - 1 && a * a + b * b + tail_len * t * t == d * d + 1 {
                    let mut m = vec![a, b];
                    m.extend(std::iter::repeat_n(t, tail_len as usize));
                    found.push(m);
                }
            }
        }
    }
}

/// Depth-first search over multiplicity vectors with prescribed sum and sum
/// of squares, pruned by the reachable ranges of both.
struct Dfs<'a> {
    bounds: &'a SearchBounds,
    /// Reachable `[min, max]` of the sum and of the sum of squares over the
    /// points from index `i` on.
    sum_range: Vec<(i64, i64)>,
    sq_range: Vec<(i64, i64)>,
}

impl<'a> Dfs<'a> {
    fn new(bounds: &'a SearchBounds) -> Self {
        let r = bounds.r();
        let mut sum_range = vec![(0, 0); r + 1];
        let mut sq_range = vec![(0, 0); r + 1];
        for i in (0..r).rev() {
            let (lo, hi) = (bounds.mult_min, bounds.mult_max[i]);
            let sq_lo = if lo <= 0 && hi >= 0 { 0 } else { (lo * lo).min(hi * hi) };
            let sq_hi = (lo * lo).max(hi * hi);
            sum_range[i] = (sum_range[i + 1].0 + lo, sum_range[i + 1].1 + hi.max(lo));
            sq_range[i] = (sq_range[i + 1].0 + sq_lo, sq_range[i + 1].1 + sq_hi);
        }
        Self { bounds, sum_range, sq_range }
    }

    fn run(&mut self, i: usize, sum: i64, sq: i64, prefix: &mut Vec<i64>, emit: &mut impl FnMut(&[i64])) {
        let (slo, shi) = self.sum_range[i];
        let (qlo, qhi) = self.sq_range[i];
        if sum < slo || sum > shi || sq < qlo || sq > qhi {
            return;
        }
        if i == self.bounds.r() {
            emit(prefix);
            return;
        }
        for m in self.bounds.mult_min..=self.bounds.mult_max[i] {
            prefix.push(m);
            self.run(i + 1, sum - m, sq - m * m, prefix, emit);
            prefix.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HhPrediction {
    pub class: DivisorClass,
    pub special: bool,
    /// `max(v, -1)` for the class itself.
    pub expected_dim: i64,
    /// Dimension predicted from the reduced form.
    pub predicted_dim: i64,
    pub reduction: CremonaReduction,
    /// `(-1)`-classes `C` inside the search bounds with `C.D <= -2`.
    pub witnesses: Vec<NegCurve>,
}

fn planar_edim(d: &DivisorClass) -> i64 {
    match d.to_system() {
        Some(sys) => sys.edim_expected() as i64,
        None => -1,
    }
}

/// Predicts whether a planar system is special at general points.
///
/// The system is reduced by Cremona transformations, dropping exceptional
/// curves that turn into fixed components. A negative degree means the
/// system is empty; otherwise the standard form is taken to have its
/// expected dimension, which is known to hold for multiplicities up to 4.
/// The system is special when that dimension exceeds its own expected one.
///
/// Witnesses are searched in `bounds` (default: [`SearchBounds::containment`]).
pub fn hh_predict_special(d: &DivisorClass, bounds: Option<&SearchBounds>) -> Result<HhPrediction> {
    require_dim(d, 2)?;
    if d.m.iter().any(|&m| m < 0) {
        return Err(Error::Domain(format!("{d} has a negative multiplicity")));
    }
    let reduction = cremona_reduce(d)?;
    let predicted_dim = if reduction.empty { -1 } else { planar_edim(&reduction.reduced) };
    let expected_dim = planar_edim(d);
    let auto = SearchBounds::containment(d);
    let witnesses =
        enumerate_neg_curves(bounds.unwrap_or(&auto), d, -2)?.into_iter().filter(|c| c.flagged).collect();
    Ok(HhPrediction { class: d.clone(), special: predicted_dim > expected_dim, expected_dim, predicted_dim, reduction, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> DivisorClass {
        DivisorClass::parse(2, s).unwrap()
    }

    fn t(s: &str) -> DivisorClass {
        DivisorClass::parse(3, s).unwrap()
    }

    #[test]
    fn literal_round_trip() {
        let c = t("[ 9 ; 6, 4^8 ]");
        assert_eq!(c.to_string(), "[9;6,4^8]");
        assert_eq!(p("[-3;-1^10]"), ChowContext::new(2, 10).unwrap().canonical());
        assert_eq!(p("[3]").r(), 0);
        let Err(Error::Parse(e)) = DivisorClass::parse(2, "[2;1,,1]") else { panic!() };
        assert_eq!(e.offset, 5);
        assert!(DivisorClass::parse(4, "[1]").is_err());
    }

    #[test]
    fn canonical_classes() {
        assert_eq!(ChowContext::new(3, 9).unwrap().canonical(), t("[-4;-2^9]"));
        assert_eq!(ChowContext::new(2, 0).unwrap().canonical(), p("[-3]"));
    }

    #[test]
    fn triple_products() {
        let q = t("[2;1,1^8]");
        let m = t("[7;5,3^8]");
        let lk = t("[13;8,6^8]");
        assert_eq!(intersect3(&q, &m, &lk).unwrap(), -2);
        let h = DivisorClass::hyperplane(3, 1).unwrap();
        assert_eq!(intersect3(&h, &h, &h).unwrap(), 1);
        let e = t("[0;1]");
        assert_eq!(intersect3(&e, &e, &e).unwrap(), -1);
        assert!(intersect3(&q, &t("[1;1]"), &q).is_err());
    }

    #[test]
    fn planar_pairings() {
        let c1 = p("[1;1,1,0^8]");
        assert_eq!(intersect2(&p("[9;2,2,3^8]"), &c1).unwrap(), 5);
        assert_eq!(intersect2(&c1, &c1).unwrap(), -1);
        assert_eq!(intersect2(&p("[12;3,3,4^8]"), &c1).unwrap(), 6);
    }

    #[test]
    fn riemann_roch_values() {
        assert_eq!(chi_rr(&t("[7;5,3^8]")).unwrap(), 5);
        assert_eq!(chi_rr(&t("[4;2^9]")).unwrap(), -1);
        assert_eq!(vdim_rr(&t("[9;6,4^8]")).unwrap(), 3);
        assert_eq!(vdim_rr(&t("[3;3,1^8]")).unwrap(), 1);
        assert_eq!(vdim_rr(&t("[5;4,2^8]")).unwrap(), 3);
        assert_eq!(chi_rr(&t("[6]")).unwrap(), 84);
        assert!(chi_rr(&p("[1]")).is_err());
    }

    #[test]
    fn defects() {
        assert_eq!(speciality_defect(&t("[2;1,1^8]"), &t("[7;5,3^8]")).unwrap(), -1);
        let dec = decompose(&t("[4;2^9]"), &t("[0;0^9]")).unwrap();
        assert_eq!((dec.v_fixed, dec.cross, dec.defect), (-2, 0, -2));
        assert_eq!(speciality_defect(&t("[0;0^9]"), &t("[9;6,4^8]")).unwrap(), 0);
    }

    #[test]
    fn genus_and_minus_one() {
        assert_eq!(genus_planar(&p("[9;2,2,3^8]")).unwrap(), 2);
        assert_eq!(genus_planar(&p("[1;1,1]")).unwrap(), 0);
        assert_eq!(genus_planar(&p("[3]")).unwrap(), 1);
        assert!(is_minus_one_class(&p("[1;1,1,0^8]")).unwrap());
        assert!(is_minus_one_class(&p("[0;-1]")).unwrap());
        assert!(is_minus_one_class(&p("[2;1^5]")).unwrap());
        assert!(!is_minus_one_class(&p("[2;1^4]")).unwrap());
    }

    #[test]
    fn cremona_examples() {
        assert_eq!(cremona(&p("[2;1,1,1]"), 0, 1, 2).unwrap(), p("[1;0,0,0]"));
        assert_eq!(cremona(&p("[1;1,1,0]"), 0, 1, 2).unwrap(), p("[0;0,0,-1]"));
        let c = p("[7;3,2,2,1]");
        assert_eq!(cremona(&cremona(&c, 0, 2, 3).unwrap(), 0, 2, 3).unwrap(), c);
        assert!(cremona(&c, 0, 0, 1).is_err());
    }

    #[test]
    fn reduction_examples() {
        let red = cremona_reduce(&p("[1;1,1,0^8]")).unwrap();
        assert_eq!(red.reduced, p("[0;0^10]"));
        assert_eq!(red.steps, 1);
        assert_eq!(red.stripped, vec![StrippedPart { step: 1, point: 2, multiplicity: 1 }]);
        assert!(!red.empty);

        let std = p("[12;3,3,4^8]");
        let red = cremona_reduce(&std).unwrap();
        assert_eq!((red.steps, &red.reduced), (0, &std));

        let red = cremona_reduce(&p("[5]")).unwrap();
        assert_eq!(red.reduced, p("[5;0,0,0]"));

        assert!(cremona_reduce(&p("[2;2,2,2]")).unwrap().empty);
    }

    #[test]
    fn appendix_enumerations() {
        let a2 = SearchBounds::box_bounds(10, 6, 1, 2, true);
        let found = enumerate_neg_curves(&a2, &p("[12;3,3,4^8]"), -2).unwrap();
        assert_eq!(found, vec![NegCurve { class: p("[1;1,1,0^8]"), pairing: 6, flagged: false }]);

        let a3 = SearchBounds::box_bounds(10, 9, 2, 3, true);
        let found = enumerate_neg_curves(&a3, &p("[9;2,2,3^8]"), -2).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!((found[0].class.clone(), found[0].pairing), (p("[1;1,1,0^8]"), 5));

        let none = SearchBounds::box_bounds(10, 0, 3, 3, false);
        assert!(enumerate_neg_curves(&none, &p("[12;3,3,4^8]"), -2).unwrap().is_empty());
    }

    #[test]
    fn full_tail_search_matches_brute_force() {
        let bounds = SearchBounds::box_bounds(5, 4, 2, 2, false);
        let against = p("[6;2^5]");
        let found = enumerate_neg_curves(&bounds, &against, -2).unwrap();
        let mut brute = Vec::new();
        for d in 0..=4 {
            for code in 0..3i64.pow(5) {
                let m: Vec<i64> = (0..5).map(|i| code / 3i64.pow(i) % 3).collect();
                let c = DivisorClass::new(2, d, m).unwrap();
                if is_minus_one_class(&c).unwrap() {
                    brute.push(c);
                }
            }
        }
        brute.sort();
        assert_eq!(found.iter().map(|c| c.class.clone()).collect::<Vec<_>>(), brute);
        // lines through two of the points and the conic through all five
        assert_eq!(found.len(), 10 + 1);
    }

    #[test]
    fn predictions() {
        for s in ["[12;3,3,4^8]", "[9;2,2,3^8]", "[6;1,1,2^8]"] {
            let pr = hh_predict_special(&p(s), None).unwrap();
            assert!(!pr.special, "{s}");
        }
        let pr = hh_predict_special(&p("[2;2,2]"), None).unwrap();
        assert!(pr.special);
        assert_eq!((pr.expected_dim, pr.predicted_dim), (-1, 0));
        assert_eq!(pr.witnesses.len(), 1);
        assert_eq!((pr.witnesses[0].class.clone(), pr.witnesses[0].pairing), (p("[1;1,1]"), -2));

        let narrow = SearchBounds::box_bounds(2, 0, 1, 1, false);
        assert!(hh_predict_special(&p("[2;2,2]"), Some(&narrow)).unwrap().witnesses.is_empty());

        // three double points on a conic: pairings are -2 but the system is empty
        let pr = hh_predict_special(&p("[2;2,2,2]"), None).unwrap();
        assert!(!pr.special);
        assert!(hh_predict_special(&p("[2;-1]"), None).is_err());
    }
}
