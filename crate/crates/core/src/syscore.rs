//! Fat-point linear systems `L_n(d, m_1, ..., m_r)` and their dimension
//! counts.
//!
//! The virtual dimension is the number of degree-`d` monomials in `n + 1`
//! variables minus the conditions imposed by the points, minus one:
//!
//! ```text
//! v = C(d + n, n) - sum_i C(m_i + n - 1, n) - 1,     e = max(v, -1)
//! ```
//!
//! All counts are exact `i128` arithmetic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, ParseError, Result};
use crate::parse::{write_runs, Cursor};

/// Exact binomial coefficient `C(n, k)`; zero when `n < k` or `n < 0`.
pub fn binomial(n: i128, k: u32) -> i128 {
    if n < k as i128 || n < 0 {
        return 0;
    }
    let k = k.min((n - k as i128) as u32);
    let mut acc: i128 = 1;
    for i in 0..k as i128 {
        // exact at every step: acc becomes C(n, i + 1)
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A linear system of degree-`d` hypersurfaces in `P^n` through `r` points
/// with assigned multiplicities. The first point is the distinguished one
/// wherever that matters (restriction to the quadric, quadric maps).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FatPointSystem {
    ambient_dim: usize,
    degree: u32,
    mults: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionSummary {
    pub monomial_count: i128,
    pub condition_count: i128,
    pub vdim: i128,
    pub edim: i128,
}

/// Result of subtracting a fixed divisor from a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub system: FatPointSystem,
    /// Some multiplicity would have gone negative and was clamped at zero.
    pub clamped: bool,
}

impl FatPointSystem {
    pub fn new(ambient_dim: usize, degree: u32, mults: Vec<u32>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::Config("ambient dimension must be at least 1".into()));
        }
        Ok(Self { ambient_dim, degree, mults })
    }

    /// `L_n(d, m_1^{a_1}, ...)` from `(multiplicity, count)` runs.
    pub fn from_runs(ambient_dim: usize, degree: u32, runs: &[(u32, usize)]) -> Result<Self> {
        let mults = runs.iter().flat_map(|&(m, a)| std::iter::repeat_n(m, a)).collect();
        Self::new(ambient_dim, degree, mults)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    pub fn point_count(&self) -> usize {
        self.mults.len()
    }

    pub fn max_mult(&self) -> u32 {
        self.mults.iter().copied().max().unwrap_or(0)
    }

    /// Runs of equal consecutive multiplicities, as `(m, count)`.
    pub fn runs(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &m in &self.mults {
            match out.last_mut() {
                Some((v, c)) if *v == m => *c += 1,
                _ => out.push((m, 1)),
            }
        }
        out
    }

    /// First point kept in place, remaining points sorted descending.
    pub fn canonical(&self) -> Self {
        let mut mults = self.mults.clone();
        if mults.len() > 1 {
            mults[1..].sort_unstable_by(|a, b| b.cmp(a));
        }
        Self { mults, ..self.clone() }
    }

    /// The same system with one more point of multiplicity `m` appended.
    pub fn with_point(&self, m: u32) -> Self {
        let mut mults = self.mults.clone();
        mults.push(m);
        Self { mults, ..self.clone() }
    }

    /// Zero-pads the multiplicity list to `len` points.
    pub fn padded(&self, len: usize) -> Self {
        let mut mults = self.mults.clone();
        if mults.len() < len {
            mults.resize(len, 0);
        }
        Self { mults, ..self.clone() }
    }

    pub fn monomial_count(&self) -> i128 {
        binomial(self.degree as i128 + self.ambient_dim as i128, self.ambient_dim as u32)
    }

    /// Linear conditions imposed by a point of multiplicity `m`.
    pub fn conditions_for(&self, m: u32) -> i128 {
        binomial(m as i128 + self.ambient_dim as i128 - 1, self.ambient_dim as u32)
    }

    pub fn condition_count(&self) -> i128 {
        self.mults.iter().map(|&m| self.conditions_for(m)).sum()
    }

    pub fn vdim(&self) -> i128 {
        self.monomial_count() - self.condition_count() - 1
    }

    pub fn edim_expected(&self) -> i128 {
        self.vdim().max(-1)
    }

    pub fn summary(&self) -> DimensionSummary {
        DimensionSummary {
            monomial_count: self.monomial_count(),
            condition_count: self.condition_count(),
            vdim: self.vdim(),
            edim: self.edim_expected(),
        }
    }

    /// Subtracts the fixed divisor `fixed` (same ambient space, points
    /// matched by position after zero-padding). Multiplicities clamp at 0.
    pub fn residual(&self, fixed: &FatPointSystem) -> Result<Residual> {
        if self.ambient_dim != fixed.ambient_dim {
            return Err(Error::Mismatch { what: "ambient dimension", left: self.ambient_dim, right: fixed.ambient_dim });
        }
        let degree = self
            .degree
            .checked_sub(fixed.degree)
            .ok_or(Error::DegreeUnderflow { degree: self.degree, fixed: fixed.degree })?;
        let len = self.point_count().max(fixed.point_count());
        let (a, b) = (self.padded(len), fixed.padded(len));
        let clamped = a.mults.iter().zip(&b.mults).any(|(m, f)| f > m);
        let mults = a.mults.iter().zip(&b.mults).map(|(m, f)| m.saturating_sub(*f)).collect();
        Ok(Residual { system: Self { ambient_dim: self.ambient_dim, degree, mults }, clamped })
    }
}

impl fmt::Display for FatPointSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = format!("L{}({}", self.ambient_dim, self.degree);
        if !self.mults.is_empty() {
            s.push(',');
            let values: Vec<i64> = self.mults.iter().map(|&m| m as i64).collect();
            write_runs(&mut s, &values);
        }
        s.push(')');
        f.write_str(&s)
    }
}

impl FromStr for FatPointSystem {
    type Err = ParseError;

    /// `L<n>(<d>[,<m>[^<count>]]*)`, whitespace-insensitive.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut c = Cursor::new(s);
        if !(c.eat('L') || c.eat('l')) {
            return Err(c.error("expected `L`"));
        }
        let n = c.uint()?;
        if n == 0 {
            return Err(c.error("ambient dimension must be at least 1"));
        }
        c.expect('(')?;
        let degree = c.uint()?;
        let mut mults = Vec::new();
        while c.eat(',') {
            let mut batch = Vec::new();
            c.repeated(false, &mut batch)?;
            for m in batch {
                mults.push(u32::try_from(m).map_err(|_| c.error("multiplicity out of range"))?);
            }
        }
        c.expect(')')?;
        c.finish()?;
        Ok(Self { ambient_dim: n as usize, degree, mults })
    }
}

impl Serialize for FatPointSystem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FatPointSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
