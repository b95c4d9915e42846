//! Curves on a smooth quadric surface and their planar models.
//!
//! Projecting `Q = P^1 x P^1` from a point `p0` on it identifies the blow-up
//! of `Q` at `p0` with the blow-up of `P^2` at two points. Under this map a
//! system `|aH_1 + bH_2| - m0 p0` becomes `L_2(a+b-m0, b-m0, a-m0)`; further
//! points on `Q` are carried along unchanged.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::blowup::DivisorClass;
use crate::error::{Error, ParseError, Result};
use crate::parse::{write_runs, Cursor};
use crate::syscore::{binomial, FatPointSystem};

/// `|aH_1 + bH_2| - m0 p0 - sum t_i p_i` on a smooth quadric.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadricSystem {
    pub a: i64,
    pub b: i64,
    pub m0: i64,
    pub tail: Vec<i64>,
}

impl QuadricSystem {
    pub fn new(a: i64, b: i64, m0: i64, tail: Vec<i64>) -> Self {
        Self { a, b, m0, tail }
    }

    /// `(a+1)(b+1) - C(m0+1, 2) - sum C(t_i+1, 2) - 1`.
    pub fn vdim(&self) -> i128 {
        let sections = (self.a as i128 + 1) * (self.b as i128 + 1);
        let conditions: i128 = std::iter::once(self.m0).chain(self.tail.iter().copied()).map(|m| binomial(m as i128 + 1, 2)).sum();
        sections - conditions - 1
    }
}

impl fmt::Display for QuadricSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = format!("({},{};{};", self.a, self.b, self.m0);
        write_runs(&mut s, &self.tail);
        s.push(')');
        f.write_str(&s)
    }
}

impl FromStr for QuadricSystem {
    type Err = ParseError;

    /// `(a, b; m0; t_1, t_2^k, ...)`; the tail and its separator are optional.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut c = Cursor::new(s);
        c.expect('(')?;
        let a = c.int(true)?;
        c.expect(',')?;
        let b = c.int(true)?;
        c.expect(';')?;
        let m0 = c.int(true)?;
        let tail = if c.eat(';') { c.list(true, ')')? } else { Vec::new() };
        c.expect(')')?;
        c.finish()?;
        Ok(Self { a, b, m0, tail })
    }
}

impl Serialize for QuadricSystem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Restriction of a system in `P^3` whose points all lie on a smooth
/// quadric. A surface of degree `d` cuts a curve of bidegree `(d, d)`; the
/// first point plays the role of `p0`.
pub fn restrict_to_quadric(sys: &FatPointSystem) -> Result<QuadricSystem> {
    if sys.ambient_dim() != 3 {
        return Err(Error::WrongDimension { expected: 3, found: sys.ambient_dim() });
    }
    let d = sys.degree() as i64;
    let mut mults = sys.mults().iter().map(|&m| m as i64);
    let m0 = mults.next().unwrap_or(0);
    Ok(QuadricSystem { a: d, b: d, m0, tail: mults.collect() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanarImage {
    /// `(a+b-m0; b-m0, a-m0, tail...)`
    pub class: DivisorClass,
    /// Some coefficient is negative (`m0 > min(a, b)` or a negative input);
    /// the image then only makes sense as a class.
    pub negative: bool,
}

impl PlanarImage {
    pub fn system(&self) -> Option<FatPointSystem> {
        self.class.to_system()
    }
}

pub fn to_planar(qs: &QuadricSystem) -> PlanarImage {
    let d = qs.a + qs.b - qs.m0;
    let mut m = vec![qs.b - qs.m0, qs.a - qs.m0];
    m.extend_from_slice(&qs.tail);
    let negative = d < 0 || m.iter().any(|&x| x < 0);
    let class = DivisorClass::new(2, d, m).expect("planar classes are always valid");
    PlanarImage { class, negative }
}

/// Inverse of [`to_planar`]: reads `(a, b; m0; tail)` back from a planar
/// class whose first two multiplicities are the ones inserted by the map.
pub fn from_planar(class: &DivisorClass) -> Result<QuadricSystem> {
    if class.ambient_dim() != 2 {
        return Err(Error::WrongDimension { expected: 2, found: class.ambient_dim() });
    }
    let [m1, m2, tail @ ..] = class.mults() else {
        return Err(Error::Domain(format!("{class} lacks the two points created by the projection")));
    };
    let d = class.d();
    Ok(QuadricSystem { a: d - m1, b: d - m2, m0: d - m1 - m2, tail: tail.to_vec() })
}
