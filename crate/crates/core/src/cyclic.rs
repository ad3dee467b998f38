//! Cyclic data sets `(n, g0, d; (c_1,n_1), ..., (c_l,n_l))`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, lcm};
use crate::error::{Error, Result};
use crate::scan::Scanner;

/// A cone point `(c, m)`: orbit of size `n/m` with rotation class `c ∈ Z_m^×`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cone {
    pub c: u32,
    pub m: u32,
}

impl Cone {
    pub fn new(c: u32, m: u32) -> Cone {
        Cone { c, m }
    }

    /// Display order: larger `m` first, then smaller `c`.
    fn sort_key(&self) -> (std::cmp::Reverse<u32>, u32) {
        (std::cmp::Reverse(self.m), self.c)
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicDataSet {
    pub n: u32,
    pub g0: u32,
    pub d: u32,
    pub cones: Vec<Cone>,
}

/// The condition of the definition that a tuple violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CyclicCondition {
    /// `d > 0` iff there are no cones, and `gcd(d, n) = 1`.
    #[serde(rename = "(i)")]
    FreeRotation,
    /// omit-one lcm condition.
    #[serde(rename = "(iii)")]
    Lcm,
    /// `Σ (n/n_j) c_j ≡ 0 (mod n)`.
    #[serde(rename = "(iv)")]
    ConeSum,
    /// Riemann–Hurwitz gives a non-integral genus.
    #[serde(rename = "genus-nonintegral")]
    NonIntegralGenus,
    /// Riemann–Hurwitz gives genus `<= 0`.
    #[serde(rename = "genus-zero")]
    GenusZero,
}

impl fmt::Display for CyclicCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CyclicCondition::FreeRotation => "(i)",
            CyclicCondition::Lcm => "(iii)",
            CyclicCondition::ConeSum => "(iv)",
            CyclicCondition::NonIntegralGenus => "genus-nonintegral",
            CyclicCondition::GenusZero => "genus-zero",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum CyclicVerdict {
    Valid { genus: u64 },
    Invalid { failed_condition: CyclicCondition, detail: String },
}

impl CyclicVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, CyclicVerdict::Valid { .. })
    }
}

impl CyclicDataSet {
    pub fn new(n: u32, g0: u32, cones: Vec<Cone>) -> CyclicDataSet {
        CyclicDataSet { n, g0, d: 0, cones }
    }

    pub fn free(n: u32, g0: u32, d: u32) -> CyclicDataSet {
        CyclicDataSet { n, g0, d, cones: Vec::new() }
    }

    pub fn is_free(&self) -> bool {
        self.cones.is_empty()
    }

    /// Exact genus from Riemann–Hurwitz.
    pub fn genus(&self) -> Ratio<i64> {
        let n = self.n as i64;
        let mut chi = Ratio::from_integer(2 - 2 * self.g0 as i64);
        for cone in &self.cones {
            chi += Ratio::new(1, cone.m as i64) - 1;
        }
        // (2 - 2g)/n = chi
        (Ratio::from_integer(2) - chi * n) / 2
    }

    /// Rejects cones with `n_i ∤ n` or `gcd(c_i, n_i) ≠ 1`.
    pub fn check_well_formed(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Malformed(format!("degree n = {} must be at least 2", self.n)));
        }
        for cone in &self.cones {
            if cone.m == 0 || !self.n.is_multiple_of(cone.m) {
                return Err(Error::Malformed(format!(
                    "cone order {} does not divide n = {}",
                    cone.m, self.n
                )));
            }
            if cone.c >= cone.m || gcd(cone.c, cone.m) != 1 {
                return Err(Error::Malformed(format!(
                    "cone class {} is not a unit modulo {}",
                    cone.c, cone.m
                )));
            }
        }
        Ok(())
    }

    /// Checks the four defining conditions and that the genus is an integer `>= 1`.
    pub fn validate(&self) -> Result<CyclicVerdict> {
        self.check_well_formed()?;
        let fail = |c, detail: String| Ok(CyclicVerdict::Invalid { failed_condition: c, detail });
        let n = self.n as u64;
        if (self.d > 0) == !self.cones.is_empty() || self.d >= self.n {
            return fail(CyclicCondition::FreeRotation, "d must be non-zero exactly when there are no cones".into());
        }
        if self.d > 0 && gcd(self.d, self.n) != 1 {
            return fail(CyclicCondition::FreeRotation, format!("gcd(d, n) = gcd({}, {}) != 1", self.d, self.n));
        }
        if self.cones.len() >= 2 {
            let all = self.cones.iter().fold(1u64, |acc, c| lcm(acc, c.m as u64));
            let target = if self.g0 == 0 { n } else { all };
            for skip in 0..self.cones.len() {
                let partial = self
                    .cones
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .fold(1u64, |acc, (_, c)| lcm(acc, c.m as u64));
                if partial != target {
                    return fail(
                        CyclicCondition::Lcm,
                        format!("lcm omitting cone {} is {partial}, expected {target}", skip + 1),
                    );
                }
            }
        }
        let sum = self.cones.iter().map(|c| (n / c.m as u64) * c.c as u64).sum::<u64>() % n;
        if sum != 0 {
            return fail(CyclicCondition::ConeSum, format!("Σ (n/n_j)·c_j ≡ {sum} (mod {n})"));
        }
        let g = self.genus();
        if !g.is_integer() {
            return fail(CyclicCondition::NonIntegralGenus, format!("genus {g} is not an integer"));
        }
        if *g.numer() < 1 {
            return fail(CyclicCondition::GenusZero, format!("genus {g} is below 1"));
        }
        Ok(CyclicVerdict::Valid { genus: *g.numer() as u64 })
    }

    pub fn is_valid(&self) -> bool {
        self.validate().map(|v| v.is_valid()).unwrap_or(false)
    }

    /// Sorted copy: cones by decreasing order, then increasing class.
    pub fn canonical(&self) -> CyclicDataSet {
        let mut cones = self.cones.clone();
        cones.sort();
        CyclicDataSet { cones, ..self.clone() }
    }

    /// Distinct cones with multiplicities, in canonical order.
    pub fn grouped(&self) -> Vec<(Cone, u32)> {
        let mut out: Vec<(Cone, u32)> = Vec::new();
        for cone in self.canonical().cones {
            match out.last_mut() {
                Some((c, mult)) if *c == cone => *mult += 1,
                _ => out.push((cone, 1)),
            }
        }
        out
    }

    pub fn parse(src: &str) -> Result<CyclicDataSet> {
        let mut s = Scanner::new(src);
        let d = parse_cyclic(&mut s)?;
        s.finish()?;
        Ok(d)
    }

}

pub(crate) fn parse_cyclic(s: &mut Scanner<'_>) -> Result<CyclicDataSet> {
    s.expect('(')?;
    let n = s.uint()?;
    s.expect(',')?;
    let g0 = s.uint()?;
    let d = if s.eat(',') { s.uint()? } else { 0 };
    s.expect(';')?;
    let mut cones = Vec::new();
    loop {
        match s.peek() {
            Some(')') => {
                s.eat(')');
                break;
            }
            Some(',') if !cones.is_empty() => {
                s.eat(',');
            }
            Some('(') => {
                s.eat('(');
                if s.eat('(') {
                    let c = s.uint()?;
                    s.expect(',')?;
                    let m = s.uint()?;
                    s.expect(')')?;
                    s.expect(',')?;
                    let mult = s.uint()?;
                    s.expect(')')?;
                    if mult == 0 {
                        return Err(s.error("multiplicity must be positive"));
                    }
                    cones.extend(std::iter::repeat_n(Cone::new(c, m), mult as usize));
                } else {
                    let c = s.uint()?;
                    s.expect(',')?;
                    let m = s.uint()?;
                    s.expect(')')?;
                    cones.push(Cone::new(c, m));
                }
            }
            _ => return Err(s.error("expected a cone '(c,m)' or ')'")),
        }
    }
    Ok(CyclicDataSet { n, g0, d, cones })
}

impl FromStr for CyclicDataSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CyclicDataSet::parse(s)
    }
}

impl fmt::Display for CyclicDataSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}", self.n, self.g0)?;
        if self.d > 0 {
            write!(f, ",{}", self.d)?;
        }
        f.write_str(";")?;
        for (i, (cone, mult)) in self.grouped().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if mult > 1 {
                write!(f, "(({},{}),{})", cone.c, cone.m, mult)?;
            } else {
                write!(f, "({},{})", cone.c, cone.m)?;
            }
        }
        f.write_str(")")
    }
}

#[derive(Serialize, Deserialize)]
struct ConeJson {
    c: u32,
    m: u32,
    mult: u32,
}

#[derive(Serialize, Deserialize)]
struct CyclicJson {
    n: u32,
    g0: u32,
    d: u32,
    cones: Vec<ConeJson>,
}

impl Serialize for CyclicDataSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        CyclicJson {
            n: self.n,
            g0: self.g0,
            d: self.d,
            cones: self
                .grouped()
                .into_iter()
                .map(|(c, mult)| ConeJson { c: c.c, m: c.m, mult })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for CyclicDataSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = CyclicJson::deserialize(de)?;
        let mut cones = Vec::new();
        for c in j.cones {
            cones.extend(std::iter::repeat_n(Cone::new(c.c, c.m), c.mult as usize));
        }
        Ok(CyclicDataSet { n: j.n, g0: j.g0, d: j.d, cones })
    }
}
