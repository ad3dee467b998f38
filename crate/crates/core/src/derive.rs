//! Cyclic factors of a metacyclic action, from fixed-point counts.
//!
//! For an element `E` of order `t`, the number of points fixed by `E` with
//! rotation angle `2πv/t` is
//!
//! ```text
//! |F_E(v,t)| = |C_H(E)| · Σ_{i : t | n_i, E ~ x_i^{n_i v / t}} 1/n_i .
//! ```
//!
//! Points whose stabilizer in `<X>` is exactly `<X^{|X|/t}>` are obtained by
//! subtracting the counts of larger stabilizers, and each orbit of `<X>` on
//! them becomes one cone `(v^{-1} mod t, t)` of the data set of `X`.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd, inv_mod};
use crate::cyclic::{Cone, CyclicDataSet};
use crate::error::{Error, Result};
use crate::group::{Elem, MetacyclicGroup};
use crate::meta::MetacyclicDataSet;

/// Total and proper fixed-point counts of the powers of one element.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointTable {
    /// Order of the generating element.
    pub order: u32,
    /// `(t, v) -> (|F|, |f|)` for `t | order`, `t >= 2`, `gcd(v, t) = 1`.
    pub counts: BTreeMap<(u32, u32), (u64, u64)>,
}

impl FixedPointTable {
    pub fn total(&self, t: u32, v: u32) -> u64 {
        self.counts.get(&(t, v)).map_or(0, |c| c.0)
    }

    pub fn proper(&self, t: u32, v: u32) -> u64 {
        self.counts.get(&(t, v)).map_or(0, |c| c.1)
    }
}

/// `|F_E(v, t)|` for `E` of order `t >= 2`.
pub fn fixed_point_count(h: &MetacyclicGroup, images: &[Elem], e: Elem, v: u32) -> Result<u64> {
    let t = h.element_order(e);
    let mut sum = Ratio::from_integer(0i64);
    for &x in images {
        let ni = h.element_order(x);
        if !ni.is_multiple_of(t) {
            continue;
        }
        let power = h.pow(x, (ni / t) as u64 * v as u64);
        if h.are_conjugate(power, e) {
            sum += Ratio::new(1, ni as i64);
        }
    }
    let total = sum * h.centralizer_size(e) as i64;
    if !total.is_integer() {
        return Err(Error::Defect(format!(
            "fixed-point count {total} for {} is not an integer",
            h.element(e)
        )));
    }
    Ok(*total.numer() as u64)
}

/// Counts for every power of `x`.
pub fn fixed_point_table(h: &MetacyclicGroup, images: &[Elem], x: Elem) -> Result<FixedPointTable> {
    let order = h.element_order(x);
    let mut table = FixedPointTable { order, counts: BTreeMap::new() };
    let divs: Vec<u32> = divisors(order as u64).into_iter().map(|d| d as u32).filter(|&t| t >= 2).collect();
    // Largest stabilizers first so every proper count is final before use.
    for &t in divs.iter().rev() {
        let e = h.pow(x, (order / t) as u64);
        for v in (1..t).filter(|&v| gcd(v, t) == 1) {
            let total = fixed_point_count(h, images, e, v)?;
            let mut larger = 0u64;
            for &t2 in divs.iter().filter(|&&t2| t2 > t && t2 % t == 0) {
                for v2 in (0..t2).filter(|&v2| gcd(v2, t2) == 1 && v2 % t == v) {
                    larger += table.proper(t2, v2);
                }
            }
            let proper = total.checked_sub(larger).ok_or_else(|| {
                Error::Defect(format!("negative proper count at (v,t) = ({v},{t})"))
            })?;
            table.counts.insert((t, v), (total, proper));
        }
    }
    Ok(table)
}

/// The data set of the cyclic action generated by `x`, with orbit genus from
/// Riemann–Hurwitz. A free action gets rotation class `d = 1`, which fixed
/// points cannot determine.
pub fn cyclic_factor(h: &MetacyclicGroup, images: &[Elem], x: Elem, genus: u64) -> Result<CyclicDataSet> {
    let table = fixed_point_table(h, images, x)?;
    let order = table.order;
    let mut cones = Vec::new();
    for (&(t, v), &(_, proper)) in &table.counts {
        let orbits = proper * t as u64;
        if !orbits.is_multiple_of(order as u64) {
            return Err(Error::Defect(format!(
                "{proper} points with stabilizer of order {t} do not split into orbits of size {}",
                order / t
            )));
        }
        let c = inv_mod(v as i64, t as i64).expect("v is a unit") as u32;
        cones.extend(std::iter::repeat_n(Cone::new(c, t), (orbits / order as u64) as usize));
    }
    let mut data = CyclicDataSet::new(order, 0, cones);
    // 2 - 2g0 = (2 - 2g)/n - Σ (1/n_j - 1)
    let mut chi = Ratio::new(2 - 2 * genus as i64, order as i64);
    for c in &data.cones {
        chi -= Ratio::new(1, c.m as i64) - 1;
    }
    let g0 = (Ratio::from_integer(2) - chi) / 2;
    if !g0.is_integer() || *g0.numer() < 0 {
        return Err(Error::Defect(format!("orbit genus {g0} of the cyclic factor is not a non-negative integer")));
    }
    data.g0 = *g0.numer() as u32;
    if data.cones.is_empty() {
        data.d = 1;
    }
    Ok(data.canonical())
}

/// The cyclic factors and quotient data of a valid data set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derived {
    pub df: CyclicDataSet,
    pub dg: CyclicDataSet,
    pub dgbar: CyclicDataSet,
    /// Set when a factor is free, so its `d` was not derived.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

fn checked_genus(d: &MetacyclicDataSet) -> Result<u64> {
    d.integral_genus()
        .filter(|&g| g >= 2)
        .ok_or_else(|| Error::InvalidInput(format!("genus {} is not an integer >= 2", d.genus())))
}

/// `D_F`, the data set of `F`.
pub fn derive_df(d: &MetacyclicDataSet) -> Result<CyclicDataSet> {
    let h = MetacyclicGroup::new(d.params);
    derive_df_in(d, &h)
}

pub fn derive_df_in(d: &MetacyclicDataSet, h: &MetacyclicGroup) -> Result<CyclicDataSet> {
    cyclic_factor(h, &d.images(h), h.f(), checked_genus(d)?)
}

/// `D_G`, the data set of `G`.
pub fn derive_dg(d: &MetacyclicDataSet) -> Result<CyclicDataSet> {
    let h = MetacyclicGroup::new(d.params);
    derive_dg_in(d, &h)
}

pub fn derive_dg_in(d: &MetacyclicDataSet, h: &MetacyclicGroup) -> Result<CyclicDataSet> {
    cyclic_factor(h, &d.images(h), h.g(), checked_genus(d)?)
}

/// `D_Ḡ`: degree `u`, orbit genus `g0`, one cone `(c', u/gcd(γ_i, u))` per
/// entry with `c'·(u/n') ≡ γ_i (mod u)`, trivial cones dropped.
pub fn derive_dgbar(d: &MetacyclicDataSet) -> CyclicDataSet {
    let u = d.params.u as i64;
    let m = d.m();
    let mut cones = Vec::new();
    for t in &d.triples {
        let gamma = t.gamma(m).rem_euclid(u);
        let g = gcd(gamma, u);
        let n1 = u / g;
        if n1 == 1 {
            continue;
        }
        cones.push(Cone::new((gamma / g) as u32, n1 as u32));
    }
    let mut out = CyclicDataSet::new(d.params.u, d.g0, cones);
    if out.cones.is_empty() {
        out.d = 1;
    }
    out.canonical()
}

/// All three derived data sets.
pub fn derive_all(d: &MetacyclicDataSet, h: &MetacyclicGroup) -> Result<Derived> {
    let df = derive_df_in(d, h)?;
    let dg = derive_dg_in(d, h)?;
    let dgbar = derive_dgbar(d);
    let mut notes = Vec::new();
    for (name, x) in [("D_F", &df), ("D_G", &dg), ("D_Gbar", &dgbar)] {
        if x.is_free() {
            notes.push(format!("{name}: d-undetermined"));
        }
    }
    Ok(Derived { df, dg, dgbar, notes })
}
