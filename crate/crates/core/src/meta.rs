//! Metacyclic data sets and their two validators.
//!
//! A data set `((u·n,r,k),g0;[(c11,n11),(c12,n12),n1],...)` names the images
//! `x_i = G^{γ_i} F^{δ_i}` of the elliptic generators, with `γ_i = c_i1·m/n_i1`
//! and `δ_i = c_i2·n/n_i2`. The literal validator works with the exponent pairs
//! `(γ mod m, δ mod n)`, i.e. in the split group `Z_n ⋊ Z_m`, and compares
//! modulo the central kernel generated by `G^u F^-r`. The oracle validator
//! works directly in `M(u,n,r,k)`.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd, geometric_sum, lcm, pow_mod, rem};
use crate::error::{Error, Result};
use crate::group::{Elem, GroupElement, GroupParams, MetacyclicGroup};
use crate::scan::Scanner;

/// One entry `[(c1,n1),(c2,n2),order]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub c1: u32,
    pub n1: u32,
    pub c2: u32,
    pub n2: u32,
    pub order: u32,
}

impl Triple {
    /// The entry whose image is `G^gamma F^delta`, with exponents reduced mod `m` and `n`.
    pub fn from_exponents(gamma: i64, delta: i64, order: u32, m: u32, n: u32) -> Triple {
        let (c1, n1) = reduce_fraction(rem(gamma, m as i64) as u32, m);
        let (c2, n2) = reduce_fraction(rem(delta, n as i64) as u32, n);
        Triple { c1, n1, c2, n2, order }
    }

    /// `c1·m/n1`.
    pub fn gamma(&self, m: u32) -> i64 {
        self.c1 as i64 * (m / self.n1) as i64
    }

    /// `c2·n/n2`.
    pub fn delta(&self, n: u32) -> i64 {
        self.c2 as i64 * (n / self.n2) as i64
    }
}

/// `x/modulus` in lowest terms as `(c, denominator)`; `0` becomes `(0, 1)`.
fn reduce_fraction(x: u32, modulus: u32) -> (u32, u32) {
    if x == 0 {
        return (0, 1);
    }
    let g = gcd(x, modulus);
    (x / g, modulus / g)
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[({},{}),({},{}),{}]", self.c1, self.n1, self.c2, self.n2, self.order)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MetacyclicDataSet {
    pub params: GroupParams,
    pub g0: u32,
    pub triples: Vec<Triple>,
}

impl MetacyclicDataSet {
    pub fn new(params: GroupParams, g0: u32, triples: Vec<Triple>) -> MetacyclicDataSet {
        MetacyclicDataSet { params, g0, triples }
    }

    pub fn m(&self) -> u32 {
        self.params.m()
    }

    /// Riemann–Hurwitz: `(2g-2)/(un) = 2g0 - 2 + Σ (1 - 1/n_i)`.
    pub fn genus(&self) -> Ratio<i64> {
        let mut rhs = Ratio::from_integer(2 * self.g0 as i64 - 2);
        for t in &self.triples {
            if t.order == 0 {
                return Ratio::from_integer(i64::MIN / 4);
            }
            rhs += Ratio::from_integer(1) - Ratio::new(1, t.order as i64);
        }
        rhs * self.params.order() as i64 / 2 + 1
    }

    /// Integer genus, if Riemann–Hurwitz gives one.
    pub fn integral_genus(&self) -> Option<u64> {
        let g = self.genus();
        (g.is_integer() && *g.numer() >= 0).then(|| *g.numer() as u64)
    }

    /// `(γ_i, δ_i)` for each entry.
    pub fn exponents(&self) -> Vec<(i64, i64)> {
        let (m, n) = (self.m(), self.params.n);
        self.triples.iter().map(|t| (t.gamma(m), t.delta(n))).collect()
    }

    /// Images `x_i = G^{γ_i} F^{δ_i}` in `h`.
    pub fn images(&self, h: &MetacyclicGroup) -> Vec<Elem> {
        self.exponents().into_iter().map(|(g, d)| h.from_exponents(g, d)).collect()
    }

    /// Checks the divisibility and unit conditions on the `(c, n)` pairs.
    pub fn well_formed(&self) -> std::result::Result<(), String> {
        let (m, n) = (self.m(), self.params.n);
        for (i, t) in self.triples.iter().enumerate() {
            for (c, d, modulus, which) in [(t.c1, t.n1, m, "m"), (t.c2, t.n2, n, "n")] {
                if d == 0 || modulus % d != 0 {
                    return Err(format!("entry {}: {d} does not divide {which} = {modulus}", i + 1));
                }
                let unit = if d == 1 { c == 0 } else { c > 0 && c < d && gcd(c, d) == 1 };
                if !unit {
                    return Err(format!("entry {}: ({c},{d}) is not a unit or the zero pair", i + 1));
                }
            }
            if t.order == 0 {
                return Err(format!("entry {}: cone order must be positive", i + 1));
            }
        }
        Ok(())
    }

    pub fn parse(src: &str) -> Result<MetacyclicDataSet> {
        let mut s = Scanner::new(src);
        s.expect('(')?;
        s.expect('(')?;
        let u = s.int()?;
        s.expect_dot()?;
        let n = s.int()?;
        s.expect(',')?;
        let r = s.int()?;
        s.expect(',')?;
        let k = s.int()?;
        s.expect(')')?;
        let params = GroupParams::new(u, n, r, k)?;
        s.expect(',')?;
        let g0 = s.uint()?;
        s.expect(';')?;
        let mut triples = Vec::new();
        loop {
            match s.peek() {
                Some(')') => {
                    s.eat(')');
                    break;
                }
                Some(',') if !triples.is_empty() => {
                    s.eat(',');
                }
                Some('[') => {
                    s.eat('[');
                    s.expect('(')?;
                    let c1 = s.uint()?;
                    s.expect(',')?;
                    let n1 = s.uint()?;
                    s.expect(')')?;
                    s.expect(',')?;
                    s.expect('(')?;
                    let c2 = s.uint()?;
                    s.expect(',')?;
                    let n2 = s.uint()?;
                    s.expect(')')?;
                    s.expect(',')?;
                    let order = s.uint()?;
                    s.expect(']')?;
                    let mult = if s.eat('_') {
                        let braced = s.eat('{');
                        let v = s.uint()?;
                        if braced {
                            s.expect('}')?;
                        }
                        v
                    } else {
                        1
                    };
                    if mult == 0 {
                        return Err(s.error("multiplicity must be positive"));
                    }
                    let t = Triple { c1, n1, c2, n2, order };
                    triples.extend(std::iter::repeat_n(t, mult as usize));
                }
                _ => return Err(s.error("expected an entry '[(c,n),(c,n),order]' or ')'")),
            }
        }
        s.finish()?;
        Ok(MetacyclicDataSet { params, g0, triples })
    }
}

impl FromStr for MetacyclicDataSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MetacyclicDataSet::parse(s)
    }
}

impl fmt::Display for MetacyclicDataSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        write!(f, "(({}·{},{},{}),{};", p.u, p.n, p.r, p.k_signed(), self.g0)?;
        let mut i = 0;
        while i < self.triples.len() {
            let t = self.triples[i];
            let mut j = i + 1;
            while j < self.triples.len() && self.triples[j] == t {
                j += 1;
            }
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
            if j - i > 1 {
                write!(f, "_{}", j - i)?;
            }
            i = j;
        }
        f.write_str(")")
    }
}

#[derive(Serialize, Deserialize)]
struct TripleJson {
    c1: u32,
    n1: u32,
    c2: u32,
    n2: u32,
    order: u32,
    #[serde(default = "one")]
    mult: u32,
}

fn one() -> u32 {
    1
}

#[derive(Serialize, Deserialize)]
struct ParamsJson {
    u: u32,
    n: u32,
    r: u32,
    k: i64,
}

#[derive(Serialize, Deserialize)]
struct MetaJson {
    params: ParamsJson,
    g0: u32,
    triples: Vec<TripleJson>,
}

impl Serialize for MetacyclicDataSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut triples: Vec<TripleJson> = Vec::new();
        for t in &self.triples {
            match triples.last_mut() {
                Some(last)
                    if (last.c1, last.n1, last.c2, last.n2, last.order)
                        == (t.c1, t.n1, t.c2, t.n2, t.order) =>
                {
                    last.mult += 1
                }
                _ => triples.push(TripleJson {
                    c1: t.c1,
                    n1: t.n1,
                    c2: t.c2,
                    n2: t.n2,
                    order: t.order,
                    mult: 1,
                }),
            }
        }
        let p = self.params;
        MetaJson {
            params: ParamsJson { u: p.u, n: p.n, r: p.r, k: p.k_signed() },
            g0: self.g0,
            triples,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MetacyclicDataSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = MetaJson::deserialize(de)?;
        let p = j.params;
        let params = GroupParams::new(p.u as i64, p.n as i64, p.r as i64, p.k)
            .map_err(serde::de::Error::custom)?;
        let mut triples = Vec::new();
        for t in j.triples {
            let triple = Triple { c1: t.c1, n1: t.n1, c2: t.c2, n2: t.n2, order: t.order };
            triples.extend(std::iter::repeat_n(triple, t.mult as usize));
        }
        Ok(MetacyclicDataSet { params, g0: j.g0, triples })
    }
}

/// Which condition a data set fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetaCondition {
    #[serde(rename = "(i)")]
    Genus,
    #[serde(rename = "(ii)(a)")]
    WellFormed,
    #[serde(rename = "(ii)(b)")]
    ConeOrder,
    #[serde(rename = "(iii)")]
    GammaSum,
    #[serde(rename = "(iv)")]
    ProductCongruence,
    #[serde(rename = "(v)")]
    GenerationPlanar,
    #[serde(rename = "(vi)")]
    GenerationTorus,
    #[serde(rename = "long-relation")]
    LongRelation,
    #[serde(rename = "generation")]
    Generation,
}

impl fmt::Display for MetaCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Literal,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Valid,
    Invalid,
    /// The witness search ran out of room without reaching a fixpoint.
    Indeterminate,
}

/// Witnesses for the literal conditions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessBundle {
    pub w: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<i64>,
    /// `(s_i, t_i)` for each entry.
    pub cone_orders: Vec<(u32, i64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub p: Vec<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub q: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_prime: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_prime: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<u32>,
}

/// Witnesses for the group-theoretic check: the images of the elliptic
/// generators and of the hyperbolic pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleWitness {
    pub images: Vec<GroupElement>,
    pub handles: Vec<(GroupElement, GroupElement)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub method: Method,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_condition: Option<MetaCondition>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessBundle>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_witness: Option<OracleWitness>,
}

impl ValidationReport {
    fn fail(method: Method, genus: Option<u64>, cond: MetaCondition, detail: String) -> Self {
        ValidationReport {
            method,
            verdict: Verdict::Invalid,
            genus,
            failed_condition: Some(cond),
            detail,
            witness: None,
            oracle_witness: None,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }
}

/// Overrides for the literal witness search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Largest number of passes through the entries in conditions (v)/(vi);
    /// defaults to `u·n`.
    pub v_max: Option<u32>,
}

/// Shared checks for (i) and (ii)(a).
fn check_shape(d: &MetacyclicDataSet, method: Method) -> std::result::Result<u64, ValidationReport> {
    if let Err(e) = d.well_formed() {
        return Err(ValidationReport::fail(method, None, MetaCondition::WellFormed, e));
    }
    let g = d.genus();
    if !g.is_integer() || *g.numer() < 2 {
        return Err(ValidationReport::fail(
            method,
            None,
            MetaCondition::Genus,
            format!("genus {g} is not an integer >= 2"),
        ));
    }
    Ok(*g.numer() as u64)
}

/// Arithmetic on exponent pairs `(γ mod m, δ mod n)` of `Z_n ⋊_k Z_m`.
struct Cover {
    u: i64,
    n: i64,
    r: i64,
    m: i64,
    k: i64,
    /// `k^γ mod n` for `γ in 0..m`.
    kpow: Vec<i64>,
}

impl Cover {
    fn new(p: GroupParams) -> Cover {
        let (u, n, r, k) = (p.u as i64, p.n as i64, p.r as i64, p.k as i64);
        let m = p.m() as i64;
        let kpow = (0..m).map(|e| pow_mod(k, e as u64, n)).collect();
        Cover { u, n, r, m, k, kpow }
    }

    fn kp(&self, e: i64) -> i64 {
        self.kpow[rem(e, self.m) as usize]
    }

    fn mul(&self, x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
        (rem(x.0 + y.0, self.m), rem(x.1 * self.kp(y.0) + y.1, self.n))
    }

    fn index(&self, x: (i64, i64)) -> usize {
        (x.0 * self.n + x.1) as usize
    }

    fn pair(&self, i: usize) -> (i64, i64) {
        (i as i64 / self.n, i as i64 % self.n)
    }

    fn nu(&self) -> i64 {
        self.m / self.u
    }

    /// `G^{e + a·u} F^{f - a·r}` for the first `a ∈ [0, ν)` lying in `set`.
    fn shifted_member(&self, set: &FixedBitSet, e: i64, f: i64) -> Option<(i64, usize)> {
        (0..self.nu()).find_map(|a| {
            let idx = self.index((rem(e + a * self.u, self.m), rem(f - a * self.r, self.n)));
            set.contains(idx).then_some((a, idx))
        })
    }
}

/// Least `s >= 1` (with its `t`) such that `x^s` lies in the kernel `<G^u F^-r>`.
fn literal_cone_order(cov: &Cover, x: (i64, i64), limit: u64) -> Option<(u32, i64)> {
    let q = cov.kp(x.0);
    let mut geo = 0i64;
    let mut qp = 1i64;
    for s in 1..=limit {
        geo = rem(geo + qp, cov.n);
        qp = qp * q % cov.n;
        let gs = rem(x.0 * s as i64, cov.m);
        if gs % cov.u != 0 {
            continue;
        }
        let t = gs / cov.u;
        if rem(x.1 * geo + t * cov.r, cov.n) == 0 {
            return Some((s as u32, t));
        }
    }
    None
}

/// `(ii)(b)` for entry `i` of `d`.
pub fn cone_order_literal(d: &MetacyclicDataSet, i: usize) -> Option<(u32, i64)> {
    let cov = Cover::new(d.params);
    let t = d.triples[i];
    literal_cone_order(&cov, (t.gamma(d.m()), t.delta(d.params.n)), d.params.order() as u64)
}

/// Layered reachability for words `x_1^{p_1} ... x_l^{p_l} x_1^{p_{l+1}} ...`.
struct WordSearch<'a> {
    cov: &'a Cover,
    xs: Vec<(i64, i64)>,
    /// Predecessor `(state, exponent)` per layer; `u32::MAX` marks unreachable.
    layers: Vec<Vec<(u32, u32)>>,
    reach: FixedBitSet,
}

impl<'a> WordSearch<'a> {
    fn new(cov: &'a Cover, xs: Vec<(i64, i64)>) -> Self {
        let size = (cov.m * cov.n) as usize;
        let mut reach = FixedBitSet::with_capacity(size);
        reach.insert(0);
        WordSearch { cov, xs, layers: Vec::new(), reach }
    }

    /// One pass through all entries; returns whether the reachable set grew.
    fn round(&mut self) -> bool {
        let size = self.reach.len();
        let before = self.reach.count_ones(..);
        for &x in &self.xs.clone() {
            let mut powers = vec![(0i64, 0i64)];
            loop {
                let next = self.cov.mul(*powers.last().unwrap(), x);
                if next == (0, 0) {
                    break;
                }
                powers.push(next);
            }
            let mut pred = vec![(u32::MAX, u32::MAX); size];
            let mut next_reach = FixedBitSet::with_capacity(size);
            for (p, &xp) in powers.iter().enumerate() {
                for s in self.reach.ones() {
                    let t = self.cov.index(self.cov.mul(self.cov.pair(s), xp));
                    if !next_reach.contains(t) {
                        next_reach.insert(t);
                        pred[t] = (s as u32, p as u32);
                    }
                }
            }
            self.layers.push(pred);
            self.reach = next_reach;
        }
        self.reach.count_ones(..) > before
    }

    /// Exponent vector of length `l·v` reaching `target`.
    fn exponents(&self, target: usize) -> Vec<u32> {
        let mut out = vec![0u32; self.layers.len()];
        let mut state = target;
        for (j, layer) in self.layers.iter().enumerate().rev() {
            let (prev, p) = layer[state];
            out[j] = p;
            state = prev as usize;
        }
        debug_assert_eq!(state, 0);
        out
    }
}

/// Literal transcription of conditions (i)–(vi).
pub fn validate_meta_literal(d: &MetacyclicDataSet, bounds: SearchBounds) -> ValidationReport {
    let method = Method::Literal;
    let genus = match check_shape(d, method) {
        Ok(g) => g,
        Err(rep) => return rep,
    };
    let cov = Cover::new(d.params);
    let xs: Vec<(i64, i64)> = d.exponents();
    let mut witness = WitnessBundle::default();
    let limit = d.params.order() as u64;
    for (i, (&x, t)) in xs.iter().zip(&d.triples).enumerate() {
        match literal_cone_order(&cov, x, limit) {
            Some((s, tt)) if s == t.order => witness.cone_orders.push((s, tt)),
            Some((s, _)) => {
                return ValidationReport::fail(
                    method,
                    Some(genus),
                    MetaCondition::ConeOrder,
                    format!("entry {}: least s is {s}, stored order is {}", i + 1, t.order),
                )
            }
            None => {
                return ValidationReport::fail(
                    method,
                    Some(genus),
                    MetaCondition::ConeOrder,
                    format!("entry {}: no s <= {limit}", i + 1),
                )
            }
        }
    }
    let gamma_sum = rem(xs.iter().map(|x| x.0).sum(), cov.m);
    if gamma_sum % cov.u != 0 {
        return ValidationReport::fail(
            method,
            Some(genus),
            MetaCondition::GammaSum,
            format!("Σ γ_i ≡ {gamma_sum} (mod {}) is not a multiple of u = {}", cov.m, cov.u),
        );
    }
    let w = gamma_sum / cov.u;
    witness.w = w;
    let a_sum = long_product_delta(&cov, &xs);
    let wr = w * cov.r;
    if d.g0 == 0 {
        if rem(a_sum + wr, cov.n) != 0 {
            return ValidationReport::fail(
                method,
                Some(genus),
                MetaCondition::ProductCongruence,
                format!("A ≡ {a_sum}, -wr ≡ {} (mod {})", rem(-wr, cov.n), cov.n),
            );
        }
    } else {
        let dd = gcd(cov.n, cov.k - 1);
        let diff = rem(a_sum + wr, cov.n);
        if diff % dd != 0 {
            return ValidationReport::fail(
                method,
                Some(genus),
                MetaCondition::ProductCongruence,
                format!("A + wr ≡ {diff} (mod {}) is not a multiple of gcd(n,k-1) = {dd}", cov.n),
            );
        }
        witness.theta = Some(diff / dd);
    }
    if d.g0 >= 2 {
        return ValidationReport {
            method,
            verdict: Verdict::Valid,
            genus: Some(genus),
            failed_condition: None,
            detail: String::new(),
            witness: Some(witness),
            oracle_witness: None,
        };
    }

    let v_max = bounds.v_max.unwrap_or(d.params.u * d.params.n).max(1);
    let mut search = WordSearch::new(&cov, xs.clone());
    let cond = if d.g0 == 0 { MetaCondition::GenerationPlanar } else { MetaCondition::GenerationTorus };
    for v in 1..=v_max {
        let grew = search.round();
        let found = if d.g0 == 0 {
            planar_targets(&cov, &search)
        } else {
            torus_targets(&cov, &search, w, a_sum)
        };
        if let Some(mut t) = found {
            witness.v = Some(v);
            witness.p = search.exponents(t.p_state);
            witness.q = search.exponents(t.q_state);
            witness.a = Some(t.a);
            witness.b = Some(t.b);
            witness.m_prime = t.m_prime.take();
            witness.n_prime = t.n_prime.take();
            witness.alpha = t.alpha.take();
            witness.beta = t.beta.take();
            return ValidationReport {
                method,
                verdict: Verdict::Valid,
                genus: Some(genus),
                failed_condition: None,
                detail: String::new(),
                witness: Some(witness),
                oracle_witness: None,
            };
        }
        if !grew && v > 1 {
            return ValidationReport::fail(
                method,
                Some(genus),
                cond,
                format!("no witness; word search saturated after {v} passes"),
            );
        }
    }
    ValidationReport {
        method,
        verdict: Verdict::Indeterminate,
        genus: Some(genus),
        failed_condition: Some(cond),
        detail: format!("word search did not saturate within v_max = {v_max} passes"),
        witness: None,
        oracle_witness: None,
    }
}

/// `A = Σ δ_i Π_{s>i} k^{γ_s}`, the `F`-exponent of `x_1 ⋯ x_l`.
fn long_product_delta(cov: &Cover, xs: &[(i64, i64)]) -> i64 {
    let mut acc = 0i64;
    for (i, x) in xs.iter().enumerate() {
        let mut term = x.1;
        for y in &xs[i + 1..] {
            term = term * cov.kp(y.0) % cov.n;
        }
        acc += term;
    }
    rem(acc, cov.n)
}

struct Targets {
    p_state: usize,
    q_state: usize,
    a: i64,
    b: i64,
    m_prime: Option<u32>,
    n_prime: Option<u32>,
    alpha: Option<u32>,
    beta: Option<u32>,
}

/// (v): `G` and `F` are both reachable modulo the kernel.
fn planar_targets(cov: &Cover, s: &WordSearch<'_>) -> Option<Targets> {
    let (a, p_state) = cov.shifted_member(&s.reach, 1, 0)?;
    let (b, q_state) = cov.shifted_member(&s.reach, 0, 1)?;
    Some(Targets { p_state, q_state, a, b, m_prime: None, n_prime: None, alpha: None, beta: None })
}

/// (vi): `G^{m'}` and `F^{n'}` reachable, and the long product equals
/// `[G^α, F^β]` with `<G^{m'}, G^α> = <G>` and `<F^{n'}, F^β> = <F>`.
fn torus_targets(cov: &Cover, s: &WordSearch<'_>, w: i64, a_sum: i64) -> Option<Targets> {
    let mut g_opts: Vec<(u32, i64, usize)> = Vec::new();
    for mp in divisors(cov.m as u64).into_iter().map(|x| x as u32).chain([0]) {
        if let Some((a, st)) = cov.shifted_member(&s.reach, mp as i64, 0) {
            g_opts.push((mp, a, st));
        }
    }
    let mut f_opts: Vec<(u32, i64, usize)> = Vec::new();
    for np in divisors(cov.n as u64).into_iter().map(|x| x as u32).chain([0]) {
        if let Some((b, st)) = cov.shifted_member(&s.reach, 0, np as i64) {
            f_opts.push((np, b, st));
        }
    }
    let target = rem(a_sum + w * cov.r, cov.n);
    for &(mp, a, p_state) in &g_opts {
        let alphas: Vec<u32> = if mp == 0 { vec![1] } else { (0..cov.m as u32).collect() };
        for alpha in alphas {
            if mp != 0 && lcm(cov.m / mp as i64, cov.m / gcd(cov.m, alpha as i64)) != cov.m {
                continue;
            }
            let ka = cov.kp(alpha as i64);
            for &(np, b, q_state) in &f_opts {
                let betas: Vec<u32> = if np == 0 { vec![1] } else { (0..cov.n as u32).collect() };
                for beta in betas {
                    if np != 0 && lcm(cov.n / np as i64, cov.n / gcd(cov.n, beta as i64)) != cov.n {
                        continue;
                    }
                    if rem(beta as i64 * (1 - ka), cov.n) == target {
                        return Some(Targets {
                            p_state,
                            q_state,
                            a,
                            b,
                            m_prime: Some(mp),
                            n_prime: Some(np),
                            alpha: Some(alpha),
                            beta: Some(beta),
                        });
                    }
                }
            }
        }
    }
    None
}

/// Sum in conditions (v)/(vi): the exponent pair of `Π x_{i(i')}^{p_{i'}}`
/// evaluated with the explicit geometric sums and trailing `k`-products.
fn word_value(cov: &Cover, xs: &[(i64, i64)], p: &[u32]) -> (i64, i64) {
    let l = xs.len();
    let idx = |i: usize| i % l;
    let mut gsum = 0i64;
    let mut dsum = 0i64;
    for (ip, &pi) in p.iter().enumerate() {
        let (g, dl) = xs[idx(ip)];
        gsum += pi as i64 * g;
        let mut inner = 0i64;
        for s in 1..=pi as i64 {
            inner += cov.kp(g * (pi as i64 - s));
        }
        let mut tail = 1i64;
        for (tp, &pt) in p.iter().enumerate().skip(ip + 1) {
            tail = tail * cov.kp(pt as i64 * xs[idx(tp)].0) % cov.n;
        }
        dsum = rem(dsum + dl * rem(inner, cov.n) % cov.n * tail, cov.n);
    }
    (rem(gsum, cov.m), dsum)
}

/// Re-checks every congruence of a literal witness against `d`.
pub fn verify_witness(d: &MetacyclicDataSet, wb: &WitnessBundle) -> bool {
    let cov = Cover::new(d.params);
    let xs = d.exponents();
    if wb.cone_orders.len() != xs.len() {
        return false;
    }
    for (x, &(s, t)) in xs.iter().zip(&wb.cone_orders) {
        let geo = geometric_sum(cov.kp(x.0), s as u64, cov.n);
        if rem(x.0 * s as i64 - t * cov.u, cov.m) != 0 || rem(x.1 * geo + t * cov.r, cov.n) != 0 {
            return false;
        }
    }
    let gsum: i64 = xs.iter().map(|x| x.0).sum();
    if rem(gsum - wb.w * cov.u, cov.m) != 0 {
        return false;
    }
    let a_sum = long_product_delta(&cov, &xs);
    let wr = wb.w * cov.r;
    let ok_iv = match (d.g0, wb.theta) {
        (0, _) => rem(a_sum + wr, cov.n) == 0,
        (_, Some(theta)) => rem(a_sum - gcd(cov.n, cov.k - 1) * theta + wr, cov.n) == 0,
        _ => false,
    };
    if !ok_iv {
        return false;
    }
    if d.g0 >= 2 {
        return true;
    }
    let (Some(v), Some(a), Some(b)) = (wb.v, wb.a, wb.b) else {
        return false;
    };
    let len = xs.len() * v as usize;
    if wb.p.len() != len || wb.q.len() != len {
        return false;
    }
    let pv = word_value(&cov, &xs, &wb.p);
    let qv = word_value(&cov, &xs, &wb.q);
    let (mp, np) = if d.g0 == 0 {
        (1i64, 1i64)
    } else {
        match (wb.m_prime, wb.n_prime) {
            (Some(mp), Some(np)) => (mp as i64, np as i64),
            _ => return false,
        }
    };
    let ok_p = rem(pv.0 - mp - a * cov.u, cov.m) == 0 && rem(pv.1 + a * cov.r, cov.n) == 0;
    let ok_q = rem(qv.0 - b * cov.u, cov.m) == 0 && rem(qv.1 - np + b * cov.r, cov.n) == 0;
    if !(ok_p && ok_q) {
        return false;
    }
    if d.g0 == 1 {
        let (Some(alpha), Some(beta)) = (wb.alpha, wb.beta) else {
            return false;
        };
        let (alpha, beta) = (alpha as i64, beta as i64);
        if (mp == 0 && alpha != 1) || (np == 0 && beta != 1) {
            return false;
        }
        if mp != 0 && (cov.m % mp != 0 || lcm(cov.m / mp, cov.m / gcd(cov.m, alpha)) != cov.m) {
            return false;
        }
        if np != 0 && (cov.n % np != 0 || lcm(cov.n / np, cov.n / gcd(cov.n, beta)) != cov.n) {
            return false;
        }
        if rem(a_sum + beta * cov.kp(alpha) - beta + wr, cov.n) != 0 {
            return false;
        }
    }
    true
}

/// Group-theoretic check: an order-preserving epimorphism from the orbifold
/// group onto `M(u,n,r,k)` with the prescribed elliptic images exists.
pub fn validate_meta_oracle(d: &MetacyclicDataSet) -> ValidationReport {
    let h = MetacyclicGroup::new(d.params);
    validate_meta_oracle_in(d, &h)
}

/// As [`validate_meta_oracle`], reusing an already constructed group.
pub fn validate_meta_oracle_in(d: &MetacyclicDataSet, h: &MetacyclicGroup) -> ValidationReport {
    let method = Method::Oracle;
    let genus = match check_shape(d, method) {
        Ok(g) => g,
        Err(rep) => return rep,
    };
    let xs = d.images(h);
    for (i, (&x, t)) in xs.iter().zip(&d.triples).enumerate() {
        let o = h.element_order(x);
        if o != t.order {
            return ValidationReport::fail(
                method,
                Some(genus),
                MetaCondition::ConeOrder,
                format!("image of entry {} has order {o}, stored {}", i + 1, t.order),
            );
        }
    }
    match surface_kernel_handles(h, &xs, d.g0) {
        Ok(handles) => ValidationReport {
            method,
            verdict: Verdict::Valid,
            genus: Some(genus),
            failed_condition: None,
            detail: String::new(),
            witness: None,
            oracle_witness: Some(OracleWitness {
                images: xs.iter().map(|&x| h.element(x)).collect(),
                handles: handles.iter().map(|&(y, z)| (h.element(y), h.element(z))).collect(),
            }),
        },
        Err((cond, detail)) => ValidationReport::fail(method, Some(genus), cond, detail),
    }
}

/// Hyperbolic images `(y_j, z_j)` with `x_1⋯x_l·Π[y_j,z_j] = 1` and
/// `<x_i, y_j, z_j> = H`.
pub fn surface_kernel_handles(
    h: &MetacyclicGroup,
    xs: &[Elem],
    g0: u32,
) -> std::result::Result<Vec<(Elem, Elem)>, (MetaCondition, String)> {
    let prod = h.product(xs);
    match g0 {
        0 => {
            if prod != h.identity() {
                return Err((MetaCondition::LongRelation, format!("x_1⋯x_l = {}", h.element(prod))));
            }
            if !h.generates(xs) {
                return Err((MetaCondition::Generation, "images do not generate".into()));
            }
            Ok(Vec::new())
        }
        1 => {
            let need = h.inv(prod);
            let pairs = &h.commutator_pairs()[need];
            if pairs.is_empty() {
                return Err((MetaCondition::LongRelation, "x_1⋯x_l is not a commutator".into()));
            }
            let base = h.generated(xs);
            let full = h.order();
            for &(y, z) in pairs {
                let mut set = base.clone();
                h.extend_closure(&mut set, &[y, z]);
                if set.count_ones(..) == full {
                    return Ok(vec![(y, z)]);
                }
            }
            Err((MetaCondition::Generation, "no commutator pair completes a generating set".into()))
        }
        _ => {
            // y_1 = G, z_1 = F already generate; the rest absorbs the product.
            let (g, f) = (h.g(), h.f());
            let rest = h.inv(h.mul(prod, h.commutator(g, f)));
            let pairs = &h.commutator_pairs()[rest];
            let Some(&(y, z)) = pairs.first() else {
                return Err((MetaCondition::LongRelation, "x_1⋯x_l is not in [H,H]".into()));
            };
            let mut out = vec![(g, f), (y, z)];
            out.resize(g0 as usize, (h.identity(), h.identity()));
            Ok(out)
        }
    }
}
