//! Applications of the existence criterion: the `4g` bound for non-split
//! groups, dicyclic actions with a prescribed `D_F`, and lifts of non-split
//! actions to split ones under regular cyclic covers.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{lcm, rem};
use crate::classify::{first_action, isomorphism_representatives, signatures};
use crate::cyclic::{Cone, CyclicDataSet};
use crate::derive::derive_df_in;
use crate::error::{Error, Result};
use crate::group::{GroupParams, MetacyclicGroup};
use crate::meta::{validate_meta_oracle_in, MetacyclicDataSet, Triple, ValidationReport};

/// `Dic_g` at even genus `g`, where it should attain `|H| = 4g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DicyclicBound {
    /// The tuple of [`dicyclic_bound_data`].
    pub data: MetacyclicDataSet,
    pub valid: bool,
    pub order: u32,
    /// Some action of `Dic_g` on the surface, found by search.
    pub realized_by: Option<MetacyclicDataSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub genus: u64,
    /// `4g`.
    pub bound: u32,
    /// Orders up to this value were searched.
    pub searched_up_to: u32,
    pub max_nonsplit_order: Option<u32>,
    /// One presentation per isomorphism type of maximal order.
    pub attained_by: Vec<GroupParams>,
    /// An action of each group in `attained_by`.
    pub examples: Vec<MetacyclicDataSet>,
    /// Present for even genus.
    pub dicyclic: Option<DicyclicBound>,
}

impl BoundReport {
    /// `max <= 4g`, and for even genus the bound is attained by `Dic_g`.
    pub fn holds(&self) -> bool {
        let within = self.max_nonsplit_order.is_none_or(|m| m <= self.bound);
        let attained = self.dicyclic.as_ref().is_none_or(|d| {
            d.realized_by.is_some() && d.order == self.bound && self.max_nonsplit_order == Some(self.bound)
        });
        within && attained
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("genus {}: non-split bound 4g = {}\n", self.genus, self.bound);
        match self.max_nonsplit_order {
            Some(m) => {
                let groups: Vec<String> = self.attained_by.iter().map(|p| p.to_string()).collect();
                s.push_str(&format!(
                    "largest non-split order with |H| <= {}: {m} ({})\n",
                    self.searched_up_to,
                    groups.join(", ")
                ));
                for d in &self.examples {
                    s.push_str(&format!("  {d}\n"));
                }
            }
            None => s.push_str(&format!("no non-split action with |H| <= {}\n", self.searched_up_to)),
        }
        if let Some(d) = &self.dicyclic {
            let verdict = if d.valid { "valid" } else { "invalid" };
            s.push_str(&format!("Dic_{} (order {}): {} is {verdict}\n", self.genus, d.order, d.data));
            match &d.realized_by {
                Some(x) => s.push_str(&format!("Dic_{} acts: {x}\n", self.genus)),
                None => s.push_str(&format!("Dic_{} has no action\n", self.genus)),
            }
        }
        s.push_str(if self.holds() { "bound holds\n" } else { "bound VIOLATED\n" });
        s
    }
}

/// `((2·2g,g,-1),0;[(1,4),(0,1),4],[(1,4),(1,2g),4],[(0,1),(2g-1,2g),2g])`.
pub fn dicyclic_bound_data(genus: u32) -> MetacyclicDataSet {
    let n = 2 * genus;
    let t = |c1, n1, c2, n2, order| Triple { c1, n1, c2, n2, order };
    MetacyclicDataSet::new(
        GroupParams::dicyclic(genus),
        0,
        vec![t(1, 4, 0, 1, 4), t(1, 4, 1, n, 4), t(0, 1, n - 1, n, n)],
    )
}

/// Searches every non-split group of order up to `84(g-1)` for an action on
/// the surface of genus `g`.
pub fn bound_check(genus: u64) -> Result<BoundReport> {
    if genus < 2 {
        return Err(Error::InvalidInput(format!("genus {genus} is below 2")));
    }
    let bound = 4 * genus as u32;
    let cap = 84 * (genus as u32 - 1);
    let acting: Vec<(GroupParams, MetacyclicDataSet)> = GroupParams::enumerate(cap, false)
        .into_par_iter()
        .filter_map(|p| {
            let h = MetacyclicGroup::new(p);
            if signatures(p.order() as u64, genus, &h.order_spectrum()).is_empty() || h.is_split() {
                return None;
            }
            first_action(&h, genus).map(|d| (p, d))
        })
        .collect();
    let max = acting.iter().map(|(p, _)| p.order() as u32).max();
    let (attained_by, examples) = match max {
        Some(m) => {
            let top: Vec<GroupParams> =
                acting.iter().filter(|(p, _)| p.order() as u32 == m).map(|(p, _)| *p).collect();
            let reps = isomorphism_representatives(&top);
            let examples = reps
                .iter()
                .map(|r| acting.iter().find(|(p, _)| p == r).expect("representative acts").1.clone())
                .collect();
            (reps, examples)
        }
        None => (Vec::new(), Vec::new()),
    };
    let dicyclic = genus.is_multiple_of(2).then(|| {
        let data = dicyclic_bound_data(genus as u32);
        let h = MetacyclicGroup::new(data.params);
        let valid = validate_meta_oracle_in(&data, &h).is_valid() && data.integral_genus() == Some(genus);
        let realized_by = first_action(&h, genus);
        DicyclicBound { order: data.params.order() as u32, data, valid, realized_by }
    });
    Ok(BoundReport {
        genus,
        bound,
        searched_up_to: cap,
        max_nonsplit_order: max,
        attained_by,
        examples,
        dicyclic,
    })
}

/// A cyclic data set of degree `2n` whose cones pair off as `(c,m), (-c,m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DicyclicForm {
    /// Half the degree.
    pub n: u32,
    pub g0: u32,
    pub d: u32,
    /// One cone of each pair, with `c <= m - c`.
    pub pairs: Vec<Cone>,
}

impl DicyclicForm {
    pub fn of(df: &CyclicDataSet) -> Option<DicyclicForm> {
        if !df.n.is_multiple_of(2) {
            return None;
        }
        let mut counts: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        for c in &df.cones {
            *counts.entry((c.m, c.c)).or_default() += 1;
        }
        let mut pairs = Vec::new();
        for (&(m, c), &count) in &counts {
            let partner = (m - c) % m;
            if c == partner {
                if count % 2 != 0 {
                    return None;
                }
                pairs.extend(std::iter::repeat_n(Cone::new(c, m), count as usize / 2));
            } else if c < partner {
                if counts.get(&(m, partner)) != Some(&count) {
                    return None;
                }
                pairs.extend(std::iter::repeat_n(Cone::new(c, m), count as usize));
            } else if !counts.contains_key(&(m, partner)) {
                return None;
            }
        }
        pairs.sort();
        Some(DicyclicForm { n: df.n / 2, g0: df.g0, d: df.d, pairs })
    }

    /// `c_i · 2n/n_i` for each representative.
    fn terms(&self) -> Vec<i64> {
        self.pairs.iter().map(|c| c.c as i64 * (2 * self.n / c.m) as i64).collect()
    }

    fn involution_pairs(&self) -> usize {
        self.pairs.iter().filter(|c| c.m == 2).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DicyclicClause {
    /// Even `g0` and a pair of `(1,2)` cones.
    #[serde(rename = "(i)")]
    EvenGenus,
    /// Two pairs of `(1,2)` cones.
    #[serde(rename = "(ii)(a)")]
    TwoInvolutionPairs,
    /// `g0 >= 3` and an even cone sum.
    #[serde(rename = "(ii)(b)")]
    HigherGenusEvenSum,
    /// `g0 = 1` and signs giving a cone sum of `2`.
    #[serde(rename = "(ii)(c)")]
    TorusSumTwo,
    /// `g0 = 1`, an even cone sum and `lcm(n_i) = 2n`.
    #[serde(rename = "(ii)(d)")]
    TorusFullLcm,
}

impl fmt::Display for DicyclicClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DicyclicClause::EvenGenus => "(i)",
            DicyclicClause::TwoInvolutionPairs => "(ii)(a)",
            DicyclicClause::HigherGenusEvenSum => "(ii)(b)",
            DicyclicClause::TorusSumTwo => "(ii)(c)",
            DicyclicClause::TorusFullLcm => "(ii)(d)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DicyclicDecision {
    pub form: Option<DicyclicForm>,
    pub clause: Option<DicyclicClause>,
    pub witness: Option<MetacyclicDataSet>,
    pub witness_report: Option<ValidationReport>,
    /// The witness is valid and its derived `D_F` is the input.
    pub witness_matches: bool,
}

impl DicyclicDecision {
    pub fn exists(&self) -> bool {
        self.clause.is_some()
    }
}

/// Sign choices `±c_i` whose terms sum to `target` mod `2n`, as flags
/// (`true` = use `-c_i`).
fn signs_reaching(terms: &[i64], modulus: i64, target: i64) -> Option<Vec<bool>> {
    // reach[j][x]: x is a sum of the first j signed terms.
    let size = modulus as usize;
    let mut reach = vec![vec![false; size]; terms.len() + 1];
    reach[0][0] = true;
    for (j, &t) in terms.iter().enumerate() {
        for x in 0..size {
            if reach[j][x] {
                reach[j + 1][rem(x as i64 + t, modulus) as usize] = true;
                reach[j + 1][rem(x as i64 - t, modulus) as usize] = true;
            }
        }
    }
    let mut x = rem(target, modulus);
    if !reach[terms.len()][x as usize] {
        return None;
    }
    let mut flags = vec![false; terms.len()];
    for j in (0..terms.len()).rev() {
        let plus = rem(x - terms[j], modulus);
        if reach[j][plus as usize] {
            x = plus;
        } else {
            flags[j] = true;
            x = rem(x + terms[j], modulus);
        }
    }
    Some(flags)
}

/// Decides whether an element with data set `df` (degree `2n`) lies in a
/// `Dic_n` together with some `G` of order 4, and builds the dicyclic data
/// set when it does.
pub fn dicyclic_exists(df: &CyclicDataSet) -> Result<DicyclicDecision> {
    if !df.n.is_multiple_of(2) || df.n < 4 {
        return Err(Error::InvalidInput(format!("degree {} is not an even number >= 4", df.n)));
    }
    let none = DicyclicDecision { form: None, clause: None, witness: None, witness_report: None, witness_matches: false };
    // A tuple that cannot pair off is rejected before it is validated.
    let Some(form) = DicyclicForm::of(&df.canonical()) else {
        return Ok(none);
    };
    if !df.is_valid() {
        return Err(Error::InvalidInput(format!("{df} is not a valid cyclic data set")));
    }
    let n = form.n;
    let modulus = 2 * n as i64;
    let mut terms = form.terms();
    let even_sum = rem(terms.iter().sum::<i64>(), 2) == 0;
    let full_lcm = form.pairs.iter().fold(1, |acc, c| lcm(acc, c.m)) == 2 * n;
    let g0 = form.g0;
    let clause = if g0 % 2 == 0 {
        (form.involution_pairs() >= 1).then_some(DicyclicClause::EvenGenus)
    } else if form.involution_pairs() >= 2 {
        Some(DicyclicClause::TwoInvolutionPairs)
    } else if g0 == 1 && signs_reaching(&terms, modulus, 2).is_some() {
        Some(DicyclicClause::TorusSumTwo)
    } else if g0 == 1 && even_sum && full_lcm {
        Some(DicyclicClause::TorusFullLcm)
    } else if g0 >= 3 && even_sum {
        Some(DicyclicClause::HigherGenusEvenSum)
    } else {
        None
    };
    let Some(clause) = clause else {
        return Ok(DicyclicDecision { form: Some(form), ..none });
    };
    if clause == DicyclicClause::TorusSumTwo {
        let flags = signs_reaching(&terms, modulus, 2).expect("clause found a sign choice");
        for (t, flip) in terms.iter_mut().zip(flags) {
            if flip {
                *t = rem(-*t, modulus);
            }
        }
    }
    let params = GroupParams::dicyclic(n);
    let (m, big) = (4u32, 2 * n);
    let entry = |gamma: i64, delta: i64, order: u32| Triple::from_exponents(gamma, delta, order, m, big);
    let power = |t: i64| entry(0, t, (modulus / crate::arith::gcd(t, modulus)) as u32);
    let involution = form.pairs.iter().position(|c| c.m == 2);
    let (orbit_genus, triples) = match clause {
        DicyclicClause::EvenGenus => {
            let skip = involution.expect("clause (i) has a (1,2) pair");
            let rest: Vec<i64> = terms.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &t)| t).collect();
            let mut ts = vec![entry(1, 0, 4), entry(3, -rest.iter().sum::<i64>(), 4)];
            ts.extend(rest.iter().map(|&t| power(t)));
            (g0 / 2, ts)
        }
        DicyclicClause::TwoInvolutionPairs => {
            let mut skip: Vec<usize> = form.pairs.iter().enumerate().filter(|(_, c)| c.m == 2).map(|(i, _)| i).collect();
            skip.truncate(2);
            let rest: Vec<i64> = terms.iter().enumerate().filter(|(i, _)| !skip.contains(i)).map(|(_, &t)| t).collect();
            let mut ts = vec![entry(1, 0, 4), entry(1, 0, 4), entry(1, 1, 4), entry(1, 1 - rest.iter().sum::<i64>(), 4)];
            ts.extend(rest.iter().map(|&t| power(t)));
            // Four cones fixed by the quotient involution: g0 = 2h + 1.
            ((g0 - 1) / 2, ts)
        }
        _ => (g0.div_ceil(2), terms.iter().map(|&t| power(t)).collect()),
    };
    let witness = MetacyclicDataSet::new(params, orbit_genus, triples);
    let h = MetacyclicGroup::new(params);
    let report = validate_meta_oracle_in(&witness, &h);
    let matches = report.is_valid()
        && derive_df_in(&witness, &h).map(|x| x == df.canonical()).unwrap_or(false);
    Ok(DicyclicDecision {
        form: Some(form),
        clause: Some(clause),
        witness: Some(witness),
        witness_report: Some(report),
        witness_matches: matches,
    })
}

/// A split action covering a non-split one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftResult {
    /// Degree `n/r` of the cover.
    pub nu: u32,
    pub lifted: MetacyclicDataSet,
    /// `a_i` for each entry.
    pub shifts: Vec<u32>,
    pub genus: u64,
}

/// Every lift of the action `d` of `M(u,n,r,k)` to an action of
/// `M(νu,n,n,k) = Z_n ⋊_k Z_{νu}`, `ν = n/r`, with shifts `a_i ∈ [0,ν)`.
///
/// Shift vectors are visited lexicographically with entries of larger cone
/// order most significant (ties by position), so entries of small order are
/// perturbed first.
pub fn lifts(d: &MetacyclicDataSet) -> Result<Vec<LiftResult>> {
    let mut out = Vec::new();
    search_lifts(d, &mut |l| {
        out.push(l);
        false
    })?;
    Ok(out)
}

/// The first entry of [`lifts`].
pub fn lift_to_split(d: &MetacyclicDataSet) -> Result<Option<LiftResult>> {
    let mut first = None;
    search_lifts(d, &mut |l| {
        first = Some(l);
        true
    })?;
    Ok(first)
}

/// Calls `visit` on each lift until it returns `true`.
fn search_lifts(d: &MetacyclicDataSet, visit: &mut dyn FnMut(LiftResult) -> bool) -> Result<()> {
    let h = MetacyclicGroup::new(d.params);
    let report = validate_meta_oracle_in(d, &h);
    let Some(genus) = report.genus.filter(|_| report.is_valid()) else {
        return Err(Error::InvalidInput(format!("{d} is not a valid data set")));
    };
    if h.is_split() {
        return Err(Error::InvalidInput(format!("{} is already split", d.params)));
    }
    let p = d.params;
    let nu = p.nu();
    let m = p.m();
    let lifted_params = GroupParams::new((nu * p.u) as i64, p.n as i64, p.n as i64, p.k as i64)?;
    let target = nu as u64 * (genus - 1) + 1;
    let lifted_group = MetacyclicGroup::new(lifted_params);
    let exps = d.exponents();
    let mut rank: Vec<usize> = (0..exps.len()).collect();
    rank.sort_by_key(|&i| (std::cmp::Reverse(d.triples[i].order), i));
    let mut shifts = vec![0u32; exps.len()];
    loop {
        let triples = exps
            .iter()
            .zip(&d.triples)
            .zip(&shifts)
            .map(|(((g, dl), t), &a)| {
                let a = a as i64;
                Triple::from_exponents(g + a * p.u as i64, dl - a * p.r as i64, t.order, m, p.n)
            })
            .collect();
        let lifted = MetacyclicDataSet::new(lifted_params, d.g0, triples);
        if lifted.integral_genus() == Some(target)
            && validate_meta_oracle_in(&lifted, &lifted_group).is_valid()
            && visit(LiftResult { nu, lifted, shifts: shifts.clone(), genus: target })
        {
            return Ok(());
        }
        let mut pos = rank.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            let i = rank[pos];
            shifts[i] += 1;
            if shifts[i] < nu {
                break;
            }
            shifts[i] = 0;
        }
    }
}
