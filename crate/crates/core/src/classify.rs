//! Equivalence of data sets and exhaustive enumeration of weak conjugacy
//! classes of metacyclic actions of a given genus.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{mult_order, pow_mod, rem};
use crate::cyclic::CyclicDataSet;
use crate::derive::{derive_all, Derived};
use crate::error::{Error, Result};
use crate::group::{Elem, GroupParams, MetacyclicGroup};
use crate::meta::{MetacyclicDataSet, Triple};

/// How the shift `a` of the equivalence relation is quantified.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceMode {
    /// Each matched pair may use its own shift.
    #[default]
    PerPair,
    /// One shift shared by all matched pairs.
    GlobalA,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    /// Entry `i` of the second data set is matched with entry `bijection[i]` of the first.
    pub bijection: Vec<usize>,
    /// Shift used for each matched pair (all equal in global mode).
    pub a: Vec<i64>,
    pub a_i: Vec<i64>,
    pub b_i: Vec<i64>,
}

struct EqContext {
    u: i64,
    n: i64,
    r: i64,
    m: i64,
    k: i64,
    ord_k: i64,
}

impl EqContext {
    fn new(p: GroupParams) -> Self {
        let (u, n, r, k) = (p.u as i64, p.n as i64, p.r as i64, p.k as i64);
        EqContext { u, n, r, m: p.m() as i64, k, ord_k: mult_order(k, n) as i64 }
    }

    /// `(a_i, b_i)` with `δ' ≡ δ·k^{a_i} + b_i(k^γ - 1) - a·r (mod n)`, given
    /// that `γ' ≡ γ + a·u (mod m)`.
    fn pair_witness(&self, x: (i64, i64), y: (i64, i64), a: i64) -> Option<(i64, i64)> {
        if rem(y.0 - x.0 - a * self.u, self.m) != 0 {
            return None;
        }
        let kg = pow_mod(self.k, rem(x.0, self.m) as u64, self.n) - 1;
        for ai in 0..self.ord_k {
            let base = x.1 * pow_mod(self.k, ai as u64, self.n) - a * self.r;
            for bi in 0..self.n {
                if rem(base + bi * kg - y.1, self.n) == 0 {
                    return Some((ai, bi));
                }
            }
        }
        None
    }
}

/// Perfect matching in a bipartite compatibility matrix, `rows -> cols`.
fn perfect_matching(compat: &[Vec<bool>]) -> Option<Vec<usize>> {
    let size = compat.len();
    let mut owner: Vec<Option<usize>> = vec![None; size];
    fn augment(i: usize, compat: &[Vec<bool>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for j in 0..compat.len() {
            if compat[i][j] && !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|o| augment(o, compat, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    for i in 0..size {
        let mut seen = vec![false; size];
        if !augment(i, compat, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut out = vec![0; size];
    for (j, o) in owner.iter().enumerate() {
        out[o.expect("perfect")] = j;
    }
    Some(out)
}

/// Decides whether `d2` is equivalent to `d1`, returning a witness.
pub fn equivalent(
    d1: &MetacyclicDataSet,
    d2: &MetacyclicDataSet,
    mode: EquivalenceMode,
) -> Result<Option<EquivalenceWitness>> {
    if d1.params != d2.params || d1.g0 != d2.g0 || d1.triples.len() != d2.triples.len() {
        return Err(Error::Mismatch(format!(
            "{} with g0 = {} and {} entries vs {} with g0 = {} and {} entries",
            d1.params,
            d1.g0,
            d1.triples.len(),
            d2.params,
            d2.g0,
            d2.triples.len()
        )));
    }
    let ctx = EqContext::new(d1.params);
    let (x1, x2) = (d1.exponents(), d2.exponents());
    let len = x1.len();
    let nu = ctx.m / ctx.u;
    let shifts: Vec<Vec<i64>> = match mode {
        EquivalenceMode::PerPair => vec![(0..nu).collect()],
        EquivalenceMode::GlobalA => (0..nu).map(|a| vec![a]).collect(),
    };
    for allowed in shifts {
        let mut found = vec![vec![None; len]; len];
        let mut compat = vec![vec![false; len]; len];
        for i in 0..len {
            for j in 0..len {
                if d2.triples[i].order != d1.triples[j].order {
                    continue;
                }
                found[i][j] = allowed
                    .iter()
                    .find_map(|&a| ctx.pair_witness(x1[j], x2[i], a).map(|(ai, bi)| (a, ai, bi)));
                compat[i][j] = found[i][j].is_some();
            }
        }
        if let Some(bijection) = perfect_matching(&compat) {
            let mut w = EquivalenceWitness { bijection: bijection.clone(), a: vec![], a_i: vec![], b_i: vec![] };
            for (i, &j) in bijection.iter().enumerate() {
                let (a, ai, bi) = found[i][j].expect("matched pairs are compatible");
                w.a.push(a);
                w.a_i.push(ai);
                w.b_i.push(bi);
            }
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Re-checks an equivalence witness.
pub fn verify_equivalence(d1: &MetacyclicDataSet, d2: &MetacyclicDataSet, w: &EquivalenceWitness) -> bool {
    let ctx = EqContext::new(d1.params);
    let (x1, x2) = (d1.exponents(), d2.exponents());
    let mut used = vec![false; x1.len()];
    for (i, &j) in w.bijection.iter().enumerate() {
        if j >= x1.len() || used[j] || d2.triples[i].order != d1.triples[j].order {
            return false;
        }
        used[j] = true;
        let (x, y) = (x1[j], x2[i]);
        let a = w.a[i];
        let kg = pow_mod(ctx.k, rem(x.0, ctx.m) as u64, ctx.n) - 1;
        let kai = pow_mod(ctx.k, rem(w.a_i[i], ctx.ord_k) as u64, ctx.n);
        if rem(y.0 - x.0 - a * ctx.u, ctx.m) != 0
            || rem(x.1 * kai + w.b_i[i] * kg - a * ctx.r - y.1, ctx.n) != 0
        {
            return false;
        }
    }
    true
}

/// Orbit genus and cone orders of a quotient orbifold.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub g0: u32,
    /// Non-decreasing.
    pub orders: Vec<u32>,
}

/// Signatures allowed by Riemann–Hurwitz for a group of order `group_order`
/// acting on genus `genus`, with cone orders drawn from `orders`.
pub fn signatures(group_order: u64, genus: u64, orders: &[u32]) -> Vec<Signature> {
    let mut cand: Vec<u32> = orders.iter().copied().filter(|&o| o >= 2).collect();
    cand.sort_unstable();
    cand.dedup();
    let n = group_order as i64;
    let mut out = Vec::new();
    let mut g0 = 0u32;
    // Σ (1 - 1/n_i) = (2g-2)/N + 2 - 2g0 must be >= 0.
    loop {
        let target = Ratio::new(2 * genus as i64 - 2, n) + 2 - 2 * g0 as i64;
        if target < Ratio::from_integer(0) {
            break;
        }
        let mut cur = Vec::new();
        fill_orders(&cand, 0, target, &mut cur, &mut |v| out.push(Signature { g0, orders: v.to_vec() }));
        g0 += 1;
    }
    out
}

fn fill_orders(cand: &[u32], from: usize, rest: Ratio<i64>, cur: &mut Vec<u32>, emit: &mut dyn FnMut(&[u32])) {
    if rest == Ratio::from_integer(0) {
        emit(cur);
        return;
    }
    if rest < Ratio::new(1, 2) {
        return;
    }
    for (i, &o) in cand.iter().enumerate().skip(from) {
        let term = Ratio::from_integer(1) - Ratio::new(1, o as i64);
        if term > rest {
            break;
        }
        cur.push(o);
        fill_orders(cand, i, rest - term, cur, emit);
        cur.pop();
    }
}

/// A tuple of images realizing a class multiset, with hyperbolic images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub images: Vec<Elem>,
    pub handles: Vec<(Elem, Elem)>,
}

/// Lexicographically first generating tuple `(x_1, ..., x_l)` with `x_i` in
/// class `classes[i]`, `x_1` the first member of its class, and a long
/// relation completed by `g0` handles.
pub fn realize(h: &MetacyclicGroup, classes: &[usize], g0: u32) -> Option<Realization> {
    let table = h.class_table();
    let members: Vec<&[Elem]> = classes.iter().map(|&c| table.members[c].as_slice()).collect();
    let len = members.len();
    let derived = h.derived_subgroup();
    if g0 >= 1 {
        let reps: Vec<Elem> = members.iter().map(|m| m[0]).collect();
        if !derived.contains(h.product(&reps)) {
            return None;
        }
    }
    if g0 >= 2 {
        let images: Vec<Elem> = members.iter().map(|m| m[0]).collect();
        let handles = crate::meta::surface_kernel_handles(h, &images, g0).ok()?;
        return Some(Realization { images, handles });
    }
    if len == 0 {
        return None;
    }
    let size = h.order();
    // suffix[j]: all products of one member from each class j..len.
    let mut suffix: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(size); len + 1];
    suffix[len].insert(h.identity());
    if g0 == 0 {
        for j in (0..len).rev() {
            let mut set = FixedBitSet::with_capacity(size);
            for &c in members[j] {
                for s in suffix[j + 1].ones() {
                    set.insert(h.mul(c, s));
                }
            }
            suffix[j] = set;
        }
        if !suffix[0].contains(h.identity()) {
            return None;
        }
    }
    let mut chosen = vec![members[0][0]];
    search_tuple(h, &members, &suffix, g0, &mut chosen)
}

fn search_tuple(
    h: &MetacyclicGroup,
    members: &[&[Elem]],
    suffix: &[FixedBitSet],
    g0: u32,
    chosen: &mut Vec<Elem>,
) -> Option<Realization> {
    let len = members.len();
    let j = chosen.len();
    let prefix = h.product(chosen);
    if g0 == 0 {
        if j == len {
            return (prefix == h.identity() && h.generates(chosen))
                .then(|| Realization { images: chosen.clone(), handles: vec![] });
        }
        if j == len - 1 {
            let last = h.inv(prefix);
            if !members[j].contains(&last) {
                return None;
            }
            chosen.push(last);
            let ok = h.generates(chosen);
            let out = ok.then(|| Realization { images: chosen.clone(), handles: vec![] });
            chosen.pop();
            return out;
        }
        for &c in members[j] {
            let next = h.mul(prefix, c);
            if !suffix[j + 1].contains(h.inv(next)) {
                continue;
            }
            chosen.push(c);
            let found = search_tuple(h, members, suffix, g0, chosen);
            chosen.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    } else {
        if j == len {
            return crate::meta::surface_kernel_handles(h, chosen, g0)
                .ok()
                .map(|handles| Realization { images: chosen.clone(), handles });
        }
        for &c in members[j] {
            chosen.push(c);
            let found = search_tuple(h, members, suffix, g0, chosen);
            chosen.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// The data set with images `xs` in normal form.
pub fn data_set_from_images(h: &MetacyclicGroup, g0: u32, xs: &[Elem]) -> MetacyclicDataSet {
    let p = h.params();
    let triples = xs
        .iter()
        .map(|&x| {
            let e = h.element(x);
            Triple::from_exponents(e.b as i64, e.a as i64, h.element_order(x), p.m(), p.n)
        })
        .collect();
    MetacyclicDataSet::new(p, g0, triples)
}

/// All multisets of conjugacy classes matching `orders` (non-decreasing),
/// each as a non-decreasing list of class ids.
fn class_multisets(h: &MetacyclicGroup, orders: &[u32]) -> Vec<Vec<usize>> {
    let table = h.class_table();
    let mut by_order: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (c, mem) in table.members.iter().enumerate() {
        by_order.entry(h.element_order(mem[0])).or_default().push(c);
    }
    let mut out = vec![Vec::new()];
    let mut i = 0;
    while i < orders.len() {
        let o = orders[i];
        let mut j = i;
        while j < orders.len() && orders[j] == o {
            j += 1;
        }
        let classes = by_order.get(&o).cloned().unwrap_or_default();
        let mut combos = Vec::new();
        multichoose(&classes, j - i, 0, &mut Vec::new(), &mut combos);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                combos.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.extend(c);
                    v
                })
            })
            .collect();
        i = j;
    }
    out
}

fn multichoose(items: &[usize], count: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == count {
        out.push(cur.clone());
        return;
    }
    for i in from..items.len() {
        cur.push(items[i]);
        multichoose(items, count, i, cur, out);
        cur.pop();
    }
}

/// Some action of `h` on the surface of genus `genus`, if there is one.
pub fn first_action(h: &MetacyclicGroup, genus: u64) -> Option<MetacyclicDataSet> {
    signatures(h.order() as u64, genus, &h.order_spectrum()).into_iter().find_map(|sig| {
        class_multisets(h, &sig.orders)
            .into_iter()
            .find_map(|classes| realize(h, &classes, sig.g0))
            .map(|real| data_set_from_images(h, sig.g0, &real.images))
    })
}

/// One representative per weak conjugacy class of `h`-actions of genus `genus`.
pub fn classes_for_group(h: &MetacyclicGroup, genus: u64, mode: EquivalenceMode) -> Vec<MetacyclicDataSet> {
    let mut out: Vec<MetacyclicDataSet> = Vec::new();
    for sig in signatures(h.order() as u64, genus, &h.order_spectrum()) {
        let mut bucket: Vec<MetacyclicDataSet> = Vec::new();
        for classes in class_multisets(h, &sig.orders) {
            let Some(real) = realize(h, &classes, sig.g0) else { continue };
            let d = data_set_from_images(h, sig.g0, &real.images);
            let dup = bucket
                .iter()
                .any(|e| equivalent(e, &d, mode).ok().flatten().is_some());
            if !dup {
                bucket.push(d);
            }
        }
        out.extend(bucket);
    }
    out
}

/// Enumeration scope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Keep only non-split groups; the order bound becomes `4g`.
    pub nonsplit: bool,
    /// Drop generalized quaternion groups.
    pub exclude_quaternion: bool,
    /// Overrides the order bound (`84(g-1)`, or `4g` with `nonsplit`).
    pub max_order: Option<u32>,
    /// Keep one presentation per isomorphism type of group.
    pub dedupe_isomorphic: bool,
    pub equivalence: EquivalenceMode,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            nonsplit: false,
            exclude_quaternion: false,
            max_order: None,
            dedupe_isomorphic: true,
            equivalence: EquivalenceMode::PerPair,
        }
    }
}

impl ClassifyOptions {
    pub fn order_bound(&self, genus: u64) -> u32 {
        self.max_order.unwrap_or(if self.nonsplit { 4 * genus as u32 } else { 84 * (genus as u32 - 1) })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub group: GroupParams,
    pub data: MetacyclicDataSet,
    pub derived: Derived,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationTable {
    pub genus: u64,
    pub options: ClassifyOptions,
    pub rows: Vec<TableRow>,
}

/// Quick check that some signature with a cone for each order is possible.
fn has_signature(p: &GroupParams, h: &MetacyclicGroup, genus: u64) -> bool {
    !signatures(p.order() as u64, genus, &h.order_spectrum()).is_empty()
}

/// Parameter tuples in scope, one per isomorphism type when requested.
pub fn groups_in_scope(genus: u64, opts: &ClassifyOptions) -> Vec<GroupParams> {
    let bound = opts.order_bound(genus);
    let params: Vec<GroupParams> = GroupParams::enumerate(bound, false);
    let kept: Vec<GroupParams> = params
        .par_iter()
        .filter(|p| {
            let h = MetacyclicGroup::new(**p);
            has_signature(p, &h, genus)
                && (!opts.nonsplit || !h.is_split())
                && (!opts.exclude_quaternion || !h.is_generalized_quaternion())
        })
        .copied()
        .collect();
    if !opts.dedupe_isomorphic {
        return kept;
    }
    isomorphism_representatives(&kept)
}

/// Preference among isomorphic presentations: larger `n`, then larger `r`
/// (smaller `G`), then larger `k` (so `-1` wins).
fn preference(p: &GroupParams) -> (u32, u32, u32) {
    (p.n, p.r, p.k)
}

/// Keeps one presentation per isomorphism class.
pub fn isomorphism_representatives(params: &[GroupParams]) -> Vec<GroupParams> {
    let mut buckets: BTreeMap<(usize, Vec<(u32, usize, usize)>), Vec<GroupParams>> = BTreeMap::new();
    for p in params {
        let h = MetacyclicGroup::new(*p);
        buckets.entry((p.order(), h.fingerprint())).or_default().push(*p);
    }
    let mut out = Vec::new();
    for (_, mut bucket) in buckets {
        bucket.sort_by(|a, b| preference(b).cmp(&preference(a)).then(a.cmp(b)));
        let mut reps: Vec<MetacyclicGroup> = Vec::new();
        for p in bucket {
            if !reps.iter().any(|h| h.isomorphism_from(p).is_some()) {
                reps.push(MetacyclicGroup::new(p));
            }
        }
        out.extend(reps.into_iter().map(|h| h.params()));
    }
    out.sort_by_key(|p| (p.order(), p.n, p.r, p.k, p.u));
    out
}

/// Classes of metacyclic actions of genus `genus` in scope of `opts`.
pub fn enumerate_meta(genus: u64, opts: &ClassifyOptions) -> Result<ClassificationTable> {
    if genus < 2 {
        return Err(Error::InvalidInput(format!("genus {genus} is below 2")));
    }
    let groups = groups_in_scope(genus, opts);
    log::info!("genus {genus}: {} groups in scope", groups.len());
    let per_group: Vec<Result<Vec<TableRow>>> = groups
        .par_iter()
        .map(|p| {
            let h = MetacyclicGroup::new(*p);
            let reps = classes_for_group(&h, genus, opts.equivalence);
            log::debug!("{p}: {} classes", reps.len());
            reps.into_iter()
                .map(|d| {
                    let derived = derive_all(&d, &h)?;
                    Ok(TableRow { group: *p, data: d, derived })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_group {
        rows.extend(r?);
    }
    rows.sort_by(|a, b| {
        let ka = (a.group.order(), a.group.n, a.group.r, a.group.k);
        let kb = (b.group.order(), b.group.n, b.group.r, b.group.k);
        ka.cmp(&kb).then_with(|| a.data.triples.cmp(&b.data.triples)).then(a.data.g0.cmp(&b.data.g0))
    });
    Ok(ClassificationTable { genus, options: *opts, rows })
}

/// A data set of `M(u, n, r, k)` whose cyclic factors are `df` and `dg`.
pub fn query_pair(
    df: &CyclicDataSet,
    dg: &CyclicDataSet,
    u: u32,
    r: u32,
    k: i64,
) -> Result<Option<MetacyclicDataSet>> {
    let params = GroupParams::new(u as i64, df.n as i64, r as i64, k)?;
    if params.k == 1 {
        return Err(Error::InvalidInput("twist factor must differ from 1".into()));
    }
    if dg.n != params.m() {
        return Err(Error::Mismatch(format!("D_G has degree {}, expected u·n/r = {}", dg.n, params.m())));
    }
    let (gf, gg) = (df.genus(), dg.genus());
    if gf != gg {
        return Err(Error::Mismatch(format!("D_F has genus {gf}, D_G has genus {gg}")));
    }
    if !df.is_valid() || !dg.is_valid() {
        return Err(Error::InvalidInput("both factors must be valid cyclic data sets".into()));
    }
    let genus = *gf.numer() as u64;
    if genus < 2 {
        return Ok(None);
    }
    let (df, dg) = (df.canonical(), dg.canonical());
    let h = MetacyclicGroup::new(params);
    for d in classes_for_group(&h, genus, EquivalenceMode::PerPair) {
        let derived = derive_all(&d, &h)?;
        if derived.df == df && derived.dg == dg {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

impl ClassificationTable {
    /// Number of rows per group, in row order.
    pub fn counts(&self) -> Vec<(GroupParams, usize)> {
        let mut out: Vec<(GroupParams, usize)> = Vec::new();
        for row in &self.rows {
            match out.last_mut() {
                Some((g, c)) if *g == row.group => *c += 1,
                _ => out.push((row.group, 1)),
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut scope = vec![format!("genus {}", self.genus)];
        if self.options.nonsplit {
            scope.push("non-split".into());
        }
        if self.options.exclude_quaternion {
            scope.push("without generalized quaternion groups".into());
        }
        scope.push(format!("|H| <= {}", self.options.order_bound(self.genus)));
        s.push_str(&format!("# weak conjugacy classes of metacyclic actions: {}\n", scope.join(", ")));
        s.push_str("# group | data set | [D_G;D_F]\n");
        for row in &self.rows {
            s.push_str(&format!(
                "{} | {} | [{};{}]\n",
                row.group, row.data, row.derived.dg, row.derived.df
            ));
        }
        let counts: Vec<String> = self.counts().iter().map(|(g, c)| format!("{g}: {c}")).collect();
        s.push_str(&format!("# {} classes ({})\n", self.rows.len(), counts.join(", ")));
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::InvalidInput(e.to_string());
        w.write_record(["group", "u", "n", "r", "k", "g0", "data_set", "d_g", "d_f", "d_gbar"])
            .map_err(csv_err)?;
        for row in &self.rows {
            let p = row.group;
            w.write_record([
                p.to_string(),
                p.u.to_string(),
                p.n.to_string(),
                p.r.to_string(),
                p.k_signed().to_string(),
                row.data.g0.to_string(),
                row.data.to_string(),
                row.derived.dg.to_string(),
                row.derived.df.to_string(),
                row.derived.dgbar.to_string(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                serde_json::json!({
                    "group": row.group.to_string(),
                    "data_set": row.data.to_string(),
                    "data": row.data,
                    "d_g": row.derived.dg.to_string(),
                    "d_f": row.derived.df.to_string(),
                    "d_gbar": row.derived.dgbar.to_string(),
                    "notes": row.derived.notes,
                })
            })
            .collect();
        serde_json::json!({
            "schema": crate::SCHEMA,
            "genus": self.genus,
            "options": self.options,
            "classes": self.rows.len(),
            "rows": rows,
        })
    }
}
