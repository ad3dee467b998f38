//! Property checks shared by the property tests and the acceptance run.
//! Each returns the number of cases examined, or the first counterexample.

use std::collections::BTreeMap;

use mcg_core::classify::classes_for_group;
use mcg_core::{
    derive_df, derive_dg, enumerate_meta, equivalent, lift_to_split, validate_meta_oracle, ClassifyOptions,
    EquivalenceMode, GroupParams, MetacyclicDataSet, MetacyclicGroup,
};

use super::sweep;

type Buckets = BTreeMap<(GroupParams, u32, usize), Vec<MetacyclicDataSet>>;

/// Valid sweep candidates grouped by group, orbit genus and length.
pub fn valid_by_group(max_order: u32) -> Buckets {
    let mut out: Buckets = BTreeMap::new();
    for p in sweep::groups().into_iter().filter(|p| p.u * p.n <= max_order) {
        for d in sweep::candidates(p) {
            if validate_meta_oracle(&d).is_valid() {
                out.entry((p, d.g0, d.triples.len())).or_default().push(d);
            }
        }
    }
    out
}

pub fn equivalence_relation(buckets: &Buckets, per_bucket: usize) -> Result<usize, String> {
    let mut compared = 0;
    for mode in [EquivalenceMode::PerPair, EquivalenceMode::GlobalA] {
        for sets in buckets.values() {
            let sets: Vec<_> = sets.iter().take(per_bucket).collect();
            let mut rel = Vec::new();
            for a in &sets {
                let mut row = Vec::new();
                for b in &sets {
                    row.push(equivalent(a, b, mode).map_err(|e| e.to_string())?.is_some());
                }
                rel.push(row);
            }
            for i in 0..sets.len() {
                if !rel[i][i] {
                    return Err(format!("{} not equivalent to itself ({mode:?})", sets[i]));
                }
                for j in 0..sets.len() {
                    if rel[i][j] != rel[j][i] {
                        return Err(format!("{} / {} not symmetric ({mode:?})", sets[i], sets[j]));
                    }
                    for k in 0..sets.len() {
                        if rel[i][j] && rel[j][k] && !rel[i][k] {
                            return Err(format!("{} ~ {} ~ {} ({mode:?})", sets[i], sets[j], sets[k]));
                        }
                    }
                    compared += 1;
                }
            }
        }
    }
    Ok(compared)
}

pub fn derived_factors_valid(buckets: &Buckets) -> Result<usize, String> {
    let mut checked = 0;
    for d in buckets.values().flatten() {
        let g = d.integral_genus().ok_or_else(|| format!("{d} has no integral genus"))? as i64;
        for x in [derive_df(d), derive_dg(d)] {
            let x = x.map_err(|e| format!("{d}: {e}"))?;
            if !x.is_valid() || x.genus() != g.into() {
                return Err(format!("{x} from {d}"));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

pub fn free_over_sphere_is_split(max_genus: u64) -> Result<usize, String> {
    let mut hits = 0;
    for genus in 2..=max_genus {
        let opts = ClassifyOptions { nonsplit: false, ..ClassifyOptions::default() };
        let table = enumerate_meta(genus, &opts).map_err(|e| e.to_string())?;
        for row in &table.rows {
            let df = derive_df(&row.data).map_err(|e| e.to_string())?;
            if df.is_free() && row.data.g0 == 0 {
                if !MetacyclicGroup::new(row.data.params).is_split() {
                    return Err(format!("{} has free D_F over the sphere but is non-split", row.data));
                }
                hits += 1;
            }
        }
    }
    Ok(hits)
}

pub fn dicyclic_lifts(max_genus: u64) -> Result<usize, String> {
    let mut lifted = 0;
    for genus in 2..=max_genus {
        for n in (2..=2 * genus as u32).step_by(2) {
            let h = MetacyclicGroup::new(GroupParams::dicyclic(n));
            for d in classes_for_group(&h, genus, EquivalenceMode::PerPair) {
                let l = lift_to_split(&d).map_err(|e| format!("{d}: {e}"))?;
                let l = l.ok_or_else(|| format!("{d} has no split lift"))?;
                if !MetacyclicGroup::new(l.lifted.params).is_split() || !validate_meta_oracle(&l.lifted).is_valid() {
                    return Err(format!("{d} lifts to {}", l.lifted));
                }
                lifted += 1;
            }
        }
    }
    Ok(lifted)
}
