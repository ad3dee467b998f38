//! Candidates for the dual-validator sweep: all groups with `u·n <= 48`,
//! orbit genus `g0 <= 2`, genus `2..=6`, entries taken as multisets of
//! non-identity elements in normal form with the true element order as the
//! stated cone order.

use mcg_core::{GroupParams, MetacyclicDataSet, MetacyclicGroup, Triple};

pub const MAX_ORDER: u32 = 48;
pub const MAX_GENUS: i64 = 6;

/// `(index, order)` of each non-identity element.
fn elements(h: &MetacyclicGroup) -> Vec<(usize, u32)> {
    (0..h.order())
        .filter(|&x| x != h.identity())
        .map(|x| (x, h.element_order(x)))
        .collect()
}

/// Multisets of element positions giving genus `2..=MAX_GENUS`.
fn multisets(els: &[(usize, u32)], order: i64, g0: i64, out: &mut Vec<Vec<usize>>) {
    fn go(
        els: &[(usize, u32)],
        order: i64,
        start: usize,
        acc: i64,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        // acc = |H|(2g0-2) + Σ (|H| - |H|/n_i) = 2g-2
        if acc >= 2 && acc % 2 == 0 && acc <= 2 * MAX_GENUS - 2 {
            out.push(cur.clone());
        }
        for i in start..els.len() {
            let step = order - order / els[i].1 as i64;
            if acc + step > 2 * MAX_GENUS - 2 {
                continue;
            }
            cur.push(i);
            go(els, order, i, acc + step, cur, out);
            cur.pop();
        }
    }
    go(els, order, 0, order * (2 * g0 - 2), &mut Vec::new(), out);
}

pub fn candidates(p: GroupParams) -> Vec<MetacyclicDataSet> {
    let h = MetacyclicGroup::new(p);
    let els = elements(&h);
    let (m, n) = (p.m(), p.n);
    let mut out = Vec::new();
    for g0 in 0..=2u32 {
        let mut sets = Vec::new();
        multisets(&els, h.order() as i64, g0 as i64, &mut sets);
        for s in sets {
            let triples = s
                .iter()
                .map(|&i| {
                    let (x, ord) = els[i];
                    let e = h.element(x);
                    Triple::from_exponents(e.b as i64, e.a as i64, ord, m, n)
                })
                .collect();
            out.push(MetacyclicDataSet::new(p, g0, triples));
        }
    }
    out
}

/// Groups in the sweep.
pub fn groups() -> Vec<GroupParams> {
    GroupParams::enumerate(MAX_ORDER, true)
}
