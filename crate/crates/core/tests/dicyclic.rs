//! `dicyclic_exists` against a brute-force enumeration of dicyclic actions.

use std::collections::{BTreeMap, BTreeSet};

use mcg_core::{dicyclic_exists, Cone, CyclicDataSet, DicyclicClause, GroupParams, MetacyclicGroup};

const MAX_GENUS: u32 = 10;

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Data set of the restriction to `<f>` of the action with generating vector
/// `xs`, computed from double cosets `<f> g <x_i>`. `None` when it is free.
fn restricted(h: &MetacyclicGroup, xs: &[usize], genus: u32, f: usize) -> Option<CyclicDataSet> {
    let mut k = vec![h.identity()];
    let mut y = f;
    while y != h.identity() {
        k.push(y);
        y = h.mul(y, f);
    }
    let big_n = k.len() as u32;
    let pos: BTreeMap<usize, u32> = k.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
    let mut cones = Vec::new();
    for &x in xs {
        let mut c = vec![h.identity()];
        let mut z = x;
        while z != h.identity() {
            c.push(z);
            z = h.mul(z, x);
        }
        let ord = c.len() as u32;
        let mut seen = BTreeSet::new();
        for g in 0..h.order() {
            if seen.contains(&g) {
                continue;
            }
            for &a in &k {
                for &b in &c {
                    seen.insert(h.mul(h.mul(a, g), b));
                }
            }
            let conj = h.mul(h.mul(g, x), h.inv(g));
            let mut t = 1;
            let mut p = conj;
            while !pos.contains_key(&p) {
                p = h.mul(p, conj);
                t += 1;
            }
            let q = ord / t;
            if q > 1 {
                let e = pos[&p];
                cones.push(Cone::new(e / (big_n / q), q));
            }
        }
    }
    if cones.is_empty() {
        return None;
    }
    // 2g - 2 = N(2h - 2 + Σ(1 - 1/q))
    let sum: f64 = cones.iter().map(|c| 1.0 - 1.0 / c.m as f64).sum();
    let h0 = ((2.0 * genus as f64 - 2.0) / big_n as f64 + 2.0 - sum) / 2.0;
    let h0 = h0.round() as u32;
    Some(CyclicDataSet::new(big_n, h0, cones).canonical())
}

/// Pairs `(a, b)` by commutator `aba^-1b^-1`.
type Comms = BTreeMap<usize, Vec<(usize, usize)>>;

/// Every generating vector of `h` for genus `genus`, orders sorted, fed to `visit`.
fn generating_vectors(h: &MetacyclicGroup, genus: u32, visit: &mut dyn FnMut(&[usize])) {
    let order = h.order() as i64;
    let mut by_order: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for x in 0..h.order() {
        if x != h.identity() {
            by_order.entry(h.element_order(x)).or_default().push(x);
        }
    }
    let orders: Vec<u32> = by_order.keys().copied().collect();
    let mut comms: Comms = BTreeMap::new();
    for a in 0..h.order() {
        for b in 0..h.order() {
            let c = h.mul(h.mul(a, b), h.mul(h.inv(a), h.inv(b)));
            comms.entry(c).or_default().push((a, b));
        }
    }
    let target = 2 * genus as i64 - 2;
    for g0 in 0..=genus {
        let base = order * (2 * g0 as i64 - 2);
        if base > target {
            break;
        }
        let mut sigs = Vec::new();
        sig_rec(&orders, order, 0, base, target, &mut Vec::new(), &mut sigs);
        for sig in sigs {
            let mut xs = Vec::new();
            tuples(h, g0, &sig, &by_order, &comms, &mut xs, visit);
        }
    }
}

fn sig_rec(orders: &[u32], order: i64, start: usize, acc: i64, target: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if acc == target {
        out.push(cur.clone());
    }
    for i in start..orders.len() {
        let step = order - order / orders[i] as i64;
        if acc + step <= target {
            cur.push(orders[i]);
            sig_rec(orders, order, i, acc + step, target, cur, out);
            cur.pop();
        }
    }
}

fn generates(h: &MetacyclicGroup, gens: &[usize]) -> bool {
    let mut seen = BTreeSet::from([h.identity()]);
    let mut stack = vec![h.identity()];
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = h.mul(x, g);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == h.order()
}

fn tuples(
    h: &MetacyclicGroup,
    g0: u32,
    sig: &[u32],
    by_order: &BTreeMap<u32, Vec<usize>>,
    comms: &Comms,
    xs: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if xs.len() + 1 < sig.len() || (g0 > 0 && xs.len() < sig.len()) {
        for &x in &by_order[&sig[xs.len()]] {
            xs.push(x);
            tuples(h, g0, sig, by_order, comms, xs, visit);
            xs.pop();
        }
        return;
    }
    let prod = xs.iter().fold(h.identity(), |a, &x| h.mul(a, x));
    if g0 == 0 {
        let Some(&last_order) = sig.last() else { return };
        let last = h.inv(prod);
        if h.element_order(last) != last_order {
            return;
        }
        xs.push(last);
        if generates(h, xs) {
            visit(xs);
        }
        xs.pop();
        return;
    }
    assert!(g0 <= 2, "orbit genus 3 needs genus > 8·4+1");
    let need = h.inv(prod);
    let ok = if g0 == 1 {
        comms.get(&need).is_some_and(|pairs| {
            pairs.iter().any(|&(a, b)| {
                let mut gens = xs.clone();
                gens.extend([a, b]);
                generates(h, &gens)
            })
        })
    } else {
        comms.iter().any(|(&c1, first)| {
            let rest = h.mul(h.inv(c1), need);
            comms.get(&rest).is_some_and(|second| {
                first.iter().any(|&(a1, b1)| {
                    second.iter().any(|&(a2, b2)| {
                        let mut gens = xs.clone();
                        gens.extend([a1, b1, a2, b2]);
                        generates(h, &gens)
                    })
                })
            })
        })
    };
    if ok {
        visit(xs);
    }
}

/// Every valid cyclic data set of degree `n` and genus `genus` with at least one cone.
fn cyclic_sets(n: u32, genus: u32) -> Vec<CyclicDataSet> {
    let mut kinds = Vec::new();
    for q in 2..=n {
        if n.is_multiple_of(q) {
            for c in 1..q {
                if gcd(c, q) == 1 {
                    kinds.push(Cone::new(c, q));
                }
            }
        }
    }
    let target = 2 * genus as i64 - 2;
    let mut out = Vec::new();
    for g0 in 0..=genus {
        let base = n as i64 * (2 * g0 as i64 - 2);
        if base > target {
            break;
        }
        fn rec(kinds: &[Cone], n: i64, start: usize, acc: i64, target: i64, cur: &mut Vec<Cone>, out: &mut Vec<Vec<Cone>>) {
            if acc == target && !cur.is_empty() {
                out.push(cur.clone());
            }
            for i in start..kinds.len() {
                let step = n - n / kinds[i].m as i64;
                if acc + step <= target {
                    cur.push(kinds[i]);
                    rec(kinds, n, i, acc + step, target, cur, out);
                    cur.pop();
                }
            }
        }
        let mut sets = Vec::new();
        rec(&kinds, n as i64, 0, base, target, &mut Vec::new(), &mut sets);
        for cones in sets {
            let d = CyclicDataSet::new(n, g0, cones);
            if d.is_valid() {
                out.push(d.canonical());
            }
        }
    }
    out
}

#[test]
fn agrees_with_brute_force_up_to_genus_10() {
    let mut checked = 0;
    let mut positive = 0;
    for genus in 2..=MAX_GENUS {
        for n in (2..=2 * genus).step_by(2) {
            let h = MetacyclicGroup::new(GroupParams::dicyclic(n));
            let mut realized = BTreeSet::new();
            generating_vectors(&h, genus, &mut |xs| {
                if let Some(d) = restricted(&h, xs, genus, h.f()) {
                    realized.insert(d.to_string());
                }
            });
            for d in cyclic_sets(2 * n, genus) {
                let got = dicyclic_exists(&d).unwrap();
                assert_eq!(got.exists(), realized.contains(&d.to_string()), "{d} (genus {genus})");
                if got.exists() {
                    assert!(got.witness_matches, "{d}");
                    positive += 1;
                }
                checked += 1;
            }
            for d in &realized {
                assert_eq!(CyclicDataSet::parse(d).unwrap().genus(), (genus as i64).into(), "{d}");
            }
        }
    }
    println!("dicyclic: {checked} data sets, {positive} extend");
    assert!(positive > 0);
}

#[test]
fn listed_examples() {
    let d = CyclicDataSet::parse("(20,0;(1,20),(19,20),((1,2),2))").unwrap();
    let r = dicyclic_exists(&d).unwrap();
    assert_eq!(r.clause, Some(DicyclicClause::EvenGenus));
    assert!(r.witness_matches);

    let d = CyclicDataSet::parse("(12,1;(1,6),(5,6))").unwrap();
    let r = dicyclic_exists(&d).unwrap();
    assert_eq!(r.clause, Some(DicyclicClause::TorusSumTwo));
    assert_eq!(r.witness.unwrap().to_string(), "((2·12,6,-1),1;[(0,1),(1,6),6])");

    let d = CyclicDataSet::parse("(20,0;(1,20),(3,20),((1,2),2))").unwrap();
    assert!(!dicyclic_exists(&d).unwrap().exists());
}

#[test]
fn rejects_odd_and_small_degree() {
    for s in ["(7,0;(1,7),(2,7),(4,7))", "(2,0;((1,2),6))"] {
        let d = CyclicDataSet::parse(s).unwrap();
        assert!(dicyclic_exists(&d).is_err(), "{s}");
    }
}
