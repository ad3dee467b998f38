//! Exact arithmetic in the metacyclic group
//!
//! ```text
//! M(u,n,r,k) = < F, G | F^n = 1, G^u = F^r, G^-1 F G = F^k >
//! ```
//!
//! Every element has a unique normal form `G^b F^a` with `0 <= b < u` and
//! `0 <= a < n`. Internally elements are addressed by the index `b·n + a`,
//! which keeps subgroup and conjugacy computations on plain bitsets.

use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd, pow_mod, prime_factors, rem};
use crate::error::ParamError;

/// Parameters `(u, n, r, k)` of a metacyclic group of order `u·n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupParams {
    pub u: u32,
    pub n: u32,
    pub r: u32,
    pub k: u32,
}

impl GroupParams {
    /// Checks the defining congruences; `k` may be given as any integer
    /// (e.g. `-1`) and is reduced modulo `n`.
    pub fn new(u: i64, n: i64, r: i64, k: i64) -> Result<Self, ParamError> {
        if u < 2 || n < 2 {
            return Err(ParamError::TooSmall(u, n));
        }
        if r < 1 || n % r != 0 {
            return Err(ParamError::AmalgamNotDivisor { r, n });
        }
        let kr = rem(k, n);
        if gcd(kr, n) != 1 {
            return Err(ParamError::TwistNotUnit { k, n });
        }
        if pow_mod(kr, u as u64, n) != 1 {
            return Err(ParamError::TwistOrder { k, u, n });
        }
        if rem(r * (kr - 1), n) != 0 {
            return Err(ParamError::Inconsistent { r, k, n });
        }
        Ok(GroupParams { u: u as u32, n: n as u32, r: r as u32, k: kr as u32 })
    }

    /// Order of `G`, `m = u·n/r`.
    pub fn m(&self) -> u32 {
        self.u * self.n / self.r
    }

    pub fn order(&self) -> usize {
        (self.u * self.n) as usize
    }

    /// `n/r`, the number of exponent pairs `(γ mod m, δ mod n)` naming each element.
    pub fn nu(&self) -> u32 {
        self.n / self.r
    }

    /// `Dic_t = M(2, 2t, t, -1)`.
    pub fn dicyclic(t: u32) -> GroupParams {
        GroupParams::new(2, 2 * t as i64, t as i64, -1).expect("dicyclic parameters are consistent")
    }

    /// `k` printed the way tables write it: `-1` for `n-1`.
    pub fn k_signed(&self) -> i64 {
        if self.k + 1 == self.n && self.n > 2 {
            -1
        } else {
            self.k as i64
        }
    }

    /// Every consistent tuple with `u, n >= 2` and `u·n <= max_order`, ordered by
    /// `(u·n, n, r, k)`. Tuples with `k = 1` are included only when `include_abelian`.
    pub fn enumerate(max_order: u32, include_abelian: bool) -> Vec<GroupParams> {
        let mut out = Vec::new();
        for u in 2..=max_order / 2 {
            for n in 2..=max_order / u {
                for r in divisors(n as u64) {
                    for k in 1..n {
                        if k == 1 && !include_abelian {
                            continue;
                        }
                        if let Ok(p) = GroupParams::new(u as i64, n as i64, r as i64, k as i64) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out.sort_by_key(|p| (p.order(), p.n, p.r, p.k, p.u));
        out
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({},{},{},{})", self.u, self.n, self.r, self.k_signed())
    }
}

/// The normal-form element `G^b F^a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub b: u32,
    pub a: u32,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { b: 0, a: 0 };
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.b, self.a) {
            (0, 0) => write!(f, "1"),
            (0, a) => write!(f, "F^{a}"),
            (b, 0) => write!(f, "G^{b}"),
            (b, a) => write!(f, "G^{b}F^{a}"),
        }
    }
}

/// Element index inside a [`MetacyclicGroup`].
pub type Elem = usize;

/// A set of elements of one group.
pub type ElementSet = FixedBitSet;

/// Conjugacy class partition of a group.
#[derive(Debug, Clone)]
pub struct ClassTable {
    /// Class index of every element.
    pub class_of: Vec<u32>,
    /// Members of each class in increasing index order. Classes are sorted by
    /// (element order, smallest member).
    pub members: Vec<Vec<Elem>>,
}

/// `M(u,n,r,k)` with cached element orders and conjugacy classes.
pub struct MetacyclicGroup {
    params: GroupParams,
    u: usize,
    n: usize,
    r: usize,
    /// `k^b mod n` for `b in 0..u`.
    kpow: Vec<usize>,
    orders: OnceLock<Vec<u32>>,
    classes: OnceLock<ClassTable>,
    split: OnceLock<bool>,
    commutators: OnceLock<Vec<Vec<(Elem, Elem)>>>,
}

impl fmt::Debug for MetacyclicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetacyclicGroup").field("params", &self.params).finish()
    }
}

impl MetacyclicGroup {
    /// Builds the group and checks that the normal-form model really has `u·n`
    /// elements closed under multiplication.
    pub fn new(params: GroupParams) -> MetacyclicGroup {
        let (u, n, r) = (params.u as usize, params.n as usize, params.r as usize);
        let k = params.k as usize;
        let mut kpow = Vec::with_capacity(u);
        let mut acc = 1 % n;
        for _ in 0..u {
            kpow.push(acc);
            acc = acc * k % n;
        }
        let group = MetacyclicGroup {
            params,
            u,
            n,
            r,
            kpow,
            orders: OnceLock::new(),
            classes: OnceLock::new(),
            split: OnceLock::new(),
            commutators: OnceLock::new(),
        };
        debug_assert_eq!(group.generated(&[group.g(), group.f()]).count_ones(..), group.order());
        group
    }

    /// Checks the parameters and constructs the group.
    pub fn from_params(u: i64, n: i64, r: i64, k: i64) -> Result<MetacyclicGroup, ParamError> {
        GroupParams::new(u, n, r, k).map(MetacyclicGroup::new)
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn order(&self) -> usize {
        self.u * self.n
    }

    /// Order of `G`.
    pub fn m(&self) -> usize {
        self.params.m() as usize
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn g(&self) -> Elem {
        if self.u > 1 {
            self.n
        } else {
            self.from_exponents(1, 0)
        }
    }

    pub fn f(&self) -> Elem {
        1 % self.order()
    }

    #[inline]
    pub fn index(&self, x: GroupElement) -> Elem {
        (x.b as usize % self.u) * self.n + x.a as usize % self.n
    }

    #[inline]
    pub fn element(&self, x: Elem) -> GroupElement {
        GroupElement { b: (x / self.n) as u32, a: (x % self.n) as u32 }
    }

    /// `(G^b1 F^a1)(G^b2 F^a2) = G^b' F^(r·q + a1·k^b2 + a2)` with `b1 + b2 = u·q + b'`.
    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        let (b1, a1) = (x / self.n, x % self.n);
        let (b2, a2) = (y / self.n, y % self.n);
        let s = b1 + b2;
        let (q, b) = if s >= self.u { (1, s - self.u) } else { (0, s) };
        let a = (self.r * q + a1 * self.kpow[b2] + a2) % self.n;
        b * self.n + a
    }

    #[inline]
    pub fn inv(&self, x: Elem) -> Elem {
        let (b, a) = (x / self.n, x % self.n);
        if b == 0 {
            return (self.n - a) % self.n;
        }
        // F^-a G^-b = G^(u-b) F^(-a·k^(u-b) - r)
        let nb = self.u - b;
        let na = (2 * self.n * self.n - a * self.kpow[nb] - self.r) % self.n;
        nb * self.n + na
    }

    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        let mut acc = self.identity();
        let mut base = x;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x^e` for any integer exponent.
    pub fn zpow(&self, x: Elem, e: i64) -> Elem {
        let ord = self.element_order(x) as i64;
        self.pow(x, rem(e, ord) as u64)
    }

    /// The element `G^γ F^δ` for arbitrary integer exponents.
    pub fn from_exponents(&self, gamma: i64, delta: i64) -> Elem {
        let g = rem(gamma, self.m() as i64) as usize;
        let (q, b) = (g / self.u, g % self.u);
        let a = rem((self.r * q) as i64 + delta, self.n as i64) as usize;
        b * self.n + a
    }

    /// `y^-1 x y`.
    #[inline]
    pub fn conjugate(&self, x: Elem, by: Elem) -> Elem {
        self.mul(self.mul(self.inv(by), x), by)
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    #[inline]
    pub fn commutator(&self, x: Elem, y: Elem) -> Elem {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn product(&self, xs: &[Elem]) -> Elem {
        xs.iter().fold(self.identity(), |acc, &x| self.mul(acc, x))
    }

    fn orders(&self) -> &[u32] {
        self.orders.get_or_init(|| {
            let order = self.order() as u64;
            let primes = prime_factors(order);
            (0..self.order())
                .map(|x| {
                    let mut o = order;
                    for &p in &primes {
                        while o.is_multiple_of(p) && self.pow(x, o / p) == 0 {
                            o /= p;
                        }
                    }
                    o as u32
                })
                .collect()
        })
    }

    /// Smallest `s >= 1` with `x^s = 1`.
    pub fn element_order(&self, x: Elem) -> u32 {
        self.orders()[x]
    }

    pub fn order_of(&self, x: GroupElement) -> u32 {
        self.element_order(self.index(x))
    }

    /// Sorted list of distinct element orders.
    pub fn order_spectrum(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.orders().to_vec();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn class_table(&self) -> &ClassTable {
        self.classes.get_or_init(|| {
            let size = self.order();
            let gens = [self.g(), self.f()];
            let mut class_of = vec![u32::MAX; size];
            let mut members: Vec<Vec<Elem>> = Vec::new();
            for start in 0..size {
                if class_of[start] != u32::MAX {
                    continue;
                }
                let id = members.len() as u32;
                let mut orbit = vec![start];
                class_of[start] = id;
                let mut head = 0;
                while head < orbit.len() {
                    let x = orbit[head];
                    head += 1;
                    for &s in &gens {
                        let y = self.conjugate(x, s);
                        if class_of[y] == u32::MAX {
                            class_of[y] = id;
                            orbit.push(y);
                        }
                    }
                }
                orbit.sort_unstable();
                members.push(orbit);
            }
            let mut perm: Vec<usize> = (0..members.len()).collect();
            perm.sort_by_key(|&c| (self.element_order(members[c][0]), members[c][0]));
            let mut relabel = vec![0u32; members.len()];
            for (new, &old) in perm.iter().enumerate() {
                relabel[old] = new as u32;
            }
            let members = perm.iter().map(|&c| members[c].clone()).collect();
            for c in class_of.iter_mut() {
                *c = relabel[*c as usize];
            }
            ClassTable { class_of, members }
        })
    }

    pub fn class_of(&self, x: Elem) -> usize {
        self.class_table().class_of[x] as usize
    }

    pub fn are_conjugate(&self, x: Elem, y: Elem) -> bool {
        let t = self.class_table();
        t.class_of[x] == t.class_of[y]
    }

    /// Conjugacy class of `x` and the order of its centralizer.
    pub fn conjugacy_data(&self, x: GroupElement) -> (Vec<GroupElement>, usize) {
        let t = self.class_table();
        let class = &t.members[t.class_of[self.index(x)] as usize];
        (class.iter().map(|&y| self.element(y)).collect(), self.order() / class.len())
    }

    pub fn centralizer_size(&self, x: Elem) -> usize {
        let t = self.class_table();
        self.order() / t.members[t.class_of[x] as usize].len()
    }

    /// Subgroup generated by `gens`, as an element bitset.
    pub fn generated(&self, gens: &[Elem]) -> ElementSet {
        let mut set = FixedBitSet::with_capacity(self.order());
        set.insert(self.identity());
        self.extend_closure(&mut set, gens);
        set
    }

    /// Enlarges the subgroup `set` to the subgroup generated by `set ∪ gens`.
    pub fn extend_closure(&self, set: &mut ElementSet, gens: &[Elem]) {
        let mut all_gens: Vec<Elem> = gens.iter().copied().filter(|&g| g != 0).collect();
        if all_gens.iter().all(|&g| set.contains(g)) {
            return;
        }
        all_gens.extend(set.ones().filter(|&x| x != 0));
        all_gens.sort_unstable();
        all_gens.dedup();
        let mut frontier: Vec<Elem> = set.ones().collect();
        for &g in gens {
            if !set.contains(g) {
                set.insert(g);
                frontier.push(g);
            }
        }
        while let Some(x) = frontier.pop() {
            for &g in &all_gens {
                let y = self.mul(x, g);
                if !set.contains(y) {
                    set.insert(y);
                    frontier.push(y);
                }
            }
        }
    }

    pub fn generates(&self, gens: &[Elem]) -> bool {
        self.generated(gens).count_ones(..) == self.order()
    }

    /// Closure of `gens` under multiplication.
    pub fn generated_subgroup(&self, gens: &[GroupElement]) -> Vec<GroupElement> {
        let idx: Vec<Elem> = gens.iter().map(|&g| self.index(g)).collect();
        self.generated(&idx).ones().map(|x| self.element(x)).collect()
    }

    /// `true` iff the group is `Z_a ⋊ Z_b`: some normal cyclic `<x>` has a
    /// cyclic complement `<y>` with `<x> ∩ <y> = 1` and `|x|·|y| = |H|`.
    pub fn is_split(&self) -> bool {
        *self.split.get_or_init(|| self.find_splitting().is_some())
    }

    /// A splitting pair `(x, y)` if one exists.
    pub fn find_splitting(&self) -> Option<(Elem, Elem)> {
        let size = self.order();
        let orders = self.orders();
        let mut by_order: Vec<Vec<Elem>> = vec![Vec::new(); size + 1];
        for (x, &o) in orders.iter().enumerate() {
            by_order[o as usize].push(x);
        }
        let mut seen = FixedBitSet::with_capacity(size);
        let gens = [self.g(), self.f()];
        // Large normal subgroups first: the usual witness is <F> itself.
        let mut candidates: Vec<Elem> = (0..size).collect();
        candidates.sort_by_key(|&x| (std::cmp::Reverse(orders[x]), x));
        for x in candidates {
            if seen.contains(x) {
                continue;
            }
            let a = orders[x] as usize;
            let cyclic = self.cyclic_subgroup(x);
            for j in 1..a {
                if gcd(j, a) == 1 {
                    seen.insert(self.pow(x, j as u64));
                }
            }
            if !size.is_multiple_of(a) {
                continue;
            }
            let b = size / a;
            if by_order[b].is_empty() {
                continue;
            }
            if !gens.iter().all(|&s| cyclic.contains(self.conjugate(x, s))) {
                continue;
            }
            let primes = prime_factors(b as u64);
            for &y in &by_order[b] {
                if primes.iter().all(|&p| !cyclic.contains(self.pow(y, b as u64 / p))) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn cyclic_subgroup(&self, x: Elem) -> ElementSet {
        let mut set = FixedBitSet::with_capacity(self.order());
        let mut y = self.identity();
        loop {
            set.insert(y);
            y = self.mul(y, x);
            if y == self.identity() {
                break;
            }
        }
        set
    }

    /// Derived subgroup `[H, H]`.
    pub fn derived_subgroup(&self) -> ElementSet {
        let gens: Vec<Elem> = (0..self.order())
            .flat_map(|x| [self.g(), self.f()].map(|s| self.commutator(x, s)))
            .collect();
        self.generated(&gens)
    }

    /// Pairs `(y, z)` indexed by the value of `[y, z]`.
    pub fn commutator_pairs(&self) -> &[Vec<(Elem, Elem)>] {
        self.commutators.get_or_init(|| {
            let size = self.order();
            let mut table = vec![Vec::new(); size];
            for y in 0..size {
                for z in 0..size {
                    table[self.commutator(y, z)].push((y, z));
                }
            }
            table
        })
    }

    /// `true` for the generalized quaternion groups `Q_{2^a}`, `a >= 3`:
    /// non-cyclic 2-groups with a unique involution.
    pub fn is_generalized_quaternion(&self) -> bool {
        let size = self.order();
        if size < 8 || !size.is_power_of_two() {
            return false;
        }
        let orders = self.orders();
        let involutions = orders.iter().filter(|&&o| o == 2).count();
        involutions == 1 && !orders.iter().any(|&o| o as usize == size)
    }

    /// Images `(F', G')` of the presentation generators of `M(params)` realizing
    /// an isomorphism onto this group, if the two are isomorphic.
    pub fn isomorphism_from(&self, params: GroupParams) -> Option<(Elem, Elem)> {
        if params.order() != self.order() {
            return None;
        }
        let size = self.order();
        let (u, n, r, k) = (params.u as u64, params.n, params.r as u64, params.k as u64);
        let orders = self.orders();
        for fx in (0..size).filter(|&x| orders[x] == n) {
            let fk = self.pow(fx, k);
            let fr = self.pow(fx, r);
            for gx in 0..size {
                if self.conjugate(fx, gx) == fk && self.pow(gx, u) == fr && self.generates(&[fx, gx]) {
                    return Some((fx, gx));
                }
            }
        }
        None
    }

    /// Cheap isomorphism invariant: sorted (element order, class size) multiset.
    pub fn fingerprint(&self) -> Vec<(u32, usize, usize)> {
        let t = self.class_table();
        let mut counts: std::collections::BTreeMap<(u32, usize), usize> = Default::default();
        for c in &t.members {
            *counts.entry((self.element_order(c[0]), c.len())).or_default() += 1;
        }
        counts.into_iter().map(|((o, s), c)| (o, s, c)).collect()
    }
}
