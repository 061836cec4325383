//! Finite group kernel: construction, Cayley-table validation, and bitset
//! set algebra. Everything else in the crate operates on [`Group`] and
//! [`GroupSet`].
//!
//! Conventions fixed here and relied on throughout:
//! - the identity always has index 0 (tables are re-indexed on load);
//! - elements are plain indices `0..order`;
//! - sets order canonically by `(cardinality, sorted element list)`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::bits::Bits;
use crate::error::{CayleyViolation, Error, Result};

/// Default cap on the order of constructible groups.
pub const DEFAULT_ORDER_CAP: usize = 5040;

/// How a group was constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    /// (Z_p)^d with componentwise addition; index digits are base-p,
    /// least significant digit = first coordinate.
    Vector { p: usize, d: usize },
    /// Dihedral group of order 2n: indices 0..n are rotations r^i,
    /// n..2n are reflections s*r^i.
    Dihedral(usize),
    /// Symmetric group on m letters, permutations in lexicographic order.
    Symmetric(usize),
    DirectProduct(Vec<GroupKind>),
    Table,
}

/// A finite group given by element indices and a total multiplication law.
/// Immutable after construction.
pub struct Group {
    order: usize,
    kind: GroupKind,
    mul: Vec<u32>,
    inv: Vec<u32>,
    abelian: bool,
    /// Fingerprint of the multiplication table; two groups with equal
    /// (order, fingerprint) are treated as the same group for set algebra.
    fingerprint: u64,
}

impl Group {
    /// Parses a descriptor string: `cyclic:n`, `vector:p,d`, `dihedral:n`,
    /// `symmetric:m`, `product:spec+spec`, `table:path`.
    pub fn parse(desc: &str) -> Result<Arc<Group>> {
        Self::parse_with_cap(desc, DEFAULT_ORDER_CAP)
    }

    pub fn parse_with_cap(desc: &str, cap: usize) -> Result<Arc<Group>> {
        let kind = parse_kind(desc)?;
        if let GroupKind::Table = kind {
            let path = desc.strip_prefix("table:").unwrap();
            let text = std::fs::read_to_string(path)?;
            return Self::from_table_text(&text, cap);
        }
        Self::build(kind, cap)
    }

    /// Builds a group of a structured kind.
    pub fn build(kind: GroupKind, cap: usize) -> Result<Arc<Group>> {
        let order = kind_order(&kind)?;
        if order > cap {
            return Err(Error::OrderCapExceeded { order, cap });
        }
        let mul = build_table(&kind, order)?;
        Ok(Arc::new(Self::finish(order, kind, mul)))
    }

    /// Builds a group from a raw Cayley table, validating the axioms and
    /// re-indexing so the identity is element 0.
    pub fn from_table(table: Vec<Vec<usize>>, cap: usize) -> Result<Arc<Group>> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedSpec("empty table".into()));
        }
        if n > cap {
            return Err(Error::OrderCapExceeded { order: n, cap });
        }
        if let Err(v) = validate_cayley_table(&table) {
            return Err(Error::NotAGroup(v));
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .expect("validated table has an identity");
        // Relabel so the identity sits at index 0.
        let perm = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[perm(a) * n + perm(b)] = perm(table[a][b]) as u32;
            }
        }
        Ok(Arc::new(Self::finish(n, GroupKind::Table, mul)))
    }

    /// Parses the Cayley table file format: line 1 = n, then n rows of n
    /// space-separated indices.
    pub fn from_table_text(text: &str, cap: usize) -> Result<Arc<Group>> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::MalformedSpec("empty table file".into()))?
            .trim()
            .parse()
            .map_err(|_| Error::MalformedSpec("bad order line".into()))?;
        let mut table = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::MalformedSpec("missing table row".into()))?;
            let row: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::MalformedSpec("bad table entry".into()))?;
            if row.len() != n {
                return Err(Error::MalformedSpec("row length mismatch".into()));
            }
            table.push(row);
        }
        Self::from_table(table, cap)
    }

    fn finish(order: usize, kind: GroupKind, mul: Vec<u32>) -> Group {
        let mut inv = vec![0u32; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| mul[a * order + b] == 0)
                .expect("group element has an inverse");
            inv[a] = b as u32;
        }
        let abelian =
            (0..order).all(|a| (a..order).all(|b| mul[a * order + b] == mul[b * order + a]));
        // FNV-1a over the table.
        let mut h: u64 = 0xcbf29ce484222325;
        for &v in &mul {
            h ^= v as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        Group {
            order,
            kind,
            mul,
            inv,
            abelian,
            fingerprint: h,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    /// Multiplicative order of a single element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Exponent of the group (lcm of element orders).
    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1usize, |acc, a| {
            let o = self.element_order(a);
            acc / gcd(acc, o) * o
        })
    }

    fn same_as(&self, other: &Group) -> bool {
        std::ptr::eq(self, other)
            || (self.order == other.order && self.fingerprint == other.fingerprint)
    }
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Group({:?}, order {})", self.kind, self.order)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn parse_kind(desc: &str) -> Result<GroupKind> {
    let bad = || Error::MalformedSpec(desc.to_string());
    let (head, rest) = desc.split_once(':').ok_or_else(bad)?;
    match head {
        "cyclic" => {
            let n: usize = rest.parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            Ok(GroupKind::Cyclic(n))
        }
        "vector" => {
            let (p, d) = rest.split_once(',').ok_or_else(bad)?;
            let p: usize = p.parse().map_err(|_| bad())?;
            let d: usize = d.parse().map_err(|_| bad())?;
            if p < 2 || d == 0 {
                return Err(bad());
            }
            Ok(GroupKind::Vector { p, d })
        }
        "dihedral" => {
            let n: usize = rest.parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            Ok(GroupKind::Dihedral(n))
        }
        "symmetric" => {
            let m: usize = rest.parse().map_err(|_| bad())?;
            if m == 0 || m > 7 {
                return Err(bad());
            }
            Ok(GroupKind::Symmetric(m))
        }
        "product" => {
            let parts: Vec<GroupKind> = rest
                .split('+')
                .map(parse_kind)
                .collect::<Result<Vec<_>>>()?;
            if parts.len() < 2 {
                return Err(bad());
            }
            if parts.iter().any(|k| matches!(k, GroupKind::Table)) {
                return Err(bad());
            }
            Ok(GroupKind::DirectProduct(parts))
        }
        "table" => Ok(GroupKind::Table),
        _ => Err(bad()),
    }
}

fn kind_order(kind: &GroupKind) -> Result<usize> {
    Ok(match kind {
        GroupKind::Cyclic(n) => *n,
        GroupKind::Vector { p, d } => {
            let mut o: usize = 1;
            for _ in 0..*d {
                o = o
                    .checked_mul(*p)
                    .ok_or_else(|| Error::MalformedSpec("vector order overflow".into()))?;
            }
            o
        }
        GroupKind::Dihedral(n) => 2 * n,
        GroupKind::Symmetric(m) => (1..=*m).product(),
        GroupKind::DirectProduct(parts) => {
            let mut o: usize = 1;
            for k in parts {
                o = o
                    .checked_mul(kind_order(k)?)
                    .ok_or_else(|| Error::MalformedSpec("product order overflow".into()))?;
            }
            o
        }
        GroupKind::Table => unreachable!("table kind has no intrinsic order"),
    })
}

fn build_table(kind: &GroupKind, order: usize) -> Result<Vec<u32>> {
    let mut mul = vec![0u32; order * order];
    match kind {
        GroupKind::Cyclic(n) => {
            for a in 0..*n {
                for b in 0..*n {
                    mul[a * order + b] = ((a + b) % n) as u32;
                }
            }
        }
        GroupKind::Vector { p, d } => {
            for a in 0..order {
                for b in 0..order {
                    let (mut x, mut y, mut pow, mut s) = (a, b, 1usize, 0usize);
                    for _ in 0..*d {
                        s += (x % p + y % p) % p * pow;
                        x /= p;
                        y /= p;
                        pow *= p;
                    }
                    mul[a * order + b] = s as u32;
                }
            }
        }
        GroupKind::Dihedral(n) => {
            let n = *n;
            // s*r^i encoded as n+i, with s*r*s = r^-1.
            for a in 0..order {
                for b in 0..order {
                    let (ra, fa) = (a % n, a >= n);
                    let (rb, fb) = (b % n, b >= n);
                    let r = if fb { (n + rb - ra) % n } else { (ra + rb) % n };
                    let f = fa ^ fb;
                    mul[a * order + b] = (if f { n + r } else { r }) as u32;
                }
            }
        }
        GroupKind::Symmetric(m) => {
            let perms = permutations_lex(*m);
            let index: HashMap<&[u8], usize> = perms
                .iter()
                .enumerate()
                .map(|(i, p)| (p.as_slice(), i))
                .collect();
            for (a, pa) in perms.iter().enumerate() {
                for (b, pb) in perms.iter().enumerate() {
                    // (pa * pb)(i) = pa(pb(i)): right factor acts first.
                    let comp: Vec<u8> = (0..*m).map(|i| pa[pb[i] as usize]).collect();
                    mul[a * order + b] = index[comp.as_slice()] as u32;
                }
            }
        }
        GroupKind::DirectProduct(parts) => {
            let factors: Vec<(usize, Vec<u32>)> = parts
                .iter()
                .map(|k| {
                    let o = kind_order(k)?;
                    Ok((o, build_table(k, o)?))
                })
                .collect::<Result<Vec<_>>>()?;
            for a in 0..order {
                for b in 0..order {
                    let (mut x, mut y, mut pow, mut s) = (a, b, 1usize, 0usize);
                    for (o, t) in &factors {
                        s += t[(x % o) * o + y % o] as usize * pow;
                        x /= o;
                        y /= o;
                        pow *= o;
                    }
                    mul[a * order + b] = s as u32;
                }
            }
        }
        GroupKind::Table => unreachable!(),
    }
    Ok(mul)
}

fn permutations_lex(m: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..m as u8).collect();
    loop {
        out.push(cur.clone());
        // next_permutation
        let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..m).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Checks whether an n-by-n table defines a group. Total: returns the first
/// failing axiom with a witness instead of erroring.
///
/// Associativity is checked exhaustively for n <= 512 and on a deterministic
/// sample of 100_000 triples above that.
pub fn validate_cayley_table(table: &[Vec<usize>]) -> std::result::Result<(), CayleyViolation> {
    let n = table.len();
    for (r, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(CayleyViolation::EntryOutOfRange {
                row: r,
                col: row.len().min(n),
                value: 0,
            });
        }
        for (c, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(CayleyViolation::EntryOutOfRange {
                    row: r,
                    col: c,
                    value: v,
                });
            }
        }
    }
    let e = match (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)) {
        Some(e) => e,
        None => return Err(CayleyViolation::NoIdentity),
    };
    for (x, row) in table.iter().enumerate() {
        if !(0..n).any(|y| row[y] == e && table[y][x] == e) {
            return Err(CayleyViolation::NoInverse { element: x });
        }
    }
    if n <= 512 {
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(CayleyViolation::NotAssociative { a, b, c });
                    }
                }
            }
        }
    } else {
        // splitmix64 stream, fixed seed: reproducible sampling.
        let mut state: u64 = 0x9e3779b97f4a7c15;
        let mut next = move || {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            (z ^ (z >> 31)) as usize
        };
        for _ in 0..100_000 {
            let (a, b, c) = (next() % n, next() % n, next() % n);
            if table[table[a][b]][c] != table[a][table[b][c]] {
                return Err(CayleyViolation::NotAssociative { a, b, c });
            }
        }
    }
    Ok(())
}

/// Which side a translate acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A subset of a group as a fixed-width bit vector with cached cardinality.
/// Immutable after construction; all operations are pure.
#[derive(Clone)]
pub struct GroupSet {
    group: Arc<Group>,
    bits: Bits,
    card: usize,
}

impl PartialEq for GroupSet {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_as(&other.group) && self.bits == other.bits
    }
}
impl Eq for GroupSet {}

impl std::fmt::Debug for GroupSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupSet{:?}", self.bits)
    }
}

impl GroupSet {
    pub fn empty(group: &Arc<Group>) -> GroupSet {
        GroupSet {
            group: Arc::clone(group),
            bits: Bits::new(group.order()),
            card: 0,
        }
    }

    pub fn full(group: &Arc<Group>) -> GroupSet {
        GroupSet::empty(group).complement()
    }

    pub fn singleton(group: &Arc<Group>, x: usize) -> Result<GroupSet> {
        GroupSet::from_indices(group, &[x])
    }

    pub fn from_indices(group: &Arc<Group>, idx: &[usize]) -> Result<GroupSet> {
        let mut bits = Bits::new(group.order());
        for &i in idx {
            if i >= group.order() {
                return Err(Error::InvalidParam(format!(
                    "element {i} out of range for group of order {}",
                    group.order()
                )));
            }
            bits.set(i);
        }
        let card = bits.count();
        Ok(GroupSet {
            group: Arc::clone(group),
            bits,
            card,
        })
    }

    pub(crate) fn from_bits(group: &Arc<Group>, bits: Bits) -> GroupSet {
        let card = bits.count();
        GroupSet {
            group: Arc::clone(group),
            bits,
            card,
        }
    }

    /// Parses a set literal: comma-separated indices, e.g. "0,1,6,7".
    /// An empty string denotes the empty set.
    pub fn parse_literal(group: &Arc<Group>, text: &str) -> Result<GroupSet> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(GroupSet::empty(group));
        }
        let idx: Vec<usize> = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::MalformedSpec(format!("bad set literal: {text}")))
            })
            .collect::<Result<_>>()?;
        GroupSet::from_indices(group, &idx)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn card(&self) -> usize {
        self.card
    }

    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    pub fn elements(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub(crate) fn bits(&self) -> &Bits {
        &self.bits
    }

    fn check_same(&self, other: &GroupSet) -> Result<()> {
        if self.group.same_as(&other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn union(&self, other: &GroupSet) -> Result<GroupSet> {
        self.check_same(other)?;
        Ok(GroupSet::from_bits(&self.group, self.bits.union(&other.bits)))
    }

    pub fn intersect(&self, other: &GroupSet) -> Result<GroupSet> {
        self.check_same(other)?;
        Ok(GroupSet::from_bits(
            &self.group,
            self.bits.intersect(&other.bits),
        ))
    }

    pub fn symdiff(&self, other: &GroupSet) -> Result<GroupSet> {
        self.check_same(other)?;
        Ok(GroupSet::from_bits(
            &self.group,
            self.bits.symdiff(&other.bits),
        ))
    }

    pub fn difference(&self, other: &GroupSet) -> Result<GroupSet> {
        self.check_same(other)?;
        Ok(GroupSet::from_bits(
            &self.group,
            self.bits.difference(&other.bits),
        ))
    }

    pub fn complement(&self) -> GroupSet {
        GroupSet::from_bits(&self.group, self.bits.complement())
    }

    pub fn is_subset_of(&self, other: &GroupSet) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.bits.subset_of(&other.bits))
    }

    pub fn intersects(&self, other: &GroupSet) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.bits.intersects(&other.bits))
    }

    /// {x*y : x in self, y in other}.
    pub fn product(&self, other: &GroupSet) -> Result<GroupSet> {
        self.check_same(other)?;
        let g = &self.group;
        let mut bits = Bits::new(g.order());
        for x in self.iter() {
            for y in other.iter() {
                bits.set(g.mul(x, y));
            }
        }
        Ok(GroupSet::from_bits(g, bits))
    }

    /// {x^-1 : x in self}.
    pub fn inverse(&self) -> GroupSet {
        let g = &self.group;
        let mut bits = Bits::new(g.order());
        for x in self.iter() {
            bits.set(g.inv(x));
        }
        GroupSet::from_bits(g, bits)
    }

    /// g*X (left) or X*g (right).
    pub fn translate(&self, t: usize, side: Side) -> GroupSet {
        let g = &self.group;
        let mut bits = Bits::new(g.order());
        for x in self.iter() {
            bits.set(match side {
                Side::Left => g.mul(t, x),
                Side::Right => g.mul(x, t),
            });
        }
        GroupSet::from_bits(g, bits)
    }

    /// Identity in, closed under multiplication and inverses.
    pub fn is_subgroup(&self) -> bool {
        if !self.contains(0) {
            return false;
        }
        let g = &self.group;
        for x in self.iter() {
            if !self.contains(g.inv(x)) {
                return false;
            }
            for y in self.iter() {
                if !self.contains(g.mul(x, y)) {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest subgroup containing this (nonempty) set, by closure iteration.
    pub fn generated_subgroup(&self) -> Result<GroupSet> {
        if self.is_empty() {
            return Err(Error::EmptySet("generated_subgroup"));
        }
        let g = &self.group;
        let gens: Vec<usize> = self
            .iter()
            .flat_map(|x| [x, g.inv(x)])
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        let mut bits = Bits::new(g.order());
        bits.set(0);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &s in &gens {
                let y = g.mul(x, s);
                if !bits.get(y) {
                    bits.set(y);
                    queue.push_back(y);
                }
            }
        }
        Ok(GroupSet::from_bits(g, bits))
    }

    /// Canonical sort key: (card, sorted element list).
    pub fn canonical_key(&self) -> (usize, Vec<usize>) {
        (self.card, self.elements())
    }
}

/// Default cap on the number of subgroups enumerate_subgroups will produce.
pub const DEFAULT_SUBGROUP_BUDGET: usize = 20_000;

/// Complete list of subgroups of G, each exactly once, ascending by
/// (card, element list).
///
/// All cyclic subgroups are generated first, then the collection is closed
/// under pairwise join to a fixpoint. Every subgroup is the join of its
/// cyclic subgroups, so this is exhaustive.
pub fn enumerate_subgroups(group: &Arc<Group>, budget: usize) -> Result<Vec<GroupSet>> {
    let mut seen: HashSet<Bits> = HashSet::new();
    let mut subs: Vec<GroupSet> = Vec::new();
    for x in 0..group.order() {
        let h = GroupSet::singleton(group, x)?.generated_subgroup()?;
        if seen.insert(h.bits().clone()) {
            subs.push(h);
        }
    }
    let mut frontier: Vec<usize> = (0..subs.len()).collect();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        for &i in &frontier {
            for j in 0..subs.len() {
                if i == j {
                    continue;
                }
                let join = subs[i].union(&subs[j])?.generated_subgroup()?;
                if !seen.contains(join.bits()) {
                    seen.insert(join.bits().clone());
                    subs.push(join);
                    fresh.push(subs.len() - 1);
                    if subs.len() > budget {
                        return Err(Error::BudgetExceeded {
                            what: "subgroup enumeration",
                            limit: budget,
                        });
                    }
                }
            }
        }
        frontier = fresh;
    }
    subs.sort_by_key(|s| s.canonical_key());
    Ok(subs)
}
