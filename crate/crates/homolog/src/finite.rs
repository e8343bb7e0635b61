//! Finite carriers: pointed sets, groups as Cayley tables, subgroups, lattices.
//!
//! Groups are written additively (element 0 is the identity) even when
//! non-abelian. Subgroups and quotient elements are kept in canonical sorted /
//! least-representative form so structural equality is semantic equality.

use serde::{Deserialize, Serialize};

use crate::HomologError;

/// A pointed set with carrier `0..size` and basepoint 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointedSet {
    pub size: usize,
}

impl PointedSet {
    pub fn new(size: usize) -> Result<Self, HomologError> {
        if size == 0 {
            return Err(HomologError::Invalid("pointed set must be nonempty".into()));
        }
        Ok(PointedSet { size })
    }
}

/// A finite group given by its Cayley table: `table[a][b] = a + b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinGroup {
    pub size: usize,
    pub table: Vec<Vec<usize>>,
}

impl FinGroup {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, HomologError> {
        let size = table.len();
        if size == 0 {
            return Err(HomologError::Invalid("group must be nonempty".into()));
        }
        for row in &table {
            if row.len() != size || row.iter().any(|&x| x >= size) {
                return Err(HomologError::Invalid("malformed Cayley table".into()));
            }
        }
        for a in 0..size {
            if table[0][a] != a || table[a][0] != a {
                return Err(HomologError::Invalid("0 is not a two-sided identity".into()));
            }
        }
        for a in 0..size {
            if !(0..size).any(|b| table[a][b] == 0 && table[b][a] == 0) {
                return Err(HomologError::Invalid(format!("element {a} has no inverse")));
            }
        }
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(HomologError::Invalid(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(FinGroup { size, table })
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.size).find(|&b| self.table[a][b] == 0).expect("valid group")
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.add(a, b) == self.add(b, a)))
    }

    pub fn trivial() -> FinGroup {
        FinGroup { size: 1, table: vec![vec![0]] }
    }

    pub fn cyclic(n: usize) -> FinGroup {
        assert!(n >= 1);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FinGroup { size: n, table }
    }

    pub fn direct_product(g: &FinGroup, h: &FinGroup) -> FinGroup {
        let n = g.size * h.size;
        let idx = |a: usize, b: usize| a * h.size + b;
        let mut table = vec![vec![0; n]; n];
        for a in 0..g.size {
            for b in 0..h.size {
                for c in 0..g.size {
                    for d in 0..h.size {
                        table[idx(a, b)][idx(c, d)] = idx(g.add(a, c), h.add(b, d));
                    }
                }
            }
        }
        FinGroup { size: n, table }
    }

    /// Dihedral group of order 2n: element `i` is rotation r^i for i < n,
    /// reflection s·r^(i-n) for i >= n.
    pub fn dihedral(n: usize) -> FinGroup {
        assert!(n >= 1);
        let size = 2 * n;
        let mut table = vec![vec![0; size]; size];
        // (rot a)(rot b) = rot(a+b); (rot a)(ref b) = ref(b-a); (ref a)(rot b) = ref(a+b);
        // (ref a)(ref b) = rot(b-a)
        for a in 0..size {
            for b in 0..size {
                table[a][b] = match (a < n, b < n) {
                    (true, true) => (a + b) % n,
                    (true, false) => n + (b - n + n - a % n) % n,
                    (false, true) => n + (a - n + b) % n,
                    (false, false) => (b + n - (a - n) % n) % n,
                };
            }
        }
        FinGroup::new(table).expect("dihedral table is a group")
    }

    pub fn symmetric3() -> FinGroup {
        FinGroup::dihedral(3)
    }

    /// Quaternion group {1, i, j, k, -1, -i, -j, -k} of order 8.
    pub fn quaternion8() -> FinGroup {
        // Encode q = (s, u) with sign s in {0,1} and unit u in {1,i,j,k} as 4s+u index,
        // but we want identity at index 0, so order: 1,i,j,k,-1,-i,-j,-k.
        let mul_unit = |a: usize, b: usize| -> (usize, usize) {
            // units 0=1,1=i,2=j,3=k; returns (sign flip, unit)
            match (a, b) {
                (0, x) => (0, x),
                (x, 0) => (0, x),
                (1, 1) => (1, 0),
                (2, 2) => (1, 0),
                (3, 3) => (1, 0),
                (1, 2) => (0, 3),
                (2, 1) => (1, 3),
                (2, 3) => (0, 1),
                (3, 2) => (1, 1),
                (3, 1) => (0, 2),
                (1, 3) => (1, 2),
                _ => unreachable!(),
            }
        };
        let mut table = vec![vec![0; 8]; 8];
        for a in 0..8 {
            for b in 0..8 {
                let (sa, ua) = (a / 4, a % 4);
                let (sb, ub) = (b / 4, b % 4);
                let (sf, u) = mul_unit(ua, ub);
                let s = (sa + sb + sf) % 2;
                table[a][b] = 4 * s + u;
            }
        }
        FinGroup::new(table).expect("quaternion table is a group")
    }

    /// All groups of order <= `max`, up to isomorphism.
    pub fn catalog(max: usize) -> Vec<FinGroup> {
        let mut out = Vec::new();
        let z = FinGroup::cyclic;
        for n in 1..=max.min(8) {
            match n {
                1..=3 | 5 | 7 => out.push(z(n)),
                4 => {
                    out.push(z(4));
                    out.push(FinGroup::direct_product(&z(2), &z(2)));
                }
                6 => {
                    out.push(z(6));
                    out.push(FinGroup::symmetric3());
                }
                8 => {
                    out.push(z(8));
                    out.push(FinGroup::direct_product(&z(2), &z(4)));
                    out.push(FinGroup::direct_product(&z(2), &FinGroup::direct_product(&z(2), &z(2))));
                    out.push(FinGroup::dihedral(4));
                    out.push(FinGroup::quaternion8());
                }
                _ => {}
            }
        }
        out
    }

    /// The opposite group (reversed Cayley table).
    pub fn opposite(&self) -> FinGroup {
        let table = (0..self.size)
            .map(|a| (0..self.size).map(|b| self.table[b][a]).collect())
            .collect();
        FinGroup { size: self.size, table }
    }

    /// Permutation group of `0..n` acting on the right: element = permutation,
    /// composition `p + q` = apply p, then q.
    pub fn symmetric(n: usize) -> (FinGroup, Vec<Vec<usize>>) {
        let mut perms = vec![vec![]; 0];
        let mut cur = (0..n).collect::<Vec<_>>();
        permute_collect(&mut cur, 0, &mut perms);
        perms.sort();
        let size = perms.len();
        let index =
            |p: &Vec<usize>| -> usize { perms.binary_search(p).expect("permutation present") };
        let mut table = vec![vec![0; size]; size];
        for a in 0..size {
            for b in 0..size {
                // right action: (x · (a+b)) = (x·a)·b, so composite sends x to b[a[x]]
                let comp: Vec<usize> = (0..n).map(|x| perms[b][perms[a][x]]).collect();
                table[a][b] = index(&comp);
            }
        }
        (FinGroup { size, table }, perms)
    }

    /// A minimal-ish generating sequence, greedily chosen, with each element
    /// expressed as a sum of generators (indices into the returned list).
    pub fn generators(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let mut gens = Vec::new();
        let mut words: Vec<Option<Vec<usize>>> = vec![None; self.size];
        words[0] = Some(vec![]);
        loop {
            let next = (0..self.size).find(|&x| words[x].is_none());
            let Some(g) = next else { break };
            gens.push(g);
            let gi = gens.len() - 1;
            // close under adding g on the right, iterating to a fixed point
            loop {
                let mut changed = false;
                for x in 0..self.size {
                    if let Some(w) = words[x].clone() {
                        let y = self.add(x, g);
                        if words[y].is_none() {
                            let mut w2 = w;
                            w2.push(gi);
                            words[y] = Some(w2);
                            changed = true;
                        }
                    }
                }
                // also close under sums of already-known elements
                for x in 0..self.size {
                    for y in 0..self.size {
                        if let (Some(wx), Some(wy)) = (words[x].clone(), words[y].clone()) {
                            let z = self.add(x, y);
                            if words[z].is_none() {
                                let mut w = wx;
                                w.extend(wy);
                                words[z] = Some(w);
                                changed = true;
                            }
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        let words = words.into_iter().map(|w| w.expect("closure reached all")).collect();
        (gens, words)
    }

    /// All group homomorphisms self -> other, as element maps.
    pub fn homomorphisms(&self, other: &FinGroup) -> Vec<Vec<usize>> {
        let (gens, words) = self.generators();
        let k = gens.len();
        let mut out = Vec::new();
        let mut images = vec![0usize; k];
        loop {
            // build the candidate map from generator images
            let map: Vec<usize> = words
                .iter()
                .map(|w| w.iter().fold(0, |acc, &gi| other.add(acc, images[gi])))
                .collect();
            let ok = (0..self.size).all(|a| {
                (0..self.size).all(|b| map[self.add(a, b)] == other.add(map[a], map[b]))
            });
            if ok {
                out.push(map);
            }
            // odometer over images
            let mut i = 0;
            loop {
                if i == k {
                    out.sort();
                    out.dedup();
                    return out;
                }
                images[i] += 1;
                if images[i] < other.size {
                    break;
                }
                images[i] = 0;
                i += 1;
            }
        }
    }
}

fn permute_collect(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute_collect(cur, k + 1, out);
        cur.swap(k, i);
    }
}

/// A subgroup given by its sorted member list (canonical form).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    pub members: Vec<usize>,
}

impl Subgroup {
    pub fn trivial() -> Subgroup {
        Subgroup { members: vec![0] }
    }

    pub fn whole(g: &FinGroup) -> Subgroup {
        Subgroup { members: (0..g.size).collect() }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subgroup_of(&self, g: &FinGroup) -> bool {
        if !self.contains(0) || self.members.iter().any(|&x| x >= g.size) {
            return false;
        }
        self.members.iter().all(|&a| {
            self.contains(g.neg(a)) && self.members.iter().all(|&b| self.contains(g.add(a, b)))
        })
    }

    pub fn is_normal_in(&self, g: &FinGroup) -> bool {
        (0..g.size).all(|s| {
            self.members.iter().all(|&x| self.contains(g.add(g.add(s, x), g.neg(s))))
        })
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    /// Relabel the subgroup as a standalone group; returns the group and the
    /// inclusion map (new index -> parent element).
    pub fn as_group(&self, g: &FinGroup) -> (FinGroup, Vec<usize>) {
        let incl = self.members.clone();
        let pos = |x: usize| incl.binary_search(&x).expect("closed subgroup");
        let table = incl
            .iter()
            .map(|&a| incl.iter().map(|&b| pos(g.add(a, b))).collect())
            .collect();
        (FinGroup { size: incl.len(), table }, incl)
    }
}

/// Smallest subgroup of `g` containing `xs` (closure under + and negation).
pub fn span(g: &FinGroup, xs: &[usize]) -> Result<Subgroup, HomologError> {
    if let Some(&x) = xs.iter().find(|&&x| x >= g.size) {
        return Err(HomologError::Invalid(format!("element {x} out of range")));
    }
    let mut members = vec![false; g.size];
    members[0] = true;
    let mut stack: Vec<usize> = vec![0];
    for &x in xs {
        if !members[x] {
            members[x] = true;
            stack.push(x);
        }
    }
    while let Some(a) = stack.pop() {
        let n = g.neg(a);
        if !members[n] {
            members[n] = true;
            stack.push(n);
        }
        for b in 0..g.size {
            if members[b] {
                for c in [g.add(a, b), g.add(b, a)] {
                    if !members[c] {
                        members[c] = true;
                        stack.push(c);
                    }
                }
            }
        }
    }
    Ok(Subgroup { members: (0..g.size).filter(|&x| members[x]).collect() })
}

/// Smallest normal subgroup of `g` containing `h` (closure under conjugation).
pub fn invariant_closure(g: &FinGroup, h: &Subgroup) -> Result<Subgroup, HomologError> {
    if !h.is_subgroup_of(g) {
        return Err(HomologError::Invalid("not a subgroup".into()));
    }
    let mut cur = h.clone();
    loop {
        let mut extra = Vec::new();
        for s in 0..g.size {
            for &x in &cur.members {
                let c = g.add(g.add(s, x), g.neg(s));
                if !cur.contains(c) {
                    extra.push(c);
                }
            }
        }
        if extra.is_empty() {
            return Ok(cur);
        }
        let mut all = cur.members.clone();
        all.extend(extra);
        cur = span(g, &all)?;
    }
}

/// Quotient by a normal subgroup. Cosets are named by their least member,
/// ordered ascending, so the coset of 0 is element 0. Returns the quotient
/// group and the projection table (parent element -> coset index).
pub fn quotient_group(g: &FinGroup, n: &Subgroup) -> Result<(FinGroup, Vec<usize>), HomologError> {
    if !n.is_subgroup_of(g) || !n.is_normal_in(g) {
        return Err(HomologError::Invalid("subgroup is not normal".into()));
    }
    let mut coset_of = vec![usize::MAX; g.size];
    let mut reps = Vec::new();
    for x in 0..g.size {
        if coset_of[x] == usize::MAX {
            let idx = reps.len();
            reps.push(x);
            for &h in &n.members {
                coset_of[g.add(h, x)] = idx; // left coset N + x = right coset x + N (normal)
            }
        }
    }
    let size = reps.len();
    let mut table = vec![vec![0; size]; size];
    for a in 0..size {
        for b in 0..size {
            table[a][b] = coset_of[g.add(reps[a], reps[b])];
        }
    }
    Ok((FinGroup { size, table }, coset_of))
}

/// All subgroups of `g`, in canonical order (by size, then members).
pub fn subgroups(g: &FinGroup) -> Vec<Subgroup> {
    let mut seen = std::collections::BTreeSet::new();
    let mut frontier = vec![Subgroup::trivial()];
    seen.insert(Subgroup::trivial());
    while let Some(h) = frontier.pop() {
        for x in 0..g.size {
            if !h.contains(x) {
                let mut gens = h.members.clone();
                gens.push(x);
                let bigger = span(g, &gens).expect("in range");
                if seen.insert(bigger.clone()) {
                    frontier.push(bigger);
                }
            }
        }
    }
    let mut out: Vec<Subgroup> = seen.into_iter().collect();
    out.sort_by(|a, b| (a.len(), &a.members).cmp(&(b.len(), &b.members)));
    out
}

/// A finite lattice: partial order plus meet/join tables, bottom 0 and top.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinLattice {
    pub size: usize,
    pub leq: Vec<Vec<bool>>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub bottom: usize,
    pub top: usize,
}

/// Outcome of validating lattice tables; `violations` lists the first problem found
/// in each category checked.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

impl FinLattice {
    /// Build a lattice from its order relation, deriving meet/join and bounds.
    pub fn from_leq(leq: Vec<Vec<bool>>) -> Result<FinLattice, HomologError> {
        let size = leq.len();
        if size == 0 || leq.iter().any(|r| r.len() != size) {
            return Err(HomologError::Invalid("malformed order relation".into()));
        }
        for a in 0..size {
            if !leq[a][a] {
                return Err(HomologError::Invalid(format!("not reflexive at {a}")));
            }
            for b in 0..size {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(HomologError::Invalid(format!("not antisymmetric at ({a},{b})")));
                }
                for c in 0..size {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(HomologError::Invalid(format!(
                            "not transitive at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let glb = |a: usize, b: usize| -> Option<usize> {
            let lower: Vec<usize> =
                (0..size).filter(|&x| leq[x][a] && leq[x][b]).collect();
            lower.iter().copied().find(|&m| lower.iter().all(|&y| leq[y][m]))
        };
        let lub = |a: usize, b: usize| -> Option<usize> {
            let upper: Vec<usize> =
                (0..size).filter(|&x| leq[a][x] && leq[b][x]).collect();
            upper.iter().copied().find(|&j| upper.iter().all(|&y| leq[j][y]))
        };
        let mut meet = vec![vec![0; size]; size];
        let mut join = vec![vec![0; size]; size];
        for a in 0..size {
            for b in 0..size {
                meet[a][b] = glb(a, b).ok_or_else(|| {
                    HomologError::Invalid(format!("no meet for ({a},{b})"))
                })?;
                join[a][b] = lub(a, b).ok_or_else(|| {
                    HomologError::Invalid(format!("no join for ({a},{b})"))
                })?;
            }
        }
        let bottom = (0..size)
            .find(|&x| (0..size).all(|y| leq[x][y]))
            .ok_or_else(|| HomologError::Invalid("no bottom".into()))?;
        let top = (0..size)
            .find(|&x| (0..size).all(|y| leq[y][x]))
            .ok_or_else(|| HomologError::Invalid("no top".into()))?;
        Ok(FinLattice { size, leq, meet, join, bottom, top })
    }

    pub fn chain(n: usize) -> FinLattice {
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        FinLattice::from_leq(leq).expect("chain is a lattice")
    }

    pub fn point() -> FinLattice {
        FinLattice::chain(1)
    }

    /// Cartesian product, elements indexed lexicographically by (x, y).
    pub fn product(x: &FinLattice, y: &FinLattice) -> FinLattice {
        let n = x.size * y.size;
        let idx = |a: usize, b: usize| a * y.size + b;
        let mut leq = vec![vec![false; n]; n];
        for a in 0..x.size {
            for b in 0..y.size {
                for c in 0..x.size {
                    for d in 0..y.size {
                        leq[idx(a, b)][idx(c, d)] = x.leq[a][c] && y.leq[b][d];
                    }
                }
            }
        }
        FinLattice::from_leq(leq).expect("product of lattices is a lattice")
    }

    pub fn boolean2() -> FinLattice {
        FinLattice::product(&FinLattice::chain(2), &FinLattice::chain(2))
    }

    /// The pentagon N5: 0 < a < b < 1 and 0 < c < 1, with a,b incomparable to c.
    pub fn pentagon() -> FinLattice {
        // elements 0=bot, 1=a, 2=b, 3=c, 4=top
        let pairs: &[(usize, usize)] = &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (2, 4), (3, 4)];
        let mut leq = vec![vec![false; 5]; 5];
        for i in 0..5 {
            leq[i][i] = true;
        }
        for &(a, b) in pairs {
            leq[a][b] = true;
        }
        // transitive closure
        for k in 0..5 {
            for a in 0..5 {
                for b in 0..5 {
                    if leq[a][k] && leq[k][b] {
                        leq[a][b] = true;
                    }
                }
            }
        }
        FinLattice::from_leq(leq).expect("pentagon is a lattice")
    }

    /// The diamond M3: bottom, three incomparable atoms, top.
    pub fn diamond3() -> FinLattice {
        let mut leq = vec![vec![false; 5]; 5];
        for i in 0..5 {
            leq[i][i] = true;
            leq[0][i] = true;
            leq[i][4] = true;
        }
        FinLattice::from_leq(leq).expect("diamond is a lattice")
    }

    /// The down-set of `a` as a lattice; returns it with the element map
    /// (new index -> original element).
    pub fn down_set(&self, a: usize) -> (FinLattice, Vec<usize>) {
        let elems: Vec<usize> = (0..self.size).filter(|&x| self.leq[x][a]).collect();
        let leq = elems
            .iter()
            .map(|&x| elems.iter().map(|&y| self.leq[x][y]).collect())
            .collect();
        (FinLattice::from_leq(leq).expect("down-set of a lattice is a lattice"), elems)
    }

    /// The up-set of `a` as a lattice, with element map.
    pub fn up_set(&self, a: usize) -> (FinLattice, Vec<usize>) {
        let elems: Vec<usize> = (0..self.size).filter(|&x| self.leq[a][x]).collect();
        let leq = elems
            .iter()
            .map(|&x| elems.iter().map(|&y| self.leq[x][y]).collect())
            .collect();
        (FinLattice::from_leq(leq).expect("up-set of a lattice is a lattice"), elems)
    }

    pub fn is_modular(&self) -> bool {
        for x in 0..self.size {
            for y in 0..self.size {
                for z in 0..self.size {
                    if self.leq[x][z]
                        && self.join[x][self.meet[y][z]] != self.meet[self.join[x][y]][z]
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Validate the full table set of a lattice, reporting violations instead of erroring.
pub fn check_lattice(l: &FinLattice) -> LatticeReport {
    let mut violations = Vec::new();
    let n = l.size;
    'order: for a in 0..n {
        if !l.leq[a][a] {
            violations.push(format!("leq not reflexive at {a}"));
            break;
        }
        for b in 0..n {
            if a != b && l.leq[a][b] && l.leq[b][a] {
                violations.push(format!("leq not antisymmetric at ({a},{b})"));
                break 'order;
            }
            for c in 0..n {
                if l.leq[a][b] && l.leq[b][c] && !l.leq[a][c] {
                    violations.push(format!("leq not transitive at ({a},{b},{c})"));
                    break 'order;
                }
            }
        }
    }
    'meet: for a in 0..n {
        for b in 0..n {
            let m = l.meet[a][b];
            if !(l.leq[m][a] && l.leq[m][b]) {
                violations.push(format!("meet({a},{b}) is not a lower bound"));
                break 'meet;
            }
            if (0..n).any(|x| l.leq[x][a] && l.leq[x][b] && !l.leq[x][m]) {
                violations.push(format!("meet({a},{b}) is not the greatest lower bound"));
                break 'meet;
            }
        }
    }
    'join: for a in 0..n {
        for b in 0..n {
            let j = l.join[a][b];
            if !(l.leq[a][j] && l.leq[b][j]) {
                violations.push(format!("join({a},{b}) is not an upper bound"));
                break 'join;
            }
            if (0..n).any(|x| l.leq[a][x] && l.leq[b][x] && !l.leq[j][x]) {
                violations.push(format!("join({a},{b}) is not the least upper bound"));
                break 'join;
            }
        }
    }
    if (0..n).any(|x| !l.leq[l.bottom][x]) {
        violations.push("bottom is not below every element".into());
    }
    if (0..n).any(|x| !l.leq[x][l.top]) {
        violations.push("top is not above every element".into());
    }
    LatticeReport { valid: violations.is_empty(), violations }
}

/// The subgroup lattice of a finite group, with subgroup labels.
pub fn subgroup_lattice(g: &FinGroup) -> (FinLattice, Vec<Subgroup>) {
    let subs = subgroups(g);
    let leq = subs
        .iter()
        .map(|a| subs.iter().map(|b| a.is_subset_of(b)).collect())
        .collect();
    (FinLattice::from_leq(leq).expect("subgroup lattice"), subs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_is_group() {
        for n in 1..=8 {
            FinGroup::new(FinGroup::cyclic(n).table).unwrap();
        }
    }

    #[test]
    fn catalog_sizes() {
        let cat = FinGroup::catalog(8);
        assert_eq!(cat.len(), 14);
        for g in &cat {
            FinGroup::new(g.table.clone()).unwrap();
        }
        assert!(FinGroup::quaternion8().size == 8);
        assert!(!FinGroup::dihedral(4).is_abelian());
        assert!(!FinGroup::quaternion8().is_abelian());
    }

    #[test]
    fn span_examples() {
        let z4 = FinGroup::cyclic(4);
        assert_eq!(span(&z4, &[2]).unwrap().members, vec![0, 2]);
        assert_eq!(span(&z4, &[]).unwrap().members, vec![0]);
        // S3: a transposition spans a 2-element subgroup (brute-force closure oracle)
        let s3 = FinGroup::symmetric3();
        let transposition = (1..6).find(|&x| s3.add(x, x) == 0 && x >= 3).unwrap();
        let h = span(&s3, &[transposition]).unwrap();
        assert_eq!(h.len(), 2);
        // oracle: closure by repeated table application
        let mut set = std::collections::BTreeSet::from([0, transposition]);
        loop {
            let cur: Vec<usize> = set.iter().copied().collect();
            let before = set.len();
            for &a in &cur {
                for &b in &cur {
                    set.insert(s3.add(a, b));
                }
                set.insert(s3.neg(a));
            }
            if set.len() == before {
                break;
            }
        }
        assert_eq!(h.members, set.into_iter().collect::<Vec<_>>());
        // span of all elements is the whole group, for every catalog group
        for g in FinGroup::catalog(8) {
            let all: Vec<usize> = (0..g.size).collect();
            assert_eq!(span(&g, &all).unwrap().len(), g.size);
        }
    }

    #[test]
    fn invariant_closure_examples() {
        let z4 = FinGroup::cyclic(4);
        let h = span(&z4, &[2]).unwrap();
        assert_eq!(invariant_closure(&z4, &h).unwrap(), h);
        let s3 = FinGroup::symmetric3();
        let transposition = (3..6).find(|&x| s3.add(x, x) == 0).unwrap();
        let h = span(&s3, &[transposition]).unwrap();
        // conjugation closure oracle: closure of all conjugates
        let closure = invariant_closure(&s3, &h).unwrap();
        assert_eq!(closure.len(), 6);
        for g in FinGroup::catalog(6) {
            assert_eq!(
                invariant_closure(&g, &Subgroup::trivial()).unwrap(),
                Subgroup::trivial()
            );
            // idempotent and monotone
            for h in subgroups(&g) {
                let c = invariant_closure(&g, &h).unwrap();
                assert_eq!(invariant_closure(&g, &c).unwrap(), c);
                assert!(h.is_subset_of(&c));
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let z4 = FinGroup::cyclic(4);
        let n = span(&z4, &[2]).unwrap();
        let (q, proj) = quotient_group(&z4, &n).unwrap();
        assert_eq!(q.size, 2);
        assert_eq!(proj, vec![0, 1, 0, 1]);
        let (q, proj) = quotient_group(&z4, &Subgroup::trivial()).unwrap();
        assert_eq!(q.size, 4);
        assert_eq!(proj, vec![0, 1, 2, 3]);
        let (q, _) = quotient_group(&z4, &Subgroup::whole(&z4)).unwrap();
        assert_eq!(q.size, 1);
    }

    #[test]
    fn lagrange_exhaustive() {
        for g in FinGroup::catalog(8) {
            for n in subgroups(&g) {
                if n.is_normal_in(&g) {
                    let (q, _) = quotient_group(&g, &n).unwrap();
                    assert_eq!(q.size * n.len(), g.size);
                }
            }
        }
    }

    #[test]
    fn lattice_checks() {
        assert!(check_lattice(&FinLattice::chain(3)).valid);
        assert!(check_lattice(&FinLattice::boolean2()).valid);
        let mut bad = FinLattice::boolean2();
        bad.meet[1][2] = 3; // top is not a lower bound of two atoms
        let rep = check_lattice(&bad);
        assert!(!rep.valid);
        assert!(rep.violations[0].contains("lower bound"));
    }

    #[test]
    fn modularity() {
        assert!(!FinLattice::pentagon().is_modular());
        assert!(FinLattice::boolean2().is_modular());
        assert!(FinLattice::diamond3().is_modular());
        let z2z2 = FinGroup::direct_product(&FinGroup::cyclic(2), &FinGroup::cyclic(2));
        let (l, _) = subgroup_lattice(&z2z2);
        assert!(l.is_modular());
        let (l, _) = subgroup_lattice(&FinGroup::symmetric3());
        assert!(check_lattice(&l).valid);
    }

    #[test]
    fn hom_enumeration() {
        let z4 = FinGroup::cyclic(4);
        let z2 = FinGroup::cyclic(2);
        assert_eq!(z4.homomorphisms(&z2).len(), 2);
        assert_eq!(z2.homomorphisms(&z4).len(), 2);
        let s3 = FinGroup::symmetric3();
        // homs S3 -> Z2: sign map and zero
        assert_eq!(s3.homomorphisms(&z2).len(), 2);
        // endomorphisms of S3: 1 zero + 3 sign-like (onto each order-2 subgroup) + 6 inner-ish autos
        assert_eq!(s3.homomorphisms(&s3).len(), 10);
    }

    #[test]
    fn symmetric_group_table() {
        let (s3, perms) = FinGroup::symmetric(3);
        assert_eq!(s3.size, 6);
        assert_eq!(perms.len(), 6);
        FinGroup::new(s3.table).unwrap();
    }
}
