//! Pairs of groups (S, S₀) with S₀ ≤ S, and homomorphisms respecting the
//! distinguished subgroups; a map is null when its image lies inside the
//! distinguished subgroup of the codomain. Kernels are preimages (with the
//! same distinguished part), cokernels enlarge the distinguished subgroup to
//! the span of T₀ ∪ f(S).
//!
//! Also here: the category of plain groups with the ideal of zero morphisms
//! (where cokernels must quotient by the invariant closure of the image, and
//! ex2 fails), and the embedding I / retraction K between the two.

use serde::{Deserialize, Serialize};

use crate::cat::Semiexact;
use crate::finite::{
    invariant_closure, quotient_group, span, subgroups, FinGroup, Subgroup,
};
use crate::HomologError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupPair {
    pub group: FinGroup,
    pub sub: Subgroup,
}

impl GroupPair {
    pub fn new(group: FinGroup, sub: Subgroup) -> Result<GroupPair, HomologError> {
        if !sub.is_subgroup_of(&group) {
            return Err(HomologError::Invalid("distinguished part is not a subgroup".into()));
        }
        Ok(GroupPair { group, sub })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairMap {
    pub dom: GroupPair,
    pub cod: GroupPair,
    pub map: Vec<usize>,
}

impl PairMap {
    pub fn new(dom: GroupPair, cod: GroupPair, map: Vec<usize>) -> Result<PairMap, HomologError> {
        if map.len() != dom.group.size || map.iter().any(|&y| y >= cod.group.size) {
            return Err(HomologError::Invalid("map table has wrong shape".into()));
        }
        for a in 0..dom.group.size {
            for b in 0..dom.group.size {
                if map[dom.group.add(a, b)] != cod.group.add(map[a], map[b]) {
                    return Err(HomologError::Invalid("not a homomorphism".into()));
                }
            }
        }
        if dom.sub.members.iter().any(|&x| !cod.sub.contains(map[x])) {
            return Err(HomologError::Invalid(
                "map does not send the distinguished subgroup into the distinguished subgroup"
                    .into(),
            ));
        }
        Ok(PairMap { dom, cod, map })
    }
}

/// The canonical inclusion of the intermediate subgroup `m` (S₀ ≤ m ≤ S) as a
/// normal subobject of `a`: the subgroup is relabelled as a standalone group
/// with its elements in ascending order.
pub fn pair_inclusion(a: &GroupPair, m: &Subgroup) -> PairMap {
    let (grp, incl) = m.as_group(&a.group);
    let sub = Subgroup {
        members: a
            .sub
            .members
            .iter()
            .map(|x| incl.binary_search(x).expect("distinguished part inside subobject"))
            .collect(),
    };
    PairMap { dom: GroupPair { group: grp, sub }, cod: a.clone(), map: incl }
}

#[derive(Clone, Debug)]
pub struct Gp2 {
    pub max_group: usize,
}

impl Semiexact for Gp2 {
    type Obj = GroupPair;
    type Mor = PairMap;

    fn name(&self) -> &'static str {
        "gp2"
    }
    fn dom(&self, f: &PairMap) -> GroupPair {
        f.dom.clone()
    }
    fn cod(&self, f: &PairMap) -> GroupPair {
        f.cod.clone()
    }
    fn identity(&self, a: &GroupPair) -> PairMap {
        PairMap { dom: a.clone(), cod: a.clone(), map: (0..a.group.size).collect() }
    }
    fn compose(&self, g: &PairMap, f: &PairMap) -> PairMap {
        debug_assert_eq!(f.cod, g.dom);
        PairMap {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            map: f.map.iter().map(|&x| g.map[x]).collect(),
        }
    }
    fn is_null(&self, f: &PairMap) -> bool {
        f.map.iter().all(|&y| f.cod.sub.contains(y))
    }
    fn kernel(&self, f: &PairMap) -> PairMap {
        let members: Vec<usize> =
            (0..f.dom.group.size).filter(|&x| f.cod.sub.contains(f.map[x])).collect();
        pair_inclusion(&f.dom, &Subgroup { members })
    }
    fn cokernel(&self, f: &PairMap) -> PairMap {
        let mut gens = f.cod.sub.members.clone();
        gens.extend(f.map.iter().copied());
        let sub = span(&f.cod.group, &gens).expect("elements in range");
        PairMap {
            dom: f.cod.clone(),
            cod: GroupPair { group: f.cod.group.clone(), sub },
            map: (0..f.cod.group.size).collect(),
        }
    }
    fn is_iso(&self, f: &PairMap) -> bool {
        self.inverse(f).is_some()
    }
    fn inverse(&self, f: &PairMap) -> Option<PairMap> {
        if f.dom.group.size != f.cod.group.size {
            return None;
        }
        let mut inv = vec![usize::MAX; f.cod.group.size];
        for (x, &y) in f.map.iter().enumerate() {
            if inv[y] != usize::MAX {
                return None;
            }
            inv[y] = x;
        }
        let cand = PairMap { dom: f.cod.clone(), cod: f.dom.clone(), map: inv };
        cand.dom
            .sub
            .members
            .iter()
            .all(|&y| cand.cod.sub.contains(cand.map[y]))
            .then_some(cand)
    }
    fn lift_through_mono(&self, f: &PairMap, m: &PairMap) -> Option<PairMap> {
        let mut back = vec![usize::MAX; m.cod.group.size];
        for (x, &y) in m.map.iter().enumerate() {
            back[y] = x;
        }
        let map: Option<Vec<usize>> = f
            .map
            .iter()
            .map(|&y| (back[y] != usize::MAX).then_some(back[y]))
            .collect();
        let cand = PairMap { dom: f.dom.clone(), cod: m.dom.clone(), map: map? };
        cand.dom
            .sub
            .members
            .iter()
            .all(|&x| cand.cod.sub.contains(cand.map[x]))
            .then_some(cand)
    }
    fn descend_through_epi(&self, f: &PairMap, p: &PairMap) -> Option<PairMap> {
        let mut map = vec![usize::MAX; p.cod.group.size];
        for x in 0..p.dom.group.size {
            let slot = &mut map[p.map[x]];
            if *slot != usize::MAX && *slot != f.map[x] {
                return None;
            }
            *slot = f.map[x];
        }
        if map.iter().any(|&y| y == usize::MAX) {
            return None;
        }
        let cand = PairMap { dom: p.cod.clone(), cod: f.cod.clone(), map };
        cand.dom
            .sub
            .members
            .iter()
            .all(|&x| cand.cod.sub.contains(cand.map[x]))
            .then_some(cand)
    }
    fn objects(&self) -> Vec<GroupPair> {
        let mut out = Vec::new();
        for g in FinGroup::catalog(self.max_group) {
            for s in subgroups(&g) {
                out.push(GroupPair { group: g.clone(), sub: s });
            }
        }
        out
    }
    fn hom(&self, a: &GroupPair, b: &GroupPair) -> Vec<PairMap> {
        a.group
            .homomorphisms(&b.group)
            .into_iter()
            .filter(|map| a.sub.members.iter().all(|&x| b.sub.contains(map[x])))
            .map(|map| PairMap { dom: a.clone(), cod: b.clone(), map })
            .collect()
    }
    fn nsb(&self, a: &GroupPair) -> Vec<PairMap> {
        subgroups(&a.group)
            .into_iter()
            .filter(|m| a.sub.is_subset_of(m))
            .map(|m| pair_inclusion(a, &m))
            .collect()
    }
    fn nsb_leq(&self, x: &PairMap, y: &PairMap) -> bool {
        x.map.iter().all(|v| y.map.binary_search(v).is_ok())
    }
}

// ---------------------------------------------------------------------------
// Plain groups with the ideal of zero morphisms
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupHom {
    pub dom: FinGroup,
    pub cod: FinGroup,
    pub map: Vec<usize>,
}

/// Groups with null ideal = zero morphisms. Kernels are the usual ones;
/// cokernels quotient by the invariant closure of the image. The composite
/// of two normal monos need not be normal here, so audits catch ex2 failing.
pub struct Gp {
    pub max_group: usize,
}

/// Canonical mono for a normal subgroup: elements in ascending order.
pub fn group_inclusion(g: &FinGroup, n: &Subgroup) -> GroupHom {
    let (grp, incl) = n.as_group(g);
    GroupHom { dom: grp, cod: g.clone(), map: incl }
}

impl Semiexact for Gp {
    type Obj = FinGroup;
    type Mor = GroupHom;

    fn name(&self) -> &'static str {
        "gp"
    }
    fn dom(&self, f: &GroupHom) -> FinGroup {
        f.dom.clone()
    }
    fn cod(&self, f: &GroupHom) -> FinGroup {
        f.cod.clone()
    }
    fn identity(&self, a: &FinGroup) -> GroupHom {
        GroupHom { dom: a.clone(), cod: a.clone(), map: (0..a.size).collect() }
    }
    fn compose(&self, g: &GroupHom, f: &GroupHom) -> GroupHom {
        debug_assert_eq!(f.cod, g.dom);
        GroupHom {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            map: f.map.iter().map(|&x| g.map[x]).collect(),
        }
    }
    fn is_null(&self, f: &GroupHom) -> bool {
        f.map.iter().all(|&y| y == 0)
    }
    fn kernel(&self, f: &GroupHom) -> GroupHom {
        let members: Vec<usize> = (0..f.dom.size).filter(|&x| f.map[x] == 0).collect();
        group_inclusion(&f.dom, &Subgroup { members })
    }
    fn cokernel(&self, f: &GroupHom) -> GroupHom {
        let image = span(&f.cod, &f.map).expect("in range");
        let closed = invariant_closure(&f.cod, &image).expect("subgroup");
        let (q, proj) = quotient_group(&f.cod, &closed).expect("normal by construction");
        GroupHom { dom: f.cod.clone(), cod: q, map: proj }
    }
    fn is_iso(&self, f: &GroupHom) -> bool {
        self.inverse(f).is_some()
    }
    fn inverse(&self, f: &GroupHom) -> Option<GroupHom> {
        if f.dom.size != f.cod.size {
            return None;
        }
        let mut inv = vec![usize::MAX; f.cod.size];
        for (x, &y) in f.map.iter().enumerate() {
            if inv[y] != usize::MAX {
                return None;
            }
            inv[y] = x;
        }
        Some(GroupHom { dom: f.cod.clone(), cod: f.dom.clone(), map: inv })
    }
    fn lift_through_mono(&self, f: &GroupHom, m: &GroupHom) -> Option<GroupHom> {
        let mut back = vec![usize::MAX; m.cod.size];
        for (x, &y) in m.map.iter().enumerate() {
            back[y] = x;
        }
        let map: Option<Vec<usize>> = f
            .map
            .iter()
            .map(|&y| (back[y] != usize::MAX).then_some(back[y]))
            .collect();
        Some(GroupHom { dom: f.dom.clone(), cod: m.dom.clone(), map: map? })
    }
    fn descend_through_epi(&self, f: &GroupHom, p: &GroupHom) -> Option<GroupHom> {
        let mut map = vec![usize::MAX; p.cod.size];
        for x in 0..p.dom.size {
            let slot = &mut map[p.map[x]];
            if *slot != usize::MAX && *slot != f.map[x] {
                return None;
            }
            *slot = f.map[x];
        }
        if map.iter().any(|&y| y == usize::MAX) {
            return None;
        }
        Some(GroupHom { dom: p.cod.clone(), cod: f.cod.clone(), map })
    }
    fn objects(&self) -> Vec<FinGroup> {
        FinGroup::catalog(self.max_group)
    }
    fn hom(&self, a: &FinGroup, b: &FinGroup) -> Vec<GroupHom> {
        a.homomorphisms(b)
            .into_iter()
            .map(|map| GroupHom { dom: a.clone(), cod: b.clone(), map })
            .collect()
    }
    fn nsb(&self, a: &FinGroup) -> Vec<GroupHom> {
        subgroups(a)
            .into_iter()
            .filter(|n| n.is_normal_in(a))
            .map(|n| group_inclusion(a, &n))
            .collect()
    }
    fn nsb_leq(&self, x: &GroupHom, y: &GroupHom) -> bool {
        x.map.iter().all(|v| y.map.binary_search(v).is_ok())
    }
}

// ---------------------------------------------------------------------------
// The embedding I: Gp → Gp₂ and the retraction K: Gp₂ → Gp
// ---------------------------------------------------------------------------

pub fn functor_i_obj(g: &FinGroup) -> GroupPair {
    GroupPair { group: g.clone(), sub: Subgroup::trivial() }
}

pub fn functor_i(f: &GroupHom) -> PairMap {
    PairMap { dom: functor_i_obj(&f.dom), cod: functor_i_obj(&f.cod), map: f.map.clone() }
}

/// K(S, S₀) = S / invariant_closure(S₀), with the projection table.
pub fn functor_k_obj(p: &GroupPair) -> (FinGroup, Vec<usize>) {
    let closed = invariant_closure(&p.group, &p.sub).expect("subgroup");
    quotient_group(&p.group, &closed).expect("invariant closure is normal")
}

pub fn functor_k(f: &PairMap) -> GroupHom {
    let (qd, projd) = functor_k_obj(&f.dom);
    let (qc, projc) = functor_k_obj(&f.cod);
    let mut map = vec![usize::MAX; qd.size];
    for x in 0..f.dom.group.size {
        map[projd[x]] = projc[f.map[x]];
    }
    GroupHom { dom: qd, cod: qc, map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{
        self, audit_all, check_functor_exactness, normal_factorise, AuditStatus, ExactnessMode,
    };

    fn small_pairs() -> Vec<GroupPair> {
        // a hand-picked fragment small enough for the heavy audits
        let z2 = FinGroup::cyclic(2);
        let z4 = FinGroup::cyclic(4);
        vec![
            GroupPair::new(FinGroup::trivial(), Subgroup::trivial()).unwrap(),
            GroupPair::new(z2.clone(), Subgroup::trivial()).unwrap(),
            GroupPair::new(z2.clone(), Subgroup::whole(&z2)).unwrap(),
            GroupPair::new(z4.clone(), Subgroup::trivial()).unwrap(),
            GroupPair::new(z4.clone(), Subgroup { members: vec![0, 2] }).unwrap(),
        ]
    }

    #[test]
    fn factorisation_shapes() {
        let c = Gp2 { max_group: 4 };
        let z4 = FinGroup::cyclic(4);
        let a = GroupPair::new(z4.clone(), Subgroup::trivial()).unwrap();
        let b = GroupPair::new(z4.clone(), Subgroup { members: vec![0, 2] }).unwrap();
        // doubling map into (Z/4, {0,2})
        let f = PairMap::new(a, b, vec![0, 2, 0, 2]).unwrap();
        let nf = normal_factorise(&c, &f).unwrap();
        assert_eq!(nf.ker.map, vec![0, 1, 2, 3]); // everything maps into {0,2}
        assert!(c.is_null(&f));
        assert_eq!(nf.cok.cod.sub.members, vec![0, 2]);
        assert_eq!(c.compose(&nf.nim, &c.compose(&nf.central, &nf.ncm)), f);
    }

    #[test]
    fn kernels_match_universal_property_oracle() {
        let c = Gp2 { max_group: 4 };
        let objs = small_pairs();
        for a in &objs {
            for b in &objs {
                for f in c.hom(a, b) {
                    let best = c
                        .nsb(a)
                        .into_iter()
                        .filter(|m| c.is_null(&c.compose(&f, m)))
                        .reduce(|x, y| if c.nsb_leq(&x, &y) { y } else { x })
                        .unwrap();
                    assert_eq!(c.kernel(&f), best);
                }
            }
        }
    }

    #[test]
    fn exact_iff_injective_and_covers_distinguished() {
        let c = Gp2 { max_group: 4 };
        let objs = small_pairs();
        for a in &objs {
            for b in &objs {
                for f in c.hom(a, b) {
                    let injective = {
                        let mut seen = vec![false; b.group.size];
                        f.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
                    };
                    let covers = b.sub.members.iter().all(|y| f.map.contains(y));
                    assert_eq!(cat::is_exact(&c, &f), injective && covers, "f = {f:?}");
                }
            }
        }
    }

    #[test]
    fn axioms_pass_on_fragment() {
        let c = Gp2 { max_group: 4 };
        let outer = small_pairs();
        for r in audit_all(&c, &outer, &outer) {
            assert_eq!(r.status, AuditStatus::Pass, "{r:?}");
        }
    }

    #[test]
    fn plain_groups_fail_ex2() {
        // D4 has a non-normal chain: Z2 normal in Z2×Z2 normal in D4,
        // but that Z2 is not normal in D4.
        let c = Gp { max_group: 8 };
        let d4 = FinGroup::dihedral(4);
        let r = cat::audit_ex2(&c, &[d4]);
        assert_eq!(r.status, AuditStatus::Fail, "{r:?}");
    }

    #[test]
    fn plain_groups_small_axioms() {
        // on abelian fragments everything is normal and the axioms hold
        let c = Gp { max_group: 4 };
        let outer = vec![FinGroup::trivial(), FinGroup::cyclic(2), FinGroup::cyclic(4)];
        for r in audit_all(&c, &outer, &outer) {
            assert_eq!(r.status, AuditStatus::Pass, "{r:?}");
        }
    }

    #[test]
    fn functor_k_examples() {
        // K(S, 0) = S
        let s3 = FinGroup::symmetric3();
        let (k, _) = functor_k_obj(&functor_i_obj(&s3));
        assert_eq!(k.size, 6);
        // K(S3, <transposition>) = trivial group
        let t = (3..6).find(|&x| s3.add(x, x) == 0).unwrap();
        let p = GroupPair::new(s3.clone(), span(&s3, &[t]).unwrap()).unwrap();
        let (k, _) = functor_k_obj(&p);
        assert_eq!(k.size, 1);
        // K(Z/4, {0,2}) = Z/2
        let z4 = FinGroup::cyclic(4);
        let p = GroupPair::new(z4, Subgroup { members: vec![0, 2] }).unwrap();
        let (k, proj) = functor_k_obj(&p);
        assert_eq!(k.size, 2);
        assert_eq!(proj, vec![0, 1, 0, 1]);
    }

    #[test]
    fn adjunction_counts_and_ki() {
        let gp2 = Gp2 { max_group: 4 };
        let gp = Gp { max_group: 4 };
        for p in small_pairs() {
            for g in gp.objects() {
                let lhs = gp2.hom(&p, &functor_i_obj(&g)).len();
                let (k, _) = functor_k_obj(&p);
                let rhs = gp.hom(&k, &g).len();
                assert_eq!(lhs, rhs, "pair {p:?}, group of order {}", g.size);
            }
        }
    }

    #[test]
    fn functor_k_right_exact_not_left() {
        let gp2 = Gp2 { max_group: 4 };
        let gp = Gp { max_group: 4 };
        let s3 = FinGroup::symmetric3();
        let t = (3..6).find(|&x| s3.add(x, x) == 0).unwrap();
        let mut outer = small_pairs();
        outer.push(functor_i_obj(&s3));
        outer.push(GroupPair::new(s3.clone(), span(&s3, &[t]).unwrap()).unwrap());
        let r = check_functor_exactness(&gp2, &gp, &functor_k, ExactnessMode::Right, &outer);
        assert_eq!(r.status, AuditStatus::Pass, "{r:?}");
        let r = check_functor_exactness(&gp2, &gp, &functor_k, ExactnessMode::Left, &outer);
        assert_eq!(r.status, AuditStatus::Fail);
        // the embedding I preserves kernels and sequence exactness (short-exact
        // pairs are not preserved on the nose: null objects of Gp₂ split into
        // non-isomorphic (S,S) pairs)
        let gs: Vec<FinGroup> = gp.objects();
        for mode in [ExactnessMode::Left, ExactnessMode::Long] {
            let r = check_functor_exactness(&gp, &gp2, &functor_i, mode, &gs);
            assert_eq!(r.status, AuditStatus::Pass, "{r:?}");
        }
        // the identity functor is exact in every mode
        let frag = small_pairs();
        let r =
            check_functor_exactness(&gp2, &gp2, &|f: &PairMap| f.clone(), ExactnessMode::Exact, &frag);
        assert_eq!(r.status, AuditStatus::Pass, "{r:?}");
    }

    #[test]
    fn embedded_exactness_matches_image_equals_kernel() {
        // a homomorphism sequence is exact in the pair sense iff Im f = Ker g
        let gp = Gp { max_group: 4 };
        let gp2 = Gp2 { max_group: 4 };
        for a in gp.objects() {
            for b in gp.objects() {
                for x in gp.objects() {
                    for f in gp.hom(&a, &b) {
                        for g in gp.hom(&b, &x) {
                            let im: Vec<usize> = {
                                let s = span(&b, &f.map).unwrap();
                                s.members
                            };
                            let ker: Vec<usize> =
                                (0..b.size).filter(|&y| g.map[y] == 0).collect();
                            assert_eq!(
                                cat::is_exact_at(&gp2, &functor_i(&f), &functor_i(&g)),
                                im == ker,
                                "f = {f:?}, g = {g:?}"
                            );
                        }
                    }
                }
            }
        }
    }
}
