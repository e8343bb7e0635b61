//! Actions with an attached pair of operator groups: triples (X, S, S₀)
//! where the distinguished subgroup acts trivially on the carrier, morphisms
//! whose operator part is only a quasi-homomorphism, the quotient modulo the
//! congruence identifying operator parts up to the distinguished subgroup,
//! and the inversion of excisions of trivially-acting invariant subgroups.

use crate::act::{is_normal_subaction, quotient_action, Act, ActMap, Action};
use crate::cat::Semiexact;
use crate::finite::Subgroup;
use crate::gp2::GroupPair;
use crate::ngp::{is_quasi_hom, quasi_class_search, r_equivalent, QuasiMap};
use crate::HomologError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActionTriple {
    pub action: Action,
    /// Distinguished operator subgroup; must act trivially on the carrier.
    pub sub: Subgroup,
}

impl ActionTriple {
    pub fn new(action: Action, sub: Subgroup) -> Result<Self, HomologError> {
        if !sub.is_subgroup_of(&action.group) {
            return Err(HomologError::Invalid("not a subgroup of the operators".into()));
        }
        for &s in &sub.members {
            for x in 0..action.points {
                if action.act[x][s] != x {
                    return Err(HomologError::Invalid(format!(
                        "distinguished operator {s} moves point {x}"
                    )));
                }
            }
        }
        Ok(ActionTriple { action, sub })
    }

    pub fn operator_pair(&self) -> GroupPair {
        GroupPair { group: self.action.group.clone(), sub: self.sub.clone() }
    }
}

/// Operators acting trivially on the whole carrier.
pub fn trivially_acting(a: &Action) -> Subgroup {
    Subgroup {
        members: (0..a.group.size)
            .filter(|&s| (0..a.points).all(|x| a.act[x][s] == x))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActPrimeMap {
    pub dom: ActionTriple,
    pub cod: ActionTriple,
    pub fprime: Vec<usize>,
    /// Quasi-homomorphism between the operator pairs.
    pub fsecond: Vec<usize>,
}

impl ActPrimeMap {
    pub fn new(
        dom: ActionTriple,
        cod: ActionTriple,
        fprime: Vec<usize>,
        fsecond: Vec<usize>,
    ) -> Result<Self, HomologError> {
        if fprime.len() != dom.action.points
            || fprime.iter().any(|&y| y >= cod.action.points)
            || fprime[0] != 0
        {
            return Err(HomologError::Invalid("carrier map is not a pointed map".into()));
        }
        if !is_quasi_hom(&fsecond, &dom.operator_pair(), &cod.operator_pair()) {
            return Err(HomologError::Invalid("operator map is not a quasi-homomorphism".into()));
        }
        for x in 0..dom.action.points {
            for s in 0..dom.action.group.size {
                if fprime[dom.action.act[x][s]] != cod.action.act[fprime[x]][fsecond[s]] {
                    return Err(HomologError::Invalid(format!("equivariance fails at ({x},{s})")));
                }
            }
        }
        Ok(ActPrimeMap { dom, cod, fprime, fsecond })
    }

    fn quasi(&self) -> QuasiMap {
        QuasiMap {
            dom: self.dom.operator_pair(),
            cod: self.cod.operator_pair(),
            map: self.fsecond.clone(),
        }
    }
}

/// Canonical inclusion of a normal subaction into a triple: the same carrier
/// subsets as in plain actions, with the distinguished subgroup carried over.
fn triple_inclusion(a: &ActionTriple, members: &[usize]) -> ActPrimeMap {
    let (ok, s1) = is_normal_subaction(&a.action, members);
    assert!(ok, "not a normal subaction: {members:?}");
    // the distinguished subgroup acts trivially, hence stays inside the
    // derived operator subgroup
    debug_assert!(a.sub.members.iter().all(|s| s1.contains(*s)));
    let (sub_group, _) = s1.as_group(&a.action.group);
    let back = |x: usize| members.binary_search(&x).expect("stable subset");
    let act = members
        .iter()
        .map(|&x| s1.members.iter().map(|&s| back(a.action.act[x][s])).collect())
        .collect();
    let sub0 = Subgroup {
        members: a
            .sub
            .members
            .iter()
            .map(|s| s1.members.binary_search(s).expect("contained"))
            .collect(),
    };
    let dom = ActionTriple {
        action: Action { points: members.len(), group: sub_group, act },
        sub: sub0,
    };
    ActPrimeMap { dom, cod: a.clone(), fprime: members.to_vec(), fsecond: s1.members.clone() }
}

#[derive(Clone, Debug)]
pub struct ActPrime {
    pub max_points: usize,
    pub max_group: usize,
}

impl Semiexact for ActPrime {
    type Obj = ActionTriple;
    type Mor = ActPrimeMap;

    fn name(&self) -> &'static str {
        "actprime"
    }
    fn dom(&self, f: &ActPrimeMap) -> ActionTriple {
        f.dom.clone()
    }
    fn cod(&self, f: &ActPrimeMap) -> ActionTriple {
        f.cod.clone()
    }
    fn identity(&self, a: &ActionTriple) -> ActPrimeMap {
        ActPrimeMap {
            dom: a.clone(),
            cod: a.clone(),
            fprime: (0..a.action.points).collect(),
            fsecond: (0..a.action.group.size).collect(),
        }
    }
    fn compose(&self, g: &ActPrimeMap, f: &ActPrimeMap) -> ActPrimeMap {
        debug_assert_eq!(f.cod, g.dom);
        ActPrimeMap {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            fprime: f.fprime.iter().map(|&x| g.fprime[x]).collect(),
            fsecond: f.fsecond.iter().map(|&s| g.fsecond[s]).collect(),
        }
    }
    fn is_null(&self, f: &ActPrimeMap) -> bool {
        f.fprime.iter().all(|&y| y == 0)
    }
    fn kernel(&self, f: &ActPrimeMap) -> ActPrimeMap {
        let members: Vec<usize> =
            (0..f.dom.action.points).filter(|&x| f.fprime[x] == 0).collect();
        triple_inclusion(&f.dom, &members)
    }
    fn cokernel(&self, f: &ActPrimeMap) -> ActPrimeMap {
        let mut seed: Vec<usize> = f.fprime.clone();
        seed.push(0);
        seed.sort_unstable();
        seed.dedup();
        let p = quotient_action(&f.cod.action, &seed);
        ActPrimeMap {
            dom: f.cod.clone(),
            cod: ActionTriple { action: p.cod, sub: f.cod.sub.clone() },
            fprime: p.fprime,
            fsecond: p.fsecond,
        }
    }
    fn is_iso(&self, f: &ActPrimeMap) -> bool {
        self.inverse(f).is_some()
    }
    fn inverse(&self, f: &ActPrimeMap) -> Option<ActPrimeMap> {
        let fp = invert(&f.fprime, f.cod.action.points)?;
        let fs = invert(&f.fsecond, f.cod.action.group.size)?;
        ActPrimeMap::new(f.cod.clone(), f.dom.clone(), fp, fs).ok()
    }
    fn lift_through_mono(&self, f: &ActPrimeMap, m: &ActPrimeMap) -> Option<ActPrimeMap> {
        let mut back = vec![usize::MAX; m.cod.action.points];
        for (i, &v) in m.fprime.iter().enumerate() {
            back[v] = i;
        }
        let fp: Option<Vec<usize>> =
            f.fprime.iter().map(|&y| (back[y] != usize::MAX).then_some(back[y])).collect();
        let mut back2 = vec![usize::MAX; m.cod.action.group.size];
        for (i, &v) in m.fsecond.iter().enumerate() {
            back2[v] = i;
        }
        let fs: Option<Vec<usize>> =
            f.fsecond.iter().map(|&t| (back2[t] != usize::MAX).then_some(back2[t])).collect();
        ActPrimeMap::new(f.dom.clone(), m.dom.clone(), fp?, fs?).ok()
    }
    fn descend_through_epi(&self, f: &ActPrimeMap, p: &ActPrimeMap) -> Option<ActPrimeMap> {
        let fp = solve(&f.fprime, &p.fprime, p.cod.action.points)?;
        let fs = solve(&f.fsecond, &p.fsecond, p.cod.action.group.size)?;
        ActPrimeMap::new(p.cod.clone(), f.cod.clone(), fp, fs).ok()
    }
    fn objects(&self) -> Vec<ActionTriple> {
        let mut out = Vec::new();
        for a in (Act { max_points: self.max_points, max_group: self.max_group }).objects() {
            let triv = trivially_acting(&a);
            for s0 in crate::finite::subgroups(&a.group) {
                if s0.is_subset_of(&triv) {
                    out.push(ActionTriple { action: a.clone(), sub: s0 });
                }
            }
        }
        out
    }
    fn hom(&self, a: &ActionTriple, b: &ActionTriple) -> Vec<ActPrimeMap> {
        let q = crate::ngp::Q { max_group: self.max_group };
        let mut out = Vec::new();
        for fsec in q.hom(&a.operator_pair(), &b.operator_pair()) {
            let mut fprime = vec![0usize; a.action.points];
            'maps: loop {
                let ok = (0..a.action.points).all(|x| {
                    (0..a.action.group.size).all(|s| {
                        fprime[a.action.act[x][s]] == b.action.act[fprime[x]][fsec.map[s]]
                    })
                });
                if ok {
                    out.push(ActPrimeMap {
                        dom: a.clone(),
                        cod: b.clone(),
                        fprime: fprime.clone(),
                        fsecond: fsec.map.clone(),
                    });
                }
                let mut i = 1;
                loop {
                    if i >= a.action.points {
                        break 'maps;
                    }
                    fprime[i] += 1;
                    if fprime[i] < b.action.points {
                        break;
                    }
                    fprime[i] = 0;
                    i += 1;
                }
            }
        }
        out
    }
    fn nsb(&self, a: &ActionTriple) -> Vec<ActPrimeMap> {
        let mut out = Vec::new();
        for mask in 0..(1u32 << (a.action.points - 1)) {
            let members: Vec<usize> = std::iter::once(0)
                .chain((1..a.action.points).filter(|&x| mask >> (x - 1) & 1 == 1))
                .collect();
            if is_normal_subaction(&a.action, &members).0 {
                out.push(triple_inclusion(a, &members));
            }
        }
        out.sort_by_key(|m| (m.fprime.len(), m.fprime.clone()));
        out
    }
    fn nsb_leq(&self, x: &ActPrimeMap, y: &ActPrimeMap) -> bool {
        x.fprime.iter().all(|v| y.fprime.binary_search(v).is_ok())
    }
}

fn invert(map: &[usize], size: usize) -> Option<Vec<usize>> {
    if map.len() != size {
        return None;
    }
    let mut inv = vec![usize::MAX; size];
    for (x, &y) in map.iter().enumerate() {
        if inv[y] != usize::MAX {
            return None;
        }
        inv[y] = x;
    }
    Some(inv)
}

fn solve(f: &[usize], p: &[usize], cod_size: usize) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; cod_size];
    for (x, &px) in p.iter().enumerate() {
        if map[px] != usize::MAX && map[px] != f[x] {
            return None;
        }
        map[px] = f[x];
    }
    map.iter().map(|&y| (y != usize::MAX).then_some(y)).collect()
}

/// Normal factorisation data of a triple morphism, with the containments of
/// the distinguished subgroups audited.
pub fn actprime_factorise(
    c: &ActPrime,
    f: &ActPrimeMap,
) -> Result<crate::cat::NormalFactorisation<ActPrimeMap>, HomologError> {
    let nf = crate::cat::normal_factorise(c, f)?;
    // S₀ sits inside the derived kernel operators, T₀ inside the image ones
    let ker_ops = &nf.ker.fsecond;
    if !f.dom.sub.members.iter().all(|s| ker_ops.binary_search(s).is_ok()) {
        return Err(HomologError::Operation(
            "distinguished subgroup escapes the kernel operators".into(),
        ));
    }
    let im_ops = &nf.nim.fsecond;
    if !f.cod.sub.members.iter().all(|t| im_ops.binary_search(t).is_ok()) {
        return Err(HomologError::Operation(
            "distinguished subgroup escapes the image operators".into(),
        ));
    }
    Ok(nf)
}

// ---------------------------------------------------------------------------
// Embedding of plain actions and the quotient modulo R
// ---------------------------------------------------------------------------

/// The triple attached to an action: the stabiliser of the basepoint.
/// Defined when that stabiliser acts trivially on the whole carrier.
pub fn embed_act(a: &Action) -> Result<ActionTriple, HomologError> {
    ActionTriple::new(a.clone(), a.fix(0))
}

pub fn embed_act_map(f: &ActMap) -> Result<ActPrimeMap, HomologError> {
    ActPrimeMap::new(
        embed_act(&f.dom)?,
        embed_act(&f.cod)?,
        f.fprime.clone(),
        f.fsecond.clone(),
    )
}

/// f R g: same carrier map and operator parts equal up to the distinguished
/// subgroup.
pub fn nac_equivalent(f: &ActPrimeMap, g: &ActPrimeMap) -> bool {
    f.fprime == g.fprime && r_equivalent(&f.quasi(), &g.quasi())
}

/// Quotient of the triple category modulo R. Morphisms are stored with the
/// lexicographically least operator part of their class; perturbing the
/// operator part inside a distinguished coset never breaks equivariance,
/// because the distinguished subgroup acts trivially.
#[derive(Clone, Debug)]
pub struct Nac {
    pub max_points: usize,
    pub max_group: usize,
}

impl Nac {
    fn prime(&self) -> ActPrime {
        ActPrime { max_points: self.max_points, max_group: self.max_group }
    }

    pub fn canonical(&self, f: &ActPrimeMap) -> ActPrimeMap {
        let q = quasi_class_search(
            &f.dom.operator_pair(),
            &f.cod.operator_pair(),
            &f.fsecond,
            |_| true,
        )
        .expect("class cannot be empty");
        ActPrimeMap { dom: f.dom.clone(), cod: f.cod.clone(), fprime: f.fprime.clone(), fsecond: q.map }
    }
}

impl Semiexact for Nac {
    type Obj = ActionTriple;
    type Mor = ActPrimeMap;

    fn name(&self) -> &'static str {
        "nac"
    }
    fn dom(&self, f: &ActPrimeMap) -> ActionTriple {
        f.dom.clone()
    }
    fn cod(&self, f: &ActPrimeMap) -> ActionTriple {
        f.cod.clone()
    }
    fn identity(&self, a: &ActionTriple) -> ActPrimeMap {
        self.canonical(&self.prime().identity(a))
    }
    fn compose(&self, g: &ActPrimeMap, f: &ActPrimeMap) -> ActPrimeMap {
        self.canonical(&self.prime().compose(g, f))
    }
    fn is_null(&self, f: &ActPrimeMap) -> bool {
        self.prime().is_null(f)
    }
    fn kernel(&self, f: &ActPrimeMap) -> ActPrimeMap {
        self.canonical(&self.prime().kernel(f))
    }
    fn cokernel(&self, f: &ActPrimeMap) -> ActPrimeMap {
        self.canonical(&self.prime().cokernel(f))
    }
    fn is_iso(&self, f: &ActPrimeMap) -> bool {
        self.inverse(f).is_some()
    }
    fn inverse(&self, f: &ActPrimeMap) -> Option<ActPrimeMap> {
        // carrier part must be a bijection on the nose; operator part needs a
        // class-wise two-sided inverse
        let fp = invert(&f.fprime, f.cod.action.points)?;
        let s = &f.dom.action.group;
        let t = &f.cod.action.group;
        let t0 = &f.cod.sub;
        let base: Option<Vec<usize>> = (0..t.size)
            .map(|y| (0..s.size).find(|&x| t0.contains(t.add(f.fsecond[x], t.neg(y)))))
            .collect();
        let id_dom = self.identity(&f.dom);
        let id_cod = self.identity(&f.cod);
        let q = quasi_class_search(&f.cod.operator_pair(), &f.dom.operator_pair(), &base?, |g| {
            match ActPrimeMap::new(f.cod.clone(), f.dom.clone(), fp.clone(), g.map.clone()) {
                Ok(cand) => {
                    self.compose(&cand, f) == id_dom && self.compose(f, &cand) == id_cod
                }
                Err(_) => false,
            }
        })?;
        Some(self.canonical(&ActPrimeMap {
            dom: f.cod.clone(),
            cod: f.dom.clone(),
            fprime: fp,
            fsecond: q.map,
        }))
    }
    fn lift_through_mono(&self, f: &ActPrimeMap, m: &ActPrimeMap) -> Option<ActPrimeMap> {
        // the carrier of the mono is exact; the operator part is a class of
        // a subgroup inclusion
        let mut back = vec![usize::MAX; m.cod.action.points];
        for (i, &v) in m.fprime.iter().enumerate() {
            back[v] = i;
        }
        let fp: Option<Vec<usize>> =
            f.fprime.iter().map(|&y| (back[y] != usize::MAX).then_some(back[y])).collect();
        let fp = fp?;
        let sub = {
            let mut gens = m.cod.sub.members.clone();
            gens.extend(m.fsecond.iter().copied());
            crate::finite::span(&m.cod.action.group, &gens).expect("in range")
        };
        let t = &f.cod.action.group;
        let base: Option<Vec<usize>> = f
            .fsecond
            .iter()
            .map(|&y| {
                f.cod
                    .sub
                    .members
                    .iter()
                    .map(|&t0| t.add(t0, y))
                    .find(|&v| sub.contains(v))
                    .map(|v| sub.members.binary_search(&v).expect("member"))
            })
            .collect();
        let q = quasi_class_search(&f.dom.operator_pair(), &m.dom.operator_pair(), &base?, |g| {
            ActPrimeMap::new(f.dom.clone(), m.dom.clone(), fp.clone(), g.map.clone()).is_ok()
        })?;
        Some(ActPrimeMap { dom: f.dom.clone(), cod: m.dom.clone(), fprime: fp, fsecond: q.map })
    }
    fn descend_through_epi(&self, f: &ActPrimeMap, p: &ActPrimeMap) -> Option<ActPrimeMap> {
        let fp = solve(&f.fprime, &p.fprime, p.cod.action.points)?;
        let t = &p.cod.action.group;
        let base: Option<Vec<usize>> = (0..t.size)
            .map(|y| {
                (0..p.dom.action.group.size)
                    .find(|&x| p.cod.sub.contains(t.add(y, t.neg(p.fsecond[x]))))
                    .map(|x| f.fsecond[x])
            })
            .collect();
        let prime = self.prime();
        let q = quasi_class_search(&p.cod.operator_pair(), &f.cod.operator_pair(), &base?, |g| {
            match ActPrimeMap::new(p.cod.clone(), f.cod.clone(), fp.clone(), g.map.clone()) {
                Ok(cand) => nac_equivalent(&prime.compose(&cand, p), f),
                Err(_) => false,
            }
        })?;
        Some(self.canonical(&ActPrimeMap {
            dom: p.cod.clone(),
            cod: f.cod.clone(),
            fprime: fp,
            fsecond: q.map,
        }))
    }
    fn objects(&self) -> Vec<ActionTriple> {
        self.prime().objects()
    }
    fn hom(&self, a: &ActionTriple, b: &ActionTriple) -> Vec<ActPrimeMap> {
        let mut classes: Vec<ActPrimeMap> = Vec::new();
        for f in self.prime().hom(a, b) {
            match classes.iter_mut().find(|g| nac_equivalent(&f, g)) {
                Some(g) => {
                    if f.fsecond < g.fsecond {
                        g.fsecond = f.fsecond;
                    }
                }
                None => classes.push(f),
            }
        }
        classes
    }
    fn nsb(&self, a: &ActionTriple) -> Vec<ActPrimeMap> {
        self.prime().nsb(a).iter().map(|m| self.canonical(m)).collect()
    }
    fn nsb_leq(&self, x: &ActPrimeMap, y: &ActPrimeMap) -> bool {
        x.fprime.iter().all(|v| y.fprime.binary_search(v).is_ok())
    }
}

/// The projection functor from plain actions to the quotient, defined on the
/// fragment where the basepoint stabiliser acts trivially.
pub fn functor_p_act(nac: &Nac, f: &ActMap) -> Result<ActPrimeMap, HomologError> {
    Ok(nac.canonical(&embed_act_map(f)?))
}

/// Invert the excision of a trivially-acting invariant subgroup: `p` must be
/// the identity on the carrier and a surjection on operators whose kernel
/// acts trivially and is invariant.
pub fn nac_sigma_invert(nac: &Nac, p: &ActMap) -> Result<ActPrimeMap, HomologError> {
    if p.fprime != (0..p.dom.points).collect::<Vec<usize>>() {
        return Err(HomologError::Operation("excision must keep the carrier fixed".into()));
    }
    let n: Vec<usize> = (0..p.dom.group.size).filter(|&s| p.fsecond[s] == 0).collect();
    let n = Subgroup { members: n };
    if !n.is_normal_in(&p.dom.group) {
        return Err(HomologError::Operation("excised subgroup is not invariant".into()));
    }
    let triv = trivially_acting(&p.dom);
    if !n.is_subset_of(&triv) {
        return Err(HomologError::Operation("excised subgroup does not act trivially".into()));
    }
    let mut hit = vec![false; p.cod.group.size];
    for &t in &p.fsecond {
        hit[t] = true;
    }
    if hit.iter().any(|&h| !h) {
        return Err(HomologError::Operation("excision must be surjective on operators".into()));
    }
    let p_hat = embed_act_map(p)?;
    // least-representative section on operators, identity on the carrier
    let j: Vec<usize> = (0..p.cod.group.size)
        .map(|t| p.fsecond.iter().position(|&v| v == t).expect("surjective"))
        .collect();
    let j_hat = ActPrimeMap::new(
        p_hat.cod.clone(),
        p_hat.dom.clone(),
        (0..p.dom.points).collect(),
        j,
    )?;
    let prime = nac.prime();
    debug_assert!(nac_equivalent(
        &prime.compose(&j_hat, &p_hat),
        &prime.identity(&p_hat.dom)
    ));
    debug_assert!(nac_equivalent(
        &prime.compose(&p_hat, &j_hat),
        &prime.identity(&p_hat.cod)
    ));
    Ok(nac.canonical(&j_hat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::act::functor_fi;
    use crate::cat::{audit_all, check_functor_exactness, AuditStatus, ExactnessMode};
    use crate::finite::FinGroup;

    /// Z/4 acting on two points through its quotient of order two.
    fn z4_on_two() -> ActionTriple {
        let z4 = FinGroup::cyclic(4);
        let act = vec![vec![0, 1, 0, 1], vec![1, 0, 1, 0]];
        ActionTriple::new(
            Action::new(2, z4, act).unwrap(),
            Subgroup { members: vec![0, 2] },
        )
        .unwrap()
    }

    fn small_triples() -> Vec<ActionTriple> {
        let z2 = FinGroup::cyclic(2);
        vec![
            ActionTriple::new(Action::discrete(1), Subgroup::trivial()).unwrap(),
            ActionTriple::new(Action::discrete(2), Subgroup::trivial()).unwrap(),
            ActionTriple::new(Action::null_of(z2.clone()), Subgroup::whole(&z2)).unwrap(),
            ActionTriple::new(functor_fi(&z2), Subgroup::trivial()).unwrap(),
            z4_on_two(),
        ]
    }

    #[test]
    fn triple_validation() {
        let z2 = FinGroup::cyclic(2);
        // the regular action has no nontrivial trivially-acting operators
        assert!(ActionTriple::new(functor_fi(&z2), Subgroup::whole(&z2)).is_err());
        assert!(ActionTriple::new(functor_fi(&z2), Subgroup::trivial()).is_ok());
        let t = z4_on_two();
        assert_eq!(trivially_acting(&t.action).members, vec![0, 2]);
    }

    #[test]
    fn quasi_operator_morphism_factorises() {
        // operator part x ↦ x + 2 on (Z/4, {0,2}), identity carrier
        let c = ActPrime { max_points: 3, max_group: 4 };
        let t = z4_on_two();
        let f = ActPrimeMap::new(t.clone(), t.clone(), vec![0, 1], vec![2, 3, 0, 1]).unwrap();
        let nf = actprime_factorise(&c, &f).unwrap();
        assert_eq!(nf.ker.fprime, vec![0]);
        assert!(c.is_iso(&nf.central));
        // a homomorphic morphism embedded from plain actions agrees with the
        // plain factorisation
        let act = Act { max_points: 3, max_group: 4 };
        let a = Action::discrete(2);
        for g in act.hom(&a, &a) {
            let eg = embed_act_map(&g).unwrap();
            let n1 = crate::cat::normal_factorise(&act, &g).unwrap();
            let n2 = crate::cat::normal_factorise(&c, &eg).unwrap();
            assert_eq!(n1.ker.fprime, n2.ker.fprime);
            assert_eq!(n1.cok.fprime, n2.cok.fprime);
        }
        // the null map has the identity subobject as kernel
        let z = ActPrimeMap::new(t.clone(), t.clone(), vec![0, 0], vec![0, 0, 0, 0]).unwrap();
        assert_eq!(c.kernel(&z).fprime, vec![0, 1]);
    }

    #[test]
    fn actprime_passes_axiom_audits() {
        let c = ActPrime { max_points: 2, max_group: 4 };
        let outer = small_triples();
        for r in audit_all(&c, &outer, &outer) {
            assert_eq!(r.status, AuditStatus::Pass, "{r:?}");
        }
    }

    #[test]
    fn embedding_of_actions_preserves_kernels_and_exact_sequences() {
        // On the fragment where the basepoint stabiliser acts trivially the
        // embedding preserves kernels and exactness of sequences.
        let act = Act { max_points: 2, max_group: 4 };
        let c = ActPrime { max_points: 2, max_group: 4 };
        let outer: Vec<Action> = act
            .objects()
            .into_iter()
            .filter(|a| embed_act(a).is_ok())
            .collect();
        let on_mor = |f: &ActMap| embed_act_map(f).expect("fragment");
        for mode in [ExactnessMode::N, ExactnessMode::Left, ExactnessMode::Long] {
            let r = check_functor_exactness(&act, &c, &on_mor, mode, &outer);
            assert_eq!(r.status, AuditStatus::Pass, "{r:?}");
        }
        // It does not preserve cokernels: collapsing the carrier enlarges the
        // basepoint stabiliser that the embedding attaches, while triple
        // cokernels keep the original distinguished subgroup.
        let r = check_functor_exactness(&act, &c, &on_mor, ExactnessMode::Right, &outer);
        assert_eq!(r.status, AuditStatus::Fail);
        // Minimal counterexample: the identity of the regular Z/2 action.
        let z2 = FinGroup::cyclic(2);
        let reg = crate::act::functor_fi(&z2);
        let id = Act { max_points: 2, max_group: 4 }.identity(&reg);
        let eid = embed_act_map(&id).unwrap();
        let act_cat = Act { max_points: 2, max_group: 4 };
        let embedded_cok = embed_act_map(&act_cat.cokernel(&id)).unwrap();
        let triple_cok = c.cokernel(&eid);
        assert_eq!(triple_cok.cod.sub.members, vec![0]);
        assert_eq!(embedded_cok.cod.sub.members, vec![0, 1]);
        // the two quotient objects are not isomorphic, in the triple category
        // or modulo the operator congruence: a backwards operator map has to
        // send everything into the trivial subgroup
        let nac = Nac { max_points: 2, max_group: 4 };
        assert!(c
            .hom(&embedded_cok.cod, &triple_cok.cod)
            .iter()
            .all(|h| !c.is_iso(h) && !nac.is_iso(h)));
    }

    #[test]
    fn nac_passes_axiom_audits() {
        let c = Nac { max_points: 2, max_group: 4 };
        let outer = small_triples();
        for r in audit_all(&c, &outer, &outer) {
            assert_eq!(r.status, AuditStatus::Pass, "{r:?}");
        }
    }

    #[test]
    fn nac_kernels_independent_of_representative() {
        let nac = Nac { max_points: 2, max_group: 4 };
        let c = nac.prime();
        let t = z4_on_two();
        let homs = c.hom(&t, &t);
        for f in &homs {
            for g in &homs {
                if nac_equivalent(f, g) {
                    assert_eq!(nac.kernel(f), nac.kernel(g));
                    assert_eq!(nac.cokernel(f), nac.cokernel(g));
                }
            }
        }
    }

    #[test]
    fn sigma_inversion_of_excisions() {
        let nac = Nac { max_points: 2, max_group: 4 };
        let z4 = FinGroup::cyclic(4);
        let z2 = FinGroup::cyclic(2);
        let t = z4_on_two();
        // excise N = {0,2}: (X, Z/4) -> (X, Z/2)
        let cod = Action::new(2, z2.clone(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let p = ActMap::new(t.action.clone(), cod.clone(), vec![0, 1], vec![0, 1, 0, 1]).unwrap();
        let j = nac_sigma_invert(&nac, &p).unwrap();
        let p_hat = nac.canonical(&embed_act_map(&p).unwrap());
        assert_eq!(nac.compose(&j, &p_hat), nac.identity(&p_hat.dom));
        assert_eq!(nac.compose(&p_hat, &j), nac.identity(&p_hat.cod));
        // trivial excision inverts to the identity
        let idp = ActMap::new(cod.clone(), cod.clone(), vec![0, 1], vec![0, 1]).unwrap();
        assert_eq!(
            nac_sigma_invert(&nac, &idp).unwrap(),
            nac.identity(&embed_act(&cod).unwrap())
        );
        // a non-trivially-acting kernel is rejected
        let reg = functor_fi(&z4);
        let q = ActMap::new(
            reg.clone(),
            Action::null_of(z2.clone()),
            vec![0, 0, 0, 0],
            vec![0, 1, 0, 1],
        );
        if let Ok(q) = q {
            assert!(nac_sigma_invert(&nac, &q).is_err());
        }
    }

    #[test]
    fn projection_to_nac_exactness_and_nsb_transfer() {
        let act = Act { max_points: 2, max_group: 4 };
        let nac = Nac { max_points: 2, max_group: 4 };
        let outer: Vec<Action> = act
            .objects()
            .into_iter()
            .filter(|a| embed_act(a).is_ok())
            .collect();
        let on_mor = |f: &ActMap| functor_p_act(&nac, f).expect("fragment");
        for mode in [ExactnessMode::N, ExactnessMode::Left, ExactnessMode::Long] {
            let r = check_functor_exactness(&act, &nac, &on_mor, mode, &outer);
            assert_eq!(r.status, AuditStatus::Pass, "{r:?}");
        }
        assert!(crate::nsb::is_nsb_faithful(&act, &nac, &on_mor, &outer).unwrap());
        let on_obj = |a: &Action| embed_act(a).expect("fragment");
        assert!(crate::nsb::is_nsb_full(&act, &nac, &on_obj, &on_mor, &outer).unwrap());
    }
}

