//! Right actions of finite groups on pointed sets: the homological category
//! they form, its kernels (fixed-point characterisation), cokernels (orbit
//! congruence), normal subactions, the functors relating actions to pointed
//! sets and to group pairs, and the exactness report for mixed sequences of
//! groups, an action, and pointed sets.

use serde::{Deserialize, Serialize};

use crate::cat::{self, Semiexact};
use crate::finite::{FinGroup, PointedSet, Subgroup};
use crate::gp2::{GroupHom, GroupPair};
use crate::setpt::PtMap;
use crate::HomologError;

/// A right action of `group` on a pointed set with carrier `0..points`,
/// basepoint 0. `act[x][s]` is x + s.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Action {
    pub points: usize,
    pub group: FinGroup,
    pub act: Vec<Vec<usize>>,
}

impl Action {
    pub fn new(points: usize, group: FinGroup, act: Vec<Vec<usize>>) -> Result<Self, HomologError> {
        if points == 0 {
            return Err(HomologError::Invalid("carrier must contain the basepoint".into()));
        }
        if act.len() != points || act.iter().any(|r| r.len() != group.size) {
            return Err(HomologError::Invalid("action table has wrong shape".into()));
        }
        if act.iter().any(|r| r.iter().any(|&v| v >= points)) {
            return Err(HomologError::Invalid("action value out of range".into()));
        }
        for x in 0..points {
            if act[x][0] != x {
                return Err(HomologError::Invalid(format!("{x} moves under the identity")));
            }
            for s in 0..group.size {
                for s2 in 0..group.size {
                    if act[act[x][s]][s2] != act[x][group.add(s, s2)] {
                        return Err(HomologError::Invalid(format!(
                            "associativity of the action fails at ({x},{s},{s2})"
                        )));
                    }
                }
            }
        }
        Ok(Action { points, group, act })
    }

    /// Trivial action of the null group on a pointed set.
    pub fn discrete(points: usize) -> Action {
        Action { points, group: FinGroup::trivial(), act: (0..points).map(|x| vec![x]).collect() }
    }

    /// Null object: a group acting on the pointed singleton.
    pub fn null_of(group: FinGroup) -> Action {
        Action { points: 1, act: vec![vec![0; group.size]], group }
    }

    /// Operators fixing the point `x`.
    pub fn fix(&self, x: usize) -> Subgroup {
        Subgroup { members: (0..self.group.size).filter(|&s| self.act[x][s] == x).collect() }
    }

    /// The orbit of `x`, sorted.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut o: Vec<usize> = (0..self.group.size).map(|s| self.act[x][s]).collect();
        o.sort_unstable();
        o.dedup();
        o
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActMap {
    pub dom: Action,
    pub cod: Action,
    /// Pointed map on carriers.
    pub fprime: Vec<usize>,
    /// Group homomorphism on operators.
    pub fsecond: Vec<usize>,
}

impl ActMap {
    pub fn new(
        dom: Action,
        cod: Action,
        fprime: Vec<usize>,
        fsecond: Vec<usize>,
    ) -> Result<Self, HomologError> {
        if fprime.len() != dom.points
            || fprime.iter().any(|&y| y >= cod.points)
            || fprime[0] != 0
        {
            return Err(HomologError::Invalid("carrier map is not a pointed map".into()));
        }
        if fsecond.len() != dom.group.size || fsecond.iter().any(|&t| t >= cod.group.size) {
            return Err(HomologError::Invalid("operator map out of range".into()));
        }
        for s in 0..dom.group.size {
            for s2 in 0..dom.group.size {
                if fsecond[dom.group.add(s, s2)] != cod.group.add(fsecond[s], fsecond[s2]) {
                    return Err(HomologError::Invalid("operator map is not a homomorphism".into()));
                }
            }
        }
        for x in 0..dom.points {
            for s in 0..dom.group.size {
                if fprime[dom.act[x][s]] != cod.act[fprime[x]][fsecond[s]] {
                    return Err(HomologError::Invalid(format!(
                        "equivariance fails at ({x},{s})"
                    )));
                }
            }
        }
        Ok(ActMap { dom, cod, fprime, fsecond })
    }
}

/// Decide whether a pointed subset is a normal subaction: any operator
/// linking two of its points must keep it inside itself. Returns the derived
/// operator subgroup on success.
///
/// The three equivalent characterisations are cross-checked in debug builds.
pub fn is_normal_subaction(a: &Action, members: &[usize]) -> (bool, Subgroup) {
    debug_assert!(members.binary_search(&0).is_ok(), "subset must be pointed");
    let inside = |x: usize| members.binary_search(&x).is_ok();
    let links = |s: usize| members.iter().any(|&x| inside(a.act[x][s]));
    let stays = |s: usize| members.iter().all(|&x| inside(a.act[x][s]));
    let verdict = (0..a.group.size).all(|s| !links(s) || stays(s));
    let s1 = Subgroup { members: (0..a.group.size).filter(|&s| stays(s)).collect() };
    #[cfg(debug_assertions)]
    if verdict {
        // "stays" and "links" coincide, the derived set is a subgroup, and
        // membership of x + s depends only on s
        assert!((0..a.group.size).all(|s| links(s) == stays(s)));
        assert!(s1.is_subgroup_of(&a.group));
        for &x in members {
            for s in 0..a.group.size {
                assert_eq!(inside(a.act[x][s]), s1.contains(s));
            }
        }
    }
    (verdict, s1)
}

/// Canonical inclusion of a normal subaction given by its sorted pointed
/// carrier subset; the operator subgroup is derived.
pub fn subaction_inclusion(a: &Action, members: &[usize]) -> ActMap {
    let (ok, s1) = is_normal_subaction(a, members);
    assert!(ok, "not a normal subaction: {members:?}");
    let (sub_group, _) = s1.as_group(&a.group);
    let back = |x: usize| members.binary_search(&x).expect("stable subset");
    let act = members
        .iter()
        .map(|&x| s1.members.iter().map(|&s| back(a.act[x][s])).collect())
        .collect();
    let dom = Action { points: members.len(), group: sub_group, act };
    ActMap { dom, cod: a.clone(), fprime: members.to_vec(), fsecond: s1.members.clone() }
}

/// Quotient by the congruence generated by identifying the given points:
/// classes are closed under the action, named by least member. Returns the
/// projection table.
pub fn action_congruence(a: &Action, seed: &[usize]) -> Vec<usize> {
    let mut cls: Vec<usize> = (0..a.points).collect();
    fn find(cls: &mut Vec<usize>, x: usize) -> usize {
        if cls[x] != x {
            let r = find(cls, cls[x]);
            cls[x] = r;
            r
        } else {
            x
        }
    }
    let union = |cls: &mut Vec<usize>, x: usize, y: usize| {
        let (rx, ry) = (find(cls, x), find(cls, y));
        let (lo, hi) = (rx.min(ry), rx.max(ry));
        cls[hi] = lo;
    };
    for w in seed.windows(2) {
        union(&mut cls, w[0], w[1]);
    }
    loop {
        let mut changed = false;
        for x in 0..a.points {
            for y in (x + 1)..a.points {
                if find(&mut cls, x) == find(&mut cls, y) {
                    for s in 0..a.group.size {
                        let (u, v) = (a.act[x][s], a.act[y][s]);
                        if find(&mut cls, u) != find(&mut cls, v) {
                            union(&mut cls, u, v);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..a.points).map(|x| find(&mut cls, x)).collect()
}

/// Canonical projection onto the quotient action by the congruence generated
/// by a set of identified points.
pub fn quotient_action(a: &Action, seed: &[usize]) -> ActMap {
    let roots = action_congruence(a, seed);
    let mut names: Vec<usize> = roots.clone();
    names.sort_unstable();
    names.dedup();
    let fprime: Vec<usize> =
        roots.iter().map(|r| names.binary_search(r).expect("root")).collect();
    let act = names
        .iter()
        .map(|&r| (0..a.group.size).map(|s| fprime[a.act[r][s]]).collect())
        .collect();
    let cod = Action { points: names.len(), group: a.group.clone(), act };
    ActMap {
        dom: a.clone(),
        cod,
        fprime,
        fsecond: (0..a.group.size).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct Act {
    pub max_points: usize,
    pub max_group: usize,
}

impl Semiexact for Act {
    type Obj = Action;
    type Mor = ActMap;

    fn name(&self) -> &'static str {
        "act"
    }
    fn dom(&self, f: &ActMap) -> Action {
        f.dom.clone()
    }
    fn cod(&self, f: &ActMap) -> Action {
        f.cod.clone()
    }
    fn identity(&self, a: &Action) -> ActMap {
        ActMap {
            dom: a.clone(),
            cod: a.clone(),
            fprime: (0..a.points).collect(),
            fsecond: (0..a.group.size).collect(),
        }
    }
    fn compose(&self, g: &ActMap, f: &ActMap) -> ActMap {
        debug_assert_eq!(f.cod, g.dom);
        ActMap {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            fprime: f.fprime.iter().map(|&x| g.fprime[x]).collect(),
            fsecond: f.fsecond.iter().map(|&s| g.fsecond[s]).collect(),
        }
    }
    fn is_null(&self, f: &ActMap) -> bool {
        f.fprime.iter().all(|&y| y == 0)
    }
    fn kernel(&self, f: &ActMap) -> ActMap {
        let members: Vec<usize> = (0..f.dom.points).filter(|&x| f.fprime[x] == 0).collect();
        let m = subaction_inclusion(&f.dom, &members);
        // the derived operator subgroup is the preimage of the operators
        // fixing the target basepoint
        debug_assert_eq!(
            m.fsecond,
            (0..f.dom.group.size)
                .filter(|&s| f.cod.act[0][f.fsecond[s]] == 0)
                .collect::<Vec<_>>()
        );
        m
    }
    fn cokernel(&self, f: &ActMap) -> ActMap {
        let mut seed: Vec<usize> = f.fprime.clone();
        seed.push(0);
        seed.sort_unstable();
        seed.dedup();
        quotient_action(&f.cod, &seed)
    }
    fn is_iso(&self, f: &ActMap) -> bool {
        self.inverse(f).is_some()
    }
    fn inverse(&self, f: &ActMap) -> Option<ActMap> {
        let fp = invert_perm(&f.fprime, f.cod.points)?;
        let fs = invert_perm(&f.fsecond, f.cod.group.size)?;
        ActMap::new(f.cod.clone(), f.dom.clone(), fp, fs).ok()
    }
    fn lift_through_mono(&self, f: &ActMap, m: &ActMap) -> Option<ActMap> {
        let fp = pull_back(&f.fprime, &m.fprime, m.cod.points)?;
        let fs = pull_back(&f.fsecond, &m.fsecond, m.cod.group.size)?;
        ActMap::new(f.dom.clone(), m.dom.clone(), fp, fs).ok()
    }
    fn descend_through_epi(&self, f: &ActMap, p: &ActMap) -> Option<ActMap> {
        let fp = push_down(&f.fprime, &p.fprime, p.cod.points)?;
        let fs = push_down(&f.fsecond, &p.fsecond, p.cod.group.size)?;
        ActMap::new(p.cod.clone(), f.cod.clone(), fp, fs).ok()
    }
    fn objects(&self) -> Vec<Action> {
        let mut out: Vec<Action> = (1..=self.max_points).map(Action::discrete).collect();
        for g in FinGroup::catalog(self.max_group) {
            if g.size > 1 {
                out.push(Action::null_of(g.clone()));
            }
            out.push(functor_fi(&g));
            for h in crate::finite::subgroups(&g) {
                let cand = functor_f(&GroupPair { group: g.clone(), sub: h });
                if !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
        out
    }
    fn hom(&self, a: &Action, b: &Action) -> Vec<ActMap> {
        let mut out = Vec::new();
        for fsecond in a.group.homomorphisms(&b.group) {
            // enumerate pointed carrier maps, then keep the equivariant ones
            let mut fprime = vec![0usize; a.points];
            'maps: loop {
                let ok = (0..a.points).all(|x| {
                    (0..a.group.size)
                        .all(|s| fprime[a.act[x][s]] == b.act[fprime[x]][fsecond[s]])
                });
                if ok {
                    out.push(ActMap {
                        dom: a.clone(),
                        cod: b.clone(),
                        fprime: fprime.clone(),
                        fsecond: fsecond.clone(),
                    });
                }
                let mut i = 1;
                loop {
                    if i >= a.points {
                        break 'maps;
                    }
                    fprime[i] += 1;
                    if fprime[i] < b.points {
                        break;
                    }
                    fprime[i] = 0;
                    i += 1;
                }
            }
        }
        out
    }
    fn nsb(&self, a: &Action) -> Vec<ActMap> {
        let mut out = Vec::new();
        // enumerate pointed subsets; keep those closed under linking
        for mask in 0..(1u32 << (a.points - 1)) {
            let members: Vec<usize> = std::iter::once(0)
                .chain((1..a.points).filter(|&x| mask >> (x - 1) & 1 == 1))
                .collect();
            if is_normal_subaction(a, &members).0 {
                out.push(subaction_inclusion(a, &members));
            }
        }
        out.sort_by_key(|m| (m.fprime.len(), m.fprime.clone()));
        out
    }
    fn nsb_leq(&self, x: &ActMap, y: &ActMap) -> bool {
        x.fprime.iter().all(|v| y.fprime.binary_search(v).is_ok())
    }
}

fn invert_perm(map: &[usize], size: usize) -> Option<Vec<usize>> {
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

fn pull_back(f: &[usize], m: &[usize], cod_size: usize) -> Option<Vec<usize>> {
    let mut back = vec![usize::MAX; cod_size];
    for (i, &v) in m.iter().enumerate() {
        back[v] = i;
    }
    f.iter().map(|&y| (back[y] != usize::MAX).then_some(back[y])).collect()
}

fn push_down(f: &[usize], p: &[usize], cod_size: usize) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; cod_size];
    for (x, &px) in p.iter().enumerate() {
        if map[px] != usize::MAX && map[px] != f[x] {
            return None;
        }
        map[px] = f[x];
    }
    map.iter().map(|&y| (y != usize::MAX).then_some(y)).collect()
}

// ---------------------------------------------------------------------------
// Functors to and from pointed sets and group pairs
// ---------------------------------------------------------------------------

/// Pointed sets as actions of the null group.
pub fn functor_u(z: &PointedSet) -> Action {
    Action::discrete(z.size)
}

pub fn functor_u_map(f: &PtMap) -> ActMap {
    ActMap {
        dom: functor_u(&f.dom),
        cod: functor_u(&f.cod),
        fprime: f.map.clone(),
        fsecond: vec![0],
    }
}

/// Orbit set of an action, pointed at the orbit of the basepoint; also
/// returns the projection table.
pub fn functor_v(a: &Action) -> (PointedSet, Vec<usize>) {
    // the orbit relation of a group action is already an equivalence; name
    // each orbit by its least member
    let reps: Vec<usize> = (0..a.points).map(|x| *a.orbit(x).first().unwrap()).collect();
    let mut names = reps.clone();
    names.sort_unstable();
    names.dedup();
    let proj: Vec<usize> = reps.iter().map(|r| names.binary_search(r).unwrap()).collect();
    (PointedSet { size: names.len() }, proj)
}

pub fn functor_v_map(f: &ActMap) -> PtMap {
    let (vd, pd) = functor_v(&f.dom);
    let (vc, pc) = functor_v(&f.cod);
    let mut map = vec![0usize; vd.size];
    for x in 0..f.dom.points {
        map[pd[x]] = pc[f.fprime[x]];
    }
    PtMap { dom: vd, cod: vc, map }
}

/// Coset action of a group pair: the group acting on the right cosets of the
/// distinguished subgroup, pointed at the subgroup itself.
pub fn functor_f(p: &GroupPair) -> Action {
    let g = &p.group;
    // name each coset S₀ + s by its least member
    let coset_root = |s: usize| -> usize {
        p.sub.members.iter().map(|&h| g.add(h, s)).min().expect("nonempty subgroup")
    };
    let mut names: Vec<usize> = (0..g.size).map(coset_root).collect();
    names.sort_unstable();
    names.dedup();
    let index = |s: usize| names.binary_search(&coset_root(s)).expect("named");
    let act = names
        .iter()
        .map(|&r| (0..g.size).map(|s| index(g.add(r, s))).collect())
        .collect();
    Action { points: names.len(), group: g.clone(), act }
}

pub fn functor_f_map(f: &crate::gp2::PairMap) -> ActMap {
    let dom = functor_f(&f.dom);
    let cod = functor_f(&f.cod);
    let mut fprime = vec![usize::MAX; dom.points];
    // the basepoint is the coset of 0; cosets are orbits of the basepoint
    for s in 0..f.dom.group.size {
        fprime[dom.act[0][s]] = cod.act[0][f.map[s]];
    }
    ActMap { dom, cod, fprime, fsecond: f.map.clone() }
}

/// The operator pair of an action: the group together with the stabiliser of
/// the basepoint.
pub fn functor_g(a: &Action) -> GroupPair {
    GroupPair { group: a.group.clone(), sub: a.fix(0) }
}

pub fn functor_g_map(f: &ActMap) -> crate::gp2::PairMap {
    crate::gp2::PairMap {
        dom: functor_g(&f.dom),
        cod: functor_g(&f.cod),
        map: f.fsecond.clone(),
    }
}

/// A group acting on its own carrier by right translation.
pub fn functor_fi(g: &FinGroup) -> Action {
    Action { points: g.size, group: g.clone(), act: g.table.clone() }
}

pub fn functor_fi_map(f: &GroupHom) -> ActMap {
    ActMap {
        dom: functor_fi(&f.dom),
        cod: functor_fi(&f.cod),
        fprime: f.map.clone(),
        fsecond: f.map.clone(),
    }
}

/// Retraction onto groups: quotient of the operator group by the invariant
/// closure of the basepoint stabiliser.
pub fn functor_kg(a: &Action) -> (FinGroup, Vec<usize>) {
    crate::gp2::functor_k_obj(&functor_g(a))
}

/// The counit comparison from the coset action of the operator pair; an
/// isomorphism exactly on transitive actions.
pub fn counit(act: &Act, a: &Action) -> ActMap {
    let f = functor_f(&functor_g(a));
    let mut fprime = vec![usize::MAX; f.points];
    for s in 0..a.group.size {
        fprime[f.act[0][s]] = a.act[0][s];
    }
    let _ = act;
    ActMap { dom: f, cod: a.clone(), fprime, fsecond: (0..a.group.size).collect() }
}

// ---------------------------------------------------------------------------
// Mixed sequences: groups, one action, pointed sets
// ---------------------------------------------------------------------------

/// Input: H --u--> G --v--> S --f--> (X,S) --g--> Y --h--> Z, where u, v are
/// group homomorphisms (cod v = operator group of the action), f is the
/// canonical map s ↦ 0_X + s, g is a pointed map constant on orbits, and h a
/// pointed map.
pub struct MixedSequence {
    pub u: GroupHom,
    pub v: GroupHom,
    pub action: Action,
    pub g: PtMap,
    pub h: PtMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedReport {
    /// exact at G ⇔ image of u is the kernel of v
    pub exact_at_g: bool,
    /// exact at S ⇔ image of v is the basepoint stabiliser
    pub exact_at_s: bool,
    /// exact at (X,S) ⇔ the basepoint orbit is the g-preimage of 0
    pub exact_at_x: bool,
    /// exact at Y ⇔ image of g is the h-preimage of 0
    pub exact_at_y: bool,
    /// the canonical map into the action is always exact
    pub f_exact: bool,
    /// the collapse onto the pointed set is always right modular
    pub g_right_modular: bool,
    /// the classical (stronger) exactness at the action: g identifies
    /// exactly the orbits
    pub classical_at_x: bool,
}

pub fn mixed_sequence_exactness(
    act: &Act,
    seq: &MixedSequence,
) -> Result<MixedReport, HomologError> {
    let a = &seq.action;
    if seq.v.cod != a.group {
        return Err(HomologError::Invalid("second homomorphism must land in the operators".into()));
    }
    if seq.u.cod != seq.v.dom {
        return Err(HomologError::Invalid("homomorphisms do not compose".into()));
    }
    if seq.g.map.len() != a.points || seq.g.cod != seq.h.dom {
        return Err(HomologError::Invalid("pointed maps do not fit the action".into()));
    }
    for x in 0..a.points {
        for s in 0..a.group.size {
            if seq.g.map[a.act[x][s]] != seq.g.map[x] {
                return Err(HomologError::Invalid("collapse map is not constant on orbits".into()));
            }
        }
    }
    // assemble the sequence in the category of actions
    let fu = functor_fi_map(&seq.u);
    let fv = functor_fi_map(&seq.v);
    let f = ActMap::new(
        functor_fi(&a.group),
        a.clone(),
        (0..a.group.size).map(|s| a.act[0][s]).collect(),
        (0..a.group.size).collect(),
    )?;
    let g = ActMap::new(
        a.clone(),
        functor_u(&seq.g.cod),
        seq.g.map.clone(),
        vec![0; a.group.size],
    )?;
    let h = functor_u_map(&seq.h);

    // categorical exactness, and the quoted pointwise criteria; they must
    // agree, and the audit insists on it
    let cat_g = cat::is_exact_at(act, &fu, &fv);
    let classical_g = {
        let im: Vec<usize> = {
            let mut v: Vec<usize> = seq.u.map.clone();
            v.sort_unstable();
            v.dedup();
            v
        };
        let ker: Vec<usize> =
            (0..seq.v.dom.size).filter(|&x| seq.v.map[x] == 0).collect();
        im == ker
    };
    assert_eq!(cat_g, classical_g, "exactness at the middle group");

    let cat_s = cat::is_exact_at(act, &fv, &f);
    let classical_s = {
        let mut im: Vec<usize> = seq.v.map.clone();
        im.sort_unstable();
        im.dedup();
        im == a.fix(0).members
    };
    assert_eq!(cat_s, classical_s, "exactness at the operator group");

    let cat_x = cat::is_exact_at(act, &f, &g);
    let classical_x = {
        let preim: Vec<usize> = (0..a.points).filter(|&x| seq.g.map[x] == 0).collect();
        a.orbit(0) == preim
    };
    assert_eq!(cat_x, classical_x, "exactness at the action");

    let cat_y = cat::is_exact_at(act, &g, &h);
    let classical_y = {
        let mut im: Vec<usize> = seq.g.map.clone();
        im.push(0);
        im.sort_unstable();
        im.dedup();
        let preim: Vec<usize> = (0..seq.h.dom.size).filter(|&y| seq.h.map[y] == 0).collect();
        im == preim
    };
    assert_eq!(cat_y, classical_y, "exactness at the first pointed set");

    let f_exact = cat::is_exact(act, &f);
    let g_right_modular = act
        .nsb(&act.cod(&g))
        .iter()
        .all(|y| crate::nsb::is_right_modular_on(act, &g, y));

    let classical_at_x = (0..a.points).all(|x| {
        (0..a.points).all(|x2| {
            (seq.g.map[x] == seq.g.map[x2])
                == (0..a.group.size).any(|s| a.act[x2][s] == x)
        })
    });

    Ok(MixedReport {
        exact_at_g: cat_g,
        exact_at_s: cat_s,
        exact_at_x: cat_x,
        exact_at_y: cat_y,
        f_exact,
        g_right_modular,
        classical_at_x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{audit_all, check_functor_exactness, AuditStatus, ExactnessMode};
    use crate::setpt::SetPt;

    /// Z/2 swapping two points and fixing the basepoint.
    pub fn swap_act() -> Action {
        Action::new(
            3,
            FinGroup::cyclic(2),
            vec![vec![0, 0], vec![1, 2], vec![2, 1]],
        )
        .unwrap()
    }

    fn small_acts() -> Vec<Action> {
        let z2 = FinGroup::cyclic(2);
        vec![
            Action::discrete(1),
            Action::discrete(2),
            Action::null_of(z2.clone()),
            functor_fi(&z2),
            swap_act(),
            functor_f(&GroupPair {
                group: FinGroup::cyclic(4),
                sub: Subgroup { members: vec![0, 2] },
            }),
        ]
    }

    #[test]
    fn kernels_and_normal_subactions() {
        let act = Act { max_points: 3, max_group: 4 };
        let a = swap_act();
        // identity: kernel is the basepoint with its stabiliser
        let k = act.kernel(&act.identity(&a));
        assert_eq!(k.fprime, vec![0]);
        assert_eq!(k.fsecond, vec![0, 1]); // both operators fix the basepoint
        // a morphism to the zero action has the whole object as kernel
        let z = ActMap::new(a.clone(), Action::discrete(1), vec![0, 0, 0], vec![0, 0]).unwrap();
        assert_eq!(act.kernel(&z).fprime, vec![0, 1, 2]);
        // {0, a} is not normal: the swap links nothing in it but moves a out?
        // the swap links 1 to 2, so it links no two points of {0,1}; but 1
        // links 0 to 0 while 1 + swap = 2 escapes
        let (ok, _) = is_normal_subaction(&a, &[0, 1]);
        assert!(!ok);
        assert!(is_normal_subaction(&a, &[0]).0);
        assert!(is_normal_subaction(&a, &[0, 1, 2]).0);
        // a carrier-injective morphism out of the swap action has trivial
        // carrier kernel but full stabiliser
        let id = act.identity(&a);
        let k2 = act.kernel(&id);
        assert_eq!(k2.fprime, vec![0]);
    }

    #[test]
    fn kernel_of_injective_map_keeps_fix() {
        // any f with trivial carrier kernel out of the swap action: the
        // operator part of the kernel is the full stabiliser of the basepoint
        let act = Act { max_points: 3, max_group: 2 };
        let a = swap_act();
        for f in act.hom(&a, &a) {
            if (0..3).filter(|&x| f.fprime[x] == 0).count() == 1 {
                let k = act.kernel(&f);
                assert_eq!(k.fsecond, a.fix(0).members);
            }
        }
    }

    #[test]
    fn factorisation_matches_explicit_description() {
        let act = Act { max_points: 4, max_group: 4 };
        // the canonical map from a group acting on itself into an action:
        // kernel is the stabiliser pair, image is the base orbit, cokernel
        // collapses that orbit
        let a = functor_f(&GroupPair {
            group: FinGroup::cyclic(4),
            sub: Subgroup { members: vec![0, 2] },
        });
        let f = ActMap::new(
            functor_fi(&a.group),
            a.clone(),
            (0..4).map(|s| a.act[0][s]).collect(),
            (0..4).collect(),
        )
        .unwrap();
        let nf = crate::cat::normal_factorise(&act, &f).unwrap();
        assert_eq!(nf.ker.fprime, vec![0, 2]); // the stabiliser {0,2} inside |Z/4|
        assert_eq!(nf.nim.fprime, vec![0, 1]); // the whole base orbit
        assert!(crate::cat::is_exact(&act, &f));
        // a null morphism has a minimal image: the basepoint with its fix
        let z = ActMap::new(a.clone(), a.clone(), vec![0, 0], vec![0, 0, 0, 0]).unwrap();
        assert_eq!(crate::cat::nim(&act, &z).fprime, vec![0]);
    }

    #[test]
    fn factorisation_against_universal_property_oracle() {
        // the normal image is the least normal subobject through which the
        // morphism factors
        let act = Act { max_points: 3, max_group: 2 };
        let outer = small_acts();
        for a in &outer {
            for b in &outer {
                for f in act.hom(a, b) {
                    let nim = crate::cat::nim(&act, &f);
                    for m in act.nsb(b) {
                        let factors = act.lift_through_mono(&f, &m).is_some();
                        assert_eq!(
                            factors,
                            act.nsb_leq(&nim, &m),
                            "factorisation through {:?}",
                            m.fprime
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn act_passes_axiom_audits() {
        let act = Act { max_points: 3, max_group: 2 };
        let outer = small_acts();
        for r in audit_all(&act, &outer, &outer) {
            assert_eq!(r.status, AuditStatus::Pass, "{r:?}");
        }
    }

    #[test]
    fn orbit_functor_and_adjunction() {
        let (v, proj) = functor_v(&swap_act());
        assert_eq!(v.size, 2);
        assert_eq!(proj, vec![0, 1, 1]);
        // a transitive action has a single orbit
        let t = functor_fi(&FinGroup::cyclic(3));
        assert_eq!(functor_v(&t).0.size, 1);
        // round trip on pointed sets
        for n in 1..4 {
            let z = PointedSet { size: n };
            assert_eq!(functor_v(&functor_u(&z)).0, z);
        }
        // hom bijection: maps out of an action into a discrete one
        // correspond to pointed maps out of the orbit set
        let act = Act { max_points: 3, max_group: 2 };
        let spt = SetPt { max_size: 3 };
        for a in small_acts() {
            for n in 1..4 {
                let z = PointedSet { size: n };
                let lhs = act.hom(&a, &functor_u(&z)).len();
                let rhs = spt.hom(&functor_v(&a).0, &z).len();
                assert_eq!(lhs, rhs, "{a:?} vs {n}");
            }
        }
        // the orbit functor preserves cokernels (it is a left adjoint)
        let outer = small_acts();
        let r = check_functor_exactness(&act, &spt, &functor_v_map, ExactnessMode::Right, &outer);
        assert_eq!(r.status, AuditStatus::Pass, "{r:?}");
        // it preserves kernels on actions of null groups, where it is an
        // equivalence
        let discrete: Vec<Action> = (1..4).map(Action::discrete).collect();
        let r = check_functor_exactness(&act, &spt, &functor_v_map, ExactnessMode::Exact, &discrete);
        assert_eq!(r.status, AuditStatus::Pass, "{r:?}");
        // but not in general: mapping the two-point trivial action onto the
        // carrier of the regular Z/2 action has kernel {0}, while the orbit
        // map collapses the codomain to a point and so has full kernel
        let z2 = FinGroup::cyclic(2);
        let g = ActMap::new(
            Action::discrete(2),
            functor_fi(&z2),
            vec![0, 1],
            vec![0],
        )
        .unwrap();
        let vk = functor_v_map(&act.kernel(&g));
        assert_eq!(vk.dom.size, 1);
        assert_eq!(spt.kernel(&functor_v_map(&g)).dom.size, 2);
    }

    #[test]
    fn coset_functor_and_retraction() {
        let z4 = FinGroup::cyclic(4);
        let p = GroupPair { group: z4.clone(), sub: Subgroup { members: vec![0, 2] } };
        let a = functor_f(&p);
        assert_eq!(a.points, 2);
        assert_eq!(a.act[0], vec![0, 1, 0, 1]); // Z/4 acting through Z/2
        assert_eq!(functor_g(&a), p); // GF = 1
        // GF = 1 on a catalog of pairs
        let c = crate::gp2::Gp2 { max_group: 4 };
        for q in c.objects() {
            assert_eq!(functor_g(&functor_f(&q)), q);
        }
        // counit is an isomorphism exactly on transitive actions
        let act = Act { max_points: 4, max_group: 4 };
        for a in act.objects() {
            let eps = counit(&act, &a);
            let transitive = a.orbit(0).len() == a.points;
            assert_eq!(act.is_iso(&eps), transitive, "{a:?}");
        }
        // adjunction bijection by counting
        for q in [p.clone(), GroupPair { group: z4.clone(), sub: Subgroup::trivial() }] {
            for b in small_acts() {
                let lhs = act.hom(&functor_f(&q), &b).len();
                let rhs = c
                    .hom(&q, &functor_g(&b))
                    .len();
                assert_eq!(lhs, rhs, "{q:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn operator_functor_is_short_exact_not_exact() {
        // the operator-pair functor preserves short exact sequences and
        // kernels, but not cokernels in general
        let act = Act { max_points: 3, max_group: 2 };
        let c = crate::gp2::Gp2 { max_group: 4 };
        let outer = small_acts();
        for mode in [ExactnessMode::Left, ExactnessMode::Short] {
            let r = check_functor_exactness(&act, &c, &functor_g_map, mode, &outer);
            assert_eq!(r.status, AuditStatus::Pass, "{mode:?}: {r:?}");
        }
        let r = check_functor_exactness(&act, &c, &functor_g_map, ExactnessMode::Right, &outer);
        assert_eq!(r.status, AuditStatus::Fail, "{r:?}");
    }

    #[test]
    fn embedded_group_sequences_exact_iff_classical() {
        let act = Act { max_points: 6, max_group: 6 };
        let g = crate::gp2::Gp { max_group: 6 };
        let z4 = FinGroup::cyclic(4);
        let z2 = FinGroup::cyclic(2);
        for u in g.hom(&z2, &z4) {
            for v in g.hom(&z4, &z2) {
                let classical = {
                    let mut im: Vec<usize> = u.map.clone();
                    im.sort_unstable();
                    im.dedup();
                    let ker: Vec<usize> = (0..4).filter(|&x| v.map[x] == 0).collect();
                    im == ker
                };
                let cat = crate::cat::is_exact_at(&act, &functor_fi_map(&u), &functor_fi_map(&v));
                assert_eq!(classical, cat);
            }
        }
    }

    #[test]
    fn mixed_sequence_clauses() {
        let act = Act { max_points: 4, max_group: 4 };
        let z2 = FinGroup::cyclic(2);
        let z4 = FinGroup::cyclic(4);
        let a = functor_f(&GroupPair { group: z4.clone(), sub: Subgroup { members: vec![0, 2] } });
        // u: Z/2 -> Z/4 doubling; v: Z/4 -> Z/4 identity; g collapses the
        // base orbit (which is everything here), h arbitrary
        let seq = MixedSequence {
            u: GroupHom { dom: z2.clone(), cod: z4.clone(), map: vec![0, 2] },
            v: GroupHom { dom: z4.clone(), cod: z4.clone(), map: (0..4).collect() },
            action: a.clone(),
            g: PtMap {
                dom: PointedSet { size: a.points },
                cod: PointedSet { size: 1 },
                map: vec![0; a.points],
            },
            h: PtMap { dom: PointedSet { size: 1 }, cod: PointedSet { size: 2 }, map: vec![0] },
        };
        let rep = mixed_sequence_exactness(&act, &seq).unwrap();
        assert!(rep.f_exact);
        assert!(rep.g_right_modular);
        // v is the identity, so its image is all of Z/4, while the basepoint
        // stabiliser of the coset action is {0,2}: not exact at S
        assert!(!rep.exact_at_s);
        assert_eq!(a.fix(0).members, vec![0, 2]);
        // with a non-transitive action the same f has a nontrivial cokernel
        let b = swap_act();
        let seq2 = MixedSequence {
            u: GroupHom { dom: z2.clone(), cod: z2.clone(), map: vec![0, 1] },
            v: GroupHom { dom: z2.clone(), cod: z2.clone(), map: vec![0, 0] },
            action: b.clone(),
            g: PtMap {
                dom: PointedSet { size: 3 },
                cod: PointedSet { size: 2 },
                map: vec![0, 1, 1],
            },
            h: PtMap { dom: PointedSet { size: 2 }, cod: PointedSet { size: 2 }, map: vec![0, 0] },
        };
        let rep2 = mixed_sequence_exactness(&act, &seq2).unwrap();
        assert!(rep2.f_exact);
        assert!(rep2.g_right_modular);
        assert!(rep2.exact_at_x); // orbit of 0 is {0} = g⁻¹{0}
        assert!(rep2.exact_at_y); // g(X) = {0,1} = h⁻¹{0}
        assert!(rep2.classical_at_x); // g identifies exactly the two orbits
        // a non-orbit-constant g is rejected
        let bad = MixedSequence {
            g: PtMap {
                dom: PointedSet { size: 3 },
                cod: PointedSet { size: 3 },
                map: vec![0, 1, 2],
            },
            ..seq2
        };
        assert!(mixed_sequence_exactness(&act, &bad).is_err());
    }
}
