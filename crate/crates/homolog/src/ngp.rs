//! Quasi-homomorphisms between group pairs (the category `Q`), the
//! congruence `R` identifying maps that agree up to the distinguished
//! subgroup, the resulting quotient category of normalised groups, inversion
//! of surjections with saturated kernel, and the embeddings of plain groups
//! and group pairs into the quotient.

use crate::cat::Semiexact;
use crate::finite::{span, FinGroup, Subgroup};
use crate::gp2::{pair_inclusion, Gp2, GroupHom, GroupPair, PairMap};
use crate::HomologError;

/// A set map between group pairs that sends additive combinations landing in
/// the distinguished subgroup to combinations landing in the target one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiMap {
    pub dom: GroupPair,
    pub cod: GroupPair,
    pub map: Vec<usize>,
}

/// The two-variable condition: f(S₀) ⊆ T₀ and f(s + εs′) − εfs′ − fs ∈ T₀
/// for all s, s′ and ε = ±1.
pub fn is_quasi_hom(map: &[usize], dom: &GroupPair, cod: &GroupPair) -> bool {
    let s = &dom.group;
    let t = &cod.group;
    if map.len() != s.size || map.iter().any(|&y| y >= t.size) {
        return false;
    }
    if dom.sub.members.iter().any(|&x| !cod.sub.contains(map[x])) {
        return false;
    }
    for a in 0..s.size {
        for b in 0..s.size {
            for signed in [b, s.neg(b)] {
                // f(a + εb) − εf(b) − f(a)
                let lhs = map[s.add(a, signed)];
                let eps_fb = if signed == b { t.neg(map[b]) } else { map[b] };
                let val = t.add(t.add(lhs, eps_fb), t.neg(map[a]));
                if !cod.sub.contains(val) {
                    return false;
                }
            }
        }
    }
    true
}

/// The mirror condition −f(εs + s′) + εfs + fs′ ∈ T₀; equivalent to the main
/// one, kept as an audit.
pub fn is_quasi_hom_mirror(map: &[usize], dom: &GroupPair, cod: &GroupPair) -> bool {
    let s = &dom.group;
    let t = &cod.group;
    if map.len() != s.size || map.iter().any(|&y| y >= t.size) {
        return false;
    }
    if dom.sub.members.iter().any(|&x| !cod.sub.contains(map[x])) {
        return false;
    }
    for a in 0..s.size {
        for b in 0..s.size {
            for signed in [a, s.neg(a)] {
                // −f(εa + b) + εf(a) + f(b)
                let lhs = t.neg(map[s.add(signed, b)]);
                let eps_fa = if signed == a { map[a] } else { t.neg(map[a]) };
                let val = t.add(t.add(lhs, eps_fa), map[b]);
                if !cod.sub.contains(val) {
                    return false;
                }
            }
        }
    }
    true
}

impl QuasiMap {
    pub fn new(dom: GroupPair, cod: GroupPair, map: Vec<usize>) -> Result<QuasiMap, HomologError> {
        if !is_quasi_hom(&map, &dom, &cod) {
            return Err(HomologError::Invalid("not a quasi-homomorphism".into()));
        }
        debug_assert!(is_quasi_hom_mirror(&map, &dom, &cod));
        Ok(QuasiMap { dom, cod, map })
    }

    /// Every morphism of group pairs is a quasi-homomorphism.
    pub fn from_pair_map(f: &PairMap) -> QuasiMap {
        QuasiMap { dom: f.dom.clone(), cod: f.cod.clone(), map: f.map.clone() }
    }
}

/// f R g: fs − gs lies in the target distinguished subgroup for every s.
/// The mirror form −fs + gs and the additive-combination form are audited in
/// debug builds; all three are equivalent for quasi-homomorphisms.
pub fn r_equivalent(f: &QuasiMap, g: &QuasiMap) -> bool {
    assert_eq!((&f.dom, &f.cod), (&g.dom, &g.cod), "r_equivalent needs parallel maps");
    let t = &f.cod.group;
    let t0 = &f.cod.sub;
    let a = (0..f.map.len()).all(|s| t0.contains(t.add(f.map[s], t.neg(g.map[s]))));
    debug_assert_eq!(
        a,
        (0..f.map.len()).all(|s| t0.contains(t.add(t.neg(f.map[s]), g.map[s])))
    );
    debug_assert_eq!(a, r_combinations_agree(f, g));
    a
}

fn r_combinations_agree(f: &QuasiMap, g: &QuasiMap) -> bool {
    // length-two additive combinations: Σεᵢfsᵢ − Σεᵢgsᵢ ∈ T₀
    let s = &f.dom.group;
    let t = &f.cod.group;
    let t0 = &f.cod.sub;
    let comb = |m: &[usize], x: usize, ex: bool, y: usize, ey: bool| {
        let a = if ex { m[x] } else { t.neg(m[x]) };
        let b = if ey { m[y] } else { t.neg(m[y]) };
        t.add(a, b)
    };
    for x in 0..s.size {
        for y in 0..s.size {
            for ex in [true, false] {
                for ey in [true, false] {
                    let cf = comb(&f.map, x, ex, y, ey);
                    let cg = comb(&g.map, x, ex, y, ey);
                    if !t0.contains(t.add(cf, t.neg(cg))) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// The category Q of group pairs and quasi-homomorphisms
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Q {
    pub max_group: usize,
}

fn preimage_subgroup(f: &QuasiMap) -> Subgroup {
    // f⁻¹T₀ is a subgroup for any quasi-homomorphism
    let members: Vec<usize> =
        (0..f.dom.group.size).filter(|&x| f.cod.sub.contains(f.map[x])).collect();
    Subgroup { members }
}

impl Semiexact for Q {
    type Obj = GroupPair;
    type Mor = QuasiMap;

    fn name(&self) -> &'static str {
        "q"
    }
    fn dom(&self, f: &QuasiMap) -> GroupPair {
        f.dom.clone()
    }
    fn cod(&self, f: &QuasiMap) -> GroupPair {
        f.cod.clone()
    }
    fn identity(&self, a: &GroupPair) -> QuasiMap {
        QuasiMap { dom: a.clone(), cod: a.clone(), map: (0..a.group.size).collect() }
    }
    fn compose(&self, g: &QuasiMap, f: &QuasiMap) -> QuasiMap {
        debug_assert_eq!(f.cod, g.dom);
        QuasiMap {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            map: f.map.iter().map(|&x| g.map[x]).collect(),
        }
    }
    fn is_null(&self, f: &QuasiMap) -> bool {
        f.map.iter().all(|&y| f.cod.sub.contains(y))
    }
    fn kernel(&self, f: &QuasiMap) -> QuasiMap {
        QuasiMap::from_pair_map(&pair_inclusion(&f.dom, &preimage_subgroup(f)))
    }
    fn cokernel(&self, f: &QuasiMap) -> QuasiMap {
        let mut gens = f.cod.sub.members.clone();
        gens.extend(f.map.iter().copied());
        let sub = span(&f.cod.group, &gens).expect("elements in range");
        QuasiMap {
            dom: f.cod.clone(),
            cod: GroupPair { group: f.cod.group.clone(), sub },
            map: (0..f.cod.group.size).collect(),
        }
    }
    fn is_iso(&self, f: &QuasiMap) -> bool {
        self.inverse(f).is_some()
    }
    fn inverse(&self, f: &QuasiMap) -> Option<QuasiMap> {
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
        is_quasi_hom(&inv, &f.cod, &f.dom)
            .then(|| QuasiMap { dom: f.cod.clone(), cod: f.dom.clone(), map: inv })
    }
    fn lift_through_mono(&self, f: &QuasiMap, m: &QuasiMap) -> Option<QuasiMap> {
        let mut back = vec![usize::MAX; m.cod.group.size];
        for (x, &y) in m.map.iter().enumerate() {
            back[y] = x;
        }
        let map: Option<Vec<usize>> =
            f.map.iter().map(|&y| (back[y] != usize::MAX).then_some(back[y])).collect();
        let map = map?;
        is_quasi_hom(&map, &f.dom, &m.dom)
            .then(|| QuasiMap { dom: f.dom.clone(), cod: m.dom.clone(), map })
    }
    fn descend_through_epi(&self, f: &QuasiMap, p: &QuasiMap) -> Option<QuasiMap> {
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
        is_quasi_hom(&map, &p.cod, &f.cod)
            .then(|| QuasiMap { dom: p.cod.clone(), cod: f.cod.clone(), map })
    }
    fn objects(&self) -> Vec<GroupPair> {
        Gp2 { max_group: self.max_group }.objects()
    }
    fn hom(&self, a: &GroupPair, b: &GroupPair) -> Vec<QuasiMap> {
        let mut out = Vec::new();
        let mut map = vec![0usize; a.group.size];
        loop {
            if is_quasi_hom(&map, a, b) {
                out.push(QuasiMap { dom: a.clone(), cod: b.clone(), map: map.clone() });
            }
            // odometer over all set maps |S| -> |T|
            let mut i = 0;
            loop {
                if i == map.len() {
                    return out;
                }
                map[i] += 1;
                if map[i] < b.group.size {
                    break;
                }
                map[i] = 0;
                i += 1;
            }
        }
    }
    fn nsb(&self, a: &GroupPair) -> Vec<QuasiMap> {
        Gp2 { max_group: self.max_group }
            .nsb(a)
            .iter()
            .map(QuasiMap::from_pair_map)
            .collect()
    }
    fn nsb_leq(&self, x: &QuasiMap, y: &QuasiMap) -> bool {
        x.map.iter().all(|v| y.map.binary_search(v).is_ok())
    }
}

// ---------------------------------------------------------------------------
// The quotient modulo R: normalised groups
// ---------------------------------------------------------------------------

/// Quotient of `Q` modulo `R`. Morphisms are stored as the lexicographically
/// least quasi-homomorphism of their class, so structural equality is
/// R-equality.
#[derive(Clone, Debug)]
pub struct Ngp {
    pub max_group: usize,
}

impl Ngp {
    fn q(&self) -> Q {
        Q { max_group: self.max_group }
    }

    fn class_search(
        &self,
        dom: &GroupPair,
        cod: &GroupPair,
        base: &[usize],
        pred: impl FnMut(&QuasiMap) -> bool,
    ) -> Option<QuasiMap> {
        quasi_class_search(dom, cod, base, pred)
    }

    /// Least representative of the class of `f`.
    pub fn canonical(&self, f: &QuasiMap) -> QuasiMap {
        self.class_search(&f.dom, &f.cod, &f.map, |_| true)
            .expect("class of a quasi-homomorphism cannot be empty")
    }
}

/// Lexicographically least quasi-homomorphism whose value at each point lies
/// in the distinguished coset of `base[i]` (in `cod`) and which satisfies
/// `pred`. The class of a quasi-homomorphism consists exactly of such
/// pointwise perturbations, so with a trivial predicate this finds the
/// canonical representative.
pub(crate) fn quasi_class_search(
    dom: &GroupPair,
    cod: &GroupPair,
    base: &[usize],
    mut pred: impl FnMut(&QuasiMap) -> bool,
) -> Option<QuasiMap> {
    let t = &cod.group;
    let options: Vec<Vec<usize>> = base
        .iter()
        .map(|&y| {
            let mut coset: Vec<usize> = cod.sub.members.iter().map(|&t0| t.add(t0, y)).collect();
            coset.sort_unstable();
            coset.dedup();
            coset
        })
        .collect();
    let mut idx = vec![0usize; options.len()];
    loop {
        let map: Vec<usize> = idx.iter().zip(&options).map(|(&i, o)| o[i]).collect();
        if is_quasi_hom(&map, dom, cod) {
            let cand = QuasiMap { dom: dom.clone(), cod: cod.clone(), map };
            if pred(&cand) {
                return Some(cand);
            }
        }
        let mut i = idx.len();
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < options[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

impl Semiexact for Ngp {
    type Obj = GroupPair;
    type Mor = QuasiMap;

    fn name(&self) -> &'static str {
        "ngp"
    }
    fn dom(&self, f: &QuasiMap) -> GroupPair {
        f.dom.clone()
    }
    fn cod(&self, f: &QuasiMap) -> GroupPair {
        f.cod.clone()
    }
    fn identity(&self, a: &GroupPair) -> QuasiMap {
        self.canonical(&self.q().identity(a))
    }
    fn compose(&self, g: &QuasiMap, f: &QuasiMap) -> QuasiMap {
        self.canonical(&self.q().compose(g, f))
    }
    fn is_null(&self, f: &QuasiMap) -> bool {
        self.q().is_null(f)
    }
    fn kernel(&self, f: &QuasiMap) -> QuasiMap {
        self.canonical(&self.q().kernel(f))
    }
    fn cokernel(&self, f: &QuasiMap) -> QuasiMap {
        self.canonical(&self.q().cokernel(f))
    }
    fn is_iso(&self, f: &QuasiMap) -> bool {
        self.inverse(f).is_some()
    }
    fn inverse(&self, f: &QuasiMap) -> Option<QuasiMap> {
        // candidate: least preimage of each target coset; any inverse class
        // contains a pointwise coset perturbation of this candidate
        let s = &f.dom.group;
        let t = &f.cod.group;
        let t0 = &f.cod.sub;
        let base: Option<Vec<usize>> = (0..t.size)
            .map(|y| (0..s.size).find(|&x| t0.contains(t.add(f.map[x], t.neg(y)))))
            .collect();
        let base = base?;
        let id_dom = self.identity(&f.dom);
        let id_cod = self.identity(&f.cod);
        self.class_search(&f.cod, &f.dom, &base, |cand| {
            self.compose(cand, f) == id_dom && self.compose(f, cand) == id_cod
        })
    }
    fn lift_through_mono(&self, f: &QuasiMap, m: &QuasiMap) -> Option<QuasiMap> {
        // m is a class of a pair inclusion; recover the subgroup, move each
        // value inside it within its distinguished coset, and search the
        // class of the pulled-back map for a quasi-homomorphism
        let sub = classified_subgroup(m);
        let mono_pair = pair_inclusion(&m.cod, &sub);
        let t = &f.cod.group;
        let mut back = vec![usize::MAX; m.cod.group.size];
        for (i, &v) in mono_pair.map.iter().enumerate() {
            back[v] = i;
        }
        let base: Option<Vec<usize>> = f
            .map
            .iter()
            .map(|&y| {
                f.cod
                    .sub
                    .members
                    .iter()
                    .map(|&t0| t.add(t0, y))
                    .find(|&v| sub.contains(v))
                    .map(|v| back[v])
            })
            .collect();
        // any representative landing in the subgroup stays R-equivalent to f
        self.class_search(&f.dom, &mono_pair.dom, &base?, |_| true)
    }
    fn descend_through_epi(&self, f: &QuasiMap, p: &QuasiMap) -> Option<QuasiMap> {
        // pick, for each element downstairs, the f-value at any point whose
        // image lies in its distinguished coset, then search that class
        let t = &p.cod.group;
        let base: Option<Vec<usize>> = (0..t.size)
            .map(|y| {
                (0..p.dom.group.size)
                    .find(|&x| p.cod.sub.contains(t.add(y, t.neg(p.map[x]))))
                    .map(|x| f.map[x])
            })
            .collect();
        let q = self.q();
        self.class_search(&p.cod, &f.cod, &base?, |cand| {
            r_equivalent(&q.compose(cand, p), f)
        })
    }
    fn objects(&self) -> Vec<GroupPair> {
        self.q().objects()
    }
    fn hom(&self, a: &GroupPair, b: &GroupPair) -> Vec<QuasiMap> {
        let mut classes: Vec<QuasiMap> = Vec::new();
        for f in self.q().hom(a, b) {
            match classes.iter_mut().find(|g| r_equivalent(&f, g)) {
                Some(g) => {
                    if f.map < g.map {
                        g.map = f.map;
                    }
                }
                None => classes.push(f),
            }
        }
        classes
    }
    fn nsb(&self, a: &GroupPair) -> Vec<QuasiMap> {
        self.q().nsb(a).iter().map(|m| self.canonical(m)).collect()
    }
    fn nsb_leq(&self, x: &QuasiMap, y: &QuasiMap) -> bool {
        let sx = classified_subgroup(x);
        let sy = classified_subgroup(y);
        sx.members.iter().all(|v| sy.contains(*v))
    }
}

/// The subgroup a class of a canonical mono stands for: representatives move
/// each member inside its T₀-coset, so spanning the image together with the
/// distinguished subgroup recovers it.
fn classified_subgroup(m: &QuasiMap) -> Subgroup {
    let mut gens = m.cod.sub.members.clone();
    gens.extend(m.map.iter().copied());
    span(&m.cod.group, &gens).expect("elements in range")
}

// ---------------------------------------------------------------------------
// Σ and its inversion; the embeddings
// ---------------------------------------------------------------------------

/// Σ-membership: surjective on carriers and the distinguished subgroup is the
/// full preimage of the target one.
pub fn in_sigma(p: &PairMap) -> bool {
    let mut hit = vec![false; p.cod.group.size];
    for &y in &p.map {
        hit[y] = true;
    }
    let saturated = (0..p.dom.group.size)
        .all(|x| p.dom.sub.contains(x) == p.cod.sub.contains(p.map[x]));
    hit.iter().all(|&h| h) && saturated
}

/// Two-sided inverse of a Σ-map in the quotient: the least-representative
/// section, as a quasi-homomorphism.
pub fn sigma_invert(ngp: &Ngp, p: &PairMap) -> Result<QuasiMap, HomologError> {
    if !in_sigma(p) {
        return Err(HomologError::Operation(
            "not invertible: either not surjective or the subgroup is not the full preimage"
                .into(),
        ));
    }
    let map: Vec<usize> = (0..p.cod.group.size)
        .map(|y| p.map.iter().position(|&v| v == y).expect("surjective"))
        .collect();
    let j = QuasiMap::new(p.cod.clone(), p.dom.clone(), map)?;
    let fp = QuasiMap::from_pair_map(p);
    debug_assert_eq!(ngp.compose(&j, &fp), ngp.identity(&p.dom));
    debug_assert_eq!(ngp.compose(&fp, &j), ngp.identity(&p.cod));
    Ok(ngp.canonical(&j))
}

/// The projection functor on morphisms: a group-pair map, as a class.
pub fn functor_p(ngp: &Ngp, f: &PairMap) -> QuasiMap {
    ngp.canonical(&QuasiMap::from_pair_map(f))
}

/// The embedding of plain groups, composite of pairing-with-zero and the
/// projection.
pub fn functor_j_obj(g: &FinGroup) -> GroupPair {
    crate::gp2::functor_i_obj(g)
}

pub fn functor_j(ngp: &Ngp, f: &GroupHom) -> QuasiMap {
    functor_p(ngp, &crate::gp2::functor_i(f))
}
