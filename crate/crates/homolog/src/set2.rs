//! Pairs of sets (X, X₀) with X₀ ⊆ X, and pair maps f with f(X₀) ⊆ Y₀.
//! A map is null when its whole image lands in the distinguished part of the
//! codomain. Kernels enlarge nothing: ker f = (f⁻¹(Y₀), X₀) included in X;
//! cokernels keep the carrier and enlarge the distinguished part to Y₀ ∪ f(X).

use serde::{Deserialize, Serialize};

use crate::cat::Semiexact;
use crate::HomologError;

/// A pair of sets in canonical form: carrier `0..size`, `base` sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetPair {
    pub size: usize,
    pub base: Vec<usize>,
}

impl SetPair {
    pub fn new(size: usize, mut base: Vec<usize>) -> Result<SetPair, HomologError> {
        base.sort_unstable();
        base.dedup();
        if base.iter().any(|&x| x >= size) {
            return Err(HomologError::Invalid("distinguished part exceeds carrier".into()));
        }
        Ok(SetPair { size, base })
    }

    pub fn in_base(&self, x: usize) -> bool {
        self.base.binary_search(&x).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetPairMap {
    pub dom: SetPair,
    pub cod: SetPair,
    pub map: Vec<usize>,
}

impl SetPairMap {
    pub fn new(dom: SetPair, cod: SetPair, map: Vec<usize>) -> Result<SetPairMap, HomologError> {
        if map.len() != dom.size || map.iter().any(|&y| y >= cod.size) {
            return Err(HomologError::Invalid("map table has wrong shape".into()));
        }
        if dom.base.iter().any(|&x| !cod.in_base(map[x])) {
            return Err(HomologError::Invalid(
                "map does not send distinguished part into distinguished part".into(),
            ));
        }
        Ok(SetPairMap { dom, cod, map })
    }
}

/// The category of set pairs, with objects enumerated up to `max_size`.
pub struct Set2 {
    pub max_size: usize,
}

/// The canonical inclusion of the subset `members` (which must contain the
/// base) as a normal subobject of `a`.
fn inclusion(a: &SetPair, members: &[usize]) -> SetPairMap {
    let base = a
        .base
        .iter()
        .map(|b| members.binary_search(b).expect("base inside subobject"))
        .collect();
    SetPairMap {
        dom: SetPair { size: members.len(), base },
        cod: a.clone(),
        map: members.to_vec(),
    }
}

impl Semiexact for Set2 {
    type Obj = SetPair;
    type Mor = SetPairMap;

    fn name(&self) -> &'static str {
        "set2"
    }
    fn dom(&self, f: &SetPairMap) -> SetPair {
        f.dom.clone()
    }
    fn cod(&self, f: &SetPairMap) -> SetPair {
        f.cod.clone()
    }
    fn identity(&self, a: &SetPair) -> SetPairMap {
        SetPairMap { dom: a.clone(), cod: a.clone(), map: (0..a.size).collect() }
    }
    fn compose(&self, g: &SetPairMap, f: &SetPairMap) -> SetPairMap {
        debug_assert_eq!(f.cod, g.dom);
        SetPairMap {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            map: f.map.iter().map(|&x| g.map[x]).collect(),
        }
    }
    fn is_null(&self, f: &SetPairMap) -> bool {
        f.map.iter().all(|&y| f.cod.in_base(y))
    }
    fn kernel(&self, f: &SetPairMap) -> SetPairMap {
        let members: Vec<usize> =
            (0..f.dom.size).filter(|&x| f.cod.in_base(f.map[x])).collect();
        inclusion(&f.dom, &members)
    }
    fn cokernel(&self, f: &SetPairMap) -> SetPairMap {
        let mut base = f.cod.base.clone();
        base.extend(f.map.iter().copied());
        base.sort_unstable();
        base.dedup();
        SetPairMap {
            dom: f.cod.clone(),
            cod: SetPair { size: f.cod.size, base },
            map: (0..f.cod.size).collect(),
        }
    }
    fn is_iso(&self, f: &SetPairMap) -> bool {
        self.inverse(f).is_some()
    }
    fn inverse(&self, f: &SetPairMap) -> Option<SetPairMap> {
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
        // the inverse must itself respect the distinguished parts
        let cand = SetPairMap { dom: f.cod.clone(), cod: f.dom.clone(), map: inv };
        cand.cod
            .base
            .iter()
            .all(|&x| cand.dom.in_base(f.map[x]))
            .then(|| cand)
            .filter(|c| c.dom.base.iter().all(|&y| c.cod.in_base(c.map[y])))
    }
    fn lift_through_mono(&self, f: &SetPairMap, m: &SetPairMap) -> Option<SetPairMap> {
        let mut back = vec![usize::MAX; m.cod.size];
        for (x, &y) in m.map.iter().enumerate() {
            back[y] = x;
        }
        let map: Option<Vec<usize>> = f
            .map
            .iter()
            .map(|&y| (back[y] != usize::MAX).then_some(back[y]))
            .collect();
        let cand = SetPairMap { dom: f.dom.clone(), cod: m.dom.clone(), map: map? };
        cand.dom
            .base
            .iter()
            .all(|&x| cand.cod.in_base(cand.map[x]))
            .then_some(cand)
    }
    fn descend_through_epi(&self, f: &SetPairMap, p: &SetPairMap) -> Option<SetPairMap> {
        let mut map = vec![usize::MAX; p.cod.size];
        for x in 0..p.dom.size {
            let slot = &mut map[p.map[x]];
            if *slot != usize::MAX && *slot != f.map[x] {
                return None; // not constant on a fibre
            }
            *slot = f.map[x];
        }
        if map.iter().any(|&y| y == usize::MAX) {
            return None; // p not surjective
        }
        let cand = SetPairMap { dom: p.cod.clone(), cod: f.cod.clone(), map };
        cand.dom
            .base
            .iter()
            .all(|&x| cand.cod.in_base(cand.map[x]))
            .then_some(cand)
    }
    fn objects(&self) -> Vec<SetPair> {
        let mut out = Vec::new();
        for n in 0..=self.max_size {
            for mask in 0..(1u32 << n) {
                let base = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                out.push(SetPair { size: n, base });
            }
        }
        out
    }
    fn hom(&self, a: &SetPair, b: &SetPair) -> Vec<SetPairMap> {
        if a.size == 0 {
            return vec![SetPairMap { dom: a.clone(), cod: b.clone(), map: vec![] }];
        }
        if b.size == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        let mut map = vec![0usize; a.size];
        'outer: loop {
            if a.base.iter().all(|&x| b.in_base(map[x])) {
                out.push(SetPairMap { dom: a.clone(), cod: b.clone(), map: map.clone() });
            }
            for slot in map.iter_mut() {
                *slot += 1;
                if *slot < b.size {
                    continue 'outer;
                }
                *slot = 0;
            }
            return out;
        }
    }
    fn nsb(&self, a: &SetPair) -> Vec<SetPairMap> {
        // subsets of the carrier containing the base, in mask order
        let free: Vec<usize> = (0..a.size).filter(|x| !a.in_base(*x)).collect();
        let mut out = Vec::new();
        for mask in 0..(1u32 << free.len()) {
            let mut members = a.base.clone();
            members.extend(free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
            members.sort_unstable();
            out.push(inclusion(a, &members));
        }
        out.sort_by(|x, y| (x.map.len(), &x.map).cmp(&(y.map.len(), &y.map)));
        out
    }
    fn nsb_leq(&self, x: &SetPairMap, y: &SetPairMap) -> bool {
        x.map.iter().all(|v| y.map.binary_search(v).is_ok())
    }
}

// ---------------------------------------------------------------------------
// Monoidal structure and the subobject classifier
// ---------------------------------------------------------------------------

/// Tensor of pairs: carrier X×Y (index x·|Y| + y), distinguished part
/// X×Y₀ ∪ X₀×Y.
pub fn tensor(p: &SetPair, q: &SetPair) -> SetPair {
    let base = (0..p.size)
        .flat_map(|x| (0..q.size).map(move |y| (x, y)))
        .filter(|&(x, y)| p.in_base(x) || q.in_base(y))
        .map(|(x, y)| x * q.size + y)
        .collect();
    SetPair { size: p.size * q.size, base }
}

pub fn tensor_map(c: &Set2, f: &SetPairMap, g: &SetPairMap) -> SetPairMap {
    let _ = c;
    let dom = tensor(&f.dom, &g.dom);
    let cod = tensor(&f.cod, &g.cod);
    let map = (0..f.dom.size)
        .flat_map(|x| (0..g.dom.size).map(move |y| (x, y)))
        .map(|(x, y)| f.map[x] * g.cod.size + g.map[y])
        .collect();
    SetPairMap { dom, cod, map }
}

/// Internal hom: the pair of all pair-maps P → Q with the null maps
/// distinguished, elements indexed by the order of [`Semiexact::hom`].
pub fn internal_hom(c: &Set2, p: &SetPair, q: &SetPair) -> SetPair {
    let maps = c.hom(p, q);
    let base = maps
        .iter()
        .enumerate()
        .filter(|(_, m)| c.is_null(m))
        .map(|(i, _)| i)
        .collect();
    SetPair { size: maps.len(), base }
}

/// The classifier of normal subobjects: t: ({*},{*}) → ({0,1},{1}).
pub fn classifier() -> (SetPairMap, SetPair) {
    let point = SetPair { size: 1, base: vec![0] };
    let omega = SetPair { size: 2, base: vec![1] };
    (SetPairMap { dom: point, cod: omega.clone(), map: vec![1] }, omega)
}

/// The characteristic map of a normal subobject (given as a canonical mono).
pub fn characteristic_map(m: &SetPairMap) -> SetPairMap {
    let (_, omega) = classifier();
    let map = (0..m.cod.size)
        .map(|x| usize::from(m.map.binary_search(&x).is_ok()))
        .collect();
    SetPairMap { dom: m.cod.clone(), cod: omega, map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{self, audit_all, is_normal_mono, normal_factorise, AuditStatus};

    fn pair(size: usize, base: &[usize]) -> SetPair {
        SetPair::new(size, base.to_vec()).unwrap()
    }

    /// Brute-force kernel via the universal property, as an independent oracle.
    fn kernel_oracle(c: &Set2, f: &SetPairMap) -> SetPairMap {
        let candidates = c.nsb(&f.dom);
        candidates
            .iter()
            .filter(|m| c.is_null(&c.compose(f, m)))
            .max_by_key(|m| m.map.len())
            .cloned()
            .unwrap()
    }

    #[test]
    fn factorisation_matches_closed_forms() {
        let c = Set2 { max_size: 3 };
        let a = pair(3, &[0]);
        let b = pair(3, &[0, 1]);
        // f: 0->0, 1->1, 2->1
        let f = SetPairMap::new(a.clone(), b.clone(), vec![0, 1, 1]).unwrap();
        let nf = normal_factorise(&c, &f).unwrap();
        // Ker = (f⁻¹(Y₀), X₀) = ({0,1,2}, {0}) — the whole of a here
        assert_eq!(nf.ker.map, vec![0, 1, 2]);
        // Cok = (Y, Y₀ ∪ f(X)) = ({0,1,2}, {0,1})
        assert_eq!(nf.cok.cod.base, vec![0, 1]);
        assert_eq!(
            c.compose(&nf.nim, &c.compose(&nf.central, &nf.ncm)),
            f
        );
    }

    #[test]
    fn identity_and_null_factorisations() {
        let c = Set2 { max_size: 3 };
        let a = pair(3, &[1]);
        let id = c.identity(&a);
        let nf = normal_factorise(&c, &id).unwrap();
        assert_eq!(nf.ker.map, vec![1]); // Ker = (X₀, X₀)
        assert_eq!(nf.cok.cod.base, vec![0, 1, 2]); // Cok = (X, X)
        assert!(c.is_iso(&nf.central));
        // null map: everything to the distinguished part
        let b = pair(2, &[0]);
        let z = SetPairMap::new(a.clone(), b, vec![0, 0, 0]).unwrap();
        assert!(c.is_null(&z));
        let nf = normal_factorise(&c, &z).unwrap();
        assert_eq!(nf.ker.map, vec![0, 1, 2]); // ker of a null map is the whole object
        assert_eq!(nf.nim.map, vec![0]); // nim is the distinguished part
    }

    #[test]
    fn kernels_match_universal_property_oracle() {
        let c = Set2 { max_size: 3 };
        let objs = c.objects();
        for a in &objs {
            for b in &objs {
                for f in c.hom(a, b) {
                    assert_eq!(c.kernel(&f), kernel_oracle(&c, &f), "f = {f:?}");
                }
            }
        }
    }

    #[test]
    fn exact_iff_injective_and_covers_base() {
        let c = Set2 { max_size: 3 };
        let objs = c.objects();
        for a in &objs {
            for b in &objs {
                for f in c.hom(a, b) {
                    let injective = {
                        let mut seen = vec![false; b.size];
                        f.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
                    };
                    let covers = b.base.iter().all(|y| f.map.contains(y));
                    assert_eq!(cat::is_exact(&c, &f), injective && covers, "f = {f:?}");
                }
            }
        }
    }

    #[test]
    fn axioms_pass_on_small_fragment() {
        let c = Set2 { max_size: 2 };
        let outer = c.objects();
        let probe: Vec<SetPair> = outer.clone();
        for r in audit_all(&c, &outer, &probe) {
            assert_eq!(r.status, AuditStatus::Pass, "{r:?}");
        }
    }

    #[test]
    fn short_exact_sequences_are_triples() {
        // X₀ ⊆ A ⊆ X gives the short exact pair (A,X₀) ↣ (X,X₀) ↠ (X,A)
        let c = Set2 { max_size: 4 };
        let x = pair(4, &[0]);
        let m = inclusion(&x, &[0, 1, 2]);
        let q = SetPairMap::new(x.clone(), pair(4, &[0, 1, 2]), vec![0, 1, 2, 3]).unwrap();
        assert!(cat::is_short_exact(&c, &m, &q));
    }

    #[test]
    fn tensor_and_unit() {
        let c = Set2 { max_size: 3 };
        let unit = pair(1, &[]);
        let p = pair(3, &[1]);
        let t = tensor(&p, &unit);
        assert_eq!(t.size, p.size);
        assert_eq!(t.base, p.base);
        // tensor with a null pair (carrier = base) is null
        let n = pair(2, &[0, 1]);
        let t = tensor(&p, &n);
        assert_eq!(t.base.len(), t.size);
        // tensor of maps is functorial on a sample
        let f = SetPairMap::new(p.clone(), p.clone(), vec![1, 1, 1]).unwrap();
        let g = c.identity(&n);
        let tf = tensor_map(&c, &f, &g);
        assert!(c.is_null(&tf)); // f ⊗ g null since g lands in the base
    }

    #[test]
    fn hom_tensor_adjunction_counts() {
        let c = Set2 { max_size: 3 };
        for p in [pair(2, &[0]), pair(2, &[])] {
            for q in [pair(2, &[1]), pair(1, &[0])] {
                for r in [pair(2, &[0]), pair(2, &[0, 1])] {
                    let lhs = c.hom(&tensor(&p, &q), &r).len();
                    let rhs = c.hom(&p, &internal_hom(&c, &q, &r)).len();
                    assert_eq!(lhs, rhs, "p={p:?} q={q:?} r={r:?}");
                }
            }
        }
    }

    #[test]
    fn classifier_pullbacks() {
        let c = Set2 { max_size: 3 };
        let (t, _omega) = classifier();
        for a in c.objects() {
            for m in c.nsb(&a) {
                assert!(is_normal_mono(&c, &m));
                let chi = characteristic_map(&m);
                // pullback of t along chi: elements with chi(x) = 1 and the base
                let members: Vec<usize> =
                    (0..a.size).filter(|&x| chi.map[x] == t.map[0]).collect();
                assert_eq!(members, m.map);
            }
        }
    }
}
