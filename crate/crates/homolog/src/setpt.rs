//! Pointed sets: carrier `0..size`, basepoint 0, maps fixing the basepoint.
//! A map is null when it is constant at the basepoint. Kernels are basepoint
//! preimages; cokernels collapse the image to the basepoint, with the
//! surviving elements renumbered in increasing order.

use serde::{Deserialize, Serialize};

use crate::cat::Semiexact;
use crate::finite::PointedSet;
use crate::HomologError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PtMap {
    pub dom: PointedSet,
    pub cod: PointedSet,
    pub map: Vec<usize>,
}

impl PtMap {
    pub fn new(dom: PointedSet, cod: PointedSet, map: Vec<usize>) -> Result<PtMap, HomologError> {
        if map.len() != dom.size || map.iter().any(|&y| y >= cod.size) {
            return Err(HomologError::Invalid("map table has wrong shape".into()));
        }
        if map[0] != 0 {
            return Err(HomologError::Invalid("map does not fix the basepoint".into()));
        }
        Ok(PtMap { dom, cod, map })
    }
}

pub struct SetPt {
    pub max_size: usize,
}

/// Canonical inclusion of the sorted subset `members` (which contains 0).
fn inclusion(a: &PointedSet, members: &[usize]) -> PtMap {
    debug_assert_eq!(members.first(), Some(&0));
    PtMap { dom: PointedSet { size: members.len() }, cod: a.clone(), map: members.to_vec() }
}

impl Semiexact for SetPt {
    type Obj = PointedSet;
    type Mor = PtMap;

    fn name(&self) -> &'static str {
        "setpt"
    }
    fn dom(&self, f: &PtMap) -> PointedSet {
        f.dom.clone()
    }
    fn cod(&self, f: &PtMap) -> PointedSet {
        f.cod.clone()
    }
    fn identity(&self, a: &PointedSet) -> PtMap {
        PtMap { dom: a.clone(), cod: a.clone(), map: (0..a.size).collect() }
    }
    fn compose(&self, g: &PtMap, f: &PtMap) -> PtMap {
        debug_assert_eq!(f.cod, g.dom);
        PtMap {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            map: f.map.iter().map(|&x| g.map[x]).collect(),
        }
    }
    fn is_null(&self, f: &PtMap) -> bool {
        f.map.iter().all(|&y| y == 0)
    }
    fn kernel(&self, f: &PtMap) -> PtMap {
        let members: Vec<usize> = (0..f.dom.size).filter(|&x| f.map[x] == 0).collect();
        inclusion(&f.dom, &members)
    }
    fn cokernel(&self, f: &PtMap) -> PtMap {
        let hit: Vec<bool> = {
            let mut h = vec![false; f.cod.size];
            h[0] = true;
            for &y in &f.map {
                h[y] = true;
            }
            h
        };
        let mut map = vec![0usize; f.cod.size];
        let mut next = 1;
        for y in 1..f.cod.size {
            if !hit[y] {
                map[y] = next;
                next += 1;
            }
        }
        PtMap { dom: f.cod.clone(), cod: PointedSet { size: next }, map }
    }
    fn is_iso(&self, f: &PtMap) -> bool {
        self.inverse(f).is_some()
    }
    fn inverse(&self, f: &PtMap) -> Option<PtMap> {
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
        Some(PtMap { dom: f.cod.clone(), cod: f.dom.clone(), map: inv })
    }
    fn lift_through_mono(&self, f: &PtMap, m: &PtMap) -> Option<PtMap> {
        let mut back = vec![usize::MAX; m.cod.size];
        for (x, &y) in m.map.iter().enumerate() {
            back[y] = x;
        }
        let map: Option<Vec<usize>> = f
            .map
            .iter()
            .map(|&y| (back[y] != usize::MAX).then_some(back[y]))
            .collect();
        Some(PtMap { dom: f.dom.clone(), cod: m.dom.clone(), map: map? })
    }
    fn descend_through_epi(&self, f: &PtMap, p: &PtMap) -> Option<PtMap> {
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
        Some(PtMap { dom: p.cod.clone(), cod: f.cod.clone(), map })
    }
    fn objects(&self) -> Vec<PointedSet> {
        (1..=self.max_size).map(|size| PointedSet { size }).collect()
    }
    fn hom(&self, a: &PointedSet, b: &PointedSet) -> Vec<PtMap> {
        let mut out = Vec::new();
        let mut map = vec![0usize; a.size];
        'outer: loop {
            out.push(PtMap { dom: a.clone(), cod: b.clone(), map: map.clone() });
            for slot in map.iter_mut().skip(1) {
                *slot += 1;
                if *slot < b.size {
                    continue 'outer;
                }
                *slot = 0;
            }
            return out;
        }
    }
    fn nsb(&self, a: &PointedSet) -> Vec<PtMap> {
        let mut out = Vec::new();
        for mask in 0..(1u32 << (a.size - 1)) {
            let mut members = vec![0usize];
            members.extend((1..a.size).filter(|&x| mask >> (x - 1) & 1 == 1));
            out.push(inclusion(a, &members));
        }
        out.sort_by(|x, y| (x.map.len(), &x.map).cmp(&(y.map.len(), &y.map)));
        out
    }
    fn nsb_leq(&self, x: &PtMap, y: &PtMap) -> bool {
        x.map.iter().all(|v| y.map.binary_search(v).is_ok())
    }
}
