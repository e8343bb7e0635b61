//! Lattices and covariant Galois connections. A connection X → Y is a pair
//! of increasing maps f• ⊣ f^• with f^•f• ≥ id and f•f^• ≤ id. The null maps
//! are the constant-to-bottom/top pairs; kernels are down-sets ↓f^•(0) and
//! cokernels up-sets ↑f•(1). This category is the shape that the lattices of
//! normal subobjects of any other instance map into.

use serde::{Deserialize, Serialize};

use crate::cat::Semiexact;
use crate::finite::FinLattice;
use crate::HomologError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Connection {
    pub dom: FinLattice,
    pub cod: FinLattice,
    /// f•: dom → cod, the left adjoint (preserves joins and bottom).
    pub lower: Vec<usize>,
    /// f^•: cod → dom, the right adjoint (preserves meets and top).
    pub upper: Vec<usize>,
}

impl Connection {
    pub fn new(
        dom: FinLattice,
        cod: FinLattice,
        lower: Vec<usize>,
        upper: Vec<usize>,
    ) -> Result<Connection, HomologError> {
        if lower.len() != dom.size || lower.iter().any(|&y| y >= cod.size) {
            return Err(HomologError::Invalid("lower map has wrong shape".into()));
        }
        if upper.len() != cod.size || upper.iter().any(|&x| x >= dom.size) {
            return Err(HomologError::Invalid("upper map has wrong shape".into()));
        }
        for x in 0..dom.size {
            for x2 in 0..dom.size {
                if dom.leq[x][x2] && !cod.leq[lower[x]][lower[x2]] {
                    return Err(HomologError::Invalid("lower map is not increasing".into()));
                }
            }
            if !dom.leq[x][upper[lower[x]]] {
                return Err(HomologError::Invalid("unit of the adjunction fails".into()));
            }
        }
        for y in 0..cod.size {
            for y2 in 0..cod.size {
                if cod.leq[y][y2] && !dom.leq[upper[y]][upper[y2]] {
                    return Err(HomologError::Invalid("upper map is not increasing".into()));
                }
            }
            if !cod.leq[lower[upper[y]]][y] {
                return Err(HomologError::Invalid("counit of the adjunction fails".into()));
            }
        }
        Ok(Connection { dom, cod, lower, upper })
    }

    pub fn identity(l: &FinLattice) -> Connection {
        Connection {
            dom: l.clone(),
            cod: l.clone(),
            lower: (0..l.size).collect(),
            upper: (0..l.size).collect(),
        }
    }

    pub fn zero(dom: &FinLattice, cod: &FinLattice) -> Connection {
        Connection {
            dom: dom.clone(),
            cod: cod.clone(),
            lower: vec![cod.bottom; dom.size],
            upper: vec![dom.top; cod.size],
        }
    }

    /// Build a connection from its lower map alone, via upper(y) = max{x | lower(x) ≤ y}.
    pub fn from_lower(
        dom: FinLattice,
        cod: FinLattice,
        lower: Vec<usize>,
    ) -> Result<Connection, HomologError> {
        let upper = (0..cod.size)
            .map(|y| {
                (0..dom.size)
                    .filter(|&x| cod.leq[lower[x]][y])
                    .fold(dom.bottom, |acc, x| dom.join[acc][x])
            })
            .collect();
        Connection::new(dom, cod, lower, upper)
    }

    /// The reversed connection between the opposite lattices (selfduality).
    pub fn reverse(&self) -> Connection {
        Connection {
            dom: opposite(&self.cod),
            cod: opposite(&self.dom),
            lower: self.upper.clone(),
            upper: self.lower.clone(),
        }
    }
}

pub fn opposite(l: &FinLattice) -> FinLattice {
    FinLattice {
        size: l.size,
        leq: (0..l.size).map(|a| (0..l.size).map(|b| l.leq[b][a]).collect()).collect(),
        meet: l.join.clone(),
        join: l.meet.clone(),
        bottom: l.top,
        top: l.bottom,
    }
}

/// The canonical normal mono ↓a → X (inclusion, meet-with-a).
pub fn embed_down(x: &FinLattice, a: usize) -> Connection {
    let (down, elems) = x.down_set(a);
    let upper = (0..x.size)
        .map(|v| elems.binary_search(&x.meet[v][a]).expect("meet lies in the down-set"))
        .collect();
    Connection { dom: down, cod: x.clone(), lower: elems, upper }
}

/// The canonical normal epi X → ↑a (join-with-a, inclusion).
pub fn project_up(x: &FinLattice, a: usize) -> Connection {
    let (up, elems) = x.up_set(a);
    let lower = (0..x.size)
        .map(|v| elems.binary_search(&x.join[v][a]).expect("join lies in the up-set"))
        .collect();
    Connection { dom: x.clone(), cod: up, lower, upper: elems }
}

/// The category of (a bounded catalog of) finite lattices and connections.
pub struct Ltc {
    pub catalog: Vec<FinLattice>,
}

impl Ltc {
    /// Chains up to length 3, the Boolean square and the pentagon.
    pub fn bounded() -> Ltc {
        Ltc {
            catalog: vec![
                FinLattice::chain(1),
                FinLattice::chain(2),
                FinLattice::chain(3),
                FinLattice::boolean2(),
                FinLattice::pentagon(),
            ],
        }
    }
}

impl Semiexact for Ltc {
    type Obj = FinLattice;
    type Mor = Connection;

    fn name(&self) -> &'static str {
        "ltc"
    }
    fn dom(&self, f: &Connection) -> FinLattice {
        f.dom.clone()
    }
    fn cod(&self, f: &Connection) -> FinLattice {
        f.cod.clone()
    }
    fn identity(&self, a: &FinLattice) -> Connection {
        Connection::identity(a)
    }
    fn compose(&self, g: &Connection, f: &Connection) -> Connection {
        debug_assert_eq!(f.cod, g.dom);
        Connection {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            lower: f.lower.iter().map(|&y| g.lower[y]).collect(),
            upper: g.upper.iter().map(|&x| f.upper[x]).collect(),
        }
    }
    fn is_null(&self, f: &Connection) -> bool {
        f.lower.iter().all(|&y| y == f.cod.bottom)
    }
    fn kernel(&self, f: &Connection) -> Connection {
        embed_down(&f.dom, f.upper[f.cod.bottom])
    }
    fn cokernel(&self, f: &Connection) -> Connection {
        project_up(&f.cod, f.lower[f.dom.top])
    }
    fn is_iso(&self, f: &Connection) -> bool {
        f.dom.size == f.cod.size
            && (0..f.dom.size).all(|x| f.upper[f.lower[x]] == x)
            && (0..f.cod.size).all(|y| f.lower[f.upper[y]] == y)
    }
    fn inverse(&self, f: &Connection) -> Option<Connection> {
        self.is_iso(f).then(|| Connection {
            dom: f.cod.clone(),
            cod: f.dom.clone(),
            lower: f.upper.clone(),
            upper: f.lower.clone(),
        })
    }
    fn lift_through_mono(&self, f: &Connection, m: &Connection) -> Option<Connection> {
        let cand = Connection::new(
            f.dom.clone(),
            m.dom.clone(),
            f.lower.iter().map(|&y| m.upper[y]).collect(),
            m.lower.iter().map(|&y| f.upper[y]).collect(),
        )
        .ok()?;
        (self.compose(m, &cand) == *f).then_some(cand)
    }
    fn descend_through_epi(&self, f: &Connection, p: &Connection) -> Option<Connection> {
        let cand = Connection::new(
            p.cod.clone(),
            f.cod.clone(),
            p.upper.iter().map(|&x| f.lower[x]).collect(),
            f.upper.iter().map(|&x| p.lower[x]).collect(),
        )
        .ok()?;
        (self.compose(&cand, p) == *f).then_some(cand)
    }
    fn objects(&self) -> Vec<FinLattice> {
        self.catalog.clone()
    }
    fn hom(&self, a: &FinLattice, b: &FinLattice) -> Vec<Connection> {
        // enumerate the join-preserving lower maps; the upper map is determined
        let mut out = Vec::new();
        let mut lower = vec![0usize; a.size];
        'outer: loop {
            let preserves = lower[a.bottom] == b.bottom
                && (0..a.size).all(|x| {
                    (0..a.size).all(|y| lower[a.join[x][y]] == b.join[lower[x]][lower[y]])
                });
            if preserves {
                out.push(
                    Connection::from_lower(a.clone(), b.clone(), lower.clone())
                        .expect("join-preserving map has a right adjoint"),
                );
            }
            for slot in lower.iter_mut() {
                *slot += 1;
                if *slot < b.size {
                    continue 'outer;
                }
                *slot = 0;
            }
            return out;
        }
    }
    fn nsb(&self, a: &FinLattice) -> Vec<Connection> {
        (0..a.size).map(|k| embed_down(a, k)).collect()
    }
    fn nsb_leq(&self, x: &Connection, y: &Connection) -> bool {
        let kx = x.lower[x.dom.top];
        let ky = y.lower[y.dom.top];
        x.cod.leq[kx][ky]
    }
}

/// Exactness of a connection: f^•f•(x) = x ∨ f^•0 and f•f^•(y) = y ∧ f•1.
pub fn is_exact_connection(f: &Connection) -> bool {
    let k = f.upper[f.cod.bottom];
    let c = f.lower[f.dom.top];
    (0..f.dom.size).all(|x| f.upper[f.lower[x]] == f.dom.join[x][k])
        && (0..f.cod.size).all(|y| f.lower[f.upper[y]] == f.cod.meet[y][c])
}

/// Modular connection: both lattices modular and the composition-stable
/// identities f^•(f•x ∨ y) = x ∨ f^•y and f•(f^•y ∧ x) = y ∧ f•x hold.
pub fn is_modular_connection(f: &Connection) -> Result<bool, HomologError> {
    if !f.dom.is_modular() || !f.cod.is_modular() {
        return Err(HomologError::Operation(
            "modularity of a connection is only defined between modular lattices".into(),
        ));
    }
    let ok = (0..f.dom.size).all(|x| {
        (0..f.cod.size).all(|y| {
            f.upper[f.cod.join[f.lower[x]][y]] == f.dom.join[x][f.upper[y]]
                && f.lower[f.dom.meet[f.upper[y]][x]] == f.cod.meet[y][f.lower[x]]
        })
    });
    Ok(ok)
}

/// The biproduct X × Y with its injections and projections (i, j, p, q).
pub struct Biproduct {
    pub carrier: FinLattice,
    pub i: Connection,
    pub j: Connection,
    pub p: Connection,
    pub q: Connection,
}

pub fn biproduct(x: &FinLattice, y: &FinLattice) -> Biproduct {
    let carrier = FinLattice::product(x, y);
    let idx = |a: usize, b: usize| a * y.size + b;
    let i = Connection {
        dom: x.clone(),
        cod: carrier.clone(),
        lower: (0..x.size).map(|a| idx(a, y.bottom)).collect(),
        upper: (0..carrier.size).map(|v| v / y.size).collect(),
    };
    let p = Connection {
        dom: carrier.clone(),
        cod: x.clone(),
        lower: (0..carrier.size).map(|v| v / y.size).collect(),
        upper: (0..x.size).map(|a| idx(a, y.top)).collect(),
    };
    let j = Connection {
        dom: y.clone(),
        cod: carrier.clone(),
        lower: (0..y.size).map(|b| idx(x.bottom, b)).collect(),
        upper: (0..carrier.size).map(|v| v % y.size).collect(),
    };
    let q = Connection {
        dom: carrier.clone(),
        cod: y.clone(),
        lower: (0..carrier.size).map(|v| v % y.size).collect(),
        upper: (0..y.size).map(|b| idx(x.top, b)).collect(),
    };
    Biproduct { carrier, i, j, p, q }
}

/// The idempotent sum f + g = (f• ∨ g•, f^• ∧ g^•) of parallel connections.
pub fn sum(f: &Connection, g: &Connection) -> Result<Connection, HomologError> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(HomologError::Operation("sum needs parallel connections".into()));
    }
    Connection::new(
        f.dom.clone(),
        f.cod.clone(),
        (0..f.dom.size).map(|x| f.cod.join[f.lower[x]][g.lower[x]]).collect(),
        (0..f.cod.size).map(|y| f.dom.meet[f.upper[y]][g.upper[y]]).collect(),
    )
}
