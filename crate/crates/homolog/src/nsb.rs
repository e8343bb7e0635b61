//! Transfer of normal subobjects along morphisms: direct and inverse images,
//! the induced connection between normal-subobject lattices, pointwise
//! modularity, the perspective quotient, and the nsb-faithful/-full tests for
//! exact functors.

use crate::cat::{nim, nsb_bottom, nsb_join, nsb_lattice, nsb_meet, nsb_top, Semiexact};
use crate::ltc::Connection;
use crate::HomologError;

/// f*(x) = nim(f ∘ x): the normal closure of the image of a normal subobject.
pub fn direct_image<C: Semiexact>(c: &C, f: &C::Mor, x: &C::Mor) -> C::Mor {
    nim(c, &c.compose(f, x))
}

/// f*(y) = ker(cok(y) ∘ f): the inverse image of a normal subobject of the codomain.
pub fn inverse_image<C: Semiexact>(c: &C, f: &C::Mor, y: &C::Mor) -> C::Mor {
    c.kernel(&c.compose(&c.cokernel(y), f))
}

/// The connection Nsb(f): Nsb(dom f) → Nsb(cod f) as an Ltc morphism, with
/// the subobject labels of both lattices.
pub struct NsbConnection<M> {
    pub connection: Connection,
    pub dom_labels: Vec<M>,
    pub cod_labels: Vec<M>,
}

pub fn nsb_connection<C: Semiexact>(c: &C, f: &C::Mor) -> NsbConnection<C::Mor> {
    let a = c.dom(f);
    let b = c.cod(f);
    let (dl, dom_labels) = nsb_lattice(c, &a);
    let (cl, cod_labels) = nsb_lattice(c, &b);
    let index = |labels: &[C::Mor], m: &C::Mor| -> usize {
        labels.iter().position(|x| x == m).expect("image is a canonical normal subobject")
    };
    let lower = dom_labels.iter().map(|x| index(&cod_labels, &direct_image(c, f, x))).collect();
    let upper = cod_labels.iter().map(|y| index(&dom_labels, &inverse_image(c, f, y))).collect();
    let connection =
        Connection::new(dl, cl, lower, upper).expect("direct/inverse images form a connection");
    NsbConnection { connection, dom_labels, cod_labels }
}

/// f*f*(x) = x ∨ f*(0), at the given x.
pub fn is_left_modular_on<C: Semiexact>(c: &C, f: &C::Mor, x: &C::Mor) -> bool {
    let a = c.dom(f);
    let b = c.cod(f);
    let round = inverse_image(c, f, &direct_image(c, f, x));
    round == nsb_join(c, &a, x, &inverse_image(c, f, &nsb_bottom(c, &b)))
}

/// f*f*(y) = y ∧ f*(1), at the given y.
pub fn is_right_modular_on<C: Semiexact>(c: &C, f: &C::Mor, y: &C::Mor) -> bool {
    let a = c.dom(f);
    let b = c.cod(f);
    let round = direct_image(c, f, &inverse_image(c, f, y));
    round == nsb_meet(c, &b, y, &direct_image(c, f, &nsb_top(c, &a)))
}

// ---------------------------------------------------------------------------
// Perspective quotient
// ---------------------------------------------------------------------------

/// The quotient of an ex2 instance identifying parallel morphisms with the
/// same transfer connection. Morphisms are represented by the first member of
/// their class in the underlying hom-set order.
pub struct Psp<C: Semiexact> {
    pub inner: C,
}

impl<C: Semiexact> Psp<C> {
    /// The canonical representative of the class of `f`.
    pub fn canonicalise(&self, f: &C::Mor) -> C::Mor {
        let c = &self.inner;
        let key = nsb_connection(c, f).connection;
        c.hom(&c.dom(f), &c.cod(f))
            .into_iter()
            .find(|g| nsb_connection(c, g).connection == key)
            .expect("f itself belongs to its class")
    }

    pub fn equivalent(&self, f: &C::Mor, g: &C::Mor) -> bool {
        nsb_connection(&self.inner, f).connection == nsb_connection(&self.inner, g).connection
    }
}

impl<C: Semiexact> Semiexact for Psp<C> {
    type Obj = C::Obj;
    type Mor = C::Mor;

    fn name(&self) -> &'static str {
        "psp"
    }
    fn dom(&self, f: &C::Mor) -> C::Obj {
        self.inner.dom(f)
    }
    fn cod(&self, f: &C::Mor) -> C::Obj {
        self.inner.cod(f)
    }
    fn identity(&self, a: &C::Obj) -> C::Mor {
        self.canonicalise(&self.inner.identity(a))
    }
    fn compose(&self, g: &C::Mor, f: &C::Mor) -> C::Mor {
        self.canonicalise(&self.inner.compose(g, f))
    }
    fn is_null(&self, f: &C::Mor) -> bool {
        self.inner.is_null(f)
    }
    fn kernel(&self, f: &C::Mor) -> C::Mor {
        // kernels only depend on the class; keep the canonical mono form
        self.inner.kernel(f)
    }
    fn cokernel(&self, f: &C::Mor) -> C::Mor {
        self.inner.cokernel(f)
    }
    fn is_iso(&self, f: &C::Mor) -> bool {
        // iso in the quotient: some member of the class splits it both ways
        let c = &self.inner;
        let (a, b) = (c.dom(f), c.cod(f));
        c.hom(&b, &a).into_iter().any(|g| {
            self.equivalent(&c.compose(&g, f), &c.identity(&a))
                && self.equivalent(&c.compose(f, &g), &c.identity(&b))
        })
    }
    fn inverse(&self, f: &C::Mor) -> Option<C::Mor> {
        let c = &self.inner;
        let (a, b) = (c.dom(f), c.cod(f));
        c.hom(&b, &a)
            .into_iter()
            .find(|g| {
                self.equivalent(&c.compose(g, f), &c.identity(&a))
                    && self.equivalent(&c.compose(f, g), &c.identity(&b))
            })
            .map(|g| self.canonicalise(&g))
    }
    fn lift_through_mono(&self, f: &C::Mor, m: &C::Mor) -> Option<C::Mor> {
        self.inner.lift_through_mono(f, m).map(|g| self.canonicalise(&g))
    }
    fn descend_through_epi(&self, f: &C::Mor, p: &C::Mor) -> Option<C::Mor> {
        self.inner.descend_through_epi(f, p).map(|g| self.canonicalise(&g))
    }
    fn objects(&self) -> Vec<C::Obj> {
        self.inner.objects()
    }
    fn hom(&self, a: &C::Obj, b: &C::Obj) -> Vec<C::Mor> {
        let mut out: Vec<C::Mor> = Vec::new();
        for f in self.inner.hom(a, b) {
            if !out.iter().any(|g| self.equivalent(g, &f)) {
                out.push(f);
            }
        }
        out
    }
    fn nsb(&self, a: &C::Obj) -> Vec<C::Mor> {
        self.inner.nsb(a)
    }
    fn nsb_leq(&self, x: &C::Mor, y: &C::Mor) -> bool {
        self.inner.nsb_leq(x, y)
    }
}

// ---------------------------------------------------------------------------
// nsb-faithfulness and -fullness of exact functors
// ---------------------------------------------------------------------------

/// Injectivity of every induced lattice homomorphism x ↦ nim(Fx).
pub fn is_nsb_faithful<C: Semiexact, D: Semiexact>(
    c: &C,
    d: &D,
    on_mor: &impl Fn(&C::Mor) -> D::Mor,
    outer: &[C::Obj],
) -> Result<bool, HomologError> {
    for a in outer {
        let subs = c.nsb(a);
        let images: Vec<D::Mor> = subs.iter().map(|x| nim(d, &on_mor(x))).collect();
        for i in 0..images.len() {
            for j in 0..i {
                if images[i] == images[j] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Surjectivity: every normal subobject of F(A) is nim(Fx) for some x.
pub fn is_nsb_full<C: Semiexact, D: Semiexact>(
    c: &C,
    d: &D,
    on_obj: &impl Fn(&C::Obj) -> D::Obj,
    on_mor: &impl Fn(&C::Mor) -> D::Mor,
    outer: &[C::Obj],
) -> Result<bool, HomologError> {
    for a in outer {
        let images: Vec<D::Mor> = c.nsb(a).iter().map(|x| nim(d, &on_mor(x))).collect();
        for y in d.nsb(&on_obj(a)) {
            if !images.contains(&y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Non-generic re-export site: the labelled normal-subobject lattice itself
/// lives in [`crate::cat::nsb_lattice`].
pub use crate::cat::nsb_lattice as labelled_nsb_lattice;
