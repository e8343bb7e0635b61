//! The core abstraction: a category with an assigned ideal of null morphisms,
//! kernels and cokernels relative to that ideal, and audits for the axioms a
//! well-behaved instance must satisfy.
//!
//! Conventions baked into the trait:
//! - morphism values carry their own domain/codomain, and `compose(g, f)`
//!   means "f first, then g";
//! - `kernel` returns the canonical normal monomorphism into the domain,
//!   `cokernel` the canonical normal epimorphism out of the codomain, so two
//!   subobjects are equal exactly when the morphism values are equal;
//! - `objects()` is a bounded catalog used by audits and enumerative tests,
//!   not a claim of exhausting the instance.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::HomologError;

pub trait Semiexact {
    type Obj: Clone + Eq + Hash + Debug;
    type Mor: Clone + Eq + Hash + Debug;

    fn name(&self) -> &'static str;
    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, a: &Self::Obj) -> Self::Mor;
    /// `compose(g, f)` is the composite f-then-g; callers must only pass
    /// composable pairs.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    fn is_null(&self, f: &Self::Mor) -> bool;
    /// Canonical kernel: a normal mono into `dom f`, in canonical form.
    fn kernel(&self, f: &Self::Mor) -> Self::Mor;
    /// Canonical cokernel: a normal epi out of `cod f`, in canonical form.
    fn cokernel(&self, f: &Self::Mor) -> Self::Mor;
    fn is_iso(&self, f: &Self::Mor) -> bool;
    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor>;
    /// Given `f: A -> B` and a mono `m: M -> B`, the unique `g: A -> M` with
    /// `m . g = f`, if `f` lands inside `m`.
    fn lift_through_mono(&self, f: &Self::Mor, m: &Self::Mor) -> Option<Self::Mor>;
    /// Given `f: A -> B` and an epi `p: A -> P`, the unique `g: P -> B` with
    /// `g . p = f`, if `f` is constant on the fibres of `p`.
    fn descend_through_epi(&self, f: &Self::Mor, p: &Self::Mor) -> Option<Self::Mor>;
    /// Bounded object catalog for audits and enumerations.
    fn objects(&self) -> Vec<Self::Obj>;
    fn hom(&self, a: &Self::Obj, b: &Self::Obj) -> Vec<Self::Mor>;
    /// Canonical normal subobjects of `a`, as canonical monos, in a fixed order.
    fn nsb(&self, a: &Self::Obj) -> Vec<Self::Mor>;
    /// Subobject order on canonical normal monos into the same object.
    fn nsb_leq(&self, x: &Self::Mor, y: &Self::Mor) -> bool;
}

/// Normal closure of the image: `ker(cok f)`, a canonical normal mono into `cod f`.
pub fn nim<C: Semiexact>(c: &C, f: &C::Mor) -> C::Mor {
    c.kernel(&c.cokernel(f))
}

/// Normal coimage: `cok(ker f)`, a canonical normal epi out of `dom f`.
pub fn ncm<C: Semiexact>(c: &C, f: &C::Mor) -> C::Mor {
    c.cokernel(&c.kernel(f))
}

/// Least normal subobject of `a` (the null part), as a canonical mono.
pub fn nsb_bottom<C: Semiexact>(c: &C, a: &C::Obj) -> C::Mor {
    c.kernel(&c.identity(a))
}

/// Greatest normal subobject of `a` (the whole of `a`), as a canonical mono.
pub fn nsb_top<C: Semiexact>(c: &C, a: &C::Obj) -> C::Mor {
    nim(c, &c.identity(a))
}

/// The factorisation `f = nim . central . ncm` through normal coimage and
/// normal image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFactorisation<M> {
    pub ker: M,
    pub ncm: M,
    pub central: M,
    pub nim: M,
    pub cok: M,
}

pub fn normal_factorise<C: Semiexact>(
    c: &C,
    f: &C::Mor,
) -> Result<NormalFactorisation<C::Mor>, HomologError> {
    let ker = c.kernel(f);
    let cok = c.cokernel(f);
    let ncm = c.cokernel(&ker);
    let nim = c.kernel(&cok);
    let lifted = c.lift_through_mono(f, &nim).ok_or_else(|| {
        HomologError::Operation(format!("{}: morphism does not land in its normal image", c.name()))
    })?;
    let central = c.descend_through_epi(&lifted, &ncm).ok_or_else(|| {
        HomologError::Operation(format!(
            "{}: morphism does not kill its kernel; no central part",
            c.name()
        ))
    })?;
    Ok(NormalFactorisation { ker, ncm, central, nim, cok })
}

/// A morphism is exact when the central part of its normal factorisation is
/// an isomorphism.
pub fn is_exact<C: Semiexact>(c: &C, f: &C::Mor) -> bool {
    match normal_factorise(c, f) {
        Ok(nf) => c.is_iso(&nf.central),
        Err(_) => false,
    }
}

/// A morphism is a normal mono when the canonical comparison to its normal
/// image is an isomorphism.
pub fn is_normal_mono<C: Semiexact>(c: &C, m: &C::Mor) -> bool {
    let n = nim(c, m);
    match c.lift_through_mono(m, &n) {
        Some(j) => c.is_iso(&j),
        None => false,
    }
}

/// Dually: a normal epi factors through its normal coimage by an isomorphism.
pub fn is_normal_epi<C: Semiexact>(c: &C, p: &C::Mor) -> bool {
    let q = ncm(c, p);
    match c.descend_through_epi(p, &q) {
        Some(j) => c.is_iso(&j),
        None => false,
    }
}

/// A morphism whose kernel is null (the relative notion of mono).
pub fn is_n_mono<C: Semiexact>(c: &C, f: &C::Mor) -> bool {
    c.is_null(&c.kernel(f))
}

pub fn is_n_epi<C: Semiexact>(c: &C, f: &C::Mor) -> bool {
    c.is_null(&c.cokernel(f))
}

/// The pair `(f, g)` is short exact when `f` is a normal mono, `g` a normal
/// epi, and the normal image of `f` is the kernel of `g` (as canonical
/// subobjects of the middle object).
pub fn is_short_exact<C: Semiexact>(c: &C, f: &C::Mor, g: &C::Mor) -> bool {
    is_normal_mono(c, f) && is_normal_epi(c, g) && nim(c, f) == c.kernel(g)
}

/// Sequential exactness at the middle object: `nim f = ker g`.
pub fn is_exact_at<C: Semiexact>(c: &C, f: &C::Mor, g: &C::Mor) -> bool {
    nim(c, f) == c.kernel(g)
}

/// The composite is null-killing enough to continue: `nim f <= ker g`.
pub fn is_order_two<C: Semiexact>(c: &C, f: &C::Mor, g: &C::Mor) -> bool {
    c.nsb_leq(&nim(c, f), &c.kernel(g))
}

/// Meet in the normal-subobject order, computed from the materialised list.
pub fn nsb_meet<C: Semiexact>(c: &C, a: &C::Obj, x: &C::Mor, y: &C::Mor) -> C::Mor {
    let all = c.nsb(a);
    let lower: Vec<&C::Mor> =
        all.iter().filter(|z| c.nsb_leq(z, x) && c.nsb_leq(z, y)).collect();
    lower
        .iter()
        .find(|m| lower.iter().all(|w| c.nsb_leq(w, m)))
        .map(|m| (**m).clone())
        .expect("normal subobjects form a lattice")
}

pub fn nsb_join<C: Semiexact>(c: &C, a: &C::Obj, x: &C::Mor, y: &C::Mor) -> C::Mor {
    let all = c.nsb(a);
    let upper: Vec<&C::Mor> =
        all.iter().filter(|z| c.nsb_leq(x, z) && c.nsb_leq(y, z)).collect();
    upper
        .iter()
        .find(|m| upper.iter().all(|w| c.nsb_leq(m, w)))
        .map(|m| (**m).clone())
        .expect("normal subobjects form a lattice")
}

/// The normal-subobject lattice of `a`, materialised, with its monos as labels.
pub fn nsb_lattice<C: Semiexact>(c: &C, a: &C::Obj) -> (crate::finite::FinLattice, Vec<C::Mor>) {
    let monos = c.nsb(a);
    let leq = monos
        .iter()
        .map(|x| monos.iter().map(|y| c.nsb_leq(x, y)).collect())
        .collect();
    (
        crate::finite::FinLattice::from_leq(leq).expect("normal subobjects form a lattice"),
        monos,
    )
}

// ---------------------------------------------------------------------------
// Functor exactness
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactnessMode {
    /// Preserves null morphisms.
    N,
    /// Preserves kernels (up to canonical subobject form).
    Left,
    /// Preserves cokernels.
    Right,
    /// Preserves short exact pairs.
    Short,
    /// Preserves exactness of composable pairs at the middle object.
    Long,
    /// Short and long together.
    Exact,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctorReport {
    pub mode: ExactnessMode,
    pub status: AuditStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

/// Check a preservation property of a functor, given by its action on
/// morphisms, over all morphisms between the `outer` objects of the source.
pub fn check_functor_exactness<C: Semiexact, D: Semiexact>(
    c: &C,
    d: &D,
    on_mor: &impl Fn(&C::Mor) -> D::Mor,
    mode: ExactnessMode,
    outer: &[C::Obj],
) -> FunctorReport {
    let fail = |ce: String| FunctorReport {
        mode,
        status: AuditStatus::Fail,
        counterexample: Some(ce),
    };
    if matches!(mode, ExactnessMode::Exact) {
        for m in [ExactnessMode::Short, ExactnessMode::Long] {
            let r = check_functor_exactness(c, d, on_mor, m, outer);
            if r.status == AuditStatus::Fail {
                return FunctorReport { mode, ..r };
            }
        }
        return FunctorReport { mode, status: AuditStatus::Pass, counterexample: None };
    }
    for a in outer {
        for b in outer {
            for f in c.hom(a, b) {
                let ff = on_mor(&f);
                match mode {
                    ExactnessMode::N => {
                        if c.is_null(&f) && !d.is_null(&ff) {
                            return fail(format!("null {f:?} maps to non-null"));
                        }
                    }
                    ExactnessMode::Left => {
                        // the canonical comparison F(Ker f) -> Ker(Ff) must be iso
                        let fk = on_mor(&c.kernel(&f));
                        let iso = d
                            .lift_through_mono(&fk, &d.kernel(&ff))
                            .map_or(false, |cmp| d.is_iso(&cmp));
                        if !iso {
                            return fail(format!("kernel of {f:?} not preserved"));
                        }
                    }
                    ExactnessMode::Right => {
                        // dually, Cok(Ff) -> F(Cok f) must be iso
                        let fq = on_mor(&c.cokernel(&f));
                        let iso = d
                            .descend_through_epi(&fq, &d.cokernel(&ff))
                            .map_or(false, |cmp| d.is_iso(&cmp));
                        if !iso {
                            return fail(format!("cokernel of {f:?} not preserved"));
                        }
                    }
                    ExactnessMode::Short | ExactnessMode::Long => {
                        for x in outer {
                            for g in c.hom(b, x) {
                                let short = matches!(mode, ExactnessMode::Short);
                                let holds_src = if short {
                                    is_short_exact(c, &f, &g)
                                } else {
                                    is_exact_at(c, &f, &g)
                                };
                                if holds_src {
                                    let gg = on_mor(&g);
                                    let holds_dst = if short {
                                        is_short_exact(d, &ff, &gg)
                                    } else {
                                        is_exact_at(d, &ff, &gg)
                                    };
                                    if !holds_dst {
                                        return fail(format!(
                                            "exact pair ({f:?}, {g:?}) not preserved"
                                        ));
                                    }
                                }
                            }
                        }
                    }
                    ExactnessMode::Exact => unreachable!(),
                }
            }
        }
    }
    FunctorReport { mode, status: AuditStatus::Pass, counterexample: None }
}

// ---------------------------------------------------------------------------
// Axiom audits
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub status: AuditStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl AxiomReport {
    fn pass(axiom: &str) -> Self {
        AxiomReport { axiom: axiom.into(), status: AuditStatus::Pass, counterexample: None }
    }
    fn fail(axiom: &str, ce: String) -> Self {
        AxiomReport { axiom: axiom.into(), status: AuditStatus::Fail, counterexample: Some(ce) }
    }
}

/// Memoised hom-set lookup. The exhaustive audits revisit the same pairs of
/// objects many times from inside nested quantifiers; enumerating each hom
/// set once makes the audits linear in the number of distinct pairs instead
/// of in the number of visits.
pub struct HomCache<'a, C: Semiexact> {
    c: &'a C,
    table: RefCell<HashMap<(C::Obj, C::Obj), Rc<Vec<C::Mor>>>>,
}

impl<'a, C: Semiexact> HomCache<'a, C> {
    pub fn new(c: &'a C) -> Self {
        HomCache { c, table: RefCell::new(HashMap::new()) }
    }

    pub fn hom(&self, a: &C::Obj, b: &C::Obj) -> Rc<Vec<C::Mor>> {
        if let Some(v) = self.table.borrow().get(&(a.clone(), b.clone())) {
            return v.clone();
        }
        let v = Rc::new(self.c.hom(a, b));
        self.table.borrow_mut().insert((a.clone(), b.clone()), v.clone());
        v
    }
}

/// ex0: the null morphisms form a *closed* ideal — composing with a null
/// morphism on either side is null, and every null morphism factors through
/// an object with null identity (the factoring object is searched among
/// `probe`).
pub fn audit_ex0<C: Semiexact>(c: &C, outer: &[C::Obj], probe: &[C::Obj]) -> AxiomReport {
    let homs = HomCache::new(c);
    let null_objects: Vec<&C::Obj> =
        probe.iter().filter(|a| c.is_null(&c.identity(a))).collect();
    for a in outer {
        for b in outer {
            for f in homs.hom(a, b).iter() {
                // ideal: null absorbs composition on both sides
                if c.is_null(f) {
                    for x in probe {
                        for g in homs.hom(x, a).iter() {
                            if !c.is_null(&c.compose(f, g)) {
                                return AxiomReport::fail(
                                    "ex0",
                                    format!("null {f:?} composed with {g:?} is not null"),
                                );
                            }
                        }
                        for h in homs.hom(b, x).iter() {
                            if !c.is_null(&c.compose(h, f)) {
                                return AxiomReport::fail(
                                    "ex0",
                                    format!("{h:?} composed with null {f:?} is not null"),
                                );
                            }
                        }
                    }
                }
                // closedness: null iff factors through a null-identity object
                let factors = null_objects.iter().any(|n| {
                    homs.hom(a, n).iter().any(|g| {
                        homs.hom(n, b).iter().any(|h| c.compose(h, g) == *f)
                    })
                });
                if factors != c.is_null(f) {
                    return AxiomReport::fail(
                        "ex0",
                        format!(
                            "{f:?}: is_null={} but factoring through a null object={}",
                            c.is_null(f),
                            factors
                        ),
                    );
                }
            }
        }
    }
    AxiomReport::pass("ex0")
}

/// ex1: every morphism has a kernel and a cokernel with the right universal
/// properties, tested against morphisms from/to the `probe` objects.
pub fn audit_ex1<C: Semiexact>(c: &C, outer: &[C::Obj], probe: &[C::Obj]) -> AxiomReport {
    let homs = HomCache::new(c);
    for a in outer {
        for b in outer {
            for f in homs.hom(a, b).iter() {
                let k = c.kernel(f);
                if c.cod(&k) != *a {
                    return AxiomReport::fail("ex1", format!("kernel of {f:?} not into domain"));
                }
                if !c.is_null(&c.compose(f, &k)) {
                    return AxiomReport::fail(
                        "ex1",
                        format!("composite of {f:?} with its kernel is not null"),
                    );
                }
                let q = c.cokernel(f);
                if c.dom(&q) != *b {
                    return AxiomReport::fail(
                        "ex1",
                        format!("cokernel of {f:?} not out of codomain"),
                    );
                }
                if !c.is_null(&c.compose(&q, f)) {
                    return AxiomReport::fail(
                        "ex1",
                        format!("composite of cokernel with {f:?} is not null"),
                    );
                }
                for x in probe {
                    for t in homs.hom(x, a).iter() {
                        if c.is_null(&c.compose(f, t)) {
                            let lifts = homs
                                .hom(x, &c.dom(&k))
                                .iter()
                                .filter(|y| c.compose(&k, y) == *t)
                                .count();
                            if lifts != 1 {
                                return AxiomReport::fail(
                                    "ex1",
                                    format!(
                                        "kernel of {f:?}: {t:?} has {lifts} factorisations, want 1",
                                    ),
                                );
                            }
                        }
                    }
                    for t in homs.hom(b, x).iter() {
                        if c.is_null(&c.compose(t, f)) {
                            let descents = homs
                                .hom(&c.cod(&q), x)
                                .iter()
                                .filter(|y| c.compose(y, &q) == *t)
                                .count();
                            if descents != 1 {
                                return AxiomReport::fail(
                                    "ex1",
                                    format!(
                                        "cokernel of {f:?}: {t:?} has {descents} factorisations, want 1",
                                    ),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    AxiomReport::pass("ex1")
}

/// ex2: normal monos compose to normal monos, normal epis to normal epis.
pub fn audit_ex2<C: Semiexact>(c: &C, outer: &[C::Obj]) -> AxiomReport {
    for a in outer {
        for m in c.nsb(a) {
            let inner = c.dom(&m);
            for n in c.nsb(&inner) {
                let mn = c.compose(&m, &n);
                if !is_normal_mono(c, &mn) {
                    return AxiomReport::fail(
                        "ex2",
                        format!("composite of normal monos {m:?} . {n:?} is not normal"),
                    );
                }
            }
        }
        // epis: cokernels of normal subobjects, composed with cokernels again
        for m in c.nsb(a) {
            let p = c.cokernel(&m);
            let mid = c.cod(&p);
            for n in c.nsb(&mid) {
                let q = c.cokernel(&n);
                let qp = c.compose(&q, &p);
                if !is_normal_epi(c, &qp) {
                    return AxiomReport::fail(
                        "ex2",
                        format!("composite of normal epis {q:?} . {p:?} is not normal"),
                    );
                }
            }
        }
    }
    AxiomReport::pass("ex2")
}

/// ex3: for normal subobjects `n <= m` of the same object, the composite of
/// the cokernel of `n` with the mono `m` is exact (subquotients exist).
pub fn audit_ex3<C: Semiexact>(c: &C, outer: &[C::Obj]) -> AxiomReport {
    for a in outer {
        let subs = c.nsb(a);
        for m in &subs {
            for n in &subs {
                if c.nsb_leq(n, m) {
                    let q = c.cokernel(n);
                    let qm = c.compose(&q, m);
                    if !is_exact(c, &qm) {
                        return AxiomReport::fail(
                            "ex3",
                            format!("cok({n:?}) . {m:?} is not exact"),
                        );
                    }
                }
            }
        }
    }
    AxiomReport::pass("ex3")
}

/// Run all four audits. `outer` bounds the morphisms audited; `probe` bounds
/// the inner universal quantifiers of ex0 and ex1.
pub fn audit_all<C: Semiexact>(c: &C, outer: &[C::Obj], probe: &[C::Obj]) -> Vec<AxiomReport> {
    vec![
        audit_ex0(c, outer, probe),
        audit_ex1(c, outer, probe),
        audit_ex2(c, outer),
        audit_ex3(c, outer),
    ]
}

// ---------------------------------------------------------------------------
// A deliberately broken instance: a finite total order with the strict
// inequalities as "null" morphisms. The ideal is not closed (there is no
// object with null identity), so ex0 must fail; it is kept as a fixture for
// exercising the audit machinery.
// ---------------------------------------------------------------------------

pub struct StrictInterval {
    pub n: usize,
}

impl Semiexact for StrictInterval {
    type Obj = usize;
    type Mor = (usize, usize);

    fn name(&self) -> &'static str {
        "strict-interval"
    }
    fn dom(&self, f: &(usize, usize)) -> usize {
        f.0
    }
    fn cod(&self, f: &(usize, usize)) -> usize {
        f.1
    }
    fn identity(&self, a: &usize) -> (usize, usize) {
        (*a, *a)
    }
    fn compose(&self, g: &(usize, usize), f: &(usize, usize)) -> (usize, usize) {
        debug_assert_eq!(f.1, g.0);
        (f.0, g.1)
    }
    fn is_null(&self, f: &(usize, usize)) -> bool {
        f.0 < f.1
    }
    fn kernel(&self, f: &(usize, usize)) -> (usize, usize) {
        // best effort: largest x <= dom with x < cod, else the domain itself
        let (a, b) = *f;
        if a < b {
            (a, a)
        } else if a > 0 {
            (a - 1, a)
        } else {
            (0, 0)
        }
    }
    fn cokernel(&self, f: &(usize, usize)) -> (usize, usize) {
        let (a, b) = *f;
        if a < b {
            (b, b)
        } else if b + 1 < self.n {
            (b, b + 1)
        } else {
            (b, b)
        }
    }
    fn is_iso(&self, f: &(usize, usize)) -> bool {
        f.0 == f.1
    }
    fn inverse(&self, f: &(usize, usize)) -> Option<(usize, usize)> {
        (f.0 == f.1).then_some(*f)
    }
    fn lift_through_mono(
        &self,
        f: &(usize, usize),
        m: &(usize, usize),
    ) -> Option<(usize, usize)> {
        (f.0 <= m.0).then_some((f.0, m.0))
    }
    fn descend_through_epi(
        &self,
        f: &(usize, usize),
        p: &(usize, usize),
    ) -> Option<(usize, usize)> {
        (p.1 <= f.1).then_some((p.1, f.1))
    }
    fn objects(&self) -> Vec<usize> {
        (0..self.n).collect()
    }
    fn hom(&self, a: &usize, b: &usize) -> Vec<(usize, usize)> {
        if a <= b {
            vec![(*a, *b)]
        } else {
            vec![]
        }
    }
    fn nsb(&self, a: &usize) -> Vec<(usize, usize)> {
        (0..=*a).map(|x| (x, *a)).collect()
    }
    fn nsb_leq(&self, x: &(usize, usize), y: &(usize, usize)) -> bool {
        x.0 <= y.0
    }
}
