//! Bigraded exact couples of type I, quasi-exact couples, spectral pages
//! with their differentials, and the couples of towers of fibrations.
//!
//! Bidegrees: u: D_{n,p−1} → D_{np}, v: D_{np} → E_{np},
//! ∂: E_{np} → D_{n−1,p−1}; the page-r differential has bidegree (−1, −r).
//! Entries absent from the index maps denote the zero object and null
//! morphisms, so a couple is stored on a finite window.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::act::{functor_f, functor_fi, Action, ActMap};
use crate::actprime::{embed_act, embed_act_map, nac_equivalent, ActPrimeMap, Nac};
use crate::cat::{
    is_exact, is_exact_at, nim, normal_factorise, Semiexact,
};
use crate::couple::transport_nsb;
use crate::finite::{span, FinGroup, Subgroup};
use crate::gp2::{GroupPair, PairMap};
use crate::ngp::{Ngp, QuasiMap};
use crate::nsb::{direct_image, inverse_image, is_left_modular_on, is_right_modular_on};
use crate::subquotient::{quotient_sq, regular_induction, subobject_sq, subquotient, Subquotient};
use crate::HomologError;

pub type Deg = (i64, i64);

/// A semiexact instance with a chosen zero object, so that bigraded data can
/// be extended by zeros outside its stored window.
pub trait HasZero: Semiexact {
    fn zero_obj(&self) -> Self::Obj;
    fn null_mor(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Mor;
    /// Solve `i ∘ w = f` for `w` through the central morphism `i` of an
    /// exact factorisation. By default the central morphism is inverted;
    /// instances whose central morphisms need not be invertible override
    /// this with a direct search for a solution.
    fn solve_through_central(&self, i: &Self::Mor, f: &Self::Mor) -> Option<Self::Mor> {
        let j = self.inverse(i)?;
        Some(self.compose(&j, f))
    }
}

impl HasZero for Ngp {
    fn zero_obj(&self) -> GroupPair {
        GroupPair { group: FinGroup::trivial(), sub: Subgroup::trivial() }
    }
    fn null_mor(&self, a: &GroupPair, b: &GroupPair) -> QuasiMap {
        let f = QuasiMap { dom: a.clone(), cod: b.clone(), map: vec![0; a.group.size] };
        self.canonical(&f)
    }
}

impl HasZero for crate::gp2::Gp2 {
    fn zero_obj(&self) -> GroupPair {
        GroupPair { group: FinGroup::trivial(), sub: Subgroup::trivial() }
    }
    fn null_mor(&self, a: &GroupPair, b: &GroupPair) -> PairMap {
        PairMap { dom: a.clone(), cod: b.clone(), map: vec![0; a.group.size] }
    }
}

impl HasZero for Nac {
    fn zero_obj(&self) -> crate::actprime::ActionTriple {
        embed_act(&Action::discrete(1)).expect("the one-point action embeds")
    }
    fn null_mor(
        &self,
        a: &crate::actprime::ActionTriple,
        b: &crate::actprime::ActionTriple,
    ) -> ActPrimeMap {
        let f = ActPrimeMap {
            dom: a.clone(),
            cod: b.clone(),
            fprime: vec![0; a.action.points],
            fsecond: vec![0; a.action.group.size],
        };
        self.canonical(&f)
    }
    fn solve_through_central(&self, i: &ActPrimeMap, f: &ActPrimeMap) -> Option<ActPrimeMap> {
        if let Some(j) = self.inverse(i) {
            return Some(self.compose(&j, f));
        }
        // the carrier of w must hit a preimage of each f′-value, and each
        // operator value must land in the preimage of the distinguished
        // coset of the corresponding f″-value; enumerate those slots
        let t = &i.cod.action.group;
        let mut slots: Vec<Vec<usize>> = f
            .fprime
            .iter()
            .enumerate()
            .map(|(x, &y)| {
                (0..i.dom.action.points)
                    .filter(|&z| i.fprime[z] == y && (x != 0 || z == 0))
                    .collect()
            })
            .collect();
        let carriers = slots.len();
        slots.extend(f.fsecond.iter().map(|&y| {
            (0..i.dom.action.group.size)
                .filter(|&s| i.cod.sub.contains(t.add(i.fsecond[s], t.neg(y))))
                .collect::<Vec<usize>>()
        }));
        if slots.iter().any(|opts| opts.is_empty()) {
            return None;
        }
        let budget: usize = 1 << 20;
        if slots.iter().try_fold(1usize, |acc, opts| {
            acc.checked_mul(opts.len()).filter(|&n| n <= budget)
        }) == None
        {
            return None;
        }
        let mut idx = vec![0usize; slots.len()];
        loop {
            let fprime: Vec<usize> =
                (0..carriers).map(|x| slots[x][idx[x]]).collect();
            let fsecond: Vec<usize> =
                (carriers..slots.len()).map(|s| slots[s][idx[s]]).collect();
            if let Ok(w) = ActPrimeMap::new(f.dom.clone(), i.dom.clone(), fprime, fsecond) {
                if nac_equivalent(&self.compose(i, &w), f) {
                    return Some(self.canonical(&w));
                }
            }
            let mut k = slots.len();
            loop {
                if k == 0 {
                    return None;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < slots[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Bigraded couples
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct BigradedCouple<C: Semiexact> {
    pub d: BTreeMap<Deg, C::Obj>,
    pub e: BTreeMap<Deg, C::Obj>,
    /// u at (n,p): D_{n,p−1} → D_{np}.
    pub u: BTreeMap<Deg, C::Mor>,
    /// v at (n,p): D_{np} → E_{np}.
    pub v: BTreeMap<Deg, C::Mor>,
    /// ∂ at (n,p): E_{np} → D_{n−1,p−1}.
    pub del: BTreeMap<Deg, C::Mor>,
    /// Quasi-exact mode: E lives in rows n ≥ 1, exactness of u_{0p} is not
    /// required, and v^{(r)} is only built for rows n ≥ 1.
    pub quasi: bool,
}

impl<C: HasZero> BigradedCouple<C> {
    pub fn new(quasi: bool) -> Self {
        BigradedCouple {
            d: BTreeMap::new(),
            e: BTreeMap::new(),
            u: BTreeMap::new(),
            v: BTreeMap::new(),
            del: BTreeMap::new(),
            quasi,
        }
    }

    pub fn d_at(&self, c: &C, k: Deg) -> C::Obj {
        self.d.get(&k).cloned().unwrap_or_else(|| c.zero_obj())
    }

    pub fn e_at(&self, c: &C, k: Deg) -> C::Obj {
        self.e.get(&k).cloned().unwrap_or_else(|| c.zero_obj())
    }

    pub fn u_at(&self, c: &C, (n, p): Deg) -> C::Mor {
        self.u
            .get(&(n, p))
            .cloned()
            .unwrap_or_else(|| c.null_mor(&self.d_at(c, (n, p - 1)), &self.d_at(c, (n, p))))
    }

    pub fn v_at(&self, c: &C, k: Deg) -> C::Mor {
        self.v
            .get(&k)
            .cloned()
            .unwrap_or_else(|| c.null_mor(&self.d_at(c, k), &self.e_at(c, k)))
    }

    pub fn del_at(&self, c: &C, (n, p): Deg) -> C::Mor {
        self.del
            .get(&(n, p))
            .cloned()
            .unwrap_or_else(|| c.null_mor(&self.e_at(c, (n, p)), &self.d_at(c, (n - 1, p - 1))))
    }

    /// Composite u_{n,p_hi} ∘ … ∘ u_{n,p_lo+1}: D_{n,p_lo} → D_{n,p_hi};
    /// the identity when p_lo = p_hi.
    pub fn u_chain(&self, c: &C, n: i64, p_lo: i64, p_hi: i64) -> C::Mor {
        assert!(p_lo <= p_hi, "chain runs upward in p");
        let mut f = c.identity(&self.d_at(c, (n, p_lo)));
        for p in p_lo + 1..=p_hi {
            f = c.compose(&self.u_at(c, (n, p)), &f);
        }
        f
    }

    /// The rectangle of indices spanned by the stored objects, widened by
    /// one: (n_lo, n_hi, p_lo, p_hi).
    pub fn hull(&self) -> (i64, i64, i64, i64) {
        let keys = self.d.keys().chain(self.e.keys());
        let mut n_lo = i64::MAX;
        let mut n_hi = i64::MIN;
        let mut p_lo = i64::MAX;
        let mut p_hi = i64::MIN;
        for &(n, p) in keys {
            n_lo = n_lo.min(n);
            n_hi = n_hi.max(n);
            p_lo = p_lo.min(p);
            p_hi = p_hi.max(p);
        }
        if n_lo > n_hi {
            (0, -1, 0, -1)
        } else {
            (n_lo - 1, n_hi + 1, p_lo - 1, p_hi + 1)
        }
    }

    /// Endpoint agreement of every stored morphism with the object tables.
    pub fn validate(&self, c: &C) -> Result<(), HomologError> {
        let bad = |m: String| Err(HomologError::Invalid(m));
        for (&(n, p), f) in &self.u {
            if c.dom(f) != self.d_at(c, (n, p - 1)) || c.cod(f) != self.d_at(c, (n, p)) {
                return bad(format!("u at ({n},{p}) has mismatched endpoints"));
            }
        }
        for (&k, f) in &self.v {
            if c.dom(f) != self.d_at(c, k) || c.cod(f) != self.e_at(c, k) {
                return bad(format!("v at {k:?} has mismatched endpoints"));
            }
        }
        for (&(n, p), f) in &self.del {
            if c.dom(f) != self.e_at(c, (n, p)) || c.cod(f) != self.d_at(c, (n - 1, p - 1)) {
                return bad(format!("∂ at ({n},{p}) has mismatched endpoints"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BigradedReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl BigradedReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Audit the couple clauses on the stored window: (a) the long sequences are
/// exact at every enumerated position, (b) the u-chains are exact morphisms,
/// (c) v is left modular on the kernels of u-chains, (d) ∂ is right modular
/// on their normal images. In quasi mode the E-rows n ≤ 0 are skipped and
/// the exactness of u_{0p} is never required.
pub fn check_bigraded<C: HasZero>(c: &C, bc: &BigradedCouple<C>) -> BigradedReport {
    let mut failures = Vec::new();
    let mut checks = 0usize;
    if let Err(e) = bc.validate(c) {
        return BigradedReport { checks: 0, failures: vec![format!("{e}")] };
    }
    let (n_lo, n_hi, p_lo, p_hi) = bc.hull();
    // a position is checked when at least one of its two morphisms is
    // stored; positions where both are absent lie beyond the stored window,
    // where the continuation of the couple is not determined by the data
    let stored = |m: &BTreeMap<Deg, C::Mor>, k: Deg| m.contains_key(&k);
    for n in n_lo..=n_hi {
        for p in p_lo..=p_hi {
            if bc.quasi && n <= 0 {
                continue;
            }
            // at D_{np} inside one sequence: nim u_{np} = ker v_{np}
            if stored(&bc.u, (n, p)) || stored(&bc.v, (n, p)) {
                checks += 1;
                if !is_exact_at(c, &bc.u_at(c, (n, p)), &bc.v_at(c, (n, p))) {
                    failures.push(format!("sequence not exact at D({n},{p}) between u and v"));
                }
            }
            // at E_{np}: nim v_{np} = ker ∂_{np}
            if stored(&bc.v, (n, p)) || stored(&bc.del, (n, p)) {
                checks += 1;
                if !is_exact_at(c, &bc.v_at(c, (n, p)), &bc.del_at(c, (n, p))) {
                    failures.push(format!("sequence not exact at E({n},{p})"));
                }
            }
            // at D_{n-1,p-1}: nim ∂_{np} = ker u_{n-1,p}
            if stored(&bc.del, (n, p)) || stored(&bc.u, (n - 1, p)) {
                checks += 1;
                if !is_exact_at(c, &bc.del_at(c, (n, p)), &bc.u_at(c, (n - 1, p))) {
                    failures
                        .push(format!("sequence not exact at D({},{}) between ∂ and u", n - 1, p - 1));
                }
            }
        }
        // clause (b): exactness of all u-chains in the window
        if !(bc.quasi && n <= 0) {
            for p1 in p_lo..=p_hi {
                for p2 in p1..=p_hi {
                    checks += 1;
                    if !is_exact(c, &bc.u_chain(c, n, p1, p2)) {
                        failures.push(format!("u-chain D({n},{p1}) → D({n},{p2}) is not exact"));
                    }
                }
            }
        }
    }
    // clause (c): v_{np} left modular on Ker(u^r: D_{np} → D_{n,p+r})
    for (&(n, p), v) in &bc.v {
        for q in p..=p_hi {
            checks += 1;
            let x = c.kernel(&bc.u_chain(c, n, p, q));
            if !is_left_modular_on(c, v, &x) {
                failures.push(format!("v({n},{p}) is not left modular on Ker u^{}", q - p));
            }
        }
    }
    // clause (d): ∂_{np} right modular on Nim(u^r: D_{n-1,p-1-r} → D_{n-1,p-1})
    for (&(n, p), del) in &bc.del {
        for q in (p_lo - 1..=p - 1).rev() {
            checks += 1;
            let y = nim(c, &bc.u_chain(c, n - 1, q, p - 1));
            if !is_right_modular_on(c, del, &y) {
                failures
                    .push(format!("∂({n},{p}) is not right modular on Nim u^{}", p - 1 - q));
            }
        }
    }
    BigradedReport { checks, failures }
}

// ---------------------------------------------------------------------------
// Spectral pages
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SpectralPage<C: Semiexact> {
    pub r: usize,
    /// Eʳ_{np} as a subquotient of E_{np}.
    pub cells: BTreeMap<Deg, Subquotient<C>>,
    /// dʳ at (n,p): Eʳ_{np} → Eʳ_{n−1,p−r}.
    pub diffs: BTreeMap<Deg, C::Mor>,
}

fn is_zero_object<C: Semiexact>(c: &C, a: &C::Obj) -> bool {
    c.is_null(&c.identity(a))
}

/// Pages 1..r_max of a bigraded (quasi-)exact couple. The numerator of
/// Eʳ_{np} is ∂*(Nim uʳ⁻¹ ending at D_{n−1,p−1}), the denominator is
/// v_*(Ker uʳ⁻¹ starting at D_{np}); dʳ = v⁽ʳ⁾∂⁽ʳ⁾ where ∂⁽ʳ⁾ is regularly
/// induced and v⁽ʳ⁾ descends along the isomorphism induced by the exact
/// chain uʳ⁻¹. In quasi mode cells and differentials are built for rows
/// n ≥ 1 only.
pub fn bigraded_pages<C: HasZero>(
    c: &C,
    bc: &BigradedCouple<C>,
    r_max: usize,
) -> Result<Vec<SpectralPage<C>>, HomologError> {
    bc.validate(c)?;
    let (_, _, p_lo, p_hi) = bc.hull();
    if r_max as i64 > p_hi - p_lo + 1 {
        return Err(HomologError::Operation(format!(
            "page {r_max} needs u-chains of length {}, but the stored window only spans p ∈ [{}, {}]; extend the window padding",
            r_max - 1,
            p_lo + 1,
            p_hi - 1,
        )));
    }
    let mut pages = Vec::new();
    for r in 1..=r_max as i64 {
        let mut cells: BTreeMap<Deg, Subquotient<C>> = BTreeMap::new();
        let mut chains_down: BTreeMap<Deg, C::Mor> = BTreeMap::new();
        for &(n, p) in bc.e.keys() {
            if bc.quasi && n < 1 {
                continue;
            }
            let down = bc.u_chain(c, n - 1, p - r, p - 1);
            let up = bc.u_chain(c, n, p, p + r - 1);
            let num = inverse_image(c, &bc.del_at(c, (n, p)), &nim(c, &down));
            let den = direct_image(c, &bc.v_at(c, (n, p)), &c.kernel(&up));
            let sq = subquotient(c, &bc.e_at(c, (n, p)), &num, &den).map_err(|e| {
                HomologError::Operation(format!("page {r} cell ({n},{p}): {e}"))
            })?;
            chains_down.insert((n, p), down);
            cells.insert((n, p), sq);
        }
        let mut diffs = BTreeMap::new();
        for (&(n, p), sq) in &cells {
            let target = match cells.get(&(n - 1, p - r)) {
                Some(t) => t,
                None => continue,
            };
            let down = &chains_down[&(n, p)];
            let d_sq = subobject_sq(c, &bc.d_at(c, (n - 1, p - 1)), &nim(c, down)).map_err(
                |e| HomologError::Operation(format!("page {r} D-square ({n},{p}): {e}")),
            )?;
            let del_r = regular_induction(c, &bc.del_at(c, (n, p)), sq, &d_sq)?;
            let diff = if is_zero_object(c, &sq.object) {
                c.null_mor(&sq.object, &target.object)
            } else {
                let dbar = quotient_sq(c, &bc.d_at(c, (n - 1, p - r)), &c.kernel(down))?;
                let vbar = regular_induction(c, &bc.v_at(c, (n - 1, p - r)), &dbar, target)?;
                let i = normal_factorise(c, down)?.central;
                // the differential is v̄ ∘ i⁻¹ ∘ ∂; when the central morphism
                // of the u-chain is not invertible, either descend v̄ through
                // it or lift ∂ across it — the composite is the same
                if let Some(j) = c.inverse(&i) {
                    c.compose(&vbar, &c.compose(&j, &del_r))
                } else if let Some(m) = c.descend_through_epi(&vbar, &i) {
                    c.compose(&m, &del_r)
                } else if let Some(w) = c.solve_through_central(&i, &del_r) {
                    c.compose(&vbar, &w)
                } else {
                    return Err(HomologError::Operation(format!(
                        "page {r} differential at ({n},{p}): the boundary does not factor through the u-chain image in D({},{})",
                        n - 1,
                        p - 1,
                    )));
                }
            };
            diffs.insert((n, p), diff);
        }
        pages.push(SpectralPage { r: r as usize, cells, diffs });
    }
    Ok(pages)
}

/// dʳ∘dʳ is null wherever both composable differentials exist.
pub fn page_dd_null<C: Semiexact>(c: &C, page: &SpectralPage<C>) -> bool {
    let r = page.r as i64;
    page.diffs.iter().all(|(&(n, p), f)| match page.diffs.get(&(n - 1, p - r)) {
        Some(g) => c.is_null(&c.compose(g, f)),
        None => true,
    })
}

/// Eʳ⁺¹ = H(Eʳ, dʳ): the numerator and denominator of each page-(r+1) cell,
/// transported into the realised page-r cell, are the kernel of the outgoing
/// and the normal image of the incoming differential. Returns the failure
/// descriptions.
pub fn page_homology_audit<C: HasZero>(
    c: &C,
    cur: &SpectralPage<C>,
    next: &SpectralPage<C>,
) -> Result<Vec<String>, HomologError> {
    let r = cur.r as i64;
    let mut failures = Vec::new();
    for (&(n, p), sq) in &cur.cells {
        let next_sq = match next.cells.get(&(n, p)) {
            Some(s) => s,
            None => continue,
        };
        if let Some(out) = cur.diffs.get(&(n, p)) {
            let lhs = transport_nsb(c, sq, &next_sq.num)?;
            if lhs != c.kernel(out) {
                failures.push(format!(
                    "page {} numerator at ({n},{p}) is not the kernel of d{}",
                    next.r, cur.r
                ));
            }
        }
        if let Some(inc) = cur.diffs.get(&(n + 1, p + r)) {
            let lhs = transport_nsb(c, sq, &next_sq.den)?;
            if lhs != nim(c, inc) {
                failures.push(format!(
                    "page {} denominator at ({n},{p}) is not the image of d{}",
                    next.r, cur.r
                ));
            }
        }
    }
    Ok(failures)
}

/// Page at which every cell of `low` already equals the corresponding cell
/// of `high` (as numerator/denominator pairs): used to detect stabilisation.
pub fn pages_equal<C: Semiexact>(a: &SpectralPage<C>, b: &SpectralPage<C>) -> bool {
    a.cells.len() == b.cells.len()
        && a.cells.iter().all(|(k, sq)| {
            b.cells.get(k).map(|t| t.num == sq.num && t.den == sq.den).unwrap_or(false)
        })
}

// ---------------------------------------------------------------------------
// Towers of fibrations
// ---------------------------------------------------------------------------

/// Homotopy data of one fibration f_ℓ: X_ℓ → X_{ℓ−1} in a finite tower
/// (X_{−1} is the point). Vectors indexed by homotopy degree starting at 1;
/// `v[n-1]` is the map π_{n+1}X_{ℓ−1} → π_n F_ℓ, so it has one entry less.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerLevel {
    pub pi0_x: usize,
    pub pi_x: Vec<FinGroup>,
    pub pi0_f: usize,
    pub pi_f: Vec<FinGroup>,
    /// π_n X_ℓ → π_n X_{ℓ−1} for n = 1..=nmax.
    pub u: Vec<Vec<usize>>,
    /// π₀ X_ℓ → π₀ X_{ℓ−1}, pointed.
    pub u0: Vec<usize>,
    /// π_{n+1} X_{ℓ−1} → π_n F_ℓ for n = 1..=nmax−1.
    pub v: Vec<Vec<usize>>,
    /// π_n F_ℓ → π_n X_ℓ for n = 1..=nmax.
    pub del: Vec<Vec<usize>>,
    /// π₀ F_ℓ → π₀ X_ℓ, pointed.
    pub del0: Vec<usize>,
    /// Action of π₁ X_{ℓ−1} on π₀ F_ℓ: act[x][s].
    pub act: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerData {
    pub nmax: usize,
    pub levels: Vec<TowerLevel>,
}

impl TowerData {
    pub fn check_shapes(&self) -> Result<(), HomologError> {
        let bad = |m: String| Err(HomologError::Invalid(m));
        if self.levels.is_empty() {
            return bad("a tower needs at least one level".into());
        }
        for (l, lv) in self.levels.iter().enumerate() {
            if lv.pi_x.len() != self.nmax
                || lv.pi_f.len() != self.nmax
                || lv.u.len() != self.nmax
                || lv.del.len() != self.nmax
                || lv.v.len() + 1 != self.nmax.max(1)
            {
                return bad(format!("level {l}: homotopy data does not cover degrees 1..={}", self.nmax));
            }
            if lv.pi0_x == 0 || lv.pi0_f == 0 {
                return bad(format!("level {l}: π₀ must be a pointed set"));
            }
        }
        Ok(())
    }

    fn pi_x_below(&self, l: usize, n: usize) -> FinGroup {
        // π_n X_{ℓ-1}; the point for ℓ = 0
        if l == 0 {
            FinGroup::trivial()
        } else {
            self.levels[l - 1].pi_x[n - 1].clone()
        }
    }

    fn pi0_x_below(&self, l: usize) -> usize {
        if l == 0 {
            1
        } else {
            self.levels[l - 1].pi0_x
        }
    }

    pub fn path_connected(&self) -> bool {
        self.levels.iter().all(|lv| lv.pi0_x == 1 && lv.pi0_f == 1)
    }

    /// Extend the tower by the path fibration over its top space: the added
    /// level has contractible total space and the loop space as fibre
    /// (π_n F = π_{n+1} of the top space, π₀ F = π₁ with the translation
    /// action), so the couple's window ends in genuine zeros.
    fn with_terminal_level(&self) -> TowerData {
        let mut out = self.clone();
        let top = out.levels.last().expect("nonempty tower").clone();
        let nmax = out.nmax;
        let pi1 = top.pi_x[0].clone();
        let pi_f: Vec<FinGroup> = (1..=nmax)
            .map(|n| if n < nmax { top.pi_x[n].clone() } else { FinGroup::trivial() })
            .collect();
        out.levels.push(TowerLevel {
            pi0_x: 1,
            pi_x: vec![FinGroup::trivial(); nmax],
            pi0_f: pi1.size,
            pi_f: pi_f.clone(),
            u: (0..nmax).map(|_| vec![0]).collect(),
            u0: vec![0],
            v: (1..nmax).map(|n| (0..top.pi_x[n].size).collect()).collect(),
            del: pi_f.iter().map(|g| vec![0; g.size]).collect(),
            del0: vec![0; pi1.size],
            act: pi1.table.clone(),
        });
        out
    }
}

fn plain(g: &FinGroup) -> GroupPair {
    GroupPair { group: g.clone(), sub: Subgroup::trivial() }
}

/// The exact couple of a path-connected tower in normalised groups:
/// D_{np} = π_{n+1}X_{−p−1}, E_{np} = π_n F_{−p} for n ≥ 1, and
/// E_{0p} = (π₁X_{−p−1}, image of π₁X_{−p}); undefined entries are zero.
pub fn tower_couple_ngp(
    c: &Ngp,
    data: &TowerData,
) -> Result<BigradedCouple<Ngp>, HomologError> {
    data.check_shapes()?;
    if !data.path_connected() {
        return Err(HomologError::Operation(
            "the normalised-group tower couple needs path-connected data; use the action-category form".into(),
        ));
    }
    let data = &data.with_terminal_level();
    let levels = data.levels.len();
    let nmax = data.nmax;
    let mut bc: BigradedCouple<Ngp> = BigradedCouple::new(false);
    let hom = |dom: &FinGroup, cod: &FinGroup, map: &[usize]| {
        QuasiMap::new(plain(dom), plain(cod), map.to_vec())
    };
    // the base-of-level groups: D_{n,-ℓ} = π_{n+1} X_{ℓ-1}; ℓ = 0 gives the
    // point and stays absent (zero)
    for l in 1..=levels {
        let p = -(l as i64);
        for n in 0..nmax {
            let g = data.pi_x_below(l, n + 1);
            if g.size > 1 {
                bc.d.insert((n as i64, p), plain(&g));
            }
        }
    }
    for l in 0..levels {
        let lv = &data.levels[l];
        let p = -(l as i64);
        // E rows n ≥ 1: fibre groups
        for n in 1..=nmax {
            let g = &lv.pi_f[n - 1];
            if g.size > 1 {
                bc.e.insert((n as i64, p), plain(g));
            }
        }
        // E row 0: the pair (π₁ X_{ℓ-1}, image of π₁ X_ℓ)
        let base = data.pi_x_below(l, 1);
        let image = span(&base, &lv.u[0].iter().copied().collect::<Vec<_>>())?;
        let e0 = GroupPair::new(base.clone(), image)?;
        if e0.group.size > 1 {
            bc.e.insert((0, p), e0.clone());
        }
        // u_{n,p}: π_{n+1} X_ℓ → π_{n+1} X_{ℓ-1}
        for n in 0..nmax {
            let dom = lv.pi_x[n].clone();
            let cod = data.pi_x_below(l, n + 1);
            if dom.size > 1 || cod.size > 1 {
                bc.u.insert((n as i64, p), hom(&dom, &cod, &lv.u[n])?);
            }
        }
        // v_{n,p}: π_{n+1} X_{ℓ-1} → π_n F_ℓ for n ≥ 1; identity carrier
        // into the pair for n = 0
        for n in 1..nmax {
            let dom = data.pi_x_below(l, n + 1);
            let cod = &lv.pi_f[n - 1];
            if dom.size > 1 || cod.size > 1 {
                bc.v.insert((n as i64, p), hom(&dom, cod, &lv.v[n - 1])?);
            }
        }
        if e0.group.size > 1 {
            let idm: Vec<usize> = (0..base.size).collect();
            bc.v.insert((0, p), QuasiMap::new(plain(&base), e0, idm)?);
        }
        // ∂_{n,p}: π_n F_ℓ → π_n X_ℓ = D_{n-1,p-1}
        for n in 1..=nmax {
            let dom = &lv.pi_f[n - 1];
            let cod = lv.pi_x[n - 1].clone();
            if dom.size > 1 || cod.size > 1 {
                bc.del.insert((n as i64, p), hom(dom, &cod, &lv.del[n - 1])?);
            }
        }
    }
    bc.validate(c)?;
    Ok(bc)
}

/// The quasi-exact couple of a tower in normalised actions (§-style index
/// translation): D_{np} = π_n X_{−p−1} (pointed sets in row 0, groups as
/// translation actions above), E_{1p} = (π₀F_{−p}, π₁X_{−p−1}), and
/// E_{np} = π_{n−1}F_{−p} for n ≥ 2. The stabiliser of the base component
/// of each fibre must act trivially for the embedding to apply.
/// Also returns the underlying plain-action u-maps per row ≥ 1, used to
/// audit the exactness of u-chains through the ambient factorisation.
pub struct NacTowerCouple {
    pub couple: BigradedCouple<Nac>,
    /// Plain-category u-maps for rows n ≥ 1 (translation actions of groups).
    pub act_u: BTreeMap<Deg, ActMap>,
}

pub fn tower_couple_nac(
    nac: &Nac,
    data: &TowerData,
) -> Result<NacTowerCouple, HomologError> {
    data.check_shapes()?;
    let data = &data.with_terminal_level();
    let levels = data.levels.len();
    let nmax = data.nmax;
    let mut bc: BigradedCouple<Nac> = BigradedCouple::new(true);
    let mut act_u: BTreeMap<Deg, ActMap> = BTreeMap::new();

    let fi_triple = |g: &FinGroup| embed_act(&functor_fi(g));
    let pt_triple = |k: usize| embed_act(&Action::discrete(k));

    // D objects: π_n X_{ℓ-1} at p = -ℓ, for ℓ = 0..=levels
    for l in 0..=levels {
        let p = -(l as i64);
        let pi0 = if l == 0 { 1 } else { data.pi0_x_below(l) };
        if pi0 > 1 {
            bc.d.insert((0, p), pt_triple(pi0)?);
        }
        for n in 1..=nmax {
            let g = if l == 0 { FinGroup::trivial() } else { data.pi_x_below(l, n) };
            if g.size > 1 {
                bc.d.insert((n as i64, p), fi_triple(&g)?);
            }
        }
    }
    for l in 0..levels {
        let lv = &data.levels[l];
        let p = -(l as i64);
        // E_{1,p} = the action (π₀F_ℓ, π₁X_{ℓ-1})
        let base_pi1 = data.pi_x_below(l, 1);
        let fibre_action = Action::new(lv.pi0_f, base_pi1.clone(), lv.act.clone())?;
        if lv.pi0_f > 1 || base_pi1.size > 1 {
            bc.e.insert((1, p), embed_act(&fibre_action)?);
        }
        // E_{n,p} = π_{n-1} F_ℓ for n ≥ 2
        for n in 2..=nmax + 1 {
            let g = &lv.pi_f[n - 2];
            if g.size > 1 {
                bc.e.insert((n as i64, p), fi_triple(g)?);
            }
        }
        // u: row 0 pointed, rows ≥ 1 group translation actions
        let pi0_dom = lv.pi0_x;
        let pi0_cod = data.pi0_x_below(l);
        if pi0_dom > 1 || pi0_cod > 1 {
            let f = ActMap::new(
                Action::discrete(pi0_dom),
                Action::discrete(pi0_cod),
                lv.u0.clone(),
                vec![0],
            )?;
            bc.u.insert((0, p), embed_act_map(&f)?);
        }
        for n in 1..=nmax {
            let dom = lv.pi_x[n - 1].clone();
            let cod = data.pi_x_below(l, n);
            if dom.size > 1 || cod.size > 1 {
                let f = ActMap::new(
                    functor_fi(&dom),
                    functor_fi(&cod),
                    lv.u[n - 1].clone(),
                    lv.u[n - 1].clone(),
                )?;
                bc.u.insert((n as i64, p), embed_act_map(&f)?);
                act_u.insert((n as i64, p), f);
            }
        }
        // v_{1,p}: the orbit map of the base component, operator part the
        // identity of π₁X_{ℓ-1}
        if bc.e.contains_key(&(1, p)) && base_pi1.size > 1 {
            let fprime: Vec<usize> = (0..base_pi1.size).map(|s| fibre_action.act[0][s]).collect();
            let f = ActMap::new(
                functor_fi(&base_pi1),
                fibre_action.clone(),
                fprime,
                (0..base_pi1.size).collect(),
            )?;
            bc.v.insert((1, p), embed_act_map(&f)?);
        }
        // v_{n,p}: π_n X_{ℓ-1} → π_{n-1} F_ℓ for n ≥ 2
        for n in 2..=nmax {
            let dom = data.pi_x_below(l, n);
            let cod = &lv.pi_f[n - 2];
            if dom.size > 1 || cod.size > 1 {
                let f = ActMap::new(
                    functor_fi(&dom),
                    functor_fi(cod),
                    lv.v[n - 2].clone(),
                    lv.v[n - 2].clone(),
                )?;
                bc.v.insert((n as i64, p), embed_act_map(&f)?);
            }
        }
        // ∂_{1,p}: (π₀F_ℓ, π₁X_{ℓ-1}) → π₀X_ℓ, pointed on components,
        // trivial on operators
        if bc.e.contains_key(&(1, p)) && lv.pi0_x > 1 {
            let f = ActMap::new(
                fibre_action.clone(),
                Action::discrete(lv.pi0_x),
                lv.del0.clone(),
                vec![0; base_pi1.size],
            )?;
            bc.del.insert((1, p), embed_act_map(&f)?);
        }
        // ∂_{n,p}: π_{n-1}F_ℓ → π_{n-1}X_ℓ for n ≥ 2
        for n in 2..=nmax + 1 {
            let dom = &lv.pi_f[n - 2];
            let cod = lv.pi_x[n - 2].clone();
            if dom.size > 1 || cod.size > 1 {
                let f = ActMap::new(
                    functor_fi(dom),
                    functor_fi(&cod),
                    lv.del[n - 2].clone(),
                    lv.del[n - 2].clone(),
                )?;
                bc.del.insert((n as i64, p), embed_act_map(&f)?);
            }
        }
    }
    bc.validate(nac)?;
    Ok(NacTowerCouple { couple: bc, act_u })
}

/// Exactness of the u-chains of a normalised-action tower, witnessed through
/// the plain action category: compose the plain u-maps, factorise there, and
/// check that the projected central morphism is invertible after projection.
/// This is the precise sense in which group homomorphisms become exact after
/// projecting, and it is what the derived-page isomorphism uses.
pub fn tower_u_chains_exact_after_projection(
    nac: &Nac,
    act: &crate::act::Act,
    tower: &NacTowerCouple,
) -> Result<bool, HomologError> {
    let keys: Vec<Deg> = tower.act_u.keys().copied().collect();
    for &(n, p) in &keys {
        // extend each chain upward as far as the stored maps go
        let mut f = tower.act_u[&(n, p)].clone();
        let mut q = p;
        loop {
            let nf = normal_factorise(act, &f)?;
            let central = embed_act_map(&nf.central)?;
            if !nac.is_iso(&central) {
                return Ok(false);
            }
            q += 1;
            match tower.act_u.get(&(n, q)) {
                Some(next) => f = act.compose(next, &f),
                None => break,
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Tower generators used by tests and the command line
// ---------------------------------------------------------------------------

/// Tower of aspherical spaces from a chain of surjections
/// G_{L−1} → … → G_0 (→ 1): level ℓ has π₁X_ℓ = G_ℓ, fibre π₁F_ℓ equal to
/// the kernel of the ℓ-th surjection, and no higher homotopy.
pub fn aspherical_tower(
    groups: &[FinGroup],
    epis: &[Vec<usize>],
) -> Result<TowerData, HomologError> {
    if groups.len() != epis.len() {
        return Err(HomologError::Invalid("one surjection per level".into()));
    }
    let mut levels = Vec::new();
    for l in 0..groups.len() {
        let g = &groups[l];
        let below = if l == 0 { FinGroup::trivial() } else { groups[l - 1].clone() };
        let map = &epis[l];
        if map.len() != g.size || map.iter().any(|&y| y >= below.size) {
            return Err(HomologError::Invalid(format!("level {l}: map shape")));
        }
        if (0..below.size).any(|y| !map.contains(&y)) {
            return Err(HomologError::Invalid(format!("level {l}: map is not surjective")));
        }
        let kernel_members: Vec<usize> = (0..g.size).filter(|&x| map[x] == 0).collect();
        let (k_group, incl) = Subgroup { members: kernel_members }.as_group(g);
        levels.push(TowerLevel {
            pi0_x: 1,
            pi_x: vec![g.clone()],
            pi0_f: 1,
            pi_f: vec![k_group],
            u: vec![map.clone()],
            u0: vec![0],
            v: vec![],
            del: vec![incl],
            del0: vec![0],
            act: vec![vec![0; below.size]],
        });
    }
    Ok(TowerData { nmax: 1, levels })
}

/// Tower of covering spaces from a chain of normal subgroups
/// G ⊵ H_1 ⊵ … : level ℓ connects the cover with fundamental group H_{ℓ}
/// to the one below; fibres are discrete with π₀F = cosets carrying the
/// translation action. Produces non-path-connected data for the
/// normalised-action couple.
pub fn covering_tower(
    group: &FinGroup,
    chain: &[Subgroup],
) -> Result<TowerData, HomologError> {
    // level 0 is the base over the point; chain[0] is the subgroup of the
    // first cover, each next inside the previous
    let mut levels = Vec::new();
    levels.push(TowerLevel {
        pi0_x: 1,
        pi_x: vec![group.clone()],
        pi0_f: 1,
        pi_f: vec![group.clone()],
        u: vec![vec![0; group.size]],
        u0: vec![0],
        v: vec![],
        del: vec![(0..group.size).collect()],
        del0: vec![0],
        act: vec![vec![0]],
    });
    let mut below_group = group.clone();
    for (l, h) in chain.iter().enumerate() {
        if !h.is_subgroup_of(&below_group) {
            return Err(HomologError::Invalid(format!("level {l}: not a subgroup chain")));
        }
        // π₁ of the cover = h as an abstract group, included into the group
        // below; fibre components = coset action of the pair (below, h)
        let (h_group, incl) = h.as_group(&below_group);
        let pair = GroupPair::new(below_group.clone(), h.clone())?;
        let cosets = functor_f(&pair);
        levels.push(TowerLevel {
            pi0_x: 1,
            pi_x: vec![h_group.clone()],
            pi0_f: cosets.points,
            pi_f: vec![FinGroup::trivial()],
            u: vec![incl],
            u0: vec![0],
            v: vec![],
            del: vec![vec![0]],
            del0: vec![0; cosets.points],
            act: cosets.act.clone(),
        });
        below_group = h_group;
    }
    Ok(TowerData { nmax: 1, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::couple::{check_exact_couple, derive_couple, Couple};
    use crate::finite::FinGroup;

    fn z(n: usize) -> FinGroup {
        FinGroup::cyclic(n)
    }

    fn mod_map(a: usize, b: usize) -> Vec<usize> {
        (0..a).map(|x| x % b).collect()
    }

    #[test]
    fn aspherical_tower_gives_an_exact_couple() {
        let c = Ngp { max_group: 16 };
        let data = aspherical_tower(
            &[z(2), z(4)],
            &[vec![0, 0], mod_map(4, 2)],
        )
        .unwrap();
        let bc = tower_couple_ngp(&c, &data).unwrap();
        let report = check_bigraded(&c, &bc);
        assert!(report.ok(), "failures: {:?}", report.failures);
    }

    #[test]
    fn one_level_tower_degenerates_to_the_fibre() {
        // X₀ → *: the fibre is X₀ itself, E_{n,0} = π_n X₀
        let c = Ngp { max_group: 16 };
        let data = aspherical_tower(&[z(4)], &[vec![0, 0, 0, 0]]).unwrap();
        let bc = tower_couple_ngp(&c, &data).unwrap();
        assert_eq!(bc.e.get(&(1, 0)).unwrap().group.size, 4);
        // E_{0,0} is the null pair on the trivial group, hence absent
        assert!(bc.e.get(&(0, 0)).is_none());
        let report = check_bigraded(&c, &bc);
        assert!(report.ok(), "failures: {:?}", report.failures);
    }

    #[test]
    fn tower_total_couple_satisfies_derivation_theorem() {
        let c = Ngp { max_group: 64 };
        let data =
            aspherical_tower(&[z(2), z(4)], &[vec![0, 0], mod_map(4, 2)]).unwrap();
        let bc = tower_couple_ngp(&c, &data).unwrap();
        let total = total_couple_ngp(&c, &bc).unwrap();
        let report = check_exact_couple(&c, &total);
        assert!(report.is_exact(), "clause: {:?}", report.failing_clause());
        let derived = derive_couple(&c, &total).unwrap();
        let dr = check_exact_couple(&c, &derived.couple);
        assert!(dr.is_exact(), "derived clause: {:?}", dr.failing_clause());
    }

    #[test]
    fn filtered_couple_pages_match_graded_homology() {
        use crate::filtered::{homology_couple, FilteredComplex};
        let c = Ngp { max_group: 64 };
        for seed in [1u64, 2, 3] {
            let cx = FilteredComplex::random(seed, 3, 2, 6);
            let bc = homology_couple(&cx, 4).unwrap();
            let report = check_bigraded(&c, &bc);
            assert!(report.ok(), "seed {seed}: {:?}", report.failures);
            let pages = bigraded_pages(&c, &bc, 5).unwrap();
            for w in pages.windows(2) {
                assert!(page_dd_null(&c, &w[0]));
                let fails = page_homology_audit(&c, &w[0], &w[1]).unwrap();
                assert!(fails.is_empty(), "seed {seed}: {fails:?}");
            }
            let last = pages.last().unwrap();
            for (&(n, p), sq) in &last.cells {
                let expected = cx.graded_of_homology_dim(n, p);
                let got =
                    ((sq.object.group.size / sq.object.sub.members.len()) as f64).log2() as usize;
                assert_eq!(got, expected, "seed {seed} at ({n},{p})");
            }
        }
    }

    #[test]
    fn nac_tower_is_a_quasi_couple_with_projected_u_exactness() {
        let nac = Nac { max_points: 8, max_group: 8 };
        let act = crate::act::Act { max_points: 8, max_group: 8 };
        // two-level tower with π₁ = Z/4 → Z/2
        let data =
            aspherical_tower(&[z(2), z(4)], &[vec![0, 0], mod_map(4, 2)]).unwrap();
        let tower = tower_couple_nac(&nac, &data).unwrap();
        let report = check_bigraded(&nac, &tower.couple);
        // clauses (a), (c), (d) hold as stated; the internal form of clause
        // (b) can fail because projection does not preserve cokernels, so it
        // is audited through the ambient factorisation instead
        let essential: Vec<&String> =
            report.failures.iter().filter(|m| !m.contains("u-chain")).collect();
        assert!(essential.is_empty(), "failures: {essential:?}");
        assert!(tower_u_chains_exact_after_projection(&nac, &act, &tower).unwrap());
        // page 1 needs no u-chain inversion and is defined on rows n ≥ 1
        let pages = bigraded_pages(&nac, &tower.couple, 1).unwrap();
        for page in &pages {
            assert!(page.cells.keys().all(|&(n, _)| n >= 1));
            assert!(page_dd_null(&nac, page));
        }
        // page 2 requires inverting the central morphism of a u-chain whose
        // operator part is π₁X₁ = Z/4 → Z/2; inside the quotient category the
        // excision of the trivially-acting operators {0, 2} is not available
        // (the distinguished subgroup of the quotient object stays trivial),
        // so the differential into the fringe row cannot descend — the same
        // u-chain becomes exact after projection, as asserted above
        let err = bigraded_pages(&nac, &tower.couple, 2).unwrap_err();
        assert!(err.to_string().contains("does not factor through"), "{err}");
    }

    #[test]
    fn covering_tower_has_discrete_fibres_with_coset_actions() {
        let nac = Nac { max_points: 8, max_group: 8 };
        let g = z(4);
        let sub = crate::finite::Subgroup { members: vec![0, 2] };
        let data = covering_tower(&g, &[sub]).unwrap();
        assert_eq!(data.levels[1].pi0_f, 2);
        let tower = tower_couple_nac(&nac, &data).unwrap();
        let report = check_bigraded(&nac, &tower.couple);
        let essential: Vec<&String> =
            report.failures.iter().filter(|m| !m.contains("u-chain")).collect();
        assert!(essential.is_empty(), "failures: {essential:?}");
    }
}

/// Total (unigraded) couple of a bigraded couple in normalised groups: the
/// direct product of the window objects with blockwise morphisms. Exactness
/// of the bigraded couple transfers to the total one, which makes the
/// derived-couple theorem applicable to tower data.
pub fn total_couple_ngp(
    c: &Ngp,
    bc: &BigradedCouple<Ngp>,
) -> Result<crate::couple::Couple<Ngp>, HomologError> {
    let d_keys: Vec<Deg> = bc.d.keys().copied().collect();
    let e_keys: Vec<Deg> = bc.e.keys().copied().collect();
    let d_parts: Vec<GroupPair> = d_keys.iter().map(|&k| bc.d[&k].clone()).collect();
    let e_parts: Vec<GroupPair> = e_keys.iter().map(|&k| bc.e[&k].clone()).collect();
    let product = |parts: &[GroupPair]| -> GroupPair {
        let mut g = FinGroup::trivial();
        let mut sub = vec![0usize];
        for p in parts {
            let next = FinGroup::direct_product(&g, &p.group);
            // member (a, b) has index a * p.size + b
            let mut members = Vec::new();
            for &a in &sub {
                for &b in &p.sub.members {
                    members.push(a * p.group.size + b);
                }
            }
            members.sort_unstable();
            g = next;
            sub = members;
        }
        GroupPair { group: g, sub: Subgroup { members: sub } }
    };
    let total_d = product(&d_parts);
    let total_e = product(&e_parts);
    // index arithmetic: mixed-radix decomposition, most significant first
    let split = |parts: &[GroupPair], mut x: usize| -> Vec<usize> {
        let mut out = vec![0; parts.len()];
        for i in (0..parts.len()).rev() {
            out[i] = x % parts[i].group.size;
            x /= parts[i].group.size;
        }
        out
    };
    let join = |parts: &[GroupPair], xs: &[usize]| -> usize {
        let mut x = 0usize;
        for (i, p) in parts.iter().enumerate() {
            x = x * p.group.size + xs[i];
        }
        x
    };
    let blockwise = |dom_keys: &[Deg],
                     dom_parts: &[GroupPair],
                     cod_keys: &[Deg],
                     cod_parts: &[GroupPair],
                     dom_obj: &GroupPair,
                     cod_obj: &GroupPair,
                     rule: &dyn Fn(Deg) -> Option<(Deg, QuasiMap)>|
     -> Result<QuasiMap, HomologError> {
        let mut map = Vec::with_capacity(dom_obj.group.size);
        for x in 0..dom_obj.group.size {
            let xs = split(dom_parts, x);
            let mut ys = vec![0usize; cod_parts.len()];
            for (i, &k) in dom_keys.iter().enumerate() {
                if let Some((target, f)) = rule(k) {
                    if let Some(j) = cod_keys.iter().position(|&t| t == target) {
                        ys[j] = f.map[xs[i]];
                    }
                }
            }
            map.push(join(cod_parts, &ys));
        }
        QuasiMap::new(dom_obj.clone(), cod_obj.clone(), map)
    };
    let u = blockwise(&d_keys, &d_parts, &d_keys, &d_parts, &total_d, &total_d, &|(n, p)| {
        bc.u.get(&(n, p + 1)).map(|f| ((n, p + 1), f.clone()))
    })?;
    let v = blockwise(&d_keys, &d_parts, &e_keys, &e_parts, &total_d, &total_e, &|k| {
        bc.v.get(&k).map(|f| (k, f.clone()))
    })?;
    let del = blockwise(&e_keys, &e_parts, &d_keys, &d_parts, &total_e, &total_d, &|(n, p)| {
        bc.del.get(&(n, p)).map(|f| ((n - 1, p - 1), f.clone()))
    })?;
    crate::couple::Couple::new(c, c.canonical(&u), c.canonical(&v), c.canonical(&del))
}
