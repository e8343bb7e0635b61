//! Exact couples (D, E, u, v, ∂) in a semiexact category, the audit of their
//! exactness clauses, the derived couple built through regular induction on
//! subquotients, and iterated derivation by the closed formulas
//! Dʳ = Nim uʳ⁻¹, Eʳ = ∂*(Dʳ)/v⁎(Ker uʳ⁻¹).

use crate::cat::{is_exact, nim, normal_factorise, Semiexact};
use crate::nsb::{direct_image, inverse_image, is_left_modular_on, is_right_modular_on};
use crate::subquotient::{
    quotient_sq, regular_induction, subobject_sq, subquotient, Subquotient,
};
use crate::HomologError;
use serde::{Deserialize, Serialize};

/// A triangle D --u--> D --v--> E --∂--> D in one semiexact category.
#[derive(Clone, Debug)]
pub struct Couple<C: Semiexact> {
    pub d: C::Obj,
    pub e: C::Obj,
    pub u: C::Mor,
    pub v: C::Mor,
    pub del: C::Mor,
}

impl<C: Semiexact> Couple<C> {
    pub fn new(c: &C, u: C::Mor, v: C::Mor, del: C::Mor) -> Result<Self, HomologError> {
        let d = c.dom(&u);
        let e = c.cod(&v);
        if c.cod(&u) != d || c.dom(&v) != d || c.dom(&del) != e || c.cod(&del) != d {
            return Err(HomologError::Invalid(
                "couple morphisms do not close the triangle D → D → E → D".into(),
            ));
        }
        Ok(Couple { d, e, u, v, del })
    }
}

/// u^r; r = 0 gives the identity of D.
pub fn u_power<C: Semiexact>(c: &C, cp: &Couple<C>, r: usize) -> C::Mor {
    let mut p = c.identity(&cp.d);
    for _ in 0..r {
        p = c.compose(&cp.u, &p);
    }
    p
}

/// Smallest h with Nim u^h = Nim u^{h+1} and Ker u^h = Ker u^{h+1}; the
/// exactness clauses are checked up to this horizon, past which u^r repeats
/// the same normal image and kernel forever on a finite instance.
pub fn nilpotence_horizon<C: Semiexact>(c: &C, cp: &Couple<C>) -> usize {
    let mut r = 1;
    loop {
        let a = u_power(c, cp, r);
        let b = u_power(c, cp, r + 1);
        if nim(c, &a) == nim(c, &b) && c.kernel(&a) == c.kernel(&b) {
            return r;
        }
        r += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoupleReport {
    /// nim u = ker v, nim v = ker ∂, nim ∂ = ker u.
    pub triangle: [bool; 3],
    /// d = v∂ squares to null.
    pub dd_null: bool,
    /// all u^r exact up to the nilpotence horizon.
    pub u_powers_exact: bool,
    /// v left modular on Ker u^r for every r up to the horizon.
    pub v_left_modular: bool,
    /// ∂ right modular on Nim u^r for every r up to the horizon.
    pub del_right_modular: bool,
    pub horizon: usize,
}

impl CoupleReport {
    /// Clause (a) only: a semiexact couple.
    pub fn is_semiexact(&self) -> bool {
        self.triangle.iter().all(|&b| b) && self.dd_null
    }
    /// All clauses (a)–(d).
    pub fn is_exact(&self) -> bool {
        self.is_semiexact() && self.u_powers_exact && self.v_left_modular && self.del_right_modular
    }
    pub fn failing_clause(&self) -> Option<&'static str> {
        if !self.triangle[0] {
            Some("nim u = ker v")
        } else if !self.triangle[1] {
            Some("nim v = ker ∂")
        } else if !self.triangle[2] {
            Some("nim ∂ = ker u")
        } else if !self.dd_null {
            Some("dd null")
        } else if !self.u_powers_exact {
            Some("u-powers exact")
        } else if !self.v_left_modular {
            Some("v left modular on Ker u^r")
        } else if !self.del_right_modular {
            Some("∂ right modular on Nim u^r")
        } else {
            None
        }
    }
}

pub fn check_exact_couple<C: Semiexact>(c: &C, cp: &Couple<C>) -> CoupleReport {
    let triangle = [
        nim(c, &cp.u) == c.kernel(&cp.v),
        nim(c, &cp.v) == c.kernel(&cp.del),
        nim(c, &cp.del) == c.kernel(&cp.u),
    ];
    let d = c.compose(&cp.v, &cp.del);
    let dd_null = c.is_null(&c.compose(&d, &d));
    let horizon = nilpotence_horizon(c, cp);
    let mut u_powers_exact = true;
    let mut v_left_modular = true;
    let mut del_right_modular = true;
    for r in 1..=horizon {
        let ur = u_power(c, cp, r);
        u_powers_exact &= is_exact(c, &ur);
        v_left_modular &= is_left_modular_on(c, &cp.v, &c.kernel(&ur));
        del_right_modular &= is_right_modular_on(c, &cp.del, &nim(c, &ur));
    }
    CoupleReport { triangle, dd_null, u_powers_exact, v_left_modular, del_right_modular, horizon }
}

/// A derived couple together with the subquotient squares realising its
/// objects inside the original D and E, and the isomorphism i: Ncm u ≅ Nim u
/// through which v′ is defined.
pub struct Derived<C: Semiexact> {
    pub couple: Couple<C>,
    /// D-subobject square realising Dʳ = Nim u^{r-1}.
    pub d_sq: Subquotient<C>,
    /// E-subquotient square realising Eʳ.
    pub e_sq: Subquotient<C>,
    /// D-quotient square realising D̄ʳ = Ncm u^{r-1}.
    pub dbar_sq: Subquotient<C>,
    /// i: D̄ʳ → Dʳ, the central morphism of u^{r-1}.
    pub i: C::Mor,
}

/// The r-th derived couple by the closed formulas; r = 1 is a realisation of
/// the couple itself.
pub fn iterate<C: Semiexact>(c: &C, cp: &Couple<C>, r: usize) -> Result<Derived<C>, HomologError> {
    if r < 1 {
        return Err(HomologError::Operation("derivation order must be at least 1".into()));
    }
    let ur = u_power(c, cp, r - 1);
    let nim_ur = nim(c, &ur);
    let ker_ur = c.kernel(&ur);
    let d_sq = subobject_sq(c, &cp.d, &nim_ur).map_err(|e| {
        HomologError::Operation(format!("u^{} is not exact (clause (b) fails): {e}", r - 1))
    })?;
    let e_num = inverse_image(c, &cp.del, &nim_ur);
    let e_den = direct_image(c, &cp.v, &ker_ur);
    let e_sq = subquotient(c, &cp.e, &e_num, &e_den)?;
    let u2 = regular_induction(c, &cp.u, &d_sq, &d_sq)?;
    let del2 = regular_induction(c, &cp.del, &e_sq, &d_sq)?;
    let dbar_sq = quotient_sq(c, &cp.d, &ker_ur)?;
    let vbar = regular_induction(c, &cp.v, &dbar_sq, &e_sq)?;
    let nf = normal_factorise(c, &ur)?;
    let i_inv = c.inverse(&nf.central).ok_or_else(|| {
        HomologError::Operation(format!("central morphism of u^{} is not invertible", r - 1))
    })?;
    let v2 = c.compose(&vbar, &i_inv);
    Ok(Derived {
        couple: Couple {
            d: d_sq.object.clone(),
            e: e_sq.object.clone(),
            u: u2,
            v: v2,
            del: del2,
        },
        d_sq,
        e_sq,
        dbar_sq,
        i: nf.central,
    })
}

/// The derived couple C′ = C².
pub fn derive_couple<C: Semiexact>(c: &C, cp: &Couple<C>) -> Result<Derived<C>, HomologError> {
    iterate(c, cp, 2)
}

/// Transport a normal subobject x of the ambient, with Den ≤ x ≤ Num, to a
/// normal subobject of the realised subquotient (push through the h edge).
pub fn transport_nsb<C: Semiexact>(
    c: &C,
    sq: &Subquotient<C>,
    x: &C::Mor,
) -> Result<C::Mor, HomologError> {
    let into_num = c.lift_through_mono(x, &sq.m).ok_or_else(|| {
        HomologError::Operation("subobject does not lie below the numerator".into())
    })?;
    Ok(nim(c, &c.compose(&sq.h, &into_num)))
}

/// Enumerate the exact couples on a fixed pair of objects.
pub fn enumerate_exact_couples<C: Semiexact>(c: &C, d: &C::Obj, e: &C::Obj) -> Vec<Couple<C>> {
    let mut out = Vec::new();
    for u in c.hom(d, d) {
        for v in c.hom(d, e) {
            for del in c.hom(e, d) {
                let cp = Couple {
                    d: d.clone(),
                    e: e.clone(),
                    u: u.clone(),
                    v: v.clone(),
                    del: del.clone(),
                };
                if check_exact_couple(c, &cp).is_exact() {
                    out.push(cp);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{FinGroup, Subgroup};
    use crate::gp2::{GroupPair, PairMap};
    use crate::ngp::{Ngp, QuasiMap};

    fn plain(g: FinGroup) -> GroupPair {
        GroupPair { sub: Subgroup::trivial(), group: g }
    }

    fn hom(dom: &GroupPair, cod: &GroupPair, map: Vec<usize>) -> QuasiMap {
        QuasiMap::from_pair_map(&PairMap { dom: dom.clone(), cod: cod.clone(), map })
    }

    /// D = E = Z/4 with u = v = ∂ = multiplication by 2: each normal image
    /// and each kernel is {0,2}, so the triangle closes. Group homomorphisms
    /// are exact here, including the null powers of u.
    fn z4_couple() -> (Ngp, Couple<Ngp>) {
        let c = Ngp { max_group: 8 };
        let d = plain(FinGroup::cyclic(4));
        let e = plain(FinGroup::cyclic(4));
        let twice = vec![0, 2, 0, 2];
        let u = hom(&d, &d, twice.clone());
        let v = hom(&d, &e, twice.clone());
        let del = hom(&e, &d, twice);
        let cp = Couple::new(&c, u, v, del).unwrap();
        (c, cp)
    }

    #[test]
    fn couple_audit_clauses() {
        let (c, cp) = z4_couple();
        let rep = check_exact_couple(&c, &cp);
        assert!(rep.is_exact(), "{rep:?}");
        assert_eq!(rep.horizon, 2);
        // breaking the triangle is detected
        let bad = Couple { v: hom(&cp.d, &cp.e, vec![0, 0, 0, 0]), ..cp.clone() };
        let rep = check_exact_couple(&c, &bad);
        assert!(!rep.is_exact());
        assert_eq!(rep.failing_clause(), Some("nim u = ker v"));
        // a null E forces u to be an isomorphism for the triangle to close
        let d = plain(FinGroup::cyclic(4));
        let e = GroupPair {
            sub: Subgroup::whole(&FinGroup::trivial()),
            group: FinGroup::trivial(),
        };
        let idcp = Couple::new(
            &c,
            hom(&d, &d, vec![0, 1, 2, 3]),
            hom(&d, &e, vec![0; 4]),
            hom(&e, &d, vec![0]),
        )
        .unwrap();
        assert!(check_exact_couple(&c, &idcp).is_exact());
        let twocp = Couple::new(
            &c,
            hom(&d, &d, vec![0, 2, 0, 2]),
            hom(&d, &e, vec![0; 4]),
            hom(&e, &d, vec![0]),
        )
        .unwrap();
        assert!(!check_exact_couple(&c, &twocp).is_semiexact());
    }

    #[test]
    fn derived_couple_of_z4() {
        let (c, cp) = z4_couple();
        let der = derive_couple(&c, &cp).unwrap();
        // D′ = Nim u = {0,2} ≅ Z/2
        assert_eq!(der.couple.d.group.size, 2);
        let rep = check_exact_couple(&c, &der.couple);
        assert!(rep.is_exact(), "{rep:?}");
        // d = v∂ = multiplication by 4 = 0 on E, so E′ = ker d / nim d is all
        // of E
        assert_eq!(der.couple.e.group.size, 4);
        // u′ is null (2 + 2 = 0), so the third page has null operators on D′
        let der2 = iterate(&c, &cp, 3).unwrap();
        assert!(c.is_null(&der2.couple.u));
        assert!(check_exact_couple(&c, &der2.couple).is_exact());
    }

    #[test]
    fn theorem_derived_couple_is_exact() {
        // property sweep over every exact couple on small abelian pairs
        let c = Ngp { max_group: 8 };
        let z2 = FinGroup::cyclic(2);
        let z4 = FinGroup::cyclic(4);
        let v4 = FinGroup::direct_product(&z2, &z2);
        let mut objs = vec![
            plain(z2.clone()),
            plain(z4.clone()),
            plain(v4.clone()),
            GroupPair { sub: Subgroup { members: vec![0, 2] }, group: z4.clone() },
            GroupPair { sub: Subgroup { members: vec![0, 1] }, group: v4.clone() },
        ];
        objs.push(GroupPair { sub: Subgroup::whole(&z2), group: z2.clone() });
        objs.push(plain(FinGroup::trivial()));
        objs.push(plain(FinGroup::cyclic(3)));
        objs.push(GroupPair { sub: Subgroup::whole(&z4), group: z4.clone() });
        objs.push(GroupPair { sub: Subgroup::whole(&v4), group: v4.clone() });
        let mut seen = 0;
        for d in &objs {
            for e in &objs {
                for cp in enumerate_exact_couples(&c, d, e) {
                    let der = derive_couple(&c, &cp).unwrap();
                    let rep = check_exact_couple(&c, &der.couple);
                    assert!(rep.is_exact(), "derived couple fails: {rep:?} on {cp:?}");
                    // v, ∂ exact in the input makes v′, ∂′ exact in the output
                    if is_exact(&c, &cp.v) && is_exact(&c, &cp.del) {
                        assert!(is_exact(&c, &der.couple.v));
                        assert!(is_exact(&c, &der.couple.del));
                    }
                    seen += 1;
                }
            }
        }
        eprintln!("exact couples checked: {seen}");
        assert!(seen >= 100, "only {seen} exact couples enumerated");
    }

    #[test]
    fn iteration_matches_repeated_derivation() {
        let c = Ngp { max_group: 16 };
        let d = plain(FinGroup::cyclic(8));
        let e = plain(FinGroup::cyclic(4));
        // u = multiplication by 2 on Z/8; v kills Nim u and lands in {0,2};
        // ∂ has kernel {0,2} = Nim v and image {0,4} = Ker u
        let u = hom(&d, &d, (0..8).map(|x| (2 * x) % 8).collect());
        let v = hom(&d, &e, (0..8).map(|x| 2 * (x % 2)).collect());
        let del = hom(&e, &d, vec![0, 4, 0, 4]);
        let cp = Couple::new(&c, u, v, del).unwrap();
        assert!(check_exact_couple(&c, &cp).is_exact());
        // iterate(1) realises the couple itself
        let it1 = iterate(&c, &cp, 1).unwrap();
        assert_eq!(it1.couple.d.group.size, cp.d.group.size);
        assert_eq!(it1.couple.e.group.size, cp.e.group.size);
        // E^{r+1} inside E agrees with the homology of the r-th page:
        // transported along the page square, Num/Den of the next page are the
        // kernel and normal image of d^r
        for r in 1..=3 {
            let page = iterate(&c, &cp, r).unwrap();
            let next = iterate(&c, &cp, r + 1).unwrap();
            let dr = c.compose(&page.couple.v, &page.couple.del);
            let ker_dr = c.kernel(&dr);
            let nim_dr = nim(&c, &dr);
            assert_eq!(transport_nsb(&c, &page.e_sq, &next.e_sq.num).unwrap(), ker_dr);
            assert_eq!(transport_nsb(&c, &page.e_sq, &next.e_sq.den).unwrap(), nim_dr);
            // D^{r+1} is the normal image of u^{(r)} transported to the page
            assert_eq!(
                transport_nsb(&c, &page.d_sq, &next.d_sq.num).unwrap(),
                nim(&c, &page.couple.u)
            );
            // and the page derived again is an exact couple
            assert!(check_exact_couple(&c, &page.couple).is_exact());
        }
        // horizon-deep pages stabilise: page 4 and page 5 share Num/Den
        let p4 = iterate(&c, &cp, 4).unwrap();
        let p5 = iterate(&c, &cp, 5).unwrap();
        assert_eq!(p4.e_sq.num, p5.e_sq.num);
        assert_eq!(p4.e_sq.den, p5.e_sq.den);
    }
}
