//! Versioned JSON documents for objects, morphisms, couples, and reports.
//!
//! Every emitted document carries `"schema": "homolog/1"` at the top level
//! and a `"kind"` tag naming its payload. Loaders re-validate the payload
//! through the same constructors the library uses internally, so a parsed
//! document is as trustworthy as a programmatically built value. Emission is
//! canonical (stable field order, pretty-printed, trailing newline), which
//! makes repeated runs byte-identical.

use serde::{Deserialize, Serialize};

use crate::act::{ActMap, Action};
use crate::cat::AxiomReport;
use crate::couple::Couple;
use crate::filtered::FilteredComplex;
use crate::finite::{FinGroup, FinLattice, Subgroup};
use crate::gp2::{Gp2, GroupPair, PairMap};
use crate::ltc::Connection;
use crate::ngp::{Ngp, QuasiMap};
use crate::set2::{SetPair, SetPairMap};
use crate::spectral::TowerData;
use crate::HomologError;

pub const SCHEMA: &str = "homolog/1";

// ---------------------------------------------------------------------------
// Document payloads
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupJson {
    pub size: usize,
    pub table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub size: usize,
    pub leq: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionJson {
    pub dom: LatticeJson,
    pub cod: LatticeJson,
    pub lower: Vec<usize>,
    pub upper: Vec<usize>,
}

/// Group pair: a group with a distinguished subgroup, given as a sorted list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupPairJson {
    pub group: GroupJson,
    pub sub: Vec<usize>,
}

/// A map between group pairs; doubles as a pair homomorphism and as a
/// quasi-homomorphism, depending on the instance it is read into.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairMapJson {
    pub dom: GroupPairJson,
    pub cod: GroupPairJson,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetPairJson {
    pub size: usize,
    pub base: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetPairMapJson {
    pub dom: SetPairJson,
    pub cod: SetPairJson,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionJson {
    pub points: usize,
    pub group: GroupJson,
    pub act: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActMapJson {
    pub dom: ActionJson,
    pub cod: ActionJson,
    pub fprime: Vec<usize>,
    pub fsecond: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubquotientJson {
    pub ambient: GroupPairJson,
    pub num: Vec<usize>,
    pub den: Vec<usize>,
}

/// An unbigraded couple over group pairs: `instance` selects the category
/// ("ngp" or "gp2") the morphism tables are read into.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoupleJson {
    pub instance: String,
    pub objects: CoupleObjectsJson,
    pub u: MapTableJson,
    pub v: MapTableJson,
    pub del: MapTableJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoupleObjectsJson {
    pub d: GroupPairJson,
    pub e: GroupPairJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapTableJson {
    pub map: Vec<usize>,
}

/// The five morphisms of a normal factorisation, as value tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorisationJson {
    pub ker: Vec<usize>,
    pub ncm: Vec<usize>,
    pub central: Vec<usize>,
    pub nim: Vec<usize>,
    pub cok: Vec<usize>,
}

/// One spectral-page cell: the numerator/denominator of the subquotient of
/// E at (n, p) on page r, its dimension label, and the dʳ value table when
/// the differential out of this cell exists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PageCellJson {
    pub r: usize,
    pub n: i64,
    pub p: i64,
    pub num: Vec<usize>,
    pub den: Vec<usize>,
    pub size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<PageDiffJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PageDiffJson {
    pub target_n: i64,
    pub target_p: i64,
    pub table: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PageDumpJson {
    pub cells: Vec<PageCellJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditJson {
    pub instance: String,
    pub reports: Vec<AxiomReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckJson {
    pub checks: usize,
    pub failures: Vec<String>,
}

// ---------------------------------------------------------------------------
// Envelope
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Group(GroupJson),
    Lattice(LatticeJson),
    Connection(ConnectionJson),
    GroupPair(GroupPairJson),
    PairMap(PairMapJson),
    SetPair(SetPairJson),
    SetPairMap(SetPairMapJson),
    Action(ActionJson),
    ActMap(ActMapJson),
    Subquotient(SubquotientJson),
    Couple(CoupleJson),
    Tower(TowerData),
    FilteredComplex(FilteredComplex),
    Factorisation(FactorisationJson),
    PageDump(PageDumpJson),
    Audit(AuditJson),
    Check(CheckJson),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub schema: String,
    #[serde(flatten)]
    pub payload: Payload,
}

impl Document {
    pub fn new(payload: Payload) -> Document {
        Document { schema: SCHEMA.into(), payload }
    }
}

/// Canonical emission: pretty JSON with a trailing newline.
pub fn emit(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialise");
    s.push('\n');
    s
}

/// Parse and check the envelope; payload validation is per-kind (below).
pub fn parse(text: &str) -> Result<Document, HomologError> {
    let doc: Document = serde_json::from_str(text)
        .map_err(|e| HomologError::Invalid(format!("malformed document: {e}")))?;
    if doc.schema != SCHEMA {
        return Err(HomologError::Invalid(format!(
            "unsupported schema {:?}, expected {SCHEMA:?}",
            doc.schema
        )));
    }
    Ok(doc)
}

// ---------------------------------------------------------------------------
// Validating conversions
// ---------------------------------------------------------------------------

impl GroupJson {
    pub fn to_group(&self) -> Result<FinGroup, HomologError> {
        let g = FinGroup::new(self.table.clone())?;
        if g.size != self.size {
            return Err(HomologError::Invalid("declared group size disagrees".into()));
        }
        Ok(g)
    }
    pub fn of(g: &FinGroup) -> GroupJson {
        GroupJson { size: g.size, table: g.table.clone() }
    }
}

impl LatticeJson {
    /// Meet/join tables and bounds are derived and verified on load.
    pub fn to_lattice(&self) -> Result<FinLattice, HomologError> {
        if self.leq.len() != self.size {
            return Err(HomologError::Invalid("declared lattice size disagrees".into()));
        }
        FinLattice::from_leq(self.leq.clone())
    }
    pub fn of(l: &FinLattice) -> LatticeJson {
        LatticeJson { size: l.size, leq: l.leq.clone() }
    }
}

impl ConnectionJson {
    pub fn to_connection(&self) -> Result<Connection, HomologError> {
        Connection::new(
            self.dom.to_lattice()?,
            self.cod.to_lattice()?,
            self.lower.clone(),
            self.upper.clone(),
        )
    }
    pub fn of(f: &Connection) -> ConnectionJson {
        ConnectionJson {
            dom: LatticeJson::of(&f.dom),
            cod: LatticeJson::of(&f.cod),
            lower: f.lower.clone(),
            upper: f.upper.clone(),
        }
    }
}

impl GroupPairJson {
    pub fn to_pair(&self) -> Result<GroupPair, HomologError> {
        let group = self.group.to_group()?;
        GroupPair::new(group, Subgroup { members: self.sub.clone() })
    }
    pub fn of(p: &GroupPair) -> GroupPairJson {
        GroupPairJson { group: GroupJson::of(&p.group), sub: p.sub.members.clone() }
    }
}

impl PairMapJson {
    pub fn to_pair_map(&self) -> Result<PairMap, HomologError> {
        PairMap::new(self.dom.to_pair()?, self.cod.to_pair()?, self.map.clone())
    }
    pub fn to_quasi_map(&self) -> Result<QuasiMap, HomologError> {
        QuasiMap::new(self.dom.to_pair()?, self.cod.to_pair()?, self.map.clone())
    }
    pub fn of_pair_map(f: &PairMap) -> PairMapJson {
        PairMapJson {
            dom: GroupPairJson::of(&f.dom),
            cod: GroupPairJson::of(&f.cod),
            map: f.map.clone(),
        }
    }
    pub fn of_quasi_map(f: &QuasiMap) -> PairMapJson {
        PairMapJson {
            dom: GroupPairJson::of(&f.dom),
            cod: GroupPairJson::of(&f.cod),
            map: f.map.clone(),
        }
    }
}

impl SetPairJson {
    pub fn to_set_pair(&self) -> Result<SetPair, HomologError> {
        SetPair::new(self.size, self.base.clone())
    }
    pub fn of(p: &SetPair) -> SetPairJson {
        SetPairJson { size: p.size, base: p.base.clone() }
    }
}

impl SetPairMapJson {
    pub fn to_map(&self) -> Result<SetPairMap, HomologError> {
        SetPairMap::new(self.dom.to_set_pair()?, self.cod.to_set_pair()?, self.map.clone())
    }
    pub fn of(f: &SetPairMap) -> SetPairMapJson {
        SetPairMapJson {
            dom: SetPairJson::of(&f.dom),
            cod: SetPairJson::of(&f.cod),
            map: f.map.clone(),
        }
    }
}

impl ActionJson {
    pub fn to_action(&self) -> Result<Action, HomologError> {
        let a = Action::new(self.points, self.group.to_group()?, self.act.clone())?;
        Ok(a)
    }
    pub fn of(a: &Action) -> ActionJson {
        ActionJson { points: a.points, group: GroupJson::of(&a.group), act: a.act.clone() }
    }
}

impl ActMapJson {
    pub fn to_map(&self) -> Result<ActMap, HomologError> {
        ActMap::new(
            self.dom.to_action()?,
            self.cod.to_action()?,
            self.fprime.clone(),
            self.fsecond.clone(),
        )
    }
    pub fn of(f: &ActMap) -> ActMapJson {
        ActMapJson {
            dom: ActionJson::of(&f.dom),
            cod: ActionJson::of(&f.cod),
            fprime: f.fprime.clone(),
            fsecond: f.fsecond.clone(),
        }
    }
}

impl CoupleJson {
    pub fn to_ngp_couple(&self, c: &Ngp) -> Result<Couple<Ngp>, HomologError> {
        let d = self.objects.d.to_pair()?;
        let e = self.objects.e.to_pair()?;
        let u = QuasiMap::new(d.clone(), d.clone(), self.u.map.clone())?;
        let v = QuasiMap::new(d.clone(), e.clone(), self.v.map.clone())?;
        let del = QuasiMap::new(e, d, self.del.map.clone())?;
        Couple::new(c, u, v, del)
    }
    pub fn to_gp2_couple(&self, c: &Gp2) -> Result<Couple<Gp2>, HomologError> {
        let d = self.objects.d.to_pair()?;
        let e = self.objects.e.to_pair()?;
        let u = PairMap::new(d.clone(), d.clone(), self.u.map.clone())?;
        let v = PairMap::new(d.clone(), e.clone(), self.v.map.clone())?;
        let del = PairMap::new(e, d, self.del.map.clone())?;
        Couple::new(c, u, v, del)
    }
    pub fn of_ngp(cp: &Couple<Ngp>) -> CoupleJson {
        CoupleJson {
            instance: "ngp".into(),
            objects: CoupleObjectsJson {
                d: GroupPairJson::of(&cp.u.dom),
                e: GroupPairJson::of(&cp.v.cod),
            },
            u: MapTableJson { map: cp.u.map.clone() },
            v: MapTableJson { map: cp.v.map.clone() },
            del: MapTableJson { map: cp.del.map.clone() },
        }
    }
    pub fn of_gp2(cp: &Couple<Gp2>) -> CoupleJson {
        CoupleJson {
            instance: "gp2".into(),
            objects: CoupleObjectsJson {
                d: GroupPairJson::of(&cp.u.dom),
                e: GroupPairJson::of(&cp.v.cod),
            },
            u: MapTableJson { map: cp.u.map.clone() },
            v: MapTableJson { map: cp.v.map.clone() },
            del: MapTableJson { map: cp.del.map.clone() },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::FinGroup;

    fn roundtrip(doc: Document) {
        let text = emit(&doc);
        let back = parse(&text).unwrap();
        assert_eq!(doc, back);
        // canonical emission: re-emitting is byte-identical
        assert_eq!(text, emit(&back));
    }

    #[test]
    fn every_kind_parses_its_own_output() {
        let z4 = FinGroup::cyclic(4);
        let group = GroupJson::of(&z4);
        roundtrip(Document::new(Payload::Group(group.clone())));

        let chain = FinLattice::chain(3);
        roundtrip(Document::new(Payload::Lattice(LatticeJson::of(&chain))));

        let conn = Connection::identity(&chain);
        roundtrip(Document::new(Payload::Connection(ConnectionJson::of(&conn))));

        let pair = GroupPair::new(z4.clone(), Subgroup { members: vec![0, 2] }).unwrap();
        roundtrip(Document::new(Payload::GroupPair(GroupPairJson::of(&pair))));

        let f = PairMap::new(pair.clone(), pair.clone(), vec![0, 1, 2, 3]).unwrap();
        roundtrip(Document::new(Payload::PairMap(PairMapJson::of_pair_map(&f))));

        let sp = SetPair::new(3, vec![0]).unwrap();
        roundtrip(Document::new(Payload::SetPair(SetPairJson::of(&sp))));
        let sf = SetPairMap::new(sp.clone(), sp.clone(), vec![0, 1, 2]).unwrap();
        roundtrip(Document::new(Payload::SetPairMap(SetPairMapJson::of(&sf))));

        let a = Action::discrete(2);
        roundtrip(Document::new(Payload::Action(ActionJson::of(&a))));
        let am = ActMap::new(a.clone(), a.clone(), vec![0, 1], vec![0]).unwrap();
        roundtrip(Document::new(Payload::ActMap(ActMapJson::of(&am))));

        roundtrip(Document::new(Payload::Subquotient(SubquotientJson {
            ambient: GroupPairJson::of(&pair),
            num: vec![0, 1, 2, 3],
            den: vec![0, 2],
        })));

        let cx = FilteredComplex::random(1, 2, 2, 4);
        roundtrip(Document::new(Payload::FilteredComplex(cx)));

        roundtrip(Document::new(Payload::PageDump(PageDumpJson {
            cells: vec![PageCellJson {
                r: 2,
                n: 1,
                p: 0,
                num: vec![0, 1],
                den: vec![0],
                size: 2,
                diff: Some(PageDiffJson { target_n: 0, target_p: -2, table: vec![0, 0] }),
            }],
        })));

        roundtrip(Document::new(Payload::Check(CheckJson {
            checks: 3,
            failures: vec!["example".into()],
        })));
    }

    #[test]
    fn parsed_documents_validate_through_constructors() {
        let bad = GroupJson { size: 2, table: vec![vec![0, 1], vec![1, 1]] };
        assert!(bad.to_group().is_err());

        let good = GroupJson::of(&FinGroup::cyclic(2));
        assert_eq!(good.to_group().unwrap().size, 2);

        // declared size must agree with the table
        let lying = GroupJson { size: 3, table: good.table.clone() };
        assert!(lying.to_group().is_err());
    }

    #[test]
    fn schema_version_is_enforced() {
        let doc = Document::new(Payload::SetPair(SetPairJson { size: 1, base: vec![0] }));
        let mut text = emit(&doc);
        text = text.replace("homolog/1", "homolog/2");
        assert!(parse(&text).is_err());
    }

    #[test]
    fn couple_documents_reconstruct_their_couples() {
        let c = Ngp { max_group: 16 };
        let z4 = GroupPair::new(FinGroup::cyclic(4), Subgroup::trivial()).unwrap();
        let couples = crate::couple::enumerate_exact_couples(&c, &z4, &z4);
        assert!(!couples.is_empty());
        let doc = CoupleJson::of_ngp(&couples[0]);
        let back = doc.to_ngp_couple(&c).unwrap();
        assert_eq!(back.u, couples[0].u);
        assert_eq!(back.v, couples[0].v);
        assert_eq!(back.del, couples[0].del);
    }
}
