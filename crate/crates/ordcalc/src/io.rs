//! JSON documents for semigroups, relations, actions, morphisms, pairs and
//! reports. Element names live here; the engine works on indices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rel::Relation;
use crate::report::AxiomReport;
use crate::wsemi::{FiniteMonoid, WMorphism, WSemigroup};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("E_JSON: malformed JSON: {0}")]
    Json(String),
    #[error("E_SCHEMA: {0}")]
    Schema(String),
    #[error("E_ADD_SHAPE: addition table must be square over the element list ({0})")]
    AddShape(String),
    #[error("E_NAME: {0}")]
    Name(String),
    #[error("E_STRUCT: {0}")]
    Structure(String),
}

impl IoError {
    pub fn code(&self) -> &'static str {
        match self {
            IoError::Json(_) => "E_JSON",
            IoError::Schema(_) => "E_SCHEMA",
            IoError::AddShape(_) => "E_ADD_SHAPE",
            IoError::Name(_) => "E_NAME",
            IoError::Structure(_) => "E_STRUCT",
        }
    }
}

pub type IoResult<T> = std::result::Result<T, IoError>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupDoc {
    pub kind: String,
    pub elements: Vec<String>,
    pub zero: String,
    pub add: Vec<Vec<String>>,
    pub prec: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    pub kind: String,
    pub on: String,
    pub pairs: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub kind: String,
    pub on: String,
    pub generators: Vec<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub kind: String,
    pub from: String,
    pub to: String,
    pub map: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    pub kind: String,
    pub on: String,
    pub aux: Vec<[String; 2]>,
    pub order: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Document {
    Semigroup(SemigroupDoc),
    Relation(RelationDoc),
    Action(ActionDoc),
    Morphism(MorphismDoc),
    Pair(PairDoc),
}

impl Document {
    pub fn kind(&self) -> &str {
        match self {
            Document::Semigroup(_) => "semigroup",
            Document::Relation(_) => "relation",
            Document::Action(_) => "action",
            Document::Morphism(_) => "morphism",
            Document::Pair(_) => "pair",
        }
    }
}

#[derive(Deserialize)]
struct KindProbe {
    kind: String,
}

pub fn parse(bytes: &[u8]) -> IoResult<Document> {
    let text = std::str::from_utf8(bytes).map_err(|e| IoError::Json(e.to_string()))?;
    let probe: KindProbe = serde_json::from_str(text).map_err(|e| {
        if serde_json::from_str::<serde_json::Value>(text).is_err() {
            IoError::Json(e.to_string())
        } else {
            IoError::Schema(format!("missing or invalid kind tag: {e}"))
        }
    })?;
    let doc = match probe.kind.as_str() {
        "semigroup" => Document::Semigroup(parse_typed(text)?),
        "relation" => Document::Relation(parse_typed(text)?),
        "action" => Document::Action(parse_typed(text)?),
        "morphism" => Document::Morphism(parse_typed(text)?),
        "pair" => Document::Pair(parse_typed(text)?),
        other => return Err(IoError::Schema(format!("unknown kind {other:?}"))),
    };
    validate_names(&doc)?;
    Ok(doc)
}

fn parse_typed<'a, T: Deserialize<'a>>(text: &'a str) -> IoResult<T> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        if msg.contains("add") && (msg.contains("length") || msg.contains("expected")) {
            IoError::AddShape(msg)
        } else {
            IoError::Schema(msg)
        }
    })
}

pub fn serialize(doc: &Document) -> Vec<u8> {
    let mut out = match doc {
        Document::Semigroup(d) => serde_json::to_string_pretty(d),
        Document::Relation(d) => serde_json::to_string_pretty(d),
        Document::Action(d) => serde_json::to_string_pretty(d),
        Document::Morphism(d) => serde_json::to_string_pretty(d),
        Document::Pair(d) => serde_json::to_string_pretty(d),
    }
    .expect("documents serialize")
    .into_bytes();
    out.push(b'\n');
    out
}

fn validate_names(doc: &Document) -> IoResult<()> {
    match doc {
        Document::Semigroup(d) => {
            let idx = name_index(&d.elements)?;
            let n = d.elements.len();
            if n == 0 {
                return Err(IoError::Schema("element list is empty".into()));
            }
            resolve(&idx, &d.zero)?;
            if d.add.len() != n {
                return Err(IoError::AddShape(format!(
                    "{} rows for {} elements",
                    d.add.len(),
                    n
                )));
            }
            for (i, row) in d.add.iter().enumerate() {
                if row.len() != n {
                    return Err(IoError::AddShape(format!(
                        "row {i} has {} entries for {} elements",
                        row.len(),
                        n
                    )));
                }
                for v in row {
                    resolve(&idx, v)?;
                }
            }
            for [a, b] in &d.prec {
                resolve(&idx, a)?;
                resolve(&idx, b)?;
            }
            Ok(())
        }
        Document::Relation(d) => {
            for [a, b] in &d.pairs {
                if a.is_empty() || b.is_empty() {
                    return Err(IoError::Name("empty element name".into()));
                }
            }
            Ok(())
        }
        Document::Action(_) | Document::Morphism(_) | Document::Pair(_) => Ok(()),
    }
}

fn name_index(elements: &[String]) -> IoResult<BTreeMap<&str, usize>> {
    let mut idx = BTreeMap::new();
    for (i, name) in elements.iter().enumerate() {
        if idx.insert(name.as_str(), i).is_some() {
            return Err(IoError::Name(format!("duplicate element name {name:?}")));
        }
    }
    Ok(idx)
}

fn resolve(idx: &BTreeMap<&str, usize>, name: &str) -> IoResult<usize> {
    idx.get(name)
        .copied()
        .ok_or_else(|| IoError::Name(format!("unknown element name {name:?}")))
}

/// A semigroup together with its element names.
#[derive(Clone, Debug)]
pub struct NamedSemigroup {
    pub names: Vec<String>,
    pub semigroup: WSemigroup,
}

impl NamedSemigroup {
    pub fn index_of(&self, name: &str) -> IoResult<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| IoError::Name(format!("unknown element name {name:?}")))
    }
}

pub fn semigroup_from_doc(doc: &SemigroupDoc) -> IoResult<NamedSemigroup> {
    let idx = name_index(&doc.elements)?;
    let n = doc.elements.len();
    let zero = resolve(&idx, &doc.zero)?;
    let mut add = vec![0usize; n * n];
    for (i, row) in doc.add.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            add[i * n + j] = resolve(&idx, v)?;
        }
    }
    let monoid = FiniteMonoid::new(n, zero, add)
        .map_err(|e| IoError::Structure(e.to_string()))?;
    let mut prec = Relation::empty(n);
    for [a, b] in &doc.prec {
        prec.insert(resolve(&idx, a)?, resolve(&idx, b)?);
    }
    let semigroup =
        WSemigroup::new(monoid, prec).map_err(|e| IoError::Structure(e.to_string()))?;
    Ok(NamedSemigroup {
        names: doc.elements.clone(),
        semigroup,
    })
}

pub fn semigroup_to_doc(named: &NamedSemigroup) -> SemigroupDoc {
    let s = &named.semigroup;
    let n = s.size();
    SemigroupDoc {
        kind: "semigroup".into(),
        elements: named.names.clone(),
        zero: named.names[s.zero()].clone(),
        add: (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| named.names[s.monoid.add(i, j)].clone())
                    .collect()
            })
            .collect(),
        prec: s
            .prec
            .pairs()
            .into_iter()
            .map(|(a, b)| [named.names[a].clone(), named.names[b].clone()])
            .collect(),
    }
}

pub fn relation_from_doc(doc: &RelationDoc, on: &NamedSemigroup) -> IoResult<Relation> {
    let mut r = Relation::empty(on.semigroup.size());
    for [a, b] in &doc.pairs {
        r.insert(on.index_of(a)?, on.index_of(b)?);
    }
    Ok(r)
}

pub fn relation_to_doc(r: &Relation, on: &NamedSemigroup, on_ref: &str) -> RelationDoc {
    RelationDoc {
        kind: "relation".into(),
        on: on_ref.to_string(),
        pairs: r
            .pairs()
            .into_iter()
            .map(|(a, b)| [on.names[a].clone(), on.names[b].clone()])
            .collect(),
    }
}

pub fn pair_to_doc(p: &crate::pairs::Pair, on: &NamedSemigroup, on_ref: &str) -> PairDoc {
    PairDoc {
        kind: "pair".into(),
        on: on_ref.to_string(),
        aux: p
            .aux
            .pairs()
            .into_iter()
            .map(|(a, b)| [on.names[a].clone(), on.names[b].clone()])
            .collect(),
        order: p
            .order
            .pairs()
            .into_iter()
            .map(|(a, b)| [on.names[a].clone(), on.names[b].clone()])
            .collect(),
    }
}

pub fn pair_from_doc(doc: &PairDoc, on: &NamedSemigroup) -> IoResult<crate::pairs::Pair> {
    let n = on.semigroup.size();
    let mut aux = Relation::empty(n);
    for [a, b] in &doc.aux {
        aux.insert(on.index_of(a)?, on.index_of(b)?);
    }
    let mut order = Relation::empty(n);
    for [a, b] in &doc.order {
        order.insert(on.index_of(a)?, on.index_of(b)?);
    }
    Ok(crate::pairs::Pair::new(aux, order))
}

pub fn action_from_doc(
    doc: &ActionDoc,
    on: &NamedSemigroup,
) -> IoResult<Vec<Vec<usize>>> {
    let n = on.semigroup.size();
    let mut gens = Vec::new();
    for (gi, table) in doc.generators.iter().enumerate() {
        let mut perm = vec![usize::MAX; n];
        for (from, to) in table {
            perm[on.index_of(from)?] = on.index_of(to)?;
        }
        if perm.contains(&usize::MAX) {
            return Err(IoError::Schema(format!(
                "generator {gi} does not map every element"
            )));
        }
        gens.push(perm);
    }
    Ok(gens)
}

pub fn action_to_doc(gens: &[Vec<usize>], on: &NamedSemigroup, on_ref: &str) -> ActionDoc {
    ActionDoc {
        kind: "action".into(),
        on: on_ref.to_string(),
        generators: gens
            .iter()
            .map(|perm| {
                perm.iter()
                    .enumerate()
                    .map(|(from, &to)| (on.names[from].clone(), on.names[to].clone()))
                    .collect()
            })
            .collect(),
    }
}

pub fn morphism_from_doc(
    doc: &MorphismDoc,
    from: &NamedSemigroup,
    to: &NamedSemigroup,
) -> IoResult<WMorphism> {
    let mut map = vec![usize::MAX; from.semigroup.size()];
    for (a, b) in &doc.map {
        map[from.index_of(a)?] = to.index_of(b)?;
    }
    if map.contains(&usize::MAX) {
        return Err(IoError::Schema("map does not cover every element".into()));
    }
    WMorphism::new(from.semigroup.clone(), to.semigroup.clone(), map)
        .map_err(|e| IoError::Structure(e.to_string()))
}

/// Report envelope printed by the CLI: element names travel with the
/// index-based witnesses so that every witness re-validates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub kind: String,
    pub command: String,
    pub elements: Vec<String>,
    pub passed: bool,
    pub reports: Vec<AxiomReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<serde_json::Value>,
}

impl ReportEnvelope {
    pub fn new(command: &str, elements: Vec<String>) -> Self {
        ReportEnvelope {
            kind: "report".into(),
            command: command.into(),
            elements,
            passed: true,
            reports: Vec::new(),
            payload: None,
        }
    }

    pub fn push(&mut self, rep: AxiomReport) {
        self.passed &= rep.all_passed();
        self.reports.push(rep);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_string_pretty(self)
            .expect("report serializes")
            .into_bytes();
        out.push(b'\n');
        out
    }
}
