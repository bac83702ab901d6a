//! JSON interchange documents. Every document carries a `schema` field;
//! maps name their endpoints by the sha256 of the endpoint's document.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bispan::{Bispan, BispanTripleSpec};
use crate::error::{Caps, Error, Result};
use crate::group::FiniteGroup;
use crate::groupoid::{FiniteGroupoid, GroupoidMap};
use crate::gset::{GSet, GSetMap};
use crate::spancat::{AdequateTripleSpec, GSetWorld, GroupoidWorld, MapClass, Span, World};

pub const GROUP_SCHEMA: &str = "group/1";
pub const GSET_SCHEMA: &str = "gset/1";
pub const GROUPOID_SCHEMA: &str = "groupoid/1";
pub const SPAN_SCHEMA: &str = "span/1";
pub const BISPAN_SCHEMA: &str = "bispan/1";
pub const MAP_SCHEMA: &str = "map/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub schema: String,
    pub name: String,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSetDoc {
    pub schema: String,
    pub group: GroupDoc,
    pub size: usize,
    /// Row `g` lists the image of every point under `g`.
    pub action: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidDoc {
    pub schema: String,
    pub objects: usize,
    /// `[source, target]` per morphism.
    pub morphisms: Vec<[usize; 2]>,
    /// `[g, f, g∘f]` for every composable pair.
    pub composition: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectDoc {
    GSet(GSetDoc),
    Groupoid(GroupoidDoc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    pub source: String,
    pub target: String,
    pub objects: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanDoc {
    pub schema: String,
    pub world: String,
    pub classes: [String; 2],
    pub objects: BTreeMap<String, ObjectDoc>,
    pub back: MapDoc,
    pub forward: MapDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BispanDoc {
    pub schema: String,
    pub world: String,
    pub classes: [String; 3],
    pub objects: BTreeMap<String, ObjectDoc>,
    pub restriction: MapDoc,
    pub norm: MapDoc,
    pub sum: MapDoc,
}

/// A single map with its endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFileDoc {
    pub schema: String,
    pub world: String,
    pub objects: BTreeMap<String, ObjectDoc>,
    pub map: MapDoc,
}

/// Lowercase hex sha256 of the compact serialization.
pub fn content_hash<T: Serialize>(doc: &T) -> String {
    let bytes = serde_json::to_vec(doc).expect("documents serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Pretty JSON with a trailing newline; the canonical on-disk form.
pub fn to_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn from_text<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
}

/// The `schema` field of an arbitrary document.
pub fn schema_of(text: &str) -> Result<String> {
    let v: serde_json::Value = from_text(text)?;
    v.get("schema")
        .and_then(|s| s.as_str())
        .map(str::to_owned)
        .ok_or_else(|| Error::Document("missing schema field".into()))
}

fn expect_schema(found: &str, want: &str) -> Result<()> {
    if found == want {
        Ok(())
    } else {
        Err(Error::Document(format!("expected schema {want}, found {found}")))
    }
}

pub fn group_doc(g: &FiniteGroup) -> GroupDoc {
    GroupDoc { schema: GROUP_SCHEMA.into(), name: g.name().into(), table: g.table_rows() }
}

pub fn group_from_doc(d: &GroupDoc) -> Result<FiniteGroup> {
    expect_schema(&d.schema, GROUP_SCHEMA)?;
    FiniteGroup::from_table(d.name.clone(), d.table.clone())
}

pub fn gset_doc(x: &GSet) -> GSetDoc {
    GSetDoc { schema: GSET_SCHEMA.into(), group: group_doc(x.group()), size: x.size(), action: x.action_rows() }
}

/// Reads a G-set, reusing `group` when the embedded group document matches it.
pub fn gset_from_doc(d: &GSetDoc, group: Option<&Arc<FiniteGroup>>) -> Result<GSet> {
    expect_schema(&d.schema, GSET_SCHEMA)?;
    let g = match group {
        Some(g) if group_doc(g) == d.group => g.clone(),
        _ => Arc::new(group_from_doc(&d.group)?),
    };
    if d.action.iter().any(|row| row.len() != d.size) {
        return Err(Error::Document("action rows do not match the size".into()));
    }
    GSet::new(g, d.action.clone())
}

pub fn groupoid_doc(x: &FiniteGroupoid) -> GroupoidDoc {
    GroupoidDoc {
        schema: GROUPOID_SCHEMA.into(),
        objects: x.object_count(),
        morphisms: x.morphisms().map(|f| [x.source(f), x.target(f)]).collect(),
        composition: x.composition_table().into_iter().map(|(g, f, h)| [g, f, h]).collect(),
    }
}

pub fn groupoid_from_doc(d: &GroupoidDoc, caps: &Caps) -> Result<FiniteGroupoid> {
    expect_schema(&d.schema, GROUPOID_SCHEMA)?;
    let morphisms = d.morphisms.iter().map(|&[s, t]| (s, t)).collect();
    let composition: Vec<_> = d.composition.iter().map(|&[g, f, h]| (g, f, h)).collect();
    FiniteGroupoid::from_tables(d.objects, morphisms, &composition, caps)
}

fn class_name(c: MapClass) -> &'static str {
    match c {
        MapClass::All => "all",
        MapClass::Isomorphisms => "isomorphisms",
        MapClass::Injective => "injective",
        MapClass::Surjective => "surjective",
        MapClass::Faithful => "faithful",
        MapClass::EClass => "full-connected",
    }
}

fn class_from_name(s: &str) -> Result<MapClass> {
    Ok(match s {
        "all" => MapClass::All,
        "isomorphisms" => MapClass::Isomorphisms,
        "injective" => MapClass::Injective,
        "surjective" => MapClass::Surjective,
        "faithful" => MapClass::Faithful,
        "full-connected" => MapClass::EClass,
        other => return Err(Error::Document(format!("unknown map class {other}"))),
    })
}

/// Worlds whose objects and maps have documents.
pub trait DocWorld: World {
    const NAME: &'static str;
    fn object_doc(&self, x: &Self::Object) -> ObjectDoc;
    fn object_from_doc(&self, d: &ObjectDoc, caps: &Caps) -> Result<Self::Object>;
    fn map_tables(&self, f: &Self::Map) -> (Vec<usize>, Vec<usize>);
    fn map_from_tables(&self, source: Self::Object, target: Self::Object, objects: Vec<usize>, morphisms: Vec<usize>)
        -> Result<Self::Map>;
}

impl DocWorld for GSetWorld {
    const NAME: &'static str = "gset";

    fn object_doc(&self, x: &GSet) -> ObjectDoc {
        ObjectDoc::GSet(gset_doc(x))
    }

    fn object_from_doc(&self, d: &ObjectDoc, _caps: &Caps) -> Result<GSet> {
        match d {
            ObjectDoc::GSet(d) => {
                let x = gset_from_doc(d, Some(&self.group))?;
                if !Arc::ptr_eq(x.group(), &self.group) {
                    return Err(Error::Mismatch("G-set over a different group".into()));
                }
                Ok(x)
            }
            ObjectDoc::Groupoid(_) => Err(Error::Document("expected a G-set object".into())),
        }
    }

    fn map_tables(&self, f: &GSetMap) -> (Vec<usize>, Vec<usize>) {
        (f.table().to_vec(), Vec::new())
    }

    fn map_from_tables(&self, source: GSet, target: GSet, objects: Vec<usize>, _morphisms: Vec<usize>) -> Result<GSetMap> {
        GSetMap::new(source, target, objects)
    }
}

impl DocWorld for GroupoidWorld {
    const NAME: &'static str = "groupoid";

    fn object_doc(&self, x: &Arc<FiniteGroupoid>) -> ObjectDoc {
        ObjectDoc::Groupoid(groupoid_doc(x))
    }

    fn object_from_doc(&self, d: &ObjectDoc, caps: &Caps) -> Result<Arc<FiniteGroupoid>> {
        match d {
            ObjectDoc::Groupoid(d) => Ok(Arc::new(groupoid_from_doc(d, caps)?)),
            ObjectDoc::GSet(_) => Err(Error::Document("expected a groupoid object".into())),
        }
    }

    fn map_tables(&self, f: &GroupoidMap) -> (Vec<usize>, Vec<usize>) {
        (f.object_table().to_vec(), f.morphism_table().to_vec())
    }

    fn map_from_tables(
        &self,
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Result<GroupoidMap> {
        GroupoidMap::new(source, target, objects, morphisms)
    }
}

struct Registry<'a, W: DocWorld> {
    world: &'a W,
    objects: BTreeMap<String, ObjectDoc>,
}

impl<W: DocWorld> Registry<'_, W> {
    fn add(&mut self, x: &W::Object) -> String {
        let d = self.world.object_doc(x);
        let h = content_hash(&d);
        self.objects.entry(h.clone()).or_insert(d);
        h
    }

    fn map(&mut self, f: &W::Map) -> MapDoc {
        let source = self.add(&self.world.source(f));
        let target = self.add(&self.world.target(f));
        let (objects, morphisms) = self.world.map_tables(f);
        MapDoc { source, target, objects, morphisms }
    }
}

struct Resolver<'a, W: DocWorld> {
    world: &'a W,
    docs: &'a BTreeMap<String, ObjectDoc>,
    cache: BTreeMap<String, W::Object>,
    caps: Caps,
}

impl<W: DocWorld> Resolver<'_, W> {
    fn object(&mut self, hash: &str) -> Result<W::Object> {
        if let Some(x) = self.cache.get(hash) {
            return Ok(x.clone());
        }
        let d = self.docs.get(hash).ok_or_else(|| Error::Document(format!("no object with hash {hash}")))?;
        if content_hash(d) != hash {
            return Err(Error::Document(format!("object {hash} does not match its hash")));
        }
        let x = self.world.object_from_doc(d, &self.caps)?;
        self.cache.insert(hash.to_owned(), x.clone());
        Ok(x)
    }

    fn map(&mut self, d: &MapDoc) -> Result<W::Map> {
        let s = self.object(&d.source)?;
        let t = self.object(&d.target)?;
        self.world.map_from_tables(s, t, d.objects.clone(), d.morphisms.clone())
    }
}

pub fn span_doc<W: DocWorld>(world: &W, s: &Span<W>) -> SpanDoc {
    let mut reg = Registry { world, objects: BTreeMap::new() };
    let back = reg.map(&s.back);
    let forward = reg.map(&s.forward);
    SpanDoc {
        schema: SPAN_SCHEMA.into(),
        world: W::NAME.into(),
        classes: [class_name(s.spec.backwards).into(), class_name(s.spec.forwards).into()],
        objects: reg.objects,
        back,
        forward,
    }
}

pub fn span_from_doc<W: DocWorld>(world: &W, d: &SpanDoc, caps: &Caps) -> Result<Span<W>> {
    expect_schema(&d.schema, SPAN_SCHEMA)?;
    if d.world != W::NAME {
        return Err(Error::Document(format!("span over {} where {} was expected", d.world, W::NAME)));
    }
    let spec = AdequateTripleSpec { backwards: class_from_name(&d.classes[0])?, forwards: class_from_name(&d.classes[1])? };
    let mut r = Resolver { world, docs: &d.objects, cache: BTreeMap::new(), caps: *caps };
    let back = r.map(&d.back)?;
    let forward = r.map(&d.forward)?;
    Span::new(world, back, forward, spec)
}

pub fn bispan_doc<W: DocWorld>(world: &W, b: &Bispan<W>) -> BispanDoc {
    let mut reg = Registry { world, objects: BTreeMap::new() };
    let restriction = reg.map(&b.restriction);
    let norm = reg.map(&b.norm);
    let sum = reg.map(&b.sum);
    BispanDoc {
        schema: BISPAN_SCHEMA.into(),
        world: W::NAME.into(),
        classes: [
            class_name(b.spec.restrictions).into(),
            class_name(b.spec.norms).into(),
            class_name(b.spec.sums).into(),
        ],
        objects: reg.objects,
        restriction,
        norm,
        sum,
    }
}

pub fn bispan_from_doc<W: DocWorld>(world: &W, d: &BispanDoc, caps: &Caps) -> Result<Bispan<W>> {
    expect_schema(&d.schema, BISPAN_SCHEMA)?;
    if d.world != W::NAME {
        return Err(Error::Document(format!("bispan over {} where {} was expected", d.world, W::NAME)));
    }
    let spec = BispanTripleSpec {
        restrictions: class_from_name(&d.classes[0])?,
        norms: class_from_name(&d.classes[1])?,
        sums: class_from_name(&d.classes[2])?,
    };
    let mut r = Resolver { world, docs: &d.objects, cache: BTreeMap::new(), caps: *caps };
    let restriction = r.map(&d.restriction)?;
    let norm = r.map(&d.norm)?;
    let sum = r.map(&d.sum)?;
    Bispan::new(world, restriction, norm, sum, spec)
}

pub fn map_doc<W: DocWorld>(world: &W, f: &W::Map) -> MapFileDoc {
    let mut reg = Registry { world, objects: BTreeMap::new() };
    let map = reg.map(f);
    MapFileDoc { schema: MAP_SCHEMA.into(), world: W::NAME.into(), objects: reg.objects, map }
}

pub fn map_from_doc<W: DocWorld>(world: &W, d: &MapFileDoc, caps: &Caps) -> Result<W::Map> {
    expect_schema(&d.schema, MAP_SCHEMA)?;
    if d.world != W::NAME {
        return Err(Error::Document(format!("map over {} where {} was expected", d.world, W::NAME)));
    }
    Resolver { world, docs: &d.objects, cache: BTreeMap::new(), caps: *caps }.map(&d.map)
}

/// The group of the first G-set object in a span or bispan document.
pub fn group_of_objects(objects: &BTreeMap<String, ObjectDoc>) -> Result<Arc<FiniteGroup>> {
    objects
        .values()
        .find_map(|o| match o {
            ObjectDoc::GSet(d) => Some(group_from_doc(&d.group)),
            ObjectDoc::Groupoid(_) => None,
        })
        .unwrap_or_else(|| Err(Error::Document("no G-set objects".into())))
        .map(Arc::new)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_and_gset_round_trip() {
        let g = Arc::new(FiniteGroup::symmetric(3));
        let x = GSet::coset_space(&g, g.lattice().representative(1));
        let text = to_text(&gset_doc(&x));
        let back = gset_from_doc(&from_text(&text).unwrap(), None).unwrap();
        assert_eq!(to_text(&gset_doc(&back)), text);
        assert_eq!(schema_of(&text).unwrap(), "gset/1");
    }

    #[test]
    fn groupoid_round_trip() {
        let x = FiniteGroupoid::action(&GSet::regular(&Arc::new(FiniteGroup::cyclic(3))));
        let text = to_text(&groupoid_doc(&x));
        let back = groupoid_from_doc(&from_text(&text).unwrap(), &Caps::default()).unwrap();
        assert_eq!(back, x);
        assert_eq!(to_text(&groupoid_doc(&back)), text);
    }

    #[test]
    fn span_round_trip_and_tamper() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let w = GSetWorld::new(g.clone());
        let free = GSet::regular(&g);
        let s = Span::new(&w, GSetMap::to_point(&free), GSetMap::identity(&free), AdequateTripleSpec::ALL).unwrap();
        let d = span_doc(&w, &s);
        let text = to_text(&d);
        let back: Span<GSetWorld> = span_from_doc(&w, &from_text(&text).unwrap(), &Caps::default()).unwrap();
        assert_eq!(to_text(&span_doc(&w, &back)), text);
        let mut bad = d.clone();
        let key = bad.objects.keys().next().unwrap().clone();
        if let Some(ObjectDoc::GSet(x)) = bad.objects.get_mut(&key) {
            x.group.name.push('x');
        }
        assert!(matches!(span_from_doc(&w, &bad, &Caps::default()), Err(Error::Document(_))));
    }

    #[test]
    fn malformed_text_is_a_document_error() {
        assert!(matches!(from_text::<GSetDoc>("{ not json"), Err(Error::Document(_))));
        assert!(matches!(schema_of("{}"), Err(Error::Document(_))));
    }
}
