//! Finite groupoids as explicit object and morphism tables, functors between
//! them, iso-comma pullbacks and the (full, faithful) factorization.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Caps, Error, Result};
use crate::group::{search_isomorphisms, FiniteGroup, GroupHom};
use crate::gset::{Certificate, GSet};

/// A finite groupoid. Morphisms are numbered `0..morphism_count()`.
#[derive(Clone)]
pub struct FiniteGroupoid {
    objects: usize,
    source: Vec<usize>,
    target: Vec<usize>,
    /// `homs[a * objects + b]`: morphisms `a → b` in increasing order.
    homs: Vec<Vec<usize>>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
    /// `(g, f) ↦ g ∘ f` for `f: a → b`, `g: b → c`.
    compose: HashMap<(usize, usize), usize>,
}

impl fmt::Debug for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Groupoid({} objects, {} morphisms)", self.objects, self.source.len())
    }
}

impl PartialEq for FiniteGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.source == other.source
            && self.target == other.target
            && self.compose == other.compose
    }
}

impl Eq for FiniteGroupoid {}

fn check_size(objects: usize, morphisms: usize, caps: &Caps) -> Result<()> {
    if objects > caps.objects {
        return Err(Error::capacity("groupoid objects", objects as u128, caps.objects as u128));
    }
    if morphisms > caps.morphisms {
        return Err(Error::capacity("groupoid morphisms", morphisms as u128, caps.morphisms as u128));
    }
    Ok(())
}

impl FiniteGroupoid {
    /// Builds a groupoid whose morphisms carry keys composed by `comp(g, f)`.
    /// The key algebra must be closed, associative and invertible.
    pub(crate) fn build<K: Hash + Eq + Clone>(
        objects: usize,
        morphisms: Vec<(usize, usize, K)>,
        comp: impl Fn(&K, &K) -> K,
        caps: &Caps,
    ) -> Result<Self> {
        check_size(objects, morphisms.len(), caps)?;
        let index: HashMap<(usize, usize, K), usize> =
            morphisms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let source: Vec<usize> = morphisms.iter().map(|m| m.0).collect();
        let target: Vec<usize> = morphisms.iter().map(|m| m.1).collect();
        let mut homs = vec![Vec::new(); objects * objects];
        for (i, m) in morphisms.iter().enumerate() {
            homs[m.0 * objects + m.1].push(i);
        }
        let mut compose = HashMap::new();
        for (fi, f) in morphisms.iter().enumerate() {
            for c in 0..objects {
                for &gi in &homs[f.1 * objects + c] {
                    let key = comp(&morphisms[gi].2, &f.2);
                    let h = *index
                        .get(&(f.0, c, key))
                        .ok_or_else(|| Error::invalid("composition leaves the morphism set"))?;
                    compose.insert((gi, fi), h);
                }
            }
        }
        Self::finish(objects, source, target, homs, compose)
    }

    fn finish(
        objects: usize,
        source: Vec<usize>,
        target: Vec<usize>,
        homs: Vec<Vec<usize>>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let mut identity = Vec::with_capacity(objects);
        for a in 0..objects {
            let e = homs[a * objects + a]
                .iter()
                .copied()
                .find(|&e| compose.get(&(e, e)) == Some(&e))
                .ok_or_else(|| Error::invalid(format!("object {a} has no identity")))?;
            identity.push(e);
        }
        let mut inverse = Vec::with_capacity(source.len());
        for f in 0..source.len() {
            let (a, b) = (source[f], target[f]);
            let inv = homs[b * objects + a]
                .iter()
                .copied()
                .find(|&g| compose.get(&(g, f)) == Some(&identity[a]) && compose.get(&(f, g)) == Some(&identity[b]))
                .ok_or_else(|| Error::invalid(format!("morphism {f} is not invertible")))?;
            inverse.push(inv);
        }
        Ok(FiniteGroupoid { objects, source, target, homs, identity, inverse, compose })
    }

    /// Builds a groupoid from endpoint and composition tables and checks every
    /// axiom exhaustively. `composition` lists triples `(g, f, g∘f)`.
    pub fn from_tables(
        objects: usize,
        morphisms: Vec<(usize, usize)>,
        composition: &[(usize, usize, usize)],
        caps: &Caps,
    ) -> Result<Self> {
        check_size(objects, morphisms.len(), caps)?;
        if morphisms.iter().any(|&(a, b)| a >= objects || b >= objects) {
            return Err(Error::invalid("morphism endpoint out of range"));
        }
        let mut homs = vec![Vec::new(); objects * objects];
        for (i, &(a, b)) in morphisms.iter().enumerate() {
            homs[a * objects + b].push(i);
        }
        let mut compose = HashMap::new();
        for &(g, f, h) in composition {
            if g.max(f).max(h) >= morphisms.len() {
                return Err(Error::invalid("composition entry out of range"));
            }
            if morphisms[f].1 != morphisms[g].0 || morphisms[h] != (morphisms[f].0, morphisms[g].1) {
                return Err(Error::invalid(format!("composition entry ({g}, {f}, {h}) has wrong endpoints")));
            }
            if compose.insert((g, f), h).is_some() {
                return Err(Error::invalid(format!("composition of ({g}, {f}) given twice")));
            }
        }
        let source = morphisms.iter().map(|m| m.0).collect();
        let target = morphisms.iter().map(|m| m.1).collect();
        let g = Self::finish(objects, source, target, homs, compose)?;
        g.validate()?;
        Ok(g)
    }

    /// Exhaustive check of totality, unitality and associativity.
    pub fn validate(&self) -> Result<()> {
        for f in self.morphisms() {
            for g in self.outgoing_from(self.target[f]) {
                if !self.compose.contains_key(&(g, f)) {
                    return Err(Error::invalid(format!("composite of ({g}, {f}) missing")));
                }
            }
            if self.compose(self.identity[self.target[f]], f) != f || self.compose(f, self.identity[self.source[f]]) != f {
                return Err(Error::invalid(format!("identities do not act trivially on {f}")));
            }
        }
        for f in self.morphisms() {
            for g in self.outgoing_from(self.target[f]) {
                let gf = self.compose(g, f);
                for h in self.outgoing_from(self.target[g]) {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        return Err(Error::invalid(format!("composition not associative on ({h}, {g}, {f})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn empty() -> Self {
        Self::discrete(0)
    }

    pub fn terminal() -> Self {
        Self::discrete(1)
    }

    pub fn discrete(n: usize) -> Self {
        Self::build(n, (0..n).map(|a| (a, a, ())).collect(), |_, _| (), &Caps { objects: usize::MAX, morphisms: usize::MAX, ..Caps::default() })
            .expect("discrete groupoid")
    }

    /// One morphism between every ordered pair of objects.
    pub fn codiscrete(n: usize) -> Self {
        let morphisms = (0..n).flat_map(|a| (0..n).map(move |b| (a, b, ()))).collect();
        Self::build(n, morphisms, |_, _| (), &Caps { objects: usize::MAX, morphisms: usize::MAX, ..Caps::default() })
            .expect("codiscrete groupoid")
    }

    /// The one-object groupoid `BG`; morphism `g` is the group element `g`.
    pub fn delooping(group: &FiniteGroup) -> Self {
        let morphisms = group.elements().map(|g| (0, 0, g)).collect();
        Self::build(1, morphisms, |&g, &f| group.mul(g, f), &Caps { objects: usize::MAX, morphisms: usize::MAX, ..Caps::default() })
            .expect("delooping")
    }

    /// The action groupoid `X//G`; morphism `x·|G| + g` is `g: x → g·x`.
    pub fn action(x: &GSet) -> Self {
        let group = x.group();
        let morphisms = (0..x.size())
            .flat_map(|p| group.elements().map(move |g| (p, x.act(g, p), (p, g))))
            .collect();
        Self::build(
            x.size(),
            morphisms,
            |&(_, g), &(p, f)| (p, group.mul(g, f)),
            &Caps { objects: usize::MAX, morphisms: usize::MAX, ..Caps::default() },
        )
        .expect("action groupoid")
    }

    /// `self ⊔ other`; objects and morphisms of `other` are shifted.
    pub fn coproduct(&self, other: &FiniteGroupoid) -> Self {
        let n = self.objects + other.objects;
        let shift = self.morphism_count();
        let source = self.source.iter().copied().chain(other.source.iter().map(|&a| a + self.objects)).collect();
        let target = self.target.iter().copied().chain(other.target.iter().map(|&a| a + self.objects)).collect();
        let mut homs = vec![Vec::new(); n * n];
        for a in 0..self.objects {
            for b in 0..self.objects {
                homs[a * n + b] = self.hom(a, b).to_vec();
            }
        }
        for a in 0..other.objects {
            for b in 0..other.objects {
                homs[(a + self.objects) * n + b + self.objects] = other.hom(a, b).iter().map(|&m| m + shift).collect();
            }
        }
        let mut compose = self.compose.clone();
        compose.extend(other.compose.iter().map(|(&(g, f), &h)| ((g + shift, f + shift), h + shift)));
        Self::finish(n, source, target, homs, compose).expect("coproduct of groupoids")
    }

    /// `self × other`; object `(a, b)` at `a·|Ob other| + b`, morphism `(f, g)`
    /// at `f·|Mor other| + g`.
    pub fn product(&self, other: &FiniteGroupoid, caps: &Caps) -> Result<Self> {
        check_size(self.objects * other.objects, self.morphism_count() * other.morphism_count(), caps)?;
        let mut morphisms = Vec::new();
        for f in self.morphisms() {
            for g in other.morphisms() {
                morphisms.push((
                    self.source[f] * other.objects + other.source[g],
                    self.target[f] * other.objects + other.target[g],
                    (f, g),
                ));
            }
        }
        Self::build(self.objects * other.objects, morphisms, |&(f2, g2), &(f1, g1)| (self.compose(f2, f1), other.compose(g2, g1)), caps)
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    pub fn morphism_count(&self) -> usize {
        self.source.len()
    }

    pub fn objects(&self) -> std::ops::Range<usize> {
        0..self.objects
    }

    pub fn morphisms(&self) -> std::ops::Range<usize> {
        0..self.source.len()
    }

    pub fn source(&self, f: usize) -> usize {
        self.source[f]
    }

    pub fn target(&self, f: usize) -> usize {
        self.target[f]
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a * self.objects + b]
    }

    pub fn identity(&self, a: usize) -> usize {
        self.identity[a]
    }

    pub fn inverse(&self, f: usize) -> usize {
        self.inverse[f]
    }

    /// `g ∘ f`; panics unless `target(f) = source(g)`.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.compose[&(g, f)]
    }

    pub(crate) fn outgoing_from(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.objects).flat_map(move |c| self.hom(a, c).iter().copied())
    }

    /// Every composite as `(g, f, g∘f)`, sorted.
    pub fn composition_table(&self) -> Vec<(usize, usize, usize)> {
        let mut t: Vec<_> = self.compose.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        t.sort_unstable();
        t
    }

    /// Component index of each object, components numbered by least object.
    pub fn component_ids(&self) -> Vec<usize> {
        let mut id = vec![usize::MAX; self.objects];
        let mut next = 0;
        for a in 0..self.objects {
            if id[a] == usize::MAX {
                for b in 0..self.objects {
                    if !self.hom(a, b).is_empty() {
                        id[b] = next;
                    }
                }
                next += 1;
            }
        }
        id
    }

    pub fn component_count(&self) -> usize {
        self.component_ids().iter().max().map_or(0, |&m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// `Aut(a)` as a group, with the morphism behind each group element.
    pub fn automorphism_group(&self, a: usize) -> (Arc<FiniteGroup>, Vec<usize>) {
        let elems = self.hom(a, a).to_vec();
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for &x in &elems {
            table.extend(elems.iter().map(|&y| pos[&self.compose(x, y)]));
        }
        let group = FiniteGroup::from_trusted_table(format!("Aut({a})"), n, table, pos[&self.identity[a]]);
        (Arc::new(group), elems)
    }

    /// A morphism `base → a` for every object `a` of the component of `base`.
    pub(crate) fn paths_from(&self, base: usize) -> Vec<Option<usize>> {
        let mut path = vec![None; self.objects];
        path[base] = Some(self.identity[base]);
        let mut queue = VecDeque::from([base]);
        while let Some(a) = queue.pop_front() {
            for b in 0..self.objects {
                if path[b].is_none() {
                    if let Some(&f) = self.hom(a, b).first() {
                        path[b] = Some(self.compose(f, path[a].expect("visited")));
                        queue.push_back(b);
                    }
                }
            }
        }
        path
    }

    /// Connected components with their basepoints (least object) and
    /// basepoint automorphism groups.
    pub fn components(&self) -> Vec<Component> {
        let ids = self.component_ids();
        let mut out: Vec<Component> = Vec::new();
        for a in 0..self.objects {
            if ids[a] == out.len() {
                let objects: Vec<usize> = (0..self.objects).filter(|&b| ids[b] == ids[a]).collect();
                let (group, automorphisms) = self.automorphism_group(a);
                let inclusion = self.full_subgroupoid(&objects);
                out.push(Component { basepoint: a, objects, group, automorphisms, inclusion });
            }
        }
        out
    }

    /// The full subgroupoid on the given objects, with its inclusion.
    pub fn full_subgroupoid(&self, objects: &[usize]) -> GroupoidMap {
        let pos: HashMap<usize, usize> = objects.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut morphisms = Vec::new();
        for &a in objects {
            for &b in objects {
                morphisms.extend(self.hom(a, b).iter().map(|&f| (pos[&a], pos[&b], f)));
            }
        }
        let sub = FiniteGroupoid::build(objects.len(), morphisms.clone(), |&g, &f| self.compose(g, f), &Caps { objects: usize::MAX, morphisms: usize::MAX, ..Caps::default() })
            .expect("full subgroupoid");
        GroupoidMap {
            source: Arc::new(sub),
            target: Arc::new(self.clone()),
            objects: objects.to_vec(),
            morphisms: morphisms.iter().map(|m| m.2).collect(),
        }
    }
}

/// A connected component with a chosen basepoint.
#[derive(Debug, Clone)]
pub struct Component {
    pub basepoint: usize,
    pub objects: Vec<usize>,
    /// `Aut(basepoint)`.
    pub group: Arc<FiniteGroup>,
    /// Morphism of the groupoid behind each element of `group`.
    pub automorphisms: Vec<usize>,
    pub inclusion: GroupoidMap,
}

/// A functor between finite groupoids.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupoidMap {
    source: Arc<FiniteGroupoid>,
    target: Arc<FiniteGroupoid>,
    objects: Vec<usize>,
    morphisms: Vec<usize>,
}

impl fmt::Debug for GroupoidMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupoidMap(objects {:?}, morphisms {:?})", self.objects, self.morphisms)
    }
}

impl GroupoidMap {
    /// Checks endpoints, identities and composition exhaustively.
    pub fn new(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Result<Self> {
        if objects.len() != source.object_count() || morphisms.len() != source.morphism_count() {
            return Err(Error::invalid("functor tables do not match the source"));
        }
        if objects.iter().any(|&b| b >= target.object_count()) || morphisms.iter().any(|&m| m >= target.morphism_count()) {
            return Err(Error::invalid("functor table entry out of range"));
        }
        for f in source.morphisms() {
            let m = morphisms[f];
            if target.source(m) != objects[source.source(f)] || target.target(m) != objects[source.target(f)] {
                return Err(Error::invalid(format!("morphism {f} sent to a morphism with wrong endpoints")));
            }
        }
        for a in source.objects() {
            if morphisms[source.identity(a)] != target.identity(objects[a]) {
                return Err(Error::invalid(format!("identity of object {a} not preserved")));
            }
        }
        for (&(g, f), &h) in &source.compose {
            if target.compose(morphisms[g], morphisms[f]) != morphisms[h] {
                return Err(Error::invalid(format!("composite of ({g}, {f}) not preserved")));
            }
        }
        Ok(GroupoidMap { source, target, objects, morphisms })
    }

    pub(crate) fn from_parts(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Self {
        GroupoidMap { source, target, objects, morphisms }
    }

    pub fn identity(g: &Arc<FiniteGroupoid>) -> Self {
        GroupoidMap {
            source: g.clone(),
            target: g.clone(),
            objects: g.objects().collect(),
            morphisms: g.morphisms().collect(),
        }
    }

    /// The functor `BG → BH` induced by a homomorphism.
    pub fn delooping(hom: &GroupHom) -> Self {
        GroupoidMap {
            source: Arc::new(FiniteGroupoid::delooping(hom.source())),
            target: Arc::new(FiniteGroupoid::delooping(hom.target())),
            objects: vec![0],
            morphisms: hom.images().to_vec(),
        }
    }

    /// The unique functor to the terminal groupoid.
    pub fn to_terminal(g: &Arc<FiniteGroupoid>) -> Self {
        GroupoidMap {
            source: g.clone(),
            target: Arc::new(FiniteGroupoid::terminal()),
            objects: vec![0; g.object_count()],
            morphisms: vec![0; g.morphism_count()],
        }
    }

    /// The functor from the terminal groupoid picking out `a`.
    pub fn point(g: &Arc<FiniteGroupoid>, a: usize) -> Self {
        GroupoidMap {
            source: Arc::new(FiniteGroupoid::terminal()),
            target: g.clone(),
            objects: vec![a],
            morphisms: vec![g.identity(a)],
        }
    }

    /// The fold `G ⊔ G → G`.
    pub fn fold(g: &Arc<FiniteGroupoid>) -> Self {
        GroupoidMap {
            source: Arc::new(g.coproduct(g)),
            target: g.clone(),
            objects: g.objects().chain(g.objects()).collect(),
            morphisms: g.morphisms().chain(g.morphisms()).collect(),
        }
    }

    /// `f ⊔ g`.
    pub fn coproduct(&self, other: &GroupoidMap) -> Self {
        let (no, nm) = (self.target.object_count(), self.target.morphism_count());
        GroupoidMap {
            source: Arc::new(self.source.coproduct(&other.source)),
            target: Arc::new(self.target.coproduct(&other.target)),
            objects: self.objects.iter().copied().chain(other.objects.iter().map(|&a| a + no)).collect(),
            morphisms: self.morphisms.iter().copied().chain(other.morphisms.iter().map(|&m| m + nm)).collect(),
        }
    }

    /// `⟨f, g⟩: A → B × C` for functors out of a common source.
    pub fn pairing(&self, other: &GroupoidMap, product: &Arc<FiniteGroupoid>) -> Result<Self> {
        if self.source != other.source {
            return Err(Error::Mismatch("pairing of functors with different sources".into()));
        }
        let (no, nm) = (other.target.object_count(), other.target.morphism_count());
        Ok(GroupoidMap {
            source: self.source.clone(),
            target: product.clone(),
            objects: self.objects.iter().zip(&other.objects).map(|(&a, &b)| a * no + b).collect(),
            morphisms: self.morphisms.iter().zip(&other.morphisms).map(|(&f, &g)| f * nm + g).collect(),
        })
    }

    pub fn source(&self) -> &Arc<FiniteGroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroupoid> {
        &self.target
    }

    pub fn object_table(&self) -> &[usize] {
        &self.objects
    }

    pub fn morphism_table(&self) -> &[usize] {
        &self.morphisms
    }

    pub fn on_object(&self, a: usize) -> usize {
        self.objects[a]
    }

    pub fn on_morphism(&self, f: usize) -> usize {
        self.morphisms[f]
    }

    /// `next ∘ self`
    pub fn then(&self, next: &GroupoidMap) -> Result<GroupoidMap> {
        if *self.target != *next.source {
            return Err(Error::Mismatch("functors are not composable".into()));
        }
        Ok(GroupoidMap {
            source: self.source.clone(),
            target: next.target.clone(),
            objects: self.objects.iter().map(|&b| next.objects[b]).collect(),
            morphisms: self.morphisms.iter().map(|&m| next.morphisms[m]).collect(),
        })
    }

    fn hom_images(&self, a: usize, b: usize) -> Vec<usize> {
        self.source.hom(a, b).iter().map(|&f| self.morphisms[f]).collect()
    }

    /// Injective on every hom-set: membership in the orbital class.
    pub fn is_faithful(&self) -> bool {
        self.source.objects().all(|a| {
            self.source.objects().all(|b| {
                let mut img = self.hom_images(a, b);
                let n = img.len();
                img.sort_unstable();
                img.dedup();
                img.len() == n
            })
        })
    }

    /// Surjective on every hom-set.
    pub fn is_full(&self) -> bool {
        self.source.objects().all(|a| {
            self.source.objects().all(|b| {
                let mut img = self.hom_images(a, b);
                img.sort_unstable();
                img.dedup();
                img.len() == self.target.hom(self.objects[a], self.objects[b]).len()
            })
        })
    }

    pub fn is_essentially_surjective(&self) -> bool {
        let ids = self.target.component_ids();
        let mut hit = vec![false; self.target.component_count()];
        for &b in &self.objects {
            hit[ids[b]] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_faithful() && self.is_full() && self.is_essentially_surjective()
    }

    /// Full and bijective on connected components, so a coproduct of full
    /// functors between connected groupoids. Folds are excluded.
    pub fn is_in_e_class(&self) -> bool {
        if !self.is_full() || !self.is_essentially_surjective() {
            return false;
        }
        let src = self.source.component_ids();
        let tgt = self.target.component_ids();
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for a in self.source.objects() {
            if let Some(&c) = seen.get(&tgt[self.objects[a]]) {
                if c != src[a] {
                    return false;
                }
            } else {
                seen.insert(tgt[self.objects[a]], src[a]);
            }
        }
        true
    }

    /// Factors `self = m ∘ e` through the image groupoid: same objects as the
    /// source, hom-sets the images of the source hom-sets.
    pub fn em_factorize(&self) -> (GroupoidMap, GroupoidMap) {
        let n = self.source.object_count();
        let mut morphisms = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let mut img = self.hom_images(a, b);
                img.sort_unstable();
                img.dedup();
                morphisms.extend(img.into_iter().map(|m| (a, b, m)));
            }
        }
        let target = self.target.clone();
        let image = Arc::new(
            FiniteGroupoid::build(n, morphisms.clone(), |&g, &f| target.compose(g, f), &Caps { objects: usize::MAX, morphisms: usize::MAX, ..Caps::default() })
                .expect("image groupoid"),
        );
        let index: HashMap<(usize, usize, usize), usize> = morphisms.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let e = GroupoidMap {
            source: self.source.clone(),
            target: image.clone(),
            objects: (0..n).collect(),
            morphisms: self
                .source
                .morphisms()
                .map(|f| index[&(self.source.source(f), self.source.target(f), self.morphisms[f])])
                .collect(),
        };
        let m = GroupoidMap {
            source: image,
            target: self.target.clone(),
            objects: self.objects.clone(),
            morphisms: morphisms.iter().map(|t| t.2).collect(),
        };
        (e, m)
    }

    /// A natural isomorphism `self ⇒ other`, as components indexed by source
    /// objects, if one exists.
    pub fn natural_isomorphism_to(&self, other: &GroupoidMap) -> Option<Vec<usize>> {
        if self.source != other.source || self.target != other.target {
            return None;
        }
        let src = &self.source;
        let tgt = &self.target;
        let mut eta = vec![usize::MAX; src.object_count()];
        for comp in src.components() {
            let base = comp.basepoint;
            let paths = src.paths_from(base);
            let found = tgt.hom(self.objects[base], other.objects[base]).iter().find_map(|&e0| {
                let mut local = HashMap::new();
                for &a in &comp.objects {
                    let tau = paths[a].expect("same component");
                    // η_a = G(τ) ∘ η_base ∘ F(τ)⁻¹
                    let f_inv = tgt.inverse(self.morphisms[tau]);
                    local.insert(a, tgt.compose(other.morphisms[tau], tgt.compose(e0, f_inv)));
                }
                let natural = comp.objects.iter().all(|&a| {
                    comp.objects.iter().all(|&b| {
                        src.hom(a, b).iter().all(|&f| {
                            tgt.compose(other.morphisms[f], local[&a]) == tgt.compose(local[&b], self.morphisms[f])
                        })
                    })
                });
                natural.then_some(local)
            })?;
            for (a, e) in found {
                eta[a] = e;
            }
        }
        Some(eta)
    }

    pub fn is_naturally_isomorphic(&self, other: &GroupoidMap) -> bool {
        self.natural_isomorphism_to(other).is_some()
    }
}

/// A square commuting up to the natural isomorphism `two_cell`:
/// `two_cell[p]: f(left(p)) → g(right(p))`.
#[derive(Debug, Clone)]
pub struct IsoCommaSquare {
    pub apex: Arc<FiniteGroupoid>,
    pub left: GroupoidMap,
    pub right: GroupoidMap,
    pub f: GroupoidMap,
    pub g: GroupoidMap,
    pub two_cell: Vec<usize>,
    /// Apex objects as triples `(a, b, γ)`.
    pub triples: Vec<(usize, usize, usize)>,
}

/// The iso-comma groupoid `A ×_C B` of `f: A → C` and `g: B → C`: objects
/// `(a, b, γ: f(a) → g(b))`, morphisms pairs `(α, β)` with
/// `g(β) ∘ γ = γ′ ∘ f(α)`.
pub fn iso_comma_pullback(f: &GroupoidMap, g: &GroupoidMap, caps: &Caps) -> Result<IsoCommaSquare> {
    if *f.target != *g.target {
        return Err(Error::Mismatch("iso-comma of functors with different targets".into()));
    }
    let (a_g, b_g, c_g) = (f.source.clone(), g.source.clone(), f.target.clone());
    let mut object_count: u128 = 0;
    for a in a_g.objects() {
        for b in b_g.objects() {
            object_count += c_g.hom(f.objects[a], g.objects[b]).len() as u128;
        }
    }
    if object_count > caps.objects as u128 {
        return Err(Error::capacity("iso-comma apex objects", object_count, caps.objects as u128));
    }
    let mut triples = Vec::new();
    for a in a_g.objects() {
        for b in b_g.objects() {
            triples.extend(c_g.hom(f.objects[a], g.objects[b]).iter().map(|&gamma| (a, b, gamma)));
        }
    }
    let index: HashMap<(usize, usize, usize), usize> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut morphism_count: u128 = 0;
    for &(a, b, _) in &triples {
        let outs_a: u128 = a_g.objects().map(|x| a_g.hom(a, x).len() as u128).sum();
        let outs_b: u128 = b_g.objects().map(|y| b_g.hom(b, y).len() as u128).sum();
        morphism_count += outs_a * outs_b;
    }
    // the count above bounds the compatible pairs; the true count is checked below
    let mut morphisms = Vec::new();
    for (i, &(a, b, gamma)) in triples.iter().enumerate() {
        for alpha in a_g.outgoing_from(a) {
            for beta in b_g.outgoing_from(b) {
                let (a2, b2) = (a_g.target(alpha), b_g.target(beta));
                // γ′ = g(β) ∘ γ ∘ f(α)⁻¹
                let gamma2 = c_g.compose(g.morphisms[beta], c_g.compose(gamma, c_g.inverse(f.morphisms[alpha])));
                morphisms.push((i, index[&(a2, b2, gamma2)], (i, alpha, beta)));
                if morphisms.len() > caps.morphisms {
                    return Err(Error::capacity("iso-comma apex morphisms", morphism_count.max(morphisms.len() as u128), caps.morphisms as u128));
                }
            }
        }
    }
    let apex = Arc::new(FiniteGroupoid::build(
        triples.len(),
        morphisms.clone(),
        |&(_, a2, b2), &(i, a1, b1)| (i, a_g.compose(a2, a1), b_g.compose(b2, b1)),
        caps,
    )?);
    let left = GroupoidMap {
        source: apex.clone(),
        target: a_g,
        objects: triples.iter().map(|t| t.0).collect(),
        morphisms: morphisms.iter().map(|m| m.2 .1).collect(),
    };
    let right = GroupoidMap {
        source: apex.clone(),
        target: b_g,
        objects: triples.iter().map(|t| t.1).collect(),
        morphisms: morphisms.iter().map(|m| m.2 .2).collect(),
    };
    Ok(IsoCommaSquare {
        apex,
        left,
        right,
        f: f.clone(),
        g: g.clone(),
        two_cell: triples.iter().map(|t| t.2).collect(),
        triples,
    })
}

/// The functor groupoid `Fun(T, X)` with lookup of functors and natural
/// isomorphisms by their tables.
struct FunctorGroupoid {
    groupoid: Arc<FiniteGroupoid>,
    functors: Vec<(Vec<usize>, Vec<usize>)>,
    functor_index: HashMap<(Vec<usize>, Vec<usize>), usize>,
    /// `(source functor, components) ↦ morphism`
    transformation_index: HashMap<(usize, Vec<usize>), usize>,
}

pub(crate) fn all_functors(t: &FiniteGroupoid, x: &FiniteGroupoid, caps: &Caps) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    let mut out = Vec::new();
    let mut objects = vec![0; t.object_count()];
    let mut morphisms = vec![0; t.morphism_count()];
    fn rec_mor(
        k: usize,
        t: &FiniteGroupoid,
        x: &FiniteGroupoid,
        objects: &[usize],
        morphisms: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
        limit: usize,
    ) -> bool {
        if k == t.morphism_count() {
            let ok = t.compose.iter().all(|(&(g, f), &h)| x.compose(morphisms[g], morphisms[f]) == morphisms[h])
                && t.objects().all(|a| morphisms[t.identity(a)] == x.identity(objects[a]));
            if ok {
                if out.len() >= limit {
                    return false;
                }
                out.push((objects.to_vec(), morphisms.clone()));
            }
            return true;
        }
        for &m in x.hom(objects[t.source(k)], objects[t.target(k)]) {
            morphisms[k] = m;
            if !rec_mor(k + 1, t, x, objects, morphisms, out, limit) {
                return false;
            }
        }
        true
    }
    let n = t.object_count();
    let total = (x.object_count() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    caps.check_enumeration("functor object assignments", total)?;
    for code in 0..total as usize {
        let mut c = code;
        for o in objects.iter_mut() {
            *o = c % x.object_count().max(1);
            c /= x.object_count().max(1);
        }
        if !rec_mor(0, t, x, &objects, &mut morphisms, &mut out, caps.enumeration) {
            return Err(Error::capacity("functors", caps.enumeration as u128 + 1, caps.enumeration as u128));
        }
    }
    Ok(out)
}

impl FunctorGroupoid {
    fn new(t: &FiniteGroupoid, x: &Arc<FiniteGroupoid>, caps: &Caps) -> Result<Self> {
        let functors = all_functors(t, x, caps)?;
        let functor_index: HashMap<_, _> = functors.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let mut morphisms = Vec::new();
        for (fi, (fo, fm)) in functors.iter().enumerate() {
            let outs: Vec<Vec<usize>> = fo.iter().map(|&o| x.outgoing_from(o).collect()).collect();
            let mut choice = vec![0usize; fo.len()];
            loop {
                let comps: Vec<usize> = choice.iter().zip(&outs).map(|(&i, o)| o[i]).collect();
                // F′(φ) = η_t ∘ F(φ) ∘ η_s⁻¹
                let go: Vec<usize> = comps.iter().map(|&e| x.target(e)).collect();
                let gm: Vec<usize> = t
                    .morphisms()
                    .map(|phi| x.compose(comps[t.target(phi)], x.compose(fm[phi], x.inverse(comps[t.source(phi)]))))
                    .collect();
                let gi = functor_index[&(go, gm)];
                morphisms.push((fi, gi, (fi, comps)));
                if morphisms.len() > caps.morphisms {
                    return Err(Error::capacity("functor groupoid morphisms", morphisms.len() as u128, caps.morphisms as u128));
                }
                let mut k = 0;
                while k < choice.len() {
                    choice[k] += 1;
                    if choice[k] < outs[k].len() {
                        break;
                    }
                    choice[k] = 0;
                    k += 1;
                }
                if k == choice.len() {
                    break;
                }
            }
        }
        let transformation_index = morphisms.iter().enumerate().map(|(i, m)| (m.2.clone(), i)).collect();
        let groupoid = FiniteGroupoid::build(
            functors.len(),
            morphisms,
            |(_, c2), (f, c1)| (*f, c2.iter().zip(c1).map(|(&b, &a)| x.compose(b, a)).collect()),
            caps,
        )?;
        Ok(FunctorGroupoid { groupoid: Arc::new(groupoid), functors, functor_index, transformation_index })
    }

    /// Postcomposition with `f` as a functor into `other`.
    fn postcompose(&self, f: &GroupoidMap, other: &FunctorGroupoid) -> GroupoidMap {
        let objects: Vec<usize> = self
            .functors
            .iter()
            .map(|(o, m)| {
                other.functor_index[&(
                    o.iter().map(|&a| f.objects[a]).collect::<Vec<_>>(),
                    m.iter().map(|&p| f.morphisms[p]).collect::<Vec<_>>(),
                )]
            })
            .collect();
        let mut morphisms = vec![0; self.groupoid.morphism_count()];
        for ((src, comps), &i) in &self.transformation_index {
            morphisms[i] = other.transformation_index[&(objects[*src], comps.iter().map(|&e| f.morphisms[e]).collect())];
        }
        GroupoidMap::from_parts(self.groupoid.clone(), other.groupoid.clone(), objects, morphisms)
    }
}

/// Checks the 2-categorical universal property of an iso-comma square: for
/// each small test groupoid `T`, the comparison `Fun(T, P) → Fun(T, A) ×_{Fun(T, C)} Fun(T, B)`
/// must be an equivalence.
pub fn verify_pullback_up(square: &IsoCommaSquare, caps: &Caps) -> Certificate {
    let tests = [
        FiniteGroupoid::terminal(),
        FiniteGroupoid::discrete(2),
        FiniteGroupoid::codiscrete(2),
        FiniteGroupoid::delooping(&FiniteGroup::cyclic(2)),
    ];
    let big = Caps { objects: caps.objects.max(4096), morphisms: caps.morphisms.max(1 << 16), ..*caps };
    for (checked, t) in tests.iter().enumerate() {
        let run = || -> Result<Option<String>> {
            let fp = FunctorGroupoid::new(t, &square.apex, &big)?;
            let fa = FunctorGroupoid::new(t, square.f.source(), &big)?;
            let fb = FunctorGroupoid::new(t, square.g.source(), &big)?;
            let fc = FunctorGroupoid::new(t, square.f.target(), &big)?;
            let comma = iso_comma_pullback(&fa.postcompose(&square.f, &fc), &fb.postcompose(&square.g, &fc), &big)?;
            let comma_index: HashMap<(usize, usize, usize), usize> =
                comma.triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
            let pa = fp.postcompose(&square.left, &fa);
            let pb = fp.postcompose(&square.right, &fb);
            let mut objects = Vec::new();
            for (i, (fo, _)) in fp.functors.iter().enumerate() {
                let u = pa.objects[i];
                let theta: Vec<usize> = fo.iter().map(|&p| square.two_cell[p]).collect();
                let source_in_c = fc.functor_index[&(
                    fa.functors[u].0.iter().map(|&a| square.f.objects[a]).collect::<Vec<_>>(),
                    fa.functors[u].1.iter().map(|&m| square.f.morphisms[m]).collect::<Vec<_>>(),
                )];
                let Some(&gamma) = fc.transformation_index.get(&(source_in_c, theta)) else {
                    return Ok(Some(format!("two-cell is not natural on functor {i}")));
                };
                objects.push(comma_index[&(u, pb.objects[i], gamma)]);
            }
            let mut lookup: HashMap<(usize, usize, usize), usize> = HashMap::new();
            for m in comma.apex.morphisms() {
                let src = comma.apex.source(m);
                lookup.insert((src, comma.left.morphisms[m], comma.right.morphisms[m]), m);
            }
            let morphisms: Vec<usize> = fp
                .groupoid
                .morphisms()
                .map(|e| lookup[&(objects[fp.groupoid.source(e)], pa.morphisms[e], pb.morphisms[e])])
                .collect();
            let k = GroupoidMap::new(fp.groupoid.clone(), comma.apex.clone(), objects, morphisms)?;
            Ok((!k.is_equivalence()).then(|| format!("comparison functor is not an equivalence for test groupoid {t:?}")))
        };
        match run() {
            Ok(None) => {}
            Ok(Some(why)) => return Certificate::fail(checked + 1, why),
            Err(e) => return Certificate::fail(checked + 1, e.to_string()),
        }
    }
    Certificate::pass(tests.len())
}

/// One connected piece of a groupoid over a base `W`, transported to the
/// basepoint of its image component: the homomorphism `ρ: H → Aut(w)`.
#[derive(Debug, Clone)]
pub struct ComponentOver {
    pub component: usize,
    pub group: Arc<FiniteGroup>,
    /// Component of the base.
    pub base_component: usize,
    /// `ρ` as images in `Aut(w)` of the base component's basepoint.
    pub rho: Vec<usize>,
}

/// Decomposes `p: Z → W` into connected pieces over `W`.
pub fn components_over(p: &GroupoidMap) -> Vec<ComponentOver> {
    let w = p.target();
    let w_comps = w.components();
    let w_ids = w.component_ids();
    let mut base_paths: HashMap<usize, Vec<Option<usize>>> = HashMap::new();
    let mut out = Vec::new();
    for (i, comp) in p.source().components().into_iter().enumerate() {
        let image = p.on_object(comp.basepoint);
        let c = w_ids[image];
        let wb = w_comps[c].basepoint;
        let paths = base_paths.entry(wb).or_insert_with(|| w.paths_from(wb));
        let sigma = paths[image].expect("same component");
        let pos: HashMap<usize, usize> = w_comps[c].automorphisms.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let rho = comp
            .automorphisms
            .iter()
            .map(|&h| pos[&w.compose(w.inverse(sigma), w.compose(p.on_morphism(h), sigma))])
            .collect();
        out.push(ComponentOver { component: i, group: comp.group.clone(), base_component: c, rho });
    }
    out
}

/// Pairs `(ψ, k)` with `ψ: H → H′` an isomorphism and `ρ′ ∘ ψ = c_k ∘ ρ`.
fn matching_pairs(x: &ComponentOver, y: &ComponentOver, aut: &FiniteGroup, limit: Option<usize>) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    if x.base_component != y.base_component || x.group.order() != y.group.order() {
        return out;
    }
    for k in aut.elements() {
        let target: Vec<usize> = x.rho.iter().map(|&r| aut.conj(k, r)).collect();
        let mut stop = false;
        search_isomorphisms(&x.group, &y.group, &mut |g, t| y.rho[t] == target[g], &mut |psi| {
            if psi.iter().enumerate().all(|(h, &h2)| y.rho[h2] == target[h]) {
                out.push((psi.to_vec(), k));
                if limit.is_some_and(|l| out.len() >= l) {
                    stop = true;
                    return false;
                }
            }
            true
        });
        if stop {
            break;
        }
    }
    out
}

fn base_automorphisms(w: &FiniteGroupoid) -> Vec<Arc<FiniteGroup>> {
    w.components().into_iter().map(|c| c.group).collect()
}

/// Whether `p: Z → W` and `q: Z′ → W` are equivalent over `W` (up to natural
/// isomorphism).
pub fn equivalent_over(p: &GroupoidMap, q: &GroupoidMap) -> bool {
    if *p.target() != *q.target() {
        return false;
    }
    let auts = base_automorphisms(p.target());
    let xs = components_over(p);
    let ys = components_over(q);
    if xs.len() != ys.len() {
        return false;
    }
    let mut used = vec![false; ys.len()];
    // the relation is an equivalence relation, so greedy matching is complete
    for x in &xs {
        let hit = ys.iter().enumerate().find(|(j, y)| {
            !used[*j] && !matching_pairs(x, y, &auts[x.base_component], Some(1)).is_empty()
        });
        match hit {
            Some((j, _)) => used[j] = true,
            None => return false,
        }
    }
    true
}

/// Number of self-equivalences of `p: Z → W` over `W`, up to natural
/// isomorphism over `W`.
pub fn automorphisms_over(p: &GroupoidMap) -> u64 {
    let auts = base_automorphisms(p.target());
    let xs = components_over(p);
    let mut classes: Vec<(usize, usize)> = Vec::new(); // (representative, multiplicity)
    for (i, x) in xs.iter().enumerate() {
        match classes
            .iter_mut()
            .find(|(r, _)| !matching_pairs(&xs[*r], x, &auts[x.base_component], Some(1)).is_empty())
        {
            Some(c) => c.1 += 1,
            None => classes.push((i, 1)),
        }
    }
    let mut total: u64 = 1;
    for (r, m) in classes {
        let x = &xs[r];
        let aut = &auts[x.base_component];
        let pairs = matching_pairs(x, x, aut, None);
        // (ψ, k) ~ (c_h ∘ ψ, ρ(h)·k) for h ∈ H
        let mut seen = std::collections::HashSet::new();
        let mut orbits = 0u64;
        for (psi, k) in &pairs {
            if seen.contains(&(psi.clone(), *k)) {
                continue;
            }
            orbits += 1;
            for h in x.group.elements() {
                let moved: Vec<usize> = psi.iter().map(|&a| x.group.conj(h, a)).collect();
                seen.insert((moved, aut.mul(x.rho[h], *k)));
            }
        }
        let factorial: u64 = (1..=m as u64).product();
        total = total.saturating_mul(factorial).saturating_mul(orbits.saturating_pow(m as u32));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bg(n: usize) -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::delooping(&FiniteGroup::cyclic(n)))
    }

    fn hom(a: FiniteGroup, b: FiniteGroup, images: Vec<usize>) -> GroupHom {
        GroupHom::new(Arc::new(a), Arc::new(b), images).unwrap()
    }

    #[test]
    fn constructions_validate() {
        for g in [
            FiniteGroupoid::discrete(3),
            FiniteGroupoid::codiscrete(3),
            FiniteGroupoid::delooping(&FiniteGroup::symmetric(3)),
            FiniteGroupoid::action(&GSet::regular(&Arc::new(FiniteGroup::cyclic(2)))),
            FiniteGroupoid::terminal().coproduct(&bg(2)),
        ] {
            g.validate().unwrap();
        }
        let p = bg(2).product(&FiniteGroupoid::codiscrete(2), &Caps::default()).unwrap();
        p.validate().unwrap();
        assert_eq!((p.object_count(), p.morphism_count()), (2, 8));
    }

    #[test]
    fn from_tables_rejects_missing_inverse() {
        // two objects, one arrow 0 → 1 and identities
        let err = FiniteGroupoid::from_tables(2, vec![(0, 0), (1, 1), (0, 1)], &[(0, 0, 0), (1, 1, 1), (2, 0, 2), (1, 2, 2)], &Caps::default());
        assert!(err.is_err());
    }

    #[test]
    fn pullback_along_identity() {
        let b = bg(2);
        let id = GroupoidMap::identity(&b);
        let sq = iso_comma_pullback(&id, &id, &Caps::default()).unwrap();
        assert!(sq.left.is_equivalence());
        assert!(verify_pullback_up(&sq, &Caps::default()).passed);
    }

    #[test]
    fn point_times_point_over_bc3() {
        let b = bg(3);
        let pt = GroupoidMap::point(&b, 0);
        let sq = iso_comma_pullback(&pt, &pt, &Caps::default()).unwrap();
        assert_eq!(sq.apex.object_count(), 3);
        assert_eq!(sq.apex.morphism_count(), 3);
        assert!(verify_pullback_up(&sq, &Caps::default()).passed);
    }

    #[test]
    fn identity_against_point() {
        let b = bg(2);
        let sq = iso_comma_pullback(&GroupoidMap::identity(&b), &GroupoidMap::point(&b, 0), &Caps::default()).unwrap();
        assert!(sq.right.is_equivalence());
        assert!(sq.apex.is_connected());
    }

    #[test]
    fn pullback_capacity_names_dimension() {
        let b = Arc::new(FiniteGroupoid::delooping(&FiniteGroup::symmetric(4)));
        let pt = GroupoidMap::point(&b, 0);
        let caps = Caps { objects: 10, ..Caps::default() };
        match iso_comma_pullback(&pt, &pt, &caps) {
            Err(Error::Capacity { dimension, .. }) => assert!(dimension.contains("objects")),
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn a_broken_square_fails_the_check() {
        let b = bg(3);
        let pt = GroupoidMap::point(&b, 0);
        let mut sq = iso_comma_pullback(&pt, &pt, &Caps::default()).unwrap();
        // collapse the apex to a single object
        let one = Arc::new(FiniteGroupoid::terminal());
        sq.apex = one.clone();
        sq.left = GroupoidMap::identity(&one);
        sq.right = GroupoidMap::identity(&one);
        sq.two_cell = vec![b.identity(0)];
        assert!(!verify_pullback_up(&sq, &Caps::default()).passed);
    }

    #[test]
    fn faithfulness_examples() {
        assert!(GroupoidMap::delooping(&hom(FiniteGroup::cyclic(2), FiniteGroup::cyclic(4), vec![0, 2])).is_faithful());
        let surj = GroupoidMap::delooping(&hom(FiniteGroup::cyclic(4), FiniteGroup::cyclic(2), vec![0, 1, 0, 1]));
        assert!(!surj.is_faithful());
        assert!(GroupoidMap::fold(&bg(2)).is_faithful());
        assert!(!GroupoidMap::fold(&bg(2)).is_in_e_class());
    }

    #[test]
    fn factorization_examples() {
        let inc = GroupoidMap::delooping(&hom(FiniteGroup::cyclic(2), FiniteGroup::cyclic(4), vec![0, 2]));
        let (e, m) = inc.em_factorize();
        assert!(e.is_equivalence());
        assert!(m.is_faithful());

        let surj = GroupoidMap::delooping(&hom(FiniteGroup::cyclic(4), FiniteGroup::cyclic(2), vec![0, 1, 0, 1]));
        let (e, m) = surj.em_factorize();
        assert!(e.is_in_e_class());
        assert!(m.is_equivalence());
        assert!(e.then(&m).unwrap().is_naturally_isomorphic(&surj));

        // C4 → C2 × C3 = C6, generator ↦ 3
        let f = GroupoidMap::delooping(&hom(FiniteGroup::cyclic(4), FiniteGroup::cyclic(6), vec![0, 3, 0, 3]));
        let (e, m) = f.em_factorize();
        assert_eq!(e.target().morphism_count(), 2);
        assert!(e.is_in_e_class() && m.is_faithful() && !m.is_full());
        assert!(e.then(&m).unwrap() == f);
    }

    #[test]
    fn components_examples() {
        let d = FiniteGroupoid::discrete(3);
        assert!(d.components().iter().all(|c| c.group.order() == 1));
        let u = FiniteGroupoid::delooping(&FiniteGroup::cyclic(2)).coproduct(&bg(3));
        let orders: Vec<usize> = u.components().iter().map(|c| c.group.order()).collect();
        assert_eq!(orders, vec![2, 3]);
        let act = FiniteGroupoid::action(&GSet::regular(&Arc::new(FiniteGroup::cyclic(2))));
        let comps = act.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].group.order(), 1);
    }

    #[test]
    fn equivalence_examples() {
        let b = bg(2);
        assert!(GroupoidMap::identity(&b).is_equivalence());
        let surj = GroupoidMap::delooping(&hom(FiniteGroup::cyclic(4), FiniteGroup::cyclic(2), vec![0, 1, 0, 1]));
        assert!(!surj.is_equivalence());
        let contractible = Arc::new(FiniteGroupoid::codiscrete(2));
        assert!(GroupoidMap::point(&contractible, 1).is_equivalence());
    }

    #[test]
    fn equivalence_over_and_automorphisms() {
        // 1 ← BH → BG spans correspond to G/H; automorphisms are N(H)/H
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let bs3 = Arc::new(FiniteGroupoid::delooping(&s3));
        let lattice = s3.lattice();
        let expected = [6u64, 1, 2, 1];
        for (c, &want) in expected.iter().enumerate() {
            let h = lattice.representative(c);
            let p = GroupoidMap::delooping(&s3.embed(h));
            let p = GroupoidMap::from_parts(p.source().clone(), bs3.clone(), p.object_table().to_vec(), p.morphism_table().to_vec());
            assert_eq!(automorphisms_over(&p), want, "class {c}");
            for (d, _) in expected.iter().enumerate() {
                let k = lattice.representative(d);
                let q = GroupoidMap::delooping(&s3.embed(k));
                let q = GroupoidMap::from_parts(q.source().clone(), bs3.clone(), q.object_table().to_vec(), q.morphism_table().to_vec());
                assert_eq!(equivalent_over(&p, &q), c == d);
            }
        }
        // two conjugate embeddings of C2 are equivalent over BS3
        let others: Vec<_> = lattice.classes[1].conjugates.clone();
        let maps: Vec<GroupoidMap> = others
            .iter()
            .map(|h| {
                let m = GroupoidMap::delooping(&s3.embed(h));
                GroupoidMap::from_parts(m.source().clone(), bs3.clone(), m.object_table().to_vec(), m.morphism_table().to_vec())
            })
            .collect();
        assert!(maps.iter().all(|m| equivalent_over(m, &maps[0])));
    }

    #[test]
    fn natural_isomorphism_detection() {
        let id = GroupHom::identity(&Arc::new(FiniteGroup::symmetric(3)));
        let f = GroupoidMap::delooping(&id);
        let g = GroupoidMap::delooping(&id.conjugated_by(1));
        let g = GroupoidMap::from_parts(f.source().clone(), f.target().clone(), vec![0], g.morphism_table().to_vec());
        assert!(f.is_naturally_isomorphic(&g));
    }
}
