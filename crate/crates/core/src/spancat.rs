//! Span categories over finite G-sets and over finite groupoids, at the level
//! of isomorphism classes of spans with their automorphism counts.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Caps, Error, Result};
use crate::group::{same_group, FiniteGroup, Subgroup};
use crate::groupoid::{self, FiniteGroupoid, GroupoidMap};
use crate::gset::{self, search_equivariant_maps, GSet, GSetMap};

/// Wide subcategories used as backwards, forwards, norm or sum classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapClass {
    All,
    Isomorphisms,
    Injective,
    Surjective,
    /// Injective on hom-sets; every G-set map qualifies.
    Faithful,
    /// Full and bijective on components; for G-sets, the isomorphisms.
    EClass,
}

/// The ambient category in which spans live.
pub trait World: Clone + Send + Sync {
    type Object: Clone + fmt::Debug + PartialEq + Send + Sync;
    type Map: Clone + fmt::Debug + Send + Sync;

    fn name(&self) -> String;
    fn source(&self, f: &Self::Map) -> Self::Object;
    fn target(&self, f: &Self::Map) -> Self::Object;
    fn identity(&self, x: &Self::Object) -> Self::Map;
    /// `g ∘ f`
    fn then(&self, f: &Self::Map, g: &Self::Map) -> Result<Self::Map>;
    /// Projections out of the pullback of `f` and `g`.
    fn pullback(&self, f: &Self::Map, g: &Self::Map, caps: &Caps) -> Result<(Self::Map, Self::Map)>;
    fn in_class(&self, f: &Self::Map, class: MapClass) -> bool;
    /// Points of a G-set, objects of a groupoid.
    fn size(&self, x: &Self::Object) -> usize;
    /// Whether the spans are isomorphic (equivalent) over their endpoints.
    fn spans_isomorphic(&self, a: (&Self::Map, &Self::Map), b: (&Self::Map, &Self::Map)) -> bool;
    fn span_automorphisms(&self, back: &Self::Map, forward: &Self::Map) -> u64;
    /// The restriction of a span to each connected piece of its apex.
    fn span_pieces(&self, back: &Self::Map, forward: &Self::Map) -> Vec<(Self::Map, Self::Map)>;
    /// The canonical representative of the isomorphism class of a span.
    fn canonical_span(&self, back: &Self::Map, forward: &Self::Map) -> Result<(Self::Map, Self::Map)>;
    /// Representatives of all span classes `x ← z → y` with `size(z) ≤ cap`
    /// and forwards leg in `forwards`, canonically ordered.
    fn enumerate_spans(
        &self,
        x: &Self::Object,
        y: &Self::Object,
        forwards: MapClass,
        cap: usize,
        caps: &Caps,
    ) -> Result<Vec<(Self::Map, Self::Map)>>;
}

/// `(C, C_B, C_F)`: the ambient world with backwards and forwards classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdequateTripleSpec {
    pub backwards: MapClass,
    pub forwards: MapClass,
}

impl AdequateTripleSpec {
    pub const ALL: AdequateTripleSpec = AdequateTripleSpec { backwards: MapClass::All, forwards: MapClass::All };
    /// `(𝔾, 𝔾, 𝕆)`
    pub const ORBITAL: AdequateTripleSpec = AdequateTripleSpec { backwards: MapClass::All, forwards: MapClass::Faithful };

    pub fn opposite(self) -> Self {
        AdequateTripleSpec { backwards: self.forwards, forwards: self.backwards }
    }

    /// Samples the pullback-stability of the forwards class along backwards
    /// maps (and vice versa) on the given maps.
    pub fn check_adequate<W: World>(&self, world: &W, maps: &[W::Map], caps: &Caps) -> Result<bool> {
        for f in maps.iter().filter(|f| world.in_class(f, self.forwards)) {
            for b in maps.iter().filter(|b| world.in_class(b, self.backwards)) {
                if world.target(f) != world.target(b) {
                    continue;
                }
                let (pf, pb) = world.pullback(b, f, caps)?;
                // pf: P → source(b) is the base change of f, pb: P → source(f) of b
                if !world.in_class(&pf, self.forwards) || !world.in_class(&pb, self.backwards) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// A span `left ← apex → right`.
#[derive(Debug, Clone)]
pub struct Span<W: World> {
    pub back: W::Map,
    pub forward: W::Map,
    pub spec: AdequateTripleSpec,
}

impl<W: World> Span<W> {
    pub fn new(world: &W, back: W::Map, forward: W::Map, spec: AdequateTripleSpec) -> Result<Self> {
        if world.source(&back) != world.source(&forward) {
            return Err(Error::Mismatch("span legs have different apices".into()));
        }
        if !world.in_class(&back, spec.backwards) {
            return Err(Error::ClassViolation("backwards leg outside its class".into()));
        }
        if !world.in_class(&forward, spec.forwards) {
            return Err(Error::ClassViolation("forwards leg outside its class".into()));
        }
        Ok(Span { back, forward, spec })
    }

    pub fn identity(world: &W, x: &W::Object, spec: AdequateTripleSpec) -> Self {
        Span { back: world.identity(x), forward: world.identity(x), spec }
    }

    pub fn left(&self, world: &W) -> W::Object {
        world.target(&self.back)
    }

    pub fn right(&self, world: &W) -> W::Object {
        world.target(&self.forward)
    }

    pub fn apex(&self, world: &W) -> W::Object {
        world.source(&self.back)
    }
}

/// An isomorphism class of spans.
#[derive(Debug, Clone)]
pub struct SpanHomClass<W: World> {
    pub span: Span<W>,
    pub automorphisms: u64,
}

/// `t ∘ s` for `s: X → Y`, `t: Y → Z`, the apex being the pullback of the
/// inner legs.
pub fn compose_spans<W: World>(world: &W, s: &Span<W>, t: &Span<W>, caps: &Caps) -> Result<Span<W>> {
    if s.spec != t.spec {
        return Err(Error::Mismatch("spans over different triples".into()));
    }
    if s.right(world) != t.left(world) {
        return Err(Error::Mismatch("middle objects of the spans differ".into()));
    }
    let (p1, p2) = world.pullback(&s.forward, &t.back, caps)?;
    let back = world.then(&p1, &s.back)?;
    let forward = world.then(&p2, &t.forward)?;
    if !world.in_class(&back, s.spec.backwards) {
        return Err(Error::ClassViolation("composed backwards leg left its class".into()));
    }
    if !world.in_class(&forward, s.spec.forwards) {
        return Err(Error::ClassViolation("composed forwards leg left its class".into()));
    }
    Ok(Span { back, forward, spec: s.spec })
}

/// The composite split along the connected pieces of its apex, as a formal
/// sum of span classes with multiplicities.
pub fn compose_spans_decomposed<W: World>(
    world: &W,
    s: &Span<W>,
    t: &Span<W>,
    caps: &Caps,
) -> Result<Vec<(SpanHomClass<W>, usize)>> {
    let composite = compose_spans(world, s, t, caps)?;
    decompose_span(world, &composite)
}

/// Connected pieces of a span, grouped by isomorphism class.
pub fn decompose_span<W: World>(world: &W, s: &Span<W>) -> Result<Vec<(SpanHomClass<W>, usize)>> {
    let mut out: Vec<(SpanHomClass<W>, usize)> = Vec::new();
    for (b, f) in world.span_pieces(&s.back, &s.forward) {
        if let Some(entry) = out
            .iter_mut()
            .find(|(c, _)| world.spans_isomorphic((&c.span.back, &c.span.forward), (&b, &f)))
        {
            entry.1 += 1;
        } else {
            let (cb, cf) = world.canonical_span(&b, &f)?;
            let automorphisms = world.span_automorphisms(&cb, &cf);
            out.push((SpanHomClass { span: Span { back: cb, forward: cf, spec: s.spec }, automorphisms }, 1));
        }
    }
    Ok(out)
}

pub fn span_iso<W: World>(world: &W, s: &Span<W>, t: &Span<W>) -> bool {
    world.source(&s.back) == world.source(&s.forward)
        && world.target(&s.back) == world.target(&t.back)
        && world.target(&s.forward) == world.target(&t.forward)
        && world.spans_isomorphic((&s.back, &s.forward), (&t.back, &t.forward))
}

/// `s ≅ forwards ∘ backwards` with `backwards = (X ← Z = Z)` and
/// `forwards = (Z = Z → Y)`.
pub fn factor_span<W: World>(world: &W, s: &Span<W>) -> (Span<W>, Span<W>) {
    let apex = s.apex(world);
    let backwards = Span { back: s.back.clone(), forward: world.identity(&apex), spec: s.spec };
    let forwards = Span { back: world.identity(&apex), forward: s.forward.clone(), spec: s.spec };
    (backwards, forwards)
}

/// The same span read in the opposite category.
pub fn dualize<W: World>(s: &Span<W>) -> Span<W> {
    Span { back: s.forward.clone(), forward: s.back.clone(), spec: s.spec.opposite() }
}

/// All span classes `x ← z → y` with `size(z) ≤ cap`, with automorphism counts.
pub fn hom_enumerate<W: World>(
    world: &W,
    x: &W::Object,
    y: &W::Object,
    spec: AdequateTripleSpec,
    cap: usize,
    caps: &Caps,
) -> Result<Vec<SpanHomClass<W>>> {
    let spans = world.enumerate_spans(x, y, spec.forwards, cap, caps)?;
    Ok(spans
        .into_iter()
        .filter(|(b, _)| world.in_class(b, spec.backwards))
        .map(|(back, forward)| {
            let automorphisms = world.span_automorphisms(&back, &forward);
            SpanHomClass { span: Span { back, forward, spec }, automorphisms }
        })
        .collect())
}

/// The category of finite G-sets for a fixed group.
#[derive(Debug, Clone)]
pub struct GSetWorld {
    pub group: Arc<FiniteGroup>,
}

impl GSetWorld {
    pub fn new(group: Arc<FiniteGroup>) -> Self {
        GSetWorld { group }
    }

    /// Canonical key of the orbit of `z` over `x × y`: the least pair
    /// `(w(z′), Stab(z′))` along the orbit.
    fn piece_key(&self, back: &GSetMap, forward: &GSetMap, z: usize) -> (usize, Vec<usize>) {
        let apex = back.source();
        let ny = forward.target().size();
        apex.orbit(z)
            .into_iter()
            .map(|p| (back.apply(p) * ny + forward.apply(p), apex.stabilizer(p).elements().to_vec()))
            .min()
            .expect("nonempty orbit")
    }

    fn span_keys(&self, back: &GSetMap, forward: &GSetMap) -> Vec<(usize, Vec<usize>)> {
        let mut keys: Vec<_> = back
            .source()
            .orbit_representatives()
            .into_iter()
            .map(|z| self.piece_key(back, forward, z))
            .collect();
        keys.sort();
        keys
    }

    /// Rebuilds the span `⊔ G/H → x × y`, `gH ↦ g·w`, from piece keys.
    fn span_from_keys(&self, x: &GSet, y: &GSet, keys: &[(usize, Vec<usize>)], caps: &Caps) -> Result<(GSetMap, GSetMap)> {
        let g = &self.group;
        let total: u128 = keys.iter().map(|(_, h)| (g.order() / h.len()) as u128).sum();
        caps.check_points("span apex", total)?;
        let mut apex = GSet::empty(g);
        let mut bt = Vec::new();
        let mut ft = Vec::new();
        for (w, h) in keys {
            let (xw, yw) = (w / y.size(), w % y.size());
            let sub = Subgroup::new(g, h.clone())?;
            let (_, reps) = g.left_cosets(&sub);
            apex = apex.disjoint_union(&GSet::coset_space(g, &sub));
            bt.extend(reps.iter().map(|&r| x.act(r, xw)));
            ft.extend(reps.iter().map(|&r| y.act(r, yw)));
        }
        Ok((
            GSetMap::new(apex.clone(), x.clone(), bt)?,
            GSetMap::new(apex, y.clone(), ft)?,
        ))
    }

    /// Every subgroup of the group, in canonical order.
    fn subgroups(&self) -> Vec<Subgroup> {
        let mut all: Vec<Subgroup> = self
            .group
            .lattice()
            .classes
            .iter()
            .flat_map(|c| c.conjugates.iter().cloned())
            .collect();
        all.sort_by(|a, b| (a.order(), a.elements()).cmp(&(b.order(), b.elements())));
        all
    }

    /// Enumerates arrows of the forwards class up to isomorphism and the
    /// pullback-shaped spans between them. Only the G-set world is supported.
    pub fn arrow_env_enumerate(&self, forwards: MapClass, cap: usize, caps: &Caps) -> Result<ArrowEnvReport> {
        let objects = gset::isoclasses_up_to(&self.group, cap);
        // arrows a → b up to isomorphism of arrows
        let mut arrows: Vec<GSetMap> = Vec::new();
        for a in &objects {
            for b in &objects {
                let maps = gset::equivariant_maps(a, b, |_, _| true, caps)?;
                let mut reps: Vec<GSetMap> = Vec::new();
                for m in maps {
                    let f = GSetMap::new(a.clone(), b.clone(), m)?;
                    if !self.in_class(&f, forwards) {
                        continue;
                    }
                    if !reps.iter().any(|r| arrows_isomorphic(r, &f)) {
                        reps.push(f);
                    }
                }
                arrows.extend(reps);
            }
        }
        let mut morphisms = 0u64;
        let mut table = Vec::new();
        for (i, src) in arrows.iter().enumerate() {
            for (j, dst) in arrows.iter().enumerate() {
                let count = self.count_env_morphisms(src, dst, forwards, cap, caps)?;
                if count > 0 {
                    table.push((i, j, count));
                }
                morphisms += count;
            }
        }
        Ok(ArrowEnvReport { objects: arrows.len(), morphisms, arrows, table })
    }

    /// Classes of `(a: A → B) ← (C → D) → (a′: A′ → B′)` where the left square
    /// is a pullback, `D → B′` lies in `forwards` and `|D| ≤ cap`.
    fn count_env_morphisms(&self, src: &GSetMap, dst: &GSetMap, forwards: MapClass, cap: usize, caps: &Caps) -> Result<u64> {
        let spans = self.enumerate_spans(src.target(), dst.target(), forwards, cap, caps)?;
        let mut total = 0u64;
        for (back, forward) in spans {
            let pb = gset::pullback(src, &back)?;
            let c = &pb.apex;
            // fillers u: C → A′ with a′ ∘ u = forward ∘ (C → D)
            let fillers = gset::equivariant_maps(c, dst.source(), |p, q| dst.apply(q) == forward.apply(pb.right.apply(p)), caps)?;
            if fillers.is_empty() {
                continue;
            }
            // automorphisms of D over B and B′ act on the fillers
            let d = back.source();
            let mut autos: Vec<Vec<usize>> = Vec::new();
            search_equivariant_maps(d, d, true, &mut |p, q| back.apply(p) == back.apply(q) && forward.apply(p) == forward.apply(q), &mut |m| {
                autos.push(m.to_vec());
                true
            });
            let index: HashMap<(usize, usize), usize> =
                (0..c.size()).map(|p| ((pb.left.apply(p), pb.right.apply(p)), p)).collect();
            let mut seen = std::collections::HashSet::new();
            for u in &fillers {
                if seen.contains(u) {
                    continue;
                }
                total += 1;
                for sigma in &autos {
                    // (σ·u)(a, d) = u(a, σ⁻¹ d)
                    let mut inv = vec![0; sigma.len()];
                    for (k, &v) in sigma.iter().enumerate() {
                        inv[v] = k;
                    }
                    let moved: Vec<usize> = (0..c.size())
                        .map(|p| u[index[&(pb.left.apply(p), inv[pb.right.apply(p)])]])
                        .collect();
                    seen.insert(moved);
                }
            }
        }
        Ok(total)
    }
}

fn arrows_isomorphic(f: &GSetMap, g: &GSetMap) -> bool {
    if !f.source().is_isomorphic(g.source()) || !f.target().is_isomorphic(g.target()) {
        return false;
    }
    // an isomorphism β of targets, then an isomorphism α of sources over β
    let mut found = false;
    search_equivariant_maps(f.target(), g.target(), true, &mut |_, _| true, &mut |beta| {
        search_equivariant_maps(f.source(), g.source(), true, &mut |p, q| beta[f.apply(p)] == g.apply(q), &mut |_| {
            found = true;
            false
        });
        !found
    });
    found
}

/// Census of the 1-truncated arrow category.
#[derive(Debug, Clone)]
pub struct ArrowEnvReport {
    pub objects: usize,
    pub morphisms: u64,
    pub arrows: Vec<GSetMap>,
    /// `(source arrow, target arrow, number of morphism classes)`, nonzero entries.
    pub table: Vec<(usize, usize, u64)>,
}

impl World for GSetWorld {
    type Object = GSet;
    type Map = GSetMap;

    fn name(&self) -> String {
        format!("G-sets over {}", self.group.name())
    }

    fn source(&self, f: &GSetMap) -> GSet {
        f.source().clone()
    }

    fn target(&self, f: &GSetMap) -> GSet {
        f.target().clone()
    }

    fn identity(&self, x: &GSet) -> GSetMap {
        GSetMap::identity(x)
    }

    fn then(&self, f: &GSetMap, g: &GSetMap) -> Result<GSetMap> {
        f.then(g)
    }

    fn pullback(&self, f: &GSetMap, g: &GSetMap, caps: &Caps) -> Result<(GSetMap, GSetMap)> {
        let bound = f.source().size() as u128 * g.source().size() as u128;
        if bound > caps.points as u128 {
            let actual: u128 = (0..f.target().size()).map(|a| f.fiber(a).len() as u128 * g.fiber(a).len() as u128).sum();
            caps.check_points("pullback points", actual)?;
        }
        let pb = gset::pullback(f, g)?;
        Ok((pb.left, pb.right))
    }

    fn in_class(&self, f: &GSetMap, class: MapClass) -> bool {
        match class {
            MapClass::All | MapClass::Faithful => true,
            MapClass::Isomorphisms | MapClass::EClass => f.is_bijective(),
            MapClass::Injective => f.is_injective(),
            MapClass::Surjective => f.is_surjective(),
        }
    }

    fn size(&self, x: &GSet) -> usize {
        x.size()
    }

    fn spans_isomorphic(&self, a: (&GSetMap, &GSetMap), b: (&GSetMap, &GSetMap)) -> bool {
        if a.0.target() != b.0.target() || a.1.target() != b.1.target() || !a.0.source().is_isomorphic(b.0.source()) {
            return false;
        }
        let mut found = false;
        search_equivariant_maps(
            a.0.source(),
            b.0.source(),
            true,
            &mut |p, q| a.0.apply(p) == b.0.apply(q) && a.1.apply(p) == b.1.apply(q),
            &mut |_| {
                found = true;
                false
            },
        );
        found
    }

    fn span_automorphisms(&self, back: &GSetMap, forward: &GSetMap) -> u64 {
        let mut count = 0u64;
        search_equivariant_maps(
            back.source(),
            back.source(),
            true,
            &mut |p, q| back.apply(p) == back.apply(q) && forward.apply(p) == forward.apply(q),
            &mut |_| {
                count += 1;
                true
            },
        );
        count
    }

    fn span_pieces(&self, back: &GSetMap, forward: &GSetMap) -> Vec<(GSetMap, GSetMap)> {
        let apex = back.source();
        apex.orbit_representatives()
            .into_iter()
            .map(|z| {
                let incl = apex.restrict_to_points(&apex.orbit(z));
                (incl.then(back).expect("composable"), incl.then(forward).expect("composable"))
            })
            .collect()
    }

    fn canonical_span(&self, back: &GSetMap, forward: &GSetMap) -> Result<(GSetMap, GSetMap)> {
        let keys = self.span_keys(back, forward);
        self.span_from_keys(back.target(), forward.target(), &keys, &Caps::default())
    }

    fn enumerate_spans(&self, x: &GSet, y: &GSet, forwards: MapClass, cap: usize, caps: &Caps) -> Result<Vec<(GSetMap, GSetMap)>> {
        if !same_group(x.group(), &self.group) || !same_group(y.group(), &self.group) {
            return Err(Error::Mismatch("endpoints over a different group".into()));
        }
        let w = x.product(y);
        caps.check_points("endpoint product", w.size() as u128)?;
        let g = &self.group;
        let subgroups = self.subgroups();
        let mut pieces: Vec<(usize, Vec<usize>)> = Vec::new();
        for p in 0..w.size() {
            let stab = w.stabilizer(p);
            for h in subgroups.iter().filter(|h| h.is_subset_of(&stab) && g.order() / h.order() <= cap) {
                let key = g
                    .elements()
                    .map(|e| (w.act(e, p), g.conjugate(h, e).elements().to_vec()))
                    .min()
                    .expect("group is nonempty");
                pieces.push(key);
            }
        }
        pieces.sort();
        pieces.dedup();
        let sizes: Vec<usize> = pieces.iter().map(|(_, h)| g.order() / h.len()).collect();
        let mut multisets: Vec<Vec<usize>> = Vec::new();
        let mut current = Vec::new();
        fn rec(start: usize, budget: usize, sizes: &[usize], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) -> bool {
            if out.len() >= limit {
                return false;
            }
            out.push(current.clone());
            for i in start..sizes.len() {
                if sizes[i] <= budget {
                    current.push(i);
                    let ok = rec(i, budget - sizes[i], sizes, current, out, limit);
                    current.pop();
                    if !ok {
                        return false;
                    }
                }
            }
            true
        }
        if !rec(0, cap, &sizes, &mut current, &mut multisets, caps.enumeration) {
            return Err(Error::capacity("span classes", caps.enumeration as u128 + 1, caps.enumeration as u128));
        }
        let mut out = Vec::new();
        for ms in multisets {
            let keys: Vec<(usize, Vec<usize>)> = ms.iter().map(|&i| pieces[i].clone()).collect();
            let (b, f) = self.span_from_keys(x, y, &keys, caps)?;
            if self.in_class(&f, forwards) {
                out.push((b, f));
            }
        }
        out.sort_by_cached_key(|(b, f)| {
            let keys = self.span_keys(b, f);
            (b.source().size(), keys)
        });
        Ok(out)
    }
}

/// The (2,1)-category of finite groupoids, truncated to equivalence classes.
#[derive(Debug, Clone, Default)]
pub struct GroupoidWorld;

impl GroupoidWorld {
    fn paired(back: &GroupoidMap, forward: &GroupoidMap) -> GroupoidMap {
        let product = Arc::new(
            back.target()
                .product(forward.target(), &Caps { objects: usize::MAX, morphisms: usize::MAX, ..Caps::default() })
                .expect("unbounded caps"),
        );
        back.pairing(forward, &product).expect("common source")
    }

    fn projections(x: &Arc<FiniteGroupoid>, y: &Arc<FiniteGroupoid>, product: &Arc<FiniteGroupoid>) -> (GroupoidMap, GroupoidMap) {
        let (ny, my) = (y.object_count(), y.morphism_count());
        let px = GroupoidMap::from_parts(
            product.clone(),
            x.clone(),
            product.objects().map(|o| o / ny.max(1)).collect(),
            product.morphisms().map(|m| m / my.max(1)).collect(),
        );
        let py = GroupoidMap::from_parts(
            product.clone(),
            y.clone(),
            product.objects().map(|o| o % ny.max(1)).collect(),
            product.morphisms().map(|m| m % my.max(1)).collect(),
        );
        (px, py)
    }

    /// Rebuilds a span from its pieces over `x × y`: each piece is `BH` with
    /// `H ≤ Aut(w)` at a basepoint `w` of a component of `x × y`.
    fn span_from_subgroups(
        x: &Arc<FiniteGroupoid>,
        y: &Arc<FiniteGroupoid>,
        pieces: &[(usize, Subgroup)],
    ) -> (GroupoidMap, GroupoidMap) {
        let product = Arc::new(x.product(y, &Caps { objects: usize::MAX, morphisms: usize::MAX, ..Caps::default() }).expect("unbounded caps"));
        let comps = product.components();
        let (px, py) = Self::projections(x, y, &product);
        let mut apex = Arc::new(FiniteGroupoid::empty());
        let mut objects = Vec::new();
        let mut morphisms = Vec::new();
        for (c, h) in pieces {
            let comp = &comps[*c];
            let incl = comp.group.embed(h);
            let piece = FiniteGroupoid::delooping(incl.source());
            apex = Arc::new(apex.coproduct(&piece));
            objects.push(comp.basepoint);
            morphisms.extend(incl.images().iter().map(|&e| comp.automorphisms[e]));
        }
        let p = GroupoidMap::from_parts(apex, product, objects, morphisms);
        (p.then(&px).expect("composable"), p.then(&py).expect("composable"))
    }

    /// Canonical key of a faithful piece: its base component and the least
    /// conjugate of the image subgroup.
    fn piece_keys(back: &GroupoidMap, forward: &GroupoidMap) -> Option<Vec<(usize, Vec<usize>)>> {
        let p = Self::paired(back, forward);
        let comps = p.target().components();
        let mut keys = Vec::new();
        for piece in groupoid::components_over(&p) {
            let aut = &comps[piece.base_component].group;
            let mut image = piece.rho.clone();
            image.sort_unstable();
            image.dedup();
            if image.len() != piece.group.order() {
                return None;
            }
            let h = Subgroup::new(aut, image).ok()?;
            let least = aut.elements().map(|k| aut.conjugate(&h, k).elements().to_vec()).min()?;
            keys.push((piece.base_component, least));
        }
        keys.sort();
        Some(keys)
    }
}

impl World for GroupoidWorld {
    type Object = Arc<FiniteGroupoid>;
    type Map = GroupoidMap;

    fn name(&self) -> String {
        "finite groupoids".into()
    }

    fn source(&self, f: &GroupoidMap) -> Arc<FiniteGroupoid> {
        f.source().clone()
    }

    fn target(&self, f: &GroupoidMap) -> Arc<FiniteGroupoid> {
        f.target().clone()
    }

    fn identity(&self, x: &Arc<FiniteGroupoid>) -> GroupoidMap {
        GroupoidMap::identity(x)
    }

    fn then(&self, f: &GroupoidMap, g: &GroupoidMap) -> Result<GroupoidMap> {
        f.then(g)
    }

    fn pullback(&self, f: &GroupoidMap, g: &GroupoidMap, caps: &Caps) -> Result<(GroupoidMap, GroupoidMap)> {
        let sq = groupoid::iso_comma_pullback(f, g, caps)?;
        Ok((sq.left, sq.right))
    }

    fn in_class(&self, f: &GroupoidMap, class: MapClass) -> bool {
        match class {
            MapClass::All => true,
            MapClass::Isomorphisms => f.is_equivalence(),
            MapClass::Faithful | MapClass::Injective => f.is_faithful(),
            MapClass::Surjective => f.is_essentially_surjective(),
            MapClass::EClass => f.is_in_e_class(),
        }
    }

    fn size(&self, x: &Arc<FiniteGroupoid>) -> usize {
        x.object_count()
    }

    fn spans_isomorphic(&self, a: (&GroupoidMap, &GroupoidMap), b: (&GroupoidMap, &GroupoidMap)) -> bool {
        if *a.0.target() != *b.0.target() || *a.1.target() != *b.1.target() {
            return false;
        }
        groupoid::equivalent_over(&Self::paired(a.0, a.1), &Self::paired(b.0, b.1))
    }

    fn span_automorphisms(&self, back: &GroupoidMap, forward: &GroupoidMap) -> u64 {
        groupoid::automorphisms_over(&Self::paired(back, forward))
    }

    fn span_pieces(&self, back: &GroupoidMap, forward: &GroupoidMap) -> Vec<(GroupoidMap, GroupoidMap)> {
        back.source()
            .components()
            .into_iter()
            .map(|c| (c.inclusion.then(back).expect("composable"), c.inclusion.then(forward).expect("composable")))
            .collect()
    }

    fn canonical_span(&self, back: &GroupoidMap, forward: &GroupoidMap) -> Result<(GroupoidMap, GroupoidMap)> {
        let keys = Self::piece_keys(back, forward)
            .ok_or_else(|| Error::Unsupported("canonical form of a span that is not faithful into the endpoints".into()))?;
        let product = back.target().product(forward.target(), &Caps { objects: usize::MAX, morphisms: usize::MAX, ..Caps::default() })?;
        let comps = product.components();
        let pieces: Vec<(usize, Subgroup)> = keys
            .into_iter()
            .map(|(c, h)| Ok((c, Subgroup::new(&comps[c].group, h)?)))
            .collect::<Result<_>>()?;
        Ok(Self::span_from_subgroups(back.target(), forward.target(), &pieces))
    }

    /// Pieces are `BH` for `H ≤ Aut(w)` up to conjugacy, with `H` acting
    /// faithfully through the forwards factor. Only faithful forwards legs are
    /// enumerable.
    fn enumerate_spans(
        &self,
        x: &Arc<FiniteGroupoid>,
        y: &Arc<FiniteGroupoid>,
        forwards: MapClass,
        cap: usize,
        caps: &Caps,
    ) -> Result<Vec<(GroupoidMap, GroupoidMap)>> {
        if !matches!(forwards, MapClass::Faithful | MapClass::Injective | MapClass::Isomorphisms | MapClass::EClass) {
            return Err(Error::Unsupported("span enumeration needs faithful forwards legs".into()));
        }
        let product = x.product(y, caps)?;
        let my = y.morphism_count();
        let mut pieces: Vec<(usize, Subgroup)> = Vec::new();
        for (c, comp) in product.components().into_iter().enumerate() {
            for class in &comp.group.lattice().classes {
                let h = &class.representative;
                let mut proj: Vec<usize> = h.elements().iter().map(|&e| comp.automorphisms[e] % my).collect();
                proj.sort_unstable();
                proj.dedup();
                if proj.len() == h.order() {
                    pieces.push((c, h.clone()));
                }
            }
        }
        let mut multisets: Vec<Vec<usize>> = Vec::new();
        let mut current = Vec::new();
        fn rec(start: usize, budget: usize, n: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) -> bool {
            if out.len() >= limit {
                return false;
            }
            out.push(current.clone());
            if budget == 0 {
                return true;
            }
            for i in start..n {
                current.push(i);
                let ok = rec(i, budget - 1, n, current, out, limit);
                current.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
        if !rec(0, cap, pieces.len(), &mut current, &mut multisets, caps.enumeration) {
            return Err(Error::capacity("span classes", caps.enumeration as u128 + 1, caps.enumeration as u128));
        }
        multisets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let mut out = Vec::new();
        for ms in multisets {
            let chosen: Vec<(usize, Subgroup)> = ms.iter().map(|&i| pieces[i].clone()).collect();
            let (b, f) = Self::span_from_subgroups(x, y, &chosen);
            if self.in_class(&f, forwards) {
                out.push((b, f));
            }
        }
        Ok(out)
    }
}

/// Piece multiplicities of a G-set span, keyed canonically; equal maps mean
/// isomorphic spans.
pub fn gset_span_signature(world: &GSetWorld, s: &Span<GSetWorld>) -> BTreeMap<(usize, Vec<usize>), usize> {
    let mut out = BTreeMap::new();
    for key in world.span_keys(&s.back, &s.forward) {
        *out.entry(key).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn world(n: usize) -> GSetWorld {
        GSetWorld::new(Arc::new(FiniteGroup::cyclic(n)))
    }

    fn orbit(w: &GSetWorld, class: usize) -> GSet {
        GSet::coset_space(&w.group, w.group.lattice().representative(class))
    }

    #[test]
    fn restriction_after_transfer_over_c2() {
        let w = world(2);
        let free = orbit(&w, 0);
        let pt = orbit(&w, 1);
        let spec = AdequateTripleSpec::ALL;
        let to_pt = GSetMap::to_point(&free);
        let tr = Span::new(&w, GSetMap::identity(&free), to_pt.clone(), spec).unwrap();
        let res = Span::new(&w, to_pt, GSetMap::identity(&free), spec).unwrap();
        let composite = compose_spans(&w, &tr, &res, &Caps::default()).unwrap();
        assert_eq!(composite.apex(&w).size(), 4);
        let parts = decompose_span(&w, &composite).unwrap();
        // two identity-shaped pieces: the diagonal and the swap
        assert_eq!(parts.iter().map(|p| p.1).sum::<usize>(), 2);
        let _ = pt;
    }

    #[test]
    fn identity_is_a_unit() {
        let w = GSetWorld::new(Arc::new(FiniteGroup::symmetric(3)));
        let x = orbit(&w, 1);
        let y = orbit(&w, 2);
        for class in hom_enumerate(&w, &x, &y, AdequateTripleSpec::ALL, 6, &Caps::default()).unwrap() {
            let s = class.span;
            let left = compose_spans(&w, &Span::identity(&w, &x, s.spec), &s, &Caps::default()).unwrap();
            let right = compose_spans(&w, &s, &Span::identity(&w, &y, s.spec), &Caps::default()).unwrap();
            assert!(span_iso(&w, &left, &s) && span_iso(&w, &right, &s));
        }
    }

    #[test]
    fn swapped_legs_are_not_isomorphic() {
        let w = world(2);
        let free = orbit(&w, 0);
        let pt = orbit(&w, 1);
        let s = Span::new(&w, GSetMap::identity(&free), GSetMap::to_point(&free), AdequateTripleSpec::ALL).unwrap();
        let d = dualize(&s);
        assert!(!span_iso(&w, &s, &d));
        assert!(span_iso(&w, &dualize(&d), &s));
        let _ = pt;
    }

    #[test]
    fn homs_between_points_over_c2() {
        let w = world(2);
        let pt = GSet::point(&w.group);
        let classes = hom_enumerate(&w, &pt, &pt, AdequateTripleSpec::ALL, 2, &Caps::default()).unwrap();
        // ∅, pt, 2pt, free
        assert_eq!(classes.len(), 4);
        let autos: Vec<u64> = classes.iter().map(|c| c.automorphisms).collect();
        assert_eq!(autos, vec![1, 1, 2, 2]);
        let none = hom_enumerate(&w, &pt, &pt, AdequateTripleSpec::ALL, 0, &Caps::default()).unwrap();
        assert_eq!(none.len(), 1);
        assert_eq!(none[0].span.apex(&w).size(), 0);
    }

    #[test]
    fn canonical_form_is_isomorphic() {
        let w = GSetWorld::new(Arc::new(FiniteGroup::symmetric(3)));
        let x = orbit(&w, 1);
        let f = GSetMap::to_point(&x);
        let (pl, pr) = w.pullback(&f, &f, &Caps::default()).unwrap();
        let (cb, cf) = w.canonical_span(&pl, &pr).unwrap();
        assert!(w.spans_isomorphic((&pl, &pr), (&cb, &cf)));
    }

    #[test]
    fn groupoid_homs_from_point_to_bc2() {
        let gw = GroupoidWorld;
        let one = Arc::new(FiniteGroupoid::terminal());
        let bc2 = Arc::new(FiniteGroupoid::delooping(&FiniteGroup::cyclic(2)));
        let classes = hom_enumerate(&gw, &one, &bc2, AdequateTripleSpec::ORBITAL, 1, &Caps::default()).unwrap();
        // ∅, 1 ← B1 → BC2, 1 ← BC2 = BC2
        assert_eq!(classes.len(), 3);
        let autos: Vec<u64> = classes.iter().map(|c| c.automorphisms).collect();
        assert_eq!(autos, vec![1, 2, 1]);
    }

    #[test]
    fn groupoid_composition_of_norm_shapes() {
        let gw = GroupoidWorld;
        let one = Arc::new(FiniteGroupoid::terminal());
        let bc2 = Arc::new(FiniteGroupoid::delooping(&FiniteGroup::cyclic(2)));
        let s = Span::new(&gw, GroupoidMap::to_terminal(&bc2), GroupoidMap::identity(&bc2), AdequateTripleSpec::ORBITAL).unwrap();
        let t = Span::identity(&gw, &bc2, AdequateTripleSpec::ORBITAL);
        let st = compose_spans(&gw, &s, &t, &Caps::default()).unwrap();
        assert!(span_iso(&gw, &st, &s));
        let _ = one;
    }

    #[test]
    fn arrow_env_census() {
        let w = GSetWorld::new(Arc::new(FiniteGroup::trivial()));
        let r = w.arrow_env_enumerate(MapClass::All, 2, &Caps::default()).unwrap();
        assert_eq!(r.objects, 8);
        let r0 = w.arrow_env_enumerate(MapClass::All, 0, &Caps::default()).unwrap();
        assert_eq!((r0.objects, r0.morphisms), (1, 1));
        let iso = w.arrow_env_enumerate(MapClass::Isomorphisms, 2, &Caps::default()).unwrap();
        assert_eq!(iso.objects, 3);
    }
}
