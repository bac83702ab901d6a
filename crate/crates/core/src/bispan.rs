//! Bispans `A ← X → Y → B` (restriction, norm, sum) and their composition by
//! normalizing generator words to the shape `T ∘ N ∘ R`.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Caps, Error, Result};
use crate::group::{search_isomorphisms, FiniteGroup, Subgroup};
use crate::groupoid::{FiniteGroupoid, GroupoidMap};
use crate::gset::{self, Certificate, GSet, GSetMap};
use crate::spancat::{GSetWorld, GroupoidWorld, MapClass, Span, World};
use crate::tambara::TambaraFunctorOracle;

/// The output of a dependent product of `sum` along `norm`:
/// `pushed_sum: Y → C`, `pulled_norm: X → Y`, `base_change: X → B`,
/// `counit: X → A`.
#[derive(Debug, Clone)]
pub struct DistProduct<M> {
    pub pushed_sum: M,
    pub pulled_norm: M,
    pub base_change: M,
    pub counit: M,
}

/// Worlds with dependent products along norm maps.
pub trait DistributiveWorld: World {
    fn dependent_product(&self, norm: &Self::Map, sum: &Self::Map, caps: &Caps) -> Result<DistProduct<Self::Map>>;
    fn bispans_isomorphic(&self, u: &Bispan<Self>, v: &Bispan<Self>, caps: &Caps) -> bool;
}

/// `(F, N, M)`: restriction, norm and sum classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BispanTripleSpec {
    pub restrictions: MapClass,
    pub norms: MapClass,
    pub sums: MapClass,
}

impl BispanTripleSpec {
    /// `(F_G, F_G, F_G)`
    pub const ALL: BispanTripleSpec = BispanTripleSpec { restrictions: MapClass::All, norms: MapClass::All, sums: MapClass::All };
    /// `(𝔾, 𝕆, 𝕆)`
    pub const ORBITAL: BispanTripleSpec =
        BispanTripleSpec { restrictions: MapClass::All, norms: MapClass::Faithful, sums: MapClass::Faithful };

    /// The left class of the factorization whose right class is the sums.
    pub fn left_class(&self) -> MapClass {
        match self.sums {
            MapClass::Faithful => MapClass::EClass,
            _ => MapClass::Isomorphisms,
        }
    }

    /// Sampled checks of the distributive-context axioms: base change keeps
    /// norms and sums in class, dependent products exist and land in class,
    /// and norms are closed under coproducts.
    pub fn certify<W: DistributiveWorld>(&self, world: &W, maps: &[W::Map], caps: &Caps) -> Result<Certificate> {
        let mut checked = 0;
        for n in maps.iter().filter(|f| world.in_class(f, self.norms)) {
            for m in maps.iter().filter(|f| world.in_class(f, self.sums)) {
                if world.target(m) != world.source(n) {
                    continue;
                }
                checked += 1;
                let d = world.dependent_product(n, m, caps)?;
                if !world.in_class(&d.pushed_sum, self.sums) || !world.in_class(&d.pulled_norm, self.norms) {
                    return Ok(Certificate::fail(checked, format!("dependent product of {m:?} along {n:?} leaves the classes")));
                }
            }
            for f in maps.iter().filter(|f| world.in_class(f, self.restrictions)) {
                if world.target(f) != world.target(n) {
                    continue;
                }
                checked += 1;
                let (pn, _) = world.pullback(n, f, caps)?;
                let (_, base) = world.pullback(f, n, caps)?;
                let _ = pn;
                if !world.in_class(&base, self.norms) {
                    return Ok(Certificate::fail(checked, format!("base change of norm {n:?} leaves the class")));
                }
            }
        }
        Ok(Certificate::pass(checked))
    }
}

/// A bispan `A ←r X →n Y →m B`.
#[derive(Debug, Clone)]
pub struct Bispan<W: World> {
    pub restriction: W::Map,
    pub norm: W::Map,
    pub sum: W::Map,
    pub spec: BispanTripleSpec,
}

impl<W: World> Bispan<W> {
    pub fn new(world: &W, restriction: W::Map, norm: W::Map, sum: W::Map, spec: BispanTripleSpec) -> Result<Self> {
        if world.source(&restriction) != world.source(&norm) || world.target(&norm) != world.source(&sum) {
            return Err(Error::Mismatch("bispan legs do not fit together".into()));
        }
        let b = Bispan { restriction, norm, sum, spec };
        b.check_classes(world)?;
        Ok(b)
    }

    fn check_classes(&self, world: &W) -> Result<()> {
        if !world.in_class(&self.restriction, self.spec.restrictions) {
            return Err(Error::ClassViolation("restriction leg outside its class".into()));
        }
        if !world.in_class(&self.norm, self.spec.norms) {
            return Err(Error::ClassViolation("norm leg outside its class".into()));
        }
        if !world.in_class(&self.sum, self.spec.sums) {
            return Err(Error::ClassViolation("sum leg outside its class".into()));
        }
        Ok(())
    }

    pub fn identity(world: &W, a: &W::Object, spec: BispanTripleSpec) -> Self {
        let id = world.identity(a);
        Bispan { restriction: id.clone(), norm: id.clone(), sum: id, spec }
    }

    /// `R_f: A → X` for `f: X → A`.
    pub fn restriction_generator(world: &W, f: W::Map, spec: BispanTripleSpec) -> Self {
        let id = world.identity(&world.source(&f));
        Bispan { restriction: f, norm: id.clone(), sum: id, spec }
    }

    /// `N_n: X → Y` for `n: X → Y`.
    pub fn norm_generator(world: &W, n: W::Map, spec: BispanTripleSpec) -> Self {
        Bispan { restriction: world.identity(&world.source(&n)), sum: world.identity(&world.target(&n)), norm: n, spec }
    }

    /// `T_m: Y → B` for `m: Y → B`.
    pub fn sum_generator(world: &W, m: W::Map, spec: BispanTripleSpec) -> Self {
        let id = world.identity(&world.source(&m));
        Bispan { restriction: id.clone(), norm: id, sum: m, spec }
    }

    /// The bispan with identity norm leg.
    pub fn from_span(world: &W, s: &Span<W>, spec: BispanTripleSpec) -> Self {
        Bispan { restriction: s.back.clone(), norm: world.identity(&s.apex(world)), sum: s.forward.clone(), spec }
    }

    pub fn left(&self, world: &W) -> W::Object {
        world.target(&self.restriction)
    }

    pub fn right(&self, world: &W) -> W::Object {
        world.target(&self.sum)
    }

    /// `(T_m, N_n, R_r)` with `self = T ∘ N ∘ R`.
    pub fn generators(&self, world: &W) -> (Self, Self, Self) {
        (
            Self::sum_generator(world, self.sum.clone(), self.spec),
            Self::norm_generator(world, self.norm.clone(), self.spec),
            Self::restriction_generator(world, self.restriction.clone(), self.spec),
        )
    }
}

/// The order in which the generator word `T₂N₂R₂T₁N₁R₁` is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteOrder {
    /// Move `R₂` past `T₁` and then `N₁` before distributing `N₂` over `T`.
    Direct,
    /// Distribute `N₂` over `T` before moving the remaining restriction past `N₁`.
    NormFirst,
    /// `T₂ ∘ (N₂ ∘ (R₂ ∘ u))`, each step direct.
    GeneratorwiseLeft,
    /// `((v ∘ T₁) ∘ N₁) ∘ R₁`, each step direct.
    GeneratorwiseRight,
}

impl RewriteOrder {
    pub const ALL: [RewriteOrder; 4] =
        [RewriteOrder::Direct, RewriteOrder::NormFirst, RewriteOrder::GeneratorwiseLeft, RewriteOrder::GeneratorwiseRight];
}

/// `v ∘ u` for `u: A → B` and `v: B → C`.
pub fn compose_bispans<W: DistributiveWorld>(
    world: &W,
    u: &Bispan<W>,
    v: &Bispan<W>,
    order: RewriteOrder,
    caps: &Caps,
) -> Result<Bispan<W>> {
    if u.spec != v.spec {
        return Err(Error::Mismatch("bispans over different triples".into()));
    }
    if u.right(world) != v.left(world) {
        return Err(Error::Mismatch("middle objects of the bispans differ".into()));
    }
    match order {
        RewriteOrder::Direct | RewriteOrder::NormFirst => compose_once(world, u, v, order, caps),
        RewriteOrder::GeneratorwiseLeft => {
            let (t, n, r) = v.generators(world);
            let step = compose_once(world, u, &r, RewriteOrder::Direct, caps)?;
            let step = compose_once(world, &step, &n, RewriteOrder::Direct, caps)?;
            compose_once(world, &step, &t, RewriteOrder::Direct, caps)
        }
        RewriteOrder::GeneratorwiseRight => {
            let (t, n, r) = u.generators(world);
            let step = compose_once(world, &t, v, RewriteOrder::Direct, caps)?;
            let step = compose_once(world, &n, &step, RewriteOrder::Direct, caps)?;
            compose_once(world, &r, &step, RewriteOrder::Direct, caps)
        }
    }
}

fn compose_once<W: DistributiveWorld>(
    world: &W,
    u: &Bispan<W>,
    v: &Bispan<W>,
    order: RewriteOrder,
    caps: &Caps,
) -> Result<Bispan<W>> {
    // R₂ T₁ = T_{p_X} R_{p_Y} over P = Y₁ ×_B X₂
    let (p_y, p_x) = world.pullback(&u.sum, &v.restriction, caps)?;
    let (restriction, norm, sum) = match order {
        RewriteOrder::NormFirst => {
            // N₂ T_{p_X} = T_{m′} N_{n′} R_ε
            let d = world.dependent_product(&v.norm, &p_x, caps)?;
            // R_{p_Y ∘ ε} N₁ = N R over W = X₁ ×_{Y₁} E
            let down = world.then(&d.counit, &p_y)?;
            let (w_x, w_e) = world.pullback(&u.norm, &down, caps)?;
            (
                world.then(&w_x, &u.restriction)?,
                world.then(&w_e, &d.pulled_norm)?,
                world.then(&d.pushed_sum, &v.sum)?,
            )
        }
        _ => {
            // R_{p_Y} N₁ = N_{q_P} R_{q_X} over Q = X₁ ×_{Y₁} P
            let (q_x, q_p) = world.pullback(&u.norm, &p_y, caps)?;
            let d = world.dependent_product(&v.norm, &p_x, caps)?;
            // R_ε N_{q_P} = N_{w_E} R_{w_Q} over W = Q ×_P E
            let (w_q, w_e) = world.pullback(&q_p, &d.counit, caps)?;
            (
                world.then(&world.then(&w_q, &q_x)?, &u.restriction)?,
                world.then(&w_e, &d.pulled_norm)?,
                world.then(&d.pushed_sum, &v.sum)?,
            )
        }
    };
    let out = Bispan { restriction, norm, sum, spec: u.spec };
    out.check_classes(world)?;
    Ok(out)
}

pub fn bispan_iso<W: DistributiveWorld>(world: &W, u: &Bispan<W>, v: &Bispan<W>, caps: &Caps) -> bool {
    world.bispans_isomorphic(u, v, caps)
}

impl DistributiveWorld for GSetWorld {
    fn dependent_product(&self, norm: &GSetMap, sum: &GSetMap, caps: &Caps) -> Result<DistProduct<GSetMap>> {
        let d = gset::dependent_product(norm, sum, caps)?;
        Ok(DistProduct {
            pushed_sum: d.pushed_sum,
            pulled_norm: d.pulled_norm,
            base_change: d.base_change,
            counit: d.counit,
        })
    }

    fn bispans_isomorphic(&self, u: &Bispan<Self>, v: &Bispan<Self>, _caps: &Caps) -> bool {
        let (ua, ub) = (u.norm.source(), u.norm.target());
        let (va, vb) = (v.norm.source(), v.norm.target());
        if u.restriction.target() != v.restriction.target()
            || u.sum.target() != v.sum.target()
            || !ua.is_isomorphic(va)
            || !ub.is_isomorphic(vb)
        {
            return false;
        }
        // an isomorphism splits over the orbits of the middle object B, and
        // every matching below is between classes of an equivalence relation,
        // so greedy choices never need to be undone
        let (pu, pv) = (BispanPieces::new(u), BispanPieces::new(v));
        let mut used = vec![false; pv.pieces.len()];
        pu.pieces.iter().all(|piece| {
            let hit = (0..pv.pieces.len()).find(|&j| !used[j] && pieces_isomorphic(u, &pu, piece, v, &pv, &pv.pieces[j]));
            hit.map(|j| used[j] = true).is_some()
        })
    }
}

/// A bispan cut along the orbits of its middle object `B`.
struct BispanPieces {
    /// `(orbit of B, representatives of the A-orbits over it)`.
    pieces: Vec<(Vec<usize>, Vec<usize>)>,
    a_stab: Vec<Subgroup>,
    b_stab: Vec<Subgroup>,
}

impl BispanPieces {
    fn new(u: &Bispan<GSetWorld>) -> Self {
        let (a, b) = (u.norm.source(), u.norm.target());
        let (b_ids, b_reps) = b.orbit_ids();
        let mut pieces: Vec<(Vec<usize>, Vec<usize>)> = b_reps.iter().map(|&r| (b.orbit(r), Vec::new())).collect();
        for r in a.orbit_representatives() {
            pieces[b_ids[u.norm.apply(r)]].1.push(r);
        }
        BispanPieces {
            pieces,
            a_stab: (0..a.size()).map(|x| a.stabilizer(x)).collect(),
            b_stab: (0..b.size()).map(|x| b.stabilizer(x)).collect(),
        }
    }
}

fn pieces_isomorphic(
    u: &Bispan<GSetWorld>,
    pu: &BispanPieces,
    (orbit, a_reps): &(Vec<usize>, Vec<usize>),
    v: &Bispan<GSetWorld>,
    pv: &BispanPieces,
    (orbit2, a_reps2): &(Vec<usize>, Vec<usize>),
) -> bool {
    let (a, b) = (u.norm.source(), u.norm.target());
    let (a2, b2) = (v.norm.source(), v.norm.target());
    let size = |x: &GSet, reps: &[usize]| reps.iter().map(|&r| x.orbit(r).len()).sum::<usize>();
    if orbit.len() != orbit2.len() || a_reps.len() != a_reps2.len() || size(a, a_reps) != size(a2, a_reps2) {
        return false;
    }
    let group = b.group();
    let b0 = orbit[0];
    // g with g·b0 = b, for every b in the orbit
    let mut lift: HashMap<usize, usize> = HashMap::new();
    for g in group.elements() {
        lift.entry(b.act(g, b0)).or_insert(g);
    }
    let orbit_points2: Vec<Vec<usize>> = a_reps2.iter().map(|&r| a2.orbit(r)).collect();
    orbit2
        .iter()
        .filter(|&&t| v.sum.apply(t) == u.sum.apply(b0) && pv.b_stab[t] == pu.b_stab[b0])
        .any(|&t| {
            // β(g·b0) = g·t; A-orbits must then match over B′ × X
            let beta = |p: usize| b2.act(lift[&p], t);
            let mut used = vec![false; a_reps2.len()];
            a_reps.iter().all(|&x| {
                let key = (beta(u.norm.apply(x)), u.restriction.apply(x));
                let hit = (0..a_reps2.len()).find(|&j| {
                    !used[j]
                        && orbit_points2[j]
                            .iter()
                            .any(|&y| (v.norm.apply(y), v.restriction.apply(y)) == key && pv.a_stab[y] == pu.a_stab[x])
                });
                hit.map(|j| used[j] = true).is_some()
            })
        })
}

/// Fibers of a faithful functor over the basepoint of each component of its
/// target, as sets with an action of the basepoint automorphism group.
struct FiberSet {
    /// Class index of each pair `(object, γ: f(object) → c)`.
    class_of: HashMap<(usize, usize), usize>,
    /// A representative pair for each class.
    reps: Vec<(usize, usize)>,
}

fn fiber_set(f: &GroupoidMap, c: usize) -> FiberSet {
    let src = f.source();
    let tgt = f.target();
    let mut class_of = HashMap::new();
    let mut reps = Vec::new();
    for b in src.objects() {
        for &gamma in tgt.hom(f.on_object(b), c) {
            if class_of.contains_key(&(b, gamma)) {
                continue;
            }
            let k = reps.len();
            reps.push((b, gamma));
            for b2 in src.objects() {
                for &beta in src.hom(b, b2) {
                    // β: b → b′ sends (b, γ) to (b′, γ ∘ f(β)⁻¹)
                    class_of.insert((b2, tgt.compose(gamma, tgt.inverse(f.on_morphism(beta)))), k);
                }
            }
        }
    }
    FiberSet { class_of, reps }
}

fn fiber_gset(f: &GroupoidMap, c: usize, group: &Arc<FiniteGroup>, autos: &[usize], fs: &FiberSet) -> Result<GSet> {
    let tgt = f.target();
    let rows = group
        .elements()
        .map(|g| fs.reps.iter().map(|&(b, gamma)| fs.class_of[&(b, tgt.compose(autos[g], gamma))]).collect())
        .collect();
    let _ = c;
    GSet::new(group.clone(), rows)
}

impl DistributiveWorld for GroupoidWorld {
    /// Along a faithful `norm`, for a faithful `sum`: componentwise over the
    /// target, the fibers become sets with an action of the basepoint group,
    /// the dependent product is taken there, and `Y` is its action groupoid.
    fn dependent_product(&self, norm: &GroupoidMap, sum: &GroupoidMap, caps: &Caps) -> Result<DistProduct<GroupoidMap>> {
        if !norm.is_faithful() || !sum.is_faithful() {
            return Err(Error::Unsupported("groupoid dependent products need faithful norm and sum legs".into()));
        }
        if *sum.target() != *norm.source() {
            return Err(Error::Mismatch("the sum leg must land in the source of the norm leg".into()));
        }
        let c_g = norm.target().clone();
        let a_g = sum.source().clone();
        let b_g = norm.source().clone();
        let composite = sum.then(norm)?;
        let mut y = FiniteGroupoid::empty();
        let mut y_to_c_objects = Vec::new();
        let mut y_to_c_morphisms = Vec::new();
        // per Y object: the section as classes of A-pairs indexed by B-classes
        let mut sections: Vec<(usize, HashMap<usize, usize>)> = Vec::new();
        let mut fibers = Vec::new();
        for comp in c_g.components() {
            let c = comp.basepoint;
            let fb = fiber_set(norm, c);
            let fa = fiber_set(&composite, c);
            let xb = fiber_gset(norm, c, &comp.group, &comp.automorphisms, &fb)?;
            let xa = fiber_gset(&composite, c, &comp.group, &comp.automorphisms, &fa)?;
            let m_table = fa
                .reps
                .iter()
                .map(|&(a, delta)| fb.class_of[&(sum.on_object(a), delta)])
                .collect();
            let m = GSetMap::new(xa, xb.clone(), m_table)?;
            let d = gset::dependent_product(&GSetMap::to_point(&xb), &m, caps)?;
            let pi = d.pushed_sum.source().clone();
            let piece = FiniteGroupoid::action(&pi);
            caps.check_points("dependent product objects", (y.object_count() + piece.object_count()) as u128)?;
            for p in 0..pi.size() {
                let mut s = HashMap::new();
                for x in 0..d.pulled_norm.source().size() {
                    if d.pulled_norm.apply(x) == p {
                        s.insert(d.base_change.apply(x), d.counit.apply(x));
                    }
                }
                sections.push((fibers.len(), s));
                y_to_c_objects.push(c);
            }
            for mo in piece.morphisms() {
                y_to_c_morphisms.push(comp.automorphisms[mo % comp.group.order()]);
            }
            y = y.coproduct(&piece);
            fibers.push((fa, fb));
        }
        let y = Arc::new(y);
        if y.object_count() > caps.objects || y.morphism_count() > caps.morphisms {
            return Err(Error::capacity("dependent product groupoid", y.morphism_count() as u128, caps.morphisms as u128));
        }
        let pushed_sum = GroupoidMap::new(y.clone(), c_g.clone(), y_to_c_objects, y_to_c_morphisms)?;
        let sq = crate::groupoid::iso_comma_pullback(&pushed_sum, norm, caps)?;
        // counit on objects (y, b, γ: c → n(b)): the section value at [b, γ⁻¹]
        let mut eps_objects = Vec::with_capacity(sq.triples.len());
        let mut witness = Vec::with_capacity(sq.triples.len());
        for &(yo, b, gamma) in &sq.triples {
            let (f, section) = &sections[yo];
            let (fa, fb) = &fibers[*f];
            let point = fb.class_of[&(b, c_g.inverse(gamma))];
            let (a, delta) = fa.reps[section[&point]];
            // β: m(a) → b with n(β) = γ ∘ δ
            let want = c_g.compose(gamma, delta);
            let beta = *b_g
                .hom(sum.on_object(a), b)
                .iter()
                .find(|&&beta| norm.on_morphism(beta) == want)
                .ok_or_else(|| Error::invalid("dependent product section has no lift"))?;
            eps_objects.push(a);
            witness.push(beta);
        }
        let apex = sq.apex.clone();
        let mut eps_morphisms = Vec::with_capacity(apex.morphism_count());
        for mo in apex.morphisms() {
            let (s, t) = (apex.source(mo), apex.target(mo));
            let beta2 = sq.right.on_morphism(mo);
            let want = b_g.compose(b_g.inverse(witness[t]), b_g.compose(beta2, witness[s]));
            let alpha = *a_g
                .hom(eps_objects[s], eps_objects[t])
                .iter()
                .find(|&&alpha| sum.on_morphism(alpha) == want)
                .ok_or_else(|| Error::invalid("counit does not lift a morphism"))?;
            eps_morphisms.push(alpha);
        }
        let counit = GroupoidMap::new(apex, a_g, eps_objects, eps_morphisms)?;
        Ok(DistProduct { pushed_sum, pulled_norm: sq.left, base_change: sq.right, counit })
    }

    /// Searches equivalences `β: Y → Y′` with `m′β ≅ m` and then compares
    /// `(r, βn): X → A × Y′` with `(r′, n′)` up to equivalence over `A × Y′`.
    fn bispans_isomorphic(&self, u: &Bispan<Self>, v: &Bispan<Self>, caps: &Caps) -> bool {
        if *u.restriction.target() != *v.restriction.target() || *u.sum.target() != *v.sum.target() {
            return false;
        }
        if !crate::groupoid::equivalent_over(&u.sum, &v.sum) {
            return false;
        }
        let a = u.restriction.target();
        let Ok(prod) = a.product(v.norm.target(), caps) else { return false };
        let prod = Arc::new(prod);
        let Ok(right) = v.restriction.pairing(&v.norm, &prod) else { return false };
        let mut found = false;
        skeletal_equivalences(u.norm.target(), v.norm.target(), caps.enumeration, &mut |beta| {
            if beta.then(&v.sum).is_ok_and(|m| m.is_naturally_isomorphic(&u.sum)) {
                let left = u.norm.then(&beta).and_then(|bn| u.restriction.pairing(&bn, &prod));
                found = left.is_ok_and(|l| crate::groupoid::equivalent_over(&l, &right));
            }
            !found
        });
        found
    }
}

/// Equivalences `a → b` sending every component onto the basepoint of a
/// distinct component of `b`, one per choice of component matching and of
/// isomorphisms between the automorphism groups.
fn skeletal_equivalences(
    a: &Arc<FiniteGroupoid>,
    b: &Arc<FiniteGroupoid>,
    limit: usize,
    visit: &mut dyn FnMut(GroupoidMap) -> bool,
) {
    let ca = a.components();
    let cb = b.components();
    if ca.len() != cb.len() {
        return;
    }
    let options: Vec<Vec<(usize, Vec<usize>)>> = ca
        .iter()
        .map(|x| {
            let mut opts = Vec::new();
            for (j, y) in cb.iter().enumerate() {
                search_isomorphisms(&x.group, &y.group, &mut |_, _| true, &mut |psi| {
                    opts.push((j, psi.to_vec()));
                    opts.len() < limit
                });
            }
            opts
        })
        .collect();
    let paths: Vec<Vec<Option<usize>>> = ca.iter().map(|x| a.paths_from(x.basepoint)).collect();
    let pos: Vec<HashMap<usize, usize>> =
        ca.iter().map(|x| x.automorphisms.iter().enumerate().map(|(k, &m)| (m, k)).collect()).collect();
    let comp_of = a.component_ids();
    let mut choice = vec![0; ca.len()];
    let mut used = vec![false; cb.len()];
    let mut emitted = 0;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        options: &[Vec<(usize, Vec<usize>)>],
        choice: &mut Vec<usize>,
        used: &mut Vec<bool>,
        emit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == options.len() {
            return emit(choice);
        }
        for (k, (j, _)) in options[i].iter().enumerate() {
            if used[*j] {
                continue;
            }
            used[*j] = true;
            choice[i] = k;
            let go = rec(i + 1, options, choice, used, emit);
            used[*j] = false;
            if !go {
                return false;
            }
        }
        true
    }
    rec(0, &options, &mut choice, &mut used, &mut |choice| {
        emitted += 1;
        let objects = a.objects().map(|o| cb[options[comp_of[o]][choice[comp_of[o]]].0].basepoint).collect();
        let morphisms = a
            .morphisms()
            .map(|f| {
                let c = comp_of[a.source(f)];
                let (j, psi) = &options[c][choice[c]];
                let ta = paths[c][a.source(f)].expect("same component");
                let tb = paths[c][a.target(f)].expect("same component");
                let loop_ = a.compose(a.inverse(tb), a.compose(f, ta));
                cb[*j].automorphisms[psi[pos[c][&loop_]]]
            })
            .collect();
        visit(GroupoidMap::from_parts(a.clone(), b.clone(), objects, morphisms)) && emitted < limit
    });
}

/// Representatives of the bispan classes `a ← X → Y → b` over G-sets with
/// `|X| ≤ cap_x` and `|Y| ≤ cap_y`, in canonical order.
pub fn enumerate_bispans(
    world: &GSetWorld,
    a: &GSet,
    b: &GSet,
    cap_x: usize,
    cap_y: usize,
    caps: &Caps,
) -> Result<Vec<Bispan<GSetWorld>>> {
    let pt = GSet::point(&world.group);
    let ys = world.enumerate_spans(&pt, b, MapClass::All, cap_y, caps)?;
    let mut out = Vec::new();
    for (_, sum) in ys {
        let y = sum.source().clone();
        let xs = world.enumerate_spans(a, &y, MapClass::All, cap_x, caps)?;
        let mut local: Vec<Bispan<GSetWorld>> = Vec::new();
        for (restriction, norm) in xs {
            let cand = Bispan { restriction, norm, sum: sum.clone(), spec: BispanTripleSpec::ALL };
            if !local.iter().any(|u| world.bispans_isomorphic(u, &cand, caps)) {
                local.push(cand);
            }
        }
        out.extend(local);
    }
    Ok(out)
}

/// A value of the functor at a G-set: one level value per orbit, attached to
/// the least point of the orbit.
pub type GSetValue<V> = Vec<V>;

struct Evaluator<'a, O: TambaraFunctorOracle> {
    oracle: &'a O,
}

impl<O: TambaraFunctorOracle> Evaluator<'_, O> {
    /// The value at an arbitrary point, transported from its orbit's least point.
    fn at_point(&self, x: &GSet, value: &[O::Value], z: usize) -> (Subgroup, O::Value) {
        let (ids, reps) = x.orbit_ids();
        let rep = reps[ids[z]];
        let g = x.group().elements().find(|&g| x.act(g, rep) == z).expect("same orbit");
        let stab = x.stabilizer(rep);
        let v = &value[ids[z]];
        if g == x.group().identity() {
            (stab, v.clone())
        } else {
            (x.group().conjugate(&stab, g), self.oracle.conjugate(g, &stab, v))
        }
    }

    fn restrict(&self, f: &GSetMap, value: &[O::Value]) -> Vec<O::Value> {
        f.source()
            .orbit_representatives()
            .into_iter()
            .map(|x| {
                let (sy, vy) = self.at_point(f.target(), value, f.apply(x));
                let sx = f.source().stabilizer(x);
                if sx == sy {
                    vy
                } else {
                    self.oracle.restrict(&sx, &sy, &vy)
                }
            })
            .collect()
    }

    fn push(&self, f: &GSetMap, value: &[O::Value], multiplicative: bool) -> Vec<O::Value> {
        let (src, tgt) = (f.source(), f.target());
        tgt.orbit_representatives()
            .into_iter()
            .map(|b| {
                let sb = tgt.stabilizer(b);
                let mut acc = if multiplicative { self.oracle.one(&sb) } else { self.oracle.zero(&sb) };
                let fiber = f.fiber(b);
                let mut seen = vec![false; src.size()];
                for &a in &fiber {
                    if seen[a] {
                        continue;
                    }
                    for &h in sb.elements() {
                        seen[src.act(h, a)] = true;
                    }
                    let (sa, va) = self.at_point(src, value, a);
                    let pushed = if sa == sb {
                        va
                    } else if multiplicative {
                        self.oracle.norm(&sa, &sb, &va)
                    } else {
                        self.oracle.transfer(&sa, &sb, &va)
                    };
                    acc = if multiplicative { self.oracle.mul(&sb, &acc, &pushed) } else { self.oracle.add(&sb, &acc, &pushed) };
                }
                acc
            })
            .collect()
    }

    fn bispan(&self, u: &Bispan<GSetWorld>, value: &[O::Value]) -> Vec<O::Value> {
        let r = self.restrict(&u.restriction, value);
        let n = self.push(&u.norm, &r, true);
        self.push(&u.sum, &n, false)
    }
}

/// Evaluates `T_m N_n R_r` on a value at the left endpoint.
pub fn evaluate_bispan<O: TambaraFunctorOracle>(oracle: &O, u: &Bispan<GSetWorld>, value: &[O::Value]) -> Vec<O::Value> {
    Evaluator { oracle }.bispan(u, value)
}

/// Sample values at a G-set: products of per-orbit samples, truncated to a
/// bounded number of combinations.
pub fn sample_values<O: TambaraFunctorOracle>(oracle: &O, x: &GSet, seed: u64, limit: usize) -> Vec<Vec<O::Value>> {
    let per_orbit: Vec<Vec<O::Value>> = x
        .orbit_representatives()
        .into_iter()
        .map(|z| oracle.samples(&x.stabilizer(z), seed))
        .collect();
    let mut out: Vec<Vec<O::Value>> = vec![Vec::new()];
    for options in &per_orbit {
        let mut next = Vec::new();
        'outer: for prefix in &out {
            for o in options {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
                if next.len() >= limit {
                    break 'outer;
                }
            }
        }
        out = next;
    }
    out
}

/// Checks `F(v ∘ u) = F(v) ∘ F(u)` on sample values for all composable pairs
/// of bispans between the given endpoints (`|X|, |Y| ≤ apex_cap`), plus
/// product preservation on binary coproducts of endpoints, and that all
/// rewrite orders give isomorphic composites.
pub fn check_functoriality<O: TambaraFunctorOracle>(
    oracle: &O,
    endpoints: &[GSet],
    apex_cap: usize,
    seed: u64,
    caps: &Caps,
) -> Result<FunctorialityReport> {
    let world = GSetWorld::new(oracle.group().clone());
    let eval = Evaluator { oracle };
    let mut homs: HashMap<(usize, usize), Vec<Bispan<GSetWorld>>> = HashMap::new();
    for (i, a) in endpoints.iter().enumerate() {
        for (j, b) in endpoints.iter().enumerate() {
            homs.insert((i, j), enumerate_bispans(&world, a, b, apex_cap, apex_cap, caps)?);
        }
    }
    let samples: Vec<Vec<Vec<O::Value>>> = endpoints.iter().map(|a| sample_values(oracle, a, seed, 16)).collect();
    let mut jobs = Vec::new();
    for i in 0..endpoints.len() {
        for j in 0..endpoints.len() {
            for k in 0..endpoints.len() {
                for (ui, _) in homs[&(i, j)].iter().enumerate() {
                    for (vi, _) in homs[&(j, k)].iter().enumerate() {
                        jobs.push((i, j, k, ui, vi));
                    }
                }
            }
        }
    }
    let results: Vec<Result<Option<(bool, String)>>> = jobs
        .par_iter()
        .map(|&(i, j, k, ui, vi)| {
            let u = &homs[&(i, j)][ui];
            let v = &homs[&(j, k)][vi];
            let composite = compose_bispans(&world, u, v, RewriteOrder::Direct, caps)?;
            for order in &RewriteOrder::ALL[1..] {
                let other = compose_bispans(&world, u, v, *order, caps)?;
                if !world.bispans_isomorphic(&composite, &other, caps) {
                    return Ok(Some((false, format!("rewrite order {order:?} disagrees on pair ({u:?}, {v:?})"))));
                }
            }
            for a in &samples[i] {
                let lhs = eval.bispan(&composite, a);
                let rhs = eval.bispan(v, &eval.bispan(u, a));
                if lhs != rhs {
                    return Ok(Some((true, format!("F(v∘u) ≠ F(v)F(u) for u = {u:?}, v = {v:?}, value {a:?}"))));
                }
            }
            Ok(None)
        })
        .collect();
    let mut pairs = 0;
    for r in results {
        pairs += 1;
        if let Some((confluent, why)) = r? {
            return Ok(FunctorialityReport { certificate: Certificate::fail(pairs, why), pairs, confluent });
        }
    }
    // product preservation: restriction to the summands of A ⊔ B is a bijection on samples
    for a in endpoints {
        for b in endpoints {
            let ab = a.disjoint_union(b);
            let ia = GSetMap::new(a.clone(), ab.clone(), (0..a.size()).collect())?;
            let ib = GSetMap::new(b.clone(), ab.clone(), (a.size()..ab.size()).collect())?;
            for v in sample_values(oracle, &ab, seed, 16) {
                let split = [eval.restrict(&ia, &v), eval.restrict(&ib, &v)].concat();
                if split != v {
                    return Ok(FunctorialityReport {
                        certificate: Certificate::fail(pairs, format!("value {v:?} on {ab:?} does not split")),
                        pairs,
                        confluent: true,
                    });
                }
            }
        }
    }
    Ok(FunctorialityReport { certificate: Certificate::pass(pairs), pairs, confluent: true })
}

#[derive(Debug, Clone)]
pub struct FunctorialityReport {
    pub certificate: Certificate,
    /// Composable pairs examined.
    pub pairs: usize,
    pub confluent: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spancat::{compose_spans, span_iso, AdequateTripleSpec};
    use crate::gset::search_equivariant_maps;
    use crate::tambara::{as_tambara_oracle, BurnsideOracle, CorruptedNormOracle, TerminalOracle};

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    /// Isomorphism by searching all equivariant bijections of both middle objects.
    fn brute_iso(u: &Bispan<GSetWorld>, v: &Bispan<GSetWorld>) -> bool {
        let (ux, uy) = (u.norm.source(), u.norm.target());
        let (vx, vy) = (v.norm.source(), v.norm.target());
        if u.restriction.target() != v.restriction.target() || u.sum.target() != v.sum.target() {
            return false;
        }
        let mut found = false;
        search_equivariant_maps(uy, vy, true, &mut |p, q| u.sum.apply(p) == v.sum.apply(q), &mut |beta| {
            search_equivariant_maps(
                ux,
                vx,
                true,
                &mut |p, q| u.restriction.apply(p) == v.restriction.apply(q) && beta[u.norm.apply(p)] == v.norm.apply(q),
                &mut |_| {
                    found = true;
                    false
                },
            );
            !found
        });
        found
    }

    #[test]
    fn piecewise_iso_agrees_with_exhaustive_search() {
        let caps = Caps::default();
        let mut checked = 0;
        for g in [c2(), Arc::new(FiniteGroup::cyclic(3)), Arc::new(FiniteGroup::symmetric(3))] {
            let w = GSetWorld::new(g.clone());
            let l = g.lattice();
            let os: Vec<GSet> = (0..l.len()).map(|c| GSet::coset_space(&g, l.representative(c))).collect();
            let cap = if g.order() == 6 { 3 } else { 2 };
            for a in &os {
                for b in &os {
                    let classes = enumerate_bispans(&w, a, b, cap, cap, &caps).unwrap();
                    // composites give many isomorphic but differently presented bispans
                    let mut all = classes.clone();
                    for u in classes.iter().take(6) {
                        let id = Bispan::identity(&w, b, BispanTripleSpec::ALL);
                        all.push(compose_bispans(&w, u, &id, RewriteOrder::NormFirst, &caps).unwrap());
                    }
                    for u in &all {
                        for v in &all {
                            assert_eq!(w.bispans_isomorphic(u, v, &caps), brute_iso(u, v), "{u:?} {v:?}");
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn norm_past_fold_reproduces_the_dependent_product() {
        let w = GSetWorld::new(c2());
        let free = GSet::regular(&w.group);
        let pt = GSet::point(&w.group);
        let spec = BispanTripleSpec::ALL;
        // T along the fold C2 ⊔ C2 → C2, then N along C2 → pt
        let t = Bispan::sum_generator(&w, GSetMap::fold(&free), spec);
        let n = Bispan::norm_generator(&w, GSetMap::to_point(&free), spec);
        for order in RewriteOrder::ALL {
            let nt = compose_bispans(&w, &t, &n, order, &Caps::default()).unwrap();
            let y = nt.sum.source();
            assert_eq!(y.size(), 4);
            assert_eq!(y.orbit_type(), vec![1, 2]);
            assert_eq!(nt.sum.target(), &pt);
        }
    }

    #[test]
    fn identity_bispans_are_units() {
        let w = GSetWorld::new(c2());
        let free = GSet::regular(&w.group);
        let pt = GSet::point(&w.group);
        for u in enumerate_bispans(&w, &free, &pt, 2, 2, &Caps::default()).unwrap() {
            let left = compose_bispans(&w, &Bispan::identity(&w, &free, u.spec), &u, RewriteOrder::Direct, &Caps::default()).unwrap();
            let right = compose_bispans(&w, &u, &Bispan::identity(&w, &pt, u.spec), RewriteOrder::Direct, &Caps::default()).unwrap();
            assert!(bispan_iso(&w, &left, &u, &Caps::default()));
            assert!(bispan_iso(&w, &right, &u, &Caps::default()));
        }
    }

    #[test]
    fn spans_embed_as_bispans() {
        let w = GSetWorld::new(c2());
        let free = GSet::regular(&w.group);
        let to_pt = GSetMap::to_point(&free);
        let tr = Span::new(&w, GSetMap::identity(&free), to_pt.clone(), AdequateTripleSpec::ALL).unwrap();
        let res = Span::new(&w, to_pt, GSetMap::identity(&free), AdequateTripleSpec::ALL).unwrap();
        let s = compose_spans(&w, &tr, &res, &Caps::default()).unwrap();
        let b = compose_bispans(
            &w,
            &Bispan::from_span(&w, &tr, BispanTripleSpec::ALL),
            &Bispan::from_span(&w, &res, BispanTripleSpec::ALL),
            RewriteOrder::Direct,
            &Caps::default(),
        )
        .unwrap();
        assert!(bispan_iso(&w, &b, &Bispan::from_span(&w, &s, BispanTripleSpec::ALL), &Caps::default()));
        assert!(b.norm.is_bijective());
        let flat = Span::new(&w, b.restriction.clone(), b.norm.then(&b.sum).unwrap(), AdequateTripleSpec::ALL).unwrap();
        assert!(span_iso(&w, &flat, &s));
    }

    #[test]
    fn norm_degree_mismatch_is_not_iso() {
        let w = GSetWorld::new(c2());
        let pt = GSet::point(&w.group);
        let two = GSet::trivial(&w.group, 2);
        let one = Bispan::identity(&w, &pt, BispanTripleSpec::ALL);
        let fold = GSetMap::to_point(&two);
        let sq = Bispan::new(&w, fold.clone(), fold, GSetMap::identity(&pt), BispanTripleSpec::ALL).unwrap();
        assert!(!bispan_iso(&w, &one, &sq, &Caps::default()));
        assert!(bispan_iso(&w, &sq, &sq, &Caps::default()));
    }

    #[test]
    fn burnside_functor_is_functorial_on_small_c2_bispans() {
        let g = c2();
        let endpoints = vec![GSet::regular(&g), GSet::point(&g)];
        let report = check_functoriality(&as_tambara_oracle(&g), &endpoints, 2, 7, &Caps::default()).unwrap();
        assert!(report.certificate.passed, "{:?}", report.certificate.failure);
        let term = check_functoriality(&TerminalOracle { group: g.clone() }, &endpoints, 2, 7, &Caps::default()).unwrap();
        assert!(term.certificate.passed);
    }

    #[test]
    fn corrupted_norms_are_detected() {
        let g = c2();
        let endpoints = vec![GSet::regular(&g), GSet::point(&g)];
        let bad = CorruptedNormOracle { inner: BurnsideOracle::clone(&as_tambara_oracle(&g)) };
        let report = check_functoriality(&bad, &endpoints, 2, 7, &Caps::default()).unwrap();
        assert!(!report.certificate.passed);
    }

    #[test]
    fn groupoid_dependent_product_matches_gset_example() {
        // BC2-level version of C2 → pt with the fold: the free C2-set is 1 → BC2
        let gw = GroupoidWorld;
        let bc2 = Arc::new(FiniteGroupoid::delooping(&FiniteGroup::cyclic(2)));
        let one = Arc::new(FiniteGroupoid::terminal());
        let n = GroupoidMap::point(&bc2, 0);
        let n = GroupoidMap::new(one.clone(), bc2.clone(), n.object_table().to_vec(), n.morphism_table().to_vec()).unwrap();
        let fold = GroupoidMap::fold(&one);
        let d = gw.dependent_product(&n, &fold, &Caps::default()).unwrap();
        // 4 sections: two fixed, one free orbit, so Y ≃ BC2 ⊔ BC2 ⊔ 1
        let y = d.pushed_sum.source();
        let mut orders: Vec<usize> = y.components().iter().map(|c| c.group.order()).collect();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 2]);
        assert!(d.pushed_sum.is_faithful());
        assert!(d.pulled_norm.is_faithful());
    }

    #[test]
    fn groupoid_bispans_compose_and_compare() {
        let gw = GroupoidWorld;
        let bc2 = Arc::new(FiniteGroupoid::delooping(&FiniteGroup::cyclic(2)));
        let one = Arc::new(FiniteGroupoid::terminal());
        let spec = BispanTripleSpec::ORBITAL;
        let inc = GroupoidMap::point(&bc2, 0);
        let inc = GroupoidMap::new(one.clone(), bc2.clone(), inc.object_table().to_vec(), inc.morphism_table().to_vec()).unwrap();
        let n = Bispan::norm_generator(&gw, inc.clone(), spec);
        let t = Bispan::sum_generator(&gw, GroupoidMap::fold(&one), spec);
        let a = compose_bispans(&gw, &t, &n, RewriteOrder::Direct, &Caps::default()).unwrap();
        let b = compose_bispans(&gw, &t, &n, RewriteOrder::NormFirst, &Caps::default()).unwrap();
        assert!(bispan_iso(&gw, &a, &b, &Caps::default()));
        let id = Bispan::identity(&gw, &one, spec);
        let c = compose_bispans(&gw, &id, &n, RewriteOrder::Direct, &Caps::default()).unwrap();
        assert!(bispan_iso(&gw, &c, &n, &Caps::default()));
        assert!(!bispan_iso(&gw, &a, &n, &Caps::default()));
    }
}
