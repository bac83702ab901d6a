//! Finite G-sets, equivariant maps, pullbacks, dependent products and the
//! change-of-group functors (restriction, inflation, induction, deflation).

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Caps, Error, Result};
use crate::group::{same_group, FiniteGroup, GroupHom, Subgroup};

/// A finite set with a left action of a finite group.
#[derive(Clone)]
pub struct GSet {
    group: Arc<FiniteGroup>,
    size: usize,
    /// `action[g * size + x] = g·x`
    action: Arc<Vec<usize>>,
}

impl fmt::Debug for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GSet({}, {} points, type {:?})", self.group.name(), self.size, self.orbit_type())
    }
}

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.size == other.size && self.action == other.action
    }
}

impl Eq for GSet {}

impl GSet {
    /// Builds a G-set from an action table `rows[g][x] = g·x`, checking the
    /// action axioms exhaustively.
    pub fn new(group: Arc<FiniteGroup>, rows: Vec<Vec<usize>>) -> Result<Self> {
        if rows.len() != group.order() {
            return Err(Error::invalid("action table needs one row per group element"));
        }
        let size = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != size || r.iter().any(|&x| x >= size)) {
            return Err(Error::invalid("ragged or out-of-range action table"));
        }
        let action: Vec<usize> = rows.concat();
        let set = GSet { group, size, action: Arc::new(action) };
        set.check_axioms()?;
        Ok(set)
    }

    pub(crate) fn from_flat(group: Arc<FiniteGroup>, size: usize, action: Vec<usize>) -> Self {
        let set = GSet { group, size, action: Arc::new(action) };
        debug_assert!(set.check_axioms().is_ok());
        set
    }

    fn check_axioms(&self) -> Result<()> {
        let g = &self.group;
        for x in 0..self.size {
            if self.act(g.identity(), x) != x {
                return Err(Error::invalid(format!("identity moves point {x}")));
            }
            for a in g.elements() {
                for b in g.elements() {
                    if self.act(g.mul(a, b), x) != self.act(a, self.act(b, x)) {
                        return Err(Error::invalid(format!("action not compatible on ({a}, {b}, {x})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn empty(group: &Arc<FiniteGroup>) -> Self {
        Self::trivial(group, 0)
    }

    pub fn point(group: &Arc<FiniteGroup>) -> Self {
        Self::trivial(group, 1)
    }

    /// `n` points, all fixed.
    pub fn trivial(group: &Arc<FiniteGroup>, n: usize) -> Self {
        let action = (0..group.order()).flat_map(|_| 0..n).collect();
        GSet::from_flat(group.clone(), n, action)
    }

    /// `G/H`, cosets ordered by least element; the coset `H` itself is point 0.
    pub fn coset_space(group: &Arc<FiniteGroup>, h: &Subgroup) -> Self {
        let (coset_of, reps) = group.left_cosets(h);
        let n = reps.len();
        let mut action = vec![0; group.order() * n];
        for g in group.elements() {
            for (i, &r) in reps.iter().enumerate() {
                action[g * n + i] = coset_of[group.mul(g, r)];
            }
        }
        GSet::from_flat(group.clone(), n, action)
    }

    /// `G` acting on itself by left multiplication.
    pub fn regular(group: &Arc<FiniteGroup>) -> Self {
        Self::coset_space(group, &group.trivial_subgroup())
    }

    /// Disjoint union of copies of `G/Hᵢ`, `counts[i]` copies for the i-th
    /// subgroup class in canonical order.
    pub fn from_orbit_type(group: &Arc<FiniteGroup>, counts: &[usize]) -> Self {
        let lattice = group.lattice();
        let mut out = GSet::empty(group);
        for (class, &k) in counts.iter().enumerate() {
            let orbit = GSet::coset_space(group, lattice.representative(class));
            for _ in 0..k {
                out = out.disjoint_union(&orbit);
            }
        }
        out
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.size + x]
    }

    pub fn action_rows(&self) -> Vec<Vec<usize>> {
        if self.size == 0 {
            return vec![Vec::new(); self.group.order()];
        }
        self.action.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        Subgroup::from_unsorted(self.group.elements().filter(|&g| self.act(g, x) == x).collect())
    }

    /// Points of the orbit through `x`, sorted.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut pts: Vec<usize> = self.group.elements().map(|g| self.act(g, x)).collect();
        pts.sort_unstable();
        pts.dedup();
        pts
    }

    /// For every point, the index of its orbit; orbits are numbered by least point.
    pub fn orbit_ids(&self) -> (Vec<usize>, Vec<usize>) {
        let mut id = vec![usize::MAX; self.size];
        let mut reps = Vec::new();
        for x in 0..self.size {
            if id[x] == usize::MAX {
                for g in self.group.elements() {
                    id[self.act(g, x)] = reps.len();
                }
                reps.push(x);
            }
        }
        (id, reps)
    }

    /// Least point of each orbit, increasing.
    pub fn orbit_representatives(&self) -> Vec<usize> {
        self.orbit_ids().1
    }

    pub fn fixed_points(&self, h: &Subgroup) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| h.elements().iter().all(|&g| self.act(g, x) == x))
            .collect()
    }

    /// Number of orbits of each type, indexed by subgroup class.
    pub fn orbit_type(&self) -> Vec<usize> {
        let lattice = self.group.lattice();
        let mut counts = vec![0; lattice.len()];
        for x in self.orbit_representatives() {
            counts[lattice.class_of(&self.stabilizer(x))] += 1;
        }
        counts
    }

    /// The orbit decomposition with multiplicities, by subgroup class.
    pub fn orbits(&self) -> Vec<OrbitSummand> {
        let lattice = self.group.lattice();
        self.orbit_type()
            .into_iter()
            .enumerate()
            .filter(|&(_, k)| k > 0)
            .map(|(class, multiplicity)| {
                let stabilizer = lattice.representative(class).clone();
                OrbitSummand {
                    orbit: GSet::coset_space(&self.group, &stabilizer),
                    stabilizer,
                    class,
                    multiplicity,
                }
            })
            .collect()
    }

    /// `|X^H|` for each subgroup class representative `H`.
    pub fn marks(&self) -> Vec<u64> {
        let lattice = self.group.lattice();
        (0..lattice.len())
            .map(|c| self.fixed_points(lattice.representative(c)).len() as u64)
            .collect()
    }

    /// Orbit types decide isomorphism of G-sets.
    pub fn is_isomorphic(&self, other: &GSet) -> bool {
        same_group(&self.group, &other.group) && self.size == other.size && self.orbit_type() == other.orbit_type()
    }

    pub fn disjoint_union(&self, other: &GSet) -> GSet {
        assert!(same_group(&self.group, &other.group), "disjoint union over different groups");
        let n = self.size + other.size;
        let mut action = Vec::with_capacity(self.group.order() * n);
        for g in self.group.elements() {
            action.extend((0..self.size).map(|x| self.act(g, x)));
            action.extend((0..other.size).map(|y| other.act(g, y) + self.size));
        }
        GSet::from_flat(self.group.clone(), n, action)
    }

    /// `X × Y`, pair `(x, y)` at index `x·|Y| + y`.
    pub fn product(&self, other: &GSet) -> GSet {
        assert!(same_group(&self.group, &other.group), "product over different groups");
        let n = self.size * other.size;
        let mut action = Vec::with_capacity(self.group.order() * n);
        for g in self.group.elements() {
            for x in 0..self.size {
                let gx = self.act(g, x);
                action.extend((0..other.size).map(|y| gx * other.size + other.act(g, y)));
            }
        }
        GSet::from_flat(self.group.clone(), n, action)
    }

    /// The sub-G-set on a union of orbits, with its inclusion.
    pub fn restrict_to_points(&self, points: &[usize]) -> GSetMap {
        let index: HashMap<usize, usize> = points.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let n = points.len();
        let mut action = Vec::with_capacity(self.group.order() * n);
        for g in self.group.elements() {
            action.extend(points.iter().map(|&x| index[&self.act(g, x)]));
        }
        let sub = GSet::from_flat(self.group.clone(), n, action);
        GSetMap::from_parts(sub, self.clone(), points.to_vec())
    }
}

/// One orbit type in a decomposition.
#[derive(Debug, Clone)]
pub struct OrbitSummand {
    /// `G/H` for the canonical representative `H`.
    pub orbit: GSet,
    pub stabilizer: Subgroup,
    pub class: usize,
    pub multiplicity: usize,
}

/// An equivariant map of G-sets.
#[derive(Clone, PartialEq, Eq)]
pub struct GSetMap {
    source: GSet,
    target: GSet,
    map: Vec<usize>,
}

impl fmt::Debug for GSetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GSetMap({:?})", self.map)
    }
}

impl GSetMap {
    pub fn new(source: GSet, target: GSet, map: Vec<usize>) -> Result<Self> {
        if !same_group(source.group(), target.group()) {
            return Err(Error::Mismatch("map between G-sets over different groups".into()));
        }
        if map.len() != source.size() || map.iter().any(|&y| y >= target.size()) {
            return Err(Error::invalid("point assignment does not match the G-sets"));
        }
        for &g in source.group().generators() {
            for x in 0..source.size() {
                if map[source.act(g, x)] != target.act(g, map[x]) {
                    return Err(Error::invalid(format!("not equivariant at element {g}, point {x}")));
                }
            }
        }
        Ok(GSetMap { source, target, map })
    }

    pub(crate) fn from_parts(source: GSet, target: GSet, map: Vec<usize>) -> Self {
        debug_assert!(GSetMap::new(source.clone(), target.clone(), map.clone()).is_ok());
        GSetMap { source, target, map }
    }

    pub fn identity(x: &GSet) -> Self {
        GSetMap { source: x.clone(), target: x.clone(), map: (0..x.size()).collect() }
    }

    /// The unique map to the one-point G-set.
    pub fn to_point(x: &GSet) -> Self {
        GSetMap { source: x.clone(), target: GSet::point(x.group()), map: vec![0; x.size()] }
    }

    /// The fold map `X ⊔ X → X`.
    pub fn fold(x: &GSet) -> Self {
        let map = (0..x.size()).chain(0..x.size()).collect();
        GSetMap { source: x.disjoint_union(x), target: x.clone(), map }
    }

    pub fn source(&self) -> &GSet {
        &self.source
    }

    pub fn target(&self) -> &GSet {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `next ∘ self`
    pub fn then(&self, next: &GSetMap) -> Result<GSetMap> {
        if self.target != next.source {
            return Err(Error::Mismatch("G-set maps are not composable".into()));
        }
        Ok(GSetMap {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&y| next.map[y]).collect(),
        })
    }

    /// Sorted preimage of `y`.
    pub fn fiber(&self, y: usize) -> Vec<usize> {
        (0..self.source.size()).filter(|&x| self.map[x] == y).collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size() == self.target.size() && self.is_injective()
    }

    /// `f ⊔ g : A ⊔ C → B ⊔ D`
    pub fn coproduct(&self, other: &GSetMap) -> GSetMap {
        let shift = self.target.size();
        let map = self.map.iter().copied().chain(other.map.iter().map(|&y| y + shift)).collect();
        GSetMap {
            source: self.source.disjoint_union(&other.source),
            target: self.target.disjoint_union(&other.target),
            map,
        }
    }
}

/// The strict pullback `{(x, y) | f(x) = g(y)}` with its projections.
#[derive(Debug, Clone)]
pub struct GSetPullback {
    pub apex: GSet,
    /// Projection to the source of the first map.
    pub left: GSetMap,
    /// Projection to the source of the second map.
    pub right: GSetMap,
}

/// Pullback of `f: X → A` and `g: Y → A`; pairs are listed lexicographically.
pub fn pullback(f: &GSetMap, g: &GSetMap) -> Result<GSetPullback> {
    if f.target() != g.target() {
        return Err(Error::Mismatch("pullback of maps with different targets".into()));
    }
    let mut pairs = Vec::new();
    for x in 0..f.source().size() {
        for y in 0..g.source().size() {
            if f.apply(x) == g.apply(y) {
                pairs.push((x, y));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let group = f.source().group().clone();
    let n = pairs.len();
    let mut action = Vec::with_capacity(group.order() * n);
    for e in group.elements() {
        action.extend(pairs.iter().map(|&(x, y)| index[&(f.source().act(e, x), g.source().act(e, y))]));
    }
    let apex = GSet::from_flat(group, n, action);
    let left = GSetMap::from_parts(apex.clone(), f.source().clone(), pairs.iter().map(|p| p.0).collect());
    let right = GSetMap::from_parts(apex.clone(), g.source().clone(), pairs.iter().map(|p| p.1).collect());
    Ok(GSetPullback { apex, left, right })
}

/// Visits equivariant maps `source → target`.
///
/// Each source orbit is sent, through its least point `x`, to a point `y` with
/// `Stab(x) ⊆ Stab(y)` and `allowed(x, y)`. With `bijective` the stabilizers must
/// agree and target orbits are used at most once, so exactly the isomorphisms
/// are visited. `visit` returns `false` to stop.
pub(crate) fn search_equivariant_maps(
    source: &GSet,
    target: &GSet,
    bijective: bool,
    allowed: &mut dyn FnMut(usize, usize) -> bool,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    if bijective && source.size() != target.size() {
        return;
    }
    let group = source.group();
    let reps = source.orbit_representatives();
    let (target_orbit, _) = target.orbit_ids();
    let target_stabs: Vec<Subgroup> = (0..target.size()).map(|y| target.stabilizer(y)).collect();
    let candidates: Vec<Vec<usize>> = reps
        .iter()
        .map(|&x| {
            let stab = source.stabilizer(x);
            (0..target.size())
                .filter(|&y| {
                    let ok = if bijective { target_stabs[y] == stab } else { stab.is_subset_of(&target_stabs[y]) };
                    ok && allowed(x, y)
                })
                .collect()
        })
        .collect();
    let mut map = vec![usize::MAX; source.size()];
    let mut used = vec![false; target.orbit_representatives().len()];
    fn rec(
        k: usize,
        reps: &[usize],
        candidates: &[Vec<usize>],
        source: &GSet,
        target: &GSet,
        group: &FiniteGroup,
        bijective: bool,
        target_orbit: &[usize],
        used: &mut [bool],
        map: &mut [usize],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if k == reps.len() {
            return visit(map);
        }
        let x = reps[k];
        for &y in &candidates[k] {
            if bijective && used[target_orbit[y]] {
                continue;
            }
            for g in group.elements() {
                map[source.act(g, x)] = target.act(g, y);
            }
            if bijective {
                used[target_orbit[y]] = true;
            }
            let go_on = rec(k + 1, reps, candidates, source, target, group, bijective, target_orbit, used, map, visit);
            if bijective {
                used[target_orbit[y]] = false;
            }
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(0, &reps, &candidates, source, target, group, bijective, &target_orbit, &mut used, &mut map, visit);
}

/// All equivariant maps `source → target` satisfying the pointwise constraint
/// on orbit representatives.
pub fn equivariant_maps(
    source: &GSet,
    target: &GSet,
    mut allowed: impl FnMut(usize, usize) -> bool,
    caps: &Caps,
) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut overflow = false;
    search_equivariant_maps(source, target, false, &mut allowed, &mut |m| {
        if out.len() >= caps.enumeration {
            overflow = true;
            return false;
        }
        out.push(m.to_vec());
        true
    });
    if overflow {
        return Err(Error::capacity("equivariant maps", caps.enumeration as u128 + 1, caps.enumeration as u128));
    }
    Ok(out)
}

/// The witness that `n_* m = m′` rewrites a norm followed by a sum.
///
/// Shape: `m: A → B` (sum), `n: B → C` (norm), `m′: Y → C`, the pullback
/// `X = Y ×_C B` with `n′: X → Y`, `m″: X → B`, and the evaluation `ε: X → A`.
#[derive(Debug, Clone)]
pub struct DistributivityDiagram {
    pub sum: GSetMap,
    pub norm: GSetMap,
    pub pushed_sum: GSetMap,
    pub pulled_norm: GSetMap,
    pub base_change: GSetMap,
    pub counit: GSetMap,
}

/// Dependent product of `sum: A → B` along `norm: B → C`.
///
/// `Y` consists of pairs `(c, s)` with `s` a section of `sum` over the fiber
/// `norm⁻¹(c)`; `g·(c, s) = (g·c, b ↦ g·s(g⁻¹·b))`.
pub fn dependent_product(norm: &GSetMap, sum: &GSetMap, caps: &Caps) -> Result<DistributivityDiagram> {
    if norm.source() != sum.target() {
        return Err(Error::Mismatch("the sum leg must land in the source of the norm leg".into()));
    }
    let group = norm.source().group().clone();
    let c_set = norm.target();
    let b_size = norm.source().size();
    let fibers: Vec<Vec<usize>> = (0..c_set.size()).map(|c| norm.fiber(c)).collect();
    let mut pos_in_fiber = vec![0; b_size];
    for fiber in &fibers {
        for (i, &b) in fiber.iter().enumerate() {
            pos_in_fiber[b] = i;
        }
    }
    let pre: Vec<Vec<usize>> = (0..b_size).map(|b| sum.fiber(b)).collect();
    let mut total: u128 = 0;
    for fiber in &fibers {
        let mut count: u128 = 1;
        for &b in fiber {
            count = count.saturating_mul(pre[b].len() as u128);
        }
        total = total.saturating_add(count);
    }
    caps.check_points("sections in dependent product", total)?;

    let mut points: Vec<(usize, Vec<usize>)> = Vec::with_capacity(total as usize);
    for (c, fiber) in fibers.iter().enumerate() {
        if fiber.iter().any(|&b| pre[b].is_empty()) {
            continue;
        }
        let mut choice = vec![0usize; fiber.len()];
        loop {
            points.push((c, fiber.iter().zip(&choice).map(|(&b, &i)| pre[b][i]).collect()));
            let mut k = 0;
            loop {
                if k == fiber.len() {
                    break;
                }
                choice[k] += 1;
                if choice[k] < pre[fiber[k]].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == fiber.len() {
                break;
            }
        }
    }
    let index: HashMap<&(usize, Vec<usize>), usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = points.len();
    let a_set = sum.source();
    let mut action = Vec::with_capacity(group.order() * n);
    for g in group.elements() {
        let gi = group.inv(g);
        for (c, s) in &points {
            let gc = c_set.act(g, *c);
            let moved: Vec<usize> = fibers[gc]
                .iter()
                .map(|&b| {
                    let src = norm.source().act(gi, b);
                    a_set.act(g, s[pos_in_fiber[src]])
                })
                .collect();
            action.push(index[&(gc, moved)]);
        }
    }
    let y_set = GSet::from_flat(group, n, action);
    let pushed_sum = GSetMap::from_parts(y_set.clone(), c_set.clone(), points.iter().map(|p| p.0).collect());
    let pb = pullback(&pushed_sum, norm)?;
    let counit_table: Vec<usize> = (0..pb.apex.size())
        .map(|x| {
            let (y, b) = (pb.left.apply(x), pb.right.apply(x));
            points[y].1[pos_in_fiber[b]]
        })
        .collect();
    let counit = GSetMap::from_parts(pb.apex.clone(), a_set.clone(), counit_table);
    Ok(DistributivityDiagram {
        sum: sum.clone(),
        norm: norm.clone(),
        pushed_sum,
        pulled_norm: pb.left,
        base_change: pb.right,
        counit,
    })
}

/// Outcome of an exhaustive universal-property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub passed: bool,
    /// Number of test instances examined.
    pub checked: usize,
    /// Description of the first failing instance.
    pub failure: Option<String>,
}

impl Certificate {
    pub(crate) fn pass(checked: usize) -> Self {
        Certificate { passed: true, checked, failure: None }
    }

    pub(crate) fn fail(checked: usize, why: String) -> Self {
        Certificate { passed: false, checked, failure: Some(why) }
    }
}

/// Checks that `d` is a distributivity diagram: the square is a pullback,
/// `m ∘ ε = m″`, and for every `φ: D → C` with `|D| ≤ test_cap` the composite
/// `Map_{/C}(φ, m′) → Map_{/B}(n*φ, m″) → Map_{/B}(n*φ, m)` is a bijection.
pub fn verify_distributivity_diagram(d: &DistributivityDiagram, test_cap: usize) -> Certificate {
    let caps = Caps::default();
    let structural = || -> std::result::Result<HashMap<(usize, usize), usize>, String> {
        let same = |a: &GSet, b: &GSet, what: &str| if a == b { Ok(()) } else { Err(format!("{what} do not match")) };
        same(d.sum.target(), d.norm.source(), "sum target and norm source")?;
        same(d.pushed_sum.target(), d.norm.target(), "pushed sum and norm targets")?;
        same(d.pulled_norm.target(), d.pushed_sum.source(), "pulled norm and pushed sum")?;
        same(d.base_change.target(), d.norm.source(), "base change and norm")?;
        same(d.counit.target(), d.sum.source(), "counit and sum")?;
        let x = d.counit.source();
        for pt in 0..x.size() {
            if d.sum.apply(d.counit.apply(pt)) != d.base_change.apply(pt) {
                return Err(format!("m∘ε ≠ m″ at point {pt}"));
            }
            if d.pushed_sum.apply(d.pulled_norm.apply(pt)) != d.norm.apply(d.base_change.apply(pt)) {
                return Err(format!("square does not commute at point {pt}"));
            }
        }
        let mut index = HashMap::new();
        for pt in 0..x.size() {
            if index.insert((d.pulled_norm.apply(pt), d.base_change.apply(pt)), pt).is_some() {
                return Err(format!("square is not a pullback: point {pt} is duplicated"));
            }
        }
        let expected = (0..d.pushed_sum.source().size())
            .map(|y| d.norm.fiber(d.pushed_sum.apply(y)).len())
            .sum::<usize>();
        if expected != x.size() {
            return Err(format!("square is not a pullback: {} points, expected {expected}", x.size()));
        }
        Ok(index)
    };
    let x_index = match structural() {
        Ok(ix) => ix,
        Err(why) => return Certificate::fail(0, why),
    };
    let group = d.norm.source().group();
    let c_set = d.norm.target();
    let mut checked = 0;
    for test in isoclasses_up_to(group, test_cap) {
        let phis = match equivariant_maps(&test, c_set, |_, _| true, &caps) {
            Ok(p) => p,
            Err(e) => return Certificate::fail(checked, e.to_string()),
        };
        for phi in phis {
            checked += 1;
            let phi_map = GSetMap::from_parts(test.clone(), c_set.clone(), phi.clone());
            let over_c = match equivariant_maps(&test, d.pushed_sum.source(), |dd, y| d.pushed_sum.apply(y) == phi[dd], &caps) {
                Ok(u) => u,
                Err(e) => return Certificate::fail(checked, e.to_string()),
            };
            let pb = pullback(&phi_map, &d.norm).expect("common target");
            let over_b = match equivariant_maps(&pb.apex, d.sum.source(), |p, a| d.sum.apply(a) == pb.right.apply(p), &caps) {
                Ok(w) => w,
                Err(e) => return Certificate::fail(checked, e.to_string()),
            };
            let targets: HashSet<&Vec<usize>> = over_b.iter().collect();
            let mut images: HashSet<Vec<usize>> = HashSet::new();
            for u in &over_c {
                let w: Vec<usize> = (0..pb.apex.size())
                    .map(|p| {
                        let (dd, b) = (pb.left.apply(p), pb.right.apply(p));
                        d.counit.apply(x_index[&(u[dd], b)])
                    })
                    .collect();
                if !targets.contains(&w) {
                    return Certificate::fail(checked, format!("φ = {phi:?} on {test:?}: image of {u:?} is not a map over B"));
                }
                if !images.insert(w) {
                    return Certificate::fail(checked, format!("φ = {phi:?} on {test:?}: not injective"));
                }
            }
            if images.len() != over_b.len() {
                return Certificate::fail(
                    checked,
                    format!("φ = {phi:?} on {test:?}: {} maps over C but {} maps over B", over_c.len(), over_b.len()),
                );
            }
        }
    }
    Certificate::pass(checked)
}

/// Pullback of the action along `alpha: H → G` (restriction for injective,
/// inflation for surjective `alpha`).
pub fn restrict(alpha: &GroupHom, x: &GSet) -> Result<GSet> {
    if !same_group(alpha.target(), x.group()) {
        return Err(Error::Mismatch("G-set is not over the target of the homomorphism".into()));
    }
    let h = alpha.source();
    let n = x.size();
    let mut action = Vec::with_capacity(h.order() * n);
    for e in h.elements() {
        let g = alpha.apply(e);
        action.extend((0..n).map(|p| x.act(g, p)));
    }
    Ok(GSet::from_flat(h.clone(), n, action))
}

/// `G ×_H X` along an injective `incl: H → G`. Point `(i, x)` sits at
/// `i·|X| + x`, where `i` indexes the left cosets of the image.
pub fn induce(incl: &GroupHom, x: &GSet) -> Result<GSet> {
    if !same_group(incl.source(), x.group()) {
        return Err(Error::Mismatch("G-set is not over the source of the inclusion".into()));
    }
    if !incl.is_injective() {
        return Err(Error::invalid("induction needs an injective homomorphism"));
    }
    let g = incl.target();
    let image = incl.image();
    let (coset_of, reps) = g.left_cosets(&image);
    let back: HashMap<usize, usize> = incl.images().iter().enumerate().map(|(h, &e)| (e, h)).collect();
    let m = x.size();
    let n = reps.len() * m;
    let mut action = Vec::with_capacity(g.order() * n);
    for e in g.elements() {
        for &r in &reps {
            let y = g.mul(e, r);
            let j = coset_of[y];
            let h = back[&g.mul(g.inv(reps[j]), y)];
            action.extend((0..m).map(|p| j * m + x.act(h, p)));
        }
    }
    Ok(GSet::from_flat(g.clone(), n, action))
}

/// How to pass from a `G`-set to a `G/N`-set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeflationMode {
    /// Orbits of `N`; left adjoint to inflation.
    Quotient,
    /// Points fixed by `N`; right adjoint to inflation.
    Fixed,
}

/// Deflation along a surjection `proj: G → Q` with kernel `N`.
pub fn deflate(proj: &GroupHom, x: &GSet, mode: DeflationMode) -> Result<GSet> {
    if !same_group(proj.source(), x.group()) {
        return Err(Error::Mismatch("G-set is not over the source of the projection".into()));
    }
    if !proj.is_surjective() {
        return Err(Error::invalid("deflation needs a surjective homomorphism"));
    }
    let g = proj.source();
    let q = proj.target();
    let kernel = proj.kernel();
    let mut lift = vec![usize::MAX; q.order()];
    for e in g.elements() {
        if lift[proj.apply(e)] == usize::MAX {
            lift[proj.apply(e)] = e;
        }
    }
    match mode {
        DeflationMode::Quotient => {
            let mut class = vec![usize::MAX; x.size()];
            let mut count = 0;
            for p in 0..x.size() {
                if class[p] == usize::MAX {
                    for &k in kernel.elements() {
                        class[x.act(k, p)] = count;
                    }
                    count += 1;
                }
            }
            let mut rep = vec![0; count];
            for p in (0..x.size()).rev() {
                rep[class[p]] = p;
            }
            let mut action = Vec::with_capacity(q.order() * count);
            for e in q.elements() {
                action.extend((0..count).map(|c| class[x.act(lift[e], rep[c])]));
            }
            Ok(GSet::from_flat(q.clone(), count, action))
        }
        DeflationMode::Fixed => {
            let fixed = x.fixed_points(&kernel);
            let index: HashMap<usize, usize> = fixed.iter().enumerate().map(|(i, &p)| (p, i)).collect();
            let mut action = Vec::with_capacity(q.order() * fixed.len());
            for e in q.elements() {
                action.extend(fixed.iter().map(|&p| index[&x.act(lift[e], p)]));
            }
            Ok(GSet::from_flat(q.clone(), fixed.len(), action))
        }
    }
}

/// Representatives of every isomorphism class of G-sets with at most
/// `max_size` points, ordered by size and then by orbit type.
pub fn isoclasses_up_to(group: &Arc<FiniteGroup>, max_size: usize) -> Vec<GSet> {
    orbit_types_up_to(group, max_size)
        .into_iter()
        .map(|t| GSet::from_orbit_type(group, &t))
        .collect()
}

/// Orbit-type vectors of all G-sets with at most `max_size` points.
pub fn orbit_types_up_to(group: &Arc<FiniteGroup>, max_size: usize) -> Vec<Vec<usize>> {
    let lattice = group.lattice();
    let indices: Vec<usize> = (0..lattice.len())
        .map(|c| group.order() / lattice.representative(c).order())
        .collect();
    let mut out = Vec::new();
    let mut current = vec![0; indices.len()];
    fn rec(k: usize, budget: usize, indices: &[usize], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == indices.len() {
            out.push(current.clone());
            return;
        }
        let mut used = 0;
        loop {
            current[k] = used / indices[k];
            rec(k + 1, budget - used, indices, current, out);
            used += indices[k];
            if used > budget {
                break;
            }
        }
        current[k] = 0;
    }
    rec(0, max_size, &indices, &mut current, &mut out);
    let size = |t: &Vec<usize>| t.iter().zip(&indices).map(|(a, b)| a * b).sum::<usize>();
    out.sort_by(|a, b| (size(a), a).cmp(&(size(b), b)));
    out
}

/// Both sides of the count of `n`-element G-sets.
#[derive(Debug, Clone)]
pub struct SigmaCensus {
    /// Orbit types of the `n`-point G-sets, one per isomorphism class.
    pub gset_classes: Vec<Vec<usize>>,
    /// One homomorphism `G → Σₙ` per conjugacy class, as generator images
    /// (each a permutation of `0..n`), canonically minimized.
    pub homomorphism_classes: Vec<Vec<Vec<usize>>>,
}

impl SigmaCensus {
    pub fn agrees(&self) -> bool {
        self.gset_classes.len() == self.homomorphism_classes.len()
    }
}

/// Isomorphism classes of `n`-element G-sets and, independently, conjugacy
/// classes of homomorphisms `G → Σₙ`.
pub fn sigma_classes(group: &Arc<FiniteGroup>, n: usize, caps: &Caps) -> Result<SigmaCensus> {
    let factorial: u128 = (1..=n as u128).product();
    caps.check_enumeration("elements of the symmetric group", factorial)?;
    let gset_classes: Vec<Vec<usize>> = orbit_types_up_to(group, n)
        .into_iter()
        .filter(|t| {
            let lattice = group.lattice();
            t.iter()
                .enumerate()
                .map(|(c, k)| k * group.order() / lattice.representative(c).order())
                .sum::<usize>()
                == n
        })
        .collect();
    let sym = FiniteGroup::symmetric(n);
    let homs = group.homomorphisms_to(&sym);
    let gens = group.generators();
    let mut classes: HashSet<Vec<usize>> = HashSet::new();
    for hom in &homs {
        let key = sym
            .elements()
            .map(|s| gens.iter().map(|&g| sym.conj(s, hom[g])).collect::<Vec<_>>())
            .min()
            .unwrap_or_default();
        classes.insert(key);
    }
    let mut keys: Vec<Vec<usize>> = classes.into_iter().collect();
    keys.sort();
    let homomorphism_classes = keys
        .into_iter()
        .map(|k| {
            k.into_iter()
                .map(|s| sym.permutation(s).map(|p| p.to_vec()).unwrap_or_default())
                .collect()
        })
        .collect();
    Ok(SigmaCensus { gset_classes, homomorphism_classes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3))
    }

    #[test]
    fn orbits_examples() {
        let g = c(2);
        let reg = GSet::regular(&g);
        let o = reg.orbits();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].stabilizer.order(), 1);
        assert_eq!(o[0].multiplicity, 1);

        let triv = GSet::trivial(&g, 3);
        assert_eq!(triv.orbit_type(), vec![0, 3]);

        // (12)(34) on four points
        let swap = GSet::new(g.clone(), vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2]]).unwrap();
        assert_eq!(swap.orbit_type(), vec![2, 0]);
    }

    #[test]
    fn pullback_of_s3_cosets_over_point() {
        let g = s3();
        let h = g.lattice().representative(1).clone();
        let x = GSet::coset_space(&g, &h);
        let f = GSetMap::to_point(&x);
        let pb = pullback(&f, &f).unwrap();
        assert_eq!(pb.apex.size(), 9);
        // one orbit per double coset H\G/H: {H} and the other 4 elements
        let dc = g.double_cosets(&h, &h);
        assert_eq!(dc.len(), 2);
        let mut orbit_sizes: Vec<usize> = pb.apex.orbit_representatives().iter().map(|&r| pb.apex.orbit(r).len()).collect();
        orbit_sizes.sort();
        assert_eq!(orbit_sizes, vec![3, 6]);
    }

    #[test]
    fn pullback_degenerate_cases() {
        let g = c(2);
        let x = GSet::regular(&g);
        let id = GSetMap::identity(&x);
        let pb = pullback(&id, &id).unwrap();
        assert!(pb.apex.is_isomorphic(&x));
        let two = GSet::trivial(&g, 2);
        let a = GSetMap::new(GSet::point(&g), two.clone(), vec![0]).unwrap();
        let b = GSetMap::new(GSet::point(&g), two, vec![1]).unwrap();
        assert_eq!(pullback(&a, &b).unwrap().apex.size(), 0);
    }

    #[test]
    fn dependent_product_worked_example() {
        let g = c(2);
        let free = GSet::regular(&g);
        let norm = GSetMap::to_point(&free);
        let sum = GSetMap::fold(&free);
        let d = dependent_product(&norm, &sum, &Caps::default()).unwrap();
        let y = d.pushed_sum.source();
        assert_eq!(y.size(), 4);
        assert_eq!(y.orbit_type(), vec![1, 2]);
        assert_eq!(y.marks(), vec![4, 2]);
        assert!(verify_distributivity_diagram(&d, 3).passed);
    }

    #[test]
    fn dependent_product_degenerate_legs() {
        let g = c(3);
        let x = GSet::regular(&g).disjoint_union(&GSet::point(&g));
        let m = GSetMap::to_point(&x);
        let b = m.target().clone();
        let d = dependent_product(&GSetMap::identity(&b), &m, &Caps::default()).unwrap();
        assert!(d.pushed_sum.source().is_isomorphic(&x));
        assert!(verify_distributivity_diagram(&d, 3).passed);
        let d = dependent_product(&m, &GSetMap::identity(&x), &Caps::default()).unwrap();
        assert!(d.pushed_sum.source().is_isomorphic(&GSet::point(&g)));
        assert!(verify_distributivity_diagram(&d, 3).passed);
    }

    #[test]
    fn corrupted_diagram_fails() {
        let g = c(2);
        let free = GSet::regular(&g);
        let d = dependent_product(&GSetMap::to_point(&free), &GSetMap::fold(&free), &Caps::default()).unwrap();
        // Y ⊔ pt over C = pt, with X and ε extended along the pullback
        let y2 = d.pushed_sum.source().disjoint_union(&GSet::point(&g));
        let pushed = GSetMap::new(y2.clone(), d.norm.target().clone(), vec![0; y2.size()]).unwrap();
        let pb = pullback(&pushed, &d.norm).unwrap();
        let old = d.counit.source().size();
        let counit: Vec<usize> = (0..pb.apex.size())
            .map(|p| if p < old { d.counit.apply(p) } else { pb.right.apply(p) })
            .collect();
        let bad = DistributivityDiagram {
            pushed_sum: pushed,
            counit: GSetMap::new(pb.apex.clone(), d.sum.source().clone(), counit).unwrap(),
            pulled_norm: pb.left,
            base_change: pb.right,
            ..d
        };
        let cert = verify_distributivity_diagram(&bad, 3);
        assert!(!cert.passed);
        assert!(cert.failure.is_some());
    }

    #[test]
    fn dependent_product_capacity() {
        let g = c(2);
        let many = GSet::trivial(&g, 6);
        let b = GSet::trivial(&g, 8);
        let sum = GSetMap::new(many.product(&b), b.clone(), (0..48).map(|i| i % 8).collect()).unwrap();
        let caps = Caps { points: 1000, ..Caps::default() };
        let err = dependent_product(&GSetMap::to_point(&b), &sum, &caps).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn restriction_and_inflation() {
        let g = s3();
        let h = g.lattice().representative(1).clone();
        let x = GSet::coset_space(&g, &h);
        assert!(restrict(&GroupHom::identity(&g), &x).unwrap() == x);
        let c3 = g.lattice().representative(2).clone();
        let incl = g.embed(&c3);
        let r = restrict(&incl, &x).unwrap();
        assert_eq!(r.orbit_type(), vec![1, 0]);

        let c2 = c(2);
        let trivial = Arc::new(FiniteGroup::trivial());
        let proj = GroupHom::new(c2.clone(), trivial.clone(), vec![0, 0]).unwrap();
        let inf = restrict(&proj, &GSet::point(&trivial)).unwrap();
        assert_eq!(inf.orbit_type(), vec![0, 1]);
    }

    #[test]
    fn induction_examples() {
        let g = c(2);
        let e = g.embed(&g.trivial_subgroup());
        let ind = induce(&e, &GSet::point(e.source())).unwrap();
        assert!(ind.is_isomorphic(&GSet::regular(&g)));
        let x = GSet::regular(&g).disjoint_union(&GSet::point(&g));
        assert!(induce(&GroupHom::identity(&g), &x).unwrap().is_isomorphic(&x));

        // Ind_H^G(H/K) = G/K for K ≤ H ≤ G
        let s = s3();
        let h = s.lattice().representative(1).clone();
        let incl = s.embed(&h);
        let hk = GSet::regular(incl.source());
        let ind = induce(&incl, &hk).unwrap();
        assert!(ind.is_isomorphic(&GSet::regular(&s)));
        assert_eq!(ind.size(), 3 * hk.size());
    }

    #[test]
    fn deflation_examples() {
        let g = c(2);
        let proj = GroupHom::quotient(&g, &g.whole()).unwrap();
        let reg = GSet::regular(&g);
        assert_eq!(deflate(&proj, &reg, DeflationMode::Quotient).unwrap().size(), 1);
        assert_eq!(deflate(&proj, &reg, DeflationMode::Fixed).unwrap().size(), 0);
        let triv = GSet::trivial(&g, 3);
        assert_eq!(deflate(&proj, &triv, DeflationMode::Fixed).unwrap().size(), 3);
    }

    #[test]
    fn sigma_examples() {
        let caps = Caps::default();
        let c2 = sigma_classes(&c(2), 2, &caps).unwrap();
        assert_eq!((c2.gset_classes.len(), c2.homomorphism_classes.len()), (2, 2));
        let s = sigma_classes(&s3(), 0, &caps).unwrap();
        assert_eq!((s.gset_classes.len(), s.homomorphism_classes.len()), (1, 1));
        let c3 = sigma_classes(&c(3), 3, &caps).unwrap();
        assert_eq!((c3.gset_classes.len(), c3.homomorphism_classes.len()), (2, 2));
    }

    #[test]
    fn isoclass_counts() {
        // C2-sets with ≤ 2 points: ∅, pt, 2pt, free
        assert_eq!(isoclasses_up_to(&c(2), 2).len(), 4);
        assert_eq!(isoclasses_up_to(&s3(), 0).len(), 1);
    }
}
