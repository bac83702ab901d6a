//! Finite groups given by multiplication tables, their subgroup lattices and
//! homomorphisms.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// A finite group stored as a full multiplication table.
///
/// Elements are the indices `0..order`. `mul(a, b)` is the product `a·b`; when
/// the group was built from permutations, `a·b` acts by first applying `b`.
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    permutations: Option<Vec<Vec<usize>>>,
    fingerprint: u64,
    lattice: OnceLock<SubgroupLattice>,
    embedded: Mutex<HashMap<Vec<usize>, Arc<FiniteGroup>>>,
    pub(crate) burnside_products: OnceLock<Vec<Vec<Vec<u64>>>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint
            && self.order == other.order
            && self.identity == other.identity
            && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

/// `true` when the two handles denote the same group (identical tables).
pub fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FiniteGroup {
    /// Builds a group from a flat-or-nested multiplication table, checking the
    /// group axioms exhaustively.
    pub fn from_table(name: impl Into<String>, rows: Vec<Vec<usize>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::invalid("a group needs at least one element"));
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::invalid(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= order) {
                return Err(Error::invalid(format!("entry {bad} out of range in row {i}")));
            }
            table.extend_from_slice(row);
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table[e * order + a] == a && table[a * order + e] == a))
            .ok_or_else(|| Error::invalid("no two-sided identity"))?;
        for a in 0..order {
            for b in 0..order {
                let ab = table[a * order + b];
                for c in 0..order {
                    if table[ab * order + c] != table[a * order + table[b * order + c]] {
                        return Err(Error::invalid(format!(
                            "multiplication is not associative on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| table[a * order + b] == identity && table[b * order + a] == identity)
                .ok_or_else(|| Error::invalid(format!("element {a} has no inverse")))?;
            inverse[a] = inv;
        }
        Ok(Self::assemble(name.into(), order, table, identity, inverse, None, None))
    }

    /// A table already known to satisfy the axioms, e.g. read off a groupoid.
    pub(crate) fn from_trusted_table(name: impl Into<String>, order: usize, table: Vec<usize>, identity: usize) -> Self {
        let inverse = (0..order)
            .map(|a| (0..order).find(|&b| table[a * order + b] == identity).expect("group element without inverse"))
            .collect();
        Self::assemble(name.into(), order, table, identity, inverse, None, None)
    }

    fn assemble(
        name: String,
        order: usize,
        table: Vec<usize>,
        identity: usize,
        inverse: Vec<usize>,
        generators: Option<Vec<usize>>,
        permutations: Option<Vec<Vec<usize>>>,
    ) -> Self {
        let mut hasher = DefaultHasher::new();
        order.hash(&mut hasher);
        identity.hash(&mut hasher);
        table.hash(&mut hasher);
        let mut group = FiniteGroup {
            name,
            order,
            table,
            identity,
            inverse,
            generators: Vec::new(),
            permutations,
            fingerprint: hasher.finish(),
            lattice: OnceLock::new(),
            embedded: Mutex::new(HashMap::new()),
            burnside_products: OnceLock::new(),
        };
        group.generators = match generators {
            Some(gens) => gens,
            None => group.greedy_generators(),
        };
        group
    }

    /// The group generated by the given permutations of `0..degree`.
    ///
    /// Elements are ordered lexicographically by their image vectors, so the
    /// identity permutation is element 0.
    pub fn from_permutations(
        name: impl Into<String>,
        degree: usize,
        generators: &[Vec<usize>],
    ) -> Result<Self> {
        for g in generators {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&i| i >= degree || std::mem::replace(&mut seen[i], true)) {
                return Err(Error::invalid(format!("{g:?} is not a permutation of {degree} points")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut found: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let q: Vec<usize> = p.iter().map(|&i| g[i]).collect();
                if found.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        let mut elements: Vec<Vec<usize>> = found.into_iter().collect();
        elements.sort();
        let index: HashMap<&Vec<usize>, usize> =
            elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let order = elements.len();
        let mut table = vec![0; order * order];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                let ab: Vec<usize> = pb.iter().map(|&i| pa[i]).collect();
                table[a * order + b] = index[&ab];
            }
        }
        let mut inverse = vec![0; order];
        for (a, pa) in elements.iter().enumerate() {
            let mut inv = vec![0; degree];
            for (i, &j) in pa.iter().enumerate() {
                inv[j] = i;
            }
            inverse[a] = index[&inv];
        }
        let mut gens: Vec<usize> = generators.iter().map(|g| index[g]).filter(|&g| g != 0).collect();
        gens.dedup();
        let mut uniq = Vec::new();
        for g in gens {
            if !uniq.contains(&g) {
                uniq.push(g);
            }
        }
        Ok(Self::assemble(name.into(), order, table, 0, inverse, Some(uniq), Some(elements)))
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// The cyclic group `Cₙ`, element `k` being the `k`-th power of the generator.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order zero");
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let inverse = (0..n).map(|a| (n - a) % n).collect();
        let gens = if n > 1 { vec![1] } else { vec![] };
        let perms = (0..n).map(|a| (0..n).map(|i| (i + a) % n).collect()).collect();
        Self::assemble(format!("C{n}"), n, table, 0, inverse, Some(gens), Some(perms))
    }

    /// The symmetric group `Σₙ` on `0..n`, generated by `(0 1)` and the `n`-cycle.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            gens.push(swap);
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        Self::from_permutations(format!("S{n}"), n, &gens).expect("valid generators")
    }

    /// `A × B` with element `(a, b)` stored at index `a·|B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order, b.order);
        let order = na * nb;
        let mut table = vec![0; order * order];
        for x in 0..order {
            for y in 0..order {
                let (xa, xb) = (x / nb, x % nb);
                let (ya, yb) = (y / nb, y % nb);
                table[x * order + y] = a.mul(xa, ya) * nb + b.mul(xb, yb);
            }
        }
        let inverse = (0..order).map(|x| a.inv(x / nb) * nb + b.inv(x % nb)).collect();
        let identity = a.identity * nb + b.identity;
        let mut gens: Vec<usize> = a.generators.iter().map(|&g| g * nb + b.identity).collect();
        gens.extend(b.generators.iter().map(|&g| a.identity * nb + g));
        Self::assemble(format!("{}x{}", a.name, b.name), order, table, identity, inverse, Some(gens), None)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `g·h·g⁻¹`
    #[inline]
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inverse[g])
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn permutation(&self, g: usize) -> Option<&[usize]> {
        self.permutations.as_ref().map(|p| p[g].as_slice())
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.closure(&[]);
        for g in 0..self.order {
            if !current.contains(&g) {
                gens.push(g);
                current = self.closure(&gens);
            }
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> HashSet<usize> {
        let mut found = HashSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if found.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        found
    }

    pub fn subgroup_generated_by(&self, gens: &[usize]) -> Subgroup {
        Subgroup::from_unsorted(self.closure(gens).into_iter().collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![self.identity] }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: (0..self.order).collect() }
    }

    /// Checks closure under products; finite and nonempty suffices for a subgroup.
    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        let set: HashSet<usize> = elements.iter().copied().collect();
        !set.is_empty()
            && set.iter().all(|&g| g < self.order)
            && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// `g·H·g⁻¹`
    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        Subgroup::from_unsorted(h.elements.iter().map(|&x| self.conj(g, x)).collect())
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.generators.iter().all(|&g| self.conjugate(h, g) == *h)
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        Subgroup::from_unsorted(self.elements().filter(|&g| self.conjugate(h, g) == *h).collect())
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup::from_unsorted(a.elements.iter().copied().filter(|x| b.contains(*x)).collect())
    }

    /// Every subgroup, ordered by order and then by element list.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        let trivial = self.trivial_subgroup();
        found.insert(trivial.elements.clone());
        let mut queue = VecDeque::from([trivial]);
        while let Some(h) = queue.pop_front() {
            for g in 0..self.order {
                if h.contains(g) {
                    continue;
                }
                let mut gens = h.elements.clone();
                gens.push(g);
                let k = self.subgroup_generated_by(&gens);
                if found.insert(k.elements.clone()) {
                    queue.push_back(k);
                }
            }
        }
        let mut all: Vec<Subgroup> = found.into_iter().map(|elements| Subgroup { elements }).collect();
        all.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        all
    }

    /// The conjugacy classes of subgroups in canonical order, with the table of marks.
    pub fn lattice(&self) -> &SubgroupLattice {
        self.lattice.get_or_init(|| SubgroupLattice::compute(self))
    }

    /// Left cosets `gH`, ordered by their least element. Returns, for each group
    /// element, the index of its coset, together with the coset representatives.
    pub fn left_cosets(&self, h: &Subgroup) -> (Vec<usize>, Vec<usize>) {
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if coset_of[g] == usize::MAX {
                let idx = reps.len();
                reps.push(g);
                for &x in &h.elements {
                    coset_of[self.mul(g, x)] = idx;
                }
            }
        }
        (coset_of, reps)
    }

    /// Double cosets `K g H`, each given by its sorted element list.
    pub fn double_cosets(&self, k: &Subgroup, h: &Subgroup) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            let mut coset = Vec::new();
            for &a in &k.elements {
                for &b in &h.elements {
                    let x = self.mul(self.mul(a, g), b);
                    if !seen[x] {
                        seen[x] = true;
                        coset.push(x);
                    }
                }
            }
            coset.sort_unstable();
            out.push(coset);
        }
        out
    }

    /// The inclusion of `h` as a homomorphism out of a standalone copy of `h`.
    ///
    /// The standalone copy lists the elements of `h` in increasing order. Copies
    /// are cached, so repeated calls return the same source handle. The whole
    /// group embeds through its identity homomorphism.
    pub fn embed(self: &Arc<Self>, h: &Subgroup) -> GroupHom {
        if h.order() == self.order {
            return GroupHom::identity(self);
        }
        let mut cache = self.embedded.lock().expect("embedding cache poisoned");
        let sub = cache
            .entry(h.elements.clone())
            .or_insert_with(|| {
                let pos: HashMap<usize, usize> =
                    h.elements.iter().enumerate().map(|(i, &g)| (g, i)).collect();
                let n = h.order();
                let rows: Vec<Vec<usize>> = h
                    .elements
                    .iter()
                    .map(|&a| h.elements.iter().map(|&b| pos[&self.mul(a, b)]).collect())
                    .collect();
                let table = rows.concat();
                let identity = pos[&self.identity];
                let inverse = h.elements.iter().map(|&a| pos[&self.inv(a)]).collect();
                let perms = self
                    .permutations
                    .as_ref()
                    .map(|p| h.elements.iter().map(|&g| p[g].clone()).collect());
                let name = format!("{}{:?}", self.name, h.elements);
                Arc::new(FiniteGroup::assemble(name, n, table, identity, inverse, None, perms))
            })
            .clone();
        GroupHom {
            source: sub,
            target: self.clone(),
            images: h.elements.clone(),
        }
    }

    /// Every homomorphism into `target`, as image tables. Generator images are
    /// enumerated in increasing order, so the output order is deterministic.
    pub fn homomorphisms_to(&self, target: &FiniteGroup) -> Vec<Vec<usize>> {
        let gens = &self.generators;
        let orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let candidates: Vec<Vec<usize>> = orders
            .iter()
            .map(|&o| target.elements().filter(|&t| o % target.element_order(t) == 0).collect())
            .collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            if candidates.iter().any(|c| c.is_empty()) {
                break;
            }
            let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
            if let Some(full) = extend_generator_images(self, target, &images) {
                out.push(full);
            }
            // odometer
            let mut k = 0;
            loop {
                if k == gens.len() {
                    return out;
                }
                choice[k] += 1;
                if choice[k] < candidates[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
        out
    }
}

/// Extends images of `source`'s generators to a homomorphism, if one exists.
pub fn extend_generator_images(
    source: &FiniteGroup,
    target: &FiniteGroup,
    gen_images: &[usize],
) -> Option<Vec<usize>> {
    let gens = source.generators();
    debug_assert_eq!(gens.len(), gen_images.len());
    let mut images = vec![usize::MAX; source.order()];
    images[source.identity()] = target.identity();
    let mut queue = VecDeque::from([source.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(gen_images) {
            let y = source.mul(x, s);
            let img = target.mul(images[x], t);
            if images[y] == usize::MAX {
                images[y] = img;
                queue.push_back(y);
            } else if images[y] != img {
                return None;
            }
        }
    }
    Some(images)
}

/// A subgroup, as the sorted list of its elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub(crate) fn from_unsorted(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Subgroup { elements }
    }

    /// Checks the subgroup axioms against `group`.
    pub fn new(group: &FiniteGroup, elements: Vec<usize>) -> Result<Self> {
        if !group.is_subgroup(&elements) {
            return Err(Error::invalid(format!("{elements:?} is not a subgroup of {}", group.name())));
        }
        Ok(Self::from_unsorted(elements))
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }
}

/// One conjugacy class of subgroups.
#[derive(Debug, Clone)]
pub struct SubgroupClass {
    /// The conjugate with the lexicographically least element list.
    pub representative: Subgroup,
    pub conjugates: Vec<Subgroup>,
    /// Order of the subgroup, suffixed with a letter when several classes share it.
    pub label: String,
}

/// Conjugacy classes of subgroups in canonical order (by order, then by the
/// element list of the least conjugate), and the table of marks in that order.
#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    pub classes: Vec<SubgroupClass>,
    class_index: HashMap<Vec<usize>, usize>,
    /// `marks[i][j] = |(G/Hᵢ)^{Hⱼ}|`.
    pub marks: Vec<Vec<u64>>,
}

impl SubgroupLattice {
    fn compute(group: &FiniteGroup) -> Self {
        let all = group.all_subgroups();
        let mut assigned: HashSet<Vec<usize>> = HashSet::new();
        let mut classes: Vec<SubgroupClass> = Vec::new();
        for h in &all {
            if assigned.contains(&h.elements) {
                continue;
            }
            let mut conjugates: Vec<Subgroup> = group.elements().map(|g| group.conjugate(h, g)).collect();
            conjugates.sort();
            conjugates.dedup();
            for c in &conjugates {
                assigned.insert(c.elements.clone());
            }
            let representative = conjugates.iter().min_by(|a, b| a.elements.cmp(&b.elements)).unwrap().clone();
            classes.push(SubgroupClass {
                representative,
                conjugates,
                label: String::new(),
            });
        }
        classes.sort_by(|a, b| {
            (a.representative.order(), &a.representative.elements)
                .cmp(&(b.representative.order(), &b.representative.elements))
        });
        let mut by_order: HashMap<usize, usize> = HashMap::new();
        for c in &classes {
            *by_order.entry(c.representative.order()).or_default() += 1;
        }
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for c in classes.iter_mut() {
            let o = c.representative.order();
            let k = seen.entry(o).or_default();
            c.label = if by_order[&o] > 1 {
                format!("{o}{}", (b'a' + *k as u8) as char)
            } else {
                o.to_string()
            };
            *k += 1;
        }
        let mut class_index = HashMap::new();
        for (i, c) in classes.iter().enumerate() {
            for h in &c.conjugates {
                class_index.insert(h.elements.clone(), i);
            }
        }
        let n = classes.len();
        let mut marks = vec![vec![0u64; n]; n];
        for i in 0..n {
            let hi = &classes[i].representative;
            for j in 0..n {
                let hj = &classes[j].representative;
                let count = group
                    .elements()
                    .filter(|&g| {
                        let gi = group.inv(g);
                        hj.elements.iter().all(|&x| hi.contains(group.conj(gi, x)))
                    })
                    .count();
                marks[i][j] = (count / hi.order()) as u64;
            }
        }
        SubgroupLattice {
            classes,
            class_index,
            marks,
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// The class index of any subgroup.
    pub fn class_of(&self, h: &Subgroup) -> usize {
        self.class_index[&h.elements]
    }

    pub fn representative(&self, class: usize) -> &Subgroup {
        &self.classes[class].representative
    }

    pub fn labels(&self) -> Vec<String> {
        self.classes.iter().map(|c| c.label.clone()).collect()
    }

    pub fn class_by_label(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }
}

/// A group homomorphism, stored as the image of every element.
#[derive(Debug, Clone)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    images: Vec<usize>,
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.source, &other.source)
            && same_group(&self.target, &other.target)
            && self.images == other.images
    }
}

impl GroupHom {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.order() || images.iter().any(|&i| i >= target.order()) {
            return Err(Error::invalid("image table does not match the groups"));
        }
        for a in source.elements() {
            for b in source.elements() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(Error::invalid(format!("not multiplicative on ({a}, {b})")));
                }
            }
        }
        Ok(GroupHom { source, target, images })
    }

    pub fn identity(group: &Arc<FiniteGroup>) -> Self {
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            images: group.elements().collect(),
        }
    }

    /// The projection `G → G/N` onto a standalone quotient group whose elements
    /// are the cosets of `n` ordered by least element.
    pub fn quotient(group: &Arc<FiniteGroup>, n: &Subgroup) -> Result<Self> {
        if !group.is_normal(n) {
            return Err(Error::invalid(format!("{:?} is not normal in {}", n.elements(), group.name())));
        }
        let (coset_of, reps) = group.left_cosets(n);
        let rows: Vec<Vec<usize>> = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| coset_of[group.mul(a, b)]).collect())
            .collect();
        let q = FiniteGroup::from_table(format!("{}/{:?}", group.name(), n.elements()), rows)?;
        Ok(GroupHom {
            source: group.clone(),
            target: Arc::new(q),
            images: coset_of,
        })
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.images[g]
    }

    /// `next ∘ self`
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if !same_group(&self.target, &next.source) {
            return Err(Error::Mismatch("homomorphisms are not composable".into()));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: next.target.clone(),
            images: self.images.iter().map(|&g| next.images[g]).collect(),
        })
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::from_unsorted(
            self.source
                .elements()
                .filter(|&g| self.images[g] == self.target.identity())
                .collect(),
        )
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::from_unsorted(self.images.clone())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().order() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == self.target.order()
    }

    /// Preimage of a subgroup of the target.
    pub fn preimage(&self, h: &Subgroup) -> Subgroup {
        Subgroup::from_unsorted(self.source.elements().filter(|&g| h.contains(self.images[g])).collect())
    }

    /// For an injective homomorphism, the source element mapping to `g`.
    pub fn preimage_of(&self, g: usize) -> Option<usize> {
        self.images.iter().position(|&x| x == g)
    }

    /// `h ↦ g⁻¹·α(h)·g`, viewed as landing in the target again.
    pub fn conjugated_by(&self, g: usize) -> GroupHom {
        let t = &self.target;
        let gi = t.inv(g);
        GroupHom {
            source: self.source.clone(),
            target: t.clone(),
            images: self.images.iter().map(|&x| t.conj(gi, x)).collect(),
        }
    }
}

/// An isomorphism `a → b`, if any, found by backtracking over generator images.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Vec<usize>> {
    let mut found = None;
    search_isomorphisms(a, b, &mut |_, _| true, &mut |iso| {
        found = Some(iso.to_vec());
        false
    });
    found
}

/// Enumerates isomorphisms `a → b` whose generator images pass `allow`. The
/// callback returns `false` to stop the search.
pub(crate) fn search_isomorphisms(
    a: &FiniteGroup,
    b: &FiniteGroup,
    allow: &mut dyn FnMut(usize, usize) -> bool,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    if a.order() != b.order() {
        return;
    }
    let gens = a.generators().to_vec();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let o = a.element_order(g);
            b.elements().filter(|&t| b.element_order(t) == o && allow(g, t)).collect()
        })
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(full) = extend_generator_images(a, b, &images) {
            let mut hit = vec![false; b.order()];
            if full.iter().all(|&x| !std::mem::replace(&mut hit[x], true)) && !visit(&full) {
                return;
            }
        }
        let mut k = 0;
        loop {
            if k == gens.len() {
                return;
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_groups_have_factorial_order() {
        assert_eq!(FiniteGroup::symmetric(0).order(), 1);
        assert_eq!(FiniteGroup::symmetric(1).order(), 1);
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::symmetric(4).order(), 24);
        assert_eq!(FiniteGroup::symmetric(4).identity(), 0);
    }

    #[test]
    fn from_table_rejects_non_associative() {
        // a Latin square that is not a group: x·y = (2 - x - y) mod 3 has no identity
        let rows = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]];
        assert!(FiniteGroup::from_table("bad", rows).is_err());
        let ok = FiniteGroup::from_table("c3", FiniteGroup::cyclic(3).table_rows()).unwrap();
        assert_eq!(ok, FiniteGroup::cyclic(3));
    }

    #[test]
    fn subgroup_classes_of_small_groups() {
        let counts = [
            (FiniteGroup::trivial(), 1),
            (FiniteGroup::cyclic(2), 2),
            (FiniteGroup::cyclic(4), 3),
            (FiniteGroup::cyclic(6), 4),
            (FiniteGroup::symmetric(3), 4),
            (FiniteGroup::symmetric(4), 11),
            (FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)), 5),
        ];
        for (g, n) in counts {
            assert_eq!(g.lattice().len(), n, "{}", g.name());
        }
        assert_eq!(FiniteGroup::symmetric(3).lattice().labels(), vec!["1", "2", "3", "6"]);
    }

    #[test]
    fn marks_of_s3() {
        let s3 = FiniteGroup::symmetric(3);
        let m = &s3.lattice().marks;
        // rows: S3/1, S3/C2, S3/C3, S3/S3; columns: fixed points under 1, C2, C3, S3
        assert_eq!(m[0], vec![6, 0, 0, 0]);
        assert_eq!(m[1], vec![3, 1, 0, 0]);
        assert_eq!(m[2], vec![2, 0, 2, 0]);
        assert_eq!(m[3], vec![1, 1, 1, 1]);
    }

    #[test]
    fn quotient_and_kernel() {
        let c4 = Arc::new(FiniteGroup::cyclic(4));
        let n = c4.subgroup_generated_by(&[2]);
        let p = GroupHom::quotient(&c4, &n).unwrap();
        assert_eq!(p.target().order(), 2);
        assert_eq!(p.kernel(), n);
        assert!(p.is_surjective());
    }

    #[test]
    fn hom_counts() {
        let c2 = FiniteGroup::cyclic(2);
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(c2.homomorphisms_to(&s3).len(), 4);
        assert_eq!(s3.homomorphisms_to(&c2).len(), 2);
        assert_eq!(s3.homomorphisms_to(&s3).len(), 10);
    }

    #[test]
    fn isomorphism_search() {
        let c2c3 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
        assert!(find_isomorphism(&c2c3, &FiniteGroup::cyclic(6)).is_some());
        assert!(find_isomorphism(&FiniteGroup::symmetric(3), &FiniteGroup::cyclic(6)).is_none());
    }

    #[test]
    fn embedding_is_cached() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let h = s3.lattice().representative(1).clone();
        let a = s3.embed(&h);
        let b = s3.embed(&h);
        assert!(Arc::ptr_eq(a.source(), b.source()));
        assert!(a.is_injective());
        assert_eq!(a.source().order(), 2);
    }
}
