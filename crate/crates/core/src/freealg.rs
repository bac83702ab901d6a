//! Free commutative algebras on a G-set at the level of underlying G-sets:
//! degree `n` is the symmetric power `Xⁿ/Σₙ`, and independently the
//! composite `Sub ∘ Nm ∘ Inf` through `Σₙ₋₁ × G ≤ Σₙ × G`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::bispan::enumerate_bispans;
use crate::error::{Caps, Error, Result};
use crate::group::{FiniteGroup, GroupHom, Subgroup};
use crate::gset::{self, sigma_classes, DeflationMode, GSet};
use crate::spancat::GSetWorld;
use crate::tambara::norm_effective;

/// Multisets of size `n` drawn from the points of `x`, with the induced action.
pub fn symmetric_power(x: &GSet, n: usize, caps: &Caps) -> Result<GSet> {
    let k = x.size();
    let count = multiset_count(k, n);
    caps.check_points("symmetric power points", count)?;
    let mut multisets = Vec::with_capacity(count as usize);
    let mut current = Vec::with_capacity(n);
    fn rec(start: usize, k: usize, n: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for p in start..k {
            current.push(p);
            rec(p, k, n, current, out);
            current.pop();
        }
    }
    rec(0, k, n, &mut current, &mut multisets);
    let index: HashMap<&[usize], usize> = multisets.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let g = x.group();
    let rows = g
        .elements()
        .map(|e| {
            multisets
                .iter()
                .map(|m| {
                    let mut image: Vec<usize> = m.iter().map(|&p| x.act(e, p)).collect();
                    image.sort_unstable();
                    index[image.as_slice()]
                })
                .collect()
        })
        .collect();
    GSet::new(g.clone(), rows)
}

fn multiset_count(k: usize, n: usize) -> u128 {
    if k == 0 {
        return u128::from(n == 0);
    }
    // C(k + n - 1, n)
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        c = c * (k as u128 + i) / (i + 1);
    }
    c
}

/// `Sub^G_{Σₙ×G} Nm^{Σₙ×G}_{Σₙ₋₁×G} Inf^G_{Σₙ₋₁×G}(X)`, with `Σₙ₋₁` the
/// stabilizer of the last letter. Degree 0 is the point.
pub fn pipeline_sub_nm_inf(x: &GSet, n: usize, caps: &Caps) -> Result<GSet> {
    let g = x.group();
    if n == 0 {
        return Ok(GSet::point(g));
    }
    let sections = (x.size() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    caps.check_points("norm sections", sections)?;
    let sym = FiniteGroup::symmetric(n);
    caps.check_enumeration("elements of the symmetric group", (sym.order() * g.order()) as u128)?;
    let big = Arc::new(FiniteGroup::direct_product(&sym, g));
    let order_g = g.order();
    let last = n - 1;
    let stab: Vec<usize> = big
        .elements()
        .filter(|&e| sym.permutation(e / order_g).map(|p| p[last] == last).unwrap_or(true))
        .collect();
    let stab = Subgroup::new(&big, stab)?;
    let incl = big.embed(&stab);
    let small = incl.source().clone();
    let to_g = GroupHom::new(small.clone(), g.clone(), small.elements().map(|e| incl.apply(e) % order_g).collect())?;
    let inflated = gset::restrict(&to_g, x)?;
    let normed = norm_effective(&incl, &inflated, caps)?;
    let proj = GroupHom::new(big.clone(), g.clone(), big.elements().map(|e| e % order_g).collect())?;
    gset::deflate(&proj, &normed, DeflationMode::Quotient)
}

/// One degree of a [`SymPowerReport`].
#[derive(Debug, Clone)]
pub struct DegreeReport {
    pub degree: usize,
    pub symmetric: GSet,
    pub pipeline: GSet,
    pub isomorphic: bool,
}

#[derive(Debug, Clone)]
pub struct SymPowerReport {
    pub input: GSet,
    pub max_degree: usize,
    pub degrees: Vec<DegreeReport>,
}

impl SymPowerReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.isomorphic)
    }

    pub fn first_mismatch(&self) -> Option<&DegreeReport> {
        self.degrees.iter().find(|d| !d.isomorphic)
    }
}

/// Both constructions for every degree `0..=max_degree`.
pub fn free_underlying(x: &GSet, max_degree: usize, caps: &Caps) -> Result<SymPowerReport> {
    // fail fast before any work on the largest degree
    let sections = (x.size() as u128).checked_pow(max_degree as u32).unwrap_or(u128::MAX);
    caps.check_points("norm sections", sections)?;
    let degrees = (0..=max_degree)
        .into_par_iter()
        .map(|n| {
            let symmetric = symmetric_power(x, n, caps)?;
            let pipeline = pipeline_sub_nm_inf(x, n, caps)?;
            let isomorphic = symmetric.is_isomorphic(&pipeline);
            Ok(DegreeReport { degree: n, symmetric, pipeline, isomorphic })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymPowerReport { input: x.clone(), max_degree, degrees })
}

/// Census of bispan classes `G/K ← A → B → G/H`.
#[derive(Debug, Clone)]
pub struct CensusReport {
    /// Class counts keyed by `(|B|, |A|)`.
    pub counts: BTreeMap<(usize, usize), usize>,
    pub total: usize,
    /// For `H = K = G`, per degree `n`: classes with `B = pt` and `|A| = n`,
    /// against the number of conjugacy classes of maps `G → Σₙ`.
    pub point_fibers: Vec<(usize, usize, usize)>,
    /// For the trivial group: the same counts against the orbit counts of the
    /// free algebra on a point.
    pub underlying: Vec<(usize, usize, usize)>,
}

impl CensusReport {
    pub fn consistent(&self) -> bool {
        self.point_fibers.iter().chain(&self.underlying).all(|&(_, a, b)| a == b)
    }
}

pub fn free_tambara_census(group: &Arc<FiniteGroup>, h: &Subgroup, k: &Subgroup, apex_cap: usize, caps: &Caps) -> Result<CensusReport> {
    if !group.is_subgroup(h.elements()) || !group.is_subgroup(k.elements()) {
        return Err(Error::invalid("census levels must be subgroups of the group"));
    }
    let world = GSetWorld::new(group.clone());
    let left = GSet::coset_space(group, k);
    let right = GSet::coset_space(group, h);
    let classes = enumerate_bispans(&world, &left, &right, apex_cap, apex_cap, caps)?;
    let mut counts = BTreeMap::new();
    for b in &classes {
        *counts.entry((b.sum.source().size(), b.norm.source().size())).or_insert(0) += 1;
    }
    let mut point_fibers = Vec::new();
    let mut underlying = Vec::new();
    if h.order() == group.order() && k.order() == group.order() {
        let report = free_underlying(&GSet::point(group), apex_cap, caps)?;
        for n in 0..=apex_cap {
            let found = counts.get(&(1, n)).copied().unwrap_or(0);
            point_fibers.push((n, found, sigma_classes(group, n, caps)?.homomorphism_classes.len()));
            if group.order() == 1 {
                underlying.push((n, found, report.degrees[n].pipeline.orbit_representatives().len()));
            }
        }
    }
    Ok(CensusReport { counts, total: classes.len(), point_fibers, underlying })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(g: FiniteGroup) -> Arc<FiniteGroup> {
        Arc::new(g)
    }

    #[test]
    fn symmetric_square_of_free_c2() {
        let g = grp(FiniteGroup::cyclic(2));
        let s = symmetric_power(&GSet::regular(&g), 2, &Caps::default()).unwrap();
        assert_eq!(s.size(), 3);
        assert_eq!(s.marks(), vec![3, 1]);
        assert_eq!(symmetric_power(&GSet::regular(&g), 0, &Caps::default()).unwrap().size(), 1);
    }

    #[test]
    fn pipeline_low_degrees() {
        let g = grp(FiniteGroup::cyclic(2));
        let x = GSet::regular(&g);
        assert!(pipeline_sub_nm_inf(&x, 0, &Caps::default()).unwrap().is_isomorphic(&GSet::point(&g)));
        assert!(pipeline_sub_nm_inf(&x, 1, &Caps::default()).unwrap().is_isomorphic(&x));
        let two = pipeline_sub_nm_inf(&x, 2, &Caps::default()).unwrap();
        assert!(two.is_isomorphic(&symmetric_power(&x, 2, &Caps::default()).unwrap()));
    }

    #[test]
    fn free_on_point_and_empty() {
        let g = grp(FiniteGroup::cyclic(3));
        let r = free_underlying(&GSet::point(&g), 5, &Caps::default()).unwrap();
        assert!(r.passed());
        assert!(r.degrees.iter().all(|d| d.symmetric.size() == 1));
        let e = free_underlying(&GSet::empty(&g), 3, &Caps::default()).unwrap();
        assert!(e.passed());
        assert_eq!(e.degrees.iter().map(|d| d.pipeline.size()).collect::<Vec<_>>(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn s3_on_transpositions_cosets() {
        let g = grp(FiniteGroup::symmetric(3));
        let h = g.lattice().representative(1).clone();
        assert_eq!(h.order(), 2);
        let r = free_underlying(&GSet::coset_space(&g, &h), 2, &Caps::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.degrees[2].symmetric.size(), 6);
    }

    #[test]
    fn capacity_is_reported() {
        let g = grp(FiniteGroup::cyclic(2));
        let x = GSet::trivial(&g, 3);
        let caps = Caps { points: 20, ..Caps::default() };
        assert!(matches!(free_underlying(&x, 3, &caps), Err(Error::Capacity { .. })));
    }

    #[test]
    fn census_over_trivial_group() {
        let g = grp(FiniteGroup::trivial());
        let whole = g.whole();
        let r = free_tambara_census(&g, &whole, &whole, 2, &Caps::default()).unwrap();
        assert!(r.consistent(), "{r:?}");
        // degree 0: only the empty norm over a point
        assert_eq!(r.counts[&(1, 0)], 1);
        // pt ← A → B → pt over sets with |A|, |B| ≤ 2: maps A → B up to iso
        let by_brute: usize = [(0, 0), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]
            .iter()
            .map(|&(b, a)| map_classes(a, b))
            .sum();
        assert_eq!(r.total, by_brute);
    }

    /// Maps from an `a`-set onto a `b`-set up to isomorphism: fiber-size
    /// multisets of length `b` summing to `a`.
    fn map_classes(a: usize, b: usize) -> usize {
        fn rec(left: usize, slots: usize, max: usize) -> usize {
            if slots == 0 {
                return usize::from(left == 0);
            }
            (0..=left.min(max)).map(|f| rec(left - f, slots - 1, f)).sum()
        }
        rec(a, b, a)
    }
}
