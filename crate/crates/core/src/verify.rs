//! The acceptance battery: ten numbered checks, each reporting pass or fail
//! with a count of examined instances.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::bispan::check_functoriality;
use crate::error::{Caps, Error, Result};
use crate::freealg::free_underlying;
use crate::group::FiniteGroup;
use crate::groupoid::{iso_comma_pullback, verify_pullback_up, FiniteGroupoid, GroupoidMap};
use crate::gset::{
    dependent_product, equivariant_maps, isoclasses_up_to, sigma_classes, verify_distributivity_diagram, GSet, GSetMap,
};
use crate::spancat::{compose_spans, factor_span, hom_enumerate, span_iso, AdequateTripleSpec, GSetWorld, Span};
use crate::tambara::{as_tambara_oracle, burnside_class, marks_table, norm_effective, norm_virtual};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Battery {
    /// Exactly the stated ranges.
    Small,
    /// The stated ranges plus larger groups and degrees.
    Full,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub index: usize,
    pub title: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub detail: String,
    pub elapsed: Duration,
    /// Set when a size cap stopped the check.
    pub capacity: bool,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} ({}): {} instances, {:.2}s{}",
            self.index,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.checked,
            self.elapsed.as_secs_f64(),
            if self.detail.is_empty() { String::new() } else { format!(" - {}", self.detail) }
        )
    }
}

pub const TITLES: [&str; 10] = [
    "Burnside rank of A(S2)",
    "span associativity and unitality",
    "span factorization",
    "distributivity diagrams",
    "norm oracle equivalence",
    "Mackey double cosets",
    "G-set census against Hom(G, Sn)",
    "Tambara functoriality",
    "free algebra formula",
    "groupoid pullbacks",
];

type Check = std::result::Result<usize, (usize, String)>;

/// Runs criterion `index` (1 to 10).
pub fn run_criterion(index: usize, battery: Battery, caps: &Caps, seed: u64) -> Outcome {
    let start = Instant::now();
    let result: Result<Check> = match index {
        1 => burnside_rank(battery),
        2 => span_laws(battery, caps),
        3 => span_factorization(battery, caps),
        4 => distributivity(battery, caps),
        5 => norm_oracle(battery, caps),
        6 => mackey(battery, caps),
        7 => census(battery, caps),
        8 => tambara(battery, caps, seed),
        9 => free_algebra(battery, caps),
        10 => groupoid_pullbacks(battery, caps),
        _ => Err(Error::invalid(format!("no criterion {index}"))),
    };
    let (passed, checked, detail, capacity) = match result {
        Ok(Ok(n)) => (true, n, String::new(), false),
        Ok(Err((n, why))) => (false, n, why, false),
        Err(e) => (false, 0, e.to_string(), matches!(e, Error::Capacity { .. })),
    };
    Outcome {
        index,
        title: TITLES.get(index.wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed,
        checked,
        detail,
        elapsed: start.elapsed(),
        capacity,
    }
}

/// All ten criteria in index order.
pub fn run_battery(battery: Battery, caps: &Caps, seed: u64) -> Vec<Outcome> {
    (1..=10).map(|i| run_criterion(i, battery, caps, seed)).collect()
}

fn groups(names: &[&str]) -> Vec<Arc<FiniteGroup>> {
    names
        .iter()
        .map(|n| {
            Arc::new(match *n {
                "C2" => FiniteGroup::cyclic(2),
                "C3" => FiniteGroup::cyclic(3),
                "C4" => FiniteGroup::cyclic(4),
                "S3" => FiniteGroup::symmetric(3),
                "V4" => FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
                _ => FiniteGroup::trivial(),
            })
        })
        .collect()
}

fn orbits(g: &Arc<FiniteGroup>) -> Vec<GSet> {
    let lattice = g.lattice();
    (0..lattice.len()).map(|c| GSet::coset_space(g, lattice.representative(c))).collect()
}

fn burnside_rank(battery: Battery) -> Result<Check> {
    let s2 = Arc::new(FiniteGroup::symmetric(2));
    let (labels, rows) = marks_table(&s2);
    if labels.len() != 2 || rows.len() != 2 {
        return Ok(Err((1, format!("A(S2) has rank {}", rows.len()))));
    }
    if battery == Battery::Full {
        for (g, rank) in groups(&["C4", "S3", "V4"]).iter().zip([3, 4, 5]) {
            if marks_table(g).1.len() != rank {
                return Ok(Err((2, format!("A({}) has rank {}", g.name(), marks_table(g).1.len()))));
            }
        }
        return Ok(Ok(4));
    }
    Ok(Ok(1))
}

fn span_groups(battery: Battery) -> Vec<Arc<FiniteGroup>> {
    match battery {
        Battery::Small => groups(&["C2", "C3", "S3"]),
        Battery::Full => groups(&["C2", "C3", "S3", "C4", "V4"]),
    }
}

/// Span classes between every ordered pair of orbits, apex at most `cap`.
fn orbit_homs(w: &GSetWorld, obs: &[GSet], cap: usize, caps: &Caps) -> Result<Vec<Vec<Vec<Span<GSetWorld>>>>> {
    obs.iter()
        .map(|a| {
            obs.iter()
                .map(|b| Ok(hom_enumerate(w, a, b, AdequateTripleSpec::ALL, cap, caps)?.into_iter().map(|c| c.span).collect()))
                .collect()
        })
        .collect()
}

fn span_laws(battery: Battery, caps: &Caps) -> Result<Check> {
    let mut checked = 0;
    for g in span_groups(battery) {
        let w = GSetWorld::new(g.clone());
        let obs = orbits(&g);
        let homs = orbit_homs(&w, &obs, 4, caps)?;
        let n = obs.len();
        for (i, row) in homs.iter().enumerate() {
            for (j, spans) in row.iter().enumerate() {
                for s in spans {
                    checked += 1;
                    let left = compose_spans(&w, &Span::identity(&w, &obs[i], s.spec), s, caps)?;
                    let right = compose_spans(&w, s, &Span::identity(&w, &obs[j], s.spec), caps)?;
                    if !span_iso(&w, &left, s) || !span_iso(&w, &right, s) {
                        return Ok(Err((checked, format!("identity is not a unit for {s:?} over {}", g.name()))));
                    }
                }
            }
        }
        let mut jobs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for s in 0..homs[a][b].len() {
                            for t in 0..homs[b][c].len() {
                                for u in 0..homs[c][d].len() {
                                    jobs.push((a, b, c, d, s, t, u));
                                }
                            }
                        }
                    }
                }
            }
        }
        let failures: Vec<Result<Option<String>>> = jobs
            .par_iter()
            .map(|&(a, b, c, d, s, t, u)| {
                let (s, t, u) = (&homs[a][b][s], &homs[b][c][t], &homs[c][d][u]);
                let left = compose_spans(&w, &compose_spans(&w, s, t, caps)?, u, caps)?;
                let right = compose_spans(&w, s, &compose_spans(&w, t, u, caps)?, caps)?;
                Ok((!span_iso(&w, &left, &right)).then(|| format!("(u∘t)∘s ≇ u∘(t∘s) for s = {s:?}, t = {t:?}, u = {u:?}")))
            })
            .collect();
        for f in failures {
            checked += 1;
            if let Some(why) = f? {
                return Ok(Err((checked, why)));
            }
        }
    }
    Ok(Ok(checked))
}

fn span_factorization(battery: Battery, caps: &Caps) -> Result<Check> {
    let mut checked = 0;
    for g in span_groups(battery) {
        let w = GSetWorld::new(g.clone());
        let obs = orbits(&g);
        let homs = orbit_homs(&w, &obs, 4, caps)?;
        for row in &homs {
            for spans in row {
                for s in spans {
                    checked += 1;
                    let (backwards, forwards) = factor_span(&w, s);
                    if !forwards.back.is_bijective() || !backwards.forward.is_bijective() {
                        return Ok(Err((checked, format!("factors of {s:?} are not pure"))));
                    }
                    if !span_iso(&w, &compose_spans(&w, &backwards, &forwards, caps)?, s) {
                        return Ok(Err((checked, format!("factors of {s:?} do not recompose"))));
                    }
                    // every other factorization through an apex of the same size
                    let apex = s.apex(&w);
                    let (a, b) = (s.back.target(), s.forward.target());
                    let mut classes: Vec<Span<GSetWorld>> = Vec::new();
                    for y in isoclasses_up_to(&g, apex.size()).into_iter().filter(|y| y.size() == apex.size()) {
                        for r in equivariant_maps(&y, a, |_, _| true, caps)? {
                            let r = GSetMap::new(y.clone(), a.clone(), r)?;
                            for f in equivariant_maps(&y, b, |_, _| true, caps)? {
                                let f = GSetMap::new(y.clone(), b.clone(), f)?;
                                let back = Span { back: r.clone(), forward: GSetMap::identity(&y), spec: s.spec };
                                let fwd = Span { back: GSetMap::identity(&y), forward: f, spec: s.spec };
                                let c = compose_spans(&w, &back, &fwd, caps)?;
                                if span_iso(&w, &c, s) && !classes.iter().any(|k| span_iso(&w, k, &c)) {
                                    classes.push(c);
                                }
                            }
                        }
                    }
                    if classes.len() != 1 {
                        return Ok(Err((checked, format!("{s:?} has {} factorization classes", classes.len()))));
                    }
                }
            }
        }
    }
    Ok(Ok(checked))
}

fn distributivity(battery: Battery, caps: &Caps) -> Result<Check> {
    let names: &[&str] = match battery {
        Battery::Small => &["C2", "C3"],
        Battery::Full => &["C2", "C3", "C4"],
    };
    let mut checked = 0;
    for g in groups(names) {
        let sets = isoclasses_up_to(&g, 3);
        let mut jobs = Vec::new();
        for a in &sets {
            for b in &sets {
                for m in equivariant_maps(a, b, |_, _| true, caps)? {
                    for c in &sets {
                        for n in equivariant_maps(b, c, |_, _| true, caps)? {
                            jobs.push((
                                GSetMap::new(a.clone(), b.clone(), m.clone())?,
                                GSetMap::new(b.clone(), c.clone(), n)?,
                            ));
                        }
                    }
                }
            }
        }
        let results: Vec<Result<Option<String>>> = jobs
            .par_iter()
            .map(|(m, n)| {
                let d = dependent_product(n, m, caps)?;
                let cert = verify_distributivity_diagram(&d, 3);
                Ok((!cert.passed).then(|| format!("m = {m:?}, n = {n:?}: {}", cert.failure.unwrap_or_default())))
            })
            .collect();
        for r in results {
            checked += 1;
            if let Some(why) = r? {
                return Ok(Err((checked, why)));
            }
        }
    }
    Ok(Ok(checked))
}

fn norm_oracle(battery: Battery, caps: &Caps) -> Result<Check> {
    let names: &[&str] = match battery {
        Battery::Small => &["C2", "C4", "S3"],
        Battery::Full => &["C2", "C4", "S3", "C3", "V4"],
    };
    let mut checked = 0;
    for g in groups(names) {
        for h in g.all_subgroups() {
            if g.order() / h.order() > 3 {
                continue;
            }
            let incl = g.embed(&h);
            for x in isoclasses_up_to(incl.source(), 4) {
                checked += 1;
                let virt = norm_virtual(&incl, &burnside_class(&x))?;
                let eff = burnside_class(&norm_effective(&incl, &x, caps)?);
                if virt.coeffs() != eff.coeffs() {
                    return Ok(Err((
                        checked,
                        format!("{} over {:?} ≤ {}: virtual {:?}, effective {:?}", x.size(), h.elements(), g.name(), virt.coeffs(), eff.coeffs()),
                    )));
                }
            }
        }
    }
    Ok(Ok(checked))
}

/// `G/H ← ⊔ G/(K ∩ gHg⁻¹) → G/K`, one piece per double coset `KgH`.
fn double_coset_span(g: &Arc<FiniteGroup>, h: &crate::group::Subgroup, k: &crate::group::Subgroup) -> Result<Span<GSetWorld>> {
    let gh = GSet::coset_space(g, h);
    let gk = GSet::coset_space(g, k);
    let (h_of, _) = g.left_cosets(h);
    let (k_of, _) = g.left_cosets(k);
    let mut apex = GSet::empty(g);
    let (mut back, mut forward) = (Vec::new(), Vec::new());
    for dc in g.double_cosets(k, h) {
        let rep = dc[0];
        let l = g.intersection(k, &g.conjugate(h, rep));
        let piece = GSet::coset_space(g, &l);
        let (_, reps) = g.left_cosets(&l);
        for &x in &reps {
            // x(K ∩ gHg⁻¹) ↦ (xgH, xK)
            back.push(h_of[g.mul(x, rep)]);
            forward.push(k_of[x]);
        }
        apex = apex.disjoint_union(&piece);
    }
    let w = GSetWorld::new(g.clone());
    Span::new(&w, GSetMap::new(apex.clone(), gh, back)?, GSetMap::new(apex, gk, forward)?, AdequateTripleSpec::ALL)
}

fn mackey(battery: Battery, caps: &Caps) -> Result<Check> {
    let names: &[&str] = match battery {
        Battery::Small => &["S3"],
        Battery::Full => &["S3", "C4", "V4", "C3"],
    };
    let mut checked = 0;
    for g in groups(names) {
        let w = GSetWorld::new(g.clone());
        for h in g.all_subgroups() {
            for k in g.all_subgroups() {
                checked += 1;
                let gh = GSet::coset_space(&g, &h);
                let gk = GSet::coset_space(&g, &k);
                let tr = Span::new(&w, GSetMap::identity(&gh), GSetMap::to_point(&gh), AdequateTripleSpec::ALL)?;
                let res = Span::new(&w, GSetMap::to_point(&gk), GSetMap::identity(&gk), AdequateTripleSpec::ALL)?;
                let composite = compose_spans(&w, &tr, &res, caps)?;
                let direct = double_coset_span(&g, &h, &k)?;
                if !span_iso(&w, &composite, &direct) {
                    return Ok(Err((checked, format!("res ∘ tr for H = {:?}, K = {:?} in {}", h.elements(), k.elements(), g.name()))));
                }
            }
        }
    }
    Ok(Ok(checked))
}

fn census(battery: Battery, caps: &Caps) -> Result<Check> {
    let (names, max_n): (&[&str], usize) = match battery {
        Battery::Small => (&["C2", "C3", "C4", "S3"], 4),
        Battery::Full => (&["C2", "C3", "C4", "S3", "V4"], 5),
    };
    let mut checked = 0;
    for g in groups(names) {
        for n in 0..=max_n {
            checked += 1;
            let c = sigma_classes(&g, n, caps)?;
            if !c.agrees() {
                return Ok(Err((
                    checked,
                    format!("{} with n = {n}: {} G-sets, {} homomorphism classes", g.name(), c.gset_classes.len(), c.homomorphism_classes.len()),
                )));
            }
        }
    }
    Ok(Ok(checked))
}

fn tambara(battery: Battery, caps: &Caps, seed: u64) -> Result<Check> {
    let runs: Vec<(&str, usize)> = match battery {
        Battery::Small => vec![("C2", 4)],
        Battery::Full => vec![("C2", 4), ("C3", 3)],
    };
    let mut checked = 0;
    for (name, cap) in runs {
        let g = groups(&[name]).remove(0);
        let report = check_functoriality(&as_tambara_oracle(&g), &orbits(&g), cap, seed, caps)?;
        checked += report.pairs;
        if !report.certificate.passed {
            return Ok(Err((checked, report.certificate.failure.unwrap_or_default())));
        }
    }
    Ok(Ok(checked))
}

fn free_algebra(battery: Battery, caps: &Caps) -> Result<Check> {
    let (names, max_n): (&[&str], usize) = match battery {
        Battery::Small => (&["C2", "C3", "S3"], 3),
        Battery::Full => (&["C2", "C3", "S3", "C4"], 4),
    };
    let mut checked = 0;
    for g in groups(names) {
        for x in isoclasses_up_to(&g, 3) {
            let report = free_underlying(&x, max_n, caps)?;
            checked += report.degrees.len();
            if let Some(bad) = report.first_mismatch() {
                return Ok(Err((
                    checked,
                    format!("{} on {:?}, degree {}: pipeline marks {:?}, symmetric marks {:?}", g.name(), x.orbit_type(), bad.degree, bad.pipeline.marks(), bad.symmetric.marks()),
                )));
            }
        }
    }
    Ok(Ok(checked))
}

fn groupoid_pullbacks(battery: Battery, caps: &Caps) -> Result<Check> {
    let names: &[&str] = match battery {
        Battery::Small => &["T", "C2", "C3", "C4", "S3"],
        Battery::Full => &["T", "C2", "C3", "C4", "S3", "V4"],
    };
    let mut checked = 0;
    for g in groups(names) {
        let bg = Arc::new(FiniteGroupoid::delooping(&g));
        let one = Arc::new(FiniteGroupoid::terminal());
        let pt = GroupoidMap::new(one.clone(), bg.clone(), vec![0], vec![bg.identity(0)])?;
        checked += 1;
        let sq = iso_comma_pullback(&pt, &pt, caps)?;
        let apex = &sq.apex;
        if apex.object_count() != g.order() || apex.morphism_count() != g.order() {
            return Ok(Err((
                checked,
                format!("1 ×_B{} 1 has {} objects and {} morphisms", g.name(), apex.object_count(), apex.morphism_count()),
            )));
        }
        // faithful maps into BG against arbitrary ones
        let mut maps = Vec::new();
        for h in g.all_subgroups() {
            maps.push(GroupoidMap::delooping(&g.embed(&h)));
            let act = Arc::new(FiniteGroupoid::action(&GSet::coset_space(&g, &h)));
            let objects = vec![0; act.object_count()];
            let morphisms = act.morphisms().map(|m| m % g.order()).collect();
            maps.push(GroupoidMap::new(act, bg.clone(), objects, morphisms)?);
        }
        // a non-faithful one: the projection B(G × C2) → BG
        let wide = Arc::new(FiniteGroup::direct_product(&g, &FiniteGroup::cyclic(2)));
        let proj = crate::group::GroupHom::new(wide.clone(), g.clone(), wide.elements().map(|e| e / 2).collect())?;
        maps.push(GroupoidMap::delooping(&proj));
        for m in maps.iter().filter(|m| m.is_faithful()) {
            for f in &maps {
                let sq = match iso_comma_pullback(f, m, caps) {
                    Ok(sq) => sq,
                    // squares beyond the caps are left out of the sample
                    Err(Error::Capacity { .. }) => continue,
                    Err(e) => return Err(e),
                };
                checked += 1;
                if !sq.left.is_faithful() {
                    return Ok(Err((checked, format!("base change of a faithful map into B{} is not faithful", g.name()))));
                }
                if battery == Battery::Full || g.order() <= 2 {
                    let cert = verify_pullback_up(&sq, caps);
                    if !cert.passed {
                        return Ok(Err((checked, cert.failure.unwrap_or_default())));
                    }
                }
            }
        }
    }
    Ok(Ok(checked))
}
