//! The Burnside ring with exact arithmetic, the marks homomorphism, and the
//! restriction, transfer, norm, inflation and deflation maps between levels.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Caps, Error, Result};
use crate::group::{same_group, FiniteGroup, GroupHom, Subgroup};
use crate::gset::{self, DeflationMode, GSet, GSetMap};

/// An integer combination of transitive G-sets, indexed by subgroup classes.
#[derive(Clone, PartialEq, Eq)]
pub struct BurnsideElement {
    group: Arc<FiniteGroup>,
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.group.lattice().labels();
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .zip(&labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| if c.is_one() { format!("[G/{l}]") } else { format!("{c}[G/{l}]") })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Fixed-point counts, one per subgroup class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarksVector {
    pub group: Arc<FiniteGroup>,
    pub values: Vec<BigInt>,
}

impl BurnsideElement {
    pub fn new(group: Arc<FiniteGroup>, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != group.lattice().len() {
            return Err(Error::invalid(format!(
                "{} coefficients for {} subgroup classes",
                coeffs.len(),
                group.lattice().len()
            )));
        }
        Ok(BurnsideElement { group, coeffs })
    }

    pub fn from_i64(group: &Arc<FiniteGroup>, coeffs: &[i64]) -> Result<Self> {
        Self::new(group.clone(), coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        BurnsideElement { group: group.clone(), coeffs: vec![BigInt::zero(); group.lattice().len()] }
    }

    /// `[G/G]`
    pub fn one(group: &Arc<FiniteGroup>) -> Self {
        let mut x = Self::zero(group);
        let last = x.coeffs.len() - 1;
        x.coeffs[last] = BigInt::one();
        x
    }

    /// `[G/H]` for the given class.
    pub fn basis(group: &Arc<FiniteGroup>, class: usize) -> Self {
        let mut x = Self::zero(group);
        x.coeffs[class] = BigInt::one();
        x
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// A G-set representing an effective element.
    pub fn to_gset(&self) -> Result<GSet> {
        let counts: Vec<usize> = self
            .coeffs
            .iter()
            .map(|c| c.to_usize().ok_or_else(|| Error::invalid("element is not effective")))
            .collect::<Result<_>>()?;
        Ok(GSet::from_orbit_type(&self.group, &counts))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::Mismatch("Burnside elements over different groups".into()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(BurnsideElement {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        BurnsideElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        BurnsideElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let table = structure_constants(&self.group);
        let mut out = vec![BigInt::zero(); self.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, &c) in table[i][j].iter().enumerate() {
                    if c != 0 {
                        out[k] += &ab * c;
                    }
                }
            }
        }
        Ok(BurnsideElement { group: self.group.clone(), coeffs: out })
    }

    pub fn marks(&self) -> MarksVector {
        let table = &self.group.lattice().marks;
        let n = self.coeffs.len();
        let values = (0..n)
            .map(|j| {
                self.coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| c * table[i][j])
                    .sum()
            })
            .collect();
        MarksVector { group: self.group.clone(), values }
    }
}

/// `[G/Hᵢ]·[G/Hⱼ] = Σₖ c[i][j][k]·[G/Hₖ]`, computed once per group.
fn structure_constants(group: &Arc<FiniteGroup>) -> &Vec<Vec<Vec<u64>>> {
    group.burnside_products.get_or_init(|| {
        let lattice = group.lattice();
        let orbits: Vec<GSet> = (0..lattice.len()).map(|c| GSet::coset_space(group, lattice.representative(c))).collect();
        orbits
            .iter()
            .map(|a| orbits.iter().map(|b| a.product(b).orbit_type().into_iter().map(|k| k as u64).collect()).collect())
            .collect()
    })
}

pub fn burnside_class(x: &GSet) -> BurnsideElement {
    BurnsideElement {
        group: x.group().clone(),
        coeffs: x.orbit_type().into_iter().map(BigInt::from).collect(),
    }
}

impl MarksVector {
    /// Inverts the marks homomorphism with rational arithmetic, reporting the
    /// first class where the solution is not an integer.
    pub fn unmarks(&self) -> Result<BurnsideElement> {
        let table = &self.group.lattice().marks;
        let n = self.values.len();
        if n != table.len() {
            return Err(Error::invalid("marks vector has the wrong length"));
        }
        let mut x = vec![BigInt::zero(); n];
        // marks[i][j] vanishes unless Hⱼ is subconjugate to Hᵢ, so j ≤ i
        for j in (0..n).rev() {
            let mut rest = BigRational::from_integer(self.values[j].clone());
            for (i, xi) in x.iter().enumerate().skip(j + 1) {
                rest -= BigRational::from_integer(xi * table[i][j]);
            }
            let q = rest / BigRational::from_integer(BigInt::from(table[j][j]));
            if !q.is_integer() {
                return Err(Error::NonIntegral { class: j, value: q.to_string() });
            }
            x[j] = q.to_integer();
        }
        Ok(BurnsideElement { group: self.group.clone(), coeffs: x })
    }
}

/// Column labels and rows of the table of marks.
pub fn marks_table(group: &Arc<FiniteGroup>) -> (Vec<String>, Vec<Vec<u64>>) {
    let lattice = group.lattice();
    (lattice.labels(), lattice.marks.clone())
}

/// Delimiter-separated table of marks with a header row of class labels.
pub fn marks_table_text(group: &Arc<FiniteGroup>, delimiter: &str) -> String {
    let (labels, rows) = marks_table(group);
    let mut out = String::new();
    out.push_str("class");
    for l in &labels {
        out.push_str(delimiter);
        out.push_str(l);
    }
    out.push('\n');
    for (l, row) in labels.iter().zip(rows) {
        out.push_str(l);
        for v in row {
            out.push_str(delimiter);
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

fn linear_map(x: &BurnsideElement, target: &Arc<FiniteGroup>, image_of: impl Fn(usize) -> Result<Vec<usize>>) -> Result<BurnsideElement> {
    let mut out = vec![BigInt::zero(); target.lattice().len()];
    for (c, coeff) in x.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (k, m) in image_of(c)?.into_iter().enumerate() {
            if m != 0 {
                out[k] += coeff * m;
            }
        }
    }
    Ok(BurnsideElement { group: target.clone(), coeffs: out })
}

/// Induction along an injective `incl: H → G`.
pub fn transfer(incl: &GroupHom, x: &BurnsideElement) -> Result<BurnsideElement> {
    if !same_group(incl.source(), &x.group) {
        return Err(Error::Mismatch("element is not over the source of the inclusion".into()));
    }
    let h = incl.source();
    linear_map(x, incl.target(), |c| Ok(gset::induce(incl, &GSet::coset_space(h, h.lattice().representative(c)))?.orbit_type()))
}

/// Restriction along any `alpha: H → G` (inflation when `alpha` is onto).
pub fn restrict_b(alpha: &GroupHom, x: &BurnsideElement) -> Result<BurnsideElement> {
    if !same_group(alpha.target(), &x.group) {
        return Err(Error::Mismatch("element is not over the target of the homomorphism".into()));
    }
    let g = alpha.target();
    linear_map(x, alpha.source(), |c| Ok(gset::restrict(alpha, &GSet::coset_space(g, g.lattice().representative(c)))?.orbit_type()))
}

/// Inflation along a surjection `proj: G → G/N`.
pub fn inflate_b(proj: &GroupHom, x: &BurnsideElement) -> Result<BurnsideElement> {
    if !proj.is_surjective() {
        return Err(Error::invalid("inflation needs a surjective homomorphism"));
    }
    restrict_b(proj, x)
}

/// Deflation along a surjection `proj: G → G/N`, classwise.
pub fn deflate_b(proj: &GroupHom, x: &BurnsideElement, mode: DeflationMode) -> Result<BurnsideElement> {
    if !same_group(proj.source(), &x.group) {
        return Err(Error::Mismatch("element is not over the source of the projection".into()));
    }
    let g = proj.source();
    linear_map(x, proj.target(), |c| {
        Ok(gset::deflate(proj, &GSet::coset_space(g, g.lattice().representative(c)), mode)?.orbit_type())
    })
}

/// The G-set of sections `Map_H(G, X)` along an injective `incl: H → G`,
/// built as the dependent product of `G ×_H X → G/H` along `G/H → pt`.
pub fn norm_effective(incl: &GroupHom, x: &GSet, caps: &Caps) -> Result<GSet> {
    if !incl.is_injective() {
        return Err(Error::invalid("norms need an injective homomorphism"));
    }
    let g = incl.target();
    let ind = gset::induce(incl, x)?;
    let cosets = GSet::coset_space(g, &incl.image());
    let m = x.size();
    let sum = GSetMap::new(ind.clone(), cosets.clone(), (0..ind.size()).map(|p| p / m.max(1)).collect())?;
    let norm = GSetMap::to_point(&cosets);
    Ok(gset::dependent_product(&norm, &sum, caps)?.pushed_sum.source().clone())
}

/// The norm on virtual elements, defined on marks: at a class `K` of `G` the
/// mark is the product over double cosets `KgH` of the marks of `x` at
/// `g⁻¹Kg ∩ H`.
pub fn norm_virtual(incl: &GroupHom, x: &BurnsideElement) -> Result<BurnsideElement> {
    if !same_group(incl.source(), &x.group) {
        return Err(Error::Mismatch("element is not over the source of the inclusion".into()));
    }
    if !incl.is_injective() {
        return Err(Error::invalid("norms need an injective homomorphism"));
    }
    let g = incl.target();
    let h = incl.source();
    let image = incl.image();
    let x_marks = x.marks();
    let lattice = g.lattice();
    let mut values = Vec::with_capacity(lattice.len());
    for c in 0..lattice.len() {
        let k = lattice.representative(c);
        let mut product = BigInt::one();
        for dc in g.double_cosets(k, &image) {
            let rep = dc[0];
            let inner = g.intersection(&g.conjugate(k, g.inv(rep)), &image);
            let pulled = incl.preimage(&inner);
            product *= &x_marks.values[h.lattice().class_of(&pulled)];
        }
        values.push(product);
    }
    MarksVector { group: g.clone(), values }.unmarks()
}

/// Set-valued Tambara functor data on the subgroups of a fixed group.
///
/// Level `H` is the value at `G/H`; conjugation by elements of `H` must act
/// trivially on level `H`.
pub trait TambaraFunctorOracle: Sync {
    type Value: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn group(&self) -> &Arc<FiniteGroup>;
    fn zero(&self, h: &Subgroup) -> Self::Value;
    fn one(&self, h: &Subgroup) -> Self::Value;
    fn add(&self, h: &Subgroup, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, h: &Subgroup, a: &Self::Value, b: &Self::Value) -> Self::Value;
    /// Level `h` to level `k ≤ h`.
    fn restrict(&self, k: &Subgroup, h: &Subgroup, v: &Self::Value) -> Self::Value;
    /// Level `k ≤ h` to level `h`.
    fn transfer(&self, k: &Subgroup, h: &Subgroup, v: &Self::Value) -> Self::Value;
    fn norm(&self, k: &Subgroup, h: &Subgroup, v: &Self::Value) -> Self::Value;
    /// Level `h` to level `g h g⁻¹`.
    fn conjugate(&self, g: usize, h: &Subgroup, v: &Self::Value) -> Self::Value;
    /// Test values at level `h`.
    fn samples(&self, h: &Subgroup, seed: u64) -> Vec<Self::Value>;
    fn is_grouplike(&self) -> bool;
}

/// The Burnside Tambara functor: level `H` is `A(H)`.
#[derive(Debug, Clone)]
pub struct BurnsideOracle {
    group: Arc<FiniteGroup>,
}

pub fn as_tambara_oracle(group: &Arc<FiniteGroup>) -> BurnsideOracle {
    BurnsideOracle { group: group.clone() }
}

impl BurnsideOracle {
    /// The standalone group carrying level `h`.
    pub fn level(&self, h: &Subgroup) -> Arc<FiniteGroup> {
        self.group.embed(h).source().clone()
    }

    /// `k ↦ c·k·c⁻¹` from the standalone copy of `k` into that of `h`.
    fn between(&self, k: &Subgroup, h: &Subgroup, c: usize) -> GroupHom {
        let g = &self.group;
        let (ks, hs) = (self.level(k), self.level(h));
        let images = k
            .elements()
            .iter()
            .map(|&e| {
                let t = g.conj(c, e);
                h.elements().binary_search(&t).expect("conjugate lands in the subgroup")
            })
            .collect();
        GroupHom::new(ks, hs, images).expect("subgroup inclusion is a homomorphism")
    }
}

impl TambaraFunctorOracle for BurnsideOracle {
    type Value = BurnsideElement;

    fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    fn zero(&self, h: &Subgroup) -> BurnsideElement {
        BurnsideElement::zero(&self.level(h))
    }

    fn one(&self, h: &Subgroup) -> BurnsideElement {
        BurnsideElement::one(&self.level(h))
    }

    fn add(&self, _h: &Subgroup, a: &BurnsideElement, b: &BurnsideElement) -> BurnsideElement {
        a.add(b).expect("same level")
    }

    fn mul(&self, _h: &Subgroup, a: &BurnsideElement, b: &BurnsideElement) -> BurnsideElement {
        a.mul(b).expect("same level")
    }

    fn restrict(&self, k: &Subgroup, h: &Subgroup, v: &BurnsideElement) -> BurnsideElement {
        restrict_b(&self.between(k, h, self.group.identity()), v).expect("levels match")
    }

    fn transfer(&self, k: &Subgroup, h: &Subgroup, v: &BurnsideElement) -> BurnsideElement {
        transfer(&self.between(k, h, self.group.identity()), v).expect("levels match")
    }

    fn norm(&self, k: &Subgroup, h: &Subgroup, v: &BurnsideElement) -> BurnsideElement {
        norm_virtual(&self.between(k, h, self.group.identity()), v).expect("virtual norms are integral")
    }

    fn conjugate(&self, g: usize, h: &Subgroup, v: &BurnsideElement) -> BurnsideElement {
        let target = self.group.conjugate(h, g);
        restrict_b(&self.between(&target, h, self.group.inv(g)), v).expect("levels match")
    }

    fn samples(&self, h: &Subgroup, seed: u64) -> Vec<BurnsideElement> {
        let level = self.level(h);
        let n = level.lattice().len();
        let mut out: Vec<BurnsideElement> = (0..n).map(|c| BurnsideElement::basis(&level, c)).collect();
        out.push(BurnsideElement::zero(&level));
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (h.order() as u64).wrapping_mul(0x9e37_79b9));
        let coeffs: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect();
        out.push(BurnsideElement { group: level, coeffs });
        out
    }

    fn is_grouplike(&self) -> bool {
        true
    }
}

/// The terminal Tambara functor: every level is a point.
#[derive(Debug, Clone)]
pub struct TerminalOracle {
    pub group: Arc<FiniteGroup>,
}

impl TambaraFunctorOracle for TerminalOracle {
    type Value = ();

    fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
    fn zero(&self, _: &Subgroup) {}
    fn one(&self, _: &Subgroup) {}
    fn add(&self, _: &Subgroup, _: &(), _: &()) {}
    fn mul(&self, _: &Subgroup, _: &(), _: &()) {}
    fn restrict(&self, _: &Subgroup, _: &Subgroup, _: &()) {}
    fn transfer(&self, _: &Subgroup, _: &Subgroup, _: &()) {}
    fn norm(&self, _: &Subgroup, _: &Subgroup, _: &()) {}
    fn conjugate(&self, _: usize, _: &Subgroup, _: &()) {}
    fn samples(&self, _: &Subgroup, _: u64) -> Vec<()> {
        vec![()]
    }
    fn is_grouplike(&self) -> bool {
        true
    }
}

/// The Burnside functor with every proper norm shifted by `[H/H]`; not a
/// Tambara functor.
#[derive(Debug, Clone)]
pub struct CorruptedNormOracle {
    pub inner: BurnsideOracle,
}

impl TambaraFunctorOracle for CorruptedNormOracle {
    type Value = BurnsideElement;

    fn group(&self) -> &Arc<FiniteGroup> {
        self.inner.group()
    }
    fn zero(&self, h: &Subgroup) -> BurnsideElement {
        self.inner.zero(h)
    }
    fn one(&self, h: &Subgroup) -> BurnsideElement {
        self.inner.one(h)
    }
    fn add(&self, h: &Subgroup, a: &BurnsideElement, b: &BurnsideElement) -> BurnsideElement {
        self.inner.add(h, a, b)
    }
    fn mul(&self, h: &Subgroup, a: &BurnsideElement, b: &BurnsideElement) -> BurnsideElement {
        self.inner.mul(h, a, b)
    }
    fn restrict(&self, k: &Subgroup, h: &Subgroup, v: &BurnsideElement) -> BurnsideElement {
        self.inner.restrict(k, h, v)
    }
    fn transfer(&self, k: &Subgroup, h: &Subgroup, v: &BurnsideElement) -> BurnsideElement {
        self.inner.transfer(k, h, v)
    }
    fn norm(&self, k: &Subgroup, h: &Subgroup, v: &BurnsideElement) -> BurnsideElement {
        let n = self.inner.norm(k, h, v);
        if k.order() == h.order() {
            n
        } else {
            n.add(&self.inner.one(h)).expect("same level")
        }
    }
    fn conjugate(&self, g: usize, h: &Subgroup, v: &BurnsideElement) -> BurnsideElement {
        self.inner.conjugate(g, h, v)
    }
    fn samples(&self, h: &Subgroup, seed: u64) -> Vec<BurnsideElement> {
        self.inner.samples(h, seed)
    }
    fn is_grouplike(&self) -> bool {
        true
    }
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
    fn rank_of_burnside_ring_of_sigma2() {
        let s2 = Arc::new(FiniteGroup::symmetric(2));
        assert_eq!(s2.lattice().len(), 2);
        assert_eq!(marks_table(&s2).1.len(), 2);
    }

    #[test]
    fn units_and_products_over_c2() {
        let g = c(2);
        let free = BurnsideElement::basis(&g, 0);
        let one = BurnsideElement::one(&g);
        let zero = BurnsideElement::zero(&g);
        assert_eq!(free.mul(&one).unwrap(), free);
        assert_eq!(free.add(&zero).unwrap(), free);
        assert_eq!(free.mul(&free).unwrap(), free.scale(&BigInt::from(2)));
    }

    #[test]
    fn marks_examples() {
        let g = c(2);
        let to_i = |m: MarksVector| m.values.iter().map(|v| v.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(to_i(BurnsideElement::one(&g).marks()), vec![1, 1]);
        assert_eq!(to_i(BurnsideElement::basis(&g, 0).marks()), vec![2, 0]);
        let x = BurnsideElement::from_i64(&s3(), &[3, -1, 2, -5]).unwrap();
        assert_eq!(x.marks().unmarks().unwrap(), x);
        let bad = MarksVector { group: g.clone(), values: vec![BigInt::from(1), BigInt::from(0)] };
        assert!(matches!(bad.unmarks(), Err(Error::NonIntegral { .. })));
    }

    #[test]
    fn marks_are_multiplicative() {
        let g = s3();
        let n = g.lattice().len();
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (BurnsideElement::basis(&g, i), BurnsideElement::basis(&g, j));
                let prod = a.mul(&b).unwrap().marks();
                let expected: Vec<BigInt> = a.marks().values.iter().zip(&b.marks().values).map(|(x, y)| x * y).collect();
                assert_eq!(prod.values, expected);
            }
        }
    }

    #[test]
    fn transfer_and_restriction_examples() {
        let g = c(2);
        let e = g.embed(&g.trivial_subgroup());
        let pt_e = BurnsideElement::one(e.source());
        assert_eq!(transfer(&e, &pt_e).unwrap(), BurnsideElement::basis(&g, 0));
        let res = restrict_b(&e, &BurnsideElement::basis(&g, 0)).unwrap();
        assert_eq!(res.coeffs(), &[BigInt::from(2)]);
        // tr ∘ res on [pt] is [C2/e]
        let tr_res = transfer(&e, &restrict_b(&e, &BurnsideElement::one(&g)).unwrap()).unwrap();
        assert_eq!(tr_res, BurnsideElement::basis(&g, 0));
    }

    #[test]
    fn norm_examples() {
        let g = c(2);
        let e = g.embed(&g.trivial_subgroup());
        let two = GSet::trivial(e.source(), 2);
        let y = norm_effective(&e, &two, &Caps::default()).unwrap();
        assert_eq!(y.marks(), vec![4, 2]);
        let virt = norm_virtual(&e, &burnside_class(&two)).unwrap();
        assert_eq!(virt, BurnsideElement::from_i64(&g, &[1, 2]).unwrap());
        assert_eq!(burnside_class(&y), virt);
        assert_eq!(norm_virtual(&e, &BurnsideElement::one(e.source())).unwrap(), BurnsideElement::one(&g));
        assert_eq!(norm_virtual(&e, &BurnsideElement::zero(e.source())).unwrap(), BurnsideElement::zero(&g));
        let id = GroupHom::identity(&g);
        let x = BurnsideElement::from_i64(&g, &[2, -1]).unwrap();
        assert_eq!(norm_virtual(&id, &x).unwrap(), x);
    }

    #[test]
    fn deflation_examples() {
        let g = c(2);
        let proj = GroupHom::quotient(&g, &g.whole()).unwrap();
        let q = proj.target().clone();
        assert_eq!(deflate_b(&proj, &BurnsideElement::one(&g), DeflationMode::Fixed).unwrap(), BurnsideElement::one(&q));
        assert_eq!(deflate_b(&proj, &BurnsideElement::basis(&g, 0), DeflationMode::Quotient).unwrap(), BurnsideElement::one(&q));
        assert_eq!(deflate_b(&proj, &BurnsideElement::basis(&g, 0), DeflationMode::Fixed).unwrap(), BurnsideElement::zero(&q));
    }

    #[test]
    fn norms_match_sections_over_s3() {
        let g = s3();
        for class in 0..g.lattice().len() {
            let incl = g.embed(g.lattice().representative(class));
            for x in gset::isoclasses_up_to(incl.source(), 3) {
                let eff = norm_effective(&incl, &x, &Caps::default()).unwrap();
                assert_eq!(eff.size(), x.size().pow((g.order() / incl.source().order()) as u32));
                assert_eq!(burnside_class(&eff), norm_virtual(&incl, &burnside_class(&x)).unwrap());
            }
        }
    }

    #[test]
    fn projection_formula() {
        let g = s3();
        for class in 0..g.lattice().len() {
            let incl = g.embed(g.lattice().representative(class));
            let h = incl.source();
            for i in 0..g.lattice().len() {
                for j in 0..h.lattice().len() {
                    let a = BurnsideElement::basis(&g, i);
                    let b = BurnsideElement::basis(h, j);
                    let lhs = transfer(&incl, &restrict_b(&incl, &a).unwrap().mul(&b).unwrap()).unwrap();
                    let rhs = a.mul(&transfer(&incl, &b).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
