//! Finite abelian groups, their automorphisms, and the holomorph.
//!
//! A group is a product of cyclic factors `Z_{n1} x ... x Z_{nk}`. Elements
//! are addressed by a mixed-radix index (least-significant factor first), so
//! index <-> coefficient vector is a bijection and index 0 is the zero
//! element. The holomorph is the semidirect product `A x| Aut(A)` with
//! product `(a,f)(b,g) = (a + f(b), f o g)` and action `(a,f).b = f(b) + a`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default upper bound on the group order accepted by [`FiniteAbelianGroup::new`].
pub const DEFAULT_MAX_ORDER: usize = 64;

/// Upper bound on the automorphism search space (product of torsion-subgroup
/// sizes over the generators) before enumeration refuses.
pub const MAX_AUT_CANDIDATES: u128 = 50_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("factor list is empty")]
    EmptyOrders,
    #[error("cyclic factor order {0} is invalid (must be >= 2)")]
    InvalidFactor(u32),
    #[error("group order {order} exceeds the bound {bound}")]
    OrderTooLarge { order: u128, bound: usize },
    #[error("automorphism search space {candidates} exceeds the bound {bound}")]
    AutSearchTooLarge { candidates: u128, bound: u128 },
}

/// A finite abelian group `Z_{n1} x ... x Z_{nk}` with table-backed arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    orders: Vec<u32>,
    order: usize,
    strides: Vec<usize>,
    add: Vec<u16>,
    neg: Vec<u16>,
}

impl FiniteAbelianGroup {
    /// Builds the group, rejecting degenerate factors and orders above
    /// [`DEFAULT_MAX_ORDER`].
    pub fn new(orders: &[u32]) -> Result<Self, GroupError> {
        Self::with_max_order(orders, DEFAULT_MAX_ORDER)
    }

    /// Same as [`FiniteAbelianGroup::new`] with an explicit order bound.
    pub fn with_max_order(orders: &[u32], max_order: usize) -> Result<Self, GroupError> {
        if orders.is_empty() {
            return Err(GroupError::EmptyOrders);
        }
        if let Some(&bad) = orders.iter().find(|&&n| n < 2) {
            return Err(GroupError::InvalidFactor(bad));
        }
        let order_big: u128 = orders.iter().map(|&n| n as u128).product();
        let bound = max_order.min(u16::MAX as usize);
        if order_big > bound as u128 {
            return Err(GroupError::OrderTooLarge {
                order: order_big,
                bound,
            });
        }
        let order = order_big as usize;

        let mut strides = Vec::with_capacity(orders.len());
        let mut s = 1usize;
        for &n in orders {
            strides.push(s);
            s *= n as usize;
        }

        let mut add = vec![0u16; order * order];
        for x in 0..order {
            for y in 0..order {
                let mut sum = 0usize;
                for (i, &n) in orders.iter().enumerate() {
                    let n = n as usize;
                    let cx = (x / strides[i]) % n;
                    let cy = (y / strides[i]) % n;
                    sum += ((cx + cy) % n) * strides[i];
                }
                add[x * order + y] = sum as u16;
            }
        }
        let mut neg = vec![0u16; order];
        for x in 0..order {
            let mut v = 0usize;
            for (i, &n) in orders.iter().enumerate() {
                let n = n as usize;
                let cx = (x / strides[i]) % n;
                v += ((n - cx) % n) * strides[i];
            }
            neg[x] = v as u16;
        }

        Ok(Self {
            orders: orders.to_vec(),
            order,
            strides,
            add,
            neg,
        })
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> usize {
        0
    }

    /// Componentwise sum mod the factor orders. Panics on out-of-range indices.
    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        assert!(x < self.order && y < self.order, "element index out of range");
        self.add[x * self.order + y] as usize
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        assert!(x < self.order, "element index out of range");
        self.neg[x] as usize
    }

    #[inline]
    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    /// `k`-fold sum of `x`.
    pub fn scalar_mul(&self, k: u32, x: usize) -> usize {
        let mut acc = 0usize;
        for _ in 0..k {
            acc = self.add(acc, x);
        }
        acc
    }

    /// Mixed-radix coefficient vector of an element index.
    pub fn decompose(&self, x: usize) -> Vec<u32> {
        assert!(x < self.order, "element index out of range");
        self.orders
            .iter()
            .enumerate()
            .map(|(i, &n)| ((x / self.strides[i]) % n as usize) as u32)
            .collect()
    }

    /// Index of a coefficient vector (entries taken mod the factor orders).
    pub fn compose(&self, coeffs: &[u32]) -> usize {
        assert_eq!(coeffs.len(), self.orders.len(), "coefficient count mismatch");
        coeffs
            .iter()
            .zip(self.orders.iter())
            .enumerate()
            .map(|(i, (&c, &n))| (c % n) as usize * self.strides[i])
            .sum()
    }

    /// Index of the `i`-th standard generator.
    pub fn generator(&self, i: usize) -> usize {
        self.strides[i]
    }

    /// Renders an element: a bare integer for a single cyclic factor,
    /// otherwise a coefficient tuple like `(0,1)`.
    pub fn element_name(&self, x: usize) -> String {
        if self.orders.len() == 1 {
            x.to_string()
        } else {
            let coeffs = self.decompose(x);
            let inner: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
            format!("({})", inner.join(","))
        }
    }
}

/// An element `(a, f)` of the holomorph: a translation index plus an
/// automorphism id into the catalog of the owning [`Holomorph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HolElement {
    pub trans: usize,
    pub aut: usize,
}

impl HolElement {
    pub const IDENTITY: HolElement = HolElement { trans: 0, aut: 0 };

    pub fn new(trans: usize, aut: usize) -> Self {
        Self { trans, aut }
    }
}

impl Serialize for HolElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (self.trans, self.aut).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HolElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (trans, aut) = <(usize, usize)>::deserialize(deserializer)?;
        Ok(Self { trans, aut })
    }
}

impl fmt::Display for HolElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},f{})", self.trans, self.aut)
    }
}

/// Enumerates all automorphisms of `g` as image tables, sorted
/// lexicographically. The identity always sorts first.
///
/// Candidate images for each standard generator are the elements of matching
/// torsion; each assignment extends linearly and is kept when bijective.
pub fn enumerate_automorphisms(g: &FiniteAbelianGroup) -> Result<Vec<Vec<u16>>, GroupError> {
    Ok(homomorphism_bijections(g, g)?)
}

/// All additive bijections `g1 -> g2`, sorted lexicographically by image
/// table. Empty when the groups are not isomorphic.
pub fn isomorphisms_between(
    g1: &FiniteAbelianGroup,
    g2: &FiniteAbelianGroup,
) -> Result<Vec<Vec<u16>>, GroupError> {
    if g1.order() != g2.order() {
        return Ok(Vec::new());
    }
    homomorphism_bijections(g1, g2)
}

fn homomorphism_bijections(
    g1: &FiniteAbelianGroup,
    g2: &FiniteAbelianGroup,
) -> Result<Vec<Vec<u16>>, GroupError> {
    let n = g1.order();
    let k = g1.orders().len();

    // Torsion candidates per generator: images must satisfy n_i * x = 0.
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(k);
    for (i, &ni) in g1.orders().iter().enumerate() {
        let _ = i;
        let tors: Vec<usize> = (0..g2.order())
            .filter(|&x| g2.scalar_mul(ni, x) == 0)
            .collect();
        candidates.push(tors);
    }
    let total: u128 = candidates.iter().map(|c| c.len() as u128).product();
    if total > MAX_AUT_CANDIDATES {
        return Err(GroupError::AutSearchTooLarge {
            candidates: total,
            bound: MAX_AUT_CANDIDATES,
        });
    }

    // For each element index > 0, the index of a predecessor obtained by
    // decrementing the lowest nonzero coefficient, plus which generator to add.
    let mut pred: Vec<(usize, usize)> = vec![(0, 0); n];
    for x in 1..n {
        for (i, &ni) in g1.orders().iter().enumerate() {
            let c = (x / g1.strides[i]) % ni as usize;
            if c > 0 {
                pred[x] = (x - g1.strides[i], i);
                break;
            }
        }
    }

    let mut out: Vec<Vec<u16>> = Vec::new();
    let mut choice = vec![0usize; k];
    let mut images = vec![0u16; n];
    let mut seen = vec![false; n];
    'outer: loop {
        // Extend the generator assignment linearly over the whole group.
        images[0] = 0;
        for x in 1..n {
            let (p, gen) = pred[x];
            let gi = candidates[gen][choice[gen]];
            images[x] = g2.add(images[p] as usize, gi) as u16;
        }
        seen.iter_mut().for_each(|s| *s = false);
        let bij = images.iter().all(|&im| {
            let hit = &mut seen[im as usize];
            !std::mem::replace(hit, true)
        });
        if bij {
            out.push(images.clone());
        }
        // Odometer over candidate choices.
        for i in 0..k {
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                continue 'outer;
            }
            choice[i] = 0;
        }
        break;
    }
    out.sort();
    Ok(out)
}

enum CompTable {
    /// Flattened k x k composition matrix, built when the catalog is small.
    Dense(Vec<u16>),
    /// Compose image tables on the fly and look the result up.
    Lazy,
}

const DENSE_COMP_LIMIT: usize = 4096;

/// The holomorph `A x| Aut(A)`: the group together with its full automorphism
/// catalog and composition/inversion lookups.
pub struct Holomorph {
    group: FiniteAbelianGroup,
    auts: Vec<Vec<u16>>,
    inv: Vec<u16>,
    comp: CompTable,
    aut_index: HashMap<Vec<u16>, u16>,
}

impl Holomorph {
    pub fn new(group: FiniteAbelianGroup) -> Result<Self, GroupError> {
        let auts = enumerate_automorphisms(&group)?;
        let k = auts.len();
        let n = group.order();
        let mut aut_index = HashMap::with_capacity(k);
        for (id, t) in auts.iter().enumerate() {
            aut_index.insert(t.clone(), id as u16);
        }
        let mut inv = vec![0u16; k];
        for (id, t) in auts.iter().enumerate() {
            let mut invt = vec![0u16; n];
            for (x, &fx) in t.iter().enumerate() {
                invt[fx as usize] = x as u16;
            }
            inv[id] = aut_index[&invt];
        }
        let comp = if k <= DENSE_COMP_LIMIT {
            let mut table = vec![0u16; k * k];
            let mut buf = vec![0u16; n];
            for f in 0..k {
                for g in 0..k {
                    for x in 0..n {
                        buf[x] = auts[f][auts[g][x] as usize];
                    }
                    table[f * k + g] = aut_index[&buf];
                }
            }
            CompTable::Dense(table)
        } else {
            CompTable::Lazy
        };
        Ok(Self {
            group,
            auts,
            inv,
            comp,
            aut_index,
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn aut_count(&self) -> usize {
        self.auts.len()
    }

    /// Order of the holomorph, `|A| * |Aut(A)|`.
    pub fn order(&self) -> usize {
        self.group.order() * self.auts.len()
    }

    pub fn aut_images(&self, id: usize) -> &[u16] {
        &self.auts[id]
    }

    /// Catalog id of an image table, if it is an automorphism of the group.
    pub fn aut_id(&self, images: &[u16]) -> Option<usize> {
        self.aut_index.get(images).map(|&id| id as usize)
    }

    #[inline]
    pub fn apply_aut(&self, id: usize, x: usize) -> usize {
        self.auts[id][x] as usize
    }

    #[inline]
    pub fn compose_auts(&self, f: usize, g: usize) -> usize {
        match &self.comp {
            CompTable::Dense(t) => t[f * self.auts.len() + g] as usize,
            CompTable::Lazy => {
                let buf: Vec<u16> = (0..self.group.order())
                    .map(|x| self.auts[f][self.auts[g][x] as usize])
                    .collect();
                self.aut_index[&buf] as usize
            }
        }
    }

    #[inline]
    pub fn invert_aut(&self, f: usize) -> usize {
        self.inv[f] as usize
    }

    /// `(a,f)(b,g) = (a + f(b), f o g)`.
    #[inline]
    pub fn mul(&self, x: HolElement, y: HolElement) -> HolElement {
        HolElement {
            trans: self.group.add(x.trans, self.apply_aut(x.aut, y.trans)),
            aut: self.compose_auts(x.aut, y.aut),
        }
    }

    /// `(a,f)^{-1} = (-f^{-1}(a), f^{-1})`.
    #[inline]
    pub fn inv(&self, x: HolElement) -> HolElement {
        let fi = self.invert_aut(x.aut);
        HolElement {
            trans: self.group.neg(self.apply_aut(fi, x.trans)),
            aut: fi,
        }
    }

    /// Action on the group: `(a,f).b = f(b) + a`.
    #[inline]
    pub fn act(&self, x: HolElement, b: usize) -> usize {
        self.group.add(self.apply_aut(x.aut, b), x.trans)
    }

    /// Renders `(a,f)` with the element name and automorphism id.
    pub fn element_name(&self, x: HolElement) -> String {
        format!("({},f{})", self.group.element_name(x.trans), x.aut)
    }
}

impl fmt::Debug for Holomorph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Holomorph")
            .field("orders", &self.group.orders())
            .field("aut_count", &self.auts.len())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3() -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(&[3]).unwrap()
    }

    fn z2z2() -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(&[2, 2]).unwrap()
    }

    #[test]
    fn make_group_basic() {
        assert_eq!(z3().order(), 3);
        assert_eq!(z2z2().order(), 4);
        assert_eq!(FiniteAbelianGroup::new(&[1]), Err(GroupError::InvalidFactor(1)));
        assert_eq!(FiniteAbelianGroup::new(&[]), Err(GroupError::EmptyOrders));
        assert!(matches!(
            FiniteAbelianGroup::new(&[65]),
            Err(GroupError::OrderTooLarge { .. })
        ));
        assert!(FiniteAbelianGroup::with_max_order(&[65], 100).is_ok());
    }

    #[test]
    fn elem_arithmetic() {
        let g = z3();
        assert_eq!(g.add(1, 2), 0);
        assert_eq!(g.add(2, 2), 1);
        assert_eq!(g.neg(1), 2);
        let h = z2z2();
        // (0,1) + (1,0) = (1,1): indices 2 + 1 -> 3.
        assert_eq!(h.compose(&[0, 1]), 2);
        assert_eq!(h.compose(&[1, 0]), 1);
        assert_eq!(h.add(2, 1), 3);
        assert_eq!(h.decompose(3), vec![1, 1]);
    }

    #[test]
    fn element_rendering() {
        assert_eq!(z3().element_name(2), "2");
        assert_eq!(z2z2().element_name(3), "(1,1)");
    }

    #[test]
    fn automorphisms_z3() {
        let auts = enumerate_automorphisms(&z3()).unwrap();
        assert_eq!(auts, vec![vec![0, 1, 2], vec![0, 2, 1]]);
    }

    #[test]
    fn automorphisms_counts() {
        let cases: &[(&[u32], usize)] = &[
            (&[2], 1),
            (&[3], 2),
            (&[4], 2),
            (&[2, 2], 6),
            (&[5], 4),
            (&[7], 6),
            (&[8], 4),
            (&[2, 4], 8),
            (&[2, 2, 2], 168),
        ];
        for &(orders, count) in cases {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            assert_eq!(
                enumerate_automorphisms(&g).unwrap().len(),
                count,
                "orders {orders:?}"
            );
        }
    }

    /// Brute-force oracle: every bijection of the index set that is additive.
    fn brute_force_automorphisms(g: &FiniteAbelianGroup) -> Vec<Vec<u16>> {
        let n = g.order();
        let mut perm: Vec<u16> = (0..n as u16).collect();
        let mut out = Vec::new();
        permute(&mut perm, 0, &mut |p| {
            let additive = (0..n)
                .all(|x| (0..n).all(|y| p[g.add(x, y)] as usize == g.add(p[x] as usize, p[y] as usize)));
            if additive {
                out.push(p.to_vec());
            }
        });
        out.sort();
        out
    }

    fn permute(v: &mut [u16], k: usize, f: &mut impl FnMut(&[u16])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn automorphisms_match_brute_force_up_to_order_6() {
        for orders in [vec![2], vec![3], vec![4], vec![2, 2], vec![5], vec![6], vec![2, 3]] {
            let g = FiniteAbelianGroup::new(&orders).unwrap();
            let fast = enumerate_automorphisms(&g).unwrap();
            let slow = brute_force_automorphisms(&g);
            assert_eq!(fast, slow, "orders {orders:?}");
        }
    }

    #[test]
    fn holomorph_identity_is_id_zero() {
        let hol = Holomorph::new(z3()).unwrap();
        assert_eq!(hol.aut_images(0), &[0, 1, 2]);
        let x = HolElement::new(2, 1);
        assert_eq!(hol.mul(HolElement::IDENTITY, x), x);
        assert_eq!(hol.mul(x, HolElement::IDENTITY), x);
    }

    #[test]
    fn hol_mul_examples() {
        let hol = Holomorph::new(z3()).unwrap();
        let tau = 1; // images [0,2,1]
        assert_eq!(
            hol.mul(HolElement::new(0, tau), HolElement::new(1, 0)),
            HolElement::new(2, tau)
        );
        assert_eq!(
            hol.mul(HolElement::new(1, tau), HolElement::new(1, tau)),
            HolElement::IDENTITY
        );
    }

    #[test]
    fn hol_inv_examples() {
        let hol = Holomorph::new(z3()).unwrap();
        assert_eq!(hol.inv(HolElement::IDENTITY), HolElement::IDENTITY);
        assert_eq!(hol.inv(HolElement::new(1, 1)), HolElement::new(1, 1));
        assert_eq!(hol.inv(HolElement::new(1, 0)), HolElement::new(2, 0));
        for a in 0..3 {
            for f in 0..hol.aut_count() {
                let x = HolElement::new(a, f);
                assert_eq!(hol.mul(x, hol.inv(x)), HolElement::IDENTITY);
                assert_eq!(hol.mul(hol.inv(x), x), HolElement::IDENTITY);
            }
        }
    }

    #[test]
    fn hol_act_examples() {
        let hol = Holomorph::new(z3()).unwrap();
        assert_eq!(hol.act(HolElement::IDENTITY, 2), 2);
        assert_eq!(hol.act(HolElement::new(1, 1), 1), 0);
        let hol2 = Holomorph::new(z2z2()).unwrap();
        let e11 = hol2.group().compose(&[1, 1]);
        let e01 = hol2.group().compose(&[0, 1]);
        let e10 = hol2.group().compose(&[1, 0]);
        assert_eq!(hol2.act(HolElement::new(e11, 0), e01), e10);
    }

    #[test]
    fn hol_mul_associative_small_groups() {
        for orders in [vec![2], vec![3], vec![4], vec![2, 2], vec![5], vec![6], vec![7], vec![8]] {
            let hol = Holomorph::new(FiniteAbelianGroup::new(&orders).unwrap()).unwrap();
            if hol.aut_count() > 6 || hol.group().order() > 8 {
                continue;
            }
            let elems: Vec<HolElement> = (0..hol.group().order())
                .flat_map(|a| (0..hol.aut_count()).map(move |f| HolElement::new(a, f)))
                .collect();
            for &x in &elems {
                for &y in &elems {
                    for &z in &elems {
                        assert_eq!(hol.mul(hol.mul(x, y), z), hol.mul(x, hol.mul(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn action_compatible_with_mul() {
        for orders in [vec![2], vec![3], vec![4], vec![2, 2]] {
            let hol = Holomorph::new(FiniteAbelianGroup::new(&orders).unwrap()).unwrap();
            let n = hol.group().order();
            for a in 0..n {
                for f in 0..hol.aut_count() {
                    let x = HolElement::new(a, f);
                    for b in 0..n {
                        for g in 0..hol.aut_count() {
                            let y = HolElement::new(b, g);
                            for c in 0..n {
                                assert_eq!(hol.act(hol.mul(x, y), c), hol.act(x, hol.act(y, c)));
                            }
                        }
                    }
                    assert_eq!(hol.act(HolElement::IDENTITY, a), a);
                }
            }
        }
    }

    #[test]
    fn isomorphisms_between_groups() {
        let z6 = FiniteAbelianGroup::new(&[6]).unwrap();
        let z23 = FiniteAbelianGroup::new(&[2, 3]).unwrap();
        let isos = isomorphisms_between(&z6, &z23).unwrap();
        assert_eq!(isos.len(), 2); // |Aut(Z_6)| = 2
        let z4 = FiniteAbelianGroup::new(&[4]).unwrap();
        let z22 = FiniteAbelianGroup::new(&[2, 2]).unwrap();
        assert!(isomorphisms_between(&z4, &z22).unwrap().is_empty());
    }
}
