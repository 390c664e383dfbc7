//! Dynamical braces as families of sections of the holomorph.
//!
//! A *section* assigns one automorphism to every group element, realizing a
//! subset `S = {(a, f(a))}` of `A x| Aut(A)` with exactly one element per
//! translation component. A family of pairwise-distinct sections closed
//! under `x^{-1}S` for `x in S` carries a d-brace structure: the dynamical
//! parameter set is the section list itself, `phi` records where each
//! translate lands, and the multiplications are `a ._l b = f_l(b)(a) - a`.
//!
//! Enumeration walks every section as a closure seed (bounded search space),
//! deduplicates closures as canonical section sets, and optionally closes
//! the result under unions.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{FiniteAbelianGroup, HolElement, Holomorph};
use crate::group::{isomorphisms_between, GroupError};
use crate::report::{Check, CheckOptions, Report};

/// One automorphism id per group element; entry `a` is `f_lambda(a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Section(pub Vec<u16>);

impl Section {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Automorphism id above translation component `a`.
    pub fn aut_at(&self, a: usize) -> usize {
        self.0[a] as usize
    }

    /// The holomorph element `(a, f(a))` of this section.
    pub fn element(&self, a: usize) -> HolElement {
        HolElement::new(a, self.0[a] as usize)
    }
}

/// Structural validity: one entry per group element, every entry a catalog id.
pub fn is_valid_section(hol: &Holomorph, section: &Section) -> bool {
    section.len() == hol.group().order()
        && section.0.iter().all(|&id| (id as usize) < hol.aut_count())
}

/// Computes `{x^{-1} y : y in s}` and returns it as a section, or `None`
/// when the image does not have exactly one element per translation
/// component. For genuine sections the translate is always a section; the
/// check guards ingested data.
pub fn translate_section(hol: &Holomorph, x: HolElement, s: &Section) -> Option<Section> {
    let n = hol.group().order();
    let xi = hol.inv(x);
    let mut out = vec![u16::MAX; n];
    for b in 0..n {
        let z = hol.mul(xi, s.element(b));
        if out[z.trans] != u16::MAX {
            return None;
        }
        out[z.trans] = z.aut as u16;
    }
    Some(Section(out))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClosureError {
    #[error("seed is not a valid section for this group")]
    InvalidSeed,
    #[error("translate of section {section} by its element above {element} is not a section")]
    NotASection { section: usize, element: usize },
    #[error("closure exceeded {0} sections")]
    FamilyTooLarge(usize),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("family contains no sections")]
    Empty,
    #[error("section {0} is malformed for this group")]
    InvalidSection(usize),
    #[error("sections {0} and {1} are equal; family members must be pairwise distinct")]
    DuplicateSections(usize, usize),
    #[error("translate of section {section} by its element above {element} is missing from the family")]
    NotClosed { section: usize, element: usize },
    #[error("translate of section {section} by its element above {element} is not a section")]
    NotASection { section: usize, element: usize },
}

const MAX_FAMILY_SECTIONS: usize = u16::MAX as usize;

/// A d-brace in combinatorial form: pairwise-distinct sections indexed by
/// the dynamical parameter, plus the translation table
/// `phi[l][a] = index of (a, f_l(a))^{-1} S_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DBraceFamily {
    sections: Vec<Section>,
    phi: Vec<Vec<u16>>,
}

impl DBraceFamily {
    /// Validates an explicit section list: pairwise distinct, structurally
    /// valid, and closed under translation. Builds `phi` in the process.
    pub fn from_sections(hol: &Holomorph, sections: Vec<Section>) -> Result<Self, FamilyError> {
        if sections.is_empty() {
            return Err(FamilyError::Empty);
        }
        let n = hol.group().order();
        let mut index: HashMap<&Section, usize> = HashMap::with_capacity(sections.len());
        for (i, s) in sections.iter().enumerate() {
            if !is_valid_section(hol, s) {
                return Err(FamilyError::InvalidSection(i));
            }
            if let Some(&j) = index.get(s) {
                return Err(FamilyError::DuplicateSections(j, i));
            }
            index.insert(s, i);
        }
        let mut phi = Vec::with_capacity(sections.len());
        for (i, s) in sections.iter().enumerate() {
            let mut row = Vec::with_capacity(n);
            for a in 0..n {
                let t = translate_section(hol, s.element(a), s)
                    .ok_or(FamilyError::NotASection { section: i, element: a })?;
                let &j = index
                    .get(&t)
                    .ok_or(FamilyError::NotClosed { section: i, element: a })?;
                row.push(j as u16);
            }
            phi.push(row);
        }
        Ok(Self { sections, phi })
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    pub fn phi(&self, lambda: usize, a: usize) -> usize {
        self.phi[lambda][a] as usize
    }

    pub fn phi_rows(&self) -> &[Vec<u16>] {
        &self.phi
    }

    /// Parameters in the image of `phi`, sorted and deduplicated.
    pub fn im_phi(&self) -> Vec<usize> {
        let mut seen = vec![false; self.sections.len()];
        for row in &self.phi {
            for &v in row {
                seen[v as usize] = true;
            }
        }
        (0..self.sections.len()).filter(|&i| seen[i]).collect()
    }

    /// Sections sorted lexicographically with `phi` remapped to match.
    pub fn canonicalized(&self) -> Self {
        let mut order: Vec<usize> = (0..self.sections.len()).collect();
        order.sort_by(|&i, &j| self.sections[i].cmp(&self.sections[j]));
        let mut rank = vec![0u16; order.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new as u16;
        }
        let sections = order.iter().map(|&old| self.sections[old].clone()).collect();
        let phi = order
            .iter()
            .map(|&old| self.phi[old].iter().map(|&v| rank[v as usize]).collect())
            .collect();
        Self { sections, phi }
    }

    pub fn is_canonical(&self) -> bool {
        self.sections.windows(2).all(|w| w[0] < w[1])
    }
}

/// Smallest family containing `seed` that is closed under `x^{-1}S` for
/// `x in S`. Not canonicalized; the seed stays at index 0.
pub fn close_family(hol: &Holomorph, seed: &Section) -> Result<DBraceFamily, ClosureError> {
    if !is_valid_section(hol, seed) {
        return Err(ClosureError::InvalidSeed);
    }
    let n = hol.group().order();
    let mut sections = vec![seed.clone()];
    let mut index: HashMap<Section, u16> = HashMap::new();
    index.insert(seed.clone(), 0);
    let mut phi: Vec<Vec<u16>> = Vec::new();
    let mut next = 0usize;
    while next < sections.len() {
        let s = sections[next].clone();
        let mut row = Vec::with_capacity(n);
        for a in 0..n {
            let t = translate_section(hol, s.element(a), &s)
                .ok_or(ClosureError::NotASection { section: next, element: a })?;
            let id = match index.get(&t) {
                Some(&id) => id,
                None => {
                    if sections.len() >= MAX_FAMILY_SECTIONS {
                        return Err(ClosureError::FamilyTooLarge(MAX_FAMILY_SECTIONS));
                    }
                    let id = sections.len() as u16;
                    sections.push(t.clone());
                    index.insert(t, id);
                    id
                }
            };
            row.push(id);
        }
        phi.push(row);
        next += 1;
    }
    Ok(DBraceFamily { sections, phi })
}

/// Census mode: closures of single seeds, or every union-closed family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyMode {
    Minimal,
    All,
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerateLimits {
    /// Bound on the seed space `|Aut(A)|^|A|`.
    pub max_seed_space: u128,
    /// Bound on `|Aut(A)|`.
    pub max_aut: usize,
    /// Bound on the number of output families (union closure can explode).
    pub max_families: usize,
}

impl Default for EnumerateLimits {
    fn default() -> Self {
        Self {
            max_seed_space: 2_000_000,
            max_aut: 10_000,
            max_families: 2_000_000,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("automorphism count {count} exceeds the bound {bound}")]
    AutBound { count: usize, bound: usize },
    #[error("seed space |Aut|^|A| = {space} exceeds the bound {bound}")]
    SeedSpace { space: u128, bound: u128 },
    #[error("family count exceeded the bound {0}")]
    FamilyBound(usize),
    #[error(transparent)]
    Closure(#[from] ClosureError),
}

/// Enumerates d-brace families on the group, deduplicated as canonical
/// section sets and sorted deterministically.
pub fn enumerate_families(
    hol: &Holomorph,
    mode: FamilyMode,
    limits: &EnumerateLimits,
) -> Result<Vec<DBraceFamily>, EnumerateError> {
    let k = hol.aut_count();
    let n = hol.group().order();
    if k > limits.max_aut {
        return Err(EnumerateError::AutBound {
            count: k,
            bound: limits.max_aut,
        });
    }
    let space = (k as u128).pow(n as u32);
    if space > limits.max_seed_space {
        return Err(EnumerateError::SeedSpace {
            space,
            bound: limits.max_seed_space,
        });
    }
    let total = space as u64;

    let seed_at = |mut idx: u64| -> Section {
        let mut auts = vec![0u16; n];
        for slot in auts.iter_mut() {
            *slot = (idx % k as u64) as u16;
            idx /= k as u64;
        }
        Section(auts)
    };

    let merged: Result<HashMap<Vec<Section>, Vec<Vec<u16>>>, ClosureError> = (0..total)
        .into_par_iter()
        .fold(
            || Ok(HashMap::new()),
            |acc: Result<HashMap<Vec<Section>, Vec<Vec<u16>>>, ClosureError>, idx| {
                let mut map = acc?;
                let fam = close_family(hol, &seed_at(idx))?.canonicalized();
                map.entry(fam.sections).or_insert(fam.phi);
                Ok(map)
            },
        )
        .reduce(
            || Ok(HashMap::new()),
            |a, b| {
                let (mut big, small) = match (a, b) {
                    (Ok(x), Ok(y)) => {
                        if x.len() >= y.len() {
                            (x, y)
                        } else {
                            (y, x)
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                };
                for (k, v) in small {
                    big.entry(k).or_insert(v);
                }
                Ok(big)
            },
        );
    let merged = merged?;
    if merged.len() > limits.max_families {
        return Err(EnumerateError::FamilyBound(limits.max_families));
    }

    let mut families: Vec<DBraceFamily> = merged
        .into_iter()
        .map(|(sections, phi)| DBraceFamily { sections, phi })
        .collect();
    families.sort_by(|a, b| a.sections.cmp(&b.sections));

    match mode {
        FamilyMode::Minimal => Ok(families),
        FamilyMode::All => close_under_unions(hol, families, limits.max_families),
    }
}

/// Every union of minimal families is again closed; walk the union lattice.
fn close_under_unions(
    hol: &Holomorph,
    minimal: Vec<DBraceFamily>,
    max_families: usize,
) -> Result<Vec<DBraceFamily>, EnumerateError> {
    let mut seen: HashMap<Vec<Section>, Vec<Vec<u16>>> = HashMap::new();
    let mut queue: Vec<Vec<Section>> = Vec::new();
    for fam in &minimal {
        if seen
            .insert(fam.sections.clone(), fam.phi.clone())
            .is_none()
        {
            queue.push(fam.sections.clone());
        }
    }
    while let Some(base) = queue.pop() {
        for m in &minimal {
            let mut union = base.clone();
            union.extend(m.sections.iter().cloned());
            union.sort();
            union.dedup();
            if seen.contains_key(&union) {
                continue;
            }
            if seen.len() >= max_families {
                return Err(EnumerateError::FamilyBound(max_families));
            }
            let fam = DBraceFamily::from_sections(hol, union.clone())
                .expect("union of closed families is closed");
            seen.insert(union.clone(), fam.phi);
            queue.push(union);
        }
    }
    let mut families: Vec<DBraceFamily> = seen
        .into_iter()
        .map(|(sections, phi)| DBraceFamily { sections, phi })
        .collect();
    families.sort_by(|a, b| a.sections.cmp(&b.sections));
    Ok(families)
}

/// A d-brace in multiplicative form: one `|A| x |A|` table per dynamical
/// parameter and the parameter-update map `phi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DBrace {
    pub order: usize,
    /// `mult[l][a][b] = a ._l b`.
    pub mult: Vec<Vec<Vec<usize>>>,
    /// `phi[l][a]`.
    pub phi: Vec<Vec<usize>>,
}

impl DBrace {
    pub fn param_count(&self) -> usize {
        self.mult.len()
    }

    /// `a *_l b = a ._l b + a + b`.
    pub fn star(&self, g: &FiniteAbelianGroup, lambda: usize, a: usize, b: usize) -> usize {
        g.add(g.add(self.mult[lambda][a][b], a), b)
    }

    /// Image table of `gamma_l(b): a -> a ._l b + a`.
    pub fn gamma(&self, g: &FiniteAbelianGroup, lambda: usize, b: usize) -> Vec<usize> {
        (0..self.order)
            .map(|a| g.add(self.mult[lambda][a][b], a))
            .collect()
    }
}

/// `mult[l][a][b] = f_l(b)(a) - a`, `phi` copied from the family.
pub fn family_to_dbrace(hol: &Holomorph, fam: &DBraceFamily) -> DBrace {
    let g = hol.group();
    let n = g.order();
    let mult = fam
        .sections
        .iter()
        .map(|s| {
            (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| g.sub(hol.apply_aut(s.aut_at(b), a), a))
                        .collect()
                })
                .collect()
        })
        .collect();
    let phi = fam
        .phi
        .iter()
        .map(|row| row.iter().map(|&v| v as usize).collect())
        .collect();
    DBrace {
        order: n,
        mult,
        phi,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DBraceToFamilyError {
    #[error("gamma_{lambda}({a}) violates right distributivity (not an automorphism)")]
    NonAdditiveGamma { lambda: usize, a: usize },
    #[error("parameters {0} and {1} share one section; sections must be pairwise distinct")]
    DuplicateSections(usize, usize),
    #[error("phi[{lambda}][{a}] disagrees with the section translate (not a valid d-brace)")]
    PhiMismatch { lambda: usize, a: usize },
    #[error("phi entry out of range at [{lambda}][{a}]")]
    PhiRange { lambda: usize, a: usize },
}

/// Rebuilds the section family of a d-brace: `f_l(a) = gamma_l(a)` must be
/// an automorphism, sections must be pairwise distinct, and the d-brace's
/// `phi` must agree with the translation-defined one.
pub fn dbrace_to_family(
    hol: &Holomorph,
    d: &DBrace,
) -> Result<DBraceFamily, DBraceToFamilyError> {
    let g = hol.group();
    let n = g.order();
    let mut sections = Vec::with_capacity(d.param_count());
    for (lambda, table) in d.mult.iter().enumerate() {
        let mut auts = Vec::with_capacity(n);
        for a in 0..n {
            let images: Vec<u16> = (0..n).map(|x| g.add(table[x][a], x) as u16).collect();
            let id = hol
                .aut_id(&images)
                .ok_or(DBraceToFamilyError::NonAdditiveGamma { lambda, a })?;
            auts.push(id as u16);
        }
        sections.push(Section(auts));
    }
    for i in 0..sections.len() {
        for j in i + 1..sections.len() {
            if sections[i] == sections[j] {
                return Err(DBraceToFamilyError::DuplicateSections(i, j));
            }
        }
    }
    // phi is forced by translation; the d-brace must agree.
    let index: HashMap<&Section, usize> = sections.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut phi = Vec::with_capacity(sections.len());
    for (lambda, s) in sections.iter().enumerate() {
        let mut row = Vec::with_capacity(n);
        for a in 0..n {
            let declared = d.phi[lambda][a];
            if declared >= sections.len() {
                return Err(DBraceToFamilyError::PhiRange { lambda, a });
            }
            let t = translate_section(hol, s.element(a), s)
                .expect("translate of a section is a section");
            match index.get(&t) {
                Some(&j) if j == declared => row.push(j as u16),
                _ => return Err(DBraceToFamilyError::PhiMismatch { lambda, a }),
            }
        }
        phi.push(row);
    }
    Ok(DBraceFamily { sections, phi })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DBraceShapeError {
    #[error("d-brace has no parameters")]
    Empty,
    #[error("table or phi dimensions are inconsistent at parameter {0}")]
    Dimensions(usize),
    #[error("entry out of range at parameter {0}")]
    Range(usize),
}

fn check_dbrace_shape(d: &DBrace) -> Result<(), DBraceShapeError> {
    let h = d.param_count();
    if h == 0 {
        return Err(DBraceShapeError::Empty);
    }
    let n = d.order;
    if d.phi.len() != h {
        return Err(DBraceShapeError::Dimensions(0));
    }
    for lambda in 0..h {
        let t = &d.mult[lambda];
        if t.len() != n || t.iter().any(|row| row.len() != n) || d.phi[lambda].len() != n {
            return Err(DBraceShapeError::Dimensions(lambda));
        }
        if t.iter().any(|row| row.iter().any(|&v| v >= n))
            || d.phi[lambda].iter().any(|&v| v >= h)
        {
            return Err(DBraceShapeError::Range(lambda));
        }
    }
    Ok(())
}

/// Verifies the d-brace axioms and their documented consequences.
///
/// Witness layouts: axiom checks use `(lambda, a, b, c)`; bijectivity checks
/// use `(lambda, b)`; the cross-parameter checks use `(lambda, mu, a, b)` or
/// `(lambda, a, b)` as noted per check name.
pub fn check_dbrace(
    g: &FiniteAbelianGroup,
    d: &DBrace,
    opts: &CheckOptions,
) -> Result<Report, DBraceShapeError> {
    check_dbrace_shape(d)?;
    let n = d.order;
    let h = d.param_count();
    let cap = opts.max_witnesses;
    let mut report = Report::default();

    // Quadruple-indexed checks, sampled only above the exhaustive limit.
    let quad_cases = (h as u64) * (n as u64).pow(3);
    let exhaustive = quad_cases <= opts.exhaustive_limit;
    let mut rd = Check::new("axiom-1-right-distributive");
    let mut dyn2 = Check::new("axiom-2-dynamical");
    let mut star_assoc = Check::new("eq14-star-compatibility");
    rd.sampled = !exhaustive;
    dyn2.sampled = !exhaustive;
    star_assoc.sampled = !exhaustive;

    let run_quad = |lambda: usize, a: usize, b: usize, c: usize,
                        rd: &mut Check,
                        dyn2: &mut Check,
                        star_assoc: &mut Check| {
        let t = &d.mult[lambda];
        let phi_lc = d.phi[lambda][c];
        rd.record(
            t[g.add(a, b)][c] == g.add(t[a][c], t[b][c]),
            || vec![lambda, a, b, c],
            cap,
        );
        let lhs = t[a][g.add(g.add(t[b][c], b), c)];
        let ab = d.mult[phi_lc][a][b];
        let rhs = g.add(g.add(t[ab][c], ab), t[a][c]);
        dyn2.record(lhs == rhs, || vec![lambda, a, b, c], cap);
        let lhs_star = d.star(g, lambda, d.star(g, phi_lc, a, b), c);
        let rhs_star = d.star(g, lambda, a, d.star(g, lambda, b, c));
        star_assoc.record(lhs_star == rhs_star, || vec![lambda, a, b, c], cap);
    };
    if exhaustive {
        for lambda in 0..h {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        run_quad(lambda, a, b, c, &mut rd, &mut dyn2, &mut star_assoc);
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.exhaustive_limit {
            let (lambda, a, b, c) = (
                rng.gen_range(0..h),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
            run_quad(lambda, a, b, c, &mut rd, &mut dyn2, &mut star_assoc);
        }
    }

    let mut gamma_bij = Check::new("axiom-3-gamma-bijective");
    let mut quasi = Check::new("star-right-quasigroup");
    for lambda in 0..h {
        for b in 0..n {
            let mut seen_g = vec![false; n];
            let mut seen_s = vec![false; n];
            let mut ok_g = true;
            let mut ok_s = true;
            for a in 0..n {
                let gv = g.add(d.mult[lambda][a][b], a);
                ok_g &= !std::mem::replace(&mut seen_g[gv], true);
                let sv = d.star(g, lambda, a, b);
                ok_s &= !std::mem::replace(&mut seen_s[sv], true);
            }
            gamma_bij.record(ok_g, || vec![lambda, b], cap);
            quasi.record(ok_s, || vec![lambda, b], cap);
        }
    }

    // a *_l b = a *_m b iff a ._l b = a ._m b (pointwise, parameters paired).
    let mut star_dot = Check::new("eq15-star-dot-agreement");
    for lambda in 0..h {
        for mu in 0..h {
            for a in 0..n {
                for b in 0..n {
                    let star_eq = d.star(g, lambda, a, b) == d.star(g, mu, a, b);
                    let dot_eq = d.mult[lambda][a][b] == d.mult[mu][a][b];
                    star_dot.record(star_eq == dot_eq, || vec![lambda, mu, a, b], cap);
                }
            }
        }
    }

    // ._{phi(phi(l,a),b)} = ._{phi(l, b *_l a)} as tables; witness (l,a,b).
    let mut phi_trans = Check::new("eq16-parameter-translation");
    let mut gamma_params = Check::new("prop36-gamma-parameters");
    for lambda in 0..h {
        for a in 0..n {
            for b in 0..n {
                let left = d.phi[d.phi[lambda][a]][b];
                let right = d.phi[lambda][d.star(g, lambda, b, a)];
                phi_trans.record(
                    d.mult[left] == d.mult[right],
                    || vec![lambda, a, b],
                    cap,
                );
                let same_gamma = (0..n).all(|c| {
                    (0..n).all(|x| g.add(d.mult[left][x][c], x) == g.add(d.mult[right][x][c], x))
                });
                gamma_params.record(same_gamma, || vec![lambda, a, b], cap);
            }
        }
    }

    let mut zero_left = Check::new("prop35-zero-times-a");
    let mut zero_right = Check::new("prop35-a-times-zero-imphi");
    for lambda in 0..h {
        for a in 0..n {
            zero_left.record(d.mult[lambda][0][a] == 0, || vec![lambda, a], cap);
            zero_right.record(
                d.mult[d.phi[lambda][0]][a][0] == 0,
                || vec![lambda, a],
                cap,
            );
        }
    }

    report.push(rd);
    report.push(dyn2);
    report.push(gamma_bij);
    report.push(quasi);
    report.push(star_assoc);
    report.push(star_dot);
    report.push(phi_trans);
    report.push(gamma_params);
    report.push(zero_left);
    report.push(zero_right);
    Ok(report)
}

/// Restricts the family to `Im phi`; every multiplication of the result is
/// zero-symmetric and the result is itself closed.
pub fn zero_symmetric_core(hol: &Holomorph, fam: &DBraceFamily) -> DBraceFamily {
    let _ = hol;
    let keep = fam.im_phi();
    let mut rank = vec![u16::MAX; fam.len()];
    for (new, &old) in keep.iter().enumerate() {
        rank[old] = new as u16;
    }
    let sections = keep.iter().map(|&i| fam.sections[i].clone()).collect();
    let phi = keep
        .iter()
        .map(|&i| fam.phi[i].iter().map(|&v| rank[v as usize]).collect())
        .collect();
    DBraceFamily { sections, phi }
}

/// Witness of a d-brace isomorphism: an additive bijection on elements and
/// the induced parameter bijection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DBraceIso {
    /// Image table of the group isomorphism `F`.
    pub f_images: Vec<u16>,
    /// `p[lambda]` = parameter of the second d-brace matched to `lambda`.
    pub p: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IsoError {
    #[error("parameters {0} and {1} carry identical tables; isomorphism search needs distinct tables")]
    DuplicateTables(usize, usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Exhaustive isomorphism search per the d-brace isomorphism conditions:
/// `F` additive bijective, `F(a ._l b) = F(a) ._{p(l)} F(b)`, and
/// `p(phi(l,a)) = phi'(p(l), F(a))`. Deterministic: the lexicographically
/// least `F` admitting a match wins.
pub fn dbrace_isomorphic(
    ga: &FiniteAbelianGroup,
    da: &DBrace,
    gb: &FiniteAbelianGroup,
    db: &DBrace,
) -> Result<Option<DBraceIso>, IsoError> {
    if ga.order() != gb.order() || da.param_count() != db.param_count() {
        return Ok(None);
    }
    let n = ga.order();
    let h = da.param_count();
    for d in [da, db] {
        for i in 0..h {
            for j in i + 1..h {
                if d.mult[i] == d.mult[j] {
                    return Err(IsoError::DuplicateTables(i, j));
                }
            }
        }
    }
    let table_index: HashMap<&Vec<Vec<usize>>, usize> =
        db.mult.iter().enumerate().map(|(i, t)| (t, i)).collect();

    for f in isomorphisms_between(ga, gb)? {
        let mut finv = vec![0usize; n];
        for (x, &fx) in f.iter().enumerate() {
            finv[fx as usize] = x;
        }
        let mut p = Vec::with_capacity(h);
        let mut ok = true;
        for lambda in 0..h {
            let transported: Vec<Vec<usize>> = (0..n)
                .map(|x| {
                    (0..n)
                        .map(|y| f[da.mult[lambda][finv[x]][finv[y]]] as usize)
                        .collect()
                })
                .collect();
            match table_index.get(&transported) {
                Some(&mu) => p.push(mu),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let phi_ok = (0..h).all(|lambda| {
            (0..n).all(|a| p[da.phi[lambda][a]] == db.phi[p[lambda]][f[a] as usize])
        });
        if phi_ok {
            return Ok(Some(DBraceIso { f_images: f, p }));
        }
    }
    Ok(None)
}

/// Transports a family along an automorphism of the group:
/// `S -> {(F(a), F f(a) F^{-1})}` with `phi` carried through.
pub fn conjugate_family(hol: &Holomorph, f_aut: usize, fam: &DBraceFamily) -> DBraceFamily {
    let n = hol.group().order();
    let fi = hol.invert_aut(f_aut);
    let mut sections = Vec::with_capacity(fam.len());
    for s in &fam.sections {
        let mut t = vec![0u16; n];
        for a in 0..n {
            let conj = hol.compose_auts(hol.compose_auts(f_aut, s.aut_at(a)), fi);
            t[hol.apply_aut(f_aut, a)] = conj as u16;
        }
        sections.push(Section(t));
    }
    let phi = fam
        .phi
        .iter()
        .map(|row| {
            let mut new_row = vec![0u16; n];
            for (a, &v) in row.iter().enumerate() {
                new_row[hol.apply_aut(f_aut, a)] = v;
            }
            new_row
        })
        .collect();
    DBraceFamily { sections, phi }
}

/// Canonical representative of the isomorphism class of a family under the
/// automorphism action: the least canonicalized conjugate.
pub fn family_iso_canonical(hol: &Holomorph, fam: &DBraceFamily) -> DBraceFamily {
    (0..hol.aut_count())
        .map(|f| conjugate_family(hol, f, fam).canonicalized())
        .min_by(|a, b| a.sections.cmp(&b.sections))
        .expect("automorphism catalog is nonempty")
}

/// Keeps one family per isomorphism class: exactly those whose canonical
/// conjugate is themselves. Input must be canonicalized families.
pub fn dedupe_by_isomorphism(hol: &Holomorph, families: Vec<DBraceFamily>) -> Vec<DBraceFamily> {
    families
        .into_par_iter()
        .filter(|fam| family_iso_canonical(hol, fam).sections == fam.sections)
        .collect()
}
