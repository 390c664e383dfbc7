//! Braces, their regular subgroups of the holomorph, and Rump's YB map.
//!
//! A brace is the `|H| = 1` specialization of a d-brace. Under the holomorph
//! correspondence a brace is exactly a regular subgroup: a subgroup that is
//! also a section, i.e. one element `(a, f(a))` above each translation
//! component. The induced multiplication is `a.b = f(b)(a) - a` and the
//! attached Yang-Baxter map is
//! `R(a,b) = (gamma(gamma(a)(b))^{-1}(a), gamma(a)(b))`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dbrace::{DBrace, EnumerateError, EnumerateLimits, Section};
use crate::dyb::{dyb_from_dbrace, DybFromDBraceError, DybMap};
use crate::group::{FiniteAbelianGroup, HolElement, Holomorph};
use crate::report::{Check, CheckOptions, Report};

/// A brace multiplication on the group, as an `|A| x |A|` table
/// (`mult[a][b] = a.b`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Brace {
    pub mult: Vec<Vec<usize>>,
}

impl Brace {
    pub fn trivial(n: usize) -> Self {
        Self {
            mult: vec![vec![0; n]; n],
        }
    }

    /// `a*b = a.b + a + b`.
    pub fn star(&self, g: &FiniteAbelianGroup, a: usize, b: usize) -> usize {
        g.add(g.add(self.mult[a][b], a), b)
    }

    /// The `|H| = 1` d-brace with constant parameter map.
    pub fn as_dbrace(&self, n: usize) -> DBrace {
        DBrace {
            order: n,
            mult: vec![self.mult.clone()],
            phi: vec![vec![0; n]],
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BraceShapeError {
    #[error("multiplication table is not |A| x |A|")]
    Dimensions,
    #[error("multiplication entry out of range")]
    Range,
}

/// Verifies the brace axioms plus the zero-product consequences.
/// Witnesses: axiom 1 and 2 use `(a,b,c)`, bijectivity uses `(b)`, the
/// zero-product check uses `(a)`.
pub fn check_brace(
    g: &FiniteAbelianGroup,
    brace: &Brace,
    opts: &CheckOptions,
) -> Result<Report, BraceShapeError> {
    let n = g.order();
    if brace.mult.len() != n || brace.mult.iter().any(|row| row.len() != n) {
        return Err(BraceShapeError::Dimensions);
    }
    if brace.mult.iter().any(|row| row.iter().any(|&v| v >= n)) {
        return Err(BraceShapeError::Range);
    }
    let cap = opts.max_witnesses;
    let t = &brace.mult;
    let mut rd = Check::new("axiom-1-right-distributive");
    let mut ax2 = Check::new("axiom-2-star-associativity");
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                rd.record(
                    t[g.add(a, b)][c] == g.add(t[a][c], t[b][c]),
                    || vec![a, b, c],
                    cap,
                );
                let lhs = t[a][g.add(g.add(t[b][c], b), c)];
                let rhs = g.add(g.add(t[t[a][b]][c], t[a][b]), t[a][c]);
                ax2.record(lhs == rhs, || vec![a, b, c], cap);
            }
        }
    }
    let mut gamma_bij = Check::new("axiom-3-gamma-bijective");
    for b in 0..n {
        let mut seen = vec![false; n];
        let mut ok = true;
        for a in 0..n {
            ok &= !std::mem::replace(&mut seen[g.add(t[a][b], a)], true);
        }
        gamma_bij.record(ok, || vec![b], cap);
    }
    let mut zero = Check::new("prop32-zero-products");
    for a in 0..n {
        zero.record(t[0][a] == 0 && t[a][0] == 0, || vec![a], cap);
    }
    let mut report = Report::default();
    report.push(rd);
    report.push(ax2);
    report.push(gamma_bij);
    report.push(zero);
    Ok(report)
}

/// The group `(A, *)` of a brace, with its unit and inverse witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarGroup {
    pub table: Vec<Vec<usize>>,
    pub unit: usize,
    pub inverses: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum StarError {
    #[error("brace axioms fail:\n{0}")]
    InvalidBrace(Report),
    #[error(transparent)]
    Shape(#[from] BraceShapeError),
    #[error("star operation is not a group: {0}")]
    NotAGroup(&'static str),
}

/// Builds `a*b = a.b + a + b` and verifies it is a group with unit 0.
pub fn star_group(
    g: &FiniteAbelianGroup,
    brace: &Brace,
    opts: &CheckOptions,
) -> Result<StarGroup, StarError> {
    let report = check_brace(g, brace, opts)?;
    if !report.passed() {
        return Err(StarError::InvalidBrace(report));
    }
    let n = g.order();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).map(|b| brace.star(g, a, b)).collect())
        .collect();
    for a in 0..n {
        if table[0][a] != a || table[a][0] != a {
            return Err(StarError::NotAGroup("unit law fails"));
        }
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(StarError::NotAGroup("associativity fails"));
                }
            }
        }
    }
    let mut inverses = vec![usize::MAX; n];
    for a in 0..n {
        match (0..n).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
            Some(b) => inverses[a] = b,
            None => return Err(StarError::NotAGroup("inverse missing")),
        }
    }
    Ok(StarGroup {
        table,
        unit: 0,
        inverses,
    })
}

/// Rump's Yang-Baxter map of a brace, as a plain (`|H| = 1`) map.
pub fn rump_yb(g: &FiniteAbelianGroup, brace: &Brace) -> Result<DybMap, DybFromDBraceError> {
    let mut m = dyb_from_dbrace(g, &brace.as_dbrace(g.order()))?;
    m.phi = None;
    m
        .validate()
        .expect("map built from tables of the right shape");
    Ok(m)
}

/// A regular subgroup of the holomorph: a subgroup with exactly one element
/// above each translation component, stored as that section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularSubgroup {
    pub section: Section,
}

impl RegularSubgroup {
    pub fn elements(&self) -> Vec<HolElement> {
        (0..self.section.len()).map(|a| self.section.element(a)).collect()
    }
}

/// The brace induced by a regular subgroup: `a.b = f(b)(a) - a`.
pub fn brace_of_subgroup(hol: &Holomorph, sub: &RegularSubgroup) -> Brace {
    let g = hol.group();
    let n = g.order();
    let mult = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| g.sub(hol.apply_aut(sub.section.aut_at(b), a), a))
                .collect()
        })
        .collect();
    Brace { mult }
}

/// The section `{(a, gamma(a))}` of a brace; inverse of
/// [`brace_of_subgroup`] on regular subgroups.
pub fn subgroup_of_brace(hol: &Holomorph, brace: &Brace) -> Option<RegularSubgroup> {
    let g = hol.group();
    let n = g.order();
    let mut auts = Vec::with_capacity(n);
    for a in 0..n {
        let images: Vec<u16> = (0..n).map(|x| g.add(brace.mult[x][a], x) as u16).collect();
        auts.push(hol.aut_id(&images)? as u16);
    }
    Some(RegularSubgroup {
        section: Section(auts),
    })
}

/// Enumerates every regular subgroup of the holomorph with its induced
/// brace, in deterministic (lexicographic section) order.
///
/// Depth-first over section entries `f(a)` in index order, propagating the
/// subgroup closure constraint `f(a + f(a)(b)) = f(a) o f(b)` and pruning on
/// the first violation.
pub fn enumerate_regular_subgroups(
    hol: &Holomorph,
    limits: &EnumerateLimits,
) -> Result<Vec<(RegularSubgroup, Brace)>, EnumerateError> {
    if hol.aut_count() > limits.max_aut {
        return Err(EnumerateError::AutBound {
            count: hol.aut_count(),
            bound: limits.max_aut,
        });
    }
    let n = hol.group().order();
    let mut assign: Vec<Option<u16>> = vec![None; n];
    assign[0] = Some(0);
    let mut found: Vec<Section> = Vec::new();
    dfs(hol, &mut assign, &mut vec![0], &mut found);
    found.sort();
    Ok(found
        .into_iter()
        .map(|section| {
            let sub = RegularSubgroup { section };
            let brace = brace_of_subgroup(hol, &sub);
            (sub, brace)
        })
        .collect())
}

fn dfs(
    hol: &Holomorph,
    assign: &mut Vec<Option<u16>>,
    assigned: &mut Vec<usize>,
    found: &mut Vec<Section>,
) {
    let next = match assign.iter().position(|slot| slot.is_none()) {
        Some(a) => a,
        None => {
            found.push(Section(
                assign.iter().map(|slot| slot.unwrap()).collect(),
            ));
            return;
        }
    };
    for f in 0..hol.aut_count() {
        let mut local: Vec<usize> = Vec::new();
        if propagate(hol, assign, assigned, &mut local, next, f as u16) {
            dfs(hol, assign, assigned, found);
        }
        for a in local.into_iter().rev() {
            assign[a] = None;
            assigned.pop();
        }
    }
}

/// Assigns `f(a) = aut` and closes under products with everything already
/// assigned. Returns false (after recording undo state) on conflict.
fn propagate(
    hol: &Holomorph,
    assign: &mut Vec<Option<u16>>,
    assigned: &mut Vec<usize>,
    local: &mut Vec<usize>,
    a: usize,
    aut: u16,
) -> bool {
    let mut queue = vec![(a, aut)];
    while let Some((w, f)) = queue.pop() {
        match assign[w] {
            Some(existing) => {
                if existing != f {
                    return false;
                }
                continue;
            }
            None => {
                assign[w] = Some(f);
                assigned.push(w);
                local.push(w);
            }
        }
        let wx = HolElement::new(w, f as usize);
        // Products in both orders against all assigned elements.
        for i in 0..assigned.len() {
            let v = assigned[i];
            let vx = HolElement::new(v, assign[v].unwrap() as usize);
            for z in [hol.mul(wx, vx), hol.mul(vx, wx)] {
                match assign[z.trans] {
                    Some(existing) => {
                        if existing as usize != z.aut {
                            return false;
                        }
                    }
                    None => queue.push((z.trans, z.aut as u16)),
                }
            }
        }
    }
    true
}

/// Partitions braces over the same group into isomorphism classes: braces
/// are isomorphic when some automorphism `F` satisfies
/// `F(a.b) = F(a).F(b)`. Classes are sorted by first member.
pub fn brace_isomorphism_classes(hol: &Holomorph, braces: &[Brace]) -> Vec<Vec<usize>> {
    let n = hol.group().order();
    let transported = |f: usize, brace: &Brace| -> Vec<Vec<usize>> {
        let fi = hol.invert_aut(f);
        (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        hol.apply_aut(
                            f,
                            brace.mult[hol.apply_aut(fi, x)][hol.apply_aut(fi, y)],
                        )
                    })
                    .collect()
            })
            .collect()
    };
    let keys: Vec<Vec<Vec<usize>>> = braces
        .iter()
        .map(|b| {
            (0..hol.aut_count())
                .map(|f| transported(f, b))
                .min()
                .expect("automorphism catalog is nonempty")
        })
        .collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_keys: Vec<&Vec<Vec<usize>>> = Vec::new();
    for (i, key) in keys.iter().enumerate() {
        match class_keys.iter().position(|&k| k == key) {
            Some(c) => classes[c].push(i),
            None => {
                class_keys.push(key);
                classes.push(vec![i]);
            }
        }
    }
    classes.sort_by_key(|c| c[0]);
    classes
}
