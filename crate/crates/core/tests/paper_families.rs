//! The worked Z_2 x Z_2 families, checked cell-for-cell against an
//! independent naive implementation of the holomorph translation.

use std::collections::{BTreeMap, BTreeSet};

use dybrace::report::CheckOptions;
use dybrace::{
    build_graph, check_dbrace, check_graph_props, check_nondegeneracy, check_weight_zero,
    dbrace_to_family, dyb_from_dbrace, enumerate_families, family_to_dbrace, verify_dyb,
    verify_unitary, DBraceFamily, EnumerateLimits, FamilyMode, FiniteAbelianGroup, Holomorph,
    Section,
};

fn hol22() -> Holomorph {
    Holomorph::new(FiniteAbelianGroup::new(&[2, 2]).unwrap()).unwrap()
}

/// Element index of the coordinate pair used in the tables below.
fn idx(p: (usize, usize)) -> usize {
    p.0 + 2 * p.1
}

/// Automorphism ids in the lexicographic catalog of Z_2 x Z_2.
const ID: u16 = 0;
const TAU_SIGMA: u16 = 1; // swaps (0,1) <-> (1,1)
const PI: u16 = 2; // swaps (0,1) <-> (1,0)
const SIGMA_INV: u16 = 3; // (0,1) -> (1,1) -> (1,0) -> (0,1)
const SIGMA: u16 = 4; // (0,1) -> (1,0) -> (1,1) -> (0,1)
const TAU: u16 = 5; // swaps (1,0) <-> (1,1)

fn catalog_sanity(hol: &Holomorph) {
    let expect: [(u16, [usize; 4]); 6] = [
        (ID, [0, 1, 2, 3]),
        (TAU_SIGMA, [0, 1, 3, 2]),
        (PI, [0, 2, 1, 3]),
        (SIGMA_INV, [0, 2, 3, 1]),
        (SIGMA, [0, 3, 1, 2]),
        (TAU, [0, 3, 2, 1]),
    ];
    for (id, images) in expect {
        let actual: Vec<usize> = hol
            .aut_images(id as usize)
            .iter()
            .map(|&v| v as usize)
            .collect();
        assert_eq!(actual, images.to_vec(), "aut id {id}");
    }
}

/// Sections entry-by-entry over element indices 0..3 = (0,0),(1,0),(0,1),(1,1).
fn s_lambda1() -> Section {
    Section(vec![ID, TAU, TAU, ID])
}
fn s_lambda2() -> Section {
    Section(vec![ID, ID, TAU, TAU])
}
fn s_lambda3() -> Section {
    Section(vec![ID, PI, PI, ID])
}
fn s_mu1() -> Section {
    Section(vec![ID, SIGMA, TAU, ID])
}
fn s_mu2() -> Section {
    Section(vec![ID, TAU_SIGMA, TAU, TAU])
}
fn s_mu3() -> Section {
    Section(vec![ID, TAU_SIGMA, SIGMA_INV, SIGMA_INV])
}
fn s_mu4() -> Section {
    Section(vec![ID, TAU, SIGMA, ID])
}

/// Converts a table written in the element order (0,0),(0,1),(1,0),(1,1) of
/// coordinate pairs into an index-addressed table.
fn table(rows: [[(usize, usize); 4]; 4]) -> Vec<Vec<usize>> {
    let order = [(0, 0), (0, 1), (1, 0), (1, 1)];
    let mut out = vec![vec![0usize; 4]; 4];
    for (i, row) in rows.iter().enumerate() {
        for (j, &cell) in row.iter().enumerate() {
            out[idx(order[i])][idx(order[j])] = idx(cell);
        }
    }
    out
}

#[test]
fn named_families_satisfy_conditions_and_match_tables() {
    let hol = hol22();
    catalog_sanity(&hol);
    let opts = CheckOptions::default();

    let lam = DBraceFamily::from_sections(&hol, vec![s_lambda1(), s_lambda2()]).unwrap();
    let single = DBraceFamily::from_sections(&hol, vec![s_lambda3()]).unwrap();
    let mu = DBraceFamily::from_sections(&hol, vec![s_mu1(), s_mu2(), s_mu3(), s_mu4()]).unwrap();

    let z00 = (0, 0);
    let expect_l1 = table([
        [z00, z00, z00, z00],
        [z00, z00, z00, z00],
        [z00, (0, 1), (0, 1), z00],
        [z00, (0, 1), (0, 1), z00],
    ]);
    let expect_l2 = table([
        [z00, z00, z00, z00],
        [z00, z00, z00, z00],
        [z00, (0, 1), z00, (0, 1)],
        [z00, (0, 1), z00, (0, 1)],
    ]);
    let expect_l3 = table([
        [z00, z00, z00, z00],
        [z00, (1, 1), (1, 1), z00],
        [z00, (1, 1), (1, 1), z00],
        [z00, z00, z00, z00],
    ]);
    let expect_m1 = table([
        [z00, z00, z00, z00],
        [z00, z00, (1, 1), z00],
        [z00, (0, 1), (0, 1), z00],
        [z00, (0, 1), (1, 0), z00],
    ]);
    let expect_m2 = table([
        [z00, z00, z00, z00],
        [z00, z00, (1, 0), z00],
        [z00, (0, 1), z00, (0, 1)],
        [z00, (0, 1), (1, 0), (0, 1)],
    ]);
    let expect_m3 = table([
        [z00, z00, z00, z00],
        [z00, (1, 0), (1, 0), (1, 0)],
        [z00, (1, 1), z00, (1, 1)],
        [z00, (0, 1), (1, 0), (0, 1)],
    ]);
    let expect_m4 = table([
        [z00, z00, z00, z00],
        [z00, (1, 1), z00, z00],
        [z00, (0, 1), (0, 1), z00],
        [z00, (1, 0), (1, 0), z00],
    ]);

    let d = family_to_dbrace(&hol, &lam);
    assert_eq!(d.mult[0], expect_l1);
    assert_eq!(d.mult[1], expect_l2);
    let d3 = family_to_dbrace(&hol, &single);
    assert_eq!(d3.mult[0], expect_l3);
    let dm = family_to_dbrace(&hol, &mu);
    assert_eq!(dm.mult[0], expect_m1);
    assert_eq!(dm.mult[1], expect_m2);
    assert_eq!(dm.mult[2], expect_m3);
    assert_eq!(dm.mult[3], expect_m4);

    for (fam, d) in [(&lam, &d), (&single, &d3), (&mu, &dm)] {
        let report = check_dbrace(hol.group(), d, &opts).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(dbrace_to_family(&hol, d).unwrap(), *fam);
        let m = dyb_from_dbrace(hol.group(), d).unwrap();
        assert!(verify_dyb(&m, &opts).passed());
        assert!(verify_unitary(&m, &opts).passed());
        assert!(check_nondegeneracy(&m, &opts).right.passed);
        assert!(check_weight_zero(&m, &opts).passed);
        let graph = build_graph(fam);
        let greport = check_graph_props(&hol, fam, &graph, &opts);
        assert!(greport.passed(), "{greport}");
    }
}

#[test]
fn lambda_pair_graph_matches_figure() {
    let hol = hol22();
    let fam = DBraceFamily::from_sections(&hol, vec![s_lambda1(), s_lambda2()]).unwrap();
    let graph = build_graph(&fam);
    assert_eq!(graph.vertices, 2);
    assert_eq!(graph.edge_count(), 8);
    // Loops at S_l1 labeled (0,0),(1,1); at S_l2 labeled (0,0),(1,0);
    // double arrows both ways with the remaining labels.
    assert_eq!(graph.targets[0], vec![0, 1, 1, 0]);
    assert_eq!(graph.targets[1], vec![1, 1, 0, 0]);
}

#[test]
fn single_section_and_mu_family_graphs() {
    let hol = hol22();
    let single = DBraceFamily::from_sections(&hol, vec![s_lambda3()]).unwrap();
    let graph = build_graph(&single);
    assert_eq!(graph.vertices, 1);
    assert_eq!(graph.targets[0], vec![0, 0, 0, 0]);

    let mu = DBraceFamily::from_sections(&hol, vec![s_mu1(), s_mu2(), s_mu3(), s_mu4()]).unwrap();
    let graph = build_graph(&mu);
    assert_eq!(graph.vertices, 4);
    assert_eq!(graph.edge_count(), 16);
    // Complete looped digraph: each row visits all four vertices.
    for v in 0..4 {
        let mut row = graph.targets[v].clone();
        row.sort_unstable();
        assert_eq!(row, vec![0, 1, 2, 3], "row of vertex {v}");
        assert!(graph.has_loop(v));
    }
}

#[test]
fn census_contains_the_named_families() {
    let hol = hol22();
    let fams =
        enumerate_families(&hol, FamilyMode::Minimal, &EnumerateLimits::default()).unwrap();
    let sets: BTreeSet<Vec<Section>> = fams.iter().map(|f| f.sections().to_vec()).collect();
    for named in [
        vec![s_lambda1(), s_lambda2()],
        vec![s_lambda3()],
        vec![s_mu1(), s_mu2(), s_mu3(), s_mu4()],
    ] {
        let mut sorted = named;
        sorted.sort();
        assert!(sets.contains(&sorted), "census misses {sorted:?}");
    }
}

// ---------------------------------------------------------------------------
// Independent oracle: a from-scratch closure enumeration that represents
// sections as maps from translation component to automorphism image table
// and multiplies holomorph elements directly.
// ---------------------------------------------------------------------------

type NaiveAut = Vec<usize>;
type NaiveSection = BTreeMap<usize, NaiveAut>;

fn naive_compose(f: &NaiveAut, g: &NaiveAut) -> NaiveAut {
    g.iter().map(|&x| f[x]).collect()
}

fn naive_invert(f: &NaiveAut) -> NaiveAut {
    let mut out = vec![0usize; f.len()];
    for (x, &fx) in f.iter().enumerate() {
        out[fx] = x;
    }
    out
}

/// `(a,f)^{-1} (b,g)` on pairs, from the definitions alone.
fn naive_translate(g: &FiniteAbelianGroup, a: usize, f: &NaiveAut, s: &NaiveSection) -> NaiveSection {
    let fi = naive_invert(f);
    let inv_trans = g.neg(fi[a]);
    let mut out = BTreeMap::new();
    for (&b, gb) in s {
        let trans = g.add(inv_trans, fi[b]);
        let aut = naive_compose(&fi, gb);
        assert!(out.insert(trans, aut).is_none(), "translate not a section");
    }
    out
}

fn naive_closure(g: &FiniteAbelianGroup, seed: NaiveSection) -> BTreeSet<NaiveSection> {
    let mut set = BTreeSet::new();
    set.insert(seed.clone());
    let mut queue = vec![seed];
    while let Some(s) = queue.pop() {
        for (&a, f) in &s {
            let t = naive_translate(g, a, &f.clone(), &s);
            if set.insert(t.clone()) {
                queue.push(t);
            }
        }
    }
    set
}

fn naive_all_sections(g: &FiniteAbelianGroup, auts: &[NaiveAut]) -> Vec<NaiveSection> {
    let n = g.order();
    let k = auts.len();
    let mut out = Vec::new();
    let total = (k as u64).pow(n as u32);
    for mut code in 0..total {
        let mut s = BTreeMap::new();
        for a in 0..n {
            s.insert(a, auts[(code % k as u64) as usize].clone());
            code /= k as u64;
        }
        out.push(s);
    }
    out
}

/// Brute-force additive bijections, independent of the catalog order.
fn naive_automorphisms(g: &FiniteAbelianGroup) -> Vec<NaiveAut> {
    let n = g.order();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        if (0..n).all(|x| (0..n).all(|y| p[g.add(x, y)] == g.add(p[x], p[y]))) {
            out.push(p.to_vec());
        }
    });
    out
}

fn permute(v: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, visit);
        v.swap(k, i);
    }
}

fn family_to_naive(hol: &Holomorph, fam: &DBraceFamily) -> BTreeSet<NaiveSection> {
    fam.sections()
        .iter()
        .map(|s| {
            (0..s.len())
                .map(|a| {
                    (
                        a,
                        hol.aut_images(s.aut_at(a))
                            .iter()
                            .map(|&v| v as usize)
                            .collect::<NaiveAut>(),
                    )
                })
                .collect()
        })
        .collect()
}

#[test]
fn minimal_census_matches_naive_oracle_on_z2z2_and_z3() {
    for orders in [vec![3u32], vec![2, 2]] {
        let group = FiniteAbelianGroup::new(&orders).unwrap();
        let auts = naive_automorphisms(&group);
        let mut expected: BTreeSet<BTreeSet<NaiveSection>> = BTreeSet::new();
        for seed in naive_all_sections(&group, &auts) {
            expected.insert(naive_closure(&group, seed));
        }

        let hol = Holomorph::new(group).unwrap();
        let fams =
            enumerate_families(&hol, FamilyMode::Minimal, &EnumerateLimits::default()).unwrap();
        let actual: BTreeSet<BTreeSet<NaiveSection>> =
            fams.iter().map(|f| family_to_naive(&hol, f)).collect();
        assert_eq!(actual, expected, "orders {orders:?}");
    }
}

#[test]
fn all_mode_matches_closed_subset_oracle_on_z3() {
    let group = FiniteAbelianGroup::new(&[3]).unwrap();
    let auts = naive_automorphisms(&group);
    let sections = naive_all_sections(&group, &auts);
    assert_eq!(sections.len(), 8);

    // Every nonempty subset closed under translation by its own elements.
    let mut expected: BTreeSet<BTreeSet<NaiveSection>> = BTreeSet::new();
    for mask in 1u32..(1 << sections.len()) {
        let subset: BTreeSet<NaiveSection> = sections
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, s)| s.clone())
            .collect();
        let closed = subset.iter().all(|s| {
            s.iter()
                .all(|(&a, f)| subset.contains(&naive_translate(&group, a, f, s)))
        });
        if closed {
            expected.insert(subset);
        }
    }
    assert_eq!(expected.len(), 26);

    let hol = Holomorph::new(group).unwrap();
    let fams = enumerate_families(&hol, FamilyMode::All, &EnumerateLimits::default()).unwrap();
    let actual: BTreeSet<BTreeSet<NaiveSection>> =
        fams.iter().map(|f| family_to_naive(&hol, f)).collect();
    assert_eq!(actual, expected);
}
