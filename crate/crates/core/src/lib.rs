//! Enumeration and verification of dynamical braces over finite abelian
//! groups, and of the dynamical Yang-Baxter maps they induce.
//!
//! The library is organized around the correspondence between d-braces on a
//! group `A` and families of subsets of the holomorph `A x| Aut(A)`:
//!
//! * [`group`] - finite abelian groups, automorphism catalogs, holomorph
//!   arithmetic;
//! * [`dbrace`] - sections, closure, family enumeration, multiplication
//!   tables, axiom checks, isomorphism;
//! * [`brace`] - the one-parameter case: regular subgroups and Rump's map;
//! * [`dyb`] - Yang-Baxter map tables and exhaustive verifiers;
//! * [`constructions`] - twisted d-braces from module actions and the
//!   prime-field family with its defect reports;
//! * [`graph`] - the directed multigraph of a family, property checks,
//!   isomorphism, DOT export;
//! * [`json`] - census file records.

pub mod brace;
pub mod constructions;
pub mod dbrace;
pub mod dyb;
pub mod graph;
pub mod group;
pub mod json;
pub mod report;

pub use brace::{
    brace_isomorphism_classes, brace_of_subgroup, check_brace, enumerate_regular_subgroups,
    rump_yb, star_group, subgroup_of_brace, Brace, RegularSubgroup, StarGroup,
};
pub use constructions::{
    field_example, twisted_dbrace, FieldExample, GModuleAction, TwistError,
};
pub use dbrace::{
    check_dbrace, close_family, conjugate_family, dbrace_isomorphic, dbrace_to_family,
    dedupe_by_isomorphism, enumerate_families, family_iso_canonical, family_to_dbrace,
    is_valid_section, translate_section, zero_symmetric_core, DBrace, DBraceFamily, DBraceIso,
    EnumerateError, EnumerateLimits, FamilyMode, Section,
};
pub use dyb::{
    check_nondegeneracy, check_weight_zero, dyb_from_dbrace, dyb_from_left_actions, product_dyb,
    permutation_solution, verify_dyb, verify_unitary, DybMap, LeftActionRule, Nondegeneracy,
};
pub use graph::{
    build_graph, check_graph_props, export_dot, graph_isomorphic, graph_isomorphic_labeled,
    DBraceGraph, GraphEdge,
};
pub use group::{
    enumerate_automorphisms, isomorphisms_between, FiniteAbelianGroup, GroupError, HolElement,
    Holomorph,
};
pub use json::{families_to_json, family_record, load_families, BraceRecord, FamilyRecord,
    GroupRecord, LoadedFamily};
pub use report::{Check, CheckOptions, Report};
