//! Witness certificates behind `milnor certify`.
//!
//! For each supported group the certificate fixes the prime l, forms the
//! degree-four class u4 = Q0(x1*x2*x3) in the mod-l cohomology of B(Z/l)^3,
//! and certifies that Q1(u4) is nonzero.  Milnor primitives vanish on
//! classes of algebraic cycles, so a nonzero Q1 value is an obstruction to
//! u4 being algebraic.  The computation runs through the commutator
//! recursion and is cross-checked against the independent derivation
//! formula; any disagreement is reported as an internal defect rather than
//! a certificate.

use milnor_core::{milnor, milnor_derivation, parse_element, Bidegree, RingContext};
use serde::Serialize;

use crate::CliError;

/// The supported groups, each with its associated torsion prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    G2,
    F4,
    E8,
}

impl Group {
    pub fn from_name(name: &str) -> Option<Group> {
        match name.trim().to_ascii_uppercase().as_str() {
            "G2" => Some(Group::G2),
            "F4" => Some(Group::F4),
            "E8" => Some(Group::E8),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Group::G2 => "G2",
            Group::F4 => "F4",
            Group::E8 => "E8",
        }
    }

    pub fn prime(self) -> u32 {
        match self {
            Group::G2 => 2,
            Group::F4 => 3,
            Group::E8 => 5,
        }
    }

    pub const ALL: [Group; 3] = [Group::G2, Group::F4, Group::E8];
}

/// A fully evaluated witness certificate.  Serialized with exactly this key
/// order, one JSON object per certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub group: String,
    pub prime: u32,
    pub rank: u32,
    pub witness_class: String,
    pub u4: String,
    pub u4_bidegree: [i64; 2],
    pub q1_of_u4: String,
    pub q1_bidegree: [i64; 2],
    pub term_count: usize,
    pub nonzero: bool,
    pub conclusion: String,
}

/// Compute the certificate for one group.  Fails with an internal error if
/// the two Milnor implementations disagree or a bidegree comes out wrong;
/// those can only happen if the library itself is defective.
pub fn certify(group: Group) -> Result<Certificate, CliError> {
    let p = group.prime();
    let ctx = RingContext::new(p, 3).expect("2, 3, 5 are prime");
    let witness = parse_element(&ctx, "x1*x2*x3").expect("fixed input");

    let u4 = milnor(0, &witness);
    let q1 = milnor(1, &u4);
    let cross = milnor_derivation(1, &milnor_derivation(0, &witness));
    if q1 != cross {
        return Err(CliError::Internal(format!(
            "Milnor implementations disagree at l = {p}: recursion gave {q1}, derivation gave {cross}"
        )));
    }

    let u4_bidegree = u4
        .bidegree()
        .map_err(|e| CliError::Internal(format!("u4 at l = {p}: {e}")))?;
    if u4_bidegree != Bidegree::new(4, 3) {
        return Err(CliError::Internal(format!(
            "u4 at l = {p} sits in {u4_bidegree}, expected (4, 3)"
        )));
    }
    let expected_q1 = Bidegree::new(2 * p as i64 + 3, p as i64 + 2);
    let q1_bidegree = q1
        .bidegree()
        .map_err(|e| CliError::Internal(format!("Q1(u4) at l = {p}: {e}")))?;
    if q1_bidegree != expected_q1 {
        return Err(CliError::Internal(format!(
            "Q1(u4) at l = {p} sits in {q1_bidegree}, expected {expected_q1}"
        )));
    }

    let nonzero = !q1.is_zero();
    let conclusion = if nonzero {
        format!(
            "Q1(u4) = Q1(Q0(x1*x2*x3)) is nonzero mod {p}. Milnor primitives vanish on \
             classes of algebraic cycles, so u4 supports a nonvanishing Q1 and cannot be \
             algebraic: this certifies the non-algebraicity obstruction for {} at l = {p}.",
            group.name()
        )
    } else {
        format!(
            "Q1(u4) vanishes mod {p}; no obstruction is certified for {} at l = {p}.",
            group.name()
        )
    };

    Ok(Certificate {
        group: group.name().to_string(),
        prime: p,
        rank: 3,
        witness_class: witness.to_string(),
        u4: u4.to_string(),
        u4_bidegree: [u4_bidegree.degree, u4_bidegree.weight],
        q1_of_u4: q1.to_string(),
        q1_bidegree: [q1_bidegree.degree, q1_bidegree.weight],
        term_count: q1.term_count(),
        nonzero,
        conclusion,
    })
}

/// Multi-line human rendering of a certificate.
pub fn render_human(cert: &Certificate) -> String {
    format!(
        "certificate for {} (l = {})\n\
         \x20 witness class:  {}  on B(Z/{})^{}\n\
         \x20 u4 = Q0(witness) = {}   [bidegree ({}, {})]\n\
         \x20 Q1(u4) = {}\n\
         \x20 bidegree:       ({}, {})\n\
         \x20 nonzero terms:  {}\n\
         \x20 status:         {}\n\
         \x20 {}",
        cert.group,
        cert.prime,
        cert.witness_class,
        cert.prime,
        cert.rank,
        cert.u4,
        cert.u4_bidegree[0],
        cert.u4_bidegree[1],
        cert.q1_of_u4,
        cert.q1_bidegree[0],
        cert.q1_bidegree[1],
        cert.term_count,
        if cert.nonzero { "NONZERO (obstruction certified)" } else { "ZERO (no obstruction)" },
        cert.conclusion,
    )
}
