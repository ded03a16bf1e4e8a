//! Simplicity classification shared by Leibniz and Hu-Liu algebras.
//!
//! An algebra with annihilator `N` is simple when `N != 0` and its only
//! ideals are `0`, `N` and `L`. With ideals read as invariant subspaces of
//! the multiplication operators this is equivalent to: `N` irreducible,
//! `L/N` irreducible, and `N` without an invariant complement.

use alloc::string::String;

use crate::error::Result;
use crate::invariant::{
    invariant_complement, test_irreducible, Irreducibility, IrreducibilityProof, OperatorSet, SearchBudget,
};
use crate::linalg::Subspace;

/// The sub-test a verdict came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// invariant subspaces strictly inside the annihilator
    Annihilator,
    /// invariant subspaces strictly between the annihilator and the algebra
    Quotient,
    /// invariant complements of the annihilator
    Complement,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Annihilator => "annihilator",
            Stage::Quotient => "quotient",
            Stage::Complement => "complement",
        }
    }
}

/// The chain of checks behind a `Simple` verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleCertificate {
    pub annihilator: Subspace,
    pub annihilator_irreducible: IrreducibilityProof,
    /// `None` when the annihilator is the whole algebra.
    pub quotient_irreducible: Option<IrreducibilityProof>,
    /// The complement system was infeasible (`false` only when skipped
    /// because the annihilator is the whole algebra).
    pub complement_infeasible: bool,
}

impl SimpleCertificate {
    /// The annihilator equals the whole algebra, so the ideal lattice is
    /// just `{0, L}`.
    pub fn annihilator_is_whole(&self) -> bool {
        self.annihilator.is_full()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotSimpleCertificate {
    AnnihilatorZero,
    /// An ideal different from `0`, the annihilator and the whole algebra.
    ProperIdeal {
        ideal: Subspace,
        found_by: Stage,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplicityVerdict {
    Simple(SimpleCertificate),
    NotSimple(NotSimpleCertificate),
    /// The randomized irreducibility search ran out of budget.
    Unknown {
        stage: Stage,
        attempts: usize,
    },
}

impl SimplicityVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            SimplicityVerdict::Simple(_) => "Simple",
            SimplicityVerdict::NotSimple(_) => "NotSimple",
            SimplicityVerdict::Unknown { .. } => "Unknown",
        }
    }

    pub fn is_simple(&self) -> bool {
        matches!(self, SimplicityVerdict::Simple(_))
    }

    /// The ideal exhibited by a `NotSimple` verdict, if any.
    pub fn certificate_ideal(&self) -> Option<&Subspace> {
        match self {
            SimplicityVerdict::NotSimple(NotSimpleCertificate::ProperIdeal { ideal, .. }) => Some(ideal),
            _ => None,
        }
    }

    /// Human-readable one-line reason.
    pub fn reason(&self) -> String {
        use alloc::format;
        match self {
            SimplicityVerdict::Simple(c) if c.annihilator_is_whole() => {
                String::from("annihilator is the whole algebra and has no proper invariant subspace")
            }
            SimplicityVerdict::Simple(_) => {
                String::from("annihilator and quotient are irreducible and the annihilator has no invariant complement")
            }
            SimplicityVerdict::NotSimple(NotSimpleCertificate::AnnihilatorZero) => String::from("annihilator is zero"),
            SimplicityVerdict::NotSimple(NotSimpleCertificate::ProperIdeal { ideal, found_by }) => format!(
                "found an ideal of dimension {} other than 0, the annihilator and the algebra ({} stage)",
                ideal.dim(),
                found_by.name()
            ),
            SimplicityVerdict::Unknown { stage, attempts } => format!(
                "irreducibility search inconclusive at the {} stage after {} attempts",
                stage.name(),
                attempts
            ),
        }
    }
}

/// Classifies the ideal lattice generated by `ops` against `annihilator`.
pub fn classify(ops: &OperatorSet, annihilator: &Subspace, budget: &SearchBudget) -> Result<SimplicityVerdict> {
    if annihilator.is_zero() {
        return Ok(SimplicityVerdict::NotSimple(NotSimpleCertificate::AnnihilatorZero));
    }
    let mut unknown = None;

    let inner = ops.restrict(annihilator)?;
    let annihilator_proof = match test_irreducible(&inner, budget) {
        Irreducibility::Irreducible(p) => Some(p),
        Irreducibility::Reducible(sub) => {
            let ideal = Subspace::span(
                &sub.basis()
                    .iter()
                    .map(|c| crate::linalg::combine(annihilator.ambient_dim(), c, annihilator.basis()))
                    .collect::<alloc::vec::Vec<_>>(),
                annihilator.ambient_dim(),
            )?;
            return Ok(SimplicityVerdict::NotSimple(NotSimpleCertificate::ProperIdeal {
                ideal,
                found_by: Stage::Annihilator,
            }));
        }
        Irreducibility::Inconclusive { attempts } => {
            unknown = Some((Stage::Annihilator, attempts));
            None
        }
    };

    if annihilator.is_full() {
        return Ok(match (annihilator_proof, unknown) {
            (Some(p), _) => SimplicityVerdict::Simple(SimpleCertificate {
                annihilator: annihilator.clone(),
                annihilator_irreducible: p,
                quotient_irreducible: None,
                complement_infeasible: false,
            }),
            (None, Some((stage, attempts))) => SimplicityVerdict::Unknown { stage, attempts },
            (None, None) => unreachable!("irreducibility test returned no outcome"),
        });
    }

    let (outer, map) = ops.quotient(annihilator)?;
    let quotient_proof = match test_irreducible(&outer, budget) {
        Irreducibility::Irreducible(p) => Some(p),
        Irreducibility::Reducible(sub) => {
            return Ok(SimplicityVerdict::NotSimple(NotSimpleCertificate::ProperIdeal {
                ideal: map.preimage(&sub),
                found_by: Stage::Quotient,
            }));
        }
        Irreducibility::Inconclusive { attempts } => {
            unknown.get_or_insert((Stage::Quotient, attempts));
            None
        }
    };

    if let Some(complement) = invariant_complement(ops, annihilator)? {
        return Ok(SimplicityVerdict::NotSimple(NotSimpleCertificate::ProperIdeal {
            ideal: complement,
            found_by: Stage::Complement,
        }));
    }

    match (annihilator_proof, quotient_proof, unknown) {
        (Some(a), Some(q), None) => Ok(SimplicityVerdict::Simple(SimpleCertificate {
            annihilator: annihilator.clone(),
            annihilator_irreducible: a,
            quotient_irreducible: Some(q),
            complement_infeasible: true,
        })),
        (_, _, Some((stage, attempts))) => Ok(SimplicityVerdict::Unknown { stage, attempts }),
        _ => unreachable!("every irreducibility test returned an outcome"),
    }
}
