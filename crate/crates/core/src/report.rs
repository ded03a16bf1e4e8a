//! Verification reports and falsification witnesses.

use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{basis_index, Vector};

/// The identity or closure condition a witness falsifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    /// `(xy)z = x(yz)`
    Associativity,
    /// `A0 A0 ⊆ A0`
    EvenClosed,
    /// `A0 A1 + A1 A0 ⊆ A1`
    OddBimodule,
    /// `A1 A1 = 0`
    OddSquareZero,
    /// `a·(b·m) = (ab)·m`
    LeftAction,
    /// `(m·a)·b = m·(ab)`
    RightAction,
    /// `(a·m)·b = a·(m·b)`
    ActionsCommute,
    /// `<<x,y>,z> = <x,<y,z>> + <<x,z>,y>`
    RightLeibniz,
    /// `[x,y] = -[y,x]`
    Antisymmetry,
    /// `[[x,y],z] + [[y,z],x] + [[z,x],y] = 0`
    Jacobi,
    /// `<x,[y,z]> = <x,<y,z>>`
    AngleAbsorbsSquare,
    /// `[<x,x>,y] = <<x,x>,y>`
    SquaresActAlike,
    /// `<[x,y],z> + [<y,z>,x] + [y,<x,z>] = 0`
    ThreeTermSum,
    /// `[<x,y>,z] + [z,[x,y]] + [z,<y,x>] + <z,<x,y>> = 0`
    FourTermSum,
    /// `[a,b] = 0` for `a, b` in the annihilator
    AnnihilatorAbelian,
    /// `phi(<x,y>) = <phi(x),phi(y)>`
    AngleHomomorphism,
    /// `phi([x,y]) = [phi(x),phi(y)]`
    SquareHomomorphism,
    /// `phi(x) = 0` for a nonzero `x`
    Injectivity,
    /// `<x,y>` leaves a subspace that should be closed
    AngleClosure,
    /// `[x,y]` leaves a subspace that should be closed
    SquareClosure,
    /// a bracket computed through a matrix realization disagrees with the coordinate bracket
    RealizationAgreement,
}

impl Clause {
    pub fn name(self) -> &'static str {
        match self {
            Clause::Associativity => "associativity",
            Clause::EvenClosed => "even-closed",
            Clause::OddBimodule => "odd-bimodule",
            Clause::OddSquareZero => "odd-square-zero",
            Clause::LeftAction => "left-action",
            Clause::RightAction => "right-action",
            Clause::ActionsCommute => "actions-commute",
            Clause::RightLeibniz => "right-leibniz",
            Clause::Antisymmetry => "antisymmetry",
            Clause::Jacobi => "jacobi",
            Clause::AngleAbsorbsSquare => "angle-absorbs-square",
            Clause::SquaresActAlike => "squares-act-alike",
            Clause::ThreeTermSum => "three-term-sum",
            Clause::FourTermSum => "four-term-sum",
            Clause::AnnihilatorAbelian => "annihilator-abelian",
            Clause::AngleHomomorphism => "angle-homomorphism",
            Clause::SquareHomomorphism => "square-homomorphism",
            Clause::Injectivity => "injectivity",
            Clause::AngleClosure => "angle-closure",
            Clause::SquareClosure => "square-closure",
            Clause::RealizationAgreement => "realization-agreement",
        }
    }

    pub fn from_name(name: &str) -> Option<Clause> {
        ALL_CLAUSES.iter().copied().find(|c| c.name() == name)
    }
}

const ALL_CLAUSES: [Clause; 21] = [
    Clause::Associativity,
    Clause::EvenClosed,
    Clause::OddBimodule,
    Clause::OddSquareZero,
    Clause::LeftAction,
    Clause::RightAction,
    Clause::ActionsCommute,
    Clause::RightLeibniz,
    Clause::Antisymmetry,
    Clause::Jacobi,
    Clause::AngleAbsorbsSquare,
    Clause::SquaresActAlike,
    Clause::ThreeTermSum,
    Clause::FourTermSum,
    Clause::AnnihilatorAbelian,
    Clause::AngleHomomorphism,
    Clause::SquareHomomorphism,
    Clause::Injectivity,
    Clause::AngleClosure,
    Clause::SquareClosure,
    Clause::RealizationAgreement,
];

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A concrete counterexample: the inputs at which `lhs != rhs`.
///
/// For closure clauses `lhs` is the offending product and `rhs` its
/// component inside the allowed subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub clause: Clause,
    pub inputs: Vec<Vector>,
    pub lhs: Vector,
    pub rhs: Vector,
}

impl Witness {
    /// Indices of the inputs when each is a standard basis vector.
    pub fn basis_indices(&self) -> Option<Vec<usize>> {
        self.inputs.iter().map(|v| basis_index(v)).collect()
    }
}

/// Outcome of an exhaustive verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    witness: Option<Witness>,
    checked: usize,
}

impl Report {
    pub fn passed(checked: usize) -> Self {
        Report { witness: None, checked }
    }

    pub fn failed(witness: Witness, checked: usize) -> Self {
        Report {
            witness: Some(witness),
            checked,
        }
    }

    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    /// Number of elementary instances evaluated before stopping.
    pub fn checked(&self) -> usize {
        self.checked
    }

    /// Chains two verifications: keeps the first failure, sums the counts.
    pub fn and_then(self, next: impl FnOnce() -> Report) -> Report {
        if !self.holds() {
            return self;
        }
        let next = next();
        Report {
            witness: next.witness,
            checked: self.checked + next.checked,
        }
    }
}
