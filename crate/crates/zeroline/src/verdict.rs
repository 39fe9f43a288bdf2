//! Decision outputs shared by the Witt, Milnor and Milnor-Witt layers.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn is_power_of_two(&self) -> bool {
        matches!(self, Order::Finite(n) if n.is_power_of_two())
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorsionInfo {
    pub torsion: bool,
    pub order: Order,
}

impl TorsionInfo {
    pub fn not_torsion() -> TorsionInfo {
        TorsionInfo { torsion: false, order: Order::Infinite }
    }

    pub fn of_order(n: u64) -> TorsionInfo {
        TorsionInfo { torsion: true, order: Order::Finite(n) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NilpotenceInfo {
    pub nilpotent: bool,
    pub exponent: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trilean {
    True,
    False,
    Unknown,
}

impl Trilean {
    pub fn is_true(&self) -> bool {
        matches!(self, Trilean::True)
    }
}

impl fmt::Display for Trilean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trilean::True => write!(f, "true"),
            Trilean::False => write!(f, "false"),
            Trilean::Unknown => write!(f, "unknown"),
        }
    }
}

/// Full decision record: torsion status, nilpotence status, a verified
/// witness exponent when nilpotent, and the chain of facts that produced the
/// decision. `witness_cap` reports the iteration bound used for witness
/// minimization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotenceVerdict {
    pub is_torsion: bool,
    pub torsion_order: Order,
    pub is_nilpotent: Trilean,
    pub witness_exponent: Option<u32>,
    pub witness_cap: u32,
    pub rule_chain: Vec<String>,
}

impl NilpotenceVerdict {
    pub fn check_invariants(&self) {
        if self.is_nilpotent.is_true() {
            assert!(self.witness_exponent.is_some(), "nilpotent verdicts carry a witness");
        }
        if !self.is_torsion {
            assert_eq!(self.torsion_order, Order::Infinite);
        }
    }
}

/// Names for the facts a decision may invoke. The names describe the content
/// of the fact, not where it comes from.
pub mod rules {
    pub const SIGNATURE_KERNEL: &str = "torsion-iff-all-signatures-vanish";
    pub const NONREAL_ALL_TORSION: &str = "nonreal-witt-ring-is-torsion";
    pub const W_TWO_PRIMARY: &str = "witt-torsion-is-two-primary";
    pub const W_NILPOTENT: &str = "witt-nilpotent-iff-even-rank-torsion";
    pub const W_ODD_RANK: &str = "odd-rank-class-has-unit-powers";
    pub const GW_TWO_PRIMARY: &str = "gw-torsion-is-two-primary";
    pub const GW_NILPOTENT: &str = "gw-nilpotent-iff-torsion";
    pub const RANK_OBSTRUCTION: &str = "rank-homomorphism-obstruction";
    pub const ETA_PROJECTION: &str = "eta-multiplication-projects-gw-onto-witt";
    pub const PAIR_COMPONENTS: &str = "pair-nilpotent-iff-both-components-nilpotent";
    pub const SQUARE_COLLECTS: &str = "symbol-square-collects-a-minus-one-factor";
    pub const MOD2_LIFT: &str = "mod-two-nilpotence-lifts-integrally";
    pub const TWO_MINUS_ONE: &str = "twice-minus-one-is-a-square-symbol";
    pub const SIGN_OBSTRUCTION: &str = "real-sign-component-is-not-nilpotent";
    pub const TORSION_PAIR: &str = "torsion-pair-has-even-rank-torsion-witt-part";
}
