use std::fmt;
use std::str::FromStr;

use crate::numerics_core::{LogComplex, Real};

/// Which closed-form approximation produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaTag {
    Outer,
    Origin,
    Interior,
    Intermediate,
    Band,
    TurnRight,
    TurnLeft,
}

impl FormulaTag {
    pub const ALL: [FormulaTag; 7] = [
        FormulaTag::Outer,
        FormulaTag::Origin,
        FormulaTag::Interior,
        FormulaTag::Intermediate,
        FormulaTag::Band,
        FormulaTag::TurnRight,
        FormulaTag::TurnLeft,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FormulaTag::Outer => "outer",
            FormulaTag::Origin => "origin",
            FormulaTag::Interior => "interior",
            FormulaTag::Intermediate => "intermediate",
            FormulaTag::Band => "band",
            FormulaTag::TurnRight => "turn_right",
            FormulaTag::TurnLeft => "turn_left",
        }
    }

    /// The a-priori relative error order of the formula.
    pub fn error_order(self) -> ErrorOrder {
        match self {
            FormulaTag::Outer | FormulaTag::Interior => ErrorOrder::InvN,
            FormulaTag::Origin => ErrorOrder::InvNExpSmall,
            FormulaTag::Intermediate | FormulaTag::Band => ErrorOrder::InvSqrtN,
            FormulaTag::TurnRight | FormulaTag::TurnLeft => ErrorOrder::InvSqrtNAiry,
        }
    }
}

impl fmt::Display for FormulaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormulaTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        FormulaTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown formula tag {s:?}"))
    }
}

/// Claimed relative error order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorOrder {
    /// O(1/n)
    InvN,
    /// O(1/n) plus an exponentially small remainder
    InvNExpSmall,
    /// O(n^{-1/2})
    InvSqrtN,
    /// O(n^{-1/2}) on the Airy term plus O(n^{-2/3}) Ai'
    InvSqrtNAiry,
}

impl ErrorOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorOrder::InvN => "O(1/n)",
            ErrorOrder::InvNExpSmall => "O(1/n)+exp-small",
            ErrorOrder::InvSqrtN => "O(n^-1/2)",
            ErrorOrder::InvSqrtNAiry => "O(n^-1/2) with Airy",
        }
    }

    /// The power p in O(n^{-p}).
    pub fn power(self) -> f64 {
        match self {
            ErrorOrder::InvN | ErrorOrder::InvNExpSmall => 1.0,
            ErrorOrder::InvSqrtN | ErrorOrder::InvSqrtNAiry => 0.5,
        }
    }

    /// n^{-p} with unit constant.
    pub fn magnitude(self, n: usize) -> f64 {
        (n as f64).powf(-self.power())
    }
}

impl fmt::Display for ErrorOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An approximate value of C_n(x) and the formula it came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxResult<T: Real> {
    pub value: LogComplex<T>,
    pub formula: FormulaTag,
    pub error_order: ErrorOrder,
}

impl<T: Real> ApproxResult<T> {
    pub fn new(value: LogComplex<T>, formula: FormulaTag) -> Self {
        Self { value, formula, error_order: formula.error_order() }
    }
}
