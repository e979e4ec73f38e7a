use std::fmt;

use serde::Serialize;

use super::ctilde::ExtendedReal;

/// Which inequality a verdict checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// `|u₂|² + c|C(u₁+u₂)|² ≥ c̃|C(u₁)|²`.
    KeyLemma,
    /// `|u|² + c|P(u)|² ≥ (1 + εc̃)|u₁|²` for the line split.
    LineCorollary,
    /// `|∇φ|² + c|Dφ|² ≥ (1 + c̃)|d|φ||²`.
    Foldo,
    /// Four-block form with partial norms on both sides.
    HodgeCorollary,
    /// `|∇φ|² + c|dφ|² + c*|d*φ|² ≥ (1 + min{c̃, c̃*})|d|φ||²`.
    Hodge,
    /// `|dφ|² ≥ |ε(v₁₂ + v₂₁)|²`.
    ExteriorDomination,
    /// `|d*φ|² ≥ |ι(v₁₁ + v₂₂)|²`.
    InteriorDomination,
    /// `|v₁₁|² + |v₁₂|² ≥ |d|φ||²`.
    DirectionalKato,
}

impl Theorem {
    pub fn as_str(self) -> &'static str {
        match self {
            Theorem::KeyLemma => "key-lemma",
            Theorem::LineCorollary => "line-corollary",
            Theorem::Foldo => "foldo",
            Theorem::HodgeCorollary => "hodge-corollary",
            Theorem::Hodge => "hodge",
            Theorem::ExteriorDomination => "exterior-domination",
            Theorem::InteriorDomination => "interior-domination",
            Theorem::DirectionalKato => "directional-kato",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Branch of a `c̃` case split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Vanishing,
    Nonvanishing,
    /// `d|φ| = 0` at the point; the inequality holds with right side 0.
    Degenerate,
    /// The inequality has no case split.
    None,
}

impl Branch {
    pub fn from_vanishing(v: bool) -> Self {
        if v {
            Branch::Vanishing
        } else {
            Branch::Nonvanishing
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Vanishing => "vanishing",
            Branch::Nonvanishing => "nonvanishing",
            Branch::Degenerate => "degenerate",
            Branch::None => "none",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One pointwise check of an inequality `lhs ≥ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KatoVerdict {
    pub theorem: Theorem,
    pub branch: Branch,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch_star: Option<Branch>,
    pub c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_star: Option<f64>,
    pub ctilde_used: ExtendedReal,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub scale: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<u64>,
}

impl KatoVerdict {
    pub(crate) fn new(
        theorem: Theorem,
        branch: Branch,
        c: f64,
        ctilde: ExtendedReal,
        lhs: f64,
        rhs: f64,
        scale: f64,
    ) -> Self {
        Self {
            theorem,
            branch,
            branch_star: None,
            c,
            c_star: None,
            ctilde_used: ctilde,
            lhs,
            rhs,
            margin: lhs - rhs,
            scale,
            seed: None,
            sample: None,
        }
    }

    /// `margin / scale`, or the raw margin when the scale is zero.
    pub fn relative_margin(&self) -> f64 {
        if self.scale > 0.0 {
            self.margin / self.scale
        } else {
            self.margin
        }
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.margin >= -tolerance * self.scale
    }

    /// Branch column for tabular output; two-sided verdicts print `d/d*`.
    pub fn branch_label(&self) -> String {
        match self.branch_star {
            Some(b) => format!("{}/{}", self.branch, b),
            None => self.branch.to_string(),
        }
    }

    pub fn with_origin(mut self, seed: u64, sample: u64) -> Self {
        self.seed = Some(seed);
        self.sample = Some(sample);
        self
    }
}
