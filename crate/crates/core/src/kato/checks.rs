//! Pointwise checks of the key lemma, the line corollary and both theorems.

use serde::Serialize;

use super::ctilde::{ctilde_lemma, ctilde_operator, hodge_ctilde_pair, Extended, ExtendedReal};
use super::split::{check_unit, contract, decompose_line, outer, FormGeometry};
use super::verdict::{Branch, KatoVerdict, Theorem};
use crate::conformal::Subspace;
use crate::error::{Error, Result};
use crate::symbols::OperatorSpec;
use crate::tensor::{hermitian_eigen, CMatrix, CVector, LinearMap, C64};

/// Relative threshold below which `‖C(u)‖` counts as zero: `‖C(u)‖ <= BRANCH_TOL · √scale`.
pub const BRANCH_TOL: f64 = 1e-10;

/// Relative threshold for the degenerate case `d|φ| = 0`.
pub const DEGENERATE_TOL: f64 = 1e-14;

fn is_small(norm: f64, scale: f64) -> bool {
    norm <= BRANCH_TOL * scale.sqrt()
}

/// `|d|φ||` surrogate: the covector `w_i = Re⟨u_i, φ⟩` and its norm divided by `|φ|`.
fn gradient_of_norm(u: &CVector, phi: &CVector, n: usize) -> (Vec<f64>, f64) {
    let d = phi.len();
    let w: Vec<f64> = (0..n).map(|i| (0..d).map(|e| (phi[e].conj() * u[i * d + e]).re).sum()).collect();
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    (w, norm / phi.norm())
}

/// Lemma data: `C : U → Y` with a fixed subspace `U₂` and `a = max Spec(ĈĈ*)`.
#[derive(Debug, Clone)]
pub struct KeyLemma {
    c_map: CMatrix,
    u2_basis: CMatrix,
    a: f64,
    top: CVector,
}

impl KeyLemma {
    pub fn new(c_map: &CMatrix, u2: &Subspace) -> Result<Self> {
        if c_map.ncols() != u2.ambient_dim() {
            return Err(Error::ShapeMismatch("subspace does not live in the domain of C".into()));
        }
        let restricted = c_map * u2.basis();
        let gram = restricted.adjoint() * &restricted;
        if gram.nrows() == 0 {
            return Err(Error::ZeroOperator);
        }
        let (spectrum, vectors) = hermitian_eigen(&gram)?;
        let a = spectrum.max().unwrap_or(0.0);
        if a <= 1e-12 * c_map.norm().powi(2).max(f64::MIN_POSITIVE) {
            return Err(Error::ZeroOperator);
        }
        let top = u2.basis() * vectors.column(vectors.ncols() - 1);
        Ok(Self { c_map: c_map.clone(), u2_basis: u2.basis().clone(), a, top })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn operator(&self) -> &CMatrix {
        &self.c_map
    }

    pub fn u2_basis(&self) -> &CMatrix {
        &self.u2_basis
    }

    /// Unit vector of `U₂` with `|C(u₂)|² = a`.
    pub fn top_vector(&self) -> &CVector {
        &self.top
    }

    pub fn check(&self, u1: &CVector, u2: &CVector, c: f64) -> KatoVerdict {
        let scale = u1.norm_squared() + u2.norm_squared();
        let total = &self.c_map * (u1 + u2);
        let cu1 = &self.c_map * u1;
        let vanishing = is_small(total.norm(), scale);
        let ctilde = ctilde_lemma(c, self.a, vanishing);
        let lhs = u2.norm_squared() + c * total.norm_squared();
        let rhs = ctilde.to_f64() * cu1.norm_squared();
        KatoVerdict::new(Theorem::KeyLemma, Branch::from_vanishing(vanishing), c, ctilde, lhs, rhs, scale)
    }
}

pub fn check_key_lemma(
    c_map: &LinearMap,
    u2_space: &Subspace,
    u1: &CVector,
    u2: &CVector,
    c: f64,
) -> Result<KatoVerdict> {
    Ok(KeyLemma::new(c_map.entries(), u2_space)?.check(u1, u2, c))
}

/// Top eigenvector of `ĈĈ*` pulled back to `U₂`, and its ratio `|C u₂|²/|u₂|²`.
pub fn equality_witness(c_map: &LinearMap, u2_space: &Subspace) -> Result<(CVector, f64)> {
    let lemma = KeyLemma::new(c_map.entries(), u2_space)?;
    let u2 = lemma.top.clone();
    let ratio = (c_map.entries() * &u2).norm_squared() / u2.norm_squared();
    Ok((u2, ratio))
}

/// Extreme eigenvalues of `P̃₁P̃₁*` and `P̂₁P̂₁*` for the line `⟨ξ₀⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralBounds {
    pub min_eig_tilde: f64,
    pub max_eig_hat: f64,
    pub epsilon: f64,
    pub rho_squared: f64,
    pub f1_dim: usize,
    pub pass: bool,
}

pub const SPECTRAL_TOL: f64 = 1e-9;

pub fn verify_spectral_bounds(
    op: &OperatorSpec,
    xi0: &[f64],
    epsilon: f64,
    rho_squared: f64,
) -> Result<SpectralBounds> {
    check_unit(xi0)?;
    let p = op.full_symbol.entries();
    let p_xi = op.symbol_matrix(xi0)?;
    let f1 = Subspace::span(&p_xi).basis().clone();
    let tilde = f1.adjoint() * &p_xi;
    let tilde_gram = &tilde * tilde.adjoint();
    let hat_gram = f1.adjoint() * (p * p.adjoint()) * &f1 - &tilde_gram;
    let (min_eig_tilde, max_eig_hat) = if f1.ncols() == 0 {
        (f64::INFINITY, 0.0)
    } else {
        let (ts, _) = hermitian_eigen(&tilde_gram)?;
        let (hs, _) = hermitian_eigen(&hat_gram)?;
        (ts.min().unwrap_or(0.0), hs.max().unwrap_or(0.0))
    };
    let pass = min_eig_tilde >= epsilon - SPECTRAL_TOL && max_eig_hat <= rho_squared - epsilon + SPECTRAL_TOL;
    Ok(SpectralBounds { min_eig_tilde, max_eig_hat, epsilon, rho_squared, f1_dim: f1.ncols(), pass })
}

/// Whether to detect a branch from the data or take it from a known constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchRule {
    #[default]
    Detect,
    /// The vanishing of the differential is known exactly.
    Known(bool),
}

impl BranchRule {
    fn resolve(self, norm: f64, scale: f64) -> bool {
        match self {
            BranchRule::Detect => is_small(norm, scale),
            BranchRule::Known(v) => v,
        }
    }
}

/// An operator together with its constants, ready for repeated checks.
#[derive(Debug, Clone)]
pub struct FoldoOperator {
    pub op: OperatorSpec,
    pub rho_squared: f64,
    pub epsilon: f64,
}

impl FoldoOperator {
    pub fn new(op: OperatorSpec) -> Result<Self> {
        let (rho_squared, epsilon) = op.constants()?;
        ctilde_operator(0.0, rho_squared, epsilon, true)?;
        Ok(Self { op, rho_squared, epsilon })
    }

    pub fn ctilde(&self, c: f64, vanishing: bool) -> ExtendedReal {
        ctilde_operator(c, self.rho_squared, self.epsilon, vanishing).expect("constants validated")
    }

    /// `1 + ε/(ρ²-ε)`, the refined constant.
    pub fn refined_constant(&self) -> f64 {
        1.0 + self.ctilde(0.0, true).to_f64()
    }

    /// Projection onto `Ker P`, which is `id - P*P/ρ²` for a conformal projection.
    pub fn kernel_projector(&self) -> CMatrix {
        let p = self.op.full_symbol.entries();
        let dim = p.ncols();
        CMatrix::identity(dim, dim) - p.adjoint() * p / C64::new(self.rho_squared, 0.0)
    }

    /// `|u|² + c|P(u)|² ≥ (1 + c̃)|d|φ||²` with `ξ₀` the direction of `d|φ|²`.
    pub fn check(&self, u: &CVector, phi: &CVector, c: f64, rule: BranchRule) -> Result<KatoVerdict> {
        if phi.len() != self.op.fiber_dim() || u.len() != self.op.n * phi.len() {
            return Err(Error::ShapeMismatch("u must lie in V* ⊗ E and φ in E".into()));
        }
        if phi.norm() == 0.0 {
            return Err(Error::ZeroSection);
        }
        let pu = self.op.full_symbol.entries() * u;
        let u2 = u.norm_squared();
        let lhs = u2 + c * pu.norm_squared();
        let vanishing = rule.resolve(pu.norm(), u2);
        let ctilde = self.ctilde(c, vanishing);
        let (_, grad) = gradient_of_norm(u, phi, self.op.n);
        if grad <= DEGENERATE_TOL * u.norm() {
            return Ok(KatoVerdict::new(Theorem::Foldo, Branch::Degenerate, c, ctilde, lhs, 0.0, lhs));
        }
        let grad2 = grad * grad;
        let rhs = match ctilde {
            Extended::Finite(t) => (1.0 + t) * grad2,
            // P injective on ξ₀ ⊗ E forces u(ξ₀) = 0 when P(u) = 0.
            Extended::Infinite if grad2 <= BRANCH_TOL * u2 => 0.0,
            Extended::Infinite => f64::INFINITY,
        };
        let scale = lhs.max(rhs);
        Ok(KatoVerdict::new(Theorem::Foldo, Branch::from_vanishing(vanishing), c, ctilde, lhs, rhs, scale))
    }

    /// `|u|² + c|P(u)|² ≥ (1 + εc̃)|u₁|²` for the split along `ξ₀`.
    pub fn check_line_corollary(&self, u: &CVector, xi0: &[f64], c: f64) -> Result<KatoVerdict> {
        let split = decompose_line(u, xi0)?;
        let pu = self.op.full_symbol.entries() * u;
        let u2 = u.norm_squared();
        let vanishing = is_small(pu.norm(), u2);
        let ctilde = self.ctilde(c, vanishing);
        let lhs = u2 + c * pu.norm_squared();
        let line = split.u1.norm_squared();
        let rhs = match ctilde {
            Extended::Finite(t) => (1.0 + t) * line,
            Extended::Infinite if line <= BRANCH_TOL * u2 => 0.0,
            Extended::Infinite => f64::INFINITY,
        };
        Ok(KatoVerdict::new(
            Theorem::LineCorollary,
            Branch::from_vanishing(vanishing),
            c,
            ctilde,
            lhs,
            rhs,
            lhs.max(rhs),
        ))
    }

    /// `u = Π_{Ker P}(ξ₀ ⊗ φ)`, for which `|u|²/|d|φ||²` equals the refined constant.
    pub fn refined_witness(&self, phi: &CVector, xi0: &[f64]) -> Result<CVector> {
        check_unit(xi0)?;
        if phi.norm() == 0.0 {
            return Err(Error::ZeroSection);
        }
        let aligned = outer(xi0, phi);
        Ok(self.kernel_projector() * aligned)
    }
}

pub fn check_theorem_foldo(op: &OperatorSpec, u: &CVector, phi: &CVector, c: f64) -> Result<KatoVerdict> {
    FoldoOperator::new(op.clone())?.check(u, phi, c, BranchRule::Detect)
}

/// Ratio `(|u|² + c|P u|²) / |d|φ||²`; infinite when `d|φ| = 0`.
pub fn kato_ratio(op: &FoldoOperator, u: &CVector, phi: &CVector, c: f64) -> f64 {
    let pu = op.op.full_symbol.entries() * u;
    let (_, grad) = gradient_of_norm(u, phi, op.op.n);
    (u.norm_squared() + c * pu.norm_squared()) / (grad * grad)
}

/// Everything checked at one point for a bundle-valued `k`-form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HodgeCheck {
    pub corollary: KatoVerdict,
    pub theorem: KatoVerdict,
    pub exterior_domination: KatoVerdict,
    pub interior_domination: KatoVerdict,
    pub directional_kato: KatoVerdict,
    pub xi0: Vec<f64>,
}

impl HodgeCheck {
    pub fn verdicts(&self) -> [&KatoVerdict; 5] {
        [&self.corollary, &self.theorem, &self.exterior_domination, &self.interior_domination, &self.directional_kato]
    }
}

fn two_sided(
    theorem: Theorem,
    (d_van, s_van): (bool, bool),
    (c, c_star): (f64, f64),
    ctilde: f64,
    lhs: f64,
    rhs: f64,
) -> KatoVerdict {
    let mut v =
        KatoVerdict::new(theorem, Branch::from_vanishing(d_van), c, Extended::Finite(ctilde), lhs, rhs, lhs.max(rhs));
    v.branch_star = Some(Branch::from_vanishing(s_van));
    v.c_star = Some(c_star);
    v
}

fn plain(theorem: Theorem, lhs: f64, rhs: f64, scale: f64) -> KatoVerdict {
    KatoVerdict::new(theorem, Branch::None, 0.0, Extended::Finite(0.0), lhs, rhs, scale)
}

/// Corollary and theorem forms of the Hodge inequality at `v = ∇φ`.
///
/// `rules` gives the branches of the theorem form (for `dφ` and `d*φ`); the
/// corollary always detects its branches from the partial block norms.
pub fn check_theorem_hodge(
    geometry: &FormGeometry,
    v: &CVector,
    phi: &CVector,
    c: f64,
    c_star: f64,
    rules: (BranchRule, BranchRule),
) -> Result<HodgeCheck> {
    let (n, k) = (geometry.n, geometry.k);
    if phi.len() != geometry.section_dim() || v.len() != geometry.total_dim() {
        return Err(Error::ShapeMismatch("v must lie in V* ⊗ Λ^k ⊗ E and φ in Λ^k ⊗ E".into()));
    }
    if phi.norm() == 0.0 {
        return Err(Error::ZeroSection);
    }
    let (w, grad) = gradient_of_norm(v, phi, n);
    let degenerate = grad <= DEGENERATE_TOL * v.norm();
    let xi0: Vec<f64> = if degenerate {
        let mut e1 = vec![0.0; n];
        e1[0] = 1.0;
        e1
    } else {
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        w.iter().map(|x| x / norm).collect()
    };
    let split = geometry.four_block_decompose(v, &xi0)?;
    let [n11, n12, _, _] = split.norms_sqr();
    let v2 = v.norm_squared();

    let partial_ext = geometry.exterior(&(&split.v12 + &split.v21)).norm_squared();
    let partial_int = geometry.interior(&(&split.v11 + &split.v22)).norm_squared();
    let full_ext = geometry.exterior(v).norm_squared();
    let full_int = geometry.interior(v).norm_squared();

    let cor_branches = (is_small(partial_ext.sqrt(), v2), is_small(partial_int.sqrt(), v2));
    let pair = hodge_ctilde_pair(c, c_star, k, n, cor_branches.0, cor_branches.1)?;
    let corollary = two_sided(
        Theorem::HodgeCorollary,
        cor_branches,
        (c, c_star),
        pair.min,
        v2 + c * partial_ext + c_star * partial_int,
        (1.0 + pair.min) * (n11 + n12),
    );

    let thm_branches = (rules.0.resolve(full_ext.sqrt(), v2), rules.1.resolve(full_int.sqrt(), v2));
    let pair = hodge_ctilde_pair(c, c_star, k, n, thm_branches.0, thm_branches.1)?;
    let lhs = v2 + c * full_ext + c_star * full_int;
    let mut theorem =
        two_sided(Theorem::Hodge, thm_branches, (c, c_star), pair.min, lhs, (1.0 + pair.min) * grad * grad);
    if degenerate {
        theorem.branch = Branch::Degenerate;
        theorem.rhs = 0.0;
        theorem.margin = lhs;
        theorem.scale = lhs;
    }

    let directional = contract(v, &xi0).norm_squared();
    debug_assert!((directional - (n11 + n12)).abs() <= 1e-9 * v2.max(1.0));
    Ok(HodgeCheck {
        corollary,
        theorem,
        exterior_domination: plain(Theorem::ExteriorDomination, full_ext, partial_ext, v2),
        interior_domination: plain(Theorem::InteriorDomination, full_int, partial_int, v2),
        directional_kato: plain(Theorem::DirectionalKato, n11 + n12, if degenerate { 0.0 } else { grad * grad }, v2),
        xi0,
    })
}
