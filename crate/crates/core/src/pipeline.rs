//! The full build: tables through both routes, certification, the derived
//! rule table and the route comparison.

use crate::algebra::HeckeAlgebra;
use crate::basis::Gen;
use crate::group::{FiniteGroup, GroupError};
use crate::rewrite::interpolate::{exact_generator_matrices, InterpolationError, InterpolationStats};
use crate::rewrite::rules::RuleError;
use crate::rewrite::{
    compare_routes, derive_special_rules, generator_coeffs, Budget, Reducer, RewriteError, RuleTable,
};
use crate::verify::{certify_matrices, VerifyError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BuildError {
    #[error("interpolation: {0}")]
    Interpolation(#[from] InterpolationError),
    #[error("certification: {0}")]
    Certification(#[from] VerifyError),
    #[error("group enumeration: {0}")]
    Group(#[from] GroupError),
    #[error("rule derivation: {0}")]
    Rules(#[from] RuleError),
    #[error("reducer: {0}")]
    Rewrite(#[from] RewriteError),
}

impl BuildError {
    pub fn is_budget(&self) -> bool {
        matches!(self, BuildError::Rewrite(e) if e.is_budget())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildConfig {
    pub seed: u64,
    pub budget: Budget,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig { seed: 1, budget: Budget::default() }
    }
}

pub struct Built {
    pub algebra: HeckeAlgebra,
    pub group: FiniteGroup,
    pub rules: RuleTable,
    pub stats: InterpolationStats,
}

/// Interpolated tables, certified; rules derived from them; the reducer's
/// tables, which must agree with the interpolated ones exactly.
pub fn build(cfg: &BuildConfig) -> Result<Built, BuildError> {
    let (route_a, stats) = exact_generator_matrices(cfg.seed)?;
    let [ms, mt, mu] = &route_a;
    certify_matrices(ms, mt, mu)?;
    let alg_a = HeckeAlgebra::new(ms.clone(), mt.clone(), mu.clone());
    let group = FiniteGroup::g13()?;
    let rules = derive_special_rules(&alg_a, &group)?;
    let mut reducer = Reducer::new(rules.clone(), cfg.budget);
    let route_b = generator_coeffs(&mut reducer)?;
    compare_routes(&route_b, &route_a)?;
    let [ms, mt, mu] = route_b;
    let algebra = HeckeAlgebra::new(ms, mt, mu);
    debug_assert!(Gen::ALL.iter().all(|g| algebra.generator(*g).entries == alg_a.generator(*g).entries));
    Ok(Built { algebra, group, rules, stats })
}
