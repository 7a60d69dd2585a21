//! The test-algebra zoo used by the acceptance suite.

use std::sync::Arc;

use fdrep_core::ar::knit;
use fdrep_core::{zoo, Algebra, Module, Result};

/// The seven test algebras with short names.
pub fn test_zoo() -> Vec<(&'static str, Arc<Algebra>)> {
    vec![
        ("A2", zoo::a2(2)),
        ("A3", zoo::a3(2)),
        ("A3rss", zoo::a3_rad_square_zero(2)),
        ("F2[x]/x^2", zoo::dual_numbers(2)),
        ("F3[x]/x^3", zoo::truncated(3, 3)),
        ("Nak2", zoo::nakayama2(2)),
        ("Kronecker", zoo::kronecker(2)),
    ]
}

/// Indecomposables found by knitting, at most `bound` of them.
pub fn indecomposables(alg: &Arc<Algebra>, bound: usize) -> Result<Vec<Module>> {
    let q = knit(alg, bound)?;
    let mut mods = q.modules(alg);
    mods.truncate(bound);
    Ok(mods)
}

/// A test algebra with its knitted indecomposables.
pub struct Universe {
    pub name: &'static str,
    pub alg: Arc<Algebra>,
    pub mods: Vec<Module>,
}

impl Universe {
    pub fn zoo(kronecker_bound: usize) -> Result<Vec<Universe>> {
        test_zoo()
            .into_iter()
            .map(|(name, alg)| {
                let mods = indecomposables(&alg, if name == "Kronecker" { kronecker_bound } else { 64 })?;
                Ok(Universe { name, alg, mods })
            })
            .collect()
    }
}

