use std::collections::HashSet;

use super::{compose_regular, is_orthogonal, Axis, OrthoError, RegularSpec, RotationFactor};
use crate::exact::Mat3Q;
use crate::pythagoras::PyTriad;

/// Limits for [`factorize_regular`].
#[derive(Debug, Clone, Copy)]
pub struct FactorizeGuard {
    pub max_depth: usize,
    /// Cap on the worst-case number of products, `Σ (3·|pool|)^i` for
    /// `i ≤ depth`.
    pub max_products: u64,
}

impl Default for FactorizeGuard {
    fn default() -> Self {
        Self { max_depth: 6, max_products: 2_000_000 }
    }
}

/// Breadth-first search for a regular-algorithm expansion of `m`.
///
/// Products of up to `max_depth` factors drawn from `pool` (each triad on
/// all three axes), optionally preceded by the inversion, are compared with
/// `m` exactly. The shallowest match is returned. `Ok(None)` only means no
/// product within the depth matched.
pub fn factorize_regular(
    m: &Mat3Q,
    pool: &[PyTriad],
    max_depth: usize,
    guard: FactorizeGuard,
) -> Result<Option<RegularSpec>, OrthoError> {
    if !is_orthogonal(m) {
        return Err(OrthoError::NotOrthogonal);
    }
    if pool.is_empty() {
        return Err(OrthoError::EmptyPool);
    }
    if max_depth > guard.max_depth {
        return Err(OrthoError::GuardExceeded {
            what: "factorization depth",
            limit: guard.max_depth as u64,
            got: max_depth as u64,
        });
    }
    let branching = 3 * pool.len() as u64;
    let worst = (0..=max_depth as u32).try_fold(0u64, |acc, i| acc.checked_add(branching.checked_pow(i)?));
    match worst {
        Some(w) if w <= guard.max_products => {}
        _ => {
            return Err(OrthoError::GuardExceeded {
                what: "factorization search size",
                limit: guard.max_products,
                got: worst.unwrap_or(u64::MAX),
            })
        }
    }

    let moves: Vec<RotationFactor> = pool
        .iter()
        .flat_map(|t| Axis::ALL.map(|axis| RotationFactor::new(axis, t.clone())))
        .collect();
    let move_mats: Vec<Mat3Q> = moves.iter().map(RotationFactor::matrix).collect();
    let negated = m.scale(&-crate::exact::int(1));

    let mut seen: HashSet<Mat3Q> = HashSet::new();
    let mut frontier: Vec<(Mat3Q, Vec<RotationFactor>)> = vec![(Mat3Q::identity(), Vec::new())];
    seen.insert(Mat3Q::identity());
    for depth in 0..=max_depth {
        for (product, factors) in &frontier {
            let inversion = if product == m {
                false
            } else if *product == negated {
                true
            } else {
                continue;
            };
            let spec = RegularSpec::new(inversion, factors.clone());
            debug_assert_eq!(compose_regular(&spec), *m);
            return Ok(Some(spec));
        }
        if depth == max_depth {
            break;
        }
        let mut next = Vec::new();
        for (product, factors) in &frontier {
            for (mv, mat) in moves.iter().zip(&move_mats) {
                let p = product * mat;
                if seen.insert(p.clone()) {
                    let mut f = factors.clone();
                    f.push(mv.clone());
                    next.push((p, f));
                }
            }
        }
        frontier = next;
    }
    Ok(None)
}
