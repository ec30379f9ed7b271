use std::borrow::Borrow;

use crate::engine::Individual;
use crate::error::{Error, Result};
use crate::genome::Genome;

pub fn hamming(a: &Genome, b: &Genome) -> Result<usize> {
    a.hamming(b)
}

/// Mean pairwise Hamming distance normalized by `N/2`, the expected
/// distance between two uniform random genomes.
///
/// Summed over unordered pairs and doubled, which equals the ordered-pair
/// sum `Σ_{i≠j}` over the denominator `M(M-1)·N/2`.
pub fn diversity<G: Borrow<Genome>>(genomes: &[G]) -> Result<f64> {
    let m = genomes.len();
    if m < 2 {
        return Err(Error::TooFew { needed: 2, got: m });
    }
    let n = genomes[0].borrow().len();
    let mut total: u64 = 0;
    for (i, a) in genomes.iter().enumerate() {
        for b in &genomes[i + 1..] {
            total += a.borrow().hamming(b.borrow())? as u64;
        }
    }
    if n == 0 {
        return Ok(0.0);
    }
    Ok(2.0 * total as f64 / (m as f64 * (m as f64 - 1.0) * n as f64 / 2.0))
}

/// The `ceil(fraction·M)` individuals with the highest objective. Ties at
/// the cutoff go to the lower id.
pub fn top_fraction<'a, I>(individuals: I, fraction: f64) -> Result<Vec<&'a Individual>>
where
    I: IntoIterator<Item = &'a Individual>,
{
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidConfig(format!("fraction {fraction} must lie in (0, 1]")));
    }
    let mut all: Vec<&Individual> = individuals.into_iter().collect();
    if all.is_empty() {
        return Err(Error::TooFew { needed: 1, got: 0 });
    }
    // the epsilon keeps 0.2 * 100 from becoming 21 through rounding
    let keep = ((fraction * all.len() as f64) - 1e-9).ceil().max(1.0) as usize;
    all.sort_by(|a, b| b.objective.total_cmp(&a.objective).then(a.id.cmp(&b.id)));
    all.truncate(keep.min(all.len()));
    Ok(all)
}
