//! Parallel integrand evaluation with a fixed-order reduction.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::integrand::Integrand;
use crate::summation::KahanVec;

const CHUNK: usize = 2048;

/// Computes Σ_i weight(i) f(y_i) for i in 0..count.
///
/// Points are evaluated in parallel chunk by chunk; the sum is accumulated
/// sequentially in index order, so the result does not depend on the thread
/// schedule. `fill(i, y)` writes the i-th point; `checkpoint(i + 1, acc)` is
/// called after every point whose 1-based position is listed in `checkpoints`.
pub(crate) fn weighted_reduce<Fill, Weight, Check>(
    f: &dyn Integrand,
    count: usize,
    fill: Fill,
    weight: Weight,
    checkpoints: &[usize],
    mut checkpoint: Check,
) -> Result<Vec<f64>>
where
    Fill: Fn(usize, &mut [f64]) + Sync,
    Weight: Fn(usize) -> f64,
    Check: FnMut(usize, &KahanVec),
{
    let m = f.dim_in();
    let d = f.dim_out();
    let mut acc = KahanVec::zeros(d);
    let mut buffer = vec![0.0; CHUNK.min(count.max(1)) * d];
    let mut start = 0;
    while start < count {
        let len = CHUNK.min(count - start);
        let values = &mut buffer[..len * d];
        values
            .par_chunks_mut(d)
            .enumerate()
            .try_for_each_init(
                || vec![0.0; m],
                |y, (offset, out)| -> Result<()> {
                    let i = start + offset;
                    fill(i, y);
                    f.evaluate(y, out)?;
                    if out.iter().any(|v| !v.is_finite()) {
                        return Err(Error::NonFinite { point: y.clone() });
                    }
                    Ok(())
                },
            )?;
        for (offset, out) in values.chunks(d).enumerate() {
            let i = start + offset;
            acc.add_scaled(weight(i), out);
            if checkpoints.contains(&(i + 1)) {
                checkpoint(i + 1, &acc);
            }
        }
        start += len;
    }
    Ok(acc.values())
}
