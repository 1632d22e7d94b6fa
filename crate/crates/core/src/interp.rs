//! Local cubic interpolation on uniform grids.

/// Four-point Lagrange interpolation of `values` sampled at
/// `x0 + i * step`. Falls back to lower order on grids shorter than four.
pub fn cubic_uniform(x0: f64, step: f64, values: &[f64], x: f64) -> Option<f64> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let pos = (x - x0) / step;
    if pos < -1e-9 || pos > (n - 1) as f64 + 1e-9 {
        return None;
    }
    if n == 1 {
        return Some(values[0]);
    }
    let order = n.min(4);
    let base =
        (pos.floor() as isize - (order as isize / 2 - 1)).clamp(0, (n - order) as isize) as usize;
    let mut acc = 0.0;
    for i in 0..order {
        let xi = (base + i) as f64;
        let mut w = 1.0;
        for j in 0..order {
            if j != i {
                let xj = (base + j) as f64;
                w *= (pos - xj) / (xi - xj);
            }
        }
        acc += w * values[base + i];
    }
    Some(acc)
}
