use num_complex::Complex64;

use super::{EvolutionResult, InitialState};
use crate::bath::CorrelationFunction;
use crate::error::{Error, Result};

/// Real 4x4 step matrix `I + (h/2)^2 [[A,-B,C,-D],[B,A,D,C],[C,-D,A,-B],[D,C,B,A]]`
/// acting on `(Re c1, Im c1, Re c2, Im c2)` at the new time, with
/// `A + iB = F_mm(0)` and `C + iD = F_mn(0)`.
pub fn step_matrix(f_mm0: Complex64, f_mn0: Complex64, h: f64) -> [[f64; 4]; 4] {
    let alpha = 0.25 * h * h;
    let (a, b, c, d) = (f_mm0.re, f_mm0.im, f_mn0.re, f_mn0.im);
    let k = [[a, -b, c, -d], [b, a, d, c], [c, -d, a, -b], [d, c, b, a]];
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = alpha * k[i][j] + if i == j { 1.0 } else { 0.0 };
        }
    }
    m
}

/// Integrate both amplitudes to `t_end` (s) on the kernels' own time grid.
///
/// The system decouples in `c_pm = (c1 +- c2)/sqrt 2` with kernels
/// `F_mm +- F_mn`, so the 4x4 step system reduces to two complex
/// divisions. Cost is quadratic in the number of steps.
pub fn evolve(
    f_mm: &CorrelationFunction,
    f_mn: &CorrelationFunction,
    init: InitialState,
    t_end: f64,
) -> Result<EvolutionResult> {
    let h = f_mm.dt;
    if (f_mn.dt - h).abs() > 1e-12 * h {
        return Err(Error::Config(format!(
            "correlation grids differ: dt = {:e} s and {:e} s",
            f_mm.dt, f_mn.dt
        )));
    }
    if !(t_end >= 0.0) {
        return Err(Error::Config(format!("final time {t_end:e} must be >= 0")));
    }
    let steps = (t_end / h).round() as usize;
    let (kmm, kmn) = (f_mm.positive_times(), f_mn.positive_times());
    let available = kmm.len().min(kmn.len());
    if steps + 1 >= available {
        return Err(Error::Config(format!(
            "final time {:e} s exceeds the correlation window {:e} s",
            t_end,
            (available as f64 - 2.0) * h
        )));
    }
    let kernel =
        |sign: f64| -> Vec<Complex64> { (0..=steps + 1).map(|k| kmm[k] + sign * kmn[k]).collect() };
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (p0, m0) = ((init.c1 + init.c2) * s, (init.c1 - init.c2) * s);
    let uncoupled = kmn[..=steps + 1]
        .iter()
        .all(|v| *v == Complex64::new(0.0, 0.0));
    let plus = integrate(&kernel(1.0), p0, h, steps)?;
    let minus = if uncoupled {
        // both channels share the kernel; the system is linear in c0
        if p0 == Complex64::new(0.0, 0.0) {
            integrate(&kernel(-1.0), m0, h, steps)?
        } else {
            let ratio = m0 / p0;
            plus.iter().map(|v| v * ratio).collect()
        }
    } else {
        integrate(&kernel(-1.0), m0, h, steps)?
    };
    let (c1, c2) = plus
        .iter()
        .zip(&minus)
        .map(|(p, m)| ((p + m) * s, (p - m) * s))
        .unzip();
    Ok(EvolutionResult { h, c1, c2 })
}

/// Scalar recursion for `c' = -int_0^t K(t - s) c(s) ds`:
///
/// `(1 + a K0) c[j+1] = c[j] - a (2 K1 + K0) c[j]
///     - a (2 sum_{l=1}^{j-1} G[j+1-l] c[l] + G[j+1] c[0])`
///
/// with `a = (h/2)^2` and `G[k] = K[k] + K[k-1]`; the first step keeps only
/// `- a K1 c[0]` on the right.
fn integrate(kernel: &[Complex64], c0: Complex64, h: f64, steps: usize) -> Result<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    if c0 == zero {
        return Ok(vec![zero; steps + 1]);
    }
    let alpha = 0.25 * h * h;
    let pivot = Complex64::new(1.0, 0.0) + alpha * kernel[0];
    if !(pivot.norm() > 1e-12) || !pivot.is_finite() {
        return Err(Error::SingularStep { step: 0 });
    }
    let inv = 1.0 / pivot;
    let top = kernel.len() - 1;
    // G stored in reverse, split into real and imaginary parts, so the
    // history sum is a pair of contiguous dot products.
    let (mut g_re, mut g_im) = (vec![0.0; top + 1], vec![0.0; top + 1]);
    for k in 1..=top {
        let g = kernel[k] + kernel[k - 1];
        g_re[top - k] = g.re;
        g_im[top - k] = g.im;
    }
    let g = |k: usize| Complex64::new(g_re[top - k], g_im[top - k]);
    let (mut c_re, mut c_im) = (Vec::with_capacity(steps + 1), Vec::with_capacity(steps + 1));
    c_re.push(c0.re);
    c_im.push(c0.im);
    if steps > 0 {
        let c1 = (c0 - alpha * kernel[1] * c0) * inv;
        c_re.push(c1.re);
        c_im.push(c1.im);
    }
    let local = 2.0 * kernel[1] + kernel[0];
    for j in 1..steps {
        // sum_{l=1}^{j-1} G[j+1-l] c[l]; G[j+1-l] sits at top - j - 1 + l
        let offset = top - j - 1;
        let history = dot(
            &c_re[1..j],
            &c_im[1..j],
            &g_re[offset + 1..offset + j],
            &g_im[offset + 1..offset + j],
        );
        let cj = Complex64::new(c_re[j], c_im[j]);
        let rhs = cj - alpha * (local * cj + 2.0 * history + g(j + 1) * c0);
        let next = rhs * inv;
        if !next.is_finite() {
            return Err(Error::SingularStep { step: j + 1 });
        }
        c_re.push(next.re);
        c_im.push(next.im);
    }
    Ok(c_re
        .into_iter()
        .zip(c_im)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

/// Complex dot product `sum x * y` on split storage, four lanes wide.
fn dot(x_re: &[f64], x_im: &[f64], y_re: &[f64], y_im: &[f64]) -> Complex64 {
    const LANES: usize = 4;
    let (mut re, mut im) = ([0.0; LANES], [0.0; LANES]);
    let n = x_re.len();
    let body = n - n % LANES;
    for base in (0..body).step_by(LANES) {
        for lane in 0..LANES {
            let k = base + lane;
            re[lane] += x_re[k] * y_re[k] - x_im[k] * y_im[k];
            im[lane] += x_re[k] * y_im[k] + x_im[k] * y_re[k];
        }
    }
    for k in body..n {
        re[0] += x_re[k] * y_re[k] - x_im[k] * y_im[k];
        im[0] += x_re[k] * y_im[k] + x_im[k] * y_re[k];
    }
    Complex64::new(re.iter().sum(), im.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{CorrelationFunction, CorrelationKind};

    fn kernel(n: usize, dt: f64, f: impl Fn(f64) -> Complex64) -> CorrelationFunction {
        let causal: Vec<Complex64> = (0..n).map(|k| f(k as f64 * dt)).collect();
        CorrelationFunction::from_causal(CorrelationKind::OnePoint, dt, &causal)
    }

    fn gauss(scale: f64, width: f64, shift: f64) -> impl Fn(f64) -> Complex64 {
        move |t| {
            Complex64::from_polar(
                scale * (-((t - shift) / width).powi(2)).exp(),
                0.3 * t / width,
            )
        }
    }

    /// Gaussian elimination with partial pivoting.
    fn solve4(mut m: [[f64; 4]; 4], mut y: [f64; 4]) -> [f64; 4] {
        for col in 0..4 {
            let p = (col..4)
                .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
                .unwrap();
            m.swap(col, p);
            y.swap(col, p);
            for row in col + 1..4 {
                let f = m[row][col] / m[col][col];
                for k in col..4 {
                    m[row][k] -= f * m[col][k];
                }
                y[row] -= f * y[col];
            }
        }
        let mut x = [0.0; 4];
        for row in (0..4).rev() {
            let s: f64 = (row + 1..4).map(|k| m[row][k] * x[k]).sum();
            x[row] = (y[row] - s) / m[row][row];
        }
        x
    }

    #[test]
    fn zero_kernel_freezes_amplitudes() {
        let zero = kernel(64, 1e-16, |_| Complex64::new(0.0, 0.0));
        let init = InitialState::new(Complex64::new(0.3, 0.2), Complex64::new(-0.5, 0.1)).unwrap();
        let r = evolve(&zero, &zero, init, 50e-16).unwrap();
        assert!(r.c1.iter().all(|c| (c - init.c1).norm() < 1e-15));
        assert!(r.c2.iter().all(|c| (c - init.c2).norm() < 1e-15));
    }

    #[test]
    fn step_matrix_matches_complex_elimination() {
        let h = 0.05;
        let fmm = kernel(400, h, gauss(3.0, 0.4, 0.0));
        let fmn = kernel(400, h, gauss(1.2, 0.4, 2.0));
        let init = InitialState::new(Complex64::new(0.6, 0.1), Complex64::new(0.2, -0.4)).unwrap();
        let r = evolve(&fmm, &fmn, init, 150.0 * h).unwrap();
        let kmm = fmm.positive_times();
        let kmn = fmn.positive_times();
        let alpha = 0.25 * h * h;
        let m = step_matrix(kmm[0], kmn[0], h);
        // Recompute step j -> j+1 in the original basis with the real system.
        for j in [1usize, 7, 40, 149] {
            let mut y = [Complex64::new(0.0, 0.0); 2];
            let c = |k: usize| [r.c1[k], r.c2[k]];
            for (m_idx, n_idx) in [(0usize, 1usize), (1, 0)] {
                let conv = |kern: &[Complex64], who: usize| -> Complex64 {
                    let g = |k: usize| kern[k] + kern[k - 1];
                    let mut acc = (2.0 * kern[1] + kern[0]) * c(j)[who] + g(j + 1) * c(0)[who];
                    for l in 1..j {
                        acc += 2.0 * g(j + 1 - l) * c(l)[who];
                    }
                    acc
                };
                y[m_idx] = c(j)[m_idx] - alpha * (conv(kmm, m_idx) + conv(kmn, n_idx));
            }
            let x = solve4(m, [y[0].re, y[0].im, y[1].re, y[1].im]);
            let got = [
                r.c1[j + 1].re,
                r.c1[j + 1].im,
                r.c2[j + 1].re,
                r.c2[j + 1].im,
            ];
            for (a, b) in x.iter().zip(got) {
                assert!((a - b).abs() < 1e-13, "step {j}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn identical_atoms_stay_identical() {
        let h = 0.05;
        let fmm = kernel(300, h, gauss(2.0, 0.3, 0.0));
        let fmn = kernel(300, h, gauss(0.7, 0.3, 3.0));
        let r = evolve(&fmm, &fmn, InitialState::symmetric(), 250.0 * h).unwrap();
        for (a, b) in r.c1.iter().zip(&r.c2) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn grid_mismatch_and_window_are_checked() {
        let a = kernel(100, 1e-16, gauss(1.0, 1e-15, 0.0));
        let b = kernel(100, 2e-16, gauss(1.0, 1e-15, 0.0));
        assert!(matches!(
            evolve(&a, &b, InitialState::single(), 1e-15),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            evolve(&a, &a, InitialState::single(), 1e-13),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn singular_pivot_is_reported() {
        let h = 0.1;
        let bad = kernel(50, h, |t| {
            if t == 0.0 {
                Complex64::new(-400.0, 0.0)
            } else {
                0.0.into()
            }
        });
        let zero = kernel(50, h, |_| 0.0.into());
        assert!(matches!(
            evolve(&bad, &zero, InitialState::single(), 1.0),
            Err(Error::SingularStep { .. })
        ));
    }
}
