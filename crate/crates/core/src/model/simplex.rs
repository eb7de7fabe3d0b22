//! Nelder–Mead downhill simplex with restarts.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub initial_step: f64,
    pub max_evals: usize,
    /// Converged when the spread of simplex values is below
    /// `f_tol_abs + f_tol_rel·|f_best|` and its extent below `x_tol`.
    pub f_tol_abs: f64,
    pub f_tol_rel: f64,
    pub x_tol: f64,
    pub restarts: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            max_evals: 20_000,
            f_tol_abs: 1e-20,
            f_tol_rel: 1e-13,
            x_tol: 1e-10,
            restarts: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult<const D: usize> {
    pub x: [f64; D],
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

fn combine<const D: usize>(a: &[f64; D], b: &[f64; D], t: f64) -> [f64; D] {
    // a + t·(b − a)
    let mut out = [0.0; D];
    for i in 0..D {
        out[i] = a[i] + t * (b[i] - a[i]);
    }
    out
}

fn single_run<const D: usize>(
    f: &impl Fn(&[f64; D]) -> f64,
    x0: [f64; D],
    opts: &SimplexOptions,
    budget: usize,
) -> SimplexResult<D> {
    let mut pts: Vec<[f64; D]> = vec![x0];
    for i in 0..D {
        let mut p = x0;
        p[i] += opts.initial_step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(f).collect();
    let mut evals = D + 1;
    let mut converged = false;

    while evals < budget {
        let mut order: Vec<usize> = (0..=D).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i]).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let spread = vals[D] - vals[0];
        let extent = pts[1..]
            .iter()
            .flat_map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if vals[0].is_finite()
            && spread <= opts.f_tol_abs + opts.f_tol_rel * vals[0].abs()
            && extent <= opts.x_tol
        {
            converged = true;
            break;
        }

        let mut centroid = [0.0; D];
        for p in &pts[..D] {
            for i in 0..D {
                centroid[i] += p[i] / D as f64;
            }
        }
        let worst = pts[D];
        let reflected = combine(&centroid, &worst, -1.0);
        let fr = f(&reflected);
        evals += 1;
        if fr < vals[0] {
            let expanded = combine(&centroid, &worst, -2.0);
            let fe = f(&expanded);
            evals += 1;
            if fe < fr {
                pts[D] = expanded;
                vals[D] = fe;
            } else {
                pts[D] = reflected;
                vals[D] = fr;
            }
        } else if fr < vals[D - 1] {
            pts[D] = reflected;
            vals[D] = fr;
        } else {
            // Outside contraction when the reflection beat the worst point,
            // inside contraction otherwise.
            let (contracted, bound) = if fr < vals[D] {
                (combine(&centroid, &worst, -0.5), fr)
            } else {
                (combine(&centroid, &worst, 0.5), vals[D])
            };
            let fc = f(&contracted);
            evals += 1;
            if fc <= bound && fc.is_finite() {
                pts[D] = contracted;
                vals[D] = fc;
            } else {
                let best = pts[0];
                for j in 1..=D {
                    pts[j] = combine(&best, &pts[j], 0.5);
                    vals[j] = f(&pts[j]);
                }
                evals += D;
            }
        }
    }
    let best = (0..=D).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    SimplexResult {
        x: pts[best],
        f: vals[best],
        evals,
        converged,
    }
}

/// Minimizes `f` from `x0`, restarting from the best point with a fresh
/// simplex until a restart no longer improves it.
pub fn minimize<const D: usize>(
    f: impl Fn(&[f64; D]) -> f64,
    x0: [f64; D],
    opts: &SimplexOptions,
) -> SimplexResult<D> {
    let mut result = single_run(&f, x0, opts, opts.max_evals);
    for _ in 0..opts.restarts {
        let left = opts.max_evals.saturating_sub(result.evals);
        if left <= D + 1 {
            break;
        }
        let next = single_run(&f, result.x, opts, left);
        let improved = next.f < result.f;
        let evals = result.evals + next.evals;
        if improved {
            result = SimplexResult { evals, ..next };
        } else {
            result.evals = evals;
            result.converged |= next.converged;
            break;
        }
    }
    result
}
