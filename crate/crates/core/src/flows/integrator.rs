//! Dormand–Prince 5(4) with step-size control and continuous output.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StopReason {
    Completed,
    /// Proposed step fell below `1e-14·|t|`.
    StepUnderflow,
    /// A coordinate left the guarded range or the field refused to evaluate.
    OverflowGuard,
    MaxSteps,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct IntegratorStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
    pub rtol: f64,
    pub atol: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Report the solution only at these times (dense output); every
    /// accepted step is reported when `None`.
    pub output: Option<Vec<f64>>,
}

impl IntegratorOptions {
    pub fn with_tol(tol: f64) -> Self {
        IntegratorOptions { rtol: tol, atol: tol, max_steps: 1_000_000, output: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawSolution {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub stats: IntegratorStats,
    pub stop: StopReason,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Integrates `y′ = f(t, y)` from `t0` to `t1` (either direction). `f`
/// returns `None` where it cannot be evaluated; `in_range` guards the state.
pub fn dopri5<F, G>(f: F, t0: f64, y0: &[f64], t1: f64, opts: &IntegratorOptions, in_range: G) -> RawSolution
where
    F: FnMut(f64, &[f64]) -> Option<Vec<f64>>,
    G: Fn(&[f64]) -> bool,
{
    dopri5_monitored(f, t0, y0, t1, opts, in_range, |_, _| 0.0)
}

/// As [`dopri5`], with a step accepted only when `monitor(y_new, e)` is also
/// at most one, where `e` is the embedded local error estimate.
pub fn dopri5_monitored<F, G, S>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    t1: f64,
    opts: &IntegratorOptions,
    in_range: G,
    monitor: S,
) -> RawSolution
where
    F: FnMut(f64, &[f64]) -> Option<Vec<f64>>,
    G: Fn(&[f64]) -> bool,
    S: Fn(&[f64], &[f64]) -> f64,
{
    let n = y0.len();
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let mut stats = IntegratorStats { rtol: opts.rtol, atol: opts.atol, ..Default::default() };
    let mut ts = vec![t0];
    let mut ys = vec![y0.to_vec()];
    let mut pending: std::collections::VecDeque<f64> = opts.output.iter().flatten().copied().collect();
    if opts.output.is_some() {
        ts.clear();
        ys.clear();
        while pending.front().is_some_and(|&s| (s - t0) * dir <= 0.0) {
            let s = pending.pop_front().expect("front exists");
            if s == t0 {
                ts.push(t0);
                ys.push(y0.to_vec());
            }
        }
    }
    let finish = |ts: Vec<f64>, ys: Vec<Vec<f64>>, stats, stop| RawSolution { t: ts, y: ys, stats, stop };

    if !in_range(y0) {
        return finish(ts, ys, stats, StopReason::OverflowGuard);
    }
    let Some(mut k1) = f(t0, y0) else {
        return finish(ts, ys, stats, StopReason::OverflowGuard);
    };
    stats.evaluations += 1;
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = initial_step(&mut f, t0, y0, &k1, dir, opts, &mut stats).min((t1 - t0).abs());
    let mut last_rejected = false;

    while (t1 - t) * dir > 0.0 {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return finish(ts, ys, stats, StopReason::MaxSteps);
        }
        if h < 1e-14 * t.abs().max(1e-300) {
            return finish(ts, ys, stats, StopReason::StepUnderflow);
        }
        if (t + dir * h - t1) * dir > 0.0 {
            h = (t1 - t).abs();
        }
        let hs = dir * h;
        let mut k = vec![k1.clone()];
        let mut failed = false;
        for s in 1..7 {
            let ys_stage: Vec<f64> =
                (0..n).map(|i| y[i] + hs * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>()).collect();
            match f(t + C[s] * hs, &ys_stage) {
                Some(v) if v.iter().all(|x| x.is_finite()) => k.push(v),
                _ => {
                    failed = true;
                    break;
                }
            }
            stats.evaluations += 1;
        }
        if failed {
            stats.rejected += 1;
            h *= 0.25;
            last_rejected = true;
            continue;
        }
        let y_new: Vec<f64> = (0..n).map(|i| y[i] + hs * (0..6).map(|j| A[6][j] * k[j][i]).sum::<f64>()).collect();
        let local: Vec<f64> = (0..n).map(|i| hs * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>()).collect();
        let mut err = 0.0;
        for i in 0..n {
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err += (local[i] / sc) * (local[i] / sc);
        }
        let err = (err / n as f64).sqrt().max(monitor(&y_new, &local));
        if !err.is_finite() || err > 1.0 {
            stats.rejected += 1;
            let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).max(0.2) } else { 0.2 };
            h *= fac;
            last_rejected = true;
            continue;
        }
        stats.accepted += 1;
        let t_new = t + hs;

        if opts.output.is_some() {
            let ydiff: Vec<f64> = (0..n).map(|i| y_new[i] - y[i]).collect();
            let bspl: Vec<f64> = (0..n).map(|i| hs * k[0][i] - ydiff[i]).collect();
            let r4: Vec<f64> = (0..n).map(|i| ydiff[i] - hs * k[6][i] - bspl[i]).collect();
            let r5: Vec<f64> = (0..n).map(|i| hs * (0..7).map(|j| D[j] * k[j][i]).sum::<f64>()).collect();
            while pending.front().is_some_and(|&s| (s - t_new) * dir <= 0.0) {
                let s = pending.pop_front().expect("front exists");
                let th = (s - t) / hs;
                let th1 = 1.0 - th;
                let ys_out =
                    (0..n).map(|i| y[i] + th * (ydiff[i] + th1 * (bspl[i] + th * (r4[i] + th1 * r5[i])))).collect();
                ts.push(s);
                ys.push(ys_out);
            }
        } else {
            ts.push(t_new);
            ys.push(y_new.clone());
        }

        t = t_new;
        y = y_new;
        k1 = k.pop().expect("seven stages");
        if !in_range(&y) {
            return finish(ts, ys, stats, StopReason::OverflowGuard);
        }
        let mut fac = if err == 0.0 { 10.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 10.0) };
        if last_rejected {
            fac = fac.min(1.0);
        }
        last_rejected = false;
        h *= fac;
    }
    finish(ts, ys, stats, StopReason::Completed)
}

fn initial_step<F>(
    f: &mut F,
    t0: f64,
    y0: &[f64],
    f0: &[f64],
    dir: f64,
    opts: &IntegratorOptions,
    stats: &mut IntegratorStats,
) -> f64
where
    F: FnMut(f64, &[f64]) -> Option<Vec<f64>>,
{
    let n = y0.len() as f64;
    let sc: Vec<f64> = y0.iter().map(|y| opts.atol + opts.rtol * y.abs()).collect();
    let norm = |v: &[f64]| (v.iter().zip(&sc).map(|(x, s)| (x / s) * (x / s)).sum::<f64>() / n).sqrt();
    let d0 = norm(y0);
    let d1 = norm(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, k)| y + dir * h0 * k).collect();
    let Some(f1) = f(t0 + dir * h0, &y1) else { return h0 * 1e-3 };
    stats.evaluations += 1;
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    (100.0 * h0).min(h1)
}
