use grs_core::flows::integrator::{dopri5, IntegratorOptions};
use grs_core::flows::StopReason;

/// Least-squares slope of `−log(err)` against `log(steps)`.
fn measured_order() -> f64 {
    let mut pts = Vec::new();
    for k in 6..=10 {
        let opts = IntegratorOptions::with_tol(10f64.powi(-k));
        let sol = dopri5(|_, y| Some(vec![y[0]]), 0.0, &[1.0], 1.0, &opts, |_| true);
        assert_eq!(sol.stop, StopReason::Completed);
        let err = (sol.y.last().unwrap()[0] - 1f64.exp()).abs();
        pts.push(((sol.stats.accepted as f64).ln(), -err.ln()));
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn convergence_order_is_five() {
    let p = measured_order();
    assert!((4.5..=5.5).contains(&p), "order {p}");
}
