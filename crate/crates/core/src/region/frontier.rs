//! Upper-right convex frontier of a finite point set in the nonnegative quadrant.

/// The part of the convex hull of `points` (together with the origin) that
/// runs from the highest point to the rightmost one, `R1` strictly
/// increasing and `R2` strictly decreasing. Returns `[(0, 0)]` for an empty or
/// all-zero input.
pub fn pareto_frontier(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|&(a, b)| (a.max(0.0), b.max(0.0))).collect();
    pts.push((0.0, 0.0));
    pts.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    pts.dedup_by(|a, b| (a.0 - b.0).abs() <= 1e-12 && (a.1 - b.1).abs() <= 1e-12);

    // upper hull, left to right, collinear points dropped
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= -1e-15 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    // keep from the highest point (rightmost among ties) onwards
    let top = hull.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let start = hull.iter().rposition(|p| p.1 >= top - 1e-12).expect("hull is nonempty");
    let mut out: Vec<(f64, f64)> = hull[start..].to_vec();
    // the rightmost column (up to rounding) keeps only its highest point
    while out.len() >= 2
        && (out[out.len() - 1].1 >= out[out.len() - 2].1 - 1e-12 || out[out.len() - 1].0 <= out[out.len() - 2].0 + 1e-12)
    {
        let last = out.pop().expect("len >= 2");
        let n = out.len();
        out[n - 1] = (out[n - 1].0.max(last.0), out[n - 1].1.max(last.1));
    }
    out
}

/// Support function of the region under a frontier.
pub fn support(frontier: &[(f64, f64)], theta: f64) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    frontier.iter().map(|&(a, b)| c * a + s * b).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_and_zero() {
        assert_eq!(pareto_frontier(&[]), vec![(0.0, 0.0)]);
        assert_eq!(pareto_frontier(&[(0.0, 0.0), (0.0, 0.0)]), vec![(0.0, 0.0)]);
    }

    #[test]
    fn single_pentagon() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (0.5, 1.0), (0.0, 1.0)];
        assert_eq!(pareto_frontier(&pts), vec![(0.5, 1.0), (1.0, 0.5)]);
    }

    #[test]
    fn rectangle_and_axis_segments() {
        assert_eq!(pareto_frontier(&[(1.0, 0.0), (1.0, 2.0), (0.0, 2.0)]), vec![(1.0, 2.0)]);
        assert_eq!(pareto_frontier(&[(3.0, 0.0)]), vec![(3.0, 0.0)]);
        assert_eq!(pareto_frontier(&[(0.0, 3.0)]), vec![(0.0, 3.0)]);
    }

    #[test]
    fn rounding_noise_does_not_add_corners() {
        let pts = [(0.5, 1.0), (1.0 + 2e-16, 0.5), (1.0 + 4e-16, 0.39)];
        assert_eq!(pareto_frontier(&pts), vec![(0.5, 1.0), (1.0 + 4e-16, 0.5)]);
    }

    #[test]
    fn time_sharing_line_drops_midpoints() {
        let f = pareto_frontier(&[(0.0, 1.0), (0.5, 0.5), (1.0, 0.0), (0.2, 0.2)]);
        assert_eq!(f, vec![(0.0, 1.0), (1.0, 0.0)]);
    }

    proptest! {
        #[test]
        fn frontier_is_strictly_pareto_and_dominates(pts in prop::collection::vec((0.0f64..5.0, 0.0f64..5.0), 1..40)) {
            let f = pareto_frontier(&pts);
            for w in f.windows(2) {
                prop_assert!(w[1].0 > w[0].0 && w[1].1 < w[0].1);
            }
            for t in 0..=20 {
                let theta = t as f64 / 20.0 * std::f64::consts::FRAC_PI_2;
                let direct = pts.iter().map(|&(a, b)| theta.cos() * a + theta.sin() * b).fold(0.0, f64::max);
                prop_assert!((support(&f, theta) - direct).abs() < 1e-9);
            }
        }
    }
}
