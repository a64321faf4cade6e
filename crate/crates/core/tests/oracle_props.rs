//! Discretization oracles against the known shape of both spectra: the
//! Y-shaped tie set, grid-convergence filtering, and cross-checks between
//! the independent matrix formulations.

use num_complex::Complex64;
use spectraltie_core::discretize::{
    colloc_os_result, constrained_model_result, fd_model_result, filter_spurious, resolution_ok,
};
use spectraltie_core::scalar_maps::{node, segment_frame};
use spectraltie_core::ProblemParams;

const SEG_LEN: f64 = 1.1547005383792515; // 2/sqrt(3)

/// Distance from lambda to the tie set: both segments plus the vertical ray
/// below the node.
fn tie_distance(lambda: Complex64) -> f64 {
    let seg = |z: Complex64| -> f64 {
        let (t, g) = segment_frame(z);
        if (0.0..=SEG_LEN).contains(&t) {
            g.abs()
        } else {
            (z - Complex64::new(-1.0, 0.0)).norm().min((z - node()).norm())
        }
    };
    let mirrored = Complex64::new(-lambda.re, lambda.im);
    let ray = if lambda.im <= node().im {
        lambda.re.abs()
    } else {
        (lambda - node()).norm()
    };
    seg(lambda).min(seg(mirrored)).min(ray)
}

#[test]
fn fd_filter_resolves_tie_adjacent_eigenvalues() {
    let p = ProblemParams::new(1e-3, 1.0, 0.3);
    assert!(resolution_ok(&p, 1500) && resolution_ok(&p, 2000));
    let coarse = fd_model_result(&p, 1500).unwrap();
    let fine = fd_model_result(&p, 2000).unwrap();
    let filtered = filter_spurious(&coarse, &fine, 1e-4);

    let near_tie = filtered
        .eigenvalues
        .iter()
        .filter(|z| tie_distance(**z) <= 0.02)
        .count();
    assert!(near_tie >= 8, "only {near_tie} eigenvalues within 0.02 of the tie");

    let mut resolved_near = 0usize;
    let mut deep = 0usize;
    for (z, &res) in filtered.eigenvalues.iter().zip(filtered.resolved.iter()) {
        if tie_distance(*z) <= 0.02 && z.im >= -0.8 {
            assert!(res, "tie-adjacent eigenvalue {z} not resolved");
            resolved_near += 1;
        }
        if z.im < -2.0 {
            deep += 1;
            assert!(!res, "deep artifact {z} marked resolved");
        }
        if res {
            assert!(z.im >= -1.5, "resolved eigenvalue {z} implausibly deep");
        }
    }
    assert!(resolved_near >= 8, "resolved near-tie count {resolved_near}");
    assert!(deep > 50, "expected a large artifact cloud, saw {deep}");
}

#[test]
fn collocation_reproduces_the_y_portrait() {
    let p = ProblemParams::from_reynolds(1.0, 3000.0, 0.3);
    let r = colloc_os_result(&p, 256).unwrap();

    let mut left_up = 0;
    let mut left_down = 0;
    let mut right_up = 0;
    let mut right_down = 0;
    let mut ray = 0;
    let mut unstable = 0;
    for z in &r.eigenvalues {
        if z.re.abs() <= 1.0 && z.im > 0.02 {
            unstable += 1;
        }
        if z.re.abs() <= 0.02 && z.im < node().im - 0.05 && z.im > -1.2 {
            ray += 1;
        }
        let (side_up, side_down) = if z.re < 0.0 {
            (&mut left_up, &mut left_down)
        } else {
            (&mut right_up, &mut right_down)
        };
        let probe = Complex64::new(-z.re.abs(), z.im);
        let (t, g) = segment_frame(probe);
        if (0.05..1.05).contains(&t) && g.abs() <= 0.12 && g.abs() > 1e-4 {
            if g > 0.0 {
                *side_up += 1;
            } else {
                *side_down += 1;
            }
        }
    }
    // the segment neighborhood splits into two strands on each side, the
    // stem of the Y is populated, and nothing sits above the real axis
    assert!(left_up >= 5, "left upper strand {left_up}");
    assert!(left_down >= 5, "left lower strand {left_down}");
    assert!(right_up >= 5, "right upper strand {right_up}");
    assert!(right_down >= 5, "right lower strand {right_down}");
    assert!(ray >= 3, "ray census {ray}");
    assert_eq!(unstable, 0, "eigenvalues above the stability line");
}

#[test]
fn collocation_grid_doubling_keeps_resolved_set() {
    let p = ProblemParams::from_reynolds(1.0, 3000.0, 0.3);
    let coarse = colloc_os_result(&p, 256).unwrap();
    let fine = colloc_os_result(&p, 320).unwrap();
    let filtered = filter_spurious(&coarse, &fine, 1e-6);
    let resolved: Vec<Complex64> = filtered
        .eigenvalues
        .iter()
        .zip(filtered.resolved.iter())
        .filter(|(_, &r)| r)
        .map(|(z, _)| *z)
        .collect();
    assert!(resolved.len() >= 10, "only {} eigenvalues stable to 1e-6", resolved.len());
    // the stable ones are the physical portrait, not far-field artifacts
    for z in &resolved {
        assert!(tie_distance(*z) < 0.2, "stable eigenvalue {z} off the portrait");
    }
}

#[test]
fn resolved_sets_mirror_across_the_imaginary_axis() {
    let p = ProblemParams::from_reynolds(1.0, 3000.0, 0.3);
    let coarse = colloc_os_result(&p, 256).unwrap();
    let fine = colloc_os_result(&p, 320).unwrap();
    let filtered = filter_spurious(&coarse, &fine, 1e-6);
    let resolved: Vec<Complex64> = filtered
        .eigenvalues
        .iter()
        .zip(filtered.resolved.iter())
        .filter(|(_, &r)| r)
        .map(|(z, _)| *z)
        .collect();
    let mut worst: f64 = 0.0;
    for z in &resolved {
        let mirror = Complex64::new(-z.re, z.im);
        let gap = resolved
            .iter()
            .map(|w| (w - mirror).norm())
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(gap);
    }
    assert!(worst <= 2e-3, "mirror defect {worst:e}");
}

#[test]
fn resolved_count_is_stable_under_grid_bump() {
    let p = ProblemParams::new(1e-3, 1.0, 0.3);
    let coarse = fd_model_result(&p, 500).unwrap();
    let fine_a = fd_model_result(&p, 640).unwrap();
    let fine_b = fd_model_result(&p, 704).unwrap();
    let tol = 1.946e-4;
    let count = |r: &spectraltie_core::discretize::DiscretizationResult| {
        r.resolved.iter().filter(|&&x| x).count()
    };
    let ca = count(&filter_spurious(&coarse, &fine_a, tol));
    let cb = count(&filter_spurious(&coarse, &fine_b, tol));
    assert_eq!(ca, cb, "resolved count moved under n -> n+64: {ca} vs {cb}");
    assert!(ca >= 8, "resolved count {ca} too small to be meaningful");
}

#[test]
fn constrained_cross_check_agrees_with_collocation() {
    let p = ProblemParams::new(1e-3, 1.0, 0.3);
    let colloc = colloc_os_result(&p, 192).unwrap();
    let constrained = constrained_model_result(&p, 1200).unwrap();

    let mut checked = 0usize;
    for z in &colloc.eigenvalues {
        if tie_distance(*z) <= 0.15 && z.im >= -0.7 && z.re.abs() < 0.95 {
            let gap = constrained
                .eigenvalues
                .iter()
                .map(|w| (w - z).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(gap <= 1e-3, "no constrained partner for {z}: gap {gap:e}");
            checked += 1;
        }
    }
    assert!(checked >= 10, "agreement window held only {checked} eigenvalues");
}
