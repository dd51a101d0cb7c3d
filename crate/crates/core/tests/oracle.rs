mod common;

use lsd_levelline::segment_fitting::clamped_loss;
use lsd_levelline::{DetectorParams, LineParams};
use proptest::prelude::*;

use common::{brute_grid_minimum, grid_minimum, reference_loss};

fn cloud() -> impl Strategy<Value = (Vec<[f64; 2]>, Vec<[f64; 2]>)> {
    proptest::collection::vec(((-4.0f64..4.0, -4.0f64..4.0), 0.0f64..6.3), 2..8).prop_map(|v| {
        v.into_iter()
            .map(|((x, y), a)| ([x, y], [a.cos(), a.sin()]))
            .unzip()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kink_search_matches_exhaustive_grid((pts, lv) in cloud()) {
        let p = DetectorParams::default();
        let (fast, phi, c) = grid_minimum(&pts, &lv, &p, 0.02, 0.05, 6.0);
        let slow = brute_grid_minimum(&pts, &lv, &p, 0.02, 0.05, 6.0);
        prop_assert!((fast - slow).abs() < 1e-9, "{fast} vs {slow}");
        prop_assert!((reference_loss(&pts, &lv, phi, c, &p) - fast).abs() < 1e-9);
    }

    #[test]
    fn reference_loss_agrees_with_library((pts, lv) in cloud(), phi in 0.0f64..3.0, c in -5.0f64..5.0) {
        let p = DetectorParams::default();
        let lib = clamped_loss(&pts, &lv, &LineParams::from_angle(phi, c), &p).unwrap();
        prop_assert!((lib - reference_loss(&pts, &lv, phi, c, &p)).abs() < 1e-9);
    }
}
