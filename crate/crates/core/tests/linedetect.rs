mod common;

use manuscript_lines::linedetect::{
    detect_lines, detect_lines_with, horizontal_histogram, smear, SmearParams,
};
use manuscript_lines::raster::BinaryImage;
use manuscript_lines::Execution;
use proptest::prelude::*;

use common::*;

fn rect(x0: usize, y0: usize, x1: usize, y1: usize) -> impl Fn(usize, usize) -> bool {
    move |x, y| (x0..x1).contains(&x) && (y0..y1).contains(&y)
}

/// Three reference lines plus two lines fused by thin bridges at rows 200..204.
fn fused_page() -> BinaryImage {
    let parts: Vec<Box<dyn Fn(usize, usize) -> bool>> = vec![
        Box::new(rect(20, 20, 300, 50)),
        Box::new(rect(20, 70, 300, 100)),
        Box::new(rect(20, 120, 300, 150)),
        Box::new(rect(20, 170, 300, 200)),
        Box::new(rect(100, 200, 103, 204)),
        Box::new(rect(220, 200, 223, 204)),
        Box::new(rect(20, 204, 300, 234)),
    ];
    BinaryImage::from_fn(320, 260, |x, y| parts.iter().any(|p| p(x, y))).unwrap()
}

#[test]
fn fused_pair_is_cut_at_the_bridge() {
    let boxes = detect_lines(&fused_page(), &SmearParams::default()).unwrap();
    assert_eq!(boxes.len(), 5, "{boxes:?}");
    let upper = boxes[3];
    let lower = boxes[4];
    let cut = upper.y + upper.height;
    assert!((198..=206).contains(&cut), "cut at {cut}: {boxes:?}");
    assert_eq!(lower.y, cut);
    assert!(upper.y.abs_diff(170) <= 2 && (lower.y + lower.height).abs_diff(234) <= 2);
}

#[test]
fn fused_pair_without_references_stays_whole() {
    // alone, the pair is its own median height, so no component looks oversized
    let full = fused_page();
    let page = BinaryImage::from_fn(320, 260, |x, y| full.is_ink(x, y) && y >= 170).unwrap();
    let boxes = detect_lines(&page, &SmearParams::default()).unwrap();
    assert_eq!(boxes.len(), 1);
}

#[test]
fn parallel_and_sequential_detection_agree() {
    let page = fused_page();
    let params = SmearParams::default();
    let a = detect_lines_with(&page, &params, Execution::Sequential).unwrap();
    let b = detect_lines_with(&page, &params, Execution::Parallel).unwrap();
    assert_eq!(a.boxes, b.boxes);
    assert_eq!(a.smeared, b.smeared);
    assert_eq!(a.histogram, b.histogram);
}

fn band_page(offset: usize, bands: &[(usize, usize, usize, usize)]) -> BinaryImage {
    BinaryImage::from_fn(300, 200 + offset, |x, y| {
        y >= offset && bands.iter().any(|&(x0, y0, w, h)| (x0..x0 + w).contains(&x) && (y0..y0 + h).contains(&(y - offset)))
    })
    .unwrap()
}

fn band_strategy() -> impl Strategy<Value = Vec<(usize, usize, usize, usize)>> {
    // non-overlapping horizontal bands at least 12 rows apart
    prop::collection::vec((0usize..60, 40usize..240, 8usize..24, 12usize..20), 1..5).prop_map(|raw| {
        let mut y = 4;
        raw.into_iter()
            .filter_map(|(x0, w, h, gap)| {
                let top = y;
                y += h + gap;
                (y < 196).then_some((x0, top, w.min(296 - x0), h))
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shifting_rows_shifts_boxes(bands in band_strategy(), k in 0usize..30) {
        let params = SmearParams::default();
        let base = detect_lines(&band_page(0, &bands), &params).unwrap();
        let moved = detect_lines(&band_page(k, &bands), &params).unwrap();
        prop_assert_eq!(base.len(), moved.len());
        for (a, b) in base.iter().zip(&moved) {
            prop_assert_eq!((a.x, a.y + k, a.width, a.height), (b.x, b.y, b.width, b.height));
        }
    }

    #[test]
    fn every_box_holds_enough_smeared_ink(seed in 0u64..1000, density in 0.02f64..0.2) {
        let page = random_binary(96, 96, density, &mut rng(seed));
        let params = SmearParams::default();
        let det = detect_lines_with(&page, &params, Execution::default()).unwrap();
        for b in &det.boxes {
            let ink = (b.y..b.y + b.height)
                .flat_map(|y| (b.x..b.x + b.width).map(move |x| (x, y)))
                .filter(|&(x, y)| det.smeared.is_ink(x, y))
                .count();
            prop_assert!(ink >= params.min_smear_area, "{:?} holds {}", b, ink);
        }
    }

    #[test]
    fn smear_keeps_ink_and_is_idempotent(seed in 0u64..1000, density in 0.0f64..0.5) {
        let img = random_binary(80, 40, density, &mut rng(seed));
        let params = SmearParams::default();
        let once = smear(&img, &params);
        for (a, b) in img.data().iter().zip(once.data()) {
            prop_assert!(b >= a);
        }
        prop_assert_eq!(smear(&once, &params), once);
    }

    #[test]
    fn histogram_total_is_ink_count(seed in 0u64..1000, density in 0.0f64..1.0) {
        let img = random_binary(50, 70, density, &mut rng(seed));
        let h = horizontal_histogram(&img);
        prop_assert_eq!(h.total(), img.ink_count() as u64);
        prop_assert_eq!(h.counts, row_counts_oracle(&img));
    }
}
