//! Connected-component labeling against a breadth-first flood fill.

use std::collections::{BTreeSet, VecDeque};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use textile_inspect::imaging::{connected_regions, defect_window, remove_noise, BinaryImage};

fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize, density: f64) -> BinaryImage {
    let data = (0..w * h)
        .map(|_| u8::from(rng.gen_bool(density)))
        .collect();
    BinaryImage::from_vec(w, h, data).unwrap()
}

/// Components as pixel sets, found by 8-neighbour flood fill.
fn flood_fill(img: &BinaryImage) -> Vec<BTreeSet<(usize, usize)>> {
    let (w, h) = (img.width(), img.height());
    let mut seen = vec![false; w * h];
    let mut out = Vec::new();
    for r in 0..h {
        for c in 0..w {
            if !img.get(r, c) || seen[r * w + c] {
                continue;
            }
            let mut set = BTreeSet::new();
            let mut queue = VecDeque::from([(r, c)]);
            seen[r * w + c] = true;
            while let Some((y, x)) = queue.pop_front() {
                set.insert((y, x));
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        let (ny, nx) = (y as i64 + dy, x as i64 + dx);
                        if ny < 0 || nx < 0 || ny >= h as i64 || nx >= w as i64 {
                            continue;
                        }
                        let (ny, nx) = (ny as usize, nx as usize);
                        if img.get(ny, nx) && !seen[ny * w + nx] {
                            seen[ny * w + nx] = true;
                            queue.push_back((ny, nx));
                        }
                    }
                }
            }
            out.push(set);
        }
    }
    out
}

fn labeled(img: &BinaryImage) -> Vec<BTreeSet<(usize, usize)>> {
    connected_regions(img)
        .into_iter()
        .map(|r| r.pixels.into_iter().collect())
        .collect()
}

#[test]
fn matches_flood_fill_on_random_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..200 {
        let density = [0.2, 0.35, 0.5, 0.6][i % 4];
        let img = random_image(&mut rng, 32, 32, density);
        // Both scan in raster order, so the component order agrees too.
        assert_eq!(labeled(&img), flood_fill(&img), "image {i}");
    }
}

#[test]
fn bounding_boxes_enclose_their_pixels() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let img = random_image(&mut rng, 24, 17, 0.4);
        for region in connected_regions(&img) {
            let b = region.bbox;
            assert!(region.pixels.iter().all(|&(r, c)| b.contains(r, c)));
            assert!(region.pixels.iter().any(|&(r, _)| r == b.top));
            assert!(region.pixels.iter().any(|&(r, _)| r == b.bottom));
            assert!(region.pixels.iter().any(|&(_, c)| c == b.left));
            assert!(region.pixels.iter().any(|&(_, c)| c == b.right));
        }
    }
}

proptest! {
    #[test]
    fn pixels_partition_foreground(seed in any::<u64>(), w in 1usize..40, h in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let img = random_image(&mut rng, w, h, 0.45);
        let regions = connected_regions(&img);
        let total: usize = regions.iter().map(|r| r.size()).sum();
        prop_assert_eq!(total, img.count_ones());
        prop_assert_eq!(labeled(&img), flood_fill(&img));
    }

    #[test]
    fn remove_noise_is_idempotent(seed in any::<u64>(), min_size in 1usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let img = random_image(&mut rng, 30, 30, 0.4);
        let once = remove_noise(&img, min_size);
        prop_assert_eq!(remove_noise(&once, min_size), once.clone());
        prop_assert!(connected_regions(&once).iter().all(|r| r.size() >= min_size));
        // Survivors are exactly the large components of the input.
        let kept: usize = flood_fill(&img).iter().filter(|s| s.len() >= min_size).map(|s| s.len()).sum();
        prop_assert_eq!(once.count_ones(), kept);
    }

    #[test]
    fn window_is_union_of_boxes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let img = random_image(&mut rng, 20, 20, 0.1);
        let regions = connected_regions(&img);
        let window = defect_window(&regions);
        prop_assert_eq!(window.is_present(), !regions.is_empty());
        if let Some(b) = window.bbox() {
            for r in &regions {
                prop_assert!(r.pixels.iter().all(|&(y, x)| b.contains(y, x)));
            }
        }
    }
}
