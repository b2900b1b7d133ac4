use super::BinaryImage;

/// Inclusive pixel rectangle, `(row, col)` corners.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoundingBox {
    pub top: usize,
    pub left: usize,
    pub bottom: usize,
    pub right: usize,
}

impl BoundingBox {
    pub fn point(row: usize, col: usize) -> Self {
        BoundingBox {
            top: row,
            left: col,
            bottom: row,
            right: col,
        }
    }

    pub fn include(&mut self, row: usize, col: usize) {
        self.top = self.top.min(row);
        self.bottom = self.bottom.max(row);
        self.left = self.left.min(col);
        self.right = self.right.max(col);
    }

    pub fn union(&self, other: &BoundingBox) -> BoundingBox {
        BoundingBox {
            top: self.top.min(other.top),
            left: self.left.min(other.left),
            bottom: self.bottom.max(other.bottom),
            right: self.right.max(other.right),
        }
    }

    pub fn height(&self) -> usize {
        self.bottom - self.top + 1
    }

    pub fn width(&self) -> usize {
        self.right - self.left + 1
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        (self.top..=self.bottom).contains(&row) && (self.left..=self.right).contains(&col)
    }
}

/// One maximal 8-connected component of 1-pixels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectRegion {
    /// `(row, col)` in raster order.
    pub pixels: Vec<(usize, usize)>,
    pub bbox: BoundingBox,
}

impl DefectRegion {
    pub fn size(&self) -> usize {
        self.pixels.len()
    }
}

/// Smallest rectangle enclosing every defect region, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DefectWindow(pub Option<BoundingBox>);

impl DefectWindow {
    pub fn is_present(&self) -> bool {
        self.0.is_some()
    }

    pub fn bbox(&self) -> Option<BoundingBox> {
        self.0
    }
}

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn new() -> Self {
        // Label 0 is background.
        DisjointSet { parent: vec![0] }
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> u32 {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        lo
    }
}

/// Two-pass union-find labeling; returns a per-pixel component index
/// (`u32::MAX` for background) and the component count. Components are
/// numbered by their first pixel in raster order.
fn label(img: &BinaryImage) -> (Vec<u32>, usize) {
    let (w, h) = (img.width(), img.height());
    let px = img.as_slice();
    let mut labels = vec![0u32; w * h];
    let mut sets = DisjointSet::new();

    for y in 0..h {
        for x in 0..w {
            if px[y * w + x] == 0 {
                continue;
            }
            let mut current = 0u32;
            // Already-visited 8-neighbours: W, NW, N, NE.
            let mut visit = |ny: usize, nx: usize, current: &mut u32| {
                let l = labels[ny * w + nx];
                if l != 0 {
                    *current = if *current == 0 {
                        l
                    } else {
                        sets.union(*current, l)
                    };
                }
            };
            if x > 0 {
                visit(y, x - 1, &mut current);
            }
            if y > 0 {
                if x > 0 {
                    visit(y - 1, x - 1, &mut current);
                }
                visit(y - 1, x, &mut current);
                if x + 1 < w {
                    visit(y - 1, x + 1, &mut current);
                }
            }
            labels[y * w + x] = if current == 0 { sets.make() } else { current };
        }
    }

    let mut compact = vec![u32::MAX; sets.parent.len()];
    let mut count = 0u32;
    let mut out = vec![u32::MAX; w * h];
    for (o, &l) in out.iter_mut().zip(&labels) {
        if l == 0 {
            continue;
        }
        let root = sets.find(l) as usize;
        if compact[root] == u32::MAX {
            compact[root] = count;
            count += 1;
        }
        *o = compact[root];
    }
    (out, count as usize)
}

/// Partitions the 1-pixels into maximal 8-connected regions, ordered by each
/// region's first pixel in raster order.
pub fn connected_regions(img: &BinaryImage) -> Vec<DefectRegion> {
    let w = img.width();
    let (labels, count) = label(img);
    let mut regions: Vec<DefectRegion> = Vec::with_capacity(count);
    for (i, &l) in labels.iter().enumerate() {
        if l == u32::MAX {
            continue;
        }
        let (row, col) = (i / w, i % w);
        let l = l as usize;
        if l == regions.len() {
            regions.push(DefectRegion {
                pixels: vec![(row, col)],
                bbox: BoundingBox::point(row, col),
            });
        } else {
            let r = &mut regions[l];
            r.pixels.push((row, col));
            r.bbox.include(row, col);
        }
    }
    regions
}

/// Clears every 8-connected component smaller than `min_size` pixels.
pub fn remove_noise(img: &BinaryImage, min_size: usize) -> BinaryImage {
    let (labels, count) = label(img);
    let mut sizes = vec![0usize; count];
    for &l in labels.iter().filter(|&&l| l != u32::MAX) {
        sizes[l as usize] += 1;
    }
    let data = labels
        .iter()
        .map(|&l| (l != u32::MAX && sizes[l as usize] >= min_size) as u8)
        .collect();
    BinaryImage::from_vec(img.width(), img.height(), data).expect("same dimensions")
}

pub fn defect_window(regions: &[DefectRegion]) -> DefectWindow {
    DefectWindow(regions.iter().map(|r| r.bbox).reduce(|a, b| a.union(&b)))
}
