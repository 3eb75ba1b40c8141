//! Connected-component labeling and small-artifact cleanup.

use crate::error::{Error, Result};
use crate::raster::BinaryImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Connectivity {
    /// N, S, E, W neighbours.
    Four,
    /// All eight neighbours.
    #[default]
    Eight,
}

impl Connectivity {
    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            _ => Err(Error::InvalidParameter(format!(
                "connectivity must be 4 or 8, got {n}"
            ))),
        }
    }

    pub fn as_number(self) -> u32 {
        match self {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
        }
    }
}

/// Axis-aligned pixel rectangle, origin top-left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundingBox {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl BoundingBox {
    pub fn right(&self) -> usize {
        self.x + self.width - 1
    }

    pub fn bottom(&self) -> usize {
        self.y + self.height - 1
    }
}

/// A connected ink region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub id: u32,
    pub area: usize,
    pub bbox: BoundingBox,
}

impl Component {
    /// Inclusive (top, bottom) rows.
    pub fn row_extent(&self) -> (usize, usize) {
        (self.bbox.y, self.bbox.bottom())
    }

    pub fn height(&self) -> usize {
        self.bbox.height
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    pub width: usize,
    pub height: usize,
    /// Row-major labels, 0 for background.
    pub labels: Vec<u32>,
    /// Sorted by id; `components[i].id == i + 1`.
    pub components: Vec<Component>,
}

impl LabelMap {
    #[inline]
    pub fn label(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    pub fn component(&self, id: u32) -> Option<&Component> {
        self.components.get((id as usize).checked_sub(1)?)
    }

    /// Binary image holding only the pixels whose label is in `keep`
    /// (indexed by label, entry 0 ignored).
    pub fn select(&self, keep: &[bool]) -> BinaryImage {
        let data = self
            .labels
            .iter()
            .map(|&l| (l != 0 && keep[l as usize]) as u8)
            .collect();
        BinaryImage::from_raw(self.width, self.height, data)
    }
}

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn new() -> Self {
        DisjointSet { parent: vec![0] }
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
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

/// Two-pass union-find labeling. Final labels follow first-encounter
/// raster order starting at 1.
pub fn label_components(img: &BinaryImage, connectivity: Connectivity) -> LabelMap {
    let (w, h) = (img.width(), img.height());
    let mut provisional = vec![0u32; w * h];
    let mut sets = DisjointSet::new();

    for y in 0..h {
        for x in 0..w {
            if !img.is_ink(x, y) {
                continue;
            }
            let mut label = 0u32;
            let mut visit = |nl: u32, sets: &mut DisjointSet| {
                if nl != 0 {
                    label = if label == 0 { nl } else { sets.union(label, nl) };
                }
            };
            if x > 0 {
                visit(provisional[y * w + x - 1], &mut sets);
            }
            if y > 0 {
                let up = (y - 1) * w;
                visit(provisional[up + x], &mut sets);
                if connectivity == Connectivity::Eight {
                    if x > 0 {
                        visit(provisional[up + x - 1], &mut sets);
                    }
                    if x + 1 < w {
                        visit(provisional[up + x + 1], &mut sets);
                    }
                }
            }
            provisional[y * w + x] = if label == 0 { sets.make() } else { label };
        }
    }

    let mut final_of = vec![0u32; sets.parent.len()];
    let mut components: Vec<Component> = Vec::new();
    let mut extents: Vec<(usize, usize, usize, usize)> = Vec::new();
    let mut labels = provisional;
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if labels[i] == 0 {
                continue;
            }
            let root = sets.find(labels[i]) as usize;
            if final_of[root] == 0 {
                components.push(Component {
                    id: components.len() as u32 + 1,
                    area: 0,
                    bbox: BoundingBox { x, y, width: 1, height: 1 },
                });
                extents.push((x, y, x, y));
                final_of[root] = components.len() as u32;
            }
            let id = final_of[root];
            labels[i] = id;
            let k = id as usize - 1;
            components[k].area += 1;
            let e = &mut extents[k];
            e.0 = e.0.min(x);
            e.1 = e.1.min(y);
            e.2 = e.2.max(x);
            e.3 = e.3.max(y);
        }
    }
    for (c, &(x0, y0, x1, y1)) in components.iter_mut().zip(&extents) {
        c.bbox = BoundingBox {
            x: x0,
            y: y0,
            width: x1 - x0 + 1,
            height: y1 - y0 + 1,
        };
    }

    LabelMap {
        width: w,
        height: h,
        labels,
        components,
    }
}

/// Morphological clean: erase ink pixels with no ink in their 8-neighbourhood.
pub fn clean_isolated(img: &BinaryImage) -> BinaryImage {
    let (w, h) = (img.width(), img.height());
    let mut out = img.data().to_vec();
    for y in 0..h {
        for x in 0..w {
            if !img.is_ink(x, y) {
                continue;
            }
            let mut has_neighbour = false;
            'scan: for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    if (nx, ny) != (x, y) && img.is_ink(nx, ny) {
                        has_neighbour = true;
                        break 'scan;
                    }
                }
            }
            if !has_neighbour {
                out[y * w + x] = 0;
            }
        }
    }
    BinaryImage::from_raw(w, h, out)
}

/// Erase every component smaller than `min_area` pixels.
pub fn remove_small(img: &BinaryImage, min_area: usize, connectivity: Connectivity) -> BinaryImage {
    if min_area <= 1 {
        return img.clone();
    }
    let map = label_components(img, connectivity);
    let mut keep = vec![false; map.components.len() + 1];
    for c in &map.components {
        keep[c.id as usize] = c.area >= min_area;
    }
    map.select(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn image(rows: &[&str]) -> BinaryImage {
        let h = rows.len();
        let w = rows[0].len();
        BinaryImage::from_fn(w, h, |x, y| rows[y].as_bytes()[x] == b'#').unwrap()
    }

    #[test]
    fn blank_has_no_components() {
        let map = label_components(&BinaryImage::blank(5, 5).unwrap(), Connectivity::Eight);
        assert!(map.components.is_empty());
        assert!(map.labels.iter().all(|&l| l == 0));
    }

    #[test]
    fn diagonal_contact_depends_on_connectivity() {
        let img = image(&["#.", ".#"]);
        assert_eq!(label_components(&img, Connectivity::Eight).components.len(), 1);
        assert_eq!(label_components(&img, Connectivity::Four).components.len(), 2);
    }

    #[test]
    fn labels_follow_first_encounter_order() {
        // The U shape is discovered as two provisional runs that merge below.
        let img = image(&[
            "#.#..#",
            "#.#...",
            "###.##",
        ]);
        let map = label_components(&img, Connectivity::Four);
        assert_eq!(map.label(0, 0), 1);
        assert_eq!(map.label(2, 0), 1);
        assert_eq!(map.label(5, 0), 2);
        assert_eq!(map.label(4, 2), 3);
        let c1 = map.component(1).unwrap();
        assert_eq!(c1.area, 7);
        assert_eq!(c1.bbox, BoundingBox { x: 0, y: 0, width: 3, height: 3 });
        assert_eq!(c1.row_extent(), (0, 2));
    }

    #[test]
    fn clean_removes_only_isolated_points() {
        let single = image(&["...", ".#.", "..."]);
        assert!(clean_isolated(&single).is_blank());
        let domino = image(&["....", ".##.", "...."]);
        assert_eq!(clean_isolated(&domino), domino);
    }

    #[test]
    fn remove_small_thresholds() {
        let img = image(&["###...", "......", "....##", "....##"]);
        assert_eq!(remove_small(&img, 1, Connectivity::Eight), img);
        let only_square = image(&["......", "......", "....##", "....##"]);
        assert_eq!(remove_small(&img, 4, Connectivity::Eight), only_square);
        assert!(remove_small(&img, 5, Connectivity::Eight).is_blank());
    }

    fn random_image(w: usize, h: usize, bits: &[bool]) -> BinaryImage {
        BinaryImage::from_fn(w, h, |x, y| bits[(y * w + x) % bits.len()]).unwrap()
    }

    proptest! {
        #[test]
        fn labels_partition_ink(bits in prop::collection::vec(any::<bool>(), 64..=64), four in any::<bool>()) {
            let img = random_image(8, 8, &bits);
            let conn = if four { Connectivity::Four } else { Connectivity::Eight };
            let map = label_components(&img, conn);
            let mut total = 0;
            for (i, &l) in map.labels.iter().enumerate() {
                prop_assert_eq!(l != 0, img.data()[i] != 0);
            }
            for (k, c) in map.components.iter().enumerate() {
                prop_assert_eq!(c.id as usize, k + 1);
                prop_assert!(c.area >= 1 && c.area <= c.bbox.width * c.bbox.height);
                prop_assert_eq!(map.labels.iter().filter(|&&l| l == c.id).count(), c.area);
                total += c.area;
            }
            prop_assert_eq!(total, img.ink_count());
        }

        #[test]
        fn clean_is_idempotent(bits in prop::collection::vec(prop::bool::weighted(0.2), 100..=100)) {
            let img = random_image(10, 10, &bits);
            let once = clean_isolated(&img);
            prop_assert_eq!(clean_isolated(&once), once);
        }

        #[test]
        fn remove_small_composes_as_max(bits in prop::collection::vec(prop::bool::weighted(0.35), 144..=144),
                                        a in 1usize..8, b in 1usize..8) {
            let img = random_image(12, 12, &bits);
            let c = Connectivity::Eight;
            prop_assert_eq!(
                remove_small(&remove_small(&img, b, c), a, c),
                remove_small(&img, a.max(b), c)
            );
        }
    }
}
