use std::fmt;

/// Axis-aligned box in integer pixel coordinates: left, top, width, height.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BBox {
    x: u32,
    y: u32,
    w: u32,
    h: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoxError {
    EmptyExtent,
    OutOfBounds { width: u32, height: u32 },
}

impl fmt::Display for BoxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoxError::EmptyExtent => write!(f, "box width and height must be positive"),
            BoxError::OutOfBounds { width, height } => {
                write!(f, "box extends outside the {width}x{height} image")
            }
        }
    }
}

impl std::error::Error for BoxError {}

impl BBox {
    pub fn new(x: u32, y: u32, w: u32, h: u32) -> Result<Self, BoxError> {
        if w == 0 || h == 0 {
            return Err(BoxError::EmptyExtent);
        }
        Ok(BBox { x, y, w, h })
    }

    pub fn x(&self) -> u32 {
        self.x
    }

    pub fn y(&self) -> u32 {
        self.y
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn right(&self) -> u64 {
        self.x as u64 + self.w as u64
    }

    pub fn bottom(&self) -> u64 {
        self.y as u64 + self.h as u64
    }

    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    pub fn fits_within(&self, width: u32, height: u32) -> bool {
        self.right() <= width as u64 && self.bottom() <= height as u64
    }

    pub fn check_within(&self, width: u32, height: u32) -> Result<(), BoxError> {
        if self.fits_within(width, height) {
            Ok(())
        } else {
            Err(BoxError::OutOfBounds { width, height })
        }
    }

    pub fn intersection_area(&self, other: &BBox) -> u64 {
        let left = self.x.max(other.x) as u64;
        let top = self.y.max(other.y) as u64;
        let right = self.right().min(other.right());
        let bottom = self.bottom().min(other.bottom());
        right.saturating_sub(left) * bottom.saturating_sub(top)
    }
}

/// Fraction of `object` covered by `region`: |region ∩ object| / |object|.
///
/// This is containment of the object in the region rather than IoU, so a
/// small object fully inside a large region scores 1.
pub fn overlap_ratio(region: &BBox, object: &BBox) -> f64 {
    region.intersection_area(object) as f64 / object.area() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raster_ratio(region: &BBox, object: &BBox) -> f64 {
        let mut covered = 0u64;
        let mut total = 0u64;
        for py in object.y..object.y + object.h {
            for px in object.x..object.x + object.w {
                total += 1;
                if px >= region.x && px < region.x + region.w && py >= region.y && py < region.y + region.h {
                    covered += 1;
                }
            }
        }
        covered as f64 / total as f64
    }

    fn b(x: u32, y: u32, w: u32, h: u32) -> BBox {
        BBox::new(x, y, w, h).unwrap()
    }

    #[test]
    fn identical_and_disjoint() {
        assert_eq!(overlap_ratio(&b(3, 4, 10, 7), &b(3, 4, 10, 7)), 1.0);
        assert_eq!(overlap_ratio(&b(0, 0, 5, 5), &b(5, 0, 5, 5)), 0.0);
        assert_eq!(overlap_ratio(&b(0, 0, 5, 5), &b(50, 50, 5, 5)), 0.0);
    }

    #[test]
    fn quarter_overlap_matches_raster() {
        let region = b(0, 0, 10, 10);
        let object = b(5, 5, 10, 10);
        assert_eq!(raster_ratio(&region, &object), 0.25);
        assert_eq!(overlap_ratio(&region, &object), 0.25);
    }

    #[test]
    fn object_inside_large_region_is_fully_covered() {
        assert_eq!(overlap_ratio(&b(0, 0, 500, 400), &b(10, 10, 20, 20)), 1.0);
        // but not the other way around
        assert_eq!(overlap_ratio(&b(10, 10, 20, 20), &b(0, 0, 40, 40)), 0.25);
    }

    #[test]
    fn rejects_empty_extent_and_checks_image_bounds() {
        assert_eq!(BBox::new(0, 0, 0, 3), Err(BoxError::EmptyExtent));
        assert_eq!(BBox::new(0, 0, 3, 0), Err(BoxError::EmptyExtent));
        assert!(b(90, 0, 10, 10).fits_within(100, 10));
        assert!(!b(91, 0, 10, 10).fits_within(100, 10));
    }
}
