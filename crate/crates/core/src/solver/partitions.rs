use crate::model::ClassSizeVector;

/// Every partition of `Z` into positive parts, each exactly once, in
/// non-decreasing part order. Partitions come grouped by part count
/// (fewest first) and lexicographically within a group.
#[derive(Debug, Clone)]
pub struct Partitions {
    total: usize,
    parts: Vec<usize>,
    max_parts: usize,
    fresh: bool,
}

impl Partitions {
    pub fn new(total: usize) -> Self {
        Self::with_part_range(total, 1, total)
    }

    /// Partitions with exactly `parts` parts.
    pub fn exact(total: usize, parts: usize) -> Self {
        Self::with_part_range(total, parts, parts)
    }

    fn with_part_range(total: usize, min_parts: usize, max_parts: usize) -> Self {
        let mut it = Self {
            total,
            parts: Vec::new(),
            max_parts,
            fresh: true,
        };
        if total > 0 && min_parts >= 1 && min_parts <= max_parts && min_parts <= total {
            it.reset_to(min_parts);
        } else {
            it.fresh = false;
        }
        it
    }

    fn reset_to(&mut self, m: usize) {
        self.parts.clear();
        self.parts.resize(m - 1, 1);
        self.parts.push(self.total - (m - 1));
    }

    /// Advances to the next partition and returns it as a slice.
    pub fn next_slice(&mut self) -> Option<&[usize]> {
        if self.fresh {
            self.fresh = false;
            return Some(&self.parts);
        }
        if self.parts.is_empty() {
            return None;
        }
        if !self.advance_within_count() {
            let m = self.parts.len() + 1;
            if m > self.max_parts || m > self.total {
                self.parts.clear();
                return None;
            }
            self.reset_to(m);
        }
        Some(&self.parts)
    }

    fn advance_within_count(&mut self) -> bool {
        let m = self.parts.len();
        if m < 2 {
            return false;
        }
        let mut prefix: usize = self.parts[..m - 1].iter().sum();
        for i in (0..m - 1).rev() {
            prefix -= self.parts[i];
            let v = self.parts[i] + 1;
            let fill = v * (m - 1 - i);
            if prefix + fill + v <= self.total {
                let last = self.total - prefix - fill;
                self.parts[i..m - 1].fill(v);
                self.parts[m - 1] = last;
                return true;
            }
        }
        false
    }
}

impl Iterator for Partitions {
    type Item = ClassSizeVector;

    fn next(&mut self) -> Option<ClassSizeVector> {
        self.next_slice()
            .map(|s| ClassSizeVector::from_sorted(s.to_vec()))
    }
}

/// All partitions of `Z`; see [`Partitions`] for the order.
pub fn enumerate_partitions(total: usize) -> Partitions {
    Partitions::new(total)
}
