//! Flat, lexicographically ordered point sets in `F_q^d`.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;
use crate::field::FieldCtx;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    d: usize,
    coords: Vec<u32>,
}

impl PointSet {
    pub fn from_coords(d: usize, coords: Vec<u32>) -> Self {
        assert_eq!(coords.len() % d, 0, "coordinate buffer not a multiple of d");
        Self { d, coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, u32> {
        self.coords.chunks_exact(self.d)
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn contains(&self, x: &[u32]) -> bool {
        // sorted lexicographically, so binary search over chunks
        let n = self.len();
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(x) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn as_flat(&self) -> &[u32] {
        &self.coords
    }
}

/// Scans every point of `F_q^d` and keeps those satisfying `pred`, in
/// lexicographic order. Work is split on the leading coordinate.
pub fn scan<F>(ctx: &FieldCtx, pred: F) -> Result<PointSet>
where
    F: Fn(&[u32]) -> bool + Sync,
{
    let total = ctx.check_budget()?;
    let q = ctx.q() as usize;
    let d = ctx.d();
    let slab = total / q;

    let scan_slab = |lead: usize| -> Vec<u32> {
        let mut out = Vec::new();
        let mut m = vec![0u32; d];
        for offset in 0..slab {
            ctx.decode_into(lead * slab + offset, &mut m);
            if pred(&m) {
                out.extend_from_slice(&m);
            }
        }
        out
    };

    #[cfg(feature = "parallel")]
    let slabs: Vec<Vec<u32>> = (0..q).into_par_iter().map(scan_slab).collect();
    #[cfg(not(feature = "parallel"))]
    let slabs: Vec<Vec<u32>> = (0..q).map(scan_slab).collect();

    Ok(PointSet::from_coords(d, slabs.concat()))
}
