//! Covers of the bundled example spaces. Path covers treat point `i` as the
//! integer `i` of a unit path; tree covers need unit edge lengths.

use crate::metric::FiniteMetricSpace;
use crate::scalar::Scalar;

use super::{ColoredCover, Cover};

fn clip(start: i64, len: i64, n: usize) -> Vec<usize> {
    let lo = start.max(0);
    let hi = (start + len).min(n as i64);
    (lo..hi).map(|i| i as usize).collect()
}

/// Intervals of `length` points starting every `step` points.
///
/// With `length = 4r` and `step = 2r` this has dimension 1, Lebesgue number
/// at least `r + 1` and mesh `4r - 1`.
pub fn path_interval_cover<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    length: usize,
    step: usize,
) -> Cover {
    assert!(length >= step && step > 0, "intervals must overlap or abut");
    let n = space.len();
    let mut elements = Vec::new();
    let mut start = 0;
    loop {
        elements.push(clip(start as i64, length as i64, n));
        if start + length >= n {
            break;
        }
        start += step;
    }
    Cover::new(space, elements).expect("intervals cover the path")
}

/// Consecutive blocks of `block` points colored `0, 1, ..., colors-1` in turn.
///
/// With two colors same-colored blocks are `block + 1` apart.
pub fn path_block_cover<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    block: usize,
    colors: usize,
) -> ColoredCover {
    let n = space.len();
    let elements: Vec<Vec<usize>> = (0..n.div_ceil(block))
        .map(|k| clip((k * block) as i64, block as i64, n))
        .collect();
    let count = elements.len();
    let cover = Cover::new(space, elements).expect("blocks cover the path");
    ColoredCover::new(cover, (0..count).map(|k| k % colors).collect()).expect("one color each")
}

/// Cover with colors `0..=m` in which every point lies in exactly `m` color
/// classes: color `c` uses intervals of `m·s` points starting at
/// `c·s + k(m+1)s`. Same-colored intervals are `s + 1` apart, so each class
/// is `r`-disjoint for `r <= s`.
pub fn path_layered_cover<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    m: usize,
    s: usize,
) -> ColoredCover {
    assert!(m >= 1 && s >= 1);
    let n = space.len() as i64;
    let (m, s) = (m as i64, s as i64);
    let period = (m + 1) * s;
    let mut elements = Vec::new();
    let mut colors = Vec::new();
    for c in 0..=m {
        let mut start = c * s - period;
        while start < n {
            let e = clip(start, m * s, n as usize);
            if !e.is_empty() {
                elements.push(e);
                colors.push(c as usize);
            }
            start += period;
        }
    }
    let cover = Cover::new(space, elements).expect("layers cover the path");
    ColoredCover::new(cover, colors).expect("one color each")
}

/// Two-colored cover of a rooted tree with unit edges at scale `r >= 1`.
///
/// Annuli `kr <= depth < (k+1)r` are colored by the parity of `k` and split by
/// the ancestor at depth `kr - ⌈(r-1)/2⌉`. Same-colored pieces are more than
/// `r` apart and every piece has diameter below `3r`.
pub fn tree_annulus_cover<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    parents: &[Option<usize>],
    r: usize,
) -> ColoredCover {
    assert!(r >= 1);
    let n = parents.len();
    let mut depth = vec![0usize; n];
    for i in 1..n {
        depth[i] = depth[parents[i].expect("only the root has no parent")] + 1;
    }
    let back = r.saturating_sub(1).div_ceil(2);
    let ancestor = |mut v: usize, level: usize| {
        while depth[v] > level {
            v = parents[v].unwrap();
        }
        v
    };
    let mut keys: Vec<(usize, usize)> = Vec::new();
    let mut elements: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let k = depth[v] / r;
        let level = (k * r).saturating_sub(back);
        let key = (k, ancestor(v, level));
        match keys.iter().position(|&q| q == key) {
            Some(p) => elements[p].push(v),
            None => {
                keys.push(key);
                elements.push(vec![v]);
            }
        }
    }
    let colors = keys.iter().map(|&(k, _)| k % 2).collect();
    let cover = Cover::new(space, elements).expect("annuli cover the tree");
    ColoredCover::new(cover, colors).expect("one color each")
}
