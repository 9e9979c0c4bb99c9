use crate::metric::{product_index, FiniteMetricSpace, Quotient};
use crate::scalar::Scalar;

use super::{ColoredCover, Cover, CoverError};

/// Image of `cover` under the quotient map: `{ q(U) : U ∈ cover }`.
///
/// Elements with equal images are kept, so the output has as many elements
/// as the input.
pub fn pushforward_quotient_cover<T: Scalar>(cover: &Cover, quotient: &Quotient<T>) -> Cover {
    let elements: Vec<Vec<usize>> = cover
        .elements()
        .iter()
        .map(|e| {
            let mut image: Vec<usize> = e.iter().map(|&x| quotient.projection[x]).collect();
            image.sort_unstable();
            image.dedup();
            image
        })
        .collect();
    Cover::new(&quotient.space, elements).expect("images of a cover cover the quotient")
}

/// Product cover of colored covers of `m` factors, for the ℓ¹ product.
///
/// Each factor cover must use colors `0..=m`, and every factor point must lie
/// in elements of at least `m` distinct colors. Color class `i` of the result
/// consists of the products `U_1 × ... × U_m` of color-`i` elements; by
/// pigeonhole every product point lies in one of them. Point indices follow
/// [`crate::metric::product`].
pub fn product_cover<T: Scalar>(
    factors: &[(&FiniteMetricSpace<T>, &ColoredCover)],
) -> Result<ColoredCover, CoverError> {
    let m = factors.len();
    for (f, (space, cover)) in factors.iter().enumerate() {
        if let Some(&color) = cover.colors.iter().find(|&&c| c > m) {
            return Err(CoverError::ColorRange {
                factor: f,
                color,
                colors: m + 1,
            });
        }
        let counts = cover.color_multiplicities();
        if let Some(x) = counts.iter().position(|&c| c < m) {
            return Err(CoverError::Multiplicity {
                factor: f,
                point: space.label(x).to_string(),
                count: counts[x],
                needed: m,
            });
        }
    }
    let sizes: Vec<usize> = factors.iter().map(|(s, _)| s.len()).collect();
    let total: usize = sizes.iter().product();
    let mut elements = Vec::new();
    let mut colors = Vec::new();
    for color in 0..=m {
        let classes: Vec<Vec<&Vec<usize>>> = factors
            .iter()
            .map(|(_, c)| {
                c.class(color)
                    .into_iter()
                    .map(|k| &c.cover.elements()[k])
                    .collect()
            })
            .collect();
        if classes.iter().any(Vec::is_empty) {
            continue;
        }
        let mut choice = vec![0usize; m];
        'tuples: loop {
            let parts: Vec<&Vec<usize>> = (0..m).map(|j| classes[j][choice[j]]).collect();
            elements.push(product_set(&sizes, &parts));
            colors.push(color);
            let mut j = m;
            while j > 0 {
                j -= 1;
                choice[j] += 1;
                if choice[j] < classes[j].len() {
                    continue 'tuples;
                }
                choice[j] = 0;
            }
            break;
        }
    }
    let mut covered = vec![false; total];
    for e in &elements {
        for &i in e {
            covered[i] = true;
        }
    }
    if let Some(x) = covered.iter().position(|c| !c) {
        let mut coords = vec![0; m];
        let mut rest = x;
        for j in (0..m).rev() {
            coords[j] = rest % sizes[j];
            rest /= sizes[j];
        }
        let labels: Vec<&str> = coords
            .iter()
            .zip(factors)
            .map(|(&c, (s, _))| s.label(c))
            .collect();
        return Err(CoverError::Uncovered(format!("({})", labels.join(","))));
    }
    let space_id = factors
        .iter()
        .map(|(s, _)| s.id())
        .collect::<Vec<_>>()
        .join("×");
    Ok(ColoredCover {
        cover: Cover {
            space_id,
            points: total,
            elements,
        },
        colors,
    })
}

fn product_set(sizes: &[usize], parts: &[&Vec<usize>]) -> Vec<usize> {
    let mut out = vec![Vec::new()];
    for part in parts {
        let mut next = Vec::with_capacity(out.len() * part.len());
        for prefix in &out {
            for &x in part.iter() {
                let mut p: Vec<usize> = prefix.clone();
                p.push(x);
                next.push(p);
            }
        }
        out = next;
    }
    let mut indices: Vec<usize> = out.iter().map(|c| product_index(sizes, c)).collect();
    indices.sort_unstable();
    indices
}

/// `f(n)` from the recurrence `f(2) = 3`, `f(n) = 3 f(n-1) + 2`; `None` for
/// `n < 2` or on overflow.
pub fn product_control_count(n: u32) -> Option<u128> {
    if n < 2 {
        return None;
    }
    let mut f: u128 = 3;
    for _ in 3..=n {
        f = f.checked_mul(3)?.checked_add(2)?;
    }
    Some(f)
}

/// Closed form `3^(n-1) + 3^(n-2) - 1` of the same recurrence.
pub fn product_control_closed(n: u32) -> Option<u128> {
    if n < 2 {
        return None;
    }
    let a = 3u128.checked_pow(n - 1)?;
    let b = 3u128.checked_pow(n - 2)?;
    a.checked_add(b).map(|s| s - 1)
}
