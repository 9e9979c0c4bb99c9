use rayon::prelude::*;

use crate::metric::{FiniteMetricSpace, MetricFamily};
use crate::scalar::{self, Scalar};
use crate::verdict::Verdict;

use super::{color_greedily, ColoredCover, Cover, CoverError};

/// Cover of one family member as written in a certificate. Colors are
/// optional; uncolored covers are colored greedily where colors matter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberCover {
    pub member: String,
    pub elements: Vec<Vec<usize>>,
    pub colors: Option<Vec<usize>>,
}

impl MemberCover {
    pub fn uncolored(member: impl Into<String>, cover: &Cover) -> Self {
        Self {
            member: member.into(),
            elements: cover.elements().to_vec(),
            colors: None,
        }
    }

    pub fn colored(member: impl Into<String>, cover: &ColoredCover) -> Self {
        Self {
            member: member.into(),
            elements: cover.cover.elements().to_vec(),
            colors: Some(cover.colors.clone()),
        }
    }
}

/// One scale of an asdim certificate: covers with dimension `<= n`,
/// Lebesgue number `>= lambda` and mesh `<= mesh`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsdimEntry<T> {
    pub lambda: T,
    pub mesh: T,
    pub covers: Vec<MemberCover>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsdimCertificate<T> {
    pub family_id: String,
    pub n: usize,
    pub entries: Vec<AsdimEntry<T>>,
}

/// One scale `r` of an Assouad–Nagata control certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct AnEntry<T> {
    pub r: T,
    pub covers: Vec<MemberCover>,
}

/// Colored covers with `n + 1` colors, each color class `r`-disjoint and
/// mesh `<= m·r + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnControlCertificate<T> {
    pub family_id: String,
    pub n: usize,
    pub m: T,
    pub b: T,
    pub entries: Vec<AnEntry<T>>,
}

fn resolve<'a, T: Scalar>(
    family: &'a MetricFamily<T>,
    family_id: &str,
    covers: &'a [MemberCover],
) -> Result<Vec<(&'a FiniteMetricSpace<T>, Option<&'a MemberCover>)>, CoverError> {
    if family.id != family_id {
        return Err(CoverError::FamilyMismatch {
            expected: family.id.clone(),
            found: family_id.to_string(),
        });
    }
    for c in covers {
        let space = family
            .member(&c.member)
            .ok_or_else(|| CoverError::UnknownMember {
                family: family.id.clone(),
                member: c.member.clone(),
            })?;
        for (k, e) in c.elements.iter().enumerate() {
            if e.is_empty() {
                return Err(CoverError::EmptyElement(k));
            }
            if let Some(&index) = e.iter().find(|&&i| i >= space.len()) {
                return Err(CoverError::IndexOutOfRange {
                    element: k,
                    index,
                    len: space.len(),
                });
            }
        }
        if let Some(colors) = &c.colors {
            if colors.len() != c.elements.len() {
                return Err(CoverError::ColorCount {
                    colors: colors.len(),
                    elements: c.elements.len(),
                });
            }
        }
    }
    Ok(family
        .members()
        .iter()
        .map(|m| (m, covers.iter().find(|c| c.member == m.id())))
        .collect())
}

/// Builds the cover, recording an uncovered point as a failure.
fn cover_or_fail<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    mc: &MemberCover,
    verdict: &mut Verdict,
) -> Option<Cover> {
    match Cover::new(space, mc.elements.clone()) {
        Ok(c) => {
            verdict.pass(
                "coverage",
                format!("{} elements cover {} points", c.len(), space.len()),
            );
            Some(c)
        }
        Err(CoverError::Uncovered(x)) => {
            verdict.fail("coverage", format!("point {x} lies in no element"));
            None
        }
        Err(e) => {
            verdict.fail("coverage", e.to_string());
            None
        }
    }
}

fn element_name<T: Scalar>(space: &FiniteMetricSpace<T>, cover: &Cover, k: usize) -> String {
    let labels: Vec<&str> = cover.elements()[k]
        .iter()
        .map(|&i| space.label(i))
        .collect();
    format!("element {k} {{{}}}", labels.join(","))
}

fn check_asdim_member<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    mc: &MemberCover,
    n: usize,
    lambda: T,
    mesh: T,
    tol: T,
) -> Verdict {
    let mut v = Verdict::new();
    let Some(cover) = cover_or_fail(space, mc, &mut v) else {
        return v;
    };
    let (dim, x) = cover.dimension_witness();
    if dim <= n {
        v.pass("dimension", format!("{dim} <= {n}"));
    } else {
        v.fail(
            "dimension",
            format!(
                "point {} lies in {} elements; dimension {dim} > {n}",
                space.label(x),
                dim + 1
            ),
        );
    }
    let (leb, x) = cover.lebesgue_witness(space);
    if leb.ge_tol(lambda, tol) {
        v.pass("lebesgue", format!("{leb} >= {lambda}"));
    } else {
        let x = x.map_or("-", |x| space.label(x));
        v.fail("lebesgue", format!("{leb} < {lambda} at point {x}"));
    }
    let (m, k) = cover.mesh_witness(space);
    if scalar::le_tol(m, mesh, tol) {
        v.pass("mesh", format!("{m} <= {mesh}"));
    } else {
        let k = k.expect("a non-empty cover has elements");
        v.fail(
            "mesh",
            format!(
                "{} has diameter {m} > {mesh}",
                element_name(space, &cover, k)
            ),
        );
    }
    v
}

/// Checks every entry: for each member the cover has dimension `<= n`,
/// Lebesgue number `>= λ` and mesh `<= R`.
pub fn check_asdim_certificate<T: Scalar>(
    cert: &AsdimCertificate<T>,
    family: &MetricFamily<T>,
    tol: T,
) -> Result<Verdict, CoverError> {
    let mut verdict = Verdict::new();
    for (k, entry) in cert.entries.iter().enumerate() {
        let members = resolve(family, &cert.family_id, &entry.covers)?;
        let results: Vec<(String, Verdict)> = members
            .par_iter()
            .map(|(space, mc)| {
                let v = match mc {
                    Some(mc) => {
                        check_asdim_member(space, mc, cert.n, entry.lambda, entry.mesh, tol)
                    }
                    None => {
                        let mut v = Verdict::new();
                        v.fail("cover", "no cover supplied");
                        v
                    }
                };
                (space.id().to_string(), v)
            })
            .collect();
        for (member, v) in results {
            verdict.extend_prefixed(&format!("entry[{k}]/member[{member}]"), v);
        }
    }
    Ok(verdict)
}

fn check_an_member<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    mc: &MemberCover,
    n: usize,
    r: T,
    bound: T,
    tol: T,
) -> Verdict {
    let mut v = Verdict::new();
    let Some(cover) = cover_or_fail(space, mc, &mut v) else {
        return v;
    };
    let colored = match &mc.colors {
        Some(colors) => {
            let colored = ColoredCover::new(cover.clone(), colors.clone()).expect("checked length");
            if let Some(k) = colors.iter().position(|&c| c > n) {
                v.fail(
                    "colors",
                    format!("element {k} has color {} outside 0..={n}", colors[k]),
                );
                return v;
            }
            v.pass("colors", format!("colors within 0..={n}"));
            colored
        }
        None => match color_greedily(space, &cover, n + 1, r) {
            Some(c) => {
                v.pass(
                    "colors",
                    format!("greedy coloring with {} colors", c.color_count()),
                );
                c
            }
            None => {
                v.fail(
                    "colors",
                    format!("greedy coloring needs more than {} colors", n + 1),
                );
                return v;
            }
        },
    };
    match colored.disjointness_violation(space, r) {
        None => v.pass("disjointness", format!("every color class is {r}-disjoint")),
        Some((a, b, d)) => v.fail(
            "disjointness",
            format!(
                "{} and {} share color {} at distance {d} <= {r}",
                element_name(space, &cover, a),
                element_name(space, &cover, b),
                colored.colors[a]
            ),
        ),
    }
    let (m, k) = cover.mesh_witness(space);
    if scalar::le_tol(m, bound, tol) {
        v.pass("mesh", format!("{m} <= {bound}"));
    } else {
        let k = k.expect("a non-empty cover has elements");
        v.fail(
            "mesh",
            format!(
                "{} has diameter {m} > {bound}",
                element_name(space, &cover, k)
            ),
        );
    }
    v
}

/// Checks every scale `R`: colors in `0..=n`, each color class `R`-disjoint,
/// and mesh `<= M·R + b`.
pub fn check_an_control<T: Scalar>(
    cert: &AnControlCertificate<T>,
    family: &MetricFamily<T>,
    tol: T,
) -> Result<Verdict, CoverError> {
    let mut verdict = Verdict::new();
    for (k, entry) in cert.entries.iter().enumerate() {
        let members = resolve(family, &cert.family_id, &entry.covers)?;
        let bound = cert.m * entry.r + cert.b;
        let results: Vec<(String, Verdict)> = members
            .par_iter()
            .map(|(space, mc)| {
                let v = match mc {
                    Some(mc) => check_an_member(space, mc, cert.n, entry.r, bound, tol),
                    None => {
                        let mut v = Verdict::new();
                        v.fail("cover", "no cover supplied");
                        v
                    }
                };
                (space.id().to_string(), v)
            })
            .collect();
        for (member, v) in results {
            verdict.extend_prefixed(&format!("entry[{k}]/member[{member}]"), v);
        }
    }
    Ok(verdict)
}
