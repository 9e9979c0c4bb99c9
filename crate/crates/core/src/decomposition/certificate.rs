use std::collections::HashSet;

use rayon::prelude::*;

use crate::cover::Cover;
use crate::metric::{FiniteMetricSpace, MetricFamily, PointSubset};
use crate::scalar::{self, Scalar};
use crate::verdict::Verdict;

use super::DecompositionError;

/// Colored pieces of one member: `colors[i]` lists the pieces of color `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberPieces {
    pub member: String,
    pub colors: Vec<Vec<Vec<usize>>>,
}

impl MemberPieces {
    /// All pieces in color order with their member-family ids
    /// `<member>/c<i>/p<j>`.
    pub fn named_pieces(&self) -> Vec<(String, &[usize])> {
        let mut out = Vec::new();
        for (i, pieces) in self.colors.iter().enumerate() {
            for (j, p) in pieces.iter().enumerate() {
                out.push((format!("{}/c{i}/p{j}", self.member), p.as_slice()));
            }
        }
        out
    }

    /// The pieces as a cover of `space` (all colors together).
    pub fn to_cover<T: Scalar>(
        &self,
        space: &FiniteMetricSpace<T>,
    ) -> Result<Cover, crate::cover::CoverError> {
        Cover::new(space, self.colors.iter().flatten().cloned().collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StageNext<T> {
    /// Every piece has diameter at most this bound.
    LeafBound(T),
    /// The pieces form a family decomposed by the named stage.
    Child(String),
}

/// One `(r, n)`-decomposition of a family.
#[derive(Clone, Debug, PartialEq)]
pub struct Stage<T> {
    pub name: String,
    pub r: T,
    pub n: usize,
    pub members: Vec<MemberPieces>,
    pub next: StageNext<T>,
}

/// A finite-depth staged decomposition certificate. The root stage
/// decomposes the family; each child stage decomposes the piece family of
/// its parent, whose members are named `<member>/c<i>/p<j>`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionCertificate<T> {
    pub family_id: String,
    pub root: String,
    pub stages: Vec<Stage<T>>,
}

impl<T: Scalar> DecompositionCertificate<T> {
    /// Single-stage certificate with a leaf bound.
    pub fn leaf(
        family_id: impl Into<String>,
        r: T,
        n: usize,
        bound: T,
        members: Vec<MemberPieces>,
    ) -> Self {
        Self {
            family_id: family_id.into(),
            root: "root".into(),
            stages: vec![Stage {
                name: "root".into(),
                r,
                n,
                members,
                next: StageNext::LeafBound(bound),
            }],
        }
    }

    pub fn stage(&self, name: &str) -> Option<&Stage<T>> {
        self.stages.iter().find(|s| s.name == name)
    }

    /// Stages reachable from the root, in order; errors on unknown names or cycles.
    pub fn chain(&self) -> Result<Vec<&Stage<T>>, DecompositionError> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut name = self.root.clone();
        loop {
            let stage = self
                .stage(&name)
                .ok_or_else(|| DecompositionError::UnknownStage(name.clone()))?;
            if !seen.insert(name.clone()) {
                let mut cycle: Vec<String> =
                    out.iter().map(|s: &&Stage<T>| s.name.clone()).collect();
                cycle.push(name);
                return Err(DecompositionError::Cycle(cycle));
            }
            out.push(stage);
            match &stage.next {
                StageNext::LeafBound(_) => return Ok(out),
                StageNext::Child(c) => name = c.clone(),
            }
        }
    }
}

/// The family whose members are the pieces of `stage`.
pub fn piece_family<T: Scalar>(
    family: &MetricFamily<T>,
    stage: &Stage<T>,
) -> Result<MetricFamily<T>, DecompositionError> {
    let mut subsets = Vec::new();
    let mut names = Vec::new();
    for mp in &stage.members {
        for (name, piece) in mp.named_pieces() {
            subsets.push(PointSubset::new(mp.member.clone(), piece.to_vec()));
            names.push(name);
        }
    }
    Ok(
        family.subfamily(format!("{}/{}", family.id, stage.name), &subsets, |k, _| {
            names[k].clone()
        })?,
    )
}

fn check_structure<T: Scalar>(
    family: &MetricFamily<T>,
    stage: &Stage<T>,
) -> Result<(), DecompositionError> {
    for mp in &stage.members {
        let space = family
            .member(&mp.member)
            .ok_or_else(|| DecompositionError::UnknownMember {
                family: family.id.clone(),
                member: mp.member.clone(),
            })?;
        for (color, pieces) in mp.colors.iter().enumerate() {
            for (piece, p) in pieces.iter().enumerate() {
                if p.is_empty() {
                    return Err(DecompositionError::EmptyPiece {
                        member: mp.member.clone(),
                        color,
                        piece,
                    });
                }
                if let Some(&index) = p.iter().find(|&&i| i >= space.len()) {
                    return Err(DecompositionError::IndexOutOfRange {
                        member: mp.member.clone(),
                        index,
                        len: space.len(),
                    });
                }
            }
        }
    }
    Ok(())
}

fn labels<T: Scalar>(space: &FiniteMetricSpace<T>, piece: &[usize]) -> String {
    let l: Vec<&str> = piece.iter().map(|&i| space.label(i)).collect();
    format!("{{{}}}", l.join(","))
}

fn check_member<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    mp: &MemberPieces,
    stage: &Stage<T>,
    tol: T,
) -> Verdict {
    let mut v = Verdict::new();
    let mut covered = vec![false; space.len()];
    for p in mp.colors.iter().flatten() {
        for &x in p {
            covered[x] = true;
        }
    }
    match covered.iter().position(|c| !c) {
        None => v.pass("coverage", format!("pieces cover {} points", space.len())),
        Some(x) => v.fail(
            "coverage",
            format!("point {} lies in no piece", space.label(x)),
        ),
    }
    if mp.colors.len() <= stage.n + 1 {
        v.pass(
            "colors",
            format!("{} colors <= {}", mp.colors.len(), stage.n + 1),
        );
    } else {
        v.fail(
            "colors",
            format!("{} colors > {}", mp.colors.len(), stage.n + 1),
        );
    }
    for (c, pieces) in mp.colors.iter().enumerate() {
        let mut witness = None;
        'pairs: for a in 0..pieces.len() {
            for b in a + 1..pieces.len() {
                let d = space
                    .set_distance(&pieces[a], &pieces[b])
                    .finite()
                    .expect("pieces are non-empty");
                if d <= stage.r {
                    witness = Some((a, b, d));
                    break 'pairs;
                }
            }
        }
        let path = format!("color[{c}]/disjointness");
        match witness {
            None => v.pass(
                path,
                format!("{} pieces pairwise > {} apart", pieces.len(), stage.r),
            ),
            Some((a, b, d)) => v.fail(
                path,
                format!(
                    "pieces {a} {} and {b} {} at distance {d} <= {}",
                    labels(space, &pieces[a]),
                    labels(space, &pieces[b]),
                    stage.r
                ),
            ),
        }
    }
    if let StageNext::LeafBound(bound) = stage.next {
        let mut worst: Option<(usize, usize, T)> = None;
        for (c, pieces) in mp.colors.iter().enumerate() {
            for (j, p) in pieces.iter().enumerate() {
                let d = space.diameter_of(p);
                if worst.is_none_or(|w| d > w.2) {
                    worst = Some((c, j, d));
                }
            }
        }
        match worst {
            Some((c, j, d)) if !scalar::le_tol(d, bound, tol) => v.fail(
                "leaf-bound",
                format!(
                    "piece {j} of color {c} {} has diameter {d} > {bound}",
                    labels(space, &mp.colors[c][j])
                ),
            ),
            Some((_, _, d)) => v.pass(
                "leaf-bound",
                format!("largest piece diameter {d} <= {bound}"),
            ),
            None => v.pass("leaf-bound", "no pieces"),
        }
    }
    v
}

fn check_stage<T: Scalar>(
    cert: &DecompositionCertificate<T>,
    stage: &Stage<T>,
    family: &MetricFamily<T>,
    tol: T,
    verdict: &mut Verdict,
    prefix: &str,
) -> Result<(), DecompositionError> {
    check_structure(family, stage)?;
    let results: Vec<(String, Verdict)> = family
        .members()
        .par_iter()
        .map(|space| {
            let v = match stage.members.iter().find(|m| m.member == space.id()) {
                Some(mp) => check_member(space, mp, stage, tol),
                None => {
                    let mut v = Verdict::new();
                    v.fail("pieces", "no pieces supplied");
                    v
                }
            };
            (space.id().to_string(), v)
        })
        .collect();
    for (member, v) in results {
        verdict.extend_prefixed(
            &format!("{prefix}stage[{}]/member[{member}]", stage.name),
            v,
        );
    }
    if let StageNext::Child(child) = &stage.next {
        let next = cert
            .stage(child)
            .ok_or_else(|| DecompositionError::UnknownStage(child.clone()))?;
        let pieces = piece_family(family, stage)?;
        check_stage(cert, next, &pieces, tol, verdict, prefix)?;
    }
    Ok(())
}

/// Recursively checks coverage, the color count, strict `r`-disjointness of
/// each color, and either the leaf diameter bound or the child stage over
/// the piece family.
pub fn check_decomposition<T: Scalar>(
    cert: &DecompositionCertificate<T>,
    family: &MetricFamily<T>,
    tol: T,
) -> Result<Verdict, DecompositionError> {
    if cert.family_id != family.id {
        return Err(DecompositionError::FamilyMismatch {
            expected: family.id.clone(),
            found: cert.family_id.clone(),
        });
    }
    let chain = cert.chain()?;
    let mut verdict = Verdict::new();
    check_stage(cert, chain[0], family, tol, &mut verdict, "")?;
    Ok(verdict)
}
