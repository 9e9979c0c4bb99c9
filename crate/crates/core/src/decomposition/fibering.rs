use crate::cover::{check_asdim_certificate, AsdimCertificate};
use crate::maps::{preimage_family, FamilyMap};
use crate::metric::{MetricFamily, PointSubset};
use crate::scalar::{self, Scalar};
use crate::verdict::Verdict;

use super::{check_decomposition, DecompositionCertificate, DecompositionError};

/// A coarse map together with decomposition certificates for the inverse
/// images of all balls of each scheduled radius, and an asdim certificate
/// for the target.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberingWitness<T> {
    pub map: FamilyMap,
    pub schedule: Vec<T>,
    pub inner: Vec<(T, DecompositionCertificate<T>)>,
    pub target_certificate: Option<AsdimCertificate<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberingReport<T> {
    pub verdict: Verdict,
    /// Largest scheduled radius whose inner certificate passed.
    pub largest_certified: Option<T>,
}

/// `{ f⁻¹(B_ρ(y)) : y in a target member, f in the map }` as a family with
/// members named `<source member>#<k>`.
pub fn ball_preimage_family<T: Scalar>(
    map: &FamilyMap,
    source: &MetricFamily<T>,
    target: &MetricFamily<T>,
    radius: T,
    id: impl Into<String>,
) -> Result<MetricFamily<T>, DecompositionError> {
    map.validate(source, target)?;
    let balls: Vec<PointSubset> = target
        .members()
        .iter()
        .flat_map(|y| y.points().map(move |p| y.ball(p, radius)))
        .collect();
    let preimages = preimage_family(map, &balls);
    let mut counters: Vec<(String, usize)> = Vec::new();
    let names: Vec<String> = preimages
        .iter()
        .map(|p| {
            let slot = match counters.iter().position(|(m, _)| *m == p.space_id) {
                Some(s) => s,
                None => {
                    counters.push((p.space_id.clone(), 0));
                    counters.len() - 1
                }
            };
            let k = counters[slot].1;
            counters[slot].1 += 1;
            format!("{}#{k}", p.space_id)
        })
        .collect();
    Ok(source.subfamily(id, &preimages, |k, _| names[k].clone())?)
}

/// Checks every scheduled radius against its inner certificate, that the
/// schedule reaches the largest target diameter, and the target certificate.
///
/// Inner certificates are matched to radii up to `tol`; the preimage family
/// for a radius takes the id of its certificate.
pub fn check_fibering_witness<T: Scalar>(
    witness: &FiberingWitness<T>,
    source: &MetricFamily<T>,
    target: &MetricFamily<T>,
    tol: T,
) -> Result<FiberingReport<T>, DecompositionError> {
    witness.map.validate(source, target)?;
    let mut verdict = Verdict::new();
    let reach = witness
        .schedule
        .iter()
        .copied()
        .reduce(scalar::max)
        .unwrap_or_else(T::zero);
    let diameter = target.max_diameter();
    verdict.check(
        "schedule",
        scalar::le_tol(diameter, reach, tol),
        format!("largest radius {reach}, largest target diameter {diameter}"),
    );
    let mut largest = None;
    for &rho in &witness.schedule {
        let path = format!("radius[{rho}]");
        let inner = witness
            .inner
            .iter()
            .find(|(r, _)| scalar::le_tol(scalar::abs_diff(*r, rho), T::zero(), tol));
        let Some((_, cert)) = inner else {
            verdict.fail(path, format!("no inner certificate for radius {rho}"));
            continue;
        };
        let family =
            ball_preimage_family(&witness.map, source, target, rho, cert.family_id.clone())?;
        let v = check_decomposition(cert, &family, tol)?;
        if v.passed() {
            largest = Some(largest.map_or(rho, |l| scalar::max(l, rho)));
        }
        verdict.pass(
            format!("{path}/preimages"),
            format!("{} preimage members", family.len()),
        );
        verdict.extend_prefixed(&path, v);
    }
    match &witness.target_certificate {
        Some(cert) => {
            let v = check_asdim_certificate(cert, target, tol)?;
            verdict.extend_prefixed("target", v);
        }
        None => verdict.fail("target", "no asdim certificate for the target"),
    }
    Ok(FiberingReport {
        verdict,
        largest_certified: largest,
    })
}
