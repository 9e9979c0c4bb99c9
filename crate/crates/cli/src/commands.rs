use std::fmt;
use std::path::Path;

use coarsekit::cone::{
    chain_oracle, cone_distance, phi, phi_closed_exp, suite, ConePoint, RhoFunction,
};
use coarsekit::constructions::{
    four_point_violation, minimax_ultrametric, ray_tree_embed, scale_balls_partition,
    shell_sequence, strong_triangle_violation, ConstructionError,
};
use coarsekit::cover::{
    check_an_control, check_asdim_certificate, product_cover, pushforward_quotient_cover,
    AsdimCertificate, AsdimEntry, ColoredCover, Cover, MemberCover,
};
use coarsekit::decomposition::{
    check_decomposition, check_fibering_witness, r_components, search_family,
    DecompositionCertificate, SearchMode, SearchOutcome, StageNext,
};
use coarsekit::format::{self, FormatError};
use coarsekit::maps::{
    closeness_constant, coarsely_onto, control_envelope, properness_envelope, FamilyMap,
    MonotoneEnvelope,
};
use coarsekit::metric::{
    product, quotient_with_projection, FiniteMetricSpace, LpExponent, MetricFamily,
};
use coarsekit::scalar::{self, Scalar};
use coarsekit::{Rational64, Status};

use crate::report::{Report, Table};
use crate::{Cli, Command, ScalarKind};

/// `φ` from the search and from the closed form for `ρ = exp` must agree
/// to this absolute tolerance.
const CLOSED_FORM_TOLERANCE: f64 = 1e-7;

/// Chains may undercut the cone distance by at most this much.
const CHAIN_TOLERANCE: f64 = 1e-6;

enum Failure {
    /// A document or number did not parse in the current scalar type;
    /// automatic scalar selection retries with the next type.
    Parse(String),
    Input(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Parse(m) | Failure::Input(m) => f.write_str(m),
        }
    }
}

fn input(e: impl fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parsed<V>(path: &Path, r: Result<V, FormatError>) -> Result<V, Failure> {
    r.map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load<T: Scalar>(path: &Path) -> Result<MetricFamily<T>, Failure> {
    parsed(path, format::parse_family(&read(path)?))
}

fn number<T: Scalar>(text: &str, flag: &str) -> Result<T, Failure> {
    T::parse_token(text).ok_or_else(|| {
        Failure::Parse(format!(
            "{flag}: `{text}` is not a valid {} number",
            T::NAME
        ))
    })
}

fn member_of<'f, T: Scalar>(
    family: &'f MetricFamily<T>,
    id: &str,
) -> Result<&'f FiniteMetricSpace<T>, Failure> {
    family
        .member(id)
        .ok_or_else(|| Failure::Input(format!("family `{}` has no member `{id}`", family.id)))
}

/// Member named in the header of a member-level document.
fn header_member<'f, T: Scalar>(
    family: &'f MetricFamily<T>,
    path: &Path,
    text: &str,
) -> Result<&'f FiniteMetricSpace<T>, Failure> {
    match format::header(text) {
        Some((_, args)) if !args.is_empty() => member_of(family, &args[0]),
        _ => Err(Failure::Input(format!(
            "{}: empty document",
            path.display()
        ))),
    }
}

fn labels<T: Scalar>(space: &FiniteMetricSpace<T>, points: &[usize]) -> String {
    points
        .iter()
        .map(|&i| space.label(i))
        .collect::<Vec<_>>()
        .join(" ")
}

pub(crate) fn execute(cli: &Cli) -> Report {
    let result = match &cli.command {
        Command::Phi { .. } | Command::PhiSuite { .. } | Command::ConeDist { .. } => {
            match cli.options.scalar {
                ScalarKind::Auto | ScalarKind::F64 => cone_command(cli),
                _ => Err(Failure::Input("cone commands use f64 distances".into())),
            }
        }
        _ => match cli.options.scalar {
            ScalarKind::Int => typed::<i64>(cli),
            ScalarKind::F64 => typed::<f64>(cli),
            ScalarKind::Rational => typed::<Rational64>(cli),
            ScalarKind::Auto => match typed::<i64>(cli) {
                Err(Failure::Parse(_)) => match typed::<f64>(cli) {
                    Err(float @ Failure::Parse(_)) => typed::<Rational64>(cli).or(Err(float)),
                    other => other,
                },
                other => other,
            },
        },
    };
    result.unwrap_or_else(|e| Report {
        error: Some(e.to_string()),
        ..Report::default()
    })
}

fn typed<T: Scalar>(cli: &Cli) -> Result<Report, Failure> {
    let tol = T::tolerance_from_f64(cli.options.tolerance)
        .ok_or_else(|| Failure::Input(format!("bad tolerance {}", cli.options.tolerance)))?;
    let mut report = Report::default();
    report.fact("scalar", T::NAME);
    match &cli.command {
        Command::Validate { family } => validate::<T>(&mut report, family, tol)?,
        Command::Components { family, r } => components::<T>(&mut report, family, r)?,
        Command::CoverCheck {
            family,
            certificate,
        } => {
            let family = load::<T>(family)?;
            let cert = parsed(
                certificate,
                format::parse_asdim_certificate(&read(certificate)?, &family),
            )?;
            report.fact("n", cert.n);
            report.fact("entries", cert.entries.len());
            report.verdict = check_asdim_certificate(&cert, &family, tol).map_err(input)?;
        }
        Command::AnCheck {
            family,
            certificate,
        } => {
            let family = load::<T>(family)?;
            let cert = parsed(
                certificate,
                format::parse_an_certificate(&read(certificate)?, &family),
            )?;
            report.fact("n", cert.n);
            report.fact("control", format!("{}·r + {}", cert.m, cert.b));
            report.verdict = check_an_control(&cert, &family, tol).map_err(input)?;
        }
        Command::QuotientCover {
            family,
            action,
            certificate,
        } => quotient_cover::<T>(&mut report, family, action, certificate, tol)?,
        Command::Product {
            family,
            p,
            covers,
            entry,
            r,
        } => product_command::<T>(
            &mut report,
            family,
            p,
            covers.as_deref(),
            *entry,
            r.as_deref(),
            tol,
        )?,
        Command::Decompose {
            family,
            r,
            n,
            bound,
            greedy,
            ..
        } => decompose::<T>(&mut report, family, r, *n, bound, *greedy, tol)?,
        Command::CheckCert {
            family,
            certificate,
        } => {
            let family = load::<T>(family)?;
            let cert = parsed(
                certificate,
                format::parse_decomposition(&read(certificate)?, &family),
            )?;
            report.fact("stages", cert.stages.len());
            report.verdict = check_decomposition(&cert, &family, tol).map_err(input)?;
        }
        Command::CheckFibering {
            source,
            target,
            witness,
        } => {
            let (src, tgt) = (load::<T>(source)?, load::<T>(target)?);
            let w = parsed(witness, format::parse_fibering(&read(witness)?, &src, &tgt))?;
            let schedule: Vec<String> = w.schedule.iter().map(T::to_string).collect();
            report.fact("schedule", schedule.join(" "));
            let result = check_fibering_witness(&w, &src, &tgt, tol).map_err(input)?;
            report.fact(
                "largest-certified-radius",
                result
                    .largest_certified
                    .map_or("none".to_string(), |r| r.to_string()),
            );
            report.verdict = result.verdict;
        }
        Command::MapAnalyze {
            source,
            target,
            map,
            compare,
        } => map_analyze::<T>(&mut report, source, target, map, compare.as_deref())?,
        Command::Ultrametric { family, r } => {
            ultrametric::<T>(&mut report, family, r.as_deref(), tol)?
        }
        Command::RayTree {
            family,
            pieces,
            shells,
        } => ray_tree::<T>(&mut report, family, pieces, shells, tol)?,
        Command::Phi { .. } | Command::PhiSuite { .. } | Command::ConeDist { .. } => {
            unreachable!("cone commands are dispatched separately")
        }
    }
    Ok(report)
}

fn validate<T: Scalar>(report: &mut Report, path: &Path, tol: T) -> Result<(), Failure> {
    let family = load::<T>(path)?;
    report.fact("family", &family.id);
    report.fact("members", family.len());
    for m in family.members() {
        let v = m.validate_within(tol);
        if v.is_valid() {
            report.verdict.pass(
                format!("member[{}]/metric", m.id()),
                format!("{} points satisfy the metric axioms", m.len()),
            );
        }
        for violation in &v.violations {
            report.verdict.fail(
                format!("member[{}]/{}", m.id(), violation.kind()),
                violation.describe(m),
            );
        }
    }
    Ok(())
}

fn components<T: Scalar>(report: &mut Report, path: &Path, r: &str) -> Result<(), Failure> {
    let family = load::<T>(path)?;
    let r: T = number(r, "--r")?;
    for m in family.members() {
        let part = r_components(m, r);
        report.verdict.pass(
            format!("member[{}]/components", m.id()),
            format!("{} blocks at r = {r}", part.blocks.len()),
        );
        let mut table = Table::new(
            format!("components.{}", m.id()),
            &["block", "size", "points"],
        );
        for (k, b) in part.blocks.iter().enumerate() {
            table.row(vec![k.to_string(), b.len().to_string(), labels(m, b)]);
        }
        report.tables.push(table);
    }
    Ok(())
}

fn quotient_cover<T: Scalar>(
    report: &mut Report,
    family_path: &Path,
    action_path: &Path,
    cert_path: &Path,
    tol: T,
) -> Result<(), Failure> {
    let family = load::<T>(family_path)?;
    let action_text = read(action_path)?;
    let space = header_member(&family, action_path, &action_text)?;
    let action = parsed(action_path, format::parse_action(&action_text, space))?;
    let cert = parsed(
        cert_path,
        format::parse_asdim_certificate(&read(cert_path)?, &family),
    )?;
    let input_verdict = check_asdim_certificate(&cert, &family, tol).map_err(input)?;
    report.verdict.extend_prefixed("input", input_verdict);
    let q = match quotient_with_projection(space, &action, tol) {
        Ok(q) => q,
        Err(e) => {
            report.verdict.fail("action", e.to_string());
            return Ok(());
        }
    };
    let order = action.order();
    report.verdict.pass(
        "action",
        format!(
            "group of order {order} acts isometrically on `{}`",
            space.id()
        ),
    );
    report.fact("group-order", order);
    report.fact("quotient-points", q.space.len());
    let mut entries = Vec::new();
    for (k, entry) in cert.entries.iter().enumerate() {
        let path = format!("quotient/entry[{k}]");
        let Some(mc) = entry.covers.iter().find(|c| c.member == space.id()) else {
            report
                .verdict
                .fail(path, format!("no cover of `{}`", space.id()));
            continue;
        };
        let cover = match Cover::new(space, mc.elements.clone()) {
            Ok(c) => c,
            Err(e) => {
                report.verdict.fail(path, e.to_string());
                continue;
            }
        };
        let d = cover.dimension();
        let pushed = pushforward_quotient_cover(&cover, &q);
        let bound = order * (d + 1) - 1;
        let qd = pushed.dimension();
        report.verdict.check(
            format!("{path}/dimension"),
            qd <= bound,
            format!("{qd} <= {order}·({d}+1)-1 = {bound}"),
        );
        let lebesgue = pushed.lebesgue_number(&q.space);
        report.verdict.check(
            format!("{path}/lebesgue"),
            lebesgue.ge_tol(entry.lambda, tol),
            format!("{lebesgue} >= {}", entry.lambda),
        );
        let mesh = pushed.mesh(&q.space);
        report.verdict.check(
            format!("{path}/mesh"),
            scalar::le_tol(mesh, entry.mesh, tol),
            format!("{mesh} <= {}", entry.mesh),
        );
        entries.push(AsdimEntry {
            lambda: entry.lambda,
            mesh: entry.mesh,
            covers: vec![MemberCover::uncolored(q.space.id(), &pushed)],
        });
    }
    let qfamily = MetricFamily::new(format!("{}/quotient", family.id), vec![q.space.clone()])
        .map_err(input)?;
    let qcert = AsdimCertificate {
        family_id: qfamily.id.clone(),
        n: order * (cert.n + 1) - 1,
        entries,
    };
    report.document("quotient.family", format::write_family(&qfamily));
    report.document(
        "quotient.asdim",
        format::write_asdim_certificate(&qcert, &qfamily),
    );
    Ok(())
}

fn product_command<T: Scalar>(
    report: &mut Report,
    family_path: &Path,
    p_text: &str,
    covers: Option<&Path>,
    entry: usize,
    r: Option<&str>,
    tol: T,
) -> Result<(), Failure> {
    let family = load::<T>(family_path)?;
    let p: LpExponent = p_text
        .parse()
        .map_err(|_| Failure::Input(format!("--p: bad exponent `{p_text}`")))?;
    if T::EXACT && matches!(p, LpExponent::Finite(v) if v != 1.0) {
        return Err(Failure::Parse(format!("p = {p} needs f64 distances")));
    }
    let factors: Vec<&FiniteMetricSpace<T>> = family.members().iter().collect();
    let space = product(&factors, p).map_err(input)?;
    report.fact("factors", factors.len());
    report.fact("points", space.len());
    report.fact("p", p);
    let valid = space.validate_within(tol);
    report.verdict.check(
        "product/metric",
        valid.is_valid(),
        match valid.violations.first() {
            None => format!("{} points satisfy the metric axioms", space.len()),
            Some(v) => v.describe(&space),
        },
    );
    let pfamily =
        MetricFamily::new(format!("{}.product", family.id), vec![space.clone()]).map_err(input)?;
    report.document("product.family", format::write_family(&pfamily));
    let Some(cert_path) = covers else {
        return Ok(());
    };
    if p != LpExponent::Finite(1.0) {
        return Err(Failure::Input(
            "product covers are defined for p = 1".into(),
        ));
    }
    let cert = parsed(
        cert_path,
        format::parse_asdim_certificate(&read(cert_path)?, &family),
    )?;
    let e = cert
        .entries
        .get(entry)
        .ok_or_else(|| Failure::Input(format!("certificate has no entry {entry}")))?;
    let mut colored = Vec::new();
    for m in &factors {
        let mc = e
            .covers
            .iter()
            .find(|c| c.member == m.id())
            .ok_or_else(|| Failure::Input(format!("entry {entry} has no cover of `{}`", m.id())))?;
        let colors = mc
            .colors
            .clone()
            .ok_or_else(|| Failure::Input(format!("the cover of `{}` has no colors", m.id())))?;
        let cover = Cover::new(*m, mc.elements.clone()).map_err(input)?;
        colored.push(ColoredCover::new(cover, colors).map_err(input)?);
    }
    let pairs: Vec<(&FiniteMetricSpace<T>, &ColoredCover)> =
        factors.iter().copied().zip(colored.iter()).collect();
    let result = match product_cover(&pairs) {
        Ok(c) => c,
        Err(e) => {
            report.verdict.fail("covers/precondition", e.to_string());
            return Ok(());
        }
    };
    report.verdict.pass(
        "covers/precondition",
        format!(
            "every factor point lies in at least {} color classes",
            factors.len()
        ),
    );
    let mesh_sum = pairs
        .iter()
        .fold(T::zero(), |acc, (s, c)| acc + c.cover.mesh(*s));
    let mesh = result.cover.mesh(&space);
    report.verdict.check(
        "covers/mesh",
        mesh <= mesh_sum,
        format!("{mesh} <= sum of factor meshes {mesh_sum}"),
    );
    if let Some(r) = r {
        let r: T = number(r, "--r")?;
        for (k, (s, c)) in pairs.iter().enumerate() {
            report.verdict.check(
                format!("covers/factor[{k}]/disjointness"),
                c.disjointness_violation(*s, r).is_none(),
                format!("color classes of `{}` at scale {r}", s.id()),
            );
        }
        report.verdict.check(
            "covers/disjointness",
            result.disjointness_violation(&space, r).is_none(),
            format!("product color classes at scale {r}"),
        );
    }
    let lambda = result
        .cover
        .lebesgue_number(&space)
        .finite()
        .unwrap_or_else(|| space.diameter());
    report.fact("product-dimension", result.cover.dimension());
    report.fact("product-colors", result.color_count());
    let pcert = AsdimCertificate {
        family_id: pfamily.id.clone(),
        n: factors.len(),
        entries: vec![AsdimEntry {
            lambda,
            mesh,
            covers: vec![MemberCover::colored(space.id(), &result)],
        }],
    };
    report.document(
        "product.asdim",
        format::write_asdim_certificate(&pcert, &pfamily),
    );
    Ok(())
}

fn decompose<T: Scalar>(
    report: &mut Report,
    path: &Path,
    r: &str,
    n: usize,
    bound: &str,
    greedy: bool,
    tol: T,
) -> Result<(), Failure> {
    let family = load::<T>(path)?;
    let r: T = number(r, "--r")?;
    let bound: T = number(bound, "--bound")?;
    let mode = if greedy {
        SearchMode::Greedy
    } else {
        SearchMode::Exact
    };
    report.fact("mode", if greedy { "greedy" } else { "exact" });
    match search_family(&family, r, n, bound, mode).map_err(input)? {
        SearchOutcome::Found(cert) => {
            report.verdict.pass("search", "decomposition found");
            let v = check_decomposition(&cert, &family, tol).map_err(input)?;
            report.verdict.extend_prefixed("certificate", v);
            report.document(
                "decomposition",
                format::write_decomposition(&cert, &family).map_err(input)?,
            );
        }
        SearchOutcome::None => report.verdict.fail(
            "search",
            format!("no ({r}, {n})-decomposition with pieces of diameter <= {bound} exists"),
        ),
        SearchOutcome::Unknown => report.verdict.push(
            "search",
            Status::Unknown,
            "greedy search found none; one may still exist",
        ),
    }
    Ok(())
}

fn envelope_table<T: Scalar>(
    name: &str,
    env: &MonotoneEnvelope<T>,
    map: &FamilyMap,
    source: &MetricFamily<T>,
) -> Table {
    let mut table = Table::new(name, &["s", "value", "witness"]);
    for b in &env.breakpoints {
        let f = &map.functions[b.witness.function];
        let witness = source
            .member(&f.source)
            .map(|m| {
                format!(
                    "{}:({},{})",
                    m.id(),
                    m.label(b.witness.x),
                    m.label(b.witness.y)
                )
            })
            .unwrap_or_default();
        table.row(vec![b.at.to_string(), b.value.to_string(), witness]);
    }
    table
}

fn map_analyze<T: Scalar>(
    report: &mut Report,
    source: &Path,
    target: &Path,
    map_path: &Path,
    compare: Option<&Path>,
) -> Result<(), Failure> {
    let (src, tgt) = (load::<T>(source)?, load::<T>(target)?);
    let map = parsed(map_path, format::parse_map(&read(map_path)?, &src, &tgt))?;
    report.verdict.pass(
        "map",
        format!(
            "{} functions resolve against `{}` and `{}`",
            map.functions.len(),
            src.id,
            tgt.id
        ),
    );
    let control = control_envelope(&map, &src, &tgt).map_err(input)?;
    report.verdict.check(
        "control/monotone",
        control.is_monotone(),
        format!("{} breakpoints", control.breakpoints.len()),
    );
    let proper = properness_envelope(&map, &src, &tgt).map_err(input)?;
    report.fact("properness", proper.summary());
    let onto = coarsely_onto(&map, &src, &tgt).map_err(input)?;
    report.fact("coarsely-onto-constant", onto.constant);
    if let Some(other_path) = compare {
        let other = parsed(
            other_path,
            format::parse_map(&read(other_path)?, &src, &tgt),
        )?;
        let c = closeness_constant(&map, &other, &src, &tgt).map_err(input)?;
        report.fact("closeness-constant", c);
    }
    report
        .tables
        .push(envelope_table("control", &control, &map, &src));
    report
        .tables
        .push(envelope_table("properness", &proper.envelope, &map, &src));
    Ok(())
}

fn ultrametric<T: Scalar>(
    report: &mut Report,
    path: &Path,
    r: Option<&str>,
    tol: T,
) -> Result<(), Failure> {
    let family = load::<T>(path)?;
    let r: Option<T> = r.map(|r| number(r, "--r")).transpose()?;
    let mut spaces = Vec::new();
    let mut map = FamilyMap::new(&family.id, format!("{}'", family.id));
    for m in family.members() {
        let u = minimax_ultrametric(m);
        let path = format!("member[{}]", m.id());
        let strong = strong_triangle_violation(&u.space, tol);
        report.verdict.check(
            format!("{path}/strong-triangle"),
            strong.is_none(),
            match strong {
                None => "d'(x,z) <= max(d'(x,y), d'(y,z)) on all triples".to_string(),
                Some((x, y, z)) => format!("({}, {}, {})", m.label(x), m.label(y), m.label(z)),
            },
        );
        let one = T::one();
        let above = m
            .pairs()
            .find(|&(x, y)| u.space.d(x, y) > scalar::max(m.d(x, y), one) + tol);
        report.verdict.check(
            format!("{path}/floor"),
            above.is_none(),
            match above {
                None => "d' <= max(d, 1) on all pairs".to_string(),
                Some((x, y)) => format!("d'({},{}) = {}", m.label(x), m.label(y), u.space.d(x, y)),
            },
        );
        map = map.with_function(m.id(), u.space.id(), m.points().collect());
        spaces.push(u.space);
    }
    let ufamily = MetricFamily::new(format!("{}'", family.id), spaces).map_err(input)?;
    report.document("ultrametric.family", format::write_family(&ufamily));
    report.document(
        "ultrametric.map",
        format::write_map(&map, &family, &ufamily),
    );
    let Some(r) = r else {
        return Ok(());
    };
    let mut members = Vec::new();
    let mut bound = T::zero();
    for u in ufamily.members() {
        let balls = scale_balls_partition(u, r).map_err(|e| match e {
            ConstructionError::NegativeScale => Failure::Input("--r must be non-negative".into()),
            e => input(e),
        })?;
        let mut table = Table::new(format!("balls.{}", u.id()), &["block", "points"]);
        for (k, b) in balls.partition.blocks.iter().enumerate() {
            table.row(vec![k.to_string(), labels(u, b)]);
        }
        report.tables.push(table);
        let stage = &balls.certificate.stages[0];
        if let StageNext::LeafBound(b) = stage.next {
            bound = scalar::max(bound, b);
        }
        members.extend(stage.members.iter().cloned());
    }
    let cert = DecompositionCertificate::leaf(ufamily.id.clone(), r, 0, bound, members);
    let v = check_decomposition(&cert, &ufamily, tol).map_err(input)?;
    report.verdict.extend_prefixed("balls", v);
    report.document(
        "ultrametric.decomposition",
        format::write_decomposition(&cert, &ufamily).map_err(input)?,
    );
    Ok(())
}

fn ray_tree<T: Scalar>(
    report: &mut Report,
    family_path: &Path,
    pieces_path: &Path,
    shells_path: &Path,
    tol: T,
) -> Result<(), Failure> {
    let family = load::<T>(family_path)?;
    let pieces_text = read(pieces_path)?;
    let space = header_member(&family, pieces_path, &pieces_text)?;
    let pieces = parsed(pieces_path, format::parse_subsets(&pieces_text, space))?;
    let ys = parsed(
        shells_path,
        format::parse_subsets(&read(shells_path)?, space),
    )?;
    let seq = shell_sequence(space, &ys.sets).map_err(input)?;
    if let Some(x) = seq.designated {
        report.fact("designated-point", space.label(x));
    }
    let embedding = match ray_tree_embed(space, &pieces.sets, &seq.shells) {
        Ok(e) => e,
        Err(ConstructionError::Metric(e)) => return Err(input(e)),
        Err(e) => {
            report.verdict.fail("hypothesis", e.to_string());
            return Ok(());
        }
    };
    report.verdict.pass(
        "hypothesis",
        format!(
            "pieces cover, {} shells are nested and exhaust `{}`, pieces outside shell n are n-disjoint",
            seq.shells.len(),
            space.id()
        ),
    );
    let tree = &embedding.tree;
    report.fact("rays", tree.rays);
    report.fact("depth", tree.depth);
    let coarse = embedding.coarseness_violation(space);
    report.verdict.check(
        "coarseness",
        coarse.is_none(),
        match coarse {
            None => "d_T(fx, fy) <= 2 d(x, y) + 2 on all pairs".to_string(),
            Some((x, y)) => format!("({}, {})", space.label(x), space.label(y)),
        },
    );
    let all: Vec<usize> = tree.space.points().collect();
    let four = four_point_violation(&tree.space, &all, tol);
    report.verdict.check(
        "tree/four-point",
        four.is_none(),
        match four {
            None => format!("{} tree points satisfy the four-point condition", all.len()),
            Some(q) => format!("({})", labels(&tree.space, &q)),
        },
    );
    let mut table = Table::new("positions", &["point", "ray", "m", "vertex"]);
    for (x, &(j, m)) in embedding.positions.iter().enumerate() {
        table.row(vec![
            space.label(x).to_string(),
            j.to_string(),
            m.to_string(),
            tree.space.label(tree.vertex(j, m)).to_string(),
        ]);
    }
    report.tables.push(table);
    let tfamily = MetricFamily::new(tree.space.id(), vec![tree.space.clone()]).map_err(input)?;
    let map = FamilyMap::new(&family.id, &tfamily.id).with_function(
        space.id(),
        tree.space.id(),
        embedding.map.functions[0].assignment.clone(),
    );
    report.document("ray-tree.shells", format::write_subsets(&seq.shells, space));
    report.document("ray-tree.family", format::write_family(&tfamily));
    report.document("ray-tree.map", format::write_map(&map, &family, &tfamily));
    Ok(())
}

fn parse_rho(text: &str) -> Result<RhoFunction<f64>, Failure> {
    if let Some(file) = text.strip_prefix("table:") {
        let path = Path::new(file);
        if path.is_file() {
            return RhoFunction::parse_table(&read(path)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())));
        }
    }
    text.parse()
        .map_err(|e| Failure::Input(format!("--rho: {e}")))
}

fn cone_point(
    space: &FiniteMetricSpace<f64>,
    text: &str,
    flag: &str,
) -> Result<ConePoint<f64>, Failure> {
    let (label, height) = text.rsplit_once('@').ok_or_else(|| {
        Failure::Input(format!("{flag}: expected `label@height`, found `{text}`"))
    })?;
    let base = space.index_of(label).ok_or_else(|| {
        Failure::Input(format!(
            "{flag}: unknown point `{label}` in `{}`",
            space.id()
        ))
    })?;
    let height: f64 = number(height, flag).map_err(|e| Failure::Input(e.to_string()))?;
    ConePoint::new(base, height).map_err(|e| Failure::Input(format!("{flag}: {e}")))
}

fn cone_command(cli: &Cli) -> Result<Report, Failure> {
    let mut report = Report::default();
    report.fact("scalar", f64::NAME);
    match &cli.command {
        Command::Phi { rho, t, r } => {
            let rho = parse_rho(rho)?;
            let v = phi(&rho, *t, *r).map_err(input)?;
            report.fact("rho", &rho);
            report.fact("value", v.value);
            report.fact("height", v.height);
            if rho == RhoFunction::Exponential {
                let closed = phi_closed_exp(*t, *r).map_err(input)?;
                report.fact("closed-form", closed);
                let gap = (closed - v.value).abs();
                report.verdict.check(
                    "closed-form",
                    gap <= CLOSED_FORM_TOLERANCE,
                    format!("|search - closed form| = {gap:e} <= {CLOSED_FORM_TOLERANCE:e}"),
                );
            } else {
                report
                    .verdict
                    .pass("phi", format!("φ_{t}({r}) = {}", v.value));
            }
        }
        Command::PhiSuite { rho, samples } => {
            let family = match rho {
                Some(text) => vec![parse_rho(text)?],
                None => suite::standard_family(),
            };
            report.fact("samples", samples);
            report.fact("seed", cli.options.seed);
            for (k, rho) in family.iter().enumerate() {
                report.fact(format!("rho.{k}"), rho);
                let result = suite::phi_suite(rho, *samples, cli.options.seed);
                for p in &result.properties {
                    let mut detail = format!(
                        "{}: {} checked, {} violations",
                        p.name, p.checked, p.violations
                    );
                    if let Some(w) = &p.witness {
                        detail.push_str(&format!("; first at {w}"));
                    }
                    if let Some(n) = &p.note {
                        detail.push_str(&format!("; {n}"));
                    }
                    report.verdict.check(
                        format!("rho[{k}]/property[{}]", p.number),
                        p.passed(),
                        detail,
                    );
                }
            }
        }
        Command::ConeDist {
            family,
            rho,
            member,
            from,
            to,
            heights,
        } => {
            let family = load::<f64>(family).map_err(|e| Failure::Input(e.to_string()))?;
            let space = match member {
                Some(id) => member_of(&family, id)?,
                None => family
                    .members()
                    .first()
                    .ok_or_else(|| Failure::Input(format!("family `{}` is empty", family.id)))?,
            };
            let rho = parse_rho(rho)?;
            let a = cone_point(space, from, "--from")?;
            let b = cone_point(space, to, "--to")?;
            let d = cone_distance(&rho, space, &a, &b).map_err(input)?;
            report.fact("rho", &rho);
            report.fact("distance", d);
            report.verdict.pass("distance", format!("d = {d}"));
            if let Some(list) = heights {
                let hs = list
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| {
                        s.trim()
                            .parse::<f64>()
                            .map_err(|_| Failure::Input(format!("--heights: bad number `{s}`")))
                    })
                    .collect::<Result<Vec<f64>, _>>()?;
                let chain = chain_oracle(&rho, space, &a, &b, &hs).map_err(input)?;
                report.fact("chain", chain);
                report.verdict.check(
                    "chain/upper-bound",
                    chain >= d - CHAIN_TOLERANCE,
                    format!("shortest chain {chain} >= distance {d} - {CHAIN_TOLERANCE:e}"),
                );
            }
        }
        _ => unreachable!("only cone commands reach here"),
    }
    Ok(report)
}
