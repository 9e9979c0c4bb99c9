use std::fmt::Write as _;

use crate::cover::{AnControlCertificate, AnEntry, AsdimCertificate, AsdimEntry, MemberCover};
use crate::decomposition::{
    ball_preimage_family, piece_family, DecompositionCertificate, FiberingWitness, MemberPieces,
    Stage, StageNext,
};
use crate::metric::{FiniteMetricSpace, MetricFamily};
use crate::scalar::Scalar;

use super::documents::{expect_arrow, parse_map_from, write_map};
use super::{labelled_line, resolve_labels, Cursor, FormatError, Line};

fn check_family_id(line: &Line<'_>, family: &str) -> Result<(), FormatError> {
    let t = &line.args()[0];
    if t.text == family {
        Ok(())
    } else {
        Err(line.error_at(
            t,
            format!("document is for `{}` but `{family}` was supplied", t.text),
        ))
    }
}

fn member<'f, T: Scalar>(
    line: &Line<'_>,
    family: &'f MetricFamily<T>,
) -> Result<&'f FiniteMetricSpace<T>, FormatError> {
    let t = &line.expect_args(1)?[0];
    family
        .member(t.text)
        .ok_or_else(|| line.error_at(t, format!("unknown member `{}` of `{}`", t.text, family.id)))
}

fn single_scalar<T: Scalar>(cur: &mut Cursor<'_>, keyword: &str) -> Result<T, FormatError> {
    let line = cur.expect(keyword)?;
    let t = line.expect_args(1)?[0];
    line.scalar(&t)
}

fn single_count(cur: &mut Cursor<'_>, keyword: &str) -> Result<usize, FormatError> {
    let line = cur.expect(keyword)?;
    let t = line.expect_args(1)?[0];
    line.count(&t)
}

/// `member` blocks of cover elements, optionally grouped under `color`
/// lines. A member either colors every element or none.
fn parse_member_covers<T: Scalar>(
    cur: &mut Cursor<'_>,
    family: &MetricFamily<T>,
) -> Result<Vec<MemberCover>, FormatError> {
    let mut covers: Vec<MemberCover> = Vec::new();
    while cur.peek_keyword() == Some("member") {
        let line = cur.next().expect("peeked");
        let space = member(&line, family)?;
        if covers.iter().any(|c| c.member == space.id()) {
            return Err(line.error_at(
                &line.args()[0],
                format!("duplicate member `{}`", space.id()),
            ));
        }
        let mut elements = Vec::new();
        let mut colors: Vec<usize> = Vec::new();
        let mut current: Option<usize> = None;
        let mut colored = None;
        loop {
            match cur.peek_keyword() {
                Some("color") => {
                    let c = cur.next().expect("peeked");
                    if colored == Some(false) {
                        return Err(c.error("colors must be given for every element or none"));
                    }
                    colored = Some(true);
                    let t = c.expect_args(1)?[0];
                    current = Some(c.count(&t)?);
                }
                Some("element") => {
                    let e = cur.next().expect("peeked");
                    match (colored, current) {
                        (Some(true), Some(c)) => colors.push(c),
                        (Some(true), None) => unreachable!("a color line set the color"),
                        _ => colored = Some(false),
                    }
                    elements.push(resolve_labels(&e, e.args(), space)?);
                }
                _ => break,
            }
        }
        covers.push(MemberCover {
            member: space.id().to_string(),
            elements,
            colors: (colored == Some(true)).then_some(colors),
        });
    }
    Ok(covers)
}

fn write_member_covers<T: Scalar>(
    out: &mut String,
    covers: &[MemberCover],
    family: &MetricFamily<T>,
) {
    for c in covers {
        let _ = writeln!(out, "  member {}", c.member);
        let Some(space) = family.member(&c.member) else {
            continue;
        };
        let mut current = None;
        for (k, e) in c.elements.iter().enumerate() {
            let mut indent = "    ";
            if let Some(colors) = &c.colors {
                if current != Some(colors[k]) {
                    let _ = writeln!(out, "    color {}", colors[k]);
                    current = Some(colors[k]);
                }
                indent = "      ";
            }
            out.push_str(&labelled_line(indent, "element", space, e));
        }
    }
}

/// ```text
/// asdim <family>
/// n <dimension>
/// scale <lambda>
///   mesh <bound>
///   member <id>
///     element <label>...
/// ```
/// Elements may be grouped under `color <k>` lines.
pub fn parse_asdim_certificate<T: Scalar>(
    text: &str,
    family: &MetricFamily<T>,
) -> Result<AsdimCertificate<T>, FormatError> {
    parse_asdim_in(&mut Cursor::new(text, 1), family)
}

fn parse_asdim_in<T: Scalar>(
    cur: &mut Cursor<'_>,
    family: &MetricFamily<T>,
) -> Result<AsdimCertificate<T>, FormatError> {
    let header = cur.expect("asdim")?;
    header.expect_args(1)?;
    check_family_id(&header, &family.id)?;
    let n = single_count(cur, "n")?;
    let mut entries = Vec::new();
    while cur.peek_keyword().is_some() {
        let line = cur.expect("scale")?;
        let t = line.expect_args(1)?[0];
        let lambda = line.scalar(&t)?;
        let mesh = single_scalar(cur, "mesh")?;
        let covers = parse_member_covers(cur, family)?;
        entries.push(AsdimEntry {
            lambda,
            mesh,
            covers,
        });
    }
    Ok(AsdimCertificate {
        family_id: family.id.clone(),
        n,
        entries,
    })
}

pub fn write_asdim_certificate<T: Scalar>(
    cert: &AsdimCertificate<T>,
    family: &MetricFamily<T>,
) -> String {
    let mut out = format!("asdim {}\nn {}\n", cert.family_id, cert.n);
    for e in &cert.entries {
        let _ = writeln!(out, "scale {}\n  mesh {}", e.lambda, e.mesh);
        write_member_covers(&mut out, &e.covers, family);
    }
    out
}

/// ```text
/// an-control <family>
/// n <dimension>
/// m <slope>
/// b <offset>
/// scale <r>
///   member <id>
///     color <k>
///       element <label>...
/// ```
pub fn parse_an_certificate<T: Scalar>(
    text: &str,
    family: &MetricFamily<T>,
) -> Result<AnControlCertificate<T>, FormatError> {
    let mut cur = Cursor::new(text, 1);
    let header = cur.expect("an-control")?;
    header.expect_args(1)?;
    check_family_id(&header, &family.id)?;
    let n = single_count(&mut cur, "n")?;
    let m = single_scalar(&mut cur, "m")?;
    let b = single_scalar(&mut cur, "b")?;
    let mut entries = Vec::new();
    while cur.peek_keyword().is_some() {
        let line = cur.expect("scale")?;
        let t = line.expect_args(1)?[0];
        let r = line.scalar(&t)?;
        let covers = parse_member_covers(&mut cur, family)?;
        entries.push(AnEntry { r, covers });
    }
    Ok(AnControlCertificate {
        family_id: family.id.clone(),
        n,
        m,
        b,
        entries,
    })
}

pub fn write_an_certificate<T: Scalar>(
    cert: &AnControlCertificate<T>,
    family: &MetricFamily<T>,
) -> String {
    let mut out = format!(
        "an-control {}\nn {}\nm {}\nb {}\n",
        cert.family_id, cert.n, cert.m, cert.b
    );
    for e in &cert.entries {
        let _ = writeln!(out, "scale {}", e.r);
        write_member_covers(&mut out, &e.covers, family);
    }
    out
}

/// ```text
/// decomposition <family>
/// root <stage>
/// stage <name>
///   r <scale>
///   n <dimension>
///   leaf <bound>            # or: next <stage>
///   member <id>
///     color <k>
///       piece <label>...
/// ```
/// Stages are listed from the root down the chain. Members of a child stage
/// are the pieces of its parent, named `<member>/c<i>/p<j>`.
pub fn parse_decomposition<T: Scalar>(
    text: &str,
    family: &MetricFamily<T>,
) -> Result<DecompositionCertificate<T>, FormatError> {
    parse_decomposition_in(&mut Cursor::new(text, 1), family)
}

fn parse_decomposition_in<T: Scalar>(
    cur: &mut Cursor<'_>,
    family: &MetricFamily<T>,
) -> Result<DecompositionCertificate<T>, FormatError> {
    let header = cur.expect("decomposition")?;
    header.expect_args(1)?;
    check_family_id(&header, &family.id)?;
    let root_line = cur.expect("root")?;
    let root = root_line.expect_args(1)?[0].text.to_string();
    let mut stages: Vec<Stage<T>> = Vec::new();
    let mut current = family.clone();
    let mut expected = Some(root.clone());
    while cur.peek_keyword().is_some() {
        let line = cur.expect("stage")?;
        let t = line.expect_args(1)?[0];
        match &expected {
            Some(name) if name == t.text => {}
            Some(name) => return Err(line.error_at(&t, format!("expected stage `{name}`"))),
            None => return Err(line.error("no stage follows a leaf stage")),
        }
        let r = single_scalar(cur, "r")?;
        let n = single_count(cur, "n")?;
        let next_line = cur
            .next()
            .ok_or_else(|| cur.end_error("expected `leaf` or `next`, found end of input"))?;
        let arg = next_line.expect_args(1)?[0];
        let next = match next_line.keyword() {
            "leaf" => StageNext::LeafBound(next_line.scalar(&arg)?),
            "next" => StageNext::Child(arg.text.to_string()),
            other => {
                return Err(next_line.error(format!("expected `leaf` or `next`, found `{other}`")))
            }
        };
        let mut members: Vec<MemberPieces> = Vec::new();
        while cur.peek_keyword() == Some("member") {
            let m = cur.next().expect("peeked");
            let space = member(&m, &current)?;
            if members.iter().any(|p| p.member == space.id()) {
                return Err(m.error_at(&m.args()[0], format!("duplicate member `{}`", space.id())));
            }
            let mut colors: Vec<Vec<Vec<usize>>> = Vec::new();
            while cur.peek_keyword() == Some("color") {
                let c = cur.next().expect("peeked");
                let t = c.expect_args(1)?[0];
                if c.count(&t)? != colors.len() {
                    return Err(c.error_at(&t, format!("expected color {}", colors.len())));
                }
                let mut pieces = Vec::new();
                while cur.peek_keyword() == Some("piece") {
                    let p = cur.next().expect("peeked");
                    if p.args().is_empty() {
                        return Err(p.error("a piece needs at least one point"));
                    }
                    pieces.push(resolve_labels(&p, p.args(), space)?);
                }
                colors.push(pieces);
            }
            members.push(MemberPieces {
                member: space.id().to_string(),
                colors,
            });
        }
        let stage = Stage {
            name: t.text.to_string(),
            r,
            n,
            members,
            next,
        };
        expected = match &stage.next {
            StageNext::Child(c) => {
                current = piece_family(&current, &stage).map_err(|e| line.error(e.to_string()))?;
                Some(c.clone())
            }
            StageNext::LeafBound(_) => None,
        };
        stages.push(stage);
    }
    if let Some(name) = expected {
        return Err(cur.end_error(format!("stage `{name}` is missing")));
    }
    Ok(DecompositionCertificate {
        family_id: family.id.clone(),
        root,
        stages,
    })
}

/// Writes the stages along the chain from the root.
pub fn write_decomposition<T: Scalar>(
    cert: &DecompositionCertificate<T>,
    family: &MetricFamily<T>,
) -> Result<String, crate::decomposition::DecompositionError> {
    let mut out = format!("decomposition {}\nroot {}\n", cert.family_id, cert.root);
    let mut current = family.clone();
    for stage in cert.chain()? {
        let _ = writeln!(
            out,
            "stage {}\n  r {}\n  n {}",
            stage.name, stage.r, stage.n
        );
        match &stage.next {
            StageNext::LeafBound(b) => {
                let _ = writeln!(out, "  leaf {b}");
            }
            StageNext::Child(c) => {
                let _ = writeln!(out, "  next {c}");
            }
        }
        for mp in &stage.members {
            let _ = writeln!(out, "  member {}", mp.member);
            let space = current.member(&mp.member).ok_or_else(|| {
                crate::decomposition::DecompositionError::UnknownMember {
                    family: current.id.clone(),
                    member: mp.member.clone(),
                }
            })?;
            for (c, pieces) in mp.colors.iter().enumerate() {
                let _ = writeln!(out, "    color {c}");
                for p in pieces {
                    out.push_str(&labelled_line("      ", "piece", space, p));
                }
            }
        }
        if matches!(stage.next, StageNext::Child(_)) {
            current = piece_family(&current, stage)?;
        }
    }
    Ok(out)
}

/// ```text
/// fibering <source family> -> <target family>
/// schedule <radius>...
/// --- map
/// <map document>
/// --- inner <radius>
/// <decomposition document>
/// --- target
/// <asdim document>
/// ```
/// An inner decomposition is read against the family of preimages of
/// radius-balls, which takes the id named in its header.
pub fn parse_fibering<T: Scalar>(
    text: &str,
    source: &MetricFamily<T>,
    target: &MetricFamily<T>,
) -> Result<FiberingWitness<T>, FormatError> {
    // Split on section marker lines, remembering where each section starts.
    let mut sections: Vec<(usize, String, String)> = Vec::new();
    let mut head = String::new();
    for (k, raw) in text.lines().enumerate() {
        if raw.trim_start().starts_with("---") {
            sections.push((k + 1, raw.to_string(), String::new()));
        } else {
            let buf = match sections.last_mut() {
                Some(s) => &mut s.2,
                None => &mut head,
            };
            buf.push_str(raw);
            buf.push('\n');
        }
    }
    let mut cur = Cursor::new(&head, 1);
    let header = cur.expect("fibering")?;
    let args = header.expect_args(3)?;
    expect_arrow(&header, &args[1])?;
    for (t, fam) in [(&args[0], source), (&args[2], target)] {
        if t.text != fam.id {
            return Err(header.error_at(
                t,
                format!("witness names `{}` but `{}` was supplied", t.text, fam.id),
            ));
        }
    }
    let schedule_line = cur.expect("schedule")?;
    let schedule = schedule_line
        .args()
        .iter()
        .map(|t| schedule_line.scalar(t))
        .collect::<Result<Vec<T>, _>>()?;
    cur.done()?;

    let mut map = None;
    let mut inner = Vec::new();
    let mut target_certificate = None;
    for (number, marker, body) in &sections {
        let mut marker_cur = Cursor::new(marker, *number);
        let m = marker_cur.next().expect("marker line is non-empty");
        let kind = m.tokens.get(1).map(|t| t.text);
        let mut body_cur = Cursor::new(body, number + 1);
        match (m.keyword(), kind) {
            ("---", Some("map")) => {
                m.expect_args(1)?;
                if map.is_some() {
                    return Err(m.error("duplicate map section"));
                }
                map = Some(parse_map_from(&mut body_cur, source, target)?);
            }
            ("---", Some("inner")) => {
                let radius_token = m.expect_args(2)?[1];
                let radius: T = m.scalar(&radius_token)?;
                let f = map
                    .as_ref()
                    .ok_or_else(|| m.error("the map section must come first"))?;
                let id = body_cur
                    .lines
                    .first()
                    .and_then(|l| l.tokens.get(1))
                    .map(|t| t.text.to_string())
                    .ok_or_else(|| body_cur.end_error("expected a decomposition"))?;
                let family = ball_preimage_family(f, source, target, radius, id)
                    .map_err(|e| m.error(e.to_string()))?;
                let cert = parse_decomposition_in(&mut body_cur, &family)?;
                inner.push((radius, cert));
            }
            ("---", Some("target")) => {
                m.expect_args(1)?;
                if target_certificate.is_some() {
                    return Err(m.error("duplicate target section"));
                }
                target_certificate = Some(parse_asdim_in(&mut body_cur, target)?);
            }
            _ => return Err(m.error("expected `--- map`, `--- inner <radius>` or `--- target`")),
        }
    }
    let map = map.ok_or_else(|| header.error("the witness has no map section"))?;
    Ok(FiberingWitness {
        map,
        schedule,
        inner,
        target_certificate,
    })
}

pub fn write_fibering<T: Scalar>(
    witness: &FiberingWitness<T>,
    source: &MetricFamily<T>,
    target: &MetricFamily<T>,
) -> Result<String, crate::decomposition::DecompositionError> {
    let schedule: Vec<String> = witness.schedule.iter().map(T::to_string).collect();
    let mut out = format!(
        "fibering {} -> {}\nschedule {}\n--- map\n",
        witness.map.source,
        witness.map.target,
        schedule.join(" ")
    );
    out.push_str(&write_map(&witness.map, source, target));
    for (radius, cert) in &witness.inner {
        let family = ball_preimage_family(
            &witness.map,
            source,
            target,
            *radius,
            cert.family_id.clone(),
        )?;
        let _ = writeln!(out, "--- inner {radius}");
        out.push_str(&write_decomposition(cert, &family)?);
    }
    if let Some(cert) = &witness.target_certificate {
        out.push_str("--- target\n");
        out.push_str(&write_asdim_certificate(cert, target));
    }
    Ok(out)
}
