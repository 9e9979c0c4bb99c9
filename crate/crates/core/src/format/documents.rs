use std::fmt::Write as _;

use crate::maps::FamilyMap;
use crate::metric::{FiniteMetricSpace, GroupAction, MetricFamily, PointSubset};
use crate::scalar::Scalar;

use super::{labelled_line, resolve_labels, Cursor, FormatError, Line, Token};

/// ```text
/// family <id>
/// member <id>
///   points <label>...
///   <d(0,0)>
///   <d(1,0)> <d(1,1)>
///   ...
/// ```
pub fn parse_family<T: Scalar>(text: &str) -> Result<MetricFamily<T>, FormatError> {
    let mut cur = Cursor::new(text, 1);
    let header = cur.expect("family")?;
    let id = header.expect_args(1)?[0].text.to_string();
    let mut members = Vec::new();
    while cur.peek_keyword().is_some() {
        let line = cur.expect("member")?;
        let member_id = line.expect_args(1)?[0].text.to_string();
        if members
            .iter()
            .any(|m: &FiniteMetricSpace<T>| m.id() == member_id)
        {
            return Err(line.error_at(&line.args()[0], format!("duplicate member `{member_id}`")));
        }
        let points = cur.expect("points")?;
        let labels: Vec<String> = points.args().iter().map(|t| t.text.to_string()).collect();
        for (k, t) in points.args().iter().enumerate() {
            if labels[..k].contains(&labels[k]) {
                return Err(points.error_at(t, format!("duplicate label `{}`", t.text)));
            }
        }
        let n = labels.len();
        let mut dist = vec![T::zero(); n * n];
        for i in 0..n {
            let row = cur.next().ok_or_else(|| {
                cur.end_error(format!("member `{member_id}` needs {n} distance rows"))
            })?;
            if row.tokens.len() != i + 1 {
                let message = format!(
                    "row {} of `{member_id}` needs {} entries, found {}",
                    i,
                    i + 1,
                    row.tokens.len()
                );
                return Err(match row.tokens.get(i + 1) {
                    Some(extra) => row.error_at(extra, message),
                    None => FormatError {
                        line: row.number,
                        column: row.end(),
                        message,
                    },
                });
            }
            for (j, t) in row.tokens.iter().enumerate() {
                let v: T = row.scalar(t)?;
                if j == i && v != T::zero() {
                    return Err(row.error_at(t, "diagonal entries must be 0"));
                }
                dist[i * n + j] = v;
                dist[j * n + i] = v;
            }
        }
        members.push(
            FiniteMetricSpace::from_flat(member_id, labels, dist)
                .map_err(|e| line.error(e.to_string()))?,
        );
    }
    MetricFamily::new(id, members).map_err(|e| header.error(e.to_string()))
}

pub fn write_family<T: Scalar>(family: &MetricFamily<T>) -> String {
    let mut out = format!("family {}\n", family.id);
    for m in family.members() {
        let _ = writeln!(out, "member {}", m.id());
        out.push_str(&labelled_line(
            "  ",
            "points",
            m,
            &m.points().collect::<Vec<_>>(),
        ));
        for i in m.points() {
            let row: Vec<String> = (0..=i).map(|j| m.d(i, j).to_string()).collect();
            let _ = writeln!(out, "  {}", row.join(" "));
        }
    }
    out
}

/// ```text
/// action <member>
/// elements <g>...
/// perm <g> <image of point 0> <image of point 1> ...
/// compose <g> <g·h for each h in element order>
/// ```
/// One `perm` and one `compose` line per element, in element order.
pub fn parse_action<T: Scalar>(
    text: &str,
    space: &FiniteMetricSpace<T>,
) -> Result<GroupAction, FormatError> {
    let mut cur = Cursor::new(text, 1);
    let header = cur.expect("action")?;
    let target = &header.expect_args(1)?[0];
    if target.text != space.id() {
        return Err(header.error_at(
            target,
            format!(
                "action is on `{}` but `{}` was supplied",
                target.text,
                space.id()
            ),
        ));
    }
    let names = cur.expect("elements")?;
    let elements: Vec<String> = names.args().iter().map(|t| t.text.to_string()).collect();
    if elements.is_empty() {
        return Err(names.error("a group has at least one element"));
    }
    let element_index = |line: &Line<'_>, expected: usize| -> Result<(), FormatError> {
        let t = &line.args()[0];
        if elements.iter().position(|e| e == t.text) != Some(expected) {
            return Err(line.error_at(t, format!("expected element `{}`", elements[expected])));
        }
        Ok(())
    };
    let mut perms = Vec::new();
    for g in 0..elements.len() {
        let line = cur.expect("perm")?;
        line.expect_args(space.len() + 1)?;
        element_index(&line, g)?;
        perms.push(resolve_labels(&line, &line.args()[1..], space)?);
    }
    let mut compose = Vec::new();
    for g in 0..elements.len() {
        let line = cur.expect("compose")?;
        line.expect_args(elements.len() + 1)?;
        element_index(&line, g)?;
        let row = line.args()[1..]
            .iter()
            .map(|t| {
                elements
                    .iter()
                    .position(|e| e == t.text)
                    .ok_or_else(|| line.error_at(t, format!("unknown element `{}`", t.text)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        compose.push(row);
    }
    cur.done()?;
    GroupAction::new(elements, perms, compose).map_err(|e| header.error(e.to_string()))
}

pub fn write_action<T: Scalar>(action: &GroupAction, space: &FiniteMetricSpace<T>) -> String {
    let mut out = format!(
        "action {}\nelements {}\n",
        space.id(),
        action.elements.join(" ")
    );
    for (g, perm) in action.perms.iter().enumerate() {
        out.push_str(&labelled_line(
            "",
            &format!("perm {}", action.elements[g]),
            space,
            perm,
        ));
    }
    for (g, row) in action.compose.iter().enumerate() {
        let names: Vec<&str> = row.iter().map(|&h| action.elements[h].as_str()).collect();
        let _ = writeln!(out, "compose {} {}", action.elements[g], names.join(" "));
    }
    out
}

/// An ordered list of subsets of one member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsets {
    pub member: String,
    pub sets: Vec<PointSubset>,
}

/// ```text
/// subsets <member>
/// subset <label>...
/// ```
pub fn parse_subsets<T: Scalar>(
    text: &str,
    space: &FiniteMetricSpace<T>,
) -> Result<Subsets, FormatError> {
    let mut cur = Cursor::new(text, 1);
    let header = cur.expect("subsets")?;
    let target = &header.expect_args(1)?[0];
    if target.text != space.id() {
        return Err(header.error_at(
            target,
            format!(
                "subsets are of `{}` but `{}` was supplied",
                target.text,
                space.id()
            ),
        ));
    }
    let mut sets = Vec::new();
    while cur.peek_keyword().is_some() {
        let line = cur.expect("subset")?;
        sets.push(PointSubset::new(
            space.id(),
            resolve_labels(&line, line.args(), space)?,
        ));
    }
    Ok(Subsets {
        member: space.id().to_string(),
        sets,
    })
}

pub fn write_subsets<T: Scalar>(sets: &[PointSubset], space: &FiniteMetricSpace<T>) -> String {
    let mut out = format!("subsets {}\n", space.id());
    for s in sets {
        out.push_str(&labelled_line("", "subset", space, s.indices()));
    }
    out
}

/// ```text
/// map <source family> -> <target family>
/// <source member> -> <target member>
///   <label> : <label>
/// ```
/// Every point of the source member needs exactly one image line.
pub fn parse_map<T: Scalar>(
    text: &str,
    source: &MetricFamily<T>,
    target: &MetricFamily<T>,
) -> Result<FamilyMap, FormatError> {
    let mut cur = Cursor::new(text, 1);
    parse_map_from(&mut cur, source, target)
}

pub(super) fn parse_map_from<T: Scalar>(
    cur: &mut Cursor<'_>,
    source: &MetricFamily<T>,
    target: &MetricFamily<T>,
) -> Result<FamilyMap, FormatError> {
    let header = cur.expect("map")?;
    let args = header.expect_args(3)?;
    expect_arrow(&header, &args[1])?;
    for (t, fam) in [(&args[0], source), (&args[2], target)] {
        if t.text != fam.id {
            return Err(header.error_at(
                t,
                format!("map names `{}` but `{}` was supplied", t.text, fam.id),
            ));
        }
    }
    let mut map = FamilyMap::new(&source.id, &target.id);
    while let Some(line) = cur.next() {
        let args = line.tokens.as_slice();
        if args.len() != 3 || args[1].text != "->" {
            return Err(line.error("expected `<source member> -> <target member>`"));
        }
        let domain = source
            .member(args[0].text)
            .ok_or_else(|| line.error_at(&args[0], format!("unknown member `{}`", args[0].text)))?;
        let codomain = target
            .member(args[2].text)
            .ok_or_else(|| line.error_at(&args[2], format!("unknown member `{}`", args[2].text)))?;
        let mut assignment: Vec<Option<usize>> = vec![None; domain.len()];
        while cur
            .lines
            .get(cur.pos)
            .is_some_and(|l| l.tokens.get(1).is_some_and(|t| t.text == ":"))
        {
            let pair = cur.next().expect("peeked");
            pair.expect_args(2)?;
            let x = resolve_labels(&pair, &pair.tokens[..1], domain)?[0];
            let y = resolve_labels(&pair, &pair.tokens[2..], codomain)?[0];
            if assignment[x].replace(y).is_some() {
                return Err(pair.error(format!("point `{}` is mapped twice", domain.label(x))));
            }
        }
        let assignment = assignment
            .iter()
            .enumerate()
            .map(|(x, y)| {
                y.ok_or_else(|| line.error(format!("point `{}` has no image", domain.label(x))))
            })
            .collect::<Result<Vec<_>, _>>()?;
        map = map.with_function(domain.id(), codomain.id(), assignment);
    }
    map.validate(source, target)
        .map_err(|e| header.error(e.to_string()))?;
    Ok(map)
}

pub(super) fn expect_arrow(line: &Line<'_>, t: &Token<'_>) -> Result<(), FormatError> {
    if t.text == "->" {
        Ok(())
    } else {
        Err(line.error_at(t, "expected `->`"))
    }
}

pub fn write_map<T: Scalar>(
    map: &FamilyMap,
    source: &MetricFamily<T>,
    target: &MetricFamily<T>,
) -> String {
    let mut out = format!("map {} -> {}\n", map.source, map.target);
    for f in &map.functions {
        let _ = writeln!(out, "{} -> {}", f.source, f.target);
        let (Some(domain), Some(codomain)) = (source.member(&f.source), target.member(&f.target))
        else {
            continue;
        };
        for (x, &y) in f.assignment.iter().enumerate() {
            let _ = writeln!(out, "  {} : {}", domain.label(x), codomain.label(y));
        }
    }
    out
}
