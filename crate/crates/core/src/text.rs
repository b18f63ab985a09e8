//! Line-oriented file formats. `#` starts a comment; blank lines are ignored.
//!
//! System file:
//! ```text
//! field p 3 m 1
//! vars 2
//! poly 1*x1^2 + 2
//! poly 1*x2^2 + 2
//! ```
//!
//! Points file: a `field` line, then one comma-separated point per line.
//!
//! Decomposition file: `field`, `vars`, optional `d`, then `lambda` rows,
//! `V i:` component sets, `f i:` component polynomials and optional `rho` rows.
//! When only one of `V` or `f` is given the other is derived from it.

use std::fmt::Write as _;

use crate::decomp::Decomposition;
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, UniPoly};
use crate::mpoly::{LinearMap, MultiPoly, PolySystem};
use crate::points::PointSet;

/// Non-empty, comment-stripped lines with 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn relabel(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { msg, .. } => Error::parse(line, msg),
        other => Error::parse(line, other.to_string()),
    }
}

pub fn field_header(f: &Field) -> String {
    if f.e() > 1 {
        format!("field p {} m {} ext {}", f.p(), f.m(), f.e())
    } else {
        format!("field p {} m {}", f.p(), f.m())
    }
}

fn parse_field_line(line: usize, rest: &str) -> Result<Field> {
    let words: Vec<&str> = rest.split_whitespace().collect();
    let mut p = None;
    let mut m = 1;
    let mut e = 1;
    for pair in words.chunks(2) {
        let [key, value] = pair else {
            return Err(Error::parse(line, "field line needs key/value pairs"));
        };
        let v: u64 = value
            .parse()
            .map_err(|_| Error::parse(line, format!("bad number `{value}`")))?;
        match *key {
            "p" => p = Some(v),
            "m" => m = v as usize,
            "ext" => e = v as usize,
            other => return Err(Error::parse(line, format!("unknown field key `{other}`"))),
        }
    }
    let p = p.ok_or_else(|| Error::parse(line, "field line without p"))?;
    Field::new(p, m, e).map_err(|err| relabel(line, err))
}

fn split_keyword(l: &str) -> (&str, &str) {
    match l.split_once(char::is_whitespace) {
        Some((k, rest)) => (k, rest.trim()),
        None => (l, ""),
    }
}

fn parse_elements(field: &Field, line: usize, text: &str) -> Result<Vec<FieldElement>> {
    text.split(',')
        .map(|s| field.parse(s.trim()).map_err(|e| relabel(line, e)))
        .collect()
}

fn format_elements(field: &Field, xs: &[FieldElement]) -> String {
    xs.iter().map(|&x| field.format(x)).collect::<Vec<_>>().join(", ")
}

pub fn write_system(sys: &PolySystem) -> String {
    let mut out = String::new();
    writeln!(out, "{}", field_header(sys.field())).unwrap();
    writeln!(out, "vars {}", sys.n()).unwrap();
    for f in sys.polys() {
        writeln!(out, "poly {}", f.to_text()).unwrap();
    }
    out
}

pub fn parse_system(text: &str) -> Result<PolySystem> {
    let mut field = None;
    let mut n = None;
    let mut polys = Vec::new();
    for (line, l) in lines(text) {
        let (key, rest) = split_keyword(l);
        match key {
            "field" => field = Some(parse_field_line(line, rest)?),
            "vars" => {
                n = Some(
                    rest.parse::<usize>()
                        .map_err(|_| Error::parse(line, format!("bad variable count `{rest}`")))?,
                )
            }
            "poly" => {
                let (Some(f), Some(n)) = (&field, n) else {
                    return Err(Error::parse(line, "poly before field and vars"));
                };
                polys.push(MultiPoly::parse(f, n, rest).map_err(|e| relabel(line, e))?);
            }
            other => return Err(Error::parse(line, format!("unknown keyword `{other}`"))),
        }
    }
    let field = field.ok_or_else(|| Error::parse(0, "missing field line"))?;
    let n = n.ok_or_else(|| Error::parse(0, "missing vars line"))?;
    PolySystem::new(&field, n, polys)
}

pub fn write_points(w: &PointSet) -> String {
    let mut out = String::new();
    writeln!(out, "{}", field_header(w.field())).unwrap();
    for p in w.points() {
        writeln!(out, "{}", format_elements(w.field(), p)).unwrap();
    }
    out
}

pub fn parse_points(text: &str) -> Result<PointSet> {
    let mut field: Option<Field> = None;
    let mut n = None;
    let mut pts = Vec::new();
    for (line, l) in lines(text) {
        let (key, rest) = split_keyword(l);
        if key == "field" {
            field = Some(parse_field_line(line, rest)?);
            continue;
        }
        if key == "vars" {
            n = Some(
                rest.parse::<usize>()
                    .map_err(|_| Error::parse(line, format!("bad dimension `{rest}`")))?,
            );
            continue;
        }
        let f = field
            .as_ref()
            .ok_or_else(|| Error::parse(line, "point before the field line"))?;
        let p = parse_elements(f, line, l)?;
        if *n.get_or_insert(p.len()) != p.len() {
            return Err(Error::parse(line, "points of different dimensions"));
        }
        pts.push(p);
    }
    let field = field.ok_or_else(|| Error::parse(0, "missing field line"))?;
    let n = n.ok_or_else(|| Error::parse(0, "no points and no vars line"))?;
    PointSet::new(&field, n, pts).map_err(|e| Error::parse(0, e.to_string()))
}

pub fn write_decomposition(dec: &Decomposition) -> String {
    let f = dec.field();
    let mut out = String::new();
    writeln!(out, "{}", field_header(f)).unwrap();
    writeln!(out, "vars {}", dec.n()).unwrap();
    let degrees = dec.degrees();
    if degrees.windows(2).all(|w| w[0] == w[1]) {
        if let Some(d) = degrees.first() {
            writeln!(out, "d {d}").unwrap();
        }
    }
    for row in dec.lambda.rows() {
        writeln!(out, "lambda {}", format_elements(f, &row)).unwrap();
    }
    for (i, s) in dec.sets.iter().enumerate() {
        writeln!(out, "V {}: {}", i + 1, format_elements(f, s)).unwrap();
    }
    for (i, p) in dec.polys.iter().enumerate() {
        writeln!(out, "f {}: {}", i + 1, p.to_text()).unwrap();
    }
    if let Some(rho) = &dec.rho {
        for row in rho.rows() {
            writeln!(out, "rho {}", format_elements(f, &row)).unwrap();
        }
    }
    out
}

fn indexed(line: usize, rest: &str, n: usize) -> Result<(usize, &str)> {
    let (idx, body) = rest
        .split_once(':')
        .ok_or_else(|| Error::parse(line, "expected `<index>: ...`"))?;
    let i: usize = idx
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("bad index `{idx}`")))?;
    if i == 0 || i > n {
        return Err(Error::parse(line, format!("index {i} outside 1..{n}")));
    }
    Ok((i - 1, body.trim()))
}

pub fn parse_decomposition(text: &str) -> Result<Decomposition> {
    let mut field: Option<Field> = None;
    let mut n: Option<usize> = None;
    let mut d: Option<usize> = None;
    let mut lambda = Vec::new();
    let mut rho = Vec::new();
    let mut sets: Vec<Option<Vec<FieldElement>>> = Vec::new();
    let mut polys: Vec<Option<UniPoly>> = Vec::new();
    for (line, l) in lines(text) {
        let (key, rest) = split_keyword(l);
        if key == "field" {
            field = Some(parse_field_line(line, rest)?);
            continue;
        }
        if key == "vars" {
            let v: usize = rest
                .parse()
                .map_err(|_| Error::parse(line, format!("bad variable count `{rest}`")))?;
            n = Some(v);
            sets = vec![None; v];
            polys = vec![None; v];
            continue;
        }
        let (Some(f), Some(n)) = (&field, n) else {
            return Err(Error::parse(line, "field and vars must come first"));
        };
        match key {
            "d" => {
                d = Some(
                    rest.parse()
                        .map_err(|_| Error::parse(line, format!("bad d `{rest}`")))?,
                )
            }
            "lambda" => lambda.push(parse_elements(f, line, rest)?),
            "rho" => rho.push(parse_elements(f, line, rest)?),
            "V" => {
                let (i, body) = indexed(line, rest, n)?;
                sets[i] = Some(parse_elements(f, line, body)?);
            }
            "f" => {
                let (i, body) = indexed(line, rest, n)?;
                let p = MultiPoly::parse(f, n, body).map_err(|e| relabel(line, e))?;
                let u = p
                    .as_univariate(i)
                    .ok_or_else(|| Error::parse(line, format!("f {} must be a polynomial in x{}", i + 1, i + 1)))?;
                polys[i] = Some(u);
            }
            other => return Err(Error::parse(line, format!("unknown keyword `{other}`"))),
        }
    }
    let field = field.ok_or_else(|| Error::parse(0, "missing field line"))?;
    let n = n.ok_or_else(|| Error::parse(0, "missing vars line"))?;
    if lambda.len() != n {
        return Err(Error::parse(0, format!("expected {n} lambda rows, found {}", lambda.len())));
    }
    let lambda = LinearMap::from_rows(&field, &lambda).map_err(|e| Error::parse(0, e.to_string()))?;
    let rho = match rho.len() {
        0 => None,
        k if k == n => Some(LinearMap::from_rows(&field, &rho).map_err(|e| Error::parse(0, e.to_string()))?),
        k => return Err(Error::parse(0, format!("expected {n} rho rows, found {k}"))),
    };
    let have_sets = sets.iter().all(Option::is_some);
    let have_polys = polys.iter().all(Option::is_some);
    let dec = match (have_sets, have_polys) {
        (true, true) => {
            let mut sets: Vec<Vec<FieldElement>> = sets.into_iter().flatten().collect();
            sets.iter_mut().for_each(|s| s.sort());
            Decomposition {
                lambda,
                sets,
                polys: polys.into_iter().flatten().collect(),
                rho,
            }
        }
        (true, false) => Decomposition::from_sets(lambda, sets.into_iter().flatten().collect(), rho)
            .map_err(|e| Error::parse(0, e.to_string()))?,
        (false, true) => Decomposition::from_polys(lambda, polys.into_iter().flatten().collect(), rho)?,
        (false, false) => return Err(Error::parse(0, "every component needs a V or f line")),
    };
    if let Some(d) = d {
        if dec.sets.iter().any(|s| s.len() != d) && dec.polys.iter().any(|p| p.degree() != Some(d)) {
            return Err(Error::parse(0, format!("components do not have cardinality {d}")));
        }
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{generate, GenOptions};
    use crate::limits::Limits;

    #[test]
    fn system_round_trip() {
        let text = "# example\nfield p 3 m 1\nvars 2\npoly x1^2 + 2\npoly 1*x2^2+2  # second\n";
        let sys = parse_system(text).unwrap();
        assert_eq!(sys.len(), 2);
        let written = write_system(&sys);
        assert_eq!(written, "field p 3 m 1\nvars 2\npoly 1*x1^2 + 2\npoly 1*x2^2 + 2\n");
        assert_eq!(parse_system(&written).unwrap(), sys);
    }

    #[test]
    fn system_errors_carry_lines() {
        let err = parse_system("field p 3 m 1\nvars 2\npoly x3 + 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(parse_system("field p 4 m 1\nvars 1\n").is_err());
        assert!(parse_system("vars 1\npoly x1\n").is_err());
    }

    #[test]
    fn points_round_trip() {
        let text = "field p 2 m 2\n(t), 1\n0, (t+1)\n";
        let w = parse_points(text).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(parse_points(&write_points(&w)).unwrap(), w);
        assert!(parse_points("field p 3 m 1\n1, 2\n1, 2\n").is_err());
        assert!(parse_points("1, 2\n").is_err());
    }

    #[test]
    fn decomposition_round_trip() {
        let l = Limits::default();
        for (p, m, e) in [(3, 1, 1), (2, 2, 1), (3, 1, 2)] {
            let f = Field::new(p, m, 1).unwrap();
            let inst = generate(2, 2, &f, e, 11, GenOptions::default(), &l).unwrap();
            let text = write_decomposition(&inst.truth);
            assert_eq!(parse_decomposition(&text).unwrap(), inst.truth, "{text}");
        }
    }

    #[test]
    fn decomposition_partial_inputs() {
        let only_sets = "field p 3 m 1\nvars 2\nlambda 1, 0\nlambda 0, 1\nV 1: 1, 2\nV 2: 2, 1\n";
        let dec = parse_decomposition(only_sets).unwrap();
        assert_eq!(dec.polys[1].to_text(), "1*x2^2 + 2");
        let only_polys = "field p 3 m 1\nvars 2\nlambda 1, 0\nlambda 0, 1\nf 1: x1^2+2\nf 2: x2^2+2\n";
        assert_eq!(parse_decomposition(only_polys).unwrap(), dec);
        let wrong_var = "field p 3 m 1\nvars 2\nlambda 1, 0\nlambda 0, 1\nf 1: x2^2+2\nf 2: x2^2+2\n";
        assert!(parse_decomposition(wrong_var).is_err());
    }
}
