//! Text formats: rationals, point lists, polygon files, CSV, PGM and JSON.

use std::fmt::Write as _;

use serde_json::{json, Value};
use tropsand_core::sandpile::SandState;
use tropsand_core::tropical::{TropicalCurve, TropicalPolynomial};
use tropsand_core::{LatticePolygon, Point, Rational};

use crate::error::CliError;

/// Parses "7", "-3/4" or "0.125" exactly.
pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let s = s.trim();
    let bad = || CliError::Config(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let whole: i128 = if int.is_empty() || int == "-" || int == "+" { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i128.pow(frac.len() as u32);
        let f: i128 = frac.parse().map_err(|_| bad())?;
        let magnitude = whole.abs() * den + f;
        return Ok(Rational::new(if neg { -magnitude } else { magnitude }, den));
    }
    s.parse::<i128>().map(Rational::from_integer).map_err(|_| bad())
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn hypot(a: i64, b: i64) -> f64 {
    (a as f64).hypot(b as f64)
}

/// "x,y;x,y;..." with rational coordinates. Empty input gives no points.
pub fn parse_points(s: &str) -> Result<Vec<Point>, CliError> {
    s.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (x, y) = p
                .split_once(',')
                .ok_or_else(|| CliError::Config(format!("point {p:?} is not of the form x,y")))?;
            Ok(Point::new(parse_rational(x)?, parse_rational(y)?))
        })
        .collect()
}

/// Comma separated integers such as "1,2" or "50,100,200".
pub fn parse_ints<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| CliError::Config(format!("bad {what}: {s:?}"))))
        .collect()
}

fn json_rational(v: &Value) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(CliError::Config(format!("expected a number, got {other}"))),
    }
}

/// `{"vertices": [[x, y], ...]}` or a bare vertex array. Coordinates may be
/// JSON numbers or strings such as "2/5".
pub fn parse_polygon(text: &str) -> Result<LatticePolygon, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Config(format!("polygon file: {e}")))?;
    let list = match &v {
        Value::Array(a) => a,
        Value::Object(o) => o
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| CliError::Config("polygon file needs a \"vertices\" array".into()))?,
        _ => return Err(CliError::Config("polygon file must be an object or an array".into())),
    };
    let pts = list
        .iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([x, y]) => Ok(Point::new(json_rational(x)?, json_rational(y)?)),
            _ => Err(CliError::Config(format!("vertex {p} is not a pair"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    LatticePolygon::new(pts).map_err(|e| CliError::Config(format!("polygon: {e}")))
}

pub fn point_json(p: &Point) -> Value {
    json!([format_rational(&p.x), format_rational(&p.y)])
}

pub fn polygon_json(poly: &LatticePolygon) -> Value {
    json!({ "vertices": poly.vertices().iter().map(point_json).collect::<Vec<_>>() })
}

pub fn polynomial_json(f: &TropicalPolynomial) -> Value {
    let terms: Vec<Value> = f
        .coefficients()
        .iter()
        .map(|(w, c)| json!({ "w": [w.x, w.y], "c": format_rational(c) }))
        .collect();
    json!({ "domain": polygon_json(f.domain()), "terms": terms })
}

pub fn curve_json(c: &TropicalCurve) -> Value {
    let vertices: Vec<Value> = c.vertices.iter().map(point_json).collect();
    let approx: Vec<Value> = c.vertices.iter().map(|p| json!([to_f64(&p.x), to_f64(&p.y)])).collect();
    let edges: Vec<Value> = c
        .edges
        .iter()
        .map(|e| {
            json!({
                "a": e.a,
                "b": e.b,
                "direction": [e.primitive.x, e.primitive.y],
                "weight": e.weight,
                "monomials": [[e.monomials.0.x, e.monomials.0.y], [e.monomials.1.x, e.monomials.1.y]],
            })
        })
        .collect();
    json!({ "vertices": vertices, "vertices_approx": approx, "edges": edges })
}

pub fn rational_json(r: &Rational) -> Value {
    json!({ "exact": format_rational(r), "approx": to_f64(r) })
}

/// Rows "x,y,value" after a header.
pub fn cells_csv(header: &str, rows: impl IntoIterator<Item = ((i64, i64), i64)>) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for ((x, y), v) in rows {
        let _ = writeln!(out, "{x},{y},{v}");
    }
    out
}

pub const GRAY: [u8; 4] = [0, 85, 170, 255];

/// Plain PGM of a planar state, y axis pointing up, cells off the region white.
pub fn state_pgm(state: &SandState) -> String {
    let l = state.lattice();
    let Some((x0, y0, w, h)) = l.planar_box() else {
        return pgm_rows(1, 1, &[vec![255]]);
    };
    let rows: Vec<Vec<u8>> = (0..h)
        .rev()
        .map(|r| {
            (0..w)
                .map(|c| match l.index(x0 + c as i64, y0 + r as i64) {
                    Some(v) => GRAY[state.height(v).min(3) as usize],
                    None => 255,
                })
                .collect()
        })
        .collect();
    pgm_rows(w, h, &rows)
}

pub fn pgm_rows(w: usize, h: usize, rows: &[Vec<u8>]) -> String {
    let mut out = format!("P2\n{w} {h}\n255\n");
    for row in rows {
        let line: Vec<String> = row.iter().map(u8::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;
    use tropsand_core::geometry::Region;
    use tropsand_core::sandpile::Lattice;

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("2/5").unwrap(), Rational::new(2, 5));
        assert_eq!(parse_rational("-0.125").unwrap(), Rational::new(-1, 8));
        assert_eq!(parse_rational("0.4").unwrap(), Rational::new(2, 5));
        assert_eq!(parse_rational(" 7 ").unwrap(), Rational::from_integer(7));
        assert_eq!(parse_rational("-.5").unwrap(), Rational::new(-1, 2));
        for bad in ["", "1/0", "a", "1.", "1.2.3", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert_eq!(format_rational(&Rational::new(6, 4)), "3/2");
        assert_eq!(format_rational(&Rational::from_integer(-2)), "-2");
    }

    #[test]
    fn points_parse() {
        let p = parse_points("2/5,3/5; 1,0.5").unwrap();
        assert_eq!(p, vec![Point::new(Rational::new(2, 5), Rational::new(3, 5)), Point::new(1.into(), Rational::new(1, 2))]);
        assert!(parse_points("").unwrap().is_empty());
        assert!(parse_points("1;2").is_err());
    }

    #[test]
    fn polygon_files() {
        let p = parse_polygon(r#"{"vertices": [[0,0],[1,0],["1","1"],[0, 1.0]]}"#).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert!(parse_polygon("[[0,0],[1,0],[0,1]]").is_ok());
        assert!(parse_polygon("[[0,0],[1,0],[2,0]]").is_err());
        assert!(parse_polygon("{").is_err());
        assert!(parse_polygon(r#"{"points": []}"#).is_err());
    }

    #[test]
    fn pgm_gray_levels() {
        let l = Arc::new(Lattice::from_region(&Region::square(1)));
        let s = SandState::new(l, vec![0, 1, 2, 3]).unwrap();
        let pgm = state_pgm(&s);
        let lines: Vec<&str> = pgm.lines().collect();
        assert_eq!(&lines[..3], ["P2", "4 4", "255"]);
        assert_eq!(lines[3], "255 255 255 255");
        // y = 1 row holds heights 2, 3 and y = 0 row holds 0, 1
        assert_eq!(lines[4], "255 170 255 255");
        assert_eq!(lines[5], "255 0 85 255");
    }

    #[test]
    fn csv_rows() {
        assert_eq!(cells_csv("x,y,h", [((1, 2), 3)]), "x,y,h\n1,2,3\n");
    }
}
