use serde::{Deserialize, Serialize};

use super::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Approach1,
    Approach2,
    Manual,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Approach1 => "approach1",
            Method::Approach2 => "approach2",
            Method::Manual => "manual",
        })
    }
}

/// Ordered fin outline from start to end.
///
/// Field order matches the JSON layout:
/// `{"method","threshold","scale","closed_form","points":[[x,y],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainOutline {
    pub method: Method,
    pub threshold: u8,
    pub scale: u32,
    pub closed_form: bool,
    pub points: Vec<Point>,
}

impl ChainOutline {
    pub fn manual(points: Vec<Point>) -> Self {
        Self {
            method: Method::Manual,
            threshold: 0,
            scale: 1,
            closed_form: false,
            points,
        }
    }

    /// Sum of Euclidean distances between consecutive points.
    pub fn arc_length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(w[1])).sum()
    }

    pub fn is_4_connected(&self) -> bool {
        self.points.windows(2).all(|w| w[0].is_4_adjacent(w[1]))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("outline serialises")
    }

    /// One `x y` pair per line.
    pub fn to_text(&self) -> String {
        self.points
            .iter()
            .map(|p| format!("{} {}\n", p.x, p.y))
            .collect()
    }
}

/// Parses the two-column text format; blank lines and `#` comments are
/// skipped.
pub fn parse_text_points(text: &str) -> Result<Vec<Point>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(n, line)| {
            let mut it = line.split_whitespace().map(str::parse::<i32>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(x)), Some(Ok(y)), None) => Ok(Point::new(x, y)),
                _ => Err(format!(
                    "line {}: expected two integers, got {line:?}",
                    n + 1
                )),
            }
        })
        .collect()
}

/// 4-connected raster line from `a` to `b`, excluding `a`.
fn bridge(a: Point, b: Point, out: &mut Vec<Point>) {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let (sx, sy) = (dx.signum(), dy.signum());
    let (nx, ny) = (dx.abs(), dy.abs());
    let (mut ix, mut iy) = (0, 0);
    let mut p = a;
    while ix < nx || iy < ny {
        // step along whichever axis keeps the walk closest to the segment
        if (1 + 2 * ix) * ny < (1 + 2 * iy) * nx {
            p.x += sx;
            ix += 1;
        } else {
            p.y += sy;
            iy += 1;
        }
        out.push(p);
    }
}

/// Maps working-image points to `offset + scale * point`, dropping repeats
/// and filling the gaps so consecutive points stay 4-adjacent.
pub fn rescale_outline(o: &ChainOutline, scale: u32, offset: Point) -> ChainOutline {
    let s = scale.max(1) as i32;
    let mut points: Vec<Point> = Vec::with_capacity(o.points.len() * s as usize);
    for p in &o.points {
        let q = Point::new(offset.x + s * p.x, offset.y + s * p.y);
        match points.last().copied() {
            None => points.push(q),
            Some(last) if last == q => {}
            Some(last) => bridge(last, q, &mut points),
        }
    }
    ChainOutline {
        points,
        scale: o.scale * scale.max(1),
        ..o.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(points: &[(i32, i32)]) -> ChainOutline {
        ChainOutline::manual(points.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    #[test]
    fn identity_rescale() {
        let o = chain(&[(0, 0), (1, 0), (1, 1), (2, 1)]);
        assert_eq!(rescale_outline(&o, 1, Point::new(0, 0)), o);
    }

    #[test]
    fn scale_four_bridges_gaps() {
        let o = chain(&[(3, 2), (4, 2)]);
        let r = rescale_outline(&o, 4, Point::new(0, 0));
        let expect: Vec<Point> = (12..=16).map(|x| Point::new(x, 8)).collect();
        assert_eq!(r.points, expect);
        assert!(r.is_4_connected());
        assert_eq!(r.scale, 4);
    }

    #[test]
    fn offset_translates() {
        let o = chain(&[(0, 0), (0, 1)]);
        let r = rescale_outline(&o, 1, Point::new(100, 50));
        assert_eq!(r.points, vec![Point::new(100, 50), Point::new(100, 51)]);
    }

    #[test]
    fn diagonal_gap_becomes_staircase() {
        let o = chain(&[(0, 0), (3, 2)]);
        let r = rescale_outline(&o, 2, Point::new(0, 0));
        assert!(r.is_4_connected());
        assert_eq!(r.points.first(), Some(&Point::new(0, 0)));
        assert_eq!(r.points.last(), Some(&Point::new(6, 4)));
        assert_eq!(r.points.len(), 11);
    }

    #[test]
    fn json_layout() {
        let o = ChainOutline {
            method: Method::Approach2,
            threshold: 65,
            scale: 2,
            closed_form: true,
            points: vec![Point::new(1, 2), Point::new(1, 3)],
        };
        assert_eq!(
            o.to_json(),
            r#"{"method":"approach2","threshold":65,"scale":2,"closed_form":true,"points":[[1,2],[1,3]]}"#
        );
        let back: ChainOutline = serde_json::from_str(&o.to_json()).unwrap();
        assert_eq!(back, o);
    }

    #[test]
    fn text_format() {
        let o = chain(&[(5, 7), (6, 7)]);
        assert_eq!(o.to_text(), "5 7\n6 7\n");
        assert_eq!(parse_text_points("# x y\n5 7\n\n6 7\n").unwrap(), o.points);
        assert!(parse_text_points("5\n").is_err());
        assert!(parse_text_points("5 6 7\n").is_err());
    }
}
