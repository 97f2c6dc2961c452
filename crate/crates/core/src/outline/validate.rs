use serde::{Deserialize, Serialize};

use super::{ChainOutline, EndpointPair};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationConfig {
    /// Minimum arc length as a multiple of the start-to-end distance.
    pub min_length_factor: f64,
    /// Allowed distance between a chain end and its user point, as a
    /// fraction of the start-to-end distance...
    pub approach_fraction: f64,
    /// ...but never less than this many pixels.
    pub approach_min_px: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            min_length_factor: 1.2,
            approach_fraction: 0.1,
            approach_min_px: 10.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rejection {
    TooShort {
        arc_length: f64,
        required: f64,
    },
    DoesNotApproach {
        endpoint: String,
        distance: f64,
        tolerance: f64,
    },
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rejection::TooShort { arc_length, required } => {
                write!(f, "outline too short: arc length {arc_length:.1} px < {required:.1} px")
            }
            Rejection::DoesNotApproach {
                endpoint,
                distance,
                tolerance,
            } => write!(
                f,
                "outline does not approach the {endpoint} point: {distance:.1} px away (tolerance {tolerance:.1} px)"
            ),
        }
    }
}

/// Rejects outlines flatter than their secant or ending too far from the
/// user's points.
pub fn validate_outline(
    o: &ChainOutline,
    e: &EndpointPair,
    cfg: &ValidationConfig,
) -> Result<(), Rejection> {
    let secant = e.secant_length();
    let required = cfg.min_length_factor * secant;
    let arc = o.arc_length();
    if o.points.len() < 2 || arc < required {
        return Err(Rejection::TooShort {
            arc_length: arc,
            required,
        });
    }
    let tolerance = (cfg.approach_fraction * secant).max(cfg.approach_min_px);
    let ends = [
        ("start", o.points[0], e.start),
        ("end", o.points[o.points.len() - 1], e.end),
    ];
    for (name, chain_end, user) in ends {
        let distance = chain_end.distance(user);
        if distance > tolerance {
            return Err(Rejection::DoesNotApproach {
                endpoint: name.to_string(),
                distance,
                tolerance,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outline::Point;

    fn endpoints() -> EndpointPair {
        EndpointPair {
            start: Point::new(0, 100),
            end: Point::new(200, 100),
        }
    }

    fn semicircle(end_shift: i32) -> ChainOutline {
        let mut pts: Vec<Point> = (0..=400)
            .map(|k| {
                let a = std::f64::consts::PI * (1.0 - k as f64 / 400.0);
                Point::new(
                    (100.0 + 100.0 * a.cos()).round() as i32,
                    (100.0 - 100.0 * a.sin()).round() as i32,
                )
            })
            .collect();
        pts.dedup();
        if let Some(last) = pts.last_mut() {
            last.x -= end_shift;
        }
        ChainOutline::manual(pts)
    }

    #[test]
    fn straight_chain_is_too_short() {
        let e = endpoints();
        let o = ChainOutline::manual(vec![e.start, e.end]);
        assert!(matches!(
            validate_outline(&o, &e, &ValidationConfig::default()),
            Err(Rejection::TooShort { .. })
        ));
    }

    #[test]
    fn semicircle_passes() {
        let o = semicircle(0);
        let ratio = o.arc_length() / 200.0;
        // pixel staircase plus diagonal steps: longer than the true pi/2
        assert!(ratio > 1.5 && ratio < 1.8, "{ratio}");
        assert_eq!(
            validate_outline(&o, &endpoints(), &ValidationConfig::default()),
            Ok(())
        );
    }

    #[test]
    fn far_end_does_not_approach() {
        let mut o = semicircle(0);
        o.points.push(Point::new(120, 100));
        let err = validate_outline(&o, &endpoints(), &ValidationConfig::default()).unwrap_err();
        match err {
            Rejection::DoesNotApproach {
                endpoint, distance, ..
            } => {
                assert_eq!(endpoint, "end");
                assert_eq!(distance, 80.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tolerance_floor_applies_to_short_secants() {
        let e = EndpointPair {
            start: Point::new(0, 10),
            end: Point::new(20, 10),
        };
        let mut pts: Vec<Point> = (0..=10).map(|y| Point::new(0, 10 - y)).collect();
        pts.extend((1..=20).map(|x| Point::new(x, 0)));
        pts.extend((1..=2).map(|y| Point::new(20, y)));
        // ends 8 px above the end point: inside the 10 px floor
        let o = ChainOutline::manual(pts);
        assert_eq!(
            validate_outline(&o, &e, &ValidationConfig::default()),
            Ok(())
        );
    }
}
