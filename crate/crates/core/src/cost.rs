//! Cost models for scoring polylines.
//!
//! Three interchangeable strategies: rest-to-rest velocity-ramp time,
//! Euclidean distance, and waypoint count. The planner stops at every
//! waypoint (the platform hovers and turns on the spot), so the time model
//! applies the ramp to each segment independently.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::visibility::Polyline;

/// Rest-to-rest segment time under a trapezoidal velocity ramp with
/// instantaneous acceleration bounds:
///
/// `t = sqrt(4 d / a_max)` while the segment is too short to reach cruise
/// speed (`d < 2 d_a`), else `2 t_a + (d - 2 d_a) / v_max`, with
/// `t_a = v_max / a_max` and `d_a = v_max t_a / 2`.
pub fn segment_time(d: f64, v_max: f64, a_max: f64) -> Result<f64> {
    if !(d >= 0.0) || !d.is_finite() {
        return Err(Error::InvalidParameter("segment length must be nonnegative".into()));
    }
    if !(v_max > 0.0) || !(a_max > 0.0) {
        return Err(Error::InvalidParameter(
            "v_max and a_max must be strictly positive".into(),
        ));
    }
    let t_a = v_max / a_max;
    let d_a = 0.5 * v_max * t_a;
    Ok(if d < 2.0 * d_a {
        (4.0 * d / a_max).sqrt()
    } else {
        2.0 * t_a + (d - 2.0 * d_a) / v_max
    })
}

/// A strategy scoring polylines; selected by name via [`by_name`].
pub trait CostModel: Send + Sync {
    fn name(&self) -> &'static str;

    /// Cost of one rest-to-rest segment.
    fn segment_cost(&self, a: Point, b: Point) -> f64;

    /// Cost of a polyline; the default sums segment costs.
    fn polyline_cost(&self, p: &Polyline) -> f64 {
        p.waypoints
            .windows(2)
            .map(|w| self.segment_cost(w[0], w[1]))
            .sum()
    }
}

/// Velocity-ramp flight time.
#[derive(Clone, Copy, Debug)]
pub struct TimeCost {
    pub v_max: f64,
    pub a_max: f64,
}

impl TimeCost {
    pub fn new(v_max: f64, a_max: f64) -> Result<TimeCost> {
        if !(v_max > 0.0) || !v_max.is_finite() || !(a_max > 0.0) || !a_max.is_finite() {
            return Err(Error::InvalidParameter(
                "v_max and a_max must be strictly positive".into(),
            ));
        }
        Ok(TimeCost { v_max, a_max })
    }
}

impl CostModel for TimeCost {
    fn name(&self) -> &'static str {
        "time"
    }

    fn segment_cost(&self, a: Point, b: Point) -> f64 {
        segment_time(a.dist(b), self.v_max, self.a_max).expect("validated parameters")
    }
}

/// Euclidean path length.
#[derive(Clone, Copy, Debug, Default)]
pub struct DistanceCost;

impl CostModel for DistanceCost {
    fn name(&self) -> &'static str {
        "distance"
    }

    fn segment_cost(&self, a: Point, b: Point) -> f64 {
        a.dist(b)
    }
}

/// Waypoint count (vertices, not segments: the degenerate single-point
/// polyline still scores 1, and argmin over paths is unchanged).
#[derive(Clone, Copy, Debug, Default)]
pub struct WaypointCost;

impl CostModel for WaypointCost {
    fn name(&self) -> &'static str {
        "waypoints"
    }

    fn segment_cost(&self, _a: Point, _b: Point) -> f64 {
        1.0
    }

    fn polyline_cost(&self, p: &Polyline) -> f64 {
        p.waypoints.len() as f64
    }
}

/// Serializable cost-model selector carried by planner configs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CostSpec {
    Time { v_max: f64, a_max: f64 },
    Distance,
    Waypoints,
}

impl CostSpec {
    pub fn build(&self) -> Result<Box<dyn CostModel>> {
        match *self {
            CostSpec::Time { v_max, a_max } => Ok(Box::new(TimeCost::new(v_max, a_max)?)),
            CostSpec::Distance => Ok(Box::new(DistanceCost)),
            CostSpec::Waypoints => Ok(Box::new(WaypointCost)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CostSpec::Time { .. } => "time",
            CostSpec::Distance => "distance",
            CostSpec::Waypoints => "waypoints",
        }
    }
}

pub fn names() -> &'static str {
    "time, distance, waypoints"
}

/// Registry lookup: resolves a model name (the time model takes its
/// parameters from `v_max`/`a_max`).
pub fn by_name(name: &str, v_max: f64, a_max: f64) -> Result<CostSpec> {
    match name {
        "time" => Ok(CostSpec::Time { v_max, a_max }),
        "distance" => Ok(CostSpec::Distance),
        "waypoints" => Ok(CostSpec::Waypoints),
        other => Err(Error::UnknownStrategy {
            kind: "cost model",
            name: other.to_string(),
            available: names(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn ramp_time_closed_form() {
        assert_eq!(segment_time(0.0, 3.0, 0.5).unwrap(), 0.0);
        // Flight parameters v=3, a=0.5: the branch boundary sits at
        // d = 2 d_a = 18 m and both branches give 12 s there.
        assert!((segment_time(18.0, 3.0, 0.5).unwrap() - 12.0).abs() < 1e-12);
        assert!((segment_time(30.0, 3.0, 0.5).unwrap() - 16.0).abs() < 1e-12);
        assert!(segment_time(-1.0, 3.0, 0.5).is_err());
        assert!(segment_time(1.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn ramp_branches_are_continuous_and_monotone() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let v: f64 = rng.random_range(0.5..10.0);
            let a: f64 = rng.random_range(0.1..5.0);
            let boundary = v * v / a;
            let below = (4.0 * boundary / a).sqrt();
            let above = 2.0 * (v / a);
            assert!((below - above).abs() <= 1e-9, "discontinuity at 2*d_a");

            let mut prev = 0.0;
            for k in 1..100 {
                let d = boundary * 2.0 * k as f64 / 50.0;
                let t = segment_time(d, v, a).unwrap();
                assert!(t > prev, "segment_time not increasing");
                assert!(t >= d / v - 1e-12, "ramp beat cruise");
                prev = t;
            }
        }
    }

    #[test]
    fn polyline_costs_per_model() {
        let single = Polyline::single(p(1.0, 2.0));
        let square = Polyline::new(vec![
            p(0.0, 0.0),
            p(10.0, 0.0),
            p(10.0, 10.0),
            p(0.0, 10.0),
            p(0.0, 0.0),
        ]);
        let twice18 = Polyline::new(vec![p(0.0, 0.0), p(18.0, 0.0), p(36.0, 0.0)]);

        let time = TimeCost::new(3.0, 0.5).unwrap();
        assert_eq!(time.polyline_cost(&single), 0.0);
        assert!((time.polyline_cost(&twice18) - 24.0).abs() < 1e-9);

        assert_eq!(DistanceCost.polyline_cost(&single), 0.0);
        assert!((DistanceCost.polyline_cost(&square) - 40.0).abs() < 1e-12);

        assert_eq!(WaypointCost.polyline_cost(&single), 1.0);
        assert_eq!(WaypointCost.polyline_cost(&square), 5.0);
    }

    #[test]
    fn time_cost_is_additive_over_concatenation() {
        let time = TimeCost::new(2.0, 1.0).unwrap();
        let a = Polyline::new(vec![p(0.0, 0.0), p(3.0, 4.0), p(3.0, 10.0)]);
        let b = Polyline::new(vec![p(3.0, 10.0), p(8.0, 10.0)]);
        let mut joined = a.waypoints.clone();
        joined.extend_from_slice(&b.waypoints[1..]);
        let joined = Polyline::new(joined);
        let sum = time.polyline_cost(&a) + time.polyline_cost(&b);
        assert!((time.polyline_cost(&joined) - sum).abs() < 1e-12);
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(by_name("time", 3.0, 0.5).unwrap().name(), "time");
        assert_eq!(by_name("distance", 0.0, 0.0).unwrap(), CostSpec::Distance);
        assert_eq!(by_name("waypoints", 0.0, 0.0).unwrap(), CostSpec::Waypoints);
        assert!(by_name("fuel", 1.0, 1.0).is_err());
        assert!(CostSpec::Time { v_max: 0.0, a_max: 1.0 }.build().is_err());
    }
}
