//! Intersection geometry: a two-lane-per-direction east-west carriageway
//! crossing a single-lane-per-direction north-south road, with polyline
//! routes for the ego maneuvers and through-routes for social traffic.
//!
//! Global frame: x east, y north, junction center at the origin.
//! Right-hand traffic, so eastbound lanes sit south of the centerline.

use serde::{Deserialize, Serialize};

use crate::env::EgoTask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arm {
    West,
    East,
    North,
    South,
}

impl Arm {
    pub const ALL: [Arm; 4] = [Arm::West, Arm::East, Arm::North, Arm::South];

    /// East-west traffic has priority over the narrower north-south road.
    pub fn is_major(self) -> bool {
        matches!(self, Arm::West | Arm::East)
    }

    pub fn index(self) -> usize {
        match self {
            Arm::West => 0,
            Arm::East => 1,
            Arm::North => 2,
            Arm::South => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RouteId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteKind {
    Ego(EgoTask),
    /// Through-route for social traffic spawned on `arm`, `lane` counted
    /// from the road centerline outwards.
    Social { arm: Arm, lane: usize },
}

/// Simple polyline with precomputed cumulative arc length.
#[derive(Debug, Clone)]
pub struct Route {
    pub id: RouteId,
    pub kind: RouteKind,
    pub points: Vec<[f64; 2]>,
    cum: Vec<f64>,
}

/// Result of projecting a point onto a route.
#[derive(Debug, Clone, Copy)]
pub struct Projection {
    /// Arc-length coordinate of the closest point.
    pub arc: f64,
    /// Unsigned lateral distance from the route.
    pub dist: f64,
}

impl Route {
    fn new(id: RouteId, kind: RouteKind, raw_points: Vec<[f64; 2]>) -> Self {
        assert!(raw_points.len() >= 2, "route needs at least two points");
        let mut points: Vec<[f64; 2]> = Vec::with_capacity(raw_points.len());
        for p in raw_points {
            if let Some(last) = points.last() {
                if dist(*last, p) < 1e-9 {
                    continue; // keep arc length strictly increasing
                }
            }
            points.push(p);
        }
        let mut cum = Vec::with_capacity(points.len());
        let mut s = 0.0;
        cum.push(0.0);
        for w in points.windows(2) {
            s += dist(w[0], w[1]);
            cum.push(s);
        }
        Route { id, kind, points, cum }
    }

    pub fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    /// Position and heading at an arc-length coordinate (clamped to the
    /// route extent).
    pub fn pose_at(&self, progress: f64) -> ([f64; 2], f64) {
        let s = progress.clamp(0.0, self.length());
        // index of the segment containing s
        let seg = match self.cum.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(i) => i.min(self.points.len() - 2),
            Err(i) => i - 1,
        };
        let a = self.points[seg.min(self.points.len() - 2)];
        let b = self.points[seg.min(self.points.len() - 2) + 1];
        let seg_len = dist(a, b);
        let t = if seg_len > 0.0 {
            (s - self.cum[seg.min(self.points.len() - 2)]) / seg_len
        } else {
            0.0
        };
        let pos = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
        let heading = (b[1] - a[1]).atan2(b[0] - a[0]);
        (pos, heading)
    }

    /// Closest point on the polyline to `p`.
    pub fn project(&self, p: [f64; 2]) -> Projection {
        let mut best = Projection {
            arc: 0.0,
            dist: f64::INFINITY,
        };
        for i in 0..self.points.len() - 1 {
            let a = self.points[i];
            let b = self.points[i + 1];
            let ab = [b[0] - a[0], b[1] - a[1]];
            let len2 = ab[0] * ab[0] + ab[1] * ab[1];
            let t = if len2 > 0.0 {
                (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let q = [a[0] + t * ab[0], a[1] + t * ab[1]];
            let d = dist(p, q);
            if d < best.dist {
                best = Projection {
                    arc: self.cum[i] + t * len2.sqrt(),
                    dist: d,
                };
            }
        }
        best
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Dimensions of the crossing. Defaults follow typical urban geometry.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MapParams {
    pub ew_lanes_per_direction: usize,
    pub ns_lanes_per_direction: usize,
    pub lane_width: f64,
    pub junction_half_extent: f64,
    /// Social routes run from `-arm_length` to `+arm_length` along their
    /// road.
    pub arm_length: f64,
    /// Ego spawn distance west of the junction center.
    pub ego_spawn_setback: f64,
    /// Ego routes end this far past the junction center.
    pub ego_exit_length: f64,
    pub left_turn_radius: f64,
    pub right_turn_radius: f64,
}

impl Default for MapParams {
    fn default() -> Self {
        MapParams {
            ew_lanes_per_direction: 2,
            ns_lanes_per_direction: 1,
            lane_width: 3.5,
            junction_half_extent: 15.0,
            arm_length: 80.0,
            ego_spawn_setback: 30.0,
            ego_exit_length: 30.0,
            left_turn_radius: 7.75,
            right_turn_radius: 6.0,
        }
    }
}

/// Built geometry: all routes plus indices of the ego maneuvers.
#[derive(Debug, Clone)]
pub struct MapSpec {
    pub params: MapParams,
    pub routes: Vec<Route>,
    ego_routes: [RouteId; 3],
}

impl MapSpec {
    pub fn build(params: MapParams) -> Self {
        let half = params.lane_width / 2.0;
        let ego_lane_y = -half; // inner eastbound lane
        let nb_x = half; // northbound lane center
        let sb_x = -half; // southbound lane center
        let mut routes = Vec::new();
        let mut push = |kind: RouteKind, pts: Vec<[f64; 2]>, routes: &mut Vec<Route>| -> RouteId {
            let id = RouteId(routes.len());
            routes.push(Route::new(id, kind, pts));
            id
        };

        // Ego: all three maneuvers share the spawn pose on the inner
        // eastbound lane, heading east.
        let spawn = [-params.ego_spawn_setback, ego_lane_y];

        let left = {
            let r = params.left_turn_radius;
            let entry_x = nb_x - r;
            let center = [entry_x, ego_lane_y + r];
            let mut pts = vec![spawn, [entry_x, ego_lane_y]];
            // counter-clockwise quarter arc from heading east to north
            append_arc(&mut pts, center, r, -90f64.to_radians(), 0.0);
            pts.push([nb_x, center[1]]);
            pts.push([nb_x, params.ego_exit_length]);
            push(RouteKind::Ego(EgoTask::Left), pts, &mut routes)
        };
        let straight = push(
            RouteKind::Ego(EgoTask::Straight),
            vec![spawn, [params.ego_exit_length, ego_lane_y]],
            &mut routes,
        );
        let right = {
            let r = params.right_turn_radius;
            let entry_x = sb_x - r;
            let center = [entry_x, ego_lane_y - r];
            let mut pts = vec![spawn, [entry_x, ego_lane_y]];
            // clockwise quarter arc from heading east to south
            append_arc(&mut pts, center, r, 90f64.to_radians(), 0.0);
            pts.push([sb_x, center[1]]);
            pts.push([sb_x, -params.ego_exit_length]);
            push(RouteKind::Ego(EgoTask::Right), pts, &mut routes)
        };

        // Social through-routes. Lane 0 is closest to the centerline.
        let l = params.arm_length;
        for lane in 0..params.ew_lanes_per_direction {
            let off = half + lane as f64 * params.lane_width;
            push(
                RouteKind::Social { arm: Arm::West, lane },
                vec![[-l, -off], [l, -off]],
                &mut routes,
            );
            push(
                RouteKind::Social { arm: Arm::East, lane },
                vec![[l, off], [-l, off]],
                &mut routes,
            );
        }
        for lane in 0..params.ns_lanes_per_direction {
            let off = half + lane as f64 * params.lane_width;
            push(
                RouteKind::Social { arm: Arm::North, lane },
                vec![[-off, l], [-off, -l]],
                &mut routes,
            );
            push(
                RouteKind::Social { arm: Arm::South, lane },
                vec![[off, -l], [off, l]],
                &mut routes,
            );
        }

        MapSpec {
            params,
            routes,
            ego_routes: [left, straight, right],
        }
    }

    pub fn route(&self, id: RouteId) -> &Route {
        &self.routes[id.0]
    }

    pub fn ego_route(&self, task: EgoTask) -> &Route {
        self.route(self.ego_routes[task.index()])
    }

    pub fn ego_route_id(&self, task: EgoTask) -> RouteId {
        self.ego_routes[task.index()]
    }

    pub fn social_routes_for_arm(&self, arm: Arm) -> Vec<RouteId> {
        self.routes
            .iter()
            .filter(|r| matches!(r.kind, RouteKind::Social { arm: a, .. } if a == arm))
            .map(|r| r.id)
            .collect()
    }

    pub fn is_major_route(&self, id: RouteId) -> bool {
        match self.route(id).kind {
            RouteKind::Social { arm, .. } => arm.is_major(),
            RouteKind::Ego(_) => true, // ego starts on the major road
        }
    }
}

fn append_arc(pts: &mut Vec<[f64; 2]>, center: [f64; 2], radius: f64, from: f64, to: f64) {
    let sweep = to - from;
    let n = ((radius * sweep.abs()) / 0.25).ceil().max(4.0) as usize;
    for k in 1..=n {
        let a = from + sweep * (k as f64 / n as f64);
        pts.push([center[0] + radius * a.cos(), center[1] + radius * a.sin()]);
    }
}
