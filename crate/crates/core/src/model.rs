//! Problem instances and schedules.
//!
//! An [`Instance`] is a station graph plus a fleet and a batch of trip
//! requests over a discrete horizon `t = 0..=horizon`; a [`Schedule`] is the
//! per-vehicle, per-timestep account of where everyone is, how high they fly,
//! and when they charge. Both are plain data: all feasibility logic lives in
//! the `validator` module.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{EdgeId, EndpointPolicy, Point2};

/// A takeoff/landing node with limited simultaneous occupancy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Station {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    /// How many vehicles can be parked (and charged) here at once.
    pub capacity: u32,
}

impl Station {
    pub fn pos(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

/// One aerial vehicle of the fleet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vehicle {
    pub id: usize,
    pub initial_station: usize,
    /// State of charge at t = 0, in percent.
    pub soc0: f64,
    /// Energy drawn per flying timestep, independent of altitude.
    pub con: f64,
    /// Extra energy drawn per flight level per flying timestep.
    pub hcon: f64,
    /// Energy restored per charging timestep.
    pub ch: f64,
}

/// A customer trip request. Executed means some vehicle flies origin to dest
/// exactly over `t_start..t_end`; requests that are not served at their
/// stated time are simply dropped, never rescheduled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Task {
    pub id: usize,
    pub origin: usize,
    pub dest: usize,
    pub t_start: usize,
    pub duration: usize,
}

impl Task {
    pub fn t_end(&self) -> usize {
        self.t_start + self.duration
    }

    /// Timesteps during which the serving vehicle is airborne.
    pub fn window(&self) -> Range<usize> {
        self.t_start..self.t_end()
    }

    /// The undirected corridor this trip occupies.
    pub fn edge(&self) -> Result<EdgeId> {
        EdgeId::new(self.origin, self.dest)
    }
}

/// Which per-timestep energy drain Eq-style accounting to use.
///
/// `Flight` charges `con + level * hcon` per flying timestep and nothing when
/// parked. `Literal` reproduces the printed SoC recurrence verbatim, which
/// charges `con` when *idle* and only `level * hcon` when flying; the two
/// disagree and both are kept so either can be audited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConsumptionMode {
    #[default]
    Flight,
    Literal,
}

/// A full scheduling problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    /// Timepoints are `0..=horizon`; tasks may start at t >= 1.
    pub horizon: usize,
    /// Highest usable flight level; level 0 means grounded.
    pub max_level: u32,
    pub endpoint_policy: EndpointPolicy,
    pub consumption_mode: ConsumptionMode,
    pub stations: Vec<Station>,
    pub vehicles: Vec<Vehicle>,
    pub tasks: Vec<Task>,
}

impl Instance {
    /// Number of discrete timepoints (`horizon + 1`).
    pub fn n_timepoints(&self) -> usize {
        self.horizon + 1
    }

    pub fn station_points(&self) -> Vec<Point2> {
        self.stations.iter().map(Station::pos).collect()
    }
}

/// A broken instance invariant: which entity, which rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceViolation {
    pub entity: String,
    pub rule: String,
}

impl fmt::Display for InstanceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.entity, self.rule)
    }
}

fn violation(entity: impl Into<String>, rule: impl Into<String>) -> InstanceViolation {
    InstanceViolation { entity: entity.into(), rule: rule.into() }
}

/// Checks every instance invariant, returning one entry per broken rule.
/// An empty list means the instance is well-formed.
pub fn validate_instance(instance: &Instance) -> Vec<InstanceViolation> {
    let mut out = Vec::new();
    let n = instance.stations.len();

    if instance.max_level == 0 {
        out.push(violation("instance", "max_level must be at least 1"));
    }
    if n < 2 {
        out.push(violation("instance", "needs at least 2 stations"));
    }

    for (i, s) in instance.stations.iter().enumerate() {
        let ent = format!("station {}", s.id);
        if s.id != i {
            out.push(violation(&ent, format!("id must equal its position {i}")));
        }
        if s.capacity < 1 {
            out.push(violation(&ent, "capacity must be at least 1"));
        }
        if !s.pos().is_finite() {
            out.push(violation(&ent, "coordinates must be finite"));
        }
    }
    for (i, s) in instance.stations.iter().enumerate() {
        for other in &instance.stations[i + 1..] {
            if s.x == other.x && s.y == other.y {
                out.push(violation(
                    format!("station {}", other.id),
                    format!("coordinates duplicate station {}", s.id),
                ));
            }
        }
    }

    let mut occupancy = vec![0u64; n];
    for (i, v) in instance.vehicles.iter().enumerate() {
        let ent = format!("vehicle {}", v.id);
        if v.id != i {
            out.push(violation(&ent, format!("id must equal its position {i}")));
        }
        if v.initial_station >= n {
            out.push(violation(&ent, format!("initial station {} does not exist", v.initial_station)));
        } else {
            occupancy[v.initial_station] += 1;
        }
        if !(0.0..=100.0).contains(&v.soc0) {
            out.push(violation(&ent, format!("soc0 {} outside [0, 100]", v.soc0)));
        }
        if !(v.con > 0.0 && v.con.is_finite()) {
            out.push(violation(&ent, "con must be positive"));
        }
        if !(v.hcon >= 0.0 && v.hcon.is_finite()) {
            out.push(violation(&ent, "hcon must be non-negative"));
        }
        if !(v.ch > 0.0 && v.ch.is_finite()) {
            out.push(violation(&ent, "ch must be positive"));
        }
    }
    for (s, &used) in instance.stations.iter().zip(&occupancy) {
        if used > u64::from(s.capacity) {
            out.push(violation(
                format!("station {}", s.id),
                format!("{used} vehicles initially placed but capacity is {}", s.capacity),
            ));
        }
    }

    for (i, t) in instance.tasks.iter().enumerate() {
        let ent = format!("task {}", t.id);
        if t.id != i {
            out.push(violation(&ent, format!("id must equal its position {i}")));
        }
        if t.origin >= n {
            out.push(violation(&ent, format!("origin station {} does not exist", t.origin)));
        }
        if t.dest >= n {
            out.push(violation(&ent, format!("destination station {} does not exist", t.dest)));
        }
        if t.origin == t.dest {
            out.push(violation(&ent, "origin equals destination (self-loop task)"));
        }
        if t.duration < 1 {
            out.push(violation(&ent, "duration must be at least 1"));
        }
        if t.t_start < 1 {
            out.push(violation(&ent, "t_start must be at least 1"));
        }
        if t.t_end() > instance.horizon {
            out.push(violation(
                &ent,
                format!("t_end {} exceeds horizon {}", t.t_end(), instance.horizon),
            ));
        }
    }

    out
}

/// Where a vehicle is during one timestep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VehicleState {
    AtStation(usize),
    /// Airborne, executing the given task.
    Flying(usize),
}

/// One vehicle-timestep of a schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepState {
    pub state: VehicleState,
    pub level: u32,
    pub charging: bool,
}

impl StepState {
    pub fn parked(station: usize) -> Self {
        StepState { state: VehicleState::AtStation(station), level: 0, charging: false }
    }
}

/// A complete assignment outcome: per-vehicle timelines over `0..=horizon`
/// plus the set of executed task ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub timelines: Vec<Vec<StepState>>,
    pub executed: BTreeSet<usize>,
}

impl Schedule {
    /// The all-idle schedule: every vehicle parked at its initial station for
    /// the whole horizon, nothing executed.
    pub fn all_idle(instance: &Instance) -> Self {
        let timelines = instance
            .vehicles
            .iter()
            .map(|v| vec![StepState::parked(v.initial_station); instance.n_timepoints()])
            .collect();
        Schedule { timelines, executed: BTreeSet::new() }
    }

    /// Checks the structural shape: one timeline per vehicle, each covering
    /// every timepoint. Semantic feasibility is the validator's job.
    pub fn check_shape(&self, instance: &Instance) -> Result<()> {
        if self.timelines.len() != instance.vehicles.len() {
            return Err(Error::Schema(format!(
                "schedule has {} timelines but the instance has {} vehicles",
                self.timelines.len(),
                instance.vehicles.len()
            )));
        }
        for (a, tl) in self.timelines.iter().enumerate() {
            if tl.len() != instance.n_timepoints() {
                return Err(Error::Schema(format!(
                    "vehicle {a} timeline has {} entries, expected {}",
                    tl.len(),
                    instance.n_timepoints()
                )));
            }
        }
        Ok(())
    }
}

/// Summary numbers for one solved schedule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    pub executed_count: usize,
    pub energy_units: f64,
    /// Vehicle-timesteps spent at each level `0..=max_level`.
    pub level_histogram: Vec<u64>,
    /// Wall-clock seconds spent producing the schedule.
    pub wall_clock: f64,
}
