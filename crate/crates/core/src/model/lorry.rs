use crate::kernel::{RngStream, StreamId};

use super::config::ModelConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Soft,
    Hard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    France,
    Sheds,
    Berth,
}

impl Stage {
    pub fn label(self) -> &'static str {
        match self {
            Stage::France => "france",
            Stage::Sheds => "uk_shed",
            Stage::Berth => "berth",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Disposition {
    InSystem,
    Found(Stage),
    BoardedUnsearched,
    BoardedSearchedClean,
    /// Boarded while carrying clandestines.
    Missed,
}

/// Entry and exit times per stage; `NAN` until the stage is reached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageTimes {
    pub france_enter: f64,
    pub france_exit: f64,
    pub shed_enter: f64,
    pub shed_exit: f64,
    pub berth_enter: f64,
    pub departed: f64,
}

impl Default for StageTimes {
    fn default() -> Self {
        Self {
            france_enter: f64::NAN,
            france_exit: f64::NAN,
            shed_enter: f64::NAN,
            shed_exit: f64::NAN,
            berth_enter: f64::NAN,
            departed: f64::NAN,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lorry {
    pub id: u64,
    pub side: Side,
    marked: bool,
    pub arrival: f64,
    pub times: StageTimes,
    /// Minutes spent queueing on the French side.
    pub french_wait: f64,
    /// Minutes spent queueing for a UK shed.
    pub shed_wait: f64,
    /// Completed a UK shed or berth search.
    pub searched: bool,
    pub disposition: Disposition,
}

impl Lorry {
    pub fn new(id: u64, side: Side, marked: bool, arrival: f64) -> Self {
        Self {
            id,
            side,
            marked,
            arrival,
            times: StageTimes::default(),
            french_wait: 0.0,
            shed_wait: 0.0,
            searched: false,
            disposition: Disposition::InSystem,
        }
    }

    /// Whether the lorry carries clandestines. Fixed at admission; stations
    /// only learn it through sensor outcomes.
    pub fn is_marked(&self) -> bool {
        self.marked
    }

    pub fn time_in_system(&self) -> Option<f64> {
        let d = self.times.departed;
        (!d.is_nan()).then_some(d - self.arrival)
    }
}

/// One stream per stochastic source. Each admission consumes exactly one
/// value from every stream, so a lorry's draws depend only on its index and
/// stay paired across scenarios.
#[derive(Debug, Clone)]
pub struct LorryStreams {
    sidedness: RngStream,
    marking: RngStream,
    draws: [RngStream; DRAWS],
}

pub const ARRIVAL_STREAM: StreamId = StreamId(0);
const SIDEDNESS_STREAM: StreamId = StreamId(1);
const MARKING_STREAM: StreamId = StreamId(2);
const FIRST_DRAW_STREAM: u64 = 3;
const DRAWS: usize = 11;

/// Uniforms a lorry carries through the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Draws {
    pub french_verdict: f64,
    pub french_cycle: f64,
    pub co2_verdict: f64,
    pub co2_cycle: f64,
    pub france_found: f64,
    pub shed_select: f64,
    pub shed_verdict: f64,
    pub shed_cycle: f64,
    pub berth_select: f64,
    pub berth_verdict: f64,
    pub berth_cycle: f64,
}

impl LorryStreams {
    pub fn new(seed: u64) -> Self {
        Self {
            sidedness: RngStream::new(seed, SIDEDNESS_STREAM),
            marking: RngStream::new(seed, MARKING_STREAM),
            draws: std::array::from_fn(|i| RngStream::new(seed, StreamId(FIRST_DRAW_STREAM + i as u64))),
        }
    }

    fn next_draws(&mut self) -> Draws {
        let mut u = [0.0; DRAWS];
        for (slot, stream) in u.iter_mut().zip(self.draws.iter_mut()) {
            *slot = stream.uniform();
        }
        Draws {
            french_verdict: u[0],
            french_cycle: u[1],
            co2_verdict: u[2],
            co2_cycle: u[3],
            france_found: u[4],
            shed_select: u[5],
            shed_verdict: u[6],
            shed_cycle: u[7],
            berth_select: u[8],
            berth_verdict: u[9],
            berth_cycle: u[10],
        }
    }
}

/// Creates lorry `id` arriving at `now`: sidedness from its own stream and,
/// in object-oriented mode, the positive mark from the marking stream.
pub fn admit_lorry(id: u64, now: f64, config: &ModelConfig, streams: &mut LorryStreams) -> (Lorry, Draws) {
    let side = if streams.sidedness.uniform() < config.arrivals.soft_sided_fraction {
        Side::Soft
    } else {
        Side::Hard
    };
    let mark_u = streams.marking.uniform();
    let marked = config.mode == super::Mode::Oo && mark_u < config.arrivals.positive_fraction;
    let draws = streams.next_draws();
    (Lorry::new(id, side, marked, now), draws)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Mode;

    fn admit_many(config: &ModelConfig, n: u64, seed: u64) -> (u64, u64) {
        let mut streams = LorryStreams::new(seed);
        let mut soft = 0;
        let mut marked = 0;
        for id in 0..n {
            let (l, _) = admit_lorry(id, 0.0, config, &mut streams);
            soft += (l.side == Side::Soft) as u64;
            marked += l.is_marked() as u64;
        }
        (soft, marked)
    }

    #[test]
    fn zero_positive_fraction_marks_nobody() {
        let mut c = ModelConfig::default();
        c.arrivals.positive_fraction = 0.0;
        assert_eq!(admit_many(&c, 100_000, 1).1, 0);
    }

    #[test]
    fn marked_count_is_binomial() {
        let mut c = ModelConfig::default();
        c.arrivals.positive_fraction = 0.0055;
        let (_, marked) = admit_many(&c, 900_000, 2);
        let mean = 900_000.0 * 0.0055;
        let sd: f64 = (mean * (1.0 - 0.0055_f64)).sqrt();
        assert!((marked as f64 - mean).abs() < 3.0 * sd, "{marked}");
    }

    #[test]
    fn soft_share() {
        let c = ModelConfig::default();
        let (soft, _) = admit_many(&c, 1_000_000, 3);
        assert!((soft as f64 / 1e6 - 0.44).abs() < 0.002);
    }

    #[test]
    fn process_mode_marks_nobody() {
        let c = ModelConfig {
            mode: Mode::Po,
            ..Default::default()
        };
        assert_eq!(admit_many(&c, 100_000, 4).1, 0);
    }

    #[test]
    fn marking_does_not_disturb_sidedness() {
        let mut a = ModelConfig::default();
        a.arrivals.positive_fraction = 0.0;
        let mut b = ModelConfig::default();
        b.arrivals.positive_fraction = 0.5;
        let mut sa = LorryStreams::new(9);
        let mut sb = LorryStreams::new(9);
        for id in 0..1000 {
            let (la, da) = admit_lorry(id, 0.0, &a, &mut sa);
            let (lb, db) = admit_lorry(id, 0.0, &b, &mut sb);
            assert_eq!(la.side, lb.side);
            assert_eq!(da, db);
        }
    }
}
