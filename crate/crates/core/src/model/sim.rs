use std::collections::VecDeque;

use crate::kernel::{ArrivalProfile, EventCalendar, Replicate, RngStream, SampleStats, ServerPool};

use super::config::{Mode, ModelConfig};
use super::kpi::KpiReport;
use super::lorry::{admit_lorry, Disposition, Draws, Lorry, LorryStreams, Side, Stage, ARRIVAL_STREAM};
use super::sensor::{Outcome, Pace};
use super::trace::TraceRecord;
use super::ModelError;

#[derive(Debug, Clone, Copy)]
enum Event {
    Arrival,
    FrenchDone(usize),
    Co2Done(usize),
    ShedDone(usize),
    BerthDone { slot: usize, search: u64 },
    Ferry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Berth {
    Away,
    Parked,
    Queued,
    Searching(u64),
    Cleared,
}

#[derive(Debug)]
struct Slot {
    lorry: Lorry,
    draws: Draws,
    berth: Berth,
    berth_queued_at: f64,
    pace: Pace,
    boarding: bool,
}

/// A validated configuration with its arrival profile built once.
#[derive(Debug, Clone)]
pub struct ScreeningModel {
    config: ModelConfig,
    profile: ArrivalProfile,
}

impl ScreeningModel {
    pub fn new(config: ModelConfig) -> Result<Self, ModelError> {
        config.validate()?;
        let profile = config.arrivals.build_profile()?;
        Ok(Self { config, profile })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn profile(&self) -> &ArrivalProfile {
        &self.profile
    }

    /// One replication driven entirely by `seed`.
    pub fn run(&self, seed: u64) -> KpiReport {
        Engine::new(&self.config, &self.profile, seed).run()
    }
}

impl Replicate for ScreeningModel {
    type Report = KpiReport;

    fn validate(&self) -> Result<(), String> {
        self.config.validate().map_err(|e| e.to_string())
    }

    fn replicate(&self, _index: u64, seed: u64) -> KpiReport {
        self.run(seed)
    }
}

/// Validates `config` and runs a single replication.
pub fn simulate(config: &ModelConfig, seed: u64) -> Result<KpiReport, ModelError> {
    Ok(ScreeningModel::new(config.clone())?.run(seed))
}

struct Engine<'a> {
    cfg: &'a ModelConfig,
    profile: &'a ArrivalProfile,
    horizon: f64,
    cal: EventCalendar<Event>,
    slots: Vec<Option<Slot>>,
    free: Vec<usize>,
    next_id: u64,
    arrivals: RngStream,
    streams: LorryStreams,

    french_soft: ServerPool<usize>,
    french_hard: ServerPool<usize>,
    co2: ServerPool<usize>,
    shed: ServerPool<usize>,
    berth: ServerPool<usize>,
    parked: VecDeque<usize>,
    searching: Vec<(usize, u64)>,
    next_search: u64,

    wait_france: SampleStats,
    wait_sheds: SampleStats,
    wait_overall: SampleStats,
    time_in_system: SampleStats,
    late: u64,
    boarded_measured: u64,
    missed: u64,
    report: KpiReport,
}

impl<'a> Engine<'a> {
    fn new(cfg: &'a ModelConfig, profile: &'a ArrivalProfile, seed: u64) -> Self {
        let st = &cfg.stations;
        Self {
            cfg,
            profile,
            horizon: cfg.horizon_minutes(),
            cal: EventCalendar::new(),
            slots: Vec::new(),
            free: Vec::new(),
            next_id: 0,
            arrivals: RngStream::new(seed, ARRIVAL_STREAM),
            streams: LorryStreams::new(seed),
            french_soft: ServerPool::new(st.french_soft.servers, 0.0),
            french_hard: ServerPool::new(st.french_hard.servers, 0.0),
            co2: ServerPool::new(st.co2_retest.servers, 0.0),
            shed: ServerPool::new(st.uk_shed.servers, 0.0),
            berth: ServerPool::new(st.berth.servers, 0.0),
            parked: VecDeque::new(),
            searching: Vec::new(),
            next_search: 0,
            wait_france: SampleStats::default(),
            wait_sheds: SampleStats::default(),
            wait_overall: SampleStats::default(),
            time_in_system: SampleStats::default(),
            late: 0,
            boarded_measured: 0,
            missed: 0,
            report: KpiReport {
                mode: cfg.mode,
                horizon_minutes: cfg.horizon_minutes(),
                ..Default::default()
            },
        }
    }

    fn schedule(&mut self, time: f64, event: Event) {
        self.cal
            .schedule(time, event)
            .expect("event times never precede the clock");
    }

    fn slot(&mut self, s: usize) -> &mut Slot {
        self.slots[s].as_mut().expect("live lorry slot")
    }

    fn trace(&mut self, now: f64, s: usize, event: &'static str, station: &'static str) {
        if self.cfg.trace {
            let lorry = self.slots[s].as_ref().map(|x| x.lorry.id).unwrap_or(u64::MAX);
            self.report.trace.push(TraceRecord {
                time: now,
                lorry,
                event,
                station,
            });
        }
    }

    fn measured(&self, s: usize) -> bool {
        self.slots[s].as_ref().is_some_and(|x| x.lorry.arrival >= self.cfg.warmup_minutes)
    }

    fn run(mut self) -> KpiReport {
        if let Some(t) = self.profile.next_arrival(0.0, &mut self.arrivals) {
            if t < self.horizon {
                self.schedule(t, Event::Arrival);
            }
        }
        if self.cfg.ferry.headway <= self.horizon {
            self.schedule(self.cfg.ferry.headway, Event::Ferry);
        }
        while let Some((now, event)) = self.cal.pop_until(self.horizon) {
            match event {
                Event::Arrival => self.on_arrival(now),
                Event::FrenchDone(s) => self.on_french_done(now, s),
                Event::Co2Done(s) => self.on_co2_done(now, s),
                Event::ShedDone(s) => self.on_shed_done(now, s),
                Event::BerthDone { slot, search } => self.on_berth_done(now, slot, search),
                Event::Ferry => self.on_ferry(now),
            }
        }
        self.finish()
    }

    fn on_arrival(&mut self, now: f64) {
        let (mut lorry, draws) = admit_lorry(self.next_id, now, self.cfg, &mut self.streams);
        self.next_id += 1;
        self.report.admitted += 1;
        self.report.marked += lorry.is_marked() as u64;
        lorry.times.france_enter = now;
        let side = lorry.side;
        let slot = Slot {
            lorry,
            draws,
            berth: Berth::Away,
            berth_queued_at: f64::NAN,
            pace: Pace::NORMAL,
            boarding: false,
        };
        let s = match self.free.pop() {
            Some(s) => {
                self.slots[s] = Some(slot);
                s
            }
            None => {
                self.slots.push(Some(slot));
                self.slots.len() - 1
            }
        };
        self.trace(now, s, "arrive", "france");
        let pool = match side {
            Side::Soft => &mut self.french_soft,
            Side::Hard => &mut self.french_hard,
        };
        if let Some(s) = pool.arrive(now, s) {
            self.start_french(now, s, 0.0);
        }
        if let Some(t) = self.profile.next_arrival(now, &mut self.arrivals) {
            if t < self.horizon {
                self.schedule(t, Event::Arrival);
            }
        }
    }

    fn start_french(&mut self, now: f64, s: usize, wait: f64) {
        let sensors = &self.cfg.sensors;
        let slot = self.slot(s);
        slot.lorry.french_wait += wait;
        let sensor = match slot.lorry.side {
            Side::Soft => sensors.pmmw,
            Side::Hard => sensors.heartbeat,
        };
        let cycle = sensor.cycle_time(slot.draws.french_cycle, Pace::NORMAL);
        self.trace(now, s, "start", "french_screen");
        self.schedule(now + cycle, Event::FrenchDone(s));
    }

    fn on_french_done(&mut self, now: f64, s: usize) {
        let side = self.slot(s).lorry.side;
        let pool = match side {
            Side::Soft => &mut self.french_soft,
            Side::Hard => &mut self.french_hard,
        };
        if let Some((next, wait)) = pool.finish(now) {
            self.start_french(now, next, wait);
        }
        self.trace(now, s, "finish", "french_screen");
        let cfg = self.cfg;
        let slot = self.slot(s);
        let (marked, u, found_u) = (slot.lorry.is_marked(), slot.draws.french_verdict, slot.draws.france_found);
        match side {
            Side::Soft => {
                self.report.soft_screened += 1;
                let suspicious = match cfg.mode {
                    Mode::Oo => cfg.sensors.pmmw.inspect(marked, u, 0.0, Pace::NORMAL).0.is_alarm(),
                    Mode::Po => u < cfg.routing.french_suspicious_soft,
                };
                if suspicious {
                    self.report.soft_suspicious += 1;
                    if let Some(s) = self.co2.arrive(now, s) {
                        self.start_co2(now, s, 0.0);
                    }
                } else {
                    self.leave_france(now, s);
                }
            }
            Side::Hard => {
                self.report.hard_screened += 1;
                let found = match cfg.mode {
                    Mode::Oo => {
                        let outcome = cfg.sensors.heartbeat.inspect(marked, u, 0.0, Pace::NORMAL).0;
                        self.opened(outcome.is_alarm());
                        match outcome {
                            Outcome::TruePositive => Some(true),
                            Outcome::FalsePositive => Some(false),
                            Outcome::Negative => None,
                        }
                    }
                    Mode::Po => {
                        let alarm = u < cfg.routing.french_suspicious_hard;
                        self.opened(alarm);
                        alarm.then_some(found_u < cfg.routing.found_france)
                    }
                };
                self.report.hard_suspicious += found.is_some() as u64;
                self.after_opening(now, s, found);
            }
        }
    }

    fn opened(&mut self, alarm: bool) {
        self.report.french_opened += alarm as u64;
    }

    /// `Some(true)` found, `Some(false)` opened but clean, `None` not opened.
    fn after_opening(&mut self, now: f64, s: usize, found: Option<bool>) {
        match found {
            Some(true) => {
                self.record_french_wait(s);
                self.found(now, s, Stage::France);
            }
            Some(false) => {
                self.report.false_alarms += 1;
                self.leave_france(now, s);
            }
            None => self.leave_france(now, s),
        }
    }

    fn start_co2(&mut self, now: f64, s: usize, wait: f64) {
        let sensor = self.cfg.sensors.co2_probe;
        let slot = self.slot(s);
        slot.lorry.french_wait += wait;
        let cycle = sensor.cycle_time(slot.draws.co2_cycle, Pace::NORMAL);
        self.trace(now, s, "start", "co2_retest");
        self.schedule(now + cycle, Event::Co2Done(s));
    }

    fn on_co2_done(&mut self, now: f64, s: usize) {
        if let Some((next, wait)) = self.co2.finish(now) {
            self.start_co2(now, next, wait);
        }
        self.trace(now, s, "finish", "co2_retest");
        self.report.co2_tests += 1;
        let cfg = self.cfg;
        let slot = self.slot(s);
        let (marked, u, found_u) = (slot.lorry.is_marked(), slot.draws.co2_verdict, slot.draws.france_found);
        let found = match cfg.mode {
            Mode::Oo => match cfg.sensors.co2_probe.inspect(marked, u, 0.0, Pace::NORMAL).0 {
                Outcome::TruePositive => Some(true),
                Outcome::FalsePositive => Some(false),
                Outcome::Negative => None,
            },
            Mode::Po => (u < cfg.routing.co2_positive).then_some(found_u < cfg.routing.found_france),
        };
        self.report.co2_positive += found.is_some() as u64;
        self.opened(found.is_some());
        self.after_opening(now, s, found);
    }

    fn record_french_wait(&mut self, s: usize) {
        let w = self.slot(s).lorry.french_wait;
        if self.measured(s) {
            self.wait_france.push(w);
        }
    }

    fn leave_france(&mut self, now: f64, s: usize) {
        self.record_french_wait(s);
        self.slot(s).lorry.times.france_exit = now;
        self.shed_decision(now, s);
    }

    fn shed_decision(&mut self, now: f64, s: usize) {
        let fraction = self.cfg.shed_search_fraction_at(now);
        if self.slot(s).draws.shed_select >= fraction {
            self.enter_berth(now, s);
            return;
        }
        if let Some(k) = self.cfg.interventions.queue_bypass {
            if self.shed.queue_len() >= k {
                self.report.shed_bypassed += 1;
                self.trace(now, s, "bypass", "uk_shed");
                self.enter_berth(now, s);
                return;
            }
        }
        self.slot(s).lorry.times.shed_enter = now;
        self.trace(now, s, "arrive", "uk_shed");
        if let Some(s) = self.shed.arrive(now, s) {
            self.start_shed(now, s, 0.0);
        }
    }

    fn start_shed(&mut self, now: f64, s: usize, wait: f64) {
        let pace = match self.cfg.interventions.speed_up {
            Some(up) if self.shed.queue_len() >= up.queue_threshold => {
                self.report.shed_sped_up += 1;
                Pace {
                    cycle: up.cycle_multiplier,
                    detection: up.detection_multiplier,
                }
            }
            _ => Pace::NORMAL,
        };
        if self.measured(s) {
            self.wait_sheds.push(wait);
        }
        let sensor = self.cfg.sensors.shed_mixed;
        let slot = self.slot(s);
        slot.lorry.shed_wait = wait;
        slot.pace = pace;
        let cycle = sensor.cycle_time(slot.draws.shed_cycle, pace);
        self.trace(now, s, "start", "uk_shed");
        self.schedule(now + cycle, Event::ShedDone(s));
    }

    fn on_shed_done(&mut self, now: f64, s: usize) {
        if let Some((next, wait)) = self.shed.finish(now) {
            self.start_shed(now, next, wait);
        }
        self.trace(now, s, "finish", "uk_shed");
        self.report.shed_searches += 1;
        let cfg = self.cfg;
        let slot = self.slot(s);
        slot.lorry.searched = true;
        slot.lorry.times.shed_exit = now;
        let (marked, u, pace) = (slot.lorry.is_marked(), slot.draws.shed_verdict, slot.pace);
        let outcome = match cfg.mode {
            Mode::Oo => cfg.sensors.shed_mixed.inspect(marked, u, 0.0, pace).0,
            Mode::Po if u < cfg.routing.found_shed * pace.detection => Outcome::TruePositive,
            Mode::Po => Outcome::Negative,
        };
        match outcome {
            Outcome::TruePositive => self.found(now, s, Stage::Sheds),
            Outcome::FalsePositive => {
                self.report.false_alarms += 1;
                self.enter_berth(now, s);
            }
            Outcome::Negative => self.enter_berth(now, s),
        }
    }

    fn enter_berth(&mut self, now: f64, s: usize) {
        self.parked.push_back(s);
        let fraction = self.cfg.stations.berth.search_fraction;
        let slot = self.slot(s);
        slot.lorry.times.berth_enter = now;
        if slot.draws.berth_select < fraction {
            slot.berth = Berth::Queued;
            slot.berth_queued_at = now;
            self.trace(now, s, "arrive", "berth");
            if let Some(s) = self.berth.arrive(now, s) {
                self.start_berth_search(now, s);
            }
        } else {
            slot.berth = Berth::Parked;
            self.trace(now, s, "park", "berth");
        }
    }

    fn start_berth_search(&mut self, now: f64, s: usize) {
        let search = self.next_search;
        self.next_search += 1;
        self.searching.push((s, search));
        let sensor = self.cfg.sensors.berth_mixed;
        let slot = self.slot(s);
        slot.berth = Berth::Searching(search);
        let cycle = sensor.cycle_time(slot.draws.berth_cycle, Pace::NORMAL);
        self.trace(now, s, "start", "berth");
        self.schedule(now + cycle, Event::BerthDone { slot: s, search });
    }

    fn on_berth_done(&mut self, now: f64, s: usize, search: u64) {
        let current = self.slots[s].as_ref().map(|x| x.berth);
        if current != Some(Berth::Searching(search)) {
            return;
        }
        self.searching.retain(|&(_, id)| id != search);
        if let Some((next, _)) = self.berth.finish(now) {
            self.start_berth_search(now, next);
        }
        self.trace(now, s, "finish", "berth");
        self.report.berth_searches += 1;
        let cfg = self.cfg;
        let slot = self.slot(s);
        slot.lorry.searched = true;
        let (marked, u) = (slot.lorry.is_marked(), slot.draws.berth_verdict);
        let outcome = match cfg.mode {
            Mode::Oo => cfg.sensors.berth_mixed.inspect(marked, u, 0.0, Pace::NORMAL).0,
            Mode::Po if u < cfg.routing.found_berth => Outcome::TruePositive,
            Mode::Po => Outcome::Negative,
        };
        match outcome {
            Outcome::TruePositive => {
                self.parked.retain(|&p| p != s);
                self.found(now, s, Stage::Berth);
            }
            other => {
                if other == Outcome::FalsePositive {
                    self.report.false_alarms += 1;
                }
                self.slot(s).berth = Berth::Cleared;
            }
        }
    }

    fn on_ferry(&mut self, now: f64) {
        self.report.sailings += 1;
        let interrupt = self.cfg.ferry.interrupt;
        let capacity = self.cfg.ferry.capacity;
        let mut boarders = Vec::new();
        let mut remaining = VecDeque::with_capacity(self.parked.len());
        for s in std::mem::take(&mut self.parked) {
            let slot = self.slots[s].as_mut().expect("parked lorry");
            let eligible = interrupt || matches!(slot.berth, Berth::Parked | Berth::Cleared);
            if eligible && boarders.len() < capacity {
                slot.boarding = true;
                boarders.push(s);
            } else {
                if eligible {
                    self.report.left_behind += 1;
                }
                remaining.push_back(s);
            }
        }
        self.parked = remaining;

        if interrupt {
            let aborted = std::mem::take(&mut self.searching);
            let mut requeue = Vec::new();
            for (s, _) in aborted {
                self.berth.release(now);
                self.report.berth_searches_aborted += 1;
                self.trace(now, s, "abort", "berth");
                let slot = self.slot(s);
                if !slot.boarding {
                    slot.berth = Berth::Queued;
                    requeue.push((s, slot.berth_queued_at));
                }
            }
            requeue.sort_by(|a, b| a.1.total_cmp(&b.1));
            for &(s, at) in requeue.iter().rev() {
                self.berth.push_front(now, s, at);
            }
            let slots = &self.slots;
            self.berth
                .remove_waiting(now, |&s| slots[s].as_ref().is_some_and(|x| x.boarding));
        }

        for s in boarders {
            self.board(now, s);
        }

        if interrupt {
            while let Some((next, _)) = self.berth.start_waiting(now) {
                self.start_berth_search(now, next);
            }
        }

        let next = now + self.cfg.ferry.headway;
        if next <= self.horizon {
            self.schedule(next, Event::Ferry);
        }
    }

    fn depart(&mut self, now: f64, s: usize, disposition: Disposition) -> Lorry {
        self.trace(now, s, "depart", "ferry");
        let mut slot = self.slots[s].take().expect("departing lorry");
        self.free.push(s);
        slot.lorry.times.departed = now;
        slot.lorry.disposition = disposition;
        self.report.processed += 1;
        if slot.lorry.arrival >= self.cfg.warmup_minutes {
            self.wait_overall.push(slot.lorry.french_wait + slot.lorry.shed_wait);
            self.time_in_system.push(now - slot.lorry.arrival);
        }
        slot.lorry
    }

    fn board(&mut self, now: f64, s: usize) {
        let slot = self.slot(s);
        let disposition = if slot.lorry.is_marked() {
            Disposition::Missed
        } else if slot.lorry.searched {
            Disposition::BoardedSearchedClean
        } else {
            Disposition::BoardedUnsearched
        };
        let lorry = self.depart(now, s, disposition);
        self.report.boarded += 1;
        self.missed += (disposition == Disposition::Missed) as u64;
        let tis = now - lorry.arrival;
        if lorry.arrival >= self.cfg.warmup_minutes {
            self.boarded_measured += 1;
            if self.cfg.service_threshold.is_some_and(|t| tis > t) {
                self.late += 1;
            }
            if self.cfg.record_times {
                self.report.boarded_times.push(tis);
            }
        }
    }

    fn found(&mut self, now: f64, s: usize, stage: Stage) {
        self.trace(now, s, "found", stage.label());
        let lorry = self.depart(now, s, Disposition::Found(stage));
        if self.cfg.mode == Mode::Oo && !lorry.is_marked() {
            self.report.found_unmarked += 1;
        }
        self.report.found_total += 1;
        match stage {
            Stage::France => self.report.plf_france += 1,
            Stage::Sheds => self.report.plf_sheds += 1,
            Stage::Berth => self.report.plf_berth += 1,
        }
    }

    fn finish(mut self) -> KpiReport {
        let h = self.horizon;
        let r = &mut self.report;
        r.wait_france = self.wait_france.mean();
        r.wait_sheds = self.wait_sheds.mean();
        r.wait_overall = self.wait_overall.mean();
        r.time_in_system = self.time_in_system.mean();
        r.service_problem = if self.boarded_measured == 0 {
            0.0
        } else {
            self.late as f64 / self.boarded_measured as f64
        };
        r.util_french_soft = self.french_soft.utilization(h);
        r.util_french_hard = self.french_hard.utilization(h);
        r.util_co2 = self.co2.utilization(h);
        r.util_sheds = self.shed.utilization(h);
        r.util_berth = self.berth.utilization(h);
        r.max_queue_french_soft = self.french_soft.max_queue_len() as u64;
        r.max_queue_french_hard = self.french_hard.max_queue_len() as u64;
        r.max_queue_co2 = self.co2.max_queue_len() as u64;
        r.max_queue_sheds = self.shed.max_queue_len() as u64;
        r.max_queue_berth = self.berth.max_queue_len() as u64;
        let live: Vec<&Slot> = self.slots.iter().flatten().collect();
        r.in_system = live.len() as u64;
        r.marked_in_system = live.iter().filter(|x| x.lorry.is_marked()).count() as u64;
        r.plm = match self.cfg.mode {
            Mode::Oo => Some(self.missed),
            Mode::Po => None,
        };
        self.report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(days: f64) -> ModelConfig {
        ModelConfig {
            horizon_days: days,
            ..Default::default()
        }
    }

    fn run(c: &ModelConfig, seed: u64) -> KpiReport {
        simulate(c, seed).unwrap()
    }

    #[test]
    fn same_seed_same_report() {
        let c = small(3.0);
        assert_eq!(run(&c, 11), run(&c, 11));
        assert_ne!(run(&c, 11), run(&c, 12));
    }

    #[test]
    fn lorries_and_positives_are_conserved() {
        let r = run(&small(7.0), 3);
        assert_eq!(r.admitted, r.boarded + r.found_total + r.in_system);
        assert_eq!(r.processed, r.boarded + r.found_total);
        assert_eq!(r.marked, r.plf_total() + r.plm.unwrap() + r.marked_in_system);
        assert_eq!(r.found_unmarked, 0);
    }

    #[test]
    fn perfect_french_sensors_find_everyone_in_france() {
        let mut c = small(7.0);
        c.sensors.pmmw.true_positive = 1.0;
        c.sensors.co2_probe.true_positive = 1.0;
        c.sensors.heartbeat.true_positive = 1.0;
        let r = run(&c, 5);
        assert!(r.marked > 0);
        assert_eq!(r.plf_sheds + r.plf_berth, 0);
        assert_eq!(r.plm, Some(0));
        assert_eq!(r.plf_france + r.marked_in_system, r.marked);
    }

    #[test]
    fn no_shed_selection_means_idle_sheds() {
        let mut c = small(7.0);
        c.stations.uk_shed.search_fraction = 0.0;
        let r = run(&c, 6);
        assert_eq!(r.shed_searches, 0);
        assert_eq!(r.plf_sheds, 0);
        assert_eq!(r.util_sheds, 0.0);
        assert_eq!(r.max_queue_sheds, 0);
    }

    #[test]
    fn bypass_caps_the_shed_queue() {
        let mut c = small(7.0);
        c.stations.uk_shed.servers = 2;
        c.interventions.queue_bypass = Some(4);
        let r = run(&c, 7);
        assert!(r.shed_bypassed > 0);
        assert!(r.max_queue_sheds <= 4, "{}", r.max_queue_sheds);
    }

    #[test]
    fn speed_up_triggers_on_long_queues() {
        let mut c = small(7.0);
        c.stations.uk_shed.servers = 6;
        c.interventions.speed_up = Some(crate::model::SpeedUp {
            queue_threshold: 3,
            cycle_multiplier: 0.5,
            detection_multiplier: 0.8,
        });
        let slow = run(&small(7.0), 8);
        let r = run(&c, 8);
        assert!(r.shed_sped_up > 0);
        assert!(r.shed_sped_up <= r.shed_searches + 6);
        assert!(slow.shed_sped_up == 0);
    }

    #[test]
    fn without_interrupt_no_search_is_aborted() {
        let mut c = small(7.0);
        c.ferry.interrupt = false;
        let r = run(&c, 9);
        assert_eq!(r.berth_searches_aborted, 0);
        assert!(r.berth_searches > 0);
        let on = run(&small(7.0), 9);
        assert!(on.berth_searches_aborted > 0);
    }

    #[test]
    fn ferry_capacity_limits_boarding() {
        let mut c = small(2.0);
        c.ferry.capacity = 10;
        let r = run(&c, 10);
        assert!(r.boarded <= r.sailings * 10);
        assert!(r.left_behind > 0);
    }

    #[test]
    fn process_mode_follows_routing_proportions() {
        let mut c = small(28.0);
        c.mode = Mode::Po;
        c.routing.french_suspicious_soft = 0.1;
        c.routing.found_shed = 0.02;
        let r = run(&c, 12);
        assert_eq!(r.plm, None);
        assert_eq!(r.marked, 0);
        for (hits, n, p) in [(r.soft_suspicious, r.soft_screened, 0.1), (r.plf_sheds, r.shed_searches, 0.02)] {
            let n = n as f64;
            let sd = (n * p * (1.0 - p)).sqrt();
            assert!((hits as f64 - n * p).abs() < 4.0 * sd, "{hits} of {n} at {p}");
        }
    }

    #[test]
    fn warm_up_only_trims_averages() {
        let mut c = small(3.0);
        let cold = run(&c, 13);
        c.warmup_minutes = 600.0;
        let warm = run(&c, 13);
        assert_eq!(cold.admitted, warm.admitted);
        assert_eq!(cold.plf_total(), warm.plf_total());
        assert_ne!(cold.time_in_system, warm.time_in_system);
    }

    #[test]
    fn trace_records_every_lorry() {
        let mut c = small(0.5);
        c.trace = true;
        let r = run(&c, 14);
        let arrivals = r.trace.iter().filter(|t| t.event == "arrive" && t.station == "france").count();
        assert_eq!(arrivals as u64, r.admitted);
        assert!(r.trace.windows(2).all(|w| w[0].time <= w[1].time));
    }

    #[test]
    fn service_threshold_counts_late_boardings() {
        let mut c = small(3.0);
        c.record_times = true;
        c.service_threshold = Some(40.0);
        let r = run(&c, 15);
        assert!((r.service_problem - r.service_problem_at(40.0)).abs() < 1e-12);
        assert!(r.service_problem > 0.0 && r.service_problem < 1.0);
    }
}
