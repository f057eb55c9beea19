use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::KernelError;

struct Entry<E> {
    time: f64,
    seq: u64,
    payload: E,
}

impl<E> PartialEq for Entry<E> {
    fn eq(&self, other: &Self) -> bool {
        self.seq == other.seq
    }
}

impl<E> Eq for Entry<E> {}

impl<E> PartialOrd for Entry<E> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<E> Ord for Entry<E> {
    // BinaryHeap is a max-heap: invert so the earliest (time, seq) pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Future-event list with a simulation clock.
///
/// Events come out in non-decreasing time order; events sharing a timestamp
/// come out in the order they were scheduled.
pub struct EventCalendar<E> {
    heap: BinaryHeap<Entry<E>>,
    now: f64,
    next_seq: u64,
}

impl<E> Default for EventCalendar<E> {
    fn default() -> Self {
        Self::new()
    }
}

impl<E> EventCalendar<E> {
    pub fn new() -> Self {
        Self {
            heap: BinaryHeap::new(),
            now: 0.0,
            next_seq: 0,
        }
    }

    /// Current simulation clock.
    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Schedules `payload` at absolute time `time`.
    pub fn schedule(&mut self, time: f64, payload: E) -> Result<(), KernelError> {
        if !time.is_finite() {
            return Err(KernelError::NonFiniteTime(time));
        }
        if time < self.now {
            return Err(KernelError::ScheduleInPast {
                time,
                now: self.now,
            });
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Entry { time, seq, payload });
        Ok(())
    }

    /// Schedules `payload` at `now + delay`.
    pub fn schedule_in(&mut self, delay: f64, payload: E) -> Result<(), KernelError> {
        self.schedule(self.now + delay, payload)
    }

    /// Time of the next pending event.
    pub fn peek_time(&self) -> Option<f64> {
        self.heap.peek().map(|e| e.time)
    }

    /// Removes the next event and advances the clock to its timestamp.
    pub fn pop(&mut self) -> Option<(f64, E)> {
        let entry = self.heap.pop()?;
        debug_assert!(entry.time >= self.now);
        self.now = entry.time;
        Some((entry.time, entry.payload))
    }

    /// Like [`pop`](Self::pop) but leaves events later than `horizon` pending.
    pub fn pop_until(&mut self, horizon: f64) -> Option<(f64, E)> {
        match self.peek_time() {
            Some(t) if t <= horizon => self.pop(),
            _ => None,
        }
    }

    /// Moves the clock forward without executing anything.
    pub fn advance_to(&mut self, time: f64) {
        if time > self.now {
            self.now = time;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn extracts_in_time_order() {
        let mut cal = EventCalendar::new();
        cal.schedule(5.0, "five").unwrap();
        cal.schedule(3.0, "three").unwrap();
        assert_eq!(cal.pop(), Some((3.0, "three")));
        assert_eq!(cal.pop(), Some((5.0, "five")));
        assert_eq!(cal.pop(), None);
    }

    #[test]
    fn equal_times_are_fifo() {
        let mut cal = EventCalendar::new();
        cal.schedule(7.0, 'A').unwrap();
        cal.schedule(7.0, 'B').unwrap();
        assert_eq!(cal.pop().unwrap().1, 'A');
        assert_eq!(cal.pop().unwrap().1, 'B');
    }

    #[test]
    fn rejects_past_events() {
        let mut cal: EventCalendar<()> = EventCalendar::new();
        assert!(matches!(
            cal.schedule(-1.0, ()),
            Err(KernelError::ScheduleInPast { .. })
        ));
        cal.schedule(10.0, ()).unwrap();
        cal.pop();
        assert!(cal.schedule(9.999, ()).is_err());
        assert!(cal.schedule(10.0, ()).is_ok());
        assert!(matches!(
            cal.schedule(f64::NAN, ()),
            Err(KernelError::NonFiniteTime(_))
        ));
    }

    #[test]
    fn pop_until_respects_horizon() {
        let mut cal = EventCalendar::new();
        cal.schedule(1.0, 1).unwrap();
        cal.schedule(20.0, 2).unwrap();
        assert_eq!(cal.pop_until(10.0), Some((1.0, 1)));
        assert_eq!(cal.pop_until(10.0), None);
        assert_eq!(cal.len(), 1);
    }

    proptest! {
        #[test]
        fn clock_is_monotone(times in proptest::collection::vec(0.0f64..1000.0, 1..200)) {
            let mut cal = EventCalendar::new();
            for (i, t) in times.iter().enumerate() {
                cal.schedule(*t, i).unwrap();
            }
            let mut last = (f64::NEG_INFINITY, 0usize);
            while let Some((t, i)) = cal.pop() {
                prop_assert!(t >= last.0);
                if t == last.0 {
                    prop_assert!(i > last.1);
                }
                last = (t, i);
            }
        }
    }
}
