use std::collections::VecDeque;

use super::stats::TimeWeightedStat;

/// Multi-server resource with a FIFO waiting line.
///
/// The pool only tracks occupancy; callers schedule the service-completion
/// events themselves and call [`finish`](Self::finish) when one fires.
#[derive(Debug, Clone)]
pub struct ServerPool<T> {
    servers: usize,
    busy: usize,
    queue: VecDeque<(T, f64)>,
    queue_stat: TimeWeightedStat,
    busy_stat: TimeWeightedStat,
    served: u64,
}

impl<T> ServerPool<T> {
    pub fn new(servers: usize, start: f64) -> Self {
        assert!(servers >= 1, "a server pool needs at least one server");
        Self {
            servers,
            busy: 0,
            queue: VecDeque::new(),
            queue_stat: TimeWeightedStat::new(start, 0.0),
            busy_stat: TimeWeightedStat::new(start, 0.0),
            served: 0,
        }
    }

    pub fn servers(&self) -> usize {
        self.servers
    }

    pub fn busy(&self) -> usize {
        self.busy
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    pub fn has_idle_server(&self) -> bool {
        self.busy < self.servers
    }

    /// Number of services started so far.
    pub fn served(&self) -> u64 {
        self.served
    }

    fn seize(&mut self, now: f64) {
        debug_assert!(self.busy < self.servers);
        self.busy += 1;
        self.served += 1;
        self.busy_stat.set(now, self.busy as f64);
    }

    /// Seizes a server for `item` if one is idle and nobody is waiting,
    /// returning the item so the caller can start service. Otherwise the item
    /// joins the back of the queue and `None` is returned.
    pub fn arrive(&mut self, now: f64, item: T) -> Option<T> {
        if self.has_idle_server() && self.queue.is_empty() {
            self.seize(now);
            Some(item)
        } else {
            self.queue.push_back((item, now));
            self.queue_stat.set(now, self.queue.len() as f64);
            None
        }
    }

    /// Puts an item back at the head of the line, keeping its original
    /// queue-entry time.
    pub fn push_front(&mut self, now: f64, item: T, enqueued_at: f64) {
        self.queue.push_front((item, enqueued_at));
        self.queue_stat.set(now, self.queue.len() as f64);
    }

    /// A service completed: the server goes to the head of the line if there
    /// is one. Returns the item now entering service and its queueing delay.
    pub fn finish(&mut self, now: f64) -> Option<(T, f64)> {
        self.release(now);
        self.start_waiting(now)
    }

    /// Frees a server without pulling in the next waiting item.
    pub fn release(&mut self, now: f64) {
        assert!(self.busy > 0, "released a server that was not busy");
        self.busy -= 1;
        self.busy_stat.set(now, self.busy as f64);
    }

    /// Starts the next waiting item if a server is idle.
    pub fn start_waiting(&mut self, now: f64) -> Option<(T, f64)> {
        if !self.has_idle_server() {
            return None;
        }
        let (item, since) = self.queue.pop_front()?;
        self.queue_stat.set(now, self.queue.len() as f64);
        self.seize(now);
        Some((item, now - since))
    }

    /// Drops waiting items for which `remove` returns true.
    pub fn remove_waiting<F: FnMut(&T) -> bool>(&mut self, now: f64, mut remove: F) {
        let before = self.queue.len();
        self.queue.retain(|(item, _)| !remove(item));
        if self.queue.len() != before {
            self.queue_stat.set(now, self.queue.len() as f64);
        }
    }

    pub fn max_queue_len(&self) -> usize {
        self.queue_stat.max() as usize
    }

    pub fn mean_queue_len(&self, until: f64) -> f64 {
        self.queue_stat.mean(until)
    }

    /// Mean number of busy servers over the window.
    pub fn mean_busy(&self, until: f64) -> f64 {
        self.busy_stat.mean(until)
    }

    /// Busy server-time over `servers * window`.
    pub fn utilization(&self, until: f64) -> f64 {
        (self.busy_stat.mean(until) / self.servers as f64).clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifo_single_server() {
        let mut pool = ServerPool::new(1, 0.0);
        assert_eq!(pool.arrive(0.0, 'a'), Some('a'));
        assert_eq!(pool.arrive(1.0, 'b'), None);
        assert_eq!(pool.arrive(2.0, 'c'), None);
        assert_eq!(pool.queue_len(), 2);
        assert_eq!(pool.finish(3.0), Some(('b', 2.0)));
        assert_eq!(pool.finish(4.0), Some(('c', 2.0)));
        assert_eq!(pool.finish(6.0), None);
        assert_eq!(pool.busy(), 0);
        assert_eq!(pool.max_queue_len(), 2);
        // busy on [0,6) out of 10
        assert!((pool.utilization(10.0) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn multi_server_occupancy_bounded() {
        let mut pool = ServerPool::new(3, 0.0);
        for i in 0..10 {
            pool.arrive(i as f64 * 0.1, i);
            assert!(pool.busy() <= pool.servers());
        }
        assert_eq!(pool.busy(), 3);
        assert_eq!(pool.queue_len(), 7);
        pool.remove_waiting(2.0, |i| i % 2 == 0);
        assert_eq!(pool.queue_len(), 4);
    }

    #[test]
    fn push_front_keeps_entry_time() {
        let mut pool = ServerPool::new(1, 0.0);
        pool.arrive(0.0, 1);
        pool.arrive(1.0, 2);
        pool.release(5.0);
        pool.push_front(5.0, 9, 0.5);
        assert_eq!(pool.start_waiting(5.0), Some((9, 4.5)));
    }
}
