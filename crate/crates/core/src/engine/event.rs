use alloc::collections::BinaryHeap;
use core::cmp::{Ordering, Reverse};

use crate::time::SimTime;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    BeaconGen,
    RsuIngress,
    DetectorArrival,
    DetectorDone,
    ReplyAtRsu,
    ReplyAtVehicle,
}

/// A scheduled event about one beacon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimEvent {
    pub fire_time: SimTime,
    pub sequence: u64,
    pub kind: EventKind,
    pub beacon: usize,
}

impl Ord for SimEvent {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.fire_time, self.sequence).cmp(&(other.fire_time, other.sequence))
    }
}

impl PartialOrd for SimEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Min-queue over `(fire_time, sequence)`; the sequence number makes the
/// order total.
#[derive(Debug, Default)]
pub struct EventQueue {
    heap: BinaryHeap<Reverse<SimEvent>>,
    next_sequence: u64,
}

impl EventQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn schedule(&mut self, fire_time: SimTime, kind: EventKind, beacon: usize) {
        let sequence = self.next_sequence;
        self.next_sequence += 1;
        self.heap.push(Reverse(SimEvent { fire_time, sequence, kind, beacon }));
    }

    pub fn pop(&mut self) -> Option<SimEvent> {
        self.heap.pop().map(|Reverse(e)| e)
    }

    pub fn peek_time(&self) -> Option<SimTime> {
        self.heap.peek().map(|Reverse(e)| e.fire_time)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn pops_in_time_then_insertion_order() {
        let mut q = EventQueue::new();
        q.schedule(SimTime(5), EventKind::BeaconGen, 0);
        q.schedule(SimTime(1), EventKind::RsuIngress, 1);
        q.schedule(SimTime(5), EventKind::DetectorDone, 2);
        q.schedule(SimTime(1), EventKind::ReplyAtRsu, 3);
        let order: Vec<usize> = core::iter::from_fn(|| q.pop()).map(|e| e.beacon).collect();
        assert_eq!(order, [1, 3, 0, 2]);
    }
}
