//! In-process point-to-point links between parties.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use super::GmwError;
use crate::lang::Principal;

/// Bits sent in one round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub round: u32,
    pub bits: Vec<bool>,
}

/// Reliable FIFO link from one party to another.
#[derive(Clone, Debug, Default)]
pub struct Channel {
    queue: VecDeque<Message>,
    closed: bool,
}

impl Channel {
    pub fn send(&mut self, m: Message) -> bool {
        if self.closed {
            return false;
        }
        self.queue.push_back(m);
        true
    }

    pub fn recv(&mut self) -> Option<Message> {
        self.queue.pop_front()
    }

    pub fn close(&mut self) {
        self.closed = true;
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }
}

/// One channel per ordered pair of distinct parties.
#[derive(Clone, Debug, Default)]
pub struct Network {
    links: BTreeMap<(Principal, Principal), Channel>,
}

impl Network {
    pub fn new<'a>(parties: impl IntoIterator<Item = &'a Principal> + Clone) -> Network {
        let mut links = BTreeMap::new();
        for a in parties.clone() {
            for b in parties.clone() {
                if a != b {
                    links.insert((a.clone(), b.clone()), Channel::default());
                }
            }
        }
        Network { links }
    }

    pub fn send(&mut self, from: &Principal, to: &Principal, m: Message) -> Result<(), GmwError> {
        let closed = || GmwError::ChannelClosed {
            from: from.clone(),
            to: to.clone(),
        };
        let ch = self.links.get_mut(&(from.clone(), to.clone())).ok_or_else(closed)?;
        if ch.send(m) {
            Ok(())
        } else {
            Err(closed())
        }
    }

    /// Next message from `from` to `to`, which must belong to `round`.
    pub fn recv(&mut self, from: &Principal, to: &Principal, round: u32) -> Result<Message, GmwError> {
        let m = self
            .links
            .get_mut(&(from.clone(), to.clone()))
            .and_then(Channel::recv)
            .ok_or_else(|| GmwError::ChannelClosed {
                from: from.clone(),
                to: to.clone(),
            })?;
        if m.round != round {
            return Err(GmwError::RoundMismatch {
                expected: round,
                got: m.round,
            });
        }
        Ok(m)
    }

    pub fn close(&mut self, from: &Principal, to: &Principal) {
        if let Some(ch) = self.links.get_mut(&(from.clone(), to.clone())) {
            ch.close();
        }
    }

    /// True once every sent message has been received.
    pub fn is_drained(&self) -> bool {
        self.links.values().all(Channel::is_empty)
    }
}
