//! Metadata predicates over record sets.

use super::PacketRecord;
use std::collections::BTreeSet;

/// A conjunctive metadata predicate. Unset fields match everything.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RecordFilter {
    pub snr_min_db: Option<f32>,
    pub snr_max_db: Option<f32>,
    pub sat_ids: Option<BTreeSet<u8>>,
    pub site_id: Option<u8>,
    pub sdr_id: Option<u8>,
    pub time_range_ns: Option<(i64, i64)>,
    pub spoofed: Option<bool>,
}

impl RecordFilter {
    pub fn matches(&self, r: &PacketRecord) -> bool {
        if let Some(lo) = self.snr_min_db {
            if !(r.snr_db >= lo) {
                return false;
            }
        }
        if let Some(hi) = self.snr_max_db {
            if !(r.snr_db <= hi) {
                return false;
            }
        }
        if let Some(sats) = &self.sat_ids {
            if !sats.contains(&r.sat_id) {
                return false;
            }
        }
        if let Some(site) = self.site_id {
            if r.site_id != site {
                return false;
            }
        }
        if let Some(sdr) = self.sdr_id {
            if r.sdr_id != sdr {
                return false;
            }
        }
        if let Some((lo, hi)) = self.time_range_ns {
            if r.timestamp_ns < lo || r.timestamp_ns > hi {
                return false;
            }
        }
        if let Some(spoofed) = self.spoofed {
            if r.spoofed() != spoofed {
                return false;
            }
        }
        true
    }

    /// Stable-order subset of `records` matching the predicate.
    pub fn apply<'a>(&self, records: &'a [PacketRecord]) -> Vec<&'a PacketRecord> {
        records.iter().filter(|r| self.matches(r)).collect()
    }

    /// Indices of matching records, in input order.
    pub fn indices(&self, records: &[PacketRecord]) -> Vec<usize> {
        records
            .iter()
            .enumerate()
            .filter(|(_, r)| self.matches(r))
            .map(|(i, _)| i)
            .collect()
    }
}
