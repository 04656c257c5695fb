//! UWB logical-channel inventory and the control/data split.
//!
//! A logical channel is a physical channel index (0..=15) paired with a
//! preamble sequence code (1..=8). Overlapping physical channels 4, 7, 11 and
//! 15 combined with codes 7 and 8 form the pool of control channels; whatever
//! else a regulatory domain admits is data spectrum.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A (physical channel, sequence code) pair. Ordered by channel, then code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LogicalChannel {
    pub phy_channel: u8,
    pub code: u8,
}

impl LogicalChannel {
    pub fn new(phy_channel: u8, code: u8) -> Result<Self> {
        let ch = LogicalChannel { phy_channel, code };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(self) -> Result<()> {
        if self.phy_channel <= 15 && (1..=8).contains(&self.code) {
            Ok(())
        } else {
            Err(Error::InvalidChannel {
                phy_channel: self.phy_channel,
                code: self.code,
            })
        }
    }
}

impl fmt::Display for LogicalChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.phy_channel, self.code)
    }
}

impl FromStr for LogicalChannel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (phy, code) = s
            .split_once(':')
            .ok_or_else(|| format!("expected `phy:code`, got `{s}`"))?;
        let phy = phy
            .trim()
            .parse()
            .map_err(|e| format!("bad channel in `{s}`: {e}"))?;
        let code = code
            .trim()
            .parse()
            .map_err(|e| format!("bad code in `{s}`: {e}"))?;
        LogicalChannel::new(phy, code).map_err(|e| e.to_string())
    }
}

/// Physical channels whose wide bandwidth suits control traffic.
pub const CONTROL_PHY_CHANNELS: [u8; 4] = [4, 7, 11, 15];

/// The eight candidate control channels, in allocation priority order
/// (all code-7 channels first, then code 8).
pub fn control_pool() -> Vec<LogicalChannel> {
    [7u8, 8]
        .into_iter()
        .flat_map(|code| {
            CONTROL_PHY_CHANNELS
                .into_iter()
                .map(move |phy_channel| LogicalChannel { phy_channel, code })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainName {
    US,
    Europe,
    Japan,
}

impl DomainName {
    pub const ALL: [DomainName; 3] = [DomainName::US, DomainName::Europe, DomainName::Japan];

    pub fn as_str(self) -> &'static str {
        match self {
            DomainName::US => "US",
            DomainName::Europe => "Europe",
            DomainName::Japan => "Japan",
        }
    }
}

impl fmt::Display for DomainName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DomainName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "us" => Ok(DomainName::US),
            "europe" | "eu" => Ok(DomainName::Europe),
            "japan" | "jp" => Ok(DomainName::Japan),
            _ => Err(format!(
                "unknown regulatory domain `{s}` (expected US, Europe or Japan)"
            )),
        }
    }
}

// Preamble codes carried by each physical channel (two per channel).
const PHY_CODES: [(u8, [u8; 2]); 16] = [
    (0, [1, 2]),
    (1, [1, 2]),
    (2, [3, 4]),
    (3, [5, 6]),
    (4, [7, 8]),
    (5, [1, 2]),
    (6, [3, 4]),
    (7, [7, 8]),
    (8, [1, 2]),
    (9, [3, 4]),
    (10, [5, 6]),
    (11, [7, 8]),
    (12, [1, 2]),
    (13, [3, 4]),
    (14, [5, 6]),
    (15, [7, 8]),
];

const EUROPE_PHY: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];
const JAPAN_PHY: [u8; 11] = [1, 2, 3, 5, 6, 8, 9, 10, 11, 12, 13];

fn table_for(phys: &[u8]) -> BTreeSet<LogicalChannel> {
    PHY_CODES
        .iter()
        .filter(|(phy, _)| phys.contains(phy))
        .flat_map(|&(phy_channel, codes)| {
            codes
                .into_iter()
                .map(move |code| LogicalChannel { phy_channel, code })
        })
        .collect()
}

/// The set of logical channels a regulatory domain admits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegulatoryDomain {
    pub name: String,
    pub channels: BTreeSet<LogicalChannel>,
}

impl RegulatoryDomain {
    /// Built-in table: 32 channels for the US, 18 for Europe, 22 for Japan.
    pub fn builtin(name: DomainName) -> Self {
        let channels = match name {
            DomainName::US => table_for(&(0..16).collect::<Vec<_>>()),
            DomainName::Europe => table_for(&EUROPE_PHY),
            DomainName::Japan => table_for(&JAPAN_PHY),
        };
        RegulatoryDomain {
            name: name.as_str().to_string(),
            channels,
        }
    }

    /// A user-supplied table. Duplicates are merged; invalid pairs rejected.
    pub fn custom(name: impl Into<String>, channels: &[LogicalChannel]) -> Result<Self> {
        for ch in channels {
            ch.validate()?;
        }
        Ok(RegulatoryDomain {
            name: name.into(),
            channels: channels.iter().copied().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }
}

/// Convenience for [`RegulatoryDomain::builtin`].
pub fn default_domain(name: DomainName) -> RegulatoryDomain {
    RegulatoryDomain::builtin(name)
}

/// Control and data channels of one domain. Both lists are sorted by
/// (channel, code) and together cover the domain exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelPlan {
    pub domain: String,
    pub control: Vec<LogicalChannel>,
    pub data: Vec<LogicalChannel>,
}

impl ChannelPlan {
    /// Splits a domain: every admitted control-pool channel carries control
    /// traffic, everything else is data.
    pub fn new(domain: &RegulatoryDomain) -> Result<Self> {
        Self::with_control_limit(domain, usize::MAX)
    }

    /// Like [`ChannelPlan::new`] but keeps at most `limit` control channels,
    /// taken in [`control_pool`] order; the rest join the data set.
    pub fn with_control_limit(domain: &RegulatoryDomain, limit: usize) -> Result<Self> {
        let control: BTreeSet<LogicalChannel> = control_pool()
            .into_iter()
            .filter(|ch| domain.channels.contains(ch))
            .take(limit)
            .collect();
        if control.is_empty() {
            return Err(Error::InvalidDomainTable {
                domain: domain.name.clone(),
            });
        }
        let data = domain
            .channels
            .iter()
            .filter(|ch| !control.contains(ch))
            .copied()
            .collect();
        Ok(ChannelPlan {
            domain: domain.name.clone(),
            control: control.into_iter().collect(),
            data,
        })
    }
}

/// Shorthand for [`ChannelPlan::new`].
pub fn channel_plan(domain: &RegulatoryDomain) -> Result<ChannelPlan> {
    ChannelPlan::new(domain)
}

/// Output of [`partition_channels`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelGroups {
    pub groups: Vec<Vec<LogicalChannel>>,
    pub unassigned: Vec<LogicalChannel>,
}

/// Cuts `channels` into `k_groups` consecutive runs of `group_size`, in input
/// order. Channels past the last group are returned as unassigned.
pub fn partition_channels(
    channels: &[LogicalChannel],
    k_groups: usize,
    group_size: usize,
) -> Result<ChannelGroups> {
    let required = k_groups.checked_mul(group_size).ok_or(Error::Capacity {
        required: usize::MAX,
        available: channels.len(),
    })?;
    if required > channels.len() {
        return Err(Error::Capacity {
            required,
            available: channels.len(),
        });
    }
    let groups = (0..k_groups)
        .map(|g| channels[g * group_size..(g + 1) * group_size].to_vec())
        .collect();
    Ok(ChannelGroups {
        groups,
        unassigned: channels[required..].to_vec(),
    })
}
