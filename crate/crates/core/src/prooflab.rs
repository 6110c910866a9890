//! Executable renditions of the exhaustive case split behind the six-item
//! no-EFX argument. Every allocation of the standard ground set falls into
//! exactly one of three structural families, read off where the special
//! items b1, b2, b3 land; each family check re-derives a strict violation
//! for every member allocation instead of taking the argument on faith.
//!
//! A fourth check validates the level-to-value table of the coverage
//! profile: which exact costs each ordinal level can take, and how big the
//! gaps between adjacent levels are.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::efx::{enumerate_allocations, is_alpha_efx, Allocation, EfxError, ViolationWitness};
use crate::instances::{four_level_rank, STANDARD_ITEMS};
use crate::numeric::{ratio, ExactValue, ExtendedValue};
use crate::setfn::{Bundle, Polarity, Profile};

const AGENTS: usize = 3;
const ITEMS: usize = 6;
const HEAVY_ITEM: usize = 0;
/// Items 3, 4, 5 are the special items; item 3 + i matches agent i.
const SPECIAL_BASE: usize = 3;

/// Expected value image of each ordinal level under the coverage profile.
pub const LEVEL_IMAGES: [&[u64]; 4] = [&[0, 6, 10, 13], &[14, 17], &[18, 19], &[20]];

#[derive(Error, Debug)]
pub enum ProoflabError {
    #[error("case checks require the standard six-item ground set h,l1,l2,b1,b2,b3")]
    GroundMismatch,
    #[error("case checks require exactly {expected} agents, got {got}")]
    AgentCountMismatch { expected: usize, got: usize },
    #[error("case checks apply to chores profiles only")]
    NotChores,
    #[error("unknown case id {0:?}, expected two-specials, matching-special or derangement")]
    UnknownCase(String),
    #[error("agent {agent}: bundle {{{bundle}}} at level {level} has value {value} outside the expected image")]
    LevelValueMismatch {
        agent: usize,
        level: usize,
        bundle: String,
        value: ExactValue,
    },
    #[error("agent {agent}: no bundle at level {level} attains the expected value {value}")]
    LevelValueMissing {
        agent: usize,
        level: usize,
        value: ExactValue,
    },
    #[error(transparent)]
    Efx(#[from] EfxError),
}

/// The three structural families partitioning all 729 allocations by the
/// placement of the special items: some agent holds two or more of them,
/// or each agent holds exactly one and somebody holds her own, or each
/// agent holds exactly one and nobody holds her own.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum AllocationCase {
    TwoSpecials,
    MatchingSpecial,
    Derangement,
}

impl AllocationCase {
    pub const ALL: [AllocationCase; 3] = [
        AllocationCase::TwoSpecials,
        AllocationCase::MatchingSpecial,
        AllocationCase::Derangement,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            AllocationCase::TwoSpecials => "two-specials",
            AllocationCase::MatchingSpecial => "matching-special",
            AllocationCase::Derangement => "derangement",
        }
    }
}

impl fmt::Display for AllocationCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for AllocationCase {
    type Err = ProoflabError;

    fn from_str(s: &str) -> Result<Self, ProoflabError> {
        AllocationCase::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| ProoflabError::UnknownCase(s.to_string()))
    }
}

fn family_of(assignment: &[usize]) -> AllocationCase {
    let mut held = [0usize; AGENTS];
    for item in SPECIAL_BASE..ITEMS {
        held[assignment[item]] += 1;
    }
    if held.iter().any(|&c| c >= 2) {
        AllocationCase::TwoSpecials
    } else if (0..AGENTS).any(|i| assignment[SPECIAL_BASE + i] == i) {
        AllocationCase::MatchingSpecial
    } else {
        AllocationCase::Derangement
    }
}

/// Family of one allocation over the standard six-item ground.
pub fn classify(x: &Allocation) -> Result<AllocationCase, ProoflabError> {
    if x.items() != ITEMS {
        return Err(ProoflabError::GroundMismatch);
    }
    if x.assignment().iter().any(|&a| a >= AGENTS) {
        return Err(ProoflabError::AgentCountMismatch {
            expected: AGENTS,
            got: 1 + x.assignment().iter().copied().max().unwrap_or(0),
        });
    }
    Ok(family_of(x.assignment()))
}

/// Result of sweeping one structural family.
#[derive(Clone, Debug)]
pub struct CaseReport {
    pub case: AllocationCase,
    /// Allocations matching the family predicate.
    pub allocation_count: usize,
    /// True when every family member produced a strict violation.
    pub all_violated: bool,
    /// One violation per violated member, in allocation order.
    pub witnesses: Vec<(Allocation, ViolationWitness)>,
    /// Smallest witness ratio; infinite when no witness was collected.
    pub min_ratio: ExtendedValue,
}

fn require_standard_profile(profile: &Profile) -> Result<(), ProoflabError> {
    if profile.polarity() != Polarity::Chores {
        return Err(ProoflabError::NotChores);
    }
    if profile.agent_count() != AGENTS {
        return Err(ProoflabError::AgentCountMismatch {
            expected: AGENTS,
            got: profile.agent_count(),
        });
    }
    let names = profile.ground().names();
    if names.len() != ITEMS || names.iter().zip(STANDARD_ITEMS).any(|(a, b)| a != b) {
        return Err(ProoflabError::GroundMismatch);
    }
    Ok(())
}

/// The specific violation resolving the derangement family: the agent
/// holding the heavy item deletes her single, nonmatching special item and
/// compares against the one rival bundle holding neither the heavy item nor
/// her own special. Returns None when that comparison is not strict.
fn heavy_holder_witness(profile: &Profile, x: &Allocation) -> Option<ViolationWitness> {
    let r = x.agent_of(HEAVY_ITEM);
    let own_special = SPECIAL_BASE + r;
    let deleted = (SPECIAL_BASE..ITEMS)
        .find(|&item| x.agent_of(item) == r)
        .expect("each agent holds one special item in this family");
    let holder_of_own = x.agent_of(own_special);
    let rival = (0..AGENTS)
        .find(|&j| j != r && j != holder_of_own)
        .expect("three agents leave one candidate");

    let ground = profile.ground();
    let masks = x.bundle_masks(AGENTS);
    let f = profile.agent(r);
    let residual =
        f.evaluate(Bundle::from_mask(masks[r] & !(1 << deleted), ground).expect("mask in range"));
    let rival_value =
        f.evaluate(Bundle::from_mask(masks[rival], ground).expect("mask in range"));
    if residual <= rival_value {
        return None;
    }
    Some(ViolationWitness {
        envier: r,
        item: deleted,
        rival,
        ratio: ratio(&residual, &rival_value),
        envier_value: residual,
        rival_value,
    })
}

/// Sweeps every allocation of the named family and collects one strict
/// violation per member. Two-specials and matching-special members use the
/// lexicographically first violation, so their witnesses line up with the
/// full-sweep certificate; derangement members use the heavy-holder
/// construction, which pins down both the deleted item and the rival.
pub fn check_case(profile: &Profile, case: AllocationCase) -> Result<CaseReport, ProoflabError> {
    require_standard_profile(profile)?;
    let one = ExactValue::one();
    let mut witnesses = Vec::new();
    let mut allocation_count = 0usize;
    let mut all_violated = true;
    let mut min_ratio = ExtendedValue::PositiveInfinity;

    for x in enumerate_allocations(AGENTS, profile.ground())? {
        if family_of(x.assignment()) != case {
            continue;
        }
        allocation_count += 1;
        let found = match case {
            AllocationCase::Derangement => heavy_holder_witness(profile, &x),
            _ => is_alpha_efx(profile, &x, &one)?,
        };
        match found {
            Some(w) => {
                if w.ratio < min_ratio {
                    min_ratio = w.ratio.clone();
                }
                witnesses.push((x, w));
            }
            None => all_violated = false,
        }
    }
    Ok(CaseReport {
        case,
        allocation_count,
        all_violated,
        witnesses,
        min_ratio,
    })
}

pub fn check_case_two_specials(profile: &Profile) -> Result<CaseReport, ProoflabError> {
    check_case(profile, AllocationCase::TwoSpecials)
}

pub fn check_case_matching_special(profile: &Profile) -> Result<CaseReport, ProoflabError> {
    check_case(profile, AllocationCase::MatchingSpecial)
}

pub fn check_case_derangement(profile: &Profile) -> Result<CaseReport, ProoflabError> {
    check_case(profile, AllocationCase::Derangement)
}

/// Validated level-to-value table of a profile over the standard ground.
#[derive(Clone, Debug)]
pub struct LevelTableReport {
    /// `images[agent][level]`: the distinct values attained, ascending.
    pub images: Vec<Vec<Vec<ExactValue>>>,
    /// Smallest jump between adjacent levels, one entry per level pair:
    /// min value at the upper level over max value at the lower level.
    pub adjacent_gaps: Vec<ExactValue>,
    /// The smallest adjacent gap.
    pub min_gap: ExactValue,
}

/// Checks that, per agent, each ordinal level of the four-level ladder maps
/// onto exactly the expected value image [`LEVEL_IMAGES`], then reports the
/// gaps between adjacent levels. Any stray or missing value is reported
/// with the offending bundle or level.
pub fn check_level_table(profile: &Profile) -> Result<LevelTableReport, ProoflabError> {
    require_standard_profile(profile)?;
    let expected: Vec<BTreeSet<ExactValue>> = LEVEL_IMAGES
        .iter()
        .map(|level| level.iter().map(|&v| ExactValue::from_int(v)).collect())
        .collect();

    let ground = profile.ground();
    let mut images: Vec<Vec<BTreeSet<ExactValue>>> =
        vec![vec![BTreeSet::new(); expected.len()]; AGENTS];
    for (agent, seen) in images.iter_mut().enumerate() {
        let f = profile.agent(agent);
        for bundle in ground.bundles() {
            let level = four_level_rank(agent, bundle.mask()) as usize;
            let value = f.evaluate(bundle);
            if !expected[level].contains(&value) {
                return Err(ProoflabError::LevelValueMismatch {
                    agent,
                    level,
                    bundle: bundle.names(ground).join(","),
                    value,
                });
            }
            seen[level].insert(value);
        }
        for (level, values) in expected.iter().enumerate() {
            if let Some(missing) = values.difference(&seen[level]).next() {
                return Err(ProoflabError::LevelValueMissing {
                    agent,
                    level,
                    value: missing.clone(),
                });
            }
        }
    }

    // images now equal the expected table for every agent, so each gap is
    // well defined and finite
    let mut adjacent_gaps = Vec::new();
    for level in 0..expected.len() - 1 {
        let gap = images
            .iter()
            .map(|seen| {
                let lower_max = seen[level].iter().next_back().expect("nonempty image");
                let upper_min = seen[level + 1].iter().next().expect("nonempty image");
                match ratio(upper_min, lower_max) {
                    ExtendedValue::Finite(v) => v,
                    ExtendedValue::PositiveInfinity => unreachable!("validated images are positive above level 0"),
                }
            })
            .min()
            .expect("at least one agent");
        adjacent_gaps.push(gap);
    }
    let min_gap = adjacent_gaps.iter().min().expect("at least one gap").clone();

    Ok(LevelTableReport {
        images: images
            .into_iter()
            .map(|per_agent| {
                per_agent
                    .into_iter()
                    .map(|set| set.into_iter().collect())
                    .collect()
            })
            .collect(),
        adjacent_gaps,
        min_gap,
    })
}
