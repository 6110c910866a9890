//! Seeded, budgeted search for ordinal obstructions: monotone level
//! profiles admitting no EFX allocation. Each hit is reported together
//! with the compression bound it implies, 2^(1/(L-1)) for L levels, and
//! the full sweep certificate.
//!
//! The search never claims non-existence beyond what it actually swept:
//! reports distinguish an exhausted space from an exhausted budget, and
//! only the exhaustive generator can exhaust a space.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::efx::{check_no_efx, EfxError, NoEfxReport};
use crate::numeric::{ratq, ExactValue};
use crate::setfn::{Bundle, GroundSet, Polarity, Profile, SetFnError, SetFunction};

/// Item bound for the exhaustive generator; the space of monotone level
/// vectors explodes beyond this.
pub const MAX_EXHAUSTIVE_ITEMS: usize = 4;

#[derive(Error, Debug)]
pub enum MinerError {
    #[error("exhaustive search supports at most {MAX_EXHAUSTIVE_ITEMS} items, got {items}")]
    ExhaustiveTooLarge { items: usize },
    #[error("search needs at least one agent")]
    NoAgents,
    #[error("level cap must be at least 1")]
    LevelCapZero,
    #[error("base profile ground set differs from the search ground set")]
    GroundMismatch,
    #[error("base profile has {got} agents, search asks for {expected}")]
    AgentCountMismatch { expected: usize, got: usize },
    #[error("base profile must be a chores profile")]
    NotChores,
    #[error("agent {agent} out of range, profile has {agents} agents")]
    AgentOutOfRange { agent: usize, agents: usize },
    #[error("agent {agent}: flip to level {level} outside the ladder of {levels} levels")]
    FlipOutOfRange {
        agent: usize,
        level: u32,
        levels: usize,
    },
    #[error("the empty bundle is pinned at level 0")]
    EmptyBundlePinned,
    #[error("agent {agent}: level of {{{lower}}} exceeds level of {{{upper}}}")]
    MonotoneBreak {
        agent: usize,
        lower: String,
        upper: String,
    },
    #[error(transparent)]
    Function(#[from] SetFnError),
    #[error(transparent)]
    Efx(#[from] EfxError),
}

/// Candidate source for [`mine`].
#[derive(Clone, Debug)]
pub enum Generator {
    /// Every monotone level profile over the ground set, smallest first.
    ExhaustiveSmall,
    /// The base profile followed by seeded random level flips of it.
    PerturbInstance { base: Profile, max_flips: usize },
    /// Independent seeded random monotone profiles.
    RandomMonotone,
}

/// What to search and how long.
#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub agents: usize,
    pub ground: GroundSet,
    /// Largest number of distinct levels an agent may use.
    pub level_cap: usize,
    pub generator: Generator,
    pub seed: u64,
    /// Maximum number of candidate profiles examined.
    pub budget: u64,
}

/// A profile with no EFX allocation, found by the search.
#[derive(Clone, Debug)]
pub struct Obstruction {
    pub profile: Profile,
    /// Distinct nonempty-bundle values per agent.
    pub level_counts: Vec<usize>,
    /// `2^(1/(L-1))` for L the largest level count: the factor any
    /// rank compression of this profile is guaranteed to reach.
    pub implied_bound: ExactValue,
    /// Full-sweep output; per-allocation violations included.
    pub certificate: NoEfxReport,
}

#[derive(Clone, Debug)]
pub struct MineReport {
    /// Deduplicated up to agent and item relabeling, sorted by
    /// (largest level count, canonical encoding).
    pub obstructions: Vec<Obstruction>,
    pub examined: u64,
    /// True when the whole candidate space was swept, so an empty result
    /// refutes the space rather than the budget.
    pub exhausted: bool,
}

/// One level override: assign `bundle` the ladder slot `level` for `agent`.
#[derive(Clone, Debug)]
pub struct LevelFlip {
    pub agent: usize,
    pub bundle: Bundle,
    pub level: u32,
}

/// Canonical ladder of a set function: per-mask slot indices into the
/// ascending vector of distinct values over all bundles.
fn ladder(f: &SetFunction) -> (Vec<u32>, Vec<ExactValue>) {
    let table = f.table();
    let values: Vec<ExactValue> = table
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let levels = table
        .iter()
        .map(|v| values.binary_search(v).expect("value present") as u32)
        .collect();
    (levels, values)
}

/// First covering pair `(S, S + e)` whose levels decrease, if any.
fn first_monotone_break(levels: &[u32], items: usize) -> Option<(u32, u32)> {
    for mask in 0..(1u32 << items) {
        for item in 0..items {
            let bit = 1u32 << item;
            if mask & bit != 0 {
                continue;
            }
            if levels[mask as usize] > levels[(mask | bit) as usize] {
                return Some((mask, mask | bit));
            }
        }
    }
    None
}

/// Applies level flips to a chores profile and re-validates monotonicity.
/// Flips land on the canonical ladder of each agent (ascending distinct
/// values over all bundles); later flips win on the same bundle. The empty
/// bundle may only be "flipped" to level 0.
pub fn perturb_levels(base: &Profile, flips: &[LevelFlip]) -> Result<Profile, MinerError> {
    if base.polarity() != Polarity::Chores {
        return Err(MinerError::NotChores);
    }
    let ground = base.ground();
    let mut ladders: Vec<(Vec<u32>, Vec<ExactValue>)> = base.agents().iter().map(ladder).collect();

    for flip in flips {
        let agents = ladders.len();
        let (levels, values) = ladders
            .get_mut(flip.agent)
            .ok_or(MinerError::AgentOutOfRange {
                agent: flip.agent,
                agents,
            })?;
        if flip.level as usize >= values.len() {
            return Err(MinerError::FlipOutOfRange {
                agent: flip.agent,
                level: flip.level,
                levels: values.len(),
            });
        }
        if flip.bundle.is_empty() && flip.level > 0 {
            return Err(MinerError::EmptyBundlePinned);
        }
        levels[flip.bundle.mask() as usize] = flip.level;
    }

    let mut agents = Vec::with_capacity(ladders.len());
    for (agent, (levels, values)) in ladders.into_iter().enumerate() {
        if let Some((lower, upper)) = first_monotone_break(&levels, ground.len()) {
            return Err(MinerError::MonotoneBreak {
                agent,
                lower: Bundle::from_mask(lower, ground)?.names(ground).join(","),
                upper: Bundle::from_mask(upper, ground)?.names(ground).join(","),
            });
        }
        agents.push(SetFunction::leveled(ground.clone(), levels, values)?);
    }
    Ok(Profile::new(agents, Polarity::Chores)?)
}

/// Random monotone normalized level vector: raw uniform draws pushed up
/// to the monotone closure, empty bundle pinned at 0.
pub fn random_monotone_levels(rng: &mut impl Rng, items: usize, level_cap: usize) -> Vec<u32> {
    let size = 1usize << items;
    let mut levels = vec![0u32; size];
    for mask in 1..size {
        let raw = rng.random_range(0..level_cap as u32);
        let mut floor = 0;
        let mut rest = mask;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            floor = floor.max(levels[mask & !bit]);
            rest ^= bit;
        }
        levels[mask] = floor.max(raw);
    }
    levels
}

/// Integer ladder 0, 1, ..., cap-1 for generated level profiles.
fn integer_values(level_cap: usize) -> Vec<ExactValue> {
    (0..level_cap as u64).map(ExactValue::from_int).collect()
}

fn leveled_profile(
    ground: &GroundSet,
    per_agent: &[Vec<u32>],
    values: &[ExactValue],
) -> Result<Profile, MinerError> {
    let agents = per_agent
        .iter()
        .map(|levels| SetFunction::leveled(ground.clone(), levels.clone(), values.to_vec()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Profile::new(agents, Polarity::Chores)?)
}

/// Random monotone chores profile with `agents` independent level draws.
pub fn random_monotone_profile(
    rng: &mut impl Rng,
    ground: &GroundSet,
    agents: usize,
    level_cap: usize,
) -> Result<Profile, MinerError> {
    if agents == 0 {
        return Err(MinerError::NoAgents);
    }
    if level_cap == 0 {
        return Err(MinerError::LevelCapZero);
    }
    let per_agent: Vec<Vec<u32>> = (0..agents)
        .map(|_| random_monotone_levels(rng, ground.len(), level_cap))
        .collect();
    leveled_profile(ground, &per_agent, &integer_values(level_cap))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for next in 0..k {
        let mut grown = Vec::with_capacity(out.len() * (next + 1));
        for p in out {
            for slot in 0..=next {
                let mut q = p.clone();
                q.insert(slot, next);
                grown.push(q);
            }
        }
        out = grown;
    }
    out
}

fn apply_item_perm(mask: usize, perm: &[usize]) -> usize {
    let mut out = 0;
    for (j, &pj) in perm.iter().enumerate() {
        if mask & (1 << j) != 0 {
            out |= 1 << pj;
        }
    }
    out
}

/// Least level-vector encoding over all agent and item relabelings; the
/// dedup key and canonical sort key of an obstruction.
fn canonical_key(per_agent: &[Vec<u32>], items: usize) -> Vec<Vec<u32>> {
    let item_perms = permutations(items);
    let agent_perms = permutations(per_agent.len());
    let mut best: Option<Vec<Vec<u32>>> = None;
    let mut scratch: Vec<Vec<u32>> = per_agent.iter().map(|v| vec![0; v.len()]).collect();
    for pa in &agent_perms {
        for pi in &item_perms {
            for (slot, &a) in pa.iter().enumerate() {
                let src = &per_agent[a];
                let out = &mut scratch[slot];
                for (mask, &level) in src.iter().enumerate() {
                    out[apply_item_perm(mask, pi)] = level;
                }
            }
            if best.as_ref().is_none_or(|b| scratch < *b) {
                best = Some(scratch.clone());
            }
        }
    }
    best.expect("at least the identity relabeling")
}

fn canonical_levels(profile: &Profile) -> Vec<Vec<u32>> {
    profile.agents().iter().map(|f| ladder(f).0).collect()
}

/// Promotes a candidate to an obstruction when the sweep refutes EFX and
/// every agent stays within the level cap. The sweep runs first: it exits
/// on the first EFX allocation, which is the common case.
fn obstruction_from(profile: Profile, level_cap: usize) -> Result<Option<Obstruction>, MinerError> {
    let certificate = check_no_efx(&profile)?;
    if !certificate.no_efx {
        return Ok(None);
    }
    let level_counts: Vec<usize> = profile
        .agents()
        .iter()
        .map(|f| f.distinct_values().len())
        .collect();
    let max_levels = *level_counts.iter().max().expect("nonempty profile");
    if max_levels > level_cap || max_levels < 2 {
        return Ok(None);
    }
    let implied_bound = ExactValue::pow2(ratq(1, (max_levels - 1) as i64));
    Ok(Some(Obstruction {
        profile,
        level_counts,
        implied_bound,
        certificate,
    }))
}

/// Lexicographic odometer over monotone level vectors on `items` items
/// with the empty bundle pinned at 0 and levels below `level_cap`.
struct MonotoneVectors {
    levels: Vec<u32>,
    level_cap: u32,
}

impl MonotoneVectors {
    fn new(items: usize, level_cap: u32) -> Self {
        MonotoneVectors {
            levels: vec![0; 1 << items],
            level_cap,
        }
    }

    fn current(&self) -> &[u32] {
        &self.levels
    }

    fn floor(&self, mask: usize) -> u32 {
        let mut floor = 0;
        let mut rest = mask;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            floor = floor.max(self.levels[mask & !bit]);
            rest ^= bit;
        }
        floor
    }

    /// Advances to the lexicographically next vector; false on wrap back
    /// to the all-zero start.
    fn advance(&mut self) -> bool {
        let size = self.levels.len();
        let mut p = size - 1;
        while p >= 1 {
            if self.levels[p] + 1 < self.level_cap {
                self.levels[p] += 1;
                for q in p + 1..size {
                    self.levels[q] = self.floor(q);
                }
                return true;
            }
            p -= 1;
        }
        for q in 1..size {
            self.levels[q] = 0;
        }
        false
    }
}

/// Runs the configured search and returns every obstruction found within
/// budget, deduplicated up to relabeling and canonically ordered. The
/// output depends only on the spec.
pub fn mine(spec: &SearchSpec) -> Result<MineReport, MinerError> {
    if spec.agents == 0 {
        return Err(MinerError::NoAgents);
    }
    if spec.level_cap == 0 {
        return Err(MinerError::LevelCapZero);
    }

    let mut found: BTreeMap<(usize, Vec<Vec<u32>>), Obstruction> = BTreeMap::new();
    let mut consider = |profile: Profile| -> Result<(), MinerError> {
        if let Some(obstruction) = obstruction_from(profile, spec.level_cap)? {
            let key = (
                *obstruction.level_counts.iter().max().expect("nonempty"),
                canonical_key(
                    &canonical_levels(&obstruction.profile),
                    spec.ground.len(),
                ),
            );
            found.entry(key).or_insert(obstruction);
        }
        Ok(())
    };

    let mut examined = 0u64;
    let mut exhausted = false;

    match &spec.generator {
        Generator::ExhaustiveSmall => {
            let items = spec.ground.len();
            if items > MAX_EXHAUSTIVE_ITEMS {
                return Err(MinerError::ExhaustiveTooLarge { items });
            }
            let values = integer_values(spec.level_cap);
            let mut wheels: Vec<MonotoneVectors> = (0..spec.agents)
                .map(|_| MonotoneVectors::new(items, spec.level_cap as u32))
                .collect();
            'sweep: while examined < spec.budget {
                let per_agent: Vec<Vec<u32>> =
                    wheels.iter().map(|w| w.current().to_vec()).collect();
                consider(leveled_profile(&spec.ground, &per_agent, &values)?)?;
                examined += 1;
                // odometer carry: rightmost wheel spins fastest
                let mut wheel = wheels.len();
                loop {
                    if wheel == 0 {
                        exhausted = true;
                        break 'sweep;
                    }
                    wheel -= 1;
                    if wheels[wheel].advance() {
                        break;
                    }
                }
            }
        }
        Generator::PerturbInstance { base, max_flips } => {
            if *base.ground() != spec.ground {
                return Err(MinerError::GroundMismatch);
            }
            if base.agent_count() != spec.agents {
                return Err(MinerError::AgentCountMismatch {
                    expected: spec.agents,
                    got: base.agent_count(),
                });
            }
            if base.polarity() != Polarity::Chores {
                return Err(MinerError::NotChores);
            }
            let ladders: Vec<(Vec<u32>, Vec<ExactValue>)> =
                base.agents().iter().map(ladder).collect();
            let items = spec.ground.len();

            if spec.budget >= 1 {
                consider(base.clone())?;
                examined = 1;
            }
            if *max_flips == 0 {
                // the space is the base profile alone
                exhausted = spec.budget >= 1;
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
                while examined < spec.budget {
                    let mut per_agent: Vec<Vec<u32>> =
                        ladders.iter().map(|(levels, _)| levels.clone()).collect();
                    for _ in 0..rng.random_range(1..=*max_flips) {
                        let agent = rng.random_range(0..spec.agents);
                        let mask = rng.random_range(1..1u32 << items);
                        let slots = ladders[agent].1.len() as u32;
                        per_agent[agent][mask as usize] = rng.random_range(0..slots);
                    }
                    examined += 1;
                    if per_agent
                        .iter()
                        .any(|levels| first_monotone_break(levels, items).is_some())
                    {
                        continue;
                    }
                    let agents = per_agent
                        .into_iter()
                        .zip(&ladders)
                        .map(|(levels, (_, values))| {
                            SetFunction::leveled(spec.ground.clone(), levels, values.clone())
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    consider(Profile::new(agents, Polarity::Chores)?)?;
                }
            }
        }
        Generator::RandomMonotone => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            while examined < spec.budget {
                let profile =
                    random_monotone_profile(&mut rng, &spec.ground, spec.agents, spec.level_cap)?;
                examined += 1;
                consider(profile)?;
            }
        }
    }

    Ok(MineReport {
        obstructions: found.into_values().collect(),
        examined,
        exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efx::instance_threshold;
    use crate::instances::{build_four_level_ordinal, standard_ground};
    use crate::numeric::ExtendedValue;
    use crate::transform::rank_compress;

    fn small_ground(items: usize) -> GroundSet {
        GroundSet::new((0..items).map(|i| format!("g{i}")).collect()).unwrap()
    }

    fn spec(
        agents: usize,
        ground: GroundSet,
        level_cap: usize,
        generator: Generator,
        budget: u64,
    ) -> SearchSpec {
        SearchSpec {
            agents,
            ground,
            level_cap,
            generator,
            seed: 7,
            budget,
        }
    }

    #[test]
    fn two_agent_spaces_hold_no_obstruction() {
        // counts: monotone normalized vectors number 5 on two items with
        // two levels, 14 with three levels, 19 on three items with two
        for (items, cap, per_agent) in [(2usize, 2usize, 5u64), (2, 3, 14), (3, 2, 19)] {
            let report = mine(&spec(
                2,
                small_ground(items),
                cap,
                Generator::ExhaustiveSmall,
                1_000_000,
            ))
            .unwrap();
            assert!(report.obstructions.is_empty(), "m={items} cap={cap}");
            assert!(report.exhausted);
            assert_eq!(report.examined, per_agent * per_agent);
        }
    }

    #[test]
    fn two_agent_four_item_boolean_space_exhausts_empty() {
        let report = mine(&spec(
            2,
            small_ground(4),
            2,
            Generator::ExhaustiveSmall,
            1_000_000,
        ))
        .unwrap();
        assert!(report.obstructions.is_empty());
        assert!(report.exhausted);
        // 167 monotone boolean vectors with the empty bundle pinned
        assert_eq!(report.examined, 167 * 167);
    }

    #[test]
    fn budget_caps_the_sweep() {
        let report = mine(&spec(
            2,
            small_ground(3),
            3,
            Generator::ExhaustiveSmall,
            100,
        ))
        .unwrap();
        assert_eq!(report.examined, 100);
        assert!(!report.exhausted);

        let zero = mine(&spec(3, small_ground(3), 3, Generator::RandomMonotone, 0)).unwrap();
        assert!(zero.obstructions.is_empty());
        assert_eq!(zero.examined, 0);
        assert!(!zero.exhausted);
    }

    #[test]
    fn exhaustive_rejects_large_grounds() {
        assert!(matches!(
            mine(&spec(
                2,
                small_ground(5),
                2,
                Generator::ExhaustiveSmall,
                10
            )),
            Err(MinerError::ExhaustiveTooLarge { items: 5 })
        ));
    }

    #[test]
    fn perturb_with_zero_flips_returns_the_base() {
        let base = build_four_level_ordinal().profile;
        let report = mine(&spec(
            3,
            standard_ground(),
            4,
            Generator::PerturbInstance {
                base: base.clone(),
                max_flips: 0,
            },
            5,
        ))
        .unwrap();
        assert_eq!(report.examined, 1);
        assert!(report.exhausted);
        assert_eq!(report.obstructions.len(), 1);
        let hit = &report.obstructions[0];
        assert_eq!(hit.level_counts, vec![4, 4, 4]);
        assert_eq!(hit.implied_bound, ExactValue::pow2(ratq(1, 3)));
        assert!(hit.certificate.no_efx);
        for (agent, f) in hit.profile.agents().iter().enumerate() {
            assert_eq!(f.table(), base.agent(agent).table());
        }
    }

    #[test]
    fn perturbed_obstructions_compress_to_their_implied_bound() {
        let base = build_four_level_ordinal().profile;
        let report = mine(&spec(
            3,
            standard_ground(),
            4,
            Generator::PerturbInstance {
                base,
                max_flips: 2,
            },
            300,
        ))
        .unwrap();
        assert_eq!(report.examined, 300);
        assert!(!report.exhausted);
        assert!(!report.obstructions.is_empty());
        for hit in &report.obstructions {
            for f in hit.profile.agents() {
                assert!(f.check_normalized().holds);
                assert!(f.check_monotone().holds);
                assert!(f.distinct_values().len() <= 4);
            }
            assert!(hit.certificate.no_efx);
            let compressed = rank_compress(&hit.profile, None).unwrap();
            let threshold = instance_threshold(&compressed).unwrap();
            assert!(
                threshold.alpha_star >= ExtendedValue::Finite(hit.implied_bound.clone()),
                "threshold {} under bound {}",
                threshold.alpha_star,
                hit.implied_bound
            );
        }
    }

    #[test]
    fn mining_is_reproducible() {
        let run = || {
            mine(&spec(
                3,
                small_ground(4),
                3,
                Generator::RandomMonotone,
                120,
            ))
            .unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a.examined, b.examined);
        assert_eq!(a.exhausted, b.exhausted);
        assert_eq!(a.obstructions.len(), b.obstructions.len());
        for (x, y) in a.obstructions.iter().zip(&b.obstructions) {
            assert_eq!(canonical_levels(&x.profile), canonical_levels(&y.profile));
            assert_eq!(x.implied_bound, y.implied_bound);
        }
    }

    #[test]
    fn random_profiles_are_monotone_and_normalized() {
        let ground = small_ground(4);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let profile = random_monotone_profile(&mut rng, &ground, 3, 4).unwrap();
            for f in profile.agents() {
                assert!(f.check_normalized().holds);
                assert!(f.check_monotone().holds);
            }
        }
    }

    #[test]
    fn obstruction_order_is_canonical() {
        let base = build_four_level_ordinal().profile;
        let report = mine(&spec(
            3,
            standard_ground(),
            4,
            Generator::PerturbInstance {
                base,
                max_flips: 2,
            },
            300,
        ))
        .unwrap();
        let keys: Vec<(usize, Vec<Vec<u32>>)> = report
            .obstructions
            .iter()
            .map(|hit| {
                (
                    *hit.level_counts.iter().max().unwrap(),
                    canonical_key(&canonical_levels(&hit.profile), 6),
                )
            })
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted, "obstructions out of canonical order");
    }

    #[test]
    fn canonical_key_is_relabeling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let levels: Vec<Vec<u32>> = (0..3)
            .map(|_| random_monotone_levels(&mut rng, 3, 3))
            .collect();
        // swap agents 0 and 2, then relabel items by the cycle 0->1->2->0
        let perm = [1usize, 2, 0];
        let relabeled: Vec<Vec<u32>> = [2usize, 1, 0]
            .iter()
            .map(|&a| {
                let mut out = vec![0u32; levels[a].len()];
                for (mask, &level) in levels[a].iter().enumerate() {
                    out[apply_item_perm(mask, &perm)] = level;
                }
                out
            })
            .collect();
        assert_eq!(canonical_key(&levels, 3), canonical_key(&relabeled, 3));
    }

    #[test]
    fn perturb_levels_identity_and_rejections() {
        let base = build_four_level_ordinal().profile;
        let ground = base.ground().clone();

        let same = perturb_levels(&base, &[]).unwrap();
        for (agent, f) in same.agents().iter().enumerate() {
            assert_eq!(f.table(), base.agent(agent).table());
        }

        let heavy = Bundle::from_names(&["h"], &ground).unwrap();
        let lowered = perturb_levels(
            &base,
            &[LevelFlip {
                agent: 0,
                bundle: heavy,
                level: 1,
            }],
        )
        .unwrap();
        assert_eq!(
            lowered.agent(0).evaluate(heavy),
            ExactValue::one(),
            "the heavy singleton now sits one level down"
        );
        // the lowered profile admits an EFX allocation, so the flip
        // destroys the obstruction
        assert!(!check_no_efx(&lowered).unwrap().no_efx);

        let raise_empty = perturb_levels(
            &base,
            &[LevelFlip {
                agent: 1,
                bundle: Bundle::EMPTY,
                level: 1,
            }],
        );
        assert!(matches!(raise_empty, Err(MinerError::EmptyBundlePinned)));

        let noop_empty = perturb_levels(
            &base,
            &[LevelFlip {
                agent: 1,
                bundle: Bundle::EMPTY,
                level: 0,
            }],
        );
        assert!(noop_empty.is_ok());

        let pair = Bundle::from_names(&["h", "l1"], &ground).unwrap();
        let broken = perturb_levels(
            &base,
            &[LevelFlip {
                agent: 0,
                bundle: pair,
                level: 0,
            }],
        );
        match broken {
            Err(MinerError::MonotoneBreak { agent, lower, upper }) => {
                assert_eq!(agent, 0);
                assert_eq!(lower, "h");
                assert_eq!(upper, "h,l1");
            }
            other => panic!("expected a monotone break, got {other:?}"),
        }

        let out_of_range = perturb_levels(
            &base,
            &[LevelFlip {
                agent: 0,
                bundle: heavy,
                level: 9,
            }],
        );
        assert!(matches!(
            out_of_range,
            Err(MinerError::FlipOutOfRange {
                agent: 0,
                level: 9,
                levels: 4
            })
        ));

        let bad_agent = perturb_levels(
            &base,
            &[LevelFlip {
                agent: 5,
                bundle: heavy,
                level: 1,
            }],
        );
        assert!(matches!(
            bad_agent,
            Err(MinerError::AgentOutOfRange { agent: 5, agents: 3 })
        ));
    }
}
