//! Allocation enumeration, alpha-EFX checking for chores and goods, and
//! exact instance thresholds.
//!
//! Chores: an allocation X is alpha-EFX when for every agent i, chore
//! e in X_i, and rival j, `c_i(X_i \ e) <= alpha * c_i(X_j)` (alpha >= 1).
//! Goods: `v_i(X_i) >= alpha * v_i(X_j \ g)` for every g in X_j
//! (0 < alpha <= 1). Everything here is decided in exact arithmetic; the
//! instance threshold `alpha_star` is the least alpha some allocation
//! attains, so no allocation is alpha-EFX for any alpha below it.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

use crate::numeric::{ratio, ExactValue, ExtendedValue};
use crate::setfn::{Bundle, GroundSet, Polarity, Profile};

/// Hard cap on `agents^items` for exhaustive sweeps.
pub const MAX_ALLOCATIONS: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EfxError {
    #[error("chores analysis needs a chores profile")]
    NotChores,
    #[error("need at least one agent")]
    NoAgents,
    #[error("allocation space {agents}^{items} exceeds the {MAX_ALLOCATIONS} limit")]
    SpaceTooLarge { agents: usize, items: usize },
    #[error("allocation assigns {got} items, the profile has {expected}")]
    ItemCountMismatch { expected: usize, got: usize },
    #[error("allocation names agent {agent}, the profile has {agents}")]
    AgentOutOfRange { agent: usize, agents: usize },
    #[error("chores alpha must be at least 1, got {0}")]
    AlphaBelowOne(ExactValue),
    #[error("goods alpha must lie in (0, 1], got {0}")]
    AlphaOutOfUnitRange(ExactValue),
}

/// A partition of the items into labeled, possibly empty bundles:
/// `assignment[item] = agent`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Allocation {
    assignment: Vec<usize>,
}

impl Allocation {
    pub fn new(assignment: Vec<usize>, agents: usize) -> Result<Self, EfxError> {
        if agents == 0 {
            return Err(EfxError::NoAgents);
        }
        if let Some(&bad) = assignment.iter().find(|&&a| a >= agents) {
            return Err(EfxError::AgentOutOfRange { agent: bad, agents });
        }
        Ok(Allocation { assignment })
    }

    /// Decodes the index as a base-`agents` word, item 0 most significant,
    /// so index order equals lexicographic order of the assignment word.
    pub fn from_index(mut index: u64, agents: usize, items: usize) -> Self {
        let mut assignment = vec![0usize; items];
        for slot in assignment.iter_mut().rev() {
            *slot = (index % agents as u64) as usize;
            index /= agents as u64;
        }
        debug_assert_eq!(index, 0, "index outside the allocation space");
        Allocation { assignment }
    }

    pub fn index(&self, agents: usize) -> u64 {
        self.assignment
            .iter()
            .fold(0u64, |acc, &a| acc * agents as u64 + a as u64)
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn items(&self) -> usize {
        self.assignment.len()
    }

    pub fn agent_of(&self, item: usize) -> usize {
        self.assignment[item]
    }

    /// Bundle mask per agent.
    pub fn bundle_masks(&self, agents: usize) -> Vec<u32> {
        let mut masks = vec![0u32; agents];
        for (item, &a) in self.assignment.iter().enumerate() {
            masks[a] |= 1 << item;
        }
        masks
    }

    pub fn bundles(&self, agents: usize, ground: &GroundSet) -> Vec<Bundle> {
        self.bundle_masks(agents)
            .into_iter()
            .map(|m| Bundle::from_mask(m, ground).expect("assignment masks stay in range"))
            .collect()
    }
}

impl fmt::Display for Allocation {
    /// Compact digit word for up to ten agents, comma-separated beyond.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.assignment.iter().all(|&a| a < 10) {
            for a in &self.assignment {
                write!(f, "{a}")?;
            }
            Ok(())
        } else {
            let words: Vec<String> = self.assignment.iter().map(|a| a.to_string()).collect();
            write!(f, "{}", words.join(","))
        }
    }
}

fn allocation_count(agents: usize, items: usize) -> Result<u64, EfxError> {
    if agents == 0 {
        return Err(EfxError::NoAgents);
    }
    (agents as u128)
        .checked_pow(items as u32)
        .filter(|&c| c <= MAX_ALLOCATIONS as u128)
        .map(|c| c as u64)
        .ok_or(EfxError::SpaceTooLarge { agents, items })
}

/// All `agents^items` labeled allocations, in lexicographic order of the
/// assignment word; refuses spaces above [`MAX_ALLOCATIONS`].
pub fn enumerate_allocations(
    agents: usize,
    ground: &GroundSet,
) -> Result<impl Iterator<Item = Allocation>, EfxError> {
    let items = ground.len();
    let count = allocation_count(agents, items)?;
    Ok((0..count).map(move |i| Allocation::from_index(i, agents, items)))
}

/// One envy-ceiling violation: after removing `item`, agent `envier`
/// still compares unfavorably against `rival`'s bundle.
///
/// For chores, `item` comes out of the envier's own bundle:
/// `envier_value = c_i(X_i \ e)` and `rival_value = c_i(X_j)`. For goods,
/// `item` comes out of the rival's bundle: `envier_value = v_i(X_i)` and
/// `rival_value = v_i(X_j \ g)`. Either way
/// `ratio = envier_value / rival_value` under the zero conventions of
/// [`ratio`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ViolationWitness {
    pub envier: usize,
    pub item: usize,
    pub rival: usize,
    pub envier_value: ExactValue,
    pub rival_value: ExactValue,
    pub ratio: ExtendedValue,
}

fn validate_allocation(profile: &Profile, x: &Allocation) -> Result<(), EfxError> {
    let expected = profile.ground().len();
    if x.items() != expected {
        return Err(EfxError::ItemCountMismatch {
            expected,
            got: x.items(),
        });
    }
    let agents = profile.agent_count();
    if let Some(&bad) = x.assignment().iter().find(|&&a| a >= agents) {
        return Err(EfxError::AgentOutOfRange { agent: bad, agents });
    }
    Ok(())
}

/// The least alpha for which `x` is alpha-EFX on a chores profile: the
/// maximum of `c_i(X_i \ e) / c_i(X_j)` over agents i, chores e in X_i,
/// rivals j, clamped below at `Finite(1)` (the smallest legal chores
/// alpha, attained when every constraint is slack or vacuous).
pub fn critical_alpha_chores(profile: &Profile, x: &Allocation) -> Result<ExtendedValue, EfxError> {
    if profile.polarity() != Polarity::Chores {
        return Err(EfxError::NotChores);
    }
    validate_allocation(profile, x)?;
    let n = profile.agent_count();
    let masks = x.bundle_masks(n);
    let mut worst = ExtendedValue::Finite(ExactValue::one());
    for i in 0..n {
        if n == 1 || masks[i] == 0 {
            continue;
        }
        let f = profile.agent(i);
        let ground = profile.ground();
        // the ratio is monotone in both arguments, so the largest residual
        // against the cheapest rival bundle attains agent i's worst case
        let min_rival = (0..n)
            .filter(|&j| j != i)
            .map(|j| f.evaluate(Bundle::from_mask(masks[j], ground).expect("mask in range")))
            .min()
            .expect("a rival exists");
        let max_residual = Bundle::from_mask(masks[i], ground)
            .expect("mask in range")
            .items()
            .map(|e| {
                f.evaluate(Bundle::from_mask(masks[i] & !(1 << e), ground).expect("mask in range"))
            })
            .max()
            .expect("own bundle is nonempty");
        let r = ratio(&max_residual, &min_rival);
        if r > worst {
            worst = r;
        }
    }
    Ok(worst)
}

/// Decides whether `x` is alpha-EFX. `Ok(None)` means it is; otherwise the
/// lexicographically first violating `(envier, item, rival)` triple is
/// returned. Chores require `alpha >= 1`, goods `0 < alpha <= 1`.
pub fn is_alpha_efx(
    profile: &Profile,
    x: &Allocation,
    alpha: &ExactValue,
) -> Result<Option<ViolationWitness>, EfxError> {
    validate_allocation(profile, x)?;
    match profile.polarity() {
        Polarity::Chores => {
            if *alpha < ExactValue::one() {
                return Err(EfxError::AlphaBelowOne(alpha.clone()));
            }
            Ok(chores_violation(profile, x, alpha))
        }
        Polarity::Goods => {
            if alpha.is_zero() || *alpha > ExactValue::one() {
                return Err(EfxError::AlphaOutOfUnitRange(alpha.clone()));
            }
            Ok(goods_violation(profile, x, alpha))
        }
    }
}

fn chores_violation(profile: &Profile, x: &Allocation, alpha: &ExactValue) -> Option<ViolationWitness> {
    let n = profile.agent_count();
    let ground = profile.ground();
    let masks = x.bundle_masks(n);
    let bundle = |mask: u32| Bundle::from_mask(mask, ground).expect("mask in range");
    for i in 0..n {
        let f = profile.agent(i);
        for e in bundle(masks[i]).items() {
            let residual = f.evaluate(bundle(masks[i] & !(1 << e)));
            for (j, &rival_mask) in masks.iter().enumerate() {
                if j == i {
                    continue;
                }
                let rival = f.evaluate(bundle(rival_mask));
                // violated iff c_i(X_i \ e) > alpha * c_i(X_j), exactly
                if residual > alpha.mul(&rival) {
                    return Some(ViolationWitness {
                        envier: i,
                        item: e,
                        rival: j,
                        ratio: ratio(&residual, &rival),
                        envier_value: residual,
                        rival_value: rival,
                    });
                }
            }
        }
    }
    None
}

fn goods_violation(profile: &Profile, x: &Allocation, alpha: &ExactValue) -> Option<ViolationWitness> {
    let n = profile.agent_count();
    let ground = profile.ground();
    let masks = x.bundle_masks(n);
    let bundle = |mask: u32| Bundle::from_mask(mask, ground).expect("mask in range");
    for i in 0..n {
        let f = profile.agent(i);
        let own = f.evaluate(bundle(masks[i]));
        // the item g determines the rival bundle it is removed from
        for (g, &j) in x.assignment().iter().enumerate() {
            if j == i {
                continue;
            }
            let reduced = f.evaluate(bundle(masks[j] & !(1 << g)));
            if own < alpha.mul(&reduced) {
                return Some(ViolationWitness {
                    envier: i,
                    item: g,
                    rival: j,
                    ratio: ratio(&own, &reduced),
                    envier_value: own,
                    rival_value: reduced,
                });
            }
        }
    }
    None
}

/// Exhaustive-sweep result: the exact threshold `alpha_star` together with
/// the lexicographically first allocation attaining it.
#[derive(Clone, Debug)]
pub struct ThresholdReport {
    pub alpha_star: ExtendedValue,
    pub argmin: Allocation,
    pub allocations: u64,
    /// Critical alpha per allocation index; opt-in, one entry per
    /// allocation.
    pub table: Option<Vec<ExtendedValue>>,
    pub elapsed: Duration,
    pub workers: usize,
}

#[derive(Clone, Debug)]
pub struct ThresholdOptions {
    /// Worker thread count; 0 picks a machine-dependent default. The
    /// result is identical for every worker count.
    pub workers: usize,
    pub collect_table: bool,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        ThresholdOptions {
            workers: 0,
            collect_table: false,
        }
    }
}

/// Exhaustive-sweep result of the plain EFX (alpha = 1) decision.
#[derive(Clone, Debug)]
pub struct NoEfxReport {
    /// True when no allocation is EFX, i.e. `alpha_star > 1`.
    pub no_efx: bool,
    pub alpha_star: ExtendedValue,
    pub allocations: u64,
    /// When `no_efx`: the lexicographically first EFX violation of every
    /// allocation, indexed by allocation index.
    pub certificate: Option<Vec<ViolationWitness>>,
    /// Otherwise: the lexicographically first EFX allocation.
    pub efx_allocation: Option<Allocation>,
}

/// Per-agent value lookup for sweeps: every bundle's level among the
/// agent's sorted distinct values. Level comparisons replace value
/// comparisons within one agent.
struct LevelTables {
    levels: Vec<Vec<u32>>,
    values: Vec<Vec<ExactValue>>,
}

impl LevelTables {
    fn build(profile: &Profile) -> Self {
        let mut levels = Vec::new();
        let mut values = Vec::new();
        for f in profile.agents() {
            let table = f.table();
            let distinct: Vec<ExactValue> = table
                .iter()
                .cloned()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            levels.push(
                table
                    .iter()
                    .map(|v| distinct.binary_search(v).expect("value present") as u32)
                    .collect(),
            );
            values.push(distinct);
        }
        LevelTables { levels, values }
    }

    fn value(&self, agent: usize, mask: u32) -> &ExactValue {
        &self.values[agent][self.levels[agent][mask as usize] as usize]
    }

    /// Critical alpha of the allocation given as bundle masks.
    fn critical(&self, masks: &[u32]) -> ExtendedValue {
        let n = masks.len();
        let mut worst = ExtendedValue::Finite(ExactValue::one());
        for (i, levels) in self.levels.iter().enumerate() {
            if n == 1 || masks[i] == 0 {
                continue;
            }
            let min_rival_level = (0..n)
                .filter(|&j| j != i)
                .map(|j| levels[masks[j] as usize])
                .min()
                .expect("a rival exists");
            let mut own = masks[i];
            let mut max_residual_level = 0;
            while own != 0 {
                let bit = own & own.wrapping_neg();
                max_residual_level = max_residual_level.max(levels[(masks[i] & !bit) as usize]);
                own ^= bit;
            }
            let r = ratio(
                &self.values[i][max_residual_level as usize],
                &self.values[i][min_rival_level as usize],
            );
            if r > worst {
                worst = r;
            }
        }
        worst
    }

    /// Lex-first EFX violation (alpha = 1) of the allocation, if any.
    /// Within one agent the comparison is a level comparison.
    fn first_violation(&self, masks: &[u32]) -> Option<ViolationWitness> {
        let n = masks.len();
        for i in 0..n {
            let levels = &self.levels[i];
            let mut own = masks[i];
            while own != 0 {
                let bit = own & own.wrapping_neg();
                let residual_level = levels[(masks[i] & !bit) as usize];
                for (j, &rival_mask) in masks.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    if residual_level > levels[rival_mask as usize] {
                        let envier_value = self.value(i, masks[i] & !bit).clone();
                        let rival_value = self.value(i, rival_mask).clone();
                        return Some(ViolationWitness {
                            envier: i,
                            item: bit.trailing_zeros() as usize,
                            rival: j,
                            ratio: ratio(&envier_value, &rival_value),
                            envier_value,
                            rival_value,
                        });
                    }
                }
                own ^= bit;
            }
        }
        None
    }
}

/// Base-`agents` odometer over assignment words; keeps bundle masks in
/// step with the word so each advance is amortized O(1).
struct Odometer {
    digits: Vec<usize>,
    masks: Vec<u32>,
    agents: usize,
}

impl Odometer {
    fn new(index: u64, agents: usize, items: usize) -> Self {
        let a = Allocation::from_index(index, agents, items);
        let masks = a.bundle_masks(agents);
        Odometer {
            digits: a.assignment,
            masks,
            agents,
        }
    }

    fn masks(&self) -> &[u32] {
        &self.masks
    }

    fn advance(&mut self) {
        for pos in (0..self.digits.len()).rev() {
            let bit = 1u32 << pos;
            let d = self.digits[pos];
            self.masks[d] &= !bit;
            if d + 1 < self.agents {
                self.digits[pos] = d + 1;
                self.masks[d + 1] |= bit;
                return;
            }
            self.digits[pos] = 0;
            self.masks[0] |= bit;
        }
    }
}

fn split_ranges(count: u64, workers: usize) -> Vec<(u64, u64)> {
    let workers = workers.max(1) as u64;
    let base = count / workers;
    let extra = count % workers;
    let mut ranges = Vec::new();
    let mut start = 0;
    for w in 0..workers {
        let len = base + u64::from(w < extra);
        if len > 0 {
            ranges.push((start, start + len));
            start += len;
        }
    }
    ranges
}

fn effective_workers(requested: usize, count: u64) -> usize {
    if requested > 0 {
        // honor explicit counts exactly (the result never depends on them)
        return requested.min(count.max(1) as usize);
    }
    let auto = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(8);
    // below this size, spawning costs more than it saves
    if count < 4096 {
        1
    } else {
        auto.min(count as usize)
    }
}

/// Exact instance threshold by exhaustive sweep:
/// `alpha_star = min over allocations of critical_alpha_chores`. No
/// allocation is alpha-EFX for alpha < alpha_star; the reported argmin is
/// alpha-EFX for every alpha >= alpha_star when alpha_star is finite. The
/// result does not depend on the worker count.
pub fn instance_threshold(profile: &Profile) -> Result<ThresholdReport, EfxError> {
    instance_threshold_with(profile, &ThresholdOptions::default())
}

pub fn instance_threshold_with(
    profile: &Profile,
    options: &ThresholdOptions,
) -> Result<ThresholdReport, EfxError> {
    if profile.polarity() != Polarity::Chores {
        return Err(EfxError::NotChores);
    }
    let n = profile.agent_count();
    let m = profile.ground().len();
    let count = allocation_count(n, m)?;
    let started = Instant::now();
    let tables = LevelTables::build(profile);
    let workers = effective_workers(options.workers, count);
    let ranges = split_ranges(count, workers);

    struct RangeResult {
        best: ExtendedValue,
        argmin: u64,
        chunk: Option<Vec<ExtendedValue>>,
    }

    let scan_range = |start: u64, end: u64| -> RangeResult {
        let mut odo = Odometer::new(start, n, m);
        let mut best: Option<(ExtendedValue, u64)> = None;
        let mut chunk = options.collect_table.then(Vec::new);
        for index in start..end {
            let critical = tables.critical(odo.masks());
            if best.as_ref().is_none_or(|(b, _)| critical < *b) {
                best = Some((critical.clone(), index));
            }
            if let Some(c) = &mut chunk {
                c.push(critical);
            }
            odo.advance();
        }
        let (best, argmin) = best.expect("ranges are nonempty");
        RangeResult { best, argmin, chunk }
    };

    let results: Vec<RangeResult> = if ranges.len() == 1 {
        let (s, e) = ranges[0];
        vec![scan_range(s, e)]
    } else {
        let scan = &scan_range;
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&(s, e)| scope.spawn(move || scan(s, e)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };

    // merge in range order; strict improvement keeps the lex-first argmin
    let mut alpha_star: Option<(ExtendedValue, u64)> = None;
    let mut table = options.collect_table.then(Vec::new);
    for r in results {
        if alpha_star.as_ref().is_none_or(|(b, _)| r.best < *b) {
            alpha_star = Some((r.best, r.argmin));
        }
        if let (Some(t), Some(c)) = (&mut table, r.chunk) {
            t.extend(c);
        }
    }
    let (alpha_star, argmin) = alpha_star.expect("at least one allocation");
    Ok(ThresholdReport {
        alpha_star,
        argmin: Allocation::from_index(argmin, n, m),
        allocations: count,
        table,
        elapsed: started.elapsed(),
        workers,
    })
}

/// Decides whether the profile admits any EFX allocation, by exhaustive
/// sweep. When none exists the report carries one violation witness per
/// allocation; otherwise it names the lexicographically first EFX
/// allocation. The result does not depend on the worker count.
pub fn check_no_efx(profile: &Profile) -> Result<NoEfxReport, EfxError> {
    check_no_efx_with(profile, 0)
}

pub fn check_no_efx_with(profile: &Profile, workers: usize) -> Result<NoEfxReport, EfxError> {
    if profile.polarity() != Polarity::Chores {
        return Err(EfxError::NotChores);
    }
    let n = profile.agent_count();
    let m = profile.ground().len();
    let count = allocation_count(n, m)?;
    let tables = LevelTables::build(profile);
    let workers = effective_workers(workers, count);
    let ranges = split_ranges(count, workers);

    // smallest EFX allocation index found so far, shared so that ranges
    // past it can stop early; monotone decreasing, correctness does not
    // depend on timing
    let first_efx = AtomicU64::new(u64::MAX);

    struct RangeResult {
        best: Option<ExtendedValue>,
        witnesses: Vec<ViolationWitness>,
        efx_at: Option<u64>,
    }

    let one = ExtendedValue::Finite(ExactValue::one());
    let scan_range = |start: u64, end: u64| -> RangeResult {
        let mut odo = Odometer::new(start, n, m);
        let mut best: Option<ExtendedValue> = None;
        let mut witnesses = Vec::new();
        for index in start..end {
            if index % 4096 == 0 && first_efx.load(AtomicOrdering::Relaxed) < start {
                // everything this range could report is already moot
                return RangeResult {
                    best: None,
                    witnesses: Vec::new(),
                    efx_at: None,
                };
            }
            match tables.first_violation(odo.masks()) {
                Some(w) => {
                    witnesses.push(w);
                    let critical = tables.critical(odo.masks());
                    if best.as_ref().is_none_or(|b| critical < *b) {
                        best = Some(critical);
                    }
                }
                None => {
                    first_efx.fetch_min(index, AtomicOrdering::Relaxed);
                    return RangeResult {
                        best: None,
                        witnesses: Vec::new(),
                        efx_at: Some(index),
                    };
                }
            }
            odo.advance();
        }
        RangeResult {
            best,
            witnesses,
            efx_at: None,
        }
    };

    let results: Vec<RangeResult> = if ranges.len() == 1 {
        let (s, e) = ranges[0];
        vec![scan_range(s, e)]
    } else {
        let scan = &scan_range;
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&(s, e)| scope.spawn(move || scan(s, e)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };

    let efx_index = results.iter().filter_map(|r| r.efx_at).min();
    if let Some(index) = efx_index {
        return Ok(NoEfxReport {
            no_efx: false,
            // the EFX allocation attains the clamp, so the minimum is 1
            alpha_star: one,
            allocations: count,
            certificate: None,
            efx_allocation: Some(Allocation::from_index(index, n, m)),
        });
    }

    let mut alpha_star: Option<ExtendedValue> = None;
    let mut certificate = Vec::with_capacity(count as usize);
    for r in results {
        if let Some(b) = r.best {
            if alpha_star.as_ref().is_none_or(|cur| b < *cur) {
                alpha_star = Some(b);
            }
        }
        certificate.extend(r.witnesses);
    }
    debug_assert_eq!(certificate.len() as u64, count);
    Ok(NoEfxReport {
        no_efx: true,
        alpha_star: alpha_star.expect("at least one allocation"),
        allocations: count,
        certificate: Some(certificate),
        efx_allocation: None,
    })
}
