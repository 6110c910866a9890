//! Transforms between ordinal profiles (only the ordering of bundle values
//! matters) and cardinal ones with controlled envy-ratio structure.
//!
//! The central map is [`rank_compress`]: it replaces each agent's values by
//! a geometric ladder `1/2 * lambda^rank` with `lambda = 2^(1/(L-1))`, so
//! every strict ordinal gap becomes a multiplicative gap of at least
//! `lambda` while the whole range stays inside `[1/2, 1]`, keeping the
//! output subadditive regardless of the input's cardinal structure.

use crate::numeric::{rat, ExactValue};
use crate::setfn::{
    Bundle, ClassWitness, CoverageAtom, GroundSet, Polarity, Profile, SetFnError, SetFunction,
    MAX_PAIR_SCAN_ITEMS,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("rank compression needs a chores profile")]
    NotChores,
    #[error("agent {agent} is not monotone")]
    NotMonotone { agent: usize, witness: ClassWitness },
    #[error("level bound {bound} is below the {required} distinct levels present")]
    LevelBoundTooSmall { bound: usize, required: usize },
    #[error("profile has a single level; compression needs at least two")]
    SingleLevel,
    #[error("profiles live on different ground sets")]
    GroundMismatch,
    #[error("profiles have {left} vs {right} agents")]
    AgentCountMismatch { left: usize, right: usize },
    #[error("agent {agent} separates {finer:?} above {coarser:?} ordinally but gives it cardinal value 0")]
    SeparationBroken {
        agent: usize,
        finer: Bundle,
        coarser: Bundle,
    },
    #[error("no ordinally separated pair with positive cardinal values; separation factor undefined")]
    NoSeparatedPairs,
    #[error("all-pairs scan over {items} items exceeds the {max}-item limit")]
    PairScanTooLarge { items: usize, max: usize },
    #[error(transparent)]
    Function(#[from] SetFnError),
}

/// Per-agent distinct nonempty values in increasing order, plus the rank of
/// every nonempty bundle's value among them.
#[derive(Clone, Debug)]
pub struct RankTable {
    per_agent: Vec<AgentRanks>,
}

#[derive(Clone, Debug)]
pub struct AgentRanks {
    /// Distinct values over nonempty bundles, ascending.
    pub values: Vec<ExactValue>,
    ranks: Vec<u32>,
}

impl AgentRanks {
    /// Rank of a nonempty bundle's value; panics on the empty bundle,
    /// which has no rank.
    pub fn rank(&self, bundle: Bundle) -> u32 {
        assert!(!bundle.is_empty(), "the empty bundle is not ranked");
        self.ranks[bundle.mask() as usize]
    }

    pub fn level_count(&self) -> usize {
        self.values.len()
    }
}

impl RankTable {
    pub fn agent(&self, i: usize) -> &AgentRanks {
        &self.per_agent[i]
    }

    pub fn max_level_count(&self) -> usize {
        self.per_agent
            .iter()
            .map(AgentRanks::level_count)
            .max()
            .unwrap_or(0)
    }
}

/// Builds the rank table of a profile (any polarity; no monotonicity
/// required at this level).
pub fn build_rank_table(profile: &Profile) -> RankTable {
    let per_agent = profile
        .agents()
        .iter()
        .map(|f| {
            let values = f.distinct_values();
            let ranks = f
                .ground()
                .bundles()
                .map(|b| {
                    if b.is_empty() {
                        0
                    } else {
                        values
                            .binary_search(&f.evaluate(b))
                            .expect("value present in distinct list") as u32
                    }
                })
                .collect();
            AgentRanks { values, ranks }
        })
        .collect();
    RankTable { per_agent }
}

/// Compresses a monotone chores profile onto the ladder
/// `empty -> 0`, `nonempty S -> 1/2 * lambda^rank(S)` with
/// `lambda = 2^(1/(L-1))` and `L` the level bound (default: the largest
/// per-agent number of distinct nonempty values).
///
/// The output is normalized, monotone, and subadditive by construction
/// (nonempty values lie in `[1/2, 1]`), and adjacent ranks are exactly a
/// factor `lambda` apart, so any envy violation of the input transfers to
/// a violation by a factor of at least `lambda`.
pub fn rank_compress(
    profile: &Profile,
    level_bound: Option<usize>,
) -> Result<Profile, TransformError> {
    if profile.polarity() != Polarity::Chores {
        return Err(TransformError::NotChores);
    }
    for (i, f) in profile.agents().iter().enumerate() {
        let rep = f.check_monotone();
        if !rep.holds {
            return Err(TransformError::NotMonotone {
                agent: i,
                witness: rep.witness.expect("violated report carries a witness"),
            });
        }
    }
    let table = build_rank_table(profile);
    let required = table.max_level_count();
    let level_bound = level_bound.unwrap_or(required);
    if level_bound < required {
        return Err(TransformError::LevelBoundTooSmall {
            bound: level_bound,
            required,
        });
    }
    if level_bound < 2 {
        return Err(TransformError::SingleLevel);
    }

    let denom = rat(level_bound as i64 - 1);
    let agents = profile
        .agents()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let ranks = table.agent(i);
            // value list: 0 for the empty bundle, then the ladder
            let mut values = vec![ExactValue::zero()];
            for r in 0..ranks.level_count() {
                values.push(ExactValue::pow2(rat(r as i64) / &denom - rat(1)));
            }
            let levels = f
                .ground()
                .bundles()
                .map(|b| if b.is_empty() { 0 } else { ranks.rank(b) + 1 })
                .collect();
            SetFunction::leveled(f.ground().clone(), levels, values)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Profile::new(agents, Polarity::Chores)?)
}

/// Builds a weighted coverage function; fails on atoms outside the ground
/// set (weights are nonnegative by type).
pub fn coverage_from_atoms(
    ground: GroundSet,
    atoms: Vec<CoverageAtom>,
) -> Result<SetFunction, TransformError> {
    Ok(SetFunction::coverage(ground, atoms)?)
}

/// The largest `gamma` such that `c_i(S) >= gamma * c_i(T)` whenever agent
/// `i` ranks `S` strictly above `T` ordinally, i.e. the minimum ratio
/// `c_i(S) / c_i(T)` over those pairs.
///
/// Pairs with `c_i(T) = 0` put no upper bound on `gamma` and are skipped,
/// but a separated pair with `c_i(S) = 0` makes every positive `gamma`
/// fail, which is reported as a broken separation.
pub fn separation_factor(
    ordinal: &Profile,
    cardinal: &Profile,
) -> Result<ExactValue, TransformError> {
    if ordinal.ground() != cardinal.ground() {
        return Err(TransformError::GroundMismatch);
    }
    if ordinal.agent_count() != cardinal.agent_count() {
        return Err(TransformError::AgentCountMismatch {
            left: ordinal.agent_count(),
            right: cardinal.agent_count(),
        });
    }
    let m = ordinal.ground().len();
    if m > MAX_PAIR_SCAN_ITEMS {
        return Err(TransformError::PairScanTooLarge {
            items: m,
            max: MAX_PAIR_SCAN_ITEMS,
        });
    }
    let mut best: Option<ExactValue> = None;
    for (i, (d, c)) in ordinal
        .agents()
        .iter()
        .zip(cardinal.agents())
        .enumerate()
    {
        let d_table = d.table();
        let c_table = c.table();
        for s in ordinal.ground().bundles() {
            for t in ordinal.ground().bundles() {
                if d_table[s.mask() as usize] <= d_table[t.mask() as usize] {
                    continue;
                }
                let cs = &c_table[s.mask() as usize];
                if cs.is_zero() {
                    return Err(TransformError::SeparationBroken {
                        agent: i,
                        finer: s,
                        coarser: t,
                    });
                }
                let ct = &c_table[t.mask() as usize];
                if ct.is_zero() {
                    continue;
                }
                let r = ExactValue::new(
                    cs.mantissa() / ct.mantissa(),
                    cs.exponent() - ct.exponent(),
                );
                if best.as_ref().is_none_or(|b| r < *b) {
                    best = Some(r);
                }
            }
        }
    }
    best.ok_or(TransformError::NoSeparatedPairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratq;

    fn ev(s: &str) -> ExactValue {
        s.parse().unwrap()
    }

    fn ground_xy() -> GroundSet {
        GroundSet::new(vec!["x", "y"]).unwrap()
    }

    fn dense(values: &[&str]) -> SetFunction {
        let g = ground_xy();
        SetFunction::dense(g, values.iter().map(|s| ev(s)).collect()).unwrap()
    }

    fn chores(agents: Vec<SetFunction>) -> Profile {
        Profile::new(agents, Polarity::Chores).unwrap()
    }

    #[test]
    fn compression_builds_the_geometric_ladder() {
        // two levels {1, 5} -> 1/2 and 1, lambda = 2
        let p = chores(vec![dense(&["0", "1", "1", "5"])]);
        let out = rank_compress(&p, None).unwrap();
        let f = out.agent(0);
        let g = ground_xy();
        assert_eq!(f.evaluate(Bundle::EMPTY), ev("0"));
        assert_eq!(f.evaluate(Bundle::from_names(&["x"], &g).unwrap()), ev("1/2"));
        assert_eq!(f.evaluate(g.full_bundle()), ev("1"));

        // three levels with an explicit larger bound: lambda = 2^(1/3)
        let p = chores(vec![dense(&["0", "1", "2", "5"])]);
        let out = rank_compress(&p, Some(4)).unwrap();
        let f = out.agent(0);
        assert_eq!(f.evaluate(Bundle::from_names(&["x"], &g).unwrap()), ev("1/2"));
        assert_eq!(f.evaluate(Bundle::from_names(&["y"], &g).unwrap()), ev("2^(-2/3)"));
        assert_eq!(f.evaluate(g.full_bundle()), ev("2^(-1/3)"));
    }

    #[test]
    fn compression_handles_one_level_profiles() {
        let p = chores(vec![dense(&["0", "5", "5", "5"])]);
        // default bound is the single present level: undefined ladder
        assert_eq!(rank_compress(&p, None), Err(TransformError::SingleLevel));
        // an explicit bound of 2 compresses everything to 1/2
        let out = rank_compress(&p, Some(2)).unwrap();
        for b in out.ground().bundles().filter(|b| !b.is_empty()) {
            assert_eq!(out.agent(0).evaluate(b), ev("1/2"));
        }
    }

    #[test]
    fn compression_rejections() {
        let p = chores(vec![dense(&["0", "2", "0", "1"])]);
        match rank_compress(&p, None) {
            Err(TransformError::NotMonotone { agent: 0, witness }) => {
                assert_eq!(witness.bundles.len(), 2);
            }
            other => panic!("expected a monotonicity rejection, got {other:?}"),
        }

        let p = chores(vec![dense(&["0", "1", "2", "5"])]);
        assert_eq!(
            rank_compress(&p, Some(2)),
            Err(TransformError::LevelBoundTooSmall {
                bound: 2,
                required: 3
            })
        );

        let goods = Profile::new(vec![dense(&["0", "1", "1", "2"])], Polarity::Goods).unwrap();
        assert_eq!(rank_compress(&goods, None), Err(TransformError::NotChores));
    }

    #[test]
    fn compressed_profiles_pass_the_standard_checks() {
        let p = chores(vec![dense(&["0", "1", "3", "7"]), dense(&["0", "2", "2", "4"])]);
        let out = rank_compress(&p, None).unwrap();
        for f in out.agents() {
            assert!(f.check_normalized().holds);
            assert!(f.check_monotone().holds);
            assert!(f.check_subadditive().unwrap().holds);
        }
    }

    #[test]
    fn rank_table_reports_levels() {
        let p = chores(vec![dense(&["0", "1", "1", "5"]), dense(&["0", "1", "2", "5"])]);
        let t = build_rank_table(&p);
        assert_eq!(t.agent(0).level_count(), 2);
        assert_eq!(t.agent(1).level_count(), 3);
        assert_eq!(t.max_level_count(), 3);
        let g = ground_xy();
        assert_eq!(t.agent(1).rank(Bundle::from_names(&["y"], &g).unwrap()), 1);
        assert_eq!(t.agent(1).rank(g.full_bundle()), 2);
    }

    #[test]
    fn separation_factor_minimum_ratio() {
        // ordinal levels 0/1/1/2, cardinal 0/2/3/4:
        // separated pairs: x>empty (skip, c=0), y>empty (skip), xy>x: 4/2,
        // xy>y: 4/3 -> minimum 4/3
        let d = dense(&["0", "1", "1", "2"]);
        let c = dense(&["0", "2", "3", "4"]);
        let got = separation_factor(&chores(vec![d]), &chores(vec![c])).unwrap();
        assert_eq!(got, ev("4/3"));
    }

    #[test]
    fn separation_factor_against_itself_is_min_adjacent_gap() {
        let d = dense(&["0", "2", "3", "4"]);
        let p = chores(vec![d.clone()]);
        // direct pairwise oracle
        let mut expect: Option<ExactValue> = None;
        let g = ground_xy();
        for s in g.bundles() {
            for t in g.bundles() {
                let (vs, vt) = (d.evaluate(s), d.evaluate(t));
                if vs > vt && !vt.is_zero() {
                    let r = ExactValue::new(
                        vs.mantissa() / vt.mantissa(),
                        vs.exponent() - vt.exponent(),
                    );
                    if expect.as_ref().is_none_or(|b| r < *b) {
                        expect = Some(r);
                    }
                }
            }
        }
        assert_eq!(separation_factor(&p, &p).unwrap(), expect.unwrap());
        assert_eq!(separation_factor(&p, &p).unwrap(), ev("4/3"));
    }

    #[test]
    fn separation_failure_modes() {
        let d = dense(&["0", "1", "1", "2"]);
        // cardinal value 0 on an ordinally separated bundle
        let broken = dense(&["0", "0", "1", "1"]);
        match separation_factor(&chores(vec![d.clone()]), &chores(vec![broken])) {
            Err(TransformError::SeparationBroken { agent: 0, finer, .. }) => {
                assert_eq!(finer.mask(), 0b01);
            }
            other => panic!("expected broken separation, got {other:?}"),
        }

        // a constant ordinal profile separates nothing above positive values
        let flat = dense(&["0", "1", "1", "1"]);
        let c = dense(&["0", "2", "2", "2"]);
        assert_eq!(
            separation_factor(&chores(vec![flat]), &chores(vec![c])),
            Err(TransformError::NoSeparatedPairs)
        );

        // mismatched shapes
        let other_ground = SetFunction::dense(
            GroundSet::new(vec!["x", "z"]).unwrap(),
            vec![ev("0"), ev("1"), ev("1"), ev("2")],
        )
        .unwrap();
        assert_eq!(
            separation_factor(&chores(vec![d.clone()]), &chores(vec![other_ground])),
            Err(TransformError::GroundMismatch)
        );
        assert_eq!(
            separation_factor(&chores(vec![d.clone()]), &chores(vec![d.clone(), d.clone()])),
            Err(TransformError::AgentCountMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn coverage_from_atoms_validates_ground() {
        let g = ground_xy();
        let ok = coverage_from_atoms(
            g.clone(),
            vec![CoverageAtom {
                atom: Bundle::from_names(&["x"], &g).unwrap(),
                weight: ExactValue::from_rational(ratq(7, 2)),
            }],
        )
        .unwrap();
        assert_eq!(ok.evaluate(g.full_bundle()), ExactValue::from_rational(ratq(7, 2)));
        // an atom from a bigger ground set is out of range here
        let big = GroundSet::new(vec!["x", "y", "z"]).unwrap();
        let bad = coverage_from_atoms(
            g,
            vec![CoverageAtom {
                atom: Bundle::from_names(&["z"], &big).unwrap(),
                weight: ExactValue::one(),
            }],
        );
        assert!(matches!(
            bad,
            Err(TransformError::Function(SetFnError::MaskOutOfRange { .. }))
        ));
    }
}
