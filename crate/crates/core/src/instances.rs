//! Built-in three-agent chore instances over a fixed six-item ground set,
//! plus extension by null ("dummy") items.
//!
//! All of them share one combinatorial skeleton: a heavy item `h`, two
//! light items `l1`, `l2`, and one special item `b_i` per agent. An agent
//! is hurt badly by holding both of the *other* agents' special items, or
//! by mixing its own special item with any of `h`, `l1`, `l2`. The
//! builders differ in how that ordinal structure is turned into numbers.

use crate::numeric::{rat, ratq, ExactValue, Rational};
use crate::setfn::{Bundle, CoverageAtom, GroundSet, Polarity, Profile, SetFnError, SetFunction};
use crate::transform::{rank_compress, TransformError};

/// Item names in index order: bit `i` of every bundle mask is
/// `STANDARD_ITEMS[i]`.
pub const STANDARD_ITEMS: [&str; 6] = ["h", "l1", "l2", "b1", "b2", "b3"];

/// Ids accepted by [`built_in`].
pub const BUILT_IN_IDS: [&str; 5] = [
    "cs24",
    "warmup7",
    "fourlevel",
    "fourlevel-compressed",
    "coverage2019",
];

const FIRST_THREE: u32 = 0b000111;
const HEAVY: u32 = 0b000001;
const LIGHTS: u32 = 0b000110;

/// The shared six-item ground set.
pub fn standard_ground() -> GroundSet {
    GroundSet::new(STANDARD_ITEMS.to_vec()).expect("fixed names are distinct")
}

/// A profile with a stable id, a construction note, and optionally the
/// factor it is claimed to obstruct (no alpha-EFX allocation exists for
/// any alpha below `claimed_bound`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NamedInstance {
    pub id: String,
    pub profile: Profile,
    pub provenance: String,
    pub claimed_bound: Option<ExactValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("unknown instance id `{0}`")]
    UnknownId(String),
    #[error(transparent)]
    Function(#[from] SetFnError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Looks up a builder by id. `k` applies to `cs24` only (default 3) and is
/// ignored elsewhere.
pub fn built_in(id: &str, k: Option<Rational>) -> Result<NamedInstance, InstanceError> {
    match id {
        "cs24" => build_cs24(k.unwrap_or_else(|| rat(3))),
        "warmup7" => Ok(build_warmup_compressed()),
        "fourlevel" => Ok(build_four_level_ordinal()),
        "fourlevel-compressed" => Ok(build_four_level_compressed()),
        "coverage2019" => Ok(build_coverage_20_19()),
        other => Err(InstanceError::UnknownId(other.to_string())),
    }
}

/// Additive costs `k, 1, 1, 0, 0, 0` with a flat `k^2` penalty on any
/// bundle holding both rival specials, or the agent's own special plus any
/// of the first three items. Requires `k > 2`; no EFX allocation exists.
pub fn build_cs24(k: Rational) -> Result<NamedInstance, InstanceError> {
    let g = standard_ground();
    let agents = (0..3)
        .map(|i| SetFunction::cs24(g.clone(), i, k.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(NamedInstance {
        id: "cs24".into(),
        profile: Profile::new(agents, Polarity::Chores)?,
        provenance: format!(
            "three agents, additive costs with pair penalties, parameter k = {k}"
        ),
        claimed_bound: None,
    })
}

/// Rank compression of `cs24` at `k = 3` onto its seven cost levels;
/// nonempty bundles cost `2^(r/6 - 1)` for rank `r`. Claims factor
/// `2^(1/6)`.
pub fn build_warmup_compressed() -> NamedInstance {
    let base = build_cs24(rat(3)).expect("k = 3 is in range");
    let profile =
        rank_compress(&base.profile, Some(7)).expect("the base instance is monotone with 7 levels");
    NamedInstance {
        id: "warmup7".into(),
        profile,
        provenance: "rank compression of cs24 at k = 3 onto seven levels".into(),
        claimed_bound: Some(ExactValue::pow2(ratq(1, 6))),
    }
}

/// Rank of a bundle (given as a mask over the standard six-item ground) in
/// the four-level ladder as seen by `agent`: 3 when the bundle triggers the
/// penalty (both rival specials, or the agent's own special next to any of
/// the first three items), else 2 with the heavy item, 1 with a light item,
/// 0 otherwise.
pub fn four_level_rank(agent: usize, mask: u32) -> u32 {
    let own = 1u32 << (3 + agent);
    let others = 0b111000 & !own;
    if mask & others == others || (mask & own != 0 && mask & FIRST_THREE != 0) {
        3
    } else if mask & HEAVY != 0 {
        2
    } else if mask & LIGHTS != 0 {
        1
    } else {
        0
    }
}

/// The purely ordinal four-level profile: level 3 for penalized bundles,
/// 2 for bundles with the heavy item, 1 for light-only bundles, 0
/// otherwise. No EFX allocation exists, witnessed level by level.
pub fn build_four_level_ordinal() -> NamedInstance {
    let g = standard_ground();
    let values: Vec<ExactValue> = (0..4).map(ExactValue::from_int).collect();
    let agents = (0..3)
        .map(|i| {
            let levels = g.bundles().map(|b| four_level_rank(i, b.mask())).collect();
            SetFunction::leveled(g.clone(), levels, values.clone())
                .expect("fixed level table is valid")
        })
        .collect();
    NamedInstance {
        id: "fourlevel".into(),
        profile: Profile::new(agents, Polarity::Chores).expect("three agents, one ground"),
        provenance: "three-agent four-level ordinal obstruction".into(),
        claimed_bound: None,
    }
}

/// Rank compression of the four-level profile onto the ladder
/// `2^-1, 2^(-2/3), 2^(-1/3), 1`. Subadditive; claims factor `2^(1/3)`.
pub fn build_four_level_compressed() -> NamedInstance {
    let base = build_four_level_ordinal();
    let profile =
        rank_compress(&base.profile, Some(4)).expect("the ordinal instance is monotone");
    NamedInstance {
        id: "fourlevel-compressed".into(),
        profile,
        provenance: "rank compression of the four-level ordinal obstruction".into(),
        claimed_bound: Some(ExactValue::pow2(ratq(1, 3))),
    }
}

/// Weighted-coverage costs realizing the four-level ordinal structure:
/// per rival special `b`, atoms `{h,l1,l2,b}` (weight 7), `{b_own,b}`
/// (weight 1), `{h,b_own,b}` (weight 2). Monotone and subadditive by
/// coverage structure; claims factor `20/19`.
pub fn build_coverage_20_19() -> NamedInstance {
    let g = standard_ground();
    let atom = |mask: u32, w: u64| CoverageAtom {
        atom: Bundle::from_mask(mask, &g).expect("atom masks lie in the ground set"),
        weight: ExactValue::from_int(w),
    };
    let agents = (0..3usize)
        .map(|i| {
            let own = 3 + i;
            let others: Vec<u32> = (3..6).filter(|&o| o != own).map(|o| 1u32 << o).collect();
            let mut atoms = Vec::new();
            for &o in &others {
                atoms.push(atom(FIRST_THREE | o, 7));
            }
            for &o in &others {
                atoms.push(atom((1 << own) | o, 1));
            }
            for &o in &others {
                atoms.push(atom(HEAVY | (1 << own) | o, 2));
            }
            SetFunction::coverage(g.clone(), atoms).expect("fixed atoms are valid")
        })
        .collect();
    NamedInstance {
        id: "coverage2019".into(),
        profile: Profile::new(agents, Polarity::Chores).expect("three agents, one ground"),
        provenance: "six-atom weighted coverage realization of the four-level obstruction".into(),
        claimed_bound: Some(ExactValue::from_rational(ratq(20, 19))),
    }
}

/// Appends null items: the new ground set is the old one followed by
/// `extra`, and every agent evaluates the restriction to the old items,
/// so the new items are worthless/costless everywhere. An empty `extra`
/// returns the instance unchanged.
pub fn extend_with_dummies(
    inst: &NamedInstance,
    extra: &[String],
) -> Result<NamedInstance, InstanceError> {
    if extra.is_empty() {
        return Ok(inst.clone());
    }
    let mut names = inst.profile.ground().names().to_vec();
    names.extend(extra.iter().cloned());
    let ground = GroundSet::new(names)?;
    let agents = inst
        .profile
        .agents()
        .iter()
        .map(|f| f.extend_ground(ground.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(NamedInstance {
        id: inst.id.clone(),
        profile: Profile::new(agents, inst.profile.polarity())?,
        provenance: format!("{}; extended with {} null item(s)", inst.provenance, extra.len()),
        claimed_bound: inst.claimed_bound.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::separation_factor;
    use std::collections::BTreeSet;

    fn ev(s: &str) -> ExactValue {
        s.parse().unwrap()
    }

    fn bundle(names: &[&str], g: &GroundSet) -> Bundle {
        Bundle::from_names(names, g).unwrap()
    }

    fn value(inst: &NamedInstance, agent: usize, names: &[&str]) -> ExactValue {
        let g = inst.profile.ground();
        inst.profile.agent(agent).evaluate(bundle(names, g))
    }

    #[test]
    fn cs24_spot_values() {
        let inst = build_cs24(rat(3)).unwrap();
        assert_eq!(value(&inst, 0, &["b2", "b3"]), ev("9"));
        assert_eq!(value(&inst, 0, &["h", "l1"]), ev("4"));
        assert_eq!(value(&inst, 1, &["b2"]), ev("0"));
        assert_eq!(value(&inst, 0, &["b1", "l1"]), ev("9"));
        assert_eq!(value(&inst, 2, &["h", "l1", "l2"]), ev("5"));
        assert!(build_cs24(rat(2)).is_err());
        // rational k is allowed
        let frac = build_cs24(ratq(5, 2)).unwrap();
        assert_eq!(value(&frac, 0, &["b2", "b3"]), ev("25/4"));
    }

    #[test]
    fn warmup_ladder_values() {
        let inst = build_warmup_compressed();
        assert_eq!(value(&inst, 0, &[]), ev("0"));
        assert_eq!(value(&inst, 0, &["b2", "b3"]), ev("1"));
        assert_eq!(value(&inst, 0, &["l1"]), ev("2^(-5/6)"));
        assert_eq!(value(&inst, 0, &["h", "l1"]), ev("2^(-1/3)"));
        let ladder: BTreeSet<ExactValue> = (0..7).map(|r| ExactValue::pow2(ratq(r - 6, 6))).collect();
        for f in inst.profile.agents() {
            let got: BTreeSet<ExactValue> = f.distinct_values().into_iter().collect();
            assert_eq!(got, ladder);
        }
        assert_eq!(inst.claimed_bound, Some(ev("2^(1/6)")));
    }

    #[test]
    fn four_level_spot_values_and_monotonicity() {
        let inst = build_four_level_ordinal();
        assert_eq!(value(&inst, 0, &["b1", "l2"]), ev("3"));
        assert_eq!(value(&inst, 0, &["h", "b2"]), ev("2"));
        assert_eq!(value(&inst, 0, &["b1"]), ev("0"));
        assert_eq!(value(&inst, 1, &["b1", "b3"]), ev("3"));
        assert_eq!(value(&inst, 2, &["l2"]), ev("1"));
        for f in inst.profile.agents() {
            assert!(f.check_normalized().holds);
            assert!(f.check_monotone().holds);
            let distinct: Vec<ExactValue> = f.distinct_values();
            assert_eq!(distinct, vec![ev("0"), ev("1"), ev("2"), ev("3")]);
        }
    }

    #[test]
    fn compressed_ladder_values() {
        let inst = build_four_level_compressed();
        assert_eq!(value(&inst, 0, &[]), ev("0"));
        assert_eq!(value(&inst, 0, &["b1", "l2"]), ev("1"));
        assert_eq!(value(&inst, 0, &["l1"]), ev("2^(-2/3)"));
        let ladder = vec![ev("1/2"), ev("2^(-2/3)"), ev("2^(-1/3)"), ev("1")];
        for f in inst.profile.agents() {
            assert_eq!(f.distinct_values(), ladder);
            assert!(f.check_subadditive().unwrap().holds);
        }
        assert_eq!(inst.claimed_bound, Some(ev("2^(1/3)")));
    }

    // independent of the bitmask plumbing: recompute coverage values from
    // the atom definition using name sets only
    fn coverage_oracle(agent: usize, held: &BTreeSet<&str>) -> u64 {
        let b = ["b1", "b2", "b3"];
        let own = b[agent];
        let mut total = 0;
        for rival in b.iter().filter(|&&x| x != own) {
            let atoms: [(Vec<&str>, u64); 3] = [
                (vec!["h", "l1", "l2", rival], 7),
                (vec![own, rival], 1),
                (vec!["h", own, rival], 2),
            ];
            for (atom, w) in atoms {
                if atom.iter().any(|x| held.contains(x)) {
                    total += w;
                }
            }
        }
        total
    }

    #[test]
    fn coverage_matches_atom_oracle_everywhere() {
        let inst = build_coverage_20_19();
        let g = inst.profile.ground();
        assert_eq!(value(&inst, 0, &["b1", "h"]), ev("20"));
        assert_eq!(value(&inst, 0, &["b2"]), ev("10"));
        assert_eq!(value(&inst, 0, &["b1"]), ev("6"));
        for agent in 0..3 {
            for bdl in g.bundles() {
                let held: BTreeSet<&str> = bdl.items().map(|i| g.name(i)).collect();
                let want = ExactValue::from_int(coverage_oracle(agent, &held));
                assert_eq!(inst.profile.agent(agent).evaluate(bdl), want);
            }
        }
        assert_eq!(inst.claimed_bound, Some(ev("20/19")));
    }

    #[test]
    fn coverage_values_partition_by_ordinal_level() {
        let inst = build_coverage_20_19();
        let g = inst.profile.ground();
        let expect: [BTreeSet<ExactValue>; 4] = [
            [0, 6, 10, 13].map(ExactValue::from_int).into_iter().collect(),
            [14, 17].map(ExactValue::from_int).into_iter().collect(),
            [18, 19].map(ExactValue::from_int).into_iter().collect(),
            [20].map(ExactValue::from_int).into_iter().collect(),
        ];
        for agent in 0..3 {
            let mut by_level: [BTreeSet<ExactValue>; 4] = Default::default();
            for b in g.bundles() {
                let lvl = four_level_rank(agent, b.mask()) as usize;
                by_level[lvl].insert(inst.profile.agent(agent).evaluate(b));
            }
            assert_eq!(by_level, expect);
        }
    }

    #[test]
    fn separation_factors_of_the_built_instances() {
        let ordinal = build_four_level_ordinal();
        let compressed = build_four_level_compressed();
        let coverage = build_coverage_20_19();
        assert_eq!(
            separation_factor(&ordinal.profile, &compressed.profile).unwrap(),
            ev("2^(1/3)")
        );
        assert_eq!(
            separation_factor(&ordinal.profile, &coverage.profile).unwrap(),
            ev("20/19")
        );
        assert_eq!(
            separation_factor(&ordinal.profile, &ordinal.profile).unwrap(),
            ev("3/2")
        );
    }

    // swap the two special items that distinguish agent 0 from agent j
    fn swap_specials(mask: u32, j: usize) -> u32 {
        let (a, b) = (3, 3 + j);
        let (ba, bb) = ((mask >> a) & 1, (mask >> b) & 1);
        (mask & !((1 << a) | (1 << b))) | (ba << b) | (bb << a)
    }

    #[test]
    fn agents_are_permuted_images_of_each_other() {
        for id in BUILT_IN_IDS {
            let inst = built_in(id, None).unwrap();
            let g = inst.profile.ground().clone();
            for j in 1..3 {
                for b in g.bundles() {
                    let image = Bundle::from_mask(swap_specials(b.mask(), j), &g).unwrap();
                    assert_eq!(
                        inst.profile.agent(j).evaluate(b),
                        inst.profile.agent(0).evaluate(image),
                        "{id}: agent {j} at {b:?} vs agent 0 at {image:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn dummy_extension_restricts() {
        let inst = build_coverage_20_19();
        let ext = extend_with_dummies(&inst, &["d1".into()]).unwrap();
        assert_eq!(ext.profile.ground().len(), 7);
        assert_eq!(value(&ext, 0, &["d1"]), ev("0"));
        assert_eq!(value(&ext, 0, &["h", "d1"]), ev("18"));
        assert_eq!(value(&ext, 0, &["h"]), ev("18"));
        assert_eq!(ext.claimed_bound, inst.claimed_bound);

        let same = extend_with_dummies(&inst, &[]).unwrap();
        assert_eq!(same, inst);

        let dup = extend_with_dummies(&inst, &["h".into()]);
        assert!(matches!(
            dup,
            Err(InstanceError::Function(SetFnError::DuplicateItem(_)))
        ));
    }

    #[test]
    fn dummy_extension_preserves_class_verdicts() {
        for id in BUILT_IN_IDS {
            // one extra item for the irrational-ladder instances keeps the
            // subadditivity scans off the slow exact-sum path
            let mut extra = vec!["d1".to_string()];
            if !(id.ends_with("compressed") || id == "warmup7") {
                extra.push("d2".to_string());
            }
            let inst = built_in(id, None).unwrap();
            let ext = extend_with_dummies(&inst, &extra).unwrap();
            for (f, f2) in inst.profile.agents().iter().zip(ext.profile.agents()) {
                assert_eq!(f.check_normalized().holds, f2.check_normalized().holds);
                assert_eq!(f.check_monotone().holds, f2.check_monotone().holds);
                assert_eq!(
                    f.check_subadditive().unwrap().holds,
                    f2.check_subadditive().unwrap().holds,
                    "{id}"
                );
            }
        }
    }

    #[test]
    fn dummy_extension_regrounds_every_representation() {
        let g = GroundSet::new(vec!["x", "y"]).unwrap();
        let big = GroundSet::new(vec!["x", "y", "z"]).unwrap();
        let reprs = vec![
            SetFunction::dense(g.clone(), vec![ev("0"), ev("1"), ev("2"), ev("3")]).unwrap(),
            SetFunction::additive(g.clone(), vec![ev("1"), ev("2")]).unwrap(),
            SetFunction::leveled(g.clone(), vec![0, 1, 1, 1], vec![ev("0"), ev("5")]).unwrap(),
            SetFunction::coverage(
                g.clone(),
                vec![CoverageAtom {
                    atom: Bundle::singleton(0),
                    weight: ev("4"),
                }],
            )
            .unwrap(),
        ];
        for f in reprs {
            let f2 = f.extend_ground(big.clone()).unwrap();
            for b in big.bundles() {
                let restricted = Bundle::from_mask(b.mask() & 0b11, &g).unwrap();
                assert_eq!(f2.evaluate(b), f.evaluate(restricted));
            }
        }
        // the closed-form repr re-grounds through its level table
        let cs = SetFunction::cs24(standard_ground(), 0, rat(3)).unwrap();
        let target = GroundSet::new(
            STANDARD_ITEMS.iter().copied().chain(["d1"]).collect::<Vec<_>>(),
        )
        .unwrap();
        let cs2 = cs.extend_ground(target.clone()).unwrap();
        for b in target.bundles() {
            let restricted = Bundle::from_mask(b.mask() & 0b111111, &standard_ground()).unwrap();
            assert_eq!(cs2.evaluate(b), cs.evaluate(restricted));
        }
        // mismatched prefix is rejected
        let other = GroundSet::new(vec!["y", "x", "z"]).unwrap();
        let f = SetFunction::additive(g.clone(), vec![ev("1"), ev("2")]).unwrap();
        assert_eq!(
            f.extend_ground(other),
            Err(SetFnError::GroundNotExtension { expected: 2 })
        );
    }

    #[test]
    fn id_dispatch() {
        for id in BUILT_IN_IDS {
            assert_eq!(built_in(id, None).unwrap().id, id);
        }
        let k = built_in("cs24", Some(ratq(7, 2))).unwrap();
        assert_eq!(value(&k, 0, &["h"]), ev("7/2"));
        assert!(matches!(
            built_in("nope", None),
            Err(InstanceError::UnknownId(_))
        ));
    }
}
