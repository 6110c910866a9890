//! Set functions over a named ground set of at most [`MAX_ITEMS`] items,
//! with bundles as bitmasks and exhaustive structural class checks.
//!
//! A [`SetFunction`] hides one of five representations behind a single
//! `evaluate`; the checkers only ever see evaluations, so every class
//! verdict holds for the represented function rather than for a shortcut.

use crate::numeric::{compare_sums, ExactValue, Rational};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

/// Hard cap on ground-set size; bundles are `u32` masks.
pub const MAX_ITEMS: usize = 20;

/// Cap on all-pairs scans (subadditive, submodular, superadditive,
/// separation): `4^m` comparisons get refused above this, never sampled.
pub const MAX_PAIR_SCAN_ITEMS: usize = 13;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetFnError {
    #[error("duplicate item `{0}` in ground set")]
    DuplicateItem(String),
    #[error("ground set has {0} items, limit {MAX_ITEMS}")]
    TooManyItems(usize),
    #[error("unknown item `{0}`")]
    UnknownItem(String),
    #[error("bundle mask {mask:#b} has bits outside the {items}-item ground set")]
    MaskOutOfRange { mask: u32, items: usize },
    #[error("expected {expected} values for {items} items, got {got}")]
    WrongLength {
        items: usize,
        expected: usize,
        got: usize,
    },
    #[error("level {level} out of range: only {levels} level values")]
    LevelOutOfRange { level: u32, levels: usize },
    #[error("level values must be strictly increasing")]
    LevelValuesNotIncreasing,
    #[error("values {0} and {1} cannot be added exactly (exponents differ by a non-integer)")]
    IncompatibleSum(ExactValue, ExactValue),
    #[error("the three-agent formula needs exactly 6 items, ground set has {0}")]
    FormulaGroundSize(usize),
    #[error("agent index {0} out of range for the three-agent formula")]
    FormulaAgentRange(usize),
    #[error("formula parameter k must exceed 2, got {0}")]
    FormulaParameter(Rational),
    #[error("all-pairs scan over {items} items exceeds the {max}-item limit")]
    PairScanTooLarge { items: usize, max: usize },
    #[error("profile needs at least one agent")]
    EmptyProfile,
    #[error("agent functions disagree on the ground set")]
    MixedGrounds,
    #[error("new ground set must start with the current {expected} items in order")]
    GroundNotExtension { expected: usize },
}

/// Ordered list of distinct item names; an item's position is its bit
/// index in every [`Bundle`] over this ground set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroundSet {
    names: Vec<String>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Result<Self, SetFnError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_ITEMS {
            return Err(SetFnError::TooManyItems(names.len()));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(SetFnError::DuplicateItem(n.clone()));
            }
        }
        Ok(GroundSet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn bundle_count(&self) -> usize {
        1usize << self.len()
    }

    pub fn full_bundle(&self) -> Bundle {
        Bundle((1u32 << self.len()) - 1)
    }

    /// All `2^m` bundles in mask order.
    pub fn bundles(&self) -> impl Iterator<Item = Bundle> {
        (0..self.bundle_count() as u32).map(Bundle)
    }
}

/// A subset of the ground set, stored as a bitmask; bit `i` is item `i`.
/// Mask order (numeric order of the mask) is the canonical bundle order,
/// and subsets always precede their supersets in it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bundle(u32);

impl Bundle {
    pub const EMPTY: Bundle = Bundle(0);

    pub fn from_mask(mask: u32, ground: &GroundSet) -> Result<Self, SetFnError> {
        if mask >= (1u32 << ground.len()) {
            return Err(SetFnError::MaskOutOfRange {
                mask,
                items: ground.len(),
            });
        }
        Ok(Bundle(mask))
    }

    pub fn from_names<S: AsRef<str>>(
        names: &[S],
        ground: &GroundSet,
    ) -> Result<Self, SetFnError> {
        let mut mask = 0u32;
        for n in names {
            let i = ground
                .index_of(n.as_ref())
                .ok_or_else(|| SetFnError::UnknownItem(n.as_ref().to_string()))?;
            mask |= 1 << i;
        }
        Ok(Bundle(mask))
    }

    pub fn singleton(index: usize) -> Self {
        Bundle(1 << index)
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, index: usize) -> bool {
        (self.0 >> index) & 1 == 1
    }

    pub fn with(&self, index: usize) -> Self {
        Bundle(self.0 | (1 << index))
    }

    pub fn without(&self, index: usize) -> Self {
        Bundle(self.0 & !(1 << index))
    }

    pub fn union(&self, other: Bundle) -> Self {
        Bundle(self.0 | other.0)
    }

    pub fn intersect(&self, other: Bundle) -> Self {
        Bundle(self.0 & other.0)
    }

    pub fn is_disjoint(&self, other: Bundle) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset_of(&self, other: Bundle) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(&self, other: Bundle) -> bool {
        self.0 & other.0 != 0
    }

    /// Item indices, ascending.
    pub fn items(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32usize).filter(|i| self.contains(*i))
    }

    /// Item names in ground-set index order.
    pub fn names(&self, ground: &GroundSet) -> Vec<String> {
        self.items()
            .take_while(|i| *i < ground.len())
            .map(|i| ground.name(i).to_string())
            .collect()
    }
}

impl fmt::Debug for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bundle({:#b})", self.0)
    }
}

/// One weighted atom of a coverage function: contributes `weight` to every
/// bundle that intersects `atom`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoverageAtom {
    pub atom: Bundle,
    pub weight: ExactValue,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Repr {
    Dense(Vec<ExactValue>),
    Additive(Vec<ExactValue>),
    Coverage(Vec<CoverageAtom>),
    Leveled {
        levels: Vec<u32>,
        values: Vec<ExactValue>,
    },
    Cs24 {
        agent: usize,
        k: Rational,
    },
}

/// A set function `2^ground -> ExactValue`, total on all bundles.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetFunction {
    ground: GroundSet,
    repr: Repr,
}

/// Borrowed view of a [`SetFunction`]'s representation; see
/// [`SetFunction::repr`].
#[derive(Clone, Copy, Debug)]
pub enum ReprView<'a> {
    Dense(&'a [ExactValue]),
    Additive(&'a [ExactValue]),
    Coverage(&'a [CoverageAtom]),
    Leveled {
        levels: &'a [u32],
        values: &'a [ExactValue],
    },
    Cs24 { agent: usize, k: &'a Rational },
}

fn check_addable(values: impl Iterator<Item = ExactValue>) -> Result<(), SetFnError> {
    // zero is the additive identity; all nonzero values must share one
    // exponent class mod 1 so that pairwise sums stay exact
    let mut class: Option<(Rational, ExactValue)> = None;
    for v in values {
        if v.is_zero() {
            continue;
        }
        let frac = v.exponent() - v.exponent().floor();
        match &class {
            None => class = Some((frac, v)),
            Some((f, first)) => {
                if *f != frac {
                    return Err(SetFnError::IncompatibleSum(first.clone(), v));
                }
            }
        }
    }
    Ok(())
}

impl SetFunction {
    /// Explicit table indexed by bundle mask, length `2^m`.
    pub fn dense(ground: GroundSet, values: Vec<ExactValue>) -> Result<Self, SetFnError> {
        if values.len() != ground.bundle_count() {
            return Err(SetFnError::WrongLength {
                items: ground.len(),
                expected: ground.bundle_count(),
                got: values.len(),
            });
        }
        Ok(SetFunction {
            ground,
            repr: Repr::Dense(values),
        })
    }

    /// Sum of per-item values, one per ground-set item.
    pub fn additive(ground: GroundSet, item_values: Vec<ExactValue>) -> Result<Self, SetFnError> {
        if item_values.len() != ground.len() {
            return Err(SetFnError::WrongLength {
                items: ground.len(),
                expected: ground.len(),
                got: item_values.len(),
            });
        }
        check_addable(item_values.iter().cloned())?;
        Ok(SetFunction {
            ground,
            repr: Repr::Additive(item_values),
        })
    }

    /// Weighted coverage: `f(S) = sum of weights of atoms meeting S`.
    pub fn coverage(ground: GroundSet, atoms: Vec<CoverageAtom>) -> Result<Self, SetFnError> {
        for a in &atoms {
            Bundle::from_mask(a.atom.mask(), &ground)?;
        }
        check_addable(atoms.iter().map(|a| a.weight.clone()))?;
        Ok(SetFunction {
            ground,
            repr: Repr::Coverage(atoms),
        })
    }

    /// Level map plus strictly increasing value per level: `f(S) =
    /// values[levels[S]]`.
    pub fn leveled(
        ground: GroundSet,
        levels: Vec<u32>,
        values: Vec<ExactValue>,
    ) -> Result<Self, SetFnError> {
        if levels.len() != ground.bundle_count() {
            return Err(SetFnError::WrongLength {
                items: ground.len(),
                expected: ground.bundle_count(),
                got: levels.len(),
            });
        }
        for &l in &levels {
            if l as usize >= values.len() {
                return Err(SetFnError::LevelOutOfRange {
                    level: l,
                    levels: values.len(),
                });
            }
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SetFnError::LevelValuesNotIncreasing);
        }
        Ok(SetFunction {
            ground,
            repr: Repr::Leveled { levels, values },
        })
    }

    /// The closed-form three-agent cost over the fixed six-item ground
    /// `(h, l1, l2, b1, b2, b3)` with parameter `k > 2`:
    /// singletons cost `k`, `1`, `1`, `0`, `0`, `0`; a bundle is penalized
    /// to `k^2` when it contains both of the other agents' special items,
    /// or the agent's own special item together with any of the first
    /// three. `agent` is 0-based.
    pub fn cs24(ground: GroundSet, agent: usize, k: Rational) -> Result<Self, SetFnError> {
        if ground.len() != 6 {
            return Err(SetFnError::FormulaGroundSize(ground.len()));
        }
        if agent >= 3 {
            return Err(SetFnError::FormulaAgentRange(agent));
        }
        if k <= Rational::from_integer(2.into()) {
            return Err(SetFnError::FormulaParameter(k));
        }
        Ok(SetFunction {
            ground,
            repr: Repr::Cs24 { agent, k },
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn evaluate(&self, bundle: Bundle) -> ExactValue {
        debug_assert!(bundle.mask() < (1u32 << self.ground.len()));
        match &self.repr {
            Repr::Dense(values) => values[bundle.mask() as usize].clone(),
            Repr::Additive(items) => {
                let mut acc = ExactValue::zero();
                for i in bundle.items() {
                    acc = acc
                        .checked_add(&items[i])
                        .expect("additive values validated addable");
                }
                acc
            }
            Repr::Coverage(atoms) => {
                let mut acc = ExactValue::zero();
                for a in atoms {
                    if a.atom.intersects(bundle) {
                        acc = acc
                            .checked_add(&a.weight)
                            .expect("coverage weights validated addable");
                    }
                }
                acc
            }
            Repr::Leveled { levels, values } => {
                values[levels[bundle.mask() as usize] as usize].clone()
            }
            Repr::Cs24 { agent, k } => ExactValue::from_rational(cs24_value(*agent, k, bundle)),
        }
    }

    /// Full evaluation table indexed by mask.
    pub fn table(&self) -> Vec<ExactValue> {
        self.ground.bundles().map(|b| self.evaluate(b)).collect()
    }

    /// Borrowed view of the stored representation, for serializers and
    /// anything else that must not lose the constructor's shape.
    pub fn repr(&self) -> ReprView<'_> {
        match &self.repr {
            Repr::Dense(values) => ReprView::Dense(values),
            Repr::Additive(values) => ReprView::Additive(values),
            Repr::Coverage(atoms) => ReprView::Coverage(atoms),
            Repr::Leveled { levels, values } => ReprView::Leveled { levels, values },
            Repr::Cs24 { agent, k } => ReprView::Cs24 { agent: *agent, k },
        }
    }

    /// Re-representation as an explicit dense table.
    pub fn to_dense(&self) -> SetFunction {
        SetFunction {
            ground: self.ground.clone(),
            repr: Repr::Dense(self.table()),
        }
    }

    /// Re-representation as a leveled function whose values are the
    /// distinct values of `self` over all bundles, in increasing order.
    pub fn to_leveled(&self) -> SetFunction {
        let table = self.table();
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
        SetFunction {
            ground: self.ground.clone(),
            repr: Repr::Leveled { levels, values },
        }
    }

    /// Re-grounds the function onto an enlarged ground set whose leading
    /// items are exactly the current ones. New items are null:
    /// `f'(S) = f(S restricted to the old items)`.
    pub fn extend_ground(&self, ground: GroundSet) -> Result<SetFunction, SetFnError> {
        let m = self.ground.len();
        if ground.len() < m || ground.names()[..m] != self.ground.names()[..] {
            return Err(SetFnError::GroundNotExtension { expected: m });
        }
        if ground.len() == m {
            return Ok(self.clone());
        }
        let old_full = self.ground.full_bundle().mask();
        let repr = match &self.repr {
            Repr::Dense(values) => Repr::Dense(
                (0..ground.bundle_count())
                    .map(|mask| values[(mask as u32 & old_full) as usize].clone())
                    .collect(),
            ),
            Repr::Additive(items) => {
                let mut items = items.clone();
                items.resize(ground.len(), ExactValue::zero());
                Repr::Additive(items)
            }
            // atoms never meet the new items, so the same atoms restrict
            Repr::Coverage(atoms) => Repr::Coverage(atoms.clone()),
            Repr::Leveled { levels, values } => Repr::Leveled {
                levels: (0..ground.bundle_count())
                    .map(|mask| levels[(mask as u32 & old_full) as usize])
                    .collect(),
                values: values.clone(),
            },
            // the closed form is pinned to its six-item ground; re-ground
            // its level table instead
            Repr::Cs24 { .. } => return self.to_leveled().extend_ground(ground),
        };
        Ok(SetFunction { ground, repr })
    }

    /// Ordered distinct values over nonempty bundles.
    pub fn distinct_values(&self) -> Vec<ExactValue> {
        self.ground
            .bundles()
            .filter(|b| !b.is_empty())
            .map(|b| self.evaluate(b))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// `f(empty) == 0`.
    pub fn check_normalized(&self) -> ClassReport {
        let v = self.evaluate(Bundle::EMPTY);
        if v.is_zero() {
            ClassReport::holds(ClassProperty::Normalized)
        } else {
            ClassReport::violated(
                ClassProperty::Normalized,
                ClassWitness {
                    bundles: vec![Bundle::EMPTY],
                    values: vec![v],
                },
            )
        }
    }

    /// `f(S) <= f(S + e)` for every bundle `S` and item `e` outside it;
    /// the witness is the first violating `(S, e)` in mask order.
    pub fn check_monotone(&self) -> ClassReport {
        let table = self.table();
        for s in self.ground.bundles() {
            for e in 0..self.ground.len() {
                if s.contains(e) {
                    continue;
                }
                let sup = s.with(e);
                if table[s.mask() as usize] > table[sup.mask() as usize] {
                    return ClassReport::violated(
                        ClassProperty::Monotone,
                        ClassWitness {
                            bundles: vec![s, sup],
                            values: vec![
                                table[s.mask() as usize].clone(),
                                table[sup.mask() as usize].clone(),
                            ],
                        },
                    );
                }
            }
        }
        ClassReport::holds(ClassProperty::Monotone)
    }

    /// `f(S) + f(T) >= f(S | T)` over all ordered pairs; refuses `m` above
    /// [`MAX_PAIR_SCAN_ITEMS`] rather than sampling.
    pub fn check_subadditive(&self) -> Result<ClassReport, SetFnError> {
        self.pair_scan(ClassProperty::Subadditive, |table, s, t| {
            let lhs = [
                table[s.mask() as usize].clone(),
                table[t.mask() as usize].clone(),
            ];
            let union = s.union(t);
            let rhs = [table[union.mask() as usize].clone()];
            if compare_sums(&lhs, &rhs) == Ordering::Less {
                Some(ClassWitness {
                    bundles: vec![s, t, union],
                    values: vec![lhs[0].clone(), lhs[1].clone(), rhs[0].clone()],
                })
            } else {
                None
            }
        })
    }

    /// `f(S) + f(T) >= f(S | T) + f(S & T)` over all ordered pairs.
    pub fn check_submodular(&self) -> Result<ClassReport, SetFnError> {
        self.pair_scan(ClassProperty::Submodular, |table, s, t| {
            let lhs = [
                table[s.mask() as usize].clone(),
                table[t.mask() as usize].clone(),
            ];
            let union = s.union(t);
            let inter = s.intersect(t);
            let rhs = [
                table[union.mask() as usize].clone(),
                table[inter.mask() as usize].clone(),
            ];
            if compare_sums(&lhs, &rhs) == Ordering::Less {
                Some(ClassWitness {
                    bundles: vec![s, t, union, inter],
                    values: vec![
                        lhs[0].clone(),
                        lhs[1].clone(),
                        rhs[0].clone(),
                        rhs[1].clone(),
                    ],
                })
            } else {
                None
            }
        })
    }

    /// `f(S | T) >= f(S) + f(T)` over all disjoint ordered pairs.
    pub fn check_superadditive(&self) -> Result<ClassReport, SetFnError> {
        self.pair_scan(ClassProperty::Superadditive, |table, s, t| {
            if !s.is_disjoint(t) {
                return None;
            }
            let union = s.union(t);
            let lhs = [table[union.mask() as usize].clone()];
            let rhs = [
                table[s.mask() as usize].clone(),
                table[t.mask() as usize].clone(),
            ];
            if compare_sums(&lhs, &rhs) == Ordering::Less {
                Some(ClassWitness {
                    bundles: vec![s, t, union],
                    values: vec![rhs[0].clone(), rhs[1].clone(), lhs[0].clone()],
                })
            } else {
                None
            }
        })
    }

    fn pair_scan(
        &self,
        property: ClassProperty,
        violation: impl Fn(&[ExactValue], Bundle, Bundle) -> Option<ClassWitness>,
    ) -> Result<ClassReport, SetFnError> {
        if self.ground.len() > MAX_PAIR_SCAN_ITEMS {
            return Err(SetFnError::PairScanTooLarge {
                items: self.ground.len(),
                max: MAX_PAIR_SCAN_ITEMS,
            });
        }
        let table = self.table();
        // the scan properties are symmetric in (s, t), so the upper
        // triangle finds the same lex-first witness at half the cost
        for s in self.ground.bundles() {
            for t_mask in s.mask()..self.ground.bundle_count() as u32 {
                let t = Bundle::from_mask(t_mask, &self.ground)?;
                if let Some(w) = violation(&table, s, t) {
                    return Ok(ClassReport::violated(property, w));
                }
            }
        }
        Ok(ClassReport::holds(property))
    }
}

/// The closed-form cost; `agent` is 0-based, items are positional:
/// 0 = h, 1..=2 = the two unit items, 3..=5 = the three special items.
fn cs24_value(agent: usize, k: &Rational, bundle: Bundle) -> Rational {
    const A_MASK: u32 = 0b000111;
    const B_MASK: u32 = 0b111000;
    let own = 3 + agent;
    let others = B_MASK & !(1 << own);
    let m = bundle.mask();
    let penalized = (m & others) == others || (bundle.contains(own) && m & A_MASK != 0);
    if penalized {
        return k * k;
    }
    let mut total = Rational::zero();
    if bundle.contains(0) {
        total += k;
    }
    if bundle.contains(1) {
        total += Rational::one();
    }
    if bundle.contains(2) {
        total += Rational::one();
    }
    total
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassProperty {
    Normalized,
    Monotone,
    Subadditive,
    Submodular,
    Superadditive,
}

impl fmt::Display for ClassProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassProperty::Normalized => "normalized",
            ClassProperty::Monotone => "monotone",
            ClassProperty::Subadditive => "subadditive",
            ClassProperty::Submodular => "submodular",
            ClassProperty::Superadditive => "superadditive",
        };
        write!(f, "{s}")
    }
}

/// Bundles and their values demonstrating a violation; the layout depends
/// on the property:
/// normalized `[empty]`, monotone `[S, S+e]`, subadditive `[S, T, S|T]`,
/// submodular `[S, T, S|T, S&T]`, superadditive `[S, T, S|T]`, with
/// `values[i] = f(bundles[i])`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassWitness {
    pub bundles: Vec<Bundle>,
    pub values: Vec<ExactValue>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassReport {
    pub property: ClassProperty,
    pub holds: bool,
    pub witness: Option<ClassWitness>,
}

impl ClassReport {
    fn holds(property: ClassProperty) -> Self {
        ClassReport {
            property,
            holds: true,
            witness: None,
        }
    }

    fn violated(property: ClassProperty, witness: ClassWitness) -> Self {
        ClassReport {
            property,
            holds: false,
            witness: Some(witness),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Polarity {
    /// Values are costs; less is better.
    Chores,
    /// Values are utilities; more is better.
    Goods,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarity::Chores => write!(f, "chores"),
            Polarity::Goods => write!(f, "goods"),
        }
    }
}

impl std::str::FromStr for Polarity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chores" => Ok(Polarity::Chores),
            "goods" => Ok(Polarity::Goods),
            other => Err(format!("unknown polarity `{other}`")),
        }
    }
}

/// One set function per agent over a shared ground set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Profile {
    ground: GroundSet,
    agents: Vec<SetFunction>,
    polarity: Polarity,
}

impl Profile {
    pub fn new(agents: Vec<SetFunction>, polarity: Polarity) -> Result<Self, SetFnError> {
        let ground = agents
            .first()
            .ok_or(SetFnError::EmptyProfile)?
            .ground()
            .clone();
        if agents.iter().any(|a| *a.ground() != ground) {
            return Err(SetFnError::MixedGrounds);
        }
        Ok(Profile {
            ground,
            agents,
            polarity,
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn agent(&self, i: usize) -> &SetFunction {
        &self.agents[i]
    }

    pub fn agents(&self) -> &[SetFunction] {
        &self.agents
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    prop_compose! {
        fn arb_coverage(items: usize)
            (atoms in proptest::collection::vec((1u32..(1 << items as u32), 0u64..50), 0..12))
            -> SetFunction
        {
            let names: Vec<String> = (0..items).map(|i| format!("e{i}")).collect();
            let ground = GroundSet::new(names).unwrap();
            let atoms = atoms
                .into_iter()
                .map(|(mask, w)| CoverageAtom {
                    atom: Bundle::from_mask(mask, &ground).unwrap(),
                    weight: ExactValue::from_int(w),
                })
                .collect();
            SetFunction::coverage(ground, atoms).unwrap()
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        // coverage functions are always normalized, monotone, submodular,
        // and subadditive; the checkers must agree
        #[test]
        fn coverage_class_guarantees(f in arb_coverage(5)) {
            prop_assert!(f.check_normalized().holds);
            prop_assert!(f.check_monotone().holds);
            prop_assert!(f.check_submodular().unwrap().holds);
            prop_assert!(f.check_subadditive().unwrap().holds);
        }

        #[test]
        fn dense_round_trip_preserves_values(f in arb_coverage(4)) {
            let dense = f.to_dense();
            let leveled = f.to_leveled();
            for b in f.ground().bundles() {
                prop_assert_eq!(f.evaluate(b), dense.evaluate(b));
                prop_assert_eq!(f.evaluate(b), leveled.evaluate(b));
            }
            let distinct = f.distinct_values();
            prop_assert!(distinct.windows(2).all(|w| w[0] < w[1]));
        }

        // submodularity in lattice form implies the marginal form:
        // adding e helps a subset at least as much as a superset
        #[test]
        fn submodular_marginals_cross_check(f in arb_coverage(5)) {
            let table = f.table();
            let m = f.ground().len();
            for s in f.ground().bundles() {
                for t in f.ground().bundles() {
                    if !s.is_subset_of(t) { continue; }
                    for e in 0..m {
                        if t.contains(e) { continue; }
                        // f(S+e) + f(T) >= f(T+e) + f(S)
                        let lhs = [table[s.with(e).mask() as usize].clone(), table[t.mask() as usize].clone()];
                        let rhs = [table[t.with(e).mask() as usize].clone(), table[s.mask() as usize].clone()];
                        prop_assert_ne!(crate::numeric::compare_sums(&lhs, &rhs), std::cmp::Ordering::Less);
                    }
                }
            }
        }
    }
}
