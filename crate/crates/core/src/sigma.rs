//! Finite measurable spaces.
//!
//! A [`FinSpace`] keeps its σ-algebra extensionally as a sorted list of
//! bitsets over the carrier, together with the atom partition. Every
//! measurable set is a union of atoms, so most queries go through the atoms.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, in_unit, one, zero, Rat};

/// Default cap on carrier size.
pub const DEFAULT_MAX_CARRIER: usize = 16;
/// Hard cap: beyond this the extensional σ-algebra no longer fits comfortably in memory.
pub const HARD_MAX_CARRIER: usize = 24;

/// Subset of a carrier of at most 64 points, as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointSet(pub u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        PointSet(1 << i)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Self {
        PointSet(points.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn union(self, other: Self) -> Self {
        PointSet(self.0 | other.0)
    }

    pub fn intersect(self, other: Self) -> Self {
        PointSet(self.0 & other.0)
    }

    pub fn complement(self, n: usize) -> Self {
        PointSet(!self.0 & Self::full(n).0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn points(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    pub fn min_point(self) -> Option<usize> {
        (!self.is_empty()).then(|| self.0.trailing_zeros() as usize)
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.points()).finish()
    }
}

/// A finite carrier with a σ-algebra and its atoms.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "SpaceJson", into = "SpaceJson")]
pub struct FinSpace {
    labels: Vec<String>,
    /// Ordered by least point.
    atoms: Vec<PointSet>,
    atom_of: Vec<usize>,
    /// Sorted ascending by bitmask.
    sigma: Vec<PointSet>,
}

pub type Space = Arc<FinSpace>;

impl FinSpace {
    /// Smallest σ-algebra on `carrier` containing every generator.
    pub fn generate<S: AsRef<str>>(carrier: &[S], generators: &[Vec<S>]) -> Result<FinSpace> {
        Self::generate_with_cap(carrier, generators, DEFAULT_MAX_CARRIER)
    }

    pub fn generate_with_cap<S: AsRef<str>>(
        carrier: &[S],
        generators: &[Vec<S>],
        cap: usize,
    ) -> Result<FinSpace> {
        let labels = check_labels(carrier, cap)?;
        let gens = generators
            .iter()
            .map(|g| set_of_labels(&labels, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_generator_sets(labels, &gens))
    }

    /// Generation from bitmask generators over an already validated carrier.
    pub(crate) fn from_generator_sets(labels: Vec<String>, gens: &[PointSet]) -> FinSpace {
        // Points with the same membership signature across generators share an atom.
        let n = labels.len();
        let mut atoms: Vec<PointSet> = Vec::new();
        let mut signatures: Vec<Vec<bool>> = Vec::new();
        for p in 0..n {
            let sig: Vec<bool> = gens.iter().map(|g| g.contains(p)).collect();
            match signatures.iter().position(|s| *s == sig) {
                Some(k) => atoms[k] = atoms[k].union(PointSet::singleton(p)),
                None => {
                    signatures.push(sig);
                    atoms.push(PointSet::singleton(p));
                }
            }
        }
        Self::from_atoms(labels, atoms)
    }

    fn from_atoms(labels: Vec<String>, atoms: Vec<PointSet>) -> FinSpace {
        let mut atom_of = vec![0; labels.len()];
        for (k, a) in atoms.iter().enumerate() {
            for p in a.points() {
                atom_of[p] = k;
            }
        }
        let mut sigma: Vec<PointSet> = (0u64..1 << atoms.len())
            .map(|mask| {
                atoms
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .fold(PointSet::EMPTY, |s, (_, a)| s.union(*a))
            })
            .collect();
        sigma.sort();
        FinSpace { labels, atoms, atom_of, sigma }
    }

    /// Validates an explicitly listed σ-algebra, reporting the first violated closure law.
    pub fn from_sigma(labels: Vec<String>, sets: &[PointSet]) -> Result<FinSpace> {
        let labels = check_labels(&labels, HARD_MAX_CARRIER)?;
        let n = labels.len();
        let full = PointSet::full(n);
        let mut sigma = sets.to_vec();
        sigma.sort();
        sigma.dedup();
        let show = |s: PointSet| format_set(&labels, s);
        if let Some(s) = sigma.iter().find(|s| !s.is_subset(full)) {
            return Err(Error::NotASubset(format!("{:?}", s)));
        }
        if sigma.binary_search(&PointSet::EMPTY).is_err() {
            return Err(Error::Invalid("σ-algebra does not contain the empty set".into()));
        }
        if sigma.binary_search(&full).is_err() {
            return Err(Error::Invalid("σ-algebra does not contain the carrier".into()));
        }
        for &s in &sigma {
            if sigma.binary_search(&s.complement(n)).is_err() {
                return Err(Error::Invalid(format!(
                    "σ-algebra is not closed under complement: missing complement of {}",
                    show(s)
                )));
            }
            for &t in &sigma {
                if sigma.binary_search(&s.union(t)).is_err() {
                    return Err(Error::Invalid(format!(
                        "σ-algebra is not closed under union: {} ∪ {} missing",
                        show(s),
                        show(t)
                    )));
                }
            }
        }
        let atoms = minimal_nonempty(&sigma);
        let space = Self::from_atoms(labels, atoms);
        debug_assert_eq!(space.sigma, sigma);
        Ok(space)
    }

    pub fn discrete<S: AsRef<str>>(carrier: &[S]) -> Result<FinSpace> {
        let labels = check_labels(carrier, HARD_MAX_CARRIER)?;
        let atoms = (0..labels.len()).map(PointSet::singleton).collect();
        Ok(Self::from_atoms(labels, atoms))
    }

    pub fn indiscrete<S: AsRef<str>>(carrier: &[S]) -> Result<FinSpace> {
        let labels = check_labels(carrier, HARD_MAX_CARRIER)?;
        let atoms = vec![PointSet::full(labels.len())];
        Ok(Self::from_atoms(labels, atoms))
    }

    /// Discrete space on points labelled `0..n`.
    pub fn discrete_n(n: usize) -> FinSpace {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Self::discrete(&labels).expect("numeric labels are distinct")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn full(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn atoms(&self) -> &[PointSet] {
        &self.atoms
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn sigma(&self) -> &[PointSet] {
        &self.sigma
    }

    pub fn atom_of(&self, point: usize) -> usize {
        self.atom_of[point]
    }

    pub fn point(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    pub fn set<S: AsRef<str>>(&self, labels: &[S]) -> Result<PointSet> {
        set_of_labels(&self.labels, labels)
    }

    /// A set is measurable iff it is a union of atoms.
    pub fn is_measurable(&self, set: PointSet) -> bool {
        set.is_subset(self.full())
            && self
                .atoms
                .iter()
                .all(|a| a.is_subset(set) || a.intersect(set).is_empty())
    }

    pub fn require_measurable(&self, set: PointSet) -> Result<()> {
        if self.is_measurable(set) {
            Ok(())
        } else {
            Err(Error::NotMeasurable(format_set(&self.labels, set)))
        }
    }

    /// Indices of the atoms contained in a measurable set.
    pub fn atoms_in(&self, set: PointSet) -> impl Iterator<Item = usize> + '_ {
        self.atoms
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.is_subset(set))
            .map(|(k, _)| k)
    }

    pub fn atom_set(&self, atoms: impl IntoIterator<Item = usize>) -> PointSet {
        atoms
            .into_iter()
            .fold(PointSet::EMPTY, |s, k| s.union(self.atoms[k]))
    }

    pub fn describe(&self, set: PointSet) -> String {
        format_set(&self.labels, set)
    }

    /// Representative point of an atom.
    pub fn atom_point(&self, atom: usize) -> usize {
        self.atoms[atom].min_point().expect("atoms are nonempty")
    }
}

impl fmt::Display for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms: Vec<String> = self.atoms.iter().map(|a| self.describe(*a)).collect();
        write!(f, "space with atoms [{}]", atoms.join(", "))
    }
}

fn minimal_nonempty(sigma: &[PointSet]) -> Vec<PointSet> {
    let mut atoms: Vec<PointSet> = sigma
        .iter()
        .copied()
        .filter(|s| !s.is_empty())
        .filter(|s| {
            !sigma
                .iter()
                .any(|t| !t.is_empty() && t != s && t.is_subset(*s))
        })
        .collect();
    atoms.sort_by_key(|a| a.min_point());
    atoms
}

fn check_labels<S: AsRef<str>>(carrier: &[S], cap: usize) -> Result<Vec<String>> {
    let cap = cap.min(HARD_MAX_CARRIER);
    if carrier.len() > cap {
        return Err(Error::CarrierTooLarge { len: carrier.len(), cap });
    }
    if carrier.is_empty() {
        return Err(Error::Invalid("carrier must be nonempty".into()));
    }
    let labels: Vec<String> = carrier.iter().map(|s| s.as_ref().to_string()).collect();
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(labels)
}

fn set_of_labels<S: AsRef<str>>(labels: &[String], set: &[S]) -> Result<PointSet> {
    let mut out = PointSet::EMPTY;
    for s in set {
        let p = labels.iter().position(|l| l == s.as_ref()).ok_or_else(|| {
            let listed: Vec<&str> = set.iter().map(|x| x.as_ref()).collect();
            Error::NotASubset(format!("{{{}}}", listed.join(",")))
        })?;
        out = out.union(PointSet::singleton(p));
    }
    Ok(out)
}

fn format_set(labels: &[String], set: PointSet) -> String {
    let names: Vec<&str> = set
        .points()
        .map(|p| labels.get(p).map(String::as_str).unwrap_or("?"))
        .collect();
    format!("{{{}}}", names.join(","))
}

#[derive(Clone, Serialize, Deserialize)]
struct SpaceJson {
    carrier: Vec<String>,
    #[serde(default)]
    generators: Vec<Vec<String>>,
}

impl TryFrom<SpaceJson> for FinSpace {
    type Error = Error;

    fn try_from(j: SpaceJson) -> Result<FinSpace> {
        FinSpace::generate(&j.carrier, &j.generators)
    }
}

impl From<FinSpace> for SpaceJson {
    fn from(s: FinSpace) -> SpaceJson {
        // The atoms generate the σ-algebra, so they serve as a canonical generator list.
        let generators = s
            .atoms
            .iter()
            .map(|a| a.points().map(|p| s.labels[p].clone()).collect())
            .collect();
        SpaceJson { carrier: s.labels, generators }
    }
}

/// A total map between carriers whose preimages of measurable sets are measurable.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasMap {
    dom: Space,
    cod: Space,
    table: Vec<usize>,
}

/// True iff the preimage of every codomain atom is measurable in the domain.
pub fn is_measurable(dom: &FinSpace, cod: &FinSpace, table: &[usize]) -> bool {
    table.len() == dom.len()
        && table.iter().all(|&q| q < cod.len())
        && cod
            .atoms()
            .iter()
            .all(|a| dom.is_measurable(preimage_of(table, *a)))
}

fn preimage_of(table: &[usize], set: PointSet) -> PointSet {
    PointSet::from_points(
        table
            .iter()
            .enumerate()
            .filter(|(_, q)| set.contains(**q))
            .map(|(p, _)| p),
    )
}

impl MeasMap {
    pub fn new(dom: Space, cod: Space, table: Vec<usize>) -> Result<MeasMap> {
        if table.len() != dom.len() {
            return Err(Error::Arity { expected: dom.len(), found: table.len() });
        }
        if let Some(&q) = table.iter().find(|&&q| q >= cod.len()) {
            return Err(Error::UnknownPoint(format!("codomain index {q}")));
        }
        if let Some(a) = cod
            .atoms()
            .iter()
            .find(|a| !dom.is_measurable(preimage_of(&table, **a)))
        {
            return Err(Error::MapNotMeasurable(cod.describe(*a)));
        }
        Ok(MeasMap { dom, cod, table })
    }

    /// Builds a map from `(domain label, codomain label)` pairs.
    pub fn from_labels<S: AsRef<str>>(dom: Space, cod: Space, pairs: &[(S, S)]) -> Result<MeasMap> {
        let mut table = vec![usize::MAX; dom.len()];
        for (x, y) in pairs {
            table[dom.point(x.as_ref())?] = cod.point(y.as_ref())?;
        }
        if let Some(p) = table.iter().position(|&q| q == usize::MAX) {
            return Err(Error::Invalid(format!("map is undefined at `{}`", dom.labels()[p])));
        }
        MeasMap::new(dom, cod, table)
    }

    pub fn identity(space: Space) -> MeasMap {
        let table = (0..space.len()).collect();
        MeasMap { dom: space.clone(), cod: space, table }
    }

    pub fn constant(dom: Space, cod: Space, point: usize) -> Result<MeasMap> {
        MeasMap::new(dom.clone(), cod, vec![point; dom.len()])
    }

    pub fn dom(&self) -> &Space {
        &self.dom
    }

    pub fn cod(&self) -> &Space {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, point: usize) -> usize {
        self.table[point]
    }

    pub fn preimage(&self, set: PointSet) -> PointSet {
        preimage_of(&self.table, set)
    }

    /// Codomain atom hit by a domain atom (well defined because the map is measurable).
    pub fn atom_image(&self, dom_atom: usize) -> usize {
        self.cod.atom_of(self.table[self.dom.atom_point(dom_atom)])
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &MeasMap) -> Result<MeasMap> {
        same_space(&first.cod, &self.dom)?;
        let table = first.table.iter().map(|&q| self.table[q]).collect();
        Ok(MeasMap { dom: first.dom.clone(), cod: self.cod.clone(), table })
    }
}

pub fn same_space(a: &Space, b: &Space) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch(format!("{a} vs {b}")))
    }
}

/// A measurable function into the unit interval, stored by its value on each atom.
#[derive(Clone, Debug, PartialEq)]
pub struct IFunction {
    space: Space,
    values: Vec<Rat>,
}

impl IFunction {
    pub fn new(space: Space, values: Vec<Rat>) -> Result<IFunction> {
        if values.len() != space.num_atoms() {
            return Err(Error::Arity { expected: space.num_atoms(), found: values.len() });
        }
        if let Some((k, v)) = values.iter().enumerate().find(|(_, v)| !in_unit(v)) {
            return Err(Error::OutOfUnitInterval {
                value: rational::fmt(v),
                at: format!("atom {k}"),
            });
        }
        Ok(IFunction { space, values })
    }

    /// Ingests a pointwise table, checking it is constant on atoms.
    pub fn from_points(space: Space, pointwise: Vec<Rat>) -> Result<IFunction> {
        if pointwise.len() != space.len() {
            return Err(Error::Arity { expected: space.len(), found: pointwise.len() });
        }
        let mut values = Vec::with_capacity(space.num_atoms());
        for (k, a) in space.atoms().iter().enumerate() {
            let rep = &pointwise[a.min_point().expect("atoms are nonempty")];
            if a.points().any(|p| pointwise[p] != *rep) {
                return Err(Error::NotConstantOnAtom(k));
            }
            values.push(rep.clone());
        }
        IFunction::new(space, values)
    }

    pub fn constant(space: Space, r: Rat) -> Result<IFunction> {
        let values = vec![r; space.num_atoms()];
        IFunction::new(space, values)
    }

    pub fn zero(space: Space) -> IFunction {
        IFunction { values: vec![zero(); space.num_atoms()], space }
    }

    /// χ_A for a measurable set A.
    pub fn characteristic(space: Space, set: PointSet) -> Result<IFunction> {
        space.require_measurable(set)?;
        let values = space
            .atoms()
            .iter()
            .map(|a| if a.is_subset(set) { one() } else { zero() })
            .collect();
        Ok(IFunction { space, values })
    }

    pub fn atom_indicator(space: Space, atom: usize) -> IFunction {
        let mut values = vec![zero(); space.num_atoms()];
        values[atom] = one();
        IFunction { space, values }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn at_atom(&self, atom: usize) -> &Rat {
        &self.values[atom]
    }

    pub fn at_point(&self, point: usize) -> &Rat {
        &self.values[self.space.atom_of(point)]
    }

    /// `self ∘ g`, for `self` defined on the codomain of `g`.
    pub fn compose(&self, g: &MeasMap) -> Result<IFunction> {
        same_space(&self.space, g.cod())?;
        let values = (0..g.dom().num_atoms())
            .map(|k| self.values[g.atom_image(k)].clone())
            .collect();
        Ok(IFunction { space: g.dom().clone(), values })
    }

    /// `r·f + (1−r)·g`.
    pub fn mix(r: &Rat, f: &IFunction, g: &IFunction) -> Result<IFunction> {
        same_space(&f.space, &g.space)?;
        if !in_unit(r) {
            return Err(Error::OutOfUnitInterval { value: rational::fmt(r), at: "mixing weight".into() });
        }
        let s = one() - r;
        let values = f
            .values
            .iter()
            .zip(&g.values)
            .map(|(a, b)| r * a + &s * b)
            .collect();
        Ok(IFunction { space: f.space.clone(), values })
    }

    pub fn scale(&self, r: &Rat) -> Result<IFunction> {
        IFunction::new(self.space.clone(), self.values.iter().map(|v| r * v).collect())
    }

    /// Pointwise sum; fails when the sum leaves [0,1].
    pub fn add(&self, other: &IFunction) -> Result<IFunction> {
        same_space(&self.space, &other.space)?;
        IFunction::new(
            self.space.clone(),
            self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn le(&self, other: &IFunction) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn abc_a() -> Space {
        Arc::new(FinSpace::generate(&["a", "b", "c"], &[vec!["a"]]).unwrap())
    }

    #[test]
    fn generated_atoms_split_by_generator() {
        let s = abc_a();
        assert_eq!(s.atoms(), &[PointSet(0b001), PointSet(0b110)]);
        assert_eq!(s.sigma(), &[PointSet(0), PointSet(0b001), PointSet(0b110), PointSet(0b111)]);
    }

    #[test]
    fn trivial_and_discrete_generation() {
        let t = FinSpace::generate::<&str>(&["a"], &[]).unwrap();
        assert_eq!(t.sigma(), &[PointSet(0), PointSet(1)]);
        let d = FinSpace::generate(&["a", "b"], &[vec!["a"], vec!["b"]]).unwrap();
        assert_eq!(d.sigma().len(), 4);
    }

    #[test]
    fn generator_outside_carrier_is_rejected() {
        let err = FinSpace::generate(&["a", "b"], &[vec!["z"]]).unwrap_err();
        assert!(matches!(err, Error::NotASubset(_)));
    }

    #[test]
    fn carrier_cap_is_enforced() {
        let labels: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        let err = FinSpace::generate_with_cap::<String>(&labels, &[], 4).unwrap_err();
        assert_eq!(err, Error::CarrierTooLarge { len: 5, cap: 4 });
        assert!(matches!(FinSpace::discrete(&["x", "x"]), Err(Error::DuplicateLabel(_))));
    }

    #[test]
    fn atoms_of_discrete_and_indiscrete() {
        let d = FinSpace::discrete(&["a", "b", "c"]).unwrap();
        assert_eq!(d.atoms(), &[PointSet(1), PointSet(2), PointSet(4)]);
        let i = FinSpace::indiscrete(&["a", "b", "c"]).unwrap();
        assert_eq!(i.atoms(), &[PointSet(0b111)]);
    }

    #[test]
    fn from_sigma_reports_missing_closure() {
        let labels = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let err = FinSpace::from_sigma(labels.clone(), &[PointSet(0), PointSet(1), PointSet(7)]).unwrap_err();
        assert!(err.to_string().contains("complement"));
        let ok = FinSpace::from_sigma(labels, &[PointSet(0), PointSet(1), PointSet(6), PointSet(7)]).unwrap();
        assert_eq!(ok, *abc_a());
    }

    #[test]
    fn measurability_of_maps() {
        let triv = Arc::new(FinSpace::indiscrete(&["a", "b"]).unwrap());
        let disc = Arc::new(FinSpace::discrete(&["x", "y"]).unwrap());
        assert!(!is_measurable(&triv, &disc, &[0, 1]));
        assert!(MeasMap::new(triv.clone(), disc.clone(), vec![0, 1]).is_err());
        assert!(is_measurable(&triv, &disc, &[1, 1]));
        let id = MeasMap::identity(abc_a());
        assert!(is_measurable(id.dom(), id.cod(), id.table()));
    }

    #[test]
    fn characteristic_functions() {
        let s = abc_a();
        let chi = IFunction::characteristic(s.clone(), s.set(&["b", "c"]).unwrap()).unwrap();
        assert_eq!(chi.values(), &[zero(), one()]);
        let all = IFunction::characteristic(s.clone(), s.full()).unwrap();
        assert!(all.values().iter().all(|v| *v == one()));
        let none = IFunction::characteristic(s.clone(), PointSet::EMPTY).unwrap();
        assert!(none.is_zero());
        let bad = IFunction::characteristic(s.clone(), s.set(&["b"]).unwrap());
        assert!(matches!(bad, Err(Error::NotMeasurable(_))));
    }

    #[test]
    fn pointwise_ingestion_checks_atoms_and_range() {
        let s = abc_a();
        let f = IFunction::from_points(s.clone(), vec![rat(1, 2), rat(1, 3), rat(1, 3)]).unwrap();
        assert_eq!(f.values(), &[rat(1, 2), rat(1, 3)]);
        assert_eq!(
            IFunction::from_points(s.clone(), vec![zero(), zero(), one()]),
            Err(Error::NotConstantOnAtom(1))
        );
        assert!(IFunction::from_points(s, vec![rat(3, 2), zero(), zero()]).is_err());
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let s = FinSpace::generate(&["a", "b", "c", "d"], &[vec!["a", "b"], vec!["b", "c"]]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: FinSpace = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
