//! Unit, multiplication and Kleisli structure on finitely supported measures.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measure::{Measure, WeightMap, WeightsJson};
use crate::rational::{self, one, zero, Rat};
use crate::sigma::{same_space, FinSpace, MeasMap, Space};

/// Dirac measure at a point.
pub fn unit(space: Space, point: usize) -> Result<Measure> {
    Measure::dirac(space, point)
}

/// A finitely supported probability measure on the measures over `base`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetaMeasure {
    base: Space,
    support: Vec<(Measure, Rat)>,
}

impl MetaMeasure {
    pub fn new(base: Space, support: Vec<(Measure, Rat)>) -> Result<MetaMeasure> {
        for (m, w) in &support {
            same_space(&base, m.space())?;
            if w.is_negative() {
                return Err(Error::NegativeWeight { value: rational::fmt(w), at: "mixture component".into() });
            }
        }
        let total: Rat = support.iter().map(|(_, w)| w).sum();
        if total != one() {
            return Err(Error::NotNormalized(rational::fmt(&total)));
        }
        Ok(MetaMeasure { base, support })
    }

    /// The point mass at `pi`.
    pub fn dirac(pi: Measure) -> MetaMeasure {
        MetaMeasure { base: pi.space().clone(), support: vec![(pi, one())] }
    }

    /// `Fη(π)`: Diracs at each atom, weighted by `π`.
    pub fn of_diracs(pi: &Measure) -> MetaMeasure {
        let space = pi.space().clone();
        let support = pi
            .weights()
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let d = Measure::dirac(space.clone(), space.atom_point(k)).expect("atom point exists");
                (d, w.clone())
            })
            .collect();
        MetaMeasure { base: space, support }
    }

    pub fn base(&self) -> &Space {
        &self.base
    }

    pub fn support(&self) -> &[(Measure, Rat)] {
        &self.support
    }

    /// `FFg`: pushes every component forward along `g`.
    pub fn map(&self, g: &MeasMap) -> Result<MetaMeasure> {
        let support = self
            .support
            .iter()
            .map(|(m, w)| Ok((m.pushforward(g)?, w.clone())))
            .collect::<Result<_>>()?;
        Ok(MetaMeasure { base: g.cod().clone(), support })
    }

    /// Multiplication one level up: flattens a finite mixture of meta-measures.
    pub fn flatten(base: Space, outer: &[(MetaMeasure, Rat)]) -> Result<MetaMeasure> {
        let mut support = Vec::new();
        for (inner, w) in outer {
            same_space(&base, &inner.base)?;
            support.extend(inner.support.iter().map(|(m, v)| (m.clone(), w * v)));
        }
        MetaMeasure::new(base, support)
    }
}

/// `μ(ρ)(A) = Σᵢ wᵢ πᵢ(A)`, computed atomwise.
pub fn mu(rho: &MetaMeasure) -> Measure {
    let mut weights = vec![zero(); rho.base.num_atoms()];
    for (m, w) in &rho.support {
        for (acc, x) in weights.iter_mut().zip(m.weights()) {
            *acc += w * x;
        }
    }
    Measure::from_parts(rho.base.clone(), weights)
}

/// `F μ` applied to a finite mixture of meta-measures.
pub fn map_mu(base: Space, outer: &[(MetaMeasure, Rat)]) -> Result<MetaMeasure> {
    let support = outer.iter().map(|(r, w)| (mu(r), w.clone())).collect();
    MetaMeasure::new(base, support)
}

/// A Markov kernel: one measure on `cod` per atom of `dom`.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    dom: Space,
    cod: Space,
    rows: Vec<Measure>,
}

impl Kernel {
    pub fn new(dom: Space, cod: Space, rows: Vec<Measure>) -> Result<Kernel> {
        if rows.len() != dom.num_atoms() {
            return Err(Error::Arity { expected: dom.num_atoms(), found: rows.len() });
        }
        for r in &rows {
            same_space(&cod, r.space())?;
        }
        Ok(Kernel { dom, cod, rows })
    }

    /// Builds a kernel between discrete-or-not spaces from raw weight rows.
    pub fn from_rows(dom: Space, cod: Space, rows: Vec<Vec<Rat>>) -> Result<Kernel> {
        let rows = rows
            .into_iter()
            .map(|r| Measure::new(cod.clone(), r))
            .collect::<Result<_>>()?;
        Kernel::new(dom, cod, rows)
    }

    /// The unit kernel `atom ↦ δ_atom`.
    pub fn identity(space: Space) -> Kernel {
        Kernel::deterministic(&MeasMap::identity(space))
    }

    /// `atom ↦ δ_{g(atom)}`.
    pub fn deterministic(g: &MeasMap) -> Kernel {
        let rows = (0..g.dom().num_atoms())
            .map(|k| Measure::dirac(g.cod().clone(), g.apply(g.dom().atom_point(k))).expect("image point exists"))
            .collect();
        Kernel { dom: g.dom().clone(), cod: g.cod().clone(), rows }
    }

    pub fn dom(&self) -> &Space {
        &self.dom
    }

    pub fn cod(&self) -> &Space {
        &self.cod
    }

    pub fn rows(&self) -> &[Measure] {
        &self.rows
    }

    pub fn row(&self, atom: usize) -> &Measure {
        &self.rows[atom]
    }

    /// `k(ω)` for a point of the domain.
    pub fn at_point(&self, point: usize) -> &Measure {
        &self.rows[self.dom.atom_of(point)]
    }

    /// The image mixture `F k (π)`, i.e. `Σ π(atom) δ_{k(atom)}`.
    pub fn image(&self, pi: &Measure) -> Result<MetaMeasure> {
        same_space(pi.space(), &self.dom)?;
        let support = self.rows.iter().cloned().zip(pi.weights().iter().cloned()).collect();
        MetaMeasure::new(self.cod.clone(), support)
    }
}

/// Kleisli extension: `A ↦ Σ_atom π(atom)·k(atom)(A)`.
pub fn bind(pi: &Measure, k: &Kernel) -> Result<Measure> {
    same_space(pi.space(), &k.dom)?;
    let mut weights = vec![zero(); k.cod.num_atoms()];
    for (w, row) in pi.weights().iter().zip(&k.rows) {
        if w.is_zero() {
            continue;
        }
        for (acc, x) in weights.iter_mut().zip(row.weights()) {
            *acc += w * x;
        }
    }
    Ok(Measure::from_parts(k.cod.clone(), weights))
}

/// `k1` followed by `k2`.
pub fn kleisli_compose(k1: &Kernel, k2: &Kernel) -> Result<Kernel> {
    same_space(&k1.cod, &k2.dom)?;
    let rows = k1.rows.iter().map(|r| bind(r, k2)).collect::<Result<_>>()?;
    Ok(Kernel { dom: k1.dom.clone(), cod: k2.cod.clone(), rows })
}

/// Distributions `π0, π1, …, πn` of the chain driven by an endo-kernel.
pub fn n_step_trace(k: &Kernel, pi0: &Measure, n: usize) -> Result<Vec<Measure>> {
    same_space(&k.dom, &k.cod).map_err(|_| Error::SpaceMismatch("kernel is not an endomorphism".into()))?;
    same_space(pi0.space(), &k.dom)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(pi0.clone());
    for i in 0..n {
        let next = bind(&out[i], k)?;
        out.push(next);
    }
    Ok(out)
}

pub fn n_step(k: &Kernel, pi0: &Measure, n: usize) -> Result<Measure> {
    Ok(n_step_trace(k, pi0, n)?.pop().expect("trace is nonempty"))
}

impl Serialize for Kernel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Rows<'a>(&'a [Measure]);
        impl Serialize for Rows<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_map(self.0.iter().enumerate().map(|(k, m)| (k.to_string(), WeightMap(m.weights()))))
            }
        }
        let mut st = s.serialize_struct("Kernel", 3)?;
        st.serialize_field("dom", &*self.dom)?;
        st.serialize_field("cod", &*self.cod)?;
        st.serialize_field("rows", &Rows(&self.rows))?;
        st.end()
    }
}

#[derive(Deserialize)]
struct KernelJson {
    dom: FinSpace,
    cod: FinSpace,
    rows: BTreeMap<String, WeightsJson>,
}

impl<'de> Deserialize<'de> for Kernel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Kernel, D::Error> {
        let j = KernelJson::deserialize(d)?;
        let dom = Space::new(j.dom);
        let cod = Space::new(j.cod);
        let mut rows: Vec<Option<Measure>> = vec![None; dom.num_atoms()];
        for (key, weights) in j.rows {
            let idx: usize = key
                .parse()
                .map_err(|_| D::Error::custom(format!("row key `{key}` is not an atom index")))?;
            if idx >= rows.len() {
                return Err(D::Error::custom(format!("row {idx} out of range (domain has {} atoms)", rows.len())));
            }
            let w = weights.resolve(cod.num_atoms()).map_err(D::Error::custom)?;
            let m = Measure::new(cod.clone(), w).map_err(|e| D::Error::custom(format!("row {idx}: {e}")))?;
            rows[idx] = Some(m);
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| D::Error::custom(format!("row {i} is missing"))))
            .collect::<std::result::Result<_, _>>()?;
        Kernel::new(dom, cod, rows).map_err(D::Error::custom)
    }
}
