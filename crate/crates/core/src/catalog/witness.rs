//! Configurations of disjoint (-2)-classes whose sum is 2-divisible, each
//! checked in an explicit lattice.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::CatalogError;
use crate::lattice::{is_two_divisible, Elaborated, GeneratedLattice, RatMatrix, TwoDivisibility};
use crate::qe::model::render;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    Criterion,
    Fibration,
    NonreducedFibers,
    BaseChange,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub n: usize,
    pub source: WitnessSource,
    /// Description of the lattice the check was carried out in.
    pub lattice: String,
    pub components: Vec<String>,
    pub divisor: String,
    pub half: String,
    pub note: String,
    pub verified: bool,
}

/// A lattice with named rational basis, in which configurations are checked.
pub(crate) struct Frame {
    pub lattice: GeneratedLattice,
    pub labels: Vec<String>,
}

impl Frame {
    pub fn new(
        ambient: RatMatrix,
        generators: &[Vec<BigRational>],
        labels: Vec<String>,
    ) -> Result<Self, CatalogError> {
        Ok(Frame {
            lattice: GeneratedLattice::new(ambient, generators)?,
            labels,
        })
    }

    /// The lattice of an elaborated expression on its own basis. Basis
    /// vectors are labelled `<block>.<i>`, e.g. `D4#2.1`.
    pub fn of_elaborated(e: &Elaborated) -> Result<Self, CatalogError> {
        let dim = e.lattice.rank();
        let mut labels = Vec::with_capacity(dim);
        let mut seen = std::collections::BTreeMap::new();
        for b in &e.blocks {
            let name = if b.twist == 1 {
                b.atom.to_string()
            } else {
                format!("{}({})", b.atom, b.twist)
            };
            let k = seen.entry(name.clone()).or_insert(0usize);
            *k += 1;
            for i in 0..b.rank {
                labels.push(format!("{name}#{k}.{i}"));
            }
        }
        let units: Vec<Vec<BigRational>> = (0..dim).map(|i| unit(dim, i)).collect();
        Frame::new(e.lattice.gram().to_rational(), &units, labels)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn render(&self, v: &[BigRational]) -> String {
        render(&self.labels, v)
    }

    /// Check that the components are pairwise orthogonal (-2)-classes of the
    /// lattice and that their sum is 2-divisible there. Returns the rendered
    /// divisor and half.
    pub fn certify(
        &self,
        components: &[Vec<BigRational>],
    ) -> Result<(String, String), CatalogError> {
        let minus_two = BigRational::from_integer(BigInt::from(-2));
        for (i, c) in components.iter().enumerate() {
            if !self.lattice.contains(c) {
                return Err(CatalogError::Verification(format!(
                    "component {} is not a lattice vector",
                    self.render(c)
                )));
            }
            if self.lattice.pair(c, c) != minus_two {
                return Err(CatalogError::Verification(format!(
                    "component {} has self-intersection != -2",
                    self.render(c)
                )));
            }
            for d in &components[..i] {
                if !self.lattice.pair(c, d).is_zero() {
                    return Err(CatalogError::Verification(format!(
                        "components {} and {} meet",
                        self.render(d),
                        self.render(c)
                    )));
                }
            }
        }
        let mut sum = vec![BigRational::zero(); self.dim()];
        for c in components {
            for (s, x) in sum.iter_mut().zip(c) {
                *s += x;
            }
        }
        let coords = self
            .lattice
            .coordinates(&sum)
            .expect("sum of lattice vectors");
        let integral = self.lattice.lattice()?;
        let class = integral.class(coords)?;
        match is_two_divisible(&integral, &class)? {
            TwoDivisibility::Divisible { witness } => {
                let mut half = vec![BigRational::zero(); self.dim()];
                for (c, b) in witness.iter().zip(self.lattice.basis()) {
                    let c = BigRational::from_integer(c.clone());
                    for (h, x) in half.iter_mut().zip(b) {
                        *h += &c * x;
                    }
                }
                Ok((self.render(&sum), self.render(&half)))
            }
            TwoDivisibility::NotDivisible { .. } => Err(CatalogError::Verification(format!(
                "{} is not 2-divisible",
                self.render(&sum)
            ))),
        }
    }

    pub fn witness(
        &self,
        source: WitnessSource,
        lattice: impl Into<String>,
        names: Vec<String>,
        components: &[Vec<BigRational>],
        note: impl Into<String>,
    ) -> Result<Witness, CatalogError> {
        let (divisor, half) = self.certify(components)?;
        Ok(Witness {
            n: components.len(),
            source,
            lattice: lattice.into(),
            components: names,
            divisor,
            half,
            note: note.into(),
            verified: true,
        })
    }
}

pub(crate) fn unit(dim: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); dim];
    v[i] = BigRational::one();
    v
}
