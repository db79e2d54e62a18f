//! Exact symbolic values of the limit distributions and total-variation
//! distances between empirical and limit laws.
//!
//! Masses are kept in the exact form `q * e^(-m) * e^(-h/2)` with rational
//! `q`, so identity tests are equalities; a single routine converts to float
//! for distances.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::canon::{self, ForestShape, HullTreeCode, RootedTreeCode};
use crate::error::{Error, Result};
use crate::shapes;

/// An exact mass `q * e^(-m) * e^(-h/2)` with `q` rational, `m` a
/// nonnegative integer and `h` in {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMass {
    pub q: BigRational,
    pub m: u64,
    pub h: u8,
}

impl SymbolicMass {
    pub fn zero() -> Self {
        SymbolicMass {
            q: BigRational::zero(),
            m: 0,
            h: 0,
        }
    }

    pub fn value(&self) -> f64 {
        let q = self.q.to_f64().unwrap_or(0.0);
        q * (-(self.m as f64) - 0.5 * self.h as f64).exp()
    }

    /// Multiply by `r * e^(-dm)`; exact.
    pub fn scaled(&self, r: &BigRational, dm: u64) -> SymbolicMass {
        SymbolicMass {
            q: &self.q * r,
            m: self.m + dm,
            h: self.h,
        }
    }
}

/// `p_inf(f) = e^(-1/2) e^(-|f|) / Aut_u(f)` over unrooted forest shapes.
pub fn p_inf(shape: &ForestShape) -> Result<SymbolicMass> {
    let aut = canon::aut_forest(shape)?;
    Ok(SymbolicMass {
        q: BigRational::new(BigInt::one(), BigInt::from(aut)),
        m: shape.total_size(),
        h: 1,
    })
}

/// `a_inf(T) = e^(-|T|) / Aut_r(T)` over rooted tree shapes.
pub fn a_inf(code: &RootedTreeCode) -> SymbolicMass {
    SymbolicMass {
        q: BigRational::new(BigInt::one(), BigInt::from(canon::aut_rooted(code))),
        m: code.size() as u64,
        h: 0,
    }
}

/// `q_inf(T) = e^(-|T|) / Aut_path(T)` for one-exit hull trees, zero mass
/// otherwise.
pub fn q_inf(h: &HullTreeCode) -> SymbolicMass {
    if h.exits() != 1 {
        return SymbolicMass::zero();
    }
    let aut = canon::aut_path(h).expect("one exit");
    SymbolicMass {
        q: BigRational::new(BigInt::one(), BigInt::from(aut)),
        m: h.size() as u64,
        h: 0,
    }
}

/// `Pr(k+1 components) -> e^(-1/2) 2^(-k) / k!` (the 1 + Poisson(1/2) law).
pub fn component_law(k: u64) -> SymbolicMass {
    let mut denom = BigInt::one();
    for j in 1..=k {
        denom *= BigInt::from(j);
    }
    denom *= BigInt::from(2u64).pow(k as u32);
    SymbolicMass {
        q: BigRational::new(BigInt::one(), denom),
        m: 0,
        h: 1,
    }
}

/// Which limit law a partial sum or a distance refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    /// `p_inf` over forest shapes, keyed by `ForestShape::serialize`.
    SmallForest,
    /// `a_inf` over rooted tree codes.
    PendantTree,
    /// `q_inf` over one-exit hull trees of the given radius.
    Hull { radius: u32 },
    /// 1 + Poisson(1/2) over component counts, keyed by the decimal count.
    ComponentCount,
}

/// The law's support within the size bound, as (canonical key, mass) pairs
/// in canonical key order. For `ComponentCount` the bound caps `k`.
pub fn law_table(law: Law, bound: usize) -> Result<Vec<(String, SymbolicMass)>> {
    match law {
        Law::SmallForest => {
            let shapes = shapes::forest_shapes_up_to(bound)?;
            shapes
                .iter()
                .map(|s| Ok((s.serialize(), p_inf(s)?)))
                .collect()
        }
        Law::PendantTree => {
            let by_size = shapes::rooted_shapes_by_size(bound)?;
            Ok(by_size
                .iter()
                .flatten()
                .map(|c| (c.code().to_string(), a_inf(c)))
                .collect())
        }
        Law::Hull { radius } => {
            let shapes = shapes::hull_shapes_one_exit(radius, bound)?;
            Ok(shapes
                .iter()
                .map(|h| (h.code().to_string(), q_inf(h)))
                .collect())
        }
        Law::ComponentCount => Ok((0..=bound as u64)
            .map(|k| (format!("{}", k + 1), component_law(k)))
            .collect()),
    }
}

/// Sum of the law's masses over all shapes within the bound, by exhaustive
/// generation. Monotone in the bound; together with the matching EGF partial
/// sums this is the dual route for the layer identities.
pub fn mass_partial_sum(law: Law, bound: usize) -> Result<f64> {
    if bound < 1 {
        return Err(Error::Empty("size bound must be >= 1".into()));
    }
    Ok(law_table(law, bound)?
        .iter()
        .map(|(_, m)| m.value())
        .sum())
}

/// Exact rational `sum of q` for the masses of one size layer; used to check
/// the layer identities against the counting module.
pub fn a_inf_layer_qsum(n: usize) -> Result<BigRational> {
    let by_size = shapes::rooted_shapes_by_size(n)?;
    Ok(by_size[n]
        .iter()
        .map(|c| a_inf(c).q)
        .fold(BigRational::zero(), |a, b| a + b))
}

/// Exact rational `sum of q` over forest shapes of total size exactly `n`.
pub fn p_inf_layer_qsum(n: usize) -> Result<BigRational> {
    let shapes = shapes::forest_shapes_up_to(n)?;
    let mut acc = BigRational::zero();
    for s in shapes.iter().filter(|s| s.total_size() == n as u64) {
        acc += p_inf(s)?.q;
    }
    Ok(acc)
}

/// Total-variation distance between an empirical distribution (canonical
/// keys, frequencies summing to 1) and a limit law truncated at `bound`.
///
/// Out-of-bound mass is handled symmetrically: both the empirical mass on
/// keys outside the generated support and the law's tail `1 - sum(in-bound)`
/// land in one extra bucket, so truncation cannot fake convergence.
pub fn tv_distance(empirical: &BTreeMap<String, f64>, law: Law, bound: usize) -> Result<f64> {
    let table = law_table(law, bound)?;
    let mut law_in = 0.0;
    let mut emp_in = 0.0;
    let mut acc = 0.0;
    let mut support: BTreeMap<&str, f64> = BTreeMap::new();
    for (key, mass) in &table {
        support.insert(key.as_str(), mass.value());
    }
    for (key, mass) in &support {
        let emp = empirical.get(*key).copied().unwrap_or(0.0);
        acc += (emp - mass).abs();
        law_in += mass;
        emp_in += emp;
    }
    let emp_out = (1.0 - emp_in).max(0.0);
    let law_out = (1.0 - law_in).max(0.0);
    acc += (emp_out - law_out).abs();
    Ok(0.5 * acc)
}
