//! Exact brute-force oracles for code distance and classical soundness.
//!
//! Both the violation count |Hx| and the distance d(x, ker H) depend only
//! on the syndrome coset of x, so soundness is a minimum over the 2^rank
//! nonzero syndromes. Distances enumerate the kernel of the constraint
//! matrix with the basis split into quotient rows and logical directions,
//! tracking the logical class through a gray-code walk.

use crate::css::{CssCode, Metric};
use crate::gf2::{gray_enumerate, BitMatrix, BitVector, Echelon};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

pub const DEFAULT_BUDGET: u32 = 28;

/// Hard memory stop for the syndrome coset-leader table (one byte per
/// syndrome), independent of the configured budget.
const TABLE_CAP: u32 = 30;

/// Exact nonnegative rational, serialized as "p/q".
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(v: u64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn to_f64(&self) -> f64 {
        let num = self.0.numer();
        let den = self.0.denom();
        str_to_f64(&num.to_string()) / str_to_f64(&den.to_string())
    }

    pub fn min(self, other: Rational) -> Rational {
        if self <= other {
            self
        } else {
            other
        }
    }
}

fn str_to_f64(s: &str) -> f64 {
    s.parse().unwrap_or(f64::INFINITY)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl std::str::FromStr for Rational {
    type Err = Error;

    /// Accepts "p/q" or a bare integer.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad rational '{s}'"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() || num.sign() == num_bigint::Sign::Minus {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let (num, den) = s
            .split_once('/')
            .ok_or_else(|| serde::de::Error::custom("expected p/q"))?;
        let num: BigInt = num.parse().map_err(serde::de::Error::custom)?;
        let den: BigInt = den.parse().map_err(serde::de::Error::custom)?;
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(std::ops::$trait::$method(&self.0, &rhs.0))
            }
        }
        impl std::ops::$trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(std::ops::$trait::$method(self.0, rhs.0))
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);
rational_binop!(Div, div);

/// Coset-leader table over the syndrome space of a check matrix.
/// States are coordinates in a reduced echelon basis of the column space,
/// so state bits map directly onto basis vectors.
struct SyndromeTable {
    rank: u32,
    /// Reduced echelon basis of the column space, as actual syndromes.
    basis: Vec<BitVector>,
    /// Coordinates of each column of h in that basis.
    col_coords: Vec<u32>,
    /// Leader weight per state; filled by breadth-first search from 0.
    dist: Vec<u8>,
}

impl SyndromeTable {
    fn build(h: &BitMatrix, budget: u32) -> Result<Self> {
        let cols_t = h.transpose();
        let mut ech = Echelon::new(h.rows());
        for c in 0..cols_t.rows() {
            ech.insert(cols_t.row(c));
        }
        let rank = ech.rank() as u32;
        if rank > budget.min(TABLE_CAP) {
            return Err(Error::BudgetExceeded {
                needed: rank,
                budget: budget.min(TABLE_CAP),
            });
        }
        let pivots = ech.pivots().to_vec();
        let basis: Vec<BitVector> = ech.rows().to_vec();
        let col_coords: Vec<u32> = (0..h.cols())
            .map(|c| {
                let col = cols_t.row(c);
                // Reduced basis: coordinates are the pivot-position bits.
                pivots
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| col.get(p))
                    .fold(0u32, |acc, (i, _)| acc | 1 << i)
            })
            .collect();

        let size = 1usize << rank;
        let mut dist = vec![u8::MAX; size];
        dist[0] = 0;
        let mut frontier: Vec<u32> = vec![0];
        let mut depth: u8 = 0;
        while !frontier.is_empty() {
            assert!(depth < u8::MAX - 1, "coset leader weight overflow");
            let mut next = Vec::new();
            for &s in &frontier {
                for &c in &col_coords {
                    let t = s ^ c;
                    if dist[t as usize] == u8::MAX {
                        dist[t as usize] = depth + 1;
                        next.push(t);
                    }
                }
            }
            depth += 1;
            frontier = next;
        }
        Ok(SyndromeTable {
            rank,
            basis,
            col_coords,
            dist,
        })
    }

    fn coords_of(&self, syndrome: &BitVector) -> Option<u32> {
        // Valid only for syndromes in the column space; callers pass H x.
        let mut v = syndrome.clone();
        let mut acc = 0u32;
        for (i, b) in self.basis.iter().enumerate() {
            if let Some(p) = b.first_set() {
                if v.get(p) {
                    v.xor_assign(b);
                    acc |= 1 << i;
                }
            }
        }
        v.is_zero().then_some(acc)
    }

    /// A coset leader for the given state: weight dist[state], syndrome
    /// coords equal to state. Walks downhill, one column per step.
    fn leader(&self, state: u32, n: usize) -> BitVector {
        let mut x = BitVector::zeros(n);
        let mut s = state;
        while s != 0 {
            let d = self.dist[s as usize];
            let step = self
                .col_coords
                .iter()
                .position(|&c| self.dist[(s ^ c) as usize] + 1 == d)
                .expect("breadth-first table admits a downhill step");
            x.flip(step);
            s ^= self.col_coords[step];
        }
        x
    }
}

/// Distance from x to ker(h): the leader weight of the coset x + ker(h).
/// Strategy is chosen by the smaller exponent: 2^(cols - rank) gray-code
/// kernel enumeration against 2^rank syndrome table lookup.
pub fn coset_distance(h: &BitMatrix, x: &BitVector, budget: u32) -> Result<usize> {
    if x.len() != h.cols() {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} against {} columns",
            x.len(),
            h.cols()
        )));
    }
    let (rank, kernel) = h.rank_kernel();
    let kernel_exp = (h.cols() - rank) as u32;
    let table_exp = rank as u32;
    if table_exp <= kernel_exp.min(budget) && table_exp <= TABLE_CAP {
        let table = SyndromeTable::build(h, budget)?;
        let s = table
            .coords_of(&h.mul_vec(x))
            .expect("H x lies in the column space");
        return Ok(table.dist[s as usize] as usize);
    }
    if kernel_exp > budget {
        return Err(Error::BudgetExceeded {
            needed: kernel_exp.min(table_exp),
            budget,
        });
    }
    let mut best = x.weight();
    gray_enumerate(h.cols(), &kernel, |v, _| {
        let mut cand = v.clone();
        cand.xor_assign(x);
        best = best.min(cand.weight());
        true
    });
    Ok(best)
}

/// Minimum weight of a vector in ker(constraint) outside the row space of
/// `quotient`. For a CSS code, d_z = brute_distance(h_x, h_z) and
/// d_x = brute_distance(h_z, h_x).
pub fn brute_distance(constraint: &BitMatrix, quotient: &BitMatrix, budget: u32) -> Result<usize> {
    if constraint.cols() != quotient.cols() {
        return Err(Error::DimensionMismatch(
            "constraint and quotient column counts differ".into(),
        ));
    }
    // Basis of ker(constraint) split as [logical directions, quotient rows]
    // so the logical class is the low bits of the gray index.
    let mut ech = Echelon::new(constraint.cols());
    let mut quotient_basis = Vec::new();
    for r in 0..quotient.rows() {
        let row = quotient.row(r);
        if !constraint.mul_vec(&row).is_zero() {
            return Err(Error::Invariant(format!(
                "quotient row {r} is not in the kernel of the constraint"
            )));
        }
        if ech.insert(row.clone()) {
            quotient_basis.push(row);
        }
    }
    let (_, kernel) = constraint.rank_kernel();
    let mut logical_basis = Vec::new();
    for v in kernel {
        if ech.insert(v.clone()) {
            logical_basis.push(v);
        }
    }
    if logical_basis.is_empty() {
        return Err(Error::NoLogicals);
    }
    let exponent = (logical_basis.len() + quotient_basis.len()) as u32;
    if exponent > budget {
        return Err(Error::BudgetExceeded {
            needed: exponent,
            budget,
        });
    }
    let class_mask = (1u64 << logical_basis.len()) - 1;
    let mut basis = logical_basis;
    basis.extend(quotient_basis);
    let mut best = usize::MAX;
    gray_enumerate(constraint.cols(), &basis, |v, index| {
        if index & class_mask != 0 {
            let w = v.weight();
            if w < best {
                best = w;
            }
        }
        true
    });
    Ok(best)
}

pub fn brute_distance_x(code: &CssCode, budget: u32) -> Result<usize> {
    brute_distance(code.h_z(), code.h_x(), budget)
}

pub fn brute_distance_z(code: &CssCode, budget: u32) -> Result<usize> {
    brute_distance(code.h_x(), code.h_z(), budget)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessWitness {
    /// min over x of (|Hx| / rows) / (d(x, ker H) / cols).
    pub rho: Rational,
    /// A coset leader attaining the minimum.
    pub witness: BitVector,
    /// |H witness|.
    pub violated: usize,
    /// d(witness, ker H) = |witness|.
    pub distance: usize,
}

/// Exact classical soundness of a check matrix. The ratio is a function of
/// the syndrome alone, so the minimum runs over all 2^rank - 1 nonzero
/// syndromes via a coset-leader table; a gray-code walk accumulates the
/// actual syndrome vector for the violation count.
pub fn brute_soundness(h: &BitMatrix, budget: u32) -> Result<SoundnessWitness> {
    if h.rows() == 0 || h.rank() == 0 {
        return Err(Error::SoundnessUndefined);
    }
    let table = SyndromeTable::build(h, budget)?;
    let rank = table.rank as usize;
    let mut best: Option<(usize, usize, u32)> = None; // (violated, leader, state)
    let mut syndrome = BitVector::zeros(h.rows());
    let basis = table.basis.clone();
    let mut step: u64 = 0;
    let total: u64 = 1 << rank;
    while step + 1 < total {
        step += 1;
        let j = step.trailing_zeros() as usize;
        syndrome.xor_assign(&basis[j]);
        let state = (step ^ (step >> 1)) as u32;
        let violated = syndrome.weight();
        let leader = table.dist[state as usize] as usize;
        let better = match best {
            None => true,
            // violated/leader < best_v/best_l by cross multiplication.
            Some((bv, bl, _)) => violated * bl < bv * leader,
        };
        if better {
            best = Some((violated, leader, state));
        }
    }
    let (violated, distance, state) = best.ok_or(Error::SoundnessUndefined)?;
    let witness = table.leader(state, h.cols());
    debug_assert_eq!(h.mul_vec(&witness).weight(), violated);
    debug_assert_eq!(witness.weight(), distance);
    let rho = Rational::new((violated * h.cols()) as u64, (distance * h.rows()) as u64);
    Ok(SoundnessWitness {
        rho,
        witness,
        violated,
        distance,
    })
}

#[derive(Clone, Debug)]
pub struct QuantumSoundness {
    /// Soundness of the Z-side check matrix h_z, bounding X-error testing.
    pub rho_x: Metric<Rational>,
    /// Soundness of h_x.
    pub rho_z: Metric<Rational>,
    pub witness_x: Option<SoundnessWitness>,
    pub witness_z: Option<SoundnessWitness>,
}

/// Classical soundness of the two check matrices; the quantum statement
/// reduces to these, one per error type, and no combined value exists.
pub fn quantum_soundness(code: &CssCode, budget: u32) -> Result<QuantumSoundness> {
    let (rho_x, witness_x) = soundness_metric(code.h_z(), budget)?;
    let (rho_z, witness_z) = soundness_metric(code.h_x(), budget)?;
    Ok(QuantumSoundness {
        rho_x,
        rho_z,
        witness_x,
        witness_z,
    })
}

fn soundness_metric(
    h: &BitMatrix,
    budget: u32,
) -> Result<(Metric<Rational>, Option<SoundnessWitness>)> {
    match brute_soundness(h, budget) {
        Ok(w) => Ok((Metric::Exact(w.rho.clone()), Some(w))),
        Err(Error::BudgetExceeded { needed, .. }) => Ok((Metric::Skipped { needed }, None)),
        Err(Error::SoundnessUndefined) => Ok((Metric::Undefined, None)),
        Err(e) => Err(e),
    }
}
