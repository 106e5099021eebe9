//! Random trigonometric polynomials in the orthonormal basis of a support.
//!
//! For λ with lexicographically positive leading coordinate the basis has
//! `τ_λ = √2 cos⟨θ,λ⟩` and `τ_{-λ} = √2 sin⟨θ,λ⟩`, plus `τ_0 = 1` when
//! `0 ∈ Λ`. The coefficient stored under key `λ` multiplies `τ_λ`.
//!
//! Coefficients are sampled iid standard normal. Zero sets are invariant
//! under positive rescaling, so root counts have the same law as under the
//! uniform distribution on the unit sphere of the coefficient space.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use nalgebra::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, SupportSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Basis {
    One,
    Cos,
    Sin,
}

#[derive(Debug, Clone, PartialEq)]
struct Term {
    basis: Basis,
    /// The lex-positive frequency the basis function oscillates at.
    freq: Vec<f64>,
}

/// `f(θ) = Σ_λ c_λ τ_λ(θ)` with one real coefficient per support point.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    support: SupportSet,
    coeffs: Vec<f64>,
    terms: Vec<Term>,
}

impl TrigPolynomial {
    /// `coeffs[i]` belongs to `support.points()[i]`.
    pub fn new(support: SupportSet, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != support.len() {
            return Err(Error::DimensionMismatch { expected: support.len(), found: coeffs.len() });
        }
        if coeffs.iter().all(|&c| c == 0.0) {
            return Err(Error::InvalidInput("all coefficients are zero".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        let terms = support
            .points()
            .iter()
            .map(|p| {
                if p.is_zero() {
                    Term { basis: Basis::One, freq: p.to_f64() }
                } else if p.is_lex_positive() {
                    Term { basis: Basis::Cos, freq: p.to_f64() }
                } else {
                    Term { basis: Basis::Sin, freq: p.neg().to_f64() }
                }
            })
            .collect();
        Ok(Self { support, coeffs, terms })
    }

    /// Builds from `(λ, c_λ)` pairs; unspecified coefficients are zero.
    pub fn from_terms(support: SupportSet, terms: &[(Vec<i64>, f64)]) -> Result<Self> {
        let mut coeffs = vec![0.0; support.len()];
        for (p, c) in terms {
            let i = support
                .index_of(&LatticeVector(p.clone()))
                .ok_or_else(|| Error::InvalidInput(format!("{p:?} is not in the support")))?;
            coeffs[i] = *c;
        }
        Self::new(support, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.support.dim()
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, p: &[i64]) -> f64 {
        self.support.index_of(&LatticeVector(p.to_vec())).map_or(0.0, |i| self.coeffs[i])
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.support.clone(), self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn evaluate(&self, theta: &[f64]) -> f64 {
        debug_assert_eq!(theta.len(), self.dim());
        self.terms
            .iter()
            .zip(&self.coeffs)
            .map(|(t, &c)| match t.basis {
                Basis::One => c,
                Basis::Cos => c * SQRT_2 * phase(&t.freq, theta).cos(),
                Basis::Sin => c * SQRT_2 * phase(&t.freq, theta).sin(),
            })
            .sum()
    }

    /// Value and gradient in one pass.
    pub fn value_and_gradient(&self, theta: &[f64]) -> (f64, Vec<f64>) {
        let mut value = 0.0;
        let mut grad = vec![0.0; self.dim()];
        for (t, &c) in self.terms.iter().zip(&self.coeffs) {
            if c == 0.0 {
                continue;
            }
            let (d, v) = match t.basis {
                Basis::One => {
                    value += c;
                    continue;
                }
                Basis::Cos => {
                    let (s, co) = phase(&t.freq, theta).sin_cos();
                    (-c * SQRT_2 * s, c * SQRT_2 * co)
                }
                Basis::Sin => {
                    let (s, co) = phase(&t.freq, theta).sin_cos();
                    (c * SQRT_2 * co, c * SQRT_2 * s)
                }
            };
            value += v;
            for (g, &f) in grad.iter_mut().zip(&t.freq) {
                *g += d * f;
            }
        }
        (value, grad)
    }

    pub fn gradient(&self, theta: &[f64]) -> Vec<f64> {
        self.value_and_gradient(theta).1
    }

    /// Laurent coefficients `a_λ` with `f(θ) = Σ a_λ e^{i⟨θ,λ⟩}` and `a_{-λ} = conj(a_λ)`.
    pub fn to_laurent(&self) -> BTreeMap<LatticeVector, Complex<f64>> {
        let mut out = BTreeMap::new();
        for p in self.support.points() {
            if p.is_zero() {
                out.insert(p.clone(), Complex::new(self.coeff(&p.0), 0.0));
            } else if p.is_lex_positive() {
                let a = Complex::new(self.coeff(&p.0), -self.coeff(&p.neg().0)) / SQRT_2;
                out.insert(p.neg(), a.conj());
                out.insert(p.clone(), a);
            }
        }
        out
    }
}

fn phase(freq: &[f64], theta: &[f64]) -> f64 {
    freq.iter().zip(theta).map(|(a, b)| a * b).sum()
}

/// Draws a polynomial with iid standard normal coefficients.
pub fn sample<R: Rng + ?Sized>(support: &SupportSet, rng: &mut R) -> TrigPolynomial {
    let coeffs: Vec<f64> = (0..support.len()).map(|_| rng.sample(StandardNormal)).collect();
    TrigPolynomial::new(support.clone(), coeffs).expect("a Gaussian draw is almost surely nonzero")
}

fn key(p: &LatticeVector) -> String {
    serde_json::to_string(&p.0).expect("integer vector")
}

#[derive(Serialize, Deserialize)]
struct Wire {
    support: SupportSet,
    coeffs: BTreeMap<String, f64>,
}

impl Serialize for TrigPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self.support.points().iter().zip(&self.coeffs).map(|(p, &c)| (key(p), c)).collect();
        Wire { support: self.support.clone(), coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = Wire::deserialize(d)?;
        let mut terms = Vec::with_capacity(wire.coeffs.len());
        for (k, c) in wire.coeffs {
            let p: Vec<i64> = serde_json::from_str(&k).map_err(|e| D::Error::custom(format!("bad key {k:?}: {e}")))?;
            terms.push((p, c));
        }
        TrigPolynomial::from_terms(wire.support, &terms).map_err(D::Error::custom)
    }
}
