use num_complex::Complex64;
use serde::Serialize;

use super::number::{
    continued_fraction_best, factor_from_order, gcd, is_prime, mod_inverse, modpow, prime_power,
    verified_order_candidate, OrderFailure,
};
use crate::error::{domain, Result};
use crate::qstate::{apply_qft, Limits, OutcomeSelector, RandomSource, StateVector};

/// Rounds allowed by [`rsa_demo`].
pub const DEFAULT_MAX_ROUNDS: usize = 25;

/// Width `2n` of the left register: the smallest even width with `N² < 2^{2n}`.
pub fn register_width(n: u64) -> u32 {
    let sq = n as u128 * n as u128;
    let mut w = 2u32;
    while (1u128 << w) <= sq {
        w += 2;
    }
    w
}

/// One observation of the left register after the QFT.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodSample {
    pub modulus: u64,
    pub base: u64,
    /// Collapsed right-register value `m^x mod N`.
    pub right_value: u64,
    pub w: u64,
    /// Left register width `2n`; `Q = 2^{2n}`.
    pub width: u32,
    /// Continued-fraction candidate `(d', r')` with `r' < N`.
    pub candidate: (u64, u64),
    /// `P(w | right_value)`
    pub probability: f64,
}

/// Period-finding simulator for fixed `(N, m)`.
///
/// The right register is never stored as amplitudes: it is the table
/// `x ↦ m^x mod N`. Collapsing it to a value `z` leaves the left register in
/// the comb over `{x : m^x ≡ z}`, whose QFT is computed per `z` and cached.
#[derive(Debug, Clone)]
pub struct OrderFinder {
    modulus: u64,
    base: u64,
    width: u32,
    /// Distinct right-register values, ascending.
    values: Vec<u64>,
    /// Left indices with each value.
    combs: Vec<Vec<usize>>,
    /// `P(w | z)` per value.
    conditionals: Vec<Vec<f64>>,
}

impl OrderFinder {
    pub fn new(n: u64, m: u64) -> Result<Self> {
        Self::with_limits(n, m, &Limits::default())
    }

    pub fn with_limits(n: u64, m: u64, limits: &Limits) -> Result<Self> {
        if n < 3 {
            return domain(format!("modulus must be at least 3, got {n}"));
        }
        let g = gcd(m, n);
        if g != 1 {
            return domain(format!("gcd({m}, {n}) = {g}; take the classical exit"));
        }
        let width = register_width(n);
        limits.check_state_qubits(width as usize)?;
        let q = 1usize << width;

        let mut table: Vec<(u64, usize)> = Vec::with_capacity(q);
        let mut fx = 1u64;
        for x in 0..q {
            table.push((fx, x));
            fx = ((fx as u128 * m as u128) % n as u128) as u64;
        }
        table.sort_unstable();
        let mut values = Vec::new();
        let mut combs: Vec<Vec<usize>> = Vec::new();
        for (z, x) in table {
            if values.last() != Some(&z) {
                values.push(z);
                combs.push(Vec::new());
            }
            combs.last_mut().expect("pushed above").push(x);
        }

        let dims = vec![2; width as usize];
        let conditionals = combs
            .iter()
            .map(|comb| {
                let amp = Complex64::new(1.0 / (comb.len() as f64).sqrt(), 0.0);
                let mut amps = vec![Complex64::new(0.0, 0.0); q];
                for &x in comb {
                    amps[x] = amp;
                }
                let left = StateVector::new(dims.clone(), amps)?;
                Ok(apply_qft(&left, false).probabilities())
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Self {
            modulus: n,
            base: m,
            width,
            values,
            combs,
            conditionals,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn q(&self) -> u64 {
        1u64 << self.width
    }

    /// Number of distinct right-register values, which is the order of `m`.
    pub fn num_values(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Left-register indices surviving the collapse onto `z`.
    pub fn comb(&self, z: u64) -> Option<&[usize]> {
        self.values.binary_search(&z).ok().map(|i| self.combs[i].as_slice())
    }

    pub fn value_probability(&self, z: u64) -> f64 {
        self.comb(z).map_or(0.0, |c| c.len() as f64 / self.q() as f64)
    }

    pub fn conditional_distribution(&self, z: u64) -> Option<&[f64]> {
        self.values.binary_search(&z).ok().map(|i| self.conditionals[i].as_slice())
    }

    /// Distribution of `w` with the right register unobserved.
    pub fn marginal_distribution(&self) -> Vec<f64> {
        let q = self.q() as f64;
        let mut out = vec![0.0; self.q() as usize];
        for (comb, cond) in self.combs.iter().zip(&self.conditionals) {
            let pz = comb.len() as f64 / q;
            for (o, &p) in out.iter_mut().zip(cond) {
                *o += pz * p;
            }
        }
        out
    }

    /// Observes the right register, then the left one.
    pub fn sample(&self, sel: &mut dyn OutcomeSelector) -> Result<PeriodSample> {
        let q = self.q() as f64;
        let pz: Vec<f64> = self.combs.iter().map(|c| c.len() as f64 / q).collect();
        let zi = sel.select(&pz)?;
        let cond = &self.conditionals[zi];
        let w = sel.select(cond)?;
        let candidate = continued_fraction_best(w as u64, self.q(), self.modulus)?;
        Ok(PeriodSample {
            modulus: self.modulus,
            base: self.base,
            right_value: self.values[zi],
            w: w as u64,
            width: self.width,
            candidate,
            probability: cond[w],
        })
    }
}

/// One simulated period-finding run for `(N, m)`.
pub fn order_find(n: u64, m: u64, sel: &mut dyn OutcomeSelector) -> Result<PeriodSample> {
    OrderFinder::new(n, m)?.sample(sel)
}

/// How a factorization was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorMethod {
    Even,
    PrimePower,
    /// The random base already shared a factor with N.
    Gcd,
    Order,
}

/// One attempt inside [`shor_factor`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShorRound {
    pub base: u64,
    pub sample: Option<PeriodSample>,
    /// Order actually handed to `factor_from_order`.
    pub order_used: Option<u64>,
    pub failure: Option<OrderFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShorOutcome {
    pub modulus: u64,
    /// `None` when every round failed.
    pub factors: Option<(u64, u64)>,
    pub method: Option<FactorMethod>,
    pub rounds: Vec<ShorRound>,
}

/// Order-finding attempts per base before a new base is drawn, about
/// `log log N`.
fn tries_per_base(n: u64) -> usize {
    let ll = (n as f64).log2().log2();
    ll.ceil().max(1.0) as usize
}

/// Factors `N` with simulated order finding. Even moduli and prime powers
/// take classical exits; primes are rejected.
pub fn shor_factor(n: u64, rng: &mut RandomSource, max_rounds: usize) -> Result<ShorOutcome> {
    if n < 4 || is_prime(n) {
        return domain(format!("{n} is not composite"));
    }
    let classical = |p: u64, method| ShorOutcome {
        modulus: n,
        factors: Some((p.min(n / p), p.max(n / p))),
        method: Some(method),
        rounds: Vec::new(),
    };
    if n.is_multiple_of(2) {
        return Ok(classical(2, FactorMethod::Even));
    }
    if let Some((p, _)) = prime_power(n) {
        return Ok(classical(p, FactorMethod::PrimePower));
    }
    // fail early on the size cap rather than inside the loop
    Limits::default().check_state_qubits(register_width(n) as usize)?;

    let mut rounds = Vec::new();
    while rounds.len() < max_rounds {
        let m = rng.range(2, n - 1);
        let g = gcd(m, n);
        if g != 1 {
            rounds.push(ShorRound {
                base: m,
                sample: None,
                order_used: None,
                failure: None,
            });
            return Ok(ShorOutcome {
                modulus: n,
                factors: Some((g.min(n / g), g.max(n / g))),
                method: Some(FactorMethod::Gcd),
                rounds,
            });
        }
        let finder = OrderFinder::new(n, m)?;
        for _ in 0..tries_per_base(n) {
            if rounds.len() >= max_rounds {
                break;
            }
            let sample = finder.sample(rng)?;
            let (w, q) = (sample.w, finder.q());
            let mut order = sample.candidate.1;
            if modpow(m, order, n) != 1 {
                if let Some((_, r)) = verified_order_candidate(w, q, n, m) {
                    order = r;
                }
            }
            let result = factor_from_order(n, m, order);
            rounds.push(ShorRound {
                base: m,
                sample: Some(sample),
                order_used: Some(order),
                failure: result.err(),
            });
            if let Ok(f) = result {
                return Ok(ShorOutcome {
                    modulus: n,
                    factors: Some((f.p, f.q)),
                    method: Some(FactorMethod::Order),
                    rounds,
                });
            }
        }
    }
    Ok(ShorOutcome {
        modulus: n,
        factors: None,
        method: None,
        rounds,
    })
}

/// Bob's side of the RSA game: factor, rebuild the private key, decrypt.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RsaOutcome {
    pub modulus: u64,
    pub e: u64,
    pub ciphertext: u64,
    pub p: u64,
    pub q: u64,
    pub phi: u64,
    pub d: u64,
    pub plaintext: u64,
    pub rounds: usize,
}

pub fn rsa_demo(n: u64, e: u64, ciphertext: u64, rng: &mut RandomSource) -> Result<RsaOutcome> {
    if ciphertext >= n {
        return domain(format!("ciphertext {ciphertext} must be below the modulus {n}"));
    }
    let outcome = shor_factor(n, rng, DEFAULT_MAX_ROUNDS)?;
    let Some((p, q)) = outcome.factors else {
        return domain(format!("factoring {n} failed after {} rounds", outcome.rounds.len()));
    };
    let phi = (p - 1) * (q - 1);
    let Some(d) = mod_inverse(e, phi) else {
        return domain(format!("e = {e} is not invertible modulo φ = {phi}"));
    };
    Ok(RsaOutcome {
        modulus: n,
        e,
        ciphertext,
        p,
        q,
        phi,
        d,
        plaintext: modpow(ciphertext, d, n),
        rounds: outcome.rounds.len(),
    })
}
