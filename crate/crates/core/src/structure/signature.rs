use super::SystemStructure;
use crate::error::{Error, Result};
use crate::numeric::binom_big;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default largest n for the 2^n enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 28;

/// Exact structural signature.
///
/// `s[k-1]` is the probability that the k-th failure (in a random order) kills
/// the system, `sbar[k]` the probability it survives k failures, and `a` the
/// minimal signature.
#[derive(Clone, Debug, PartialEq)]
pub struct Signature {
    s: Vec<BigRational>,
    sbar: Vec<BigRational>,
    a: Vec<BigRational>,
}

impl Signature {
    /// Build from s_1..s_n; entries must be nonnegative and sum to one.
    pub fn from_s(s: Vec<BigRational>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::validation("signature must have at least one entry"));
        }
        if s.iter().any(|x| x.is_negative()) {
            return Err(Error::validation("signature entries must be >= 0"));
        }
        let total: BigRational = s.iter().sum();
        if !total.is_one() {
            return Err(Error::validation(format!("signature sums to {total}, not 1")));
        }
        let n = s.len();
        let mut sbar = Vec::with_capacity(n + 1);
        let mut acc = BigRational::one();
        sbar.push(acc.clone());
        for x in &s {
            acc -= x;
            sbar.push(acc.clone());
        }
        let a = minimal_from_s(&s);
        Ok(Self { s, sbar, a })
    }

    /// Build from integer ratios, e.g. `[(0,1),(2,3),(1,3)]`.
    pub fn from_ratios(r: &[(i64, i64)]) -> Result<Self> {
        if r.iter().any(|&(_, d)| d == 0) {
            return Err(Error::validation("zero denominator"));
        }
        Self::from_s(r.iter().map(|&(p, q)| BigRational::new(p.into(), q.into())).collect())
    }

    /// Build from decimal strings such as "9/325" or "0".
    pub fn parse(entries: &[&str]) -> Result<Self> {
        let s = entries
            .iter()
            .map(|e| {
                e.trim()
                    .parse::<BigRational>()
                    .map_err(|_| Error::validation(format!("cannot parse rational {e:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_s(s)
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    pub fn s(&self) -> &[BigRational] {
        &self.s
    }

    pub fn sbar(&self) -> &[BigRational] {
        &self.sbar
    }

    pub fn a(&self) -> &[BigRational] {
        &self.a
    }

    pub fn s_f64(&self) -> Vec<f64> {
        self.s.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn a_f64(&self) -> Vec<f64> {
        self.a.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Exact renderings like "9/325".
    pub fn s_strings(&self) -> Vec<String> {
        self.s.iter().map(ToString::to_string).collect()
    }
}

fn sign(k: usize) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn minimal_from_s(s: &[BigRational]) -> Vec<BigRational> {
    let n = s.len();
    (1..=n)
        .map(|i| {
            let mut acc = BigRational::zero();
            for k in (n - i + 1)..=n {
                let c = binom_big(i - 1, n - k) * sign(i - 1 - (n - k));
                acc += &s[k - 1] * BigRational::from_integer(c);
            }
            acc * BigRational::from_integer(binom_big(n, i))
        })
        .collect()
}

/// Minimal signature a, with P(T > t) = sum_i a_i exp(-Psi(i) t).
pub fn minimal_signature(sig: &Signature) -> Vec<BigRational> {
    sig.a.clone()
}

/// Signature by counting working states at every level, n <= 28.
pub fn structural_signature(structure: &SystemStructure) -> Result<Signature> {
    structural_signature_with_cap(structure, DEFAULT_ENUMERATION_CAP)
}

pub fn structural_signature_with_cap(structure: &SystemStructure, cap: usize) -> Result<Signature> {
    let n = structure.n();
    if n > cap.min(63) {
        return Err(Error::validation(format!(
            "n = {n} exceeds the enumeration cap of {cap}; a sampling estimator is not provided, \
             supply the signature vector directly instead"
        )));
    }
    let counts = structure.working_counts();
    // sbar_k: fraction of states with n-k working components that work
    let sbar: Vec<BigRational> = (0..=n)
        .map(|k| BigRational::new(BigInt::from(counts[n - k]), binom_big(n, n - k)))
        .collect();
    if !sbar[0].is_one() || !sbar[n].is_zero() {
        return Err(Error::validation("structure is not semi-coherent: endpoints of Phi are wrong"));
    }
    let s: Vec<BigRational> = (1..=n).map(|k| &sbar[k - 1] - &sbar[k]).collect();
    if s.iter().any(|x| x.is_negative()) {
        return Err(Error::validation("structure is not semi-coherent: survival is not monotone in failures"));
    }
    Signature::from_s(s)
}

/// Signature by running every failure order, n <= 8.
pub fn signature_via_permutations(structure: &SystemStructure) -> Result<Signature> {
    let n = structure.n();
    if n > 8 {
        return Err(Error::validation(format!("permutation enumeration needs n <= 8, got {n}")));
    }
    let mut counts = vec![0u64; n];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut tally = |perm: &[usize]| -> Result<()> {
        let mut working = structure.full_mask();
        for (pos, &c) in perm.iter().enumerate() {
            working &= !(1 << c);
            if !structure.is_working(working) {
                counts[pos] += 1;
                return Ok(());
            }
        }
        Err(Error::validation("structure is not semi-coherent: works with all components failed"))
    };
    // Heap's algorithm
    let mut c = vec![0usize; n];
    tally(&perm)?;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            tally(&perm)?;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    Signature::from_s(counts.iter().map(|&x| BigRational::new(x.into(), total.into())).collect())
}
