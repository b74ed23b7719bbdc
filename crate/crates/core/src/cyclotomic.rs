//! Exact arithmetic in cyclotomic fields `Q(ζ_e)`.
//!
//! A value is a rational coefficient vector in the power basis
//! `1, ζ, ..., ζ^(φ(e)-1)`, reduced modulo the `e`-th cyclotomic polynomial.
//! Values with different conductors are lifted to the lcm before combining.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn poly_cache() -> &'static Mutex<HashMap<u32, Arc<[i64]>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<[i64]>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of `Φ_n`, constant term first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<[i64]> {
    assert!(n >= 1, "cyclotomic polynomial of index 0");
    if let Some(p) = poly_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = divide_monic(&num, &cyclotomic_polynomial(d));
    }
    let poly: Arc<[i64]> = num.into();
    poly_cache().lock().unwrap().insert(n, poly.clone());
    poly
}

/// Exact quotient of `a` by the monic polynomial `b`.
fn divide_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![0i64; a.len() - db];
    for k in (db..a.len()).rev() {
        let c = rem[k];
        if c != 0 {
            quot[k - db] = c;
            for (i, &bi) in b.iter().enumerate() {
                rem[k - db + i] -= c * bi;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

pub fn euler_phi(n: u32) -> u32 {
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    e: u32,
    /// Length `φ(e)`.
    coeffs: Vec<Rational64>,
}

impl Cyclotomic {
    pub fn zero(e: u32) -> Self {
        Cyclotomic {
            e,
            coeffs: vec![Rational64::zero(); euler_phi(e) as usize],
        }
    }

    pub fn from_rational(e: u32, r: Rational64) -> Self {
        let mut z = Cyclotomic::zero(e);
        z.coeffs[0] = r;
        z
    }

    pub fn from_integer(e: u32, n: i64) -> Self {
        Cyclotomic::from_rational(e, Rational64::from_integer(n))
    }

    /// `Σ c ζ_e^k` over `(k, c)` pairs; exponents are taken mod `e`.
    pub fn from_powers(e: u32, terms: impl IntoIterator<Item = (u64, Rational64)>) -> Self {
        let mut full = vec![Rational64::zero(); e as usize];
        for (k, c) in terms {
            full[(k % e as u64) as usize] += c;
        }
        Cyclotomic::reduce(e, full)
    }

    /// `ζ_e^k`.
    pub fn root_of_unity(e: u32, k: u64) -> Self {
        Cyclotomic::from_powers(e, [(k, Rational64::one())])
    }

    /// Reduces a coefficient vector of any length modulo `Φ_e`.
    fn reduce(e: u32, mut v: Vec<Rational64>) -> Self {
        let phi = cyclotomic_polynomial(e);
        let deg = phi.len() - 1;
        for k in (deg..v.len()).rev() {
            let c = v[k];
            if !c.is_zero() {
                for (i, &pi) in phi.iter().enumerate() {
                    v[k - deg + i] -= c * pi;
                }
            }
        }
        v.resize(deg, Rational64::zero());
        Cyclotomic { e, coeffs: v }
    }

    pub fn conductor(&self) -> u32 {
        self.e
    }

    pub fn coeffs(&self) -> &[Rational64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<Rational64> {
        self.is_rational().then(|| self.coeffs[0])
    }

    pub fn to_integer(&self) -> Option<i64> {
        self.to_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// Integer coordinates in the power basis, i.e. membership in `Z[ζ_e]`.
    pub fn is_algebraic_integer(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The same number written over a multiple `e2` of the conductor.
    pub fn lift(&self, e2: u32) -> Self {
        assert!(e2.is_multiple_of(self.e), "cannot lift conductor {} to {e2}", self.e);
        if e2 == self.e {
            return self.clone();
        }
        let step = (e2 / self.e) as u64;
        Cyclotomic::from_powers(
            e2,
            self.coeffs.iter().enumerate().map(|(j, &c)| (j as u64 * step, c)),
        )
    }

    /// Image under `ζ_e -> ζ_e^a`; a field automorphism when `gcd(a, e) = 1`.
    pub fn galois(&self, a: u64) -> Self {
        let e = self.e as u64;
        Cyclotomic::from_powers(
            self.e,
            self.coeffs.iter().enumerate().map(|(j, &c)| ((j as u64 * a) % e, c)),
        )
    }

    /// Complex conjugate, `ζ -> ζ^-1`.
    pub fn conjugate(&self) -> Self {
        self.galois(self.e as u64 - 1)
    }

    pub fn scale(&self, r: Rational64) -> Self {
        Cyclotomic {
            e: self.e,
            coeffs: self.coeffs.iter().map(|&c| c * r).collect(),
        }
    }

    fn aligned<'a>(a: &'a Cyclotomic, b: &'a Cyclotomic) -> (std::borrow::Cow<'a, Cyclotomic>, std::borrow::Cow<'a, Cyclotomic>) {
        use std::borrow::Cow;
        if a.e == b.e {
            return (Cow::Borrowed(a), Cow::Borrowed(b));
        }
        let e = a.e.lcm(&b.e);
        (Cow::Owned(a.lift(e)), Cow::Owned(b.lift(e)))
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Cyclotomic::aligned(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::aligned(self, rhs);
        Cyclotomic {
            e: a.e,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            e: self.e,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::aligned(self, rhs);
        let n = a.coeffs.len();
        let mut prod = vec![Rational64::zero(); 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        Cyclotomic::reduce(a.e, prod)
    }
}

impl fmt::Display for Cyclotomic {
    /// `num/den` (or `num`) for rationals, else `cyc(e)[c0, c1, ...]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{r}");
        }
        write!(f, "cyc({})[", self.e)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Rational64::new(n, d)
        }
        None => Rational64::from_integer(s.parse().map_err(|_| bad())?),
    };
    Ok(r)
}

impl Cyclotomic {
    /// Parses the serialized form. Plain rationals get conductor `e`.
    pub fn parse_with_conductor(s: &str, e: u32) -> Result<Self> {
        let s = s.trim();
        let Some(rest) = s.strip_prefix("cyc(") else {
            return Ok(Cyclotomic::from_rational(e, parse_rational(s)?));
        };
        let bad = || Error::Parse(format!("bad cyclotomic `{s}`"));
        let (cond, rest) = rest.split_once(")[").ok_or_else(bad)?;
        let body = rest.strip_suffix(']').ok_or_else(bad)?;
        let cond: u32 = cond.trim().parse().map_err(|_| bad())?;
        if cond == 0 {
            return Err(bad());
        }
        let coeffs = body
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != euler_phi(cond) as usize {
            return Err(bad());
        }
        Ok(Cyclotomic { e: cond, coeffs })
    }
}

impl FromStr for Cyclotomic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Cyclotomic::parse_with_conductor(s, 1)
    }
}

/// Total order on values of a common conductor: coefficient vectors compared
/// lexicographically.
pub fn coefficient_cmp(a: &Cyclotomic, b: &Cyclotomic) -> std::cmp::Ordering {
    let (a, b) = Cyclotomic::aligned(a, b);
    a.coeffs.cmp(&b.coeffs)
}
