use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

pub type Rational = BigRational;

/// Per-conductor reduction data: the power basis has `phi` elements and
/// `powers[k]` holds the coordinates of ω^k for every residue `k < n`.
struct Field {
    n: u32,
    phi: usize,
    powers: Vec<Vec<i64>>,
}

fn mobius(mut n: u64) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial.
fn poly_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    if rem.len() <= db {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (k, bk) in b.iter().enumerate() {
            rem[i + k] -= &c * bk;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|r| r.is_zero()));
    q
}

/// Coefficients (low to high) of the n-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    let n = n as u64;
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let mut f = vec![BigInt::zero(); d as usize + 1];
        f[0] = BigInt::from(-1);
        f[d as usize] = BigInt::one();
        match mobius(n / d) {
            1 => num = poly_mul(&num, &f),
            -1 => den = poly_mul(&den, &f),
            _ => {}
        }
    }
    poly_div_monic(&num, &den)
}

pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

impl Field {
    fn new(n: u32) -> Field {
        let cp = cyclotomic_polynomial(n);
        let phi = cp.len() - 1;
        let cp: Vec<i64> = cp
            .iter()
            .map(|c| c.to_i64().expect("small cyclotomic coefficient"))
            .collect();
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x and reduce with the monic polynomial
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            next[1..phi].copy_from_slice(&cur[..phi - 1]);
            if top != 0 {
                for l in 0..phi {
                    next[l] -= top * cp[l];
                }
            }
            cur = next;
        }
        Field { n, phi, powers }
    }
}

fn field(n: u32) -> Arc<Field> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cyclotomic cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(Field::new(n)))
        .clone()
}

/// An element of ℚ(ω_n), stored as integer coordinates in the power basis
/// over a common positive denominator.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<Field>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclotomic {
    pub fn zero(n: u32) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let f = field(n);
        let phi = f.phi;
        Cyclotomic {
            field: f,
            num: vec![BigInt::zero(); phi],
            den: BigInt::one(),
        }
    }

    pub fn one(n: u32) -> Self {
        Self::from_int(n, 1)
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        let mut z = Self::zero(n);
        z.num[0] = BigInt::from(v);
        z
    }

    pub fn from_rational(n: u32, r: &Rational) -> Self {
        let mut z = Self::zero(n);
        z.num[0] = r.numer().clone();
        z.den = r.denom().clone();
        z.normalize();
        z
    }

    pub fn from_frac(n: u32, p: i64, q: i64) -> Self {
        Self::from_rational(n, &Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// ω_n^k for any integer k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let f = field(n);
        let e = k.rem_euclid(n as i64) as usize;
        let num = f.powers[e].iter().map(|&c| BigInt::from(c)).collect();
        Cyclotomic {
            field: f,
            num,
            den: BigInt::one(),
        }
    }

    /// Canonical element Σ c_k ω_n^k from an arbitrary exponent map.
    pub fn reduce(raw: &BTreeMap<i64, Rational>, n: u32) -> Self {
        let f = field(n);
        let mut den = BigInt::one();
        for r in raw.values() {
            den = den.lcm(r.denom());
        }
        let mut num = vec![BigInt::zero(); f.phi];
        for (&k, r) in raw {
            if r.is_zero() {
                continue;
            }
            let scaled = r.numer() * (&den / r.denom());
            let p = &f.powers[k.rem_euclid(n as i64) as usize];
            for (l, &c) in p.iter().enumerate() {
                if c != 0 {
                    num[l] += &scaled * c;
                }
            }
        }
        let mut z = Cyclotomic { field: f, num, den };
        z.normalize();
        z
    }

    pub fn conductor(&self) -> u32 {
        self.field.n
    }

    /// Rational coordinates in the power basis 1, ω, …, ω^{φ(n)−1}.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Integer value, if the element is a rational integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_rational() && self.den.is_one() {
            Some(self.num[0].clone())
        } else {
            None
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|v| v.to_i64())
    }

    pub fn is_real(&self) -> bool {
        *self == self.conjugate()
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    fn with_num(&self, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut z = Cyclotomic {
            field: self.field.clone(),
            num,
            den,
        };
        z.normalize();
        z
    }

    /// Express this element at a conductor divisible by its own.
    pub fn lift_conductor(&self, m: u32) -> Result<Self> {
        let n = self.conductor();
        if m == 0 || !m.is_multiple_of(n) {
            return Err(Error::ConductorMismatch { from: n, to: m });
        }
        if m == n {
            return Ok(self.clone());
        }
        let f = field(m);
        let step = (m / n) as usize;
        let mut num = vec![BigInt::zero(); f.phi];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (l, &p) in f.powers[(i * step) % m as usize].iter().enumerate() {
                if p != 0 {
                    num[l] += c * p;
                }
            }
        }
        let mut z = Cyclotomic {
            field: f,
            num,
            den: self.den.clone(),
        };
        z.normalize();
        Ok(z)
    }

    /// Lift to `m` when possible, otherwise to lcm(n, m).
    pub fn at_least(&self, m: u32) -> Self {
        let target = self.conductor().lcm(&m);
        self.lift_conductor(target).expect("lcm is a multiple")
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let n = a.conductor().lcm(&b.conductor());
        (a.lift_conductor(n).unwrap(), b.lift_conductor(n).unwrap())
    }

    /// Field automorphism ω ↦ ω^k, for k coprime to the conductor.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.conductor() as i64;
        assert_eq!(k.rem_euclid(n).gcd(&n), 1, "galois exponent must be a unit");
        let f = &self.field;
        let mut num = vec![BigInt::zero(); f.phi];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((i as i64) * k).rem_euclid(n) as usize;
            for (l, &p) in f.powers[e].iter().enumerate() {
                if p != 0 {
                    num[l] += c * p;
                }
            }
        }
        self.with_num(num, self.den.clone())
    }

    /// Complex conjugation, i.e. ω ↦ ω^{−1}.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(Self::from_rational(self.conductor(), &r.recip()));
        }
        // z^{-1} = (product of the other Galois conjugates) / norm
        let n = self.conductor() as i64;
        let mut others = Self::one(self.conductor());
        for k in 2..n {
            if k.gcd(&n) == 1 {
                others = &others * &self.galois(k);
            }
        }
        let norm = (self * &others)
            .to_rational()
            .expect("norm of a cyclotomic number is rational");
        Ok(others.scale(&norm.recip()))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        self.with_num(num, &self.den * r.denom())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let num = self.num.iter().map(|c| c * k).collect();
        self.with_num(num, self.den.clone())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.conductor());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.invert()?.pow((-e) as u32))
        }
    }

    /// Image under the standard embedding ω_n ↦ exp(2πi/n).
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.conductor() as f64;
        let den = big_to_f64(&self.den);
        let (mut re, mut im) = (0.0, 0.0);
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = big_to_f64(c) / den;
            let t = std::f64::consts::TAU * i as f64 / n;
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }

    /// Hashable canonical key, valid for comparisons within one conductor.
    pub fn key(&self) -> (u32, Vec<BigInt>, BigInt) {
        (self.conductor(), self.num.clone(), self.den.clone())
    }

    /// Order of this element as a root of unity, if it is one.
    pub fn root_order(&self) -> Option<u32> {
        let n = self.conductor();
        (0..2 * n as i64)
            .find(|&k| *self == Self::root_of_unity(2 * n, k))
            .map(|k| (2 * n) / (k as u32).gcd(&(2 * n)))
    }

    /// Exponent k with self = ω_n^k, if self is an n-th root of unity.
    pub fn root_exponent(&self) -> Option<u32> {
        let n = self.conductor();
        (0..n as i64)
            .find(|&k| *self == Self::root_of_unity(n, k))
            .map(|k| k as u32)
    }

    /// An m-th root lying in the same field, if one exists.
    ///
    /// Candidates are obtained by choosing a branch in every complex
    /// embedding, recovering rational coordinates, and verifying exactly.
    pub fn nth_root(&self, m: u32) -> Option<Self> {
        let n = self.conductor();
        if self.is_zero() || m == 1 {
            return Some(self.clone());
        }
        if let Some(r) = self.to_rational() {
            if let Some(root) = rational_root(&r, m) {
                return Some(Self::from_rational(n, &root));
            }
        }
        let units: Vec<i64> = (1..n as i64)
            .filter(|k| k.gcd(&(n as i64)) == 1 || n == 1)
            .collect();
        let units = if n <= 2 { vec![1] } else { units };
        // the field norm of an m-th power is an m-th power in Q
        let norm = units
            .iter()
            .fold(Self::one(n), |acc, &k| &acc * &self.galois(k));
        rational_root(&norm.to_rational()?, m)?;
        let reps: Vec<i64> = units
            .iter()
            .copied()
            .filter(|&k| 2 * k < n as i64 || n <= 2)
            .collect();
        let images: Vec<(f64, f64)> = reps.iter().map(|&k| self.galois(k).to_complex()).collect();
        let combos = (m as u64).checked_pow(reps.len() as u32)?;
        if combos > 200_000 {
            return None;
        }
        let phi = self.field.phi;
        for code in 0..combos {
            let mut c = code;
            let mut vals = Vec::with_capacity(reps.len());
            for &(re, im) in &images {
                let branch = (c % m as u64) as f64;
                c /= m as u64;
                let r = (re * re + im * im).sqrt().powf(1.0 / m as f64);
                let t = (im.atan2(re) + std::f64::consts::TAU * branch) / m as f64;
                vals.push((r * t.cos(), r * t.sin()));
            }
            let Some(coords) = recover_coordinates(n, &reps, &vals, phi) else {
                continue;
            };
            let mut raw = BTreeMap::new();
            for (i, q) in coords.into_iter().enumerate() {
                raw.insert(i as i64, q);
            }
            let cand = Self::reduce(&raw, n);
            if cand.pow(m) == *self {
                return Some(cand);
            }
        }
        None
    }
}

/// Exact rational m-th root, if it exists.
fn rational_root(r: &Rational, m: u32) -> Option<Rational> {
    let neg = r.is_negative();
    if neg && m.is_multiple_of(2) {
        return None;
    }
    let root = |b: &BigInt| {
        let c = b.abs().nth_root(m);
        (c.pow(m) == b.abs()).then_some(c)
    };
    let num = root(r.numer())?;
    let den = root(r.denom())?;
    let q = Rational::new(num, den);
    Some(if neg { -q } else { q })
}

fn big_to_f64(b: &BigInt) -> f64 {
    b.to_f64().unwrap_or(f64::NAN)
}

/// Solve numerically for the power-basis coordinates of an element whose
/// images under ω ↦ exp(2πik/n), k ∈ reps, are `vals`, and round them to
/// small rationals.
fn recover_coordinates(
    n: u32,
    reps: &[i64],
    vals: &[(f64, f64)],
    phi: usize,
) -> Option<Vec<Rational>> {
    // Real system: for each embedding, real and imaginary parts.
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (&k, &(re, im)) in reps.iter().zip(vals) {
        let mut r_re = Vec::with_capacity(phi + 1);
        let mut r_im = Vec::with_capacity(phi + 1);
        for i in 0..phi {
            let t = std::f64::consts::TAU * (k * i as i64) as f64 / n as f64;
            r_re.push(t.cos());
            r_im.push(t.sin());
        }
        r_re.push(re);
        r_im.push(im);
        rows.push(r_re);
        if n > 2 {
            rows.push(r_im);
        }
    }
    if rows.len() < phi {
        return None;
    }
    // Gaussian elimination with partial pivoting (least squares not needed:
    // the system is square for n > 2 and has phi = 1 rows for n ≤ 2).
    let m = rows.len();
    let mut piv_row = 0;
    let mut where_ = vec![usize::MAX; phi];
    for col in 0..phi {
        let best = (piv_row..m)
            .max_by(|&a, &b| rows[a][col].abs().partial_cmp(&rows[b][col].abs()).unwrap())?;
        if rows[best][col].abs() < 1e-12 {
            continue;
        }
        rows.swap(piv_row, best);
        let p = rows[piv_row][col];
        for v in rows[piv_row].iter_mut() {
            *v /= p;
        }
        for r in 0..m {
            if r != piv_row {
                let f = rows[r][col];
                if f != 0.0 {
                    for c in 0..=phi {
                        rows[r][c] -= f * rows[piv_row][c];
                    }
                }
            }
        }
        where_[col] = piv_row;
        piv_row += 1;
    }
    let mut out = Vec::with_capacity(phi);
    for col in 0..phi {
        if where_[col] == usize::MAX {
            return None;
        }
        out.push(approximate_rational(rows[where_[col]][phi], 1_000_000)?);
    }
    Some(out)
}

/// Continued-fraction approximation with bounded denominator.
pub fn approximate_rational(x: f64, max_den: i64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = v - a as f64;
        if (h1 as f64 / k1 as f64 - x).abs() < 1e-9 || frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if k1 == 0 || (h1 as f64 / k1 as f64 - x).abs() > 1e-7 {
        return None;
    }
    Some(Rational::new(BigInt::from(h1), BigInt::from(k1)))
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor() == other.conductor() {
            self.den == other.den && self.num == other.num
        } else {
            let (a, b) = Self::aligned(self, other);
            a.den == b.den && a.num == b.num
        }
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.conductor() != rhs.conductor() {
            let (a, b) = Cyclotomic::aligned(self, rhs);
            return &a + &b;
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            let num = self.num.iter().zip(&rhs.num).map(|(a, b)| a + b).collect();
            return self.with_num(num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(a, b)| a * &rhs.den + b * &self.den)
            .collect();
        self.with_num(num, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(mut self) -> Cyclotomic {
        for c in self.num.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.conductor() != rhs.conductor() {
            let (a, b) = Cyclotomic::aligned(self, rhs);
            return &a * &b;
        }
        if self.is_zero() || rhs.is_zero() {
            return Cyclotomic::zero(self.conductor());
        }
        if self.is_rational() {
            let k = &self.num[0];
            let num = rhs.num.iter().map(|c| c * k).collect();
            return rhs.with_num(num, &self.den * &rhs.den);
        }
        if rhs.is_rational() {
            return rhs * self;
        }
        let f = &self.field;
        let phi = f.phi;
        let mut conv = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = conv.drain(..phi).collect();
        for (off, c) in conv.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (phi + off) % f.n as usize;
            for (l, &p) in f.powers[k].iter().enumerate() {
                if p != 0 {
                    num[l] += &c * p;
                }
            }
        }
        self.with_num(num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    /// Panics on division by zero; use [`Cyclotomic::invert`] for a fallible
    /// version.
    fn div(self, rhs: &Cyclotomic) -> Cyclotomic {
        self * &rhs.invert().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Cyclotomic> for &'a Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self + rhs;
    }
}
impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self - rhs;
    }
}
impl MulAssign<&Cyclotomic> for Cyclotomic {
    fn mul_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for Cyclotomic {
    /// GAP-style rendering, e.g. `-1/2 + 3*E(12)^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.conductor();
        let mut first = true;
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = Rational::new(c.clone(), self.den.clone());
            let neg = q.is_negative();
            let a = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let root = match i {
                0 => String::new(),
                1 => format!("E({n})"),
                _ => format!("E({n})^{i}"),
            };
            if root.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{root}")?;
            } else {
                write!(f, "{a}*{root}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic[{}]({})", self.conductor(), self)
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicJson {
    conductor: u32,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs()
            .iter()
            .map(|q| [q.numer().to_string(), q.denom().to_string()])
            .collect();
        CyclotomicJson {
            conductor: self.conductor(),
            coeffs,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = CyclotomicJson::deserialize(d)?;
        if j.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        if j.coeffs.len() != euler_phi(j.conductor) {
            return Err(D::Error::custom(
                "coefficient count must equal phi(conductor)",
            ));
        }
        let mut raw = BTreeMap::new();
        for (i, [p, q]) in j.coeffs.iter().enumerate() {
            let p: BigInt = p.parse().map_err(D::Error::custom)?;
            let q: BigInt = q.parse().map_err(D::Error::custom)?;
            if q.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            raw.insert(i as i64, Rational::new(p, q));
        }
        Ok(Cyclotomic::reduce(&raw, j.conductor))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(pairs: &[(i64, i64)]) -> BTreeMap<i64, Rational> {
        pairs
            .iter()
            .map(|&(k, c)| (k, Rational::from_integer(BigInt::from(c))))
            .collect()
    }

    fn sqrt5(n: u32) -> Cyclotomic {
        // ω5 + ω5⁴ − ω5² − ω5³ = √5
        let m = n / 5;
        Cyclotomic::reduce(
            &raw(&[
                (m as i64, 1),
                (4 * m as i64, 1),
                (2 * m as i64, -1),
                (3 * m as i64, -1),
            ]),
            n,
        )
    }

    #[test]
    fn cyclotomic_polynomials() {
        let c12: Vec<i64> = cyclotomic_polynomial(12)
            .iter()
            .map(|c| c.to_i64().unwrap())
            .collect();
        assert_eq!(c12, vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(1).len(), 2);
        assert_eq!(cyclotomic_polynomial(60).len() - 1, 16);
    }

    #[test]
    fn i_squared() {
        let z = Cyclotomic::reduce(&raw(&[(2, 1)]), 4);
        assert_eq!(z, Cyclotomic::from_int(4, -1));
    }

    #[test]
    fn golden_sections() {
        let half = Rational::new(1.into(), 2.into());
        let phi_plus = (Cyclotomic::one(5) + sqrt5(5)).scale(&half);
        let phi_minus = (Cyclotomic::one(5) - sqrt5(5)).scale(&half);
        let s = Cyclotomic::reduce(&raw(&[(1, 1), (4, 1)]), 5);
        assert_eq!(s, -&phi_minus);
        assert_eq!(&phi_plus * &phi_minus, Cyclotomic::from_int(5, -1));
        // the inverse of −φ⁻ is φ⁺, checked by multiplying back to 1
        let inv = s.invert().unwrap();
        assert!((&inv * &s).is_one());
        assert_eq!(inv, phi_plus);
    }

    #[test]
    fn sqrt_two() {
        let s = Cyclotomic::reduce(&raw(&[(1, 1), (7, 1)]), 8);
        assert_eq!(&s * &s, Cyclotomic::from_int(8, 2));
        assert!(s.is_real());
    }

    #[test]
    fn lifting() {
        let w3 = Cyclotomic::root_of_unity(3, 1);
        assert_eq!(
            w3.lift_conductor(12).unwrap(),
            Cyclotomic::root_of_unity(12, 4)
        );
        assert!(w3.lift_conductor(10).is_err());
        let mut phi = Cyclotomic::reduce(&raw(&[(2, -1), (3, -1)]), 5);
        phi = phi.lift_conductor(60).unwrap();
        assert_eq!(phi, -Cyclotomic::reduce(&raw(&[(24, 1), (36, 1)]), 60));
        assert_eq!(phi.conductor(), 60);
    }

    #[test]
    fn inverse_and_conjugate() {
        for n in [3u32, 4, 5, 7, 8, 12, 24] {
            let w = Cyclotomic::root_of_unity(n, 1);
            assert_eq!(
                w.invert().unwrap(),
                Cyclotomic::root_of_unity(n, n as i64 - 1)
            );
            assert_eq!(w.conjugate(), Cyclotomic::root_of_unity(n, -1));
        }
        assert!(Cyclotomic::zero(7).invert().is_err());
        let z = Cyclotomic::one(8) + Cyclotomic::root_of_unity(8, 1).scale_int(2);
        let zc = z.conjugate();
        assert_eq!(
            zc,
            Cyclotomic::one(8) + Cyclotomic::root_of_unity(8, 7).scale_int(2)
        );
        assert!((&z + &zc).is_real());
    }

    #[test]
    fn roots() {
        let two = Cyclotomic::from_int(8, 2);
        let r = two.nth_root(2).unwrap();
        assert_eq!(&r * &r, two);
        let w = Cyclotomic::root_of_unity(12, 4);
        let c = w.nth_root(2).unwrap();
        assert_eq!(c.pow(2), w);
        assert!(Cyclotomic::from_int(3, 2).nth_root(2).is_none());
        assert_eq!(Cyclotomic::root_of_unity(12, 3).root_order(), Some(4));
    }

    #[test]
    fn json_roundtrip() {
        let z = Cyclotomic::root_of_unity(12, 5).scale(&Rational::new(3.into(), 7.into()));
        let s = serde_json::to_string(&z).unwrap();
        let back: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        assert!(s.contains("\"conductor\":12"));
    }

    #[test]
    fn display() {
        let z = Cyclotomic::from_frac(12, -1, 2) + Cyclotomic::root_of_unity(12, 1).scale_int(3);
        assert_eq!(z.to_string(), "-1/2 + 3*E(12)");
    }
}
