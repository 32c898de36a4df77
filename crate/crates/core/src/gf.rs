//! Exact arithmetic in GF(p^n).
//!
//! A [`Field`] is built from a prime `p` and extension degree `n >= 1`. The
//! modulus is the monic irreducible of degree `n` over GF(p) whose coefficient
//! vector `(c_0, ..., c_{n-1})`, read as the base-`p` integer
//! `c_0 + c_1 p + ...`, is smallest; for `n = 1` the modulus is `x`. Elements
//! are coordinate vectors in the power basis, packed into a `u32` code the
//! same way (`code = sum c_i p^i`), so element order by code is the canonical
//! order used everywhere in reports.
//!
//! Construction finds the primitive element `xi` with smallest code and
//! precomputes exponential, discrete-log and Zech-logarithm tables, so that
//! multiplication *and* addition are O(1) table lookups during enumeration.
//! The size guard is `q <= 2^20`.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

/// Hard upper bound on the field size; enumeration workloads square in `q`.
pub const MAX_Q: u64 = 1 << 20;

const LOG_ZERO: u32 = u32::MAX;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("q = {q} exceeds the size guard {guard}")]
    TooLarge { q: u64, guard: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("GF(p^{m}) is not a subfield of GF(p^{n})")]
    NotASubfield { m: usize, n: usize },
    #[error("supplied modulus is not monic of degree n")]
    BadModulus,
    #[error("supplied modulus is reducible")]
    ReducibleModulus,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division; inputs stay below 2^20.
fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Dense polynomials over the prime field GF(p), used only while
/// bootstrapping a field: modulus search and primitive-element order checks.
mod pf {
    pub fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u64) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p;
            }
        }
        rem(prod, modulus, p)
    }

    fn rem(mut v: Vec<u64>, modulus: &[u32], p: u64) -> Vec<u32> {
        let n = modulus.len() - 1;
        // modulus is monic, so each leading coefficient is cleared directly
        for i in (n..v.len()).rev() {
            let c = v[i] % p;
            if c != 0 {
                for (k, &mk) in modulus.iter().enumerate().take(n) {
                    let sub = c * mk as u64 % p;
                    v[i - n + k] = (v[i - n + k] + p - sub) % p;
                }
            }
            v[i] = 0;
        }
        let mut out: Vec<u32> = v.iter().take(n).map(|&c| (c % p) as u32).collect();
        trim(&mut out);
        out
    }

    pub fn pow_mod(base: &[u32], mut e: u64, modulus: &[u32], p: u64) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = base.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, modulus, p);
            }
            b = mul_mod(&b, &b, modulus, p);
            e >>= 1;
        }
        acc
    }

    /// x^(p^k) reduced modulo `modulus`.
    pub fn frobenius_power(k: u32, modulus: &[u32], p: u64) -> Vec<u32> {
        let x = vec![0, 1];
        let mut acc = x.clone();
        for _ in 0..k {
            acc = pow_mod(&acc, p, modulus, p);
        }
        acc
    }

    pub fn gcd(mut a: Vec<u32>, mut b: Vec<u32>, p: u64) -> Vec<u32> {
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = poly_rem(&a, &b, p);
            a = b;
            b = r;
        }
        if let Some(&lc) = a.last() {
            let inv = mod_inv(lc as u64, p);
            for c in a.iter_mut() {
                *c = (*c as u64 * inv % p) as u32;
            }
        }
        a
    }

    fn poly_rem(a: &[u32], b: &[u32], p: u64) -> Vec<u32> {
        let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
        let db = b.len() - 1;
        let inv_lc = mod_inv(b[db] as u64, p);
        while r.len() > db {
            let c = r[r.len() - 1] % p * inv_lc % p;
            let shift = r.len() - 1 - db;
            if c != 0 {
                for (k, &bk) in b.iter().enumerate() {
                    let sub = c * bk as u64 % p;
                    r[shift + k] = (r[shift + k] + p - sub) % p;
                }
            }
            r.pop();
            while r.last().map(|&c| c % p == 0).unwrap_or(false) {
                r.pop();
            }
        }
        r.iter().map(|&c| (c % p) as u32).collect()
    }

    fn mod_inv(a: u64, p: u64) -> u64 {
        // Fermat inverse; p is prime and a nonzero mod p.
        let mut e = p - 2;
        let mut acc = 1u64;
        let mut b = a % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    /// Rabin's test: f of degree n is irreducible over GF(p) iff
    /// x^(p^n) = x (mod f) and gcd(x^(p^(n/r)) - x, f) = 1 for prime r | n.
    pub fn is_irreducible(f: &[u32], p: u64) -> bool {
        let n = f.len() - 1;
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let xpn = frobenius_power(n as u32, f, p);
        let mut want_x = xpn.clone();
        // subtract x
        if want_x.len() < 2 {
            want_x.resize(2, 0);
        }
        want_x[1] = ((want_x[1] as u64 + p - 1) % p) as u32;
        trim(&mut want_x);
        if !want_x.is_empty() {
            return false;
        }
        for r in super::prime_factors(n as u64) {
            let k = n as u64 / r;
            let mut g = frobenius_power(k as u32, f, p);
            if g.len() < 2 {
                g.resize(2, 0);
            }
            g[1] = ((g[1] as u64 + p - 1) % p) as u32;
            trim(&mut g);
            let d = gcd(f.to_vec(), g, p);
            if d.len() != 1 {
                return false;
            }
        }
        true
    }
}

static NEXT_FIELD_ID: AtomicU32 = AtomicU32::new(1);

/// An element of a specific [`Field`], identified by its packed coordinate
/// code. The field id tag catches accidental cross-field arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FieldElement {
    field: u32,
    code: u32,
}

impl FieldElement {
    pub fn code(self) -> u32 {
        self.code
    }

    pub fn is_zero(self) -> bool {
        self.code == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}#{}", self.code, self.field)
    }
}

pub struct Field {
    id: u32,
    p: u64,
    n: usize,
    q: u64,
    /// Monic modulus, `n + 1` coefficients low-to-high, last = 1.
    modulus: Vec<u32>,
    xi: u32,
    /// exp[k] = code of xi^k for k in [0, 2(q-1)); doubled so products of
    /// two logs index without a reduction.
    exp: Vec<u32>,
    /// log[code] for nonzero codes, LOG_ZERO sentinel at 0.
    log: Vec<u32>,
    /// zech[k] = log(1 + xi^k), LOG_ZERO when 1 + xi^k = 0.
    zech: Vec<u32>,
    /// log(-1); 0 in characteristic 2.
    log_neg1: u32,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.n)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for Field {}

impl Field {
    pub fn new(p: u64, n: usize) -> Result<Field, GfError> {
        Self::with_modulus_opt(p, n, None)
    }

    /// Build with an explicit monic modulus (n + 1 coefficients, low-to-high).
    pub fn with_modulus(p: u64, n: usize, modulus: &[u32]) -> Result<Field, GfError> {
        Self::with_modulus_opt(p, n, Some(modulus))
    }

    fn with_modulus_opt(p: u64, n: usize, modulus: Option<&[u32]>) -> Result<Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if n == 0 {
            return Err(GfError::ZeroDegree);
        }
        let mut q: u64 = 1;
        for _ in 0..n {
            q = q.saturating_mul(p);
            if q > MAX_Q {
                return Err(GfError::TooLarge { q, guard: MAX_Q });
            }
        }
        let modulus = match modulus {
            Some(m) => {
                let m: Vec<u32> = m.iter().map(|&c| (c as u64 % p) as u32).collect();
                if m.len() != n + 1 || m[n] != 1 {
                    return Err(GfError::BadModulus);
                }
                if n > 1 && !pf::is_irreducible(&m, p) {
                    return Err(GfError::ReducibleModulus);
                }
                if n == 1 && m != [0, 1] {
                    // prime fields are pinned to modulus x
                    return Err(GfError::BadModulus);
                }
                m
            }
            None => Self::smallest_modulus(p, n),
        };

        let mut pow_p = vec![1u32; n + 1];
        for i in 1..=n {
            pow_p[i] = pow_p[i - 1] * p as u32;
        }

        let factors = prime_factors(q - 1);
        let xi_vec = Self::find_primitive(p, n, q, &modulus, &factors);
        let xi = Self::pack(&xi_vec, p);

        // exp table by repeated basis multiplication, then log as its inverse
        let qm1 = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * qm1.max(1)];
        let mut log = vec![LOG_ZERO; q as usize];
        let mut cur = vec![1u32];
        for k in 0..qm1 {
            let code = Self::pack(&cur, p);
            exp[k] = code;
            exp[k + qm1] = code;
            debug_assert_eq!(log[code as usize], LOG_ZERO, "xi order too small");
            log[code as usize] = k as u32;
            cur = pf::mul_mod(&cur, &xi_vec, &modulus, p);
        }
        debug_assert_eq!(Self::pack(&cur, p), 1, "xi^(q-1) != 1");

        // Zech logarithms: zech[k] = log(1 + xi^k)
        let mut zech = vec![LOG_ZERO; qm1.max(1)];
        for (k, z) in zech.iter_mut().enumerate() {
            let s = Self::add_codes_digitwise(1, exp[k], p, n, &pow_p);
            *z = log[s as usize];
        }
        let log_neg1 = if p == 2 { 0 } else { (qm1 / 2) as u32 };

        Ok(Field {
            id: NEXT_FIELD_ID.fetch_add(1, Ordering::Relaxed),
            p,
            n,
            q,
            modulus,
            xi,
            exp,
            log,
            zech,
            log_neg1,
        })
    }

    /// Shared, memoized fields keyed by (p, n); harnesses reuse tables and
    /// elements from the same (p, n) interoperate.
    pub fn shared(p: u64, n: usize) -> Result<Arc<Field>, GfError> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<Field>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        if let Some(f) = guard.get(&(p, n)) {
            return Ok(f.clone());
        }
        let f = Arc::new(Field::new(p, n)?);
        guard.insert((p, n), f.clone());
        Ok(f)
    }

    fn smallest_modulus(p: u64, n: usize) -> Vec<u32> {
        if n == 1 {
            return vec![0, 1];
        }
        // low coefficients enumerated as base-p digits of k, ascending
        let total = (p as u128).pow(n as u32) as u64;
        for k in 1..total {
            let mut f = Vec::with_capacity(n + 1);
            let mut r = k;
            for _ in 0..n {
                f.push((r % p) as u32);
                r /= p;
            }
            f.push(1);
            if pf::is_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("irreducible polynomials exist in every degree");
    }

    fn find_primitive(p: u64, _n: usize, q: u64, modulus: &[u32], factors: &[u64]) -> Vec<u32> {
        if q == 2 {
            return vec![1];
        }
        'cand: for code in 1..q {
            let vec = Self::unpack(code as u32, p, modulus.len() - 1);
            for &r in factors {
                let e = (q - 1) / r;
                let pw = pf::pow_mod(&vec, e, modulus, p);
                if pw == [1] {
                    continue 'cand;
                }
            }
            return vec;
        }
        unreachable!("the multiplicative group is cyclic");
    }

    fn pack(v: &[u32], p: u64) -> u32 {
        let mut code: u64 = 0;
        for &c in v.iter().rev() {
            code = code * p + c as u64;
        }
        code as u32
    }

    fn unpack(code: u32, p: u64, n: usize) -> Vec<u32> {
        let mut v = vec![0u32; n];
        let mut r = code as u64;
        for d in v.iter_mut() {
            *d = (r % p) as u32;
            r /= p;
        }
        pf::trim(&mut v);
        if v.is_empty() {
            v.push(0);
        }
        v
    }

    fn add_codes_digitwise(a: u32, b: u32, p: u64, n: usize, pow_p: &[u32]) -> u32 {
        if p == 2 {
            return a ^ b;
        }
        let mut out = 0u64;
        let mut ra = a as u64;
        let mut rb = b as u64;
        for i in 0..n {
            let s = (ra % p + rb % p) % p;
            out += s * pow_p[i] as u64;
            ra /= p;
            rb /= p;
        }
        out as u32
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn id(&self) -> u32 {
        self.id
    }
    pub fn modulus_coeffs(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.id,
            code: 0,
        }
    }
    pub fn one(&self) -> FieldElement {
        FieldElement {
            field: self.id,
            code: 1,
        }
    }
    /// The canonical primitive element (smallest code of order q-1).
    pub fn xi(&self) -> FieldElement {
        FieldElement {
            field: self.id,
            code: self.xi,
        }
    }

    pub fn elem(&self, code: u32) -> FieldElement {
        assert!((code as u64) < self.q, "element code {code} out of range");
        FieldElement {
            field: self.id,
            code,
        }
    }

    pub fn elem_from_coeffs(&self, coeffs: &[u32]) -> FieldElement {
        assert!(coeffs.len() <= self.n, "too many coordinates");
        let mut code: u64 = 0;
        for &c in coeffs.iter().rev() {
            code = code * self.p + (c as u64 % self.p);
        }
        FieldElement {
            field: self.id,
            code: code as u32,
        }
    }

    /// Embeds an integer as an element of the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElement {
        let c = v.rem_euclid(self.p as i64) as u32;
        FieldElement {
            field: self.id,
            code: c,
        }
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        self.check(a);
        let mut v = vec![0u32; self.n];
        let mut r = a.code as u64;
        for d in v.iter_mut() {
            *d = (r % self.p) as u32;
            r /= self.p;
        }
        v
    }

    /// All q elements in canonical (code) order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q as u32).map(move |code| FieldElement {
            field: self.id,
            code,
        })
    }

    pub fn units(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q as u32).map(move |code| FieldElement {
            field: self.id,
            code,
        })
    }

    #[inline]
    fn check(&self, a: FieldElement) {
        assert_eq!(a.field, self.id, "element from a different field");
    }

    /// Checked variant of the id guard for fallible entry points.
    pub fn try_check(&self, a: FieldElement) -> Result<(), GfError> {
        if a.field != self.id {
            return Err(GfError::MixedFields);
        }
        Ok(())
    }

    /// Raw exponential table (doubled period) for enumeration hot loops.
    pub(crate) fn exp_raw(&self) -> &[u32] {
        &self.exp
    }

    /// Raw discrete-log table; index 0 holds the sentinel u32::MAX.
    pub(crate) fn log_raw(&self) -> &[u32] {
        &self.log
    }

    pub fn exp_of(&self, k: u64) -> FieldElement {
        let qm1 = self.q - 1;
        if qm1 == 0 {
            return self.one();
        }
        FieldElement {
            field: self.id,
            code: self.exp[(k % qm1) as usize],
        }
    }

    /// Discrete log base xi; None for zero.
    pub fn log_of(&self, a: FieldElement) -> Option<u64> {
        self.check(a);
        let l = self.log[a.code as usize];
        (l != LOG_ZERO).then_some(l as u64)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        FieldElement {
            field: self.id,
            code: self.add_code(a.code, b.code),
        }
    }

    #[inline]
    pub(crate) fn add_code(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let la = self.log[a as usize];
        let lb = self.log[b as usize];
        let qm1 = (self.q - 1) as u32;
        let d = if lb >= la { lb - la } else { lb + qm1 - la };
        let z = self.zech[d as usize];
        if z == LOG_ZERO {
            0
        } else {
            self.exp[(la + z) as usize]
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.check(a);
        FieldElement {
            field: self.id,
            code: self.neg_code(a.code),
        }
    }

    #[inline]
    pub(crate) fn neg_code(&self, a: u32) -> u32 {
        if self.p == 2 || a == 0 {
            return a;
        }
        self.exp[(self.log[a as usize] + self.log_neg1) as usize]
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        FieldElement {
            field: self.id,
            code: self.add_code(a.code, self.neg_code(b.code)),
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        FieldElement {
            field: self.id,
            code: self.mul_code(a.code, b.code),
        }
    }

    #[inline]
    pub(crate) fn mul_code(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a);
        if a.code == 0 {
            return Err(GfError::DivisionByZero);
        }
        let qm1 = (self.q - 1) as u32;
        let l = self.log[a.code as usize];
        let code = self.exp[((qm1 - l) % qm1) as usize];
        Ok(FieldElement {
            field: self.id,
            code,
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e with 0^0 = 1.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        self.check(a);
        FieldElement {
            field: self.id,
            code: self.pow_code(a.code, e),
        }
    }

    #[inline]
    pub(crate) fn pow_code(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let qm1 = self.q - 1;
        if qm1 == 0 {
            return 1;
        }
        let l = self.log[a as usize] as u64;
        self.exp[(l * (e % qm1) % qm1) as usize]
    }

    /// Frobenius iterate a^(p^j).
    pub fn frobenius(&self, a: FieldElement, j: usize) -> FieldElement {
        let mut e: u64 = 1;
        for _ in 0..(j % self.n) {
            e *= self.p;
        }
        self.pow(a, e)
    }

    /// Unique z with z^(p^e) = a.
    pub fn frobenius_root(&self, a: FieldElement, e: usize) -> FieldElement {
        let back = (self.n - (e % self.n)) % self.n;
        self.frobenius(a, back)
    }

    /// The p-th root, total on a finite field.
    pub fn p_th_root(&self, a: FieldElement) -> FieldElement {
        self.frobenius_root(a, 1)
    }

    pub fn multiplicative_order(&self, a: FieldElement) -> Option<u64> {
        self.check(a);
        if a.code == 0 {
            return None;
        }
        let qm1 = self.q - 1;
        if qm1 == 0 {
            return Some(1);
        }
        let l = self.log[a.code as usize] as u64;
        let g = gcd_u64(l, qm1);
        Some(qm1 / g)
    }

    /// Membership in the subfield GF(p^m); requires m | n.
    pub fn in_subfield(&self, a: FieldElement, m: usize) -> Result<bool, GfError> {
        self.check(a);
        if m == 0 || self.n % m != 0 {
            return Err(GfError::NotASubfield { m, n: self.n });
        }
        Ok(self.frobenius(a, m) == a)
    }

    /// Elements of GF(p^m) inside this field, in canonical order.
    pub fn subfield_elements(&self, m: usize) -> Result<Vec<FieldElement>, GfError> {
        if m == 0 || self.n % m != 0 {
            return Err(GfError::NotASubfield { m, n: self.n });
        }
        let mut pm: u64 = 1;
        for _ in 0..m {
            pm *= self.p;
        }
        let mut codes: Vec<u32> = vec![0];
        let step = (self.q - 1) / (pm - 1);
        for j in 0..(pm - 1) {
            codes.push(self.exp[(j * step) as usize]);
        }
        codes.sort_unstable();
        Ok(codes
            .into_iter()
            .map(|code| FieldElement {
                field: self.id,
                code,
            })
            .collect())
    }

    /// Norm onto GF(p^m): a^((q-1)/(p^m-1)), with 0 mapped to 0. The result
    /// satisfies x^(p^m) = x.
    pub fn norm_to_subfield(&self, a: FieldElement, m: usize) -> Result<FieldElement, GfError> {
        self.check(a);
        if m == 0 || self.n % m != 0 {
            return Err(GfError::NotASubfield { m, n: self.n });
        }
        if a.code == 0 {
            return Ok(self.zero());
        }
        let mut pm: u64 = 1;
        for _ in 0..m {
            pm *= self.p;
        }
        let e = (self.q - 1) / (pm - 1);
        let r = self.pow(a, e);
        debug_assert_eq!(self.frobenius(r, m), r);
        Ok(r)
    }

    /// Relative norm from GF(p^s) down to GF(p^m) computed inside this field;
    /// both must be subfields with m | s | n, and `a` must lie in GF(p^s).
    pub fn relative_norm(
        &self,
        a: FieldElement,
        s: usize,
        m: usize,
    ) -> Result<FieldElement, GfError> {
        self.check(a);
        if s == 0 || self.n % s != 0 || m == 0 || s % m != 0 {
            return Err(GfError::NotASubfield { m, n: s });
        }
        if !self.in_subfield(a, s)? {
            return Err(GfError::MixedFields);
        }
        if a.code == 0 {
            return Ok(self.zero());
        }
        // exponent 1 + p^m + p^2m + ... + p^(s-m)
        let mut e: u64 = 0;
        let mut t: u64 = 1;
        let mut pm: u64 = 1;
        for _ in 0..m {
            pm *= self.p;
        }
        let mut left = s / m;
        while left > 0 {
            e += t;
            t *= pm;
            left -= 1;
        }
        Ok(self.pow(a, e))
    }

    /// Renders an element as a prime-subfield integer or "g^k". Codes
    /// below p are the prime-subfield values themselves.
    pub fn render(&self, a: FieldElement) -> String {
        self.check(a);
        if (a.code as u64) < self.p {
            return a.code.to_string();
        }
        format!("g^{}", self.log[a.code as usize])
    }

    /// Renders the coordinate vector "[c0,...,c_{n-1}]".
    pub fn render_vector(&self, a: FieldElement) -> String {
        let v = self.coeffs(a);
        let inner: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        format!("[{}]", inner.join(","))
    }

    /// Parses "0", "g^k", an integer (prime-subfield value) or "[c0,...]".
    pub fn parse_element(&self, s: &str) -> Result<FieldElement, GfError> {
        let t = s.trim();
        if t.is_empty() {
            return Err(GfError::Parse {
                pos: 0,
                msg: "empty element".into(),
            });
        }
        if let Some(rest) = t.strip_prefix("g^") {
            let k: u64 = rest.parse().map_err(|_| GfError::Parse {
                pos: 2,
                msg: format!("bad exponent '{rest}'"),
            })?;
            return Ok(self.exp_of(k));
        }
        if t.starts_with('[') {
            let inner = t
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or(GfError::Parse {
                    pos: t.len(),
                    msg: "unterminated vector".into(),
                })?;
            let mut coeffs = Vec::new();
            for part in inner.split(',') {
                let c: i64 = part.trim().parse().map_err(|_| GfError::Parse {
                    pos: 0,
                    msg: format!("bad coordinate '{part}'"),
                })?;
                coeffs.push(c.rem_euclid(self.p as i64) as u32);
            }
            if coeffs.len() > self.n {
                return Err(GfError::Parse {
                    pos: 0,
                    msg: "too many coordinates".into(),
                });
            }
            return Ok(self.elem_from_coeffs(&coeffs));
        }
        let v: i64 = t.parse().map_err(|_| GfError::Parse {
            pos: 0,
            msg: format!("unrecognized element '{t}'"),
        })?;
        Ok(self.from_int(v))
    }

    /// Spec string "p^n" (or "p^n:c0,c1,...,1" with explicit modulus).
    pub fn parse_spec(s: &str) -> Result<Field, GfError> {
        let (base, modulus) = match s.find(':') {
            Some(i) => (&s[..i], Some(&s[i + 1..])),
            None => (s, None),
        };
        let (p_str, n_str) = match base.find('^') {
            Some(i) => (&base[..i], &base[i + 1..]),
            None => (base, "1"),
        };
        let p: u64 = p_str.trim().parse().map_err(|_| GfError::Parse {
            pos: 0,
            msg: format!("bad characteristic '{p_str}'"),
        })?;
        let n: usize = n_str.trim().parse().map_err(|_| GfError::Parse {
            pos: p_str.len() + 1,
            msg: format!("bad degree '{n_str}'"),
        })?;
        match modulus {
            None => Field::new(p, n),
            Some(ms) => {
                let mut coeffs = Vec::new();
                for part in ms.split(',') {
                    let c: i64 = part.trim().parse().map_err(|_| GfError::Parse {
                        pos: base.len() + 1,
                        msg: format!("bad modulus coefficient '{part}'"),
                    })?;
                    coeffs.push(c.rem_euclid(p as i64) as u32);
                }
                Field::with_modulus(p, n, &coeffs)
            }
        }
    }

    pub fn spec_string(&self) -> String {
        format!("{}^{}", self.p, self.n)
    }

    /// Modulus as human-readable text, e.g. "x^3+x+1".
    pub fn modulus_string(&self) -> String {
        let mut terms: Vec<String> = Vec::new();
        for (e, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (c, e) {
                (_, 0) => c.to_string(),
                (1, 1) => "x".into(),
                (1, _) => format!("x^{e}"),
                (_, 1) => format!("{c}*x"),
                (_, _) => format!("{c}*x^{e}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Canonical embedding of a standalone GF(p^m) into GF(p^n) with m | n,
/// sending the small field's generator image through the smallest-code root
/// of the small modulus.
pub struct SubfieldEmbedding {
    forward: Vec<FieldElement>,
    inverse: HashMap<u32, FieldElement>,
}

impl SubfieldEmbedding {
    pub fn new(sub: &Field, sup: &Field) -> Result<SubfieldEmbedding, GfError> {
        if sub.p != sup.p || sub.n == 0 || sup.n % sub.n != 0 {
            return Err(GfError::NotASubfield { m: sub.n, n: sup.n });
        }
        let theta = sup
            .elements()
            .find(|&t| {
                let mut acc = sup.zero();
                // Horner evaluation of the small modulus at t
                for &c in sub.modulus.iter().rev() {
                    acc = sup.add(sup.mul(acc, t), sup.from_int(c as i64));
                }
                acc.is_zero()
            })
            .expect("the subfield modulus splits in the big field");
        let mut forward = Vec::with_capacity(sub.q as usize);
        let mut inverse = HashMap::new();
        for a in sub.elements() {
            let coeffs = sub.coeffs(a);
            let mut acc = sup.zero();
            for &c in coeffs.iter().rev() {
                acc = sup.add(sup.mul(acc, theta), sup.from_int(c as i64));
            }
            inverse.insert(acc.code(), a);
            forward.push(acc);
        }
        Ok(SubfieldEmbedding { forward, inverse })
    }

    pub fn embed(&self, a: FieldElement) -> FieldElement {
        self.forward[a.code() as usize]
    }

    /// Pulls an element of the image back to the small field.
    pub fn retract(&self, b: FieldElement) -> Option<FieldElement> {
        self.inverse.get(&b.code()).copied()
    }
}
