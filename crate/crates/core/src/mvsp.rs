//! Minimal value set polynomials.
//!
//! A polynomial of degree d >= 1 over GF(q) takes at least floor((q-1)/d)+1
//! values; it is a minimal value set polynomial (MVSP) when the bound is
//! attained. This module provides:
//!
//! - canonical forms for one- and two-value polynomials (Carlitz forms);
//! - Mills certificates: the exact polynomial identity characterizing
//!   minimality, searched by exact linear solving;
//! - structural factorization checks for certified polynomials;
//! - the six binomial families, with membership tests, predicted value
//!   sets, and an exhaustive enumeration harness that confirms the
//!   families account for every MVSP binomial in a degree window.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::gf::{Field, FieldElement, GfError};
use crate::linalg;
use crate::upoly::{PolyError, UniPoly};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum MvspError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("expected a binomial with exactly two nonzero terms")]
    NotABinomial,
    #[error("polynomial does not satisfy the conditions of family {0}")]
    FamilyMismatch(BinomialFamily),
    #[error("structural checks need at least two values")]
    TooFewValues,
}

/// Runs a closure on a dedicated rayon pool when a worker count is given,
/// otherwise on the global pool.
pub(crate) fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        None => f(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .expect("pool construction")
            .install(f),
    }
}

fn gcd_usize(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd_usize(b, a % b)
    }
}

/// Exponent e with p^e = v, if any.
fn p_power_exp(p: u64, mut v: u64) -> Option<u32> {
    if v == 0 {
        return None;
    }
    let mut e = 0;
    while v > 1 {
        if v % p != 0 {
            return None;
        }
        v /= p;
        e += 1;
    }
    Some(e)
}

fn divisors(v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= v {
        if v % d == 0 {
            out.push(d);
            if d != v / d {
                out.push(v / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

fn xq_minus_x(field: &Arc<Field>) -> UniPoly {
    let q = field.q() as usize;
    UniPoly::from_terms(field, &[(q, field.one()), (1, field.neg(field.one()))])
}

// ---------------------------------------------------------------------------
// Carlitz forms for one and two values
// ---------------------------------------------------------------------------

/// Canonical presentation of a polynomial taking at most two values.
#[derive(Debug, Clone)]
pub enum CarlitzForm {
    /// F = value + (x^q - x) * cofactor, exact as polynomials.
    Single {
        value: FieldElement,
        cofactor: UniPoly,
    },
    /// F agrees with the function sending `alpha_fiber` to alpha and the
    /// rest of F_q to beta; alpha is the smaller value by code. `exact`
    /// records whether F equals the interpolated two-sum form, which
    /// happens precisely when deg F <= q - 1, i.e. when F is an MVSP.
    Pair {
        alpha: FieldElement,
        beta: FieldElement,
        alpha_fiber: Vec<FieldElement>,
        exact: bool,
    },
}

impl CarlitzForm {
    /// The interpolated representative of degree <= q - 1 inducing the same
    /// function: value for Single, the two-sum form for Pair.
    pub fn canonical_poly(&self, field: &Arc<Field>) -> UniPoly {
        match self {
            CarlitzForm::Single { value, .. } => {
                // the canonical low-degree representative of a constant
                // function is the constant itself
                UniPoly::constant(field, *value)
            }
            CarlitzForm::Pair {
                alpha,
                beta,
                alpha_fiber,
                ..
            } => {
                // beta + (alpha - beta) * sum over the fiber of
                // 1 - (x - mu)^(q-1)
                let qm1 = field.q() - 1;
                let mut acc = UniPoly::constant(field, *beta);
                let diff = field.sub(*alpha, *beta);
                for &mu in alpha_fiber {
                    let lin = UniPoly::from_terms(field, &[(1, field.one()), (0, field.neg(mu))]);
                    let ind = UniPoly::one(field).sub(&lin.pow(qm1));
                    acc = acc.add(&ind.scale(diff));
                }
                acc
            }
        }
    }
}

/// Canonical form for #V <= 2; None when the polynomial takes more values.
pub fn carlitz_decompose(f: &UniPoly) -> Result<Option<CarlitzForm>, MvspError> {
    let field = f.field();
    let values = f.values();
    match values.len() {
        1 => {
            let value = values[0];
            let shifted = f.sub(&UniPoly::constant(field, value));
            let cofactor = shifted.exact_div(&xq_minus_x(field))?;
            Ok(Some(CarlitzForm::Single { value, cofactor }))
        }
        2 => {
            let alpha = values[0];
            let beta = values[1];
            let alpha_fiber: Vec<FieldElement> = field
                .elements()
                .filter(|&a| f.evaluate(a) == alpha)
                .collect();
            let exact = f.degree().unwrap_or(0) as u64 <= field.q() - 1;
            Ok(Some(CarlitzForm::Pair {
                alpha,
                beta,
                alpha_fiber,
                exact,
            }))
        }
        _ => Ok(None),
    }
}

// ---------------------------------------------------------------------------
// Mills certificates
// ---------------------------------------------------------------------------

/// Exact identity certifying a minimal value set. With G = F - gamma0,
/// e_i = 1 + (p^(ki) - 1)/nu and nu the smallest root multiplicity in the
/// distinguished fiber:
///
///   sum_{i=0}^{m} omega_i G^(e_i) = -(omega_0/nu) (x^q - x) F'
///
/// where omega_m = 1, omega_0 != 0, p does not divide nu, k is the least
/// integer with nu | p^k - 1, and p^(mk) = 1 + nu r for r + 1 values. The
/// right side carries the 1/nu factor because differentiating
/// G = L0^nu N0^(p^mk) yields F' = nu L0^(nu-1) L0' N0^(p^mk).
#[derive(Debug, Clone)]
pub struct MillsCertificate {
    pub gamma0: FieldElement,
    pub nu: u64,
    pub k: u32,
    pub m: u32,
    /// omega_0 ... omega_m with omega_m = 1.
    pub omega: Vec<FieldElement>,
}

impl MillsCertificate {
    /// The exponents e_i = 1 + (p^(ki) - 1)/nu for i = 0..=m.
    pub fn exponents(&self, p: u64) -> Vec<u64> {
        (0..=self.m)
            .map(|i| 1 + (p.pow(self.k * i) - 1) / self.nu)
            .collect()
    }
}

/// Searches for a Mills certificate. Returns None when the shape parameters
/// do not exist or the identity has no solution; for polynomials of degree
/// at most q - 1 a certificate exists exactly when F is an MVSP with nu
/// prime to p.
pub fn mills_certificate(f: &UniPoly) -> Result<Option<MillsCertificate>, MvspError> {
    let field = f.field();
    let p = field.p();
    let report = f.value_set_report()?;
    let gamma0 = report.gamma0();
    let nu = report.nu as u64;
    let r = report.r as u64;
    if nu % p == 0 {
        return Ok(None);
    }
    // least k >= 1 with nu | p^k - 1; p is invertible mod nu
    let mut k = 1u32;
    {
        let mut pk = p % nu.max(1);
        while nu > 1 && pk != 1 % nu {
            pk = pk * (p % nu) % nu;
            k += 1;
        }
    }
    let g = f.sub(&UniPoly::constant(field, gamma0));
    let fprime = f.derivative();
    let xqx = xq_minus_x(field);
    let nu_elem = field.from_int(nu as i64);

    if r == 0 {
        // single value: the identity collapses to nu G = -(x^q - x) F'
        let lhs = g.scale(nu_elem);
        let rhs = xqx.mul(&fprime).neg();
        if lhs == rhs {
            return Ok(Some(MillsCertificate {
                gamma0,
                nu,
                k,
                m: 0,
                omega: vec![field.one()],
            }));
        }
        return Ok(None);
    }

    let target = 1 + nu * r;
    let Some(e) = p_power_exp(p, target) else {
        return Ok(None);
    };
    if e == 0 || e % k != 0 {
        return Ok(None);
    }
    let m = e / k;

    // G^(e_i) = G * P_i with P_i = G^((p^(ki)-1)/nu); the P chain advances
    // by P_{i+1} = P_i^(p^k) * P_1, keeping every degree at most q - 1
    let pk = p.pow(k);
    let p1 = g.pow((pk - 1) / nu);
    let mut p_chain = Vec::with_capacity(m as usize + 1);
    p_chain.push(UniPoly::one(field));
    p_chain.push(p1.clone());
    for _ in 1..m {
        let prev = p_chain.last().unwrap();
        p_chain.push(prev.frobenius_pow(k as usize).mul(&p1));
    }
    let t: Vec<UniPoly> = p_chain.iter().map(|pi| g.mul(pi)).collect();

    // unknowns (tau, omega_1, ..., omega_{m-1}) with omega_0 = nu tau:
    //   tau (nu T_0 + (x^q - x) F') + sum omega_i T_i = -T_m
    let mut cols: Vec<UniPoly> = Vec::with_capacity(m as usize);
    cols.push(t[0].scale(nu_elem).add(&xqx.mul(&fprime)));
    for ti in t.iter().take(m as usize).skip(1) {
        cols.push(ti.clone());
    }
    let rhs_poly = t[m as usize].neg();

    let mut support: BTreeSet<usize> = BTreeSet::new();
    for c in cols.iter().chain(std::iter::once(&rhs_poly)) {
        support.extend(c.support());
    }
    let rows: Vec<Vec<FieldElement>> = support
        .iter()
        .map(|&e| cols.iter().map(|c| c.coeff(e)).collect())
        .collect();
    let rhs: Vec<FieldElement> = support.iter().map(|&e| rhs_poly.coeff(e)).collect();

    let Some(solution) = linalg::solve(field, &rows, &rhs) else {
        return Ok(None);
    };
    let Some(sol) = solution.with_nonzero_coord(field, 0) else {
        return Ok(None);
    };
    let tau = sol[0];
    let mut omega = Vec::with_capacity(m as usize + 1);
    omega.push(field.mul(nu_elem, tau));
    omega.extend_from_slice(&sol[1..]);
    omega.push(field.one());
    let cert = MillsCertificate {
        gamma0,
        nu,
        k,
        m,
        omega,
    };
    debug_assert_eq!(verify_mills_certificate(f, &cert), Ok(true));
    Ok(Some(cert))
}

/// Re-derives both sides of the certificate identity and compares exactly.
pub fn verify_mills_certificate(f: &UniPoly, cert: &MillsCertificate) -> Result<bool, MvspError> {
    let field = f.field();
    let p = field.p();
    if cert.omega.len() != cert.m as usize + 1
        || cert.omega[cert.m as usize] != field.one()
        || cert.omega[0].is_zero()
        || cert.nu % p == 0
        || cert.nu == 0
    {
        return Ok(false);
    }
    let g = f.sub(&UniPoly::constant(field, cert.gamma0));
    let pk = p.pow(cert.k);
    if (pk - 1) % cert.nu != 0 {
        return Ok(false);
    }
    let p1 = g.pow((pk - 1) / cert.nu);
    let mut lhs = UniPoly::zero(field);
    let mut pi = UniPoly::one(field);
    for i in 0..=cert.m {
        if i > 0 {
            pi = if i == 1 {
                p1.clone()
            } else {
                pi.frobenius_pow(cert.k as usize).mul(&p1)
            };
        }
        lhs = lhs.add(&g.mul(&pi).scale(cert.omega[i as usize]));
    }
    let scale = field
        .div(cert.omega[0], field.from_int(cert.nu as i64))
        .expect("nu is prime to p");
    let rhs = xq_minus_x(field).mul(&f.derivative()).scale(scale).neg();
    Ok(lhs == rhs)
}

/// Factorization shape of a certified MVSP. With L_i the monic squarefree
/// polynomial over the i-th fiber:
///
/// - (b) F - gamma0 = L0^nu N0^(p^mk) with L0 not dividing N0;
/// - (c) L0 = x A^(p^mk) + B^p, detectable on exponents alone;
/// - (d) F - gamma_i = L_i N_i^p with L_i not dividing N_i, for i >= 1;
/// - (e) sum omega_i L0^(p^ki) N0^(p^mk (p^ki - 1)/nu) = -omega_0 (x^q - x) L0'.
#[derive(Debug, Clone)]
pub struct StructuralCheckReport {
    pub l0: UniPoly,
    pub n0: Option<UniPoly>,
    pub item_b: bool,
    pub item_c: bool,
    pub item_d: bool,
    pub item_e: bool,
}

impl StructuralCheckReport {
    pub fn all_hold(&self) -> bool {
        self.item_b && self.item_c && self.item_d && self.item_e
    }
}

/// Extracts the p^e-th root of a polynomial when it is one.
fn p_power_root(f: &UniPoly, e: usize) -> Option<UniPoly> {
    let field = f.field();
    let p = field.p() as usize;
    let mut step = 1usize;
    for _ in 0..e {
        step = step.checked_mul(p)?;
    }
    let mut terms = Vec::new();
    for (exp, c) in f.terms() {
        if exp % step != 0 {
            return None;
        }
        terms.push((exp / step, field.frobenius_root(c, e)));
    }
    Some(UniPoly::from_terms(field, &terms))
}

pub fn mills_structural_check(
    f: &UniPoly,
    cert: &MillsCertificate,
) -> Result<StructuralCheckReport, MvspError> {
    if cert.m == 0 {
        return Err(MvspError::TooFewValues);
    }
    let field = f.field();
    let p = field.p();
    let report = f.value_set_report()?;
    let mk = (cert.m * cert.k) as usize;
    let pmk = p.pow(mk as u32);

    let l0 = report.fibers[report.gamma0_index].fiber_poly(field);
    let g = f.sub(&UniPoly::constant(field, cert.gamma0));

    let (n0, item_b) = match g.exact_div(&l0.pow(cert.nu)) {
        Ok(quotient) => match p_power_root(&quotient, mk) {
            Some(n0) => {
                let ok = !l0.divides(&n0) && l0.pow(cert.nu).mul(&n0.frobenius_pow(mk)) == g;
                (Some(n0), ok)
            }
            None => (None, false),
        },
        Err(_) => (None, false),
    };

    // every exponent of L0 comes from x A^(p^mk) (e = 1 mod p^mk) or from
    // B^p (e = 0 mod p); the classes are disjoint since p | p^mk
    let item_c = l0
        .support()
        .iter()
        .all(|&e| e % p as usize == 0 || e as u64 % pmk == 1);

    let mut item_d = true;
    for (i, fiber) in report.fibers.iter().enumerate() {
        if i == report.gamma0_index {
            continue;
        }
        let li = fiber.fiber_poly(field);
        let gi = f.sub(&UniPoly::constant(field, fiber.value));
        let ok = match gi.exact_div(&li) {
            Ok(quotient) => match quotient.p_th_root() {
                Ok(ni) => !li.divides(&ni),
                Err(_) => false,
            },
            Err(_) => false,
        };
        if !ok {
            item_d = false;
            break;
        }
    }

    let item_e = match &n0 {
        Some(n0) => {
            let mut lhs = UniPoly::zero(field);
            for i in 0..=cert.m {
                let ki = (cert.k * i) as usize;
                let l_term = l0.frobenius_pow(ki);
                let n_exp = pmk * (p.pow(cert.k * i) - 1) / cert.nu;
                let term = l_term.mul(&n0.pow(n_exp)).scale(cert.omega[i as usize]);
                lhs = lhs.add(&term);
            }
            let rhs = xq_minus_x(field)
                .mul(&l0.derivative())
                .scale(cert.omega[0])
                .neg();
            lhs == rhs
        }
        None => false,
    };

    Ok(StructuralCheckReport {
        l0,
        n0,
        item_b,
        item_c,
        item_d,
        item_e,
    })
}

// ---------------------------------------------------------------------------
// Binomial families
// ---------------------------------------------------------------------------

/// The six families of MVSP binomials, named by their report tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinomialFamily {
    AI,
    AII,
    AIII,
    AIV,
    AV,
    AVI,
}

impl BinomialFamily {
    pub const ALL: [BinomialFamily; 6] = [
        BinomialFamily::AI,
        BinomialFamily::AII,
        BinomialFamily::AIII,
        BinomialFamily::AIV,
        BinomialFamily::AV,
        BinomialFamily::AVI,
    ];

    /// Classification precedence, most specific first.
    const PRECEDENCE: [BinomialFamily; 6] = [
        BinomialFamily::AII,
        BinomialFamily::AI,
        BinomialFamily::AIII,
        BinomialFamily::AIV,
        BinomialFamily::AV,
        BinomialFamily::AVI,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            BinomialFamily::AI => "A-i",
            BinomialFamily::AII => "A-ii",
            BinomialFamily::AIII => "A-iii",
            BinomialFamily::AIV => "A-iv",
            BinomialFamily::AV => "A-v",
            BinomialFamily::AVI => "A-vi",
        }
    }

    pub fn parse(s: &str) -> Option<BinomialFamily> {
        Self::ALL.into_iter().find(|f| f.tag() == s)
    }
}

impl fmt::Display for BinomialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Monic-normalized binomial data: F = lc (x^a + beta x^b), a > b >= 0.
#[derive(Debug, Clone, Copy)]
struct BinomialParams {
    a: usize,
    b: usize,
    beta: FieldElement,
    lc: FieldElement,
}

fn binomial_params(f: &UniPoly) -> Result<BinomialParams, MvspError> {
    let terms: Vec<(usize, FieldElement)> = f.terms().collect();
    if terms.len() != 2 {
        return Err(MvspError::NotABinomial);
    }
    let (b, cb) = terms[0];
    let (a, ca) = terms[1];
    let field = f.field();
    let beta = field.div(cb, ca).expect("leading coefficient is nonzero");
    Ok(BinomialParams { a, b, beta, lc: ca })
}

/// Family (v) parameters: x^(p^l t) + beta x^t with t = (q-1)/(p^(sl)-1),
/// s >= 2, sl | n, beta in the p^(sl) subfield with relative norm down to
/// the p^l subfield equal to (-1)^s.
fn match_family_v(field: &Field, prm: &BinomialParams) -> Option<(u32, u32)> {
    let p = field.p();
    let qm1 = field.q() - 1;
    if prm.b == 0 || prm.a % prm.b != 0 {
        return None;
    }
    let ratio = (prm.a / prm.b) as u64;
    let l = p_power_exp(p, ratio)?;
    if l == 0 {
        return None;
    }
    if qm1 % prm.b as u64 != 0 {
        return None;
    }
    let e = p_power_exp(p, qm1 / prm.b as u64 + 1)?;
    if e % l != 0 {
        return None;
    }
    let s = e / l;
    if s < 2 || field.n() % (s * l) as usize != 0 {
        return None;
    }
    if !field.in_subfield(prm.beta, (s * l) as usize).ok()? {
        return None;
    }
    let norm = field
        .relative_norm(prm.beta, (s * l) as usize, l as usize)
        .ok()?;
    let want = if s % 2 == 0 {
        field.one()
    } else {
        field.from_int(-1)
    };
    (norm == want).then_some((s, l))
}

/// Family (vi) parameters: x^(2t) + beta x^t over odd characteristic with
/// t = (q-1)/(p^m-1), m | n, and beta a unit of the p^m subfield.
fn match_family_vi(field: &Field, prm: &BinomialParams) -> Option<u32> {
    let p = field.p();
    if p == 2 || prm.b == 0 || prm.a != 2 * prm.b {
        return None;
    }
    let qm1 = field.q() - 1;
    if qm1 % prm.b as u64 != 0 {
        return None;
    }
    let m = p_power_exp(p, qm1 / prm.b as u64 + 1)?;
    if m == 0 || field.n() % m as usize != 0 {
        return None;
    }
    if prm.beta.is_zero() || !field.in_subfield(prm.beta, m as usize).ok()? {
        return None;
    }
    Some(m)
}

fn family_matches(field: &Field, family: BinomialFamily, prm: &BinomialParams) -> bool {
    let p = field.p();
    let q = field.q();
    let qm1 = q - 1;
    let (a, b) = (prm.a as u64, prm.b as u64);
    match family {
        BinomialFamily::AII => {
            b >= 1 && a > b && (a - b) % qm1 == 0 && prm.beta == field.from_int(-1)
        }
        BinomialFamily::AI => b == 0 && a <= qm1 && qm1 % a == 0,
        BinomialFamily::AIII => {
            p == 2
                && q > 2
                && qm1 % 3 == 0
                && a == 2 * qm1 / 3
                && b == qm1 / 3
                && field.pow(prm.beta, 3) == field.one()
        }
        BinomialFamily::AIV => {
            p > 2 && a == qm1 && b == qm1 / 2 && field.mul(prm.beta, prm.beta) == field.one()
        }
        BinomialFamily::AV => match_family_v(field, prm).is_some(),
        BinomialFamily::AVI => match_family_vi(field, prm).is_some(),
    }
}

/// Family membership of a binomial, by precedence, with every other
/// matching family recorded as an overlap. None when no family matches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialClassification {
    pub family: BinomialFamily,
    pub overlaps: Vec<BinomialFamily>,
}

pub fn classify_binomial(f: &UniPoly) -> Result<Option<BinomialClassification>, MvspError> {
    let prm = binomial_params(f)?;
    let field = f.field();
    let hits: Vec<BinomialFamily> = BinomialFamily::PRECEDENCE
        .into_iter()
        .filter(|&fam| family_matches(field, fam, &prm))
        .collect();
    Ok(hits
        .split_first()
        .map(|(&family, rest)| BinomialClassification {
            family,
            overlaps: rest.to_vec(),
        }))
}

/// The value set a family predicts for a member binomial, ascending by
/// code. Errors when the binomial does not satisfy the family conditions.
pub fn predicted_value_set(
    f: &UniPoly,
    family: BinomialFamily,
) -> Result<Vec<FieldElement>, MvspError> {
    let prm = binomial_params(f)?;
    let field = f.field();
    if !family_matches(field, family, &prm) {
        return Err(MvspError::FamilyMismatch(family));
    }
    let p = field.p();
    let qm1 = field.q() - 1;
    let beta = prm.beta;
    let mut set: BTreeSet<FieldElement> = BTreeSet::new();
    match family {
        BinomialFamily::AII => {
            set.insert(field.zero());
        }
        BinomialFamily::AI => {
            // value at 0 plus beta shifted by the group of a-th powers
            set.insert(beta);
            let count = qm1 / prm.a as u64;
            for j in 0..count {
                let w = field.exp_of(prm.a as u64 * j);
                set.insert(field.add(w, beta));
            }
        }
        BinomialFamily::AIII => {
            set.insert(field.zero());
            set.insert(field.mul(beta, beta));
        }
        BinomialFamily::AIV => {
            set.insert(field.zero());
            set.insert(field.from_int(2));
        }
        BinomialFamily::AV => {
            let (s, l) = match_family_v(field, &prm).expect("membership checked");
            // roots of the additive polynomial
            //   W(z) = sum_j w_j z^(p^(jl)),
            //   w_j = (-1)^(j+1) / beta^((p^((j+1)l) - 1)/(p^l - 1))
            let pl = p.pow(l);
            let mut w_terms = Vec::new();
            for j in 0..s {
                let num = p.pow((j + 1) * l) - 1;
                let exp = num / (pl - 1);
                let bpow = field.pow(beta, exp);
                let mut w = field.inv(bpow).expect("beta is a unit");
                if j % 2 == 0 {
                    w = field.neg(w);
                }
                w_terms.push((p.pow(j * l) as usize, w));
            }
            let w_poly = UniPoly::from_terms(field, &w_terms);
            for z in field.elements() {
                if w_poly.evaluate(z).is_zero() {
                    set.insert(z);
                }
            }
        }
        BinomialFamily::AVI => {
            let m = match_family_vi(field, &prm).expect("membership checked");
            let quarter = field
                .div(field.mul(beta, beta), field.from_int(4))
                .expect("odd characteristic");
            for u in field.subfield_elements(m as usize)? {
                set.insert(field.sub(field.mul(u, u), quarter));
            }
        }
    }
    Ok(set.into_iter().map(|v| field.mul(prm.lc, v)).collect())
}

// ---------------------------------------------------------------------------
// Enumeration and the exhaustive family check
// ---------------------------------------------------------------------------

/// One MVSP binomial found by enumeration, monic form x^a + beta x^b.
#[derive(Debug, Clone)]
pub struct MvspEntry {
    pub a: usize,
    pub b: usize,
    pub beta: FieldElement,
    pub num_values: usize,
    pub family: Option<BinomialFamily>,
    pub overlaps: Vec<BinomialFamily>,
}

impl MvspEntry {
    pub fn poly(&self, field: &Arc<Field>) -> UniPoly {
        UniPoly::from_terms(field, &[(self.a, field.one()), (self.b, self.beta)])
    }
}

/// All monic MVSP binomials x^a + beta x^b with 1 <= a <= max_degree,
/// 0 <= b < a, beta a unit. Substituting x -> lambda x and renormalizing
/// multiplies beta by lambda^(b-a) and preserves the number of values, so
/// only one beta per coset of (a-b)-th powers is scanned and results are
/// expanded orbit-wide.
pub fn enumerate_mvsp_binomials(
    field: &Arc<Field>,
    max_degree: usize,
    workers: Option<usize>,
) -> Vec<MvspEntry> {
    with_pool(workers, || {
        let per_a: Vec<Vec<MvspEntry>> = (1..=max_degree)
            .into_par_iter()
            .map(|a| scan_degree(field, a))
            .collect();
        per_a.into_iter().flatten().collect()
    })
}

fn scan_degree(field: &Arc<Field>, a: usize) -> Vec<MvspEntry> {
    let q = field.q() as usize;
    let qm1 = q - 1;
    let exp = field.exp_raw();
    let p2 = field.p() == 2;
    // attainable minimum of distinct values for degree a
    let bound = (qm1 / a) + 1;
    let mut seen = vec![0u32; q];
    let mut epoch = 0u32;
    let mut out = Vec::new();
    for b in 0..a {
        let g = if qm1 == 0 { 1 } else { gcd_usize(a - b, qm1) };
        let a_step = if qm1 == 0 { 0 } else { a % qm1 };
        let b_step = if qm1 == 0 { 0 } else { b % qm1 };
        for rep in 0..g {
            epoch += 1;
            let mut count = 0usize;
            let mark = |code: u32, seen: &mut [u32], count: &mut usize| {
                let slot = &mut seen[code as usize];
                if *slot != epoch {
                    *slot = epoch;
                    *count += 1;
                }
            };
            // x = 0 contributes beta when b = 0, else 0
            let v0 = if b == 0 { exp[rep] } else { 0 };
            mark(v0, &mut seen, &mut count);
            let mut ja = 0usize;
            let mut jb = rep; // log of beta * x^b starts at log beta
            let mut minimal = true;
            for _ in 0..qm1 {
                let v = if p2 {
                    exp[ja] ^ exp[jb]
                } else {
                    field.add_code(exp[ja], exp[jb])
                };
                mark(v, &mut seen, &mut count);
                if count > bound {
                    minimal = false;
                    break;
                }
                ja += a_step;
                if ja >= qm1 {
                    ja -= qm1;
                }
                jb += b_step;
                if jb >= qm1 {
                    jb -= qm1;
                }
            }
            if !minimal {
                continue;
            }
            // expand the whole coset: every beta = xi^(rep + g k) behaves
            // identically under x -> lambda x
            let mut log_beta = rep;
            while log_beta < qm1.max(1) {
                let beta = field.elem(exp[log_beta]);
                let poly = UniPoly::from_terms(field, &[(a, field.one()), (b, beta)]);
                let classification =
                    classify_binomial(&poly).expect("two nonzero terms by construction");
                let (family, overlaps) = match classification {
                    Some(c) => (Some(c.family), c.overlaps),
                    None => (None, Vec::new()),
                };
                out.push(MvspEntry {
                    a,
                    b,
                    beta,
                    num_values: bound,
                    family,
                    overlaps,
                });
                if qm1 == 0 {
                    break;
                }
                log_beta += g;
            }
        }
    }
    out.sort_by_key(|e| (e.a, e.b, e.beta.code()));
    out
}

/// The full family prediction for the window: every binomial at least one
/// family covers, keyed (a, b, beta code).
fn expected_family_members(field: &Arc<Field>, max_degree: usize) -> BTreeSet<(usize, usize, u32)> {
    let p = field.p();
    let q = field.q();
    let qm1 = q - 1;
    let mut set = BTreeSet::new();
    let units: Vec<FieldElement> = field.units().collect();

    // pure (x^q - x)-multiples of a power of x
    let neg1 = field.from_int(-1).code();
    let mut l = 1usize;
    while l as u64 * qm1 < max_degree as u64 {
        let shift = l * qm1 as usize;
        for b in 1..=(max_degree - shift) {
            set.insert((b + shift, b, neg1));
        }
        l += 1;
    }

    // translated power maps
    for a in divisors(qm1) {
        let a = a as usize;
        if a > max_degree {
            continue;
        }
        for &beta in &units {
            set.insert((a, 0, beta.code()));
        }
    }

    // cube-root splitting in characteristic 2
    if p == 2 && q > 2 && qm1 % 3 == 0 {
        let a = (2 * qm1 / 3) as usize;
        let b = (qm1 / 3) as usize;
        if a <= max_degree {
            for &beta in &units {
                if field.pow(beta, 3) == field.one() {
                    set.insert((a, b, beta.code()));
                }
            }
        }
    }

    // quadratic-character form in odd characteristic
    if p > 2 && (qm1 as usize) <= max_degree {
        let a = qm1 as usize;
        let b = (qm1 / 2) as usize;
        set.insert((a, b, field.one().code()));
        set.insert((a, b, field.from_int(-1).code()));
    }

    // norm-constrained p^l-power pairs
    for l in 1..=field.n() as u32 {
        for s in 2..=field.n() as u32 {
            let sl = (s * l) as usize;
            if sl > field.n() || field.n() % sl != 0 {
                continue;
            }
            let psl = p.pow(s * l);
            let t = (qm1 / (psl - 1)) as usize;
            let a = (p.pow(l) as usize) * t;
            if a > max_degree {
                continue;
            }
            let want = if s % 2 == 0 {
                field.one()
            } else {
                field.from_int(-1)
            };
            for beta in field.subfield_elements(sl).expect("sl divides n") {
                if beta.is_zero() {
                    continue;
                }
                if field.relative_norm(beta, sl, l as usize).unwrap() == want {
                    set.insert((a, t, beta.code()));
                }
            }
        }
    }

    // squares of subfield-translated power maps in odd characteristic
    if p > 2 {
        for m in 1..=field.n() {
            if field.n() % m != 0 {
                continue;
            }
            let t = (qm1 / (p.pow(m as u32) - 1)) as usize;
            if 2 * t > max_degree {
                continue;
            }
            for beta in field.subfield_elements(m).expect("m divides n") {
                if !beta.is_zero() {
                    set.insert((2 * t, t, beta.code()));
                }
            }
        }
    }

    set
}

/// Exhaustive comparison of enumerated MVSP binomials against the family
/// prediction over a degree window, including predicted-value-set checks
/// for every member and matched family.
#[derive(Debug, Clone)]
pub struct TheoremAReport {
    pub q: u64,
    pub max_degree: usize,
    /// Monic binomials in the window (all beta included).
    pub universe: u64,
    pub found: Vec<MvspEntry>,
    pub expected_count: usize,
    pub extras: Vec<UniPoly>,
    pub missing: Vec<UniPoly>,
    pub unclassified: Vec<UniPoly>,
    pub value_mismatches: Vec<UniPoly>,
    pub family_counts: BTreeMap<BinomialFamily, usize>,
    pub matched: bool,
}

pub fn verify_theorem_a(
    field: &Arc<Field>,
    max_degree: usize,
    workers: Option<usize>,
) -> TheoremAReport {
    let q = field.q();
    let found = enumerate_mvsp_binomials(field, max_degree, workers);
    let expected = expected_family_members(field, max_degree);

    let found_keys: BTreeSet<(usize, usize, u32)> =
        found.iter().map(|e| (e.a, e.b, e.beta.code())).collect();

    let mk_poly = |&(a, b, code): &(usize, usize, u32)| {
        UniPoly::from_terms(field, &[(a, field.one()), (b, field.elem(code))])
    };
    let extras: Vec<UniPoly> = found_keys.difference(&expected).map(mk_poly).collect();
    let missing: Vec<UniPoly> = expected.difference(&found_keys).map(mk_poly).collect();

    let mut unclassified = Vec::new();
    let mut value_mismatches = Vec::new();
    let mut family_counts = BTreeMap::new();
    for entry in &found {
        let poly = entry.poly(field);
        match entry.family {
            None => unclassified.push(poly),
            Some(primary) => {
                *family_counts.entry(primary).or_insert(0) += 1;
                let actual = poly.values();
                let mut families = vec![primary];
                families.extend_from_slice(&entry.overlaps);
                for fam in families {
                    match predicted_value_set(&poly, fam) {
                        Ok(pred) if pred == actual => {}
                        _ => {
                            value_mismatches.push(poly.clone());
                            break;
                        }
                    }
                }
            }
        }
    }

    let universe = {
        let pairs = (max_degree as u64) * (max_degree as u64 + 1) / 2;
        pairs * (q - 1)
    };
    let matched = extras.is_empty()
        && missing.is_empty()
        && unclassified.is_empty()
        && value_mismatches.is_empty();
    TheoremAReport {
        q,
        max_degree,
        universe,
        expected_count: expected.len(),
        found,
        extras,
        missing,
        unclassified,
        value_mismatches,
        family_counts,
        matched,
    }
}
