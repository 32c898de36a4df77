//! Sparse univariate polynomials over GF(p^n).
//!
//! Exponents are machine integers, coefficients live in a shared [`Field`].
//! The representation is a map from exponent to nonzero coefficient, so
//! high-degree sparse forms like `x^(b+q-1) - x^b` cost nothing to store.
//! Dense kernels (division, gcd, squarefree decomposition) convert on entry.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::gf::{Field, FieldElement, GfError};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("exact division left a nonzero remainder")]
    InexactDivision,
    #[error("polynomial is not a p-th power")]
    NotAPthPower,
    #[error("operation requires degree at least 1")]
    DegreeTooSmall,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Clone)]
pub struct UniPoly {
    field: Arc<Field>,
    terms: BTreeMap<usize, u32>,
}

impl PartialEq for UniPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field.id() == other.field.id() && self.terms == other.terms
    }
}
impl Eq for UniPoly {}

impl std::hash::Hash for UniPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.id().hash(state);
        for (&e, &c) in &self.terms {
            e.hash(state);
            c.hash(state);
        }
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl UniPoly {
    pub fn zero(field: &Arc<Field>) -> UniPoly {
        UniPoly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Arc<Field>, c: FieldElement) -> UniPoly {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            field.try_check(c).expect("constant from a different field");
            t.insert(0, c.code());
        }
        UniPoly {
            field: field.clone(),
            terms: t,
        }
    }

    pub fn one(field: &Arc<Field>) -> UniPoly {
        Self::constant(field, field.one())
    }

    pub fn x(field: &Arc<Field>) -> UniPoly {
        Self::monomial(field, field.one(), 1)
    }

    pub fn monomial(field: &Arc<Field>, c: FieldElement, e: usize) -> UniPoly {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            field
                .try_check(c)
                .expect("coefficient from a different field");
            t.insert(e, c.code());
        }
        UniPoly {
            field: field.clone(),
            terms: t,
        }
    }

    pub fn from_terms(field: &Arc<Field>, terms: &[(usize, FieldElement)]) -> UniPoly {
        let mut out = Self::zero(field);
        for &(e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    /// Monic product of (x - alpha) over the given roots, with repetition.
    pub fn from_roots(field: &Arc<Field>, roots: &[FieldElement]) -> UniPoly {
        let mut dense = vec![1u32];
        for &r in roots {
            field.try_check(r).expect("root from a different field");
            let neg_r = field.neg(r).code();
            let mut next = vec![0u32; dense.len() + 1];
            for (i, &c) in dense.iter().enumerate() {
                next[i + 1] = field.add_code(next[i + 1], c);
                next[i] = field.add_code(next[i], field.mul_code(c, neg_r));
            }
            dense = next;
        }
        Self::from_dense(field, dense)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: usize) -> FieldElement {
        match self.terms.get(&e) {
            Some(&c) => self.field.elem(c),
            None => self.field.zero(),
        }
    }

    pub fn leading_coeff(&self) -> FieldElement {
        match self.terms.iter().next_back() {
            Some((_, &c)) => self.field.elem(c),
            None => self.field.zero(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == self.field.one()
    }

    /// Iterates (exponent, coefficient) pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, FieldElement)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, self.field.elem(c)))
    }

    pub fn support(&self) -> Vec<usize> {
        self.terms.keys().copied().collect()
    }

    fn add_term(&mut self, e: usize, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        self.field
            .try_check(c)
            .expect("coefficient from a different field");
        let cur = self.terms.get(&e).copied().unwrap_or(0);
        let sum = self.field.add_code(cur, c.code());
        if sum == 0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    fn check_same_field(&self, other: &UniPoly) {
        assert_eq!(
            self.field.id(),
            other.field.id(),
            "polynomials over different fields"
        );
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        self.check_same_field(other);
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn neg(&self) -> UniPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg_code(*c);
        }
        out
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElement) -> UniPoly {
        self.field
            .try_check(c)
            .expect("scalar from a different field");
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = self.field.mul_code(*v, c.code());
        }
        out
    }

    /// Substitutes x -> lambda * x.
    pub fn scale_arg(&self, lambda: FieldElement) -> UniPoly {
        self.field
            .try_check(lambda)
            .expect("scalar from a different field");
        let f = &self.field;
        let mut out = Self::zero(f);
        for (e, c) in self.terms() {
            out.add_term(e, f.mul(c, f.pow(lambda, e as u64)));
        }
        out
    }

    /// Splits into (leading coefficient, monic part).
    pub fn monic(&self) -> (FieldElement, UniPoly) {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc == self.field.one() {
            return (lc, self.clone());
        }
        let inv = self.field.inv(lc).expect("nonzero leading coefficient");
        (lc, self.scale(inv))
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        self.check_same_field(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let d = self.degree().unwrap() + other.degree().unwrap();
        let f = &self.field;
        // dense accumulation when the result is not much larger than the
        // term-pair count; otherwise stay sparse
        if d + 1 <= 8 * self.terms.len() * other.terms.len() {
            let mut acc = vec![0u32; d + 1];
            for (&e1, &c1) in &self.terms {
                for (&e2, &c2) in &other.terms {
                    let prod = f.mul_code(c1, c2);
                    acc[e1 + e2] = f.add_code(acc[e1 + e2], prod);
                }
            }
            Self::from_dense(f, acc)
        } else {
            let mut out = Self::zero(f);
            for (e1, c1) in self.terms() {
                for (e2, c2) in other.terms() {
                    out.add_term(e1 + e2, f.mul(c1, c2));
                }
            }
            out
        }
    }

    pub fn pow(&self, e: u64) -> UniPoly {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The p^j-th power, taken termwise: coefficients through Frobenius,
    /// exponents multiplied by p^j.
    pub fn frobenius_pow(&self, j: usize) -> UniPoly {
        let f = &self.field;
        let mut step: usize = 1;
        for _ in 0..j {
            step *= f.p() as usize;
        }
        let mut out = Self::zero(f);
        for (e, c) in self.terms() {
            out.add_term(e * step, f.frobenius(c, j % f.n().max(1)));
        }
        out
    }

    pub fn derivative(&self) -> UniPoly {
        let f = &self.field;
        let p = f.p();
        let mut out = Self::zero(f);
        for (e, c) in self.terms() {
            if e == 0 {
                continue;
            }
            let k = f.from_int((e as u64 % p) as i64);
            out.add_term(e - 1, f.mul(c, k));
        }
        out
    }

    pub fn evaluate(&self, a: FieldElement) -> FieldElement {
        self.field
            .try_check(a)
            .expect("point from a different field");
        let f = &self.field;
        if a.is_zero() {
            return self.coeff(0);
        }
        let mut acc = 0u32;
        for (&e, &c) in &self.terms {
            let term = f.mul_code(c, f.pow_code(a.code(), e as u64));
            acc = f.add_code(acc, term);
        }
        f.elem(acc)
    }

    /// Substitutes another polynomial for the variable.
    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        self.check_same_field(inner);
        let f = &self.field;
        let mut exps: Vec<usize> = self.terms.keys().copied().collect();
        exps.reverse();
        let Some(&top) = exps.first() else {
            return Self::zero(f);
        };
        let mut acc = Self::constant(f, self.coeff(top));
        let mut prev = top;
        for &e in &exps[1..] {
            acc = acc.mul(&inner.pow((prev - e) as u64));
            acc = acc.add(&Self::constant(f, self.coeff(e)));
            prev = e;
        }
        if prev > 0 {
            acc = acc.mul(&inner.pow(prev as u64));
        }
        acc
    }

    pub(crate) fn to_dense(&self) -> Vec<u32> {
        match self.degree() {
            None => vec![],
            Some(d) => {
                let mut v = vec![0u32; d + 1];
                for (&e, &c) in &self.terms {
                    v[e] = c;
                }
                v
            }
        }
    }

    pub(crate) fn from_dense(field: &Arc<Field>, dense: Vec<u32>) -> UniPoly {
        let mut terms = BTreeMap::new();
        for (e, &c) in dense.iter().enumerate() {
            if c != 0 {
                terms.insert(e, c);
            }
        }
        UniPoly {
            field: field.clone(),
            terms,
        }
    }

    pub fn divrem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly), PolyError> {
        self.check_same_field(divisor);
        let f = &self.field;
        let Some(dd) = divisor.degree() else {
            return Err(PolyError::DivisionByZero);
        };
        let Some(dn) = self.degree() else {
            return Ok((Self::zero(f), Self::zero(f)));
        };
        if dn < dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let div = divisor.to_dense();
        let inv_lc = f
            .inv(f.elem(div[dd]))
            .expect("nonzero leading coefficient")
            .code();
        let mut rem = self.to_dense();
        let mut quo = vec![0u32; dn - dd + 1];
        for i in (dd..=dn).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let qc = f.mul_code(c, inv_lc);
            quo[i - dd] = qc;
            for (k, &dk) in div.iter().enumerate() {
                if dk != 0 {
                    let sub = f.neg_code(f.mul_code(qc, dk));
                    rem[i - dd + k] = f.add_code(rem[i - dd + k], sub);
                }
            }
        }
        rem.truncate(dd);
        Ok((Self::from_dense(f, quo), Self::from_dense(f, rem)))
    }

    pub fn exact_div(&self, divisor: &UniPoly) -> Result<UniPoly, PolyError> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(PolyError::InexactDivision);
        }
        Ok(q)
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        match other.divrem(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Monic gcd; the gcd with a zero polynomial is the other's monic part.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        self.check_same_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic().1
    }

    /// Quotient and remainder by the linear factor (x - alpha); the
    /// remainder equals the evaluation at alpha.
    pub fn synthetic_div(&self, alpha: FieldElement) -> (UniPoly, FieldElement) {
        self.field
            .try_check(alpha)
            .expect("point from a different field");
        let f = &self.field;
        let dense = self.to_dense();
        if dense.is_empty() {
            return (Self::zero(f), f.zero());
        }
        let n = dense.len();
        let mut quo = vec![0u32; n - 1];
        let mut carry = 0u32;
        let ac = alpha.code();
        for i in (0..n).rev() {
            let v = f.add_code(dense[i], f.mul_code(carry, ac));
            if i == 0 {
                return (Self::from_dense(f, quo), f.elem(v));
            }
            quo[i - 1] = v;
            carry = v;
        }
        unreachable!()
    }

    /// Multiplicity of alpha as a root (0 if not a root).
    pub fn root_multiplicity(&self, alpha: FieldElement) -> usize {
        let mut cur = self.clone();
        let mut m = 0;
        while !cur.is_zero() {
            let (quo, rem) = cur.synthetic_div(alpha);
            if !rem.is_zero() {
                break;
            }
            m += 1;
            cur = quo;
        }
        m
    }

    /// All roots in the coefficient field, ascending by code, with
    /// multiplicities.
    pub fn roots_with_multiplicity(&self) -> Vec<(FieldElement, usize)> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        for a in self.field.elements() {
            if cur.degree().map_or(true, |d| d == 0) {
                break;
            }
            if !cur.evaluate(a).is_zero() {
                continue;
            }
            let mut m = 0;
            loop {
                let (quo, rem) = cur.synthetic_div(a);
                if !rem.is_zero() {
                    break;
                }
                m += 1;
                cur = quo;
            }
            if m > 0 {
                out.push((a, m));
            }
        }
        out
    }

    /// True when every exponent is divisible by p, i.e. the polynomial is a
    /// p-th power (the coefficient field is perfect).
    pub fn is_p_power(&self) -> bool {
        let p = self.field.p() as usize;
        self.terms.keys().all(|&e| e % p == 0)
    }

    pub fn p_th_root(&self) -> Result<UniPoly, PolyError> {
        if !self.is_p_power() {
            return Err(PolyError::NotAPthPower);
        }
        let f = &self.field;
        let p = f.p() as usize;
        let mut out = Self::zero(f);
        for (e, c) in self.terms() {
            out.add_term(e / p, f.p_th_root(c));
        }
        Ok(out)
    }

    /// Canonical representative modulo x^q - x: exponents e >= 1 fold to
    /// ((e - 1) mod (q - 1)) + 1, preserving the induced function.
    pub fn reduce_mod_xq_minus_x(&self) -> UniPoly {
        let f = &self.field;
        let qm1 = (f.q() - 1) as usize;
        let mut out = Self::zero(f);
        for (e, c) in self.terms() {
            let e2 = if e == 0 || qm1 == 0 {
                e.min(1)
            } else {
                (e - 1) % qm1 + 1
            };
            out.add_term(e2, c);
        }
        out
    }

    /// Function equality on all of F_q.
    pub fn agrees_with(&self, other: &UniPoly) -> bool {
        self.check_same_field(other);
        self.reduce_mod_xq_minus_x() == other.reduce_mod_xq_minus_x()
    }

    /// Distinct values {F(a) : a in F_q}, ascending by code.
    pub fn values(&self) -> Vec<FieldElement> {
        let f = &self.field;
        let q = f.q() as usize;
        let mut seen = vec![false; q];
        for a in f.elements() {
            seen[self.evaluate(a).code() as usize] = true;
        }
        (0..q as u32)
            .filter(|&c| seen[c as usize])
            .map(|c| f.elem(c))
            .collect()
    }

    pub fn value_count(&self) -> usize {
        let f = &self.field;
        let q = f.q() as usize;
        let mut seen = vec![false; q];
        let mut count = 0;
        for a in f.elements() {
            let c = self.evaluate(a).code() as usize;
            if !seen[c] {
                seen[c] = true;
                count += 1;
            }
        }
        count
    }

    /// A polynomial of degree d >= 1 has at least floor((q-1)/d) + 1 values;
    /// minimal value set means the bound is attained.
    pub fn is_mvsp(&self) -> Result<bool, PolyError> {
        let d = self.degree().unwrap_or(0);
        if d == 0 {
            return Err(PolyError::DegreeTooSmall);
        }
        let q = self.field.q();
        let bound = (q - 1) / d as u64 + 1;
        Ok(self.value_count() as u64 == bound)
    }

    pub fn value_set_report(&self) -> Result<ValueSetReport, PolyError> {
        if self.degree().unwrap_or(0) == 0 {
            return Err(PolyError::DegreeTooSmall);
        }
        let f = &self.field;
        let q = f.q() as usize;
        let mut fiber_roots: BTreeMap<u32, Vec<FieldElement>> = BTreeMap::new();
        for a in f.elements() {
            fiber_roots
                .entry(self.evaluate(a).code())
                .or_default()
                .push(a);
        }
        let mut fibers = Vec::with_capacity(fiber_roots.len());
        for (vcode, roots) in fiber_roots {
            let value = f.elem(vcode);
            let shifted = self.sub(&Self::constant(f, value));
            let roots: Vec<(FieldElement, usize)> = roots
                .into_iter()
                .map(|r| (r, shifted.root_multiplicity(r)))
                .collect();
            fibers.push(Fiber { value, roots });
        }
        let total: usize = fibers.iter().map(|fb| fb.roots.len()).sum();
        debug_assert_eq!(total, q, "fibers partition the field");
        // distinguished value: smallest fiber-polynomial degree, ties by code
        let gamma0_index = (0..fibers.len())
            .min_by_key(|&i| (fibers[i].roots.len(), fibers[i].value.code()))
            .expect("at least one value");
        let nu = fibers[gamma0_index]
            .roots
            .iter()
            .map(|&(_, m)| m)
            .min()
            .expect("fibers are nonempty");
        let r = fibers.len() - 1;
        Ok(ValueSetReport {
            fibers,
            gamma0_index,
            nu,
            r,
        })
    }

    /// Renders with variable name "x".
    pub fn render(&self) -> String {
        self.render_with_var('x')
    }

    pub fn render_with_var(&self, var: char) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut parts = Vec::with_capacity(self.terms.len());
        for (&e, &c) in self.terms.iter().rev() {
            let elem = f.elem(c);
            let cs = if (c as u64) < f.p() {
                c.to_string()
            } else {
                f.render(elem)
            };
            let part = match e {
                0 => cs,
                _ => {
                    let xs = if e == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{e}")
                    };
                    if c == 1 {
                        xs
                    } else {
                        format!("{cs}*{xs}")
                    }
                }
            };
            parts.push(part);
        }
        parts.join("+")
    }

    pub fn parse(field: &Arc<Field>, s: &str) -> Result<UniPoly, PolyError> {
        Self::parse_with_var(field, s, 'x')
    }

    pub fn parse_with_var(field: &Arc<Field>, s: &str, var: char) -> Result<UniPoly, PolyError> {
        let mut p = Parser {
            field,
            bytes: s.as_bytes(),
            pos: 0,
            var,
        };
        p.parse_poly()
    }
}

/// One value of a polynomial together with its fiber: the points of F_q
/// mapping there, each with its multiplicity as a root of F - value.
#[derive(Debug, Clone)]
pub struct Fiber {
    pub value: FieldElement,
    /// Distinct preimages ascending by code, with multiplicities.
    pub roots: Vec<(FieldElement, usize)>,
}

impl Fiber {
    /// Monic product of (x - alpha) over the distinct preimages.
    pub fn fiber_poly(&self, field: &Arc<Field>) -> UniPoly {
        let roots: Vec<FieldElement> = self.roots.iter().map(|&(r, _)| r).collect();
        UniPoly::from_roots(field, &roots)
    }

    /// Number of distinct preimages.
    pub fn span(&self) -> usize {
        self.roots.len()
    }
}

/// Full fiber decomposition of a polynomial map on F_q.
#[derive(Debug, Clone)]
pub struct ValueSetReport {
    /// One fiber per attained value, ascending by value code; the fiber
    /// spans partition F_q.
    pub fibers: Vec<Fiber>,
    /// Index of the distinguished value: smallest fiber span, ties broken
    /// by smallest value code.
    pub gamma0_index: usize,
    /// Smallest root multiplicity within the distinguished fiber.
    pub nu: usize,
    /// Number of values minus one.
    pub r: usize,
}

impl ValueSetReport {
    pub fn values(&self) -> Vec<FieldElement> {
        self.fibers.iter().map(|f| f.value).collect()
    }

    pub fn num_values(&self) -> usize {
        self.fibers.len()
    }

    pub fn gamma0(&self) -> FieldElement {
        self.fibers[self.gamma0_index].value
    }
}

/// Squarefree factor with its multiplicity in the decomposed polynomial.
#[derive(Debug, Clone)]
pub struct SquarefreePart {
    pub factor: UniPoly,
    pub multiplicity: usize,
}

/// Result of squarefree decomposition: `unit * prod factor^multiplicity`
/// reconstructs the input; factors are monic, squarefree and pairwise
/// coprime, listed by ascending multiplicity.
#[derive(Debug, Clone)]
pub struct SquarefreeDecomposition {
    pub unit: FieldElement,
    pub parts: Vec<SquarefreePart>,
}

impl SquarefreeDecomposition {
    pub fn reconstruct(&self, field: &Arc<Field>) -> UniPoly {
        let mut acc = UniPoly::constant(field, self.unit);
        for part in &self.parts {
            acc = acc.mul(&part.factor.pow(part.multiplicity as u64));
        }
        acc
    }

    /// The (degree, multiplicity) profile, ascending by multiplicity.
    pub fn profile(&self) -> Vec<(usize, usize)> {
        self.parts
            .iter()
            .map(|p| (p.factor.degree().unwrap_or(0), p.multiplicity))
            .collect()
    }
}

impl UniPoly {
    /// Squarefree decomposition in characteristic p. Factors with
    /// multiplicity divisible by p surface through the p-th-root recursion.
    pub fn squarefree_decomposition(&self) -> Result<SquarefreeDecomposition, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (unit, monic) = self.monic();
        let mut parts = Vec::new();
        Self::sqfree_rec(&monic, 1, &mut parts)?;
        parts.sort_by_key(|p: &SquarefreePart| (p.multiplicity, p.factor.sort_key()));
        Ok(SquarefreeDecomposition { unit, parts })
    }

    fn sqfree_rec(
        f: &UniPoly,
        scale: usize,
        parts: &mut Vec<SquarefreePart>,
    ) -> Result<(), PolyError> {
        if f.degree().unwrap_or(0) == 0 {
            return Ok(());
        }
        let deriv = f.derivative();
        if deriv.is_zero() {
            // f is a p-th power; recurse on its root with scaled multiplicity
            let root = f.p_th_root()?;
            return Self::sqfree_rec(&root, scale * f.field.p() as usize, parts);
        }
        let mut c = f.gcd(&deriv);
        let mut w = f.exact_div(&c)?;
        let mut i = 1usize;
        while w.degree().unwrap_or(0) > 0 {
            let y = w.gcd(&c);
            let z = w.exact_div(&y)?;
            if z.degree().unwrap_or(0) > 0 {
                parts.push(SquarefreePart {
                    factor: z,
                    multiplicity: i * scale,
                });
            }
            c = c.exact_div(&y)?;
            w = y;
            i += 1;
        }
        // what is left of c collects the factors with multiplicity
        // divisible by p; it is itself a p-th power
        if c.degree().unwrap_or(0) > 0 {
            let root = c.p_th_root()?;
            Self::sqfree_rec(&root, scale * f.field.p() as usize, parts)?;
        }
        Ok(())
    }

    /// Deterministic ordering key: degree first, then the term list.
    pub fn sort_key(&self) -> (usize, Vec<(usize, u32)>) {
        let d = self.degree().map_or(0, |d| d + 1);
        let mut terms: Vec<(usize, u32)> = self.terms.iter().map(|(&e, &c)| (e, c)).collect();
        terms.reverse();
        (d, terms)
    }
}

struct Parser<'a> {
    field: &'a Arc<Field>,
    bytes: &'a [u8],
    pos: usize,
    var: char,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn parse_poly(&mut self) -> Result<UniPoly, PolyError> {
        let mut out = UniPoly::zero(self.field);
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let mut first = true;
        loop {
            self.skip_ws();
            let Some(b) = self.peek() else { break };
            let negate = match b {
                b'+' => {
                    self.pos += 1;
                    false
                }
                b'-' => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => return self.err(format!("expected '+' or '-', found '{}'", b as char)),
            };
            first = false;
            let (e, c) = self.parse_term()?;
            out.add_term(e, if negate { self.field.neg(c) } else { c });
        }
        Ok(out)
    }

    fn parse_term(&mut self) -> Result<(usize, FieldElement), PolyError> {
        self.skip_ws();
        let Some(b) = self.peek() else {
            return self.err("expected a term");
        };
        if b == self.var as u8 && !self.lookahead_generator() {
            let e = self.parse_var_power()?;
            return Ok((e, self.field.one()));
        }
        let c = self.parse_coeff()?;
        self.skip_ws();
        if self.peek() == Some(b'*') {
            self.pos += 1;
            self.skip_ws();
            if self.peek() != Some(self.var as u8) {
                return self.err(format!("expected variable '{}'", self.var));
            }
            let e = self.parse_var_power()?;
            Ok((e, c))
        } else {
            Ok((0, c))
        }
    }

    /// Distinguishes the generator literal "g^k" from a variable named 'g'.
    fn lookahead_generator(&self) -> bool {
        self.var == 'g'
            && self.bytes.get(self.pos) == Some(&b'g')
            && self.bytes.get(self.pos + 1) == Some(&b'^')
    }

    fn parse_var_power(&mut self) -> Result<usize, PolyError> {
        self.pos += 1; // the variable itself
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e: usize = self.parse_unsigned()?;
            Ok(e)
        } else {
            Ok(1)
        }
    }

    fn parse_unsigned<T: std::str::FromStr>(&mut self) -> Result<T, PolyError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        s.parse().or_else(|_| {
            self.pos = start;
            self.err(format!("number '{s}' out of range"))
        })
    }

    fn parse_coeff(&mut self) -> Result<FieldElement, PolyError> {
        self.skip_ws();
        match self.peek() {
            Some(b'g') => {
                if self.bytes.get(self.pos + 1) != Some(&b'^') {
                    return self.err("expected 'g^k'");
                }
                self.pos += 2;
                let k: u64 = self.parse_unsigned()?;
                Ok(self.field.exp_of(k))
            }
            Some(b'[') => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b']' {
                    self.pos += 1;
                }
                if self.peek() != Some(b']') {
                    self.pos = start;
                    return self.err("unterminated coordinate vector");
                }
                self.pos += 1;
                let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                self.field.parse_element(s).map_err(|e| PolyError::Parse {
                    pos: start,
                    msg: e.to_string(),
                })
            }
            Some(b) if b.is_ascii_digit() => {
                let v: u64 = self.parse_unsigned()?;
                Ok(self.field.from_int((v % self.field.p()) as i64))
            }
            Some(b) => self.err(format!("unexpected character '{}'", b as char)),
            None => self.err("expected a coefficient"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn gf(p: u64, n: usize) -> Arc<Field> {
        Field::shared(p, n).unwrap()
    }

    #[test]
    fn parse_render_round_trip() {
        let f = gf(2, 3);
        let s = "x^9+g^3*x^2+x+1";
        let p = UniPoly::parse(&f, s).unwrap();
        assert_eq!(p.render(), s);
        assert_eq!(p.degree(), Some(9));
        assert_eq!(p.coeff(2), f.exp_of(3));

        let g = gf(3, 1);
        let p2 = UniPoly::parse(&g, "2*x^4 - x + 1").unwrap();
        assert_eq!(p2.render(), "2*x^4+2*x+1");
        // coefficients add up and vanishing terms drop out
        let p3 = UniPoly::parse(&g, "x^2+2*x^2").unwrap();
        assert!(p3.is_zero());
        assert_eq!(p3.render(), "0");

        let y = UniPoly::parse_with_var(&f, "y^3+y", 'y').unwrap();
        assert_eq!(y.render_with_var('y'), "y^3+y");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let f = gf(2, 3);
        for (s, at) in [
            ("", 0usize),
            ("x^", 2),
            ("x^2 & 1", 4),
            ("g^*x", 2),
            ("2*y", 2),
        ] {
            match UniPoly::parse(&f, s) {
                Err(PolyError::Parse { pos, .. }) => assert_eq!(pos, at, "input {s:?}"),
                other => panic!("expected parse error for {s:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn vector_coefficients_parse() {
        let f = gf(3, 2);
        let p = UniPoly::parse(&f, "[1,2]*x^2+[0,1]*x").unwrap();
        assert_eq!(p.coeff(2), f.elem_from_coeffs(&[1, 2]));
        assert_eq!(p.coeff(1), f.elem_from_coeffs(&[0, 1]));
    }

    #[test]
    fn arithmetic_frozen_example() {
        let f = gf(3, 2);
        let a = UniPoly::parse(&f, "x^2+g^1*x+2").unwrap();
        let b = UniPoly::parse(&f, "x+g^2").unwrap();
        let prod = a.mul(&b);
        let (q, r) = prod.divrem(&b).unwrap();
        assert_eq!(q, a);
        assert!(r.is_zero());
        let shifted = prod.add(&UniPoly::one(&f));
        let (q2, r2) = shifted.divrem(&b).unwrap();
        assert_eq!(q2, a);
        assert_eq!(r2, UniPoly::one(&f));
    }

    #[test]
    fn division_guards() {
        let f = gf(2, 2);
        let a = UniPoly::parse(&f, "x^2+1").unwrap();
        assert!(matches!(
            a.divrem(&UniPoly::zero(&f)),
            Err(PolyError::DivisionByZero)
        ));
        // x^2+x+1 splits as (x+g^1)(x+g^2) over GF(4), so divide by x+1
        let b = UniPoly::parse(&f, "x+1").unwrap();
        assert!(matches!(
            UniPoly::parse(&f, "x^2+x+1").unwrap().exact_div(&b),
            Err(PolyError::InexactDivision)
        ));
    }

    #[test]
    fn gcd_is_monic() {
        let f = gf(5, 1);
        let a = UniPoly::parse(&f, "x^2+4").unwrap(); // (x-1)(x+1)
        let b = UniPoly::parse(&f, "3*x+2").unwrap(); // 3(x-1)
        let g = a.gcd(&b);
        assert_eq!(g.render(), "x+4");
        assert!(g.is_monic());
        assert_eq!(a.gcd(&UniPoly::zero(&f)).render(), "x^2+4");
    }

    #[test]
    fn derivative_in_characteristic_p() {
        let f = gf(3, 1);
        let p = UniPoly::parse(&f, "x^3+2*x+1").unwrap();
        assert_eq!(p.derivative().render(), "2");
        let g = gf(2, 2);
        let h = UniPoly::parse(&g, "x^4+x^2+1").unwrap();
        assert!(h.derivative().is_zero());
        assert!(h.is_p_power());
        assert_eq!(h.p_th_root().unwrap().render(), "x^2+x+1");
    }

    #[test]
    fn p_th_root_moves_coefficients() {
        let f = gf(3, 2);
        let xi = f.xi();
        let lin = UniPoly::from_terms(&f, &[(1, f.one()), (0, xi)]);
        let cube = lin.pow(3);
        assert_eq!(cube.support(), vec![0, 3]);
        assert_eq!(cube.p_th_root().unwrap(), lin);
        let not_power = UniPoly::parse(&f, "x^2+x").unwrap();
        assert!(matches!(
            not_power.p_th_root(),
            Err(PolyError::NotAPthPower)
        ));
    }

    #[test]
    fn evaluation_and_compose() {
        let f = gf(2, 3);
        let p = UniPoly::parse(&f, "x^2+x").unwrap();
        assert_eq!(p.evaluate(f.zero()), f.zero());
        assert_eq!(p.evaluate(f.one()), f.zero());
        let t = UniPoly::parse(&f, "x^2+x").unwrap();
        let comp = t.compose(&p);
        assert_eq!(comp.render(), "x^4+x");
        // constant term convention at zero
        let c = UniPoly::parse(&f, "x^3+1").unwrap();
        assert_eq!(c.evaluate(f.zero()), f.one());
    }

    #[test]
    fn frobenius_pow_is_pth_power() {
        let f = gf(3, 2);
        let p = UniPoly::parse(&f, "x^2+g^1*x+2").unwrap();
        assert_eq!(p.frobenius_pow(1), p.pow(3));
        assert_eq!(p.frobenius_pow(2), p.pow(9));
    }

    #[test]
    fn reduction_preserves_the_function() {
        let f = gf(2, 2);
        let q = f.q() as usize;
        let p = UniPoly::from_terms(&f, &[(q, f.one())]); // x^q
        let red = p.reduce_mod_xq_minus_x();
        assert_eq!(red.render(), "x");
        assert!(p.agrees_with(&UniPoly::x(&f)));
        // value sets agree but minimality does not transfer across degrees
        assert_eq!(p.values(), UniPoly::x(&f).values());
        assert!(!p.is_mvsp().unwrap());
        assert!(UniPoly::x(&f).is_mvsp().unwrap());
    }

    #[test]
    fn value_report_of_x2_plus_x_over_gf3() {
        let f = gf(3, 1);
        let p = UniPoly::parse(&f, "x^2+x").unwrap();
        let rep = p.value_set_report().unwrap();
        assert_eq!(rep.num_values(), 2);
        assert_eq!(rep.values(), vec![f.from_int(0), f.from_int(2)]);
        assert!(p.is_mvsp().unwrap());
        // fiber of 0 is {0, 2}, fiber of 2 is the double root 1
        assert_eq!(
            rep.fibers[0].roots,
            vec![(f.from_int(0), 1), (f.from_int(2), 1)]
        );
        assert_eq!(rep.fibers[1].roots, vec![(f.from_int(1), 2)]);
        assert_eq!(rep.gamma0(), f.from_int(2));
        assert_eq!(rep.nu, 2);
        assert_eq!(rep.r, 1);
        let spans: usize = rep.fibers.iter().map(|fb| fb.span()).sum();
        assert_eq!(spans, 3);
        let l0 = rep.fibers[rep.gamma0_index].fiber_poly(&f);
        assert_eq!(l0.render(), "x+2");
    }

    #[test]
    fn squarefree_decomposition_examples() {
        let f2 = gf(2, 1);
        let p = UniPoly::parse(&f2, "x^3+x").unwrap(); // x (x+1)^2
        let d = p.squarefree_decomposition().unwrap();
        assert_eq!(d.profile(), vec![(1, 1), (1, 2)]);
        assert_eq!(d.parts[0].factor.render(), "x");
        assert_eq!(d.parts[1].factor.render(), "x+1");
        assert_eq!(d.reconstruct(&f2), p);

        let f3 = gf(3, 1);
        let sq = UniPoly::parse(&f3, "x^2+x+1").unwrap(); // (x+2)^2
        let d3 = sq.squarefree_decomposition().unwrap();
        assert_eq!(d3.profile(), vec![(1, 2)]);
        assert_eq!(d3.parts[0].factor.render(), "x+2");

        // multiplicity divisible by p goes through the p-th root branch
        let cube = UniPoly::parse(&f3, "x+1").unwrap().pow(3);
        let dc = cube.squarefree_decomposition().unwrap();
        assert_eq!(dc.profile(), vec![(1, 3)]);
        assert_eq!(dc.parts[0].factor.render(), "x+1");

        // x^q - x is squarefree of full degree
        let f4 = gf(2, 2);
        let perm = UniPoly::parse(&f4, "x^4+x").unwrap();
        let d4 = perm.squarefree_decomposition().unwrap();
        assert_eq!(d4.profile(), vec![(4, 1)]);

        // non-monic input keeps the unit
        let scaled = UniPoly::parse(&f3, "2*x^2+2*x+2").unwrap();
        let ds = scaled.squarefree_decomposition().unwrap();
        assert_eq!(ds.unit, f3.from_int(2));
        assert_eq!(ds.reconstruct(&f3), scaled);
    }

    #[test]
    fn roots_and_synthetic_division() {
        let f = gf(2, 2);
        let xi = f.xi();
        let p = UniPoly::from_roots(&f, &[f.zero(), xi, xi]);
        assert_eq!(p.degree(), Some(3));
        let roots = p.roots_with_multiplicity();
        assert_eq!(roots, vec![(f.zero(), 1), (xi, 2)]);
        let (quo, rem) = p.synthetic_div(xi);
        assert!(rem.is_zero());
        assert_eq!(quo.root_multiplicity(xi), 1);
        assert_eq!(p.root_multiplicity(f.one()), 0);
    }

    #[test]
    fn from_roots_over_gf3() {
        let f = gf(3, 1);
        let all: Vec<_> = f.elements().collect();
        let p = UniPoly::from_roots(&f, &all);
        assert_eq!(p.render(), "x^3+2*x");
    }

    #[test]
    fn scale_arg_substitutes() {
        let f = gf(2, 3);
        let xi = f.xi();
        let p = UniPoly::parse(&f, "x^3+x+1").unwrap();
        let s = p.scale_arg(xi);
        for a in f.elements() {
            assert_eq!(s.evaluate(a), p.evaluate(f.mul(xi, a)));
        }
    }

    #[test]
    fn sparse_high_degree_products() {
        let f = gf(2, 4);
        let q = f.q() as usize;
        let a = UniPoly::from_terms(&f, &[(3 * q, f.one()), (0, f.one())]);
        let b = UniPoly::from_terms(&f, &[(2 * q, f.one()), (1, f.one())]);
        let prod = a.mul(&b);
        assert_eq!(prod.support(), vec![1, 2 * q, 3 * q + 1, 5 * q]);
    }
}
