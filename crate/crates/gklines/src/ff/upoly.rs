//! Dense univariate polynomials over an interned field: arithmetic,
//! gcd, root extraction and full factorization.
//!
//! Root finding scans the field below [`SCAN_BOUND`] and switches to
//! gcd-with-`x^{|F|}-x` plus equal-degree splitting above it. All
//! splitting choices walk the canonical element order, so results are
//! deterministic across runs and thread counts.

use super::{Element, Field, TowerMap};

/// Fields up to this size are searched exhaustively for roots.
pub const SCAN_BOUND: u128 = 1 << 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly {
    field: &'static Field,
    /// Coefficients low-to-high, no trailing zeros; empty means zero.
    c: Vec<Element>,
}

impl std::fmt::Debug for UPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, e)| format!("{e}*t^{i}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl UPoly {
    pub fn new(field: &'static Field, mut c: Vec<Element>) -> UPoly {
        while c.last().map_or(false, Element::is_zero) {
            c.pop();
        }
        debug_assert!(c.iter().all(|e| e.field_id() == field.id()));
        UPoly { field, c }
    }
    pub fn zero(field: &'static Field) -> UPoly {
        UPoly { field, c: Vec::new() }
    }
    pub fn constant(e: Element) -> UPoly {
        UPoly::new(e.field(), vec![e])
    }
    pub fn x(field: &'static Field) -> UPoly {
        UPoly::new(field, vec![field.zero(), field.one()])
    }
    /// `x - r`
    pub fn x_minus(r: &Element) -> UPoly {
        UPoly::new(r.field(), vec![-r, r.field().one()])
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }
    pub fn coeffs(&self) -> &[Element] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> Element {
        self.c.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn deg(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }
    pub fn lead(&self) -> Option<&Element> {
        self.c.last()
    }

    pub fn add(&self, rhs: &UPoly) -> UPoly {
        let n = self.c.len().max(rhs.c.len());
        let z = self.field.zero();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i).unwrap_or(&z);
            let b = rhs.c.get(i).unwrap_or(&z);
            out.push(a + b);
        }
        UPoly::new(self.field, out)
    }
    pub fn sub(&self, rhs: &UPoly) -> UPoly {
        let n = self.c.len().max(rhs.c.len());
        let z = self.field.zero();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i).unwrap_or(&z);
            let b = rhs.c.get(i).unwrap_or(&z);
            out.push(a - b);
        }
        UPoly::new(self.field, out)
    }
    pub fn neg(&self) -> UPoly {
        UPoly::new(self.field, self.c.iter().map(|e| -e).collect())
    }
    pub fn mul(&self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UPoly::new(self.field, out)
    }
    pub fn scale(&self, s: &Element) -> UPoly {
        UPoly::new(self.field, self.c.iter().map(|e| e * s).collect())
    }
    pub fn monic(&self) -> UPoly {
        match self.lead() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv()),
        }
    }

    pub fn divrem(&self, rhs: &UPoly) -> (UPoly, UPoly) {
        let db = rhs.deg().expect("division by zero polynomial");
        if self.deg().map_or(true, |da| da < db) {
            return (UPoly::zero(self.field), self.clone());
        }
        let lead_inv = rhs.lead().unwrap().inv();
        let mut r = self.c.clone();
        let mut q = vec![self.field.zero(); r.len() - db];
        while r.len() > db {
            let top = r.last().unwrap().clone();
            let pos = r.len() - 1 - db;
            if !top.is_zero() {
                let c = &top * &lead_inv;
                for j in 0..=db {
                    r[pos + j] = &r[pos + j] - &(&c * &rhs.c[j]);
                }
                q[pos] = c;
            }
            r.pop();
        }
        (UPoly::new(self.field, q), UPoly::new(self.field, r))
    }
    pub fn rem(&self, rhs: &UPoly) -> UPoly {
        self.divrem(rhs).1
    }
    /// Division that must be exact; panics on a nonzero remainder.
    pub fn exact_div(&self, rhs: &UPoly) -> UPoly {
        let (q, r) = self.divrem(rhs);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn gcd(&self, rhs: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, at: &Element) -> Element {
        let mut acc = self.field.zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        if self.c.len() <= 1 {
            return UPoly::zero(self.field);
        }
        let p = self.field.p() as u64;
        let out: Vec<Element> = self.c[1..]
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let m = ((i as u64 + 1) % p) as u64;
                &self.field.from_prime(m) * e
            })
            .collect();
        UPoly::new(self.field, out)
    }

    pub fn pow_mod(&self, mut e: u128, m: &UPoly) -> UPoly {
        let mut base = self.rem(m);
        let mut acc = UPoly::constant(self.field.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// `self^p mod m` via the char-p identity `(Σ a_i x^i)^p = Σ a_i^p x^{ip}`.
    pub fn pth_power_mod(&self, m: &UPoly) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.field.p() as usize;
        let mut dil = vec![self.field.zero(); (self.c.len() - 1) * p + 1];
        for (i, a) in self.c.iter().enumerate() {
            dil[i * p] = a.pow(p as u128);
        }
        UPoly::new(self.field, dil).rem(m)
    }

    /// `self^{|F|} mod m` by iterated p-th powering.
    pub fn field_power_mod(&self, m: &UPoly) -> UPoly {
        let mut h = self.rem(m);
        for _ in 0..self.field.degree() {
            h = h.pth_power_mod(m);
        }
        h
    }

    /// Maps the polynomial coefficientwise into a larger tower field.
    pub fn lift(&self, map: &TowerMap) -> UPoly {
        UPoly::new(
            map.dst(),
            self.c.iter().map(|e| map.embed(e).expect("lift: field mismatch")).collect(),
        )
    }

    /// The distinct roots in the coefficient field (no multiplicities).
    pub fn distinct_roots(&self) -> Vec<Element> {
        assert!(!self.is_zero(), "root extraction on the zero polynomial");
        if self.deg() == Some(0) {
            return Vec::new();
        }
        let fld = self.field;
        if fld.size() <= SCAN_BOUND {
            let mut out: Vec<Element> =
                fld.iter().filter(|e| self.eval(e).is_zero()).collect();
            out.sort();
            return out;
        }
        // linear part: gcd(x^{|F|} - x, f)
        let x = UPoly::x(fld);
        let h = x.field_power_mod(self);
        let lin = h.sub(&x).gcd(self);
        let mut out = split_linear(&lin);
        out.sort();
        out
    }

    /// Roots with multiplicities (computed by repeated division).
    pub fn roots(&self) -> Vec<(Element, usize)> {
        let distinct = self.distinct_roots();
        let mut out = Vec::with_capacity(distinct.len());
        for r in distinct {
            let lin = UPoly::x_minus(&r);
            let mut m = 0;
            let mut f = self.clone();
            loop {
                let (q, rem) = f.divrem(&lin);
                if !rem.is_zero() {
                    break;
                }
                m += 1;
                f = q;
            }
            debug_assert!(m >= 1);
            out.push((r, m));
        }
        out
    }

    /// Full factorization into monic irreducibles with multiplicities,
    /// sorted canonically. The leading unit is dropped.
    pub fn factor(&self) -> Vec<(UPoly, usize)> {
        assert!(!self.is_zero(), "factoring the zero polynomial");
        let f = self.monic();
        if f.deg() == Some(0) {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (g, mult) in squarefree_decomposition(&f) {
            for h in factor_squarefree(&g) {
                out.push((h, mult));
            }
        }
        out.sort_by(|a, b| cmp_poly(&a.0, &b.0).then(a.1.cmp(&b.1)));
        debug_assert_eq!(
            {
                let mut prod = UPoly::constant(self.field.one());
                for (g, m) in &out {
                    for _ in 0..*m {
                        prod = prod.mul(g);
                    }
                }
                prod
            },
            f,
            "factorization does not multiply back"
        );
        out
    }
}

fn cmp_poly(a: &UPoly, b: &UPoly) -> std::cmp::Ordering {
    a.c.len()
        .cmp(&b.c.len())
        .then_with(|| a.c.iter().rev().cmp(b.c.iter().rev()))
}

/// Coefficientwise p-th root: `f = g(x^p)` yields `g` with
/// `g_i = f_{ip}^{p^{k-1}}`.
fn pth_root_poly(f: &UPoly) -> UPoly {
    let fld = f.field();
    let p = fld.p() as usize;
    let root_exp = (fld.p() as u128).pow(fld.degree() as u32 - 1);
    let mut out = Vec::new();
    for (i, a) in f.coeffs().iter().enumerate() {
        if i % p == 0 {
            out.push(a.pow(root_exp));
        } else {
            debug_assert!(a.is_zero(), "not a polynomial in x^p");
        }
    }
    UPoly::new(fld, out)
}

/// Char-p squarefree decomposition (Musser with p-th-root descent).
fn squarefree_decomposition(f: &UPoly) -> Vec<(UPoly, usize)> {
    let fld = f.field();
    let p = fld.p() as usize;
    if f.deg() == Some(0) {
        return Vec::new();
    }
    let fp = f.derivative();
    if fp.is_zero() {
        let h = pth_root_poly(f);
        return squarefree_decomposition(&h)
            .into_iter()
            .map(|(g, m)| (g, m * p))
            .collect();
    }
    let mut out = Vec::new();
    let mut c = f.gcd(&fp);
    let mut w = f.exact_div(&c);
    let mut i = 1usize;
    while w.deg() != Some(0) {
        let y = w.gcd(&c);
        let z = w.exact_div(&y);
        if z.deg() != Some(0) {
            out.push((z.monic(), i));
        }
        w = y;
        c = c.exact_div(&w);
        i += 1;
    }
    if c.deg() != Some(0) {
        let h = pth_root_poly(&c);
        for (g, m) in squarefree_decomposition(&h) {
            out.push((g, m * p));
        }
    }
    out
}

/// Factors a squarefree monic polynomial by distinct-degree then
/// equal-degree splitting.
fn factor_squarefree(f: &UPoly) -> Vec<UPoly> {
    let fld = f.field();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = UPoly::x(fld);
    let mut d = 0usize;
    while let Some(deg) = rest.deg() {
        if deg == 0 {
            break;
        }
        d += 1;
        if 2 * d > deg {
            out.push(rest.monic());
            break;
        }
        h = h.field_power_mod(&rest);
        let g = h.sub(&UPoly::x(fld)).gcd(&rest);
        if g.deg().map_or(false, |dg| dg > 0) {
            split_equal_degree(&g, d, &mut out);
            rest = rest.exact_div(&g);
            h = h.rem(&rest);
        }
    }
    out
}

/// Splits a product of distinct irreducibles of the same degree `d`.
fn split_equal_degree(g: &UPoly, d: usize, out: &mut Vec<UPoly>) {
    let fld = g.field();
    let dg = g.deg().unwrap();
    if dg == d {
        out.push(g.monic());
        return;
    }
    // walk deterministic candidate polynomials r = x + c, then c x + c', ...
    let mut counter: u128 = 1;
    loop {
        let r = candidate_poly(fld, counter, dg);
        counter += 1;
        let m = if fld.p() == 2 {
            // trace map over F_{2^(k d)}
            let mut acc = r.rem(g);
            let mut term = r.rem(g);
            let steps = fld.degree() as usize * d;
            for _ in 1..steps {
                term = term.mul(&term).rem(g);
                acc = acc.add(&term);
            }
            acc
        } else {
            // r^{(|F|^d - 1)/2} = (r^{1 + |F| + ... + |F|^{d-1}})^{(|F|-1)/2}
            let mut norm = r.rem(g);
            let mut fr = r.rem(g);
            for _ in 1..d {
                fr = fr.field_power_mod(g);
                norm = norm.mul(&fr).rem(g);
            }
            let e = (fld.size() - 1) / 2;
            norm.pow_mod(e, g).sub(&UPoly::constant(fld.one()))
        };
        let h = m.gcd(g);
        if let Some(dh) = h.deg() {
            if dh > 0 && dh < dg {
                split_equal_degree(&h, d, out);
                split_equal_degree(&g.exact_div(&h), d, out);
                return;
            }
        }
    }
}

/// Splits a product of distinct linear factors into its roots.
fn split_linear(g: &UPoly) -> Vec<Element> {
    match g.deg() {
        None | Some(0) => Vec::new(),
        Some(1) => {
            let r = &(-&g.coeff(0)) * &g.coeff(1).inv();
            vec![r]
        }
        Some(_) => {
            let mut out = Vec::new();
            split_equal_degree(&g.monic(), 1, &mut out);
            out.iter().map(|lin| -&(lin.coeff(0))).collect()
        }
    }
}

/// Deterministic candidate sequence for splitting: the counter's base-|F|
/// digits become coefficients on `1, x, x^2, ...`.
fn candidate_poly(fld: &'static Field, counter: u128, max_deg: usize) -> UPoly {
    let size = fld.size();
    let mut coeffs = Vec::new();
    let mut m = counter;
    while m > 0 && coeffs.len() < max_deg {
        coeffs.push(fld.element(m % size));
        m /= size;
    }
    if coeffs.len() < 2 {
        coeffs.resize(2, fld.zero());
        coeffs[1] = fld.one();
    }
    UPoly::new(fld, coeffs)
}
