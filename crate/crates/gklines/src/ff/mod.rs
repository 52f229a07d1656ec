//! Exact arithmetic in prime-power fields `F_{p^k}`.
//!
//! Fields are interned in a global registry and identified by `(p, k)`;
//! the modulus is chosen deterministically, so the same `(p, k)` always
//! yields the same field across runs, threads and processes. Elements
//! are canonical reduced coefficient vectors over `F_p`, low degree
//! first. Cross-field arithmetic without an explicit [`TowerMap`]
//! embedding is a hard error, never a silent coercion.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use smallvec::SmallVec;

use crate::{Error, Result};

pub mod upoly;

/// Inline capacity covers every field in the default towers up to
/// `F_{3^18}`; larger on-demand residue fields spill to the heap.
pub(crate) type Coeffs = SmallVec<[u8; 20]>;

const MAX_FIELDS: usize = 512;
/// Hard cap: |field| must fit comfortably in u128 exponent arithmetic.
const MAX_BITS: u32 = 120;

static SLOTS: [OnceLock<&'static Field>; MAX_FIELDS] =
    [const { OnceLock::new() }; MAX_FIELDS];
static CREATE: Mutex<Vec<((u8, u16), u32)>> = Mutex::new(Vec::new());

/// An interned finite field `F_{p^k}` with a fixed irreducible modulus.
pub struct Field {
    id: u32,
    p: u8,
    k: u16,
    /// Monic irreducible modulus, low-to-high, length `k + 1`.
    modulus: Vec<u8>,
    /// `x^{k+i} mod modulus` for `i` in `0..k-1`, used during reduction.
    red: Vec<Vec<u8>>,
    /// Multiplicative inverses mod p, indexed 0..p (0 unused).
    pinv: [u8; 8],
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for Field {}
impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{{{}^{}}}", self.p, self.k)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds (or fetches) the field `F_{p^k}`.
///
/// The modulus is the first monic irreducible polynomial of degree `k`
/// in the canonical enumeration: coefficient vectors `(c_0,...,c_{k-1})`
/// read as base-`p` integers, smallest first. Deterministic by
/// construction.
pub fn make_field(p: u64, k: u32) -> Result<&'static Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > 251 || k == 0 {
        return Err(Error::FieldTooLarge { p, k });
    }
    if (k as f64) * (p as f64).log2() > MAX_BITS as f64 {
        return Err(Error::FieldTooLarge { p, k });
    }
    let p8 = p as u8;
    let k16 = k as u16;

    let mut create = CREATE.lock().unwrap();
    if let Some(&(_, id)) = create.iter().find(|&&(pk, _)| pk == (p8, k16)) {
        return Ok(SLOTS[id as usize].get().unwrap());
    }
    let id = create.len() as u32;
    if id as usize >= MAX_FIELDS {
        return Err(Error::FieldTooLarge { p, k });
    }

    let modulus = first_irreducible(p8, k as usize).ok_or(Error::NoIrreducible { p, k })?;

    // reduction rows: x^{k+i} mod f
    let kk = k as usize;
    let mut red: Vec<Vec<u8>> = Vec::with_capacity(kk.saturating_sub(1));
    let mut cur: Vec<u8> = modulus[..kk].iter().map(|&c| neg_p(c, p8)).collect();
    if kk > 1 {
        red.push(cur.clone());
        for _ in 1..kk - 1 {
            // multiply by x and reduce the top coefficient
            let top = cur[kk - 1];
            let mut next = vec![0u8; kk];
            for j in (1..kk).rev() {
                next[j] = cur[j - 1];
            }
            if top != 0 {
                for j in 0..kk {
                    next[j] = addmul_p(next[j], top, red[0][j], p8);
                }
            }
            red.push(next.clone());
            cur = next;
        }
    }

    let mut pinv = [0u8; 8];
    for a in 1..p8 {
        for b in 1..p8 {
            if (a as u16 * b as u16) % p as u16 == 1 {
                pinv[a as usize] = b;
            }
        }
    }

    let field: &'static Field = Box::leak(Box::new(Field {
        id,
        p: p8,
        k: k16,
        modulus,
        red,
        pinv,
    }));
    SLOTS[id as usize].set(field).ok().unwrap();
    create.push(((p8, k16), id));
    Ok(field)
}

#[inline]
fn neg_p(a: u8, p: u8) -> u8 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
fn addmul_p(acc: u8, c: u8, r: u8, p: u8) -> u8 {
    ((acc as u16 + c as u16 * r as u16) % p as u16) as u8
}

// ---------------------------------------------------------------------------
// Raw F_p[x] helpers (bootstrap layer: modulus search, inversion).
// Polynomials are low-to-high coefficient vectors with no trailing zeros.
// ---------------------------------------------------------------------------

fn pf_trim(a: &mut Vec<u8>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn pf_mul(a: &[u8], b: &[u8], p: u8) -> Vec<u8> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai as u32 * bj as u32;
        }
    }
    let mut v: Vec<u8> = out.iter().map(|&c| (c % p as u32) as u8).collect();
    pf_trim(&mut v);
    v
}

/// Remainder of `a` modulo `f` (`f` need not be monic).
fn pf_rem(a: &[u8], f: &[u8], p: u8) -> Vec<u8> {
    assert!(!f.is_empty(), "division by zero polynomial");
    let mut r: Vec<i32> = a.iter().map(|&c| c as i32).collect();
    let df = f.len() - 1;
    let lead = *f.last().unwrap();
    let lead_inv = (1..p).find(|&b| (lead as u16 * b as u16) % p as u16 == 1).unwrap();
    while r.len() > df {
        let top = (r[r.len() - 1].rem_euclid(p as i32)) as u8;
        let pos = r.len() - 1 - df;
        if top != 0 {
            let c = ((top as u16 * lead_inv as u16) % p as u16) as u8;
            for j in 0..=df {
                r[pos + j] -= c as i32 * f[j] as i32;
            }
        }
        r.pop();
    }
    let mut v: Vec<u8> = r.iter().map(|&c| c.rem_euclid(p as i32) as u8).collect();
    pf_trim(&mut v);
    v
}

fn pf_gcd(a: &[u8], b: &[u8], p: u8) -> Vec<u8> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    pf_trim(&mut a);
    pf_trim(&mut b);
    while !b.is_empty() {
        let r = pf_rem(&a, &b, p);
        a = b;
        b = r;
    }
    // normalize monic
    if let Some(&lead) = a.last() {
        if lead != 1 {
            let inv = (1..p).find(|&c| (lead as u16 * c as u16) % p as u16 == 1).unwrap();
            for c in a.iter_mut() {
                *c = ((*c as u16 * inv as u16) % p as u16) as u8;
            }
        }
    }
    a
}

/// `g^p mod f`, exploiting `(Σ a_i x^i)^p = Σ a_i x^{ip}` over `F_p`.
fn pf_pth_power_mod(g: &[u8], f: &[u8], p: u8) -> Vec<u8> {
    if g.is_empty() {
        return Vec::new();
    }
    let mut dil = vec![0u8; (g.len() - 1) * p as usize + 1];
    for (i, &c) in g.iter().enumerate() {
        dil[i * p as usize] = c;
    }
    pf_rem(&dil, f, p)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin irreducibility test for a monic `f` of degree `k` over `F_p`.
fn pf_is_irreducible(f: &[u8], p: u8) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0u8, 1];
    // x^{p^k} mod f must equal x
    let mut h = pf_rem(&x, f, p);
    for _ in 0..k {
        h = pf_pth_power_mod(&h, f, p);
    }
    if h != pf_rem(&x, f, p) {
        return false;
    }
    for r in prime_factors(k as u64) {
        let steps = k / r as usize;
        let mut h = pf_rem(&x, f, p);
        for _ in 0..steps {
            h = pf_pth_power_mod(&h, f, p);
        }
        // gcd(h - x, f) must be 1
        let mut diff: Vec<i32> = h.iter().map(|&c| c as i32).collect();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] -= 1;
        let mut diff: Vec<u8> = diff.iter().map(|&c| c.rem_euclid(p as i32) as u8).collect();
        pf_trim(&mut diff);
        let g = pf_gcd(&diff, f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn first_irreducible(p: u8, k: usize) -> Option<Vec<u8>> {
    let total = (p as u128).checked_pow(k as u32)?;
    let mut n: u128 = 0;
    while n < total {
        let mut f = vec![0u8; k + 1];
        f[k] = 1;
        let mut m = n;
        for c in f.iter_mut().take(k) {
            *c = (m % p as u128) as u8;
            m /= p as u128;
        }
        if pf_is_irreducible(&f, p) {
            return Some(f);
        }
        n += 1;
    }
    None
}

// ---------------------------------------------------------------------------
// Field methods
// ---------------------------------------------------------------------------

impl Field {
    #[inline]
    pub fn id(&self) -> u32 {
        self.id
    }
    #[inline]
    pub fn p(&self) -> u8 {
        self.p
    }
    #[inline]
    pub fn degree(&self) -> u16 {
        self.k
    }
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }
    /// Number of elements, `p^k`.
    pub fn size(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    pub fn zero(&'static self) -> Element {
        Element {
            fid: self.id,
            c: smallvec::smallvec![0; self.k as usize],
        }
    }
    pub fn one(&'static self) -> Element {
        self.from_prime(1)
    }
    /// The residue class of `x`, a generator of the field over `F_p`.
    pub fn gen(&'static self) -> Element {
        if self.k == 1 {
            // x ≡ -c_0 in the prime field
            return self.from_prime(neg_p(self.modulus[0], self.p) as u64);
        }
        let mut e = self.zero();
        e.c[1] = 1;
        e
    }
    /// Constant element from an integer (reduced mod p).
    pub fn from_prime(&'static self, v: u64) -> Element {
        let mut e = self.zero();
        e.c[0] = (v % self.p as u64) as u8;
        e
    }
    pub fn from_coeffs(&'static self, coeffs: &[u8]) -> Element {
        assert!(coeffs.len() <= self.k as usize, "coefficient vector too long");
        let mut e = self.zero();
        for (i, &c) in coeffs.iter().enumerate() {
            e.c[i] = c % self.p;
        }
        e
    }
    /// The element whose coefficient vector encodes `idx` in base p
    /// (canonical enumeration order).
    pub fn element(&'static self, idx: u128) -> Element {
        debug_assert!(idx < self.size());
        let mut e = self.zero();
        let mut m = idx;
        for i in 0..self.k as usize {
            e.c[i] = (m % self.p as u128) as u8;
            m /= self.p as u128;
        }
        e
    }
    /// Iterates every element in canonical order. Guarded by the caller.
    pub fn iter(&'static self) -> impl Iterator<Item = Element> {
        (0..self.size()).map(move |i| self.element(i))
    }

    #[inline]
    fn add_raw(&self, a: &[u8], b: &[u8]) -> Coeffs {
        let p = self.p;
        a.iter()
            .zip(b.iter())
            .map(|(&x, &y)| {
                let s = x + y;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect()
    }
    #[inline]
    fn sub_raw(&self, a: &[u8], b: &[u8]) -> Coeffs {
        let p = self.p;
        a.iter()
            .zip(b.iter())
            .map(|(&x, &y)| {
                let d = x + p - y;
                if d >= p {
                    d - p
                } else {
                    d
                }
            })
            .collect()
    }

    fn mul_raw(&self, a: &[u8], b: &[u8]) -> Coeffs {
        let k = self.k as usize;
        let p = self.p as u32;
        if k == 1 {
            return smallvec::smallvec![((a[0] as u32 * b[0] as u32) % p) as u8];
        }
        let mut buf: SmallVec<[u32; 64]> = smallvec::smallvec![0; 2 * k - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let ai = ai as u32;
            for (j, &bj) in b.iter().enumerate() {
                buf[i + j] += ai * bj as u32;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = buf[i] % p;
            if c != 0 {
                let row = &self.red[i - k];
                for j in 0..k {
                    buf[j] += c * row[j] as u32;
                }
            }
        }
        buf[..k].iter().map(|&c| (c % p) as u8).collect()
    }

    fn inv_raw(&self, a: &[u8]) -> Option<Coeffs> {
        // extended Euclid in F_p[x] against the modulus
        let p = self.p;
        let mut r0: Vec<u8> = self.modulus.clone();
        let mut r1: Vec<u8> = a.to_vec();
        pf_trim(&mut r1);
        if r1.is_empty() {
            return None;
        }
        let mut t0: Vec<u8> = vec![];
        let mut t1: Vec<u8> = vec![1];
        while !r1.is_empty() {
            // r0 = q*r1 + r; track t
            let (q, r) = pf_divrem(&r0, &r1, p);
            let qt1 = pf_mul(&q, &t1, p);
            let tnext = pf_sub(&t0, &qt1, p);
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = tnext;
        }
        // r0 = gcd (a unit since modulus is irreducible and a != 0)
        debug_assert_eq!(r0.len(), 1);
        let inv_lead = self.pinv[r0[0] as usize];
        let mut out: Coeffs = smallvec::smallvec![0; self.k as usize];
        for (i, &c) in t0.iter().enumerate() {
            out[i] = ((c as u16 * inv_lead as u16) % p as u16) as u8;
        }
        Some(out)
    }
}

fn pf_sub(a: &[u8], b: &[u8], p: u8) -> Vec<u8> {
    let n = a.len().max(b.len());
    let mut out = vec![0u8; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    pf_trim(&mut out);
    out
}

fn pf_divrem(a: &[u8], b: &[u8], p: u8) -> (Vec<u8>, Vec<u8>) {
    assert!(!b.is_empty());
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let db = b.len() - 1;
    let lead = *b.last().unwrap();
    let lead_inv = (1..p).find(|&c| (lead as u16 * c as u16) % p as u16 == 1).unwrap();
    let mut r: Vec<i32> = a.iter().map(|&c| c as i32).collect();
    let mut q = vec![0u8; a.len() - db];
    while r.len() > db {
        let top = (r[r.len() - 1].rem_euclid(p as i32)) as u8;
        let pos = r.len() - 1 - db;
        if top != 0 {
            let c = ((top as u16 * lead_inv as u16) % p as u16) as u8;
            q[pos] = c;
            for j in 0..=db {
                r[pos + j] -= c as i32 * b[j] as i32;
            }
        }
        r.pop();
    }
    let mut rem: Vec<u8> = r.iter().map(|&c| c.rem_euclid(p as i32) as u8).collect();
    pf_trim(&mut rem);
    pf_trim(&mut q);
    (q, rem)
}

// ---------------------------------------------------------------------------
// Element
// ---------------------------------------------------------------------------

/// An element of an interned field: a canonical reduced coefficient
/// vector tagged with its field id.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    fid: u32,
    c: Coeffs,
}

impl Element {
    #[inline]
    pub fn field(&self) -> &'static Field {
        SLOTS[self.fid as usize].get().expect("field registry corrupted")
    }
    #[inline]
    pub fn field_id(&self) -> u32 {
        self.fid
    }
    pub fn coeffs(&self) -> &[u8] {
        &self.c
    }
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&c| c == 0)
    }
    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&c| c == 0)
    }

    /// Canonical integer index of this element (its position in the
    /// field's enumeration order).
    pub fn index(&self) -> u128 {
        let p = self.field().p as u128;
        self.c.iter().rev().fold(0u128, |acc, &c| acc * p + c as u128)
    }

    pub fn pow(&self, mut e: u128) -> Element {
        let f = self.field();
        let mut base = self.clone();
        let mut acc = f.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Element {
        self.checked_inv().expect("inverse of zero")
    }
    pub fn checked_inv(&self) -> Option<Element> {
        let f = self.field();
        f.inv_raw(&self.c).map(|c| Element { fid: self.fid, c })
    }

    /// `e ↦ e^q` for `q` a power of the characteristic.
    pub fn frobenius(&self, q: u64) -> Result<Element> {
        let p = self.field().p as u64;
        let mut m = q;
        while m > 1 {
            if m % p != 0 {
                return Err(Error::NotPPower { q, p });
            }
            m /= p;
        }
        if q == 0 {
            return Err(Error::NotPPower { q, p });
        }
        Ok(self.pow(q as u128))
    }
}

impl fmt::Display for Element {
    /// Canonical text form: the coefficient list low-to-high, e.g. `[1,0,1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}@{:?}", self.field())
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Element {
    /// Field id first, then lexicographic on the coefficient list
    /// (low degree first) — the same order as the canonical text form.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.fid
            .cmp(&other.fid)
            .then_with(|| self.c.iter().cmp(other.c.iter()))
    }
}

macro_rules! check_fields {
    ($a:expr, $b:expr) => {
        assert_eq!(
            $a.fid, $b.fid,
            "cross-field arithmetic without an explicit embedding"
        );
    };
}

impl std::ops::Add for &Element {
    type Output = Element;
    #[inline]
    fn add(self, rhs: &Element) -> Element {
        check_fields!(self, rhs);
        Element {
            fid: self.fid,
            c: self.field().add_raw(&self.c, &rhs.c),
        }
    }
}
impl std::ops::Sub for &Element {
    type Output = Element;
    #[inline]
    fn sub(self, rhs: &Element) -> Element {
        check_fields!(self, rhs);
        Element {
            fid: self.fid,
            c: self.field().sub_raw(&self.c, &rhs.c),
        }
    }
}
impl std::ops::Mul for &Element {
    type Output = Element;
    #[inline]
    fn mul(self, rhs: &Element) -> Element {
        check_fields!(self, rhs);
        Element {
            fid: self.fid,
            c: self.field().mul_raw(&self.c, &rhs.c),
        }
    }
}
impl std::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        let f = self.field();
        Element {
            fid: self.fid,
            c: self.c.iter().map(|&c| neg_p(c, f.p)).collect(),
        }
    }
}
impl std::ops::Div for &Element {
    type Output = Element;
    fn div(self, rhs: &Element) -> Element {
        self * &rhs.inv()
    }
}

// ---------------------------------------------------------------------------
// Tower maps
// ---------------------------------------------------------------------------

/// A field homomorphism `F_{p^a} → F_{p^b}` (with `a | b`), realized by
/// the image of the source generator.
pub struct TowerMap {
    src: u32,
    dst: u32,
    /// Images of `x^i` for `i` in `0..a`.
    pows: Vec<Element>,
}

impl TowerMap {
    pub fn src(&self) -> &'static Field {
        SLOTS[self.src as usize].get().unwrap()
    }
    pub fn dst(&self) -> &'static Field {
        SLOTS[self.dst as usize].get().unwrap()
    }
    pub fn generator_image(&self) -> &Element {
        &self.pows[1.min(self.pows.len() - 1)]
    }

    fn from_gen_image(src: &'static Field, dst: &'static Field, img: Element) -> TowerMap {
        let a = src.k as usize;
        let mut pows = Vec::with_capacity(a);
        let mut cur = dst.one();
        for _ in 0..a {
            pows.push(cur.clone());
            cur = &cur * &img;
        }
        TowerMap {
            src: src.id,
            dst: dst.id,
            pows,
        }
    }

    pub fn identity(f: &'static Field) -> TowerMap {
        TowerMap::from_gen_image(f, f, f.gen())
    }

    /// Composition `other ∘ self` (apply `self` first).
    fn then(&self, other: &TowerMap) -> TowerMap {
        assert_eq!(self.dst, other.src);
        let img = other.embed(&self.pows[1.min(self.pows.len() - 1)]).unwrap();
        let src = self.src();
        let dst = other.dst();
        if src.k == 1 {
            // prime field: the generator is a constant; pows = [1]
            return TowerMap::from_gen_image(src, dst, img);
        }
        TowerMap::from_gen_image(src, dst, img)
    }

    pub fn embed(&self, e: &Element) -> Result<Element> {
        if e.fid != self.src {
            return Err(Error::FieldMismatch);
        }
        let dst = self.dst();
        let mut acc = dst.zero();
        for (i, pw) in self.pows.iter().enumerate() {
            let c = e.c[i];
            if c == 0 {
                continue;
            }
            // acc += c * pw, with c a prime-field scalar
            let p = dst.p;
            for (j, a) in acc.c.iter_mut().enumerate() {
                *a = addmul_p(*a, c, pw.c[j], p);
            }
        }
        Ok(acc)
    }

    /// Inverse image under the embedding, if `e` lies in the subfield.
    pub fn preimage(&self, e: &Element) -> Option<Element> {
        if e.fid != self.dst {
            return None;
        }
        let src = self.src();
        let dst = self.dst();
        let p = dst.p as i32;
        let rows = dst.k as usize;
        let cols = src.k as usize;
        // Gaussian elimination on [M | e] over F_p
        let mut m = vec![vec![0i32; cols + 1]; rows];
        for (j, pw) in self.pows.iter().enumerate() {
            for i in 0..rows {
                m[i][j] = pw.c[i] as i32;
            }
        }
        for i in 0..rows {
            m[i][cols] = e.c[i] as i32;
        }
        let mut pivot_col_of_row = Vec::new();
        let mut r = 0;
        for col in 0..cols {
            let Some(pr) = (r..rows).find(|&i| m[i][col] % p != 0) else {
                pivot_col_of_row.push(None);
                continue;
            };
            m.swap(r, pr);
            let inv = dst.pinv[(m[r][col].rem_euclid(p)) as usize] as i32;
            for x in m[r].iter_mut() {
                *x = (*x * inv).rem_euclid(p);
            }
            for i in 0..rows {
                if i != r && m[i][col] % p != 0 {
                    let f = m[i][col].rem_euclid(p);
                    for j in 0..=cols {
                        m[i][j] = (m[i][j] - f * m[r][j]).rem_euclid(p);
                    }
                }
            }
            pivot_col_of_row.push(Some(r));
            r += 1;
        }
        // consistency: rows beyond rank must have zero rhs
        for i in r..rows {
            if m[i][cols].rem_euclid(p) != 0 {
                return None;
            }
        }
        let mut out = src.zero();
        let mut row = 0;
        for col in 0..cols {
            if pivot_col_of_row[col] == Some(row) {
                out.c[col] = m[row][cols].rem_euclid(p) as u8;
                row += 1;
            }
        }
        // verify (free columns would make the solution ambiguous, which
        // cannot happen for an injective map, but check anyway)
        match self.embed(&out) {
            Ok(img) if img == *e => Some(out),
            _ => None,
        }
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.preimage(e).is_some()
    }
}

/// A lazily grown, divisibility-closed collection of fields of a fixed
/// characteristic with compatible canonical embeddings.
pub struct Tower {
    p: u8,
    by_degree: BTreeMap<u16, &'static Field>,
    maps: BTreeMap<(u16, u16), TowerMap>,
}

impl Tower {
    pub fn new(p: u64) -> Result<Tower> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Tower {
            p: p as u8,
            by_degree: BTreeMap::new(),
            maps: BTreeMap::new(),
        })
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn degrees(&self) -> Vec<u16> {
        self.by_degree.keys().copied().collect()
    }

    pub fn get(&self, k: u16) -> Option<&'static Field> {
        self.by_degree.get(&k).copied()
    }

    /// Fetches `F_{p^k}`, creating it (and embedding maps from every
    /// present divisor degree) on first use.
    pub fn field(&mut self, k: u16) -> Result<&'static Field> {
        if let Some(f) = self.by_degree.get(&k) {
            return Ok(f);
        }
        let fld = make_field(self.p as u64, k as u32)?;
        // divisor degrees already present, largest first
        let mut divs: Vec<u16> = self
            .by_degree
            .keys()
            .copied()
            .filter(|&d| d < k && k % d == 0)
            .collect();
        divs.sort_unstable_by(|a, b| b.cmp(a));
        self.by_degree.insert(k, fld);
        for (pos, &d) in divs.iter().enumerate() {
            // route through the largest already-mapped intermediate if any
            let inter = divs[..pos].iter().copied().find(|&m| m % d == 0);
            let map = match inter {
                Some(m) => {
                    let lower = self.maps.get(&(d, m)).expect("tower map invariant");
                    let upper = self.maps.get(&(m, k)).expect("tower map invariant");
                    lower.then(upper)
                }
                None => {
                    let src = self.by_degree[&d];
                    let img = canonical_root_of_modulus(src, fld)?;
                    TowerMap::from_gen_image(src, fld, img)
                }
            };
            self.maps.insert((d, k), map);
        }
        Ok(fld)
    }

    pub fn map(&self, src_deg: u16, dst_deg: u16) -> Option<&TowerMap> {
        self.maps.get(&(src_deg, dst_deg))
    }

    /// Embeds `e` into the tower field of degree `dst_deg`.
    pub fn embed_to(&self, e: &Element, dst_deg: u16) -> Result<Element> {
        let sk = e.field().k;
        if sk == dst_deg {
            return Ok(e.clone());
        }
        let map = self
            .maps
            .get(&(sk, dst_deg))
            .ok_or(Error::NoTowerPath { src: sk, dst: dst_deg })?;
        map.embed(e)
    }
}

/// Smallest root (canonical element order) of `src`'s modulus inside `dst`.
fn canonical_root_of_modulus(src: &'static Field, dst: &'static Field) -> Result<Element> {
    if src.k == 1 {
        // prime field: generator is the constant -c0
        return Ok(dst.from_prime(neg_p(src.modulus[0], src.p) as u64));
    }
    let fpoly: Vec<Element> = src.modulus.iter().map(|&c| dst.from_prime(c as u64)).collect();
    let poly = upoly::UPoly::new(dst, fpoly);
    let mut roots: Vec<Element> = poly.distinct_roots().into_iter().collect();
    roots.sort();
    roots.into_iter().next().ok_or(Error::NoTowerPath {
        src: src.k,
        dst: dst.k,
    })
}

// ---------------------------------------------------------------------------
// Special solvers
// ---------------------------------------------------------------------------

/// All `x` in the element's field with `x^q + x = c`; `q` must be a
/// power of the characteristic. The solution set (possibly empty) is a
/// coset of the kernel of the F_p-linear map `x ↦ x^q + x`.
pub fn solve_additive(q: u64, c: &Element) -> Result<Vec<Element>> {
    let fld = c.field();
    let p = fld.p as u64;
    {
        let mut m = q;
        if m == 0 {
            return Err(Error::NotPPower { q, p });
        }
        while m > 1 {
            if m % p != 0 {
                return Err(Error::NotPPower { q, p });
            }
            m /= p;
        }
    }
    let k = fld.k as usize;
    let pi = fld.p as i32;
    // columns: basis images (x^i)^q + x^i
    let mut cols = Vec::with_capacity(k);
    for i in 0..k {
        let mut b = fld.zero();
        b.c[i] = 1;
        let img = &b.pow(q as u128) + &b;
        cols.push(img);
    }
    let mut m = vec![vec![0i32; k + 1]; k];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..k {
            m[i][j] = col.c[i] as i32;
        }
    }
    for i in 0..k {
        m[i][k] = c.c[i] as i32;
    }
    // RREF
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(pr) = (r..k).find(|&i| m[i][col] % pi != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = fld.pinv[m[r][col].rem_euclid(pi) as usize] as i32;
        for x in m[r].iter_mut() {
            *x = (*x * inv).rem_euclid(pi);
        }
        for i in 0..k {
            if i != r && m[i][col] % pi != 0 {
                let f = m[i][col].rem_euclid(pi);
                for j in 0..=k {
                    m[i][j] = (m[i][j] - f * m[r][j]).rem_euclid(pi);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    for i in r..k {
        if m[i][k].rem_euclid(pi) != 0 {
            return Ok(Vec::new()); // no solution
        }
    }
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    let npi = (fld.p as u128).pow(free.len() as u32);
    for idx in 0..npi {
        let mut x = fld.zero();
        let mut v = idx;
        for &fc in &free {
            x.c[fc] = (v % fld.p as u128) as u8;
            v /= fld.p as u128;
        }
        for (row, &pc) in pivots.iter().enumerate() {
            let mut val = m[row][k];
            for &fc in &free {
                val -= m[row][fc] * x.c[fc] as i32;
            }
            x.c[pc] = val.rem_euclid(pi) as u8;
        }
        // verified by substitution
        let lhs = &x.pow(q as u128) + &x;
        assert_eq!(&lhs, c, "additive solver produced a non-solution");
        out.push(x);
    }
    out.sort();
    Ok(out)
}

/// All `x` with `x^n = 1`; there are exactly `gcd(n, |F| - 1)` of them.
pub fn roots_of_unity(n: u64, fld: &'static Field) -> Vec<Element> {
    fn gcd(a: u128, b: u128) -> u128 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let order = fld.size() - 1;
    let n1 = gcd(n as u128, order);
    if n1 == 1 {
        return vec![fld.one()];
    }
    let expo = order / n1;
    let prime_parts = prime_factors(n1 as u64);
    // find an element of exact order n1 by powering candidates
    for idx in 1..fld.size() {
        let t = fld.element(idx).pow(expo);
        if t.is_zero() || t.is_one() {
            continue;
        }
        let full = t.pow(n1).is_one();
        let exact = full
            && prime_parts
                .iter()
                .all(|&r| !t.pow(n1 / r as u128).is_one());
        if exact {
            let mut out = Vec::with_capacity(n1 as usize);
            let mut cur = fld.one();
            for _ in 0..n1 {
                out.push(cur.clone());
                cur = &cur * &t;
            }
            out.sort();
            return out;
        }
    }
    unreachable!("multiplicative group of a finite field is cyclic")
}

/// `e ↦ e^q` with the precondition that `q` is a power of char(F).
pub fn frobenius(e: &Element, q: u64) -> Result<Element> {
    e.frobenius(q)
}

#[cfg(test)]
mod tests;
