//! Points, lines and planes of `P^3` (and `P^2` for the plane model)
//! over tower fields: canonical forms, incidence, pencils and
//! exhaustive enumeration.
//!
//! Lines carry normalized Plücker coordinates (the order-free canonical
//! key used for deduplication and report ordering) together with a
//! cached spanning pair of points for computation. Plane-model objects
//! reuse the same types with 3 coordinates instead of 4.

use crate::ff::{Element, Field, TowerMap};
use crate::{Error, Result};

/// Enumeration guard: no exhaustive sweep over fields bigger than this.
pub const ENUM_CAP: u128 = 81;

// ---------------------------------------------------------------------------
// Small exact linear algebra over a field
// ---------------------------------------------------------------------------

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref(m: &mut Vec<Vec<Element>>) -> Vec<usize> {
    if m.is_empty() {
        return Vec::new();
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][col].inv();
        for j in 0..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..cols {
                    m[i][j] = &m[i][j] - &(&f * &m[r][j]);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// A canonical basis of the right nullspace `{x : M x = 0}`.
pub(crate) fn nullspace(mat: &[Vec<Element>], fld: &'static Field) -> Vec<Vec<Element>> {
    if mat.is_empty() {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut m = mat.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![fld.zero(); cols];
        v[fc] = fld.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[row][fc];
        }
        basis.push(v);
    }
    basis
}

pub(crate) fn matrix_rank(mat: &[Vec<Element>]) -> usize {
    let mut m = mat.to_vec();
    rref(&mut m).len()
}

fn dot(a: &[Element], b: &[Element]) -> Element {
    let mut acc = a[0].field().zero();
    for (x, y) in a.iter().zip(b.iter()) {
        acc = &acc + &(x * y);
    }
    acc
}

// ---------------------------------------------------------------------------
// Points and planes
// ---------------------------------------------------------------------------

/// A projective point, canonically normalized: the first nonzero
/// coordinate equals 1. Equality is exact coordinate equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    c: Vec<Element>,
}

/// A hyperplane of `P^3` (or a line of `P^2`), as a canonically
/// normalized dual coordinate vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plane {
    c: Vec<Element>,
}

fn normalize(mut c: Vec<Element>) -> Result<Vec<Element>> {
    let Some(first) = c.iter().position(|e| !e.is_zero()) else {
        return Err(Error::Degenerate("all-zero projective vector".into()));
    };
    if !c[first].is_one() {
        let inv = c[first].inv();
        for e in c.iter_mut() {
            *e = &*e * &inv;
        }
    }
    Ok(c)
}

impl ProjPoint {
    pub fn new(coords: Vec<Element>) -> Result<ProjPoint> {
        debug_assert!(coords.iter().all(|e| e.field_id() == coords[0].field_id()));
        Ok(ProjPoint {
            c: normalize(coords)?,
        })
    }
    /// Convenience constructor from small integer coordinates.
    pub fn from_ints(fld: &'static Field, coords: &[i64]) -> ProjPoint {
        let p = fld.p() as i64;
        ProjPoint::new(
            coords
                .iter()
                .map(|&v| fld.from_prime(v.rem_euclid(p) as u64))
                .collect(),
        )
        .expect("nonzero integer coordinates")
    }
    pub fn coords(&self) -> &[Element] {
        &self.c
    }
    pub fn dim(&self) -> usize {
        self.c.len() - 1
    }
    pub fn field(&self) -> &'static Field {
        self.c[0].field()
    }
    pub fn embed(&self, map: &TowerMap) -> ProjPoint {
        ProjPoint {
            c: self.c.iter().map(|e| map.embed(e).expect("embed point")).collect(),
        }
    }
    pub fn is_rational_over(&self, map: &TowerMap) -> bool {
        self.c.iter().all(|e| map.contains(e))
    }
    /// Coordinatewise canonical text, used in reports.
    pub fn text(&self) -> Vec<String> {
        self.c.iter().map(|e| e.to_string()).collect()
    }
}

impl std::fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

impl Plane {
    pub fn new(coords: Vec<Element>) -> Result<Plane> {
        Ok(Plane {
            c: normalize(coords)?,
        })
    }
    pub fn from_ints(fld: &'static Field, coords: &[i64]) -> Plane {
        let p = fld.p() as i64;
        Plane::new(
            coords
                .iter()
                .map(|&v| fld.from_prime(v.rem_euclid(p) as u64))
                .collect(),
        )
        .expect("nonzero integer coordinates")
    }
    pub fn coords(&self) -> &[Element] {
        &self.c
    }
    pub fn field(&self) -> &'static Field {
        self.c[0].field()
    }
    pub fn contains(&self, p: &ProjPoint) -> bool {
        dot(&self.c, &p.c).is_zero()
    }
    pub fn contains_line(&self, l: &Line) -> bool {
        self.contains(&l.span.0) && self.contains(&l.span.1)
    }
    pub fn embed(&self, map: &TowerMap) -> Plane {
        Plane {
            c: self.c.iter().map(|e| map.embed(e).expect("embed plane")).collect(),
        }
    }
    pub fn is_rational_over(&self, map: &TowerMap) -> bool {
        self.c.iter().all(|e| map.contains(e))
    }
    pub fn text(&self) -> Vec<String> {
        self.c.iter().map(|e| e.to_string()).collect()
    }
}

impl std::fmt::Debug for Plane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

// ---------------------------------------------------------------------------
// Lines of P^3
// ---------------------------------------------------------------------------

/// A line of `P^3`: normalized Plücker six-tuple in the order
/// `(p01, p02, p03, p12, p13, p23)`, plus a cached spanning pair.
#[derive(Clone)]
pub struct Line {
    plucker: [Element; 6],
    span: (ProjPoint, ProjPoint),
}

impl PartialEq for Line {
    fn eq(&self, other: &Self) -> bool {
        self.plucker == other.plucker
    }
}
impl Eq for Line {}
impl std::hash::Hash for Line {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.plucker.hash(state);
    }
}
impl PartialOrd for Line {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Line {
    /// Canonical global order: lexicographic on the normalized Plücker
    /// tuple (which equals lexicographic on its canonical text form).
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.plucker.cmp(&other.plucker)
    }
}

impl std::fmt::Debug for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.plucker.iter().map(|e| e.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl Line {
    /// The line through two distinct points.
    pub fn through(p: &ProjPoint, q: &ProjPoint) -> Result<Line> {
        if p == q {
            return Err(Error::Degenerate("line through equal points".into()));
        }
        assert_eq!(p.field().id(), q.field().id(), "mixed-field line span");
        assert_eq!(p.c.len(), 4, "lines live in P^3");
        let mut pl = Vec::with_capacity(6);
        for (i, j) in PAIRS {
            pl.push(&(&p.c[i] * &q.c[j]) - &(&p.c[j] * &q.c[i]));
        }
        let pl = normalize(pl)?;
        let plucker: [Element; 6] = pl.try_into().ok().unwrap();
        let line = Line {
            plucker,
            span: (p.clone(), q.clone()),
        };
        debug_assert!(line.plucker_relation_holds());
        Ok(line)
    }

    /// The quadratic Plücker relation `p01 p23 - p02 p13 + p03 p12 = 0`.
    pub fn plucker_relation_holds(&self) -> bool {
        let p = &self.plucker;
        let t = &(&(&p[0] * &p[5]) - &(&p[1] * &p[4])) + &(&p[2] * &p[3]);
        t.is_zero()
    }

    pub fn plucker(&self) -> &[Element; 6] {
        &self.plucker
    }
    pub fn span(&self) -> (&ProjPoint, &ProjPoint) {
        (&self.span.0, &self.span.1)
    }
    pub fn field(&self) -> &'static Field {
        self.plucker[0].field()
    }
    pub fn text(&self) -> Vec<String> {
        self.plucker.iter().map(|e| e.to_string()).collect()
    }

    pub fn contains(&self, x: &ProjPoint) -> bool {
        let m = vec![
            self.span.0.c.clone(),
            self.span.1.c.clone(),
            x.c.clone(),
        ];
        matrix_rank(&m) == 2
    }

    pub fn embed(&self, map: &TowerMap) -> Line {
        Line {
            plucker: self
                .plucker
                .iter()
                .map(|e| map.embed(e).expect("embed line"))
                .collect::<Vec<_>>()
                .try_into()
                .ok()
                .unwrap(),
            span: (self.span.0.embed(map), self.span.1.embed(map)),
        }
    }

    /// A line is rational over a subfield iff its canonical Plücker
    /// form has all coordinates in the image of the embedding.
    pub fn is_rational_over(&self, map: &TowerMap) -> bool {
        self.plucker.iter().all(|e| map.contains(e))
    }

    /// Two independent planes through the line, in canonical form: the
    /// reduced basis of the dual nullspace of the spanning pair.
    pub fn dual_basis(&self) -> (Plane, Plane) {
        let fld = self.field();
        let m = vec![self.span.0.c.clone(), self.span.1.c.clone()];
        let basis = nullspace(&m, fld);
        assert_eq!(basis.len(), 2, "line dual space must have dimension 2");
        let a = Plane::new(basis[0].clone()).unwrap();
        let b = Plane::new(basis[1].clone()).unwrap();
        (a, b)
    }

    /// All planes through the line, one per point of `P^1` over the
    /// line's own field: exactly `|field| + 1` of them.
    pub fn pencil(&self, field: &'static Field) -> Vec<Plane> {
        assert_eq!(
            field.id(),
            self.field().id(),
            "embed the line into the target field before taking its pencil"
        );
        let (a, b) = self.dual_basis();
        let mut out = Vec::with_capacity(field.size() as usize + 1);
        // (1 : t) members, then (0 : 1)
        for t in field.iter() {
            let coords: Vec<Element> = a
                .c
                .iter()
                .zip(b.c.iter())
                .map(|(x, y)| x + &(&t * y))
                .collect();
            out.push(Plane::new(coords).unwrap());
        }
        out.push(b);
        debug_assert!(out.iter().all(|h| h.contains_line(self)));
        out
    }

    /// The unique pencil member through a point off the line.
    pub fn plane_through(&self, x: &ProjPoint) -> Result<Plane> {
        span_line_point(self, x)
    }
}

/// The intersection of two distinct planes.
pub fn meet_plane_plane(h1: &Plane, h2: &Plane) -> Result<Line> {
    if h1 == h2 {
        return Err(Error::Degenerate("meet of equal planes".into()));
    }
    let fld = h1.field();
    let m = vec![h1.c.clone(), h2.c.clone()];
    let basis = nullspace(&m, fld);
    assert_eq!(basis.len(), 2);
    let p = ProjPoint::new(basis[0].clone())?;
    let q = ProjPoint::new(basis[1].clone())?;
    Line::through(&p, &q)
}

/// The plane spanned by a line and a point not on it.
pub fn span_line_point(l: &Line, x: &ProjPoint) -> Result<Plane> {
    if l.contains(x) {
        return Err(Error::Degenerate(
            "span of a line and an incident point".into(),
        ));
    }
    let fld = l.field();
    let m = vec![l.span.0.c.clone(), l.span.1.c.clone(), x.c.clone()];
    let basis = nullspace(&m, fld);
    assert_eq!(basis.len(), 1);
    Plane::new(basis[0].clone())
}

/// Where a line meets a plane.
pub enum LinePlaneMeet {
    Contained,
    Point(ProjPoint),
}

pub fn line_meet_plane(l: &Line, h: &Plane) -> LinePlaneMeet {
    let a = dot(&h.c, &l.span.0.c);
    let b = dot(&h.c, &l.span.1.c);
    if a.is_zero() && b.is_zero() {
        return LinePlaneMeet::Contained;
    }
    // point = b·span0 - a·span1
    let coords: Vec<Element> = l
        .span
        .0
        .c
        .iter()
        .zip(l.span.1.c.iter())
        .map(|(x, y)| &(&b * x) - &(&a * y))
        .collect();
    LinePlaneMeet::Point(ProjPoint::new(coords).expect("meet point"))
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

fn guard(field: &'static Field) -> Result<()> {
    if field.size() > ENUM_CAP {
        return Err(Error::EnumerationGuard(format!(
            "field of size {} exceeds the enumeration cap {}",
            field.size(),
            ENUM_CAP
        )));
    }
    Ok(())
}

/// Every point of `P^dim(field)`, canonically sorted, no duplicates.
pub fn enumerate_points(field: &'static Field, dim: usize) -> Result<Vec<ProjPoint>> {
    guard(field)?;
    let n = dim + 1;
    let s = field.size();
    let mut out = Vec::new();
    for pivot in 0..n {
        let tail = n - pivot - 1;
        let mut idx = vec![0u128; tail];
        loop {
            let mut coords = vec![field.zero(); n];
            coords[pivot] = field.one();
            for (i, &ix) in idx.iter().enumerate() {
                coords[pivot + 1 + i] = field.element(ix);
            }
            out.push(ProjPoint { c: coords });
            // increment the mixed-radix counter
            let mut carry = true;
            for d in idx.iter_mut().rev() {
                *d += 1;
                if *d == s {
                    *d = 0;
                } else {
                    carry = false;
                    break;
                }
            }
            if carry || tail == 0 {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Every line of `P^3(field)`, deduplicated via the canonical Plücker
/// key and sorted by it.
pub fn enumerate_lines(field: &'static Field) -> Result<Vec<Line>> {
    guard(field)?;
    let pts = enumerate_points(field, 3)?;
    let mut seen: std::collections::HashMap<[Element; 6], Line> =
        std::collections::HashMap::new();
    for (i, p) in pts.iter().enumerate() {
        for q in pts.iter().skip(i + 1) {
            let line = Line::through(p, q).unwrap();
            seen.entry(line.plucker.clone()).or_insert(line);
        }
    }
    let mut out: Vec<Line> = seen.into_values().collect();
    out.sort();
    let s = field.size();
    let expect = (s * s + 1) * (s * s + s + 1);
    assert_eq!(out.len() as u128, expect, "line count formula violated");
    Ok(out)
}

/// Every plane of `P^3(field)` (dual points), canonically sorted.
pub fn enumerate_planes(field: &'static Field) -> Result<Vec<Plane>> {
    Ok(enumerate_points(field, 3)?
        .into_iter()
        .map(|p| Plane { c: p.c })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn f4() -> &'static Field {
        make_field(2, 2).unwrap()
    }

    #[test]
    fn named_lines_and_planes() {
        let fld = f4();
        let p_inf = ProjPoint::from_ints(fld, &[1, 0, 0, 0]);
        let r = ProjPoint::from_ints(fld, &[0, 1, 0, 0]);
        let rp = ProjPoint::from_ints(fld, &[0, 0, 1, 0]);
        // ℓ∞ = line(P∞, R) is Z = W = 0
        let l_inf = Line::through(&p_inf, &r).unwrap();
        let z0 = Plane::from_ints(fld, &[0, 0, 1, 0]);
        let w0 = Plane::from_ints(fld, &[0, 0, 0, 1]);
        assert!(z0.contains_line(&l_inf) && w0.contains_line(&l_inf));
        // meet of {Z=0} and {W=0} is ℓ∞ again
        let back = meet_plane_plane(&z0, &w0).unwrap();
        assert_eq!(back, l_inf);
        // symmetric in the arguments
        assert_eq!(Line::through(&r, &p_inf).unwrap(), l_inf);
        // ℓ0 = line(R', R) is X = W = 0
        let l0 = Line::through(&rp, &r).unwrap();
        let x0 = Plane::from_ints(fld, &[1, 0, 0, 0]);
        assert!(x0.contains_line(&l0) && w0.contains_line(&l0));
        // line_meet_plane(ℓ0, {Z=0}) = R
        match line_meet_plane(&l0, &z0) {
            LinePlaneMeet::Point(p) => assert_eq!(p, r),
            LinePlaneMeet::Contained => panic!("ℓ0 not contained in Z=0"),
        }
        // the unique plane on ℓ∞ through R' is {W=0}
        let sp = span_line_point(&l_inf, &rp).unwrap();
        assert_eq!(sp, w0);
        assert!(span_line_point(&l_inf, &p_inf).is_err());
    }

    #[test]
    fn pencil_has_size_plus_one_members_each_containing_the_line() {
        let fld = f4();
        let p_inf = ProjPoint::from_ints(fld, &[1, 0, 0, 0]);
        let r = ProjPoint::from_ints(fld, &[0, 1, 0, 0]);
        let l_inf = Line::through(&p_inf, &r).unwrap();
        let pencil = l_inf.pencil(fld);
        assert_eq!(pencil.len(), 5);
        for h in &pencil {
            assert!(h.contains_line(&l_inf));
        }
        // all distinct
        let set: std::collections::HashSet<_> =
            pencil.iter().map(|h| h.coords().to_vec()).collect();
        assert_eq!(set.len(), 5);
        // over F_64 the same line has 65 members
        let mut tower = crate::ff::Tower::new(2).unwrap();
        tower.field(2).unwrap();
        let f64f = tower.field(6).unwrap();
        let map = tower.map(2, 6).unwrap();
        let lifted = l_inf.embed(map);
        assert_eq!(lifted.pencil(f64f).len(), 65);
    }

    #[test]
    fn enumeration_matches_the_classical_formulas() {
        let fld = f4();
        let pts = enumerate_points(fld, 3).unwrap();
        assert_eq!(pts.len(), 85);
        let lines = enumerate_lines(fld).unwrap();
        assert_eq!(lines.len(), 357);
        // every line has exactly s + 1 points on it
        for line in lines.iter().take(25) {
            let on = pts.iter().filter(|p| line.contains(p)).count();
            assert_eq!(on, 5);
        }
        // a pencil partitions the complement of the line into s+1 sets of s²
        let line = &lines[0];
        for h in line.pencil(fld) {
            let cnt = pts
                .iter()
                .filter(|p| h.contains(p) && !line.contains(p))
                .count();
            assert_eq!(cnt, 16);
        }
        // guard trips on big fields
        let f128 = make_field(2, 7).unwrap();
        assert!(enumerate_points(f128, 3).is_err());
    }

    #[test]
    fn rationality_of_canonical_forms() {
        let mut tower = crate::ff::Tower::new(2).unwrap();
        tower.field(2).unwrap();
        let f64f = tower.field(6).unwrap();
        let map = tower.map(2, 6).unwrap();
        // ℓ∞ is rational all the way down
        let p_inf = ProjPoint::from_ints(f64f, &[1, 0, 0, 0]);
        let r = ProjPoint::from_ints(f64f, &[0, 1, 0, 0]);
        let l_inf = Line::through(&p_inf, &r).unwrap();
        assert!(l_inf.is_rational_over(map));
        // a line through a genuinely new F_64 point is not F_4-rational
        let g = f64f.gen();
        let p = ProjPoint::new(vec![f64f.one(), g.clone(), f64f.zero(), f64f.one()]).unwrap();
        let line = Line::through(&p, &r).unwrap();
        assert!(!line.is_rational_over(map));
        // swapping the spanning pair leaves rationality alone
        let line2 = Line::through(&r, &p).unwrap();
        assert_eq!(line.is_rational_over(map), line2.is_rational_over(map));
    }
}
