//! Arithmetic in the bigraded cohomology ring of B(Z/l)^n with mod-l
//! coefficients.
//!
//! As a module over F_l[tau] the ring is free on the monomials in the
//! polynomial generators y_1, .., y_n (bidegree (2,1)) and the exterior
//! generators x_1, .., x_n (bidegree (1,1)); tau itself sits in bidegree
//! (0,1).  Multiplication is graded-commutative in the first degree, so
//!
//! ```text
//! x_i * x_j = -x_j * x_i          (i != j)
//! x_i^2     = tau * y_i           (l = 2)
//! x_i^2     = 0                   (l odd)
//! ```
//!
//! with tau and the y_i central.  The class usually written rho is zero
//! throughout (the base is assumed to contain a square root of -1); the
//! [`RingContext::rho_is_zero`] accessor records that assumption so callers
//! can assert on it.
//!
//! Elements are stored sparsely as maps from monomials to nonzero residues
//! mod l.  Monomials carry a total order (degree, weight, tau exponent,
//! y-exponents with lower-index generators dominating, ascending exterior
//! index sequence), so equality, iteration, and printing are canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

// ---------------------------------------------------------------------------
// errors
// ---------------------------------------------------------------------------

/// Everything that can go wrong in the ring layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingError {
    /// The requested coefficient characteristic is not prime.
    NotPrime(u32),
    /// A ring needs at least one generator pair.
    InvalidRank(u32),
    /// A generator index fell outside 1..=rank.
    IndexOutOfRange { index: u64, rank: u32 },
    /// Two elements from different rings were combined.
    ContextMismatch { left: RingContext, right: RingContext },
    /// The zero element has no bidegree.
    DegreeOfZero,
    /// An element mixed two bidegrees where a single one was required.
    Inhomogeneous { first: Bidegree, second: Bidegree },
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::NotPrime(p) => write!(f, "{p} is not a prime number"),
            RingError::InvalidRank(n) => write!(f, "rank must be at least 1, got {n}"),
            RingError::IndexOutOfRange { index, rank } => {
                write!(f, "generator index {index} out of range 1..={rank}")
            }
            RingError::ContextMismatch { left, right } => write!(
                f,
                "mixed ring contexts: (l = {}, n = {}) vs (l = {}, n = {})",
                left.prime, left.rank, right.prime, right.rank
            ),
            RingError::DegreeOfZero => write!(f, "the zero element has no bidegree"),
            RingError::Inhomogeneous { first, second } => {
                write!(f, "element is not homogeneous: mixes {first} and {second}")
            }
        }
    }
}

impl std::error::Error for RingError {}

// ---------------------------------------------------------------------------
// bidegrees
// ---------------------------------------------------------------------------

/// A cohomological bidegree (first degree, weight), written (m, w).
///
/// Every monomial satisfies m <= 2w, with equality exactly on the polynomial
/// part F_l[y_1, .., y_n].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bidegree {
    pub degree: i64,
    pub weight: i64,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { degree: 0, weight: 0 };

    pub fn new(degree: i64, weight: i64) -> Self {
        Bidegree { degree, weight }
    }
}

impl std::ops::Add for Bidegree {
    type Output = Bidegree;

    fn add(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.degree + rhs.degree, self.weight + rhs.weight)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.degree, self.weight)
    }
}

// ---------------------------------------------------------------------------
// ring context
// ---------------------------------------------------------------------------

/// The three kinds of ring generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// Exterior generator x_i, bidegree (1, 1).
    X(u32),
    /// Polynomial generator y_i, bidegree (2, 1).
    Y(u32),
    /// The degree-zero, weight-one class tau.
    Tau,
}

/// Shared description of one ring: the prime l and the rank n of (Z/l)^n.
///
/// Contexts are tiny and copyable.  Every element carries one, and binary
/// operations insist that the two sides agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingContext {
    prime: u32,
    rank: u32,
    rho_is_zero: bool,
}

impl RingContext {
    /// Build a context, checking that `prime` is prime and `rank >= 1`.
    pub fn new(prime: u32, rank: u32) -> Result<Self, RingError> {
        if !is_prime(prime) {
            return Err(RingError::NotPrime(prime));
        }
        if rank == 0 {
            return Err(RingError::InvalidRank(rank));
        }
        Ok(RingContext { prime, rank, rho_is_zero: true })
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// The class rho = [-1] is taken to be zero throughout this crate.
    pub fn rho_is_zero(&self) -> bool {
        self.rho_is_zero
    }

    pub fn zero(&self) -> Element {
        Element { ctx: *self, terms: BTreeMap::new() }
    }

    pub fn one(&self) -> Element {
        self.scalar(1)
    }

    /// The scalar c * 1, reduced mod l.
    pub fn scalar(&self, c: i64) -> Element {
        Element::from_terms(*self, [(Monomial::one(self.rank), c)])
    }

    pub fn tau(&self) -> Element {
        Element::from_terms(*self, [(Monomial::raw(1, vec![0; self.rank as usize], vec![]), 1)])
    }

    pub fn x(&self, index: u32) -> Result<Element, RingError> {
        self.generator(Generator::X(index))
    }

    pub fn y(&self, index: u32) -> Result<Element, RingError> {
        self.generator(Generator::Y(index))
    }

    pub fn generator(&self, g: Generator) -> Result<Element, RingError> {
        let mon = match g {
            Generator::Tau => Monomial::raw(1, vec![0; self.rank as usize], vec![]),
            Generator::X(i) => {
                self.check_index(i)?;
                Monomial::raw(0, vec![0; self.rank as usize], vec![i])
            }
            Generator::Y(i) => {
                self.check_index(i)?;
                let mut ys = vec![0; self.rank as usize];
                ys[(i - 1) as usize] = 1;
                Monomial::raw(0, ys, vec![])
            }
        };
        Ok(Element::from_terms(*self, [(mon, 1)]))
    }

    /// A single monomial tau^t * y^ys * x_xs with coefficient 1.
    ///
    /// `ys` must have length `rank`; `xs` lists exterior indices in strictly
    /// increasing order (checked, since callers typically assemble these from
    /// external data).
    pub fn monomial(&self, tau: u32, ys: &[u32], xs: &[u32]) -> Result<Element, RingError> {
        if ys.len() != self.rank as usize {
            return Err(RingError::InvalidRank(ys.len() as u32));
        }
        for (k, &i) in xs.iter().enumerate() {
            if i == 0 || i > self.rank {
                return Err(RingError::IndexOutOfRange { index: i as u64, rank: self.rank });
            }
            if k > 0 && xs[k - 1] >= i {
                return Err(RingError::IndexOutOfRange { index: i as u64, rank: self.rank });
            }
        }
        Ok(Element::from_terms(*self, [(Monomial::raw(tau, ys.to_vec(), xs.to_vec()), 1)]))
    }

    /// A linear combination of monomials; coefficients are reduced mod l and
    /// like terms are collected.
    pub fn combine<I>(&self, terms: I) -> Result<Element, RingError>
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut checked = Vec::new();
        for (mon, c) in terms {
            if mon.rank() != self.rank {
                return Err(RingError::InvalidRank(mon.rank()));
            }
            checked.push((mon, c));
        }
        Ok(Element::from_terms(*self, checked))
    }

    /// All monomials of the given bidegree, in canonical order.
    ///
    /// The list is finite for every bidegree and empty when no monomial fits
    /// (for example whenever m > 2w or a coordinate is negative).
    pub fn basis(&self, bidegree: Bidegree) -> Vec<Monomial> {
        let (m, w) = (bidegree.degree, bidegree.weight);
        let mut out = Vec::new();
        if m < 0 || w < 0 {
            return out;
        }
        let n = self.rank as usize;
        for ext in 0..=n.min(m.min(i64::from(u32::MAX)) as usize) {
            let rest = m - ext as i64;
            if rest % 2 != 0 {
                continue;
            }
            let poly_total = rest / 2;
            let t = w - ext as i64 - poly_total;
            if t < 0 || t > i64::from(u32::MAX) || poly_total > i64::from(u32::MAX) {
                continue;
            }
            for xs in subsets_of_size(self.rank, ext) {
                for ys in compositions(poly_total as u32, n) {
                    out.push(Monomial::raw(t as u32, ys, xs.clone()));
                }
            }
        }
        out.sort();
        out
    }

    /// All monomials with first degree <= `max_degree` and tau exponent
    /// <= `max_tau`, in canonical order.  Useful for enumerated sweeps, where
    /// tau-linearity of the operations makes large tau powers redundant.
    pub fn monomials_below(&self, max_degree: i64, max_tau: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        if max_degree < 0 {
            return out;
        }
        let n = self.rank as usize;
        for ext in 0..=n.min(max_degree as usize) {
            let poly_max = (max_degree - ext as i64) / 2;
            for xs in subsets_of_size(self.rank, ext) {
                for poly_total in 0..=poly_max as u32 {
                    for ys in compositions(poly_total, n) {
                        for t in 0..=max_tau {
                            out.push(Monomial::raw(t, ys.clone(), xs.clone()));
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    fn check_index(&self, index: u32) -> Result<(), RingError> {
        if index == 0 || index > self.rank {
            return Err(RingError::IndexOutOfRange { index: index as u64, rank: self.rank });
        }
        Ok(())
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Strictly increasing `size`-element subsets of 1..=n, in lexicographic
/// order of the index sequences.
fn subsets_of_size(n: u32, size: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(n: u32, size: usize, start: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        let needed = size - current.len();
        for i in start..=n.saturating_sub(needed as u32 - 1) {
            current.push(i);
            rec(n, size, i + 1, current, out);
            current.pop();
        }
    }
    rec(n, size, 1, &mut current, &mut out);
    out
}

/// All ways of writing `total` as an ordered sum of `parts` nonnegative
/// integers.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(parts);
    fn rec(total: u32, parts: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == parts - 1 {
            current.push(total);
            out.push(current.clone());
            current.pop();
            return;
        }
        for v in 0..=total {
            current.push(v);
            rec(total - v, parts, current, out);
            current.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut current, &mut out);
    out
}

// ---------------------------------------------------------------------------
// monomials
// ---------------------------------------------------------------------------

/// One basis monomial tau^t * y_1^{d_1} .. y_n^{d_n} * x_{s_1} .. x_{s_k}
/// with s_1 < .. < s_k.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    tau: u32,
    ys: Vec<u32>,
    xs: Vec<u32>,
}

impl Monomial {
    /// The empty monomial 1 in a ring of the given rank.
    pub fn one(rank: u32) -> Self {
        Monomial { tau: 0, ys: vec![0; rank as usize], xs: vec![] }
    }

    pub(crate) fn raw(tau: u32, ys: Vec<u32>, xs: Vec<u32>) -> Self {
        debug_assert!(xs.windows(2).all(|w| w[0] < w[1]), "exterior indices must increase");
        debug_assert!(xs.iter().all(|&i| i >= 1 && i as usize <= ys.len()));
        Monomial { tau, ys, xs }
    }

    pub fn tau_exponent(&self) -> u32 {
        self.tau
    }

    /// Exponents of y_1, .., y_n; the slice has length `rank`.
    pub fn y_exponents(&self) -> &[u32] {
        &self.ys
    }

    /// Indices of the exterior factors, strictly increasing and 1-based.
    pub fn x_indices(&self) -> &[u32] {
        &self.xs
    }

    pub fn rank(&self) -> u32 {
        self.ys.len() as u32
    }

    pub fn bidegree(&self) -> Bidegree {
        let poly: i64 = self.ys.iter().map(|&d| d as i64).sum();
        let ext = self.xs.len() as i64;
        Bidegree::new(ext + 2 * poly, ext + poly + self.tau as i64)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.bidegree(), other.bidegree());
        a.degree
            .cmp(&b.degree)
            .then(a.weight.cmp(&b.weight))
            .then(self.tau.cmp(&other.tau))
            // Reversed so that higher powers of lower-index polynomial
            // generators sort first: y1^2*y2 before y1*y2^2 before y2^3.
            .then(other.ys.cmp(&self.ys))
            .then(self.xs.cmp(&other.xs))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.tau {
            0 => {}
            1 => parts.push("tau".to_string()),
            t => parts.push(format!("tau^{t}")),
        }
        for (j, &d) in self.ys.iter().enumerate() {
            match d {
                0 => {}
                1 => parts.push(format!("y{}", j + 1)),
                _ => parts.push(format!("y{}^{}", j + 1, d)),
            }
        }
        for &s in &self.xs {
            parts.push(format!("x{s}"));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Product of two monomials over the same context: Koszul sign from sorting
/// the exterior factors, then the square rule for repeated indices.  Returns
/// `None` when the product is zero (repeated exterior factor at an odd
/// prime).
fn mul_monomials(ctx: &RingContext, a: &Monomial, b: &Monomial) -> Option<(Monomial, i64)> {
    // Count the transpositions needed to interleave b's exterior factors
    // into a's: one sign per pair (s in a, t in b) with s > t.
    let mut inversions = 0usize;
    let mut repeated: Vec<u32> = Vec::new();
    for &t in &b.xs {
        for &s in &a.xs {
            if s > t {
                inversions += 1;
            } else if s == t {
                repeated.push(t);
            }
        }
    }
    if !repeated.is_empty() && ctx.prime != 2 {
        return None;
    }

    let mut ys: Vec<u32> = a.ys.iter().zip(&b.ys).map(|(&u, &v)| u + v).collect();
    let mut tau = a.tau + b.tau;
    // At l = 2 each repeated exterior factor contracts: x_i * x_i = tau * y_i.
    for &i in &repeated {
        ys[(i - 1) as usize] += 1;
        tau += 1;
    }

    let mut xs: Vec<u32> = Vec::with_capacity(a.xs.len() + b.xs.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.xs.len() || j < b.xs.len() {
        match (a.xs.get(i), b.xs.get(j)) {
            (Some(&s), Some(&t)) if s == t => {
                i += 1;
                j += 1;
            }
            (Some(&s), Some(&t)) if s < t => {
                xs.push(s);
                i += 1;
            }
            (Some(_), Some(&t)) => {
                xs.push(t);
                j += 1;
            }
            (Some(&s), None) => {
                xs.push(s);
                i += 1;
            }
            (None, Some(&t)) => {
                xs.push(t);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }

    let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
    Some((Monomial::raw(tau, ys, xs), sign))
}

// ---------------------------------------------------------------------------
// elements
// ---------------------------------------------------------------------------

/// A sparse ring element: finitely many monomials with coefficients in
/// 1..l-1.  Zero coefficients are never stored, so the term map is canonical
/// and equality is structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    ctx: RingContext,
    terms: BTreeMap<Monomial, u32>,
}

impl Element {
    pub fn context(&self) -> RingContext {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical monomial order; coefficients are in 1..l-1.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    /// The coefficient of `mon`, zero if absent.
    pub fn coefficient(&self, mon: &Monomial) -> u32 {
        self.terms.get(mon).copied().unwrap_or(0)
    }

    /// Collect terms, reduce coefficients mod l, and drop zeros.  All
    /// element construction funnels through here, which is what keeps the
    /// representation canonical.
    pub(crate) fn from_terms<I>(ctx: RingContext, terms: I) -> Element
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let p = ctx.prime as i64;
        let mut acc: BTreeMap<Monomial, i64> = BTreeMap::new();
        for (mon, c) in terms {
            debug_assert_eq!(mon.rank(), ctx.rank);
            let entry = acc.entry(mon).or_insert(0);
            *entry = (*entry + c).rem_euclid(p);
        }
        let terms = acc
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(m, c)| (m, c as u32))
            .collect();
        Element { ctx, terms }
    }

    fn same_context(&self, other: &Element) -> Result<(), RingError> {
        if self.ctx != other.ctx {
            return Err(RingError::ContextMismatch { left: self.ctx, right: other.ctx });
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element, RingError> {
        self.same_context(other)?;
        Ok(self.add_raw(other))
    }

    pub fn sub(&self, other: &Element) -> Result<Element, RingError> {
        self.same_context(other)?;
        Ok(self.sub_raw(other))
    }

    pub fn mul(&self, other: &Element) -> Result<Element, RingError> {
        self.same_context(other)?;
        Ok(self.mul_raw(other))
    }

    pub(crate) fn add_raw(&self, other: &Element) -> Element {
        debug_assert_eq!(self.ctx, other.ctx);
        let all = self
            .terms()
            .map(|(m, c)| (m.clone(), c as i64))
            .chain(other.terms().map(|(m, c)| (m.clone(), c as i64)));
        Element::from_terms(self.ctx, all)
    }

    pub(crate) fn sub_raw(&self, other: &Element) -> Element {
        debug_assert_eq!(self.ctx, other.ctx);
        let all = self
            .terms()
            .map(|(m, c)| (m.clone(), c as i64))
            .chain(other.terms().map(|(m, c)| (m.clone(), -(c as i64))));
        Element::from_terms(self.ctx, all)
    }

    pub(crate) fn mul_raw(&self, other: &Element) -> Element {
        debug_assert_eq!(self.ctx, other.ctx);
        let mut acc: Vec<(Monomial, i64)> = Vec::new();
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                if let Some((m, sign)) = mul_monomials(&self.ctx, ma, mb) {
                    acc.push((m, sign * ca as i64 * cb as i64));
                }
            }
        }
        Element::from_terms(self.ctx, acc)
    }

    /// Multiply every coefficient by c (any integer; reduced mod l).
    pub fn scalar_mul(&self, c: i64) -> Element {
        Element::from_terms(self.ctx, self.terms().map(|(m, k)| (m.clone(), c * k as i64)))
    }

    pub fn neg(&self) -> Element {
        self.scalar_mul(-1)
    }

    /// k-th power by repeated multiplication.
    pub fn pow(&self, k: u32) -> Element {
        let mut out = self.ctx.one();
        for _ in 0..k {
            out = out.mul_raw(self);
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::bidegree);
        match degrees.next() {
            None => true,
            Some(first) => degrees.all(|d| d == first),
        }
    }

    /// The common bidegree of all terms.  Errors on the zero element and on
    /// inhomogeneous elements (naming the two offending bidegrees).
    pub fn bidegree(&self) -> Result<Bidegree, RingError> {
        let mut degrees = self.terms.keys().map(Monomial::bidegree);
        let first = degrees.next().ok_or(RingError::DegreeOfZero)?;
        for d in degrees {
            if d != first {
                return Err(RingError::Inhomogeneous { first, second: d });
            }
        }
        Ok(first)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(m, &c)| {
                let ms = m.to_string();
                if ms == "1" {
                    c.to_string()
                } else if c == 1 {
                    ms
                } else {
                    format!("{c}*{ms}")
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
