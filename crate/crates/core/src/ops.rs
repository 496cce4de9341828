//! Cohomology operations on the ring of [`crate::ring`]: the Bockstein, the
//! reduced powers P^i, and the Milnor primitives Q_i.
//!
//! Values on generators (everything else follows by linearity plus the
//! Cartan/Leibniz rules):
//!
//! ```text
//! beta(x_i) = y_i      beta(y_i) = 0        beta(tau) = 0
//! P^0  = id            P^i(x_j)  = 0        (i >= 1)
//! P^1(y_j) = y_j^l     P^i(y_j)  = 0        (i >= 2)
//! P^i(tau) = 0         (i >= 1)
//! Q_0 = beta           Q_i(x_j)  = y_j^{l^i},  Q_i(y_j) = Q_i(tau) = 0
//! ```
//!
//! The reduced powers are computed with the Cartan formula.  At l = 2 the
//! formula picks up a tau-twisted cross term (with rho = 0):
//!
//! ```text
//! P^k(uv) = sum_{a+b=k} P^a(u) P^b(v)
//!         + tau * sum_{a+b=k-1} (beta P^a)(u) (beta P^b)(v)     (l = 2 only)
//! ```
//!
//! which is what makes weights balance: for example P^1(x_1*x_2) = tau*y1*y2.
//!
//! The Milnor operations come in two independent implementations: [`milnor`]
//! uses the commutator recursion Q_i = P^{l^{i-1}} Q_{i-1} - Q_{i-1} P^{l^{i-1}},
//! while [`milnor_derivation`] extends the generator values directly as a
//! signed derivation.  They agree on everything; the test suites hold each to
//! the other.

use std::fmt;

use crate::ring::{Bidegree, Element, Monomial, RingContext};

// ---------------------------------------------------------------------------
// primitive operations and words
// ---------------------------------------------------------------------------

/// One primitive operation.  `Milnor(0)` and `Bockstein` act identically;
/// the word parser canonicalizes both spellings to `Bockstein`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrimitiveOp {
    /// The Bockstein beta = Q_0; bidegree shift (1, 0).
    Bockstein,
    /// The reduced power P^i; shift (2i(l-1), i(l-1)).
    Power(u32),
    /// The Milnor primitive Q_i; shift (2*l^i - 1, l^i - 1).
    Milnor(u32),
}

impl PrimitiveOp {
    /// The bidegree shift of this operation over F_l.
    pub fn shift(&self, prime: u32) -> Bidegree {
        let p = prime as i64;
        match *self {
            PrimitiveOp::Bockstein => Bidegree::new(1, 0),
            PrimitiveOp::Power(i) => {
                let i = i as i64;
                Bidegree::new(2 * i * (p - 1), i * (p - 1))
            }
            PrimitiveOp::Milnor(i) => {
                let q = p.checked_pow(i).expect("l^i overflows the bidegree range");
                Bidegree::new(2 * q - 1, q - 1)
            }
        }
    }

    pub fn apply(&self, a: &Element) -> Element {
        match *self {
            PrimitiveOp::Bockstein => bockstein(a),
            PrimitiveOp::Power(i) => power(i, a),
            PrimitiveOp::Milnor(i) => milnor(i, a),
        }
    }
}

impl fmt::Display for PrimitiveOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PrimitiveOp::Bockstein => write!(f, "Q0"),
            PrimitiveOp::Power(i) => write!(f, "P{i}"),
            PrimitiveOp::Milnor(i) => write!(f, "Q{i}"),
        }
    }
}

/// A composite operation, written left to right: `ops()[0]` acts **last**,
/// matching the usual composition order of the text form "Q1,Q0".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationWord {
    ops: Vec<PrimitiveOp>,
}

impl OperationWord {
    pub fn new(ops: Vec<PrimitiveOp>) -> Self {
        OperationWord { ops }
    }

    pub fn ops(&self) -> &[PrimitiveOp] {
        &self.ops
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Sum of the constituent shifts.
    pub fn shift(&self, prime: u32) -> Bidegree {
        self.ops
            .iter()
            .fold(Bidegree::ZERO, |acc, op| acc + op.shift(prime))
    }

    /// Apply rightmost-first.  The empty word is the identity.
    pub fn apply(&self, a: &Element) -> Element {
        let mut out = a.clone();
        for op in self.ops.iter().rev() {
            out = op.apply(&out);
        }
        out
    }
}

impl fmt::Display for OperationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ops.iter().map(|op| op.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

// ---------------------------------------------------------------------------
// the Bockstein and the Milnor derivations
// ---------------------------------------------------------------------------

/// The signed F_l[tau, y]-linear derivation sending x_j to y_j^e: on a
/// monomial, replace the k-th exterior factor (k = 1, 2, ..) by y^e with sign
/// (-1)^{k-1} and sum.
fn exterior_derivation(a: &Element, e: u32) -> Element {
    let ctx = a.context();
    let mut acc: Vec<(Monomial, i64)> = Vec::new();
    for (mon, c) in a.terms() {
        for (pos, &s) in mon.x_indices().iter().enumerate() {
            let sign = if pos % 2 == 0 { 1i64 } else { -1i64 };
            let mut ys = mon.y_exponents().to_vec();
            ys[(s - 1) as usize] += e;
            let xs: Vec<u32> = mon
                .x_indices()
                .iter()
                .copied()
                .filter(|&t| t != s)
                .collect();
            acc.push((
                Monomial::raw(mon.tau_exponent(), ys, xs),
                sign * c as i64,
            ));
        }
    }
    Element::from_terms(ctx, acc)
}

/// The Bockstein beta = Q_0.
pub fn bockstein(a: &Element) -> Element {
    exterior_derivation(a, 1)
}

/// Q_i computed directly as the derivation x_j -> y_j^{l^i}.  Independent of
/// [`milnor`]; the two are checked against each other exhaustively in the
/// test suites.
pub fn milnor_derivation(i: u32, a: &Element) -> Element {
    let e = a
        .context()
        .prime()
        .checked_pow(i)
        .expect("l^i exceeds u32; Milnor index too large");
    exterior_derivation(a, e)
}

/// Q_i computed by the commutator recursion
/// Q_0 = beta, Q_i = P^{l^{i-1}} Q_{i-1} - Q_{i-1} P^{l^{i-1}}.
pub fn milnor(i: u32, a: &Element) -> Element {
    if i == 0 {
        return bockstein(a);
    }
    let step = a
        .context()
        .prime()
        .checked_pow(i - 1)
        .expect("l^{i-1} exceeds u32; Milnor index too large");
    let inner = milnor(i - 1, a);
    let left = power(step, &inner);
    let right = milnor(i - 1, &power(step, a));
    left.sub_raw(&right)
}

// ---------------------------------------------------------------------------
// reduced powers
// ---------------------------------------------------------------------------

/// The reduced power P^i, extended linearly over the terms.  P^0 is the
/// identity.
pub fn power(i: u32, a: &Element) -> Element {
    let ctx = a.context();
    if i == 0 {
        return a.clone();
    }
    let mut acc: Vec<(Monomial, i64)> = Vec::new();
    for (mon, c) in a.terms() {
        for (m2, c2) in power_monomial(&ctx, i, mon).terms() {
            acc.push((m2.clone(), c as i64 * c2 as i64));
        }
    }
    Element::from_terms(ctx, acc)
}

/// P^k of a single monomial, by folding the Cartan formula over its factors
/// tau^t, y_j^{d_j}, x_s.
fn power_monomial(ctx: &RingContext, k: u32, mon: &Monomial) -> Element {
    // P^k vanishes above the instability line 2k <= m; returning early also
    // bounds the table allocated below.
    if 2 * k as i64 > mon.bidegree().degree {
        return ctx.zero();
    }
    let k = k as usize;
    // table[a] = P^a(product of the factors folded so far).
    let mut table: Vec<Element> = Vec::with_capacity(k + 1);
    table.push(ctx.one());
    table.resize(k + 1, ctx.zero());
    for block in factor_blocks(ctx, k, mon) {
        table = cartan_step(ctx, &table, &block);
    }
    table[k].clone()
}

/// The nonzero P^a values of each factor of `mon`, as `block[a]`:
/// tau^t and x_s admit only P^0; y_j^d has P^a = C(d, a) y_j^{d + a(l-1)}.
fn factor_blocks(ctx: &RingContext, k: usize, mon: &Monomial) -> Vec<Vec<Element>> {
    let p = ctx.prime();
    let n = ctx.rank() as usize;
    let mut blocks = Vec::new();
    if mon.tau_exponent() > 0 {
        let tau_part = Monomial::raw(mon.tau_exponent(), vec![0; n], vec![]);
        blocks.push(vec![Element::from_terms(*ctx, [(tau_part, 1)])]);
    }
    for (j, &d) in mon.y_exponents().iter().enumerate() {
        if d == 0 {
            continue;
        }
        let mut block = Vec::new();
        for a in 0..=(d as usize).min(k) {
            let coeff = binom_mod(d as u64, a as u64, p) as i64;
            let mut ys = vec![0; n];
            ys[j] = d + a as u32 * (p - 1);
            block.push(Element::from_terms(*ctx, [(Monomial::raw(0, ys, vec![]), coeff)]));
        }
        blocks.push(block);
    }
    for &s in mon.x_indices() {
        let x = Monomial::raw(0, vec![0; n], vec![s]);
        blocks.push(vec![Element::from_terms(*ctx, [(x, 1)])]);
    }
    blocks
}

/// One Cartan convolution step: extend `table` (the P^a values of a partial
/// product) by one more factor.  At l = 2 this includes the tau-twisted
/// cross term of odd-degree operations.
// The convolutions below pair table[i] with block[a - i]; plain index loops
// keep that symmetry readable.
#[allow(clippy::needless_range_loop)]
fn cartan_step(ctx: &RingContext, table: &[Element], block: &[Element]) -> Vec<Element> {
    let k = table.len() - 1;
    let twisted = ctx.prime() == 2;
    let beta_table: Vec<Element> = if twisted {
        table.iter().map(bockstein).collect()
    } else {
        Vec::new()
    };
    let beta_block: Vec<Element> = if twisted {
        block.iter().map(bockstein).collect()
    } else {
        Vec::new()
    };
    let tau = ctx.tau();
    let mut next = Vec::with_capacity(k + 1);
    for a in 0..=k {
        let mut acc = ctx.zero();
        for i in 0..=a {
            let j = a - i;
            if j < block.len() && !table[i].is_zero() && !block[j].is_zero() {
                acc = acc.add_raw(&table[i].mul_raw(&block[j]));
            }
        }
        if twisted && a > 0 {
            for i in 0..a {
                let j = a - 1 - i;
                if j < beta_block.len()
                    && !beta_table[i].is_zero()
                    && !beta_block[j].is_zero()
                {
                    acc = acc.add_raw(&tau.mul_raw(&beta_table[i].mul_raw(&beta_block[j])));
                }
            }
        }
        next.push(acc);
    }
    next
}

// ---------------------------------------------------------------------------
// binomials mod p
// ---------------------------------------------------------------------------

/// C(n, k) mod p by Lucas' theorem (p prime).
fn binom_mod(n: u64, k: u64, p: u32) -> u32 {
    let p = p as u64;
    let (mut n, mut k) = (n, k);
    let mut out = 1u64;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        out = out * binom_digit(nd, kd, p) % p;
        n /= p;
        k /= p;
    }
    out as u32
}

/// C(n, k) mod p for digits n, k < p: numerator product times the inverse
/// of k!, both mod p.
fn binom_digit(n: u64, k: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 1..=k {
        num = num * ((n - k + i) % p) % p;
        den = den * (i % p) % p;
    }
    num * inv_mod(den, p) % p
}

/// Inverse mod a prime, by Fermat's little theorem.
fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut out = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            out = out * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    out
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
