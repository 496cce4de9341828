//! The check suites behind `milnor verify`.
//!
//! Two suites ship with the tool.  The `formulas` suite re-derives the
//! closed-form values of the operations on generators and on the rank-three
//! witness class and compares them against independently constructed
//! expectations.  The `properties` suite samples random elements with a
//! seeded generator and exercises the algebraic laws (ring axioms, Leibniz
//! rules, Cartan expansion, nilpotence, instability), plus one exhaustive
//! sweep comparing the two Milnor-primitive implementations on every basis
//! monomial up to a degree bound.

use milnor_core::{
    bockstein, milnor, milnor_derivation, parse_element, power, Bidegree, Element, Monomial,
    OperationWord, PrimitiveOp, RingContext,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::CliError;

/// Result of one named check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn pass(name: &'static str, detail: String) -> Check {
        Check { name, passed: true, detail }
    }

    fn fail(name: &'static str, detail: String) -> Check {
        Check { name, passed: false, detail }
    }
}

/// Knobs for the randomized suite.
#[derive(Debug, Clone, Copy)]
pub struct PropertyOptions {
    pub max_degree: i64,
    pub seed: u64,
    pub samples: usize,
    pub max_q: u32,
}

const RANK: u32 = 3;

fn context(prime: u32) -> Result<RingContext, CliError> {
    RingContext::new(prime, RANK).map_err(|e| CliError::Usage(e.to_string()))
}

// ---------------------------------------------------------------------------
// formulas suite
// ---------------------------------------------------------------------------

/// Closed-form identities: operation values on generators and on the
/// rank-three witness class, compared against independently built elements.
pub fn formula_checks(prime: u32, max_q: u32) -> Result<Vec<Check>, CliError> {
    let ctx = context(prime)?;
    let p = prime;
    let mut checks = Vec::new();

    // Bockstein on generators: beta(x_i) = y_i, beta(y_i) = beta(tau) = 0.
    {
        let mut ok = true;
        for i in 1..=RANK {
            ok &= bockstein(&ctx.x(i).unwrap()) == ctx.y(i).unwrap();
            ok &= bockstein(&ctx.y(i).unwrap()).is_zero();
        }
        ok &= bockstein(&ctx.tau()).is_zero();
        checks.push(if ok {
            Check::pass("bockstein-on-generators", "beta x_i = y_i, beta y_i = beta tau = 0".into())
        } else {
            Check::fail("bockstein-on-generators", "generator image mismatch".into())
        });
    }

    // Reduced powers on generators: P^0 = id, P^1 y = y^l, higher powers and
    // powers of x and tau vanish.
    {
        let y1 = ctx.y(1).unwrap();
        let x1 = ctx.x(1).unwrap();
        let mut ok = power(0, &y1) == y1 && power(0, &x1) == x1;
        let y1_l = ctx.monomial(0, &[p, 0, 0], &[]).unwrap();
        ok &= power(1, &y1) == y1_l;
        for k in 2..=4 {
            ok &= power(k, &y1).is_zero();
        }
        for k in 1..=4 {
            ok &= power(k, &x1).is_zero();
            ok &= power(k, &ctx.tau()).is_zero();
        }
        checks.push(if ok {
            Check::pass("powers-on-generators", format!("P1 y = y^{p}, P>=2 y = 0, P>=1 x = P>=1 tau = 0"))
        } else {
            Check::fail("powers-on-generators", "generator image mismatch".into())
        });
    }

    // Exterior squares: x_i^2 = tau y_i when l = 2, zero at odd l.
    {
        let x1 = ctx.x(1).unwrap();
        let square = x1.mul(&x1).unwrap();
        let expected = if p == 2 { ctx.monomial(1, &[1, 0, 0], &[]).unwrap() } else { ctx.zero() };
        checks.push(if square == expected {
            Check::pass("exterior-squares", format!("x1^2 = {square}"))
        } else {
            Check::fail("exterior-squares", format!("x1^2 = {square}, expected {expected}"))
        });
    }

    // Milnor primitives on generators: Q_i x_j = y_j^{l^i}, Q_i kills y, tau.
    {
        let mut ok = true;
        let mut witness = String::new();
        for i in 0..=max_q {
            let e = p.checked_pow(i).expect("q index is capped");
            for j in 1..=RANK {
                let mut ys = [0u32; 3];
                ys[(j - 1) as usize] = e;
                let expected = ctx.monomial(0, &ys, &[]).unwrap();
                ok &= milnor(i, &ctx.x(j).unwrap()) == expected;
                ok &= milnor(i, &ctx.y(j).unwrap()).is_zero();
            }
            ok &= milnor(i, &ctx.tau()).is_zero();
            if i == max_q {
                witness = format!("Q{i} x1 = {}", milnor(i, &ctx.x(1).unwrap()));
            }
        }
        checks.push(if ok {
            Check::pass("milnor-on-generators", witness)
        } else {
            Check::fail("milnor-on-generators", "generator image mismatch".into())
        });
    }

    // Q_k of the triple product is the alternating three-term expansion
    // sum_j (-1)^{j-1} y_j^{l^k} x_(others).
    {
        let triple = parse_element(&ctx, "x1*x2*x3").expect("fixed input");
        let mut ok = true;
        let mut last = String::new();
        for k in 0..=max_q {
            let e = p.checked_pow(k).expect("q index is capped");
            let terms = [
                ([2u32, 3u32], 1i64),
                ([1, 3], -1),
                ([1, 2], 1),
            ];
            let mut expected = ctx.zero();
            for (j, (xs, c)) in (1..=3u32).zip(terms) {
                let mut ys = [0u32; 3];
                ys[(j - 1) as usize] = e;
                let term = ctx.monomial(0, &ys, &xs).unwrap().scalar_mul(c);
                expected = expected.add(&term).unwrap();
            }
            let got = milnor(k, &triple);
            ok &= got == expected;
            if k == max_q {
                last = format!("Q{k}(x1*x2*x3) = {got}");
            }
        }
        checks.push(if ok {
            Check::pass("milnor-triple-product", last)
        } else {
            Check::fail("milnor-triple-product", "three-term expansion mismatch".into())
        });
    }

    // The word Q0,Q1,Q2 sends x1*x2*x3 to the full signed permutation sum
    // over S_3 with exponents l^2, l, 1.
    {
        let triple = parse_element(&ctx, "x1*x2*x3").expect("fixed input");
        let word = OperationWord::new(vec![
            PrimitiveOp::Bockstein,
            PrimitiveOp::Milnor(1),
            PrimitiveOp::Milnor(2),
        ]);
        let got = word.apply(&triple);
        let perms: [([usize; 3], i64); 6] = [
            ([0, 1, 2], 1),
            ([0, 2, 1], -1),
            ([1, 0, 2], -1),
            ([1, 2, 0], 1),
            ([2, 0, 1], 1),
            ([2, 1, 0], -1),
        ];
        let mut expected = ctx.zero();
        for &(sigma, sign) in &perms {
            let mut ys = [0u32; 3];
            ys[sigma[0]] = p * p;
            ys[sigma[1]] = p;
            ys[sigma[2]] = 1;
            let term = ctx.monomial(0, &ys, &[]).unwrap().scalar_mul(sign);
            expected = expected.add(&term).unwrap();
        }
        let distinct = got.term_count() == 6;
        let unit_coeffs = got.terms().all(|(_, c)| c == 1 || c == p - 1);
        checks.push(if got == expected && distinct && unit_coeffs {
            Check::pass(
                "milnor-word-permutation-sum",
                format!("Q0,Q1,Q2 on x1*x2*x3 has 6 signed terms, e.g. {}", got.terms().next().map(|(m, _)| m.to_string()).unwrap_or_default()),
            )
        } else {
            Check::fail("milnor-word-permutation-sum", format!("got {got}"))
        });
    }

    // The witness: Q1 Q0 (x1*x2*x3) is nonzero, both implementations agree,
    // and the bidegree is exactly (2l + 3, l + 2).
    {
        let triple = parse_element(&ctx, "x1*x2*x3").expect("fixed input");
        let via_recursion = milnor(1, &milnor(0, &triple));
        let via_derivation = milnor_derivation(1, &milnor_derivation(0, &triple));
        let expected_bidegree = Bidegree::new(2 * p as i64 + 3, p as i64 + 2);
        let ok = via_recursion == via_derivation
            && !via_recursion.is_zero()
            && via_recursion.bidegree() == Ok(expected_bidegree);
        checks.push(if ok {
            Check::pass(
                "witness-q1q0-nonzero",
                format!(
                    "Q1 Q0 (x1*x2*x3) has {} terms in bidegree {expected_bidegree}",
                    via_recursion.term_count()
                ),
            )
        } else {
            Check::fail("witness-q1q0-nonzero", format!("got {via_recursion}"))
        });
    }

    Ok(checks)
}

// ---------------------------------------------------------------------------
// properties suite
// ---------------------------------------------------------------------------

struct Sampler {
    ctx: RingContext,
    pool: Vec<Monomial>,
    rng: ChaCha8Rng,
}

impl Sampler {
    fn new(ctx: RingContext, max_degree: i64, seed: u64) -> Sampler {
        Sampler { ctx, pool: ctx.monomials_below(max_degree, 2), rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A random element with up to five terms; may be zero or inhomogeneous.
    fn element(&mut self) -> Element {
        let p = self.ctx.prime() as i64;
        let k = self.rng.random_range(0..=5usize);
        let terms: Vec<(Monomial, i64)> = (0..k)
            .map(|_| {
                let m = self.pool[self.rng.random_range(0..self.pool.len())].clone();
                (m, self.rng.random_range(0..p))
            })
            .collect();
        self.ctx.combine(terms).expect("pool monomials share the context")
    }

    /// A random homogeneous element: random coefficients over the basis of a
    /// randomly chosen bidegree from the pool.
    fn homogeneous(&mut self) -> Element {
        let p = self.ctx.prime() as i64;
        let anchor = &self.pool[self.rng.random_range(0..self.pool.len())];
        let basis = self.ctx.basis(anchor.bidegree());
        let terms: Vec<(Monomial, i64)> = basis
            .into_iter()
            .map(|m| (m, self.rng.random_range(0..p)))
            .collect();
        self.ctx.combine(terms).expect("basis monomials share the context")
    }
}

fn run_samples(
    name: &'static str,
    samples: usize,
    detail: String,
    mut body: impl FnMut(usize) -> Result<(), String>,
) -> Check {
    for s in 0..samples {
        if let Err(msg) = body(s) {
            return Check::fail(name, format!("sample {s}: {msg}"));
        }
    }
    Check::pass(name, detail)
}

/// Randomized algebraic-law checks plus the exhaustive sweep comparing the
/// two Milnor-primitive implementations.
pub fn property_checks(prime: u32, opts: &PropertyOptions) -> Result<Vec<Check>, CliError> {
    let ctx = context(prime)?;
    if opts.max_degree < 0 {
        return Err(CliError::Usage("max degree must be nonnegative".into()));
    }
    let mut s = Sampler::new(ctx, opts.max_degree, opts.seed);
    let n = opts.samples;
    let stamp = format!("{n} samples, pool of {} monomials up to degree {}", s.pool.len(), opts.max_degree);
    let mut checks = Vec::new();

    checks.push(run_samples("addition-laws", n, stamp.clone(), |_| {
        let (a, b, c) = (s.element(), s.element(), s.element());
        let p = a.context().prime();
        if a.add(&b).unwrap() != b.add(&a).unwrap() {
            return Err(format!("commutativity fails on {a} and {b}"));
        }
        let assoc_l = a.add(&b).unwrap().add(&c).unwrap();
        let assoc_r = a.add(&b.add(&c).unwrap()).unwrap();
        if assoc_l != assoc_r {
            return Err(format!("associativity fails on {a}, {b}, {c}"));
        }
        if !a.scalar_mul(p as i64).is_zero() {
            return Err(format!("{p} * ({a}) is nonzero"));
        }
        Ok(())
    }));

    checks.push(run_samples("multiplication-laws", n, stamp.clone(), |_| {
        let (a, b, c) = (s.element(), s.element(), s.element());
        let assoc_l = a.mul(&b).unwrap().mul(&c).unwrap();
        let assoc_r = a.mul(&b.mul(&c).unwrap()).unwrap();
        if assoc_l != assoc_r {
            return Err(format!("associativity fails on {a}, {b}, {c}"));
        }
        let dist_l = a.mul(&b.add(&c).unwrap()).unwrap();
        let dist_r = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        if dist_l != dist_r {
            return Err(format!("distributivity fails on {a}, {b}, {c}"));
        }
        let one = a.context().one();
        if a.mul(&one).unwrap() != a || one.mul(&a).unwrap() != a {
            return Err(format!("unit law fails on {a}"));
        }
        Ok(())
    }));

    checks.push(run_samples("graded-commutativity", n, stamp.clone(), |_| {
        let (a, b) = (s.homogeneous(), s.homogeneous());
        let (ab, ba) = (a.mul(&b).unwrap(), b.mul(&a).unwrap());
        let expected = match (a.bidegree(), b.bidegree()) {
            (Ok(da), Ok(db)) if (da.degree * db.degree) % 2 != 0 => ba.neg(),
            _ => ba,
        };
        if ab != expected {
            return Err(format!("({a}) * ({b}) breaks the Koszul sign"));
        }
        Ok(())
    }));

    checks.push(run_samples("centrality-of-tau-and-y", n, stamp.clone(), |_| {
        let a = s.element();
        let ctx = a.context();
        let mut central = vec![ctx.tau()];
        for j in 1..=ctx.rank() {
            central.push(ctx.y(j).unwrap());
        }
        for z in central {
            if z.mul(&a).unwrap() != a.mul(&z).unwrap() {
                return Err(format!("{z} fails to commute with {a}"));
            }
        }
        Ok(())
    }));

    checks.push(run_samples("bidegree-additivity", n, stamp.clone(), |_| {
        let (a, b) = (s.homogeneous(), s.homogeneous());
        if let (Ok(da), Ok(db)) = (a.bidegree(), b.bidegree()) {
            let ab = a.mul(&b).unwrap();
            match ab.bidegree() {
                Ok(dab) if dab == da + db => {}
                Ok(dab) => return Err(format!("({a})*({b}) lands in {dab}, expected {}", da + db)),
                Err(_) if ab.is_zero() => {}
                Err(e) => return Err(e.to_string()),
            }
        }
        Ok(())
    }));

    checks.push(run_samples("canonical-form-round-trip", n, stamp.clone(), |_| {
        let a = s.element();
        let printed = a.to_string();
        let reparsed = parse_element(&a.context(), &printed)
            .map_err(|e| format!("canonical output {printed:?} fails to parse: {e}"))?;
        if reparsed != a {
            return Err(format!("{printed} re-parses to {reparsed}"));
        }
        Ok(())
    }));

    checks.push(run_samples("bockstein-squares-to-zero", n, stamp.clone(), |_| {
        let a = s.element();
        let twice = bockstein(&bockstein(&a));
        if !twice.is_zero() {
            return Err(format!("beta^2 ({a}) = {twice}"));
        }
        Ok(())
    }));

    let max_q = opts.max_q;
    checks.push(run_samples("milnor-nilpotence", n, stamp.clone(), |_| {
        let a = s.element();
        for i in 0..=max_q {
            let twice = milnor(i, &milnor(i, &a));
            if !twice.is_zero() {
                return Err(format!("Q{i} Q{i} ({a}) = {twice}"));
            }
        }
        Ok(())
    }));

    checks.push(run_samples("milnor-anticommutativity", n, stamp.clone(), |_| {
        let a = s.element();
        for i in 0..max_q {
            for j in (i + 1)..=max_q {
                let lhs = milnor(i, &milnor(j, &a));
                let rhs = milnor(j, &milnor(i, &a)).neg();
                if lhs != rhs {
                    return Err(format!("Q{i} Q{j} + Q{j} Q{i} is nonzero on {a}"));
                }
            }
        }
        Ok(())
    }));

    checks.push(run_samples("recursion-matches-derivation-random", n, stamp.clone(), |_| {
        let a = s.element();
        for i in 0..=max_q.min(2) {
            let (rec, der) = (milnor(i, &a), milnor_derivation(i, &a));
            if rec != der {
                return Err(format!("Q{i} ({a}): recursion {rec}, derivation {der}"));
            }
        }
        Ok(())
    }));

    checks.push(run_samples("leibniz-rule", n, stamp.clone(), |_| {
        let (a, b) = (s.homogeneous(), s.element());
        let Ok(da) = a.bidegree() else { return Ok(()) };
        let sign = if da.degree % 2 == 0 { 1 } else { -1 };
        for i in 0..=max_q.min(2) {
            let lhs = milnor(i, &a.mul(&b).unwrap());
            let rhs = milnor(i, &a)
                .mul(&b)
                .unwrap()
                .add(&a.mul(&milnor(i, &b)).unwrap().scalar_mul(sign))
                .unwrap();
            if lhs != rhs {
                return Err(format!("Q{i} Leibniz fails on ({a}) * ({b})"));
            }
        }
        Ok(())
    }));

    checks.push(run_samples("cartan-formula", n, stamp.clone(), |_| {
        let (a, b) = (s.element(), s.element());
        let ctx = a.context();
        let ab = a.mul(&b).unwrap();
        for k in 0..=3u32 {
            let lhs = power(k, &ab);
            let mut rhs = ctx.zero();
            for i in 0..=k {
                rhs = rhs.add(&power(i, &a).mul(&power(k - i, &b)).unwrap()).unwrap();
            }
            if ctx.prime() == 2 && k > 0 {
                let tau = ctx.tau();
                for i in 0..k {
                    let twist = bockstein(&power(i, &a))
                        .mul(&bockstein(&power(k - 1 - i, &b)))
                        .unwrap()
                        .mul(&tau)
                        .unwrap();
                    rhs = rhs.add(&twist).unwrap();
                }
            }
            if lhs != rhs {
                return Err(format!("P{k} of ({a}) * ({b})"));
            }
        }
        Ok(())
    }));

    checks.push(run_samples("tau-linearity", n, stamp.clone(), |_| {
        let a = s.element();
        let tau = a.context().tau();
        let ta = tau.mul(&a).unwrap();
        if bockstein(&ta) != tau.mul(&bockstein(&a)).unwrap() {
            return Err(format!("beta and tau fail to commute on {a}"));
        }
        for i in 0..=max_q.min(2) {
            if milnor(i, &ta) != tau.mul(&milnor(i, &a)).unwrap() {
                return Err(format!("Q{i} and tau fail to commute on {a}"));
            }
            if power(i, &ta) != tau.mul(&power(i, &a)).unwrap() {
                return Err(format!("P{i} and tau fail to commute on {a}"));
            }
        }
        Ok(())
    }));

    checks.push(run_samples("instability", n, stamp.clone(), |_| {
        let a = s.homogeneous();
        let Ok(d) = a.bidegree() else { return Ok(()) };
        let cutoff = (d.degree / 2 + 1) as u32;
        for k in cutoff..cutoff + 2 {
            let out = power(k, &a);
            if !out.is_zero() {
                return Err(format!("P{k} on degree {} gave {out}", d.degree));
            }
        }
        Ok(())
    }));

    checks.push(run_samples("frobenius", n, stamp.clone(), |_| {
        // On a class of bidegree (2i, i), P^i is the l-th power map.
        let ctx = s.ctx;
        let p = ctx.prime();
        let i = s.rng.random_range(1..=3u32);
        let basis = ctx.basis(Bidegree::new(2 * i as i64, i as i64));
        let terms: Vec<(Monomial, i64)> = basis
            .into_iter()
            .map(|m| (m, s.rng.random_range(0..p as i64)))
            .collect();
        let a = ctx.combine(terms).unwrap();
        if power(i, &a) != a.pow(p) {
            return Err(format!("P{i} differs from the {p}-th power on {a}"));
        }
        Ok(())
    }));

    checks.push(run_samples("operation-shifts", n, stamp.clone(), |_| {
        let a = s.homogeneous();
        let Ok(da) = a.bidegree() else { return Ok(()) };
        let p = a.context().prime();
        let ops = [
            PrimitiveOp::Bockstein,
            PrimitiveOp::Power(1),
            PrimitiveOp::Power(2),
            PrimitiveOp::Milnor(1),
            PrimitiveOp::Milnor(2),
        ];
        for op in ops {
            let out = op.apply(&a);
            match out.bidegree() {
                Ok(dout) if dout == da + op.shift(p) => {}
                Ok(dout) => return Err(format!("{op} moved {da} to {dout}")),
                Err(_) if out.is_zero() => {}
                Err(e) => return Err(e.to_string()),
            }
        }
        Ok(())
    }));

    // Exhaustive sweep: both Milnor implementations on every basis monomial
    // with first degree at most the bound and tau exponent at most 2.
    {
        let pool = s.pool.clone();
        let mut ok = true;
        let mut culprit = String::new();
        'sweep: for mono in &pool {
            let a = ctx.combine([(mono.clone(), 1)]).unwrap();
            for i in 0..=2u32 {
                if milnor(i, &a) != milnor_derivation(i, &a) {
                    ok = false;
                    culprit = format!("Q{i} on {mono}");
                    break 'sweep;
                }
            }
        }
        checks.push(if ok {
            Check::pass(
                "recursion-matches-derivation-exhaustive",
                format!("{} monomials up to degree {}, Q0..Q2", pool.len(), opts.max_degree),
            )
        } else {
            Check::fail("recursion-matches-derivation-exhaustive", culprit)
        });
    }

    Ok(checks)
}
