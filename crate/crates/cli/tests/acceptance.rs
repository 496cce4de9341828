//! End-to-end acceptance suite: one test per shipped guarantee, covering
//! the operation values the tool is built around, the witness certificates,
//! the cross-implementation sweeps, the randomized law suites, the text
//! round trip, and output determinism.

use std::process::Command;
use std::time::{Duration, Instant};

use milnor_cli::certify::{certify, Group};
use milnor_cli::verify::{formula_checks, property_checks, PropertyOptions};
use milnor_core::{
    milnor, milnor_derivation, parse_element, parse_word, Bidegree, Element, RingContext,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u32; 3] = [2, 3, 5];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_milnor"))
}

fn ctx(p: u32, n: u32) -> RingContext {
    RingContext::new(p, n).unwrap()
}

/// y_j^e as an element of the given context.
fn y_power(r: &RingContext, j: u32, e: u32) -> Element {
    let mut ys = vec![0u32; r.rank() as usize];
    ys[(j - 1) as usize] = e;
    r.monomial(0, &ys, &[]).unwrap()
}

#[test]
fn milnor_primitives_act_correctly_on_rank_one_generators() {
    // Q_i(x1) = y1^(l^i), Q_i(y1) = 0, Q_i(tau) = 0 for i = 0, 1, 2.
    for p in PRIMES {
        let r = ctx(p, 1);
        let x1 = r.x(1).unwrap();
        let y1 = r.y(1).unwrap();
        for i in 0..=2u32 {
            let expected = y_power(&r, 1, p.pow(i));
            assert_eq!(milnor(i, &x1), expected, "Q{i}(x1) at l = {p}");
            assert!(milnor(i, &y1).is_zero(), "Q{i}(y1) at l = {p}");
            assert!(milnor(i, &r.tau()).is_zero(), "Q{i}(tau) at l = {p}");
        }
    }
}

#[test]
fn triple_product_expands_to_three_alternating_terms_under_each_q() {
    // Q_k(x1*x2*x3) = y1^(l^k) x2 x3 - y2^(l^k) x1 x3 + y3^(l^k) x1 x2.
    for p in PRIMES {
        let r = ctx(p, 3);
        let triple = parse_element(&r, "x1*x2*x3").unwrap();
        for k in 0..=2u32 {
            let e = p.pow(k);
            let signs: [(u32, [u32; 2], i64); 3] =
                [(1, [2, 3], 1), (2, [1, 3], -1), (3, [1, 2], 1)];
            let mut expected = r.zero();
            for (j, xs, c) in signs {
                let mut ys = [0u32; 3];
                ys[(j - 1) as usize] = e;
                let term = r.monomial(0, &ys, &xs).unwrap().scalar_mul(c);
                expected = expected.add(&term).unwrap();
            }
            let got = milnor(k, &triple);
            assert_eq!(got, expected, "Q{k}(x1*x2*x3) at l = {p}");
            assert_eq!(got.term_count(), 3, "term count at l = {p}");
        }
    }
}

#[test]
fn the_word_q0_q1_q2_produces_the_signed_permutation_sum() {
    // Q0 Q1 Q2 (x1*x2*x3) = sum over sigma in S3 of sgn(sigma)
    // y_sigma(1)^(l^2) y_sigma(2)^l y_sigma(3); six distinct monomials with
    // unit coefficients, hence nonzero.
    let perms: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1),
        ([0, 2, 1], -1),
        ([1, 0, 2], -1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([2, 1, 0], -1),
    ];
    for p in PRIMES {
        let r = ctx(p, 3);
        let triple = parse_element(&r, "x1*x2*x3").unwrap();
        let word = parse_word("Q0,Q1,Q2").unwrap();
        let got = word.apply(&triple);
        let mut expected = r.zero();
        for (sigma, sign) in perms {
            let mut ys = [0u32; 3];
            ys[sigma[0]] = p * p;
            ys[sigma[1]] = p;
            ys[sigma[2]] = 1;
            let term = r.monomial(0, &ys, &[]).unwrap().scalar_mul(sign);
            expected = expected.add(&term).unwrap();
        }
        assert_eq!(got, expected, "permutation sum at l = {p}");
        assert_eq!(got.term_count(), 6, "six distinct monomials at l = {p}");
        assert!(got.terms().all(|(_, c)| c == 1 || c == p - 1), "unit coefficients at l = {p}");
        assert!(!got.is_zero());
    }
}

#[test]
fn witness_certificates_are_nonzero_for_g2_f4_e8() {
    for group in Group::ALL {
        let p = group.prime();
        let cert = certify(group).expect("certificate computes");
        assert!(cert.nonzero, "Q1(u4) must be nonzero for {}", cert.group);
        assert_eq!(cert.prime, p);
        assert_eq!(cert.u4_bidegree, [4, 3]);
        assert_eq!(cert.q1_bidegree, [2 * p as i64 + 3, p as i64 + 2]);
        assert_eq!(cert.term_count, 6);

        // Independent re-computation through both implementations.
        let r = ctx(p, 3);
        let triple = parse_element(&r, "x1*x2*x3").unwrap();
        let via_recursion = milnor(1, &milnor(0, &triple));
        let via_derivation = milnor_derivation(1, &milnor_derivation(0, &triple));
        assert_eq!(via_recursion, via_derivation, "implementations agree at l = {p}");
        assert_eq!(via_recursion.to_string(), cert.q1_of_u4);
        assert!(!via_recursion.is_zero());
    }
}

#[test]
fn witness_certificates_exit_zero_through_the_binary() {
    for group in ["G2", "F4", "E8"] {
        let out = bin()
            .args(["certify", "--group", group, "--format", "json"])
            .output()
            .expect("binary runs");
        assert!(
            out.status.success(),
            "certify {group} exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("\"nonzero\":true"), "{group} certificate: {text}");
    }
}

#[test]
fn milnor_recursion_matches_the_derivation_up_to_degree_twelve() {
    // Exhaustive: every basis monomial of first degree <= 12 with tau
    // exponent <= 2, at rank 3, for l in {2, 3, 5} and Q0, Q1, Q2.
    let start = Instant::now();
    for p in PRIMES {
        let r = ctx(p, 3);
        let pool = r.monomials_below(12, 2);
        assert_eq!(pool.len(), 1365, "pool size at l = {p}");
        for mono in &pool {
            let a = r.combine([(mono.clone(), 1)]).unwrap();
            for i in 0..=2u32 {
                assert_eq!(
                    milnor(i, &a),
                    milnor_derivation(i, &a),
                    "Q{i} on {mono} at l = {p}"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(30),
        "exhaustive sweep took {elapsed:?}, budget is 30s"
    );
}

#[test]
fn property_suites_pass_two_hundred_seeded_samples() {
    let start = Instant::now();
    let opts = PropertyOptions { max_degree: 12, seed: 2026, samples: 200, max_q: 3 };
    for p in PRIMES {
        for check in property_checks(p, &opts).expect("suite runs") {
            assert!(check.passed, "{} failed at l = {p}: {}", check.name, check.detail);
        }
        for check in formula_checks(p, 3).expect("suite runs") {
            assert!(check.passed, "{} failed at l = {p}: {}", check.name, check.detail);
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "property suites took {elapsed:?}, budget is 60s"
    );
}

#[test]
fn algebraic_laws_hold_on_every_basis_monomial_to_degree_twelve() {
    // The unary laws, exhaustively: beta^2 = 0, Q_i^2 = 0, Q_i Q_j = -Q_j Q_i,
    // tau-linearity, instability, and exact bidegree shifts on every basis
    // monomial of first degree <= 12 with tau exponent <= 2; Frobenius on the
    // pure-polynomial bidegree (2i, i) slices.
    use milnor_core::{bockstein, power, PrimitiveOp};
    let start = Instant::now();
    for p in PRIMES {
        let r = ctx(p, 3);
        let tau = r.tau();
        let ops = [
            PrimitiveOp::Bockstein,
            PrimitiveOp::Power(1),
            PrimitiveOp::Power(2),
            PrimitiveOp::Milnor(1),
            PrimitiveOp::Milnor(2),
        ];
        for mono in r.monomials_below(12, 2) {
            let a = r.combine([(mono.clone(), 1)]).unwrap();
            let d = a.bidegree().unwrap();

            assert!(bockstein(&bockstein(&a)).is_zero(), "beta^2 on {mono} at l = {p}");
            for i in 0..=2u32 {
                assert!(milnor(i, &milnor(i, &a)).is_zero(), "Q{i}^2 on {mono} at l = {p}");
            }
            for i in 0..2u32 {
                for j in (i + 1)..=2 {
                    assert_eq!(
                        milnor(i, &milnor(j, &a)),
                        milnor(j, &milnor(i, &a)).neg(),
                        "Q{i}/Q{j} anticommutation on {mono} at l = {p}"
                    );
                }
            }

            let ta = tau.mul(&a).unwrap();
            for op in ops {
                assert_eq!(
                    op.apply(&ta),
                    tau.mul(&op.apply(&a)).unwrap(),
                    "{op} tau-linearity on {mono} at l = {p}"
                );
                let out = op.apply(&a);
                if !out.is_zero() {
                    assert_eq!(
                        out.bidegree().unwrap(),
                        d + op.shift(p),
                        "{op} shift on {mono} at l = {p}"
                    );
                }
            }

            let cutoff = (d.degree / 2 + 1) as u32;
            for k in cutoff..cutoff + 2 {
                assert!(power(k, &a).is_zero(), "P{k} on degree {} at l = {p}", d.degree);
            }
        }

        // Frobenius: P^i is the l-th power map on every basis class of
        // bidegree (2i, i).
        for i in 1..=6u32 {
            for mono in r.basis(Bidegree::new(2 * i as i64, i as i64)) {
                let a = r.combine([(mono.clone(), 1)]).unwrap();
                assert_eq!(power(i, &a), a.pow(p), "Frobenius on {mono} at l = {p}");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "exhaustive law sweep took {elapsed:?}, budget is 60s"
    );
}

/// A random string the expression grammar accepts.
fn random_expression(rng: &mut ChaCha8Rng, rank: u32, depth: u32) -> String {
    if depth == 0 {
        return match rng.random_range(0..6) {
            0 => rng.random_range(0..100u32).to_string(),
            1 => format!("x{}", rng.random_range(1..=rank)),
            2 => format!("y{}", rng.random_range(1..=rank)),
            3 => format!("y{}^{}", rng.random_range(1..=rank), rng.random_range(0..6u32)),
            4 => format!("tau^{}", rng.random_range(0..4u32)),
            _ => "tau".to_string(),
        };
    }
    match rng.random_range(0..4) {
        0 => {
            let k = rng.random_range(1..=3);
            (0..k)
                .map(|_| random_expression(rng, rank, depth - 1))
                .collect::<Vec<_>>()
                .join("*")
        }
        1 => {
            let k = rng.random_range(1..=3);
            let mut out = String::new();
            for i in 0..k {
                if i > 0 {
                    out.push_str(if rng.random() { " + " } else { " - " });
                }
                out.push_str(&random_expression(rng, rank, depth - 1));
            }
            out
        }
        2 => format!("({})", random_expression(rng, rank, depth - 1)),
        _ => format!("-{}", random_expression(rng, rank, depth - 1)),
    }
}

#[test]
fn a_thousand_grammar_valid_expressions_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..1000 {
        let p = PRIMES[rng.random_range(0..PRIMES.len())];
        let rank = rng.random_range(1..=3u32);
        let r = ctx(p, rank);
        let source = random_expression(&mut rng, rank, 3);
        let parsed = parse_element(&r, &source)
            .unwrap_or_else(|e| panic!("trial {trial}: {e} on {source:?}"));
        let printed = parsed.to_string();
        let reparsed = parse_element(&r, &printed)
            .unwrap_or_else(|e| panic!("trial {trial}: canonical {printed:?} fails: {e}"));
        assert_eq!(parsed, reparsed, "trial {trial}: {source:?} -> {printed:?}");
        assert_eq!(printed, reparsed.to_string(), "printing must be stable");
    }
}

#[test]
fn verify_and_certify_are_byte_identical_across_runs() {
    let verify_args = ["verify", "-l", "3", "--format", "json"];
    let first = bin().args(verify_args).output().expect("binary runs");
    let second = bin().args(verify_args).output().expect("binary runs");
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "verify output must be deterministic");

    for group in ["G2", "F4", "E8"] {
        let args = ["certify", "--group", group, "--format", "json"];
        let first = bin().args(args).output().expect("binary runs");
        let second = bin().args(args).output().expect("binary runs");
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "certify {group} must be deterministic");
    }
}

#[test]
fn geometric_realization_stays_out_of_scope() {
    // The certificate certifies one fact: Q1(u4) is nonzero, so u4 cannot be
    // the class of an algebraic cycle.  The tool deliberately does not model
    // torsors, quotient varieties, or any geometric realization of the
    // witness, and the conclusion must not drift into claiming that it does.
    let cert = certify(Group::G2).unwrap();
    assert!(cert.conclusion.contains("cannot be algebraic"));
    for overclaim in ["variety", "torsor", "quotient", "geometric", "exists"] {
        assert!(
            !cert.conclusion.contains(overclaim),
            "conclusion overclaims ({overclaim}): {}",
            cert.conclusion
        );
    }
    // The computation itself stays inside the bigraded ring.
    let q1 = parse_element(&ctx(2, 3), &cert.q1_of_u4).unwrap();
    assert_eq!(q1.bidegree(), Ok(Bidegree::new(7, 4)));
}
