//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every check compares library output with the reference arithmetic in
//! `common`, or with values fixed by construction.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::{
    act, add, anick_w, compose, degree, letter, linear_target, mul, poly, scale, smith_target, substitute,
    terms, word_endo, Terms,
};
use freetame::bimodule::{linmat_elementary_reduce, BiOpPoly, InvertibleLinMat, LinMat, Reduction};
use freetame::cli::{parse_biop, parse_map, parse_poly};
use freetame::endo::{certify, Endomorphism};
use freetame::freealg::{Alphabet, Field, NcPoly, Scalar};
use freetame::membership::{anick_generator, random_member, subalgebra_membership, Membership, MembershipQuery};
use freetame::random::{self, rng};
use freetame::smith::{
    anick_aut, anick_to_smith, h_alphabet, make_smith_aut, recognize_smith, smith_factorization, Recognition,
    SmithData,
};

const Q: Field = Field::Rationals;
const F5: Field = Field::Prime(5);

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn identity(alphabet: &Alphabet, field: Field) -> Endomorphism {
    Endomorphism::identity(alphabet, field)
}

fn smith_identity() -> Check {
    let mut steps = 0;
    let mut library = 0.0;
    for field in [Q, F5] {
        for seed in 0..200u64 {
            let d = random::smith_data(&mut rng(seed), field);
            let start = Instant::now();
            let w = smith_factorization(&d).map_err(|e| format!("{field} seed {seed}: {e}"))?;
            library += start.elapsed().as_secs_f64();
            let oracle = smith_target(&d);
            if seed % 4 == 0 {
                ensure(word_endo(&w) == oracle, || format!("{field} seed {seed}: word differs from formula"))?;
            }
            ensure(w.eval() == oracle, || format!("{field} seed {seed}: eval differs from formula"))?;
            let stab = make_smith_aut(&d).and_then(|c| c.forward().stabilize("t")).map_err(|e| e.to_string())?;
            ensure(stab == oracle, || format!("{field} seed {seed}: stabilized map differs"))?;
            steps += w.len();
        }
    }
    Ok(format!("400 instances, {steps} steps, factorization {library:.1}s"))
}

fn frozen_orientation() -> Check {
    let one_op = BiOpPoly::one(Q);
    let h = NcPoly::generator(&h_alphabet(), Q, 1);
    let d = SmithData::new(one_op.clone(), one_op, h).map_err(|e| e.to_string())?;
    let w = smith_factorization(&d).map_err(|e| e.to_string())?;
    let a = Alphabet::xyzt();
    let two = Scalar::from_i64(Q, 2);
    let minus = Scalar::from_i64(Q, -1);
    let expected = [
        add(&scale(&letter(0, Q), &two), &letter(1, Q)),
        scale(&letter(0, Q), &minus),
        letter(2, Q),
        letter(3, Q),
    ];
    let expected =
        Endomorphism::new(&a, Q, expected.iter().map(|p| poly(&a, Q, p)).collect()).map_err(|e| e.to_string())?;
    ensure(word_endo(&w) == expected, || format!("reference evaluation gives {}", word_endo(&w)))?;
    ensure(w.eval() == expected, || format!("library evaluation gives {}", w.eval()))?;
    let text = w.eval().to_string();
    ensure(text == "x -> 2*x + y; y -> -x; z -> z; t -> t", || text.clone())?;
    Ok(text)
}

fn anick_suite() -> Check {
    let a = Alphabet::xyz();
    let mut count = 0;
    for field in [Q, F5] {
        for seed in 0..100u64 {
            let g = random::anick_data(&mut rng(1000 + seed), field, 3);
            let at = |msg: &str| format!("{field} seed {seed}: {msg}");
            let cert = anick_aut(&g).map_err(|e| at(&e.to_string()))?;
            let w = anick_w(field);
            let z = letter(2, field);
            let fwd: Vec<Terms> = cert.forward().images().iter().map(terms).collect();
            ensure(substitute(&w, &fwd) == w, || at("xz - zy moves"))?;
            let big_g = substitute(&terms(&g.g), &[w.clone(), z.clone()]);
            let formula = |sign: i64| {
                let gs = scale(&big_g, &Scalar::from_i64(field, sign));
                let images = [
                    add(&letter(0, field), &mul(&z, &gs)),
                    add(&letter(1, field), &mul(&gs, &z)),
                    z.clone(),
                ];
                Endomorphism::new(&a, field, images.iter().map(|p| poly(&a, field, p)).collect()).unwrap()
            };
            ensure(*cert.forward() == formula(1), || at("forward differs from formula"))?;
            ensure(*cert.inverse() == formula(-1), || at("inverse differs from formula"))?;
            let smith = anick_to_smith(&g).and_then(|s| make_smith_aut(&s)).map_err(|e| at(&e.to_string()))?;
            ensure(smith.forward() == cert.forward(), || at("Smith form differs"))?;
            let id = identity(&a, field);
            ensure(compose(cert.forward(), cert.inverse()) == id, || at("forward * inverse is not 1"))?;
            ensure(compose(cert.inverse(), cert.forward()) == id, || at("inverse * forward is not 1"))?;
            count += 1;
        }
    }
    Ok(format!("{count} maps"))
}

fn recognition() -> Check {
    let mut recovered = 0;
    for seed in 0..100u64 {
        let field = if seed % 2 == 0 { Q } else { F5 };
        let d = random::coprime_smith_data(&mut rng(2000 + seed), field);
        let phi = make_smith_aut(&d).map_err(|e| e.to_string())?;
        match recognize_smith(&phi, &d.a, &d.b, None) {
            Ok(Recognition::Recognized(h)) if h == d.h => recovered += 1,
            other => return Err(format!("{field} seed {seed}: {other:?}, expected {}", d.h)),
        }
    }
    let a = Alphabet::xyz();
    let mut rejected = 0;
    for seed in 0..20u64 {
        let field = if seed % 2 == 0 { Q } else { F5 };
        let d = random::coprime_smith_data(&mut rng(3000 + seed), field);
        let phi = make_smith_aut(&d).map_err(|e| e.to_string())?;
        let (x, y, z) = (letter(0, field), letter(1, field), letter(2, field));
        let zyz = mul(&mul(&z, &y), &z);
        let zxz = mul(&mul(&z, &x), &z);
        let minus = Scalar::from_i64(field, -1);
        let (var, addend) = if seed % 3 == 1 { (1, zxz) } else { (0, zyz) };
        let step = |sign: &Scalar| {
            let mut images: Vec<Terms> = (0..3).map(|i| letter(i, field)).collect();
            images[var] = add(&images[var], &scale(&addend, sign));
            Endomorphism::new(&a, field, images.iter().map(|p| poly(&a, field, p)).collect()).unwrap()
        };
        let e = certify(step(&Scalar::one(field)), step(&minus)).map_err(|e| e.to_string())?;
        let perturbed = if seed % 3 == 2 { e.compose(&phi) } else { phi.compose(&e) }.map_err(|e| e.to_string())?;
        let u = add(&act(&d.a, &x, 2), &act(&d.b, &y, 2));
        let images: Vec<Terms> = perturbed.forward().images().iter().map(terms).collect();
        ensure(substitute(&u, &images) != u, || format!("seed {seed}: perturbation fixes u"))?;
        match recognize_smith(&perturbed, &d.a, &d.b, None) {
            Ok(Recognition::NotInForm(_)) => rejected += 1,
            other => return Err(format!("{field} seed {seed}: perturbed map gave {other:?}")),
        }
    }
    Ok(format!("{recovered} recovered, {rejected} rejected"))
}

/// `z^k0 f z^k1 ... f z^km`.
fn product_terms(f: &Terms, p: &[usize], field: Field) -> Terms {
    let z_pow = |k: usize| Terms::from([(vec![2; k], Scalar::one(field))]);
    let mut acc = z_pow(p[0]);
    for &k in &p[1..] {
        acc = mul(&mul(&acc, f), &z_pow(k));
    }
    acc
}

/// Exponent lists of every product of degree at most `bound` with `f`
/// of degree 2.
fn products(bound: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, left: usize, out: &mut Vec<Vec<usize>>) {
        for k in 0..=left {
            prefix.push(k);
            out.push(prefix.clone());
            if left - k >= 2 {
                rec(prefix, left - k - 2, out);
            }
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), bound, &mut out);
    out
}

/// Each `x` is followed by `z` and each `y` follows a `z`.
fn anick_shape(w: &[usize]) -> bool {
    w.iter().enumerate().all(|(i, &l)| match l {
        0 => w.get(i + 1) == Some(&2),
        1 => i > 0 && w[i - 1] == 2,
        _ => true,
    })
}

fn membership() -> Check {
    let a = Alphabet::xyz();
    let f = anick_generator(Q);
    let ft = terms(&f);
    let mut checked = 0;
    for seed in 0..100u64 {
        let bound = 2 + (seed as usize % 5);
        let rm = random_member(&f, bound, 1 + seed as usize % 4, seed).map_err(|e| e.to_string())?;
        let q = MembershipQuery::new(f.clone(), rm.value.clone(), bound).map_err(|e| e.to_string())?;
        let Membership::Member(w) = subalgebra_membership(&q).map_err(|e| e.to_string())? else {
            return Err(format!("seed {seed}: {} reported as non-member", rm.value));
        };
        let mut value = Terms::new();
        for (c, p) in &w.terms {
            value = add(&value, &scale(&product_terms(&ft, p, Q), c));
        }
        ensure(poly(&a, Q, &value) == rm.value, || format!("seed {seed}: witness does not rebuild R"))?;
        ensure(w.eval(&f).ok() == Some(rm.value.clone()), || format!("seed {seed}: library eval differs"))?;
        checked += 1;
    }
    for p in products(6) {
        let t = product_terms(&ft, &p, Q);
        ensure(t.keys().all(|w| anick_shape(w)), || format!("product {p:?} breaks the shape"))?;
    }
    for (i, name) in ["x", "y"].into_iter().enumerate() {
        ensure(!anick_shape(&[i]), || format!("{name} has the product shape"))?;
        let r = NcPoly::var(&a, Q, name).map_err(|e| e.to_string())?;
        let q = MembershipQuery::new(f.clone(), r, 6).map_err(|e| e.to_string())?;
        match subalgebra_membership(&q) {
            Ok(Membership::NotMember) => {}
            other => return Err(format!("R = {name}: {other:?}")),
        }
    }
    Ok(format!("{checked} witnesses, x and y rejected at bound 6"))
}

fn endomorphism_algebra() -> Check {
    let a = Alphabet::xyz();
    for seed in 0..500u64 {
        let field = if seed % 2 == 0 { Q } else { F5 };
        let r = &mut rng(4000 + seed);
        let at = |law: &str| format!("{law}, {field} seed {seed}");

        let (p, q, s) = (
            random::endomorphism(r, &a, field, 2, 3),
            random::endomorphism(r, &a, field, 2, 3),
            random::endomorphism(r, &a, field, 2, 3),
        );
        let left = p.compose(&q).and_then(|pq| pq.compose(&s)).map_err(|e| e.to_string())?;
        let right = q.compose(&s).and_then(|qs| p.compose(&qs)).map_err(|e| e.to_string())?;
        ensure(left == right, || at("associativity"))?;
        ensure(left == compose(&compose(&p, &q), &s), || at("associativity oracle"))?;

        let w = random::tame_word(r, &a, field, 2);
        let (fwd, inv) = (w.eval(), w.inverse().eval());
        let c = certify(fwd.clone(), inv.clone()).map_err(|e| at(&e.to_string()))?;
        let back = certify(inv.clone(), fwd.clone()).map_err(|e| at(&e.to_string()))?;
        ensure(c.inverted() == back, || at("certificate symmetry"))?;
        let id = identity(&a, field);
        ensure(compose(&fwd, &inv) == id && compose(&inv, &fwd) == id, || at("inverse oracle"))?;

        let pq = p.compose(&q).and_then(|e| e.stabilize("t")).map_err(|e| e.to_string())?;
        let (ps, qs) = (p.stabilize("t").unwrap(), q.stabilize("t").unwrap());
        ensure(pq == ps.compose(&qs).unwrap(), || at("stabilize functoriality"))?;
        ensure(pq == compose(&ps, &qs), || at("stabilize oracle"))?;
        ensure(pq.image_of("t").map(|t| t.is_generator(3)).unwrap_or(false), || at("t moves"))?;

        let (w1, w2) = (random::tame_word(r, &a, field, 2), random::tame_word(r, &a, field, 2));
        let cat = w1.concat(&w2).map_err(|e| e.to_string())?;
        ensure(cat.eval() == w1.eval().compose(&w2.eval()).unwrap(), || at("concatenation"))?;
        ensure(word_endo(&cat) == compose(&word_endo(&w1), &word_endo(&w2)), || at("concatenation oracle"))?;
    }
    Ok("500 samples per law".into())
}

fn arithmetic() -> Check {
    let a = Alphabet::xyz();
    for seed in 0..1000u64 {
        let field = if seed % 2 == 0 { Q } else { F5 };
        let r = &mut rng(5000 + seed);
        let p = random::nonzero_poly(r, &a, field, 4, 4);
        let q = random::nonzero_poly(r, &a, field, 4, 4);
        let pq = &p * &q;
        let oracle = mul(&terms(&p), &terms(&q));
        ensure(terms(&pq) == oracle, || format!("product differs, seed {seed}"))?;
        let (dp, dq) = (p.degree().finite().unwrap(), q.degree().finite().unwrap());
        ensure(pq.degree().finite() == Some(dp + dq), || format!("degree not additive, seed {seed}"))?;
        ensure(degree(&oracle) == Some(dp + dq), || format!("oracle degree, seed {seed}"))?;
    }
    for seed in 0..500u64 {
        let field = if seed % 2 == 0 { Q } else { F5 };
        let r = &mut rng(6000 + seed);
        let p = random::poly(r, &a, field, 3, 4);
        let q = random::poly(r, &a, field, 3, 4);
        let images: Vec<NcPoly> = (0..3).map(|_| random::poly(r, &a, field, 2, 3)).collect();
        let it: Vec<Terms> = images.iter().map(terms).collect();
        let sub = |x: &NcPoly| x.substitute(&images).unwrap();
        ensure(sub(&(&p * &q)) == &sub(&p) * &sub(&q), || format!("substitute not multiplicative, seed {seed}"))?;
        ensure(sub(&(&p + &q)) == &sub(&p) + &sub(&q), || format!("substitute not additive, seed {seed}"))?;
        ensure(terms(&sub(&p)) == substitute(&terms(&p), &it), || format!("substitute oracle, seed {seed}"))?;
    }
    let ext = Alphabet::new(["x", "y", "z", "t2"]).unwrap();
    for seed in 0..500u64 {
        let field = if seed % 2 == 0 { Q } else { F5 };
        let r = &mut rng(7000 + seed);
        let p = random::poly(r, &ext, field, 5, 6);
        let back = parse_poly(&p.to_string(), &ext, field).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(back == p, || format!("poly round trip, seed {seed}: {p}"))?;
        let e = random::endomorphism(r, &a, field, 3, 3);
        let back = parse_map(&e.to_string(), &a, field).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(back == e, || format!("map round trip, seed {seed}: {e}"))?;
        let b = random::biop(r, field, 4);
        let back = parse_biop(&b.to_string(), field).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(back == b, || format!("operator round trip, seed {seed}: {b}"))?;
    }
    Ok("1000 products, 500 substitutions, 500 round trips of each kind".into())
}

fn linear_reduction() -> Check {
    let a = Alphabet::xyzt();
    let mut reduced = 0;
    for seed in 0..16u64 {
        let field = if seed % 2 == 0 { Q } else { F5 };
        let m = random::elementary_product(&mut rng(8000 + seed), field, 2 + seed as usize % 4, 2);
        match linmat_elementary_reduce(&m, &a).map_err(|e| e.to_string())? {
            Reduction::Reduced(w) => {
                let oracle = linear_target(m.matrix(), &a);
                ensure(word_endo(&w) == oracle, || format!("seed {seed}: word differs from matrix"))?;
                ensure(w.eval() == m.matrix().apply(&a).unwrap(), || format!("seed {seed}: eval differs"))?;
                reduced += 1;
            }
            Reduction::Stuck => return Err(format!("seed {seed}: elementary product reported stuck")),
        }
    }
    let op = |s: &str| parse_biop(s, Q).unwrap();
    let m = LinMat::new([[op("1 + zl*zr"), op("zl^2")], [op("-zr^2"), op("1 - zl*zr")]]).unwrap();
    let inv = LinMat::new([[op("1 - zl*zr"), op("-zl^2")], [op("zr^2"), op("1 + zl*zr")]]).unwrap();
    let cohn = InvertibleLinMat::new(m, inv).map_err(|e| e.to_string())?;
    match linmat_elementary_reduce(&cohn, &a).map_err(|e| e.to_string())? {
        Reduction::Stuck => Ok(format!("{reduced} products reduced, fixture stuck")),
        Reduction::Reduced(w) => Err(format!("fixture reduced to {} steps", w.len())),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("smith identity", smith_identity),
        ("frozen orientation", frozen_orientation),
        ("anick", anick_suite),
        ("recognition", recognition),
        ("membership", membership),
        ("endomorphism algebra", endomorphism_algebra),
        ("arithmetic", arithmetic),
        ("linear reduction", linear_reduction),
    ];
    let only: Option<usize> = std::env::args().nth(1).and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
