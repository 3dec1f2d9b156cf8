//! Seeded property suites behind `freetame selftest`.

use rand::Rng;
use rayon::prelude::*;

use crate::bimodule::{biop_gcd, linmat_elementary_reduce, BiOpPoly, InvertibleLinMat, LinMat, Reduction};
use crate::endo::{certify, ElementaryStep, Endomorphism, TameWord};
use crate::freealg::{left_zpoly_divisor, Alphabet, Field, NcPoly};
use crate::membership::{anick_generator, random_member, subalgebra_membership, Membership, MembershipQuery};
use crate::random::{self, Rng64};
use crate::smith::{
    anick_aut, anick_invariant, anick_to_smith, make_smith_aut, recognize_smith, smith_factorization,
    smith_word, Recognition, SmithData, FRESH,
};

use super::json::SuiteJson;
use super::parse::{parse_biop, parse_map, parse_poly};
use super::{Outcome, SessionConfig, EXIT_OK, EXIT_VERIFICATION_FAILED};

/// Deliberate bugs used to check that the suites catch them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Negates the first addend of every Smith word before checking it.
    SignFlip,
}

/// Samples per suite family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelftestSizes {
    pub arithmetic: usize,
    pub algebra: usize,
    pub smith: usize,
    pub anick: usize,
    pub recognition: usize,
    pub membership: usize,
    pub linear: usize,
}

impl Default for SelftestSizes {
    fn default() -> SelftestSizes {
        SelftestSizes {
            arithmetic: 200,
            algebra: 100,
            smith: 40,
            anick: 20,
            recognition: 20,
            membership: 20,
            linear: 12,
        }
    }
}

impl SelftestSizes {
    pub fn scaled(self, k: usize) -> SelftestSizes {
        SelftestSizes {
            arithmetic: self.arithmetic * k,
            algebra: self.algebra * k,
            smith: self.smith * k,
            anick: self.anick * k,
            recognition: self.recognition * k,
            membership: self.membership * k,
            linear: self.linear * k,
        }
    }
}

type Check = fn(&mut Rng64, usize, Option<Fault>) -> Result<(), String>;

struct Suite {
    name: &'static str,
    samples: fn(&SelftestSizes) -> usize,
    check: Check,
}

fn field_for(i: usize) -> Field {
    if i.is_multiple_of(2) {
        Field::Rationals
    } else {
        Field::Prime(5)
    }
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ring_axioms(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let f = field_for(i);
    let a = Alphabet::xyz();
    let [p, q, r] = [0; 3].map(|_| random::poly(rng, &a, f, 3, 4));
    ensure(&(&p * &q) * &r == &p * &(&q * &r), || format!("mul assoc: {p} | {q} | {r}"))?;
    ensure(&p * &(&q + &r) == &(&p * &q) + &(&p * &r), || format!("left distributivity: {p} | {q} | {r}"))?;
    ensure(&(&q + &r) * &p == &(&q * &p) + &(&r * &p), || format!("right distributivity: {p} | {q} | {r}"))?;
    ensure(&p + &q == &q + &p, || format!("add commutativity: {p} | {q}"))?;
    let same = p.clone();
    ensure((&p - &same).is_zero(), || format!("p - p: {p}"))
}

fn degree_additivity(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let f = field_for(i);
    let a = Alphabet::xyz();
    let p = random::nonzero_poly(rng, &a, f, 4, 4);
    let q = random::nonzero_poly(rng, &a, f, 4, 4);
    ensure((&p * &q).degree() == p.degree() + q.degree(), || format!("{p} | {q}"))
}

fn substitute_hom(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let f = field_for(i);
    let a = Alphabet::xyz();
    let p = random::poly(rng, &a, f, 3, 3);
    let q = random::poly(rng, &a, f, 3, 3);
    let images: Vec<NcPoly> = (0..3).map(|_| random::poly(rng, &a, f, 2, 3)).collect();
    let s = |x: &NcPoly| x.substitute(&images).map_err(err);
    ensure(s(&(&p * &q))? == &s(&p)? * &s(&q)?, || format!("product: {p} | {q}"))?;
    ensure(s(&(&p + &q))? == &s(&p)? + &s(&q)?, || format!("sum: {p} | {q}"))
}

fn parse_print(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let f = field_for(i);
    let a = Alphabet::xyz();
    let p = random::poly(rng, &a, f, 4, 5);
    ensure(parse_poly(&p.to_string(), &a, f).map_err(err)? == p, || format!("poly {p}"))?;
    let b = random::biop(rng, f, 3);
    ensure(parse_biop(&b.to_string(), f).map_err(err)? == b, || format!("operator {b}"))?;
    let e = random::endomorphism(rng, &a, f, 3, 3);
    ensure(parse_map(&e.to_string(), &a, f).map_err(err)? == e, || format!("map {e}"))
}

fn small_endo(rng: &mut Rng64, f: Field) -> Endomorphism {
    random::endomorphism(rng, &Alphabet::xyz(), f, 2, 3)
}

fn compose_assoc(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let f = field_for(i);
    let [a, b, c] = [0; 3].map(|_| small_endo(rng, f));
    let l = a.compose(&b).and_then(|ab| ab.compose(&c)).map_err(err)?;
    let r = b.compose(&c).and_then(|bc| a.compose(&bc)).map_err(err)?;
    ensure(l == r, || format!("{a} | {b} | {c}"))
}

fn certificate_symmetry(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let f = field_for(i);
    let w = random::tame_word(rng, &Alphabet::xyz(), f, 3);
    let (fw, inv) = (w.eval(), w.inverse().eval());
    ensure(certify(fw.clone(), inv.clone()).is_ok(), || format!("inverse pair rejected: {fw} | {inv}"))?;
    ensure(certify(inv, fw.clone()).is_ok(), || format!("swapped pair rejected: {fw}"))?;
    let other = small_endo(rng, f);
    ensure(
        certify(fw.clone(), other.clone()).is_ok() == certify(other.clone(), fw.clone()).is_ok(),
        || format!("asymmetric verdict: {fw} | {other}"),
    )
}

fn step_inverse(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let f = field_for(i);
    let s = random::elementary_step(rng, &Alphabet::xyz(), f, 3, 3);
    let c = s.to_endo().compose(&s.inverse().to_endo()).map_err(err)?;
    ensure(c.is_identity(), || format!("{} -> {}", s.var(), s.image()))
}

fn stabilize_functor(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let f = field_for(i);
    let (a, b) = (small_endo(rng, f), small_endo(rng, f));
    let l = a.compose(&b).and_then(|ab| ab.stabilize(FRESH)).map_err(err)?;
    let r = a
        .stabilize(FRESH)
        .and_then(|sa| sa.compose(&b.stabilize(FRESH)?))
        .map_err(err)?;
    ensure(l == r, || format!("{a} | {b}"))
}

fn word_concat(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let f = field_for(i);
    let a = Alphabet::xyz();
    let w1 = random::tame_word(rng, &a, f, 3);
    let w2 = random::tame_word(rng, &a, f, 3);
    let l = w1.concat(&w2).map_err(err)?.eval();
    let r = w1.eval().compose(&w2.eval()).map_err(err)?;
    ensure(l == r, || format!("{} | {}", w1.eval(), w2.eval()))
}

/// The Smith word, mutated when a fault is injected.
fn smith_word_under(d: &SmithData, fault: Option<Fault>) -> Result<TameWord, String> {
    if fault.is_none() {
        return smith_factorization(d).map_err(err);
    }
    let w = smith_word(d, &Alphabet::xyzt()).map_err(err)?;
    let mut steps = w.steps().to_vec();
    let s = &steps[0];
    steps[0] = ElementaryStep::new(s.var(), s.unit().clone(), -s.addend()).map_err(err)?;
    TameWord::new(w.alphabet(), w.field(), steps).map_err(err)
}

fn smith_identity(rng: &mut Rng64, i: usize, fault: Option<Fault>) -> Result<(), String> {
    let d = random::smith_data(rng, field_for(i));
    let target = make_smith_aut(&d)
        .and_then(|c| c.forward().stabilize(FRESH))
        .map_err(err)?;
    let w = smith_word_under(&d, fault)?;
    w.check_against(&target)
        .map_err(|m| format!("a = {}, b = {}, h = {}: {m}", d.a, d.b, d.h))
}

fn frozen_orientation(_: &mut Rng64, _: usize, fault: Option<Fault>) -> Result<(), String> {
    let f = Field::Rationals;
    let d = SmithData::new(BiOpPoly::one(f), BiOpPoly::one(f), parse_poly("t", &crate::smith::h_alphabet(), f).map_err(err)?)
        .map_err(err)?;
    let got = smith_word_under(&d, fault)?.eval().to_string();
    ensure(got == "x -> 2*x + y; y -> -x; z -> z; t -> t", || got)
}

fn anick(rng: &mut Rng64, i: usize, fault: Option<Fault>) -> Result<(), String> {
    let f = field_for(i);
    let g = random::anick_data(rng, f, 3);
    let c = anick_aut(&g).map_err(err)?;
    let w = anick_invariant(&Alphabet::xyz(), f).map_err(err)?;
    ensure(c.forward().apply(&w).map_err(err)? == w, || format!("xz - zy moved, g = {}", g.g))?;
    let s = anick_to_smith(&g).map_err(err)?;
    ensure(make_smith_aut(&s).map_err(err)?.forward() == c.forward(), || format!("Smith form differs, g = {}", g.g))?;
    let target = c.forward().stabilize(FRESH).map_err(err)?;
    smith_word_under(&s, fault)?
        .check_against(&target)
        .map_err(|m| format!("g = {}: {m}", g.g))
}

fn recognition(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let d = random::coprime_smith_data(rng, field_for(i));
    let c = make_smith_aut(&d).map_err(err)?;
    match recognize_smith(&c, &d.a, &d.b, None).map_err(err)? {
        Recognition::Recognized(h) if h == d.h => Ok(()),
        other => Err(format!("a = {}, b = {}, h = {}: {other:?}", d.a, d.b, d.h)),
    }
}

fn membership(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let fld = field_for(i);
    let f = anick_generator(fld);
    let bound = rng.gen_range(0..=6);
    let m = random_member(&f, bound, rng.gen_range(0..=4), rng.gen()).map_err(err)?;
    let q = MembershipQuery::new(f.clone(), m.value.clone(), bound).map_err(err)?;
    match subalgebra_membership(&q).map_err(err)? {
        Membership::Member(w) if w.eval(&f).map_err(err)? == m.value => {}
        other => return Err(format!("R = {}: {other:?}", m.value)),
    }
    let x = NcPoly::generator(f.alphabet(), fld, rng.gen_range(0..2));
    let q = MembershipQuery::new(f, x.clone(), 6).map_err(err)?;
    ensure(subalgebra_membership(&q).map_err(err)? == Membership::NotMember, || format!("{x} accepted"))
}

fn linear_hom(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let f = field_for(i);
    let a = Alphabet::xyz();
    let entries = |rng: &mut Rng64| [[0; 2]; 2].map(|r| r.map(|_| random::biop(rng, f, 2)));
    let m = LinMat::new(entries(rng)).map_err(err)?;
    let n = LinMat::new(entries(rng)).map_err(err)?;
    let l = m.mul(&n).apply(&a).map_err(err)?;
    let r = n.apply(&a).and_then(|an| an.compose(&m.apply(&a)?)).map_err(err)?;
    ensure(l == r, || format!("{m} | {n}"))
}

fn linear_reduce(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let f = field_for(i);
    let a = Alphabet::xyzt();
    let m = if i == 0 {
        let p = |s: &str| parse_biop(s, f).map_err(err);
        InvertibleLinMat::new(
            LinMat::new([[p("1 + zl*zr")?, p("zl^2")?], [p("-zr^2")?, p("1 - zl*zr")?]]).map_err(err)?,
            LinMat::new([[p("1 - zl*zr")?, p("-zl^2")?], [p("zr^2")?, p("1 + zl*zr")?]]).map_err(err)?,
        )
        .map_err(err)?
    } else {
        let k = rng.gen_range(1..=4);
        random::elementary_product(rng, f, k, 2)
    };
    match linmat_elementary_reduce(&m, &a).map_err(err)? {
        Reduction::Reduced(w) if i == 0 => Err(format!("non-reducible fixture reduced to {} steps", w.len())),
        Reduction::Reduced(w) => {
            let target = m.matrix().apply(&a).map_err(err)?;
            w.check_against(&target).map_err(|e| format!("{}: {e}", m.matrix()))
        }
        Reduction::Stuck if i == 0 => Ok(()),
        Reduction::Stuck => Err(format!("elementary product stuck: {}", m.matrix())),
    }
}

fn gcd(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let f = field_for(i);
    let (a, b, c) = (random::nonzero_biop(rng, f, 2), random::biop(rng, f, 2), random::nonzero_biop(rng, f, 1));
    let (ac, bc) = (a.mul(&c), b.mul(&c));
    let g = biop_gcd(&ac, &bc).map_err(err)?;
    ensure(ac.exact_div(&g).is_some() && bc.exact_div(&g).is_some(), || format!("gcd {g} does not divide {ac}, {bc}"))?;
    ensure(g.exact_div(&c.monic()).is_some(), || format!("common factor {c} missing from gcd {g}"))
}

fn zdivisor(rng: &mut Rng64, i: usize, _: Option<Fault>) -> Result<(), String> {
    let f = field_for(i);
    let a = Alphabet::xyz();
    let z = NcPoly::generator(&a, f, 2);
    let mut p = &z + &NcPoly::constant(&a, random::scalar(rng, f));
    if rng.gen_bool(0.5) {
        p = &p * &(&z + &NcPoly::constant(&a, random::scalar(rng, f)));
    }
    let mut g = random::nonzero_poly(rng, &a, f, 3, 3);
    if g.is_constant() {
        g = &g + &NcPoly::generator(&a, f, 0);
    }
    let prod = &p * &g;
    let dmax = prod.degree().finite().unwrap_or(0);
    match left_zpoly_divisor(&prod, dmax).map_err(err)? {
        Some(d) => ensure(&d.p * &d.q == prod && d.p.degree().finite() >= Some(1), || format!("bad divisor of {prod}")),
        None => Err(format!("no left divisor found for {prod}")),
    }
}

fn suites() -> Vec<Suite> {
    vec![
        Suite { name: "ring-axioms", samples: |s| s.arithmetic, check: ring_axioms },
        Suite { name: "degree-additivity", samples: |s| s.arithmetic, check: degree_additivity },
        Suite { name: "substitute-homomorphism", samples: |s| s.arithmetic, check: substitute_hom },
        Suite { name: "parse-print", samples: |s| s.arithmetic, check: parse_print },
        Suite { name: "compose-associativity", samples: |s| s.algebra, check: compose_assoc },
        Suite { name: "certificate-symmetry", samples: |s| s.algebra, check: certificate_symmetry },
        Suite { name: "step-inverse", samples: |s| s.algebra, check: step_inverse },
        Suite { name: "stabilize-functoriality", samples: |s| s.algebra, check: stabilize_functor },
        Suite { name: "word-concatenation", samples: |s| s.algebra, check: word_concat },
        Suite { name: "frozen-orientation", samples: |_| 1, check: frozen_orientation },
        Suite { name: "smith-identity", samples: |s| s.smith, check: smith_identity },
        Suite { name: "anick", samples: |s| s.anick, check: anick },
        Suite { name: "recognition", samples: |s| s.recognition, check: recognition },
        Suite { name: "membership", samples: |s| s.membership, check: membership },
        Suite { name: "linear-multiplicativity", samples: |s| s.algebra, check: linear_hom },
        Suite { name: "linear-reduction", samples: |s| s.linear, check: linear_reduce },
        Suite { name: "operator-gcd", samples: |s| s.algebra, check: gcd },
        Suite { name: "z-divisor", samples: |s| s.algebra, check: zdivisor },
    ]
}

/// Names of the suites, in report order.
pub fn suite_names() -> Vec<&'static str> {
    suites().iter().map(|s| s.name).collect()
}

fn run_suite(index: usize, suite: &Suite, seed: u64, sizes: &SelftestSizes, fault: Option<Fault>) -> SuiteJson {
    let suite_seed = seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = random::rng(suite_seed);
    let samples = (suite.samples)(sizes);
    let mut failures = 0;
    let mut counterexample = None;
    for i in 0..samples {
        if let Err(e) = (suite.check)(&mut rng, i, fault) {
            failures += 1;
            counterexample.get_or_insert(format!("sample {i}: {e}"));
        }
    }
    SuiteJson {
        suite: suite.name.to_string(),
        samples,
        failures,
        counterexample,
    }
}

/// Runs every suite; the report depends only on the seed, sizes and fault.
pub fn run_suites(seed: u64, sizes: &SelftestSizes, fault: Option<Fault>, jobs: usize) -> Vec<SuiteJson> {
    let all = suites();
    let work = || {
        all.par_iter()
            .enumerate()
            .map(|(i, s)| run_suite(i, s, seed, sizes, fault))
            .collect::<Vec<_>>()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(work),
        Err(_) => all
            .iter()
            .enumerate()
            .map(|(i, s)| run_suite(i, s, seed, sizes, fault))
            .collect(),
    }
}

pub fn cmd_selftest(cfg: &SessionConfig, sizes: &SelftestSizes, fault: Option<Fault>) -> Outcome {
    let reports = run_suites(cfg.seed, sizes, fault, cfg.jobs);
    let failed = reports.iter().filter(|r| r.failures > 0).count();
    let mut out = String::new();
    for r in &reports {
        if cfg.json {
            out.push_str(&serde_json::to_string(r).expect("serializable"));
        } else {
            let status = if r.failures == 0 { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {:<24} samples={} failures={}", r.suite, r.samples, r.failures));
            if let Some(c) = &r.counterexample {
                out.push_str(&format!("\n     first counterexample: {c}"));
            }
        }
        out.push('\n');
    }
    if !cfg.json {
        out.push_str(&format!("seed {}: {} suites, {failed} failed\n", cfg.seed, reports.len()));
    }
    Outcome {
        code: if failed == 0 { EXIT_OK } else { EXIT_VERIFICATION_FAILED },
        stdout: out,
        stderr: String::new(),
    }
}
