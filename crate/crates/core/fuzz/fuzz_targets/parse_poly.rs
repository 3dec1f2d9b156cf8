#![no_main]

use freetame::cli::parse_poly;
use freetame::freealg::{Alphabet, Field};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    let a = Alphabet::xyz();
    for field in [Field::Rationals, Field::Prime(7)] {
        if let Ok(p) = parse_poly(s, &a, field) {
            assert_eq!(parse_poly(&p.to_string(), &a, field).unwrap(), p);
        }
    }
});
