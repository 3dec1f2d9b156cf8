#![no_main]

use freetame::cli::parse_map;
use freetame::freealg::{Alphabet, Field};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    let a = Alphabet::xyz();
    if let Ok(e) = parse_map(s, &a, Field::Rationals) {
        assert_eq!(parse_map(&e.to_string(), &a, Field::Rationals).unwrap(), e);
    }
});
