#![no_main]

use freetame::cli::parse_biop;
use freetame::freealg::Field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    if let Ok(b) = parse_biop(s, Field::Prime(5)) {
        assert_eq!(parse_biop(&b.to_string(), Field::Prime(5)).unwrap(), b);
    }
});
