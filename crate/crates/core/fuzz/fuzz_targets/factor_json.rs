#![no_main]

use freetame::cli::json::FactorInput;
use freetame::cli::{commands::factor_request, SessionConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    let Ok(doc) = serde_json::from_str::<FactorInput>(s) else {
        return;
    };
    let cfg = SessionConfig {
        degree_cap: 4,
        ..SessionConfig::default()
    };
    if let Ok(req) = doc.resolve(cfg.field) {
        if let Ok((word, target)) = factor_request(&cfg, &req) {
            assert!(word.check_against(&target).is_ok());
        }
    }
});
