#![no_main]

use freetame::cli::json::{tame_word_from_json, tame_word_to_json, TameWordJson};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    let Ok(doc) = serde_json::from_str::<TameWordJson>(s) else {
        return;
    };
    if let Ok((word, target, verified)) = tame_word_from_json(&doc) {
        let again = tame_word_to_json(&word, &target, verified);
        let (w2, t2, v2) = tame_word_from_json(&again).unwrap();
        assert_eq!((w2, t2, v2), (word, target, verified));
    }
});
