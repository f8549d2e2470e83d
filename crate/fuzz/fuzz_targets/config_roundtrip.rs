#![no_main]

use libfuzzer_sys::fuzz_target;
use sta_cli::{parse_config, serialize_config};

// Anything the parser accepts must survive serialization unchanged.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = parse_config(text) {
        let text = serialize_config(&cfg);
        let again = parse_config(&text).expect("serialized config must parse");
        assert_eq!(cfg, again);
        assert_eq!(text, serialize_config(&again));
    }
});
