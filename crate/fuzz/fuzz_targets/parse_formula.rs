#![no_main]

use libfuzzer_sys::fuzz_target;
use ltlfsynt::ltlf::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = parse(text) {
        let printed = f.to_string();
        let again = parse(&printed).expect("printed formula must parse");
        assert_eq!(again, f, "{printed}");
    }
});
