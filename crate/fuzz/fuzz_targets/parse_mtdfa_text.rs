#![no_main]

use libfuzzer_sys::fuzz_target;
use ltlfsynt::mtdfa::{Mtdfa, Options};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let opts = Options {
        max_nodes: Some(1 << 16),
        ..Options::default()
    };
    if let Ok((ctx, aut)) = Mtdfa::from_text(text, opts) {
        let dumped = aut.to_text(&ctx);
        let (ctx2, back) = Mtdfa::from_text(&dumped, opts).expect("dump must reload");
        assert_eq!(back.to_text(&ctx2), dumped);
    }
});
