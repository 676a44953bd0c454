#![no_main]

use libfuzzer_sys::fuzz_target;
use sltrace::fq::Fq;
use sltrace::semilocal::SemiLocalFunction;

fuzz_target!(|data: &str| {
    let field = Fq::new(3).unwrap();
    if let Ok(f) = SemiLocalFunction::parse(data, &field) {
        let again = SemiLocalFunction::parse(&f.to_string(), &field).expect("display output must parse");
        assert_eq!(again, f);
    }
});
