#![no_main]

use libfuzzer_sys::fuzz_target;
use sltrace::fq::Fq;
use sltrace::shell::ShellFunction;

fuzz_target!(|data: &str| {
    let field = Fq::new(2).unwrap();
    if let Ok(f) = ShellFunction::parse(data, &field) {
        let again = ShellFunction::parse(&f.to_string(), &field).expect("display output must parse");
        assert_eq!(again, f);
    }
});
