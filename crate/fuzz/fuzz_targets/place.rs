#![no_main]

use libfuzzer_sys::fuzz_target;
use sltrace::fq::Fq;
use sltrace::place::Place;
use sltrace::semilocal::PlaceSet;

const FIELDS: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

fuzz_target!(|input: (u8, &str)| {
    let (pick, text) = input;
    let field = Fq::new(FIELDS[pick as usize % FIELDS.len()]).unwrap();
    if let Ok(p) = Place::parse(text, &field) {
        assert_eq!(Place::parse(&p.spec(), &field).unwrap(), p);
    }
    if let Ok(s) = PlaceSet::parse(text, &field) {
        assert_eq!(PlaceSet::parse(&s.to_string(), &field).unwrap(), s);
    }
});
