use sltrace::error::{Bullet, Error};
use sltrace::fq::Fq;
use sltrace::place::{enumerate_places, Place};
use sltrace::semilocal::{PlaceSet, SemiLocalFunction};
use sltrace::shell::ShellFunction;

fn f2() -> Fq {
    Fq::new(2).unwrap()
}

#[test]
fn place_specifiers_round_trip() {
    for q in [2, 3, 4, 5] {
        let field = Fq::new(q).unwrap();
        for p in enumerate_places(&field, 2) {
            assert_eq!(Place::parse(&p.spec(), &field).unwrap(), p);
        }
    }
}

#[test]
fn bad_place_specifiers() {
    let field = f2();
    for bad in ["", "infinity", "[0,1", "[]", "[0,2]", "[1,0]", "[a]", "[1,0,1]", "[0,0,1]", "[1]"] {
        assert!(Place::parse(bad, &field).is_err(), "{bad:?}");
    }
}

#[test]
fn place_set_bullets() {
    let field = f2();
    let bullet = |s: &str| match PlaceSet::parse(s, &field) {
        Err(Error::InvalidPlaceSet { bullet, .. }) => Some(bullet),
        _ => None,
    };
    assert_eq!(bullet("inf"), Some(Bullet::AtLeastTwoPlaces));
    assert_eq!(bullet("[0,1] [1,1]"), Some(Bullet::CharacterOrders));
    assert!(matches!(PlaceSet::parse("inf inf", &field), Err(Error::InvalidPlace(_))));
    let s = PlaceSet::parse("[1,1,1] inf", &field).unwrap();
    assert_eq!(s.to_string(), "inf [1,1,1]");
}

#[test]
fn shell_function_text() {
    let field = f2();
    let f = ShellFunction::parse("[0,1]; -1; [(-1, 2), (1, -1/3)]; tail 5", &field).unwrap();
    assert_eq!(f.j_min(), -1);
    assert_eq!(f.value(0).to_string(), "0");
    assert_eq!(f.value(7).to_string(), "5");
    assert_eq!(f.to_string(), "[0,1]; -1; [(-1, 2/1), (0, 0/1), (1, -1/3)]; tail 5/1");
    for bad in [
        "[0,1]; 0; []",
        "[0,1]; 0; []; 5",
        "[0,1]; x; []; tail 0",
        "[0,1]; 0; [(-1, 1)]; tail 0",
        "[0,1]; 0; [(0, 1), (0, 2)]; tail 0",
        "[0,1]; 0; [(0, 1),]; tail 0",
        "[0,1]; 0; [(0 1)]; tail 0",
        "[0,1]; 0; [(0, 1/0)]; tail 0",
        "[0,1]; 0; (0, 1); tail 0",
        "[0,1]; 10000000; []; tail 0",
        "[0,1]; 0; [(100000, 1)]; tail 0",
    ] {
        assert!(ShellFunction::parse(bad, &field).is_err(), "{bad:?}");
    }
}

#[test]
fn semilocal_function_text() {
    let field = f2();
    let text = "# two terms\n1/2 :: inf; 0; []; tail 1 :: [0,1]; 0; []; tail 1\n-1 :: inf; 1; []; tail 1 :: [0,1]; -1; [(-1, 1)]; tail 0\n";
    let f = SemiLocalFunction::parse(text, &field).unwrap();
    assert_eq!(f.terms().len(), 2);
    assert!(SemiLocalFunction::parse(&f.to_string(), &field).unwrap().same_function(&f));
    for bad in [
        "1/2",
        "x :: inf; 0; []; tail 1",
        "1 :: inf; 0; []; tail 1\n1 :: inf; 0; []; tail 1 :: [0,1]; 0; []; tail 1",
        "1 :: nowhere; 0; []; tail 1",
    ] {
        assert!(SemiLocalFunction::parse(bad, &field).is_err(), "{bad:?}");
    }
}
