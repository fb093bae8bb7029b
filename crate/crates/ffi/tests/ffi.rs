use std::ffi::{CStr, CString};
use std::ptr;

use sunflower_kit_ffi::*;

fn last_error() -> String {
    let p = sk_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn parse(text: &str) -> *mut SkFamily {
    let c = CString::new(text).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { sk_family_parse(c.as_ptr(), &mut f) }, SkStatus::Ok);
    assert!(!f.is_null());
    f
}

#[test]
fn parse_query_and_write() {
    let f = parse("n=4 m=2\n3 4\n1 2\n");
    let (mut n, mut m, mut len) = (0, 0, 0);
    unsafe {
        assert_eq!(sk_family_shape(f, &mut n, &mut m, &mut len), SkStatus::Ok);
        assert_eq!((n, m, len), (4, 2, 2));
        let mut text = ptr::null_mut();
        assert_eq!(sk_family_to_text(f, &mut text), SkStatus::Ok);
        assert_eq!(CStr::from_ptr(text).to_str().unwrap(), "n=4 m=2\n1 2\n3 4\n");
        sk_string_free(text);
        let mut count = 0;
        assert_eq!(sk_ext_count(f, 3, &mut count), SkStatus::Ok);
        assert_eq!(count, 4);
        sk_family_free(f);
    }
}

#[test]
fn checks_report_verdicts() {
    let f = parse("n=4 m=2\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
    let mut holds = SkHolds::False;
    unsafe {
        assert_eq!(sk_split_check(f, 2, 1, &mut holds), SkStatus::Ok);
        assert_eq!(holds, SkHolds::True);
        assert_eq!(sk_gamma_check(f, 3, 2, false, &mut holds), SkStatus::Ok);
        assert_eq!(holds, SkHolds::True);
        assert_eq!(sk_gamma_check(f, 4, 1, false, &mut holds), SkStatus::Ok);
        assert_eq!(holds, SkHolds::False);
        assert_eq!(sk_gamma_check(f, 4, 0, true, &mut holds), SkStatus::InvalidArgument);
        sk_family_free(f);
    }
}

#[test]
fn sunflower_json() {
    let f = parse("n=3 m=1\n1\n2\n3\n");
    let (mut holds, mut json) = (SkHolds::False, ptr::null_mut());
    unsafe {
        assert_eq!(sk_sunflower(f, 3, 1_000_000, &mut holds, &mut json), SkStatus::Ok);
        assert_eq!(holds, SkHolds::True);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(v["witness"]["core"], serde_json::json!([]));
        sk_string_free(json);
        sk_family_free(f);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let bad = CString::new("n=4 m=2\n1 2 3\n").unwrap();
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(sk_family_parse(bad.as_ptr(), &mut f), SkStatus::Parse);
        assert!(f.is_null());
        assert!(last_error().contains("line 2"));
        assert_eq!(sk_family_parse(ptr::null(), &mut f), SkStatus::NullPointer);
        let mut count = 0;
        assert_eq!(sk_ext_count(ptr::null(), 3, &mut count), SkStatus::NullPointer);
        let mut g = ptr::null_mut();
        assert_eq!(sk_family_generate(5, SkDistribution::Uniform, 9, 2, 36, &mut g), SkStatus::Ok);
        let mut holds = SkHolds::True;
        assert_eq!(sk_sunflower(g, 4, 1, &mut holds, ptr::null_mut()), SkStatus::BudgetExceeded);
        assert!(last_error().contains("budget"));
        assert_eq!(sk_ext_count(g, 1, &mut count), SkStatus::InvalidArgument);
        sk_family_free(g);
        sk_family_free(ptr::null_mut());
        sk_string_free(ptr::null_mut());
    }
}
