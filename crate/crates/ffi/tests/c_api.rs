use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use fdz_ffi::*;

const W: &str = "rank: 3\norders: 0 0 2\nmult 1 1 : 0 0 1\n";

fn parse(text: &str) -> *mut FdzRing {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { fdz_ring_parse(c.as_ptr(), &mut out) }, FdzStatus::Ok);
    out
}

fn take(s: *mut c_char) -> String {
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { fdz_string_free(s) };
    text
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(fdz_last_error_message()) }.to_str().unwrap().to_owned()
}

#[test]
fn parse_serialize_and_rank() {
    let ring = parse(W);
    let mut rank = 0usize;
    assert_eq!(unsafe { fdz_ring_rank(ring, &mut rank) }, FdzStatus::Ok);
    assert_eq!(rank, 3);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { fdz_ring_serialize(ring, &mut text) }, FdzStatus::Ok);
    assert_eq!(take(text), W);
    unsafe { fdz_ring_free(ring) };
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    let bad = CString::new("rank: 1\n").unwrap();
    assert_eq!(unsafe { fdz_ring_parse(bad.as_ptr(), &mut out) }, FdzStatus::Parse);
    assert!(last_error().contains("orders"));
    let invalid = CString::new("rank: 2\norders: 2 0\nmult 1 1 : 0 1\n").unwrap();
    assert_eq!(unsafe { fdz_ring_parse(invalid.as_ptr(), &mut out) }, FdzStatus::InvalidRing);
    assert_eq!(unsafe { fdz_ring_parse(ptr::null(), &mut out) }, FdzStatus::Null);
    let not_utf8 = [0xffu8, 0];
    assert_eq!(unsafe { fdz_ring_parse(not_utf8.as_ptr().cast(), &mut out) }, FdzStatus::Utf8);
    let mut rank = 0usize;
    assert_eq!(unsafe { fdz_ring_rank(ptr::null(), &mut rank) }, FdzStatus::Null);
    let ring = parse(W);
    assert_eq!(unsafe { fdz_reduce_mod(ring, 0, &mut out) }, FdzStatus::Argument);
    unsafe { fdz_ring_free(ring) };
    unsafe { fdz_ring_free(ptr::null_mut()) };
    unsafe { fdz_string_free(ptr::null_mut()) };
}

#[test]
fn reports() {
    let z = parse("rank: 1\norders: 0\nmult 1 1 : 1\n");
    let twoz = parse("rank: 1\norders: 0\nmult 1 1 : 2\n");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { fdz_eqcheck_json(z, twoz, 0, 0, &mut s) }, FdzStatus::Ok);
    assert!(take(s).contains("\"verdict\": \"not_equivalent\""));
    assert_eq!(unsafe { fdz_classify_json(z, 0, &mut s) }, FdzStatus::Ok);
    assert!(take(s).contains("\"kind\": \"classify\""));
    assert_eq!(unsafe { fdz_analyze_json(twoz, &mut s) }, FdzStatus::Ok);
    assert!(take(s).contains("\"kind\": \"analyze\""));
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { fdz_reduce_mod(z, 4, &mut q) }, FdzStatus::Ok);
    assert_eq!(unsafe { fdz_ring_serialize(q, &mut s) }, FdzStatus::Ok);
    assert_eq!(take(s), "rank: 1\norders: 4\nmult 1 1 : 1\n");
    unsafe {
        fdz_ring_free(q);
        fdz_ring_free(z);
        fdz_ring_free(twoz);
    }
}

#[test]
fn header_declares_the_interface() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fdz.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "fdz_ring_parse",
        "fdz_ring_free",
        "fdz_ring_rank",
        "fdz_ring_serialize",
        "fdz_reduce_mod",
        "fdz_analyze_json",
        "fdz_classify_json",
        "fdz_eqcheck_json",
        "fdz_string_free",
        "fdz_last_error_message",
        "FDZ_STATUS_INVALID_RING",
        "typedef struct FdzRing FdzRing",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    // Compile the header as C when a compiler is around.
    if let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).status() {
        assert!(status.success());
    }
}
