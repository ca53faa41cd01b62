use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ellgraph_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { eg_string_free(p) };
    s
}

fn parse(src: &str) -> *mut EgGraph {
    let c = CString::new(src).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { eg_graph_parse(c.as_ptr(), &mut g) }, EgStatus::Ok);
    g
}

fn ring_text(r: *const EgRing) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { eg_ring_to_string(r, EgFormat::Text, &mut s) }, EgStatus::Ok);
    take_string(s)
}

#[test]
fn evaluate_banana() {
    let g = parse("edge v w 0\nedge v w 0\n");
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { eg_graph_evaluate(g, &mut r) }, EgStatus::Ok);
    assert_eq!(ring_text(r), "(-1/9)*pi^4*E2h^2 + (1/9)*pi^4*E4");

    let decs = [0u32, 0];
    let mut closed = ptr::null_mut();
    let mut oracle = ptr::null_mut();
    assert_eq!(unsafe { eg_banana_closed_form(decs.as_ptr(), 2, &mut closed) }, EgStatus::Ok);
    assert_eq!(unsafe { eg_banana_oracle(decs.as_ptr(), 2, &mut oracle) }, EgStatus::Ok);
    assert!(unsafe { eg_ring_equal(r, closed) });
    assert!(unsafe { eg_ring_equal(r, oracle) });
    unsafe {
        eg_ring_free(r);
        eg_ring_free(closed);
        eg_ring_free(oracle);
        eg_graph_free(g);
    }
}

#[test]
fn anomaly_sides() {
    let g = parse(r#"{"edges":[["a","b",0],["b","c",0],["c","a",0]]}"#);
    let mut equal = false;
    let mut lhs = ptr::null_mut();
    let mut rhs = ptr::null_mut();
    assert_eq!(unsafe { eg_graph_check_anomaly(g, &mut equal, &mut lhs, &mut rhs) }, EgStatus::Ok);
    assert!(equal);
    assert_eq!(ring_text(lhs), "(1/3)*pi^4*E2h^2 + (-1/3)*pi^4*E4");
    assert!(unsafe { eg_ring_equal(lhs, rhs) });
    let mut again = false;
    assert_eq!(
        unsafe { eg_graph_check_anomaly(g, &mut again, ptr::null_mut(), ptr::null_mut()) },
        EgStatus::Ok
    );
    assert!(again);
    unsafe {
        eg_ring_free(lhs);
        eg_ring_free(rhs);
        eg_graph_free(g);
    }
}

#[test]
fn ring_round_trips() {
    let src = CString::new("(2/15)*pi^4*E4").unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { eg_ring_parse(src.as_ptr(), EgFormat::Text, &mut r) }, EgStatus::Ok);
    let mut w2 = ptr::null_mut();
    assert_eq!(unsafe { eg_loop_value(2, &mut w2) }, EgStatus::Ok);
    assert!(unsafe { eg_ring_equal(r, w2) });

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { eg_ring_to_string(r, EgFormat::Json, &mut json) }, EgStatus::Ok);
    let json = CString::new(take_string(json)).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { eg_ring_parse(json.as_ptr(), EgFormat::Json, &mut back) }, EgStatus::Ok);
    assert!(unsafe { eg_ring_equal(r, back) });

    let mut latex = ptr::null_mut();
    assert_eq!(unsafe { eg_ring_to_string(r, EgFormat::Latex, &mut latex) }, EgStatus::Ok);
    assert!(take_string(latex).contains("E_4"));

    let mut w0 = ptr::null_mut();
    let mut dy = ptr::null_mut();
    assert_eq!(unsafe { eg_loop_value(0, &mut w0) }, EgStatus::Ok);
    assert_eq!(unsafe { eg_ring_partial_y(w0, &mut dy) }, EgStatus::Ok);
    assert_eq!(ring_text(dy), "(1)");
    unsafe {
        for x in [r, w2, back, w0, dy] {
            eg_ring_free(x);
        }
    }
}

#[test]
fn errors_set_status_and_message() {
    let bad = CString::new("edge v w 0\nedge v v 0\n").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { eg_graph_parse(bad.as_ptr(), &mut g) }, EgStatus::Parse);
    assert!(g.is_null());
    let msg = unsafe { CStr::from_ptr(eg_last_error()) }.to_str().unwrap();
    assert!(msg.contains("line 2"), "{msg}");

    assert_eq!(unsafe { eg_graph_parse(ptr::null(), &mut g) }, EgStatus::NullPointer);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { eg_graph_evaluate(ptr::null(), &mut r) }, EgStatus::NullPointer);
    assert_eq!(unsafe { eg_banana_closed_form(ptr::null(), 0, &mut r) }, EgStatus::InvalidInput);
    assert_eq!(unsafe { eg_loop_value(-1, &mut r) }, EgStatus::InvalidInput);

    let minus = parse("edge v w -1\nedge v w 0\n");
    assert_eq!(unsafe { eg_graph_evaluate(minus, &mut r) }, EgStatus::InvalidInput);
    let mut eq = false;
    assert_eq!(
        unsafe { eg_graph_check_anomaly(minus, &mut eq, ptr::null_mut(), ptr::null_mut()) },
        EgStatus::InvalidInput
    );
    unsafe { eg_graph_free(minus) };

    let invalid = [0xffu8, 0];
    assert_eq!(unsafe { eg_graph_parse(invalid.as_ptr().cast(), &mut g) }, EgStatus::InvalidUtf8);

    let ok = parse("loop v 0\n");
    unsafe { eg_graph_free(ok) };
    assert!(eg_last_error().is_null());
    // freeing NULL is a no-op
    unsafe {
        eg_graph_free(ptr::null_mut());
        eg_ring_free(ptr::null_mut());
        eg_string_free(ptr::null_mut());
    }
}

#[test]
fn graph_serialization() {
    let g = parse("edge v w 2\nloop w 0\n");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { eg_graph_to_string(g, EgFormat::Json, &mut s) }, EgStatus::Ok);
    let json = take_string(s);
    let again = parse(&json);
    let mut t1 = ptr::null_mut();
    let mut t2 = ptr::null_mut();
    unsafe {
        eg_graph_to_string(g, EgFormat::Text, &mut t1);
        eg_graph_to_string(again, EgFormat::Text, &mut t2);
    }
    assert_eq!(take_string(t1), take_string(t2));
    unsafe {
        eg_graph_free(g);
        eg_graph_free(again);
    }
    let v = unsafe { CStr::from_ptr(eg_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_surface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ellgraph.h")).unwrap();
    for name in [
        "typedef struct EgGraph EgGraph",
        "typedef struct EgRing EgRing",
        "EG_STATUS_OK",
        "EG_FORMAT_LATEX",
        "eg_graph_parse",
        "eg_graph_evaluate",
        "eg_graph_check_anomaly",
        "eg_ring_to_string",
        "eg_ring_free",
        "eg_string_free",
        "eg_last_error",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

/// Compiles and runs a C program against the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let lib_dir = tmp.parent().unwrap().join(if cfg!(debug_assertions) { "debug" } else { "release" });
    let lib = lib_dir.join("libellgraph_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let exe = tmp.join("ellgraph_c_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status();
    let Ok(status) = status else {
        eprintln!("skipping: no C compiler");
        return;
    };
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "(-1/9)*pi^4*E2h^2 + (1/9)*pi^4*E4\nanomaly 1\nerror 3\n"
    );
}
