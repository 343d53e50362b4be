//! Calls through the exported C functions from Rust, plus a C program built
//! against the generated header.

use recfair_ffi::*;
use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = rf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn catalog(n: usize) -> *mut RfCatalog {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { rf_catalog_with_size(n, &mut out) }, RfStatus::Ok);
    out
}

fn run(lists: &[&[usize]]) -> *mut RfRun {
    let items: Vec<usize> = lists.iter().flat_map(|l| l.iter().copied()).collect();
    let lengths: Vec<usize> = lists.iter().map(|l| l.len()).collect();
    let mut out = ptr::null_mut();
    let s = unsafe { rf_run_from_lists(items.as_ptr(), lengths.as_ptr(), lists.len(), &mut out) };
    assert_eq!(s, RfStatus::Ok, "{}", last_error());
    out
}

#[test]
fn exposure_scores_and_bounds() {
    let cat = catalog(10);
    let r = run(&[&[0, 1, 2], &[3, 4, 5]]);
    let mut v = f64::NAN;
    unsafe {
        assert_eq!(
            rf_exposure_measure(c("Jain").as_ptr(), r, cat, 3, RfVariant::Original, &mut v),
            RfStatus::Ok
        );
        assert!((v - 0.6).abs() < 1e-12);
        let (mut unfair, mut fair) = (0.0, 0.0);
        assert_eq!(
            rf_exposure_bounds(c("Jain").as_ptr(), 3, 2, 10, &mut unfair, &mut fair),
            RfStatus::Ok
        );
        assert!((unfair - 0.3).abs() < 1e-12 && (fair - 0.6).abs() < 1e-12);
        assert_eq!(
            rf_exposure_measure(c("Jain").as_ptr(), r, cat, 3, RfVariant::Corrected, &mut v),
            RfStatus::Ok
        );
        assert!((v - 1.0).abs() < 1e-12);
        rf_run_free(r);
        rf_catalog_free(cat);
    }
}

#[test]
fn error_codes_and_messages() {
    let cat = catalog(4);
    let r = run(&[&[0, 1], &[0, 1]]);
    let mut v = 0.0;
    unsafe {
        assert_eq!(
            rf_exposure_measure(ptr::null(), r, cat, 2, RfVariant::Original, &mut v),
            RfStatus::NullPointer
        );
        assert!(last_error().contains("measure"));
        assert_eq!(
            rf_exposure_measure(c("Ent").as_ptr(), r, cat, 2, RfVariant::Original, &mut v),
            RfStatus::Undefined
        );
        assert_eq!(
            rf_exposure_measure(c("Jain").as_ptr(), r, cat, 9, RfVariant::Original, &mut v),
            RfStatus::InvalidArgument
        );
        let mut q = ptr::null_mut();
        let bad = c("u0\ti0\n");
        assert_eq!(rf_qrels_from_text(bad.as_ptr(), cat, &mut q), RfStatus::Parse);
        assert!(q.is_null());
        let invalid = [0xffu8, 0];
        assert_eq!(
            rf_catalog_from_text(invalid.as_ptr().cast(), &mut ptr::null_mut()),
            RfStatus::InvalidUtf8
        );
        let twice = [1usize, 1];
        let len = [2usize];
        let mut out = ptr::null_mut();
        assert_eq!(
            rf_run_from_lists(twice.as_ptr(), len.as_ptr(), 1, &mut out),
            RfStatus::InvalidArgument
        );
        let one = c("x0");
        let mut cat1 = ptr::null_mut();
        assert_eq!(rf_catalog_from_text(one.as_ptr(), &mut cat1), RfStatus::Ok);
        let r1 = run(&[&[0]]);
        assert_eq!(
            rf_exposure_measure(c("Jain").as_ptr(), r1, cat1, 1, RfVariant::Corrected, &mut v),
            RfStatus::Degenerate
        );
        rf_run_free(r1);
        rf_catalog_free(cat1);
        rf_run_free(r);
        rf_catalog_free(cat);
    }
}

#[test]
fn tau_and_bh() {
    let a = [1.0, 2.0, 3.0, 4.0];
    let b = [1.0, 2.0, 4.0, 3.0];
    let (mut tau, mut p) = (0.0, 0.0);
    unsafe {
        assert_eq!(
            rf_kendall_tau_b(a.as_ptr(), b.as_ptr(), 4, &mut tau, &mut p),
            RfStatus::Ok
        );
        assert!((tau - 4.0 / 6.0).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&p));
        let flat = [1.0, 1.0, 1.0, 1.0];
        assert_eq!(
            rf_kendall_tau_b(a.as_ptr(), flat.as_ptr(), 4, &mut tau, ptr::null_mut()),
            RfStatus::Undefined
        );
        let pv = [0.01, 0.02, 0.04, 0.5];
        let mut flags = [9u8; 4];
        assert_eq!(rf_bh_correct(pv.as_ptr(), 4, 0.05, flags.as_mut_ptr()), RfStatus::Ok);
        assert_eq!(flags, [1, 1, 0, 0]);
    }
}

#[test]
fn frontier_round_trip() {
    let cat = catalog(8);
    let qtext = c("u0\ti0\t1\nu0\ti1\t1\nu1\ti0\t1\nu1\ti2\t1\nu2\ti0\t1\nu2\ti1\t1\n");
    let htext = c("u0\ti7\nu1\ti7\nu2\ti6\n");
    let mut q = ptr::null_mut();
    let mut h = ptr::null_mut();
    let mut pf = ptr::null_mut();
    unsafe {
        assert_eq!(rf_qrels_from_text(qtext.as_ptr(), cat, &mut q), RfStatus::Ok);
        assert_eq!(rf_interactions_from_text(htext.as_ptr(), cat, &mut h), RfStatus::Ok);
        let s = rf_frontier_generate(
            q,
            h,
            cat,
            2,
            c("NDCG").as_ptr(),
            c("Jain").as_ptr(),
            RfVariant::Corrected,
            0,
            &mut pf,
        );
        assert_eq!(s, RfStatus::Ok, "{}", last_error());
        let mut len = 0;
        assert_eq!(rf_frontier_len(pf, &mut len), RfStatus::Ok);
        assert!(len >= 2);
        let (mut r0, mut f0, mut r1, mut f1) = (0.0, 0.0, 0.0, 0.0);
        assert_eq!(rf_frontier_point(pf, 0, &mut r0, &mut f0), RfStatus::Ok);
        assert_eq!(rf_frontier_point(pf, len - 1, &mut r1, &mut f1), RfStatus::Ok);
        assert!((r0 - 1.0).abs() < 1e-12 && r0 >= r1 && f1 >= f0);
        assert_eq!(rf_frontier_point(pf, len, &mut r1, &mut f1), RfStatus::InvalidArgument);
        let (mut rr, mut rf) = (0.0, 0.0);
        assert_eq!(rf_frontier_reference(pf, 0.0, &mut rr, &mut rf), RfStatus::Ok);
        assert!((rr - r0).abs() < 1e-12 && (rf - f0).abs() < 1e-12);

        // The oracle's own start point sits on the frontier's relevance-best end.
        let oracle = run(&[&[0, 1], &[0, 2], &[0, 1]]);
        let mut d = f64::NAN;
        assert_eq!(
            rf_frontier_distance(pf, oracle, q, cat, 2, RfVariant::Corrected, 0.0, &mut d),
            RfStatus::Ok
        );
        assert!(d.abs() < 1e-12, "distance {d}");
        rf_run_free(oracle);
        rf_frontier_free(pf);
        rf_interactions_free(h);
        rf_qrels_free(q);
        rf_catalog_free(cat);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/recfair.h")).unwrap();
    let src = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 20);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct RfRun RfRun;"));
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        panic!("no C compiler found");
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = lib_dir.join("librecfair_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("recfair_smoke");
    let status = Command::new(cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&out).output().unwrap();
    assert!(
        run.status.success(),
        "C program failed: {}{}",
        String::from_utf8_lossy(&run.stdout),
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
