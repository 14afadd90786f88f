use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use autoseries_ffi::*;

fn last_error() -> String {
    let p = as_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn christol(f: *const AsField, eq: &str, x0: u32) -> Result<*mut AsSeries, AsStatus> {
    let eq = CString::new(eq).unwrap();
    let mut out = ptr::null_mut();
    match unsafe { as_series_christol(f, eq.as_ptr(), x0, &mut out) } {
        AsStatus::Ok => Ok(out),
        s => Err(s),
    }
}

fn coeffs(s: *const AsSeries, n: i64) -> Vec<u32> {
    (0..n)
        .map(|k| {
            let mut c = 99;
            assert_eq!(unsafe { as_series_coeff(s, k, 1, &mut c) }, AsStatus::Ok);
            c
        })
        .collect()
}

#[test]
fn series_round_trip() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(as_field_new(2, 1, &mut f), AsStatus::Ok);
        assert_eq!(as_field_size(f), 2);
        let x = christol(f, "y^2 + y + t", 0).unwrap();
        assert_eq!(coeffs(x, 9), [0, 1, 1, 0, 1, 0, 0, 0, 1]);
        assert!(as_series_dim(x) <= 2);

        let mut text = ptr::null_mut();
        assert_eq!(as_series_to_json(x, &mut text), AsStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(as_series_from_json(text, &mut back), AsStatus::Ok);
        assert_eq!(coeffs(back, 40), coeffs(x, 40));
        as_string_free(text);

        let mut sum = ptr::null_mut();
        assert_eq!(as_series_add(x, back, &mut sum), AsStatus::Ok);
        assert!(coeffs(sum, 40).iter().all(|&c| c == 0));
        let mut h = ptr::null_mut();
        assert_eq!(as_series_hadamard(x, back, &mut h), AsStatus::Ok);
        assert_eq!(coeffs(h, 40), coeffs(x, 40));

        let g = christol(f, "(1+t)*y + 1", 1).unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(as_series_mul(x, g, &mut m), AsStatus::Ok);
        // partial sums of Σ t^{2^n}
        let xs = coeffs(x, 32);
        let want: Vec<u32> = (0..32).map(|n| xs[..=n].iter().sum::<u32>() % 2).collect();
        assert_eq!(coeffs(m, 32), want);

        let mut c = 0;
        assert_eq!(as_series_coeff(x, 1, 2, &mut c), AsStatus::Ok);
        assert_eq!(c, 0);

        for s in [x, back, sum, h, g, m] {
            as_series_free(s);
        }
        as_field_free(f);
    }
}

#[test]
fn zero_set_automaton() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(as_field_new(2, 1, &mut f), AsStatus::Ok);
        let x = christol(f, "y^2 + y + t", 0).unwrap();
        let mut t = ptr::null_mut();
        assert_eq!(as_series_truncate(x, 5, 1, &mut t), AsStatus::Ok);
        assert_eq!(coeffs(t, 9), [0, 1, 1, 0, 1, 0, 0, 0, 0]);
        let mut z = ptr::null_mut();
        assert_eq!(as_series_zero_set(x, &mut z), AsStatus::Ok);
        assert!(as_dfao_states(z) > 0);
        let xs = coeffs(x, 64);
        for n in 0..64u64 {
            let mut o = 0;
            assert_eq!(as_dfao_eval(z, n, 1, &mut o), AsStatus::Ok);
            assert_eq!(o != 0, xs[n as usize] == 0, "n = {}", n);
        }
        let mut o = 0;
        assert_eq!(as_dfao_eval(z, 1, 2, &mut o), AsStatus::Ok);
        assert_ne!(o, 0);
        assert_eq!(as_dfao_eval(z, 1, 3, &mut o), AsStatus::InvalidArgument);
        as_dfao_free(z);
        as_series_free(t);
        as_series_free(x);
        as_field_free(f);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(as_field_new(6, 1, &mut f), AsStatus::User);
        assert!(f.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(as_field_new(2, 1, ptr::null_mut()), AsStatus::InvalidArgument);
        assert_eq!(as_field_new(3, 1, &mut f), AsStatus::Ok);
        assert_eq!(christol(f, "y^2 + + t", 0), Err(AsStatus::User));
        assert!(last_error().contains("position"));
        assert_eq!(christol(ptr::null(), "y", 0), Err(AsStatus::InvalidArgument));
        let mut s = ptr::null_mut();
        assert_eq!(as_series_christol(f, ptr::null(), 0, &mut s), AsStatus::InvalidArgument);
        let bad = CString::new("{").unwrap();
        assert_eq!(as_series_from_json(bad.as_ptr(), &mut s), AsStatus::User);
        let x = christol(f, "y^3 + 2*y + 2*t", 0).unwrap();
        let mut c = 0;
        assert_eq!(as_series_coeff(x, 1, 0, &mut c), AsStatus::InvalidArgument);
        let f2 = {
            let mut g = ptr::null_mut();
            assert_eq!(as_field_new(2, 1, &mut g), AsStatus::Ok);
            g
        };
        let y = christol(f2, "y^2 + y + t", 0).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(as_series_add(x, y, &mut out), AsStatus::User);
        assert!(out.is_null());
        as_series_free(x);
        as_series_free(y);
        as_field_free(f);
        as_field_free(f2);
        // null handles are accepted by the release functions
        as_series_free(ptr::null_mut());
        as_dfao_free(ptr::null_mut());
        as_string_free(ptr::null_mut());
        assert_eq!(as_series_dim(ptr::null()), 0);
    }
}

/// Compiles and runs the C smoke test against the generated header and the
/// static library, when both a C compiler and the archive are present.
#[test]
fn c_program_links_and_runs() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = root.join("include/autoseries.h");
    assert!(header.exists(), "header not generated");
    let exe_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = exe_dir.join("libautoseries_ffi.a");
    let out = std::env::temp_dir().join(format!("autoseries_smoke_{}", std::process::id()));
    let mut cmd = Command::new("cc");
    cmd.arg("-std=c99").arg("-Wall").arg("-Werror").arg("-I").arg(root.join("include")).arg(root.join("tests/smoke.c"));
    if !lib.exists() {
        // header check only
        let st = cmd.arg("-fsyntax-only").status();
        if let Ok(st) = st {
            assert!(st.success());
        }
        return;
    }
    let st = match cmd.arg(&lib).args(["-lpthread", "-ldl", "-lm", "-o"]).arg(&out).status() {
        Ok(st) => st,
        Err(_) => return,
    };
    assert!(st.success(), "C compile failed");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
