use std::ffi::CStr;
use std::ptr;

use rangesets_ffi::*;

fn last_error() -> String {
    let p = rs_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn square_with_center() -> *mut RsPointSet {
    let xs = [0.0, 1.0, 1.0, 0.0, 0.5];
    let ys = [0.0, 0.0, 1.0, 1.0, 0.5];
    let mut ps = ptr::null_mut();
    assert_eq!(unsafe { rs_pointset_new(xs.as_ptr(), ys.as_ptr(), 5, &mut ps) }, RsStatus::Ok);
    ps
}

#[test]
fn triangulation_round_trip() {
    let ps = square_with_center();
    unsafe {
        assert_eq!(rs_pointset_len(ps), 5);
        let mut t = ptr::null_mut();
        assert_eq!(rs_triangulate(ps, &mut t), RsStatus::Ok);
        assert_eq!(rs_triangulation_triangle_count(t), 4);
        let mut buf = [0usize; 12];
        let mut written = 0;
        assert_eq!(rs_triangulation_triangles(t, buf.as_mut_ptr(), 4, &mut written), RsStatus::Ok);
        assert_eq!(written, 4);
        assert!(buf.chunks(3).all(|tri| tri.contains(&4)));
        assert!((rs_triangulation_max_edge_length(t) - 1.0).abs() < 1e-15);
        rs_triangulation_free(t);
        rs_pointset_free(ps);
    }
}

#[test]
fn rangeset_and_json() {
    let ps = square_with_center();
    let values = [1.0, 1.0, 1.0, 1.0, 1.0];
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(rs_rangeset_compute(ps, values.as_ptr(), 1, 10.0, &mut r), RsStatus::Ok);
        assert_eq!(rs_rangeset_bin_count(r), 1);
        assert_eq!(rs_rangeset_polygon_count(r), 1);
        assert_eq!(rs_rangeset_outlier_count(r, 0), 0);
        assert_eq!(rs_rangeset_outlier_count(r, 7), 0);
        let mut json = ptr::null_mut();
        assert_eq!(rs_rangeset_to_json(r, &mut json), RsStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        rs_string_free(json);
        assert!(text.starts_with("{\"attribute\":\"value\",\"epsilon\":10.0"), "{text}");
        rs_rangeset_free(r);

        // negative epsilon selects the suggested value
        let mut suggested = 0.0;
        assert_eq!(rs_suggest_epsilon(ps, &mut suggested), RsStatus::Ok);
        assert_eq!(rs_rangeset_compute(ps, values.as_ptr(), 1, -1.0, &mut r), RsStatus::Ok);
        assert_eq!(rs_rangeset_epsilon(r), suggested);
        rs_rangeset_free(r);
        rs_pointset_free(ps);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let xs = [0.0, 1.0, 2.0];
        let ys = [0.0, 1.0, 2.0];
        let mut ps = ptr::null_mut();
        assert_eq!(rs_pointset_new(xs.as_ptr(), ys.as_ptr(), 3, &mut ps), RsStatus::Ok);
        let mut t = ptr::null_mut();
        assert_eq!(rs_triangulate(ps, &mut t), RsStatus::AllCollinear);
        assert!(t.is_null());
        assert!(last_error().contains("collinear"), "{}", last_error());
        rs_pointset_free(ps);

        let bad = [f64::NAN];
        assert_eq!(rs_pointset_new(bad.as_ptr(), bad.as_ptr(), 1, &mut ps), RsStatus::NonFinite);
        assert_eq!(rs_pointset_new(ptr::null(), ptr::null(), 2, &mut ps), RsStatus::NullPointer);
        assert_eq!(rs_triangulate(ptr::null(), &mut t), RsStatus::NullPointer);

        let ps = square_with_center();
        let mut r = ptr::null_mut();
        let values = [1.0; 5];
        assert_eq!(rs_rangeset_compute(ps, values.as_ptr(), 0, 1.0, &mut r), RsStatus::InvalidArgument);
        assert_eq!(rs_rangeset_compute(ps, values.as_ptr(), 2, f64::NAN, &mut r), RsStatus::InvalidArgument);
        rs_pointset_free(ps);

        // freeing NULL is a no-op
        rs_pointset_free(ptr::null_mut());
        rs_string_free(ptr::null_mut());
    }
}

#[test]
fn pipeline_from_config() {
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/wine.toml\0");
    unsafe {
        let mut json = ptr::null_mut();
        assert_eq!(rs_pipeline_run(config.as_ptr().cast(), &mut json), RsStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap();
        assert!(text.starts_with("{\"schema_version\":1,\"fingerprint\":\"sha256:"));
        rs_string_free(json);

        let missing = c"/nonexistent/config.toml";
        assert_eq!(rs_pipeline_run(missing.as_ptr(), &mut json), RsStatus::Io);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(rs_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
