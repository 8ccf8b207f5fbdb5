use multres::driver::{resolve_plane_curve, run_script, BlowupScript};
use multres::elimination::elim_algebra;
use multres::json::canonical;
use multres::poly::rat;
use multres::selftest::{run_selftest, Catalog};
use multres::{parse, MonicPoly, Order, RingCtx};

#[test]
fn order_at_origin() {
    let r = RingCtx::parse("Q[x,y,z]").unwrap();
    let f = parse("z^2 - x^2*y", &r).unwrap();
    assert_eq!(f.order_at_point(&[rat(0), rat(0), rat(0)]).unwrap(), Order::Finite(2));
    assert_eq!(f.order_at_point(&[rat(1), rat(1), rat(1)]).unwrap(), Order::Finite(1));
}

#[test]
fn elimination_of_whitney() {
    let base = RingCtx::parse("Q[x,y]").unwrap();
    let e = elim_algebra(&MonicPoly::parse("Z^2 - x^2*y", "Z", &base).unwrap()).unwrap();
    let gens: Vec<(String, u32)> = e.generators().iter().map(|g| (g.poly.to_string(), g.weight)).collect();
    assert_eq!(gens, vec![("-x^2*y".to_string(), 2)]);
}

#[test]
fn curve_report_shape() {
    let r = RingCtx::parse("Q[x,y]").unwrap();
    let res = resolve_plane_curve(&parse("y^2 - x^3", &r).unwrap()).unwrap();
    let json = res.report.to_json();
    assert_eq!(json["summary"]["sequences"][0]["sequence"], serde_json::json!([2, 1]));
    assert_eq!(json["indicators"], serde_json::json!([2, 1]));
    assert_eq!(json["tree"]["children"].as_array().unwrap().len(), 2);
}

#[test]
fn scripts_are_byte_stable() {
    let text = r#"{"object": {"base": "Q[x,y]", "entries": [{"var": "X1", "poly": "X1^2 - x^2*y"}]},
                   "steps": [{"chart": [], "center": {"vars": ["x"]}}]}"#;
    let a = canonical(&run_script(&BlowupScript::from_json(text).unwrap()).unwrap().to_json());
    let b = canonical(&run_script(&BlowupScript::from_json(text).unwrap()).unwrap().to_json());
    assert_eq!(a, b);
}

#[test]
fn selftest_is_deterministic_per_seed() {
    let c = Catalog::builtin();
    assert_eq!(run_selftest(42, &c), run_selftest(42, &c));
    assert!(run_selftest(42, &c).passed());
}
