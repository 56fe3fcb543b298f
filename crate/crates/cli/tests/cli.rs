//! End-to-end checks of the `nhtwist` binary: exit-code contract, output
//! formats, reference-table comparison and report determinism.

use std::process::{Command, Output};

fn nhtwist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nhtwist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn exit_code_contract() {
    // 0: pass
    assert_eq!(nhtwist(&["verify", "cybe"]).status.code(), Some(0));
    assert_eq!(
        nhtwist(&["algebra", "--signature", "nh+", "--dim", "3", "--verify"])
            .status
            .code(),
        Some(0)
    );
    // 2: usage errors
    assert_eq!(nhtwist(&["algebra", "--dim", "0"]).status.code(), Some(2));
    assert_eq!(
        nhtwist(&["table", "--twist", "5", "--dim", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(nhtwist(&["table", "--twist", "16"]).status.code(), Some(2));
    assert_eq!(nhtwist(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(nhtwist(&["table"]).status.code(), Some(2)); // missing --twist
    assert_eq!(
        nhtwist(&["coproduct", "--gen", "Q9", "--twist", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        nhtwist(&["table", "--twist", "10", "--params", "beta11_12=1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn galilei_algebra_lists_vanishing_h_p_rows() {
    let out = nhtwist(&["algebra", "--signature", "galilei", "--dim", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("[H, P1] = 0"), "{text}");
    assert!(text.contains("[H, P2] = 0"));
}

#[test]
fn check_paper_matches_for_item_10_and_flags_item_7() {
    let out = nhtwist(&[
        "table",
        "--twist",
        "10",
        "--signature",
        "nh-",
        "--check-paper",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("matches-paper"));

    let out = nhtwist(&[
        "table",
        "--twist",
        "7",
        "--signature",
        "nh-",
        "--check-paper",
    ]);
    assert_eq!(out.status.code(), Some(0), "ledgered mismatch still passes");
    assert!(stdout(&out).contains("matches-oracle-paper-has-typo"));

    let out = nhtwist(&[
        "table",
        "--twist",
        "1",
        "--signature",
        "galilei",
        "--check-paper",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("i*t^6*beta1_12"), "{text}");
}

#[test]
fn numeric_params_table() {
    let out = nhtwist(&[
        "table",
        "--twist",
        "10",
        "--params",
        "beta10_12=1/2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["params"]["beta10_12"], "(1/2)");
    let rel = doc["relations"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["lhs"] == serde_json::json!(["x1", "x2"]))
        .unwrap();
    assert_eq!(rel["plain"], "i*C+^2");
}

#[test]
fn fixed_indices_flag() {
    let out = nhtwist(&["table", "--twist", "13", "--fixed-indices", "1,2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    // m = 1, plane (2, 3): the (2,3) entry vanishes, (1,2) does not
    assert!(text.contains("[x2, x3]* = 0"), "{text}");
    assert_eq!(
        nhtwist(&["table", "--twist", "13", "--fixed-indices", "1,1,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        nhtwist(&["table", "--twist", "15", "--fixed-indices", "1,2,3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_all_json_is_deterministic_modulo_timestamp() {
    let strip = |text: &str| -> String {
        let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
        v.as_object_mut().unwrap().remove("timestamp");
        serde_json::to_string(&v).unwrap()
    };
    // a fast suite twice: byte-identical after dropping the timestamp field
    let a = stdout(&nhtwist(&["verify", "cybe", "--format", "json"]));
    let b = stdout(&nhtwist(&["verify", "cybe", "--format", "json"]));
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn custom_algebra_file_verification() {
    let dir = std::env::temp_dir();
    let good = dir.join("nhtwist-good-algebra.txt");
    std::fs::write(&good, "name heisenberg-like\ndim 1\nbracket K1 H = -i*P1\n").unwrap();
    let out = nhtwist(&["verify", "jacobi", "--algebra-file", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    // a structure-constant fault: [H, F_1] rescaled asymmetrically breaks
    // a rotation-covariance triple and must be named in the report
    let bad = dir.join("nhtwist-bad-algebra.txt");
    let mut text = String::from("name faulty\ndim 2\n");
    text.push_str("bracket M12 K1 = -i*K2\nbracket M12 K2 = i*K1\n");
    text.push_str("bracket M12 F1 = -i*F2\nbracket M12 F2 = i*F1\n");
    text.push_str("bracket K1 H = -i*P1\nbracket K2 H = -i*P2\n");
    text.push_str("bracket H F1 = 3*i*K1\nbracket H F2 = 2*i*K2\n");
    std::fs::write(&bad, text).unwrap();
    let out = nhtwist(&["verify", "jacobi", "--algebra-file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("jacobi("), "{}", stdout(&out));
}

#[test]
fn coproduct_output() {
    let out = nhtwist(&["coproduct", "--gen", "P1", "--twist", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("P1 (x) 1"), "{text}");
    assert!(text.contains("(exact)"));

    let out = nhtwist(&["coproduct", "--gen", "H", "--twist", "11", "--order", "3"]);
    let text = stdout(&out);
    assert!(text.contains("P1 (x) P2"), "{text}");
    assert!(text.contains("(exact)"));

    // order-capped series is reported as truncated, never silently cut
    let out = nhtwist(&["coproduct", "--gen", "P1", "--twist", "15", "--order", "4"]);
    let text = stdout(&out);
    assert!(text.contains("truncated at order 4"), "{text}");
}

#[test]
fn max_order_env_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_nhtwist"))
        .args(["coproduct", "--gen", "P1", "--twist", "15"])
        .env("NHTWIST_MAX_ORDER", "2")
        .output()
        .unwrap();
    assert!(stdout(&out).contains("truncated at order 2"));
    let out = Command::new(env!("CARGO_BIN_EXE_nhtwist"))
        .args(["verify", "cybe"])
        .env("NHTWIST_MAX_ORDER", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn latex_table_output() {
    let out = nhtwist(&[
        "table",
        "--twist",
        "12",
        "--signature",
        "nh+",
        "--format",
        "latex",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\\begin{align}"));
    assert!(text.contains("S_{+}"), "{text}");
    assert!(text.contains("\\beta_{12}^{12}"), "{text}");
}

#[test]
fn scalar_twist_numeric_params() {
    let out = nhtwist(&[
        "table", "--twist", "13", "--params", "beta13=2", "--format", "json",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["params"]["beta13"], "2");
    let rel = doc["relations"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["lhs"] == serde_json::json!(["x1", "x3"]))
        .unwrap();
    assert_eq!(rel["plain"], "4*i*tau*x2*S+");
    // array components fed to a scalar twist are rejected
    let out = nhtwist(&["table", "--twist", "13", "--params", "beta13_12=2"]);
    assert_eq!(out.status.code(), Some(2));
}
