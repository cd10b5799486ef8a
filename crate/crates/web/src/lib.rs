//! JSON-in, JSON-out wrappers for the browser demo.
//!
//! Every function returns a JSON string: the command output on success,
//! `{"error": "..."}` otherwise.

use serde_json::json;
use wasm_bindgen::prelude::*;
use wittforge::api::Output;

fn respond(r: wittforge::Result<Output>) -> String {
    match r {
        Ok(out) => out.json.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn opt(s: &str) -> Option<&str> {
    let s = s.trim();
    (!s.is_empty()).then_some(s)
}

/// Pass an empty `b` for unary operations.
#[wasm_bindgen]
pub fn witt_eval(ring: &str, op: &str, a: &str, b: &str, degree: i32, strategy: &str) -> String {
    respond(wittforge::api::witt_eval(ring, op, a, opt(b), None, degree.into(), opt(strategy).unwrap_or("auto")))
}

#[wasm_bindgen]
pub fn witt_ghost(ring: &str, vec: &str, degree: i32) -> String {
    respond(wittforge::api::witt_ghost(ring, vec, degree.into()))
}

#[wasm_bindgen]
pub fn sigma_classify(ring: &str, v: &str, zeta: &str, gamma: &str) -> String {
    respond(wittforge::api::sigma_classify(ring, v, zeta, opt(gamma)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn ghost_and_eval() {
        let g = parse(witt_ghost("Zmod(2^3)", "[2,1]", 0));
        assert_eq!(g["ring"], "Zmod(2^3)");
        assert_eq!(g["ghost"].as_array().unwrap().len(), 2);
        let m = parse(witt_eval("Zmod(2^2)", "mul", "[3]", "[3]", 0, ""));
        assert!(m.get("error").is_none(), "{m}");
    }

    #[test]
    fn errors_are_json() {
        let v = parse(witt_eval("Zmod(2^2)", "bogus", "[1]", "", 0, "auto"));
        assert!(v["error"].is_string());
        let c = parse(sigma_classify("Zmod(2^1)", "0", "[0,1]", ""));
        assert!(c.get("error").is_none(), "{c}");
    }
}
